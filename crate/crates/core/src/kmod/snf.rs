//! Smith normal form with unimodular transforms.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::ring::{Arith, Int, Ring};

/// `left · input · right = diagonal`, with `diagonal` in Smith form.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: Matrix,
    pub diagonal: Matrix,
    pub right: Matrix,
}

impl SmithForm {
    /// The nonzero diagonal entries `d₁ | d₂ | …`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let n = self.diagonal.nrows().min(self.diagonal.ncols());
        (0..n).map(|i| self.diagonal.get(i, i).clone()).filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form of `m` over `ring`.
///
/// Over ℤ (and ℚ, which shares integer arithmetic) the diagonal is
/// nonnegative with each entry dividing the next. Over 𝔽_p the nonzero
/// diagonal entries are all 1.
pub fn smith_normal_form(m: &Matrix, ring: Ring) -> SmithForm {
    smith(m, ring.arith(), true)
}

/// Invariant factors only, without transforms.
pub(crate) fn invariant_factors(m: &Matrix, arith: Arith) -> Vec<Int> {
    let s = smith(m, arith, false);
    s.invariant_factors()
}

fn smith(m: &Matrix, arith: Arith, track: bool) -> SmithForm {
    let mut a = m.clone().reduced(arith);
    let (rows, cols) = a.shape();
    let mut left = Matrix::identity(if track { rows } else { 0 });
    let mut right = Matrix::identity(if track { cols } else { 0 });
    let n = rows.min(cols);

    let row_op = |a: &mut Matrix, l: &mut Matrix, dst: usize, src: usize, c: &Int| {
        a.add_row_multiple(dst, src, c, arith);
        if track {
            l.add_row_multiple(dst, src, c, arith);
        }
    };
    let col_op = |a: &mut Matrix, r: &mut Matrix, dst: usize, src: usize, c: &Int| {
        a.add_col_multiple(dst, src, c, arith);
        if track {
            r.add_col_multiple(dst, src, c, arith);
        }
    };

    let mut t = 0;
    while t < n {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(pi, t);
        a.swap_cols(pj, t);
        if track {
            left.swap_rows(pi, t);
            right.swap_cols(pj, t);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = quotient(a.get(i, t), a.get(t, t), arith);
                row_op(&mut a, &mut left, i, t, &-q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = quotient(a.get(t, j), a.get(t, t), arith);
                col_op(&mut a, &mut right, j, t, &-q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                // divisibility: a pivot must divide every remaining entry
                let bad = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !remainder_is_zero(a.get(i, j), a.get(t, t), arith))
                });
                match bad {
                    Some(i) => {
                        let one = Int::one();
                        row_op(&mut a, &mut left, t, i, &one);
                    }
                    None => break,
                }
            } else {
                // move the smallest entry of row/column t into the pivot
                let mut best = (t, t);
                for i in t..rows {
                    let v = a.get(i, t);
                    if !v.is_zero() && v.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    let v = a.get(t, j);
                    if !v.is_zero() && v.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap_rows(best.0, t);
                    if track {
                        left.swap_rows(best.0, t);
                    }
                }
                if best.1 != t {
                    a.swap_cols(best.1, t);
                    if track {
                        right.swap_cols(best.1, t);
                    }
                }
            }
        }
        // normalize the unit part of the pivot
        let piv = a.get(t, t).clone();
        let u = match arith {
            Arith::Z if piv.is_negative() => Some(-Int::one()),
            Arith::Fp(_) if !piv.is_one() => arith.inverse(&piv),
            _ => None,
        };
        if let Some(u) = u {
            a.scale_row(t, &u, arith);
            if track {
                left.scale_row(t, &u, arith);
            }
        }
        t += 1;
    }
    SmithForm { left, diagonal: a, right }
}

fn quotient(a: &Int, b: &Int, arith: Arith) -> Int {
    match arith {
        Arith::Z => a.div_floor(b),
        Arith::Fp(_) => {
            let inv = arith.inverse(b).expect("nonzero pivot");
            arith.reduce(&(a * inv))
        }
    }
}

fn remainder_is_zero(a: &Int, b: &Int, arith: Arith) -> bool {
    match arith {
        Arith::Z => a.mod_floor(b).is_zero(),
        Arith::Fp(_) => true,
    }
}
