//! Row-echelon forms and submodules of free modules.
//!
//! Over ℤ the echelon form is the row Hermite normal form (positive pivots,
//! entries above a pivot reduced into `[0, pivot)`); over 𝔽_p it is the
//! reduced row echelon form. Both are unique, so two lattices are equal iff
//! their bases are equal.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::ring::{Arith, Int};

/// Result of row-reducing a matrix: `transform · input = form`.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pub form: Matrix,
    pub transform: Option<Matrix>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub(crate) fn echelon(m: &Matrix, arith: Arith, with_transform: bool) -> Echelon {
    let mut a = m.clone().reduced(arith);
    let (rows, cols) = a.shape();
    let mut t = with_transform.then(|| Matrix::identity(rows));
    let mut pivots = Vec::new();
    let mut cur = 0;
    for c in 0..cols {
        if cur == rows {
            break;
        }
        match arith {
            Arith::Z => {
                // Euclid on the column below `cur` until one nonzero entry is left.
                loop {
                    let mut best: Option<usize> = None;
                    for r in cur..rows {
                        let v = a.get(r, c);
                        if !v.is_zero() && best.map_or(true, |b| v.abs() < a.get(b, c).abs()) {
                            best = Some(r);
                        }
                    }
                    let Some(p) = best else { break };
                    let mut done = true;
                    for r in cur..rows {
                        if r == p || a.get(r, c).is_zero() {
                            continue;
                        }
                        let q = a.get(r, c).div_floor(a.get(p, c));
                        let negq = -q;
                        a.add_row_multiple(r, p, &negq, arith);
                        if let Some(t) = t.as_mut() {
                            t.add_row_multiple(r, p, &negq, arith);
                        }
                        if !a.get(r, c).is_zero() {
                            done = false;
                        }
                    }
                    if done {
                        a.swap_rows(p, cur);
                        if let Some(t) = t.as_mut() {
                            t.swap_rows(p, cur);
                        }
                        break;
                    }
                }
                if a.get(cur, c).is_zero() {
                    continue;
                }
                if a.get(cur, c).is_negative() {
                    let m1 = -Int::one();
                    a.scale_row(cur, &m1, arith);
                    if let Some(t) = t.as_mut() {
                        t.scale_row(cur, &m1, arith);
                    }
                }
                let piv = a.get(cur, c).clone();
                for r in 0..cur {
                    let q = a.get(r, c).div_floor(&piv);
                    if !q.is_zero() {
                        let negq = -q;
                        a.add_row_multiple(r, cur, &negq, arith);
                        if let Some(t) = t.as_mut() {
                            t.add_row_multiple(r, cur, &negq, arith);
                        }
                    }
                }
            }
            Arith::Fp(_) => {
                let Some(p) = (cur..rows).find(|&r| !a.get(r, c).is_zero()) else { continue };
                a.swap_rows(p, cur);
                if let Some(t) = t.as_mut() {
                    t.swap_rows(p, cur);
                }
                let inv = arith.inverse(a.get(cur, c)).expect("nonzero field element");
                a.scale_row(cur, &inv, arith);
                if let Some(t) = t.as_mut() {
                    t.scale_row(cur, &inv, arith);
                }
                for r in 0..rows {
                    if r == cur || a.get(r, c).is_zero() {
                        continue;
                    }
                    let negq = -a.get(r, c).clone();
                    a.add_row_multiple(r, cur, &negq, arith);
                    if let Some(t) = t.as_mut() {
                        t.add_row_multiple(r, cur, &negq, arith);
                    }
                }
            }
        }
        pivots.push(c);
        cur += 1;
    }
    Echelon { form: a, transform: t, pivots }
}

/// Rows `x` with `x · m = 0`, as a spanning set (one row per kernel basis
/// vector).
pub(crate) fn left_kernel(m: &Matrix, arith: Arith) -> Matrix {
    let e = echelon(m, arith, true);
    let rank = e.rank();
    let t = e.transform.expect("transform requested");
    t.select_rows(rank..m.nrows())
}

/// Solves `x · m = v` for many right-hand sides against one matrix.
pub(crate) struct LeftSolver {
    span: Lattice,
    lift: Matrix,
    arith: Arith,
}

impl LeftSolver {
    pub fn new(m: &Matrix, arith: Arith) -> LeftSolver {
        let e = echelon(m, arith, true);
        let rank = e.rank();
        let span = Lattice {
            arith: arith.into(),
            dim: m.ncols(),
            basis: e.form.select_rows(0..rank),
            pivots: e.pivots.clone(),
        };
        let lift = e.transform.expect("transform requested").select_rows(0..rank);
        LeftSolver { span, lift, arith }
    }

    /// Some `x` with `x · m = v`, or `None` when `v` is not in the row span.
    pub fn solve(&self, v: &[Int]) -> Option<Vec<Int>> {
        let c = self.span.coords(v)?;
        let x = self.lift.apply(&c);
        Some(x.iter().map(|a| self.arith.reduce(a)).collect())
    }
}

/// A submodule of the free module `R^dim`, stored by its echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    arith: ArithKey,
    dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

// `Arith` is crate-private; keep a hashable copy for `Lattice`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum ArithKey {
    Z,
    Fp(u64),
}

impl From<Arith> for ArithKey {
    fn from(a: Arith) -> Self {
        match a {
            Arith::Z => ArithKey::Z,
            Arith::Fp(p) => ArithKey::Fp(p),
        }
    }
}

impl Lattice {
    pub(crate) fn arith(&self) -> Arith {
        match self.arith {
            ArithKey::Z => Arith::Z,
            ArithKey::Fp(p) => Arith::Fp(p),
        }
    }

    /// Span of the rows of `gens` (which must have `dim` columns).
    pub(crate) fn span(gens: &Matrix, dim: usize, arith: Arith) -> Lattice {
        assert_eq!(gens.ncols(), dim, "generator width");
        let e = echelon(gens, arith, false);
        let rank = e.rank();
        Lattice { arith: arith.into(), dim, basis: e.form.select_rows(0..rank), pivots: e.pivots }
    }

    pub(crate) fn zero(dim: usize, arith: Arith) -> Lattice {
        Lattice { arith: arith.into(), dim, basis: Matrix::zeros(0, dim), pivots: Vec::new() }
    }

    pub(crate) fn full(dim: usize, arith: Arith) -> Lattice {
        Lattice { arith: arith.into(), dim, basis: Matrix::identity(dim), pivots: (0..dim).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    /// Echelon basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.dim);
        let arith = self.arith();
        let mut rest: Vec<Int> = v.iter().map(|x| arith.reduce(x)).collect();
        let mut out = Vec::with_capacity(self.rank());
        for (i, &pc) in self.pivots.iter().enumerate() {
            let piv = self.basis.get(i, pc);
            let x = &rest[pc];
            let c = match arith {
                Arith::Z => {
                    let (q, r) = x.div_rem(piv);
                    if !r.is_zero() {
                        return None;
                    }
                    q
                }
                // pivots are 1 over a field
                Arith::Fp(_) => x.clone(),
            };
            if !c.is_zero() {
                for (j, r) in rest.iter_mut().enumerate() {
                    let b = self.basis.get(i, j);
                    if !b.is_zero() {
                        *r -= &c * b;
                        arith.reduce_in_place(r);
                    }
                }
            }
            out.push(c);
        }
        rest.iter().all(Zero::is_zero).then_some(out)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_all(&self, m: &Matrix) -> bool {
        m.rows_iter().all(|r| self.contains(r))
    }

    pub fn is_subset_of(&self, other: &Lattice) -> bool {
        other.contains_all(&self.basis)
    }

    /// Coordinates of each row of `m`; `None` if some row is outside.
    pub fn coords_matrix(&self, m: &Matrix) -> Option<Matrix> {
        let rows: Option<Vec<Vec<Int>>> = m.rows_iter().map(|r| self.coords(r)).collect();
        rows.map(|rows| Matrix::from_rows(rows, self.rank()))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        Lattice::span(&Matrix::vstack(&[&self.basis, &other.basis], self.dim), self.dim, self.arith())
    }

    pub fn add_rows(&self, rows: &Matrix) -> Lattice {
        Lattice::span(&Matrix::vstack(&[&self.basis, rows], self.dim), self.dim, self.arith())
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let arith = self.arith();
        let stacked = Matrix::vstack(&[&self.basis, &other.basis], self.dim);
        let k = left_kernel(&stacked, arith);
        let a = k.block(0, 0, k.nrows(), self.rank());
        Lattice::span(&a.mul(&self.basis).reduced(arith), self.dim, arith)
    }

    /// `{x ∈ R^rows(map) : x · map ∈ target}`.
    pub fn preimage(map: &Matrix, target: &Lattice) -> Lattice {
        assert_eq!(map.ncols(), target.dim);
        let arith = target.arith();
        let n = map.nrows();
        let stacked = Matrix::vstack(&[map, &target.basis], target.dim);
        let k = left_kernel(&stacked, arith);
        Lattice::span(&k.block(0, 0, k.nrows(), n), n, arith)
    }

    /// Image `{x · map : x ∈ self}` inside `R^cols(map)`.
    pub fn image(&self, map: &Matrix) -> Lattice {
        let arith = self.arith();
        Lattice::span(&self.basis.mul(map).reduced(arith), map.ncols(), arith)
    }

    /// `(L ⊗ ℚ) ∩ ℤ^dim`; the identity over 𝔽_p.
    pub fn saturation(&self) -> Lattice {
        let arith = self.arith();
        if arith != Arith::Z || self.rank() == self.dim || self.rank() == 0 {
            return self.clone();
        }
        // orthogonal complement, then its complement
        let perp = left_kernel(&self.basis.transpose(), arith);
        let back = left_kernel(&perp.transpose(), arith);
        Lattice::span(&back, self.dim, arith)
    }
}
