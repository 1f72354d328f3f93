//! Reference computations written directly from the definitions: plain
//! Gaussian elimination, nested homology of a bicomplex, and brute-force
//! enumeration of homomorphisms and natural transformations.

use cosheaf::diagram::Precosheaf;
use cosheaf::spectral::{Bicomplex, Orientation};
use cosheaf::{Int, Matrix, PresentedModule};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Fp = Vec<Vec<u64>>;

pub fn mod_p(m: &Matrix, p: u64) -> Fp {
    let p = Int::from(p);
    m.rows_iter().map(|r| r.iter().map(|x| u64::try_from(x.mod_floor(&p)).expect("reduced")).collect()).collect()
}

fn inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p−2)
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row echelon form over `F_p`; returns the nonzero rows.
fn echelon(mut m: Fp, cols: usize, p: u64) -> Fp {
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let s = inv(m[r][c], p);
        m[r].iter_mut().for_each(|x| *x = *x * s % p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - f * m[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

pub fn rank_p(m: &Fp, cols: usize, p: u64) -> usize {
    echelon(m.clone(), cols, p).len()
}

/// A basis of the row space.
pub fn row_basis(m: &Fp, cols: usize, p: u64) -> Fp {
    echelon(m.clone(), cols, p)
}

/// A basis of `{x : xM = 0}` for an `r × c` matrix `M`.
pub fn left_kernel(m: &Fp, rows: usize, cols: usize, p: u64) -> Fp {
    let aug: Fp = (0..rows)
        .map(|i| {
            let mut row = m.get(i).cloned().unwrap_or_else(|| vec![0; cols]);
            row.extend((0..rows).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    // eliminate on the first `cols` columns only, then keep rows that vanished there
    let mut m = aug;
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let s = inv(m[r][c], p);
        m[r].iter_mut().for_each(|x| *x = *x * s % p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols + rows {
                    m[i][j] = (m[i][j] + p * p - f * m[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    m.into_iter().skip(r).map(|row| row[cols..].to_vec()).collect()
}

fn mul_p(a: &Fp, b: &Fp, cols: usize, p: u64) -> Fp {
    a.iter().map(|r| (0..cols).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j] % p).sum::<u64>() % p).collect()).collect()
}

/// The maps of a bicomplex over `F_p`, possibly with the two directions
/// exchanged (so that one routine serves both orientations).
struct Grid {
    s_max: usize,
    t_max: usize,
    dim: Vec<Vec<usize>>,
    /// `h[s][t]: X_{s,t} → X_{s−1,t}` for `s ≥ 1`.
    h: Vec<Vec<Fp>>,
    /// `v[s][t]: X_{s,t} → X_{s,t−1}` for `t ≥ 1`.
    v: Vec<Vec<Fp>>,
}

impl Grid {
    fn new(x: &Bicomplex, p: u64, transposed: bool) -> Grid {
        let (s0, t0) = (x.s_max(), x.t_max());
        let dim0 = |s: usize, t: usize| x.entry(s, t).generators();
        let h0 = |s: usize, t: usize| if s >= 1 { mod_p(x.d(s, t).matrix(), p) } else { Vec::new() };
        let v0 = |s: usize, t: usize| if t >= 1 { mod_p(x.delta(s, t).matrix(), p) } else { Vec::new() };
        let (s_max, t_max) = if transposed { (t0, s0) } else { (s0, t0) };
        let at = |s: usize, t: usize| if transposed { (t, s) } else { (s, t) };
        let grid = |f: &dyn Fn(usize, usize) -> Fp| -> Vec<Vec<Fp>> {
            (0..=s_max).map(|s| (0..=t_max).map(|t| f(s, t)).collect()).collect()
        };
        let dim = (0..=s_max).map(|s| (0..=t_max).map(|t| dim0(at(s, t).0, at(s, t).1)).collect()).collect();
        let h = grid(&|s, t| {
            let (a, b) = at(s, t);
            if transposed { v0(a, b) } else { h0(a, b) }
        });
        let v = grid(&|s, t| {
            let (a, b) = at(s, t);
            if transposed { h0(a, b) } else { v0(a, b) }
        });
        Grid { s_max, t_max, dim, h, v }
    }

    /// Vertical cycles at `(s, t)`.
    fn cycles(&self, s: usize, t: usize, p: u64) -> Fp {
        let n = self.dim[s][t];
        if t == 0 {
            return (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        }
        left_kernel(&self.v[s][t], n, self.dim[s][t - 1], p)
    }

    /// Vertical boundaries at `(s, t)`.
    fn boundaries(&self, s: usize, t: usize, p: u64) -> Fp {
        if t == self.t_max {
            return Vec::new();
        }
        row_basis(&self.v[s][t + 1], self.dim[s][t], p)
    }

    /// `dim E²_{s,t}` of the spectral sequence that takes vertical homology
    /// first: `{x : δx = 0, dx ∈ im δ} / (im δ + d(ker δ))`.
    fn e2(&self, s: usize, t: usize, p: u64) -> usize {
        let n = self.dim[s][t];
        let below = if t >= 1 { self.dim[s][t - 1] } else { 0 };
        let left = if s >= 1 { self.dim[s - 1][t] } else { 0 };
        let bnd_left = if s >= 1 { self.boundaries(s - 1, t, p) } else { Vec::new() };
        let cols = below + left;
        // rows (x, y) with xδ = 0 and xd + yB = 0
        let mut m: Fp = (0..n)
            .map(|i| {
                let mut row = if t >= 1 { self.v[s][t][i].clone() } else { Vec::new() };
                if s >= 1 {
                    row.extend(self.h[s][t][i].iter().copied());
                }
                row
            })
            .collect();
        for b in &bnd_left {
            let mut row = vec![0; below];
            row.extend(b.iter().copied());
            m.push(row);
        }
        let numerator = m.len() - rank_p(&m, cols, p);
        let mut den = self.boundaries(s, t, p);
        if s < self.s_max {
            let z = self.cycles(s + 1, t, p);
            den.extend(mul_p(&z, &self.h[s + 1][t], n, p));
        }
        numerator - rank_p(&den, n, p)
    }
}

/// `dim E²_{s,t}` for every entry, by nested homology over `F_p`.
pub fn e2_dims(x: &Bicomplex, p: u64, orientation: Orientation) -> Vec<Vec<usize>> {
    let transposed = orientation == Orientation::Horizontal;
    let g = Grid::new(x, p, transposed);
    (0..=x.s_max())
        .map(|s| {
            (0..=x.t_max())
                .map(|t| if transposed { g.e2(t, s, p) } else { g.e2(s, t, p) })
                .collect()
        })
        .collect()
}

/// Dimensions and boundary matrices `Tot_{n+1} → Tot_n` of the total
/// complex, with `∂ = d + (−1)^s δ` and summands in increasing `s`.
pub fn total(x: &Bicomplex) -> (Vec<usize>, Vec<Vec<Vec<Int>>>) {
    let top = x.s_max() + x.t_max();
    let diag = |n: usize| -> Vec<(usize, usize)> {
        (0..=n.min(x.s_max())).filter(|&s| n - s <= x.t_max()).map(|s| (s, n - s)).collect()
    };
    let dims: Vec<usize> = (0..=top).map(|n| diag(n).iter().map(|&(s, t)| x.entry(s, t).generators()).sum()).collect();
    let offset = |n: usize, at: (usize, usize)| -> usize {
        diag(n).iter().take_while(|&&q| q != at).map(|&(s, t)| x.entry(s, t).generators()).sum()
    };
    let boundaries = (0..top)
        .map(|n| {
            let mut m = vec![vec![Int::zero(); dims[n]]; dims[n + 1]];
            for (s, t) in diag(n + 1) {
                let r0 = offset(n + 1, (s, t));
                let mut put = |src: &Matrix, at: (usize, usize), sign: i64| {
                    let c0 = offset(n, at);
                    for (i, row) in src.rows_iter().enumerate() {
                        for (j, v) in row.iter().enumerate() {
                            m[r0 + i][c0 + j] += v * sign;
                        }
                    }
                };
                if s >= 1 {
                    put(x.d(s, t).matrix(), (s - 1, t), 1);
                }
                if t >= 1 {
                    put(x.delta(s, t).matrix(), (s, t - 1), if s % 2 == 0 { 1 } else { -1 });
                }
            }
            m
        })
        .collect();
    (dims, boundaries)
}

/// `dim H_n(Tot)` over `F_p`.
pub fn total_homology_dims_p(x: &Bicomplex, p: u64) -> Vec<usize> {
    let (dims, bd) = total(x);
    let pi = Int::from(p);
    let ranks: Vec<usize> = bd
        .iter()
        .enumerate()
        .map(|(n, m)| {
            let m: Fp = m.iter().map(|r| r.iter().map(|v| u64::try_from(v.mod_floor(&pi)).unwrap()).collect()).collect();
            rank_p(&m, dims[n], p)
        })
        .collect();
    rank_diff(&dims, &ranks)
}

/// `rank H_n(Tot)` over the rationals.
pub fn total_betti(x: &Bicomplex) -> Vec<usize> {
    let (dims, bd) = total(x);
    let ranks: Vec<usize> = bd.iter().enumerate().map(|(n, m)| rank_q(m, dims[n])).collect();
    rank_diff(&dims, &ranks)
}

/// `dim C_n − rank ∂_{n−1} − rank ∂_n`, where `ranks[n]` is the rank of `C_{n+1} → C_n`.
fn rank_diff(dims: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..dims.len())
        .map(|n| {
            let out = if n >= 1 { ranks[n - 1] } else { 0 };
            let inc = ranks.get(n).copied().unwrap_or(0);
            dims[n] - out - inc
        })
        .collect()
}

/// Rank over `Q` by fraction-free elimination.
pub fn rank_q(m: &[Vec<Int>], cols: usize) -> usize {
    let mut m: Vec<Vec<Int>> = m.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let (a, b) = (m[r][c].clone(), m[i][c].clone());
                let pivot_row = m[r].clone();
                let row = &mut m[i];
                for j in 0..cols {
                    row[j] = &row[j] * &a - &pivot_row[j] * &b;
                }
                let g = row.iter().fold(Int::zero(), |g, x| g.gcd(x));
                if !g.is_zero() && !g.is_one() {
                    row.iter_mut().for_each(|x| *x = &*x / &g);
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant by Bareiss elimination.
pub fn det(m: &Matrix) -> Int {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut a = m.to_rows();
    let (mut sign, mut prev) = (Int::one(), Int::one());
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else { return Int::zero() };
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return Int::one();
    }
    sign * &a[n - 1][n - 1]
}

pub fn is_unimodular(m: &Matrix) -> bool {
    det(m).abs().is_one()
}

fn combine(n: &PresentedModule, coeffs: &[Int], images: &[&Vec<Int>]) -> Vec<Int> {
    let mut out = vec![Int::zero(); n.generators()];
    for (c, img) in coeffs.iter().zip(images) {
        for (o, v) in out.iter_mut().zip(img.iter()) {
            *o += c * v;
        }
    }
    out
}

/// Every homomorphism `m → n`, as the images of the generators of `m`,
/// found by trying all assignments and keeping those that kill each relation.
pub fn all_homs(m: &PresentedModule, n: &PresentedModule, limit: usize) -> Vec<Vec<Vec<Int>>> {
    let elements = n.enumerate_elements(limit).expect("target small enough");
    let g = m.generators();
    let mut out = Vec::new();
    let mut idx = vec![0usize; g];
    loop {
        let images: Vec<&Vec<Int>> = idx.iter().map(|&i| &elements[i]).collect();
        if m.relations().rows_iter().all(|r| n.is_zero_element(&combine(n, r, &images))) {
            out.push(images.into_iter().cloned().collect());
        }
        // odometer
        let mut k = 0;
        loop {
            if k == g {
                return out;
            }
            idx[k] += 1;
            if idx[k] < elements.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `|Nat(a, b)|` by enumerating componentwise homomorphisms and checking
/// naturality square by square, object by object.
pub fn count_nat(a: &Precosheaf, b: &Precosheaf, limit: usize) -> u64 {
    let c = a.category();
    let homs: Vec<Vec<Vec<Vec<Int>>>> = c.objects().map(|o| all_homs(a.value(o), b.value(o), limit)).collect();
    let arrows: Vec<_> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let mut chosen: Vec<usize> = Vec::new();
    fn natural(a: &Precosheaf, b: &Precosheaf, f: usize, alpha_dom: &[Vec<Int>], alpha_cod: &[Vec<Int>]) -> bool {
        let c = a.category();
        let bc = b.value(c.cod(f));
        let af = a.map(f).matrix();
        let bf = b.map(f).matrix();
        (0..a.value(c.dom(f)).generators()).all(|i| {
            let cod_refs: Vec<&Vec<Int>> = alpha_cod.iter().collect();
            let lhs = combine(bc, af.row(i), &cod_refs);
            let rhs = bf.apply(&alpha_dom[i]);
            bc.elements_equal(&lhs, &rhs)
        })
    }
    fn go(
        a: &Precosheaf,
        b: &Precosheaf,
        homs: &[Vec<Vec<Vec<Int>>>],
        arrows: &[usize],
        chosen: &mut Vec<usize>,
    ) -> u64 {
        let c = a.category();
        let o = chosen.len();
        if o == c.num_objects() {
            return 1;
        }
        let mut total = 0;
        for k in 0..homs[o].len() {
            chosen.push(k);
            let ok = arrows.iter().all(|&f| {
                let (d, e) = (c.dom(f), c.cod(f));
                if d.max(e) != o {
                    return true;
                }
                natural(a, b, f, &homs[d][chosen[d]], &homs[e][chosen[e]])
            });
            if ok {
                total += go(a, b, homs, arrows, chosen);
            }
            chosen.pop();
        }
        total
    }
    go(a, b, &homs, &arrows, &mut chosen)
}
