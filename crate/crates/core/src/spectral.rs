//! First-quadrant bicomplexes, their total complex, and the two spectral
//! sequences with explicit pages.
//!
//! A bicomplex has entries `X_{s,t}` for `0 ≤ s ≤ S`, `0 ≤ t ≤ T`, horizontal
//! maps `d: X_{s,t} → X_{s−1,t}` and vertical maps `δ: X_{s,t} → X_{s,t−1}`
//! with commuting squares. The sign lives in the total differential:
//! `∂ ι_{s,t} = ι_{s−1,t} d + (−1)^s ι_{s,t−1} δ`.
//!
//! Both spectral sequences are spectral sequences of a filtered complex:
//! the vertical one filters `Tot` by `s` (so `E⁰ = (X, δ)`), the horizontal
//! one by `t` (so `E⁰ = (X, d)`). Page entries are the explicit subquotients
//!
//! ```text
//! A^r_p = { x ∈ F_p : ∂x ∈ F_{p−r} },   E^r_p = A^r_p / (A^{r−1}_{p−1} + ∂A^{r−1}_{p+r−1})
//! ```
//!
//! computed as lattices inside each total degree.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::cech::{cech_chain_complex, cech_chain_map, CechError, ChainComplex};
use crate::fincat::Cover;
use crate::kmod::{block_map, direct_sum, sign_of, subquotient, CanonicalForm, DirectSum, Lattice, Matrix, ModuleError, ModuleMap, PresentedModule, Ring};
use crate::satellite::Resolution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("bicomplex shape mismatch: {0}")]
    Shape(String),
    #[error("{direction} differential squares to a nonzero map at ({s},{t})")]
    NotAComplex { direction: &'static str, s: usize, t: usize },
    #[error("square at ({s},{t}) does not commute")]
    NotCommuting { s: usize, t: usize },
    #[error("{orientation:?} spectral sequence disagrees with H_{n}(Tot): {detail}")]
    Convergence { orientation: Orientation, n: usize, detail: String },
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Cech(#[from] CechError),
}

/// Which differential is taken first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `E⁰ = (X, δ)`, `d^r` of bidegree `(−r, r−1)`, filtration by `s`.
    Vertical,
    /// `E⁰ = (X, d)`, `d^r` of bidegree `(r−1, −r)`, filtration by `t`.
    Horizontal,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Vertical, Orientation::Horizontal];

    fn filtration_degree(self, s: usize, t: usize) -> usize {
        match self {
            Orientation::Vertical => s,
            Orientation::Horizontal => t,
        }
    }

    fn position(self, p: usize, n: usize) -> (usize, usize) {
        match self {
            Orientation::Vertical => (p, n - p),
            Orientation::Horizontal => (n - p, p),
        }
    }
}

/// A bicomplex with entries `X_{s,t}` for `0 ≤ s ≤ S`, `0 ≤ t ≤ T`.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    ring: Ring,
    entries: Vec<Vec<PresentedModule>>,
    /// `horizontal[s−1][t] = d: X_{s,t} → X_{s−1,t}`.
    horizontal: Vec<Vec<ModuleMap>>,
    /// `vertical[s][t−1] = δ: X_{s,t} → X_{s,t−1}`.
    vertical: Vec<Vec<ModuleMap>>,
}

impl Bicomplex {
    /// `entries[s][t]`, `horizontal[s−1][t]` and `vertical[s][t−1]`; the
    /// entries form a nonempty rectangle.
    pub fn new(
        ring: Ring,
        entries: Vec<Vec<PresentedModule>>,
        horizontal: Vec<Vec<ModuleMap>>,
        vertical: Vec<Vec<ModuleMap>>,
    ) -> Result<Bicomplex, SpectralError> {
        let x = Bicomplex { ring, entries, horizontal, vertical };
        x.check()?;
        Ok(x)
    }

    /// The zero bicomplex on `(S+1) × (T+1)` entries.
    pub fn zero(ring: Ring, s_max: usize, t_max: usize) -> Bicomplex {
        let z = PresentedModule::zero(ring);
        let zm = ModuleMap::zero(&z, &z);
        Bicomplex {
            ring,
            entries: vec![vec![z.clone(); t_max + 1]; s_max + 1],
            horizontal: vec![vec![zm.clone(); t_max + 1]; s_max],
            vertical: vec![vec![zm; t_max]; s_max + 1],
        }
    }

    /// The complex placed in row `t = 0`.
    pub fn single_row(c: &ChainComplex) -> Bicomplex {
        Bicomplex {
            ring: c.ring(),
            entries: c.modules().iter().map(|m| vec![m.clone()]).collect(),
            horizontal: (0..c.top()).map(|s| vec![c.boundary(s).clone()]).collect(),
            vertical: vec![Vec::new(); c.top() + 1],
        }
    }

    /// The complex placed in column `s = 0`.
    pub fn single_column(c: &ChainComplex) -> Bicomplex {
        Bicomplex {
            ring: c.ring(),
            entries: vec![c.modules().to_vec()],
            horizontal: Vec::new(),
            vertical: vec![(0..c.top()).map(|t| c.boundary(t).clone()).collect()],
        }
    }

    /// `X_{s,t} = Č_s(𝒰, P_t)` for a resolution `P_• → A`, with `d` the Čech
    /// boundary and `δ` induced by the resolution differentials.
    pub fn cech_of_resolution(cover: &Cover, res: &Resolution, s_max: usize) -> Result<Bicomplex, SpectralError> {
        let columns: Vec<ChainComplex> =
            res.levels.iter().map(|p| cech_chain_complex(cover, p, s_max)).collect::<Result<_, _>>()?;
        let maps: Vec<Vec<ModuleMap>> =
            res.differentials.iter().map(|d| cech_chain_map(cover, d, s_max)).collect::<Result<_, _>>()?;
        let t_max = res.depth();
        let entries = (0..=s_max).map(|s| (0..=t_max).map(|t| columns[t].module(s).clone()).collect()).collect();
        let horizontal = (1..=s_max).map(|s| (0..=t_max).map(|t| columns[t].boundary(s - 1).clone()).collect()).collect();
        let vertical = (0..=s_max).map(|s| (1..=t_max).map(|t| maps[t - 1][s].clone()).collect()).collect();
        Bicomplex::new(res.target.ring(), entries, horizontal, vertical)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Largest `s` index.
    pub fn s_max(&self) -> usize {
        self.entries.len() - 1
    }

    /// Largest `t` index.
    pub fn t_max(&self) -> usize {
        self.entries[0].len() - 1
    }

    pub fn entry(&self, s: usize, t: usize) -> &PresentedModule {
        &self.entries[s][t]
    }

    /// `d: X_{s,t} → X_{s−1,t}`, for `s ≥ 1`.
    pub fn d(&self, s: usize, t: usize) -> &ModuleMap {
        &self.horizontal[s - 1][t]
    }

    /// `δ: X_{s,t} → X_{s,t−1}`, for `t ≥ 1`.
    pub fn delta(&self, s: usize, t: usize) -> &ModuleMap {
        &self.vertical[s][t - 1]
    }

    /// Shapes, well-definedness, `d∘d = 0`, `δ∘δ = 0` and `dδ = δd`.
    pub fn check(&self) -> Result<(), SpectralError> {
        let shape = |m: String| Err(SpectralError::Shape(m));
        if self.entries.is_empty() || self.entries[0].is_empty() {
            return shape("no entries".into());
        }
        let (s_max, t_max) = (self.s_max(), self.t_max());
        if self.entries.iter().any(|col| col.len() != t_max + 1) {
            return shape("entries are not rectangular".into());
        }
        if self.horizontal.len() != s_max || self.horizontal.iter().any(|c| c.len() != t_max + 1) {
            return shape("horizontal maps do not fit the entries".into());
        }
        if self.vertical.len() != s_max + 1 || self.vertical.iter().any(|c| c.len() != t_max) {
            return shape("vertical maps do not fit the entries".into());
        }
        for s in 0..=s_max {
            for t in 0..=t_max {
                if self.entries[s][t].ring() != self.ring {
                    return Err(ModuleError::RingMismatch(self.ring, self.entries[s][t].ring()).into());
                }
                let ends = |m: &ModuleMap, a: &PresentedModule, b: &PresentedModule| {
                    m.domain().same_presentation(a) && m.codomain().same_presentation(b)
                };
                if s > 0 && !ends(self.d(s, t), &self.entries[s][t], &self.entries[s - 1][t]) {
                    return shape(format!("d at ({s},{t}) has the wrong ends"));
                }
                if t > 0 && !ends(self.delta(s, t), &self.entries[s][t], &self.entries[s][t - 1]) {
                    return shape(format!("δ at ({s},{t}) has the wrong ends"));
                }
                for m in [(s > 0).then(|| self.d(s, t)), (t > 0).then(|| self.delta(s, t))].into_iter().flatten() {
                    if let Some(relation) = m.ill_defined_relation() {
                        return Err(ModuleError::IllDefined { relation }.into());
                    }
                }
                if s > 1 && !self.d(s, t).then(self.d(s - 1, t))?.is_zero() {
                    return Err(SpectralError::NotAComplex { direction: "horizontal", s, t });
                }
                if t > 1 && !self.delta(s, t).then(self.delta(s, t - 1))?.is_zero() {
                    return Err(SpectralError::NotAComplex { direction: "vertical", s, t });
                }
                if s > 0 && t > 0 {
                    let a = self.d(s, t).then(self.delta(s - 1, t))?;
                    let b = self.delta(s, t).then(self.d(s, t - 1))?;
                    if !a.equals(&b) {
                        return Err(SpectralError::NotCommuting { s, t });
                    }
                }
            }
        }
        Ok(())
    }

    /// Entries `(s, t)` of total degree `n`, in increasing `s`.
    fn diagonal(&self, n: usize) -> Vec<(usize, usize)> {
        (0..=n.min(self.s_max())).filter(|&s| n - s <= self.t_max()).map(|s| (s, n - s)).collect()
    }
}

/// `Tot_n = ⊕_{s+t=n} X_{s,t}` with the summands in increasing `s`.
struct TotalLayout {
    diagonals: Vec<Vec<(usize, usize)>>,
    sums: Vec<DirectSum>,
}

fn layout(x: &Bicomplex) -> TotalLayout {
    // one zero degree above the support, so every H_n(Tot) is defined
    let top = x.s_max() + x.t_max() + 1;
    let diagonals: Vec<Vec<(usize, usize)>> = (0..=top).map(|n| x.diagonal(n)).collect();
    let sums = diagonals
        .iter()
        .map(|d| direct_sum(x.ring, &d.iter().map(|&(s, t)| x.entry(s, t).clone()).collect::<Vec<_>>()).expect("one ring"))
        .collect();
    TotalLayout { diagonals, sums }
}

/// The total complex, in degrees `0..=S+T+1` (the last one zero).
pub fn total_complex(x: &Bicomplex) -> Result<ChainComplex, SpectralError> {
    Ok(total_with_layout(x)?.0)
}

fn total_with_layout(x: &Bicomplex) -> Result<(ChainComplex, TotalLayout), SpectralError> {
    x.check()?;
    let lay = layout(x);
    let top = lay.diagonals.len() - 1;
    let boundaries = (0..top)
        .map(|n| {
            let src = &lay.diagonals[n + 1];
            let dst = &lay.diagonals[n];
            let at = |p: (usize, usize)| dst.iter().position(|&q| q == p);
            let mut blocks = Vec::new();
            for (i, &(s, t)) in src.iter().enumerate() {
                if s > 0 {
                    if let Some(j) = at((s - 1, t)) {
                        blocks.push((i, j, x.d(s, t).matrix().clone(), 1));
                    }
                }
                if t > 0 {
                    if let Some(j) = at((s, t - 1)) {
                        blocks.push((i, j, x.delta(s, t).matrix().clone(), sign_of(s)));
                    }
                }
            }
            block_map(&lay.sums[n + 1], &lay.sums[n], blocks)
        })
        .collect();
    let modules = lay.sums.iter().map(|s| s.module.clone()).collect();
    Ok((ChainComplex::new(x.ring, modules, boundaries)?, lay))
}

/// `d^r` out of the entry `source`.
#[derive(Clone, Debug)]
pub struct PageDifferential {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub map: ModuleMap,
}

/// One page `E^r` of a spectral sequence.
#[derive(Clone, Debug)]
pub struct SpectralPage {
    pub r: usize,
    pub orientation: Orientation,
    /// `entries[s][t]`.
    pub entries: Vec<Vec<PresentedModule>>,
    /// The nonzero-target differentials, at most one per source entry.
    pub differentials: Vec<PageDifferential>,
}

/// A page as grids of canonical forms, for export.
#[derive(Clone, Debug, Serialize)]
pub struct PageDump {
    pub r: usize,
    pub orientation: Orientation,
    pub entries: Vec<Vec<CanonicalForm>>,
    pub differentials: Vec<DifferentialDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialDump {
    pub source: (usize, usize),
    pub target: (usize, usize),
    pub matrix: Vec<Vec<String>>,
}

impl SpectralPage {
    pub fn entry(&self, s: usize, t: usize) -> &PresentedModule {
        &self.entries[s][t]
    }

    pub fn differential_from(&self, s: usize, t: usize) -> Option<&PageDifferential> {
        self.differentials.iter().find(|d| d.source == (s, t))
    }

    pub fn differential_into(&self, s: usize, t: usize) -> Option<&PageDifferential> {
        self.differentials.iter().find(|d| d.target == (s, t))
    }

    /// `d^r ∘ d^r = 0` everywhere; returns the first offending source.
    pub fn check(&self) -> Result<(), (usize, usize)> {
        for d in &self.differentials {
            if let Some(e) = self.differential_from(d.target.0, d.target.1) {
                if !d.map.then(&e.map).map(|m| m.is_zero()).unwrap_or(false) {
                    return Err(d.source);
                }
            }
        }
        Ok(())
    }

    /// `ker d^r / im d^r` at `(s, t)`.
    pub fn homology(&self, s: usize, t: usize) -> PresentedModule {
        let m = &self.entries[s][t];
        let d_in = self.differential_into(s, t).map(|d| d.map.clone());
        let d_out = self.differential_from(s, t).map(|d| d.map.clone());
        let zero = PresentedModule::zero(m.ring());
        let d_in = d_in.unwrap_or_else(|| ModuleMap::zero(&zero, m));
        let d_out = d_out.unwrap_or_else(|| ModuleMap::zero(m, &zero));
        crate::kmod::homology_at(&d_in, &d_out).expect("d^r ∘ d^r = 0")
    }

    pub fn dump(&self) -> PageDump {
        PageDump {
            r: self.r,
            orientation: self.orientation,
            entries: self.entries.iter().map(|c| c.iter().map(|m| m.canonicalize()).collect()).collect(),
            differentials: self
                .differentials
                .iter()
                .map(|d| DifferentialDump {
                    source: d.source,
                    target: d.target,
                    matrix: d.map.matrix().rows_iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect(),
                })
                .collect(),
        }
    }
}

/// The filtered total complex and a cache of the lattices `A^r_p`.
struct Filtered<'a> {
    x: &'a Bicomplex,
    orientation: Orientation,
    tot: ChainComplex,
    lay: TotalLayout,
    cache: HashMap<(i64, i64, usize), Lattice>,
}

impl<'a> Filtered<'a> {
    fn new(x: &'a Bicomplex, orientation: Orientation) -> Result<Filtered<'a>, SpectralError> {
        let (tot, lay) = total_with_layout(x)?;
        Ok(Filtered { x, orientation, tot, lay, cache: HashMap::new() })
    }

    fn top(&self) -> usize {
        self.lay.diagonals.len() - 1
    }

    fn dim(&self, n: usize) -> usize {
        self.lay.sums[n].module.generators()
    }

    /// `F_p Tot_n`, including the relations of `Tot_n`.
    fn filt(&self, p: i64, n: usize) -> Lattice {
        let sum = &self.lay.sums[n];
        let rel = sum.module.relation_lattice().clone();
        if p < 0 {
            return rel;
        }
        let mut rows = Vec::new();
        for (i, &(s, t)) in self.lay.diagonals[n].iter().enumerate() {
            if self.orientation.filtration_degree(s, t) as i64 <= p {
                let off = sum.offsets[i];
                for k in 0..self.x.entry(s, t).generators() {
                    let mut v = vec![0.into(); self.dim(n)];
                    v[off + k] = 1.into();
                    rows.push(v);
                }
            }
        }
        rel.add_rows(&Matrix::from_rows(rows, self.dim(n)))
    }

    /// `A^r_p` in degree `n`; `A^{−1}_p = F_p`.
    fn a(&mut self, r: i64, p: i64, n: usize) -> Lattice {
        if let Some(l) = self.cache.get(&(r, p, n)) {
            return l.clone();
        }
        let f = self.filt(p, n);
        let l = if r < 0 || n == 0 {
            f
        } else {
            let lower = self.filt(p - r, n - 1);
            f.intersect(&Lattice::preimage(self.tot.boundary(n - 1).matrix(), &lower))
        };
        self.cache.insert((r, p, n), l.clone());
        l
    }

    /// `(A^r_p, A^{r−1}_{p−1} + ∂A^{r−1}_{p+r−1})` in degree `n`.
    fn entry_lattices(&mut self, r: i64, p: i64, n: usize) -> (Lattice, Lattice) {
        let top = self.a(r, p, n);
        let mut bottom = self.a(r - 1, p - 1, n);
        if n < self.top() {
            let above = self.a(r - 1, p + r - 1, n + 1);
            bottom = bottom.sum(&above.image(self.tot.boundary(n).matrix()));
        }
        (top, bottom)
    }

    fn page(&mut self, r: usize) -> SpectralPage {
        let (s_max, t_max) = (self.x.s_max(), self.x.t_max());
        let ring = self.x.ring;
        let mut tops = vec![vec![None; t_max + 1]; s_max + 1];
        let mut entries = vec![vec![PresentedModule::zero(ring); t_max + 1]; s_max + 1];
        for s in 0..=s_max {
            for t in 0..=t_max {
                let (n, p) = (s + t, self.orientation.filtration_degree(s, t));
                let (top, bottom) = self.entry_lattices(r as i64, p as i64, n);
                entries[s][t] = subquotient(ring, &top, &bottom).0;
                tops[s][t] = Some(top);
            }
        }
        let mut differentials = Vec::new();
        for s in 0..=s_max {
            for t in 0..=t_max {
                let (n, p) = (s + t, self.orientation.filtration_degree(s, t));
                if n == 0 || p < r || p - r > n - 1 {
                    continue;
                }
                let (s2, t2) = self.orientation.position(p - r, n - 1);
                if s2 > s_max || t2 > t_max {
                    continue;
                }
                let src = tops[s][t].as_ref().expect("filled");
                let dst = tops[s2][t2].as_ref().expect("filled");
                let images = src.basis().mul(self.tot.boundary(n - 1).matrix());
                let m = dst.coords_matrix(&images).expect("∂ A^r_p ⊆ A^r_{p−r}");
                let map = ModuleMap::new_unchecked(entries[s][t].clone(), entries[s2][t2].clone(), m);
                differentials.push(PageDifferential { source: (s, t), target: (s2, t2), map });
            }
        }
        SpectralPage { r, orientation: self.orientation, entries, differentials }
    }

    /// A page index past which every entry is constant.
    fn stable_page(&self) -> usize {
        self.x.s_max() + self.x.t_max() + 2
    }
}

fn same_lattice(a: &Lattice, b: &Lattice) -> bool {
    a.is_subset_of(b) && b.is_subset_of(a)
}

/// Pages `E^0, …, E^{r_max}`.
pub fn pages(x: &Bicomplex, orientation: Orientation, r_max: usize) -> Result<Vec<SpectralPage>, SpectralError> {
    let mut f = Filtered::new(x, orientation)?;
    Ok((0..=r_max).map(|r| f.page(r)).collect())
}

/// `E^∞` with, for each entry, the first page `r ≥ 1` from which the entry
/// no longer changes.
#[derive(Clone, Debug)]
pub struct Abutment {
    pub page: SpectralPage,
    /// `stabilization[s][t]`.
    pub stabilization: Vec<Vec<usize>>,
}

/// The limit page and per-entry stabilization indices.
pub fn e_infinity(x: &Bicomplex, orientation: Orientation) -> Result<Abutment, SpectralError> {
    let mut f = Filtered::new(x, orientation)?;
    let r_inf = f.stable_page();
    let pages: Vec<SpectralPage> = (0..=r_inf).map(|r| f.page(r)).collect();
    let (s_max, t_max) = (x.s_max(), x.t_max());
    // E^r → E^{r+1} is an isomorphism exactly when d^r into and out of the
    // entry vanish
    let quiet = |page: &SpectralPage, s: usize, t: usize| {
        let zero = |d: Option<&PageDifferential>| d.is_none_or(|d| d.map.is_zero());
        zero(page.differential_from(s, t)) && zero(page.differential_into(s, t))
    };
    let mut stabilization = vec![vec![0; t_max + 1]; s_max + 1];
    for (s, row) in stabilization.iter_mut().enumerate() {
        for (t, slot) in row.iter_mut().enumerate() {
            let mut r = r_inf;
            while r > 1 && quiet(&pages[r - 1], s, t) {
                r -= 1;
            }
            *slot = r;
        }
    }
    let page = pages.into_iter().next_back().expect("r_inf ≥ 0");
    Ok(Abutment { page: SpectralPage { r: r_inf, ..page }, stabilization })
}

/// `H_n(Tot)` with the induced filtration and its graded pieces.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeConvergence {
    pub n: usize,
    pub homology: CanonicalForm,
    /// `F_p H_n` for `p = 0..=n`.
    pub filtration: Vec<CanonicalForm>,
    /// `F_p H_n / F_{p−1} H_n`, matched against `E^∞` at filtration degree `p`.
    pub quotients: Vec<CanonicalForm>,
    pub e_infinity: Vec<CanonicalForm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationConvergence {
    pub orientation: Orientation,
    pub degrees: Vec<DegreeConvergence>,
    pub stabilization: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub ring: Ring,
    pub orientations: Vec<OrientationConvergence>,
}

/// Checks, in both orientations and every total degree, that the
/// filtration of `H_n(Tot)` by the images of `H_n(F_p)` has successive
/// quotients isomorphic to the `E^∞` entries (and, over a field, that
/// dimensions add up).
pub fn verify_convergence(x: &Bicomplex) -> Result<ConvergenceReport, SpectralError> {
    let ring = x.ring;
    let mut orientations = Vec::new();
    for orientation in Orientation::BOTH {
        let inf = e_infinity(x, orientation)?;
        let f = Filtered::new(x, orientation)?;
        let mut degrees = Vec::new();
        for n in 0..f.top() {
            let mismatch = |detail: String| SpectralError::Convergence { orientation, n, detail };
            let h = f.tot.homology(n)?;
            let cycles = if n == 0 {
                Lattice::full(f.dim(0), ring.arith())
            } else {
                f.tot.boundary(n - 1).kernel_lattice()
            };
            let boundaries = f.tot.boundary(n).image_lattice();
            let stage = |p: i64| cycles.intersect(&f.filt(p, n)).sum(&boundaries);
            let mut filtration = Vec::new();
            let mut quotients = Vec::new();
            let mut e_inf = Vec::new();
            for p in 0..=n {
                let (hi, lo) = (stage(p as i64), stage(p as i64 - 1));
                filtration.push(subquotient(ring, &hi, &boundaries).0.canonicalize());
                let q = subquotient(ring, &lo.sum(&hi), &lo).0.canonicalize();
                let (s, t) = orientation.position(p, n);
                let e = if s <= x.s_max() && t <= x.t_max() {
                    inf.page.entry(s, t).canonicalize()
                } else {
                    CanonicalForm::zero()
                };
                if q != e {
                    return Err(mismatch(format!("quotient {q} at p = {p} but E^∞ = {e}")));
                }
                quotients.push(q);
                e_inf.push(e);
            }
            let homology = h.module.canonicalize();
            if !same_lattice(&stage(n as i64), &cycles.sum(&boundaries)) {
                return Err(mismatch("the filtration does not exhaust H_n".into()));
            }
            if ring.is_field() {
                let total: usize = e_inf.iter().map(|c| c.free_rank).sum();
                if total != homology.free_rank {
                    return Err(mismatch(format!("Σ dim E^∞ = {total} but dim H_n = {}", homology.free_rank)));
                }
            }
            degrees.push(DegreeConvergence { n, homology, filtration, quotients, e_infinity: e_inf });
        }
        orientations.push(OrientationConvergence { orientation, degrees, stabilization: inf.stabilization });
    }
    Ok(ConvergenceReport { ring, orientations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmod::Int;

    const Z: Ring = Ring::Integers;

    fn free(n: usize) -> PresentedModule {
        PresentedModule::free(Z, n)
    }

    fn map(d: &PresentedModule, c: &PresentedModule, rows: &[&[i64]]) -> ModuleMap {
        ModuleMap::new(d.clone(), c.clone(), Matrix::from_i64(rows, c.generators())).unwrap()
    }

    fn chain(mods: Vec<PresentedModule>, maps: Vec<ModuleMap>) -> ChainComplex {
        ChainComplex::new(Z, mods, maps).unwrap()
    }

    /// `a` at (2,0), `b` at (1,1), `c` at (0,1), `e` at (1,0):
    /// `d a = e`, `δ b = e`, `d b = c` — the smallest staircase with `d² ≠ 0`.
    fn staircase() -> Bicomplex {
        let (z, o) = (free(0), free(1));
        let entries = vec![vec![z.clone(), o.clone()], vec![o.clone(), o.clone()], vec![o.clone(), z.clone()]];
        let horizontal = vec![
            vec![map(&o, &z, &[&[]]), map(&o, &o, &[&[1]])],
            vec![map(&o, &o, &[&[1]]), ModuleMap::zero(&z, &o)],
        ];
        let vertical = vec![vec![ModuleMap::zero(&o, &z)], vec![map(&o, &o, &[&[1]])], vec![ModuleMap::zero(&z, &o)]];
        Bicomplex::new(Z, entries, horizontal, vertical).unwrap()
    }

    #[test]
    fn total_of_a_row_is_the_row() {
        let z = free(1);
        let c = chain(vec![z.clone(), z.clone(), free(0)], vec![map(&z, &z, &[&[2]]), ModuleMap::zero(&free(0), &z)]);
        let tot = total_complex(&Bicomplex::single_row(&c)).unwrap();
        assert_eq!(tot.homology(0).unwrap().module.canonicalize().torsion_factors, vec![Int::from(2)]);
        assert!(tot.homology(1).unwrap().module.is_zero());
        let tot = total_complex(&Bicomplex::single_column(&c)).unwrap();
        assert_eq!(tot.boundary(0).matrix(), &Matrix::from_i64(&[&[2]], 1));
    }

    #[test]
    fn sign_rule_on_a_square() {
        let z = free(1);
        let id = map(&z, &z, &[&[1]]);
        let x = Bicomplex::new(
            Z,
            vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
            vec![vec![id.clone(), id.clone()]],
            vec![vec![id.clone()], vec![id.clone()]],
        )
        .unwrap();
        let tot = total_complex(&x).unwrap();
        // ∂(x_{1,1}) = x_{0,1} − x_{1,0}
        assert_eq!(tot.boundary(1).matrix(), &Matrix::from_i64(&[&[1, -1]], 2));
        assert_eq!(tot.boundary(0).matrix(), &Matrix::from_i64(&[&[1], &[1]], 1));
        for n in 0..3 {
            assert!(tot.homology(n).unwrap().module.is_zero(), "degree {n}");
        }
    }

    #[test]
    fn broken_square_is_rejected() {
        let z = free(1);
        let err = Bicomplex::new(
            Z,
            vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
            vec![vec![map(&z, &z, &[&[1]]), map(&z, &z, &[&[2]])]],
            vec![vec![map(&z, &z, &[&[1]])], vec![map(&z, &z, &[&[1]])]],
        )
        .unwrap_err();
        assert_eq!(err, SpectralError::NotCommuting { s: 1, t: 1 });
    }

    #[test]
    fn single_entry_is_constant() {
        let m = PresentedModule::from_factors(Z, &[3, 0]);
        let x = Bicomplex::new(Z, vec![vec![m.clone()]], vec![], vec![vec![]]).unwrap();
        for page in pages(&x, Orientation::Vertical, 3).unwrap() {
            assert!(page.entry(0, 0).is_isomorphic(&m));
            assert!(page.differentials.is_empty());
        }
        let inf = e_infinity(&x, Orientation::Horizontal).unwrap();
        assert_eq!(inf.stabilization, vec![vec![1]]);
        assert!(e_infinity(&Bicomplex::zero(Z, 2, 2), Orientation::Vertical).unwrap().page.entries.iter().flatten().all(|m| m.is_zero()));
    }

    #[test]
    fn staircase_has_a_second_differential() {
        let x = staircase();
        let ps = pages(&x, Orientation::Vertical, 3).unwrap();
        // E¹: vertical homology keeps a at (2,0) and c at (0,1)
        let e1: Vec<(usize, usize)> =
            (0..3).flat_map(|s| (0..2).map(move |t| (s, t))).filter(|&(s, t)| !ps[1].entry(s, t).is_zero()).collect();
        assert_eq!(e1, vec![(0, 1), (2, 0)]);
        assert!(ps[1].differential_from(2, 0).unwrap().map.is_zero());
        let d2 = ps[2].differential_from(2, 0).unwrap();
        assert_eq!(d2.target, (0, 1));
        assert!(d2.map.is_isomorphism());
        assert!(ps[3].entries.iter().flatten().all(|m| m.is_zero()));
        let inf = e_infinity(&x, Orientation::Vertical).unwrap();
        assert_eq!(inf.stabilization[2][0], 3);
        assert_eq!(inf.stabilization[0][1], 3);
        verify_convergence(&x).unwrap();
    }

    #[test]
    fn next_page_is_homology_of_the_last() {
        let x = staircase();
        for o in Orientation::BOTH {
            let ps = pages(&x, o, 4).unwrap();
            for r in 0..4 {
                ps[r].check().unwrap();
                for s in 0..3 {
                    for t in 0..2 {
                        assert!(ps[r].homology(s, t).is_isomorphic(ps[r + 1].entry(s, t)), "{o:?} r={r} ({s},{t})");
                    }
                }
            }
        }
    }

    #[test]
    fn torsion_filtration_over_the_integers() {
        // d = 2 in the bottom row, δ = 2 in the left column, zero corner
        let (z, o) = (free(0), free(1));
        let two = map(&o, &o, &[&[2]]);
        let x = Bicomplex::new(
            Z,
            vec![vec![o.clone(), o.clone()], vec![o.clone(), z.clone()]],
            vec![vec![two.clone(), ModuleMap::zero(&z, &o)]],
            vec![vec![two], vec![ModuleMap::zero(&z, &o)]],
        )
        .unwrap();
        let report = verify_convergence(&x).unwrap();
        for oc in &report.orientations {
            assert_eq!(oc.degrees[0].homology.torsion_factors, vec![Int::from(2)]);
            assert_eq!(oc.degrees[1].homology, CanonicalForm::free(1));
            // H_1 = ℤ(1, −1) meets neither axis, so all of it sits in the top piece
            assert!(oc.degrees[1].quotients[0].is_zero());
            assert_eq!(oc.degrees[1].quotients[1], CanonicalForm::free(1));
        }
    }

    #[test]
    fn cech_of_resolution_on_the_pseudocircle() {
        use crate::cech::{constant_cosheaf, h_n_cover};
        use crate::fincat::FinSpace;
        use crate::satellite::resolve;

        let space = FinSpace::pseudocircle();
        let c = space.open_category();
        let legs = vec![c.hom(4, 6)[0], c.hom(5, 6)[0]];
        let cover = Cover::new(&c, 6, legs).unwrap();
        let a = constant_cosheaf(&space, &free(1));
        let res = resolve(&a, 3);
        let x = Bicomplex::cech_of_resolution(&cover, &res, 3).unwrap();
        // P_t is quasi-projective, so its Čech homology vanishes in positive degrees
        let hor = pages(&x, Orientation::Horizontal, 2).unwrap();
        for s in 1..3 {
            for t in 0..=3 {
                assert!(hor[2].entry(s, t).is_zero(), "({s},{t})");
            }
        }
        // the resolution is exact, so the vertical sequence collapses onto
        // the Čech complex of A in row 0
        let ver = pages(&x, Orientation::Vertical, 2).unwrap();
        let tot = total_complex(&x).unwrap();
        for n in 0..2 {
            let h = h_n_cover(&cover, &a, n).unwrap();
            assert!(ver[2].entry(n, 0).is_isomorphic(&h), "E² at ({n},0)");
            assert!(tot.homology(n).unwrap().module.is_isomorphic(&h), "H_{n}(Tot)");
            assert_eq!(h.canonicalize(), CanonicalForm::free(1));
        }
        verify_convergence(&x).unwrap();
    }
}
