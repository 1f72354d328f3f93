use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::{Lattice, LeftSolver};
use super::matrix::Matrix;
use super::ring::{Int, Ring};
use super::snf::invariant_factors;
use super::ModuleError;

/// A finitely presented module `R^g / (row span of relations)`.
///
/// Cloning is cheap; the presentation is shared.
#[derive(Clone)]
pub struct PresentedModule {
    inner: Arc<ModuleData>,
}

struct ModuleData {
    ring: Ring,
    generators: usize,
    relations: Matrix,
    rel_lattice: Lattice,
}

/// Invariant-factor decomposition `R^free_rank ⊕ ⊕ R/dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub free_rank: usize,
    #[serde(with = "super::matrix::int_vec")]
    pub torsion_factors: Vec<Int>,
}

impl CanonicalForm {
    pub fn zero() -> CanonicalForm {
        CanonicalForm { free_rank: 0, torsion_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> CanonicalForm {
        CanonicalForm { free_rank: rank, torsion_factors: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }

    /// Number of elements, when finite.
    pub fn order(&self) -> Option<Int> {
        (self.free_rank == 0).then(|| self.torsion_factors.iter().fold(Int::one(), |acc, d| acc * d))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("R".to_string()),
            n => parts.push(format!("R^{n}")),
        }
        for d in &self.torsion_factors {
            parts.push(format!("R/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl PresentedModule {
    /// `R^generators / rowspan(relations)`; entries are reduced for the ring.
    pub fn new(ring: Ring, generators: usize, relations: Matrix) -> Result<PresentedModule, ModuleError> {
        if relations.ncols() != generators {
            return Err(ModuleError::Shape {
                expected: (relations.nrows(), generators),
                found: relations.shape(),
            });
        }
        let arith = ring.arith();
        let relations = relations.reduced(arith);
        let mut rel_lattice = Lattice::span(&relations, generators, arith);
        let relations = if ring == Ring::Rationals {
            rel_lattice = rel_lattice.saturation();
            rel_lattice.basis().clone()
        } else {
            relations
        };
        Ok(PresentedModule { inner: Arc::new(ModuleData { ring, generators, relations, rel_lattice }) })
    }

    pub(crate) fn from_lattice(ring: Ring, rel_lattice: Lattice) -> PresentedModule {
        let generators = rel_lattice.dim();
        let rel_lattice = if ring == Ring::Rationals { rel_lattice.saturation() } else { rel_lattice };
        let relations = rel_lattice.basis().clone();
        PresentedModule { inner: Arc::new(ModuleData { ring, generators, relations, rel_lattice }) }
    }

    pub fn free(ring: Ring, rank: usize) -> PresentedModule {
        PresentedModule::from_lattice(ring, Lattice::zero(rank, ring.arith()))
    }

    pub fn zero(ring: Ring) -> PresentedModule {
        PresentedModule::free(ring, 0)
    }

    /// `R/n`.
    pub fn cyclic(ring: Ring, n: i64) -> PresentedModule {
        PresentedModule::new(ring, 1, Matrix::from_i64(&[&[n]], 1)).expect("1x1 relation")
    }

    /// `⊕ R/dᵢ` with one generator per factor; `0` means a free summand.
    pub fn from_factors(ring: Ring, factors: &[i64]) -> PresentedModule {
        let n = factors.len();
        let rels = Matrix::from_fn(n, n, |i, j| if i == j { Int::from(factors[i]) } else { Int::zero() });
        PresentedModule::new(ring, n, rels).expect("diagonal relations")
    }

    pub fn ring(&self) -> Ring {
        self.inner.ring
    }

    pub fn generators(&self) -> usize {
        self.inner.generators
    }

    pub fn relations(&self) -> &Matrix {
        &self.inner.relations
    }

    pub fn relation_lattice(&self) -> &Lattice {
        &self.inner.rel_lattice
    }

    /// Whether the vector of generator coefficients is zero in the module.
    pub fn is_zero_element(&self, v: &[Int]) -> bool {
        self.inner.rel_lattice.contains(v)
    }

    pub fn elements_equal(&self, a: &[Int], b: &[Int]) -> bool {
        let d: Vec<Int> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero_element(&d)
    }

    pub fn canonicalize(&self) -> CanonicalForm {
        let ring = self.ring();
        let rel = self.inner.rel_lattice.basis();
        let factors = invariant_factors(rel, ring.arith());
        let free_rank = self.generators() - factors.len();
        let torsion_factors = match ring {
            Ring::Integers => factors.into_iter().map(|d| d.abs()).filter(|d| !d.is_one()).collect(),
            Ring::Rationals | Ring::PrimeField(_) => Vec::new(),
        };
        CanonicalForm { free_rank, torsion_factors }
    }

    pub fn is_zero(&self) -> bool {
        // the echelon basis of the full lattice is the identity
        let l = &self.inner.rel_lattice;
        l.rank() == self.generators() && *l.basis() == Matrix::identity(self.generators())
    }

    pub fn is_isomorphic(&self, other: &PresentedModule) -> bool {
        self.ring() == other.ring() && self.canonicalize() == other.canonicalize()
    }

    /// Dimension over a field, `None` over ℤ.
    pub fn dimension(&self) -> Option<usize> {
        self.ring().is_field().then(|| self.canonicalize().free_rank)
    }

    pub fn same_presentation(&self, other: &PresentedModule) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.ring() == other.ring()
                && self.generators() == other.generators()
                && self.inner.rel_lattice == other.inner.rel_lattice)
    }

    fn check_ring(&self, other: &PresentedModule) -> Result<(), ModuleError> {
        if self.ring() != other.ring() {
            return Err(ModuleError::RingMismatch(self.ring(), other.ring()));
        }
        Ok(())
    }

    /// Canonical representatives for finite modules of at most `limit`
    /// elements, used by brute-force checks.
    pub fn enumerate_elements(&self, limit: usize) -> Option<Vec<Vec<Int>>> {
        let cf = self.canonicalize();
        let order = match self.ring() {
            Ring::PrimeField(p) => num_traits::pow(Int::from(p), cf.free_rank),
            _ => cf.order()?,
        };
        if order > Int::from(limit) {
            return None;
        }
        // enumerate a box in generator coordinates, keep one per class
        let g = self.generators();
        let bound: i64 = match self.ring() {
            Ring::PrimeField(p) => p as i64,
            _ => {
                // each generator has additive order dividing the exponent
                cf.torsion_factors.last().map_or(1, |d| i64::try_from(d).unwrap_or(i64::MAX))
            }
        };
        let mut reps: Vec<Vec<Int>> = Vec::new();
        let mut cur = vec![0i64; g];
        loop {
            let v: Vec<Int> = cur.iter().map(|&x| Int::from(x)).collect();
            if !reps.iter().any(|r| self.elements_equal(r, &v)) {
                reps.push(v);
                if Int::from(reps.len()) == order {
                    break;
                }
            }
            let mut k = 0;
            while k < g {
                cur[k] += 1;
                if cur[k] < bound {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == g {
                break;
            }
        }
        Some(reps)
    }
}

impl PartialEq for PresentedModule {
    fn eq(&self, other: &Self) -> bool {
        self.same_presentation(other)
    }
}

impl Eq for PresentedModule {}

impl fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} gens | {:?} over {}>", self.generators(), self.relations(), self.ring())
    }
}

impl fmt::Display for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cf = self.canonicalize();
        let base = match self.ring() {
            Ring::Integers => "Z".to_string(),
            Ring::Rationals => "Q".to_string(),
            Ring::PrimeField(p) => format!("F{p}"),
        };
        write!(f, "{}", cf.to_string().replace('R', &base))
    }
}

/// A homomorphism between presented modules, given on generators.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    domain: PresentedModule,
    codomain: PresentedModule,
    matrix: Matrix,
}

impl ModuleMap {
    /// Build a map, checking shapes and well-definedness.
    pub fn new(domain: PresentedModule, codomain: PresentedModule, matrix: Matrix) -> Result<ModuleMap, ModuleError> {
        domain.check_ring(&codomain)?;
        if matrix.shape() != (domain.generators(), codomain.generators()) {
            return Err(ModuleError::Shape {
                expected: (domain.generators(), codomain.generators()),
                found: matrix.shape(),
            });
        }
        let map = ModuleMap::new_unchecked(domain, codomain, matrix);
        if let Some(relation) = map.ill_defined_relation() {
            return Err(ModuleError::IllDefined { relation });
        }
        Ok(map)
    }

    /// Build a map whose well-definedness is guaranteed by construction.
    pub fn new_unchecked(domain: PresentedModule, codomain: PresentedModule, matrix: Matrix) -> ModuleMap {
        debug_assert_eq!(matrix.shape(), (domain.generators(), codomain.generators()));
        let matrix = matrix.reduced(domain.ring().arith());
        ModuleMap { domain, codomain, matrix }
    }

    pub fn identity(m: &PresentedModule) -> ModuleMap {
        ModuleMap::new_unchecked(m.clone(), m.clone(), Matrix::identity(m.generators()))
    }

    pub fn zero(domain: &PresentedModule, codomain: &PresentedModule) -> ModuleMap {
        ModuleMap::new_unchecked(
            domain.clone(),
            codomain.clone(),
            Matrix::zeros(domain.generators(), codomain.generators()),
        )
    }

    pub fn domain(&self) -> &PresentedModule {
        &self.domain
    }

    pub fn codomain(&self) -> &PresentedModule {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ring(&self) -> Ring {
        self.domain.ring()
    }

    /// Index of a domain relation not carried into the codomain relations.
    pub fn ill_defined_relation(&self) -> Option<usize> {
        let rel = self.domain.relations();
        (0..rel.nrows()).find(|&i| !self.codomain.is_zero_element(&self.matrix.apply(rel.row(i))))
    }

    pub fn is_well_defined(&self) -> bool {
        self.ill_defined_relation().is_none()
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        let arith = self.ring().arith();
        self.matrix.apply(v).iter().map(|x| arith.reduce(x)).collect()
    }

    /// `other ∘ self` (first `self`, then `other`).
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap, ModuleError> {
        if !self.codomain.same_presentation(&other.domain) {
            return Err(ModuleError::NotComposable);
        }
        Ok(ModuleMap::new_unchecked(self.domain.clone(), other.codomain.clone(), self.matrix.mul(&other.matrix)))
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap, ModuleError> {
        self.check_parallel(other)?;
        Ok(ModuleMap::new_unchecked(self.domain.clone(), self.codomain.clone(), self.matrix.add(&other.matrix)))
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap, ModuleError> {
        self.check_parallel(other)?;
        Ok(ModuleMap::new_unchecked(self.domain.clone(), self.codomain.clone(), self.matrix.sub(&other.matrix)))
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap::new_unchecked(self.domain.clone(), self.codomain.clone(), self.matrix.neg())
    }

    pub fn scale(&self, c: i64) -> ModuleMap {
        ModuleMap::new_unchecked(self.domain.clone(), self.codomain.clone(), self.matrix.scale(&Int::from(c)))
    }

    fn check_parallel(&self, other: &ModuleMap) -> Result<(), ModuleError> {
        if !self.domain.same_presentation(&other.domain) || !self.codomain.same_presentation(&other.codomain) {
            return Err(ModuleError::NotComposable);
        }
        Ok(())
    }

    /// First domain generator whose image is nonzero.
    pub fn nonzero_witness(&self) -> Option<usize> {
        (0..self.domain.generators()).find(|&i| !self.codomain.is_zero_element(self.matrix.row(i)))
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_witness().is_none()
    }

    /// Equality as homomorphisms (not as matrices).
    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Submodule of `R^{g_dom}` sent into the codomain relations.
    pub(crate) fn kernel_lattice(&self) -> Lattice {
        Lattice::preimage(&self.matrix, self.codomain.relation_lattice())
    }

    /// Submodule of `R^{g_cod}` spanned by the image and the relations.
    pub(crate) fn image_lattice(&self) -> Lattice {
        self.codomain.relation_lattice().add_rows(&self.matrix)
    }

    pub fn kernel(&self) -> (PresentedModule, ModuleMap) {
        let top = self.kernel_lattice();
        let (k, embed) = subquotient(self.ring(), &top, self.domain.relation_lattice());
        let incl = ModuleMap::new_unchecked(k.clone(), self.domain.clone(), embed);
        (k, incl)
    }

    pub fn cokernel(&self) -> (PresentedModule, ModuleMap) {
        let c = PresentedModule::from_lattice(self.ring(), self.image_lattice());
        let proj = ModuleMap::new_unchecked(self.codomain.clone(), c.clone(), Matrix::identity(c.generators()));
        (c, proj)
    }

    /// The image as `domain / kernel`, with its inclusion into the codomain.
    pub fn image(&self) -> (PresentedModule, ModuleMap) {
        let i = PresentedModule::from_lattice(self.ring(), self.kernel_lattice());
        let incl = ModuleMap::new_unchecked(i.clone(), self.codomain.clone(), self.matrix.clone());
        (i, incl)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Factor `f: X → codomain(self)` through `self`, assuming `self` is the
    /// inclusion of a subquotient built by [`subquotient`] style embeddings,
    /// i.e. `self` is injective and `im f ⊆ im self`.
    pub fn lift_through(&self, f: &ModuleMap) -> Result<ModuleMap, ModuleError> {
        if !f.codomain.same_presentation(&self.codomain) {
            return Err(ModuleError::NotComposable);
        }
        // solve x · M_self ≡ row (mod codomain relations)
        let arith = self.ring().arith();
        let g = self.domain.generators();
        let stacked = Matrix::vstack(&[&self.matrix, self.codomain.relation_lattice().basis()], self.codomain.generators());
        let solver = LeftSolver::new(&stacked, arith);
        let mut rows = Vec::with_capacity(f.domain.generators());
        for (i, r) in f.matrix.rows_iter().enumerate() {
            let sol = solver.solve(r).ok_or(ModuleError::NotInImage { generator: i })?;
            rows.push(sol[..g].to_vec());
        }
        Ok(ModuleMap::new_unchecked(f.domain.clone(), self.domain.clone(), Matrix::from_rows(rows, g)))
    }
}

/// Module `top / bottom` for lattices `bottom ⊆ top ⊆ R^n`, with generators
/// the echelon basis of `top`. Returns the module and the embedding matrix
/// (its rows are the generators written in `R^n`).
pub(crate) fn subquotient(ring: Ring, top: &Lattice, bottom: &Lattice) -> (PresentedModule, Matrix) {
    let rel = top.coords_matrix(bottom.basis()).expect("bottom lattice inside top lattice");
    let m = PresentedModule::new(ring, top.rank(), rel).expect("coordinates have top.rank() columns");
    (m, top.basis().clone())
}

/// `ker(f_out) / im(f_in)` at the middle module.
pub fn homology_at(f_in: &ModuleMap, f_out: &ModuleMap) -> Result<PresentedModule, ModuleError> {
    if !f_in.codomain.same_presentation(&f_out.domain) {
        return Err(ModuleError::NotComposable);
    }
    let comp = f_in.then(f_out)?;
    if let Some(generator) = comp.nonzero_witness() {
        return Err(ModuleError::CompositeNonzero { generator });
    }
    let top = f_out.kernel_lattice();
    let bottom = f_in.image_lattice();
    Ok(subquotient(f_in.ring(), &top, &bottom).0)
}

/// Biproduct with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: PresentedModule,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
    pub offsets: Vec<usize>,
}

pub fn direct_sum(ring: Ring, ms: &[PresentedModule]) -> Result<DirectSum, ModuleError> {
    for m in ms {
        if m.ring() != ring {
            return Err(ModuleError::RingMismatch(ring, m.ring()));
        }
    }
    let rels: Vec<&Matrix> = ms.iter().map(|m| m.relations()).collect();
    let total: usize = ms.iter().map(|m| m.generators()).sum();
    let rel = if rels.is_empty() { Matrix::zeros(0, 0) } else { Matrix::block_diag(&rels) };
    let module = PresentedModule::new(ring, total, rel)?;
    let mut offsets = Vec::with_capacity(ms.len());
    let mut injections = Vec::with_capacity(ms.len());
    let mut projections = Vec::with_capacity(ms.len());
    let mut off = 0;
    for m in ms {
        offsets.push(off);
        let g = m.generators();
        let mut inj = Matrix::zeros(g, total);
        let mut proj = Matrix::zeros(total, g);
        for i in 0..g {
            inj.set(i, off + i, Int::one());
            proj.set(off + i, i, Int::one());
        }
        injections.push(ModuleMap::new_unchecked(m.clone(), module.clone(), inj));
        projections.push(ModuleMap::new_unchecked(module.clone(), m.clone(), proj));
        off += g;
    }
    Ok(DirectSum { module, injections, projections, offsets })
}

/// Block matrix of a map `⊕ A_i → ⊕ B_j` from its nonzero blocks.
pub(crate) fn block_map(
    domain: &DirectSum,
    codomain: &DirectSum,
    blocks: impl IntoIterator<Item = (usize, usize, Matrix, i64)>,
) -> ModuleMap {
    let mut m = Matrix::zeros(domain.module.generators(), codomain.module.generators());
    for (i, j, b, sign) in blocks {
        m.add_block(domain.offsets[i], codomain.offsets[j], &b, sign);
    }
    ModuleMap::new_unchecked(domain.module.clone(), codomain.module.clone(), m)
}

pub(crate) fn sign_of(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}
