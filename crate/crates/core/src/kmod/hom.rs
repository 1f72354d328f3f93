use super::lattice::Lattice;
use super::matrix::Matrix;
use super::module::{direct_sum, ModuleMap, PresentedModule};
use super::ring::Int;
use super::ModuleError;

/// `Hom(M, N)` with the data needed to move between its elements and maps.
///
/// A homomorphism is a `g_M × g_N` matrix `X`; it is stored flattened, entry
/// `(i, j)` at index `i · g_N + j`.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: PresentedModule,
    source: PresentedModule,
    target: PresentedModule,
    /// One row per generator of `module`: its flattened matrix.
    embedding: Matrix,
    span: Lattice,
}

/// `Hom(M, N)` as the kernel of `N^{g_M} → N^{r_M}`, `X ↦ Rel_M · X`.
pub fn hom_module(m: &PresentedModule, n: &PresentedModule) -> Result<HomModule, ModuleError> {
    if m.ring() != n.ring() {
        return Err(ModuleError::RingMismatch(m.ring(), n.ring()));
    }
    let ring = m.ring();
    let (gm, gn) = (m.generators(), n.generators());
    let rel = m.relations();
    let rm = rel.nrows();
    let src = direct_sum(ring, &vec![n.clone(); gm])?;
    let dst = direct_sum(ring, &vec![n.clone(); rm])?;
    let mut phi = Matrix::zeros(gm * gn, rm * gn);
    for i in 0..gm {
        for j in 0..gn {
            for k in 0..rm {
                let c = rel.get(k, i);
                if !num_traits::Zero::is_zero(c) {
                    phi.set(i * gn + j, k * gn + j, c.clone());
                }
            }
        }
    }
    let phi = ModuleMap::new_unchecked(src.module, dst.module, phi);
    let (module, incl) = phi.kernel();
    let embedding = incl.matrix().clone();
    let span = Lattice::span(&embedding, gm * gn, ring.arith());
    Ok(HomModule { module, source: m.clone(), target: n.clone(), embedding, span })
}

impl HomModule {
    pub fn source(&self) -> &PresentedModule {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule {
        &self.target
    }

    /// The homomorphism represented by an element of `module`.
    pub fn to_map(&self, v: &[Int]) -> ModuleMap {
        let flat = self.embedding.apply(v);
        let gn = self.target.generators();
        let x = Matrix::from_fn(self.source.generators(), gn, |i, j| flat[i * gn + j].clone());
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), x)
    }

    /// Coordinates of a homomorphism `source → target` in `module`.
    pub fn from_map(&self, f: &ModuleMap) -> Result<Vec<Int>, ModuleError> {
        if !f.domain().same_presentation(&self.source) || !f.codomain().same_presentation(&self.target) {
            return Err(ModuleError::NotComposable);
        }
        Ok(self.coords_of_matrix(f.matrix()))
    }

    fn coords_of_matrix(&self, x: &Matrix) -> Vec<Int> {
        let flat: Vec<Int> = x.rows_iter().flat_map(|r| r.iter().cloned()).collect();
        self.span.coords(&flat).expect("well-defined maps lie in the kernel lattice")
    }

    /// `Hom(f, N): Hom(M, N) → Hom(M', N)` for `f: M' → M`, `X ↦ X ∘ f`.
    pub fn precompose(&self, f: &ModuleMap, other: &HomModule) -> Result<ModuleMap, ModuleError> {
        if !f.codomain().same_presentation(&self.source)
            || !f.domain().same_presentation(&other.source)
            || !self.target.same_presentation(&other.target)
        {
            return Err(ModuleError::NotComposable);
        }
        let rows = (0..self.module.generators())
            .map(|k| {
                let x = self.generator_matrix(k);
                other.coords_of_matrix(&f.matrix().mul(&x))
            })
            .collect();
        Ok(ModuleMap::new_unchecked(
            self.module.clone(),
            other.module.clone(),
            Matrix::from_rows(rows, other.module.generators()),
        ))
    }

    /// `Hom(M, g): Hom(M, N) → Hom(M, N')` for `g: N → N'`, `X ↦ g ∘ X`.
    pub fn postcompose(&self, g: &ModuleMap, other: &HomModule) -> Result<ModuleMap, ModuleError> {
        if !g.domain().same_presentation(&self.target)
            || !g.codomain().same_presentation(&other.target)
            || !self.source.same_presentation(&other.source)
        {
            return Err(ModuleError::NotComposable);
        }
        let rows = (0..self.module.generators())
            .map(|k| other.coords_of_matrix(&self.generator_matrix(k).mul(g.matrix())))
            .collect();
        Ok(ModuleMap::new_unchecked(
            self.module.clone(),
            other.module.clone(),
            Matrix::from_rows(rows, other.module.generators()),
        ))
    }

    fn generator_matrix(&self, k: usize) -> Matrix {
        let gn = self.target.generators();
        let row = self.embedding.row(k);
        Matrix::from_fn(self.source.generators(), gn, |i, j| row[i * gn + j].clone())
    }
}
