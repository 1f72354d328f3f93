//! Quasi-projective resolutions of precosheaves, left satellites of
//! additive functors, and the low-degree cosheaf homology identities.

use thiserror::Error;

use crate::cech::{cech_h_n, is_cosheaf, is_flask, CechError, ChainComplex, Via};
use crate::diagram::{h0_sieve, quasiprojective_cover, DiagramError, Precosheaf, PrecosheafMorphism};
use crate::fincat::{Obj, Sieve, Site};
use crate::kmod::{homology_at, CanonicalForm, ModuleError, ModuleMap, PresentedModule};
#[cfg(test)]
use crate::kmod::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatelliteError {
    #[error("resolution depth {depth} is too small for degree {degree}")]
    TooShallow { depth: usize, degree: usize },
    #[error("functor {0} is not additive")]
    NotAdditive(String),
    #[error("not a cosheaf: {0}")]
    NotACosheaf(String),
    #[error(transparent)]
    Cech(#[from] CechError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// `… → P₁ → P₀ → A → 0`, exact objectwise, every level objectwise free.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub target: Precosheaf,
    /// `P_0, …, P_depth`.
    pub levels: Vec<Precosheaf>,
    /// `differentials[k]: P_{k+1} → P_k`.
    pub differentials: Vec<PrecosheafMorphism>,
    pub augmentation: PrecosheafMorphism,
}

impl Resolution {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Objectwise exactness of `P_depth → … → P₀ → A → 0` below the top,
    /// and freeness of every level. Returns the first failing `(degree, object)`.
    pub fn check(&self) -> Result<(), (usize, Obj)> {
        let c = self.target.category();
        for u in c.objects() {
            if !self.augmentation.components[u].is_surjective() {
                return Err((0, u));
            }
            for (k, p) in self.levels.iter().enumerate() {
                if !p.value(u).relations().rows_iter().all(|r| r.iter().all(|x| x == &0.into())) {
                    return Err((k, u));
                }
            }
            let mut outs: Vec<&ModuleMap> = vec![&self.augmentation.components[u]];
            outs.extend(self.differentials.iter().map(|d| &d.components[u]));
            for k in 0..self.differentials.len() {
                let (d_in, d_out) = (&self.differentials[k].components[u], outs[k]);
                if !exact_at(d_in, d_out) {
                    return Err((k, u));
                }
            }
        }
        Ok(())
    }
}

/// `im(d_in) = ker(d_out)`.
fn exact_at(d_in: &ModuleMap, d_out: &ModuleMap) -> bool {
    homology_at(d_in, d_out).map(|h| h.is_zero()).unwrap_or(false)
}

/// `(P(B) ⊕ …)^copies → B`, the cover used at each resolution step.
fn cover(b: &Precosheaf, copies: usize) -> (Precosheaf, PrecosheafMorphism) {
    let (p, e) = quasiprojective_cover(b);
    if copies <= 1 {
        return (p, e);
    }
    let parts = vec![p.clone(); copies];
    let (sum, _, projections) = Precosheaf::direct_sum(b.category().clone(), b.ring(), &parts).expect("same category");
    let mut components = projections[0].then(&e).expect("composable").components;
    for proj in &projections[1..] {
        let next = proj.then(&e).expect("composable");
        for (acc, x) in components.iter_mut().zip(next.components) {
            *acc = acc.add(&x).expect("same shape");
        }
    }
    let epi = PrecosheafMorphism { source: sum.clone(), target: b.clone(), components };
    (sum, epi)
}

/// Resolution by iterating the quasi-projective cover on kernels.
pub fn resolve(a: &Precosheaf, depth: usize) -> Resolution {
    resolve_with_copies(a, depth, 1)
}

/// The same construction, covering each kernel by `copies` copies of its
/// quasi-projective cover: an independent resolution of the same object.
pub fn resolve_with_copies(a: &Precosheaf, depth: usize, copies: usize) -> Resolution {
    let (p0, augmentation) = cover(a, copies);
    let mut levels = vec![p0];
    let mut differentials = Vec::with_capacity(depth);
    let mut last = augmentation.clone();
    for _ in 0..depth {
        let (k, incl) = last.kernel();
        let (p, e) = cover(&k, copies);
        let d = e.then(&incl).expect("composable");
        levels.push(p);
        differentials.push(d.clone());
        last = d;
    }
    Resolution { target: a.clone(), levels, differentials, augmentation }
}

/// An additive functor from precosheaves on a fixed category to modules.
pub trait AdditiveFunctor {
    fn name(&self) -> String;
    fn on_object(&self, a: &Precosheaf) -> PresentedModule;
    fn on_morphism(&self, f: &PrecosheafMorphism) -> ModuleMap;
}

/// `A ↦ A(U)`.
pub struct Evaluation(pub Obj);

impl AdditiveFunctor for Evaluation {
    fn name(&self) -> String {
        format!("evaluation at object {}", self.0)
    }

    fn on_object(&self, a: &Precosheaf) -> PresentedModule {
        a.value(self.0).clone()
    }

    fn on_morphism(&self, f: &PrecosheafMorphism) -> ModuleMap {
        f.components[self.0].clone()
    }
}

/// `A ↦ H₀(R, A) = colim_{C_R} A`.
pub struct H0Sieve(pub Sieve);

impl AdditiveFunctor for H0Sieve {
    fn name(&self) -> String {
        format!("H0(R) with R = {:?} on object {}", self.0.members(), self.0.target())
    }

    fn on_object(&self, a: &Precosheaf) -> PresentedModule {
        h0_sieve(a, &self.0).module
    }

    fn on_morphism(&self, f: &PrecosheafMorphism) -> ModuleMap {
        let c = f.source.category();
        let (s, t) = (h0_sieve(&f.source, &self.0), h0_sieve(&f.target, &self.0));
        let parts = self.0.members().iter().enumerate().map(|(p, &m)| (p, p, f.components[c.dom(m)].matrix().clone()));
        s.induced(&t, parts)
    }
}

/// `L_n F(A)` for each degree, with the functor's name.
#[derive(Clone, Debug)]
pub struct SatelliteReport {
    pub functor: String,
    pub degrees: Vec<CanonicalForm>,
}

/// `F(P_•)` for a resolution (depth levels).
pub fn apply_functor(f: &dyn AdditiveFunctor, res: &Resolution) -> Result<ChainComplex, SatelliteError> {
    let modules: Vec<PresentedModule> = res.levels.iter().map(|p| f.on_object(p)).collect();
    let maps: Vec<ModuleMap> = res.differentials.iter().map(|d| f.on_morphism(d)).collect();
    if let Some(d) = res.differentials.first() {
        // additivity spot-check: F(d + d) = F(d) + F(d)
        let doubled = PrecosheafMorphism {
            source: d.source.clone(),
            target: d.target.clone(),
            components: d.components.iter().map(|x| x.add(x)).collect::<Result<_, _>>()?,
        };
        if !f.on_morphism(&doubled).equals(&maps[0].add(&maps[0])?) {
            return Err(SatelliteError::NotAdditive(f.name()));
        }
    }
    Ok(ChainComplex::new(res.target.ring(), modules, maps)?)
}

/// `L_n F(A) = H_n(F(P_•))`, using a resolution of the given depth.
pub fn left_satellite(f: &dyn AdditiveFunctor, a: &Precosheaf, n: usize, depth: usize) -> Result<PresentedModule, SatelliteError> {
    if depth < n + 1 {
        return Err(SatelliteError::TooShallow { depth, degree: n });
    }
    let res = resolve(a, depth);
    Ok(apply_functor(f, &res)?.homology(n)?.module)
}

/// `L_0F, …, L_{n_max}F` from one resolution of depth `n_max + 1`.
pub fn satellite_report(f: &dyn AdditiveFunctor, a: &Precosheaf, n_max: usize) -> Result<SatelliteReport, SatelliteError> {
    let res = resolve(a, n_max + 1);
    let cx = apply_functor(f, &res)?;
    let degrees = (0..=n_max).map(|n| cx.homology(n).map(|h| h.module.canonicalize())).collect::<Result<_, _>>()?;
    Ok(SatelliteReport { functor: f.name(), degrees })
}

/// Low-degree cosheaf homology of a cosheaf at `U`: `H₀ ≅ Ȟ₀`, `H₁ ≅ Ȟ₁`
/// and `H₂ ↠ Ȟ₂`. When the cosheaf is flask up to `n_max` the
/// spectral sequence degenerates and `H_n = Ȟ_n` in that range.
#[derive(Clone, Debug)]
pub struct LowHomology {
    pub h0: PresentedModule,
    pub h1: PresentedModule,
    /// `Ȟ₂`, a quotient of `H₂`.
    pub h2_quotient: PresentedModule,
    /// `Some(n_max)` when flaskness up to `n_max` certifies `H_n = Ȟ_n`.
    pub flask_certificate: Option<usize>,
}

pub fn cosheaf_h_low(site: &Site, u: Obj, a: &Precosheaf, n_max: usize) -> Result<LowHomology, SatelliteError> {
    if let Err(f) = is_cosheaf(site, a)? {
        return Err(SatelliteError::NotACosheaf(f.to_string()));
    }
    let h = |n| cech_h_n(site, u, a, n, Via::Sieves).map(|x| x.module);
    let flask = is_flask(site, a, n_max)?.is_ok();
    Ok(LowHomology { h0: h(0)?, h1: h(1)?, h2_quotient: h(2)?, flask_certificate: flask.then_some(n_max) })
}
