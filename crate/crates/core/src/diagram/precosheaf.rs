use std::sync::Arc;

use super::DiagramError;
use crate::fincat::{FinCategory, Mor, Obj};
use crate::kmod::{direct_sum, Matrix, ModuleMap, PresentedModule, Ring};

/// A covariant functor from a finite category to modules.
///
/// `map(f)` goes from `value(dom f)` to `value(cod f)`. The same type serves
/// as a general diagram for limits and colimits.
#[derive(Clone, Debug)]
pub struct Precosheaf {
    category: Arc<FinCategory>,
    ring: Ring,
    values: Vec<PresentedModule>,
    maps: Vec<ModuleMap>,
}

/// A contravariant functor from a finite category to modules.
///
/// `map(f)` goes from `value(cod f)` to `value(dom f)`.
#[derive(Clone, Debug)]
pub struct Presheaf {
    category: Arc<FinCategory>,
    ring: Ring,
    values: Vec<PresentedModule>,
    maps: Vec<ModuleMap>,
}

fn check_ring(ring: Ring, values: &[PresentedModule]) -> Result<(), DiagramError> {
    match values.iter().find(|v| v.ring() != ring) {
        Some(v) => Err(crate::kmod::ModuleError::RingMismatch(ring, v.ring()).into()),
        None => Ok(()),
    }
}

impl Precosheaf {
    /// Full data: a map for every morphism (identities included). Checks
    /// endpoints, identities and composition.
    pub fn new(category: Arc<FinCategory>, ring: Ring, values: Vec<PresentedModule>, maps: Vec<ModuleMap>) -> Result<Precosheaf, DiagramError> {
        check_ring(ring, &values)?;
        let p = Precosheaf { category, ring, values, maps };
        p.check()?;
        Ok(p)
    }

    /// Values plus matrices for the non-identity morphisms only.
    pub fn from_arrows(
        category: Arc<FinCategory>,
        ring: Ring,
        values: Vec<PresentedModule>,
        arrow_matrices: Vec<Matrix>,
    ) -> Result<Precosheaf, DiagramError> {
        let n = category.num_objects();
        if values.len() != n || arrow_matrices.len() != category.num_morphisms() - n {
            return Err(DiagramError::NotFunctorial("one value per object and one matrix per arrow are required".into()));
        }
        let mut maps: Vec<ModuleMap> = values.iter().map(ModuleMap::identity).collect();
        for (k, m) in arrow_matrices.into_iter().enumerate() {
            let f = n + k;
            let map = ModuleMap::new(values[category.dom(f)].clone(), values[category.cod(f)].clone(), m)?;
            maps.push(map);
        }
        Precosheaf::new(category, ring, values, maps)
    }

    pub(crate) fn new_unchecked(category: Arc<FinCategory>, ring: Ring, values: Vec<PresentedModule>, maps: Vec<ModuleMap>) -> Precosheaf {
        let p = Precosheaf { category, ring, values, maps };
        debug_assert!(p.check().is_ok(), "{:?}", p.check());
        p
    }

    /// Same module everywhere, identity maps.
    pub fn constant(category: Arc<FinCategory>, m: &PresentedModule) -> Precosheaf {
        let values = vec![m.clone(); category.num_objects()];
        let maps = category.morphisms().map(|_| ModuleMap::identity(m)).collect();
        Precosheaf { category, ring: m.ring(), values, maps }
    }

    pub fn zero(category: Arc<FinCategory>, ring: Ring) -> Precosheaf {
        Precosheaf::constant(category, &PresentedModule::zero(ring))
    }

    fn check(&self) -> Result<(), DiagramError> {
        let c = &self.category;
        let bad = |s: String| Err(DiagramError::NotFunctorial(s));
        if self.values.len() != c.num_objects() || self.maps.len() != c.num_morphisms() {
            return bad("one value per object and one map per morphism are required".into());
        }
        for f in c.morphisms() {
            let m = &self.maps[f];
            if !m.domain().same_presentation(&self.values[c.dom(f)]) || !m.codomain().same_presentation(&self.values[c.cod(f)]) {
                return bad(format!("endpoints of the map for {}", c.morphism_name(f)));
            }
            if !m.is_well_defined() {
                return bad(format!("map for {} is not well defined", c.morphism_name(f)));
            }
        }
        for o in c.objects() {
            if !self.maps[c.identity(o)].equals(&ModuleMap::identity(&self.values[o])) {
                return bad(format!("identity of {}", c.object_name(o)));
            }
        }
        for f in c.morphisms() {
            for &g in c.morphisms_from(c.cod(f)) {
                let lhs = &self.maps[c.compose(g, f)];
                let rhs = self.maps[f].then(&self.maps[g])?;
                if !lhs.equals(&rhs) {
                    return bad(format!("composite {} ∘ {}", c.morphism_name(g), c.morphism_name(f)));
                }
            }
        }
        Ok(())
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn value(&self, o: Obj) -> &PresentedModule {
        &self.values[o]
    }

    pub fn values(&self) -> &[PresentedModule] {
        &self.values
    }

    pub fn map(&self, f: Mor) -> &ModuleMap {
        &self.maps[f]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Canonical form of every value matches.
    pub fn objectwise_isomorphic(&self, other: &Precosheaf) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| a.is_isomorphic(b))
    }

    /// Objectwise direct sum, with injections and projections.
    pub fn direct_sum(category: Arc<FinCategory>, ring: Ring, parts: &[Precosheaf]) -> Result<(Precosheaf, Vec<PrecosheafMorphism>, Vec<PrecosheafMorphism>), DiagramError> {
        if parts.iter().any(|p| *p.category != *category) {
            return Err(DiagramError::CategoryMismatch);
        }
        let sums: Vec<_> = category
            .objects()
            .map(|o| direct_sum(ring, &parts.iter().map(|p| p.values[o].clone()).collect::<Vec<_>>()))
            .collect::<Result<_, _>>()?;
        let values: Vec<PresentedModule> = sums.iter().map(|s| s.module.clone()).collect();
        let maps = category
            .morphisms()
            .map(|f| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| p.maps[f].matrix()).collect();
                let m = if blocks.is_empty() { Matrix::zeros(0, 0) } else { Matrix::block_diag(&blocks) };
                ModuleMap::new_unchecked(values[category.dom(f)].clone(), values[category.cod(f)].clone(), m)
            })
            .collect();
        let total = Precosheaf::new_unchecked(category.clone(), ring, values, maps);
        let inj = (0..parts.len())
            .map(|k| PrecosheafMorphism::new_unchecked(parts[k].clone(), total.clone(), sums.iter().map(|s| s.injections[k].clone()).collect()))
            .collect();
        let proj = (0..parts.len())
            .map(|k| PrecosheafMorphism::new_unchecked(total.clone(), parts[k].clone(), sums.iter().map(|s| s.projections[k].clone()).collect()))
            .collect();
        Ok((total, inj, proj))
    }
}

impl Presheaf {
    pub fn new(category: Arc<FinCategory>, ring: Ring, values: Vec<PresentedModule>, maps: Vec<ModuleMap>) -> Result<Presheaf, DiagramError> {
        check_ring(ring, &values)?;
        let p = Presheaf { category, ring, values, maps };
        p.as_opposite().check()?;
        Ok(p)
    }

    pub(crate) fn new_unchecked(category: Arc<FinCategory>, ring: Ring, values: Vec<PresentedModule>, maps: Vec<ModuleMap>) -> Presheaf {
        let p = Presheaf { category, ring, values, maps };
        debug_assert!(p.as_opposite().check().is_ok());
        p
    }

    pub fn constant(category: Arc<FinCategory>, m: &PresentedModule) -> Presheaf {
        let values = vec![m.clone(); category.num_objects()];
        let maps = category.morphisms().map(|_| ModuleMap::identity(m)).collect();
        Presheaf { category, ring: m.ring(), values, maps }
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn value(&self, o: Obj) -> &PresentedModule {
        &self.values[o]
    }

    pub fn values(&self) -> &[PresentedModule] {
        &self.values
    }

    pub fn map(&self, f: Mor) -> &ModuleMap {
        &self.maps[f]
    }

    pub fn objectwise_isomorphic(&self, other: &Presheaf) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| a.is_isomorphic(b))
    }

    /// The same data as a covariant functor on the opposite category.
    pub fn as_opposite(&self) -> Precosheaf {
        Precosheaf {
            category: Arc::new(self.category.opposite()),
            ring: self.ring,
            values: self.values.clone(),
            maps: self.maps.clone(),
        }
    }
}

/// A natural transformation between precosheaves on the same category.
#[derive(Clone, Debug)]
pub struct PrecosheafMorphism {
    pub source: Precosheaf,
    pub target: Precosheaf,
    pub components: Vec<ModuleMap>,
}

impl PrecosheafMorphism {
    pub fn new(source: Precosheaf, target: Precosheaf, components: Vec<ModuleMap>) -> Result<PrecosheafMorphism, DiagramError> {
        let m = PrecosheafMorphism { source, target, components };
        m.check()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Precosheaf, target: Precosheaf, components: Vec<ModuleMap>) -> PrecosheafMorphism {
        let m = PrecosheafMorphism { source, target, components };
        debug_assert!(m.check().is_ok(), "{:?}", m.check());
        m
    }

    pub fn identity(a: &Precosheaf) -> PrecosheafMorphism {
        let components = a.values.iter().map(ModuleMap::identity).collect();
        PrecosheafMorphism { source: a.clone(), target: a.clone(), components }
    }

    pub fn check(&self) -> Result<(), DiagramError> {
        let c = &self.source.category;
        if !Arc::ptr_eq(c, &self.target.category) && **c != *self.target.category {
            return Err(DiagramError::CategoryMismatch);
        }
        for o in c.objects() {
            let a = &self.components[o];
            if !a.domain().same_presentation(&self.source.values[o]) || !a.codomain().same_presentation(&self.target.values[o]) || !a.is_well_defined() {
                return Err(DiagramError::NotNatural(c.object_name(o).to_string()));
            }
        }
        for f in c.morphisms() {
            let lhs = self.source.maps[f].then(&self.components[c.cod(f)])?;
            let rhs = self.components[c.dom(f)].then(&self.target.maps[f])?;
            if !lhs.equals(&rhs) {
                return Err(DiagramError::NotNatural(c.morphism_name(f).to_string()));
            }
        }
        Ok(())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PrecosheafMorphism) -> Result<PrecosheafMorphism, DiagramError> {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.then(b)).collect::<Result<_, _>>()?;
        Ok(PrecosheafMorphism { source: self.source.clone(), target: other.target.clone(), components })
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(|a| a.is_surjective())
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|a| a.is_injective())
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|a| a.is_isomorphism())
    }

    /// First object where the component is not an isomorphism.
    pub fn non_iso_witness(&self) -> Option<Obj> {
        self.components.iter().position(|a| !a.is_isomorphism())
    }

    /// Objectwise kernel with its inclusion.
    pub fn kernel(&self) -> (Precosheaf, PrecosheafMorphism) {
        let c = self.source.category.clone();
        let ks: Vec<(PresentedModule, ModuleMap)> = self.components.iter().map(|a| a.kernel()).collect();
        let values: Vec<PresentedModule> = ks.iter().map(|k| k.0.clone()).collect();
        let maps = c
            .morphisms()
            .map(|f| {
                let through = ks[c.dom(f)].1.then(&self.source.maps[f]).expect("composable");
                ks[c.cod(f)].1.lift_through(&through).expect("kernels are preserved by natural maps")
            })
            .collect();
        let k = Precosheaf::new_unchecked(c, self.source.ring, values, maps);
        let incl = PrecosheafMorphism::new_unchecked(k.clone(), self.source.clone(), ks.into_iter().map(|k| k.1).collect());
        (k, incl)
    }

    /// Objectwise cokernel with its projection.
    pub fn cokernel(&self) -> (Precosheaf, PrecosheafMorphism) {
        let c = self.source.category.clone();
        let cs: Vec<(PresentedModule, ModuleMap)> = self.components.iter().map(|a| a.cokernel()).collect();
        let values: Vec<PresentedModule> = cs.iter().map(|k| k.0.clone()).collect();
        let maps = c
            .morphisms()
            .map(|f| ModuleMap::new_unchecked(values[c.dom(f)].clone(), values[c.cod(f)].clone(), self.target.maps[f].matrix().clone()))
            .collect();
        let q = Precosheaf::new_unchecked(c, self.source.ring, values, maps);
        let proj = PrecosheafMorphism::new_unchecked(self.target.clone(), q.clone(), cs.into_iter().map(|k| k.1).collect());
        (q, proj)
    }
}

/// A natural transformation between presheaves on the same category.
#[derive(Clone, Debug)]
pub struct PresheafMorphism {
    pub source: Presheaf,
    pub target: Presheaf,
    pub components: Vec<ModuleMap>,
}

impl PresheafMorphism {
    pub fn check(&self) -> Result<(), DiagramError> {
        let c = &self.source.category;
        for f in c.morphisms() {
            let lhs = self.source.maps[f].then(&self.components[c.dom(f)])?;
            let rhs = self.components[c.cod(f)].then(&self.target.maps[f])?;
            if !lhs.equals(&rhs) {
                return Err(DiagramError::NotNatural(c.morphism_name(f).to_string()));
            }
        }
        Ok(())
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|a| a.is_isomorphism())
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|a| a.is_injective())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;

    fn arrow() -> Arc<FinCategory> {
        Arc::new(FinCategory::preorder(vec!["a".into(), "b".into()], |x, y| x <= y).unwrap())
    }

    #[test]
    fn functoriality_is_checked() {
        let c = arrow();
        let z = PresentedModule::free(Ring::Integers, 1);
        let z2 = PresentedModule::cyclic(Ring::Integers, 2);
        let ok = Precosheaf::from_arrows(c.clone(), Ring::Integers, vec![z.clone(), z2.clone()], vec![Matrix::from_i64(&[&[1]], 1)]);
        assert!(ok.is_ok());
        let bad = Precosheaf::from_arrows(c, Ring::Integers, vec![z2, z], vec![Matrix::from_i64(&[&[1]], 1)]);
        assert!(bad.is_err());
    }

    #[test]
    fn kernel_and_cokernel() {
        let c = arrow();
        let ring = Ring::Integers;
        let z = PresentedModule::free(ring, 1);
        let a = Precosheaf::constant(c.clone(), &z);
        let twice = PrecosheafMorphism::new(a.clone(), a.clone(), vec![ModuleMap::identity(&z).scale(2); 2]).unwrap();
        let (k, _) = twice.kernel();
        assert!(k.is_zero());
        let (q, proj) = twice.cokernel();
        assert!(q.value(0).is_isomorphic(&PresentedModule::cyclic(ring, 2)));
        assert!(proj.is_epi());
        assert!(twice.then(&proj).unwrap().components.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn sum_of_precosheaves() {
        let c = arrow();
        let ring = Ring::Integers;
        let a = Precosheaf::constant(c.clone(), &PresentedModule::free(ring, 1));
        let b = Precosheaf::constant(c.clone(), &PresentedModule::cyclic(ring, 3));
        let (s, inj, proj) = Precosheaf::direct_sum(c, ring, &[a, b]).unwrap();
        assert_eq!(s.value(1).canonicalize().free_rank, 1);
        assert!(inj[1].then(&proj[1]).unwrap().is_iso());
    }
}
