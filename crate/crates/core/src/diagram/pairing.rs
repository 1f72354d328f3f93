use super::precosheaf::{Precosheaf, PrecosheafMorphism, Presheaf};
use super::DiagramError;
use crate::kmod::{direct_sum, hom_module, HomModule, Matrix, ModuleError, ModuleMap, PresentedModule};

/// `⟨A, T⟩(U) = Hom(A(U), T)`, contravariant through precomposition.
pub fn pairing(a: &Precosheaf, t: &PresentedModule) -> Result<Presheaf, DiagramError> {
    if a.ring() != t.ring() {
        return Err(ModuleError::RingMismatch(a.ring(), t.ring()).into());
    }
    let c = a.category();
    let homs: Vec<HomModule> = c.objects().map(|o| hom_module(a.value(o), t)).collect::<Result<_, _>>()?;
    let values = homs.iter().map(|h| h.module.clone()).collect();
    let maps = c
        .morphisms()
        .map(|f| homs[c.cod(f)].precompose(a.map(f), &homs[c.dom(f)]))
        .collect::<Result<Vec<ModuleMap>, _>>()?;
    Ok(Presheaf::new_unchecked(c.clone(), a.ring(), values, maps))
}

/// The levelwise-free cover `P(B)(U) = ⊕_{f: V → U} R^{g(B(V))}` with the
/// epimorphism whose block at `f` is the matrix of `B(f)`.
///
/// `P(g)` for `g: U → U'` sends the summand of `f` identically to the
/// summand of `g ∘ f`. Summands at `U` follow `morphisms_into(U)`.
pub fn quasiprojective_cover(b: &Precosheaf) -> (Precosheaf, PrecosheafMorphism) {
    let c = b.category();
    let ring = b.ring();
    let sums: Vec<_> = c
        .objects()
        .map(|u| {
            let parts: Vec<PresentedModule> =
                c.morphisms_into(u).iter().map(|&f| PresentedModule::free(ring, b.value(c.dom(f)).generators())).collect();
            direct_sum(ring, &parts).expect("same ring")
        })
        .collect();
    let values: Vec<PresentedModule> = sums.iter().map(|s| s.module.clone()).collect();
    let maps = c
        .morphisms()
        .map(|g| {
            let (u, u2) = (c.dom(g), c.cod(g));
            let mut m = Matrix::zeros(values[u].generators(), values[u2].generators());
            for (k, &f) in c.morphisms_into(u).iter().enumerate() {
                let k2 = c.morphisms_into(u2).iter().position(|&h| h == c.compose(g, f)).expect("composite ends at u2");
                let gens = b.value(c.dom(f)).generators();
                m.add_block(sums[u].offsets[k], sums[u2].offsets[k2], &Matrix::identity(gens), 1);
            }
            ModuleMap::new_unchecked(values[u].clone(), values[u2].clone(), m)
        })
        .collect();
    let p = Precosheaf::new_unchecked(c.clone(), ring, values, maps);
    let components = c
        .objects()
        .map(|u| {
            let blocks: Vec<&Matrix> = c.morphisms_into(u).iter().map(|&f| b.map(f).matrix()).collect();
            let m = Matrix::vstack(&blocks, b.value(u).generators());
            ModuleMap::new_unchecked(p.value(u).clone(), b.value(u).clone(), m)
        })
        .collect();
    let epi = PrecosheafMorphism::new_unchecked(p.clone(), b.clone(), components);
    (p, epi)
}
