use std::sync::Arc;

use super::limits::{colim, lim, Limit};
use super::precosheaf::{Precosheaf, PrecosheafMorphism, Presheaf};
use super::DiagramError;
use crate::fincat::{lifted_category, FinCategory, FinFunctor, Mor, Obj};
use crate::kmod::{block_map, direct_sum, hom_module, HomModule, Int, Matrix, PresentedModule};

/// `f_* B = B ∘ f`, a precosheaf on the source of `f`.
pub fn restrict(f: &FinFunctor, b: &Precosheaf) -> Result<Precosheaf, DiagramError> {
    if **f.target() != **b.category() {
        return Err(DiagramError::CategoryMismatch);
    }
    let s = f.source();
    let values = s.objects().map(|o| b.value(f.object(o)).clone()).collect();
    let maps = s.morphisms().map(|m| b.map(f.morphism(m)).clone()).collect();
    Ok(Precosheaf::new_unchecked(s.clone(), b.ring(), values, maps))
}

/// Objects `(j, u: f(j) → i)` of `f ↓ i`.
fn over_objects(f: &FinFunctor, i: Obj) -> Vec<(Obj, Mor)> {
    let (s, t) = (f.source(), f.target());
    s.objects().flat_map(|j| t.hom(f.object(j), i).iter().map(move |&u| (j, u))).collect()
}

/// Objects `(j, u: i → f(j))` of `i ↓ f`.
fn under_objects(f: &FinFunctor, i: Obj) -> Vec<(Obj, Mor)> {
    let (s, t) = (f.source(), f.target());
    s.objects().flat_map(|j| t.hom(i, f.object(j)).iter().map(move |&u| (j, u))).collect()
}

/// `A` pulled back to a comma category with the given objects over the
/// source of `f`.
fn comma_diagram(
    f: &FinFunctor,
    a: &Precosheaf,
    objs: &[(Obj, Mor)],
    admissible: impl Fn(usize, usize, Mor) -> bool,
) -> Precosheaf {
    let s = f.source();
    let t = f.target();
    let base: Vec<Obj> = objs.iter().map(|&(j, _)| j).collect();
    let names = objs.iter().map(|&(j, u)| format!("({},{})", s.object_name(j), t.morphism_name(u))).collect();
    let (cat, underlying) = lifted_category(s, &base, names, admissible);
    let values = objs.iter().map(|&(j, _)| a.value(j).clone()).collect();
    let maps = underlying.iter().map(|&h| a.map(h).clone()).collect();
    Precosheaf::new_unchecked(Arc::new(cat), a.ring(), values, maps)
}

/// Left Kan extension `f† A`: `(f†A)(i) = colim_{f↓i} A`.
pub fn left_kan(f: &FinFunctor, a: &Precosheaf) -> Result<Precosheaf, DiagramError> {
    if **f.source() != **a.category() {
        return Err(DiagramError::CategoryMismatch);
    }
    let t = f.target();
    let objs: Vec<Vec<(Obj, Mor)>> = t.objects().map(|i| over_objects(f, i)).collect();
    let colims: Vec<_> = t
        .objects()
        .map(|i| {
            let o = &objs[i];
            colim(&comma_diagram(f, a, o, |x, y, h| t.compose(o[y].1, f.morphism(h)) == o[x].1))
        })
        .collect();
    let values: Vec<PresentedModule> = colims.iter().map(|c| c.module.clone()).collect();
    let maps = t
        .morphisms()
        .map(|g| {
            let (i, i2) = (t.dom(g), t.cod(g));
            let parts = objs[i].iter().enumerate().map(|(k, &(j, u))| {
                let target = objs[i2].iter().position(|&(j2, u2)| j2 == j && u2 == t.compose(g, u)).expect("postcomposition");
                (k, target, Matrix::identity(a.value(j).generators()))
            });
            colims[i].induced(&colims[i2], parts)
        })
        .collect();
    Ok(Precosheaf::new_unchecked(t.clone(), a.ring(), values, maps))
}

/// Right Kan extension `f‡ A`: `(f‡A)(i) = lim_{i↓f} A`.
pub fn right_kan(f: &FinFunctor, a: &Precosheaf) -> Result<Precosheaf, DiagramError> {
    if **f.source() != **a.category() {
        return Err(DiagramError::CategoryMismatch);
    }
    let t = f.target();
    let objs: Vec<Vec<(Obj, Mor)>> = t.objects().map(|i| under_objects(f, i)).collect();
    let lims: Vec<Limit> = t
        .objects()
        .map(|i| {
            let o = &objs[i];
            lim(&comma_diagram(f, a, o, |x, y, h| t.compose(f.morphism(h), o[x].1) == o[y].1))
        })
        .collect();
    let values: Vec<PresentedModule> = lims.iter().map(|l| l.module.clone()).collect();
    let maps = t
        .morphisms()
        .map(|g| {
            let (i, i2) = (t.dom(g), t.cod(g));
            let parts: Vec<(Obj, Obj, Matrix)> = objs[i2]
                .iter()
                .enumerate()
                .map(|(k, &(j, u2))| {
                    let src = objs[i].iter().position(|&(j1, u1)| j1 == j && u1 == t.compose(u2, g)).expect("precomposition");
                    (k, src, Matrix::identity(a.value(j).generators()))
                })
                .collect();
            lims[i].induced(&lims[i2], &parts)
        })
        .collect();
    Ok(Precosheaf::new_unchecked(t.clone(), a.ring(), values, maps))
}

/// Right Kan extension of a presheaf along `f` (computed on opposites).
pub fn right_kan_presheaf(f: &FinFunctor, b: &Presheaf) -> Result<Presheaf, DiagramError> {
    let e = right_kan(&f.opposite(), &b.as_opposite())?;
    Ok(Presheaf::new_unchecked(f.target().clone(), b.ring(), e.values().to_vec(), e.category().morphisms().map(|m| e.map(m).clone()).collect()))
}

/// `M_V`: the left Kan extension of `M` along `{V} → C`, with value
/// `⊕_{Hom(V,U)} M` at `U`.
pub fn lower_generator(c: Arc<FinCategory>, v: Obj, m: &PresentedModule) -> Precosheaf {
    let p = FinFunctor::point(c, v);
    left_kan(&p, &Precosheaf::constant(p.source().clone(), m)).expect("point functor")
}

/// `M^V`: the right Kan extension of `M` along `{V} → C`, with value
/// `∏_{Hom(U,V)} M` at `U`.
pub fn upper_generator(c: Arc<FinCategory>, v: Obj, m: &PresentedModule) -> Precosheaf {
    let p = FinFunctor::point(c, v);
    right_kan(&p, &Precosheaf::constant(p.source().clone(), m)).expect("point functor")
}

/// The module of natural transformations `A → B` between precosheaves.
#[derive(Clone, Debug)]
pub struct NatModule {
    pub module: PresentedModule,
    source: Precosheaf,
    target: Precosheaf,
    homs: Vec<HomModule>,
    offsets: Vec<usize>,
    embedding: Matrix,
}

/// `Nat(A, B)` as the kernel of `⊕_o Hom(A(o), B(o)) → ⊕_f Hom(A(dom f), B(cod f))`,
/// `α ↦ B(f)∘α_dom − α_cod∘A(f)`.
pub fn nat_module(a: &Precosheaf, b: &Precosheaf) -> Result<NatModule, DiagramError> {
    if **a.category() != **b.category() {
        return Err(DiagramError::CategoryMismatch);
    }
    let c = a.category();
    let ring = a.ring();
    let homs: Vec<HomModule> = c.objects().map(|o| hom_module(a.value(o), b.value(o))).collect::<Result<_, _>>()?;
    let arrows: Vec<Mor> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let cross: Vec<HomModule> =
        arrows.iter().map(|&f| hom_module(a.value(c.dom(f)), b.value(c.cod(f)))).collect::<Result<_, _>>()?;
    let src = direct_sum(ring, &homs.iter().map(|h| h.module.clone()).collect::<Vec<_>>())?;
    let dst = direct_sum(ring, &cross.iter().map(|h| h.module.clone()).collect::<Vec<_>>())?;
    let mut blocks = Vec::new();
    for (k, &f) in arrows.iter().enumerate() {
        let post = homs[c.dom(f)].postcompose(b.map(f), &cross[k])?;
        let pre = homs[c.cod(f)].precompose(a.map(f), &cross[k])?;
        blocks.push((c.dom(f), k, post.matrix().clone(), 1));
        blocks.push((c.cod(f), k, pre.matrix().clone(), -1));
    }
    let phi = block_map(&src, &dst, blocks);
    let (module, incl) = phi.kernel();
    Ok(NatModule { module, source: a.clone(), target: b.clone(), homs, offsets: src.offsets, embedding: incl.matrix().clone() })
}

impl NatModule {
    /// The natural transformation represented by an element of `module`.
    pub fn to_morphism(&self, v: &[Int]) -> PrecosheafMorphism {
        let x = self.embedding.apply(v);
        let components = self
            .homs
            .iter()
            .enumerate()
            .map(|(o, h)| {
                let off = self.offsets[o];
                h.to_map(&x[off..off + h.module.generators()])
            })
            .collect();
        PrecosheafMorphism::new_unchecked(self.source.clone(), self.target.clone(), components)
    }
}
