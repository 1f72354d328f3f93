use std::fmt;

use super::homology::roos_reduced;
use super::CechError;
use crate::diagram::{h0_presheaf, h0_sieve, Colimit, Limit, Precosheaf, PrecosheafMorphism, Presheaf, PresheafMorphism};
use crate::fincat::{FinSpace, Mor, Obj, Sieve, Site};
use crate::kmod::{Int, Matrix, ModuleMap, PresentedModule};

/// A covering sieve at which a (co)sheaf condition fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveFailure {
    pub object: Obj,
    pub sieve: Sieve,
    pub detail: String,
}

impl fmt::Display for SieveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at object {} with sieve {:?}: {}", self.object, self.sieve.members(), self.detail)
    }
}

fn same_category(site: &Site, c: &crate::fincat::FinCategory) -> Result<(), CechError> {
    if **site.category() != *c {
        return Err(CechError::SieveMismatch("diagram lives on another category".into()));
    }
    Ok(())
}

/// Position of `f` among the members of `r`, i.e. its summand in `H₀(R, ·)`.
fn position(r: &Sieve, f: Mor) -> Option<usize> {
    r.members().iter().position(|&m| m == f)
}

/// `H₀(R, A) → A(U)`, the sum of the maps `A(f)` over the members.
fn comparison(col: &Colimit, r: &Sieve, a: &Precosheaf) -> ModuleMap {
    let blocks: Vec<&Matrix> = r.members().iter().map(|&f| a.map(f).matrix()).collect();
    let u = r.target();
    ModuleMap::new_unchecked(col.module.clone(), a.value(u).clone(), Matrix::vstack(&blocks, a.value(u).generators()))
}

/// `B(U) → H⁰(R, B)`, `x ↦ (B(f) x)_f`.
fn co_comparison(lim: &Limit, r: &Sieve, b: &Presheaf) -> ModuleMap {
    let u = r.target();
    let rows = (0..b.value(u).generators())
        .map(|g| {
            let comps: Vec<Int> = r.members().iter().flat_map(|&f| b.map(f).matrix().row(g).to_vec()).collect();
            lim.element(&comps).expect("restrictions form a compatible family")
        })
        .collect();
    ModuleMap::new_unchecked(b.value(u).clone(), lim.module.clone(), Matrix::from_rows(rows, lim.module.generators()))
}

/// `A₊(U) = Ȟ₀(U, A)` with `λ₊: A₊ → A`. The limit over covering sieves is
/// read at the minimal covering sieve `R_U`; for `g: U → U'` every `f ∈ R_U`
/// has `g ∘ f ∈ R_{U'}`, which gives the action summand by summand.
pub fn plus(site: &Site, a: &Precosheaf) -> Result<(Precosheaf, PrecosheafMorphism), CechError> {
    same_category(site, a.category())?;
    let c = a.category();
    let mins: Vec<Sieve> = c.objects().map(|u| site.minimal_covering_sieve(u)).collect();
    let cols: Vec<Colimit> = c.objects().map(|u| h0_sieve(a, &mins[u])).collect();
    let values: Vec<PresentedModule> = cols.iter().map(|col| col.module.clone()).collect();
    let maps = c
        .morphisms()
        .map(|g| {
            let (u, u2) = (c.dom(g), c.cod(g));
            let parts = mins[u].members().iter().enumerate().map(|(p, &f)| {
                let t = position(&mins[u2], c.compose(g, f)).expect("minimal covering sieves are stable under the action");
                (p, t, Matrix::identity(a.value(c.dom(f)).generators()))
            });
            cols[u].induced(&cols[u2], parts)
        })
        .collect();
    let plus = Precosheaf::new_unchecked(c.clone(), a.ring(), values, maps);
    let components = c.objects().map(|u| comparison(&cols[u], &mins[u], a)).collect();
    let lambda = PrecosheafMorphism::new_unchecked(plus.clone(), a.clone(), components);
    Ok((plus, lambda))
}

/// `A_# = A₊₊` with `λ₊₊ = λ₊(A) ∘ λ₊(A₊)`.
pub fn sharp(site: &Site, a: &Precosheaf) -> Result<(Precosheaf, PrecosheafMorphism), CechError> {
    let (p, l1) = plus(site, a)?;
    let (pp, l2) = plus(site, &p)?;
    Ok((pp, l2.then(&l1)?))
}

/// `B⁺(U) = Ȟ⁰(U, B)` with `λ⁺: B → B⁺`.
pub fn plus_presheaf(site: &Site, b: &Presheaf) -> Result<(Presheaf, PresheafMorphism), CechError> {
    same_category(site, b.category())?;
    let c = b.category();
    let mins: Vec<Sieve> = c.objects().map(|u| site.minimal_covering_sieve(u)).collect();
    let lims: Vec<Limit> = c.objects().map(|u| h0_presheaf(b, &mins[u])).collect();
    let values: Vec<PresentedModule> = lims.iter().map(|l| l.module.clone()).collect();
    let maps = c
        .morphisms()
        .map(|g| {
            let (u, u2) = (c.dom(g), c.cod(g));
            let parts: Vec<(Obj, Obj, Matrix)> = mins[u]
                .members()
                .iter()
                .enumerate()
                .map(|(p, &f)| {
                    let s = position(&mins[u2], c.compose(g, f)).expect("minimal covering sieves are stable under the action");
                    (p, s, Matrix::identity(b.value(c.dom(f)).generators()))
                })
                .collect();
            lims[u2].induced(&lims[u], &parts)
        })
        .collect();
    let plus = Presheaf::new_unchecked(c.clone(), b.ring(), values, maps);
    let components = c.objects().map(|u| co_comparison(&lims[u], &mins[u], b)).collect();
    let lambda = PresheafMorphism { source: b.clone(), target: plus.clone(), components };
    Ok((plus, lambda))
}

/// `B^# = B⁺⁺` with `λ⁺⁺ = λ⁺(B⁺) ∘ λ⁺(B)`.
pub fn sharp_presheaf(site: &Site, b: &Presheaf) -> Result<(Presheaf, PresheafMorphism), CechError> {
    let (p, l1) = plus_presheaf(site, b)?;
    let (pp, l2) = plus_presheaf(site, &p)?;
    let components = l1
        .components
        .iter()
        .zip(&l2.components)
        .map(|(x, y)| x.then(y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((pp.clone(), PresheafMorphism { source: b.clone(), target: pp, components }))
}

fn first_failure(site: &Site, c: &crate::fincat::FinCategory, test: impl Fn(&Sieve) -> Option<String>) -> Result<(), SieveFailure> {
    for u in c.objects() {
        for r in site.covering_sieves(u) {
            if let Some(detail) = test(r) {
                return Err(SieveFailure { object: u, sieve: r.clone(), detail });
            }
        }
    }
    Ok(())
}

/// `H₀(R, A) → A(U)` is an isomorphism for every covering sieve.
pub fn is_cosheaf(site: &Site, a: &Precosheaf) -> Result<Result<(), SieveFailure>, CechError> {
    same_category(site, a.category())?;
    Ok(first_failure(site, a.category(), |r| {
        let m = comparison(&h0_sieve(a, r), r, a);
        if !m.is_surjective() {
            Some("H₀(R, A) → A(U) is not surjective".into())
        } else if !m.is_injective() {
            Some("H₀(R, A) → A(U) is not injective".into())
        } else {
            None
        }
    }))
}

/// `H₀(R, A) → A(U)` is an epimorphism for every covering sieve.
pub fn is_coseparated(site: &Site, a: &Precosheaf) -> Result<Result<(), SieveFailure>, CechError> {
    same_category(site, a.category())?;
    Ok(first_failure(site, a.category(), |r| {
        (!comparison(&h0_sieve(a, r), r, a).is_surjective()).then(|| "H₀(R, A) → A(U) is not surjective".into())
    }))
}

/// `B(U) → H⁰(R, B)` is an isomorphism for every covering sieve.
pub fn is_sheaf(site: &Site, b: &Presheaf) -> Result<Result<(), SieveFailure>, CechError> {
    same_category(site, b.category())?;
    Ok(first_failure(site, b.category(), |r| {
        let m = co_comparison(&h0_presheaf(b, r), r, b);
        if !m.is_injective() {
            Some("B(U) → H⁰(R, B) is not injective".into())
        } else if !m.is_surjective() {
            Some("B(U) → H⁰(R, B) is not surjective".into())
        } else {
            None
        }
    }))
}

/// `B(U) → H⁰(R, B)` is a monomorphism for every covering sieve.
pub fn is_separated(site: &Site, b: &Presheaf) -> Result<Result<(), SieveFailure>, CechError> {
    same_category(site, b.category())?;
    Ok(first_failure(site, b.category(), |r| {
        (!co_comparison(&h0_presheaf(b, r), r, b).is_injective()).then(|| "B(U) → H⁰(R, B) is not injective".into())
    }))
}

/// Every action map `A(V) → A(U)` is a monomorphism. Only meaningful on a
/// poset site; otherwise rejected. Returns a failing morphism.
pub fn is_flabby(site: &Site, a: &Precosheaf) -> Result<Option<Mor>, CechError> {
    same_category(site, a.category())?;
    let c = a.category();
    if !c.is_preorder() {
        return Err(CechError::NotAPoset);
    }
    Ok(c.morphisms().find(|&f| !a.map(f).is_injective()))
}

/// `H_s(R, A) = 0` for `0 < s ≤ n_max` and every covering sieve `R`.
pub fn is_flask(site: &Site, a: &Precosheaf, n_max: usize) -> Result<Result<(), SieveFailure>, CechError> {
    same_category(site, a.category())?;
    Ok(first_failure(site, a.category(), |r| {
        let (_, cx) = roos_reduced(r, a, n_max + 1);
        (1..=n_max).find(|&s| !cx.homology(s).expect("degree in range").module.is_zero()).map(|s| format!("H_{s}(R, A) ≠ 0"))
    }))
}

/// The constant cosheaf `M_#` on a finite space: `M^{π₀(U)}` on each open,
/// each component of `U` sent to the component of `U'` containing it.
pub fn constant_cosheaf(x: &FinSpace, m: &PresentedModule) -> Precosheaf {
    let cat = std::sync::Arc::new(x.open_category());
    let comps: Vec<_> = (0..x.opens().len()).map(|k| x.connected_components(k)).collect();
    let g = m.generators();
    let values: Vec<PresentedModule> = comps
        .iter()
        .map(|cs| crate::kmod::direct_sum(m.ring(), &vec![m.clone(); cs.len()]).expect("same ring").module)
        .collect();
    let maps = cat
        .morphisms()
        .map(|f| {
            let (u, v) = (cat.dom(f), cat.cod(f));
            let mut mat = Matrix::zeros(values[u].generators(), values[v].generators());
            for (i, comp) in comps[u].iter().enumerate() {
                let p = comp.iter().next().expect("components are nonempty");
                let j = comps[v].iter().position(|d| d.contains(p)).expect("U ⊆ V");
                mat.add_block(i * g, j * g, &Matrix::identity(g), 1);
            }
            ModuleMap::new_unchecked(values[u].clone(), values[v].clone(), mat)
        })
        .collect();
    Precosheaf::new_unchecked(cat, m.ring(), values, maps)
}
