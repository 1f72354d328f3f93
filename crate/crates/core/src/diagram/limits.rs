use std::sync::Arc;

use super::precosheaf::{Precosheaf, Presheaf};
use crate::fincat::{comma_sieve, Obj, Sieve};
use crate::kmod::{block_map, direct_sum, DirectSum, Int, Lattice, Matrix, ModuleMap, PresentedModule};

/// Colimit of a diagram, presented as a quotient of `⊕ D(o)`; its
/// generators are those of the sum, so elements of `D(o)` embed directly.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub module: PresentedModule,
    /// `D(o) → colim` for every object.
    pub cocone: Vec<ModuleMap>,
    offsets: Vec<usize>,
}

/// Limit of a diagram, presented as a submodule of `⊕ D(o)`.
#[derive(Clone, Debug)]
pub struct Limit {
    pub module: PresentedModule,
    /// `lim → D(o)` for every object.
    pub cone: Vec<ModuleMap>,
    sum: DirectSum,
    /// Generators of `module` written in the generators of the sum.
    embedding: Matrix,
    span: Lattice,
}

/// `coker(⊕_{f} D(dom f) → ⊕_o D(o))`, `x ↦ ι_dom(x) − ι_cod(D(f)x)`, over
/// the non-identity morphisms.
pub fn colim(d: &Precosheaf) -> Colimit {
    let c = d.category();
    let ring = d.ring();
    let objs = direct_sum(ring, d.values()).expect("same ring");
    let arrows: Vec<usize> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let srcs: Vec<PresentedModule> = arrows.iter().map(|&f| d.value(c.dom(f)).clone()).collect();
    let rel = direct_sum(ring, &srcs).expect("same ring");
    let blocks = arrows.iter().enumerate().flat_map(|(k, &f)| {
        let g = d.value(c.dom(f)).generators();
        [(k, c.dom(f), Matrix::identity(g), 1), (k, c.cod(f), d.map(f).matrix().clone(), -1)]
    });
    let phi = block_map(&rel, &objs, blocks);
    let (module, proj) = phi.cokernel();
    let cocone = objs.injections.iter().map(|i| i.then(&proj).expect("composable")).collect();
    Colimit { module, cocone, offsets: objs.offsets }
}

/// `ker(⊕_o D(o) → ⊕_{f} D(cod f))`, `(x_o) ↦ D(f)x_dom − x_cod`.
pub fn lim(d: &Precosheaf) -> Limit {
    let c = d.category();
    let ring = d.ring();
    let objs = direct_sum(ring, d.values()).expect("same ring");
    let arrows: Vec<usize> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let tgts: Vec<PresentedModule> = arrows.iter().map(|&f| d.value(c.cod(f)).clone()).collect();
    let rel = direct_sum(ring, &tgts).expect("same ring");
    let blocks = arrows.iter().enumerate().flat_map(|(k, &f)| {
        let g = d.value(c.cod(f)).generators();
        [(c.dom(f), k, d.map(f).matrix().clone(), 1), (c.cod(f), k, Matrix::identity(g), -1)]
    });
    let phi = block_map(&objs, &rel, blocks);
    let (module, incl) = phi.kernel();
    let cone = objs.projections.iter().map(|p| incl.then(p).expect("composable")).collect();
    let embedding = incl.matrix().clone();
    let span = Lattice::span(&embedding, objs.module.generators(), ring.arith());
    Limit { module, cone, sum: objs, embedding, span }
}

/// Limit of a presheaf, i.e. of the covariant diagram on the opposite.
pub fn lim_presheaf(b: &Presheaf) -> Limit {
    lim(&b.as_opposite())
}

impl Colimit {
    /// Generator offset of the summand for object `o`.
    pub fn offset(&self, o: Obj) -> usize {
        self.offsets[o]
    }

    /// Map `self → other` sending the summand of each object `o` to the
    /// summand of `target(o)` through the given matrix.
    pub fn induced(&self, other: &Colimit, parts: impl IntoIterator<Item = (Obj, Obj, Matrix)>) -> ModuleMap {
        let mut m = Matrix::zeros(self.module.generators(), other.module.generators());
        for (o, t, b) in parts {
            m.add_block(self.offsets[o], other.offsets[t], &b, 1);
        }
        ModuleMap::new_unchecked(self.module.clone(), other.module.clone(), m)
    }
}

impl Limit {
    /// Element of the limit with the given compatible components (a vector
    /// in the generators of `⊕ D(o)`).
    pub fn element(&self, components: &[Int]) -> Option<Vec<Int>> {
        self.span.coords(components)
    }

    pub fn offset(&self, o: Obj) -> usize {
        self.sum.offsets[o]
    }

    /// Map `self → other` whose component at each object `t` of the target
    /// diagram is `matrix · x_source(t)`; `parts` lists `(t, source(t), matrix)`.
    pub fn induced(&self, other: &Limit, parts: &[(Obj, Obj, Matrix)]) -> ModuleMap {
        let mut rows = Vec::with_capacity(self.module.generators());
        for g in 0..self.module.generators() {
            let x = self.embedding.row(g);
            let mut y = vec![Int::from(0); other.sum.module.generators()];
            for (t, s, b) in parts {
                let off = self.sum.offsets[*s];
                let xs = &x[off..off + b.nrows()];
                let img = b.apply(xs);
                let toff = other.sum.offsets[*t];
                for (k, v) in img.into_iter().enumerate() {
                    y[toff + k] += v;
                }
            }
            let ring = self.module.ring();
            let y: Vec<Int> = y.iter().map(|v| ring.reduce(v)).collect();
            rows.push(other.element(&y).expect("induced family is compatible"));
        }
        ModuleMap::new_unchecked(self.module.clone(), other.module.clone(), Matrix::from_rows(rows, other.module.generators()))
    }
}

/// Restriction of `a` along the projection `C_R → C`.
pub(crate) fn restrict_to_sieve(a: &Precosheaf, r: &Sieve) -> Precosheaf {
    let c = a.category();
    let k = comma_sieve(c, r);
    let values: Vec<PresentedModule> = k.members.iter().map(|&m| a.value(c.dom(m)).clone()).collect();
    let maps = k.underlying.iter().map(|&h| a.map(h).clone()).collect();
    Precosheaf::new_unchecked(Arc::new(k.category), a.ring(), values, maps)
}

/// `H₀(R, A) = colim_{C_R} A`, the summands indexed by the members of `R`
/// in increasing order.
pub fn h0_sieve(a: &Precosheaf, r: &Sieve) -> Colimit {
    colim(&restrict_to_sieve(a, r))
}

/// `H⁰(R, B) = lim_{C_R} B`.
pub fn h0_presheaf(b: &Presheaf, r: &Sieve) -> Limit {
    let c = b.category();
    let k = comma_sieve(c, r);
    let values: Vec<PresentedModule> = k.members.iter().map(|&m| b.value(c.dom(m)).clone()).collect();
    let maps = k.underlying.iter().map(|&h| b.map(h).clone()).collect();
    let restricted = Presheaf::new_unchecked(Arc::new(k.category), b.ring(), values, maps);
    lim_presheaf(&restricted)
}
