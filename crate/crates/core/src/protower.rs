//! Pro-modules indexed by the tower `1 ← 2 ← 3 ← …`: finitely described
//! towers, level morphisms, and one-sided diagnostics (sound certificates,
//! `Unknown`/`Inconclusive` otherwise).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::kmod::{direct_sum, hom_module, CanonicalForm, Int, Matrix, ModuleError, ModuleMap, PresentedModule, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("a tower needs at least one level")]
    Empty,
    #[error("step {n}: {detail}")]
    BadStep { n: usize, detail: String },
    #[error("level morphisms do not compose: {0}")]
    NotComposable(String),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// How levels beyond the stored data are generated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerRule {
    /// Levels `A_1, …, A_k` as given, then `A_n = A_k` with identity steps.
    Stabilized,
    /// `B_n = G^{n+1}` with `r(g₀,…,g_{n+1}) = (g₀ + g_{n+1}, g₁, …, g_n)`.
    ConvergentB { g: PresentedModule },
}

#[derive(Debug)]
struct Data {
    ring: Ring,
    rule: TowerRule,
    prefix: Vec<PresentedModule>,
    /// `prefix_steps[n−1]: A_{n+1} → A_n`.
    prefix_steps: Vec<ModuleMap>,
    /// Builtin levels are those of the unshifted rule at `n + offset`.
    offset: usize,
    /// Generated levels, written once per index.
    cache: Mutex<BTreeMap<usize, (PresentedModule, ModuleMap)>>,
}

/// A tower `A_1 ← A_2 ← A_3 ← …`.
#[derive(Clone, Debug)]
pub struct Tower {
    inner: Arc<Data>,
}

impl Tower {
    /// `A_1, …, A_k` with `steps[n−1]: A_{n+1} → A_n`, stabilized after `A_k`.
    pub fn stabilized(levels: Vec<PresentedModule>, steps: Vec<ModuleMap>) -> Result<Tower, TowerError> {
        let Some(first) = levels.first() else { return Err(TowerError::Empty) };
        let ring = first.ring();
        if steps.len() + 1 != levels.len() {
            return Err(TowerError::BadStep { n: steps.len(), detail: format!("{} levels need {} steps", levels.len(), levels.len() - 1) });
        }
        for (i, f) in steps.iter().enumerate() {
            let n = i + 1;
            if !f.domain().same_presentation(&levels[n]) || !f.codomain().same_presentation(&levels[n - 1]) {
                return Err(TowerError::BadStep { n, detail: "wrong domain or codomain".into() });
            }
            if let Some(relation) = f.ill_defined_relation() {
                return Err(ModuleError::IllDefined { relation }.into());
            }
            if f.ring() != ring {
                return Err(ModuleError::RingMismatch(ring, f.ring()).into());
            }
        }
        Ok(Tower::from_parts(ring, TowerRule::Stabilized, levels, steps))
    }

    /// The constant tower on `m` with identity steps.
    pub fn constant(m: &PresentedModule) -> Tower {
        Tower::from_parts(m.ring(), TowerRule::Stabilized, vec![m.clone()], Vec::new())
    }

    /// The convergent-sequence tower `𝐁` over `G`.
    pub fn convergent(g: &PresentedModule) -> Tower {
        Tower::from_parts(g.ring(), TowerRule::ConvergentB { g: g.clone() }, Vec::new(), Vec::new())
    }

    fn from_parts(ring: Ring, rule: TowerRule, prefix: Vec<PresentedModule>, prefix_steps: Vec<ModuleMap>) -> Tower {
        Tower { inner: Arc::new(Data { ring, rule, prefix, prefix_steps, offset: 0, cache: Mutex::new(BTreeMap::new()) }) }
    }

    pub fn ring(&self) -> Ring {
        self.inner.ring
    }

    pub fn rule(&self) -> &TowerRule {
        &self.inner.rule
    }

    /// The explicit levels of a stabilized tower (empty for builtins).
    pub fn prefix(&self) -> &[PresentedModule] {
        &self.inner.prefix
    }

    pub fn prefix_steps(&self) -> &[ModuleMap] {
        &self.inner.prefix_steps
    }

    /// Level after which a stabilized tower is constant; `None` for builtins.
    pub fn stable_from(&self) -> Option<usize> {
        match self.inner.rule {
            TowerRule::Stabilized => Some(self.inner.prefix.len()),
            TowerRule::ConvergentB { .. } => None,
        }
    }

    /// `A_n` and the step `A_{n+1} → A_n`, generated on first use.
    fn generated(&self, n: usize) -> (PresentedModule, ModuleMap) {
        let mut cache = self.inner.cache.lock().expect("cache lock");
        if let Some(v) = cache.get(&n) {
            return v.clone();
        }
        let d = &self.inner;
        let v = match &d.rule {
            TowerRule::Stabilized => {
                let k = d.prefix.len();
                let level = d.prefix[n.min(k) - 1].clone();
                let step = if n < k { d.prefix_steps[n - 1].clone() } else { ModuleMap::identity(&level) };
                (level, step)
            }
            TowerRule::ConvergentB { g } => {
                let n = n + d.offset;
                let power = |k: usize| direct_sum(d.ring, &vec![g.clone(); k]).expect("one ring").module;
                let (level, next) = (power(n + 1), power(n + 2));
                let k = g.generators();
                let mut m = Matrix::zeros(next.generators(), level.generators());
                let id = Matrix::identity(k);
                for i in 0..=n {
                    m.set_block(i * k, i * k, &id);
                }
                m.set_block((n + 1) * k, 0, &id);
                (level.clone(), ModuleMap::new_unchecked(next, level, m))
            }
        };
        cache.insert(n, v.clone());
        v
    }

    /// `A_n`, for `n ≥ 1`.
    pub fn level(&self, n: usize) -> PresentedModule {
        assert!(n >= 1, "levels start at 1");
        self.generated(n).0
    }

    /// `A_{n+1} → A_n`, for `n ≥ 1`.
    pub fn step(&self, n: usize) -> ModuleMap {
        assert!(n >= 1, "levels start at 1");
        self.generated(n).1
    }

    /// The composite `A_j → A_i` for `j ≥ i`.
    pub fn composite(&self, j: usize, i: usize) -> ModuleMap {
        assert!(j >= i && i >= 1);
        let mut f = ModuleMap::identity(&self.level(j));
        for n in (i..j).rev() {
            f = f.then(&self.step(n)).expect("consecutive steps compose");
        }
        f
    }

    /// The tower `n ↦ A_{n+k}`.
    pub fn shifted(&self, k: usize) -> Tower {
        let d = &self.inner;
        match &d.rule {
            TowerRule::Stabilized => {
                let last = d.prefix.len().max(k + 1);
                let levels = (1..=last - k).map(|n| self.level(n + k)).collect();
                let steps = (1..last - k).map(|n| self.step(n + k)).collect();
                Tower::from_parts(d.ring, TowerRule::Stabilized, levels, steps)
            }
            TowerRule::ConvergentB { .. } => Tower {
                inner: Arc::new(Data {
                    ring: d.ring,
                    rule: d.rule.clone(),
                    prefix: Vec::new(),
                    prefix_steps: Vec::new(),
                    offset: d.offset + k,
                    cache: Mutex::new(BTreeMap::new()),
                }),
            },
        }
    }

    /// Index shift applied by builtin rules (nonzero only for shifted builtins).
    pub fn offset(&self) -> usize {
        self.inner.offset
    }
}

/// `is_zero_up_to`: `Zero` only with a certificate valid for every level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ZeroVerdict {
    /// For each level `i`, a level `j ≥ i` whose composite `A_j → A_i` is zero.
    Zero { witnesses: Vec<(usize, usize)> },
    Unknown { reason: String },
}

/// A nonzero `a ∈ ker(A_{i₀+1} → A_{i₀})` lying in the image of `A_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub level: usize,
    #[serde(with = "crate::kmod::int_vec")]
    pub element: Vec<Int>,
    pub source_level: usize,
    #[serde(with = "crate::kmod::int_vec")]
    pub preimage: Vec<Int>,
}

/// `rudimentary_obstruction`: `Obstructed` certifies the tower is not
/// isomorphic to a single module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum RudimentaryVerdict {
    Obstructed { witnesses: Vec<ObstructionWitness> },
    Inconclusive { reason: String },
}

/// Levels that must be inspected so that a finite check speaks for the
/// whole tower: a stabilized tower must be examined past its last step.
fn horizon(t: &Tower, bound: usize) -> usize {
    t.stable_from().map_or(bound, |k| bound.max(k + 1))
}

/// Looks for composites `A_j → A_i` equal to zero, for every `i` up to the
/// bound. A zero composite stays zero when `j` grows, so the certificate
/// only has to cover the levels that the rule cannot vouch for.
pub fn is_zero_up_to(t: &Tower, bound: usize) -> ZeroVerdict {
    let bound = horizon(t, bound.max(1));
    let mut witnesses = Vec::new();
    for i in 1..=bound {
        match (i..=bound).find(|&j| t.composite(j, i).is_zero()) {
            Some(j) => witnesses.push((i, j)),
            None => return ZeroVerdict::Unknown { reason: format!("no composite into level {i} from levels ≤ {bound} vanishes") },
        }
    }
    match t.rule() {
        // past the last explicit level every step is the identity, so a
        // witness for the last level means that level is zero
        TowerRule::Stabilized => ZeroVerdict::Zero { witnesses },
        TowerRule::ConvergentB { g } if g.is_zero() => ZeroVerdict::Zero { witnesses },
        TowerRule::ConvergentB { .. } => {
            ZeroVerdict::Unknown { reason: "levels beyond the bound are not covered by the rule".into() }
        }
    }
}

/// For every `i₀ < N`, a nonzero element of `ker(A_{i₀+1} → A_{i₀})` in the
/// image of `A_N → A_{i₀+1}`. The certificate rules out any isomorphism with
/// a single module when it persists to every `N`, which holds for builtin
/// rules (their steps are surjective, and the kernel of each step is nonzero
/// exactly when `G ≠ 0`). Stabilized towers are always inspected past their
/// last step, where the kernel vanishes: they are single modules.
pub fn rudimentary_obstruction(t: &Tower, bound: usize) -> RudimentaryVerdict {
    let n = horizon(t, bound.max(2));
    let mut witnesses = Vec::new();
    for i0 in 1..n {
        let step = t.step(i0);
        let comp = t.composite(n, i0 + 1);
        let meet = step.kernel_lattice().intersect(&comp.image_lattice());
        let target = t.level(i0 + 1);
        let found = meet.basis().rows_iter().find(|r| !target.is_zero_element(r)).map(|r| normalize_sign(r.to_vec()));
        let Some(element) = found else {
            return RudimentaryVerdict::Inconclusive {
                reason: format!("ker(A_{} → A_{i0}) meets the image of A_{n} trivially", i0 + 1),
            };
        };
        let point = PresentedModule::free(t.ring(), 1);
        let a = ModuleMap::new_unchecked(point, target, Matrix::from_rows(vec![element.clone()], element.len()));
        let b = comp.lift_through(&a).expect("element lies in the image");
        witnesses.push(ObstructionWitness { level: i0, element, source_level: n, preimage: b.matrix().row(0).to_vec() });
    }
    match t.rule() {
        TowerRule::ConvergentB { g } if !g.is_zero() => {
            debug_assert!((1..n).all(|i| t.step(i).is_surjective()));
            RudimentaryVerdict::Obstructed { witnesses }
        }
        _ => RudimentaryVerdict::Inconclusive { reason: "the certificate is not known to persist beyond the bound".into() },
    }
}

fn normalize_sign(mut v: Vec<Int>) -> Vec<Int> {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    v
}

/// `C_n = Hom(A_n, M)` with transitions `C_n → C_{n+1}` dual to the steps.
#[derive(Clone, Debug)]
pub struct PairingColimit {
    /// `C_1, …, C_N`.
    pub modules: Vec<PresentedModule>,
    /// `transitions[n−1]: C_n → C_{n+1}`.
    pub transitions: Vec<ModuleMap>,
    /// `C_N`, the colimit of the truncated sequence.
    pub colimit: PresentedModule,
    /// Whether the transitions are isomorphisms from some `n₀ ≤ N` on, for
    /// the whole tower.
    pub stabilized: bool,
    pub stable_from: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingSummary {
    pub modules: Vec<CanonicalForm>,
    pub colimit: CanonicalForm,
    pub stabilized: bool,
    pub stable_from: Option<usize>,
}

impl PairingColimit {
    pub fn summary(&self) -> PairingSummary {
        PairingSummary {
            modules: self.modules.iter().map(|m| m.canonicalize()).collect(),
            colimit: self.colimit.canonicalize(),
            stabilized: self.stabilized,
            stable_from: self.stable_from,
        }
    }
}

/// The truncation at `N` of `colim_n Hom(A_n, M)`.
pub fn pairing_colimit(t: &Tower, m: &PresentedModule, bound: usize) -> Result<PairingColimit, TowerError> {
    if t.ring() != m.ring() {
        return Err(ModuleError::RingMismatch(t.ring(), m.ring()).into());
    }
    let bound = bound.max(1);
    let last = horizon(t, bound);
    let homs = (1..=last).map(|n| hom_module(&t.level(n), m)).collect::<Result<Vec<_>, _>>()?;
    let transitions: Vec<ModuleMap> =
        (1..last).map(|n| homs[n - 1].precompose(&t.step(n), &homs[n])).collect::<Result<_, _>>()?;
    let iso_from = |n0: usize| transitions[n0 - 1..].iter().all(|f| f.is_isomorphism());
    let stable_from = match t.rule() {
        TowerRule::Stabilized => (1..=bound).find(|&n0| n0 >= last || iso_from(n0)),
        // Hom(G^{n+1}, M) = Hom(G, M)^{n+1} grows unless Hom(G, M) = 0
        TowerRule::ConvergentB { g } => hom_module(g, m)?.module.is_zero().then_some(1),
    };
    let modules: Vec<PresentedModule> = homs.iter().take(bound).map(|h| h.module.clone()).collect();
    Ok(PairingColimit {
        colimit: modules[bound - 1].clone(),
        transitions: transitions.into_iter().take(bound - 1).collect(),
        modules,
        stabilized: stable_from.is_some(),
        stable_from,
    })
}

/// Components `f_n: A_n → A'_n` for `n = 1..=len`; beyond that the
/// morphism is determined by the last component when both towers are
/// stabilized there.
#[derive(Clone, Debug)]
pub struct LevelMorphism {
    pub source: Tower,
    pub target: Tower,
    pub components: Vec<ModuleMap>,
}

impl LevelMorphism {
    pub fn identity(t: &Tower, len: usize) -> LevelMorphism {
        LevelMorphism { source: t.clone(), target: t.clone(), components: (1..=len).map(|n| ModuleMap::identity(&t.level(n))).collect() }
    }

    /// First `n` whose square `f_n ∘ step = step ∘ f_{n+1}` fails.
    pub fn first_bad_square(&self) -> Option<usize> {
        (1..self.components.len()).find(|&n| {
            let a = self.components[n].then(&self.target.step(n));
            let b = self.source.step(n).then(&self.components[n - 1]);
            !matches!((a, b), (Ok(a), Ok(b)) if a.equals(&b))
        })
    }
}

/// Whether every square of `f` commutes.
pub fn check_level(f: &LevelMorphism) -> bool {
    f.first_bad_square().is_none()
}

/// `g ∘ f`, levelwise.
pub fn compose_level(f: &LevelMorphism, g: &LevelMorphism) -> Result<LevelMorphism, TowerError> {
    if f.components.len() != g.components.len() {
        return Err(TowerError::NotComposable(format!("{} vs {} components", f.components.len(), g.components.len())));
    }
    let components = f
        .components
        .iter()
        .zip(&g.components)
        .map(|(a, b)| a.then(b).map_err(|e| TowerError::NotComposable(e.to_string())))
        .collect::<Result<_, _>>()?;
    Ok(LevelMorphism { source: f.source.clone(), target: g.target.clone(), components })
}
