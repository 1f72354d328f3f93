use std::collections::BTreeSet;
use std::sync::Arc;

use super::category::{FinCategory, Mor, Obj};
use super::sieve::{Cover, Sieve};
use super::CategoryError;

/// How the covering sieves of a [`Site`] were specified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopologyOrigin {
    /// Generated from covering families.
    Pretopology,
    /// Listed directly as sieves; not known to come from covering families
    /// with fiber products.
    Sieves,
    /// Every sieve covers.
    Discrete,
    /// The open-cover topology of a finite space.
    Space,
}

/// A finite category with a Grothendieck topology, stored extensionally.
#[derive(Clone, Debug)]
pub struct Site {
    category: Arc<FinCategory>,
    covering: Vec<Vec<Sieve>>,
    origin: TopologyOrigin,
}

/// Upper bound on morphisms into one object when enumerating all families.
const MAX_FAMILY_MEMBERS: usize = 16;

impl Site {
    /// Topology given by its covering sieves; GT1–GT4 are checked.
    pub fn from_covering_sieves(category: Arc<FinCategory>, covering: Vec<Vec<Sieve>>) -> Result<Site, CategoryError> {
        let covering: Vec<Vec<Sieve>> = covering
            .into_iter()
            .map(|v| {
                let mut v: Vec<Sieve> = v.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
                v.sort();
                v
            })
            .collect();
        if covering.len() != category.num_objects() {
            return Err(CategoryError::NotASieve("one list of covering sieves per object is required".into()));
        }
        let site = Site { category, covering, origin: TopologyOrigin::Sieves };
        site.check_gt()?;
        Ok(site)
    }

    /// Topology generated by covering families: the smallest topology in
    /// which the sieve generated by each family covers.
    pub fn from_pretopology(category: Arc<FinCategory>, covers: &[Cover]) -> Result<Site, CategoryError> {
        let c = &*category;
        let all: Vec<Vec<Sieve>> = c.objects().map(|u| Sieve::all_on(c, u)).collect();
        let mut cov: Vec<BTreeSet<Sieve>> = c.objects().map(|u| BTreeSet::from([Sieve::maximal(c, u)])).collect();
        for k in covers {
            cov[k.target()].insert(k.sieve(c));
        }
        loop {
            let mut changed = false;
            // GT2: supersets
            for u in c.objects() {
                let add: Vec<Sieve> = all[u]
                    .iter()
                    .filter(|s| !cov[u].contains(*s) && cov[u].iter().any(|t| t.is_subset_of(s)))
                    .cloned()
                    .collect();
                changed |= !add.is_empty();
                cov[u].extend(add);
            }
            // GT3: pullbacks
            for u in c.objects() {
                let current: Vec<Sieve> = cov[u].iter().cloned().collect();
                for s in &current {
                    for &f in c.morphisms_into(u) {
                        changed |= cov[c.dom(f)].insert(s.pullback(c, f));
                    }
                }
            }
            // GT4: local character
            for u in c.objects() {
                let add: Vec<Sieve> = all[u]
                    .iter()
                    .filter(|s| !cov[u].contains(*s))
                    .filter(|s| cov[u].iter().any(|t| t.members().iter().all(|&f| cov[c.dom(f)].contains(&s.pullback(c, f)))))
                    .cloned()
                    .collect();
                changed |= !add.is_empty();
                cov[u].extend(add);
            }
            if !changed {
                break;
            }
        }
        let covering = cov.into_iter().map(|s| s.into_iter().collect()).collect();
        let site = Site { category, covering, origin: TopologyOrigin::Pretopology };
        debug_assert!(site.check_gt().is_ok());
        Ok(site)
    }

    /// Every sieve covers.
    pub fn discrete(category: Arc<FinCategory>) -> Site {
        let covering = category.objects().map(|u| Sieve::all_on(&category, u)).collect();
        Site { category, covering, origin: TopologyOrigin::Discrete }
    }

    /// Only maximal sieves cover.
    pub fn trivial(category: Arc<FinCategory>) -> Site {
        let covering = category.objects().map(|u| vec![Sieve::maximal(&category, u)]).collect();
        Site { category, covering, origin: TopologyOrigin::Sieves }
    }

    pub(crate) fn with_origin(category: Arc<FinCategory>, covering: Vec<Vec<Sieve>>, origin: TopologyOrigin) -> Site {
        Site { category, covering, origin }
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    pub fn origin(&self) -> TopologyOrigin {
        self.origin
    }

    /// Covering sieves on `u`, sorted.
    pub fn covering_sieves(&self, u: Obj) -> &[Sieve] {
        &self.covering[u]
    }

    pub fn is_covering(&self, s: &Sieve) -> bool {
        self.covering[s.target()].binary_search(s).is_ok()
    }

    /// The intersection of all covering sieves on `u` (itself covering).
    pub fn minimal_covering_sieve(&self, u: Obj) -> Sieve {
        let mut it = self.covering[u].iter();
        let first = it.next().expect("the maximal sieve covers").clone();
        it.fold(first, |acc, s| acc.intersect(s))
    }

    /// Every family of morphisms into `u` whose generated sieve covers,
    /// ordered by leg set. Families are sets of morphisms; the empty family
    /// appears when the empty sieve covers.
    pub fn covering_families(&self, u: Obj) -> Result<Vec<Cover>, CategoryError> {
        let c = &*self.category;
        let into = c.morphisms_into(u);
        if into.len() > MAX_FAMILY_MEMBERS {
            return Err(CategoryError::TooLarge(format!(
                "{} morphisms into {}; covering families are enumerated only up to {MAX_FAMILY_MEMBERS}",
                into.len(),
                c.object_name(u)
            )));
        }
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << into.len()) {
            let legs: Vec<Mor> = (0..into.len()).filter(|&i| mask >> i & 1 == 1).map(|i| into[i]).collect();
            if self.is_covering(&Sieve::generated_by(c, u, &legs)) {
                out.push(Cover::new(c, u, legs).expect("legs end at u"));
            }
        }
        Ok(out)
    }

    /// Check GT1–GT4 by exhaustive enumeration.
    pub fn check_gt(&self) -> Result<(), CategoryError> {
        let c = &*self.category;
        let fail = |axiom: &'static str, u: Obj, detail: String| {
            Err(CategoryError::Axiom { axiom, object: c.object_name(u).to_string(), detail })
        };
        for u in c.objects() {
            for s in &self.covering[u] {
                if s.target() != u || Sieve::new(c, u, s.members().iter().copied()).is_err() {
                    return fail("sieve", u, format!("{} is not a sieve on this object", self.describe(s)));
                }
            }
        }
        for u in c.objects() {
            if !self.is_covering(&Sieve::maximal(c, u)) {
                return fail("GT1", u, "the maximal sieve does not cover".into());
            }
        }
        let all: Vec<Vec<Sieve>> = c.objects().map(|u| Sieve::all_on(c, u)).collect();
        for u in c.objects() {
            for s in &self.covering[u] {
                if let Some(t) = all[u].iter().find(|t| s.is_subset_of(t) && !self.is_covering(t)) {
                    return fail("GT2", u, format!("{} covers but its superset {} does not", self.describe(s), self.describe(t)));
                }
                for &f in c.morphisms_into(u) {
                    let p = s.pullback(c, f);
                    if !self.is_covering(&p) {
                        return fail(
                            "GT3",
                            u,
                            format!("pullback of {} along {} does not cover", self.describe(s), c.morphism_name(f)),
                        );
                    }
                }
            }
        }
        for u in c.objects() {
            for s in all[u].iter().filter(|s| !self.is_covering(s)) {
                for t in &self.covering[u] {
                    if t.members().iter().all(|&f| self.is_covering(&s.pullback(c, f))) {
                        return fail(
                            "GT4",
                            u,
                            format!("{} is locally covering along {} but does not cover", self.describe(s), self.describe(t)),
                        );
                    }
                }
            }
        }
        Ok(())
    }

    /// Human-readable list of members.
    pub fn describe(&self, s: &Sieve) -> String {
        let names: Vec<&str> = s.members().iter().map(|&f| self.category.morphism_name(f)).collect();
        format!("{{{}}}", names.join(", "))
    }
}
