use std::collections::BTreeSet;

use super::category::{FinCategory, Mor, Obj};
use super::CategoryError;

/// A set of morphisms into `target`, closed under precomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    target: Obj,
    members: BTreeSet<Mor>,
}

impl Sieve {
    /// Checks codomains and closure under precomposition.
    pub fn new(c: &FinCategory, target: Obj, members: impl IntoIterator<Item = Mor>) -> Result<Sieve, CategoryError> {
        let members: BTreeSet<Mor> = members.into_iter().collect();
        for &f in &members {
            if c.cod(f) != target {
                return Err(CategoryError::NotASieve(format!("{} does not end at {}", c.morphism_name(f), c.object_name(target))));
            }
            for &g in c.morphisms_into(c.dom(f)) {
                if !members.contains(&c.compose(f, g)) {
                    return Err(CategoryError::NotASieve(format!(
                        "{} ∘ {} is missing",
                        c.morphism_name(f),
                        c.morphism_name(g)
                    )));
                }
            }
        }
        Ok(Sieve { target, members })
    }

    /// `h_U`: every morphism into `u`.
    pub fn maximal(c: &FinCategory, u: Obj) -> Sieve {
        Sieve { target: u, members: c.morphisms_into(u).iter().copied().collect() }
    }

    pub fn empty(u: Obj) -> Sieve {
        Sieve { target: u, members: BTreeSet::new() }
    }

    /// Smallest sieve containing the given morphisms into `u`.
    pub fn generated_by(c: &FinCategory, u: Obj, legs: &[Mor]) -> Sieve {
        let mut members = BTreeSet::new();
        for &l in legs {
            debug_assert_eq!(c.cod(l), u);
            for &g in c.morphisms_into(c.dom(l)) {
                members.insert(c.compose(l, g));
            }
        }
        Sieve { target: u, members }
    }

    pub fn target(&self) -> Obj {
        self.target
    }

    pub fn members(&self) -> &BTreeSet<Mor> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: Mor) -> bool {
        self.members.contains(&f)
    }

    pub fn is_subset_of(&self, other: &Sieve) -> bool {
        self.target == other.target && self.members.is_subset(&other.members)
    }

    pub fn intersect(&self, other: &Sieve) -> Sieve {
        debug_assert_eq!(self.target, other.target);
        Sieve { target: self.target, members: self.members.intersection(&other.members).copied().collect() }
    }

    /// `f^*S = {g : f ∘ g ∈ S}`, a sieve on the domain of `f`.
    pub fn pullback(&self, c: &FinCategory, f: Mor) -> Sieve {
        debug_assert_eq!(c.cod(f), self.target);
        let v = c.dom(f);
        let members = c.morphisms_into(v).iter().copied().filter(|&g| self.contains(c.compose(f, g))).collect();
        Sieve { target: v, members }
    }

    /// Whether the sieve contains the identity (equivalently, is maximal).
    pub fn is_maximal(&self, c: &FinCategory) -> bool {
        self.contains(c.identity(self.target))
    }

    /// Every sieve on `u`, in a deterministic order.
    pub fn all_on(c: &FinCategory, u: Obj) -> Vec<Sieve> {
        let into = c.morphisms_into(u);
        let principal: Vec<BTreeSet<Mor>> = into
            .iter()
            .map(|&f| c.morphisms_into(c.dom(f)).iter().map(|&g| c.compose(f, g)).collect())
            .collect();
        let position = |f: Mor| into.iter().position(|&x| x == f).expect("member into u");
        let mut out = Vec::new();
        let mut included = vec![false; into.len()];
        let mut excluded = vec![false; into.len()];
        enumerate(0, &principal, &position, &mut included, &mut excluded, &mut |inc| {
            let members = into.iter().zip(inc).filter(|(_, &b)| b).map(|(&f, _)| f).collect();
            out.push(Sieve { target: u, members });
        });
        out.sort();
        out
    }
}

fn enumerate(
    k: usize,
    principal: &[BTreeSet<Mor>],
    position: &dyn Fn(Mor) -> usize,
    included: &mut Vec<bool>,
    excluded: &mut Vec<bool>,
    emit: &mut dyn FnMut(&[bool]),
) {
    if k == principal.len() {
        emit(included);
        return;
    }
    if included[k] {
        enumerate(k + 1, principal, position, included, excluded, emit);
        return;
    }
    // leave the k-th morphism out
    excluded[k] = true;
    enumerate(k + 1, principal, position, included, excluded, emit);
    excluded[k] = false;
    // put it in, together with everything it forces
    let forced: Vec<usize> = principal[k].iter().map(|&f| position(f)).collect();
    if forced.iter().all(|&i| !excluded[i]) {
        let newly: Vec<usize> = forced.into_iter().filter(|&i| !included[i]).collect();
        for &i in &newly {
            included[i] = true;
        }
        enumerate(k + 1, principal, position, included, excluded, emit);
        for &i in &newly {
            included[i] = false;
        }
    }
}

/// A family of morphisms `{U_i → U}` with a common codomain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cover {
    target: Obj,
    legs: Vec<Mor>,
}

impl Cover {
    pub fn new(c: &FinCategory, target: Obj, legs: Vec<Mor>) -> Result<Cover, CategoryError> {
        if let Some(&l) = legs.iter().find(|&&l| c.cod(l) != target) {
            return Err(CategoryError::NotACover(format!("{} does not end at {}", c.morphism_name(l), c.object_name(target))));
        }
        Ok(Cover { target, legs })
    }

    pub fn target(&self) -> Obj {
        self.target
    }

    pub fn legs(&self) -> &[Mor] {
        &self.legs
    }

    pub fn sieve(&self, c: &FinCategory) -> Sieve {
        Sieve::generated_by(c, self.target, &self.legs)
    }

    /// Whether every leg of `self` factors through some leg of `other`.
    pub fn refines(&self, c: &FinCategory, other: &Cover) -> bool {
        self.refinement(c, other).is_some()
    }

    /// For each leg `j` of `self`, a leg `λ(j)` of `other` and a morphism
    /// `dom(self_j) → dom(other_λ(j))` over the target; the first choice in
    /// index order is taken.
    pub fn refinement(&self, c: &FinCategory, other: &Cover) -> Option<Vec<(usize, Mor)>> {
        if self.target != other.target {
            return None;
        }
        self.legs
            .iter()
            .map(|&l| {
                other.legs.iter().enumerate().find_map(|(i, &w)| {
                    c.hom(c.dom(l), c.dom(w)).iter().find(|&&h| c.compose(w, h) == l).map(|&h| (i, h))
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean_lattice() -> FinCategory {
        let sets = [0b00u8, 0b01, 0b10, 0b11];
        FinCategory::preorder(vec!["e".into(), "a".into(), "b".into(), "ab".into()], |x, y| sets[x] & !sets[y] == 0).unwrap()
    }

    #[test]
    fn sieves_on_a_poset_are_down_sets() {
        let c = boolean_lattice();
        // down-sets of {e, a, b, ab} containing ... : ∅, {e}, {e,a}, {e,b}, {e,a,b}, all
        assert_eq!(Sieve::all_on(&c, 3).len(), 6);
        assert_eq!(Sieve::all_on(&c, 0).len(), 2);
        for s in Sieve::all_on(&c, 3) {
            assert!(Sieve::new(&c, 3, s.members().iter().copied()).is_ok());
        }
    }

    #[test]
    fn generated_sieve_is_smallest() {
        let c = boolean_lattice();
        let legs = [c.hom(1, 3)[0], c.hom(2, 3)[0]];
        let s = Sieve::generated_by(&c, 3, &legs);
        assert_eq!(s.len(), 3);
        assert!(!s.is_maximal(&c));
        let cands: Vec<Sieve> = Sieve::all_on(&c, 3).into_iter().filter(|t| legs.iter().all(|&l| t.contains(l))).collect();
        assert!(cands.iter().all(|t| s.is_subset_of(t)));
        assert!(Sieve::generated_by(&c, 3, &[]).is_empty());
        assert_eq!(Sieve::generated_by(&c, 3, &[c.identity(3)]), Sieve::maximal(&c, 3));
    }

    #[test]
    fn pullback_of_sieve() {
        let c = boolean_lattice();
        let s = Sieve::generated_by(&c, 3, &[c.hom(1, 3)[0]]);
        let p = s.pullback(&c, c.hom(2, 3)[0]);
        assert_eq!(p.target(), 2);
        assert_eq!(p.members().iter().copied().collect::<Vec<_>>(), vec![c.hom(0, 2)[0]]);
    }

    #[test]
    fn non_sieve_rejected() {
        let c = boolean_lattice();
        assert!(Sieve::new(&c, 3, [c.hom(1, 3)[0]]).is_err());
    }

    #[test]
    fn refinement_of_covers() {
        let c = boolean_lattice();
        let fine = Cover::new(&c, 3, vec![c.hom(1, 3)[0], c.hom(2, 3)[0]]).unwrap();
        let coarse = Cover::new(&c, 3, vec![c.identity(3)]).unwrap();
        assert!(fine.refines(&c, &coarse));
        assert!(!coarse.refines(&c, &fine));
    }
}
