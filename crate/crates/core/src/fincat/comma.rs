use super::category::{Arrow, FinCategory, Mor, Obj};
use super::sieve::Sieve;

/// The comma category `C_R` of a sieve `R` on `U`: objects are members
/// `i: V → U` of `R`; morphisms `i → j` are `h: V_i → V_j` with `j ∘ h = i`.
#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub category: FinCategory,
    /// Object `k` of `category` is the member `members[k]` of the sieve.
    pub members: Vec<Mor>,
    /// Morphism `m` of `category` is `underlying[m]` in the base category.
    pub underlying: Vec<Mor>,
}

impl CommaCategory {
    /// Domain of the member at object `k`, as an object of the base.
    pub fn base_object(&self, base: &FinCategory, k: Obj) -> Obj {
        base.dom(self.members[k])
    }

    pub fn object_of_member(&self, member: Mor) -> Option<Obj> {
        self.members.iter().position(|&m| m == member)
    }
}

pub fn comma_sieve(c: &FinCategory, r: &Sieve) -> CommaCategory {
    let members: Vec<Mor> = r.members().iter().copied().collect();
    let objects: Vec<Obj> = members.iter().map(|&m| c.dom(m)).collect();
    let names = members.iter().map(|&m| c.morphism_name(m).to_string()).collect();
    let (category, underlying) =
        lifted_category(c, &objects, names, |a, b, h| c.compose(members[b], h) == members[a]);
    CommaCategory { category, members, underlying }
}

/// A category whose objects sit over objects of `base` and whose morphisms
/// `a → b` are the base morphisms `h: objects[a] → objects[b]` with
/// `admissible(a, b, h)`. Admissible morphisms must contain identities and
/// be closed under composition. Returns the category and, per morphism, the
/// underlying base morphism.
pub(crate) fn lifted_category(
    base: &FinCategory,
    objects: &[Obj],
    names: Vec<String>,
    admissible: impl Fn(usize, usize, Mor) -> bool,
) -> (FinCategory, Vec<Mor>) {
    let n = objects.len();
    let mut underlying: Vec<Mor> = objects.iter().map(|&o| base.identity(o)).collect();
    let mut arrows = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for &h in base.hom(objects[a], objects[b]) {
                if a == b && base.is_identity(h) {
                    continue;
                }
                if admissible(a, b, h) {
                    arrows.push(Arrow::new(format!("{}[{}->{}]", base.morphism_name(h), names[a], names[b]), a, b));
                    underlying.push(h);
                }
            }
        }
    }
    let index = |u: Mor, a: usize, b: usize| -> Mor {
        if base.is_identity(u) && a == b {
            return a;
        }
        (n..underlying.len())
            .find(|&k| underlying[k] == u && arrows[k - n].dom == a && arrows[k - n].cod == b)
            .expect("admissible morphisms are closed under composition")
    };
    let mut comps = Vec::new();
    for f in n..underlying.len() {
        for g in n..underlying.len() {
            if arrows[f - n].cod == arrows[g - n].dom {
                let h = base.compose(underlying[g], underlying[f]);
                comps.push((g, f, index(h, arrows[f - n].dom, arrows[g - n].cod)));
            }
        }
    }
    let category = FinCategory::new(names, arrows, &comps).expect("lifted category is a category");
    (category, underlying)
}

/// `C/U`, the comma category of the maximal sieve on `u`.
pub fn comma_over(c: &FinCategory, u: Obj) -> CommaCategory {
    comma_sieve(c, &Sieve::maximal(c, u))
}
