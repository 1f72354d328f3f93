use std::collections::HashMap;

use super::CategoryError;

/// Index of an object of a [`FinCategory`].
pub type Obj = usize;
/// Index of a morphism of a [`FinCategory`]; identities come first.
pub type Mor = usize;

/// A non-identity generating arrow, as given to [`FinCategory::new`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub dom: Obj,
    pub cod: Obj,
}

impl Arrow {
    pub fn new(name: impl Into<String>, dom: Obj, cod: Obj) -> Arrow {
        Arrow { name: name.into(), dom, cod }
    }
}

/// A finite category with an explicit composition table.
///
/// Morphism `i < n` is the identity of object `i`; the non-identity arrows
/// follow in the order they were supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    names: Vec<String>,
    dom: Vec<Obj>,
    cod: Vec<Obj>,
    /// `table[g * m + f] = g ∘ f` when `cod f = dom g`.
    table: Vec<Option<Mor>>,
    hom: Vec<Vec<Mor>>,
    into: Vec<Vec<Mor>>,
    from: Vec<Vec<Mor>>,
}

impl FinCategory {
    /// Build a category from objects, non-identity arrows and composition
    /// triples `(g, f, h)` meaning `g ∘ f = h` (indices into the full
    /// morphism list, identities first). Composites involving an identity
    /// are implicit. Totality, typing and associativity are checked.
    pub fn new(objects: Vec<String>, arrows: Vec<Arrow>, compositions: &[(Mor, Mor, Mor)]) -> Result<FinCategory, CategoryError> {
        let n = objects.len();
        let mut seen = HashMap::new();
        for o in &objects {
            if seen.insert(o.clone(), ()).is_some() {
                return Err(CategoryError::DuplicateName(o.clone()));
            }
        }
        let mut names: Vec<String> = objects.iter().map(|o| format!("id_{o}")).collect();
        let mut dom: Vec<Obj> = (0..n).collect();
        let mut cod: Vec<Obj> = (0..n).collect();
        let mut name_seen: HashMap<String, ()> = names.iter().map(|s| (s.clone(), ())).collect();
        for a in &arrows {
            if a.dom >= n || a.cod >= n {
                return Err(CategoryError::UnknownObject(format!("endpoint of {}", a.name)));
            }
            if name_seen.insert(a.name.clone(), ()).is_some() {
                return Err(CategoryError::DuplicateName(a.name.clone()));
            }
            names.push(a.name.clone());
            dom.push(a.dom);
            cod.push(a.cod);
        }
        let m = names.len();
        let mut table = vec![None; m * m];
        for f in 0..m {
            table[f * m + dom[f]] = Some(f);
            table[cod[f] * m + f] = Some(f);
        }
        for &(g, f, h) in compositions {
            if g >= m || f >= m || h >= m {
                return Err(CategoryError::UnknownMorphism(format!("index in composition ({g}, {f}, {h})")));
            }
            if cod[f] != dom[g] {
                return Err(CategoryError::NotComposable { g: names[g].clone(), f: names[f].clone() });
            }
            if dom[h] != dom[f] || cod[h] != cod[g] {
                return Err(CategoryError::BadComposite { g: names[g].clone(), f: names[f].clone(), h: names[h].clone() });
            }
            match table[g * m + f] {
                Some(existing) if existing != h => {
                    return Err(CategoryError::ConflictingComposite { g: names[g].clone(), f: names[f].clone() })
                }
                _ => table[g * m + f] = Some(h),
            }
        }
        let mut hom = vec![Vec::new(); n * n];
        let mut into = vec![Vec::new(); n];
        let mut from = vec![Vec::new(); n];
        for f in 0..m {
            hom[dom[f] * n + cod[f]].push(f);
            into[cod[f]].push(f);
            from[dom[f]].push(f);
        }
        let cat = FinCategory { objects, names, dom, cod, table, hom, into, from };
        cat.check_composition()?;
        Ok(cat)
    }

    fn check_composition(&self) -> Result<(), CategoryError> {
        let m = self.num_morphisms();
        for f in 0..m {
            for &g in &self.from[self.cod[f]] {
                if self.table[g * m + f].is_none() {
                    return Err(CategoryError::MissingComposite { g: self.names[g].clone(), f: self.names[f].clone() });
                }
            }
        }
        for f in 0..m {
            for &g in &self.from[self.cod[f]] {
                let gf = self.compose(g, f);
                for &h in &self.from[self.cod[g]] {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(CategoryError::Associativity {
                            h: self.names[h].clone(),
                            g: self.names[g].clone(),
                            f: self.names[f].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Category of a preorder: one arrow `a → b` whenever `le(a, b)`.
    pub fn preorder(objects: Vec<String>, le: impl Fn(Obj, Obj) -> bool) -> Result<FinCategory, CategoryError> {
        let n = objects.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(CategoryError::NotTransitive(objects[a].clone(), objects[c].clone()));
                    }
                }
            }
        }
        let mut index = vec![vec![None; n]; n];
        let mut arrows = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && le(a, b) {
                    index[a][b] = Some(n + arrows.len());
                    arrows.push(Arrow::new(format!("{}->{}", objects[a], objects[b]), a, b));
                }
            }
        }
        let mor = |a: Obj, b: Obj| if a == b { Some(a) } else { index[a][b] };
        let mut comps = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a != b && b != c {
                        if let (Some(f), Some(g)) = (index[a][b], index[b][c]) {
                            comps.push((g, f, mor(a, c).expect("transitive")));
                        }
                    }
                }
            }
        }
        FinCategory::new(objects, arrows, &comps)
    }

    /// Category with only identity morphisms.
    pub fn discrete(objects: Vec<String>) -> Result<FinCategory, CategoryError> {
        FinCategory::new(objects, Vec::new(), &[])
    }

    /// One-object category of a finite monoid. Element `0` is the unit;
    /// `mult[a][b]` is the product `a · b` (read as `a ∘ b`).
    pub fn monoid(object: &str, elements: &[&str], mult: &[Vec<usize>]) -> Result<FinCategory, CategoryError> {
        let k = elements.len();
        let arrows = (1..k).map(|e| Arrow::new(elements[e], 0, 0)).collect();
        let mut comps = Vec::new();
        for a in 1..k {
            for b in 1..k {
                comps.push((a, b, mult[a][b]));
            }
        }
        FinCategory::new(vec![object.to_string()], arrows, &comps)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.names.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        0..self.num_objects()
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Mor> {
        0..self.num_morphisms()
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_name(&self, f: Mor) -> &str {
        &self.names[f]
    }

    pub fn object_index(&self, name: &str) -> Option<Obj> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<Mor> {
        self.names.iter().position(|o| o == name)
    }

    pub fn dom(&self, f: Mor) -> Obj {
        self.dom[f]
    }

    pub fn cod(&self, f: Mor) -> Obj {
        self.cod[f]
    }

    pub fn identity(&self, o: Obj) -> Mor {
        o
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        f < self.num_objects()
    }

    /// `g ∘ f`, panicking if the pair is not composable.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f).unwrap_or_else(|| panic!("{} ∘ {} is not composable", self.names[g], self.names[f]))
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.table[g * self.num_morphisms() + f]
    }

    /// Morphisms `a → b`.
    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        &self.hom[a * self.num_objects() + b]
    }

    /// All morphisms with codomain `b`.
    pub fn morphisms_into(&self, b: Obj) -> &[Mor] {
        &self.into[b]
    }

    /// All morphisms with domain `a`.
    pub fn morphisms_from(&self, a: Obj) -> &[Mor] {
        &self.from[a]
    }

    /// Every hom-set has at most one element.
    pub fn is_preorder(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    pub fn is_mono(&self, f: Mor) -> bool {
        let a = self.dom(f);
        let into = self.morphisms_into(a);
        into.iter().all(|&g| {
            into.iter().all(|&h| g == h || self.dom(g) != self.dom(h) || self.compose(f, g) != self.compose(f, h))
        })
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.hom(self.cod(f), self.dom(f)).iter().any(|&g| {
            self.compose(g, f) == self.identity(self.dom(f)) && self.compose(f, g) == self.identity(self.cod(f))
        })
    }

    /// Non-identity arrows as supplied to [`FinCategory::new`].
    pub fn arrows(&self) -> Vec<Arrow> {
        (self.num_objects()..self.num_morphisms())
            .map(|f| Arrow::new(self.names[f].clone(), self.dom[f], self.cod[f]))
            .collect()
    }

    /// Composition triples `(g, f, g∘f)` among non-identity arrows.
    pub fn composition_triples(&self) -> Vec<(Mor, Mor, Mor)> {
        let n = self.num_objects();
        let mut out = Vec::new();
        for f in n..self.num_morphisms() {
            for &g in self.morphisms_from(self.cod(f)) {
                if g >= n {
                    out.push((g, f, self.compose(g, f)));
                }
            }
        }
        out
    }

    /// The opposite category, with the same object and morphism indices.
    pub fn opposite(&self) -> FinCategory {
        let arrows = (self.num_objects()..self.num_morphisms())
            .map(|f| Arrow::new(format!("{}^op", self.names[f]), self.cod[f], self.dom[f]))
            .collect();
        let comps: Vec<_> = self.composition_triples().into_iter().map(|(g, f, h)| (f, g, h)).collect();
        FinCategory::new(self.objects.clone(), arrows, &comps).expect("opposite of a valid category")
    }

    /// A terminal object, if any.
    pub fn terminal_object(&self) -> Option<Obj> {
        self.objects().find(|&t| self.objects().all(|a| self.hom(a, t).len() == 1))
    }

    /// Find `u: src → dst` with `legs_dst[j] ∘ u = legs_src[j]` for every `j`.
    pub fn factorizations(&self, src: Obj, dst: Obj, legs_src: &[Mor], legs_dst: &[Mor]) -> Vec<Mor> {
        self.hom(src, dst)
            .iter()
            .copied()
            .filter(|&u| legs_src.iter().zip(legs_dst).all(|(&s, &d)| self.compose(d, u) == s))
            .collect()
    }

    /// Limit of the cospan formed by `legs` (all with a common codomain):
    /// an apex with projections `p_j` such that every `legs[j] ∘ p_j`
    /// agrees, universal among such cones. Found by exhaustive search.
    pub fn wide_pullback(&self, legs: &[Mor]) -> Option<Cone> {
        assert!(!legs.is_empty(), "wide pullback of an empty family");
        let u = self.cod(legs[0]);
        debug_assert!(legs.iter().all(|&l| self.cod(l) == u));
        let cones = self.cones(legs);
        cones.iter().find(|c| {
            cones.iter().all(|q| self.factorizations(q.apex, c.apex, &q.projections, &c.projections).len() == 1)
        }).cloned()
    }

    /// Every cone over the cospan `legs`.
    fn cones(&self, legs: &[Mor]) -> Vec<Cone> {
        let mut out = Vec::new();
        for p in self.objects() {
            let choices: Vec<&[Mor]> = legs.iter().map(|&l| self.hom(p, self.dom(l))).collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; legs.len()];
            loop {
                let projections: Vec<Mor> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                let first = self.compose(legs[0], projections[0]);
                if legs.iter().zip(&projections).all(|(&l, &q)| self.compose(l, q) == first) {
                    out.push(Cone { apex: p, projections });
                }
                let mut k = 0;
                while k < legs.len() {
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == legs.len() {
                    break;
                }
            }
        }
        out
    }
}

/// An object with one projection per leg of a cospan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    pub apex: Obj,
    pub projections: Vec<Mor>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn chain_poset() {
        let c = FinCategory::preorder(names(&["0", "1", "2"]), |a, b| a <= b).unwrap();
        assert_eq!(c.num_morphisms(), 6);
        assert!(c.is_preorder());
        assert_eq!(c.terminal_object(), Some(2));
        let f = c.hom(0, 1)[0];
        let g = c.hom(1, 2)[0];
        assert_eq!(c.compose(g, f), c.hom(0, 2)[0]);
        assert!(c.is_mono(f));
    }

    #[test]
    fn missing_composite_is_reported() {
        let arrows = vec![Arrow::new("f", 0, 1), Arrow::new("g", 1, 2)];
        let err = FinCategory::new(names(&["a", "b", "c"]), arrows, &[]).unwrap_err();
        assert_eq!(err, CategoryError::MissingComposite { g: "g".into(), f: "f".into() });
    }

    #[test]
    fn broken_associativity_is_reported() {
        // e∘z = z, z∘e = z, z∘z = e, e∘e = z: (e∘z)∘z = e but e∘(z∘z) = z
        let arrows = vec![Arrow::new("e", 0, 0), Arrow::new("z", 0, 0)];
        let comps = [(1, 2, 2), (2, 1, 2), (2, 2, 1), (1, 1, 2)];
        let err = FinCategory::new(names(&["*"]), arrows, &comps).unwrap_err();
        assert!(matches!(err, CategoryError::Associativity { .. }));
    }

    #[test]
    fn monoid_category() {
        // {1, x} with x·x = x
        let c = FinCategory::monoid("*", &["1", "x"], &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(c.num_morphisms(), 2);
        assert!(!c.is_mono(1));
        assert!(!c.is_preorder());
    }

    #[test]
    fn meets_as_pullbacks() {
        // subsets of {0,1} ordered by inclusion: 0=∅, 1={0}, 2={1}, 3={0,1}
        let sets = [0b00u8, 0b01, 0b10, 0b11];
        let c = FinCategory::preorder(names(&["e", "a", "b", "ab"]), |x, y| sets[x] & !sets[y] == 0).unwrap();
        let fa = c.hom(1, 3)[0];
        let fb = c.hom(2, 3)[0];
        assert_eq!(c.wide_pullback(&[fa, fb]).unwrap().apex, 0);
        assert_eq!(c.wide_pullback(&[fa, c.identity(3)]).unwrap().apex, 1);
        assert_eq!(c.wide_pullback(&[fa, fa]).unwrap().apex, 1);
    }

    #[test]
    fn opposite_round_trip() {
        let c = FinCategory::preorder(names(&["0", "1"]), |a, b| a <= b).unwrap();
        let op = c.opposite();
        assert_eq!(op.hom(1, 0).len(), 1);
        assert_eq!(op.hom(0, 1).len(), 0);
    }
}
