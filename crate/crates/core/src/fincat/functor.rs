use std::sync::Arc;

use super::category::{FinCategory, Mor, Obj};
use super::CategoryError;

/// A functor between finite categories, given on objects and morphisms.
#[derive(Clone, Debug)]
pub struct FinFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    on_objects: Vec<Obj>,
    on_morphisms: Vec<Mor>,
}

impl FinFunctor {
    /// Checks that domains, codomains, identities and composites are preserved.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        on_objects: Vec<Obj>,
        on_morphisms: Vec<Mor>,
    ) -> Result<FinFunctor, CategoryError> {
        let bad = |what: String| Err(CategoryError::NotAFunctor(what));
        if on_objects.len() != source.num_objects() || on_morphisms.len() != source.num_morphisms() {
            return bad("assignment sizes".into());
        }
        if on_objects.iter().any(|&o| o >= target.num_objects()) || on_morphisms.iter().any(|&f| f >= target.num_morphisms()) {
            return bad("assignment out of range".into());
        }
        for f in source.morphisms() {
            let ff = on_morphisms[f];
            if target.dom(ff) != on_objects[source.dom(f)] || target.cod(ff) != on_objects[source.cod(f)] {
                return bad(format!("endpoints of {}", source.morphism_name(f)));
            }
        }
        for o in source.objects() {
            if on_morphisms[source.identity(o)] != target.identity(on_objects[o]) {
                return bad(format!("identity of {}", source.object_name(o)));
            }
        }
        for f in source.morphisms() {
            for &g in source.morphisms_from(source.cod(f)) {
                let lhs = on_morphisms[source.compose(g, f)];
                let rhs = target.compose(on_morphisms[g], on_morphisms[f]);
                if lhs != rhs {
                    return bad(format!("composite {} ∘ {}", source.morphism_name(g), source.morphism_name(f)));
                }
            }
        }
        Ok(FinFunctor { source, target, on_objects, on_morphisms })
    }

    pub fn identity(c: Arc<FinCategory>) -> FinFunctor {
        let on_objects = c.objects().collect();
        let on_morphisms = c.morphisms().collect();
        FinFunctor { source: c.clone(), target: c, on_objects, on_morphisms }
    }

    /// The functor from the one-object, identity-only category picking `v`.
    pub fn point(target: Arc<FinCategory>, v: Obj) -> FinFunctor {
        let name = target.object_name(v).to_string();
        let source = Arc::new(FinCategory::discrete(vec![name]).expect("one object"));
        FinFunctor { source, target: target.clone(), on_objects: vec![v], on_morphisms: vec![target.identity(v)] }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn object(&self, o: Obj) -> Obj {
        self.on_objects[o]
    }

    pub fn morphism(&self, f: Mor) -> Mor {
        self.on_morphisms[f]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor, CategoryError> {
        if *self.target != *other.source {
            return Err(CategoryError::NotAFunctor("functors are not composable".into()));
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            on_objects: self.on_objects.iter().map(|&o| other.on_objects[o]).collect(),
            on_morphisms: self.on_morphisms.iter().map(|&f| other.on_morphisms[f]).collect(),
        })
    }

    /// The same assignment viewed between opposite categories.
    pub fn opposite(&self) -> FinFunctor {
        FinFunctor {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            on_objects: self.on_objects.clone(),
            on_morphisms: self.on_morphisms.clone(),
        }
    }
}
