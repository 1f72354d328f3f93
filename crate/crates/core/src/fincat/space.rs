use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use super::category::{FinCategory, Obj};
use super::sieve::Sieve;
use super::site::{Site, TopologyOrigin};
use super::CategoryError;

/// A finite topological space given by its open sets.
///
/// Opens are stored as sorted point-index sets, ordered by size and then
/// lexicographically; open `k` is object `k` of [`FinSpace::open_site`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    points: Vec<String>,
    opens: Vec<BTreeSet<usize>>,
}

impl FinSpace {
    /// Checks that ∅ and the whole set are open and that opens are closed
    /// under pairwise union and intersection.
    pub fn new(points: Vec<String>, opens: Vec<BTreeSet<usize>>) -> Result<FinSpace, CategoryError> {
        let n = points.len();
        let mut set: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for o in opens {
            if o.iter().any(|&p| p >= n) {
                return Err(CategoryError::NotATopology("open mentions an unknown point".into()));
            }
            set.insert(o);
        }
        let whole: BTreeSet<usize> = (0..n).collect();
        if !set.contains(&BTreeSet::new()) {
            return Err(CategoryError::NotATopology("∅ is not open".into()));
        }
        if !set.contains(&whole) {
            return Err(CategoryError::NotATopology("the whole space is not open".into()));
        }
        for a in &set {
            for b in &set {
                if !set.contains(&a.union(b).copied().collect()) {
                    return Err(CategoryError::NotATopology("opens are not closed under union".into()));
                }
                if !set.contains(&a.intersection(b).copied().collect()) {
                    return Err(CategoryError::NotATopology("opens are not closed under intersection".into()));
                }
            }
        }
        let mut opens: Vec<BTreeSet<usize>> = set.into_iter().collect();
        opens.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(FinSpace { points, opens })
    }

    /// Build from point names and opens given as lists of point names.
    pub fn from_names(points: &[&str], opens: &[&[&str]]) -> Result<FinSpace, CategoryError> {
        let pts: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let mut os = Vec::new();
        for o in opens {
            let mut s = BTreeSet::new();
            for name in *o {
                let p = pts
                    .iter()
                    .position(|q| q == name)
                    .ok_or_else(|| CategoryError::NotATopology(format!("unknown point {name}")))?;
                s.insert(p);
            }
            os.push(s);
        }
        FinSpace::new(pts, os)
    }

    /// The four-point pseudocircle `{a,b,c,d}` with opens
    /// `∅, {a}, {c}, {a,c}, {a,b,c}, {a,c,d}, X`.
    pub fn pseudocircle() -> FinSpace {
        FinSpace::from_names(
            &["a", "b", "c", "d"],
            &[&[], &["a"], &["c"], &["a", "c"], &["a", "b", "c"], &["a", "c", "d"], &["a", "b", "c", "d"]],
        )
        .expect("valid topology")
    }

    /// One point, opens `∅` and `{*}`.
    pub fn point() -> FinSpace {
        FinSpace::from_names(&["*"], &[&[], &["*"]]).expect("valid topology")
    }

    /// All subsets of the given points.
    pub fn discrete(points: &[&str]) -> FinSpace {
        let n = points.len();
        let opens = (0u32..1 << n).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
        FinSpace::new(points.iter().map(|s| s.to_string()).collect(), opens).expect("power set")
    }

    /// Topology of down-sets of a preorder on the points (`le(x, y)` means
    /// `x ≤ y`; opens are the sets closed downwards).
    pub fn from_preorder(points: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Result<FinSpace, CategoryError> {
        let n = points.len();
        if n > 16 {
            return Err(CategoryError::TooLarge(format!("{n} points")));
        }
        let opens = (0u32..1 << n)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<BTreeSet<usize>>())
            .filter(|s| s.iter().all(|&y| (0..n).all(|x| !le(x, y) || s.contains(&x))))
            .collect();
        FinSpace::new(points, opens)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn opens(&self) -> &[BTreeSet<usize>] {
        &self.opens
    }

    pub fn open_index(&self, open: &BTreeSet<usize>) -> Option<usize> {
        self.opens.iter().position(|o| o == open)
    }

    /// Name such as `{a,b}` (or `{}` for the empty open).
    pub fn open_name(&self, k: usize) -> String {
        let names: Vec<&str> = self.opens[k].iter().map(|&p| self.points[p].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Index of the open set with the given point names.
    pub fn open_by_names(&self, names: &[&str]) -> Option<usize> {
        let set: Option<BTreeSet<usize>> = names.iter().map(|n| self.points.iter().position(|p| p == n)).collect();
        self.open_index(&set?)
    }

    /// The smallest open containing point `x`.
    pub fn minimal_open(&self, x: usize) -> &BTreeSet<usize> {
        self.opens.iter().filter(|o| o.contains(&x)).min_by_key(|o| o.len()).expect("the whole space contains x")
    }

    /// Connected components of the open `k` with the subspace topology.
    ///
    /// In a finite space, `x` and `y` lie in a common component when they are
    /// linked by a chain of specializations (`x ∈ U_y` or `y ∈ U_x`).
    pub fn connected_components(&self, k: usize) -> Vec<BTreeSet<usize>> {
        let u = &self.opens[k];
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in u {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in u {
                    let linked = self.minimal_open(y).contains(&x) || self.minimal_open(x).contains(&y);
                    if linked && seen.insert(y) {
                        comp.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// The inclusion poset of opens, one object per open in storage order.
    pub fn open_category(&self) -> FinCategory {
        let names = (0..self.opens.len()).map(|k| self.open_name(k)).collect();
        FinCategory::preorder(names, |a, b| self.opens[a].is_subset(&self.opens[b])).expect("inclusion is a partial order")
    }

    /// The standard site: opens under inclusion; a sieve on `U` covers iff
    /// the union of the domains of its members is `U`.
    pub fn open_site(&self) -> Site {
        let c = Arc::new(self.open_category());
        let covering = c
            .objects()
            .map(|u| Sieve::all_on(&c, u).into_iter().filter(|s| self.union_of(&c, s) == self.opens[u]).collect())
            .collect();
        Site::with_origin(c, covering, TopologyOrigin::Space)
    }

    fn union_of(&self, c: &FinCategory, s: &Sieve) -> BTreeSet<usize> {
        s.members().iter().flat_map(|&f| self.opens[c.dom(f) as Obj].iter().copied()).collect()
    }
}
