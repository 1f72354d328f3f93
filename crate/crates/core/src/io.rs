//! JSON file formats for sites, (pre)cosheaves, towers and bicomplexes.
//!
//! Every format is a plain serde data type (`*Spec`) plus a conversion to
//! and from the engine's own types. Objects and morphisms are referred to
//! by name; identities are named `id_<object>`. Integers are JSON numbers,
//! or decimal strings when they do not fit in 64 bits.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cech::constant_cosheaf;
use crate::diagram::{DiagramError, Precosheaf, Presheaf};
use crate::fincat::{Arrow, CategoryError, Cover, FinCategory, FinSpace, Mor, Sieve, Site, TopologyOrigin};
use crate::kmod::{Matrix, ModuleError, ModuleMap, PresentedModule, Ring};
use crate::protower::{Tower, TowerError, TowerRule};
use crate::spectral::{Bicomplex, SpectralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid description: {0}")]
    Invalid(String),
    #[error("site error: {0}")]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Invalid(msg.into()))
}

/// Deserialize any of the formats, reporting the position of syntax errors.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// `R^generators / rowspan(relations)`, or a direct sum of cyclic modules
/// given by `factors` (`0` meaning a free summand).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<i64>>,
}

impl ModuleSpec {
    pub fn from_module(m: &PresentedModule) -> ModuleSpec {
        let relations = (m.relations().nrows() > 0).then(|| m.relations().clone());
        ModuleSpec { generators: Some(m.generators()), relations, factors: None }
    }

    pub fn to_module(&self, ring: Ring) -> Result<PresentedModule, IoError> {
        match (self.generators, &self.factors) {
            (None, Some(f)) if self.relations.is_none() => Ok(PresentedModule::from_factors(ring, f)),
            (Some(g), None) => {
                let rel = self.relations.clone().map_or_else(|| Matrix::zeros(0, g), |r| fit(r, None, g));
                Ok(PresentedModule::new(ring, g, rel)?)
            }
            _ => invalid("a module needs either `generators` (with optional `relations`) or `factors`"),
        }
    }
}

/// Empty JSON arrays lose the column count; restore the expected shape.
fn fit(m: Matrix, rows: Option<usize>, cols: usize) -> Matrix {
    if m.nrows() == 0 && (rows.unwrap_or(0) == 0 || cols == 0) {
        return Matrix::zeros(rows.unwrap_or(0), cols);
    }
    m
}

fn map_from(domain: &PresentedModule, codomain: &PresentedModule, m: &Matrix, what: &str) -> Result<ModuleMap, IoError> {
    let m = fit(m.clone(), Some(domain.generators()), codomain.generators());
    ModuleMap::new(domain.clone(), codomain.clone(), m).map_err(|e| IoError::Invalid(format!("{what}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// Objects, non-identity arrows, and composition triples `[g, f, h]`
/// meaning `g ∘ f = h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub compositions: Vec<[String; 3]>,
}

impl CategorySpec {
    pub fn from_category(c: &FinCategory) -> CategorySpec {
        let name = |o| c.object_name(o).to_string();
        let arrows = c.arrows().into_iter().map(|a| ArrowSpec { name: a.name, dom: name(a.dom), cod: name(a.cod) }).collect();
        let n = c.num_objects();
        let compositions = c
            .composition_triples()
            .into_iter()
            .filter(|&(g, f, _)| g >= n && f >= n)
            .map(|(g, f, h)| [c.morphism_name(g), c.morphism_name(f), c.morphism_name(h)].map(str::to_string))
            .collect();
        CategorySpec { objects: c.object_names().to_vec(), arrows, compositions }
    }

    pub fn to_category(&self) -> Result<FinCategory, IoError> {
        let obj = |s: &str| self.objects.iter().position(|o| o == s).ok_or_else(|| CategoryError::UnknownObject(s.to_string()));
        let arrows =
            self.arrows.iter().map(|a| Ok(Arrow::new(a.name.clone(), obj(&a.dom)?, obj(&a.cod)?))).collect::<Result<Vec<_>, IoError>>()?;
        let n = self.objects.len();
        let mor = |s: &str| -> Result<Mor, IoError> {
            if let Some(k) = self.objects.iter().position(|o| format!("id_{o}") == s) {
                return Ok(k);
            }
            match self.arrows.iter().position(|a| a.name == s) {
                Some(k) => Ok(n + k),
                None => Err(CategoryError::UnknownMorphism(s.to_string()).into()),
            }
        };
        let comps = self
            .compositions
            .iter()
            .map(|[g, f, h]| Ok((mor(g)?, mor(f)?, mor(h)?)))
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(FinCategory::new(self.objects.clone(), arrows, &comps)?)
    }
}

/// Points and open sets (as lists of point names).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

impl SpaceSpec {
    pub fn from_space(x: &FinSpace) -> SpaceSpec {
        let opens = x.opens().iter().map(|o| o.iter().map(|&p| x.points()[p].clone()).collect()).collect();
        SpaceSpec { points: x.points().to_vec(), opens }
    }

    pub fn to_space(&self) -> Result<FinSpace, IoError> {
        let pts: Vec<&str> = self.points.iter().map(String::as_str).collect();
        let opens: Vec<Vec<&str>> = self.opens.iter().map(|o| o.iter().map(String::as_str).collect()).collect();
        let refs: Vec<&[&str]> = opens.iter().map(Vec::as_slice).collect();
        Ok(FinSpace::from_names(&pts, &refs)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub target: String,
    pub legs: Vec<String>,
}

/// How the covering sieves are specified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum TopologySpec {
    /// Open covers of a finite space.
    Opens,
    /// Every sieve covers.
    Discrete,
    /// Only maximal sieves cover.
    Trivial,
    /// Generated by covering families.
    Covers { covers: Vec<CoverSpec> },
    /// Covering sieves listed per object, each as a list of member names.
    Sieves { sieves: BTreeMap<String, Vec<Vec<String>>> },
}

/// A site: a finite space with its open-cover topology, or a category with
/// an explicit topology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<CategorySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologySpec>,
}

/// A parsed site, keeping the space when there is one.
#[derive(Clone, Debug)]
pub struct ParsedSite {
    pub site: Site,
    pub space: Option<FinSpace>,
}

impl SiteSpec {
    pub fn from_space(x: &FinSpace) -> SiteSpec {
        SiteSpec { space: Some(SpaceSpec::from_space(x)), category: None, topology: None }
    }

    /// A category site, with its covering sieves listed.
    pub fn from_site(site: &Site) -> SiteSpec {
        let c = site.category();
        let sieves = c
            .objects()
            .map(|u| {
                let lists = site
                    .covering_sieves(u)
                    .iter()
                    .map(|s| s.members().iter().map(|&f| c.morphism_name(f).to_string()).collect())
                    .collect();
                (c.object_name(u).to_string(), lists)
            })
            .collect();
        SiteSpec { space: None, category: Some(CategorySpec::from_category(c)), topology: Some(TopologySpec::Sieves { sieves }) }
    }

    pub fn to_site(&self) -> Result<ParsedSite, IoError> {
        match (&self.space, &self.category) {
            (Some(sp), None) => {
                if !matches!(self.topology, None | Some(TopologySpec::Opens)) {
                    return invalid("a space carries its open-cover topology; omit `topology` or use kind \"opens\"");
                }
                let x = sp.to_space()?;
                Ok(ParsedSite { site: x.open_site(), space: Some(x) })
            }
            (None, Some(cs)) => {
                let c = Arc::new(cs.to_category()?);
                let site = match &self.topology {
                    None => return invalid("a category site needs a `topology`"),
                    Some(TopologySpec::Opens) => return invalid("topology kind \"opens\" needs a `space`"),
                    Some(TopologySpec::Discrete) => Site::discrete(c),
                    Some(TopologySpec::Trivial) => Site::trivial(c),
                    Some(TopologySpec::Covers { covers }) => {
                        let covers = covers
                            .iter()
                            .map(|k| {
                                let u = object(&c, &k.target)?;
                                let legs = k.legs.iter().map(|l| morphism(&c, l)).collect::<Result<_, _>>()?;
                                Ok(Cover::new(&c, u, legs)?)
                            })
                            .collect::<Result<Vec<_>, IoError>>()?;
                        Site::from_pretopology(c, &covers)?
                    }
                    Some(TopologySpec::Sieves { sieves }) => {
                        let mut covering = vec![Vec::new(); c.num_objects()];
                        for (name, lists) in sieves {
                            let u = object(&c, name)?;
                            for members in lists {
                                let ms = members.iter().map(|m| morphism(&c, m)).collect::<Result<Vec<_>, _>>()?;
                                covering[u].push(Sieve::new(&c, u, ms)?);
                            }
                        }
                        Site::from_covering_sieves(c, covering)?
                    }
                };
                Ok(ParsedSite { site, space: None })
            }
            _ => invalid("a site needs exactly one of `space` and `category`"),
        }
    }
}

fn object(c: &FinCategory, name: &str) -> Result<usize, IoError> {
    c.object_index(name).ok_or_else(|| CategoryError::UnknownObject(name.to_string()).into())
}

fn morphism(c: &FinCategory, name: &str) -> Result<Mor, IoError> {
    c.morphism_index(name).ok_or_else(|| CategoryError::UnknownMorphism(name.to_string()).into())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    /// Covariant: `A(f): A(U) → A(V)` for `f: U → V`.
    #[default]
    Precosheaf,
    /// Contravariant: `B(f): B(V) → B(U)`.
    Presheaf,
}

/// A module-valued diagram on a site's category. Exactly one of
/// `constant`, `constant_cosheaf` (finite spaces only: `M` per connected
/// component) and `values` is given; `maps` lists matrices for
/// non-identity morphisms, and missing composites are filled in by
/// multiplying listed factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramSpec {
    pub ring: Ring,
    #[serde(default)]
    pub variance: Variance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_cosheaf: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, ModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Matrix>,
}

/// A parsed diagram of either variance.
#[derive(Clone, Debug)]
pub enum Diagram {
    Precosheaf(Precosheaf),
    Presheaf(Presheaf),
}

impl DiagramSpec {
    pub fn from_precosheaf(a: &Precosheaf) -> DiagramSpec {
        let c = a.category();
        let values = c.objects().map(|o| (c.object_name(o).to_string(), ModuleSpec::from_module(a.value(o)))).collect();
        let maps = c.morphisms().filter(|&f| !c.is_identity(f)).map(|f| (c.morphism_name(f).to_string(), a.map(f).matrix().clone())).collect();
        DiagramSpec { ring: a.ring(), variance: Variance::Precosheaf, constant: None, constant_cosheaf: None, values, maps }
    }

    pub fn from_presheaf(b: &Presheaf) -> DiagramSpec {
        let c = b.category();
        let values = c.objects().map(|o| (c.object_name(o).to_string(), ModuleSpec::from_module(b.value(o)))).collect();
        let maps = c.morphisms().filter(|&f| !c.is_identity(f)).map(|f| (c.morphism_name(f).to_string(), b.map(f).matrix().clone())).collect();
        DiagramSpec { ring: b.ring(), variance: Variance::Presheaf, constant: None, constant_cosheaf: None, values, maps }
    }

    pub fn to_diagram(&self, site: &ParsedSite) -> Result<Diagram, IoError> {
        let c = site.site.category().clone();
        let given = [self.constant.is_some(), self.constant_cosheaf.is_some(), !self.values.is_empty()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return invalid("give exactly one of `constant`, `constant_cosheaf` and `values`");
        }
        if let Some(m) = &self.constant {
            let m = m.to_module(self.ring)?;
            return Ok(match self.variance {
                Variance::Precosheaf => Diagram::Precosheaf(Precosheaf::constant(c, &m)),
                Variance::Presheaf => Diagram::Presheaf(Presheaf::constant(c, &m)),
            });
        }
        if let Some(m) = &self.constant_cosheaf {
            let Some(x) = &site.space else { return invalid("`constant_cosheaf` needs a site given by a space") };
            if self.variance != Variance::Precosheaf {
                return invalid("`constant_cosheaf` is covariant");
            }
            return Ok(Diagram::Precosheaf(constant_cosheaf(x, &m.to_module(self.ring)?)));
        }
        let mut values = Vec::with_capacity(c.num_objects());
        for o in c.objects() {
            let name = c.object_name(o);
            let spec = self.values.get(name).ok_or_else(|| IoError::Invalid(format!("no value for object {name}")))?;
            values.push(spec.to_module(self.ring)?);
        }
        for name in self.values.keys() {
            object(&c, name)?;
        }
        let covariant = self.variance == Variance::Precosheaf;
        // (source, target) of the module map attached to f
        let ends = |f: Mor| if covariant { (c.dom(f), c.cod(f)) } else { (c.cod(f), c.dom(f)) };
        let mut mats: Vec<Option<Matrix>> = c.morphisms().map(|f| c.is_identity(f).then(|| Matrix::identity(values[f].generators()))).collect();
        for (name, m) in &self.maps {
            let f = morphism(&c, name)?;
            if c.is_identity(f) {
                return invalid(format!("{name} is an identity; its map is fixed"));
            }
            let (s, t) = ends(f);
            mats[f] = Some(map_from(&values[s], &values[t], m, name)?.matrix().clone());
        }
        // fill composites from listed factors
        loop {
            let mut changed = false;
            for f in c.morphisms() {
                for g in c.morphisms() {
                    let Some(h) = c.try_compose(g, f) else { continue };
                    if mats[h].is_some() {
                        continue;
                    }
                    if let (Some(mf), Some(mg)) = (&mats[f], &mats[g]) {
                        mats[h] = Some(if covariant { mf.mul(mg) } else { mg.mul(mf) });
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut maps = Vec::with_capacity(c.num_morphisms());
        for f in c.morphisms() {
            let m = mats[f].clone().ok_or_else(|| IoError::Invalid(format!("no map for {}", c.morphism_name(f))))?;
            let (s, t) = ends(f);
            maps.push(map_from(&values[s], &values[t], &m, c.morphism_name(f))?);
        }
        Ok(if covariant {
            Diagram::Precosheaf(Precosheaf::new(c, self.ring, values, maps)?)
        } else {
            Diagram::Presheaf(Presheaf::new(c, self.ring, values, maps)?)
        })
    }
}

/// `"stabilized"`: explicit `levels` `A_1..A_k` and `steps` (`steps[n−1]:
/// A_{n+1} → A_n`), constant afterwards. `"builtin:convergentB"`: the
/// convergent-sequence tower over `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub ring: Ring,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ModuleSpec>,
}

pub const RULE_STABILIZED: &str = "stabilized";
pub const RULE_CONVERGENT: &str = "builtin:convergentB";

impl TowerSpec {
    pub fn from_tower(t: &Tower) -> TowerSpec {
        match t.rule() {
            TowerRule::Stabilized => TowerSpec {
                ring: t.ring(),
                rule: RULE_STABILIZED.into(),
                levels: t.prefix().iter().map(ModuleSpec::from_module).collect(),
                steps: t.prefix_steps().iter().map(|f| f.matrix().clone()).collect(),
                g: None,
            },
            TowerRule::ConvergentB { g } => TowerSpec {
                ring: t.ring(),
                rule: RULE_CONVERGENT.into(),
                levels: Vec::new(),
                steps: Vec::new(),
                g: Some(ModuleSpec::from_module(g)),
            },
        }
    }

    pub fn to_tower(&self) -> Result<Tower, IoError> {
        match self.rule.as_str() {
            RULE_STABILIZED => {
                let levels = self.levels.iter().map(|m| m.to_module(self.ring)).collect::<Result<Vec<_>, _>>()?;
                if self.steps.len() + 1 != levels.len() {
                    return invalid(format!("{} levels need {} steps", levels.len(), levels.len().saturating_sub(1)));
                }
                let steps = self
                    .steps
                    .iter()
                    .enumerate()
                    .map(|(i, m)| map_from(&levels[i + 1], &levels[i], m, &format!("step {}", i + 1)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Tower::stabilized(levels, steps)?)
            }
            RULE_CONVERGENT => {
                let Some(g) = &self.g else { return invalid("the convergent-sequence tower needs `g`") };
                Ok(Tower::convergent(&g.to_module(self.ring)?))
            }
            other => invalid(format!("unknown tower rule {other:?} (expected {RULE_STABILIZED:?} or {RULE_CONVERGENT:?})")),
        }
    }
}

/// `entries[s][t]`, `horizontal[s−1][t]: X_{s,t} → X_{s−1,t}`,
/// `vertical[s][t−1]: X_{s,t} → X_{s,t−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicomplexSpec {
    pub ring: Ring,
    pub entries: Vec<Vec<ModuleSpec>>,
    #[serde(default)]
    pub horizontal: Vec<Vec<Matrix>>,
    #[serde(default)]
    pub vertical: Vec<Vec<Matrix>>,
}

impl BicomplexSpec {
    pub fn from_bicomplex(x: &Bicomplex) -> BicomplexSpec {
        let (sm, tm) = (x.s_max(), x.t_max());
        BicomplexSpec {
            ring: x.ring(),
            entries: (0..=sm).map(|s| (0..=tm).map(|t| ModuleSpec::from_module(x.entry(s, t))).collect()).collect(),
            horizontal: (1..=sm).map(|s| (0..=tm).map(|t| x.d(s, t).matrix().clone()).collect()).collect(),
            vertical: (0..=sm).map(|s| (1..=tm).map(|t| x.delta(s, t).matrix().clone()).collect()).collect(),
        }
    }

    pub fn to_bicomplex(&self) -> Result<Bicomplex, IoError> {
        let entries = self
            .entries
            .iter()
            .map(|col| col.iter().map(|m| m.to_module(self.ring)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let at = |s: usize, t: usize| entries.get(s).and_then(|c| c.get(t)).ok_or_else(|| IoError::Invalid(format!("no entry ({s},{t})")));
        let mut horizontal = Vec::new();
        for (i, col) in self.horizontal.iter().enumerate() {
            let s = i + 1;
            let maps = col.iter().enumerate().map(|(t, m)| map_from(at(s, t)?, at(s - 1, t)?, m, &format!("d at ({s},{t})")));
            horizontal.push(maps.collect::<Result<Vec<_>, _>>()?);
        }
        let mut vertical = Vec::new();
        for (s, col) in self.vertical.iter().enumerate() {
            let maps = col.iter().enumerate().map(|(i, m)| {
                let t = i + 1;
                map_from(at(s, t)?, at(s, t - 1)?, m, &format!("δ at ({s},{t})"))
            });
            vertical.push(maps.collect::<Result<Vec<_>, _>>()?);
        }
        // a bicomplex with one column has no horizontal maps, one row no vertical ones
        if self.vertical.is_empty() && entries.first().is_some_and(|c| c.len() == 1) {
            vertical = vec![Vec::new(); entries.len()];
        }
        Ok(Bicomplex::new(self.ring, entries, horizontal, vertical)?)
    }
}

/// Whether a site came from a finite space (for reports).
pub fn describe_origin(site: &Site) -> &'static str {
    match site.origin() {
        TopologyOrigin::Pretopology => "pretopology",
        TopologyOrigin::Sieves => "sieves",
        TopologyOrigin::Discrete => "discrete",
        TopologyOrigin::Space => "space",
    }
}
