use std::path::Path;

use cosheaf::cech::{cech_h_n, cech_h_upper_n, h_n_sieve, h_upper_n_cover, is_cosheaf, is_sheaf, sharp, sharp_presheaf, plus, plus_presheaf, constant_cosheaf, Via};
use cosheaf::diagram::Precosheaf;
use cosheaf::fincat::{Cover, FinCategory, Obj};
use cosheaf::io::{self, BicomplexSpec, Diagram, DiagramSpec, ParsedSite, SiteSpec, TowerSpec};
use cosheaf::protower::{is_zero_up_to, pairing_colimit, rudimentary_obstruction, RudimentaryVerdict, Tower, ZeroVerdict};
use cosheaf::satellite::{apply_functor, resolve, H0Sieve};
use cosheaf::spectral::{e_infinity, pages, total_complex, verify_convergence, Bicomplex, Orientation, SpectralError};
use cosheaf::{CanonicalForm, PresentedModule, Ring};
use serde_json::{json, Value};

use crate::report::{show, CliError, Job, Report, Status};
use crate::{BuiltinTower, DiagramInput, Kind, OrientationArg, Route};

/// `R`/`Z`/`Q`/`F` for the ring itself, otherwise comma-separated cyclic
/// orders (`0` for a free summand).
pub fn module_arg(s: &str, ring: Ring) -> Result<PresentedModule, CliError> {
    match s.trim() {
        "R" | "Z" | "Q" | "F" => Ok(PresentedModule::free(ring, 1)),
        "" => Err(CliError::Parse("empty module".into())),
        list => {
            let factors = list
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::Parse(format!("bad module {s:?}: expected R or orders like 0,2"))))
                .collect::<Result<Vec<_>, _>>()?;
            if factors.iter().any(|&d| d < 0) {
                return Err(CliError::Parse(format!("bad module {s:?}: negative order")));
            }
            Ok(PresentedModule::from_factors(ring, &factors))
        }
    }
}

pub fn load_site(job: &mut Job, path: &Path) -> Result<ParsedSite, CliError> {
    let text = job.read(path)?;
    let spec: SiteSpec = io::from_json(&text).map_err(|e| CliError::from_io(path, e))?;
    spec.to_site().map_err(|e| CliError::from_io(path, e))
}

fn load_diagram(job: &mut Job, input: &DiagramInput, ring: Option<Ring>) -> Result<(ParsedSite, Diagram), CliError> {
    let site = load_site(job, &input.site)?;
    let diagram = match (&input.precosheaf, &input.constant) {
        (Some(path), _) => {
            let text = job.read(path)?;
            let spec: DiagramSpec = io::from_json(&text).map_err(|e| CliError::from_io(path, e))?;
            if let Some(r) = ring.filter(|&r| r != spec.ring) {
                return Err(CliError::Parse(format!("{} is over {}, not {r}", path.display(), spec.ring)));
            }
            spec.to_diagram(&site).map_err(|e| CliError::from_io(path, e))?
        }
        (None, Some(m)) => {
            let m = module_arg(m, ring.unwrap_or(Ring::Integers))?;
            job.param("constant", m.canonicalize());
            match &site.space {
                Some(x) => Diagram::Precosheaf(constant_cosheaf(x, &m)),
                None => Diagram::Precosheaf(Precosheaf::constant(site.site.category().clone(), &m)),
            }
        }
        (None, None) => return Err(CliError::Parse("pass --precosheaf or --constant".into())),
    };
    Ok((site, diagram))
}

fn target_object(c: &FinCategory, name: Option<&str>) -> Result<Obj, CliError> {
    match name {
        Some(n) => c.object_index(n).ok_or_else(|| CliError::Parse(format!("no object named {n:?}"))),
        None => c.terminal_object().ok_or_else(|| CliError::Parse("the site has no terminal object; pass --object".into())),
    }
}

fn diagram_ring(d: &Diagram) -> Ring {
    match d {
        Diagram::Precosheaf(a) => a.ring(),
        Diagram::Presheaf(b) => b.ring(),
    }
}

fn forms(ms: &[PresentedModule]) -> Vec<CanonicalForm> {
    ms.iter().map(PresentedModule::canonicalize).collect()
}

pub fn site_check(path: &Path) -> Result<Report, CliError> {
    let mut job = Job::new("site check");
    let parsed = load_site(&mut job, path)?;
    let site = &parsed.site;
    site.check_gt().map_err(CliError::invariant)?;
    let c = site.category();
    let mut lines = vec![format!(
        "site: {} objects, {} morphisms, topology from {}",
        c.num_objects(),
        c.num_morphisms(),
        io::describe_origin(site)
    )];
    let mut objects = Vec::new();
    for u in c.objects() {
        let r = site.minimal_covering_sieve(u);
        let n = site.covering_sieves(u).len();
        lines.push(format!("  {}: {n} covering sieves, minimal {}", c.object_name(u), site.describe(&r)));
        objects.push(json!({"object": c.object_name(u), "covering_sieves": n, "minimal": site.describe(&r)}));
    }
    lines.push("axioms: ok".into());
    let result = json!({
        "objects": c.num_objects(),
        "morphisms": c.num_morphisms(),
        "origin": io::describe_origin(site),
        "covering": objects,
        "axioms": "ok",
    });
    Ok(job.finish(Status::Ok, result, lines))
}

pub fn homology(route: Route, input: &DiagramInput, max_degree: usize, ring: Option<Ring>) -> Result<Report, CliError> {
    let name = match route {
        Route::Cech => "cech",
        Route::Roos => "roos",
    };
    let mut job = Job::new(format!("homology {name}"));
    let (parsed, diagram) = load_diagram(&mut job, input, ring)?;
    let site = &parsed.site;
    let c = site.category();
    let u = target_object(c, input.object.as_deref())?;
    let ring = diagram_ring(&diagram);
    job.param("max-degree", max_degree).param("object", c.object_name(u)).param("ring", ring);
    let r = site.minimal_covering_sieve(u);
    let mut degrees = Vec::new();
    let mut lines = Vec::new();
    match &diagram {
        Diagram::Precosheaf(a) => {
            let via = match route {
                Route::Cech => Via::Covers,
                Route::Roos => Via::Sieves,
            };
            for n in 0..=max_degree {
                let h = cech_h_n(site, u, a, n, via).map_err(CliError::invariant)?;
                if n == 0 {
                    let family = if via == Via::Covers { "covers" } else { "covering sieves" };
                    lines.push(format!("limit over {} {family}, attained at {}", h.family_size, h.initial));
                }
                let m = h.module.canonicalize();
                lines.push(format!("H_{n}({}) = {}", c.object_name(u), show(&m, ring)));
                degrees.push(json!({"n": n, "module": m}));
            }
        }
        Diagram::Presheaf(b) => {
            lines.push(format!("colimit attained at {}", site.describe(&r)));
            for n in 0..=max_degree {
                let m = match route {
                    Route::Roos => cech_h_upper_n(site, u, b, n),
                    Route::Cech => Cover::new(c, u, r.members().iter().copied().collect())
                        .map_err(Into::into)
                        .and_then(|cover| h_upper_n_cover(&cover, b, n)),
                }
                .map_err(CliError::invariant)?
                .canonicalize();
                lines.push(format!("H^{n}({}) = {}", c.object_name(u), show(&m, ring)));
                degrees.push(json!({"n": n, "module": m}));
            }
        }
    }
    let variance = if matches!(diagram, Diagram::Precosheaf(_)) { "precosheaf" } else { "presheaf" };
    let result = json!({
        "object": c.object_name(u),
        "route": name,
        "variance": variance,
        "initial": site.describe(&r),
        "degrees": degrees,
    });
    Ok(job.finish(Status::Ok, result, lines))
}

pub fn cosheafify(input: &DiagramInput, output: Option<&Path>, ring: Option<Ring>) -> Result<Report, CliError> {
    let mut job = Job::new("cosheafify");
    let (parsed, diagram) = load_diagram(&mut job, input, ring)?;
    let site = &parsed.site;
    let c = site.category();
    let ring = diagram_ring(&diagram);
    job.param("ring", ring);
    if let Some(p) = output {
        job.param("output", p.display());
    }
    let inv = CliError::invariant;
    let (values, checks, spec) = match &diagram {
        Diagram::Precosheaf(a) => {
            let (p, _) = plus(site, a).map_err(inv)?;
            let (s, _) = sharp(site, a).map_err(inv)?;
            let (ss, _) = sharp(site, &s).map_err(inv)?;
            let checks = [
                ("input is a cosheaf", is_cosheaf(site, a).map_err(inv)?.is_ok(), false),
                ("output is a cosheaf", is_cosheaf(site, &s).map_err(inv)?.is_ok(), true),
                ("idempotent", ss.objectwise_isomorphic(&s), true),
            ];
            ([forms(a.values()), forms(p.values()), forms(s.values())], checks, DiagramSpec::from_precosheaf(&s))
        }
        Diagram::Presheaf(b) => {
            let (p, _) = plus_presheaf(site, b).map_err(inv)?;
            let (s, _) = sharp_presheaf(site, b).map_err(inv)?;
            let (ss, _) = sharp_presheaf(site, &s).map_err(inv)?;
            let checks = [
                ("input is a sheaf", is_sheaf(site, b).map_err(inv)?.is_ok(), false),
                ("output is a sheaf", is_sheaf(site, &s).map_err(inv)?.is_ok(), true),
                ("idempotent", ss.objectwise_isomorphic(&s), true),
            ];
            ([forms(b.values()), forms(p.values()), forms(s.values())], checks, DiagramSpec::from_presheaf(&s))
        }
    };
    let mut lines = Vec::new();
    let mut objects = Vec::new();
    for u in c.objects() {
        let [a, p, s] = [&values[0][u], &values[1][u], &values[2][u]];
        lines.push(format!("{}: A = {}, A+ = {}, A# = {}", c.object_name(u), show(a, ring), show(p, ring), show(s, ring)));
        objects.push(json!({"object": c.object_name(u), "input": a, "plus": p, "sharp": s}));
    }
    let mut status = Status::Ok;
    let mut check_json = serde_json::Map::new();
    for (name, ok, required) in checks {
        lines.push(format!("{name}: {}", if ok { "yes" } else { "no" }));
        if required && !ok {
            status = Status::Violation;
        }
        check_json.insert(name.replace(' ', "_"), Value::Bool(ok));
    }
    if let Some(p) = output {
        std::fs::write(p, io::to_json(&spec)).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        lines.push(format!("wrote {}", p.display()));
    }
    Ok(job.finish(status, json!({"objects": objects, "checks": check_json}), lines))
}

pub fn satellite(input: &DiagramInput, max_degree: usize, depth: usize, ring: Option<Ring>) -> Result<Report, CliError> {
    let mut job = Job::new("satellite");
    if depth < max_degree + 1 {
        return Err(CliError::Parse(format!("depth {depth} is too small for degree {max_degree}; use at least {}", max_degree + 1)));
    }
    let (parsed, diagram) = load_diagram(&mut job, input, ring)?;
    let Diagram::Precosheaf(a) = diagram else {
        return Err(CliError::Parse("satellites are computed for precosheaves".into()));
    };
    let site = &parsed.site;
    let c = site.category();
    let u = target_object(c, input.object.as_deref())?;
    let ring = a.ring();
    job.param("max-degree", max_degree).param("depth", depth).param("object", c.object_name(u)).param("ring", ring);
    let r = site.minimal_covering_sieve(u);
    let res = resolve(&a, depth);
    if let Err((level, o)) = res.check() {
        return Err(CliError::Invariant(format!("resolution is not exact at level {level}, object {}", c.object_name(o))));
    }
    let cx = apply_functor(&H0Sieve(r.clone()), &res).map_err(CliError::invariant)?;
    let mut lines = vec![format!("F = H_0 over {}, free resolution of length {depth}", site.describe(&r))];
    let mut degrees = Vec::new();
    let mut status = Status::Ok;
    for n in 0..=max_degree {
        let l = cx.homology(n).map_err(CliError::invariant)?.module.canonicalize();
        let h = h_n_sieve(&r, &a, n).map_err(CliError::invariant)?.canonicalize();
        let agree = l == h;
        if !agree {
            status = Status::Violation;
        }
        lines.push(format!("L_{n}F = {}   H_{n}(R) = {}   {}", show(&l, ring), show(&h, ring), if agree { "agree" } else { "DIFFER" }));
        degrees.push(json!({"n": n, "satellite": l, "sieve_homology": h, "agree": agree}));
    }
    let result = json!({"object": c.object_name(u), "sieve": site.describe(&r), "degrees": degrees});
    Ok(job.finish(status, result, lines))
}

fn grid(entries: &[Vec<CanonicalForm>], ring: Ring) -> Vec<String> {
    let t_max = entries.first().map_or(0, |c| c.len().saturating_sub(1));
    let cells: Vec<Vec<String>> = entries.iter().map(|col| col.iter().map(|m| show(m, ring)).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1).max(1);
    let mut out = Vec::new();
    for t in (0..=t_max).rev() {
        let row: Vec<String> = cells.iter().map(|col| format!("{:>width$}", col[t])).collect();
        out.push(format!("    t={t} | {}", row.join("  ")));
    }
    out
}

pub fn spectral(path: &Path, orientation: OrientationArg, page_count: Option<usize>) -> Result<Report, CliError> {
    let mut job = Job::new("spectral");
    let text = job.read(path)?;
    let spec: BicomplexSpec = io::from_json(&text).map_err(|e| CliError::from_io(path, e))?;
    let x: Bicomplex = spec.to_bicomplex().map_err(|e| CliError::from_io(path, e))?;
    spectral_report(job, &x, orientation, page_count)
}

/// Total homology, `E²` and `E^∞` per orientation, and the convergence check.
pub fn spectral_report(mut job: Job, x: &Bicomplex, orientation: OrientationArg, page_count: Option<usize>) -> Result<Report, CliError> {
    let ring = x.ring();
    let orientations: Vec<Orientation> = match orientation {
        OrientationArg::Vertical => vec![Orientation::Vertical],
        OrientationArg::Horizontal => vec![Orientation::Horizontal],
        OrientationArg::Both => Orientation::BOTH.to_vec(),
    };
    job.param("orientation", format!("{orientation:?}").to_lowercase()).param("ring", ring);
    if let Some(r) = page_count {
        job.param("pages", r);
    }
    let inv = CliError::invariant;
    let tot = total_complex(x).map_err(inv)?;
    let top = x.s_max() + x.t_max();
    let homology: Vec<CanonicalForm> =
        (0..=top).map(|n| tot.homology(n).map(|h| h.module.canonicalize())).collect::<Result<_, _>>().map_err(CliError::invariant)?;
    let mut lines = vec![format!("bicomplex {}x{} over {ring}", x.s_max() + 1, x.t_max() + 1)];
    for (n, h) in homology.iter().enumerate() {
        lines.push(format!("H_{n}(Tot) = {}", show(h, ring)));
    }
    let mut per = Vec::new();
    for &o in &orientations {
        let name = serde_json::to_value(o).unwrap().as_str().unwrap().to_string();
        let ps = pages(x, o, page_count.unwrap_or(2).max(2)).map_err(inv)?;
        let e2 = ps[2].dump();
        let inf = e_infinity(x, o).map_err(inv)?;
        let einf = inf.page.dump();
        lines.push(format!("{name}: E^2"));
        lines.extend(grid(&e2.entries, ring));
        let settled = inf.stabilization.iter().flatten().copied().max().unwrap_or(1);
        lines.push(format!("{name}: E^inf (every entry stable from page {settled})"));
        lines.extend(grid(&einf.entries, ring));
        let mut entry = json!({
            "orientation": o,
            "e2": e2.entries,
            "e_infinity": einf.entries,
            "stabilization": inf.stabilization,
        });
        if let Some(r) = page_count {
            let dumps: Vec<_> = ps.iter().take(r + 1).map(|p| p.dump()).collect();
            for p in &dumps {
                lines.push(format!("{name}: E^{}", p.r));
                lines.extend(grid(&p.entries, ring));
            }
            entry["pages"] = serde_json::to_value(dumps).unwrap();
        }
        per.push(entry);
    }
    let (status, convergence) = match verify_convergence(x) {
        Ok(report) => {
            lines.push("convergence: filtration quotients of H_n(Tot) match E^inf in both orientations".into());
            (Status::Ok, serde_json::to_value(report).unwrap())
        }
        Err(SpectralError::Convergence { orientation, n, detail }) => {
            lines.push(format!("convergence FAILED ({orientation:?}, n = {n}): {detail}"));
            (Status::Violation, json!({"failed": {"orientation": orientation, "n": n, "detail": detail}}))
        }
        Err(e) => return Err(inv(e)),
    };
    let result = json!({"total_homology": homology, "orientations": per, "convergence": convergence});
    Ok(job.finish(status, result, lines))
}

fn load_tower(job: &mut Job, path: &Path) -> Result<Tower, CliError> {
    let text = job.read(path)?;
    let spec: TowerSpec = io::from_json(&text).map_err(|e| CliError::from_io(path, e))?;
    spec.to_tower().map_err(|e| CliError::from_io(path, e))
}

pub fn pro_check(
    tower: Option<&Path>,
    builtin: Option<BuiltinTower>,
    g: &str,
    bound: usize,
    pairing: &str,
    ring: Option<Ring>,
) -> Result<Report, CliError> {
    let mut job = Job::new("pro check");
    let t = match (tower, builtin) {
        (Some(path), _) => load_tower(&mut job, path)?,
        (None, Some(BuiltinTower::ConvergentB)) => {
            let g = module_arg(g, ring.unwrap_or(Ring::Integers))?;
            job.param("builtin", "convergentB").param("g", g.canonicalize());
            Tower::convergent(&g)
        }
        (None, None) => return Err(CliError::Parse("pass --tower or --builtin".into())),
    };
    let m = module_arg(pairing, t.ring())?;
    job.param("bound", bound).param("pairing", m.canonicalize()).param("ring", t.ring());
    Ok(tower_report(job, &t, &m, bound))
}

/// Runs the three tower diagnostics and renders them.
pub fn tower_report(job: Job, t: &Tower, m: &PresentedModule, bound: usize) -> Report {
    let ring = t.ring();
    if bound == 0 {
        let lines = vec!["bound 0: nothing to inspect".to_string()];
        return job.finish(Status::Unknown, json!({"levels": []}), lines);
    }
    let levels: Vec<CanonicalForm> = (1..=bound).map(|n| t.level(n).canonicalize()).collect();
    let shown: Vec<String> = levels.iter().take(6).enumerate().map(|(i, l)| format!("A_{} = {}", i + 1, show(l, ring))).collect();
    let mut lines = vec![format!("levels: {}{}", shown.join(", "), if bound > 6 { ", ..." } else { "" })];
    if let Some(k) = t.stable_from() {
        lines.push(format!("constant from level {k} on"));
    }
    let mut status = Status::Ok;
    let zero = is_zero_up_to(t, bound);
    match &zero {
        ZeroVerdict::Zero { witnesses } => {
            let ws: Vec<String> = witnesses.iter().map(|(i, j)| format!("A_{j} -> A_{i}")).collect();
            lines.push(format!("is_zero_up_to: zero (zero composites {})", ws.join(", ")));
        }
        ZeroVerdict::Unknown { reason } => {
            status = Status::Unknown;
            lines.push(format!("is_zero_up_to: unknown ({reason})"));
        }
    }
    let obstruction = rudimentary_obstruction(t, bound);
    match &obstruction {
        RudimentaryVerdict::Obstructed { witnesses } => {
            lines.push(format!("rudimentary_obstruction: obstructed ({} witnesses)", witnesses.len()));
            for w in witnesses.iter().take(3) {
                let el: Vec<String> = w.element.iter().map(ToString::to_string).collect();
                lines.push(format!(
                    "  ({}) in ker(A_{} -> A_{}) is the image of an element of A_{}",
                    el.join(","),
                    w.level + 1,
                    w.level,
                    w.source_level
                ));
            }
        }
        RudimentaryVerdict::Inconclusive { reason } => {
            lines.push(format!("rudimentary_obstruction: inconclusive ({reason})"));
            if matches!(zero, ZeroVerdict::Zero { .. }) {
                // a zero tower is isomorphic to the zero module
                lines.push("  settled: the tower is zero, hence rudimentary".into());
            } else {
                status = Status::Unknown;
            }
        }
    }
    if let (ZeroVerdict::Unknown { .. }, RudimentaryVerdict::Obstructed { .. }) = (&zero, &obstruction) {
        lines.push("  note: a tower that is not rudimentary is not zero either".into());
    }
    let pairing = match pairing_colimit(t, m, bound) {
        Ok(p) => {
            let s = p.summary();
            lines.push(format!(
                "pairing colimit with M = {} up to level {bound}: {}, stabilized: {}",
                show(&m.canonicalize(), ring),
                show(&s.colimit, ring),
                if s.stabilized { "yes" } else { "no" }
            ));
            serde_json::to_value(s).unwrap()
        }
        Err(e) => {
            lines.push(format!("pairing colimit: {e}"));
            json!({"error": e.to_string()})
        }
    };
    let result = json!({
        "levels": levels,
        "stable_from": t.stable_from(),
        "is_zero_up_to": zero,
        "rudimentary_obstruction": obstruction,
        "pairing": pairing,
    });
    job.finish(status, result, lines)
}

fn guess_kind(v: &Value) -> Option<Kind> {
    let o = v.as_object()?;
    if o.contains_key("rule") {
        Some(Kind::Tower)
    } else if o.contains_key("entries") {
        Some(Kind::Bicomplex)
    } else if o.contains_key("space") || o.contains_key("category") {
        Some(Kind::Site)
    } else if o.contains_key("ring") {
        Some(Kind::Precosheaf)
    } else {
        None
    }
}

pub fn validate(path: &Path, kind: Option<Kind>, site_path: Option<&Path>) -> Result<Report, CliError> {
    let mut job = Job::new("validate");
    let text = job.read(path)?;
    let value: Value = io::from_json(&text).map_err(|e| CliError::from_io(path, e))?;
    let kind = match kind.or_else(|| guess_kind(&value)) {
        Some(k) => k,
        None => return Err(CliError::Parse(format!("{}: cannot tell what kind of file this is; pass --kind", path.display()))),
    };
    let kind_name = match kind {
        Kind::Site => "site",
        Kind::Precosheaf => "precosheaf",
        Kind::Tower => "tower",
        Kind::Bicomplex => "bicomplex",
    };
    let mut lines = Vec::new();
    let status = match check_file(&mut job, path, &text, kind, site_path, &mut lines) {
        Ok(()) => {
            lines.push("ok".into());
            Status::Ok
        }
        // a well-formed file breaking a law is a diagnostic, not a failure to run
        Err(CliError::Invariant(m)) => {
            lines.push(m);
            Status::Violation
        }
        Err(e) => return Err(e),
    };
    let diagnostics: Vec<Value> = lines.iter().map(|l| Value::String(l.clone())).collect();
    Ok(job.finish(status, json!({"kind": kind_name, "diagnostics": diagnostics}), lines))
}

fn check_file(job: &mut Job, path: &Path, text: &str, kind: Kind, site_path: Option<&Path>, lines: &mut Vec<String>) -> Result<(), CliError> {
    let from = |e| CliError::from_io(path, e);
    match kind {
        Kind::Site => {
            let parsed = io::from_json::<SiteSpec>(text).and_then(|s| s.to_site()).map_err(from)?;
            parsed.site.check_gt().map_err(CliError::invariant)?;
            let c = parsed.site.category();
            lines.push(format!("site: {} objects, {} morphisms; category laws and topology axioms hold", c.num_objects(), c.num_morphisms()));
        }
        Kind::Precosheaf => {
            let Some(sp) = site_path else {
                return Err(CliError::Parse("validating a precosheaf needs --site".into()));
            };
            let parsed = load_site(job, sp)?;
            let d = io::from_json::<DiagramSpec>(text).and_then(|s| s.to_diagram(&parsed)).map_err(from)?;
            let inv = CliError::invariant;
            match d {
                Diagram::Precosheaf(a) => {
                    let verdict = is_cosheaf(&parsed.site, &a).map_err(inv)?;
                    lines.push("precosheaf: functorial".into());
                    lines.push(match verdict {
                        Ok(()) => "cosheaf condition: holds".into(),
                        Err(f) => format!("cosheaf condition: fails {f}"),
                    });
                }
                Diagram::Presheaf(b) => {
                    let verdict = is_sheaf(&parsed.site, &b).map_err(inv)?;
                    lines.push("presheaf: functorial".into());
                    lines.push(match verdict {
                        Ok(()) => "sheaf condition: holds".into(),
                        Err(f) => format!("sheaf condition: fails {f}"),
                    });
                }
            }
        }
        Kind::Tower => {
            let t = io::from_json::<TowerSpec>(text).and_then(|s| s.to_tower()).map_err(from)?;
            lines.push(match t.stable_from() {
                Some(k) => format!("tower: {k} levels given, constant afterwards; steps well defined"),
                None => "tower: builtin rule".into(),
            });
        }
        Kind::Bicomplex => {
            let x = io::from_json::<BicomplexSpec>(text).and_then(|s| s.to_bicomplex()).map_err(from)?;
            lines.push(format!("bicomplex: {}x{}; d∘d = 0, δ∘δ = 0 and the squares commute", x.s_max() + 1, x.t_max() + 1));
        }
    }
    Ok(())
}
