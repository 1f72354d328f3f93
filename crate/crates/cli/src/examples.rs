use cosheaf::cech::{cech_h_n, constant_cosheaf, Via};
use cosheaf::fincat::FinSpace;
use cosheaf::io::{self, BicomplexSpec, DiagramSpec, ModuleSpec, SiteSpec, TowerSpec};
use cosheaf::protower::Tower;
use cosheaf::{PresentedModule, Ring};
use serde_json::json;

use crate::commands;
use crate::report::{show, CliError, Job, Report, Status};

pub struct Example {
    pub name: &'static str,
    pub summary: &'static str,
    /// Input files `--emit` can print.
    pub inputs: &'static [&'static str],
}

pub const REGISTRY: &[Example] = &[
    Example {
        name: "pseudocircle",
        summary: "constant cosheaf on the four-point circle; H_0 = H_1 = R, H_2 = 0 by covers and by sieves",
        inputs: &["site", "precosheaf"],
    },
    Example {
        name: "convergentB",
        summary: "tower of the convergent sequence over R; not rudimentary, not provably zero",
        inputs: &["tower"],
    },
    Example { name: "point", summary: "constant cosheaf on a point; H_0 = R", inputs: &["site", "precosheaf"] },
    Example {
        name: "staircase",
        summary: "3x2 bicomplex whose vertical spectral sequence has a nonzero d^2",
        inputs: &["bicomplex"],
    },
];

pub fn list() -> Report {
    let job = Job::new("example --list");
    let lines = REGISTRY.iter().map(|e| format!("{:<14} {} [inputs: {}]", e.name, e.summary, e.inputs.join(", "))).collect();
    let names: Vec<&str> = REGISTRY.iter().map(|e| e.name).collect();
    job.finish(Status::Ok, json!({"examples": names}), lines)
}

fn space(name: &str) -> FinSpace {
    match name {
        "pseudocircle" => FinSpace::pseudocircle(),
        _ => FinSpace::point(),
    }
}

fn constant_spec(ring: Ring) -> DiagramSpec {
    DiagramSpec {
        ring,
        variance: Default::default(),
        constant: None,
        constant_cosheaf: Some(ModuleSpec { generators: None, relations: None, factors: Some(vec![0]) }),
        values: Default::default(),
        maps: Default::default(),
    }
}

/// `d a = e`, `δ b = e`, `d b = c` on generators `a (2,0)`, `b (1,1)`,
/// `c (0,1)`, `e (1,0)`.
pub fn staircase(ring: Ring) -> BicomplexSpec {
    let text = format!(
        r#"{{
  "ring": "{ring}",
  "entries": [
    [{{"generators": 0}}, {{"generators": 1}}],
    [{{"generators": 1}}, {{"generators": 1}}],
    [{{"generators": 1}}, {{"generators": 0}}]
  ],
  "horizontal": [[[[]], [[1]]], [[[1]], []]],
  "vertical": [[[[]]], [[[1]]], [[]]]
}}"#
    );
    io::from_json(&text).expect("builtin bicomplex parses")
}

/// The input file `what` of an example, as JSON.
pub fn emit(name: &str, what: &str, ring: Ring) -> Result<String, CliError> {
    let text = match (name, what) {
        ("pseudocircle" | "point", "site") => io::to_json(&SiteSpec::from_space(&space(name))),
        ("pseudocircle" | "point", "precosheaf") => io::to_json(&constant_spec(ring)),
        ("convergentB", "tower") => io::to_json(&TowerSpec::from_tower(&Tower::convergent(&PresentedModule::free(ring, 1)))),
        ("staircase", "bicomplex") => io::to_json(&staircase(ring)),
        _ => return Err(CliError::Parse(format!("example {name} has no {what} input"))),
    };
    Ok(text)
}

pub fn run(name: &str, emit_what: Option<&str>, max_degree: usize, bound: usize, ring: Option<Ring>) -> Result<Report, CliError> {
    if !REGISTRY.iter().any(|e| e.name == name) {
        let names: Vec<&str> = REGISTRY.iter().map(|e| e.name).collect();
        return Err(CliError::Parse(format!("unknown example {name:?}; known: {}", names.join(", "))));
    }
    let ring = ring.unwrap_or(Ring::Integers);
    let mut job = Job::new(format!("example {name}"));
    job.param("ring", ring);
    if let Some(what) = emit_what {
        let mut report = job.finish(Status::Ok, json!(null), vec![]);
        report.raw = Some(emit(name, what, ring)?);
        return Ok(report);
    }
    match name {
        "pseudocircle" | "point" => {
            job.param("max-degree", max_degree);
            job.input(emit(name, "site", ring)?.as_bytes());
            let x = space(name);
            let site = x.open_site();
            let a = constant_cosheaf(&x, &PresentedModule::free(ring, 1));
            let u = site.category().terminal_object().expect("a space is an open");
            let mut lines = vec![format!("X = {}, constant cosheaf {}", x.open_name(u), show(&cosheaf::CanonicalForm::free(1), ring))];
            let mut degrees = Vec::new();
            let mut status = Status::Ok;
            for n in 0..=max_degree {
                let err = CliError::invariant;
                let by_covers = cech_h_n(&site, u, &a, n, Via::Covers).map_err(err)?.module.canonicalize();
                let by_sieves = cech_h_n(&site, u, &a, n, Via::Sieves).map_err(err)?.module.canonicalize();
                let agree = by_covers == by_sieves;
                if !agree {
                    status = Status::Violation;
                }
                lines.push(format!(
                    "H_{n}(X) = {}   (covers: {}, sieves: {})",
                    if agree { show(&by_covers, ring) } else { "?".into() },
                    show(&by_covers, ring),
                    show(&by_sieves, ring)
                ));
                degrees.push(json!({"n": n, "covers": by_covers, "sieves": by_sieves, "agree": agree}));
            }
            Ok(job.finish(status, json!({"degrees": degrees}), lines))
        }
        "convergentB" => {
            job.param("bound", bound);
            let g = PresentedModule::free(ring, 1);
            Ok(commands::tower_report(job, &Tower::convergent(&g), &g, bound))
        }
        "staircase" => {
            let text = emit(name, "bicomplex", ring)?;
            job.input(text.as_bytes());
            let x = staircase(ring).to_bicomplex().map_err(CliError::invariant)?;
            commands::spectral_report(job, &x, crate::OrientationArg::Both, None)
        }
        _ => unreachable!("registry checked above"),
    }
}
