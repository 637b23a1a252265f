//! Command-line front end. Every subcommand produces human text, a JSON
//! report and possibly some files (DOT diagrams); `main` decides where they go.

use crate::birational::{compose_check, transport_check};
use crate::blowup::{regularize, BlowupTree, CascadeStatus, Options};
use crate::catalog::{self, CatalogError};
use crate::expr::{fmt_frac, fmt_poly, parse_frac, parse_poly, ParseError, Scope, VarNames};
use crate::fixtures;
use crate::hamiltonian::{divergence, hamiltonian_wrt_factor, is_standard, reconstruct, without_gauge};
use crate::iterate::{iterate_regularize, IterateError};
use crate::newton::{chiba_polytope, polygon_of_hamiltonian, NewtonPolygon};
use crate::par::Exec;
use crate::picard::{classify, component_configuration};
use crate::system::PlanarSystem;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "bureau", version, about = "Blow-up regularisation of planar systems with Painleve coefficients")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Directory for the JSON report and DOT files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run everything on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Resolve the base points of a system (file or catalog id).
    Regularize {
        system: String,
        #[arg(long)]
        depth: Option<usize>,
        /// Drop the rule for this coefficient function and report conditions.
        #[arg(long)]
        free: Vec<String>,
    },
    /// Regularise, then classify the configuration of -2 curves.
    SurfaceType {
        system: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Check that a map carries solutions to solutions, and its inverse.
    VerifyMap {
        /// Map file with `first = ..`, `second = ..` and optional
        /// `inverse first = ..`, `inverse second = ..` lines.
        mapfile: Option<PathBuf>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        /// A map from the catalog instead of a file.
        #[arg(long, conflicts_with_all = ["mapfile", "from", "to"])]
        fixture: Option<String>,
    },
    /// Newton polygon of a Hamiltonian, or the Chiba polytope of a system.
    Newton {
        /// System, Hamiltonian file, or catalog Hamiltonian id.
        input: String,
        #[arg(long)]
        chiba: bool,
        #[arg(long)]
        sketch: bool,
    },
    /// Standard-form test and Hamiltonian reconstruction.
    Hamiltonian {
        system: String,
        /// Multiplier c with c*first' = H_second, c*second' = -H_first.
        #[arg(long, allow_hyphen_values = true)]
        factor: Option<String>,
    },
    /// Regularise repeatedly, promoting polynomial leaves to new systems.
    Iterate {
        system: String,
        #[arg(long, default_value_t = 1)]
        passes: usize,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run the full fixture suite.
    Fixtures,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    System(#[from] crate::system::SystemError),
    #[error(transparent)]
    Blowup(#[from] crate::blowup::BlowupError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error(transparent)]
    Iterate(#[from] IterateError),
    #[error(transparent)]
    Picard(#[from] crate::picard::PicardError),
}

pub struct Outcome {
    pub ok: bool,
    pub text: String,
    pub report: Value,
    /// `(file name, contents)` for `--out`.
    pub files: Vec<(String, String)>,
}

struct Input {
    system: PlanarSystem,
    digest: String,
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))
}

/// A catalog id, or the path of a system file.
fn load_system(arg: &str) -> Result<Input, CliError> {
    if let Ok(e) = catalog::load(arg) {
        return Ok(Input { digest: digest(e.source.as_bytes()), system: e.system });
    }
    let src = read(&PathBuf::from(arg))?;
    Ok(Input { system: PlanarSystem::parse(&src)?, digest: digest(src.as_bytes()) })
}

fn options(depth: Option<usize>, exec: Exec) -> Options {
    let mut o = Options { exec, ..Options::default() };
    if let Some(d) = depth {
        o.max_depth = d;
    }
    o
}

fn status_json(s: &CascadeStatus, names: &VarNames) -> Value {
    match s {
        CascadeStatus::Regular => json!({ "kind": "regular" }),
        CascadeStatus::Obstructed { conditions, issues } => json!({
            "kind": "obstructed",
            "conditions": conditions.iter().map(|p| fmt_poly(p, names)).collect::<Vec<_>>(),
            "issues": issues,
        }),
        CascadeStatus::DepthExceeded { frontier } => json!({
            "kind": "depth-exceeded",
            "frontier": frontier.iter().map(|(_, a, b)| [fmt_poly(a, names), fmt_poly(b, names)]).collect::<Vec<_>>(),
        }),
    }
}

fn tree_json(t: &BlowupTree) -> Value {
    let names = VarNames::default();
    let cascades: Vec<Value> = t
        .cascades
        .iter()
        .zip(t.cascade_centers())
        .map(|(c, centers)| {
            json!({
                "blowups": centers.iter().map(|(l, a, b)| json!({
                    "chart": l,
                    "center": [fmt_poly(a, &names), fmt_poly(b, &names)],
                })).collect::<Vec<_>>(),
                "status": status_json(&c.status, &names),
            })
        })
        .collect();
    json!({
        "regular": t.is_regular(),
        "blowups": t.blowups.len(),
        "cascades": cascades,
        "conditions": t.conditions().iter().map(|p| fmt_poly(p, &names)).collect::<Vec<_>>(),
        "line_issues": t.line_issues,
    })
}

fn cmd_regularize(system: &str, depth: Option<usize>, free: &[String], exec: Exec) -> Result<Outcome, CliError> {
    let input = load_system(system)?;
    let s = input.system.free(free);
    let t = regularize(&s, &options(depth, exec))?;
    let mut text = format!("{} ({} blow-ups)\n", s.name, t.blowups.len());
    text.push_str(&t.describe());
    Ok(Outcome {
        ok: t.is_regular() || !free.is_empty(),
        text,
        report: json!({ "input": input.digest, "system": s.to_text(), "free": free, "tree": tree_json(&t) }),
        files: Vec::new(),
    })
}

fn cmd_surface_type(system: &str, depth: Option<usize>, exec: Exec) -> Result<Outcome, CliError> {
    let input = load_system(system)?;
    let s = &input.system;
    let t = regularize(s, &options(depth, exec))?;
    let d = component_configuration(&t)?;
    let st = classify(&d);
    let deltas: Vec<String> = st.node_map.iter().map(|&i| d.nodes[i].class.to_string()).collect();
    let mut text = format!("{}: {} with {} exceptional classes\n\n{}", s.name, st.label, d.n, d.class_table());
    for (k, c) in deltas.iter().enumerate() {
        text.push_str(&format!("\ndelta{} = {c}", k + 1));
    }
    text.push('\n');
    let file = format!("{}.dot", s.name.replace(|c: char| !c.is_ascii_alphanumeric(), "_"));
    Ok(Outcome {
        ok: st.label != crate::picard::SurfaceLabel::Unknown,
        text,
        report: json!({ "input": input.digest, "label": st.label.to_string(), "diagram": d, "deltas": deltas }),
        files: vec![(file, d.to_dot(&s.name))],
    })
}

type MapLines = (String, String, Option<(String, String)>);

fn map_lines(src: &str) -> Result<MapLines, CliError> {
    let get = |key: &str| {
        src.lines().find_map(|l| {
            let (k, v) = l.split_once('=')?;
            (k.split_whitespace().collect::<Vec<_>>().join(" ") == key).then(|| v.trim().to_string())
        })
    };
    let first = get("first").ok_or_else(|| CliError::Usage("map file has no `first = ..` line".into()))?;
    let second = get("second").ok_or_else(|| CliError::Usage("map file has no `second = ..` line".into()))?;
    let inverse = match (get("inverse first"), get("inverse second")) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => return Err(CliError::Usage("inverse needs both components".into())),
    };
    Ok((first, second, inverse))
}

fn cmd_verify_map(
    mapfile: Option<&PathBuf>,
    from: Option<&str>,
    to: Option<&str>,
    fixture: Option<&str>,
) -> Result<Outcome, CliError> {
    let (source, target, fwd, inv, input) = if let Some(id) = fixture {
        let m = catalog::map_fixture(id).ok_or_else(|| CliError::Usage(format!("unknown map `{id}`")))?;
        (m.source, m.target, m.forward, Some(m.inverse), digest(id.as_bytes()))
    } else {
        let (Some(path), Some(from), Some(to)) = (mapfile, from, to) else {
            return Err(CliError::Usage("verify-map needs a map file with --from and --to, or --fixture".into()));
        };
        let src = read(path)?;
        let (a, b, inv) = map_lines(&src)?;
        let (s, t) = (load_system(from)?, load_system(to)?);
        let (s, t, fwd, inv) =
            catalog::map_between(&s.system, &t.system, (&a, &b), inv.as_ref().map(|(a, b)| (a.as_str(), b.as_str())))?;
        (s, t, fwd, inv, digest(src.as_bytes()))
    };
    let tr = transport_check(&fwd, &source, &target)?;
    let back = inv.as_ref().map(|i| transport_check(i, &target, &source)).transpose()?;
    let composes = inv.as_ref().map(|i| compose_check(&fwd, i)).transpose()?;
    let jac = fwd.jacobian_factor();
    let res = |r: &crate::birational::TransportReport, n: &VarNames| [fmt_frac(&r.residuals.0, n), fmt_frac(&r.residuals.1, n)];
    let mut text = format!("{}\ntransport: {}\n", fwd.display(), if tr.ok { "ok" } else { "FAILED" });
    if !tr.ok {
        let [a, b] = res(&tr, &source.names);
        text.push_str(&format!("  residuals: {a}, {b}\n"));
    }
    if let (Some(b), Some(c)) = (&back, composes) {
        text.push_str(&format!("inverse transport: {}\n", if b.ok { "ok" } else { "FAILED" }));
        text.push_str(&format!("inverse composes to identity: {}\n", if c { "yes" } else { "no" }));
    }
    text.push_str(&format!("jacobian factor: {}\n", fmt_frac(&jac, &source.names)));
    let ok = tr.ok && back.as_ref().is_none_or(|b| b.ok) && composes.unwrap_or(true);
    Ok(Outcome {
        ok,
        text,
        report: json!({
            "input": input,
            "source": source.name,
            "target": target.name,
            "transport": { "ok": tr.ok, "residuals": res(&tr, &source.names) },
            "inverse": back.as_ref().map(|b| json!({ "ok": b.ok, "residuals": res(b, &target.names), "composes": composes })),
            "jacobian_factor": fmt_frac(&jac, &source.names),
        }),
        files: Vec::new(),
    })
}

fn polygon_json(p: &NewtonPolygon) -> Value {
    json!({
        "hull": p.hull,
        "genus": p.interior,
        "boundary": p.boundary,
        "area": p.area.to_string(),
        "shape": format!("{:?}", p.shape()),
    })
}

fn cmd_newton(input: &str, chiba: bool, sketch: bool) -> Result<Outcome, CliError> {
    let (what, poly, dg) = if let Some(h) = catalog::hamiltonian_fixture(input).filter(|_| !chiba) {
        let full = match &h.gauge {
            Some(g) => &h.h + g,
            None => h.h.clone(),
        };
        ("hamiltonian", polygon_of_hamiltonian(&full, &h.system.rules), digest(input.as_bytes()))
    } else if let Ok(inp) = load_system(input) {
        if chiba {
            ("chiba", Ok(chiba_polytope(&inp.system)), inp.digest)
        } else {
            let h = reconstruct(&inp.system).map_err(|e| CliError::Usage(e.describe(&inp.system.names)))?;
            ("hamiltonian", polygon_of_hamiltonian(&h, &inp.system.rules), inp.digest)
        }
    } else {
        if chiba {
            return Err(CliError::Usage(format!("`{input}` is not a system")));
        }
        let src = read(&PathBuf::from(input))?;
        let h = parse_poly(src.trim(), &Scope::new(VarNames::default()))?;
        ("hamiltonian", polygon_of_hamiltonian(&h, &crate::coeff::Rules::empty()), digest(src.as_bytes()))
    };
    let p = poly.map_err(|e| CliError::Usage(e.to_string()))?;
    let hull: Vec<String> = p.hull.iter().map(|(a, b)| format!("({a}, {b})")).collect();
    let mut text = format!("{what} polygon\nvertices: {}\ngenus {}, area {}\n", hull.join(" "), p.interior, p.area);
    if sketch {
        text.push('\n');
        text.push_str(&p.sketch());
    }
    Ok(Outcome { ok: true, text, report: json!({ "input": dg, "kind": what, "polygon": polygon_json(&p) }), files: Vec::new() })
}

fn cmd_hamiltonian(system: &str, factor: Option<&str>) -> Result<Outcome, CliError> {
    let input = load_system(system)?;
    let s = &input.system;
    let names = &s.names;
    let standard = is_standard(s);
    let mut text = format!("{}: divergence {}\n", s.name, fmt_poly(&divergence(s), names));
    let h = match factor {
        Some(c) => {
            let c = parse_frac(c, &s.scope())?.reduce(&s.rules);
            text.push_str(&format!("factor {}\n", fmt_frac(&c, names)));
            hamiltonian_wrt_factor(s, &c)
        }
        None => reconstruct(s),
    };
    let (ok, hj) = match &h {
        Ok(h) => {
            text.push_str(&format!("H = {}\n", fmt_poly(&without_gauge(h), names)));
            (true, json!(fmt_poly(h, names)))
        }
        Err(e) => {
            text.push_str(&format!("no Hamiltonian: {}\n", e.describe(names)));
            (false, Value::Null)
        }
    };
    Ok(Outcome {
        ok,
        text,
        report: json!({ "input": input.digest, "standard": standard, "factor": factor, "hamiltonian": hj }),
        files: Vec::new(),
    })
}

fn cmd_iterate(system: &str, passes: usize, depth: Option<usize>, exec: Exec) -> Result<Outcome, CliError> {
    let input = load_system(system)?;
    let t = iterate_regularize(&input.system, passes, &options(depth, exec))?;
    let nodes: Vec<Value> = t
        .nodes
        .iter()
        .map(|n| {
            json!({
                "id": n.id,
                "parent": n.parent,
                "pass": n.pass,
                "origin": n.origin,
                "system": n.system.to_text(),
                "back_map": [fmt_frac(&n.back_map.comps.0, &n.system.names), fmt_frac(&n.back_map.comps.1, &n.system.names)],
                "match": n.matched.as_ref().map(|m| json!({ "id": m.id, "scaling": [m.lambda.to_string(), m.mu.to_string()] })),
                "non_polynomial_leaves": n.non_promotable,
            })
        })
        .collect();
    Ok(Outcome {
        ok: true,
        text: t.describe(),
        report: json!({ "input": input.digest, "passes": passes, "nodes": nodes }),
        files: Vec::new(),
    })
}

fn cmd_fixtures(exec: Exec) -> Outcome {
    let rs = fixtures::run(exec);
    let mut text = String::new();
    for r in &rs {
        text.push_str(&format!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.id));
        if !r.passed {
            text.push_str(&format!("  ({})", r.detail));
        }
        text.push('\n');
    }
    let failed = rs.iter().filter(|r| !r.passed).count();
    text.push_str(&format!("{} passed, {failed} failed\n", rs.len() - failed));
    Outcome { ok: failed == 0, text, report: json!({ "results": rs }), files: Vec::new() }
}

/// Runs one command; the report's `command` field echoes `argv`.
pub fn run(cli: &Cli, argv: &[String]) -> Result<Outcome, CliError> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let mut out = match &cli.command {
        Command::Regularize { system, depth, free } => cmd_regularize(system, *depth, free, exec)?,
        Command::SurfaceType { system, depth } => cmd_surface_type(system, *depth, exec)?,
        Command::VerifyMap { mapfile, from, to, fixture } => {
            cmd_verify_map(mapfile.as_ref(), from.as_deref(), to.as_deref(), fixture.as_deref())?
        }
        Command::Newton { input, chiba, sketch } => cmd_newton(input, *chiba, *sketch)?,
        Command::Hamiltonian { system, factor } => cmd_hamiltonian(system, factor.as_deref())?,
        Command::Iterate { system, passes, depth } => cmd_iterate(system, *passes, *depth, exec)?,
        Command::Fixtures => cmd_fixtures(exec),
    };
    out.report = json!({ "command": argv, "ok": out.ok, "result": out.report });
    Ok(out)
}
