//! Command-line front end. Exit codes: 0 success, 1 a checked property fails,
//! 2 malformed input or a request that cannot be run.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{ActionJson, PartialAction};
use crate::cochain::{cocycle_failure, cohomologous, delta, is_coboundary, Cochain, CochainJson};
use crate::cohomology::{cohomology, cohomology_bruteforce, DEFAULT_BRUTE_FORCE_BOUND};
use crate::error::Error;
use crate::globalize::{compare_globalizations, globalize_with_order, GlobalCochain, OrbitGlobalization};
use crate::verify::verify;

#[derive(Parser, Debug)]
#[command(name = "pcoh", version, about = "Partial group cohomology over products of Z/p^k blocks")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the partial action axioms.
    Validate { action: PathBuf },
    /// Print the coboundary of a cochain.
    Delta { action: PathBuf, cochain: PathBuf },
    /// Exit 0 when the cochain is a cocycle.
    CheckCocycle { action: PathBuf, cochain: PathBuf },
    /// Find ξ with δξ = f.
    CoboundaryWitness { action: PathBuf, cochain: PathBuf },
    /// Find ξ with f2 = f1 · δξ.
    Cohomologous { action: PathBuf, first: PathBuf, second: PathBuf },
    /// Globalize a partial cocycle orbit by orbit.
    Globalize {
        action: PathBuf,
        cocycle: PathBuf,
        /// Comma-separated group elements; the transversal is chosen greedily in this order.
        #[arg(long)]
        order: Option<String>,
    },
    /// Invariant factors of H^n.
    Cohomology {
        action: PathBuf,
        #[arg(long, short = 'n')]
        degree: usize,
        /// Cross-check against exhaustive enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_BOUND)]
        bound: u64,
    },
    /// Globalize two cocycles (by default the same one under two transversal orders)
    /// and find a witness that the globalizations are cohomologous.
    Compare {
        action: PathBuf,
        cocycle: PathBuf,
        /// Second cocycle; defaults to the first.
        second: Option<PathBuf>,
        /// Partial witness ξ with second = first · δξ.
        #[arg(long)]
        xi: Option<PathBuf>,
        #[arg(long)]
        order1: Option<String>,
        /// Defaults to the reverse of the group's element order.
        #[arg(long)]
        order2: Option<String>,
    },
    /// Run the theorem suite.
    Verify {
        action: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2])]
        degrees: Vec<usize>,
    },
}

/// A command's report and exit code.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

fn ok(report: Value) -> Outcome {
    Outcome { code: 0, report }
}

fn check(pass: bool, report: Value) -> Outcome {
    Outcome { code: if pass { 0 } else { 1 }, report }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotACocycle { .. } | Error::NotCohomologous | Error::Internal { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    serde_json::from_str(&text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn with_file<T>(path: &Path, r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_action(path: &Path) -> CliResult<PartialAction> {
    let j: ActionJson = read_json(path)?;
    with_file(path, PartialAction::from_json(&j))
}

fn load_valid_action(path: &Path) -> CliResult<PartialAction> {
    let pa = load_action(path)?;
    let report = pa.validate();
    if !report.valid {
        let v = &report.violations[0];
        return Err(Failure { code: 2, message: format!("{}: invalid partial action, axiom {} fails", path.display(), v.axiom) });
    }
    Ok(pa)
}

fn load_cochain(pa: &PartialAction, path: &Path) -> CliResult<Cochain> {
    let j: CochainJson = read_json(path)?;
    with_file(path, Cochain::from_json(pa, &j))
}

fn parse_order(pa: &PartialAction, s: &Option<String>, reverse: bool) -> CliResult<Vec<usize>> {
    let mut order: Vec<usize> = pa.group().elements().collect();
    if reverse {
        order.reverse();
    }
    if let Some(s) = s {
        order = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Failure { code: 2, message: format!("order: {e}") })?;
    }
    Ok(order)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn orbit_report(g: &OrbitGlobalization) -> Value {
    let c = &g.checks;
    json!({
        "blocks": g.blocks,
        "envelope": to_value(&g.env.to_json()),
        "u": to_value(&g.lift.u.0.to_json(&g.env.global)),
        "w_tilde": g.extension.as_ref().map(|e| to_value(&e.w_tilde.to_json(&g.env.source))),
        "checks": {
            "global_cocycle": c.global_cocycle.is_none(),
            "restriction": c.restriction.is_none(),
            "germ": c.germ.is_none(),
            "views_agree": c.views_agree.is_none(),
        },
    })
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(&cli.command) {
        Ok(o) => o,
        Err(f) => Outcome { code: f.code, report: json!({ "error": f.message }) },
    }
}

fn dispatch(cmd: &Command) -> CliResult<Outcome> {
    Ok(match cmd {
        Command::Validate { action } => {
            let pa = load_action(action)?;
            let r = pa.validate();
            check(r.valid, to_value(&r))
        }
        Command::Delta { action, cochain } => {
            let pa = load_valid_action(action)?;
            let f = load_cochain(&pa, cochain)?;
            ok(to_value(&delta(&pa, &f)?.to_json(&pa)))
        }
        Command::CheckCocycle { action, cochain } => {
            let pa = load_valid_action(action)?;
            let f = load_cochain(&pa, cochain)?;
            let fail = cocycle_failure(&pa, &f)?;
            check(fail.is_none(), json!({ "cocycle": fail.is_none(), "failure": fail }))
        }
        Command::CoboundaryWitness { action, cochain } => {
            let pa = load_valid_action(action)?;
            let f = load_cochain(&pa, cochain)?;
            let w = is_coboundary(&pa, &f)?;
            check(
                w.is_some(),
                json!({ "coboundary": w.is_some(), "witness": w.map(|x| to_value(&x.to_json(&pa))) }),
            )
        }
        Command::Cohomologous { action, first, second } => {
            let pa = load_valid_action(action)?;
            let f1 = load_cochain(&pa, first)?;
            let f2 = load_cochain(&pa, second)?;
            let w = cohomologous(&pa, &f1, &f2)?;
            check(
                w.is_some(),
                json!({ "cohomologous": w.is_some(), "witness": w.map(|x| to_value(&x.to_json(&pa))) }),
            )
        }
        Command::Globalize { action, cocycle, order } => {
            let pa = load_valid_action(action)?;
            let w = load_cochain(&pa, cocycle)?;
            let order = parse_order(&pa, order, false)?;
            let gs = globalize_with_order(&pa, &w, &order)?;
            let pass = gs.iter().all(|g| g.checks.all_pass());
            let single = (gs.len() == 1).then(|| &gs[0]);
            let mut checks = serde_json::Map::new();
            for key in ["global_cocycle", "restriction", "germ", "views_agree"] {
                let all = gs.iter().map(orbit_report).all(|r| r["checks"][key] == json!(true));
                checks.insert(key.into(), json!(all));
            }
            check(
                pass,
                json!({
                    "degree": w.degree,
                    "orbits": gs.iter().map(orbit_report).collect::<Vec<_>>(),
                    "envelope": single.map(|g| to_value(&g.env.to_json())),
                    "u": single.map(|g| to_value(&g.lift.u.0.to_json(&g.env.global))),
                    "checks": checks,
                }),
            )
        }
        Command::Cohomology { action, degree, oracle, bound } => {
            let pa = load_valid_action(action)?;
            let h = cohomology(&pa, *degree)?;
            let agrees = if *oracle { Some(cohomology_bruteforce(&pa, *degree, *bound)? == h.invariant_factors) } else { None };
            check(
                agrees != Some(false),
                json!({
                    "n": degree,
                    "invariant_factors": h.invariant_factors,
                    "order": h.order.to_string().parse::<u64>().map(Value::from).unwrap_or_else(|_| Value::from(h.order.to_string())),
                    "method": "snf",
                    "oracle_agrees": agrees,
                }),
            )
        }
        Command::Compare { action, cocycle, second, xi, order1, order2 } => {
            let pa = load_valid_action(action)?;
            let w1 = load_cochain(&pa, cocycle)?;
            let w2 = match second {
                Some(p) => load_cochain(&pa, p)?,
                None => w1.clone(),
            };
            let xi = xi.as_ref().map(|p| load_cochain(&pa, p)).transpose()?;
            let o1 = parse_order(&pa, order1, false)?;
            let o2 = parse_order(&pa, order2, true)?;
            let a = globalize_with_order(&pa, &w1, &o1)?;
            let b = globalize_with_order(&pa, &w2, &o2)?;
            let mut orbits = Vec::new();
            let mut pass = true;
            for (ga, gb) in a.iter().zip(&b) {
                let u2 = GlobalCochain(ga.env.transport_from(&gb.env, &gb.lift.u.0));
                let xi_o = xi.as_ref().map(|x| crate::globalize::project_cochain(x, &ga.blocks));
                let g = &ga.env.global;
                let entry = if ga.lift.u.0.degree == 0 {
                    let same = ga.lift.u == u2;
                    pass &= same;
                    json!({ "blocks": ga.blocks, "cohomologous": same, "witness": null, "verified": same })
                } else {
                    match compare_globalizations(&ga.env, &ga.lift.u, &u2, xi_o.as_ref()) {
                        Ok(z) => {
                            let verified = ga.lift.u.0.mul(g, &delta(g, &z)?)? == u2.0;
                            pass &= verified;
                            json!({ "blocks": ga.blocks, "cohomologous": true, "witness": to_value(&z.to_json(g)), "verified": verified })
                        }
                        Err(Error::NotCohomologous) => {
                            pass = false;
                            json!({ "blocks": ga.blocks, "cohomologous": false, "witness": null, "verified": false })
                        }
                        Err(e) => return Err(e.into()),
                    }
                };
                orbits.push(entry);
            }
            check(pass, json!({ "degree": w1.degree, "orbits": orbits, "cohomologous": pass }))
        }
        Command::Verify { action, seed, trials, degrees } => {
            let pa = load_valid_action(action)?;
            let r = verify(&pa, *seed, *trials, degrees)?;
            check(r.all_pass, to_value(&r))
        }
    })
}

/// Sorted-key pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
