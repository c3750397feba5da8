//! `majsign`: batch front end for the witness builders, the degree oracles
//! and the pattern-matrix tools.
//!
//! Every output file carries a `manifest` object (command line, parameters,
//! precision, version, outcome). Wall time is reported on stderr only, so
//! equal manifests give byte-identical files.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use majsign::dualwitness::io::WitnessFile;
use majsign::dualwitness::{build_witness, verify_claims, verify_witness, witness_params, WitnessCert};
use majsign::exactnum::rational;
use majsign::lift::{build_psi_pair, verify_lift, verify_psi_pair};
use majsign::lp::{
    rational_degree_feasible, rational_degree_search, threshold_degree, FnSpec, RationalAnswer,
};
use majsign::patternmatrix::{
    pipeline_bound, rs_bound, upp_translate, upp_validate, BoundInputs, PatternMatrixSpec,
};
use majsign::{Enclosure, Rational, Status, DEFAULT_PRECISION};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "majsign", version, about = "Exact smooth dual witnesses for majority and sign-rank tooling")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Starting precision in bits; doubled automatically up to 4096.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Output file (stdout when absent).
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Instance {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u32,
}

#[derive(Args)]
struct FnArgs {
    /// Built-in name (maj, parity, and, or, maj_and_maj) or a JSON file.
    #[arg(long = "fn")]
    func: String,
    /// Arity for built-ins.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the smooth witness, verify it and write the witness file.
    Build {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        common: Common,
    },
    /// Re-verify a witness file from scratch.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check the per-u claims behind the construction.
    Claims {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the lift of the witness to the hypercube.
    Lift {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the ψ₀/ψ₁ pair built from the lift.
    Psi {
        #[command(flatten)]
        inst: Instance,
        #[command(flatten)]
        common: Common,
    },
    /// Threshold degree with a dual witness for the next lower degree.
    Thrdeg {
        #[command(flatten)]
        f: FnArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Rational-approximation feasibility at degree --d, or the least such degree.
    Ratdeg {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        d: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Generate the pattern matrix of a function.
    Pattern {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long = "N")]
        big_n: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the sign-rank bound for explicit inputs.
    Bound {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: u64,
        #[arg(long = "N")]
        big_n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the bound along the main parameter pipeline at n = 2^k.
    Pipeline {
        /// A power of two, written plainly or as "2^k".
        #[arg(long)]
        n: String,
        #[command(flatten)]
        common: Common,
    },
    /// Validate the unbounded-error protocol for majority on 2n bits.
    Upp {
        #[arg(long)]
        n: u64,
        /// Tie-breaking bias; defaults to 1/(8n).
        #[arg(long)]
        beta: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn code(status: Status) -> u8 {
    match status {
        Status::Pass => 0,
        Status::Fail => 2,
        Status::Undecided => 3,
    }
}

struct Outcome {
    status: Status,
    precision: Option<u32>,
    summary: String,
    body: Body,
}

enum Body {
    Json(Value),
    Csv(String),
}

fn parse_rational(flag: &str, s: &str) -> Result<Rational, Failure> {
    rational::parse(s).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn load_fn(f: &FnArgs) -> Result<FnSpec, Failure> {
    let path = Path::new(&f.func);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    let arity = f.n.ok_or_else(|| usage("built-in functions need --n (the arity)"))?;
    FnSpec::builtin(&f.func, arity).map_err(usage)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn build_cert(inst: &Instance) -> Result<WitnessCert, Failure> {
    let params = witness_params(inst.n, inst.d).map_err(usage)?;
    Ok(build_witness(&params))
}

fn report(status: Status, precision: u32, summary: String, body: Value) -> Outcome {
    Outcome { status, precision: Some(precision), summary, body: Body::Json(body) }
}

fn run(cmd: &Cmd) -> Result<(Outcome, Value), Failure> {
    let out = match cmd {
        Cmd::Build { inst, common } => {
            let mut cert = build_cert(inst)?;
            let r = verify_witness(&cert, common.precision);
            let (status, bits) = (r.status, r.precision_bits);
            cert.report = Some(r);
            let file = WitnessFile::from_cert(&cert);
            (report(status, bits, format!("witness {status:?}"), to_value(&file)), json!({"n": inst.n, "d": inst.d}))
        }
        Cmd::Verify { file, common } => {
            let text = std::fs::read_to_string(file).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
            let wf: WitnessFile =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let (n, d) = (wf.n, wf.d);
            let cert = wf.into_cert().map_err(usage)?;
            let r = verify_witness(&cert, common.precision);
            let failing: Vec<&str> = [
                ("l1_norm", r.l1_norm.status),
                ("domination", r.domination.status),
                ("orthogonality", r.orthogonality.status),
                ("smoothness", r.smoothness.status),
            ]
            .into_iter()
            .filter(|(_, s)| *s != Status::Pass)
            .map(|(name, _)| name)
            .collect();
            let summary = if failing.is_empty() { "all properties pass".to_string() } else { format!("not passing: {}", failing.join(", ")) };
            (report(r.status, r.precision_bits, summary, json!({"report": r})), json!({"n": n, "d": d}))
        }
        Cmd::Claims { inst, common } => {
            let params = witness_params(inst.n, inst.d).map_err(usage)?;
            let r = verify_claims(&params, common.precision);
            (report(r.status, r.precision_bits, format!("claims {:?}", r.status), json!({"report": r})), json!({"n": inst.n, "d": inst.d}))
        }
        Cmd::Lift { inst, common } => {
            let cert = build_cert(inst)?;
            let r = verify_lift(&cert, common.precision);
            (report(r.status, r.precision_bits, format!("lift {:?}", r.status), json!({"report": r})), json!({"n": inst.n, "d": inst.d}))
        }
        Cmd::Psi { inst, common } => {
            let cert = build_cert(inst)?;
            let pair = build_psi_pair(&cert);
            let r = verify_psi_pair(&pair, common.precision);
            let summary = format!("psi pair {:?}, orientation {:?}", r.status, r.recorded_orientation);
            (report(r.status, r.precision_bits, summary, json!({"report": r})), json!({"n": inst.n, "d": inst.d}))
        }
        Cmd::Thrdeg { f, .. } => {
            let spec = load_fn(f)?;
            let t = threshold_degree(&spec).map_err(usage)?;
            let check = t.witness.as_ref().map(|w| w.check_threshold(&spec));
            let ok = check.as_ref().is_none_or(|c| c.ok());
            let status = if ok { Status::Pass } else { Status::Fail };
            let body = json!({"function": spec, "threshold_degree": t.degree, "result": t, "witness_check": check});
            let summary = format!("threshold degree {}", t.degree);
            (Outcome { status, precision: None, summary, body: Body::Json(body) }, json!({"fn": f.func, "arity": spec.arity()}))
        }
        Cmd::Ratdeg { f, eps, d, .. } => {
            let spec = load_fn(f)?;
            let e = parse_rational("eps", eps)?;
            let params = json!({"fn": f.func, "arity": spec.arity(), "eps": rational::to_string(&e), "d": d});
            let (status, summary, body) = match d {
                Some(d) => {
                    let ans = rational_degree_feasible(&spec, *d, *d, &e).map_err(usage)?;
                    let (ok, what) = match &ans {
                        RationalAnswer::Feasible { .. } => (true, "feasible"),
                        RationalAnswer::Infeasible { witness } => (witness.check_pair(&spec).ok(), "infeasible"),
                    };
                    let st = if ok { Status::Pass } else { Status::Fail };
                    (st, format!("degree {d}: {what}"), json!({"function": spec, "answer": ans}))
                }
                None => {
                    let deg = rational_degree_search(&spec, &e).map_err(usage)?;
                    (Status::Pass, format!("least degree {deg}"), json!({"function": spec, "degree": deg}))
                }
            };
            (Outcome { status, precision: None, summary, body: Body::Json(body) }, params)
        }
        Cmd::Pattern { f, big_n, common } => {
            let spec = load_fn(f)?;
            let pm = PatternMatrixSpec::new(*big_n, spec.arity(), spec).map_err(usage)?;
            let params = json!({"fn": f.func, "n": pm.n(), "N": pm.big_n()});
            let summary = format!("{} x {} matrix", pm.rows(), pm.cols());
            let body = match common.format {
                Format::Csv => Body::Csv(pm.to_csv().map_err(usage)?),
                Format::Json => {
                    let dense = pm.dense().map_err(usage)?;
                    let cols: u64 = dense.first().map_or(0, |r| r.len() as u64);
                    let labels: Vec<String> =
                        (0..cols).map(|c| pm.column(&c.into()).label()).collect();
                    Body::Json(json!({"N": pm.big_n(), "n": pm.n(), "columns": labels, "matrix": dense}))
                }
            };
            (Outcome { status: Status::Pass, precision: None, summary, body }, params)
        }
        Cmd::Bound { gamma, delta, d, n, big_n, common } => {
            let g = parse_rational("gamma", gamma)?;
            let dl = parse_rational("delta", delta)?;
            let inputs = BoundInputs { gamma: Enclosure::point(g), delta_frac: dl, d: *d, n: *n, big_n: *big_n };
            let r = rs_bound(&inputs, common.precision).map_err(usage)?;
            let t = upp_translate(&r.log2_bound);
            let params = json!({"gamma": gamma, "delta": delta, "d": d, "n": n, "N": big_n});
            (report(Status::Pass, common.precision, "bound evaluated".into(), json!({"report": r, "upp": t})), params)
        }
        Cmd::Pipeline { n, common } => {
            let r = pipeline_bound(n, common.precision).map_err(usage)?;
            let summary = if r.vacuous { "bound is vacuous".to_string() } else { "bound evaluated".to_string() };
            (report(Status::Pass, common.precision, summary, json!({"report": r})), json!({"n": n}))
        }
        Cmd::Upp { n, beta, .. } => {
            let b = match beta {
                Some(s) => parse_rational("beta", s)?,
                None => rational::ratio(1, 8 * (*n).max(1) as i64),
            };
            let r = upp_validate(*n, &b).map_err(usage)?;
            let status = if r.pass { Status::Pass } else { Status::Fail };
            let summary = format!("worst margin {}", rational::to_string(&r.worst_margin));
            let params = json!({"n": n, "beta": rational::to_string(&b)});
            (Outcome { status, precision: None, summary, body: Body::Json(json!({"report": r})) }, params)
        }
    };
    Ok(out)
}

fn common(cmd: &Cmd) -> &Common {
    match cmd {
        Cmd::Build { common, .. }
        | Cmd::Verify { common, .. }
        | Cmd::Claims { common, .. }
        | Cmd::Lift { common, .. }
        | Cmd::Psi { common, .. }
        | Cmd::Thrdeg { common, .. }
        | Cmd::Ratdeg { common, .. }
        | Cmd::Pattern { common, .. }
        | Cmd::Bound { common, .. }
        | Cmd::Pipeline { common, .. }
        | Cmd::Upp { common, .. } => common,
    }
}

fn render(outcome: &Outcome, manifest: Value) -> String {
    match &outcome.body {
        Body::Csv(csv) => format!("# manifest: {}\n{csv}", serde_json::to_string(&manifest).expect("manifest")),
        Body::Json(v) => {
            let mut v = v.clone();
            if let Value::Object(map) = &mut v {
                map.insert("manifest".into(), manifest);
            }
            let mut s = serde_json::to_string_pretty(&v).expect("json");
            s.push('\n');
            s
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let started = Instant::now();
    let c = common(&cli.cmd);
    if c.format == Format::Csv && !matches!(cli.cmd, Cmd::Pattern { .. }) {
        eprintln!("error: --format csv is only available for `pattern`");
        return ExitCode::from(1);
    }
    let (outcome, params) = match run(&cli.cmd) {
        Ok(v) => v,
        Err(Failure::Usage(m)) | Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    let manifest = json!({
        "command": argv[1..],
        "parameters": params,
        "precision_bits": outcome.precision,
        "version": env!("CARGO_PKG_VERSION"),
        "outcome": {"status": outcome.status, "summary": outcome.summary},
    });
    let text = render(&outcome, manifest);
    match &c.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    eprintln!("{:?}: {} ({:.3}s)", outcome.status, outcome.summary, started.elapsed().as_secs_f64());
    ExitCode::from(code(outcome.status))
}
