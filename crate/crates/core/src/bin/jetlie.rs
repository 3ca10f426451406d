//! Command-line surface: catalog verification, and prolongation / bracket /
//! rank / Lie determinant / invariant checks on realization files.

use clap::{Args, Parser, Subcommand};
use jetlie::catalog::{
    instantiate, parse_cell, sample_tuples, table2_row_build, Catalog, ParamBinding,
};
use jetlie::error::Error;
use jetlie::expr::zero::parse_rational;
use jetlie::invariants::{lie_determinant, numeric_flow_check, verify_invariant, verify_iod, FlowConfig};
use jetlie::lie::{lie_bracket, nu, rank_sequence};
use jetlie::parse::{parse_realization_file, print_expr, realize};
use jetlie::report::{CheckResult, EntryReport};
use jetlie::runner::{self, RunConfig};
use jetlie::scalar::Scalar;
use jetlie::transform::apply_table2;
use jetlie::{prolong, Expr, ZeroPolicy};
use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "jetlie", version, about = "Differential invariants of Lie algebra realizations on the real plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Seed for every randomized check (reports embed the derived per-task seeds).
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Zero-test trial count.
    #[arg(long, default_value_t = 20)]
    trials: u32,
    /// Zero-test relative tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Parameter binding `name=p/q`, or `name=sym` to keep it symbolic. Repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Series index override for r-parameterized rows (up to 6).
    #[arg(long = "r")]
    series_r: Option<u32>,
    /// Emit one JSON object per entry instead of text.
    #[arg(long)]
    json: bool,
    /// Restrict to check classes: closure,inv,iod,liedet,count,flow,props. Repeatable/comma-separated.
    #[arg(long = "only", value_delimiter = ',')]
    only: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one catalog entry (all case variants and parameter samples).
    Check {
        label: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Verify the whole catalog.
    CheckAll {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Print the order-n prolongation of every basis field of a realization file.
    Prolong { file: String, order: u32 },
    /// Print the Lie bracket [e_i, e_j] of two basis fields of a realization file.
    Bracket { file: String, i: usize, j: usize },
    /// Compute the Lie determinant of a realization file (and compare to its
    /// `liedet` cell when present).
    Liedet {
        file: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Print the rank sequence r_0..r_n of a realization file.
    Rank {
        file: String,
        order: u32,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Check that an expression is a differential invariant of a realization file.
    VerifyInv {
        file: String,
        expr: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Check that an expression is an invariant-differentiation multiplier.
    VerifyIod {
        file: String,
        expr: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Apply a stored real-to-complex row (`table2:N1`) or a transformation file.
    Transform {
        target: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Numeric flow cross-check of a catalog entry's invariants.
    FlowCheck {
        label: String,
        #[arg(long, default_value_t = 5)]
        flow_trials: u32,
        #[arg(long, default_value_t = 0.5)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 1e-6)]
        flow_tol: f64,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } => 3,
        Error::UnknownEntry(_) | Error::Constraint(_) => 2,
        _ => 1,
    }
}

fn report_error(err: Error) -> ExitCode {
    match &err {
        Error::Parse { span, message, expected } => {
            eprintln!(
                "parse error at line {}, column {} (bytes {}..{}): {message}; expected {}",
                span.line,
                span.column,
                span.begin,
                span.end,
                expected.join(", ")
            );
        }
        other => eprintln!("error: {other}"),
    }
    ExitCode::from(exit_code_for(&err))
}

fn build_config(opts: &CommonOpts) -> Result<RunConfig, Error> {
    let mut params = BTreeMap::new();
    for p in &opts.params {
        let (name, value) = p
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("--param needs NAME=VALUE, got `{p}`")))?;
        let binding = if value == "sym" || value == "symbolic" {
            ParamBinding::Symbolic
        } else {
            ParamBinding::Value(Scalar::from_rational(parse_rational(value)?))
        };
        params.insert(name.to_string(), binding);
    }
    let known = ["closure", "inv", "iod", "liedet", "count", "flow", "props"];
    for class in &opts.only {
        if !known.contains(&class.as_str()) {
            return Err(Error::Invalid(format!(
                "unknown check class `{class}` (expected one of {})",
                known.join(", ")
            )));
        }
    }
    Ok(RunConfig {
        seed: opts.seed,
        trials: opts.trials,
        tol: opts.tol,
        flow: FlowConfig { seed: opts.seed, ..FlowConfig::default() },
        only: opts.only.iter().cloned().collect::<BTreeSet<_>>(),
        params,
        series_r: opts.series_r,
        json: opts.json,
    })
}

fn policy_of(cfg: &RunConfig) -> ZeroPolicy {
    ZeroPolicy { trials: cfg.trials, tol: cfg.tol, seed: cfg.seed, ..ZeroPolicy::default() }
}

fn load_file(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {path}: {e}")))
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { label, opts } => {
            let cfg = build_config(&opts)?;
            let catalog = Catalog::load()?;
            let reports = runner::check_entry(&catalog, &label, &cfg)?;
            print!("{}", runner::render_reports(&reports, cfg.json));
            Ok(runner::all_passed(&reports))
        }
        Command::CheckAll { opts } => {
            let cfg = build_config(&opts)?;
            let catalog = Catalog::load()?;
            let mut ok = true;
            if cfg.only.contains("props") {
                for outcome in runner::props::run_all(&catalog, &cfg) {
                    if cfg.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "suite": outcome.name,
                                "status": if outcome.pass { "PASS" } else { "FAIL" },
                                "detail": outcome.detail,
                                "seed": cfg.seed,
                            })
                        );
                    } else {
                        println!(
                            "{} {:<24} {}",
                            if outcome.pass { "PASS" } else { "FAIL" },
                            outcome.name,
                            outcome.detail
                        );
                    }
                    ok &= outcome.pass;
                }
                if cfg.only.len() == 1 {
                    return Ok(ok);
                }
            }
            let all = runner::check_all(&catalog, &cfg);
            let mut entries = 0usize;
            for res in all {
                let reports = res?;
                entries += reports.len();
                ok &= runner::all_passed(&reports);
                print!("{}", runner::render_reports(&reports, cfg.json));
            }
            eprintln!(
                "verified {entries} entry instance(s); overall: {}",
                if ok { "PASS" } else { "FAIL" }
            );
            Ok(ok)
        }
        Command::Prolong { file, order } => {
            let spec = parse_realization_file(&load_file(&file)?)?;
            let r = realize(&spec)?;
            for (i, f) in r.basis.iter().enumerate() {
                let p = prolong(f, order);
                println!("e{}: xi = {}", i + 1, print_expr(&f.xi));
                println!("    eta = {}", print_expr(&f.eta));
                for (k, e) in p.etas.iter().enumerate() {
                    println!("    eta^{} = {}", k + 1, print_expr(e));
                }
            }
            Ok(true)
        }
        Command::Bracket { file, i, j } => {
            let spec = parse_realization_file(&load_file(&file)?)?;
            let r = realize(&spec)?;
            let dim = r.basis.len();
            if i == 0 || j == 0 || i > dim || j > dim {
                return Err(Error::Invalid(format!("basis indices must lie in 1..={dim}")));
            }
            let w = lie_bracket(&r.basis[i - 1], &r.basis[j - 1]);
            println!("[e{i}, e{j}] = ({})*D[x] + ({})*D[y]", print_expr(&w.xi), print_expr(&w.eta));
            Ok(true)
        }
        Command::Liedet { file, opts } => {
            let cfg = build_config(&opts)?;
            let spec = parse_realization_file(&load_file(&file)?)?;
            let r = realize(&spec)?;
            let policy = r.policy_with_params(&policy_of(&cfg));
            let det = lie_determinant(&r, &policy)?;
            println!("Lie determinant: {}", print_expr(&det));
            if let Some(jetlie::parse::LieDetCell::Text(cell)) =
                spec.groups.first().and_then(|g| g.liedet.clone())
            {
                let expected = parse_cell(&cell, &BTreeMap::new())?;
                match jetlie::equal_up_to_constant(&det, &expected, &policy)? {
                    Some(c) => println!("matches stored cell `{cell}` up to the constant {c}"),
                    None => {
                        println!("does NOT match stored cell `{cell}` up to a constant");
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        Command::Rank { file, order, opts } => {
            let cfg = build_config(&opts)?;
            let spec = parse_realization_file(&load_file(&file)?)?;
            let r = realize(&spec)?;
            let policy = r.policy_with_params(&policy_of(&cfg));
            let ranks = rank_sequence(&r, order, &policy)?;
            let rendered: Vec<String> = ranks.iter().map(|k| k.to_string()).collect();
            println!("r_0..r_{order} = [{}]", rendered.join(", "));
            if let Ok(v) = nu(&r, &policy) {
                println!("nu = {v}");
            }
            Ok(true)
        }
        Command::VerifyInv { file, expr, opts } => {
            let cfg = build_config(&opts)?;
            let spec = parse_realization_file(&load_file(&file)?)?;
            let r = realize(&spec)?;
            let policy = r.policy_with_params(&policy_of(&cfg));
            let inv = parse_cell(&expr, &BTreeMap::new())?;
            let ok = verify_invariant(&r, &inv, &policy)?;
            println!("{} is {}a differential invariant", print_expr(&inv), if ok { "" } else { "NOT " });
            Ok(ok)
        }
        Command::VerifyIod { file, expr, opts } => {
            let cfg = build_config(&opts)?;
            let spec = parse_realization_file(&load_file(&file)?)?;
            let r = realize(&spec)?;
            let policy = r.policy_with_params(&policy_of(&cfg));
            let lambda = parse_cell(&expr, &BTreeMap::new())?;
            let ok = verify_iod(&r, &lambda, &policy)?;
            println!(
                "{} is {}an invariant-differentiation multiplier",
                print_expr(&lambda),
                if ok { "" } else { "NOT " }
            );
            Ok(ok)
        }
        Command::Transform { target, opts } => {
            let cfg = build_config(&opts)?;
            let catalog = Catalog::load()?;
            let policy = policy_of(&cfg);
            let (row, source) = if let Some(n1) = target.strip_prefix("table2:") {
                let spec_row = catalog.table2_row(n1)?.clone();
                let source_spec = catalog.spec(&spec_row.source)?;
                let tuple = if cfg.params.is_empty() {
                    sample_tuples(source_spec.groups.first().unwrap())
                        .into_iter()
                        .next()
                        .unwrap_or_default()
                } else {
                    cfg.params.clone()
                };
                let entry = instantiate(source_spec, &tuple, &BTreeMap::new(), None)?;
                let mut env = BTreeMap::new();
                for (name, binding) in &entry.params_used {
                    if let ParamBinding::Value(v) = binding {
                        env.insert(jetlie::Symbol::param(name), Expr::constant(v.clone()));
                    }
                }
                (table2_row_build(&spec_row, &env)?, entry.realization)
            } else {
                let text = load_file(&target)?;
                jetlie::catalog::parse_transform_file(&text)?
            };
            let outcome = apply_table2(&row, &source, &policy)?;
            println!("source ({}):", row.source_label);
            for (i, f) in outcome.before.basis.iter().enumerate() {
                println!("  e{} = {}", i + 1, f);
            }
            println!("image (complex chart):");
            for (i, f) in outcome.after.basis.iter().enumerate() {
                println!("  e~{} = {}", i + 1, f);
            }
            println!(
                "brackets preserved: {}; structure constants transform by conjugation: yes",
                if outcome.brackets_preserved { "yes" } else { "NO" }
            );
            Ok(outcome.brackets_preserved)
        }
        Command::FlowCheck { label, flow_trials, t_end, step, flow_tol, opts } => {
            let cfg = build_config(&opts)?;
            let catalog = Catalog::load()?;
            let spec = catalog.spec(&label)?;
            let flow_cfg = FlowConfig { trials: flow_trials, t_end, step, tol: flow_tol, seed: cfg.seed };
            let mut ok = true;
            let mut reports: Vec<EntryReport> = Vec::new();
            for group in &spec.groups {
                for tuple in sample_tuples(group) {
                    let merged = if cfg.params.is_empty() { tuple } else { cfg.params.clone() };
                    let entry = instantiate(spec, &merged, &BTreeMap::new(), cfg.series_r)?;
                    let mut notes = Vec::new();
                    let mut pass = true;
                    for (i, inv) in entry.invariants.iter().enumerate() {
                        match numeric_flow_check(&entry.realization, inv, &flow_cfg) {
                            Ok(rep) => {
                                pass &= rep.pass;
                                notes.push(format!("I{} drift {:.2e}", i + 1, rep.max_rel_drift));
                            }
                            Err(e) => {
                                pass = false;
                                notes.push(format!("I{}: {e}", i + 1));
                            }
                        }
                    }
                    let note = notes.join("; ");
                    let mut checks = BTreeMap::new();
                    checks.insert(
                        "flow".to_string(),
                        if pass { CheckResult::pass(note) } else { CheckResult::fail(note) },
                    );
                    ok &= pass;
                    reports.push(EntryReport {
                        entry: entry.label.clone(),
                        case: entry.case.clone(),
                        params: entry
                            .params_used
                            .iter()
                            .map(|(k2, v)| {
                                let s = match v {
                                    ParamBinding::Value(c) => c.to_string(),
                                    ParamBinding::Symbolic => "symbolic".into(),
                                };
                                (k2.clone(), s)
                            })
                            .collect(),
                        seed: cfg.seed,
                        checks,
                        elapsed_ms: 0,
                    });
                    if !cfg.params.is_empty() {
                        break;
                    }
                }
                if !cfg.params.is_empty() {
                    break;
                }
            }
            print!("{}", runner::render_reports(&reports, cfg.json));
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => report_error(e),
    }
}
