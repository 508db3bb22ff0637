use std::path::{Path, PathBuf};
use std::process::ExitCode;

use berezin::catalog::{list_catalog, Outcome};
use berezin::rkhs::RkhsModel;
use berezin_audit::commands::{self, OperatorSource};
use berezin_audit::config::{split_list, ModelSpec, ResolvedConfig};
use berezin_audit::formats::{self, ModelDescriptor};
use berezin_audit::{exit, run_audit, AuditConfig, AuditError, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "berezin", version, about = "Audit Berezin number inequalities on finite reproducing kernel models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate catalog entries over seeded random operands.
    Audit(AuditArgs),
    /// Write the Berezin symbol of one operator on a model grid.
    Profile(ProfileArgs),
    /// Toeplitz truncation study over a list of sizes.
    Toeplitz(ToeplitzArgs),
    /// Power-inequality and boundary-defect diagnostics for one operator.
    Power(PowerArgs),
    /// Search for operands that make an entry tight.
    Tighten(TightenArgs),
    /// List catalog entries.
    List,
}

#[derive(Args)]
struct Common {
    /// JSON config; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Refinement rounds for Berezin number estimates.
    #[arg(long)]
    refine: Option<u32>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<AuditConfig> {
        let mut cfg = match &self.config {
            Some(path) => AuditConfig::load(path)?,
            None => AuditConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(r) = self.refine {
            cfg.refine_steps = r;
        }
        if self.out_json.is_some() {
            cfg.out_json.clone_from(&self.out_json);
        }
        if self.out_csv.is_some() {
            cfg.out_csv.clone_from(&self.out_csv);
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated entry ids, or `all`.
    #[arg(long)]
    entries: Option<String>,
    /// Model descriptors such as `hardy:32` or `diagonal`; repeatable or comma-separated.
    #[arg(long)]
    model: Vec<String>,
    /// Sizes for bare `diagonal` models, e.g. `2,3,4`.
    #[arg(long)]
    dims: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated ensemble kinds.
    #[arg(long)]
    kinds: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// Only print the totals line.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct OperatorArgs {
    /// Matrix as JSON rows (entries are numbers or [re, im]); `@path` reads a file.
    #[arg(long, group = "operator")]
    matrix: Option<String>,
    /// Toeplitz symbol as JSON {"k": [re, im]}; `@path` reads a file.
    #[arg(long, group = "operator")]
    symbol: Option<String>,
    /// Ensemble draw `kind[:index]`, seeded by --seed.
    #[arg(long, group = "operator")]
    ensemble: Option<String>,
}

impl OperatorArgs {
    fn source(&self, seed: u64) -> Result<OperatorSource> {
        if let Some(m) = &self.matrix {
            OperatorSource::from_matrix_json(&read_arg(m)?)
        } else if let Some(s) = &self.symbol {
            OperatorSource::from_symbol_json(&read_arg(s)?)
        } else if let Some(e) = &self.ensemble {
            commands::parse_ensemble_ref(e, seed)
        } else {
            Err(AuditError::Config("one of --matrix, --symbol or --ensemble is required".into()))
        }
    }
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    model: String,
    #[command(flatten)]
    operator: OperatorArgs,
    /// `RADIALxANGULAR`, defaults to the config grid.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct ToeplitzArgs {
    #[command(flatten)]
    common: Common,
    /// Toeplitz symbol as JSON {"k": [re, im]}; `@path` reads a file.
    #[arg(long)]
    symbol: String,
    /// Truncation sizes.
    #[arg(long, default_value = "16,32,64,128")]
    dims: String,
}

#[derive(Args)]
struct PowerArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    model: String,
    #[command(flatten)]
    operator: OperatorArgs,
    #[arg(long, default_value_t = 4)]
    max_power: u32,
}

#[derive(Args)]
struct TightenArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated entry ids.
    #[arg(long)]
    entries: String,
    #[arg(long)]
    model: String,
    /// Search iterations per entry.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    kinds: Option<String>,
}

fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| AuditError::io(path, e)),
        None => Ok(text.to_string()),
    }
}

fn single_model(desc: &str, cfg: &AuditConfig) -> Result<RkhsModel> {
    let mut models = desc.parse::<ModelSpec>()?.build(&[], cfg.grid.max_radius)?;
    if models.len() != 1 {
        return Err(AuditError::Config(format!("{desc:?} does not name a single model; give a size")));
    }
    Ok(models.remove(0))
}

fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    split_list(text)
        .iter()
        .map(|t| t.parse().map_err(|_| AuditError::Config(format!("bad size {t:?}"))))
        .collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
}

fn write_outputs(json: Option<&Path>, value: impl FnOnce() -> serde_json::Value, csv: Option<&Path>, write_csv: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
    if let Some(path) = json {
        formats::write_json_value(path, &value())?;
    }
    if let Some(path) = csv {
        write_csv(path)?;
    }
    Ok(())
}

fn cmd_audit(args: AuditArgs) -> Result<u8> {
    let mut cfg = args.common.load()?;
    if let Some(e) = &args.entries {
        cfg.entries = split_list(e);
    }
    let models: Vec<String> = args.model.iter().flat_map(|m| split_list(m)).collect();
    if !models.is_empty() {
        cfg.models = models;
    }
    if let Some(d) = &args.dims {
        cfg.dims = parse_sizes(d)?;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(k) = &args.kinds {
        cfg.kinds = split_list(k);
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    let report = run_audit(&cfg)?;
    if let Some(path) = &cfg.out_csv {
        formats::write_audit_csv(path, &report.rows)?;
    }
    if let Some(path) = &cfg.out_json {
        formats::write_audit_json(path, &report)?;
    }
    if !args.quiet {
        println!("{:<5} {:>7} {:>8} {:>6} {:>11} {:>10}", "id", "trials", "failures", "n/a", "min_margin", "max_ratio");
        for e in &report.entries {
            println!(
                "{:<5} {:>7} {:>8} {:>6} {:>11} {:>10}",
                e.id,
                e.trials,
                e.failures,
                e.not_applicable,
                fmt_opt(e.min_margin),
                e.max_ratio.map_or_else(|| "-".into(), |r| format!("{r:.6}"))
            );
        }
    }
    println!("{} rows, {} failures, {} ms", report.rows.len(), report.failures(), report.duration_ms);
    Ok(report.exit_code())
}

fn cmd_profile(args: ProfileArgs) -> Result<u8> {
    let cfg = args.common.load()?;
    let model = single_model(&args.model, &cfg)?;
    let (radial, angular) = match &args.grid {
        Some(g) => {
            let parts = g.split(['x', 'X', ',']).map(|t| t.trim().parse::<u32>()).collect::<Vec<_>>();
            match parts.as_slice() {
                [Ok(r), Ok(a)] if *r > 0 && *a > 0 => (*r, *a),
                _ => return Err(AuditError::Config(format!("bad grid {g:?}, expected RADIALxANGULAR"))),
            }
        }
        None => (cfg.grid.radial, cfg.grid.angular),
    };
    let source = args.operator.source(cfg.seed)?;
    let run = commands::profile(&model, &source, radial, angular, cfg.refine_steps)?;
    let descriptor = ModelDescriptor::from(&model);
    write_outputs(
        cfg.out_json.as_deref(),
        || {
            json!({
                "model": descriptor,
                "operator": formats::matrix_to_json(&run.matrix),
                "samples": run.profile.samples.len(),
                "ber_estimate": run.profile.ber_estimate,
                "refinement": run.profile.refinement_depth,
            })
        },
        cfg.out_csv.as_deref(),
        |p| formats::write_profile_csv(p, &model, &run.profile),
    )?;
    println!("{}", serde_json::to_string(&descriptor).expect("descriptor serializes"));
    println!("samples {} ber {:.12} refinement {}", run.profile.samples.len(), run.profile.ber_estimate, run.profile.refinement_depth);
    Ok(exit::OK)
}

fn cmd_toeplitz(args: ToeplitzArgs) -> Result<u8> {
    let cfg = args.common.load()?;
    let ResolvedConfig { plan, .. } = cfg.resolve()?;
    let symbol = formats::parse_symbol(&read_arg(&args.symbol)?)?;
    let sizes = parse_sizes(&args.dims)?;
    let rows = commands::toeplitz_study(&symbol, &sizes, cfg.grid.max_radius, &plan)?;
    let records: Vec<Vec<String>> = rows.iter().map(|r| r.record()).collect();
    write_outputs(
        cfg.out_json.as_deref(),
        || {
            json!({
                "symbol": formats::symbol_to_json(&symbol),
                "ber_nondecreasing": commands::ber_nondecreasing(&rows),
                "checks": rows.iter().map(|r| formats::check_result_json(&r.check)).collect::<Vec<_>>(),
            })
        },
        cfg.out_csv.as_deref(),
        |p| formats::write_table(p, &commands::TOEPLITZ_HEADER, &records),
    )?;
    println!("{}", commands::TOEPLITZ_HEADER.join(" "));
    for r in &records {
        println!("{}", r.join(" "));
    }
    println!("ber nondecreasing in n: {}", commands::ber_nondecreasing(&rows));
    let failed = rows.iter().any(|r| r.check.outcome == Outcome::Fail);
    Ok(if failed { exit::FAILURES } else { exit::OK })
}

fn cmd_power(args: PowerArgs) -> Result<u8> {
    let cfg = args.common.load()?;
    let ResolvedConfig { plan, .. } = cfg.resolve()?;
    let model = single_model(&args.model, &cfg)?;
    let source = args.operator.source(cfg.seed)?;
    let run = commands::power(&model, &source, args.max_power, &plan)?;
    write_outputs(
        cfg.out_json.as_deref(),
        || {
            json!({
                "model": ModelDescriptor::from(&model),
                "defect": run.defect.as_ref().map(|d| json!({
                    "radii": d.radii, "values": d.values, "trend": commands::trend_name(d.trend()),
                })),
                "checks": run.checks.iter().map(formats::check_result_json).collect::<Vec<_>>(),
            })
        },
        cfg.out_csv.as_deref(),
        |p| formats::write_checks_csv(p, &run.checks),
    )?;
    if let Some(d) = &run.defect {
        println!("defect outermost {:.6e} trend {}", d.outermost(), commands::trend_name(d.trend()));
    }
    for c in &run.checks {
        let n = c.diagnostics.iter().find(|(k, _)| k == "n").map_or(0.0, |(_, v)| *v);
        println!("{} n={} lhs {:.9} rhs {:.9} {}", c.id, n, c.lhs, c.rhs, c.outcome);
    }
    Ok(if run.failures() == 0 { exit::OK } else { exit::FAILURES })
}

fn cmd_tighten(args: TightenArgs) -> Result<u8> {
    let mut cfg = args.common.load()?;
    if let Some(k) = &args.kinds {
        cfg.kinds = split_list(k);
    }
    cfg.entries = split_list(&args.entries);
    let resolved = cfg.resolve()?;
    let model = single_model(&args.model, &cfg)?;
    let mut results = Vec::new();
    for id in &resolved.entries {
        let found = commands::tighten(id, &model, &resolved.kinds, args.trials, cfg.seed, &resolved.plan)?;
        println!(
            "{} {} ratio {:.9} outcome {} kind {} evaluations {}",
            id,
            model.name(),
            found.best.ratio,
            found.best.outcome,
            found.kind.as_str(),
            found.evaluations
        );
        for d in found.witness.describe() {
            println!("  {d}");
        }
        results.push(found);
    }
    let checks: Vec<_> = results.iter().map(|r| r.best.clone()).collect();
    write_outputs(
        cfg.out_json.as_deref(),
        || {
            serde_json::Value::Array(
                results
                    .iter()
                    .map(|r| {
                        let mut v = formats::check_result_json(&r.best);
                        v["kind"] = json!(r.kind.as_str());
                        v["evaluations"] = json!(r.evaluations);
                        v
                    })
                    .collect(),
            )
        },
        cfg.out_csv.as_deref(),
        |p| formats::write_checks_csv(p, &checks),
    )?;
    let failed = checks.iter().any(|c| c.outcome == Outcome::Fail);
    Ok(if failed { exit::FAILURES } else { exit::OK })
}

fn cmd_list() -> Result<u8> {
    for e in list_catalog() {
        println!("{:<4} {:<14} {}", e.id, e.kind.as_str(), e.statement);
    }
    Ok(exit::OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Audit(a) => cmd_audit(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Toeplitz(a) => cmd_toeplitz(a),
        Command::Power(a) => cmd_power(a),
        Command::Tighten(a) => cmd_tighten(a),
        Command::List => cmd_list(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::ERROR)
        }
    }
}
