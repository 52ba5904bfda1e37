//! Command-line front end: `verify`, `duflo`, `list`, `refine`.
//!
//! Exit codes: 0 when every check passes, 1 when a check or the estimator fails,
//! 2 on configuration errors (unknown scenario, unreadable file, bad flags).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::duflo::{check_semi_invariance, estimate_duflo, DufloSummary};
use crate::error::{Error, Result};
use crate::random;
use crate::scenarios::{all_builtins, builtin, load_scenario, Instance, ScenarioSpec};
use crate::suite::{refine, run_suite, SuiteResult, SEMI_INVARIANCE_TOL};
use crate::wavelet::RefinementRow;

#[derive(Debug, Parser)]
#[command(name = "qha", version, about = "Duflo–Moore operators and bracket inequalities for finite-dimensional ergodic actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full check suite.
    Verify(RunArgs),
    /// Estimate the Duflo–Moore operator and print its spectrum.
    Duflo(RunArgs),
    /// List builtin scenario ids.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a quadrature scenario at successive grid refinements.
    Refine(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Builtin id (e.g. `wh:4`) or path to a scenario TOML file; repeatable.
    #[arg(long, short)]
    pub scenario: Vec<String>,
    /// Every builtin scenario.
    #[arg(long)]
    pub all: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "QHA_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub tol_abs: Option<f64>,
    /// Number of grid levels for `refine`.
    #[arg(long, default_value_t = 3)]
    pub grids: u32,
}

impl RunArgs {
    /// Resolves scenario sources and applies overrides.
    pub fn scenarios(&self) -> Result<Vec<ScenarioSpec>> {
        let mut specs = if self.all { all_builtins() } else { Vec::new() };
        for s in &self.scenario {
            let path = PathBuf::from(s);
            let spec = if s.ends_with(".toml") || path.exists() { load_scenario(&path)? } else { builtin(s)? };
            specs.push(spec);
        }
        if specs.is_empty() {
            return Err(Error::Config("no scenario given; use --scenario <id|file> or --all".into()));
        }
        for spec in &mut specs {
            if let Some(seed) = self.seed {
                spec.seed = seed;
            }
            if let Some(t) = self.tol_rel {
                spec.tolerances.rel = t;
            }
            if let Some(t) = self.tol_abs {
                spec.tolerances.abs = t;
            }
            spec.validate()?;
        }
        Ok(specs)
    }
}

pub fn main_with(cli: Cli) -> ExitCode {
    let code = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Duflo(a) => cmd_duflo(a),
        Command::List { format } => cmd_list(*format),
        Command::Refine(a) => cmd_refine(a),
    };
    ExitCode::from(code)
}

fn config_error(e: &Error) -> u8 {
    eprintln!("error: {e}");
    2
}

fn emit(args_out: Option<&PathBuf>, text: &str) -> std::result::Result<(), u8> {
    let res = match args_out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    res.map_err(|e| {
        eprintln!("error: cannot write report: {e}");
        2
    })
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs the suites and returns the rendered output with the exit code.
pub fn verify(args: &RunArgs) -> std::result::Result<(String, u8), Error> {
    let specs = args.scenarios()?;
    let results = run_many(&specs)?;
    let all_pass = results.iter().all(SuiteResult::passed);
    let text = match args.format {
        Format::Json => to_json(&results),
        Format::Text => results.iter().map(render_suite).collect(),
    };
    Ok((text, if all_pass { 0 } else { 1 }))
}

/// Runs scenarios on worker threads; results keep the input order.
pub fn run_many(specs: &[ScenarioSpec]) -> Result<Vec<SuiteResult>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = specs.iter().map(|spec| s.spawn(move || run_suite(spec))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

fn cmd_verify(args: &RunArgs) -> u8 {
    match verify(args) {
        Ok((text, code)) => emit(args.out.as_ref(), &text).err().unwrap_or(code),
        Err(e) => config_error(&e),
    }
}

pub fn render_suite(r: &SuiteResult) -> String {
    let mut s = format!("== {} ==\n", r.scenario);
    for rep in &r.reports {
        s.push_str(&format!("{rep}\n"));
    }
    let failed = r.failures().count();
    s.push_str(&format!("{} checks, {} failed\n\n", r.reports.len(), failed));
    s
}

#[derive(Debug, Serialize)]
struct DufloOutput {
    scenario: String,
    #[serde(flatten)]
    summary: DufloSummary,
    semi_invariance_defect: f64,
}

fn duflo_outputs(args: &RunArgs) -> std::result::Result<Vec<std::result::Result<DufloOutput, Error>>, Error> {
    let specs = args.scenarios()?;
    let mut out = Vec::new();
    for spec in &specs {
        let inst = spec.build()?;
        let Instance::Finite(f) = inst else {
            return Err(Error::Config(format!("{} is a quadrature scenario; use `verify` or `refine`", spec.id)));
        };
        let mut rng = random::rng(spec.seed);
        let a = random::random_density(&mut rng, f.action.shape());
        let b = random::random_density(&mut rng, f.action.shape());
        out.push(estimate_duflo(&f.action, &f.haar, &a, &b).map(|est| DufloOutput {
            scenario: spec.id.clone(),
            semi_invariance_defect: check_semi_invariance(&f.action, &est, SEMI_INVARIANCE_TOL).rel_err,
            summary: est.summary(),
        }));
    }
    Ok(out)
}

fn cmd_duflo(args: &RunArgs) -> u8 {
    let outputs = match duflo_outputs(args) {
        Ok(o) => o,
        Err(e) => return config_error(&e),
    };
    let mut code = 0;
    let mut ok = Vec::new();
    for o in outputs {
        match o {
            Ok(o) => ok.push(o),
            Err(e) => {
                eprintln!("error: {e}");
                code = 1;
            }
        }
    }
    let text = match args.format {
        Format::Json => to_json(&ok),
        Format::Text => ok.iter().map(render_duflo).collect(),
    };
    emit(args.out.as_ref(), &text).err().unwrap_or(code)
}

fn render_duflo(o: &DufloOutput) -> String {
    let s = &o.summary;
    let mut out = format!("== {} ==\n", o.scenario);
    for (k, spec) in s.block_spectra.iter().enumerate() {
        let vals: Vec<String> = spec.iter().map(|v| format!("{v:.12}")).collect();
        out.push_str(&format!("block {k}: [{}]\n", vals.join(", ")));
    }
    match (s.scalar, s.scalar_inverse) {
        (Some(d), Some(c)) => out.push_str(&format!("scalar: yes  D = {d:.12}  D^-1 = {c:.12}\n")),
        _ => out.push_str(&format!("scalar: no  off-scalar residual = {:.3e}\n", s.off_scalar_residual)),
    }
    out.push_str(&format!(
        "cross-check residual = {:.3e}\nsemi-invariance defect = {:.3e}\n\n",
        s.cross_check_residual, o.semi_invariance_defect
    ));
    out
}

fn cmd_list(format: Format) -> u8 {
    let specs = all_builtins();
    let text = match format {
        Format::Json => to_json(&specs.iter().map(|s| &s.id).collect::<Vec<_>>()),
        Format::Text => specs.iter().map(|s| format!("{}\n", s.id)).collect(),
    };
    emit(None, &text).err().unwrap_or(0)
}

#[derive(Debug, Serialize)]
struct RefineOutput {
    scenario: String,
    rows: Vec<RefinementRow>,
    monotone_orthogonality: bool,
    monotone_semi_invariance: bool,
    all_pass: bool,
}

fn strictly_decreasing(v: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = v.collect();
    v.windows(2).all(|w| w[1] < w[0])
}

pub fn refine_table(args: &RunArgs) -> std::result::Result<(String, u8), Error> {
    if args.grids < 3 {
        return Err(Error::Config(format!("refine needs --grids >= 3, got {}", args.grids)));
    }
    let specs = args.scenarios()?;
    let mut outs = Vec::new();
    for spec in &specs {
        let levels = refine(spec, args.grids)?;
        let all_pass = levels.iter().all(|(r, _)| r.iter().all(|c| c.pass));
        let rows: Vec<RefinementRow> = levels.into_iter().map(|(_, row)| row).collect();
        outs.push(RefineOutput {
            scenario: spec.id.clone(),
            monotone_orthogonality: strictly_decreasing(rows.iter().map(|r| r.orthogonality_residual)),
            monotone_semi_invariance: strictly_decreasing(rows.iter().map(|r| r.semi_invariance_residual)),
            all_pass,
            rows,
        });
    }
    let ok = outs.iter().all(|o| o.monotone_orthogonality && o.monotone_semi_invariance && o.all_pass);
    let text = match args.format {
        Format::Json => to_json(&outs),
        Format::Text => outs.iter().map(render_refine).collect(),
    };
    Ok((text, if ok { 0 } else { 1 }))
}

fn render_refine(o: &RefineOutput) -> String {
    let mut s = format!(
        "== {} ==\nlevel\tnodes\tgrid\torthogonality\tsemi_invariance\tduflo\tcross_check\n",
        o.scenario
    );
    for r in &o.rows {
        s.push_str(&format!(
            "{}\t{}\t{}\t{:.3e}\t{:.3e}\t{:.3e}\t{:.3e}\n",
            r.level, r.nodes, r.grid_points, r.orthogonality_residual, r.semi_invariance_residual, r.duflo_residual, r.cross_check_residual
        ));
    }
    s.push_str(&format!(
        "monotone orthogonality: {}\nmonotone semi-invariance: {}\nall checks pass: {}\n\n",
        o.monotone_orthogonality, o.monotone_semi_invariance, o.all_pass
    ));
    s
}

fn cmd_refine(args: &RunArgs) -> u8 {
    match refine_table(args) {
        Ok((text, code)) => emit(args.out.as_ref(), &text).err().unwrap_or(code),
        Err(e) => config_error(&e),
    }
}
