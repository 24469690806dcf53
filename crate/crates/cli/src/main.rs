//! `qsync` command-line interface.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 config error, 3 numerical
//! failure (any cell), 4 convergence quality gate failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qsync::sweep::config::OutputFormat;
use qsync::sweep::{
    emit, emit_wigner_csv, evaluate_measure, parse_config, run_sweep, wigner_command, SweepConfig, CONVERGENCE_TOL,
};

#[derive(Parser)]
#[command(name = "qsync", version, about = "Distance-based synchronization measures for open quantum systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the model's steady state and print the density matrix.
    SteadyState(Common),
    /// Evaluate the configured measures at the model's steady state.
    Measure(Common),
    /// Run the configured two-axis parameter sweep.
    Sweep(SweepArgs),
    /// Wigner function of an oscillator steady state.
    Wigner(Common),
    /// Check a config file and report every violation.
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file; defaults to `output.path`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Base seed for oracle sampling.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    no_convergence_check: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Io(String),
    Config(Vec<String>),
    Numerical(String),
    Gate(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Gate(_) => 4,
        }
    }
}

fn load(common: &Common) -> Result<SweepConfig, Failure> {
    let text = fs::read(&common.config)
        .map_err(|e| Failure::Config(vec![format!("cannot read {}: {e}", common.config.display())]))?;
    let mut cfg = parse_config(&text).map_err(|errs| Failure::Config(errs.iter().map(|e| e.to_string()).collect()))?;
    if let Some(out) = &common.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(f) = common.format {
        cfg.output.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    if let Some(seed) = common.seed {
        cfg.runtime.seed = seed;
    }
    Ok(cfg)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn numerical(e: qsync::Error) -> Failure {
    Failure::Numerical(e.to_string())
}

fn steady_state(common: &Common) -> Result<(), Failure> {
    let cfg = load(common)?;
    let ss = cfg.model.steady_state().map_err(numerical)?;
    let m = ss.rho.matrix();
    let d = m.rows();
    let text = match cfg.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("row,col,re,im\n");
            for i in 0..d {
                for j in 0..d {
                    let z = m[(i, j)];
                    s.push_str(&format!("{i},{j},{},{}\n", z.re, z.im));
                }
            }
            s
        }
        OutputFormat::Json => {
            let part = |f: fn(&qsync::linalg::C64) -> f64| -> Vec<Vec<f64>> {
                (0..d).map(|i| m.row(i).iter().map(f).collect()).collect()
            };
            let doc = json!({
                "model": cfg.model.kind(),
                "dims": ss.rho.dims(),
                "residual": ss.residual,
                "re": part(|z| z.re),
                "im": part(|z| z.im),
            });
            serde_json::to_string_pretty(&doc).expect("numbers serialize") + "\n"
        }
    };
    write_output(cfg.output.path.as_deref(), text.as_bytes())
}

fn measure(common: &Common) -> Result<(), Failure> {
    let cfg = load(common)?;
    if cfg.measures.is_empty() {
        return Err(Failure::Config(vec!["measures: no measures requested".into()]));
    }
    let ss = cfg.model.steady_state().map_err(numerical)?;
    let mut rows = Vec::new();
    for spec in &cfg.measures {
        let value = evaluate_measure(&ss.rho, &cfg.model, spec, cfg.runtime.seed).map_err(numerical)?;
        rows.push((spec.column(), value));
    }
    let text = match cfg.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("measure,value\n");
            for (name, value) in &rows {
                s.push_str(&format!("{name},{value}\n"));
            }
            s.push_str(&format!("residual,{}\n", ss.residual));
            s
        }
        OutputFormat::Json => {
            let values: serde_json::Map<String, Value> = rows.iter().map(|(n, v)| (n.clone(), json!(v))).collect();
            let doc = json!({ "model": cfg.model.kind(), "values": values, "residual": ss.residual });
            serde_json::to_string_pretty(&doc).expect("numbers serialize") + "\n"
        }
    };
    write_output(cfg.output.path.as_deref(), text.as_bytes())
}

fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let mut cfg = load(&args.common)?;
    if cfg.axes.is_none() {
        return Err(Failure::Config(vec!["sweep: missing required section".into()]));
    }
    if cfg.measures.is_empty() {
        return Err(Failure::Config(vec!["measures: a sweep needs at least one measure".into()]));
    }
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(Failure::Config(vec!["--workers: must be >= 1".into()]));
        }
        cfg.runtime.workers = w;
    }
    if args.no_convergence_check {
        cfg.runtime.convergence_check = false;
    }
    let grid = run_sweep(&cfg).map_err(numerical)?;
    write_output(cfg.output.path.as_deref(), &emit(&grid, cfg.output.format))?;

    let failures: Vec<String> = grid
        .failures()
        .map(|c| format!("cell ({}, {}): {}", c.axis1, c.axis2, c.error.as_deref().unwrap_or("")))
        .collect();
    if !failures.is_empty() {
        return Err(Failure::Numerical(format!("{} cell(s) failed\n{}", failures.len(), failures.join("\n"))));
    }
    if !grid.passes_convergence_gate() {
        let worst = grid.max_truncation_delta().unwrap_or(f64::NAN);
        return Err(Failure::Gate(format!(
            "truncation check failed: max |measure(N) - measure(N+4)| = {worst:e} > {CONVERGENCE_TOL:e}"
        )));
    }
    Ok(())
}

fn wigner(common: &Common) -> Result<(), Failure> {
    let cfg = load(common)?;
    let Some(spec) = &cfg.wigner else {
        return Err(Failure::Config(vec!["wigner: missing required section".into()]));
    };
    let out = wigner_command(&cfg.model, spec).map_err(numerical)?;
    if out.grid.truncation_warning {
        eprintln!("warning: Fock truncation may distort the Wigner function on this grid");
    }
    write_output(cfg.output.path.as_deref(), emit_wigner_csv(&out).as_bytes())
}

fn validate(path: &Path) -> Result<(), Failure> {
    let text = fs::read(path).map_err(|e| Failure::Config(vec![format!("cannot read {}: {e}", path.display())]))?;
    parse_config(&text).map_err(|errs| Failure::Config(errs.iter().map(|e| e.to_string()).collect()))?;
    println!("ok");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SteadyState(c) => steady_state(c),
        Command::Measure(c) => measure(c),
        Command::Sweep(a) => sweep(a),
        Command::Wigner(c) => wigner(c),
        Command::ValidateConfig { config } => validate(config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Config(errors) => {
                    eprintln!("config error:");
                    for e in errors {
                        eprintln!("  {e}");
                    }
                }
                Failure::Io(msg) | Failure::Numerical(msg) | Failure::Gate(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
