use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chordarc::harness::{run, ExperimentConfig, ExperimentKind, Status};
use chordarc::{Error, Result};

#[derive(Parser)]
#[command(name = "chordarc", version, about = "Run a configured experiment and write its report")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Chord-arc, Ahlfors and Meyer–David constants of curves.
    Diagnose(Common),
    /// Besov energies of harmonic test functions.
    Energy(Common),
    /// Boundary Besov norms of traces.
    BoundaryNorm(Common),
    /// Energy forms, boundary norms and their ratios over a domain sweep.
    Equivalence(Common),
    /// Test-function energies and arc-length bounds at probe points.
    Characterize(Common),
    /// Ray integrals of δ^{−1−ε}.
    Tail(Common),
    /// Conformal sewing exponents and quasisymmetry constants.
    Sewing(Common),
    /// Carleson box sups and the averaged Lusin inequality.
    Carleson(Common),
}

#[derive(Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: the config's output.dir, else `.`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the config's Besov exponents.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Replace the config's derivative orders.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Replace the quadrature relative tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Replace the config's test functions (repeatable).
    #[arg(long)]
    function: Vec<String>,
}

impl Command {
    fn split(self) -> (ExperimentKind, Common) {
        match self {
            Command::Diagnose(c) => (ExperimentKind::Diagnostics, c),
            Command::Energy(c) => (ExperimentKind::Energy, c),
            Command::BoundaryNorm(c) => (ExperimentKind::BoundaryNorm, c),
            Command::Equivalence(c) => (ExperimentKind::Equivalence, c),
            Command::Characterize(c) => (ExperimentKind::Characterization, c),
            Command::Tail(c) => (ExperimentKind::Tail, c),
            Command::Sewing(c) => (ExperimentKind::Sewing, c),
            Command::Carleson(c) => (ExperimentKind::Carleson, c),
        }
    }
}

/// Reads the config, filling in or checking its `experiment` field.
fn load(path: &Path, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut value: serde_json::Value = serde_json::from_str(&text)?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Error::Config(vec!["config must be a JSON object".into()]))?;
    match obj.get("experiment").and_then(|v| v.as_str()) {
        Some(name) if name != kind.name() => {
            return Err(Error::Config(vec![format!(
                "experiment: config is for `{name}`, subcommand runs `{}`",
                kind.name()
            )]))
        }
        _ => {
            obj.insert("experiment".into(), kind.name().into());
        }
    }
    serde_json::from_value(value).map_err(|e| Error::Config(vec![format!("schema: {e}")]))
}

fn execute(kind: ExperimentKind, args: Common) -> Result<bool> {
    let mut cfg = load(&args.config, kind)?;
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(t) = args.rel_tol {
        cfg.quadrature.rel_tol = t;
    }
    if !args.function.is_empty() {
        cfg.functions = args.function;
    }
    let out = run(&cfg)?;
    let dir = args
        .out
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let written = out.emit(&dir, &cfg.output.formats)?;
    for r in &out.rows {
        for f in r.flags.iter().filter(|f| f.status != Status::Pass) {
            println!("{:<11} {} {} [{}]", f.status, r.id, f.name, r.domain);
        }
    }
    let s = out.summary();
    println!(
        "{}: {} rows, flags {} pass, {} fail, {} unsupported",
        kind.name(),
        out.rows.len(),
        s.pass,
        s.fail,
        s.unsupported
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(s.all_pass())
}

fn main() -> ExitCode {
    let (kind, args) = Cli::parse().command.split();
    match execute(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
