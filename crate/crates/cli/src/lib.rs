//! The `hyperspec` command-line tool.

pub mod json;
pub mod report;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperspec::{AlphaOptions, EigenError, Hypergraph, HypergraphError, PowerOptions, TensorKind};
use thiserror::Error;

use report::{OptionsEcho, SpectralReport};

#[derive(Debug, Parser)]
#[command(name = "hyperspec", version, about = "Spectral analysis of k-uniform hypergraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print k, n, m, degree statistics and the number of components.
    Info(CommonArgs),
    /// Spectral radii, structural eigenpairs and degree bounds.
    Spectral(CommonArgs),
    /// Analytic connectivity with its certificate.
    Alpha(CommonArgs),
    /// Check and classify a candidate eigenpair.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Comma-separated entries of x.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Full JSON report: spectra, connectivity, cuts and every bound check.
    Report(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Input file in .khg format.
    pub file: PathBuf,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 32)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, ignore_case = true, default_value = "all")]
    pub kind: KindArg,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "A")]
    A,
    #[value(name = "L")]
    L,
    #[value(name = "Q")]
    Q,
    #[value(name = "all")]
    All,
}

impl KindArg {
    fn name(self) -> &'static str {
        match self {
            KindArg::A => "A",
            KindArg::L => "L",
            KindArg::Q => "Q",
            KindArg::All => "all",
        }
    }

    fn single(self) -> Option<TensorKind> {
        match self {
            KindArg::A => Some(TensorKind::Adjacency),
            KindArg::L => Some(TensorKind::Laplacian),
            KindArg::Q => Some(TensorKind::SignlessLaplacian),
            KindArg::All => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: HypergraphError,
    },
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    BoundFailed = 1,
    InputError = 2,
    NotConverged = 3,
}

impl Status {
    fn of(report: &SpectralReport) -> Self {
        if !report.converged {
            Status::NotConverged
        } else if !report.all_pass {
            Status::BoundFailed
        } else {
            Status::Ok
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub status: Status,
    pub out: Option<PathBuf>,
}

fn load(path: &PathBuf) -> Result<Hypergraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    Hypergraph::parse(&text).map_err(|source| CliError::Parse {
        path: path.clone(),
        source,
    })
}

fn echo(a: &CommonArgs) -> OptionsEcho {
    OptionsEcho {
        tol: a.tol,
        max_iter: a.max_iter,
        starts: a.starts,
        seed: a.seed,
        kind: a.kind.name().to_string(),
    }
}

fn power_options(a: &CommonArgs) -> Result<PowerOptions, CliError> {
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    Ok(PowerOptions {
        tol: a.tol,
        max_iter: a.max_iter,
        ..PowerOptions::default()
    })
}

fn alpha_options(a: &CommonArgs) -> AlphaOptions {
    AlphaOptions {
        starts: a.starts,
        seed: a.seed,
        ..AlphaOptions::default()
    }
}

fn spectral_kinds(kind: KindArg) -> Vec<TensorKind> {
    kind.single().map_or_else(|| TensorKind::ALL.to_vec(), |k| vec![k])
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Info(a) => {
            let h = load(&a.file)?;
            let r = SpectralReport::new("info", echo(a), &h);
            let text = if a.json {
                json::to_string(&r)
            } else {
                format!("{}\n", r.graph.line())
            };
            Ok(finish(text, Status::Ok, a))
        }
        Command::Spectral(a) => {
            let h = load(&a.file)?;
            let opts = power_options(a)?;
            let mut r = SpectralReport::new("spectral", echo(a), &h);
            r.add_spectra(&h, &spectral_kinds(a.kind), &opts)?;
            let text = if a.json { json::to_string(&r) } else { spectral_text(&r) };
            Ok(finish(text, Status::of(&r), a))
        }
        Command::Alpha(a) => {
            let h = load(&a.file)?;
            let mut r = SpectralReport::new("alpha", echo(a), &h);
            r.add_alpha(&h, &alpha_options(a), false);
            let text = if a.json { json::to_string(&r) } else { alpha_text(&r) };
            Ok(finish(text, Status::of(&r), a))
        }
        Command::Verify { common: a, lambda, x } => {
            let h = load(&a.file)?;
            let kind = a
                .kind
                .single()
                .ok_or_else(|| CliError::Usage("verify needs --kind A, L or Q".into()))?;
            let x = parse_vector(x)?;
            let pair = hyperspec::verify_eigenpair(kind, &h, *lambda, &x, a.tol)?;
            let line = if pair.classification.is_eigenpair() {
                format!("{}, residual {:.1e}\n", pair.classification.describe(), pair.residual)
            } else {
                format!("{} (residual {:.1e})\n", pair.classification.describe(), pair.residual)
            };
            let mut r = SpectralReport::new("verify", echo(a), &h);
            r.verification = Some(pair);
            let text = if a.json { json::to_string(&r) } else { line };
            Ok(finish(text, Status::Ok, a))
        }
        Command::Report(a) => {
            let h = load(&a.file)?;
            let opts = power_options(a)?;
            let mut r = SpectralReport::new("report", echo(a), &h);
            r.add_spectra(&h, &spectral_kinds(a.kind), &opts)?;
            r.add_alpha(&h, &alpha_options(a), true);
            r.add_q_definiteness(&h);
            Ok(finish(json::to_string(&r), Status::of(&r), a))
        }
    }
}

fn finish(text: String, status: Status, a: &CommonArgs) -> Outcome {
    Outcome {
        text,
        status,
        out: a.out.clone(),
    }
}

fn parse_vector(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--x: '{}' is not a number", t.trim())))
        })
        .collect()
}

fn spectral_text(r: &SpectralReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", r.graph.line());
    for spec in &r.spectra {
        let sym = spec.kind.symbol();
        if let Some(rad) = &spec.radius {
            let _ = writeln!(
                s,
                "rho({sym}) = {:.16e}  bracket [{:.16e}, {:.16e}]  {}",
                rad.rho,
                rad.lower,
                rad.upper,
                if rad.converged { "converged" } else { "NOT converged" }
            );
        }
        for p in &spec.structural {
            let _ = writeln!(
                s,
                "  {sym} λ = {:<22} residual {:.1e}  {}  {:?}",
                format!("{:.16e}", p.pair.lambda),
                p.pair.residual,
                p.pair.classification.describe(),
                p.origin
            );
        }
        if let Some(note) = &spec.note {
            let _ = writeln!(s, "  {sym}: {note}");
        }
    }
    checks_text(&mut s, r);
    s
}

fn alpha_text(r: &SpectralReport) -> String {
    let mut s = String::new();
    let a = r.alpha.as_ref().expect("alpha section present");
    let c = &a.certificate;
    let _ = writeln!(
        s,
        "alpha = {:.16e}  pinned j={}  kkt residual {:.1e}  {}",
        c.alpha,
        c.pinned_vertex + 1,
        c.kkt_residual,
        if c.converged { "converged" } else { "NOT converged" }
    );
    let x: Vec<String> = c.minimizer.iter().map(|v| format!("{v:.10}")).collect();
    let _ = writeln!(s, "minimizer x = ({})", x.join(", "));
    if let Some(note) = &a.note {
        let _ = writeln!(s, "note: {note}");
    }
    checks_text(&mut s, r);
    s
}

fn checks_text(s: &mut String, r: &SpectralReport) {
    for c in &r.checks {
        let _ = write!(
            s,
            "{} {}: {:.6e} <= {:.6e} (tol {:.1e})",
            if c.holds { "PASS" } else { "FAIL" },
            c.id,
            c.lhs,
            c.rhs,
            c.tolerance
        );
        if let Some(note) = &c.note {
            let _ = write!(s, " [{note}]");
        }
        s.push('\n');
    }
}
