//! `qgft` — experiment driver for Lᵖ Fourier analysis on compact quantum
//! groups. Subcommands run one named experiment each against a configured
//! backend, write `<out>/<subcommand>.csv` plus `<out>/summary.json`, and
//! exit 0 exactly when every tolerance holds.

mod config;
mod experiments;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{parse_list_f64, parse_n_range, Config};
use experiments::Outcome;

/// Shared flag overrides; any flag set here wins over the config file.
#[derive(Debug, Args)]
struct Overrides {
    /// Declarative JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Backend: suq2, cyclic or s3.
    #[arg(long)]
    backend: Option<String>,
    /// Order N of the cyclic group backend.
    #[arg(long)]
    cyclic_order: Option<usize>,
    /// Deformation parameter q in (0,1).
    #[arg(long)]
    q: Option<f64>,
    /// SU_q(2) cutoff N in the ℓ²(ℕ) direction.
    #[arg(long = "trunc-n")]
    trunc_n: Option<usize>,
    /// Largest corepresentation level L (half-integer).
    #[arg(long = "tower-l")]
    tower_l: Option<f64>,
    /// Comma list of complex interpolation parameters, e.g. "-0.5+0i,0+0i".
    #[arg(long)]
    z: Option<String>,
    /// Comma list of exponents, e.g. "1,1.3333333333333333,1.5,2".
    #[arg(long)]
    p: Option<String>,
    /// Power range for the z-sweep: "1..5" or "1,2,3".
    #[arg(long)]
    n: Option<String>,
    /// RNG seed; identical seeds give byte-identical CSV bodies.
    #[arg(long)]
    seed: Option<u64>,
    /// Random samples per check.
    #[arg(long)]
    samples: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Circle quadrature nodes for the SU_q(2) Lᵖ norms.
    #[arg(long)]
    quadrature_points: Option<usize>,
}

#[derive(Debug, Parser)]
#[command(
    name = "qgft",
    about = "Lp-Fourier experiments on compact quantum groups",
    after_help = "Environment: QGFT_THREADS caps the rayon worker count.\n\
        Every CSV row carries the full parameter tuple\n\
        (backend,q,trunc_n,tower_l,seed,...); the first line is a timestamp\n\
        comment, the rest is deterministic for a fixed config and seed."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Schur orthogonality residuals and Q j-independence.
    ///
    /// CSV columns: backend,q,trunc_n,tower_l,seed,check,l,i,j,l2,i2,j2,residual
    Orthogonality(Overrides),
    /// Plancherel norm preservation and the F2 round trip.
    ///
    /// CSV columns: backend,q,trunc_n,tower_l,seed,metric,sample,value
    Plancherel(Overrides),
    /// Hausdorff-Young margins dual_norm <= primal_norm over p and samples.
    ///
    /// CSV columns: backend,q,trunc_n,tower_l,seed,p,sample,metric,value
    HausdorffYoung(Overrides),
    /// Convolution theorem, module actions, exhaustive group brute force.
    ///
    /// CSV columns: backend,q,trunc_n,tower_l,seed,metric,sample,value
    ConvolutionCheck(Overrides),
    /// Boundedness z-sweep on the alpha-power families.
    ///
    /// CSV columns: backend,q,trunc_n,tower_l,seed,z_re,z_im,family,metric,n,value
    Zsweep(Overrides),
    /// Izumi transport isometry between interpolation parameters.
    ///
    /// CSV columns: backend,q,trunc_n,tower_l,seed,sample,from_z_re,from_z_im,to_z_re,to_z_im,p,metric,value
    TransportCheck(Overrides),
    /// Group-backend brute-force suite (DFT, convolution, Plancherel).
    ///
    /// CSV columns: backend,q,trunc_n,tower_l,seed,metric,case,value
    Oracle(Overrides),
}

impl Command {
    fn overrides(&self) -> &Overrides {
        match self {
            Command::Orthogonality(o)
            | Command::Plancherel(o)
            | Command::HausdorffYoung(o)
            | Command::ConvolutionCheck(o)
            | Command::Zsweep(o)
            | Command::TransportCheck(o)
            | Command::Oracle(o) => o,
        }
    }
}

fn apply_overrides(mut cfg: Config, o: &Overrides) -> anyhow::Result<Config> {
    if let Some(v) = &o.backend {
        cfg.backend = v.clone();
    }
    if let Some(v) = o.cyclic_order {
        cfg.cyclic_order = v;
    }
    if let Some(v) = o.q {
        cfg.q = v;
    }
    if let Some(v) = o.trunc_n {
        cfg.trunc_n = v;
    }
    if let Some(v) = o.tower_l {
        cfg.tower_l = v;
    }
    if let Some(v) = &o.z {
        cfg.z_grid = v.split(',').map(|s| s.trim().to_string()).collect();
    }
    if let Some(v) = &o.p {
        cfg.p_grid = parse_list_f64(v)?;
    }
    if let Some(v) = &o.n {
        cfg.n_range = parse_n_range(v)?;
    }
    if let Some(v) = o.seed {
        cfg.seed = v;
    }
    if let Some(v) = o.samples {
        cfg.samples = v;
    }
    if let Some(v) = &o.out {
        cfg.out_dir = v.display().to_string();
    }
    if let Some(v) = o.quadrature_points {
        cfg.quadrature_points = v;
    }
    Ok(cfg)
}

fn init_threads() {
    if let Ok(v) = std::env::var("QGFT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cmd: &Command) -> anyhow::Result<Outcome> {
    let o = cmd.overrides();
    let cfg = apply_overrides(Config::load(o.config.as_ref())?, o)?;
    cfg.validate()?;
    let started = Instant::now();
    let outcome = match cmd {
        Command::Orthogonality(_) => experiments::orthogonality(&cfg)?,
        Command::Plancherel(_) => experiments::plancherel(&cfg)?,
        Command::HausdorffYoung(_) => experiments::hausdorff_young(&cfg)?,
        Command::ConvolutionCheck(_) => experiments::convolution_check(&cfg)?,
        Command::Zsweep(_) => experiments::zsweep(&cfg)?,
        Command::TransportCheck(_) => experiments::transport_check(&cfg)?,
        Command::Oracle(_) => experiments::oracle(&cfg)?,
    };
    let runtime_ms = started.elapsed().as_millis();
    let (csv_path, summary_path) = report::write_outputs(&cfg, &outcome, runtime_ms)?;
    println!(
        "{}: {} in {} ms -> {}, {}",
        outcome.experiment,
        if outcome.pass { "PASS" } else { "FAIL" },
        runtime_ms,
        csv_path.display(),
        summary_path.display()
    );
    for (k, v) in &outcome.metrics {
        println!("  {k} = {v}");
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) if outcome.pass => ExitCode::SUCCESS,
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("FAILED invariant: {f}");
            }
            ExitCode::FAILURE
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
