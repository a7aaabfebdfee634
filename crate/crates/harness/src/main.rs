use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hartree_harness::config::{ExperimentKind, RunConfig};
use hartree_harness::experiments::{run_experiment, Outcome};

#[derive(Parser)]
#[command(name = "hartree", version, about = "Semiclassical Hartree experiments in a harmonic trap")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweep points.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Reserved; every computation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// One epsilon: evolve and compare against the requested comparators.
    Run(Common),
    /// Epsilon ladder with rate fits.
    Sweep(Common),
    /// Scattering operator of the configured datum.
    Scatter(Common),
    /// Wigner concentration near the Lagrangian line.
    Wigner(Common),
    /// Regime of the configured exponents.
    Classify(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Run(a) => (ExperimentKind::Single, a),
        Command::Sweep(a) => (ExperimentKind::Sweep, a),
        Command::Scatter(a) => (ExperimentKind::Scatter, a),
        Command::Wigner(a) => (ExperimentKind::Wigner, a),
        Command::Classify(a) => (ExperimentKind::Classify, a),
    };
    match run(kind, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(kind: ExperimentKind, args: &Common) -> anyhow::Result<()> {
    let _ = args.seed;
    let cfg = RunConfig::load(&args.config, Some(kind))?;
    let outcome = run_experiment(&cfg, &args.out, args.threads.max(1))?;
    match outcome {
        Outcome::Classify(label) => println!("{label}"),
        Outcome::Sweep(r) => {
            for (eps, why) in &r.failures {
                eprintln!("epsilon {eps}: failed: {why}");
            }
            for s in r.slopes.iter().filter(|s| s.reported) {
                let t = s.time.map_or("sup".to_string(), |t| format!("{t:.6}"));
                println!("{} t={t} {}: slope {:.4} (residual {:.3})", s.comparator.name(), s.measure, s.slope, s.residual);
            }
            for m in &r.maslov {
                println!("maslov eps={} t={:.6}: phase {:.6}, expected {:.6}", m.epsilon, m.time, m.phase, m.expected);
            }
            println!("wrote {}", args.out.display());
        }
        Outcome::Scatter(s) => {
            println!(
                "certificate {:.3e}, horizon {}, converged {}",
                s.result.certificate, s.result.horizon_used, s.result.converged
            );
            if let Some(p) = s.born_exponent {
                println!("small-data exponent {p:.4}");
            }
            println!("wrote {}", args.out.display());
        }
        Outcome::Wigner(rows) => {
            for r in &rows {
                println!("eps={} fraction {:.6} {}", r.epsilon, r.fraction, r.status);
            }
            println!("wrote {}", args.out.display());
        }
    }
    Ok(())
}
