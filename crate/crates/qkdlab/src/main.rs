use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qkdlab::config::{ExperimentConfig, SweepSpec, CALIBRATED_VISIBILITY, CALIBRATED_ZZ};
use qkdlab::{keyrate_report, parse_config, run_sweep, write_outputs, LabError, Result};
use rfiqkd_core::qcore::NoiseParams;
use rfiqkd_core::simkit::{MenuMode, SimMode};

#[derive(Parser)]
#[command(
    name = "qkdlab",
    version,
    about = "RFI-MDI-QKD simulator and key-rate calculator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Analytic,
    Montecarlo,
}

#[derive(Clone, Copy, ValueEnum)]
enum MenuArg {
    Six,
    Four,
    Two,
    One,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    Ideal,
    /// ⟨ZZ⟩ = −0.987 and X/Y visibility 0.945
    Calibrated,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (outputs do not depend on this).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Sweep β_B over [0, 2π) at fixed β_A.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        beta_a: f64,
        #[arg(long, default_value_t = 61)]
        points: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
        mode: ModeArg,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MenuArg::Six)]
        alice_menu: MenuArg,
        #[arg(long, value_enum, default_value_t = NoiseArg::Ideal)]
        noise: NoiseArg,
        /// Symmetric per-arm depolarizing strength (overrides --noise).
        #[arg(long)]
        depol: Option<f64>,
        /// Symmetric per-arm dephasing strength (overrides --noise).
        #[arg(long)]
        dephase: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        background: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phase_offset: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        no_svg: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the key-rate breakdown for given QBER and C.
    Keyrate {
        #[arg(long)]
        qz: f64,
        #[arg(long)]
        c: f64,
        /// Standard error of C; overshoot above 2 within 3σ is clipped.
        #[arg(long, default_value_t = 0.0)]
        c_stderr: f64,
        #[arg(long)]
        qx: Option<f64>,
    },
}

fn with_workers<T>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T>
where
    T: Send,
{
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| LabError::Config(format!("--workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn execute(config: &ExperimentConfig, workers: Option<usize>) -> Result<()> {
    let rows = with_workers(workers, || run_sweep(config))??;
    let written = write_outputs(&rows, config.beta_a, &config.out_dir, config.emit_svg)?;
    for row in rows.iter().filter(|r| !r.issues.is_empty()) {
        eprintln!("beta_b = {:.4}: {}", row.beta_b, row.issues.join("; "));
    }
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            workers,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|e| LabError::io(&config, e))?;
            let mut cfg = parse_config(&text)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(out) = out {
                cfg.out_dir = out;
            }
            execute(&cfg, workers)
        }
        Command::Sweep {
            beta_a,
            points,
            mode,
            shots,
            seed,
            alice_menu,
            noise,
            depol,
            dephase,
            background,
            phase_offset,
            out,
            no_svg,
            workers,
        } => {
            let mut noise = match noise {
                NoiseArg::Ideal => NoiseParams::ideal(),
                NoiseArg::Calibrated => {
                    NoiseParams::calibrated(CALIBRATED_ZZ, CALIBRATED_VISIBILITY)?
                }
            };
            if let Some(p) = depol {
                noise.depol_a = p;
                noise.depol_b = p;
            }
            if let Some(d) = dephase {
                noise.dephase_a = d;
                noise.dephase_b = d;
            }
            noise.background_click = background;
            let cfg = ExperimentConfig {
                beta_a,
                bsm_phase_offset: phase_offset,
                sweep: Some(SweepSpec::full_turn(points)),
                noise,
                mode: match mode {
                    ModeArg::Analytic => SimMode::Analytic,
                    ModeArg::Montecarlo => SimMode::MonteCarlo,
                },
                shots,
                seed,
                alice_menu: match alice_menu {
                    MenuArg::Six => MenuMode::Six,
                    MenuArg::Four => MenuMode::FourCheck,
                    MenuArg::Two => MenuMode::TwoCheck,
                    MenuArg::One => MenuMode::OneCheck,
                },
                out_dir: out,
                emit_svg: !no_svg,
                ..ExperimentConfig::default()
            };
            execute(&cfg, workers)
        }
        Command::Keyrate {
            qz,
            c,
            c_stderr,
            qx,
        } => {
            print!("{}", keyrate_report(qz, c, c_stderr, qx)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qkdlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
