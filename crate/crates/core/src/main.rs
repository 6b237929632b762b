use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use uavsec::analysis::{practicality_crossover_bytes, Cipher, PracticalityInputs};
use uavsec::io::{self, IoError, OUTPUT_ROOT_ENV};

#[derive(Parser)]
#[command(name = "uavsec", version, about = "UAV swarm secure beamforming simulator and optimizers")]
struct Cli {
    /// Directory relative output paths resolve against.
    #[arg(long, global = true, env = OUTPUT_ROOT_ENV)]
    output_root: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an optimizer or baseline from a config file or preset name.
    Run {
        config: String,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Stream per-iteration progress as CSV on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Compare finished runs of the same scenario.
    Compare {
        /// Manifest files or run directories.
        #[arg(required = true, num_args = 2..)]
        manifests: Vec<PathBuf>,
        /// Write the table here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Export the beam pattern of one front row of a finished run.
    Pattern {
        config: String,
        #[arg(long)]
        solution: usize,
        #[arg(long, default_value_t = 1.0)]
        grid_deg: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Transfer size beyond which the one-off optimization beats per-byte encryption.
    Practicality {
        /// des, aes or rsa; all three when omitted.
        #[arg(long)]
        cipher: Option<String>,
        /// Optimization wall time in seconds.
        #[arg(long)]
        opt_time: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let root = cli.output_root.unwrap_or_else(io::output_root);
    match execute(cli.command, &root) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command, root: &std::path::Path) -> Result<(), IoError> {
    match command {
        Command::Run { config, seed, output_dir, progress } => {
            let mut cfg = io::resolve_config(&config)?;
            if seed.is_some() {
                cfg.seed = seed;
            }
            if output_dir.is_some() {
                cfg.output_dir = output_dir;
            }
            let mut stderr = std::io::stderr().lock();
            if progress {
                let _ = writeln!(stderr, "iteration,archive_size,evaluations,best_f1,best_f2,best_f3,hypervolume");
            }
            let mut observer = |p: &uavsec::moea::ProgressRecord| {
                if progress {
                    let best: Vec<String> = p.best.iter().map(|b| b.to_string()).collect();
                    let _ = writeln!(
                        stderr,
                        "{},{},{},{},{}",
                        p.iteration,
                        p.archive_size,
                        p.evaluations,
                        best.join(","),
                        p.hypervolume
                    );
                }
            };
            let manifest = io::run(&cfg, root, &mut observer)?;
            let dir = cfg.resolve_output_dir(root);
            println!(
                "{} evaluations, {} front rows, {:.2} s -> {}",
                manifest.evaluations,
                manifest.front_size,
                manifest.wall_time_s,
                dir.display()
            );
        }
        Command::Compare { manifests, output } => {
            let table = io::compare(&manifests)?;
            let csv = table.to_csv();
            match output {
                Some(p) => std::fs::write(&p, csv).map_err(|e| IoError::File { context: format!("writing {}", p.display()), source: e })?,
                None => print!("{csv}"),
            }
        }
        Command::Pattern { config, solution, grid_deg, output } => {
            let cfg = io::resolve_config(&config)?;
            let path = io::export_pattern(&cfg, root, solution, grid_deg, output.as_deref())?;
            println!("{}", path.display());
        }
        Command::Practicality { cipher, opt_time } => {
            let ciphers = match cipher {
                Some(name) => vec![name.parse::<Cipher>().map_err(|e| IoError::Usage(e.to_string()))?],
                None => Cipher::ALL.to_vec(),
            };
            let inputs = PracticalityInputs::with_reference_ciphers(opt_time);
            println!("cipher,optimization_time_s,crossover_bytes,crossover_mb");
            for c in ciphers {
                let bytes = practicality_crossover_bytes(&inputs, c).map_err(|e| IoError::Usage(e.to_string()))?;
                println!("{c},{opt_time},{bytes},{}", bytes / 1e6);
            }
        }
    }
    Ok(())
}
