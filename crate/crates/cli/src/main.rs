use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use fedocsvm::experiment::{run_experiment, sweep, ExperimentConfig, ExperimentError, MetricsReport, Stage};

/// Federated one-class SVM experiments.
#[derive(Debug, Parser)]
#[command(name = "fedocsvm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and print its metrics.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the experiment once per local-epoch count.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,30,40,50")]
        epochs: Vec<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn load(config: &PathBuf, output: Option<PathBuf>) -> Result<ExperimentConfig, ExperimentError> {
    let mut cfg = ExperimentConfig::from_json_file(config)?;
    if output.is_some() {
        cfg.output_dir = output;
    }
    Ok(cfg)
}

fn print_clients(report: &MetricsReport) {
    println!("client_id,f_score,precision,recall,n_support_vectors,n_edge_support_vectors");
    for c in &report.per_client {
        println!(
            "{},{:.4},{:.4},{:.4},{},{}",
            c.client_id, c.f_score, c.precision, c.recall, c.n_support_vectors, c.n_edge_support_vectors
        );
    }
    println!("mean_f {:.4} std_f {:.4}", report.summary.mean_f, report.summary.std_f);
}

fn execute(command: Command) -> Result<(), ExperimentError> {
    match command {
        Command::Run { config, output } => {
            let cfg = load(&config, output)?;
            let report = run_experiment(&cfg)?;
            if cfg.output_dir.is_some() {
                print_clients(&report);
            } else {
                println!("{}", report.to_json());
            }
        }
        Command::Sweep { config, epochs, output } => {
            let cfg = load(&config, output)?;
            let (rows, _) = sweep(&cfg, &epochs)?;
            println!("epochs,mean_f,std_f");
            for r in rows {
                println!("{},{:.4},{:.4}", r.epochs, r.mean_f, r.std_f);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            // usage mistakes are configuration errors, not data errors
            let _ = e.print();
            return ExitCode::from(Stage::Config.exit_code() as u8);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fedocsvm: {e}");
            ExitCode::from(e.stage.exit_code() as u8)
        }
    }
}
