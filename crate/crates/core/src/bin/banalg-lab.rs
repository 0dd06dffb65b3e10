use std::path::PathBuf;
use std::process::ExitCode;

use banalg_lab::cli::{self, Command, RunConfig, EXIT_CONFIG_ERROR};
use banalg_lab::gallery::GalleryItem;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "banalg-lab",
    version,
    about = "Isometries of invertible groups of matrix algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON config file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = cli::DEFAULT_SEED)]
    seed: u64,
    /// Override a check tolerance, e.g. --tol isometry=1e-6
    #[arg(long = "tol", value_name = "KEY=VAL", value_parser = cli::parse_tolerance)]
    tol: Vec<(String, f64)>,
    /// Report file (default stdout)
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Audit an oracle, then build and test its real-linear extension
    VerifyExtension(Common),
    /// Recover the canonical form of an isometry of GL_n
    ClassifyGln(Common),
    /// Replay a counterexample
    Gallery {
        /// cx2 or dame
        #[arg(long)]
        name: GalleryItem,
        #[command(flatten)]
        common: Common,
    },
    /// Compute the radical of an algebra and cross-check it
    Radical(Common),
    /// Check that an oracle is an isometry
    AuditOracle(Common),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let (command, common, gallery) = match cli.command {
        Cmd::VerifyExtension(c) => (Command::VerifyExtension, c, None),
        Cmd::ClassifyGln(c) => (Command::ClassifyGln, c, None),
        Cmd::Gallery { name, common } => (Command::Gallery, common, Some(name)),
        Cmd::Radical(c) => (Command::Radical, c, None),
        Cmd::AuditOracle(c) => (Command::AuditOracle, c, None),
    };
    let run = RunConfig {
        command,
        config_path: common.config,
        seed: common.seed,
        tol_overrides: common.tol.into_iter().collect(),
        report_path: common.report,
        gallery,
    };
    ExitCode::from(cli::run(&run) as u8)
}
