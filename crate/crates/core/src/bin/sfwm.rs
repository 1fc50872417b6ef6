use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sfwm::cli::{error_json, exit_code, run, Command};

#[derive(Parser)]
#[command(name = "sfwm", version, about = "Photon-pair spectra of periodically tapered waveguides")]
struct Args {
    command: Cmd,
    #[arg(long)]
    config: PathBuf,
    /// Dotted-path override, e.g. `pump.power_W=2`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Spectrum,
    Jsi,
    Purity,
    Map,
    Sweep,
    Check,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let command = match args.command {
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Jsi => Command::Jsi,
        Cmd::Purity => Command::Purity,
        Cmd::Map => Command::Map,
        Cmd::Sweep => Command::Sweep,
        Cmd::Check => Command::Check,
    };
    match run(command, &args.config, &args.set, args.out.as_deref()) {
        Ok(o) => {
            println!("{}", o.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
