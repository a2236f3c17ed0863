mod commands;
mod config;
mod doc;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, RunConfig, MAX_DEGREE_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = cli.command.parts();
    let env = std::env::var(MAX_DEGREE_ENV).ok();
    let cfg = match RunConfig::from_args(args, env.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("wds {}: usage error: {}", name, e);
            return ExitCode::from(2);
        }
    };
    let result = commands::build(&cfg).and_then(|b| match &cli.command {
        Command::Setup(a) => commands::setup(&b, a.dump_setup),
        Command::Generators(_) => commands::generators(&b),
        Command::Tables(_) => commands::tables(&b),
        Command::Hierarchy(_) => commands::hierarchy(&b),
        Command::VerifyAll(_) => commands::verify_all(&b),
    });
    match result {
        Ok(doc) => {
            print!("{}", doc.render(cfg.format));
            if doc.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("wds {}: usage error: {}", name, e);
            ExitCode::from(2)
        }
    }
}
