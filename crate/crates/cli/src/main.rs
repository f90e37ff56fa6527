mod args;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::{Ctx, VerifyRequest, ZetaRequest};
use error::CliError;
use output::Output;

fn run(cli: Cli) -> Result<(Output, Format), CliError> {
    let (common, is_tree) = match &cli.command {
        Command::Tree { common, .. } => (common, true),
        Command::Eigenvalues { common, .. }
        | Command::Eigenvector { common, .. }
        | Command::Spectrum { common, .. }
        | Command::Zeta { common, .. }
        | Command::Verify { common, .. } => (common, false),
    };
    if common.format == Format::Dot && !is_tree {
        return Err(CliError::Config(
            "--format dot is only available for `tree`".into(),
        ));
    }
    let ctx = Ctx::new(common)?;
    let format = common.format;
    let out = match cli.command {
        Command::Eigenvalues { count, .. } => commands::eigenvalues(&ctx, count)?,
        Command::Eigenvector {
            n, terms, samples, ..
        } => commands::eigenvector(&ctx, n, terms, samples)?,
        Command::Spectrum { cutoff, .. } => commands::spectrum(&ctx, &cutoff)?,
        Command::Zeta {
            s,
            which,
            eps,
            mode,
            prefactor_mode,
            reference_mode,
            poles,
            ..
        } => {
            let req = ZetaRequest {
                s,
                which,
                eps,
                mode,
                prefactor: prefactor_mode,
                reference: reference_mode,
                poles,
            };
            commands::zeta(&ctx, &req)?
        }
        Command::Tree { depth, .. } => commands::tree(&ctx, depth, format)?,
        Command::Verify {
            n, count, depth, ..
        } => commands::verify(&ctx, &VerifyRequest { n, count, depth })?,
    };
    Ok((out, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(out, format)| Ok((out.render(format)?, out.failed)));
    match result {
        Ok((text, failed)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            if failed {
                eprintln!("error: verification failed");
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
