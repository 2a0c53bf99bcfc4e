use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use flatorb::{run, Cli};
use flatorb_core::orbifold::BuiltinCatalog;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli, &BuiltinCatalog) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
