use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout();
    match quasi_bp::cli::run(std::env::args_os(), &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(quasi_bp::Error::Usage(msg)) => {
            eprint!("{msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
