use std::io::IsTerminal;
use std::process::ExitCode;

fn main() -> ExitCode {
    let color =
        std::env::var("SAS_COLOR").map_or(true, |v| v != "0") && std::io::stderr().is_terminal();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = sas_core::cli::run(
        std::env::args_os(),
        &mut stdout.lock(),
        &mut stderr.lock(),
        color,
    );
    ExitCode::from(code as u8)
}
