use std::io::Write;

fn main() {
    let (code, out) = qhmf_cli::run(std::env::args_os());
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout(), "{out}");
    std::process::exit(code);
}
