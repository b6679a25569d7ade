use std::io::Write;

fn main() {
    let outcome = acs_raman::cli::execute(std::env::args_os());
    std::io::stdout().write_all(&outcome.stdout).expect("write stdout");
    eprint!("{}", outcome.stderr);
    std::process::exit(outcome.code);
}
