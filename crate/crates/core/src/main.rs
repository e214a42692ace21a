use std::io::Write;

fn main() {
    let run = qdomain::cli::run(std::env::args_os());
    print!("{}", run.output);
    eprint!("{}", run.diagnostics);
    let _ = std::io::stdout().flush();
    std::process::exit(run.code);
}
