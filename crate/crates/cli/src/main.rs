use std::io;

fn main() {
    let code = coupled_tilt_cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
