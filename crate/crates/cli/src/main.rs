use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let code = pmodulus_cli::run(std::env::args_os(), &mut out, &mut stderr.lock());
    let _ = out.flush();
    std::process::exit(code);
}
