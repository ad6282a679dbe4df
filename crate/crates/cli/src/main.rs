use std::io::{self, BufWriter, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = pathent_cli::run(std::env::args_os(), &mut out, &mut io::stderr().lock());
    if out.flush().is_err() && code == 0 {
        std::process::exit(1);
    }
    drop(out);
    std::process::exit(code);
}
