use clap::Parser;

fn main() {
    // Usage and input errors exit above 2; verdict codes stay 0/1/2.
    let cli = match webflat::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version print and exit 0 by clap convention
            if e.use_stderr() {
                eprintln!("{e}");
                std::process::exit(3);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    match webflat::execute(cli) {
        Ok((report, code, out)) => {
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &report) {
                        eprintln!("cannot write {}: {e}", path.display());
                        std::process::exit(3);
                    }
                }
                None => print!("{report}"),
            }
            std::process::exit(code);
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}
