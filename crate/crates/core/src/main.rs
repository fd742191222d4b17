use std::io::Write;

use clap::Parser;

use monoscheme::cli::{execute, truncation_height_from_env, Args};

fn main() {
    let args = Args::parse();
    let out = execute(&args, truncation_height_from_env());
    let code = out.report.exit_code();
    // a closed pipe is not an error worth reporting
    let _ = if args.json {
        writeln!(std::io::stdout(), "{}", out.report.to_json())
    } else if code >= 2 {
        write!(std::io::stderr(), "{}", out.render_text())
    } else {
        write!(std::io::stdout(), "{}", out.render_text())
    };
    std::process::exit(code);
}
