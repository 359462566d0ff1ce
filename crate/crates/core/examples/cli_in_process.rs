//! Driving the command-line front end from code.
use clap::Parser;
use soficlab::cli::{run, Cli};

fn main() -> soficlab::Result<()> {
    let cli = Cli::parse_from(["soficlab", "chart", "build", "--kind", "poly", "--p", "11", "--K", "X^2,X^3+1"]);
    let out = run(&cli)?;
    println!("{}", out.summary.join("\n"));
    let cli = Cli::parse_from(["soficlab", "monoid", "idempotents", "--monoid", "full-transf:2"]);
    print!("{}", run(&cli)?.stdout);
    Ok(())
}
