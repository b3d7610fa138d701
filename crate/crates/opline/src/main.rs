use clap::Parser;
use opline::{run, Cli, RunConfig};

fn main() {
    let cfg = RunConfig::from(Cli::parse());
    let code = run(&cfg, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
