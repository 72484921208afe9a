use clap::Parser;
use lieharm_cli::{run, Args};

fn main() {
    let args = Args::parse();
    std::process::exit(run(&args).exit_code);
}
