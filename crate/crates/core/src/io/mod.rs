//! Files in, files out: network loaders, run configuration, the end-to-end
//! pipeline and result writers.

pub mod config;
pub mod emit;
pub mod load;
pub mod pipeline;

use std::ffi::OsString;

use clap::Parser;

pub use config::{Cli, Lambda, RunConfig};
pub use load::{load_network, load_network_with, LoadOptions, Loaded};
pub use pipeline::{emit_solution, execute, run_pipeline, solve_network, Params, RunResult};

/// Entry point of the `feederpath` binary; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match RunConfig::from_cli(cli) {
        Ok(cfg) => run_pipeline(&cfg),
        Err(e) => {
            eprintln!("error: config: {e}");
            1
        }
    }
}
