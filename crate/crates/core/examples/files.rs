//! File-driven run, the same thing the `feederpath` binary does: read a
//! settings file, load the network, solve, and write every output.
//!
//!     cargo run --example files -- [output dir]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use feederpath::io::{execute, Cli, RunConfig};

pub fn run_example_in(dir: &Path) -> Result<String, Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let cli = Cli {
        config: Some(fixtures.join("academic.cfg")),
        out: Some(dir.join("solution.json")),
        geojson_out: Some(dir.join("colored.geojson")),
        svg_out: Some(dir.join("network.svg")),
        lp_out: Some(dir.join("model.lp")),
        diagnostics_out: Some(dir.join("diagnostics.json")),
        ..Cli::default()
    };
    let cfg = RunConfig::from_cli(cli)?;
    let result = execute(&cfg)?;
    let mut out = String::new();
    writeln!(out, "exit status {}", result.exit_code())?;
    for name in [
        "solution.json",
        "colored.geojson",
        "network.svg",
        "model.lp",
        "diagnostics.json",
    ] {
        let len = std::fs::metadata(dir.join(name))?.len();
        writeln!(out, "wrote {name} ({len} bytes)")?;
    }
    Ok(out)
}

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("feederpath-files-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let out = run_example_in(&dir);
    std::fs::remove_dir_all(&dir)?;
    out
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    match std::env::args().nth(1).map(PathBuf::from) {
        Some(dir) => {
            std::fs::create_dir_all(&dir)?;
            print!("{}", run_example_in(&dir)?);
        }
        None => print!("{}", run_example()?),
    }
    Ok(())
}
