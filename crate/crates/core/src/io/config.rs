use std::path::{Path as FsPath, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use clap::Parser;
use thiserror::Error;

use crate::diagnostics::DEFAULT_NEIGHBORS;
use crate::search::SearchConfig;
use crate::solver::Limits;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: `{key}`: {message}")]
    BadValue {
        origin: String,
        key: String,
        message: String,
    },
    #[error("{origin}: expected `key = value`")]
    Syntax { origin: String },
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    /// `1 / (|R|·|T| + 1)`
    Auto,
    Fixed(f64),
}

impl FromStr for Lambda {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Lambda::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(Lambda::Fixed(v)),
            _ => Err(format!("expected `auto` or a non-negative number, got `{s}`")),
        }
    }
}

/// Command line of the `feederpath` binary. Every flag can also be set in a
/// `--config` file as `key = value` (the flag name without dashes); flags
/// win over the file.
#[derive(Debug, Clone, Default, Parser)]
#[command(
    name = "feederpath",
    version,
    about = "Identify customer-to-feeder paths in LV networks"
)]
pub struct Cli {
    /// Flat key = value settings file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Network file (.geojson / .json or .csv).
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// N: candidate paths per customer.
    #[arg(long)]
    pub max_paths: Option<usize>,
    /// D: largest distance between connected elements.
    #[arg(long)]
    pub max_distance: Option<f64>,
    /// L: longest admissible path.
    #[arg(long)]
    pub max_length: Option<f64>,
    /// Edge weight multiplier after each found path.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Assignment penalty, or `auto`.
    #[arg(long)]
    pub lambda: Option<Lambda>,
    /// Solution JSON (paths, assignments, uncovered customers).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Input network as GeoJSON coloured by feeder.
    #[arg(long)]
    pub geojson_out: Option<PathBuf>,
    /// SVG map of the solution.
    #[arg(long)]
    pub svg_out: Option<PathBuf>,
    /// Model export; `.mps` selects MPS, anything else LP.
    #[arg(long)]
    pub lp_out: Option<PathBuf>,
    /// Diagnostics JSON.
    #[arg(long)]
    pub diagnostics_out: Option<PathBuf>,
    /// Branch-and-bound node budget; exceeding it aborts.
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Solver time budget in seconds; exceeding it aborts.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Covered customers consulted for junction suggestions.
    #[arg(long)]
    pub neighbors: Option<usize>,
    /// Input coordinates are lon/lat degrees.
    #[arg(long)]
    pub lonlat: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub network: PathBuf,
    pub max_paths: usize,
    pub max_distance: f64,
    pub max_length: f64,
    pub alpha: f64,
    pub lambda: Lambda,
    pub out: Option<PathBuf>,
    pub geojson_out: Option<PathBuf>,
    pub svg_out: Option<PathBuf>,
    pub lp_out: Option<PathBuf>,
    pub diagnostics_out: Option<PathBuf>,
    pub node_limit: Option<u64>,
    pub time_limit: Option<f64>,
    pub neighbors: usize,
    pub lonlat: bool,
}

pub const DEFAULT_MAX_PATHS: usize = 10;

impl RunConfig {
    /// A config with defaults for everything but the required settings.
    pub fn new(network: impl Into<PathBuf>, max_distance: f64, max_length: f64) -> Self {
        RunConfig {
            network: network.into(),
            max_paths: DEFAULT_MAX_PATHS,
            max_distance,
            max_length,
            alpha: SearchConfig::DEFAULT_ALPHA,
            lambda: Lambda::Auto,
            out: None,
            geojson_out: None,
            svg_out: None,
            lp_out: None,
            diagnostics_out: None,
            node_limit: None,
            time_limit: None,
            neighbors: DEFAULT_NEIGHBORS,
            lonlat: false,
        }
    }

    /// Reads `--config` (if any) and applies the remaining flags on top.
    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let mut merged = Cli::default();
        if let Some(path) = &cli.config {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            merged = parse_kv(&text, &path.display().to_string(), path.parent())?;
        }
        overlay(&mut merged, cli);
        merged.try_into()
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig::new(self.max_paths, self.max_distance, self.max_length).with_alpha(self.alpha)
    }

    pub fn limits(&self) -> Limits {
        Limits {
            node_limit: self.node_limit,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
        }
    }

    /// Paths that must exist before anything runs.
    pub fn check_inputs(&self) -> Result<(), String> {
        if !self.network.is_file() {
            return Err(format!("network file {} does not exist", self.network.display()));
        }
        let outputs = [
            &self.out,
            &self.geojson_out,
            &self.svg_out,
            &self.lp_out,
            &self.diagnostics_out,
        ];
        for p in outputs.into_iter().flatten() {
            let dir = p.parent().filter(|d| !d.as_os_str().is_empty());
            if let Some(dir) = dir {
                if !dir.is_dir() {
                    return Err(format!("output directory {} does not exist", dir.display()));
                }
            }
        }
        Ok(())
    }
}

impl TryFrom<Cli> for RunConfig {
    type Error = ConfigError;

    fn try_from(c: Cli) -> Result<Self, Self::Error> {
        let mut cfg = RunConfig::new(
            c.network.ok_or(ConfigError::Missing("network"))?,
            c.max_distance.ok_or(ConfigError::Missing("max-distance"))?,
            c.max_length.ok_or(ConfigError::Missing("max-length"))?,
        );
        let bad = |key: &str, message: &str| ConfigError::BadValue {
            origin: "settings".into(),
            key: key.into(),
            message: message.into(),
        };
        cfg.max_paths = c.max_paths.unwrap_or(cfg.max_paths);
        cfg.alpha = c.alpha.unwrap_or(cfg.alpha);
        cfg.lambda = c.lambda.unwrap_or(cfg.lambda);
        cfg.out = c.out;
        cfg.geojson_out = c.geojson_out;
        cfg.svg_out = c.svg_out;
        cfg.lp_out = c.lp_out;
        cfg.diagnostics_out = c.diagnostics_out;
        cfg.node_limit = c.node_limit;
        cfg.time_limit = c.time_limit;
        cfg.neighbors = c.neighbors.unwrap_or(cfg.neighbors);
        cfg.lonlat = c.lonlat;
        cfg.search().validate().map_err(|e| bad("search", &e.to_string()))?;
        if cfg.time_limit.is_some_and(|t| !t.is_finite() || t < 0.0) {
            return Err(bad("time-limit", "must be a finite non-negative number of seconds"));
        }
        if cfg.neighbors == 0 {
            return Err(bad("neighbors", "must be at least 1"));
        }
        Ok(cfg)
    }
}

fn overlay(base: &mut Cli, top: Cli) {
    macro_rules! take {
        ($($f:ident),*) => { $( if top.$f.is_some() { base.$f = top.$f; } )* };
    }
    take!(
        network,
        max_paths,
        max_distance,
        max_length,
        alpha,
        lambda,
        out,
        geojson_out,
        svg_out,
        lp_out,
        diagnostics_out,
        node_limit,
        time_limit,
        neighbors
    );
    base.lonlat |= top.lonlat;
}

/// Parses a flat settings file. Relative paths are resolved against `base`.
pub fn parse_kv(text: &str, origin: &str, base: Option<&FsPath>) -> Result<Cli, ConfigError> {
    let mut c = Cli::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = format!("{origin}:{}", i + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { origin: at.clone() })?;
        let (key, value) = (key.trim().trim_start_matches("--").replace('_', "-"), value.trim());
        let bad = |message: String| ConfigError::BadValue {
            origin: at.clone(),
            key: key.clone(),
            message,
        };
        fn num<T: FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| format!("`{v}`: {e}"))
        }
        let path = |v: &str| {
            let p = PathBuf::from(v);
            match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            }
        };
        match key.as_str() {
            "network" => c.network = Some(path(value)),
            "max-paths" => c.max_paths = Some(num(value).map_err(bad)?),
            "max-distance" => c.max_distance = Some(num(value).map_err(bad)?),
            "max-length" => c.max_length = Some(num(value).map_err(bad)?),
            "alpha" => c.alpha = Some(num(value).map_err(bad)?),
            "lambda" => c.lambda = Some(value.parse().map_err(bad)?),
            "out" => c.out = Some(path(value)),
            "geojson-out" => c.geojson_out = Some(path(value)),
            "svg-out" => c.svg_out = Some(path(value)),
            "lp-out" => c.lp_out = Some(path(value)),
            "diagnostics-out" => c.diagnostics_out = Some(path(value)),
            "node-limit" => c.node_limit = Some(num(value).map_err(bad)?),
            "time-limit" => c.time_limit = Some(num(value).map_err(bad)?),
            "neighbors" => c.neighbors = Some(num(value).map_err(bad)?),
            "lonlat" => c.lonlat = num(value).map_err(bad)?,
            _ => return Err(ConfigError::UnknownKey { origin: at, key }),
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = parse_kv(
            "# demo\nnetwork = net.geojson\nmax-paths = 5\nmax_distance = 10\nmax-length = 30 # metres\nlambda = auto\n",
            "demo.cfg",
            Some(FsPath::new("/data")),
        )
        .unwrap();
        let cli = Cli::try_parse_from(["feederpath", "--max-paths", "7", "--lambda", "0.5"]).unwrap();
        let mut merged = file;
        overlay(&mut merged, cli);
        let cfg = RunConfig::try_from(merged).unwrap();
        assert_eq!(cfg.network, PathBuf::from("/data/net.geojson"));
        assert_eq!(cfg.max_paths, 7);
        assert_eq!(cfg.max_distance, 10.0);
        assert_eq!(cfg.lambda, Lambda::Fixed(0.5));
        assert_eq!(cfg.alpha, 2.0);
    }

    #[test]
    fn file_errors_have_line_numbers() {
        let e = parse_kv("network = a\ncolour = red\n", "x.cfg", None).unwrap_err();
        assert_eq!(e.to_string(), "x.cfg:2: unknown key `colour`");
        let e = parse_kv("max-paths = many\n", "x.cfg", None).unwrap_err();
        assert!(e.to_string().starts_with("x.cfg:1: `max-paths`"), "{e}");
        assert_eq!(
            parse_kv("just words\n", "x.cfg", None).unwrap_err(),
            ConfigError::Syntax {
                origin: "x.cfg:1".into()
            }
        );
    }

    #[test]
    fn required_and_ranges() {
        let cli = Cli::try_parse_from(["feederpath", "--network", "n.csv", "--max-distance", "5"]).unwrap();
        assert_eq!(
            RunConfig::try_from(cli).unwrap_err(),
            ConfigError::Missing("max-length")
        );
        let cli = Cli::try_parse_from([
            "feederpath",
            "--network",
            "n.csv",
            "--max-distance",
            "5",
            "--max-length=-1",
        ])
        .unwrap();
        assert!(RunConfig::try_from(cli).is_err());
        assert!("-0.1".parse::<Lambda>().is_err());
    }
}
