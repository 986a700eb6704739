use std::fmt;
use std::fs;
use std::path::Path as FsPath;

use thiserror::Error;

use super::config::{Lambda, RunConfig};
use super::emit;
use super::load::{load_network_with, LoadOptions, Projection};
use crate::diagnostics::{diagnose, DiagnosticReport, DEFAULT_NEIGHBORS};
use crate::ilp::{auto_lambda, build_problem, IlpProblem};
use crate::matrices::PathMatrices;
use crate::network::{LabelPolicy, Network};
use crate::search::{CandidateGenerator, Candidates, SearchConfig};
use crate::solver::export::{export_model, ModelFormat};
use crate::solver::{solve, Limits, Solution, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Load,
    Generate,
    Matrices,
    Model,
    Emit,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Load => "load",
            Stage::Generate => "generate",
            Stage::Matrices => "matrices",
            Stage::Model => "model",
            Stage::Emit => "emit",
        })
    }
}

#[derive(Debug, Error)]
#[error("{stage}: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub message: String,
}

fn fail(stage: Stage) -> impl FnOnce(String) -> PipelineError {
    move |message| PipelineError { stage, message }
}

/// Everything needed to go from a network to a solution.
#[derive(Debug, Clone)]
pub struct Params {
    pub search: SearchConfig,
    pub lambda: Lambda,
    pub limits: Limits,
    pub neighbors: usize,
}

impl Params {
    pub fn new(search: SearchConfig) -> Self {
        Params {
            search,
            lambda: Lambda::Auto,
            limits: Limits::none(),
            neighbors: DEFAULT_NEIGHBORS,
        }
    }
}

impl From<&RunConfig> for Params {
    fn from(cfg: &RunConfig) -> Self {
        Params {
            search: cfg.search(),
            lambda: cfg.lambda,
            limits: cfg.limits(),
            neighbors: cfg.neighbors,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub network: Network,
    pub projection: Option<Projection>,
    pub candidates: Candidates,
    pub matrices: PathMatrices,
    pub problem: IlpProblem,
    pub solution: Solution,
    pub report: DiagnosticReport,
}

impl RunResult {
    /// 0: optimal and nothing to report; 2: optimal with issues; 1: the
    /// solver did not prove optimality.
    pub fn exit_code(&self) -> i32 {
        match (self.solution.status, self.report.is_empty()) {
            (Status::Optimal, true) => 0,
            (Status::Optimal, false) => 2,
            _ => 1,
        }
    }

    pub fn solution_json(&self) -> String {
        emit::solution_json(&self.matrices, &self.solution, self.problem.lambda)
    }

    pub fn geojson(&self) -> String {
        emit::geojson(
            &self.network,
            Some((&self.matrices, &self.solution)),
            self.projection.as_ref(),
        )
    }

    pub fn svg(&self) -> String {
        emit::svg(&self.network, &self.matrices, &self.solution)
    }

    pub fn model(&self, format: ModelFormat) -> String {
        export_model(&self.problem, format)
    }
}

/// Candidate generation, model, exact solve and diagnostics on an in-memory
/// network.
pub fn solve_network(network: Network, params: &Params) -> Result<RunResult, PipelineError> {
    let generator =
        CandidateGenerator::new(&network, params.search.clone()).map_err(|e| fail(Stage::Generate)(e.to_string()))?;
    let candidates = generator.generate();
    let matrices =
        PathMatrices::build(candidates.paths.clone(), &network).map_err(|e| fail(Stage::Matrices)(e.to_string()))?;
    let lambda = match params.lambda {
        Lambda::Auto => auto_lambda(&matrices),
        Lambda::Fixed(v) => v,
    };
    let problem = build_problem(&matrices, lambda).map_err(|e| fail(Stage::Model)(e.to_string()))?;
    let solution = solve(&problem, params.limits);
    log::info!(
        "{} candidates, {} variables, {} rows: {:?} after {} nodes",
        matrices.num_paths(),
        problem.num_vars(),
        problem.constraints.len(),
        solution.status,
        solution.stats.nodes
    );
    let mut report = diagnose(&solution, &matrices, &network, params.neighbors);
    report.add_generation_failures(&candidates.failures);
    Ok(RunResult {
        network,
        projection: None,
        candidates,
        matrices,
        problem,
        solution,
        report,
    })
}

fn write(path: &FsPath, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text).map_err(|e| fail(Stage::Emit)(format!("{}: {e}", path.display())))
}

/// Writes every output the config asks for.
pub fn emit_solution(result: &RunResult, cfg: &RunConfig) -> Result<(), PipelineError> {
    if let Some(p) = &cfg.out {
        write(p, &result.solution_json())?;
    }
    if let Some(p) = &cfg.geojson_out {
        write(p, &result.geojson())?;
    }
    if let Some(p) = &cfg.svg_out {
        write(p, &result.svg())?;
    }
    if let Some(p) = &cfg.lp_out {
        write(p, &result.model(ModelFormat::from_path(p)))?;
    }
    if let Some(p) = &cfg.diagnostics_out {
        write(p, &result.report.to_json())?;
    }
    Ok(())
}

/// Load, solve, diagnose and emit. Customers with missing or dangling
/// junction labels are reported, not fatal.
pub fn execute(cfg: &RunConfig) -> Result<RunResult, PipelineError> {
    cfg.check_inputs().map_err(fail(Stage::Config))?;
    let opts = LoadOptions {
        policy: LabelPolicy::Lenient,
        lonlat: cfg.lonlat,
    };
    let loaded = load_network_with(&cfg.network, &opts).map_err(|e| fail(Stage::Load)(e.to_string()))?;
    let mut result = solve_network(loaded.network, &Params::from(cfg))?;
    result.projection = loaded.projection;
    emit_solution(&result, cfg)?;
    Ok(result)
}

/// [`execute`] reduced to a process exit status, with errors on stderr.
pub fn run_pipeline(cfg: &RunConfig) -> i32 {
    match execute(cfg) {
        Ok(result) => {
            match result.solution.status {
                Status::Aborted => eprintln!("solver stopped at its limit; outputs hold the best solution found"),
                Status::InfeasibleModel => eprintln!("the model has no feasible solution"),
                Status::Optimal => {}
            }
            result.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
