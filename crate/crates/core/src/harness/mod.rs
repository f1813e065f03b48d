//! Comparative campaigns against seeded mutants: kill counting, per-iteration
//! trajectories for each strategy, and rank-sum comparison of final kills.

mod report;
mod stats;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{art_select, sample_random_input, ArtConfig, Strategy};
use crate::gp::Execution;
use crate::qbc::{run_tbc, TbcConfig};
use crate::sut::{fixtures, Fixture, Sut, SutError};
use crate::value::InputVector;
use crate::SeededRng;

pub use report::{emit_report, PairwiseTest, Report, StrategySummary, Summary};
pub use stats::{rank_sum, rank_sum_exact, rank_sum_normal, RankSum, EXACT_LIMIT};

pub const DEFAULT_KILL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("rank-sum samples must be non-empty")]
    EmptySample,
    #[error("rank-sum samples must be finite")]
    NonFiniteSample,
    #[error("a campaign needs at least one run")]
    NoRuns,
    #[error("{strategy} run with seed {seed} failed: {message}")]
    Run {
        strategy: Strategy,
        seed: u64,
        message: String,
    },
    #[error(transparent)]
    Sut(#[from] SutError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KillRecord {
    pub mutant_id: usize,
    pub mutant: String,
    pub killed: bool,
    /// First test whose output tells the mutant apart.
    pub witness: Option<InputVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Finiteness {
    Finite,
    PosInf,
    NegInf,
    NaN,
}

fn finiteness(x: f64) -> Finiteness {
    if x.is_nan() {
        Finiteness::NaN
    } else if x == f64::INFINITY {
        Finiteness::PosInf
    } else if x == f64::NEG_INFINITY {
        Finiteness::NegInf
    } else {
        Finiteness::Finite
    }
}

/// Whether a mutant output differs from the original beyond `tolerance`
/// (relative, floored at 1) or falls in a different finiteness class.
pub fn distinguishes(original: f64, mutant: f64, tolerance: f64) -> bool {
    match (finiteness(original), finiteness(mutant)) {
        (Finiteness::Finite, Finiteness::Finite) => (mutant - original).abs() > tolerance * original.abs().max(1.0),
        (a, b) => a != b,
    }
}

fn fixture(id: &str) -> Result<&'static Fixture, HarnessError> {
    fixtures::find(id).ok_or_else(|| HarnessError::UnknownFixture(id.to_string()))
}

/// For each mutant, the index of the first test that kills it.
pub fn first_kills(tests: &[Execution], fixture_id: &str, tolerance: f64) -> Result<Vec<Option<usize>>, HarnessError> {
    let f = fixture(fixture_id)?;
    (0..f.mutants.len())
        .into_par_iter()
        .map(|k| {
            for (i, t) in tests.iter().enumerate() {
                if distinguishes(t.observed, f.evaluate(Some(k), &t.input)?, tolerance) {
                    return Ok(Some(i));
                }
            }
            Ok(None)
        })
        .collect()
}

/// Kill status of every mutant of `fixture_id` under `tests`, whose observed
/// outputs are taken as the original's.
pub fn kills(tests: &[Execution], fixture_id: &str, tolerance: f64) -> Result<Vec<KillRecord>, HarnessError> {
    let f = fixture(fixture_id)?;
    Ok(first_kills(tests, fixture_id, tolerance)?
        .into_iter()
        .enumerate()
        .map(|(k, first)| KillRecord {
            mutant_id: k,
            mutant: f.mutants[k].name.to_string(),
            killed: first.is_some(),
            witness: first.map(|i| tests[i].input.clone()),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub tbc: TbcConfig,
    pub art: ArtConfig,
    pub kill_tolerance: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            tbc: TbcConfig::default(),
            art: ArtConfig::default(),
            kill_tolerance: DEFAULT_KILL_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IterationPoint {
    pub iteration: usize,
    pub suite_size: usize,
    pub kills_cumulative: usize,
    /// Best committee fitness error; TBC only.
    pub best_fitness_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CampaignReport {
    pub strategy: Strategy,
    pub seed: u64,
    pub fixture: String,
    pub mutant_count: usize,
    pub per_iteration: Vec<IterationPoint>,
    /// The final suite, seed tests first.
    pub executions: Vec<Execution>,
}

impl CampaignReport {
    pub fn final_kills(&self) -> usize {
        self.per_iteration.last().map_or(0, |p| p.kills_cumulative)
    }
}

fn execute_all<S: Sut + ?Sized>(sut: &S, inputs: &[InputVector]) -> Result<Vec<Execution>, SutError> {
    inputs
        .iter()
        .map(|u| Ok(Execution::new(u.clone(), sut.execute(u)?)))
        .collect()
}

fn baseline_suite(
    strategy: Strategy,
    f: &'static Fixture,
    seed_tests: &[InputVector],
    cfg: &CampaignConfig,
    rng: &mut SeededRng,
) -> Result<Vec<Execution>, SutError> {
    let spec = f.spec();
    let sut = f.handle(None);
    let mut inputs = seed_tests.to_vec();
    let per = cfg.tbc.tests_per_iteration;
    for _ in 0..cfg.tbc.iterations {
        for _ in 0..per {
            let next = match strategy {
                Strategy::Art => art_select(&spec, &inputs, &cfg.art, rng),
                _ => sample_random_input(&spec, rng),
            };
            inputs.push(next);
        }
    }
    execute_all(&sut, &inputs)
}

fn single_run(
    strategy: Strategy,
    f: &'static Fixture,
    seed_tests: &[InputVector],
    cfg: &CampaignConfig,
    seed: u64,
) -> Result<CampaignReport, HarnessError> {
    let fail = |message: String| HarnessError::Run { strategy, seed, message };
    let mut rng = SeededRng::seed_from_u64(seed);
    let (executions, fitness) = match strategy {
        Strategy::Tbc => {
            let run = run_tbc(&f.spec(), seed_tests, &cfg.tbc, &f.handle(None), &mut rng)
                .map_err(|e| fail(e.to_string()))?;
            let fitness: Vec<f64> = run.iterations.iter().map(|r| r.best_fitness_error).collect();
            (run.executions, Some(fitness))
        }
        _ => (
            baseline_suite(strategy, f, seed_tests, cfg, &mut rng).map_err(|e| fail(e.to_string()))?,
            None,
        ),
    };
    let first = first_kills(&executions, f.id, cfg.kill_tolerance)?;
    let per = cfg.tbc.tests_per_iteration;
    let per_iteration = (0..=cfg.tbc.iterations)
        .map(|n| {
            let suite_size = seed_tests.len() + n * per;
            IterationPoint {
                iteration: n,
                suite_size,
                kills_cumulative: first.iter().filter(|k| k.is_some_and(|i| i < suite_size)).count(),
                best_fitness_error: match (&fitness, n) {
                    (Some(fs), n) if n > 0 => fs.get(n - 1).copied(),
                    _ => None,
                },
            }
        })
        .collect();
    Ok(CampaignReport {
        strategy,
        seed,
        fixture: f.id.to_string(),
        mutant_count: f.mutants.len(),
        per_iteration,
        executions,
    })
}

/// Failure of some runs, with the reports of the runs that completed.
#[derive(Debug, Error)]
#[error("{} of {} runs failed; first: {}", failures.len(), failures.len() + partial.len(), failures[0])]
pub struct CampaignFailure {
    pub failures: Vec<HarnessError>,
    pub partial: Vec<CampaignReport>,
}

/// One run of `strategy` per seed, in parallel. Every strategy executes the
/// seed tests and then `tests_per_iteration` inputs per iteration, so suite
/// sizes line up across strategies at every iteration.
pub fn run_campaign(
    strategy: Strategy,
    fixture_id: &str,
    seed_tests: &[InputVector],
    cfg: &CampaignConfig,
    seeds: &[u64],
) -> Result<Vec<CampaignReport>, CampaignFailure> {
    let single_failure = |e: HarnessError| CampaignFailure {
        failures: vec![e],
        partial: Vec::new(),
    };
    if seeds.is_empty() {
        return Err(single_failure(HarnessError::NoRuns));
    }
    let f = fixture(fixture_id).map_err(single_failure)?;
    let outcomes: Vec<Result<CampaignReport, HarnessError>> = seeds
        .par_iter()
        .map(|&seed| single_run(strategy, f, seed_tests, cfg, seed))
        .collect();
    let mut partial = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => partial.push(r),
            Err(e) => failures.push(e),
        }
    }
    if failures.is_empty() {
        Ok(partial)
    } else {
        Err(CampaignFailure { failures, partial })
    }
}
