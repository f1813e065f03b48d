//! Query by committee: committee disagreement as a utility for candidate
//! inputs, and the testing-by-committee campaign loop built on it.
//!
//! Each iteration infers a population from every execution so far, takes the
//! fittest models as the committee, draws a fresh random pool, and executes
//! the pool members whose predictions spread the most (mean absolute
//! deviation). Non-finite predictions are replaced by a large finite value
//! before any aggregation.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{evaluate_f64, ExprError, ExprTree, Primitives};
use crate::generators::sample_random_input;
use crate::gp::{self, Execution, GpConfig, GpError, Population};
use crate::spec_io::InterfaceSpec;
use crate::sut::{Sut, SutError};
use crate::value::InputVector;

/// Stand-in for infinite or NaN model outputs.
pub const DEFAULT_SUBSTITUTION: f64 = 10_000_000.0;

static NON_FINITE_AFTER_SANITIZE: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Error)]
pub enum QbcError {
    #[error("cannot compute the deviation of an empty list")]
    Empty,
    #[error("non-finite value {0} reached an aggregate")]
    NonFinite(f64),
    #[error("the committee is empty")]
    EmptyCommittee,
    #[error("at least one seed test is required")]
    NoSeedTests,
    #[error("pool holds {pool} inputs, cannot select {wanted}")]
    PoolTooSmall { pool: usize, wanted: usize },
    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(String),
    #[error("seed test {input} does not conform to the interface: {reason}")]
    BadSeed { input: InputVector, reason: String },
    #[error("executing {input} failed: {source}")]
    Sut {
        input: InputVector,
        #[source]
        source: SutError,
    },
    #[error(transparent)]
    Gp(#[from] GpError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// `x` when finite, otherwise `substitution` (for +inf, -inf and NaN alike).
pub fn sanitize(x: f64, substitution: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        substitution
    }
}

/// Passes `x` through, counting it if a non-finite value survived
/// sanitization. The count is exposed by [`non_finite_after_sanitize`].
pub(crate) fn note_sanitized(x: f64) -> f64 {
    if !x.is_finite() {
        NON_FINITE_AFTER_SANITIZE.fetch_add(1, Ordering::Relaxed);
    }
    x
}

/// Number of non-finite values that reached fitness or utility computations
/// in this process. Stays zero unless the substitution value itself is
/// non-finite.
pub fn non_finite_after_sanitize() -> u64 {
    NON_FINITE_AFTER_SANITIZE.load(Ordering::Relaxed)
}

fn mad_unscaled(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let mean = (xs.iter().sum::<f64>() / n).clamp(lo, hi);
    xs.iter().map(|x| (x - mean).abs()).sum::<f64>() / n
}

/// Mean absolute deviation around the mean: `(1/n) Σ |x_i - mean(xs)|`.
pub fn mad(xs: &[f64]) -> Result<f64, QbcError> {
    if xs.is_empty() {
        return Err(QbcError::Empty);
    }
    if let Some(&bad) = xs.iter().find(|x| !x.is_finite()) {
        note_sanitized(bad);
        return Err(QbcError::NonFinite(bad));
    }
    let largest = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if largest > 1e300 {
        const SHRINK: f64 = 1.0 / 18_446_744_073_709_551_616.0;
        let scaled: Vec<f64> = xs.iter().map(|x| x * SHRINK).collect();
        return Ok(mad_unscaled(&scaled) / SHRINK);
    }
    Ok(mad_unscaled(xs))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct TbcConfig {
    pub iterations: usize,
    pub tests_per_iteration: usize,
    pub random_pool_size: usize,
    pub committee_size: usize,
    pub gp: GpConfig,
    pub substitution_value: f64,
    /// Seed each iteration's GP with the previous iteration's population.
    pub warm_start: bool,
}

impl Default for TbcConfig {
    fn default() -> Self {
        TbcConfig {
            iterations: 60,
            tests_per_iteration: 5,
            random_pool_size: 1000,
            committee_size: 10,
            gp: GpConfig::default(),
            substitution_value: DEFAULT_SUBSTITUTION,
            warm_start: false,
        }
    }
}

impl TbcConfig {
    pub fn validate(&self) -> Result<(), QbcError> {
        let bad = |m: &str| Err(QbcError::InvalidConfig(m.to_string()));
        if self.tests_per_iteration == 0 || self.random_pool_size == 0 || self.committee_size == 0 {
            return bad("testsPerIteration, randomPoolSize and committeeSize must be positive");
        }
        if self.tests_per_iteration > self.random_pool_size {
            return bad("testsPerIteration must not exceed randomPoolSize");
        }
        if self.committee_size > self.gp.population_size {
            return bad("committeeSize must not exceed the GP population size");
        }
        if !self.substitution_value.is_finite() {
            return bad("substitutionValue must be finite");
        }
        self.gp_config().validate()?;
        Ok(())
    }

    /// GP settings with this campaign's substitution value.
    pub fn gp_config(&self) -> GpConfig {
        GpConfig {
            substitution_value: self.substitution_value,
            ..self.gp.clone()
        }
    }
}

/// The fittest models of one population.
#[derive(Debug, Clone, PartialEq)]
pub struct Committee {
    pub models: Vec<ExprTree>,
}

impl Committee {
    pub fn new(models: Vec<ExprTree>) -> Self {
        Committee { models }
    }

    /// The `size` best members of a sorted population.
    pub fn from_population(pop: &Population, size: usize) -> Self {
        Committee { models: pop.top(size) }
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityScore {
    pub input: InputVector,
    pub mad: f64,
}

/// Disagreement of the committee on `input`: the deviation of its sanitized
/// predictions.
pub fn utility(
    committee: &Committee,
    input: &InputVector,
    prims: &Primitives,
    substitution: f64,
) -> Result<UtilityScore, QbcError> {
    Ok(UtilityScore {
        input: input.clone(),
        mad: score(committee, input, prims, substitution)?,
    })
}

fn score(committee: &Committee, input: &InputVector, prims: &Primitives, substitution: f64) -> Result<f64, QbcError> {
    if committee.is_empty() {
        return Err(QbcError::EmptyCommittee);
    }
    let predictions = committee
        .models
        .iter()
        .map(|m| Ok(note_sanitized(sanitize(evaluate_f64(m, input.values(), prims)?, substitution))))
        .collect::<Result<Vec<_>, ExprError>>()?;
    mad(&predictions)
}

/// One input chosen from the pool, with its observed output and score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    pub execution: Execution,
    pub mad: f64,
}

/// Picks `count` inputs from `pool` in decreasing order of committee
/// disagreement (ties go to the lower pool index), executes each on the SUT
/// and removes it from the pool.
pub fn select_next_tests<S: Sut + ?Sized>(
    committee: &Committee,
    pool: &mut Vec<InputVector>,
    count: usize,
    sut: &S,
    prims: &Primitives,
    substitution: f64,
) -> Result<Vec<Selection>, QbcError> {
    if pool.len() < count {
        return Err(QbcError::PoolTooSmall {
            pool: pool.len(),
            wanted: count,
        });
    }
    // The committee is fixed for the whole call, so every score is computed once.
    let mut scores: Vec<f64> = pool
        .par_iter()
        .map(|u| score(committee, u, prims, substitution))
        .collect::<Result<_, _>>()?;
    let mut picked = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best = 0;
        for (i, s) in scores.iter().enumerate().skip(1) {
            if s.total_cmp(&scores[best]).is_gt() {
                best = i;
            }
        }
        let input = pool.remove(best);
        let mad = scores.remove(best);
        let observed = sut.execute(&input).map_err(|source| QbcError::Sut {
            input: input.clone(),
            source,
        })?;
        picked.push(Selection {
            execution: Execution::new(input, observed),
            mad,
        });
    }
    Ok(picked)
}

/// Log entry for one campaign iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IterationRecord {
    pub iteration: usize,
    pub best_fitness_error: f64,
    pub generations: usize,
    pub committee_size: usize,
    /// Rendering of the committee's best model.
    pub best_model: String,
    pub selected: Vec<Selection>,
    pub wall_clock_ms: f64,
}

#[derive(Debug, Clone, Default)]
pub struct TbcRun {
    /// Seed executions first, then selections in the order they were made.
    pub executions: Vec<Execution>,
    pub iterations: Vec<IterationRecord>,
}

#[derive(Debug, Error)]
#[error("campaign failed after {} executions: {error}", partial.executions.len())]
pub struct TbcFailure {
    #[source]
    pub error: QbcError,
    pub partial: TbcRun,
}

/// Executes the seed tests, then runs `cfg.iterations` rounds of
/// infer, committee, pool and selection. The result holds
/// `seed_tests.len() + iterations * tests_per_iteration` executions.
#[allow(clippy::result_large_err)]
pub fn run_tbc<S: Sut + ?Sized, R: Rng + ?Sized>(
    spec: &InterfaceSpec,
    seed_tests: &[InputVector],
    cfg: &TbcConfig,
    sut: &S,
    rng: &mut R,
) -> Result<TbcRun, TbcFailure> {
    let mut run = TbcRun::default();
    match tbc_loop(spec, seed_tests, cfg, sut, rng, &mut run) {
        Ok(()) => Ok(run),
        Err(error) => Err(TbcFailure { error, partial: run }),
    }
}

fn tbc_loop<S: Sut + ?Sized, R: Rng + ?Sized>(
    spec: &InterfaceSpec,
    seed_tests: &[InputVector],
    cfg: &TbcConfig,
    sut: &S,
    rng: &mut R,
    run: &mut TbcRun,
) -> Result<(), QbcError> {
    cfg.validate()?;
    if seed_tests.is_empty() {
        return Err(QbcError::NoSeedTests);
    }
    for input in seed_tests {
        spec.check_input(input).map_err(|reason| QbcError::BadSeed {
            input: input.clone(),
            reason,
        })?;
    }
    let prims = Primitives::from_spec(spec);
    let gp_cfg = cfg.gp_config();
    for input in seed_tests {
        let observed = sut.execute(input).map_err(|source| QbcError::Sut {
            input: input.clone(),
            source,
        })?;
        run.executions.push(Execution::new(input.clone(), observed));
    }
    let mut previous: Option<Population> = None;
    for iteration in 1..=cfg.iterations {
        let started = Instant::now();
        let inference = match previous.take() {
            Some(pop) if cfg.warm_start => {
                let trees = pop.members.into_iter().map(|m| m.tree).collect();
                gp::infer_from(trees, &run.executions, &gp_cfg, &prims, rng)?
            }
            _ => gp::infer(&run.executions, &gp_cfg, &prims, rng)?,
        };
        let pop = inference.population;
        let committee = Committee::from_population(&pop, cfg.committee_size);
        let mut pool: Vec<InputVector> = (0..cfg.random_pool_size)
            .map(|_| sample_random_input(spec, rng))
            .collect();
        let selected = select_next_tests(
            &committee,
            &mut pool,
            cfg.tests_per_iteration,
            sut,
            &prims,
            cfg.substitution_value,
        )?;
        run.executions.extend(selected.iter().map(|s| s.execution.clone()));
        run.iterations.push(IterationRecord {
            iteration,
            best_fitness_error: pop.best_error(),
            generations: pop.generation,
            committee_size: committee.len(),
            best_model: pop.best().map(|m| m.tree.render(&prims)).unwrap_or_default(),
            selected,
            wall_clock_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        previous = Some(pop);
    }
    Ok(())
}
