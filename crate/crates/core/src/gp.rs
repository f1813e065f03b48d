//! Strongly-typed genetic programming: evolves a population of expression
//! trees that reproduce the observed outputs of the system under test.
//!
//! One generation keeps the best individual unchanged and fills the rest of
//! the population with offspring of tournament winners: subtree crossover at
//! a type-compatible pair of nodes, node mutation, or plain reproduction.
//! Fitness is the mean absolute error between sanitized predictions and
//! sanitized observations. Random draws all happen on the calling thread in
//! a fixed order; only fitness evaluation runs in parallel.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{
    evaluate_f64, random_terminal, random_tree, random_tree_with, ExprError, ExprTree, GrowMethod,
    Primitives, Terminal, DEFAULT_MAX_DEPTH,
};
use crate::qbc::{note_sanitized, sanitize, DEFAULT_SUBSTITUTION};
use crate::value::InputVector;

/// Crossovers that would exceed the depth cap are retried this many times
/// before the first parent is reproduced instead.
pub const CROSSOVER_RETRIES: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GpError {
    #[error("the training set is empty")]
    EmptyTraining,
    #[error("the population is empty")]
    EmptyPopulation,
    #[error("invalid GP configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// One labeled data point: an input and the output the SUT produced for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Execution {
    pub input: InputVector,
    pub observed: f64,
}

impl Execution {
    pub fn new(input: InputVector, observed: f64) -> Self {
        Execution { input, observed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct GpConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub max_depth: usize,
    pub tournament_size: usize,
    pub max_generations: usize,
    pub stagnation_window: usize,
    /// Replacement for non-finite predictions and observations.
    pub substitution_value: f64,
}

impl Default for GpConfig {
    fn default() -> Self {
        GpConfig {
            population_size: 800,
            crossover_rate: 0.9,
            mutation_rate: 0.1,
            max_depth: DEFAULT_MAX_DEPTH,
            tournament_size: 6,
            max_generations: 100,
            stagnation_window: 15,
            substitution_value: DEFAULT_SUBSTITUTION,
        }
    }
}

impl GpConfig {
    pub fn validate(&self) -> Result<(), GpError> {
        let bad = |m: &str| Err(GpError::InvalidConfig(m.to_string()));
        if self.population_size == 0 {
            return bad("populationSize must be positive");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("crossoverRate and mutationRate must be probabilities");
        }
        if self.crossover_rate + self.mutation_rate > 1.0 + 1e-12 {
            return bad("crossoverRate + mutationRate must not exceed 1");
        }
        if self.max_depth == 0 {
            return bad("maxDepth must be positive");
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return bad("tournamentSize must be in 1..=populationSize");
        }
        if self.max_generations == 0 || self.stagnation_window == 0 {
            return bad("maxGenerations and stagnationWindow must be positive");
        }
        if !self.substitution_value.is_finite() {
            return bad("substitutionValue must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredIndividual {
    pub tree: ExprTree,
    pub fitness_error: f64,
    pub size: usize,
}

impl ScoredIndividual {
    fn new(tree: ExprTree, fitness_error: f64) -> Self {
        let size = tree.size();
        ScoredIndividual {
            tree,
            fitness_error,
            size,
        }
    }
}

/// Members sorted ascending by fitness error, ties by tree size.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<ScoredIndividual>,
    pub generation: usize,
}

impl Population {
    fn from_scored(mut members: Vec<ScoredIndividual>, generation: usize) -> Self {
        members.sort_by(|a, b| a.fitness_error.total_cmp(&b.fitness_error).then(a.size.cmp(&b.size)));
        Population { members, generation }
    }

    pub fn best(&self) -> Option<&ScoredIndividual> {
        self.members.first()
    }

    pub fn best_error(&self) -> f64 {
        self.members.first().map_or(f64::INFINITY, |m| m.fitness_error)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The `k` fittest trees.
    pub fn top(&self, k: usize) -> Vec<ExprTree> {
        self.members.iter().take(k).map(|m| m.tree.clone()).collect()
    }

    /// JSON audit record of the `k` fittest models.
    pub fn dump(&self, k: usize, prims: &Primitives) -> serde_json::Value {
        let models: Vec<_> = self
            .members
            .iter()
            .take(k)
            .enumerate()
            .map(|(rank, m)| {
                serde_json::json!({
                    "rank": rank,
                    "expression": m.tree.render(prims),
                    "fitnessError": m.fitness_error,
                    "size": m.size,
                    "depth": m.tree.depth(),
                })
            })
            .collect();
        serde_json::json!({ "generation": self.generation, "models": models })
    }
}

/// Mean absolute error between sanitized predictions and sanitized observations.
pub fn fitness(tree: &ExprTree, train: &[Execution], prims: &Primitives, substitution: f64) -> Result<f64, GpError> {
    if train.is_empty() {
        return Err(GpError::EmptyTraining);
    }
    let mut errors = Vec::with_capacity(train.len());
    for e in train {
        let predicted = note_sanitized(sanitize(evaluate_f64(tree, e.input.values(), prims)?, substitution));
        let observed = note_sanitized(sanitize(e.observed, substitution));
        errors.push((predicted - observed).abs());
    }
    // Summing in sorted order makes the result independent of training order.
    errors.sort_unstable_by(f64::total_cmp);
    Ok(errors.iter().sum::<f64>() / train.len() as f64)
}

fn score_all(
    trees: Vec<ExprTree>,
    train: &[Execution],
    prims: &Primitives,
    substitution: f64,
) -> Result<Vec<ScoredIndividual>, GpError> {
    trees
        .into_par_iter()
        .map(|t| fitness(&t, train, prims, substitution).map(|f| ScoredIndividual::new(t, f)))
        .collect()
}

/// Ramped half-and-half: depths cycle through 2..=max_depth while the method
/// alternates between full and grow.
pub fn initial_trees<R: Rng + ?Sized>(
    cfg: &GpConfig,
    prims: &Primitives,
    rng: &mut R,
) -> Result<Vec<ExprTree>, GpError> {
    let root = prims.output_kind();
    let ramps = cfg.max_depth.saturating_sub(1).max(1);
    (0..cfg.population_size)
        .map(|j| {
            let depth = if cfg.max_depth == 1 { 1 } else { 2 + (j / 2) % ramps };
            let method = if j % 2 == 0 { GrowMethod::Full } else { GrowMethod::Grow };
            Ok(random_tree_with(root, depth, method, prims, rng)?)
        })
        .collect()
}

/// Scores a set of trees into a sorted generation-0 population.
pub fn seed_population(
    trees: Vec<ExprTree>,
    train: &[Execution],
    cfg: &GpConfig,
    prims: &Primitives,
) -> Result<Population, GpError> {
    if train.is_empty() {
        return Err(GpError::EmptyTraining);
    }
    Ok(Population::from_scored(score_all(trees, train, prims, cfg.substitution_value)?, 0))
}

fn tournament<'p, R: Rng + ?Sized>(pop: &'p Population, size: usize, rng: &mut R) -> &'p ScoredIndividual {
    // Members are sorted, so the lowest sampled index wins.
    let k = size.min(pop.len());
    let winner = sample(rng, pop.len(), k).iter().min().expect("non-empty tournament");
    &pop.members[winner]
}

/// Subtree crossover at a uniformly chosen type-compatible node pair. Returns
/// `None` when every attempt would exceed `max_depth`.
pub fn crossover<R: Rng + ?Sized>(
    receiver: &ExprTree,
    donor: &ExprTree,
    max_depth: usize,
    rng: &mut R,
) -> Option<ExprTree> {
    let recv_nodes = receiver.node_kinds();
    let donor_nodes = donor.node_kinds();
    let mut donor_counts = [0usize; 4];
    for (k, _) in &donor_nodes {
        donor_counts[k.index()] += 1;
    }
    let total: usize = recv_nodes.iter().map(|(k, _)| donor_counts[k.index()]).sum();
    if total == 0 {
        return None;
    }
    for _ in 0..=CROSSOVER_RETRIES {
        let mut pick = rng.gen_range(0..total);
        let mut at = 0;
        for (i, (k, _)) in recv_nodes.iter().enumerate() {
            let w = donor_counts[k.index()];
            if pick < w {
                at = i;
                break;
            }
            pick -= w;
        }
        let (kind, level) = recv_nodes[at];
        let nth = rng.gen_range(0..donor_counts[kind.index()]);
        let from = donor_nodes
            .iter()
            .enumerate()
            .filter(|(_, (k, _))| *k == kind)
            .nth(nth)
            .map(|(i, _)| i)
            .expect("counted node");
        let graft = donor.subtree(from).expect("valid index");
        if level - 1 + graft.depth() <= max_depth {
            return Some(receiver.replace(at, graft.clone()));
        }
    }
    None
}

/// Changes one uniformly chosen node: terminals get a new value, non-terminals
/// are replaced by a fresh random subtree of the same kind.
pub fn mutate<R: Rng + ?Sized>(
    tree: &ExprTree,
    max_depth: usize,
    prims: &Primitives,
    rng: &mut R,
) -> Result<ExprTree, GpError> {
    let nodes = tree.node_kinds();
    let at = rng.gen_range(0..nodes.len());
    let (kind, level) = nodes[at];
    let replacement = match tree.subtree(at).expect("valid index") {
        ExprTree::Leaf(Terminal::Free(_)) => ExprTree::Leaf(Terminal::numeric(prims.sample_free(kind, rng))),
        ExprTree::Leaf(_) => ExprTree::Leaf(random_terminal(kind, prims, rng)?),
        ExprTree::Node { .. } => {
            let budget = max_depth.saturating_sub(level - 1).max(1);
            random_tree(kind, budget, prims, rng)?
        }
    };
    Ok(tree.replace(at, replacement))
}

/// Produces the next generation. The previous best individual is carried
/// over unchanged, so the best error never increases.
pub fn evolve_generation<R: Rng + ?Sized>(
    pop: &Population,
    train: &[Execution],
    cfg: &GpConfig,
    prims: &Primitives,
    rng: &mut R,
) -> Result<Population, GpError> {
    cfg.validate()?;
    let elite = pop.best().ok_or(GpError::EmptyPopulation)?;
    if train.is_empty() {
        return Err(GpError::EmptyTraining);
    }
    let mut offspring = Vec::with_capacity(cfg.population_size.saturating_sub(1));
    while offspring.len() + 1 < cfg.population_size {
        let r: f64 = rng.gen();
        let child = if r < cfg.crossover_rate {
            let a = tournament(pop, cfg.tournament_size, rng);
            let b = tournament(pop, cfg.tournament_size, rng);
            crossover(&a.tree, &b.tree, cfg.max_depth, rng).unwrap_or_else(|| a.tree.clone())
        } else if r < cfg.crossover_rate + cfg.mutation_rate {
            let a = tournament(pop, cfg.tournament_size, rng);
            mutate(&a.tree, cfg.max_depth, prims, rng)?
        } else {
            tournament(pop, cfg.tournament_size, rng).tree.clone()
        };
        offspring.push(child);
    }
    let mut members = Vec::with_capacity(cfg.population_size);
    members.push(elite.clone());
    members.extend(score_all(offspring, train, prims, cfg.substitution_value)?);
    Ok(Population::from_scored(members, pop.generation + 1))
}

/// Outcome of one inference run together with the best error of every
/// generation, starting with the initial population.
#[derive(Debug, Clone)]
pub struct Inference {
    pub population: Population,
    pub best_history: Vec<f64>,
}

/// Evolves a fresh random population until a perfect fit is found, the best
/// error stalls for `stagnation_window` generations, or `max_generations`
/// generations have run.
pub fn infer<R: Rng + ?Sized>(
    train: &[Execution],
    cfg: &GpConfig,
    prims: &Primitives,
    rng: &mut R,
) -> Result<Inference, GpError> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(GpError::EmptyTraining);
    }
    let trees = initial_trees(cfg, prims, rng)?;
    infer_from(trees, train, cfg, prims, rng)
}

/// Like [`infer`], starting from the given trees instead of a random
/// population. Missing members are filled with random trees.
pub fn infer_from<R: Rng + ?Sized>(
    mut trees: Vec<ExprTree>,
    train: &[Execution],
    cfg: &GpConfig,
    prims: &Primitives,
    rng: &mut R,
) -> Result<Inference, GpError> {
    cfg.validate()?;
    trees.truncate(cfg.population_size);
    if trees.len() < cfg.population_size {
        let fill = initial_trees(cfg, prims, rng)?;
        let missing = cfg.population_size - trees.len();
        trees.extend(fill.into_iter().take(missing));
    }
    let mut pop = seed_population(trees, train, cfg, prims)?;
    let mut best_history = vec![pop.best_error()];
    let mut best = pop.best_error();
    let mut stalled = 0;
    while pop.generation < cfg.max_generations && best > 0.0 && stalled < cfg.stagnation_window {
        pop = evolve_generation(&pop, train, cfg, prims, rng)?;
        let now = pop.best_error();
        best_history.push(now);
        if now < best {
            best = now;
            stalled = 0;
        } else {
            stalled += 1;
        }
    }
    Ok(Inference {
        population: pop,
        best_history,
    })
}

/// Re-scores every member on `train` and returns the most accurate one; ties
/// go to the smaller tree, then to the earlier member.
pub fn pick_best(
    pop: &Population,
    train: &[Execution],
    prims: &Primitives,
    substitution: f64,
) -> Result<ScoredIndividual, GpError> {
    if pop.is_empty() {
        return Err(GpError::EmptyPopulation);
    }
    let scores: Vec<f64> = pop
        .members
        .par_iter()
        .map(|m| fitness(&m.tree, train, prims, substitution))
        .collect::<Result<_, _>>()?;
    let best = (0..pop.len())
        .min_by(|&i, &j| {
            scores[i]
                .total_cmp(&scores[j])
                .then(pop.members[i].size.cmp(&pop.members[j].size))
                .then(i.cmp(&j))
        })
        .expect("non-empty");
    Ok(ScoredIndividual::new(pop.members[best].tree.clone(), scores[best]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_tree;
    use crate::spec_io::{InterfaceSpec, ParamSpec};
    use crate::value::{Value, ValueKind};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bmi_prims() -> Primitives {
        crate::expr::tests::bmi_prims()
    }

    fn bmi_train() -> Vec<Execution> {
        [(1.7, 50.0), (1.8, 70.0), (1.9, 100.0), (1.7, 110.0)]
            .iter()
            .map(|&(h, w)| Execution::new(InputVector::doubles(&[h, w]), w / (h * h)))
            .collect()
    }

    fn identity_problem() -> (Primitives, Vec<Execution>) {
        let spec = InterfaceSpec::new("id", vec![ParamSpec::double("x", -10.0, 10.0)], ValueKind::Double).unwrap();
        let train = (0..30)
            .map(|i| {
                let x = -10.0 + 20.0 * i as f64 / 29.0;
                Execution::new(InputVector::doubles(&[x]), x)
            })
            .collect();
        (Primitives::from_spec(&spec), train)
    }

    // Straightforward re-statement of the fitness definition.
    fn fitness_oracle(tree: &ExprTree, train: &[Execution], prims: &Primitives) -> f64 {
        let clean = |x: f64| if x.is_finite() { x } else { 10_000_000.0 };
        let diffs: Vec<f64> = train
            .iter()
            .map(|e| {
                let p = crate::expr::evaluate(tree, e.input.values(), prims).unwrap().as_f64();
                (clean(p) - clean(e.observed)).abs()
            })
            .collect();
        diffs.iter().sum::<f64>() / diffs.len() as f64
    }

    #[test]
    fn perfect_model_scores_zero() {
        let p = bmi_prims();
        let t = parse_tree("Div(weight,Mult(height,height))", ValueKind::Double, &p).unwrap();
        assert_eq!(fitness(&t, &bmi_train(), &p, 1e7).unwrap(), 0.0);
    }

    #[test]
    fn constant_zero_against_bmi() {
        let p = bmi_prims();
        let zero = ExprTree::double(0.0);
        let f = fitness(&zero, &bmi_train(), &p, 1e7).unwrap();
        let expected = bmi_train().iter().map(|e| e.observed.abs()).sum::<f64>() / 4.0;
        assert!((f - expected).abs() < 1e-12);
        assert!((f - 26.167).abs() < 1e-3, "{f}");
    }

    #[test]
    fn non_finite_predictions_are_substituted() {
        let p = bmi_prims();
        let inf = parse_tree("Div(1.0,0.0)", ValueKind::Double, &p).unwrap();
        let train = [Execution::new(InputVector::doubles(&[1.0, 1.0]), 5.0)];
        assert_eq!(fitness(&inf, &train, &p, 1e7).unwrap(), 9_999_995.0);
        let both = [Execution::new(InputVector::doubles(&[1.0, 1.0]), f64::NAN)];
        assert_eq!(fitness(&inf, &both, &p, 1e7).unwrap(), 0.0);
        assert_eq!(fitness(&inf, &[], &p, 1e7), Err(GpError::EmptyTraining));
    }

    #[test]
    fn fitness_matches_oracle_and_ignores_order() {
        let p = bmi_prims();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let train: Vec<Execution> = (0..40)
            .map(|_| {
                let h: f64 = rng.gen_range(-100.0..100.0);
                let w: f64 = rng.gen_range(-100.0..100.0);
                Execution::new(InputVector::doubles(&[h, w]), w / (h * h))
            })
            .collect();
        for _ in 0..300 {
            let t = random_tree(ValueKind::Double, 6, &p, &mut rng).unwrap();
            let f = fitness(&t, &train, &p, 1e7).unwrap();
            let o = fitness_oracle(&t, &train, &p);
            assert!((f - o).abs() <= 1e-12 * o.abs().max(1e-300), "{f} vs {o}");
            let mut shuffled = train.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(fitness(&t, &shuffled, &p, 1e7).unwrap().to_bits(), f.to_bits());
        }
    }

    #[test]
    fn elitism_keeps_zero_error() {
        let p = bmi_prims();
        let perfect = parse_tree("Div(weight,Mult(height,height))", ValueKind::Double, &p).unwrap();
        let cfg = GpConfig {
            population_size: 20,
            ..GpConfig::default()
        };
        let mut pop = seed_population(vec![perfect; 20], &bmi_train(), &cfg, &p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            pop = evolve_generation(&pop, &bmi_train(), &cfg, &p, &mut rng).unwrap();
            assert_eq!(pop.best_error(), 0.0);
            assert_eq!(pop.len(), 20);
        }
    }

    #[test]
    fn offspring_stay_well_typed() {
        let spec = InterfaceSpec::new(
            "mixed",
            vec![
                ParamSpec::double("x", -5.0, 5.0),
                ParamSpec::integer("n", 0, 9),
                ParamSpec::boolean("flag"),
                ParamSpec::string("colour", &["red", "green"]),
            ],
            ValueKind::Integer,
        )
        .unwrap();
        let p = Primitives::from_spec(&spec);
        let cfg = GpConfig {
            population_size: 30,
            max_depth: 6,
            ..GpConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let train: Vec<Execution> = (0..5)
            .map(|i| {
                let input = InputVector::new(vec![
                    Value::Double(i as f64),
                    Value::Integer(i),
                    Value::Boolean(i % 2 == 0),
                    Value::Str(if i % 2 == 0 { "red" } else { "green" }.into()),
                ]);
                Execution::new(input, i as f64 * 2.0)
            })
            .collect();
        let mut pop = seed_population(initial_trees(&cfg, &p, &mut rng).unwrap(), &train, &cfg, &p).unwrap();
        for _ in 0..100 {
            pop = evolve_generation(&pop, &train, &cfg, &p, &mut rng).unwrap();
            for m in &pop.members {
                p.check(&m.tree, cfg.max_depth).unwrap();
                assert_eq!(m.tree.kind(), ValueKind::Integer);
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = bmi_prims();
        let cfg = GpConfig {
            population_size: 50,
            ..GpConfig::default()
        };
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            let pop = seed_population(initial_trees(&cfg, &p, &mut rng).unwrap(), &bmi_train(), &cfg, &p).unwrap();
            evolve_generation(&pop, &bmi_train(), &cfg, &p, &mut rng).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn constant_target_is_found() {
        let p = bmi_prims();
        let train: Vec<Execution> = bmi_train().into_iter().map(|e| Execution::new(e.input, -1.0)).collect();
        let cfg = GpConfig {
            population_size: 100,
            max_generations: 20,
            ..GpConfig::default()
        };
        let out = infer(&train, &cfg, &p, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(out.population.best_error(), 0.0);
        assert!(out.best_history.len() <= 6, "{:?}", out.best_history);
    }

    #[test]
    fn identity_is_learned_on_most_seeds() {
        let (p, train) = identity_problem();
        let cfg = GpConfig {
            population_size: 200,
            max_generations: 50,
            ..GpConfig::default()
        };
        let solved = (0..10)
            .filter(|&seed| {
                let out = infer(&train, &cfg, &p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
                out.population.best_error() < 1e-6
            })
            .count();
        assert!(solved >= 8, "{solved}/10");
    }

    #[test]
    fn best_error_never_increases() {
        let p = bmi_prims();
        let cfg = GpConfig {
            population_size: 100,
            max_generations: 30,
            ..GpConfig::default()
        };
        for seed in 0..3 {
            let out = infer(&bmi_train(), &cfg, &p, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert!(out.best_history.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(*out.best_history.last().unwrap(), out.population.best_error());
            assert_eq!(out.population.len(), 100);
        }
    }

    #[test]
    fn pick_best_tie_breaks() {
        let p = bmi_prims();
        let train = bmi_train();
        let small = parse_tree("Mult(weight,-1.0)", ValueKind::Double, &p).unwrap();
        let large = parse_tree("Mult(Mult(weight,-1.0),Div(height,height))", ValueKind::Double, &p).unwrap();
        assert_eq!(small.size(), 3);
        assert_eq!(large.size(), 7);
        let pop = Population {
            members: vec![
                ScoredIndividual::new(large.clone(), 0.0),
                ScoredIndividual::new(small.clone(), 0.0),
            ],
            generation: 0,
        };
        assert_eq!(pick_best(&pop, &train, &p, 1e7).unwrap().tree, small);

        let unique = parse_tree("Div(weight,Mult(height,height))", ValueKind::Double, &p).unwrap();
        let pop = Population {
            members: vec![ScoredIndividual::new(large, 0.0), ScoredIndividual::new(unique.clone(), 0.0)],
            generation: 0,
        };
        assert_eq!(pick_best(&pop, &train, &p, 1e7).unwrap().tree, unique);

        let single = Population {
            members: vec![ScoredIndividual::new(small.clone(), 1.0)],
            generation: 0,
        };
        assert_eq!(pick_best(&single, &train, &p, 1e7).unwrap().tree, small);
        let empty = Population {
            members: vec![],
            generation: 0,
        };
        assert_eq!(pick_best(&empty, &train, &p, 1e7), Err(GpError::EmptyPopulation));
    }

    #[test]
    fn config_validation() {
        assert!(GpConfig::default().validate().is_ok());
        let bad = GpConfig {
            crossover_rate: 0.95,
            mutation_rate: 0.1,
            ..GpConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = GpConfig {
            tournament_size: 900,
            ..GpConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
