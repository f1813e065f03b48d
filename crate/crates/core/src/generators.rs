//! Baseline input generators: uniform random sampling and adaptive random
//! testing (max-min distance over a fresh candidate set).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::spec_io::{InterfaceSpec, ParamSpec};
use crate::value::{InputVector, Value, ValueKind};

/// Test generation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Tbc,
    Random,
    Art,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Tbc, Strategy::Random, Strategy::Art];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Tbc => "tbc",
            Strategy::Random => "random",
            Strategy::Art => "art",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tbc" => Ok(Strategy::Tbc),
            "random" => Ok(Strategy::Random),
            "art" => Ok(Strategy::Art),
            _ => Err(format!("unknown strategy `{s}` (expected tbc, random or art)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct ArtConfig {
    pub candidate_set_size: usize,
    /// Divide numeric coordinate differences by the parameter's range.
    pub normalize: bool,
}

impl Default for ArtConfig {
    fn default() -> Self {
        ArtConfig {
            candidate_set_size: 10,
            normalize: false,
        }
    }
}

fn sample_value<R: Rng + ?Sized>(p: &ParamSpec, rng: &mut R) -> Value {
    match p.kind {
        ValueKind::Double => {
            let (lo, hi) = (p.min.unwrap_or(0.0), p.max.unwrap_or(0.0));
            Value::Double(if lo == hi { lo } else { rng.gen_range(lo..=hi) })
        }
        ValueKind::Integer => {
            let (lo, hi) = p.int_range();
            Value::Integer(rng.gen_range(lo..=hi))
        }
        ValueKind::Boolean => Value::Boolean(rng.gen_bool(0.5)),
        ValueKind::String => {
            let values = p.values.as_deref().unwrap_or_default();
            Value::Str(values.choose(rng).cloned().unwrap_or_default())
        }
    }
}

/// One input drawn independently and uniformly from each parameter's domain.
pub fn sample_random_input<R: Rng + ?Sized>(spec: &InterfaceSpec, rng: &mut R) -> InputVector {
    InputVector(spec.parameters.iter().map(|p| sample_value(p, rng)).collect())
}

fn coordinate_gap(p: &ParamSpec, a: &Value, b: &Value, normalize: bool) -> f64 {
    match (a, b) {
        (Value::Str(x), Value::Str(y)) => f64::from(u8::from(x != y)),
        _ => {
            let d = (a.as_f64().unwrap_or(0.0) - b.as_f64().unwrap_or(0.0)).abs();
            let range = match (p.kind, p.min, p.max) {
                (ValueKind::Double | ValueKind::Integer, Some(lo), Some(hi)) if normalize && hi > lo => hi - lo,
                _ => 1.0,
            };
            d / range
        }
    }
}

/// Euclidean distance between two inputs. Booleans count as 0/1 and string
/// coordinates contribute 0 when equal and 1 otherwise.
pub fn distance(spec: &InterfaceSpec, a: &InputVector, b: &InputVector, normalize: bool) -> f64 {
    spec.parameters
        .iter()
        .zip(a.values().iter().zip(b.values()))
        .map(|(p, (x, y))| coordinate_gap(p, x, y, normalize).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Index of the candidate whose nearest executed input is farthest away.
/// Ties go to the lowest index; with nothing executed the first candidate wins.
pub fn art_select_index(
    spec: &InterfaceSpec,
    candidates: &[InputVector],
    executed: &[InputVector],
    cfg: &ArtConfig,
) -> Option<usize> {
    if candidates.is_empty() {
        return None;
    }
    if executed.is_empty() {
        return Some(0);
    }
    let mut best = (0, f64::NEG_INFINITY);
    for (i, c) in candidates.iter().enumerate() {
        let nearest = executed
            .iter()
            .map(|e| distance(spec, c, e, cfg.normalize))
            .fold(f64::INFINITY, f64::min);
        if nearest > best.1 {
            best = (i, nearest);
        }
    }
    Some(best.0)
}

/// Draws a fresh candidate set and returns the ART choice from it.
pub fn art_select<R: Rng + ?Sized>(
    spec: &InterfaceSpec,
    executed: &[InputVector],
    cfg: &ArtConfig,
    rng: &mut R,
) -> InputVector {
    let mut candidates: Vec<InputVector> = (0..cfg.candidate_set_size.max(1))
        .map(|_| sample_random_input(spec, rng))
        .collect();
    let i = art_select_index(spec, &candidates, executed, cfg).expect("non-empty candidate set");
    candidates.swap_remove(i)
}

/// `seeds` followed by `budget` inputs from a non-feedback strategy.
///
/// # Panics
///
/// When called with [`Strategy::Tbc`], which needs a system under test.
pub fn generate_suite<R: Rng + ?Sized>(
    strategy: Strategy,
    spec: &InterfaceSpec,
    seeds: &[InputVector],
    budget: usize,
    cfg: &ArtConfig,
    rng: &mut R,
) -> Vec<InputVector> {
    let mut suite = seeds.to_vec();
    for _ in 0..budget {
        let next = match strategy {
            Strategy::Random => sample_random_input(spec, rng),
            Strategy::Art => art_select(spec, &suite, cfg, rng),
            Strategy::Tbc => panic!("generate_suite handles only random and art"),
        };
        suite.push(next);
    }
    suite
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use super::Strategy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square() -> InterfaceSpec {
        InterfaceSpec::new(
            "f",
            vec![ParamSpec::double("a", 0.0, 10.0), ParamSpec::double("b", 0.0, 10.0)],
            ValueKind::Double,
        )
        .unwrap()
    }

    fn mixed() -> InterfaceSpec {
        InterfaceSpec::new(
            "f",
            vec![
                ParamSpec::double("x", -1.5, 2.5),
                ParamSpec::integer("n", -3, 4),
                ParamSpec::boolean("flag"),
                ParamSpec::string("c", &["red", "green", "blue"]),
            ],
            ValueKind::Double,
        )
        .unwrap()
    }

    #[test]
    fn art_picks_the_far_corner() {
        let spec = square();
        let candidates = vec![
            InputVector::doubles(&[0.0, 0.0]),
            InputVector::doubles(&[10.0, 10.0]),
            InputVector::doubles(&[5.0, 5.0]),
        ];
        let executed = vec![InputVector::doubles(&[0.0, 0.0])];
        assert_eq!(art_select_index(&spec, &candidates, &executed, &ArtConfig::default()), Some(1));
        assert_eq!(art_select_index(&spec, &candidates, &[], &ArtConfig::default()), Some(0));
        assert_eq!(art_select_index(&spec, &[], &executed, &ArtConfig::default()), None);
    }

    #[test]
    fn art_ties_go_low() {
        let spec = square();
        let candidates = vec![InputVector::doubles(&[1.0, 0.0]), InputVector::doubles(&[0.0, 1.0])];
        let executed = vec![InputVector::doubles(&[0.0, 0.0])];
        assert_eq!(art_select_index(&spec, &candidates, &executed, &ArtConfig::default()), Some(0));
    }

    #[test]
    fn mixed_distance() {
        let spec = mixed();
        let a = InputVector(vec![Value::Double(1.0), Value::Integer(2), Value::Boolean(true), Value::Str("red".into())]);
        let b = InputVector(vec![Value::Double(-1.0), Value::Integer(-1), Value::Boolean(false), Value::Str("blue".into())]);
        assert!((distance(&spec, &a, &b, false) - (4.0f64 + 9.0 + 1.0 + 1.0).sqrt()).abs() < 1e-12);
        assert_eq!(distance(&spec, &a, &a, false), 0.0);
        let normalized = distance(&spec, &a, &b, true);
        assert!((normalized - ((2.0f64 / 4.0).powi(2) + (3.0f64 / 7.0).powi(2) + 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn integer_sampling_reaches_both_ends() {
        let spec = mixed();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..2000 {
            if let Value::Integer(n) = sample_random_input(&spec, &mut rng).values()[1] {
                seen.insert(n);
            }
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), (-3..=4).collect::<Vec<_>>());
    }

    #[test]
    fn suites_have_seed_prefix_and_budget() {
        let spec = square();
        let seeds = vec![InputVector::doubles(&[1.0, 1.0])];
        for strategy in [Strategy::Random, Strategy::Art] {
            let a = generate_suite(strategy, &spec, &seeds, 7, &ArtConfig::default(), &mut ChaCha8Rng::seed_from_u64(5));
            let b = generate_suite(strategy, &spec, &seeds, 7, &ArtConfig::default(), &mut ChaCha8Rng::seed_from_u64(5));
            assert_eq!(a.len(), 8);
            assert_eq!(a[0], seeds[0]);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn art_spreads_better_than_random() {
        let spec = square();
        let spread = |suite: &[InputVector]| {
            let mut m = f64::INFINITY;
            for i in 0..suite.len() {
                for j in i + 1..suite.len() {
                    m = m.min(distance(&spec, &suite[i], &suite[j], false));
                }
            }
            m
        };
        let (mut art, mut rnd) = (0.0, 0.0);
        for seed in 0..20 {
            art += spread(&generate_suite(Strategy::Art, &spec, &[], 20, &ArtConfig::default(), &mut ChaCha8Rng::seed_from_u64(seed)));
            rnd += spread(&generate_suite(Strategy::Random, &spec, &[], 20, &ArtConfig::default(), &mut ChaCha8Rng::seed_from_u64(seed)));
        }
        assert!(art > rnd);
    }

    #[test]
    fn strategy_names() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("greedy".parse::<Strategy>().is_err());
    }

    proptest! {
        #[test]
        fn random_inputs_are_admissible(seed in any::<u64>()) {
            let spec = mixed();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20 {
                let u = sample_random_input(&spec, &mut rng);
                for (p, v) in spec.parameters.iter().zip(u.values()) {
                    prop_assert!(p.admits(v), "{:?} {:?}", p, v);
                }
            }
        }

        #[test]
        fn art_choice_maximizes_min_distance(seed in any::<u64>()) {
            let spec = square();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let executed: Vec<_> = (0..5).map(|_| sample_random_input(&spec, &mut rng)).collect();
            let candidates: Vec<_> = (0..10).map(|_| sample_random_input(&spec, &mut rng)).collect();
            let pick = art_select_index(&spec, &candidates, &executed, &ArtConfig::default()).unwrap();
            let nearest = |c: &InputVector| executed.iter().map(|e| {
                let d: Vec<f64> = c.values().iter().zip(e.values()).map(|(a, b)| a.as_f64().unwrap() - b.as_f64().unwrap()).collect();
                (d[0] * d[0] + d[1] * d[1]).sqrt()
            }).fold(f64::INFINITY, f64::min);
            for (i, c) in candidates.iter().enumerate() {
                prop_assert!(nearest(&candidates[pick]) >= nearest(c));
                if i < pick {
                    prop_assert!(nearest(&candidates[pick]) > nearest(c));
                }
            }
        }
    }
}
