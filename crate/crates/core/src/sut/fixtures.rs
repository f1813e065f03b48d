//! Built-in fixture programs and their hand-seeded mutants.

use super::{SutError, SutHandle};
use crate::spec_io::{InterfaceSpec, ParamSpec};
use crate::value::{InputVector, ValueKind};

type Program = fn(&[f64]) -> f64;

/// A seeded semantic variant of a fixture.
#[derive(Debug)]
pub struct Mutant {
    pub name: &'static str,
    pub function: Program,
}

#[derive(Debug)]
pub struct Fixture {
    pub id: &'static str,
    pub description: &'static str,
    params: fn() -> Vec<ParamSpec>,
    pub original: Program,
    pub mutants: &'static [Mutant],
    seeds: &'static [&'static [f64]],
}

impl Fixture {
    pub fn parameters(&self) -> Vec<ParamSpec> {
        (self.params)()
    }

    /// Interface spec whose command resolves back to this fixture.
    pub fn spec(&self) -> InterfaceSpec {
        InterfaceSpec::new(&format!("{}{}", super::BUILTIN_PREFIX, self.id), self.parameters(), ValueKind::Double)
            .expect("catalog specs are valid")
    }

    /// Default seed tests for campaigns on this fixture.
    pub fn seed_tests(&self) -> Vec<InputVector> {
        let params = self.parameters();
        self.seeds
            .iter()
            .map(|row| {
                InputVector(
                    params
                        .iter()
                        .zip(row.iter())
                        .map(|(p, &x)| p.parse_token(&x.to_string()).expect("seed tests match their fixture"))
                        .collect(),
                )
            })
            .collect()
    }

    pub fn handle(&'static self, variant: Option<usize>) -> SutHandle {
        SutHandle::Builtin { fixture: self, variant }
    }

    pub fn evaluate(&self, variant: Option<usize>, input: &InputVector) -> Result<f64, SutError> {
        let spec_arity = self.parameters().len();
        if input.len() != spec_arity {
            return Err(SutError::Rejected(format!(
                "{} takes {spec_arity} values, got {}",
                self.id,
                input.len()
            )));
        }
        let args = input
            .values()
            .iter()
            .map(|v| v.as_f64().ok_or_else(|| SutError::Rejected(format!("{} takes numbers, got `{v}`", self.id))))
            .collect::<Result<Vec<_>, _>>()?;
        let program = match variant {
            None => self.original,
            Some(k) => {
                self.mutants
                    .get(k)
                    .ok_or(SutError::UnknownMutant {
                        id: self.id.to_string(),
                        index: k,
                        count: self.mutants.len(),
                    })?
                    .function
            }
        };
        Ok(program(&args))
    }
}

/// Every built-in fixture.
pub fn catalog() -> &'static [Fixture] {
    &CATALOG
}

pub fn find(id: &str) -> Option<&'static Fixture> {
    CATALOG.iter().find(|f| f.id == id)
}

static CATALOG: [Fixture; 4] = [
    Fixture {
        id: "bmi",
        description: "weight / height^2, height and weight in [-100, 100]",
        params: || vec![ParamSpec::double("height", -100.0, 100.0), ParamSpec::double("weight", -100.0, 100.0)],
        original: |a| a[1] / (a[0] * a[0]),
        mutants: &[
            Mutant { name: "weight/height", function: |a| a[1] / a[0] },
            Mutant { name: "weight*height^2", function: |a| a[1] * (a[0] * a[0]) },
            Mutant { name: "weight/(height+height)", function: |a| a[1] / (a[0] + a[0]) },
            Mutant { name: "(weight+1)/height^2", function: |a| (a[1] + 1.0) / (a[0] * a[0]) },
            Mutant { name: "(weight-1)/height^2", function: |a| (a[1] - 1.0) / (a[0] * a[0]) },
            Mutant { name: "-weight/height^2", function: |a| -a[1] / (a[0] * a[0]) },
            Mutant { name: "weight/(height^2+1)", function: |a| a[1] / (a[0] * a[0] + 1.0) },
            Mutant { name: "weight/(height^2-1)", function: |a| a[1] / (a[0] * a[0] - 1.0) },
            Mutant { name: "weight/((height+1)*height)", function: |a| a[1] / ((a[0] + 1.0) * a[0]) },
            Mutant { name: "height/weight^2", function: |a| a[0] / (a[1] * a[1]) },
            Mutant { name: "weight-height^2", function: |a| a[1] - a[0] * a[0] },
            Mutant { name: "weight/height^3", function: |a| a[1] / (a[0] * a[0] * a[0]) },
        ],
        seeds: &[&[1.7, 50.0], &[1.8, 70.0], &[1.9, 100.0], &[1.7, 110.0], &[0.0, 5.0], &[5.0, 0.0]],
    },
    Fixture {
        id: "piecewise",
        description: "x < -10: 2x+30; x <= 25: x^2/20; otherwise 100-x, x in [-100, 100]",
        params: || vec![ParamSpec::double("x", -100.0, 100.0)],
        original: |a| piecewise(a[0], -10.0, 25.0),
        mutants: &[
            Mutant { name: "first boundary -10 -> -5", function: |a| piecewise(a[0], -5.0, 25.0) },
            Mutant { name: "second boundary 25 -> 30", function: |a| piecewise(a[0], -10.0, 30.0) },
            Mutant { name: "second boundary 25 -> 20", function: |a| piecewise(a[0], -10.0, 20.0) },
            Mutant {
                name: "2x+31 in the first branch",
                function: |a| if a[0] < -10.0 { 2.0 * a[0] + 31.0 } else { piecewise(a[0], -10.0, 25.0) },
            },
            Mutant {
                name: "2x-30 in the first branch",
                function: |a| if a[0] < -10.0 { 2.0 * a[0] - 30.0 } else { piecewise(a[0], -10.0, 25.0) },
            },
            Mutant {
                name: "x^2/19 in the middle branch",
                function: |a| {
                    let x = a[0];
                    if !(-10.0..=25.0).contains(&x) { piecewise(x, -10.0, 25.0) } else { x * x / 19.0 }
                },
            },
            Mutant {
                name: "x^2/20+1 in the middle branch",
                function: |a| {
                    let x = a[0];
                    if !(-10.0..=25.0).contains(&x) { piecewise(x, -10.0, 25.0) } else { x * x / 20.0 + 1.0 }
                },
            },
            Mutant {
                name: "101-x in the last branch",
                function: |a| if a[0] > 25.0 { 101.0 - a[0] } else { piecewise(a[0], -10.0, 25.0) },
            },
            Mutant {
                name: "100+x in the last branch",
                function: |a| if a[0] > 25.0 { 100.0 + a[0] } else { piecewise(a[0], -10.0, 25.0) },
            },
            Mutant {
                name: "first condition negated",
                function: |a| {
                    let x = a[0];
                    if x >= -10.0 {
                        2.0 * x + 30.0
                    } else if x <= 25.0 {
                        x * x / 20.0
                    } else {
                        100.0 - x
                    }
                },
            },
            Mutant {
                name: "second condition negated",
                function: |a| {
                    let x = a[0];
                    if x < -10.0 {
                        2.0 * x + 30.0
                    } else if x > 25.0 {
                        x * x / 20.0
                    } else {
                        100.0 - x
                    }
                },
            },
        ],
        seeds: &[&[-50.0], &[0.0], &[50.0]],
    },
    Fixture {
        id: "poly3",
        description: "x^3 - 6x^2 + 4x + 12, x in [-10, 10]",
        params: || vec![ParamSpec::double("x", -10.0, 10.0)],
        original: |a| cubic(a[0], 1.0, -6.0, 4.0, 12.0),
        mutants: &[
            Mutant { name: "constant 12 -> 13", function: |a| cubic(a[0], 1.0, -6.0, 4.0, 13.0) },
            Mutant { name: "constant 12 -> 11", function: |a| cubic(a[0], 1.0, -6.0, 4.0, 11.0) },
            Mutant { name: "constant 12 -> -12", function: |a| cubic(a[0], 1.0, -6.0, 4.0, -12.0) },
            Mutant { name: "-6x^2 -> -5x^2", function: |a| cubic(a[0], 1.0, -5.0, 4.0, 12.0) },
            Mutant { name: "-6x^2 -> +6x^2", function: |a| cubic(a[0], 1.0, 6.0, 4.0, 12.0) },
            Mutant { name: "+4x -> -4x", function: |a| cubic(a[0], 1.0, -6.0, -4.0, 12.0) },
            Mutant { name: "+4x -> +5x", function: |a| cubic(a[0], 1.0, -6.0, 5.0, 12.0) },
            Mutant { name: "x^3 -> -x^3", function: |a| cubic(a[0], -1.0, -6.0, 4.0, 12.0) },
            Mutant { name: "x^3 -> x^2", function: |a| cubic(a[0], 0.0, -5.0, 4.0, 12.0) },
            Mutant { name: "6x^2 -> 6x", function: |a| cubic(a[0], 1.0, 0.0, -2.0, 12.0) },
            Mutant { name: "4x -> 4", function: |a| cubic(a[0], 1.0, -6.0, 0.0, 16.0) },
            Mutant { name: "absolute value of the result", function: |a| cubic(a[0], 1.0, -6.0, 4.0, 12.0).abs() },
        ],
        seeds: &[&[-5.0], &[0.0], &[5.0]],
    },
    Fixture {
        id: "binom_small",
        description: "binomial coefficient C(n, k) as a double, 0 when k > n, n and k in [0, 30]",
        params: || vec![ParamSpec::integer("n", 0, 30), ParamSpec::integer("k", 0, 30)],
        original: |a| binom(a[0] as i64, a[1] as i64),
        mutants: &[
            Mutant {
                name: "k > n yields 1",
                function: |a| if a[1] > a[0] { 1.0 } else { binom(a[0] as i64, a[1] as i64) },
            },
            Mutant { name: "k -> k+1", function: |a| binom(a[0] as i64, a[1] as i64 + 1) },
            Mutant { name: "n -> n+1", function: |a| binom(a[0] as i64 + 1, a[1] as i64) },
            Mutant { name: "n -> n-1", function: |a| binom(a[0] as i64 - 1, a[1] as i64) },
            Mutant {
                name: "k >= n yields 0",
                function: |a| if a[1] >= a[0] { 0.0 } else { binom(a[0] as i64, a[1] as i64) },
            },
            Mutant { name: "result + 1", function: |a| binom(a[0] as i64, a[1] as i64) + 1.0 },
            Mutant { name: "result - 1", function: |a| binom(a[0] as i64, a[1] as i64) - 1.0 },
            Mutant { name: "divide before multiply", function: |a| binom_divide_first(a[0] as i64, a[1] as i64) },
            Mutant { name: "one factor short", function: |a| binom_short_loop(a[0] as i64, a[1] as i64) },
            Mutant {
                name: "k == 0 yields 0",
                function: |a| if a[1] == 0.0 { 0.0 } else { binom(a[0] as i64, a[1] as i64) },
            },
            Mutant {
                name: "k == n yields n",
                function: |a| if a[1] == a[0] { a[0] } else { binom(a[0] as i64, a[1] as i64) },
            },
        ],
        seeds: &[&[10.0, 3.0], &[5.0, 5.0], &[3.0, 7.0]],
    },
];

fn piecewise(x: f64, low: f64, high: f64) -> f64 {
    if x < low {
        2.0 * x + 30.0
    } else if x <= high {
        x * x / 20.0
    } else {
        100.0 - x
    }
}

fn cubic(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    ((a * x + b) * x + c) * x + d
}

fn binom(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c as f64
}

fn binom_divide_first(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let mut c: u128 = 1;
    for i in 0..k {
        c = c / (i + 1) as u128 * (n - i) as u128;
    }
    c as f64
}

fn binom_short_loop(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return 0.0;
    }
    let mut c: u128 = 1;
    for i in 0..k.saturating_sub(1) {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::sample_random_input;
    use crate::sut::Sut;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn catalog_shape() {
        let ids: Vec<_> = catalog().iter().map(|f| f.id).collect();
        assert_eq!(ids, ["bmi", "piecewise", "poly3", "binom_small"]);
        for f in catalog() {
            assert!(f.mutants.len() >= 10, "{}", f.id);
            assert!(!f.seed_tests().is_empty());
            f.spec().validate().unwrap();
            for s in f.seed_tests() {
                f.spec().check_input(&s).unwrap();
            }
        }
        assert_eq!(find("bmi").unwrap().parameters().len(), 2);
    }

    #[test]
    fn reference_values() {
        let bmi = find("bmi").unwrap();
        let at = |v: Option<usize>, h: f64, w: f64| bmi.evaluate(v, &InputVector::doubles(&[h, w])).unwrap();
        assert!((at(None, 1.7, 50.0) - 50.0 / 2.89).abs() < 1e-12);
        assert_eq!(at(None, 0.0, 5.0), f64::INFINITY);
        assert!((at(Some(0), 1.7, 50.0) - 29.4118).abs() < 1e-4);
        assert_eq!(find("bmi").unwrap().mutants[0].name, "weight/height");

        let pw = find("piecewise").unwrap();
        let p = |x: f64| pw.evaluate(None, &InputVector::doubles(&[x])).unwrap();
        assert_eq!((p(-20.0), p(-10.0), p(10.0), p(25.0), p(30.0)), (-10.0, 5.0, 5.0, 31.25, 70.0));

        let poly = find("poly3").unwrap();
        assert_eq!(poly.evaluate(None, &InputVector::doubles(&[2.0])).unwrap(), 8.0 - 24.0 + 8.0 + 12.0);

        let b = find("binom_small").unwrap();
        let c = |n: i64, k: i64| {
            b.evaluate(None, &InputVector(vec![crate::value::Value::Integer(n), crate::value::Value::Integer(k)]))
                .unwrap()
        };
        assert_eq!((c(5, 2), c(30, 15), c(3, 7), c(0, 0)), (10.0, 155117520.0, 0.0, 1.0));
    }

    #[test]
    fn binom_matches_pascal() {
        let mut row = vec![1u64];
        for n in 0..=30i64 {
            for k in 0..=30i64 {
                let expected = row.get(k as usize).copied().unwrap_or(0) as f64;
                assert_eq!(binom(n, k), expected, "C({n},{k})");
            }
            let mut next = vec![1u64; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
    }

    #[test]
    fn every_mutant_is_distinguishable() {
        for f in catalog() {
            let spec = f.spec();
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            let inputs: Vec<_> = (0..10_000).map(|_| sample_random_input(&spec, &mut rng)).collect();
            for (k, m) in f.mutants.iter().enumerate() {
                let differs = inputs.iter().any(|u| {
                    let o = f.evaluate(None, u).unwrap();
                    let x = f.evaluate(Some(k), u).unwrap();
                    !(o == x || (o.is_nan() && x.is_nan()))
                });
                assert!(differs, "{}: {}", f.id, m.name);
            }
        }
    }

    #[test]
    fn handles_execute_variants() {
        let h = find("bmi").unwrap().handle(Some(0));
        assert!((h.execute(&InputVector::doubles(&[2.0, 50.0])).unwrap() - 25.0).abs() < 1e-12);
        assert!(matches!(
            find("bmi").unwrap().evaluate(None, &InputVector::doubles(&[1.0])),
            Err(SutError::Rejected(_))
        ));
    }
}
