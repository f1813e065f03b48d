use std::collections::BTreeMap;

use serde::Serialize;

use super::{rank_sum, CampaignReport};
use crate::generators::Strategy;

pub const CSV_HEADER: [&str; 6] = ["strategy", "seed", "iteration", "suite_size", "kills", "best_fitness_error"];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StrategySummary {
    pub runs: usize,
    pub final_kills: Vec<usize>,
    pub mean_final_kills: f64,
}

/// Rank-sum comparison of final kill counts between two strategies.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairwiseTest {
    pub a: Strategy,
    pub b: Strategy,
    pub u: f64,
    /// Small when `a` kills fewer mutants than `b`.
    pub p_a_less: f64,
    /// Small when `a` kills more mutants than `b`.
    pub p_a_greater: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub fixture: Option<String>,
    pub mutant_count: Option<usize>,
    pub strategies: BTreeMap<Strategy, StrategySummary>,
    pub pairwise: Vec<PairwiseTest>,
    /// Whether TBC's mean final kills is at least every baseline's; reported
    /// only when TBC and a baseline are both present.
    pub tbc_mean_at_least_baselines: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub summary: Summary,
}

impl Report {
    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes") + "\n"
    }
}

/// CSV with one row per strategy, seed and iteration, plus a summary of final
/// kills per strategy and pairwise rank-sum tests.
pub fn emit_report(reports: &[CampaignReport]) -> Report {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in reports {
        for p in &r.per_iteration {
            w.write_record([
                r.strategy.name().to_string(),
                r.seed.to_string(),
                p.iteration.to_string(),
                p.suite_size.to_string(),
                p.kills_cumulative.to_string(),
                p.best_fitness_error.map(|x| x.to_string()).unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
    }
    let csv = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv");

    let mut finals: BTreeMap<Strategy, Vec<usize>> = BTreeMap::new();
    for r in reports {
        finals.entry(r.strategy).or_default().push(r.final_kills());
    }
    let strategies: BTreeMap<Strategy, StrategySummary> = finals
        .iter()
        .map(|(&s, ks)| {
            (
                s,
                StrategySummary {
                    runs: ks.len(),
                    final_kills: ks.clone(),
                    mean_final_kills: ks.iter().sum::<usize>() as f64 / ks.len() as f64,
                },
            )
        })
        .collect();
    let keys: Vec<Strategy> = finals.keys().copied().collect();
    let mut pairwise = Vec::new();
    for (i, &a) in keys.iter().enumerate() {
        for &b in &keys[i + 1..] {
            let xa: Vec<f64> = finals[&a].iter().map(|&k| k as f64).collect();
            let xb: Vec<f64> = finals[&b].iter().map(|&k| k as f64).collect();
            let less = rank_sum(&xa, &xb).expect("non-empty finite samples");
            let greater = rank_sum(&xb, &xa).expect("non-empty finite samples");
            pairwise.push(PairwiseTest {
                a,
                b,
                u: less.u,
                p_a_less: less.p_one_sided,
                p_a_greater: greater.p_one_sided,
                exact: less.exact,
            });
        }
    }
    let tbc_mean_at_least_baselines = strategies.get(&Strategy::Tbc).and_then(|t| {
        let others: Vec<f64> = strategies
            .iter()
            .filter(|(s, _)| **s != Strategy::Tbc)
            .map(|(_, v)| v.mean_final_kills)
            .collect();
        (!others.is_empty()).then(|| others.iter().all(|&m| t.mean_final_kills >= m))
    });
    Report {
        csv,
        summary: Summary {
            fixture: reports.first().map(|r| r.fixture.clone()),
            mutant_count: reports.first().map(|r| r.mutant_count),
            strategies,
            pairwise,
            tbc_mean_at_least_baselines,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::IterationPoint;

    fn report(strategy: Strategy, seed: u64, kills: &[usize]) -> CampaignReport {
        CampaignReport {
            strategy,
            seed,
            fixture: "bmi".into(),
            mutant_count: 12,
            per_iteration: kills
                .iter()
                .enumerate()
                .map(|(n, &k)| IterationPoint {
                    iteration: n,
                    suite_size: 6 + 5 * n,
                    kills_cumulative: k,
                    best_fitness_error: (strategy == Strategy::Tbc && n > 0).then_some(1.5),
                })
                .collect(),
            executions: Vec::new(),
        }
    }

    #[test]
    fn empty_input_is_header_only() {
        let r = emit_report(&[]);
        assert_eq!(r.csv, "strategy,seed,iteration,suite_size,kills,best_fitness_error\n");
        assert!(r.summary.strategies.is_empty());
        assert!(r.summary.pairwise.is_empty());
        assert_eq!(r.summary.tbc_mean_at_least_baselines, None);
    }

    #[test]
    fn rows_and_means() {
        let reports = vec![
            report(Strategy::Tbc, 1, &[3, 5, 9]),
            report(Strategy::Tbc, 2, &[3, 6, 8]),
            report(Strategy::Random, 1, &[3, 4, 5]),
            report(Strategy::Random, 2, &[3, 3, 4]),
        ];
        let r = emit_report(&reports);
        let lines: Vec<&str> = r.csv.lines().collect();
        assert_eq!(lines.len(), 1 + 4 * 3);
        assert_eq!(lines[1], "tbc,1,0,6,3,");
        assert_eq!(lines[2], "tbc,1,1,11,5,1.5");
        assert_eq!(lines[7], "random,1,0,6,3,");

        let mut rdr = csv::Reader::from_reader(r.csv.as_bytes());
        let mut finals: BTreeMap<(String, u64), (usize, usize)> = BTreeMap::new();
        for row in rdr.records() {
            let row = row.unwrap();
            let key = (row[0].to_string(), row[1].parse().unwrap());
            let (it, kills): (usize, usize) = (row[2].parse().unwrap(), row[4].parse().unwrap());
            let e = finals.entry(key).or_insert((0, 0));
            if it >= e.0 {
                *e = (it, kills);
            }
        }
        for (s, summary) in &r.summary.strategies {
            let ks: Vec<usize> = finals.iter().filter(|((n, _), _)| n == s.name()).map(|(_, v)| v.1).collect();
            assert_eq!(summary.mean_final_kills, ks.iter().sum::<usize>() as f64 / ks.len() as f64);
        }
        assert_eq!(r.summary.strategies[&Strategy::Tbc].mean_final_kills, 8.5);
        assert_eq!(r.summary.pairwise.len(), 1);
        let p = &r.summary.pairwise[0];
        assert_eq!((p.a, p.b), (Strategy::Tbc, Strategy::Random));
        assert_eq!(p.u, 4.0);
        assert_eq!(r.summary.tbc_mean_at_least_baselines, Some(true));
        let json: serde_json::Value = serde_json::from_str(&r.summary_json()).unwrap();
        assert_eq!(json["strategies"]["tbc"]["meanFinalKills"], 8.5);
    }
}
