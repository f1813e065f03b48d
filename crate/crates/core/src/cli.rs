//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage and validation errors, 2 for file,
//! process and other runtime errors. Data goes to files under `--out-dir`;
//! progress goes to standard error.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::generators::{generate_suite, ArtConfig, Strategy};
use crate::gp::{self, Execution};
use crate::harness::{self, emit_report, CampaignConfig, CampaignReport};
use crate::qbc::{run_tbc, TbcConfig, TbcRun};
use crate::spec_io::{self, InterfaceSpec, SpecError};
use crate::sut::{self, check_deterministic, fixtures, Sut, SutHandle};
use crate::value::InputVector;
use crate::expr::Primitives;
use crate::SeededRng;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

/// Everything that influences results, as recorded in `resolved-config.json`
/// and accepted by `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub runs: usize,
    pub timeout_seconds: f64,
    pub tbc: TbcConfig,
    pub art: ArtConfig,
    pub kill_tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            runs: 30,
            timeout_seconds: sut::DEFAULT_TIMEOUT.as_secs_f64(),
            tbc: TbcConfig::default(),
            art: ArtConfig::default(),
            kill_tolerance: harness::DEFAULT_KILL_TOLERANCE,
        }
    }
}

impl RunConfig {
    fn campaign(&self) -> CampaignConfig {
        CampaignConfig {
            tbc: self.tbc.clone(),
            art: self.art.clone(),
            kill_tolerance: self.kill_tolerance,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        self.tbc.validate().map_err(invalid)?;
        if self.runs == 0 {
            return Err(invalid("runs must be positive"));
        }
        if !(self.timeout_seconds > 0.0 && self.timeout_seconds.is_finite()) {
            return Err(invalid("timeoutSeconds must be positive"));
        }
        if !(self.kill_tolerance >= 0.0 && self.kill_tolerance.is_finite()) {
            return Err(invalid("killTolerance must be a non-negative number"));
        }
        if self.art.candidate_set_size == 0 {
            return Err(invalid("art.candidateSetSize must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Population 800, 60 iterations, 30 runs.
    Paper,
    /// Population 200, 30 iterations, 50 generations, 10 runs.
    Desk,
}

fn apply_preset(cfg: &mut RunConfig, preset: Preset) {
    match preset {
        Preset::Paper => {
            let seed = cfg.seed;
            *cfg = RunConfig { seed, ..RunConfig::default() };
        }
        Preset::Desk => {
            cfg.runs = 10;
            cfg.tbc.iterations = 30;
            cfg.tbc.tests_per_iteration = 5;
            cfg.tbc.gp.population_size = 200;
            cfg.tbc.gp.max_generations = 50;
        }
    }
}

fn merge(base: &mut Json, overlay: Json) {
    match (base, overlay) {
        (Json::Object(b), Json::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

#[derive(Parser, Debug)]
#[command(name = "tbc", version, about = "Test generation by committees of inferred models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grow a test suite by committee disagreement.
    Generate {
        #[command(flatten)]
        io: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Also log per-iteration wall-clock time (breaks byte-identical logs).
        #[arg(long)]
        timings: bool,
    },
    /// Grow a test suite with random or adaptive random inputs.
    Baseline {
        #[command(flatten)]
        io: SpecArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        strategy: BaselineKind,
        /// New inputs to add [default: iterations x per-iteration].
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Count the mutants of a fixture killed by a test file.
    Evaluate {
        #[arg(long)]
        fixture: String,
        /// Test file in the fixture's parameter order.
        #[arg(long)]
        suite: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run TBC, random and ART campaigns on a fixture and compare kills.
    Compare {
        #[arg(long)]
        fixture: String,
        /// Seed tests [default: the fixture's built-in seeds].
        #[arg(long)]
        tests: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Infer models from labeled tests and dump the fittest.
    Infer {
        #[command(flatten)]
        io: SpecArgs,
        /// Observed outputs, one per test; executes the SUT when absent.
        #[arg(long)]
        outputs: Option<PathBuf>,
        /// Number of models to dump.
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// List the built-in fixtures.
    Fixtures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaselineKind {
    Random,
    Art,
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Interface spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Seed test file.
    #[arg(long)]
    tests: PathBuf,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Output directory.
    #[arg(long, default_value = "tbc-out")]
    out_dir: PathBuf,
    /// JSON configuration, same layout as resolved-config.json; any subset of fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Seed for every random choice [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads [default: all cores].
    #[arg(long)]
    jobs: Option<usize>,
    /// Independent seeded runs per strategy (compare) [default: 30].
    #[arg(long)]
    runs: Option<usize>,
    /// Iterations [default: 60].
    #[arg(long)]
    iterations: Option<usize>,
    /// Tests added per iteration [default: 5].
    #[arg(long)]
    per_iteration: Option<usize>,
    /// Random pool size [default: 1000].
    #[arg(long)]
    pool: Option<usize>,
    /// Committee size [default: 10].
    #[arg(long)]
    committee: Option<usize>,
    /// GP population size [default: 800].
    #[arg(long)]
    population: Option<usize>,
    /// GP generation cap [default: 100].
    #[arg(long)]
    max_generations: Option<usize>,
    /// Tree depth cap [default: 10].
    #[arg(long)]
    max_depth: Option<usize>,
    /// Tournament size [default: 6].
    #[arg(long)]
    tournament: Option<usize>,
    /// Crossover rate [default: 0.9].
    #[arg(long)]
    crossover_rate: Option<f64>,
    /// Mutation rate [default: 0.1].
    #[arg(long)]
    mutation_rate: Option<f64>,
    /// Stand-in for non-finite outputs [default: 10000000].
    #[arg(long)]
    substitution: Option<f64>,
    /// Seed each GP run with the previous iteration's population.
    #[arg(long)]
    warm_start: bool,
    /// ART candidate set size [default: 10].
    #[arg(long)]
    candidates: Option<usize>,
    /// Relative kill tolerance [default: 1e-9].
    #[arg(long)]
    kill_tolerance: Option<f64>,
    /// External SUT timeout in seconds [default: 5].
    #[arg(long)]
    timeout: Option<f64>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(p) = self.preset {
            apply_preset(&mut cfg, p);
        }
        if let Some(path) = &self.config {
            let text = read(path)?;
            let overlay: Json = serde_json::from_str(&text)
                .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            let mut base = serde_json::to_value(&cfg).expect("config serializes");
            merge(&mut base, overlay);
            cfg = serde_json::from_value(base).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        }
        macro_rules! set {
            ($flag:expr, $field:expr) => {
                if let Some(v) = $flag {
                    $field = v;
                }
            };
        }
        set!(self.seed, cfg.seed);
        set!(self.runs, cfg.runs);
        set!(self.iterations, cfg.tbc.iterations);
        set!(self.per_iteration, cfg.tbc.tests_per_iteration);
        set!(self.pool, cfg.tbc.random_pool_size);
        set!(self.committee, cfg.tbc.committee_size);
        set!(self.population, cfg.tbc.gp.population_size);
        set!(self.max_generations, cfg.tbc.gp.max_generations);
        set!(self.max_depth, cfg.tbc.gp.max_depth);
        set!(self.tournament, cfg.tbc.gp.tournament_size);
        set!(self.crossover_rate, cfg.tbc.gp.crossover_rate);
        set!(self.mutation_rate, cfg.tbc.gp.mutation_rate);
        set!(self.substitution, cfg.tbc.substitution_value);
        set!(self.candidates, cfg.art.candidate_set_size);
        set!(self.kill_tolerance, cfg.kill_tolerance);
        set!(self.timeout, cfg.timeout_seconds);
        if self.warm_start {
            cfg.tbc.warm_start = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn jsonl(records: &[Json]) -> String {
    records.iter().map(|r| serde_json::to_string(r).expect("json") + "\n").collect()
}

fn config_record(command: &str, cfg: &RunConfig, extra: Json) -> Json {
    json!({ "type": "config", "command": command, "config": cfg, "inputs": extra })
}

fn write_config(dir: &Path, cfg: &RunConfig) -> Result<(), CliError> {
    write(dir, "resolved-config.json", &(serde_json::to_string_pretty(cfg).expect("json") + "\n"))
}

struct Loaded {
    spec: InterfaceSpec,
    tests: Vec<InputVector>,
    sut: SutHandle,
}

fn load(io: &SpecArgs, cfg: &RunConfig) -> Result<Loaded, CliError> {
    let spec = spec_io::parse_interface_spec(&read(&io.spec)?)?;
    let tests = spec_io::parse_test_inputs(&read(&io.tests)?, &spec)?;
    let base = io.spec.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let sut = SutHandle::from_spec(&spec, Some(base), Duration::from_secs_f64(cfg.timeout_seconds)).map_err(invalid)?;
    if let SutHandle::External(_) = sut {
        let sample = &tests[..tests.len().min(3)];
        check_deterministic(&sut, &sut.describe(), sample).map_err(runtime)?;
    }
    Ok(Loaded { spec, tests, sut })
}

fn inputs_record(io: &SpecArgs) -> Json {
    json!({ "spec": io.spec, "tests": io.tests })
}

fn write_suite(dir: &Path, executions: &[Execution]) -> Result<(), CliError> {
    let inputs: Vec<InputVector> = executions.iter().map(|e| e.input.clone()).collect();
    let outputs: Vec<f64> = executions.iter().map(|e| e.observed).collect();
    write(dir, "suite.txt", &spec_io::write_test_inputs(&inputs)?)?;
    write(dir, "outputs.txt", &spec_io::write_outputs(&outputs))
}

fn generate(io: &SpecArgs, common: &CommonArgs, timings: bool) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let loaded = load(io, &cfg)?;
    let mut rng = SeededRng::seed_from_u64(cfg.seed);
    let outcome = run_tbc(&loaded.spec, &loaded.tests, &cfg.tbc, &loaded.sut, &mut rng);
    let (run, failure) = match outcome {
        Ok(run) => (run, None),
        Err(f) => (f.partial, Some(f.error)),
    };
    let mut log = vec![config_record("generate", &cfg, inputs_record(io))];
    log.extend(iteration_records(&run, timings));
    if let Some(e) = &failure {
        log.push(json!({ "type": "error", "message": e.to_string() }));
    }
    write_config(&common.out_dir, &cfg)?;
    write(&common.out_dir, "log.jsonl", &jsonl(&log))?;
    write_suite(&common.out_dir, &run.executions)?;
    match failure {
        None => {
            eprintln!("wrote {} tests to {}", run.executions.len(), common.out_dir.display());
            Ok(())
        }
        Some(e @ crate::qbc::QbcError::InvalidConfig(_)) | Some(e @ crate::qbc::QbcError::BadSeed { .. }) => {
            Err(invalid(e))
        }
        Some(e) => Err(runtime(e)),
    }
}

fn iteration_records(run: &TbcRun, timings: bool) -> Vec<Json> {
    run.iterations
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("record serializes");
            if !timings {
                v.as_object_mut().expect("object").remove("wallClockMs");
            }
            let mut tagged = json!({ "type": "iteration" });
            merge(&mut tagged, v);
            tagged
        })
        .collect()
}

fn baseline(io: &SpecArgs, common: &CommonArgs, kind: BaselineKind, budget: Option<usize>) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let loaded = load(io, &cfg)?;
    let strategy = match kind {
        BaselineKind::Random => Strategy::Random,
        BaselineKind::Art => Strategy::Art,
    };
    let budget = budget.unwrap_or(cfg.tbc.iterations * cfg.tbc.tests_per_iteration);
    let mut rng = SeededRng::seed_from_u64(cfg.seed);
    let inputs = generate_suite(strategy, &loaded.spec, &loaded.tests, budget, &cfg.art, &mut rng);
    let mut executions = Vec::with_capacity(inputs.len());
    let mut failure = None;
    for u in inputs {
        match loaded.sut.execute(&u) {
            Ok(y) => executions.push(Execution::new(u, y)),
            Err(e) => {
                failure = Some(format!("executing {u} failed: {e}"));
                break;
            }
        }
    }
    let mut inputs_rec = inputs_record(io);
    merge(&mut inputs_rec, json!({ "strategy": strategy, "budget": budget }));
    let mut log = vec![config_record("baseline", &cfg, inputs_rec)];
    if let Some(m) = &failure {
        log.push(json!({ "type": "error", "message": m }));
    }
    write_config(&common.out_dir, &cfg)?;
    write(&common.out_dir, "log.jsonl", &jsonl(&log))?;
    write_suite(&common.out_dir, &executions)?;
    match failure {
        None => Ok(()),
        Some(m) => Err(CliError::Runtime(m)),
    }
}

fn evaluate(fixture_id: &str, suite: &Path, common: &CommonArgs) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let f = fixtures::find(fixture_id).ok_or_else(|| invalid(format!("unknown fixture `{fixture_id}`")))?;
    let inputs = spec_io::parse_test_inputs(&read(suite)?, &f.spec())?;
    let handle = f.handle(None);
    let executions = inputs
        .into_iter()
        .map(|u| handle.execute(&u).map(|y| Execution::new(u, y)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(runtime)?;
    let records = harness::kills(&executions, fixture_id, cfg.kill_tolerance).map_err(runtime)?;
    let killed = records.iter().filter(|r| r.killed).count();
    let doc = json!({
        "fixture": fixture_id,
        "tests": executions.len(),
        "mutants": records.len(),
        "killed": killed,
        "records": records,
    });
    write_config(&common.out_dir, &cfg)?;
    write(&common.out_dir, "kills.json", &(serde_json::to_string_pretty(&doc).expect("json") + "\n"))?;
    eprintln!("{fixture_id}: {killed}/{} mutants killed", records.len());
    Ok(())
}

fn compare(fixture_id: &str, tests: Option<&Path>, common: &CommonArgs) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let f = fixtures::find(fixture_id).ok_or_else(|| invalid(format!("unknown fixture `{fixture_id}`")))?;
    let seed_tests = match tests {
        Some(p) => spec_io::parse_test_inputs(&read(p)?, &f.spec())?,
        None => f.seed_tests(),
    };
    let seeds: Vec<u64> = (0..cfg.runs as u64).map(|r| cfg.seed.wrapping_add(r)).collect();
    let campaign = cfg.campaign();
    let mut reports: Vec<CampaignReport> = Vec::new();
    let mut failure = None;
    for strategy in Strategy::ALL {
        eprintln!("{fixture_id}: running {strategy} x {}", seeds.len());
        match harness::run_campaign(strategy, fixture_id, &seed_tests, &campaign, &seeds) {
            Ok(rs) => reports.extend(rs),
            Err(e) => {
                failure = Some(e.to_string());
                reports.extend(e.partial);
                break;
            }
        }
    }
    let report = emit_report(&reports);
    let mut log = vec![config_record(
        "compare",
        &cfg,
        json!({ "fixture": fixture_id, "tests": tests, "seeds": seeds }),
    )];
    for r in &reports {
        log.push(json!({
            "type": "run",
            "strategy": r.strategy,
            "seed": r.seed,
            "finalKills": r.final_kills(),
            "suite": r.executions.iter().map(|e| e.input.to_line()).collect::<Vec<_>>(),
        }));
    }
    if let Some(m) = &failure {
        log.push(json!({ "type": "error", "message": m }));
    }
    write_config(&common.out_dir, &cfg)?;
    write(&common.out_dir, "log.jsonl", &jsonl(&log))?;
    write(&common.out_dir, "report.csv", &report.csv)?;
    write(&common.out_dir, "summary.json", &report.summary_json())?;
    for (s, m) in &report.summary.strategies {
        eprintln!("{s}: mean final kills {:.2} over {} runs", m.mean_final_kills, m.runs);
    }
    match failure {
        None => Ok(()),
        Some(m) => Err(CliError::Runtime(m)),
    }
}

fn infer(io: &SpecArgs, outputs: Option<&Path>, top: usize, common: &CommonArgs) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let loaded = load(io, &cfg)?;
    let executions: Vec<Execution> = match outputs {
        Some(p) => {
            let ys = spec_io::parse_outputs(&read(p)?)?;
            if ys.len() != loaded.tests.len() {
                return Err(invalid(format!(
                    "{} tests but {} outputs",
                    loaded.tests.len(),
                    ys.len()
                )));
            }
            loaded.tests.iter().cloned().zip(ys).map(|(u, y)| Execution::new(u, y)).collect()
        }
        None => loaded
            .tests
            .iter()
            .map(|u| loaded.sut.execute(u).map(|y| Execution::new(u.clone(), y)))
            .collect::<Result<_, _>>()
            .map_err(runtime)?,
    };
    let prims = Primitives::from_spec(&loaded.spec);
    let mut rng = SeededRng::seed_from_u64(cfg.seed);
    let inference = gp::infer(&executions, &cfg.tbc.gp_config(), &prims, &mut rng).map_err(runtime)?;
    let mut doc = inference.population.dump(top, &prims);
    merge(&mut doc, json!({ "bestHistory": inference.best_history }));
    write_config(&common.out_dir, &cfg)?;
    write(&common.out_dir, "models.json", &(serde_json::to_string_pretty(&doc).expect("json") + "\n"))?;
    write(
        &common.out_dir,
        "log.jsonl",
        &jsonl(&[config_record("infer", &cfg, inputs_record(io))]),
    )?;
    Ok(())
}

fn list_fixtures() -> String {
    let mut out = String::new();
    for f in fixtures::catalog() {
        let params: Vec<String> = f
            .parameters()
            .iter()
            .map(|p| format!("{}:{}", p.name, p.kind))
            .collect();
        out.push_str(&format!(
            "{}\t{}\t{} mutants\t{}\n",
            f.id,
            params.join(","),
            f.mutants.len(),
            f.description
        ));
    }
    out
}

fn with_jobs<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(work()),
        Some(0) => Err(invalid("--jobs must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(runtime)?;
            Ok(pool.install(work))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Generate { io, common, timings } => with_jobs(common.jobs, || generate(io, common, *timings))?,
        Command::Baseline {
            io,
            common,
            strategy,
            budget,
        } => with_jobs(common.jobs, || baseline(io, common, *strategy, *budget))?,
        Command::Evaluate { fixture, suite, common } => with_jobs(common.jobs, || evaluate(fixture, suite, common))?,
        Command::Compare { fixture, tests, common } => {
            with_jobs(common.jobs, || compare(fixture, tests.as_deref(), common))?
        }
        Command::Infer {
            io,
            outputs,
            top,
            common,
        } => with_jobs(common.jobs, || infer(io, outputs.as_deref(), *top, common))?,
        Command::Fixtures => {
            print!("{}", list_fixtures());
            Ok(())
        }
    }
}

/// Parses `argv` (program name first) and runs the subcommand. Returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(args: &[&str]) -> CommonArgs {
        let mut argv = vec!["tbc", "evaluate", "--fixture", "bmi", "--suite", "x"];
        argv.extend_from_slice(args);
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Evaluate { common, .. } => common,
            _ => unreachable!(),
        }
    }

    #[test]
    fn defaults_are_the_paper_values() {
        let cfg = common(&[]).resolve().unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.tbc.gp.population_size, 800);
        assert_eq!(cfg.tbc.random_pool_size, 1000);
        assert_eq!(cfg.runs, 30);
        let c = common(&[]);
        assert_eq!(c.out_dir, PathBuf::from("tbc-out"));
    }

    #[test]
    fn precedence_defaults_preset_config_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"tbc": {"iterations": 7, "gp": {"tournamentSize": 4}}, "runs": 3}"#).unwrap();
        let p = path.to_str().unwrap();
        let cfg = common(&["--preset", "desk", "--config", p, "--runs", "2"]).resolve().unwrap();
        assert_eq!(cfg.tbc.gp.population_size, 200);
        assert_eq!(cfg.tbc.iterations, 7);
        assert_eq!(cfg.tbc.gp.tournament_size, 4);
        assert_eq!(cfg.tbc.gp.max_generations, 50);
        assert_eq!(cfg.runs, 2);

        let out = dir.path().join("resolved.json");
        fs::write(&out, serde_json::to_string(&cfg).unwrap()).unwrap();
        let again = common(&["--config", out.to_str().unwrap()]).resolve().unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn bad_configs_are_validation_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"tbc": {"iterationz": 7}}"#).unwrap();
        let e = common(&["--config", path.to_str().unwrap()]).resolve().unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert_eq!(common(&["--pool", "2", "--per-iteration", "3"]).resolve().unwrap_err().exit_code(), 1);
        let missing = common(&["--config", "/nonexistent/c.json"]).resolve().unwrap_err();
        assert_eq!(missing.exit_code(), 2);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(dispatch(["tbc", "frobnicate"]), 1);
        assert_eq!(dispatch(["tbc", "generate", "--bogus"]), 1);
        assert_eq!(dispatch(["tbc", "--help"]), 0);
    }

    #[test]
    fn catalog_listing() {
        let text = list_fixtures();
        let ids: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
        assert_eq!(ids, ["bmi", "piecewise", "poly3", "binom_small"]);
    }
}
