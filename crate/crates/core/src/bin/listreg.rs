//! Command-line front end. Exit codes: 0 pass, 1 property failure, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use listreg::compression::account;
use listreg::dimensions::{fat_dim, k_ary_packing, k_natarajan_dim, packing_sandwich_check, strong_fat_dim};
use listreg::harness::fixtures::random_total_class;
use listreg::harness::{build_example1, build_example2, run_experiment, verify_suite, ExperimentConfig, Report};
use listreg::learner::{reg_agnostic, reg_realizable, realizable_oig_pipeline, PipelineParams};
use listreg::model::grid::{common_denominator, parse_ratio};
use listreg::model::{exact_string, population_error, ClassKind, FiniteDistribution, HypothesisClass, LabeledSample, ListHypothesis, Ratio64, Scale};
use listreg::oig::{koig_dim, min_max_k_outdeg, OigDimOptions, OneInclusionGraph, OrientMode};
use listreg::Error;

#[derive(Parser)]
#[command(name = "listreg", version, about = "Exact list regression on finite hypothesis classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dimension {
    Fat,
    Strong,
    Natarajan,
    Packing,
    Sandwich,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Realizable,
    Agnostic,
    Oig,
}

#[derive(Clone, Copy, ValueEnum)]
enum Orient {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builder {
    Example1,
    Example2,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Shattering dimensions and packing numbers of a class, with witnesses.
    Dims {
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "all")]
        which: Dimension,
    },
    /// Builds the one-inclusion graph of the whole class and orients it.
    Oig {
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Orient,
    },
    /// The `(gamma, k)` one-inclusion-graph dimension up to `n_max` points.
    Oigdim {
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Trains a list hypothesis and writes it with a run report.
    Train {
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "realizable")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        scale_constants: Option<f64>,
        /// Hypothesis output; the run report goes beside it with extension `report.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Population error of a hypothesis under a distribution.
    Eval {
        #[arg(long)]
        hypothesis: PathBuf,
        #[arg(long)]
        dist: PathBuf,
    },
    /// Runs an experiment configuration and writes the report and CSV curve.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the verification suite.
    Verify {
        #[arg(long)]
        filter: Option<String>,
    },
    /// Writes a built-in class to a file.
    BuildClass {
        #[arg(value_enum)]
        builder: Builder,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        resolution: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Property(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CoverViolation(_) | Error::GameTarget { .. } | Error::SelectionFailed { .. } | Error::BudgetExhausted(_) | Error::EmptyPrediction => {
                Failure::Property(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn scale(s: &str) -> Result<Scale, Error> {
    Scale::from_ratio(parse_ratio(s)?)
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json renders"));
}

fn write_json(path: &Path, v: &Value) -> Result<(), Error> {
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n")?;
    Ok(())
}

fn read_json(path: &Path) -> Result<Value, Error> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn dims(class: &Path, gamma: &str, k: usize, which: Dimension) -> Outcome {
    let h = HypothesisClass::load(class)?;
    let gamma = scale(gamma)?;
    let mut out = serde_json::Map::new();
    let all = matches!(which, Dimension::All);
    let total = h.kind() == ClassKind::Total;
    if total && (all || matches!(which, Dimension::Fat)) {
        let r = fat_dim(&h, gamma, k)?;
        out.insert("fat".into(), json!({"dimension": r.dimension, "witness": r.witness.to_json()}));
    }
    if total && (all || matches!(which, Dimension::Strong)) {
        let r = strong_fat_dim(&h, gamma, k)?;
        out.insert("strong_fat".into(), json!({"dimension": r.dimension, "witness": r.witness.to_json()}));
    }
    if all || matches!(which, Dimension::Natarajan) {
        let r = k_natarajan_dim(&h, k)?;
        out.insert("natarajan".into(), json!({"dimension": r.dimension, "witness": r.witness.to_json()}));
    }
    if total && (all || matches!(which, Dimension::Packing)) {
        let (m, w) = k_ary_packing(&h, gamma, k)?;
        out.insert("packing".into(), json!({"number": m, "witness": w.to_json()}));
    }
    if total && (all || matches!(which, Dimension::Sandwich)) {
        let report = packing_sandwich_check(&h, gamma, k)?;
        out.insert("sandwich".into(), report.to_json());
        if !report.passed() {
            print(&Value::Object(out));
            return Err(Failure::Property("packing sandwich failed".into()));
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("the requested dimension needs a total class".into()));
    }
    print(&Value::Object(out));
    Ok(())
}

fn oig(class: &Path, gamma: &str, k: usize, mode: Orient) -> Outcome {
    let h = HypothesisClass::load(class)?;
    let gamma = scale(gamma)?;
    let s = common_denominator([Ratio64::new(1, h.resolution() as i64), gamma.ratio()]);
    let g = OneInclusionGraph::from_class(&h, s)?;
    let mode = match mode {
        Orient::Exact => OrientMode::Exact,
        Orient::Greedy => OrientMode::Greedy,
    };
    let r = min_max_k_outdeg(&g, gamma.numer_on(s)?, k, mode)?;
    print(&json!({
        "vertices": g.vertices().len(),
        "edges": g.edges().len(),
        "max_outdeg": r.max_outdeg,
        "optimal": r.optimal,
        "orientation": r.orientation.choice,
    }));
    Ok(())
}

fn oigdim(class: &Path, gamma: &str, k: usize, n_max: usize) -> Outcome {
    let h = HypothesisClass::load(class)?;
    let r = koig_dim(&h, scale(gamma)?, k, &OigDimOptions { n_max, ..OigDimOptions::default() })?;
    print(&r.to_json());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn train(class: &Path, sample: &Path, gamma: &str, k: usize, mode: Mode, seed: u64, m: Option<usize>, l: Option<usize>, scale_constants: Option<f64>, out: &Path) -> Outcome {
    let h = HypothesisClass::load(class)?;
    let s = LabeledSample::from_json(&read_json(sample)?)?;
    let params = PipelineParams { m, l, constant_scale: scale_constants, ..PipelineParams::new(scale(gamma)?, k).with_seed(seed) };
    let run = match mode {
        Mode::Realizable => reg_realizable(&s, &h, &params)?,
        Mode::Agnostic => reg_agnostic(&s, &h, &params)?,
        Mode::Oig => realizable_oig_pipeline(&s, &h, &params)?,
    };
    let compression = account(&run.record, s.len());
    write_json(out, &run.hypothesis.to_json())?;
    let report = json!({
        "constants": run.constants.to_json(),
        "game": { "value": exact_string(&run.game.value), "target": exact_string(&run.game_target), "rounds": run.game_rounds, "pool": run.pool_size },
        "selection_attempts": run.selection_attempts,
        "training_error": exact_string(&run.training_error),
        "erm_row": run.erm_row,
        "compression": compression.to_json(None),
        "record": run.record.to_json(),
    });
    write_json(&out.with_extension("report.json"), &report)?;
    print(&json!({ "training_error": exact_string(&run.training_error), "compression_size": compression.size }));
    Ok(())
}

fn eval(hypothesis: &Path, dist: &Path) -> Outcome {
    let h = ListHypothesis::from_json(&read_json(hypothesis)?)?;
    let d = FiniteDistribution::load(dist)?;
    let e = population_error(&h, &d)?;
    print(&json!({ "population_error": exact_string(&e) }));
    Ok(())
}

fn summarize(report: &Report) -> Outcome {
    for p in &report.properties {
        println!("{} {} ({} checked, {} violations)", if p.passed() { "PASS" } else { "FAIL" }, p.name, p.checked, p.violations);
        for d in &p.details {
            println!("    {d}");
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Property("property failures".into()))
    }
}

fn run(config: &Path, out: Option<&Path>) -> Outcome {
    let cfg = ExperimentConfig::load(config)?;
    let report = run_experiment(&cfg)?;
    let target = out.map(Path::to_path_buf).or_else(|| cfg.output.as_ref().map(PathBuf::from));
    match target {
        Some(path) => report.write(&path)?,
        None => print!("{}", report.render()),
    }
    for c in &report.curves {
        eprintln!("n={} test error {:.6} +/- {:.6}", c.n, c.test.mean, c.test.half_width);
    }
    summarize(&report)
}

fn build_class(builder: Builder, n: usize, rows: usize, resolution: u32, seed: u64, out: &Path) -> Outcome {
    let h = match builder {
        Builder::Example1 => build_example1(n)?,
        Builder::Example2 => build_example2(n)?,
        Builder::Random => random_total_class(n, rows, resolution, seed)?,
    };
    h.save(out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Dims { class, gamma, k, which } => dims(&class, &gamma, k, which),
        Command::Oig { class, gamma, k, mode } => oig(&class, &gamma, k, mode),
        Command::Oigdim { class, gamma, k, n_max } => oigdim(&class, &gamma, k, n_max),
        Command::Train { class, sample, gamma, k, mode, seed, m, l, scale_constants, out } => {
            train(&class, &sample, &gamma, k, mode, seed, m, l, scale_constants, &out)
        }
        Command::Eval { hypothesis, dist } => eval(&hypothesis, &dist),
        Command::Run { config, out } => run(&config, out.as_deref()),
        Command::Verify { filter } => verify_suite(filter.as_deref()).map_err(Failure::from).and_then(|r| summarize(&r)),
        Command::BuildClass { builder, n, rows, resolution, seed, out } => build_class(builder, n, rows, resolution, seed, &out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            eprintln!("property failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
