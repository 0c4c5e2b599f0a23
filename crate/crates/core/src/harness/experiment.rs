//! Seeded learning-curve experiments and their reports.
//!
//! A report is a pure function of the configuration: trials derive their seeds from
//! `(seed, sample size, trial)`, run in parallel, and are assembled in trial order.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::builders::{build_example1, build_example2};
use super::fixtures::random_total_class;
use crate::compression::{account, generalization_bound, CompressionRecord, Confidence};
use crate::dimensions::fat_dim;
use crate::error::{Error, Result};
use crate::learner::{erm_row, reg_agnostic, reg_realizable, realizable_oig_pipeline, PipelineParams, PipelineRecord, PipelineRun};
use crate::model::grid::{exact_f64, parse_ratio, to_exact};
use crate::model::{
    derive_seed, empirical_error, exact_string, gamma_contains, population_error, Atom, Exact, FiniteDistribution,
    GridValue, HypothesisClass, LabeledSample, ListHypothesis, Scale,
};

/// Where the hypothesis class comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassSpec {
    Example1 { n: usize },
    Example2 { n: usize },
    Random { points: usize, rows: usize, resolution: u32, seed: u64 },
    File { path: String },
}

impl ClassSpec {
    pub fn build(&self) -> Result<HypothesisClass> {
        match self {
            ClassSpec::Example1 { n } => build_example1(*n),
            ClassSpec::Example2 { n } => build_example2(*n),
            ClassSpec::Random { points, rows, resolution, seed } => random_total_class(*points, *rows, *resolution, *seed),
            ClassSpec::File { path } => HypothesisClass::load(Path::new(path)),
        }
    }
}

/// How each trial's distribution is formed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    /// Labels from one row of the class; the row is drawn per trial unless fixed. Point weights
    /// default to uniform over the domain.
    Realizable {
        #[serde(default)]
        weights: Option<Vec<u64>>,
        #[serde(default)]
        target: Option<usize>,
    },
    /// As `Realizable`, but a `flip` fraction of each point's mass carries the reflected label `1 - y`.
    Noisy {
        #[serde(default)]
        weights: Option<Vec<u64>>,
        #[serde(default)]
        target: Option<usize>,
        flip: String,
    },
    /// A fixed distribution read from a file.
    File { path: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerMode {
    Realizable,
    Agnostic,
    Oig,
}

fn default_delta() -> f64 {
    0.05
}

fn default_constant() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub class: ClassSpec,
    pub distribution: DistributionSpec,
    pub mode: LearnerMode,
    /// Scale as a fraction, e.g. `"1/20"`.
    pub gamma: String,
    pub k: usize,
    pub sample_sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub l: Option<usize>,
    #[serde(default)]
    pub constant_scale: Option<f64>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_constant")]
    pub bound_constant: f64,
    /// Report path; the CSV companion goes next to it.
    #[serde(default)]
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn scale(&self) -> Result<Scale> {
        Scale::from_ratio(parse_ratio(&self.gamma)?)
    }

    fn check(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Precondition("an experiment needs at least one trial".into()));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.contains(&0) {
            return Err(Error::Precondition("sample sizes must be positive and nonempty".into()));
        }
        Confidence::new(self.delta)?;
        self.scale()?;
        Ok(())
    }
}

/// One trial at one sample size.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub target: Option<usize>,
    pub training_error: Exact,
    pub test_error: Exact,
    pub compression: CompressionRecord,
    pub bound: Option<f64>,
    pub game_value: Exact,
    pub max_list_len: usize,
    /// Names of per-run assertions that failed.
    pub failures: Vec<String>,
}

impl TrialOutcome {
    fn to_json(&self) -> Value {
        json!({
            "trial": self.trial,
            "seed": self.seed,
            "target": self.target,
            "training_error": exact_string(&self.training_error),
            "training_error_decimal": format!("{:.6}", exact_f64(&self.training_error)),
            "test_error": exact_string(&self.test_error),
            "test_error_decimal": format!("{:.6}", exact_f64(&self.test_error)),
            "game_value": exact_string(&self.game_value),
            "max_list_len": self.max_list_len,
            "compression": self.compression.to_json(self.bound),
            "failures": self.failures,
        })
    }
}

/// Mean and normal-approximation 95% half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        if values.is_empty() {
            return Self { mean: 0.0, half_width: 0.0 };
        }
        let mean = values.iter().sum::<f64>() / n;
        if values.len() < 2 {
            return Self { mean, half_width: 0.0 };
        }
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self { mean, half_width: 1.96 * (var / n).sqrt() }
    }
}

/// All trials at one sample size.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub n: usize,
    pub trials: Vec<TrialOutcome>,
    pub training: Estimate,
    pub test: Estimate,
    /// Mean over trials whose compression admits the bound.
    pub bound: Option<f64>,
}

impl CurvePoint {
    fn new(n: usize, trials: Vec<TrialOutcome>) -> Self {
        let f = |sel: fn(&TrialOutcome) -> &Exact| trials.iter().map(|t| exact_f64(sel(t))).collect::<Vec<_>>();
        let training = Estimate::of(&f(|t| &t.training_error));
        let test = Estimate::of(&f(|t| &t.test_error));
        let bounds: Vec<f64> = trials.iter().filter_map(|t| t.bound).collect();
        let bound = (!bounds.is_empty()).then(|| bounds.iter().sum::<f64>() / bounds.len() as f64);
        Self { n, trials, training, test, bound }
    }

    fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "training_error_mean": format!("{:.6}", self.training.mean),
            "test_error_mean": format!("{:.6}", self.test.mean),
            "test_error_half_width": format!("{:.6}", self.test.half_width),
            "bound_mean": self.bound.map(|b| format!("{b:.6}")),
            "trials": self.trials.iter().map(TrialOutcome::to_json).collect::<Vec<_>>(),
        })
    }
}

/// A named assertion and how often it failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    /// First few failure descriptions.
    pub details: Vec<String>,
}

impl PropertyOutcome {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), checked: 0, violations: 0, details: Vec::new() }
    }

    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.details.len() < 5 {
                self.details.push(detail());
            }
        }
    }

    pub fn fail(&mut self, detail: String) {
        self.record(false, || detail);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "checked": self.checked, "violations": self.violations, "passed": self.passed(), "details": self.details })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: Option<Value>,
    pub dimensions: Vec<(String, String)>,
    pub curves: Vec<CurvePoint>,
    pub properties: Vec<PropertyOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "environment": { "crate": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
            "config": self.config,
            "dimensions": self.dimensions.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
            "curves": self.curves.iter().map(CurvePoint::to_json).collect::<Vec<_>>(),
            "properties": self.properties.iter().map(PropertyOutcome::to_json).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }

    /// Stable pretty JSON.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    /// Error curve per sample size, one line each.
    pub fn csv(&self) -> String {
        let mut out = String::from("n,trials,training_error_mean,test_error_mean,test_error_half_width,bound_mean\n");
        for c in &self.curves {
            let bound = c.bound.map(|b| format!("{b:.6}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6},{}\n",
                c.n,
                c.trials.len(),
                c.training.mean,
                c.test.mean,
                c.test.half_width,
                bound
            ));
        }
        out
    }

    /// Writes the report and a `.csv` companion beside it.
    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        std::fs::write(path.with_extension("csv"), self.csv())?;
        Ok(())
    }
}

fn weights_for(h: &HypothesisClass, weights: &Option<Vec<u64>>) -> Result<Vec<u64>> {
    let w = weights.clone().unwrap_or_else(|| vec![1; h.domain_size()]);
    if w.len() != h.domain_size() || w.iter().all(|&v| v == 0) {
        return Err(Error::Precondition(format!("need {} point weights, not all zero", h.domain_size())));
    }
    Ok(w)
}

/// Distribution for one trial and the row it is realized by, if any.
fn trial_distribution(kind: &DistributionSpec, h: &HypothesisClass, seed: u64) -> Result<(FiniteDistribution, Option<usize>)> {
    let pick = |target: &Option<usize>| -> Result<usize> {
        let row = target.unwrap_or((derive_seed(seed, 1) % h.len() as u64) as usize);
        if row >= h.len() {
            return Err(Error::Precondition(format!("target row {row} outside a class of {} rows", h.len())));
        }
        Ok(row)
    };
    match kind {
        DistributionSpec::Realizable { weights, target } => {
            let w = weights_for(h, weights)?;
            let row = pick(target)?;
            let total: u64 = w.iter().sum();
            let atoms = (0..h.domain_size())
                .filter(|&x| w[x] > 0)
                .map(|x| Atom { point: x, label: h.value(row, x).expect("total"), mass: Exact::new(BigInt::from(w[x]), BigInt::from(total)) })
                .collect();
            Ok((FiniteDistribution::new(atoms)?, Some(row)))
        }
        DistributionSpec::Noisy { weights, target, flip } => {
            let w = weights_for(h, weights)?;
            let row = pick(target)?;
            let flip = to_exact(parse_ratio(flip)?);
            if flip < Exact::zero() || flip > Exact::from_integer(1.into()) {
                return Err(Error::Precondition("flip fraction must lie in [0, 1]".into()));
            }
            let total: u64 = w.iter().sum();
            let mut atoms = Vec::new();
            for x in (0..h.domain_size()).filter(|&x| w[x] > 0) {
                let mass = Exact::new(BigInt::from(w[x]), BigInt::from(total));
                let y = h.value(row, x).expect("total");
                let reflected = GridValue::from_ratio(GridValue::one().ratio() - y.ratio())?;
                let noisy = &mass * &flip;
                atoms.push(Atom { point: x, label: y, mass: &mass - &noisy });
                atoms.push(Atom { point: x, label: reflected, mass: noisy });
            }
            Ok((FiniteDistribution::new(atoms)?, Some(row)))
        }
        DistributionSpec::File { path } => Ok((FiniteDistribution::load(Path::new(path))?, None)),
    }
}

fn params_for(cfg: &ExperimentConfig, gamma: Scale, seed: u64) -> PipelineParams {
    PipelineParams { m: cfg.m, l: cfg.l, constant_scale: cfg.constant_scale, ..PipelineParams::new(gamma, cfg.k).with_seed(seed) }
}

/// Examples of `sample` whose pair is not recorded in the compression.
fn off_compression(sample: &LabeledSample, record: &PipelineRecord) -> LabeledSample {
    let kept: Vec<(usize, GridValue)> = match record {
        PipelineRecord::Threshold { subsequences, .. } => subsequences.iter().flatten().map(|e| (e.x, e.y)).collect(),
        PipelineRecord::Quantile { subsequences, .. } => subsequences.iter().flatten().copied().collect(),
    };
    LabeledSample::new(sample.pairs.iter().filter(|p| !kept.contains(p)).copied().collect())
}

fn run_mode(cfg: &ExperimentConfig, sample: &LabeledSample, h: &HypothesisClass, params: &PipelineParams) -> Result<PipelineRun> {
    match cfg.mode {
        LearnerMode::Realizable => reg_realizable(sample, h, params),
        LearnerMode::Agnostic => reg_agnostic(sample, h, params),
        LearnerMode::Oig => realizable_oig_pipeline(sample, h, params),
    }
}

/// Per-run assertions; returns the names of the ones that fail.
fn run_assertions(cfg: &ExperimentConfig, gamma: Scale, h: &HypothesisClass, sample: &LabeledSample, run: &PipelineRun, compression: &CompressionRecord) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let k = cfg.k;
    if run.max_list_len() > k {
        failures.push("list_size".to_string());
    }
    let g = to_exact(gamma.ratio());
    let one = Exact::from_integer(1.into());
    match cfg.mode {
        LearnerMode::Realizable => {
            let bound = (g * Exact::from_integer(BigInt::from(8 * k + 4))).min(one);
            if run.training_error > bound {
                failures.push("training_error_bound".to_string());
            }
        }
        LearnerMode::Agnostic => {
            let row = erm_row(sample, h)?;
            let best = ListHypothesis { predictions: (0..h.domain_size()).map(|x| crate::model::LabelList::single(h.value(row, x).expect("total"))).collect() };
            let inf = empirical_error(&best, sample)?;
            if run.training_error > inf + g * Exact::from_integer(BigInt::from(8 * k + 5)) {
                failures.push("agnostic_training_error_bound".to_string());
            }
        }
        LearnerMode::Oig => {
            if sample.pairs.iter().any(|&(x, y)| !gamma_contains(&run.hypothesis.predictions[x], y, gamma)) {
                failures.push("training_gamma_containment".to_string());
            }
        }
    }
    if run.record.reconstruct(h)? != run.hypothesis {
        failures.push("reconstruction".to_string());
    }
    let (m, l) = (run.constants.m as u64, run.constants.l as u64);
    let expected = match &run.record {
        PipelineRecord::Threshold { .. } => m * l + m * l * k as u64 * crate::learner::log2_inverse_ceil(gamma),
        PipelineRecord::Quantile { .. } => m * l,
    };
    if compression.size != expected {
        failures.push("compression_size".to_string());
    }
    if let Some(r) = run.constants.radius {
        if run.merge.iter().any(|d| d.radius > r) {
            failures.push("merge_cover".to_string());
        }
    }
    if run.game.value >= run.game_target {
        failures.push("game_value".to_string());
    }
    Ok(failures)
}

fn run_trial(cfg: &ExperimentConfig, h: &HypothesisClass, gamma: Scale, n: usize, trial: usize) -> Result<TrialOutcome> {
    let seed = derive_seed(derive_seed(cfg.seed, n as u64), trial as u64);
    let (dist, target) = trial_distribution(&cfg.distribution, h, seed)?;
    let sample = dist.sample(n, derive_seed(seed, 2))?;
    let params = params_for(cfg, gamma, derive_seed(seed, 3));
    let run = run_mode(cfg, &sample, h, &params)?;
    let test_error = population_error(&run.hypothesis, &dist)?;
    let compression = account(&run.record, n);
    let bound = if compression.exceeds_half {
        None
    } else {
        let off = off_compression(&sample, &run.record);
        let e_off = exact_f64(&empirical_error(&run.hypothesis, &off)?);
        Some(generalization_bound(n, compression.size, Confidence::new(cfg.delta)?, exact_f64(&run.training_error), e_off, cfg.bound_constant)?)
    };
    let failures = run_assertions(cfg, gamma, h, &sample, &run, &compression)?;
    Ok(TrialOutcome {
        trial,
        seed,
        target,
        training_error: run.training_error.clone(),
        test_error,
        compression,
        bound,
        game_value: run.game.value.clone(),
        max_list_len: run.max_list_len(),
        failures,
    })
}

/// Runs `f(0..count)` across threads and returns results in index order.
pub(crate) fn parallel_map<T: Send>(count: usize, f: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    let workers = std::thread::available_parallelism().map_or(1, |p| p.get()).min(count.max(1));
    let mut slots: Vec<Option<Result<T>>> = (0..count).map(|_| None).collect();
    std::thread::scope(|s| {
        let f = &f;
        let handles: Vec<_> = (0..workers)
            .map(|w| s.spawn(move || (w..count).step_by(workers).map(|i| (i, f(i))).collect::<Vec<_>>()))
            .collect();
        for handle in handles {
            for (i, r) in handle.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every index is computed")).collect()
}

fn dimension_entry(name: &str, value: Result<usize>) -> (String, String) {
    (name.to_string(), value.map_or_else(|e| format!("unavailable: {e}"), |d| d.to_string()))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.check()?;
    let gamma = cfg.scale()?;
    let h = cfg.class.build()?;
    h.require_total()?;
    let dimensions = vec![
        dimension_entry(&format!("fat_dim(gamma={gamma}, k={})", cfg.k), fat_dim(&h, gamma, cfg.k).map(|r| r.dimension)),
        dimension_entry(&format!("fat_dim(gamma={}, k={})", gamma.half(), cfg.k), fat_dim(&h, gamma.half(), cfg.k).map(|r| r.dimension)),
    ];
    let mut curves = Vec::new();
    let mut properties: Vec<PropertyOutcome> = Vec::new();
    for &n in &cfg.sample_sizes {
        let trials = parallel_map(cfg.trials, |t| run_trial(cfg, &h, gamma, n, t))?;
        for t in &trials {
            for name in ["list_size", "training_error_bound", "agnostic_training_error_bound", "training_gamma_containment", "reconstruction", "compression_size", "merge_cover", "game_value"] {
                let applies = match name {
                    "training_error_bound" => cfg.mode == LearnerMode::Realizable,
                    "agnostic_training_error_bound" => cfg.mode == LearnerMode::Agnostic,
                    "training_gamma_containment" => cfg.mode == LearnerMode::Oig,
                    _ => true,
                };
                if !applies {
                    continue;
                }
                let idx = match properties.iter().position(|p| p.name == name) {
                    Some(i) => i,
                    None => {
                        properties.push(PropertyOutcome::new(name));
                        properties.len() - 1
                    }
                };
                let failed = t.failures.iter().any(|f| f == name);
                properties[idx].record(!failed, || format!("n={n} trial={}", t.trial));
            }
        }
        curves.push(CurvePoint::new(n, trials));
    }
    let config = serde_json::to_value(cfg)?;
    Ok(Report { config: Some(config), dimensions, curves, properties })
}
