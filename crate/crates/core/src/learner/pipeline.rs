//! Boosted list learners built on the weak learners.
//!
//! Both pipelines play the same zero-sum game. Minnie picks a subsequence of
//! the training examples, Max picks one example, and Minnie pays when the weak
//! learner trained on her subsequence misses Max's example. The subsequence
//! space is too large to enumerate, so the game is solved by column
//! generation: a pool of subsequences grows with draws biased towards the
//! examples Max currently favours, until the exact certificate drops below
//! `1/(2(k+1))`. `l` subsequences are then drawn from Minnie's strategy and
//! kept only if the aggregate covers every example.
//!
//! The returned hypothesis is always produced by [`PipelineRecord::reconstruct`],
//! so it depends on nothing but the recorded subsequences and side information.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::aggregate::{quantile_aggregate, topk_aggregate, MulticlassList};
use super::game::{solve_game_approx, GameSolution, PayoffMatrix};
use super::merge::{merge_lists, MergeMode};
use super::threshold::{build_threshold_class, thr_operator, ThresholdClass};
use super::weak::{PartialOigLearner, RealOigLearner};
use crate::dimensions::fat_dim;
use crate::error::{Error, Result};
use crate::model::grid::{exact_string, parse_ratio, Exact, Ratio64};
use crate::model::{
    derive_seed, empirical_error, gamma_contains, GridValue, HypothesisClass, LabelList, LabeledSample, ListHypothesis,
    Scale,
};
use crate::oig::{koig_dim, OigDimOptions};

/// Largest total number of recorded examples (`m * l`) a run may produce.
pub const MAX_RECORDED_EXAMPLES: usize = 4_000_000;

/// Knobs of both pipelines. `None` fields fall back to the worst-case constants.
#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub gamma: Scale,
    pub k: usize,
    /// Weak-sample size. Default `960 k^5 ln(k+1) d`; for the one-inclusion pipeline, `n0`.
    pub m: Option<usize>,
    /// Number of selected subsequences. Default `6(k+1) ln(2n')`.
    pub l: Option<usize>,
    /// Merge radius. Default `(6k+3) gamma`.
    pub radius: Option<Ratio64>,
    /// Multiplier on the default `m` and `l`.
    pub constant_scale: Option<f64>,
    /// Dimension entering the default `m`; computed when absent.
    pub dimension: Option<usize>,
    pub seed: u64,
    pub retry_cap: usize,
    /// Column-generation rounds before the game is declared unsolved.
    pub game_rounds: usize,
    /// Subsequences in the initial pool and added per round.
    pub pool_batch: usize,
    pub merge_mode: MergeMode,
}

impl PipelineParams {
    pub fn new(gamma: Scale, k: usize) -> Self {
        Self {
            gamma,
            k,
            m: None,
            l: None,
            radius: None,
            constant_scale: None,
            dimension: None,
            seed: 0,
            retry_cap: 64,
            game_rounds: 60,
            pool_batch: 8,
            merge_mode: MergeMode::Candidate,
        }
    }

    pub fn with_sizes(mut self, m: usize, l: usize) -> Self {
        self.m = Some(m);
        self.l = Some(l);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn check(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Precondition("list size k must be at least 1".into()));
        }
        if self.gamma.is_zero() {
            return Err(Error::Precondition("scale gamma must be positive".into()));
        }
        if self.retry_cap == 0 || self.pool_batch == 0 {
            return Err(Error::Precondition("retry cap and pool batch must be positive".into()));
        }
        if matches!(self.m, Some(0)) || matches!(self.l, Some(0)) {
            return Err(Error::Precondition("m and l must be positive".into()));
        }
        if let Some(c) = self.constant_scale {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::Precondition("constant scale must be a positive number".into()));
            }
        }
        Ok(())
    }

    fn default_radius(&self) -> Ratio64 {
        self.gamma.ratio() * Ratio64::from_integer(6 * self.k as i64 + 3)
    }
}

/// Constants a run actually used, with the names of the overridden ones.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolvedConstants {
    pub m: usize,
    pub l: usize,
    pub radius: Option<Ratio64>,
    pub dimension: Option<usize>,
    pub overrides: Vec<String>,
}

impl ResolvedConstants {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "l": self.l,
            "radius": self.radius.map(|r| r.to_string()),
            "dimension": self.dimension,
            "overrides": self.overrides,
        })
    }
}

fn scaled(value: f64, scale: Option<f64>) -> usize {
    (value * scale.unwrap_or(1.0)).ceil().max(1.0) as usize
}

fn default_l(k: usize, n: usize) -> f64 {
    6.0 * (k as f64 + 1.0) * (2.0 * n.max(1) as f64).ln()
}

fn resolve(params: &PipelineParams, n_prime: usize, dimension: impl FnOnce() -> Result<usize>, oig: bool) -> Result<ResolvedConstants> {
    let mut overrides = Vec::new();
    let mut dim = None;
    let m = match params.m {
        Some(m) => {
            overrides.push("m".to_string());
            m
        }
        None => {
            let d = match params.dimension {
                Some(d) => {
                    overrides.push("dimension".to_string());
                    d
                }
                None => dimension()?,
            };
            dim = Some(d);
            if oig {
                scaled((d + 1) as f64, params.constant_scale)
            } else {
                let k = params.k as f64;
                scaled(960.0 * k.powi(5) * (k + 1.0).ln() * d.max(1) as f64, params.constant_scale)
            }
        }
    };
    let l = match params.l {
        Some(l) => {
            overrides.push("l".to_string());
            l
        }
        None => scaled(default_l(params.k, n_prime), params.constant_scale),
    };
    if params.constant_scale.is_some() && (params.m.is_none() || params.l.is_none()) {
        overrides.push("constant_scale".to_string());
    }
    let radius = if oig {
        None
    } else if let Some(r) = params.radius {
        overrides.push("radius".to_string());
        Some(r)
    } else {
        Some(params.default_radius())
    };
    if m.saturating_mul(l) > MAX_RECORDED_EXAMPLES {
        return Err(Error::ExceedsDeskScale(format!("m*l = {m}*{l} recorded examples; override m or l")));
    }
    Ok(ResolvedConstants { m, l, radius, dimension: dim, overrides })
}

/// Smallest `b` with `2^b >= 1/gamma`.
pub fn log2_inverse_ceil(gamma: Scale) -> u64 {
    let (p, q) = (*gamma.ratio().numer() as u128, *gamma.ratio().denom() as u128);
    let mut b = 0;
    while (p << b) < q {
        b += 1;
    }
    b
}

/// One recorded example of the threshold pipeline: the labelled point and the threshold index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThresholdExample {
    pub x: usize,
    pub y: GridValue,
    pub tau: usize,
}

/// What a pipeline keeps from its training sample; the hypothesis is a function of this alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineRecord {
    Threshold { gamma: Scale, k: usize, radius: Ratio64, subsequences: Vec<Vec<ThresholdExample>> },
    Quantile { gamma: Scale, k: usize, subsequences: Vec<Vec<(usize, GridValue)>> },
}

impl PipelineRecord {
    pub fn gamma(&self) -> Scale {
        match self {
            PipelineRecord::Threshold { gamma, .. } | PipelineRecord::Quantile { gamma, .. } => *gamma,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            PipelineRecord::Threshold { k, .. } | PipelineRecord::Quantile { k, .. } => *k,
        }
    }

    /// Recorded examples counted with multiplicity.
    pub fn example_count(&self) -> usize {
        match self {
            PipelineRecord::Threshold { subsequences, .. } => subsequences.iter().map(Vec::len).sum(),
            PipelineRecord::Quantile { subsequences, .. } => subsequences.iter().map(Vec::len).sum(),
        }
    }

    /// Side information: `k * ceil(log2(1/gamma))` bits per recorded threshold.
    pub fn side_bits(&self) -> u64 {
        match self {
            PipelineRecord::Threshold { gamma, k, .. } => self.example_count() as u64 * *k as u64 * log2_inverse_ceil(*gamma),
            PipelineRecord::Quantile { .. } => 0,
        }
    }

    /// Rebuilds the hypothesis on every point of `h`'s domain.
    pub fn reconstruct(&self, h: &HypothesisClass) -> Result<ListHypothesis> {
        Ok(self.reconstruct_detailed(h)?.0)
    }

    /// Reconstruction plus per-point merge diagnostics (empty for the quantile pipeline).
    pub fn reconstruct_detailed(&self, h: &HypothesisClass) -> Result<(ListHypothesis, Vec<MergeDiagnostics>)> {
        match self {
            PipelineRecord::Threshold { gamma, k, radius, subsequences } => {
                reconstruct_threshold(h, *gamma, *k, *radius, subsequences, MergeMode::Candidate)
            }
            PipelineRecord::Quantile { gamma, k, subsequences } => Ok((reconstruct_quantile(h, *gamma, *k, subsequences)?, Vec::new())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            PipelineRecord::Threshold { gamma, k, radius, subsequences } => json!({
                "kind": "threshold",
                "gamma": gamma.to_string(),
                "k": k,
                "radius": radius.to_string(),
                "subsequences": subsequences.iter().map(|s| s.iter().map(|e| json!([e.x, e.y.to_string(), e.tau])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            PipelineRecord::Quantile { gamma, k, subsequences } => json!({
                "kind": "quantile",
                "gamma": gamma.to_string(),
                "k": k,
                "subsequences": subsequences.iter().map(|s| s.iter().map(|(x, y)| json!([x, y.to_string()])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::Parse(format!("record needs \"{name}\"")));
        let text = |name: &str| -> Result<String> {
            field(name)?.as_str().map(str::to_string).ok_or_else(|| Error::Parse(format!("\"{name}\" must be a string")))
        };
        let gamma = Scale::from_ratio(parse_ratio(&text("gamma")?)?)?;
        let k = field("k")?.as_u64().ok_or_else(|| Error::Parse("\"k\" must be an integer".into()))? as usize;
        let subs = field("subsequences")?.as_array().ok_or_else(|| Error::Parse("\"subsequences\" must be an array".into()))?;
        let entries = |s: &Value| -> Result<Vec<Value>> {
            s.as_array().cloned().ok_or_else(|| Error::Parse("subsequence must be an array".into()))
        };
        let uint = |e: &Value, i: usize| -> Result<usize> {
            e.get(i).and_then(Value::as_u64).map(|u| u as usize).ok_or_else(|| Error::Parse(format!("bad record entry {e}")))
        };
        let label = |e: &Value| -> Result<GridValue> {
            let s = e.get(1).and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("bad record entry {e}")))?;
            GridValue::from_ratio(parse_ratio(s)?)
        };
        match text("kind")?.as_str() {
            "threshold" => {
                let radius = parse_ratio(&text("radius")?)?;
                let subsequences = subs
                    .iter()
                    .map(|s| entries(s)?.iter().map(|e| Ok(ThresholdExample { x: uint(e, 0)?, y: label(e)?, tau: uint(e, 2)? })).collect())
                    .collect::<Result<_>>()?;
                Ok(PipelineRecord::Threshold { gamma, k, radius, subsequences })
            }
            "quantile" => {
                let subsequences =
                    subs.iter().map(|s| entries(s)?.iter().map(|e| Ok((uint(e, 0)?, label(e)?))).collect()).collect::<Result<_>>()?;
                Ok(PipelineRecord::Quantile { gamma, k, subsequences })
            }
            other => Err(Error::Parse(format!("unknown record kind {other}"))),
        }
    }
}

/// Merge statistics at one domain point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeDiagnostics {
    pub point: usize,
    pub admitted: usize,
    pub radius: Ratio64,
    /// True when nothing was admitted and the point fell back to `{1/2}`.
    pub fallback: bool,
}

fn threshold_sample(tc: &ThresholdClass, sub: &[ThresholdExample]) -> Result<Vec<(usize, u32)>> {
    sub.iter()
        .map(|e| {
            if e.x >= tc.base_domain || e.tau >= tc.grid.len() {
                return Err(Error::Precondition(format!("record entry ({}, {}) is outside the threshold domain", e.x, e.tau)));
            }
            let label = thr_operator(e.y, tc.grid.tau(e.tau), tc.grid.gamma())
                .ok_or_else(|| Error::Precondition("recorded example has a margin label".into()))?;
            Ok((tc.point(e.x, e.tau), label))
        })
        .collect()
}

/// Learners for distinct training sets, in first-seen order, and the learner index of each subsequence.
fn distinct_learners<T: Clone + Ord + std::hash::Hash>(sets: &[Vec<T>]) -> (Vec<Vec<T>>, Vec<usize>) {
    let mut index: HashMap<Vec<T>, usize> = HashMap::new();
    let mut distinct = Vec::new();
    let assignment = sets
        .iter()
        .map(|s| {
            let mut key = s.clone();
            key.sort();
            key.dedup();
            *index.entry(key.clone()).or_insert_with(|| {
                distinct.push(key);
                distinct.len() - 1
            })
        })
        .collect();
    (distinct, assignment)
}

fn reconstruct_threshold(
    h: &HypothesisClass,
    gamma: Scale,
    k: usize,
    radius: Ratio64,
    subsequences: &[Vec<ThresholdExample>],
    mode: MergeMode,
) -> Result<(ListHypothesis, Vec<MergeDiagnostics>)> {
    if subsequences.is_empty() {
        return Err(Error::Precondition("record holds no subsequences".into()));
    }
    let tc = build_threshold_class(h, gamma, k)?;
    let samples: Vec<Vec<(usize, u32)>> = subsequences.iter().map(|s| threshold_sample(&tc, s)).collect::<Result<_>>()?;
    let (distinct, assignment) = distinct_learners(&samples);
    let learners: Vec<PartialOigLearner> = distinct.iter().map(|s| PartialOigLearner::new(&tc.class, s, k)).collect::<Result<_>>()?;
    let half = GridValue::new(1, 2)?;
    let mut predictions = Vec::with_capacity(h.domain_size());
    let mut diagnostics = Vec::with_capacity(h.domain_size());
    for x in 0..h.domain_size() {
        let mut j = Vec::with_capacity(tc.grid.len());
        for t in 0..tc.grid.len() {
            let p = tc.point(x, t);
            let per_learner: Vec<MulticlassList> = learners.iter().map(|w| w.predict(p)).collect::<Result<_>>()?;
            let lists: Vec<MulticlassList> = assignment.iter().map(|&a| per_learner[a].clone()).collect();
            j.push(topk_aggregate(&lists, k)?);
        }
        let out = merge_lists(&j, radius, &tc.grid, mode)?;
        let fallback = out.list.is_empty();
        diagnostics.push(MergeDiagnostics { point: x, admitted: out.admitted.len(), radius: out.radius, fallback });
        predictions.push(if fallback { LabelList::single(half) } else { out.list });
    }
    Ok((ListHypothesis { predictions }, diagnostics))
}

fn reconstruct_quantile(h: &HypothesisClass, gamma: Scale, k: usize, subsequences: &[Vec<(usize, GridValue)>]) -> Result<ListHypothesis> {
    if subsequences.is_empty() {
        return Err(Error::Precondition("record holds no subsequences".into()));
    }
    let (distinct, assignment) = distinct_learners(subsequences);
    let samples: Vec<LabeledSample> = distinct.into_iter().map(LabeledSample::new).collect();
    let learners: Vec<RealOigLearner> = samples.iter().map(|s| RealOigLearner::new(h, s, gamma, k)).collect::<Result<_>>()?;
    let mut predictions = Vec::with_capacity(h.domain_size());
    for x in 0..h.domain_size() {
        let per_learner: Vec<LabelList> = learners.iter().map(|w| w.predict(x)).collect::<Result<_>>()?;
        let lists: Vec<LabelList> = assignment.iter().map(|&a| per_learner[a].clone()).collect();
        predictions.push(quantile_aggregate(&lists, k)?);
    }
    Ok(ListHypothesis { predictions })
}

/// Column-generation state: subsequences (positions into the example sequence) and their misses per column.
struct Pool {
    rows: Vec<Vec<usize>>,
    misses: Vec<Vec<bool>>,
    seen: HashSet<Vec<usize>>,
}

/// Game outcome over a pool.
pub struct PlayedGame {
    pub pool: Vec<Vec<usize>>,
    pub solution: GameSolution,
    pub rounds: usize,
}

/// Solves the pooled game restricted to undominated, nonzero columns; returns Minnie's solution and
/// Max's distribution over all columns.
fn solve_pool(pool: &Pool, columns: usize) -> Result<(GameSolution, Vec<f64>)> {
    let rows = pool.rows.len();
    let words = rows.div_ceil(64);
    let mut patterns: Vec<(Vec<u64>, Vec<usize>)> = Vec::new();
    let mut by_bits: HashMap<Vec<u64>, usize> = HashMap::new();
    for c in 0..columns {
        let mut bits = vec![0u64; words];
        for (r, m) in pool.misses.iter().enumerate() {
            if m[c] {
                bits[r / 64] |= 1 << (r % 64);
            }
        }
        if bits.iter().all(|&b| b == 0) {
            continue;
        }
        match by_bits.get(&bits) {
            Some(&i) => patterns[i].1.push(c),
            None => {
                by_bits.insert(bits.clone(), patterns.len());
                patterns.push((bits, vec![c]));
            }
        }
    }
    // A column whose misses are a subset of another's is never needed by Max.
    let subset = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x & !y == 0);
    let keep: Vec<usize> = (0..patterns.len())
        .filter(|&i| !(0..patterns.len()).any(|j| j != i && subset(&patterns[i].0, &patterns[j].0)))
        .collect();
    if keep.is_empty() {
        let solution = GameSolution { weights: vec![(0, Exact::one())], value: Exact::zero() };
        return Ok((solution, vec![1.0 / columns.max(1) as f64; columns]));
    }
    let matrix: Vec<Vec<u8>> =
        (0..rows).map(|r| keep.iter().map(|&i| (patterns[i].0[r / 64] >> (r % 64) & 1) as u8).collect()).collect();
    let (solution, q) = solve_game_approx(&PayoffMatrix::new(matrix)?)?;
    let mut over_columns = vec![0.0; columns];
    for (&i, &mass) in keep.iter().zip(&q) {
        let members = &patterns[i].1;
        for &c in members {
            over_columns[c] = mass / members.len() as f64;
        }
    }
    Ok((solution, over_columns))
}

/// Plays the boosting game by column generation. `misses(subsequence)` reports, per column,
/// whether the weak learner trained on the subsequence misses that column's example.
pub(crate) fn play_game(
    positions: usize,
    column_of: &[usize],
    columns: usize,
    m: usize,
    target: &Exact,
    params: &PipelineParams,
    mut misses: impl FnMut(&[usize]) -> Result<Vec<bool>>,
) -> Result<(PlayedGame, Vec<Vec<bool>>)> {
    if positions == 0 || columns == 0 {
        return Err(Error::Precondition("the game needs at least one example".into()));
    }
    let mut representative = vec![usize::MAX; columns];
    for (p, &c) in column_of.iter().enumerate() {
        if representative[c] == usize::MAX {
            representative[c] = p;
        }
    }
    let mut pool = Pool { rows: Vec::new(), misses: Vec::new(), seen: HashSet::new() };
    let mut add = |pool: &mut Pool, sub: Vec<usize>| -> Result<()> {
        let mut key = sub.clone();
        key.sort_unstable();
        if pool.seen.insert(key) {
            pool.misses.push(misses(&sub)?);
            pool.rows.push(sub);
        }
        Ok(())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, 0x6761_6d65));
    for _ in 0..params.pool_batch {
        let sub = (0..m).map(|_| rng.random_range(0..positions)).collect();
        add(&mut pool, sub)?;
    }
    let mut best: Option<GameSolution> = None;
    for round in 0..params.game_rounds {
        let (solution, q) = solve_pool(&pool, columns)?;
        if &solution.value < target {
            let mut pool_misses = pool.misses;
            pool_misses.truncate(pool.rows.len());
            return Ok((PlayedGame { pool: pool.rows, solution, rounds: round + 1 }, pool_misses));
        }
        if best.as_ref().is_none_or(|b| solution.value < b.value) {
            best = Some(solution);
        }
        let weighted = WeightedIndex::new(q.iter().map(|&w| w.max(0.0))).ok();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(params.seed, round as u64 + 1));
        for _ in 0..params.pool_batch {
            let sub = (0..m)
                .map(|_| match &weighted {
                    Some(w) if rng.random_bool(0.5) => representative[w.sample(&mut rng)],
                    _ => rng.random_range(0..positions),
                })
                .collect();
            add(&mut pool, sub)?;
        }
    }
    let best = best.map_or_else(|| "none".to_string(), |b| exact_string(&b.value));
    Err(Error::GameTarget { best })
}

/// Outcome of [`select_subsequences`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    /// Indices into the strategy's rows, with multiplicity, in draw order.
    pub rows: Vec<usize>,
    pub attempts: usize,
}

/// Draws `l` rows i.i.d. from Minnie's strategy until `verify` accepts (returns `None`).
/// Sampling is exact over the common denominator of the weights.
pub fn select_subsequences(
    solution: &GameSolution,
    l: usize,
    seed: u64,
    retry_cap: usize,
    mut verify: impl FnMut(&[usize]) -> Result<Option<String>>,
) -> Result<Selection> {
    if solution.weights.is_empty() || l == 0 {
        return Err(Error::Precondition("selection needs a nonempty strategy and l >= 1".into()));
    }
    let denom = solution.weights.iter().fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
    let total = denom.to_u64().ok_or_else(|| Error::ExceedsDeskScale("strategy denominator exceeds 64 bits".into()))?;
    let mut cumulative = Vec::with_capacity(solution.weights.len());
    let mut acc = 0u64;
    for (row, w) in &solution.weights {
        acc += (w * Exact::from_integer(denom.clone())).to_integer().to_u64().expect("numerator below denominator");
        cumulative.push((acc, *row));
    }
    if acc != total {
        return Err(Error::Precondition("strategy masses do not sum to one".into()));
    }
    let mut last = String::new();
    for attempt in 0..retry_cap {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, attempt as u64));
        let rows: Vec<usize> = (0..l)
            .map(|_| {
                let u = rng.random_range(0..total);
                cumulative[cumulative.partition_point(|&(c, _)| c <= u)].1
            })
            .collect();
        match verify(&rows)? {
            None => return Ok(Selection { rows, attempts: attempt + 1 }),
            Some(d) => last = d,
        }
    }
    Err(Error::SelectionFailed { attempts: retry_cap, diagnostics: last })
}

/// Everything a pipeline run produced.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub hypothesis: ListHypothesis,
    pub record: PipelineRecord,
    pub game: GameSolution,
    pub game_target: Exact,
    pub game_rounds: usize,
    pub pool_size: usize,
    pub selection_attempts: usize,
    pub constants: ResolvedConstants,
    /// Examples the game was played over (extended examples for the threshold pipeline).
    pub game_examples: usize,
    pub training_error: Exact,
    pub merge: Vec<MergeDiagnostics>,
    /// Row chosen by empirical risk minimization, for agnostic runs.
    pub erm_row: Option<usize>,
}

impl PipelineRun {
    pub fn max_list_len(&self) -> usize {
        self.hypothesis.max_list_len()
    }
}

fn target(k: usize) -> Exact {
    Exact::new(BigInt::one(), BigInt::from(2 * (k + 1)))
}

/// One example of the threshold game.
struct Extended {
    source: usize,
    tau: usize,
    point: usize,
    label: u32,
}

/// Realizable list regression through the threshold class.
pub fn reg_realizable(sample: &LabeledSample, h: &HypothesisClass, params: &PipelineParams) -> Result<PipelineRun> {
    params.check()?;
    h.require_total()?;
    sample.check_domain(h.domain_size())?;
    if sample.is_empty() {
        return Err(Error::Precondition("training sample is empty".into()));
    }
    if !sample.is_realizable_by(h) {
        return Err(Error::Unrealizable);
    }
    let (gamma, k) = (params.gamma, params.k);
    let tc = build_threshold_class(h, gamma, k)?;
    let mut extended = Vec::new();
    for (i, &(x, y)) in sample.pairs.iter().enumerate() {
        for t in 0..tc.grid.len() {
            if let Some(label) = thr_operator(y, tc.grid.tau(t), gamma) {
                extended.push(Extended { source: i, tau: t, point: tc.point(x, t), label });
            }
        }
    }
    // Realizability makes the label a function of the extended point.
    let mut column_index: HashMap<usize, usize> = HashMap::new();
    let mut columns: Vec<(usize, u32)> = Vec::new();
    let column_of: Vec<usize> = extended
        .iter()
        .map(|e| {
            *column_index.entry(e.point).or_insert_with(|| {
                columns.push((e.point, e.label));
                columns.len() - 1
            })
        })
        .collect();
    let constants = resolve(
        params,
        extended.len(),
        || Ok(fat_dim(h, gamma.half(), k)?.dimension),
        false,
    )?;
    let goal = target(k);
    let learner_sample = |sub: &[usize]| -> Vec<(usize, u32)> { sub.iter().map(|&p| (extended[p].point, extended[p].label)).collect() };
    let predict_all = |sub: &[usize]| -> Result<Vec<MulticlassList>> {
        let w = PartialOigLearner::new(&tc.class, &learner_sample(sub), k)?;
        columns.iter().map(|&(p, _)| w.predict(p)).collect()
    };
    let mut predictions: Vec<Vec<MulticlassList>> = Vec::new();
    let (played, _) = play_game(extended.len(), &column_of, columns.len(), constants.m, &goal, params, |sub| {
        let preds = predict_all(sub)?;
        let miss = preds.iter().zip(&columns).map(|(mu, &(_, y))| !mu.contains(y)).collect();
        predictions.push(preds);
        Ok(miss)
    })?;
    let selection = select_subsequences(&played.solution, constants.l, derive_seed(params.seed, 0x73656c), params.retry_cap, |rows| {
        let mut failures = 0;
        for (c, &(_, y)) in columns.iter().enumerate() {
            let lists: Vec<MulticlassList> = rows.iter().map(|&r| predictions[r][c].clone()).collect();
            if !topk_aggregate(&lists, k)?.contains(y) {
                failures += 1;
            }
        }
        Ok((failures > 0).then(|| format!("{failures} of {} extended examples outside the top-{k} aggregate", columns.len())))
    })?;
    let subsequences: Vec<Vec<ThresholdExample>> = selection
        .rows
        .iter()
        .map(|&r| {
            played.pool[r]
                .iter()
                .map(|&p| {
                    let e = &extended[p];
                    ThresholdExample { x: sample.pairs[e.source].0, y: sample.pairs[e.source].1, tau: e.tau }
                })
                .collect()
        })
        .collect();
    let radius = constants.radius.expect("threshold pipeline has a radius");
    let record = PipelineRecord::Threshold { gamma, k, radius, subsequences };
    let (hypothesis, merge) = match &record {
        PipelineRecord::Threshold { subsequences, .. } => {
            reconstruct_threshold(h, gamma, k, radius, subsequences, params.merge_mode)?
        }
        PipelineRecord::Quantile { .. } => unreachable!("threshold record"),
    };
    let training_error = empirical_error(&hypothesis, sample)?;
    Ok(PipelineRun {
        hypothesis,
        record,
        pool_size: played.pool.len(),
        game: played.solution,
        game_target: goal,
        game_rounds: played.rounds,
        selection_attempts: selection.attempts,
        constants,
        game_examples: extended.len(),
        training_error,
        merge,
        erm_row: None,
    })
}

/// Row minimizing the empirical absolute loss; ties go to the lowest index.
pub fn erm_row(sample: &LabeledSample, h: &HypothesisClass) -> Result<usize> {
    h.require_total()?;
    sample.check_domain(h.domain_size())?;
    if h.is_empty() {
        return Err(Error::InvalidClass("empty class".into()));
    }
    let mut best: Option<(Ratio64, usize)> = None;
    for r in 0..h.len() {
        let loss = sample.pairs.iter().fold(Ratio64::zero(), |acc, &(x, y)| acc + h.value(r, x).expect("total").abs_diff(y));
        if best.is_none_or(|(b, _)| loss < b) {
            best = Some((loss, r));
        }
    }
    Ok(best.expect("nonempty class").1)
}

/// Agnostic list regression: relabel by the empirical risk minimizer, then run the realizable pipeline.
/// The training error reported is measured against the original labels.
pub fn reg_agnostic(sample: &LabeledSample, h: &HypothesisClass, params: &PipelineParams) -> Result<PipelineRun> {
    let row = erm_row(sample, h)?;
    let relabeled = LabeledSample::new(sample.pairs.iter().map(|&(x, _)| (x, h.value(row, x).expect("total"))).collect());
    let mut run = reg_realizable(&relabeled, h, params)?;
    run.training_error = empirical_error(&run.hypothesis, sample)?;
    run.erm_row = Some(row);
    Ok(run)
}

/// Realizable list regression with the real-valued weak learner and quantile aggregation.
/// `params.m` is the weak-sample size `n0`; by default one more than the one-inclusion dimension.
pub fn realizable_oig_pipeline(sample: &LabeledSample, h: &HypothesisClass, params: &PipelineParams) -> Result<PipelineRun> {
    params.check()?;
    h.require_total()?;
    sample.check_domain(h.domain_size())?;
    if sample.is_empty() {
        return Err(Error::Precondition("training sample is empty".into()));
    }
    if !sample.is_realizable_by(h) {
        return Err(Error::Unrealizable);
    }
    let (gamma, k) = (params.gamma, params.k);
    let mut column_index: HashMap<usize, usize> = HashMap::new();
    let mut columns: Vec<(usize, GridValue)> = Vec::new();
    let column_of: Vec<usize> = sample
        .pairs
        .iter()
        .map(|&(x, y)| {
            *column_index.entry(x).or_insert_with(|| {
                columns.push((x, y));
                columns.len() - 1
            })
        })
        .collect();
    let constants = resolve(params, sample.len(), || Ok(koig_dim(h, gamma, k, &OigDimOptions::default())?.dimension), true)?;
    let goal = target(k);
    let predict_all = |sub: &[usize]| -> Result<Vec<LabelList>> {
        let s = LabeledSample::new(sub.iter().map(|&p| sample.pairs[p]).collect());
        let w = RealOigLearner::new(h, &s, gamma, k)?;
        columns.iter().map(|&(x, _)| w.predict(x)).collect()
    };
    let mut predictions: Vec<Vec<LabelList>> = Vec::new();
    let (played, _) = play_game(sample.len(), &column_of, columns.len(), constants.m, &goal, params, |sub| {
        let preds = predict_all(sub)?;
        let miss = preds.iter().zip(&columns).map(|(mu, &(_, y))| !gamma_contains(mu, y, gamma)).collect();
        predictions.push(preds);
        Ok(miss)
    })?;
    let selection = select_subsequences(&played.solution, constants.l, derive_seed(params.seed, 0x73656c), params.retry_cap, |rows| {
        let mut failures = 0;
        for (c, &(_, y)) in columns.iter().enumerate() {
            let lists: Vec<LabelList> = rows.iter().map(|&r| predictions[r][c].clone()).collect();
            if !gamma_contains(&quantile_aggregate(&lists, k)?, y, gamma) {
                failures += 1;
            }
        }
        Ok((failures > 0).then(|| format!("{failures} of {} training points not gamma-contained", columns.len())))
    })?;
    let subsequences: Vec<Vec<(usize, GridValue)>> =
        selection.rows.iter().map(|&r| played.pool[r].iter().map(|&p| sample.pairs[p]).collect()).collect();
    let record = PipelineRecord::Quantile { gamma, k, subsequences };
    let hypothesis = record.reconstruct(h)?;
    let training_error = empirical_error(&hypothesis, sample)?;
    Ok(PipelineRun {
        hypothesis,
        record,
        pool_size: played.pool.len(),
        game: played.solution,
        game_target: goal,
        game_rounds: played.rounds,
        selection_attempts: selection.attempts,
        constants,
        game_examples: sample.len(),
        training_error,
        merge: Vec::new(),
        erm_row: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{build_example1, build_example2};
    use crate::model::grid::to_exact;

    fn g(p: i64, q: i64) -> GridValue {
        GridValue::new(p, q).unwrap()
    }

    #[test]
    fn side_bits_use_the_ceiling_of_log2() {
        assert_eq!(log2_inverse_ceil(Scale::new(1, 4).unwrap()), 2);
        assert_eq!(log2_inverse_ceil(Scale::new(1, 20).unwrap()), 5);
        assert_eq!(log2_inverse_ceil(Scale::new(1, 2).unwrap()), 1);
        let ex = ThresholdExample { x: 0, y: g(1, 2), tau: 0 };
        let record = PipelineRecord::Threshold {
            gamma: Scale::new(1, 4).unwrap(),
            k: 1,
            radius: Ratio64::new(9, 4),
            subsequences: vec![vec![ex.clone(), ex.clone()]; 3],
        };
        assert_eq!(record.example_count(), 6);
        assert_eq!(record.side_bits(), 12);
    }

    #[test]
    fn records_round_trip_through_json() {
        let record = PipelineRecord::Quantile { gamma: Scale::new(1, 4).unwrap(), k: 2, subsequences: vec![vec![(0, g(1, 2)), (3, g(1, 4))]] };
        assert_eq!(PipelineRecord::from_json(&record.to_json()).unwrap(), record);
    }

    #[test]
    fn selection_accepts_a_pure_strategy() {
        let sol = GameSolution { weights: vec![(2, Exact::one())], value: Exact::zero() };
        let sel = select_subsequences(&sol, 4, 7, 3, |_| Ok(None)).unwrap();
        assert_eq!(sel.rows, vec![2; 4]);
        assert!(matches!(select_subsequences(&sol, 4, 7, 3, |_| Ok(Some("no".into()))), Err(Error::SelectionFailed { attempts: 3, .. })));
    }

    #[test]
    fn single_hypothesis_is_reconstructed() {
        let h = HypothesisClass::total(3, 4, vec![vec![1, 2, 3]]).unwrap();
        let s = LabeledSample::new(vec![(0, g(1, 4)), (2, g(3, 4))]);
        let params = PipelineParams::new(Scale::new(1, 4).unwrap(), 1).with_sizes(2, 3);
        let run = reg_realizable(&s, &h, &params).unwrap();
        let bound = to_exact(Ratio64::new(12, 4));
        assert!(run.training_error <= bound);
        assert!(run.max_list_len() <= 1);
        assert_eq!(run.record.reconstruct(&h).unwrap(), run.hypothesis);
    }

    #[test]
    fn example_one_training_error_is_small() {
        let h = build_example1(3).unwrap();
        let gamma = Scale::new(1, 20).unwrap();
        let target = 5;
        let s = LabeledSample::new((0..3).map(|x| (x, h.value(target, x).unwrap())).collect());
        let params = PipelineParams::new(gamma, 2).with_sizes(12, 20).with_seed(3);
        let run = reg_realizable(&s, &h, &params).unwrap();
        assert!(run.training_error <= to_exact(Ratio64::new(1, 1)));
        assert!(run.game.value < run.game_target);
        assert!(run.max_list_len() <= 2);
        assert_eq!(run.record.reconstruct(&h).unwrap(), run.hypothesis);
    }

    #[test]
    fn quantile_pipeline_contains_training_labels() {
        let h = build_example2(2).unwrap();
        let gamma = Scale::new(1, 4).unwrap();
        let s = LabeledSample::new(vec![(0, h.value(6, 0).unwrap()), (1, h.value(6, 1).unwrap())]);
        let params = PipelineParams::new(gamma, 2).with_sizes(2, 5);
        let run = realizable_oig_pipeline(&s, &h, &params).unwrap();
        for &(x, y) in &s.pairs {
            assert!(gamma_contains(&run.hypothesis.predictions[x], y, gamma));
        }
        assert_eq!(run.record.side_bits(), 0);
        assert_eq!(run.record.example_count(), 10);
    }

    #[test]
    fn agnostic_run_reports_the_erm_row() {
        let h = HypothesisClass::total(2, 4, vec![vec![0, 0], vec![4, 4]]).unwrap();
        let s = LabeledSample::new(vec![(0, g(1, 1)), (1, g(3, 4)), (0, g(0, 1))]);
        assert_eq!(erm_row(&s, &h).unwrap(), 1);
        let params = PipelineParams::new(Scale::new(1, 4).unwrap(), 1).with_sizes(2, 3);
        let run = reg_agnostic(&s, &h, &params).unwrap();
        assert_eq!(run.erm_row, Some(1));
    }
}
