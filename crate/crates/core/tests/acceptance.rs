//! Acceptance suite: twelve criteria, one printed PASS/FAIL line each; exits nonzero on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;

use listreg::dimensions::{fat_dim, k_natarajan_dim, packing_sandwich_check, strong_fat_dim};
use listreg::harness::fixtures::{compliant_lists, grid_values, leave_one_out, random_multiclass_list, random_total_class, rng, row_sample};
use listreg::harness::{
    build_example1, build_example2, pigeonhole_error_check, run_experiment, ClassSpec, DistributionSpec, ExperimentConfig,
    LearnerMode,
};
use listreg::learner::{
    build_threshold_class, certify, classifier_f, log2_inverse_ceil, merge_lists, reg_realizable, scaled_sum, solve_game,
    support_enumeration_value, MergeMode, PayoffMatrix, PipelineParams, PipelineRecord, PipelineRun, ThresholdGrid,
};
use listreg::compression::account;
use listreg::model::grid::to_exact;
use listreg::model::{union_intersection_check, union_intersection_prob_check, Exact, GridValue, HypothesisClass, LabelList, Ratio64, Scale};
use listreg::oig::{koig_dim, OigDimOptions};
use listreg::Result;

/// Tally of one criterion: checks run, violations, and the first few failure notes.
#[derive(Default)]
struct Tally {
    checked: usize,
    violations: usize,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.notes.len() < 3 {
                self.notes.push(note());
            }
        }
    }
}

type Criterion = fn(&mut Tally) -> Result<String>;

fn scale(p: i64, q: i64) -> Scale {
    Scale::new(p, q).expect("valid scale")
}

fn value(p: i64, q: i64) -> GridValue {
    GridValue::new(p, q).expect("valid value")
}

fn scaled_sum_identity(t: &mut Tally) -> Result<String> {
    for q in [2, 4, 8, 16] {
        for k in 1..=3 {
            let grid = ThresholdGrid::new(scale(1, q), k)?;
            for a in grid_values(q) {
                let values: Vec<u32> = grid.taus().iter().map(|tau| classifier_f(a.ratio(), tau)).collect();
                t.check(scaled_sum(&grid, &values)? == a, || format!("gamma=1/{q} k={k} a={a}"));
            }
        }
    }
    Ok("exact over every grid value, gamma in {1/2,1/4,1/8,1/16}, k in {1,2,3}".into())
}

fn example1_values(t: &mut Tally) -> Result<String> {
    let gamma = scale(1, 20);
    let mut seen = Vec::new();
    for n in 3..=5 {
        let h = build_example1(n)?;
        let (d2, d1) = (fat_dim(&h, gamma, 2)?.dimension, fat_dim(&h, gamma, 1)?.dimension);
        t.check(d2 == 3, || format!("n={n}: k=2 dimension {d2}"));
        t.check(d1 == n, || format!("n={n}: k=1 dimension {d1}"));
        seen.push(format!("n={n}: ({d2},{d1})"));
    }
    Ok(format!("fat dimensions (k=2, k=1) {}", seen.join(", ")))
}

fn example2_values(t: &mut Tally) -> Result<String> {
    let mut seen = Vec::new();
    for n in 1..=3 {
        let h = build_example2(n)?;
        let opts = OigDimOptions { n_max: n, ..OigDimOptions::default() };
        let oig = koig_dim(&h, scale(1, 4), 2, &opts)?;
        t.check(oig.dimension <= 1, || format!("n={n}: oig dimension {} at k=2", oig.dimension));
        let fat = fat_dim(&h, scale(1, 16), 2)?.dimension;
        t.check(fat == n, || format!("n={n}: fat dimension {fat}"));
        seen.push(format!("n={n}: oig_k2={} fat={fat}", oig.dimension));
    }
    let h = build_example2(3)?;
    let oig1 = koig_dim(&h, scale(1, 4), 1, &OigDimOptions { n_max: 3, ..OigDimOptions::default() })?;
    t.check(oig1.dimension >= 3, || format!("oig dimension {} at k=1", oig1.dimension));
    seen.push(format!("n=3: oig_k1={}", oig1.dimension));
    Ok(seen.join(", "))
}

/// A seeded realizable pipeline run with the class it was trained on.
struct PipelineFixture {
    class: HypothesisClass,
    gamma: Scale,
    k: usize,
    sample_size: usize,
    run: PipelineRun,
}

const PIPELINE_SEED: u64 = 0x00ac_ce97;

fn build_pipeline_fixtures() -> Result<Vec<PipelineFixture>> {
    let mut specs: Vec<(HypothesisClass, Scale, usize)> = Vec::new();
    for n in 3..=5 {
        for k in 1..=2 {
            specs.push((build_example1(n)?, scale(1, 20), k));
        }
    }
    for n in 1..=2 {
        for k in 1..=2 {
            specs.push((build_example2(n)?, scale(1, 16), k));
        }
    }
    for s in 0..44u64 {
        let points = 2 + (s as usize % 3);
        let class = random_total_class(points, 4 + (s as usize % 9), 4 + 4 * (s as u32 % 2), PIPELINE_SEED + s)?;
        let gamma = if s % 2 == 0 { scale(1, 8) } else { scale(1, 16) };
        specs.push((class, gamma, 1 + (s as usize % 2)));
    }
    let mut out = Vec::with_capacity(specs.len());
    for (i, (class, gamma, k)) in specs.into_iter().enumerate() {
        let mut r = rng(PIPELINE_SEED + 1000 + i as u64);
        let row = r.random_range(0..class.len());
        let sample_size = 8 + i % 9;
        let points: Vec<usize> = (0..sample_size).map(|_| r.random_range(0..class.domain_size())).collect();
        let sample = row_sample(&class, row, &points);
        let params = PipelineParams::new(gamma, k).with_sizes(24, 6).with_seed(i as u64);
        let run = reg_realizable(&sample, &class, &params)?;
        out.push(PipelineFixture { class, gamma, k, sample_size, run });
    }
    Ok(out)
}

fn pipeline_fixtures() -> Result<&'static [PipelineFixture]> {
    static FIXTURES: OnceLock<std::result::Result<Vec<PipelineFixture>, String>> = OnceLock::new();
    FIXTURES
        .get_or_init(|| build_pipeline_fixtures().map_err(|e| e.to_string()))
        .as_deref()
        .map_err(|e| listreg::Error::Precondition(format!("pipeline fixtures failed: {e}")))
}

fn training_error_bound(t: &mut Tally) -> Result<String> {
    let fixtures = pipeline_fixtures()?;
    for (i, f) in fixtures.iter().enumerate() {
        let limit = to_exact(f.gamma.ratio() * (8 * f.k as i64 + 4)).min(Exact::one());
        t.check(f.run.training_error <= limit, || format!("fixture {i}: training error {} above {limit}", f.run.training_error));
        t.check(f.run.max_list_len() <= f.k, || format!("fixture {i}: list of {} labels", f.run.max_list_len()));
    }
    Ok(format!("{} realizable fixtures (m=24, l=6)", fixtures.len()))
}

fn merge_cover(t: &mut Tally) -> Result<String> {
    let fixtures = pipeline_fixtures()?;
    for (i, f) in fixtures.iter().enumerate() {
        let radius = f.gamma.ratio() * (6 * f.k as i64 + 3);
        for d in &f.run.merge {
            t.check(d.radius <= radius, || format!("fixture {i} point {}: cover radius {}", d.point, d.radius));
        }
        t.check(f.run.max_list_len() <= f.k, || format!("fixture {i}: list too long"));
    }
    let mut r = rng(PIPELINE_SEED + 5);
    let mut synthetic = 0;
    for (q, k) in [(4, 1), (8, 1), (10, 2), (20, 2), (12, 3)] {
        let grid = ThresholdGrid::new(scale(1, q), k)?;
        let radius = Ratio64::new(6 * k as i64 + 3, q);
        for _ in 0..250 {
            let a = Ratio64::new(r.random_range(0..=2 * q), 2 * q);
            let j = compliant_lists(&grid, a, &mut r);
            synthetic += 1;
            match merge_lists(&j, radius, &grid, MergeMode::Candidate) {
                Ok(out) => {
                    let covered = out.admitted.iter().all(|c| out.list.values().iter().any(|m| m.abs_diff(*c) <= radius));
                    t.check(out.list.len() <= k && covered, || format!("q={q} k={k} a={a}: {out:?}"));
                }
                Err(e) => t.check(false, || format!("q={q} k={k} a={a}: {e}")),
            }
        }
    }
    let mut agreeing = 0;
    for q in 2..=10i64 {
        for k in 1..=3 {
            let grid = ThresholdGrid::new(scale(1, q), k)?;
            if grid.len() > 10 || grid.is_empty() {
                continue;
            }
            let radius = Ratio64::new(6 * k as i64 + 3, q);
            for _ in 0..60 {
                let j: Vec<_> = (0..grid.len()).map(|_| random_multiclass_list(&mut r, k)).collect();
                let a = merge_lists(&j, radius, &grid, MergeMode::Exhaustive { cap: 1 << 22 });
                let b = merge_lists(&j, radius, &grid, MergeMode::Candidate);
                let same = match (&a, &b) {
                    (Ok(x), Ok(y)) => x == y,
                    (Err(_), Err(_)) => true,
                    _ => false,
                };
                agreeing += 1;
                t.check(same, || format!("q={q} k={k}: {a:?} vs {b:?}"));
            }
        }
    }
    Ok(format!("{} pipeline runs, {synthetic} synthetic maps, {agreeing} mode comparisons", fixtures.len()))
}

fn leave_one_out_identity(t: &mut Tally) -> Result<String> {
    let mut cases: Vec<(HypothesisClass, Scale)> = vec![
        (build_example1(3)?, scale(1, 20)),
        (build_example1(4)?, scale(1, 20)),
        (build_example2(2)?, scale(1, 4)),
        (build_example2(2)?, scale(1, 16)),
    ];
    for s in 0..18 {
        cases.push((random_total_class(3 + (s as usize % 2), 10, 4, PIPELINE_SEED + 2000 + s)?, scale(1, 8)));
    }
    let mut r = rng(PIPELINE_SEED + 6);
    for (h, gamma) in &cases {
        let points: Vec<usize> = (0..h.domain_size()).collect();
        for k in 1..=2 {
            for _ in 0..2 {
                let row = r.random_range(0..h.len());
                let loo = leave_one_out(h, row, &points, *gamma, k)?;
                t.check(loo.misses == loo.outdeg, || format!("{} held-out misses vs outdegree {} over {} points", loo.misses, loo.outdeg, loo.size));
            }
        }
    }
    Ok(format!("{} fixtures, held-out error equals outdeg/(m+1)", cases.len()))
}

fn game_matches_oracle(payoff: &PayoffMatrix, t: &mut Tally) -> Result<()> {
    let sol = solve_game(payoff)?;
    let oracle = support_enumeration_value(payoff)?;
    t.check(certify(payoff, &sol.weights) == sol.value && sol.value == oracle, || format!("{:?}: {} vs {oracle}", payoff.rows(), sol.value));
    Ok(())
}

fn game_certificates(t: &mut Tally) -> Result<String> {
    let mut exhaustive = 0;
    for rows in 1..=4usize {
        for cols in 1..=4usize {
            for bits in 0u32..(1 << (rows * cols)) {
                let payoff = PayoffMatrix::new((0..rows).map(|i| (0..cols).map(|j| (bits >> (i * cols + j) & 1) as u8).collect()).collect())?;
                game_matches_oracle(&payoff, t)?;
                exhaustive += 1;
            }
        }
    }
    let mut r = rng(PIPELINE_SEED + 7);
    let mut random = 0;
    for rows in 1..=6usize {
        for cols in 1..=6usize {
            if rows <= 4 && cols <= 4 {
                continue;
            }
            for _ in 0..150 {
                let payoff = PayoffMatrix::new((0..rows).map(|_| (0..cols).map(|_| r.random_range(0..=1)).collect()).collect())?;
                game_matches_oracle(&payoff, t)?;
                random += 1;
            }
        }
    }
    let fixtures = pipeline_fixtures()?;
    for (i, f) in fixtures.iter().enumerate() {
        let goal = Exact::new(BigInt::one(), BigInt::from(2 * (f.k + 1)));
        t.check(f.run.game.value < goal && f.run.game_target == goal, || format!("fixture {i}: game value {}", f.run.game.value));
    }
    Ok(format!("{exhaustive} exhaustive games up to 4x4, {random} random games up to 6x6, {} weak-learner games", fixtures.len()))
}

/// Families of `count` subsets of `0..universe`, as nondecreasing mask tuples.
fn mask_families(universe: usize, count: usize, visit: &mut impl FnMut(&[u32]) -> Result<()>) -> Result<()> {
    fn rec(limit: u32, start: u32, current: &mut Vec<u32>, count: usize, visit: &mut impl FnMut(&[u32]) -> Result<()>) -> Result<()> {
        if current.len() == count {
            return visit(current);
        }
        for mask in start..limit {
            current.push(mask);
            rec(limit, mask, current, count, visit)?;
            current.pop();
        }
        Ok(())
    }
    rec(1 << universe, 0, &mut Vec::with_capacity(count), count, visit)
}

fn to_sets(masks: &[u32], universe: usize) -> Vec<BTreeSet<usize>> {
    masks.iter().map(|&m| (0..universe).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn probability_instance(masses: &[Exact], events: &[BTreeSet<usize>], t: &mut Tally) -> Result<()> {
    let lowest = events.iter().map(|e| e.iter().map(|&i| masses[i].clone()).sum::<Exact>()).min().expect("events");
    let c = lowest - Exact::new(BigInt::one(), BigInt::from(1_000_000));
    t.check(union_intersection_prob_check(masses, events, &c)?, || format!("{events:?} with masses {masses:?}"));
    Ok(())
}

fn combinatorial_claims(t: &mut Tally) -> Result<String> {
    let mut exhaustive = 0;
    for (universe, k) in [(8, 1), (6, 2), (5, 3)] {
        let uniform: Vec<Exact> = vec![Exact::new(BigInt::one(), BigInt::from(universe)); universe];
        let skewed: Vec<Exact> = {
            let total: usize = (1..=universe).sum();
            (1..=universe).map(|w| Exact::new(BigInt::from(w), BigInt::from(total))).collect()
        };
        mask_families(universe, k + 1, &mut |masks| {
            let sets = to_sets(masks, universe);
            let m = sets.iter().map(BTreeSet::len).min().expect("k+1 sets");
            t.check(union_intersection_check(&sets, m)?, || format!("{sets:?} m={m}"));
            probability_instance(&uniform, &sets, t)?;
            probability_instance(&skewed, &sets, t)?;
            exhaustive += 1;
            Ok(())
        })?;
    }
    let mut r = rng(PIPELINE_SEED + 8);
    for _ in 0..100_000 {
        let universe = r.random_range(1..=8usize);
        let k = r.random_range(1..=3usize);
        let masks: Vec<u32> = (0..=k).map(|_| r.random_range(0..(1u32 << universe))).collect();
        let sets = to_sets(&masks, universe);
        let m = sets.iter().map(BTreeSet::len).min().expect("k+1 sets");
        t.check(union_intersection_check(&sets, m)?, || format!("{sets:?} m={m}"));
        let weights: Vec<u64> = (0..universe).map(|_| r.random_range(0..=6)).collect();
        let total: u64 = weights.iter().sum();
        if total > 0 {
            let masses: Vec<Exact> = weights.iter().map(|&w| Exact::new(BigInt::from(w), BigInt::from(total))).collect();
            probability_instance(&masses, &sets, t)?;
        }
    }
    Ok(format!("{exhaustive} exhaustive families (universe 8/6/5 at k=1/2/3) and 100000 random instances"))
}

fn dimension_relations(t: &mut Tally) -> Result<String> {
    let mut classes = 0;
    for s in 0..200u64 {
        let mut r = rng(PIPELINE_SEED + 3000 + s);
        let points = r.random_range(1..=4usize);
        let rows = r.random_range(1..=20usize);
        let resolution = r.random_range(1..=4u32);
        let h = random_total_class(points, rows, resolution, PIPELINE_SEED + 4000 + s)?;
        let q = resolution as i64;
        classes += 1;
        for k in 1..=2 {
            for gamma in [scale(1, 2 * q), scale(1, q)] {
                let fat = fat_dim(&h, gamma, k)?.dimension;
                let strong = strong_fat_dim(&h, gamma, k)?.dimension;
                t.check(strong <= fat, || format!("class {s}: strong {strong} > fat {fat}"));
                for alpha in [scale(1, 2 * q), scale(1, q)].into_iter().filter(|a| a.ratio() <= gamma.ratio()) {
                    let margin = if alpha.ratio() >= gamma.ratio() - alpha.ratio() { alpha } else { Scale::from_ratio(gamma.ratio() - alpha.ratio())? };
                    let coarse = fat_dim(&h.discretize(alpha)?, margin, k)?.dimension;
                    t.check(coarse >= fat, || format!("class {s}: discretized {coarse} < {fat} (gamma {gamma}, alpha {alpha})"));
                }
            }
            let report = packing_sandwich_check(&h, scale(1, 2 * q), k)?;
            t.check(report.passed(), || format!("class {s}: {}", report.to_json()));
            let gamma = scale(1, 4);
            let nat = k_natarajan_dim(&build_threshold_class(&h, gamma, k)?.class, k)?.dimension;
            let fat_half = fat_dim(&h, gamma.half(), k)?.dimension;
            t.check(nat <= fat_half, || format!("class {s}: natarajan {nat} > fat {fat_half}"));
        }
    }
    Ok(format!("{classes} random classes (n<=4, |H|<=20, B<=4, k<=2)"))
}

fn pigeonhole_kernel(t: &mut Tally) -> Result<String> {
    for q in 1..=20i64 {
        let half = grid_values(2 * q);
        for k in 1..=2usize {
            let mut lists: Vec<Vec<GridValue>> = half.iter().map(|&v| vec![v]).collect();
            if k == 2 {
                for (i, &a) in half.iter().enumerate() {
                    lists.extend(half[i + 1..].iter().map(|&b| vec![a, b]));
                }
            }
            let lists: Vec<LabelList> = lists.into_iter().map(LabelList::new).collect();
            // Labels spaced exactly 2 gamma apart at every offset: the tightest separated placements.
            for step in 1..=(q / k as i64) {
                let gamma = Scale::new(step, 2 * q)?;
                let span = 2 * step * k as i64;
                for offset in 0..=(2 * q - span) {
                    let labels: Vec<GridValue> = (0..=k as i64).map(|j| value(offset + 2 * step * j, 2 * q)).collect();
                    for mu in &lists {
                        t.check(pigeonhole_error_check(mu, &labels, gamma)?, || format!("{mu:?} labels {labels:?} gamma {gamma}"));
                    }
                }
            }
        }
    }
    Ok("exhaustive half-grid lists, k<=2, Q<=20, every tight label placement".into())
}

fn trend_config(trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        class: ClassSpec::Example1 { n: 5 },
        distribution: DistributionSpec::Realizable { weights: None, target: None },
        mode: LearnerMode::Realizable,
        gamma: "1/20".into(),
        k: 2,
        sample_sizes: vec![20, 80],
        trials,
        seed: 2024,
        m: Some(100),
        l: None,
        constant_scale: None,
        delta: 0.05,
        bound_constant: 1.0,
        output: None,
    }
}

fn generalization_trend(t: &mut Tally) -> Result<String> {
    let report = run_experiment(&trend_config(100))?;
    let (small, large) = (&report.curves[0].test, &report.curves[1].test);
    t.check(large.mean < small.mean - small.half_width, || {
        format!("test error at n=80 {:.4} not below {:.4} - {:.4}", large.mean, small.mean, small.half_width)
    });
    t.check(large.mean <= 0.05 + 0.15, || format!("test error at n=80 is {:.4}", large.mean));
    for p in &report.properties {
        t.check(p.passed(), || format!("{}: {:?}", p.name, p.details));
    }
    Ok(format!(
        "Example1(5), 100 trials, m=100: n=20 {:.4} +- {:.4}, n=80 {:.4} +- {:.4}",
        small.mean, small.half_width, large.mean, large.half_width
    ))
}

fn determinism_and_compression(t: &mut Tally) -> Result<String> {
    let mut cfg = trend_config(3);
    cfg.sample_sizes = vec![10, 20];
    let first = run_experiment(&cfg)?;
    let second = run_experiment(&cfg)?;
    t.check(first.render() == second.render(), || "reports differ between identical runs".into());
    for p in first.properties.iter().filter(|p| p.name == "reconstruction" || p.name == "compression_size") {
        t.check(p.passed() && p.checked > 0, || format!("{}: {:?}", p.name, p.details));
    }
    let fixtures = pipeline_fixtures()?;
    for (i, f) in fixtures.iter().enumerate() {
        let rebuilt = f.run.record.reconstruct(&f.class)?;
        let reparsed = PipelineRecord::from_json(&f.run.record.to_json())?.reconstruct(&f.class)?;
        t.check(rebuilt == f.run.hypothesis && reparsed == rebuilt, || format!("fixture {i}: reconstruction differs"));
        let c = account(&f.run.record, f.sample_size);
        let (m, l) = (f.run.constants.m as u64, f.run.constants.l as u64);
        let expected = m * l + m * l * f.k as u64 * log2_inverse_ceil(f.gamma);
        t.check(c.size == expected, || format!("fixture {i}: size {} vs {expected}", c.size));
    }
    Ok(format!("byte-identical reports; {} records reconstructed and sized", fixtures.len()))
}

fn criteria() -> Vec<(&'static str, Criterion)> {
    vec![
        ("scaled-sum identity", scaled_sum_identity as Criterion),
        ("Example 1 fat dimensions", example1_values),
        ("Example 2 oig and fat dimensions", example2_values),
        ("realizable training-error bound", training_error_bound),
        ("MergeLists cover and mode agreement", merge_cover),
        ("leave-one-out identity", leave_one_out_identity),
        ("game certificates", game_certificates),
        ("union-intersection claims", combinatorial_claims),
        ("dimension relations", dimension_relations),
        ("pigeonhole error kernel", pigeonhole_kernel),
        ("generalization trend", generalization_trend),
        ("determinism and compression", determinism_and_compression),
    ]
}

fn main() -> ExitCode {
    let list = criteria();
    let lines: Vec<(bool, String)> = std::thread::scope(|scope| {
        let handles: Vec<_> = list
            .iter()
            .enumerate()
            .map(|(i, &(name, criterion))| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let mut tally = Tally::default();
                    let outcome = criterion(&mut tally);
                    let secs = start.elapsed().as_secs_f64();
                    let passed = outcome.is_ok() && tally.violations == 0 && tally.checked > 0;
                    let summary = match &outcome {
                        Ok(s) => s.clone(),
                        Err(e) => format!("error: {e}"),
                    };
                    let mut line = format!(
                        "criterion {:>2} {} {name}: {} checks, {} violations, {secs:.1}s; {summary}",
                        i + 1,
                        if passed { "PASS" } else { "FAIL" },
                        tally.checked,
                        tally.violations
                    );
                    for note in &tally.notes {
                        line.push_str(&format!("\n    {note}"));
                    }
                    (passed, line)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| (false, "criterion panicked".into()))).collect()
    });
    for (_, line) in &lines {
        println!("{line}");
    }
    let failed = lines.iter().filter(|(ok, _)| !ok).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
