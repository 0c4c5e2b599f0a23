//! The verification suite: every invariant of every module, swept over seeded desk-scale fixtures.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use super::builders::{build_example1, build_example2};
use super::experiment::{parallel_map, run_experiment, ClassSpec, DistributionSpec, ExperimentConfig, LearnerMode, PropertyOutcome, Report};
use super::fixtures::{compliant_lists, grid_values, leave_one_out, random_multiclass_list, random_total_class, rng, row_sample};
use super::lower::{build_db_distribution, pigeonhole_error_check};
use crate::compression::{account, generalization_bound, Confidence};
use crate::dimensions::{
    fat_dim, k_natarajan_dim, packing_sandwich_check, strong_fat_dim, verify_fat_witness, verify_natarajan_witness,
    verify_strong_witness,
};
use crate::error::Result;
use crate::learner::{
    build_threshold_class, certify, classifier_f, log2_inverse_ceil, merge_lists, reg_realizable, scaled_sum, separated_set,
    solve_game, support_enumeration_value, thr_operator, MergeMode, PayoffMatrix, PipelineParams, ThresholdGrid,
};
use crate::model::grid::{common_denominator, to_exact};
use crate::model::{
    abs_list_loss, gamma_contains, population_error, union_intersection_check, union_intersection_prob_check, Exact,
    GridValue, HypothesisClass, LabelList, ListHypothesis, Ratio64, Scale,
};
use crate::oig::{build_oig, k_outdeg, koig_dim, min_max_k_outdeg, witness_threshold, OigDimOptions, OneInclusionGraph, OrientMode};

type Check = fn(&mut PropertyOutcome) -> Result<()>;

const SEED: u64 = 0x5eed_1157;

fn scale(p: i64, q: i64) -> Scale {
    Scale::new(p, q).expect("valid scale")
}

fn value(p: i64, q: i64) -> GridValue {
    GridValue::new(p, q).expect("valid value")
}

fn random_list(r: &mut impl Rng, q: i64, max_len: usize) -> LabelList {
    let len = r.random_range(1..=max_len);
    LabelList::new((0..len).map(|_| value(r.random_range(0..=q), q)).collect())
}

fn loss_zero_iff_member(p: &mut PropertyOutcome) -> Result<()> {
    let mut r = rng(SEED);
    for _ in 0..2000 {
        let mu = random_list(&mut r, 8, 3);
        let y = value(r.random_range(0..=8), 8);
        let zero = abs_list_loss(&mu, y)?.is_zero();
        p.record(zero == mu.values().contains(&y), || format!("{mu:?} at {y}"));
    }
    Ok(())
}

fn gamma_containment_is_monotone(p: &mut PropertyOutcome) -> Result<()> {
    let mut r = rng(SEED + 1);
    for _ in 0..2000 {
        let mu = random_list(&mut r, 16, 3);
        let y = value(r.random_range(0..=16), 16);
        let (a, b) = (r.random_range(0..=8), r.random_range(0..=8));
        let (small, large) = (scale(a.min(b), 16), scale(a.max(b), 16));
        p.record(!gamma_contains(&mu, y, small) || gamma_contains(&mu, y, large), || format!("{mu:?} {y} {small} {large}"));
    }
    Ok(())
}

fn discretization_moves_less_than_alpha(p: &mut PropertyOutcome) -> Result<()> {
    for seed in 0..40 {
        let h = random_total_class(3, 6, 12, SEED + seed)?;
        for alpha in [scale(1, 12), scale(1, 6), scale(1, 4), scale(1, 3)] {
            let d = h.discretize(alpha)?;
            for row in 0..h.len() {
                for x in 0..3 {
                    let (a, b) = (h.value(row, x).expect("total"), d.value(row, x).expect("total"));
                    p.record(a.abs_diff(b) < alpha.ratio() && b <= a, || format!("entry {a} moved to {b} at alpha {alpha}"));
                    for other in 0..h.len() {
                        let (c, e) = (h.value(other, x).expect("total"), d.value(other, x).expect("total"));
                        p.record(a < c || b >= e, || format!("order broken: {a} >= {c} but {b} < {e}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn random_family(r: &mut impl Rng, universe: usize, count: usize, min_size: usize) -> Vec<BTreeSet<usize>> {
    (0..count)
        .map(|_| {
            let mut s = BTreeSet::new();
            let size = r.random_range(min_size..=universe);
            while s.len() < size {
                s.insert(r.random_range(0..universe));
            }
            s
        })
        .collect()
}

fn union_intersection_sets(p: &mut PropertyOutcome) -> Result<()> {
    let mut r = rng(SEED + 2);
    for _ in 0..3000 {
        let universe = r.random_range(1..=8);
        let k = r.random_range(1..=3);
        let m = r.random_range(0..=universe);
        let sets = random_family(&mut r, universe, k + 1, m);
        p.record(union_intersection_check(&sets, m)?, || format!("{sets:?} m={m}"));
    }
    Ok(())
}

fn union_intersection_events(p: &mut PropertyOutcome) -> Result<()> {
    let mut r = rng(SEED + 3);
    for _ in 0..2000 {
        let universe = r.random_range(1..=8);
        let k = r.random_range(1..=3);
        let weights: Vec<u64> = (0..universe).map(|_| r.random_range(1..=6)).collect();
        let total: u64 = weights.iter().sum();
        let masses: Vec<Exact> = weights.iter().map(|&w| Exact::new(BigInt::from(w), BigInt::from(total))).collect();
        let events = random_family(&mut r, universe, k + 1, 1);
        let lowest = events.iter().map(|e| e.iter().map(|&i| masses[i].clone()).sum::<Exact>()).min().expect("k+1 events");
        let c = lowest - Exact::new(BigInt::one(), BigInt::from(1000));
        p.record(union_intersection_prob_check(&masses, &events, &c)?, || format!("{events:?}"));
    }
    Ok(())
}

/// Small random classes for the dimension sweeps.
fn dimension_fixtures(count: u64) -> Result<Vec<HypothesisClass>> {
    (0..count)
        .map(|s| {
            let mut r = rng(SEED + 100 + s);
            let points = r.random_range(1..=4);
            let rows = r.random_range(1..=20);
            let resolution = r.random_range(1..=4);
            random_total_class(points, rows, resolution, SEED + 200 + s)
        })
        .collect()
}

fn gammas_for(h: &HypothesisClass) -> [Scale; 2] {
    let q = h.resolution() as i64;
    [scale(1, 2 * q), scale(1, q)]
}

fn fat_dim_monotone_in_k(p: &mut PropertyOutcome) -> Result<()> {
    for h in dimension_fixtures(40)? {
        for gamma in gammas_for(&h) {
            let d: Vec<usize> = (1..=3).map(|k| fat_dim(&h, gamma, k).map(|r| r.dimension)).collect::<Result<_>>()?;
            p.record(d.windows(2).all(|w| w[0] >= w[1]), || format!("fat dims {d:?}"));
        }
    }
    Ok(())
}

fn strong_below_fat_and_witnesses_verify(p: &mut PropertyOutcome) -> Result<()> {
    for h in dimension_fixtures(60)? {
        for gamma in gammas_for(&h) {
            for k in 1..=2 {
                let fat = fat_dim(&h, gamma, k)?;
                let strong = strong_fat_dim(&h, gamma, k)?;
                p.record(strong.dimension <= fat.dimension, || format!("strong {} > fat {}", strong.dimension, fat.dimension));
                let fat_check = verify_fat_witness(&h, gamma, k, &fat.witness);
                p.record(fat_check.is_ok(), || format!("fat witness: {fat_check:?} {}", fat.witness.to_json()));
                let strong_check = verify_strong_witness(&h, gamma, k, &strong.witness);
                p.record(strong_check.is_ok(), || format!("strong witness: {strong_check:?} {}", strong.witness.to_json()));
            }
        }
    }
    Ok(())
}

fn natarajan_of_threshold_class(p: &mut PropertyOutcome) -> Result<()> {
    for s in 0..25 {
        let h = random_total_class(2, 6, 4, SEED + 300 + s)?;
        for k in 1..=2 {
            let gamma = scale(1, 4);
            let phi = build_threshold_class(&h, gamma, k)?;
            let nat = k_natarajan_dim(&phi.class, k)?;
            let fat = fat_dim(&h, gamma.half(), k)?.dimension;
            p.record(nat.dimension <= fat, || format!("natarajan {} > fat {fat}", nat.dimension));
            let check = verify_natarajan_witness(&phi.class, k, &nat.witness);
            p.record(check.is_ok(), || format!("natarajan witness: {check:?} {}", nat.witness.to_json()));
        }
    }
    Ok(())
}

fn discretization_keeps_fat_dimension(p: &mut PropertyOutcome) -> Result<()> {
    for h in dimension_fixtures(40)? {
        let q = h.resolution() as i64;
        for k in 1..=2 {
            for (gamma, alpha) in [(scale(1, q), scale(1, 2 * q)), (scale(1, q), scale(1, q)), (scale(1, 2 * q), scale(1, 2 * q))] {
                let d = fat_dim(&h, gamma, k)?.dimension;
                let coarse = h.discretize(alpha)?;
                let margin = if alpha.ratio() >= gamma.ratio() - alpha.ratio() { alpha } else { Scale::from_ratio(gamma.ratio() - alpha.ratio())? };
                let dq = fat_dim(&coarse, margin, k)?.dimension;
                p.record(dq >= d, || format!("discretized {dq} < {d} at gamma {gamma} alpha {alpha}"));
            }
        }
    }
    Ok(())
}

fn packing_sandwich(p: &mut PropertyOutcome) -> Result<()> {
    for h in dimension_fixtures(40)? {
        for k in 1..=2 {
            let report = packing_sandwich_check(&h, gammas_for(&h)[0], k)?;
            p.record(report.passed(), || format!("{}", report.to_json()));
        }
    }
    Ok(())
}

fn leave_one_out_identity(p: &mut PropertyOutcome) -> Result<()> {
    let mut cases: Vec<(HypothesisClass, Scale)> = vec![(build_example2(2)?, scale(1, 4)), (build_example1(3)?, scale(1, 20))];
    for s in 0..10 {
        cases.push((random_total_class(3, 8, 4, SEED + 400 + s)?, scale(1, 8)));
    }
    for (h, gamma) in &cases {
        let mut r = rng(SEED + 401);
        for k in 1..=2 {
            for _ in 0..3 {
                let row = r.random_range(0..h.len());
                let points: Vec<usize> = (0..h.domain_size()).collect();
                let loo = leave_one_out(h, row, &points, *gamma, k)?;
                p.record(loo.misses == loo.outdeg, || format!("misses {} vs outdegree {} over {}", loo.misses, loo.outdeg, loo.size));
            }
        }
    }
    Ok(())
}

fn two_vertex_edges_count(p: &mut PropertyOutcome) -> Result<()> {
    for s in 0..30 {
        let h = random_total_class(4, 9, 1, SEED + 500 + s)?;
        let g = build_oig(&h)?;
        let sigma = min_max_k_outdeg(&g, 0, 1, OrientMode::Exact)?.orientation;
        let total: usize = (0..g.vertices().len()).map(|v| k_outdeg(&g, v, &sigma, 0)).sum::<Result<usize>>()?;
        let pairs = g.edges().iter().filter(|e| e.members.len() == 2).count();
        p.record(total == pairs, || format!("outdegree sum {total} vs {pairs} edges"));
    }
    Ok(())
}

fn oig_orientation_below_threshold_past_dimension(p: &mut PropertyOutcome) -> Result<()> {
    for s in 0..12 {
        let h = random_total_class(3, 6, 2, SEED + 600 + s)?;
        let gamma = scale(1, 4);
        for k in 1..=2 {
            let opts = OigDimOptions { n_max: 3, ..OigDimOptions::default() };
            let dim = koig_dim(&h, gamma, k, &opts)?;
            let n = dim.dimension + 1;
            if !dim.exact_up_to_n_max || n > 3 {
                continue;
            }
            let scale_num = common_denominator([Ratio64::new(1, 2), gamma.ratio()]);
            let mut subsets = Vec::new();
            for mask in 0u32..8 {
                if mask.count_ones() as usize == n {
                    subsets.push((0..3).filter(|i| mask >> i & 1 == 1).collect::<Vec<usize>>());
                }
            }
            for pts in subsets {
                let proj = h.restrict(&pts)?.class;
                let g = OneInclusionGraph::from_class(&proj, scale_num)?;
                let best = min_max_k_outdeg(&g, gamma.numer_on(scale_num)?, k, OrientMode::Exact)?;
                p.record(best.max_outdeg < witness_threshold(n, k), || format!("n={n} k={k} maxdeg {}", best.max_outdeg));
            }
        }
    }
    Ok(())
}

fn koig_monotone_in_k(p: &mut PropertyOutcome) -> Result<()> {
    // k = 2 and k = 3 share the threshold 1 for n <= 6; k = 1 uses a different cut and is excluded.
    for s in 0..12 {
        let h = random_total_class(4, 8, 2, SEED + 700 + s)?;
        let opts = OigDimOptions { n_max: 4, ..OigDimOptions::default() };
        let d1 = koig_dim(&h, scale(1, 4), 2, &opts)?;
        let d2 = koig_dim(&h, scale(1, 4), 3, &opts)?;
        if d1.exact_up_to_n_max && d2.exact_up_to_n_max {
            p.record(d1.dimension >= d2.dimension, || format!("{} < {}", d1.dimension, d2.dimension));
        }
    }
    Ok(())
}

fn scaled_sum_identity(p: &mut PropertyOutcome) -> Result<()> {
    for q in [2, 4, 8, 16] {
        for k in 1..=3 {
            let grid = ThresholdGrid::new(scale(1, q), k)?;
            for a in grid_values(q) {
                let values: Vec<u32> = grid.taus().iter().map(|t| classifier_f(a.ratio(), t)).collect();
                p.record(scaled_sum(&grid, &values)? == a, || format!("gamma=1/{q} k={k} a={a}"));
            }
        }
    }
    Ok(())
}

fn threshold_coherence(p: &mut PropertyOutcome) -> Result<()> {
    for q in [2, 4, 8] {
        let gamma = scale(1, q);
        for k in 1..=3 {
            let grid = ThresholdGrid::new(gamma, k)?;
            for y in grid_values(4 * q) {
                let separated = separated_set(y.ratio(), &grid);
                for (t, tau) in grid.taus().iter().enumerate() {
                    let thr = thr_operator(y, tau, gamma);
                    p.record(thr.is_none_or(|v| v == classifier_f(y.ratio(), tau)), || format!("thr disagrees with f at {y}"));
                    p.record(thr.is_some() == separated.binary_search(&t).is_ok(), || format!("separation mismatch at {y}"));
                }
            }
        }
    }
    Ok(())
}

fn reconstruction_bound(p: &mut PropertyOutcome) -> Result<()> {
    let mut r = rng(SEED + 800);
    for _ in 0..600 {
        let q = [4, 8, 10, 20][r.random_range(0..4)];
        let k = r.random_range(1..=3);
        let grid = ThresholdGrid::new(scale(1, q), k)?;
        let y = value(r.random_range(0..=2 * q), 2 * q);
        let separated = separated_set(y.ratio(), &grid);
        let values: Vec<u32> = (0..grid.len())
            .map(|t| if separated.binary_search(&t).is_ok() { classifier_f(y.ratio(), grid.tau(t)) } else { r.random_range(0..=k as u32) })
            .collect();
        let c = scaled_sum(&grid, &values)?;
        let limit = Ratio64::new(2 * k as i64 + 1, q);
        p.record(c.abs_diff(y) <= limit, || format!("gamma=1/{q} k={k} y={y} reconstructed {c}"));
    }
    Ok(())
}

fn merge_cover_on_synthetic_lists(p: &mut PropertyOutcome) -> Result<()> {
    let mut r = rng(SEED + 900);
    for i in 0..300 {
        let (q, k) = [(4, 1), (4, 2), (5, 2), (8, 1), (10, 2)][i % 5];
        let grid = ThresholdGrid::new(scale(1, q), k)?;
        let radius = Ratio64::new(6 * k as i64 + 3, q);
        let a = Ratio64::new(r.random_range(0..=2 * q), 2 * q);
        let j = compliant_lists(&grid, a, &mut r);
        match merge_lists(&j, radius, &grid, MergeMode::Candidate) {
            Ok(out) => {
                let covered = out.admitted.iter().all(|c| out.list.values().iter().any(|m| m.abs_diff(*c) <= radius));
                p.record(out.list.len() <= k && covered, || format!("q={q} k={k} a={a}"));
            }
            Err(e) => p.fail(format!("q={q} k={k} a={a}: {e}")),
        }
    }
    Ok(())
}

fn merge_modes_agree(p: &mut PropertyOutcome) -> Result<()> {
    let mut r = rng(SEED + 901);
    for i in 0..200 {
        let (q, k) = [(2, 1), (4, 1), (4, 2), (3, 2)][i % 4];
        let grid = ThresholdGrid::new(scale(1, q), k)?;
        let radius = Ratio64::new(6 * k as i64 + 3, q);
        let j: Vec<_> = (0..grid.len()).map(|_| random_multiclass_list(&mut r, k)).collect();
        let a = merge_lists(&j, radius, &grid, MergeMode::Exhaustive { cap: 1 << 22 });
        let b = merge_lists(&j, radius, &grid, MergeMode::Candidate);
        let same = match (&a, &b) {
            (Ok(x), Ok(y)) => x == y,
            (Err(_), Err(_)) => true,
            _ => false,
        };
        p.record(same, || format!("q={q} k={k}: {a:?} vs {b:?}"));
    }
    Ok(())
}

/// Small realizable pipeline runs over Example-1 and random classes.
fn pipeline_fixtures() -> Result<Vec<(HypothesisClass, Scale, usize, u64)>> {
    let mut out = vec![(build_example1(3)?, scale(1, 20), 2, 1), (build_example1(4)?, scale(1, 20), 2, 2)];
    for s in 0..4 {
        out.push((random_total_class(3, 6, 4, SEED + 1000 + s)?, scale(1, 8), 1 + (s as usize % 2), s));
    }
    Ok(out)
}

fn pipeline_runs(p: &mut PropertyOutcome, check: fn(&HypothesisClass, Scale, usize, &crate::learner::PipelineRun, &mut PropertyOutcome) -> Result<()>) -> Result<()> {
    for (h, gamma, k, seed) in pipeline_fixtures()? {
        let mut r = rng(SEED + 1100 + seed);
        let row = r.random_range(0..h.len());
        let points: Vec<usize> = (0..12).map(|_| r.random_range(0..h.domain_size())).collect();
        let sample = row_sample(&h, row, &points);
        let run = reg_realizable(&sample, &h, &PipelineParams::new(gamma, k).with_sizes(30, 6).with_seed(seed))?;
        check(&h, gamma, k, &run, p)?;
    }
    Ok(())
}

fn training_error_bound(p: &mut PropertyOutcome) -> Result<()> {
    pipeline_runs(p, |_, gamma, k, run, p| {
        let limit = to_exact(gamma.ratio() * (8 * k as i64 + 4)).min(Exact::one());
        p.record(run.training_error <= limit && run.max_list_len() <= k, || format!("training error {}", run.training_error));
        Ok(())
    })
}

fn reconstruction_from_record(p: &mut PropertyOutcome) -> Result<()> {
    pipeline_runs(p, |h, _, _, run, p| {
        let once = run.record.reconstruct(h)?;
        let twice = crate::learner::PipelineRecord::from_json(&run.record.to_json())?.reconstruct(h)?;
        p.record(once == run.hypothesis && twice == once, || "reconstruction differs".into());
        Ok(())
    })
}

fn compression_size_formula(p: &mut PropertyOutcome) -> Result<()> {
    pipeline_runs(p, |_, gamma, k, run, p| {
        let c = account(&run.record, 12);
        let (m, l) = (run.constants.m as u64, run.constants.l as u64);
        p.record(c.size == m * l + m * l * k as u64 * log2_inverse_ceil(gamma), || format!("size {}", c.size));
        Ok(())
    })
}

fn game_certificates(p: &mut PropertyOutcome) -> Result<()> {
    let mut r = rng(SEED + 1200);
    for _ in 0..300 {
        let (rows, cols) = (r.random_range(1..=5), r.random_range(1..=5));
        let payoff = PayoffMatrix::new((0..rows).map(|_| (0..cols).map(|_| r.random_range(0..=1)).collect()).collect())?;
        let sol = solve_game(&payoff)?;
        let oracle = support_enumeration_value(&payoff)?;
        p.record(certify(&payoff, &sol.weights) == sol.value && sol.value == oracle, || format!("{:?}", payoff.rows()));
    }
    Ok(())
}

fn bound_monotonicity(p: &mut PropertyOutcome) -> Result<()> {
    let d = |x: f64| Confidence::new(x).expect("valid confidence");
    for n in [10usize, 100, 1000] {
        for size in 0..=(n as u64 / 4) {
            let base = generalization_bound(n, size, d(0.1), 0.1, 0.2, 1.0)?;
            p.record(base >= 0.1, || "bound below empirical error".into());
            p.record(generalization_bound(n, 2 * size, d(0.1), 0.1, 0.2, 1.0)? >= base, || format!("size n={n} {size}"));
            p.record(generalization_bound(n, size, d(0.05), 0.1, 0.2, 1.0)? > base, || "delta".into());
            p.record(generalization_bound(n, size, d(0.1), 0.15, 0.2, 1.0)? > base, || "error".into());
            p.record(generalization_bound(n, size, d(0.1), 0.1, 0.3, 1.0)? > base, || "off error".into());
        }
    }
    Ok(())
}

fn example_values(p: &mut PropertyOutcome) -> Result<()> {
    let g = scale(1, 20);
    for n in 3..=4 {
        let h = build_example1(n)?;
        let d2 = fat_dim(&h, g, 2)?.dimension;
        let d1 = fat_dim(&h, g, 1)?.dimension;
        p.record(d2 == 3 && d1 == n, || format!("example 1 with n={n}: {d2}, {d1}"));
    }
    for n in 1..=2 {
        let h = build_example2(n)?;
        let d = koig_dim(&h, scale(1, 4), 2, &OigDimOptions { n_max: n, ..OigDimOptions::default() })?.dimension;
        p.record(d <= 1, || format!("example 2 with n={n}: oig dimension {d}"));
        let f = fat_dim(&h, scale(1, 16), 2)?.dimension;
        p.record(f == n, || format!("example 2 with n={n}: fat dimension {f}"));
    }
    Ok(())
}

fn db_best_in_class_is_zero(p: &mut PropertyOutcome) -> Result<()> {
    for (h, g, k) in [(build_example1(3)?, scale(1, 20), 2), (build_example2(2)?, scale(1, 16), 1)] {
        let w = strong_fat_dim(&h, g, k)?.witness;
        for (pattern, _) in &w.assignment {
            let d = build_db_distribution(&h, &w, pattern)?;
            let best = (0..h.len())
                .map(|row| {
                    let f = ListHypothesis { predictions: (0..h.domain_size()).map(|x| LabelList::single(h.value(row, x).expect("total"))).collect() };
                    population_error(&f, &d)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .expect("nonempty class");
            p.record(best.is_zero(), || format!("pattern {pattern:?}"));
        }
    }
    Ok(())
}

fn pigeonhole_exhaustive(p: &mut PropertyOutcome) -> Result<()> {
    for q in [4i64, 8, 10] {
        let values = grid_values(2 * q);
        for k in 1..=2usize {
            for step in 1..=q / (k as i64 + 1) {
                let gamma = Scale::new(step, 2 * q)?;
                let labels: Vec<GridValue> = (0..=k as i64).map(|j| value(2 * step * j, 2 * q)).collect();
                let mut lists: Vec<Vec<GridValue>> = values.iter().map(|&v| vec![v]).collect();
                if k == 2 {
                    for (i, &a) in values.iter().enumerate() {
                        for &b in &values[i + 1..] {
                            lists.push(vec![a, b]);
                        }
                    }
                }
                for mu in lists {
                    let mu = LabelList::new(mu);
                    p.record(pigeonhole_error_check(&mu, &labels, gamma)?, || format!("{mu:?} gamma={gamma}"));
                }
            }
        }
    }
    Ok(())
}

fn report_determinism(p: &mut PropertyOutcome) -> Result<()> {
    let cfg = ExperimentConfig {
        class: ClassSpec::Example1 { n: 3 },
        distribution: DistributionSpec::Realizable { weights: None, target: None },
        mode: LearnerMode::Realizable,
        gamma: "1/20".into(),
        k: 2,
        sample_sizes: vec![6],
        trials: 2,
        seed: 9,
        m: Some(12),
        l: Some(4),
        constant_scale: None,
        delta: 0.05,
        bound_constant: 1.0,
        output: None,
    };
    let a = run_experiment(&cfg)?.render();
    let b = run_experiment(&cfg)?.render();
    p.record(a == b, || "reports differ between runs".into());
    Ok(())
}

/// Every check, named `module::property`.
pub fn checks() -> Vec<(&'static str, Check)> {
    vec![
        ("core::loss_zero_iff_member", loss_zero_iff_member as Check),
        ("core::gamma_containment_monotone", gamma_containment_is_monotone),
        ("core::discretization_bounded_and_monotone", discretization_moves_less_than_alpha),
        ("core::union_intersection_sets", union_intersection_sets),
        ("core::union_intersection_events", union_intersection_events),
        ("dimensions::fat_dim_monotone_in_k", fat_dim_monotone_in_k),
        ("dimensions::strong_below_fat_with_witnesses", strong_below_fat_and_witnesses_verify),
        ("dimensions::natarajan_of_threshold_class", natarajan_of_threshold_class),
        ("dimensions::discretization_keeps_fat_dim", discretization_keeps_fat_dimension),
        ("dimensions::packing_sandwich", packing_sandwich),
        ("oig::leave_one_out_identity", leave_one_out_identity),
        ("oig::two_vertex_edge_count", two_vertex_edges_count),
        ("oig::orientation_below_threshold", oig_orientation_below_threshold_past_dimension),
        ("oig::koig_monotone_in_k", koig_monotone_in_k),
        ("learner::scaled_sum_identity", scaled_sum_identity),
        ("learner::threshold_coherence", threshold_coherence),
        ("learner::reconstruction_bound", reconstruction_bound),
        ("learner::merge_cover", merge_cover_on_synthetic_lists),
        ("learner::merge_modes_agree", merge_modes_agree),
        ("learner::training_error_bound", training_error_bound),
        ("learner::game_certificates", game_certificates),
        ("compression::reconstruction_from_record", reconstruction_from_record),
        ("compression::size_formula", compression_size_formula),
        ("compression::bound_monotonicity", bound_monotonicity),
        ("harness::example_values", example_values),
        ("harness::db_best_in_class_zero", db_best_in_class_is_zero),
        ("harness::pigeonhole_exhaustive", pigeonhole_exhaustive),
        ("harness::report_determinism", report_determinism),
    ]
}

/// Runs every check whose name contains `filter`; a check that errors counts as a failure.
pub fn verify_suite(filter: Option<&str>) -> Result<Report> {
    let selected: Vec<(&'static str, Check)> = checks().into_iter().filter(|(name, _)| filter.is_none_or(|f| name.contains(f))).collect();
    let properties = parallel_map(selected.len(), |i| {
        let (name, check) = selected[i];
        let mut outcome = PropertyOutcome::new(name);
        if let Err(e) = check(&mut outcome) {
            outcome.fail(format!("error: {e}"));
        }
        Ok(outcome)
    })?;
    Ok(Report { config: None, dimensions: Vec::new(), curves: Vec::new(), properties })
}
