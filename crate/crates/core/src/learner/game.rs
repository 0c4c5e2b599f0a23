//! Zero-sum games with `{0,1}` payoffs: exact and floating simplex, exact certificates.
//!
//! Rows are Minnie's pure strategies (she pays), columns are Max's. Shifting
//! every payoff by one makes the game strictly positive, so Max's problem
//! `max 1'y s.t. (A+1) y <= 1, y >= 0` starts from a feasible slack basis and
//! Minnie's optimal strategy is read off the final dual prices.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::grid::{exact_string, Exact};

/// Payoff `rows x cols` with entries in `{0,1}`; an entry of 1 means Minnie's row loses on that column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffMatrix {
    rows: Vec<Vec<u8>>,
    cols: usize,
}

impl PayoffMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(Error::Precondition("a game needs at least one row and one column".into()));
        }
        if rows.iter().any(|r| r.len() != cols || r.iter().any(|&e| e > 1)) {
            return Err(Error::Precondition("payoff rows must have equal length and entries in {0,1}".into()));
        }
        Ok(Self { rows, cols })
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }
}

/// Minnie's mixed strategy with its exact guarantee.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSolution {
    /// `(row, mass)` with positive masses summing to one.
    pub weights: Vec<(usize, Exact)>,
    /// Largest expected payoff over Max's pure strategies.
    pub value: Exact,
}

impl GameSolution {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value": exact_string(&self.value),
            "weights": self.weights.iter().map(|(r, w)| serde_json::json!([r, exact_string(w)])).collect::<Vec<_>>(),
        })
    }
}

/// Exact `max_c sum_r w_r A[r][c]`.
pub fn certify(payoff: &PayoffMatrix, weights: &[(usize, Exact)]) -> Exact {
    (0..payoff.cols)
        .map(|c| weights.iter().filter(|(r, _)| payoff.rows[*r][c] == 1).fold(Exact::zero(), |acc, (_, w)| acc + w))
        .max()
        .unwrap_or_else(Exact::zero)
}

trait Field: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_u8(v: u8) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn positive(&self) -> bool;
    fn negative(&self) -> bool;
    fn less(&self, o: &Self) -> bool;
}

impl Field for Exact {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_u8(v: u8) -> Self {
        Exact::from_integer(BigInt::from(v))
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn less(&self, o: &Self) -> bool {
        self < o
    }
}

const EPS: f64 = 1e-11;

impl Field for f64 {
    fn nil() -> Self {
        0.0
    }
    fn unit() -> Self {
        1.0
    }
    fn from_u8(v: u8) -> Self {
        v as f64
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn positive(&self) -> bool {
        *self > EPS
    }
    fn negative(&self) -> bool {
        *self < -EPS
    }
    fn less(&self, o: &Self) -> bool {
        *self < *o - EPS
    }
}

/// Optimal `(row primal, column duals)` of the shifted game, both unnormalized.
/// One constraint per column: `sum_r (A[r][c]+1) y_r <= 1`.
fn simplex<F: Field>(payoff: &PayoffMatrix, max_pivots: usize) -> Result<(Vec<F>, Vec<F>)> {
    let (n, m) = (payoff.rows.len(), payoff.cols);
    let width = n + m;
    // Tableau rows: constraint coefficients then right-hand side.
    let mut t: Vec<Vec<F>> = (0..m)
        .map(|c| {
            let mut v: Vec<F> = payoff.rows.iter().map(|row| F::from_u8(row[c] + 1)).collect();
            v.extend((0..m).map(|s| if s == c { F::unit() } else { F::nil() }));
            v.push(F::unit());
            v
        })
        .collect();
    let mut obj: Vec<F> = (0..width).map(|j| if j < n { F::nil().sub(&F::unit()) } else { F::nil() }).collect();
    obj.push(F::nil());
    let mut basis: Vec<usize> = (n..width).collect();
    for _ in 0..max_pivots {
        // Bland's rule: lowest entering index, then lowest leaving basic variable.
        let Some(enter) = (0..width).find(|&j| obj[j].negative()) else {
            let duals = (0..m).map(|s| obj[n + s].clone()).collect();
            let mut primal = vec![F::nil(); n];
            for (r, &b) in basis.iter().enumerate() {
                if b < n {
                    primal[b] = t[r][width].clone();
                }
            }
            return Ok((primal, duals));
        };
        let mut leave: Option<(usize, F)> = None;
        for r in 0..m {
            if t[r][enter].positive() {
                let ratio = t[r][width].div(&t[r][enter]);
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio.less(best) || (!best.less(&ratio) && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let (pr, _) = leave.ok_or_else(|| Error::Precondition("unbounded game program".into()))?;
        let pivot = t[pr][enter].clone();
        for v in t[pr].iter_mut() {
            *v = v.div(&pivot);
        }
        let prow = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[enter].positive() && !row[enter].negative() {
                continue;
            }
            if r != pr {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v = v.sub(&f.mul(p));
                }
            }
        }
        let f = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&prow) {
            *v = v.sub(&f.mul(p));
        }
        basis[pr] = enter;
    }
    Err(Error::BudgetExhausted("simplex pivot limit".into()))
}

/// Exact optimal strategy for Minnie.
pub fn solve_game(payoff: &PayoffMatrix) -> Result<GameSolution> {
    let (primal, _) = simplex::<Exact>(payoff, 100_000)?;
    let total = primal.iter().fold(Exact::zero(), |a, d| a + d);
    let weights: Vec<(usize, Exact)> =
        primal.into_iter().enumerate().filter(|(_, d)| Signed::is_positive(d)).map(|(r, d)| (r, d / &total)).collect();
    let value = certify(payoff, &weights);
    Ok(GameSolution { weights, value })
}

/// Exact solution required to stay strictly below `target`.
pub fn solve_game_to_target(payoff: &PayoffMatrix, target: &Exact) -> Result<GameSolution> {
    let sol = solve_game(payoff)?;
    if &sol.value >= target {
        return Err(Error::GameTarget { best: exact_string(&sol.value) });
    }
    Ok(sol)
}

/// Floating-point solve with exactly renormalized weights and an exact certificate;
/// also returns Max's approximate optimal distribution over columns.
pub fn solve_game_approx(payoff: &PayoffMatrix) -> Result<(GameSolution, Vec<f64>)> {
    let (primal, duals) = simplex::<f64>(payoff, 1_000_000)?;
    const DENOM: f64 = (1u64 << 40) as f64;
    let total: f64 = primal.iter().filter(|d| **d > 0.0).sum();
    let mut nums: Vec<(usize, u64)> = primal
        .iter()
        .enumerate()
        .filter_map(|(r, &d)| {
            let n = (d.max(0.0) / total * DENOM).round();
            (n >= 1.0).then_some((r, n as u64))
        })
        .collect();
    if nums.is_empty() {
        nums = (0..payoff.row_count()).map(|r| (r, 1)).collect();
    }
    let sum: u64 = nums.iter().map(|p| p.1).sum();
    let weights: Vec<(usize, Exact)> =
        nums.into_iter().map(|(r, n)| (r, Exact::new(BigInt::from(n), BigInt::from(sum)))).collect();
    let value = certify(payoff, &weights);
    let ysum: f64 = duals.iter().map(|d| d.max(0.0)).sum();
    let q = if ysum > 0.0 { duals.iter().map(|d| d.max(0.0)).map(|y| y / ysum).collect() } else { vec![1.0 / payoff.cols as f64; payoff.cols] };
    Ok((GameSolution { weights, value }, q))
}

/// Game value by enumerating equal-size supports, for cross-checking small games.
pub fn support_enumeration_value(payoff: &PayoffMatrix) -> Result<Exact> {
    let (m, n) = (payoff.row_count(), payoff.col_count());
    if m > 8 || n > 8 {
        return Err(Error::ExceedsDeskScale("support enumeration is limited to 8x8 games".into()));
    }
    let a = |r: usize, c: usize| Exact::from_integer(BigInt::from(payoff.rows[r][c]));
    for size in 1..=m.min(n) {
        for rs in subsets(m, size) {
            for cs in subsets(n, size) {
                // Minnie: w on rs equalizing columns cs at value v.
                let Some((w, v)) = equalize(size, |i, j| a(rs[j], cs[i])) else { continue };
                let Some((q, v2)) = equalize(size, |i, j| a(rs[i], cs[j])) else { continue };
                if v != v2 || w.iter().chain(&q).any(Signed::is_negative) {
                    continue;
                }
                let col_ok = (0..n).all(|c| rs.iter().zip(&w).fold(Exact::zero(), |s, (&r, wr)| s + a(r, c) * wr) <= v);
                let row_ok = (0..m).all(|r| cs.iter().zip(&q).fold(Exact::zero(), |s, (&c, qc)| s + a(r, c) * qc) >= v);
                if col_ok && row_ok {
                    return Ok(v);
                }
            }
        }
    }
    Err(Error::Precondition("no equilibrium support found".into()))
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|b| b.count_ones() as usize == size).map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect()).collect()
}

/// Solves `sum_j coef(i,j) x_j = v` for every `i`, with `sum_j x_j = 1`; `None` when singular.
fn equalize(size: usize, coef: impl Fn(usize, usize) -> Exact) -> Option<(Vec<Exact>, Exact)> {
    // Unknowns x_0..x_{size-1}, v; equations: size equalities and the normalization.
    let dim = size + 1;
    let mut mat: Vec<Vec<Exact>> = (0..size)
        .map(|i| {
            let mut row: Vec<Exact> = (0..size).map(|j| coef(i, j)).collect();
            row.push(-Exact::one());
            row.push(Exact::zero());
            row
        })
        .collect();
    let mut norm = vec![Exact::one(); size];
    norm.push(Exact::zero());
    norm.push(Exact::one());
    mat.push(norm);
    for col in 0..dim {
        let piv = (col..dim).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, piv);
        let p = mat[col][col].clone();
        for v in mat[col].iter_mut() {
            *v = &*v / &p;
        }
        let prow = mat[col].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v = &*v - &f * pv;
                }
            }
        }
    }
    let x: Vec<Exact> = (0..size).map(|i| mat[i][dim].clone()).collect();
    Some((x, mat[size][dim].clone()))
}

/// Approximate value in `f64`, convenient for reports.
pub fn value_f64(sol: &GameSolution) -> f64 {
    sol.value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(rows: &[&[u8]]) -> PayoffMatrix {
        PayoffMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn q(p: i64, d: i64) -> Exact {
        Exact::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn all_zero_game_has_value_zero() {
        let g = game(&[&[0, 0], &[0, 0]]);
        assert_eq!(solve_game(&g).unwrap().value, Exact::zero());
    }

    #[test]
    fn matching_pennies() {
        let g = game(&[&[1, 0], &[0, 1]]);
        let s = solve_game(&g).unwrap();
        assert_eq!(s.value, q(1, 2));
        assert_eq!(s.weights, vec![(0, q(1, 2)), (1, q(1, 2))]);
        assert_eq!(support_enumeration_value(&g).unwrap(), q(1, 2));
    }

    #[test]
    fn dominated_rows_get_no_mass() {
        let g = game(&[&[1, 1, 0], &[0, 1, 0], &[1, 0, 1]]);
        let s = solve_game(&g).unwrap();
        assert_eq!(s.value, support_enumeration_value(&g).unwrap());
        assert_eq!(certify(&g, &s.weights), s.value);
    }

    #[test]
    fn target_is_enforced() {
        let g = game(&[&[1, 0], &[0, 1]]);
        assert!(matches!(solve_game_to_target(&g, &q(1, 2)), Err(Error::GameTarget { .. })));
        assert!(solve_game_to_target(&g, &q(3, 5)).is_ok());
    }

    #[test]
    fn approximate_solution_is_certified() {
        let g = game(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 0]]);
        let (s, max_side) = solve_game_approx(&g).unwrap();
        assert_eq!(certify(&g, &s.weights), s.value);
        assert!((value_f64(&s) - 2.0 / 3.0).abs() < 1e-9);
        assert!((max_side.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
