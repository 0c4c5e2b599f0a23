//! Shared search for product-pattern shattering.
//!
//! Every shattering notion used here has the same shape: each point of a
//! candidate sequence picks a *bucket map* sending the values observed at
//! that point to one of `k+1` buckets (or to none), and the sequence is
//! shattered when every bucket pattern is realized by some row. The notions
//! differ only in which bucket maps are admissible at a point.

use std::collections::HashSet;

use crate::error::{Error, Result};

pub(crate) const UNASSIGNED: u8 = u8::MAX;
pub(crate) const UNDEFINED: u16 = u16::MAX;

/// Admissible bucket map at one point, indexed by value index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BucketMap {
    pub buckets: Vec<u8>,
    /// Anchor values (numerators on the search scale) that certify the map.
    pub anchors: Vec<i64>,
}

/// One point prepared for the search.
#[derive(Clone, Debug)]
pub(crate) struct SearchColumn {
    pub point: usize,
    /// Value index of every row at this point, or `UNDEFINED`.
    pub row_values: Vec<u16>,
    pub maps: Vec<BucketMap>,
}

#[derive(Clone, Debug)]
pub(crate) struct Found {
    pub columns: Vec<usize>,
    pub maps: Vec<usize>,
    /// `(pattern, row)` with the lowest realizing row for each pattern, in pattern order.
    pub assignment: Vec<(Vec<u8>, usize)>,
}

pub(crate) struct SearchLimits {
    pub max_d: usize,
    pub node_budget: u64,
}

/// Keeps only maps not dominated by another map (a dominating map agrees on every assigned value
/// and assigns at least as many values).
pub(crate) fn maximal_maps(mut maps: Vec<BucketMap>) -> Vec<BucketMap> {
    maps.sort_by(|a, b| a.buckets.cmp(&b.buckets));
    maps.dedup_by(|a, b| a.buckets == b.buckets);
    let dominated = |a: &BucketMap, b: &BucketMap| {
        a.buckets != b.buckets && a.buckets.iter().zip(&b.buckets).all(|(&x, &y)| x == UNASSIGNED || x == y)
    };
    let keep: Vec<bool> = maps.iter().map(|a| !maps.iter().any(|b| dominated(a, b))).collect();
    maps.into_iter().zip(keep).filter_map(|(m, k)| k.then_some(m)).collect()
}

/// Largest shattered sequence size, with the first witness of that size in enumeration order.
pub(crate) fn search(columns: &[SearchColumn], rows: usize, k: usize, limits: &SearchLimits) -> Result<(usize, Option<Found>)> {
    let base = k + 1;
    let mut cap = 0usize;
    let mut reach = 1usize;
    while reach.saturating_mul(base) <= rows {
        reach *= base;
        cap += 1;
    }
    let cap = cap.min(limits.max_d).min(columns.len());
    let mut budget = limits.node_budget;

    let mut best: Option<Found> = None;
    let mut shattered_prev: HashSet<Vec<usize>> = HashSet::new();
    shattered_prev.insert(Vec::new());
    let mut prev_list: Vec<Vec<usize>> = vec![Vec::new()];

    for _ in 1..=cap {
        let mut current: Vec<Vec<usize>> = Vec::new();
        let mut current_set: HashSet<Vec<usize>> = HashSet::new();
        let mut first: Option<Found> = None;
        for prefix in &prev_list {
            let start = prefix.last().map_or(0, |&c| c + 1);
            for next in start..columns.len() {
                if columns[next].maps.is_empty() {
                    continue;
                }
                let mut cand = prefix.clone();
                cand.push(next);
                // Every (d-1)-subset must itself be shattered.
                let hereditary = (0..cand.len()).all(|skip| {
                    let sub: Vec<usize> = cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &c)| c).collect();
                    shattered_prev.contains(&sub)
                });
                if !hereditary {
                    continue;
                }
                if let Some(found) = shatter_set(columns, &cand, rows, base, &mut budget)? {
                    if first.is_none() {
                        first = Some(found);
                    }
                    current_set.insert(cand.clone());
                    current.push(cand);
                }
            }
        }
        match first {
            None => break,
            Some(f) => best = Some(f),
        }
        shattered_prev = current_set;
        prev_list = current;
    }
    let d = best.as_ref().map_or(0, |f| f.columns.len());
    Ok((d, best))
}

/// Tries every combination of maps on the given columns.
fn shatter_set(columns: &[SearchColumn], cols: &[usize], rows: usize, base: usize, budget: &mut u64) -> Result<Option<Found>> {
    let level0: Vec<(usize, usize)> = (0..rows).map(|r| (r, 0)).collect();
    let mut chosen = Vec::with_capacity(cols.len());
    let res = descend(columns, cols, base, &level0, 1, &mut chosen, budget)?;
    Ok(res.map(|(maps, alive)| {
        let d = cols.len();
        let total = base.pow(d as u32);
        let mut first_row = vec![usize::MAX; total];
        for &(r, code) in &alive {
            if first_row[code] == usize::MAX || r < first_row[code] {
                first_row[code] = r;
            }
        }
        let assignment = (0..total)
            .map(|code| {
                let mut pat = vec![0u8; d];
                let mut c = code;
                for i in (0..d).rev() {
                    pat[i] = (c % base) as u8;
                    c /= base;
                }
                (pat, first_row[code])
            })
            .collect();
        Found { columns: cols.iter().map(|&c| columns[c].point).collect(), maps, assignment }
    }))
}

type Alive = Vec<(usize, usize)>;

fn descend(
    columns: &[SearchColumn],
    cols: &[usize],
    base: usize,
    alive: &Alive,
    patterns: usize,
    chosen: &mut Vec<usize>,
    budget: &mut u64,
) -> Result<Option<(Vec<usize>, Alive)>> {
    let depth = chosen.len();
    if depth == cols.len() {
        return Ok(Some((chosen.clone(), alive.clone())));
    }
    let col = &columns[cols[depth]];
    let next_patterns = patterns * base;
    let mut seen = vec![false; next_patterns];
    for (mi, map) in col.maps.iter().enumerate() {
        if *budget == 0 {
            return Err(Error::BudgetExhausted("shattering search node budget".into()));
        }
        *budget -= 1;
        seen.iter_mut().for_each(|s| *s = false);
        let mut covered = 0;
        let mut next: Alive = Vec::with_capacity(alive.len());
        for &(r, code) in alive {
            let vi = col.row_values[r];
            if vi == UNDEFINED {
                continue;
            }
            let b = map.buckets[vi as usize];
            if b == UNASSIGNED {
                continue;
            }
            let c = code * base + b as usize;
            if !seen[c] {
                seen[c] = true;
                covered += 1;
            }
            next.push((r, c));
        }
        if covered < next_patterns {
            continue;
        }
        chosen.push(mi);
        if let Some(found) = descend(columns, cols, base, &next, next_patterns, chosen, budget)? {
            return Ok(Some(found));
        }
        chosen.pop();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominated_maps_are_removed() {
        let m = |b: Vec<u8>| BucketMap { buckets: b, anchors: vec![] };
        let maps = vec![m(vec![0, UNASSIGNED, 1]), m(vec![0, 1, 1]), m(vec![0, 0, 1]), m(vec![0, 1, 1])];
        let kept = maximal_maps(maps);
        assert_eq!(kept.len(), 2);
        assert!(kept.iter().all(|m| !m.buckets.contains(&UNASSIGNED)));
    }
}
