//! List orientations and minimum maximum scaled `k`-outdegree.

use super::graph::OneInclusionGraph;
use crate::error::{Error, Result};

/// Chosen member vertices for every edge, indexed like [`OneInclusionGraph::edges`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KListOrientation {
    pub choice: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrientMode {
    Exact,
    Greedy,
}

#[derive(Clone, Debug)]
pub struct OrientCaps {
    pub max_vertices: usize,
    pub max_edge_members: usize,
    pub max_alternatives: usize,
    pub node_budget: u64,
}

impl Default for OrientCaps {
    fn default() -> Self {
        Self { max_vertices: 4096, max_edge_members: 128, max_alternatives: 50_000, node_budget: 20_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct OrientationResult {
    pub orientation: KListOrientation,
    pub max_outdeg: usize,
    /// True when `max_outdeg` is proven minimal.
    pub optimal: bool,
}

/// Number of directions in which `vertex` is not within `gamma` of any oriented member.
pub fn k_outdeg(g: &OneInclusionGraph, vertex: usize, sigma: &KListOrientation, gamma: i64) -> Result<usize> {
    if sigma.choice.len() != g.edges().len() {
        return Err(Error::Precondition("orientation does not cover every edge".into()));
    }
    let v = &g.vertices()[vertex];
    Ok((0..g.dims())
        .filter(|&i| {
            let e = g.edge_of(vertex, i);
            !sigma.choice[e].iter().any(|&u| (g.vertices()[u][i] - v[i]).abs() <= gamma)
        })
        .count())
}

/// Maximum outdegree over all vertices.
pub fn max_outdeg(g: &OneInclusionGraph, sigma: &KListOrientation, gamma: i64) -> Result<usize> {
    (0..g.vertices().len()).map(|v| k_outdeg(g, v, sigma, gamma)).try_fold(0, |m, d| d.map(|d| m.max(d)))
}

/// Members of one edge chosen by some alternative, and the members it leaves unsatisfied.
#[derive(Clone, Debug)]
struct Alternative {
    chosen: Vec<usize>,
    missed: Vec<usize>,
}

struct HardEdge {
    edge: usize,
    members: Vec<usize>,
    /// Empty in discrete problems, where satisfied members are exactly the chosen ones.
    alternatives: Vec<Alternative>,
}

/// Greedy interval cover of `values` at radius `gamma` with centers drawn from the values;
/// returns the sorted centers if at most `k` suffice.
pub fn value_cover(mut values: Vec<i64>, gamma: i64, k: usize) -> Option<Vec<i64>> {
    values.sort_unstable();
    values.dedup();
    let mut centers = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let first = values[i];
        let mut j = i;
        while j + 1 < values.len() && values[j + 1] <= first + gamma {
            j += 1;
        }
        let c = values[j];
        centers.push(c);
        if centers.len() > k {
            return None;
        }
        while i < values.len() && values[i] <= c + gamma {
            i += 1;
        }
    }
    Some(centers)
}

/// [`value_cover`] on an edge; members of one edge carry distinct values in its direction.
fn member_cover(g: &OneInclusionGraph, members: &[usize], dir: usize, gamma: i64, k: usize) -> Option<Vec<usize>> {
    let val = |v: usize| g.vertices()[v][dir];
    let centers = value_cover(members.iter().map(|&v| val(v)).collect(), gamma, k)?;
    let mut chosen: Vec<usize> = centers.iter().map(|&c| *members.iter().find(|&&v| val(v) == c).expect("center is a member value")).collect();
    chosen.sort_unstable();
    Some(chosen)
}

fn alternatives_for(g: &OneInclusionGraph, members: &[usize], dir: usize, gamma: i64, k: usize, cap: usize) -> Result<Vec<Alternative>> {
    let m = members.len();
    let mut masks: Vec<(u128, Vec<usize>)> = Vec::new();
    let mut pick: Vec<usize> = Vec::with_capacity(k);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &OneInclusionGraph,
        members: &[usize],
        dir: usize,
        gamma: i64,
        k: usize,
        start: usize,
        pick: &mut Vec<usize>,
        out: &mut Vec<(u128, Vec<usize>)>,
        cap: usize,
    ) -> Result<()> {
        if pick.len() == k {
            if out.len() >= cap {
                return Err(Error::ExceedsDeskScale("too many orientation alternatives on one edge".into()));
            }
            let mut mask = 0u128;
            for (t, &v) in members.iter().enumerate() {
                if pick.iter().any(|&p| (g.vertices()[members[p]][dir] - g.vertices()[v][dir]).abs() <= gamma) {
                    mask |= 1 << t;
                }
            }
            out.push((mask, pick.iter().map(|&p| members[p]).collect()));
            return Ok(());
        }
        for i in start..members.len() {
            pick.push(i);
            rec(g, members, dir, gamma, k, i + 1, pick, out, cap)?;
            pick.pop();
        }
        Ok(())
    }
    rec(g, members, dir, gamma, k.min(m), 0, &mut pick, &mut masks, cap)?;
    // Keep inclusion-maximal satisfied sets, first occurrence wins.
    let mut keep: Vec<(u128, Vec<usize>)> = Vec::new();
    for (mask, chosen) in masks {
        if keep.iter().any(|(km, _)| km & mask == mask) {
            continue;
        }
        keep.retain(|(km, _)| km & mask != *km);
        keep.push((mask, chosen));
    }
    keep.sort_by(|a, b| a.1.cmp(&b.1));
    Ok(keep
        .into_iter()
        .map(|(mask, chosen)| Alternative {
            chosen,
            missed: (0..m).filter(|t| mask & (1 << t) == 0).map(|t| members[t]).collect(),
        })
        .collect())
}

struct Problem {
    vertices: usize,
    k: usize,
    base: Vec<usize>,
    fixed: Vec<Option<Vec<usize>>>,
    hard: Vec<HardEdge>,
    discrete: bool,
}

/// Per-hard-edge chosen members.
type Picks = Vec<Vec<usize>>;

fn setup(g: &OneInclusionGraph, gamma: i64, k: usize, caps: &OrientCaps) -> Result<Problem> {
    if k == 0 {
        return Err(Error::Precondition("list size k must be at least 1".into()));
    }
    let mut fixed = vec![None; g.edges().len()];
    let mut hard = Vec::new();
    for (ei, e) in g.edges().iter().enumerate() {
        match member_cover(g, &e.members, e.direction, gamma, k) {
            Some(cover) => fixed[ei] = Some(cover),
            None => hard.push(HardEdge { edge: ei, members: e.members.clone(), alternatives: vec![] }),
        }
    }
    let discrete = hard.iter().all(|h| {
        let dir = g.edges()[h.edge].direction;
        let mut vals: Vec<i64> = h.members.iter().map(|&v| g.vertices()[v][dir]).collect();
        vals.sort_unstable();
        vals.windows(2).all(|w| w[1] - w[0] > gamma)
    });
    let mut base = vec![0usize; g.vertices().len()];
    if !discrete {
        for h in &mut hard {
            if h.members.len() > caps.max_edge_members {
                return Err(Error::ExceedsDeskScale(format!("edge with {} members", h.members.len())));
            }
            let dir = g.edges()[h.edge].direction;
            let mut alternatives = alternatives_for(g, &h.members, dir, gamma, k, caps.max_alternatives)?;
            // Vertices missed by every alternative are charged once up front.
            let always: Vec<usize> = alternatives[0]
                .missed
                .iter()
                .copied()
                .filter(|v| alternatives.iter().all(|a| a.missed.contains(v)))
                .collect();
            for &v in &always {
                base[v] += 1;
            }
            for a in &mut alternatives {
                a.missed.retain(|v| !always.contains(v));
            }
            h.alternatives = alternatives;
        }
    }
    Ok(Problem { vertices: g.vertices().len(), k, base, fixed, hard, discrete })
}

/// Dinic maximum flow on a small network.
struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new() }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) -> usize {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
        self.to.len() - 2
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.adj.len();
        let mut total = 0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    if self.cap[e] > 0 && level[self.to[e]] == usize::MAX {
                        level[self.to[e]] = level[u] + 1;
                        queue.push_back(self.to[e]);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            let mut iter = vec![0usize; n];
            loop {
                let f = self.push(s, t, i64::MAX, &level, &mut iter);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }

    fn push(&mut self, u: usize, t: usize, f: i64, level: &[usize], iter: &mut [usize]) -> i64 {
        if u == t {
            return f;
        }
        while iter[u] < self.adj[u].len() {
            let e = self.adj[u][iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let d = self.push(v, t, f.min(self.cap[e]), level, iter);
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            iter[u] += 1;
        }
        0
    }
}

impl Problem {
    fn orientation(&self, picks: &Picks) -> KListOrientation {
        let mut choice: Vec<Vec<usize>> = self.fixed.iter().map(|f| f.clone().unwrap_or_default()).collect();
        for (h, p) in self.hard.iter().zip(picks) {
            choice[h.edge] = p.clone();
        }
        KListOrientation { choice }
    }

    fn hard_degree(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertices];
        for h in &self.hard {
            for &v in &h.members {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Discrete case: every hard edge keeps `k` members, so feasibility of a load limit is a flow problem.
    fn flow_feasible(&self, limit: usize) -> Option<Picks> {
        let deg = self.hard_degree();
        let need: Vec<i64> = deg.iter().map(|&d| d.saturating_sub(limit) as i64).collect();
        let demand: i64 = need.iter().sum();
        let ne = self.hard.len();
        let (s, t) = (0, 1);
        let mut net = FlowNetwork::new(2 + ne + self.vertices);
        let mut arcs: Vec<Vec<(usize, usize)>> = Vec::with_capacity(ne);
        for (i, h) in self.hard.iter().enumerate() {
            net.add(s, 2 + i, self.k as i64);
            arcs.push(h.members.iter().map(|&v| (v, net.add(2 + i, 2 + ne + v, 1))).collect());
        }
        for (v, &nd) in need.iter().enumerate() {
            if nd > 0 {
                net.add(2 + ne + v, t, nd);
            }
        }
        if net.max_flow(s, t) < demand {
            return None;
        }
        Some(
            arcs.iter()
                .zip(&self.hard)
                .map(|(list, h)| {
                    let mut chosen: Vec<usize> = list.iter().filter(|&&(_, a)| net.cap[a] == 0).map(|&(v, _)| v).collect();
                    for &v in &h.members {
                        if chosen.len() >= self.k {
                            break;
                        }
                        if !chosen.contains(&v) {
                            chosen.push(v);
                        }
                    }
                    chosen.sort_unstable();
                    chosen
                })
                .collect(),
        )
    }

    fn loads(&self, picks: &Picks) -> Vec<usize> {
        let mut load = self.base.clone();
        for (h, p) in self.hard.iter().zip(picks) {
            if self.discrete {
                for v in h.members.iter().filter(|v| !p.contains(v)) {
                    load[*v] += 1;
                }
            } else {
                let alt = h.alternatives.iter().find(|a| &a.chosen == p).expect("pick is an alternative");
                for &v in &alt.missed {
                    load[v] += 1;
                }
            }
        }
        load
    }

    fn greedy(&self) -> (Picks, usize) {
        let mut load = self.base.clone();
        let mut picks = Vec::with_capacity(self.hard.len());
        for h in &self.hard {
            if self.discrete {
                // Keep the k most loaded members.
                let mut order = h.members.clone();
                order.sort_by_key(|&v| (std::cmp::Reverse(load[v]), v));
                let mut chosen: Vec<usize> = order[..self.k].to_vec();
                chosen.sort_unstable();
                for v in h.members.iter().filter(|v| !chosen.contains(v)) {
                    load[*v] += 1;
                }
                picks.push(chosen);
            } else {
                let score = |a: &Alternative| {
                    let worst = a.missed.iter().map(|&v| load[v] + 1).max().unwrap_or(0);
                    (worst, a.missed.len())
                };
                let (best, _) = h
                    .alternatives
                    .iter()
                    .enumerate()
                    .min_by_key(|(i, a)| (score(a), *i))
                    .expect("hard edges have alternatives");
                for &v in &h.alternatives[best].missed {
                    load[v] += 1;
                }
                picks.push(h.alternatives[best].chosen.clone());
            }
        }
        let max = load.iter().copied().max().unwrap_or(0);
        (picks, max)
    }

    fn min_extra(&self, h: &HardEdge) -> usize {
        if self.discrete {
            h.members.len() - self.k
        } else {
            h.alternatives.iter().map(|a| a.missed.len()).min().unwrap_or(0)
        }
    }

    fn lower_bound(&self) -> usize {
        let base_max = self.base.iter().copied().max().unwrap_or(0);
        let total: usize = self.base.iter().sum::<usize>() + self.hard.iter().map(|h| self.min_extra(h)).sum::<usize>();
        base_max.max(total.div_ceil(self.vertices.max(1)))
    }

    /// Hard edges grouped into independent components (linked through chargeable vertices).
    fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for h in &self.hard {
            let vs: Vec<usize> = h.alternatives.iter().flat_map(|a| a.missed.iter().copied()).collect();
            if let Some(&first) = vs.first() {
                for &v in &vs[1..] {
                    let (a, b) = (find(&mut parent, first), find(&mut parent, v));
                    parent[a] = b;
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
        for (i, h) in self.hard.iter().enumerate() {
            let key = h.alternatives.iter().flat_map(|a| a.missed.first()).next().map_or(usize::MAX - i, |&v| find(&mut parent, v));
            groups.entry(key).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Branch and bound over alternatives of one component: picks keeping every load at most `limit`.
    fn search_component(&self, comp: &[usize], limit: usize, budget: &mut u64) -> Result<Option<Vec<usize>>> {
        if self.base.iter().any(|&b| b > limit) {
            return Ok(None);
        }
        let mut order = comp.to_vec();
        order.sort_by_key(|&i| (self.hard[i].alternatives.len(), self.hard[i].edge));
        let mut suffix = vec![0usize; order.len() + 1];
        for t in (0..order.len()).rev() {
            suffix[t] = suffix[t + 1] + self.min_extra(&self.hard[order[t]]);
        }
        let mut verts: Vec<usize> = comp.iter().flat_map(|&i| self.hard[i].members.iter().copied()).collect();
        verts.sort_unstable();
        verts.dedup();
        let mut load = self.base.clone();
        let mut slack: usize = verts.iter().map(|&v| limit - load[v]).sum();
        let mut picks = vec![0usize; self.hard.len()];
        let ok = self.dfs(0, limit, &order, &suffix, &mut load, &mut slack, &mut picks, budget)?;
        Ok(ok.then(|| order.iter().map(|&i| picks[i]).collect()))
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        t: usize,
        limit: usize,
        order: &[usize],
        suffix: &[usize],
        load: &mut Vec<usize>,
        slack: &mut usize,
        picks: &mut Vec<usize>,
        budget: &mut u64,
    ) -> Result<bool> {
        if t == order.len() {
            return Ok(true);
        }
        if suffix[t] > *slack {
            return Ok(false);
        }
        if *budget == 0 {
            return Err(Error::BudgetExhausted("orientation search node budget".into()));
        }
        *budget -= 1;
        let h = &self.hard[order[t]];
        let mut idx: Vec<usize> = (0..h.alternatives.len())
            .filter(|&i| h.alternatives[i].missed.iter().all(|&v| load[v] < limit))
            .collect();
        idx.sort_by_key(|&i| {
            let a = &h.alternatives[i];
            (a.missed.iter().map(|&v| load[v]).max().unwrap_or(0), a.missed.len(), i)
        });
        for i in idx {
            let a = &h.alternatives[i];
            for &v in &a.missed {
                load[v] += 1;
            }
            *slack -= a.missed.len();
            picks[order[t]] = i;
            if self.dfs(t + 1, limit, order, suffix, load, slack, picks, budget)? {
                return Ok(true);
            }
            for &v in &a.missed {
                load[v] -= 1;
            }
            *slack += a.missed.len();
        }
        Ok(false)
    }

    /// Picks achieving load at most `limit`, if any.
    fn feasible(&self, limit: usize, budget: &mut u64) -> Result<Option<Picks>> {
        if self.discrete {
            return Ok(self.flow_feasible(limit));
        }
        if self.base.iter().any(|&b| b > limit) {
            return Ok(None);
        }
        let mut picks: Picks = vec![Vec::new(); self.hard.len()];
        for comp in self.components() {
            let Some(choice) = self.search_component(&comp, limit, budget)? else {
                return Ok(None);
            };
            let mut order = comp.clone();
            order.sort_by_key(|&i| (self.hard[i].alternatives.len(), self.hard[i].edge));
            for (&i, alt) in order.iter().zip(choice) {
                picks[i] = self.hard[i].alternatives[alt].chosen.clone();
            }
        }
        Ok(Some(picks))
    }
}

/// Orientation minimizing the maximum scaled `k`-outdegree (exact) or a certified greedy one.
pub fn min_max_k_outdeg(g: &OneInclusionGraph, gamma: i64, k: usize, mode: OrientMode) -> Result<OrientationResult> {
    min_max_k_outdeg_with(g, gamma, k, mode, &OrientCaps::default())
}

pub fn min_max_k_outdeg_with(
    g: &OneInclusionGraph,
    gamma: i64,
    k: usize,
    mode: OrientMode,
    caps: &OrientCaps,
) -> Result<OrientationResult> {
    if mode == OrientMode::Exact && g.vertices().len() > caps.max_vertices {
        return Err(Error::ExceedsDeskScale(format!(
            "{} vertices exceed the exact orientation cap {}; use greedy mode",
            g.vertices().len(),
            caps.max_vertices
        )));
    }
    let p = setup(g, gamma, k, caps)?;
    let (greedy_picks, greedy_max) = p.greedy();
    let lb = p.lower_bound();
    if mode == OrientMode::Greedy || greedy_max <= lb {
        return Ok(OrientationResult {
            orientation: p.orientation(&greedy_picks),
            max_outdeg: greedy_max,
            optimal: greedy_max <= lb,
        });
    }
    let mut budget = caps.node_budget;
    for limit in lb..greedy_max {
        if let Some(picks) = p.feasible(limit, &mut budget)? {
            let achieved = p.loads(&picks).into_iter().max().unwrap_or(0);
            debug_assert!(achieved <= limit);
            return Ok(OrientationResult { orientation: p.orientation(&picks), max_outdeg: achieved, optimal: true });
        }
    }
    Ok(OrientationResult { orientation: p.orientation(&greedy_picks), max_outdeg: greedy_max, optimal: true })
}

/// Decides whether every orientation leaves some vertex with outdegree at least `threshold`.
pub fn forces_outdeg(g: &OneInclusionGraph, gamma: i64, k: usize, threshold: usize, caps: &OrientCaps) -> Result<bool> {
    if threshold == 0 {
        return Ok(true);
    }
    let p = setup(g, gamma, k, caps)?;
    if p.lower_bound() >= threshold {
        return Ok(true);
    }
    let (_, greedy_max) = p.greedy();
    if greedy_max < threshold {
        return Ok(false);
    }
    let mut budget = caps.node_budget;
    Ok(p.feasible(threshold - 1, &mut budget)?.is_none())
}

/// True when some edge cannot be covered by `k` of its own members.
pub fn has_hard_edge(g: &OneInclusionGraph, gamma: i64, k: usize) -> bool {
    g.edges().iter().any(|e| member_cover(g, &e.members, e.direction, gamma, k).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive minimum over all per-edge subsets of size at most k.
    fn brute(g: &OneInclusionGraph, gamma: i64, k: usize) -> usize {
        let options: Vec<Vec<Vec<usize>>> = g
            .edges()
            .iter()
            .map(|e| {
                let m = e.members.len();
                (1u32..(1 << m))
                    .filter(|mask| mask.count_ones() as usize <= k)
                    .map(|mask| (0..m).filter(|t| mask & (1 << t) != 0).map(|t| e.members[t]).collect())
                    .collect()
            })
            .collect();
        let mut best = usize::MAX;
        let mut idx = vec![0usize; options.len()];
        loop {
            let sigma = KListOrientation { choice: idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect() };
            best = best.min(max_outdeg(g, &sigma, gamma).unwrap());
            let mut t = 0;
            loop {
                if t == idx.len() {
                    return best;
                }
                idx[t] += 1;
                if idx[t] < options[t].len() {
                    break;
                }
                idx[t] = 0;
                t += 1;
            }
        }
    }

    #[test]
    fn small_edges_orient_to_zero() {
        let g = OneInclusionGraph::from_rows(&[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let r = min_max_k_outdeg(&g, 0, 2, OrientMode::Exact).unwrap();
        assert_eq!(r.max_outdeg, 0);
    }

    #[test]
    fn cube_needs_outdegree_two() {
        let rows: Vec<Vec<i64>> = (0..8).map(|b| (0..3).map(|i| (b >> i) & 1).collect()).collect();
        let g = OneInclusionGraph::from_rows(&rows).unwrap();
        let r = min_max_k_outdeg(&g, 0, 1, OrientMode::Exact).unwrap();
        assert_eq!(r.max_outdeg, 2);
        assert!(r.optimal);
        assert_eq!(max_outdeg(&g, &r.orientation, 0).unwrap(), 2);
        assert!(forces_outdeg(&g, 0, 1, 2, &OrientCaps::default()).unwrap());
        assert!(!forces_outdeg(&g, 0, 1, 3, &OrientCaps::default()).unwrap());
        let total: usize = (0..8).map(|v| k_outdeg(&g, v, &r.orientation, 0).unwrap()).sum();
        assert_eq!(total, g.edges().len());
    }

    #[test]
    fn exact_matches_brute_force_on_small_graphs() {
        let classes: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![0, 1], vec![1, 2], vec![2, 2]],
            vec![vec![0, 0, 0], vec![2, 0, 0], vec![4, 0, 0], vec![0, 1, 0], vec![0, 1, 3], vec![4, 1, 0]],
            (0..9).map(|b| vec![b % 3, b / 3]).collect(),
        ];
        for rows in classes {
            let g = OneInclusionGraph::from_rows(&rows).unwrap();
            for gamma in [0, 1] {
                for k in [1, 2] {
                    let r = min_max_k_outdeg(&g, gamma, k, OrientMode::Exact).unwrap();
                    assert_eq!(r.max_outdeg, brute(&g, gamma, k), "gamma {gamma} k {k} rows {rows:?}");
                    assert_eq!(max_outdeg(&g, &r.orientation, gamma).unwrap(), r.max_outdeg);
                    assert!(r.orientation.choice.iter().all(|c| !c.is_empty() && c.len() <= k));
                }
            }
        }
    }

    #[test]
    fn missing_orientation_is_an_error() {
        let g = OneInclusionGraph::from_rows(&[vec![0]]).unwrap();
        assert!(k_outdeg(&g, 0, &KListOrientation { choice: vec![] }, 0).is_err());
    }
}
