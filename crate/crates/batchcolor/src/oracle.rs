//! Exact coloring oracles.
//!
//! Both oracles are exponential-time searches intended for desk-scale
//! verification. Cheap bound closure (no edges, bipartite, greedy bounds
//! meeting) resolves arbitrarily large easy inputs exactly; the configured
//! size limit only gates inputs that would require actual branching.

use crate::graph::Graph;
use thiserror::Error;

pub const DEFAULT_CHROMATIC_LIMIT: usize = 30;
pub const DEFAULT_SUM_LIMIT: usize = 16;

/// Environment override for both oracle size limits.
pub const ORACLE_LIMIT_ENV: &str = "BATCHCOLOR_ORACLE_LIMIT";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle size limit exceeded: {n} vertices need branching search, limit is {limit} (set {ORACLE_LIMIT_ENV} to raise)")]
    SizeLimitExceeded { n: usize, limit: usize },
}

fn env_limit() -> Option<usize> {
    std::env::var(ORACLE_LIMIT_ENV).ok()?.parse().ok()
}

pub fn chromatic_limit() -> usize {
    env_limit().unwrap_or(DEFAULT_CHROMATIC_LIMIT)
}

pub fn sum_limit() -> usize {
    env_limit().unwrap_or(DEFAULT_SUM_LIMIT)
}

/// Greedy clique heuristic: a lower bound on the chromatic number.
fn greedy_clique(g: &Graph) -> usize {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut best = usize::from(g.n() > 0);
    for &seed in order.iter().take(8) {
        let mut clique = vec![seed];
        for &v in &order {
            if v != seed && clique.iter().all(|&c| g.has_edge(v, c)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Greedy coloring picking the most saturated vertex each round.
fn dsatur_greedy(g: &Graph) -> (u64, Vec<u64>) {
    let n = g.n();
    let mut color = vec![0u64; n];
    let mut max_used = 0u64;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == 0)
            .max_by_key(|&v| {
                let sat = g
                    .neighbors(v)
                    .iter()
                    .filter_map(|&w| (color[w] != 0).then_some(color[w]))
                    .collect::<std::collections::BTreeSet<_>>()
                    .len();
                (sat, g.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        color[v] = smallest_free(g, &color, v);
        max_used = max_used.max(color[v]);
    }
    (max_used, color)
}

fn smallest_free(g: &Graph, color: &[u64], v: usize) -> u64 {
    let mut used: Vec<u64> = g.neighbors(v).iter().map(|&w| color[w]).filter(|&c| c != 0).collect();
    used.sort_unstable();
    used.dedup();
    let mut c = 1u64;
    for u in used {
        if u == c {
            c += 1;
        } else if u > c {
            break;
        }
    }
    c
}

/// Backtracking search for a proper coloring with at most `t` colors.
fn try_color_with(g: &Graph, t: u64) -> Option<Vec<u64>> {
    let n = g.n();
    let mut color = vec![0u64; n];

    fn rec(g: &Graph, color: &mut Vec<u64>, t: u64, done: usize, max_used: u64) -> bool {
        let n = g.n();
        if done == n {
            return true;
        }
        // Most saturated uncolored vertex next; ties to higher degree.
        let v = (0..n)
            .filter(|&v| color[v] == 0)
            .max_by_key(|&v| {
                let sat = g
                    .neighbors(v)
                    .iter()
                    .filter_map(|&w| (color[w] != 0).then_some(color[w]))
                    .collect::<std::collections::BTreeSet<_>>()
                    .len();
                (sat, g.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        // Colors beyond max_used+1 are interchangeable; trying one suffices.
        let cap = t.min(max_used + 1);
        for c in 1..=cap {
            if g.neighbors(v).iter().all(|&w| color[w] != c) {
                color[v] = c;
                if rec(g, color, t, done + 1, max_used.max(c)) {
                    return true;
                }
                color[v] = 0;
            }
        }
        false
    }

    rec(g, &mut color, t, 0, 0).then_some(color)
}

/// Exact chromatic number with a witness coloring.
pub fn chromatic_number_exact(g: &Graph) -> Result<(u64, Vec<u64>), OracleError> {
    if g.n() == 0 {
        return Ok((0, Vec::new()));
    }
    if g.edge_count() == 0 {
        return Ok((1, vec![1; g.n()]));
    }
    if let Some(two) = g.bipartition() {
        return Ok((2, two));
    }
    // An odd cycle exists, so at least 3 colors are needed.
    let lb = greedy_clique(g).max(3) as u64;
    let limit = chromatic_limit();
    if g.n() > limit {
        // Only bound closure is allowed past the limit.
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (0..g.n()).collect();
            o.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
            o
        };
        let colors = crate::graph::first_fit(g, &order);
        let ub = colors.iter().copied().max().unwrap();
        if ub == lb {
            return Ok((ub, colors));
        }
        return Err(OracleError::SizeLimitExceeded { n: g.n(), limit });
    }
    let (ub, witness) = dsatur_greedy(g);
    if ub == lb {
        return Ok((ub, witness));
    }
    for t in lb..ub {
        if let Some(w) = try_color_with(g, t) {
            return Ok((t, w));
        }
    }
    Ok((ub, witness))
}

/// All maximal independent sets of the subgraph induced on bitmask `s`.
fn maximal_independent_sets(adj: &[u64], s: u64) -> Vec<u64> {
    if s == 0 {
        return vec![0];
    }
    let v = s.trailing_zeros() as usize;
    let vbit = 1u64 << v;
    let nv = adj[v] & s;
    let mut out: Vec<u64> = maximal_independent_sets(adj, s & !(nv | vbit))
        .into_iter()
        .map(|m| m | vbit)
        .collect();
    if nv != 0 {
        // Sets omitting v must contain one of its neighbors, or v could join.
        out.extend(
            maximal_independent_sets(adj, s & !vbit).into_iter().filter(|m| m & nv != 0),
        );
    }
    out
}

/// Exact minimum color sum with a witness coloring.
///
/// The color sum splits over connected components, so every component is
/// solved on its own and components may reuse colors. Edgeless components
/// take color 1; complete components take colors `1..=n` (every vertex needs
/// its own color, and those are the cheapest distinct ones); both close in
/// constant form at any size. Only mixed components hit the search, which
/// peels color classes off the remaining vertex set: some optimal coloring
/// always has a maximal independent set as its current cheapest class, so the
/// search ranges over maximal independent sets only, memoized by vertex set.
/// The size limit applies per mixed component.
pub fn min_sum_coloring_exact(g: &Graph) -> Result<(u64, Vec<u64>), OracleError> {
    let n = g.n();
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let limit = sum_limit();
    let mut colors = vec![0u64; n];
    let mut total = 0u64;
    for comp in g.components() {
        let size = comp.len();
        // Components are closed under adjacency, so per-vertex degrees count
        // exactly the within-component edges.
        let within_edges: usize = comp.iter().map(|&v| g.neighbors(v).len()).sum::<usize>() / 2;
        if within_edges == 0 {
            for &v in &comp {
                colors[v] = 1;
            }
            total += size as u64;
            continue;
        }
        if within_edges == size * (size - 1) / 2 {
            for (rank, &v) in comp.iter().enumerate() {
                colors[v] = (rank + 1) as u64;
            }
            total += (size as u64) * (size as u64 + 1) / 2;
            continue;
        }
        if size > limit {
            return Err(OracleError::SizeLimitExceeded { n: size, limit });
        }
        assert!(size <= 64, "bitmask search supports at most 64 vertices");
        let local: std::collections::HashMap<usize, usize> =
            comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<u64> = comp
            .iter()
            .map(|&v| g.neighbors(v).iter().fold(0u64, |m, &w| m | (1 << local[&w])))
            .collect();

        let full: u64 = if size == 64 { !0 } else { (1 << size) - 1 };
        let mut memo: std::collections::HashMap<u64, (u64, u64)> =
            std::collections::HashMap::new();

        fn solve(adj: &[u64], s: u64, memo: &mut std::collections::HashMap<u64, (u64, u64)>) -> u64 {
            if s == 0 {
                return 0;
            }
            if let Some(&(cost, _)) = memo.get(&s) {
                return cost;
            }
            let mut best = u64::MAX;
            let mut best_class = 0u64;
            for class in maximal_independent_sets(adj, s) {
                let sub = solve(adj, s & !class, memo);
                if sub < best {
                    best = sub;
                    best_class = class;
                }
            }
            let cost = s.count_ones() as u64 + best;
            memo.insert(s, (cost, best_class));
            cost
        }

        total += solve(&adj, full, &mut memo);
        let mut s = full;
        let mut c = 1u64;
        while s != 0 {
            let class = memo[&s].1;
            for (li, &v) in comp.iter().enumerate() {
                if class & (1 << li) != 0 {
                    colors[v] = c;
                }
            }
            s &= !class;
            c += 1;
        }
    }
    Ok((total, colors))
}
