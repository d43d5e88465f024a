//! Seeded random instance generators for stress tests and trial fan-out.
//!
//! Everything here is deterministic given the RNG state, so failures
//! reproduce from a seed alone.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{Instance, Objective, RevealedBatch};
use crate::interval::{overlap_edges, Interval};
use crate::rat::Rat;

/// Random `k`-batch graph instance on `n` vertices; every vertex lands in a
/// uniform batch and every pair becomes an edge with probability
/// `edge_prob`, attached to the batch where its later endpoint arrives.
pub fn random_graph_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    edge_prob: f64,
    objective: Objective,
) -> Instance {
    assert!(k >= 1);
    let batch_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let mut vertices: Vec<Vec<String>> = vec![Vec::new(); k];
    for (v, &b) in batch_of.iter().enumerate() {
        vertices[b].push(format!("v{v}"));
    }
    let mut edges: Vec<Vec<(String, String)>> = vec![Vec::new(); k];
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen_bool(edge_prob) {
                let arrival = batch_of[a].max(batch_of[b]);
                edges[arrival].push((format!("v{a}"), format!("v{b}")));
            }
        }
    }
    Instance {
        objective,
        batches: vertices
            .into_iter()
            .zip(edges)
            .map(|(vs, es)| RevealedBatch::graph_batch(vs, es))
            .collect(),
    }
}

/// Random forest arriving in `k` batches: each vertex beyond the first
/// attaches to an earlier vertex with probability `attach_prob` (and starts
/// a new tree otherwise). Prefixes of forests are forests, so every batch
/// boundary preserves the class.
pub fn random_forest_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    attach_prob: f64,
) -> Instance {
    assert!(k >= 1);
    let batch_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let mut vertices: Vec<Vec<String>> = vec![Vec::new(); k];
    for (v, &b) in batch_of.iter().enumerate() {
        vertices[b].push(format!("v{v}"));
    }
    let mut edges: Vec<Vec<(String, String)>> = vec![Vec::new(); k];
    for v in 1..n {
        if rng.gen_bool(attach_prob) {
            let parent = rng.gen_range(0..v);
            let arrival = batch_of[v].max(batch_of[parent]);
            edges[arrival].push((format!("v{parent}"), format!("v{v}")));
        }
    }
    Instance {
        objective: Objective::SumColors,
        batches: vertices
            .into_iter()
            .zip(edges)
            .map(|(vs, es)| RevealedBatch::graph_batch(vs, es))
            .collect(),
    }
}

/// Random interval with rational endpoints and independently open or closed
/// ends, starting within `[0, span)`.
pub fn random_interval(rng: &mut ChaCha8Rng, span: i128, id: impl Into<String>) -> Interval {
    let den = 1 + rng.gen_range(0..4i128);
    let lo = Rat::new(rng.gen_range(0..span * den), den);
    let max_len = (span / 3).max(1);
    let hi = lo + Rat::new(rng.gen_range(0..=max_len * den), den);
    let (lc, hc) = if lo == hi { (true, true) } else { (rng.gen(), rng.gen()) };
    Interval::new(lo, hi, lc, hc, id).unwrap()
}

/// Batch of `n` random intervals with ids `{tag}0, {tag}1, ...`.
pub fn random_intervals(rng: &mut ChaCha8Rng, n: usize, span: i128, tag: &str) -> Vec<Interval> {
    (0..n).map(|i| random_interval(rng, span, format!("{tag}{i}"))).collect()
}

/// Random two-batch interval instance with up to `max_per_batch` intervals
/// arriving in each batch (the second batch is never empty).
pub fn random_two_batch_intervals(rng: &mut ChaCha8Rng, max_per_batch: usize) -> Instance {
    let n1 = rng.gen_range(0..=max_per_batch);
    let n2 = rng.gen_range(1..=max_per_batch);
    let first = random_intervals(rng, n1, 60, "a");
    let second = random_intervals(rng, n2, 60, "b");
    let e1 = overlap_edges(&first, &[]);
    let e2 = overlap_edges(&second, &first);
    Instance {
        objective: Objective::MaxColor,
        batches: vec![
            RevealedBatch::interval_batch(first, e1),
            RevealedBatch::interval_batch(second, e2),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn graph_instances_replay_deterministically() {
        let mk = || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            random_graph_instance(&mut rng, 14, 3, 0.3, Objective::MaxColor)
        };
        let a = serde_json::to_string(&mk().batches).unwrap();
        let b = serde_json::to_string(&mk().batches).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn forest_instances_really_are_forests() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let inst = random_forest_instance(&mut rng, 40, 3, 0.8);
            let g = inst.graph().unwrap();
            assert!(g.is_forest());
        }
    }

    #[test]
    fn interval_instances_pass_engine_validation() {
        use crate::algorithms::FirstFit;
        use crate::engine::run_instance;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let inst = random_two_batch_intervals(&mut rng, 25);
            let mut alg = FirstFit::new();
            run_instance(&mut alg, &inst).unwrap();
        }
    }
}
