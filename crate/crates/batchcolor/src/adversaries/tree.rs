//! Forest construction that forces `2k` distinct colors out of any online
//! algorithm across `k` batches while the built graph stays 2-colorable.
//!
//! Batch sizes shrink geometrically: batch `i` brings `2 * (8k^3)^(k-i)`
//! vertices paired into a perfect matching of "base edges". After the
//! algorithm colors a batch, either it has already spent more than `2k`
//! distinct colors (stop: it paid `2k+1`), or by pigeonhole many base edges
//! received the same unordered color pair. That pair becomes the batch's
//! identified pair, and the trees hanging off those edges become a pool of
//! interchangeable anchors: each carries one vertex of every identified color
//! so far. Later batches attach every new vertex to carriers of all
//! previously identified colors (each anchor tree used at most once, two
//! distinct trees per level so no cycle forms), which forces fresh colors on
//! all new vertices. After `k` batches the identified pairs are mutually
//! disjoint, so the algorithm used at least `2k` distinct colors on a forest
//! that an offline coloring handles with 2.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::json;

use crate::engine::{Adversary, AdversaryStep, Certificate, Objective, OptKind, RevealedBatch};
use crate::graph::{distinct_colors, Coloring, Graph};
use crate::rat::{rat_int, RatPair};

/// One anchor tree: a vertex of each identified color, keyed by color.
#[derive(Debug, Clone)]
struct CarrierTree {
    carriers: BTreeMap<u64, String>,
}

/// A base edge of the batch in flight, waiting for the algorithm's colors.
#[derive(Debug)]
struct PendingEdge {
    u: String,
    v: String,
    /// Carriers inherited from one attached anchor tree of the previous
    /// level; together with `u` and `v` they cover all identified colors.
    inherited: BTreeMap<u64, String>,
}

pub struct TreeAdversary {
    k: usize,
    /// Stitch the forest into a single tree via one extra last-batch vertex.
    connect: bool,
    /// 1-based index of the batch to emit next.
    next_index: usize,
    stopped: bool,
    early_stop: bool,
    /// The revealed graph, mirrored for the witness bipartition.
    g: Graph,
    pending: Vec<PendingEdge>,
    /// Identified color pair of each absorbed batch, in batch order.
    pairs: Vec<(u64, u64)>,
    /// Unconsumed anchor trees per level, oldest first.
    pools: Vec<VecDeque<CarrierTree>>,
    pool_built: Vec<usize>,
    pool_consumed: Vec<usize>,
}

impl TreeAdversary {
    /// Desk-scale construction: `k = 3` already brings ~9.4e4 vertices.
    /// With `connect`, the final batch carries one extra vertex adjacent to
    /// one representative of every component, making the forest a tree; it
    /// is off by default because the cost bounds are stated for forests.
    pub fn new(k: usize, connect: bool) -> Self {
        assert!((1..=3).contains(&k), "tree adversary supports k in 1..=3, got {k}");
        TreeAdversary {
            k,
            connect,
            next_index: 1,
            stopped: false,
            early_stop: false,
            g: Graph::new(),
            pending: Vec::new(),
            pairs: Vec::new(),
            pools: Vec::new(),
            pool_built: Vec::new(),
            pool_consumed: Vec::new(),
        }
    }

    fn batch_size(&self, i: usize) -> usize {
        let base = 8 * self.k * self.k * self.k;
        2 * base.pow((self.k - i) as u32)
    }

    /// Pop the next anchor tree of `level`, attach `w` to its carrier of
    /// color `want`, and hand the tree back for optional carrier inheritance.
    fn attach(
        &mut self,
        w: &str,
        level: usize,
        want: u64,
        edges: &mut Vec<(String, String)>,
    ) -> CarrierTree {
        let tree = self.pools[level - 1].pop_front().unwrap_or_else(|| {
            panic!(
                "level {level} anchor pool exhausted while wiring batch {} (construction bug)",
                self.next_index
            )
        });
        self.pool_consumed[level - 1] += 1;
        let anchor = tree
            .carriers
            .get(&want)
            .unwrap_or_else(|| panic!("anchor tree lacks identified color {want} (construction bug)"))
            .clone();
        edges.push((w.to_string(), anchor.clone()));
        self.g.add_edge(w, &anchor).expect("attachment endpoints exist");
        tree
    }

    fn build_batch(&mut self, i: usize) -> RevealedBatch {
        let a_i = self.batch_size(i);
        let ids: Vec<String> = (0..a_i).map(|m| format!("t{i}-{m}")).collect();
        for id in &ids {
            self.g.add_vertex(id);
        }
        let mut edges: Vec<(String, String)> = Vec::new();
        self.pending.clear();
        for m in 0..a_i / 2 {
            let u = ids[2 * m].clone();
            let v = ids[2 * m + 1].clone();
            edges.push((u.clone(), v.clone()));
            self.g.add_edge(&u, &v).expect("base edge endpoints exist");
            let mut inherited = BTreeMap::new();
            for (at_u, w) in [(true, u.clone()), (false, v.clone())] {
                for j in 1..i {
                    let (lo, hi) = self.pairs[j - 1];
                    // Two distinct anchor trees per level keep the graph a
                    // forest: a single tree would close a cycle through `w`.
                    let lo_tree = self.attach(&w, j, lo, &mut edges);
                    self.attach(&w, j, hi, &mut edges);
                    if at_u && j == i - 1 {
                        inherited = lo_tree.carriers.clone();
                    }
                }
            }
            self.pending.push(PendingEdge { u, v, inherited });
        }
        let mut vertices = ids;
        if self.connect && i == self.k {
            let link = "link".to_string();
            self.g.add_vertex(&link);
            let reps: Vec<String> = self
                .g
                .components()
                .iter()
                .map(|comp| self.g.id_of(comp[0]).to_string())
                .filter(|rep| *rep != link)
                .collect();
            for rep in reps {
                edges.push((link.clone(), rep.clone()));
                self.g.add_edge(&link, &rep).expect("representative exists");
            }
            vertices.push(link);
        }
        RevealedBatch::graph_batch(vertices, edges)
    }

    /// Digest the colors of the batch just revealed: stop early past `2k`
    /// distinct colors, otherwise identify the most repeated base-edge color
    /// pair and turn its edges into the next anchor pool.
    fn absorb(&mut self, colors: &Coloring) {
        if distinct_colors(colors) > 2 * self.k {
            self.early_stop = true;
            self.pending.clear();
            return;
        }
        let pending = std::mem::take(&mut self.pending);
        let mut by_pair: BTreeMap<(u64, u64), Vec<&PendingEdge>> = BTreeMap::new();
        for e in &pending {
            let (cu, cv) = (colors[&e.u], colors[&e.v]);
            by_pair.entry((cu.min(cv), cu.max(cv))).or_default().push(e);
        }
        let (&pair, group) = by_pair
            .iter()
            .max_by_key(|(p, g)| (g.len(), std::cmp::Reverse(**p)))
            .expect("batches carry at least one base edge");
        let a_i = 2 * pending.len();
        let kk = self.k;
        assert!(
            group.len() * 4 * kk * kk >= a_i,
            "pigeonhole shortfall on batch {}: best pair {:?} covers only {} of {} base edges",
            self.pairs.len() + 1,
            pair,
            group.len(),
            a_i / 2,
        );
        let identified: BTreeSet<u64> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        assert!(
            !identified.contains(&pair.0) && !identified.contains(&pair.1),
            "batch {} pair {pair:?} reuses an identified color (construction bug)",
            self.pairs.len() + 1,
        );
        let mut pool = VecDeque::with_capacity(group.len());
        for e in group {
            let mut carriers = e.inherited.clone();
            carriers.insert(colors[&e.u], e.u.clone());
            carriers.insert(colors[&e.v], e.v.clone());
            pool.push_back(CarrierTree { carriers });
        }
        self.pool_built.push(pool.len());
        self.pool_consumed.push(0);
        self.pools.push(pool);
        self.pairs.push(pair);
    }
}

impl Adversary for TreeAdversary {
    fn name(&self) -> &'static str {
        "tree"
    }

    fn objective(&self) -> Objective {
        Objective::MaxColor
    }

    fn announced_batches(&self) -> Option<usize> {
        Some(self.k)
    }

    fn next_batch(&mut self, colors: &Coloring) -> AdversaryStep {
        if self.stopped {
            return AdversaryStep::Stop;
        }
        if self.next_index > 1 {
            self.absorb(colors);
        }
        if self.early_stop || self.next_index > self.k {
            self.stopped = true;
            return AdversaryStep::Stop;
        }
        let batch = self.build_batch(self.next_index);
        self.next_index += 1;
        AdversaryStep::Batch(batch)
    }

    fn certificate(&self) -> Certificate {
        assert!(self.stopped, "certificate requested before the construction stopped");
        assert!(
            self.early_stop || self.pairs.len() == self.k,
            "construction ended with {} identified pairs, wanted {}",
            self.pairs.len(),
            self.k,
        );
        let forced = if self.early_stop { 2 * self.k + 1 } else { 2 * self.k };
        assert!(self.g.is_forest(), "construction left the forest family (construction bug)");
        let two_coloring = self.g.bipartition().expect("forests are bipartite");
        let witness: Coloring = self
            .g
            .ids()
            .iter()
            .cloned()
            .zip(two_coloring.iter().copied())
            .collect();
        Certificate {
            forced_cost: RatPair(rat_int(forced as i128)),
            opt_bound: RatPair(rat_int(2)),
            opt_kind: OptKind::Exact,
            witness,
            reveal: json!({
                "identified_pairs": self.pairs,
                "batch_sizes": (1..=self.k).map(|i| self.batch_size(i)).collect::<Vec<_>>(),
                "pool_built": self.pool_built,
                "pool_consumed": self.pool_consumed,
                "early_stop": self.early_stop,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{FirstFit, GenericBatch, RandomProper};
    use crate::engine::{run_duel, DEFAULT_BATCH_LIMIT};
    use crate::rat::rat;

    #[test]
    fn sizes_shrink_geometrically() {
        let adv = TreeAdversary::new(3, false);
        assert_eq!(adv.batch_size(1), 93_312);
        assert_eq!(adv.batch_size(2), 432);
        assert_eq!(adv.batch_size(3), 2);
        let adv = TreeAdversary::new(2, false);
        assert_eq!(adv.batch_size(1), 128);
        assert_eq!(adv.batch_size(2), 2);
        let adv = TreeAdversary::new(1, false);
        assert_eq!(adv.batch_size(1), 2);
    }

    #[test]
    fn single_batch_forces_one_pair() {
        let mut alg = FirstFit::new();
        let mut adv = TreeAdversary::new(1, false);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert_eq!(report.algorithm_cost, 2);
        assert_eq!(report.witness_cost, 2);
        assert_eq!(report.ratio, RatPair(rat_int(1)));
        assert!(report.forced_cost_met);
    }

    #[test]
    fn two_batches_force_four_colors_from_batch_optimal_play() {
        let mut alg = GenericBatch::new();
        let mut adv = TreeAdversary::new(2, false);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        // Batch-local optimal play cannot dodge: exactly four colors appear.
        assert_eq!(report.algorithm_cost, 4);
        assert_eq!(report.witness_cost, 2);
        assert_eq!(report.ratio, RatPair(rat(2, 1)));
        assert!(report.forced_cost_met);
        let reveal = &report.certificate.reveal;
        assert_eq!(reveal["early_stop"], serde_json::json!(false));
        let pairs: Vec<(u64, u64)> =
            serde_json::from_value(reveal["identified_pairs"].clone()).unwrap();
        assert_eq!(pairs.len(), 2);
        let mut seen = std::collections::BTreeSet::new();
        for (a, b) in pairs {
            assert!(seen.insert(a) && seen.insert(b), "identified pairs overlap");
        }
    }

    #[test]
    fn first_fit_walks_into_four_colors() {
        let mut alg = FirstFit::new();
        let mut adv = TreeAdversary::new(2, false);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert!(report.algorithm_cost >= 4);
        assert!(report.forced_cost_met);
    }

    #[test]
    fn revealed_graph_stays_a_forest_with_two_coloring_witness() {
        let mut alg = GenericBatch::new();
        let mut adv = TreeAdversary::new(2, false);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        let instance = report.transcript.to_instance();
        let g = instance.graph().unwrap();
        assert!(g.is_forest());
        assert_eq!(g.n(), 130);
    }

    #[test]
    fn random_play_either_overspends_or_gets_cornered() {
        for seed in 0..6 {
            let mut alg = RandomProper::new(seed);
            let mut adv = TreeAdversary::new(2, false);
            let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
            assert!(report.forced_cost_met, "seed {seed}");
            assert!(report.algorithm_cost >= 4, "seed {seed}");
        }
    }

    #[test]
    fn three_batches_force_six_colors_at_scale() {
        let mut alg = FirstFit::new();
        let mut adv = TreeAdversary::new(3, false);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert!(report.algorithm_cost >= 6);
        assert_eq!(report.witness_cost, 2);
        assert!(report.forced_cost_met);
        assert!(report.ratio.0 >= rat(3, 1));
    }

    #[test]
    fn connector_turns_the_forest_into_one_tree() {
        let mut alg = GenericBatch::new();
        let mut adv = TreeAdversary::new(2, true);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert_eq!(report.algorithm_cost, 4);
        assert!(report.forced_cost_met);
        let g = report.transcript.to_instance().graph().unwrap();
        assert!(g.is_forest());
        assert_eq!(g.components().len(), 1);
        assert_eq!(g.n(), 131);
    }
}
