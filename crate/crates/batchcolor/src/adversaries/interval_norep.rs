//! Two-batch construction that forces `4q` distinct colors on a graph that
//! is an interval graph of clique number `2q`, while never showing the
//! algorithm any interval representation.
//!
//! Batch 1 reveals a crowd of disjoint cliques as a plain graph: more
//! `q`-cliques than there are `q`-subsets of a `4q`-palette, and likewise for
//! `2q`-cliques. An algorithm that stays within `4q` distinct colors must
//! color two `q`-cliques with the same color set and two `2q`-cliques with
//! the same color set. Those twins let the adversary commit a hidden interval
//! placement where the twins interlock: batch 2 brings `2q` fresh vertices
//! overlapping one flank and `2q` overlapping the other, pairwise adjacent,
//! whose neighborhoods exhibit all `2q` colors of the twin sets. The batch-2
//! vertices then need `2q` colors never used on the flanks, for `4q` in
//! total, yet the final placement never stacks more than `2q` intervals.
//!
//! Overspending early does not help: more than `4q` distinct colors on batch
//! 1 ends the game at cost `4q + 1` with all cliques placed disjointly.

use std::collections::BTreeSet;

use serde_json::json;

use crate::engine::{Adversary, AdversaryStep, Certificate, Objective, OptKind, RevealedBatch};
use crate::graph::{distinct_colors, Coloring};
use crate::interval::{max_clique_size, sweep_coloring, Interval};
use crate::rat::{rat_int, RatPair};

use super::{binomial, overlap_edges};

pub struct IntervalNorepAdversary {
    q: usize,
    next_index: usize,
    stopped: bool,
    early_stop: bool,
    /// Member ids of the `q`-cliques and `2q`-cliques of batch 1.
    small_cliques: Vec<Vec<String>>,
    big_cliques: Vec<Vec<String>>,
    /// Hidden representation, committed as the construction decides it.
    placements: Vec<Interval>,
    twins: Option<TwinReveal>,
}

#[derive(Debug, Clone, serde::Serialize)]
struct TwinReveal {
    small: (usize, usize),
    big: (usize, usize),
    flank_colors: Vec<u64>,
    inner_colors: Vec<u64>,
}

/// First pair of cliques whose members received the same color set.
fn find_twins(cliques: &[Vec<String>], colors: &Coloring) -> Option<(usize, usize)> {
    let mut seen: std::collections::BTreeMap<Vec<u64>, usize> = std::collections::BTreeMap::new();
    for (i, members) in cliques.iter().enumerate() {
        let mut set: Vec<u64> = members.iter().map(|m| colors[m]).collect();
        set.sort_unstable();
        if let Some(&first) = seen.get(&set) {
            return Some((first, i));
        }
        seen.insert(set, i);
    }
    None
}

impl IntervalNorepAdversary {
    /// Desk-scale construction: `q = 3` already brings ~6.2e3 vertices.
    pub fn new(q: usize) -> Self {
        assert!((1..=3).contains(&q), "hidden-placement adversary supports q in 1..=3, got {q}");
        let n_small = binomial(4 * q as u64, q as u64) as usize + 1;
        let n_big = binomial(4 * q as u64, 2 * q as u64) as usize + 1;
        IntervalNorepAdversary {
            q,
            next_index: 1,
            stopped: false,
            early_stop: false,
            small_cliques: (0..n_small)
                .map(|i| (0..q).map(|m| format!("a{i}-{m}")).collect())
                .collect(),
            big_cliques: (0..n_big)
                .map(|i| (0..2 * q).map(|m| format!("b{i}-{m}")).collect())
                .collect(),
            placements: Vec::new(),
            twins: None,
        }
    }

    fn first_batch(&self) -> RevealedBatch {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for clique in self.small_cliques.iter().chain(&self.big_cliques) {
            for (i, u) in clique.iter().enumerate() {
                vertices.push(u.clone());
                for v in &clique[i + 1..] {
                    edges.push((u.clone(), v.clone()));
                }
            }
        }
        RevealedBatch::graph_batch(vertices, edges)
    }

    fn place(&mut self, ids: &[String], lo: i128, hi: i128) {
        for id in ids {
            self.placements.push(Interval::closed(lo, hi, id.as_str()));
        }
    }

    /// Park every not-yet-placed clique on its own slot right of the action.
    fn place_rest_disjointly(&mut self, skip: &BTreeSet<(bool, usize)>) {
        let mut slot = 0i128;
        let small: Vec<(bool, usize)> = (0..self.small_cliques.len()).map(|i| (false, i)).collect();
        let big: Vec<(bool, usize)> = (0..self.big_cliques.len()).map(|i| (true, i)).collect();
        for key in small.into_iter().chain(big) {
            if skip.contains(&key) {
                continue;
            }
            let members: Vec<&String> = if key.0 {
                self.big_cliques[key.1].iter().collect()
            } else {
                self.small_cliques[key.1].iter().collect()
            };
            let (lo, hi) = (16 + 2 * slot, 17 + 2 * slot);
            for id in members {
                self.placements.push(Interval::closed(lo, hi, id.as_str()));
            }
            slot += 1;
        }
    }

    /// Commit the interlocking placement around the twin cliques and return
    /// the second batch.
    fn lock_in(&mut self, colors: &Coloring) -> RevealedBatch {
        let q = self.q;
        let (sa, sb) = find_twins(&self.small_cliques, colors)
            .expect("q-clique twins exist within a 4q-color budget (construction bug)");
        let (ba, bb) = find_twins(&self.big_cliques, colors)
            .expect("2q-clique twins exist within a 4q-color budget (construction bug)");

        // The twin q-cliques flank the future batch-2 intervals.
        let flank: BTreeSet<u64> = self.small_cliques[sa].iter().map(|m| colors[m]).collect();
        assert_eq!(flank.len(), q, "clique members carry distinct colors");
        let small_a = self.small_cliques[sa].clone();
        let small_b = self.small_cliques[sb].clone();
        self.place(&small_a, 5, 6);
        self.place(&small_b, 9, 10);

        // Left twin 2q-clique: members colored from the flank set go far
        // left where batch 2 cannot see them; exactly q members stay
        // reachable, and their colors form the inner set, disjoint from the
        // flank set.
        let members = self.big_cliques[ba].clone();
        let mut hidden: Vec<String> =
            members.iter().filter(|m| flank.contains(&colors[*m])).cloned().collect();
        assert!(hidden.len() <= q, "a 2q-clique meets a q-set in at most q colors");
        let mut reachable: Vec<String> =
            members.iter().filter(|m| !flank.contains(&colors[*m])).cloned().collect();
        while hidden.len() < q {
            hidden.push(reachable.remove(0));
        }
        assert_eq!(reachable.len(), q);
        self.place(&hidden, 0, 1);
        self.place(&reachable, 0, 3);
        let inner: BTreeSet<u64> = reachable.iter().map(|m| colors[m]).collect();
        assert_eq!(inner.len(), q);
        assert!(inner.is_disjoint(&flank));

        // Right twin: its members colored with the inner set stay reachable
        // from the right; the rest hide far right. Twins share the color
        // set, so exactly q members carry inner colors.
        let members = self.big_cliques[bb].clone();
        let reach_right: Vec<String> =
            members.iter().filter(|m| inner.contains(&colors[*m])).cloned().collect();
        let hide_right: Vec<String> =
            members.iter().filter(|m| !inner.contains(&colors[*m])).cloned().collect();
        assert_eq!(
            reach_right.len(),
            q,
            "twin 2q-cliques share their color set (construction bug)"
        );
        self.place(&reach_right, 12, 15);
        self.place(&hide_right, 14, 15);

        let skip: BTreeSet<(bool, usize)> =
            [(false, sa), (false, sb), (true, ba), (true, bb)].into_iter().collect();
        self.place_rest_disjointly(&skip);

        self.twins = Some(TwinReveal {
            small: (sa, sb),
            big: (ba, bb),
            flank_colors: flank.iter().copied().collect(),
            inner_colors: inner.iter().copied().collect(),
        });

        // Batch 2: q intervals across the left flank, q across the right,
        // all pairwise overlapping — revealed as a plain graph again.
        let mut fresh = Vec::new();
        for m in 0..q {
            fresh.push(Interval::closed(2, 8, format!("x{m}")));
        }
        for m in 0..q {
            fresh.push(Interval::closed(7, 13, format!("y{m}")));
        }
        let edges = overlap_edges(&fresh, &self.placements);
        let vertices = fresh.iter().map(|iv| iv.id.clone()).collect();
        self.placements.extend(fresh);
        RevealedBatch::graph_batch(vertices, edges)
    }
}

impl Adversary for IntervalNorepAdversary {
    fn name(&self) -> &'static str {
        "interval-norep"
    }

    fn objective(&self) -> Objective {
        Objective::MaxColor
    }

    fn announced_batches(&self) -> Option<usize> {
        Some(2)
    }

    fn next_batch(&mut self, colors: &Coloring) -> AdversaryStep {
        if self.stopped {
            return AdversaryStep::Stop;
        }
        match self.next_index {
            1 => {
                self.next_index = 2;
                AdversaryStep::Batch(self.first_batch())
            }
            2 => {
                if distinct_colors(colors) > 4 * self.q {
                    self.early_stop = true;
                    self.stopped = true;
                    self.place_rest_disjointly(&BTreeSet::new());
                    return AdversaryStep::Stop;
                }
                self.next_index = 3;
                AdversaryStep::Batch(self.lock_in(colors))
            }
            _ => {
                self.stopped = true;
                AdversaryStep::Stop
            }
        }
    }

    fn certificate(&self) -> Certificate {
        assert!(self.stopped, "certificate requested before the construction stopped");
        let q = self.q;
        let omega = max_clique_size(&self.placements);
        assert_eq!(omega, 2 * q, "hidden placement must stack exactly 2q deep");
        let sweep = sweep_coloring(&self.placements);
        let witness: Coloring = self
            .placements
            .iter()
            .map(|iv| iv.id.clone())
            .zip(sweep.iter().copied())
            .collect();
        let forced = if self.early_stop { 4 * q + 1 } else { 4 * q };
        Certificate {
            forced_cost: RatPair(rat_int(forced as i128)),
            opt_bound: RatPair(rat_int(2 * q as i128)),
            opt_kind: OptKind::Exact,
            witness,
            reveal: json!({
                "placements": self.placements,
                "twins": self.twins,
                "early_stop": self.early_stop,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{FirstFit, GenericBatch, RandomProper};
    use crate::engine::{run_duel, OnlineColorer, BatchContext, EngineError, DEFAULT_BATCH_LIMIT};
    use crate::interval::interval_graph;
    use crate::rat::rat;

    #[test]
    fn batch_one_counts() {
        let adv = IntervalNorepAdversary::new(1);
        assert_eq!(adv.small_cliques.len(), 5);
        assert_eq!(adv.big_cliques.len(), 7);
        let batch = adv.first_batch();
        assert_eq!(batch.vertices.len(), 19);
        assert_eq!(batch.edges.len(), 7);
    }

    #[test]
    fn first_fit_is_forced_to_double_the_optimum() {
        let mut alg = FirstFit::new();
        let mut adv = IntervalNorepAdversary::new(1);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert!(report.forced_cost_met);
        assert_eq!(report.witness_cost, 2);
        assert_eq!(report.opt_bound, RatPair(rat_int(2)));
        assert!(report.ratio.0 >= rat(2, 1));
        let final_colors = &report.transcript.coloring;
        assert!(distinct_colors(final_colors) >= 4);
    }

    #[test]
    fn batch_optimal_play_still_pays_double() {
        for q in [1usize, 2] {
            let mut alg = GenericBatch::new();
            let mut adv = IntervalNorepAdversary::new(q);
            let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
            assert!(report.forced_cost_met, "q={q}");
            assert_eq!(report.witness_cost as usize, 2 * q);
            assert!(report.ratio.0 >= rat(2, 1), "q={q}");
        }
    }

    #[test]
    fn random_play_cannot_dodge() {
        for seed in 0..4 {
            let mut alg = RandomProper::new(seed);
            let mut adv = IntervalNorepAdversary::new(1);
            let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
            assert!(report.forced_cost_met, "seed {seed}");
            assert!(report.ratio.0 >= rat(2, 1), "seed {seed}");
        }
    }

    /// Colors every vertex with a fresh color, tripping the early stop.
    struct Profligate {
        next: u64,
    }

    impl OnlineColorer for Profligate {
        fn name(&self) -> &'static str {
            "profligate"
        }

        fn color_batch(&mut self, ctx: &BatchContext<'_>) -> Result<Coloring, EngineError> {
            let mut out = Coloring::new();
            for v in &ctx.batch.vertices {
                self.next += 1;
                out.insert(v.clone(), self.next);
            }
            Ok(out)
        }
    }

    #[test]
    fn overspending_ends_the_game_early() {
        let mut alg = Profligate { next: 0 };
        let mut adv = IntervalNorepAdversary::new(1);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert_eq!(report.transcript.rounds.len(), 1);
        assert!(report.forced_cost_met);
        assert_eq!(report.certificate.forced_cost, RatPair(rat_int(5)));
        assert_eq!(report.witness_cost, 2);
    }

    #[test]
    fn revealed_graph_matches_the_hidden_placement() {
        for q in [1usize, 2] {
            let mut alg = FirstFit::new();
            let mut adv = IntervalNorepAdversary::new(q);
            let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
            let revealed = report.transcript.to_instance().graph().unwrap();
            let placements: Vec<Interval> =
                serde_json::from_value(report.certificate.reveal["placements"].clone()).unwrap();
            let hidden = interval_graph(&placements);
            assert_eq!(revealed.n(), hidden.n());
            let mut a: Vec<(String, String)> = revealed
                .edges()
                .into_iter()
                .map(|(x, y)| {
                    let (x, y) = (revealed.id_of(x).to_string(), revealed.id_of(y).to_string());
                    (x.clone().min(y.clone()), x.max(y))
                })
                .collect();
            let mut b: Vec<(String, String)> = hidden
                .edges()
                .into_iter()
                .map(|(x, y)| {
                    let (x, y) = (hidden.id_of(x).to_string(), hidden.id_of(y).to_string());
                    (x.clone().min(y.clone()), x.max(y))
                })
                .collect();
            a.sort();
            b.sort();
            assert_eq!(a, b, "q={q}");
        }
    }
}
