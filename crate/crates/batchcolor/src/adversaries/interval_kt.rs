//! Two-batch interval construction that forces cost `3/2` times the clique
//! number even when the algorithm sees the intervals themselves.
//!
//! Batch 1 lines up more identical `2q`-cliques (each a stack of `2q` copies
//! of one unit interval) than there are `2q`-subsets of a `3q`-palette. An
//! algorithm staying within `3q` distinct colors must color two cliques with
//! the same color set. Batch 2 drops `2q` intervals onto the left twin and
//! `2q` intervals spanning from just right of the left twin across the right
//! twin; the two groups meet in a gap, so all `4q` new intervals are pairwise
//! adjacent and they see both twins. New intervals must avoid the shared set
//! and each other: at least `6q` distinct colors in total, while the final
//! arrangement has clique number exactly `4q`.
//!
//! Overspending early does not help either: more than `3q` distinct colors
//! on batch 1 stops the game at `3q + 1` against a clique number of `2q`.

use serde_json::json;

use crate::engine::{Adversary, AdversaryStep, Certificate, Objective, OptKind, RevealedBatch};
use crate::graph::{distinct_colors, Coloring};
use crate::interval::{max_clique_size, sweep_coloring, Interval};
use crate::rat::{rat_int, RatPair};

use super::{binomial, overlap_edges};

pub struct IntervalKtAdversary {
    q: usize,
    n_cliques: usize,
    next_index: usize,
    stopped: bool,
    early_stop: bool,
    /// All intervals revealed so far, in reveal order.
    revealed: Vec<Interval>,
    /// Member ids of the batch-1 clique stacks.
    cliques: Vec<Vec<String>>,
    twins: Option<(usize, usize)>,
    shared_set: Vec<u64>,
}

/// First pair of cliques whose members received the same color set.
fn find_twins(cliques: &[Vec<String>], colors: &Coloring) -> Option<(usize, usize, Vec<u64>)> {
    let mut seen: std::collections::BTreeMap<Vec<u64>, usize> = std::collections::BTreeMap::new();
    for (i, members) in cliques.iter().enumerate() {
        let mut set: Vec<u64> = members.iter().map(|m| colors[m]).collect();
        set.sort_unstable();
        if let Some(&first) = seen.get(&set) {
            return Some((first, i, set));
        }
        seen.insert(set, i);
    }
    None
}

impl IntervalKtAdversary {
    /// Desk-scale construction: `q = 2` already brings 64 batch-1 intervals.
    pub fn new(q: usize) -> Self {
        assert!((1..=2).contains(&q), "visible-interval adversary supports q in 1..=2, got {q}");
        let n_cliques = binomial(3 * q as u64, 2 * q as u64) as usize + 1;
        IntervalKtAdversary {
            q,
            n_cliques,
            next_index: 1,
            stopped: false,
            early_stop: false,
            revealed: Vec::new(),
            cliques: Vec::new(),
            twins: None,
            shared_set: Vec::new(),
        }
    }

    fn first_batch(&mut self) -> RevealedBatch {
        let mut fresh = Vec::new();
        for i in 0..self.n_cliques {
            let mut members = Vec::new();
            for m in 0..2 * self.q {
                let iv = Interval::closed(4 * i as i128, 4 * i as i128 + 1, format!("c{i}-{m}"));
                members.push(iv.id.clone());
                fresh.push(iv);
            }
            self.cliques.push(members);
        }
        let edges = overlap_edges(&fresh, &[]);
        self.revealed = fresh.clone();
        RevealedBatch::interval_batch(fresh, edges)
    }

    fn second_batch(&mut self, colors: &Coloring) -> RevealedBatch {
        let (ka, kb, set) = find_twins(&self.cliques, colors)
            .expect("clique twins exist within a 3q-color budget (construction bug)");
        self.twins = Some((ka, kb));
        self.shared_set = set;
        let (ka, kb) = (ka as i128, kb as i128);
        let mut fresh = Vec::new();
        for m in 0..2 * self.q {
            fresh.push(Interval::closed(4 * ka, 4 * ka + 3, format!("x{m}")));
        }
        for m in 0..2 * self.q {
            fresh.push(Interval::closed(4 * ka + 2, 4 * kb + 1, format!("y{m}")));
        }
        let edges = overlap_edges(&fresh, &self.revealed);
        self.revealed.extend(fresh.clone());
        RevealedBatch::interval_batch(fresh, edges)
    }
}

impl Adversary for IntervalKtAdversary {
    fn name(&self) -> &'static str {
        "interval-kt"
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
                if distinct_colors(colors) > 3 * self.q {
                    self.early_stop = true;
                    self.stopped = true;
                    return AdversaryStep::Stop;
                }
                self.next_index = 3;
                AdversaryStep::Batch(self.second_batch(colors))
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
        let omega = max_clique_size(&self.revealed);
        let expected_omega = if self.early_stop { 2 * q } else { 4 * q };
        assert_eq!(omega, expected_omega, "arrangement stacked unexpectedly deep");
        let sweep = sweep_coloring(&self.revealed);
        let witness: Coloring = self
            .revealed
            .iter()
            .map(|iv| iv.id.clone())
            .zip(sweep.iter().copied())
            .collect();
        let forced = if self.early_stop { 3 * q + 1 } else { 6 * q };
        Certificate {
            forced_cost: RatPair(rat_int(forced as i128)),
            opt_bound: RatPair(rat_int(expected_omega as i128)),
            opt_kind: OptKind::Exact,
            witness,
            reveal: json!({
                "twins": self.twins,
                "shared_set": self.shared_set,
                "early_stop": self.early_stop,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{FirstFit, GenericBatch};
    use crate::engine::{run_duel, BatchContext, EngineError, OnlineColorer, DEFAULT_BATCH_LIMIT};
    use crate::rat::rat;
    use crate::two_batches::TwoBatches;

    #[test]
    fn clique_counts() {
        assert_eq!(IntervalKtAdversary::new(1).n_cliques, 4);
        assert_eq!(IntervalKtAdversary::new(2).n_cliques, 16);
    }

    #[test]
    fn interval_aware_play_pays_exactly_three_halves() {
        let mut alg = TwoBatches::new();
        let mut adv = IntervalKtAdversary::new(1);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert_eq!(report.algorithm_cost, 6);
        assert_eq!(report.witness_cost, 4);
        assert_eq!(report.ratio, RatPair(rat(3, 2)));
        assert!(report.forced_cost_met);
    }

    #[test]
    fn first_fit_and_batch_optimal_play_are_cornered_too() {
        for q in [1usize, 2] {
            let mut alg = FirstFit::new();
            let mut adv = IntervalKtAdversary::new(q);
            let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
            assert!(report.forced_cost_met, "first-fit q={q}");
            assert!(report.ratio.0 >= rat(3, 2), "first-fit q={q}");

            let mut alg = GenericBatch::new();
            let mut adv = IntervalKtAdversary::new(q);
            let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
            assert!(report.forced_cost_met, "generic q={q}");
            assert!(report.ratio.0 >= rat(3, 2), "generic q={q}");
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
        let mut adv = IntervalKtAdversary::new(1);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert_eq!(report.transcript.rounds.len(), 1);
        assert_eq!(report.certificate.forced_cost, RatPair(rat_int(4)));
        assert_eq!(report.witness_cost, 2);
        assert!(report.forced_cost_met);
        assert!(report.ratio.0 > rat(3, 2));
    }
}
