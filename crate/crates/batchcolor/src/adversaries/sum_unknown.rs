//! Color-sum construction against algorithms that do not know the batch
//! count: batches of disjoint cliques whose cheaply-colored vertices get
//! promoted to hubs that poison their colors for the rest of the run.
//!
//! Batch `i` brings `M^(i-1)` disjoint cliques of size `3 * (M / f(i))`,
//! where `f` is the growth schedule the budgeted algorithm runs (quadratic
//! here). A color is *small* if it is at most `10CM`; a vertex colored small
//! is *cheap*. After each batch, the first clique holding at least `M / f(i)`
//! cheap vertices — if any — has all its cheap vertices marked *special*,
//! and every vertex of every later batch is wired to all special vertices
//! (and to nothing else outside its own clique). Special colors can never be
//! reused, so each small color produces at most one special vertex over the
//! whole run.
//!
//! The certificate's witness recolors each clique with `1..n` on its
//! non-special members and `3M + (the algorithm's color)` on special ones,
//! which is proper by construction. At desk scale the witness is reported as
//! the optimum bound directly; the analytical per-prefix bound of
//! `19 * M^(i+1) / f(i)^2` only holds once `M > 130 * C^2 * f(k)^2`, so it
//! is checked exactly when that precondition is met.

use std::collections::BTreeMap;

use serde_json::json;

use crate::engine::{Adversary, AdversaryStep, Certificate, Objective, OptKind, RevealedBatch};
use crate::graph::{color_sum, Coloring};
use crate::rat::{rat_int, RatPair};

pub struct SumUnknownAdversary {
    k: usize,
    m: u64,
    /// The `C` constant scaling the small-color threshold.
    c: u64,
    next_index: usize,
    stopped: bool,
    /// All special vertices with the color the algorithm gave them.
    specials: Vec<(String, u64)>,
    /// Member ids: `batches[i][c]` is clique `c` of batch `i+1`.
    batches: Vec<Vec<Vec<String>>>,
    /// Chosen clique per absorbed batch, when one qualified.
    chosen: Vec<Option<usize>>,
    final_colors: Coloring,
}

/// Quadratic growth schedule, matching the budgeted algorithm's default.
fn f(i: usize) -> u64 {
    (i as u64) * (i as u64)
}

impl SumUnknownAdversary {
    /// Structural scale: the run checks wiring and witness invariants, not
    /// the analytical ratio, which needs astronomically large `M`.
    pub fn new(k: usize, m: u64, c: u64) -> Self {
        assert!((1..=3).contains(&k), "unknown-count sum adversary supports k in 1..=3, got {k}");
        assert!(c >= 1, "small-color constant must be positive");
        assert!(
            m >= f(k),
            "batch growth M={m} leaves batch {k} cliques empty; need M >= {}",
            f(k)
        );
        let total: u64 = (1..=k).map(|i| m.pow(i as u32 - 1) * (3 * (m / f(i)))).sum();
        assert!(total <= 200_000, "construction would reveal {total} vertices, past desk scale");
        SumUnknownAdversary {
            k,
            m,
            c,
            next_index: 1,
            stopped: false,
            specials: Vec::new(),
            batches: Vec::new(),
            chosen: Vec::new(),
            final_colors: Coloring::new(),
        }
    }

    fn small_threshold(&self) -> u64 {
        10 * self.c * self.m
    }

    fn clique_size(&self, i: usize) -> usize {
        (3 * (self.m / f(i))) as usize
    }

    fn clique_count(&self, i: usize) -> usize {
        self.m.pow(i as u32 - 1) as usize
    }

    fn build_batch(&mut self, i: usize) -> RevealedBatch {
        let size = self.clique_size(i);
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut cliques = Vec::new();
        for cq in 0..self.clique_count(i) {
            let members: Vec<String> = (0..size).map(|j| format!("u{i}-{cq}-{j}")).collect();
            for (a, u) in members.iter().enumerate() {
                for v in &members[a + 1..] {
                    edges.push((u.clone(), v.clone()));
                }
                for (s, _) in &self.specials {
                    edges.push((u.clone(), s.clone()));
                }
            }
            vertices.extend(members.iter().cloned());
            cliques.push(members);
        }
        self.batches.push(cliques);
        RevealedBatch::graph_batch(vertices, edges)
    }

    /// Promote the cheap vertices of the first qualifying clique of batch
    /// `i` to special status.
    fn absorb(&mut self, i: usize, colors: &Coloring) {
        let small = self.small_threshold();
        let need = self.m; // cheap_count * f(i) >= M, in integers
        let mut chosen = None;
        for (cq, members) in self.batches[i - 1].iter().enumerate() {
            let cheap: Vec<String> =
                members.iter().filter(|id| colors[*id] <= small).cloned().collect();
            if cheap.len() as u64 * f(i) >= need {
                chosen = Some(cq);
                let mut taken: BTreeMap<u64, String> = self
                    .specials
                    .iter()
                    .map(|(id, col)| (*col, id.clone()))
                    .collect();
                for id in cheap {
                    let col = colors[&id];
                    if let Some(prev) = taken.get(&col) {
                        panic!(
                            "special color {col} repeated by {id} after {prev} (construction bug)"
                        );
                    }
                    taken.insert(col, id.clone());
                    self.specials.push((id, col));
                }
                break;
            }
        }
        self.chosen.push(chosen);
    }

    /// The recoloring scheme behind the certificate: clique-local `1..n` on
    /// non-special vertices, `3M + algorithm color` on special ones.
    fn scheme_witness(&self) -> Coloring {
        let special: BTreeMap<&String, u64> =
            self.specials.iter().map(|(id, col)| (id, *col)).collect();
        let mut witness = Coloring::new();
        for cliques in &self.batches {
            for members in cliques {
                let mut next = 0u64;
                for id in members {
                    match special.get(id) {
                        Some(col) => {
                            witness.insert(id.clone(), 3 * self.m + col);
                        }
                        None => {
                            next += 1;
                            witness.insert(id.clone(), next);
                        }
                    }
                }
            }
        }
        witness
    }
}

impl Adversary for SumUnknownAdversary {
    fn name(&self) -> &'static str {
        "sum-unknown"
    }

    fn objective(&self) -> Objective {
        Objective::SumColors
    }

    fn announced_batches(&self) -> Option<usize> {
        None
    }

    fn next_batch(&mut self, colors: &Coloring) -> AdversaryStep {
        if self.stopped {
            return AdversaryStep::Stop;
        }
        if self.next_index > 1 {
            self.absorb(self.next_index - 1, colors);
        }
        if self.next_index > self.k {
            self.final_colors = colors.clone();
            self.stopped = true;
            return AdversaryStep::Stop;
        }
        let batch = self.build_batch(self.next_index);
        self.next_index += 1;
        AdversaryStep::Batch(batch)
    }

    fn certificate(&self) -> Certificate {
        assert!(self.stopped, "certificate requested before the construction stopped");
        let witness = self.scheme_witness();
        let witness_cost = color_sum(&witness);
        // Every clique needs all-distinct colors, so any proper coloring
        // pays at least the triangular sum per clique.
        let forced: u64 = (1..=self.k)
            .map(|i| {
                let s = self.clique_size(i) as u64;
                self.clique_count(i) as u64 * s * (s + 1) / 2
            })
            .sum();
        let asymptotic_scale = self.m > 130 * self.c * self.c * f(self.k) * f(self.k);
        if asymptotic_scale {
            // The analytical prefix bound applies: check it per batch.
            let special: BTreeMap<&String, u64> =
                self.specials.iter().map(|(id, col)| (id, *col)).collect();
            let mut prefix = 0u64;
            for (bi, cliques) in self.batches.iter().enumerate() {
                let i = bi + 1;
                for members in cliques {
                    let n_k = members.iter().filter(|id| !special.contains_key(id)).count() as u64;
                    prefix += n_k * (n_k + 1) / 2;
                    prefix += members
                        .iter()
                        .filter_map(|id| special.get(id))
                        .map(|col| 3 * self.m + col)
                        .sum::<u64>();
                }
                let cap = 19 * self.m.pow(i as u32 + 1) / (f(i) * f(i));
                assert!(
                    prefix <= cap,
                    "scheme cost {prefix} for the first {i} batches exceeds the bound {cap}"
                );
            }
        }
        Certificate {
            forced_cost: RatPair(rat_int(forced as i128)),
            opt_bound: RatPair(rat_int(witness_cost as i128)),
            opt_kind: OptKind::UpperBound,
            witness,
            reveal: json!({
                "small_threshold": self.small_threshold(),
                "chosen_cliques": self.chosen,
                "specials": self.specials,
                "clique_sizes": (1..=self.k).map(|i| self.clique_size(i)).collect::<Vec<_>>(),
                "clique_counts": (1..=self.k).map(|i| self.clique_count(i)).collect::<Vec<_>>(),
                "asymptotic_scale": asymptotic_scale,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::FirstFit;
    use crate::engine::{run_duel, DEFAULT_BATCH_LIMIT};
    use crate::graph::validate_coloring;
    use crate::sum_coloring::{BatchColorF, ScheduleFunction};

    #[test]
    fn batch_shapes_follow_the_schedule() {
        let adv = SumUnknownAdversary::new(2, 6, 10);
        assert_eq!(adv.clique_count(1), 1);
        assert_eq!(adv.clique_size(1), 18);
        assert_eq!(adv.clique_count(2), 6);
        assert_eq!(adv.clique_size(2), 3);
    }

    #[test]
    fn first_fit_run_keeps_every_invariant() {
        let mut alg = FirstFit::new();
        let mut adv = SumUnknownAdversary::new(2, 6, 10);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert!(report.forced_cost_met);
        // Batch 1 makes all 18 clique members special; batch 2's first
        // clique contributes its 3 members.
        let specials: Vec<(String, u64)> =
            serde_json::from_value(report.certificate.reveal["specials"].clone()).unwrap();
        assert_eq!(specials.len(), 21);
        let colors: std::collections::BTreeSet<u64> =
            specials.iter().map(|(_, c)| *c).collect();
        assert_eq!(colors.len(), specials.len(), "special colors must be distinct");
        assert_eq!(report.certificate.reveal["asymptotic_scale"], serde_json::json!(false));
        // Witness recoloring is proper on the revealed graph.
        let g = report.transcript.to_instance().graph().unwrap();
        assert!(validate_coloring(&g, &report.certificate.witness).is_clean());
    }

    #[test]
    fn budgeted_player_survives_the_cliques() {
        let mut alg = BatchColorF::new(ScheduleFunction::quadratic());
        let mut adv = SumUnknownAdversary::new(2, 6, 10);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert!(report.forced_cost_met);
        assert!(report.algorithm_cost >= 171 + 36);
    }

    #[test]
    fn three_batches_wire_only_to_specials() {
        let mut alg = FirstFit::new();
        let mut adv = SumUnknownAdversary::new(3, 9, 2);
        let report = run_duel(&mut alg, &mut adv, DEFAULT_BATCH_LIMIT).unwrap();
        assert!(report.forced_cost_met);
        let g = report.transcript.to_instance().graph().unwrap();
        let specials: Vec<(String, u64)> =
            serde_json::from_value(report.certificate.reveal["specials"].clone()).unwrap();
        let special_ids: std::collections::BTreeSet<&str> =
            specials.iter().map(|(id, _)| id.as_str()).collect();
        // Pick a batch-3 vertex: neighbors must be its clique plus special
        // vertices of batches 1 and 2, nothing else.
        let v = g.index_of("u3-0-0").unwrap();
        for w in g.neighbors(v) {
            let id = g.id_of(*w);
            assert!(
                id.starts_with("u3-0-") || special_ids.contains(id),
                "unexpected neighbor {id}"
            );
        }
        assert!(validate_coloring(&g, &report.certificate.witness).is_clean());
    }
}
