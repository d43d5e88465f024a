//! The batch-coloring game: algorithms receive vertex batches and must extend
//! a proper coloring; adversaries construct the next batch after seeing all
//! colors so far. The harness enforces the rules of the model — colors are
//! final once assigned, every batch must be properly colored before the next
//! arrives — and reports exact rational cost ratios.

use crate::graph::{color_sum, max_color, Coloring, Graph};
use crate::interval::Interval;
use crate::rat::{rat_int, Rat, RatPair};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Minimize the largest color used.
    MaxColor,
    /// Minimize the sum of all colors.
    SumColors,
}

pub fn coloring_cost(objective: Objective, colors: &Coloring) -> u64 {
    match objective {
        Objective::MaxColor => max_color(colors),
        Objective::SumColors => color_sum(colors),
    }
}

/// One batch as revealed to the algorithm: the new vertices, every edge
/// incident to at least one of them, and optionally an interval
/// representation of the new vertices.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RevealedBatch {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<Interval>>,
}

impl RevealedBatch {
    pub fn graph_batch(vertices: Vec<String>, edges: Vec<(String, String)>) -> Self {
        RevealedBatch { vertices, edges, intervals: None }
    }

    pub fn interval_batch(intervals: Vec<Interval>, edges: Vec<(String, String)>) -> Self {
        RevealedBatch {
            vertices: intervals.iter().map(|iv| iv.id.clone()).collect(),
            edges,
            intervals: Some(intervals),
        }
    }
}

/// A fixed instance: batches in reveal order plus the objective to score.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub objective: Objective,
    pub batches: Vec<RevealedBatch>,
}

impl Instance {
    /// Number of batches, the `k` known to algorithms in advance.
    pub fn k(&self) -> usize {
        self.batches.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.batches.iter().map(|b| b.vertices.len()).sum()
    }

    /// The full graph of the instance.
    pub fn graph(&self) -> Result<Graph, EngineError> {
        let mut g = Graph::new();
        for (i, b) in self.batches.iter().enumerate() {
            extend_graph(&mut g, b, i)?;
        }
        Ok(g)
    }

    /// All intervals of the instance, when every batch carries them.
    pub fn intervals(&self) -> Option<Vec<Interval>> {
        let mut all = Vec::new();
        for b in &self.batches {
            all.extend(b.intervals.clone()?);
        }
        Some(all)
    }
}

/// Everything an algorithm may look at when coloring a batch.
pub struct BatchContext<'a> {
    /// Cumulative graph including the new batch.
    pub graph: &'a Graph,
    /// Colors of all previously revealed vertices (never of the new ones).
    pub colors: &'a Coloring,
    pub batch: &'a RevealedBatch,
    /// 1-based index of this batch.
    pub batch_index: usize,
    /// Total number of batches when announced in advance.
    pub total_batches: Option<usize>,
    /// Interval representation of all previously revealed vertices, present
    /// only when every batch so far carried intervals.
    pub prior_intervals: Option<&'a [Interval]>,
}

pub trait OnlineColorer {
    fn name(&self) -> &'static str;

    /// Color exactly the vertices of `ctx.batch`. Colors are positive and
    /// must extend `ctx.colors` properly. Old colors cannot be touched: they
    /// live in the harness, and the return value only covers new vertices.
    fn color_batch(&mut self, ctx: &BatchContext) -> Result<BTreeMap<String, u64>, EngineError>;
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("batch {batch}: vertex {id:?} was already revealed")]
    DuplicateVertex { batch: usize, id: String },
    #[error("batch {batch}: edge ({a:?}, {b:?}) references an unrevealed vertex")]
    UnknownEndpoint { batch: usize, a: String, b: String },
    #[error("batch {batch}: edge ({a:?}, {b:?}) touches no vertex of the batch")]
    StaleEdge { batch: usize, a: String, b: String },
    #[error("batch {batch}: self-loop on {id:?}")]
    SelfLoop { batch: usize, id: String },
    #[error("batch {batch}: interval list does not match the vertex list")]
    IntervalMismatch { batch: usize },
    #[error("batch {batch}: mixed representation — some batches carry intervals, some do not")]
    MixedRepresentation { batch: usize },
    #[error(
        "batch {batch}: edges disagree with interval overlaps between {a:?} and {b:?} \
         (edge present: {edge}, overlap: {overlap})"
    )]
    EdgeOverlapMismatch { batch: usize, a: String, b: String, edge: bool, overlap: bool },
    #[error("algorithm {algorithm}: batch {batch}: {problem}")]
    BadColoring { algorithm: String, batch: usize, problem: String },
    #[error("algorithm {algorithm} requires {needs}")]
    UnsupportedInstance { algorithm: String, needs: String },
    #[error("algorithm {algorithm} aborted: {problem}")]
    AlgorithmFailure { algorithm: String, problem: String },
    #[error("adversary {adversary}: {problem}")]
    BadCertificate { adversary: String, problem: String },
    #[error("adversary produced more than {limit} batches")]
    TooManyBatches { limit: usize },
}

/// Validate a batch against the vertices revealed so far and add it to `g`.
fn extend_graph(g: &mut Graph, batch: &RevealedBatch, batch_index: usize) -> Result<(), EngineError> {
    let fresh: BTreeSet<&String> = batch.vertices.iter().collect();
    if fresh.len() != batch.vertices.len() {
        let dup = batch
            .vertices
            .iter()
            .find(|v| batch.vertices.iter().filter(|w| w == v).count() > 1)
            .unwrap();
        return Err(EngineError::DuplicateVertex { batch: batch_index, id: dup.clone() });
    }
    for v in &batch.vertices {
        if g.index_of(v).is_some() {
            return Err(EngineError::DuplicateVertex { batch: batch_index, id: v.clone() });
        }
    }
    if let Some(ivs) = &batch.intervals {
        let iv_ids: BTreeSet<&String> = ivs.iter().map(|iv| &iv.id).collect();
        if ivs.len() != batch.vertices.len() || iv_ids != fresh {
            return Err(EngineError::IntervalMismatch { batch: batch_index });
        }
    }
    for v in &batch.vertices {
        g.add_vertex(v);
    }
    for (a, b) in &batch.edges {
        if a == b {
            return Err(EngineError::SelfLoop { batch: batch_index, id: a.clone() });
        }
        if g.index_of(a).is_none() || g.index_of(b).is_none() {
            return Err(EngineError::UnknownEndpoint {
                batch: batch_index,
                a: a.clone(),
                b: b.clone(),
            });
        }
        if !fresh.contains(a) && !fresh.contains(b) {
            return Err(EngineError::StaleEdge { batch: batch_index, a: a.clone(), b: b.clone() });
        }
        g.add_edge(a, b).expect("endpoints checked");
    }
    Ok(())
}

/// When intervals are present, the revealed edges must be exactly the
/// geometric overlaps involving the new batch.
fn check_overlap_consistency(
    g: &Graph,
    all_intervals: &[Interval],
    new_from: usize,
    batch_index: usize,
) -> Result<(), EngineError> {
    for i in new_from..all_intervals.len() {
        for j in 0..i {
            let a = &all_intervals[j];
            let b = &all_intervals[i];
            let overlap = a.overlaps(b);
            let edge = match (g.index_of(&a.id), g.index_of(&b.id)) {
                (Some(ai), Some(bi)) => g.has_edge(ai, bi),
                _ => false,
            };
            if overlap != edge {
                return Err(EngineError::EdgeOverlapMismatch {
                    batch: batch_index,
                    a: a.id.clone(),
                    b: b.id.clone(),
                    edge,
                    overlap,
                });
            }
        }
    }
    Ok(())
}

fn check_assignment(
    algorithm: &str,
    batch_index: usize,
    g: &Graph,
    colors: &Coloring,
    batch: &RevealedBatch,
    assigned: &BTreeMap<String, u64>,
) -> Result<(), EngineError> {
    let bad = |problem: String| EngineError::BadColoring {
        algorithm: algorithm.to_string(),
        batch: batch_index,
        problem,
    };
    for v in &batch.vertices {
        match assigned.get(v) {
            None => return Err(bad(format!("no color for {v:?}"))),
            Some(0) => return Err(bad(format!("color 0 on {v:?}; colors start at 1"))),
            Some(_) => {}
        }
    }
    for v in assigned.keys() {
        if !batch.vertices.contains(v) {
            return Err(bad(format!("colored {v:?}, which is not in the batch")));
        }
    }
    for v in &batch.vertices {
        let c = assigned[v];
        let vi = g.index_of(v).unwrap();
        for &ui in g.neighbors(vi) {
            let u = g.id_of(ui);
            let uc = assigned.get(u).copied().or_else(|| colors.get(u).copied());
            if uc == Some(c) {
                return Err(bad(format!("edge ({u:?}, {v:?}) is monochromatic in color {c}")));
            }
        }
    }
    Ok(())
}

/// One round of a finished run: the batch as revealed and the colors the
/// algorithm gave its vertices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranscriptRound {
    pub batch: RevealedBatch,
    pub assigned: BTreeMap<String, u64>,
}

/// Full record of a run; contains the batches, so it can be replayed as an
/// `Instance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transcript {
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adversary: Option<String>,
    pub objective: Objective,
    pub rounds: Vec<TranscriptRound>,
    pub coloring: Coloring,
    pub cost: u64,
}

impl Transcript {
    pub fn to_instance(&self) -> Instance {
        Instance {
            objective: self.objective,
            batches: self.rounds.iter().map(|r| r.batch.clone()).collect(),
        }
    }
}

/// Play `alg` against a fixed instance, enforcing the model rules.
pub fn run_instance(alg: &mut dyn OnlineColorer, instance: &Instance) -> Result<Transcript, EngineError> {
    let mut g = Graph::new();
    let mut colors: Coloring = BTreeMap::new();
    let mut prior_intervals: Vec<Interval> = Vec::new();
    let mut have_intervals = true;
    let mut rounds = Vec::new();
    for (i, batch) in instance.batches.iter().enumerate() {
        let batch_index = i + 1;
        extend_graph(&mut g, batch, batch_index)?;
        if let Some(ivs) = &batch.intervals {
            if !have_intervals {
                return Err(EngineError::MixedRepresentation { batch: batch_index });
            }
            let new_from = prior_intervals.len();
            prior_intervals.extend(ivs.iter().cloned());
            check_overlap_consistency(&g, &prior_intervals, new_from, batch_index)?;
        } else {
            if have_intervals && !prior_intervals.is_empty() {
                return Err(EngineError::MixedRepresentation { batch: batch_index });
            }
            have_intervals = false;
        }
        let new_in_batch = batch.intervals.as_ref().map(|ivs| ivs.len()).unwrap_or(0);
        let ctx = BatchContext {
            graph: &g,
            colors: &colors,
            batch,
            batch_index,
            total_batches: Some(instance.k()),
            prior_intervals: if have_intervals {
                Some(&prior_intervals[..prior_intervals.len() - new_in_batch])
            } else {
                None
            },
        };
        let assigned = alg.color_batch(&ctx)?;
        check_assignment(alg.name(), batch_index, &g, &colors, batch, &assigned)?;
        colors.extend(assigned.clone());
        rounds.push(TranscriptRound { batch: batch.clone(), assigned });
    }
    let cost = coloring_cost(instance.objective, &colors);
    Ok(Transcript {
        algorithm: alg.name().to_string(),
        adversary: None,
        objective: instance.objective,
        rounds,
        coloring: colors,
        cost,
    })
}

/// What an adversary emits each round.
pub enum AdversaryStep {
    Batch(RevealedBatch),
    Stop,
}

/// Claims the adversary makes about the finished construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    /// Lower bound on the cost the algorithm was forced to pay.
    pub forced_cost: RatPair,
    /// Upper bound on the optimum of the constructed instance.
    pub opt_bound: RatPair,
    /// Whether `opt_bound` is the exact optimum or only an upper bound.
    pub opt_kind: OptKind,
    /// Proper coloring realizing a cost of at most `opt_bound`.
    pub witness: Coloring,
    /// Hidden structure revealed after the fact (e.g. which placements were
    /// the live ones), for inspection and replay.
    pub reveal: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptKind {
    Exact,
    UpperBound,
}

pub trait Adversary {
    fn name(&self) -> &'static str;
    fn objective(&self) -> Objective;
    /// Announced batch count, when the construction declares one up front.
    fn announced_batches(&self) -> Option<usize>;
    /// Produce the next batch after seeing the full coloring so far.
    fn next_batch(&mut self, colors: &Coloring) -> AdversaryStep;
    /// Bounds and witness for the construction; valid once Stop was emitted.
    fn certificate(&self) -> Certificate;
}

/// Outcome of a duel, with the exact ratio of forced cost to the witnessed
/// optimum bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DuelReport {
    pub algorithm: String,
    pub adversary: String,
    pub objective: Objective,
    pub algorithm_cost: u64,
    /// Cost of the adversary's witness coloring (an upper bound on OPT).
    pub witness_cost: u64,
    pub opt_bound: RatPair,
    pub opt_kind: OptKind,
    /// `algorithm_cost / min(witness_cost, opt_bound)`; 1 on empty instances.
    pub ratio: RatPair,
    /// Did the algorithm pay at least the adversary's claimed forced cost?
    pub forced_cost_met: bool,
    pub transcript: Transcript,
    pub certificate: Certificate,
}

pub const DEFAULT_BATCH_LIMIT: usize = 100_000;

/// Play `alg` against `adv` until the adversary stops, then check the
/// certificate: the witness must properly color the revealed graph and cost
/// at most the claimed optimum bound.
pub fn run_duel(
    alg: &mut dyn OnlineColorer,
    adv: &mut dyn Adversary,
    batch_limit: usize,
) -> Result<DuelReport, EngineError> {
    let objective = adv.objective();
    let mut g = Graph::new();
    let mut colors: Coloring = BTreeMap::new();
    let mut prior_intervals: Vec<Interval> = Vec::new();
    let mut have_intervals = true;
    let mut rounds = Vec::new();
    loop {
        if rounds.len() >= batch_limit {
            return Err(EngineError::TooManyBatches { limit: batch_limit });
        }
        let batch = match adv.next_batch(&colors) {
            AdversaryStep::Stop => break,
            AdversaryStep::Batch(b) => b,
        };
        let batch_index = rounds.len() + 1;
        extend_graph(&mut g, &batch, batch_index)?;
        if let Some(ivs) = &batch.intervals {
            if !have_intervals {
                return Err(EngineError::MixedRepresentation { batch: batch_index });
            }
            let new_from = prior_intervals.len();
            prior_intervals.extend(ivs.iter().cloned());
            check_overlap_consistency(&g, &prior_intervals, new_from, batch_index)?;
        } else {
            if have_intervals && !prior_intervals.is_empty() {
                return Err(EngineError::MixedRepresentation { batch: batch_index });
            }
            have_intervals = false;
        }
        let new_in_batch = batch.intervals.as_ref().map(|ivs| ivs.len()).unwrap_or(0);
        let ctx = BatchContext {
            graph: &g,
            colors: &colors,
            batch: &batch,
            batch_index,
            total_batches: adv.announced_batches(),
            prior_intervals: if have_intervals {
                Some(&prior_intervals[..prior_intervals.len() - new_in_batch])
            } else {
                None
            },
        };
        let assigned = alg.color_batch(&ctx)?;
        check_assignment(alg.name(), batch_index, &g, &colors, &batch, &assigned)?;
        colors.extend(assigned.clone());
        rounds.push(TranscriptRound { batch, assigned });
    }

    let certificate = adv.certificate();
    let bad = |problem: String| EngineError::BadCertificate {
        adversary: adv.name().to_string(),
        problem,
    };
    let violations = crate::graph::validate_coloring(&g, &certificate.witness);
    if !violations.is_clean() {
        return Err(bad(format!("witness is not a proper coloring: {violations:?}")));
    }
    let witness_cost = coloring_cost(objective, &certificate.witness);
    if rat_int(witness_cost as i128) > certificate.opt_bound.0 {
        return Err(bad(format!(
            "witness costs {witness_cost}, above the claimed optimum bound {}",
            certificate.opt_bound.0
        )));
    }

    let algorithm_cost = coloring_cost(objective, &colors);
    let denom = rat_int(witness_cost as i128).min(certificate.opt_bound.0);
    let ratio = if g.n() == 0 || denom == rat_int(0) {
        rat_int(1)
    } else {
        rat_int(algorithm_cost as i128) / denom
    };
    let forced_cost_met = rat_int(algorithm_cost as i128) >= certificate.forced_cost.0;
    let cost = algorithm_cost;
    Ok(DuelReport {
        algorithm: alg.name().to_string(),
        adversary: adv.name().to_string(),
        objective,
        algorithm_cost,
        witness_cost,
        opt_bound: certificate.opt_bound,
        opt_kind: certificate.opt_kind,
        ratio: RatPair(ratio),
        forced_cost_met,
        transcript: Transcript {
            algorithm: alg.name().to_string(),
            adversary: Some(adv.name().to_string()),
            objective,
            rounds,
            coloring: colors,
            cost,
        },
        certificate,
    })
}

/// Exact ratio of an algorithm's cost to a known optimum, `1` when both are
/// zero (the empty instance).
pub fn cost_ratio(algorithm_cost: u64, opt: u64) -> Rat {
    if opt == 0 {
        rat_int(1)
    } else {
        Rat::new(algorithm_cost as i128, opt as i128)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Colors every batch with the smallest colors not used by neighbors.
    struct Greedy;
    impl OnlineColorer for Greedy {
        fn name(&self) -> &'static str {
            "test-greedy"
        }
        fn color_batch(&mut self, ctx: &BatchContext) -> Result<BTreeMap<String, u64>, EngineError> {
            let mut out = BTreeMap::new();
            for v in &ctx.batch.vertices {
                let vi = ctx.graph.index_of(v).unwrap();
                let mut used: BTreeSet<u64> = BTreeSet::new();
                for &ui in ctx.graph.neighbors(vi) {
                    let u = ctx.graph.id_of(ui);
                    if let Some(&c) = out.get(u).or_else(|| ctx.colors.get(u)) {
                        used.insert(c);
                    }
                }
                let mut c = 1;
                while used.contains(&c) {
                    c += 1;
                }
                out.insert(v.clone(), c);
            }
            Ok(out)
        }
    }

    /// Deliberately reuses a neighbor's color on the second batch.
    struct Clasher;
    impl OnlineColorer for Clasher {
        fn name(&self) -> &'static str {
            "test-clasher"
        }
        fn color_batch(&mut self, ctx: &BatchContext) -> Result<BTreeMap<String, u64>, EngineError> {
            Ok(ctx.batch.vertices.iter().map(|v| (v.clone(), 1)).collect())
        }
    }

    fn two_batch_path() -> Instance {
        Instance {
            objective: Objective::MaxColor,
            batches: vec![
                RevealedBatch::graph_batch(vec!["a".into(), "b".into()], vec![]),
                RevealedBatch::graph_batch(
                    vec!["c".into()],
                    vec![("a".into(), "c".into()), ("b".into(), "c".into())],
                ),
            ],
        }
    }

    #[test]
    fn greedy_run_produces_replayable_transcript() {
        let t = run_instance(&mut Greedy, &two_batch_path()).unwrap();
        assert_eq!(t.cost, 2);
        assert_eq!(t.coloring["a"], 1);
        assert_eq!(t.coloring["c"], 2);
        let replay = run_instance(&mut Greedy, &t.to_instance()).unwrap();
        assert_eq!(replay.coloring, t.coloring);
    }

    #[test]
    fn improper_batch_coloring_is_rejected() {
        let err = run_instance(&mut Clasher, &two_batch_path()).unwrap_err();
        assert!(matches!(err, EngineError::BadColoring { batch: 2, .. }), "{err}");
    }

    #[test]
    fn stale_and_unknown_edges_are_rejected() {
        let stale = Instance {
            objective: Objective::MaxColor,
            batches: vec![
                RevealedBatch::graph_batch(vec!["a".into(), "b".into()], vec![]),
                RevealedBatch::graph_batch(vec!["c".into()], vec![("a".into(), "b".into())]),
            ],
        };
        assert!(matches!(
            run_instance(&mut Greedy, &stale).unwrap_err(),
            EngineError::StaleEdge { batch: 2, .. }
        ));
        let unknown = Instance {
            objective: Objective::MaxColor,
            batches: vec![RevealedBatch::graph_batch(
                vec!["a".into()],
                vec![("a".into(), "zzz".into())],
            )],
        };
        assert!(matches!(
            run_instance(&mut Greedy, &unknown).unwrap_err(),
            EngineError::UnknownEndpoint { batch: 1, .. }
        ));
    }

    #[test]
    fn interval_batches_must_match_edges() {
        let bad = Instance {
            objective: Objective::MaxColor,
            batches: vec![RevealedBatch::interval_batch(
                vec![Interval::closed(0, 2, "a"), Interval::closed(1, 3, "b")],
                vec![], // missing the overlap edge
            )],
        };
        assert!(matches!(
            run_instance(&mut Greedy, &bad).unwrap_err(),
            EngineError::EdgeOverlapMismatch { .. }
        ));
    }

    #[test]
    fn sum_and_max_costs_differ() {
        let mut colors: Coloring = BTreeMap::new();
        colors.insert("a".into(), 1);
        colors.insert("b".into(), 3);
        assert_eq!(coloring_cost(Objective::MaxColor, &colors), 3);
        assert_eq!(coloring_cost(Objective::SumColors, &colors), 4);
    }
}
