//! Sum-coloring strategies for batched graphs. Three colorers live here: one
//! that needs the batch count up front and interleaves per-batch optimal
//! colorings so no two batches ever share a color, one that works without the
//! batch count by spreading each batch's optimal colors along a certified
//! schedule of color budgets, and plain First-Fit restricted to forests,
//! where each component of `t` vertices provably pays at most `2t - 1`.

use crate::algorithms::{batch_subgraph, neighbor_colors};
use crate::engine::{run_instance, BatchContext, EngineError, Instance, OnlineColorer};
use crate::graph::{Coloring, Graph};
use crate::oracle::{min_sum_coloring_exact, OracleError};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A color-budget schedule: a nondecreasing function `f` with `f(i) >= 1`
/// plus an exact rational `c_f` certified to dominate every partial sum of
/// `1/f(1) + 1/f(2) + ...`. The budget for the `j`-th within-batch color of
/// batch `i` is `floor(j * c_f * f(i))`; the certification is what guarantees
/// a free color always exists under that budget.
pub struct ScheduleFunction {
    name: String,
    f: Box<dyn Fn(usize) -> u64 + Send + Sync>,
    c_f: Rat,
}

impl ScheduleFunction {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(usize) -> u64 + Send + Sync + 'static,
        c_f: Rat,
    ) -> Self {
        ScheduleFunction { name: name.into(), f: Box::new(f), c_f }
    }

    /// The default schedule `f(i) = i^2` with the certified bound
    /// `329/200 = 1.645`, strictly above the limit of the series.
    pub fn quadratic() -> Self {
        ScheduleFunction::new("quadratic", |i| (i * i) as u64, Rat::new(329, 200))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn c_f(&self) -> Rat {
        self.c_f
    }

    pub fn value(&self, i: usize) -> u64 {
        (self.f)(i)
    }

    /// Largest color the `j`-th within-batch color of batch `i` may use:
    /// `floor(j * c_f * f(i))`.
    pub fn cap(&self, j: u64, i: usize) -> u64 {
        let scaled = self.c_f * Rat::from_integer(j as i128 * self.value(i) as i128);
        scaled.floor().to_integer() as u64
    }
}

impl std::fmt::Debug for ScheduleFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScheduleFunction")
            .field("name", &self.name)
            .field("c_f", &self.c_f)
            .finish()
    }
}

/// One budgeted color pick: batch `i`, within-batch color `j`, the cap
/// `floor(j * c_f * f(i))`, and the color actually taken.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub batch: usize,
    pub within: u64,
    pub cap: u64,
    pub assigned: u64,
}

/// Global record of taken colors across a run, one entry per
/// (batch, within-batch color) pair. A color is taken at most once.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ColorLedger {
    pub taken: BTreeSet<u64>,
    pub entries: Vec<LedgerEntry>,
}

impl ColorLedger {
    /// Take the largest untaken color in `1..=cap`, or report that none is
    /// left under the cap.
    fn take_largest_at_most(&mut self, batch: usize, within: u64, cap: u64) -> Option<u64> {
        let assigned = (1..=cap).rev().find(|c| !self.taken.contains(c))?;
        self.taken.insert(assigned);
        self.entries.push(LedgerEntry { batch, within, cap, assigned });
        Some(assigned)
    }
}

fn oracle_limit_error(algorithm: &'static str, e: OracleError) -> EngineError {
    match e {
        OracleError::SizeLimitExceeded { n, limit } => EngineError::UnsupportedInstance {
            algorithm: algorithm.into(),
            needs: format!("batch subgraphs small enough for exact sum coloring (got {n} vertices, limit {limit})"),
        },
    }
}

/// Sum-colors each batch optimally on its own, then interleaves the color
/// classes of the `k` batches: within-batch color `c` of batch `i` becomes
/// `k * (c - 1) + i`. Distinct batches land in distinct residues mod `k`, so
/// cross-batch edges never clash, and the total sum is at most `k` times the
/// sum of the per-batch optima — itself at most `k` times the optimal sum of
/// the whole graph.
#[derive(Default)]
pub struct KBatchColor;

impl KBatchColor {
    pub fn new() -> Self {
        KBatchColor
    }
}

impl OnlineColorer for KBatchColor {
    fn name(&self) -> &'static str {
        "k-batch-color"
    }

    fn color_batch(&mut self, ctx: &BatchContext) -> Result<BTreeMap<String, u64>, EngineError> {
        let k = ctx.total_batches.ok_or_else(|| EngineError::UnsupportedInstance {
            algorithm: "k-batch-color".into(),
            needs: "the total batch count announced in advance".into(),
        })?;
        if ctx.batch_index > k {
            return Err(EngineError::AlgorithmFailure {
                algorithm: "k-batch-color".into(),
                problem: format!("batch {} arrived after the announced {k} batches", ctx.batch_index),
            });
        }
        let sub = batch_subgraph(ctx);
        let (_, within) =
            min_sum_coloring_exact(&sub).map_err(|e| oracle_limit_error("k-batch-color", e))?;
        let (k, i) = (k as u64, ctx.batch_index as u64);
        Ok(ctx
            .batch
            .vertices
            .iter()
            .map(|v| {
                let c = within[sub.index_of(v).expect("batch vertex in subgraph")];
                (v.clone(), k * (c - 1) + i)
            })
            .collect())
    }
}

/// Sum-color a whole instance with the batch count taken from the instance.
pub fn k_batch_color(instance: &Instance) -> Result<Coloring, EngineError> {
    Ok(run_instance(&mut KBatchColor::new(), instance)?.coloring)
}

/// Sum-colors each batch optimally on its own, then maps the `j`-th
/// within-batch color of batch `i` to the largest still-untaken color at most
/// `floor(j * c_f * f(i))`. Works without knowing the batch count; the
/// schedule's certified series bound guarantees a color is always available,
/// and the final sum is at most `c_f * f(k)` times optimal.
pub struct BatchColorF {
    schedule: ScheduleFunction,
    ledger: ColorLedger,
    partial_sum: BigRational,
    prev_f: u64,
}

impl BatchColorF {
    pub fn new(schedule: ScheduleFunction) -> Self {
        BatchColorF {
            schedule,
            ledger: ColorLedger::default(),
            partial_sum: BigRational::from_integer(BigInt::from(0)),
            prev_f: 0,
        }
    }

    pub fn ledger(&self) -> &ColorLedger {
        &self.ledger
    }

    pub fn schedule(&self) -> &ScheduleFunction {
        &self.schedule
    }

    fn fail(&self, problem: String) -> EngineError {
        EngineError::AlgorithmFailure { algorithm: "batch-color-f".into(), problem }
    }

    /// Check the schedule invariants at index `i`: values stay nondecreasing
    /// and at least 1, and the running sum of `1/f(i)` stays within the
    /// certified bound `c_f`.
    fn admit_batch(&mut self, i: usize) -> Result<u64, EngineError> {
        let fi = self.schedule.value(i);
        if fi == 0 {
            return Err(self.fail(format!("schedule value f({i}) = 0; values must be at least 1")));
        }
        if fi < self.prev_f {
            return Err(self.fail(format!(
                "schedule is not nondecreasing: f({i}) = {fi} after {}",
                self.prev_f
            )));
        }
        self.prev_f = fi;
        self.partial_sum += BigRational::new(BigInt::from(1), BigInt::from(fi));
        let c_f = BigRational::new(
            BigInt::from(*self.schedule.c_f.numer()),
            BigInt::from(*self.schedule.c_f.denom()),
        );
        if self.partial_sum > c_f {
            return Err(self.fail(format!(
                "certified bound {} is below the series partial sum after {i} terms",
                self.schedule.c_f
            )));
        }
        Ok(fi)
    }
}

impl OnlineColorer for BatchColorF {
    fn name(&self) -> &'static str {
        "batch-color-f"
    }

    fn color_batch(&mut self, ctx: &BatchContext) -> Result<BTreeMap<String, u64>, EngineError> {
        let i = ctx.batch_index;
        self.admit_batch(i)?;
        let sub = batch_subgraph(ctx);
        let (_, within) =
            min_sum_coloring_exact(&sub).map_err(|e| oracle_limit_error("batch-color-f", e))?;
        let mut classes: BTreeMap<u64, Vec<&String>> = BTreeMap::new();
        for v in &ctx.batch.vertices {
            let c = within[sub.index_of(v).expect("batch vertex in subgraph")];
            classes.entry(c).or_default().push(v);
        }
        let mut out = BTreeMap::new();
        for (j, members) in classes {
            let cap = self.schedule.cap(j, i);
            let color = self.ledger.take_largest_at_most(i, j, cap).ok_or_else(|| {
                self.fail(format!(
                    "batch {i} is infeasible: every color up to the cap {cap} for \
                     within-batch color {j} is already taken"
                ))
            })?;
            for v in members {
                out.insert(v.clone(), color);
            }
        }
        Ok(out)
    }
}

/// Sum-color a whole instance against a schedule, returning the coloring and
/// the budget ledger of every color pick.
pub fn batch_color_f(
    instance: &Instance,
    schedule: ScheduleFunction,
) -> Result<(Coloring, ColorLedger), EngineError> {
    let mut alg = BatchColorF::new(schedule);
    let t = run_instance(&mut alg, instance)?;
    Ok((t.coloring, alg.ledger))
}

/// First-Fit for forests under the sum objective: each vertex takes the
/// smallest color no neighbor holds, and every revealed prefix must stay a
/// forest. A component with `t` vertices then pays at most `2t - 1`, which is
/// within a factor 2 of any coloring.
#[derive(Default)]
pub struct FirstFitSum;

impl FirstFitSum {
    pub fn new() -> Self {
        FirstFitSum
    }
}

impl OnlineColorer for FirstFitSum {
    fn name(&self) -> &'static str {
        "first-fit-sum"
    }

    fn color_batch(&mut self, ctx: &BatchContext) -> Result<BTreeMap<String, u64>, EngineError> {
        if !ctx.graph.is_forest() {
            return Err(EngineError::UnsupportedInstance {
                algorithm: "first-fit-sum".into(),
                needs: "a graph that stays a forest after every batch".into(),
            });
        }
        let mut out = BTreeMap::new();
        for v in &ctx.batch.vertices {
            let used = neighbor_colors(ctx, &out, v);
            let mut c = 1;
            while used.contains(&c) {
                c += 1;
            }
            out.insert(v.clone(), c);
        }
        Ok(out)
    }
}

/// Color total of one connected component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSum {
    pub vertices: usize,
    pub color_sum: u64,
}

/// Per-component color totals of a colored graph.
pub fn component_sums(g: &Graph, coloring: &Coloring) -> Vec<ComponentSum> {
    g.components()
        .into_iter()
        .map(|comp| ComponentSum {
            vertices: comp.len(),
            color_sum: comp.iter().map(|&v| coloring[g.id_of(v)]).sum(),
        })
        .collect()
}

/// First-Fit a forest instance and report the coloring with per-component
/// totals, each at most twice the component size minus one.
pub fn first_fit_sum(instance: &Instance) -> Result<(Coloring, Vec<ComponentSum>), EngineError> {
    let t = run_instance(&mut FirstFitSum::new(), instance)?;
    let g = instance.graph()?;
    let sums = component_sums(&g, &t.coloring);
    Ok((t.coloring, sums))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Objective, RevealedBatch};
    use crate::graph::{color_sum, validate_coloring};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sum_instance(batches: Vec<RevealedBatch>) -> Instance {
        Instance { objective: Objective::SumColors, batches }
    }

    /// An edge revealed first, then a pendant vertex: the path u - v - w.
    fn split_path() -> Instance {
        sum_instance(vec![
            RevealedBatch::graph_batch(
                vec!["u".into(), "v".into()],
                vec![("u".into(), "v".into())],
            ),
            RevealedBatch::graph_batch(vec!["w".into()], vec![("v".into(), "w".into())]),
        ])
    }

    #[test]
    fn interleaving_keeps_batches_apart_and_within_twice_optimal() {
        let inst = split_path();
        let coloring = k_batch_color(&inst).unwrap();
        // Batch 1 is one edge: optimal classes {1, 2} map to {1, 3}. The new
        // vertex is alone in batch 2: class 1 maps to 2. The path as a whole
        // has optimal sum 4 (both ends on 1), so the ratio here is 3/2.
        let uv: BTreeSet<u64> = [coloring["u"], coloring["v"]].into();
        assert_eq!(uv, BTreeSet::from([1, 3]));
        assert_eq!(coloring["w"], 2);
        assert_eq!(color_sum(&coloring), 6);
        let (opt, _) = min_sum_coloring_exact(&inst.graph().unwrap()).unwrap();
        assert_eq!(opt, 4);
        assert!(color_sum(&coloring) <= 2 * opt);
    }

    #[test]
    fn single_batch_matches_the_exact_oracle() {
        let inst = sum_instance(vec![RevealedBatch::graph_batch(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![
                ("a".into(), "b".into()),
                ("b".into(), "c".into()),
                ("c".into(), "d".into()),
                ("d".into(), "a".into()),
            ],
        )]);
        let coloring = k_batch_color(&inst).unwrap();
        let g = inst.graph().unwrap();
        let (opt, witness) = min_sum_coloring_exact(&g).unwrap();
        assert_eq!(color_sum(&coloring), opt);
        for (vi, &c) in witness.iter().enumerate() {
            assert_eq!(coloring[g.id_of(vi)], c);
        }
    }

    #[test]
    fn independent_batches_take_their_batch_index() {
        let batches = (0..3)
            .map(|b| {
                RevealedBatch::graph_batch(
                    (0..4).map(|j| format!("v{b}-{j}")).collect(),
                    vec![],
                )
            })
            .collect();
        let coloring = k_batch_color(&sum_instance(batches)).unwrap();
        for (v, &c) in &coloring {
            let batch: u64 = v[1..2].parse::<u64>().unwrap() + 1;
            assert_eq!(c, batch, "{v}");
        }
    }

    #[test]
    fn batch_colors_never_collide_across_batches() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..60 {
            let inst = random_batched(&mut rng, 4, 10);
            let t = run_instance(&mut KBatchColor::new(), &inst).unwrap();
            let k = inst.k() as u64;
            for (ri, round) in t.rounds.iter().enumerate() {
                for c in round.assigned.values() {
                    assert_eq!(
                        (c - 1) % k,
                        ri as u64,
                        "trial {trial}: batch {} used color {c} outside its residue",
                        ri + 1
                    );
                }
            }
            let g = inst.graph().unwrap();
            assert!(validate_coloring(&g, &t.coloring).is_clean(), "trial {trial}");
        }
    }

    #[test]
    fn schedule_caps_follow_the_floor_rule() {
        // Quadratic schedule: batch 1 caps are floor(1.645) = 1 and
        // floor(3.29) = 3; batch 2's first cap is floor(1 * 1.645 * 4) = 6.
        let s = ScheduleFunction::quadratic();
        assert_eq!(s.cap(1, 1), 1);
        assert_eq!(s.cap(2, 1), 3);
        assert_eq!(s.cap(1, 2), 6);

        let inst = sum_instance(vec![
            RevealedBatch::graph_batch(
                vec!["a".into(), "b".into()],
                vec![("a".into(), "b".into())],
            ),
            RevealedBatch::graph_batch(vec!["d".into()], vec![]),
        ]);
        let (coloring, ledger) = batch_color_f(&inst, ScheduleFunction::quadratic()).unwrap();
        let ab: BTreeSet<u64> = [coloring["a"], coloring["b"]].into();
        assert_eq!(ab, BTreeSet::from([1, 3]));
        assert_eq!(coloring["d"], 6);
        let picks: Vec<(u64, u64)> =
            ledger.entries.iter().map(|e| (e.cap, e.assigned)).collect();
        assert_eq!(picks, vec![(1, 1), (3, 3), (6, 6)]);
    }

    #[test]
    fn identity_schedule_reproduces_the_oracle_on_one_batch() {
        let inst = sum_instance(vec![RevealedBatch::graph_batch(
            vec!["a".into(), "b".into(), "c".into()],
            vec![("a".into(), "b".into()), ("b".into(), "c".into())],
        )]);
        let schedule = ScheduleFunction::new("flat", |_| 1, Rat::from_integer(1));
        let (coloring, _) = batch_color_f(&inst, schedule).unwrap();
        let g = inst.graph().unwrap();
        let (opt, witness) = min_sum_coloring_exact(&g).unwrap();
        assert_eq!(color_sum(&coloring), opt);
        for (vi, &c) in witness.iter().enumerate() {
            assert_eq!(coloring[g.id_of(vi)], c);
        }
    }

    #[test]
    fn diverging_partial_sums_are_rejected() {
        // Two batches under a flat schedule certified only up to one term.
        let inst = sum_instance(vec![
            RevealedBatch::graph_batch(vec!["a".into()], vec![]),
            RevealedBatch::graph_batch(vec!["b".into()], vec![]),
        ]);
        let schedule = ScheduleFunction::new("flat", |_| 1, Rat::from_integer(1));
        let err = batch_color_f(&inst, schedule).unwrap_err();
        assert!(
            matches!(err, EngineError::AlgorithmFailure { ref problem, .. }
                if problem.contains("certified bound")),
            "{err}"
        );
    }

    /// Random instance with up to `max_k` batches of up to `max_batch`
    /// vertices, edges sprinkled within and across batches.
    fn random_batched(rng: &mut ChaCha8Rng, max_k: usize, max_batch: usize) -> Instance {
        let k = rng.gen_range(1..=max_k);
        let mut batches = Vec::new();
        let mut seen: Vec<String> = Vec::new();
        for b in 0..k {
            let n = rng.gen_range(if b == 0 { 1 } else { 0 }..=max_batch);
            let fresh: Vec<String> = (0..n).map(|j| format!("v{b}-{j}")).collect();
            let mut edges = Vec::new();
            for (idx, v) in fresh.iter().enumerate() {
                for u in &fresh[..idx] {
                    if rng.gen_bool(0.3) {
                        edges.push((u.clone(), v.clone()));
                    }
                }
                for u in &seen {
                    if rng.gen_bool(0.15) {
                        edges.push((u.clone(), v.clone()));
                    }
                }
            }
            seen.extend(fresh.iter().cloned());
            batches.push(RevealedBatch::graph_batch(fresh, edges));
        }
        sum_instance(batches)
    }

    #[test]
    fn budgeted_runs_stay_feasible_and_within_their_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..150 {
            let inst = random_batched(&mut rng, 6, 8);
            let (coloring, ledger) = batch_color_f(&inst, ScheduleFunction::quadratic())
                .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            let g = inst.graph().unwrap();
            assert!(validate_coloring(&g, &coloring).is_clean(), "trial {trial}");
            let mut taken = BTreeSet::new();
            for e in &ledger.entries {
                assert!(e.assigned >= 1 && e.assigned <= e.cap, "trial {trial}: {e:?}");
                assert!(taken.insert(e.assigned), "trial {trial}: color {e:?} reused");
            }
        }
    }

    #[test]
    fn per_batch_optima_never_beat_the_whole_graph_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..80 {
            let inst = random_batched(&mut rng, 3, 4);
            let whole = inst.graph().unwrap();
            if whole.n() > 12 {
                continue;
            }
            let (whole_opt, _) = min_sum_coloring_exact(&whole).unwrap();
            let mut parts = 0;
            for b in &inst.batches {
                let sub = whole.induced(&b.vertices);
                let (opt, _) = min_sum_coloring_exact(&sub).unwrap();
                parts += opt;
            }
            assert!(parts <= whole_opt, "trial {trial}: {parts} > {whole_opt}");
        }
    }

    #[test]
    fn lone_vertex_pays_exactly_the_budget_base_case() {
        let inst = sum_instance(vec![RevealedBatch::graph_batch(vec!["a".into()], vec![])]);
        let (coloring, sums) = first_fit_sum(&inst).unwrap();
        assert_eq!(coloring["a"], 1);
        assert_eq!(sums, vec![ComponentSum { vertices: 1, color_sum: 1 }]);
    }

    #[test]
    fn star_center_arriving_last_stays_under_budget() {
        let inst = sum_instance(vec![
            RevealedBatch::graph_batch(
                vec!["l1".into(), "l2".into(), "l3".into()],
                vec![],
            ),
            RevealedBatch::graph_batch(
                vec!["c".into()],
                vec![
                    ("l1".into(), "c".into()),
                    ("l2".into(), "c".into()),
                    ("l3".into(), "c".into()),
                ],
            ),
        ]);
        let (coloring, sums) = first_fit_sum(&inst).unwrap();
        assert_eq!(coloring["c"], 2);
        assert_eq!(sums, vec![ComponentSum { vertices: 4, color_sum: 5 }]);
        assert!(sums[0].color_sum <= 2 * 4 - 1);
    }

    #[test]
    fn path_ends_before_middle_stays_under_budget() {
        let inst = sum_instance(vec![
            RevealedBatch::graph_batch(vec!["a".into(), "c".into()], vec![]),
            RevealedBatch::graph_batch(
                vec!["b".into()],
                vec![("a".into(), "b".into()), ("c".into(), "b".into())],
            ),
        ]);
        let (coloring, sums) = first_fit_sum(&inst).unwrap();
        assert_eq!(color_sum(&coloring), 4);
        assert_eq!(sums, vec![ComponentSum { vertices: 3, color_sum: 4 }]);
    }

    #[test]
    fn cycles_are_refused() {
        let inst = sum_instance(vec![RevealedBatch::graph_batch(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                ("a".into(), "b".into()),
                ("b".into(), "c".into()),
                ("c".into(), "a".into()),
            ],
        )]);
        let err = first_fit_sum(&inst).unwrap_err();
        assert!(
            matches!(err, EngineError::UnsupportedInstance { ref needs, .. }
                if needs.contains("forest")),
            "{err}"
        );
    }

    /// Random forest revealed in random batches: vertices attach to earlier
    /// vertices (or stay isolated), so every prefix is a forest.
    fn random_forest_instance(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Instance {
        let mut batches = Vec::new();
        let mut revealed = 0usize;
        let cuts: BTreeSet<usize> = (0..k - 1).map(|_| rng.gen_range(0..n)).collect();
        let mut fresh = Vec::new();
        let mut edges = Vec::new();
        for v in 0..n {
            let id = format!("t{v}");
            if v > 0 && rng.gen_bool(0.8) {
                let parent = rng.gen_range(0..v);
                edges.push((format!("t{parent}"), id.clone()));
            }
            fresh.push(id);
            if cuts.contains(&v) || v == n - 1 {
                batches.push(RevealedBatch::graph_batch(
                    std::mem::take(&mut fresh),
                    std::mem::take(&mut edges),
                ));
                revealed = v + 1;
            }
        }
        assert_eq!(revealed, n);
        sum_instance(batches)
    }

    #[test]
    fn forest_components_respect_the_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..60 {
            let n = rng.gen_range(1..60);
            let k = rng.gen_range(1..=4.min(n));
            let inst = random_forest_instance(&mut rng, n, k);
            let (coloring, sums) = first_fit_sum(&inst)
                .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            let g = inst.graph().unwrap();
            assert!(validate_coloring(&g, &coloring).is_clean(), "trial {trial}");
            for s in sums {
                assert!(
                    s.color_sum <= 2 * s.vertices as u64 - 1,
                    "trial {trial}: component of {} pays {}",
                    s.vertices,
                    s.color_sum
                );
            }
        }
    }
}
