//! Two-batch interval coloring with known representation, within a factor
//! 3/2 of optimal: the first batch is colored by a stack discipline; the
//! second batch is colored in rounds that pair each leftover color budget
//! with region-local chains of new intervals.
//!
//! The second-batch machinery is checked against its loop invariant at every
//! round; any violated clause aborts the run with diagnostics instead of
//! emitting a dubious coloring.

use crate::engine::{BatchContext, EngineError, OnlineColorer};
use crate::interval::{
    build_event_order, max_clique_size, maximal_cliques, EventKind, Interval, MaximalClique,
    Position, PositionUniverse,
};
use crate::rat::{rat_int, Rat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Stack coloring of one batch of intervals: colors `omega..1` are pushed so
/// color 1 starts on top; a left endpoint pops the most recently released
/// available color, a right endpoint pushes its interval's color back.
/// Proper, uses exactly the clique number of colors, and its color placement
/// (unlike First-Fit's) keeps the reuse structure needed by the second batch.
pub fn color_first_batch(intervals: &[Interval]) -> Vec<u64> {
    let omega1 = max_clique_size(intervals);
    let mut stack: Vec<u64> = (1..=omega1 as u64).rev().collect();
    let mut colors = vec![0u64; intervals.len()];
    for e in build_event_order(intervals) {
        if e.kind.acquires() {
            let c = stack.pop().expect("stack never runs dry below the clique number");
            colors[e.owner] = c;
        } else {
            stack.push(colors[e.owner]);
        }
    }
    debug_assert_eq!(stack.len(), omega1);
    colors
}

/// One clause of the second-batch loop invariant, checked at a checkpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClauseReport {
    pub clause: String,
    pub pass: bool,
    pub detail: String,
}

/// All clauses checked at the top of one round (`round` = completed rounds).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckpointReport {
    pub round: usize,
    pub clauses: Vec<ClauseReport>,
}

impl CheckpointReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }
}

/// Summary of a second-batch run, kept for transcript diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondBatchReport {
    pub omega: usize,
    pub checkpoints: Vec<CheckpointReport>,
}

#[derive(Debug)]
pub struct TwoBatchesError {
    pub problem: String,
    pub checkpoints: Vec<CheckpointReport>,
}

/// A piece of a first-batch interval (or of a boundary filler interval),
/// produced by cutting at region boundaries. A piece inherits the parent's
/// color and belongs to exactly one region; the parent's left event travels
/// with the leftmost piece and its right event with the rightmost piece, so
/// cutting introduces no new event points. A cut at a piece's own endpoint
/// still yields two pieces — one degenerate — because the regions on both
/// sides of a boundary each need their own copy of the boundary clique.
#[derive(Debug, Clone)]
struct Fragment {
    parent: usize,
    lo: Rat,
    hi: Rat,
    lo_closed: bool,
    hi_closed: bool,
    owns_left: bool,
    owns_right: bool,
    processed: bool,
    region: usize,
}

impl Fragment {
    fn contains(&self, x: &Rat) -> bool {
        (*x > self.lo || (*x == self.lo && self.lo_closed))
            && (*x < self.hi || (*x == self.hi && self.hi_closed))
    }
}

/// A maximal run of the line between two neighboring active clique points
/// (`None` = unbounded side). Boundaries belong to the region. `chains`
/// holds the region's still-uncolored second-batch intervals, partitioned
/// into sets of pairwise-disjoint intervals.
#[derive(Debug)]
struct Region {
    lo: Option<Position>,
    hi: Option<Position>,
    chains: Vec<Vec<usize>>,
}

struct Machine<'a> {
    u: PositionUniverse,
    first: Vec<Interval>,
    first_colors: Vec<u64>,
    second: &'a [Interval],
    omega: usize,
    /// Second-batch depth at each representative point.
    depth: Vec<usize>,
    /// Representative points, ascending.
    reps: Vec<Position>,
    cliques: Vec<MaximalClique>,
    active: Vec<bool>,
    fragments: Vec<Fragment>,
    regions: Vec<Region>,
    colors2: Vec<Option<u64>>,
    round: usize,
    checkpoints: Vec<CheckpointReport>,
}

/// Two nested cliques of `omega` intervals each, placed strictly outside
/// `[lo, hi]`. The left clique acquires and fully releases before any real
/// interval starts, so running the stack over fillers and real intervals
/// together colors the real ones exactly as a run without fillers would.
/// These boundary cliques give every region a leftmost and rightmost color
/// reservoir to draw on.
fn boundary_cliques(omega: usize, lo: Rat, hi: Rat, taken: &[&str]) -> (Vec<Interval>, Vec<Interval>) {
    let h = Rat::new(1, 2 * omega as i128);
    let fresh_id = |base: String| -> String {
        let mut id = base;
        while taken.contains(&id.as_str()) {
            id.push('\'');
        }
        id
    };
    let mut left = Vec::with_capacity(omega);
    let mut right = Vec::with_capacity(omega);
    for j in 0..omega {
        let off = h * rat_int(j as i128);
        left.push(
            Interval::new(
                lo - rat_int(2) + off,
                lo - rat_int(1) - off,
                true,
                true,
                fresh_id(format!("~left-filler-{}", j + 1)),
            )
            .expect("nested filler intervals are nonempty"),
        );
        right.push(
            Interval::new(
                hi + rat_int(1) + off,
                hi + rat_int(2) - off,
                true,
                true,
                fresh_id(format!("~right-filler-{}", j + 1)),
            )
            .expect("nested filler intervals are nonempty"),
        );
    }
    (left, right)
}

impl<'a> Machine<'a> {
    fn new(first_real: &[Interval], first_real_colors: &[u64], second: &'a [Interval]) -> Self {
        let mut both: Vec<Interval> = first_real.to_vec();
        both.extend(second.iter().cloned());
        let omega = max_clique_size(&both).max(1);

        // Coordinate span of everything real, for filler placement.
        let coords: Vec<Rat> = both.iter().flat_map(|iv| [iv.lo, iv.hi]).collect();
        let lo = coords.iter().copied().min().unwrap_or_else(|| rat_int(0));
        let hi = coords.iter().copied().max().unwrap_or_else(|| rat_int(0));
        let taken: Vec<&str> = both.iter().map(|iv| iv.id.as_str()).collect();
        let (left_fill, right_fill) = boundary_cliques(omega, lo, hi, &taken);

        let mut first = left_fill;
        first.extend(first_real.iter().cloned());
        first.extend(right_fill);
        // The stack run over fillers and real intervals together fixes the
        // filler colors; the real intervals must come out unchanged, since
        // their colors were already announced.
        let first_colors = color_first_batch(&first);
        assert_eq!(
            &first_colors[omega..omega + first_real.len()],
            first_real_colors,
            "first batch was not colored by the stack discipline"
        );

        let mut all_coords: Vec<Rat> = first.iter().flat_map(|iv| [iv.lo, iv.hi]).collect();
        all_coords.extend(second.iter().flat_map(|iv| [iv.lo, iv.hi]));
        let u = PositionUniverse::from_coords(all_coords);

        let cliques = maximal_cliques(&first, Some(&u));
        let clique_points: Vec<Position> = cliques.iter().map(|c| c.clique_point).collect();
        let mut all: Vec<Interval> = first.clone();
        all.extend(second.iter().cloned());
        let reps = crate::interval::representative_points(&u, &all, &clique_points);
        let depth = reps
            .iter()
            .map(|&p| second.iter().filter(|iv| u.contains(iv, p)).count())
            .collect();

        let fragments = first
            .iter()
            .enumerate()
            .map(|(i, iv)| Fragment {
                parent: i,
                lo: iv.lo,
                hi: iv.hi,
                lo_closed: iv.lo_closed,
                hi_closed: iv.hi_closed,
                owns_left: true,
                owns_right: true,
                processed: false,
                region: 0,
            })
            .collect();

        // One unbounded region; chains = sweep partition padded to omega.
        let mut chains: Vec<Vec<usize>> = crate::interval::sweep_partition(second);
        assert!(chains.len() <= omega, "sweep partition exceeds the clique number");
        chains.resize(omega, Vec::new());
        let regions = vec![Region { lo: None, hi: None, chains }];

        Machine {
            u,
            first,
            first_colors,
            second,
            omega,
            depth,
            reps,
            cliques,
            active: vec![false; 0],
            fragments,
            regions,
            colors2: vec![None; second.len()],
            round: 0,
            checkpoints: Vec::new(),
        }
    }

    fn fail(&self, problem: impl Into<String>) -> TwoBatchesError {
        TwoBatchesError { problem: problem.into(), checkpoints: self.checkpoints.clone() }
    }

    fn position_in_region(&self, r: &Region, p: Position) -> bool {
        r.lo.map_or(true, |b| b <= p) && r.hi.map_or(true, |b| p <= b)
    }

    /// Does the second-batch interval `j` reach into region `ri`?
    fn interval_meets_region(&self, j: usize, ri: usize) -> bool {
        let r = &self.regions[ri];
        let iv = &self.second[j];
        let right_of_lo = match r.lo {
            None => true,
            // Not entirely left of the boundary probe.
            Some(b) => {
                let x = self.u.probe(b);
                !(iv.hi < *x || (iv.hi == *x && !iv.hi_closed))
            }
        };
        let left_of_hi = match r.hi {
            None => true,
            Some(b) => {
                let x = self.u.probe(b);
                !(iv.lo > *x || (iv.lo == *x && !iv.lo_closed))
            }
        };
        right_of_lo && left_of_hi
    }

    /// Event points owned by a fragment, as (coordinate, kind, parent id).
    fn owned_events(&self, f: &Fragment) -> Vec<(Rat, EventKind, String)> {
        let parent = &self.first[f.parent];
        let mut ev = Vec::new();
        if f.owns_left {
            let kind = if parent.lo_closed { EventKind::ClosedLeft } else { EventKind::OpenLeft };
            ev.push((parent.lo, kind, parent.id.clone()));
        }
        if f.owns_right {
            let kind = if parent.hi_closed { EventKind::ClosedRight } else { EventKind::OpenRight };
            ev.push((parent.hi, kind, parent.id.clone()));
        }
        ev
    }

    /// Split the region strictly containing `q` into two, projecting each
    /// chain onto both sides and cutting every fragment that contains `q`.
    /// An uncolored second-batch interval straddling the cut means the
    /// coverage bookkeeping is broken upstream.
    fn split_region_at(&mut self, q: Position) -> Result<(), TwoBatchesError> {
        let x = *self.u.probe(q);
        let ri = self
            .regions
            .iter()
            .position(|r| {
                r.lo.map_or(true, |b| b < q) && r.hi.map_or(true, |b| q < b)
            })
            .ok_or_else(|| self.fail("new active clique point is already a region boundary"))?;
        let old = self.regions.remove(ri);
        let mut left_chains = Vec::with_capacity(old.chains.len());
        let mut right_chains = Vec::with_capacity(old.chains.len());
        for chain in old.chains {
            let mut l = Vec::new();
            let mut r = Vec::new();
            for j in chain {
                let iv = &self.second[j];
                let goes_left = iv.hi < x || iv.hi == x;
                let goes_right = iv.lo > x || iv.lo == x;
                match (goes_left, goes_right) {
                    (true, _) => l.push(j),
                    (false, true) => r.push(j),
                    (false, false) => {
                        return Err(self.fail(format!(
                            "uncolored second-batch interval {:?} straddles an active clique point",
                            iv.id
                        )))
                    }
                }
            }
            left_chains.push(l);
            right_chains.push(r);
        }
        self.regions.insert(
            ri,
            Region { lo: old.lo, hi: Some(q), chains: left_chains },
        );
        self.regions.insert(
            ri + 1,
            Region { lo: Some(q), hi: old.hi, chains: right_chains },
        );

        let mut next = Vec::with_capacity(self.fragments.len() + 4);
        for mut f in self.fragments.drain(..) {
            if f.region > ri {
                f.region += 1;
                next.push(f);
                continue;
            }
            if f.region < ri {
                next.push(f);
                continue;
            }
            let stays_left = f.hi < x || (f.hi == x && !f.hi_closed);
            let stays_right = f.lo > x || (f.lo == x && !f.lo_closed);
            if stays_left {
                next.push(f);
            } else if stays_right {
                f.region = ri + 1;
                next.push(f);
            } else {
                next.push(Fragment {
                    parent: f.parent,
                    lo: f.lo,
                    hi: x,
                    lo_closed: f.lo_closed,
                    hi_closed: true,
                    owns_left: f.owns_left,
                    owns_right: false,
                    processed: f.processed,
                    region: ri,
                });
                next.push(Fragment {
                    parent: f.parent,
                    lo: x,
                    hi: f.hi,
                    lo_closed: true,
                    hi_closed: f.hi_closed,
                    owns_left: false,
                    owns_right: f.owns_right,
                    processed: f.processed,
                    region: ri + 1,
                });
            }
        }
        self.fragments = next;
        Ok(())
    }

    /// Number of colored second-batch intervals containing the probe of `p`,
    /// plus those in the given extra chains of region `ri`.
    fn cover_count(&self, p: Position, ri: usize, extra: &[usize]) -> usize {
        let x = self.u.probe(p);
        let mut n = 0;
        for (j, c) in self.colors2.iter().enumerate() {
            if c.is_some() && self.second[j].contains_point(x) {
                n += 1;
            }
        }
        for &ci in extra {
            for &j in &self.regions[ri].chains[ci] {
                if self.second[j].contains_point(x) {
                    n += 1;
                }
            }
        }
        n
    }

    fn required(&self, rep_idx: usize) -> usize {
        self.depth[rep_idx].min(self.round)
    }

    /// Representative points of region `ri`, as indices into `reps`.
    fn region_rep_indices(&self, ri: usize) -> Vec<usize> {
        (0..self.reps.len())
            .filter(|&k| self.position_in_region(&self.regions[ri], self.reps[k]))
            .collect()
    }

    fn chain_contains(&self, ri: usize, ci: usize, p: Position) -> bool {
        let x = self.u.probe(p);
        self.regions[ri].chains[ci].iter().any(|&j| self.second[j].contains_point(x))
    }

    fn chain_is_proper(&self, chain: &[usize]) -> bool {
        for (a, &ja) in chain.iter().enumerate() {
            for &jb in &chain[a + 1..] {
                if self.second[ja].overlaps(&self.second[jb]) {
                    return false;
                }
            }
        }
        true
    }

    /// Pick two chains jointly covering every representative point of the
    /// region, rearranging the region's chains by tail exchanges when needed.
    fn create_chains(&mut self, ri: usize) -> Result<(usize, usize), TwoBatchesError> {
        // Lowest-indexed chain holding the leftmost left endpoint.
        let leftmost = self.regions[ri]
            .chains
            .iter()
            .flatten()
            .copied()
            .min_by(|&a, &b| {
                let ka = (self.second[a].lo, !self.second[a].lo_closed, &self.second[a].id);
                let kb = (self.second[b].lo, !self.second[b].lo_closed, &self.second[b].id);
                ka.cmp(&kb)
            })
            .expect("region has a nonempty chain");
        let c1 = self.regions[ri]
            .chains
            .iter()
            .position(|ch| ch.contains(&leftmost))
            .unwrap();
        let mut c2 = match (0..self.regions[ri].chains.len()).find(|&ci| ci != c1) {
            Some(ci) => ci,
            None => {
                // Malformed state (a lone chain); keep going on a fresh one
                // and let the round checkpoint flag the count mismatch.
                self.regions[ri].chains.push(Vec::new());
                self.regions[ri].chains.len() - 1
            }
        };

        let pr = self.region_rep_indices(ri);
        let budget = 8 * (pr.len() + self.second.len() + 2);
        for _ in 0..budget {
            let uncovered = pr.iter().copied().find(|&k| {
                self.cover_count(self.reps[k], ri, &[c1, c2]) < self.required(k)
            });
            let pk = match uncovered {
                None => return Ok((c1, c2)),
                Some(k) => k,
            };
            let p = self.reps[pk];
            let c3 = (0..self.regions[ri].chains.len())
                .filter(|&ci| ci != c1 && ci != c2)
                .find(|&ci| self.chain_contains(ri, ci, p));
            let c3 = match c3 {
                Some(ci) => ci,
                None => {
                    return Err(self.fail(format!(
                        "uncovered point at probe {} has no available chain",
                        self.u.probe(p)
                    )))
                }
            };
            // Points left of p must lie in Chain3 or in both picked chains;
            // otherwise exchange tails at the rightmost offender.
            let offender = pr
                .iter()
                .copied()
                .take_while(|&k| self.reps[k] < p)
                .filter(|&k| {
                    let q = self.reps[k];
                    !(self.chain_contains(ri, c3, q)
                        || (self.chain_contains(ri, c1, q) && self.chain_contains(ri, c2, q)))
                })
                .last();
            match offender {
                None => c2 = c3,
                Some(qk) => {
                    let q = self.reps[qk];
                    let partner = if !self.chain_contains(ri, c2, q) {
                        c2
                    } else if !self.chain_contains(ri, c1, q) {
                        c1
                    } else {
                        unreachable!("offending point lies outside one of the picked chains")
                    };
                    let x = *self.u.probe(q);
                    let starts_right = |iv: &Interval| iv.lo > x || (iv.lo == x && !iv.lo_closed);
                    let chains = &mut self.regions[ri].chains;
                    let tail_p: Vec<usize> =
                        chains[partner].iter().copied().filter(|&j| starts_right(&self.second[j])).collect();
                    let tail_3: Vec<usize> =
                        chains[c3].iter().copied().filter(|&j| starts_right(&self.second[j])).collect();
                    chains[partner].retain(|j| !tail_p.contains(j));
                    chains[c3].retain(|j| !tail_3.contains(j));
                    chains[partner].extend(tail_3);
                    chains[c3].extend(tail_p);
                    if !self.chain_is_proper(&self.regions[ri].chains[partner])
                        || !self.chain_is_proper(&self.regions[ri].chains[c3])
                    {
                        return Err(self.fail(format!(
                            "tail exchange at probe {x} produced an overlapping chain"
                        )));
                    }
                }
            }
        }
        Err(self.fail("chain construction did not converge"))
    }

    /// Earliest- and latest-event unprocessed fragments in region `ri`.
    fn pick_extremes(&self, ri: usize) -> Option<(usize, usize)> {
        let mut earliest: Option<((Rat, EventKind, String), usize)> = None;
        let mut latest: Option<((Rat, EventKind, String), usize)> = None;
        for (fi, f) in self.fragments.iter().enumerate() {
            if f.processed || f.region != ri {
                continue;
            }
            for key in self.owned_events(f) {
                if earliest.as_ref().map_or(true, |(k, _)| key < *k) {
                    earliest = Some((key.clone(), fi));
                }
                if latest.as_ref().map_or(true, |(k, _)| key > *k) {
                    latest = Some((key, fi));
                }
            }
        }
        Some((earliest?.1, latest?.1))
    }

    fn color_chain(&mut self, ri: usize, ci: usize, color: u64) -> Result<(), TwoBatchesError> {
        let members = self.regions[ri].chains[ci].clone();
        for j in members {
            if self.colors2[j].is_some() {
                return Err(self.fail(format!(
                    "second-batch interval {:?} colored twice",
                    self.second[j].id
                )));
            }
            self.colors2[j] = Some(color);
        }
        Ok(())
    }

    fn checkpoint(&mut self) {
        let i = self.round;
        let mut clauses = Vec::new();

        // Every representative point is covered by colored intervals up to
        // min(depth, completed rounds).
        let mut i1 = ClauseReport { clause: "coverage".into(), pass: true, detail: String::new() };
        for k in 0..self.reps.len() {
            let have = self.cover_count(self.reps[k], 0, &[]);
            let need = self.required(k);
            if have < need {
                i1.pass = false;
                i1.detail = format!(
                    "point at probe {} has {}/{} colored intervals",
                    self.u.probe(self.reps[k]),
                    have,
                    need
                );
                break;
            }
        }
        clauses.push(i1);

        // No unprocessed fragment color inside a region recurs on a colored
        // second-batch interval meeting that region.
        let mut i2 = ClauseReport { clause: "color-reserve".into(), pass: true, detail: String::new() };
        'i2: for ri in 0..self.regions.len() {
            let reserved: Vec<u64> = self
                .fragments
                .iter()
                .filter(|f| !f.processed && f.region == ri)
                .map(|f| self.first_colors[f.parent])
                .collect();
            for (j, c) in self.colors2.iter().enumerate() {
                if let Some(c) = c {
                    if reserved.contains(c) && self.interval_meets_region(j, ri) {
                        i2.pass = false;
                        i2.detail = format!(
                            "color {} is reserved in region {} but sits on {:?}",
                            c, ri, self.second[j].id
                        );
                        break 'i2;
                    }
                }
            }
        }
        clauses.push(i2);

        // Active cliques flanking a working region hold exactly omega - i
        // unprocessed fragments on that side. Regions whose chains are all
        // empty never process fragments, so the count is pinned only where
        // work happens.
        let mut i3 = ClauseReport { clause: "budget".into(), pass: true, detail: String::new() };
        'i3: for ri in 0..self.regions.len() {
            if self.regions[ri].chains.iter().all(|c| c.is_empty()) {
                continue;
            }
            for b in [self.regions[ri].lo, self.regions[ri].hi].into_iter().flatten() {
                let x = *self.u.probe(b);
                let count = self
                    .fragments
                    .iter()
                    .filter(|f| {
                        !f.processed && f.region == ri && f.contains(&x)
                    })
                    .count();
                if count != self.omega - i {
                    i3.pass = false;
                    i3.detail = format!(
                        "boundary at probe {x} of region {ri} has {count} unprocessed fragments, expected {}",
                        self.omega - i
                    );
                    break 'i3;
                }
            }
        }
        clauses.push(i3);

        // Chain budget: a working region holds exactly omega - 2i chains; no
        // region holds more nonempty ones than that.
        let mut i4 = ClauseReport { clause: "chain-count".into(), pass: true, detail: String::new() };
        for (ri, r) in self.regions.iter().enumerate() {
            let nonempty = r.chains.iter().filter(|c| !c.is_empty()).count();
            let expected = self.omega as i64 - 2 * i as i64;
            if nonempty as i64 > expected.max(0) {
                i4.pass = false;
                i4.detail =
                    format!("region {ri} has {nonempty} nonempty chains, allowed {}", expected.max(0));
                break;
            }
            if nonempty > 0 && r.chains.len() as i64 != expected {
                i4.pass = false;
                i4.detail = format!(
                    "working region {ri} has {} chains, expected {expected}",
                    r.chains.len()
                );
                break;
            }
        }
        clauses.push(i4);

        self.checkpoints.push(CheckpointReport { round: i, clauses });
    }

    fn run(&mut self) -> Result<(), TwoBatchesError> {
        self.active = vec![false; self.cliques.len()];
        self.checkpoint();
        if !self.checkpoints.last().unwrap().passed() {
            return Err(self.fail("invariant violated before the first round"));
        }

        while self.round < self.omega / 2 {
            self.round += 1;

            // Activate cliques big enough for this round and split there.
            let threshold = self.omega - self.round + 1;
            let newly: Vec<usize> = (0..self.cliques.len())
                .filter(|&ci| !self.active[ci] && self.cliques[ci].size() >= threshold)
                .collect();
            for ci in newly {
                self.active[ci] = true;
                let q = self.cliques[ci].clique_point;
                self.split_region_at(q)?;
            }

            for ri in 0..self.regions.len() {
                if self.regions[ri].chains.iter().all(|c| c.is_empty()) {
                    continue;
                }
                let (c1, c2) = self.create_chains(ri)?;
                let (il, ir) = self
                    .pick_extremes(ri)
                    .ok_or_else(|| self.fail(format!("region {ri} has no unprocessed fragment")))?;
                if il == ir {
                    return Err(self.fail(format!(
                        "region {ri}: a single fragment owns both extreme events"
                    )));
                }
                let (cl, cr) = (self.first_colors[self.fragments[il].parent],
                                self.first_colors[self.fragments[ir].parent]);
                if cl != cr {
                    return Err(self.fail(format!(
                        "region {ri}: extreme fragments carry colors {cl} and {cr}, expected equal"
                    )));
                }
                self.fragments[il].processed = true;
                self.fragments[ir].processed = true;
                self.color_chain(ri, c1, cl)?;
                self.color_chain(ri, c2, self.omega as u64 + self.round as u64)?;
                let mut drop = [c1, c2];
                drop.sort_unstable();
                self.regions[ri].chains.remove(drop[1]);
                self.regions[ri].chains.remove(drop[0]);
            }

            self.checkpoint();
            if !self.checkpoints.last().unwrap().passed() {
                return Err(self.fail(format!("invariant violated after round {}", self.round)));
            }
        }

        // Odd clique number: one chain per region may remain. Its color is
        // borrowed from a first-batch interval whose reuse inside the region
        // is only blocked if every clique deep enough to re-release that
        // color has become a region boundary, so run one more split pass at
        // the next-lower activation threshold before coloring.
        if self.omega % 2 == 1 {
            let threshold = self.omega - self.omega / 2;
            let newly: Vec<usize> = (0..self.cliques.len())
                .filter(|&ci| !self.active[ci] && self.cliques[ci].size() >= threshold)
                .collect();
            for ci in newly {
                self.active[ci] = true;
                let q = self.cliques[ci].clique_point;
                self.split_region_at(q)?;
            }
        }

        for ri in 0..self.regions.len() {
            let leftovers: Vec<usize> = (0..self.regions[ri].chains.len())
                .filter(|&ci| !self.regions[ri].chains[ci].is_empty())
                .collect();
            if leftovers.is_empty() {
                continue;
            }
            if leftovers.len() > 1 || self.omega % 2 == 0 {
                return Err(self.fail(format!(
                    "region {ri} still holds {} nonempty chains after the main rounds",
                    leftovers.len()
                )));
            }
            let (il, _) = self
                .pick_extremes(ri)
                .ok_or_else(|| self.fail(format!("region {ri} has no unprocessed fragment left")))?;
            let c = self.first_colors[self.fragments[il].parent];
            self.color_chain(ri, leftovers[0], c)?;
        }

        if let Some(j) = self.colors2.iter().position(|c| c.is_none()) {
            return Err(self.fail(format!(
                "second-batch interval {:?} was never colored",
                self.second[j].id
            )));
        }
        Ok(())
    }
}

/// Color the second batch given the first batch and its stack coloring.
/// Returns per-interval colors (aligned with `second`) plus the invariant
/// checkpoint reports.
pub fn color_second_batch(
    first: &[Interval],
    first_colors: &[u64],
    second: &[Interval],
) -> Result<(Vec<u64>, SecondBatchReport), TwoBatchesError> {
    assert_eq!(first.len(), first_colors.len());
    let mut m = Machine::new(first, first_colors, second);
    m.run()?;
    let colors = m.colors2.iter().map(|c| c.unwrap()).collect();
    Ok((colors, SecondBatchReport { omega: m.omega, checkpoints: m.checkpoints }))
}

/// The two-batch interval colorer: stack coloring for batch one, the
/// region/chain rounds for batch two. Uses at most `floor(3*omega/2)` colors,
/// where `omega` is the clique number over both batches.
#[derive(Default)]
pub struct TwoBatches {
    /// Diagnostics of the most recent second-batch run.
    pub last_report: Option<SecondBatchReport>,
}

impl TwoBatches {
    pub fn new() -> Self {
        TwoBatches { last_report: None }
    }
}

impl OnlineColorer for TwoBatches {
    fn name(&self) -> &'static str {
        "two-batches"
    }

    fn color_batch(&mut self, ctx: &BatchContext) -> Result<BTreeMap<String, u64>, EngineError> {
        let ivs = ctx.batch.intervals.as_ref().ok_or_else(|| EngineError::UnsupportedInstance {
            algorithm: "two-batches".into(),
            needs: "an interval representation for every batch".into(),
        })?;
        match ctx.batch_index {
            1 => {
                let colors = color_first_batch(ivs);
                Ok(ivs.iter().map(|iv| iv.id.clone()).zip(colors).collect())
            }
            2 => {
                let first = ctx.prior_intervals.expect("batch 1 carried intervals");
                let first_colors: Vec<u64> =
                    first.iter().map(|iv| ctx.colors[&iv.id]).collect();
                let (colors, report) =
                    color_second_batch(first, &first_colors, ivs).map_err(|e| {
                        EngineError::AlgorithmFailure {
                            algorithm: "two-batches".into(),
                            problem: format!(
                                "{} (checkpoints: {})",
                                e.problem,
                                serde_json::to_string(&e.checkpoints).unwrap_or_default()
                            ),
                        }
                    })?;
                self.last_report = Some(report);
                Ok(ivs.iter().map(|iv| iv.id.clone()).zip(colors).collect())
            }
            _ => Err(EngineError::UnsupportedInstance {
                algorithm: "two-batches".into(),
                needs: "at most two batches".into(),
            }),
        }
    }
}
