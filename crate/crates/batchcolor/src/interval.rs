//! Intervals with exact rational endpoints, the endpoint event order, and the
//! discrete position universe used for clique and coverage reasoning.
//!
//! A `Position` stands for an equivalence class of real points: either an
//! endpoint coordinate or the open gap between two adjacent coordinates.
//! Every position carries a concrete rational probe point, so containment and
//! side queries reduce to exact rational comparisons.

use crate::graph::Graph;
use crate::rat::{rat_int, Rat, RatPair};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub id: String,
}

impl Interval {
    pub fn new(
        lo: Rat,
        hi: Rat,
        lo_closed: bool,
        hi_closed: bool,
        id: impl Into<String>,
    ) -> Result<Self, String> {
        let id = id.into();
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return Err(format!("interval {id} is empty"));
        }
        Ok(Interval { lo, hi, lo_closed, hi_closed, id })
    }

    /// Closed interval `[lo, hi]` with integer endpoints.
    pub fn closed(lo: i128, hi: i128, id: impl Into<String>) -> Self {
        Interval::new(rat_int(lo), rat_int(hi), true, true, id).unwrap()
    }

    pub fn contains_point(&self, x: &Rat) -> bool {
        let left_ok = *x > self.lo || (*x == self.lo && self.lo_closed);
        let right_ok = *x < self.hi || (*x == self.hi && self.hi_closed);
        left_ok && right_ok
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        // Binding lower bound of the intersection.
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (&self.lo, self.lo_closed),
            Ordering::Less => (&other.lo, other.lo_closed),
            Ordering::Equal => (&self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (&self.hi, self.hi_closed),
            Ordering::Greater => (&other.hi, other.hi_closed),
            Ordering::Equal => (&self.hi, self.hi_closed && other.hi_closed),
        };
        lo < hi || (lo == hi && lo_closed && hi_closed)
    }
}

/// Wire format mirror: endpoints as `[numerator, denominator]` pairs.
#[derive(Serialize, Deserialize)]
struct IntervalWire {
    lo: RatPair,
    hi: RatPair,
    lo_closed: bool,
    hi_closed: bool,
    id: String,
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IntervalWire {
            lo: RatPair(self.lo),
            hi: RatPair(self.hi),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
            id: self.id.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = IntervalWire::deserialize(d)?;
        Interval::new(w.lo.0, w.hi.0, w.lo_closed, w.hi_closed, w.id)
            .map_err(serde::de::Error::custom)
    }
}

/// Endpoint event categories in their order at equal coordinates: an interval
/// ending openly at x releases before anything at x; a closed left endpoint
/// acquires before a closed right endpoint releases (they meet at x); an open
/// left endpoint acquires last (it starts just past x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    OpenRight = 0,
    ClosedLeft = 1,
    ClosedRight = 2,
    OpenLeft = 3,
}

impl EventKind {
    pub fn is_left(self) -> bool {
        matches!(self, EventKind::ClosedLeft | EventKind::OpenLeft)
    }
    pub fn acquires(self) -> bool {
        self.is_left()
    }
}

/// One endpoint occurrence. Events compare by (coordinate, kind, owner id),
/// which realizes the total order on event points; identical endpoints of
/// distinct intervals get distinct consecutive slots via the id tiebreak.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub coord: Rat,
    pub kind: EventKind,
    /// Index of the owning interval in the slice the order was built from.
    pub owner: usize,
    /// Owner id, the tiebreak for identical endpoints.
    pub owner_id: String,
}

impl Event {
    pub fn key(&self) -> (Rat, EventKind, &str) {
        (self.coord, self.kind, &self.owner_id)
    }
}

/// The sorted sequence of all endpoint events of `intervals`.
pub fn build_event_order(intervals: &[Interval]) -> Vec<Event> {
    let mut events = Vec::with_capacity(2 * intervals.len());
    for (i, iv) in intervals.iter().enumerate() {
        events.push(Event {
            coord: iv.lo,
            kind: if iv.lo_closed { EventKind::ClosedLeft } else { EventKind::OpenLeft },
            owner: i,
            owner_id: iv.id.clone(),
        });
        events.push(Event {
            coord: iv.hi,
            kind: if iv.hi_closed { EventKind::ClosedRight } else { EventKind::OpenRight },
            owner: i,
            owner_id: iv.id.clone(),
        });
    }
    events.sort_by(|a, b| a.key().cmp(&b.key()));
    events
}

/// Largest number of pairwise overlapping intervals.
pub fn max_clique_size(intervals: &[Interval]) -> usize {
    let mut depth = 0usize;
    let mut best = 0usize;
    for e in build_event_order(intervals) {
        if e.kind.acquires() {
            depth += 1;
            best = best.max(depth);
        } else {
            depth -= 1;
        }
    }
    best
}

/// Edges a batch of new intervals induces: every overlapping pair among the
/// new intervals plus every overlap between a new and an old interval.
pub fn overlap_edges(new: &[Interval], old: &[Interval]) -> Vec<(String, String)> {
    let mut edges = Vec::new();
    for (i, a) in new.iter().enumerate() {
        for b in new[i + 1..].iter().chain(old) {
            if a.overlaps(b) {
                edges.push((a.id.clone(), b.id.clone()));
            }
        }
    }
    edges
}

/// Intersection graph of the intervals; vertex ids are interval ids.
pub fn interval_graph(intervals: &[Interval]) -> Graph {
    let mut g = Graph::new();
    for iv in intervals {
        g.add_vertex(&iv.id);
    }
    for (i, a) in intervals.iter().enumerate() {
        for b in &intervals[i + 1..] {
            if a.overlaps(b) {
                g.add_edge(&a.id, &b.id).unwrap();
            }
        }
    }
    g
}

/// A slot on the real line: before everything, at a coordinate, in the open
/// gap between adjacent coordinates, or after everything. Ordered left to
/// right; index into `PositionUniverse::probes`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Position(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    LeftOf,
    Inside,
    RightOf,
}

#[derive(Debug, Clone)]
pub struct PositionUniverse {
    coords: Vec<Rat>,
    probes: Vec<Rat>,
}

impl PositionUniverse {
    /// Universe over an explicit coordinate set (sorted and deduplicated).
    pub fn from_coords(mut coords: Vec<Rat>) -> Self {
        coords.sort();
        coords.dedup();
        let mut probes = Vec::with_capacity(2 * coords.len() + 1);
        if coords.is_empty() {
            probes.push(rat_int(0));
        } else {
            probes.push(coords[0] - rat_int(1));
            for i in 0..coords.len() {
                probes.push(coords[i]);
                if i + 1 < coords.len() {
                    probes.push((coords[i] + coords[i + 1]) / rat_int(2));
                }
            }
            probes.push(*coords.last().unwrap() + rat_int(1));
        }
        PositionUniverse { coords, probes }
    }

    pub fn from_intervals(intervals: &[Interval]) -> Self {
        Self::from_coords(intervals.iter().flat_map(|iv| [iv.lo, iv.hi]).collect())
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one probe always exists
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> {
        (0..self.probes.len()).map(Position)
    }

    /// The concrete rational point standing for this position.
    pub fn probe(&self, p: Position) -> &Rat {
        &self.probes[p.0]
    }

    /// True when the position is an endpoint coordinate (not a gap).
    pub fn is_coordinate(&self, p: Position) -> bool {
        !self.coords.is_empty() && p.0 % 2 == 1 && p.0 / 2 < self.coords.len()
    }

    pub fn contains(&self, iv: &Interval, p: Position) -> bool {
        iv.contains_point(self.probe(p))
    }

    pub fn side(&self, p: Position, iv: &Interval) -> Side {
        let x = self.probe(p);
        if iv.contains_point(x) {
            Side::Inside
        } else if *x <= iv.lo {
            Side::LeftOf
        } else {
            Side::RightOf
        }
    }

    /// Leftmost position whose probe the interval contains, if any.
    pub fn leftmost_inside(&self, iv: &Interval) -> Option<Position> {
        self.positions().find(|&p| self.contains(iv, p))
    }
}

/// A maximal set of pairwise-overlapping intervals, with its witnessing point
/// and the two endpoint orderings over its members.
#[derive(Debug, Clone)]
pub struct MaximalClique {
    /// Indices into the interval slice the cliques were computed from.
    pub members: Vec<usize>,
    /// Leftmost position contained in every member.
    pub clique_point: Position,
    /// `lambda_l[j]`: 1-based rank of `members[j]`'s left endpoint in event
    /// order (1 = earliest left endpoint).
    pub lambda_l: Vec<usize>,
    /// `lambda_r[j]`: 1-based rank of `members[j]`'s right endpoint counting
    /// from the latest (1 = last right endpoint in event order).
    pub lambda_r: Vec<usize>,
}

impl MaximalClique {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// The member (as an index into the original slice) with the given
    /// `lambda_r` rank.
    pub fn member_with_lambda_r(&self, rank: usize) -> Option<usize> {
        self.lambda_r.iter().position(|&r| r == rank).map(|j| self.members[j])
    }

    pub fn member_with_lambda_l(&self, rank: usize) -> Option<usize> {
        self.lambda_l.iter().position(|&r| r == rank).map(|j| self.members[j])
    }
}

fn left_event_key(iv: &Interval) -> (Rat, EventKind, &str) {
    let kind = if iv.lo_closed { EventKind::ClosedLeft } else { EventKind::OpenLeft };
    (iv.lo, kind, &iv.id)
}

fn right_event_key(iv: &Interval) -> (Rat, EventKind, &str) {
    let kind = if iv.hi_closed { EventKind::ClosedRight } else { EventKind::OpenRight };
    (iv.hi, kind, &iv.id)
}

/// All maximal cliques in left-to-right order of their clique points.
///
/// The universe must contain every endpoint of `intervals` (pass `None` to
/// build one). Interval-graph maximal cliques are exactly the distinct
/// maximal containment sets over positions.
pub fn maximal_cliques(
    intervals: &[Interval],
    universe: Option<&PositionUniverse>,
) -> Vec<MaximalClique> {
    let owned;
    let u = match universe {
        Some(u) => u,
        None => {
            owned = PositionUniverse::from_intervals(intervals);
            &owned
        }
    };
    // Containment set per position, collapsed into runs.
    let mut sets: Vec<(Position, Vec<usize>)> = Vec::new();
    for p in u.positions() {
        let s: Vec<usize> =
            (0..intervals.len()).filter(|&i| u.contains(&intervals[i], p)).collect();
        if s.is_empty() {
            continue;
        }
        if sets.last().map(|(_, prev)| prev == &s).unwrap_or(false) {
            continue;
        }
        sets.push((p, s));
    }
    // Keep sets not strictly contained in any other collected set.
    let mut cliques = Vec::new();
    'outer: for (i, (p, s)) in sets.iter().enumerate() {
        for (j, (_, t)) in sets.iter().enumerate() {
            if i != j && s.len() < t.len() && s.iter().all(|x| t.contains(x)) {
                continue 'outer;
            }
        }
        if cliques.iter().any(|(_, c): &(Position, Vec<usize>)| c == s) {
            continue;
        }
        cliques.push((*p, s.clone()));
    }

    cliques
        .into_iter()
        .map(|(p, members)| {
            let mut by_left = members.clone();
            by_left.sort_by(|&a, &b| left_event_key(&intervals[a]).cmp(&left_event_key(&intervals[b])));
            let mut by_right = members.clone();
            by_right
                .sort_by(|&a, &b| right_event_key(&intervals[b]).cmp(&right_event_key(&intervals[a])));
            let lambda_l = members
                .iter()
                .map(|m| 1 + by_left.iter().position(|x| x == m).unwrap())
                .collect();
            let lambda_r = members
                .iter()
                .map(|m| 1 + by_right.iter().position(|x| x == m).unwrap())
                .collect();
            MaximalClique { members, clique_point: p, lambda_l, lambda_r }
        })
        .collect()
}

/// One position per equivalence class of points. Two positions are equivalent
/// when they relate identically (left / inside / right) to every interval and
/// sit on the same side of every clique point. The leftmost position of each
/// class is kept, in left-to-right order.
pub fn representative_points(
    u: &PositionUniverse,
    intervals: &[Interval],
    clique_points: &[Position],
) -> Vec<Position> {
    let mut seen: Vec<(Vec<Side>, Vec<Ordering>)> = Vec::new();
    let mut reps = Vec::new();
    for p in u.positions() {
        let sig_sides: Vec<Side> = intervals.iter().map(|iv| u.side(p, iv)).collect();
        let sig_cmp: Vec<Ordering> = clique_points.iter().map(|&q| p.cmp(&q)).collect();
        let sig = (sig_sides, sig_cmp);
        if !seen.contains(&sig) {
            seen.push(sig);
            reps.push(p);
        }
    }
    reps
}

/// Greedy interval partitioning: sweep by left endpoint and put each interval
/// into the lowest-index class whose intervals it does not overlap. Produces
/// exactly `max_clique_size` classes; as a coloring (class index + 1) it is
/// optimal, since interval graphs are perfect.
pub fn sweep_partition(intervals: &[Interval]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by(|&a, &b| left_event_key(&intervals[a]).cmp(&left_event_key(&intervals[b])));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in order {
        let iv = &intervals[i];
        let slot = classes.iter().position(|cls| {
            cls.last().map(|&j| !intervals[j].overlaps(iv)).unwrap_or(true)
        });
        match slot {
            Some(s) => classes[s].push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Optimal coloring of an interval set via `sweep_partition`.
pub fn sweep_coloring(intervals: &[Interval]) -> Vec<u64> {
    let mut colors = vec![0u64; intervals.len()];
    for (ci, class) in sweep_partition(intervals).iter().enumerate() {
        for &i in class {
            colors[i] = ci as u64 + 1;
        }
    }
    colors
}
