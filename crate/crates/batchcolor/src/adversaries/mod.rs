//! Adaptive instance constructors that play against an online colorer.
//!
//! Each adversary watches the colors the algorithm assigns, steers the next
//! batch toward the worst case for that algorithm, and finishes with a
//! [`Certificate`](crate::engine::Certificate): a lower bound on the cost the
//! algorithm was forced to pay, an upper bound on the optimum of the
//! constructed instance (with a witness coloring realizing it), and a reveal
//! of whatever hidden structure drove the construction.
//!
//! All constructions here are deterministic given the algorithm's responses.
//! They trust the engine to enforce properness of the algorithm's colorings,
//! and they treat violations of their own counting invariants as construction
//! bugs: those panic with a message naming the broken invariant rather than
//! limping on with a wrong certificate.

mod interval_kt;
mod interval_norep;
mod sum_known;
mod sum_unknown;
mod tree;

pub use interval_kt::IntervalKtAdversary;
pub use interval_norep::IntervalNorepAdversary;
pub use sum_known::SumKnownAdversary;
pub use sum_unknown::SumUnknownAdversary;
pub use tree::TreeAdversary;

pub(crate) use crate::interval::overlap_edges;

/// Exact binomial coefficient; prefix products stay divisible, so the
/// running division never truncates.
pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    assert!(k <= n, "binomial({n}, {k}) out of range");
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(3, 2), 3);
        assert_eq!(binomial(4, 1), 4);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(8, 2), 28);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(12, 3), 220);
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(6, 4), 15);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }

    #[test]
    fn overlap_edges_cover_new_and_old() {
        use crate::interval::Interval;
        let old = vec![Interval::closed(0, 2, "a")];
        let new = vec![Interval::closed(1, 3, "b"), Interval::closed(5, 6, "c")];
        let edges = overlap_edges(&new, &old);
        assert_eq!(edges, vec![("b".to_string(), "a".to_string())]);
    }
}
