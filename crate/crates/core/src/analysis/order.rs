use std::cmp::Ordering;

use crate::graph::Graph;

/// Number of vertices of degree at least 3.
pub fn n3(g: &Graph) -> usize {
    g.vertices().filter(|&v| g.degree(v) >= 3).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderVerdict {
    Precedes,
    Succeeds,
    /// Same vertex count and same `n3` but different graphs.
    Incomparable,
    /// Identical graphs.
    Equal,
}

/// `g1 < g2` iff (`|V1| < |V2|` and `n3(g1) <= n3(g2)`) or `n3(g1) < n3(g2)`.
pub fn compare_order(g1: &Graph, g2: &Graph) -> OrderVerdict {
    let strictly_below = |a: &Graph, b: &Graph| {
        let (na, nb) = (n3(a), n3(b));
        (a.vertex_count() < b.vertex_count() && na <= nb) || na < nb
    };
    if strictly_below(g1, g2) {
        OrderVerdict::Precedes
    } else if strictly_below(g2, g1) {
        OrderVerdict::Succeeds
    } else if g1.vertices().eq(g2.vertices()) && g1.edges().eq(g2.edges()) {
        OrderVerdict::Equal
    } else {
        OrderVerdict::Incomparable
    }
}

impl OrderVerdict {
    pub fn as_ordering(self) -> Option<Ordering> {
        match self {
            OrderVerdict::Precedes => Some(Ordering::Less),
            OrderVerdict::Succeeds => Some(Ordering::Greater),
            OrderVerdict::Equal => Some(Ordering::Equal),
            OrderVerdict::Incomparable => None,
        }
    }
}
