//! Exact maximum average degree.
//!
//! The densest subgraph is found by Dinkelbach iteration on the density
//! `|E(H)|/|V(H)|`: for the current candidate `p/q` a max-closure network
//! decides whether some `H` has `q|E(H)| - p|V(H)| > 0`, and if so the
//! witness becomes the next, strictly larger candidate.

use std::collections::BTreeSet;

use super::flow::{FlowNetwork, INF};
use super::Rational;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MadResult {
    /// `max 2|E(H)|/|V(H)|` over nonempty subgraphs.
    pub mad: Rational,
    /// Vertex set of a subgraph attaining it.
    pub witness: Vec<Vertex>,
}

pub fn average_degree(g: &Graph) -> Rational {
    if g.is_empty() {
        return Rational::from_integer(0);
    }
    Rational::new(2 * g.edge_count() as i64, g.vertex_count() as i64)
}

/// # Panics
/// If `g` has no vertices.
pub fn mad(g: &Graph) -> MadResult {
    assert!(!g.is_empty(), "mad of the empty graph is undefined");
    let ix = g.indexed();
    let n = ix.len();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ix.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    let m = edges.len();
    let mut witness: Vec<usize> = (0..n).collect();
    if m == 0 {
        return MadResult {
            mad: Rational::from_integer(0),
            witness: vec![ix.ids[0]],
        };
    }
    let mut density = Rational::new(m as i64, n as i64);
    loop {
        let (p, q) = (*density.numer(), *density.denom());
        // source = 0, sink = 1, edge nodes 2.., vertex nodes 2+m..
        let mut net = FlowNetwork::new(2 + m + n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            net.add_arc(0, 2 + i, q);
            net.add_arc(2 + i, 2 + m + u, INF);
            net.add_arc(2 + i, 2 + m + v, INF);
        }
        for v in 0..n {
            net.add_arc(2 + m + v, 1, p);
        }
        let flow = net.max_flow(0, 1);
        if q * m as i64 - flow <= 0 {
            break;
        }
        let side = net.source_side(0);
        let h: Vec<usize> = (0..n).filter(|&v| side[2 + m + v]).collect();
        let inside: BTreeSet<usize> = h.iter().copied().collect();
        let eh = edges
            .iter()
            .filter(|(u, v)| inside.contains(u) && inside.contains(v))
            .count();
        let next = Rational::new(eh as i64, h.len() as i64);
        assert!(next > density, "densest-subgraph iteration did not improve");
        density = next;
        witness = h;
    }
    MadResult {
        mad: density * 2,
        witness: witness.into_iter().map(|i| ix.ids[i]).collect(),
    }
}

/// Enumerates every nonempty vertex subset (induced subgraphs suffice).
/// Intended as a test oracle for graphs with at most ~20 vertices.
pub fn mad_brute_force(g: &Graph) -> Rational {
    let ix = g.indexed();
    let n = ix.len();
    assert!(n > 0 && n <= 24, "brute-force mad is limited to 1..=24 vertices");
    let masks: Vec<u32> = (0..n)
        .map(|u| ix.adj[u].iter().fold(0u32, |m, &v| m | (1 << v)))
        .collect();
    let mut best = Rational::from_integer(0);
    for set in 1u32..(1u32 << n) {
        let size = set.count_ones() as i64;
        let twice_edges: u32 = (0..n)
            .filter(|&u| set & (1 << u) != 0)
            .map(|u| (masks[u] & set).count_ones())
            .sum();
        let avg = Rational::new(twice_edges as i64, size);
        if avg > best {
            best = avg;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn known_values() {
        assert_eq!(mad(&cycle(7)).mad, r(2, 1));
        assert_eq!(mad(&complete(4)).mad, r(3, 1));
        assert_eq!(mad(&star(4)).mad, r(8, 5));
        assert_eq!(mad(&petersen()).mad, r(3, 1));
        assert_eq!(mad(&empty(3)).mad, r(0, 1));
    }

    #[test]
    fn densest_part_is_found() {
        // K4 with a long pendant path: density of K4 alone wins.
        let mut g = complete(4);
        let mut prev = 0;
        for _ in 0..6 {
            let v = g.add_fresh_vertex();
            g.add_edge(prev, v).unwrap();
            prev = v;
        }
        let res = mad(&g);
        assert_eq!(res.mad, r(3, 1));
        assert_eq!(res.witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn brute_force_agrees_on_petersen() {
        // Oracle: max over all 1023 induced subgraphs of the Petersen graph.
        assert_eq!(mad_brute_force(&petersen()), r(3, 1));
    }
}
