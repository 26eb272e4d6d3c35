use std::collections::BTreeSet;

use thiserror::Error;

use super::{solve, ColorSpec, SolveError, SolveOptions, Verdict};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinimizeError {
    #[error("graph is {0}-colorable")]
    Colorable(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("minimal graph has a vertex of degree {0}")]
    LowDegree(usize),
}

/// Deletes vertices, then edges, while the graph stays non-colorable, and
/// repeats until nothing more can go. The result is re-checked: every single
/// deletion must make it colorable, and its minimum degree must be at least 2.
pub fn minimize_noncolorable(g: &Graph, spec: &ColorSpec, opts: &SolveOptions) -> Result<Graph, MinimizeError> {
    let colorable = |h: &Graph| solve(h, spec, &[], opts).map(|v| v.is_sat());
    if colorable(g)? {
        return Err(MinimizeError::Colorable(spec.to_string()));
    }
    // one non-colorable component suffices
    let mut h = g.clone();
    for comp in g.components() {
        let sub = g.induced(&comp.iter().copied().collect::<BTreeSet<_>>());
        if !colorable(&sub)? {
            h = sub;
            break;
        }
    }
    loop {
        let mut changed = false;
        for v in h.vertices().collect::<Vec<_>>() {
            let mut t = h.clone();
            t.remove_vertex(v);
            if !colorable(&t)? {
                h = t;
                changed = true;
            }
        }
        for (u, v) in h.edges().collect::<Vec<_>>() {
            let mut t = h.clone();
            t.remove_edge(u, v);
            if !colorable(&t)? {
                h = t;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for v in h.vertices() {
        let mut t = h.clone();
        t.remove_vertex(v);
        assert!(colorable(&t)?, "vertex {v} is removable");
    }
    for (u, v) in h.edges() {
        let mut t = h.clone();
        t.remove_edge(u, v);
        assert!(colorable(&t)?, "edge {u}-{v} is removable");
    }
    if let Some(d) = h.min_degree().filter(|&d| d < 2) {
        return Err(MinimizeError::LowDegree(d));
    }
    debug_assert_eq!(solve(&h, spec, &[], opts).ok(), Some(Verdict::Unsat));
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn spec(s: &str) -> ColorSpec {
        s.parse().unwrap()
    }

    #[test]
    fn c5_plus_k2() {
        let mut g = cycle(5);
        g.disjoint_union(&path(2), "k2");
        let h = minimize_noncolorable(&g, &spec("0,0"), &SolveOptions::default()).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (5, 5));
        assert_eq!(h.min_degree(), Some(2));
    }

    #[test]
    fn c5_with_pendant() {
        let mut g = cycle(5);
        let p = g.add_fresh_vertex();
        g.add_edge(0, p).unwrap();
        let h = minimize_noncolorable(&g, &spec("0,0"), &SolveOptions::default()).unwrap();
        assert_eq!(h.vertices().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn colorable_input_is_rejected() {
        assert!(matches!(
            minimize_noncolorable(&cycle(4), &spec("0,0"), &SolveOptions::default()),
            Err(MinimizeError::Colorable(_))
        ));
    }
}
