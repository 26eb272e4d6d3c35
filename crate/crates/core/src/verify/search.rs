use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::check::{verify_property, VerifyError};
use super::manifest::Property;
use crate::graph::{Graph, Vertex};
use crate::solver::{minimize_noncolorable, ColorSpec, SolveOptions};

/// Largest graphs the search will build.
pub const MAX_SEARCH_VERTICES: usize = 12;

/// Graphs with at most this many vertices are enumerated exhaustively.
const EXHAUSTIVE_UP_TO: usize = 6;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Random graphs tried per order above the exhaustive range.
    pub samples: usize,
    pub seed: u64,
    /// For `noncolorable`, shrink each hit to a minimal subgraph before
    /// handing it to the filter.
    pub minimize: bool,
    pub solve: SolveOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            min_vertices: 1,
            max_vertices: MAX_SEARCH_VERTICES,
            samples: 2000,
            seed: 0x5eed,
            minimize: false,
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("no gadget found within {0} vertices")]
    NotFound(usize),
    #[error("search is limited to {MAX_SEARCH_VERTICES} vertices")]
    TooLarge,
    #[error("spec {given} does not match the property's spec {property}")]
    SpecMismatch { given: String, property: String },
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Smallest-first search for a graph satisfying `p` under `spec`. The
/// property's vertex names become vertices `0, 1, …` in sorted order.
pub fn search_gadget(spec: &ColorSpec, p: &Property, max_vertices: usize) -> Result<Graph, SearchError> {
    if spec != p.spec() {
        return Err(SearchError::SpecMismatch {
            given: spec.to_string(),
            property: p.spec().to_string(),
        });
    }
    let opts = SearchOptions {
        max_vertices,
        ..Default::default()
    };
    search_gadget_with(p, &opts, |_| true)
}

/// As [`search_gadget`], additionally requiring `accept` on the result.
pub fn search_gadget_with(
    p: &Property,
    opts: &SearchOptions,
    accept: impl Fn(&Graph) -> bool,
) -> Result<Graph, SearchError> {
    if opts.max_vertices > MAX_SEARCH_VERTICES {
        return Err(SearchError::TooLarge);
    }
    let names: Vec<String> = p.names().into_iter().map(str::to_string).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let lo = opts.min_vertices.max(names.len()).max(1);
    for n in lo..=opts.max_vertices {
        let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
            .flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v)))
            .collect();
        let try_mask = |mask: u64| -> Result<Option<Graph>, SearchError> {
            let edges: Vec<(Vertex, Vertex)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let mut g = Graph::new("search");
            for v in 0..n as Vertex {
                g.add_vertex(v).unwrap();
            }
            for &(u, v) in &edges {
                g.add_edge(u, v).unwrap();
            }
            // isolated non-terminals only repeat smaller orders
            if (names.len() as Vertex..n as Vertex).any(|v| g.degree(v) == 0) {
                return Ok(None);
            }
            for (i, name) in names.iter().enumerate() {
                g.set_terminal(name.clone(), i as Vertex).unwrap();
            }
            candidate(g, p, opts, &accept)
        };
        if n <= EXHAUSTIVE_UP_TO {
            let mut masks: Vec<u64> = (0..1u64 << pairs.len()).collect();
            masks.sort_by_key(|m| (m.count_ones(), *m));
            for mask in masks {
                if let Some(g) = try_mask(mask)? {
                    return Ok(g);
                }
            }
        } else {
            for _ in 0..opts.samples {
                let density = rng.gen_range(0.2..0.8);
                let mut mask = 0u64;
                for i in 0..pairs.len() {
                    if rng.gen_bool(density) {
                        mask |= 1 << i;
                    }
                }
                if let Some(g) = try_mask(mask)? {
                    return Ok(g);
                }
            }
        }
    }
    Err(SearchError::NotFound(opts.max_vertices))
}

fn candidate(
    g: Graph,
    p: &Property,
    opts: &SearchOptions,
    accept: &impl Fn(&Graph) -> bool,
) -> Result<Option<Graph>, SearchError> {
    if !verify_property(&g, p, &opts.solve)?.is_verified() {
        return Ok(None);
    }
    let g = match p {
        Property::Noncolorable { spec } if opts.minimize => match minimize_noncolorable(&g, spec, &opts.solve) {
            Ok(h) => h.compacted(),
            Err(_) => return Ok(None),
        },
        _ => g,
    };
    if !accept(&g) {
        return Ok(None);
    }
    // self-check before handing out
    assert!(verify_property(&g, p, &opts.solve)?.is_verified());
    Ok(Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::manifest::parse_property;

    #[test]
    fn odd_cycle() {
        let p = parse_property("noncolorable 0,0", 1).unwrap();
        let g = search_gadget(p.spec(), &p, 5).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
    }

    #[test]
    fn same_color_10() {
        let p = parse_property("same-color 1,0 x y", 1).unwrap();
        let g = search_gadget(p.spec(), &p, 5).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 4));
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn spec_mismatch() {
        let p = parse_property("noncolorable 0,0", 1).unwrap();
        assert!(matches!(
            search_gadget(&"1,0".parse().unwrap(), &p, 4),
            Err(SearchError::SpecMismatch { .. })
        ));
        assert_eq!(search_gadget(p.spec(), &p, 13), Err(SearchError::TooLarge));
    }
}
