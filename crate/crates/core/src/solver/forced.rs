use std::collections::BTreeSet;

use super::{requirements, solve_requirements, Assumption, ColorSpec, Requirement, SolveError, SolveOptions, Verdict};
use crate::graph::{Graph, Vertex};

/// `(color, number of same-colored neighbors)` of one vertex.
pub type State = (usize, u32);

/// Every state `query` takes over all colorings extending `assumptions`.
pub fn forced_states(
    g: &Graph,
    spec: &ColorSpec,
    assumptions: &[Assumption],
    query: Vertex,
    opts: &SolveOptions,
) -> Result<BTreeSet<State>, SolveError> {
    if !g.contains(query) {
        return Err(SolveError::InvalidAssumption(format!("unknown query vertex {query}")));
    }
    let base = requirements(g, spec, assumptions)?;
    let own = base.iter().find(|r| r.vertex == query).copied();
    let others: Vec<Requirement> = base.into_iter().filter(|r| r.vertex != query).collect();
    let degree = g.degree(query) as u32;
    let mut states = BTreeSet::new();
    for color in 0..spec.classes() {
        let mut cap = spec.defect(color).min(degree);
        if let Some(r) = own {
            if r.color != color {
                continue;
            }
            cap = cap.min(r.max_same);
        }
        let probe = |lo: u32, hi: u32| {
            let mut reqs = others.clone();
            reqs.push(Requirement {
                vertex: query,
                color,
                max_same: hi,
                min_same: lo,
            });
            solve_requirements(g, spec, &reqs, opts).map(|(v, _)| v)
        };
        // one unconstrained probe first; its certificate settles one defect
        let Verdict::Sat(c) = probe(0, cap)? else { continue };
        let seen = c.defect(g, query);
        states.insert((color, seen));
        for d in (0..=cap).filter(|&d| d != seen) {
            if let Verdict::Sat(c) = probe(d, d)? {
                debug_assert_eq!(c.defect(g, query), d);
                states.insert((color, d));
            }
        }
    }
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn spec(s: &str) -> ColorSpec {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let opts = SolveOptions::default();
        let k2 = path(2);
        let a = [Assumption {
            vertex: 0,
            color: 0,
            budget: None,
        }];
        assert_eq!(
            forced_states(&k2, &spec("0,0"), &a, 1, &opts).unwrap(),
            BTreeSet::from([(1, 0)])
        );

        let iso = empty(1);
        assert_eq!(
            forced_states(&iso, &spec("1,0"), &[], 0, &opts).unwrap(),
            BTreeSet::from([(0, 0), (1, 0)])
        );

        assert!(forced_states(&cycle(5), &spec("0,0"), &[], 0, &opts)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn star_center() {
        let g = star(3);
        let s = forced_states(&g, &spec("2,0"), &[], 0, &SolveOptions::default()).unwrap();
        assert_eq!(s, BTreeSet::from([(0, 0), (0, 1), (0, 2), (1, 0)]));
    }
}
