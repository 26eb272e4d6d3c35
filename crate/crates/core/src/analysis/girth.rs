use std::collections::VecDeque;

use crate::graph::{Graph, Vertex};

/// Length of a shortest cycle together with one such cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Girth {
    Finite { length: usize, cycle: Vec<Vertex> },
    Infinite,
}

impl Girth {
    pub fn length(&self) -> Option<usize> {
        match self {
            Girth::Finite { length, .. } => Some(*length),
            Girth::Infinite => None,
        }
    }
}

/// BFS from every vertex. The closed walk found at the global minimum is a
/// simple cycle, which is re-checked before returning.
pub fn girth(g: &Graph) -> Girth {
    let ix = g.indexed();
    let n = ix.len();
    let mut best: Option<(usize, usize, usize, usize)> = None; // (len, root, u, w)
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[s] = 0;
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some((len, ..)) = best {
                if 2 * dist[u] + 1 >= len {
                    break;
                }
            }
            for &w in &ix.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|(b, ..)| len < b) {
                        best = Some((len, s, u, w));
                    }
                    if dist[w] <= dist[u] {
                        break 'bfs;
                    }
                }
            }
        }
        if best.is_some_and(|(len, ..)| len == 3) {
            break;
        }
    }
    let Some((len, root, u, w)) = best else {
        return Girth::Infinite;
    };
    // Rebuild the two tree paths from the recorded root.
    dist.iter_mut().for_each(|d| *d = usize::MAX);
    dist[root] = 0;
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in &ix.adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let trace = |mut x: usize| {
        let mut p = vec![x];
        while x != root {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let mut left = trace(u);
    let right = trace(w);
    left.reverse(); // root .. u
    let mut cycle: Vec<usize> = left;
    cycle.extend(right.iter().take(right.len() - 1)); // w .. (child of root)
    let cycle: Vec<Vertex> = cycle.into_iter().map(|i| ix.ids[i]).collect();
    assert!(
        is_simple_cycle(g, &cycle) && cycle.len() == len,
        "girth witness failed re-check"
    );
    Girth::Finite { length: len, cycle }
}

/// Whether consecutive vertices (cyclically) are adjacent and all distinct.
pub fn is_simple_cycle(g: &Graph, cycle: &[Vertex]) -> bool {
    if cycle.len() < 3 {
        return false;
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == cycle.len() && (0..cycle.len()).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % cycle.len()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn small_cases() {
        assert_eq!(girth(&cycle(4)).length(), Some(4));
        assert_eq!(girth(&complete_bipartite(2, 3)).length(), Some(4));
        assert_eq!(girth(&complete(4)).length(), Some(3));
        assert_eq!(girth(&petersen()).length(), Some(5));
        assert_eq!(girth(&path(6)), Girth::Infinite);
        assert_eq!(girth(&star(4)), Girth::Infinite);
        assert_eq!(girth(&empty(0)), Girth::Infinite);
    }

    #[test]
    fn witness_is_a_cycle() {
        for g in [cycle(9), petersen(), icosahedron(), complete_bipartite(3, 3)] {
            let Girth::Finite { length, cycle } = girth(&g) else {
                panic!()
            };
            assert_eq!(cycle.len(), length);
            assert!(is_simple_cycle(&g, &cycle));
        }
    }
}
