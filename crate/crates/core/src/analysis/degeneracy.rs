use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneracy {
    pub value: usize,
    /// Deletion order: each vertex has at most `value` neighbors among the
    /// vertices after it.
    pub order: Vec<Vertex>,
}

/// Repeatedly deletes a minimum-degree vertex (smallest id on ties).
pub fn degeneracy(g: &Graph) -> Degeneracy {
    let ix = g.indexed();
    let n = ix.len();
    let mut deg: Vec<usize> = ix.adj.iter().map(Vec::len).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); maxd + 1];
    for v in 0..n {
        buckets[deg[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut value = 0;
    let mut lo: usize = 0;
    for _ in 0..n {
        lo = lo.saturating_sub(1);
        while buckets[lo].is_empty() {
            lo += 1;
        }
        let v = buckets[lo].pop_first().unwrap();
        value = value.max(lo);
        removed[v] = true;
        order.push(ix.ids[v]);
        for &u in &ix.adj[v] {
            if !removed[u] {
                buckets[deg[u]].remove(&u);
                deg[u] -= 1;
                buckets[deg[u]].insert(u);
            }
        }
    }
    Degeneracy { value, order }
}

impl Degeneracy {
    /// Replays the deletions and checks the bound at every step.
    pub fn check(&self, g: &Graph) -> bool {
        let mut h = g.clone();
        if self.order.len() != g.vertex_count() {
            return false;
        }
        for &v in &self.order {
            if !h.contains(v) || h.degree(v) > self.value {
                return false;
            }
            h.remove_vertex(v);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn small_cases() {
        assert_eq!(degeneracy(&path(5)).value, 1);
        assert_eq!(degeneracy(&star(6)).value, 1);
        assert_eq!(degeneracy(&complete(4)).value, 3);
        assert_eq!(degeneracy(&cycle(5)).value, 2);
        assert_eq!(degeneracy(&icosahedron()).value, 5);
        assert_eq!(degeneracy(&empty(3)).value, 0);
        for g in [petersen(), icosahedron(), wheel(6)] {
            assert!(degeneracy(&g).check(&g));
        }
    }
}
