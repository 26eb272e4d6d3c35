//! Finite simple undirected graphs with stable vertex ids and named terminals.

mod io;

pub use io::{parse_graph, serialize_graph, ParseError};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

/// Vertex identifier. Ids are stable across edits and need not be contiguous.
pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("unknown terminal `{0}`")]
    UnknownTerminal(String),
    #[error("duplicate terminal `{0}`")]
    DuplicateTerminal(String),
    #[error("invalid terminal name `{0}`")]
    InvalidTerminalName(String),
    #[error("identifying {0} with {1} would create a self-loop")]
    LoopingQuotient(Vertex, Vertex),
}

/// A simple graph. Adjacency is kept in ordered sets so every traversal is
/// deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    name: String,
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
    terminals: BTreeMap<String, Vertex>,
}

pub(crate) fn valid_terminal_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || "_'/.:-".contains(c))
}

impl Graph {
    pub fn new(name: impl Into<String>) -> Self {
        Graph {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Builds a graph from an edge list; endpoints are added as vertices.
    pub fn from_edges(name: impl Into<String>, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(name);
        for &(u, v) in edges {
            g.ensure_vertex(u);
            g.ensure_vertex(v);
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|ns| ns.contains(&v))
    }

    /// Neighbors of `v` in increasing order. Empty for unknown vertices.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flat_map(|ns| ns.iter().copied())
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.values().map(BTreeSet::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adj.values().map(BTreeSet::len).max()
    }

    /// Smallest id strictly greater than every vertex id.
    pub fn next_id(&self) -> Vertex {
        self.adj.keys().next_back().map_or(0, |&v| v + 1)
    }

    pub fn add_vertex(&mut self, v: Vertex) -> Result<(), GraphError> {
        if self.adj.contains_key(&v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.adj.insert(v, BTreeSet::new());
        Ok(())
    }

    /// Adds `v` if missing; returns whether it was added.
    pub fn ensure_vertex(&mut self, v: Vertex) -> bool {
        match self.adj.entry(v) {
            std::collections::btree_map::Entry::Occupied(_) => false,
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(BTreeSet::new());
                true
            }
        }
    }

    /// Adds a fresh vertex with id `next_id()`.
    pub fn add_fresh_vertex(&mut self) -> Vertex {
        let v = self.next_id();
        self.adj.insert(v, BTreeSet::new());
        v
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for w in [u, v] {
            if !self.adj.contains_key(&w) {
                return Err(GraphError::UnknownVertex(w));
            }
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        let removed = self.adj.get_mut(&u).is_some_and(|ns| ns.remove(&v));
        if removed {
            self.adj.get_mut(&v).unwrap().remove(&u);
        }
        removed
    }

    /// Removes `v`, its edges and any terminal naming it.
    pub fn remove_vertex(&mut self, v: Vertex) -> bool {
        let Some(ns) = self.adj.remove(&v) else {
            return false;
        };
        for u in ns {
            self.adj.get_mut(&u).unwrap().remove(&v);
        }
        self.terminals.retain(|_, t| *t != v);
        true
    }

    pub fn terminals(&self) -> &BTreeMap<String, Vertex> {
        &self.terminals
    }

    pub fn terminal(&self, name: &str) -> Option<Vertex> {
        self.terminals.get(name).copied()
    }

    /// Looks up a terminal name, falling back to a decimal vertex id.
    pub fn resolve(&self, name: &str) -> Result<Vertex, GraphError> {
        if let Some(v) = self.terminal(name) {
            return Ok(v);
        }
        match name.parse::<Vertex>() {
            Ok(v) if self.contains(v) => Ok(v),
            _ => Err(GraphError::UnknownTerminal(name.to_string())),
        }
    }

    pub fn set_terminal(&mut self, name: impl Into<String>, v: Vertex) -> Result<(), GraphError> {
        let name = name.into();
        if !valid_terminal_name(&name) {
            return Err(GraphError::InvalidTerminalName(name));
        }
        if !self.contains(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        if self.terminals.contains_key(&name) {
            return Err(GraphError::DuplicateTerminal(name));
        }
        self.terminals.insert(name, v);
        Ok(())
    }

    pub fn clear_terminals(&mut self) {
        self.terminals.clear();
    }

    /// All names (terminals) attached to `v`.
    pub fn names_of(&self, v: Vertex) -> impl Iterator<Item = &str> + '_ {
        self.terminals
            .iter()
            .filter(move |(_, &t)| t == v)
            .map(|(n, _)| n.as_str())
    }

    /// Subgraph induced by `keep`; terminals pointing outside are dropped.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let mut g = Graph::new(self.name.clone());
        for &v in keep {
            if self.contains(v) {
                g.adj
                    .insert(v, self.adj[&v].iter().copied().filter(|u| keep.contains(u)).collect());
            }
        }
        g.terminals = self
            .terminals
            .iter()
            .filter(|(_, v)| keep.contains(v))
            .map(|(n, &v)| (n.clone(), v))
            .collect();
        g
    }

    /// Adds a copy of `other` with vertex ids shifted past this graph and
    /// terminal names prefixed with `prefix/`. Returns the id map.
    pub fn disjoint_union(&mut self, other: &Graph, prefix: &str) -> HashMap<Vertex, Vertex> {
        let base = self.next_id();
        let map: HashMap<Vertex, Vertex> = other
            .vertices()
            .enumerate()
            .map(|(i, v)| (v, base + i as Vertex))
            .collect();
        for v in other.vertices() {
            self.adj.insert(map[&v], BTreeSet::new());
        }
        for (u, v) in other.edges() {
            let (a, b) = (map[&u], map[&v]);
            self.adj.get_mut(&a).unwrap().insert(b);
            self.adj.get_mut(&b).unwrap().insert(a);
        }
        for (name, v) in &other.terminals {
            let full = if prefix.is_empty() {
                name.clone()
            } else {
                format!("{prefix}/{name}")
            };
            // Prefixed names are unique as long as prefixes are.
            self.terminals.insert(full, map[v]);
        }
        map
    }

    /// Quotient by `merge`: each key vertex is identified with its value.
    /// Parallel edges collapse; terminals follow their vertex.
    pub fn identify(&mut self, merge: &[(Vertex, Vertex)]) -> Result<(), GraphError> {
        // Union-find keyed by vertex; representative is the smallest id of a
        // class so that earlier (host) vertices survive.
        let mut parent: HashMap<Vertex, Vertex> = HashMap::new();
        fn find(parent: &mut HashMap<Vertex, Vertex>, v: Vertex) -> Vertex {
            let p = *parent.get(&v).unwrap_or(&v);
            if p == v {
                return v;
            }
            let r = find(parent, p);
            parent.insert(v, r);
            r
        }
        for &(a, b) in merge {
            for w in [a, b] {
                if !self.contains(w) {
                    return Err(GraphError::UnknownVertex(w));
                }
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent.insert(hi, lo);
            }
        }
        let verts: Vec<Vertex> = self.vertices().collect();
        let rep: HashMap<Vertex, Vertex> = verts.iter().map(|&v| (v, find(&mut parent, v))).collect();
        for (u, v) in self.edges() {
            if rep[&u] == rep[&v] {
                return Err(GraphError::LoopingQuotient(u, v));
            }
        }
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        for &v in &verts {
            adj.entry(rep[&v]).or_default();
        }
        for (u, v) in self.edges() {
            let (a, b) = (rep[&u], rep[&v]);
            adj.get_mut(&a).unwrap().insert(b);
            adj.get_mut(&b).unwrap().insert(a);
        }
        self.adj = adj;
        for v in self.terminals.values_mut() {
            *v = rep[v];
        }
        Ok(())
    }

    /// Disjoint union with `other` followed by identification of
    /// `other`-vertices with host vertices. Returns where each `other`
    /// vertex ended up.
    pub fn glue(
        &mut self,
        other: &Graph,
        prefix: &str,
        identify: &[(Vertex, Vertex)],
    ) -> Result<HashMap<Vertex, Vertex>, GraphError> {
        let mut map = self.disjoint_union(other, prefix);
        let merge: Vec<(Vertex, Vertex)> = identify
            .iter()
            .map(|&(theirs, ours)| {
                map.get(&theirs)
                    .map(|&m| (m, ours))
                    .ok_or(GraphError::UnknownVertex(theirs))
            })
            .collect::<Result<_, _>>()?;
        self.identify(&merge)?;
        for &(theirs, ours) in identify {
            map.insert(theirs, ours);
        }
        Ok(map)
    }

    /// Relabels vertices to `0..n` in increasing id order.
    pub fn compacted(&self) -> Graph {
        let map: HashMap<Vertex, Vertex> = self.vertices().enumerate().map(|(i, v)| (v, i as Vertex)).collect();
        let mut g = Graph::new(self.name.clone());
        for v in self.vertices() {
            g.adj.insert(map[&v], self.adj[&v].iter().map(|u| map[u]).collect());
        }
        g.terminals = self.terminals.iter().map(|(n, v)| (n.clone(), map[v])).collect();
        g
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if !seen.insert(v) {
                continue;
            }
            let mut comp = vec![v];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for y in self.neighbors(x) {
                    if seen.insert(y) {
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Dense adjacency view for the algorithms.
    pub fn indexed(&self) -> Indexed {
        let ids: Vec<Vertex> = self.vertices().collect();
        let index: HashMap<Vertex, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|v| self.adj[v].iter().map(|u| index[u]).collect())
            .collect();
        Indexed { ids, index, adj }
    }
}

/// Graph relabelled to `0..n` with plain adjacency lists.
#[derive(Debug, Clone)]
pub struct Indexed {
    pub ids: Vec<Vertex>,
    pub index: HashMap<Vertex, usize>,
    pub adj: Vec<Vec<usize>>,
}

impl Indexed {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Small named graph families used throughout tests and replay scripts.
pub mod families {
    use super::{Graph, Vertex};

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n as Vertex).map(|i| (i - 1, i)).collect();
        let mut g = Graph::from_edges(format!("P{n}"), &edges).unwrap();
        for v in 0..n as Vertex {
            g.ensure_vertex(v);
            g.set_terminal(format!("v{v}"), v).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex)).collect();
        let mut g = Graph::from_edges(format!("C{n}"), &edges).unwrap();
        for v in 0..n as Vertex {
            g.set_terminal(format!("v{v}"), v).unwrap();
        }
        g
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n as Vertex {
            for j in i + 1..n as Vertex {
                edges.push((i, j));
            }
        }
        let mut g = Graph::from_edges(format!("K{n}"), &edges).unwrap();
        for v in 0..n as Vertex {
            g.ensure_vertex(v);
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..a as Vertex {
            for j in 0..b as Vertex {
                edges.push((i, a as Vertex + j));
            }
        }
        let mut g = Graph::from_edges(format!("K{a},{b}"), &edges).unwrap();
        for v in 0..(a + b) as Vertex {
            g.ensure_vertex(v);
        }
        g
    }

    pub fn star(leaves: usize) -> Graph {
        complete_bipartite(1, leaves)
    }

    pub fn empty(n: usize) -> Graph {
        let mut g = Graph::new(format!("E{n}"));
        for v in 0..n as Vertex {
            g.ensure_vertex(v);
        }
        g
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges("petersen", &edges).unwrap()
    }

    pub fn icosahedron() -> Graph {
        // Two poles (0, 11), an upper pentagon 1..=5 and a lower one 6..=10.
        let mut edges = Vec::new();
        for i in 0..5 {
            let up = 1 + i;
            let up_next = 1 + (i + 1) % 5;
            let lo = 6 + i;
            let lo_next = 6 + (i + 1) % 5;
            edges.push((0, up));
            edges.push((up, up_next));
            edges.push((up, lo));
            edges.push((up, lo_next));
            edges.push((lo, lo_next));
            edges.push((lo, 11));
        }
        Graph::from_edges("icosahedron", &edges).unwrap()
    }

    pub fn wheel(rim: usize) -> Graph {
        let mut g = cycle(rim);
        let hub = g.add_fresh_vertex();
        for v in 0..rim as Vertex {
            g.add_edge(hub, v).unwrap();
        }
        g.set_terminal("hub", hub).unwrap();
        g.set_name(format!("W{rim}"));
        g
    }

    /// Resolves a builtin family name such as `path:3`, `cycle:7`,
    /// `complete:4`, `kbip:2,3`, `petersen`.
    pub fn by_name(spec: &str) -> Option<Graph> {
        let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
        let n = || arg.parse::<usize>().ok();
        match kind {
            "path" => n().filter(|&n| n >= 1).map(path),
            "cycle" => n().filter(|&n| n >= 3).map(cycle),
            "complete" => n().filter(|&n| n >= 1).map(complete),
            "empty" => n().map(empty),
            "star" => n().map(star),
            "wheel" => n().filter(|&n| n >= 3).map(wheel),
            "kbip" => {
                let (a, b) = arg.split_once(',')?;
                Some(complete_bipartite(a.parse().ok()?, b.parse().ok()?))
            }
            "petersen" => Some(petersen()),
            "icosahedron" => Some(icosahedron()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn counts_of_families() {
        assert_eq!(petersen().edge_count(), 15);
        assert_eq!(icosahedron().edge_count(), 30);
        assert!(icosahedron().vertices().all(|v| icosahedron().degree(v) == 5));
        assert_eq!(complete_bipartite(2, 3).edge_count(), 6);
        assert_eq!(wheel(5).vertex_count(), 6);
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        let mut g = path(2);
        assert_eq!(g.add_edge(0, 0), Err(GraphError::SelfLoop(0)));
        assert_eq!(g.add_edge(1, 0), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(g.add_edge(0, 9), Err(GraphError::UnknownVertex(9)));
    }

    #[test]
    fn glue_identifies_and_collapses() {
        let mut host = path(2); // 0-1
        let other = path(2);
        let map = host.glue(&other, "c", &[(0, 0), (1, 1)]).unwrap();
        assert_eq!(host.vertex_count(), 2);
        assert_eq!(host.edge_count(), 1);
        assert_eq!(map[&0], 0);
        assert_eq!(host.terminal("c/v1"), Some(1));
    }

    #[test]
    fn identify_rejects_loop() {
        let mut g = path(2);
        assert!(matches!(g.identify(&[(0, 1)]), Err(GraphError::LoopingQuotient(..))));
    }

    #[test]
    fn remove_vertex_drops_terminal() {
        let mut g = path(3);
        g.remove_vertex(1);
        assert_eq!(g.edge_count(), 0);
        assert!(g.terminal("v1").is_none());
    }
}
