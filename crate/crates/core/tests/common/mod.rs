//! Independent oracles for the integration suites. Nothing here calls the
//! solver, the verifier or the analysis code it is compared against.

#![allow(dead_code)]

use std::collections::BTreeSet;

use defcol::graph::{Graph, Vertex};
use defcol::solver::{Coloring, NamedAssumption};
use defcol::verify::{Atom, Formula, Property};
use num_rational::Ratio;
use rand::Rng;

/// Graph on `0..n` whose edges are the set bits of `mask` over the pairs
/// `(0,1), (0,2), …, (n-2,n-1)`.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::new(format!("n{n}m{mask}"));
    for v in 0..n as Vertex {
        g.add_vertex(v).unwrap();
    }
    let mut bit = 0;
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if bit < 64 && mask >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(move |m| graph_from_mask(n, m))
}

pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let mut g = graph_from_mask(n, 0);
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.gen_bool(density) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g.set_name(format!("random{n}e{}", g.edge_count()));
    g
}

/// Every valid coloring of `g` under `defects`, as color maps indexed like
/// `g.vertices()`.
pub fn colorings(g: &Graph, defects: &[u32]) -> Vec<Vec<usize>> {
    let verts: Vec<Vertex> = g.vertices().collect();
    let pos = |v: Vertex| verts.binary_search(&v).unwrap();
    let adj: Vec<Vec<usize>> = verts.iter().map(|&v| g.neighbors(v).map(pos).collect()).collect();
    let l = defects.len();
    let n = verts.len();
    let mut out = Vec::new();
    let mut c = vec![0usize; n];
    loop {
        let ok = (0..n).all(|i| adj[i].iter().filter(|&&j| c[j] == c[i]).count() as u32 <= defects[c[i]]);
        if ok {
            out.push(c.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            c[i] += 1;
            if c[i] < l {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn is_colorable(g: &Graph, defects: &[u32]) -> bool {
    !colorings(g, defects).is_empty()
}

/// Property evaluation by enumerating every coloring.
pub struct Oracle<'a> {
    g: &'a Graph,
    verts: Vec<Vertex>,
}

impl<'a> Oracle<'a> {
    pub fn new(g: &'a Graph) -> Self {
        Oracle {
            g,
            verts: g.vertices().collect(),
        }
    }

    fn pos(&self, name: &str) -> usize {
        let v = self.g.resolve(name).unwrap();
        self.verts.binary_search(&v).unwrap()
    }

    fn defect(&self, c: &[usize], i: usize) -> u32 {
        let v = self.verts[i];
        self.g
            .neighbors(v)
            .filter(|&u| c[self.verts.binary_search(&u).unwrap()] == c[i])
            .count() as u32
    }

    fn extends(&self, c: &[usize], assume: &[NamedAssumption]) -> bool {
        assume.iter().all(|a| {
            let i = self.pos(&a.vertex);
            c[i] == a.color && a.budget.is_none_or(|b| self.defect(c, i) <= b)
        })
    }

    fn holds(&self, c: &[usize], defects: &[u32], f: &Formula) -> bool {
        f.eval(&mut |a: &Atom| match a {
            Atom::Color(v, k) => c[self.pos(v)] == *k,
            Atom::Same(u, v) => c[self.pos(u)] == c[self.pos(v)],
            Atom::Diff(u, v) => c[self.pos(u)] != c[self.pos(v)],
            Atom::Sat(v) => {
                let i = self.pos(v);
                self.defect(c, i) == defects[c[i]]
            }
            Atom::Unsat(v) => {
                let i = self.pos(v);
                self.defect(c, i) != defects[c[i]]
            }
            Atom::Defect(v, d) => self.defect(c, self.pos(v)) == *d,
        })
    }

    pub fn check(&self, p: &Property) -> bool {
        let defects = p.spec().defects();
        let all = colorings(self.g, defects);
        match p {
            Property::Noncolorable { .. } => all.is_empty(),
            Property::SameColor { u, v, .. } => {
                let (i, j) = (self.pos(u), self.pos(v));
                all.iter().all(|c| c[i] == c[j])
            }
            Property::Forced { assume, at, states, .. } => {
                let i = self.pos(at);
                let seen: BTreeSet<(usize, u32)> = all
                    .iter()
                    .filter(|c| self.extends(c, assume))
                    .map(|c| (c[i], self.defect(c, i)))
                    .collect();
                &seen == states
            }
            Property::Unextendable { assume, .. } => !all.iter().any(|c| self.extends(c, assume)),
            Property::Exists { assume, pattern, .. } => all
                .iter()
                .any(|c| self.extends(c, assume) && self.holds(c, defects, pattern)),
            Property::Forall { assume, cond, then, .. } => all
                .iter()
                .filter(|c| self.extends(c, assume))
                .all(|c| !self.holds(c, defects, cond) || self.holds(c, defects, then)),
        }
    }
}

/// Maximum of `2|E(H)|/|V(H)|` over all induced subgraphs `H`.
pub fn brute_mad(g: &Graph) -> Ratio<i64> {
    let verts: Vec<Vertex> = g.vertices().collect();
    let n = verts.len();
    let mut best = Ratio::from_integer(0);
    for mask in 1u32..1 << n {
        let inside = |v: Vertex| verts.iter().position(|&w| w == v).is_some_and(|i| mask >> i & 1 == 1);
        let m = g.edges().filter(|&(u, v)| inside(u) && inside(v)).count() as i64;
        let r = Ratio::new(2 * m, mask.count_ones() as i64);
        if r > best {
            best = r;
        }
    }
    best
}

/// Shortest cycle through each edge: drop the edge and search for the
/// other endpoint.
pub fn brute_girth(g: &Graph) -> Option<usize> {
    let mut best = None;
    for (u, v) in g.edges() {
        let mut dist = std::collections::BTreeMap::new();
        dist.insert(u, 0usize);
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for y in g.neighbors(x) {
                if (x, y) == (u, v) || dist.contains_key(&y) {
                    continue;
                }
                dist.insert(y, dist[&x] + 1);
                queue.push_back(y);
            }
        }
        if let Some(d) = dist.get(&v) {
            let len = d + 1;
            best = Some(best.map_or(len, |b: usize| b.min(len)));
        }
    }
    best
}

/// Whether repeatedly deleting vertices of degree at most `d` empties `g`.
pub fn peels_at(g: &Graph, d: usize) -> bool {
    let mut h = g.clone();
    loop {
        let low: Vec<Vertex> = h.vertices().filter(|&v| h.neighbors(v).count() <= d).collect();
        if low.is_empty() {
            return h.vertex_count() == 0;
        }
        for v in low {
            h.remove_vertex(v);
        }
    }
}

/// Every vertex color is in range and no vertex has more same-colored
/// neighbors than its class allows.
pub fn valid_coloring(g: &Graph, defects: &[u32], c: &Coloring) -> bool {
    g.vertices().all(|v| {
        let Some(&k) = c.0.get(&v) else { return false };
        k < defects.len() && g.neighbors(v).filter(|u| c.0.get(u) == Some(&k)).count() as u32 <= defects[k]
    })
}
