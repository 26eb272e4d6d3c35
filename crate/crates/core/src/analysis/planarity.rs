//! Left-right planarity test with combinatorial embedding (Brandes'
//! formulation of the de Fraysseix–Rosenstiehl criterion). Non-planar
//! graphs get a Kuratowski subdivision as witness, extracted by greedy edge
//! deletion with the test as oracle.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::graph::{Graph, Vertex};

/// Rotation system: for every vertex, its neighbors in clockwise order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub rotation: BTreeMap<Vertex, Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Planarity {
    Planar(Embedding),
    /// Edges of a subdivision of K5 or K3,3.
    NonPlanar {
        kuratowski: Vec<(Vertex, Vertex)>,
    },
}

impl Planarity {
    pub fn is_planar(&self) -> bool {
        matches!(self, Planarity::Planar(_))
    }
}

pub fn is_planar(g: &Graph) -> Planarity {
    let ix = g.indexed();
    let edges: Vec<(usize, usize)> = (0..ix.len())
        .flat_map(|u| ix.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    match lr_embedding(ix.len(), &edges) {
        Some(rot) => Planarity::Planar(Embedding {
            rotation: rot
                .into_iter()
                .enumerate()
                .map(|(v, ns)| (ix.ids[v], ns.into_iter().map(|u| ix.ids[u]).collect()))
                .collect(),
        }),
        None => {
            let mut keep = edges.clone();
            let mut i = 0;
            while i < keep.len() {
                let e = keep.remove(i);
                if lr_embedding(ix.len(), &keep).is_none() {
                    continue;
                }
                keep.insert(i, e);
                i += 1;
            }
            Planarity::NonPlanar {
                kuratowski: keep.into_iter().map(|(u, v)| (ix.ids[u], ix.ids[v])).collect(),
            }
        }
    }
}

impl Embedding {
    /// Checks that the rotation system matches `g` and satisfies Euler's
    /// formula `V - E + F = 2C` (faces counted per component, one face for an
    /// isolated vertex).
    pub fn check(&self, g: &Graph) -> bool {
        if !self.rotation.keys().copied().eq(g.vertices()) {
            return false;
        }
        for (&v, ns) in &self.rotation {
            let mut sorted = ns.clone();
            sorted.sort_unstable();
            if !sorted.iter().copied().eq(g.neighbors(v)) {
                return false;
            }
        }
        // Position of u in rotation(v).
        let pos: HashMap<(Vertex, Vertex), usize> = self
            .rotation
            .iter()
            .flat_map(|(&v, ns)| ns.iter().enumerate().map(move |(i, &u)| ((v, u), i)))
            .collect();
        let mut seen: HashSet<(Vertex, Vertex)> = HashSet::new();
        let mut faces = 0usize;
        for (&v, ns) in &self.rotation {
            for &w in ns {
                if seen.contains(&(v, w)) {
                    continue;
                }
                faces += 1;
                let (mut a, mut b) = (v, w);
                while seen.insert((a, b)) {
                    // Next half-edge: at b, take the neighbor preceding a.
                    let rot = &self.rotation[&b];
                    let i = pos[&(b, a)];
                    let c = rot[(i + rot.len() - 1) % rot.len()];
                    a = b;
                    b = c;
                }
                if (a, b) != (v, w) {
                    return false;
                }
            }
        }
        let comps = g.components();
        let isolated = comps.iter().filter(|c| c.len() == 1).count();
        let v = g.vertex_count() as i64;
        let e = g.edge_count() as i64;
        let f = (faces + isolated) as i64;
        v - e + f == 2 * comps.len() as i64
    }
}

/// Whether `edges` form a subdivision of K5 or K3,3.
pub fn is_kuratowski_subdivision(edges: &[(Vertex, Vertex)]) -> bool {
    let Ok(g) = Graph::from_edges("witness", edges) else {
        return false;
    };
    if g.components().len() != 1 {
        return false;
    }
    if g.vertices().any(|v| g.degree(v) < 2) {
        return false;
    }
    let branch: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) > 2).collect();
    // Follow each branch vertex's threads to the next branch vertex.
    // Every thread is walked once from each end.
    let mut threads: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for &b in &branch {
        for first in g.neighbors(b) {
            let (mut prev, mut cur) = (b, first);
            while g.degree(cur) == 2 {
                let next = g.neighbors(cur).find(|&x| x != prev).unwrap();
                prev = cur;
                cur = next;
            }
            if cur == b {
                return false;
            }
            *threads.entry((b.min(cur), b.max(cur))).or_default() += 1;
        }
    }
    if threads.values().any(|&c| c != 2) {
        return false;
    }
    let links: HashSet<(Vertex, Vertex)> = threads.into_keys().collect();
    let pairs = links.len();
    match branch.len() {
        5 => branch.iter().all(|&v| g.degree(v) == 4) && pairs == 10,
        6 => {
            if !branch.iter().all(|&v| g.degree(v) == 3) || pairs != 9 {
                return false;
            }
            // bipartition 3+3 with all links across
            let a = branch[0];
            let side_a: HashSet<Vertex> = std::iter::once(a)
                .chain(
                    branch
                        .iter()
                        .copied()
                        .filter(|&x| x != a && !links.contains(&(a.min(x), a.max(x)))),
                )
                .collect();
            side_a.len() == 3 && links.iter().all(|&(x, y)| side_a.contains(&x) != side_a.contains(&y))
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Default, Debug)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy, Debug)]
struct ConflictPair {
    left: Interval,
    right: Interval,
    id: usize,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr {
    adjs: Vec<Vec<usize>>,
    height: Vec<Option<usize>>,
    ends: Vec<(usize, usize)>,
    oriented: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    parent_edge: Vec<Option<usize>>,
    ordered: Vec<Vec<usize>>,
    refs: Vec<Option<usize>>,
    side: Vec<i64>,
    stack: Vec<ConflictPair>,
    next_pair_id: usize,
    stack_bottom: Vec<Option<usize>>,
    lowpt_edge: Vec<Option<usize>>,
    roots: Vec<usize>,
}

/// Clockwise rotation lists, or `None` when the graph is not planar.
fn lr_embedding(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    if n > 2 && edges.len() > 3 * n - 6 {
        return None;
    }
    let mut adjs = vec![Vec::new(); n];
    for &(u, v) in edges {
        adjs[u].push(v);
        adjs[v].push(u);
    }
    let m = edges.len();
    let mut lr = Lr {
        adjs,
        height: vec![None; n],
        ends: Vec::with_capacity(m),
        oriented: HashMap::with_capacity(m),
        out: vec![Vec::new(); n],
        lowpt: Vec::with_capacity(m),
        lowpt2: Vec::with_capacity(m),
        nesting: Vec::with_capacity(m),
        parent_edge: vec![None; n],
        ordered: vec![Vec::new(); n],
        refs: vec![None; m],
        side: vec![1; m],
        stack: Vec::new(),
        next_pair_id: 0,
        stack_bottom: vec![None; m],
        lowpt_edge: vec![None; m],
        roots: Vec::new(),
    };
    for v in 0..n {
        if lr.height[v].is_none() {
            lr.height[v] = Some(0);
            lr.roots.push(v);
            lr.orient(v);
        }
    }
    for v in 0..n {
        let mut es = lr.out[v].clone();
        es.sort_by_key(|&e| lr.nesting[e]);
        lr.ordered[v] = es;
    }
    for r in lr.roots.clone() {
        if !lr.test(r) {
            return None;
        }
    }
    for e in 0..m {
        let s = lr.sign(e);
        lr.nesting[e] *= s;
    }
    let mut emb = Rotation::new(n);
    for v in 0..n {
        let mut es = lr.out[v].clone();
        es.sort_by_key(|&e| lr.nesting[e]);
        lr.ordered[v] = es;
        let mut prev: Option<usize> = None;
        for &e in &lr.ordered[v] {
            let w = lr.ends[e].1;
            match prev {
                None => emb.add_first(v, w),
                Some(p) => emb.add_ccw_of(v, w, p),
            }
            prev = Some(w);
        }
    }
    let mut left_ref = vec![usize::MAX; n];
    let mut right_ref = vec![usize::MAX; n];
    for r in lr.roots.clone() {
        let mut stack = vec![r];
        let mut ind = vec![0usize; n];
        while let Some(v) = stack.pop() {
            while ind[v] < lr.ordered[v].len() {
                let e = lr.ordered[v][ind[v]];
                ind[v] += 1;
                let w = lr.ends[e].1;
                if lr.parent_edge[w] == Some(e) {
                    emb.add_leftmost(w, v);
                    left_ref[v] = w;
                    right_ref[v] = w;
                    stack.push(v);
                    stack.push(w);
                    break;
                } else if lr.side[e] == 1 {
                    emb.add_ccw_of(w, v, right_ref[w]);
                } else {
                    emb.add_cw_of(w, v, left_ref[w]);
                    left_ref[w] = v;
                }
            }
        }
    }
    Some(emb.into_lists())
}

impl Lr {
    fn orient(&mut self, root: usize) {
        let n = self.adjs.len();
        let mut stack = vec![root];
        let mut ind = vec![0usize; n];
        let mut skip_init: HashSet<(usize, usize)> = HashSet::new();
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            while ind[v] < self.adjs[v].len() {
                let w = self.adjs[v][ind[v]];
                let vw;
                if !skip_init.contains(&(v, w)) {
                    if self.oriented.contains_key(&(v, w)) || self.oriented.contains_key(&(w, v)) {
                        ind[v] += 1;
                        continue;
                    }
                    vw = self.ends.len();
                    self.ends.push((v, w));
                    self.oriented.insert((v, w), vw);
                    self.out[v].push(vw);
                    let hv = self.height[v].unwrap();
                    self.lowpt.push(hv);
                    self.lowpt2.push(hv);
                    self.nesting.push(0);
                    match self.height[w] {
                        None => {
                            self.parent_edge[w] = Some(vw);
                            self.height[w] = Some(hv + 1);
                            stack.push(v);
                            stack.push(w);
                            skip_init.insert((v, w));
                            break;
                        }
                        Some(hw) => self.lowpt[vw] = hw,
                    }
                } else {
                    vw = self.oriented[&(v, w)];
                }
                let hv = self.height[v].unwrap();
                self.nesting[vw] = 2 * self.lowpt[vw] as i64;
                if self.lowpt2[vw] < hv {
                    self.nesting[vw] += 1;
                }
                if let Some(e) = e {
                    if self.lowpt[vw] < self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                        self.lowpt[e] = self.lowpt[vw];
                    } else if self.lowpt[vw] > self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                    } else {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                    }
                }
                ind[v] += 1;
            }
        }
    }

    fn top_id(&self) -> Option<usize> {
        self.stack.last().map(|p| p.id)
    }

    fn push_pair(&mut self, left: Interval, right: Interval) {
        let id = self.next_pair_id;
        self.next_pair_id += 1;
        self.stack.push(ConflictPair { left, right, id });
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.empty() && self.lowpt[i.high.unwrap()] > self.lowpt[b]
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.empty() {
            return self.lowpt[p.right.low.unwrap()];
        }
        if p.right.empty() {
            return self.lowpt[p.left.low.unwrap()];
        }
        self.lowpt[p.left.low.unwrap()].min(self.lowpt[p.right.low.unwrap()])
    }

    fn test(&mut self, root: usize) -> bool {
        let n = self.adjs.len();
        let mut stack = vec![root];
        let mut ind = vec![0usize; n];
        let mut skip_init = vec![false; self.ends.len()];
        while let Some(v) = stack.pop() {
            let e = self.parent_edge[v];
            let mut skip_final = false;
            while ind[v] < self.ordered[v].len() {
                let ei = self.ordered[v][ind[v]];
                let w = self.ends[ei].1;
                if !skip_init[ei] {
                    self.stack_bottom[ei] = self.top_id();
                    if self.parent_edge[w] == Some(ei) {
                        stack.push(v);
                        stack.push(w);
                        skip_init[ei] = true;
                        skip_final = true;
                        break;
                    }
                    self.lowpt_edge[ei] = Some(ei);
                    self.push_pair(
                        Interval::default(),
                        Interval {
                            low: Some(ei),
                            high: Some(ei),
                        },
                    );
                }
                if self.lowpt[ei] < self.height[v].unwrap() {
                    if ei == self.ordered[v][0] {
                        let e = e.expect("return edge from root");
                        self.lowpt_edge[e] = self.lowpt_edge[ei];
                    } else if !self.add_constraints(ei, e.expect("return edge from root")) {
                        return false;
                    }
                }
                ind[v] += 1;
            }
            if !skip_final {
                if let Some(e) = e {
                    self.remove_back_edges(e);
                }
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p_left = Interval::default();
        let mut p_right = Interval::default();
        loop {
            let mut q = self.stack.pop().unwrap();
            if !q.left.empty() {
                q.swap();
            }
            if !q.left.empty() {
                return false;
            }
            if self.lowpt[q.right.low.unwrap()] > self.lowpt[e] {
                if p_right.empty() {
                    p_right = q.right;
                } else if let Some(l) = p_right.low {
                    self.refs[l] = q.right.high;
                }
                p_right.low = q.right.low;
            } else {
                self.refs[q.right.low.unwrap()] = self.lowpt_edge[e];
            }
            if self.top_id() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(l) = p_right.low {
                self.refs[l] = q.right.high;
            }
            if q.right.low.is_some() {
                p_right.low = q.right.low;
            }
            if p_left.empty() {
                p_left = q.left;
            } else if let Some(l) = p_left.low {
                self.refs[l] = q.left.high;
            }
            p_left.low = q.left.low;
        }
        if !(p_left.empty() && p_right.empty()) {
            self.push_pair(p_left, p_right);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.ends[e].0;
        let hu = self.height[u].unwrap();
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.ends[h].1 != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.ends[h].1 != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(l) = p.right.low {
                    self.refs[l] = p.left.low;
                    self.side[l] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < hu {
            let top = self.stack.last().unwrap();
            let (hl, hr) = (top.left.high, top.right.high);
            self.refs[e] = match (hl, hr) {
                (Some(l), None) => Some(l),
                (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                _ => hr,
            };
        }
    }

    fn sign(&mut self, e: usize) -> i64 {
        let mut stack = vec![e];
        let mut old_ref: HashMap<usize, usize> = HashMap::new();
        while let Some(x) = stack.pop() {
            if let Some(r) = self.refs[x] {
                stack.push(x);
                stack.push(r);
                old_ref.insert(x, r);
                self.refs[x] = None;
            } else if let Some(&r) = old_ref.get(&x) {
                self.side[x] *= self.side[r];
            }
        }
        self.side[e]
    }
}

/// Per-vertex circular doubly linked neighbor lists with a tracked leftmost
/// neighbor.
struct Rotation {
    cw: Vec<HashMap<usize, usize>>,
    ccw: Vec<HashMap<usize, usize>>,
    leftmost: Vec<Option<usize>>,
}

impl Rotation {
    fn new(n: usize) -> Self {
        Rotation {
            cw: vec![HashMap::new(); n],
            ccw: vec![HashMap::new(); n],
            leftmost: vec![None; n],
        }
    }

    fn add_first(&mut self, v: usize, w: usize) {
        self.cw[v].insert(w, w);
        self.ccw[v].insert(w, w);
        self.leftmost[v] = Some(w);
    }

    /// Inserts `w` directly counter-clockwise of `r` (`r` becomes its cw
    /// successor).
    fn add_cw_of(&mut self, v: usize, w: usize, r: usize) {
        let r_ccw = self.ccw[v][&r];
        self.cw[v].insert(w, r);
        self.ccw[v].insert(w, r_ccw);
        self.cw[v].insert(r_ccw, w);
        self.ccw[v].insert(r, w);
        if self.leftmost[v] == Some(r) {
            self.leftmost[v] = Some(w);
        }
    }

    /// Inserts `w` directly clockwise of `r`.
    fn add_ccw_of(&mut self, v: usize, w: usize, r: usize) {
        let r_cw = self.cw[v][&r];
        self.cw[v].insert(w, r_cw);
        self.ccw[v].insert(w, r);
        self.ccw[v].insert(r_cw, w);
        self.cw[v].insert(r, w);
    }

    fn add_leftmost(&mut self, v: usize, w: usize) {
        match self.leftmost[v] {
            None => self.add_first(v, w),
            Some(l) => self.add_cw_of(v, w, l),
        }
    }

    fn into_lists(self) -> Vec<Vec<usize>> {
        (0..self.cw.len())
            .map(|v| {
                let Some(start) = self.cw[v].keys().min().copied() else {
                    return Vec::new();
                };
                let mut out = vec![start];
                let mut cur = self.cw[v][&start];
                while cur != start {
                    out.push(cur);
                    cur = self.cw[v][&cur];
                }
                out
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn assert_planar(g: &Graph) {
        match is_planar(g) {
            Planarity::Planar(emb) => assert!(emb.check(g), "bad embedding for {}", g.name()),
            Planarity::NonPlanar { .. } => panic!("{} reported non-planar", g.name()),
        }
    }

    fn assert_nonplanar(g: &Graph) {
        match is_planar(g) {
            Planarity::Planar(_) => panic!("{} reported planar", g.name()),
            Planarity::NonPlanar { kuratowski } => assert!(is_kuratowski_subdivision(&kuratowski)),
        }
    }

    #[test]
    fn classic_cases() {
        for g in [
            complete(4),
            cycle(7),
            wheel(8),
            icosahedron(),
            path(5),
            empty(3),
            complete_bipartite(2, 9),
        ] {
            assert_planar(&g);
        }
        for g in [
            complete(5),
            complete_bipartite(3, 3),
            petersen(),
            complete(6),
            complete_bipartite(3, 4),
        ] {
            assert_nonplanar(&g);
        }
    }

    #[test]
    fn embedding_check_rejects_bad_rotation() {
        // K4 with a rotation that is not planar: swap two neighbors at one vertex.
        let g = complete(4);
        let Planarity::Planar(mut emb) = is_planar(&g) else {
            panic!()
        };
        assert!(emb.check(&g));
        // Flip the cyclic order at every vertex but one: a non-planar rotation.
        for (&v, ns) in emb.rotation.iter_mut() {
            if v != 0 {
                ns.swap(0, 1);
            }
        }
        assert!(!emb.check(&g));
    }

    #[test]
    fn kuratowski_checker() {
        let k5: Vec<_> = complete(5).edges().collect();
        assert!(is_kuratowski_subdivision(&k5));
        let k33: Vec<_> = complete_bipartite(3, 3).edges().collect();
        assert!(is_kuratowski_subdivision(&k33));
        let k4: Vec<_> = complete(4).edges().collect();
        assert!(!is_kuratowski_subdivision(&k4));
        // subdivide one K5 edge
        let mut sub = k5.clone();
        sub.retain(|&e| e != (0, 1));
        sub.push((0, 10));
        sub.push((10, 1));
        assert!(is_kuratowski_subdivision(&sub));
    }
}
