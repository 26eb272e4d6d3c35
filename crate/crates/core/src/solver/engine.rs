//! Backtracking search with residual-budget propagation.
//!
//! Every vertex keeps a bitmask of still-possible colors. Assigning color `c`
//! to `v` bumps `same[u][c]` for all neighbors `u`; a vertex whose count
//! reaches its cap is saturated and strips `c` from its undecided neighbors.
//! Unassigned vertices are split into independent groups before branching:
//! two of them interact only through an edge or through a colored vertex
//! whose remaining budget cannot absorb all of its undecided neighbors.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{check_requirements, requirements, Assumption, ColorSpec, Coloring, Requirement, SolveError, Verdict};
use crate::graph::Graph;

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Wall-clock budget; `None` searches to completion.
    pub budget: Option<Duration>,
    /// Worker threads for the top of the search tree; 0 and 1 mean sequential.
    pub threads: usize,
}

impl SolveOptions {
    pub fn with_budget(budget: Duration) -> Self {
        SolveOptions {
            budget: Some(budget),
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Decides whether `g` has a `spec`-coloring extending `assumptions`.
pub fn solve(
    g: &Graph,
    spec: &ColorSpec,
    assumptions: &[Assumption],
    opts: &SolveOptions,
) -> Result<Verdict, SolveError> {
    let reqs = requirements(g, spec, assumptions)?;
    solve_requirements(g, spec, &reqs, opts).map(|(v, _)| v)
}

/// Like [`solve`] but with explicit per-vertex lower and upper bounds on
/// same-colored neighbors.
pub fn solve_requirements(
    g: &Graph,
    spec: &ColorSpec,
    reqs: &[Requirement],
    opts: &SolveOptions,
) -> Result<(Verdict, SolveStats), SolveError> {
    let start = Instant::now();
    let ix = g.indexed();
    let mut seen = vec![false; ix.len()];
    for r in reqs {
        let Some(&v) = ix.index.get(&r.vertex) else {
            return Err(SolveError::InvalidAssumption(format!("unknown vertex {}", r.vertex)));
        };
        if r.color >= spec.classes() {
            return Err(SolveError::InvalidAssumption(format!(
                "color {} out of range",
                r.color + 1
            )));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(SolveError::InvalidAssumption(format!(
                "vertex {} constrained twice",
                r.vertex
            )));
        }
    }

    let limits = Limits {
        deadline: opts.budget.map(|b| start + b),
        cancel: None,
        index: 0,
    };
    let mut engine = Engine::new(&ix.adj, spec, limits);
    let all: Vec<usize> = (0..ix.len()).collect();
    let outcome = if !engine.init(&ix.index, reqs) {
        Ok(false)
    } else if opts.threads > 1 {
        solve_parallel(&mut engine, &all, opts.threads)
    } else {
        engine.search(&all)
    };
    let stats = SolveStats {
        nodes: engine.nodes,
        elapsed: start.elapsed(),
    };
    match outcome {
        Ok(true) => {
            let coloring = Coloring(
                ix.ids
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v, engine.color[i] as usize))
                    .collect(),
            );
            let violation = check_requirements(g, spec, &coloring, reqs).expect("solver produced a total coloring");
            assert!(violation.is_none(), "solver certificate rejected: {violation:?}");
            Ok((Verdict::Sat(coloring), stats))
        }
        Ok(false) => Ok((Verdict::Unsat, stats)),
        Err(_) => Err(SolveError::Timeout {
            elapsed: stats.elapsed,
            nodes: stats.nodes,
        }),
    }
}

const NONE: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Timeout,
    Cancelled,
}

#[derive(Clone, Copy)]
struct Limits<'a> {
    deadline: Option<Instant>,
    cancel: Option<&'a AtomicUsize>,
    index: usize,
}

#[derive(Clone, Copy)]
enum Undo {
    Domain(usize, u32),
    Assign(usize),
}

#[derive(Clone)]
struct Engine<'a> {
    adj: &'a [Vec<usize>],
    l: usize,
    cap: Vec<u32>,
    min_same: Vec<u32>,
    min_vertices: Vec<usize>,
    domain: Vec<u32>,
    color: Vec<u8>,
    same: Vec<u32>,
    trail: Vec<Undo>,
    pending: Vec<usize>,
    nodes: u64,
    limits: Limits<'a>,
    // scratch for `split`
    epoch: u32,
    stamp: Vec<u32>,
    slot: Vec<usize>,
}

const NOT_TIGHT: usize = usize::MAX;

impl<'a> Engine<'a> {
    fn new(adj: &'a [Vec<usize>], spec: &ColorSpec, limits: Limits<'a>) -> Self {
        let n = adj.len();
        let l = spec.classes();
        let mut cap = Vec::with_capacity(n * l);
        for _ in 0..n {
            cap.extend_from_slice(spec.defects());
        }
        Engine {
            adj,
            l,
            cap,
            min_same: vec![0; n * l],
            min_vertices: Vec::new(),
            domain: vec![(1u32 << l) - 1; n],
            color: vec![NONE; n],
            same: vec![0; n * l],
            trail: Vec::new(),
            pending: Vec::new(),
            nodes: 0,
            limits,
            epoch: 0,
            stamp: vec![0; n],
            slot: vec![0; n],
        }
    }

    fn init(&mut self, index: &std::collections::HashMap<u32, usize>, reqs: &[Requirement]) -> bool {
        for r in reqs {
            let v = index[&r.vertex];
            let k = v * self.l + r.color;
            self.cap[k] = self.cap[k].min(r.max_same);
            if r.min_same > self.cap[k] {
                return false;
            }
            if r.min_same > 0 {
                self.min_same[k] = r.min_same;
                self.min_vertices.push(v);
            }
            self.domain[v] = 1 << r.color;
            self.pending.push(v);
        }
        self.trail.clear();
        self.propagate()
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(512) {
            if let Some(cancel) = self.limits.cancel {
                if cancel.load(Ordering::Relaxed) < self.limits.index {
                    return Err(Stop::Cancelled);
                }
            }
            if self.limits.deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(Stop::Timeout);
            }
        }
        Ok(())
    }

    fn remove(&mut self, v: usize, c: usize) -> bool {
        let d = self.domain[v];
        if d & (1 << c) == 0 {
            return true;
        }
        self.trail.push(Undo::Domain(v, d));
        let nd = d & !(1 << c);
        self.domain[v] = nd;
        if nd == 0 {
            return false;
        }
        if nd.is_power_of_two() {
            self.pending.push(v);
        }
        true
    }

    fn restrict(&mut self, v: usize, c: usize) {
        let d = self.domain[v];
        if d != 1 << c {
            self.trail.push(Undo::Domain(v, d));
            self.domain[v] = 1 << c;
        }
        self.pending.push(v);
    }

    fn strip_neighbors(&mut self, v: usize, c: usize) -> bool {
        let adj = self.adj;
        adj[v].iter().all(|&u| self.color[u] != NONE || self.remove(u, c))
    }

    fn assign(&mut self, v: usize, c: usize) -> bool {
        debug_assert_eq!(self.color[v], NONE);
        debug_assert!(self.domain[v] & (1 << c) != 0);
        let d = self.domain[v];
        if d != 1 << c {
            self.trail.push(Undo::Domain(v, d));
            self.domain[v] = 1 << c;
        }
        self.color[v] = c as u8;
        self.trail.push(Undo::Assign(v));
        let adj = self.adj;
        let l = self.l;
        for &u in &adj[v] {
            self.same[u * l + c] += 1;
        }
        let k = v * l + c;
        if self.same[k] > self.cap[k] {
            return false;
        }
        if self.same[k] == self.cap[k] && !self.strip_neighbors(v, c) {
            return false;
        }
        for &u in &adj[v] {
            let k = u * l + c;
            if self.color[u] == c as u8 {
                if self.same[k] > self.cap[k] {
                    return false;
                }
                if self.same[k] == self.cap[k] && !self.strip_neighbors(u, c) {
                    return false;
                }
            } else if self.color[u] == NONE && self.same[k] > self.cap[k] && !self.remove(u, c) {
                return false;
            }
        }
        true
    }

    fn propagate(&mut self) -> bool {
        loop {
            while let Some(v) = self.pending.pop() {
                if self.color[v] != NONE {
                    continue;
                }
                let d = self.domain[v];
                if d == 0 {
                    return false;
                }
                if !self.assign(v, d.trailing_zeros() as usize) {
                    return false;
                }
            }
            let mut forced = false;
            for i in 0..self.min_vertices.len() {
                let v = self.min_vertices[i];
                let c = self.color[v] as usize;
                let k = v * self.l + c;
                let (have, need) = (self.same[k], self.min_same[k]);
                if have >= need {
                    continue;
                }
                let adj = self.adj;
                let open = adj[v]
                    .iter()
                    .filter(|&&u| self.color[u] == NONE && self.domain[u] & (1 << c) != 0)
                    .count() as u32;
                if have + open < need {
                    return false;
                }
                if have + open == need {
                    for &u in &adj[v] {
                        if self.color[u] == NONE && self.domain[u] & (1 << c) != 0 {
                            self.restrict(u, c);
                            forced = true;
                        }
                    }
                }
            }
            if !forced {
                return true;
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        let l = self.l;
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Domain(v, d) => self.domain[v] = d,
                Undo::Assign(v) => {
                    let c = self.color[v] as usize;
                    self.color[v] = NONE;
                    for &u in &self.adj[v] {
                        self.same[u * l + c] -= 1;
                    }
                }
            }
        }
        self.pending.clear();
    }

    /// A colored vertex couples its undecided neighbors when its budget can
    /// still run out, or when it still needs more same-colored neighbors.
    fn tight(&self, w: usize) -> bool {
        let c = self.color[w] as usize;
        let k = w * self.l + c;
        if self.same[k] < self.min_same[k] {
            return true;
        }
        let open = self.adj[w]
            .iter()
            .filter(|&&u| self.color[u] == NONE && self.domain[u] & (1 << c) != 0)
            .count() as u32;
        self.cap[k] - self.same[k] < open
    }

    /// Partitions undecided vertices into groups that do not interact.
    fn split(&mut self, free: &[usize]) -> Vec<Vec<usize>> {
        self.epoch = self.epoch.wrapping_add(2);
        if self.epoch < 2 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 2;
        }
        let free_mark = self.epoch;
        let seen_mark = self.epoch + 1;
        for (i, &v) in free.iter().enumerate() {
            self.stamp[v] = free_mark;
            self.slot[v] = i;
        }
        let mut parent: Vec<usize> = (0..free.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let adj = self.adj;
        for (i, &u) in free.iter().enumerate() {
            for &w in &adj[u] {
                let other = if self.stamp[w] == free_mark {
                    self.slot[w]
                } else if self.color[w] != NONE && self.domain[u] & (1 << self.color[w]) != 0 {
                    if self.stamp[w] != seen_mark {
                        self.stamp[w] = seen_mark;
                        self.slot[w] = if self.tight(w) { i } else { NOT_TIGHT };
                    }
                    self.slot[w]
                } else {
                    NOT_TIGHT
                };
                if other != NOT_TIGHT {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, other));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of = vec![usize::MAX; free.len()];
        for (i, &v) in free.iter().enumerate() {
            let r = find(&mut parent, i);
            if group_of[r] == usize::MAX {
                group_of[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[group_of[r]].push(v);
        }
        groups.sort_by_key(|g| g.len());
        groups
    }

    fn pick(&self, free: &[usize]) -> usize {
        let key = |&v: &usize| {
            let d = self.domain[v];
            let pressure = self.adj[v]
                .iter()
                .filter(|&&u| self.color[u] != NONE && d & (1 << self.color[u]) != 0)
                .count();
            (
                d.count_ones(),
                std::cmp::Reverse(pressure),
                std::cmp::Reverse(self.adj[v].len()),
                v,
            )
        };
        *free.iter().min_by_key(|v| key(v)).unwrap()
    }

    fn undecided(&self, verts: &[usize]) -> Vec<usize> {
        verts.iter().copied().filter(|&v| self.color[v] == NONE).collect()
    }

    fn search(&mut self, verts: &[usize]) -> Result<bool, Stop> {
        let free = self.undecided(verts);
        if free.is_empty() {
            return Ok(true);
        }
        let groups = self.split(&free);
        for group in &groups {
            if !self.branch(group)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn branch(&mut self, free: &[usize]) -> Result<bool, Stop> {
        let free = self.undecided(free);
        if free.is_empty() {
            return Ok(true);
        }
        let v = self.pick(&free);
        let mut d = self.domain[v];
        while d != 0 {
            let c = d.trailing_zeros() as usize;
            d &= d - 1;
            self.tick()?;
            let mark = self.trail.len();
            if self.assign(v, c) && self.propagate() && self.search(&free)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }

    /// Applies a decision during replay; returns false on conflict.
    fn decide(&mut self, v: usize, c: usize) -> bool {
        if self.color[v] != NONE {
            return self.color[v] as usize == c;
        }
        self.domain[v] & (1 << c) != 0 && self.assign(v, c) && self.propagate()
    }

    /// Enumerates the top `depth` levels of the branching tree as decision
    /// paths. Paths that already color everything are returned as solved.
    fn frontier(
        &mut self,
        verts: &[usize],
        depth: usize,
        path: &mut Vec<(usize, usize)>,
        out: &mut Vec<(Vec<(usize, usize)>, bool)>,
    ) {
        let free = self.undecided(verts);
        if free.is_empty() || depth == 0 {
            out.push((path.clone(), free.is_empty()));
            return;
        }
        let v = self.pick(&free);
        let mut d = self.domain[v];
        while d != 0 {
            let c = d.trailing_zeros() as usize;
            d &= d - 1;
            let mark = self.trail.len();
            if self.assign(v, c) && self.propagate() {
                path.push((v, c));
                self.frontier(&free, depth - 1, path, out);
                path.pop();
            }
            self.undo(mark);
        }
    }
}

/// Splits the top of the tree into tasks, solves them on a thread pool and
/// keeps the lowest-indexed satisfiable task, so the certificate matches
/// what a sequential scan of the tasks would return.
fn solve_parallel(engine: &mut Engine<'_>, all: &[usize], threads: usize) -> Result<bool, Stop> {
    let mut tasks = Vec::new();
    for depth in 1..=24 {
        tasks.clear();
        engine.frontier(all, depth, &mut Vec::new(), &mut tasks);
        if tasks.len() >= 4 * threads || tasks.iter().all(|t| t.1) {
            break;
        }
    }
    if tasks.is_empty() {
        return Ok(false);
    }
    let best = AtomicUsize::new(usize::MAX);
    let nodes = AtomicU64::new(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let base: &Engine<'_> = engine;
    let results: Vec<Result<Option<Vec<u8>>, Stop>> = pool.install(|| {
        tasks
            .par_iter()
            .enumerate()
            .map(|(i, (path, _))| {
                if best.load(Ordering::Relaxed) < i {
                    return Err(Stop::Cancelled);
                }
                let mut worker = base.clone();
                worker.limits.cancel = Some(&best);
                worker.limits.index = i;
                worker.nodes = 0;
                for &(v, c) in path {
                    let ok = worker.decide(v, c);
                    debug_assert!(ok, "replayed decision failed");
                }
                let r = worker.search(all);
                nodes.fetch_add(worker.nodes, Ordering::Relaxed);
                match r {
                    Ok(true) => {
                        best.fetch_min(i, Ordering::Relaxed);
                        Ok(Some(worker.color.clone()))
                    }
                    Ok(false) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect()
    });
    engine.nodes += nodes.load(Ordering::Relaxed);
    let mut timed_out = false;
    for r in results {
        match r {
            Ok(Some(colors)) => {
                engine.color = colors;
                return Ok(true);
            }
            Ok(None) | Err(Stop::Cancelled) => {}
            Err(Stop::Timeout) => timed_out = true,
        }
    }
    if timed_out {
        Err(Stop::Timeout)
    } else {
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn spec(s: &str) -> ColorSpec {
        s.parse().unwrap()
    }

    fn run(g: &Graph, s: &str, a: &[Assumption]) -> Verdict {
        solve(g, &spec(s), a, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(run(&cycle(5), "0,0", &[]), Verdict::Unsat);
        assert!(run(&cycle(5), "1,0", &[]).is_sat());
        assert!(run(&cycle(6), "0,0", &[]).is_sat());
        assert_eq!(run(&complete(4), "0,0,0", &[]), Verdict::Unsat);
        assert!(run(&complete(4), "1,1", &[]).is_sat());
        assert!(run(&Graph::default(), "0", &[]).is_sat());
        assert_eq!(run(&petersen(), "0,0", &[]), Verdict::Unsat);
        assert!(run(&petersen(), "0,0,0", &[]).is_sat());
    }

    #[test]
    fn k22_with_split_terminals() {
        // x and y are opposite corners of a 4-cycle
        let g = cycle(4);
        let a = [
            Assumption {
                vertex: 0,
                color: 0,
                budget: None,
            },
            Assumption {
                vertex: 2,
                color: 1,
                budget: None,
            },
        ];
        assert_eq!(run(&g, "1,0", &a), Verdict::Unsat);
    }

    #[test]
    fn budgets_restrict_extensions() {
        let g = path(3);
        let a = [Assumption {
            vertex: 1,
            color: 0,
            budget: Some(0),
        }];
        // the middle vertex keeps color 1 alone, leaves take color 2
        let Verdict::Sat(c) = run(&g, "1,0", &a) else { panic!() };
        assert_eq!(c.get(0), Some(1));
        assert_eq!(c.get(2), Some(1));
        let a = [Assumption {
            vertex: 1,
            color: 1,
            budget: None,
        }];
        assert!(run(&g, "1,0", &a).is_sat());
        assert!(solve(
            &g,
            &spec("1,0"),
            &[Assumption {
                vertex: 1,
                color: 1,
                budget: Some(1)
            }],
            &SolveOptions::default()
        )
        .is_err());
    }

    #[test]
    fn lower_bounds() {
        let g = star(3);
        let req = |m| Requirement {
            vertex: 0,
            color: 0,
            max_same: 3,
            min_same: m,
        };
        let (v, _) = solve_requirements(&g, &spec("3,0"), &[req(3)], &SolveOptions::default()).unwrap();
        let c = v.certificate().unwrap().clone();
        assert_eq!(c.defect(&g, 0), 3);
        let (v, _) = solve_requirements(
            &g,
            &spec("2,0"),
            &[Requirement { max_same: 2, ..req(3) }],
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(v, Verdict::Unsat);
    }

    #[test]
    fn parallel_matches_sequential() {
        for g in [petersen(), icosahedron(), cycle(9), complete_bipartite(3, 4)] {
            for s in ["0,0", "1,0", "0,0,0", "1,1"] {
                let seq = solve(&g, &spec(s), &[], &SolveOptions::default()).unwrap();
                let par = solve(
                    &g,
                    &spec(s),
                    &[],
                    &SolveOptions {
                        budget: None,
                        threads: 4,
                    },
                )
                .unwrap();
                assert_eq!(seq.is_sat(), par.is_sat(), "{} {s}", g.name());
            }
        }
    }

    #[test]
    fn timeout_reports_progress() {
        // K_11 is not (0,…,0)-colorable with 10 classes, a slow refutation
        let g = complete(11);
        let r = solve(
            &g,
            &spec("0,0,0,0,0,0,0,0,0,0"),
            &[],
            &SolveOptions::with_budget(Duration::from_millis(20)),
        );
        assert!(matches!(r, Err(SolveError::Timeout { .. })));
    }
}
