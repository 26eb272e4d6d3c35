//! Polynomial reductions between coloring problems, built from forcing
//! gadgets.
//!
//! A reduction only relies on the guarantee of its gadget, which is verified
//! when the gadget is built, so small non-planar gadgets found by search
//! exercise the same code paths as the planar ones.

mod trace;

pub use trace::{parse_trace, Element, TraceEntry, TraceParseError};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::gadgets::{assembled, Gadget, GadgetError};
use crate::graph::{Graph, GraphError, Vertex};
use crate::solver::{solve, ColorSpec, SolveError, SolveOptions};
use crate::verify::{
    parse_property, search_gadget_with, verify_manifest, verify_property, Claim, Outcome, Property, SearchError,
    SearchOptions, VerifyError,
};

/// Where a forcing gadget is attached to its host.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// The 2-vertex `x` of the minimal graph becomes a path `u x1 x2 x3 v`;
    /// the host attaches at `x2`.
    Path,
    /// `x` is replaced by pendant vertices `u'` on `u` and `v'` on `v`; the
    /// host attaches at both.
    Pendant,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Path => "path",
            Mode::Pendant => "pendant",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "path" => Ok(Mode::Path),
            "pendant" => Ok(Mode::Pendant),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

/// A gadget whose guarantee has been verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingGadget {
    graph: Graph,
    mode: Mode,
    spec: ColorSpec,
    guarantee: Property,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("bad parameters: {0}")]
    Parameters(String),
    #[error("graph is not minimally non-{spec}-colorable: {reason}")]
    NotMinimal { spec: String, reason: String },
    #[error("no 2-vertex whose neighbors get distinct saturated colors")]
    NoTwoVertex,
    #[error("gadget guarantee `{property}` does not hold: {reason}")]
    Guarantee { property: String, reason: String },
    #[error("gadget lacks terminal `{0}`")]
    MissingTerminal(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

fn property(text: &str) -> Property {
    parse_property(text, 1).expect("built-in property")
}

fn guarantee_for(mode: Mode, spec: &ColorSpec) -> Property {
    match mode {
        // x2 gets the color of positive defect, with one neighbor of it
        Mode::Path => property(&format!("forced {spec} at x2 states (1,1)")),
        Mode::Pendant => property(&format!(
            "forall {spec} pattern true => diff(u',v') & diff(u',u) & diff(v',v)"
        )),
    }
}

fn terminal(g: &Graph, name: &str) -> Result<Vertex, ReductionError> {
    g.terminal(name)
        .ok_or_else(|| ReductionError::MissingTerminal(name.to_string()))
}

impl ForcingGadget {
    /// Wraps `graph`, which must carry the terminals of `mode` (`x2`, or
    /// `u`, `v`, `u'`, `v'`), after verifying the mode's guarantee.
    pub fn new(graph: Graph, spec: ColorSpec, mode: Mode, opts: &SolveOptions) -> Result<Self, ReductionError> {
        if mode == Mode::Path && (spec.classes() != 2 || spec.defect(0) == 0 || spec.defect(1) != 0) {
            return Err(ReductionError::Parameters(format!(
                "path mode needs a (k,0) spec, got ({spec})"
            )));
        }
        let guarantee = guarantee_for(mode, &spec);
        for name in guarantee.names() {
            terminal(&graph, name)?;
        }
        match verify_property(&graph, &guarantee, opts)? {
            Outcome::Verified { .. } => Ok(ForcingGadget {
                graph,
                mode,
                spec,
                guarantee,
            }),
            Outcome::Refuted { reason, .. } => Err(ReductionError::Guarantee {
                property: guarantee.to_string(),
                reason,
            }),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn spec(&self) -> &ColorSpec {
        &self.spec
    }

    pub fn guarantee(&self) -> &Property {
        &self.guarantee
    }

    /// Vertices a host connects to.
    pub fn attach(&self) -> Vec<Vertex> {
        let names: &[&str] = match self.mode {
            Mode::Path => &["x2"],
            Mode::Pendant => &["u'", "v'"],
        };
        names.iter().map(|n| self.graph.terminal(n).unwrap()).collect()
    }
}

/// Checks that `g` is not `spec`-colorable while every graph obtained by
/// deleting one vertex or one edge is.
pub fn check_minimal(g: &Graph, spec: &ColorSpec, opts: &SolveOptions) -> Result<(), ReductionError> {
    let colorable = |h: &Graph| solve(h, spec, &[], opts).map(|v| v.is_sat());
    let fail = |reason: String| ReductionError::NotMinimal {
        spec: spec.to_string(),
        reason,
    };
    if colorable(g)? {
        return Err(fail("it is colorable".into()));
    }
    for v in g.vertices() {
        let mut h = g.clone();
        h.remove_vertex(v);
        if !colorable(&h)? {
            return Err(fail(format!("vertex {v} can be deleted")));
        }
    }
    for (u, v) in g.edges() {
        let mut h = g.clone();
        h.remove_edge(u, v);
        if !colorable(&h)? {
            return Err(fail(format!("edge {u}-{v} can be deleted")));
        }
    }
    Ok(())
}

/// Turns a minimal non-colorable graph into a forcing gadget around one of
/// its 2-vertices `x` with neighbors `u`, `v`. The 2-vertex is chosen as the
/// smallest id for which every coloring of the graph without `x` gives `u`
/// and `v` distinct saturated colors.
pub fn derive_forcing_gadget(
    minimal: &Graph,
    spec: &ColorSpec,
    mode: Mode,
    opts: &SolveOptions,
) -> Result<ForcingGadget, ReductionError> {
    check_minimal(minimal, spec, opts)?;
    let distinct = property(&format!("forall {spec} pattern true => diff(u,v) & sat(u) & sat(v)"));
    for x in minimal.vertices() {
        if minimal.degree(x) != 2 {
            continue;
        }
        let nb: Vec<Vertex> = minimal.neighbors(x).collect();
        let (u, v) = (nb[0], nb[1]);
        let mut g = minimal.clone();
        g.clear_terminals();
        g.remove_vertex(x);
        g.set_terminal("u", u)?;
        g.set_terminal("v", v)?;
        if !verify_property(&g, &distinct, opts)?.is_verified() {
            continue;
        }
        match mode {
            Mode::Path => {
                let mut prev = u;
                for name in ["x1", "x2", "x3"] {
                    let w = g.add_fresh_vertex();
                    g.add_edge(prev, w)?;
                    g.set_terminal(name, w)?;
                    prev = w;
                }
                g.add_edge(prev, v)?;
            }
            Mode::Pendant => {
                for (name, at) in [("u'", u), ("v'", v)] {
                    let w = g.add_fresh_vertex();
                    g.add_edge(at, w)?;
                    g.set_terminal(name, w)?;
                }
            }
        }
        g.set_name(format!("{}-{mode}", minimal.name()));
        return ForcingGadget::new(g, spec.clone(), mode, opts);
    }
    Err(ReductionError::NoTwoVertex)
}

/// Searches graphs of at most `max_vertices` vertices for a minimal
/// non-`spec`-colorable graph with a 2-vertex and derives a forcing gadget
/// from it.
pub fn find_mock_gadget(
    spec: &ColorSpec,
    mode: Mode,
    max_vertices: usize,
    opts: &SolveOptions,
) -> Result<ForcingGadget, ReductionError> {
    let p = property(&format!("noncolorable {spec}"));
    let search = SearchOptions {
        max_vertices,
        minimize: true,
        solve: opts.clone(),
        ..Default::default()
    };
    let found = search_gadget_with(&p, &search, |g| {
        g.min_degree() == Some(2) && derive_forcing_gadget(g, spec, mode, opts).is_ok()
    })?;
    derive_forcing_gadget(&found, spec, mode, opts)
}

/// Manifest of an edge gadget for [`reduce_3col`].
pub fn edge_gadget_manifest(k: u32) -> String {
    format!(
        "gadget Epp\n\
         property exists 0,0,0 pattern true\n\
         property forall {k},{k},1 pattern same(a,b) => false\n"
    )
}

/// Searches graphs of at most `max_vertices` vertices for a 3-colorable
/// stand-in for `E''`: an edge `ab` that no `(k,k,1)`-coloring makes
/// monochromatic. Colors can be permuted, so one proper 3-coloring extends
/// every proper coloring of `a` and `b`.
pub fn find_mock_edge_gadget(k: u32, max_vertices: usize, opts: &SolveOptions) -> Result<Gadget, ReductionError> {
    let p = property(&format!("forall {k},{k},1 pattern same(a,b) => false"));
    let three = ColorSpec::new(vec![0, 0, 0]).unwrap();
    let search = SearchOptions {
        max_vertices,
        solve: opts.clone(),
        ..Default::default()
    };
    let found = search_gadget_with(&p, &search, |g| {
        let (a, b) = (g.terminal("a"), g.terminal("b"));
        a.zip(b).is_some_and(|(a, b)| g.has_edge(a, b)) && solve(g, &three, &[], opts).is_ok_and(|v| v.is_sat())
    })?;
    let n = found.vertex_count();
    let gadget = assembled(
        "Epp",
        found,
        &edge_gadget_manifest(k),
        format!("search over {n} vertices"),
    )?;
    require_verified(&gadget, opts)?;
    Ok(gadget)
}

/// Output of a reduction with a record of where every gadget copy went.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub graph: Graph,
    pub trace: Vec<TraceEntry>,
}

impl ReductionOutput {
    /// The trace in its sidecar text form, one line per copy.
    pub fn trace_text(&self) -> String {
        self.trace.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// Gadget-to-host id map and the range of fresh ids.
type Attached = (BTreeMap<Vertex, Vertex>, Option<(Vertex, Vertex)>);

/// Adds a copy of `gadget` to `host` with fresh, consecutive ids for every
/// gadget vertex not listed in `identify` (gadget vertex, host vertex).
/// Edges already present in the host are not doubled. Returns the id map
/// and the fresh id range.
fn attach_copy(host: &mut Graph, gadget: &Graph, identify: &[(Vertex, Vertex)]) -> Result<Attached, ReductionError> {
    let mut map: BTreeMap<Vertex, Vertex> = identify.iter().copied().collect();
    let mut range = None;
    for v in gadget.vertices() {
        map.entry(v).or_insert_with(|| {
            let w = host.add_fresh_vertex();
            range = Some(range.map_or((w, w), |(lo, _)| (lo, w)));
            w
        });
    }
    for (a, b) in gadget.edges() {
        let (a, b) = (map[&a], map[&b]);
        if !host.has_edge(a, b) {
            host.add_edge(a, b)?;
        }
    }
    Ok((map, range))
}

fn entry(copy: usize, element: Element, range: Option<(Vertex, Vertex)>) -> TraceEntry {
    TraceEntry {
        copy,
        element,
        vertices: range,
    }
}

fn host_of(instance: &Graph, name: String) -> Graph {
    let mut g = instance.clone();
    g.set_name(name);
    g
}

fn check_size(input: &Graph, out: &Graph, copies: usize, gadget: usize, identified: usize) {
    assert_eq!(
        out.vertex_count(),
        input.vertex_count() + copies * (gadget - identified),
        "reduction output has the wrong size"
    );
}

/// For every vertex `s`, `k-1` copies of a path-mode `(k,0)` gadget with
/// `x2` joined to `s`. The output is `(k,0)`-colorable iff the input is
/// `(1,0)`-colorable.
pub fn reduce_k0(instance: &Graph, k: u32, fg: &ForcingGadget) -> Result<ReductionOutput, ReductionError> {
    if k < 2 {
        return Err(ReductionError::Parameters(format!("k must be at least 2, got {k}")));
    }
    let want = ColorSpec::new(vec![k, 0]).unwrap();
    if fg.mode != Mode::Path || fg.spec != want {
        return Err(ReductionError::Parameters(format!(
            "need a path-mode gadget for ({want}), got {} mode for ({})",
            fg.mode, fg.spec
        )));
    }
    let x2 = fg.attach()[0];
    let mut g = host_of(instance, format!("{}-k0", instance.name()));
    let mut trace = Vec::new();
    for s in instance.vertices() {
        for copy in 0..k as usize - 1 {
            let (map, range) = attach_copy(&mut g, &fg.graph, &[])?;
            g.add_edge(map[&x2], s)?;
            trace.push(entry(copy, Element::Vertex(s), range));
        }
    }
    check_size(
        instance,
        &g,
        instance.vertex_count() * (k as usize - 1),
        fg.graph.vertex_count(),
        0,
    );
    Ok(ReductionOutput { graph: g, trace })
}

/// Standard claims about `E_ab`.
pub fn e_ab_manifest() -> &'static str {
    "gadget E_ab\n\
     property exists 1,1 pattern diff(a,b) & unsat(a) & unsat(b)\n\
     property exists 1,1 pattern same(a,b)\n\
     property forall 1,1 pattern same(a,b) => sat(a) & sat(b)\n\
     note the girth bound for planar (1,1) hardness is 5 or 6; both are kept open\n"
}

/// Two copies of a pendant `(1,1)` gadget, with `a` joined to both `u'`
/// and `b` to both `v'`. Its manifest is verified before it is returned.
pub fn build_e_ab(fg: &ForcingGadget, opts: &SolveOptions) -> Result<Gadget, ReductionError> {
    if fg.mode != Mode::Pendant || fg.spec != ColorSpec::new(vec![1, 1]).unwrap() {
        return Err(ReductionError::Parameters(
            "need a pendant-mode gadget for (1,1)".into(),
        ));
    }
    let (up, vp) = (fg.attach()[0], fg.attach()[1]);
    let mut g = Graph::new("E_ab");
    let a = g.add_fresh_vertex();
    let b = g.add_fresh_vertex();
    g.set_terminal("a", a)?;
    g.set_terminal("b", b)?;
    for _ in 0..2 {
        let (map, _) = attach_copy(&mut g, &fg.graph, &[])?;
        g.add_edge(a, map[&up])?;
        g.add_edge(b, map[&vp])?;
    }
    let gadget = assembled("E_ab", g, e_ab_manifest(), format!("two copies of {}", fg.graph.name()))?;
    require_verified(&gadget, opts)?;
    Ok(gadget)
}

fn require_verified(gadget: &Gadget, opts: &SolveOptions) -> Result<(), ReductionError> {
    for (claim, outcome) in verify_manifest(&gadget.graph, &gadget.manifest, opts)? {
        if let Outcome::Refuted { reason, .. } = outcome {
            return Err(ReductionError::Guarantee {
                property: claim.to_string(),
                reason,
            });
        }
    }
    Ok(())
}

fn ab(gadget: &Gadget) -> Result<(Vertex, Vertex), ReductionError> {
    Ok((terminal(&gadget.graph, "a")?, terminal(&gadget.graph, "b")?))
}

/// Replaces every edge `pq` by a copy of `E_ab` with `a = p` and `b = q`.
/// The output is `(1,1)`-colorable iff the input is.
pub fn reduce_11(instance: &Graph, e_ab: &Gadget, opts: &SolveOptions) -> Result<ReductionOutput, ReductionError> {
    require_verified(e_ab, opts)?;
    let (a, b) = ab(e_ab)?;
    let mut g = host_of(instance, format!("{}-11", instance.name()));
    let mut trace = Vec::new();
    for (p, q) in instance.edges() {
        g.remove_edge(p, q);
        let (_, range) = attach_copy(&mut g, &e_ab.graph, &[(a, p), (b, q)])?;
        trace.push(entry(0, Element::Edge(p, q), range));
    }
    check_size(instance, &g, instance.edge_count(), e_ab.graph.vertex_count(), 2);
    Ok(ReductionOutput { graph: g, trace })
}

/// `min(k-1, j)`, the amount by which [`reduce_kj`] lowers both defects.
pub fn kj_shift(k: u32, j: u32) -> u32 {
    (k.saturating_sub(1)).min(j)
}

/// For every vertex `s`, `t = min(k-1, j)` copies of a pendant `(k,j)`
/// gadget with `u'` and `v'` joined to `s`. The input is
/// `(k-t, j-t)`-colorable iff the output is `(k,j)`-colorable.
pub fn reduce_kj(instance: &Graph, k: u32, j: u32, fg: &ForcingGadget) -> Result<ReductionOutput, ReductionError> {
    let t = kj_shift(k, j);
    if j == 0 || j > k || t == 0 {
        return Err(ReductionError::Parameters(format!(
            "need 1 <= j <= k and k >= 2, got ({k},{j})"
        )));
    }
    let want = ColorSpec::new(vec![k, j]).unwrap();
    if fg.mode != Mode::Pendant || fg.spec != want {
        return Err(ReductionError::Parameters(format!(
            "need a pendant-mode gadget for ({want}), got {} mode for ({})",
            fg.mode, fg.spec
        )));
    }
    let attach = fg.attach();
    let mut g = host_of(instance, format!("{}-kj", instance.name()));
    let mut trace = Vec::new();
    for s in instance.vertices() {
        for copy in 0..t as usize {
            let (map, range) = attach_copy(&mut g, &fg.graph, &[])?;
            for &w in &attach {
                g.add_edge(map[&w], s)?;
            }
            trace.push(entry(copy, Element::Vertex(s), range));
        }
    }
    check_size(
        instance,
        &g,
        instance.vertex_count() * t as usize,
        fg.graph.vertex_count(),
        0,
    );
    Ok(ReductionOutput { graph: g, trace })
}

/// Identifies every edge `pq` with the edge `ab` of a copy of `E''`, which
/// must be 3-colorable and claim that `ab` is never monochromatic. A
/// 3-colorable input gives a 3-colorable output, and a non-3-colorable
/// input gives an output with no `(k,k,1)`-coloring.
pub fn reduce_3col(
    instance: &Graph,
    k: u32,
    epp: &Gadget,
    opts: &SolveOptions,
) -> Result<ReductionOutput, ReductionError> {
    if k < 1 {
        return Err(ReductionError::Parameters("k must be at least 1".into()));
    }
    let (a, b) = ab(epp)?;
    if !epp.graph.has_edge(a, b) {
        return Err(ReductionError::Parameters("`a` and `b` must be adjacent".into()));
    }
    let needed = property(&format!("forall {k},{k},1 pattern same(a,b) => false"));
    if !epp
        .manifest
        .claims
        .iter()
        .any(|c| matches!(c, Claim::Property(p) if *p == needed))
    {
        return Err(ReductionError::Guarantee {
            property: needed.to_string(),
            reason: "not claimed by the gadget's manifest".into(),
        });
    }
    require_verified(epp, opts)?;
    if !solve(&epp.graph, &ColorSpec::new(vec![0, 0, 0]).unwrap(), &[], opts)?.is_sat() {
        return Err(ReductionError::Guarantee {
            property: "exists 0,0,0 pattern true".into(),
            reason: "the gadget is not 3-colorable".into(),
        });
    }
    let mut g = host_of(instance, format!("{}-3col", instance.name()));
    let mut trace = Vec::new();
    for (p, q) in instance.edges() {
        let (_, range) = attach_copy(&mut g, &epp.graph, &[(a, p), (b, q)])?;
        trace.push(entry(0, Element::Edge(p, q), range));
    }
    check_size(instance, &g, instance.edge_count(), epp.graph.vertex_count(), 2);
    Ok(ReductionOutput { graph: g, trace })
}
