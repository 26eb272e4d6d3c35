//! Constructors for the forcing gadgets and the non-colorable graphs built
//! from them. Each gadget carries a manifest of the facts it is supposed to
//! satisfy; [`Gadget::check`] verifies them all.

mod template;

pub use template::{parse_template, TemplateError, MAX_TEMPLATE_VERTICES};

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{families, parse_graph, Graph, GraphError, ParseError, Vertex};
use crate::solver::SolveOptions;
use crate::verify::{parse_manifest, verify_manifest, Claim, Manifest, ManifestError, Outcome, VerifyError};

pub const H31_GRAPH: &str = include_str!("../../data/h31.graph");
pub const H31_MANIFEST: &str = include_str!("../../data/h31.manifest");
pub const T_GRAPH: &str = include_str!("../../data/t.graph");
pub const T_MANIFEST: &str = include_str!("../../data/t.manifest");
pub const S7_GRAPH: &str = include_str!("../../data/s7.graph");
pub const S7_MANIFEST: &str = include_str!("../../data/s7.manifest");
pub const E_TEMPLATE: &str = include_str!("../../data/e.template");

/// Replay scripts for the arguments too large to check in one solve, by
/// name. The gadgets they mention are those of [`catalog`].
pub const REPLAYS: [(&str, &str); 4] = [
    ("s7-chain", include_str!("../../data/s7-chain.replay")),
    ("g7-endgame", include_str!("../../data/g7-endgame.replay")),
    ("g5", include_str!("../../data/g5.replay")),
    ("epp", include_str!("../../data/epp.replay")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub name: String,
    pub graph: Graph,
    pub manifest: Manifest,
    /// Where the adjacency comes from.
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("parameters ({k},{j}) not supported: {reason}")]
    Parameters { k: u32, j: u32, reason: &'static str },
    #[error("data file {file}: {source}")]
    Data { file: &'static str, source: ParseError },
    #[error("data file {file}: missing `provenance:` line")]
    Provenance { file: &'static str },
    #[error("template: {0}")]
    Template(#[from] TemplateError),
    #[error("manifest: {0}")]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn provenance(file: &'static str, text: &str) -> Result<String, GadgetError> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("provenance:"))
        .map(|s| format!("{file}: {}", s.trim()))
        .ok_or(GadgetError::Provenance { file })
}

fn from_data(name: &str, file: &'static str, graph: &str, manifest: &str) -> Result<Gadget, GadgetError> {
    let g = parse_graph(graph.as_bytes()).map_err(|source| GadgetError::Data { file, source })?;
    let manifest = parse_manifest(manifest)?;
    manifest.bind(&g)?;
    Ok(Gadget {
        name: name.to_string(),
        provenance: provenance(file, graph)?,
        graph: g,
        manifest,
    })
}

pub(crate) fn assembled(name: &str, graph: Graph, manifest: &str, provenance: String) -> Result<Gadget, GadgetError> {
    let manifest = parse_manifest(manifest)?;
    manifest.bind(&graph)?;
    Ok(Gadget {
        name: name.to_string(),
        graph,
        manifest,
        provenance,
    })
}

impl Gadget {
    /// Bundles `graph` with the claims in `manifest` (manifest text), which
    /// must only mention terminals of `graph`. Nothing is verified yet.
    pub fn new(name: &str, graph: Graph, manifest: &str, provenance: impl Into<String>) -> Result<Self, GadgetError> {
        assembled(name, graph, manifest, provenance.into())
    }

    /// Verifies every manifest claim.
    pub fn check(&self, opts: &SolveOptions) -> Result<Vec<(Claim, Outcome)>, VerifyError> {
        verify_manifest(&self.graph, &self.manifest, opts)
    }

    /// Name of a vertex: a terminal if it has one, else its id.
    pub fn label(&self, v: Vertex) -> String {
        self.graph
            .names_of(v)
            .next()
            .map_or_else(|| v.to_string(), str::to_string)
    }
}

/// `K_{2,k+j+1}` with terminals `x`, `y` on the two-vertex side and the
/// others named `h1, h2, …`.
pub fn gadget_h_kj(k: u32, j: u32) -> Gadget {
    let n = (k + j + 1) as usize;
    let mut g = families::complete_bipartite(2, n);
    g.set_name(format!("H{k},{j}"));
    g.set_terminal("x", 0).unwrap();
    g.set_terminal("y", 1).unwrap();
    for i in 0..n {
        g.set_terminal(format!("h{}", i + 1), 2 + i as Vertex).unwrap();
    }
    let mut m = format!("gadget H{k},{j}\nproperty same-color {k},{j} x y\nplanar\n");
    m.push_str(if n >= 2 { "girth 4\n" } else { "girth infinite\n" });
    assembled(&format!("H{k},{j}"), g, &m, "complete bipartite graph".into()).unwrap()
}

/// A vertex `u` and a star on `v1..v_{k+2}` (center `v1`), with a copy of
/// `H_{k,j}` between `u` and every `v_i`. For `k < j` the construction for
/// `(j,k)` is used, which is the same up to swapping the classes.
pub fn gadget_g4(k: u32, j: u32) -> Result<Gadget, GadgetError> {
    if k == 0 && j == 0 {
        return Err(GadgetError::Parameters {
            k,
            j,
            reason: "k + j must be positive",
        });
    }
    let (hi, lo) = (k.max(j), k.min(j));
    let h = gadget_h_kj(hi, lo).graph;
    let mut g = Graph::new(format!("G4({k},{j})"));
    let u = g.add_fresh_vertex();
    g.set_terminal("u", u)?;
    let vs: Vec<Vertex> = (0..hi + 2).map(|_| g.add_fresh_vertex()).collect();
    for (i, &v) in vs.iter().enumerate() {
        g.set_terminal(format!("v{}", i + 1), v)?;
        if i > 0 {
            g.add_edge(vs[0], v)?;
        }
    }
    for (i, &v) in vs.iter().enumerate() {
        let (x, y) = (h.resolve("x")?, h.resolve("y")?);
        g.glue(&h, &format!("copy{}", i + 1), &[(x, u), (y, v)])?;
    }
    let m = format!("gadget G4\nproperty noncolorable {k},{j}\ngirth 4\ndegeneracy 2\nplanar\n");
    assembled(&format!("G4({k},{j})"), g, &m, "assembled from H and a star".into())
}

pub fn gadget_h31() -> Result<Gadget, GadgetError> {
    from_data("H31", "h31.graph", H31_GRAPH, H31_MANIFEST)
}

/// `H31`, then `S` (a vertex `z` and a path `r s t`, with seven copies of
/// `H31` from `z` to each of `r`, `s`, `t`), then three copies of `S` with
/// the edges `z1 z2` and `z2 z3`.
pub fn gadget_g5() -> Result<(Gadget, Gadget, Gadget), GadgetError> {
    let h = gadget_h31()?;
    let (hx, hy) = (h.graph.resolve("x")?, h.graph.resolve("y")?);
    let mut s = Graph::new("S_zrst");
    let z = s.add_fresh_vertex();
    let rst: Vec<Vertex> = (0..3).map(|_| s.add_fresh_vertex()).collect();
    s.set_terminal("z", z)?;
    for (name, &v) in ["r", "s", "t"].iter().zip(&rst) {
        s.set_terminal(*name, v)?;
    }
    s.add_edge(rst[0], rst[1])?;
    s.add_edge(rst[1], rst[2])?;
    let mut copy = 0;
    for &end in &rst {
        for _ in 0..7 {
            copy += 1;
            s.glue(&h.graph, &format!("copy{copy}"), &[(hx, z), (hy, end)])?;
        }
    }
    let s_manifest = "gadget S_zrst\n\
        property forall 3,1 pattern true => color(z,2)\n\
        girth 5\n\
        degeneracy 2\n\
        planar\n";
    let sg = assembled("S_zrst", s, s_manifest, "assembled from 21 copies of H31".into())?;

    let mut g = Graph::new("G5");
    let mut zs = Vec::new();
    for i in 1..=3 {
        let map = g.disjoint_union(&sg.graph, &format!("S{i}"));
        let zi = map[&sg.graph.resolve("z")?];
        g.set_terminal(format!("z{i}"), zi)?;
        zs.push(zi);
    }
    g.add_edge(zs[0], zs[1])?;
    g.add_edge(zs[1], zs[2])?;
    let g_manifest = "gadget G5\n\
        property noncolorable 3,1\n\
        girth 5\n\
        degeneracy 2\n\
        planar\n\
        note 2-outerplanarity is not checked\n";
    let g5 = assembled("G5", g, g_manifest, "three copies of S_zrst joined by a path".into())?;
    Ok((h, sg, g5))
}

pub fn gadget_t() -> Result<Gadget, GadgetError> {
    from_data("T", "t.graph", T_GRAPH, T_MANIFEST)
}

pub fn gadget_s7() -> Result<Gadget, GadgetError> {
    from_data("S7", "s7.graph", S7_GRAPH, S7_MANIFEST)
}

/// `T`, `S`, then `Hz` (a vertex `z` joined to a 7-cycle `v1..v7` by paths
/// `z p_i p_i' v_i`, with a copy of `S` in each face), then `G7` (an edge
/// `uv` with three copies of `Hz` at `u` and three at `v`).
pub fn gadget_g7() -> Result<(Gadget, Gadget, Gadget, Gadget), GadgetError> {
    let t = gadget_t()?;
    let s = gadget_s7()?;
    let sv = |n: &str| s.graph.resolve(n);

    let mut hz = Graph::new("Hz");
    let z = hz.add_fresh_vertex();
    hz.set_terminal("z", z)?;
    let mut p = Vec::new();
    let mut pp = Vec::new();
    let mut v = Vec::new();
    for i in 1..=7 {
        let (a, b, c) = (hz.add_fresh_vertex(), hz.add_fresh_vertex(), hz.add_fresh_vertex());
        hz.set_terminal(format!("p{i}"), a)?;
        hz.set_terminal(format!("p{i}'"), b)?;
        hz.set_terminal(format!("v{i}"), c)?;
        hz.add_edge(z, a)?;
        hz.add_edge(a, b)?;
        hz.add_edge(b, c)?;
        p.push(a);
        pp.push(b);
        v.push(c);
    }
    for i in 0..7 {
        hz.add_edge(v[i], v[(i + 1) % 7])?;
    }
    for i in 0..7 {
        let n = (i + 1) % 7;
        let boundary = [
            (sv("a")?, z),
            (sv("b")?, p[i]),
            (sv("c")?, pp[i]),
            (sv("d")?, v[i]),
            (sv("e")?, v[n]),
            (sv("f")?, pp[n]),
            (sv("g")?, p[n]),
        ];
        hz.glue(&s.graph, &format!("F{}", i + 1), &boundary)?;
    }
    let hz_manifest = "gadget Hz\n\
        property unextendable 2,0 assume z=1:0\n\
        girth 7\n\
        planar\n";
    let hz = assembled("Hz", hz, hz_manifest, "assembled from seven copies of S7".into())?;

    let mut g = Graph::new("G7");
    let u = g.add_fresh_vertex();
    let w = g.add_fresh_vertex();
    g.set_terminal("u", u)?;
    g.set_terminal("v", w)?;
    g.add_edge(u, w)?;
    let hzv = hz.graph.resolve("z")?;
    for i in 1..=6 {
        let host = if i <= 3 { u } else { w };
        g.glue(&hz.graph, &format!("H{i}"), &[(hzv, host)])?;
    }
    let g_manifest = "gadget G7\nproperty noncolorable 2,0\ngirth 7\nplanar\n";
    let g7 = assembled("G7", g, g_manifest, "an edge with six copies of Hz".into())?;
    Ok((t, s, hz, g7))
}

/// Top x-index of `E` for parameter `k`: `3k+3+t`, made even by `t`.
pub fn e_top_index(k: u32) -> i64 {
    let k = k as i64;
    3 * k + 3 + if k % 2 == 0 { 1 } else { 0 }
}

/// The pattern of the proper 3-coloring of one copy of `E` whose vertex
/// names carry `prefix`: `a` and even `x_i` share a color, `b` and even
/// `y_i` share another, odd indices take the third.
pub fn e_pattern(k: u32, prefix: &str, a: &str, b: &str) -> String {
    let n = e_top_index(k);
    let mut parts = vec![
        format!("diff({a},{b})"),
        format!("diff({a},{prefix}x1)"),
        format!("diff({b},{prefix}x1)"),
    ];
    for i in 0..=n {
        let class = if i % 2 == 0 {
            a.to_string()
        } else {
            format!("{prefix}x1")
        };
        parts.push(format!("same({class},{prefix}x{i})"));
    }
    for i in 0..=2 * n {
        let class = if i % 2 == 0 {
            b.to_string()
        } else {
            format!("{prefix}x1")
        };
        parts.push(format!("same({class},{prefix}y{i})"));
    }
    parts.join(" & ")
}

/// `E`, `E'` (`2k-1` copies of `E` sharing the edge `ab`) and `E''` (four
/// copies of `E'`, three of them glued on the edges of the triangle
/// `y0 x0 x1` in the first copy of `E` inside the first `E'`).
pub fn gadget_e_family(k: u32) -> Result<(Gadget, Gadget, Gadget), GadgetError> {
    if k < 1 {
        return Err(GadgetError::Parameters {
            k,
            j: k,
            reason: "k must be at least 1",
        });
    }
    let n = e_top_index(k);
    let mut e = parse_template(E_TEMPLATE, n)?;
    e.set_name(format!("E({k})"));
    let prov = provenance("e.template", E_TEMPLATE)?;
    let mut em = format!(
        "gadget E\nproperty exists 0,0,0 pattern {}\n",
        e_pattern(k, "", "a", "b")
    );
    let _ = writeln!(
        em,
        "property forall 0,0,0 pattern true => {}",
        e_pattern(k, "", "a", "b")
    );
    em.push_str("planar\n");
    let e = assembled("E", e, &em, prov.clone())?;

    let (ea, eb) = (e.graph.resolve("a")?, e.graph.resolve("b")?);
    let mut ep = Graph::new(format!("E'({k})"));
    let a = ep.add_fresh_vertex();
    let b = ep.add_fresh_vertex();
    ep.set_terminal("a", a)?;
    ep.set_terminal("b", b)?;
    for c in 1..=2 * k - 1 {
        ep.glue(&e.graph, &format!("c{c}"), &[(ea, a), (eb, b)])?;
    }
    let epm = format!(
        "gadget Eprime\n\
         property unextendable {k},{k},1 assume a=1,b=1\n\
         property unextendable {k},{k},1 assume a=2,b=2\n\
         planar\n"
    );
    let ep = assembled("Eprime", ep, &epm, prov.clone())?;

    let mut epp = Graph::new(format!("E''({k})"));
    let a = epp.add_fresh_vertex();
    let b = epp.add_fresh_vertex();
    epp.set_terminal("a", a)?;
    epp.set_terminal("b", b)?;
    let (pa, pb) = (ep.graph.resolve("a")?, ep.graph.resolve("b")?);
    epp.glue(&ep.graph, "P1", &[(pa, a), (pb, b)])?;
    let tri = |n: &str| epp.resolve(&format!("P1/c1/{n}"));
    let (y0, x0, x1) = (tri("y0")?, tri("x0")?, tri("x1")?);
    for (i, (s, t)) in [(y0, x0), (y0, x1), (x0, x1)].into_iter().enumerate() {
        epp.glue(&ep.graph, &format!("P{}", i + 2), &[(pa, s), (pb, t)])?;
    }
    let eppm = format!(
        "gadget Epp\n\
         property exists 0,0,0 pattern {}\n\
         property forall {k},{k},1 pattern same(a,b) => false\n\
         planar\n",
        e_pattern(k, "P1/c1/", "a", "b")
    );
    let epp = assembled("Epp", epp, &eppm, prov)?;
    Ok((e, ep, epp))
}

/// Every constructed gadget by name, for replay scripts.
pub fn catalog() -> Result<std::collections::BTreeMap<String, Graph>, GadgetError> {
    let mut out = std::collections::BTreeMap::new();
    let (h31, s, g5) = gadget_g5()?;
    let (t, s7, hz, g7) = gadget_g7()?;
    let (e, ep, epp) = gadget_e_family(1)?;
    for gd in [h31, s, g5, t, s7, hz, g7, e, ep, epp] {
        out.insert(gd.name.clone(), gd.graph);
    }
    Ok(out)
}
