mod common;

use std::collections::BTreeSet;

use common::{brute_girth, is_colorable, valid_coloring};
use defcol::gadgets::{gadget_e_family, gadget_g4, Gadget};
use defcol::graph::{families, Graph, Vertex};
use defcol::reductions::{
    build_e_ab, derive_forcing_gadget, e_ab_manifest, find_mock_edge_gadget, find_mock_gadget, kj_shift, parse_trace,
    reduce_11, reduce_3col, reduce_k0, reduce_kj, Element, ForcingGadget, Mode, ReductionError, ReductionOutput,
};
use defcol::solver::{minimize_noncolorable, solve, ColorSpec, SolveOptions};
use defcol::verify::{parse_manifest, parse_property, search_gadget, verify_property, Claim, Outcome};

fn spec(s: &str) -> ColorSpec {
    s.parse().unwrap()
}

fn inputs() -> Vec<Graph> {
    let mut out = vec![
        families::path(2),
        families::path(4),
        families::complete(3),
        families::cycle(5),
        families::complete(4),
    ];
    for g in &mut out {
        g.clear_terminals();
    }
    out
}

fn mock(s: &str, mode: Mode) -> ForcingGadget {
    find_mock_gadget(&spec(s), mode, 12, &SolveOptions::default()).unwrap()
}

fn output_colorable(out: &ReductionOutput, s: &str) -> bool {
    let sp = spec(s);
    let v = solve(&out.graph, &sp, &[], &SolveOptions::default()).unwrap();
    if let defcol::solver::Verdict::Sat(c) = &v {
        assert!(valid_coloring(&out.graph, sp.defects(), c));
    }
    v.is_sat()
}

/// The trace accounts for every new vertex exactly once, in contiguous
/// blocks, and survives its text form.
fn check_trace(input: &Graph, out: &ReductionOutput, per_copy: usize) {
    let mut seen = BTreeSet::new();
    for e in &out.trace {
        let (lo, hi) = e.vertices.expect("every copy adds vertices");
        assert_eq!((hi - lo + 1) as usize, per_copy);
        for v in lo..=hi {
            assert!(!input.contains(v));
            assert!(seen.insert(v), "vertex {v} in two copies");
        }
        match e.element {
            Element::Vertex(v) => assert!(input.contains(v)),
            Element::Edge(u, v) => assert!(input.has_edge(u, v)),
        }
    }
    let new: BTreeSet<Vertex> = out.graph.vertices().filter(|&v| !input.contains(v)).collect();
    assert_eq!(seen, new);
    assert_eq!(parse_trace(&out.trace_text()).unwrap(), out.trace);
}

#[test]
fn k0_matches_proper_two_coloring_with_one_defect_class() {
    let fg = mock("2,0", Mode::Path);
    for g in inputs() {
        let out = reduce_k0(&g, 2, &fg).unwrap();
        assert_eq!(output_colorable(&out, "2,0"), is_colorable(&g, &[1, 0]), "{}", g.name());
        check_trace(&g, &out, fg.graph().vertex_count());
        assert_eq!(out.trace.len(), g.vertex_count());
        assert_eq!(reduce_k0(&g, 2, &fg).unwrap(), out, "not deterministic");
    }
}

#[test]
fn eleven_is_preserved_by_edge_gadgets() {
    let opts = SolveOptions::default();
    let e_ab = build_e_ab(&mock("1,1", Mode::Pendant), &opts).unwrap();
    assert_eq!(
        e_ab.graph.vertex_count(),
        2 + 2 * mock("1,1", Mode::Pendant).graph().vertex_count()
    );
    for g in inputs() {
        let out = reduce_11(&g, &e_ab, &opts).unwrap();
        assert_eq!(output_colorable(&out, "1,1"), is_colorable(&g, &[1, 1]), "{}", g.name());
        check_trace(&g, &out, e_ab.graph.vertex_count() - 2);
        // input edges are replaced, not kept
        assert!(g.edges().all(|(u, v)| !out.graph.has_edge(u, v)));
    }
}

#[test]
fn kj_lowers_both_defects() {
    for (k, j) in [(2, 1), (2, 2)] {
        let s = format!("{k},{j}");
        let fg = mock(&s, Mode::Pendant);
        let t = kj_shift(k, j);
        assert_eq!(t, 1);
        for g in inputs() {
            let out = reduce_kj(&g, k, j, &fg).unwrap();
            assert_eq!(
                output_colorable(&out, &s),
                is_colorable(&g, &[k - t, j - t]),
                "{} under ({s})",
                g.name()
            );
            check_trace(&g, &out, fg.graph().vertex_count());
            assert_eq!(
                out.graph.vertex_count(),
                g.vertex_count() * (1 + t as usize * fg.graph().vertex_count())
            );
        }
    }
}

#[test]
fn three_coloring_reduces_to_k_k_1() {
    let opts = SolveOptions::default();
    let (_, _, epp) = gadget_e_family(1).unwrap();
    for g in inputs() {
        let out = reduce_3col(&g, 1, &epp, &opts).unwrap();
        let three = is_colorable(&g, &[0, 0, 0]);
        assert_eq!(output_colorable(&out, "1,1,1"), three, "{}", g.name());
        if three {
            assert!(output_colorable(&out, "0,0,0"));
        }
        check_trace(&g, &out, epp.graph.vertex_count() - 2);
        // input edges are kept
        assert!(g.edges().all(|(u, v)| out.graph.has_edge(u, v)));
    }
}

#[test]
fn three_coloring_with_a_searched_edge_gadget() {
    let opts = SolveOptions::default();
    let mock = find_mock_edge_gadget(1, 12, &opts).unwrap();
    assert!(mock.graph.vertex_count() <= 12);
    // both claims by enumeration
    for p in mock.manifest.properties() {
        assert!(common::Oracle::new(&mock.graph).check(p), "{p}");
    }
    for g in inputs() {
        let out = reduce_3col(&g, 1, &mock, &opts).unwrap();
        assert_eq!(
            output_colorable(&out, "1,1,1"),
            is_colorable(&g, &[0, 0, 0]),
            "{}",
            g.name()
        );
        check_trace(&g, &out, mock.graph.vertex_count() - 2);
    }
}

#[test]
fn girth_is_the_smaller_of_input_and_gadget() {
    let opts = SolveOptions::default();
    let g4 = gadget_g4(2, 0).unwrap();
    let mut minimal = minimize_noncolorable(&g4.graph, &spec("2,0"), &opts).unwrap();
    minimal.clear_terminals();
    let fg = derive_forcing_gadget(&minimal, &spec("2,0"), Mode::Path, &opts).unwrap();
    let gadget_girth = brute_girth(fg.graph()).unwrap();
    let mut c5 = families::cycle(5);
    c5.clear_terminals();
    let out = reduce_k0(&c5, 2, &fg).unwrap();
    assert_eq!(brute_girth(&out.graph), Some(gadget_girth.min(5)));

    let (_, _, epp) = gadget_e_family(1).unwrap();
    let out = reduce_3col(&c5, 1, &epp, &opts).unwrap();
    assert_eq!(brute_girth(&out.graph), Some(brute_girth(&epp.graph).unwrap().min(5)));
}

#[test]
fn guarantees_are_rechecked() {
    let opts = SolveOptions::default();
    // a graph with a same-colored pair that is not saturated violates the
    // third E_ab claim, and the verifier says so with a certificate
    let p = parse_property("exists 1,1 pattern same(a,b) & unsat(a)", 1).unwrap();
    let g = search_gadget(p.spec(), &p, 6).unwrap();
    let m = parse_manifest(e_ab_manifest()).unwrap();
    let third = m.properties().nth(2).unwrap();
    match verify_property(&g, third, &opts).unwrap() {
        Outcome::Refuted {
            counterexample: Some(c),
            ..
        } => {
            assert!(valid_coloring(&g, &[1, 1], &c));
            let (a, b) = (g.resolve("a").unwrap(), g.resolve("b").unwrap());
            assert_eq!(c.get(a), c.get(b));
        }
        other => panic!("{other:?}"),
    }
    let fake = Gadget::new("E_ab", g, e_ab_manifest(), "search").unwrap();
    assert!(matches!(
        reduce_11(&families::path(2), &fake, &opts),
        Err(ReductionError::Guarantee { .. })
    ));

    // E' does not claim the edge property
    let (_, ep, _) = gadget_e_family(1).unwrap();
    assert!(ep
        .manifest
        .claims
        .iter()
        .all(|c| !matches!(c, Claim::Property(p) if p.kind() == "forall")));
    assert!(reduce_3col(&families::path(2), 1, &ep, &opts).is_err());
}

#[test]
fn parameters_are_validated() {
    let path = mock("2,0", Mode::Path);
    let pend = mock("2,1", Mode::Pendant);
    let p2 = families::path(2);
    assert!(matches!(reduce_k0(&p2, 1, &path), Err(ReductionError::Parameters(_))));
    assert!(matches!(reduce_k0(&p2, 3, &path), Err(ReductionError::Parameters(_))));
    assert!(matches!(reduce_k0(&p2, 2, &pend), Err(ReductionError::Parameters(_))));
    assert!(matches!(
        reduce_kj(&p2, 2, 0, &pend),
        Err(ReductionError::Parameters(_))
    ));
    assert!(matches!(
        reduce_kj(&p2, 1, 2, &pend),
        Err(ReductionError::Parameters(_))
    ));
    assert!(matches!(
        reduce_kj(&p2, 1, 1, &pend),
        Err(ReductionError::Parameters(_))
    ));
    assert!(matches!(
        reduce_kj(&p2, 2, 2, &pend),
        Err(ReductionError::Parameters(_))
    ));
    assert!(build_e_ab(&pend, &SolveOptions::default()).is_err());
    let (_, _, epp) = gadget_e_family(1).unwrap();
    assert!(reduce_3col(&p2, 0, &epp, &SolveOptions::default()).is_err());
    // the manifest is for k = 1 only
    assert!(reduce_3col(&p2, 2, &epp, &SolveOptions::default()).is_err());
}
