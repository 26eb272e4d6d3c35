mod common;

use common::{all_graphs, brute_girth, brute_mad, graph_from_mask, random_graph};
use defcol::analysis::{compare_order, degeneracy, girth, is_planar, mad, n3, OrderVerdict, Planarity};
use defcol::graph::{families, parse_graph, serialize_graph, Graph, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest minimum degree over induced subgraphs.
fn brute_degeneracy(g: &Graph) -> usize {
    let verts: Vec<Vertex> = g.vertices().collect();
    let mut best = 0;
    for mask in 1u32..1 << verts.len() {
        let inside = |v: Vertex| verts.iter().position(|&w| w == v).is_some_and(|i| mask >> i & 1 == 1);
        let min = verts
            .iter()
            .filter(|&&v| inside(v))
            .map(|&v| g.neighbors(v).filter(|&u| inside(u)).count())
            .min()
            .unwrap();
        best = best.max(min);
    }
    best
}

#[test]
fn girth_and_degeneracy_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..150 {
        let n = rng.gen_range(2..=10);
        let density = rng.gen_range(0.1..0.7);
        let g = random_graph(&mut rng, n, density);
        assert_eq!(girth(&g).length(), brute_girth(&g), "{}", g.name());
        let d = degeneracy(&g);
        assert_eq!(d.value, brute_degeneracy(&g), "{}", g.name());
        assert!(d.check(&g));
    }
}

#[test]
fn mad_matches_subset_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let n = rng.gen_range(1..=10);
        let density = rng.gen_range(0.1..0.9);
        let g = random_graph(&mut rng, n, density);
        let r = mad(&g);
        assert_eq!(r.mad, brute_mad(&g), "{}", g.name());
        // the witness attains the value
        let w: std::collections::BTreeSet<Vertex> = r.witness.iter().copied().collect();
        let h = g.induced(&w);
        assert_eq!(
            num_rational::Ratio::new(2 * h.edge_count() as i64, h.vertex_count() as i64),
            r.mad
        );
    }
}

#[test]
fn planarity_certificates_check_out() {
    let mut nonplanar = 0;
    for g in all_graphs(6).step_by(7) {
        match is_planar(&g) {
            Planarity::Planar(e) => assert!(e.check(&g), "{}", g.name()),
            Planarity::NonPlanar { kuratowski } => {
                nonplanar += 1;
                assert!(defcol::analysis::is_kuratowski_subdivision(&kuratowski));
                assert!(kuratowski.iter().all(|&(u, v)| g.has_edge(u, v)));
            }
        }
    }
    assert!(nonplanar > 0);
    assert!(!is_planar(&families::complete(5)).is_planar());
    assert!(!is_planar(&families::complete_bipartite(3, 3)).is_planar());
    assert!(!is_planar(&families::petersen()).is_planar());
    assert!(is_planar(&families::icosahedron()).is_planar());
}

#[test]
fn order_compares_n3_first() {
    let c5 = families::cycle(5);
    let k4 = families::complete(4);
    assert_eq!(n3(&c5), 0);
    assert_eq!(n3(&k4), 4);
    assert_eq!(compare_order(&c5, &k4), OrderVerdict::Precedes);
    assert_eq!(compare_order(&k4, &c5), OrderVerdict::Succeeds);
    assert_eq!(compare_order(&c5, &c5), OrderVerdict::Equal);
    assert_eq!(
        compare_order(&families::cycle(4), &families::path(4)),
        OrderVerdict::Incomparable
    );
}

proptest! {
    #[test]
    fn serialization_round_trips(n in 1usize..9, mask in any::<u64>(), name in "[a-z][a-z0-9_]{0,8}") {
        let pairs = n * (n - 1) / 2;
        let mask = if pairs == 0 { 0 } else { mask & ((1u64 << pairs) - 1) };
        let mut g = graph_from_mask(n, mask);
        g.set_name(name);
        g.set_terminal("x", 0).unwrap();
        let text = serialize_graph(&g);
        let back = parse_graph(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_graph(&back), text);
    }

    #[test]
    fn garbage_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse_graph(&bytes);
    }
}
