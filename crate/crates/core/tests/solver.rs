mod common;

use std::collections::BTreeSet;

use common::{all_graphs, colorings, is_colorable, random_graph};
use defcol::graph::{families, Vertex};
use defcol::solver::{
    check_coloring, forced_states, minimize_noncolorable, solve, Assumption, ColorSpec, SolveOptions, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(s: &str) -> ColorSpec {
    s.parse().unwrap()
}

const SPECS: [&str; 6] = ["0,0", "1,0", "1,1", "2,0", "0,0,0", "2,1"];

#[test]
fn agrees_with_enumeration_up_to_five_vertices() {
    let opts = SolveOptions::default();
    for n in 1..=5 {
        for g in all_graphs(n) {
            for s in SPECS {
                let sp = spec(s);
                let v = solve(&g, &sp, &[], &opts).unwrap();
                assert_eq!(v.is_sat(), is_colorable(&g, sp.defects()), "{} under {s}", g.name());
                if let Verdict::Sat(c) = v {
                    assert!(matches!(check_coloring(&g, &sp, &c, &[]), Ok(None)));
                }
            }
        }
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let par = SolveOptions {
        threads: 4,
        ..Default::default()
    };
    for _ in 0..60 {
        let n = rng.gen_range(6..=9);
        let density = rng.gen_range(0.3..0.8);
        let g = random_graph(&mut rng, n, density);
        for s in SPECS {
            let sp = spec(s);
            let a = solve(&g, &sp, &[], &SolveOptions::default()).unwrap();
            let b = solve(&g, &sp, &[], &par).unwrap();
            assert_eq!(a.is_sat(), b.is_sat(), "{} under {s}", g.name());
            if let Verdict::Sat(c) = b {
                assert!(matches!(check_coloring(&g, &sp, &c, &[]), Ok(None)));
            }
        }
    }
}

#[test]
fn forced_states_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..80 {
        let n = rng.gen_range(3..=7);
        let g = random_graph(&mut rng, n, 0.5);
        let s = SPECS[rng.gen_range(0..SPECS.len())];
        let sp = spec(s);
        let q = rng.gen_range(0..n) as Vertex;
        // one assumption with a random budget on another vertex
        let other = (q + 1) % n as Vertex;
        let color = rng.gen_range(0..sp.classes());
        let budget = rng.gen_bool(0.5).then(|| rng.gen_range(0..=sp.defect(color)));
        let assume = [Assumption {
            vertex: other,
            color,
            budget,
        }];
        let got = forced_states(&g, &sp, &assume, q, &SolveOptions::default()).unwrap();
        let verts: Vec<Vertex> = g.vertices().collect();
        let defect = |c: &[usize], v: Vertex| g.neighbors(v).filter(|&u| c[u as usize] == c[v as usize]).count() as u32;
        let want: BTreeSet<(usize, u32)> = colorings(&g, sp.defects())
            .into_iter()
            .filter(|c| c[other as usize] == color && budget.is_none_or(|b| defect(c, other) <= b))
            .map(|c| (c[q as usize], defect(&c, q)))
            .collect();
        assert_eq!(got, want, "{} under {s}, vertex {q}, verts {verts:?}", g.name());
    }
}

#[test]
fn budget_counts_every_neighbor() {
    // the center of a star with budget 0 excludes all leaves from its color
    let g = families::star(3);
    let a = [Assumption {
        vertex: 0,
        color: 0,
        budget: Some(0),
    }];
    let states = forced_states(&g, &spec("1,1"), &a, 1, &SolveOptions::default()).unwrap();
    assert!(states.iter().all(|&(c, _)| c == 1));
}

#[test]
fn invalid_assumptions_are_rejected() {
    let g = families::path(3);
    let sp = spec("1,0");
    let bad_color = [Assumption {
        vertex: 0,
        color: 2,
        budget: None,
    }];
    assert!(solve(&g, &sp, &bad_color, &SolveOptions::default()).is_err());
    let bad_budget = [Assumption {
        vertex: 0,
        color: 1,
        budget: Some(1),
    }];
    assert!(solve(&g, &sp, &bad_budget, &SolveOptions::default()).is_err());
    let unknown = [Assumption {
        vertex: 9,
        color: 0,
        budget: None,
    }];
    assert!(solve(&g, &sp, &unknown, &SolveOptions::default()).is_err());
}

#[test]
fn minimized_graphs_are_minimal() {
    let opts = SolveOptions::default();
    for (g, s) in [
        (families::complete(5), "1,1"),
        (families::wheel(5), "0,0"),
        (families::petersen(), "0,0"),
        (families::complete(4), "1,0"),
    ] {
        let sp = spec(s);
        let h = minimize_noncolorable(&g, &sp, &opts).unwrap();
        assert!(!is_colorable(&h, sp.defects()));
        assert!(h.min_degree().unwrap() >= 2);
        for v in h.vertices() {
            let mut t = h.clone();
            t.remove_vertex(v);
            assert!(is_colorable(&t, sp.defects()));
        }
        for (u, v) in h.edges() {
            let mut t = h.clone();
            t.remove_edge(u, v);
            assert!(is_colorable(&t, sp.defects()));
        }
    }
    assert!(minimize_noncolorable(&families::cycle(6), &spec("0,0"), &opts).is_err());
}
