mod common;

use std::path::Path;
use std::process::Command;

use common::valid_coloring;
use defcol::graph::{families, parse_graph, serialize_graph};
use defcol::solver::Coloring;
use defcol::verify::parse_manifest;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_defcol"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write_graph(dir: &Path, name: &str, g: &defcol::graph::Graph) {
    std::fs::write(dir.join(name), serialize_graph(g)).unwrap();
}

#[test]
fn solve_prints_a_valid_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = families::cycle(5);
    write_graph(dir.path(), "c5.graph", &c5);
    let r = run(dir.path(), &["solve", "--spec", "1,0", "c5.graph"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("sat"));
    let mut c = Coloring::default();
    for l in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        assert_eq!(f[0], "v");
        let (v, color, defect): (u32, usize, u32) =
            (f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap());
        c.0.insert(v, color - 1);
        assert!(defect <= 1);
    }
    assert!(valid_coloring(&c5, &[1, 0], &c));

    let r = run(dir.path(), &["solve", "--spec", "0,0", "c5.graph"]);
    assert_eq!((r.code, r.stdout.trim()), (1, "unsat"));
}

#[test]
fn forced_lists_states() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "p3.graph", &families::path(3));
    let r = run(
        dir.path(),
        &[
            "solve", "--spec", "1,0", "--assume", "v0=2", "--forced", "v1", "p3.graph",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines, ["states v1 2", "state 1 0", "state 1 1"]);
}

#[test]
fn generated_files_read_back_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(dir.path(), &["gen", "--family", "g4", "--k", "1", "--j", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for stem in ["G4_1_0", "H1_0"] {
        let g = std::fs::read_to_string(dir.path().join(format!("{stem}.graph"))).unwrap();
        assert!(g.lines().any(|l| l.starts_with("# provenance:")));
        let graph = parse_graph(g.as_bytes()).unwrap();
        let m = parse_manifest(&std::fs::read_to_string(dir.path().join(format!("{stem}.manifest"))).unwrap()).unwrap();
        m.bind(&graph).unwrap();
    }
    let r = run(dir.path(), &["solve", "--spec", "1,0", "G4_1_0.graph"]);
    assert_eq!((r.code, r.stdout.trim()), (1, "unsat"));
    let r = run(dir.path(), &["verify", "G4_1_0.graph", "G4_1_0.manifest"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.lines().all(|l| l.starts_with("verified")), "{}", r.stdout);

    // a false claim is refuted
    std::fs::write(
        dir.path().join("bad.manifest"),
        "gadget G4\nproperty noncolorable 2,0\n",
    )
    .unwrap();
    let r = run(dir.path(), &["verify", "G4_1_0.graph", "bad.manifest"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("refuted"));
}

#[test]
fn analyze_reports_every_invariant() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "k4.graph", &families::complete(4));
    let r = run(dir.path(), &["analyze", "k4.graph"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout.lines().collect::<Vec<_>>(),
        [
            "vertices 4",
            "edges 6",
            "girth 3",
            "mad 3",
            "degeneracy 3",
            "n3 4",
            "planar true"
        ]
    );
}

#[test]
fn reduce_writes_graph_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let mut k3 = families::complete(3);
    k3.clear_terminals();
    write_graph(dir.path(), "k3.graph", &k3);
    assert_eq!(run(dir.path(), &["gen", "--family", "Epp", "--k", "1"]).code, 0);
    let r = run(
        dir.path(),
        &[
            "reduce",
            "--which",
            "3col",
            "--k",
            "1",
            "--gadget",
            "Epp.graph",
            "--out",
            "r.graph",
            "k3.graph",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let out = parse_graph(&std::fs::read(dir.path().join("r.graph")).unwrap()).unwrap();
    let trace = defcol::reductions::parse_trace(&std::fs::read_to_string(dir.path().join("r.trace")).unwrap());
    assert_eq!(trace.unwrap().len(), 3);
    assert!(out.vertex_count() > 3);
    let r = run(dir.path(), &["solve", "--spec", "1,1,1", "r.graph"]);
    assert_eq!(r.code, 0);
}

#[test]
fn minimize_shrinks_to_a_critical_graph() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "w5.graph", &families::wheel(5));
    let r = run(dir.path(), &["minimize", "--spec", "0,0", "w5.graph"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let g = parse_graph(r.stdout.as_bytes()).unwrap();
    assert_eq!((g.vertex_count(), g.edge_count()), (3, 3));
    write_graph(dir.path(), "c4.graph", &families::cycle(4));
    assert_eq!(run(dir.path(), &["minimize", "--spec", "0,0", "c4.graph"]).code, 1);
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    write_graph(dir.path(), "p2.graph", &families::path(2));
    assert_eq!(run(dir.path(), &["solve", "--spec", "x", "p2.graph"]).code, 2);
    assert_eq!(run(dir.path(), &["solve", "--spec", "1,0", "missing.graph"]).code, 2);
    assert_eq!(
        run(dir.path(), &["solve", "--spec", "1,0", "--assume", "v0=3", "p2.graph"]).code,
        2
    );
    assert_eq!(run(dir.path(), &["frobnicate"]).code, 2);
    std::fs::write(dir.path().join("junk.graph"), "graph g\ne 0 1\n").unwrap();
    let r = run(dir.path(), &["analyze", "junk.graph"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line"), "{}", r.stderr);

    assert_eq!(run(dir.path(), &["gen", "--family", "g7"]).code, 0);
    let r = run(dir.path(), &["solve", "--spec", "2,0", "--timeout", "50", "G7.graph"]);
    assert_eq!(r.code, 3, "{}{}", r.stdout, r.stderr);
}
