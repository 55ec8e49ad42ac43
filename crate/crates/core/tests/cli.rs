use std::fs;
use std::path::Path;

use topomapper::cli::run;
use topomapper::MapperGraph;

fn tm(args: &[&str]) -> i32 {
    run(std::iter::once("topomapper").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn graph(p: &Path) -> MapperGraph {
    MapperGraph::from_json(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn simplified_two_peaks_is_a_tree() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let code = tm(&[
        "compute", "--pattern", "two_peaks", "--size", "128", "--slices", "32", "--simplify", "--json", s(&out),
    ]);
    assert_eq!(code, 0);
    let g = graph(&out);
    assert!(g.is_tree());
    assert!(g.leaf_count() >= 2);
}

#[test]
fn ring_image_has_a_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("ring");
    assert_eq!(tm(&["generate", "--pattern", "ring_gradient", "--size", "64", "--out", s(&stem)]), 0);
    let out = dir.path().join("g.json");
    let pgm = stem.with_extension("pgm");
    assert_eq!(tm(&["compute", "--input", s(&pgm), "--slices", "16", "--simplify", "--json", s(&out)]), 0);
    assert!(graph(&out).cycle_rank() >= 1);
}

#[test]
fn bad_arguments_exit_nonzero() {
    assert_ne!(tm(&["compute", "--pattern", "saddle", "--size", "16", "--slices", "0"]), 0);
    assert_ne!(tm(&["compute", "--pattern", "saddle", "--size", "16", "--overlap", "0.7"]), 0);
    assert_ne!(tm(&["compute", "--input", "/nonexistent/field.pgm"]), 0);
    assert_ne!(tm(&["frobnicate"]), 0);
}

#[test]
fn multires_writes_one_graph_per_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let code = tm(&["multires", "--pattern", "saddle", "--size", "64", "--slices", "2,4,8", "--json", s(&out)]);
    assert_eq!(code, 0);
    for n in [2, 4, 8] {
        assert!(dir.path().join(format!("m_{n}.json")).exists());
    }
    assert!(!out.exists());
}

#[test]
fn multires_single_level_and_non_refining_pairs_succeed() {
    assert_eq!(tm(&["multires", "--pattern", "saddle", "--size", "32", "--slices", "4"]), 0);
    assert_eq!(tm(&["multires", "--pattern", "saddle", "--size", "32", "--slices", "3,4"]), 0);
}

#[test]
fn multires_rejects_tree_modes() {
    assert_eq!(tm(&["multires", "--pattern", "saddle", "--size", "16", "--mode", "join"]), 2);
}

#[test]
fn tree_modes_on_smooth_fields() {
    for mode in ["join", "split"] {
        assert_eq!(tm(&["tree", "--pattern", "two_peaks", "--size", "64", "--mode", mode]), 0, "{mode}");
    }
    assert_eq!(tm(&["tree", "--pattern", "saddle", "--size", "63", "--mode", "contour"]), 0);
    // the ring is not a tree, which is reported but not an error
    assert_eq!(tm(&["tree", "--pattern", "ring_gradient", "--size", "32"]), 0);
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for (stem, seed) in [(&a, "4"), (&b, "4"), (&c, "5")] {
        assert_eq!(tm(&["generate", "--pattern", "perlin", "--size", "32", "--seed", seed, "--out", s(stem)]), 0);
    }
    let read = |p: &Path, ext| fs::read(p.with_extension(ext)).unwrap();
    assert_eq!(read(&a, "pgm"), read(&b, "pgm"));
    assert_eq!(read(&a, "csv"), read(&b, "csv"));
    assert_ne!(read(&a, "csv"), read(&c, "csv"));
}

#[test]
fn generate_smallest_size() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("tiny");
    assert_eq!(tm(&["generate", "--pattern", "saddle", "--size", "2", "--out", s(&stem)]), 0);
    let csv = fs::read_to_string(stem.with_extension("csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').count() == 2));
}

#[test]
fn small_bench_writes_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let code = tm(&["bench", "--sizes", "16,32", "--slices", "2,4", "--reps", "1", "--csv", s(&out)]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("pattern,size,slices,mapper_ms,ctree_ms"));
    // 4 patterns x 2 sizes x (2 mapper rows + 1 contour-tree row)
    assert_eq!(lines.count(), 4 * 2 * 3);
}

#[test]
fn bench_size_limit_is_enforced() {
    assert_eq!(tm(&["bench", "--sizes", "64", "--max-size", "32", "--reps", "1"]), 2);
}
