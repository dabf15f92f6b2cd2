use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::orders::thread_completion;

const R_IN_BETWEEN: &str = "vertex a b c d e\narrow a b\narrow a c\narrow a d\narrow b c\narrow b e\narrow d c\narrow d e\n";

/// Independent path count by explicit DFS enumeration.
fn dfs_paths(q: &Quiver, x: usize, y: usize) -> u128 {
    if x == y {
        return 1;
    }
    q.arrows().iter().filter(|a| a.src == x).map(|a| dfs_paths(q, a.dst, y)).sum()
}

#[test]
fn parse_thread_arrow() {
    let tq = parse("vertex x y\nthread x y fin(1)").unwrap();
    assert_eq!(tq.threads.len(), 1);
    assert_eq!(tq.threads[0].label, LinearOrder::Fin(1));
    assert!(tq.arrows.is_empty());
}

#[test]
fn parse_parallel_arrows() {
    let tq = parse("vertex a b\narrow a b\narrow a b").unwrap();
    assert_eq!(tq.arrows.len(), 2);
    assert_ne!(tq.arrows[0].id, tq.arrows[1].id);
}

#[test]
fn parse_unknown_vertex() {
    assert_eq!(parse("vertex a\narrow a z"), Err(QuiverError::UnknownVertex("z".into())));
}

#[test]
fn parse_errors_carry_positions() {
    match parse("vertex a b\n  bogus a b") {
        Err(QuiverError::Syntax { line: 2, column: 3, .. }) => {}
        other => panic!("{other:?}"),
    }
    match parse("vertex a b\nthread a b (N . ") {
        Err(QuiverError::Syntax { line: 2, .. }) => {}
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse("vertex a a"), Err(QuiverError::DuplicateId(_))));
    assert!(matches!(
        parse("vertex a b\narrow a b id=x\narrow b a id=x"),
        Err(QuiverError::DuplicateId(_))
    ));
}

#[test]
fn auto_ids_avoid_explicit_ones() {
    let tq = parse("vertex a b\narrow a b id=e0\narrow a b\nthread a b 0").unwrap();
    let ids: BTreeSet<_> = tq.arrows.iter().map(|a| a.id.clone()).collect();
    assert_eq!(ids.len(), 2);
    assert!(ids.contains("e0"));
}

#[test]
fn serialize_round_trip() {
    let text = "# sample\nvertex x y z\narrow x y id=b\nthread y z (N . (label(T, cofinal=uncountable) * Z)) id=a\n";
    let tq = parse(text).unwrap();
    let again = parse(&serialize(&tq)).unwrap();
    assert_eq!(serialize(&again), serialize(&tq));
    assert_eq!(again.threads, tq.threads);
}

#[test]
fn underlying_quiver_forgets_labels() {
    let tq = parse("vertex x y\nthread x y fin(1) id=t").unwrap();
    let q = tq.underlying_quiver();
    assert_eq!(q.len(), 2);
    assert_eq!(q.arrows().len(), 1);
    assert_eq!(q.arrows()[0].id, "t");
    assert_eq!(q.path_count("x", "y").unwrap(), 1);
}

#[test]
fn strong_local_finiteness() {
    assert!(parse("vertex a b c\narrow a b\narrow b c").unwrap().is_strongly_locally_finite());
    assert!(!parse("vertex a\narrow a a").unwrap().is_strongly_locally_finite());
    assert!(!parse("vertex a b\narrow a b\narrow b a").unwrap().is_strongly_locally_finite());
}

#[test]
fn path_counts_match_dfs() {
    let q = parse(R_IN_BETWEEN).unwrap().underlying_quiver();
    let (a, c) = (q.vertex("a").unwrap(), q.vertex("c").unwrap());
    assert_eq!(dfs_paths(&q, a, c), 3);
    assert_eq!(q.path_count("a", "c").unwrap(), 3);
    let counts = q.path_counts().unwrap();
    for x in 0..q.len() {
        for y in 0..q.len() {
            assert_eq!(counts[x][y], dfs_paths(&q, x, y));
        }
    }
    let a2 = Quiver::from_edges(&["a", "b"], &[("a", "b")]).unwrap();
    assert_eq!(a2.path_count("a", "b").unwrap(), 1);
    assert_eq!(a2.path_count("b", "a").unwrap(), 0);
    assert_eq!(a2.path_count("a", "a").unwrap(), 1);
    let cyclic = Quiver::from_edges(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
    assert_eq!(cyclic.path_count("a", "b"), Err(QuiverError::CyclicQuiver));
}

#[test]
fn expand_broken_thread() {
    let tq = parse("vertex x y\nthread x y 0 id=t").unwrap();
    let ex = expand_thread(&tq, "t", 2).unwrap();
    let q = &ex.quiver;
    let chain = ["x", "t.n0", "t.n1", "t.m2", "t.m1", "y"];
    assert_eq!(q.len(), chain.len());
    for w in chain.windows(2) {
        let (u, v) = (q.vertex(w[0]).unwrap(), q.vertex(w[1]).unwrap());
        let arrow = q.arrows().iter().find(|a| a.src == u && a.dst == v).expect("chain arrow");
        assert_eq!(arrow.elided, w == ["t.n1", "t.m2"], "{w:?}");
    }
    assert_eq!(q.arrows().len(), chain.len() - 1);
}

#[test]
fn expand_depth_zero_is_single_arrow() {
    let tq = parse("vertex x y\nthread x y fin(3) id=t").unwrap();
    let ex = expand_thread(&tq, "t", 0).unwrap();
    assert_eq!(ex.quiver.len(), 2);
    assert_eq!(ex.quiver.arrows().len(), 1);
    assert_eq!(ex.quiver.arrows()[0].id, "t");
}

#[test]
fn expand_elements_are_increasing() {
    let tq = parse("vertex x y\nthread x y fin(1) id=t").unwrap();
    let ex = expand_thread(&tq, "t", 1).unwrap();
    let q = &ex.quiver;
    let completion = thread_completion(&LinearOrder::Fin(1));
    let order = q.topological_order().unwrap();
    let elements: Vec<_> = order
        .iter()
        .filter_map(|&v| ex.element_map.get(q.name(v)))
        .map(|ev| ev.element.clone())
        .collect();
    assert_eq!(elements.len(), 3);
    for w in elements.windows(2) {
        assert_eq!(completion.compare(&w[0], &w[1]).unwrap(), std::cmp::Ordering::Less);
    }
    assert_eq!(q.arrows().iter().filter(|a| a.elided).count(), 2);
}

#[test]
fn expand_symbolic_label_elides_middle() {
    let tq = parse("vertex x y\nthread x y label(T) id=t").unwrap();
    let ex = expand_thread(&tq, "t", 2).unwrap();
    assert_eq!(ex.quiver.len(), 6);
    assert_eq!(ex.quiver.arrows().iter().filter(|a| a.elided).count(), 1);
}

#[test]
fn expand_then_contract_counts_interior_vertices() {
    let tq = parse("vertex x y w\narrow w y\nthread x y 0 id=t").unwrap();
    let ex = expand_thread(&tq, "t", 3).unwrap();
    let contracted = contract_threads(&ex.quiver).unwrap();
    assert_eq!(contracted.threads.len(), 1);
    assert_eq!(contracted.threads[0].label, LinearOrder::Fin(6));
    assert_eq!(contracted.threads[0].dst, "y");
}

#[test]
fn contract_examples() {
    let q = Quiver::from_edges(&["a", "v1", "v2", "b"], &[("a", "v1"), ("v1", "v2"), ("v2", "b")]).unwrap();
    let tq = contract_threads(&q).unwrap();
    assert_eq!(tq.vertices, vec!["a", "b"]);
    assert_eq!(tq.threads.len(), 1);
    assert_eq!(tq.threads[0].label, LinearOrder::Fin(2));

    let a2 = Quiver::from_edges(&["a", "b"], &[("a", "b")]).unwrap();
    let tq = contract_threads(&a2).unwrap();
    assert!(tq.threads.is_empty());
    assert_eq!(tq.arrows.len(), 1);

    let r = parse(R_IN_BETWEEN).unwrap();
    let tq = contract_threads(&r.underlying_quiver()).unwrap();
    assert!(tq.threads.is_empty());
    assert_eq!(tq.vertices.len(), 5);
}

#[test]
fn zigzag_round_trip() {
    let tq = parse("vertex w x v1 v2\narrow w x\nthread x v1 0 id=t\narrow v2 v1 id=b").unwrap();
    let tail = vec!["v1".to_string(), "v2".to_string()];
    let contracted = zigzag_to_thread(&tq, "x", &tail, None).unwrap();
    assert_eq!(contracted.threads.len(), 1);
    let t = contracted.thread("t").unwrap();
    assert_eq!((t.src.as_str(), t.dst.as_str()), ("x", "v2"));
    assert_eq!(t.label, LinearOrder::Fin(1));

    let expanded = thread_to_zigzag(&contracted, "t", &[1, 1]).unwrap();
    assert_eq!(expanded.vertices.len(), 4);
    let tail: Vec<String> = vec!["t.v1".into(), "v2".into()];
    let again = zigzag_to_thread(&expanded, "x", &tail, None).unwrap();
    assert_eq!(serialize(&again), serialize(&contracted));
}

#[test]
fn zigzag_trivial_shape() {
    let tq = parse("vertex x z\nthread x z 0 id=t").unwrap();
    let same = thread_to_zigzag(&tq, "t", &[1]).unwrap();
    assert_eq!(serialize(&same), serialize(&tq));
    assert!(matches!(thread_to_zigzag(&tq, "t", &[2]), Err(QuiverError::NotAZigZagTail(_))));
    assert!(matches!(thread_to_zigzag(&tq, "nope", &[1]), Err(QuiverError::UnknownThread(_))));
}

#[test]
fn zigzag_errors() {
    let tq = parse("vertex x v1 v2 w\nthread x v1 0\narrow v2 v1\narrow v2 w").unwrap();
    assert!(matches!(zigzag_to_thread(&tq, "x", &[], None), Err(QuiverError::NotAZigZagTail(_))));
    let tail = vec!["v1".to_string(), "v2".to_string()];
    assert!(matches!(zigzag_to_thread(&tq, "x", &tail, None), Err(QuiverError::NotAZigZagTail(_))));
    let back = parse("vertex x v\nthread v x 0").unwrap();
    assert!(matches!(
        zigzag_to_thread(&back, "x", &["v".to_string()], None),
        Err(QuiverError::NotAZigZagTail(_))
    ));
}

#[test]
fn zigzag_with_symbolic_thread_records_shape() {
    let tq = parse("vertex x v1 v2\nthread x v1 N id=t\narrow v2 v1").unwrap();
    let tail = vec!["v1".to_string(), "v2".to_string()];
    let out = zigzag_to_thread(&tq, "x", &tail, Some("z")).unwrap();
    let t = out.thread("t").unwrap();
    assert_eq!(t.dst, "z");
    match &t.label {
        LinearOrder::Labeled { name, .. } => assert!(name.starts_with("zigzag[")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dot_is_deterministic() {
    let a = parse("vertex y x\nthread x y fin(1) id=t\narrow x y id=a").unwrap();
    let b = parse("vertex x y\narrow x y id=a\nthread x y fin(1) id=t").unwrap();
    let hl = BTreeSet::from(["x".to_string()]);
    assert_eq!(to_dot(&a, &hl), to_dot(&b, &hl));
    assert!(to_dot(&a, &hl).contains("style=dashed"));
    let ex = expand_thread(&a, "t", 1).unwrap();
    assert!(quiver_to_dot(&ex.quiver).contains("style=dotted"));
}

#[test]
fn segments_split_at_elisions() {
    let tq = parse("vertex x y\nthread x y 0 id=t").unwrap();
    let q = expand_thread(&tq, "t", 1).unwrap().quiver;
    let (seg, reach) = q.segment_reachability();
    let (x, y) = (q.vertex("x").unwrap(), q.vertex("y").unwrap());
    assert_ne!(seg[x], seg[y]);
    assert!(reach[seg[x]][seg[y]]);
    assert!(!reach[seg[y]][seg[x]]);
    assert_eq!(q.components()[x], q.components()[y]);
}

fn arb_dag() -> impl Strategy<Value = Quiver> {
    (2usize..7).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..12).prop_map(move |pairs| {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let arrows = pairs
                .into_iter()
                .filter(|(a, b)| a != b)
                .enumerate()
                .map(|(k, (a, b))| (format!("e{k}"), names[a.min(b)].clone(), names[a.max(b)].clone(), false))
                .collect();
            Quiver::from_named(names, arrows).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn contraction_is_idempotent(q in arb_dag()) {
        let once = contract_threads(&q).unwrap();
        let twice = contract_threads(&once.underlying_quiver()).unwrap();
        prop_assert_eq!(twice.vertices, once.vertices);
        prop_assert!(twice.threads.is_empty());
    }

    #[test]
    fn path_count_recurrence(q in arb_dag()) {
        let counts = q.path_counts().unwrap();
        for x in 0..q.len() {
            for y in 0..q.len() {
                if x != y {
                    let sum: u128 = q.arrows().iter().filter(|a| a.src == x).map(|a| counts[a.dst][y]).sum();
                    prop_assert_eq!(counts[x][y], sum);
                }
                prop_assert_eq!(counts[x][y], dfs_paths(&q, x, y));
            }
        }
    }

    #[test]
    fn parse_serialize_round_trip(q in arb_dag()) {
        let tq = contract_threads(&q).unwrap();
        let text = serialize(&tq);
        let back = parse(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
    }
}
