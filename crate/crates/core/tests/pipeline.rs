use proptest::prelude::*;
use tq_core::derived::{Window, WindowOptions};
use tq_core::metric::Metric;
use tq_core::sections::{compute_heart, verify_section, verify_split_t, Section};
use tq_core::threadquiver::{contract_threads, expand_all, parse, serialize, Quiver, StdArrow, ThreadQuiver};
use tq_core::threads::{classify_all, detect_rays, Classification};

/// Type A quiver on `n` vertices with arrow `i` pointing right when bit `i` is set.
fn type_a(n: usize, orient: u32) -> Quiver {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let arrows = (0..n - 1)
        .map(|i| {
            let (s, t) = if orient >> i & 1 == 1 { (i, i + 1) } else { (i + 1, i) };
            (format!("e{i}"), names[s].clone(), names[t].clone(), false)
        })
        .collect();
    Quiver::from_named(names, arrows).unwrap()
}

#[test]
fn thread_quiver_runs_end_to_end() {
    let tq = parse("vertex x y\nthread x y fin(1) id=t\n").unwrap();
    let exp = expand_all(&tq, 2).unwrap();
    let w = Window::build(&exp.quiver, WindowOptions::radius(3)).unwrap();
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    assert!(verify_section(&m, &s).is_pass());
    // Elided arrows leave some memberships open; every pick must still be
    // a projective or undetermined, and no projective may be unpicked.
    let heart = compute_heart(&m, &s).unwrap();
    let picks = s.ids(&w);
    assert!(heart.projectives.iter().all(|p| picks.contains(p)));
    assert!(picks.iter().all(|p| heart.projectives.contains(p) || heart.undetermined.contains(p)));
    let classes = classify_all(&m, &s).unwrap();
    assert_eq!(classes.len(), w.orbit_count());
    // Every pick sits at level 0, so nothing is infinitely far away.
    assert!(detect_rays(&m, &s, Some(&tq)).unwrap().is_empty());
    let back = contract_threads(&exp.quiver).unwrap();
    assert_eq!(back.threads.len(), 1);
}

#[test]
fn linear_interior_vertices_are_thread_objects() {
    let q = type_a(5, 0b1111);
    let w = Window::build(&q, WindowOptions::radius(2)).unwrap();
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let kinds: Vec<Classification> = classify_all(&m, &s).unwrap().into_iter().map(|c| c.kind).collect();
    let threads = kinds.iter().filter(|k| **k == Classification::Thread).count();
    assert_eq!(threads, 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projective_slice_is_a_section_with_matching_heart(n in 2usize..=5, orient in 0u32..16) {
        let q = type_a(n, orient);
        let w = Window::build(&q, WindowOptions::radius(2 + n)).unwrap();
        let m = Metric::new(&w);
        let s = Section::projective(&w);
        prop_assert!(verify_section(&m, &s).is_pass());
        prop_assert!(!verify_split_t(&m, &s).unwrap().is_fail());
        prop_assert!(compute_heart(&m, &s).unwrap().matches_section);
    }

    #[test]
    fn serialized_quivers_parse_back(n in 2usize..=6, orient in 0u32..32) {
        let q = type_a(n, orient);
        let arrows = q
            .arrows()
            .iter()
            .map(|a| StdArrow { id: a.id.clone(), src: q.name(a.src).to_string(), dst: q.name(a.dst).to_string() })
            .collect();
        let tq = ThreadQuiver::new(q.vertices().to_vec(), arrows, Vec::new()).unwrap();
        let again = parse(&serialize(&tq)).unwrap();
        prop_assert_eq!(serialize(&again), serialize(&tq));
        prop_assert_eq!(again.underlying_quiver().path_counts().unwrap(), q.path_counts().unwrap());
    }
}
