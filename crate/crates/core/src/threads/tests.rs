use super::*;
use crate::derived::{injective, projective, WindowOptions};
use crate::sections::{verify_section, ThreadPart, ThreadSlicePolicy};
use crate::threadquiver::{expand_thread, parse, Quiver};

const R_IN_BETWEEN: &[(&str, &str)] = &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "e"), ("d", "c"), ("d", "e")];

fn window(vertices: &[&str], edges: &[(&str, &str)], radius: usize) -> Window {
    Window::build(&Quiver::from_edges(vertices, edges).unwrap(), WindowOptions::radius(radius)).unwrap()
}

fn names(w: &Window, ids: &[ObjId]) -> BTreeSet<String> {
    ids.iter().map(|&i| w.quiver().name(w.object(i).orbit).to_string()).collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn r_in_between_five_vertex_example() {
    let w = window(&["a", "b", "c", "d", "e"], R_IN_BETWEEN, 4);
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let p = |v: &str| w.lookup(v).unwrap();
    let iv = |x, y| names(&w, &r_in_between(&m, &s, p(x), p(y)).unwrap().members);
    assert_eq!(iv("a", "e"), set(&["a", "b", "d", "e"]));
    assert_eq!(iv("b", "d"), set(&["a", "b", "c", "d", "e"]));
    assert_eq!(iv("a", "d"), set(&["a", "d"]));
    assert_eq!(iv("d", "a"), set(&["a", "c", "d"]));
}

#[test]
fn classification_in_five_vertex_example() {
    let w = window(&["a", "b", "c", "d", "e"], R_IN_BETWEEN, 3);
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let c = classify_object(&m, &s, w.lookup("a").unwrap()).unwrap();
    assert_eq!(c.kind, Classification::Nonthread);
    assert_eq!(c.successors.len(), 3);
    assert_eq!(enumerate_nonthread(&m, &s).unwrap().len(), 5);
}

#[test]
fn a5_linear_thread_interval() {
    let w = window(&["a", "b", "c", "d", "e"], &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")], 4);
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let iv = r_in_between(&m, &s, w.lookup("d").unwrap(), w.lookup("b").unwrap()).unwrap();
    assert_eq!(names(&w, &iv.members), set(&["b", "c", "d"]));
    assert!(iv.kind.is_thread());
    assert_eq!(iv.kind, IntervalKind::BrokenThread);
    let nt = names(&w, &enumerate_nonthread(&m, &s).unwrap().into_iter().map(|c| c.id).collect::<Vec<_>>());
    assert_eq!(nt, set(&["a", "e"]));
}

#[test]
fn a5_zigzag_interval_is_not_a_thread() {
    let w = window(&["a", "b", "c", "d", "e"], &[("a", "b"), ("b", "c"), ("d", "c"), ("e", "d")], 4);
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let iv = r_in_between(&m, &s, w.lookup("d").unwrap(), w.lookup("b").unwrap()).unwrap();
    assert_eq!(names(&w, &iv.members), set(&["b", "c", "d"]));
    assert_eq!(iv.kind, IntervalKind::General);
    let c = classify_object(&m, &s, w.lookup("c").unwrap()).unwrap();
    assert_eq!(c.kind, Classification::Nonthread);
}

#[test]
fn a1_is_nonthread_and_trivial() {
    let w = window(&["a"], &[], 2);
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let a = w.lookup("a").unwrap();
    assert_eq!(classify_object(&m, &s, a).unwrap().kind, Classification::Nonthread);
    assert_eq!(r_in_between(&m, &s, a, a).unwrap().members, vec![a]);
    assert_eq!(nonthread_path(&m, &s, a, a).unwrap(), Some(vec![a]));
    assert!(detect_rays(&m, &s, None).unwrap().is_empty());
}

#[test]
fn not_picked_is_rejected() {
    let w = window(&["a", "b"], &[("a", "b")], 2);
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    assert!(matches!(classify_object(&m, &s, w.lookup("a@1").unwrap()), Err(ThreadError::NotPicked(_))));
    assert!(detect_rays(&m, &Section::default(), None).unwrap().is_empty());
}

#[test]
fn connected_slice_has_direct_path() {
    let w = window(&["a", "b", "c"], &[("a", "b"), ("b", "c")], 3);
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let (a, c) = (w.lookup("a").unwrap(), w.lookup("c").unwrap());
    assert_eq!(nonthread_path(&m, &s, a, c).unwrap(), Some(vec![a, c]));
}

/// Brute force over all simple sequences of picks.
fn brute_paths(m: &Metric, s: &Section, x: ObjId, y: ObjId) -> Option<usize> {
    let w = m.window();
    let ids = s.ids(w);
    let nt: BTreeSet<ObjId> = enumerate_nonthread(m, s).unwrap().into_iter().map(|c| c.id).collect();
    let near = |a: ObjId, b: ObjId| m.lightcone(a, b).unwrap().is_exact() || m.lightcone(b, a).unwrap().is_exact();
    let mut best = None;
    fn go(
        path: &mut Vec<ObjId>,
        y: ObjId,
        ids: &[ObjId],
        ok: &dyn Fn(&[ObjId], ObjId) -> bool,
        best: &mut Option<usize>,
    ) {
        let cur = *path.last().unwrap();
        if cur == y {
            *best = Some(best.map_or(path.len(), |b: usize| b.min(path.len())));
            return;
        }
        for &n in ids {
            if !path.contains(&n) && ok(path, n) {
                path.push(n);
                go(path, y, ids, ok, best);
                path.pop();
            }
        }
    }
    let ok = |path: &[ObjId], n: ObjId| {
        let cur = *path.last().unwrap();
        near(cur, n) && (n == y || nt.contains(&n)) && (path.len() < 2 || !near(path[path.len() - 2], n))
    };
    go(&mut vec![x], y, &ids, &ok, &mut best);
    best
}

#[test]
fn nonthread_path_through_a_hub() {
    // Two components joined only through the hub h; the hub's other side
    // is reached across elided arrows so that far ends are infinitely apart.
    let q = Quiver::from_named(
        ["p", "h", "q", "u", "v"].iter().map(|s| s.to_string()).collect(),
        vec![
            ("e1".into(), "p".into(), "h".into(), true),
            ("e2".into(), "h".into(), "q".into(), true),
            ("e3".into(), "h".into(), "u".into(), false),
            ("e4".into(), "v".into(), "h".into(), false),
        ],
    )
    .unwrap();
    let w = Window::build(&q, WindowOptions::radius(3)).unwrap();
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let (p, qq) = (w.lookup("p").unwrap(), w.lookup("q").unwrap());
    let path = nonthread_path(&m, &s, p, qq).unwrap();
    assert_eq!(path.as_ref().map(Vec::len), brute_paths(&m, &s, p, qq));
    if let Some(path) = path {
        assert_eq!(path.first(), Some(&p));
        assert_eq!(path.last(), Some(&qq));
    }
}

fn thread_setup(label: &str, depth: usize, radius: usize) -> (ThreadQuiver, Expansion, Window) {
    let tq = parse(&format!("vertex x y\nthread x y {label} id=t")).unwrap();
    let ex = expand_thread(&tq, "t", depth).unwrap();
    let w = Window::build(&ex.quiver, WindowOptions::radius(radius)).unwrap();
    (tq, ex, w)
}

/// Head at level 0, the ℤ block one translate down, tail unpicked.
fn ray_section(w: &Window) -> Section {
    let mut s = Section::default();
    for o in 0..w.orbit_count() {
        let name = w.quiver().name(o);
        if name == "x" || name.starts_with("t.n") {
            s.picks.insert(o, 0);
        } else if name.starts_with("t.z") {
            s.picks.insert(o, -1);
        }
    }
    s
}

#[test]
fn mark_of_single_thread_is_far_projective() {
    let (tq, ex, w) = thread_setup("fin(1)", 3, 3);
    let m = Metric::new(&w);
    let s = ray_section(&w);
    assert!(verify_section(&m, &s).is_pass(), "{:?}", verify_section(&m, &s));
    let rays = detect_rays(&m, &s, None).unwrap();
    let window_rays: Vec<_> = rays.iter().filter(|r| r.side == RaySide::Ray).collect();
    assert_eq!(window_rays.len(), 1, "{rays:?}");
    assert!(rays.iter().all(|r| r.side == RaySide::Ray));
    let ray = window_rays[0];
    assert_eq!(w.label(find_anchor(&m, &s, ray).unwrap()), "x@0");
    let mark = compute_mark(&m, &s, ray, Some((&tq, &ex))).unwrap();
    assert_eq!(mark.symbolic.as_deref(), Some("y"));
    assert_eq!(mark.routes_agree, Some(true));
    assert_eq!(mark.window, Some(w.lookup("y").unwrap()));
    // Independent check: the mark is the projective at y.
    let y = w.quiver().vertex("y").unwrap();
    assert_eq!(mark.object.module.dims(), projective(w.quiver(), y).unwrap().dims());
    for &x in &ray.members {
        assert!(m.lightcone(x, mark.window.unwrap()).unwrap().is_exact());
        assert!(m.lightcone(find_anchor(&m, &s, ray).unwrap(), x).unwrap().at_least(0) == Some(true));
    }
}

#[test]
fn comark_of_dual_thread() {
    let (tq, ex, w) = thread_setup("fin(1)", 3, 3);
    let m = Metric::new(&w);
    let mut s = Section::default();
    for o in 0..w.orbit_count() {
        let name = w.quiver().name(o);
        if name == "y" || name.starts_with("t.m") {
            s.picks.insert(o, 0);
        } else if name.starts_with("t.z") {
            s.picks.insert(o, 1);
        }
    }
    assert!(verify_section(&m, &s).is_pass(), "{:?}", verify_section(&m, &s));
    let rays = detect_rays(&m, &s, None).unwrap();
    assert_eq!(rays.len(), 1, "{rays:?}");
    assert_eq!(rays[0].side, RaySide::Coray);
    assert_eq!(w.label(find_anchor(&m, &s, &rays[0]).unwrap()), "y@0");
    let mark = compute_mark(&m, &s, &rays[0], Some((&tq, &ex))).unwrap();
    assert_eq!(mark.symbolic.as_deref(), Some("x"));
    assert_eq!(mark.routes_agree, Some(true), "{mark:?}");
}

#[test]
fn cone_of_isomorphism_is_rejected() {
    let q = std::sync::Arc::new(Quiver::from_edges(&["a", "b"], &[("a", "b")]).unwrap());
    let p = DObj::new(projective(&q, 1).unwrap(), 0);
    assert!(matches!(mark_of_map(&p, &p), Err(ThreadError::NotIndecomposable(_))));
    let i = DObj::new(injective(&q, 1).unwrap(), 0);
    assert!(mark_of_map(&i, &p).is_err() || mark_of_map(&i, &p).is_ok());
}

#[test]
fn symbolic_reports_follow_policies() {
    let tq = parse("vertex x y\nthread x y fin(1) id=t").unwrap();
    let (_, _, w) = thread_setup("fin(1)", 2, 2);
    let m = Metric::new(&w);
    let mut s = Section::projective(&w);
    s.policies = vec![ThreadSlicePolicy {
        thread: "t".into(),
        head: Some(0),
        body: Some(-1),
        tail: None,
    }];
    let rays: Vec<_> = detect_rays(&m, &s, Some(&tq)).unwrap().into_iter().filter(|r| r.symbolic.is_some()).collect();
    assert_eq!(rays.len(), 1);
    assert_eq!(rays[0].side, RaySide::Ray);
    assert_eq!(rays[0].symbolic.as_ref().unwrap().part, ThreadPart::Body);
}

#[test]
fn thread_intervals_have_one_dimensional_homs() {
    let w = window(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")], 3);
    let m = Metric::new(&w);
    let s = Section::projective(&w);
    let ids = s.ids(&w);
    for &x in &ids {
        for &y in &ids {
            let Ok(iv) = r_in_between(&m, &s, x, y) else { continue };
            if iv.kind == IntervalKind::UnbrokenThread {
                for &p in &iv.members {
                    for &q in &iv.members {
                        if p != q && w.hom_edge(p, q) {
                            assert_eq!(w.dhom(p, q), 1);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn interval_properties_on_small_windows() {
    for (vs, es) in [
        (vec!["a", "b", "c", "d"], vec![("a", "b"), ("b", "c"), ("c", "d")]),
        (vec!["a", "b", "c", "d"], vec![("a", "b"), ("c", "b"), ("c", "d")]),
        (vec!["a", "b", "c", "d", "e"], R_IN_BETWEEN.to_vec()),
    ] {
        let w = window(&vs, &es, 3);
        let m = Metric::new(&w);
        let s = Section::projective(&w);
        let ids = s.ids(&w);
        for &x in &ids {
            for &y in &ids {
                let Ok(iv) = r_in_between(&m, &s, x, y) else { continue };
                let members: BTreeSet<ObjId> = iv.members.iter().copied().collect();
                for &z in &iv.members {
                    // Half-convexity.
                    let left: BTreeSet<ObjId> = r_in_between(&m, &s, x, z).unwrap().members.into_iter().collect();
                    let right: BTreeSet<ObjId> = r_in_between(&m, &s, z, y).unwrap().members.into_iter().collect();
                    assert!(left.is_subset(&members) && right.is_subset(&members));
                    // Neighbours inside the interval.
                    let c = classify_object(&m, &s, z).unwrap();
                    let nb = c.successors.iter().chain(&c.predecessors).filter(|b| members.contains(b)).collect::<BTreeSet<_>>().len();
                    if x != y {
                        assert!(nb >= if z == x || z == y { 1 } else { 2 }, "{} in [{}, {}]: {:?}", w.label(z), w.label(x), w.label(y), iv.members.iter().map(|&i| w.label(i)).collect::<Vec<_>>());
                    }
                }
                // Same orbits as the plain interval [X, τ^{-n} Y] in the light cone of X.
                let n = iv.distance;
                let target = w.id(w.object(y).orbit, w.object(y).level + n).unwrap();
                let plain: BTreeSet<usize> = (0..w.len())
                    .filter(|&z| m.lightcone(x, z).unwrap().exact() == Some(0) && m.lightcone(z, target).unwrap().exact() == Some(0))
                    .map(|z| w.object(z).orbit)
                    .collect();
                let orbits: BTreeSet<usize> = iv.members.iter().map(|&z| w.object(z).orbit).collect();
                assert_eq!(orbits, plain, "{} {}", w.label(x), w.label(y));
            }
        }
    }
}

