use super::*;
use proptest::prelude::*;
use OrderElement::Index;

fn uncountable_cof(name: &str) -> LinearOrder {
    LinearOrder::labeled(
        name,
        LabelFlags {
            cofinality: Countability::Uncountable,
            ..LabelFlags::default()
        },
    )
}

#[test]
fn compare_examples() {
    assert_eq!(LinearOrder::Fin(3).compare(&Index(0), &Index(2)), Ok(Ordering::Less));
    let o = LinearOrder::concat(LinearOrder::NatUp, LinearOrder::NatDown);
    assert_eq!(
        o.compare(&OrderElement::l(Index(5)), &OrderElement::r(Index(-1))),
        Ok(Ordering::Less)
    );
    let p = LinearOrder::lex(LinearOrder::Fin(2), LinearOrder::Ints);
    assert_eq!(
        p.compare(
            &OrderElement::pair(Index(0), Index(100)),
            &OrderElement::pair(Index(1), Index(-100))
        ),
        Ok(Ordering::Less)
    );
}

#[test]
fn compare_errors() {
    assert!(matches!(
        LinearOrder::Fin(2).compare(&Index(0), &Index(2)),
        Err(OrderError::IllTypedAddress { .. })
    ));
    assert!(matches!(
        LinearOrder::NatDown.compare(&Index(0), &Index(-1)),
        Err(OrderError::IllTypedAddress { .. })
    ));
    let t = LinearOrder::labeled("T", LabelFlags::default());
    assert!(matches!(t.compare(&Index(0), &Index(0)), Err(OrderError::SymbolicOrderOpaque(_))));
}

#[test]
fn neighbor_examples() {
    assert_eq!(LinearOrder::NatUp.successor(&Index(4)), Ok(Some(Index(5))));
    assert_eq!(LinearOrder::NatUp.predecessor(&Index(0)), Ok(None));
    let o = LinearOrder::concat(LinearOrder::Fin(2), LinearOrder::NatDown);
    assert_eq!(o.successor(&OrderElement::l(Index(1))), Ok(None));
    assert_eq!(o.successor(&OrderElement::l(Index(0))), Ok(Some(OrderElement::l(Index(1)))));
    assert_eq!(o.predecessor(&OrderElement::r(Index(-7))), Ok(Some(OrderElement::r(Index(-8)))));
}

/// Brute-force oracle: in the truncation Fin(2)·Fin(k) the successor of the
/// last left element is the first right element, which moves with k, so no
/// immediate successor survives in the limit.
#[test]
fn successor_across_nondiscrete_join_matches_truncations() {
    let mut witnessed = Vec::new();
    for k in 1..8u64 {
        let trunc = LinearOrder::concat(LinearOrder::Fin(2), LinearOrder::Fin(k));
        let s = trunc.successor(&OrderElement::l(Index(1))).unwrap().unwrap();
        // Position of that successor measured from the top of the right part.
        if let OrderElement::R(inner) = s {
            if let Index(i) = *inner {
                witnessed.push(i - k as i64);
            }
        }
    }
    witnessed.dedup();
    assert_eq!(witnessed.len(), 7, "the truncation successor never stabilises");
    let o = LinearOrder::concat(LinearOrder::Fin(2), LinearOrder::NatDown);
    assert_eq!(o.successor(&OrderElement::l(Index(1))), Ok(None));
}

#[test]
fn lexprod_neighbors_roll_over() {
    let o = LinearOrder::lex(LinearOrder::Fin(3), LinearOrder::Fin(2));
    let e = OrderElement::pair(Index(0), Index(1));
    assert_eq!(o.successor(&e), Ok(Some(OrderElement::pair(Index(1), Index(0)))));
    let z = LinearOrder::lex(LinearOrder::Fin(3), LinearOrder::Ints);
    assert_eq!(z.successor(&OrderElement::pair(Index(0), Index(9))), Ok(Some(OrderElement::pair(Index(0), Index(10)))));
}

#[test]
fn local_discreteness_examples() {
    assert_eq!(LinearOrder::NatUp.is_locally_discrete(), TriBool::True);
    assert_eq!(
        LinearOrder::concat(LinearOrder::NatUp, LinearOrder::NatDown).is_locally_discrete(),
        TriBool::True
    );
    let q = LinearOrder::labeled(
        "Q-like",
        LabelFlags {
            locally_discrete: TriBool::False,
            ..LabelFlags::default()
        },
    );
    assert_eq!(q.is_locally_discrete(), TriBool::False);
    assert_eq!(
        LinearOrder::concat(LinearOrder::Fin(2), LinearOrder::NatDown).is_locally_discrete(),
        TriBool::False
    );
    assert_eq!(thread_completion(&q).is_locally_discrete(), TriBool::True);
}

/// Exhaustive neighbour check on the symmetric truncations ℕ≤k·(−ℕ)≥−k: every
/// element except the two ends has both neighbours.
#[test]
fn natup_natdown_truncations_are_discrete() {
    let o = LinearOrder::concat(LinearOrder::NatUp, LinearOrder::NatDown);
    for k in 1..=6i64 {
        for i in 0..=k {
            let e = OrderElement::l(Index(i));
            assert!(o.successor(&e).unwrap().is_some());
            assert_eq!(o.predecessor(&e).unwrap().is_some(), i > 0);
        }
        for i in 1..=k {
            let e = OrderElement::r(Index(-i));
            assert_eq!(o.successor(&e).unwrap().is_some(), i > 1);
            assert!(o.predecessor(&e).unwrap().is_some());
        }
    }
}

#[test]
fn completion_examples() {
    assert_eq!(
        thread_completion(&LinearOrder::Fin(0)),
        LinearOrder::concat(LinearOrder::NatUp, LinearOrder::NatDown)
    );
    let expected = LinearOrder::concat(
        LinearOrder::NatUp,
        LinearOrder::concat(LinearOrder::Ints, LinearOrder::concat(LinearOrder::Ints, LinearOrder::NatDown)),
    );
    assert_eq!(thread_completion(&LinearOrder::Fin(2)), expected);
    assert_eq!(thread_completion(&LinearOrder::Fin(2)).pretty(), "ℕ·ℤ·ℤ·(−ℕ)");
    let t = LinearOrder::labeled("T", LabelFlags::default());
    assert_eq!(
        thread_completion(&t),
        LinearOrder::concat(
            LinearOrder::NatUp,
            LinearOrder::concat(LinearOrder::lex(t.clone(), LinearOrder::Ints), LinearOrder::NatDown)
        )
    );
}

#[test]
fn cofinality_examples() {
    assert_eq!(
        LinearOrder::concat(LinearOrder::NatUp, LinearOrder::NatDown).cofinality_class(),
        Countability::Countable
    );
    assert_eq!(thread_completion(&uncountable_cof("T")).cofinality_class(), Countability::Countable);
    assert_eq!(
        LinearOrder::lex(uncountable_cof("T"), LinearOrder::Ints).cofinality_class(),
        Countability::Uncountable
    );
}

#[test]
fn canonical_empties() {
    let e = LinearOrder::concat(LinearOrder::Fin(0), LinearOrder::Ints);
    assert_eq!(e.canonicalize(), LinearOrder::Ints);
    let p = LinearOrder::lex(LinearOrder::NatUp, LinearOrder::Fin(0));
    assert_eq!(p.canonicalize(), LinearOrder::Fin(0));
    let f = LinearOrder::concat(LinearOrder::Fin(2), LinearOrder::concat(LinearOrder::Fin(3), LinearOrder::NatUp));
    assert_eq!(f.canonicalize(), LinearOrder::concat(LinearOrder::Fin(5), LinearOrder::NatUp));
}

#[test]
fn grammar_round_trip_examples() {
    for text in [
        "0",
        "fin(3)",
        "N",
        "-N",
        "Z",
        "(N . -N)",
        "((fin(2) * Z) . label(T, cofinal=uncountable))",
        "label(Q-like, discrete=false)",
    ] {
        let o = parse_order(text).unwrap();
        assert_eq!(o.to_string(), text);
        assert_eq!(parse_order(&o.to_string()).unwrap(), o);
    }
    assert!(matches!(parse_order("(N , Z)"), Err(OrderError::Syntax { .. })));
    assert!(matches!(parse_order("fin(x)"), Err(OrderError::Syntax { .. })));
}

fn arb_concrete() -> impl Strategy<Value = LinearOrder> {
    let leaf = prop_oneof![
        (0u64..4).prop_map(LinearOrder::Fin),
        Just(LinearOrder::NatUp),
        Just(LinearOrder::NatDown),
        Just(LinearOrder::Ints),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LinearOrder::concat(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| LinearOrder::lex(a, b)),
        ]
    })
}

fn arb_any() -> impl Strategy<Value = LinearOrder> {
    let leaf = prop_oneof![
        (0u64..4).prop_map(LinearOrder::Fin),
        Just(LinearOrder::NatUp),
        Just(LinearOrder::NatDown),
        Just(LinearOrder::Ints),
        Just(uncountable_cof("T")),
        Just(LinearOrder::labeled("S", LabelFlags::default())),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LinearOrder::concat(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| LinearOrder::lex(a, b)),
        ]
    })
}

/// A finite sample of elements: walk outward from every extremum and from
/// index 0 of every unbounded leaf.
fn sample_elements(o: &LinearOrder, budget: usize) -> Vec<OrderElement> {
    fn seeds(o: &LinearOrder) -> Vec<OrderElement> {
        match o {
            LinearOrder::Fin(n) => (0..(*n as i64).min(3)).map(Index).collect(),
            LinearOrder::NatUp => vec![Index(0), Index(3)],
            LinearOrder::NatDown => vec![Index(-1), Index(-4)],
            LinearOrder::Ints => vec![Index(-2), Index(0), Index(5)],
            LinearOrder::Concat(a, b) => {
                let mut v: Vec<_> = seeds(a).into_iter().map(OrderElement::l).collect();
                v.extend(seeds(b).into_iter().map(OrderElement::r));
                v
            }
            LinearOrder::LexProd(x, y) => {
                let xs = seeds(x);
                let ys = seeds(y);
                let mut v = Vec::new();
                for a in &xs {
                    for b in &ys {
                        v.push(OrderElement::pair(a.clone(), b.clone()));
                    }
                }
                v
            }
            LinearOrder::Labeled { .. } => vec![],
        }
    }
    let mut out = seeds(o);
    out.truncate(budget);
    out
}

proptest! {
    #[test]
    fn compare_is_a_strict_total_order(o in arb_concrete()) {
        let els = sample_elements(&o, 50);
        for a in &els {
            prop_assert_eq!(o.compare(a, a).unwrap(), Ordering::Equal);
            for b in &els {
                let ab = o.compare(a, b).unwrap();
                prop_assert_eq!(ab.reverse(), o.compare(b, a).unwrap());
                if ab == Ordering::Equal {
                    prop_assert_eq!(a, b);
                }
                for c in &els {
                    if ab == Ordering::Less && o.compare(b, c).unwrap() == Ordering::Less {
                        prop_assert_eq!(o.compare(a, c).unwrap(), Ordering::Less);
                    }
                }
            }
        }
    }

    #[test]
    fn successor_and_predecessor_are_inverse(o in arb_concrete()) {
        for e in sample_elements(&o, 50) {
            if let Some(s) = o.successor(&e).unwrap() {
                prop_assert_eq!(o.compare(&e, &s).unwrap(), Ordering::Less);
                prop_assert_eq!(o.predecessor(&s).unwrap(), Some(e.clone()));
            }
            if let Some(p) = o.predecessor(&e).unwrap() {
                prop_assert_eq!(o.successor(&p).unwrap(), Some(e.clone()));
            }
        }
    }

    #[test]
    fn canonicalize_is_idempotent(o in arb_any()) {
        let c = o.canonicalize();
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert_eq!(o.is_empty(), c.is_empty());
    }

    #[test]
    fn canonicalize_preserves_flags(o in arb_any()) {
        let c = o.canonicalize();
        prop_assert_eq!(o.cofinality_class(), c.cofinality_class());
        prop_assert_eq!(o.coinitiality_class(), c.coinitiality_class());
    }

    #[test]
    fn completion_has_extremes(o in arb_any()) {
        let c = thread_completion(&o);
        prop_assert_eq!(c.has_min(), TriBool::True);
        prop_assert_eq!(c.has_max(), TriBool::True);
        prop_assert!(c.min_element().unwrap().is_some());
        prop_assert!(c.max_element().unwrap().is_some());
        prop_assert_ne!(c.is_locally_discrete(), TriBool::False);
    }

    #[test]
    fn grammar_round_trips(o in arb_any()) {
        let text = o.to_string();
        prop_assert_eq!(parse_order(&text).unwrap(), o);
    }
}
