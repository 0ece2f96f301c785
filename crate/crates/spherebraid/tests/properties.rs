use proptest::prelude::*;

use spherebraid::amalgams::{k2, standard_amalgam, AmalgamSpec};
use spherebraid::braid_words::{alpha, full_twist, garside, BraidWord};
use spherebraid::finite_groups::{make_group, GroupFamily};
use spherebraid::sphere_oracle::{
    admissible_torsion, artin_action, commute, equals, is_inner, order, FreeAutomorphism, FreeWord, Order,
};
use spherebraid::vc_classifier::{
    enumerate_v, enumerate_vtilde, finite_classes, mainodd_descriptors, project_to_mcg, satisfies_definition, Status,
};

fn word(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    let k = (n - 1) as i32;
    prop::collection::vec((1..=k, any::<bool>()), 0..=max_len)
        .prop_map(move |ls| BraidWord::new(n, ls.into_iter().map(|(i, s)| if s { i } else { -i })).unwrap())
}

fn sized_word(max_n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (4..=max_n).prop_flat_map(move |n| word(n, max_len))
}

fn word_pair(max_n: usize, max_len: usize) -> impl Strategy<Value = (BraidWord, BraidWord)> {
    (4..=max_n).prop_flat_map(move |n| (word(n, max_len), word(n, max_len)))
}

fn word_triple(max_n: usize, max_len: usize) -> impl Strategy<Value = (BraidWord, BraidWord, BraidWord)> {
    (4..=max_n).prop_flat_map(move |n| (word(n, max_len), word(n, max_len), word(n, max_len)))
}

/// A word equal to `w` in B_n(S²) but spelled differently.
fn respell(w: &BraidWord, trick: u8) -> BraidWord {
    let n = w.n();
    match trick % 4 {
        0 => w.mul(&garside(n).pow(4)),
        1 => w.mul(&alpha(n, 1).pow(2 * (n as i64 - 1))),
        2 => full_twist(n).mul(w).mul(&alpha(n, 0).pow(n as i64)),
        _ => {
            let s = BraidWord::sigma(n, 1).unwrap();
            s.mul(w).mul(&s.invert()).conj_by(&s.invert())
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_and_abelianization_are_homomorphisms((a, b) in word_pair(9, 16)) {
        let ab = a.concat(&b).unwrap();
        prop_assert_eq!(ab.permutation(), a.permutation().then(&b.permutation()));
        let (x, y, z) = (a.abelianize(), b.abelianize(), ab.abelianize());
        prop_assert_eq!(z.value, (x.value + y.value) % z.modulus);
    }

    #[test]
    fn forgetting_in_stages(w in (5usize..=8).prop_flat_map(|n| word(n, 14)), drop1 in 0usize..8, drop2 in 0usize..7) {
        let n = w.n();
        let pure = w.pow(w.permutation().order() as i64);
        let first: Vec<usize> = (1..=n).filter(|&p| p != drop1 % n + 1).collect();
        let once = pure.forget_strands(&first).unwrap();
        let second: Vec<usize> = (1..n).filter(|&p| p != drop2 % (n - 1) + 1).collect();
        let twice = once.forget_strands(&second).unwrap();
        let keep: Vec<usize> = second.iter().map(|&p| first[p - 1]).collect();
        let direct = pure.forget_strands(&keep).unwrap();
        prop_assert_eq!(twice.letters(), direct.letters());
    }

    #[test]
    fn equality_is_a_congruence((u, w, v) in word_triple(8, 10), trick in 0u8..4) {
        let w2 = respell(&w, trick);
        prop_assert!(equals(&w, &w).unwrap());
        prop_assert!(equals(&w, &w2).unwrap());
        prop_assert!(equals(&w2, &w).unwrap());
        prop_assert!(equals(&u.mul(&w).mul(&v), &u.mul(&w2).mul(&v)).unwrap());
        let w3 = respell(&w2, trick + 1);
        prop_assert!(equals(&w, &w3).unwrap());
    }

    #[test]
    fn inverses_and_the_centre(w in sized_word(8, 20)) {
        let n = w.n();
        let ft = full_twist(n);
        prop_assert!(equals(&w.mul(&w.invert()), &BraidWord::identity(n)).unwrap());
        prop_assert!(!equals(&w, &w.mul(&ft)).unwrap());
        prop_assert!(commute(&w, &ft).unwrap());
        prop_assert_eq!(order(&ft), Order::Finite(2));
    }

    #[test]
    fn sampled_torsion_is_admissible(w in sized_word(8, 12)) {
        if let Order::Finite(d) = order(&w) {
            let n = w.n();
            prop_assert!(admissible_torsion(n, d));
            prop_assert!(equals(&w.pow(d as i64), &BraidWord::identity(n)).unwrap());
            for e in 1..d {
                if d % e == 0 {
                    prop_assert!(!equals(&w.pow(e as i64), &BraidWord::identity(n)).unwrap());
                }
            }
        }
    }

    #[test]
    fn order_is_a_conjugacy_invariant((w, g) in word_pair(8, 12)) {
        prop_assert_eq!(order(&w), order(&w.conj_by(&g)));
    }
}

#[test]
fn torsion_census() {
    for n in 4..=9 {
        for d in 1..=2 * n as u64 {
            let found = (0..=2usize).find_map(|i| {
                let full = 2 * (n - i) as u64;
                (full % d == 0).then(|| alpha(n, i).pow((full / d) as i64))
            });
            assert_eq!(found.is_some(), admissible_torsion(n, d), "n={n} d={d}");
            if let Some(w) = found {
                assert_eq!(order(&w), Order::Finite(d), "n={n} d={d}");
            }
        }
    }
}

/// Reduced words of length ≤ `len` over x₁..x_rank.
fn free_words(rank: i32, len: usize) -> Vec<FreeWord> {
    let mut out = vec![Vec::<i32>::new()];
    let mut frontier = out.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in (-rank..=rank).filter(|&l| l != 0) {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.into_iter().map(FreeWord::new).collect()
}

fn short_braid_or_inner() -> impl Strategy<Value = BraidWord> {
    prop_oneof![
        word(4, 5),
        (word(4, 3), 0i64..3).prop_map(|(u, k)| full_twist(4).pow(k).conj_by(&u)),
        word(4, 2).prop_map(|u| alpha(4, 0).pow(4).mul(&u).mul(&u.invert())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inner_detection_matches_exhaustive_search(w in short_braid_or_inner()) {
        let a = artin_action(&w);
        let found = free_words(3, 6)
            .into_iter()
            .find(|g| FreeAutomorphism::inner(3, g).images() == a.images());
        let claimed = is_inner(&a);
        if found.is_some() {
            prop_assert!(claimed.is_some());
        }
        if let Some(g) = claimed {
            let inner = FreeAutomorphism::inner(3, &g);
            prop_assert_eq!(inner.images(), a.images());
        }
    }
}

fn families() -> impl Strategy<Value = GroupFamily> {
    prop_oneof![
        (1usize..30).prop_map(GroupFamily::Cyclic),
        (2usize..12).prop_map(GroupFamily::Dicyclic),
        (2usize..10).prop_map(GroupFamily::Dihedral),
        Just(GroupFamily::TStar),
        Just(GroupFamily::OStar),
        Just(GroupFamily::A4),
        Just(GroupFamily::S4),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tables_satisfy_the_group_axioms(kind in families()) {
        let g = make_group(kind).unwrap();
        prop_assert_eq!(g.order(), kind.order());
        prop_assert!(g.is_associative());
        let e = g.identity();
        for a in g.elements() {
            prop_assert_eq!(g.mul(e, a), a);
            prop_assert_eq!(g.mul(a, e), a);
            prop_assert_eq!(g.mul(a, g.inv(a)), e);
        }
    }
}

fn amalgam(which: u8) -> AmalgamSpec {
    use GroupFamily::*;
    match which % 3 {
        0 => standard_amalgam(Cyclic(8), Cyclic(4), Cyclic(8)).unwrap(),
        1 => standard_amalgam(Dicyclic(3), Cyclic(6), Dicyclic(3)).unwrap(),
        _ => k2(),
    }
}

fn letters() -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0usize..2, 0usize..64), 0..6)
}

fn element(spec: &AmalgamSpec, raw: &[(usize, usize)]) -> Vec<(usize, usize)> {
    raw.iter().map(|&(k, g)| (k, g % spec.factors[k].order())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_forms_multiply_consistently(which in 0u8..3, u in letters(), v in letters(), x in letters()) {
        let s = amalgam(which);
        let (u, v, x) = (element(&s, &u), element(&s, &v), element(&s, &x));
        let (eu, ev, ex) = (s.from_word(&u), s.from_word(&v), s.from_word(&x));
        let uv: Vec<_> = u.iter().chain(&v).copied().collect();
        prop_assert_eq!(s.from_word(&uv), s.mul(&eu, &ev));
        prop_assert_eq!(s.mul(&s.mul(&eu, &ev), &ex), s.mul(&eu, &s.mul(&ev, &ex)));
        prop_assert_eq!(s.mul(&eu, &s.inv(&eu)), s.identity());
    }

    #[test]
    fn amalgam_torsion_dichotomy(which in 0u8..3, u in letters()) {
        let s = amalgam(which);
        let e = s.from_word(&element(&s, &u));
        match s.element_order(&e) {
            Order::Finite(d) => prop_assert_eq!(s.pow(&e, d as i64), s.identity()),
            Order::Infinite => {
                for k in 1..=8 {
                    prop_assert_ne!(s.pow(&e, k), s.identity());
                }
            }
        }
    }

    #[test]
    fn records_satisfy_their_definitions(n in 4usize..40) {
        for (mcg, records) in [(false, enumerate_v(n).unwrap()), (true, enumerate_vtilde(n).unwrap())] {
            for r in &records {
                prop_assert!(satisfies_definition(&r.shape, n, mcg), "{}", r.shape);
                prop_assert_eq!(r.n, n);
                prop_assert_eq!(r.mcg, mcg);
            }
        }
    }

    #[test]
    fn finite_factors_are_finite_classes(n in 4usize..40) {
        let classes: Vec<GroupFamily> = finite_classes(n).unwrap().into_iter().map(|c| c.group).collect();
        for r in enumerate_v(n).unwrap() {
            for f in r.shape.finite_factors() {
                prop_assert!(classes.contains(&f), "{} in {}", f, r.shape);
            }
        }
    }

    #[test]
    fn projection_lands_in_the_quotient_list(n in 4usize..40) {
        let tilde = enumerate_vtilde(n).unwrap();
        for r in enumerate_v(n).unwrap() {
            let p = project_to_mcg(&r);
            let hit = tilde.iter().find(|t| t.shape == p.shape);
            prop_assert!(hit.is_some(), "{}", p.shape);
            prop_assert!(hit.unwrap().status >= r.status);
        }
    }

    #[test]
    fn odd_realized_sets(k in 2usize..15) {
        let n = 2 * k + 1;
        let got: std::collections::BTreeSet<String> = enumerate_v(n)
            .unwrap()
            .into_iter()
            .filter(|r| r.status == Status::Realized)
            .map(|r| r.shape.to_string())
            .collect();
        prop_assert_eq!(got, mainodd_descriptors(n));
    }
}
