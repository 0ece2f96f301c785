//! Known values checked against the library: group orders, torsion,
//! lattices and a few hand-verified braid identities.

use spherebraid::amalgams::{distinguish_k1_k2, find_extension, k1, k2};
use spherebraid::braid_words::{alpha, full_twist, garside, parse_braid, BraidWord};
use spherebraid::finite_groups::{
    automorphisms, center, coset_budget, identify, lattice_summary, make_group, presentation_of, subgroups,
    todd_coxeter, GroupFamily,
};
use spherebraid::sphere_oracle::{b3_group, equals, order, Order};
use spherebraid::vc_classifier::{find_class, witness, witness_passed, Status};

fn braid(n: usize, s: &str) -> BraidWord {
    parse_braid(s, n).unwrap()
}

#[test]
fn b3_of_the_sphere_is_dicyclic_of_order_12() {
    let g = b3_group();
    assert_eq!(g.order(), 12);
    assert_eq!(identify(g), "Dic12");
}

#[test]
fn coset_enumeration_orders() {
    use GroupFamily::*;
    for (kind, want) in [(Dicyclic(2), 8), (Dicyclic(4), 16), (Dicyclic(7), 28), (TStar, 24), (OStar, 48), (IStar, 120)] {
        let g = todd_coxeter(&presentation_of(kind), coset_budget()).unwrap();
        assert_eq!(g.order(), want, "{kind}");
    }
}

#[test]
fn binary_polyhedral_centres_have_order_two() {
    for kind in [GroupFamily::TStar, GroupFamily::OStar, GroupFamily::IStar] {
        assert_eq!(center(&make_group(kind).unwrap()).len(), 2, "{kind}");
    }
}

#[test]
fn torsion_of_the_standard_elements() {
    assert_eq!(order(&alpha(4, 0)), Order::Finite(8));
    assert_eq!(order(&alpha(4, 1)), Order::Finite(6));
    assert_eq!(order(&alpha(4, 2)), Order::Finite(4));
    assert_eq!(order(&alpha(9, 1)), Order::Finite(16));
    assert_eq!(order(&garside(7)), Order::Finite(4));
    assert_eq!(order(&full_twist(7)), Order::Finite(2));
    assert_eq!(order(&braid(4, "1")), Order::Infinite);
    assert_eq!(order(&braid(5, "1 1")), Order::Infinite);
}

#[test]
fn sphere_relation_and_hand_identities() {
    // σ1σ2σ3²σ2σ1 is trivial in B4(S²)
    assert!(equals(&braid(4, "1 2 3 3 2 1"), &BraidWord::identity(4)).unwrap());
    assert!(!equals(&braid(4, "1 2 3 3 2"), &BraidWord::identity(4)).unwrap());
    assert!(equals(&braid(4, "1 2 1"), &braid(4, "2 1 2")).unwrap());
    assert!(equals(&braid(5, "1 3"), &braid(5, "3 1")).unwrap());
    assert!(!equals(&braid(5, "1 2"), &braid(5, "2 1")).unwrap());
    assert!(equals(&garside(6).pow(2), &alpha(6, 0).pow(6)).unwrap());
}

#[test]
fn binary_tetrahedral_lattice() {
    let g = make_group(GroupFamily::TStar).unwrap();
    let s = lattice_summary(&g, &subgroups(&g).unwrap());
    let list = |v: &std::collections::BTreeSet<String>| v.iter().cloned().collect::<Vec<_>>().join(" ");
    assert_eq!(list(&s.proper), "1 Q8 Z2 Z3 Z4 Z6");
    assert_eq!(list(&s.maximal), "Q8 Z6");
    assert_eq!(s.counts["Z4"], (3, 0));
    assert_eq!(s.counts["Z3"], (4, 0));
}

#[test]
fn outer_automorphism_groups() {
    use GroupFamily::*;
    for (kind, out) in [(Dicyclic(2), 6), (TStar, 2), (OStar, 2), (IStar, 2), (Cyclic(12), 4), (Dicyclic(3), 2)] {
        let aut = automorphisms(&make_group(kind).unwrap()).unwrap();
        assert_eq!(aut.outer().unwrap().order(), out, "{kind}");
    }
}

#[test]
fn k1_and_k2_differ() {
    assert!(find_extension(&k1()).is_some());
    assert!(find_extension(&k2()).is_none());
    assert!(distinguish_k1_k2(false).unwrap().passed());
    assert!(distinguish_k1_k2(true).unwrap().passed());
}

#[test]
fn classifier_exemplars() {
    let st = |n: usize, s: &str| find_class(n, s, false).unwrap().status;
    assert_eq!(st(4, "T* x Z"), Status::NotRealized);
    assert_eq!(st(4, "Q8 x_alpha Z"), Status::Realized);
    assert_eq!(st(6, "O* x Z"), Status::NotRealized);
    assert_eq!(st(6, "O* *_T* O*"), Status::Open);
    assert_eq!(st(6, "T* x_omega Z"), Status::Open);
    assert_eq!(st(36, "O* *_T* O*"), Status::Realized);
    let w = witness(&find_class(4, "Q8 x_alpha Z", false).unwrap()).unwrap();
    assert!(witness_passed(&w));
    assert!(find_class(5, "Q8 x Z", false).is_err());
}
