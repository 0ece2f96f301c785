//! Word problem and torsion orders in B_n(S²) through the action on the
//! free group π₁(S² ∖ n points) = F_{n−1}.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid_words::{full_twist, BraidError, BraidWord, Permutation};
use crate::finite_groups::{self, FiniteGroup, GroupError, Presentation};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0} generators supplied for a group with {1}")]
    GeneratorCount(usize, usize),
    #[error("target group carries no presentation")]
    MissingPresentation,
}

/// Free-reduced word over x₁,…,x_r; letter `k` is x_k, `-k` its inverse.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct FreeWord {
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out = Vec::new();
        for l in letters {
            push(&mut out, l);
        }
        FreeWord { letters: out }
    }

    pub fn generator(k: i32) -> Self {
        FreeWord { letters: vec![k] }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord { letters: inv(&self.letters) }
    }

    pub fn mul(&self, other: &FreeWord) -> Self {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push(&mut out, l);
        }
        FreeWord { letters: out }
    }

    /// g · self · g⁻¹
    pub fn conj_by(&self, g: &FreeWord) -> Self {
        FreeWord { letters: conj(&g.letters, &self.letters) }
    }

    /// Splits into (c, core) with self = c · core · c⁻¹ and core cyclically reduced.
    pub fn cyclic_reduce(&self) -> (FreeWord, FreeWord) {
        let w = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < w.len() && w[k] == -w[w.len() - 1 - k] {
            k += 1;
        }
        (FreeWord { letters: w[..k].to_vec() }, FreeWord { letters: w[k..w.len() - k].to_vec() })
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&l| if l > 0 { format!("x{l}") } else { format!("x{}^-1", -l) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn push(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

fn inv(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

fn conj(g: &[i32], w: &[i32]) -> Vec<i32> {
    let mut out = g.to_vec();
    for &l in w {
        push(&mut out, l);
    }
    for l in g.iter().rev() {
        push(&mut out, -l);
    }
    out
}

/// Images of the basis x₁,…,x_{n−1} of F_{n−1}.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FreeAutomorphism {
    images: Vec<FreeWord>,
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        FreeAutomorphism { images: (1..=rank as i32).map(FreeWord::generator).collect() }
    }

    pub fn from_images(images: Vec<FreeWord>) -> Self {
        FreeAutomorphism { images }
    }

    /// x_i ↦ g x_i g⁻¹
    pub fn inner(rank: usize, g: &FreeWord) -> Self {
        FreeAutomorphism { images: (1..=rank as i32).map(|k| FreeWord::generator(k).conj_by(g)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = Vec::new();
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &x in img.letters() {
                    push(&mut out, x);
                }
            } else {
                for x in img.letters().iter().rev() {
                    push(&mut out, -x);
                }
            }
        }
        FreeWord { letters: out }
    }

    /// (self ∘ other)(x) = self(other(x))
    pub fn compose(&self, other: &FreeAutomorphism) -> Self {
        FreeAutomorphism { images: other.images.iter().map(|w| self.apply(w)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, w)| w.letters() == [k as i32 + 1])
    }
}

/// Composes the generator actions letter by letter; x_n = (x₁⋯x_{n−1})⁻¹ is
/// eliminated eagerly.
pub fn artin_action(w: &BraidWord) -> FreeAutomorphism {
    let n = w.n();
    let mut img: Vec<Vec<i32>> = (1..=n as i32)
        .map(|j| if (j as usize) < n { vec![j] } else { (1..n as i32).rev().map(|k| -k).collect() })
        .collect();
    for &s in w.letters() {
        let i = s.unsigned_abs() as usize;
        let a = std::mem::take(&mut img[i - 1]);
        let b = std::mem::take(&mut img[i]);
        if s > 0 {
            img[i - 1] = conj(&a, &b);
            img[i] = a;
        } else {
            img[i] = conj(&inv(&b), &a);
            img[i - 1] = b;
        }
    }
    img.truncate(n - 1);
    FreeAutomorphism { images: img.into_iter().map(|letters| FreeWord { letters }).collect() }
}

/// Returns g with a(x_i) = g x_i g⁻¹ for all i, if one exists.
pub fn is_inner(a: &FreeAutomorphism) -> Option<FreeWord> {
    let rank = a.rank();
    if rank == 0 {
        return Some(FreeWord::default());
    }
    let (u, core) = a.images[0].cyclic_reduce();
    if core.letters() != [1] {
        return None;
    }
    let g = if rank == 1 {
        u
    } else {
        // v = u⁻¹ a(x₂) u must read x₁^k x₂ x₁^{−k}
        let v = conj(&inv(u.letters()), a.images[1].letters());
        let lead = v.iter().take_while(|&&l| l == v[0] && l.abs() == 1).count();
        let k = if v.first().map(|l| l.abs()) == Some(1) { lead as i32 * v[0] } else { 0 };
        let mut expect: Vec<i32> = vec![k.signum(); k.unsigned_abs() as usize];
        expect.push(2);
        expect.extend(std::iter::repeat_n(-k.signum(), k.unsigned_abs() as usize));
        if v != expect {
            return None;
        }
        let mut g = u.letters().to_vec();
        for _ in 0..k.unsigned_abs() {
            push(&mut g, k.signum());
        }
        FreeWord { letters: g }
    };
    let ok = (1..=rank as i32).all(|k| conj(g.letters(), &[k]) == a.images[k as usize - 1].letters());
    ok.then_some(g)
}

/// Position of a word relative to the centre ⟨Δ²⟩.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Central {
    Trivial,
    FullTwist,
    NotCentral,
}

fn b3_table() -> &'static (FiniteGroup, [usize; 2]) {
    static TABLE: OnceLock<(FiniteGroup, [usize; 2])> = OnceLock::new();
    TABLE.get_or_init(|| {
        let p = Presentation::new(
            vec!["s1".into(), "s2".into()],
            vec![vec![1, 2, 1, -2, -1, -2], vec![1, 2, 2, 1]],
        );
        let g = finite_groups::todd_coxeter(&p, finite_groups::coset_budget())
            .expect("B3(S2) presentation enumerates")
            .with_name("B3(S2)");
        let gens = [g.gens()[0], g.gens()[1]];
        (g, gens)
    })
}

/// The order-12 group B₃(S²) from coset enumeration.
pub fn b3_group() -> &'static FiniteGroup {
    &b3_table().0
}

/// Image of a 3-strand word in the B₃(S²) table.
pub fn b3_element(w: &BraidWord) -> usize {
    let (g, gens) = b3_table();
    let mut e = g.identity();
    for &l in w.letters() {
        let s = gens[l.unsigned_abs() as usize - 1];
        e = g.mul(e, if l > 0 { s } else { g.inv(s) });
    }
    e
}

/// Decides whether w is 1, Δ², or neither.
pub fn central_class(w: &BraidWord) -> Central {
    let n = w.n();
    if n == 3 {
        let e = b3_element(w);
        let ft = b3_element(&full_twist(3));
        return if e == b3_group().identity() {
            Central::Trivial
        } else if e == ft {
            Central::FullTwist
        } else {
            Central::NotCentral
        };
    }
    if !w.permutation().is_identity() {
        return Central::NotCentral;
    }
    let xi = w.abelianize().value;
    let xi_ft = ((n * (n - 1)) % (2 * (n - 1))) as u64;
    if xi != 0 && xi != xi_ft {
        return Central::NotCentral;
    }
    if is_inner(&artin_action(w)).is_none() {
        return Central::NotCentral;
    }
    if n % 2 == 1 {
        return if xi == 0 { Central::Trivial } else { Central::FullTwist };
    }
    let small = w.forget_strands(&[1, 2, 3]).expect("pure braids forget to any triple");
    match small.exponent_sum().rem_euclid(4) {
        0 => Central::Trivial,
        2 => Central::FullTwist,
        _ => Central::NotCentral,
    }
}

pub fn is_trivial(w: &BraidWord) -> bool {
    central_class(w) == Central::Trivial
}

pub fn equals(w1: &BraidWord, w2: &BraidWord) -> Result<bool, OracleError> {
    Ok(is_trivial(&w1.concat(&w2.invert())?))
}

pub fn commute(w1: &BraidWord, w2: &BraidWord) -> Result<bool, OracleError> {
    equals(&w1.concat(w2)?, &w2.concat(w1)?)
}

pub fn conjugation_action(g: &BraidWord, w: &BraidWord) -> Result<BraidWord, OracleError> {
    Ok(g.concat(w)?.concat(&g.invert())?)
}

/// Central iff it commutes with every σ_i.
pub fn is_central(w: &BraidWord) -> bool {
    (1..w.n() as i32).all(|i| {
        let s = BraidWord::sigma(w.n(), i).expect("in range");
        commute(w, &s).expect("same n")
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Cycle shapes of π(w) possible for a torsion element: all non-trivial
/// cycles of one length L, with 0, 1 or 2 fixed points and L dividing n − f.
fn torsion_shape(p: &Permutation, n: usize) -> bool {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return true;
    }
    let len = cycles[0].len();
    let f = p.fixed_points();
    cycles.iter().all(|c| c.len() == len) && f <= 2 && (n - f) % len == 0
}

/// True if d divides one of 2n, 2(n−1), 2(n−2).
pub fn admissible_torsion(n: usize, d: u64) -> bool {
    (0..3).any(|i| n > i && (2 * (n - i) as u64) % d == 0)
}

/// The order of w in B_n(S²). If π(w) has order ℓ then w^ℓ is pure, and the
/// pure torsion is {1, Δ²}, so the order is ℓ, 2ℓ or infinite.
pub fn order(w: &BraidWord) -> Order {
    let n = w.n();
    if n == 3 {
        return Order::Finite(b3_group().elem_order(b3_element(w)) as u64);
    }
    let p = w.permutation();
    if !torsion_shape(&p, n) {
        return Order::Infinite;
    }
    let l = p.order();
    let d = match central_class(&w.pow(l as i64)) {
        Central::Trivial => l,
        Central::FullTwist => 2 * l,
        Central::NotCentral => return Order::Infinite,
    };
    debug_assert!(admissible_torsion(n, d));
    Order::Finite(d)
}

/// Outcome of checking that braids generate a copy of a finite group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupCertificate {
    pub target: String,
    pub relators_hold: bool,
    pub failed_relators: Vec<usize>,
    /// one witness per minimal normal subgroup: (element index, braid nontrivial?)
    pub kernel_witnesses: Vec<(usize, bool)>,
    pub injective: bool,
}

impl SubgroupCertificate {
    pub fn passed(&self) -> bool {
        self.relators_hold && self.injective
    }
}

/// Evaluates a word in the target's generators on the braids `gens`.
pub fn eval_on(gens: &[BraidWord], word: &[i32]) -> BraidWord {
    let n = gens[0].n();
    let mut acc = BraidWord::identity(n);
    for &l in word {
        let g = &gens[l.unsigned_abs() as usize - 1];
        acc = acc.mul(&if l > 0 { g.clone() } else { g.invert() });
    }
    acc
}

/// Checks the defining relators of `target` on `gens` and then that no
/// minimal normal subgroup dies, which makes the induced map injective.
pub fn certify_finite_subgroup(gens: &[BraidWord], target: &FiniteGroup) -> Result<SubgroupCertificate, OracleError> {
    let pres = target.presentation().ok_or(OracleError::MissingPresentation)?;
    if gens.is_empty() || gens.len() != pres.generator_count() {
        return Err(OracleError::GeneratorCount(gens.len(), pres.generator_count()));
    }
    let n = gens[0].n();
    if let Some(g) = gens.iter().find(|g| g.n() != n) {
        return Err(BraidError::StrandMismatch(n, g.n()).into());
    }
    let failed: Vec<usize> =
        pres.relators().iter().enumerate().filter(|(_, r)| !is_trivial(&eval_on(gens, r))).map(|(k, _)| k).collect();
    let mut witnesses = Vec::new();
    if failed.is_empty() {
        for sub in finite_groups::minimal_normal_subgroups(target) {
            let e = *sub.elements().iter().find(|&&e| e != target.identity()).expect("nontrivial");
            let word = target.word_in_presentation(e);
            witnesses.push((e, !is_trivial(&eval_on(gens, &word))));
        }
    }
    let injective = failed.is_empty() && witnesses.iter().all(|w| w.1);
    Ok(SubgroupCertificate {
        target: target.name().to_string(),
        relators_hold: failed.is_empty(),
        failed_relators: failed,
        kernel_witnesses: witnesses,
        injective,
    })
}

pub fn verify_finite_subgroup(gens: &[BraidWord], target: &FiniteGroup) -> Result<bool, OracleError> {
    Ok(certify_finite_subgroup(gens, target)?.passed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid_words::{alpha, garside, parse_braid};

    fn w(n: usize, s: &str) -> BraidWord {
        parse_braid(s, n).unwrap()
    }

    #[test]
    fn action_of_sigma1() {
        let a = artin_action(&w(4, "1"));
        assert_eq!(a.images()[0].letters(), &[1, 2, -1]);
        assert_eq!(a.images()[1].letters(), &[1]);
        assert_eq!(a.images()[2].letters(), &[3]);
        assert!(artin_action(&BraidWord::identity(4)).is_identity());
    }

    #[test]
    fn inner_detection() {
        assert_eq!(is_inner(&FreeAutomorphism::identity(3)), Some(FreeWord::default()));
        let g = FreeWord::generator(1);
        assert_eq!(is_inner(&FreeAutomorphism::inner(3, &g)), Some(g));
        let g = FreeWord::new([2, -1, -1, 3]);
        assert_eq!(is_inner(&FreeAutomorphism::inner(4, &g)), Some(g));
        assert!(is_inner(&artin_action(&w(4, "1 1"))).is_none());
    }

    #[test]
    fn surface_relation_is_inner() {
        for n in 3..=10 {
            let mut r: Vec<i32> = (1..n as i32 - 1).collect();
            r.push(n as i32 - 1);
            r.push(n as i32 - 1);
            r.extend((1..n as i32 - 1).rev());
            assert!(is_inner(&artin_action(&BraidWord::new(n, r).unwrap())).is_some(), "n = {n}");
        }
    }

    #[test]
    fn b3_has_twelve_elements() {
        assert_eq!(b3_group().order(), 12);
    }

    #[test]
    fn torsion_orders() {
        for n in 4..=8 {
            for i in 0..3 {
                assert_eq!(order(&alpha(n, i)), Order::Finite(2 * (n - i) as u64));
            }
            assert_eq!(order(&full_twist(n)), Order::Finite(2));
            assert_eq!(order(&garside(n)), Order::Finite(4));
        }
        assert_eq!(order(&BraidWord::identity(5)), Order::Finite(1));
        assert_eq!(order(&w(4, "1 1")), Order::Infinite);
    }

    #[test]
    fn equality_examples() {
        for n in 4..=9 {
            assert!(equals(&full_twist(n), &alpha(n, 0).pow(n as i64)).unwrap());
            let d = garside(n);
            let conj = w(n, "1").conj_by(&d);
            assert!(equals(&conj, &BraidWord::sigma(n, n as i32 - 1).unwrap()).unwrap());
            assert!(!equals(&full_twist(n), &BraidWord::identity(n)).unwrap());
        }
        assert!(!equals(&w(4, "1"), &w(4, "2")).unwrap());
        assert!(!commute(&w(4, "1"), &w(4, "2")).unwrap());
        assert!(is_central(&full_twist(5)));
        assert!(!is_central(&w(5, "1 1")));
    }
}
