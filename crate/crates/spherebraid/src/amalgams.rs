//! Amalgamated products G₁ *_F G₂ of finite groups over a subgroup of index
//! two in each factor.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finite_groups::{
    extend_hom, make_group, search_homs, small_generating_set, todd_coxeter, FiniteGroup, GroupError, GroupFamily,
    Presentation,
};
use crate::sphere_oracle::Order;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AmalgamError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("embedding into factor {0} is not an injective homomorphism")]
    BadEmbedding(usize),
    #[error("image in factor {0} has index {1}, not 2")]
    Index(usize, usize),
    #[error("extension is not an isomorphism restricting to the gluing")]
    BadExtension,
    #[error("automorphisms do not commute with the embeddings")]
    Commutation,
    #[error("unknown amalgam `{0}`")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, AmalgamError>;

/// G₁ *_F G₂ with F of index 2 in both factors.
#[derive(Clone, Debug)]
pub struct AmalgamSpec {
    pub name: String,
    pub factors: [FiniteGroup; 2],
    pub f: FiniteGroup,
    /// element maps F → G_k
    pub embeds: [Vec<usize>; 2],
    preimage: [Vec<Option<usize>>; 2],
    /// the nontrivial right-coset representative of each factor
    pub reps: [usize; 2],
    /// r f r⁻¹ for the representative r of factor k, as an element of F
    push: [Vec<usize>; 2],
}

/// head · r_{s₁} r_{s₂} ⋯ with strictly alternating factors s_j ∈ {0, 1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AmalgamElement {
    pub head: usize,
    pub syllables: Vec<u8>,
}

impl AmalgamElement {
    pub fn syllable_length(&self) -> usize {
        self.syllables.len()
    }
}

impl fmt::Display for AmalgamElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.head)?;
        for s in &self.syllables {
            write!(f, " t{}", s + 1)?;
        }
        Ok(())
    }
}

fn check_embedding(f: &FiniteGroup, g: &FiniteGroup, map: &[usize], k: usize) -> Result<Vec<Option<usize>>> {
    let mut pre = vec![None; g.order()];
    for a in f.elements() {
        if pre[map[a]].is_some() {
            return Err(AmalgamError::BadEmbedding(k));
        }
        pre[map[a]] = Some(a);
        for b in f.elements() {
            if map[f.mul(a, b)] != g.mul(map[a], map[b]) {
                return Err(AmalgamError::BadEmbedding(k));
            }
        }
    }
    if g.order() != 2 * f.order() {
        return Err(AmalgamError::Index(k, g.order() / f.order()));
    }
    Ok(pre)
}

impl AmalgamSpec {
    pub fn build(name: &str, g1: FiniteGroup, g2: FiniteGroup, f: FiniteGroup, i1: Vec<usize>, i2: Vec<usize>) -> Result<Self> {
        let pre1 = check_embedding(&f, &g1, &i1, 1)?;
        let pre2 = check_embedding(&f, &g2, &i2, 2)?;
        let preimage = [pre1, pre2];
        let factors = [g1, g2];
        let embeds = [i1, i2];
        let reps = [0, 1].map(|k| factors[k].elements().find(|&g| preimage[k][g].is_none()).expect("index 2"));
        let push = [0, 1].map(|k| {
            let g = &factors[k];
            f.elements().map(|x| preimage[k][g.conj(reps[k], embeds[k][x])].expect("index 2 is normal")).collect()
        });
        Ok(AmalgamSpec { name: name.to_string(), factors, f, embeds, preimage, reps, push })
    }

    /// Embeddings given by the images of F's distinguished generators.
    pub fn from_generator_images(
        name: &str,
        g1: FiniteGroup,
        g2: FiniteGroup,
        f: FiniteGroup,
        img1: &[usize],
        img2: &[usize],
    ) -> Result<Self> {
        let i1 = extend_hom(&f, f.gens(), &g1, img1).ok_or(AmalgamError::BadEmbedding(1))?;
        let i2 = extend_hom(&f, f.gens(), &g2, img2).ok_or(AmalgamError::BadEmbedding(2))?;
        AmalgamSpec::build(name, g1, g2, f, i1, i2)
    }

    pub fn identity(&self) -> AmalgamElement {
        AmalgamElement { head: 0, syllables: Vec::new() }
    }

    pub fn from_f(&self, x: usize) -> AmalgamElement {
        AmalgamElement { head: x, syllables: Vec::new() }
    }

    /// Element `g` of factor `k` (0 or 1).
    pub fn from_factor(&self, k: usize, g: usize) -> AmalgamElement {
        let mut e = self.identity();
        self.append(&mut e, k, g);
        e
    }

    /// Product of a word of (factor, element) letters.
    pub fn from_word(&self, word: &[(usize, usize)]) -> AmalgamElement {
        let mut e = self.identity();
        for &(k, g) in word {
            self.append(&mut e, k, g);
        }
        e
    }

    /// Whether factor element g lies in the amalgamated subgroup.
    pub fn in_f(&self, k: usize, g: usize) -> bool {
        self.preimage[k][g].is_some()
    }

    fn absorb(&self, e: &mut AmalgamElement, x: usize) {
        let mut x = x;
        for &s in e.syllables.iter().rev() {
            x = self.push[s as usize][x];
        }
        e.head = self.f.mul(e.head, x);
    }

    fn append_rep(&self, e: &mut AmalgamElement, k: usize) {
        if e.syllables.last() == Some(&(k as u8)) {
            e.syllables.pop();
            let g = &self.factors[k];
            let sq = self.preimage[k][g.mul(self.reps[k], self.reps[k])].expect("square of a representative lies in F");
            self.absorb(e, sq);
        } else {
            e.syllables.push(k as u8);
        }
    }

    /// Right-multiplies `e` by the factor element g ∈ G_k.
    pub fn append(&self, e: &mut AmalgamElement, k: usize, g: usize) {
        if let Some(x) = self.preimage[k][g] {
            self.absorb(e, x);
        } else {
            let gk = &self.factors[k];
            let h = gk.mul(g, gk.inv(self.reps[k]));
            self.absorb(e, self.preimage[k][h].expect("g r⁻¹ lies in F"));
            self.append_rep(e, k);
        }
    }

    pub fn mul(&self, a: &AmalgamElement, b: &AmalgamElement) -> AmalgamElement {
        let mut c = a.clone();
        self.absorb(&mut c, b.head);
        for &s in &b.syllables {
            self.append_rep(&mut c, s as usize);
        }
        c
    }

    pub fn inv(&self, a: &AmalgamElement) -> AmalgamElement {
        let mut c = self.identity();
        for &s in a.syllables.iter().rev() {
            let k = s as usize;
            self.append(&mut c, k, self.factors[k].inv(self.reps[k]));
        }
        self.absorb(&mut c, self.f.inv(a.head));
        c
    }

    pub fn pow(&self, a: &AmalgamElement, e: i64) -> AmalgamElement {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        (0..e.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(&acc, &base))
    }

    /// g a g⁻¹
    pub fn conj(&self, g: &AmalgamElement, a: &AmalgamElement) -> AmalgamElement {
        self.mul(&self.mul(g, a), &self.inv(g))
    }

    /// Finite iff the cyclic reduction has at most one syllable.
    pub fn element_order(&self, a: &AmalgamElement) -> Order {
        let mut e = a.clone();
        loop {
            match e.syllables.len() {
                0 => return Order::Finite(self.f.elem_order(e.head) as u64),
                1 => {
                    let k = e.syllables[0] as usize;
                    let g = &self.factors[k];
                    let x = g.mul(self.embeds[k][e.head], self.reps[k]);
                    return Order::Finite(g.elem_order(x) as u64);
                }
                m if m % 2 == 0 => return Order::Infinite,
                _ => {
                    let k = e.syllables[0] as usize;
                    let r = self.from_factor(k, self.reps[k]);
                    e = self.conj(&self.inv(&r), &e);
                }
            }
        }
    }

    /// Every normal form with at most `max_len` syllables.
    pub fn normal_forms(&self, max_len: usize) -> Vec<AmalgamElement> {
        let mut out = Vec::new();
        let mut patterns: Vec<Vec<u8>> = vec![Vec::new()];
        for len in 1..=max_len {
            for start in 0..2u8 {
                patterns.push((0..len).map(|j| (start + j as u8) % 2).collect());
            }
        }
        for p in &patterns {
            for head in self.f.elements() {
                out.push(AmalgamElement { head, syllables: p.clone() });
            }
        }
        out
    }

    /// Alternating words of non-F factor elements with 1..=max_len letters.
    pub fn alternating_words(&self, max_len: usize) -> Vec<Vec<(usize, usize)>> {
        let outside: [Vec<usize>; 2] = [0, 1].map(|k| self.factors[k].elements().filter(|&g| !self.in_f(k, g)).collect());
        let mut out = Vec::new();
        let mut frontier: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                let ks: Vec<usize> = match w.last() {
                    None => vec![0, 1],
                    Some(&(k, _)) => vec![1 - k],
                };
                for k in ks {
                    for &g in &outside[k] {
                        let mut v = w.clone();
                        v.push((k, g));
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// Z ⋊ G form of an amalgam whose gluing extends to an isomorphism G₁ → G₂.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemidirectForm {
    pub amalgam: String,
    pub factor: String,
    pub t: AmalgamElement,
    pub t_order: Order,
    /// sign of g t g⁻¹ = t^{±1} for each element g of G₁
    pub action: Vec<i8>,
    /// factor elements checked for g t g⁻¹ = t^{±1}
    pub checked: usize,
    /// (factor, element) pairs with the wrong sign
    pub failures: Vec<(usize, usize)>,
}

impl SemidirectForm {
    pub fn passed(&self) -> bool {
        self.t_order == Order::Infinite && self.failures.is_empty()
    }
}

/// Builds t = g₁·ι(g₁)⁻¹ and checks g t g⁻¹ = t on F and t⁻¹ off F.
pub fn to_semidirect(spec: &AmalgamSpec, iota: &[usize]) -> Result<SemidirectForm> {
    let [g1, g2] = &spec.factors;
    if iota.len() != g1.order() || g1.order() != g2.order() {
        return Err(AmalgamError::BadExtension);
    }
    let mut seen = vec![false; g2.order()];
    for a in g1.elements() {
        if seen[iota[a]] {
            return Err(AmalgamError::BadExtension);
        }
        seen[iota[a]] = true;
        for b in g1.elements() {
            if iota[g1.mul(a, b)] != g2.mul(iota[a], iota[b]) {
                return Err(AmalgamError::BadExtension);
            }
        }
    }
    if spec.f.elements().any(|x| iota[spec.embeds[0][x]] != spec.embeds[1][x]) {
        return Err(AmalgamError::BadExtension);
    }
    let g = spec.reps[0];
    let t = spec.mul(&spec.from_factor(0, g), &spec.inv(&spec.from_factor(1, iota[g])));
    let t_inv = spec.inv(&t);
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut action = Vec::new();
    for k in 0..2 {
        for x in spec.factors[k].elements() {
            let e = spec.from_factor(k, x);
            let c = spec.conj(&e, &t);
            let sign = if c == t { 1 } else if c == t_inv { -1 } else { 0 };
            if k == 0 {
                action.push(sign);
            }
            if sign != if spec.in_f(k, x) { 1 } else { -1 } {
                failures.push((k, x));
            }
            checked += 1;
        }
    }
    Ok(SemidirectForm {
        amalgam: spec.name.clone(),
        factor: g1.name().to_string(),
        t_order: spec.element_order(&t),
        t,
        action,
        checked,
        failures,
    })
}

/// Searches for an isomorphism G₁ → G₂ extending the gluing i₂ ∘ i₁⁻¹.
pub fn find_extension(spec: &AmalgamSpec) -> Option<Vec<usize>> {
    let [g1, g2] = &spec.factors;
    if g1.order() != g2.order() {
        return None;
    }
    let gens = small_generating_set(g1);
    let mut found = None;
    search_homs(g1, &gens, g2, true, |map| {
        if spec.f.elements().all(|x| map[spec.embeds[0][x]] == spec.embeds[1][x]) {
            found = Some(map);
            false
        } else {
            true
        }
    });
    found
}

fn q16_pair(dihedral: bool) -> (FiniteGroup, FiniteGroup) {
    if dihedral {
        (make_group(GroupFamily::Dihedral(4)).unwrap(), make_group(GroupFamily::Dihedral(2)).unwrap())
    } else {
        (make_group(GroupFamily::Dicyclic(4)).unwrap(), make_group(GroupFamily::Dicyclic(2)).unwrap())
    }
}

/// The six gluings ⟨x², y⟩ → ⟨a², b⟩, as images of (x², y) in words of a, b.
pub const GLUINGS: [[&[i32]; 2]; 6] = [
    [&[1, 1], &[2]],
    [&[2], &[1, 1, 2]],
    [&[1, 1, 2], &[1, 1]],
    [&[1, 1], &[1, 1, 2]],
    [&[1, 1, 2], &[-2]],
    [&[2], &[-1, -1]],
];

/// Q₁₆ *_{Q₈} Q₁₆ (or Dih₈ *_{Dih₄} Dih₈) glued by φ_j, j = 1..=6.
pub fn gluing(j: usize, dihedral: bool) -> Result<AmalgamSpec> {
    if !(1..=6).contains(&j) {
        return Err(AmalgamError::Unknown(format!("phi{j}")));
    }
    let (g, f) = q16_pair(dihedral);
    let img1 = [g.eval(&[1, 1]), g.eval(&[2])];
    let img2 = [g.eval(GLUINGS[j - 1][0]), g.eval(GLUINGS[j - 1][1])];
    let name = format!("{} *_{} {} (phi{j})", g.name(), f.name(), g.name());
    AmalgamSpec::from_generator_images(&name, g.clone(), g, f, &img1, &img2)
}

/// x² = a², y = b
pub fn k1() -> AmalgamSpec {
    gluing(1, false).expect("catalog gluing").renamed("K1")
}

/// x² = b, y = a²b
pub fn k2() -> AmalgamSpec {
    gluing(2, false).expect("catalog gluing").renamed("K2")
}

pub fn k1_prime() -> AmalgamSpec {
    gluing(1, true).expect("catalog gluing").renamed("K1'")
}

pub fn k2_prime() -> AmalgamSpec {
    gluing(2, true).expect("catalog gluing").renamed("K2'")
}

impl AmalgamSpec {
    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Presentation on the generators of G₁ followed by those of G₂.
    pub fn presentation(&self) -> Option<Presentation> {
        let p1 = self.factors[0].presentation()?;
        let p2 = self.factors[1].presentation()?;
        let shift = p1.generator_count() as i32;
        let lift = |w: &[i32]| w.iter().map(|&l| l + l.signum() * shift).collect::<Vec<_>>();
        let mut gens: Vec<String> = p1.generators().iter().map(|g| format!("{g}1")).collect();
        gens.extend(p2.generators().iter().map(|g| format!("{g}2")));
        let mut rels: Vec<Vec<i32>> = p1.relators().to_vec();
        rels.extend(p2.relators().iter().map(|r| lift(r)));
        for &u in self.f.gens() {
            let w1 = self.factors[0].word_in_presentation(self.embeds[0][u]);
            let w2 = self.factors[1].word_in_presentation(self.embeds[1][u]);
            let mut r = w1;
            r.extend(lift(&w2).iter().rev().map(|l| -l));
            rels.push(r);
        }
        Some(Presentation::new(gens, rels))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

pub(crate) fn check(name: impl Into<String>, passed: bool) -> Check {
    Check { name: name.into(), passed }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct K1K2Report {
    pub variant: String,
    /// an element of K₂ cycling the three cyclic subgroups of the amalgamated group
    pub k2_cycle: Vec<Check>,
    /// K₁ as Z ⋊ (factor)
    pub k1_semidirect: Vec<Check>,
    pub k1_quotient_order: usize,
}

impl K1K2Report {
    pub fn passed(&self) -> bool {
        self.k2_cycle.iter().chain(&self.k1_semidirect).all(|c| c.passed)
    }
}

/// The two certificates separating K₁ from K₂ (`dihedral` selects K₁′/K₂′).
pub fn distinguish_k1_k2(dihedral: bool) -> Result<K1K2Report> {
    let (s1, s2) = if dihedral { (k1_prime(), k2_prime()) } else { (k1(), k2()) };
    let mut cycle = Vec::new();
    {
        let s = &s2;
        let [g1, g2] = &s.factors;
        let x = s.from_factor(0, g1.gens()[0]);
        let a = s.from_factor(1, g2.gens()[0]);
        let ax = s.mul(&a, &x);
        let u = s.from_factor(0, g1.eval(&[1, 1]));
        let v = s.from_factor(0, g1.eval(&[2]));
        let uv = s.from_factor(0, g1.eval(&[1, 1, 2]));
        cycle.push(check("ax x^2 (ax)^-1 = y", s.conj(&ax, &u) == v));
        cycle.push(check("ax y (ax)^-1 = x^2 y", s.conj(&ax, &v) == uv));
        cycle.push(check("ax x^2y (ax)^-1 = x^2", s.conj(&ax, &uv) == u));
    }
    let mut semi = Vec::new();
    let s = &s1;
    let [g1, g2] = &s.factors;
    let x = s.from_factor(0, g1.gens()[0]);
    let y = s.from_factor(0, g1.gens()[1]);
    let a = s.from_factor(1, g2.gens()[0]);
    let b = s.from_factor(1, g2.gens()[1]);
    let t = s.mul(&x, &s.inv(&a));
    let t_inv = s.inv(&t);
    semi.push(check("t = x a^-1 has infinite order", s.element_order(&t) == Order::Infinite));
    semi.push(check("x t x^-1 = t^-1", s.conj(&x, &t) == t_inv));
    semi.push(check("a t a^-1 = t^-1", s.conj(&a, &t) == t_inv));
    semi.push(check("y t y^-1 = t", s.conj(&y, &t) == t));
    semi.push(check("b t b^-1 = t", s.conj(&b, &t) == t));
    semi.push(check("x = t a", s.mul(&t, &a) == x));
    let pres = s.presentation().expect("catalog factors carry presentations");
    let mut rels = pres.relators().to_vec();
    rels.push(vec![1, -3]);
    let quotient = todd_coxeter(&Presentation::new(pres.generators().to_vec(), rels), crate::finite_groups::coset_budget())?;
    let expect = g2.order();
    semi.push(check(format!("K/<t> has order {expect}"), quotient.order() == expect));
    let a2 = g2.mul(g2.gens()[0], g2.gens()[0]);
    let a2e = s.from_factor(1, a2);
    semi.push(check("t a^2 t^-1 = a^2", s.conj(&t, &a2e) == a2e));
    let stable = g2.elements().all(|g| {
        let c = g2.conj(g, a2);
        c == a2 || c == g2.inv(a2)
    });
    semi.push(check("every g in the factor normalizes <a^2>", stable));
    Ok(K1K2Report {
        variant: if dihedral { "K1'/K2'".into() } else { "K1/K2".into() },
        k2_cycle: cycle,
        k1_semidirect: semi,
        k1_quotient_order: quotient.order(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsoCertificate {
    pub from: String,
    pub to: String,
    pub sampled: usize,
    pub homomorphism: bool,
    pub bijective: bool,
}

impl IsoCertificate {
    pub fn passed(&self) -> bool {
        self.homomorphism && self.bijective
    }
}

fn inverse_map(m: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; m.len()];
    for (x, &y) in m.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

fn induced(
    a: &AmalgamSpec,
    b: &AmalgamSpec,
    thetas: [&[usize]; 2],
    delta: &[usize],
    e: &AmalgamElement,
) -> AmalgamElement {
    let mut out = b.from_f(delta[e.head]);
    for &s in &e.syllables {
        let k = s as usize;
        b.append(&mut out, k, thetas[k][a.reps[k]]);
    }
    out
}

/// Isomorphism A → B induced by θ_k ∈ Aut(G_k) with θ_k ∘ i_k = j_k ∘ δ.
pub fn amalgam_iso(
    a: &AmalgamSpec,
    b: &AmalgamSpec,
    theta1: &[usize],
    theta2: &[usize],
    delta: Option<&[usize]>,
) -> Result<IsoCertificate> {
    let id: Vec<usize> = a.f.elements().collect();
    let delta = delta.unwrap_or(&id);
    let thetas = [theta1, theta2];
    for k in 0..2 {
        if a.f.elements().any(|x| thetas[k][a.embeds[k][x]] != b.embeds[k][delta[x]]) {
            return Err(AmalgamError::Commutation);
        }
    }
    let inv_thetas = [inverse_map(theta1), inverse_map(theta2)];
    let inv_delta = inverse_map(delta);
    let forms = a.normal_forms(3);
    let phi = |e: &AmalgamElement| induced(a, b, thetas, delta, e);
    let psi = |e: &AmalgamElement| induced(b, a, [&inv_thetas[0], &inv_thetas[1]], &inv_delta, e);
    let mut hom = true;
    let gens: Vec<AmalgamElement> = (0..2)
        .flat_map(|k| a.factors[k].elements().map(move |g| (k, g)))
        .map(|(k, g)| a.from_factor(k, g))
        .collect();
    for u in &forms {
        for g in &gens {
            if phi(&a.mul(u, g)) != b.mul(&phi(u), &phi(g)) {
                hom = false;
            }
        }
    }
    let bijective = forms.iter().all(|u| psi(&phi(u)) == *u) && b.normal_forms(3).iter().all(|w| phi(&psi(w)) == *w);
    Ok(IsoCertificate {
        from: a.name.clone(),
        to: b.name.clone(),
        sampled: forms.len() * gens.len(),
        homomorphism: hom,
        bijective,
    })
}

/// The gluings φ₄ = ψφ₁, φ₅ = ψφ₂, φ₆ = ψ′φ₃ and φ₂ ≅ φ₃, as amalgam isomorphisms.
pub fn gluing_certificates(dihedral: bool) -> Result<Vec<IsoCertificate>> {
    let specs: Vec<AmalgamSpec> = (1..=6).map(|j| gluing(j, dihedral)).collect::<Result<_>>()?;
    let g = &specs[0].factors[0];
    let f = &specs[0].f;
    let id: Vec<usize> = g.elements().collect();
    let psi = automorphism_by_words(g, &[&[1], &[1, 1, 2]])?;
    let psi_prime = automorphism_by_words(g, &[&[-1], &[1, 1, 2]])?;
    let theta1 = automorphism_by_words(g, &[&[-1], &[1, 1, 2]])?;
    let theta2 = automorphism_by_words(g, &[&[1], &[1, 1, -2]])?;
    let delta = automorphism_by_words(f, &[&[-1], &[1, 2]])?;
    Ok(vec![
        amalgam_iso(&specs[0], &specs[3], &id, &psi, None)?,
        amalgam_iso(&specs[1], &specs[4], &id, &psi, None)?,
        amalgam_iso(&specs[2], &specs[5], &id, &psi_prime, None)?,
        amalgam_iso(&specs[1], &specs[2], &theta1, &theta2, Some(&delta))?,
    ])
}

/// Automorphism of a catalog group from generator-image words.
pub fn automorphism_by_words(g: &FiniteGroup, words: &[&[i32]]) -> Result<Vec<usize>> {
    let images: Vec<usize> = words.iter().map(|w| g.eval(w)).collect();
    Ok(crate::finite_groups::automorphism_from_images(g, &images)?)
}

/// Checks uniqueness of normal forms: every product of alternating words of
/// length ≤ `max_len` agrees with the product of their normal forms.
pub fn normal_form_consistency(spec: &AmalgamSpec, max_len: usize) -> (usize, usize) {
    let words = spec.alternating_words(max_len);
    let forms: Vec<AmalgamElement> = words.iter().map(|w| spec.from_word(w)).collect();
    let mut bad = 0;
    let mut total = 0;
    for nu in &forms {
        for (v, nv) in words.iter().zip(&forms) {
            let mut e = nu.clone();
            for &(k, g) in v {
                spec.append(&mut e, k, g);
            }
            total += 1;
            if e != spec.mul(nu, nv) {
                bad += 1;
            }
        }
    }
    (total, bad)
}

/// Amalgams by name: `K1`, `K2`, `K1'`, `K2'`, `phi1`..`phi6`, or `G1,F,G2` such as `Dic12,Z6,Dic12`.
pub fn named_amalgam(name: &str) -> Result<AmalgamSpec> {
    match name {
        "K1" => return Ok(k1()),
        "K2" => return Ok(k2()),
        "K1'" => return Ok(k1_prime()),
        "K2'" => return Ok(k2_prime()),
        _ => {}
    }
    if let Some(j) = name.strip_prefix("phi").and_then(|r| r.parse().ok()) {
        return gluing(j, false);
    }
    let parts: Vec<&str> = name.split(',').map(str::trim).collect();
    let [g1, f, g2] = parts[..] else {
        return Err(AmalgamError::Unknown(name.into()));
    };
    let (g1, f, g2) = (g1.parse()?, f.parse()?, g2.parse()?);
    standard_amalgam(g1, f, g2)
}

/// The catalog amalgam with canonical index-2 embeddings.
pub fn standard_amalgam(g1: GroupFamily, f: GroupFamily, g2: GroupFamily) -> Result<AmalgamSpec> {
    let name = format!("{g1} *_{f} {g2}");
    let gg1 = make_group(g1)?;
    let gg2 = make_group(g2)?;
    let ff = make_group(f)?;
    let img = |g: &FiniteGroup, fam: GroupFamily| -> Result<Vec<usize>> {
        Ok(match (fam, f) {
            (GroupFamily::Cyclic(_), GroupFamily::Cyclic(_)) => vec![g.eval(&[1, 1])],
            (GroupFamily::Dicyclic(_), GroupFamily::Cyclic(_)) => vec![g.eval(&[1])],
            (GroupFamily::Dihedral(_), GroupFamily::Cyclic(_)) => vec![g.eval(&[1])],
            (GroupFamily::Dicyclic(_), GroupFamily::Dicyclic(_)) => vec![g.eval(&[1, 1]), g.eval(&[2])],
            (GroupFamily::Dihedral(_), GroupFamily::Dihedral(_)) => vec![g.eval(&[1, 1]), g.eval(&[2])],
            (GroupFamily::OStar, GroupFamily::TStar) => vec![g.eval(&[1]), g.eval(&[2]), g.eval(&[3])],
            (GroupFamily::S4, GroupFamily::A4) => {
                return embed_by_search(&ff, g).ok_or_else(|| AmalgamError::Unknown(name.clone()));
            }
            _ => return Err(AmalgamError::Unknown(name.clone())),
        })
    };
    let i1 = img(&gg1, g1)?;
    let i2 = img(&gg2, g2)?;
    AmalgamSpec::from_generator_images(&name, gg1, gg2, ff, &i1, &i2)
}

fn embed_by_search(f: &FiniteGroup, g: &FiniteGroup) -> Option<Vec<usize>> {
    let mut found = None;
    search_homs(f, f.gens(), g, true, |m| {
        found = Some(f.gens().iter().map(|&s| m[s]).collect());
        false
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_elements_have_no_syllables() {
        let s = standard_amalgam(GroupFamily::Cyclic(4), GroupFamily::Cyclic(2), GroupFamily::Cyclic(4)).unwrap();
        for x in s.f.elements() {
            assert_eq!(s.from_f(x).syllable_length(), 0);
        }
        let g = 1;
        assert!(!s.in_f(0, g));
        assert_eq!(s.mul(&s.from_factor(0, g), &s.from_factor(0, s.factors[0].inv(g))), s.identity());
    }

    #[test]
    fn product_of_generators_is_infinite() {
        let s = standard_amalgam(GroupFamily::Cyclic(4), GroupFamily::Cyclic(2), GroupFamily::Cyclic(4)).unwrap();
        let p = s.mul(&s.from_factor(0, 1), &s.from_factor(1, 1));
        assert_eq!(p.syllable_length(), 2);
        assert_eq!(s.element_order(&p), Order::Infinite);
        assert_eq!(s.pow(&p, 5).syllable_length(), 10);
    }

    #[test]
    fn central_involution_has_order_two() {
        for s in [k1(), k2()] {
            let z = s.from_factor(0, s.factors[0].eval(&[1, 1, 1, 1]));
            assert_eq!(s.element_order(&z), Order::Finite(2));
            assert_eq!(z, s.from_factor(1, s.factors[1].eval(&[1, 1, 1, 1])));
        }
    }

    #[test]
    fn k1_relations() {
        let s = k1();
        let y = s.from_factor(0, s.factors[0].eval(&[2]));
        let b = s.from_factor(1, s.factors[1].eval(&[2]));
        assert_eq!(y, b);
        let t = s.mul(&s.from_factor(0, s.factors[0].eval(&[1])), &s.inv(&s.from_factor(1, s.factors[1].eval(&[1]))));
        assert_eq!(s.element_order(&t), Order::Infinite);
    }

    #[test]
    fn odd_length_elements_reduce() {
        let s = k2();
        let x = s.from_factor(0, s.factors[0].eval(&[1]));
        let a = s.from_factor(1, s.factors[1].eval(&[1]));
        let c = s.conj(&a, &x);
        assert_eq!(c.syllable_length(), 3);
        assert_eq!(s.element_order(&c), Order::Finite(8));
    }

    #[test]
    fn k1_k2_certificates() {
        for dihedral in [false, true] {
            let r = distinguish_k1_k2(dihedral).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.k1_quotient_order, if dihedral { 8 } else { 16 });
        }
    }

    #[test]
    fn gluings_fall_into_two_classes() {
        for dihedral in [false, true] {
            for c in gluing_certificates(dihedral).unwrap() {
                assert!(c.passed(), "{c:?}");
            }
        }
    }

    #[test]
    fn k1_is_semidirect_and_k2_is_not() {
        let s = k1();
        let iota = find_extension(&s).expect("K1 extends");
        let form = to_semidirect(&s, &iota).unwrap();
        assert!(form.passed());
        assert!(find_extension(&k2()).is_none());
    }

    #[test]
    fn dicyclic_semidirect() {
        let s = standard_amalgam(GroupFamily::Dicyclic(3), GroupFamily::Cyclic(6), GroupFamily::Dicyclic(3)).unwrap();
        let iota = find_extension(&s).unwrap();
        let form = to_semidirect(&s, &iota).unwrap();
        assert!(form.passed());
        let minus = form.action.iter().filter(|&&a| a == -1).count();
        assert_eq!(minus, 6);
    }

    #[test]
    fn identity_thetas() {
        let s = k2();
        let id: Vec<usize> = s.factors[0].elements().collect();
        assert!(amalgam_iso(&s, &s, &id, &id, None).unwrap().passed());
    }

    #[test]
    fn named_lookup() {
        assert_eq!(named_amalgam("Z8,Z4,Z8").unwrap().f.order(), 4);
        assert_eq!(named_amalgam("O*,T*,O*").unwrap().factors[1].order(), 48);
        assert_eq!(named_amalgam("S4,A4,S4").unwrap().f.order(), 12);
        assert!(named_amalgam("K3").is_err());
    }

    #[test]
    fn normal_forms_small() {
        let s = standard_amalgam(GroupFamily::Cyclic(4), GroupFamily::Cyclic(2), GroupFamily::Cyclic(4)).unwrap();
        assert_eq!(normal_form_consistency(&s, 3).1, 0);
    }
}
