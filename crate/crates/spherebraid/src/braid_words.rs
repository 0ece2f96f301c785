//! Words in the sphere braid group over the Artin generators, the
//! permutation and abelianization maps, strand forgetting, and the catalog
//! of named elements.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("strand count {0} is below 3")]
    TooFewStrands(usize),
    #[error("generator index {letter} out of range for n = {n}")]
    IndexOutOfRange { letter: i64, n: usize },
    #[error("malformed token `{0}`")]
    Malformed(String),
    #[error("unknown named element `{0}`")]
    UnknownName(String),
    #[error("side condition violated for {name}: {reason}")]
    SideCondition { name: String, reason: String },
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("braid does not preserve the kept strands")]
    KeepIncompatible,
}

pub type Result<T> = std::result::Result<T, BraidError>;

/// A free-reduced word in σ₁,…,σ_{n−1}; letter `k` is σ_k and `-k` is σ_k⁻¹.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawBraid")]
pub struct BraidWord {
    n: usize,
    letters: Vec<i32>,
}

#[derive(Deserialize)]
struct RawBraid {
    n: usize,
    letters: Vec<i32>,
}

impl TryFrom<RawBraid> for BraidWord {
    type Error = BraidError;
    fn try_from(raw: RawBraid) -> Result<Self> {
        BraidWord::new(raw.n, raw.letters)
    }
}

fn push_reduced(out: &mut Vec<i32>, l: i32) {
    if out.last() == Some(&-l) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl BraidWord {
    pub fn new(n: usize, letters: impl IntoIterator<Item = i32>) -> Result<Self> {
        if n < 3 {
            return Err(BraidError::TooFewStrands(n));
        }
        let mut out = Vec::new();
        for l in letters {
            if l == 0 || l.unsigned_abs() as usize >= n {
                return Err(BraidError::IndexOutOfRange { letter: l as i64, n });
            }
            push_reduced(&mut out, l);
        }
        Ok(BraidWord { n, letters: out })
    }

    /// Caller guarantees n ≥ 3 and letters in range.
    pub(crate) fn raw(n: usize, letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out = Vec::new();
        for l in letters {
            debug_assert!(l != 0 && (l.unsigned_abs() as usize) < n);
            push_reduced(&mut out, l);
        }
        BraidWord { n, letters: out }
    }

    /// # Panics
    /// If `n < 3`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 3, "strand count must be at least 3");
        BraidWord { n, letters: Vec::new() }
    }

    /// σ_i^{±1}; `i` may be negative.
    pub fn sigma(n: usize, i: i32) -> Result<Self> {
        BraidWord::new(n, [i])
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.n != other.n {
            return Err(BraidError::StrandMismatch(self.n, other.n));
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(BraidWord { n: self.n, letters: out })
    }

    /// Concatenation for words known to share a strand count.
    ///
    /// # Panics
    /// On strand-count mismatch.
    pub fn mul(&self, other: &BraidWord) -> Self {
        self.concat(other).expect("strand counts must agree")
    }

    pub fn invert(&self) -> Self {
        BraidWord { n: self.n, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut out = Vec::new();
        for _ in 0..e.unsigned_abs() {
            for &l in &base.letters {
                push_reduced(&mut out, l);
            }
        }
        BraidWord { n: self.n, letters: out }
    }

    /// g · self · g⁻¹
    pub fn conj_by(&self, g: &BraidWord) -> Self {
        g.mul(self).mul(&g.invert())
    }

    /// [a, b] = a b a⁻¹ b⁻¹
    pub fn commutator(a: &BraidWord, b: &BraidWord) -> Self {
        a.mul(b).mul(&a.invert()).mul(&b.invert())
    }

    pub fn permutation(&self) -> Permutation {
        // position p holds strand strand_at[p]; the image of strand s is its final position
        let mut strand_at: Vec<usize> = (0..self.n).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            strand_at.swap(i - 1, i);
        }
        let mut images = vec![0; self.n];
        for (pos, &s) in strand_at.iter().enumerate() {
            images[s] = pos + 1;
        }
        Permutation { images }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn abelianize(&self) -> AbelianClass {
        let modulus = 2 * (self.n as i64 - 1);
        AbelianClass { value: self.exponent_sum().rem_euclid(modulus) as u64, modulus: modulus as u64 }
    }

    /// Image under deleting every strand not ending in `keep` (1-based
    /// positions); survivors are relabelled in order.
    pub fn forget_strands(&self, keep: &[usize]) -> Result<BraidWord> {
        let mut kept_pos = vec![false; self.n + 1];
        for &p in keep {
            if p == 0 || p > self.n {
                return Err(BraidError::IndexOutOfRange { letter: p as i64, n: self.n });
            }
            kept_pos[p] = true;
        }
        let k = kept_pos.iter().filter(|&&b| b).count();
        if k < 3 {
            return Err(BraidError::TooFewStrands(k));
        }
        // strands are named by their starting position
        let kept_strand = kept_pos.clone();
        let mut strand_at: Vec<usize> = (0..=self.n).collect();
        let mut out = Vec::new();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize;
            let (a, b) = (strand_at[i], strand_at[i + 1]);
            if kept_strand[a] && kept_strand[b] {
                let rank = (1..=i).filter(|&p| kept_strand[strand_at[p]]).count() as i32;
                push_reduced(&mut out, rank * l.signum());
            }
            strand_at.swap(i, i + 1);
        }
        if (1..=self.n).any(|p| kept_pos[p] != kept_strand[strand_at[p]]) {
            return Err(BraidError::KeepIncompatible);
        }
        Ok(BraidWord { n: k, letters: out })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A permutation of {1,…,n}, stored as the image list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation { images })
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    /// Left-to-right product: apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.apply(x)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// Cycles of length ≥ 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for s in 1..=n {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| x == i + 1).count()
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len() as u64))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Exponent sum modulo 2(n−1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AbelianClass {
    pub value: u64,
    pub modulus: u64,
}

/// Catalog of named braids; parameters follow the defining formulas.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum NamedElement {
    Alpha0,
    Alpha1,
    Alpha2,
    AlphaIPrime { i: usize },
    Garside,
    FullTwist,
    Delta { r: usize, i: usize },
    Omega1,
    Omega2,
    RhoJ { j: usize },
    Rho,
    Xi { m: usize, i: usize },
    XiPrime { m: usize, i: usize },
    Lambda { m: usize, i: usize },
    A { i: usize, j: usize },
    Nu,
    Zeta,
    GammaT6,
    DeltaT6,
    Eta { m: usize, i: usize },
    EtaTilde { i: usize },
    V1,
    V2,
}

fn side(name: &str, reason: impl Into<String>) -> BraidError {
    BraidError::SideCondition { name: name.to_string(), reason: reason.into() }
}

/// σ_a σ_{a+1} ⋯ σ_b, empty when a > b.
fn run_up(a: usize, b: usize) -> Vec<i32> {
    if a > b { Vec::new() } else { (a..=b).map(|k| k as i32).collect() }
}

/// σ_a σ_{a−1} ⋯ σ_b, empty when a < b.
fn run_down(a: usize, b: usize) -> Vec<i32> {
    if a < b { Vec::new() } else { (b..=a).rev().map(|k| k as i32).collect() }
}

fn check_i(name: &str, i: usize, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&i) {
        Ok(())
    } else {
        Err(side(name, format!("i = {i} must be one of {allowed:?}")))
    }
}

pub fn alpha(n: usize, i: usize) -> BraidWord {
    let letters = match i {
        0 => run_up(1, n - 1),
        1 => [run_up(1, n - 2), vec![(n - 1) as i32; 2]].concat(),
        _ => [run_up(1, n - 3), vec![(n - 2) as i32; 2]].concat(),
    };
    BraidWord::raw(n, letters)
}

pub fn garside(n: usize) -> BraidWord {
    BraidWord::raw(n, (1..n).rev().flat_map(|k| run_up(1, k)))
}

pub fn full_twist(n: usize) -> BraidWord {
    garside(n).pow(2)
}

/// α_i' = α₀^{i/2} α_i α₀^{−i/2}
pub fn alpha_prime(n: usize, i: usize) -> BraidWord {
    alpha(n, i).conj_by(&alpha(n, 0).pow((i / 2) as i64))
}

pub fn delta_ri(n: usize, r: usize, i: usize) -> BraidWord {
    let count = (n - i - r) / r;
    BraidWord::raw(n, (0..=count).map(|k| (k * r + 1) as i32))
}

fn omega1(n: usize) -> BraidWord {
    let h = n / 2;
    BraidWord::raw(n, (1..h).flat_map(|k| run_up(1, h - k)))
}

fn omega2(n: usize) -> BraidWord {
    let h = n / 2;
    BraidWord::raw(n, (1..h).flat_map(|k| run_up(h + 1, n - k)))
}

fn rho_j(n: usize, j: usize) -> BraidWord {
    BraidWord::raw(n, run_up(j, j + n / 2 - 1))
}

fn rho(n: usize) -> BraidWord {
    BraidWord::raw(n, (1..=n / 2).rev().flat_map(|j| run_up(j, j + n / 2 - 1)))
}

fn xi(n: usize, m: usize, i: usize) -> BraidWord {
    let steps = (n - i) / (2 * m);
    BraidWord::raw(n, (0..steps).map(|k| (2 * m * k + 1 + i / 2) as i32))
}

fn xi_prime(n: usize, m: usize, i: usize) -> BraidWord {
    let steps = (n - i) / (2 * m);
    BraidWord::raw(n, (1..=steps).map(|k| (2 * m * k - 1 + i / 2) as i32))
}

pub fn lambda(n: usize, m: usize, i: usize) -> BraidWord {
    let q = (n - i) / m;
    BraidWord::raw(n, (0..=(q - 2) / 2).map(|j| (m * (1 + 2 * j) + i / 2) as i32))
}

fn a_ij(n: usize, i: usize, j: usize) -> BraidWord {
    let conj = BraidWord::raw(n, run_down(j - 1, i + 1));
    BraidWord::raw(n, [i as i32, i as i32]).conj_by(&conj)
}

fn nu(n: usize) -> BraidWord {
    alpha(n, 0).pow((n / 4) as i64).mul(&omega2(n))
}

fn zeta(n: usize) -> BraidWord {
    omega1(n).mul(&garside(n))
}

fn eta(n: usize, m: usize, i: usize) -> BraidWord {
    let ap = alpha_prime(n, i);
    let x = xi(n, m, i);
    let d = garside(n);
    if m == 1 {
        ap.conj_by(&x).mul(&ap).mul(&d)
    } else {
        ap.pow(m as i64).conj_by(&x).mul(&d)
    }
}

fn eta_tilde(n: usize, i: usize) -> BraidWord {
    let ap = alpha_prime(n, i);
    ap.conj_by(&xi(n, 1, i)).mul(&ap)
}

fn v_index(n: usize) -> usize {
    if n % 2 == 0 { 2 } else { 1 }
}

fn v1(n: usize) -> BraidWord {
    let i = v_index(n);
    alpha(n, i).pow(((n - i) / 2) as i64)
}

fn v2(n: usize) -> BraidWord {
    let i = v_index(n);
    v1(n).conj_by(&BraidWord::raw(n, [(n - i) as i32]))
}

impl NamedElement {
    pub fn name(&self) -> String {
        use NamedElement::*;
        match *self {
            Alpha0 => "a0".into(),
            Alpha1 => "a1".into(),
            Alpha2 => "a2".into(),
            AlphaIPrime { i } => format!("ap({i})"),
            Garside => "D".into(),
            FullTwist => "FT".into(),
            Delta { r, i } => format!("delta({r},{i})"),
            Omega1 => "O1".into(),
            Omega2 => "O2".into(),
            RhoJ { j } => format!("rho({j})"),
            Rho => "rho".into(),
            Xi { m, i } => format!("xi({m},{i})"),
            XiPrime { m, i } => format!("xip({m},{i})"),
            Lambda { m, i } => format!("lam({m},{i})"),
            A { i, j } => format!("A({i},{j})"),
            Nu => "nu".into(),
            Zeta => "zeta".into(),
            GammaT6 => "gT6".into(),
            DeltaT6 => "dT6".into(),
            Eta { m, i } => format!("eta({m},{i})"),
            EtaTilde { i } => format!("etat({i})"),
            V1 => "v1".into(),
            V2 => "v2".into(),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        use NamedElement::*;
        let nm = self.name();
        let nm = nm.as_str();
        if n < 3 {
            return Err(BraidError::TooFewStrands(n));
        }
        let even = |what: &str| if n % 2 == 0 { Ok(()) } else { Err(side(nm, format!("{what} needs n even"))) };
        match *self {
            Alpha0 | Alpha1 | Alpha2 | Garside | FullTwist => Ok(()),
            AlphaIPrime { i } => check_i(nm, i, &[0, 2]),
            Delta { r, i } => {
                check_i(nm, i, &[0, 1, 2])?;
                if r < 2 || (n - i) % r != 0 {
                    return Err(side(nm, format!("need r ≥ 2 dividing n − i = {}", n - i)));
                }
                Ok(())
            }
            Omega1 | Omega2 | Rho | Zeta => even(nm),
            RhoJ { j } => {
                even(nm)?;
                if j == 0 || j > n / 2 {
                    return Err(side(nm, format!("need 1 ≤ j ≤ {}", n / 2)));
                }
                Ok(())
            }
            Xi { m, i } | XiPrime { m, i } => {
                check_i(nm, i, &[0, 2])?;
                if m == 0 || (n - i) % (2 * m) != 0 {
                    return Err(side(nm, format!("need 2m dividing n − i = {}", n - i)));
                }
                Ok(())
            }
            Lambda { m, i } => {
                check_i(nm, i, &[0, 2])?;
                if m == 0 || (n - i) % m != 0 || ((n - i) / m) % 2 != 0 || (n - i) / m < 2 {
                    return Err(side(nm, format!("need (n − i)/m even, n − i = {}", n - i)));
                }
                Ok(())
            }
            A { i, j } => {
                if i == 0 || i >= j || j > n {
                    return Err(side(nm, format!("need 1 ≤ i < j ≤ {n}")));
                }
                Ok(())
            }
            Nu => {
                if n % 4 != 0 {
                    return Err(side(nm, "needs n ≡ 0 mod 4"));
                }
                Ok(())
            }
            GammaT6 | DeltaT6 => {
                if n != 6 {
                    return Err(side(nm, "defined for n = 6 only"));
                }
                Ok(())
            }
            Eta { m, i } => {
                check_i(nm, i, &[0, 2])?;
                if m == 0 || (n - i) % (2 * m) != 0 || (n - i) / m < 4 {
                    return Err(side(nm, format!("need 2m dividing n − i = {} and (n − i)/m ≥ 4", n - i)));
                }
                Ok(())
            }
            EtaTilde { i } => {
                check_i(nm, i, &[0, 2])?;
                if (n - i) % 2 != 0 || n - i < 2 {
                    return Err(side(nm, "needs n − i even and ≥ 2"));
                }
                Ok(())
            }
            V1 | V2 => {
                let i = v_index(n);
                if (n - i) % 2 != 0 || n < 4 {
                    return Err(side(nm, "needs n ≥ 4"));
                }
                Ok(())
            }
        }
    }
}

pub fn std_element(name: NamedElement, n: usize) -> Result<BraidWord> {
    use NamedElement::*;
    name.check(n)?;
    Ok(match name {
        Alpha0 => alpha(n, 0),
        Alpha1 => alpha(n, 1),
        Alpha2 => alpha(n, 2),
        AlphaIPrime { i } => alpha_prime(n, i),
        Garside => garside(n),
        FullTwist => full_twist(n),
        Delta { r, i } => delta_ri(n, r, i),
        Omega1 => omega1(n),
        Omega2 => omega2(n),
        RhoJ { j } => rho_j(n, j),
        Rho => rho(n),
        Xi { m, i } => xi(n, m, i),
        XiPrime { m, i } => xi_prime(n, m, i),
        Lambda { m, i } => lambda(n, m, i),
        A { i, j } => a_ij(n, i, j),
        Nu => nu(n),
        Zeta => zeta(n),
        GammaT6 => BraidWord::raw(6, [5, 4, -1, -2]),
        DeltaT6 => BraidWord::raw(6, [-3, -4, -5, -2, -1, -2, 5, 4, 5, 5, 4, 3]),
        Eta { m, i } => eta(n, m, i),
        EtaTilde { i } => eta_tilde(n, i),
        V1 => v1(n),
        V2 => v2(n),
    })
}

fn named_from(name: &str, params: &[usize]) -> Result<NamedElement> {
    use NamedElement::*;
    let bad = || BraidError::Malformed(format!("{name}{params:?}"));
    Ok(match (name, params) {
        ("a0", []) => Alpha0,
        ("a1", []) => Alpha1,
        ("a2", []) => Alpha2,
        ("ap", [i]) => AlphaIPrime { i: *i },
        ("D", []) => Garside,
        ("FT", []) => FullTwist,
        ("delta", [r, i]) => Delta { r: *r, i: *i },
        ("O1", []) => Omega1,
        ("O2", []) => Omega2,
        ("rho", []) => Rho,
        ("rho", [j]) => RhoJ { j: *j },
        ("xi", [i]) => Xi { m: 1, i: *i },
        ("xi", [m, i]) => Xi { m: *m, i: *i },
        ("xip", [i]) => XiPrime { m: 1, i: *i },
        ("xip", [m, i]) => XiPrime { m: *m, i: *i },
        ("lam", [i]) => Lambda { m: 1, i: *i },
        ("lam", [m, i]) => Lambda { m: *m, i: *i },
        ("A", [i, j]) => A { i: *i, j: *j },
        ("nu", []) => Nu,
        ("zeta", []) => Zeta,
        ("gT6", []) => GammaT6,
        ("dT6", []) => DeltaT6,
        ("eta", [m, i]) => Eta { m: *m, i: *i },
        ("etat", [i]) => EtaTilde { i: *i },
        ("v1", []) => V1,
        ("v2", []) => V2,
        ("a0" | "a1" | "a2" | "ap" | "D" | "FT" | "delta" | "O1" | "O2" | "rho" | "xi" | "xip" | "lam" | "A"
        | "nu" | "zeta" | "gT6" | "dT6" | "eta" | "etat" | "v1" | "v2", _) => return Err(bad()),
        _ => return Err(BraidError::UnknownName(name.to_string())),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Name(String, Vec<usize>),
    Open,
    Close,
    Caret,
    Star,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut p = 0;
    while p < chars.len() {
        let c = chars[p];
        if c.is_whitespace() {
            p += 1;
        } else if c == '(' {
            toks.push(Tok::Open);
            p += 1;
        } else if c == ')' {
            toks.push(Tok::Close);
            p += 1;
        } else if c == '^' {
            toks.push(Tok::Caret);
            p += 1;
        } else if c == '*' {
            toks.push(Tok::Star);
            p += 1;
        } else if c == '-' || c == '+' || c.is_ascii_digit() {
            let start = p;
            p += 1;
            while p < chars.len() && chars[p].is_ascii_digit() {
                p += 1;
            }
            let s: String = chars[start..p].iter().collect();
            let v = s.parse::<i64>().map_err(|_| BraidError::Malformed(s.clone()))?;
            toks.push(Tok::Int(v));
        } else if c.is_ascii_alphabetic() {
            let start = p;
            while p < chars.len() && (chars[p].is_ascii_alphanumeric() || chars[p] == '_') {
                p += 1;
            }
            let name: String = chars[start..p].iter().collect();
            let mut params = Vec::new();
            if p < chars.len() && chars[p] == '(' {
                let close = chars[p..].iter().position(|&c| c == ')').map(|k| p + k);
                let close = close.ok_or_else(|| BraidError::Malformed(name.clone()))?;
                let inner: String = chars[p + 1..close].iter().collect();
                for part in inner.split(',') {
                    let part = part.trim();
                    params.push(part.parse::<usize>().map_err(|_| BraidError::Malformed(format!("{name}({inner})")))?);
                }
                p = close + 1;
            }
            toks.push(Tok::Name(name, params));
        } else {
            return Err(BraidError::Malformed(c.to_string()));
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn expr(&mut self) -> Result<BraidWord> {
        let mut acc = BraidWord::identity(self.n);
        while self.pos < self.toks.len() {
            match self.toks[self.pos] {
                Tok::Close => break,
                Tok::Star => {
                    self.pos += 1;
                    continue;
                }
                _ => {}
            }
            let t = self.term()?;
            acc = acc.mul(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BraidWord> {
        let base = match self.toks[self.pos].clone() {
            Tok::Int(k) => {
                self.pos += 1;
                if k == 0 || k.unsigned_abs() as usize >= self.n {
                    return Err(BraidError::IndexOutOfRange { letter: k, n: self.n });
                }
                BraidWord::raw(self.n, [k as i32])
            }
            Tok::Name(name, params) => {
                self.pos += 1;
                if name == "id" && params.is_empty() {
                    BraidWord::identity(self.n)
                } else {
                    std_element(named_from(&name, &params)?, self.n)?
                }
            }
            Tok::Open => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.toks.get(self.pos) != Some(&Tok::Close) {
                    return Err(BraidError::Malformed("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                inner
            }
            Tok::Caret => return Err(BraidError::Malformed("^".into())),
            Tok::Star | Tok::Close => unreachable!(),
        };
        if self.toks.get(self.pos) == Some(&Tok::Caret) {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    return Ok(base.pow(*e));
                }
                _ => return Err(BraidError::Malformed("exponent".into())),
            }
        }
        Ok(base)
    }
}

/// Parses signed integers and the named-element DSL, e.g. `"a0^4 * D 1 -2"`.
pub fn parse_braid(text: &str, n: usize) -> Result<BraidWord> {
    if n < 3 {
        return Err(BraidError::TooFewStrands(n));
    }
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, pos: 0, n };
    let w = p.expr()?;
    if p.pos != toks.len() {
        return Err(BraidError::Malformed("unbalanced parenthesis".into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_braid("1 2 -3", 4).unwrap().letters(), &[1, 2, -3]);
        assert!(parse_braid("1 -1", 4).unwrap().is_empty());
        assert_eq!(parse_braid("a0^4", 4).unwrap().letters(), [1, 2, 3].repeat(4).as_slice());
        assert_eq!(parse_braid("(1 2)^-1 * id", 4).unwrap().letters(), &[-2, -1]);
        assert!(matches!(parse_braid("4", 4), Err(BraidError::IndexOutOfRange { .. })));
        assert!(matches!(parse_braid("foo", 4), Err(BraidError::UnknownName(_))));
        assert!(matches!(parse_braid("O1", 5), Err(BraidError::SideCondition { .. })));
        assert!(matches!(parse_braid("1 $", 4), Err(BraidError::Malformed(_))));
    }

    #[test]
    fn concat_and_invert() {
        let s = |l: &[i32]| BraidWord::new(4, l.iter().copied()).unwrap();
        assert!(s(&[1]).mul(&s(&[-1])).is_empty());
        assert_eq!(s(&[1, 2]).invert().letters(), &[-2, -1]);
        assert_eq!(s(&[1, 2]).mul(&s(&[-2, 3])).letters(), &[1, 3]);
        assert!(s(&[1]).concat(&BraidWord::identity(5)).is_err());
    }

    #[test]
    fn permutation_convention() {
        let p = BraidWord::sigma(4, 1).unwrap().permutation();
        assert_eq!(p.to_string(), "(1 2)");
        let p = alpha(6, 0).permutation();
        assert_eq!(p.apply(1), 6);
        for k in 2..=6 {
            assert_eq!(p.apply(k), k - 1);
        }
        assert!(BraidWord::identity(5).permutation().is_identity());
    }

    #[test]
    fn abelian_classes() {
        assert_eq!(alpha(6, 0).abelianize(), AbelianClass { value: 5, modulus: 10 });
        assert_eq!(BraidWord::sigma(7, 3).unwrap().abelianize().value, 1);
    }

    #[test]
    fn catalog_literals() {
        assert_eq!(std_element(NamedElement::A { i: 1, j: 2 }, 4).unwrap().letters(), &[1, 1]);
        assert_eq!(std_element(NamedElement::Delta { r: 2, i: 0 }, 4).unwrap().letters(), &[1, 3]);
        let nu8 = std_element(NamedElement::Nu, 8).unwrap();
        let expect = alpha(8, 0).pow(2).mul(&BraidWord::raw(8, [5, 6, 7, 5, 6, 5]));
        assert_eq!(nu8, expect);
        assert_eq!(std_element(NamedElement::Omega1, 6).unwrap().letters(), &[1, 2, 1]);
        assert_eq!(std_element(NamedElement::RhoJ { j: 2 }, 6).unwrap().letters(), &[2, 3, 4]);
        assert_eq!(garside(4).letters(), &[1, 2, 3, 1, 2, 1]);
    }

    #[test]
    fn forget_untouched_strands() {
        let w = BraidWord::new(6, [1, 1, 3, 3]).unwrap();
        let f = w.forget_strands(&[1, 2, 3, 4]).unwrap();
        assert_eq!(f, BraidWord::new(4, [1, 1, 3, 3]).unwrap());
        let bad = BraidWord::new(6, [4]).unwrap();
        assert_eq!(bad.forget_strands(&[1, 2, 3, 4]), Err(BraidError::KeepIncompatible));
    }

    #[test]
    fn forget_relabels() {
        let w = BraidWord::new(4, [2]).unwrap();
        let f = w.forget_strands(&[1, 3, 4]);
        assert!(f.is_err());
        let w = BraidWord::new(4, [3, 3, 1, 1]).unwrap();
        assert_eq!(w.forget_strands(&[1, 3, 4]).unwrap().letters(), &[2, 2]);
    }
}
