//! Finite groups as explicit multiplication tables: coset enumeration,
//! direct formulas, subgroup lattices, isomorphism and automorphism groups.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("coset budget of {0} exhausted")]
    BudgetExhausted(usize),
    #[error("inconsistent coset table")]
    Inconsistent,
    #[error("parameter {0} out of range for {1}")]
    OutOfRange(usize, &'static str),
    #[error("unknown group tag `{0}`")]
    UnknownTag(String),
    #[error("group of order {0} exceeds the enumeration cap of 200")]
    TooLarge(usize),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("multiplication table has no identity")]
    NoIdentity,
    #[error("map is not an automorphism")]
    NotAutomorphism,
}

pub type Result<T> = std::result::Result<T, GroupError>;

pub const SUBGROUP_CAP: usize = 200;

/// Coset limit, overridable through `SPHEREBRAID_COSET_BUDGET`.
pub fn coset_budget() -> usize {
    std::env::var("SPHEREBRAID_COSET_BUDGET").ok().and_then(|v| v.parse().ok()).unwrap_or(100_000)
}

/// Generators and relators; letter `k` is generator k−1, `-k` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Vec<i32>>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<i32>>) -> Self {
        let relators = relators
            .into_iter()
            .map(|r| {
                let mut out: Vec<i32> = Vec::new();
                for l in r {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                out
            })
            .collect();
        Presentation { generators, relators }
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Vec<i32>] {
        &self.relators
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mult: Vec<usize>,
    inv: Vec<usize>,
    orders: Vec<usize>,
    gens: Vec<usize>,
    presentation: Option<Presentation>,
}

impl FiniteGroup {
    /// Builds from a product rule on 0..order; index 0 must be the identity.
    pub fn from_rule(
        name: &str,
        order: usize,
        rule: impl Fn(usize, usize) -> usize,
        gens: Vec<usize>,
        presentation: Option<Presentation>,
    ) -> Result<Self> {
        let mut mult = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                mult[a * order + b] = rule(a, b);
            }
        }
        FiniteGroup::from_table(name, order, mult, gens, presentation)
    }

    pub fn from_table(
        name: &str,
        order: usize,
        mult: Vec<usize>,
        gens: Vec<usize>,
        presentation: Option<Presentation>,
    ) -> Result<Self> {
        if order == 0 || (0..order).any(|x| mult[x] != x || mult[x * order] != x) {
            return Err(GroupError::NoIdentity);
        }
        let mut inv = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mult[a * order + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
            if inv[a] == usize::MAX {
                return Err(GroupError::Inconsistent);
            }
        }
        let mut orders = vec![0; order];
        for a in 0..order {
            let (mut x, mut k) = (a, 1);
            while x != 0 {
                x = mult[x * order + a];
                k += 1;
            }
            orders[a] = k;
        }
        Ok(FiniteGroup { name: name.to_string(), order, mult, inv, orders, gens, presentation })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elem_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let k = e.unsigned_abs() % self.orders[a] as u64;
        (0..k).fold(0, |acc, _| self.mul(acc, base))
    }

    /// g a g⁻¹
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Evaluates a word in the distinguished generators.
    pub fn eval(&self, word: &[i32]) -> usize {
        word.iter().fold(0, |acc, &l| {
            let g = self.gens[l.unsigned_abs() as usize - 1];
            self.mul(acc, if l > 0 { g } else { self.inv(g) })
        })
    }

    /// A shortest positive word in the distinguished generators for each element.
    pub fn generator_words(&self) -> Vec<Option<Vec<i32>>> {
        let mut words: Vec<Option<Vec<i32>>> = vec![None; self.order];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (k, &g) in self.gens.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(k as i32 + 1);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        words
    }

    /// # Panics
    /// If the generators do not reach `e`.
    pub fn word_in_presentation(&self, e: usize) -> Vec<i32> {
        self.generator_words()[e].clone().expect("generators generate")
    }

    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &o in &self.orders {
            *h.entry(o).or_insert(0) += 1;
        }
        h
    }

    /// Closure of a generating set, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    /// The subgroup on `elems` as a group in its own right, with the embedding.
    pub fn subgroup_group(&self, elems: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let mut embed: Vec<usize> = elems.to_vec();
        embed.sort_unstable();
        let mut index = HashMap::new();
        for (k, &e) in embed.iter().enumerate() {
            index.insert(e, k);
        }
        let m = embed.len();
        let mut mult = vec![0; m * m];
        for a in 0..m {
            for b in 0..m {
                mult[a * m + b] = index[&self.mul(embed[a], embed[b])];
            }
        }
        let g = FiniteGroup::from_table("subgroup", m, mult, Vec::new(), None).expect("subgroup tables are groups");
        let gens = small_generating_set(&g);
        (FiniteGroup { gens, ..g }, embed)
    }
}

const UNDEF: usize = usize::MAX;

struct Enumerator {
    ncols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    live: usize,
    relators: Vec<Vec<usize>>,
    queue: Vec<usize>,
}

fn col(l: i32) -> usize {
    2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0)
}

impl Enumerator {
    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.ncols + x]
    }

    fn set(&mut self, c: usize, x: usize, v: usize) {
        self.table[c * self.ncols + x] = v;
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) {
        let d = self.rows();
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.live += 1;
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut qi = 0;
        while qi < self.queue.len() {
            let e = self.queue[qi];
            qi += 1;
            for x in 0..self.ncols {
                let f = self.get(e, x);
                if f == UNDEF {
                    continue;
                }
                if self.get(f, x ^ 1) == e {
                    self.set(f, x ^ 1, UNDEF);
                }
                let mu = self.rep(e);
                let nu = self.rep(f);
                let mux = self.get(mu, x);
                if mux != UNDEF {
                    self.merge(nu, mux);
                } else {
                    let nux = self.get(nu, x ^ 1);
                    if nux != UNDEF {
                        self.merge(mu, nux);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                    }
                }
            }
        }
        self.queue.clear();
    }

    /// Scans relator `r` at coset `c`; defines missing cosets when `fill`.
    fn scan(&mut self, c: usize, r: usize, fill: bool) {
        let len = self.relators[r].len();
        if len == 0 {
            return;
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, len as isize - 1);
        loop {
            while (i as isize) <= j {
                let next = self.get(f, self.relators[r][i]);
                if next == UNDEF {
                    break;
                }
                f = next;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize {
                let next = self.get(b, self.relators[r][j as usize] ^ 1);
                if next == UNDEF {
                    break;
                }
                b = next;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            } else if j == i as isize {
                let x = self.relators[r][i];
                self.set(f, x, b);
                self.set(b, x ^ 1, f);
                return;
            } else if fill {
                self.define(f, self.relators[r][i]);
            } else {
                return;
            }
        }
    }

    fn lookahead(&mut self) {
        for c in 0..self.rows() {
            for r in 0..self.relators.len() {
                if self.alive(c) {
                    self.scan(c, r, false);
                }
            }
        }
    }

    /// Renumbers live cosets in order; returns the old-to-new map.
    fn compact(&mut self) -> Vec<usize> {
        let mut map = vec![UNDEF; self.rows()];
        let mut k = 0;
        for c in 0..self.rows() {
            if self.alive(c) {
                map[c] = k;
                k += 1;
            }
        }
        let mut table = vec![UNDEF; k * self.ncols];
        for c in 0..self.rows() {
            if map[c] == UNDEF {
                continue;
            }
            for x in 0..self.ncols {
                let v = self.get(c, x);
                if v != UNDEF {
                    let r = self.rep(v);
                    table[map[c] * self.ncols + x] = map[r];
                }
            }
        }
        self.table = table;
        self.parent = (0..k).collect();
        map
    }
}

/// HLT coset enumeration over the trivial subgroup, with lookahead when the
/// table outgrows `limit`.
pub fn todd_coxeter(p: &Presentation, limit: usize) -> Result<FiniteGroup> {
    let ngens = p.generator_count();
    let ncols = 2 * ngens;
    let mut e = Enumerator {
        ncols,
        table: vec![UNDEF; ncols],
        parent: vec![0],
        live: 1,
        relators: p.relators.iter().map(|r| r.iter().map(|&l| col(l)).collect()).collect(),
        queue: Vec::new(),
    };
    let mut c = 0;
    while c < e.rows() {
        if e.alive(c) {
            for r in 0..e.relators.len() {
                if !e.alive(c) {
                    break;
                }
                e.scan(c, r, true);
            }
            if e.alive(c) {
                for x in 0..ncols {
                    if e.get(c, x) == UNDEF {
                        e.define(c, x);
                    }
                }
            }
        }
        c += 1;
        if e.rows() > limit {
            e.lookahead();
            let map = e.compact();
            c = map[..c.min(map.len())].iter().filter(|&&m| m != UNDEF).count();
            if e.live >= limit {
                return Err(GroupError::BudgetExhausted(limit));
            }
        }
    }
    e.compact();
    let order = e.rows();
    if e.table.contains(&UNDEF) {
        return Err(GroupError::Inconsistent);
    }
    // coset words: positive generator columns from coset 0
    let mut words: Vec<Option<Vec<usize>>> = vec![None; order];
    words[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for g in 0..ngens {
            let y = e.get(x, 2 * g);
            if words[y].is_none() {
                let mut w = words[x].clone().unwrap();
                w.push(g);
                words[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    let words: Vec<Vec<usize>> = words.into_iter().map(|w| w.ok_or(GroupError::Inconsistent)).collect::<Result<_>>()?;
    let mut mult = vec![0; order * order];
    for a in 0..order {
        for (b, w) in words.iter().enumerate() {
            mult[a * order + b] = w.iter().fold(a, |x, &g| e.get(x, 2 * g));
        }
    }
    let gens = (0..ngens).map(|g| e.get(0, 2 * g)).collect();
    let g = FiniteGroup::from_table("fp", order, mult, gens, Some(p.clone()))?;
    Ok(g)
}

/// Families built by the library.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", content = "param", rename_all = "snake_case")]
pub enum GroupFamily {
    Cyclic(usize),
    /// order 2m
    Dihedral(usize),
    /// order 4m
    Dicyclic(usize),
    TStar,
    OStar,
    IStar,
    A4,
    S4,
    A5,
}

fn is_power_of_two(k: usize) -> bool {
    k.is_power_of_two()
}

impl GroupFamily {
    pub fn order(&self) -> usize {
        match *self {
            GroupFamily::Cyclic(q) => q,
            GroupFamily::Dihedral(m) => 2 * m,
            GroupFamily::Dicyclic(m) => 4 * m,
            GroupFamily::TStar => 24,
            GroupFamily::OStar => 48,
            GroupFamily::IStar => 120,
            GroupFamily::A4 => 12,
            GroupFamily::S4 => 24,
            GroupFamily::A5 => 60,
        }
    }

    /// Image modulo the unique central involution.
    pub fn central_quotient(&self) -> GroupFamily {
        match *self {
            GroupFamily::Cyclic(q) => GroupFamily::Cyclic(if q % 2 == 0 { q / 2 } else { q }),
            GroupFamily::Dicyclic(m) => GroupFamily::Dihedral(m),
            GroupFamily::TStar => GroupFamily::A4,
            GroupFamily::OStar => GroupFamily::S4,
            GroupFamily::IStar => GroupFamily::A5,
            other => other,
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupFamily::Cyclic(q) => write!(f, "Z{q}"),
            GroupFamily::Dihedral(2) => write!(f, "Z2xZ2"),
            GroupFamily::Dihedral(m) => write!(f, "Dih{}", 2 * m),
            GroupFamily::Dicyclic(m) if is_power_of_two(m) => write!(f, "Q{}", 4 * m),
            GroupFamily::Dicyclic(m) => write!(f, "Dic{}", 4 * m),
            GroupFamily::TStar => write!(f, "T*"),
            GroupFamily::OStar => write!(f, "O*"),
            GroupFamily::IStar => write!(f, "I*"),
            GroupFamily::A4 => write!(f, "A4"),
            GroupFamily::S4 => write!(f, "S4"),
            GroupFamily::A5 => write!(f, "A5"),
        }
    }
}

impl FromStr for GroupFamily {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
        let bad = || GroupError::UnknownTag(s.to_string());
        Ok(match s {
            "T*" | "Tstar" => GroupFamily::TStar,
            "O*" | "Ostar" => GroupFamily::OStar,
            "I*" | "Istar" => GroupFamily::IStar,
            "A4" => GroupFamily::A4,
            "S4" => GroupFamily::S4,
            "A5" => GroupFamily::A5,
            "Z2xZ2" | "Z2+Z2" => GroupFamily::Dihedral(2),
            _ => {
                if let Some(k) = num("Dic") {
                    if k % 4 != 0 || k < 8 {
                        return Err(bad());
                    }
                    GroupFamily::Dicyclic(k / 4)
                } else if let Some(k) = num("Dih") {
                    if k % 2 != 0 || k < 4 {
                        return Err(bad());
                    }
                    GroupFamily::Dihedral(k / 2)
                } else if let Some(k) = num("Q") {
                    if k < 8 || !is_power_of_two(k) {
                        return Err(bad());
                    }
                    GroupFamily::Dicyclic(k / 4)
                } else if let Some(k) = num("Z") {
                    if k == 0 {
                        return Err(bad());
                    }
                    GroupFamily::Cyclic(k)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Relator helper: `a b a⁻¹ c⁻¹` style words from signed letters.
fn pres(gens: &[&str], rels: &[&[i32]]) -> Presentation {
    Presentation::new(names(gens), rels.iter().map(|r| r.to_vec()).collect())
}

pub fn presentation_of(kind: GroupFamily) -> Presentation {
    match kind {
        GroupFamily::Cyclic(q) => pres(&["x"], &[&vec![1; q]]),
        GroupFamily::Dicyclic(m) => {
            let mut r1 = vec![1; m];
            r1.extend([-2, -2]);
            pres(&["x", "y"], &[&r1, &[2, 1, -2, 1]])
        }
        GroupFamily::Dihedral(m) => pres(&["x", "y"], &[&vec![1; m], &[2, 2], &[2, 1, -2, 1]]),
        // P, Q, X
        GroupFamily::TStar => pres(
            &["P", "Q", "X"],
            &[&[3, 3, 3], &[1, 1, -2, -2], &[1, 2, -1, 2], &[3, 1, -3, -2], &[3, 2, -3, -2, -1]],
        ),
        // P, Q, X, R
        GroupFamily::OStar => pres(
            &["P", "Q", "X", "R"],
            &[
                &[3, 3, 3],
                &[1, 1, -2, -2],
                &[1, 1, -4, -4],
                &[1, 2, -1, 2],
                &[3, 1, -3, -2],
                &[3, 2, -3, -2, -1],
                &[4, 3, -4, 3],
                &[4, 1, -4, -1, -2],
                &[4, 2, -4, 2],
            ],
        ),
        // (ST)² = S³ = T⁵
        GroupFamily::IStar => pres(&["S", "T"], &[&[1, 2, 1, 2, -1, -1, -1], &[1, 1, 1, -2, -2, -2, -2, -2]]),
        // a, b span the Klein group, X of order 3 permutes them
        GroupFamily::A4 => pres(
            &["a", "b", "X"],
            &[&[1, 1], &[2, 2], &[1, 2, 1, 2], &[3, 3, 3], &[3, 1, -3, -2], &[3, 2, -3, -2, -1]],
        ),
        GroupFamily::S4 => pres(&["a", "b"], &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2, 1, 2, 1, 2]]),
        GroupFamily::A5 => pres(&["a", "b"], &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2, 1, 2, 1, 2, 1, 2]]),
    }
}

fn enumerate_family(kind: GroupFamily) -> FiniteGroup {
    todd_coxeter(&presentation_of(kind), coset_budget())
        .expect("catalog presentations enumerate")
        .with_name(&kind.to_string())
}

fn cached(kind: GroupFamily) -> FiniteGroup {
    static T: OnceLock<FiniteGroup> = OnceLock::new();
    static O: OnceLock<FiniteGroup> = OnceLock::new();
    static I: OnceLock<FiniteGroup> = OnceLock::new();
    static A4: OnceLock<FiniteGroup> = OnceLock::new();
    static S4: OnceLock<FiniteGroup> = OnceLock::new();
    static A5: OnceLock<FiniteGroup> = OnceLock::new();
    let cell = match kind {
        GroupFamily::TStar => &T,
        GroupFamily::OStar => &O,
        GroupFamily::IStar => &I,
        GroupFamily::A4 => &A4,
        GroupFamily::S4 => &S4,
        _ => &A5,
    };
    cell.get_or_init(|| enumerate_family(kind)).clone()
}

/// Cyclic, dihedral and dicyclic groups by formula; the rest by enumeration.
pub fn make_group(kind: GroupFamily) -> Result<FiniteGroup> {
    let name = kind.to_string();
    match kind {
        GroupFamily::Cyclic(q) => {
            if q == 0 {
                return Err(GroupError::OutOfRange(q, "cyclic"));
            }
            FiniteGroup::from_rule(&name, q, |a, b| (a + b) % q, vec![1 % q], Some(presentation_of(kind)))
        }
        GroupFamily::Dicyclic(m) => {
            if m < 2 {
                return Err(GroupError::OutOfRange(m, "dicyclic"));
            }
            // x^a y^b at index a + 2m b
            let t = 2 * m;
            let rule = move |u: usize, v: usize| {
                let (a, b, c, d) = (u % t, u / t, v % t, v / t);
                if b == 0 {
                    (a + c) % t + t * d
                } else if d == 0 {
                    (a + t - c) % t + t
                } else {
                    (a + t - c + m) % t
                }
            };
            FiniteGroup::from_rule(&name, 4 * m, rule, vec![1, t], Some(presentation_of(kind)))
        }
        GroupFamily::Dihedral(m) => {
            if m < 2 {
                return Err(GroupError::OutOfRange(m, "dihedral"));
            }
            let rule = move |u: usize, v: usize| {
                let (a, b, c, d) = (u % m, u / m, v % m, v / m);
                let x = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                x + m * ((b + d) % 2)
            };
            FiniteGroup::from_rule(&name, 2 * m, rule, vec![1, m], Some(presentation_of(kind)))
        }
        _ => Ok(cached(kind)),
    }
}

/// Extends `gens[k] ↦ images[k]` along ⟨gens⟩; None when inconsistent.
pub fn extend_hom(g: &FiniteGroup, gens: &[usize], h: &FiniteGroup, images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![UNDEF; g.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let v = h.mul(map[x], images[k]);
            if map[y] == UNDEF {
                map[y] = v;
                queue.push_back(y);
            } else if map[y] != v {
                return None;
            }
        }
    }
    Some(map)
}

/// A short generating set: one element if cyclic, else a pair if possible.
pub fn small_generating_set(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    let mut by_order: Vec<usize> = (1..n).collect();
    by_order.sort_by_key(|&x| (std::cmp::Reverse(g.elem_order(x)), x));
    if g.elem_order(by_order[0]) == n {
        return vec![by_order[0]];
    }
    let max = g.elem_order(by_order[0]);
    for &a in by_order.iter().take_while(|&&a| g.elem_order(a) == max) {
        for &b in &by_order {
            if g.closure(&[a, b]).len() == n {
                return vec![a, b];
            }
        }
    }
    let mut gens = Vec::new();
    let mut span = vec![0];
    for &x in &by_order {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.closure(&gens);
            if span.len() == n {
                break;
            }
        }
    }
    gens
}

/// Enumerates homomorphisms fixed by images of `gens` (injective ones only
/// when asked); `visit` returns false to stop.
pub fn search_homs(
    g: &FiniteGroup,
    gens: &[usize],
    h: &FiniteGroup,
    injective: bool,
    mut visit: impl FnMut(Vec<usize>) -> bool,
) {
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.elem_order(s);
            let mut c: Vec<usize> = h
                .elements()
                .filter(|&y| if injective { h.elem_order(y) == o } else { o % h.elem_order(y) == 0 })
                .collect();
            c.sort_by_key(|&y| (h.elem_order(y), y));
            c
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    fn rec(
        g: &FiniteGroup,
        gens: &[usize],
        h: &FiniteGroup,
        cand: &[Vec<usize>],
        images: &mut Vec<usize>,
        injective: bool,
        visit: &mut dyn FnMut(Vec<usize>) -> bool,
    ) -> bool {
        let k = images.len();
        if k > 0 {
            let Some(map) = extend_hom(g, &gens[..k], h, images) else { return true };
            if injective {
                let dom = map.iter().filter(|&&v| v != UNDEF).count();
                let mut img: Vec<usize> = map.iter().copied().filter(|&v| v != UNDEF).collect();
                img.sort_unstable();
                img.dedup();
                if img.len() != dom {
                    return true;
                }
            }
            if k == gens.len() {
                return visit(map);
            }
        }
        for &y in &cand[k] {
            images.push(y);
            let go_on = rec(g, gens, h, cand, images, injective, visit);
            images.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if gens.is_empty() {
        visit(vec![0; g.order()]);
        return;
    }
    rec(g, gens, h, &candidates, &mut images, injective, &mut visit);
}

/// Invariants compared before any backtracking.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub order: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub center: usize,
    pub derived: usize,
    pub abelianization: Vec<usize>,
}

pub fn invariants(g: &FiniteGroup) -> Invariants {
    let derived = derived_subgroup(g);
    let ab = quotient(g, &derived).expect("derived subgroup is normal");
    Invariants {
        order: g.order(),
        histogram: g.order_histogram(),
        center: center(g).len(),
        derived: derived.len(),
        abelianization: abelian_invariants(&ab),
    }
}

/// Finds an isomorphism g → h as an element map.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<Vec<usize>> {
    if g.order() != h.order() || g.order_histogram() != h.order_histogram() {
        return None;
    }
    if invariants(g) != invariants(h) {
        return None;
    }
    let gens = small_generating_set(g);
    let mut found = None;
    search_homs(g, &gens, h, true, |map| {
        found = Some(map);
        false
    });
    found
}

pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    find_isomorphism(g, h).is_some()
}

pub fn center(g: &FiniteGroup) -> Vec<usize> {
    g.elements().filter(|&z| g.elements().all(|x| g.mul(z, x) == g.mul(x, z))).collect()
}

pub fn derived_subgroup(g: &FiniteGroup) -> Vec<usize> {
    let mut comms = BTreeSet::new();
    for a in g.elements() {
        for b in g.elements() {
            comms.insert(g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
        }
    }
    g.closure(&comms.into_iter().collect::<Vec<_>>())
}

pub fn is_normal(g: &FiniteGroup, sub: &[usize]) -> bool {
    let mut member = vec![false; g.order()];
    for &x in sub {
        member[x] = true;
    }
    let gens = if g.gens().is_empty() { small_generating_set(g) } else { g.gens().to_vec() };
    gens.iter().all(|&s| sub.iter().all(|&x| member[g.conj(s, x)]))
}

pub fn normal_closure(g: &FiniteGroup, elems: &[usize]) -> Vec<usize> {
    let mut gens: BTreeSet<usize> = elems.iter().copied().collect();
    for &x in elems {
        for y in g.elements() {
            gens.insert(g.conj(y, x));
        }
    }
    g.closure(&gens.into_iter().collect::<Vec<_>>())
}

/// Cosets G/N and their multiplication; generators map to cosets of G's generators.
pub fn quotient(g: &FiniteGroup, normal: &[usize]) -> Result<FiniteGroup> {
    if !is_normal(g, normal) {
        return Err(GroupError::NotNormal);
    }
    let mut coset = vec![UNDEF; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if coset[x] == UNDEF {
            let k = reps.len();
            reps.push(x);
            for &m in normal {
                coset[g.mul(x, m)] = k;
            }
        }
    }
    let k = reps.len();
    let mut mult = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            mult[a * k + b] = coset[g.mul(reps[a], reps[b])];
        }
    }
    let gens = g.gens().iter().map(|&s| coset[s]).collect();
    FiniteGroup::from_table(&format!("{}/N", g.name()), k, mult, gens, None)
}

/// Invariant factors d₁ | d₂ | … of an abelian group.
pub fn abelian_invariants(g: &FiniteGroup) -> Vec<usize> {
    let n = g.order();
    let mut primes = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    // for each prime, the partition of the p-part from the counts of p^k-torsion
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for &p in &primes {
        let mut lambda = Vec::new();
        let mut prev = 1usize;
        let mut k = 1u32;
        loop {
            let c = g.elements().filter(|&x| g.pow(x, p.pow(k) as i64) == 0 && pp(g.elem_order(x), p)).count();
            if c == prev {
                break;
            }
            let mut r = 0;
            let mut q = c / prev;
            while q > 1 {
                q /= p;
                r += 1;
            }
            lambda.push(r);
            prev = c;
            k += 1;
        }
        // lambda[k] = #{cyclic factors of order ≥ p^{k+1}}
        let count = lambda.first().copied().unwrap_or(0);
        let mut exps = vec![0u32; count];
        for (k, &r) in lambda.iter().enumerate() {
            for e in exps.iter_mut().take(r) {
                *e = k as u32 + 1;
            }
        }
        parts.push(exps.into_iter().map(|e| p.pow(e)).collect());
    }
    let len = parts.iter().map(|v| v.len()).max().unwrap_or(0);
    let mut factors = vec![1usize; len];
    for v in &parts {
        for (k, &q) in v.iter().enumerate() {
            factors[len - 1 - k] *= q;
        }
    }
    factors.reverse();
    factors.sort_unstable();
    factors
}

fn pp(o: usize, p: usize) -> bool {
    let mut o = o;
    while o % p == 0 {
        o /= p;
    }
    o == 1
}

fn family_candidates(order: usize) -> Vec<GroupFamily> {
    let mut c = Vec::new();
    if order % 4 == 0 && order >= 8 {
        c.push(GroupFamily::Dicyclic(order / 4));
    }
    if order % 2 == 0 && order >= 6 {
        c.push(GroupFamily::Dihedral(order / 2));
    }
    match order {
        12 => c.push(GroupFamily::A4),
        24 => c.extend([GroupFamily::TStar, GroupFamily::S4]),
        48 => c.push(GroupFamily::OStar),
        60 => c.push(GroupFamily::A5),
        120 => c.push(GroupFamily::IStar),
        _ => {}
    }
    c
}

/// Names a group by matching it against the catalog families.
pub fn identify(g: &FiniteGroup) -> String {
    if g.order() == 1 {
        return "1".into();
    }
    identify_family(g).map(|f| f.to_string()).unwrap_or_else(|| {
        if g.is_abelian() {
            let f = abelian_invariants(g);
            f.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join("x")
        } else {
            format!("G{}", g.order())
        }
    })
}

pub fn identify_family(g: &FiniteGroup) -> Option<GroupFamily> {
    let n = g.order();
    if g.elements().any(|x| g.elem_order(x) == n) {
        return Some(GroupFamily::Cyclic(n));
    }
    if g.is_abelian() {
        return (abelian_invariants(g) == [2, 2]).then_some(GroupFamily::Dihedral(2));
    }
    family_candidates(n).into_iter().find(|&f| is_isomorphic(g, &make_group(f).expect("catalog")))
}

/// One subgroup with its lattice data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubgroupHandle {
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
    pub label: String,
    pub normal: bool,
    /// unique subgroup of its isomorphism class
    pub characteristic: bool,
}

impl SubgroupHandle {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.label.starts_with('Z') && !self.label.contains('x')
    }
}

/// Every subgroup, from cyclic subgroups closed under joins with cyclic ones.
pub fn subgroups(g: &FiniteGroup) -> Result<Vec<SubgroupHandle>> {
    if g.order() > SUBGROUP_CAP {
        return Err(GroupError::TooLarge(g.order()));
    }
    let mut cyclic: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for x in g.elements() {
        cyclic.entry(g.closure(&[x])).or_insert(x);
    }
    let cyclic: Vec<(Vec<usize>, usize)> = cyclic.into_iter().collect();
    let mut all: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut work: Vec<Vec<usize>> = Vec::new();
    for (elems, x) in &cyclic {
        let gens = if *x == 0 { Vec::new() } else { vec![*x] };
        if all.insert(elems.clone(), gens).is_none() {
            work.push(elems.clone());
        }
    }
    while let Some(a) = work.pop() {
        let gens_a = all[&a].clone();
        for (c, x) in &cyclic {
            if c.iter().all(|e| a.binary_search(e).is_ok()) {
                continue;
            }
            let mut gens = gens_a.clone();
            gens.push(*x);
            let j = g.closure(&gens);
            if !all.contains_key(&j) {
                all.insert(j.clone(), gens);
                work.push(j);
            }
        }
    }
    let mut out: Vec<SubgroupHandle> = all
        .into_iter()
        .map(|(elements, generators)| {
            let (sub, _) = g.subgroup_group(&elements);
            SubgroupHandle {
                normal: is_normal(g, &elements),
                label: identify(&sub),
                elements,
                generators,
                characteristic: false,
            }
        })
        .collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then(a.elements.cmp(&b.elements)));
    let mut counts: HashMap<String, usize> = HashMap::new();
    for s in &out {
        *counts.entry(s.label.clone()).or_insert(0) += 1;
    }
    for s in &mut out {
        s.characteristic = counts[&s.label] == 1;
    }
    Ok(out)
}

/// Minimal nontrivial normal subgroups.
pub fn minimal_normal_subgroups(g: &FiniteGroup) -> Vec<SubgroupHandle> {
    let mut closures: BTreeSet<Vec<usize>> = BTreeSet::new();
    for x in 1..g.order() {
        closures.insert(normal_closure(g, &[x]));
    }
    let list: Vec<Vec<usize>> = closures.into_iter().collect();
    list.iter()
        .filter(|a| !list.iter().any(|b| b.len() < a.len() && b.iter().all(|e| a.binary_search(e).is_ok())))
        .map(|a| SubgroupHandle {
            elements: a.clone(),
            generators: Vec::new(),
            label: identify(&g.subgroup_group(a).0),
            normal: true,
            characteristic: false,
        })
        .collect()
}

/// Lattice facts grouped by isomorphism class.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeSummary {
    pub group: String,
    pub order: usize,
    pub subgroup_count: usize,
    pub proper: BTreeSet<String>,
    pub maximal: BTreeSet<String>,
    pub maximal_cyclic: BTreeSet<String>,
    pub normal: BTreeSet<String>,
    /// label ↦ (copies, normal copies)
    pub counts: BTreeMap<String, (usize, usize)>,
}

pub fn lattice_summary(g: &FiniteGroup, subs: &[SubgroupHandle]) -> LatticeSummary {
    let n = g.order();
    let contains = |a: &SubgroupHandle, b: &SubgroupHandle| {
        a.order() > b.order() && b.elements.iter().all(|e| a.elements.binary_search(e).is_ok())
    };
    let proper: Vec<&SubgroupHandle> = subs.iter().filter(|s| s.order() < n).collect();
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for s in subs {
        let e = counts.entry(s.label.clone()).or_insert((0, 0));
        e.0 += 1;
        e.1 += usize::from(s.normal);
    }
    LatticeSummary {
        group: g.name().to_string(),
        order: n,
        subgroup_count: subs.len(),
        proper: proper.iter().map(|s| label_or_trivial(s)).collect(),
        maximal: proper
            .iter()
            .filter(|s| !proper.iter().any(|t| contains(t, s)))
            .map(|s| label_or_trivial(s))
            .collect(),
        maximal_cyclic: proper
            .iter()
            .filter(|s| s.is_cyclic() && s.order() > 1)
            .filter(|s| !subs.iter().any(|t| t.is_cyclic() && contains(t, s)))
            .map(|s| label_or_trivial(s))
            .collect(),
        normal: proper
            .iter()
            .filter(|s| s.normal && s.order() > 1)
            .map(|s| label_or_trivial(s))
            .collect(),
        counts,
    }
}

fn label_or_trivial(s: &SubgroupHandle) -> String {
    if s.order() == 1 { "1".into() } else { s.label.clone() }
}

/// Automorphisms as element permutations, with the group they form.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    pub maps: Vec<Vec<usize>>,
    /// product a·b = a ∘ b (apply b first)
    pub group: FiniteGroup,
    pub inner: Vec<usize>,
}

impl AutomorphismGroup {
    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.maps.iter().position(|m| m == map)
    }

    pub fn outer(&self) -> Result<FiniteGroup> {
        quotient(&self.group, &self.inner).map(|q| q.with_name("Out"))
    }

    /// Coset label of each automorphism in Aut/Inn.
    pub fn outer_class(&self) -> Vec<usize> {
        let mut class = vec![UNDEF; self.maps.len()];
        let mut k = 0;
        for a in 0..self.maps.len() {
            if class[a] == UNDEF {
                for &i in &self.inner {
                    class[self.group.mul(a, i)] = k;
                }
                k += 1;
            }
        }
        class
    }
}

pub fn automorphisms(g: &FiniteGroup) -> Result<AutomorphismGroup> {
    if g.order() > SUBGROUP_CAP {
        return Err(GroupError::TooLarge(g.order()));
    }
    let gens = small_generating_set(g);
    let mut maps = Vec::new();
    search_homs(g, &gens, g, true, |m| {
        maps.push(m);
        true
    });
    maps.sort();
    let index: HashMap<Vec<usize>, usize> = maps.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let k = maps.len();
    let mut mult = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            let comp: Vec<usize> = maps[b].iter().map(|&x| maps[a][x]).collect();
            mult[a * k + b] = index[&comp];
        }
    }
    // identity first
    let id: Vec<usize> = g.elements().collect();
    debug_assert_eq!(maps[0], id);
    let table = FiniteGroup::from_table(&format!("Aut({})", g.name()), k, mult, Vec::new(), None)?;
    let table = FiniteGroup { gens: small_generating_set(&table), ..table };
    let mut inner: Vec<usize> = g
        .elements()
        .map(|c| {
            let m: Vec<usize> = g.elements().map(|x| g.conj(c, x)).collect();
            index[&m]
        })
        .collect();
    inner.sort_unstable();
    inner.dedup();
    Ok(AutomorphismGroup { maps, group: table, inner })
}

/// Builds the automorphism sending distinguished generator k to `images[k]`.
pub fn automorphism_from_images(g: &FiniteGroup, images: &[usize]) -> Result<Vec<usize>> {
    let map = extend_hom(g, g.gens(), g, images).ok_or(GroupError::NotAutomorphism)?;
    let mut seen = vec![false; g.order()];
    for &v in &map {
        if v == UNDEF || seen[v] {
            return Err(GroupError::NotAutomorphism);
        }
        seen[v] = true;
    }
    Ok(map)
}

/// Outer-action tags of the semidirect products F ⋊ Z in the classification.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionTag {
    Trivial,
    Rho,
    Nu,
    Alpha,
    Beta,
    Omega,
    RhoTilde,
    NuTilde,
    AlphaTilde,
    BetaTilde,
    OmegaTilde,
    Uncataloged,
}

impl ActionTag {
    pub fn symbol(&self) -> &'static str {
        match self {
            ActionTag::Trivial => "",
            ActionTag::Rho => "rho",
            ActionTag::Nu => "nu",
            ActionTag::Alpha => "alpha",
            ActionTag::Beta => "beta",
            ActionTag::Omega => "omega",
            ActionTag::RhoTilde => "rho~",
            ActionTag::NuTilde => "nu~",
            ActionTag::AlphaTilde => "alpha~",
            ActionTag::BetaTilde => "beta~",
            ActionTag::OmegaTilde => "omega~",
            ActionTag::Uncataloged => "?",
        }
    }

    pub fn from_symbol(s: &str) -> Option<ActionTag> {
        [
            ActionTag::Trivial,
            ActionTag::Rho,
            ActionTag::Nu,
            ActionTag::Alpha,
            ActionTag::Beta,
            ActionTag::Omega,
            ActionTag::RhoTilde,
            ActionTag::NuTilde,
            ActionTag::AlphaTilde,
            ActionTag::BetaTilde,
            ActionTag::OmegaTilde,
        ]
        .into_iter()
        .find(|t| t.symbol() == s)
    }

    /// Counterpart after quotienting by the central involution.
    pub fn tilde(&self) -> ActionTag {
        match self {
            ActionTag::Rho => ActionTag::RhoTilde,
            ActionTag::Nu => ActionTag::NuTilde,
            ActionTag::Alpha => ActionTag::AlphaTilde,
            ActionTag::Beta => ActionTag::BetaTilde,
            ActionTag::Omega => ActionTag::OmegaTilde,
            other => *other,
        }
    }
}

/// Catalog automorphisms on the distinguished generators of `kind`.
pub fn catalog_actions(kind: GroupFamily) -> Vec<(ActionTag, Vec<Vec<i32>>)> {
    use ActionTag::*;
    let triv = |k: usize| (Trivial, (1..=k as i32).map(|i| vec![i]).collect::<Vec<_>>());
    match kind {
        GroupFamily::Cyclic(_) => vec![triv(1), (Rho, vec![vec![-1]])],
        GroupFamily::Dicyclic(2) => vec![
            triv(2),
            // x ↦ y, y ↦ xy
            (Alpha, vec![vec![2], vec![1, 2]]),
            // x ↦ xy, y ↦ y⁻¹
            (Beta, vec![vec![1, 2], vec![-2]]),
        ],
        GroupFamily::Dicyclic(_) => vec![triv(2), (Nu, vec![vec![1], vec![1, 2]])],
        GroupFamily::Dihedral(2) => {
            vec![triv(2), (AlphaTilde, vec![vec![2], vec![1, 2]]), (BetaTilde, vec![vec![1, 2], vec![2]])]
        }
        GroupFamily::Dihedral(_) => vec![triv(2), (NuTilde, vec![vec![1], vec![1, 2]])],
        // P ↦ QP, Q ↦ Q⁻¹, X ↦ X⁻¹
        GroupFamily::TStar => vec![triv(3), (Omega, vec![vec![2, 1], vec![-2], vec![-3]])],
        // a ↦ ab, b ↦ b, X ↦ X⁻¹
        GroupFamily::A4 => vec![triv(3), (OmegaTilde, vec![vec![1, 2], vec![2], vec![-3]])],
        GroupFamily::OStar => vec![triv(4)],
        GroupFamily::IStar | GroupFamily::S4 | GroupFamily::A5 => vec![triv(2)],
    }
}

fn catalog_map(g: &FiniteGroup, words: &[Vec<i32>]) -> Result<Vec<usize>> {
    let images: Vec<usize> = words.iter().map(|w| g.eval(w)).collect();
    automorphism_from_images(g, &images)
}

/// Equivalence classes of Out(G) under inversion and conjugation, as
/// outer-class indices.
pub fn semidirect_classes(aut: &AutomorphismGroup) -> Vec<BTreeSet<usize>> {
    let class = aut.outer_class();
    let k = class.iter().max().map_or(0, |m| m + 1);
    let mut reps = vec![UNDEF; k];
    for (a, &c) in class.iter().enumerate() {
        if reps[c] == UNDEF {
            reps[c] = a;
        }
    }
    let t = &aut.group;
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for c in 0..k {
        if seen[c] {
            continue;
        }
        let a = reps[c];
        let mut orbit = BTreeSet::new();
        for g in 0..aut.maps.len() {
            orbit.insert(class[t.conj(g, a)]);
            orbit.insert(class[t.conj(g, t.inv(a))]);
        }
        for &o in &orbit {
            seen[o] = true;
        }
        out.push(orbit);
    }
    out
}

/// Tag of the catalog class containing `map` (an automorphism of `g`, which
/// must be the library model of `kind`).
pub fn classify_action(kind: GroupFamily, g: &FiniteGroup, map: &[usize]) -> Result<ActionTag> {
    let aut = automorphisms(g)?;
    let idx = aut.index_of(map).ok_or(GroupError::NotAutomorphism)?;
    let class = aut.outer_class();
    let classes = semidirect_classes(&aut);
    let mine = classes.iter().find(|c| c.contains(&class[idx])).expect("partition");
    for (tag, words) in catalog_actions(kind) {
        let m = catalog_map(g, &words)?;
        let i = aut.index_of(&m).ok_or(GroupError::NotAutomorphism)?;
        if mine.contains(&class[i]) {
            return Ok(tag);
        }
    }
    Ok(ActionTag::Uncataloged)
}

/// Catalog automorphism of `kind` for `tag`, as an element map.
pub fn catalog_automorphism(kind: GroupFamily, g: &FiniteGroup, tag: ActionTag) -> Option<Vec<usize>> {
    catalog_actions(kind).into_iter().find(|(t, _)| *t == tag).and_then(|(_, w)| catalog_map(g, &w).ok())
}

/// Whether every automorphism of H ≤ G extends to one of G preserving H.
pub fn restriction_surjective(g: &FiniteGroup, h: &[usize]) -> Result<bool> {
    let (hg, embed) = g.subgroup_group(h);
    let aut_h = automorphisms(&hg)?;
    let aut_g = automorphisms(g)?;
    let mut pos = vec![UNDEF; g.order()];
    for (k, &e) in embed.iter().enumerate() {
        pos[e] = k;
    }
    let mut restricted = BTreeSet::new();
    for m in &aut_g.maps {
        if embed.iter().all(|&e| pos[m[e]] != UNDEF) {
            let r: Vec<usize> = embed.iter().map(|&e| pos[m[e]]).collect();
            restricted.insert(r);
        }
    }
    Ok(restricted.len() == aut_h.maps.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        for (f, o) in [
            (GroupFamily::TStar, 24),
            (GroupFamily::OStar, 48),
            (GroupFamily::IStar, 120),
            (GroupFamily::A4, 12),
            (GroupFamily::S4, 24),
            (GroupFamily::A5, 60),
        ] {
            assert_eq!(make_group(f).unwrap().order(), o, "{f}");
        }
        for m in 2..=10 {
            let g = make_group(GroupFamily::Dicyclic(m)).unwrap();
            assert_eq!(g.order(), 4 * m);
            let t = todd_coxeter(&presentation_of(GroupFamily::Dicyclic(m)), coset_budget()).unwrap();
            assert_eq!(t.order(), 4 * m);
        }
    }

    #[test]
    fn histograms() {
        let q8 = make_group(GroupFamily::Dicyclic(2)).unwrap();
        assert_eq!(q8.order_histogram(), BTreeMap::from([(1, 1), (2, 1), (4, 6)]));
        let z6 = make_group(GroupFamily::Cyclic(6)).unwrap();
        assert_eq!(z6.elements().filter(|&x| z6.elem_order(x) == 6).count(), 2);
        let i = make_group(GroupFamily::IStar).unwrap();
        assert_eq!(i.order_histogram()[&2], 1);
    }

    #[test]
    fn formula_tables_are_groups() {
        for f in [GroupFamily::Dicyclic(3), GroupFamily::Dihedral(5), GroupFamily::Cyclic(7)] {
            let g = make_group(f).unwrap();
            assert!(g.is_associative());
            assert_eq!(g.closure(g.gens()).len(), g.order());
            let p = g.presentation().unwrap();
            assert!(p.relators().iter().all(|r| g.eval(r) == 0));
        }
    }

    #[test]
    fn quotients_and_labels() {
        let q8 = make_group(GroupFamily::Dicyclic(2)).unwrap();
        assert_eq!(identify(&quotient(&q8, &center(&q8)).unwrap()), "Z2xZ2");
        let t = make_group(GroupFamily::TStar).unwrap();
        assert_eq!(identify(&quotient(&t, &center(&t)).unwrap()), "A4");
        let z4 = make_group(GroupFamily::Cyclic(4)).unwrap();
        assert!(!is_isomorphic(&z4, &make_group(GroupFamily::Dihedral(2)).unwrap()));
        assert_eq!(identify(&make_group(GroupFamily::Dicyclic(4)).unwrap()), "Q16");
    }

    #[test]
    fn automorphism_counts() {
        let q8 = make_group(GroupFamily::Dicyclic(2)).unwrap();
        let aut = automorphisms(&q8).unwrap();
        assert_eq!(aut.maps.len(), 24);
        let out = aut.outer().unwrap();
        assert_eq!(identify(&out), "Dih6");
        let z6 = make_group(GroupFamily::Cyclic(6)).unwrap();
        assert_eq!(identify(&automorphisms(&z6).unwrap().group), "Z2");
    }

    #[test]
    fn action_tags() {
        let q8 = make_group(GroupFamily::Dicyclic(2)).unwrap();
        let k = q8.mul(q8.gens()[0], q8.gens()[1]);
        let alpha = automorphism_from_images(&q8, &[q8.gens()[1], k]).unwrap();
        assert_eq!(classify_action(GroupFamily::Dicyclic(2), &q8, &alpha).unwrap(), ActionTag::Alpha);
        let beta = automorphism_from_images(&q8, &[k, q8.inv(q8.gens()[1])]).unwrap();
        assert_eq!(classify_action(GroupFamily::Dicyclic(2), &q8, &beta).unwrap(), ActionTag::Beta);
        let z5 = make_group(GroupFamily::Cyclic(5)).unwrap();
        let neg = automorphism_from_images(&z5, &[4]).unwrap();
        assert_eq!(classify_action(GroupFamily::Cyclic(5), &z5, &neg).unwrap(), ActionTag::Rho);
        let two = automorphism_from_images(&z5, &[2]).unwrap();
        assert_eq!(classify_action(GroupFamily::Cyclic(5), &z5, &two).unwrap(), ActionTag::Uncataloged);
    }

    #[test]
    fn z4_subgroups() {
        let z4 = make_group(GroupFamily::Cyclic(4)).unwrap();
        let labels: Vec<String> = subgroups(&z4).unwrap().iter().map(label_or_trivial).collect();
        assert_eq!(labels, vec!["1", "Z2", "Z4"]);
    }

    #[test]
    fn abelian_invariant_factors() {
        let d2 = make_group(GroupFamily::Dihedral(2)).unwrap();
        assert_eq!(abelian_invariants(&d2), vec![2, 2]);
        let z12 = make_group(GroupFamily::Cyclic(12)).unwrap();
        assert_eq!(abelian_invariants(&z12), vec![12]);
    }

    #[test]
    fn budget_is_reported() {
        let free = Presentation::new(names(&["a", "b"]), vec![vec![1, 2, -1, -2]]);
        assert!(matches!(todd_coxeter(&free, 500), Err(GroupError::BudgetExhausted(_))));
    }
}
