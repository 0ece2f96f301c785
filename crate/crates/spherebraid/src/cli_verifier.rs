//! Regression suites over the braid identities, group facts and the
//! classifier, plus JSON/CSV/text rendering for the command line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amalgams::{
    distinguish_k1_k2, find_extension, gluing_certificates, k1, k1_prime, k2, k2_prime, normal_form_consistency,
    standard_amalgam, to_semidirect, AmalgamSpec,
};
use crate::braid_words::{alpha, alpha_prime, delta_ri, full_twist, garside, std_element, BraidWord, NamedElement};
use crate::finite_groups::{
    automorphisms, classify_action, coset_budget, lattice_summary, make_group, presentation_of, restriction_surjective,
    subgroups, todd_coxeter, ActionTag, FiniteGroup, GroupFamily,
};
use crate::sphere_oracle::{artin_action, b3_group, commute, equals, is_central, is_inner, order, Order};
use crate::vc_classifier::{
    divisors, enumerate_v, enumerate_vtilde, find_class, finite_classes, has_construction, mainodd_descriptors,
    project_to_mcg, satisfies_definition, witness, witness_passed, Shape, Status, VcClassRecord,
};

pub const SUITES: [&str; 11] = [
    "presentation",
    "torsion",
    "funda",
    "propsomega",
    "commalphaigen",
    "constq8",
    "realV2",
    "finite_lattices",
    "autout",
    "amalgams",
    "classifier_mainodd",
];

const ORACLE_MAX_N: usize = 64;
const CLASSIFIER_MAX_N: usize = 200;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected one of {list}", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("n range {lo}..{hi} is outside {min}..{max} for suite {suite}")]
    Range { suite: String, lo: usize, hi: usize, min: usize, max: usize },
    #[error("cannot parse n range {0:?}; expected a..b or a single n")]
    RangeSyntax(String),
    #[error("unknown format {0:?}; expected json, csv or text")]
    UnknownFormat(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Inclusive range of strand counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl NRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        NRange { lo, hi }
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

/// `a..b` and `a..=b` are both inclusive; a bare `a` is the range `a..a`.
impl FromStr for NRange {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, VerifyError> {
        let bad = || VerifyError::RangeSyntax(s.to_string());
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match s.split_once("..") {
            None => {
                let n = num(s)?;
                Ok(NRange::new(n, n))
            }
            Some((a, b)) => {
                let r = NRange::new(num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
                if r.lo > r.hi { Err(bad()) } else { Ok(r) }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub anchor: String,
    pub status: CheckStatus,
    /// wall time in microseconds; dropped from reports unless asked for
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub n_range: NRange,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl SuiteResult {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn without_timings(mut self) -> Self {
        for c in &mut self.checks {
            c.elapsed_us = None;
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, VerifyError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(VerifyError::UnknownFormat(s.to_string())),
        }
    }
}

fn is_classifier_suite(id: &str) -> bool {
    matches!(id, "classifier_mainodd" | "finite_lattices")
}

pub fn default_range(id: &str) -> NRange {
    if is_classifier_suite(id) { NRange::new(4, 20) } else { NRange::new(4, 10) }
}

fn supported_range(id: &str) -> (usize, usize) {
    match id {
        "presentation" | "torsion" => (3, ORACLE_MAX_N),
        _ if is_classifier_suite(id) => (4, CLASSIFIER_MAX_N),
        _ => (4, ORACLE_MAX_N),
    }
}

type Outcome = Result<(), String>;
type Job<'a> = Box<dyn FnOnce() -> Outcome + Send + 'a>;

#[derive(Default)]
struct Plan<'a> {
    jobs: Vec<(String, Job<'a>)>,
}

impl<'a> Plan<'a> {
    fn add(&mut self, anchor: impl Into<String>, f: impl FnOnce() -> Outcome + Send + 'a) {
        self.jobs.push((anchor.into(), Box::new(f)));
    }

    /// Runs on scoped worker threads; results keep the order jobs were added.
    fn run(self) -> Vec<CheckResult> {
        let (anchors, jobs): (Vec<String>, Vec<Job<'a>>) = self.jobs.into_iter().unzip();
        let slots: Vec<Mutex<Option<Job<'a>>>> = jobs.into_iter().map(|j| Mutex::new(Some(j))).collect();
        let results: Vec<Mutex<Option<(Outcome, u64)>>> = slots.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        let workers = std::thread::available_parallelism().map_or(1, |p| p.get()).min(slots.len().max(1));
        let work = || loop {
            let k = next.fetch_add(1, Ordering::Relaxed);
            if k >= slots.len() {
                break;
            }
            let job = slots[k].lock().unwrap().take().expect("each job runs once");
            let start = Instant::now();
            let out = catch_unwind(AssertUnwindSafe(job)).unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
            *results[k].lock().unwrap() = Some((out, start.elapsed().as_micros() as u64));
        };
        if workers <= 1 {
            work();
        } else {
            std::thread::scope(|s| {
                for _ in 0..workers {
                    s.spawn(work);
                }
            });
        }
        anchors
            .into_iter()
            .zip(results)
            .map(|(anchor, r)| {
                let (out, us) = r.into_inner().unwrap().expect("every job ran");
                CheckResult {
                    anchor,
                    status: if out.is_ok() { CheckStatus::Pass } else { CheckStatus::Fail },
                    elapsed_us: Some(us),
                    detail: out.err(),
                }
            })
            .collect()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond { Ok(()) } else { Err(msg()) }
}

fn same(a: &BraidWord, b: &BraidWord) -> Outcome {
    match equals(a, b) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("[{a}] differs from [{b}]")),
        Err(e) => Err(e.to_string()),
    }
}

fn commuting(a: &BraidWord, b: &BraidWord) -> Outcome {
    match commute(a, b) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("[{a}] and [{b}] do not commute")),
        Err(e) => Err(e.to_string()),
    }
}

fn infinite(w: &BraidWord) -> Outcome {
    match order(w) {
        Order::Infinite => Ok(()),
        Order::Finite(d) => Err(format!("[{w}] has order {d}")),
    }
}

fn has_order(w: &BraidWord, d: u64) -> Outcome {
    match order(w) {
        Order::Finite(e) if e == d => Ok(()),
        o => Err(format!("expected order {d}, got {o:?}")),
    }
}

fn sigma(n: usize, i: usize) -> BraidWord {
    BraidWord::sigma(n, i as i32).expect("generator index in range")
}

/// σ_a σ_{a+1} ⋯ σ_b
fn up(n: usize, a: usize, b: usize) -> BraidWord {
    (a..=b).fold(BraidWord::identity(n), |w, k| w.mul(&sigma(n, k)))
}

/// σ_a σ_{a−1} ⋯ σ_b
fn down(n: usize, a: usize, b: usize) -> BraidWord {
    (b..=a).rev().fold(BraidWord::identity(n), |w, k| w.mul(&sigma(n, k)))
}

fn named(e: NamedElement, n: usize) -> BraidWord {
    std_element(e, n).expect("side conditions checked by the caller")
}

pub fn run_suite(id: &str, range: Option<NRange>) -> Result<SuiteResult, VerifyError> {
    if !SUITES.contains(&id) {
        return Err(VerifyError::UnknownSuite(id.to_string()));
    }
    let range = range.unwrap_or_else(|| default_range(id));
    let (min, max) = supported_range(id);
    if range.lo < min || range.hi > max || range.lo > range.hi {
        return Err(VerifyError::Range { suite: id.into(), lo: range.lo, hi: range.hi, min, max });
    }
    let mut plan = Plan::default();
    match id {
        "presentation" => presentation(&mut plan, range),
        "torsion" => torsion(&mut plan, range),
        "funda" => funda(&mut plan, range),
        "propsomega" => propsomega(&mut plan, range),
        "commalphaigen" => commalphaigen(&mut plan, range),
        "constq8" => constq8(&mut plan, range),
        "realV2" => real_v2(&mut plan, range),
        "finite_lattices" => finite_lattices(&mut plan, range),
        "autout" => autout(&mut plan),
        "amalgams" => amalgam_suite(&mut plan),
        "classifier_mainodd" => classifier(&mut plan, range),
        _ => unreachable!(),
    }
    let checks = plan.run();
    let passed = checks.iter().all(CheckResult::passed);
    Ok(SuiteResult { suite: id.to_string(), n_range: range, checks, passed })
}

fn enumerated_order(kind: GroupFamily) -> Outcome {
    let g = todd_coxeter(&presentation_of(kind), coset_budget()).map_err(|e| e.to_string())?;
    ensure(g.order() == kind.order(), || format!("enumerated {} cosets, expected {}", g.order(), kind.order()))
}

fn presentation(plan: &mut Plan, range: NRange) {
    use GroupFamily::*;
    plan.add("B3(S2) has order 12", || ensure(b3_group().order() == 12, || format!("order {}", b3_group().order())));
    for m in 2..=10 {
        plan.add(format!("Dic{} has order {}", 4 * m, 4 * m), move || enumerated_order(Dicyclic(m)));
    }
    for kind in [TStar, OStar, IStar] {
        plan.add(format!("{kind} has order {}", kind.order()), move || enumerated_order(kind));
    }
    for n in range.iter() {
        plan.add(format!("n={n}: surface relation acts by an inner automorphism"), move || {
            let rel = up(n, 1, n - 1).mul(&down(n, n - 1, 1));
            ensure(is_inner(&artin_action(&rel)).is_some(), || "action is not inner".into())
        });
        plan.add(format!("n={n}: full twist is central"), move || {
            ensure(is_central(&full_twist(n)), || "full twist not central".into())
        });
    }
}

fn torsion(plan: &mut Plan, range: NRange) {
    for n in range.iter() {
        for i in 0..=2usize.min(n - 2) {
            plan.add(format!("n={n}: alpha_{i} has order {}", 2 * (n - i)), move || {
                has_order(&alpha(n, i), 2 * (n - i) as u64)
            });
            plan.add(format!("n={n}: alpha_{i}^{} is the full twist", n - i), move || {
                same(&alpha(n, i).pow((n - i) as i64), &full_twist(n))
            });
        }
        plan.add(format!("n={n}: full twist has order 2"), move || has_order(&full_twist(n), 2));
        plan.add(format!("n={n}: Garside element has order 4"), move || has_order(&garside(n), 4));
    }
}

fn funda(plan: &mut Plan, range: NRange) {
    for n in range.iter() {
        plan.add(format!("n={n}: Garside conjugation reverses generators"), move || {
            let d = garside(n);
            (1..n).try_for_each(|i| same(&sigma(n, i).conj_by(&d), &sigma(n, n - i)))
        });
        for i in 0..=2 {
            plan.add(format!("n={n}: alpha_{i} shifts generators"), move || {
                let a = alpha(n, i);
                for l in 1..n - i {
                    let al = a.pow(l as i64);
                    for j in 1..n - i - l {
                        same(&sigma(n, j).conj_by(&al), &sigma(n, j + l))?;
                    }
                }
                Ok(())
            });
            plan.add(format!("n={n}: alpha_{i}^2 carries sigma_{} to sigma_1", n - i - 1), move || {
                same(&sigma(n, n - i - 1).conj_by(&alpha(n, i).pow(2)), &sigma(n, 1))
            });
        }
        for q in 0..=n {
            plan.add(format!("n={n}: alpha_0^{q} as a product of runs"), move || {
                let head = if q >= 2 { up(n, 1, q - 1).pow(q as i64) } else { BraidWord::identity(n) };
                let tail = (1..=q).fold(BraidWord::identity(n), |w, k| w.mul(&up(n, q - k + 1, n - k)));
                same(&alpha(n, 0).pow(q as i64), &head.mul(&tail))
            });
        }
        plan.add(format!("n={n}: twist of a run equals twist of the reversed run"), move || {
            for j1 in 1..n - 1 {
                for j2 in j1 + 1..n {
                    let e = (j2 - j1 + 1) as i64;
                    same(&up(n, j1, j2 - 1).pow(e), &down(n, j2 - 1, j1).pow(e))?;
                }
            }
            Ok(())
        });
        for i in [0, 2] {
            plan.add(format!("n={n}: Garside element inverts alpha'_{i}"), move || {
                let a = alpha_prime(n, i);
                same(&a.conj_by(&garside(n)), &a.invert())
            });
        }
    }
}

fn propsomega(plan: &mut Plan, range: NRange) {
    for n in range.iter().filter(|n| n % 2 == 0) {
        let h = n / 2;
        let o1 = move || named(NamedElement::Omega1, n);
        let o2 = move || named(NamedElement::Omega2, n);
        let rho = move || named(NamedElement::Rho, n);
        let ah = move || alpha(n, 0).pow(h as i64);
        plan.add(format!("n={n}: rho Omega1 = Omega2 rho"), move || same(&rho().mul(&o1()), &o2().mul(&rho())));
        plan.add(format!("n={n}: Garside = Omega1 Omega2 rho"), move || {
            same(&garside(n), &o1().mul(&o2()).mul(&rho()))
        });
        plan.add(format!("n={n}: rho Omega2 = Omega1 rho"), move || same(&rho().mul(&o2()), &o1().mul(&rho())));
        plan.add(format!("n={n}: Omega2 as reversed runs"), move || {
            let w = (h + 1..n).rev().fold(BraidWord::identity(n), |w, k| w.mul(&up(n, k, n - 1)));
            same(&o2(), &w)
        });
        plan.add(format!("n={n}: alpha_0^{h} = Omega1^2 rho"), move || same(&ah(), &o1().pow(2).mul(&rho())));
        plan.add(format!("n={n}: Omega2 conjugates alpha_0^{h} to Garside"), move || {
            same(&ah().conj_by(&o2()), &garside(n))
        });
        plan.add(format!("n={n}: Omega1 conjugates Garside to alpha_0^{h}"), move || {
            same(&garside(n).conj_by(&o1()), &ah())
        });
        plan.add(format!("n={n}: full twist = Omega1^2 Omega2^-2"), move || {
            same(&full_twist(n), &o1().pow(2).mul(&o2().pow(-2)))
        });
        plan.add(format!("n={n}: alpha_0^{h} swaps Omega1 and Omega2"), move || {
            same(&o1().conj_by(&ah()), &o2())?;
            same(&o2().conj_by(&ah()), &o1())
        });
    }
}

fn witness_checks(plan: &mut Plan, range: NRange, keep: fn(&Shape) -> bool) {
    for n in range.iter().filter(|&n| n <= 12) {
        let Ok(records) = enumerate_v(n) else {
            plan.add(format!("n={n}: enumerate V(n)"), || Err("enumeration failed".into()));
            continue;
        };
        for r in records.into_iter().filter(|r| keep(&r.shape) && has_construction(r)) {
            plan.add(format!("n={n}: witness for {}", r.shape), move || {
                let w = witness(&r).map_err(|e| e.to_string())?;
                ensure(witness_passed(&w), || "a witness certificate failed".into())
            });
        }
    }
}

fn commalphaigen(plan: &mut Plan, range: NRange) {
    for n in range.iter() {
        for i in 0..=2 {
            for m in divisors(2 * (n - i)) {
                let r = if (n - i) % m == 0 { m } else { m / 2 };
                if r < 2 {
                    continue;
                }
                plan.add(format!("n={n}, i={i}, m={m}: delta_{r},{i} commutes with alpha_{i}^{m}"), move || {
                    ensure((n - i) % r == 0, || format!("{r} does not divide {}", n - i))?;
                    let d = delta_ri(n, r, i);
                    commuting(&d, &alpha(n, i).pow(m as i64))?;
                    infinite(&d)
                });
                if i != 1 {
                    plan.add(format!("n={n}, i={i}, m={m}: Garside' delta_{r},{i} inverts alpha_{i}^{m}"), move || {
                        let a0 = alpha(n, 0);
                        let dp = garside(n).conj_by(&a0.invert());
                        let am = alpha(n, i).pow(m as i64);
                        same(&alpha(n, i).conj_by(&dp), &alpha(n, i).invert())?;
                        let t = dp.mul(&delta_ri(n, r, i));
                        same(&am.conj_by(&t), &am.invert())?;
                        infinite(&t)
                    });
                }
            }
        }
    }
    witness_checks(plan, range, |s| {
        matches!(s, Shape::Semidirect { finite, .. } if *finite != GroupFamily::Dicyclic(2))
    });
}

fn constq8(plan: &mut Plan, range: NRange) {
    for n in range.iter().filter(|n| n % 2 == 0) {
        let ah = move || alpha(n, 0).pow((n / 2) as i64);
        plan.add(format!("n={n}: zeta swaps Garside and alpha_0^{}", n / 2), move || {
            let z = named(NamedElement::Zeta, n);
            same(&garside(n).conj_by(&z), &ah())?;
            same(&ah().conj_by(&z), &garside(n))?;
            let p = ah().mul(&garside(n));
            same(&p.conj_by(&z), &p.invert())?;
            infinite(&z)
        });
        if n % 4 == 0 && n >= 8 {
            plan.add(format!("n={n}: nu permutes the quaternion generators"), move || {
                let v = named(NamedElement::Nu, n);
                let p = ah().mul(&garside(n));
                same(&ah().conj_by(&v), &p)?;
                same(&p.conj_by(&v), &garside(n).invert())?;
                same(&garside(n).invert().conj_by(&v), &ah())?;
                infinite(&v)
            });
        }
    }
    witness_checks(plan, range, |s| {
        matches!(s, Shape::Semidirect { finite: GroupFamily::Dicyclic(2), .. })
    });
}

fn a(n: usize, i: usize, j: usize) -> BraidWord {
    named(NamedElement::A { i, j }, n)
}

fn real_v2(plan: &mut Plan, range: NRange) {
    plan.add("n=5: (s4^-1 s3)^3 is a commutator of A-generators", || {
        let n = 5;
        let s3 = sigma(n, 3);
        let s4 = sigma(n, 4);
        let lhs = s4.invert().mul(&s3).pow(3);
        let mid = s4.pow(-2).mul(&s3.pow(-2)).mul(&s4.pow(2)).mul(&s3.pow(2));
        same(&lhs, &mid)?;
        same(&lhs, &BraidWord::commutator(&a(n, 4, 5).invert(), &a(n, 3, 4).invert()))?;
        infinite(&lhs)
    });
    plan.add("n=4, i=0: eta~ in A-generators", || {
        let n = 4;
        let e = named(NamedElement::EtaTilde { i: 0 }, n);
        let letters = BraidWord::new(n, [1, 1, 3, 2, 2, 3]).map_err(|e| e.to_string())?;
        same(&e, &letters)?;
        same(&e, &a(n, 1, 2).mul(&a(n, 2, 4)).mul(&a(n, 3, 4)))?;
        same(&e, &a(n, 1, 2).mul(&a(n, 1, 4).invert()))?;
        infinite(&e)
    });
    plan.add("n=4, i=2: eta~ in A-generators", || {
        let n = 4;
        let e = named(NamedElement::EtaTilde { i: 2 }, n);
        same(&e, &sigma(n, 2).pow(2).mul(&sigma(n, 3).pow(4)))?;
        same(&e, &a(n, 2, 3).mul(&a(n, 3, 4).pow(2)))?;
        infinite(&e)
    });
    plan.add("n=6, i=2: eta~ in A-generators", || {
        let n = 6;
        let e = named(NamedElement::EtaTilde { i: 2 }, n);
        let w = a(n, 1, 3).invert().mul(&a(n, 4, 5)).mul(&a(n, 3, 4).invert()).mul(&a(n, 5, 6));
        same(&e, &w)?;
        infinite(&e)
    });
    witness_checks(plan, range, |s| matches!(s, Shape::Amalgam { .. }));
}

fn labels(set: &BTreeSet<String>) -> String {
    set.iter().cloned().collect::<Vec<_>>().join(",")
}

fn set_of(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn lattice_matches(kind: GroupFamily, proper: &[&str], maximal: &[&str], cyclic: &[&str], normal: &[&str]) -> Outcome {
    let g = make_group(kind).map_err(|e| e.to_string())?;
    let subs = subgroups(&g).map_err(|e| e.to_string())?;
    let s = lattice_summary(&g, &subs);
    for (what, got, want) in [
        ("proper", &s.proper, proper),
        ("maximal", &s.maximal, maximal),
        ("maximal cyclic", &s.maximal_cyclic, cyclic),
        ("normal", &s.normal, normal),
    ] {
        ensure(*got == set_of(want), || format!("{what}: got {{{}}}", labels(got)))?;
    }
    Ok(())
}

fn finite_lattices(plan: &mut Plan, range: NRange) {
    use GroupFamily::*;
    plan.add("T* subgroup lattice", || {
        lattice_matches(TStar, &["1", "Z2", "Z3", "Z4", "Z6", "Q8"], &["Z6", "Q8"], &["Z4", "Z6"], &["Z2", "Q8"])
    });
    plan.add("O* subgroup lattice", || {
        lattice_matches(
            OStar,
            &["1", "Z2", "Z3", "Z4", "Z6", "Z8", "Q8", "Dic12", "Q16", "T*"],
            &["Dic12", "Q16", "T*"],
            &["Z4", "Z6", "Z8"],
            &["Z2", "Q8", "T*"],
        )
    });
    plan.add("I* subgroup lattice", || {
        lattice_matches(
            IStar,
            &["1", "Z2", "Z3", "Z4", "Z5", "Z6", "Q8", "Z10", "Dic12", "Dic20", "T*"],
            &["Dic12", "Dic20", "T*"],
            &["Z4", "Z6", "Z10"],
            &["Z2"],
        )
    });
    for n in range.iter() {
        plan.add(format!("n={n}: finite classes cover the factors of V(n)"), move || {
            let classes = finite_classes(n).map_err(|e| e.to_string())?;
            let present: BTreeSet<GroupFamily> = classes.iter().map(|c| c.group).collect();
            for c in classes.iter().filter(|c| c.maximal) {
                ensure(c.containing_maximal == [c.group], || format!("{} is maximal but contained", c.group))?;
            }
            for r in enumerate_v(n).map_err(|e| e.to_string())? {
                for f in r.shape.finite_factors() {
                    ensure(present.contains(&f), || format!("{f} from {} is not a finite class", r.shape))?;
                }
            }
            Ok(())
        });
    }
}

fn out_order(kind: GroupFamily) -> Result<FiniteGroup, String> {
    let g = make_group(kind).map_err(|e| e.to_string())?;
    automorphisms(&g).and_then(|a| a.outer()).map_err(|e| e.to_string())
}

/// Subgroups of `kind` isomorphic to `sub`, as element lists.
fn copies_of(kind: GroupFamily, sub: GroupFamily) -> Result<(FiniteGroup, Vec<Vec<usize>>), String> {
    let g = make_group(kind).map_err(|e| e.to_string())?;
    let subs = subgroups(&g).map_err(|e| e.to_string())?;
    let found = subs
        .into_iter()
        .filter(|s| s.order() == sub.order() && s.label.parse::<GroupFamily>().ok() == Some(sub))
        .map(|s| s.elements)
        .collect();
    Ok((g, found))
}

fn restriction(kind: GroupFamily, sub: GroupFamily, copies: usize, surjective: bool) -> Outcome {
    let (g, hs) = copies_of(kind, sub)?;
    ensure(hs.len() == copies, || format!("{} copies of {sub}, expected {copies}", hs.len()))?;
    for h in &hs {
        let s = restriction_surjective(&g, h).map_err(|e| e.to_string())?;
        ensure(s == surjective, || format!("restriction surjective = {s}"))?;
    }
    Ok(())
}

fn autout(plan: &mut Plan) {
    use GroupFamily::*;
    plan.add("Out(Q8) is S3", || {
        let out = out_order(Dicyclic(2))?;
        ensure(out.order() == 6 && !out.is_abelian(), || format!("order {}", out.order()))
    });
    for kind in [TStar, OStar, IStar] {
        plan.add(format!("Out({kind}) has order 2"), move || {
            let out = out_order(kind)?;
            ensure(out.order() == 2, || format!("order {}", out.order()))
        });
    }
    for q in 1..=8 {
        plan.add(format!("Z{} over Z{}: restriction onto", 4 * q, 2 * q), move || {
            restriction(Cyclic(4 * q), Cyclic(2 * q), 1, true)
        });
    }
    for q in 3..=8 {
        plan.add(format!("Dic{} over Z{}: restriction onto", 4 * q, 2 * q), move || {
            restriction(Dicyclic(q), Cyclic(2 * q), 1, true)
        });
    }
    plan.add("O* over T*: restriction onto", || restriction(OStar, TStar, 1, true));
    plan.add("Q8 over each Z4: restriction onto", || restriction(Dicyclic(2), Cyclic(4), 3, true));
    for q in [6, 8, 10, 12] {
        plan.add(format!("Dic{} over Dic{}: restriction onto", 4 * q, 2 * q), move || {
            restriction(Dicyclic(q), Dicyclic(q / 2), 2, true)
        });
    }
    plan.add("Q16 over Q8: two copies", || {
        let (_, hs) = copies_of(Dicyclic(4), Dicyclic(2))?;
        ensure(hs.len() == 2, || format!("{} copies", hs.len()))
    });
    plan.add("Out(Q8) classes split 1 + 2 + 3 by action tag", || {
        let g = make_group(Dicyclic(2)).map_err(|e| e.to_string())?;
        let aut = automorphisms(&g).map_err(|e| e.to_string())?;
        let class = aut.outer_class();
        let mut reps: BTreeMap<usize, usize> = BTreeMap::new();
        for (a, &c) in class.iter().enumerate() {
            reps.entry(c).or_insert(a);
        }
        let mut sizes: BTreeMap<ActionTag, usize> = BTreeMap::new();
        for &a in reps.values() {
            let tag = classify_action(Dicyclic(2), &g, &aut.maps[a]).map_err(|e| e.to_string())?;
            *sizes.entry(tag).or_default() += 1;
        }
        let want = BTreeMap::from([(ActionTag::Trivial, 1), (ActionTag::Alpha, 2), (ActionTag::Beta, 3)]);
        ensure(sizes == want, || format!("got {sizes:?}"))
    });
}

fn semidirect_certificate(spec: &AmalgamSpec) -> Outcome {
    let iota = find_extension(spec).ok_or("gluing does not extend to the factors")?;
    let form = to_semidirect(spec, &iota).map_err(|e| e.to_string())?;
    ensure(form.passed(), || format!("{} sign failures, t order {:?}", form.failures.len(), form.t_order))
}

fn amalgam_suite(plan: &mut Plan) {
    use GroupFamily::*;
    let unique = |spec: Result<AmalgamSpec, String>| -> Outcome {
        let spec = spec?;
        let (total, bad) = normal_form_consistency(&spec, 3);
        ensure(total > 0 && bad == 0, || format!("{bad} of {total} products disagree"))
    };
    let std = |g1, f, g2| standard_amalgam(g1, f, g2).map_err(|e| e.to_string());
    plan.add("Z8 *_Z4 Z8: normal forms to length 3", move || unique(std(Cyclic(8), Cyclic(4), Cyclic(8))));
    plan.add("Dic12 *_Z6 Dic12: normal forms to length 3", move || {
        unique(std(Dicyclic(3), Cyclic(6), Dicyclic(3)))
    });
    plan.add("K1: normal forms to length 3", move || unique(Ok(k1())));
    plan.add("K2: normal forms to length 3", move || unique(Ok(k2())));
    for q in 1..=6 {
        plan.add(format!("Z{} *_Z{} Z{}: Z semidirect form", 4 * q, 2 * q, 4 * q), move || {
            semidirect_certificate(&std(Cyclic(4 * q), Cyclic(2 * q), Cyclic(4 * q))?)
        });
    }
    for q in 2..=6 {
        plan.add(format!("Dic{} *_Z{} Dic{}: Z semidirect form", 4 * q, 2 * q, 4 * q), move || {
            semidirect_certificate(&std(Dicyclic(q), Cyclic(2 * q), Dicyclic(q))?)
        });
    }
    plan.add("Dic24 *_Dic12 Dic24: Z semidirect form", move || {
        semidirect_certificate(&std(Dicyclic(6), Dicyclic(3), Dicyclic(6))?)
    });
    plan.add("O* *_T* O*: Z semidirect form", move || semidirect_certificate(&std(OStar, TStar, OStar)?));
    plan.add("K1: Z semidirect form", || semidirect_certificate(&k1()));
    plan.add("K2: gluing does not extend", || ensure(find_extension(&k2()).is_none(), || "extension found".into()));
    plan.add("K1' and K2' are built", || {
        ensure(k1_prime().factors[0].order() == 8 && k2_prime().factors[0].order() == 8, || "wrong factor order".into())
    });
    for dihedral in [false, true] {
        let tag = if dihedral { "K1' vs K2'" } else { "K1 vs K2" };
        plan.add(format!("{tag}: separating certificates"), move || {
            let r = distinguish_k1_k2(dihedral).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("{r:?}"))
        });
        plan.add(format!("{tag}: gluing isomorphism certificates"), move || {
            let certs = gluing_certificates(dihedral).map_err(|e| e.to_string())?;
            ensure(certs.iter().all(|c| c.passed()), || "a gluing certificate failed".into())
        });
    }
}

fn status_is(n: usize, descriptor: &str, want: Status) -> Outcome {
    let r = find_class(n, descriptor, false).map_err(|e| e.to_string())?;
    ensure(r.status == want, || format!("status {}", r.status))
}

fn classifier(plan: &mut Plan, range: NRange) {
    plan.add("n=4: T* x Z is not realized", || status_is(4, "T* x Z", Status::NotRealized));
    plan.add("n=4: Q8 x_alpha Z is realized with a witness", || {
        status_is(4, "Q8 x_alpha Z", Status::Realized)?;
        let w = witness(&find_class(4, "Q8 x_alpha Z", false).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(witness_passed(&w), || "witness failed".into())
    });
    plan.add("n=6: O* x Z is not realized", || status_is(6, "O* x Z", Status::NotRealized));
    plan.add("n=6: O* *_T* O* is open", || status_is(6, "O* *_T* O*", Status::Open));
    plan.add("n=6: T* x_omega Z is open", || status_is(6, "T* x_omega Z", Status::Open));
    plan.add("n=36: O* *_T* O* is realized", || status_is(36, "O* *_T* O*", Status::Realized));
    for n in range.iter() {
        if n % 2 == 1 {
            plan.add(format!("n={n}: realized classes match the odd-n list"), move || {
                let got: BTreeSet<String> = enumerate_v(n)
                    .map_err(|e| e.to_string())?
                    .iter()
                    .filter(|r| r.status == Status::Realized)
                    .map(|r| r.shape.to_string())
                    .collect();
                let want = mainodd_descriptors(n);
                ensure(got == want, || {
                    let extra: Vec<_> = got.symmetric_difference(&want).collect();
                    format!("differ on {extra:?}")
                })
            });
        }
        plan.add(format!("n={n}: enumeration agrees with the membership predicate"), move || {
            for (mcg, records) in [(false, enumerate_v(n)), (true, enumerate_vtilde(n))] {
                for r in records.map_err(|e| e.to_string())? {
                    ensure(satisfies_definition(&r.shape, n, mcg), || format!("{} fails the definition", r.shape))?;
                }
            }
            Ok(())
        });
        plan.add(format!("n={n}: projection to the mapping class group is onto"), move || {
            let tilde = enumerate_vtilde(n).map_err(|e| e.to_string())?;
            let mut best: BTreeMap<Shape, Status> = BTreeMap::new();
            for r in enumerate_v(n).map_err(|e| e.to_string())? {
                let p = project_to_mcg(&r);
                ensure(tilde.iter().any(|t| t.shape == p.shape), || format!("{} lands outside", p.shape))?;
                let e = best.entry(p.shape).or_insert(Status::NotRealized);
                *e = (*e).max(p.status);
            }
            for t in &tilde {
                ensure(best.contains_key(&t.shape), || format!("{} has no preimage", t.shape))?;
                ensure(best[&t.shape] == t.status, || format!("{} status mismatch", t.shape))?;
            }
            Ok(())
        });
    }
}

pub fn render_suite(result: &SuiteResult, format: Format) -> Result<String, VerifyError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(result)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "anchor", "status", "elapsed_us", "detail"])?;
            for c in &result.checks {
                w.write_record([
                    result.suite.as_str(),
                    c.anchor.as_str(),
                    if c.passed() { "pass" } else { "fail" },
                    &c.elapsed_us.map(|u| u.to_string()).unwrap_or_default(),
                    c.detail.as_deref().unwrap_or(""),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv is utf-8"))
        }
        Format::Text => {
            let mut out = String::new();
            for c in result.failures() {
                out.push_str(&format!("FAIL {}: {}\n", c.anchor, c.detail.as_deref().unwrap_or("")));
            }
            let failed = result.failures().count();
            out.push_str(&format!(
                "{} {} n={}: {} checks, {} failed\n",
                if result.passed { "PASS" } else { "FAIL" },
                result.suite,
                result.n_range,
                result.checks.len(),
                failed
            ));
            Ok(out)
        }
    }
}

pub fn render_records(records: &[VcClassRecord], format: Format) -> Result<String, VerifyError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(records)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "mcg", "kind", "shape", "status", "admissible_i", "status_ref", "witness"])?;
            for r in records {
                let adm: Vec<String> = r.admissible_i.iter().map(|i| i.to_string()).collect();
                let wit = match &r.witness {
                    None => "",
                    Some(w) if witness_passed(w) => "pass",
                    Some(_) => "fail",
                };
                w.write_record([
                    r.n.to_string(),
                    r.mcg.to_string(),
                    format!("{:?}", r.kind).trim_start_matches("Type").to_string(),
                    r.shape.to_string(),
                    r.status.to_string(),
                    adm.join(" "),
                    r.status_ref.clone(),
                    wit.to_string(),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?).expect("csv is utf-8"))
        }
        Format::Text => Ok(records
            .iter()
            .map(|r| format!("{:<28} {:<13} {}\n", r.shape.to_string(), r.status.to_string(), r.status_ref))
            .collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!("4..10".parse::<NRange>().unwrap(), NRange::new(4, 10));
        assert_eq!("4..=10".parse::<NRange>().unwrap(), NRange::new(4, 10));
        assert_eq!("7".parse::<NRange>().unwrap(), NRange::new(7, 7));
        assert!("9..4".parse::<NRange>().is_err());
        assert!("x".parse::<NRange>().is_err());
    }

    #[test]
    fn bad_requests() {
        assert!(matches!(run_suite("nope", None), Err(VerifyError::UnknownSuite(_))));
        assert!(matches!(run_suite("funda", Some(NRange::new(2, 5))), Err(VerifyError::Range { .. })));
        assert!("xml".parse::<Format>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for id in ["presentation", "torsion", "funda", "propsomega"] {
            let r = run_suite(id, Some(NRange::new(4, 6))).unwrap();
            assert!(r.passed, "{}", render_suite(&r, Format::Text).unwrap());
        }
    }
}
