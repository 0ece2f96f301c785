//! The nine acceptance criteria, one PASS/FAIL line each, each under its
//! own time limit.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use spherebraid::braid_words::{alpha, full_twist, BraidWord};
use spherebraid::cli_verifier::{run_suite, NRange};
use spherebraid::finite_groups::{coset_budget, presentation_of, todd_coxeter, GroupFamily};
use spherebraid::sphere_oracle::{artin_action, b3_group, commute, equals, is_inner, order, Order};
use spherebraid::vc_classifier::{enumerate_v, has_construction, witness, witness_passed, Status};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond { Ok(()) } else { Err(msg()) }
}

fn suite(id: &str, lo: usize, hi: usize) -> Outcome {
    let r = run_suite(id, Some(NRange::new(lo, hi))).map_err(|e| e.to_string())?;
    let first = r.failures().next().map(|c| format!("{id}: {} ({})", c.anchor, c.detail.as_deref().unwrap_or("")));
    first.map_or(Ok(()), Err)
}

fn coset_orders() -> Outcome {
    use GroupFamily::*;
    let limit = Duration::from_secs(1);
    let start = Instant::now();
    ensure(b3_group().order() == 12, || "B3(S2) order".into())?;
    ensure(start.elapsed() < limit, || "B3(S2) over time".into())?;
    let mut kinds: Vec<GroupFamily> = (2..=10).map(Dicyclic).collect();
    kinds.extend([Dicyclic(4), TStar, OStar, IStar]);
    for kind in kinds {
        let start = Instant::now();
        let g = todd_coxeter(&presentation_of(kind), coset_budget()).map_err(|e| e.to_string())?;
        ensure(g.order() == kind.order(), || format!("{kind}: {} cosets", g.order()))?;
        ensure(start.elapsed() < limit, || format!("{kind} took {:?}", start.elapsed()))?;
    }
    Ok(())
}

fn torsion() -> Outcome {
    for n in 4..=10 {
        let ft = full_twist(n);
        ensure(order(&ft) == Order::Finite(2), || format!("n={n}: full twist"))?;
        for i in 0..=2 {
            let a = alpha(n, i);
            ensure(order(&a) == Order::Finite(2 * (n - i) as u64), || format!("n={n}: alpha_{i}"))?;
            ensure(equals(&a.pow((n - i) as i64), &ft).map_err(|e| e.to_string())?, || format!("n={n}: power of alpha_{i}"))?;
        }
    }
    Ok(())
}

fn soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for n in 4..=8 {
        let ft = full_twist(n);
        let id = BraidWord::identity(n);
        for _ in 0..200 {
            let len = rng.gen_range(0..=20);
            let letters: Vec<i32> = (0..len)
                .map(|_| {
                    let i = rng.gen_range(1..n as i32);
                    if rng.gen() { i } else { -i }
                })
                .collect();
            let w = BraidWord::new(n, letters).map_err(|e| e.to_string())?;
            let eq = |a: &BraidWord, b: &BraidWord| equals(a, b).map_err(|e| e.to_string());
            ensure(eq(&w.mul(&w.invert()), &id)?, || format!("n={n}: w w^-1 for [{w}]"))?;
            ensure(!eq(&w, &w.mul(&ft))?, || format!("n={n}: w = w D^2 for [{w}]"))?;
            ensure(commute(&w, &ft).map_err(|e| e.to_string())?, || format!("n={n}: [{w}] vs D^2"))?;
        }
    }
    for n in 3..=10 {
        let mut rel: Vec<i32> = (1..n as i32).collect();
        rel.extend((1..n as i32).rev());
        let r = BraidWord::new(n, rel).map_err(|e| e.to_string())?;
        ensure(is_inner(&artin_action(&r)).is_some(), || format!("n={n}: surface relation"))?;
    }
    Ok(())
}

fn identities() -> Outcome {
    suite("funda", 4, 8)?;
    suite("propsomega", 4, 10)
}

fn constructions() -> Outcome {
    suite("commalphaigen", 4, 12)?;
    suite("constq8", 4, 12)?;
    suite("realV2", 4, 12)
}

fn finite_facts() -> Outcome {
    suite("finite_lattices", 4, 12)?;
    suite("autout", 4, 10)
}

fn amalgams() -> Outcome {
    suite("amalgams", 4, 10)
}

fn classifier() -> Outcome {
    suite("classifier_mainodd", 4, 20)
}

fn witnesses() -> Outcome {
    let mut count = 0;
    for n in 4..=12 {
        for r in enumerate_v(n).map_err(|e| e.to_string())? {
            if r.status == Status::Realized && has_construction(&r) {
                let w = witness(&r).map_err(|e| format!("n={n} {}: {e}", r.shape))?;
                ensure(witness_passed(&w), || format!("n={n} {}", r.shape))?;
                count += 1;
            }
        }
    }
    ensure(count > 0, || "no witnesses".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 coset enumeration", coset_orders, 15),
        ("2 torsion", torsion, 10),
        ("3 word-problem soundness", soundness, 60),
        ("4 identity suites", identities, 120),
        ("5 realization constructions", constructions, 300),
        ("6 finite-group facts", finite_facts, 120),
        ("7 amalgams", amalgams, 120),
        ("8 classifier", classifier, 60),
        ("9 witness integrity", witnesses, 600),
    ];
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let mut result = run();
        let took = start.elapsed();
        if result.is_ok() && took > Duration::from_secs(limit) {
            result = Err(format!("took {took:?}, limit {limit}s"));
        }
        match &result {
            Ok(()) => writeln!(out, "PASS criterion {name} ({took:.2?})").unwrap(),
            Err(e) => {
                writeln!(out, "FAIL criterion {name}: {e}").unwrap();
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
