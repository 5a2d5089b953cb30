//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Runs without the libtest harness so the lines always reach the terminal.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use ohno_star::algebra::{
    harmonic, harmonic_indices, lemma21_sides, lemma22_sides, shuffle, shuffle_indices, LinComb,
};
use ohno_star::combinatorics::{compositions, lemma33_check, ohno_coefficient, OhnoKind};
use ohno_star::index::{admissible_up_to, all_up_to, Index};
use ohno_star::modp::{
    self, bernoulli_mod_p, bernoulli_rational, eval_fmzv_p, eval_side_p, z_a, PrimeWindow, Residue,
};
use ohno_star::numeric::{check_real, Evaluator, Method, ANCHOR_TRUNCATION, DEFAULT_TRUNCATION};
use ohno_star::relations::{build, enumerate_instances, Bounds, Family, Params, RelationInstance};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ix(parts: &[u32]) -> Index {
    Index::of(parts)
}

fn criterion_1() -> Outcome {
    let mut ks = vec![Index::empty()];
    ks.extend(all_up_to(6));
    let mut count = 0;
    for k in &ks {
        for m in 0..=4 {
            let (lhs, rhs) = lemma21_sides(k, m).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("k = {k}, m = {m}: {lhs} ≠ {rhs}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} instances exact"))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    let mut support = 0;
    for k in all_up_to(6) {
        let r = k.depth();
        for m in 0..=4 {
            let (lhs, rhs) = lemma22_sides(&k, m).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("k = {k}, m = {m}: {lhs} ≠ {rhs}"))?;
            count += 1;
            for e in compositions(m, r) {
                let c = ohno_coefficient(OhnoKind::C2, &k, &e).map_err(|e| e.to_string())?;
                if c.is_zero() {
                    continue;
                }
                for i in 1..r.saturating_sub(1) {
                    ensure(k.parts()[i] != 1 || e.parts()[i] == 0, || {
                        format!("c2({k}, {e}) ≠ 0 with e_{} > 0 on an interior 1", i + 1)
                    })?;
                }
                support += 1;
            }
        }
    }
    Ok(format!(
        "{count} instances exact, support property on {support} nonzero coefficients"
    ))
}

fn criterion_3() -> Outcome {
    let all = all_up_to(10);
    for k in &all {
        let h = k.hoffman_dual().map_err(|e| e.to_string())?;
        ensure(h.hoffman_dual().ok().as_ref() == Some(k), || {
            format!("∨ not involutive at {k}")
        })?;
        ensure(h.weight() == k.weight(), || {
            format!("∨ changes weight at {k}")
        })?;
        let p = k.raise_last().map_err(|e| e.to_string())?;
        let lhs = p.dagger().map_err(|e| e.to_string())?;
        let rhs = h.reverse().raise_last().map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || {
            format!("dagger∘P ≠ P∘R∘∨ at {k}: {lhs} vs {rhs}")
        })?;
    }
    let admissible = admissible_up_to(10);
    for k in &admissible {
        let d = k.dagger().map_err(|e| e.to_string())?;
        ensure(d.dagger().ok().as_ref() == Some(k), || {
            format!("† not involutive at {k}")
        })?;
        ensure(d.weight() == k.weight(), || {
            format!("† changes weight at {k}")
        })?;
        ensure(d.depth() + k.depth() == k.weight() as usize, || {
            format!("depth complement fails at {k}")
        })?;
    }

    let with_empty = |w| {
        let mut v = vec![Index::empty()];
        v.extend(all_up_to(w));
        v
    };
    let small = with_empty(5);
    for a in &small {
        for b in &small {
            ensure(shuffle_indices(a, b) == shuffle_indices(b, a), || {
                format!("ш not commutative on {a}, {b}")
            })?;
            ensure(harmonic_indices(a, b) == harmonic_indices(b, a), || {
                format!("⊛ not commutative on {a}, {b}")
            })?;
        }
    }
    let tiny = with_empty(3);
    type Product = fn(&LinComb, &LinComb) -> ohno_star::Result<LinComb>;
    let products: [(&str, Product); 2] = [("ш", shuffle), ("⊛", harmonic)];
    for (name, op) in products {
        for a in &tiny {
            for b in &tiny {
                let ab = op(&LinComb::index(a.clone()), &LinComb::index(b.clone()))
                    .map_err(|e| e.to_string())?;
                for c in &tiny {
                    let cl = LinComb::index(c.clone());
                    let left = op(&ab, &cl).map_err(|e| e.to_string())?;
                    let bc = op(&LinComb::index(b.clone()), &cl).map_err(|e| e.to_string())?;
                    let right = op(&LinComb::index(a.clone()), &bc).map_err(|e| e.to_string())?;
                    ensure(left == right, || {
                        format!("{name} not associative on {a}, {b}, {c}")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "{} indices, {} admissible; {} commutativity pairs, {} associativity triples",
        all.len(),
        admissible.len(),
        small.len().pow(2),
        tiny.len().pow(3)
    ))
}

fn criterion_4() -> Outcome {
    let mut count = 0;
    for n in 1..=8i64 {
        for i in 1..=n {
            for m in 1..=8i64 {
                let v = lemma33_check(m, n, i).map_err(|e| e.to_string())?;
                ensure(v.holds(), || format!("m = {m}, n = {n}, i = {i}: {v:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} triples exact"))
}

fn sweep_modp(family: Family, weight: u32) -> Result<(usize, usize), String> {
    let instances: Vec<RelationInstance> =
        enumerate_instances(family, &Bounds::weight(weight)).collect();
    let window = PrimeWindow::default();
    let results: Vec<_> = instances
        .par_iter()
        .map(|inst| modp::check_modp(inst, window))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut primes = 0;
    for r in &results {
        ensure(r.passed(), || r.line())?;
        if let ohno_star::report::Outcome::Modular { primes: ps, .. } = &r.outcome {
            primes += ps.len();
        }
    }
    Ok((results.len(), primes))
}

fn side_p(inst: &RelationInstance, lhs: bool, p: u64) -> Result<Residue, String> {
    let side = if lhs { &inst.lhs } else { &inst.rhs };
    let x = side.as_linear().ok_or("product side")?;
    eval_side_p(x, inst.space.is_star(), p).map_err(|e| e.to_string())
}

fn criterion_5() -> Outcome {
    let (instances, checks) = sweep_modp(Family::OhnoStarFinite, 6)?;
    let anchor = build(
        Family::OhnoStarFinite,
        Params::IndexShift { k: ix(&[2]), m: 1 },
    )
    .map_err(|e| e.to_string())?;
    let three_z3 = eval_fmzv_p(&ix(&[3]), 5, true).map_err(|e| e.to_string())? * Residue::new(3, 5);
    let pair = eval_fmzv_p(&ix(&[2, 1]), 5, true).map_err(|e| e.to_string())?
        + eval_fmzv_p(&ix(&[1, 2]), 5, true).map_err(|e| e.to_string())?;
    ensure(three_z3.is_zero() && pair.is_zero(), || {
        format!("anchor: 3ζ*(3) = {three_z3}, sum = {pair}")
    })?;
    ensure(
        side_p(&anchor, true, 5)?.is_zero() && side_p(&anchor, false, 5)?.is_zero(),
        || "anchor instance sides nonzero mod 5".into(),
    )?;
    Ok(format!(
        "{instances} instances, {checks} prime checks; p = 5 anchor holds"
    ))
}

fn criterion_6() -> Outcome {
    let plan = [
        (Family::Oyama, 6),
        (Family::DualityFinite, 6),
        (Family::Lemma25, 6),
        (Family::StarOnes, 5),
        (Family::HarmonicHom, 6),
        (Family::StarDepth2, 6),
        (Family::SumFinite, 7),
        (Family::SumFiniteStar, 7),
    ];
    let mut parts = Vec::new();
    for (family, weight) in plan {
        let (n, checks) = sweep_modp(family, weight)?;
        parts.push(format!("{family} {n}/{checks}"));
    }
    let r = |k: &[u32], p| {
        eval_fmzv_p(&ix(k), p, false)
            .map(Residue::value)
            .map_err(|e| e.to_string())
    };
    ensure(r(&[1, 2], 7)? == 3, || "ζ_A(1,2) mod 7 ≠ 3".into())?;
    ensure(r(&[2, 1], 5)? == 4, || "ζ_A(2,1) mod 5 ≠ 4".into())?;
    let z = z_a(3, 5).map_err(|e| e.to_string())?.value();
    ensure(z == 2, || format!("Z_A(3) mod 5 = {z}"))?;
    Ok(format!(
        "instances/prime checks: {}; anchors hold",
        parts.join(", ")
    ))
}

fn criterion_7() -> Outcome {
    let evaluator =
        Evaluator::new(DEFAULT_TRUNCATION, Method::Extrapolated).map_err(|e| e.to_string())?;
    let plan = [
        (Family::DualityClassical, 7, 1e-4),
        (Family::Ohno, 6, 1e-4),
        (Family::OhnoStar, 6, 1e-4),
        (Family::SumClassical, 7, 1e-4),
        (Family::SumClassicalStar, 7, 1e-4),
        (Family::KawashimaLinear, 5, 1e-3),
    ];
    let mut worst: f64 = 0.0;
    let mut total = 0;
    for (family, weight, tol) in plan {
        let instances: Vec<RelationInstance> =
            enumerate_instances(family, &Bounds::weight(weight)).collect();
        let results: Vec<_> = instances
            .par_iter()
            .map(|inst| check_real(inst, &evaluator, tol))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for r in &results {
            ensure(r.passed(), || r.line())?;
            if let ohno_star::report::Outcome::Real { difference, .. } = r.outcome {
                worst = worst.max(difference.abs());
            }
        }
        total += results.len();
    }
    Ok(format!(
        "{total} instances at N = {DEFAULT_TRUNCATION}, max |diff| = {worst:.2e}"
    ))
}

fn criterion_8() -> Outcome {
    let evaluator =
        Evaluator::new(ANCHOR_TRUNCATION, Method::Extrapolated).map_err(|e| e.to_string())?;
    let z = |k: &[u32], star| {
        evaluator
            .eval(&ix(k), star)
            .map(|v| v.value)
            .map_err(|e| e.to_string())
    };
    let d1 = (z(&[2], false)? - 1.6449340668).abs();
    let d2 = (z(&[1, 2], false)? - z(&[3], false)?).abs();
    let d3 = (z(&[1, 2], true)? - 2.0 * z(&[3], false)?).abs();
    ensure(d1 <= 1e-6, || format!("|ζ(2) - π²/6| = {d1:e}"))?;
    ensure(d2 <= 1e-6, || format!("|ζ(1,2) - ζ(3)| = {d2:e}"))?;
    ensure(d3 <= 1e-6, || format!("|ζ*(1,2) - 2ζ(3)| = {d3:e}"))?;
    // Reported only: plain truncation at the same N, for comparison.
    let plain = Evaluator::new(ANCHOR_TRUNCATION, Method::Plain).map_err(|e| e.to_string())?;
    let q = |k: &[u32], star| {
        plain
            .eval(&ix(k), star)
            .map(|v| v.value)
            .map_err(|e| e.to_string())
    };
    let p2 = (q(&[1, 2], false)? - q(&[3], false)?).abs();
    Ok(format!(
        "deviations {d1:.1e}, {d2:.1e}, {d3:.1e} at N = {ANCHOR_TRUNCATION} (plain truncation gives {p2:.1e} for ζ(1,2) - ζ(3))"
    ))
}

fn criterion_9() -> Outcome {
    let exact = bernoulli_rational(12);
    let mut count = 0;
    for p in (5..=31u64).filter(|&p| modp::is_prime(p)) {
        for (n, b) in exact.iter().enumerate().take((p - 1) as usize) {
            let fast = bernoulli_mod_p(n as u64, p).map_err(|e| e.to_string())?;
            let slow = Residue::from_rational(b, p).map_err(|e| e.to_string())?;
            ensure(fast == slow, || format!("B_{n} mod {p}: {fast} vs {slow}"))?;
            if n >= 3 && n % 2 == 1 {
                ensure(fast.is_zero(), || format!("B_{n} mod {p} = {fast}"))?;
            }
            count += 1;
        }
    }
    for (n, b) in exact.iter().enumerate().skip(3).step_by(2) {
        ensure(b.is_zero(), || format!("B_{n} = {b}"))?;
    }
    ensure(
        exact[1] == num_rational::BigRational::new(BigInt::from(-1), BigInt::from(2)),
        || "B_1 convention".into(),
    )?;
    Ok(format!("{count} (n, p) pairs agree; odd B_n vanish"))
}

fn criterion_10() -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code =
        ohno_star::cli::run_with(["ohno", "diagnose-remark", "--k", "3"], &mut out, &mut err);
    let text = String::from_utf8(out).map_err(|e| e.to_string())?;
    ensure(code == 0, || {
        format!("exit code {code}: {}", String::from_utf8_lossy(&err))
    })?;
    let row = |p: u64| {
        text.lines()
            .find(|l| l.split('\t').next() == Some(&p.to_string()))
            .map(str::to_string)
    };
    let cells = |p| {
        row(p).map(|l| {
            l.split('\t')
                .skip(1)
                .take(2)
                .map(str::to_string)
                .collect::<Vec<_>>()
        })
    };
    ensure(cells(5) == Some(vec!["1".into(), "2".into()]), || {
        format!("p = 5 row: {:?}", row(5))
    })?;
    ensure(cells(7) == Some(vec!["3".into(), "1".into()]), || {
        format!("p = 7 row: {:?}", row(7))
    })?;
    ensure(text.contains("constant ratio: 3"), || {
        "constant ratio 3 not flagged".into()
    })?;
    let diag = modp::remark_diagnostic(3, PrimeWindow::default()).map_err(|e| e.to_string())?;
    ensure(diag.constant_ratio == Some(3), || {
        format!("library ratio {:?}", diag.constant_ratio)
    })?;
    Ok(format!(
        "rows for p = 5, 7 reproduced; constant ratio 3 over {} primes",
        diag.rows.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("shuffle against powers of (1)", criterion_1),
        ("dual shuffle expansion and c2 support", criterion_2),
        ("structural laws", criterion_3),
        ("binomial identities", criterion_4),
        ("finite Ohno-type relation mod p", criterion_5),
        ("other finite families mod p", criterion_6),
        ("real-side relations", criterion_7),
        ("numeric anchors", criterion_8),
        ("Bernoulli cross-oracle", criterion_9),
        ("remark diagnostic", criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match check() {
            Ok(detail) => ("PASS", detail),
            Err(detail) => {
                failed += 1;
                ("FAIL", detail)
            }
        };
        println!(
            "{status} criterion {:>2} ({name}): {detail} [{:.1}s]",
            n + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
