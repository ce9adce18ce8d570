//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use symstab::certificates::{certify_k2111, certify_k311, CertificateReport};
use symstab::graph::brute::brute_lambda_max;
use symstab::graph::edit::edit_distance_exact;
use symstab::graph::shape::complete_partite_shape_of;
use symstab::objective::ObjectiveSpec;
use symstab::opt::{continuous_opt, finite_opt, kst_maximiser, OptConfig};
use symstab::partite::edit::edit_distance_vectors;
use symstab::partite::engine::lambda_of_vector;
use symstab::partite::realise::{realisation, realisation_graph};
use symstab::partite::symmetric::{count_partite, density_formula};
use symstab::partite::{AttachmentPattern, PartiteVector};
use symstab::partitions::partitions;
use symstab::perturbation::{attach_polynomial, attach_value, flip_gradient, lagrange_residual, partial_derivative};
use symstab::poly::UniPoly;
use symstab::rational::{int, rat, Rational};
use symstab::strictness::strictness_certificate;
use symstab::symmetrise::{symmetrise_full, symmetrise_vertex};

use common::{choose, kp, krt_value, random_graph, random_spec, random_vector, rng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn k311_point() -> PartiteVector {
    PartiteVector::new(vec![rat(3, 5)]).unwrap()
}

fn exact_constants() -> Outcome {
    let x = PartiteVector::uniform(8);
    let a = lambda_of_vector(&kp(&[2, 1, 1, 1]), &x).map_err(e)?;
    let b = density_formula(&[2, 1, 1, 1], &x).map_err(e)?;
    ensure(a == rat(525, 1024) && b == a, || format!("K_2111: {a} / {b}"))?;
    let y = k311_point();
    let c = lambda_of_vector(&kp(&[3, 1, 1]), &y).map_err(e)?;
    let d = density_formula(&[3, 1, 1], &y).map_err(e)?;
    ensure(c == rat(216, 625) && d == c, || format!("K_311: {c} / {d}"))?;
    Ok("525/1024 and 216/625".into())
}

fn triple_agreement() -> Outcome {
    let mut rng = rng(2);
    let shapes: Vec<Vec<usize>> = (2..=5).flat_map(partitions).collect();
    let mut worst = 0.0f64;
    for a in &shapes {
        let spec = kp(a);
        let k = a.iter().sum::<usize>();
        for _ in 0..200 {
            let x = random_vector(&mut rng, 12, 4);
            let enumerated = lambda_of_vector(&spec, &x).map_err(e)?;
            let closed = density_formula(a, &x).map_err(e)?;
            ensure(enumerated == closed, || format!("{a:?} at {x}: {enumerated} vs {closed}"))?;
            let den = x.parts().iter().map(|p| p.denom().clone()).fold(num_bigint::BigInt::one(), |l, d| num_integer::Integer::lcm(&l, &d));
            let n = 240 * usize::try_from(den).unwrap();
            let finite = Rational::from_integer(count_partite(a, &realisation(n, &x)).map_err(e)?.into()) / choose(n, k);
            let gap = (finite - &closed).abs();
            let slack = rat((8 * k * k) as i64, n as i64);
            ensure(gap <= slack, || format!("{a:?} at {x}, n = {n}: gap {gap} > {slack}"))?;
            worst = worst.max(symstab::rational::to_f64(&(gap / slack)));
        }
    }
    Ok(format!("{} shapes x 200 vectors, worst gap/slack {worst:.3}", shapes.len()))
}

fn gradients() -> Outcome {
    let spec = kp(&[2, 1, 1, 1]);
    let x = PartiteVector::uniform(8);
    let cross = flip_gradient(&spec, &x, 1, 2).map_err(e)?;
    let within = flip_gradient(&spec, &x, 1, 1).map_err(e)?;
    ensure(cross == rat(150, 512) && within == rat(84, 512), || format!("flip gradients {cross}, {within}"))?;
    let mut values = Vec::new();
    for k in 0..=8usize {
        let b: Vec<bool> = (0..8).map(|i| i < k).collect();
        let v = attach_polynomial(&spec, &x, &b).map_err(e)?.eval(&Rational::one());
        let expected = rat(24, 4096) * choose(k, 3) * (rat(19, 2) - int(k as i64));
        ensure(v == expected, || format!("attachment to {k} parts: {v} vs {expected}"))?;
        values.push(v);
    }
    let best = values.iter().max().unwrap();
    let argmax: Vec<usize> = (0..=8).filter(|&k| &values[k] == best).collect();
    ensure(argmax == [7], || format!("argmax {argmax:?}"))?;
    Ok("150/512, 84/512, table argmax k = 7".into())
}

fn lagrange_identity() -> Outcome {
    let mut rng = rng(4);
    for _ in 0..100 {
        let spec = random_spec(&mut rng);
        let x = random_vector(&mut rng, 12, 4);
        let k = int(spec.k() as i64);
        for i in x.support_star() {
            let lhs = partial_derivative(&spec, &x, i).map_err(e)? / &k;
            let rhs = attach_value(&spec, &x, &AttachmentPattern::clone_of(&x, i).map_err(e)?).map_err(e)?;
            ensure(lhs == rhs, || format!("{} at {x}, i = {i}: {lhs} vs {rhs}", spec.describe()))?;
        }
    }
    let maximisers = [
        (kp(&[2, 1, 1, 1]), PartiteVector::uniform(8)),
        (kp(&[3, 1, 1]), k311_point()),
        (kp(&[2, 2]), PartiteVector::uniform(2)),
    ];
    for (spec, x) in &maximisers {
        let r = lagrange_residual(spec, x).map_err(e)?;
        ensure(r.is_zero(), || format!("residual {r} for {} at {x}", spec.describe()))?;
    }
    Ok("100 random pairs, zero residual at 3 maximisers".into())
}

fn opt_search() -> Outcome {
    let config = OptConfig { starts: 120, max_support: 10, ..OptConfig::default() };
    let cases: Vec<(ObjectiveSpec, PartiteVector, Rational)> = vec![
        (kp(&[2, 2]), PartiteVector::uniform(2), rat(3, 8)),
        (kp(&[2, 1, 1, 1]), PartiteVector::uniform(8), rat(525, 1024)),
        (kp(&[3, 1, 1]), k311_point(), rat(216, 625)),
        (kp(&[2, 2]), PartiteVector::uniform(2), krt_value(2, 2)),
        (kp(&[3, 3]), PartiteVector::uniform(2), krt_value(2, 3)),
        (kp(&[2, 2, 2]), PartiteVector::uniform(3), krt_value(3, 2)),
    ];
    for (spec, expected, value) in &cases {
        let set = continuous_opt(spec, &config).map_err(e)?;
        let best = set.best().ok_or("no candidate")?;
        ensure((best.lambda_approx - symstab::rational::to_f64(value)).abs() < 1e-9, || {
            format!("{}: lambda approx {}", spec.describe(), best.lambda_approx)
        })?;
        ensure(best.exact.as_ref() == Some(expected) && best.exact_lambda.as_ref() == Some(value), || {
            format!("{}: snapped {:?} with {:?}", spec.describe(), best.exact, best.exact_lambda)
        })?;
    }
    Ok(format!("{} objectives recovered exactly", cases.len()))
}

fn require_checks(report: &CertificateReport, names: &[&str]) -> Result<(), String> {
    ensure(report.pass(), || format!("{} failed: {:?}", report.target, report.failed_checks().map(|c| &c.name).collect::<Vec<_>>()))?;
    for name in names {
        let check = report.check(name).ok_or_else(|| format!("{} lacks check {name:?}", report.target))?;
        ensure(check.pass, || format!("{name} failed"))?;
    }
    Ok(())
}

fn certificates() -> Outcome {
    let k2111 = certify_k2111().map_err(e)?;
    let mut names: Vec<String> = (1..=7).map(|l| format!("bound on h_{l}")).collect();
    names.extend((1..=7).map(|l| format!("no critical value of h_{l} reaches lambda")));
    require_checks(&k2111, &names.iter().map(String::as_str).collect::<Vec<_>>())?;
    ensure(k2111.lambda_max == Some(rat(525, 1024)), || "K_2111 value".into())?;
    let k311 = certify_k311().map_err(e)?;
    require_checks(
        &k311,
        &[
            "gram matrices are positive definite",
            "sum-of-squares margin is at least 1/50",
            "eliminant is divisible by q",
            "shifted eliminant has a positive multiple",
            "bound on h below y = 3/5",
        ],
    )?;
    ensure(k311.lambda_max == Some(rat(216, 625)), || "K_311 value".into())?;
    Ok(format!("{} + {} checks pass", k2111.checks.len(), k311.checks.len()))
}

fn strictness() -> Outcome {
    let cases = [
        (kp(&[2, 2]), PartiteVector::uniform(2)),
        (kp(&[2, 1, 1, 1]), PartiteVector::uniform(8)),
        (kp(&[3, 1, 1]), k311_point()),
        (kp(&[3, 3]), PartiteVector::uniform(2)),
        (kp(&[2, 2, 2]), PartiteVector::uniform(3)),
    ];
    let mut constants = Vec::new();
    for (spec, x) in &cases {
        let r = strictness_certificate(spec, std::slice::from_ref(x)).map_err(e)?;
        ensure(r.pass && r.c > Rational::zero(), || format!("{}: c = {}", spec.describe(), r.c))?;
        constants.push(r.c.to_string());
    }
    let sum = ObjectiveSpec::complete_partite_sum(3).map_err(e)?;
    let r = strictness_certificate(&sum, &[PartiteVector::uniform(2)]).map_err(e)?;
    ensure(!r.pass && r.c.is_zero(), || format!("counterexample c = {}", r.c))?;
    Ok(format!("c = {}; counterexample c = 0", constants.join(", ")))
}

fn symmetrisation() -> Outcome {
    let spec = kp(&[2, 2]);
    let mut rng = rng(8);
    let mut total_steps = 0;
    for round in 0..200 {
        let n = rng.gen_range(4..=10);
        let g = random_graph(&mut rng, n);
        let trace = symmetrise_full(&spec, &g).map_err(e)?;
        let monotone = trace.steps.iter().all(|s| s.lambda_before <= s.lambda_after)
            && trace.steps.windows(2).all(|w| w[0].lambda_after == w[1].lambda_before);
        ensure(monotone && trace.is_monotone(), || format!("round {round}: not monotone"))?;
        ensure(trace.steps.len() <= n * (n - 1) / 2, || format!("round {round}: {} steps", trace.steps.len()))?;
        ensure(complete_partite_shape_of(&trace.final_graph).is_some(), || format!("round {round}: not complete partite"))?;
        total_steps += trace.steps.len();

        let mut h = trace.final_graph.add_vertex(0).map_err(e)?;
        for u in 0..n {
            h.set_edge(u, n, rng.gen_bool(0.5));
        }
        let single = symmetrise_vertex(&spec, &h, n).map_err(e)?;
        ensure(single.steps.iter().all(|s| s.pairs_edited == 1 && s.lambda_before <= s.lambda_after), || {
            format!("round {round}: single-vertex trace edits more than one pair")
        })?;
    }
    Ok(format!("200 graphs, {total_steps} steps"))
}

fn oracle() -> Outcome {
    let spec = kp(&[2, 1]);
    let mut values = Vec::new();
    for n in 5..=7 {
        let brute = brute_lambda_max(&spec, n).map_err(e)?;
        let partite = finite_opt(&spec, n).map_err(e)?;
        ensure(brute.value == partite.lambda, || format!("n = {n}: {} vs {}", brute.value, partite.lambda))?;
        values.push(brute.value.to_string());
    }
    Ok(format!("lambda(5..7) = {}", values.join(", ")))
}

fn edit_metric() -> Outcome {
    let mut rng = rng(10);
    let zero = PartiteVector::zero();
    for _ in 0..50 {
        let x = random_vector(&mut rng, 12, 4);
        let d = edit_distance_vectors(&x, &zero).map_err(e)?;
        ensure(d == x.norm2_squared(), || format!("{x}: {d}"))?;
    }
    for _ in 0..100 {
        let v: Vec<PartiteVector> = (0..3).map(|_| random_vector(&mut rng, 12, 3)).collect();
        let d = |a: usize, b: usize| edit_distance_vectors(&v[a], &v[b]).map_err(e);
        ensure(d(0, 1)? == d(1, 0)?, || "symmetry".into())?;
        ensure(d(0, 0)?.is_zero(), || "identity".into())?;
        ensure(v[0] == v[1] || !d(0, 1)?.is_zero(), || format!("{} and {} at distance 0", v[0], v[1]))?;
        ensure(d(0, 2)? <= d(0, 1)? + d(1, 2)?, || format!("triangle {} {} {}", v[0], v[1], v[2]))?;
    }
    let slack = rat(2 * 9, 64);
    for _ in 0..20 {
        let x = random_vector(&mut rng, 8, 3);
        let y = random_vector(&mut rng, 8, 3);
        let limit = edit_distance_vectors(&x, &y).map_err(e)?;
        let (g, _) = realisation_graph(8, &x).map_err(e)?;
        let (h, _) = realisation_graph(8, &y).map_err(e)?;
        let finite = edit_distance_exact(&g, &h).map_err(e)?;
        ensure((finite.clone() - &limit).abs() <= slack, || format!("{x} vs {y}: {finite} and {limit}"))?;
    }
    Ok("norm identity, metric axioms, n = 8 agreement".into())
}

fn kst_solver() -> Outcome {
    let sol = kst_maximiser(1, 4).map_err(e)?;
    let (lo, hi) = sol.alpha.interval();
    let width = hi - lo;
    ensure(width <= rat(1, 1 << 40), || format!("width {width}"))?;
    // (3+√3)/6 ∈ (lo, hi] iff (6lo − 3)² < 3 ≤ (6hi − 3)² with 6lo − 3 ≥ 0.
    let (a, b) = (lo * int(6) - int(3), hi * int(6) - int(3));
    ensure(a >= Rational::zero() && &a * &a < int(3) && &b * &b >= int(3), || "interval misses (3+sqrt 3)/6".into())?;
    let root = sol.root.as_ref().ok_or("no root of h")?;
    let (rlo, rhi) = root.interval();
    // 2 − √3 ∈ (rlo, rhi] iff (2 − rhi)² ≤ 3 < (2 − rlo)².
    let (p, q) = (int(2) - rhi, int(2) - rlo);
    ensure(&p * &p <= int(3) && &q * &q > int(3), || "root interval misses 2 - sqrt 3".into())?;
    ensure(UniPoly::from_ints(&[1, -4, 1]).divides(&sol.h), || "x^2 - 4x + 1 does not divide h".into())?;
    ensure(Rational::one() - hi > rat(1, 5) && sol.small_side_bound == Some(true), || "1 - alpha <= 1/5".into())?;
    let mut balanced = 0;
    for t in 1..10usize {
        for s in 1..=t.min(10 - t) {
            let d = t - s;
            if s * t < 2 || s < d * d.saturating_sub(1) / 2 {
                continue;
            }
            let sol = kst_maximiser(s, t).map_err(e)?;
            ensure(sol.alpha.as_rational() == Some(rat(1, 2)), || format!("K_{{{s},{t}}}: alpha {}", sol.alpha_approx))?;
            balanced += 1;
        }
    }
    Ok(format!("K_(1,4) isolated to width {:.1e}; {balanced} balanced cases", symstab::rational::to_f64(&width)))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("exact constants", exact_constants),
        ("enumeration, closed form and finite shapes agree", triple_agreement),
        ("gradients at the K_2111 maximiser", gradients),
        ("lagrange identity", lagrange_identity),
        ("opt search", opt_search),
        ("certificates", certificates),
        ("strictness", strictness),
        ("symmetrisation", symmetrisation),
        ("oracle equivalence", oracle),
        ("edit metric", edit_metric),
        ("K_st solver", kst_solver),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {reason} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
