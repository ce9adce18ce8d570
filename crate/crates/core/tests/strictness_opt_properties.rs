mod common;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use symstab::graph::shape::CompletePartiteShape;
use symstab::objective::ObjectiveSpec;
use symstab::opt::{continuous_opt, finite_opt, kst_maximiser, merge_smallest, OptConfig};
use symstab::partite::engine::lambda_of_vector;
use symstab::partite::symmetric::lambda_of_shape;
use symstab::partite::PartiteVector;
use symstab::perturbation::vertex_gradient_polynomial;
use symstab::poly::UniPoly;
use symstab::rational::{rat, Rational};
use symstab::strictness::{candidate_strictness, str2_patterns, strictness_certificate, PatternBound};

use common::kp;

fn maximisers() -> Vec<(ObjectiveSpec, PartiteVector)> {
    vec![
        (kp(&[2, 2]), PartiteVector::uniform(2)),
        (kp(&[2, 1, 1, 1]), PartiteVector::uniform(8)),
        (kp(&[3, 1, 1]), PartiteVector::new(vec![rat(3, 5)]).unwrap()),
        (kp(&[3, 3]), PartiteVector::uniform(2)),
        (kp(&[2, 2, 2]), PartiteVector::uniform(3)),
    ]
}

/// φ_c(α) = ∇•_{b,α} − c·(x₀(1 − α) + min w).
fn phi(grad: &UniPoly, x0: &Rational, min_w: &Rational, c: &Rational) -> UniPoly {
    let rhs = UniPoly::new(vec![x0 + min_w, -x0.clone()]);
    grad.sub_scaled(&rhs, c)
}

fn check_str2_soundness(spec: &ObjectiveSpec, x: &PartiteVector) {
    let (zero, one) = (Rational::zero(), Rational::one());
    let (_, patterns) = str2_patterns(spec, x).unwrap();
    for p in patterns {
        let PatternBound::Certified(c) = &p.bound else { continue };
        let grad = vertex_gradient_polynomial(spec, x, &p.b).unwrap();
        if x.x0().is_zero() {
            assert!(grad.eval(&one) >= c * &p.min_w);
            continue;
        }
        let at_c = phi(&grad, x.x0(), &p.min_w, c);
        assert!(at_c.nonnegative_on(&zero, &one).unwrap(), "{} at {x}, pattern {:?}", spec.describe(), p.b);
        for below in [c - rat(1, 1000), c - (c.abs() + Rational::one()) / Rational::from_integer(2.into())] {
            let f = phi(&grad, x.x0(), &p.min_w, &below);
            assert_eq!(f.count_roots_open(&zero, &one).unwrap(), 0);
            assert!(!f.eval(&zero).is_negative() && !f.eval(&one).is_negative());
        }
    }
}

#[test]
fn str2_constants_are_sound_at_maximisers() {
    for (spec, x) in maximisers() {
        check_str2_soundness(&spec, &x);
        let report = strictness_certificate(&spec, std::slice::from_ref(&x)).unwrap();
        assert!(report.pass);
        assert!(candidate_strictness(&spec, &x).unwrap().clone_gradients_vanish);
    }
}

#[test]
fn kst_small_side_bound() {
    for t in 2..=9 {
        let sol = kst_maximiser(1, t).unwrap();
        assert_eq!(sol.small_side_bound, Some(true), "K_{{1,{t}}}");
        let bound = Rational::new(1.into(), (t as i64 + 1).into());
        assert!(Rational::one() - sol.alpha.interval().1 > bound);
    }
}

#[test]
fn candidates_are_stationary() {
    for (spec, _) in maximisers() {
        let set = continuous_opt(&spec, &OptConfig { starts: 60, max_support: 9, ..OptConfig::default() }).unwrap();
        assert!(!set.candidates.is_empty());
        for c in &set.candidates {
            assert!(c.residual_approx <= 1e-8, "{}: residual {}", spec.describe(), c.residual_approx);
            if let Some(r) = &c.exact_residual {
                assert!(r.is_zero(), "{}: snapped residual {r}", spec.describe());
            }
        }
    }
}

#[test]
fn finite_optima_approach_the_limit() {
    let n = 40;
    for (spec, x) in maximisers() {
        let limit = lambda_of_vector(&spec, &x).unwrap();
        let finite = finite_opt(&spec, n).unwrap();
        let k = spec.k() as i64;
        assert!(limit >= &finite.lambda - rat(k * k, n as i64), "{}", spec.describe());
        for shape in &finite.shapes {
            assert_eq!(lambda_of_shape(&spec, shape).unwrap(), finite.lambda);
        }
    }
}

#[test]
fn continuous_search_is_deterministic() {
    let spec = kp(&[3, 1, 1]);
    let config = OptConfig { starts: 40, seed: 7, seeds: 3, ..OptConfig::default() };
    let a = serde_json::to_string(&continuous_opt(&spec, &config).unwrap()).unwrap();
    let b = serde_json::to_string(&continuous_opt(&spec, &config).unwrap()).unwrap();
    assert_eq!(a, b);
}

fn shape() -> impl Strategy<Value = CompletePartiteShape> {
    proptest::collection::vec(1usize..=6, 2..=6).prop_map(|s| CompletePartiteShape::new(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn merging_never_decreases_bipartite_densities(g in shape(), s in 1usize..=3, t in 1usize..=4) {
        prop_assume!(s <= t && s * t >= 2 && g.sizes().len() >= 3 && g.order() >= s + t);
        let spec = kp(&[t, s]);
        let merged = merge_smallest(&g).unwrap();
        prop_assert!(lambda_of_shape(&spec, &merged).unwrap() >= lambda_of_shape(&spec, &g).unwrap());
    }

    #[test]
    fn str2_constants_are_sound(
        sizes in prop_oneof![Just(vec![2, 2]), Just(vec![2, 1]), Just(vec![3, 1, 1]), Just(vec![2, 1, 1])],
        nums in proptest::collection::vec(1i64..=6, 1..=3),
    ) {
        let total: i64 = nums.iter().sum();
        let d = total + 2;
        let x = PartiteVector::from_unsorted(nums.iter().map(|&p| rat(p, d)).collect()).unwrap();
        check_str2_soundness(&kp(&sizes), &x);
    }
}
