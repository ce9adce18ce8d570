mod common;

use num_traits::Signed;
use proptest::prelude::*;
use symstab::partite::edit::edit_distance_vectors;
use symstab::partite::engine::lambda_of_vector;
use symstab::partite::realise::realisation;
use symstab::partite::symmetric::{count_partite, density_formula, lambda_closed_form};
use symstab::partite::PartiteVector;
use symstab::partitions::partitions;
use symstab::rational::{rat, Rational};

use common::{choose, kp};

/// Vectors with at most `support` parts and common denominator at most `den`.
fn vector(den: i64, support: usize) -> impl Strategy<Value = PartiteVector> {
    (1..=den).prop_flat_map(move |d| {
        proptest::collection::vec(0..=d, 1..=support).prop_filter_map("mass above 1", move |nums| {
            (nums.iter().sum::<i64>() <= d)
                .then(|| PartiteVector::from_unsorted(nums.iter().map(|&p| rat(p, d)).collect()).unwrap())
        })
    })
}

fn shape() -> impl Strategy<Value = Vec<usize>> {
    let all: Vec<Vec<usize>> = (2..=5).flat_map(partitions).collect();
    proptest::sample::select(all)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumeration_matches_the_closed_form(a in shape(), x in vector(12, 4)) {
        let spec = kp(&a);
        let enumerated = lambda_of_vector(&spec, &x).unwrap();
        prop_assert_eq!(&enumerated, &density_formula(&a, &x).unwrap());
        prop_assert_eq!(&enumerated, &lambda_closed_form(&spec, &x).unwrap());
    }

    #[test]
    fn realisations_converge(a in shape(), x in vector(12, 4)) {
        let k = a.iter().sum::<usize>();
        let limit = density_formula(&a, &x).unwrap();
        for n in [60usize, 120, 240] {
            let count = count_partite(&a, &realisation(n, &x)).unwrap();
            let finite = Rational::from_integer(count.into()) / choose(n, k);
            let slack = rat((8 * k * k) as i64, n as i64);
            prop_assert!((finite - &limit).abs() <= slack, "n = {}", n);
        }
    }

    #[test]
    fn edit_distance_is_a_metric(x in vector(12, 3), y in vector(12, 3), z in vector(12, 3)) {
        let d = |a: &PartiteVector, b: &PartiteVector| edit_distance_vectors(a, b).unwrap();
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert_eq!(d(&x, &y) == Rational::from_integer(0.into()), x == y);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
    }

    #[test]
    fn edit_distance_is_bounded_by_l1(x in vector(12, 4), y in vector(12, 4)) {
        prop_assert!(edit_distance_vectors(&x, &y).unwrap() <= x.l1_distance(&y) * rat(2, 1));
    }

    #[test]
    fn distance_to_zero_is_the_square_norm(x in vector(12, 4)) {
        prop_assert_eq!(edit_distance_vectors(&x, &PartiteVector::zero()).unwrap(), x.norm2_squared());
    }

    #[test]
    fn truncation_tail_bound(x in vector(16, 6), m in 0usize..6) {
        let tail: Rational = x.parts().iter().skip(m).map(|p| p * p).sum();
        prop_assert!(edit_distance_vectors(&x, &x.truncate(m)).unwrap() <= tail);
    }

    #[test]
    fn json_round_trip(x in vector(12, 4)) {
        prop_assert_eq!(PartiteVector::from_json(&x.to_json()).unwrap(), x);
    }
}
