use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use sas_core::reliability::{
    cancellation_delta, collective_reliability, report, summed_reliability, ErrorProfile,
};

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

/// `(1 − Π r, 1 − Σ r, Σ r − Π r)` in exact rational arithmetic.
fn rational_oracle(rates: &[f64]) -> (f64, f64, f64) {
    let mut prod = BigRational::one();
    let mut sum = BigRational::zero();
    for &r in rates {
        prod *= exact(r);
        sum += exact(r);
    }
    let one = BigRational::from_integer(BigInt::one());
    let f = |q: BigRational| q.to_f64().unwrap();
    (f(&one - &prod), f(&one - &sum), f(sum - prod))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn matches_exact_rational_arithmetic(rates in proptest::collection::vec(0.01f64..0.99, 1..9)) {
        let p = ErrorProfile::new(rates.clone()).unwrap();
        let (collective, summed, delta) = rational_oracle(&rates);
        prop_assert!((collective_reliability(&p) - collective).abs() <= 1e-15);
        prop_assert!((cancellation_delta(&p) - delta).abs() <= 1e-12);
        let s = summed_reliability(&p);
        prop_assert_eq!(s.saturated, summed < 0.0);
        prop_assert!((s.value - summed).abs() <= 1e-12);
    }

    #[test]
    fn cancellation_is_positive_beyond_one_subsystem(rates in proptest::collection::vec(0.01f64..0.99, 2..9)) {
        prop_assert!(cancellation_delta(&ErrorProfile::new(rates).unwrap()) > 0.0);
    }

    #[test]
    fn collective_never_worse_than_best_member(rates in proptest::collection::vec(0.01f64..0.99, 1..9)) {
        let p = ErrorProfile::new(rates.clone()).unwrap();
        let best = rates.iter().map(|r| 1.0 - r).fold(0.0, f64::max);
        prop_assert!(collective_reliability(&p) >= best - 1e-15);
    }
}

#[test]
fn single_subsystem_has_no_cancellation() {
    for r in [0.01, 0.1, 0.5, 0.99] {
        assert_eq!(
            cancellation_delta(&ErrorProfile::new(vec![r]).unwrap()),
            0.0
        );
    }
}

#[test]
fn two_subsystem_report() {
    let r = report(&ErrorProfile::new(vec![0.1, 0.2]).unwrap());
    assert!((r.collective - 0.98).abs() < 1e-15);
    assert!((r.summed - 0.7).abs() < 1e-15);
    assert!((r.cancellation_delta - 0.28).abs() < 1e-15);
    assert!(!r.saturated);
}
