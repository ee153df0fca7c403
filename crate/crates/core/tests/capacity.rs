use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use sas_core::knowledge::memory_capacity_log10;

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn log10_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap().log10();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().log10() + shift as f64 * std::f64::consts::LOG10_2
}

#[test]
fn exact_for_every_small_binomial() {
    for n in 0..=60u64 {
        for k in 0..=n {
            let expect = log10_big(&binomial(n, k));
            let got = if n == 0 {
                0.0
            } else {
                memory_capacity_log10(n as f64, k as f64).unwrap()
            };
            assert!(
                (got - expect).abs() <= 1e-9,
                "C({n},{k}): {got} vs {expect}"
            );
        }
    }
}

#[test]
fn agrees_with_big_integers_across_branches() {
    for n in [100u64, 1000, 5000] {
        for k in (1..n).step_by((n / 97) as usize) {
            let expect = log10_big(&binomial(n, k));
            let got = memory_capacity_log10(n as f64, k as f64).unwrap();
            assert!(
                ((got - expect) / expect).abs() <= 1e-12,
                "C({n},{k}): {got} vs {expect}"
            );
        }
    }
}

#[test]
fn brain_scale_oracle() {
    // log10 C(1e11, 1e3), evaluated independently at 60 significant digits.
    let oracle = 8432.395353608566;
    let got = memory_capacity_log10(1e11, 1e3).unwrap();
    assert!(((got - oracle) / oracle).abs() <= 1e-9, "{got}");
}

#[test]
fn symmetric_and_unimodal() {
    let n = 500.0;
    let mut prev = 0.0;
    for k in 0..=250 {
        let v = memory_capacity_log10(n, k as f64).unwrap();
        let mirror = memory_capacity_log10(n, n - k as f64).unwrap();
        assert!((v - mirror).abs() <= 1e-9 * v.max(1.0));
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn rejects_out_of_domain() {
    assert!(memory_capacity_log10(10.0, 11.0).is_err());
    assert!(memory_capacity_log10(-1.0, 0.0).is_err());
    assert!(memory_capacity_log10(f64::NAN, 1.0).is_err());
    assert!(memory_capacity_log10(10.0, -1.0).is_err());
}

proptest! {
    #[test]
    fn increasing_in_n_for_fixed_k(k in 1u64..2000, n in 1u64..1_000_000, step in 1u64..1000) {
        let n = n.max(k);
        let lo = memory_capacity_log10(n as f64, k as f64).unwrap();
        let hi = memory_capacity_log10((n + step) as f64, k as f64).unwrap();
        prop_assert!(hi > lo, "C({},{k})={hi} <= C({n},{k})={lo}", n + step);
    }
}
