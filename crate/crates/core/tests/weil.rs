use std::time::Instant;

use num_bigint::BigInt;
use proptest::prelude::*;
use weilmot_core::weil::{power_polynomial, power_polynomial_newton, WeilPolynomial};
use weilmot_core::{Error, Options};

#[test]
fn quadratic_sweep_matches_discriminant() {
    let start = Instant::now();
    let opts = Options::default();
    for q in [2i64, 3, 4, 5, 7, 8, 9, 25] {
        let bound = 2 * (q as f64).sqrt().ceil() as i64 + 2;
        for a in -bound..=bound {
            let got = WeilPolynomial::validate(&BigInt::from(q), &[q.into(), (-a).into(), 1.into()], &opts);
            assert_eq!(got.is_ok(), a * a <= 4 * q, "q={q} a={a}: {got:?}");
            if let Err(e) = got {
                assert!(matches!(e, Error::RootModulusFailed { .. }), "{e}");
            }
        }
    }
    assert!(start.elapsed().as_secs() < 5);
}

fn quadratic_factor() -> impl Strategy<Value = (i64, Vec<i64>)> {
    prop::sample::select(vec![2i64, 3, 4, 5, 7, 9]).prop_flat_map(|q| {
        let b = (2.0 * (q as f64).sqrt()).floor() as i64;
        (-b..=b).prop_filter("strict", move |a| a * a < 4 * q).prop_map(move |a| (q, vec![q, -a, 1]))
    })
}

fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_of_weil_factors_validate((q, f) in quadratic_factor(), a2 in 0i64..=4, pick in 0usize..3) {
        let b = (2.0 * (q as f64).sqrt()).floor() as i64;
        let a2 = a2.min(b).max(-b);
        let g = [vec![q, -a2, 1], vec![q, 0, 1], vec![q, a2 / 2, 1]][pick].clone();
        let p = mul(&f, &g);
        let w = WeilPolynomial::from_i64(q, &p).unwrap();
        prop_assert_eq!(w.g(), 2);
        let mc = w.multiplicity_and_center();
        prop_assert_eq!(mc.m * mc.center_degree as u32 <= 4, true);
        // base change agrees with the power-sum construction
        for k in 2..=3 {
            prop_assert_eq!(power_polynomial(w.poly(), k), power_polynomial_newton(w.poly(), k));
        }
    }

    #[test]
    fn perturbed_constant_term_breaks_functional_equation((q, f) in quadratic_factor(), delta in 1i64..5) {
        let mut c = f.clone();
        c[0] += delta;
        prop_assert!(WeilPolynomial::from_i64(q, &c).is_err());
    }
}

#[test]
fn non_prime_powers_are_rejected() {
    for q in [1i64, 6, 10, 12, 15, 18] {
        let got = WeilPolynomial::from_i64(q, &[q, 0, 1]);
        assert!(matches!(got, Err(Error::NotPrimePower(_)) | Err(Error::Malformed(_))), "{q}: {got:?}");
    }
}
