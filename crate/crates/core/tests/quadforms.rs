use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weilmot_core::exactmath::RatMatrix;
use weilmot_core::quadforms::{
    am_filter, constant_signature_certify, signature, sturm_positive_roots, AmFilter, Signature, SymRatForm,
    TransferVerdict,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> (RatMatrix, RatMatrix) {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let p = RatMatrix::from_i64_rows(&rows);
        if let Some(inv) = p.inverse() {
            return (p, inv);
        }
    }
}

fn random_signs(rng: &mut ChaCha8Rng, plus: usize, minus: usize) -> Vec<BigRational> {
    let mut d: Vec<BigRational> = (0..plus).map(|_| rat(rng.gen_range(1..=5), rng.gen_range(1..=4))).collect();
    d.extend((0..minus).map(|_| rat(-rng.gen_range(1..=5), rng.gen_range(1..=4))));
    d
}

#[test]
fn constant_signature_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5167);
    let shapes: Vec<(usize, usize)> =
        (1..=6).flat_map(|n| (0..=n).map(move |p| (p, n - p))).collect();
    for trial in 0..500 {
        let (plus, minus) = shapes[trial % shapes.len()];
        let n = plus + minus;
        let (p, pinv) = random_invertible(&mut rng, n);
        let d = RatMatrix::diag(&random_signs(&mut rng, plus, minus));
        let m = pinv.transpose().mul(&d).mul(&pinv);
        let lambda: Vec<BigRational> = (0..n).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
        let u0 = p.mul(&RatMatrix::diag(&lambda)).mul(&pinv);
        let eps = rat(1, rng.gen_range(1..=50));
        let u = u0.mul(&u0).add(&RatMatrix::identity(n).scale(&eps));
        let eta = SymRatForm::new(m).unwrap();
        let cert = constant_signature_certify(&eta, &u).unwrap();
        let expected = Signature { plus, minus, zero: 0 };
        assert_eq!(cert.verdict, TransferVerdict::SignaturesEqual(expected), "trial {trial}");
        assert_eq!(cert.signature_eta_u, expected);
    }
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn am_filter_matches_enumeration() {
    let candidates: Vec<Signature> =
        (0..=2usize).map(|minus| Signature { plus: 2 - minus, minus, zero: 0 }).collect();
    for m in 1..=21u32 {
        // realize each candidate and sum it m times
        let survivors: Vec<Signature> = candidates
            .iter()
            .copied()
            .filter(|c| {
                let entries: Vec<i64> =
                    (0..m).flat_map(|_| (0..2).map(|i| if i < c.plus { 1 } else { -1 })).collect();
                signature(&RatMatrix::diag_i64(&entries)).minus.is_multiple_of(4)
            })
            .collect();
        let got = am_filter(m).unwrap();
        let expected =
            if survivors.len() == 1 { AmFilter::Unique(survivors[0]) } else { AmFilter::Inconclusive(survivors) };
        assert_eq!(got, expected, "m = {m}");
        if m % 2 == 1 {
            assert_eq!(got, AmFilter::Unique(Signature { plus: 2, minus: 0, zero: 0 }));
        }
    }
}

fn sym_matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec((-6i64..=6, 1i64..=4), n * n).prop_map(move |v| {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let (a, b) = v[i * n + j];
                m[(i, j)] = rat(a, b);
                m[(j, i)] = rat(a, b);
            }
        }
        m
    })
}

fn unimodular(n: usize) -> impl Strategy<Value = RatMatrix> {
    // product of elementary operations
    prop::collection::vec((0..n, 0..n, -3i64..=3), 0..12).prop_map(move |ops| {
        let mut c = RatMatrix::identity(n);
        for (i, j, k) in ops {
            if i != j {
                let mut e = RatMatrix::identity(n);
                e[(i, j)] = rat(k, 1);
                c = c.mul(&e);
            }
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn signature_is_congruence_invariant((g, c) in (1usize..=5).prop_flat_map(|n| (sym_matrix(n), unimodular(n)))) {
        let h = c.transpose().mul(&g).mul(&c);
        prop_assert_eq!(signature(&h), signature(&g));
        let s = signature(&g);
        prop_assert_eq!(s.plus + s.minus + s.zero, g.rows());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symmetric_matrices_are_real_rooted(g in (1usize..=5).prop_flat_map(sym_matrix)) {
        let r = sturm_positive_roots(&g.charpoly());
        prop_assert_eq!(r.real, g.rows());
    }

    // arbitrary symmetric S0: certificates may be refused, but never wrong
    #[test]
    fn certificates_are_sound((m, s0) in (1usize..=4).prop_flat_map(|n| (sym_matrix(n), sym_matrix(n))), k in 1i64..=20) {
        let Some(minv) = m.inverse() else { return Ok(()) };
        let u0 = minv.mul(&s0);
        let u = u0.mul(&u0).add(&RatMatrix::identity(m.rows()).scale(&rat(1, k)));
        let eta = SymRatForm::new(m.clone()).unwrap();
        if let Ok(cert) = constant_signature_certify(&eta, &u) {
            prop_assert_eq!(cert.verdict, TransferVerdict::SignaturesEqual(signature(&m)));
            prop_assert_eq!(signature(&m.mul(&u)), signature(&m));
        }
    }
}

#[test]
fn zero_and_identity_edge_cases() {
    assert_eq!(signature(&RatMatrix::zeros(3, 3)), Signature { plus: 0, minus: 0, zero: 3 });
    let one = RatMatrix::diag(&[BigRational::one(), BigRational::zero()]);
    assert_eq!(signature(&one), Signature { plus: 1, minus: 0, zero: 1 });
}
