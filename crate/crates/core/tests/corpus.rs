mod common;

use std::time::Instant;

use num_bigint::BigUint;
use num_integer::binomial;
use weilmot_core::eig::{realization_kernel, Analysis, EigGroup};
use weilmot_core::lefmot::{eigen_multisets, mass, primitive_dimension, primitive_multiset};
use weilmot_core::Options;

#[test]
fn corpus_has_enough_entries() {
    let c = common::corpus();
    assert!(c.len() >= 50);
    assert!(c.iter().all(|e| e.coeffs.len() <= 7));
}

#[test]
fn eig_freeness_and_rank_identities() {
    let opts = Options::default();
    let start = Instant::now();
    let mut determined = 0;
    for entry in common::corpus() {
        let t = Instant::now();
        let w = entry.weil();
        let a = Analysis::new(&w, &opts);
        let e = a.eig().unwrap_or_else(|err| panic!("{}: {err}", entry.label));
        assert!(e.is_free(), "{}", entry.label);
        let rep = a.invariants_report(&opts);
        if let Ok(s) = a.field() {
            // every kernel basis vector is an exact relation
            let k = realization_kernel(s, e, opts.search_bound).unwrap();
            for v in &k.basis {
                let (ex, b) = e.realization_exponents(&e.element(v.clone()), w.num_roots());
                assert!(s.is_one(&ex, b).unwrap(), "{}: {v:?}", entry.label);
            }
        }
        if rep.rank_identity_holds.is_some() {
            determined += 1;
        }
        assert_ne!(rep.rank_identity_holds, Some(false), "{}", entry.label);
        assert_ne!(rep.kernel_identity_holds, Some(false), "{}", entry.label);
        assert_ne!(rep.rank_bounds_hold, Some(false), "{}", entry.label);
        if w.is_simple() && !w.has_real_roots() {
            assert!(rep.kernel_identity_holds.is_some() || rep.kernel_rank.is_err(), "{}", entry.label);
        }
        eprintln!("{:<16} r={:?} ker={:?} {:?}", entry.label, rep.frobenius_rank, rep.kernel_rank, t.elapsed());
    }
    assert!(determined >= 50);
    assert!(start.elapsed().as_secs() < 120);
}

#[test]
fn mass_conservation() {
    for entry in common::corpus() {
        let w = entry.weil();
        let e = &EigGroup::build(&w).unwrap();
        let top = 2 * w.g() as u64;
        for d in 1..=4u32 {
            for (k, m) in eigen_multisets(&w, e, d).into_iter().enumerate() {
                assert_eq!(mass(&m), binomial(BigUint::from(top * d as u64), BigUint::from(k as u64)));
                assert!(m.keys().all(|x| x.weight == k as i64));
            }
            for n in 0..=(w.g() as u32 * d) {
                let p = primitive_multiset(&w, e, d, n).unwrap();
                assert_eq!(mass(&p), primitive_dimension(w.g(), d, n), "{} d={d} n={n}", entry.label);
            }
        }
    }
}

#[test]
fn frobenius_rank_is_stable_under_base_change() {
    let opts = Options::default();
    for entry in common::corpus() {
        let w = entry.weil();
        let Ok(r) = Analysis::new(&w, &opts).r() else { continue };
        let t = Instant::now();
        for k in 2..=6 {
            let wk = w.base_change(k, &opts).unwrap();
            match Analysis::new(&wk, &opts).r() {
                Ok(rk) => assert_eq!(rk, r, "{} k={k}", entry.label),
                Err(e) => eprintln!("{} k={k}: {e}", entry.label),
            }
        }
        eprintln!("{:<16} {:?}", entry.label, t.elapsed());
    }
}
