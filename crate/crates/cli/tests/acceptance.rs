//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use weilmot_core::eig::{Analysis, EigGroup};
use weilmot_core::exactmath::RatMatrix;
use weilmot_core::lefmot::{
    classify_orbits, dims, eigen_multisets, hypothesis_check, mass, predicted_signature, rho_table, Ambient,
    Classification, RhoSource, Verdict,
};
use weilmot_core::quadforms::{
    am_filter, constant_signature_certify, signature, tannaka_transfer, AmFilter, Signature, SymRatForm,
    TransferVerdict,
};
use weilmot_core::weil::WeilPolynomial;
use weilmot_core::{Error, Options};

const CORPUS: &str = include_str!("../../../data/corpus.txt");

struct Entry {
    label: String,
    q: i64,
    coeffs: Vec<i64>,
}

impl Entry {
    fn weil(&self) -> WeilPolynomial {
        WeilPolynomial::from_i64(self.q, &self.coeffs).unwrap_or_else(|e| panic!("{}: {e}", self.label))
    }
}

fn corpus() -> Vec<Entry> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            Entry {
                label: t[0].to_string(),
                q: t[1].parse().unwrap(),
                coeffs: t[2..].iter().map(|c| c.parse().unwrap()).collect(),
            }
        })
        .collect()
}

fn analysis(q: i64, c: &[i64]) -> Analysis {
    Analysis::new(&WeilPolynomial::from_i64(q, c).unwrap(), &Options::default())
}

fn u(n: u64) -> BigUint {
    BigUint::from(n)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn within(start: Instant, limit: Duration, what: &str) {
    let t = start.elapsed();
    assert!(t < limit, "{what} took {t:?}, limit {limit:?}");
}

fn weil_soundness() {
    let start = Instant::now();
    let opts = Options::default();
    for q in [2i64, 3, 4, 5, 7, 8, 9, 25] {
        let bound = 2 * (q as f64).sqrt().ceil() as i64 + 2;
        for a in -bound..=bound {
            let got = WeilPolynomial::validate(&BigInt::from(q), &[q.into(), (-a).into(), 1.into()], &opts);
            assert_eq!(got.is_ok(), a * a <= 4 * q, "q={q} a={a}: {got:?}");
        }
    }
    within(start, Duration::from_secs(5), "sweep");
}

fn eig_identities() {
    let start = Instant::now();
    let opts = Options::default();
    let entries = corpus();
    assert!(entries.len() >= 50, "corpus has {} entries", entries.len());
    assert!(entries.iter().all(|e| e.coeffs.len() <= 7));
    for (q, c) in [(3, vec![3, 0, 1]), (5, vec![5, -1, 1]), (9, vec![9, 6, 1])] {
        assert!(entries.iter().any(|e| e.q == q && e.coeffs == c), "corpus lacks q={q} {c:?}");
    }
    for entry in &entries {
        let w = entry.weil();
        let a = Analysis::new(&w, &opts);
        let e = a.eig().unwrap_or_else(|err| panic!("{}: {err}", entry.label));
        assert!(e.is_free(), "{} has torsion", entry.label);
        let rep = a.invariants_report(&opts);
        assert_ne!(rep.rank_identity_holds, Some(false), "{}: rank identity", entry.label);
        if let (Ok(k), Ok(r)) = (&rep.kernel_rank, &rep.frobenius_rank) {
            assert_eq!(*k as i64 + r + 1, e.rank() as i64, "{}", entry.label);
            if w.is_simple() && !w.has_real_roots() {
                let m = w.multiplicity_and_center().m as usize;
                assert_eq!(*k as i64, (w.g() / m) as i64 - r, "{}: kernel identity", entry.label);
            }
        }
    }
    within(start, Duration::from_secs(120), "corpus");
}

fn supersingular_power() {
    let start = Instant::now();
    let a = analysis(3, &[3, 0, 1]);
    let r = classify_orbits(&a, 4, 2, Ambient::Full).unwrap();
    assert_eq!((r.dims.lefschetz.clone(), r.dims.exotic.clone(), r.dims.non_tate.clone()), (u(36), u(2), u(32)));
    assert_eq!(r.dims.total, binomial(u(8), u(4)));
    let exotic: Vec<_> = r.orbits.iter().filter(|o| o.classification == Classification::Exotic).collect();
    assert_eq!(exotic.len(), 1);
    let e = a.eig().unwrap();
    let mut want = vec![e.scale(&e.symbol(0), 4), e.scale(&e.symbol(1), 4)];
    want.sort();
    let mut got = exotic[0].elements.clone();
    got.sort();
    assert_eq!(got, want);
    within(start, Duration::from_secs(1), "d=4 n=2");
}

fn ordinary_control() {
    let start = Instant::now();
    let a = analysis(5, &[5, -1, 1]);
    let r = classify_orbits(&a, 2, 1, Ambient::Full).unwrap();
    assert_eq!((r.dims.lefschetz.clone(), r.dims.exotic.clone(), r.dims.non_tate.clone()), (u(4), u(0), u(2)));
    assert_eq!(a.kernel.as_ref().unwrap().rank, 0);
    for d in 1..=3 {
        for n in 0..=d {
            assert_eq!(dims(&a, d, n).unwrap().2, u(0), "d={d} n={n}");
        }
    }
    within(start, Duration::from_secs(10), "ordinary");
}

fn mass_conservation() {
    for entry in corpus() {
        let w = entry.weil();
        let e = EigGroup::build(&w).unwrap();
        let top = 2 * w.g() as u64;
        for d in 1..=4u32 {
            let sets = eigen_multisets(&w, &e, d);
            assert_eq!(sets.len() as u64, top * d as u64 + 1);
            for (k, m) in sets.iter().enumerate() {
                assert_eq!(mass(m), binomial(u(top * d as u64), u(k as u64)), "{} d={d} k={k}", entry.label);
            }
        }
    }
}

fn hypothesis_checker() {
    let h = hypothesis_check(&analysis(3, &[3, 0, 1]), None).unwrap();
    assert_eq!((h.m, h.verdict), (1, Verdict::AllPass));
    let h = hypothesis_check(&analysis(9, &[9, 6, 1]), None).unwrap();
    assert_eq!(h.m, 2);
    assert!(!h.m_odd);
    match h.verdict {
        Verdict::Fail(l) => assert!(l.len() == 1 && l[0].contains("is even"), "{l:?}"),
        v => panic!("expected FAIL, got {v}"),
    }
}

fn base_change_invariance() {
    let opts = Options::default();
    let mut checked = 0;
    for entry in corpus() {
        let w = entry.weil();
        let r = Analysis::new(&w, &opts).r().unwrap_or_else(|e| panic!("{}: {e}", entry.label));
        for k in 2..=6 {
            let wk = w.base_change(k, &opts).unwrap();
            let rk = Analysis::new(&wk, &opts).r().unwrap_or_else(|e| panic!("{} k={k}: {e}", entry.label));
            assert_eq!(rk, r, "{} k={k}", entry.label);
            checked += 1;
        }
    }
    assert_eq!(checked, corpus().len() * 5);
}

fn constant_signature_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5167);
    let shapes: Vec<(usize, usize)> = (1..=6).flat_map(|n| (0..=n).map(move |p| (p, n - p))).collect();
    for trial in 0..500 {
        let (plus, minus) = shapes[trial % shapes.len()];
        let n = plus + minus;
        let (p, pinv) = loop {
            let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let p = RatMatrix::from_i64_rows(&rows);
            if let Some(inv) = p.inverse() {
                break (p, inv);
            }
        };
        let mut d: Vec<BigRational> = (0..plus).map(|_| rat(rng.gen_range(1..=5), rng.gen_range(1..=4))).collect();
        d.extend((0..minus).map(|_| rat(-rng.gen_range(1..=5), rng.gen_range(1..=4))));
        let m = pinv.transpose().mul(&RatMatrix::diag(&d)).mul(&pinv);
        let lambda: Vec<BigRational> = (0..n).map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
        let u0 = p.mul(&RatMatrix::diag(&lambda)).mul(&pinv);
        let u = u0.mul(&u0).add(&RatMatrix::identity(n).scale(&rat(1, rng.gen_range(1..=50))));
        let cert = constant_signature_certify(&SymRatForm::new(m.clone()).unwrap(), &u)
            .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        let expected = Signature { plus, minus, zero: 0 };
        assert_eq!(cert.verdict, TransferVerdict::SignaturesEqual(expected), "trial {trial}");
        // independent check of the claim
        assert_eq!(signature(&m.mul(&u)), signature(&m), "trial {trial}");
    }
    within(start, Duration::from_secs(60), "500 trials");
}

fn form(rows: &[Vec<i64>]) -> SymRatForm {
    SymRatForm::from_i64_rows(rows).unwrap()
}

fn tannaka() {
    let id = form(&[vec![1, 0], vec![0, 1]]);
    let d23 = form(&[vec![2, 0], vec![0, 3]]);
    let t = tannaka_transfer(&id, &d23, &form(&[vec![1, 0], vec![0, -1]]), &form(&[vec![2, 0], vec![0, -3]])).unwrap();
    let s11 = Signature { plus: 1, minus: 1, zero: 0 };
    assert_eq!(t.certificate.verdict, TransferVerdict::SignaturesEqual(s11));
    assert_eq!(t.signatures, (s11, s11));
    let e = tannaka_transfer(&id, &d23, &id, &form(&[vec![2, 0], vec![0, 4]]));
    assert_eq!(e.unwrap_err(), Error::CharpolyMismatch);
}

fn am_filter_table() {
    let candidates: Vec<Signature> = (0..=2usize).map(|minus| Signature { plus: 2 - minus, minus, zero: 0 }).collect();
    for m in 1..=21u32 {
        let survivors: Vec<Signature> = candidates
            .iter()
            .copied()
            .filter(|c| {
                let entries: Vec<i64> = (0..m).flat_map(|_| (0..2).map(|i| if i < c.plus { 1 } else { -1 })).collect();
                signature(&RatMatrix::diag_i64(&entries)).minus.is_multiple_of(4)
            })
            .collect();
        let got = am_filter(m).unwrap();
        let expected =
            if survivors.len() == 1 { AmFilter::Unique(survivors[0]) } else { AmFilter::Inconclusive(survivors) };
        assert_eq!(got, expected, "m = {m}");
        if m % 2 == 1 {
            assert_eq!(got, AmFilter::Unique(candidates[0]), "m = {m}");
        }
        if m == 2 || m == 4 {
            assert!(matches!(got, AmFilter::Inconclusive(_)), "m = {m}");
        }
    }
}

fn predicted() {
    let a = analysis(5, &[5, -1, 1]);
    let rho = rho_table(&a, 2, RhoSource::TateDim).unwrap();
    assert_eq!(rho, vec![u(1), u(4)]);
    let p = predicted_signature(&rho, 1).unwrap();
    assert_eq!((p.s_plus, p.s_minus), (BigInt::from(3), BigInt::from(1)));
    assert!(!p.negative);
}

fn keyed(path: &Path) -> BTreeMap<String, String> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut out = BTreeMap::new();
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        if v["kind"] == "manifest" {
            continue;
        }
        let key = v["content_key"].as_str().unwrap().to_string();
        assert!(out.insert(key, line.to_string()).is_none(), "duplicate key in {}", path.display());
    }
    out
}

fn batch(input: &Path, output: &Path, jobs: usize) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_weilmot"))
        .args(["batch", "--in"])
        .arg(input)
        .arg("--out")
        .arg(output)
        .args(["--jobs", &jobs.to_string()])
        .env_remove(weilmot_core::PRECISION_ENV)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn determinism() {
    let input = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus.jsonl");
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"), dir.path().join("c.jsonl"));
    let n = corpus().len();
    assert_eq!(batch(&input, &a, 1)["new"], n.to_string());
    batch(&input, &b, 1);
    batch(&input, &c, 4);
    let ka = keyed(&a);
    assert_eq!(ka.len(), n);
    assert_eq!(ka, keyed(&b), "two runs differ");
    assert_eq!(ka, keyed(&c), "jobs 1 and jobs 4 differ");
    let again = batch(&input, &a, 4);
    assert_eq!(again["new"], "0");
    assert_eq!(again["skipped"], n.to_string());
    assert_eq!(keyed(&a), ka);
}

fn main() {
    let criteria: [(&str, fn()); 12] = [
        ("Weil validation soundness", weil_soundness),
        ("Eig freeness and rank identity", eig_identities),
        ("Worked supersingular power", supersingular_power),
        ("Ordinary control", ordinary_control),
        ("Mass conservation", mass_conservation),
        ("Hypothesis checker", hypothesis_checker),
        ("Frobenius-rank base-change invariance", base_change_invariance),
        ("Constant-signature suite", constant_signature_suite),
        ("Tannaka transfer", tannaka),
        ("am_filter truth table", am_filter_table),
        ("Predicted signature", predicted),
        ("Batch determinism", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let t = start.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({t:.2} s)", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2} FAIL  {name} ({t:.2} s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
