//! JSON fragments for every computed object.
//!
//! All numbers are written as decimal strings. Failed sub-computations are
//! written as `{"error": NAME, "message": TEXT}` and their paths collected in
//! the record's `undetermined` list.

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use weilmot_core::eig::{Analysis, EigElement, EigGroup, FrobeniusRank, InvariantsReport, RelationLattice};
use weilmot_core::exactmath::IntPoly;
use weilmot_core::lefmot::{
    classify_orbits, hypothesis_check, predicted_signature, rho_table, Ambient, Classification, DecompositionReport,
    HypothesisReport, RhoSource, Verdict,
};
use weilmot_core::quadforms::{AmFilter, Signature, TannakaTransfer, TransferCertificate, TransferVerdict};
use weilmot_core::splitfield::SplittingField;
use weilmot_core::weil::{SimplicityProbe, WeilPolynomial};
use weilmot_core::Error;

use crate::input::{InputRecord, RunOptions, TOOL_VERSION};

pub fn error_json(e: &Error) -> Value {
    json!({ "error": e.name(), "message": e.to_string() })
}

fn s<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

fn strs<T: std::fmt::Display>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(s).collect())
}

pub fn poly_json(p: &IntPoly) -> Value {
    strs(p.coeffs())
}

/// Tracks which fields of a record could not be determined. `NotSimple`
/// marks a field that does not apply and is not counted.
#[derive(Default)]
pub struct Collector {
    pub undetermined: Vec<String>,
}

impl Collector {
    pub fn field<T>(&mut self, path: &str, r: Result<T, &Error>, f: impl FnOnce(T) -> Value) -> Value {
        match r {
            Ok(v) => f(v),
            Err(e) => {
                if !matches!(e, Error::NotSimple) {
                    self.undetermined.push(format!("{path}: {}", e.name()));
                }
                error_json(e)
            }
        }
    }
}

pub fn validate_json(w: &WeilPolynomial) -> Value {
    let mc = w.multiplicity_and_center();
    json!({
        "accepted": true,
        "q": s(w.q()),
        "p": s(w.p()),
        "f": s(w.f()),
        "g": s(w.g()),
        "factors": w.irreducible_factors().iter().map(|(h, e)| json!({"poly": poly_json(h), "exponent": s(e)})).collect::<Vec<_>>(),
        "distinct_roots": s(w.num_roots()),
        "real_roots": s(w.real_roots().len()),
        "m": s(mc.m),
        "center_degree": s(mc.center_degree),
        "simple": mc.simple,
    })
}

fn probe_json(p: &SimplicityProbe) -> Value {
    match p {
        SimplicityProbe::GeometricallySimpleUpTo { bound, m_changes } => json!({
            "geometrically_simple_up_to": s(bound),
            "m_changes": m_changes.iter().map(|(k, m)| json!({"k": s(k), "m": s(m)})).collect::<Vec<_>>(),
        }),
        SimplicityProbe::SplitsAt(k) => json!({ "splits_at": s(k) }),
    }
}

fn opt_bool(b: Option<bool>) -> Value {
    b.map_or(Value::Null, Value::Bool)
}

pub fn invariants_json(r: &InvariantsReport, c: &mut Collector) -> Value {
    json!({
        "g": s(r.g),
        "m": s(r.m),
        "center_degree": s(r.center_degree),
        "simple": r.simple,
        "probe": c.field("invariants.probe", r.probe.as_ref(), probe_json),
        "eig_rank": c.field("invariants.eig_rank", r.eig_rank.as_ref(), s),
        "eig_free": c.field("invariants.eig_free", r.eig_free.as_ref(), |b| Value::Bool(*b)),
        "frobenius_rank": c.field("invariants.frobenius_rank", r.frobenius_rank.as_ref(), s),
        "kernel_rank": c.field("invariants.kernel_rank", r.kernel_rank.as_ref(), s),
        "kernel_saturation_index": c.field("invariants.kernel_saturation_index", r.kernel_saturation_index.as_ref(), s),
        "search_bound": s(r.search_bound),
        "rank_bounds_hold": opt_bool(r.rank_bounds_hold),
        "rank_identity_holds": opt_bool(r.rank_identity_holds),
        "kernel_identity_holds": opt_bool(r.kernel_identity_holds),
        "geometric_endomorphism_caveat": r.geometric_endomorphism_caveat,
    })
}

/// Human-readable form such as `4[pi_1] - [q]`.
pub fn element_text(e: &EigGroup, x: &EigElement) -> String {
    let mut out = String::new();
    for (c, label) in x.coords.iter().zip(e.labels()) {
        if *c == 0 {
            continue;
        }
        let sign = if *c < 0 { "-" } else { "+" };
        if out.is_empty() {
            if *c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(label);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

pub fn element_json(e: &EigGroup, x: &EigElement) -> Value {
    json!({ "coords": strs(&x.coords), "weight": s(x.weight), "text": element_text(e, x) })
}

fn lattice_json(k: &RelationLattice) -> Value {
    json!({
        "basis": k.basis.iter().map(|v| strs(v)).collect::<Vec<_>>(),
        "rank": s(k.rank),
        "search_bound": s(k.search_bound),
        "complete_within_bound": k.complete_within_bound,
        "saturation_index": s(&k.saturation_index),
    })
}

fn frobenius_json(f: &FrobeniusRank) -> Value {
    json!({
        "r": s(f.r),
        "rank_gamma": s(f.rank_gamma),
        "generators": f.generators,
        "torsion_basis": f.torsion_basis.iter().map(|v| strs(v)).collect::<Vec<_>>(),
    })
}

pub fn eig_json(a: &Analysis, c: &mut Collector) -> Value {
    let group = c.field("eig.group", a.eig.as_ref(), |e| {
        json!({
            "rank": s(e.rank()),
            "labels": e.labels(),
            "weights": strs(e.weights()),
            "invariant_factors": strs(e.invariant_factors()),
            "free": e.is_free(),
            "relation_matrix": e.relation_matrix().to_rows().iter().map(|r| strs(r)).collect::<Vec<_>>(),
            "q": element_json(e, &e.q()),
        })
    });
    json!({
        "group": group,
        "kernel": c.field("eig.kernel", a.kernel.as_ref(), lattice_json),
        "frobenius_rank": c.field("eig.frobenius_rank", a.frobenius.as_ref(), frobenius_json),
    })
}

pub fn galois_json(f: &SplittingField) -> Value {
    let g = f.group();
    json!({
        "degree": s(f.degree()),
        "min_poly": poly_json(f.min_poly()),
        "theta": f.theta_terms().iter().map(|(i, c)| json!({"root": s(i), "coeff": s(c)})).collect::<Vec<_>>(),
        "group_order": s(g.order()),
        "permutations": g.perms().iter().map(|p| strs(p)).collect::<Vec<_>>(),
        "root_orbits": g.root_orbits().iter().map(|o| strs(o)).collect::<Vec<_>>(),
    })
}

fn dims_json(r: &DecompositionReport) -> Value {
    json!({
        "lefschetz": s(&r.dims.lefschetz),
        "exotic": s(&r.dims.exotic),
        "non_tate": s(&r.dims.non_tate),
        "tate": s(r.dims.tate()),
        "total": s(&r.dims.total),
    })
}

/// Full decomposition, or a summary with only the exotic orbits listed.
pub fn decomposition_json(e: &EigGroup, r: &DecompositionReport, full: bool) -> Value {
    let orbits: Vec<Value> = r
        .orbits
        .iter()
        .enumerate()
        .filter(|(_, o)| full || o.classification == Classification::Exotic)
        .map(|(i, o)| {
            json!({
                "index": s(i),
                "elements": o.elements.iter().map(|x| element_json(e, x)).collect::<Vec<_>>(),
                "weight": s(o.weight),
                "classification": o.classification.to_string(),
                "orbit_size": s(o.orbit_size()),
                "multiplicity_in_ambient": s(&o.multiplicity_in_ambient),
                "dimension_in_ambient": s(o.dimension_in_ambient()),
            })
        })
        .collect();
    let mut v = json!({
        "d": s(r.d),
        "n": s(r.n),
        "ambient": r.ambient.to_string(),
        "dims": dims_json(r),
        "orbit_count": s(r.orbits.len()),
        "exotic_details": r.exotic_details.iter().map(|x| json!({"orbit_index": s(x.orbit_index), "shape_holds": opt_bool(x.shape_holds)})).collect::<Vec<_>>(),
        "warnings": r.warnings,
    });
    let key = if full { "orbits" } else { "exotic_orbits" };
    v.as_object_mut().expect("object").insert(key.into(), Value::Array(orbits));
    v
}

pub fn hypotheses_json(h: &HypothesisReport) -> Value {
    let failures = match &h.verdict {
        Verdict::Fail(l) => l.clone(),
        _ => Vec::new(),
    };
    json!({
        "m": s(h.m),
        "r": s(h.r),
        "g": s(h.g),
        "m_odd": h.m_odd,
        "rank_condition": h.rank_condition,
        "totally_real_condition": opt_bool(h.totally_real_condition),
        "prime_dimension_check": opt_bool(h.prime_dimension_check),
        "verdict": match h.verdict { Verdict::Fail(_) => "FAIL".to_string(), ref v => v.to_string() },
        "failures": failures,
    })
}

/// Decompositions for `d <= power`, every codimension, summary form.
pub fn decompositions_json(a: &Analysis, power: u32, c: &mut Collector) -> Value {
    let Ok(e) = a.eig() else {
        return Value::Array(Vec::new());
    };
    let g = a.weil.g() as u32;
    let mut out = Vec::new();
    for d in 1..=power {
        for n in 0..=g * d {
            let r = classify_orbits(a, d, n, Ambient::Full);
            out.push(c.field(&format!("decompositions.d{d}.n{n}"), r.as_ref(), |r| decomposition_json(e, r, false)));
        }
    }
    Value::Array(out)
}

pub fn predicted_signatures_json(a: &Analysis, power: u32, c: &mut Collector) -> Value {
    let g = a.weil.g();
    let mut out = Vec::new();
    for d in 1..=power {
        if !(g * d as usize).is_multiple_of(2) {
            continue;
        }
        for source in [RhoSource::TateDim, RhoSource::LefschetzDim] {
            let r = rho_table(a, d, source).and_then(|rho| {
                let p = predicted_signature(&rho, g * d as usize / 2)?;
                Ok((rho, p))
            });
            let v = c.field(&format!("predicted_signatures.d{d}.{source}"), r.as_ref(), |(rho, p)| {
                json!({
                    "rho": strs::<BigUint>(rho),
                    "s_plus": s(&p.s_plus),
                    "s_minus": s(&p.s_minus),
                    "negative": p.negative,
                })
            });
            let mut m = Map::new();
            m.insert("d".into(), s(d));
            m.insert("rho_source".into(), s(source));
            m.insert("prediction".into(), v);
            out.push(Value::Object(m));
        }
    }
    Value::Array(out)
}

/// The complete per-record report used by `batch`.
pub fn build_report(rec: &InputRecord, opts: &RunOptions) -> Value {
    let key = rec.content_key(opts);
    let mut head = json!({
        "kind": "report",
        "content_key": key,
        "input": rec.to_json(),
        "version": TOOL_VERSION,
        "options": opts.to_json(),
    });
    let obj = head.as_object_mut().expect("object");
    let w = match WeilPolynomial::validate(&rec.q, &rec.coeffs, &opts.core) {
        Ok(w) => w,
        Err(e) => {
            obj.insert("status".into(), s("rejected"));
            obj.insert("validate".into(), json!({ "accepted": false, "error": e.name(), "message": e.to_string() }));
            for k in ["invariants", "eig", "galois", "hypotheses"] {
                obj.insert(k.into(), Value::Null);
            }
            obj.insert("decompositions".into(), Value::Array(Vec::new()));
            obj.insert("predicted_signatures".into(), Value::Array(Vec::new()));
            obj.insert("undetermined".into(), Value::Array(Vec::new()));
            return head;
        }
    };
    let a = Analysis::new(&w, &opts.core);
    let mut c = Collector::default();
    obj.insert("status".into(), s("ok"));
    obj.insert("validate".into(), validate_json(&w));
    obj.insert("invariants".into(), invariants_json(&a.invariants_report(&opts.core), &mut c));
    obj.insert("eig".into(), eig_json(&a, &mut c));
    obj.insert("galois".into(), c.field("galois", a.field().as_ref().map(|f| *f), galois_json));
    let power = opts.report_power.min(opts.core.max_power);
    obj.insert("decompositions".into(), decompositions_json(&a, power, &mut c));
    let h = hypothesis_check(&a, rec.cm_assertion);
    obj.insert("hypotheses".into(), c.field("hypotheses", h.as_ref(), hypotheses_json));
    obj.insert("predicted_signatures".into(), predicted_signatures_json(&a, power, &mut c));
    obj.insert("undetermined".into(), json!(c.undetermined));
    head
}

pub fn signature_json(sig: &Signature) -> Value {
    json!({ "plus": s(sig.plus), "minus": s(sig.minus), "zero": s(sig.zero), "text": sig.to_string() })
}

pub fn certificate_json(cert: &TransferCertificate) -> Value {
    let verdict = match &cert.verdict {
        TransferVerdict::SignaturesEqual(sig) => json!({ "kind": "SignaturesEqual", "signature": signature_json(sig) }),
        TransferVerdict::Inconclusive(why) => json!({ "kind": "Inconclusive", "reason": why }),
    };
    json!({
        "u_charpoly": poly_json(&cert.u_charpoly),
        "sturm": {
            "real_roots": s(cert.roots.real),
            "positive_roots": s(cert.roots.positive),
            "all_real_and_positive": cert.roots.all_real_and_positive,
        },
        "self_adjoint": cert.self_adjoint,
        "signature_eta": signature_json(&cert.signature_eta),
        "signature_eta_u": signature_json(&cert.signature_eta_u),
        "verdict": verdict,
    })
}

pub fn transfer_json(t: &TannakaTransfer) -> Value {
    json!({
        "u_charpoly": poly_json(&t.u_charpoly),
        "certificate": certificate_json(&t.certificate),
        "signatures": [signature_json(&t.signatures.0), signature_json(&t.signatures.1)],
        "assumed_premise": "rank of the motive equals the dimension of its realization",
    })
}

pub fn am_filter_json(m: u32, f: &AmFilter) -> Value {
    match f {
        AmFilter::Unique(sig) => json!({ "m": s(m), "result": "Unique", "signature": signature_json(sig) }),
        AmFilter::Inconclusive(c) => json!({
            "m": s(m),
            "result": "Inconclusive",
            "candidates": c.iter().map(signature_json).collect::<Vec<_>>(),
        }),
    }
}
