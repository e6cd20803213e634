//! Single-record and matrix commands. Each returns the JSON fragment to print.

use serde_json::{json, Value};

use weilmot_core::eig::Analysis;
use weilmot_core::lefmot::{classify_orbits, hypothesis_check, Ambient};
use weilmot_core::quadforms::{am_filter, constant_signature_certify, signature, tannaka_transfer, SymRatForm};
use weilmot_core::weil::WeilPolynomial;

use crate::input::{InputRecord, RunOptions, TOOL_VERSION};
use crate::matrix::parse_matrices;
use crate::report::{self, Collector};
use crate::CliError;

/// A validated record together with its effective options.
pub struct Prepared {
    pub record: InputRecord,
    pub opts: RunOptions,
    pub weil: WeilPolynomial,
}

pub fn prepare(record: InputRecord, global: &RunOptions) -> Result<Prepared, CliError> {
    let opts = global.with_overrides(&record.options)?;
    let weil = WeilPolynomial::validate(&record.q, &record.coeffs, &opts.core)?;
    Ok(Prepared { record, opts, weil })
}

fn envelope(p: &Prepared, command: &str, body: Value, c: Collector) -> Value {
    json!({
        "kind": command,
        "content_key": p.record.content_key(&p.opts),
        "input": p.record.to_json(),
        "version": TOOL_VERSION,
        "options": p.opts.to_json(),
        "result": body,
        "undetermined": c.undetermined,
    })
}

pub fn validate(record: InputRecord, global: &RunOptions) -> Result<Value, CliError> {
    let p = prepare(record, global)?;
    Ok(envelope(&p, "validate", report::validate_json(&p.weil), Collector::default()))
}

pub fn invariants(record: InputRecord, global: &RunOptions) -> Result<Value, CliError> {
    let p = prepare(record, global)?;
    let a = Analysis::new(&p.weil, &p.opts.core);
    let mut c = Collector::default();
    let body = report::invariants_json(&a.invariants_report(&p.opts.core), &mut c);
    Ok(envelope(&p, "invariants", body, c))
}

pub fn eig(record: InputRecord, global: &RunOptions) -> Result<Value, CliError> {
    let p = prepare(record, global)?;
    let a = Analysis::new(&p.weil, &p.opts.core);
    a.eig()?;
    let mut c = Collector::default();
    let body = report::eig_json(&a, &mut c);
    Ok(envelope(&p, "eig", body, c))
}

pub fn galois(record: InputRecord, global: &RunOptions) -> Result<Value, CliError> {
    let p = prepare(record, global)?;
    let a = Analysis::new(&p.weil, &p.opts.core);
    let body = report::galois_json(a.field()?);
    Ok(envelope(&p, "galois", body, Collector::default()))
}

pub fn motives(record: InputRecord, global: &RunOptions, d: u32, n: u32, primitive: bool) -> Result<Value, CliError> {
    let p = prepare(record, global)?;
    if d == 0 || d > p.opts.core.max_power {
        return Err(CliError::Malformed(format!("power {d} outside 1..={}", p.opts.core.max_power)));
    }
    let gd = p.weil.g() as u32 * d;
    if n > gd {
        return Err(CliError::Malformed(format!("codimension {n} exceeds g*d = {gd}")));
    }
    let a = Analysis::new(&p.weil, &p.opts.core);
    let e = a.eig()?;
    let ambient = if primitive { Ambient::Primitive } else { Ambient::Full };
    let r = classify_orbits(&a, d, n, ambient)?;
    Ok(envelope(&p, "motives", report::decomposition_json(e, &r, true), Collector::default()))
}

pub fn decompose(record: InputRecord, global: &RunOptions, power: Option<u32>) -> Result<Value, CliError> {
    let p = prepare(record, global)?;
    let power = power.unwrap_or(p.opts.report_power);
    if power == 0 || power > p.opts.core.max_power {
        return Err(CliError::Malformed(format!("power {power} outside 1..={}", p.opts.core.max_power)));
    }
    let a = Analysis::new(&p.weil, &p.opts.core);
    a.eig()?;
    let mut c = Collector::default();
    let body = json!({
        "decompositions": report::decompositions_json(&a, power, &mut c),
        "predicted_signatures": report::predicted_signatures_json(&a, power, &mut c),
    });
    Ok(envelope(&p, "decompose", body, c))
}

pub fn check_hypotheses(record: InputRecord, global: &RunOptions, assert_cm: Option<bool>) -> Result<Value, CliError> {
    let cm = assert_cm.or(record.cm_assertion);
    let p = prepare(record, global)?;
    let a = Analysis::new(&p.weil, &p.opts.core);
    let h = hypothesis_check(&a, cm)?;
    Ok(envelope(&p, "check-hypotheses", report::hypotheses_json(&h), Collector::default()))
}

fn forms(text: &str, want: usize) -> Result<Vec<SymRatForm>, CliError> {
    let ms = parse_matrices(text)?;
    if ms.len() != want {
        return Err(CliError::Malformed(format!("expected {want} matrices, found {}", ms.len())));
    }
    ms.into_iter().map(|m| SymRatForm::new(m).map_err(CliError::from)).collect()
}

/// Signature of every matrix in the file.
pub fn signature_of(text: &str) -> Result<Value, CliError> {
    let ms = parse_matrices(text)?;
    if ms.is_empty() {
        return Err(CliError::Malformed("no matrices given".into()));
    }
    let mut out = Vec::new();
    for m in &ms {
        if !m.is_symmetric() {
            return Err(CliError::Malformed("matrix is not symmetric".into()));
        }
        out.push(report::signature_json(&signature(m)));
    }
    Ok(json!({ "kind": "signature", "version": TOOL_VERSION, "signatures": out }))
}

/// Four forms in the order eta, eta2 under the first functor, then under the second.
pub fn transfer(text: &str) -> Result<Value, CliError> {
    let f = forms(text, 4)?;
    let t = tannaka_transfer(&f[0], &f[1], &f[2], &f[3])?;
    Ok(json!({ "kind": "transfer", "version": TOOL_VERSION, "transfer": report::transfer_json(&t) }))
}

/// A form followed by an operator.
pub fn certify(text: &str) -> Result<Value, CliError> {
    let ms = parse_matrices(text)?;
    if ms.len() != 2 {
        return Err(CliError::Malformed(format!("expected 2 matrices, found {}", ms.len())));
    }
    let eta = SymRatForm::new(ms[0].clone())?;
    let cert = constant_signature_certify(&eta, &ms[1])?;
    Ok(json!({ "kind": "certify", "version": TOOL_VERSION, "certificate": report::certificate_json(&cert) }))
}

pub fn am_filter_cmd(m: u32) -> Result<Value, CliError> {
    let f = am_filter(m)?;
    Ok(json!({ "kind": "am-filter", "version": TOOL_VERSION, "am_filter": report::am_filter_json(m, &f) }))
}
