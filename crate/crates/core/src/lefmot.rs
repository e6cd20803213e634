//! Eigenvalue multisets of `h^k(A^d)`, Galois orbits of enriched eigenvalues
//! and the Lefschetz / exotic / non-Tate split of weight `2n` classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::eig::{realizes_q_power, Analysis, EigElement, EigGroup};
use crate::weil::WeilPolynomial;
use crate::Error;

/// Eigenvalue multiset keyed by basis coordinates.
pub type Multiset = BTreeMap<EigElement, BigUint>;

/// Which part of `h^{2n}(A^d)` is decomposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    Full,
    Primitive,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::Full => "full",
            Ambient::Primitive => "primitive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    TateTrivial,
    Exotic,
    NonTate,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::TateTrivial => "TATE_TRIVIAL",
            Classification::Exotic => "EXOTIC",
            Classification::NonTate => "NON_TATE",
        })
    }
}

/// One Galois orbit of enriched eigenvalues of weight `2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotiveOrbit {
    /// Sorted orbit elements.
    pub elements: Vec<EigElement>,
    pub weight: i64,
    pub classification: Classification,
    pub multiplicity_in_ambient: BigUint,
}

impl MotiveOrbit {
    pub fn orbit_size(&self) -> usize {
        self.elements.len()
    }

    pub fn dimension_in_ambient(&self) -> BigUint {
        &self.multiplicity_in_ambient * BigUint::from(self.elements.len())
    }
}

/// Shape test for an exotic orbit: two elements `i[q] + j*mu` and
/// `(i + j g/m)[q] - j*mu`, with `mu` the sum of the pair representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExoticDetail {
    pub orbit_index: usize,
    /// `None` when the structural hypotheses fail and the shape is not enforced.
    pub shape_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dims {
    pub lefschetz: BigUint,
    pub exotic: BigUint,
    pub non_tate: BigUint,
    pub total: BigUint,
}

impl Dims {
    pub fn tate(&self) -> BigUint {
        &self.lefschetz + &self.exotic
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub d: u32,
    pub n: u32,
    pub ambient: Ambient,
    pub orbits: Vec<MotiveOrbit>,
    pub dims: Dims,
    pub exotic_details: Vec<ExoticDetail>,
    pub warnings: Vec<String>,
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    binomial(BigUint::from(n), BigUint::from(k))
}

/// Coefficient of `t^k` in `prod_i (1 + [pi_i] t)^d` over all roots with
/// multiplicity, expressed in the group algebra of Eig.
pub fn eigen_multiset(w: &WeilPolynomial, e: &EigGroup, d: u32, k: usize) -> Multiset {
    expand(w, e, d, k).pop().unwrap_or_default()
}

/// [`eigen_multiset`] for every degree `0..=2gd`.
pub fn eigen_multisets(w: &WeilPolynomial, e: &EigGroup, d: u32) -> Vec<Multiset> {
    expand(w, e, d, 2 * w.g() * d as usize)
}

fn expand(w: &WeilPolynomial, e: &EigGroup, d: u32, k: usize) -> Vec<Multiset> {
    let mults = w.root_multiplicities();
    // states[j] maps an element of degree j to its multiplicity
    let mut states: Vec<BTreeMap<Vec<i64>, BigUint>> = vec![BTreeMap::new(); k + 1];
    states[0].insert(vec![0; e.rank()], BigUint::one());
    for (i, &m) in mults.iter().enumerate() {
        let top = (m * d) as usize;
        let row: Vec<BigUint> = (0..=top).map(|a| binom(top as u64, a as u64)).collect();
        let sym = e.symbol(i);
        let mut next: Vec<BTreeMap<Vec<i64>, BigUint>> = vec![BTreeMap::new(); k + 1];
        for (deg, map) in states.iter().enumerate() {
            for (coords, mult) in map {
                for a in 0..=top.min(k - deg) {
                    let c: Vec<i64> = coords.iter().zip(&sym.coords).map(|(x, s)| x + a as i64 * s).collect();
                    *next[deg + a].entry(c).or_insert_with(BigUint::zero) += mult * &row[a];
                }
            }
        }
        states = next;
    }
    states.into_iter().map(|map| map.into_iter().map(|(c, m)| (e.element(c), m)).collect()).collect()
}

/// Total mass of a multiset.
pub fn mass(m: &Multiset) -> BigUint {
    m.values().sum()
}

/// Primitive part of weight `2n`: `mult_{2n}(x) - mult_{2n-2}(x - [q])`.
/// Empty above the middle degree `gd`.
pub fn primitive_multiset(w: &WeilPolynomial, e: &EigGroup, d: u32, n: u32) -> Result<Multiset, Error> {
    let mid = w.g() * d as usize;
    let k = 2 * n as usize;
    if k > mid {
        return Ok(Multiset::new());
    }
    let full = eigen_multiset(w, e, d, k);
    if n == 0 {
        return Ok(full);
    }
    let lower = eigen_multiset(w, e, d, k - 2);
    let mut out = Multiset::new();
    for (x, m) in full {
        let shifted = e.sub(&x, &e.q());
        let sub = lower.get(&shifted).cloned().unwrap_or_default();
        if sub > m {
            return Err(Error::InternalInconsistency(format!("negative primitive multiplicity at {:?}", x.coords)));
        }
        let p = m - sub;
        if !p.is_zero() {
            out.insert(x, p);
        }
    }
    Ok(out)
}

/// Dimension of the primitive part from binomials alone.
pub fn primitive_dimension(g: usize, d: u32, n: u32) -> BigUint {
    let top = (2 * g * d as usize) as u64;
    let k = 2 * n as u64;
    if k > top / 2 {
        return BigUint::zero();
    }
    if n == 0 {
        return BigUint::one();
    }
    binom(top, k) - binom(top, k - 2)
}

fn orbits_of(a: &Analysis, multiset: &Multiset) -> Result<Vec<(Vec<EigElement>, BigUint)>, Error> {
    let s = a.field()?;
    let e = a.eig()?;
    let mut seen: BTreeSet<&EigElement> = BTreeSet::new();
    let mut out = Vec::new();
    for (x, m) in multiset {
        if seen.contains(x) {
            continue;
        }
        let orbit: BTreeSet<EigElement> = s.group().perms().iter().map(|sg| e.galois_action(sg, x)).collect();
        for y in &orbit {
            match multiset.get_key_value(y) {
                Some((key, my)) if my == m => {
                    seen.insert(key);
                }
                _ => {
                    return Err(Error::InternalInconsistency(format!(
                        "orbit of {:?} leaves the multiset or changes multiplicity",
                        x.coords
                    )))
                }
            }
        }
        out.push((orbit.into_iter().collect(), m.clone()));
    }
    Ok(out)
}

fn exotic_shape(e: &EigGroup, orbit: &[EigElement], n: u32) -> bool {
    if orbit.len() != 2 {
        return false;
    }
    let sum = e.add(&orbit[0], &orbit[1]);
    if sum != e.scale(&e.q(), 2 * n as i64) || e.real_generator().is_some() {
        return false;
    }
    let reps = e.representatives().len();
    let j = orbit[0].coords[0];
    j != 0 && orbit[0].coords[..reps].iter().all(|&c| c == j)
}

/// Splits the weight `2n` part of `h^{2n}(A^d)` into Galois orbits and
/// classifies each one.
pub fn classify_orbits(a: &Analysis, d: u32, n: u32, ambient: Ambient) -> Result<DecompositionReport, Error> {
    let e = a.eig()?;
    let w = &a.weil;
    if 2 * n as usize > 2 * w.g() * d as usize {
        return Err(Error::Malformed(format!("codimension {n} exceeds dimension {}", w.g() * d as usize)));
    }
    let multiset = match ambient {
        Ambient::Full => eigen_multiset(w, e, d, 2 * n as usize),
        Ambient::Primitive => primitive_multiset(w, e, d, n)?,
    };
    let s = a.field()?;
    let hypotheses = hypothesis_check(a, None).map(|h| h.verdict == Verdict::AllPass).unwrap_or(false);
    let tate_point = e.scale(&e.q(), n as i64);
    let mut orbits = Vec::new();
    for (elements, mult) in orbits_of(a, &multiset)? {
        let classification = if elements.len() == 1 && elements[0] == tate_point {
            Classification::TateTrivial
        } else if realizes_q_power(s, e, &elements[0], n as i64)? {
            Classification::Exotic
        } else {
            Classification::NonTate
        };
        orbits.push(MotiveOrbit {
            weight: 2 * n as i64,
            elements,
            classification,
            multiplicity_in_ambient: mult,
        });
    }
    let mut dims =
        Dims { lefschetz: BigUint::zero(), exotic: BigUint::zero(), non_tate: BigUint::zero(), total: BigUint::zero() };
    let mut exotic_details = Vec::new();
    let mut warnings = Vec::new();
    for (i, o) in orbits.iter().enumerate() {
        let dim = o.dimension_in_ambient();
        dims.total += &dim;
        match o.classification {
            Classification::TateTrivial => dims.lefschetz += dim,
            Classification::NonTate => dims.non_tate += dim,
            Classification::Exotic => {
                dims.exotic += dim;
                let shape = exotic_shape(e, &o.elements, n);
                if hypotheses && !shape {
                    warnings.push(format!("exotic orbit {i} does not have the expected rank-2 shape"));
                }
                exotic_details.push(ExoticDetail { orbit_index: i, shape_holds: hypotheses.then_some(shape) });
            }
        }
    }
    if dims.total != mass(&multiset) {
        return Err(Error::InternalInconsistency("orbit dimensions do not add up".into()));
    }
    Ok(DecompositionReport { d, n, ambient, orbits, dims, exotic_details, warnings })
}

/// `(lefschetz_dim, tate_dim, exotic_dim)` of the full weight `2n` part.
pub fn dims(a: &Analysis, d: u32, n: u32) -> Result<(BigUint, BigUint, BigUint), Error> {
    let r = classify_orbits(a, d, n, Ambient::Full)?;
    Ok((r.dims.lefschetz.clone(), r.dims.tate(), r.dims.exotic))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    AllPass,
    Fail(Vec<String>),
    PassConditionalOnCm,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::AllPass => f.write_str("ALL_PASS"),
            Verdict::PassConditionalOnCm => f.write_str("PASS_CONDITIONAL_ON_CM"),
            Verdict::Fail(list) => write!(f, "FAIL({})", list.join("; ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub m: u32,
    pub r: i64,
    pub g: usize,
    pub m_odd: bool,
    /// `r >= g/m - 1`.
    pub rank_condition: bool,
    /// `Some(true)` automatically when `m = 1`, else the caller's assertion.
    pub totally_real_condition: Option<bool>,
    /// For prime `g`: does `r >= g - 1` hold and is `m = 1`?
    pub prime_dimension_check: Option<bool>,
    pub verdict: Verdict,
}

fn is_prime_small(n: usize) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// Checks the three structural hypotheses for simple `A`.
pub fn hypothesis_check(a: &Analysis, cm_assertion: Option<bool>) -> Result<HypothesisReport, Error> {
    let w = &a.weil;
    let mc = w.multiplicity_and_center();
    if !mc.simple {
        return Err(Error::NotSimple);
    }
    let r = a.r()?;
    let g = w.g();
    let m = mc.m;
    let m_odd = m % 2 == 1;
    // r >= g/m - 1  <=>  (r + 1) m >= g
    let rank_condition = (r + 1) * m as i64 >= g as i64;
    let totally_real_condition = if m == 1 { Some(true) } else { cm_assertion };
    let prime_dimension_check = is_prime_small(g).then(|| r >= g as i64 - 1 && m == 1);
    let mut failures = Vec::new();
    if !m_odd {
        failures.push(format!("condition 1: m = {m} is even"));
    }
    if !rank_condition {
        failures.push(format!("condition 2: r = {r} < g/m - 1"));
    }
    if totally_real_condition == Some(false) {
        failures.push("condition 3: no totally real field asserted".into());
    }
    let verdict = if !failures.is_empty() {
        Verdict::Fail(failures)
    } else if totally_real_condition.is_none() {
        Verdict::PassConditionalOnCm
    } else {
        Verdict::AllPass
    };
    Ok(HypothesisReport { m, r, g, m_odd, rank_condition, totally_real_condition, prime_dimension_check, verdict })
}

/// Which dimension is used for the number of algebraic classes in degree `2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RhoSource {
    TateDim,
    LefschetzDim,
}

impl fmt::Display for RhoSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RhoSource::TateDim => "tate_dim",
            RhoSource::LefschetzDim => "lefschetz_dim",
        })
    }
}

/// `rho_0, ..., rho_h` for `X = A^d` with `h = gd/2`.
pub fn rho_table(a: &Analysis, d: u32, source: RhoSource) -> Result<Vec<BigUint>, Error> {
    let dim = a.weil.g() * d as usize;
    if !dim.is_multiple_of(2) {
        return Err(Error::Malformed(format!("dimension {dim} of A^{d} is odd")));
    }
    (0..=dim as u32 / 2)
        .map(|n| {
            let (l, t, _) = dims(a, d, n)?;
            Ok(match source {
                RhoSource::TateDim => t,
                RhoSource::LefschetzDim => l,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictedSignature {
    pub s_plus: BigInt,
    pub s_minus: BigInt,
    /// Set when either entry is negative.
    pub negative: bool,
}

/// `s_+ = rho_h - rho_{h-1} + rho_{h-2} - ...` and `s_- = rho_h - s_+`.
pub fn predicted_signature(rho: &[BigUint], half_dim: usize) -> Result<PredictedSignature, Error> {
    if rho.len() <= half_dim {
        return Err(Error::Malformed(format!("need rho_0..rho_{half_dim}, got {} values", rho.len())));
    }
    let mut s_plus = BigInt::zero();
    for (i, r) in rho[..=half_dim].iter().rev().enumerate() {
        let r = BigInt::from(r.clone());
        if i % 2 == 0 {
            s_plus += r;
        } else {
            s_plus -= r;
        }
    }
    let s_minus = BigInt::from(rho[half_dim].clone()) - &s_plus;
    let negative = s_plus < BigInt::zero() || s_minus < BigInt::zero();
    Ok(PredictedSignature { s_plus, s_minus, negative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Options;

    fn analysis(q: i64, c: &[i64]) -> Analysis {
        Analysis::new(&WeilPolynomial::from_i64(q, c).unwrap(), &Options::default())
    }

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn multisets() {
        let a = analysis(5, &[5, -1, 1]);
        let e = a.eig().unwrap();
        let m = eigen_multiset(&a.weil, e, 2, 2);
        let got: Vec<(Vec<i64>, BigUint)> = m.iter().map(|(k, v)| (k.coords.clone(), v.clone())).collect();
        assert_eq!(got, vec![(vec![-2, 2], u(1)), (vec![0, 1], u(4)), (vec![2, 0], u(1))]);
        assert_eq!(eigen_multiset(&a.weil, e, 1, 0).into_values().collect::<Vec<_>>(), vec![u(1)]);
        let p = primitive_multiset(&a.weil, e, 2, 1).unwrap();
        assert_eq!(p[&e.q()], u(3));
        assert_eq!(mass(&p), u(5));

        let a = analysis(3, &[3, 0, 1]);
        let e = a.eig().unwrap();
        let m = eigen_multiset(&a.weil, e, 4, 4);
        assert_eq!(mass(&m), u(70));
        let mut mults: Vec<BigUint> = m.values().cloned().collect();
        mults.sort();
        assert_eq!(mults, vec![u(1), u(1), u(16), u(16), u(36)]);
        let p = primitive_multiset(&a.weil, e, 4, 2).unwrap();
        assert_eq!(p[&e.element(vec![4, 0])], u(1));
        assert_eq!(mass(&p), primitive_dimension(1, 4, 2));
    }

    #[test]
    fn supersingular_power() {
        let a = analysis(3, &[3, 0, 1]);
        let r = classify_orbits(&a, 4, 2, Ambient::Full).unwrap();
        assert_eq!((r.dims.lefschetz.clone(), r.dims.exotic.clone(), r.dims.non_tate.clone()), (u(36), u(2), u(32)));
        let ex: Vec<&MotiveOrbit> = r.orbits.iter().filter(|o| o.classification == Classification::Exotic).collect();
        assert_eq!(ex.len(), 1);
        let coords: Vec<Vec<i64>> = ex[0].elements.iter().map(|x| x.coords.clone()).collect();
        assert_eq!(coords, vec![vec![-4, 4], vec![4, 0]]);
        assert_eq!(r.exotic_details[0].shape_holds, Some(true));
        assert!(r.warnings.is_empty());
        assert_eq!(dims(&a, 4, 2).unwrap(), (u(36), u(38), u(2)));
        assert_eq!(dims(&a, 2, 1).unwrap(), (u(4), u(4), u(0)));
    }

    #[test]
    fn ordinary_curve() {
        let a = analysis(5, &[5, -1, 1]);
        let r = classify_orbits(&a, 2, 1, Ambient::Full).unwrap();
        assert_eq!((r.dims.lefschetz.clone(), r.dims.exotic.clone(), r.dims.non_tate.clone()), (u(4), u(0), u(2)));
        assert_eq!(dims(&a, 2, 1).unwrap(), (u(4), u(4), u(0)));
        let r = classify_orbits(&a, 1, 0, Ambient::Full).unwrap();
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.orbits[0].classification, Classification::TateTrivial);
    }

    #[test]
    fn hypotheses() {
        let h = hypothesis_check(&analysis(3, &[3, 0, 1]), None).unwrap();
        assert_eq!((h.m, h.verdict.clone()), (1, Verdict::AllPass));
        let h = hypothesis_check(&analysis(9, &[9, 6, 1]), None).unwrap();
        match h.verdict {
            Verdict::Fail(list) => assert!(list.len() == 1 && list[0].starts_with("condition 1")),
            v => panic!("unexpected verdict {v}"),
        }
        let a = analysis(5, &[25, -5, 10, -1, 1]);
        assert!(!a.weil.is_simple());
        assert_eq!(hypothesis_check(&a, None), Err(Error::NotSimple));
    }

    #[test]
    fn signatures() {
        let p = predicted_signature(&[u(1), u(4)], 1).unwrap();
        assert_eq!((p.s_plus, p.s_minus, p.negative), (BigInt::from(3), BigInt::from(1), false));
        let p = predicted_signature(&[u(1)], 0).unwrap();
        assert_eq!((p.s_plus, p.s_minus), (BigInt::from(1), BigInt::from(0)));
        let p = predicted_signature(&[u(1), u(4), u(2)], 2).unwrap();
        assert_eq!(p.s_plus, BigInt::from(-1));
        assert!(p.negative);
        let a = analysis(5, &[5, -1, 1]);
        assert_eq!(rho_table(&a, 2, RhoSource::TateDim).unwrap(), vec![u(1), u(4)]);
    }
}
