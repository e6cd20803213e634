//! Exact quadratic forms over the rationals: signatures, characteristic
//! polynomials, Sturm counts and signature transfer certificates.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exactmath::sturm::{real_root_counts, RootCounts};
use crate::exactmath::{IntPoly, QPoly, RatMatrix};
use crate::Error;

/// A symmetric bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymRatForm {
    gram: RatMatrix,
}

/// `(s_plus, s_minus, s_zero)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.plus, self.minus, self.zero)
    }
}

impl SymRatForm {
    pub fn new(gram: RatMatrix) -> Result<Self, Error> {
        if !gram.is_square() || !gram.is_symmetric() {
            return Err(Error::Malformed("Gram matrix must be square and symmetric".into()));
        }
        Ok(SymRatForm { gram })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, Error> {
        Self::new(RatMatrix::from_i64_rows(rows))
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn signature(&self) -> Signature {
        signature(&self.gram)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.signature().zero == 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature().plus == self.dim()
    }
}

/// Schur complement of the leading `k x k` block (assumed invertible).
fn eliminate(a: &[Vec<BigRational>], k: usize) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let block = RatMatrix::from_rows((0..k).map(|i| a[i][..k].to_vec()).collect());
    let binv = block.inverse().expect("pivot block is invertible");
    let mut out = vec![vec![BigRational::zero(); n - k]; n - k];
    for i in k..n {
        for j in k..n {
            let mut v = a[i][j].clone();
            for s in 0..k {
                for t in 0..k {
                    if !a[i][s].is_zero() && !a[t][j].is_zero() {
                        v -= &a[i][s] * &binv[(s, t)] * &a[t][j];
                    }
                }
            }
            out[i - k][j - k] = v;
        }
    }
    out
}

fn swap_to_front(a: &mut [Vec<BigRational>], order: &[usize]) {
    // symmetric permutation bringing the listed indices to the front
    let n = a.len();
    let mut perm: Vec<usize> = order.to_vec();
    perm.extend((0..n).filter(|i| !order.contains(i)));
    let old = a.to_vec();
    for i in 0..n {
        for j in 0..n {
            a[i][j] = old[perm[i]][perm[j]].clone();
        }
    }
}

/// Exact signature by symmetric elimination. A nonzero diagonal entry is a
/// 1x1 pivot; otherwise a nonzero off-diagonal entry with zero diagonal gives
/// a hyperbolic 2x2 pivot contributing `(1, 1)`.
pub fn signature(gram: &RatMatrix) -> Signature {
    let mut a = gram.to_rows();
    let mut sig = Signature { plus: 0, minus: 0, zero: 0 };
    while !a.is_empty() {
        let n = a.len();
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            if a[i][i].is_positive() {
                sig.plus += 1;
            } else {
                sig.minus += 1;
            }
            swap_to_front(&mut a, &[i]);
            a = eliminate(&a, 1);
        } else if let Some((i, j)) =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
        {
            sig.plus += 1;
            sig.minus += 1;
            swap_to_front(&mut a, &[i, j]);
            a = eliminate(&a, 2);
        } else {
            sig.zero += n;
            break;
        }
    }
    sig
}

/// Characteristic polynomial `det(X - u)`.
pub fn charpoly(u: &RatMatrix) -> Result<QPoly, Error> {
    if !u.is_square() {
        return Err(Error::Malformed("matrix is not square".into()));
    }
    Ok(u.charpoly())
}

/// Sturm counts with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRoots {
    pub real: usize,
    pub positive: usize,
    pub all_real_and_positive: bool,
}

pub fn sturm_positive_roots(p: &QPoly) -> PositiveRoots {
    let RootCounts { degree, real, positive } = real_root_counts(p);
    PositiveRoots { real, positive, all_real_and_positive: positive == degree }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransferVerdict {
    SignaturesEqual(Signature),
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferCertificate {
    /// `charpoly(u)` with denominators cleared.
    pub u_charpoly: IntPoly,
    pub roots: PositiveRoots,
    pub self_adjoint: bool,
    pub signature_eta: Signature,
    pub signature_eta_u: Signature,
    pub verdict: TransferVerdict,
}

/// Certifies `signature(eta) = signature(eta u)` for `u` self-adjoint with
/// respect to `eta` and with positive spectrum.
pub fn constant_signature_certify(eta: &SymRatForm, u: &RatMatrix) -> Result<TransferCertificate, Error> {
    if u.rows() != eta.dim() || !u.is_square() {
        return Err(Error::Malformed("operator and form dimensions differ".into()));
    }
    let signature_eta = eta.signature();
    if signature_eta.zero != 0 {
        return Err(Error::NondegeneracyFailed);
    }
    let eta_u = eta.gram().mul(u);
    if !eta_u.is_symmetric() {
        return Err(Error::NotSelfAdjoint);
    }
    let cp = u.charpoly();
    let roots = sturm_positive_roots(&cp);
    if !roots.all_real_and_positive {
        return Err(Error::NotPositiveSpectrum);
    }
    let signature_eta_u = signature(&eta_u);
    let verdict = if signature_eta_u == signature_eta {
        TransferVerdict::SignaturesEqual(signature_eta)
    } else {
        TransferVerdict::Inconclusive(format!("direct signatures differ: {signature_eta} vs {signature_eta_u}"))
    };
    Ok(TransferCertificate {
        u_charpoly: cp.to_primitive_int(),
        roots,
        self_adjoint: true,
        signature_eta,
        signature_eta_u,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannakaTransfer {
    pub u_charpoly: IntPoly,
    pub certificate: TransferCertificate,
    /// Signatures of the two forms on the second side.
    pub signatures: (Signature, Signature),
}

/// Two forms positive definite on one side, related by `u = eta^{-1} eta2`,
/// have equal signatures on the other side once the characteristic
/// polynomials of the two intertwiners agree.
pub fn tannaka_transfer(
    omega_eta: &SymRatForm,
    omega_eta2: &SymRatForm,
    omega2_eta: &SymRatForm,
    omega2_eta2: &SymRatForm,
) -> Result<TannakaTransfer, Error> {
    if !omega_eta.is_positive_definite() || !omega_eta2.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if !omega2_eta.is_nondegenerate() || !omega2_eta2.is_nondegenerate() {
        return Err(Error::NondegeneracyFailed);
    }
    if omega_eta.dim() != omega2_eta.dim() || omega_eta.dim() != omega_eta2.dim() || omega2_eta.dim() != omega2_eta2.dim()
    {
        return Err(Error::Malformed("forms have different dimensions".into()));
    }
    let inv = omega_eta.gram().inverse().ok_or(Error::NotPositiveDefinite)?;
    let u = inv.mul(omega_eta2.gram());
    let inv2 = omega2_eta.gram().inverse().ok_or(Error::NondegeneracyFailed)?;
    let u2 = inv2.mul(omega2_eta2.gram());
    let cp = u.charpoly();
    if cp != u2.charpoly() {
        return Err(Error::CharpolyMismatch);
    }
    let certificate = constant_signature_certify(omega2_eta, &u2)?;
    let signatures = (omega2_eta.signature(), omega2_eta2.signature());
    Ok(TannakaTransfer { u_charpoly: cp.to_primitive_int(), certificate, signatures })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmFilter {
    Unique(Signature),
    /// Even multiplicity: more than one candidate survives.
    Inconclusive(Vec<Signature>),
}

/// Rank-2 signatures whose `m`-fold sum has `s_minus` divisible by 4.
pub fn am_filter(m: u32) -> Result<AmFilter, Error> {
    if m == 0 {
        return Err(Error::Malformed("multiplicity must be positive".into()));
    }
    let survivors: Vec<Signature> = (0..=2usize)
        .map(|minus| Signature { plus: 2 - minus, minus, zero: 0 })
        .filter(|s| (m as usize * s.minus).is_multiple_of(4))
        .collect();
    Ok(if survivors.len() == 1 { AmFilter::Unique(survivors[0]) } else { AmFilter::Inconclusive(survivors) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(p: usize, m: usize, z: usize) -> Signature {
        Signature { plus: p, minus: m, zero: z }
    }

    fn form(rows: &[Vec<i64>]) -> SymRatForm {
        SymRatForm::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn signatures() {
        assert_eq!(signature(&RatMatrix::diag_i64(&[1, -2, 3])), sig(2, 1, 0));
        assert_eq!(form(&[vec![0, 1], vec![1, 0]]).signature(), sig(1, 1, 0));
        assert_eq!(signature(&RatMatrix::from_i64_rows(&[vec![1; 3], vec![1; 3], vec![1; 3]])), sig(1, 0, 2));
        assert_eq!(signature(&RatMatrix::zeros(2, 2)), sig(0, 0, 2));
        assert!(SymRatForm::from_i64_rows(&[vec![0, 1], vec![2, 0]]).is_err());
    }

    #[test]
    fn charpolys_and_sturm() {
        let q = |c: &[i64]| IntPoly::from_i64s(c).to_q();
        assert_eq!(charpoly(&RatMatrix::diag_i64(&[2, 3])).unwrap(), q(&[6, -5, 1]));
        assert_eq!(charpoly(&RatMatrix::identity(3)).unwrap(), q(&[-1, 3, -3, 1]));
        assert_eq!(charpoly(&RatMatrix::from_i64_rows(&[vec![0, -1], vec![1, 0]])).unwrap(), q(&[1, 0, 1]));
        let r = |c: &[i64]| {
            let p = sturm_positive_roots(&q(c));
            (p.real, p.positive, p.all_real_and_positive)
        };
        assert_eq!(r(&[6, -5, 1]), (2, 2, true));
        assert_eq!(r(&[1, 0, 1]), (0, 0, false));
        assert_eq!(r(&[-1, -1, 1]), (2, 1, false));
        assert_eq!(r(&[-1, 3, -3, 1]), (3, 3, true));
    }

    #[test]
    fn constant_signature() {
        let c = constant_signature_certify(&form(&[vec![1, 0], vec![0, -1]]), &RatMatrix::diag_i64(&[2, 3])).unwrap();
        assert_eq!(c.verdict, TransferVerdict::SignaturesEqual(sig(1, 1, 0)));
        let c = constant_signature_certify(
            &form(&[vec![1, 0], vec![0, 1]]),
            &RatMatrix::from_i64_rows(&[vec![2, 1], vec![1, 2]]),
        )
        .unwrap();
        assert_eq!(c.u_charpoly, IntPoly::from_i64s(&[3, -4, 1]));
        assert_eq!(c.verdict, TransferVerdict::SignaturesEqual(sig(2, 0, 0)));
        // gram * u is the identity: self-adjoint, but the spectrum is {1, -1}
        let e = constant_signature_certify(&form(&[vec![1, 0], vec![0, -1]]), &RatMatrix::diag_i64(&[1, -1]));
        assert_eq!(e, Err(Error::NotPositiveSpectrum));
        // the swap is not self-adjoint for diag(1, -1): gram * u = [[0, 1], [-1, 0]]
        let e = constant_signature_certify(
            &form(&[vec![1, 0], vec![0, -1]]),
            &RatMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]),
        );
        assert_eq!(e, Err(Error::NotSelfAdjoint));
        let e = constant_signature_certify(
            &form(&[vec![1, 0], vec![0, -1]]),
            &RatMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]),
        );
        assert_eq!(e, Err(Error::NotSelfAdjoint));
        let e = constant_signature_certify(&form(&[vec![1, 0], vec![0, 0]]), &RatMatrix::identity(2));
        assert_eq!(e, Err(Error::NondegeneracyFailed));
    }

    #[test]
    fn tannaka() {
        let id = form(&[vec![1, 0], vec![0, 1]]);
        let t = tannaka_transfer(&id, &id, &id, &id).unwrap();
        assert_eq!(t.signatures, (sig(2, 0, 0), sig(2, 0, 0)));
        let d23 = form(&[vec![2, 0], vec![0, 3]]);
        let t = tannaka_transfer(&id, &d23, &form(&[vec![1, 0], vec![0, -1]]), &form(&[vec![2, 0], vec![0, -3]])).unwrap();
        assert_eq!(t.u_charpoly, IntPoly::from_i64s(&[6, -5, 1]));
        assert_eq!(t.signatures, (sig(1, 1, 0), sig(1, 1, 0)));
        assert_eq!(t.certificate.verdict, TransferVerdict::SignaturesEqual(sig(1, 1, 0)));
        let e = tannaka_transfer(&id, &d23, &id, &form(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(e, Err(Error::CharpolyMismatch));
        let e = tannaka_transfer(&form(&[vec![1, 0], vec![0, -1]]), &id, &id, &id);
        assert_eq!(e, Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn am_filter_table() {
        assert_eq!(am_filter(1).unwrap(), AmFilter::Unique(sig(2, 0, 0)));
        assert_eq!(am_filter(3).unwrap(), AmFilter::Unique(sig(2, 0, 0)));
        assert_eq!(am_filter(2).unwrap(), AmFilter::Inconclusive(vec![sig(2, 0, 0), sig(0, 2, 0)]));
        assert_eq!(am_filter(4).unwrap().clone(), AmFilter::Inconclusive(vec![sig(2, 0, 0), sig(1, 1, 0), sig(0, 2, 0)]));
        assert!(am_filter(0).is_err());
    }
}
