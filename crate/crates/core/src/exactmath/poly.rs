//! Dense univariate polynomials over the integers and the rationals.
//!
//! Coefficients are stored in ascending degree order and trailing zeros are
//! always trimmed, so the zero polynomial has an empty coefficient vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    /// `X - a`.
    pub fn linear(a: &BigInt) -> Self {
        Self::new(vec![-a, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.lead().unwrap().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact division; `None` if `divisor` does not divide `self` over `Z`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.to_q().divrem(&divisor.to_q());
        if !r.is_zero() {
            return None;
        }
        q.to_int_exact()
    }

    /// Remainder modulo a monic polynomial; stays in `Z[X]`.
    pub fn rem_monic(&self, modulus: &IntPoly) -> IntPoly {
        debug_assert!(modulus.is_monic());
        let n = modulus.coeffs.len() - 1;
        let mut c = self.coeffs.clone();
        while c.len() > n {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - n;
            for (i, m) in modulus.coeffs[..n].iter().enumerate() {
                c[shift + i] -= &top * m;
            }
        }
        IntPoly::new(c)
    }

    /// Substitutes `X -> X + a`.
    pub fn shift(&self, a: &BigInt) -> IntPoly {
        let mut acc = IntPoly::zero();
        let lin = IntPoly::new(vec![a.clone(), BigInt::one()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&IntPoly::new(vec![c.clone()]));
        }
        acc
    }

    /// Returns `p(-X)`.
    pub fn reflect(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Squarefree part `p / gcd(p, p')`, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> IntPoly {
        let q = self.to_q();
        let g = q.gcd(&q.derivative());
        let (s, _) = q.divrem(&g);
        s.to_primitive_int()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            if i == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        trim(&mut coeffs);
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly { coeffs: vec![BigRational::one()] }
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.lead().unwrap().recip();
        let mut r = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (QPoly::zero(), QPoly::zero());
        };
        if nd < dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &r[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                r[k + i] -= &c * d;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, divisor: &QPoly) -> QPoly {
        self.divrem(divisor).1
    }

    pub fn monic(&self) -> QPoly {
        match self.lead() {
            None => QPoly::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Yun's squarefree decomposition: returns `(f_k, k)` pairs with
    /// `self = c * prod f_k^k`, each `f_k` monic squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1u32;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), k));
            }
            b = b.divrem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    /// Clears denominators and returns the primitive integer polynomial with
    /// positive leading coefficient.
    pub fn to_primitive_int(&self) -> IntPoly {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(self.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
            .primitive_part()
    }

    /// `Some` when every coefficient is an integer.
    pub fn to_int_exact(&self) -> Option<IntPoly> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(IntPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Evaluates `self` at a polynomial argument, reducing modulo `modulus`.
    pub fn compose_mod(&self, arg: &QPoly, modulus: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(arg).add(&QPoly::constant(c.clone())).rem(modulus);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn display_formats_signs() {
        assert_eq!(ip(&[5, -1, 1]).to_string(), "X^2 - X + 5");
        assert_eq!(ip(&[-3, 0, 2]).to_string(), "2*X^2 - 3");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn squarefree_part_of_square() {
        let p = ip(&[3, 1]).pow(2);
        assert_eq!(p.squarefree_part(), ip(&[3, 1]));
        let q = ip(&[5, -1, 1]).mul(&ip(&[5, 0, 1]));
        assert_eq!(q.squarefree_part(), q);
    }

    #[test]
    fn yun_decomposition_recovers_multiplicities() {
        // (X-1)^3 (X+2)
        let p = ip(&[-1, 1]).pow(3).mul(&ip(&[2, 1]));
        let dec = p.to_q().squarefree_decomposition();
        let got: Vec<(IntPoly, u32)> = dec.iter().map(|(f, k)| (f.to_primitive_int(), *k)).collect();
        assert_eq!(got, vec![(ip(&[2, 1]), 1), (ip(&[-1, 1]), 3)]);
    }

    #[test]
    fn exact_division_and_rem_monic() {
        let a = ip(&[5, -1, 1]);
        let b = ip(&[5, 0, 1]);
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.div_exact(&ip(&[1, 1])), None);
        assert!(ab.rem_monic(&a).is_zero());
        assert_eq!(ip(&[0, 0, 1]).rem_monic(&ip(&[3, 0, 1])), ip(&[-3]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = ip(&[-1, 0, 1]).to_q();
        let b = ip(&[1, 1]).to_q().mul(&ip(&[2, 1]).to_q());
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, ip(&[1, 1]).to_q());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn shift_and_reflect() {
        let p = ip(&[1, 2, 1]); // (X+1)^2
        assert_eq!(p.shift(&BigInt::from(-1)), ip(&[0, 0, 1]));
        assert_eq!(ip(&[1, 2, 3]).reflect(), ip(&[1, -2, 3]));
    }
}
