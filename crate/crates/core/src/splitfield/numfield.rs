//! Exact arithmetic in `Q[X]/(mu)` for an irreducible monic `mu`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactmath::{IntPoly, QPoly, RatMatrix};

/// A number field given by the minimal polynomial of a primitive element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: QPoly,
    degree: usize,
}

/// Element of a [`NumberField`] as coordinates in the power basis `1, t, ..., t^{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<BigRational>,
}

impl FieldElement {
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    fn from_poly(p: &QPoly, n: usize) -> Self {
        FieldElement { coords: (0..n).map(|i| p.coeff(i)).collect() }
    }

    fn to_poly(&self) -> QPoly {
        QPoly::new(self.coords.clone())
    }
}

impl NumberField {
    pub fn new(min_poly: &IntPoly) -> Self {
        let degree = min_poly.degree().expect("nonzero minimal polynomial");
        NumberField { modulus: min_poly.to_q(), degree }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn from_rational(&self, r: &BigRational) -> FieldElement {
        let mut coords = vec![BigRational::zero(); self.degree];
        coords[0] = r.clone();
        FieldElement { coords }
    }

    pub fn from_int(&self, n: &BigInt) -> FieldElement {
        self.from_rational(&BigRational::from_integer(n.clone()))
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(&BigInt::one())
    }

    /// Reduces an arbitrary polynomial in the generator.
    pub fn from_poly(&self, p: &QPoly) -> FieldElement {
        FieldElement::from_poly(&p.rem(&self.modulus), self.degree)
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        a == &self.one()
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.from_poly(&a.to_poly().mul(&b.to_poly()))
    }

    /// Inverse via the extended Euclidean algorithm; `None` for zero.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        let (g, s, _) = a.to_poly().ext_gcd(&self.modulus);
        // g is a nonzero constant because the modulus is irreducible
        let c = g.coeff(0);
        if g.degree() != Some(0) || c.is_zero() {
            return None;
        }
        Some(self.from_poly(&s.scale(&c.recip())))
    }

    /// `a^e` for any integer exponent (negative needs `a` invertible).
    pub fn pow(&self, a: &FieldElement, e: &BigInt) -> Option<FieldElement> {
        let mut base = if e < &BigInt::zero() { self.inv(a)? } else { a.clone() };
        let mut e = if e < &BigInt::zero() { -e } else { e.clone() };
        let mut acc = self.one();
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.mul(&acc, &base);
            }
            e >>= 1u32;
            if !e.is_zero() {
                base = self.mul(&base, &base);
            }
        }
        Some(acc)
    }

    /// Matrix of multiplication by `a` on the power basis (columns are images).
    pub fn multiplication_matrix(&self, a: &FieldElement) -> RatMatrix {
        let n = self.degree;
        let mut m = RatMatrix::zeros(n, n);
        let mut basis = self.one();
        let t = if n > 1 {
            let mut c = vec![BigRational::zero(); n];
            c[1] = BigRational::one();
            FieldElement { coords: c }
        } else {
            // the generator is rational
            self.from_rational(&-self.modulus.coeff(0))
        };
        for j in 0..n {
            let img = self.mul(a, &basis);
            for i in 0..n {
                m[(i, j)] = img.coords[i].clone();
            }
            basis = self.mul(&basis, &t);
        }
        m
    }

    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let m = self.multiplication_matrix(a);
        (0..self.degree).map(|i| m[(i, i)].clone()).sum()
    }

    pub fn norm(&self, a: &FieldElement) -> BigRational {
        self.multiplication_matrix(a).det()
    }

    /// Characteristic polynomial of multiplication by `a` (degree `N`).
    pub fn charpoly(&self, a: &FieldElement) -> QPoly {
        self.multiplication_matrix(a).charpoly()
    }

    /// Is `a` an algebraic integer?
    pub fn is_integral(&self, a: &FieldElement) -> bool {
        self.charpoly(a).coeffs().iter().all(|c| c.is_integer())
    }

    /// `Some(order)` when `a` is a root of unity.
    ///
    /// A root of unity of order `k` in a degree-`N` field has `phi(k) | N`, so it
    /// suffices to test `a^L = 1` for `L` the lcm of all such `k`.
    pub fn root_of_unity_order(&self, a: &FieldElement) -> Option<u64> {
        if self.is_zero(a) || !self.is_integral(a) {
            return None;
        }
        let orders = possible_orders(self.degree as u64);
        let l = orders.iter().fold(1u64, |acc, &k| acc.lcm(&k));
        if !self.is_one(&self.pow(a, &BigInt::from(l))?) {
            return None;
        }
        let mut order = l;
        for p in prime_factors(l) {
            while order % p == 0 && self.is_one(&self.pow(a, &BigInt::from(order / p))?) {
                order /= p;
            }
        }
        Some(order)
    }
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// All `k` with `phi(k) | n`; since `phi(k) >= sqrt(k/2)`, `k <= 2 n^2`.
pub fn possible_orders(n: u64) -> Vec<u64> {
    (1..=2 * n * n + 2).filter(|&k| n.is_multiple_of(totient(k))).collect()
}
