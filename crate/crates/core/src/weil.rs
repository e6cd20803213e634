//! q-Weil polynomials: validation, factorization, paired eigenvalues, base
//! change and products.

use std::cmp::Ordering;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactmath::ball::{poly_from_roots, IntegerTest};
use crate::exactmath::intmat::IntMatrix;
use crate::exactmath::roots::{isolate_roots, refine_roots};
use crate::exactmath::sturm::SturmSequence;
use crate::exactmath::{ComplexBall, IntPoly, QPoly};
use crate::{Error, Options};

/// Working precision of the stored root balls.
const ROOT_PREC: u32 = 128;
/// Largest squarefree degree handled by subset recombination.
const MAX_FACTOR_DEGREE: usize = 16;

/// A validated q-Weil polynomial together with its certified roots.
#[derive(Debug)]
pub struct WeilPolynomial {
    q: BigInt,
    p: BigInt,
    f: u32,
    g: usize,
    poly: IntPoly,
    factors: Vec<(IntPoly, u32)>,
    roots: Vec<ComplexBall>,
    root_factor: Vec<usize>,
    involution: Vec<usize>,
    real: Vec<bool>,
    max_precision: u32,
    refined: RwLock<Vec<ComplexBall>>,
}

impl Clone for WeilPolynomial {
    fn clone(&self) -> Self {
        WeilPolynomial {
            q: self.q.clone(),
            p: self.p.clone(),
            f: self.f,
            g: self.g,
            poly: self.poly.clone(),
            factors: self.factors.clone(),
            roots: self.roots.clone(),
            root_factor: self.root_factor.clone(),
            involution: self.involution.clone(),
            real: self.real.clone(),
            max_precision: self.max_precision,
            refined: RwLock::new(self.refined.read().unwrap().clone()),
        }
    }
}

impl PartialEq for WeilPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.poly == other.poly
    }
}

impl Eq for WeilPolynomial {}

/// Multiplicity data of a Weil polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicity {
    /// Exponent `m` in `P = h^m` (for non-simple input, the largest exponent).
    pub m: u32,
    /// Degree of `h`, i.e. `[Q(pi):Q]`, when simple; 0 otherwise.
    pub center_degree: usize,
    pub simple: bool,
    /// Irreducible factors with their exponents.
    pub per_factor: Vec<(IntPoly, u32)>,
}

/// Result of probing geometric simplicity over small extensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicityProbe {
    /// Still a power of one irreducible for every `k <= bound`. `m_changes`
    /// lists the extension degrees where the exponent differs from the one
    /// over the base field, with its value there.
    GeometricallySimpleUpTo { bound: u32, m_changes: Vec<(u32, u32)> },
    /// First extension degree over which the polynomial is no longer a power of
    /// a single irreducible.
    SplitsAt(u32),
}

fn small_primes() -> &'static [u32] {
    &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
}

/// Miller-Rabin with the first 25 prime bases; deterministic far beyond 2^64.
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &sp in small_primes() {
        let sp = BigInt::from(sp);
        if n == &sp {
            return true;
        }
        if n.is_multiple_of(&sp) {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s as usize;
    'bases: for &a in small_primes() {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Writes `q = p^f` with `p` prime.
pub fn prime_power(q: &BigInt) -> Option<(BigInt, u32)> {
    if q < &BigInt::from(2) {
        return None;
    }
    let bits = q.bits() as u32;
    for f in 1..=bits {
        let r = q.nth_root(f);
        if r < BigInt::from(2) {
            break;
        }
        if num_traits::pow(r.clone(), f as usize) == *q && is_prime(&r) {
            return Some((r, f));
        }
    }
    None
}

/// Chebyshev-type polynomials `T_k(x)` with `X^k + (q/X)^k = T_k(X + q/X)`.
fn weil_chebyshev(q: &BigInt, g: usize) -> Vec<IntPoly> {
    let mut t = vec![IntPoly::new(vec![BigInt::from(2)]), IntPoly::x()];
    while t.len() <= g {
        let n = t.len();
        let next = IntPoly::x().mul(&t[n - 1]).sub(&t[n - 2].scale(q));
        t.push(next);
    }
    t
}

/// Real Weil polynomial `h` with `P(X) = X^g h(X + q/X)`.
pub fn real_weil_polynomial(q: &BigInt, poly: &IntPoly) -> IntPoly {
    let g = poly.degree().unwrap_or(0) / 2;
    let t = weil_chebyshev(q, g);
    let mut h = IntPoly::new(vec![poly.coeff(g)]);
    for (k, tk) in t.iter().enumerate().take(g + 1).skip(1) {
        h = h.add(&tk.scale(&poly.coeff(g + k)));
    }
    h
}

/// Exact test that every root of `P` has absolute value `sqrt(q)`, assuming
/// the functional equation holds.
fn modulus_condition_holds(q: &BigInt, poly: &IntPoly) -> bool {
    let h = real_weil_polynomial(q, poly);
    // H2(x^2) = +- h(x) h(-x); all roots of H2 must lie in [0, 4q]
    let hh = h.mul(&h.reflect());
    let mut h2 = IntPoly::new(hh.coeffs().iter().step_by(2).cloned().collect()).to_q();
    let four_q = BigRational::from_integer(q * 4);
    let zero = BigRational::zero();
    while h2.degree().unwrap_or(0) > 0 && h2.coeff(0).is_zero() {
        h2 = h2.divrem(&QPoly::new(vec![zero.clone(), BigRational::one()])).0;
    }
    let lin = QPoly::new(vec![-four_q.clone(), BigRational::one()]);
    while h2.degree().unwrap_or(0) > 0 && h2.eval(&four_q).is_zero() {
        h2 = h2.divrem(&lin).0;
    }
    let Some(deg) = h2.degree() else { return false };
    if deg == 0 {
        return true;
    }
    let sf = h2.divrem(&h2.gcd(&h2.derivative())).0;
    let s = SturmSequence::new(&sf);
    s.count_in(&zero, &four_q) == sf.degree().unwrap()
}

fn describe_ball(b: &ComplexBall) -> String {
    format!("{:.12} {:+.12}i", b.re_f64(), b.im_f64())
}

fn root_modulus_witness(q: &BigInt, poly: &IntPoly, ceiling: u32) -> Error {
    let sf = poly.squarefree_part();
    let mut prec = 64;
    while prec <= ceiling {
        if let Ok(roots) = isolate_roots(&sf, prec, ceiling) {
            let qb = crate::exactmath::RealBall::from_int(q, roots[0].prec());
            for r in &roots {
                let a2 = r.abs2();
                if !a2.overlaps(&qb) {
                    return Error::RootModulusFailed {
                        witness: describe_ball(r),
                        modulus2: format!("{:.12}", a2.mid_f64()),
                    };
                }
            }
        }
        prec *= 2;
    }
    Error::PrecisionExhausted("could not exhibit a root of wrong modulus".into())
}

enum Candidate {
    Poly(IntPoly),
    NotIntegral,
    NeedPrecision,
}

fn integer_candidate(balls: &[ComplexBall]) -> Candidate {
    let coeffs = poly_from_roots(balls, balls[0].prec());
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        match c.integers() {
            IntegerTest::Unique(v) => ints.push(v),
            IntegerTest::NoInteger => return Candidate::NotIntegral,
            IntegerTest::Several => return Candidate::NeedPrecision,
        }
    }
    Candidate::Poly(IntPoly::new(ints))
}

/// Splits a monic squarefree integer polynomial into irreducible factors by
/// recombining certified root balls.
pub fn factor_squarefree(f: &IntPoly, ceiling: u32) -> Result<Vec<IntPoly>, Error> {
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return Ok(if n == 1 { vec![f.clone()] } else { Vec::new() });
    }
    if n > MAX_FACTOR_DEGREE {
        return Err(Error::Undetermined(format!("factoring a degree-{n} polynomial exceeds the recombination cap")));
    }
    let mut prec = 96.min(ceiling);
    'outer: loop {
        let roots = isolate_roots(f, prec, ceiling)?;
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut rest = f.clone();
        let mut out = Vec::new();
        while remaining.len() > 1 {
            let first = remaining[0];
            let others: Vec<usize> = remaining[1..].to_vec();
            let mut found: Option<(IntPoly, Vec<usize>)> = None;
            // a proper factor has at most half the remaining roots or its
            // cofactor does; the last size is the remainder itself
            'size: for size in 0..others.len() {
                for combo in combinations(others.len(), size) {
                    let mut idx = vec![first];
                    idx.extend(combo.iter().map(|&c| others[c]));
                    let balls: Vec<ComplexBall> = idx.iter().map(|&i| roots[i].clone()).collect();
                    match integer_candidate(&balls) {
                        Candidate::NotIntegral => {}
                        Candidate::NeedPrecision => {
                            if prec >= ceiling {
                                return Err(Error::PrecisionExhausted("factor recombination".into()));
                            }
                            prec = (prec * 2).min(ceiling);
                            continue 'outer;
                        }
                        Candidate::Poly(cand) => {
                            if let Some(quot) = rest.div_exact(&cand) {
                                found = Some((cand, idx));
                                rest = quot;
                                break 'size;
                            }
                        }
                    }
                }
            }
            match found {
                Some((h, idx)) => {
                    remaining.retain(|i| !idx.contains(i));
                    out.push(h);
                }
                None => break,
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            out.push(rest);
        }
        out.sort_by(poly_order);
        return Ok(out);
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Total order on polynomials: degree first, then coefficients from the top.
pub fn poly_order(a: &IntPoly, b: &IntPoly) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Irreducible factorization over Q of a monic integer polynomial.
pub fn factor(poly: &IntPoly, ceiling: u32) -> Result<Vec<(IntPoly, u32)>, Error> {
    let mut out: Vec<(IntPoly, u32)> = Vec::new();
    for (part, k) in poly.to_q().squarefree_decomposition() {
        let part = part.to_primitive_int();
        for h in factor_squarefree(&part, ceiling)? {
            out.push((h, k));
        }
    }
    out.sort_by(|a, b| poly_order(&a.0, &b.0));
    Ok(out)
}

fn cmp_re_desc(a: &ComplexBall, b: &ComplexBall) -> Option<Ordering> {
    let (ra, rb) = (a.re_ball(), b.re_ball());
    if ra.lower() > rb.upper() {
        Some(Ordering::Less)
    } else if rb.lower() > ra.upper() {
        Some(Ordering::Greater)
    } else {
        None
    }
}

impl WeilPolynomial {
    /// Validates `coeffs` (ascending, monic, degree `2g >= 2`) as a q-Weil polynomial.
    pub fn validate(q: &BigInt, coeffs: &[BigInt], opts: &Options) -> Result<Self, Error> {
        let poly = IntPoly::new(coeffs.to_vec());
        if coeffs.len() != poly.coeffs().len() {
            return Err(Error::Malformed("leading coefficient is zero".into()));
        }
        let deg = poly.degree().unwrap_or(0);
        if deg < 2 || deg % 2 == 1 {
            return Err(Error::Malformed(format!("degree {deg} is not an even number >= 2")));
        }
        if !poly.is_monic() {
            return Err(Error::Malformed("polynomial is not monic".into()));
        }
        let (p, f) = prime_power(q).ok_or_else(|| Error::NotPrimePower(q.to_string()))?;
        let g = deg / 2;
        let qg = num_traits::pow(q.clone(), g);
        let mut qi = BigInt::one();
        for i in 0..=deg {
            if &qi * poly.coeff(i) != &qg * poly.coeff(deg - i) {
                return Err(Error::FunctionalEquationFailed { index: i });
            }
            qi *= q;
        }
        if !modulus_condition_holds(q, &poly) {
            return Err(root_modulus_witness(q, &poly, opts.max_precision));
        }
        let factors = factor(&poly, opts.max_precision)?;
        let mut w = WeilPolynomial {
            q: q.clone(),
            p,
            f,
            g,
            poly,
            factors,
            roots: Vec::new(),
            root_factor: Vec::new(),
            involution: Vec::new(),
            real: Vec::new(),
            max_precision: opts.max_precision,
            refined: RwLock::new(Vec::new()),
        };
        w.place_roots()?;
        Ok(w)
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(q: i64, coeffs: &[i64]) -> Result<Self, Error> {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        Self::validate(&BigInt::from(q), &c, &Options::default())
    }

    fn is_real_factor(&self, h: &IntPoly) -> bool {
        match h.degree() {
            Some(1) => true,
            Some(2) => h.coeff(1).is_zero() && h.coeff(0) == -&self.q,
            _ => false,
        }
    }

    /// Isolates and orders the distinct roots: conjugate pairs factor by factor
    /// (representative with positive imaginary part first, representatives by
    /// decreasing real part), then real roots, positive first.
    fn place_roots(&mut self) -> Result<(), Error> {
        let mut prec = ROOT_PREC;
        loop {
            match self.try_place_roots(prec) {
                Ok(()) => return Ok(()),
                Err(Error::Ambiguous(_)) if prec < self.max_precision => prec = (prec * 2).min(self.max_precision),
                Err(Error::Ambiguous(m)) => return Err(Error::PrecisionExhausted(m)),
                Err(e) => return Err(e),
            }
        }
    }

    fn try_place_roots(&mut self, prec: u32) -> Result<(), Error> {
        let mut pairs: Vec<(ComplexBall, ComplexBall, usize)> = Vec::new();
        let mut reals: Vec<(ComplexBall, usize, bool)> = Vec::new();
        for (fi, (h, _)) in self.factors.iter().enumerate() {
            if h.degree() == Some(1) {
                let s = -h.coeff(0);
                let positive = s.is_positive();
                reals.push((ComplexBall::from_int(&s, prec + 32), fi, positive));
                continue;
            }
            let balls = isolate_roots(h, prec, self.max_precision)?;
            if self.is_real_factor(h) {
                for b in balls {
                    let positive = match b.sign_re() {
                        Some(num_bigint::Sign::Plus) => true,
                        Some(_) => false,
                        None => return Err(Error::Ambiguous("sign of a real root".into())),
                    };
                    // the exact root is real: drop the imaginary noise
                    let b = ComplexBall::new(b.re_raw().clone(), BigInt::zero(), b.rad_raw() + b.im_raw().abs(), b.prec());
                    reals.push((b, fi, positive));
                }
                continue;
            }
            let mut upper = Vec::new();
            let mut lower = Vec::new();
            for b in balls {
                match b.sign_im() {
                    Some(num_bigint::Sign::Plus) => upper.push(b),
                    Some(_) => lower.push(b),
                    None => return Err(Error::Ambiguous("imaginary sign of a root".into())),
                }
            }
            if upper.len() != lower.len() {
                return Err(Error::InternalInconsistency("roots are not closed under conjugation".into()));
            }
            let mut err = None;
            upper.sort_by(|a, b| {
                cmp_re_desc(a, b).unwrap_or_else(|| {
                    err = Some(());
                    Ordering::Equal
                })
            });
            if err.is_some() {
                return Err(Error::Ambiguous("real parts of representatives overlap".into()));
            }
            for u in upper {
                let c = u.conj();
                let matches: Vec<usize> = (0..lower.len()).filter(|&j| lower[j].overlaps(&c)).collect();
                if matches.len() != 1 {
                    return Err(Error::Ambiguous("conjugate pairing".into()));
                }
                let partner = lower.remove(matches[0]);
                pairs.push((u, partner, fi));
            }
        }
        reals.sort_by_key(|r| !r.2);
        let mut roots = Vec::new();
        let mut root_factor = Vec::new();
        let mut involution = Vec::new();
        let mut real = Vec::new();
        for (u, l, fi) in pairs {
            let i = roots.len();
            roots.push(u);
            roots.push(l);
            root_factor.extend([fi, fi]);
            involution.extend([i + 1, i]);
            real.extend([false, false]);
        }
        for (b, fi, _) in reals {
            involution.push(roots.len());
            roots.push(b);
            root_factor.push(fi);
            real.push(true);
        }
        let qb = crate::exactmath::RealBall::from_int(&self.q, prec);
        if !roots.iter().all(|r| r.abs2().overlaps(&qb)) {
            return Err(Error::InternalInconsistency("root ball misses |z|^2 = q".into()));
        }
        self.roots = roots;
        self.root_factor = root_factor;
        self.involution = involution;
        self.real = real;
        *self.refined.write().unwrap() = self.roots.clone();
        Ok(())
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn coeffs(&self) -> &[BigInt] {
        self.poly.coeffs()
    }

    /// Irreducible factors with multiplicities, sorted by degree then coefficients.
    pub fn irreducible_factors(&self) -> &[(IntPoly, u32)] {
        &self.factors
    }

    /// Distinct roots in canonical order.
    pub fn roots(&self) -> &[ComplexBall] {
        &self.roots
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// Multiplicity of each distinct root in `P`.
    pub fn root_multiplicities(&self) -> Vec<u32> {
        self.root_factor.iter().map(|&fi| self.factors[fi].1).collect()
    }

    /// Index of the irreducible factor of each distinct root.
    pub fn root_factor(&self) -> &[usize] {
        &self.root_factor
    }

    /// The involution `pi -> q/pi` on distinct-root indices.
    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn is_real_root(&self, i: usize) -> bool {
        self.real[i]
    }

    pub fn has_real_roots(&self) -> bool {
        self.real.iter().any(|&r| r)
    }

    /// Representatives of the non-real conjugate pairs (positive imaginary part).
    pub fn pair_representatives(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| !self.real[i] && self.involution[i] > i).collect()
    }

    pub fn real_roots(&self) -> Vec<usize> {
        (0..self.roots.len()).filter(|&i| self.real[i]).collect()
    }

    /// A real root that is rational (so `q` is a square).
    pub fn is_rational_root(&self, i: usize) -> bool {
        self.factors[self.root_factor[i]].0.degree() == Some(1)
    }

    pub fn max_precision(&self) -> u32 {
        self.max_precision
    }

    /// Root balls with radius at most `2^-prec * max(1, |z|)`.
    pub fn roots_at(&self, prec: u32) -> Result<Vec<ComplexBall>, Error> {
        {
            let cached = self.refined.read().unwrap();
            if cached.first().is_some_and(|b| b.rad_rel_below(prec)) && cached.iter().all(|b| b.rad_rel_below(prec)) {
                return Ok(cached.clone());
            }
        }
        let mut out = self.roots.clone();
        for (fi, (h, _)) in self.factors.iter().enumerate() {
            let idx: Vec<usize> = (0..self.roots.len()).filter(|&i| self.root_factor[i] == fi).collect();
            if h.degree() == Some(1) {
                out[idx[0]] = ComplexBall::from_int(&-h.coeff(0), prec + 32);
                continue;
            }
            let approx: Vec<ComplexBall> = idx.iter().map(|&i| self.roots[i].clone()).collect();
            let refined = refine_roots(h, &approx, prec, self.max_precision)?;
            for (&i, b) in idx.iter().zip(refined) {
                out[i] = if self.real[i] {
                    ComplexBall::new(b.re_raw().clone(), BigInt::zero(), b.rad_raw() + b.im_raw().abs(), b.prec())
                } else {
                    b
                };
            }
        }
        let p = out.iter().map(|b| b.prec()).max().unwrap_or(prec);
        let out: Vec<ComplexBall> = out.iter().map(|b| b.to_prec(p)).collect();
        *self.refined.write().unwrap() = out.clone();
        Ok(out)
    }

    /// Multiplicity `m`, degree of the center `[Q(pi):Q]` and simplicity.
    pub fn multiplicity_and_center(&self) -> Multiplicity {
        let simple = self.factors.len() == 1;
        let m = self.factors.iter().map(|f| f.1).max().unwrap_or(1);
        Multiplicity {
            m,
            center_degree: if simple { self.factors[0].0.degree().unwrap() } else { 0 },
            simple,
            per_factor: self.factors.clone(),
        }
    }

    pub fn is_simple(&self) -> bool {
        self.factors.len() == 1
    }

    /// Weil polynomial over `F_{q^k}` whose roots are the k-th powers of these roots.
    pub fn base_change(&self, k: u32, opts: &Options) -> Result<WeilPolynomial, Error> {
        if k == 0 {
            return Err(Error::Malformed("extension degree must be positive".into()));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let coeffs = power_polynomial(&self.poly, k);
        let qk = num_traits::pow(self.q.clone(), k as usize);
        WeilPolynomial::validate(&qk, coeffs.coeffs(), opts)
    }

    /// Product of two Weil polynomials over the same field.
    pub fn product(&self, other: &WeilPolynomial, opts: &Options) -> Result<WeilPolynomial, Error> {
        if self.q != other.q {
            return Err(Error::MismatchedBaseField);
        }
        let prod = self.poly.mul(&other.poly);
        WeilPolynomial::validate(&self.q, prod.coeffs(), opts)
    }

    /// Checks that base changes up to `bound` stay powers of one irreducible.
    pub fn geometric_simplicity_probe(&self, bound: u32, opts: &Options) -> Result<SimplicityProbe, Error> {
        if !self.is_simple() {
            return Err(Error::NotSimple);
        }
        let m = self.factors[0].1;
        let mut changes = Vec::new();
        for k in 2..=bound {
            let coeffs = power_polynomial(&self.poly, k);
            let fac = factor(&coeffs, opts.max_precision)?;
            if fac.len() != 1 {
                return Ok(SimplicityProbe::SplitsAt(k));
            }
            if fac[0].1 != m {
                changes.push((k, fac[0].1));
            }
        }
        Ok(SimplicityProbe::GeometricallySimpleUpTo { bound, m_changes: changes })
    }
}

/// Resultant of `f` and `g` via the Sylvester determinant.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else { return BigInt::zero() };
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut s = IntMatrix::zeros(size, size);
    for r in 0..n {
        for (i, c) in f.coeffs().iter().rev().enumerate() {
            s[(r, r + i)] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in g.coeffs().iter().rev().enumerate() {
            s[(n + r, r + i)] = c.clone();
        }
    }
    s.det()
}

/// `prod (X - a_i^k)` over the roots `a_i` of the monic polynomial `p`,
/// computed as `Res_Y(p(Y), X - Y^k)` by evaluation at integer points and
/// Lagrange interpolation.
pub fn power_polynomial(p: &IntPoly, k: u32) -> IntPoly {
    let n = p.degree().unwrap_or(0);
    let xs: Vec<BigInt> = (0..=n as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|x| {
            let mut c = vec![BigInt::zero(); k as usize + 1];
            c[0] = x.clone();
            c[k as usize] = -BigInt::one();
            resultant(p, &IntPoly::new(c))
        })
        .collect();
    let mut acc = QPoly::zero();
    for (i, xi) in xs.iter().enumerate() {
        let mut basis = QPoly::one();
        let mut denom = BigInt::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&IntPoly::linear(xj).to_q());
                denom *= xi - xj;
            }
        }
        acc = acc.add(&basis.scale(&BigRational::new(ys[i].clone(), denom)));
    }
    acc.to_int_exact().expect("resultant interpolation is integral")
}

/// Newton power-sum construction of the same polynomial; independent check.
pub fn power_polynomial_newton(p: &IntPoly, k: u32) -> IntPoly {
    let n = p.degree().unwrap_or(0);
    let kk = k as usize;
    // power sums s_j of the roots of p for j <= n k
    let e: Vec<BigInt> = (0..=n).map(|i| {
        let c = p.coeff(n - i);
        if i % 2 == 0 { c } else { -c }
    }).collect();
    let mut s: Vec<BigInt> = vec![BigInt::from(n)];
    for j in 1..=n * kk {
        let mut v = BigInt::zero();
        for i in 1..=(j - 1).min(n) {
            let term = &e[i] * &s[j - i];
            if i % 2 == 1 { v += term } else { v -= term }
        }
        if j <= n {
            let t = &e[j] * BigInt::from(j);
            if j % 2 == 1 { v += t } else { v -= t }
        }
        s.push(v);
    }
    // power sums of the k-th powers, then Newton back to elementary symmetric
    let t: Vec<BigInt> = (0..=n).map(|j| s[j * kk].clone()).collect();
    let mut el = vec![BigInt::one()];
    for j in 1..=n {
        let mut v = BigInt::zero();
        for i in 1..=j {
            let term = &el[j - i] * &t[i];
            if i % 2 == 1 { v += term } else { v -= term }
        }
        el.push(v / BigInt::from(j));
    }
    IntPoly::new((0..=n).map(|i| {
        let c = el[n - i].clone();
        if (n - i).is_multiple_of(2) { c } else { -c }
    }).collect())
}

/// `sqrt(q)` if `q` is a perfect square.
pub fn exact_sqrt(q: &BigInt) -> Option<BigInt> {
    let r = q.sqrt();
    (&r * &r == *q).then_some(r)
}

/// Approximate real root count helper for diagnostics.
pub fn describe(w: &WeilPolynomial) -> String {
    format!("q={} P={}", w.q, w.poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(&BigInt::from(9)), Some((BigInt::from(3), 2)));
        assert_eq!(prime_power(&BigInt::from(8)), Some((BigInt::from(2), 3)));
        assert_eq!(prime_power(&BigInt::from(25)), Some((BigInt::from(5), 2)));
        assert_eq!(prime_power(&BigInt::from(6)), None);
        assert_eq!(prime_power(&BigInt::from(1)), None);
        assert!(is_prime(&BigInt::from(1_000_000_007u64)));
    }

    #[test]
    fn validate_examples() {
        let w = WeilPolynomial::from_i64(5, &[5, -1, 1]).unwrap();
        assert_eq!(w.g(), 1);
        assert_eq!(w.num_roots(), 2);
        assert!((w.roots()[0].re_f64() - 0.5).abs() < 1e-12);
        assert!(w.roots()[0].im_f64() > 0.0);
        assert_eq!(w.involution(), &[1, 0]);
        assert!(matches!(WeilPolynomial::from_i64(4, &[4, -5, 1]), Err(Error::RootModulusFailed { .. })));
        assert!(WeilPolynomial::from_i64(3, &[3, 0, 1]).is_ok());
        let w = WeilPolynomial::from_i64(9, &[9, 6, 1]).unwrap();
        assert_eq!(w.num_roots(), 1);
        assert_eq!(w.involution(), &[0]);
        assert!(w.is_real_root(0));
        assert!(matches!(WeilPolynomial::from_i64(6, &[6, 0, 1]), Err(Error::NotPrimePower(_))));
        assert!(matches!(WeilPolynomial::from_i64(5, &[5, 1, 2]), Err(Error::Malformed(_))));
        assert!(matches!(
            WeilPolynomial::from_i64(5, &[4, -1, 1]),
            Err(Error::FunctionalEquationFailed { .. })
        ));
    }

    #[test]
    fn multiplicities() {
        let w = WeilPolynomial::from_i64(5, &[5, -1, 1]).unwrap();
        let m = w.multiplicity_and_center();
        assert_eq!((m.m, m.center_degree, m.simple), (1, 2, true));
        let w = WeilPolynomial::from_i64(9, &[9, 6, 1]).unwrap();
        let m = w.multiplicity_and_center();
        assert_eq!((m.m, m.center_degree, m.simple), (2, 1, true));
        let prod = ip(&[5, -1, 1]).mul(&ip(&[5, 0, 1]));
        let c: Vec<i64> = prod.coeffs().iter().map(|x| x.to_i64().unwrap()).collect();
        let w = WeilPolynomial::from_i64(5, &c).unwrap();
        let m = w.multiplicity_and_center();
        assert!(!m.simple);
        assert_eq!(m.per_factor.len(), 2);
        assert!(m.per_factor.iter().all(|f| f.1 == 1));
    }

    #[test]
    fn base_change_examples() {
        let o = Options::default();
        let w = WeilPolynomial::from_i64(3, &[3, 0, 1]).unwrap();
        let b = w.base_change(2, &o).unwrap();
        assert_eq!(b.q(), &BigInt::from(9));
        assert_eq!(b.poly(), &ip(&[9, 6, 1]));
        let w = WeilPolynomial::from_i64(5, &[5, -1, 1]).unwrap();
        let b = w.base_change(2, &o).unwrap();
        assert_eq!((b.q(), b.poly()), (&BigInt::from(25), &ip(&[25, 9, 1])));
        assert_eq!(w.base_change(1, &o).unwrap(), w);
    }

    #[test]
    fn resultant_and_newton_agree() {
        let p = ip(&[9, 3, 1, 1, 1]).mul(&ip(&[3, 0, 1]));
        for k in 1..=5 {
            assert_eq!(power_polynomial(&p, k), power_polynomial_newton(&p, k));
        }
    }

    #[test]
    fn product_and_mismatch() {
        let o = Options::default();
        let a = WeilPolynomial::from_i64(5, &[5, -1, 1]).unwrap();
        let b = WeilPolynomial::from_i64(5, &[5, 0, 1]).unwrap();
        let ab = a.product(&b, &o).unwrap();
        assert_eq!(ab.g(), 2);
        assert!(!ab.is_simple());
        let c = WeilPolynomial::from_i64(3, &[3, 0, 1]).unwrap();
        let d = WeilPolynomial::from_i64(9, &[9, 6, 1]).unwrap();
        assert_eq!(c.product(&d, &o), Err(Error::MismatchedBaseField));
    }

    #[test]
    fn simplicity_probe() {
        let o = Options::default();
        let w = WeilPolynomial::from_i64(5, &[5, -1, 1]).unwrap();
        assert_eq!(
            w.geometric_simplicity_probe(12, &o).unwrap(),
            SimplicityProbe::GeometricallySimpleUpTo { bound: 12, m_changes: vec![] }
        );
        let w = WeilPolynomial::from_i64(3, &[3, 0, 1]).unwrap();
        assert_eq!(
            w.geometric_simplicity_probe(12, &o).unwrap(),
            SimplicityProbe::GeometricallySimpleUpTo {
                bound: 12,
                m_changes: (1..=6).map(|j| (2 * j, 2)).collect()
            }
        );
        let a = WeilPolynomial::from_i64(5, &[5, -1, 1]).unwrap();
        let b = WeilPolynomial::from_i64(5, &[5, 0, 1]).unwrap();
        let ab = a.product(&b, &o).unwrap();
        assert_eq!(ab.geometric_simplicity_probe(12, &o), Err(Error::NotSimple));
    }

    #[test]
    fn root_order_pairs_then_reals() {
        // (X + 3)^2 (X^2 + X + 9) over q = 9
        let p = ip(&[3, 1]).pow(2).mul(&ip(&[9, 1, 1]));
        let c: Vec<i64> = p.coeffs().iter().map(|x| x.to_i64().unwrap()).collect();
        let w = WeilPolynomial::from_i64(9, &c).unwrap();
        assert_eq!(w.num_roots(), 3);
        assert_eq!(w.involution(), &[1, 0, 2]);
        assert!(w.is_real_root(2));
        assert_eq!(w.root_multiplicities(), vec![1, 1, 2]);
        let sharp = w.roots_at(400).unwrap();
        assert!(sharp.iter().all(|b| b.rad_rel_below(400)));
        assert!(sharp[0].overlaps(&w.roots()[0]));
    }
}
