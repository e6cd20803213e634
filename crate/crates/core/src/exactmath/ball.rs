//! Fixed-point ball arithmetic.
//!
//! A ball at precision `p` stores integers scaled by `2^-p`. Every operation
//! returns a ball that encloses all exact results for inputs drawn from the
//! operand balls; rounding of the midpoint is always absorbed into the radius.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Floor of `x / 2^k`.
pub(crate) fn shr_floor(x: &BigInt, k: u32) -> BigInt {
    // num-bigint's arithmetic shift on BigInt rounds toward negative infinity
    x >> k as usize
}

/// Ceiling of `x / 2^k`.
pub(crate) fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    -shr_floor(&-x, k)
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

/// Converts a finite f64 to the nearest-below fixed-point integer at precision `p`.
pub(crate) fn f64_to_fixed(x: f64, p: u32) -> BigInt {
    if x == 0.0 || !x.is_finite() {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(mant) * sign;
    let shift = e + p as i64;
    if shift >= 0 {
        m << shift as usize
    } else {
        shr_floor(&m, (-shift) as u32)
    }
}

pub(crate) fn fixed_to_f64(x: &BigInt, p: u32) -> f64 {
    let shift = p.saturating_sub(64);
    let y = shr_floor(x, shift);
    y.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-((p - shift) as i32))
}

/// Outcome of asking which integers a ball contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerTest {
    NoInteger,
    Unique(BigInt),
    Several,
}

/// Real interval `[mid - rad, mid + rad] * 2^-prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealBall {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

impl RealBall {
    pub fn new(mid: BigInt, rad: BigInt, prec: u32) -> Self {
        debug_assert!(!rad.is_negative());
        RealBall { mid, rad, prec }
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        RealBall { mid: n << prec as usize, rad: BigInt::zero(), prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(n), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let num = r.numer() << prec as usize;
        let (q, rem) = num.div_mod_floor(r.denom());
        let rad = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        RealBall { mid: q, rad, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_raw(&self) -> &BigInt {
        &self.rad
    }

    pub fn mid_f64(&self) -> f64 {
        fixed_to_f64(&self.mid, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        fixed_to_f64(&self.rad, self.prec)
    }

    /// Lower endpoint as an exact rational.
    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, pow2(self.prec))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, pow2(self.prec))
    }

    pub fn mid_rational(&self) -> BigRational {
        BigRational::new(self.mid.clone(), pow2(self.prec))
    }

    pub fn to_prec(&self, p: u32) -> RealBall {
        if p >= self.prec {
            let s = (p - self.prec) as usize;
            RealBall { mid: &self.mid << s, rad: &self.rad << s, prec: p }
        } else {
            let s = self.prec - p;
            let mid = shr_floor(&self.mid, s);
            let rad = shr_ceil(&self.rad, s) + 1;
            RealBall { mid, rad, prec: p }
        }
    }

    fn align(&self, other: &RealBall) -> (RealBall, RealBall) {
        let p = self.prec.max(other.prec);
        (self.to_prec(p), other.to_prec(p))
    }

    pub fn add(&self, other: &RealBall) -> RealBall {
        let (a, b) = self.align(other);
        RealBall { mid: a.mid + b.mid, rad: a.rad + b.rad, prec: a.prec }
    }

    pub fn sub(&self, other: &RealBall) -> RealBall {
        let (a, b) = self.align(other);
        RealBall { mid: a.mid - b.mid, rad: a.rad + b.rad, prec: a.prec }
    }

    pub fn neg(&self) -> RealBall {
        RealBall { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul_int(&self, k: &BigInt) -> RealBall {
        RealBall { mid: &self.mid * k, rad: &self.rad * k.abs(), prec: self.prec }
    }

    pub fn mul(&self, other: &RealBall) -> RealBall {
        let (a, b) = self.align(other);
        let p = a.prec;
        let mid = shr_floor(&(&a.mid * &b.mid), p);
        let err = a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad;
        RealBall { mid, rad: shr_ceil(&err, p) + 1, prec: p }
    }

    /// Division; `None` when the divisor ball contains zero.
    pub fn div(&self, other: &RealBall) -> Option<RealBall> {
        let (a, b) = self.align(other);
        let p = a.prec;
        let bl = b.mid.abs();
        if bl <= b.rad {
            return None;
        }
        let mid = (&a.mid << p as usize).div_floor(&b.mid);
        // |a/b - (a+e)/(b+f)| <= (|a| rb + |b| ra) / (|b| (|b| - rb))
        let num = (a.mid.abs() * &b.rad + &bl * &a.rad) << p as usize;
        let den = &bl * (&bl - &b.rad);
        let rad = num.div_ceil(&den) + 1;
        Some(RealBall { mid, rad, prec: p })
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.mid > self.rad
    }

    pub fn is_negative(&self) -> bool {
        -&self.mid > self.rad
    }

    pub fn overlaps(&self, other: &RealBall) -> bool {
        let (a, b) = self.align(other);
        (&a.mid - &b.mid).abs() <= &a.rad + &b.rad
    }

    /// Integers contained in the interval.
    pub fn integers(&self) -> IntegerTest {
        let lo = shr_ceil(&(&self.mid - &self.rad), self.prec);
        let hi = shr_floor(&(&self.mid + &self.rad), self.prec);
        if lo > hi {
            IntegerTest::NoInteger
        } else if lo == hi {
            IntegerTest::Unique(lo)
        } else {
            IntegerTest::Several
        }
    }

    pub fn contains_integer(&self) -> bool {
        !matches!(self.integers(), IntegerTest::NoInteger)
    }

    /// Width `2 * rad` as an f64 (diagnostics only).
    pub fn width_f64(&self) -> f64 {
        2.0 * self.rad_f64()
    }

    /// True when the radius is at most `2^-bits`.
    pub fn rad_below(&self, bits: u32) -> bool {
        if bits >= self.prec {
            return self.rad.is_zero();
        }
        self.rad <= pow2(self.prec - bits)
    }
}

/// Complex disk with center `(re + i im) * 2^-prec` and radius `rad * 2^-prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    re: BigInt,
    im: BigInt,
    rad: BigInt,
    prec: u32,
}

impl ComplexBall {
    pub fn new(re: BigInt, im: BigInt, rad: BigInt, prec: u32) -> Self {
        debug_assert!(!rad.is_negative());
        ComplexBall { re, im, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall { re: BigInt::zero(), im: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(&BigInt::one(), prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        ComplexBall { re: n << prec as usize, im: BigInt::zero(), rad: BigInt::zero(), prec }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let b = RealBall::from_rational(r, prec);
        ComplexBall { re: b.mid, im: BigInt::zero(), rad: b.rad, prec }
    }

    pub fn from_real(b: &RealBall) -> Self {
        ComplexBall { re: b.mid.clone(), im: BigInt::zero(), rad: b.rad.clone(), prec: b.prec }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        ComplexBall { re: f64_to_fixed(re, prec), im: f64_to_fixed(im, prec), rad: BigInt::zero(), prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn re_raw(&self) -> &BigInt {
        &self.re
    }

    pub fn im_raw(&self) -> &BigInt {
        &self.im
    }

    pub fn rad_raw(&self) -> &BigInt {
        &self.rad
    }

    pub fn re_f64(&self) -> f64 {
        fixed_to_f64(&self.re, self.prec)
    }

    pub fn im_f64(&self) -> f64 {
        fixed_to_f64(&self.im, self.prec)
    }

    pub fn rad_f64(&self) -> f64 {
        fixed_to_f64(&self.rad, self.prec)
    }

    pub fn re_ball(&self) -> RealBall {
        RealBall { mid: self.re.clone(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn im_ball(&self) -> RealBall {
        RealBall { mid: self.im.clone(), rad: self.rad.clone(), prec: self.prec }
    }

    /// Same center, zero radius.
    pub fn midpoint(&self) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: self.im.clone(), rad: BigInt::zero(), prec: self.prec }
    }

    pub fn with_rad(&self, rad: BigInt) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: self.im.clone(), rad, prec: self.prec }
    }

    pub fn to_prec(&self, p: u32) -> ComplexBall {
        if p >= self.prec {
            let s = (p - self.prec) as usize;
            ComplexBall { re: &self.re << s, im: &self.im << s, rad: &self.rad << s, prec: p }
        } else {
            let s = self.prec - p;
            ComplexBall {
                re: shr_floor(&self.re, s),
                im: shr_floor(&self.im, s),
                rad: shr_ceil(&self.rad, s) + 2,
                prec: p,
            }
        }
    }

    fn align(&self, other: &ComplexBall) -> (ComplexBall, ComplexBall) {
        if self.prec == other.prec {
            return (self.clone(), other.clone());
        }
        let p = self.prec.max(other.prec);
        (self.to_prec(p), other.to_prec(p))
    }

    /// `|re| + |im|`, an upper bound for the modulus of the center (scaled).
    fn l1(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }

    pub fn add(&self, other: &ComplexBall) -> ComplexBall {
        if self.prec != other.prec {
            let (a, b) = self.align(other);
            return a.add(&b);
        }
        ComplexBall {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            rad: &self.rad + &other.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &ComplexBall) -> ComplexBall {
        if self.prec != other.prec {
            let (a, b) = self.align(other);
            return a.sub(&b);
        }
        ComplexBall {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
            rad: &self.rad + &other.rad,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall { re: -&self.re, im: -&self.im, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn conj(&self) -> ComplexBall {
        ComplexBall { re: self.re.clone(), im: -&self.im, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul_int(&self, k: &BigInt) -> ComplexBall {
        ComplexBall { re: &self.re * k, im: &self.im * k, rad: &self.rad * k.abs(), prec: self.prec }
    }

    pub fn add_int(&self, k: &BigInt) -> ComplexBall {
        ComplexBall { re: &self.re + (k << self.prec as usize), ..self.clone() }
    }

    pub fn mul(&self, other: &ComplexBall) -> ComplexBall {
        if self.prec != other.prec {
            let (a, b) = self.align(other);
            return a.mul(&b);
        }
        let p = self.prec;
        let re = shr_floor(&(&self.re * &other.re - &self.im * &other.im), p);
        let im = shr_floor(&(&self.re * &other.im + &self.im * &other.re), p);
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            BigInt::from(2)
        } else {
            let err = self.l1() * &other.rad + other.l1() * &self.rad + &self.rad * &other.rad;
            shr_ceil(&err, p) + 2
        };
        ComplexBall { re, im, rad, prec: p }
    }

    pub fn sqr(&self) -> ComplexBall {
        self.mul(self)
    }

    /// Reciprocal; `None` when the ball contains zero.
    pub fn inv(&self) -> Option<ComplexBall> {
        let p = self.prec;
        let n2 = &self.re * &self.re + &self.im * &self.im;
        let l = n2.sqrt();
        if l <= self.rad {
            return None;
        }
        let s = 2 * p as usize;
        let re = (&self.re << s).div_floor(&n2);
        let im = (-(&self.im) << s).div_floor(&n2);
        let rad = if self.rad.is_zero() {
            BigInt::from(2)
        } else {
            let den = &l * (&l - &self.rad);
            (&self.rad << s).div_ceil(&den) + 2
        };
        Some(ComplexBall { re, im, rad, prec: p })
    }

    pub fn div(&self, other: &ComplexBall) -> Option<ComplexBall> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u32) -> ComplexBall {
        let mut result = ComplexBall::one(self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Exact test: does the disk contain 0?
    pub fn contains_zero(&self) -> bool {
        &self.re * &self.re + &self.im * &self.im <= &self.rad * &self.rad
    }

    pub fn overlaps(&self, other: &ComplexBall) -> bool {
        let (a, b) = self.align(other);
        let dr = &a.re - &b.re;
        let di = &a.im - &b.im;
        let r = &a.rad + &b.rad;
        &dr * &dr + &di * &di <= &r * &r
    }

    /// Does this disk lie inside `other`?
    pub fn inside(&self, other: &ComplexBall) -> bool {
        let (a, b) = self.align(other);
        if a.rad > b.rad {
            return false;
        }
        let dr = &a.re - &b.re;
        let di = &a.im - &b.im;
        let r = &b.rad - &a.rad;
        &dr * &dr + &di * &di <= &r * &r
    }

    /// Enclosure of `|z|^2`.
    pub fn abs2(&self) -> RealBall {
        let p = self.prec;
        let m2 = &self.re * &self.re + &self.im * &self.im;
        let mid = shr_floor(&m2, p);
        let err = (self.l1() * &self.rad * 2u32) + &self.rad * &self.rad;
        RealBall { mid, rad: shr_ceil(&err, p) + 1, prec: p }
    }

    /// Upper bound for `|z|` over the disk, as f64 (diagnostics and sizing).
    pub fn abs_upper_f64(&self) -> f64 {
        self.re_f64().hypot(self.im_f64()) + self.rad_f64()
    }

    /// Which integers the ball contains, counting only real integers.
    pub fn integers(&self) -> IntegerTest {
        if self.im.abs() > self.rad {
            return IntegerTest::NoInteger;
        }
        // the real interval of the disk is a superset of its real integers
        self.re_ball().integers()
    }

    /// Radius no larger than `2^-bits * max(1, |center|)`.
    pub fn rad_rel_below(&self, bits: u32) -> bool {
        let one = pow2(self.prec);
        let l1 = self.l1();
        let scale = if l1 > one { l1 } else { one };
        // |center| >= l1 / sqrt 2 so compare with l1 / 2 for a safe test
        (&self.rad << (bits as usize + 1)) <= scale
    }

    pub fn sign_im(&self) -> Option<Sign> {
        if self.im > self.rad {
            Some(Sign::Plus)
        } else if -&self.im > self.rad {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn sign_re(&self) -> Option<Sign> {
        if self.re > self.rad {
            Some(Sign::Plus)
        } else if -&self.re > self.rad {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// Ball evaluation of an integer polynomial (ascending coefficients).
pub fn eval_int_poly(coeffs: &[BigInt], z: &ComplexBall) -> ComplexBall {
    let mut acc = ComplexBall::zero(z.prec());
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add_int(c);
    }
    acc
}

/// Expands `prod (X - z_i)` with ball coefficients (ascending).
pub fn poly_from_roots(roots: &[ComplexBall], prec: u32) -> Vec<ComplexBall> {
    let mut out = vec![ComplexBall::one(prec)];
    for z in roots {
        let mut next = vec![ComplexBall::zero(prec); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(z));
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Transcendentals. Computed on exact fixed-point midpoints with explicit ulp
// error bounds, then widened by the input radius.

const GUARD: u32 = 64;

/// `atan(x)` for `|x| <= 1`, fixed point at `w` bits. Returns value and error in ulps.
fn atan_series(x: &BigInt, w: u32) -> (BigInt, BigInt) {
    let x2 = shr_floor(&(x * x), w);
    let mut power = x.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = shr_floor(&(&power * &x2), w);
        k += 1;
    }
    let err = BigInt::from((k + 2) * (k + 2) + 4);
    (sum, err)
}

/// `atan(x)` for any fixed-point `x`; error in ulps at `w` bits.
fn atan_fixed(x: &BigInt, w: u32) -> (BigInt, BigInt) {
    if x.is_negative() {
        let (v, e) = atan_fixed(&-x, w);
        return (-v, e);
    }
    let one = pow2(w);
    if x > &one {
        // atan(x) = pi/2 - atan(1/x)
        let inv = (&one << w as usize).div_floor(x);
        let (v, e) = atan_fixed(&inv, w);
        let (pi, pe) = pi_fixed(w);
        return (shr_floor(&pi, 1) - v, e + pe + 2);
    }
    // two argument halvings: atan(x) = 2 atan(x / (1 + sqrt(1 + x^2)))
    let mut y = x.clone();
    for _ in 0..2 {
        let s = ((&one << w as usize) + &y * &y).sqrt();
        y = (&y << w as usize).div_floor(&(&one + s));
    }
    let (v, e) = atan_series(&y, w);
    (v * 4, (e + 8) * 4)
}

fn atan_recip_series(n: u64, w: u32) -> (BigInt, BigInt) {
    // atan(1/n) = sum (-1)^k / ((2k+1) n^(2k+1))
    let nb = BigInt::from(n);
    let n2 = &nb * &nb;
    let mut power = pow2(w) / &nb;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = &power / &n2;
        k += 1;
    }
    (sum, BigInt::from(2 * k + 4))
}

fn pi_fixed(w: u32) -> (BigInt, BigInt) {
    let (a, ea) = atan_recip_series(5, w);
    let (b, eb) = atan_recip_series(239, w);
    (a * 16 - b * 4, ea * 16 + eb * 4)
}

fn pi_cache() -> &'static Mutex<HashMap<u32, RealBall>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, RealBall>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of pi at precision `prec` (Machin's formula).
pub fn pi(prec: u32) -> RealBall {
    if let Some(b) = pi_cache().lock().unwrap().get(&prec) {
        return b.clone();
    }
    let w = prec + GUARD;
    let (v, e) = pi_fixed(w);
    let b = RealBall { mid: v, rad: e, prec: w }.to_prec(prec);
    pi_cache().lock().unwrap().insert(prec, b.clone());
    b
}

/// Enclosure of `atan(x)` for every x in the ball.
pub fn atan(x: &RealBall) -> RealBall {
    let p = x.prec;
    let w = p + GUARD;
    let xm = &x.mid << GUARD as usize;
    let (v, e) = atan_fixed(&xm, w);
    // atan is 1-Lipschitz
    let rad = e + (&x.rad << GUARD as usize);
    RealBall { mid: v, rad, prec: w }.to_prec(p)
}

/// Ball containing a representative of `arg(z)` modulo `2 pi`, or `None`
/// when the disk is too close to the origin.
pub fn arg(z: &ComplexBall) -> Option<RealBall> {
    let p = z.prec;
    let w = p + GUARD;
    let n2 = &z.re * &z.re + &z.im * &z.im;
    let l = n2.sqrt();
    if l <= &z.rad * 2u32 {
        return None;
    }
    let x = &z.re << GUARD as usize;
    let y = &z.im << GUARD as usize;
    let ratio = |num: &BigInt, den: &BigInt| (num << w as usize).div_floor(den);
    let (pi_v, pi_e) = pi_fixed(w);
    let half_pi = shr_floor(&pi_v, 1);
    let (v, e) = if x.is_positive() && y.abs() <= x {
        let (a, ea) = atan_fixed(&ratio(&y, &x), w);
        (a, ea + 1)
    } else if x.is_negative() && y.abs() <= x.abs() {
        let (a, ea) = atan_fixed(&ratio(&y, &x), w);
        if y.is_negative() {
            (a - &pi_v, ea + &pi_e + 1)
        } else {
            (a + &pi_v, ea + &pi_e + 1)
        }
    } else if y.is_positive() {
        let (a, ea) = atan_fixed(&ratio(&x, &y), w);
        (&half_pi - a, ea + &pi_e + 2)
    } else {
        let (a, ea) = atan_fixed(&ratio(&x, &y), w);
        (-&half_pi - a, ea + &pi_e + 2)
    };
    // angular deviation over the disk is at most arcsin(r/|m|) <= 2 r / |m|
    let dev = (&z.rad << (w as usize + 1)).div_ceil(&l) + 1;
    Some(RealBall { mid: v, rad: e + dev, prec: w }.to_prec(p))
}

/// `arg(z) / (2 pi)`, i.e. the angle in turns, modulo 1.
pub fn turns(z: &ComplexBall) -> Option<RealBall> {
    let a = arg(z)?;
    let two_pi = pi(z.prec).mul_int(&BigInt::from(2));
    a.div(&two_pi)
}
