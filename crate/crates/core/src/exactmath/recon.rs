//! Recognizing rationals inside balls.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::ComplexBall;
use crate::Error;

/// Simplest fraction (smallest denominator, then smallest |numerator|) in the
/// closed interval `[lo, hi]`.
pub fn simplest_in(lo: &BigRational, hi: &BigRational) -> BigRational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_in(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl + BigRational::one() <= *hi {
        return lo.ceil();
    }
    // lo and hi share the integer part a; recurse on reciprocals of the fractional parts
    let a = lo.floor();
    let lo_f = lo - &a;
    let hi_f = hi - &a;
    let inner = simplest_in(&hi_f.recip(), &lo_f.recip());
    a + inner.recip()
}

/// Neighbours of `a/b` in the Farey sequence of order `bound` (`b <= bound`).
fn farey_neighbours(x: &BigRational, bound: &BigInt) -> (BigRational, BigRational) {
    let a = x.numer();
    let b = x.denom();
    // right neighbour c/d: b c - a d = 1; left neighbour: a d - b c = 1
    let eg = a.extended_gcd(b);
    // a * eg.x + b * eg.y = 1
    let pick = |d0: BigInt| -> BigInt {
        let d0 = d0.mod_floor(b);
        let d0 = if d0.is_zero() { b.clone() } else { d0 };
        let k = (bound - &d0).div_floor(b);
        d0 + k * b
    };
    // right: -a d == 1 mod b => d == -x mod b
    let d_r = pick(-&eg.x);
    let c_r = (BigInt::one() + a * &d_r) / b;
    let d_l = pick(eg.x.clone());
    let c_l = (a * &d_l - BigInt::one()) / b;
    (BigRational::new(c_l, d_l), BigRational::new(c_r, d_r))
}

/// Recovers the unique rational with denominator at most `bound` in the real
/// interval of `ball`.
pub fn rational_reconstruct(ball: &ComplexBall, bound: &BigInt) -> Result<BigRational, Error> {
    if !ball.im_ball().contains_zero() {
        return Err(Error::Ambiguous("ball does not meet the real axis".into()));
    }
    let re = ball.re_ball();
    let (lo, hi) = (re.lower(), re.upper());
    let s = simplest_in(&lo, &hi);
    if s.denom() > bound {
        return Err(Error::Ambiguous("no rational with bounded denominator in the ball".into()));
    }
    let (left, right) = farey_neighbours(&s, bound);
    if (lo <= left && left <= hi) || (lo <= right && right <= hi) {
        return Err(Error::Ambiguous("several rationals with bounded denominator in the ball".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ball::RealBall;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn real_ball(x: &BigRational, rad_bits: u32, prec: u32) -> ComplexBall {
        let b = RealBall::from_rational(x, prec);
        ComplexBall::from_real(&b).with_rad(BigInt::one() << (prec - rad_bits) as usize)
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_in(&r(3, 10), &r(4, 10)), r(1, 3));
        assert_eq!(simplest_in(&r(-4, 10), &r(-3, 10)), r(-1, 3));
        assert_eq!(simplest_in(&r(5, 2), &r(7, 2)), r(3, 1));
    }

    #[test]
    fn neighbours_in_farey_sequence() {
        let (l, rt) = farey_neighbours(&r(1, 3), &BigInt::from(5));
        assert_eq!(l, r(1, 4));
        assert_eq!(rt, r(2, 5));
        let (l, rt) = farey_neighbours(&r(2, 1), &BigInt::from(1));
        assert_eq!((l, rt), (r(1, 1), r(3, 1)));
    }

    #[test]
    fn third_recovered() {
        let b = real_ball(&r(1, 3), 30, 64);
        assert_eq!(rational_reconstruct(&b, &BigInt::from(10)).unwrap(), r(1, 3));
    }

    #[test]
    fn wide_ball_ambiguous() {
        let b = real_ball(&r(1, 2), 1, 64).with_rad(BigInt::from(4u64) * (BigInt::one() << 64usize) / 10);
        assert!(matches!(rational_reconstruct(&b, &BigInt::from(10)), Err(Error::Ambiguous(_))));
    }

    #[test]
    fn integer_with_unit_bound() {
        let b = real_ball(&r(2, 1), 30, 64);
        assert_eq!(rational_reconstruct(&b, &BigInt::from(1)).unwrap(), r(2, 1));
    }
}
