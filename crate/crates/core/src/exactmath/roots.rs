//! Certified isolation of the complex roots of a squarefree integer polynomial.
//!
//! Floating-point Aberth iterations give starting points, Weierstrass
//! iterations in fixed point sharpen them, and the disks
//! `D(z_i, n |W_i|)` with `W_i = P(z_i) / (lc * prod_{j != i} (z_i - z_j))`
//! certify the result: their union contains every root, and when they are
//! pairwise disjoint each holds exactly one.

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ball::{eval_int_poly, ComplexBall};
use super::poly::IntPoly;
use crate::Error;

fn aberth_f64(p: &IntPoly) -> Vec<Complex64> {
    let n = p.degree().unwrap_or(0);
    let lc = p.lead().unwrap().to_f64().unwrap_or(f64::MAX);
    let c: Vec<f64> = p.coeffs().iter().map(|a| a.to_f64().unwrap_or(f64::MAX) / lc).collect();
    // Fujiwara-style radius
    let mut r: f64 = 0.0;
    for k in 1..=n {
        r = r.max(c[n - k].abs().powf(1.0 / k as f64));
    }
    let r = 2.0 * r.max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::zero();
        let mut d = Complex64::zero();
        for a in c.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v == Complex64::zero() {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != k {
                    s += (z[k] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

fn weierstrass_corrections(p: &IntPoly, z: &[ComplexBall]) -> Option<Vec<ComplexBall>> {
    let lc = p.lead().unwrap();
    let mut out = Vec::with_capacity(z.len());
    for (i, zi) in z.iter().enumerate() {
        let num = eval_int_poly(p.coeffs(), zi);
        let mut den = ComplexBall::from_int(lc, zi.prec());
        for (j, zj) in z.iter().enumerate() {
            if i != j {
                den = den.mul(&zi.sub(zj));
            }
        }
        out.push(num.div(&den)?);
    }
    Some(out)
}

/// Attempts certification at the current points. Returns the certified disks.
fn certify(p: &IntPoly, z: &[ComplexBall], precision: u32) -> Option<Vec<ComplexBall>> {
    let n = z.len() as u64;
    let w = weierstrass_corrections(p, z)?;
    let mut disks = Vec::with_capacity(z.len());
    for (zi, wi) in z.iter().zip(&w) {
        // |W_i| <= sqrt(re^2 + im^2) + rad; use l1 norm as an upper bound
        let bound = wi.re_raw().abs() + wi.im_raw().abs() + wi.rad_raw();
        let r = bound * n + 1;
        let d = zi.with_rad(r);
        if !d.rad_rel_below(precision) {
            return None;
        }
        disks.push(d);
    }
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            if disks[i].overlaps(&disks[j]) {
                return None;
            }
        }
    }
    Some(disks)
}

/// Isolates all roots of the squarefree polynomial `p`.
///
/// Each returned ball contains exactly one root, the balls are pairwise
/// disjoint, and each radius is at most `2^-precision * max(1, |mid|)`.
pub fn isolate_roots(p: &IntPoly, precision: u32, ceiling: u32) -> Result<Vec<ComplexBall>, Error> {
    let n = p.degree().ok_or(Error::Malformed("zero polynomial".into()))?;
    if n == 0 {
        return Err(Error::Malformed("constant polynomial has no roots".into()));
    }
    let start = aberth_f64(p);
    let wp = (precision + 32).max(64);
    let seeds: Vec<ComplexBall> = start.iter().map(|c| ComplexBall::from_f64(c.re, c.im, wp)).collect();
    refine_roots(p, &seeds, precision, ceiling)
}

/// Refines approximate roots of `p` (one per root) and certifies them.
pub fn refine_roots(
    p: &IntPoly,
    approx: &[ComplexBall],
    precision: u32,
    ceiling: u32,
) -> Result<Vec<ComplexBall>, Error> {
    let n = p.degree().unwrap_or(0);
    assert_eq!(approx.len(), n, "one approximation per root");
    if precision > ceiling {
        return Err(Error::PrecisionExhausted(format!("{precision} bits requested, ceiling {ceiling}")));
    }
    let mut wp = (precision + 32).max(64).max(approx.first().map_or(0, |a| a.prec())).min(ceiling.max(64));
    let mut z: Vec<ComplexBall> = approx.iter().map(|a| a.to_prec(wp).midpoint()).collect();
    loop {
        // Weierstrass sweeps on exact midpoints
        let mut stalled = 0;
        let mut last_size = i64::MAX;
        for _ in 0..200 {
            let Some(w) = weierstrass_corrections(p, &z) else { break };
            let mut size = i64::MIN;
            for (zi, wi) in z.iter_mut().zip(&w) {
                *zi = zi.sub(&wi.midpoint()).midpoint();
                let m = wi.re_raw().abs().max(wi.im_raw().abs());
                size = size.max(m.bits() as i64);
            }
            if size <= 2 {
                break;
            }
            if size >= last_size {
                stalled += 1;
                if stalled > 3 {
                    break;
                }
            }
            last_size = size;
        }
        if let Some(d) = certify(p, &z, precision) {
            return Ok(d);
        }
        if wp >= ceiling {
            return Err(Error::PrecisionExhausted(format!(
                "root isolation of a degree-{n} polynomial at {wp} bits"
            )));
        }
        wp = (wp * 2).min(ceiling);
        z = z.iter().map(|c| c.to_prec(wp).midpoint()).collect();
    }
}

/// Convenience check used by tests and callers: is `b` a disk containing a
/// root of `p` according to a direct ball evaluation?
pub fn ball_may_be_root(p: &IntPoly, b: &ComplexBall) -> bool {
    eval_int_poly(p.coeffs(), b).contains_zero()
}

/// Re-expands `prod (X - mid_i)` and compares against the coefficients of `p / lc`.
pub fn reexpansion_matches(p: &IntPoly, roots: &[ComplexBall]) -> bool {
    let prec = roots.first().map_or(64, |r| r.prec());
    let coeffs = super::ball::poly_from_roots(roots, prec);
    let lc = ComplexBall::from_int(p.lead().unwrap(), prec);
    p.coeffs().iter().zip(&coeffs).all(|(a, c)| {
        let scaled = c.mul(&lc);
        scaled.sub(&ComplexBall::from_int(a, prec)).contains_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn roots_of_x2_plus_1() {
        let r = isolate_roots(&ip(&[1, 0, 1]), 60, 4096).unwrap();
        assert_eq!(r.len(), 2);
        let mut ims: Vec<f64> = r.iter().map(|b| b.im_f64()).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-15 && (ims[1] - 1.0).abs() < 1e-15);
        assert!(r.iter().all(|b| b.re_f64().abs() < 1e-15));
    }

    #[test]
    fn roots_of_x2_minus_x_plus_5() {
        let r = isolate_roots(&ip(&[5, -1, 1]), 100, 4096).unwrap();
        let s19 = 19f64.sqrt() / 2.0;
        for b in &r {
            assert!((b.re_f64() - 0.5).abs() < 1e-14);
            assert!((b.im_f64().abs() - s19).abs() < 1e-14);
            assert!(b.rad_rel_below(100));
        }
        assert!(!r[0].overlaps(&r[1]));
    }

    #[test]
    fn cube_roots_of_unity_on_circle() {
        let r = isolate_roots(&ip(&[-1, 0, 0, 1]), 80, 4096).unwrap();
        assert_eq!(r.len(), 3);
        for b in &r {
            assert!((b.abs2().mid_f64() - 1.0).abs() < 1e-20);
        }
        assert!(reexpansion_matches(&ip(&[-1, 0, 0, 1]), &r));
    }

    #[test]
    fn clustered_roots_need_more_bits() {
        // (X - 1000)(X - 1001) * (X^2 + 1)
        let p = ip(&[-1000, 1]).mul(&ip(&[-1001, 1])).mul(&ip(&[1, 0, 1]));
        let r = isolate_roots(&p, 200, 4096).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|b| b.rad_rel_below(200)));
    }

    #[test]
    fn exhausted_ceiling_is_reported() {
        let p = ip(&[5, -1, 1]);
        assert!(matches!(isolate_roots(&p, 300, 128), Err(Error::PrecisionExhausted(_))));
    }
}
