//! LLL reduction and integer-relation candidates among angles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::{pi, RealBall};
use super::intmat::hnf_rows;

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_q(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi = to_q(&b[i]);
        let mut v = bi.clone();
        for j in 0..i {
            let m = if norms[j] == BigRational::zero() { BigRational::zero() } else { dot(&bi, &star[j]) / &norms[j] };
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= &m * y;
            }
            mu[i][j] = m;
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (mu, norms)
}

fn round_half_up(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// LLL-reduces the rows of `basis` (assumed linearly independent), `delta = 3/4`.
pub fn lll(basis: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut b = basis.to_vec();
    let n = b.len();
    if n < 2 {
        return b;
    }
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let (mut mu, mut norms) = gram_schmidt(&b);
    let mut k = 1;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        if guard > 1_000_000 {
            break;
        }
        for j in (0..k).rev() {
            let q = round_half_up(&mu[k][j]);
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
                let qr = BigRational::from_integer(q);
                let (head, tail) = mu.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]).take(j) {
                    *x -= &qr * y;
                }
                mu[k][j] -= &qr;
            }
        }
        let lhs = norms[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            let gs = gram_schmidt(&b);
            mu = gs.0;
            norms = gs.1;
            k = (k - 1).max(1);
        }
    }
    b
}

fn accuracy_bits(b: &RealBall) -> u32 {
    let r = b.rad_raw();
    let rb = if r.is_zero() { 0 } else { r.bits() as u32 };
    b.prec().saturating_sub(rb)
}

/// Short relation vectors found by lattice reduction: integer vectors `a`
/// (not bounded) with `sum_j a_j angles[r][j]` close to a multiple of `2 pi`
/// in every row. Unverified candidates.
pub fn relation_lattice_candidates(angles: &[Vec<RealBall>]) -> Vec<Vec<BigInt>> {
    let rows = angles.len();
    let Some(n) = angles.first().map(|r| r.len()) else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let acc = angles.iter().flatten().map(accuracy_bits).min().unwrap_or(0);
    let s = acc.saturating_sub(4).min(160);
    if s < 16 {
        return Vec::new();
    }
    let prec = angles[0][0].prec();
    let scale = |b: &RealBall| -> BigInt {
        let p = b.to_prec(prec.max(s));
        let shift = p.prec() - s;
        (p.mid_raw() + (BigInt::one() << shift as usize >> 1usize)) >> shift as usize
    };
    let two_pi = scale(&pi(prec.max(s) + 8).mul_int(&BigInt::from(2)));
    let dim = n + rows;
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    for j in 0..n {
        let mut v = vec![BigInt::zero(); dim];
        v[j] = BigInt::one();
        for r in 0..rows {
            v[n + r] = scale(&angles[r][j]);
        }
        basis.push(v);
    }
    for r in 0..rows {
        let mut v = vec![BigInt::zero(); dim];
        v[n + r] = two_pi.clone();
        basis.push(v);
    }
    let reduced = lll(&basis);
    let mut out = Vec::new();
    for v in reduced {
        let head = &v[..n];
        if head.iter().all(|x| x.is_zero()) {
            continue;
        }
        let l1: BigInt = head.iter().map(|x| x.abs()).sum();
        let limit = (&l1 + 1) * BigInt::from(4 * (n + 1) as u64);
        if v[n..].iter().all(|t| t.abs() <= limit) {
            out.push(head.to_vec());
        }
    }
    out
}

/// Does `sum_j a_j angles[r][j]` meet `2 pi Z` for every row?
pub fn is_angle_relation(angles: &[Vec<RealBall>], a: &[BigInt]) -> bool {
    angles.iter().all(|row| {
        let prec = row.first().map_or(64, |b| b.prec());
        let mut s = RealBall::from_i64(0, prec);
        for (b, k) in row.iter().zip(a) {
            if !k.is_zero() {
                s = s.add(&b.mul_int(k));
            }
        }
        let two_pi = pi(prec).mul_int(&BigInt::from(2));
        match s.div(&two_pi) {
            Some(t) => t.contains_integer(),
            None => true,
        }
    })
}

/// Enumerates the points of the lattice spanned by `basis` inside the box
/// `|x_i| <= bound`, stopping after `cap` points.
pub fn lattice_points_in_box(basis: &[Vec<BigInt>], bound: i64, cap: usize) -> Vec<Vec<BigInt>> {
    let h = hnf_rows(basis);
    let Some(n) = basis.first().map(|v| v.len()) else { return Vec::new() };
    let pivots: Vec<usize> = h.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
    let bound_b = BigInt::from(bound);
    let mut out = Vec::new();
    let mut partial = vec![BigInt::zero(); n];
    fn rec(
        h: &[Vec<BigInt>],
        pivots: &[usize],
        k: usize,
        partial: &mut Vec<BigInt>,
        bound: &BigInt,
        out: &mut Vec<Vec<BigInt>>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if k == h.len() {
            if partial.iter().all(|x| x.abs() <= *bound) {
                out.push(partial.clone());
            }
            return;
        }
        let pc = pivots[k];
        // coordinates before the next pivot are final once row k is chosen
        let pv = &h[k][pc];
        let base = &partial[pc];
        // need |base + c pv| <= bound
        let lo = (-bound - base).div_ceil(pv);
        let hi = (bound - base).div_floor(pv);
        let mut c = lo;
        while c <= hi {
            for (x, y) in partial.iter_mut().zip(&h[k]) {
                *x += &c * y;
            }
            let end = pivots.get(k + 1).copied().unwrap_or(partial.len());
            if partial[pc..end].iter().all(|x| x.abs() <= *bound) {
                rec(h, pivots, k + 1, partial, bound, out, cap);
            }
            for (x, y) in partial.iter_mut().zip(&h[k]) {
                *x -= &c * y;
            }
            c += 1;
        }
    }
    rec(&h, &pivots, 0, &mut partial, &bound_b, &mut out, cap);
    out
}

/// Integer vectors `a` with `|a|_inf <= bound` such that `sum a_j angles[r][j]`
/// is numerically a multiple of `2 pi` in every row `r`.
///
/// Candidates come from lattice reduction, so the list is neither guaranteed
/// complete nor exact; callers verify each vector. The zero vector is omitted.
pub fn relation_candidates(angles: &[Vec<RealBall>], bound: i64) -> Vec<Vec<BigInt>> {
    let basis = relation_lattice_candidates(angles);
    if basis.is_empty() {
        return Vec::new();
    }
    let mut pts: Vec<Vec<BigInt>> = lattice_points_in_box(&basis, bound, 1_000_000)
        .into_iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .filter(|v| is_angle_relation(angles, v))
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::ball::f64_to_fixed;
    use num_traits::ToPrimitive;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lll_reduces_classic_example() {
        let b = vec![bi(&[1, 1, 1]), bi(&[-1, 0, 2]), bi(&[3, 5, 6])];
        let r = lll(&b);
        let norms: Vec<i64> = r.iter().map(|v| v.iter().map(|x| (x * x).to_i64().unwrap()).sum()).collect();
        assert!(norms[0] <= 3);
        // determinant preserved up to sign
        let m0 = crate::exactmath::intmat::IntMatrix::from_rows(&b).det().abs();
        let m1 = crate::exactmath::intmat::IntMatrix::from_rows(&r).det().abs();
        assert_eq!(m0, m1);
    }

    #[test]
    fn quarter_turn_relations() {
        let p = 128;
        let half_pi = pi(p).mul_int(&BigInt::one()).div(&RealBall::from_i64(2, p)).unwrap();
        let angles = vec![vec![half_pi.clone(), half_pi.neg()]];
        let c = relation_candidates(&angles, 4);
        assert!(c.contains(&bi(&[1, 1])));
        assert!(c.contains(&bi(&[2, -2])));
        assert!(!c.contains(&bi(&[1, 0])));
        assert!(c.iter().all(|v| v.iter().all(|x| x.abs() <= BigInt::from(4))));
    }

    #[test]
    fn generic_angles_have_no_small_relation() {
        let p = 128;
        let a = RealBall::new(f64_to_fixed(0.9131, p), BigInt::from(1u64 << 40), p);
        let b = RealBall::new(f64_to_fixed(2.2360679, p), BigInt::from(1u64 << 40), p);
        assert!(relation_candidates(&[vec![a, b]], 1).is_empty());
    }

    #[test]
    fn zero_angles_give_whole_box() {
        let p = 64;
        let z = RealBall::from_i64(0, p);
        let c = relation_candidates(&[vec![z.clone(), z]], 1);
        assert_eq!(c.len(), 8);
    }
}
