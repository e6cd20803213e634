//! Splitting field and Galois group of a Weil polynomial.
//!
//! The Galois group `G` is found inside the group `T` of block-preserving
//! permutations commuting with `x -> q/x`. For a primitive element
//! `theta = sum c_j r_j` whose `T`-images are pairwise distinct, the resolvent
//! `R_T = prod_{t in T} (X - t theta)` has integer coefficients, and the minimal
//! polynomial of `theta` is `prod_{s in G} (X - s theta)`. Candidate subgroups
//! are tried in increasing order; the first whose product is certified to be
//! an integer divisor of `R_T` vanishing nowhere else on `T theta` is `G`.

pub mod galois;
pub mod numfield;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactmath::ball::{eval_int_poly, poly_from_roots, turns};
use crate::exactmath::{ComplexBall, IntPoly, IntegerTest, RealBall};
use crate::weil::WeilPolynomial;
use crate::{Error, Options};

pub use galois::{GaloisGroup, Perm};
pub use numfield::{FieldElement, NumberField};

use galois::{ambient_group, factor_blocks, subgroups_containing, transitive_on_blocks};

/// Precision of the angle balls used to screen multiplicative relations.
const ANGLE_PREC: u32 = 192;
/// Largest field degree for which exact root coordinates are produced.
pub const ROOT_COORD_LIMIT: usize = 16;

/// Outcome of a root-of-unity test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootOfUnity {
    No,
    Yes(u64),
}

/// The splitting field `Q(theta)` with its Galois group acting on the roots.
#[derive(Debug)]
pub struct SplittingField {
    weil: WeilPolynomial,
    min_poly: IntPoly,
    theta_terms: Vec<(usize, i64)>,
    theta: ComplexBall,
    group: GaloisGroup,
    field: NumberField,
    orders: Vec<u64>,
    angles: OnceLock<Result<Vec<RealBall>, Error>>,
    coords: OnceLock<Result<Vec<FieldElement>, Error>>,
}

fn ambiguous(what: &str) -> Error {
    Error::Ambiguous(what.to_string())
}

/// Positive integer vectors of length `m`, by total then lexicographically.
fn coefficient_vectors(m: usize, limit: usize) -> Vec<Vec<i64>> {
    fn rec(m: usize, total: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if cur.len() + 1 == m {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let rest = (m - cur.len() - 1) as i64;
        for v in 1..=total - rest {
            cur.push(v);
            rec(m, total - v, cur, out, limit);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut total = m as i64;
    while out.len() < limit {
        rec(m, total, &mut Vec::new(), &mut out, limit);
        total += 1;
    }
    out
}

fn theta_image(roots: &[ComplexBall], terms: &[(usize, i64)], perm: &[usize], prec: u32) -> ComplexBall {
    let mut acc = ComplexBall::zero(prec);
    for &(j, c) in terms {
        acc = acc.add(&roots[perm[j]].mul_int(&BigInt::from(c)));
    }
    acc
}

fn pairwise_disjoint(balls: &[ComplexBall]) -> bool {
    (0..balls.len()).all(|i| (i + 1..balls.len()).all(|j| !balls[i].overlaps(&balls[j])))
}

fn round_all(coeffs: &[ComplexBall]) -> Result<Option<Vec<BigInt>>, Error> {
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        match c.integers() {
            IntegerTest::Unique(v) => out.push(v),
            IntegerTest::NoInteger => return Ok(None),
            IntegerTest::Several => return Err(ambiguous("coefficient ball too wide")),
        }
    }
    Ok(Some(out))
}

fn log2_upper(b: &ComplexBall) -> u32 {
    (b.abs_upper_f64() + 1.0).log2().ceil() as u32 + 1
}

struct Found {
    min_poly: IntPoly,
    theta_terms: Vec<(usize, i64)>,
    theta: ComplexBall,
    group: Vec<Perm>,
}

impl SplittingField {
    /// Builds the splitting field, failing with `DegreeCapExceeded` when
    /// `[F:Q] > degree_cap`.
    pub fn build(w: &WeilPolynomial, opts: &Options) -> Result<Self, Error> {
        let ambient = ambient_group(w)?;
        let blocks = factor_blocks(w);
        let inv = w.involution().to_vec();
        let candidates =
            subgroups_containing(&ambient, &inv, opts.degree_cap, |h| transitive_on_blocks(&ambient, h, &blocks));
        let n = w.num_roots();
        let free: Vec<usize> = (0..n)
            .filter(|&i| {
                if w.is_real_root(i) {
                    !w.is_rational_root(i) && w.roots()[i].re_f64() > 0.0
                } else {
                    inv[i] > i
                }
            })
            .collect();
        let mut prec = 128u32;
        let found = loop {
            match Self::attempt(w, &ambient, &candidates, &free, prec) {
                Ok(Some(f)) => break f,
                Ok(None) => return Err(Error::DegreeCapExceeded(opts.degree_cap)),
                Err(Error::Ambiguous(m)) => {
                    if prec >= w.max_precision() {
                        return Err(Error::PrecisionExhausted(m));
                    }
                    prec = (prec * 2).min(w.max_precision());
                }
                Err(e) => return Err(e),
            }
        };
        let group = GaloisGroup::from_perms(found.group)?;
        group.verify(&inv)?;
        let field = NumberField::new(&found.min_poly);
        let orders = numfield::possible_orders(group.order() as u64);
        Ok(SplittingField {
            weil: w.clone(),
            min_poly: found.min_poly,
            theta_terms: found.theta_terms,
            theta: found.theta,
            group,
            field,
            orders,
            angles: OnceLock::new(),
            coords: OnceLock::new(),
        })
    }

    fn attempt(
        w: &WeilPolynomial,
        ambient: &[Perm],
        candidates: &[Vec<usize>],
        free: &[usize],
        prec: u32,
    ) -> Result<Option<Found>, Error> {
        let roots = w.roots_at(prec)?;
        let p = roots[0].prec();
        let mut chosen = None;
        for c in coefficient_vectors(free.len(), 64) {
            let terms: Vec<(usize, i64)> = free.iter().copied().zip(c).collect();
            let images: Vec<ComplexBall> = ambient.iter().map(|t| theta_image(&roots, &terms, t, p)).collect();
            if pairwise_disjoint(&images) {
                chosen = Some((terms, images));
                break;
            }
        }
        let Some((terms, images)) = chosen else { return Err(ambiguous("no separating primitive element")) };
        let bits = images.iter().map(log2_upper).max().unwrap_or(1) * ambient.len() as u32 + 64;
        if bits > p {
            if bits > w.max_precision() {
                return Err(Error::PrecisionExhausted(format!("resolvent needs {bits} bits")));
            }
            return Self::attempt(w, ambient, candidates, free, bits.next_power_of_two().min(w.max_precision()));
        }
        let resolvent = match round_all(&poly_from_roots(&images, p))? {
            Some(c) => IntPoly::new(c),
            None => return Err(Error::InternalInconsistency("resolvent is not integral".into())),
        };
        for h in candidates {
            let sub: Vec<ComplexBall> = h.iter().map(|&i| images[i].clone()).collect();
            // cheap screen on the trace before expanding the whole product
            let trace = sub.iter().fold(ComplexBall::zero(p), |a, b| a.add(b));
            if matches!(trace.integers(), IntegerTest::NoInteger) {
                continue;
            }
            let Some(coeffs) = round_all(&poly_from_roots(&sub, p))? else { continue };
            let cand = IntPoly::new(coeffs);
            if resolvent.div_exact(&cand).is_none() {
                continue;
            }
            for (t, img) in images.iter().enumerate() {
                if h.binary_search(&t).is_err() && eval_int_poly(cand.coeffs(), img).contains_zero() {
                    return Err(ambiguous("resolvent divisor vanishes outside the subgroup"));
                }
            }
            let id = ambient.iter().position(|t| t.iter().enumerate().all(|(i, &j)| i == j)).unwrap();
            return Ok(Some(Found {
                min_poly: cand,
                theta_terms: terms,
                theta: images[id].clone(),
                group: h.iter().map(|&i| ambient[i].clone()).collect(),
            }));
        }
        Ok(None)
    }

    pub fn weil(&self) -> &WeilPolynomial {
        &self.weil
    }

    /// Minimal polynomial of the primitive element.
    pub fn min_poly(&self) -> &IntPoly {
        &self.min_poly
    }

    /// `[F:Q]`, equal to the order of the Galois group.
    pub fn degree(&self) -> usize {
        self.group.order()
    }

    /// The primitive element as `sum c * root[index]` terms.
    pub fn theta_terms(&self) -> &[(usize, i64)] {
        &self.theta_terms
    }

    pub fn theta(&self) -> &ComplexBall {
        &self.theta
    }

    pub fn group(&self) -> &GaloisGroup {
        &self.group
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    fn conjugate_thetas(&self, prec: u32) -> Result<Vec<ComplexBall>, Error> {
        let roots = self.weil.roots_at(prec)?;
        let p = roots[0].prec();
        Ok(self.group.perms().iter().map(|s| theta_image(&roots, &self.theta_terms, s, p)).collect())
    }

    /// Coordinates of every distinct root in the power basis of `theta`,
    /// verified exactly.
    pub fn root_coords(&self) -> Result<&[FieldElement], Error> {
        self.coords.get_or_init(|| self.compute_root_coords()).as_ref().map(|v| v.as_slice()).map_err(Clone::clone)
    }

    fn compute_root_coords(&self) -> Result<Vec<FieldElement>, Error> {
        let n = self.degree();
        if n > ROOT_COORD_LIMIT {
            return Err(Error::Undetermined(format!(
                "exact root coordinates are only produced up to degree {ROOT_COORD_LIMIT}, field has degree {n}"
            )));
        }
        let roots_n = self.weil.num_roots();
        let mu = &self.min_poly;
        let mut prec = 128 + n as u32 * log2_upper(&self.theta) * 2;
        // Q_i(X) = sum_s r_{s(i)} mu(X) / (X - s theta) lies in Z[X] and Q_i(theta) = r_i mu'(theta)
        let qs: Vec<IntPoly> = loop {
            if prec > self.weil.max_precision() {
                return Err(Error::PrecisionExhausted("root coordinates".into()));
            }
            let thetas = self.conjugate_thetas(prec)?;
            let roots = self.weil.roots_at(prec)?;
            let p = thetas[0].prec();
            let quotients: Vec<Vec<ComplexBall>> = thetas
                .iter()
                .map(|a| {
                    let mut b = vec![ComplexBall::zero(p); n];
                    let mut carry = ComplexBall::zero(p);
                    for k in (1..=n).rev() {
                        carry = carry.mul(a).add_int(&mu.coeff(k));
                        b[k - 1] = carry.clone();
                    }
                    b
                })
                .collect();
            let mut out = Vec::with_capacity(roots_n);
            let mut ok = true;
            for i in 0..roots_n {
                let mut coeffs = vec![ComplexBall::zero(p); n];
                for (s, quot) in self.group.perms().iter().zip(&quotients) {
                    let r = roots[s[i]].to_prec(p);
                    for k in 0..n {
                        coeffs[k] = coeffs[k].add(&quot[k].mul(&r));
                    }
                }
                match round_all(&coeffs) {
                    Ok(Some(c)) => out.push(IntPoly::new(c)),
                    Ok(None) => return Err(Error::InternalInconsistency("root coordinate numerator".into())),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                break out;
            }
            prec *= 2;
        };
        let k = &self.field;
        let dmu = k.from_poly(&mu.derivative().to_q());
        let dmu_inv = k.inv(&dmu).ok_or_else(|| Error::InternalInconsistency("minimal polynomial not separable".into()))?;
        let check_prec = 96;
        let theta = self.conjugate_thetas(check_prec)?.remove(0);
        let roots = self.weil.roots_at(check_prec)?;
        let mut coords = Vec::with_capacity(roots_n);
        for (i, qi) in qs.iter().enumerate() {
            let v = k.mul(&k.from_poly(&qi.to_q()), &dmu_inv);
            // exact: P(v) = 0 in the field
            let mut acc = k.from_int(&BigInt::zero());
            for c in self.weil.coeffs().iter().rev() {
                acc = k.add(&k.mul(&acc, &v), &k.from_int(c));
            }
            if !k.is_zero(&acc) {
                return Err(Error::InternalInconsistency("root coordinates do not satisfy P".into()));
            }
            if !eval_rational_poly(v.coords(), &theta).overlaps(&roots[i]) {
                return Err(Error::InternalInconsistency("root coordinates evaluate to the wrong root".into()));
            }
            coords.push(v);
        }
        Ok(coords)
    }

    /// `prod r_i^{a_i} * q^b` as an exact field element.
    pub fn eval_exact(&self, a: &[i64], b: i64) -> Result<FieldElement, Error> {
        let coords = self.root_coords()?;
        let k = &self.field;
        let qe = k.from_int(self.weil.q());
        let mut acc = k.pow(&qe, &BigInt::from(b)).expect("q is invertible");
        for (v, &e) in coords.iter().zip(a) {
            if e != 0 {
                let f = k.pow(v, &BigInt::from(e)).ok_or_else(|| Error::InternalInconsistency("zero root".into()))?;
                acc = k.mul(&acc, &f);
            }
        }
        Ok(acc)
    }

    /// Kronecker test on an exact element.
    pub fn is_root_of_unity(&self, x: &FieldElement) -> RootOfUnity {
        match self.field.root_of_unity_order(x) {
            Some(k) => RootOfUnity::Yes(k),
            None => RootOfUnity::No,
        }
    }

    fn angles(&self) -> Result<&[RealBall], Error> {
        self.angles
            .get_or_init(|| {
                let roots = self.weil.roots_at(ANGLE_PREC)?;
                roots.iter().map(|r| turns(r).ok_or_else(|| ambiguous("root too close to zero"))).collect()
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    /// Order of `alpha = prod r_i^{a_i} * q^b` if it is a root of unity.
    ///
    /// Decided exactly: `alpha = beta / q^e` with `beta` a product of roots, and
    /// `alpha` (whose conjugates all have modulus one when its weight is zero)
    /// is a root of unity iff it is an algebraic integer, i.e. iff the integer
    /// polynomial `prod_s (X - s beta)` has its `j`-th coefficient divisible by
    /// `q^{e j}`. The order is read off the angle, whose denominator `k`
    /// satisfies `phi(k) | [F:Q]`.
    pub fn unit_order(&self, a: &[i64], b: i64) -> Result<Option<u64>, Error> {
        let weight: i64 = a.iter().sum::<i64>() + 2 * b;
        if weight != 0 {
            return Ok(None);
        }
        if a.iter().all(|&x| x == 0) {
            return Ok(Some(1));
        }
        let angles = self.angles()?;
        let mut t = RealBall::from_i64(0, angles[0].prec());
        for (ang, &e) in angles.iter().zip(a) {
            if e != 0 {
                t = t.add(&ang.mul_int(&BigInt::from(e)));
            }
        }
        let Some(order) = self.orders.iter().copied().find(|&k| t.mul_int(&BigInt::from(k)).contains_integer()) else {
            return Ok(None);
        };
        let inv = self.weil.involution();
        let mut exps = vec![0u32; a.len()];
        let mut e: i64 = -b;
        for (i, &x) in a.iter().enumerate() {
            if x > 0 {
                exps[i] += x as u32;
            } else if x < 0 {
                exps[inv[i]] += (-x) as u32;
                e -= x;
            }
        }
        let n = self.degree();
        let q = self.weil.q();
        let logq = q.bits() as u32;
        let s: u32 = exps.iter().sum();
        let mut prec = n as u32 * (e as u32 * logq + 2) + 64 + 4 * (s + 1).ilog2();
        loop {
            if prec > self.weil.max_precision() {
                return Err(Error::PrecisionExhausted("unit test".into()));
            }
            let roots = self.weil.roots_at(prec)?;
            let p = roots[0].prec();
            let conj: Vec<ComplexBall> = self
                .group
                .perms()
                .iter()
                .map(|sg| {
                    let mut acc = ComplexBall::one(p);
                    for (i, &x) in exps.iter().enumerate() {
                        if x > 0 {
                            acc = acc.mul(&roots[sg[i]].pow(x));
                        }
                    }
                    acc
                })
                .collect();
            let coeffs = poly_from_roots(&conj, p);
            let mut integral = true;
            let mut ambiguous_coeff = false;
            let mut qpow = BigInt::one();
            let qe = num_traits::pow(q.clone(), e as usize);
            for j in 1..=n {
                qpow *= &qe;
                match coeffs[n - j].integers() {
                    IntegerTest::Unique(v) => {
                        if !(v % &qpow).is_zero() {
                            integral = false;
                        }
                    }
                    IntegerTest::Several => ambiguous_coeff = true,
                    IntegerTest::NoInteger => {
                        return Err(Error::InternalInconsistency("conjugate product is not integral".into()))
                    }
                }
            }
            if ambiguous_coeff {
                prec *= 2;
                continue;
            }
            return Ok(integral.then_some(order));
        }
    }

    /// Exact test of `prod r_i^{a_i} * q^b == 1`.
    pub fn is_one(&self, a: &[i64], b: i64) -> Result<bool, Error> {
        Ok(self.unit_order(a, b)? == Some(1))
    }
}

fn eval_rational_poly(coords: &[BigRational], z: &ComplexBall) -> ComplexBall {
    let p = z.prec();
    let mut acc = ComplexBall::zero(p);
    for c in coords.iter().rev() {
        acc = acc.mul(z).add(&ComplexBall::from_rational(c, p));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(q: i64, c: &[i64]) -> SplittingField {
        let w = WeilPolynomial::from_i64(q, c).unwrap();
        SplittingField::build(&w, &Options::default()).unwrap()
    }

    #[test]
    fn quadratic_examples() {
        let s = build(5, &[5, -1, 1]);
        assert_eq!(s.degree(), 2);
        assert_eq!(s.group().perms(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(s.min_poly().degree(), Some(2));
        let s = build(9, &[9, 6, 1]);
        assert_eq!(s.degree(), 1);
        assert_eq!(s.root_coords().unwrap()[0].coords(), &[BigRational::from_integer((-3).into())]);
    }

    #[test]
    fn klein_four() {
        let s = build(5, &[25, -5, 10, -1, 1]);
        assert_eq!(s.degree(), 4);
        assert!(s.group().perms().iter().all(|p| {
            let sq = galois::compose(p, p);
            sq == galois::identity(4)
        }));
        assert_eq!(s.root_coords().unwrap().len(), 4);
    }

    #[test]
    fn exact_evaluation() {
        let s = build(3, &[3, 0, 1]);
        let k = s.field();
        assert_eq!(s.eval_exact(&[1, 1], 0).unwrap(), k.from_int(&3.into()));
        assert!(k.is_one(&s.eval_exact(&[4, 0], -2).unwrap()));
        assert_eq!(s.is_root_of_unity(&s.eval_exact(&[1, -1], 0).unwrap()), RootOfUnity::Yes(2));
        assert_eq!(s.is_root_of_unity(&k.one()), RootOfUnity::Yes(1));
        let s = build(5, &[5, -1, 1]);
        let x = s.eval_exact(&[1, -1], 0).unwrap();
        assert_eq!(s.field().trace(&x), BigRational::new((-9).into(), 5.into()));
        assert_eq!(s.is_root_of_unity(&x), RootOfUnity::No);
    }

    #[test]
    fn unit_orders_match_exact_arithmetic() {
        let s = build(3, &[3, 0, 1]);
        assert_eq!(s.unit_order(&[1, -1], 0).unwrap(), Some(2));
        assert_eq!(s.unit_order(&[2, 0], -1).unwrap(), Some(2));
        assert_eq!(s.unit_order(&[4, 0], -2).unwrap(), Some(1));
        assert_eq!(s.unit_order(&[1, 0], 0).unwrap(), None);
        let s = build(5, &[5, -1, 1]);
        assert_eq!(s.unit_order(&[1, -1], 0).unwrap(), None);
        assert_eq!(s.unit_order(&[3, -3], 0).unwrap(), None);
        let s = build(9, &[9, 6, 1]);
        assert_eq!(s.unit_order(&[2], -1).unwrap(), Some(1));
        assert_eq!(s.unit_order(&[1], 0).unwrap(), None);
    }

    #[test]
    fn sextic_group() {
        let s = build(2, &[8, 4, 2, 1, 1, 1, 1]);
        assert!(s.degree() <= 48);
        assert_eq!(s.degree() % 6, 0);
        assert!(matches!(s.root_coords(), Err(Error::Undetermined(_))));
        // pi * pibar = q for each pair
        assert_eq!(s.unit_order(&[1, 1, 0, 0, 0, 0], -1).unwrap(), Some(1));
        assert_eq!(s.unit_order(&[1, -1, 0, 0, 0, 0], 0).unwrap(), None);
    }

    #[test]
    fn dihedral_quartic_coordinates() {
        let s = build(5, &[25, 5, 3, 1, 1]);
        assert_eq!(s.degree(), 8);
        let coords = s.root_coords().unwrap();
        assert_eq!(coords.len(), 4);
        assert!(s.field().is_one(&s.eval_exact(&[1, 1, 0, 0], -1).unwrap()));
    }
}
