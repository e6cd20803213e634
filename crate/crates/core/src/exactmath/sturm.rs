//! Sturm sequences for exact real-root counting.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::QPoly;

/// Sturm sequence of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<QPoly>,
}

fn normalize(p: QPoly) -> QPoly {
    // positive rescaling keeps the sign pattern and tames coefficient growth
    match p.lead() {
        Some(l) => p.scale(&l.abs().recip()),
        None => p,
    }
}

impl SturmSequence {
    pub fn new(p: &QPoly) -> Self {
        let mut seq = vec![normalize(p.clone())];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(normalize(d));
        }
        while seq.len() >= 2 {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(normalize(r.scale(&-BigRational::from_integer(1.into()))));
        }
        SturmSequence { seq }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn sign(x: &BigRational) -> i8 {
        if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.seq.iter().map(|p| Self::sign(&p.eval(x))))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| p.lead().map_or(0, Self::sign)))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = p.lead().map_or(0, Self::sign);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct real roots overall.
    pub fn count_real(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }

    /// Distinct roots in the half-open interval `(a, b]`.
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    /// Distinct roots in `(a, +inf)`.
    pub fn count_above(&self, a: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at_pos_inf()
    }
}

/// Counts of real and positive roots of `p`, with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCounts {
    pub degree: usize,
    pub real: usize,
    pub positive: usize,
}

/// Exact counts of real and strictly positive roots (with multiplicity) via
/// squarefree decomposition and Sturm sequences.
pub fn real_root_counts(p: &QPoly) -> RootCounts {
    let degree = p.degree().unwrap_or(0);
    let mut real = 0;
    let mut positive = 0;
    for (f, k) in p.squarefree_decomposition() {
        // peel off the root at zero so that the count above 0 is exact
        let mut g = f.clone();
        let mut zero_root = 0;
        if g.coeff(0).is_zero() {
            g = g.divrem(&QPoly::new(vec![BigRational::zero(), BigRational::from_integer(1.into())])).0;
            zero_root = 1;
        }
        let s = SturmSequence::new(&g);
        real += (s.count_real() + zero_root) * k as usize;
        positive += s.count_above(&BigRational::zero()) * k as usize;
    }
    RootCounts { degree, real, positive }
}
