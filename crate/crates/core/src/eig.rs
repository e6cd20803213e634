//! The enriched eigenvalue group, its realization kernel and the Frobenius rank.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::exactmath::ball::arg;
use crate::exactmath::intmat::{invariant_factors, saturation_index};
use crate::exactmath::lll::relation_lattice_candidates;
use crate::exactmath::{hnf_rows, kernel_lattice, IntMatrix, RealBall};
use crate::splitfield::{Perm, SplittingField};
use crate::weil::{SimplicityProbe, WeilPolynomial};
use crate::{Error, Options};

/// Free abelian group on the distinct eigenvalues and `[q]` modulo
/// `[pi] + [q/pi] = [q]`, in a canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigGroup {
    reps: Vec<usize>,
    real: Option<usize>,
    relation_matrix: IntMatrix,
    invariant_factors: Vec<BigInt>,
    weights: Vec<i64>,
    symbol_coords: Vec<Vec<i64>>,
    q_coords: Vec<i64>,
    labels: Vec<String>,
}

/// An element of [`EigGroup`] in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EigElement {
    pub coords: Vec<i64>,
    pub weight: i64,
}

/// Kernel of the realization map, found by exhaustive search in a box plus
/// lattice-reduction candidates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    /// HNF basis in Eig coordinates.
    pub basis: Vec<Vec<i64>>,
    pub rank: usize,
    pub search_bound: i64,
    /// Every kernel vector with sup-norm at most `search_bound` lies in the span.
    pub complete_within_bound: bool,
    /// Index of the lattice in its saturation.
    pub saturation_index: BigInt,
}

/// Frobenius rank `r = rank(Gamma) - 1` with the torsion relations found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusRank {
    pub r: i64,
    pub rank_gamma: usize,
    /// Generators used: pair representatives, then `sqrt(q)` (a real root) or `q`.
    pub generators: Vec<String>,
    /// HNF basis of the exponent vectors giving roots of unity.
    pub torsion_basis: Vec<Vec<i64>>,
}

/// A generator in terms of root exponents `a`, `q`-exponent `b` and weight.
#[derive(Clone, Debug)]
struct Generator {
    a: Vec<i64>,
    b: i64,
    weight: i64,
}

fn vec_bigint(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn vec_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("lattice entry fits in i64")).collect()
}

impl EigGroup {
    /// Presents the group and picks the basis: pair representatives in root
    /// order, then `[q]`, or the real root when there is exactly one.
    pub fn build(w: &WeilPolynomial) -> Result<Self, Error> {
        let n = w.num_roots();
        let inv = w.involution();
        let mut rows = Vec::new();
        for i in 0..n {
            if inv[i] >= i {
                let mut r = vec![0i64; n + 1];
                r[i] += 1;
                r[inv[i]] += 1;
                r[n] = -1;
                rows.push(r);
            }
        }
        let relation_matrix = IntMatrix::from_i64_rows(&rows);
        // the group is Z^{n+1} / rowspace; torsion appears as invariant factors > 1
        let factors = invariant_factors(&relation_matrix);
        let reps = w.pair_representatives();
        let reals = w.real_roots();
        if factors.iter().any(|d| d > &BigInt::from(1)) || reals.len() > 1 {
            return Err(Error::TorsionDetected(format!(
                "relation invariant factors {:?}; real roots {:?}: [r1] - [r2] has order 2",
                factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                reals
            )));
        }
        let real = reals.first().copied();
        let k = reps.len() + 1;
        let mut symbol_coords = vec![vec![0i64; k]; n];
        let mut q_coords = vec![0i64; k];
        q_coords[k - 1] = if real.is_some() { 2 } else { 1 };
        for (j, &r) in reps.iter().enumerate() {
            symbol_coords[r][j] = 1;
            let mut c = q_coords.clone();
            c[j] -= 1;
            symbol_coords[inv[r]] = c;
        }
        if let Some(r) = real {
            symbol_coords[r][k - 1] = 1;
        }
        let mut weights = vec![1i64; k];
        weights[k - 1] = if real.is_some() { 1 } else { 2 };
        let mut labels: Vec<String> = (1..=reps.len()).map(|j| format!("[pi_{j}]")).collect();
        labels.push(if real.is_some() { format!("[pi_{}]", reps.len() + 1) } else { "[q]".into() });
        Ok(EigGroup { reps, real, relation_matrix, invariant_factors: factors, weights, symbol_coords, q_coords, labels })
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relation_matrix
    }

    /// Smith invariant factors of the relation matrix (all 1 when free).
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.iter().all(|d| d == &BigInt::from(1))
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Root indices of the basis generators other than `[q]`.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn real_generator(&self) -> Option<usize> {
        self.real
    }

    /// Coordinates of the symbol of distinct root `i`.
    pub fn symbol(&self, i: usize) -> EigElement {
        self.element(self.symbol_coords[i].clone())
    }

    pub fn q(&self) -> EigElement {
        self.element(self.q_coords.clone())
    }

    pub fn zero(&self) -> EigElement {
        self.element(vec![0; self.rank()])
    }

    pub fn element(&self, coords: Vec<i64>) -> EigElement {
        let weight = coords.iter().zip(&self.weights).map(|(c, w)| c * w).sum();
        EigElement { coords, weight }
    }

    pub fn add(&self, a: &EigElement, b: &EigElement) -> EigElement {
        self.element(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, a: &EigElement, k: i64) -> EigElement {
        self.element(a.coords.iter().map(|x| x * k).collect())
    }

    pub fn sub(&self, a: &EigElement, b: &EigElement) -> EigElement {
        self.add(a, &self.scale(b, -1))
    }

    /// Root exponents and `q`-exponent realizing an element.
    pub fn realization_exponents(&self, x: &EigElement, n_roots: usize) -> (Vec<i64>, i64) {
        let mut a = vec![0i64; n_roots];
        for (j, &r) in self.reps.iter().enumerate() {
            a[r] = x.coords[j];
        }
        let last = x.coords[self.rank() - 1];
        match self.real {
            Some(r) => {
                a[r] = last;
                (a, 0)
            }
            None => (a, last),
        }
    }

    /// Action of a root permutation: permutes the symbols, fixes `[q]`.
    pub fn galois_action(&self, sigma: &Perm, x: &EigElement) -> EigElement {
        let mut out = self.zero();
        for (j, &r) in self.reps.iter().enumerate() {
            if x.coords[j] != 0 {
                out = self.add(&out, &self.scale(&self.symbol(sigma[r]), x.coords[j]));
            }
        }
        let last = x.coords[self.rank() - 1];
        let last_img = match self.real {
            Some(r) => self.symbol(sigma[r]),
            None => self.q(),
        };
        self.add(&out, &self.scale(&last_img, last))
    }

    fn generators(&self, n_roots: usize) -> Vec<Generator> {
        (0..self.rank())
            .map(|j| {
                let mut c = vec![0i64; self.rank()];
                c[j] = 1;
                let (a, b) = self.realization_exponents(&self.element(c), n_roots);
                Generator { a, b, weight: self.weights[j] }
            })
            .collect()
    }
}

fn combine(gens: &[Generator], c: &[i64], n_roots: usize) -> (Vec<i64>, i64) {
    let mut a = vec![0i64; n_roots];
    let mut b = 0;
    for (g, &k) in gens.iter().zip(c) {
        if k != 0 {
            for (x, y) in a.iter_mut().zip(&g.a) {
                *x += k * y;
            }
            b += k * g.b;
        }
    }
    (a, b)
}

/// Angle (radians) of the realization of each generator.
fn generator_angles(s: &SplittingField, gens: &[Generator], prec: u32) -> Result<Vec<RealBall>, Error> {
    let roots = s.weil().roots_at(prec)?;
    let root_angles: Vec<RealBall> = roots
        .iter()
        .map(|r| arg(r).ok_or_else(|| Error::Ambiguous("root too close to zero".into())))
        .collect::<Result<_, _>>()?;
    let p = root_angles[0].prec();
    Ok(gens
        .iter()
        .map(|g| {
            let mut acc = RealBall::from_i64(0, p);
            for (ang, &k) in root_angles.iter().zip(&g.a) {
                if k != 0 {
                    acc = acc.add(&ang.mul_int(&BigInt::from(k)));
                }
            }
            acc
        })
        .collect())
}

/// Exponent vectors over `gens` whose realization is a root of unity, with
/// their orders: all weight-zero vectors with sup-norm `<= bound`, plus
/// verified lattice-reduction candidates.
fn torsion_search(s: &SplittingField, gens: &[Generator], bound: i64) -> Result<Vec<(Vec<i64>, u64)>, Error> {
    let k = gens.len();
    let n_roots = s.weil().num_roots();
    let mut found: Vec<(Vec<i64>, u64)> = Vec::new();
    let test = |c: &[i64]| -> Result<Option<u64>, Error> {
        let (a, b) = combine(gens, c, n_roots);
        s.unit_order(&a, b)
    };
    let last_w = gens[k - 1].weight;
    let free = k - 1;
    let side = (2 * bound + 1) as usize;
    let total = side.pow(free as u32);
    for idx in 0..total {
        let mut c = Vec::with_capacity(k);
        let mut t = idx;
        for _ in 0..free {
            c.push((t % side) as i64 - bound);
            t /= side;
        }
        let partial: i64 = c.iter().zip(gens).map(|(x, g)| x * g.weight).sum();
        if partial % last_w != 0 {
            continue;
        }
        let last = -partial / last_w;
        if last.abs() > bound {
            continue;
        }
        c.push(last);
        // v and -v behave alike; test the one whose first nonzero entry is positive
        match c.iter().find(|&&x| x != 0) {
            None => continue,
            Some(&x) if x < 0 => continue,
            _ => {}
        }
        if let Some(order) = test(&c)? {
            let neg: Vec<i64> = c.iter().map(|x| -x).collect();
            found.push((c, order));
            found.push((neg, order));
        }
    }
    // lattice reduction on the weight-zero sublattice
    let wrow = IntMatrix::from_i64_rows(&[gens.iter().map(|g| g.weight).collect()]);
    let zero_basis: Vec<Vec<i64>> = kernel_lattice(&wrow).iter().map(|v| vec_i64(v)).collect();
    if !zero_basis.is_empty() {
        let angles = generator_angles(s, gens, 192)?;
        let p = angles[0].prec();
        let row: Vec<RealBall> = zero_basis
            .iter()
            .map(|b| {
                b.iter().zip(&angles).fold(RealBall::from_i64(0, p), |acc, (&x, ang)| acc.add(&ang.mul_int(&BigInt::from(x))))
            })
            .collect();
        for y in relation_lattice_candidates(&[row]) {
            let mut c = vec![0i64; k];
            let mut fits = true;
            for (yi, b) in y.iter().zip(&zero_basis) {
                let Some(yi) = yi.to_i64() else {
                    fits = false;
                    break;
                };
                for (x, bj) in c.iter_mut().zip(b) {
                    *x += yi * bj;
                }
            }
            if fits && c.iter().any(|&x| x != 0) {
                if let Some(order) = test(&c)? {
                    found.push((c, order));
                }
            }
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

fn hnf_i64(vectors: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let v: Vec<Vec<BigInt>> = vectors.iter().map(|x| vec_bigint(x)).collect();
    hnf_rows(&v).iter().map(|r| vec_i64(r)).collect()
}

/// `ker rho`: exact multiplicative relations among the eigenvalues.
pub fn realization_kernel(s: &SplittingField, e: &EigGroup, bound: i64) -> Result<RelationLattice, Error> {
    let gens = e.generators(s.weil().num_roots());
    let torsion = torsion_search(s, &gens, bound)?;
    // a torsion element of order k contributes k times itself
    let kernel: Vec<Vec<i64>> =
        torsion.iter().map(|(c, order)| c.iter().map(|x| x * *order as i64).collect()).collect();
    let basis = hnf_i64(&kernel);
    let sat = saturation_index(&basis.iter().map(|b| vec_bigint(b)).collect::<Vec<_>>());
    Ok(RelationLattice {
        rank: basis.len(),
        basis,
        search_bound: bound,
        complete_within_bound: true,
        saturation_index: sat,
    })
}

/// Frobenius rank from the eigenvalues directly, independent of [`EigGroup`]:
/// the group generated by the roots equals, up to torsion, the group
/// generated by the pair representatives and `sqrt(q)` (if a real root
/// exists) or `q`.
pub fn frobenius_rank(s: &SplittingField, bound: i64) -> Result<FrobeniusRank, Error> {
    let w = s.weil();
    let n = w.num_roots();
    let reps = w.pair_representatives();
    let mut gens: Vec<Generator> = reps
        .iter()
        .map(|&r| {
            let mut a = vec![0; n];
            a[r] = 1;
            Generator { a, b: 0, weight: 1 }
        })
        .collect();
    let mut names: Vec<String> = (1..=reps.len()).map(|j| format!("pi_{j}")).collect();
    match w.real_roots().first() {
        Some(&r) => {
            let mut a = vec![0; n];
            a[r] = 1;
            gens.push(Generator { a, b: 0, weight: 1 });
            names.push(format!("pi_{}", reps.len() + 1));
        }
        None => {
            gens.push(Generator { a: vec![0; n], b: 1, weight: 2 });
            names.push("q".into());
        }
    }
    let torsion = torsion_search(s, &gens, bound)?;
    let vectors: Vec<Vec<i64>> = torsion.into_iter().map(|(c, _)| c).collect();
    let basis = hnf_i64(&vectors);
    let rank_gamma = gens.len() - basis.len();
    Ok(FrobeniusRank { r: rank_gamma as i64 - 1, rank_gamma, generators: names, torsion_basis: basis })
}

/// Bundle of the numeric invariants of one Weil polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantsReport {
    pub g: usize,
    pub m: u32,
    pub center_degree: usize,
    pub simple: bool,
    pub probe: Result<SimplicityProbe, Error>,
    pub eig_rank: Result<usize, Error>,
    pub eig_free: Result<bool, Error>,
    pub frobenius_rank: Result<i64, Error>,
    pub kernel_rank: Result<usize, Error>,
    pub kernel_saturation_index: Result<BigInt, Error>,
    pub search_bound: i64,
    /// `0 <= r <= g/m` (with `g/m` possibly a half-integer).
    pub rank_bounds_hold: Option<bool>,
    /// `rank ker rho + r + 1 = rank Eig`.
    pub rank_identity_holds: Option<bool>,
    /// `rank ker rho = g/m - r`, checked for simple inputs without real roots.
    pub kernel_identity_holds: Option<bool>,
    /// A Weil polynomial cannot certify that all geometric endomorphisms are
    /// defined over the base field; results that need it carry this flag.
    pub geometric_endomorphism_caveat: bool,
}

/// Everything derived from one Weil polynomial, computed once.
#[derive(Debug)]
pub struct Analysis {
    pub weil: WeilPolynomial,
    pub field: Result<SplittingField, Error>,
    pub eig: Result<EigGroup, Error>,
    pub kernel: Result<RelationLattice, Error>,
    pub frobenius: Result<FrobeniusRank, Error>,
}

fn undetermined(e: &Error) -> Error {
    match e {
        Error::DegreeCapExceeded(_) | Error::PrecisionExhausted(_) => {
            Error::Undetermined(format!("splitting field unavailable: {e}"))
        }
        other => other.clone(),
    }
}

impl Analysis {
    pub fn new(w: &WeilPolynomial, opts: &Options) -> Self {
        let field = SplittingField::build(w, opts);
        let eig = EigGroup::build(w);
        let kernel = match (&field, &eig) {
            (Ok(s), Ok(e)) => realization_kernel(s, e, opts.search_bound),
            (Err(err), _) => Err(undetermined(err)),
            (_, Err(err)) => Err(err.clone()),
        };
        let frobenius = match &field {
            Ok(s) => frobenius_rank(s, opts.search_bound),
            Err(err) => Err(undetermined(err)),
        };
        Analysis { weil: w.clone(), field, eig, kernel, frobenius }
    }

    pub fn field(&self) -> Result<&SplittingField, Error> {
        self.field.as_ref().map_err(undetermined)
    }

    pub fn eig(&self) -> Result<&EigGroup, Error> {
        self.eig.as_ref().map_err(Clone::clone)
    }

    pub fn r(&self) -> Result<i64, Error> {
        self.frobenius.as_ref().map(|f| f.r).map_err(Clone::clone)
    }

    pub fn invariants_report(&self, opts: &Options) -> InvariantsReport {
        let w = &self.weil;
        let mc = w.multiplicity_and_center();
        let probe = if mc.simple { w.geometric_simplicity_probe(opts.probe_bound, opts) } else { Err(Error::NotSimple) };
        let g = w.g();
        let r = self.r();
        let ker = self.kernel.as_ref().map(|k| k.rank).map_err(Clone::clone);
        let eig_rank = self.eig().map(|e| e.rank());
        // g/m compared through r*m against g
        let rank_bounds_hold = match (&r, mc.simple) {
            (Ok(r), true) => Some(*r >= 0 && *r * mc.m as i64 <= g as i64),
            (Ok(r), false) => Some(*r >= 0 && *r <= g as i64),
            _ => None,
        };
        let rank_identity_holds = match (&r, &ker, &eig_rank) {
            (Ok(r), Ok(k), Ok(e)) => Some(*k as i64 + r + 1 == *e as i64),
            _ => None,
        };
        let kernel_identity_holds = match (&r, &ker) {
            (Ok(r), Ok(k)) if mc.simple && !w.has_real_roots() => {
                Some(*k as i64 == (g / mc.m as usize) as i64 - r)
            }
            _ => None,
        };
        InvariantsReport {
            g,
            m: mc.m,
            center_degree: mc.center_degree,
            simple: mc.simple,
            probe,
            eig_rank,
            eig_free: self.eig().map(|e| e.is_free()),
            frobenius_rank: r,
            kernel_rank: ker,
            kernel_saturation_index: self.kernel.as_ref().map(|k| k.saturation_index.clone()).map_err(Clone::clone),
            search_bound: opts.search_bound,
            rank_bounds_hold,
            rank_identity_holds,
            kernel_identity_holds,
            geometric_endomorphism_caveat: true,
        }
    }
}

/// Does `rho(x) = q^n` hold exactly?
pub fn realizes_q_power(s: &SplittingField, e: &EigGroup, x: &EigElement, n: i64) -> Result<bool, Error> {
    let shifted = e.sub(x, &e.scale(&e.q(), n));
    let (a, b) = e.realization_exponents(&shifted, s.weil().num_roots());
    s.is_one(&a, b)
}

impl EigElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| *x == 0)
    }
}

/// Convenience for tests and reports: `Z`-rank of a set of vectors.
pub fn lattice_rank(vectors: &[Vec<i64>]) -> usize {
    hnf_i64(vectors).len()
}
