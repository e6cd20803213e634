//! Integer matrices: Smith and Hermite normal forms, kernels, determinants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Matrix with `cols` columns and no rows, or rows of the given width.
    pub fn with_shape(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn neg_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }

    /// Replaces rows (a, b) by (x a + y b, -b/g a + a/g b) style unimodular combination.
    fn combine_rows(&mut self, a: usize, b: usize, m: [&BigInt; 4]) {
        for j in 0..self.cols {
            let ra = self.data[a * self.cols + j].clone();
            let rb = self.data[b * self.cols + j].clone();
            self.data[a * self.cols + j] = m[0] * &ra + m[1] * &rb;
            self.data[b * self.cols + j] = m[2] * &ra + m[3] * &rb;
        }
    }

    fn combine_cols(&mut self, a: usize, b: usize, m: [&BigInt; 4]) {
        for i in 0..self.rows {
            let ca = self.data[i * self.cols + a].clone();
            let cb = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = m[0] * &ca + m[1] * &cb;
            self.data[i * self.cols + b] = m[2] * &ca + m[3] * &cb;
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// Rank over Q.
    pub fn rank(&self) -> usize {
        hnf_rows(&self.to_rows()).len()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Smith normal form: returns `(U, S, V)` with `U * M * V = S`, `U` and `V`
/// unimodular, `S` diagonal with non-negative entries and `d_1 | d_2 | ...`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (r, c) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !s[(i, j)].is_zero()
                    && best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut changed = false;
            // clear column t below the pivot
            for i in t + 1..r {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(i, t)].clone();
                if b.is_multiple_of(&a) {
                    let k = -(&b / &a);
                    s.add_row(i, t, &k);
                    u.add_row(i, t, &k);
                } else {
                    let eg = a.extended_gcd(&b);
                    let (x, y, g) = (eg.x, eg.y, eg.gcd);
                    let ag = &a / &g;
                    let bg = -(&b / &g);
                    s.combine_rows(t, i, [&x, &y, &bg, &ag]);
                    u.combine_rows(t, i, [&x, &y, &bg, &ag]);
                }
                changed = true;
            }
            // clear row t right of the pivot
            for j in t + 1..c {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let a = s[(t, t)].clone();
                let b = s[(t, j)].clone();
                if b.is_multiple_of(&a) {
                    let k = -(&b / &a);
                    s.add_col(j, t, &k);
                    v.add_col(j, t, &k);
                } else {
                    let eg = a.extended_gcd(&b);
                    let (x, y, g) = (eg.x, eg.y, eg.gcd);
                    let ag = &a / &g;
                    let bg = -(&b / &g);
                    s.combine_cols(t, j, [&x, &y, &bg, &ag]);
                    v.combine_cols(t, j, [&x, &y, &bg, &ag]);
                }
                changed = true;
            }
            if changed {
                continue;
            }
            // divisibility: pivot must divide every entry of the remaining block
            let piv = s[(t, t)].clone();
            let bad = (t + 1..r).flat_map(|i| (t + 1..c).map(move |j| (i, j))).find(|&(i, j)| !s[(i, j)].is_multiple_of(&piv));
            match bad {
                Some((i, _)) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.neg_row(t);
            u.neg_row(t);
        }
        t += 1;
    }
    (u, s, v)
}

/// Diagonal invariant factors of `m` (including zeros up to `min(rows, cols)`).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (_, s, _) = smith_normal_form(m);
    (0..m.rows.min(m.cols)).map(|i| s[(i, i)].clone()).collect()
}

/// Hermite normal form of the lattice spanned by `vectors`.
///
/// Output rows are in echelon form with strictly increasing pivot columns,
/// positive pivots, and entries above each pivot reduced into `[0, pivot)`.
/// Read as columns this is the lower-triangular form. Zero rows are dropped.
pub fn hnf_rows(vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(n) = vectors.first().map(|v| v.len()) else { return Vec::new() };
    let mut a: Vec<Vec<BigInt>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while col < n && !a.is_empty() {
        // gcd-combine all rows on this column into a single pivot row
        loop {
            let mut nz: Vec<usize> = (0..a.len()).filter(|&i| !a[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()).then(i.cmp(&j)));
            let p = nz[0];
            let pv = a[p][col].clone();
            for &i in &nz[1..] {
                let k = a[i][col].div_floor(&pv);
                let prow = a[p].clone();
                for (x, y) in a[i].iter_mut().zip(&prow) {
                    *x -= &k * y;
                }
            }
        }
        if let Some(p) = (0..a.len()).find(|&i| !a[i][col].is_zero()) {
            let mut row = a.remove(p);
            if row[col].is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            out.push(row);
        }
        a.retain(|v| v.iter().any(|x| !x.is_zero()));
        col += 1;
    }
    // reduce above pivots
    for k in 0..out.len() {
        let pc = out[k].iter().position(|x| !x.is_zero()).unwrap();
        let pv = out[k][pc].clone();
        for i in 0..k {
            let q = out[i][pc].div_floor(&pv);
            if !q.is_zero() {
                let prow = out[k].clone();
                for (x, y) in out[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

/// HNF-reduced basis of `{ x in Z^cols : M x = 0 }`.
pub fn kernel_lattice(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (r, c) = (m.rows, m.cols);
    // rows of [M^T | I]; reduce on the first r columns, the rows whose M-part
    // vanishes span the kernel
    let aug: Vec<Vec<BigInt>> = (0..c)
        .map(|j| {
            let mut row: Vec<BigInt> = (0..r).map(|i| m[(i, j)].clone()).collect();
            row.extend((0..c).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let h = hnf_rows(&aug);
    let ker: Vec<Vec<BigInt>> = h
        .into_iter()
        .filter(|row| row[..r].iter().all(|x| x.is_zero()))
        .map(|row| row[r..].to_vec())
        .collect();
    hnf_rows(&ker)
}

/// Index of the lattice spanned by `basis` in its saturation (1 when saturated).
pub fn saturation_index(basis: &[Vec<BigInt>]) -> BigInt {
    if basis.is_empty() {
        return BigInt::one();
    }
    let m = IntMatrix::from_rows(basis);
    invariant_factors(&m).into_iter().fold(BigInt::one(), |acc, d| acc * d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_small_examples() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]);
        let (u, s, v) = smith_normal_form(&m);
        assert_eq!(s, IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(u.mul(&m).mul(&v), s);
        assert!(u.det().abs().is_one() && v.det().abs().is_one());
        let (_, s, _) = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(s, IntMatrix::identity(2));
        let (_, s, _) = smith_normal_form(&IntMatrix::zeros(3, 2));
        assert!(s.is_zero());
    }

    #[test]
    fn kernel_of_one_row() {
        let m = IntMatrix::from_i64_rows(&[vec![1, 1, -2]]);
        let k = kernel_lattice(&m);
        assert_eq!(k, vec![bi(&[1, 1, 1]), bi(&[0, 2, 1])]);
        let z = IntMatrix::zeros(1, 2);
        assert_eq!(kernel_lattice(&z), vec![bi(&[1, 0]), bi(&[0, 1])]);
        let inv = IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]);
        assert!(kernel_lattice(&inv).is_empty());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hnf_rows(&[bi(&[4, -2]), bi(&[2, 2])]);
        let b = hnf_rows(&[bi(&[6, 0]), bi(&[2, 2]), bi(&[4, -2])]);
        assert_eq!(a, b);
        assert_eq!(a, vec![bi(&[2, 2]), bi(&[0, 6])]);
    }

    #[test]
    fn bareiss_det() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.det(), BigInt::from(-8));
        let m = IntMatrix::from_i64_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        assert_eq!(m.det(), BigInt::from(-2));
    }

    #[test]
    fn saturation_of_scaled_vector() {
        assert_eq!(saturation_index(&[bi(&[4, -2])]), BigInt::from(2));
        assert_eq!(saturation_index(&[bi(&[1, 1, 1]), bi(&[0, 2, 1])]), BigInt::one());
    }
}
