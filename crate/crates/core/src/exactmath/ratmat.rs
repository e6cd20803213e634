//! Dense rational matrices.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::QPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { n_rows: rows, n_cols: cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        RatMatrix { n_rows: r, n_cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn diag(entries: &[BigRational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn diag_i64(entries: &[i64]) -> Self {
        Self::diag(&entries.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> usize {
        self.n_rows
    }

    pub fn cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.n_rows).map(|i| self.data[i * self.n_cols..(i + 1) * self.n_cols].to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.n_rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        RatMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        RatMatrix { n_rows: self.n_rows, n_cols: self.n_cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n_cols, other.n_rows);
        let mut out = Self::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.n_cols {
                    let v = a * &other[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.n_rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&i| !a[(i, col)].is_zero())?;
            a.swap_rows(col, p);
            inv.swap_rows(col, p);
            let pv = a[(col, col)].recip();
            a.scale_row(col, &pv);
            inv.scale_row(col, &pv);
            for i in 0..n {
                if i != col && !a[(i, col)].is_zero() {
                    let k = -a[(i, col)].clone();
                    a.add_row(i, col, &k);
                    inv.add_row(i, col, &k);
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square());
        let n = self.n_rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[(i, col)].is_zero()) else {
                return BigRational::zero();
            };
            if p != col {
                a.swap_rows(col, p);
                det = -det;
            }
            let pv = a[(col, col)].clone();
            det *= &pv;
            for i in col + 1..n {
                if !a[(i, col)].is_zero() {
                    let k = -(&a[(i, col)] / &pv);
                    a.add_row(i, col, &k);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n_cols {
            self.data.swap(a * self.n_cols + j, b * self.n_cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, k: &BigRational) {
        for j in 0..self.n_cols {
            let v = &self.data[r * self.n_cols + j] * k;
            self.data[r * self.n_cols + j] = v;
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigRational) {
        for j in 0..self.n_cols {
            let v = &self.data[src * self.n_cols + j] * k;
            self.data[dst * self.n_cols + j] += v;
        }
    }

    /// Characteristic polynomial `det(X I - self)` via reduction to upper
    /// Hessenberg form by similarity, followed by the Hessenberg recurrence.
    pub fn charpoly(&self) -> QPoly {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.n_rows;
        let mut h = self.clone();
        for col in 0..n.saturating_sub(2) {
            let Some(p) = (col + 1..n).find(|&i| !h[(i, col)].is_zero()) else { continue };
            if p != col + 1 {
                h.swap_rows(p, col + 1);
                // matching column swap keeps the similarity
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + col + 1);
                }
            }
            let pv = h[(col + 1, col)].clone();
            for i in col + 2..n {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let k = &h[(i, col)] / &pv;
                // row_i -= k row_{col+1}; then col_{col+1} += k col_i
                let neg = -k.clone();
                h.add_row(i, col + 1, &neg);
                for r in 0..n {
                    let v = &h[(r, i)] * &k;
                    h[(r, col + 1)] += v;
                }
            }
        }
        // p_k(X) = (X - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
        let mut polys: Vec<QPoly> = vec![QPoly::one()];
        for k in 0..n {
            let x_minus = QPoly::new(vec![-h[(k, k)].clone(), BigRational::one()]);
            let mut pk = x_minus.mul(&polys[k]);
            let mut prod = BigRational::one();
            for i in (0..k).rev() {
                prod *= &h[(i + 1, i)];
                if prod.is_zero() {
                    break;
                }
                let c = &h[(i, k)] * &prod;
                pk = pk.sub(&polys[i].scale(&c));
            }
            polys.push(pk);
        }
        polys.pop().unwrap()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.n_cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.to_rows() {
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", s.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::poly::IntPoly;

    #[test]
    fn charpoly_examples() {
        let cp = RatMatrix::diag_i64(&[2, 3]).charpoly();
        assert_eq!(cp.to_int_exact().unwrap(), IntPoly::from_i64s(&[6, -5, 1]));
        let cp = RatMatrix::identity(3).charpoly();
        assert_eq!(cp.to_int_exact().unwrap(), IntPoly::from_i64s(&[-1, 1]).pow(3));
        let rot = RatMatrix::from_i64_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(rot.charpoly().to_int_exact().unwrap(), IntPoly::from_i64s(&[1, 0, 1]));
    }

    #[test]
    fn charpoly_dense_matches_det() {
        let m = RatMatrix::from_i64_rows(&[vec![0, 2, 1, 0], vec![0, 0, 3, 1], vec![1, 0, 0, 2], vec![5, 1, 0, 1]]);
        let cp = m.charpoly();
        // compare against det(x I - m) at a few integer points
        for x in -3..=3 {
            let xi = RatMatrix::identity(4).scale(&BigRational::from_integer(x.into()));
            let d = xi.add(&m.scale(&-BigRational::one())).det();
            assert_eq!(cp.eval(&BigRational::from_integer(x.into())), d);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RatMatrix::from_i64_rows(&[vec![2, 1], vec![1, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        assert!(RatMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }
}
