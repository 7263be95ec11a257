//! Small dense complex square matrices for modular data.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix expected");
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.n.max(1)).map(<[Complex64]>::to_vec).collect()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(i, j)].conj())
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖M M† − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.n))
    }

    pub fn symmetry_defect(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }

    /// If every row and column has exactly one entry within `tol` of 1 and
    /// all others within `tol` of 0, the permutation `i -> j`.
    pub fn as_permutation(&self, tol: f64) -> Option<Vec<usize>> {
        let mut perm = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut hit = None;
            for j in 0..self.n {
                let z = self[(i, j)];
                if (z - Complex64::new(1.0, 0.0)).norm() <= tol {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(j);
                } else if z.norm() > tol {
                    return None;
                }
            }
            perm.push(hit?);
        }
        let mut seen = vec![false; self.n];
        for &j in &perm {
            if std::mem::replace(&mut seen[j], true) {
                return None;
            }
        }
        Some(perm)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for t in 0..n {
                let a = self[(i, t)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(t, j)];
                }
            }
        }
        out
    }
}
