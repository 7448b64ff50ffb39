use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::scalar::{Scalar, DEFAULT_TOL};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Result of Gauss-Jordan elimination on the leading `pivot_cols` columns.
struct Echelon<S> {
    reduced: Matrix<S>,
    /// `(row, col)` of every pivot, in the order they were chosen.
    pivots: Vec<(usize, usize)>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics when the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors, all of length `dim`.
    pub fn from_columns(dim: usize, columns: &[Vec<S>]) -> Self {
        Matrix::from_fn(dim, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() && S::EXACT {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(k, j)].clone();
                    let cur = std::mem::replace(&mut out[(i, j)], S::zero());
                    out[(i, j)] = cur + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn add(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), other.shape(), "add shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.shape(), other.shape(), "sub shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn neg(&self) -> Matrix<S> {
        self.map(|a| -a.clone())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Matrix<S>) -> Matrix<S> {
        Matrix::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| match (i < self.rows, j < self.cols) {
            (true, true) => self[(i, j)].clone(),
            (false, false) => other[(i - self.rows, j - self.cols)].clone(),
            _ => S::zero(),
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<S> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix<S> {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    fn echelon(&self, pivot_cols: usize, tol: f64) -> Echelon<S> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut used = vec![false; pivot_cols];
        let mut threshold = 0.0_f64;
        let mut r = 0;
        let mut next_col = 0;
        while r < a.rows {
            // Exact fields take the first usable column; approximate fields use
            // full pivoting over the remaining block.
            let choice = if S::EXACT {
                let mut found = None;
                while next_col < pivot_cols && found.is_none() {
                    if let Some(i) = (r..a.rows).find(|&i| !a[(i, next_col)].is_zero()) {
                        found = Some((i, next_col));
                    }
                    next_col += 1;
                }
                found
            } else {
                let mut best: Option<(usize, usize, f64)> = None;
                for i in r..a.rows {
                    for (j, &u) in used.iter().enumerate() {
                        if u {
                            continue;
                        }
                        let m = a[(i, j)].magnitude();
                        if best.is_none_or(|(_, _, b)| m > b) {
                            best = Some((i, j, m));
                        }
                    }
                }
                match best {
                    Some((i, j, m)) => {
                        if pivots.is_empty() {
                            threshold = tol * m;
                        }
                        if m == 0.0 || m <= threshold {
                            None
                        } else {
                            Some((i, j))
                        }
                    }
                    None => None,
                }
            };
            let Some((pi, pj)) = choice else { break };
            a.swap_rows(r, pi);
            let inv = a[(r, pj)].inv().expect("pivot is nonzero");
            for j in 0..a.cols {
                let v = std::mem::replace(&mut a[(r, j)], S::zero());
                a[(r, j)] = v * inv.clone();
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let f = a[(i, pj)].clone();
                if S::EXACT && f.is_zero() {
                    continue;
                }
                for j in 0..a.cols {
                    let delta = f.clone() * a[(r, j)].clone();
                    let v = std::mem::replace(&mut a[(i, j)], S::zero());
                    a[(i, j)] = v - delta;
                }
                a[(i, pj)] = S::zero();
            }
            used[pj] = true;
            pivots.push((r, pj));
            r += 1;
        }
        Echelon { reduced: a, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank at the default tolerance.
    pub fn rank(&self) -> usize {
        self.rank_tol(DEFAULT_TOL)
    }

    /// Exact rank over exact fields; over approximate fields, the number of
    /// full-pivoting pivots whose magnitude exceeds `tol` times the largest
    /// pivot.
    pub fn rank_tol(&self, tol: f64) -> usize {
        self.echelon(self.cols, tol).pivots.len()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        self.kernel_basis_tol(DEFAULT_TOL)
    }

    /// Basis of the right kernel, one vector per non-pivot column (ascending).
    pub fn kernel_basis_tol(&self, tol: f64) -> Vec<Vec<S>> {
        let ech = self.echelon(self.cols, tol);
        let mut is_pivot = vec![false; self.cols];
        for &(_, c) in &ech.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for &(r, c) in &ech.pivots {
                    v[c] = -ech.reduced[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Kernel basis as the columns of a matrix.
    pub fn kernel_matrix(&self) -> Matrix<S> {
        self.kernel_matrix_tol(DEFAULT_TOL)
    }

    pub fn kernel_matrix_tol(&self, tol: f64) -> Matrix<S> {
        Matrix::from_columns(self.cols, &self.kernel_basis_tol(tol))
    }

    pub fn solve(&self, rhs: &Matrix<S>) -> Solution<S> {
        self.solve_tol(rhs, DEFAULT_TOL)
    }

    /// A particular solution of `self * x = rhs`, free variables set to zero.
    pub fn solve_tol(&self, rhs: &Matrix<S>, tol: f64) -> Solution<S> {
        assert_eq!(self.rows, rhs.rows, "solve: row counts differ");
        let aug = self.hstack(rhs);
        let ech = aug.echelon(self.cols, tol);
        let rank = ech.pivots.len();
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for &(r, c) in &ech.pivots {
            for k in 0..rhs.cols {
                x[(c, k)] = ech.reduced[(r, self.cols + k)].clone();
            }
        }
        let consistent = if S::EXACT {
            (rank..aug.rows).all(|i| (0..rhs.cols).all(|k| ech.reduced[(i, self.cols + k)].is_zero()))
        } else {
            let residual = self.matmul(&x).sub(rhs).max_magnitude();
            let scale = self.max_magnitude() * x.max_magnitude() + rhs.max_magnitude();
            residual <= tol * scale.max(1.0)
        };
        if consistent {
            Solution::Unique(x).refine(self.cols - rank)
        } else {
            Solution::Inconsistent
        }
    }

    pub fn inverse(&self) -> Option<Matrix<S>> {
        if self.rows != self.cols {
            return None;
        }
        match self.solve(&Matrix::identity(self.rows)) {
            Solution::Unique(x) => Some(x),
            _ => None,
        }
    }

    /// Independent columns spanning the column space, taken from `self`.
    pub fn column_basis(&self) -> Matrix<S> {
        self.column_basis_tol(DEFAULT_TOL)
    }

    pub fn column_basis_tol(&self, tol: f64) -> Matrix<S> {
        let ech = self.echelon(self.cols, tol);
        let mut cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
        cols.sort_unstable();
        self.select_cols(&cols)
    }

    /// Rows spanning the annihilator `{w : w^T self = 0}`.
    pub fn left_annihilator(&self) -> Matrix<S> {
        self.transpose().kernel_matrix().transpose()
    }
}

/// Outcome of [`Matrix::solve`]. Inconsistency is a value, not an error.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<S> {
    Unique(Matrix<S>),
    /// A particular solution together with the kernel dimension.
    Particular(Matrix<S>, usize),
    Inconsistent,
}

impl<S: Scalar> Solution<S> {
    fn refine(self, nullity: usize) -> Self {
        match self {
            Solution::Unique(x) if nullity > 0 => Solution::Particular(x, nullity),
            other => other,
        }
    }

    pub fn particular(&self) -> Option<&Matrix<S>> {
        match self {
            Solution::Unique(x) | Solution::Particular(x, _) => Some(x),
            Solution::Inconsistent => None,
        }
    }

    pub fn into_particular(self) -> Option<Matrix<S>> {
        match self {
            Solution::Unique(x) | Solution::Particular(x, _) => Some(x),
            Solution::Inconsistent => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        !matches!(self, Solution::Inconsistent)
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Basis of the sum of two subspaces given by column bases of equal height.
pub fn subspace_sum<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    assert_eq!(a.rows(), b.rows(), "ambient dimensions differ");
    a.hstack(b).column_basis()
}

/// Basis of the intersection of two column spaces, via the kernel of `[a | -b]`.
pub fn subspace_intersect<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    assert_eq!(a.rows(), b.rows(), "ambient dimensions differ");
    let a = a.column_basis();
    let b = b.column_basis();
    let stacked = a.hstack(&b.neg());
    let kernel = stacked.kernel_basis();
    let vectors: Vec<Vec<S>> = kernel.iter().map(|k| a.mul_vec(&k[..a.cols()])).collect();
    Matrix::from_columns(a.rows(), &vectors).column_basis()
}

/// Exact characteristic polynomial `det(tI - m)`, coefficients from constant
/// term upwards (Faddeev-LeVerrier).
pub fn char_poly<S: Scalar>(m: &Matrix<S>) -> Vec<S> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "char_poly needs a square matrix");
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut aux = Matrix::<S>::zeros(n, n);
    for k in 1..=n {
        let mut next = m.matmul(&aux);
        for i in 0..n {
            let v = std::mem::replace(&mut next[(i, i)], S::zero());
            next[(i, i)] = v + coeffs[n - k + 1].clone();
        }
        let tr = m.matmul(&next).trace();
        let inv_k = S::from_ratio(1, k as i64);
        coeffs[n - k] = -(tr * inv_k);
        aux = next;
    }
    coeffs
}

/// Row-major JSON form used by the file formats.
#[derive(Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRepr<S>(pub Vec<Vec<S>>);

impl<S: Scalar> Matrix<S> {
    pub fn to_repr(&self) -> MatrixRepr<S> {
        MatrixRepr(self.to_rows())
    }

    /// `rows`/`cols` disambiguate empty matrices.
    pub fn from_repr(repr: MatrixRepr<S>, rows: usize, cols: usize) -> Result<Self, String> {
        let data = repr.0;
        if rows == 0 || cols == 0 {
            if data.iter().any(|r| !r.is_empty()) || (rows == 0 && !data.is_empty()) {
                return Err(format!("expected an empty {rows}x{cols} matrix"));
            }
            return Ok(Matrix::zeros(rows, cols));
        }
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(format!("expected a {rows}x{cols} matrix"));
        }
        Ok(Matrix::from_rows(data))
    }
}
