//! Dense exact matrices and Gaussian elimination over ℚ(i).
//!
//! Pivoting picks the first nonzero entry in column order; with exact
//! arithmetic there is nothing to gain from magnitude heuristics, and the
//! fixed rule keeps every reduction (and therefore every report) canonical.

use std::fmt;
use std::str::FromStr;

use super::{ExactNumError, Scalar, Subspace};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>, // row-major
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, ExactNumError> {
        if self.cols != rhs.rows {
            return Err(ExactNumError::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                if !self.get(i, k).is_zero() && !rhs.get(k, j).is_zero() {
                    acc += &(self.get(i, k) * rhs.get(k, j));
                }
            }
            acc
        }))
    }

    /// Image of a coordinate vector under this matrix.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, ExactNumError> {
        if v.len() != self.cols {
            return Err(ExactNumError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    if !self.get(i, j).is_zero() && !v[j].is_zero() {
                        acc += &(self.get(i, j) * &v[j]);
                    }
                }
                acc
            })
            .collect())
    }

    /// Reduced row-echelon form together with the rank.  The RREF is unique,
    /// which is what makes subspace comparisons decidable downstream.
    pub fn rref(&self) -> (Matrix, usize) {
        let (m, pivots) = self.rref_with_pivots();
        let rank = pivots.len();
        (m, rank)
    }

    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j) - &(&f * m.get(r, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of the null space {x : m·x = 0}, RREF-normalized.
    pub fn kernel(&self) -> Subspace {
        let (red, pivots) = self.rref_with_pivots();
        let mut basis = Vec::new();
        let piv_set: Vec<usize> = pivots.clone();
        for free in 0..self.cols {
            if piv_set.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (r, &pc) in piv_set.iter().enumerate() {
                v[pc] = -red.get(r, free).clone();
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.cols, basis)
    }

    /// One exact solution of m·x = rhs if the system is consistent.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>, ExactNumError> {
        if rhs.len() != self.rows {
            return Err(ExactNumError::DimensionMismatch {
                expected: self.rows,
                got: rhs.len(),
            });
        }
        let mut aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs[i].clone()
            }
        });
        let (red, pivots) = {
            let (m, p) = aug.rref_with_pivots();
            aug = m;
            (aug, p)
        };
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the rhs column: inconsistent
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Exact inverse when the matrix has full rank, `None` when singular.
    pub fn invert(&self) -> Result<Option<Matrix>, ExactNumError> {
        if self.rows != self.cols {
            return Err(ExactNumError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (red, pivots) = aug.rref_with_pivots();
        aug = red;
        if pivots.len() < n || pivots[n - 1] >= n {
            return Ok(None);
        }
        Ok(Some(Matrix::from_fn(n, n, |i, j| aug.get(i, j + n).clone())))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Renders the matrix file format: one row per line, scalars separated by
/// single spaces.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Matrix {
    type Err = ExactNumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(Scalar::from_str)
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(ExactNumError::BadScalar("empty matrix".into()));
        }
        let w = rows[0].len();
        if rows.iter().any(|r| r.len() != w) {
            return Err(ExactNumError::DimensionMismatch {
                expected: w,
                got: rows.iter().map(Vec::len).find(|&l| l != w).unwrap(),
            });
        }
        Ok(Matrix::from_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let id = Matrix::identity(3);
        let (r, rank) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_of_zero_is_zero() {
        let z = Matrix::zero(2, 4);
        let (r, rank) = z.rref();
        assert_eq!(r, z);
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_collapses_dependent_rows() {
        // [[1,2],[2,4]] -> [[1,2],[0,0]], rank 1 (hand row-reduction)
        let a = m(&[&[1, 2], &[2, 4]]);
        let (r, rank) = a.rref();
        assert_eq!(rank, 1);
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(Matrix::identity(4).kernel().dim(), 0);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        assert_eq!(Matrix::zero(3, 3).kernel().dim(), 3);
    }

    #[test]
    fn kernel_of_row_1_1() {
        // [[1,1]] -> span{(1,-1)} (hand solve)
        let k = m(&[&[1, 1]]).kernel();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[s("1"), s("-1")]));
    }

    #[test]
    fn rank_nullity() {
        let samples = [
            m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]),
            m(&[&[0, 0], &[0, 0], &[1, 0]]),
            m(&[&[2, 1, 0, 3]]),
            Matrix::identity(5),
        ];
        for a in samples {
            assert_eq!(a.rank() + a.kernel().dim(), a.cols());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = a.solve(&[s("3"), s("1")]).unwrap().unwrap();
        assert_eq!(a.apply(&x).unwrap(), vec![s("3"), s("1")]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[s("0"), s("1")]).unwrap().is_none());
    }

    #[test]
    fn invert_round_trip() {
        let a = m(&[&[1, 2], &[3, 5]]);
        let inv = a.invert().unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(2));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert!(singular.invert().unwrap().is_none());
        assert!(matches!(
            m(&[&[1, 2]]).invert(),
            Err(ExactNumError::NotSquare { .. })
        ));
    }

    #[test]
    fn singular_iff_nontrivial_kernel() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(a.invert().unwrap().is_none() && a.kernel().dim() > 0);
        let b = m(&[&[1, 2], &[3, 5]]);
        assert!(b.invert().unwrap().is_some() && b.kernel().dim() == 0);
    }

    #[test]
    fn matrix_text_round_trip() {
        let a = Matrix::from_rows(vec![
            vec![s("1"), s("-3/2")],
            vec![s("1+1/2*i"), s("0")],
        ]);
        let text = a.to_string();
        let back: Matrix = text.parse().unwrap();
        assert_eq!(a, back);
    }
}
