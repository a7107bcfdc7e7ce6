//! Dense exact matrices, generic over the scalar.
//!
//! Two elimination routes are provided: ordinary Gauss–Jordan over a
//! [`Field`], and fraction-free (Bareiss) elimination over any ring with
//! exact division. The ideal computations use the latter; the former is used
//! for null spaces, where back substitution is needed.

use crate::scalar::{ExactDiv, Field, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<R>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = &self[(i, j)];
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, rhs: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let cur = std::mem::replace(&mut out[(i, j)], R::zero());
                    out[(i, j)] = cur + prod;
                }
            }
        }
        out
    }

    /// Power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Matrix<R> {
        assert_eq!(self.rows, self.cols);
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form. Returns the nonzero rows (pivot entries equal to
/// one) and the pivot columns.
pub fn rref<F: Field>(rows: &[Vec<F>], ncols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut a: Vec<Vec<F>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inverse().expect("nonzero pivot is invertible");
        for j in c..ncols {
            if !a[r][j].is_zero() {
                a[r][j] = a[r][j].clone() * inv.clone();
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of `{ x : A x = 0 }` for `A` given by rows.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let (red, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); ncols];
            v[f] = F::one();
            for (row, &pc) in red.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    v[pc] = -row[f].clone();
                }
            }
            v
        })
        .collect()
}

/// Fraction-free row echelon form (Bareiss). Every division performed is
/// exact; entries of the returned rows are minors of the input.
pub fn bareiss_echelon<R: ExactDiv>(rows: &[Vec<R>], ncols: usize) -> (Vec<Vec<R>>, Vec<usize>) {
    let mut a: Vec<Vec<R>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut prev = R::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c..ncols {
                let val = piv.clone() * row[j].clone() - lead.clone() * pivot_row[j].clone();
                row[j] = if val.is_zero() {
                    val
                } else {
                    val.exact_div(&prev)
                        .expect("Bareiss step divides exactly by the previous pivot")
                };
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

pub fn rank_fraction_free<R: ExactDiv>(rows: &[Vec<R>], ncols: usize) -> usize {
    bareiss_echelon(rows, ncols).1.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rank_of_singular_matrix() {
        let rows = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank(&rows, 3), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot = r
                .iter()
                .zip(&ns[0])
                .fold(q(0), |acc, (a, b)| acc + a.clone() * b.clone());
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn bareiss_agrees_with_gauss_on_integers() {
        let ints = vec![
            vec![2, 3, 5, 7],
            vec![1, 1, 1, 1],
            vec![3, 4, 6, 8],
            vec![0, 2, 1, 5],
        ];
        let zi: Vec<Vec<BigInt>> = ints
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let qi: Vec<Vec<BigRational>> = ints
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        assert_eq!(rank_fraction_free(&zi, 4), rank(&qi, 4));
        assert_eq!(rank(&qi, 4), 3);
    }

    #[test]
    fn matrix_power() {
        let m = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]], 2);
        assert!(m.pow(2).is_identity());
        assert!(!m.pow(3).is_identity());
    }
}
