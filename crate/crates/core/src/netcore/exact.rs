//! Exact integer linear algebra: fraction-free Gauss-Jordan elimination and
//! canonical kernel bases.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<i64>], rows: usize) -> Self {
        Self::from_rows(cols, rows).transpose()
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) as f64)
    }

    pub fn rank(&self) -> usize {
        let (_, pivots) = fraction_free_rref(to_big(self));
        pivots.len()
    }
}

fn to_big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| m.row(i).iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

/// Fraction-free (Bareiss-style) Gauss-Jordan elimination.
///
/// On return every pivot entry equals the same non-zero integer `d` and every
/// other entry of a pivot column is zero, so dividing by `d` gives the reduced
/// row-echelon form. All intermediate divisions are exact.
pub(crate) fn fraction_free_rref(mut a: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // Smallest non-zero magnitude keeps the entries small.
        let Some(p) = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by(|&i, &k| a[i][c].abs().cmp(&a[k][c].abs()))
        else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let pv = pivot_row[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                let num = &pv * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact fraction-free division");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let lead_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if lead_negative {
            *x = -&*x;
        }
    }
}

fn big_to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::Domain(format!("kernel entry {v} does not fit in i64")))
}

/// Canonical integer basis of `Ker m` (vectors `b` with `m·b = 0`).
///
/// The basis is the reduced row-echelon form of the kernel, each vector
/// scaled to a primitive integer vector with a positive leading entry. It is
/// therefore unique for a given subspace. The number of vectors is
/// `ncols - rank(m)`.
pub fn kernel_cols(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let n = m.ncols();
    let (reduced, pivots) = fraction_free_rref(to_big(m));
    let d = match pivots.len() {
        0 => BigInt::one(),
        k => reduced[k - 1][pivots[k - 1]].clone(),
    };
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let raw: Vec<Vec<BigInt>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigInt::zero(); n];
            v[f] = d.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&reduced[i][f];
            }
            v
        })
        .collect();
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    let (canon, canon_pivots) = fraction_free_rref(raw);
    canon
        .into_iter()
        .take(canon_pivots.len())
        .map(|mut v| {
            make_primitive(&mut v);
            v.iter().map(big_to_i64).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]], 3);
        assert_eq!(m.rank(), 2);
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(IntMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn zero_matrix_kernel_is_identity() {
        let k = kernel_cols(&IntMatrix::zeros(2, 3)).unwrap();
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn full_rank_square_has_empty_kernel() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]], 2);
        assert!(kernel_cols(&m).unwrap().is_empty());
    }

    #[test]
    fn kernel_is_primitive_with_positive_lead() {
        // 2x - 4y + 6z = 0
        let m = IntMatrix::from_rows(&[vec![2, -4, 6]], 3);
        let k = kernel_cols(&m).unwrap();
        assert_eq!(k, vec![vec![3, 0, -1], vec![0, 3, 2]]);
    }

    #[test]
    fn kernel_independent_of_row_order() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0, -1], vec![0, 2, 1, 1]], 4);
        let b = IntMatrix::from_rows(&[vec![0, 2, 1, 1], vec![3, 3, 0, -3], vec![1, 3, 1, 0]], 4);
        assert_eq!(kernel_cols(&a).unwrap(), kernel_cols(&b).unwrap());
    }

    #[test]
    fn large_entries_stay_exact() {
        let m = IntMatrix::from_rows(
            &[vec![97, 89, 83, 79, 1], vec![73, 71, 67, 61, 2], vec![59, 53, 47, 43, 3]],
            5,
        );
        let k = kernel_cols(&m).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            for i in 0..3 {
                let s: i64 = (0..5).map(|j| m.get(i, j) * v[j]).sum();
                assert_eq!(s, 0);
            }
        }
    }
}
