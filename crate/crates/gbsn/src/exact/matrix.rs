use std::fmt;

use num_traits::{One, Zero};

use super::{Int, Rat};
use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 || cols == 0, "zero-row matrix must have no columns");
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut m = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from row-major `i64` literals, mostly for tests and the catalog.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        IntMatrix::from_fn(r, c, |i, j| Int::from(rows[i][j]))
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<Int>]) -> Self {
        IntMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut s = Int::zero();
            for k in 0..self.cols {
                s += &self[(i, k)] * &other[(k, j)];
            }
            s
        })
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len(), "matrix/vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = Int::zero();
                for k in 0..self.cols {
                    s += &self[(i, k)] * &v[k];
                }
                s
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Keeps the columns with the given indices, in order.
    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Keeps the rows `0..k`.
    pub fn top_rows(&self, k: usize) -> IntMatrix {
        IntMatrix::from_fn(k, self.cols, |i, j| self[(i, j)].clone())
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| {
            Rat::from(self[(i, j)].clone())
        })
    }

    /// Exact determinant, via rational elimination.
    pub fn det(&self) -> Int {
        let d = self.to_rat().det();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = RatMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from row-major `(numerator, denominator)` literals.
    pub fn from_rows_rat(rows: &[&[(i64, i64)]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        RatMatrix::from_fn(r, c, |i, j| {
            let (n, d) = rows[i][j];
            Rat::new(Int::from(n), Int::from(d))
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        RatMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut s = Rat::zero();
            for k in 0..self.cols {
                s += &self[(i, k)] * &other[(k, j)];
            }
            s
        })
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for k in 0..self.cols {
                    s += &self[(i, k)] * &v[k];
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] - &other[(i, j)]
        })
    }

    pub fn hcat(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows);
        RatMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Rat::is_integer)
    }

    /// Converts to an integer matrix; panics if any entry has a denominator.
    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            assert!(self[(i, j)].is_integer(), "non-integral entry");
            self[(i, j)].to_integer()
        })
    }

    /// In-place reduction to reduced row echelon form; returns the rank and
    /// the pivot columns.
    pub fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let tmp = self[(p, j)].clone();
                self[(p, j)] = self[(r, j)].clone();
                self[(r, j)] = tmp;
            }
            let inv = self[(r, c)].recip();
            for j in 0..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in 0..self.cols {
                        let v = &self[(i, j)] - &f * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (r, pivots)
    }

    pub fn rref(&self) -> (RatMatrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let (rank, pivots) = m.rref_in_place();
        (m, rank, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                for j in 0..n {
                    let tmp = m[(p, j)].clone();
                    m[(p, j)] = m[(c, j)].clone();
                    m[(c, j)] = tmp;
                }
                det = -det;
            }
            det *= &m[(c, c)];
            let inv = m[(c, c)].recip();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for j in c..n {
                        let v = &m[(i, j)] - &f * &m[(c, j)];
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    /// Exact inverse. Errors on singular input.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut aug = self.hcat(&RatMatrix::identity(n));
        let (_, pivots) = aug.rref_in_place();
        if pivots.iter().any(|&c| c >= n) {
            return Err(Error::SingularMatrix);
        }
        Ok(RatMatrix::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Basis of the right kernel, returned as the columns of a matrix
    /// (`cols x dim`).
    pub fn kernel(&self) -> RatMatrix {
        let (r, rank, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = RatMatrix::zero(self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            k[(fc, idx)] = Rat::one();
            for (prow, &pc) in pivots.iter().enumerate().take(rank) {
                k[(pc, idx)] = -r[(prow, fc)].clone();
            }
        }
        k
    }

    /// Solves `self * x = b` exactly; `None` when inconsistent. With a
    /// non-trivial kernel an arbitrary particular solution is returned.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len());
        let rhs = RatMatrix::from_fn(self.rows, 1, |i, _| b[i].clone());
        let mut aug = self.hcat(&rhs);
        let (_, pivots) = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Coefficients of the characteristic polynomial, constant term first,
    /// computed by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<Rat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        if n == 0 {
            return coeffs;
        }
        // M_1 = A; M_k = A * (M_{k-1} + c_{n-k+1} I); c_{n-k} = -tr(M_k)/k
        let mut mk = self.clone();
        let trace: Rat = (0..n).map(|i| mk[(i, i)].clone()).sum();
        coeffs[n - 1] = -trace;
        for k in 2..=n {
            let mut shifted = mk;
            for i in 0..n {
                let v = &shifted[(i, i)] + &coeffs[n - k + 1];
                shifted[(i, i)] = v;
            }
            mk = self.mul(&shifted);
            let trace: Rat = (0..n).map(|i| mk[(i, i)].clone()).sum();
            coeffs[n - k] = -trace / Rat::from(Int::from(k as i64));
        }
        coeffs
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| super::rat_to_string(&self[(i, j)]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
