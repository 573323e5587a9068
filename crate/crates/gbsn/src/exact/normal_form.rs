//! Hermite and Smith normal forms over the integers.
//!
//! The HNF here is the column-style form: unimodular column operations only,
//! pivots positive, entries left of a pivot reduced into `[0, pivot)`. This
//! makes the HNF of a generating set the canonical basis of the lattice it
//! spans. Plain Euclidean pivoting is used; intermediate entries can grow to
//! the size of products of input entries, which is comfortably fast for the
//! desk-scale matrices (up to 12x12, entries up to 1e3) this crate targets.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::Int;

/// Column Hermite normal form: returns `(H, U)` with `H = M * U`,
/// `U` unimodular, and `H` the unique column HNF of `M`'s column span
/// (zero columns collected at the right).
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivot_col = 0;
    let mut pivot_rows: Vec<usize> = Vec::new();

    for row in 0..rows {
        if pivot_col == cols {
            break;
        }
        // Gather a nonzero entry in this row among the active columns.
        let Some(j) = (pivot_col..cols).find(|&j| !h[(row, j)].is_zero()) else {
            continue;
        };
        h.swap_cols(pivot_col, j);
        u.swap_cols(pivot_col, j);

        for k in pivot_col + 1..cols {
            if h[(row, k)].is_zero() {
                continue;
            }
            let a = h[(row, pivot_col)].clone();
            let b = h[(row, k)].clone();
            let ext = a.extended_gcd(&b);
            let (g, s, t) = (ext.gcd, ext.x, ext.y);
            let a_g = &a / &g;
            let b_g = &b / &g;
            // Column pair update with determinant-1 matrix
            // [[s, -b/g], [t, a/g]].
            for i in 0..rows {
                let x = h[(i, pivot_col)].clone();
                let y = h[(i, k)].clone();
                h[(i, pivot_col)] = &s * &x + &t * &y;
                h[(i, k)] = -&b_g * &x + &a_g * &y;
            }
            for i in 0..cols {
                let x = u[(i, pivot_col)].clone();
                let y = u[(i, k)].clone();
                u[(i, pivot_col)] = &s * &x + &t * &y;
                u[(i, k)] = -&b_g * &x + &a_g * &y;
            }
        }

        if h[(row, pivot_col)].is_negative() {
            for i in 0..rows {
                h[(i, pivot_col)] = -h[(i, pivot_col)].clone();
            }
            for i in 0..cols {
                u[(i, pivot_col)] = -u[(i, pivot_col)].clone();
            }
        }

        // Reduce earlier pivot columns in this row into [0, pivot).
        let pivot = h[(row, pivot_col)].clone();
        for c in 0..pivot_col {
            let q = h[(row, c)].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for i in 0..rows {
                let v = &h[(i, c)] - &q * &h[(i, pivot_col)];
                h[(i, c)] = v;
            }
            for i in 0..cols {
                let v = &u[(i, c)] - &q * &u[(i, pivot_col)];
                u[(i, c)] = v;
            }
        }

        pivot_rows.push(row);
        pivot_col += 1;
    }

    (h, u)
}

/// Result of a Smith normal form computation: `u * m * v = diag(divisors)`.
pub struct Snf {
    pub divisors: Vec<Int>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Smith normal form with unimodular transforms on both sides. The divisors
/// are nonnegative and form a divisibility chain `d1 | d2 | ...` (trailing
/// zeros for rank deficiency).
pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);

    let row_combine = |a: &mut IntMatrix, u: &mut IntMatrix, r1: usize, r2: usize,
                       s: &Int, t: &Int, ag: &Int, bg: &Int| {
        for j in 0..a.cols() {
            let x = a[(r1, j)].clone();
            let y = a[(r2, j)].clone();
            a[(r1, j)] = s * &x + t * &y;
            a[(r2, j)] = -bg * &x + ag * &y;
        }
        for j in 0..u.cols() {
            let x = u[(r1, j)].clone();
            let y = u[(r2, j)].clone();
            u[(r1, j)] = s * &x + t * &y;
            u[(r2, j)] = -bg * &x + ag * &y;
        }
    };
    let col_combine = |a: &mut IntMatrix, v: &mut IntMatrix, c1: usize, c2: usize,
                       s: &Int, t: &Int, ag: &Int, bg: &Int| {
        for i in 0..a.rows() {
            let x = a[(i, c1)].clone();
            let y = a[(i, c2)].clone();
            a[(i, c1)] = s * &x + t * &y;
            a[(i, c2)] = -bg * &x + ag * &y;
        }
        for i in 0..v.rows() {
            let x = v[(i, c1)].clone();
            let y = v[(i, c2)].clone();
            v[(i, c1)] = s * &x + t * &y;
            v[(i, c2)] = -bg * &x + ag * &y;
        }
    };

    'diag: for k in 0..n {
        loop {
            // Move a nonzero pivot to (k, k) if one exists.
            let Some((pi, pj)) = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_zero())
            else {
                break 'diag;
            };
            if pi != k {
                for j in 0..cols {
                    let tmp = a[(pi, j)].clone();
                    a[(pi, j)] = a[(k, j)].clone();
                    a[(k, j)] = tmp;
                }
                for j in 0..rows {
                    let tmp = u[(pi, j)].clone();
                    u[(pi, j)] = u[(k, j)].clone();
                    u[(k, j)] = tmp;
                }
            }
            if pj != k {
                a.swap_cols(pj, k);
                v.swap_cols(pj, k);
            }

            // Clear row and column k; iterate because clearing one may
            // refill the other. Each refill strictly shrinks |a(k,k)|.
            loop {
                let mut dirty = false;
                for i in k + 1..rows {
                    if !a[(i, k)].is_zero() {
                        let x = a[(k, k)].clone();
                        let y = a[(i, k)].clone();
                        if (&y % &x).is_zero() {
                            // plain elimination keeps row k intact
                            let q = &y / &x;
                            for j in 0..cols {
                                let s = &q * &a[(k, j)];
                                a[(i, j)] = &a[(i, j)] - &s;
                            }
                            for j in 0..rows {
                                let s = &q * &u[(k, j)];
                                u[(i, j)] = &u[(i, j)] - &s;
                            }
                        } else {
                            let e = x.extended_gcd(&y);
                            row_combine(&mut a, &mut u, k, i, &e.x, &e.y, &(&x / &e.gcd), &(&y / &e.gcd));
                            dirty = true;
                        }
                    }
                }
                for j in k + 1..cols {
                    if !a[(k, j)].is_zero() {
                        let x = a[(k, k)].clone();
                        let y = a[(k, j)].clone();
                        if (&y % &x).is_zero() {
                            let q = &y / &x;
                            for i in 0..rows {
                                let s = &q * &a[(i, k)];
                                a[(i, j)] = &a[(i, j)] - &s;
                            }
                            for i in 0..cols {
                                let s = &q * &v[(i, k)];
                                v[(i, j)] = &v[(i, j)] - &s;
                            }
                        } else {
                            let e = x.extended_gcd(&y);
                            col_combine(&mut a, &mut v, k, j, &e.x, &e.y, &(&x / &e.gcd), &(&y / &e.gcd));
                            dirty = true;
                        }
                    }
                }
                if !dirty {
                    break;
                }
            }

            // Divisibility: if the pivot misses an entry of the remaining
            // block, fold that row into row k and re-clear, which replaces
            // the pivot by a strictly smaller gcd. This makes the final
            // diagonal a divisor chain.
            let dkk = a[(k, k)].clone();
            let offender = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !(&a[(i, j)] % &dkk).is_zero()));
            match offender {
                Some(i) => {
                    for j in 0..cols {
                        let add = a[(i, j)].clone();
                        a[(k, j)] = &a[(k, j)] + &add;
                    }
                    for j in 0..rows {
                        let add = u[(i, j)].clone();
                        u[(k, j)] = &u[(k, j)] + &add;
                    }
                }
                None => break,
            }
        }
    }

    let mut divisors = Vec::with_capacity(n);
    for k in 0..n {
        let d = a[(k, k)].clone();
        if d.is_negative() {
            for j in 0..cols {
                a[(k, j)] = -a[(k, j)].clone();
            }
            for j in 0..rows {
                u[(k, j)] = -u[(k, j)].clone();
            }
            divisors.push(-d);
        } else {
            divisors.push(d);
        }
    }

    Snf { divisors, u, v }
}

/// Basis of the integer kernel `{x : M x = 0}`, as columns.
pub fn int_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(m);
    let zero_cols: Vec<usize> = (0..h.cols())
        .filter(|&j| (0..h.rows()).all(|i| h[(i, j)].is_zero()))
        .collect();
    u.select_cols(&zero_cols)
}

/// Solves `M x = b` over the integers; `None` when no integer solution
/// exists. With a non-trivial kernel an arbitrary particular solution is
/// returned.
pub fn int_solve(m: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(m.rows(), b.len());
    let s = snf(m);
    let c = s.u.mul_vec(b);
    let n = m.rows().min(m.cols());
    let mut y = vec![Int::zero(); m.cols()];
    for i in 0..m.rows() {
        if i < n && !s.divisors[i].is_zero() {
            let (q, r) = c[i].div_rem(&s.divisors[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn is_unimodular(u: &IntMatrix) -> bool {
        u.is_square() && u.det().abs().is_one()
    }

    #[test]
    fn hnf_of_identity() {
        let id = IntMatrix::identity(3);
        let (h, u) = hnf(&id);
        assert_eq!(h, id);
        assert!(is_unimodular(&u));
    }

    #[test]
    fn hnf_gcd_row() {
        let m = IntMatrix::from_rows(&[&[4, 6]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, IntMatrix::from_rows(&[&[2, 0]]));
        assert!(is_unimodular(&u));
        assert_eq!(m.mul(&u), h);
    }

    #[test]
    fn hnf_preserves_span_determinant() {
        let m = IntMatrix::from_rows(&[&[2, 1], &[0, 3]]);
        let (h, u) = hnf(&m);
        assert!(is_unimodular(&u));
        assert_eq!(m.mul(&u), h);
        assert_eq!(h.det().abs(), Int::from(6));
    }

    #[test]
    fn hnf_unique_for_equal_spans() {
        // two generating sets of the same lattice
        let a = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let b = IntMatrix::from_rows(&[&[2, 2, 4], &[3, 0, 6]]);
        // span of b: (2,3),(2,0),(4,6) -> contains (0,3) and (2,0)
        let (ha, _) = hnf(&a);
        let (hb, _) = hnf(&b);
        let nonzero: Vec<usize> = (0..hb.cols())
            .filter(|&j| !(0..hb.rows()).all(|i| hb[(i, j)].is_zero()))
            .collect();
        assert_eq!(hb.select_cols(&nonzero), ha);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let s = snf(&m);
        assert_eq!(s.divisors, vec![Int::one(), Int::from(6)]);
        assert!(is_unimodular(&s.u));
        assert!(is_unimodular(&s.v));
        let d = s.u.mul(&m).mul(&s.v);
        assert_eq!(d[(0, 0)], Int::one());
        assert_eq!(d[(1, 1)], Int::from(6));
        assert!(d[(0, 1)].is_zero() && d[(1, 0)].is_zero());
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMatrix::zero(2, 3);
        let s = snf(&m);
        assert_eq!(s.divisors, vec![Int::zero(), Int::zero()]);
    }

    #[test]
    fn snf_already_diagonal() {
        let m = IntMatrix::from_rows(&[&[2, 0], &[0, 2]]);
        let s = snf(&m);
        assert_eq!(s.divisors, vec![Int::from(2), Int::from(2)]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = IntMatrix::from_rows(&[&[1, 2], &[2, 4]]);
        let k = int_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // primitive kernel vector, i.e. (2, -1) up to sign
        assert_eq!(k[(0, 0)].abs(), Int::from(2));
        assert_eq!(k[(1, 0)].abs(), Int::one());
    }

    #[test]
    fn int_solve_roundtrip() {
        let m = IntMatrix::from_rows(&[&[2, 1], &[0, 3]]);
        let b = m.mul_vec(&[Int::from(5), Int::from(-7)]);
        let x = int_solve(&m, &b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(int_solve(&m, &[Int::one(), Int::one()]).is_none());
    }

    #[test]
    fn snf_wide_matrix_with_duplicate_columns() {
        // regression: duplicate and pairwise-divisible columns once made the
        // clearing loop oscillate without shrinking the pivot
        let cols: Vec<Vec<i64>> = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 0],
            vec![0, 0, 1],
            vec![0, 1, 0],
            vec![0, 1, 1],
            vec![1, 0, 0],
            vec![1, 0, 1],
            vec![1, 1, 0],
            vec![1, 1, 1],
            vec![2, 0, 0],
            vec![0, 2, 0],
            vec![0, 0, 2],
        ];
        let m = IntMatrix::from_fn(3, 13, |i, j| Int::from(cols[j][i]));
        let s = snf(&m);
        assert_eq!(s.divisors, vec![Int::one(), Int::one(), Int::one()]);
        assert!(is_unimodular(&s.u));
        assert!(is_unimodular(&s.v));
        let k = int_kernel(&m);
        assert_eq!(k.cols(), 10);
        assert!(m.mul(&k).is_zero());
        assert!(int_solve(&m, &[Int::one(), Int::from(2), Int::from(3)]).is_some());
    }
}
