use num_traits::{Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use super::normal_form::{hnf, int_kernel};
use super::{denominator_lcm, Int};

/// A sublattice of `Z^n`, stored as an `n x k` basis matrix in column
/// Hermite normal form. Canonicalization on construction makes structural
/// equality coincide with equality of lattices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// The lattice spanned over `Z` by the columns of `gens`; dependent and
    /// zero generators are eliminated by the HNF.
    pub fn from_generators(gens: &IntMatrix) -> Lattice {
        let (h, _) = hnf(gens);
        let nonzero: Vec<usize> = (0..h.cols())
            .filter(|&j| !(0..h.rows()).all(|i| h[(i, j)].is_zero()))
            .collect();
        Lattice {
            ambient_rank: gens.rows(),
            basis: h.select_cols(&nonzero),
        }
    }

    /// All of `Z^n`.
    pub fn full(n: usize) -> Lattice {
        Lattice {
            ambient_rank: n,
            basis: IntMatrix::identity(n),
        }
    }

    /// The zero lattice in `Z^n`.
    pub fn zero(n: usize) -> Lattice {
        Lattice {
            ambient_rank: n,
            basis: IntMatrix::zero(n, 0),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Index `[Z^n : L]` for full-rank lattices, `None` otherwise.
    pub fn index(&self) -> Option<Int> {
        if self.is_full_rank() {
            Some(self.basis.det().abs())
        } else {
            None
        }
    }

    /// Unique integer coordinates of `v` in the basis, when `v` is a member.
    pub fn solve(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.ambient_rank, "ambient rank mismatch");
        if self.rank() == 0 {
            return if v.iter().all(Zero::is_zero) {
                Some(Vec::new())
            } else {
                None
            };
        }
        let b = self.basis.to_rat();
        let rhs: Vec<_> = v.iter().map(|x| super::Rat::from(x.clone())).collect();
        let x = b.solve(&rhs)?;
        // columns are independent, so the rational solution is unique;
        // check it is exact and integral
        let back = b.mul_vec(&x);
        if back != rhs || !x.iter().all(super::Rat::is_integer) {
            return None;
        }
        Some(x.iter().map(|r| r.to_integer()).collect())
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.solve(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.basis.cols()).all(|j| self.contains(&other.basis.col(j)))
    }

    /// Exact intersection `{v : v in self and v in other}`.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient_rank, other.ambient_rank, "ambient rank mismatch");
        if self.rank() == 0 || other.rank() == 0 {
            return Lattice::zero(self.ambient_rank);
        }
        // Solve B1 x = B2 y over Z: the x-parts of the kernel of [B1 | -B2]
        // give coordinates of the intersection in B1.
        let stacked = self.basis.hcat(&other.basis.neg());
        let k = int_kernel(&stacked);
        let x_part = k.top_rows(self.rank());
        Lattice::from_generators(&self.basis.mul(&x_part))
    }

    /// The image `M(L)` under an integer matrix.
    pub fn image(&self, m: &IntMatrix) -> Lattice {
        Lattice::from_generators(&m.mul(&self.basis))
    }

    /// Preimage `{x in Z^n : phi(x) in self}` of this lattice under a
    /// rational matrix `phi` (mapping `Q^n -> Q^m` with `m = ambient_rank`).
    pub fn preimage(&self, phi: &RatMatrix) -> Lattice {
        assert_eq!(phi.rows(), self.ambient_rank);
        let n = phi.cols();
        let q = denominator_lcm((0..phi.rows()).flat_map(|i| (0..phi.cols()).map(move |j| &phi[(i, j)])));
        let p = IntMatrix::from_fn(phi.rows(), phi.cols(), |i, j| {
            (&phi[(i, j)] * super::Rat::from(q.clone())).to_integer()
        });
        // P x = q * B y  for some integer y
        let mut qb = self.basis.clone();
        for i in 0..qb.rows() {
            for j in 0..qb.cols() {
                qb[(i, j)] = &qb[(i, j)] * &q;
            }
        }
        if qb.cols() == 0 {
            // preimage of the zero lattice: integer kernel of P
            return Lattice::from_generators(&int_kernel(&p));
        }
        let k = int_kernel(&p.hcat(&qb.neg()));
        Lattice::from_generators(&k.top_rows(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn lat(cols: &[&[i64]]) -> Lattice {
        let n = cols[0].len();
        let gens = IntMatrix::from_fn(n, cols.len(), |i, j| Int::from(cols[j][i]));
        Lattice::from_generators(&gens)
    }

    #[test]
    fn coordinate_lattice_intersection() {
        let l1 = lat(&[&[2, 0], &[0, 1]]);
        let l2 = lat(&[&[1, 0], &[0, 3]]);
        let expect = lat(&[&[2, 0], &[0, 3]]);
        assert_eq!(l1.intersect(&l2), expect);
    }

    #[test]
    fn intersection_idempotent() {
        let l = lat(&[&[2, 1], &[0, 5]]);
        assert_eq!(l.intersect(&l), l);
    }

    #[test]
    fn sublattice_meets_ambient() {
        let l = lat(&[&[2, 1], &[0, 5]]);
        let full = Lattice::full(2);
        assert_eq!(l.intersect(&full), l);
    }

    #[test]
    fn membership_and_coordinates() {
        let two_z2 = lat(&[&[2, 0], &[0, 2]]);
        assert!(two_z2.contains(&[int(0), int(0)]));
        let coords = two_z2.solve(&[int(2), int(4)]).unwrap();
        assert_eq!(coords, vec![int(1), int(2)]);
        assert!(!two_z2.contains(&[int(1), int(0)]));
    }

    #[test]
    fn canonical_equality_of_generating_sets() {
        let a = lat(&[&[2, 0], &[0, 3]]);
        let b = lat(&[&[2, 3], &[2, 0], &[4, 6]]);
        assert_eq!(a, b);
    }

    #[test]
    fn index_divisibility_under_intersection() {
        let l1 = lat(&[&[2, 0], &[1, 3]]);
        let l2 = lat(&[&[3, 1], &[0, 2]]);
        let meet = l1.intersect(&l2);
        let i1 = l1.index().unwrap();
        let i2 = l2.index().unwrap();
        let im = meet.index().unwrap();
        assert!((&im % &i1).is_zero());
        assert!((&im % &i2).is_zero());
        assert!(l1.contains_lattice(&meet));
        assert!(l2.contains_lattice(&meet));
    }

    #[test]
    fn preimage_under_rational_map() {
        // phi = M^{-1} where M is the arctan(4/3) rotation: the preimage of
        // Z^2 under M is {x : Mx integral}, index 5 in Z^2.
        let m = RatMatrix::from_rows_rat(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]]);
        let pre = Lattice::full(2).preimage(&m);
        assert_eq!(pre.index().unwrap(), int(5));
        // (1, 2) maps to (-1, 2): integral
        assert!(pre.contains(&[int(1), int(2)]));
        assert!(!pre.contains(&[int(1), int(0)]));
    }
}
