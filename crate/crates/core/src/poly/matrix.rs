//! Dense rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if `entries.len() != rows * cols`.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        RatMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds from row vectors; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            entries.extend(r);
        }
        RatMatrix {
            rows: n,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Rows scaled to primitive-free integer rows (each row multiplied by
    /// the lcm of its denominators). Row scaling preserves rank.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut out = Vec::with_capacity(self.rows);
        let mut scales = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            out.push(
                row.iter()
                    .map(|q| q.numer() * (&l / q.denom()))
                    .collect::<Vec<_>>(),
            );
            scales.push(l);
        }
        (out, scales)
    }

    /// Exact rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss(&mut a, self.cols).0
    }

    /// Determinant of a square matrix. Panics when not square.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        let (mut a, scales) = self.integer_rows();
        let (rank, sign) = bareiss(&mut a, self.cols);
        if rank < self.rows {
            return Rational::zero();
        }
        let d = a[self.rows - 1][self.cols - 1].clone() * sign;
        let s = scales.into_iter().fold(BigInt::one(), |acc, x| acc * x);
        Rational::new(d, s)
    }

    /// Basis of the right nullspace, from the reduced row echelon form.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut a: Vec<Vec<Rational>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == a.len() {
                break;
            }
            let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].recip();
            for v in a[row].iter_mut() {
                *v *= &inv;
            }
            for r in 0..a.len() {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..self.cols {
                        let sub = &f * &a[row][c];
                        a[r][c] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// In-place Bareiss elimination with row pivoting. Returns the rank and the
/// sign of the row permutation. After the call, when the matrix is square
/// and of full rank, the last diagonal entry is the determinant up to sign.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, i32) {
    let rows = a.len();
    let mut sign = 1;
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for r in bottom.iter_mut() {
            let f = r[col].clone();
            for c in col + 1..cols {
                r[c] = (&pivot * &r[c] - &f * &pivot_row[c]) / &prev;
            }
            r[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    (rank, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        RatMatrix::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(),
        )
    }

    /// Plain Gauss-Jordan over the rationals, used as an independent check.
    fn naive_rank(m: &RatMatrix) -> usize {
        let mut a: Vec<Vec<Rational>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            if let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) {
                a.swap(rank, p);
                for r in rank + 1..a.len() {
                    let f = &a[r][col] / &a[rank][col];
                    for c in 0..m.cols() {
                        let s = &f * &a[rank][c];
                        a[r][c] -= s;
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn small_ranks() {
        assert_eq!(RatMatrix::identity(3).rank(), 3);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(RatMatrix::zeros(0, 10).rank(), 0);
        assert_eq!(RatMatrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[&[2, 1], &[7, 4]]).determinant(), int(1));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), int(-1));
        let q = RatMatrix::from_rows(2, vec![vec![rat(1, 2), int(1)], vec![int(3), rat(1, 3)]]);
        assert_eq!(q.determinant(), rat(1, 6) - int(3));
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).determinant(), int(0));
        assert_eq!(m(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 5]]).determinant(), int(-9));
    }

    #[test]
    fn nullspace_annihilates() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        for v in &ns {
            for r in 0..a.rows() {
                let dot: Rational = a.row(r).iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..=12, 1usize..=12).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |v| {
                RatMatrix::from_entries(r, c, v.into_iter().map(|(n, d)| rat(n, d)).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(a in arb_matrix()) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn rank_matches_gauss_jordan(a in arb_matrix()) {
            prop_assert_eq!(a.rank(), naive_rank(&a));
        }

        #[test]
        fn rank_nullity(a in arb_matrix()) {
            prop_assert_eq!(a.rank() + a.nullspace().len(), a.cols());
        }
    }
}
