//! Smith normal form of integer matrices, with both unimodular transforms.
//!
//! Pivot selection is the minimal nonzero absolute value, ties broken in
//! row-major order; reduction is by truncated division, so every re-pivot
//! strictly shrinks the pivot and the loop terminates. After a pivot's row
//! and column are cleared, any entry of the remaining block not divisible
//! by the pivot gets its row added up, which repairs the divisibility
//! chain. All arithmetic is exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CoarseError, Result};

/// A dense integer matrix. Rows may be zero (a presentation with no
/// relations).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn from_rows(raw: Vec<Vec<i64>>) -> Result<Self> {
        let data: Vec<Vec<BigInt>> = raw
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        Self::from_bigint_rows(data)
    }

    pub fn from_bigint_rows(data: Vec<Vec<BigInt>>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        if data.iter().any(|r| r.len() != cols) {
            return Err(CoarseError::ParameterViolation(
                "matrix rows have unequal lengths".into(),
            ));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(CoarseError::ParameterViolation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += term;
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free elimination (exact divisions only).
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(CoarseError::ParameterViolation(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(swap) => {
                        m.swap(k, swap);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev; // exact in the Bareiss scheme
                }
            }
            for entry in m.iter_mut().skip(k + 1) {
                entry[k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(sign * m[n - 1][n - 1].clone())
    }
}

/// Diagonalization `left * A * right = D` with a divisibility chain on the
/// diagonal and unimodular transforms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub transformed: IntMatrix,
    pub rank: usize,
}

struct Worker {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Worker {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.d.data.swap(a, b);
            self.u.data.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in &mut self.d.data {
            row.swap(a, b);
        }
        for row in &mut self.v.data {
            row.swap(a, b);
        }
    }

    /// row_a -= q * row_b
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.d.cols {
            let term = q * &self.d.data[b][j];
            self.d.data[a][j] -= term;
        }
        for j in 0..self.u.cols {
            let term = q * &self.u.data[b][j];
            self.u.data[a][j] -= term;
        }
    }

    /// col_a -= q * col_b
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.d.rows {
            let term = q * &self.d.data[i][b];
            self.d.data[i][a] -= term;
        }
        for i in 0..self.v.rows {
            let term = q * &self.v.data[i][b];
            self.v.data[i][a] -= term;
        }
    }

    /// row_a += row_b
    fn row_add(&mut self, a: usize, b: usize) {
        for j in 0..self.d.cols {
            let term = self.d.data[b][j].clone();
            self.d.data[a][j] += term;
        }
        for j in 0..self.u.cols {
            let term = self.u.data[b][j].clone();
            self.u.data[a][j] += term;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.d.cols {
            let v = -self.d.data[a][j].clone();
            self.d.data[a][j] = v;
        }
        for j in 0..self.u.cols {
            let v = -self.u.data[a][j].clone();
            self.u.data[a][j] = v;
        }
    }

    /// Minimal nonzero |entry| in the trailing block, row-major ties.
    fn find_pivot(&self, from: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in from..self.d.rows {
            for j in from..self.d.cols {
                let v = self.d.data[i][j].abs();
                if v.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
                    best = Some((v, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Computes the Smith normal form of an integer matrix.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let rows = a.rows();
    let cols = a.cols();
    let mut w = Worker {
        d: a.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let steps = rows.min(cols);
    let mut rank = 0usize;
    for t in 0..steps {
        let Some((pi, pj)) = w.find_pivot(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            // clear the pivot column, re-pivoting on any remainder
            let mut clean = true;
            for i in t + 1..rows {
                if w.d.data[i][t].is_zero() {
                    continue;
                }
                let q = &w.d.data[i][t] / &w.d.data[t][t];
                w.row_sub(i, t, &q);
                if !w.d.data[i][t].is_zero() {
                    w.swap_rows(t, i);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            for j in t + 1..cols {
                if w.d.data[t][j].is_zero() {
                    continue;
                }
                let q = &w.d.data[t][j] / &w.d.data[t][t];
                w.col_sub(j, t, &q);
                if !w.d.data[t][j].is_zero() {
                    w.swap_cols(t, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // repair divisibility: pull up a row holding a non-multiple
            let pivot = w.d.data[t][t].clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&w.d.data[i][j] % &pivot).is_zero());
            match offender {
                Some((i, _)) => {
                    w.row_add(t, i);
                    // the pivot column gained nothing (entries there are 0),
                    // but the pivot row must be re-cleared
                }
                None => break,
            }
        }
        rank += 1;
    }
    for t in 0..steps {
        if w.d.data[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    let diagonal: Vec<BigInt> = (0..steps).map(|i| w.d.data[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count().min(rank);
    SnfResult {
        diagonal,
        left: w.u,
        right: w.v,
        transformed: w.d,
        rank,
    }
}

/// Free rank of the abelian group presented by `generators` and the rows of
/// `relations`: the generators not consumed by a nonzero invariant factor.
pub fn torsion_free_rank(generators: usize, relations: &IntMatrix) -> Result<usize> {
    if relations.rows() > 0 && relations.cols() != generators {
        return Err(CoarseError::ParameterViolation(format!(
            "relations have {} columns for {} generators",
            relations.cols(),
            generators
        )));
    }
    if relations.rows() == 0 {
        return Ok(generators);
    }
    let snf = smith_normal_form(relations);
    Ok(generators - snf.rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn verify(a: &IntMatrix, snf: &SnfResult) {
        let lhs = snf.left.mul(a).unwrap().mul(&snf.right).unwrap();
        assert_eq!(lhs, snf.transformed, "transforms do not reproduce the form");
        assert_eq!(snf.left.det().unwrap().abs(), BigInt::one());
        assert_eq!(snf.right.det().unwrap().abs(), BigInt::one());
        for w in snf.diagonal.windows(2) {
            if !w[0].is_zero() {
                assert!(
                    (&w[1] % &w[0]).is_zero(),
                    "chain broken: {:?}",
                    snf.diagonal
                );
            } else {
                assert!(w[1].is_zero(), "zero before nonzero: {:?}", snf.diagonal);
            }
        }
        for d in &snf.diagonal {
            assert!(!d.is_negative());
        }
    }

    #[test]
    fn two_by_two_example() {
        let a = m(vec![vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
        verify(&a, &snf);
    }

    #[test]
    fn scalars() {
        let one = m(vec![vec![1]]);
        assert_eq!(smith_normal_form(&one).diagonal, vec![BigInt::one()]);
        let zero = m(vec![vec![0]]);
        let snf = smith_normal_form(&zero);
        assert_eq!(snf.diagonal, vec![BigInt::zero()]);
        assert_eq!(snf.rank, 0);
    }

    #[test]
    fn rank_deficient() {
        let a = m(vec![vec![2, 4, 0], vec![6, 8, 0]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.rank, 2);
        verify(&a, &snf);
    }

    #[test]
    fn torsion_free_rank_examples() {
        let none = IntMatrix::from_rows(vec![]).unwrap();
        assert_eq!(torsion_free_rank(2, &none).unwrap(), 2);
        let cyclic = m(vec![vec![2]]);
        assert_eq!(torsion_free_rank(1, &cyclic).unwrap(), 0);
        let mixed = m(vec![vec![2, 4, 0], vec![6, 8, 0]]);
        assert_eq!(torsion_free_rank(3, &mixed).unwrap(), 1);
        // column mismatch
        assert!(torsion_free_rank(2, &cyclic).is_err());
    }

    #[test]
    fn divisibility_repair_needed() {
        // gcd of all entries is 1 but the natural pivot is 2
        let a = m(vec![vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal, vec![BigInt::one(), BigInt::from(6)]);
        verify(&a, &snf);
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(
            m(vec![vec![2, 4], vec![6, 8]]).det().unwrap(),
            BigInt::from(-8)
        );
        assert_eq!(
            m(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]])
                .det()
                .unwrap(),
            BigInt::from(-3)
        );
        assert_eq!(IntMatrix::identity(4).det().unwrap(), BigInt::one());
    }

    #[test]
    fn invariant_under_permutations() {
        let a = m(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let base = smith_normal_form(&a).diagonal;
        let perm = m(vec![vec![4, 2, 4], vec![6, -6, 12], vec![4, 10, 16]]);
        assert_eq!(smith_normal_form(&perm).diagonal, base);
        let rows = m(vec![vec![10, 4, 16], vec![2, 4, 4], vec![-6, 6, 12]]);
        assert_eq!(smith_normal_form(&rows).diagonal, base);
    }
}
