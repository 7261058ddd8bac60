//! Exact linear algebra: dense integer matrices, GF(2) rank, Smith invariants.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] += x;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(move |(k, &x)| (k / self.cols, k % self.cols, x))
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn reduce_mod2(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.rem_euclid(2)).collect() }
    }
}

/// Rank over GF(2).
pub fn rank_gf2(m: &Matrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            let mut r = vec![0u64; words];
            for (j, &x) in m.row(i).iter().enumerate() {
                if x.rem_euclid(2) == 1 {
                    r[j / 64] |= 1 << (j % 64);
                }
            }
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[w] & b != 0 {
                for (x, y) in r.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix.
pub fn smith_invariants(m: &Matrix) -> Vec<BigInt> {
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..r).map(|i| m.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = min_entry(&a, t..r, t..c) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..r {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in t..c {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..c {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for i in t..r {
                        let d = &q * &a[i][t];
                        a[i][j] -= d;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                // a remainder is smaller than the pivot; move it in
                let cand = (t..r)
                    .map(|i| (i, t))
                    .chain((t..c).map(|j| (t, j)))
                    .filter(|&(i, j)| !a[i][j].is_zero())
                    .min_by(|x, y| a[x.0][x.1].abs().cmp(&a[y.0][y.1].abs()))
                    .unwrap();
                a.swap(t, cand.0);
                for row in a.iter_mut() {
                    row.swap(t, cand.1);
                }
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..c {
                        let x = a[i][j].clone();
                        a[t][j] += x;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn min_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_rank_small() {
        let m = Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(rank_gf2(&m), 2);
        assert_eq!(rank_gf2(&Matrix::zeros(3, 4)), 0);
        assert_eq!(rank_gf2(&Matrix::from_rows(&[vec![2, 4]])), 0);
    }

    #[test]
    fn smith_of_known_matrices() {
        let m = Matrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let d: Vec<i64> = smith_invariants(&m).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
        let m = Matrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let d: Vec<i64> = smith_invariants(&m).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![1, 6]);
        let m = Matrix::from_rows(&[vec![1, -1], vec![1, -1]]);
        assert_eq!(smith_invariants(&m).len(), 1);
    }

    #[test]
    fn product() {
        let a = Matrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = Matrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), Matrix::from_rows(&[vec![2, 1], vec![4, 3]]));
    }
}
