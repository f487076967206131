//! Smith normal form over the integers by elementary reduction, pivoting on
//! the entry of smallest absolute value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::Matrix;

/// `left · M · right = diag`, with `left`, `right` unimodular and
/// `left · left_inv = I`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: Matrix<BigInt>,
    pub left_inv: Matrix<BigInt>,
    pub right: Matrix<BigInt>,
    /// Invariant factors `d_1 | d_2 | …`, length `min(rows, cols)`.
    pub invariants: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariants.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &Matrix<BigInt>) -> Vec<BigInt> {
    smith_decomposition(m).invariants
}

struct Work {
    a: Vec<Vec<BigInt>>,
    left: Vec<Vec<BigInt>>,
    left_inv: Vec<Vec<BigInt>>,
    right: Vec<Vec<BigInt>>,
}

impl Work {
    // row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.a[0].len() {
            let v = &self.a[j][k] * c;
            self.a[i][k] += v;
        }
        for k in 0..self.left.len() {
            let v = &self.left[j][k] * c;
            self.left[i][k] += v;
        }
        // inverse: column_j -= c * column_i
        for row in self.left_inv.iter_mut() {
            let v = &row[i] * c;
            row[j] -= v;
        }
    }

    // col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for row in self.a.iter_mut() {
            let v = &row[j] * c;
            row[i] += v;
        }
        for row in self.right.iter_mut() {
            let v = &row[j] * c;
            row[i] += v;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.left.swap(i, j);
            for row in self.left_inv.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in self.a.iter_mut() {
                row.swap(i, j);
            }
            for row in self.right.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.a[i].iter_mut() {
            *v = -&*v;
        }
        for v in self.left[i].iter_mut() {
            *v = -&*v;
        }
        for row in self.left_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::from(1)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn to_matrix(rows: usize, cols: usize, v: Vec<Vec<BigInt>>) -> Matrix<BigInt> {
    Matrix::from_vec(rows, cols, (), v.into_iter().flatten().collect()).expect("shape")
}

pub fn smith_decomposition(m: &Matrix<BigInt>) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: (0..rows).map(|i| m.row(i).to_vec()).collect(),
        left: identity(rows),
        left_inv: identity(rows),
        right: identity(cols),
    };
    let steps = rows.min(cols);
    let mut invariants = Vec::with_capacity(steps);
    for t in 0..steps {
        loop {
            // Smallest nonzero entry of the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = &w.a[i][j];
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            w.swap_rows(t, bi);
            w.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.add_row(i, t, &-q);
                    if !w.a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.add_col(j, t, &-q);
                    if !w.a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let pivot = w.a[t][t].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&w.a[i][j] % &pivot).is_zero()));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        invariants.push(w.a[t][t].clone());
    }
    SmithDecomposition {
        left: to_matrix(rows, rows, w.left),
        left_inv: to_matrix(rows, rows, w.left_inv),
        right: to_matrix(cols, cols, w.right),
        invariants,
    }
}

/// Diagonal matrix of the given shape carrying `invariants`.
#[cfg(test)]
fn diag_of(rows: usize, cols: usize, invariants: &[BigInt]) -> Matrix<BigInt> {
    Matrix::from_fn(rows, cols, (), |i, j| {
        if i == j {
            invariants[i].clone()
        } else {
            BigInt::zero()
        }
    })
}
