use std::fmt;

use super::poly::Polynomial;
use super::scalar::Scalar;
use super::KernelError;

/// Dense row-major matrix over a [`Scalar`] domain.
#[derive(Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    ctx: T::Ctx,
    data: Vec<T>,
}

/// Row echelon data: reduced matrix plus pivot columns in row order.
struct Echelon<T: Scalar> {
    reduced: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_vec(
        rows: usize,
        cols: usize,
        ctx: T::Ctx,
        data: Vec<T>,
    ) -> Result<Self, KernelError> {
        if data.len() != rows * cols {
            return Err(KernelError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            ctx,
            data,
        })
    }

    pub fn from_rows(rows: Vec<Vec<T>>, ctx: T::Ctx) -> Result<Self, KernelError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(KernelError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::from_vec(r, c, ctx, rows.into_iter().flatten().collect())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<T>], ctx: T::Ctx) -> Result<Self, KernelError> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(KernelError::DimensionMismatch("column length".into()));
        }
        Ok(Matrix::from_fn(rows, columns.len(), ctx, |i, j| {
            columns[j][i].clone()
        }))
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        ctx: T::Ctx,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            ctx,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize, ctx: T::Ctx) -> Self {
        let z = T::zero_in(&ctx);
        Matrix::from_fn(rows, cols, ctx, |_, _| z.clone())
    }

    pub fn identity(n: usize, ctx: T::Ctx) -> Self {
        let (z, o) = (T::zero_in(&ctx), T::one_in(&ctx));
        Matrix::from_fn(n, n, ctx, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn diagonal(entries: &[T], ctx: T::Ctx) -> Self {
        let z = T::zero_in(&ctx);
        Matrix::from_fn(entries.len(), entries.len(), ctx, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                z.clone()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, ctx: U::Ctx, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, self.ctx.clone(), |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::vanishes)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, KernelError> {
        if self.cols != rhs.rows {
            return Err(KernelError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let zero = T::zero_in(&self.ctx);
        let mut out = vec![zero; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    let idx = i * rhs.cols + j;
                    out[idx] = out[idx].plus(&a.times(b));
                }
            }
        }
        Matrix::from_vec(self.rows, rhs.cols, self.ctx.clone(), out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, KernelError> {
        if v.len() != self.cols {
            return Err(KernelError::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero_in(&self.ctx), |acc, (a, b)| acc.plus(&a.times(b)))
            })
            .collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self, KernelError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(KernelError::DimensionMismatch("shape".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, KernelError> {
        self.zip_with(rhs, |a, b| a.plus(b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, KernelError> {
        self.zip_with(rhs, |a, b| a.minus(b))
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            data: self.data.iter().map(|a| c.times(a)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Self, KernelError> {
        self.require_square()?;
        let mut acc = Matrix::identity(self.rows, self.ctx.clone());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, rhs: &Self) -> Result<Self, KernelError> {
        if self.rows != rhs.rows {
            return Err(KernelError::DimensionMismatch("hstack rows".into()));
        }
        Ok(Matrix::from_fn(
            self.rows,
            self.cols + rhs.cols,
            self.ctx.clone(),
            |i, j| {
                if j < self.cols {
                    self.get(i, j).clone()
                } else {
                    rhs.get(i, j - self.cols).clone()
                }
            },
        ))
    }

    /// Submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), self.ctx.clone(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    fn require_square(&self) -> Result<(), KernelError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(KernelError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Gauss–Jordan elimination. Within each column the pivot with the lowest
    /// [`Scalar::pivot_rank`] is chosen (largest p-adic absolute value).
    fn echelon(&self) -> Result<Echelon<T>, KernelError> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, c).vanishes())
                .min_by_key(|&i| m.get(i, c).pivot_rank());
            let Some(piv) = best else { continue };
            m.swap_rows(r, piv);
            let inv = m.get(r, c).inverse()?;
            for j in 0..m.cols {
                let v = m.get(r, j).times(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.vanishes() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(i, j).minus(&f.times(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(Echelon { reduced: m, pivots })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> Result<(Self, Vec<usize>), KernelError> {
        let e = self.echelon()?;
        Ok((e.reduced, e.pivots))
    }

    pub fn rank(&self) -> Result<usize, KernelError> {
        Ok(self.echelon()?.pivots.len())
    }

    /// Basis of `{x : M x = 0}`, one vector per free column of the RREF.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<T>>, KernelError> {
        let Echelon { reduced, pivots } = self.echelon()?;
        let zero = T::zero_in(&self.ctx);
        let one = T::one_in(&self.ctx);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        Ok(free
            .iter()
            .map(|&f| {
                let mut v = vec![zero.clone(); self.cols];
                v[f] = one.clone();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = reduced.get(row, f).negate();
                }
                v
            })
            .collect())
    }

    /// Basis of the column space, taken from the pivot columns of `self`.
    pub fn column_space_basis(&self) -> Result<Vec<Vec<T>>, KernelError> {
        let pivots = self.echelon()?.pivots;
        Ok(pivots.iter().map(|&c| self.column(c)).collect())
    }

    /// Solves `M X = B`; returns `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, rhs: &Self) -> Result<Option<Self>, KernelError> {
        if rhs.rows != self.rows {
            return Err(KernelError::DimensionMismatch("solve rows".into()));
        }
        let aug = self.hstack(rhs)?;
        let Echelon { reduced, pivots } = aug.echelon()?;
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols, self.ctx.clone());
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, reduced.get(row, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Self, KernelError> {
        self.require_square()?;
        let id = Matrix::identity(self.rows, self.ctx.clone());
        match self.solve(&id)? {
            Some(x) if self.rank()? == self.rows => Ok(x),
            _ => Err(KernelError::Singular),
        }
    }

    /// Determinant by elimination; requires inverses of nonzero pivots.
    pub fn det(&self) -> Result<T, KernelError> {
        self.require_square()?;
        let mut m = self.clone();
        let mut det = T::one_in(&self.ctx);
        for c in 0..m.cols {
            let best = (c..m.rows)
                .filter(|&i| !m.get(i, c).vanishes())
                .min_by_key(|&i| m.get(i, c).pivot_rank());
            let Some(piv) = best else {
                return Ok(T::zero_in(&self.ctx));
            };
            if piv != c {
                m.swap_rows(piv, c);
                det = det.negate();
            }
            let p = m.get(c, c).clone();
            det = det.times(&p);
            let inv = p.inverse()?;
            for i in c + 1..m.rows {
                let f = m.get(i, c).times(&inv);
                if f.vanishes() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).minus(&f.times(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// `det(xI − M)` by Berkowitz's division-free recurrence, so it is exact
    /// over any commutative coefficient ring.
    pub fn char_poly(&self) -> Result<Polynomial<T>, KernelError> {
        self.require_square()?;
        let n = self.rows;
        let ctx = self.ctx.clone();
        let one = T::one_in(&ctx);
        let zero = T::zero_in(&ctx);
        if n == 0 {
            return Ok(Polynomial::new(vec![one], ctx));
        }
        // Coefficients from highest degree down.
        let mut vect = vec![one.clone(), self.get(0, 0).negate()];
        for k in 1..n {
            // Leading k×k block, row/column borders and corner of the (k+1) block.
            let lead = self.select(&(0..k).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
            let row: Vec<T> = (0..k).map(|j| self.get(k, j).clone()).collect();
            let mut col: Vec<T> = (0..k).map(|i| self.get(i, k).clone()).collect();
            let corner = self.get(k, k).clone();
            let mut first = vec![one.clone(), corner.negate()];
            for _ in 0..k {
                let rc = row
                    .iter()
                    .zip(&col)
                    .fold(zero.clone(), |acc, (a, b)| acc.plus(&a.times(b)));
                first.push(rc.negate());
                col = lead.mul_vec(&col)?;
            }
            // first has length k+2; we need the first k+2 entries of the Toeplitz column.
            let mut next = vec![zero.clone(); k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = zero.clone();
                for (j, v) in vect.iter().enumerate() {
                    if i >= j {
                        acc = acc.plus(&first[i - j].times(v));
                    }
                }
                *slot = acc;
            }
            vect = next;
        }
        vect.reverse();
        Ok(Polynomial::new(vect, ctx))
    }

    /// `det` for rings without division, via the characteristic polynomial.
    pub fn det_division_free(&self) -> Result<T, KernelError> {
        let cp = self.char_poly()?;
        let c0 = cp.coeff(0);
        Ok(if self.rows.is_multiple_of(2) {
            c0
        } else {
            c0.negate()
        })
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::{int, rational, Rational};
    use num_bigint::BigInt;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
            (),
        )
        .unwrap()
    }

    #[test]
    fn char_poly_examples() {
        // diag(1, p) with p = 5
        let cp = q(&[&[1, 0], &[0, 5]]).char_poly().unwrap();
        assert_eq!(cp.coeffs(), &[int(5), int(-6), int(1)]);
        let cp = q(&[&[0, 1], &[0, 0]]).char_poly().unwrap();
        assert_eq!(cp.coeffs(), &[int(0), int(0), int(1)]);
        let cp = q(&[&[0, 1], &[1, 0]]).char_poly().unwrap();
        assert_eq!(cp.coeffs(), &[int(-1), int(0), int(1)]);
    }

    #[test]
    fn char_poly_rejects_non_square() {
        assert!(matches!(
            q(&[&[1, 2, 3]]).char_poly(),
            Err(KernelError::NotSquare { rows: 1, cols: 3 })
        ));
    }

    #[test]
    fn kernel_examples() {
        let k = q(&[&[0, 0], &[0, 0]]).kernel_basis().unwrap();
        assert_eq!(k, vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        assert!(q(&[&[1, 0], &[0, 1]]).kernel_basis().unwrap().is_empty());
        let k = q(&[&[1, 1]]).kernel_basis().unwrap();
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn det_and_inverse() {
        let m = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det().unwrap(), int(18));
        assert_eq!(m.det_division_free().unwrap(), int(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3, ()));
        assert!(matches!(
            q(&[&[1, 2], &[2, 4]]).inverse(),
            Err(KernelError::Singular)
        ));
    }

    #[test]
    fn integer_char_poly_is_division_free() {
        let m: Matrix<BigInt> = Matrix::from_rows(
            vec![
                vec![BigInt::from(2), BigInt::from(7)],
                vec![BigInt::from(-3), BigInt::from(5)],
            ],
            (),
        )
        .unwrap();
        assert_eq!(m.det_division_free().unwrap(), BigInt::from(31));
    }

    #[test]
    fn solve_inconsistent_returns_none() {
        let a = q(&[&[1, 1], &[2, 2]]);
        let b = Matrix::from_rows(vec![vec![int(1)], vec![rational(3, 1)]], ()).unwrap();
        assert!(a.solve(&b).unwrap().is_none());
    }
}
