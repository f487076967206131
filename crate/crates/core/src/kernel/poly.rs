use std::fmt;

use super::matrix::Matrix;
use super::scalar::Scalar;
use super::KernelError;

/// Dense univariate polynomial; `coeffs[i]` is the coefficient of `x^i`.
/// Trailing zeros are stripped, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial<T: Scalar> {
    coeffs: Vec<T>,
    ctx: T::Ctx,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>, ctx: T::Ctx) -> Self {
        while coeffs.last().is_some_and(Scalar::vanishes) {
            coeffs.pop();
        }
        Polynomial { coeffs, ctx }
    }

    pub fn zero(ctx: T::Ctx) -> Self {
        Polynomial {
            coeffs: Vec::new(),
            ctx,
        }
    }

    pub fn one(ctx: T::Ctx) -> Self {
        let one = T::one_in(&ctx);
        Polynomial::new(vec![one], ctx)
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![T::zero_in(&ctx); k];
        coeffs.push(c);
        Polynomial::new(coeffs, ctx)
    }

    pub fn from_i64(coeffs: &[i64], ctx: T::Ctx) -> Self {
        let c = coeffs.iter().map(|&n| T::from_i64(n, &ctx)).collect();
        Polynomial::new(c, ctx)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| T::zero_in(&self.ctx))
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n).map(|i| self.coeff(i).plus(&rhs.coeff(i))).collect(),
            self.ctx.clone(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n).map(|i| self.coeff(i).minus(&rhs.coeff(i))).collect(),
            self.ctx.clone(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.ctx.clone());
        }
        let mut out = vec![T::zero_in(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Polynomial::new(out, self.ctx.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Polynomial::new(
            self.coeffs.iter().map(|a| c.times(a)).collect(),
            self.ctx.clone(),
        )
    }

    /// Keeps the terms of degree `< n`.
    pub fn truncate(&self, n: usize) -> Self {
        Polynomial::new(
            self.coeffs.iter().take(n).cloned().collect(),
            self.ctx.clone(),
        )
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero_in(&self.ctx), |acc, c| acc.times(x).plus(c))
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix<T>) -> Result<Matrix<T>, KernelError> {
        if !m.is_square() {
            return Err(KernelError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n, self.ctx.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(m)?
                .add(&Matrix::identity(n, self.ctx.clone()).scale(c))?;
        }
        Ok(acc)
    }

    /// `x^n · P(1/x)`; requires `n ≥ deg P`.
    pub fn reverse(&self, n: usize) -> Self {
        let mut c: Vec<T> = (0..=n).map(|i| self.coeff(i)).collect();
        c.reverse();
        Polynomial::new(c, self.ctx.clone())
    }

    /// Euclidean division by a divisor with invertible leading coefficient.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), KernelError> {
        let d = divisor.degree().ok_or(KernelError::DivisionByZero)?;
        let lead_inv = divisor.coeffs[d].inverse()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Polynomial::zero(self.ctx.clone()), self.clone()));
        }
        let mut quot = vec![T::zero_in(&self.ctx); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let q = rem[k + d].times(&lead_inv);
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&q.times(c));
            }
            quot[k] = q;
        }
        rem.truncate(d);
        Ok((
            Polynomial::new(quot, self.ctx.clone()),
            Polynomial::new(rem, self.ctx.clone()),
        ))
    }

    /// Power-series quotient `self / divisor mod x^n`; requires an
    /// invertible constant term.
    pub fn series_div(&self, divisor: &Self, n: usize) -> Result<Self, KernelError> {
        let c0_inv = divisor.coeff(0).inverse()?;
        let mut out: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeff(k);
            for (j, q) in out.iter().enumerate() {
                let d = divisor.coeff(k - j);
                if !d.is_exact_zero() {
                    acc = acc.minus(&q.times(&d));
                }
            }
            out.push(acc.times(&c0_inv));
        }
        Ok(Polynomial::new(out, self.ctx.clone()))
    }

    pub fn map<U: Scalar>(&self, ctx: U::Ctx, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect(), ctx)
    }

    /// Renders with the given variable name, highest degree last.
    pub fn render(&self, var: &str) -> String
    where
        T: fmt::Display,
    {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.vanishes())
            .map(|(i, c)| match i {
                0 => format!("{}", c),
                1 => format!("({})*{}", c, var),
                _ => format!("({})*{}^{}", c, var, i),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

impl<T: Scalar> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::{int, Rational};

    fn p(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::from_i64(c, ())
    }

    #[test]
    fn trailing_zeros_stripped() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn division_round_trip() {
        let a = p(&[3, -4, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[-3, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn series_division() {
        // 1 / (1 - x) = 1 + x + x^2 + ...
        let q = p(&[1]).series_div(&p(&[1, -1]), 4).unwrap();
        assert_eq!(q, p(&[1, 1, 1, 1]));
    }

    #[test]
    fn reverse_and_eval() {
        let a = p(&[1, -4, 3]);
        assert_eq!(a.reverse(2), p(&[3, -4, 1]));
        assert_eq!(a.eval(&int(1)), int(0));
    }
}
