//! Fredholm determinants `det(1 − TU)` of p-adic matrices, their Newton
//! polygons, the factorization `P = Q·S` separating reciprocal roots of
//! valuation `≤ h` from the rest, and the matching decomposition of the
//! underlying space.
//!
//! Slopes of the Newton polygon of `det(1 − TU)` are the valuations of the
//! eigenvalues of `U`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::kernel::{KernelError, Matrix, PAdic, PAdicCtx, Polynomial, Rational, Scalar};

pub const DEFAULT_PRECISION: u32 = 20;

/// Extra p-adic digits carried internally beyond the requested precision.
const GUARD_DIGITS: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("constant term must be 1 (up to precision), got {0}")]
    NotNormalized(String),
    #[error("no certified break of the Newton polygon at slope {0}")]
    NoBreak(String),
    #[error("slope factorization did not converge to precision {0}")]
    NoConvergence(u32),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub slope: Rational,
    pub length: usize,
}

/// Lower convex hull of `{(i, v_p(a_i))}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
}

impl NewtonPolygon {
    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| {
                let (i0, v0) = w[0];
                let (i1, v1) = w[1];
                Segment {
                    slope: Rational::new(BigInt::from(v1 - v0), BigInt::from((i1 - i0) as i64)),
                    length: i1 - i0,
                }
            })
            .collect()
    }

    /// Slope multiset, one entry per reciprocal root.
    pub fn slopes(&self) -> Vec<Rational> {
        self.segments()
            .into_iter()
            .flat_map(|s| std::iter::repeat_n(s.slope, s.length))
            .collect()
    }

    /// Total horizontal length of the segments of slope `≤ h`.
    pub fn length_up_to(&self, h: &Rational) -> usize {
        self.segments()
            .iter()
            .filter(|s| s.slope <= *h)
            .map(|s| s.length)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 2
    }
}

pub fn padic_ctx(p: u64, precision: u32) -> Result<PAdicCtx, SlopeError> {
    Ok(PAdicCtx::new(p, precision)?)
}

pub fn padic_matrix(m: &Matrix<Rational>, ctx: PAdicCtx) -> Matrix<PAdic> {
    m.map(ctx, |x| PAdic::from_rational(x, ctx))
}

pub fn padic_poly(coeffs: &[Rational], ctx: PAdicCtx) -> Polynomial<PAdic> {
    Polynomial::new(
        coeffs
            .iter()
            .map(|x| PAdic::from_rational(x, ctx))
            .collect(),
        ctx,
    )
}

/// Rational reconstruction of each coefficient, where possible.
pub fn rational_coeffs(p: &Polynomial<PAdic>) -> Vec<Option<Rational>> {
    p.coeffs().iter().map(|c| c.to_rational()).collect()
}

/// `det(1 − T·U)`, the reversed characteristic polynomial.
pub fn fredholm_series(u: &Matrix<PAdic>) -> Result<Polynomial<PAdic>, SlopeError> {
    let n = u.rows();
    let chi = u.char_poly()?;
    let p = chi.reverse(n);
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.vanishes() && !c.is_exact_zero() && c.absolute_precision().is_some_and(|a| a < 1) {
            return Err(KernelError::PrecisionExhausted(format!(
                "coefficient of T^{} is O(p^{})",
                k,
                c.absolute_precision().unwrap_or(0)
            ))
            .into());
        }
    }
    Ok(p)
}

pub fn newton_polygon(poly: &Polynomial<PAdic>) -> Result<NewtonPolygon, SlopeError> {
    if poly.is_zero() {
        return Err(SlopeError::ZeroPolynomial);
    }
    if poly.coeff(0).valuation() != Some(0) {
        return Err(SlopeError::NotNormalized(poly.coeff(0).to_string()));
    }
    let points: Vec<(usize, i64)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.valuation().map(|v| (i, v)))
        .collect();
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (i0, v0) = hull[hull.len() - 2];
            let (i1, v1) = hull[hull.len() - 1];
            // Drop the middle point unless it lies strictly below the chord.
            let cross =
                (v1 - v0) as i128 * (pt.0 - i0) as i128 - (pt.1 - v0) as i128 * (i1 - i0) as i128;
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    Ok(NewtonPolygon { vertices: hull })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFactorization {
    pub q: Polynomial<PAdic>,
    pub s: Polynomial<PAdic>,
    pub h: Rational,
    pub m: usize,
    pub iterations: usize,
}

impl SlopeFactorization {
    /// `Q̃(T) = T^m Q(1/T)`.
    pub fn q_tilde(&self) -> Polynomial<PAdic> {
        self.q.reverse(self.m)
    }

    pub fn s_tilde(&self) -> Polynomial<PAdic> {
        let d = self.s.degree().unwrap_or(0);
        self.s.reverse(d)
    }
}

fn lift(poly: &Polynomial<PAdic>, ctx: PAdicCtx) -> Polynomial<PAdic> {
    poly.map(ctx, |c| c.with_ctx(ctx))
}

/// Splits `P` (with `P(0) = 1`) as `Q·S` where `Q` has degree `m`, the length
/// of the slope-`≤ h` part of the Newton polygon, and `Q(0) = S(0) = 1`.
///
/// `Q` is refined by alternating a power-series division `P/S mod T^{m+1}`
/// with a Euclidean division `P div Q` until both stabilize at precision `K`.
pub fn slope_factorization(
    poly: &Polynomial<PAdic>,
    h: &Rational,
    k: u32,
) -> Result<SlopeFactorization, SlopeError> {
    let out_ctx = padic_ctx(poly.ctx().p, k)?;
    let work = padic_ctx(poly.ctx().p, k + GUARD_DIGITS)?;
    if !poly.coeff(0).is_unity() {
        return Err(SlopeError::NotNormalized(poly.coeff(0).to_string()));
    }
    let np = newton_polygon(poly)?;
    let m = np.length_up_to(h);
    let n = poly.degree().unwrap_or(0);
    let done = |q: Polynomial<PAdic>, s: Polynomial<PAdic>, iterations| SlopeFactorization {
        q: lift(&q, out_ctx),
        s: lift(&s, out_ctx),
        h: h.clone(),
        m,
        iterations,
    };
    if m == 0 {
        return Ok(done(Polynomial::one(work), poly.clone(), 0));
    }
    if m == n {
        return Ok(done(poly.clone(), Polynomial::one(work), 0));
    }
    if !np.vertices.iter().any(|&(i, _)| i == m) || poly.coeff(m).valuation().is_none() {
        return Err(SlopeError::NoBreak(h.to_string()));
    }
    let p = lift(poly, work);
    let one = PAdic::one_in(&work);
    let normalize = |f: Polynomial<PAdic>| -> Result<Polynomial<PAdic>, SlopeError> {
        let c0 = f.coeff(0).inverse()?;
        Ok(f.scale(&c0))
    };
    let mut s = Polynomial::one(work);
    let mut q = p.truncate(m + 1);
    let max_iter = 4 * (k + GUARD_DIGITS) as usize * (n + 1) * (n + 1);
    for it in 1..=max_iter {
        let q_next = p.series_div(&s, m + 1)?;
        let (quot, _) = p.div_rem(&q_next)?;
        let s_next = normalize(quot)?;
        let q_stable = q_next.sub(&q).coeffs().iter().all(|c| c.vanishes());
        let s_stable = s_next.sub(&s).coeffs().iter().all(|c| c.vanishes());
        q = q_next;
        s = s_next;
        if it > 1 && q_stable && s_stable {
            let residual = p.sub(&q.mul(&s));
            let exact_to =
                |c: &PAdic| c.vanishes() && c.absolute_precision().is_none_or(|a| a >= k as i64);
            if residual.coeffs().iter().all(exact_to) && q.coeff(0).minus(&one).vanishes() {
                return Ok(done(q, s, it));
            }
        }
    }
    Err(SlopeError::NoConvergence(k))
}

/// Bezout cofactors `a, b` with `a·Q̃ + b·S̃ = 1`, `deg a < deg S̃`,
/// `deg b < deg Q̃`.
fn bezout(
    qt: &Polynomial<PAdic>,
    st: &Polynomial<PAdic>,
    ctx: PAdicCtx,
) -> Result<(Polynomial<PAdic>, Polynomial<PAdic>), SlopeError> {
    let dq = qt.degree().unwrap_or(0);
    let ds = st.degree().unwrap_or(0);
    let n = dq + ds;
    let zero = PAdic::exact_zero(ctx);
    let mut cols: Vec<Vec<PAdic>> = Vec::with_capacity(n);
    for k in 0..ds {
        cols.push(
            (0..n)
                .map(|i| {
                    if i >= k {
                        qt.coeff(i - k)
                    } else {
                        zero.clone()
                    }
                })
                .collect(),
        );
    }
    for k in 0..dq {
        cols.push(
            (0..n)
                .map(|i| {
                    if i >= k {
                        st.coeff(i - k)
                    } else {
                        zero.clone()
                    }
                })
                .collect(),
        );
    }
    let sylv = Matrix::from_columns(n, &cols, ctx)?;
    let mut rhs = Matrix::zeros(n, 1, ctx);
    rhs.set(0, 0, PAdic::one_in(&ctx));
    let x = sylv
        .solve(&rhs)?
        .ok_or_else(|| KernelError::NotInvertible("Q~ and S~ share a root".into()))?;
    let xs = x.column(0);
    Ok((
        Polynomial::new(xs[..ds].to_vec(), ctx),
        Polynomial::new(xs[ds..].to_vec(), ctx),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionChecks {
    pub q_dim_matches_polygon: bool,
    pub spans_fill_space: bool,
    pub q_tilde_annihilates_q_part: bool,
    pub q_tilde_invertible_on_complement: bool,
    pub q_part_stable: bool,
    pub complement_stable: bool,
    pub projector_idempotent: bool,
    pub projector_commutes: bool,
}

impl DecompositionChecks {
    pub fn passed(&self) -> bool {
        self.q_dim_matches_polygon
            && self.spans_fill_space
            && self.q_tilde_annihilates_q_part
            && self.q_tilde_invertible_on_complement
            && self.q_part_stable
            && self.complement_stable
            && self.projector_idempotent
            && self.projector_commutes
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeDecomposition {
    pub factorization: SlopeFactorization,
    pub polygon: NewtonPolygon,
    pub q_part: Vec<Vec<PAdic>>,
    pub complement: Vec<Vec<PAdic>>,
    pub projector: Matrix<PAdic>,
    pub checks: DecompositionChecks,
}

fn is_stable(u: &Matrix<PAdic>, basis: &[Vec<PAdic>], ctx: PAdicCtx) -> Result<bool, KernelError> {
    if basis.is_empty() {
        return Ok(true);
    }
    let b = Matrix::from_columns(u.rows(), basis, ctx)?;
    let ub = u.mul(&b)?;
    Ok(b.hstack(&ub)?.rank()? == basis.len())
}

fn all_vanish(m: &Matrix<PAdic>) -> bool {
    m.entries().iter().all(|c| c.vanishes())
}

/// Splits the space acted on by `U` into the part killed by `Q̃(U)` and a
/// `U`-stable complement, using the Bezout projector `π = b(U)·S̃(U)`.
pub fn slope_decomposition(
    u: &Matrix<PAdic>,
    h: &Rational,
    k: u32,
) -> Result<SlopeDecomposition, SlopeError> {
    let ctx = padic_ctx(u.ctx().p, k + GUARD_DIGITS)?;
    let u = u.map(ctx, |c| c.with_ctx(ctx));
    let n = u.rows();
    let p = fredholm_series(&u)?;
    let polygon = newton_polygon(&p)?;
    let fac = slope_factorization(&p, h, k + GUARD_DIGITS)?;
    let qt = lift(&fac.q_tilde(), ctx);
    let st = lift(&fac.s_tilde(), ctx);
    let id = Matrix::identity(n, ctx);
    let projector = if fac.m == 0 {
        Matrix::zeros(n, n, ctx)
    } else if fac.m == n {
        id.clone()
    } else {
        let (_, b) = bezout(&qt, &st, ctx)?;
        b.eval_matrix(&u)?.mul(&st.eval_matrix(&u)?)?
    };
    let q_part = projector.column_space_basis()?;
    let complement = id.sub(&projector)?.column_space_basis()?;
    let qu = qt.eval_matrix(&u)?;
    let annihilates =
        q_part.is_empty() || all_vanish(&qu.mul(&Matrix::from_columns(n, &q_part, ctx)?)?);
    let invertible = complement.is_empty()
        || qu
            .mul(&Matrix::from_columns(n, &complement, ctx)?)?
            .rank()?
            == complement.len();
    let fill = if n == 0 {
        true
    } else {
        let mut all = q_part.clone();
        all.extend(complement.iter().cloned());
        all.len() == n && Matrix::from_columns(n, &all, ctx)?.rank()? == n
    };
    let checks = DecompositionChecks {
        q_dim_matches_polygon: q_part.len() == polygon.length_up_to(h) && q_part.len() == fac.m,
        spans_fill_space: fill,
        q_tilde_annihilates_q_part: annihilates,
        q_tilde_invertible_on_complement: invertible,
        q_part_stable: is_stable(&u, &q_part, ctx)?,
        complement_stable: is_stable(&u, &complement, ctx)?,
        projector_idempotent: all_vanish(&projector.mul(&projector)?.sub(&projector)?),
        projector_commutes: all_vanish(&projector.mul(&u)?.sub(&u.mul(&projector)?)?),
    };
    Ok(SlopeDecomposition {
        factorization: fac,
        polygon,
        q_part,
        complement,
        projector,
        checks,
    })
}

/// `p`-adic valuation of a nonzero rational, used to describe planted
/// eigenvalues.
pub fn rational_valuation(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let val = |n: &BigInt| {
        let mut n = n.clone();
        let mut v = 0i64;
        while n.is_multiple_of(&pb) {
            n /= &pb;
            v += 1;
        }
        v
    };
    Some(val(x.numer()) - val(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rational};

    fn ctx(p: u64) -> PAdicCtx {
        padic_ctx(p, DEFAULT_PRECISION).unwrap()
    }

    fn poly(c: &[i64], p: u64) -> Polynomial<PAdic> {
        let r: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
        padic_poly(&r, ctx(p))
    }

    fn rat(c: &[i64]) -> Vec<Option<Rational>> {
        c.iter().map(|&x| Some(int(x))).collect()
    }

    fn diag(xs: &[i64], p: u64) -> Matrix<PAdic> {
        let d: Vec<Rational> = xs.iter().map(|&x| int(x)).collect();
        padic_matrix(&Matrix::diagonal(&d, ()), ctx(p))
    }

    #[test]
    fn series_examples() {
        let f = fredholm_series(&diag(&[1, 3], 3)).unwrap();
        assert_eq!(rational_coeffs(&f), rat(&[1, -4, 3]));
        let f = fredholm_series(&diag(&[0, 0], 3)).unwrap();
        assert_eq!(rational_coeffs(&f), rat(&[1]));
        let mut j = Matrix::zeros(3, 3, ctx(5));
        j.set(0, 1, PAdic::from_int(1, ctx(5)));
        j.set(1, 2, PAdic::from_int(1, ctx(5)));
        assert_eq!(rational_coeffs(&fredholm_series(&j).unwrap()), rat(&[1]));
    }

    #[test]
    fn polygons() {
        let np = newton_polygon(&poly(&[1, -4, 3], 3)).unwrap();
        assert_eq!(np.vertices, vec![(0, 0), (1, 0), (2, 1)]);
        assert_eq!(np.slopes(), vec![int(0), int(1)]);
        assert!(newton_polygon(&poly(&[1], 7)).unwrap().is_empty());
        for p in [2, 3, 5] {
            let np = newton_polygon(&poly(&[1, -(p as i64)], p)).unwrap();
            assert_eq!(np.slopes(), vec![int(1)]);
        }
        let np = newton_polygon(&poly(&[1, 0, 2], 2)).unwrap();
        assert_eq!(np.slopes(), vec![rational(1, 2), rational(1, 2)]);
        assert!(newton_polygon(&poly(&[3, 1], 3)).is_err());
    }

    #[test]
    fn factorization_examples() {
        let f = slope_factorization(&poly(&[1, -4, 3], 3), &int(0), DEFAULT_PRECISION).unwrap();
        assert_eq!(rational_coeffs(&f.q), rat(&[1, -1]));
        assert_eq!(rational_coeffs(&f.s), rat(&[1, -3]));
        let f = slope_factorization(&poly(&[1, -4, 3], 3), &int(5), DEFAULT_PRECISION).unwrap();
        assert_eq!(rational_coeffs(&f.q), rat(&[1, -4, 3]));
        assert_eq!(rational_coeffs(&f.s), rat(&[1]));
        let pid = fredholm_series(&diag(&[5, 5], 5)).unwrap();
        let f = slope_factorization(&pid, &int(0), DEFAULT_PRECISION).unwrap();
        assert_eq!(rational_coeffs(&f.q), rat(&[1]));
        assert_eq!(rational_coeffs(&f.s), rat(&[1, -10, 25]));
    }

    #[test]
    fn factorization_mixed_slopes() {
        // (1 − 2T)(1 − 3T)(1 − 12T)(1 − 8T) over p = 2: slopes 1, 0, 2, 3.
        let p = poly(&[1, -2], 2)
            .mul(&poly(&[1, -3], 2))
            .mul(&poly(&[1, -12], 2))
            .mul(&poly(&[1, -8], 2));
        let f = slope_factorization(&p, &int(1), DEFAULT_PRECISION).unwrap();
        assert_eq!(f.m, 2);
        assert_eq!(rational_coeffs(&f.q), rat(&[1, -5, 6]));
        assert_eq!(rational_coeffs(&f.s), rat(&[1, -20, 96]));
    }

    #[test]
    fn decomposition_examples() {
        let d = slope_decomposition(&diag(&[1, 3], 3), &int(0), DEFAULT_PRECISION).unwrap();
        assert!(d.checks.passed(), "{:?}", d.checks);
        assert_eq!((d.q_part.len(), d.complement.len()), (1, 1));
        assert_eq!(rational_coeffs(&d.factorization.q_tilde()), rat(&[-1, 1]));
        let d = slope_decomposition(&diag(&[1, 1, 1], 2), &int(0), DEFAULT_PRECISION).unwrap();
        assert!(d.checks.passed());
        assert_eq!(d.q_part.len(), 3);
        let mut j = Matrix::zeros(2, 2, ctx(3));
        j.set(0, 1, PAdic::from_int(1, ctx(3)));
        let d = slope_decomposition(&j, &int(0), DEFAULT_PRECISION).unwrap();
        assert!(d.checks.passed());
        assert_eq!(d.q_part.len(), 0);
    }

    #[test]
    fn valuations() {
        assert_eq!(rational_valuation(&rational(12, 5), 2), Some(2));
        assert_eq!(rational_valuation(&rational(3, 25), 5), Some(-2));
        assert_eq!(rational_valuation(&int(0), 5), None);
    }
}
