//! Fixed-precision p-adic numbers.
//!
//! A nonzero value is `p^val * unit` with `unit` a residue mod `p^prec` prime
//! to `p`; `prec` is the relative precision. A value whose relative precision
//! has dropped to zero is an inexact zero `O(p^val)`. Exact zero is kept
//! separately so that structurally zero entries (identity matrices, sparse
//! inputs) never cost precision.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::{int_valuation, is_prime, Scalar};
use super::KernelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PAdicCtx {
    pub p: u64,
    /// Relative precision given to values created in this context.
    pub precision: u32,
}

impl PAdicCtx {
    pub fn new(p: u64, precision: u32) -> Result<Self, KernelError> {
        if !is_prime(p) {
            return Err(KernelError::NotPrime(p));
        }
        if precision == 0 {
            return Err(KernelError::InvalidPrecision);
        }
        Ok(PAdicCtx { p, precision })
    }
}

#[derive(Clone)]
enum Repr {
    ExactZero,
    /// `prec == 0` encodes the inexact zero `O(p^val)`.
    Approx {
        val: i64,
        prec: u32,
        unit: BigUint,
    },
}

#[derive(Clone)]
pub struct PAdic {
    ctx: PAdicCtx,
    repr: Repr,
}

fn ppow(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    let x = e.x.mod_floor(&m);
    x.to_biguint()
}

impl PAdic {
    pub fn exact_zero(ctx: PAdicCtx) -> Self {
        PAdic {
            ctx,
            repr: Repr::ExactZero,
        }
    }

    /// The inexact zero `O(p^abs)`.
    pub fn big_oh(abs: i64, ctx: PAdicCtx) -> Self {
        PAdic {
            ctx,
            repr: Repr::Approx {
                val: abs,
                prec: 0,
                unit: BigUint::zero(),
            },
        }
    }

    pub fn from_rational(x: &BigRational, ctx: PAdicCtx) -> Self {
        if x.is_zero() {
            return PAdic::exact_zero(ctx);
        }
        let p = ctx.p;
        let vn = int_valuation(x.numer(), p);
        let vd = int_valuation(x.denom(), p);
        let pb = BigInt::from(p);
        let num = x.numer() / pb.pow(vn as u32);
        let den = x.denom() / pb.pow(vd as u32);
        let modulus = ppow(p, ctx.precision);
        let m = BigInt::from(modulus.clone());
        let n = num.mod_floor(&m).to_biguint().unwrap();
        let d = den.mod_floor(&m).to_biguint().unwrap();
        let dinv = mod_inverse(&d, &modulus).expect("denominator is a unit");
        PAdic {
            ctx,
            repr: Repr::Approx {
                val: vn as i64 - vd as i64,
                prec: ctx.precision,
                unit: (n * dinv) % modulus,
            },
        }
    }

    pub fn from_int(n: i64, ctx: PAdicCtx) -> Self {
        PAdic::from_rational(&BigRational::from_integer(BigInt::from(n)), ctx)
    }

    fn from_parts(val: i64, prec: u32, unit: BigUint, ctx: PAdicCtx) -> Self {
        PAdic {
            ctx,
            repr: Repr::Approx { val, prec, unit },
        }
    }

    /// Normalizes `s * p^base` where `s` is known modulo `p^width`.
    fn normalize(s: BigUint, base: i64, width: u32, ctx: PAdicCtx) -> Self {
        if width == 0 || s.is_zero() {
            return PAdic::big_oh(base + width as i64, ctx);
        }
        let pb = BigUint::from(ctx.p);
        let mut s = s;
        let mut w = 0u32;
        while (&s % &pb).is_zero() {
            s /= &pb;
            w += 1;
        }
        let prec = width - w;
        let unit = s % ppow(ctx.p, prec);
        PAdic::from_parts(base + w as i64, prec, unit, ctx)
    }

    /// Same value in another context with the same prime, keeping the known
    /// digits and capping relative precision at the new working precision.
    pub fn with_ctx(&self, ctx: PAdicCtx) -> Self {
        assert_eq!(ctx.p, self.ctx.p, "context change must keep the prime");
        match &self.repr {
            Repr::ExactZero => PAdic::exact_zero(ctx),
            Repr::Approx { val, prec, unit } => {
                let prec = (*prec).min(ctx.precision);
                PAdic::from_parts(*val, prec, unit % ppow(ctx.p, prec), ctx)
            }
        }
    }

    pub fn prime(&self) -> u64 {
        self.ctx.p
    }

    pub fn context(&self) -> PAdicCtx {
        self.ctx
    }

    /// Valuation when it is determined by the stored digits.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Approx { val, prec, .. } if *prec > 0 => Some(*val),
            _ => None,
        }
    }

    /// Lower bound on the valuation; `None` for exact zero.
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Approx { val, .. } => Some(*val),
        }
    }

    pub fn relative_precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Approx { prec, .. } => Some(*prec),
        }
    }

    /// The value is known modulo `p^absolute_precision`; `None` when exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Approx { val, prec, .. } => Some(val + *prec as i64),
        }
    }

    pub fn unit_part(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Approx { prec, unit, .. } if *prec > 0 => Some(unit),
            _ => None,
        }
    }

    /// Caps the absolute precision at `abs`.
    pub fn truncate_absolute(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::Approx { val, prec, unit } => {
                if *val >= abs {
                    PAdic::big_oh(abs.min(val + *prec as i64), self.ctx)
                } else {
                    let new_prec = (*prec as i64).min(abs - val) as u32;
                    PAdic::from_parts(*val, new_prec, unit % ppow(self.ctx.p, new_prec), self.ctx)
                }
            }
        }
    }

    /// Smallest rational `a/b · p^val` consistent with the stored digits,
    /// found by rational reconstruction of the unit part. Returns `None` when
    /// the digits do not determine a small-height rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::ExactZero => Some(BigRational::zero()),
            Repr::Approx { prec: 0, .. } => Some(BigRational::zero()),
            Repr::Approx { val, prec, unit } => {
                let m = BigInt::from(ppow(self.ctx.p, *prec));
                let (a, b) = rational_reconstruct(&BigInt::from(unit.clone()), &m)?;
                let pv = BigRational::from_integer(BigInt::from(self.ctx.p)).pow(*val as i32);
                Some(BigRational::new(a, b) * pv)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = PAdic::from_int(1, self.ctx);
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    fn aligned(&self, v: i64) -> Option<BigUint> {
        match &self.repr {
            Repr::Approx { val, unit, .. } => Some(unit * ppow(self.ctx.p, (val - v) as u32)),
            Repr::ExactZero => None,
        }
    }
}

/// Finds `a/b ≡ u (mod m)` with `|a|, b ≤ sqrt(m/2)`.
fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (a, b) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if !a.gcd(&b).is_one() {
        return None;
    }
    Some((a, b))
}

impl Scalar for PAdic {
    type Ctx = PAdicCtx;

    fn ctx(&self) -> PAdicCtx {
        self.ctx
    }

    fn zero_in(ctx: &PAdicCtx) -> Self {
        PAdic::exact_zero(*ctx)
    }

    fn one_in(ctx: &PAdicCtx) -> Self {
        PAdic::from_int(1, *ctx)
    }

    fn from_i64(n: i64, ctx: &PAdicCtx) -> Self {
        PAdic::from_int(n, *ctx)
    }

    fn plus(&self, rhs: &Self) -> Self {
        let ctx = self.ctx;
        let (a_abs, b_abs) = match (&self.repr, &rhs.repr) {
            (Repr::ExactZero, _) => return rhs.clone(),
            (_, Repr::ExactZero) => return self.clone(),
            _ => (
                self.absolute_precision().unwrap(),
                rhs.absolute_precision().unwrap(),
            ),
        };
        let abs = a_abs.min(b_abs);
        let v = self
            .valuation_lower_bound()
            .unwrap()
            .min(rhs.valuation_lower_bound().unwrap());
        if v >= abs {
            return PAdic::big_oh(abs, ctx);
        }
        let width = (abs - v) as u32;
        let modulus = ppow(ctx.p, width);
        let lhs = if self.valuation_lower_bound().unwrap() >= abs {
            BigUint::zero()
        } else {
            self.aligned(v).unwrap()
        };
        let r = if rhs.valuation_lower_bound().unwrap() >= abs {
            BigUint::zero()
        } else {
            rhs.aligned(v).unwrap()
        };
        PAdic::normalize((lhs + r) % modulus, v, width, ctx)
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }

    fn times(&self, rhs: &Self) -> Self {
        match (&self.repr, &rhs.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => PAdic::exact_zero(self.ctx),
            (
                Repr::Approx {
                    val: va,
                    prec: pa,
                    unit: ua,
                },
                Repr::Approx {
                    val: vb,
                    prec: pb,
                    unit: ub,
                },
            ) => {
                let prec = (*pa).min(*pb);
                if prec == 0 {
                    return PAdic::big_oh(va + vb, self.ctx);
                }
                let unit = (ua * ub) % ppow(self.ctx.p, prec);
                PAdic::from_parts(va + vb, prec, unit, self.ctx)
            }
        }
    }

    fn negate(&self) -> Self {
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::Approx { prec: 0, .. } => self.clone(),
            Repr::Approx { val, prec, unit } => {
                let m = ppow(self.ctx.p, *prec);
                PAdic::from_parts(*val, *prec, (&m - unit) % &m, self.ctx)
            }
        }
    }

    fn inverse(&self) -> Result<Self, KernelError> {
        match &self.repr {
            Repr::ExactZero => Err(KernelError::DivisionByZero),
            Repr::Approx { prec: 0, val, .. } => Err(KernelError::PrecisionExhausted(format!(
                "cannot invert O({}^{})",
                self.ctx.p, val
            ))),
            Repr::Approx { val, prec, unit } => {
                let m = ppow(self.ctx.p, *prec);
                let inv = mod_inverse(unit, &m).expect("unit part is prime to p");
                Ok(PAdic::from_parts(-val, *prec, inv, self.ctx))
            }
        }
    }

    fn vanishes(&self) -> bool {
        match &self.repr {
            Repr::ExactZero => true,
            Repr::Approx { prec, .. } => *prec == 0,
        }
    }

    fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    fn pivot_rank(&self) -> i64 {
        self.valuation().unwrap_or(i64::MAX)
    }
}

/// Equality to the precision of the less precise operand.
impl PartialEq for PAdic {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p == other.ctx.p && self.minus(other).vanishes()
    }
}

impl fmt::Debug for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::Approx { val, prec: 0, .. } => write!(f, "O({}^{})", self.ctx.p, val),
            Repr::Approx { val, prec, .. } => match self.to_rational() {
                Some(r) => write!(f, "{} + O({}^{})", r, self.ctx.p, val + *prec as i64),
                None => {
                    let unit = self.unit_part().unwrap();
                    write!(
                        f,
                        "{}*{}^{} + O({}^{})",
                        unit,
                        self.ctx.p,
                        val,
                        self.ctx.p,
                        val + *prec as i64
                    )
                }
            },
        }
    }
}

/// Centered residue of an integer modulo `p^k` as a signed machine integer,
/// used for compact report output.
pub fn centered_residue(x: &BigUint, p: u64, k: u32) -> Option<i128> {
    let m = ppow(p, k);
    let half = &m / 2u32;
    let v = if x > &half {
        BigInt::from_biguint(Sign::Minus, &m - x)
    } else {
        BigInt::from(x.clone())
    };
    v.to_i128()
}
