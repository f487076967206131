use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::KernelError;

/// Coefficient domain shared by every matrix and polynomial in the crate.
///
/// Scalars of a domain that needs side information (the modulus of a prime
/// field, the prime and working precision of a p-adic field) carry it in
/// [`Scalar::Ctx`], so that generic code can manufacture zeros and ones.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self;

    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn inverse(&self) -> Result<Self, KernelError>;

    /// True for zero, including "zero to the working precision" for
    /// approximate domains.
    fn vanishes(&self) -> bool;

    /// Zero carrying no precision information; multiplying by it is free.
    fn is_exact_zero(&self) -> bool {
        self.vanishes()
    }

    /// Pivot preference for elimination; lower is better.
    fn pivot_rank(&self) -> i64 {
        0
    }

    fn is_unity(&self) -> bool {
        self.minus(&Self::one_in(&self.ctx())).vanishes()
    }
}

pub type Rational = BigRational;

impl Scalar for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        BigRational::zero()
    }
    fn one_in(_: &()) -> Self {
        BigRational::one()
    }
    fn from_i64(n: i64, _: &()) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self, KernelError> {
        if Zero::is_zero(self) {
            Err(KernelError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for BigInt {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        BigInt::zero()
    }
    fn one_in(_: &()) -> Self {
        BigInt::one()
    }
    fn from_i64(n: i64, _: &()) -> Self {
        BigInt::from(n)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self, KernelError> {
        if self.abs().is_one() {
            Ok(self.clone())
        } else {
            Err(KernelError::NotInvertible(self.to_string()))
        }
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

/// Element of the prime field `F_p`, stored as its least nonnegative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    /// `modulus` must be prime; callers validate that once per computation.
    pub fn new(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let v = ((value as i128 % m) + m) % m;
        Fp {
            value: v as u64,
            modulus,
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Self {
        let m = BigInt::from(modulus);
        let r = ((value % &m) + &m) % &m;
        Fp {
            value: u64::try_from(&r).expect("residue fits"),
            modulus,
        }
    }

    /// Reduces a rational whose denominator is prime to the modulus.
    pub fn from_rational(value: &BigRational, modulus: u64) -> Result<Self, KernelError> {
        let den = Fp::from_bigint(value.denom(), modulus);
        let num = Fp::from_bigint(value.numer(), modulus);
        Ok(num.times(&den.inverse()?))
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Signed representative in `(-p/2, p/2]`.
    pub fn centered(&self) -> i64 {
        if self.value > self.modulus / 2 {
            self.value as i64 - self.modulus as i64
        } else {
            self.value as i64
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Fp::new(1, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Scalar for Fp {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.modulus
    }
    fn zero_in(p: &u64) -> Self {
        Fp::new(0, *p)
    }
    fn one_in(p: &u64) -> Self {
        Fp::new(1, *p)
    }
    fn from_i64(n: i64, p: &u64) -> Self {
        Fp::new(n, *p)
    }
    fn plus(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: ((self.value as u128 + rhs.value as u128) % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }
    fn times(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            value: ((self.value as u128 * rhs.value as u128) % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }
    fn negate(&self) -> Self {
        Fp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
    fn inverse(&self) -> Result<Self, KernelError> {
        if self.value == 0 {
            return Err(KernelError::DivisionByZero);
        }
        Ok(self.pow(self.modulus - 2))
    }
    fn vanishes(&self) -> bool {
        self.value == 0
    }
}

/// Deterministic primality test for the word-sized primes used as
/// parameters throughout (l, p, q).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `v_p(x)`, or `None` for `x = 0` (valuation +∞).
pub fn padic_valuation(x: &BigRational, p: u64) -> Result<Option<i64>, KernelError> {
    if !is_prime(p) {
        return Err(KernelError::NotPrime(p));
    }
    if Zero::is_zero(x) {
        return Ok(None);
    }
    Ok(Some(
        int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64,
    ))
}

pub(crate) fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!Zero::is_zero(n));
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while Zero::is_zero(&(&n % &p)) {
        n /= &p;
        v += 1;
    }
    v
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&int(8), 2).unwrap(), Some(3));
        assert_eq!(padic_valuation(&rational(1, 9), 3).unwrap(), Some(-2));
        assert_eq!(padic_valuation(&rational(10, 3), 5).unwrap(), Some(1));
        assert_eq!(padic_valuation(&int(0), 7).unwrap(), None);
    }

    #[test]
    fn composite_prime_rejected() {
        assert!(matches!(
            padic_valuation(&int(8), 4),
            Err(KernelError::NotPrime(4))
        ));
    }

    #[test]
    fn prime_field_arithmetic() {
        let a = Fp::new(3, 7);
        let b = Fp::new(-2, 7);
        assert_eq!(b.value(), 5);
        assert_eq!(a.times(&b).value(), 1);
        assert_eq!(a.inverse().unwrap(), b);
        assert_eq!(Fp::new(6, 7).centered(), -1);
        assert!(Fp::new(0, 7).inverse().is_err());
        let half = Fp::from_rational(&rational(1, 2), 7).unwrap();
        assert_eq!(half.times(&Fp::new(2, 7)).value(), 1);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..50).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        );
    }
}
