//! Hecke degrees, the spherical `T_l`-eigenvalue of an unramified
//! representation of `U(3)` at an inert prime as a function of its Satake
//! parameter, the principal series classification, and the very-Eisenstein
//! predicate at split primes.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{int, is_prime, padic_valuation, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatakeError {
    #[error("Satake parameter must be nonzero")]
    ZeroParameter,
    #[error("l = {0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("index {i} out of range for n = {n}")]
    OutOfRange { n: u32, i: u32 },
    #[error("psi value is not invertible")]
    NotInvertible,
}

/// Rank-one Satake parameter `α` of an unramified representation at `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatakeParam {
    alpha: Rational,
    l: u64,
}

impl SatakeParam {
    pub fn new(alpha: Rational, l: u64) -> Result<Self, SatakeError> {
        if !is_prime(l) {
            return Err(SatakeError::NotPrime(l));
        }
        if alpha.is_zero() {
            return Err(SatakeError::ZeroParameter);
        }
        Ok(SatakeParam { alpha, l })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn inverse(&self) -> SatakeParam {
        SatakeParam {
            alpha: self.alpha.recip(),
            l: self.l,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrincipalSeries {
    Irreducible,
    CharacterPlusSteinberg,
    TwoUnramifiedFactors,
}

impl fmt::Display for PrincipalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrincipalSeries::Irreducible => "Irreducible",
            PrincipalSeries::CharacterPlusSteinberg => "CharacterPlusSteinberg",
            PrincipalSeries::TwoUnramifiedFactors => "TwoUnramifiedFactors",
        })
    }
}

/// Eigenvalues of `T_{q,1}, T_{q,2}, T_{q,3}` at a split prime `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitEigensystem<T: Scalar> {
    pub q: u64,
    pub t1: T,
    pub t2: T,
    pub t3: T,
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

/// Number of `i`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: u32, i: u32, q: u64) -> Result<BigInt, SatakeError> {
    if i > n {
        return Err(SatakeError::OutOfRange { n, i });
    }
    if !is_prime_power(q) {
        return Err(SatakeError::NotPrimePower(q));
    }
    let q = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..i {
        num *= q.pow(n - k) - 1u32;
        den *= q.pow(k + 1) - 1u32;
    }
    Ok(num / den)
}

/// Degree of `T_l` at an inert prime: the number of hyperspecial vertices at
/// distance two from a fixed one, `l(l³+1)`.
pub fn deg_inert_tl(l: u64) -> Result<BigInt, SatakeError> {
    if !is_prime(l) {
        return Err(SatakeError::NotPrime(l));
    }
    let l = BigInt::from(l);
    Ok(&l * (l.pow(3) + 1u32))
}

/// `λ(α) = l²(α + α⁻¹) + l − 1`.
pub fn spherical_eigenvalue(s: &SatakeParam) -> Rational {
    let l = int(s.l as i64);
    &l * &l * (&s.alpha + s.alpha.recip()) + &l - int(1)
}

pub fn classify_principal_series(s: &SatakeParam) -> PrincipalSeries {
    let l = int(s.l as i64);
    let a = &s.alpha;
    let l2 = &l * &l;
    if *a == l2 || *a == l2.recip() {
        PrincipalSeries::CharacterPlusSteinberg
    } else if *a == -&l || *a == -l.recip() {
        PrincipalSeries::TwoUnramifiedFactors
    } else {
        PrincipalSeries::Irreducible
    }
}

/// True iff `t1 = (1+q+q²)ψ⁻¹`, `t2 = (1+q+q²)ψ⁻²` and `t3 = ψ⁻³`.
pub fn very_eisenstein_check<T: Scalar>(
    es: &SplitEigensystem<T>,
    psi: &T,
) -> Result<bool, SatakeError> {
    let ctx = psi.ctx();
    let inv = psi.inverse().map_err(|_| SatakeError::NotInvertible)?;
    if inv.vanishes() {
        return Err(SatakeError::NotInvertible);
    }
    let q = es.q as i64;
    let deg = T::from_i64(1 + q + q * q, &ctx);
    let inv2 = inv.times(&inv);
    let inv3 = inv2.times(&inv);
    Ok(es.t1.minus(&deg.times(&inv)).vanishes()
        && es.t2.minus(&deg.times(&inv2)).vanishes()
        && es.t3.minus(&inv3).vanishes())
}

/// `λ = l(l³+1)` exactly, or modulo `p` when `p` is given.
pub fn level_raising_condition(
    lambda: &Rational,
    l: u64,
    p: Option<u64>,
) -> Result<bool, SatakeError> {
    let target = Rational::from_integer(deg_inert_tl(l)?);
    let diff = lambda - target;
    match p {
        None => Ok(diff.is_zero()),
        Some(p) => {
            let v = padic_valuation(&diff, p).map_err(|_| SatakeError::NotPrime(p))?;
            Ok(v.is_none_or(|v| v >= 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{rational, Fp};

    fn param(a: Rational, l: u64) -> SatakeParam {
        SatakeParam::new(a, l).unwrap()
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_binomial(3, 1, 2).unwrap(), BigInt::from(7));
        assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), BigInt::from(35));
        assert_eq!(gaussian_binomial(5, 0, 3).unwrap(), BigInt::one());
        assert_eq!(gaussian_binomial(3, 2, 5).unwrap(), BigInt::from(31));
        assert!(gaussian_binomial(2, 3, 2).is_err());
        assert!(gaussian_binomial(2, 1, 6).is_err());
        assert!(gaussian_binomial(2, 1, 4).is_ok());
    }

    #[test]
    fn degrees() {
        let d: Vec<_> = [2, 3, 5]
            .iter()
            .map(|&l| deg_inert_tl(l).unwrap())
            .collect();
        assert_eq!(
            d,
            vec![BigInt::from(18), BigInt::from(84), BigInt::from(630)]
        );
    }

    #[test]
    fn dictionary_values() {
        for l in [2u64, 3, 5] {
            let li = l as i64;
            let top = int(li * (li * li * li + 1));
            let bottom = int(-(li * li * li + 1));
            assert_eq!(spherical_eigenvalue(&param(int(li * li), l)), top);
            assert_eq!(spherical_eigenvalue(&param(rational(1, li * li), l)), top);
            assert_eq!(spherical_eigenvalue(&param(int(-li), l)), bottom);
            assert_eq!(spherical_eigenvalue(&param(rational(-1, li), l)), bottom);
        }
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_principal_series(&param(int(4), 2)),
            PrincipalSeries::CharacterPlusSteinberg
        );
        assert_eq!(
            classify_principal_series(&param(int(-2), 2)),
            PrincipalSeries::TwoUnramifiedFactors
        );
        assert_eq!(
            classify_principal_series(&param(int(1), 2)),
            PrincipalSeries::Irreducible
        );
        assert!(SatakeParam::new(int(0), 2).is_err());
    }

    #[test]
    fn very_eisenstein() {
        let es = |a: i64, b: i64, c: i64| SplitEigensystem {
            q: 2,
            t1: int(a),
            t2: int(b),
            t3: int(c),
        };
        assert!(very_eisenstein_check(&es(7, 7, 1), &int(1)).unwrap());
        assert!(very_eisenstein_check(&es(-7, 7, -1), &int(-1)).unwrap());
        assert!(!very_eisenstein_check(&es(0, 0, 1), &int(1)).unwrap());
        assert!(very_eisenstein_check(&es(7, 7, 1), &int(0)).is_err());
        let f = |n| Fp::new(n, 5);
        let es5 = SplitEigensystem {
            q: 2,
            t1: f(7),
            t2: f(7),
            t3: f(1),
        };
        assert!(very_eisenstein_check(&es5, &f(1)).unwrap());
    }

    #[test]
    fn level_raising() {
        assert!(level_raising_condition(&int(18), 2, None).unwrap());
        assert!(level_raising_condition(&int(-9), 2, Some(3)).unwrap());
        assert!(!level_raising_condition(&int(0), 2, Some(5)).unwrap());
        assert!(!level_raising_condition(&int(-9), 2, None).unwrap());
    }
}
