use levelraise::kernel::{int, is_prime, Fp, Rational, Scalar};
use levelraise::satake::{
    classify_principal_series, deg_inert_tl, gaussian_binomial, level_raising_condition,
    spherical_eigenvalue, very_eisenstein_check, PrincipalSeries, SatakeParam, SplitEigensystem,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::input::expr;
use crate::report::Builder;
use crate::{CliError, Opts, SatakeCmd};

fn param(alpha: &str, l: u64) -> Result<SatakeParam, CliError> {
    let lr = int(l as i64);
    let a = expr(alpha, Some(&lr)).map_err(|e| CliError::Usage(format!("--alpha: {}", e)))?;
    SatakeParam::new(a, l).map_err(CliError::lib)
}

/// λ is symmetric in α ↔ α⁻¹, and at the reducible points it takes the
/// dictionary values.
fn dictionary_checks(s: &SatakeParam, b: &mut Builder) -> Result<(), CliError> {
    let lambda = spherical_eigenvalue(s);
    b.check(
        "lambda_symmetric",
        lambda == spherical_eigenvalue(&s.inverse()),
        "",
    );
    let l = int(s.l() as i64);
    let deg = Rational::from_integer(deg_inert_tl(s.l()).map_err(CliError::lib)?);
    let expected = match classify_principal_series(s) {
        PrincipalSeries::CharacterPlusSteinberg => Some(deg),
        PrincipalSeries::TwoUnramifiedFactors => Some(-(&l * &l * &l + int(1))),
        PrincipalSeries::Irreducible => None,
    };
    if let Some(e) = expected {
        b.check(
            "dictionary_value",
            lambda == e,
            format!("lambda = {}, expected {}", lambda, e),
        );
    }
    Ok(())
}

pub fn run(cmd: SatakeCmd, _opts: &Opts, b: &mut Builder) -> Result<Value, CliError> {
    match cmd {
        SatakeCmd::Classify { alpha, l } => {
            let s = param(&alpha, l)?;
            dictionary_checks(&s, b)?;
            Ok(json!({
                "alpha": s.alpha().to_string(),
                "l": l,
                "classification": classify_principal_series(&s).to_string(),
                "lambda": spherical_eigenvalue(&s).to_string(),
            }))
        }
        SatakeCmd::Eig { alpha, l, p } => {
            let s = param(&alpha, l)?;
            dictionary_checks(&s, b)?;
            let lambda = spherical_eigenvalue(&s);
            let mut out = json!({
                "alpha": s.alpha().to_string(),
                "l": l,
                "lambda": lambda.to_string(),
                "deg_t_l": deg_inert_tl(l).map_err(CliError::lib)?.to_string(),
                "level_raising": level_raising_condition(&lambda, l, None).map_err(CliError::lib)?,
            });
            if let Some(p) = p {
                out["level_raising_mod_p"] = json!({
                    "p": p,
                    "holds": level_raising_condition(&lambda, l, Some(p)).map_err(CliError::lib)?,
                });
            }
            Ok(out)
        }
        SatakeCmd::VeCheck {
            q,
            t1,
            t2,
            t3,
            psi,
            p,
        } => {
            let vals: Vec<Rational> = [&t1, &t2, &t3, &psi]
                .iter()
                .map(|t| expr(t, None))
                .collect::<Result<_, _>>()
                .map_err(CliError::Usage)?;
            let verdict = match p {
                None => check(q, vals)?,
                Some(p) => {
                    if !is_prime(p) {
                        return Err(CliError::Usage(format!("{} is not prime", p)));
                    }
                    let reduced = vals
                        .iter()
                        .map(|r| reduce(r, p))
                        .collect::<Result<Vec<_>, _>>()?;
                    check(q, reduced)?
                }
            };
            let deg1 = gaussian_binomial(3, 1, q).map_err(CliError::lib)?;
            let qq = BigInt::from(q);
            b.check(
                "hecke_degree",
                deg1 == BigInt::from(1u32) + &qq + &qq * &qq,
                format!("deg T_q,1 = {}", deg1),
            );
            b.check("very_eisenstein", verdict, "");
            Ok(json!({
                "q": q,
                "field": p.map_or("Q".to_string(), |p| format!("F_{}", p)),
                "deg_t_q": [
                    deg1.to_string(),
                    gaussian_binomial(3, 2, q).map_err(CliError::lib)?.to_string(),
                    "1",
                ],
                "very_eisenstein": verdict,
            }))
        }
    }
}

fn reduce(r: &Rational, p: u64) -> Result<Fp, CliError> {
    let n = Fp::from_bigint(r.numer(), p);
    let d = Fp::from_bigint(r.denom(), p);
    let inv = d
        .inverse()
        .map_err(|_| CliError::Usage(format!("{} has a denominator divisible by {}", r, p)))?;
    Ok(n.times(&inv))
}

fn check<T: Scalar>(q: u64, vals: Vec<T>) -> Result<bool, CliError> {
    let mut it = vals.into_iter();
    let (t1, t2, t3, psi) = (
        it.next().expect("four values"),
        it.next().expect("four values"),
        it.next().expect("four values"),
        it.next().expect("four values"),
    );
    very_eisenstein_check(&SplitEigensystem { q, t1, t2, t3 }, &psi).map_err(CliError::lib)
}
