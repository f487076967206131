use levelraise::kernel::{Matrix, PAdic, Polynomial, Rational, Scalar};
use levelraise::slope::{
    fredholm_series, newton_polygon, padic_ctx, padic_matrix, padic_poly, slope_decomposition,
    slope_factorization, NewtonPolygon,
};
use serde_json::{json, Value};

use super::{coeff_strings, render_poly};
use crate::input::{expr, inline_matrix, list, matrix_text, read};
use crate::report::Builder;
use crate::{CliError, MatrixSource, Opts, SlopeCmd};

fn matrix(source: &MatrixSource, b: &mut Builder) -> Result<Option<Matrix<Rational>>, CliError> {
    match (&source.matrix, &source.inline) {
        (Some(path), _) => {
            let text = read(path)?;
            b.input(text.as_bytes());
            matrix_text(&text, &path.display().to_string()).map(Some)
        }
        (None, Some(text)) => inline_matrix(text, None)
            .map(Some)
            .map_err(|e| CliError::Usage(format!("--inline: {}", e))),
        (None, None) => Ok(None),
    }
}

fn polygon_json(np: &NewtonPolygon) -> Value {
    json!({
        "vertices": np.vertices,
        "segments": np
            .segments()
            .iter()
            .map(|s| json!({ "slope": s.slope.to_string(), "length": s.length }))
            .collect::<Vec<_>>(),
    })
}

fn slope_h(text: &str) -> Result<Rational, CliError> {
    expr(text, None).map_err(|e| CliError::Usage(format!("--h: {}", e)))
}

fn coefficients(text: &str) -> Result<Vec<Rational>, CliError> {
    list(text, None).map_err(|e| CliError::Usage(format!("--poly: {}", e)))
}

/// `P − QS` vanishes to the working precision.
fn residual_vanishes(p: &Polynomial<PAdic>, q: &Polynomial<PAdic>, s: &Polynomial<PAdic>) -> bool {
    p.sub(&q.mul(s)).coeffs().iter().all(|c| c.vanishes())
}

pub fn run(cmd: SlopeCmd, _opts: &Opts, b: &mut Builder) -> Result<Value, CliError> {
    match cmd {
        SlopeCmd::Series {
            source,
            p,
            precision,
        } => {
            let m = matrix(&source, b)?
                .ok_or_else(|| CliError::Usage("give --matrix or --inline".into()))?;
            let ctx = padic_ctx(p, precision).map_err(CliError::lib)?;
            let series = fredholm_series(&padic_matrix(&m, ctx)).map_err(CliError::lib)?;
            b.check(
                "constant_term_one",
                series.coeff(0).minus(&PAdic::one_in(&ctx)).vanishes(),
                "",
            );
            Ok(json!({
                "p": p,
                "precision": precision,
                "coefficients": coeff_strings(&series),
                "series": render_poly(&series, "T"),
            }))
        }
        SlopeCmd::Polygon {
            poly,
            source,
            p,
            precision,
        } => {
            let ctx = padic_ctx(p, precision).map_err(CliError::lib)?;
            let series = match (poly, matrix(&source, b)?) {
                (Some(text), None) => padic_poly(&coefficients(&text)?, ctx),
                (None, Some(m)) => {
                    fredholm_series(&padic_matrix(&m, ctx)).map_err(CliError::lib)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --poly, --matrix, --inline".into(),
                    ))
                }
            };
            let np = newton_polygon(&series).map_err(CliError::lib)?;
            let segments = np.segments();
            let increasing = segments.windows(2).all(|w| w[0].slope < w[1].slope);
            b.check("slopes_increasing", increasing, "");
            Ok(json!({
                "p": p,
                "series": render_poly(&series, "T"),
                "polygon": polygon_json(&np),
            }))
        }
        SlopeCmd::Factor {
            poly,
            p,
            h,
            precision,
        } => {
            let ctx = padic_ctx(p, precision).map_err(CliError::lib)?;
            let h = slope_h(&h)?;
            let series = padic_poly(&coefficients(&poly)?, ctx);
            let np = newton_polygon(&series).map_err(CliError::lib)?;
            let f = slope_factorization(&series, &h, precision).map_err(CliError::lib)?;
            b.check(
                "product_recovers_series",
                residual_vanishes(&series, &f.q, &f.s),
                format!("to precision {}", precision),
            );
            b.check(
                "q_degree_matches_polygon",
                f.q.degree().unwrap_or(0) == np.length_up_to(&h),
                format!("deg Q = {}", f.m),
            );
            Ok(json!({
                "p": p,
                "h": h.to_string(),
                "polygon": polygon_json(&np),
                "q": render_poly(&f.q, "T"),
                "s": render_poly(&f.s, "T"),
                "q_coefficients": coeff_strings(&f.q),
                "s_coefficients": coeff_strings(&f.s),
                "q_tilde": render_poly(&f.q_tilde(), "T"),
                "m": f.m,
                "iterations": f.iterations,
            }))
        }
        SlopeCmd::Decompose {
            source,
            p,
            h,
            precision,
        } => {
            let m = matrix(&source, b)?
                .ok_or_else(|| CliError::Usage("give --matrix or --inline".into()))?;
            let ctx = padic_ctx(p, precision).map_err(CliError::lib)?;
            let h = slope_h(&h)?;
            let d = slope_decomposition(&padic_matrix(&m, ctx), &h, precision)
                .map_err(CliError::lib)?;
            let c = &d.checks;
            for (name, ok) in [
                ("q_dim_matches_polygon", c.q_dim_matches_polygon),
                ("spans_fill_space", c.spans_fill_space),
                ("q_tilde_annihilates_q_part", c.q_tilde_annihilates_q_part),
                (
                    "q_tilde_invertible_on_complement",
                    c.q_tilde_invertible_on_complement,
                ),
                ("q_part_stable", c.q_part_stable),
                ("complement_stable", c.complement_stable),
                ("projector_idempotent", c.projector_idempotent),
                ("projector_commutes", c.projector_commutes),
            ] {
                b.check(name, ok, "");
            }
            Ok(json!({
                "p": p,
                "h": h.to_string(),
                "dimension": m.rows(),
                "polygon": polygon_json(&d.polygon),
                "q": render_poly(&d.factorization.q, "T"),
                "s": render_poly(&d.factorization.s, "T"),
                "q_part_dim": d.q_part.len(),
                "complement_dim": d.complement.len(),
            }))
        }
    }
}
