use levelraise::kernel::{PAdic, Polynomial};
use levelraise::slope::rational_coeffs;
use num_traits::{One, Signed, Zero};

pub mod analytic;
pub mod graph;
pub mod moduli;
pub mod satake;
pub mod slope;
pub mod tree;

/// `1 - 4*T + 3*T^2`; coefficients without a rational reconstruction are
/// shown in parentheses.
pub fn render_poly(p: &Polynomial<PAdic>, var: &str) -> String {
    let mut out = String::new();
    for (i, (c, r)) in p.coeffs().iter().zip(rational_coeffs(p)).enumerate() {
        let (neg, body) = match r {
            Some(r) if r.is_zero() => continue,
            Some(r) => {
                let a = r.abs();
                let body = if a.is_one() && i > 0 {
                    String::new()
                } else {
                    a.to_string()
                };
                (r.is_negative(), body)
            }
            None => (false, format!("({})", c)),
        };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        let term = match (body.is_empty(), mono.is_empty()) {
            (true, _) => mono,
            (false, true) => body,
            (false, false) => format!("{}*{}", body, mono),
        };
        if out.is_empty() {
            out = if neg { format!("-{}", term) } else { term };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Coefficients as strings, rational where reconstruction succeeds.
pub fn coeff_strings(p: &Polynomial<PAdic>) -> Vec<String> {
    p.coeffs()
        .iter()
        .zip(rational_coeffs(p))
        .map(|(c, r)| r.map_or_else(|| c.to_string(), |r| r.to_string()))
        .collect()
}
