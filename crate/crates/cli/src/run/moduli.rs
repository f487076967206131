use levelraise::kernel::{Matrix, Rational};
use levelraise::lparam::{
    component_representatives, components_through, degeneration_witness, is_degenerate_satake,
    jordan_partition, pgl2_check, solution_space,
};
use serde_json::{json, Value};

use crate::input::{expr, inline_matrix, list};
use crate::report::Builder;
use crate::{CliError, ModuliCmd, Opts};

fn scalar_l(text: &str) -> Result<Rational, CliError> {
    expr(text, None).map_err(|e| CliError::Usage(format!("--l: {}", e)))
}

fn diagonal(text: &str, l: &Rational) -> Result<Matrix<Rational>, CliError> {
    let d = list(text, Some(l)).map_err(|e| CliError::Usage(format!("--diag: {}", e)))?;
    Ok(Matrix::diagonal(&d, ()))
}

fn pgl2(l: &Rational, b: &mut Builder) -> Result<Value, CliError> {
    let r = pgl2_check(l).map_err(CliError::lib)?;
    b.check(
        "pgl2_not_intersection",
        r.not_intersection,
        format!("solution dimension {}", r.solution_dim),
    );
    Ok(json!({ "group": "pgl2", "pgl2": r }))
}

pub fn run(cmd: ModuliCmd, opts: &Opts, b: &mut Builder) -> Result<Value, CliError> {
    match cmd {
        ModuliCmd::Pgl2 { l } => pgl2(&scalar_l(&l)?, b),
        ModuliCmd::Components { diag, l, group } => {
            let l = scalar_l(&l)?;
            if group == "pgl2" {
                return pgl2(&l, b);
            }
            let n: Option<usize> = match group.strip_prefix("gl") {
                Some("") => None,
                Some(n) => Some(
                    n.parse()
                        .map_err(|_| CliError::Usage(format!("unknown group `{}`", group)))?,
                ),
                None => return Err(CliError::Usage(format!("unknown group `{}`", group))),
            };
            let diag =
                diag.ok_or_else(|| CliError::Usage("--diag is required for gl<n>".into()))?;
            let s = diagonal(&diag, &l)?;
            if let Some(n) = n {
                if n != s.rows() {
                    return Err(CliError::Usage(format!(
                        "--diag has {} entries but the group is gl{}",
                        s.rows(),
                        n
                    )));
                }
            }
            components(&s, &l, opts, b)
        }
        ModuliCmd::Witness { diag, l, n } => {
            let l = scalar_l(&l)?;
            let s = diagonal(&diag, &l)?;
            let nm =
                inline_matrix(&n, Some(&l)).map_err(|e| CliError::Usage(format!("--n: {}", e)))?;
            let w = degeneration_witness(&s, &nm, &l).map_err(CliError::lib)?;
            let jordan = jordan_partition(&nm).map_err(CliError::lib)?;
            b.check("witness_verified", w.verified(), format!("mu = {:?}", w.mu));
            Ok(json!({
                "partition": jordan.to_string(),
                "witness": w,
            }))
        }
    }
}

fn components(
    s: &Matrix<Rational>,
    l: &Rational,
    opts: &Opts,
    b: &mut Builder,
) -> Result<Value, CliError> {
    let report = components_through(s, l, opts.exec).map_err(CliError::lib)?;
    let degenerate = is_degenerate_satake(s, l).map_err(CliError::lib)?;
    b.check(
        "nontrivial_iff_degenerate",
        report.has_nontrivial() == degenerate,
        format!("degenerate = {}", degenerate),
    );
    let reps = component_representatives(s, l, opts.exec).map_err(CliError::lib)?;
    let mut witnesses = serde_json::Map::new();
    let mut missing = Vec::new();
    for p in &report.partitions {
        match reps.get(p) {
            Some(n) => {
                let w = degeneration_witness(s, n, l).map_err(CliError::lib)?;
                if !w.verified() {
                    missing.push(p.to_string());
                }
                witnesses.insert(
                    p.to_string(),
                    json!({ "mu": w.mu, "verified": w.verified() }),
                );
            }
            None => missing.push(p.to_string()),
        }
    }
    b.check(
        "witnesses_verified",
        missing.is_empty(),
        if missing.is_empty() {
            String::new()
        } else {
            format!("no verified witness for {}", missing.join(" "))
        },
    );
    let basis_dim = solution_space(s, l).map_err(CliError::lib)?.len();
    Ok(json!({
        "group": format!("gl{}", s.rows()),
        "diag": (0..s.rows()).map(|i| s.get(i, i).to_string()).collect::<Vec<_>>(),
        "l": l.to_string(),
        "solution_dim": basis_dim,
        "degenerate": degenerate,
        "exact": report.exact,
        "partitions": report.partitions.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "realized": report.realized.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "witnesses": witnesses,
    }))
}
