use levelraise::analytic::{
    central_weight_test, ihara_rank_test, monomials, torus_rigidity_check, unit_group_generators,
    Character, Model, Weight,
};
use levelraise::kernel::Rational;
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::input::list;
use crate::report::Builder;
use crate::{AnalyticCmd, CliError, Opts};

fn character(text: &str, p: u64, k: u32, gens: &[(u64, u64)]) -> Result<Character, CliError> {
    let xs = list(text, None).map_err(|e| CliError::Usage(format!("character images: {}", e)))?;
    if xs.len() != gens.len() {
        if xs.iter().all(|x| x.is_zero()) {
            return Character::trivial(p, k).map_err(CliError::lib);
        }
        return Err(CliError::Usage(format!(
            "expected {} generator images, got {}",
            gens.len(),
            xs.len()
        )));
    }
    let images: Vec<(u64, Rational)> = gens.iter().map(|(g, _)| *g).zip(xs).collect();
    Character::from_images(p, k, &images).map_err(CliError::lib)
}

pub fn run(cmd: AnalyticCmd, opts: &Opts, b: &mut Builder) -> Result<Value, CliError> {
    match cmd {
        AnalyticCmd::Ihara { p, m, degree } => {
            let model = Model::new(p, m, degree).map_err(CliError::lib)?;
            let size = model.num_balls() * model.num_monomials();
            if let Some(budget) = opts.budget {
                if size > budget {
                    return Err(CliError::Usage(format!(
                        "{} coefficients exceed the budget of {}",
                        size, budget
                    )));
                }
            }
            let delta = Rational::from_integer(BigInt::from(p).pow(m));
            let mut rows = Vec::new();
            for d in 0..=degree {
                let r = ihara_rank_test(d, &delta, opts.exec);
                b.check(
                    &format!("full_rank_degree_{}", d),
                    r.passed(),
                    format!("rank {} of {}", r.rank, r.target_dim),
                );
                rows.push(r);
            }
            Ok(json!({
                "model": model,
                "balls": model.num_balls(),
                "monomials_per_ball": monomials(degree).len(),
                "delta": delta.to_string(),
                "rank_table": rows,
            }))
        }
        AnalyticCmd::Weight {
            p,
            k,
            chi1,
            chi2,
            chi3,
        } => {
            let gens = unit_group_generators(p, k).map_err(CliError::lib)?;
            let chi = [
                character(&chi1, p, k, &gens)?,
                character(&chi2, p, k, &gens)?,
                character(&chi3, p, k, &gens)?,
            ];
            let orders: Vec<String> = chi.iter().map(|c| c.order().to_string()).collect();
            let w = Weight { chi };
            let central = central_weight_test(&w);
            let rigidity = torus_rigidity_check(&w);
            b.check("torus_rigidity", rigidity.passed(), "");
            Ok(json!({
                "p": p,
                "k": k,
                "generators": gens,
                "character_orders": orders,
                "central": central,
                "pairs": rigidity.pairs,
            }))
        }
    }
}
