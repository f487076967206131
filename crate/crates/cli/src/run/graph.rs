use levelraise::cosets::{
    congruence_module, det_identity_check, ihara_kernel_test, integer_spectrum,
    kernel_eigenvalue_check, level_matrix, level_raising_search, old_new_decomposition,
    random_biregular, AuxFamily, CosetError, CosetGraph, DetLabeling,
};
use levelraise::kernel::QuotientStructure;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::input::read;
use crate::report::Builder;
use crate::{CliError, GraphCmd, GraphSource, Opts};

fn coset_err(path: &str, e: CosetError) -> CliError {
    match e {
        CosetError::Parse { line, msg } => CliError::Parse {
            path: path.to_string(),
            line,
            msg,
        },
        other => CliError::lib(other),
    }
}

fn load(source: &GraphSource, opts: &Opts, b: &mut Builder) -> Result<CosetGraph, CliError> {
    match (&source.path, source.random) {
        (Some(path), _) => {
            let text = read(path)?;
            b.input(text.as_bytes());
            CosetGraph::parse(&text).map_err(|e| coset_err(&path.display().to_string(), e))
        }
        (None, Some(n0)) => random_biregular(source.l, n0, opts.seed).map_err(CliError::lib),
        (None, None) => Err(CliError::Usage("give a graph file or --random <n0>".into())),
    }
}

fn load_labels(
    path: Option<&std::path::PathBuf>,
    g: &CosetGraph,
    b: &mut Builder,
) -> Result<Option<DetLabeling>, CliError> {
    let Some(path) = path else { return Ok(None) };
    let text = read(path)?;
    b.input(text.as_bytes());
    DetLabeling::parse(&text, g)
        .map(Some)
        .map_err(|e| coset_err(&path.display().to_string(), e))
}

fn shape(g: &CosetGraph) -> Value {
    json!({
        "l": g.l(),
        "v0": g.n0(),
        "v1": g.n1(),
        "edges": g.num_edges(),
        "components": g.num_components(),
        "degrees": [g.degree0(), g.degree1()],
    })
}

fn quotient(q: &QuotientStructure) -> Value {
    json!({
        "free_rank": q.free_rank,
        "torsion": strings(&q.torsion),
    })
}

fn strings(xs: &[BigInt]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

pub fn run(cmd: GraphCmd, opts: &Opts, b: &mut Builder) -> Result<Value, CliError> {
    match cmd {
        GraphCmd::Analyze {
            source,
            prime,
            labels,
        } => {
            let g = load(&source, opts, b)?;
            let lab = load_labels(labels.as_ref(), &g, b)?;
            analyze(&g, prime, lab.as_ref(), opts, b)
        }
        GraphCmd::Congruence { source } => {
            let g = load(&source, opts, b)?;
            let c = congruence_module(&g).map_err(CliError::lib)?;
            b.check("gamma_chain_nested", c.containments_hold, "");
            Ok(json!({
                "graph": shape(&g),
                "congruence_torsion": strings(&c.torsion),
                "new_rank": c.free_rank,
                "gamma_ranks": c.gamma_ranks,
                "gamma0_mod_gamma1": quotient(&c.gamma0_mod_gamma1),
                "gamma1_mod_gamma2": quotient(&c.gamma1_mod_gamma2),
                "gamma2_mod_gamma3": quotient(&c.gamma2_mod_gamma3),
                "gamma0_mod_gamma3": quotient(&c.gamma0_mod_gamma3),
                "level_matrix_snf": strings(&c.level_matrix_snf),
            }))
        }
        GraphCmd::Levelraise {
            source,
            prime,
            labels,
            no_aux,
        } => {
            let g = load(&source, opts, b)?;
            let lab = load_labels(labels.as_ref(), &g, b)?;
            let aux = if no_aux {
                AuxFamily::empty()
            } else {
                AuxFamily::twin_swaps(&g).map_err(CliError::lib)?
            };
            let search = level_raising_search(&g, prime, &aux, lab.as_ref(), opts.exec)
                .map_err(CliError::lib)?;
            b.check(
                "candidates_in_new_space",
                search.prediction_agrees,
                format!("{} candidate eigensystems", search.candidates.len()),
            );
            Ok(json!({ "graph": shape(&g), "search": search }))
        }
    }
}

fn analyze(
    g: &CosetGraph,
    prime: Option<u64>,
    lab: Option<&DetLabeling>,
    opts: &Opts,
    b: &mut Builder,
) -> Result<Value, CliError> {
    let lm = level_matrix(g).map_err(CliError::lib)?;
    b.check("level_matrix", lm.passed(), lm.mismatches.join("; "));
    let on = old_new_decomposition(g).map_err(CliError::lib)?;
    b.check("old_new_orthogonal", on.orthogonal, "");
    b.check("old_new_spans", on.spans_everything, "");
    let ke = kernel_eigenvalue_check(g).map_err(CliError::lib)?;
    b.check(
        "kernel_eigenvalue",
        ke.passed(),
        format!("kernel dimension {}", ke.kernel_dim),
    );
    let det = det_identity_check(g).map_err(CliError::lib)?;
    b.check(
        "det_identity",
        det.holds,
        format!("{} = {}", det.lhs, det.rhs),
    );
    let spectrum = integer_spectrum(&g.t_l::<BigInt>(())).map_err(CliError::lib)?;
    let mut out = json!({
        "graph": shape(g),
        "biregular": true,
        "level_matrix": lm,
        "old_dim": on.old_dim(),
        "new_dim": on.new_dim(),
        "t_l_spectrum": spectrum
            .integer_eigenvalues
            .iter()
            .map(|(e, m)| json!({ "eigenvalue": e, "multiplicity": m }))
            .collect::<Vec<_>>(),
        "t_l_irrational_degree": spectrum.irrational_degree,
        "kernel_eigenvalue": ke,
        "det_identity": det,
    });
    if let Some(p) = prime {
        let ihara = ihara_kernel_test(g, p, lab).map_err(CliError::lib)?;
        b.check(
            "ihara_kernel",
            ihara.passed(),
            format!(
                "dim ker(i mod {}) = {} with {} components",
                p, ihara.kernel_dim, ihara.components
            ),
        );
        let aux = AuxFamily::twin_swaps(g).map_err(CliError::lib)?;
        let search = level_raising_search(g, p, &aux, lab, opts.exec).map_err(CliError::lib)?;
        out["ihara"] = json!(ihara);
        out["level_raising"] = json!(search);
    }
    Ok(out)
}
