use levelraise::tree::{TreeBall, DEFAULT_VERTEX_BUDGET};
use serde_json::{json, Value};

use crate::report::Builder;
use crate::{CliError, Opts, TreeCmd};

pub fn run(cmd: TreeCmd, opts: &Opts, b: &mut Builder) -> Result<Value, CliError> {
    let TreeCmd::Verify { l, radius } = cmd;
    let budget = opts.budget.unwrap_or(DEFAULT_VERTEX_BUDGET);
    let ball = TreeBall::build_with_budget(l, radius, budget).map_err(CliError::lib)?;
    let report = ball.verify_composition(opts.exec);
    b.check(
        "composition_identity",
        report.passed(),
        format!(
            "{} hyperspecial and {} special deltas, {} violations",
            report.hyperspecial_deltas,
            report.special_deltas,
            report.violations.len()
        ),
    );
    let shells = ball.shell_counts();
    let expected_shells = levelraise::tree::shell_sizes(l, radius);
    let matches = shells.len() == expected_shells.len()
        && shells
            .iter()
            .zip(&expected_shells)
            .all(|(a, e)| *a as u128 == *e);
    b.check(
        "shell_growth",
        matches,
        "shells grow by l³+1, l, then alternately l³ and l",
    );
    Ok(json!({
        "l": l,
        "radius": radius,
        "vertices": ball.len(),
        "shells": shells,
        "hyperspecial_deltas": report.hyperspecial_deltas,
        "special_deltas": report.special_deltas,
        "values_compared": report.values_compared,
        "violations": report.violations.iter().take(10).collect::<Vec<_>>(),
    }))
}
