use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CosetError, CosetGraph};

const MAX_ATTEMPTS: usize = 1000;

/// Random connected `(l³+1, l+1)`-biregular multigraph with `n0` hyperspecial
/// vertices, drawn from the configuration model and rejected until connected.
/// `|V1| = n0·(l²−l+1)`.
pub fn random_biregular(l: u64, n0: usize, seed: u64) -> Result<CosetGraph, CosetError> {
    if n0 == 0 {
        return Err(CosetError::Invalid(
            "need at least one hyperspecial vertex".into(),
        ));
    }
    let d0 = (l * l * l + 1) as usize;
    let d1 = (l + 1) as usize;
    let n1 = n0 * d0 / d1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n1).flat_map(|w| std::iter::repeat_n(w, d1)).collect();
    for _ in 0..MAX_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let edges: Vec<(usize, usize)> = stubs
            .iter()
            .enumerate()
            .map(|(k, &w)| (k / d0, w))
            .collect();
        let g = CosetGraph::new(l, n0, n1, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(CosetError::Invalid(format!(
        "no connected graph after {} attempts",
        MAX_ATTEMPTS
    )))
}
