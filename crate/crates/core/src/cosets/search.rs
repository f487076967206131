//! Mod-p search for eigensystems of `T_l` on `L0` that satisfy the level
//! raising congruence `T_l ≡ l(l³+1)` without being abelian, and whether their
//! auxiliary eigenvalues occur among new forms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::{integer_spectrum, CosetError, CosetGraph, DetLabeling};
use crate::exec::Exec;
use crate::kernel::{is_prime, Fp, Matrix, Scalar};

/// One auxiliary operator, acting compatibly on `L0`, `L1` and `M`.
#[derive(Debug, Clone)]
pub struct AuxOperator {
    pub name: String,
    pub v0: Matrix<BigInt>,
    pub v1: Matrix<BigInt>,
    pub e: Matrix<BigInt>,
}

/// Commuting family of operators commuting with `i` and `i⁺`.
#[derive(Debug, Clone, Default)]
pub struct AuxFamily {
    members: Vec<AuxOperator>,
}

fn block_diag(a: &Matrix<BigInt>, b: &Matrix<BigInt>) -> Matrix<BigInt> {
    let n = a.rows() + b.rows();
    Matrix::from_fn(n, n, (), |r, c| {
        if r < a.rows() && c < a.rows() {
            a.get(r, c).clone()
        } else if r >= a.rows() && c >= a.rows() {
            b.get(r - a.rows(), c - a.rows()).clone()
        } else {
            BigInt::default()
        }
    })
}

fn permutation_matrix(perm: &[usize]) -> Matrix<BigInt> {
    let n = perm.len();
    Matrix::from_fn(n, n, (), |r, c| BigInt::from((perm[c] == r) as i64))
}

impl AuxFamily {
    pub fn empty() -> Self {
        AuxFamily::default()
    }

    pub fn members(&self) -> &[AuxOperator] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Validates shapes, commutation with `i` and `i⁺`, and mutual
    /// commutation.
    pub fn new(g: &CosetGraph, members: Vec<AuxOperator>) -> Result<Self, CosetError> {
        let i = g.i_integer();
        let iplus = i.transpose();
        let reject = |name: &str, reason: &str| CosetError::AuxRejected {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        for m in &members {
            let shapes = [(&m.v0, g.n0()), (&m.v1, g.n1()), (&m.e, g.num_edges())];
            if shapes.iter().any(|(x, n)| x.rows() != *n || x.cols() != *n) {
                return Err(reject(&m.name, "wrong shape"));
            }
            let p = block_diag(&m.v0, &m.v1);
            if m.e.mul(&i)? != i.mul(&p)? {
                return Err(reject(&m.name, "does not commute with i"));
            }
            if p.mul(&iplus)? != iplus.mul(&m.e)? {
                return Err(reject(&m.name, "does not commute with i+"));
            }
        }
        for (a, x) in members.iter().enumerate() {
            for y in &members[a + 1..] {
                for (p, q) in [(&x.v0, &y.v0), (&x.v1, &y.v1), (&x.e, &y.e)] {
                    if p.mul(q)? != q.mul(p)? {
                        return Err(reject(
                            &x.name,
                            &format!("does not commute with {}", y.name),
                        ));
                    }
                }
            }
        }
        Ok(AuxFamily { members })
    }

    /// Built-in family: transpositions of twin vertices (vertices with equal
    /// neighbour multisets), chosen greedily so that the transpositions in
    /// each class are pairwise disjoint, together with the induced edge
    /// permutations.
    pub fn twin_swaps(g: &CosetGraph) -> Result<Self, CosetError> {
        let mut star0: Vec<Vec<usize>> = vec![Vec::new(); g.n0()];
        let mut star1: Vec<Vec<usize>> = vec![Vec::new(); g.n1()];
        for (e, &(v, w)) in g.edges().iter().enumerate() {
            star0[v].push(e);
            star1[w].push(e);
        }
        // Edges at a vertex ordered by the far endpoint, then by index.
        for s in &mut star0 {
            s.sort_by_key(|&e| (g.s(e), e));
        }
        for s in &mut star1 {
            s.sort_by_key(|&e| (g.h(e), e));
        }
        let key0 = |v: usize| star0[v].iter().map(|&e| g.s(e)).collect::<Vec<_>>();
        let key1 = |w: usize| star1[w].iter().map(|&e| g.h(e)).collect::<Vec<_>>();
        let mut members = Vec::new();
        for (class, n, stars, key) in [
            ("v0", g.n0(), &star0, &key0 as &dyn Fn(usize) -> Vec<usize>),
            ("v1", g.n1(), &star1, &key1 as &dyn Fn(usize) -> Vec<usize>),
        ] {
            let mut used = vec![false; n];
            for a in 0..n {
                if used[a] {
                    continue;
                }
                let ka = key(a);
                let Some(b) = (a + 1..n).find(|&b| !used[b] && key(b) == ka) else {
                    continue;
                };
                used[a] = true;
                used[b] = true;
                let mut vperm: Vec<usize> = (0..n).collect();
                vperm.swap(a, b);
                let mut eperm: Vec<usize> = (0..g.num_edges()).collect();
                for (&x, &y) in stars[a].iter().zip(&stars[b]) {
                    eperm[x] = y;
                    eperm[y] = x;
                }
                let id0: Vec<usize> = (0..g.n0()).collect();
                let id1: Vec<usize> = (0..g.n1()).collect();
                let (p0, p1) = if class == "v0" {
                    (vperm, id1)
                } else {
                    (id0, vperm)
                };
                members.push(AuxOperator {
                    name: format!("swap-{}-{}-{}", class, a, b),
                    v0: permutation_matrix(&p0),
                    v1: permutation_matrix(&p1),
                    e: permutation_matrix(&eperm),
                });
            }
        }
        AuxFamily::new(g, members)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    /// `T_l` eigenvalue as a centered residue mod `p`.
    pub t_l_residue: i64,
    /// Auxiliary eigenvalues, centered residues, in family order.
    pub aux_eigenvalues: Vec<i64>,
    pub dim: usize,
    /// Integer `T_l`-eigenvalues other than `l(l³+1)` reducing to this residue.
    pub rational_lifts: Vec<i64>,
    /// Dimension of the matching joint eigenspace inside `ker(i⁺) ⊗ F_p`.
    pub new_dim: usize,
    pub occurs_in_new: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub p: u64,
    pub trivial_residue: i64,
    pub aux_members: Vec<String>,
    pub eigensystems: usize,
    pub candidates: Vec<Candidate>,
    /// Every candidate occurs among new forms.
    pub prediction_agrees: bool,
}

/// Eigenvalue(s) paired with a basis of the corresponding eigenspace.
type Eigenspaces<K> = Vec<(K, Vec<Vec<Fp>>)>;

/// Splits `F_p^n` (given by a basis) into joint eigenspaces of commuting
/// operators, keeping only eigenvalues in `F_p`.
fn joint_eigenspaces(
    n: usize,
    start: Vec<Vec<Fp>>,
    ops: &[Matrix<Fp>],
    p: u64,
) -> Result<Eigenspaces<Vec<u64>>, CosetError> {
    let mut spaces = vec![(Vec::new(), start)];
    for op in ops {
        let mut next = Vec::new();
        for (vals, basis) in spaces {
            for (lambda, sub) in split(n, &basis, op, p)? {
                let mut v = vals.clone();
                v.push(lambda);
                next.push((v, sub));
            }
        }
        spaces = next;
    }
    Ok(spaces)
}

/// Eigenspaces of `op` restricted to the invariant subspace spanned by `basis`.
fn split(
    n: usize,
    basis: &[Vec<Fp>],
    op: &Matrix<Fp>,
    p: u64,
) -> Result<Eigenspaces<u64>, CosetError> {
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let w = Matrix::from_columns(n, basis, p)?;
    let aw = op.mul(&w)?;
    let x = w
        .solve(&aw)?
        .ok_or_else(|| CosetError::Invalid("subspace is not invariant".into()))?;
    let chi = x.char_poly()?;
    let mut out = Vec::new();
    for lambda in 0..p {
        let l = Fp::new(lambda as i64, p);
        if !chi.eval(&l).vanishes() {
            continue;
        }
        let shifted = x.sub(&Matrix::identity(x.rows(), p).scale(&l))?;
        let coords = shifted.kernel_basis()?;
        let vecs = coords
            .iter()
            .map(|c| w.mul_vec(c))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((lambda, vecs));
    }
    Ok(out)
}

fn reduce(m: &Matrix<BigInt>, p: u64) -> Matrix<Fp> {
    m.map(p, |x| Fp::from_bigint(x, p))
}

fn centered(x: u64, p: u64) -> i64 {
    Fp::new(x as i64, p).centered()
}

pub fn level_raising_search(
    g: &CosetGraph,
    p: u64,
    aux: &AuxFamily,
    lab: Option<&DetLabeling>,
    exec: Exec,
) -> Result<SearchReport, CosetError> {
    if !is_prime(p) {
        return Err(CosetError::NotPrime(p));
    }
    let default;
    let lab = match lab {
        Some(l) => {
            l.validate(g)?;
            l
        }
        None => {
            default = DetLabeling::by_component(g);
            &default
        }
    };
    let n0 = g.n0();
    let t = g.t_l::<BigInt>(());
    let mut ops = vec![reduce(&t, p)];
    ops.extend(aux.members().iter().map(|m| reduce(&m.v0, p)));
    let standard: Vec<Vec<Fp>> = (0..n0)
        .map(|k| (0..n0).map(|j| Fp::new((j == k) as i64, p)).collect())
        .collect();
    let spaces = joint_eigenspaces(n0, standard, &ops, p)?;
    let trivial = Fp::new(g.trivial_eigenvalue(), p).value();

    let mut labels: Vec<u64> = lab.v0.clone();
    labels.sort_unstable();
    labels.dedup();
    let abelian: Vec<Vec<Fp>> = labels
        .iter()
        .map(|&c| {
            lab.v0
                .iter()
                .map(|&x| Fp::new((x == c) as i64, p))
                .collect()
        })
        .collect();
    let rank_of = |vs: &[Vec<Fp>]| -> Result<usize, CosetError> {
        if vs.is_empty() {
            Ok(0)
        } else {
            Ok(Matrix::from_columns(n0, vs, p)?.rank()?)
        }
    };
    let abelian_rank = rank_of(&abelian)?;

    let mut hits = Vec::new();
    for (vals, basis) in &spaces {
        if vals[0] != trivial {
            continue;
        }
        let joint: Vec<Vec<Fp>> = abelian.iter().chain(basis).cloned().collect();
        if rank_of(&joint)? > abelian_rank {
            hits.push((vals.clone(), basis.len()));
        }
    }

    let spectrum = integer_spectrum(&t)?;
    let new_space = g.i_matrix::<Fp>(p).transpose().kernel_basis()?;
    let edge_ops: Vec<Matrix<Fp>> = aux.members().iter().map(|m| reduce(&m.e, p)).collect();
    let ne = g.num_edges();
    let occurrences = exec.map(&hits, |(vals, _)| -> Result<usize, CosetError> {
        let mut w = new_space.clone();
        for (op, &lambda) in edge_ops.iter().zip(&vals[1..]) {
            let parts = split(ne, &w, op, p)?;
            w = parts
                .into_iter()
                .find(|(l, _)| *l == lambda)
                .map(|(_, b)| b)
                .unwrap_or_default();
        }
        Ok(w.len())
    });

    let mut candidates = Vec::with_capacity(hits.len());
    for ((vals, dim), occ) in hits.iter().zip(occurrences) {
        let new_dim = occ?;
        let lifts = spectrum
            .integer_eigenvalues
            .iter()
            .map(|&(x, _)| x)
            .filter(|&x| x != g.trivial_eigenvalue() && Fp::new(x, p).value() == vals[0])
            .collect();
        candidates.push(Candidate {
            t_l_residue: centered(vals[0], p),
            aux_eigenvalues: vals[1..].iter().map(|&x| centered(x, p)).collect(),
            dim: *dim,
            rational_lifts: lifts,
            new_dim,
            occurs_in_new: new_dim > 0,
        });
    }
    let keyed: BTreeMap<(i64, Vec<i64>), Candidate> = candidates
        .into_iter()
        .map(|c| ((c.t_l_residue, c.aux_eigenvalues.clone()), c))
        .collect();
    let candidates: Vec<Candidate> = keyed.into_values().collect();
    Ok(SearchReport {
        p,
        trivial_residue: centered(trivial, p),
        aux_members: aux.members().iter().map(|m| m.name.clone()).collect(),
        eigensystems: spaces.len(),
        prediction_agrees: candidates.iter().all(|c| c.occurs_in_new),
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::tests::{k39, m13};

    #[test]
    fn twin_swaps_commute() {
        let g = k39();
        let aux = AuxFamily::twin_swaps(&g).unwrap();
        assert_eq!(aux.len(), 1 + 4);
        assert!(AuxFamily::twin_swaps(&m13()).unwrap().len() == 1);
    }

    #[test]
    fn non_commuting_rejected() {
        let g = k39();
        let mut swap = AuxFamily::twin_swaps(&g).unwrap().members()[0].clone();
        swap.e = Matrix::identity(g.num_edges(), ());
        assert!(matches!(
            AuxFamily::new(&g, vec![swap]),
            Err(CosetError::AuxRejected { .. })
        ));
    }

    #[test]
    fn k39_p3_has_candidates() {
        let g = k39();
        let aux = AuxFamily::twin_swaps(&g).unwrap();
        let r = level_raising_search(&g, 3, &aux, None, Exec::Sequential).unwrap();
        assert!(!r.candidates.is_empty());
        assert!(r.candidates.iter().all(|c| c.rational_lifts == vec![-9]));
        assert!(r.prediction_agrees);
    }

    #[test]
    fn k39_p5_has_none() {
        let g = k39();
        let aux = AuxFamily::twin_swaps(&g).unwrap();
        assert!(level_raising_search(&g, 5, &aux, None, Exec::Parallel)
            .unwrap()
            .candidates
            .is_empty());
        assert!(
            level_raising_search(&g, 7, &AuxFamily::empty(), None, Exec::Parallel)
                .unwrap()
                .candidates
                .is_empty()
        );
    }
}
