//! Tame L-parameters `(φ, N)` with `φNφ⁻¹ = lN` for `GL_n` and `PGL_2`:
//! solution spaces, nilpotent orbits, the components passing through a
//! Satake point `(s, 0)`, and explicit one-parameter degenerations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::kernel::{int, KernelError, Matrix, Rational};

/// Largest solution-space dimension whose 0/1 combinations are enumerated.
pub const MAX_ENUMERATION_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LparamError {
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("support of N has a cycle of nonzero weight; no cocharacter scales it by t")]
    NoWitness,
    #[error("N is not in the solution space of s")]
    NotASolution,
    #[error("solution space of dimension {0} is too large to enumerate")]
    TooLarge(usize),
    #[error("l must differ from 1")]
    TrivialL,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Weakly decreasing positive parts; the Jordan type of a nilpotent matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// True for `(1, …, 1)`, the orbit of `N = 0`.
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// Dominance order: `self ≥ other` iff every partial sum of `self` is at
    /// least the matching partial sum of `other`.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for k in 0..self.0.len().max(other.0.len()) {
            a += self.0.get(k).copied().unwrap_or(0);
            b += other.0.get(k).copied().unwrap_or(0);
            if a < b {
                return false;
            }
        }
        true
    }

    /// Nilpotent Jordan matrix with blocks of the given sizes.
    pub fn jordan_matrix(&self) -> Matrix<Rational> {
        let n = self.size();
        let mut m = Matrix::zeros(n, n, ());
        let mut start = 0;
        for &b in &self.0 {
            for k in 0..b - 1 {
                m.set(start + k, start + k + 1, int(1));
            }
            start += b;
        }
        m
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// A candidate point `(φ, N)` of the moduli space.
#[derive(Debug, Clone, PartialEq)]
pub struct TameParameterPoint {
    pub phi: Matrix<Rational>,
    pub n: Matrix<Rational>,
    pub l: Rational,
}

fn e(n: usize, i: usize, j: usize) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n, ());
    m.set(i, j, int(1));
    m
}

fn check_invertible(phi: &Matrix<Rational>) -> Result<(), LparamError> {
    if !phi.is_square() {
        return Err(KernelError::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        }
        .into());
    }
    if phi.det()?.is_zero() {
        return Err(LparamError::Singular);
    }
    Ok(())
}

/// Basis of `{N : φNφ⁻¹ = lN}`, computed as the kernel of `N ↦ φN − lNφ`.
pub fn solution_space(
    phi: &Matrix<Rational>,
    l: &Rational,
) -> Result<Vec<Matrix<Rational>>, LparamError> {
    check_invertible(phi)?;
    let n = phi.rows();
    let columns: Vec<Vec<Rational>> = (0..n * n)
        .map(|k| {
            let b = e(n, k / n, k % n);
            let img = phi.mul(&b)?.sub(&b.mul(phi)?.scale(l))?;
            Ok(img.entries().to_vec())
        })
        .collect::<Result<_, KernelError>>()?;
    let op = Matrix::from_columns(n * n, &columns, ())?;
    Ok(op
        .kernel_basis()?
        .into_iter()
        .map(|v| Matrix::from_vec(n, n, (), v))
        .collect::<Result<_, _>>()?)
}

fn is_nilpotent(m: &Matrix<Rational>) -> Result<bool, LparamError> {
    Ok(m.pow(m.rows() as u32)?.is_zero())
}

/// Jordan type of a nilpotent matrix, read off from `rank(N^k)`.
pub fn jordan_partition(m: &Matrix<Rational>) -> Result<Partition, LparamError> {
    if !m.is_square() {
        return Err(KernelError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let n = m.rows();
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n, ());
    for _ in 0..n {
        power = power.mul(m)?;
        ranks.push(power.rank()?);
    }
    if ranks[n] != 0 {
        return Err(LparamError::NotNilpotent);
    }
    ranks.push(0);
    let mut parts = Vec::new();
    for k in 1..=n {
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_k1 = ranks[k] - ranks[k + 1];
        parts.extend(std::iter::repeat_n(k, at_least_k - at_least_k1));
    }
    Ok(Partition::new(parts))
}

/// Every nilpotent orbit in `gl_n` with its Jordan representative.
pub fn nilpotent_orbits(n: usize) -> Vec<(Partition, Matrix<Rational>)> {
    partitions(n)
        .into_iter()
        .map(|p| {
            let m = p.jordan_matrix();
            (p, m)
        })
        .collect()
}

fn diagonal_entries(s: &Matrix<Rational>) -> Result<Vec<Rational>, LparamError> {
    if !s.is_square() {
        return Err(LparamError::NotDiagonal);
    }
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            if i != j && !s.get(i, j).is_zero() {
                return Err(LparamError::NotDiagonal);
            }
        }
    }
    let d: Vec<Rational> = (0..s.rows()).map(|i| s.get(i, i).clone()).collect();
    if d.iter().any(|x| x.is_zero()) {
        return Err(LparamError::Singular);
    }
    Ok(d)
}

fn is_power_of(r: &Rational, l: &Rational) -> bool {
    if l.is_zero() || *l == int(1) || *l == int(-1) {
        return *r == int(1);
    }
    let mut x = r.clone();
    let big = if l.numer().magnitude() > l.denom().magnitude() {
        l.clone()
    } else {
        l.recip()
    };
    let small = big.recip();
    for _ in 0..256 {
        if x == int(1) {
            return true;
        }
        let mag = x.numer().magnitude() > x.denom().magnitude();
        x = if mag { &x * &small } else { &x * &big };
    }
    false
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentsReport {
    pub solution_dim: usize,
    /// Jordan types met by 0/1 combinations of the basis.
    pub realized: BTreeSet<Partition>,
    /// Downward dominance closure of `realized`.
    pub partitions: BTreeSet<Partition>,
    /// True when every diagonal ratio is a power of `l`, where the 0/1
    /// enumeration is known to hit every Jordan type.
    pub exact: bool,
}

impl ComponentsReport {
    pub fn has_nontrivial(&self) -> bool {
        self.partitions.iter().any(|p| !p.is_trivial())
    }
}

/// Jordan types of nilpotents in the solution space of a diagonal `s`, closed
/// downward under dominance.
pub fn components_through(
    s: &Matrix<Rational>,
    l: &Rational,
    exec: Exec,
) -> Result<ComponentsReport, LparamError> {
    let d = diagonal_entries(s)?;
    let basis = solution_space(s, l)?;
    if basis.len() > MAX_ENUMERATION_DIM {
        return Err(LparamError::TooLarge(basis.len()));
    }
    let n = d.len();
    let types = exec.map_range(1usize << basis.len(), |mask| {
        let mut m = Matrix::zeros(n, n, ());
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                m = m.add(b).expect("same shape");
            }
        }
        jordan_partition(&m)
    });
    let realized: BTreeSet<Partition> = types.into_iter().collect::<Result<_, _>>()?;
    let partitions = partitions(n)
        .into_iter()
        .filter(|q| realized.iter().any(|p| p.dominates(q)))
        .collect();
    let exact = d.iter().all(|a| d.iter().all(|b| is_power_of(&(a / b), l)));
    Ok(ComponentsReport {
        solution_dim: basis.len(),
        realized,
        partitions,
        exact,
    })
}

/// One nilpotent of each realized Jordan type, taken at the smallest 0/1
/// combination of the solution basis that produces it.
pub fn component_representatives(
    s: &Matrix<Rational>,
    l: &Rational,
    exec: Exec,
) -> Result<BTreeMap<Partition, Matrix<Rational>>, LparamError> {
    let n = diagonal_entries(s)?.len();
    let basis = solution_space(s, l)?;
    if basis.len() > MAX_ENUMERATION_DIM {
        return Err(LparamError::TooLarge(basis.len()));
    }
    let combine = |mask: usize| {
        let mut m = Matrix::zeros(n, n, ());
        for (k, b) in basis.iter().enumerate() {
            if mask >> k & 1 == 1 {
                m = m.add(b).expect("same shape");
            }
        }
        m
    };
    let types = exec.map_range(1usize << basis.len(), |mask| {
        jordan_partition(&combine(mask))
    });
    let mut out = BTreeMap::new();
    for (mask, t) in types.into_iter().enumerate() {
        if let std::collections::btree_map::Entry::Vacant(e) = out.entry(t?) {
            e.insert(combine(mask));
        }
    }
    Ok(out)
}

/// True iff two diagonal entries of `s` have ratio exactly `l`.
pub fn is_degenerate_satake(s: &Matrix<Rational>, l: &Rational) -> Result<bool, LparamError> {
    let d = diagonal_entries(s)?;
    Ok(d.iter().any(|a| d.iter().any(|b| *a == b * l)))
}

/// Laurent polynomial in an indeterminate `t`: exponent ↦ coefficient.
type Laurent = BTreeMap<i64, Rational>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegenerationWitness {
    /// Weights of the cocharacter `ψ(t) = diag(t^{μ_1}, …, t^{μ_n})`.
    pub mu: Vec<i64>,
    /// `ψ(t) N ψ(t)⁻¹ = tN` as Laurent polynomials in `t`.
    pub scales_by_t: bool,
    /// `(s, tN)` satisfies the defining relation identically in `t`.
    pub path_in_moduli: bool,
    /// The path specializes to `(s, 0)` at `t = 0`.
    pub limit_is_satake_point: bool,
}

impl DegenerationWitness {
    pub fn verified(&self) -> bool {
        self.scales_by_t && self.path_in_moduli && self.limit_is_satake_point
    }
}

fn conjugate_symbolic(mu: &[i64], m: &Matrix<Rational>) -> Vec<Laurent> {
    let n = m.rows();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut p = Laurent::new();
            let c = m.get(i, j);
            if !c.is_zero() {
                p.insert(mu[i] - mu[j], c.clone());
            }
            out.push(p);
        }
    }
    out
}

/// Integer weights `μ` with `μ_i − μ_j = 1` on the support of `N`, normalized
/// to minimum zero on each connected piece of the support graph, plus the
/// symbolic verification of the resulting degeneration.
pub fn degeneration_witness(
    s: &Matrix<Rational>,
    n_mat: &Matrix<Rational>,
    l: &Rational,
) -> Result<DegenerationWitness, LparamError> {
    let d = diagonal_entries(s)?;
    let n = d.len();
    let lhs = s.mul(n_mat)?;
    let rhs = n_mat.mul(s)?.scale(l);
    if lhs != rhs {
        return Err(LparamError::NotASolution);
    }
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if !n_mat.get(i, j).is_zero() {
                if i == j {
                    return Err(LparamError::NoWitness);
                }
                adj[i].push((j, -1));
                adj[j].push((i, 1));
            }
        }
    }
    let mut mu: Vec<Option<i64>> = vec![None; n];
    for root in 0..n {
        if mu[root].is_some() {
            continue;
        }
        mu[root] = Some(0);
        let mut seen = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mv = mu[v].expect("visited");
            for &(w, step) in &adj[v] {
                match mu[w] {
                    None => {
                        mu[w] = Some(mv + step);
                        seen.push(w);
                        queue.push_back(w);
                    }
                    Some(mw) if mw != mv + step => return Err(LparamError::NoWitness),
                    Some(_) => {}
                }
            }
        }
        let min = seen
            .iter()
            .map(|&v| mu[v].expect("visited"))
            .min()
            .unwrap_or(0);
        for v in seen {
            mu[v] = mu[v].map(|x| x - min);
        }
    }
    let mu: Vec<i64> = mu.into_iter().map(|x| x.expect("all visited")).collect();

    let conj = conjugate_symbolic(&mu, n_mat);
    let target: Vec<Laurent> = n_mat
        .entries()
        .iter()
        .map(|c| {
            let mut p = Laurent::new();
            if !c.is_zero() {
                p.insert(1, c.clone());
            }
            p
        })
        .collect();
    let scales_by_t = conj == target;

    // s·(tN) − l·(tN)·s has coefficient sN − lNs at t¹ and nothing else.
    let residual = lhs.sub(&rhs)?;
    let path_in_moduli = residual.is_zero();
    let limit_is_satake_point = target.iter().all(|p| p.keys().all(|&k| k >= 1));
    Ok(DegenerationWitness {
        mu,
        scales_by_t,
        path_in_moduli,
        limit_is_satake_point,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pgl2Report {
    pub l: String,
    /// Dimension of `{N ∈ sl_2 : N = lN}` at `φ = 1`.
    pub solution_dim: usize,
    /// Dimension of the `GL_2` solution space at `φ = diag(l, 1)`.
    pub gl2_contrast_dim: usize,
    pub not_intersection: bool,
}

/// The identity Satake parameter of `PGL_2` does not meet a nonzero
/// monodromy: `Ad(1) − l` is invertible on `sl_2`.
pub fn pgl2_check(l: &Rational) -> Result<Pgl2Report, LparamError> {
    if *l == int(1) {
        return Err(LparamError::TrivialL);
    }
    let basis = [e(2, 0, 1), e(2, 1, 0), {
        let mut h = Matrix::zeros(2, 2, ());
        h.set(0, 0, int(1));
        h.set(1, 1, int(-1));
        h
    }];
    let phi = Matrix::<Rational>::identity(2, ());
    let phi_inv = phi.inverse()?;
    // Coordinates in the basis (E12, E21, H) of a trace-zero matrix.
    let coords = |m: &Matrix<Rational>| {
        vec![
            m.get(0, 1).clone(),
            m.get(1, 0).clone(),
            m.get(0, 0).clone(),
        ]
    };
    let columns: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| {
            let ad = phi.mul(b)?.mul(&phi_inv)?;
            Ok(coords(&ad.sub(&b.scale(l))?))
        })
        .collect::<Result<_, KernelError>>()?;
    let op = Matrix::from_columns(3, &columns, ())?;
    let solution_dim = op.kernel_basis()?.len();
    let contrast = Matrix::diagonal(&[l.clone(), Rational::one()], ());
    let gl2_contrast_dim = solution_space(&contrast, l)?.len();
    Ok(Pgl2Report {
        l: l.to_string(),
        solution_dim,
        gl2_contrast_dim,
        not_intersection: solution_dim == 0,
    })
}

/// Checks `φ` invertible, `φN = lNφ` and `Nⁿ = 0` exactly.
pub fn verify_point(pt: &TameParameterPoint) -> bool {
    let n = pt.phi.rows();
    if !pt.phi.is_square() || pt.n.rows() != n || pt.n.cols() != n {
        return false;
    }
    if check_invertible(&pt.phi).is_err() {
        return false;
    }
    let (Ok(a), Ok(b)) = (pt.phi.mul(&pt.n), pt.n.mul(&pt.phi)) else {
        return false;
    };
    a == b.scale(&pt.l) && is_nilpotent(&pt.n).unwrap_or(false)
}
