//! Weight-zero finite model of the levels `U₀`, `U₁` and `V`: function spaces
//! on a biregular bipartite multigraph and the level raising / lowering maps
//! between them.

mod congruence;
mod forms;
mod ihara;
mod random;
mod search;

pub use congruence::{congruence_module, CongruenceReport};
pub use forms::{
    det_identity_check, integer_spectrum, kernel_eigenvalue_check, level_matrix, map_i, map_iplus,
    old_new_decomposition, pairing, DetIdentityReport, EdgeForm, FormTriple, KernelEigenReport,
    LevelMatrixReport, OldNewDecomposition, Spectrum,
};
pub use ihara::{
    abelian_form, character_prime, ihara_kernel_test, AbelianFormReport, ComponentKernel,
    DetLabeling, IharaReport,
};
pub use random::random_biregular;
pub use search::{level_raising_search, AuxFamily, AuxOperator, Candidate, SearchReport};

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::kernel::{is_prime, KernelError, Matrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("l = {0} is not prime")]
    NotPrime(u64),
    #[error("edge {edge} references missing {class} vertex {index}")]
    DanglingEdge {
        edge: usize,
        class: &'static str,
        index: usize,
    },
    #[error("{class} vertex {index} has degree {found}, expected {expected}")]
    Degree {
        class: &'static str,
        index: usize,
        found: usize,
        expected: u64,
    },
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("inconsistent labeling: {0}")]
    InconsistentLabeling(String),
    #[error("auxiliary operator {name} rejected: {reason}")]
    AuxRejected { name: String, reason: String },
    #[error("form lives on the wrong stratum or has the wrong length")]
    StratumMismatch,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Vertex class of the bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexClass {
    V0,
    V1,
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexClass::V0 => "v0",
            VertexClass::V1 => "v1",
        })
    }
}

/// `(l³+1, l+1)`-biregular bipartite multigraph; edge `e` joins `h(e) ∈ V0`
/// to `s(e) ∈ V1`. Parallel edges are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetGraph {
    l: u64,
    n0: usize,
    n1: usize,
    edges: Vec<(usize, usize)>,
    components: Vec<usize>,
    num_components: usize,
}

impl CosetGraph {
    pub fn new(
        l: u64,
        n0: usize,
        n1: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, CosetError> {
        if !is_prime(l) {
            return Err(CosetError::NotPrime(l));
        }
        let mut deg0 = vec![0usize; n0];
        let mut deg1 = vec![0usize; n1];
        for (k, &(v, w)) in edges.iter().enumerate() {
            if v >= n0 {
                return Err(CosetError::DanglingEdge {
                    edge: k,
                    class: "v0",
                    index: v,
                });
            }
            if w >= n1 {
                return Err(CosetError::DanglingEdge {
                    edge: k,
                    class: "v1",
                    index: w,
                });
            }
            deg0[v] += 1;
            deg1[w] += 1;
        }
        let (d0, d1) = (l * l * l + 1, l + 1);
        for (class, degs, want) in [("v0", &deg0, d0), ("v1", &deg1, d1)] {
            if let Some((index, &found)) = degs.iter().enumerate().find(|(_, &d)| d as u64 != want)
            {
                return Err(CosetError::Degree {
                    class,
                    index,
                    found,
                    expected: want,
                });
            }
        }
        let (components, num_components) = components(n0, n1, &edges);
        Ok(CosetGraph {
            l,
            n0,
            n1,
            edges,
            components,
            num_components,
        })
    }

    /// `K_{a,b}` with every pair joined by `mult` parallel edges.
    pub fn complete_bipartite(
        l: u64,
        n0: usize,
        n1: usize,
        mult: usize,
    ) -> Result<Self, CosetError> {
        let mut edges = Vec::with_capacity(n0 * n1 * mult);
        for v in 0..n0 {
            for w in 0..n1 {
                for _ in 0..mult {
                    edges.push((v, w));
                }
            }
        }
        CosetGraph::new(l, n0, n1, edges)
    }

    /// Parses the line-oriented text format:
    ///
    /// ```text
    /// coset-graph l=2
    /// v0 3
    /// v1 9
    /// e 0 0
    /// ...
    /// ```
    ///
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, CosetError> {
        let mut l = None;
        let mut n0 = None;
        let mut n1 = None;
        let mut edges = Vec::new();
        let mut header_seen = false;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CosetError::Parse { line: line_no, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !header_seen {
                if toks.len() != 2 || toks[0] != "coset-graph" {
                    return Err(err("expected header `coset-graph l=<prime>`".into()));
                }
                let v = toks[1]
                    .strip_prefix("l=")
                    .and_then(|s| s.parse::<u64>().ok())
                    .ok_or_else(|| err(format!("bad l field `{}`", toks[1])))?;
                l = Some(v);
                header_seen = true;
                continue;
            }
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("expected a nonnegative integer, got `{}`", s)))
            };
            match toks.as_slice() {
                ["v0", n] if n0.is_none() => n0 = Some(num(n)?),
                ["v1", n] if n1.is_none() => n1 = Some(num(n)?),
                ["v0", _] | ["v1", _] => return Err(err("vertex count given twice".into())),
                ["e", a, b] => {
                    if n0.is_none() || n1.is_none() {
                        return Err(err("edge before vertex counts".into()));
                    }
                    edges.push((num(a)?, num(b)?));
                }
                _ => return Err(err(format!("unrecognized line `{}`", line))),
            }
        }
        let l = l.ok_or(CosetError::Parse {
            line: 0,
            msg: "empty input".into(),
        })?;
        let missing = |what: &str| CosetError::Parse {
            line: 0,
            msg: format!("missing `{}` line", what),
        };
        let n0 = n0.ok_or_else(|| missing("v0"))?;
        let n1 = n1.ok_or_else(|| missing("v1"))?;
        CosetGraph::new(l, n0, n1, edges)
    }

    /// Inverse of [`CosetGraph::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("coset-graph l={}\nv0 {}\nv1 {}\n", self.l, self.n0, self.n1);
        for (v, w) in &self.edges {
            s.push_str(&format!("e {} {}\n", v, w));
        }
        s
    }

    pub fn disjoint_union(&self, other: &CosetGraph) -> Result<Self, CosetError> {
        if self.l != other.l {
            return Err(CosetError::Invalid(
                "cannot join graphs with different l".into(),
            ));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(v, w)| (v + self.n0, w + self.n1)));
        CosetGraph::new(self.l, self.n0 + other.n0, self.n1 + other.n1, edges)
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn h(&self, e: usize) -> usize {
        self.edges[e].0
    }

    pub fn s(&self, e: usize) -> usize {
        self.edges[e].1
    }

    /// `l³+1`.
    pub fn degree0(&self) -> i64 {
        let l = self.l as i64;
        l * l * l + 1
    }

    /// `l+1`.
    pub fn degree1(&self) -> i64 {
        self.l as i64 + 1
    }

    /// `l(l³+1)`, the `T_l`-eigenvalue of constants.
    pub fn trivial_eigenvalue(&self) -> i64 {
        self.l as i64 * self.degree0()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components == 1
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    /// Component index of a vertex; V0 vertices come first in the numbering.
    pub fn component_of(&self, class: VertexClass, index: usize) -> usize {
        match class {
            VertexClass::V0 => self.components[index],
            VertexClass::V1 => self.components[self.n0 + index],
        }
    }

    /// `n(v, w)`: number of edges between `v ∈ V0` and `w ∈ V1`, as a
    /// `|V1| × |V0|` matrix (the map `A : L0 → L1`).
    pub fn adjacency<T: Scalar>(&self, ctx: T::Ctx) -> Matrix<T> {
        let mut counts = vec![vec![0i64; self.n0]; self.n1];
        for &(v, w) in &self.edges {
            counts[w][v] += 1;
        }
        Matrix::from_fn(self.n1, self.n0, ctx.clone(), |w, v| {
            T::from_i64(counts[w][v], &ctx)
        })
    }

    /// `T_l` on `L0`: entry `(u, v)` counts pairs of distinct edges
    /// `e₁ ≠ e₂` with `h(e₁) = v`, `s(e₁) = s(e₂)`, `h(e₂) = u`.
    pub fn t_l<T: Scalar>(&self, ctx: T::Ctx) -> Matrix<T> {
        let mut at_special: Vec<Vec<usize>> = vec![Vec::new(); self.n1];
        for (e, &(_, w)) in self.edges.iter().enumerate() {
            at_special[w].push(e);
        }
        let mut counts = vec![vec![0i64; self.n0]; self.n0];
        for star in &at_special {
            for &e1 in star {
                for &e2 in star {
                    if e1 != e2 {
                        counts[self.h(e2)][self.h(e1)] += 1;
                    }
                }
            }
        }
        Matrix::from_fn(self.n0, self.n0, ctx.clone(), |u, v| {
            T::from_i64(counts[u][v], &ctx)
        })
    }

    /// `T'_l` on `L1`, the mirror walk operator through `V0`.
    pub fn t_l_special<T: Scalar>(&self, ctx: T::Ctx) -> Matrix<T> {
        let mut at_hyper: Vec<Vec<usize>> = vec![Vec::new(); self.n0];
        for (e, &(v, _)) in self.edges.iter().enumerate() {
            at_hyper[v].push(e);
        }
        let mut counts = vec![vec![0i64; self.n1]; self.n1];
        for star in &at_hyper {
            for &e1 in star {
                for &e2 in star {
                    if e1 != e2 {
                        counts[self.s(e2)][self.s(e1)] += 1;
                    }
                }
            }
        }
        Matrix::from_fn(self.n1, self.n1, ctx.clone(), |u, v| {
            T::from_i64(counts[u][v], &ctx)
        })
    }

    /// Matrix of `i : L0 ⊕ L1 → M`, `|E| × (|V0|+|V1|)`.
    pub fn i_matrix<T: Scalar>(&self, ctx: T::Ctx) -> Matrix<T> {
        let (zero, one) = (T::zero_in(&ctx), T::one_in(&ctx));
        Matrix::from_fn(self.num_edges(), self.n0 + self.n1, ctx, |e, c| {
            let (v, w) = self.edges[e];
            if c == v || c == self.n0 + w {
                one.clone()
            } else {
                zero.clone()
            }
        })
    }

    /// Matrix of `i⁺ : M → L0 ⊕ L1`, the transpose of [`CosetGraph::i_matrix`].
    pub fn iplus_matrix<T: Scalar>(&self, ctx: T::Ctx) -> Matrix<T> {
        self.i_matrix(ctx).transpose()
    }

    pub fn i_integer(&self) -> Matrix<BigInt> {
        self.i_matrix(())
    }
}

fn components(n0: usize, n1: usize, edges: &[(usize, usize)]) -> (Vec<usize>, usize) {
    let n = n0 + n1;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(v, w) in edges {
        let (a, b) = (find(&mut parent, v), find(&mut parent, n0 + w));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let out = (0..n)
        .map(|x| {
            let r = find(&mut parent, x);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            label[r]
        })
        .collect();
    (out, next)
}
