//! Finite balls in the bi-homogeneous tree with vertex degrees `l³+1`
//! (hyperspecial) and `l+1` (special), and the local Hecke operators on
//! finitely supported functions.
//!
//! Vertices are stored in breadth-first order from a hyperspecial root, so the
//! children of a vertex occupy a contiguous index range. Functions are
//! finitely supported on the whole (infinite) tree; an operator may only be
//! applied when every vertex it could write to lies inside the ball.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::kernel::{is_prime, Rational};

pub const DEFAULT_VERTEX_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("l = {0} is not prime")]
    NotPrime(u64),
    #[error("ball of radius {radius} has {needed} vertices, over the budget of {budget}")]
    Budget {
        radius: u32,
        needed: u128,
        budget: usize,
    },
    #[error(
        "vertex {vertex} at depth {depth} is too close to the boundary of the radius-{radius} ball"
    )]
    Boundary {
        vertex: usize,
        depth: u32,
        radius: u32,
    },
    #[error("expected a function on {expected:?} vertices, got {found:?}")]
    WrongKind { expected: Kind, found: Kind },
    #[error("vertex {0} is not in the ball")]
    NoSuchVertex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hyperspecial,
    Special,
}

impl Kind {
    pub fn of_depth(depth: u32) -> Kind {
        if depth.is_multiple_of(2) {
            Kind::Hyperspecial
        } else {
            Kind::Special
        }
    }

    pub fn other(self) -> Kind {
        match self {
            Kind::Hyperspecial => Kind::Special,
            Kind::Special => Kind::Hyperspecial,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeBall {
    l: u64,
    radius: u32,
    parent: Vec<usize>,
    depth: Vec<u32>,
    first_child: Vec<usize>,
    num_children: Vec<usize>,
    shell_start: Vec<usize>,
}

/// Number of children of a vertex at the given depth.
fn children_at(l: u64, depth: u32) -> u64 {
    match (depth, Kind::of_depth(depth)) {
        (0, _) => l * l * l + 1,
        (_, Kind::Hyperspecial) => l * l * l,
        (_, Kind::Special) => l,
    }
}

/// Vertex counts at distance `0..=radius` from the root.
pub fn shell_sizes(l: u64, radius: u32) -> Vec<u128> {
    let mut out = vec![1u128];
    for d in 0..radius {
        let prev = *out.last().unwrap();
        out.push(prev.saturating_mul(children_at(l, d) as u128));
    }
    out
}

impl TreeBall {
    pub fn build(l: u64, radius: u32) -> Result<Self, TreeError> {
        Self::build_with_budget(l, radius, DEFAULT_VERTEX_BUDGET)
    }

    pub fn build_with_budget(l: u64, radius: u32, budget: usize) -> Result<Self, TreeError> {
        if !is_prime(l) {
            return Err(TreeError::NotPrime(l));
        }
        let shells = shell_sizes(l, radius);
        let needed: u128 = shells.iter().fold(0u128, |a, &b| a.saturating_add(b));
        if needed > budget as u128 {
            return Err(TreeError::Budget {
                radius,
                needed,
                budget,
            });
        }
        let n = needed as usize;
        let mut ball = TreeBall {
            l,
            radius,
            parent: Vec::with_capacity(n),
            depth: Vec::with_capacity(n),
            first_child: vec![n; n],
            num_children: vec![0; n],
            shell_start: Vec::with_capacity(shells.len() + 1),
        };
        ball.parent.push(usize::MAX);
        ball.depth.push(0);
        ball.shell_start.push(0);
        for d in 0..radius {
            let (lo, hi) = (ball.shell_start[d as usize], ball.parent.len());
            ball.shell_start.push(hi);
            let k = children_at(l, d) as usize;
            for v in lo..hi {
                ball.first_child[v] = ball.parent.len();
                ball.num_children[v] = k;
                for _ in 0..k {
                    ball.parent.push(v);
                    ball.depth.push(d + 1);
                }
            }
        }
        ball.shell_start.push(ball.parent.len());
        Ok(ball)
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn kind(&self, v: usize) -> Kind {
        Kind::of_depth(self.depth[v])
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    pub fn children(&self, v: usize) -> std::ops::Range<usize> {
        let s = self.first_child[v];
        s..s + self.num_children[v]
    }

    /// Neighbours of `v` that lie in the ball. For `depth(v) < radius` this is
    /// every neighbour in the tree.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent(v).into_iter().chain(self.children(v))
    }

    /// Vertex counts per distance from the root.
    pub fn shell_counts(&self) -> Vec<usize> {
        self.shell_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Vertices at exactly the given depth.
    pub fn shell(&self, depth: u32) -> std::ops::Range<usize> {
        let d = depth as usize;
        if d + 1 >= self.shell_start.len() {
            return 0..0;
        }
        self.shell_start[d]..self.shell_start[d + 1]
    }

    /// Path-from-root word: the child position taken at each step.
    pub fn word(&self, v: usize) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.depth[v] as usize);
        let mut x = v;
        while let Some(p) = self.parent(x) {
            w.push(x - self.first_child[p]);
            x = p;
        }
        w.reverse();
        w
    }

    /// Inverse of [`TreeBall::word`].
    pub fn vertex_of_word(&self, word: &[usize]) -> Option<usize> {
        let mut v = 0;
        for &c in word {
            if c >= self.num_children[v] {
                return None;
            }
            v = self.first_child[v] + c;
        }
        Some(v)
    }

    /// Vertices at tree distance exactly 2 from `v` (all in the ball when
    /// `depth(v) ≤ radius − 2`).
    pub fn distance_two(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for w in self.neighbors(v) {
            for u in self.neighbors(w) {
                if u != v {
                    out.push(u);
                }
            }
        }
        out
    }

    /// Vertices whose full 2-ball lies inside this ball.
    pub fn interior(&self, kind: Kind) -> Vec<usize> {
        if self.radius < 2 {
            return Vec::new();
        }
        (0..self.shell_start[(self.radius - 1) as usize])
            .filter(|&v| self.kind(v) == kind)
            .collect()
    }

    fn check_vertex(&self, v: usize) -> Result<(), TreeError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(TreeError::NoSuchVertex(v))
        }
    }

    fn check_support(&self, f: &VertexFunction, kind: Kind, margin: u32) -> Result<(), TreeError> {
        if f.kind != kind {
            return Err(TreeError::WrongKind {
                expected: kind,
                found: f.kind,
            });
        }
        for &v in f.values.keys() {
            self.check_vertex(v)?;
            if self.depth[v] + margin > self.radius {
                return Err(TreeError::Boundary {
                    vertex: v,
                    depth: self.depth[v],
                    radius: self.radius,
                });
            }
        }
        Ok(())
    }

    fn push_adjacent(&self, f: &VertexFunction) -> VertexFunction {
        let mut out = VertexFunction::zero(f.kind.other());
        for (&v, x) in &f.values {
            for w in self.neighbors(v) {
                out.add_at(w, x);
            }
        }
        out
    }

    fn push_distance_two(&self, f: &VertexFunction) -> VertexFunction {
        let mut out = VertexFunction::zero(f.kind);
        for (&v, x) in &f.values {
            for u in self.distance_two(v) {
                out.add_at(u, x);
            }
        }
        out
    }

    /// `(Af)(w) = Σ_{v ~ w} f(v)`, hyperspecial to special.
    pub fn op_a(&self, f: &VertexFunction) -> Result<VertexFunction, TreeError> {
        self.check_support(f, Kind::Hyperspecial, 1)?;
        Ok(self.push_adjacent(f))
    }

    /// `(Bg)(v) = Σ_{w ~ v} g(w)`, special to hyperspecial.
    pub fn op_b(&self, g: &VertexFunction) -> Result<VertexFunction, TreeError> {
        self.check_support(g, Kind::Special, 1)?;
        Ok(self.push_adjacent(g))
    }

    /// `T_l`: sum over the hyperspecial vertices at distance 2.
    pub fn op_tl(&self, f: &VertexFunction) -> Result<VertexFunction, TreeError> {
        self.check_support(f, Kind::Hyperspecial, 2)?;
        Ok(self.push_distance_two(f))
    }

    /// `T'_l`: sum over the special vertices at distance 2.
    pub fn op_tl_special(&self, g: &VertexFunction) -> Result<VertexFunction, TreeError> {
        self.check_support(g, Kind::Special, 2)?;
        Ok(self.push_distance_two(g))
    }

    /// `(T_l f)(v)` for an arbitrary function given pointwise; `v` must have its
    /// 2-ball inside this ball.
    pub fn op_tl_at(&self, v: usize, f: impl Fn(usize) -> Rational) -> Result<Rational, TreeError> {
        self.check_vertex(v)?;
        if self.depth[v] + 2 > self.radius {
            return Err(TreeError::Boundary {
                vertex: v,
                depth: self.depth[v],
                radius: self.radius,
            });
        }
        Ok(self
            .distance_two(v)
            .into_iter()
            .fold(Rational::zero(), |acc, u| acc + f(u)))
    }

    /// Checks `B∘A = T_l + (l³+1)` on every interior hyperspecial delta and the
    /// mirror `A∘B = T'_l + (l+1)` on every interior special delta.
    pub fn verify_composition(&self, exec: Exec) -> CompositionReport {
        let l = self.l as i64;
        let hyper = self.interior(Kind::Hyperspecial);
        let special = self.interior(Kind::Special);
        let check = |v: &usize, kind: Kind| -> (usize, Option<Violation>) {
            let delta = VertexFunction::delta(kind, *v);
            let (first, second, shift) = match kind {
                Kind::Hyperspecial => (
                    self.op_a(&delta).expect("interior"),
                    Self::op_b as fn(&Self, &VertexFunction) -> Result<VertexFunction, TreeError>,
                    l * l * l + 1,
                ),
                Kind::Special => (
                    self.op_b(&delta).expect("interior"),
                    Self::op_a as fn(&Self, &VertexFunction) -> Result<VertexFunction, TreeError>,
                    l + 1,
                ),
            };
            let lhs = second(self, &first).expect("interior");
            let rhs = self
                .push_distance_two(&delta)
                .add(&delta.scale(&Rational::from_integer(shift.into())));
            let checked = lhs.values.len().max(rhs.values.len());
            let bad = lhs.first_difference(&rhs).map(|at| Violation {
                delta_at: *v,
                kind,
                at,
                lhs: lhs.get(at).to_string(),
                rhs: rhs.get(at).to_string(),
            });
            (checked, bad)
        };
        let mut report = CompositionReport {
            l: self.l,
            radius: self.radius,
            hyperspecial_deltas: hyper.len(),
            special_deltas: special.len(),
            values_compared: 0,
            violations: Vec::new(),
        };
        let results = exec
            .map(&hyper, |v| check(v, Kind::Hyperspecial))
            .into_iter()
            .chain(exec.map(&special, |v| check(v, Kind::Special)));
        for (n, bad) in results {
            report.values_compared += n;
            report.violations.extend(bad);
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub delta_at: usize,
    pub kind: Kind,
    pub at: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub l: u64,
    pub radius: u32,
    pub hyperspecial_deltas: usize,
    pub special_deltas: usize,
    pub values_compared: usize,
    pub violations: Vec<Violation>,
}

impl CompositionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finitely supported function on one class of tree vertices; only nonzero
/// values are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFunction {
    kind: Kind,
    values: BTreeMap<usize, Rational>,
}

impl VertexFunction {
    pub fn zero(kind: Kind) -> Self {
        VertexFunction {
            kind,
            values: BTreeMap::new(),
        }
    }

    pub fn delta(kind: Kind, v: usize) -> Self {
        let mut f = Self::zero(kind);
        f.values.insert(v, Rational::from_integer(1.into()));
        f
    }

    /// Builds a function from `(vertex, value)` pairs; every vertex must be of
    /// the given kind in `ball`.
    pub fn from_values(
        ball: &TreeBall,
        kind: Kind,
        values: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self, TreeError> {
        let mut f = Self::zero(kind);
        for (v, x) in values {
            ball.check_vertex(v)?;
            if ball.kind(v) != kind {
                return Err(TreeError::WrongKind {
                    expected: kind,
                    found: ball.kind(v),
                });
            }
            f.add_at(v, &x);
        }
        Ok(f)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn get(&self, v: usize) -> Rational {
        self.values.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn add_at(&mut self, v: usize, x: &Rational) {
        let e = self.values.entry(v).or_insert_with(Rational::zero);
        *e += x;
        if e.is_zero() {
            self.values.remove(&v);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&v, x) in &rhs.values {
            out.add_at(v, x);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.kind);
        }
        VertexFunction {
            kind: self.kind,
            values: self.values.iter().map(|(&v, x)| (v, x * c)).collect(),
        }
    }

    fn first_difference(&self, rhs: &Self) -> Option<usize> {
        self.values
            .keys()
            .chain(rhs.values.keys())
            .copied()
            .filter(|&v| self.get(v) != rhs.get(v))
            .min()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::int;

    #[test]
    fn shells_follow_growth_law() {
        let b = TreeBall::build(2, 3).unwrap();
        assert_eq!(b.shell_counts(), vec![1, 9, 18, 144]);
        assert_eq!(TreeBall::build(5, 0).unwrap().len(), 1);
        assert_eq!(shell_sizes(3, 2), vec![1, 28, 84]);
    }

    #[test]
    fn composite_and_budget_rejected() {
        assert_eq!(TreeBall::build(4, 2).unwrap_err(), TreeError::NotPrime(4));
        assert!(matches!(
            TreeBall::build_with_budget(2, 5, 100),
            Err(TreeError::Budget { .. })
        ));
    }

    #[test]
    fn words_round_trip() {
        let b = TreeBall::build(2, 3).unwrap();
        for v in 0..b.len() {
            assert_eq!(b.vertex_of_word(&b.word(v)), Some(v));
            assert_eq!(b.word(v).len() as u32, b.depth(v));
        }
    }

    #[test]
    fn delta_pushforwards() {
        let b = TreeBall::build(2, 3).unwrap();
        let a = b
            .op_a(&VertexFunction::delta(Kind::Hyperspecial, 0))
            .unwrap();
        assert_eq!(a.support().collect::<Vec<_>>(), (1..10).collect::<Vec<_>>());
        let w = b.shell(1).start;
        let g = b.op_b(&VertexFunction::delta(Kind::Special, w)).unwrap();
        assert_eq!(g.support().count(), 3);
        assert_eq!(g.get(0), int(1));
        let t = b
            .op_tl(&VertexFunction::delta(Kind::Hyperspecial, 0))
            .unwrap();
        assert_eq!(t.get(0), int(0));
        assert_eq!(t.get(b.shell(2).start), int(1));
        assert_eq!(t.support().count(), 18);
    }

    #[test]
    fn constants_near_root() {
        let b = TreeBall::build(2, 4).unwrap();
        let ones = |v: usize| if b.depth(v) <= 4 { int(1) } else { int(0) };
        assert_eq!(b.op_tl_at(0, ones).unwrap(), int(18));
        let hyper = VertexFunction::from_values(
            &b,
            Kind::Hyperspecial,
            (0..b.shell(3).start)
                .filter(|&v| b.kind(v) == Kind::Hyperspecial)
                .map(|v| (v, int(1))),
        )
        .unwrap();
        let a = b.op_a(&hyper).unwrap();
        for w in b.shell(1) {
            assert_eq!(a.get(w), int(3));
        }
    }

    #[test]
    fn boundary_is_an_error() {
        let b = TreeBall::build(2, 2).unwrap();
        let f = VertexFunction::delta(Kind::Hyperspecial, b.shell(2).start);
        assert!(matches!(b.op_a(&f), Err(TreeError::Boundary { .. })));
        assert!(matches!(
            b.op_tl(&VertexFunction::delta(Kind::Hyperspecial, b.shell(2).start)),
            Err(TreeError::Boundary { .. })
        ));
        assert!(matches!(
            b.op_a(&VertexFunction::delta(Kind::Special, 1)),
            Err(TreeError::WrongKind { .. })
        ));
    }

    #[test]
    fn composition_small() {
        let b = TreeBall::build(2, 3).unwrap();
        let r = b.verify_composition(Exec::Sequential);
        assert!(r.passed());
        assert_eq!(r.hyperspecial_deltas, 1);
        assert_eq!(r.special_deltas, 9);
        assert!(TreeBall::build(2, 0)
            .unwrap()
            .verify_composition(Exec::Parallel)
            .passed());
    }
}
