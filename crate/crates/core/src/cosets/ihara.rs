use serde::Serialize;

use super::{CosetError, CosetGraph, VertexClass};
use crate::kernel::{is_prime, Fp, Matrix, Scalar};

/// Labels of vertices by a cyclic group `Z/order`, with `gshift` the label
/// change along every distance-2 move between hyperspecial vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetLabeling {
    pub order: u64,
    pub gshift: u64,
    pub v0: Vec<u64>,
    pub v1: Vec<u64>,
}

impl DetLabeling {
    /// Every vertex labelled 0 in the trivial group.
    pub fn trivial(g: &CosetGraph) -> Self {
        DetLabeling {
            order: 1,
            gshift: 0,
            v0: vec![0; g.n0()],
            v1: vec![0; g.n1()],
        }
    }

    /// Label = connected component index.
    pub fn by_component(g: &CosetGraph) -> Self {
        DetLabeling {
            order: g.num_components().max(1) as u64,
            gshift: 0,
            v0: (0..g.n0())
                .map(|v| g.component_of(VertexClass::V0, v) as u64)
                .collect(),
            v1: (0..g.n1())
                .map(|w| g.component_of(VertexClass::V1, w) as u64)
                .collect(),
        }
    }

    /// Parses `labels order=<n> gshift=<k>` followed by
    /// `<v0|v1> <index> <label>` lines; every vertex must be labelled.
    pub fn parse(text: &str, g: &CosetGraph) -> Result<Self, CosetError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, s)| (k + 1, s.split('#').next().unwrap_or("").trim()))
            .filter(|(_, s)| !s.is_empty());
        let perr = |line: usize, msg: String| CosetError::Parse { line, msg };
        let (hl, header) = lines
            .next()
            .ok_or_else(|| perr(0, "empty labeling".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        let field = |tok: Option<&&str>, key: &str| -> Result<u64, CosetError> {
            tok.and_then(|t| t.strip_prefix(key))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| perr(hl, format!("expected `{}<n>`", key)))
        };
        if toks.first() != Some(&"labels") || toks.len() != 3 {
            return Err(perr(
                hl,
                "expected header `labels order=<n> gshift=<k>`".into(),
            ));
        }
        let order = field(toks.get(1), "order=")?;
        let gshift = field(toks.get(2), "gshift=")?;
        if order == 0 {
            return Err(perr(hl, "order must be positive".into()));
        }
        let mut v0 = vec![None; g.n0()];
        let mut v1 = vec![None; g.n1()];
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [class, idx, lab] = toks.as_slice() else {
                return Err(perr(
                    ln,
                    format!("expected `<class> <index> <label>`, got `{}`", line),
                ));
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| perr(ln, format!("bad index `{}`", idx)))?;
            let lab: u64 = lab
                .parse()
                .map_err(|_| perr(ln, format!("bad label `{}`", lab)))?;
            let slot = match *class {
                "v0" => v0.get_mut(idx),
                "v1" => v1.get_mut(idx),
                other => return Err(perr(ln, format!("unknown vertex class `{}`", other))),
            }
            .ok_or_else(|| perr(ln, format!("{} index {} out of range", class, idx)))?;
            *slot = Some(lab % order);
        }
        let collect = |xs: Vec<Option<u64>>, class: &str| -> Result<Vec<u64>, CosetError> {
            xs.into_iter()
                .enumerate()
                .map(|(i, x)| {
                    x.ok_or_else(|| perr(0, format!("{} vertex {} is unlabelled", class, i)))
                })
                .collect()
        };
        Ok(DetLabeling {
            order,
            gshift: gshift % order,
            v0: collect(v0, "v0")?,
            v1: collect(v1, "v1")?,
        })
    }

    /// Every non-backtracking walk `v → w → u` shifts labels by `gshift`, and
    /// every edge joins equally labelled endpoints (so that pulled-back
    /// characters land in `ker(i)` up to sign).
    pub fn validate(&self, g: &CosetGraph) -> Result<(), CosetError> {
        if self.v0.len() != g.n0() || self.v1.len() != g.n1() {
            return Err(CosetError::InconsistentLabeling(
                "wrong number of labels".into(),
            ));
        }
        let n = self.order;
        let mut at_special: Vec<Vec<usize>> = vec![Vec::new(); g.n1()];
        for (e, &(v, w)) in g.edges().iter().enumerate() {
            at_special[w].push(e);
            if self.v0[v] != self.v1[w] {
                return Err(CosetError::InconsistentLabeling(format!(
                    "edge {} joins v0 {} (label {}) to v1 {} (label {})",
                    e, v, self.v0[v], w, self.v1[w]
                )));
            }
        }
        for star in &at_special {
            for &e1 in star {
                for &e2 in star {
                    if e1 == e2 {
                        continue;
                    }
                    let (v, u) = (g.h(e1), g.h(e2));
                    if (self.v0[u] + n - self.v0[v]) % n != self.gshift {
                        return Err(CosetError::InconsistentLabeling(format!(
                            "walk v0 {} -> v1 {} -> v0 {} shifts by {}, expected {}",
                            v,
                            g.s(e1),
                            u,
                            (self.v0[u] + n - self.v0[v]) % n,
                            self.gshift
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pullbacks `(φ∘label, −φ∘label)` of indicator functions of labels, as
    /// vectors on `V0 ⊔ V1` over `F_p`.
    fn abelian_generators(&self, p: u64) -> Vec<Vec<Fp>> {
        let mut used: Vec<u64> = self.v0.iter().chain(&self.v1).copied().collect();
        used.sort_unstable();
        used.dedup();
        used.into_iter()
            .map(|c| {
                self.v0
                    .iter()
                    .map(|&x| Fp::new((x == c) as i64, p))
                    .chain(self.v1.iter().map(|&x| Fp::new(-((x == c) as i64), p)))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentKernel {
    pub component: usize,
    pub kernel_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IharaReport {
    pub p: u64,
    pub kernel_dim: usize,
    pub components: usize,
    pub abelian_dim: usize,
    /// `ker(i mod p)` equals the span of abelian pullbacks.
    pub spanned_by_abelian: bool,
    pub per_component: Vec<ComponentKernel>,
}

impl IharaReport {
    pub fn passed(&self) -> bool {
        self.spanned_by_abelian && self.per_component.iter().all(|c| c.kernel_dim == 1)
    }
}

fn span_rank(vectors: &[Vec<Fp>], dim: usize, p: u64) -> Result<usize, CosetError> {
    if vectors.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_columns(dim, vectors, p)?.rank()?)
}

/// `ker(i mod p)` and its comparison with abelian forms. Without a labeling,
/// the component labeling is used (constant pairs on each component).
pub fn ihara_kernel_test(
    g: &CosetGraph,
    p: u64,
    lab: Option<&DetLabeling>,
) -> Result<IharaReport, CosetError> {
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
    let dim = g.n0() + g.n1();
    let i = g.i_matrix::<Fp>(p);
    let kernel = i.kernel_basis()?;
    let abelian = lab.abelian_generators(p);
    let k = kernel.len();
    let a = span_rank(&abelian, dim, p)?;
    let joint: Vec<Vec<Fp>> = kernel.iter().chain(&abelian).cloned().collect();
    let j = span_rank(&joint, dim, p)?;

    let mut per_component = Vec::with_capacity(g.num_components());
    for c in 0..g.num_components() {
        let cols: Vec<usize> = (0..g.n0())
            .filter(|&v| g.component_of(VertexClass::V0, v) == c)
            .chain(
                (0..g.n1())
                    .filter(|&w| g.component_of(VertexClass::V1, w) == c)
                    .map(|w| g.n0() + w),
            )
            .collect();
        let rows: Vec<usize> = (0..g.num_edges()).collect();
        let sub = i.select(&rows, &cols);
        per_component.push(ComponentKernel {
            component: c,
            kernel_dim: sub.kernel_basis()?.len(),
        });
    }
    Ok(IharaReport {
        p,
        kernel_dim: k,
        components: g.num_components(),
        abelian_dim: a,
        spanned_by_abelian: k == a && j == k,
        per_component,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianFormReport {
    pub p: u64,
    pub order: u64,
    pub chi_exponent: u64,
    /// `χ(g_l)` as a centered residue mod `p`.
    pub chi_of_gshift: i64,
    /// `l(l³+1)·χ(g_l)` as a centered residue mod `p`.
    pub expected_eigenvalue: i64,
    pub eigen_equation_holds: bool,
    pub in_kernel_of_i: bool,
}

/// Smallest prime `p > floor` with `order | p − 1`.
pub fn character_prime(order: u64, floor: u64) -> u64 {
    let mut p = floor + 1;
    while !(is_prime(p) && (p - 1).is_multiple_of(order)) {
        p += 1;
    }
    p
}

fn primitive_root_of_unity(order: u64, p: u64) -> Fp {
    let one = Fp::new(1, p);
    let factors: Vec<u64> = (2..=order)
        .filter(|&q| is_prime(q) && order.is_multiple_of(q))
        .collect();
    (1..p)
        .map(|x| Fp::new(x as i64, p).pow((p - 1) / order))
        .find(|z| z.pow(order) == one && factors.iter().all(|&q| z.pow(order / q) != one))
        .expect("order divides p - 1")
}

/// Pulls back the character `c ↦ ζ^{j·c}` of `Z/order` to `(f0, −f1)` over
/// `F_p` and checks `T_l f0 = l(l³+1)·χ(g_l)·f0`.
pub fn abelian_form(
    g: &CosetGraph,
    lab: &DetLabeling,
    chi_exponent: u64,
    p: u64,
) -> Result<AbelianFormReport, CosetError> {
    lab.validate(g)?;
    if !is_prime(p) {
        return Err(CosetError::NotPrime(p));
    }
    if !(p - 1).is_multiple_of(lab.order) {
        return Err(CosetError::Invalid(format!(
            "F_{} has no primitive root of unity of order {}",
            p, lab.order
        )));
    }
    let zeta = primitive_root_of_unity(lab.order, p);
    let chi = |c: u64| zeta.pow((chi_exponent % lab.order) * c % lab.order);
    let f0: Vec<Fp> = lab.v0.iter().map(|&c| chi(c)).collect();
    let f1: Vec<Fp> = lab.v1.iter().map(|&c| chi(c).negate()).collect();
    let chi_g = chi(lab.gshift);
    let eig = Fp::new(g.trivial_eigenvalue(), p).times(&chi_g);
    let tf = g.t_l::<Fp>(p).mul_vec(&f0)?;
    let eigen_equation_holds = tf.iter().zip(&f0).all(|(a, b)| *a == eig.times(b));
    let concat: Vec<Fp> = f0.iter().chain(&f1).copied().collect();
    let in_kernel_of_i = g
        .i_matrix::<Fp>(p)
        .mul_vec(&concat)?
        .iter()
        .all(Scalar::vanishes);
    Ok(AbelianFormReport {
        p,
        order: lab.order,
        chi_exponent,
        chi_of_gshift: chi_g.centered(),
        expected_eigenvalue: eig.centered(),
        eigen_equation_holds,
        in_kernel_of_i,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::tests::{k39, m13};

    #[test]
    fn kernel_is_constant_pairs() {
        for p in [2, 3, 5] {
            let r = ihara_kernel_test(&k39(), p, None).unwrap();
            assert_eq!(r.kernel_dim, 1);
            assert!(r.passed());
        }
        let two = k39().disjoint_union(&k39()).unwrap();
        let r = ihara_kernel_test(&two, 2, None).unwrap();
        assert_eq!(r.kernel_dim, 2);
        assert_eq!(r.per_component.len(), 2);
        assert!(r.passed());
        assert!(
            ihara_kernel_test(&m13(), 7, Some(&DetLabeling::trivial(&m13())))
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn trivial_character_gives_degree() {
        let g = k39();
        let r = abelian_form(&g, &DetLabeling::trivial(&g), 0, 37).unwrap();
        assert!(r.eigen_equation_holds && r.in_kernel_of_i);
        assert_eq!(r.expected_eigenvalue, 18);
    }

    #[test]
    fn sign_shift_labeling_is_inconsistent() {
        let g = k39();
        let lab = DetLabeling {
            order: 2,
            gshift: 1,
            v0: vec![0, 1, 0],
            v1: vec![0; 9],
        };
        assert!(matches!(
            lab.validate(&g),
            Err(CosetError::InconsistentLabeling(_))
        ));
    }

    #[test]
    fn component_sign_character() {
        let g = k39().disjoint_union(&m13()).unwrap();
        let lab = DetLabeling::by_component(&g);
        let r = abelian_form(&g, &lab, 1, 37).unwrap();
        assert!(r.eigen_equation_holds && r.in_kernel_of_i);
        assert_eq!(r.chi_of_gshift, 1);
    }

    #[test]
    fn labeling_parse() {
        let g = m13();
        let text = "labels order=2 gshift=0\nv0 0 1\nv1 0 1\nv1 1 1\nv1 2 1\n";
        let lab = DetLabeling::parse(text, &g).unwrap();
        assert_eq!(lab.v1, vec![1, 1, 1]);
        assert!(lab.validate(&g).is_ok());
        assert!(DetLabeling::parse("labels order=2 gshift=0\nv0 0 1\n", &g).is_err());
    }
}
