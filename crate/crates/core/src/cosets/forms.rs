use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{CosetError, CosetGraph};
use crate::kernel::{Matrix, Polynomial, Rational, Scalar};

/// A pair `(f0, f1)` of functions on `V0` and `V1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormTriple<T: Scalar> {
    pub f0: Vec<T>,
    pub f1: Vec<T>,
}

/// A function on the edge set.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeForm<T: Scalar> {
    pub m: Vec<T>,
}

impl<T: Scalar> FormTriple<T> {
    pub fn zero(g: &CosetGraph, ctx: &T::Ctx) -> Self {
        FormTriple {
            f0: vec![T::zero_in(ctx); g.n0()],
            f1: vec![T::zero_in(ctx); g.n1()],
        }
    }

    /// Splits a vector on `V0 ⊔ V1` (V0 first).
    pub fn from_concat(g: &CosetGraph, v: &[T]) -> Result<Self, CosetError> {
        if v.len() != g.n0() + g.n1() {
            return Err(CosetError::StratumMismatch);
        }
        Ok(FormTriple {
            f0: v[..g.n0()].to_vec(),
            f1: v[g.n0()..].to_vec(),
        })
    }

    pub fn concat(&self) -> Vec<T> {
        self.f0.iter().chain(&self.f1).cloned().collect()
    }

    fn fits(&self, g: &CosetGraph) -> bool {
        self.f0.len() == g.n0() && self.f1.len() == g.n1()
    }
}

/// `i(f0, f1)(e) = f0(h(e)) + f1(s(e))`.
pub fn map_i<T: Scalar>(t: &FormTriple<T>, g: &CosetGraph) -> Result<EdgeForm<T>, CosetError> {
    if !t.fits(g) {
        return Err(CosetError::StratumMismatch);
    }
    Ok(EdgeForm {
        m: g.edges()
            .iter()
            .map(|&(v, w)| t.f0[v].plus(&t.f1[w]))
            .collect(),
    })
}

/// `i⁺(m) = (v ↦ Σ_{h(e)=v} m(e), w ↦ Σ_{s(e)=w} m(e))`.
pub fn map_iplus<T: Scalar>(
    m: &EdgeForm<T>,
    g: &CosetGraph,
    ctx: &T::Ctx,
) -> Result<FormTriple<T>, CosetError> {
    if m.m.len() != g.num_edges() {
        return Err(CosetError::StratumMismatch);
    }
    let mut out = FormTriple::<T>::zero(g, ctx);
    for (x, &(v, w)) in m.m.iter().zip(g.edges()) {
        out.f0[v] = out.f0[v].plus(x);
        out.f1[w] = out.f1[w].plus(x);
    }
    Ok(out)
}

/// Standard pairing `Σ a(x) b(x)` on a common indexing set.
pub fn pairing<T: Scalar>(a: &[T], b: &[T], ctx: &T::Ctx) -> Result<T, CosetError> {
    if a.len() != b.len() {
        return Err(CosetError::StratumMismatch);
    }
    Ok(a.iter()
        .zip(b)
        .fold(T::zero_in(ctx), |acc, (x, y)| acc.plus(&x.times(y))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelMatrixReport {
    /// `i⁺∘i = [[(l³+1), B], [A, (l+1)]]` entrywise.
    pub blocks_match: bool,
    /// `B∘A = T_l + (l³+1)`.
    pub composition_matches: bool,
    /// `A∘B = T'_l + (l+1)`.
    pub mirror_matches: bool,
    pub mismatches: Vec<String>,
}

impl LevelMatrixReport {
    pub fn passed(&self) -> bool {
        self.blocks_match && self.composition_matches && self.mirror_matches
    }
}

pub fn level_matrix(g: &CosetGraph) -> Result<LevelMatrixReport, CosetError> {
    let (n0, n1) = (g.n0(), g.n1());
    let i = g.i_integer();
    let ipi = i.transpose().mul(&i)?;
    let a = g.adjacency::<BigInt>(());
    let b = a.transpose();
    let (d0, d1) = (BigInt::from(g.degree0()), BigInt::from(g.degree1()));
    let mut mismatches = Vec::new();
    for r in 0..n0 + n1 {
        for c in 0..n0 + n1 {
            let want = match (r < n0, c < n0) {
                (true, true) => {
                    if r == c {
                        d0.clone()
                    } else {
                        BigInt::zero()
                    }
                }
                (true, false) => b.get(r, c - n0).clone(),
                (false, true) => a.get(r - n0, c).clone(),
                (false, false) => {
                    if r == c {
                        d1.clone()
                    } else {
                        BigInt::zero()
                    }
                }
            };
            if *ipi.get(r, c) != want {
                mismatches.push(format!("i+i[{},{}] = {} != {}", r, c, ipi.get(r, c), want));
            }
        }
    }
    let blocks_match = mismatches.is_empty();
    let ba = b.mul(&a)?;
    let expect_ba = g
        .t_l::<BigInt>(())
        .add(&Matrix::identity(n0, ()).scale(&d0))?;
    let composition_matches = ba == expect_ba;
    if !composition_matches {
        mismatches.push("B∘A != T_l + (l^3+1)".into());
    }
    let ab = a.mul(&b)?;
    let expect_ab = g
        .t_l_special::<BigInt>(())
        .add(&Matrix::identity(n1, ()).scale(&d1))?;
    let mirror_matches = ab == expect_ab;
    if !mirror_matches {
        mismatches.push("A∘B != T'_l + (l+1)".into());
    }
    Ok(LevelMatrixReport {
        blocks_match,
        composition_matches,
        mirror_matches,
        mismatches,
    })
}

#[derive(Debug, Clone)]
pub struct OldNewDecomposition {
    pub old_basis: Vec<Vec<Rational>>,
    pub new_basis: Vec<Vec<Rational>>,
    pub orthogonal: bool,
    pub spans_everything: bool,
}

impl OldNewDecomposition {
    pub fn old_dim(&self) -> usize {
        self.old_basis.len()
    }

    pub fn new_dim(&self) -> usize {
        self.new_basis.len()
    }
}

/// `old = im(i)`, `new = ker(i⁺)` over the rationals.
pub fn old_new_decomposition(g: &CosetGraph) -> Result<OldNewDecomposition, CosetError> {
    let i = g.i_matrix::<Rational>(());
    let old_basis = i.column_space_basis()?;
    let new_basis = i.transpose().kernel_basis()?;
    let mut orthogonal = true;
    for a in &old_basis {
        for b in &new_basis {
            if !pairing(a, b, &())?.is_zero() {
                orthogonal = false;
            }
        }
    }
    let all: Vec<Vec<Rational>> = old_basis.iter().chain(&new_basis).cloned().collect();
    let spans_everything = if all.is_empty() {
        g.num_edges() == 0
    } else {
        Matrix::from_columns(g.num_edges(), &all, ())?.rank()? == g.num_edges()
    };
    Ok(OldNewDecomposition {
        old_basis,
        new_basis,
        orthogonal,
        spans_everything,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelEigenReport {
    pub kernel_dim: usize,
    /// Basis vectors with `(T_l − l(l³+1))f0 = 0`.
    pub hyperspecial_ok: usize,
    /// Basis vectors with `(T'_l − l³(l+1))f1 = 0`.
    pub special_ok: usize,
}

impl KernelEigenReport {
    pub fn passed(&self) -> bool {
        self.hyperspecial_ok == self.kernel_dim && self.special_ok == self.kernel_dim
    }
}

/// Checks that every vector of `ker(i⁺∘i)` has `T_l`-eigenvalue `l(l³+1)` on
/// its `V0` part (and the mirror statement on `V1`).
pub fn kernel_eigenvalue_check(g: &CosetGraph) -> Result<KernelEigenReport, CosetError> {
    let i = g.i_matrix::<Rational>(());
    let ipi = i.transpose().mul(&i)?;
    let basis = ipi.kernel_basis()?;
    let l = g.l() as i64;
    let shift0 =
        Matrix::identity(g.n0(), ()).scale(&Rational::from_integer(g.trivial_eigenvalue().into()));
    let shift1 =
        Matrix::identity(g.n1(), ()).scale(&Rational::from_integer((l * l * l * (l + 1)).into()));
    let op0 = g.t_l::<Rational>(()).sub(&shift0)?;
    let op1 = g.t_l_special::<Rational>(()).sub(&shift1)?;
    let mut report = KernelEigenReport {
        kernel_dim: basis.len(),
        hyperspecial_ok: 0,
        special_ok: 0,
    };
    for v in &basis {
        let t = FormTriple::from_concat(g, v)?;
        if op0.mul_vec(&t.f0)?.iter().all(|x| x.is_zero()) {
            report.hyperspecial_ok += 1;
        }
        if op1.mul_vec(&t.f1)?.iter().all(|x| x.is_zero()) {
            report.special_ok += 1;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetIdentityReport {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// `det(i⁺∘i) = (l+1)^{|V1|−|V0|} · det(l(l³+1) − T_l)`.
pub fn det_identity_check(g: &CosetGraph) -> Result<DetIdentityReport, CosetError> {
    if g.n1() < g.n0() {
        return Err(CosetError::Invalid("det identity needs |V1| ≥ |V0|".into()));
    }
    let i = g.i_matrix::<Rational>(());
    let lhs = i.transpose().mul(&i)?.det()?;
    let shift =
        Matrix::identity(g.n0(), ()).scale(&Rational::from_integer(g.trivial_eigenvalue().into()));
    let inner = shift.sub(&g.t_l::<Rational>(()))?.det()?;
    let factor = num_traits::pow(Rational::from_integer(g.degree1().into()), g.n1() - g.n0());
    let rhs = factor * inner;
    Ok(DetIdentityReport {
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        holds: lhs == rhs,
    })
}

/// Integer eigenvalues (with algebraic multiplicity) of an integer matrix,
/// plus the degree of the part of the characteristic polynomial with no
/// rational roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub integer_eigenvalues: Vec<(i64, usize)>,
    pub irrational_degree: usize,
}

impl Spectrum {
    pub fn contains(&self, x: i64) -> bool {
        self.integer_eigenvalues.iter().any(|&(y, _)| y == x)
    }
}

pub fn integer_spectrum(m: &Matrix<BigInt>) -> Result<Spectrum, CosetError> {
    let bound = (0..m.rows())
        .map(|r| m.row(r).iter().fold(BigInt::zero(), |a, x| a + x.abs()))
        .max()
        .unwrap_or_else(BigInt::zero)
        .to_i64()
        .ok_or_else(|| CosetError::Invalid("matrix entries too large".into()))?;
    let mut p = m
        .map::<Rational>((), |x| Rational::from_integer(x.clone()))
        .char_poly()?;
    let mut found = Vec::new();
    for r in -bound..=bound {
        let root = Polynomial::new(
            vec![
                Rational::from_integer((-r).into()),
                Rational::from_integer(1.into()),
            ],
            (),
        );
        let mut mult = 0;
        loop {
            let (q, rem) = p.div_rem(&root)?;
            if !rem.is_zero() || p.degree().unwrap_or(0) == 0 {
                break;
            }
            p = q;
            mult += 1;
        }
        if mult > 0 {
            found.push((r, mult));
        }
    }
    found.sort_by_key(|e| std::cmp::Reverse(e.0));
    Ok(Spectrum {
        integer_eigenvalues: found,
        irrational_degree: p.degree().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::tests::{k39, m13};
    use crate::kernel::int;

    fn ones(n: usize) -> Vec<Rational> {
        vec![int(1); n]
    }

    #[test]
    fn map_examples() {
        let g = k39();
        let t = FormTriple {
            f0: ones(3),
            f1: vec![int(0); 9],
        };
        assert_eq!(map_i(&t, &g).unwrap().m, ones(27));
        let t = FormTriple {
            f0: ones(3),
            f1: vec![int(-1); 9],
        };
        assert!(map_i(&t, &g).unwrap().m.iter().all(|x| x.is_zero()));
        let back = map_iplus(&EdgeForm { m: ones(27) }, &g, &()).unwrap();
        assert_eq!(back.f0, vec![int(9); 3]);
        assert_eq!(back.f1, vec![int(3); 9]);
        assert_eq!(pairing(&ones(27), &ones(27), &()).unwrap(), int(27));
    }

    #[test]
    fn level_matrix_examples() {
        assert!(level_matrix(&k39()).unwrap().passed());
        assert!(level_matrix(&m13()).unwrap().passed());
    }

    #[test]
    fn old_new_dims() {
        let d = old_new_decomposition(&k39()).unwrap();
        assert_eq!((d.old_dim(), d.new_dim()), (11, 16));
        assert!(d.orthogonal && d.spans_everything);
        let d = old_new_decomposition(&m13()).unwrap();
        assert_eq!((d.old_dim(), d.new_dim()), (3, 6));
        let two = k39().disjoint_union(&k39()).unwrap();
        let d = old_new_decomposition(&two).unwrap();
        assert_eq!((d.old_dim(), d.new_dim()), (22, 32));
    }

    #[test]
    fn kernel_and_det() {
        let r = kernel_eigenvalue_check(&k39()).unwrap();
        assert_eq!(r.kernel_dim, 1);
        assert!(r.passed());
        assert!(kernel_eigenvalue_check(&m13()).unwrap().passed());
        let d = det_identity_check(&k39()).unwrap();
        assert!(d.holds);
        assert_eq!(d.lhs, "0");
        assert!(det_identity_check(&m13()).unwrap().holds);
    }

    #[test]
    fn k39_spectrum() {
        let s = integer_spectrum(&k39().t_l::<BigInt>(())).unwrap();
        assert_eq!(s.integer_eigenvalues, vec![(18, 1), (-9, 2)]);
        assert_eq!(s.irrational_degree, 0);
    }
}
