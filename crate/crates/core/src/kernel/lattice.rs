use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::snf::smith_decomposition;
use super::KernelError;

/// Finitely generated subgroup of `Z^n`, kept with a basis adapted to the
/// ambient lattice.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
    // `left · v` expresses `v` in the adapted coordinates; the first `rank`
    // coordinates divided by `scales` are coordinates in `basis`.
    left: Matrix<BigInt>,
    left_inv: Matrix<BigInt>,
    scales: Vec<BigInt>,
}

/// `free_rank` copies of `Z` plus `⊕ Z/t` over the torsion orders (each > 1,
/// in divisibility order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStructure {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl QuotientStructure {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the quotient, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl Lattice {
    /// Lattice spanned by the columns of `generators`.
    pub fn from_generators(generators: &Matrix<BigInt>) -> Self {
        let dim = generators.rows();
        let d = smith_decomposition(generators);
        let scales: Vec<BigInt> = d
            .invariants
            .iter()
            .filter(|x| !x.is_zero())
            .cloned()
            .collect();
        let basis = scales
            .iter()
            .enumerate()
            .map(|(i, s)| d.left_inv.column(i).iter().map(|x| x * s).collect())
            .collect();
        Lattice {
            dim,
            basis,
            left: d.left,
            left_inv: d.left_inv,
            scales,
        }
    }

    pub fn from_vectors(dim: usize, vectors: &[Vec<BigInt>]) -> Result<Self, KernelError> {
        let m = Matrix::from_columns(dim, vectors, ())?;
        Ok(Lattice::from_generators(&m))
    }

    /// The whole of `Z^n`.
    pub fn full(dim: usize) -> Self {
        Lattice::from_generators(&Matrix::identity(dim, ()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// `(L ⊗ Q) ∩ Z^n`.
    pub fn saturation(&self) -> Lattice {
        let cols: Vec<Vec<BigInt>> = (0..self.rank()).map(|i| self.left_inv.column(i)).collect();
        Lattice::from_vectors(self.dim, &cols).expect("columns have ambient length")
    }

    /// Coordinates of `v` in [`Lattice::basis`], if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let w = self.left.mul_vec(v).ok()?;
        if w[self.rank()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = Vec::with_capacity(self.rank());
        for (x, s) in w.iter().zip(&self.scales) {
            let (q, r) = x.div_rem(s);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, sub: &Lattice) -> bool {
        sub.dim == self.dim && sub.basis.iter().all(|v| self.contains(v))
    }

    /// Structure of `self / sub`.
    pub fn quotient_invariants(&self, sub: &Lattice) -> Result<QuotientStructure, KernelError> {
        if sub.dim != self.dim {
            return Err(KernelError::NotSublattice);
        }
        let r = self.rank();
        let mut coords = Vec::with_capacity(sub.rank());
        for v in &sub.basis {
            coords.push(self.coordinates(v).ok_or(KernelError::NotSublattice)?);
        }
        if coords.is_empty() {
            return Ok(QuotientStructure {
                free_rank: r,
                torsion: Vec::new(),
            });
        }
        let m = Matrix::from_columns(r, &coords, ())?;
        let inv = smith_decomposition(&m).invariants;
        let nonzero = inv.iter().filter(|x| !x.is_zero()).count();
        Ok(QuotientStructure {
            free_rank: r - nonzero,
            torsion: inv
                .into_iter()
                .filter(|x| !x.is_zero() && !x.is_one())
                .collect(),
        })
    }

    /// Image of the lattice under `m`.
    pub fn image(&self, m: &Matrix<BigInt>) -> Result<Lattice, KernelError> {
        let imgs = self
            .basis
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>, _>>()?;
        Lattice::from_vectors(m.rows(), &imgs)
    }

    /// Intersection with a sublattice of the form `ker(m) ∩ self`.
    pub fn kernel_of(&self, m: &Matrix<BigInt>) -> Result<Lattice, KernelError> {
        let b = Matrix::from_columns(self.dim, &self.basis, ())?;
        let mb = m.mul(&b)?;
        // Integer kernel of `mb`: columns of `right` beyond its rank.
        let d = smith_decomposition(&mb);
        let rank = d.rank();
        let mut vecs = Vec::new();
        for j in rank..mb.cols() {
            let c = d.right.column(j);
            vecs.push(b.mul_vec(&c)?);
        }
        Lattice::from_vectors(self.dim, &vecs)
    }
}
