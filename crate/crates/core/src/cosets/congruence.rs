//! The integral γ-chain `γ₃ ⊆ γ₂ ⊆ γ₁ ⊆ γ₀` inside `L0 ⊕ L1`:
//!
//! * `γ₀ = L0 ⊕ L1`
//! * `γ₁ = i⁺(M)`
//! * `γ₂ = i⁺(M ∩ i(γ₀)_Q)`
//! * `γ₃ = i⁺ i(γ₀)`
//!
//! and the congruence module `(M / i(γ₀))^tors`.

use num_bigint::BigInt;

use super::{CosetError, CosetGraph};
use crate::kernel::{smith_normal_form, Lattice, QuotientStructure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceReport {
    /// Torsion invariants of `M / i(γ₀)`.
    pub torsion: Vec<BigInt>,
    /// Free rank of `M / i(γ₀)` (= dimension of the new space).
    pub free_rank: usize,
    /// Ranks of `γ₀, γ₁, γ₂, γ₃`.
    pub gamma_ranks: [usize; 4],
    pub containments_hold: bool,
    pub gamma0_mod_gamma1: QuotientStructure,
    pub gamma1_mod_gamma2: QuotientStructure,
    pub gamma2_mod_gamma3: QuotientStructure,
    pub gamma0_mod_gamma3: QuotientStructure,
    /// Invariant factors of `i⁺∘i` over the integers.
    pub level_matrix_snf: Vec<BigInt>,
}

pub fn congruence_module(g: &CosetGraph) -> Result<CongruenceReport, CosetError> {
    let i = g.i_integer();
    let iplus = i.transpose();
    let n = g.n0() + g.n1();
    let image = Lattice::from_generators(&i);
    let saturated = image.saturation();
    let m_mod_image = Lattice::full(g.num_edges()).quotient_invariants(&image)?;

    let gamma0 = Lattice::full(n);
    let gamma1 = Lattice::from_generators(&iplus);
    let gamma2 = saturated.image(&iplus)?;
    let ipi = iplus.mul(&i)?;
    let gamma3 = Lattice::from_generators(&ipi);

    let containments_hold = gamma0.contains_lattice(&gamma1)
        && gamma1.contains_lattice(&gamma2)
        && gamma2.contains_lattice(&gamma3);

    Ok(CongruenceReport {
        torsion: m_mod_image.torsion,
        free_rank: m_mod_image.free_rank,
        gamma_ranks: [gamma0.rank(), gamma1.rank(), gamma2.rank(), gamma3.rank()],
        containments_hold,
        gamma0_mod_gamma1: gamma0.quotient_invariants(&gamma1)?,
        gamma1_mod_gamma2: gamma1.quotient_invariants(&gamma2)?,
        gamma2_mod_gamma3: gamma2.quotient_invariants(&gamma3)?,
        gamma0_mod_gamma3: gamma0.quotient_invariants(&gamma3)?,
        level_matrix_snf: smith_normal_form(&ipi),
    })
}
