//! Truncated model of locally analytic functions on the lower unipotent
//! radical of `GL_3` over `Z_p`: `p^{3m}` balls of radius `p^{-m}`, each
//! carrying a polynomial of bounded degree in rescaled coordinates
//! `Z₂₁, Z₃₁, Z₃₂`, together with the dual coefficient vectors, the root
//! subgroup `R₂₁` translation action, and characters of `(Z/p^K)^*`.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::kernel::{int, is_prime, Matrix, Rational};

/// Largest number of balls a model may have.
pub const MAX_BALLS: u64 = 1 << 18;
/// Largest modulus `p^K` for which character tables are built.
pub const MAX_CHARACTER_MODULUS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("m and the degree bound must be at least 1")]
    BadParameters,
    #[error("model has {needed} balls, over the budget of {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("monomial of degree {found} exceeds the bound {bound}")]
    DegreeExceeded { found: u32, bound: u32 },
    #[error("ball index {0} out of range")]
    NoSuchBall(usize),
    #[error("shift {0} is not a p-adic integer")]
    MalformedShift(String),
    #[error("vectors live on different models")]
    ModelMismatch,
    #[error("character data inconsistent: {0}")]
    BadCharacter(String),
}

/// Exponents of `Z₂₁, Z₃₁, Z₃₂`.
pub type Monomial = [u32; 3];

fn total(mono: &Monomial) -> u32 {
    mono.iter().sum()
}

/// All monomials of total degree `≤ d`, graded then lexicographic.
pub fn monomials(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for t in 0..=d {
        for a in (0..=t).rev() {
            for b in (0..=t - a).rev() {
                out.push([a, b, t - a - b]);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Model {
    pub p: u64,
    pub m: u32,
    pub degree: u32,
}

impl Model {
    pub fn new(p: u64, m: u32, degree: u32) -> Result<Self, AnalyticError> {
        if !is_prime(p) {
            return Err(AnalyticError::NotPrime(p));
        }
        if m == 0 || degree == 0 {
            return Err(AnalyticError::BadParameters);
        }
        let needed = (p as u128).pow(3 * m);
        if needed > MAX_BALLS as u128 {
            return Err(AnalyticError::Budget {
                needed,
                budget: MAX_BALLS,
            });
        }
        Ok(Model { p, m, degree })
    }

    /// `p^m`, the number of residues per coordinate.
    pub fn side(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn num_balls(&self) -> usize {
        (self.side() as usize).pow(3)
    }

    /// Ball centre `(c₂₁, c₃₁, c₃₂)`; the ball is `z = c + p^m·Z`.
    pub fn center(&self, ball: usize) -> [u64; 3] {
        let s = self.side() as usize;
        [
            (ball % s) as u64,
            (ball / s % s) as u64,
            (ball / (s * s)) as u64,
        ]
    }

    pub fn ball_of(&self, c: [u64; 3]) -> usize {
        let s = self.side();
        (c[0] + s * c[1] + s * s * c[2]) as usize
    }

    pub fn num_monomials(&self) -> usize {
        let d = self.degree as usize;
        (d + 1) * (d + 2) * (d + 3) / 6
    }

    /// Target ball and rescaled in-ball shift `δ` for `z₂₁ ↦ z₂₁ + a`
    /// starting from `ball`.
    fn shift(&self, ball: usize, a: &Rational) -> Result<(usize, Rational), AnalyticError> {
        let modulus = BigInt::from(self.side());
        let p = BigInt::from(self.p);
        if a.denom().is_multiple_of(&p) {
            return Err(AnalyticError::MalformedShift(a.to_string()));
        }
        let den_inv = a.denom().extended_gcd(&modulus).x.mod_floor(&modulus);
        let residue = (a.numer() * den_inv).mod_floor(&modulus);
        let mut c = self.center(ball);
        let moved = BigInt::from(c[0]) + &residue;
        let new_c = moved.mod_floor(&modulus);
        let delta = (Rational::from_integer(BigInt::from(c[0])) + a
            - Rational::from_integer(new_c.clone()))
            / Rational::from_integer(modulus);
        c[0] = new_c.to_u64().expect("residue fits");
        Ok((self.ball_of(c), delta))
    }
}

/// Per-ball polynomials of total degree `≤ D`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticVector {
    model: Model,
    balls: Vec<BTreeMap<Monomial, Rational>>,
}

/// Dual coefficients, paired coefficientwise with [`AnalyticVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    model: Model,
    balls: Vec<BTreeMap<Monomial, Rational>>,
}

fn add_term(map: &mut BTreeMap<Monomial, Rational>, mono: Monomial, c: Rational) {
    let e = map.entry(mono).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&mono);
    }
}

fn check_term(model: &Model, ball: usize, mono: &Monomial) -> Result<(), AnalyticError> {
    if ball >= model.num_balls() {
        return Err(AnalyticError::NoSuchBall(ball));
    }
    if total(mono) > model.degree {
        return Err(AnalyticError::DegreeExceeded {
            found: total(mono),
            bound: model.degree,
        });
    }
    Ok(())
}

macro_rules! ball_family {
    ($t:ident) => {
        impl $t {
            pub fn zero(model: Model) -> Self {
                $t {
                    model,
                    balls: vec![BTreeMap::new(); model.num_balls()],
                }
            }

            pub fn from_terms(
                model: Model,
                terms: &[(usize, Monomial, Rational)],
            ) -> Result<Self, AnalyticError> {
                let mut v = $t::zero(model);
                for (ball, mono, c) in terms {
                    check_term(&model, *ball, mono)?;
                    add_term(&mut v.balls[*ball], *mono, c.clone());
                }
                Ok(v)
            }

            pub fn monomial(
                model: Model,
                ball: usize,
                mono: Monomial,
            ) -> Result<Self, AnalyticError> {
                $t::from_terms(model, &[(ball, mono, int(1))])
            }

            pub fn model(&self) -> Model {
                self.model
            }

            pub fn coeff(&self, ball: usize, mono: &Monomial) -> Rational {
                self.balls
                    .get(ball)
                    .and_then(|b| b.get(mono))
                    .cloned()
                    .unwrap_or_else(Rational::zero)
            }

            pub fn ball(&self, ball: usize) -> &BTreeMap<Monomial, Rational> {
                &self.balls[ball]
            }

            pub fn is_zero(&self) -> bool {
                self.balls.iter().all(|b| b.is_empty())
            }

            pub fn add(&self, rhs: &Self) -> Result<Self, AnalyticError> {
                if self.model != rhs.model {
                    return Err(AnalyticError::ModelMismatch);
                }
                let mut out = self.clone();
                for (k, b) in rhs.balls.iter().enumerate() {
                    for (mono, c) in b {
                        add_term(&mut out.balls[k], *mono, c.clone());
                    }
                }
                Ok(out)
            }

            pub fn scale(&self, c: &Rational) -> Self {
                let mut out = $t::zero(self.model);
                for (k, b) in self.balls.iter().enumerate() {
                    for (mono, x) in b {
                        add_term(&mut out.balls[k], *mono, x * c);
                    }
                }
                out
            }
        }
    };
}

ball_family!(AnalyticVector);
ball_family!(DualVector);

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `(Z₂₁ + δ)^{e}` expanded: coefficient of `Z₂₁^j` for `j ≤ e`.
fn shifted_power(e: u32, delta: &Rational) -> Vec<Rational> {
    (0..=e)
        .map(|j| Rational::from_integer(binomial(e, j)) * delta.pow((e - j) as i32))
        .collect()
}

/// The function `z ↦ f(z₂₁ + a, z₃₁, z₃₂)`. When `v_p(a) ≥ m` this is the
/// in-ball substitution `Z₂₁ ↦ Z₂₁ + a·p^{-m}`; otherwise balls are permuted
/// along the `c₂₁` direction as well.
pub fn translate_action(f: &AnalyticVector, a: &Rational) -> Result<AnalyticVector, AnalyticError> {
    let model = f.model;
    let mut out = AnalyticVector::zero(model);
    for ball in 0..model.num_balls() {
        let (src, delta) = model.shift(ball, a)?;
        for (mono, c) in &f.balls[src] {
            for (j, b) in shifted_power(mono[0], &delta).into_iter().enumerate() {
                add_term(&mut out.balls[ball], [j as u32, mono[1], mono[2]], c * b);
            }
        }
    }
    Ok(out)
}

/// Right action on duals, `λ ↦ λ·R₂₁(b)`, characterized by
/// `(translate_action(f, a), λ) = (f, translate_dual(λ, −a))`.
pub fn translate_dual(lambda: &DualVector, b: &Rational) -> Result<DualVector, AnalyticError> {
    let model = lambda.model;
    let a = -b;
    let mut out = DualVector::zero(model);
    for ball in 0..model.num_balls() {
        let (src, delta) = model.shift(ball, &a)?;
        for (mono, y) in &lambda.balls[ball] {
            // Z^β with β₂₁ ≥ α₂₁ feeds Z^α with weight C(β₂₁, α₂₁) δ^{β₂₁−α₂₁}.
            for e in mono[0]..=model.degree - mono[1] - mono[2] {
                let w =
                    Rational::from_integer(binomial(e, mono[0])) * delta.pow((e - mono[0]) as i32);
                add_term(&mut out.balls[src], [e, mono[1], mono[2]], y * w);
            }
        }
    }
    Ok(out)
}

pub fn dual_pairing(f: &AnalyticVector, lambda: &DualVector) -> Result<Rational, AnalyticError> {
    if f.model != lambda.model {
        return Err(AnalyticError::ModelMismatch);
    }
    let mut acc = Rational::zero();
    for (bf, bl) in f.balls.iter().zip(&lambda.balls) {
        for (mono, x) in bf {
            if let Some(y) = bl.get(mono) {
                acc += x * y;
            }
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub degree: u32,
    pub delta: String,
    /// Number of differences `Δ(Z^β)` formed.
    pub generators: usize,
    /// `dim` of polynomials of degree `≤ D` in three variables.
    pub target_dim: usize,
    pub rank: usize,
    /// Each `Δ(Z^β)` lives on `Z₂₁`-degrees below `β₂₁` with leading
    /// coefficient `β₂₁·δ`.
    pub triangular: bool,
}

impl RankReport {
    pub fn passed(&self) -> bool {
        self.rank == self.target_dim && self.triangular
    }
}

/// Rank of `{Z^β(Z₂₁+δ) − Z^β : deg β ≤ D+1, β₂₁ ≥ 1}` projected to degree
/// `≤ D`, within a single ball. Full rank means any dual vector orthogonal to
/// all `R₂₁`-differences vanishes in degree `≤ D`.
pub fn ihara_rank_test(degree: u32, delta: &Rational, exec: Exec) -> RankReport {
    let targets = monomials(degree);
    let index: BTreeMap<Monomial, usize> =
        targets.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    let sources: Vec<Monomial> = monomials(degree + 1)
        .into_iter()
        .filter(|m| m[0] >= 1)
        .collect();
    let columns: Vec<(Vec<Rational>, bool)> = exec.map(&sources, |beta| {
        let mut col = vec![Rational::zero(); targets.len()];
        let mut triangular = true;
        for (j, c) in shifted_power(beta[0], delta).into_iter().enumerate() {
            let j = j as u32;
            if j == beta[0] || c.is_zero() {
                continue;
            }
            match index.get(&[j, beta[1], beta[2]]) {
                Some(&row) => col[row] = c.clone(),
                None => triangular = false,
            }
            if j + 1 == beta[0] && c != Rational::from_integer(BigInt::from(beta[0])) * delta {
                triangular = false;
            }
        }
        (col, triangular)
    });
    let triangular = !delta.is_zero() && columns.iter().all(|(_, t)| *t);
    let cols: Vec<Vec<Rational>> = columns.into_iter().map(|(c, _)| c).collect();
    let rank = Matrix::from_columns(targets.len(), &cols, ())
        .and_then(|m| m.rank())
        .unwrap_or(0);
    RankReport {
        degree,
        delta: delta.to_string(),
        generators: sources.len(),
        target_dim: targets.len(),
        rank,
        triangular,
    }
}

/// Generators of `(Z/p^K)^*`: a primitive root for odd `p`, and `−1, 5` for
/// `p = 2`, with their orders.
pub fn unit_group_generators(p: u64, k: u32) -> Result<Vec<(u64, u64)>, AnalyticError> {
    if !is_prime(p) {
        return Err(AnalyticError::NotPrime(p));
    }
    if k == 0 {
        return Err(AnalyticError::BadParameters);
    }
    let modulus = p.pow(k);
    if p == 2 {
        return Ok(match k {
            1 => vec![],
            2 => vec![(3, 2)],
            _ => vec![(modulus - 1, 2), (5, modulus / 4)],
        });
    }
    let order = (p - 1) * modulus / p;
    let mut factors = Vec::new();
    let mut r = order;
    let mut d = 2;
    while d * d <= r {
        if r.is_multiple_of(d) {
            factors.push(d);
            while r.is_multiple_of(d) {
                r /= d;
            }
        }
        d += 1;
    }
    if r > 1 {
        factors.push(r);
    }
    let g = (2..modulus)
        .find(|&g| g % p != 0 && factors.iter().all(|&q| pow_mod(g, order / q, modulus) != 1))
        .expect("unit group of an odd prime power is cyclic");
    Ok(vec![(g, order)])
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn frac(x: &Rational) -> Rational {
    x - Rational::from_integer(x.floor().to_integer())
}

/// Character of `(Z/p^K)^*` with values `exp(2πi·x)`, stored as `x ∈ Q/Z`
/// for every unit residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    p: u64,
    k: u32,
    table: BTreeMap<u64, Rational>,
}

impl Character {
    /// Character taking the value `x_i ∈ Q/Z` on the unit `g_i`. The `g_i`
    /// must generate the group and the assignment must be multiplicative.
    pub fn from_images(p: u64, k: u32, images: &[(u64, Rational)]) -> Result<Self, AnalyticError> {
        if !is_prime(p) {
            return Err(AnalyticError::NotPrime(p));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|&m| m <= MAX_CHARACTER_MODULUS)
            .ok_or(AnalyticError::Budget {
                needed: (p as u128).saturating_pow(k),
                budget: MAX_CHARACTER_MODULUS,
            })?;
        let gens: Vec<(u64, Rational)> =
            images.iter().map(|(g, x)| (g % modulus, frac(x))).collect();
        if let Some((g, _)) = gens.iter().find(|(g, _)| g % p == 0) {
            return Err(AnalyticError::BadCharacter(format!("{} is not a unit", g)));
        }
        let mut table = BTreeMap::new();
        table.insert(1 % modulus, Rational::zero());
        let mut queue = VecDeque::from([1 % modulus]);
        while let Some(x) = queue.pop_front() {
            let vx = table[&x].clone();
            for (g, vg) in &gens {
                let y = (x as u128 * *g as u128 % modulus as u128) as u64;
                let vy = frac(&(&vx + vg));
                match table.get(&y) {
                    None => {
                        table.insert(y, vy);
                        queue.push_back(y);
                    }
                    Some(old) if *old != vy => {
                        return Err(AnalyticError::BadCharacter(format!(
                            "value at {} is both {} and {}",
                            y, old, vy
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        let units = (modulus / p) * (p - 1);
        if table.len() as u64 != units.max(1) {
            return Err(AnalyticError::BadCharacter(format!(
                "generators reach {} of {} units",
                table.len(),
                units
            )));
        }
        Ok(Character { p, k, table })
    }

    pub fn trivial(p: u64, k: u32) -> Result<Self, AnalyticError> {
        let gens = unit_group_generators(p, k)?;
        let images: Vec<(u64, Rational)> = gens
            .into_iter()
            .map(|(g, _)| (g, Rational::zero()))
            .collect();
        Character::from_images(p, k, &images)
    }

    /// `x` with `χ(t) = exp(2πi·x)`.
    pub fn value(&self, t: u64) -> Option<&Rational> {
        self.table.get(&(t % self.p.pow(self.k)))
    }

    pub fn is_trivial(&self) -> bool {
        self.table.values().all(|x| x.is_zero())
    }

    pub fn order(&self) -> BigInt {
        self.table
            .values()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// `χ·ψ⁻¹`.
    pub fn ratio(&self, other: &Character) -> Option<Character> {
        if (self.p, self.k) != (other.p, other.k) {
            return None;
        }
        let table = self
            .table
            .iter()
            .map(|(t, x)| (*t, frac(&(x - &other.table[t]))))
            .collect();
        Some(Character {
            p: self.p,
            k: self.k,
            table,
        })
    }

    /// Canonical images on [`unit_group_generators`].
    pub fn normalized_images(&self) -> Vec<(u64, Rational)> {
        unit_group_generators(self.p, self.k)
            .unwrap_or_default()
            .into_iter()
            .map(|(g, _)| (g, self.table[&g].clone()))
            .collect()
    }
}

/// Triple of characters `(χ₁, χ₂, χ₃)` of the torus at level `p^K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    pub chi: [Character; 3],
}

/// `χ₁ = χ₂ = χ₃` as functions on the unit group.
pub fn central_weight_test(w: &Weight) -> bool {
    w.chi[0] == w.chi[1] && w.chi[1] == w.chi[2]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityPair {
    pub i: usize,
    pub j: usize,
    pub ratio_trivial: bool,
    /// Unit `t` with `χ_i(t) ≠ χ_j(t)`, if any.
    pub witness: Option<u64>,
    /// Order of the root of unity `χ_i(t)/χ_j(t)` at the witness.
    pub witness_order: Option<String>,
    /// Dimension of `{x : χ_i(t)χ_j(t)⁻¹·x = x for all t}` in a line.
    pub fixed_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityReport {
    pub pairs: Vec<RigidityPair>,
}

impl RigidityReport {
    /// Every non-central pair leaves only the zero vector fixed, and every
    /// central pair fixes the whole line.
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| {
            (p.fixed_dim == 0) == !p.ratio_trivial && (p.witness.is_some() == !p.ratio_trivial)
        })
    }
}

/// For each pair `i < j`, the vectors of a line fixed by multiplication by
/// every `χ_i(t)χ_j(t)⁻¹`.
pub fn torus_rigidity_check(w: &Weight) -> RigidityReport {
    let mut pairs = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let ratio = w.chi[i].ratio(&w.chi[j]).expect("same level");
            let witness = ratio
                .table
                .iter()
                .find(|(_, x)| !x.is_zero())
                .map(|(t, x)| (*t, x.clone()));
            // (ζ − 1)x = 0 forces x = 0 as soon as one ζ ≠ 1.
            let fixed_dim = if witness.is_some() { 0 } else { 1 };
            pairs.push(RigidityPair {
                i: i + 1,
                j: j + 1,
                ratio_trivial: ratio.is_trivial(),
                witness: witness.as_ref().map(|(t, _)| *t),
                witness_order: witness.map(|(_, x)| x.denom().abs().to_string()),
                fixed_dim,
            });
        }
    }
    RigidityReport { pairs }
}
