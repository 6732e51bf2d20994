//! Finite Abelian groups of fractional operators.
//!
//! An operator `A_α^{∘r}` applies the fractional operator of order `r·α`.
//! Composition acts on the integer exponents only: the vertical Hadamard
//! product adds them modulo `n` (groups isomorphic to ℤₙ), the star
//! operation multiplies them modulo `n` (the unit groups 𝕄ₙ and ℤₚ⁺).

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fracops::{apply_power_rule, PowerTerm};

/// Group size up to which associativity is checked over every triple.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;

/// Random triples drawn for associativity on larger carriers.
pub const SAMPLED_TRIPLES: usize = 100_000;

const SAMPLING_SEED: u64 = 0x5eed_f00d;

/// How two exponents combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Composition {
    /// `r + s mod n`
    Additive,
    /// `r · s mod n`
    Multiplicative,
}

impl Composition {
    fn combine(self, lhs: i64, rhs: i64, modulus: i64) -> i64 {
        let raw = match self {
            Composition::Additive => lhs as i128 + rhs as i128,
            Composition::Multiplicative => lhs as i128 * rhs as i128,
        };
        raw.rem_euclid(modulus as i128) as i64
    }
}

/// `A_α^{∘r}` living in a group of modulus `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorElement {
    pub exponent: i64,
    pub base_alpha: f64,
    pub modulus: i64,
    pub law: Composition,
}

impl OperatorElement {
    /// Total fractional order `r·α` this element applies.
    pub fn order(&self) -> f64 {
        self.exponent as f64 * self.base_alpha
    }

    fn check_same_group(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus
            || self.law != other.law
            || self.base_alpha.to_bits() != other.base_alpha.to_bits()
        {
            return Err(Error::Mismatch(format!(
                "{:?} mod {} (α = {}) vs {:?} mod {} (α = {})",
                self.law, self.modulus, self.base_alpha, other.law, other.modulus, other.base_alpha
            )));
        }
        Ok(())
    }
}

impl fmt::Display for OperatorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A^∘{}", self.exponent)
    }
}

/// Vertical Hadamard product: exponents add modulo `n`.
pub fn hadamard_compose(p: &OperatorElement, q: &OperatorElement) -> Result<OperatorElement> {
    p.check_same_group(q)?;
    if p.law != Composition::Additive {
        return Err(Error::Mismatch(
            "Hadamard product is defined on additive groups".into(),
        ));
    }
    Ok(OperatorElement {
        exponent: Composition::Additive.combine(p.exponent, q.exponent, p.modulus),
        ..*p
    })
}

/// Star operation: exponents multiply modulo `n`.
///
/// Fails with [`Error::Closure`] when the product is not a unit mod `n`,
/// which can only happen if an operand was not a unit to begin with.
pub fn star_compose(p: &OperatorElement, q: &OperatorElement) -> Result<OperatorElement> {
    p.check_same_group(q)?;
    if p.law != Composition::Multiplicative {
        return Err(Error::Mismatch(
            "star operation is defined on multiplicative groups".into(),
        ));
    }
    let exponent = Composition::Multiplicative.combine(p.exponent, q.exponent, p.modulus);
    if p.modulus > 1 && gcd(exponent, p.modulus) != 1 {
        return Err(Error::Closure {
            lhs: p.exponent,
            rhs: q.exponent,
            result: exponent,
        });
    }
    Ok(OperatorElement { exponent, ..*p })
}

/// Applies `A_α^{∘r}` to a power term, i.e. the power rule of order `r·α`.
pub fn apply_element(e: &OperatorElement, term: PowerTerm) -> Result<PowerTerm> {
    apply_power_rule(term, e.order())
}

/// A finite set of exponents with a composition law.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorGroup {
    carrier: Vec<i64>,
    modulus: i64,
    law: Composition,
    base_alpha: f64,
}

impl OperatorGroup {
    /// Builds a group from raw parts without checking the axioms; see
    /// [`verify_group_axioms`].
    pub fn from_parts(
        carrier: impl IntoIterator<Item = i64>,
        modulus: i64,
        law: Composition,
        base_alpha: f64,
    ) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::domain(format!(
                "modulus must be positive, got {modulus}"
            )));
        }
        if !base_alpha.is_finite() {
            return Err(Error::domain(format!(
                "base order {base_alpha} is not finite"
            )));
        }
        let carrier: BTreeSet<i64> = carrier.into_iter().collect();
        if carrier.is_empty() {
            return Err(Error::Empty("operator group carrier".into()));
        }
        Ok(Self {
            carrier: carrier.into_iter().collect(),
            modulus,
            law,
            base_alpha,
        })
    }

    /// Additive subgroup `{0, d, 2d, …}` of ℤₙ for a divisor `d` of `n`.
    pub fn additive_subgroup(n: i64, d: i64, alpha: f64) -> Result<Self> {
        if n < 1 || d < 1 || n % d != 0 {
            return Err(Error::domain(format!("{d} does not divide {n}")));
        }
        Self::from_parts((0..n).step_by(d as usize), n, Composition::Additive, alpha)
    }

    pub fn carrier(&self) -> &[i64] {
        &self.carrier
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn law(&self) -> Composition {
        self.law
    }

    pub fn base_alpha(&self) -> f64 {
        self.base_alpha
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn contains(&self, exponent: i64) -> bool {
        self.carrier.binary_search(&exponent).is_ok()
    }

    /// The element `A_α^{∘r}`; `r` must be in the carrier.
    pub fn element(&self, exponent: i64) -> Result<OperatorElement> {
        if !self.contains(exponent) {
            return Err(Error::domain(format!(
                "exponent {exponent} is not in the carrier"
            )));
        }
        Ok(self.raw_element(exponent))
    }

    fn raw_element(&self, exponent: i64) -> OperatorElement {
        OperatorElement {
            exponent,
            base_alpha: self.base_alpha,
            modulus: self.modulus,
            law: self.law,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = OperatorElement> + '_ {
        self.carrier.iter().map(|&r| self.raw_element(r))
    }

    /// Composes two members with the group's law, checking both operands
    /// and the result against the carrier.
    pub fn compose(&self, p: &OperatorElement, q: &OperatorElement) -> Result<OperatorElement> {
        let own = self.raw_element(0);
        own.check_same_group(p)?;
        own.check_same_group(q)?;
        for e in [p, q] {
            if !self.contains(e.exponent) {
                return Err(Error::Mismatch(format!(
                    "{e} is not a member of this group"
                )));
            }
        }
        let result = self.law.combine(p.exponent, q.exponent, self.modulus);
        if !self.contains(result) {
            return Err(Error::Closure {
                lhs: p.exponent,
                rhs: q.exponent,
                result,
            });
        }
        Ok(self.raw_element(result))
    }

    fn op(&self, a: i64, b: i64) -> i64 {
        self.law.combine(a, b, self.modulus)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// ℤₙ: exponents `{0, …, n−1}` under addition mod `n`.
pub fn build_group_zn(n: i64, alpha: f64) -> Result<OperatorGroup> {
    if n < 1 {
        return Err(Error::domain(format!("ℤₙ needs n ≥ 1, got {n}")));
    }
    OperatorGroup::from_parts(0..n, n, Composition::Additive, alpha)
}

/// 𝕄ₙ: residues in `[1, n)` coprime to `n` under multiplication mod `n`.
pub fn build_group_mn(n: i64, alpha: f64) -> Result<OperatorGroup> {
    if n < 2 {
        return Err(Error::domain(format!("𝕄ₙ needs n ≥ 2, got {n}")));
    }
    OperatorGroup::from_parts(
        (1..n).filter(|&r| gcd(r, n) == 1),
        n,
        Composition::Multiplicative,
        alpha,
    )
}

/// ℤₚ⁺: residues `{1, …, p−1}` under multiplication mod a prime `p`.
pub fn build_group_zp(p: i64, alpha: f64) -> Result<OperatorGroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    OperatorGroup::from_parts(1..p, p, Composition::Multiplicative, alpha)
}

/// Outcome of checking the Abelian group axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomReport {
    pub closure: bool,
    pub associativity: bool,
    pub identity: bool,
    pub inverses: bool,
    pub commutativity: bool,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.closure && self.associativity && self.identity && self.inverses && self.commutativity
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "closure={} associativity={} identity={} inverses={} commutativity={}",
            self.closure, self.associativity, self.identity, self.inverses, self.commutativity
        )
    }
}

fn identity_of(g: &OperatorGroup) -> Option<i64> {
    g.carrier.iter().copied().find(|&e| {
        g.carrier
            .iter()
            .all(|&a| g.op(e, a) == a && g.op(a, e) == a)
    })
}

/// Checks closure, associativity, identity, inverses and commutativity by
/// enumeration. Associativity covers every triple up to
/// [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`] elements and a seeded random sample of
/// [`SAMPLED_TRIPLES`] triples beyond that.
pub fn verify_group_axioms(g: &OperatorGroup) -> AxiomReport {
    let c = &g.carrier;

    let closure = c.iter().all(|&a| c.iter().all(|&b| g.contains(g.op(a, b))));

    let assoc = |a: i64, b: i64, z: i64| g.op(g.op(a, b), z) == g.op(a, g.op(b, z));
    let associativity = if c.len() <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        c.iter()
            .all(|&a| c.iter().all(|&b| c.iter().all(|&z| assoc(a, b, z))))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        (0..SAMPLED_TRIPLES).all(|_| {
            let a = c[rng.gen_range(0..c.len())];
            let b = c[rng.gen_range(0..c.len())];
            let z = c[rng.gen_range(0..c.len())];
            assoc(a, b, z)
        })
    };

    let identity_elem = identity_of(g);
    let inverses = match identity_elem {
        Some(e) => c
            .iter()
            .all(|&a| c.iter().any(|&b| g.op(a, b) == e && g.op(b, a) == e)),
        None => false,
    };

    let commutativity = c
        .iter()
        .all(|&a| c.iter().all(|&b| g.op(a, b) == g.op(b, a)));

    AxiomReport {
        closure,
        associativity,
        identity: identity_elem.is_some(),
        inverses,
        commutativity,
    }
}

/// The isomorphism ψ: A_α^{∘r} ↦ r onto the residue group.
#[derive(Debug, Clone)]
pub struct IsoWitness {
    group: OperatorGroup,
}

impl IsoWitness {
    pub fn psi(&self, e: &OperatorElement) -> Result<i64> {
        self.group.raw_element(0).check_same_group(e)?;
        if !self.group.contains(e.exponent) {
            return Err(Error::Mismatch(format!(
                "{e} is not a member of this group"
            )));
        }
        Ok(e.exponent)
    }

    pub fn psi_inv(&self, r: i64) -> Result<OperatorElement> {
        self.group.element(r)
    }

    pub fn group(&self) -> &OperatorGroup {
        &self.group
    }
}

/// Builds ψ after confirming `g` is a group and that ψ is a homomorphism
/// onto the residues (ψ(a∘b) = ψ(a) ⊕ ψ(b) mod n) over every pair.
pub fn iso_witness(g: &OperatorGroup) -> Result<IsoWitness> {
    let report = verify_group_axioms(g);
    if !report.all() {
        return Err(Error::NotAGroup(report.to_string()));
    }
    let witness = IsoWitness { group: g.clone() };
    for a in g.elements() {
        for b in g.elements() {
            let composed = g.compose(&a, &b)?;
            let lhs = witness.psi(&composed)?;
            let rhs = g.op(witness.psi(&a)?, witness.psi(&b)?);
            if lhs != rhs {
                return Err(Error::NotAGroup(format!(
                    "ψ({a} ∘ {b}) = {lhs} but ψ({a}) ⊕ ψ({b}) = {rhs}"
                )));
            }
        }
    }
    Ok(witness)
}
