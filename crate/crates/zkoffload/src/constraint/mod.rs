//! Rank-1 constraint systems: the compiled form of the verification program.
//!
//! A system is a list of rows (A, B, C) of linear combinations over the
//! variable vector z (constant one, then public inputs, then private
//! witness); a row is satisfied when <A,z> * <B,z> = <C,z>.
//!
//! Circuits are written once against [`Synthesizer`] and run in two modes:
//! setup mode records constraints (no values), witness mode computes values
//! and checks every constraint as it is enforced, failing fast at the first
//! violation. Both modes share one code path, so the structure the prover
//! commits to and the assignment the witness computes cannot drift apart.

mod gadgets;
mod mimc;

pub use gadgets::{
    gadget_boolean, gadget_equal, gadget_hash, gadget_indexed_lookup, gadget_path_sum,
    gadget_permutation_check, gadget_range_check,
};
pub use mimc::{mimc_hash_elements, mimc_permute, MIMC_ROUNDS};

use crate::algebra::FieldElement;
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("allocation after finalization")]
    Finalized,
    #[error("public allocation after a private allocation")]
    PublicAfterPrivate,
    #[error("unknown variable index {0}")]
    UnknownVariable(u32),
    #[error("assignment length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("assignment does not start with the constant one")]
    BadConstantSlot,
    #[error("constraint violated at '{label}' (row {index})")]
    Unsatisfied { label: &'static str, index: usize },
    #[error("gadget '{0}' rejected its input shape: {1}")]
    BadGadgetInput(&'static str, String),
}

/// Handle to a variable; index 0 is the built-in constant one.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Variable(pub(crate) u32);

impl Variable {
    /// The constant-one variable.
    pub const ONE: Variable = Variable(0);

    pub fn index(&self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Visibility {
    Public,
    Private,
}

/// Sparse linear combination; terms sorted by variable index, no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearCombination {
    terms: Vec<(u32, FieldElement)>,
}

impl LinearCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_terms(vec![(Variable::ONE, c)])
    }

    pub fn from_var(v: Variable) -> Self {
        Self::from_terms(vec![(v, FieldElement::one())])
    }

    /// Builds from arbitrary (variable, coefficient) pairs, merging
    /// duplicates and dropping zero coefficients.
    pub fn from_terms(terms: Vec<(Variable, FieldElement)>) -> Self {
        let mut raw: Vec<(u32, FieldElement)> =
            terms.into_iter().map(|(v, c)| (v.0, c)).collect();
        raw.sort_by_key(|(i, _)| *i);
        let mut merged: Vec<(u32, FieldElement)> = Vec::with_capacity(raw.len());
        for (i, c) in raw {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        LinearCombination { terms: merged }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Variable, FieldElement)> + '_ {
        self.terms.iter().map(|&(i, c)| (Variable(i), c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn max_index(&self) -> Option<u32> {
        self.terms.last().map(|(i, _)| *i)
    }

    /// <self, values>.
    pub fn evaluate(&self, values: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::zero();
        for (i, c) in &self.terms {
            acc += values[*i as usize] * *c;
        }
        acc
    }
}

impl std::ops::Add for LinearCombination {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut terms: Vec<(Variable, FieldElement)> =
            self.terms().chain(rhs.terms()).collect();
        Self::from_terms(std::mem::take(&mut terms))
    }
}

impl std::ops::Sub for LinearCombination {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let terms: Vec<(Variable, FieldElement)> = self
            .terms()
            .chain(rhs.terms().map(|(v, c)| (v, -c)))
            .collect();
        Self::from_terms(terms)
    }
}

impl From<Variable> for LinearCombination {
    fn from(v: Variable) -> Self {
        Self::from_var(v)
    }
}

/// One R1CS row.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub a: LinearCombination,
    pub b: LinearCombination,
    pub c: LinearCombination,
    /// Provenance label for diagnostics; not part of the system semantics.
    pub label: &'static str,
}

/// A finished (or in-progress) rank-1 constraint system.
#[derive(Clone, Debug, Default)]
pub struct ConstraintSystem {
    pub num_public: usize,
    pub num_private: usize,
    constraints: Vec<Constraint>,
    finalized: bool,
}

impl ConstraintSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_variables(&self) -> usize {
        1 + self.num_public + self.num_private
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Allocates a fresh variable. Public allocations must all precede the
    /// first private allocation so public inputs form a contiguous block.
    pub fn alloc(&mut self, visibility: Visibility) -> Result<Variable, ConstraintError> {
        if self.finalized {
            return Err(ConstraintError::Finalized);
        }
        match visibility {
            Visibility::Public => {
                if self.num_private > 0 {
                    return Err(ConstraintError::PublicAfterPrivate);
                }
                self.num_public += 1;
                Ok(Variable(self.num_public as u32))
            }
            Visibility::Private => {
                self.num_private += 1;
                Ok(Variable((self.num_public + self.num_private) as u32))
            }
        }
    }

    /// Appends the row <A,z> * <B,z> = <C,z>.
    pub fn enforce(
        &mut self,
        label: &'static str,
        a: LinearCombination,
        b: LinearCombination,
        c: LinearCombination,
    ) -> Result<(), ConstraintError> {
        if self.finalized {
            return Err(ConstraintError::Finalized);
        }
        let max = self.num_variables() as u32;
        for lc in [&a, &b, &c] {
            if let Some(i) = lc.max_index() {
                if i >= max {
                    return Err(ConstraintError::UnknownVariable(i));
                }
            }
        }
        self.constraints.push(Constraint { a, b, c, label });
        Ok(())
    }

    /// Freezes the system; further alloc/enforce calls error.
    pub fn finalize(&mut self) {
        self.finalized = true;
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    /// Ground-truth satisfaction check: every row holds under z.
    pub fn is_satisfied(&self, z: &Assignment) -> Result<bool, ConstraintError> {
        if z.values.len() != self.num_variables() {
            return Err(ConstraintError::LengthMismatch {
                expected: self.num_variables(),
                got: z.values.len(),
            });
        }
        if z.values[0] != FieldElement::one() {
            return Err(ConstraintError::BadConstantSlot);
        }
        Ok(self.constraints.iter().all(|row| {
            row.a.evaluate(&z.values) * row.b.evaluate(&z.values) == row.c.evaluate(&z.values)
        }))
    }

    /// SHA-256 over the canonical encoding; binds keys to the exact system.
    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update((self.num_public as u64).to_le_bytes());
        h.update((self.num_private as u64).to_le_bytes());
        h.update((self.constraints.len() as u64).to_le_bytes());
        for row in &self.constraints {
            for lc in [&row.a, &row.b, &row.c] {
                h.update((lc.terms.len() as u64).to_le_bytes());
                for (i, c) in &lc.terms {
                    h.update(i.to_le_bytes());
                    h.update(c.to_bytes());
                }
            }
        }
        h.finalize().into()
    }
}

/// A full variable assignment: constant one, public inputs, private witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<FieldElement>,
    num_public: usize,
}

impl Assignment {
    pub fn new(values: Vec<FieldElement>, num_public: usize) -> Result<Self, ConstraintError> {
        if values.is_empty() || values[0] != FieldElement::one() {
            return Err(ConstraintError::BadConstantSlot);
        }
        if values.len() < 1 + num_public {
            return Err(ConstraintError::LengthMismatch {
                expected: 1 + num_public,
                got: values.len(),
            });
        }
        Ok(Assignment { values, num_public })
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    /// The public segment, excluding the constant one.
    pub fn public_inputs(&self) -> &[FieldElement] {
        &self.values[1..=self.num_public]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Test helper: additive perturbation of one slot (slot 0 excluded).
    pub fn perturbed(&self, index: usize, delta: FieldElement) -> Self {
        let mut values = self.values.clone();
        values[index] += delta;
        Assignment {
            values,
            num_public: self.num_public,
        }
    }
}

enum Mode {
    /// Record constraints; no values exist.
    Setup,
    /// Compute values; check each constraint eagerly, store nothing.
    Witness,
}

/// Dual-mode circuit builder. Gadgets are written once against this type.
pub struct Synthesizer {
    mode: Mode,
    cs: ConstraintSystem,
    values: Vec<FieldElement>,
    rows_seen: usize,
}

impl Synthesizer {
    /// Setup mode: collect the constraint system.
    pub fn setup() -> Self {
        Synthesizer {
            mode: Mode::Setup,
            cs: ConstraintSystem::new(),
            values: vec![FieldElement::one()],
            rows_seen: 0,
        }
    }

    /// Witness mode: compute an assignment, failing at the first violation.
    pub fn witness() -> Self {
        Synthesizer {
            mode: Mode::Witness,
            cs: ConstraintSystem::new(),
            values: vec![FieldElement::one()],
            rows_seen: 0,
        }
    }

    pub fn is_witness_mode(&self) -> bool {
        matches!(self.mode, Mode::Witness)
    }

    /// Allocates a variable; `value` is invoked only in witness mode.
    pub fn alloc(
        &mut self,
        visibility: Visibility,
        value: impl FnOnce() -> FieldElement,
    ) -> Result<Variable, ConstraintError> {
        let var = self.cs.alloc(visibility)?;
        if self.is_witness_mode() {
            debug_assert_eq!(var.index(), self.values.len());
            self.values.push(value());
        }
        Ok(var)
    }

    pub fn alloc_public(
        &mut self,
        value: impl FnOnce() -> FieldElement,
    ) -> Result<Variable, ConstraintError> {
        self.alloc(Visibility::Public, value)
    }

    pub fn alloc_private(
        &mut self,
        value: impl FnOnce() -> FieldElement,
    ) -> Result<Variable, ConstraintError> {
        self.alloc(Visibility::Private, value)
    }

    /// Current value of a variable (witness mode only).
    pub fn value(&self, v: Variable) -> Option<FieldElement> {
        if self.is_witness_mode() {
            self.values.get(v.index()).copied()
        } else {
            None
        }
    }

    /// Current value of a linear combination (witness mode only).
    pub fn value_of(&self, lc: &LinearCombination) -> Option<FieldElement> {
        if self.is_witness_mode() {
            Some(lc.evaluate(&self.values))
        } else {
            None
        }
    }

    /// Records (setup) or checks (witness) the row <A,z>*<B,z>=<C,z>.
    pub fn enforce(
        &mut self,
        label: &'static str,
        a: LinearCombination,
        b: LinearCombination,
        c: LinearCombination,
    ) -> Result<(), ConstraintError> {
        let index = self.rows_seen;
        self.rows_seen += 1;
        match self.mode {
            Mode::Setup => self.cs.enforce(label, a, b, c),
            Mode::Witness => {
                let av = a.evaluate(&self.values);
                let bv = b.evaluate(&self.values);
                let cv = c.evaluate(&self.values);
                if av * bv != cv {
                    return Err(ConstraintError::Unsatisfied { label, index });
                }
                Ok(())
            }
        }
    }

    /// Finishes setup mode, returning the finalized system.
    pub fn finish_setup(mut self) -> ConstraintSystem {
        self.cs.finalize();
        self.cs
    }

    /// Finishes witness mode, returning the full assignment.
    pub fn finish_witness(self) -> Assignment {
        debug_assert!(self.is_witness_mode());
        Assignment {
            values: self.values,
            num_public: self.cs.num_public,
        }
    }
}

/// A circuit synthesizes identically in both modes; implementors hold their
/// input values as `Option`s that must be `Some` in witness mode.
pub trait Circuit {
    fn synthesize(&self, syn: &mut Synthesizer) -> Result<(), ConstraintError>;
}
