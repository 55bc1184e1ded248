//! Prime fields, two elliptic-curve groups, and a bilinear pairing: the
//! mathematical substrate for the proof system.
//!
//! The configured curve is BN254 (a Barreto-Naehrig curve with publicly
//! documented parameters; the same curve class the original toolchain
//! targets). `FieldElement` is its scalar field: the field every task value,
//! constraint, and hash digest lives in.
//!
//! # Security note
//!
//! Arithmetic here is **not constant time** and makes no attempt to resist
//! side channels. This library demonstrates protocol correctness; it is not
//! production cryptography and must not be used to protect real secrets.

mod curve;
mod ext;
mod fp;
mod msm;
mod pairing;

pub use curve::{batch_normalize, scalar_mul, CurveSpec, G1Point, G2Point, Jacobian, Point};
pub use ext::{Fq12, Fq2, Fq6};
pub use fp::{Fq, Fr};
pub use msm::multi_scalar_combine;
pub use pairing::{multi_pairing, pairing, TargetElement};

pub(crate) use msm::{msm, FixedBase};

/// The field exposed to every layer above the curve internals.
pub type FieldElement = Fr;

/// Minimal field interface shared by the base field and its extensions.
pub trait Field:
    Copy
    + Clone
    + PartialEq
    + Eq
    + std::fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn square(&self) -> Self;
    fn double(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
}

impl Field for Fq {
    fn zero() -> Self {
        Fq::zero()
    }
    fn one() -> Self {
        Fq::one()
    }
    fn is_zero(&self) -> bool {
        Fq::is_zero(self)
    }
    fn square(&self) -> Self {
        Fq::square(self)
    }
    fn double(&self) -> Self {
        Fq::double(self)
    }
    fn inverse(&self) -> Option<Self> {
        Fq::inverse(self)
    }
}

impl Field for Fr {
    fn zero() -> Self {
        Fr::zero()
    }
    fn one() -> Self {
        Fr::one()
    }
    fn is_zero(&self) -> bool {
        Fr::is_zero(self)
    }
    fn square(&self) -> Self {
        Fr::square(self)
    }
    fn double(&self) -> Self {
        Fr::double(self)
    }
    fn inverse(&self) -> Option<Self> {
        Fr::inverse(self)
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("length mismatch: {points} points vs {scalars} scalars")]
    LengthMismatch { points: usize, scalars: usize },
}
