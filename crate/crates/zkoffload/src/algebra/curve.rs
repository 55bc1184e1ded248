//! Short-Weierstrass groups G1 (over Fq) and G2 (over Fq2, the sextic twist).
//!
//! Public points are affine; internal arithmetic uses Jacobian coordinates
//! (a = 0 formulas). G1 has cofactor 1; G2 deserialization additionally
//! checks membership in the order-r subgroup.

use super::ext::Fq2;
use super::fp::{Fq, Fr};
use super::Field;
use std::fmt;
use std::marker::PhantomData;

/// Per-group curve parameters (y^2 = x^3 + b over the given base field).
pub trait CurveSpec: 'static + Copy + Clone + PartialEq + Eq + Send + Sync {
    type Base: Field + Send + Sync;
    const NAME: &'static str;
    /// Bytes per serialized base-field element.
    const BASE_BYTES: usize;
    fn b() -> Self::Base;
    fn generator_coords() -> (Self::Base, Self::Base);
    /// Requires a scalar-multiple subgroup check on deserialization.
    const CHECK_SUBGROUP: bool;
    fn base_to_bytes(x: &Self::Base, out: &mut Vec<u8>);
    fn base_from_bytes(bytes: &[u8]) -> Option<Self::Base>;
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct G1Spec;

impl CurveSpec for G1Spec {
    type Base = Fq;
    const NAME: &'static str = "G1";
    const BASE_BYTES: usize = 32;
    fn b() -> Fq {
        Fq::from_u64(3)
    }
    fn generator_coords() -> (Fq, Fq) {
        (Fq::from_u64(1), Fq::from_u64(2))
    }
    const CHECK_SUBGROUP: bool = false;
    fn base_to_bytes(x: &Fq, out: &mut Vec<u8>) {
        out.extend_from_slice(&x.to_bytes());
    }
    fn base_from_bytes(bytes: &[u8]) -> Option<Fq> {
        Fq::from_bytes(bytes.try_into().ok()?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct G2Spec;

/// Decimal coordinates of the conventional G2 generator (verified on-curve
/// and in-subgroup by unit tests).
const G2_GEN_X_C0: &str =
    "10857046999023057135944570762232829481370756359578518086990519993285655852781";
const G2_GEN_X_C1: &str =
    "11559732032986387107991004021392285783925812861821192530917403151452391805634";
const G2_GEN_Y_C0: &str =
    "8495653923123431417604973247489272438418190587263600148770280649306958101930";
const G2_GEN_Y_C1: &str =
    "4082367875863433681332203403145435568316851327593401208105741076214120093531";

impl CurveSpec for G2Spec {
    type Base = Fq2;
    const NAME: &'static str = "G2";
    const BASE_BYTES: usize = 64;
    fn b() -> Fq2 {
        // b' = 3 / xi on the D-twist.
        Fq2::from_fq(Fq::from_u64(3)) * Fq2::xi().inverse().expect("xi is invertible")
    }
    fn generator_coords() -> (Fq2, Fq2) {
        let parse = |s: &str| Fq::from_decimal(s).expect("generator constant");
        (
            Fq2::new(parse(G2_GEN_X_C0), parse(G2_GEN_X_C1)),
            Fq2::new(parse(G2_GEN_Y_C0), parse(G2_GEN_Y_C1)),
        )
    }
    const CHECK_SUBGROUP: bool = true;
    fn base_to_bytes(x: &Fq2, out: &mut Vec<u8>) {
        out.extend_from_slice(&x.c0.to_bytes());
        out.extend_from_slice(&x.c1.to_bytes());
    }
    fn base_from_bytes(bytes: &[u8]) -> Option<Fq2> {
        if bytes.len() != 64 {
            return None;
        }
        Some(Fq2::new(
            Fq::from_bytes(bytes[..32].try_into().ok()?)?,
            Fq::from_bytes(bytes[32..].try_into().ok()?)?,
        ))
    }
}

/// Affine curve point; the public representation of group elements.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Point<C: CurveSpec> {
    pub x: C::Base,
    pub y: C::Base,
    pub infinity: bool,
    _marker: PhantomData<C>,
}

pub type G1Point = Point<G1Spec>;
pub type G2Point = Point<G2Spec>;

impl<C: CurveSpec> fmt::Debug for Point<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.infinity {
            write!(f, "{}(infinity)", C::NAME)
        } else {
            write!(f, "{}({:?}, {:?})", C::NAME, self.x, self.y)
        }
    }
}

impl<C: CurveSpec> Point<C> {
    pub fn identity() -> Self {
        Point {
            x: C::Base::zero(),
            y: C::Base::zero(),
            infinity: true,
            _marker: PhantomData,
        }
    }

    pub fn generator() -> Self {
        let (x, y) = C::generator_coords();
        Point {
            x,
            y,
            infinity: false,
            _marker: PhantomData,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.infinity
    }

    /// Constructs from coordinates, validating the curve equation.
    pub fn from_xy(x: C::Base, y: C::Base) -> Option<Self> {
        let p = Point {
            x,
            y,
            infinity: false,
            _marker: PhantomData,
        };
        if p.is_on_curve() {
            Some(p)
        } else {
            None
        }
    }

    pub fn is_on_curve(&self) -> bool {
        if self.infinity {
            return true;
        }
        self.y.square() == self.x.square() * self.x + C::b()
    }

    pub fn to_jacobian(&self) -> Jacobian<C> {
        if self.infinity {
            Jacobian::identity()
        } else {
            Jacobian {
                x: self.x,
                y: self.y,
                z: C::Base::one(),
                _marker: PhantomData,
            }
        }
    }

    pub fn double(&self) -> Self {
        self.to_jacobian().double().to_affine()
    }

    /// Uncompressed encoding: x || y coordinates, little-endian; the identity
    /// is the all-zero string (never a curve point since b != 0).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 * C::BASE_BYTES);
        if self.infinity {
            out.resize(2 * C::BASE_BYTES, 0);
            return out;
        }
        C::base_to_bytes(&self.x, &mut out);
        C::base_to_bytes(&self.y, &mut out);
        out
    }

    /// Parses and validates an uncompressed encoding (curve equation plus,
    /// for G2, the r-order subgroup check).
    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        if bytes.len() != 2 * C::BASE_BYTES {
            return None;
        }
        if bytes.iter().all(|&b| b == 0) {
            return Some(Self::identity());
        }
        let x = C::base_from_bytes(&bytes[..C::BASE_BYTES])?;
        let y = C::base_from_bytes(&bytes[C::BASE_BYTES..])?;
        let p = Self::from_xy(x, y)?;
        if C::CHECK_SUBGROUP && !scalar_mul_limbs(&p, &Fr::MODULUS).is_identity() {
            return None;
        }
        Some(p)
    }

    pub fn random<R: rand::RngCore + ?Sized>(rng: &mut R) -> Self {
        scalar_mul(&Self::generator(), &Fr::random(rng))
    }
}

impl<C: CurveSpec> std::ops::Add for Point<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut j = self.to_jacobian();
        j.add_assign_affine(&rhs);
        j.to_affine()
    }
}

impl<C: CurveSpec> std::ops::Neg for Point<C> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.infinity {
            self
        } else {
            Point {
                x: self.x,
                y: -self.y,
                infinity: false,
                _marker: PhantomData,
            }
        }
    }
}

impl<C: CurveSpec> std::ops::Sub for Point<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

/// [k]P by double-and-add over the canonical bits of k.
pub fn scalar_mul<C: CurveSpec>(p: &Point<C>, k: &Fr) -> Point<C> {
    scalar_mul_limbs(p, &k.to_canonical_limbs())
}

fn scalar_mul_limbs<C: CurveSpec>(p: &Point<C>, limbs: &[u64; 4]) -> Point<C> {
    let mut acc = Jacobian::<C>::identity();
    let mut started = false;
    for limb in limbs.iter().rev() {
        for i in (0..64).rev() {
            if started {
                acc = acc.double();
            }
            if (limb >> i) & 1 == 1 {
                acc.add_assign_affine(p);
                started = true;
            }
        }
    }
    acc.to_affine()
}

/// Jacobian projective point: (x/z^2, y/z^3); z = 0 encodes the identity.
#[derive(Clone, Copy)]
pub struct Jacobian<C: CurveSpec> {
    pub x: C::Base,
    pub y: C::Base,
    pub z: C::Base,
    _marker: PhantomData<C>,
}

impl<C: CurveSpec> Jacobian<C> {
    pub fn identity() -> Self {
        Jacobian {
            x: C::Base::one(),
            y: C::Base::one(),
            z: C::Base::zero(),
            _marker: PhantomData,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.z.is_zero()
    }

    /// dbl-2009-l (a = 0).
    pub fn double(&self) -> Self {
        if self.is_identity() {
            return *self;
        }
        let a = self.x.square();
        let b = self.y.square();
        let c = b.square();
        let mut d = (self.x + b).square() - a - c;
        d = d.double();
        let e = a.double() + a;
        let f = e.square();
        let x3 = f - d.double();
        let c8 = c.double().double().double();
        let y3 = e * (d - x3) - c8;
        let z3 = (self.y * self.z).double();
        Jacobian {
            x: x3,
            y: y3,
            z: z3,
            _marker: PhantomData,
        }
    }

    /// Mixed addition with an affine point (madd-2007-bl with branches for
    /// the degenerate cases).
    pub fn add_assign_affine(&mut self, rhs: &Point<C>) {
        if rhs.infinity {
            return;
        }
        if self.is_identity() {
            *self = rhs.to_jacobian();
            return;
        }
        let z1z1 = self.z.square();
        let u2 = rhs.x * z1z1;
        let s2 = rhs.y * z1z1 * self.z;
        if u2 == self.x {
            if s2 == self.y {
                *self = self.double();
            } else {
                *self = Self::identity();
            }
            return;
        }
        let h = u2 - self.x;
        let hh = h.square();
        let i = hh.double().double();
        let j = h * i;
        let r = (s2 - self.y).double();
        let v = self.x * i;
        let x3 = r.square() - j - v.double();
        let y3 = r * (v - x3) - (self.y * j).double();
        let z3 = (self.z + h).square() - z1z1 - hh;
        *self = Jacobian {
            x: x3,
            y: y3,
            z: z3,
            _marker: PhantomData,
        };
    }

    /// Full Jacobian addition (add-2007-bl with degenerate-case branches).
    pub fn add_assign(&mut self, rhs: &Jacobian<C>) {
        if rhs.is_identity() {
            return;
        }
        if self.is_identity() {
            *self = *rhs;
            return;
        }
        let z1z1 = self.z.square();
        let z2z2 = rhs.z.square();
        let u1 = self.x * z2z2;
        let u2 = rhs.x * z1z1;
        let s1 = self.y * z2z2 * rhs.z;
        let s2 = rhs.y * z1z1 * self.z;
        if u1 == u2 {
            if s1 == s2 {
                *self = self.double();
            } else {
                *self = Self::identity();
            }
            return;
        }
        let h = u2 - u1;
        let i = h.double().square();
        let j = h * i;
        let r = (s2 - s1).double();
        let v = u1 * i;
        let x3 = r.square() - j - v.double();
        let y3 = r * (v - x3) - (s1 * j).double();
        let z3 = ((self.z + rhs.z).square() - z1z1 - z2z2) * h;
        *self = Jacobian {
            x: x3,
            y: y3,
            z: z3,
            _marker: PhantomData,
        };
    }

    pub fn to_affine(&self) -> Point<C> {
        if self.is_identity() {
            return Point::identity();
        }
        let zinv = self.z.inverse().expect("nonzero z");
        let zinv2 = zinv.square();
        Point {
            x: self.x * zinv2,
            y: self.y * zinv2 * zinv,
            infinity: false,
            _marker: PhantomData,
        }
    }
}

/// Normalizes a batch of Jacobian points with a single field inversion
/// (Montgomery's trick); the workhorse of key generation.
pub fn batch_normalize<C: CurveSpec>(points: &[Jacobian<C>]) -> Vec<Point<C>> {
    let mut prefix = Vec::with_capacity(points.len());
    let mut acc = C::Base::one();
    for p in points {
        prefix.push(acc);
        if !p.is_identity() {
            acc = acc * p.z;
        }
    }
    let mut inv = acc.inverse().expect("product of nonzero values");
    let mut out = vec![Point::identity(); points.len()];
    for (i, p) in points.iter().enumerate().rev() {
        if p.is_identity() {
            continue;
        }
        let zinv = inv * prefix[i];
        inv = inv * p.z;
        let zinv2 = zinv.square();
        out[i] = Point {
            x: p.x * zinv2,
            y: p.y * zinv2 * zinv,
            infinity: false,
            _marker: PhantomData,
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn generators_on_curve() {
        assert!(G1Point::generator().is_on_curve());
        assert!(G2Point::generator().is_on_curve());
    }

    #[test]
    fn generators_have_order_r() {
        assert!(scalar_mul_limbs(&G1Point::generator(), &Fr::MODULUS).is_identity());
        assert!(scalar_mul_limbs(&G2Point::generator(), &Fr::MODULUS).is_identity());
    }

    #[test]
    fn group_law_identities() {
        let g = G1Point::generator();
        assert_eq!(g + G1Point::identity(), g);
        assert_eq!(g + (-g), G1Point::identity());
        assert_eq!(scalar_mul(&g, &Fr::zero()), G1Point::identity());
        assert_eq!(scalar_mul(&g, &Fr::one()), g);
        assert_eq!(scalar_mul(&g, &Fr::from_u64(2)), g + g);
        assert_eq!(g + g, g.double());
    }

    #[test]
    fn group_law_random_points() {
        let mut rng = ChaCha20Rng::seed_from_u64(20);
        for _ in 0..10 {
            let p = G1Point::random(&mut rng);
            let q = G1Point::random(&mut rng);
            let r = G1Point::random(&mut rng);
            assert!(p.is_on_curve() && q.is_on_curve());
            assert_eq!(p + q, q + p);
            assert_eq!((p + q) + r, p + (q + r));
        }
        for _ in 0..5 {
            let p = G2Point::random(&mut rng);
            let q = G2Point::random(&mut rng);
            assert!(p.is_on_curve());
            assert_eq!(p + q, q + p);
        }
    }

    #[test]
    fn scalar_mul_is_additive() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let g = G1Point::generator();
        for _ in 0..10 {
            let k1 = Fr::random(&mut rng);
            let k2 = Fr::random(&mut rng);
            assert_eq!(
                scalar_mul(&g, &(k1 + k2)),
                scalar_mul(&g, &k1) + scalar_mul(&g, &k2)
            );
        }
        let h = G2Point::generator();
        let k1 = Fr::random(&mut rng);
        let k2 = Fr::random(&mut rng);
        assert_eq!(
            scalar_mul(&h, &(k1 + k2)),
            scalar_mul(&h, &k1) + scalar_mul(&h, &k2)
        );
    }

    #[test]
    fn serialization_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        let p = G1Point::random(&mut rng);
        assert_eq!(G1Point::from_bytes(&p.to_bytes()), Some(p));
        let q = G2Point::random(&mut rng);
        assert_eq!(G2Point::from_bytes(&q.to_bytes()), Some(q));
        assert_eq!(
            G1Point::from_bytes(&G1Point::identity().to_bytes()),
            Some(G1Point::identity())
        );
        // Off-curve coordinates are rejected.
        let mut bad = p.to_bytes();
        bad[0] ^= 1;
        if let Some(parsed) = G1Point::from_bytes(&bad) {
            assert!(parsed.is_on_curve());
        }
    }

    #[test]
    fn batch_normalize_matches_single() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let mut jacs = Vec::new();
        let mut expect = Vec::new();
        for i in 0..20 {
            if i % 7 == 3 {
                jacs.push(Jacobian::<G1Spec>::identity());
                expect.push(G1Point::identity());
            } else {
                let p = G1Point::random(&mut rng);
                let mut j = p.to_jacobian().double();
                j.add_assign_affine(&p);
                jacs.push(j);
                expect.push(j.to_affine());
            }
        }
        assert_eq!(batch_normalize(&jacs), expect);
    }
}
