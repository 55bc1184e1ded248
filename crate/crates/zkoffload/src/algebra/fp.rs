//! Base and scalar prime fields of the BN254 curve.
//!
//! Elements are stored in Montgomery form as four little-endian u64 limbs and
//! kept canonical (reduced mod the modulus) at all times. Arithmetic is NOT
//! constant time; see the module-level note in [`crate::algebra`].

use num_bigint::BigUint;
use std::fmt;

/// a + b + carry, returning the low word and the new carry.
#[inline(always)]
const fn adc(a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = (a as u128) + (b as u128) + (carry as u128);
    (t as u64, (t >> 64) as u64)
}

/// a - b - borrow, with the borrow propagated in the top bit of the second word.
#[inline(always)]
const fn sbb(a: u64, b: u64, borrow: u64) -> (u64, u64) {
    let t = (a as u128).wrapping_sub((b as u128) + ((borrow >> 63) as u128));
    (t as u64, (t >> 64) as u64)
}

/// a + b*c + carry, returning the low word and the high word.
#[inline(always)]
const fn mac(a: u64, b: u64, c: u64, carry: u64) -> (u64, u64) {
    let t = (a as u128) + (b as u128) * (c as u128) + (carry as u128);
    (t as u64, (t >> 64) as u64)
}

/// Stamps out a 256-bit prime field in Montgomery representation.
///
/// `$modulus` must be odd and below 2^254 (both BN254 fields are), which keeps
/// every intermediate of the reduction inside four limbs.
macro_rules! mont_field {
    ($name:ident, $repr_doc:expr, $modulus:expr, $r:expr, $r2:expr, $inv:expr) => {
        #[doc = $repr_doc]
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        pub struct $name([u64; 4]);

        impl $name {
            /// Field modulus, little-endian limbs.
            pub const MODULUS: [u64; 4] = $modulus;
            /// 2^256 mod MODULUS (Montgomery form of 1).
            const R: [u64; 4] = $r;
            /// 2^512 mod MODULUS (conversion factor into Montgomery form).
            const R2: [u64; 4] = $r2;
            /// -MODULUS^-1 mod 2^64.
            const INV: u64 = $inv;

            pub const fn zero() -> Self {
                $name([0, 0, 0, 0])
            }

            pub const fn one() -> Self {
                $name(Self::R)
            }

            pub fn is_zero(&self) -> bool {
                self.0 == [0, 0, 0, 0]
            }

            /// Montgomery reduction of a 512-bit product. Input limbs are
            /// little-endian; output is canonical.
            #[inline]
            #[allow(clippy::too_many_arguments)]
            fn montgomery_reduce(
                t0: u64,
                t1: u64,
                t2: u64,
                t3: u64,
                t4: u64,
                t5: u64,
                t6: u64,
                t7: u64,
            ) -> Self {
                let m = Self::MODULUS;

                let k = t0.wrapping_mul(Self::INV);
                let (_, carry) = mac(t0, k, m[0], 0);
                let (t1, carry) = mac(t1, k, m[1], carry);
                let (t2, carry) = mac(t2, k, m[2], carry);
                let (t3, carry) = mac(t3, k, m[3], carry);
                let (t4, carry2) = adc(t4, 0, carry);

                let k = t1.wrapping_mul(Self::INV);
                let (_, carry) = mac(t1, k, m[0], 0);
                let (t2, carry) = mac(t2, k, m[1], carry);
                let (t3, carry) = mac(t3, k, m[2], carry);
                let (t4, carry) = mac(t4, k, m[3], carry);
                let (t5, carry2) = adc(t5, carry2, carry);

                let k = t2.wrapping_mul(Self::INV);
                let (_, carry) = mac(t2, k, m[0], 0);
                let (t3, carry) = mac(t3, k, m[1], carry);
                let (t4, carry) = mac(t4, k, m[2], carry);
                let (t5, carry) = mac(t5, k, m[3], carry);
                let (t6, carry2) = adc(t6, carry2, carry);

                let k = t3.wrapping_mul(Self::INV);
                let (_, carry) = mac(t3, k, m[0], 0);
                let (t4, carry) = mac(t4, k, m[1], carry);
                let (t5, carry) = mac(t5, k, m[2], carry);
                let (t6, carry) = mac(t6, k, m[3], carry);
                let (t7, _) = adc(t7, carry2, carry);

                // The result is < 2*MODULUS, so one conditional subtraction
                // restores the canonical range.
                Self::sub_modulus(&[t4, t5, t6, t7])
            }

            /// Subtracts the modulus once if the value is >= modulus.
            #[inline]
            fn sub_modulus(v: &[u64; 4]) -> Self {
                let m = Self::MODULUS;
                let (r0, borrow) = sbb(v[0], m[0], 0);
                let (r1, borrow) = sbb(v[1], m[1], borrow);
                let (r2, borrow) = sbb(v[2], m[2], borrow);
                let (r3, borrow) = sbb(v[3], m[3], borrow);
                if borrow == 0 {
                    $name([r0, r1, r2, r3])
                } else {
                    $name(*v)
                }
            }

            #[inline]
            fn mul_inner(&self, rhs: &Self) -> Self {
                let a = &self.0;
                let b = &rhs.0;

                let (t0, carry) = mac(0, a[0], b[0], 0);
                let (t1, carry) = mac(0, a[0], b[1], carry);
                let (t2, carry) = mac(0, a[0], b[2], carry);
                let (t3, t4) = mac(0, a[0], b[3], carry);

                let (t1, carry) = mac(t1, a[1], b[0], 0);
                let (t2, carry) = mac(t2, a[1], b[1], carry);
                let (t3, carry) = mac(t3, a[1], b[2], carry);
                let (t4, t5) = mac(t4, a[1], b[3], carry);

                let (t2, carry) = mac(t2, a[2], b[0], 0);
                let (t3, carry) = mac(t3, a[2], b[1], carry);
                let (t4, carry) = mac(t4, a[2], b[2], carry);
                let (t5, t6) = mac(t5, a[2], b[3], carry);

                let (t3, carry) = mac(t3, a[3], b[0], 0);
                let (t4, carry) = mac(t4, a[3], b[1], carry);
                let (t5, carry) = mac(t5, a[3], b[2], carry);
                let (t6, t7) = mac(t6, a[3], b[3], carry);

                Self::montgomery_reduce(t0, t1, t2, t3, t4, t5, t6, t7)
            }

            #[inline]
            pub fn square(&self) -> Self {
                self.mul_inner(self)
            }

            #[inline]
            pub fn double(&self) -> Self {
                *self + *self
            }

            /// Raises self to an arbitrary little-endian limb exponent.
            pub fn pow(&self, exp: &[u64]) -> Self {
                let mut res = Self::one();
                for limb in exp.iter().rev() {
                    for i in (0..64).rev() {
                        res = res.square();
                        if (limb >> i) & 1 == 1 {
                            res = res * *self;
                        }
                    }
                }
                res
            }

            /// Multiplicative inverse via Fermat's little theorem.
            /// Returns `None` for zero: inversion of zero is an error.
            pub fn inverse(&self) -> Option<Self> {
                if self.is_zero() {
                    return None;
                }
                let m = Self::MODULUS;
                let (e0, borrow) = sbb(m[0], 2, 0);
                let (e1, borrow) = sbb(m[1], 0, borrow);
                let (e2, borrow) = sbb(m[2], 0, borrow);
                let (e3, _) = sbb(m[3], 0, borrow);
                Some(self.pow(&[e0, e1, e2, e3]))
            }

            /// Lifts a small integer into the field.
            pub fn from_u64(v: u64) -> Self {
                $name([v, 0, 0, 0]) * $name(Self::R2)
            }

            /// Interprets canonical little-endian limbs (must be < MODULUS).
            pub fn from_canonical_limbs(limbs: [u64; 4]) -> Option<Self> {
                if !limbs_lt(&limbs, &Self::MODULUS) {
                    return None;
                }
                Some($name(limbs) * $name(Self::R2))
            }

            /// Canonical little-endian limbs of the represented residue.
            pub fn to_canonical_limbs(&self) -> [u64; 4] {
                Self::montgomery_reduce(self.0[0], self.0[1], self.0[2], self.0[3], 0, 0, 0, 0).0
            }

            /// Canonical 32-byte little-endian encoding.
            pub fn to_bytes(&self) -> [u8; 32] {
                let limbs = self.to_canonical_limbs();
                let mut out = [0u8; 32];
                for (i, l) in limbs.iter().enumerate() {
                    out[i * 8..(i + 1) * 8].copy_from_slice(&l.to_le_bytes());
                }
                out
            }

            /// Parses a canonical 32-byte little-endian encoding.
            /// Returns `None` if the value is not reduced.
            pub fn from_bytes(bytes: &[u8; 32]) -> Option<Self> {
                let mut limbs = [0u64; 4];
                for (i, l) in limbs.iter_mut().enumerate() {
                    *l = u64::from_le_bytes(bytes[i * 8..(i + 1) * 8].try_into().unwrap());
                }
                Self::from_canonical_limbs(limbs)
            }

            /// Uniform random field element by rejection sampling.
            pub fn random<R: rand::RngCore + ?Sized>(rng: &mut R) -> Self {
                loop {
                    let mut limbs = [rng.next_u64(), rng.next_u64(), rng.next_u64(), rng.next_u64()];
                    // Both moduli are below 2^254.
                    limbs[3] &= (1 << 62) - 1;
                    if limbs_lt(&limbs, &Self::MODULUS) {
                        return $name(limbs) * $name(Self::R2);
                    }
                }
            }

            pub fn to_biguint(&self) -> BigUint {
                let limbs = self.to_canonical_limbs();
                let mut bytes = Vec::with_capacity(32);
                for l in limbs {
                    bytes.extend_from_slice(&l.to_le_bytes());
                }
                BigUint::from_bytes_le(&bytes)
            }

            /// Reduces an arbitrary non-negative integer into the field.
            pub fn from_biguint(v: &BigUint) -> Self {
                let modulus = BigUint::from_bytes_le(&{
                    let mut bytes = Vec::with_capacity(32);
                    for l in Self::MODULUS {
                        bytes.extend_from_slice(&l.to_le_bytes());
                    }
                    bytes
                });
                let reduced = v % modulus;
                let mut bytes = reduced.to_bytes_le();
                bytes.resize(32, 0);
                let mut limbs = [0u64; 4];
                for (i, l) in limbs.iter_mut().enumerate() {
                    *l = u64::from_le_bytes(bytes[i * 8..(i + 1) * 8].try_into().unwrap());
                }
                $name(limbs) * $name(Self::R2)
            }

            /// Parses a base-10 string, which must be a reduced residue.
            pub fn from_decimal(s: &str) -> Option<Self> {
                let v = s.parse::<BigUint>().ok()?;
                let mut bytes = v.to_bytes_le();
                if bytes.len() > 32 {
                    return None;
                }
                bytes.resize(32, 0);
                Self::from_bytes(&bytes.try_into().unwrap())
            }
        }

        impl std::ops::Add for $name {
            type Output = Self;
            #[inline]
            fn add(self, rhs: Self) -> Self {
                let (d0, carry) = adc(self.0[0], rhs.0[0], 0);
                let (d1, carry) = adc(self.0[1], rhs.0[1], carry);
                let (d2, carry) = adc(self.0[2], rhs.0[2], carry);
                let (d3, _) = adc(self.0[3], rhs.0[3], carry);
                Self::sub_modulus(&[d0, d1, d2, d3])
            }
        }

        impl std::ops::Sub for $name {
            type Output = Self;
            #[inline]
            fn sub(self, rhs: Self) -> Self {
                let (d0, borrow) = sbb(self.0[0], rhs.0[0], 0);
                let (d1, borrow) = sbb(self.0[1], rhs.0[1], borrow);
                let (d2, borrow) = sbb(self.0[2], rhs.0[2], borrow);
                let (d3, borrow) = sbb(self.0[3], rhs.0[3], borrow);
                if borrow == 0 {
                    $name([d0, d1, d2, d3])
                } else {
                    let m = Self::MODULUS;
                    let (d0, carry) = adc(d0, m[0], 0);
                    let (d1, carry) = adc(d1, m[1], carry);
                    let (d2, carry) = adc(d2, m[2], carry);
                    let (d3, _) = adc(d3, m[3], carry);
                    $name([d0, d1, d2, d3])
                }
            }
        }

        impl std::ops::Mul for $name {
            type Output = Self;
            #[inline]
            fn mul(self, rhs: Self) -> Self {
                self.mul_inner(&rhs)
            }
        }

        impl std::ops::Neg for $name {
            type Output = Self;
            #[inline]
            fn neg(self) -> Self {
                if self.is_zero() {
                    self
                } else {
                    let m = Self::MODULUS;
                    let (d0, borrow) = sbb(m[0], self.0[0], 0);
                    let (d1, borrow) = sbb(m[1], self.0[1], borrow);
                    let (d2, borrow) = sbb(m[2], self.0[2], borrow);
                    let (d3, _) = sbb(m[3], self.0[3], borrow);
                    $name([d0, d1, d2, d3])
                }
            }
        }

        impl std::ops::AddAssign for $name {
            #[inline]
            fn add_assign(&mut self, rhs: Self) {
                *self = *self + rhs;
            }
        }

        impl std::ops::SubAssign for $name {
            #[inline]
            fn sub_assign(&mut self, rhs: Self) {
                *self = *self - rhs;
            }
        }

        impl std::ops::MulAssign for $name {
            #[inline]
            fn mul_assign(&mut self, rhs: Self) {
                *self = *self * rhs;
            }
        }

        impl std::iter::Sum for $name {
            fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
                iter.fold(Self::zero(), |acc, x| acc + x)
            }
        }

        impl Default for $name {
            fn default() -> Self {
                Self::zero()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!(stringify!($name), "({})"), self.to_biguint())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.to_biguint())
            }
        }

        impl serde::Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_biguint().to_string())
            }
        }

        impl<'de> serde::Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                Self::from_decimal(&s)
                    .ok_or_else(|| serde::de::Error::custom("not a reduced field element"))
            }
        }
    };
}

/// Little-endian limb comparison: a < b.
fn limbs_lt(a: &[u64; 4], b: &[u64; 4]) -> bool {
    for i in (0..4).rev() {
        if a[i] < b[i] {
            return true;
        }
        if a[i] > b[i] {
            return false;
        }
    }
    false
}

mont_field!(
    Fq,
    "Element of the BN254 base field (coordinates of curve points).",
    [
        0x3c208c16d87cfd47,
        0x97816a916871ca8d,
        0xb85045b68181585d,
        0x30644e72e131a029
    ],
    [
        0xd35d438dc58f0d9d,
        0x0a78eb28f5c70b3d,
        0x666ea36f7879462c,
        0x0e0a77c19a07df2f
    ],
    [
        0xf32cfc5b538afa89,
        0xb5e71911d44501fb,
        0x47ab1eff0a417ff6,
        0x06d89f71cab8351f
    ],
    0x87d20782e4866389
);

mont_field!(
    Fr,
    "Element of the BN254 scalar field: the field the constraint system, \
     hash, and all task data live in.",
    [
        0x43e1f593f0000001,
        0x2833e84879b97091,
        0xb85045b68181585d,
        0x30644e72e131a029
    ],
    [
        0xac96341c4ffffffb,
        0x36fc76959f60cd29,
        0x666ea36f7879462e,
        0x0e0a77c19a07df2f
    ],
    [
        0x1bb8e645ae216da7,
        0x53fe3ab1e35c59e3,
        0x8c49833d53bb8085,
        0x0216d0b17f4e44a5
    ],
    0xc2e1f593efffffff
);

impl Fr {
    /// Largest s with 2^s | r - 1; the radix-2 FFT domain ceiling is 2^28.
    pub const TWO_ADICITY: u32 = 28;

    /// Generator of the order-2^28 subgroup, derived at first use from the
    /// smallest quadratic non-residue (no transcribed constant to get wrong).
    pub fn two_adic_root_of_unity() -> Fr {
        static ROOT: once_cell::sync::Lazy<Fr> = once_cell::sync::Lazy::new(|| {
            // (r - 1) / 2 as limbs; r - 1 has 28 trailing zero bits so the
            // shifted exponents below are exact.
            let m = Fr::MODULUS;
            let (e0, borrow) = sbb(m[0], 1, 0);
            let (e1, borrow) = sbb(m[1], 0, borrow);
            let (e2, borrow) = sbb(m[2], 0, borrow);
            let (e3, _) = sbb(m[3], 0, borrow);
            let half = shr_limbs([e0, e1, e2, e3], 1);
            let odd_part = shr_limbs([e0, e1, e2, e3], Fr::TWO_ADICITY);

            let mut g = 2u64;
            loop {
                let cand = Fr::from_u64(g);
                // g is a non-residue iff g^((r-1)/2) = -1; such g has full
                // 2-adic order, so g^((r-1)/2^28) has exact order 2^28.
                if cand.pow(&half) == -Fr::one() {
                    return cand.pow(&odd_part);
                }
                g += 1;
            }
        });
        *ROOT
    }
}

/// Logical right shift of little-endian limbs by `k` bits (k < 64).
fn shr_limbs(mut v: [u64; 4], k: u32) -> [u64; 4] {
    debug_assert!(k < 64);
    if k == 0 {
        return v;
    }
    for i in 0..4 {
        let hi = if i + 1 < 4 { v[i + 1] << (64 - k) } else { 0 };
        v[i] = (v[i] >> k) | hi;
    }
    v
}
