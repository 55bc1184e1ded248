//! Extension tower over the base field: Fq2 = Fq[u]/(u^2+1),
//! Fq6 = Fq2[v]/(v^3 - xi) with xi = 9 + u, Fq12 = Fq6[w]/(w^2 - v).
//!
//! The tower layout is an internal decision; only the pairing contract is
//! normative. Frobenius coefficients are derived at first use from xi rather
//! than transcribed.

use super::fp::Fq;
use super::Field;
use num_bigint::BigUint;
use once_cell::sync::Lazy;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fq2 {
    pub c0: Fq,
    pub c1: Fq,
}

impl Fq2 {
    pub const fn new(c0: Fq, c1: Fq) -> Self {
        Fq2 { c0, c1 }
    }

    pub fn from_fq(c0: Fq) -> Self {
        Fq2 { c0, c1: Fq::zero() }
    }

    /// The sextic-twist constant xi = 9 + u.
    pub fn xi() -> Self {
        Fq2 {
            c0: Fq::from_u64(9),
            c1: Fq::from_u64(1),
        }
    }

    /// Conjugate c0 - c1*u; equals the p-power Frobenius since p = 3 mod 4.
    pub fn conjugate(&self) -> Self {
        Fq2 {
            c0: self.c0,
            c1: -self.c1,
        }
    }

    pub fn mul_by_fq(&self, s: Fq) -> Self {
        Fq2 {
            c0: self.c0 * s,
            c1: self.c1 * s,
        }
    }

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
}

impl std::ops::Add for Fq2 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Fq2 {
            c0: self.c0 + rhs.c0,
            c1: self.c1 + rhs.c1,
        }
    }
}

impl std::ops::Sub for Fq2 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Fq2 {
            c0: self.c0 - rhs.c0,
            c1: self.c1 - rhs.c1,
        }
    }
}

impl std::ops::Neg for Fq2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Fq2 {
            c0: -self.c0,
            c1: -self.c1,
        }
    }
}

impl std::ops::Mul for Fq2 {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        // Karatsuba over u^2 = -1.
        let v0 = self.c0 * rhs.c0;
        let v1 = self.c1 * rhs.c1;
        let t = (self.c0 + self.c1) * (rhs.c0 + rhs.c1);
        Fq2 {
            c0: v0 - v1,
            c1: t - v0 - v1,
        }
    }
}

impl Field for Fq2 {
    fn zero() -> Self {
        Fq2 {
            c0: Fq::zero(),
            c1: Fq::zero(),
        }
    }

    fn one() -> Self {
        Fq2 {
            c0: Fq::one(),
            c1: Fq::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    #[inline]
    fn square(&self) -> Self {
        // (c0 + c1 u)^2 = (c0+c1)(c0-c1) + 2 c0 c1 u.
        let t = self.c0 * self.c1;
        Fq2 {
            c0: (self.c0 + self.c1) * (self.c0 - self.c1),
            c1: t + t,
        }
    }

    fn double(&self) -> Self {
        *self + *self
    }

    fn inverse(&self) -> Option<Self> {
        // 1/(c0 + c1 u) = (c0 - c1 u) / (c0^2 + c1^2).
        let norm = self.c0.square() + self.c1.square();
        let inv = norm.inverse()?;
        Some(Fq2 {
            c0: self.c0 * inv,
            c1: -(self.c1 * inv),
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fq6 {
    pub c0: Fq2,
    pub c1: Fq2,
    pub c2: Fq2,
}

/// Multiplication by v inside Fq6 wraps the top coefficient through xi.
#[inline]
fn mul_by_xi(a: Fq2) -> Fq2 {
    a * Fq2::xi()
}

impl Fq6 {
    pub fn new(c0: Fq2, c1: Fq2, c2: Fq2) -> Self {
        Fq6 { c0, c1, c2 }
    }

    /// Multiplies by the tower generator v (v^3 = xi).
    pub fn mul_by_v(&self) -> Self {
        Fq6 {
            c0: mul_by_xi(self.c2),
            c1: self.c0,
            c2: self.c1,
        }
    }

    pub fn mul_by_fq2(&self, s: Fq2) -> Self {
        Fq6 {
            c0: self.c0 * s,
            c1: self.c1 * s,
            c2: self.c2 * s,
        }
    }

    /// Coefficient-wise p-power Frobenius combined with the v-twist constants.
    fn frobenius(&self) -> Self {
        Fq6 {
            c0: self.c0.conjugate(),
            c1: self.c1.conjugate() * frob_consts().gamma1,
            c2: self.c2.conjugate() * frob_consts().gamma2,
        }
    }
}

impl std::ops::Add for Fq6 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Fq6 {
            c0: self.c0 + rhs.c0,
            c1: self.c1 + rhs.c1,
            c2: self.c2 + rhs.c2,
        }
    }
}

impl std::ops::Sub for Fq6 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Fq6 {
            c0: self.c0 - rhs.c0,
            c1: self.c1 - rhs.c1,
            c2: self.c2 - rhs.c2,
        }
    }
}

impl std::ops::Neg for Fq6 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Fq6 {
            c0: -self.c0,
            c1: -self.c1,
            c2: -self.c2,
        }
    }
}

impl std::ops::Mul for Fq6 {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        // Toom/Karatsuba-lite: interpolation offers little at this size, so
        // use the schoolbook form reduced by v^3 = xi.
        let a = &self;
        let b = &rhs;
        let v0 = a.c0 * b.c0;
        let v1 = a.c1 * b.c1;
        let v2 = a.c2 * b.c2;

        let c0 = v0 + mul_by_xi((a.c1 + a.c2) * (b.c1 + b.c2) - v1 - v2);
        let c1 = (a.c0 + a.c1) * (b.c0 + b.c1) - v0 - v1 + mul_by_xi(v2);
        let c2 = (a.c0 + a.c2) * (b.c0 + b.c2) - v0 - v2 + v1;
        Fq6 { c0, c1, c2 }
    }
}

impl Field for Fq6 {
    fn zero() -> Self {
        Fq6 {
            c0: Fq2::zero(),
            c1: Fq2::zero(),
            c2: Fq2::zero(),
        }
    }

    fn one() -> Self {
        Fq6 {
            c0: Fq2::one(),
            c1: Fq2::zero(),
            c2: Fq2::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }

    fn square(&self) -> Self {
        *self * *self
    }

    fn double(&self) -> Self {
        *self + *self
    }

    fn inverse(&self) -> Option<Self> {
        // Standard cubic-extension inversion via the adjugate.
        let a = self;
        let t0 = a.c0.square() - mul_by_xi(a.c1 * a.c2);
        let t1 = mul_by_xi(a.c2.square()) - a.c0 * a.c1;
        let t2 = a.c1.square() - a.c0 * a.c2;
        let norm = a.c0 * t0 + mul_by_xi(a.c2 * t1 + a.c1 * t2);
        let inv = norm.inverse()?;
        Some(Fq6 {
            c0: t0 * inv,
            c1: t1 * inv,
            c2: t2 * inv,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fq12 {
    pub c0: Fq6,
    pub c1: Fq6,
}

impl Fq12 {
    pub fn new(c0: Fq6, c1: Fq6) -> Self {
        Fq12 { c0, c1 }
    }

    pub fn from_fq(x: Fq) -> Self {
        Fq12 {
            c0: Fq6 {
                c0: Fq2::from_fq(x),
                c1: Fq2::zero(),
                c2: Fq2::zero(),
            },
            c1: Fq6::zero(),
        }
    }

    /// w^2, used to untwist G2 x-coordinates.
    pub fn w_squared() -> Self {
        // w^2 = v.
        Fq12 {
            c0: Fq6 {
                c0: Fq2::zero(),
                c1: Fq2::one(),
                c2: Fq2::zero(),
            },
            c1: Fq6::zero(),
        }
    }

    /// w^3, used to untwist G2 y-coordinates.
    pub fn w_cubed() -> Self {
        // w^3 = v * w.
        Fq12 {
            c0: Fq6::zero(),
            c1: Fq6 {
                c0: Fq2::zero(),
                c1: Fq2::one(),
                c2: Fq2::zero(),
            },
        }
    }

    /// Embeds an Fq2 element (c0 slot of the c0 tower arm).
    pub fn from_fq2(x: Fq2) -> Self {
        Fq12 {
            c0: Fq6 {
                c0: x,
                c1: Fq2::zero(),
                c2: Fq2::zero(),
            },
            c1: Fq6::zero(),
        }
    }

    /// Conjugate over Fq6; equals the p^6-power Frobenius.
    pub fn conjugate(&self) -> Self {
        Fq12 {
            c0: self.c0,
            c1: -self.c1,
        }
    }

    /// Applies the p-power Frobenius endomorphism `power` times.
    pub fn frobenius_map(&self, power: usize) -> Self {
        let mut out = *self;
        for _ in 0..power {
            out = Fq12 {
                c0: out.c0.frobenius(),
                c1: out.c1.frobenius().mul_by_fq2(frob_consts().gamma_w),
            };
        }
        out
    }

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
}

impl std::ops::Add for Fq12 {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Fq12 {
            c0: self.c0 + rhs.c0,
            c1: self.c1 + rhs.c1,
        }
    }
}

impl std::ops::Sub for Fq12 {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Fq12 {
            c0: self.c0 - rhs.c0,
            c1: self.c1 - rhs.c1,
        }
    }
}

impl std::ops::Neg for Fq12 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Fq12 {
            c0: -self.c0,
            c1: -self.c1,
        }
    }
}

impl std::ops::Mul for Fq12 {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        // Karatsuba over w^2 = v.
        let v0 = self.c0 * rhs.c0;
        let v1 = self.c1 * rhs.c1;
        let t = (self.c0 + self.c1) * (rhs.c0 + rhs.c1);
        Fq12 {
            c0: v0 + v1.mul_by_v(),
            c1: t - v0 - v1,
        }
    }
}

impl Field for Fq12 {
    fn zero() -> Self {
        Fq12 {
            c0: Fq6::zero(),
            c1: Fq6::zero(),
        }
    }

    fn one() -> Self {
        Fq12 {
            c0: Fq6::one(),
            c1: Fq6::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    fn square(&self) -> Self {
        *self * *self
    }

    fn double(&self) -> Self {
        *self + *self
    }

    fn inverse(&self) -> Option<Self> {
        // 1/(c0 + c1 w) = (c0 - c1 w) / (c0^2 - v c1^2).
        let norm = self.c0.square() - self.c1.square().mul_by_v();
        let inv = norm.inverse()?;
        Some(Fq12 {
            c0: self.c0 * inv,
            c1: -(self.c1 * inv),
        })
    }
}

struct FrobConsts {
    /// xi^((p-1)/3): multiplier for the v coefficient.
    gamma1: Fq2,
    /// xi^(2(p-1)/3): multiplier for the v^2 coefficient.
    gamma2: Fq2,
    /// xi^((p-1)/6): multiplier for the w arm.
    gamma_w: Fq2,
}

fn frob_consts() -> &'static FrobConsts {
    static CONSTS: Lazy<FrobConsts> = Lazy::new(|| {
        let p = BigUint::from_bytes_le(
            &Fq::MODULUS
                .iter()
                .flat_map(|l| l.to_le_bytes())
                .collect::<Vec<_>>(),
        );
        let one = BigUint::from(1u32);
        let exp6 = (&p - &one) / BigUint::from(6u32);
        let exp6_limbs = exp6.to_u64_digits();
        let gamma_w = Fq2::xi().pow(&exp6_limbs);
        let gamma1 = gamma_w.square();
        let gamma2 = gamma1.square();
        FrobConsts {
            gamma1,
            gamma2,
            gamma_w,
        }
    });
    &CONSTS
}
