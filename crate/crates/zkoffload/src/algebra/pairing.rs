//! Optimal ate pairing e: G1 x G2 -> target group.
//!
//! G2 points are untwisted into the curve over Fq12 and the Miller loop runs
//! in affine coordinates there. This trades speed for a small, auditable
//! implementation: every line evaluation is plain Fq12 arithmetic, and the
//! Frobenius endomorphism on untwisted points is coordinate-wise. The final
//! exponentiation is the easy part followed by a single big-integer power
//! for the hard part (p^4 - p^2 + 1)/r.

use super::curve::{G1Point, G2Point};
use super::ext::Fq12;
use super::fp::{Fq, Fr};
use super::Field;
use num_bigint::BigUint;
use once_cell::sync::Lazy;

/// The BN parameter x; the ate loop count is 6x + 2.
const BN_X: u64 = 4965661367192848881;

/// Element of the multiplicative target group (r-th roots of unity in Fq12).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TargetElement(pub(crate) Fq12);

impl TargetElement {
    pub fn identity() -> Self {
        TargetElement(Fq12::one())
    }

    pub fn is_identity(&self) -> bool {
        self.0 == Fq12::one()
    }

    /// Multiplicative power by a scalar (used to state bilinearity).
    pub fn pow(&self, k: &Fr) -> Self {
        TargetElement(self.0.pow(&k.to_canonical_limbs()))
    }
}

impl std::ops::Mul for TargetElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        TargetElement(self.0 * rhs.0)
    }
}

/// Affine point on E(Fq12): the untwisted image of G2.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Ep12 {
    x: Fq12,
    y: Fq12,
    infinity: bool,
}

impl Ep12 {
    fn identity() -> Self {
        Ep12 {
            x: Fq12::zero(),
            y: Fq12::zero(),
            infinity: true,
        }
    }

    fn neg(&self) -> Self {
        Ep12 {
            x: self.x,
            y: -self.y,
            infinity: self.infinity,
        }
    }

    /// Coordinate-wise p-power Frobenius; maps the untwisted G2 image to
    /// itself (it is the endomorphism pi of the ate pairing).
    fn frobenius(&self) -> Self {
        Ep12 {
            x: self.x.frobenius_map(1),
            y: self.y.frobenius_map(1),
            infinity: self.infinity,
        }
    }
}

/// (x', y') -> (x' w^2, y' w^3) embeds the twist into E(Fq12).
fn untwist(q: &G2Point) -> Ep12 {
    if q.is_identity() {
        return Ep12::identity();
    }
    let x = Fq12::from_fq2(q.x) * Fq12::w_squared();
    let y = Fq12::from_fq2(q.y) * Fq12::w_cubed();
    Ep12 {
        x,
        y,
        infinity: false,
    }
}

/// Chord-and-tangent step: returns (T + Q, line_{T,Q}(P)). A vertical chord
/// (T = -Q or either point at infinity) degenerates to x_P - x.
fn add_step(t: &Ep12, q: &Ep12, px: Fq12, py: Fq12) -> (Ep12, Fq12) {
    if t.infinity {
        return (*q, Fq12::one());
    }
    if q.infinity {
        return (*t, Fq12::one());
    }
    if t.x == q.x {
        if t.y == q.y {
            return double_step(t, px, py);
        }
        // Vertical line through T and -T.
        return (Ep12::identity(), px - t.x);
    }
    let lambda = (q.y - t.y) * (q.x - t.x).inverse().expect("distinct x");
    let x3 = lambda.square() - t.x - q.x;
    let y3 = lambda * (t.x - x3) - t.y;
    let line = py - t.y - lambda * (px - t.x);
    (
        Ep12 {
            x: x3,
            y: y3,
            infinity: false,
        },
        line,
    )
}

/// Tangent step: returns (2T, tangent_T(P)).
fn double_step(t: &Ep12, px: Fq12, py: Fq12) -> (Ep12, Fq12) {
    if t.infinity {
        return (*t, Fq12::one());
    }
    if t.y.is_zero() {
        // Order-2 point: vertical tangent (unreachable for odd-order inputs).
        return (Ep12::identity(), px - t.x);
    }
    let xx = t.x.square();
    let lambda = (xx + xx.double()) * t.y.double().inverse().expect("nonzero y");
    let x3 = lambda.square() - t.x.double();
    let y3 = lambda * (t.x - x3) - t.y;
    let line = py - t.y - lambda * (px - t.x);
    (
        Ep12 {
            x: x3,
            y: y3,
            infinity: false,
        },
        line,
    )
}

/// f_{6x+2, Q}(P) times the two Frobenius correction lines of the optimal
/// ate pairing for BN curves.
pub(crate) fn miller_loop(p: &G1Point, q: &G2Point) -> Fq12 {
    if p.is_identity() || q.is_identity() {
        return Fq12::one();
    }
    let px = Fq12::from_fq(p.x);
    let py = Fq12::from_fq(p.y);
    let q12 = untwist(q);

    let loop_count: u128 = 6 * (BN_X as u128) + 2;
    let top = 127 - loop_count.leading_zeros();

    let mut f = Fq12::one();
    let mut t = q12;
    for i in (0..top).rev() {
        let (t2, line) = double_step(&t, px, py);
        f = f.square() * line;
        t = t2;
        if (loop_count >> i) & 1 == 1 {
            let (t2, line) = add_step(&t, &q12, px, py);
            f = f * line;
            t = t2;
        }
    }

    // Correction terms with Q1 = pi(Q), Q2 = pi^2(Q).
    let q1 = q12.frobenius();
    let q2 = q1.frobenius();
    let (t2, line) = add_step(&t, &q1, px, py);
    f = f * line;
    let (_, line) = add_step(&t2, &q2.neg(), px, py);
    f * line
}

struct FinalExpConsts {
    /// (p^4 - p^2 + 1) / r, the hard-part exponent.
    hard_exp: Vec<u64>,
}

fn final_exp_consts() -> &'static FinalExpConsts {
    static CONSTS: Lazy<FinalExpConsts> = Lazy::new(|| {
        let p = BigUint::from_bytes_le(
            &Fq::MODULUS
                .iter()
                .flat_map(|l| l.to_le_bytes())
                .collect::<Vec<_>>(),
        );
        let r = BigUint::from_bytes_le(
            &Fr::MODULUS
                .iter()
                .flat_map(|l| l.to_le_bytes())
                .collect::<Vec<_>>(),
        );
        let p2 = &p * &p;
        let p4 = &p2 * &p2;
        let num = &p4 - &p2 + BigUint::from(1u32);
        assert!(
            (&num % &r) == BigUint::from(0u32),
            "BN invariant: r divides p^4 - p^2 + 1"
        );
        FinalExpConsts {
            hard_exp: (num / r).to_u64_digits(),
        }
    });
    &CONSTS
}

/// Raises the Miller value to (p^12 - 1)/r.
pub(crate) fn final_exponentiation(f: Fq12) -> Fq12 {
    // Easy part: f^(p^6 - 1) then ^(p^2 + 1). f is nonzero (product of
    // nonzero line values), so the inverse exists.
    let f1 = f.conjugate() * f.inverse().expect("miller value nonzero");
    let f2 = f1.frobenius_map(2) * f1;
    // Hard part: one big power; slow but transparently correct.
    f2.pow(&final_exp_consts().hard_exp)
}

/// The bilinear pairing e(P, Q). Identity inputs map to the target identity.
pub fn pairing(p: &G1Point, q: &G2Point) -> TargetElement {
    TargetElement(final_exponentiation(miller_loop(p, q)))
}

/// Product of pairings e(P1,Q1) * ... * e(Pn,Qn) sharing one final
/// exponentiation; the verifier's four-pair check uses this.
pub fn multi_pairing(pairs: &[(G1Point, G2Point)]) -> TargetElement {
    let mut f = Fq12::one();
    for (p, q) in pairs {
        f = f * miller_loop(p, q);
    }
    TargetElement(final_exponentiation(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::curve::scalar_mul;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn pairing_of_identity_is_identity() {
        let g1 = G1Point::generator();
        let g2 = G2Point::generator();
        assert_eq!(pairing(&G1Point::identity(), &g2), TargetElement::identity());
        assert_eq!(pairing(&g1, &G2Point::identity()), TargetElement::identity());
    }

    #[test]
    fn pairing_is_nondegenerate() {
        let e = pairing(&G1Point::generator(), &G2Point::generator());
        assert_ne!(e, TargetElement::identity());
        // Target elements have order dividing r.
        assert_eq!(e.pow(&Fr::zero()), TargetElement::identity());
        let r_minus_1 = -Fr::one();
        assert_eq!(e.pow(&r_minus_1) * e, TargetElement::identity());
    }

    #[test]
    fn pairing_is_bilinear() {
        let mut rng = ChaCha20Rng::seed_from_u64(30);
        let g1 = G1Point::generator();
        let g2 = G2Point::generator();
        let base = pairing(&g1, &g2);
        for i in 0..100 {
            let a = Fr::random(&mut rng);
            let b = Fr::random(&mut rng);
            let lhs = pairing(&scalar_mul(&g1, &a), &scalar_mul(&g2, &b));
            assert_eq!(lhs, base.pow(&(a * b)));
            // Symmetry of the scalar action, sampled more sparsely.
            if i % 10 == 0 {
                assert_eq!(
                    pairing(&scalar_mul(&g1, &a), &g2),
                    pairing(&g1, &scalar_mul(&g2, &a))
                );
            }
        }
    }

    #[test]
    fn multi_pairing_matches_product() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let pairs: Vec<_> = (0..3)
            .map(|_| (G1Point::random(&mut rng), G2Point::random(&mut rng)))
            .collect();
        let product = pairs
            .iter()
            .fold(TargetElement::identity(), |acc, (p, q)| acc * pairing(p, q));
        assert_eq!(multi_pairing(&pairs), product);
    }

    #[test]
    fn pairing_respects_negation() {
        let mut rng = ChaCha20Rng::seed_from_u64(32);
        let p = G1Point::random(&mut rng);
        let q = G2Point::random(&mut rng);
        let e = pairing(&p, &q);
        let e_neg = pairing(&(-p), &q);
        assert_eq!(e * e_neg, TargetElement::identity());
        assert_eq!(pairing(&p, &(-q)), e_neg);
    }
}
