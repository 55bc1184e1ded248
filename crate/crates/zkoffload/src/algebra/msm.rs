//! Multi-scalar multiplication: Pippenger buckets for large batches (the
//! prover), a fixed-base window table for key generation, and the public
//! `multi_scalar_combine` used for the verifier's input linear combination.

use super::curve::{batch_normalize, scalar_mul, CurveSpec, G1Point, Jacobian, Point};
use super::fp::Fr;
use super::AlgebraError;

/// Extracts `c` bits of a little-endian limb scalar starting at `pos`.
#[inline]
fn get_bits(limbs: &[u64; 4], pos: usize, c: usize) -> usize {
    let limb = pos / 64;
    let off = pos % 64;
    if limb >= 4 {
        return 0;
    }
    let mut v = limbs[limb] >> off;
    if off + c > 64 && limb + 1 < 4 {
        v |= limbs[limb + 1] << (64 - off);
    }
    (v & ((1u64 << c) - 1)) as usize
}

/// Sum of [s_i]P_i over arbitrary points (Pippenger above a size cutoff).
pub(crate) fn msm<C: CurveSpec>(points: &[Point<C>], scalars: &[Fr]) -> Jacobian<C> {
    assert_eq!(points.len(), scalars.len(), "msm length mismatch");
    let n = points.len();
    if n == 0 {
        return Jacobian::identity();
    }
    if n < 32 {
        let mut acc = Jacobian::identity();
        for (p, s) in points.iter().zip(scalars) {
            acc.add_assign(&scalar_mul(p, s).to_jacobian());
        }
        return acc;
    }

    let c = ((usize::BITS - n.leading_zeros()) as usize).clamp(4, 14);
    let limbs: Vec<[u64; 4]> = scalars.iter().map(|s| s.to_canonical_limbs()).collect();
    let windows = (254 + c - 1) / c;

    let mut window_sums = Vec::with_capacity(windows);
    let mut buckets = vec![Jacobian::<C>::identity(); (1 << c) - 1];
    for w in 0..windows {
        for b in buckets.iter_mut() {
            *b = Jacobian::identity();
        }
        for (i, l) in limbs.iter().enumerate() {
            let idx = get_bits(l, w * c, c);
            if idx != 0 {
                buckets[idx - 1].add_assign_affine(&points[i]);
            }
        }
        // Suffix running sum turns bucket counts into weighted sums.
        let mut running = Jacobian::identity();
        let mut sum = Jacobian::identity();
        for b in buckets.iter().rev() {
            running.add_assign(b);
            sum.add_assign(&running);
        }
        window_sums.push(sum);
    }

    let mut acc = Jacobian::identity();
    for ws in window_sums.iter().rev() {
        for _ in 0..c {
            acc = acc.double();
        }
        acc.add_assign(ws);
    }
    acc
}

/// Precomputed window table over a fixed base point; turns each scalar
/// multiplication into ~32 mixed additions. Key generation computes tens of
/// thousands of multiples of the generators, all sharing these tables.
pub(crate) struct FixedBase<C: CurveSpec> {
    tables: Vec<Vec<Point<C>>>,
}

const FIXED_WINDOW: usize = 8;

impl<C: CurveSpec> FixedBase<C> {
    pub fn new(base: &Point<C>) -> Self {
        let num_windows = (254 + FIXED_WINDOW - 1) / FIXED_WINDOW;
        let mut tables = Vec::with_capacity(num_windows);
        let mut window_base = base.to_jacobian();
        for _ in 0..num_windows {
            let mut multiples = Vec::with_capacity((1 << FIXED_WINDOW) - 1);
            let mut acc = window_base;
            for _ in 0..(1 << FIXED_WINDOW) - 1 {
                multiples.push(acc);
                acc.add_assign(&window_base);
            }
            tables.push(batch_normalize(&multiples));
            window_base = acc;
        }
        FixedBase { tables }
    }

    pub fn mul(&self, k: &Fr) -> Jacobian<C> {
        let limbs = k.to_canonical_limbs();
        let mut acc = Jacobian::identity();
        for (w, table) in self.tables.iter().enumerate() {
            let idx = get_bits(&limbs, w * FIXED_WINDOW, FIXED_WINDOW);
            if idx != 0 {
                acc.add_assign_affine(&table[idx - 1]);
            }
        }
        acc
    }

    /// Batch of multiples, normalized back to affine with one inversion.
    pub fn mul_batch(&self, scalars: &[Fr]) -> Vec<Point<C>> {
        let jacs: Vec<_> = scalars.iter().map(|s| self.mul(s)).collect();
        batch_normalize(&jacs)
    }
}

/// Public-input linear combination Sigma [s_i]P_i.
pub fn multi_scalar_combine(points: &[G1Point], scalars: &[Fr]) -> Result<G1Point, AlgebraError> {
    if points.len() != scalars.len() {
        return Err(AlgebraError::LengthMismatch {
            points: points.len(),
            scalars: scalars.len(),
        });
    }
    Ok(msm(points, scalars).to_affine())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::curve::{G2Point, G1Spec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn empty_input_gives_identity() {
        assert_eq!(
            multi_scalar_combine(&[], &[]).unwrap(),
            G1Point::identity()
        );
    }

    #[test]
    fn single_pair_matches_scalar_mul() {
        let mut rng = ChaCha20Rng::seed_from_u64(40);
        let p = G1Point::random(&mut rng);
        let k = Fr::random(&mut rng);
        assert_eq!(
            multi_scalar_combine(&[p], &[k]).unwrap(),
            scalar_mul(&p, &k)
        );
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let p = G1Point::generator();
        assert!(matches!(
            multi_scalar_combine(&[p], &[]),
            Err(AlgebraError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn matches_naive_loop() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for n in [2usize, 3, 50] {
            let points: Vec<_> = (0..n).map(|_| G1Point::random(&mut rng)).collect();
            let scalars: Vec<_> = (0..n).map(|_| Fr::random(&mut rng)).collect();
            let mut expect = Jacobian::<G1Spec>::identity();
            for (p, s) in points.iter().zip(&scalars) {
                expect.add_assign(&scalar_mul(p, s).to_jacobian());
            }
            assert_eq!(
                multi_scalar_combine(&points, &scalars).unwrap(),
                expect.to_affine()
            );
        }
    }

    #[test]
    fn pippenger_handles_zero_and_duplicate_scalars() {
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let p = G1Point::random(&mut rng);
        let mut points = vec![p; 40];
        points.push(G1Point::identity());
        let mut scalars = vec![Fr::zero(); 41];
        scalars[7] = Fr::from_u64(5);
        scalars[13] = Fr::from_u64(5);
        scalars[40] = Fr::from_u64(123);
        assert_eq!(
            multi_scalar_combine(&points, &scalars).unwrap(),
            scalar_mul(&p, &Fr::from_u64(10))
        );
    }

    #[test]
    fn fixed_base_matches_scalar_mul() {
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        let table = FixedBase::new(&G1Point::generator());
        for _ in 0..10 {
            let k = Fr::random(&mut rng);
            assert_eq!(
                table.mul(&k).to_affine(),
                scalar_mul(&G1Point::generator(), &k)
            );
        }
        assert!(table.mul(&Fr::zero()).is_identity());
        let g2_table = FixedBase::new(&G2Point::generator());
        let k = Fr::random(&mut rng);
        assert_eq!(
            g2_table.mul(&k).to_affine(),
            scalar_mul(&G2Point::generator(), &k)
        );
    }
}
