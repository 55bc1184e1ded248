//! Circuit-friendly algebraic hash: a MiMC-style cubing permutation in a
//! sponge, absorbing one field element per step and squeezing two limbs.
//!
//! The same functions run outside the circuit (here) and inside it
//! ([`super::gadget_hash`]); tests cross-check them input by input. Round
//! constants are derived from SHA-256 over a fixed public seed string.
//!
//! Over this scalar field x -> x^3 is not a permutation (3 divides r - 1);
//! the cube is kept for its two-constraints-per-round cost, and nothing in
//! this artifact leans on the hash beyond binding submitted values.

use crate::algebra::FieldElement;
use num_bigint::BigUint;
use once_cell::sync::Lazy;
use sha2::{Digest, Sha256};

/// Rounds of the cubing permutation.
pub const MIMC_ROUNDS: usize = 91;

const CONSTANT_SEED: &[u8] = b"zkoffload/mimc-round-constants/v1";

pub(crate) fn round_constants() -> &'static [FieldElement; MIMC_ROUNDS] {
    static CONSTANTS: Lazy<[FieldElement; MIMC_ROUNDS]> = Lazy::new(|| {
        let mut out = [FieldElement::zero(); MIMC_ROUNDS];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut h = Sha256::new();
            h.update(CONSTANT_SEED);
            h.update((i as u32).to_le_bytes());
            let digest = h.finalize();
            *slot = FieldElement::from_biguint(&BigUint::from_bytes_le(&digest));
        }
        out
    });
    &CONSTANTS
}

/// The keyed permutation: x <- (x + key + c_i)^3, `MIMC_ROUNDS` times.
pub fn mimc_permute(key: FieldElement, x: FieldElement) -> FieldElement {
    let mut x = x;
    for c in round_constants() {
        let t = x + key + *c;
        x = t.square() * t;
    }
    x
}

/// Sponge over the permutation. Returns `None` for an empty input: hashing
/// nothing is a caller bug, not a digest.
///
/// state = len(xs); state <- permute(state, x) + x per element;
/// digest = (permute(state, 1), permute(state, 2)).
pub fn mimc_hash_elements(xs: &[FieldElement]) -> Option<(FieldElement, FieldElement)> {
    if xs.is_empty() {
        return None;
    }
    let mut state = FieldElement::from_u64(xs.len() as u64);
    for x in xs {
        state = mimc_permute(state, *x) + *x;
    }
    Some((
        mimc_permute(state, FieldElement::one()),
        mimc_permute(state, FieldElement::from_u64(2)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn constants_are_stable_and_distinct() {
        let c = round_constants();
        assert_eq!(c.len(), MIMC_ROUNDS);
        for i in 0..MIMC_ROUNDS {
            for j in (i + 1)..MIMC_ROUNDS {
                assert_ne!(c[i], c[j]);
            }
        }
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(mimc_hash_elements(&[]).is_none());
    }

    #[test]
    fn single_element_has_a_digest() {
        let d = mimc_hash_elements(&[FieldElement::from_u64(42)]).unwrap();
        assert_ne!(d.0, d.1);
    }

    #[test]
    fn digest_depends_on_order_and_content() {
        let a = FieldElement::from_u64(1);
        let b = FieldElement::from_u64(2);
        let c = FieldElement::from_u64(3);
        let d1 = mimc_hash_elements(&[a, b, c]).unwrap();
        let d2 = mimc_hash_elements(&[a, c, b]).unwrap();
        let d3 = mimc_hash_elements(&[a, b]).unwrap();
        assert_ne!(d1, d2);
        assert_ne!(d1, d3);
        // Length is domain-separated: [x] vs [x, 0] differ.
        let d4 = mimc_hash_elements(&[a]).unwrap();
        let d5 = mimc_hash_elements(&[a, FieldElement::zero()]).unwrap();
        assert_ne!(d4, d5);
    }

    #[test]
    fn digest_is_deterministic() {
        let mut rng = ChaCha20Rng::seed_from_u64(50);
        let xs: Vec<_> = (0..10).map(|_| FieldElement::random(&mut rng)).collect();
        assert_eq!(mimc_hash_elements(&xs), mimc_hash_elements(&xs));
    }
}
