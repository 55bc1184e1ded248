//! A tour of the arithmetic the proof system stands on: scalar field
//! operations, curve points in both groups, and the bilinear pairing.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use zkoffload::algebra::{pairing, scalar_mul, Fr, G1Point, G2Point};

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(1);

    // Scalar field: every nonzero element has an inverse.
    let a = Fr::random(&mut rng);
    let b = Fr::random(&mut rng);
    let product = a * b;
    let recovered = product * b.inverse().expect("b is nonzero");
    assert_eq!(recovered, a);
    println!("field: (a*b)*b^-1 == a for random a, b");
    println!("  a = {}", a.to_biguint());

    // Group generators.
    let g1 = G1Point::generator();
    let g2 = G2Point::generator();
    let e = pairing(&g1, &g2);
    println!("pairing: e(G1, G2) computed, non-identity: {}", !e.is_identity());

    // Bilinearity is the property the verifier equation relies on:
    // moving scalars between the two inputs cannot change the output.
    let lhs = pairing(&scalar_mul(&g1, &a), &scalar_mul(&g2, &b));
    let rhs = e.pow(&(a * b));
    assert_eq!(lhs, rhs);
    println!("pairing: e(a*G1, b*G2) == e(G1, G2)^(a*b)");

    let swapped = pairing(&scalar_mul(&g1, &b), &scalar_mul(&g2, &a));
    assert_eq!(lhs, swapped);
    println!("pairing: scalars slide freely between the two arguments");

    // The pairing output lives in a group of order r, so exponents only
    // matter modulo r.
    assert_eq!(e.pow(&(-Fr::one())) * e, zkoffload::algebra::TargetElement::identity());
    println!("pairing: e^(r-1) * e == 1, the output has order dividing r");
}
