//! The proof system end to end on a toy statement: trusted setup, proof
//! generation, verification, serialization, and what happens when either
//! the proof or the public inputs are wrong.

use zkoffload::algebra::FieldElement;
use zkoffload::constraint::{Circuit, ConstraintError, LinearCombination, Synthesizer};
use zkoffload::snark::{
    compute_witness, prove, setup, synthesize_system, verify, Proof, PROOF_BYTES,
};

/// "I know factors x, y of the public n with x + y = s."
struct Factors {
    n: u64,
    s: u64,
    x: u64,
    y: u64,
}

impl Circuit for Factors {
    fn synthesize(&self, syn: &mut Synthesizer) -> Result<(), ConstraintError> {
        let n = syn.alloc_public(|| FieldElement::from_u64(self.n))?;
        let s = syn.alloc_public(|| FieldElement::from_u64(self.s))?;
        let x = syn.alloc_private(|| FieldElement::from_u64(self.x))?;
        let y = syn.alloc_private(|| FieldElement::from_u64(self.y))?;
        let lc = LinearCombination::from_var;
        syn.enforce("product", lc(x), lc(y), lc(n))?;
        syn.enforce(
            "sum",
            lc(x) + lc(y),
            LinearCombination::constant(FieldElement::one()),
            lc(s),
        )
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let statement = Factors {
        n: 91,
        s: 20,
        x: 7,
        y: 13,
    };

    let cs = synthesize_system(&statement)?;
    println!(
        "circuit: {} constraints, {} variables, 2 public inputs",
        cs.num_constraints(),
        cs.num_variables()
    );

    let (pk, vk) = setup(&cs, b"toy-ceremony-seed")?;
    let assignment = compute_witness(&statement)?;
    let proof = prove(&pk, &cs, &assignment, b"blinding")?;

    let publics: Vec<FieldElement> = [91u64, 20].iter().map(|&v| FieldElement::from_u64(v)).collect();
    assert!(verify(&vk, &publics, &proof)?);
    println!("honest proof verifies");

    // The proof is a fixed-size blob whichever statement it closes.
    let bytes = proof.to_bytes();
    assert_eq!(bytes.len(), PROOF_BYTES);
    let restored = Proof::from_bytes(&bytes)?;
    assert!(verify(&vk, &publics, &restored)?);
    println!("binary roundtrip: {PROOF_BYTES} bytes, still verifies");

    let json = proof.to_json();
    let from_json = Proof::from_json(&json)?;
    assert!(verify(&vk, &publics, &from_json)?);
    println!("json roundtrip: {} chars, still verifies", json.len());

    // Wrong public inputs: same proof, different claim, rejected.
    let wrong: Vec<FieldElement> = [91u64, 21].iter().map(|&v| FieldElement::from_u64(v)).collect();
    assert!(!verify(&vk, &wrong, &proof)?);
    println!("claiming x + y = 21 with the same proof fails");

    // A flipped byte either breaks point decoding or breaks the pairing
    // equation; both count as rejection.
    let mut tampered = bytes.clone();
    tampered[5] ^= 1;
    let rejected = match Proof::from_bytes(&tampered) {
        Ok(p) => !verify(&vk, &publics, &p)?,
        Err(_) => true,
    };
    assert!(rejected);
    println!("tampered proof bytes rejected");

    // A witness that breaks a constraint is caught before proving starts.
    let lie = Factors {
        n: 91,
        s: 20,
        x: 6,
        y: 14,
    };
    let err = compute_witness(&lie).unwrap_err();
    println!("lying witness refused: {err}");
    Ok(())
}
