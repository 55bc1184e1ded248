//! Building a constraint system by hand with the gadget library. The same
//! synthesis code runs twice: once in setup mode to record the rows, once
//! in witness mode to evaluate and check them. Public inputs carry values
//! computed outside the circuit; gadgets then force the in-circuit
//! recomputation to agree.

use zkoffload::algebra::FieldElement;
use zkoffload::constraint::{
    gadget_equal, gadget_hash, gadget_indexed_lookup, gadget_range_check, mimc_hash_elements,
    ConstraintError, LinearCombination, Synthesizer,
};

/// "I know a secret index into this table whose entry is at most 49, and
/// the public digest commits to that entry."
fn synthesize(
    syn: &mut Synthesizer,
    table: &[FieldElement],
    secret_index: usize,
    digest: (FieldElement, FieldElement),
) -> Result<(), ConstraintError> {
    // Publics first: the digest the verifier will see.
    let out0 = syn.alloc_public(|| digest.0)?;
    let out1 = syn.alloc_public(|| digest.1)?;

    // One-hot selectors over the table; only the chosen slot carries a 1.
    let selectors: Vec<_> = (0..table.len())
        .map(|i| {
            syn.alloc_private(|| {
                if i == secret_index {
                    FieldElement::one()
                } else {
                    FieldElement::zero()
                }
            })
        })
        .collect::<Result<_, _>>()?;
    let entry = gadget_indexed_lookup(syn, table, &selectors)?;
    gadget_range_check(syn, entry, 49)?;
    let (d0, d1) = gadget_hash(syn, &[entry, entry])?;
    gadget_equal(
        syn,
        &LinearCombination::from_var(d0),
        &LinearCombination::from_var(out0),
    )?;
    gadget_equal(
        syn,
        &LinearCombination::from_var(d1),
        &LinearCombination::from_var(out1),
    )
}

fn main() {
    let table: Vec<FieldElement> = [12u64, 47, 300, 8]
        .iter()
        .map(|&x| FieldElement::from_u64(x))
        .collect();

    // Setup pass records the structure; closures are never invoked, so
    // placeholder witness data is fine.
    let zero = (FieldElement::zero(), FieldElement::zero());
    let mut setup = Synthesizer::setup();
    synthesize(&mut setup, &table, 0, zero).expect("setup never evaluates");
    let cs = setup.finish_setup();
    println!(
        "system recorded: {} variables, {} constraints",
        cs.num_variables(),
        cs.num_constraints()
    );

    // Witness passes: entry 47 passes the range check, entry 300 cannot.
    for (index, expect) in [(1usize, true), (2, false)] {
        let entry = table[index];
        let digest = mimc_hash_elements(&[entry, entry]).expect("nonempty input");
        let mut witness = Synthesizer::witness();
        let result = synthesize(&mut witness, &table, index, digest);
        match (result, expect) {
            (Ok(()), true) => {
                let assignment = witness.finish_witness();
                assert!(cs.is_satisfied(&assignment).unwrap());
                println!(
                    "index {index} (entry {}): satisfied, digest limb0 = {}",
                    entry.to_biguint(),
                    assignment.public_inputs()[0].to_biguint()
                );
            }
            (Err(err), false) => {
                println!("index {index} (entry {}): rejected, {err}", entry.to_biguint());
            }
            (ok, _) => panic!("unexpected outcome for index {index}: {ok:?}"),
        }
    }
}
