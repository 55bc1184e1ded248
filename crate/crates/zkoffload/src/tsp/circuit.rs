//! The verification circuit: a padded tour satisfies it exactly when the
//! plain checker accepts the unpadded tour against the task's city list.
//!
//! Public inputs, in order: claimed sum, two path-digest limbs, two
//! city-digest limbs, and the constant 1 flag. Private inputs: the padded
//! path, the map number, and the padded city list. The distance matrix is
//! baked into the circuit, so each (map, tier) pair has its own key pair.

use super::{pad_tour, TaskSpec, Tier, TspError, TspMap, Tour};
use crate::algebra::FieldElement;
use crate::constraint::{
    gadget_equal, gadget_hash, gadget_path_sum, gadget_permutation_check, gadget_range_check,
    mimc_hash_elements, Circuit, ConstraintError, ConstraintSystem, LinearCombination,
    Synthesizer, Variable,
};
use serde::{Deserialize, Serialize};

type Lc = LinearCombination;

/// Two-limb MiMC sponge digest, the format the circuit compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashDigest {
    pub limb0: FieldElement,
    pub limb1: FieldElement,
}

impl HashDigest {
    pub fn limbs(&self) -> [FieldElement; 2] {
        [self.limb0, self.limb1]
    }
}

/// Sponge digest of a field-element sequence; the out-of-circuit twin of
/// the in-circuit hash gadget.
pub fn hash_elements(xs: &[FieldElement]) -> Result<HashDigest, TspError> {
    let (limb0, limb1) = mimc_hash_elements(xs).ok_or(TspError::EmptyHashInput)?;
    Ok(HashDigest { limb0, limb1 })
}

/// Digest of a padded city or path vector.
pub fn hash_padded(values: &[u64]) -> Result<HashDigest, TspError> {
    hash_elements(&fields_from(values))
}

fn fields_from(values: &[u64]) -> Vec<FieldElement> {
    values.iter().map(|&v| FieldElement::from_u64(v)).collect()
}

/// Everything the prover feeds the circuit. Fields are open so tests and
/// fault injection can desynchronize them; `build` fills them honestly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TspWitness {
    pub padded_path: Vec<u64>,
    pub claimed_sum: u64,
    pub mapnumber: u64,
    pub padded_cities: Vec<u64>,
    pub hash_of_path: HashDigest,
    pub hash_of_cities: HashDigest,
}

impl TspWitness {
    /// Honest witness for a tour answering `task`. Checks structure (tier
    /// fit, instance well-formed against the map) but not tour validity;
    /// judging the tour is the circuit's job.
    pub fn build(map: &TspMap, task: &TaskSpec, tour: &Tour) -> Result<Self, TspError> {
        task.validate_against(map)?;
        let padded_path = pad_tour(tour, task.tier)?;
        let mut padded_cities = task.instance.clone();
        padded_cities.resize(task.tier.slots(), 0);
        let hash_of_path = hash_padded(&padded_path)?;
        let hash_of_cities = hash_padded(&padded_cities)?;
        Ok(TspWitness {
            padded_path,
            claimed_sum: tour.sum,
            mapnumber: map.mapnumber,
            padded_cities,
            hash_of_path,
            hash_of_cities,
        })
    }

    /// The statement this witness claims, in circuit order:
    /// [sum, path digest, city digest, 1].
    pub fn public_inputs(&self) -> Vec<FieldElement> {
        vec![
            FieldElement::from_u64(self.claimed_sum),
            self.hash_of_path.limb0,
            self.hash_of_path.limb1,
            self.hash_of_cities.limb0,
            self.hash_of_cities.limb1,
            FieldElement::one(),
        ]
    }
}

/// Circuit for one (map, tier) pair; with a witness attached it also
/// computes assignments.
pub struct TspCircuit<'a> {
    map: &'a TspMap,
    tier: Tier,
    witness: Option<TspWitness>,
}

impl<'a> TspCircuit<'a> {
    pub fn setup(map: &'a TspMap, tier: Tier) -> Self {
        TspCircuit {
            map,
            tier,
            witness: None,
        }
    }

    pub fn with_witness(map: &'a TspMap, tier: Tier, witness: TspWitness) -> Self {
        TspCircuit {
            map,
            tier,
            witness: Some(witness),
        }
    }
}

impl Circuit for TspCircuit<'_> {
    fn synthesize(&self, syn: &mut Synthesizer) -> Result<(), ConstraintError> {
        let t = self.tier.slots();
        let n = self.map.n;
        if let Some(w) = &self.witness {
            if w.padded_path.len() != t || w.padded_cities.len() != t {
                return Err(ConstraintError::BadGadgetInput(
                    "tsp_circuit",
                    format!("witness vectors must have exactly {t} slots"),
                ));
            }
        }
        let w = self.witness.as_ref();

        let sum = syn.alloc_public(|| FieldElement::from_u64(w.unwrap().claimed_sum))?;
        let hp0 = syn.alloc_public(|| w.unwrap().hash_of_path.limb0)?;
        let hp1 = syn.alloc_public(|| w.unwrap().hash_of_path.limb1)?;
        let hc0 = syn.alloc_public(|| w.unwrap().hash_of_cities.limb0)?;
        let hc1 = syn.alloc_public(|| w.unwrap().hash_of_cities.limb1)?;
        let ret = syn.alloc_public(FieldElement::one)?;

        let path: Vec<Variable> = (0..t)
            .map(|i| {
                syn.alloc_private(move || FieldElement::from_u64(w.unwrap().padded_path[i]))
            })
            .collect::<Result<_, _>>()?;
        let mapnumber = syn.alloc_private(|| FieldElement::from_u64(w.unwrap().mapnumber))?;
        let cities: Vec<Variable> = (0..t)
            .map(|i| {
                syn.alloc_private(move || FieldElement::from_u64(w.unwrap().padded_cities[i]))
            })
            .collect::<Result<_, _>>()?;

        // The map is a circuit constant; the claimed number must match it.
        gadget_equal(
            syn,
            &Lc::from_var(mapnumber),
            &Lc::constant(FieldElement::from_u64(self.map.mapnumber)),
        )?;

        // Every slot names a city or the 0 sentinel.
        for &p in &path {
            gadget_range_check(syn, p, n as u64)?;
        }

        // The path reorders the task's padded city list, nothing else.
        gadget_permutation_check(syn, &path, &cities)?;

        // Edge lookups over the baked-in matrix must total the public sum.
        let table = distance_table(self.map);
        gadget_path_sum(syn, &path, &table, sum)?;

        gadget_equal(syn, &Lc::from_var(ret), &Lc::constant(FieldElement::one()))?;

        // Digests bind the private vectors to the posted task and the
        // published answer.
        let (p0, p1) = gadget_hash(syn, &path)?;
        gadget_equal(syn, &p0.into(), &hp0.into())?;
        gadget_equal(syn, &p1.into(), &hp1.into())?;
        let (c0, c1) = gadget_hash(syn, &cities)?;
        gadget_equal(syn, &c0.into(), &hc0.into())?;
        gadget_equal(syn, &c1.into(), &hc1.into())?;
        Ok(())
    }
}

/// (n+1) x (n+1) lookup table: row and column 0 belong to the sentinel and
/// stay zero, entry (i, j) for real cities is the map distance.
fn distance_table(map: &TspMap) -> Vec<Vec<FieldElement>> {
    let n = map.n;
    let mut table = vec![vec![FieldElement::zero(); n + 1]; n + 1];
    for i in 1..=n as u64 {
        for j in 1..=n as u64 {
            table[i as usize][j as usize] = FieldElement::from_u64(map.d(i, j));
        }
    }
    table
}

/// Constraint system for proving tours on `map` padded to `tier` slots.
pub fn build_tsp_circuit(map: &TspMap, tier: u32) -> Result<ConstraintSystem, TspError> {
    let tier = Tier::new(tier)?;
    map.validate()?;
    // Sums are added without reduction awareness, so the largest possible
    // tour must stay below the field modulus.
    let max_sum = num_bigint::BigUint::from(tier.slots() as u64)
        * num_bigint::BigUint::from(map.max_distance());
    let modulus = (FieldElement::zero() - FieldElement::one()).to_biguint() + 1u32;
    assert!(max_sum < modulus, "tour sums could wrap the field");

    let circuit = TspCircuit::setup(map, tier);
    let mut syn = Synthesizer::setup();
    circuit.synthesize(&mut syn)?;
    Ok(syn.finish_setup())
}
