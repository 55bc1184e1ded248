//! Gadget library: reusable constraint patterns composed into the task
//! verification circuit. Every gadget runs in both synthesizer modes, so the
//! recorded structure and the computed witness come from the same code.

use super::mimc::{round_constants, MIMC_ROUNDS};
use super::{ConstraintError, LinearCombination, Synthesizer, Variable};
use crate::algebra::FieldElement;

type Lc = LinearCombination;

/// x is 0 or 1: x * (x - 1) = 0.
pub fn gadget_boolean(syn: &mut Synthesizer, x: Variable) -> Result<(), ConstraintError> {
    syn.enforce(
        "boolean",
        x.into(),
        Lc::from_var(x) - Lc::constant(FieldElement::one()),
        Lc::zero(),
    )
}

/// x = y as linear combinations: (x - y) * 1 = 0.
pub fn gadget_equal(syn: &mut Synthesizer, x: &Lc, y: &Lc) -> Result<(), ConstraintError> {
    syn.enforce(
        "equal",
        x.clone() - y.clone(),
        Lc::constant(FieldElement::one()),
        Lc::zero(),
    )
}

/// Constrains `selectors` to a one-hot choice over a table of constants and
/// returns a fresh variable equal to the selected entry.
///
/// Enforces: each selector boolean, selectors sum to one, and
/// out = Sigma selector_i * table_i.
pub fn gadget_indexed_lookup(
    syn: &mut Synthesizer,
    table: &[FieldElement],
    selectors: &[Variable],
) -> Result<Variable, ConstraintError> {
    if table.len() != selectors.len() {
        return Err(ConstraintError::BadGadgetInput(
            "indexed_lookup",
            format!("table has {} entries, {} selectors", table.len(), selectors.len()),
        ));
    }
    for &s in selectors {
        gadget_boolean(syn, s)?;
    }
    let sum = Lc::from_terms(
        selectors
            .iter()
            .map(|&s| (s, FieldElement::one()))
            .collect(),
    );
    syn.enforce(
        "lookup selector sum",
        sum,
        Lc::constant(FieldElement::one()),
        Lc::constant(FieldElement::one()),
    )?;
    let weighted = Lc::from_terms(
        selectors
            .iter()
            .zip(table)
            .map(|(&s, &t)| (s, t))
            .collect(),
    );
    let weighted_val = syn.value_of(&weighted);
    let out = syn.alloc_private(|| weighted_val.unwrap())?;
    syn.enforce(
        "lookup value",
        weighted,
        Lc::constant(FieldElement::one()),
        out.into(),
    )?;
    Ok(out)
}

/// Constrains the multiset of path values to equal the multiset of city
/// values via an explicit selector matrix M: every entry boolean, every row
/// and column sums to one, and path_i = Sigma_j M[i][j] * city_j.
pub fn gadget_permutation_check(
    syn: &mut Synthesizer,
    path: &[Variable],
    cities: &[Variable],
) -> Result<(), ConstraintError> {
    if path.len() != cities.len() {
        return Err(ConstraintError::BadGadgetInput(
            "permutation_check",
            format!("{} path slots vs {} city slots", path.len(), cities.len()),
        ));
    }
    let t = path.len();

    // Witness: greedily match equal values; unmatched rows stay zero and are
    // caught by the row-sum constraint.
    let matrix_values: Option<Vec<Vec<bool>>> = if syn.is_witness_mode() {
        let path_vals: Vec<_> = path.iter().map(|&v| syn.value(v).unwrap()).collect();
        let city_vals: Vec<_> = cities.iter().map(|&v| syn.value(v).unwrap()).collect();
        let mut used = vec![false; t];
        let mut m = vec![vec![false; t]; t];
        for i in 0..t {
            for j in 0..t {
                if !used[j] && city_vals[j] == path_vals[i] {
                    used[j] = true;
                    m[i][j] = true;
                    break;
                }
            }
        }
        Some(m)
    } else {
        None
    };

    let mut matrix = Vec::with_capacity(t);
    for i in 0..t {
        let mut row = Vec::with_capacity(t);
        for j in 0..t {
            let bit = matrix_values.as_ref().map(|m| m[i][j]);
            let var = syn.alloc_private(move || {
                if bit.unwrap() {
                    FieldElement::one()
                } else {
                    FieldElement::zero()
                }
            })?;
            gadget_boolean(syn, var)?;
            row.push(var);
        }
        matrix.push(row);
    }

    let one = Lc::constant(FieldElement::one());
    for row in &matrix {
        let sum = Lc::from_terms(row.iter().map(|&v| (v, FieldElement::one())).collect());
        syn.enforce("permutation row sum", sum, one.clone(), one.clone())?;
    }
    for j in 0..t {
        let sum = Lc::from_terms(
            (0..t)
                .map(|i| (matrix[i][j], FieldElement::one()))
                .collect(),
        );
        syn.enforce("permutation column sum", sum, one.clone(), one.clone())?;
    }

    // path_i = Sigma_j M[i][j] * city_j, one product variable per cell.
    for i in 0..t {
        let mut terms = Vec::with_capacity(t);
        for j in 0..t {
            let m_val = syn.value(matrix[i][j]);
            let c_val = syn.value(cities[j]);
            let prod = syn.alloc_private(|| m_val.unwrap() * c_val.unwrap())?;
            syn.enforce(
                "permutation product",
                matrix[i][j].into(),
                cities[j].into(),
                prod.into(),
            )?;
            terms.push((prod, FieldElement::one()));
        }
        gadget_equal(syn, &Lc::from_terms(terms), &path[i].into())?;
    }
    Ok(())
}

/// One-hot selector block over values 0..size-1, bound to `value_lc`:
/// booleans, sum = 1, and Sigma_j j * sel_j = value. Internal helper shared
/// by the path-sum machinery.
fn alloc_bound_one_hot(
    syn: &mut Synthesizer,
    size: usize,
    value_lc: &Lc,
) -> Result<Vec<Variable>, ConstraintError> {
    let value = syn.value_of(value_lc);
    let chosen: Option<usize> = value.map(|v| {
        let limbs = v.to_canonical_limbs();
        let small = limbs[1] == 0 && limbs[2] == 0 && limbs[3] == 0;
        if small && (limbs[0] as usize) < size {
            limbs[0] as usize
        } else {
            // Out-of-range value: leave the block all zero; the selector-sum
            // constraint reports it.
            size
        }
    });
    let mut sels = Vec::with_capacity(size);
    for j in 0..size {
        let var = syn.alloc_private(move || {
            if chosen.unwrap() == j {
                FieldElement::one()
            } else {
                FieldElement::zero()
            }
        })?;
        gadget_boolean(syn, var)?;
        sels.push(var);
    }
    let one = Lc::constant(FieldElement::one());
    let sum = Lc::from_terms(sels.iter().map(|&v| (v, FieldElement::one())).collect());
    syn.enforce("one-hot sum", sum, one.clone(), one)?;
    let weighted = Lc::from_terms(
        sels.iter()
            .enumerate()
            .map(|(j, &v)| (v, FieldElement::from_u64(j as u64)))
            .collect(),
    );
    gadget_equal(syn, &weighted, value_lc)?;
    Ok(sels)
}

/// Distance lookup for one directed edge: source and target are one-hot
/// blocks over 0..n; returns Sigma_j src_j * (Sigma_k table[j][k] * dst_k)
/// as a linear combination over per-row product variables.
fn edge_distance(
    syn: &mut Synthesizer,
    src: &[Variable],
    dst: &[Variable],
    table: &[Vec<FieldElement>],
) -> Result<Lc, ConstraintError> {
    let mut terms = Vec::with_capacity(src.len());
    for (j, &s) in src.iter().enumerate() {
        let row = Lc::from_terms(
            dst.iter()
                .zip(&table[j])
                .map(|(&d, &w)| (d, w))
                .collect(),
        );
        let s_val = syn.value(s);
        let row_val = syn.value_of(&row);
        let prod = syn.alloc_private(|| s_val.unwrap() * row_val.unwrap())?;
        syn.enforce("edge distance product", s.into(), row, prod.into())?;
        terms.push((prod, FieldElement::one()));
    }
    Ok(Lc::from_terms(terms))
}

/// Constrains `out_sum` to the closed-tour length of `path` under a distance
/// table indexed by city number, with 0 as the padding sentinel.
///
/// `distance_table` is the (n+1) x (n+1) matrix whose row and column 0 are
/// zero, so sentinel edges contribute nothing. The gadget also pins the
/// padded layout: slot 0 is a real city and sentinels form a suffix. The
/// closing edge runs from the last real city back to slot 0, selected by the
/// real-to-sentinel transition (or the final slot for a full path).
pub fn gadget_path_sum(
    syn: &mut Synthesizer,
    path: &[Variable],
    distance_table: &[Vec<FieldElement>],
    out_sum: Variable,
) -> Result<(), ConstraintError> {
    let size = distance_table.len();
    if size == 0 || distance_table.iter().any(|row| row.len() != size) {
        return Err(ConstraintError::BadGadgetInput(
            "path_sum",
            "distance table must be square and non-empty".into(),
        ));
    }
    let zero = FieldElement::zero();
    if distance_table[0].iter().any(|&d| d != zero)
        || distance_table.iter().any(|row| row[0] != zero)
    {
        return Err(ConstraintError::BadGadgetInput(
            "path_sum",
            "sentinel row/column of the distance table must be zero".into(),
        ));
    }
    let t = path.len();
    if t < 2 {
        return Err(ConstraintError::BadGadgetInput(
            "path_sum",
            "need at least two path slots".into(),
        ));
    }

    // One-hot city selectors per slot; binds each path value into 0..n.
    let mut sels = Vec::with_capacity(t);
    for &p in path {
        sels.push(alloc_bound_one_hot(syn, size, &p.into())?);
    }
    let is_sentinel: Vec<Variable> = sels.iter().map(|s| s[0]).collect();
    let one = Lc::constant(FieldElement::one());

    // Slot 0 is real; sentinels are a suffix (no real city after a sentinel).
    syn.enforce(
        "first slot real",
        is_sentinel[0].into(),
        one.clone(),
        Lc::zero(),
    )?;
    for i in 0..t - 1 {
        syn.enforce(
            "sentinel suffix",
            is_sentinel[i].into(),
            one.clone() - Lc::from_var(is_sentinel[i + 1]),
            Lc::zero(),
        )?;
    }

    // Consecutive edges; sentinel targets land in the zero column.
    let mut total = Lc::zero();
    for i in 0..t - 1 {
        total = total + edge_distance(syn, &sels[i], &sels[i + 1], distance_table)?;
    }

    // Closing-edge selector: slot i holds the last real city iff it is real
    // and the next slot is a sentinel; the final slot qualifies when real.
    // Given the suffix rule exactly one indicator is 1.
    let mut last_flags: Vec<Lc> = Vec::with_capacity(t);
    for i in 0..t - 1 {
        let a = one.clone() - Lc::from_var(is_sentinel[i]);
        let b = Lc::from_var(is_sentinel[i + 1]);
        let av = syn.value_of(&a);
        let bv = syn.value_of(&b);
        let flag = syn.alloc_private(|| av.unwrap() * bv.unwrap())?;
        syn.enforce("last-real flag", a, b, flag.into())?;
        last_flags.push(flag.into());
    }
    last_flags.push(one.clone() - Lc::from_var(is_sentinel[t - 1]));

    // wrap_city = Sigma_i flag_i * path_i.
    let mut wrap_terms = Vec::with_capacity(t);
    for (flag, &p) in last_flags.iter().zip(path) {
        let f_val = syn.value_of(flag);
        let p_val = syn.value(p);
        let prod = syn.alloc_private(|| f_val.unwrap() * p_val.unwrap())?;
        syn.enforce("wrap city term", flag.clone(), p.into(), prod.into())?;
        wrap_terms.push((prod, FieldElement::one()));
    }
    let wrap_city = Lc::from_terms(wrap_terms);
    let wrap_sel = alloc_bound_one_hot(syn, size, &wrap_city)?;
    total = total + edge_distance(syn, &wrap_sel, &sels[0], distance_table)?;

    gadget_equal(syn, &total, &out_sum.into())
}

/// In-circuit MiMC permutation; mirrors [`super::mimc_permute`] round for
/// round at two constraints each.
fn mimc_permute_gadget(
    syn: &mut Synthesizer,
    key: &Lc,
    msg: &Lc,
) -> Result<Variable, ConstraintError> {
    let constants = round_constants();
    let mut x = msg.clone();
    let mut out = None;
    for i in 0..MIMC_ROUNDS {
        let t = x + key.clone() + Lc::constant(constants[i]);
        let t_val = syn.value_of(&t);
        let sq = syn.alloc_private(|| {
            let v = t_val.unwrap();
            v * v
        })?;
        syn.enforce("mimc square", t.clone(), t.clone(), sq.into())?;
        let cube = syn.alloc_private(|| {
            let v = t_val.unwrap();
            v * v * v
        })?;
        syn.enforce("mimc cube", sq.into(), t, cube.into())?;
        x = cube.into();
        out = Some(cube);
    }
    Ok(out.expect("at least one round"))
}

/// In-circuit sponge over the MiMC permutation; returns the two digest
/// variables. Bit-identical to [`super::mimc_hash_elements`].
pub fn gadget_hash(
    syn: &mut Synthesizer,
    inputs: &[Variable],
) -> Result<(Variable, Variable), ConstraintError> {
    if inputs.is_empty() {
        return Err(ConstraintError::BadGadgetInput(
            "hash",
            "empty input list".into(),
        ));
    }
    let mut state = Lc::constant(FieldElement::from_u64(inputs.len() as u64));
    for &v in inputs {
        let e = mimc_permute_gadget(syn, &state, &v.into())?;
        state = Lc::from_var(e) + Lc::from_var(v);
    }
    let d0 = mimc_permute_gadget(syn, &state, &Lc::constant(FieldElement::one()))?;
    let d1 = mimc_permute_gadget(syn, &state, &Lc::constant(FieldElement::from_u64(2)))?;
    Ok((d0, d1))
}

/// 0 <= x <= bound via bit decomposition of both x and bound - x at width
/// ceil(log2(bound + 1)).
pub fn gadget_range_check(
    syn: &mut Synthesizer,
    x: Variable,
    bound: u64,
) -> Result<(), ConstraintError> {
    let x_lc = Lc::from_var(x);
    if bound == 0 {
        return gadget_equal(syn, &x_lc, &Lc::zero());
    }
    let width = 64 - bound.leading_zeros() as usize;
    let bound_minus_x = Lc::constant(FieldElement::from_u64(bound)) - x_lc.clone();
    decompose_into_bits(syn, &x_lc, width)?;
    decompose_into_bits(syn, &bound_minus_x, width)
}

/// Allocates `width` boolean bits summing (with powers of two) to `value`.
fn decompose_into_bits(
    syn: &mut Synthesizer,
    value: &Lc,
    width: usize,
) -> Result<(), ConstraintError> {
    let val = syn.value_of(value);
    let low64: Option<u64> = val.map(|v| {
        let limbs = v.to_canonical_limbs();
        // Oversized values keep their low bits; the recomposition equality
        // then fails, which is the point of the check.
        limbs[0]
    });
    let mut terms = Vec::with_capacity(width);
    for k in 0..width {
        let bit = syn.alloc_private(move || {
            if (low64.unwrap() >> k) & 1 == 1 {
                FieldElement::one()
            } else {
                FieldElement::zero()
            }
        })?;
        gadget_boolean(syn, bit)?;
        terms.push((bit, FieldElement::from_u64(1u64 << k)));
    }
    gadget_equal(syn, &Lc::from_terms(terms), value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fr;
    use crate::constraint::{mimc_hash_elements, Assignment, ConstraintSystem};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    /// Runs a circuit closure in both modes: returns the system and, if the
    /// witness succeeded, the assignment.
    fn both_modes<F>(f: F) -> (ConstraintSystem, Result<Assignment, ConstraintError>)
    where
        F: Fn(&mut Synthesizer) -> Result<(), ConstraintError>,
    {
        let mut setup = Synthesizer::setup();
        f(&mut setup).expect("setup mode must not fail");
        let cs = setup.finish_setup();
        let mut wit = Synthesizer::witness();
        let assignment = f(&mut wit).map(|_| wit.finish_witness());
        (cs, assignment)
    }

    /// Random single-slot perturbations must all break satisfaction.
    fn assert_perturbation_sound(cs: &ConstraintSystem, z: &Assignment, trials: usize) {
        let mut rng = ChaCha20Rng::seed_from_u64(0xdead);
        for _ in 0..trials {
            let idx = rng.gen_range(1..z.len());
            let mut delta = Fr::random(&mut rng);
            if delta.is_zero() {
                delta = Fr::one();
            }
            let perturbed = z.perturbed(idx, delta);
            assert!(
                !cs.is_satisfied(&perturbed).unwrap(),
                "perturbation at {idx} went unnoticed"
            );
        }
    }

    #[test]
    fn lookup_selects_the_right_entry() {
        let table = vec![Fr::from_u64(5), Fr::from_u64(7), Fr::from_u64(9)];
        for (hot, expect) in [(0usize, 5u64), (1, 7), (2, 9)] {
            let (cs, z) = both_modes(|syn| {
                let sels: Vec<_> = (0..3)
                    .map(|j| {
                        syn.alloc_private(move || {
                            if j == hot {
                                Fr::one()
                            } else {
                                Fr::zero()
                            }
                        })
                        .unwrap()
                    })
                    .collect();
                let out = gadget_indexed_lookup(syn, &table, &sels)?;
                let out_val = syn.value(out);
                assert!(out_val.is_none() || out_val == Some(Fr::from_u64(expect)));
                Ok(())
            });
            let z = z.unwrap();
            assert!(cs.is_satisfied(&z).unwrap());
            assert_perturbation_sound(&cs, &z, 40);
        }
    }

    #[test]
    fn lookup_rejects_two_selectors_set() {
        // Build the structure honestly, then craft a dishonest assignment
        // with two hot selectors; the sum constraint must catch it.
        let table = vec![Fr::from_u64(5), Fr::from_u64(7), Fr::from_u64(9)];
        let mut setup = Synthesizer::setup();
        let sels: Vec<_> = (0..3)
            .map(|_| setup.alloc_private(|| unreachable!()).unwrap())
            .collect();
        gadget_indexed_lookup(&mut setup, &table, &sels).unwrap();
        let cs = setup.finish_setup();
        // Variables: sel0, sel1, sel2, out.
        let z = Assignment::new(
            vec![Fr::one(), Fr::one(), Fr::one(), Fr::zero(), Fr::from_u64(12)],
            0,
        )
        .unwrap();
        assert!(!cs.is_satisfied(&z).unwrap());
    }

    #[test]
    fn lookup_length_mismatch_errors() {
        let mut syn = Synthesizer::setup();
        let s = syn.alloc_private(|| Fr::one()).unwrap();
        assert!(matches!(
            gadget_indexed_lookup(&mut syn, &[Fr::one(), Fr::zero()], &[s]),
            Err(ConstraintError::BadGadgetInput("indexed_lookup", _))
        ));
    }

    fn vars_from(syn: &mut Synthesizer, vals: &[u64]) -> Vec<Variable> {
        vals.iter()
            .map(|&v| syn.alloc_private(move || Fr::from_u64(v)).unwrap())
            .collect()
    }

    #[test]
    fn permutation_accepts_reordering() {
        let (cs, z) = both_modes(|syn| {
            let path = vars_from(syn, &[2, 3, 1]);
            let cities = vars_from(syn, &[1, 2, 3]);
            gadget_permutation_check(syn, &path, &cities)
        });
        let z = z.unwrap();
        assert!(cs.is_satisfied(&z).unwrap());
        assert_perturbation_sound(&cs, &z, 100);
    }

    #[test]
    fn permutation_rejects_repeats() {
        let (_cs, z) = both_modes(|syn| {
            let path = vars_from(syn, &[1, 1, 3]);
            let cities = vars_from(syn, &[1, 2, 3]);
            gadget_permutation_check(syn, &path, &cities)
        });
        assert!(matches!(
            z,
            Err(ConstraintError::Unsatisfied {
                label: "permutation row sum",
                ..
            })
        ));
    }

    #[test]
    fn permutation_matches_sentinel_padding() {
        let (cs, z) = both_modes(|syn| {
            let path = vars_from(syn, &[1, 2, 0, 0]);
            let cities = vars_from(syn, &[2, 1, 0, 0]);
            gadget_permutation_check(syn, &path, &cities)
        });
        let z = z.unwrap();
        assert!(cs.is_satisfied(&z).unwrap());
    }

    /// 4-city demo distance table with a zero sentinel row/column.
    fn demo_table() -> Vec<Vec<Fr>> {
        // d(1,2)=5, d(2,3)=7, d(1,3)=9.
        let raw = [
            [0u64, 0, 0, 0],
            [0, 0, 5, 9],
            [0, 5, 0, 7],
            [0, 9, 7, 0],
        ];
        raw.iter()
            .map(|row| row.iter().map(|&v| Fr::from_u64(v)).collect())
            .collect()
    }

    #[test]
    fn path_sum_closes_the_tour() {
        // Tour 1-2-3 back to 1: 5 + 7 + 9 = 21.
        let (cs, z) = both_modes(|syn| {
            let path = vars_from(syn, &[1, 2, 3]);
            let sum = syn.alloc_private(|| Fr::from_u64(21))?;
            gadget_path_sum(syn, &path, &demo_table(), sum)
        });
        let z = z.unwrap();
        assert!(cs.is_satisfied(&z).unwrap());
        assert_perturbation_sound(&cs, &z, 100);
    }

    #[test]
    fn path_sum_handles_sentinel_padding() {
        // Padded tour [1, 2, 3, 0, 0]: same closed length 21.
        let (cs, z) = both_modes(|syn| {
            let path = vars_from(syn, &[1, 2, 3, 0, 0]);
            let sum = syn.alloc_private(|| Fr::from_u64(21))?;
            gadget_path_sum(syn, &path, &demo_table(), sum)
        });
        assert!(cs.is_satisfied(&z.unwrap()).unwrap());
    }

    #[test]
    fn path_sum_rejects_wrong_total() {
        let (_cs, z) = both_modes(|syn| {
            let path = vars_from(syn, &[1, 2, 3]);
            let sum = syn.alloc_private(|| Fr::from_u64(20))?;
            gadget_path_sum(syn, &path, &demo_table(), sum)
        });
        assert!(matches!(z, Err(ConstraintError::Unsatisfied { label: "equal", .. })));
    }

    #[test]
    fn path_sum_rejects_sentinel_before_real_city() {
        let (_cs, z) = both_modes(|syn| {
            let path = vars_from(syn, &[1, 0, 2, 0]);
            let sum = syn.alloc_private(|| Fr::from_u64(10))?;
            gadget_path_sum(syn, &path, &demo_table(), sum)
        });
        assert!(matches!(
            z,
            Err(ConstraintError::Unsatisfied {
                label: "sentinel suffix",
                ..
            })
        ));
    }

    #[test]
    fn path_sum_rejects_out_of_range_city() {
        let (_cs, z) = both_modes(|syn| {
            let path = vars_from(syn, &[1, 9, 3]);
            let sum = syn.alloc_private(|| Fr::from_u64(21))?;
            gadget_path_sum(syn, &path, &demo_table(), sum)
        });
        assert!(matches!(
            z,
            Err(ConstraintError::Unsatisfied {
                label: "one-hot sum",
                ..
            })
        ));
    }

    #[test]
    fn path_sum_rejects_bad_tables() {
        let mut syn = Synthesizer::setup();
        let path = vec![syn.alloc_private(|| unreachable!()).unwrap()];
        let ragged = vec![vec![Fr::zero(), Fr::zero()], vec![Fr::zero()]];
        assert!(gadget_path_sum(&mut syn, &path, &ragged, path[0]).is_err());
        let nonzero_sentinel = vec![
            vec![Fr::zero(), Fr::one()],
            vec![Fr::zero(), Fr::zero()],
        ];
        assert!(gadget_path_sum(&mut syn, &path, &nonzero_sentinel, path[0]).is_err());
    }

    #[test]
    fn hash_gadget_matches_plain_evaluator() {
        let inputs = [3u64, 1, 4, 1, 5];
        let expect = mimc_hash_elements(
            &inputs.iter().map(|&v| Fr::from_u64(v)).collect::<Vec<_>>(),
        )
        .unwrap();
        let (cs, z) = both_modes(|syn| {
            let vars = vars_from(syn, &inputs);
            let (d0, d1) = gadget_hash(syn, &vars)?;
            if syn.is_witness_mode() {
                assert_eq!(syn.value(d0).unwrap(), expect.0);
                assert_eq!(syn.value(d1).unwrap(), expect.1);
            }
            Ok(())
        });
        let z = z.unwrap();
        assert!(cs.is_satisfied(&z).unwrap());
        assert_perturbation_sound(&cs, &z, 100);
    }

    #[test]
    fn hash_gadget_binds_digest_to_inputs() {
        // Fix the digest as public inputs for [1,2,3]; a witness for a
        // different input vector must fail the final comparison.
        let honest = [1u64, 2, 3];
        let digest = mimc_hash_elements(
            &honest.iter().map(|&v| Fr::from_u64(v)).collect::<Vec<_>>(),
        )
        .unwrap();
        let run = |values: [u64; 3]| {
            let mut syn = Synthesizer::witness();
            let h0 = syn.alloc_public(|| digest.0).unwrap();
            let h1 = syn.alloc_public(|| digest.1).unwrap();
            let vars = vars_from(&mut syn, &values);
            let (d0, d1) = gadget_hash(&mut syn, &vars)?;
            gadget_equal(&mut syn, &d0.into(), &h0.into())?;
            gadget_equal(&mut syn, &d1.into(), &h1.into())
        };
        assert!(run([1, 2, 3]).is_ok());
        assert!(matches!(
            run([1, 3, 2]),
            Err(ConstraintError::Unsatisfied { label: "equal", .. })
        ));
    }

    #[test]
    fn hash_gadget_rejects_empty_input() {
        let mut syn = Synthesizer::setup();
        assert!(matches!(
            gadget_hash(&mut syn, &[]),
            Err(ConstraintError::BadGadgetInput("hash", _))
        ));
    }

    #[test]
    fn range_check_accepts_and_rejects_around_bound() {
        for (value, bound, ok) in [
            (0u64, 70u64, true),
            (70, 70, true),
            (35, 70, true),
            (71, 70, false),
            (1000, 70, false),
            (0, 0, true),
            (1, 0, false),
        ] {
            let (cs, z) = both_modes(|syn| {
                let x = syn.alloc_private(move || Fr::from_u64(value))?;
                gadget_range_check(syn, x, bound)
            });
            match z {
                Ok(z) => {
                    assert!(ok, "value {value} must be rejected at bound {bound}");
                    assert!(cs.is_satisfied(&z).unwrap());
                }
                Err(_) => assert!(!ok, "value {value} must pass at bound {bound}"),
            }
        }
    }

    #[test]
    fn range_check_rejects_huge_field_values() {
        // -1 mod r is enormous; the decomposition cannot represent it.
        let (_cs, z) = both_modes(|syn| {
            let x = syn.alloc_private(|| -Fr::one())?;
            gadget_range_check(syn, x, 100)
        });
        assert!(z.is_err());
    }

    #[test]
    fn boolean_and_equal_basics() {
        let (cs, z) = both_modes(|syn| {
            let x = syn.alloc_private(|| Fr::one())?;
            gadget_boolean(syn, x)?;
            let y = syn.alloc_private(|| Fr::one())?;
            gadget_equal(syn, &x.into(), &y.into())
        });
        let z = z.unwrap();
        assert!(cs.is_satisfied(&z).unwrap());
        assert_perturbation_sound(&cs, &z, 40);

        let (_cs, z) = both_modes(|syn| {
            let x = syn.alloc_private(|| Fr::from_u64(2))?;
            gadget_boolean(syn, x)
        });
        assert!(z.is_err());
    }

    #[test]
    fn circuits_build_reproducibly() {
        let build = || {
            let mut syn = Synthesizer::setup();
            let path = (0..4)
                .map(|_| syn.alloc_private(|| unreachable!()).unwrap())
                .collect::<Vec<_>>();
            let sum = syn.alloc_private(|| unreachable!()).unwrap();
            gadget_path_sum(&mut syn, &path, &demo_table(), sum).unwrap();
            let cities = (0..4)
                .map(|_| syn.alloc_private(|| unreachable!()).unwrap())
                .collect::<Vec<_>>();
            gadget_permutation_check(&mut syn, &path, &cities).unwrap();
            gadget_hash(&mut syn, &path).unwrap();
            syn.finish_setup().digest()
        };
        assert_eq!(build(), build());
    }
}
