//! Preprocessing SNARK over the constraint system: one-time setup bound to a
//! system digest, witness computation, proving, verifying.
//!
//! Setup streams the sparse rows once through a Lagrange kernel evaluated at
//! the secret point, so the dense per-variable form in [`super::qap`] is
//! never materialized. The prover recovers the quotient polynomial with
//! three FFTs and one coset pass.
//!
//! Beyond the recorded rows, both setup and prover append one consistency
//! row per public input (input * 0 = 0), keeping the public-input
//! polynomials linearly independent so inputs cannot be remixed under a
//! fixed proof.

use super::domain::EvaluationDomain;
use super::SnarkError;
use crate::algebra::{
    msm, multi_pairing, multi_scalar_combine, scalar_mul, FixedBase, Fr, G1Point, G2Point,
};
use crate::constraint::{Assignment, Circuit, ConstraintSystem, Synthesizer};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// Prover-side key material. Bound to the generating system by digest; all
/// vectors are generator multiples of secret-point evaluations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProvingKey {
    pub digest: [u8; 32],
    pub num_public: usize,
    pub domain_size: usize,
    pub alpha_g1: G1Point,
    pub beta_g1: G1Point,
    pub beta_g2: G2Point,
    pub delta_g1: G1Point,
    pub delta_g2: G2Point,
    /// u_i(tau) G1 per variable.
    pub a_query: Vec<G1Point>,
    /// v_i(tau) G1 per variable.
    pub b_g1_query: Vec<G1Point>,
    /// v_i(tau) G2 per variable.
    pub b_g2_query: Vec<G2Point>,
    /// tau^k Z(tau)/delta G1 for k < domain_size - 1.
    pub h_query: Vec<G1Point>,
    /// (beta u_i + alpha v_i + w_i)/delta G1 per private variable.
    pub l_query: Vec<G1Point>,
}

/// Verifier-side key material: four fixed points plus one G1 point per
/// public input and one for the constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyingKey {
    pub digest: [u8; 32],
    pub alpha_g1: G1Point,
    pub beta_g2: G2Point,
    pub gamma_g2: G2Point,
    pub delta_g2: G2Point,
    pub ic: Vec<G1Point>,
}

/// The constant-size argument: 256 bytes serialized regardless of the
/// statement being proved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Proof {
    pub a: G1Point,
    pub b: G2Point,
    pub c: G1Point,
}

impl VerifyingKey {
    /// Number of public inputs this key expects.
    pub fn num_public(&self) -> usize {
        self.ic.len().saturating_sub(1)
    }
}

/// Deterministic RNG from an arbitrary byte seed. Demo mode feeds OS
/// entropy through the same funnel; test mode uses fixed strings.
pub fn rng_from_seed(seed: &[u8]) -> ChaCha20Rng {
    let mut h = Sha256::new();
    h.update(b"zkoffload/rng/v1");
    h.update((seed.len() as u64).to_le_bytes());
    h.update(seed);
    ChaCha20Rng::from_seed(h.finalize().into())
}

fn nonzero_scalar(rng: &mut ChaCha20Rng) -> Fr {
    loop {
        let v = Fr::random(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Rows the QAP interpolates over: recorded constraints plus one
/// consistency row per public input and one for the constant.
pub(crate) fn padded_rows(cs: &ConstraintSystem) -> usize {
    cs.num_constraints() + cs.num_public + 1
}

/// All variable polynomials evaluated at one point, streamed from the
/// sparse rows: u_i(x) interpolates column i of A over the padded rows,
/// likewise v_i over B and w_i over C.
pub(crate) fn qap_evaluations_at(
    cs: &ConstraintSystem,
    domain: &EvaluationDomain,
    tau: Fr,
) -> (Vec<Fr>, Vec<Fr>, Vec<Fr>) {
    let lag = domain.lagrange_coeffs_at(tau);
    let m = cs.num_variables();
    let mut u = vec![Fr::zero(); m];
    let mut v = vec![Fr::zero(); m];
    let mut w = vec![Fr::zero(); m];
    for (j, row) in cs.constraints().iter().enumerate() {
        let l = lag[j];
        for (var, coeff) in row.a.terms() {
            u[var.index()] += coeff * l;
        }
        for (var, coeff) in row.b.terms() {
            v[var.index()] += coeff * l;
        }
        for (var, coeff) in row.c.terms() {
            w[var.index()] += coeff * l;
        }
    }
    let base = cs.num_constraints();
    for i in 0..=cs.num_public {
        u[i] += lag[base + i];
    }
    (u, v, w)
}

/// One-time key generation. All secret scalars derive from `seed`, are used
/// here, and leave scope; the returned keys embed the system digest.
pub fn setup(cs: &ConstraintSystem, seed: &[u8]) -> Result<(ProvingKey, VerifyingKey), SnarkError> {
    if cs.num_constraints() == 0 {
        return Err(SnarkError::EmptySystem);
    }
    let rows = padded_rows(cs);
    let domain = EvaluationDomain::new(rows).ok_or(SnarkError::SystemTooLarge(rows))?;
    let digest = cs.digest();

    let mut rng = rng_from_seed(seed);
    // tau must avoid the domain so no Lagrange denominator vanishes.
    let tau = loop {
        let t = Fr::random(&mut rng);
        if !t.is_zero() && !domain.evaluate_vanishing(t).is_zero() {
            break t;
        }
    };
    let alpha = nonzero_scalar(&mut rng);
    let beta = nonzero_scalar(&mut rng);
    let gamma = nonzero_scalar(&mut rng);
    let delta = nonzero_scalar(&mut rng);

    let (u, v, w) = qap_evaluations_at(cs, &domain, tau);
    let gamma_inv = gamma.inverse().expect("gamma is nonzero");
    let delta_inv = delta.inverse().expect("delta is nonzero");

    let ell = cs.num_public;
    let mut ic_scalars = Vec::with_capacity(ell + 1);
    let mut l_scalars = Vec::with_capacity(cs.num_variables() - ell - 1);
    for i in 0..cs.num_variables() {
        let k = beta * u[i] + alpha * v[i] + w[i];
        if i <= ell {
            ic_scalars.push(k * gamma_inv);
        } else {
            l_scalars.push(k * delta_inv);
        }
    }
    let mut h_scalars = Vec::with_capacity(domain.size() - 1);
    let mut cur = domain.evaluate_vanishing(tau) * delta_inv;
    for _ in 0..domain.size() - 1 {
        h_scalars.push(cur);
        cur *= tau;
    }

    let g1 = FixedBase::new(&G1Point::generator());
    let g2 = FixedBase::new(&G2Point::generator());
    let alpha_g1 = g1.mul(&alpha).to_affine();
    let beta_g2 = g2.mul(&beta).to_affine();
    let delta_g2 = g2.mul(&delta).to_affine();

    let pk = ProvingKey {
        digest,
        num_public: ell,
        domain_size: domain.size(),
        alpha_g1,
        beta_g1: g1.mul(&beta).to_affine(),
        beta_g2,
        delta_g1: g1.mul(&delta).to_affine(),
        delta_g2,
        a_query: g1.mul_batch(&u),
        b_g1_query: g1.mul_batch(&v),
        b_g2_query: g2.mul_batch(&v),
        h_query: g1.mul_batch(&h_scalars),
        l_query: g1.mul_batch(&l_scalars),
    };
    let vk = VerifyingKey {
        digest,
        alpha_g1,
        beta_g2,
        gamma_g2: g2.mul(&gamma).to_affine(),
        delta_g2,
        ic: g1.mul_batch(&ic_scalars),
    };
    Ok((pk, vk))
}

/// Runs the circuit in setup mode, returning the finalized system.
pub fn synthesize_system<C: Circuit>(circuit: &C) -> Result<ConstraintSystem, SnarkError> {
    let mut syn = Synthesizer::setup();
    circuit.synthesize(&mut syn)?;
    Ok(syn.finish_setup())
}

/// Runs the circuit in witness mode. Inputs that violate the verification
/// program surface as a constraint error, never as a bogus assignment.
pub fn compute_witness<C: Circuit>(circuit: &C) -> Result<Assignment, SnarkError> {
    let mut syn = Synthesizer::witness();
    circuit.synthesize(&mut syn)?;
    Ok(syn.finish_witness())
}

fn key_matches(pk: &ProvingKey, cs: &ConstraintSystem) -> bool {
    let m = cs.num_variables();
    pk.digest == cs.digest()
        && pk.num_public == cs.num_public
        && pk.domain_size == padded_rows(cs).next_power_of_two()
        && pk.a_query.len() == m
        && pk.b_g1_query.len() == m
        && pk.b_g2_query.len() == m
        && pk.h_query.len() == pk.domain_size - 1
        && pk.l_query.len() == m - cs.num_public - 1
}

/// Produces a proof for a satisfying assignment. Blinding scalars derive
/// from `blinding_seed`; an unsatisfying assignment or mismatched key is
/// rejected rather than turned into an invalid proof.
pub fn prove(
    pk: &ProvingKey,
    cs: &ConstraintSystem,
    z: &Assignment,
    blinding_seed: &[u8],
) -> Result<Proof, SnarkError> {
    if !key_matches(pk, cs) {
        return Err(SnarkError::KeyMismatch);
    }
    if !cs.is_satisfied(z)? {
        return Err(SnarkError::UnsatisfiedAssignment);
    }
    let rows = padded_rows(cs);
    let domain = EvaluationDomain::new(rows).ok_or(SnarkError::SystemTooLarge(rows))?;
    let zv = z.values();
    let d = domain.size();

    // Row evaluations of <A,z>, <B,z>, <C,z> over the padded rows.
    let mut a_evals = vec![Fr::zero(); d];
    let mut b_evals = vec![Fr::zero(); d];
    let mut c_evals = vec![Fr::zero(); d];
    for (j, row) in cs.constraints().iter().enumerate() {
        a_evals[j] = row.a.evaluate(zv);
        b_evals[j] = row.b.evaluate(zv);
        c_evals[j] = row.c.evaluate(zv);
    }
    let base = cs.num_constraints();
    for i in 0..=cs.num_public {
        a_evals[base + i] = zv[i];
    }

    // Quotient h = (AB - C)/Z via one coset: AB - C vanishes on the domain,
    // so h has degree < d and one shifted evaluation set determines it.
    domain.ifft(&mut a_evals);
    domain.coset_fft(&mut a_evals);
    domain.ifft(&mut b_evals);
    domain.coset_fft(&mut b_evals);
    domain.ifft(&mut c_evals);
    domain.coset_fft(&mut c_evals);
    let zh_inv = domain.zh_on_coset_inv();
    let mut h = a_evals;
    for j in 0..d {
        h[j] = (h[j] * b_evals[j] - c_evals[j]) * zh_inv;
    }
    domain.coset_ifft(&mut h);
    debug_assert!(h[d - 1].is_zero(), "quotient degree exceeds d-2");
    h.truncate(d - 1);

    let mut rng = rng_from_seed(blinding_seed);
    let r = Fr::random(&mut rng);
    let s = Fr::random(&mut rng);

    let a = {
        let mut acc = msm(&pk.a_query, zv);
        acc.add_assign_affine(&pk.alpha_g1);
        acc.add_assign_affine(&scalar_mul(&pk.delta_g1, &r));
        acc.to_affine()
    };
    let b_g2 = {
        let mut acc = msm(&pk.b_g2_query, zv);
        acc.add_assign_affine(&pk.beta_g2);
        acc.add_assign_affine(&scalar_mul(&pk.delta_g2, &s));
        acc.to_affine()
    };
    let b_g1 = {
        let mut acc = msm(&pk.b_g1_query, zv);
        acc.add_assign_affine(&pk.beta_g1);
        acc.add_assign_affine(&scalar_mul(&pk.delta_g1, &s));
        acc.to_affine()
    };
    let c = {
        let mut acc = msm(&pk.l_query, &zv[1 + pk.num_public..]);
        acc.add_assign(&msm(&pk.h_query, &h));
        acc.add_assign_affine(&scalar_mul(&a, &s));
        acc.add_assign_affine(&scalar_mul(&b_g1, &r));
        acc.add_assign_affine(&scalar_mul(&pk.delta_g1, &-(r * s)));
        acc.to_affine()
    };
    Ok(Proof { a, b: b_g2, c })
}

/// Pure pairing check: e(A,B) = e(alpha,beta) e(IC(inputs),gamma) e(C,delta).
/// Wrong input arity is an error, distinct from a false verdict.
pub fn verify(
    vk: &VerifyingKey,
    public_inputs: &[Fr],
    proof: &Proof,
) -> Result<bool, SnarkError> {
    if public_inputs.len() != vk.num_public() {
        return Err(SnarkError::PublicInputArity {
            expected: vk.num_public(),
            got: public_inputs.len(),
        });
    }
    let mut scalars = Vec::with_capacity(vk.ic.len());
    scalars.push(Fr::one());
    scalars.extend_from_slice(public_inputs);
    let ic = multi_scalar_combine(&vk.ic, &scalars)?;
    let check = multi_pairing(&[
        (proof.a, proof.b),
        (-ic, vk.gamma_g2),
        (-proof.c, vk.delta_g2),
        (-vk.alpha_g1, vk.beta_g2),
    ]);
    Ok(check.is_identity())
}
