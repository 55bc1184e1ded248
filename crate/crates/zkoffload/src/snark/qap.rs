//! Dense quadratic-arithmetic form of a constraint system.
//!
//! This is the ground-truth artifact: it materializes one coefficient vector
//! per variable, which is quadratic in system size. The prover and setup
//! never touch it; they stream sparse rows instead and are tested against
//! this form on small systems.

use super::domain::EvaluationDomain;
use super::SnarkError;
use crate::algebra::Fr;
use crate::constraint::{Assignment, ConstraintSystem};

/// Per-variable polynomials A_i, B_i, C_i (coefficient vectors, lowest
/// degree first) and the target polynomial t(x) = x^domain_size - 1. A
/// satisfying assignment z makes (sum z A_i)(sum z B_i) - sum z C_i
/// divisible by t.
#[derive(Clone, Debug)]
pub struct QapInstance {
    pub num_variables: usize,
    pub num_public: usize,
    pub domain_size: usize,
    pub a: Vec<Vec<Fr>>,
    pub b: Vec<Vec<Fr>>,
    pub c: Vec<Vec<Fr>>,
    pub target: Vec<Fr>,
}

/// Interpolates each variable's column of the constraint matrices over the
/// smallest power-of-two domain covering all rows.
pub fn r1cs_to_qap(cs: &ConstraintSystem) -> Result<QapInstance, SnarkError> {
    if cs.num_constraints() == 0 {
        return Err(SnarkError::EmptySystem);
    }
    let domain = EvaluationDomain::new(cs.num_constraints())
        .ok_or(SnarkError::SystemTooLarge(cs.num_constraints()))?;
    let m = cs.num_variables();
    let d = domain.size();
    let mut a = vec![vec![Fr::zero(); d]; m];
    let mut b = vec![vec![Fr::zero(); d]; m];
    let mut c = vec![vec![Fr::zero(); d]; m];
    for (row, constraint) in cs.constraints().iter().enumerate() {
        for (var, coeff) in constraint.a.terms() {
            a[var.index()][row] += coeff;
        }
        for (var, coeff) in constraint.b.terms() {
            b[var.index()][row] += coeff;
        }
        for (var, coeff) in constraint.c.terms() {
            c[var.index()][row] += coeff;
        }
    }
    for column in a.iter_mut().chain(b.iter_mut()).chain(c.iter_mut()) {
        domain.ifft(column);
    }
    Ok(QapInstance {
        num_variables: m,
        num_public: cs.num_public,
        domain_size: d,
        a,
        b,
        c,
        target: domain.vanishing_polynomial(),
    })
}

impl QapInstance {
    /// Every A_i, B_i, C_i evaluated at one point.
    pub fn evaluate_at(&self, x: Fr) -> (Vec<Fr>, Vec<Fr>, Vec<Fr>) {
        let eval = |polys: &[Vec<Fr>]| polys.iter().map(|p| eval_poly(p, x)).collect();
        (eval(&self.a), eval(&self.b), eval(&self.c))
    }

    /// The defining QAP property for an assignment z:
    /// (sum z_i A_i)(sum z_i B_i) - sum z_i C_i = 0 mod t(x).
    pub fn divisibility_holds(&self, z: &Assignment) -> Result<bool, SnarkError> {
        if z.len() != self.num_variables {
            return Err(SnarkError::AssignmentLength {
                expected: self.num_variables,
                got: z.len(),
            });
        }
        let az = self.combine(&self.a, z.values());
        let bz = self.combine(&self.b, z.values());
        let cz = self.combine(&self.c, z.values());
        let mut p = mul_polys(&az, &bz);
        for (pc, cc) in p.iter_mut().zip(&cz) {
            *pc -= *cc;
        }
        // x^d = 1 mod t, so folding every coefficient into its residue
        // degree yields the remainder.
        let d = self.domain_size;
        let mut rem = vec![Fr::zero(); d];
        for (k, coeff) in p.into_iter().enumerate() {
            rem[k % d] += coeff;
        }
        Ok(rem.iter().all(Fr::is_zero))
    }

    fn combine(&self, polys: &[Vec<Fr>], z: &[Fr]) -> Vec<Fr> {
        let mut out = vec![Fr::zero(); self.domain_size];
        for (poly, &coeff) in polys.iter().zip(z) {
            if coeff.is_zero() {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(poly) {
                *o += p * coeff;
            }
        }
        out
    }
}

fn eval_poly(coeffs: &[Fr], x: Fr) -> Fr {
    coeffs.iter().rev().fold(Fr::zero(), |acc, &c| acc * x + c)
}

/// Schoolbook product; quadratic, fine at oracle scale.
fn mul_polys(p: &[Fr], q: &[Fr]) -> Vec<Fr> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fr::zero(); p.len() + q.len() - 1];
    for (i, &pc) in p.iter().enumerate() {
        if pc.is_zero() {
            continue;
        }
        for (j, &qc) in q.iter().enumerate() {
            out[i + j] += pc * qc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{LinearCombination, Variable, Visibility};

    fn single_multiplication() -> ConstraintSystem {
        let mut cs = ConstraintSystem::new();
        let a = cs.alloc(Visibility::Private).unwrap();
        let b = cs.alloc(Visibility::Private).unwrap();
        let c = cs.alloc(Visibility::Private).unwrap();
        cs.enforce("mul", a.into(), b.into(), c.into()).unwrap();
        cs.finalize();
        cs
    }

    fn assignment(vals: &[u64]) -> Assignment {
        let mut v = vec![Fr::one()];
        v.extend(vals.iter().map(|&x| Fr::from_u64(x)));
        Assignment::new(v, 0).unwrap()
    }

    #[test]
    fn single_constraint_yields_domain_size_one() {
        let qap = r1cs_to_qap(&single_multiplication()).unwrap();
        assert_eq!(qap.domain_size, 1);
        assert_eq!(qap.num_variables, 4);
        assert!(qap.a.iter().all(|p| p.len() == 1));
        assert!(qap.divisibility_holds(&assignment(&[3, 4, 12])).unwrap());
    }

    #[test]
    fn divisibility_fails_for_unsatisfying_assignment() {
        let qap = r1cs_to_qap(&single_multiplication()).unwrap();
        assert!(!qap.divisibility_holds(&assignment(&[3, 4, 11])).unwrap());
    }

    #[test]
    fn empty_system_is_rejected() {
        let mut cs = ConstraintSystem::new();
        cs.alloc(Visibility::Private).unwrap();
        cs.finalize();
        assert!(matches!(r1cs_to_qap(&cs), Err(SnarkError::EmptySystem)));
    }

    #[test]
    fn wrong_assignment_length_is_an_error() {
        let qap = r1cs_to_qap(&single_multiplication()).unwrap();
        let short = Assignment::new(vec![Fr::one(), Fr::one()], 0).unwrap();
        assert!(matches!(
            qap.divisibility_holds(&short),
            Err(SnarkError::AssignmentLength { expected: 4, got: 2 })
        ));
    }

    /// Three constraints force a padded power-of-two domain; divisibility
    /// must track satisfaction exactly.
    #[test]
    fn padded_domain_tracks_satisfaction() {
        let mut cs = ConstraintSystem::new();
        let out = cs.alloc(Visibility::Public).unwrap();
        let x = cs.alloc(Visibility::Private).unwrap();
        let x2 = cs.alloc(Visibility::Private).unwrap();
        let x3 = cs.alloc(Visibility::Private).unwrap();
        cs.enforce("square", x.into(), x.into(), x2.into()).unwrap();
        cs.enforce("cube", x2.into(), x.into(), x3.into()).unwrap();
        let five = LinearCombination::constant(Fr::from_u64(5));
        cs.enforce(
            "shift",
            LinearCombination::from_var(x3) + five,
            Variable::ONE.into(),
            out.into(),
        )
        .unwrap();
        cs.finalize();

        let qap = r1cs_to_qap(&cs).unwrap();
        assert_eq!(qap.domain_size, 4);
        assert_eq!(qap.num_public, 1);
        // x = 3: out = 27 + 5 = 32; z = (1, out, x, x2, x3).
        let good = Assignment::new(
            vec![
                Fr::one(),
                Fr::from_u64(32),
                Fr::from_u64(3),
                Fr::from_u64(9),
                Fr::from_u64(27),
            ],
            1,
        )
        .unwrap();
        assert!(qap.divisibility_holds(&good).unwrap());
        assert!(!qap.divisibility_holds(&good.perturbed(1, Fr::one())).unwrap());
        assert!(!qap.divisibility_holds(&good.perturbed(3, Fr::one())).unwrap());
    }

    /// The interpolated columns reproduce the matrix entries on the domain.
    #[test]
    fn columns_evaluate_back_to_matrix_entries() {
        let cs = single_multiplication();
        let qap = r1cs_to_qap(&cs).unwrap();
        let domain = EvaluationDomain::new(cs.num_constraints()).unwrap();
        let (a, b, c) = qap.evaluate_at(domain.elements()[0]);
        // Row 0 is a * b = c over variables (one, a, b, c).
        assert_eq!(a, vec![Fr::zero(), Fr::one(), Fr::zero(), Fr::zero()]);
        assert_eq!(b, vec![Fr::zero(), Fr::zero(), Fr::one(), Fr::zero()]);
        assert_eq!(c, vec![Fr::zero(), Fr::zero(), Fr::zero(), Fr::one()]);
    }
}
