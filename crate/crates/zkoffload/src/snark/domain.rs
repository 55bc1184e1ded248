//! Radix-2 evaluation domains over the scalar field: FFT, coset FFT, and
//! Lagrange-basis evaluation, sized for the constraint systems in this crate.

use crate::algebra::Fr;

/// Coset offset. Any element outside the 2-power subgroups works; 5 has full
/// multiplicative order alongside the two-adic tower, checked in tests.
const COSET_SHIFT: u64 = 5;

/// Multiplicative subgroup of power-of-two order with precomputed twiddle
/// scalars for interpolation and coset evaluation.
#[derive(Clone, Debug)]
pub struct EvaluationDomain {
    size: usize,
    log_size: u32,
    omega: Fr,
    omega_inv: Fr,
    size_inv: Fr,
    shift: Fr,
    shift_inv: Fr,
    zh_on_coset_inv: Fr,
}

impl EvaluationDomain {
    /// Smallest power-of-two domain holding at least `min_size` points.
    /// `None` when the field's two-adicity cannot accommodate it.
    pub fn new(min_size: usize) -> Option<Self> {
        if min_size == 0 {
            return None;
        }
        let size = min_size.next_power_of_two();
        let log_size = size.trailing_zeros();
        if log_size > Fr::TWO_ADICITY {
            return None;
        }
        // two_adic_root has order 2^TWO_ADICITY; step down to order `size`.
        let mut omega = Fr::two_adic_root_of_unity();
        for _ in log_size..Fr::TWO_ADICITY {
            omega = omega * omega;
        }
        let shift = Fr::from_u64(COSET_SHIFT);
        let zh_on_coset = shift.pow(&[size as u64]) - Fr::one();
        Some(EvaluationDomain {
            size,
            log_size,
            omega,
            omega_inv: omega.inverse().expect("root of unity is nonzero"),
            size_inv: Fr::from_u64(size as u64)
                .inverse()
                .expect("domain size is nonzero in the field"),
            shift,
            shift_inv: shift.inverse().expect("shift is nonzero"),
            zh_on_coset_inv: zh_on_coset
                .inverse()
                .expect("coset shift lies outside the subgroup"),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn omega(&self) -> Fr {
        self.omega
    }

    /// Domain points omega^0 .. omega^(size-1).
    pub fn elements(&self) -> Vec<Fr> {
        let mut out = Vec::with_capacity(self.size);
        let mut cur = Fr::one();
        for _ in 0..self.size {
            out.push(cur);
            cur *= self.omega;
        }
        out
    }

    /// Z_H(x) = x^size - 1.
    pub fn evaluate_vanishing(&self, x: Fr) -> Fr {
        x.pow(&[self.size as u64]) - Fr::one()
    }

    /// Z_H is constant on the coset; this is its inverse there.
    pub fn zh_on_coset_inv(&self) -> Fr {
        self.zh_on_coset_inv
    }

    /// Coefficients of Z_H, lowest first: [-1, 0, .., 0, 1].
    pub fn vanishing_polynomial(&self) -> Vec<Fr> {
        let mut t = vec![Fr::zero(); self.size + 1];
        t[0] = -Fr::one();
        t[self.size] = Fr::one();
        t
    }

    /// In-place coefficients -> evaluations at omega^j. Pads with zeros;
    /// panics if more than `size` coefficients are supplied.
    pub fn fft(&self, values: &mut Vec<Fr>) {
        assert!(values.len() <= self.size, "polynomial exceeds domain");
        values.resize(self.size, Fr::zero());
        fft_in_place(values, self.omega, self.log_size);
    }

    /// In-place evaluations at omega^j -> coefficients.
    pub fn ifft(&self, values: &mut Vec<Fr>) {
        assert_eq!(values.len(), self.size, "need one value per domain point");
        fft_in_place(values, self.omega_inv, self.log_size);
        for v in values.iter_mut() {
            *v *= self.size_inv;
        }
    }

    /// Coefficients -> evaluations at shift * omega^j.
    pub fn coset_fft(&self, values: &mut Vec<Fr>) {
        distribute_powers(values, self.shift);
        self.fft(values);
    }

    /// Evaluations at shift * omega^j -> coefficients.
    pub fn coset_ifft(&self, values: &mut Vec<Fr>) {
        self.ifft(values);
        distribute_powers(values, self.shift_inv);
    }

    /// All Lagrange basis polynomials evaluated at one point:
    /// L_j(tau) = omega^j (tau^size - 1) / (size (tau - omega^j)),
    /// degenerating to an indicator vector when tau lies in the domain.
    pub fn lagrange_coeffs_at(&self, tau: Fr) -> Vec<Fr> {
        let points = self.elements();
        let zh = self.evaluate_vanishing(tau);
        if zh.is_zero() {
            return points
                .iter()
                .map(|&w| if w == tau { Fr::one() } else { Fr::zero() })
                .collect();
        }
        let mut denoms: Vec<Fr> = points.iter().map(|&w| tau - w).collect();
        batch_invert(&mut denoms);
        let scale = zh * self.size_inv;
        points
            .iter()
            .zip(&denoms)
            .map(|(&w, &d)| scale * w * d)
            .collect()
    }
}

/// values[i] *= g^i.
fn distribute_powers(values: &mut [Fr], g: Fr) {
    let mut power = Fr::one();
    for v in values.iter_mut() {
        *v *= power;
        power *= g;
    }
}

/// Iterative Cooley-Tukey butterfly; `omega` has order exactly 2^log_n.
fn fft_in_place(a: &mut [Fr], omega: Fr, log_n: u32) {
    let n = a.len();
    debug_assert_eq!(n, 1 << log_n);
    if log_n == 0 {
        return;
    }
    for k in 0..n as u32 {
        let rk = k.reverse_bits() >> (32 - log_n);
        if k < rk {
            a.swap(k as usize, rk as usize);
        }
    }
    let mut m = 1usize;
    for _ in 0..log_n {
        let w_m = omega.pow(&[(n / (2 * m)) as u64]);
        for chunk in a.chunks_mut(2 * m) {
            let mut w = Fr::one();
            for j in 0..m {
                let t = chunk[j + m] * w;
                chunk[j + m] = chunk[j] - t;
                chunk[j] += t;
                w *= w_m;
            }
        }
        m *= 2;
    }
}

/// Montgomery batch inversion; all entries must be nonzero.
pub(crate) fn batch_invert(values: &mut [Fr]) {
    let mut prefix = Vec::with_capacity(values.len());
    let mut acc = Fr::one();
    for v in values.iter() {
        prefix.push(acc);
        acc *= *v;
    }
    let mut inv = acc.inverse().expect("batch_invert requires nonzero entries");
    for (v, p) in values.iter_mut().zip(prefix).rev() {
        let out = inv * p;
        inv *= *v;
        *v = out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn naive_dft(coeffs: &[Fr], omega: Fr) -> Vec<Fr> {
        let n = coeffs.len();
        (0..n)
            .map(|j| {
                let x = omega.pow(&[j as u64]);
                // Horner, highest coefficient first.
                coeffs
                    .iter()
                    .rev()
                    .fold(Fr::zero(), |acc, &c| acc * x + c)
            })
            .collect()
    }

    fn eval_poly(coeffs: &[Fr], x: Fr) -> Fr {
        coeffs.iter().rev().fold(Fr::zero(), |acc, &c| acc * x + c)
    }

    #[test]
    fn sizes_round_up_to_powers_of_two() {
        assert_eq!(EvaluationDomain::new(1).unwrap().size(), 1);
        assert_eq!(EvaluationDomain::new(5).unwrap().size(), 8);
        assert_eq!(EvaluationDomain::new(64).unwrap().size(), 64);
        assert!(EvaluationDomain::new(0).is_none());
        assert!(EvaluationDomain::new((1 << 28) + 1).is_none());
    }

    #[test]
    fn omega_has_exact_order() {
        for log in [0u32, 1, 3, 6] {
            let d = EvaluationDomain::new(1 << log).unwrap();
            assert_eq!(d.omega().pow(&[d.size() as u64]), Fr::one());
            if log > 0 {
                assert_ne!(d.omega().pow(&[(d.size() / 2) as u64]), Fr::one());
            }
        }
    }

    #[test]
    fn fft_matches_naive_dft() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for size in [1usize, 2, 4, 8, 32] {
            let d = EvaluationDomain::new(size).unwrap();
            let coeffs: Vec<Fr> = (0..size).map(|_| Fr::random(&mut rng)).collect();
            let mut got = coeffs.clone();
            d.fft(&mut got);
            assert_eq!(got, naive_dft(&coeffs, d.omega()), "size {size}");
        }
    }

    #[test]
    fn ifft_inverts_fft() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let d = EvaluationDomain::new(16).unwrap();
        let coeffs: Vec<Fr> = (0..16).map(|_| Fr::random(&mut rng)).collect();
        let mut v = coeffs.clone();
        d.fft(&mut v);
        d.ifft(&mut v);
        assert_eq!(v, coeffs);
    }

    #[test]
    fn coset_fft_evaluates_on_the_shifted_domain() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let d = EvaluationDomain::new(8).unwrap();
        let coeffs: Vec<Fr> = (0..8).map(|_| Fr::random(&mut rng)).collect();
        let mut got = coeffs.clone();
        d.coset_fft(&mut got);
        let shift = Fr::from_u64(COSET_SHIFT);
        for (j, point) in d.elements().into_iter().enumerate() {
            assert_eq!(got[j], eval_poly(&coeffs, shift * point));
        }
        let mut back = got;
        d.coset_ifft(&mut back);
        assert_eq!(back, coeffs);
    }

    #[test]
    fn vanishing_is_zero_on_domain_and_constant_on_coset() {
        let d = EvaluationDomain::new(8).unwrap();
        let shift = Fr::from_u64(COSET_SHIFT);
        for point in d.elements() {
            assert!(d.evaluate_vanishing(point).is_zero());
            let on_coset = d.evaluate_vanishing(shift * point);
            assert_eq!(on_coset * d.zh_on_coset_inv(), Fr::one());
        }
        let t = d.vanishing_polynomial();
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let x = Fr::random(&mut rng);
        assert_eq!(eval_poly(&t, x), d.evaluate_vanishing(x));
    }

    #[test]
    fn coset_shift_escapes_every_supported_subgroup() {
        // 5^(2^28) != 1 implies 5 is outside all smaller 2-power subgroups.
        let shift = Fr::from_u64(COSET_SHIFT);
        let mut acc = shift;
        for _ in 0..Fr::TWO_ADICITY {
            acc = acc * acc;
        }
        assert_ne!(acc, Fr::one());
    }

    #[test]
    fn lagrange_kernel_matches_direct_product_formula() {
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let d = EvaluationDomain::new(8).unwrap();
        let points = d.elements();
        let tau = Fr::random(&mut rng);
        let got = d.lagrange_coeffs_at(tau);
        for j in 0..8 {
            let mut expect = Fr::one();
            for k in 0..8 {
                if k != j {
                    expect *= (tau - points[k]) * (points[j] - points[k]).inverse().unwrap();
                }
            }
            assert_eq!(got[j], expect, "basis polynomial {j}");
        }
    }

    #[test]
    fn lagrange_at_domain_points_is_an_indicator() {
        let d = EvaluationDomain::new(8).unwrap();
        let points = d.elements();
        let got = d.lagrange_coeffs_at(points[3]);
        for (j, v) in got.iter().enumerate() {
            let expect = if j == 3 { Fr::one() } else { Fr::zero() };
            assert_eq!(*v, expect);
        }
    }

    #[test]
    fn lagrange_interpolation_reconstructs_values() {
        // sum_j values[j] L_j(tau) equals the interpolated polynomial at tau.
        let mut rng = ChaCha20Rng::seed_from_u64(16);
        let d = EvaluationDomain::new(16).unwrap();
        let values: Vec<Fr> = (0..16).map(|_| Fr::random(&mut rng)).collect();
        let tau = Fr::random(&mut rng);
        let lag = d.lagrange_coeffs_at(tau);
        let via_kernel: Fr = values
            .iter()
            .zip(&lag)
            .fold(Fr::zero(), |acc, (&v, &l)| acc + v * l);
        let mut coeffs = values;
        d.ifft(&mut coeffs);
        assert_eq!(via_kernel, eval_poly(&coeffs, tau));
    }

    #[test]
    fn batch_invert_matches_single_inversions() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let values: Vec<Fr> = (0..20).map(|_| Fr::random(&mut rng)).collect();
        let mut got = values.clone();
        batch_invert(&mut got);
        for (g, v) in got.iter().zip(&values) {
            assert_eq!(*g, v.inverse().unwrap());
        }
    }
}
