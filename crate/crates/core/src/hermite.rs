//! Classical Hermite polynomials `H_m` at real and complex arguments.
//!
//! The production path is the three-term recurrence
//! `H_{m+1}(z) = 2z H_m(z) - 2m H_{m-1}(z)`. The explicit finite sum is kept
//! as an independent oracle; it cancels catastrophically once `|z|` and `m`
//! grow, so it should not be used past `m ~ 12`.
//!
//! Unnormalized values overflow `f64` for large degrees (`|H_m(z)|` grows
//! like `sqrt(2^m m!)`), so [`MAX_DEGREE`] is the ceiling the CLI enforces.
//! Sums over many degrees (Mehler series, kernel expansions) go through the
//! normalized sequence `H_m / sqrt(2^m m!)` instead.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest degree the CLI accepts for unnormalized evaluations.
pub const MAX_DEGREE: usize = 64;

/// Default truncation order of the Mehler series.
pub const DEFAULT_MEHLER_TERMS: usize = 80;

/// `H_0(z), ..., H_max_degree(z)` at a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSeq {
    values: Vec<Complex64>,
}

impl HermiteSeq {
    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, m: usize) -> Complex64 {
        self.values[m]
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

pub fn hermite_seq(max_degree: usize, z: Complex64) -> HermiteSeq {
    let mut values = Vec::with_capacity(max_degree + 1);
    values.push(Complex64::new(1.0, 0.0));
    if max_degree >= 1 {
        values.push(2.0 * z);
    }
    for m in 1..max_degree {
        let next = 2.0 * z * values[m] - 2.0 * m as f64 * values[m - 1];
        values.push(next);
    }
    HermiteSeq { values }
}

/// `H_m(z)` by the explicit sum `m! sum_k (-1)^k / k! (2z)^(m-2k) / (m-2k)!`.
pub fn hermite_explicit(m: usize, z: Complex64) -> Complex64 {
    let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
    let two_z = 2.0 * z;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=m / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / (fact(k) * fact(m - 2 * k)) * two_z.powu((m - 2 * k) as u32);
    }
    fact(m) * sum
}

/// Monomial coefficients of `H_m`: entry `j` multiplies `z^j`.
///
/// Coefficients are integers; they are exact in `f64` up to `m ~ 25` and
/// correctly rounded beyond.
pub fn hermite_coefficients(m: usize) -> Vec<f64> {
    let mut coeffs = vec![0.0; m + 1];
    // Walk k upward from the leading term 2^m, using the exact ratio
    // c_{m-2k-2} / c_{m-2k} = -(m-2k)(m-2k-1) / (4(k+1)).
    let mut c = 2f64.powi(m as i32);
    let mut k = 0;
    loop {
        let j = m - 2 * k;
        coeffs[j] = c;
        if j < 2 {
            break;
        }
        c *= -((j * (j - 1)) as f64) / (4.0 * (k + 1) as f64);
        k += 1;
    }
    coeffs
}

/// `h_m(z) = H_m(z) / sqrt(2^m m!)` for `m = 0..=max_degree`.
///
/// Recurrence `h_{m+1} = sqrt(2/(m+1)) z h_m - sqrt(m/(m+1)) h_{m-1}`; stays in
/// range for degrees in the hundreds at moderate `|z|`.
pub fn hermite_normalized_seq(max_degree: usize, z: Complex64) -> Vec<Complex64> {
    let mut values = Vec::with_capacity(max_degree + 1);
    values.push(Complex64::new(1.0, 0.0));
    if max_degree >= 1 {
        values.push(2f64.sqrt() * z);
    }
    for m in 1..max_degree {
        let mf = m as f64;
        let next = (2.0 / (mf + 1.0)).sqrt() * z * values[m]
            - (mf / (mf + 1.0)).sqrt() * values[m - 1];
        values.push(next);
    }
    values
}

/// Hermite functions `f_0(t), ..., f_max(t)` with
/// `f_m(t) = exp(-t^2/2) H_m(t) / sqrt(2^m m! sqrt(pi))`.
pub fn hermite_functions(max_degree: usize, t: f64) -> Vec<f64> {
    let mut values = Vec::with_capacity(max_degree + 1);
    values.push(PI.powf(-0.25) * (-0.5 * t * t).exp());
    if max_degree >= 1 {
        values.push(2f64.sqrt() * t * values[0]);
    }
    for m in 1..max_degree {
        let mf = m as f64;
        let next =
            (2.0 / (mf + 1.0)).sqrt() * t * values[m] - (mf / (mf + 1.0)).sqrt() * values[m - 1];
        values.push(next);
    }
    values
}

/// The orthonormal basis `f_m` of `L^2(R)`.
pub fn phys_basis_f(m: usize, t: f64) -> f64 {
    hermite_functions(m, t)[m]
}

/// The orthonormal basis `g^nu_m(x) = (nu/pi)^(1/4) H_m(sqrt(nu) x) / sqrt(2^m m!)`
/// of `L^2(R, exp(-nu x^2) dx)`.
pub fn scaled_basis_g(m: usize, x: f64, nu: f64) -> Result<f64> {
    Ok(scaled_basis_g_seq(m, x, nu)?[m])
}

/// `g^nu_0(x), ..., g^nu_max(x)`.
pub fn scaled_basis_g_seq(max_degree: usize, x: f64, nu: f64) -> Result<Vec<f64>> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")));
    }
    let pre = (nu / PI).powf(0.25);
    Ok(hermite_normalized_seq(max_degree, Complex64::new(nu.sqrt() * x, 0.0))
        .into_iter()
        .map(|h| pre * h.re)
        .collect())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("lambda must lie in (0,1), got {lambda}")))
    }
}

/// Closed form of the Mehler kernel
/// `(1-l^2)^(-1/2) exp((-l^2 (t^2+z^2) + 2 l t z) / (1-l^2))`.
pub fn mehler_closed(lambda: f64, t: Complex64, z: Complex64) -> Result<Complex64> {
    check_lambda(lambda)?;
    let d = 1.0 - lambda * lambda;
    let arg = (-lambda * lambda * (t * t + z * z) + 2.0 * lambda * t * z) / d;
    Ok(arg.exp() / d.sqrt())
}

/// Partial sum `sum_{m=0}^{terms} l^m H_m(t) H_m(z) / (2^m m!)`.
pub fn mehler_series(lambda: f64, t: Complex64, z: Complex64, terms: usize) -> Result<Complex64> {
    check_lambda(lambda)?;
    let ht = hermite_normalized_seq(terms, t);
    let hz = hermite_normalized_seq(terms, z);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = 1.0;
    for m in 0..=terms {
        sum += pow * ht[m] * hz[m];
        pow *= lambda;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn low_degree_values() {
        let seq = hermite_seq(0, c(0.3, -1.0));
        assert_eq!(seq.values(), &[c(1.0, 0.0)]);
        let seq = hermite_seq(1, c(2.0, 1.0));
        assert_eq!(seq.values(), &[c(1.0, 0.0), c(4.0, 2.0)]);
        assert_eq!(hermite_seq(4, c(0.0, 0.0)).get(4), c(12.0, 0.0));
        assert_eq!(hermite_seq(7, c(1.0, 1.0)).max_degree(), 7);
    }

    #[test]
    fn explicit_sum_values() {
        assert_eq!(hermite_explicit(0, c(3.0, -2.0)), c(1.0, 0.0));
        assert_eq!(hermite_explicit(2, c(1.0, 0.0)), c(2.0, 0.0));
        assert_eq!(hermite_explicit(4, c(0.0, 0.0)), c(12.0, 0.0));
        assert_eq!(hermite_coefficients(3), vec![0.0, -12.0, 0.0, 8.0]);
        assert_eq!(hermite_coefficients(4), vec![12.0, 0.0, -48.0, 0.0, 16.0]);
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        let z = c(1.3, 0.7);
        let seq = hermite_seq(12, z);
        for m in 0..=12 {
            let e = hermite_explicit(m, z);
            assert!((seq.get(m) - e).norm() <= 1e-12 * (1.0 + e.norm()), "m={m}");
        }
        // H_10(1.3 + 0.7i), frozen from an mpmath evaluation at 50 digits.
        let h10 = seq.get(10);
        assert_abs_diff_eq!(h10.re, -186_760.027_176_960_1, epsilon = 1e-7);
        assert_abs_diff_eq!(h10.im, -587_301.229_114_163_1, epsilon = 1e-7);
    }

    #[test]
    fn normalized_sequence_agrees() {
        let z = c(-0.8, 1.1);
        let raw = hermite_seq(20, z);
        let norm = hermite_normalized_seq(20, z);
        let mut scale = 1.0f64;
        for m in 0..=20 {
            if m > 0 {
                scale *= 2.0 * m as f64;
            }
            let expect = raw.get(m) / scale.sqrt();
            assert!((norm[m] - expect).norm() < 1e-12 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn bases_at_origin() {
        assert_abs_diff_eq!(phys_basis_f(0, 0.0), PI.powf(-0.25), epsilon = 1e-15);
        assert_eq!(phys_basis_f(1, 0.0), 0.0);
        assert_abs_diff_eq!(scaled_basis_g(0, 0.7, 1.0).unwrap(), PI.powf(-0.25), epsilon = 1e-15);
        for m in (1..12).step_by(2) {
            assert_eq!(scaled_basis_g(m, 0.0, 0.37).unwrap(), 0.0);
        }
        assert!(scaled_basis_g(1, 0.0, 0.0).is_err());
        assert!(scaled_basis_g(1, 0.0, -2.0).is_err());
    }

    #[test]
    fn hermite_function_matches_definition() {
        let t = 1.7;
        let h = hermite_seq(6, c(t, 0.0));
        let fact = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0];
        for m in 0..=6 {
            let expect = (-t * t / 2.0).exp() * h.get(m).re
                / (2f64.powi(m as i32) * fact[m] * PI.sqrt()).sqrt();
            assert_abs_diff_eq!(phys_basis_f(m, t), expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn mehler_examples() {
        let zero = c(0.0, 0.0);
        assert_abs_diff_eq!(
            mehler_closed(0.5, zero, zero).unwrap().re,
            1.0 / 0.75f64.sqrt(),
            epsilon = 1e-15
        );
        let tiny = mehler_closed(1e-9, c(1.2, -0.4), c(0.3, 0.9)).unwrap();
        assert!((tiny - 1.0).norm() < 1e-8);
        for lambda in [0.2, 0.7] {
            assert_eq!(mehler_series(lambda, c(1.0, 2.0), c(-3.0, 0.5), 0).unwrap(), c(1.0, 0.0));
        }
        let series = mehler_series(0.5, c(1.0, 0.0), c(0.5, 0.0), 80).unwrap();
        let closed = mehler_closed(0.5, c(1.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((series - closed).norm() < 1e-10);
        let series = mehler_series(0.5, zero, zero, 80).unwrap();
        assert!((series - 1.0 / 0.75f64.sqrt()).norm() < 1e-10);
    }

    #[test]
    fn mehler_rejects_lambda_outside_unit_interval() {
        let z = c(0.0, 0.0);
        for lambda in [0.0, 1.0, -0.3, 1.5, f64::NAN] {
            assert!(mehler_closed(lambda, z, z).is_err());
            assert!(mehler_series(lambda, z, z, 10).is_err());
        }
    }

    #[test]
    fn mehler_partial_sums_converge_monotonically() {
        let grid: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
        let sup_err = |n: usize| {
            let mut worst = 0.0f64;
            for &t in &grid {
                for &z in &grid {
                    let (t, z) = (c(t, 0.0), c(z, 0.0));
                    let d = mehler_series(0.5, t, z, n).unwrap() - mehler_closed(0.5, t, z).unwrap();
                    worst = worst.max(d.norm());
                }
            }
            worst
        };
        let errs: Vec<f64> = (1..=8).map(|k| sup_err(10 * k)).collect();
        for w in errs.windows(2) {
            // non-increasing up to the rounding floor
            assert!(w[1] <= w[0] + 1e-14, "{errs:?}");
        }
        assert!(errs[7] < 1e-12);
    }
}
