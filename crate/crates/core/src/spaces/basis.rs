use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ExpPoly, QuadExponent, SParam};
use crate::bipoly::{nabla_power, BiPoly, OperatorParams};
use crate::hermite::{hermite_coefficients, hermite_normalized_seq};

/// Default ceiling on `m` for the symbolic `psi_{m,n}` (monomial coefficients
/// of `H_m` lose relative accuracy quickly beyond it).
pub const PSI_MN_MAX_M: usize = 16;
/// Default ceiling on `n` for the symbolic `psi_{m,n}`.
pub const PSI_MN_MAX_N: usize = 8;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `1 / sqrt(2^m m!)`.
fn inv_hermite_norm(m: usize) -> f64 {
    (1..=m).map(|k| 1.0 / (2.0 * k as f64).sqrt()).product()
}

/// `((1-s)/(pi sqrt s))^(1/2)`, the `m = 0` normalization of `psi_m`.
fn psi_norm(sp: &SParam) -> f64 {
    ((1.0 - sp.s()) / (PI * sp.s().sqrt())).sqrt()
}

/// `((1-s)/(pi nu^n n! sqrt s))^(1/2)`.
fn psi_mn_norm(n: usize, sp: &SParam) -> f64 {
    let nfact: f64 = (1..=n).map(|k| k as f64).product();
    ((1.0 - sp.s()) / (PI * sp.nu().powi(n as i32) * nfact * sp.s().sqrt())).sqrt()
}

/// `psi^s_m(z) = ((1-s)/(pi sqrt s))^(1/2) ((1-s)/(1+s))^(m/2) e^{-z^2/2} H_m(z) / sqrt(2^m m!)`.
pub fn psi(m: usize, z: Complex64, sp: &SParam) -> Complex64 {
    psi_seq(m, z, sp)[m]
}

/// `psi^s_0(z), ..., psi^s_max(z)` through the normalized Hermite recurrence.
pub fn psi_seq(max_m: usize, z: Complex64, sp: &SParam) -> Vec<Complex64> {
    let base = psi_norm(sp) * (-0.5 * z * z).exp();
    let lambda = sp.lambda();
    let mut pow = 1.0;
    hermite_normalized_seq(max_m, z)
        .into_iter()
        .map(|h| {
            let v = base * pow * h;
            pow *= lambda;
            v
        })
        .collect()
}

/// `phi^s_m(z) = (pi m!)^(-1/2) nu^((m+1)/2) e^{-alpha z^2} z^m`.
pub fn phi(m: usize, z: Complex64, sp: &SParam) -> Complex64 {
    let nu = sp.nu();
    let mut v = (nu / PI).sqrt() * (-sp.alpha() * z * z).exp();
    for k in 1..=m {
        v *= (nu / k as f64).sqrt() * z;
    }
    v
}

/// `psi~^s_m = e^{alpha z^2} psi^s_m`, orthonormal in `L^2(C, e^{-nu|z|^2})`.
pub fn psi_tilde(m: usize, z: Complex64, sp: &SParam) -> Complex64 {
    // e^{alpha z^2} e^{-z^2/2} = e^{gamma z^2}, combined before exponentiating.
    let h = hermite_normalized_seq(m, z)[m];
    psi_norm(sp) * sp.lambda().powi(m as i32) * (sp.gamma() * z * z).exp() * h
}

/// Coefficients of `nabla^n_{nu,gamma} H_m` in the basis `L^k H_j`, where
/// `L = nu zbar - 2 gamma z`. Uses
/// `nabla(L^k H_j) = 2 gamma k L^(k-1) H_j - 2j L^k H_(j-1) + L^(k+1) H_j`.
fn nabla_hermite_expansion(m: usize, n: usize, gamma: f64) -> BTreeMap<(usize, usize), f64> {
    let mut cur = BTreeMap::new();
    cur.insert((m, 0usize), 1.0);
    for _ in 0..n {
        let mut next: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (&(j, k), &a) in &cur {
            if k > 0 {
                *next.entry((j, k - 1)).or_default() += 2.0 * gamma * k as f64 * a;
            }
            if j > 0 {
                *next.entry((j - 1, k)).or_default() -= 2.0 * j as f64 * a;
            }
            *next.entry((j, k + 1)).or_default() += a;
        }
        cur = next;
    }
    cur
}

/// Pointwise `psi^s_{m,n}(z, zbar)`.
///
/// Evaluates `nabla^n H_m` through its expansion over `L^k H_j` with the
/// normalized Hermite recurrence, so it stays accurate for `m` in the
/// hundreds where the monomial form of [`psi_mn_exppoly`] would cancel.
pub fn psi_mn(m: usize, n: usize, z: Complex64, sp: &SParam) -> Complex64 {
    let h = hermite_normalized_seq(m, z);
    psi_mn_from_normalized(m, n, z, sp, &h)
}

/// `psi^s_{0,n}(z), ..., psi^s_{max_m,n}(z)`.
pub fn psi_mn_seq(max_m: usize, n: usize, z: Complex64, sp: &SParam) -> Vec<Complex64> {
    let h = hermite_normalized_seq(max_m, z);
    (0..=max_m).map(|m| psi_mn_from_normalized(m, n, z, sp, &h)).collect()
}

fn psi_mn_from_normalized(
    m: usize,
    n: usize,
    z: Complex64,
    sp: &SParam,
    h: &[Complex64],
) -> Complex64 {
    let l = sp.nu() * z.conj() - 2.0 * sp.gamma() * z;
    let mut lpow = vec![c(1.0)];
    for k in 0..n {
        lpow.push(lpow[k] * l);
    }
    // H_j / sqrt(2^m m!) = h_j * sqrt(2^j j! / (2^m m!)).
    let mut ratio = vec![1.0; m + 1];
    for j in (0..m).rev() {
        ratio[j] = ratio[j + 1] / (2.0 * (j + 1) as f64).sqrt();
    }
    let sum: Complex64 = nabla_hermite_expansion(m, n, sp.gamma())
        .into_iter()
        .map(|((j, k), a)| a * ratio[j] * lpow[k] * h[j])
        .sum();
    psi_mn_norm(n, sp) * sp.lambda().powi(m as i32) * (-0.5 * z * z).exp() * sum
}

/// `psi^s_m` as `P(z) e^{-z^2/2}` with `P` the scaled Hermite polynomial.
pub fn psi_exppoly(m: usize, sp: &SParam) -> ExpPoly {
    let scale = psi_norm(sp) * sp.lambda().powi(m as i32) * inv_hermite_norm(m);
    ExpPoly::new(
        BiPoly::from_holomorphic(&hermite_coefficients(m)).scale(c(scale)),
        QuadExponent::holomorphic_square(-0.5),
    )
}

pub fn psi_tilde_exppoly(m: usize, sp: &SParam) -> ExpPoly {
    psi_exppoly(m, sp).m_gamma(sp.alpha())
}

/// `phi^s_m` with exponent `-alpha z^2`.
pub fn phi_exppoly(m: usize, sp: &SParam) -> ExpPoly {
    let mfact: f64 = (1..=m).map(|k| k as f64).product();
    let coef = sp.nu().powf((m as f64 + 1.0) / 2.0) / (PI * mfact).sqrt();
    ExpPoly::new(
        BiPoly::monomial(m as u32, 0, c(coef)),
        QuadExponent::holomorphic_square(-sp.alpha()),
    )
}

/// Normalized monomial `sqrt(nu^(m+1) / (pi m!)) z^m` of the Fock space
/// `F^{2,nu}(C)`.
pub fn fock_exppoly(m: usize, nu: f64) -> ExpPoly {
    let mfact: f64 = (1..=m).map(|k| k as f64).product();
    let coef = (nu.powi(m as i32 + 1) / (PI * mfact)).sqrt();
    ExpPoly::new(BiPoly::monomial(m as u32, 0, c(coef)), QuadExponent::zero())
}

/// Symbolic `psi^s_{m,n}`: exponent `-z^2/2`, polynomial part
/// `C_{m,n} nabla^n_{nu, alpha-1/2} H_m` with the normalization of the
/// polyanalytic basis.
pub fn psi_mn_exppoly(m: usize, n: usize, sp: &SParam) -> ExpPoly {
    let params = OperatorParams::new(sp.nu(), c(sp.gamma())).expect("nu > 0 for valid SParam");
    let hm = BiPoly::from_holomorphic(&hermite_coefficients(m));
    let scale = psi_mn_norm(n, sp) * sp.lambda().powi(m as i32) * inv_hermite_norm(m);
    ExpPoly::new(
        nabla_power(&hm, &params, n).scale(c(scale)),
        QuadExponent::holomorphic_square(-0.5),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_seq;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn values_at_origin() {
        let sp = SParam::new(0.4).unwrap();
        let zero = z(0.0, 0.0);
        let n0 = ((1.0 - 0.4) / (PI * 0.4f64.sqrt())).sqrt();
        assert!((psi(0, zero, &sp) - n0).norm() < 1e-15);
        assert_eq!(psi(1, zero, &sp), z(0.0, 0.0));
        assert!((phi(0, zero, &sp) - (sp.nu() / PI).sqrt()).norm() < 1e-15);
        assert!((psi_tilde(0, zero, &sp) - n0).norm() < 1e-15);
    }

    #[test]
    fn psi_matches_definition() {
        let sp = SParam::new(0.6).unwrap();
        let p = z(0.8, -0.45);
        let h = hermite_seq(9, p);
        let mut norm2 = 1.0;
        for m in 0..=9 {
            if m > 0 {
                norm2 *= 2.0 * m as f64;
            }
            let expect = ((1.0 - 0.6) / (PI * 0.6f64.sqrt())).sqrt()
                * ((1.0 - 0.6) / (1.0 + 0.6f64)).powf(m as f64 / 2.0)
                * (-p * p / 2.0).exp()
                * h.get(m)
                / norm2.sqrt();
            assert!((psi(m, p, &sp) - expect).norm() < 1e-14);
            assert!((psi_exppoly(m, &sp).eval(p) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn psi_tilde_is_m_alpha_psi() {
        let sp = SParam::new(0.3).unwrap();
        let p = z(-1.1, 0.6);
        for m in 0..8 {
            let expect = super::super::m_alpha_factor(p, &sp, 1) * psi(m, p, &sp);
            assert!((psi_tilde(m, p, &sp) - expect).norm() < 1e-13 * (1.0 + expect.norm()));
            assert!((psi_tilde_exppoly(m, &sp).eval(p) - expect).norm() < 1e-13 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn phi_exppoly_matches_pointwise() {
        let sp = SParam::new(0.5).unwrap();
        let p = z(0.7, 1.2);
        for m in 0..10 {
            assert!((phi_exppoly(m, &sp).eval(p) - phi(m, p, &sp)).norm() < 1e-14);
            // M_alpha phi_m is the normalized Fock monomial.
            let fock = fock_exppoly(m, sp.nu());
            let lifted = phi_exppoly(m, &sp).m_alpha_lift(sp.alpha());
            assert!(lifted.poly.relative_distance(&fock.poly) < 1e-15);
            assert!(lifted.exponent.zz.norm() < 1e-16);
        }
    }

    trait Lift {
        fn m_alpha_lift(&self, alpha: f64) -> ExpPoly;
    }
    impl Lift for ExpPoly {
        fn m_alpha_lift(&self, alpha: f64) -> ExpPoly {
            self.m_gamma(alpha)
        }
    }

    #[test]
    fn psi_m0_is_psi_m() {
        let sp = SParam::new(0.45).unwrap();
        let p = z(0.2, -0.9);
        for m in 0..=10 {
            let sym = psi_mn_exppoly(m, 0, &sp);
            assert_eq!(sym.poly.degree_zbar(), Some(0));
            assert!((sym.eval(p) - psi(m, p, &sp)).norm() < 1e-14);
            assert!((psi_mn(m, 0, p, &sp) - psi(m, p, &sp)).norm() < 1e-14);
        }
    }

    #[test]
    fn psi_01_single_nabla_step() {
        let sp = SParam::new(0.5).unwrap();
        let sym = psi_mn_exppoly(0, 1, &sp);
        let pre = ((1.0 - 0.5) / (PI * sp.nu() * 0.5f64.sqrt())).sqrt();
        let expect = BiPoly::from_terms([
            (0, 1, c(pre * sp.nu())),
            (1, 0, c(-2.0 * pre * sp.gamma())),
        ]);
        assert!(sym.poly.relative_distance(&expect) < 1e-15);
        assert_eq!(sym.exponent, QuadExponent::holomorphic_square(-0.5));
    }

    #[test]
    fn stable_and_symbolic_polyanalytic_agree() {
        for s in [0.3, 0.5, 0.7] {
            let sp = SParam::new(s).unwrap();
            for &p in &[z(0.3, -0.2), z(-1.2, 0.9), z(1.5, 1.1)] {
                for n in 0..=4 {
                    let seq = psi_mn_seq(12, n, p, &sp);
                    for m in 0..=12 {
                        let sym = psi_mn_exppoly(m, n, &sp).eval(p);
                        let scale = 1.0 + sym.norm();
                        assert!((seq[m] - sym).norm() < 1e-11 * scale, "s={s} m={m} n={n}");
                        assert!((psi_mn(m, n, p, &sp) - seq[m]).norm() < 1e-15 * scale);
                    }
                }
            }
        }
    }

    #[test]
    fn hermite_expansion_n1() {
        // nabla H_m = -2m H_(m-1) + L H_m
        let e = nabla_hermite_expansion(4, 1, 0.3);
        assert_eq!(e.get(&(3, 0)), Some(&-8.0));
        assert_eq!(e.get(&(4, 1)), Some(&1.0));
        assert_eq!(e.len(), 2);
    }
}
