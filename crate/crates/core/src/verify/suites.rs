//! The checks behind `verify`, grouped by [`Suite`].

use std::f64::consts::PI;
use std::thread;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::config::{Suite, SuiteConfig};
use super::report::{CheckReport, Report};
use crate::bipoly::{complex_hermite_rodrigues, delta_nu_apply, nabla_power, BiPoly, OperatorParams};
use crate::error::{Error, Result};
use crate::hermite::{hermite_explicit, hermite_seq, mehler_closed, mehler_series, phys_basis_f};
use crate::quadrature::{
    exactness_order, gauss_hermite, gram, gram_cross, identity_deviation, inner_hs, Declared1D,
    GaussianFn1D, Quad1D, QuadRule2D,
};
use crate::spaces::{
    hnn_derivative_identity, hnn_nabla_identity, kernel_K, kernel_n_series, kernel_series, phi, psi,
    psi_exppoly, psi_mn, psi_mn_exppoly, psi_tilde_exppoly, DerivativeSign, ExpPoly, PolyKernel,
    QuadExponent, SParam, DEFAULT_SERIES_TERMS,
};
use crate::transforms::{
    apply_Bs, apply_Bs_inverse, apply_Btilde, apply_Sn, apply_Sn_conjugated, apply_Wn, apply_Wn_inverse,
    apply_Wn_inverse_as_printed, check_n_independence, g_declared, kernel_S_closed, kernel_S_series,
    standard_image_gram, BsImage, HermiteConvention, NIndependence, SnImage, StandardBnImage, WnImage,
};

const MEHLER_LAMBDAS: [f64; 3] = [0.3, 0.5, 0.6];
const HERMITE_POINTS: usize = 100;
const SYMBOLIC_MAX: usize = 6;
const EXTENDED_SERIES_TERMS: usize = 200;

/// Runs the selected suites and returns every check, sorted by name and
/// parameters. Configuration errors are returned before anything runs;
/// numerical failures become failing checks.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let mut jobs: Vec<Box<dyn FnOnce() -> Vec<CheckReport> + Send + '_>> = Vec::new();
    for suite in suites {
        match suite {
            Suite::Hermite => jobs.push(Box::new(move || vec![hermite_cross_oracle(config)])),
            Suite::Mehler => {
                for lambda in MEHLER_LAMBDAS {
                    jobs.push(Box::new(move || vec![mehler(config, lambda)]));
                }
            }
            _ => {
                for &s in &config.s_values {
                    // validated above
                    let sp = SParam::new(s)?;
                    jobs.push(Box::new(move || per_s(suite, config, &sp)));
                }
            }
        }
    }
    let mut checks: Vec<CheckReport> = thread::scope(|scope| {
        let handles: Vec<_> = jobs.into_iter().map(|job| scope.spawn(job)).collect();
        handles.into_iter().flat_map(|h| h.join().expect("check thread panicked")).collect()
    });
    checks.sort_by_key(CheckReport::sort_key);
    Ok(checks)
}

/// [`run_suite`] wrapped into a [`Report`] echoing the configuration.
pub fn run_report(config: &SuiteConfig) -> Result<Report> {
    let checks = run_suite(config)?;
    let names = config.suites.iter().map(|s| s.name().to_string()).collect();
    let echo = serde_json::to_value(config).map_err(|e| Error::Config(e.to_string()))?;
    Ok(Report::new(names, echo, checks))
}

fn per_s(suite: Suite, cfg: &SuiteConfig, sp: &SParam) -> Vec<CheckReport> {
    match suite {
        Suite::Gram => gram_checks(cfg, sp),
        Suite::Kernels => kernel_checks(cfg, sp),
        Suite::Reproducing => reproducing_checks(cfg, sp),
        Suite::Transforms => transform_checks(cfg, sp),
        Suite::Eigen => eigen_checks(cfg, sp),
        Suite::Exploratory => exploratory_checks(cfg, sp),
        Suite::Hermite | Suite::Mehler => Vec::new(),
    }
}

/// Runs `f` and turns its maximum error into a report.
fn check<F>(cfg: &SuiteConfig, name: &str, exploratory: bool, params: Value, f: F) -> CheckReport
where
    F: FnOnce() -> Result<f64>,
{
    let start = Instant::now();
    let tol = cfg.tolerance(name);
    let outcome = f();
    let err = *outcome.as_ref().unwrap_or(&f64::INFINITY);
    let mut report = if exploratory {
        CheckReport::exploratory(name, err, tol)
    } else {
        CheckReport::gated(name, err, tol)
    };
    if let Value::Object(map) = params {
        for (k, v) in map {
            report = report.with_param(k, v);
        }
    }
    if let Err(e) = outcome {
        report = report.with_param("error", e.to_string());
    }
    report.with_time_ms(start.elapsed().as_secs_f64() * 1e3)
}

fn rng(cfg: &SuiteConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

/// `count` points uniform in the disk `|z| <= radius`.
fn disk_points(rng: &mut ChaCha8Rng, count: usize, radius: f64) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
        })
        .collect()
}

fn unit_coeffs(rng: &mut ChaCha8Rng, count: usize) -> Vec<Complex64> {
    (0..count).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            a * (1.0 - f) + b * f
        })
        .collect()
}

/// `nx * ny` points of the square `[-h, h]^2`.
fn square_grid(h: f64, n: usize) -> Vec<Complex64> {
    let xs = linspace(-h, h, n);
    xs.iter().flat_map(|&y| xs.iter().map(move |&x| Complex64::new(x, y))).collect()
}

/// Points with `|z| <= r`: the origin and eight on the circle.
fn disk_probe(r: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    out.extend((0..8).map(|k| Complex64::from_polar(r, k as f64 * PI / 4.0)));
    out
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    // NaN propagates so that it can never pass
    it.into_iter().fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn try_max<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut worst = 0.0;
    for v in it {
        worst = max_of([worst, v?]);
    }
    Ok(worst)
}

// ---------------------------------------------------------------- hermite

fn hermite_cross_oracle(cfg: &SuiteConfig) -> CheckReport {
    let max_m = cfg.max_m;
    let params = json!({ "max_m": max_m, "points": HERMITE_POINTS, "radius": 3.0, "seed": cfg.seed });
    check(cfg, "hermite_cross_oracle", false, params, || {
        let pts = disk_points(&mut rng(cfg, 1), HERMITE_POINTS, 3.0);
        Ok(max_of(pts.iter().flat_map(|&z| {
            let seq = hermite_seq(max_m, z);
            (0..=max_m).map(move |m| {
                let e = hermite_explicit(m, z);
                (seq.get(m) - e).norm() / e.norm()
            })
        })))
    })
}

// ---------------------------------------------------------------- mehler

fn mehler(cfg: &SuiteConfig, lambda: f64) -> CheckReport {
    let params = json!({ "lambda": lambda, "terms": 80, "grid": "t, z in [-2,2], 5x5" });
    check(cfg, "mehler_series", false, params, || {
        let pts = linspace(-2.0, 2.0, 5);
        try_max(pts.iter().flat_map(|&t| {
            pts.iter().map(move |&z| {
                let (t, z) = (Complex64::new(t, 0.0), Complex64::new(z, 0.0));
                Ok((mehler_series(lambda, t, z, 80)? - mehler_closed(lambda, t, z)?).norm())
            })
        }))
    })
}

// ---------------------------------------------------------------- gram

fn gram_checks(cfg: &SuiteConfig, sp: &SParam) -> Vec<CheckReport> {
    let s = sp.s();
    let max_m = cfg.max_m;
    let order = exactness_order(2 * max_m);
    let mut out = vec![check(cfg, "gram_psi", false, json!({ "s": s, "max_m": max_m, "rule_order": order }), || {
        let fs: Vec<_> = (0..=max_m).map(|m| psi_exppoly(m, sp)).collect();
        Ok(identity_deviation(&gram(&fs, sp.omega_exponent(), &QuadRule2D::square(order)?)?))
    })];
    out.push(check(cfg, "gram_psi_tilde", false, json!({ "s": s, "max_m": max_m, "rule_order": order }), || {
        // orthonormal for the Gaussian weight e^{-nu|z|^2}
        let fs: Vec<_> = (0..=max_m).map(|m| psi_tilde_exppoly(m, sp)).collect();
        Ok(identity_deviation(&gram(&fs, QuadExponent::gaussian(sp.nu()), &QuadRule2D::square(order)?)?))
    }));
    // degree m + n per function; 8 keeps the symbolic basis well inside its limits
    let mm = max_m.min(8);
    let order = exactness_order(2 * (mm + cfg.max_n));
    let params = json!({ "s": s, "max_m": mm, "max_n": cfg.max_n, "rule_order": order });
    out.push(check(cfg, "gram_psi_mn", false, params, || {
        let fs: Vec<_> =
            (0..=cfg.max_n).flat_map(|n| (0..=mm).map(move |m| psi_mn_exppoly(m, n, sp))).collect();
        Ok(identity_deviation(&gram(&fs, sp.omega_exponent(), &QuadRule2D::square(order)?)?))
    }));
    out
}

// ---------------------------------------------------------------- kernels

fn kernel_grid_error<F: Fn(Complex64, Complex64) -> Result<f64>>(f: F) -> Result<f64> {
    let g = square_grid(1.5, 3);
    try_max(g.iter().flat_map(|&z| g.iter().map(|&w| f(z, w)).collect::<Vec<_>>()))
}

fn kernel_checks(cfg: &SuiteConfig, sp: &SParam) -> Vec<CheckReport> {
    let s = sp.s();
    let grid = "z, w in [-1.5,1.5]^2, 3x3 each";
    let terms = DEFAULT_SERIES_TERMS;
    let mut out = vec![check(cfg, "kernel_series", false, json!({ "s": s, "max_m": terms, "grid": grid }), || {
        kernel_grid_error(|z, w| Ok((kernel_series(z, w, sp, terms) - kernel_K(z, w, sp)).norm()))
    })];
    for n in 0..=cfg.max_n.min(3) {
        let params = json!({ "s": s, "n": n, "max_m": terms, "grid": grid });
        out.push(check(cfg, "kernel_n_series", false, params, || {
            let k = PolyKernel::new(n, sp)?;
            kernel_grid_error(|z, w| Ok((kernel_n_series(n, z, w, sp, terms) - k.eval(z, w)).norm()))
        }));
    }
    // same sums carried further, to separate truncation from the closed forms
    let params = json!({ "s": s, "max_n": cfg.max_n.min(3), "max_m": EXTENDED_SERIES_TERMS, "grid": grid });
    out.push(check(cfg, "kernel_series_extended", true, params, || {
        try_max((0..=cfg.max_n.min(3)).map(|n| {
            let k = PolyKernel::new(n, sp)?;
            kernel_grid_error(|z, w| {
                Ok((kernel_n_series(n, z, w, sp, EXTENDED_SERIES_TERMS) - k.eval(z, w)).norm())
            })
        }))
    }));
    out
}

// ---------------------------------------------------------------- reproducing

fn reproducing_checks(cfg: &SuiteConfig, sp: &SParam) -> Vec<CheckReport> {
    let s = sp.s();
    let q = cfg.quad_order_2d;
    let ws = square_grid(1.0, 3);
    let mm = cfg.max_m.min(6);
    let params = json!({ "s": s, "max_m": mm, "rule_order": q, "w_grid": "[-1,1]^2, 3x3" });
    let mut out = vec![check(cfg, "reproducing_k", false, params, || {
        let rule = QuadRule2D::square(q)?;
        let k = PolyKernel::new(0, sp)?;
        try_max((0..=mm).flat_map(|m| {
            let f = psi_exppoly(m, sp);
            let (k, rule) = (&k, &rule);
            ws.iter().map(move |&w| Ok((inner_hs(&f, &k.section(w), sp, rule)? - f.eval(w)).norm())).collect::<Vec<_>>()
        }))
    })];
    let mm = cfg.max_m.min(4);
    for n in 0..=cfg.max_n.min(2) {
        let params = json!({ "s": s, "n": n, "max_m": mm, "rule_order": q, "w_grid": "[-1,1]^2, 3x3" });
        out.push(check(cfg, "reproducing_kn", false, params, || {
            let rule = QuadRule2D::square(q)?;
            let k = PolyKernel::new(n, sp)?;
            try_max((0..=mm).flat_map(|m| {
                let f = psi_mn_exppoly(m, n, sp);
                let (k, rule) = (&k, &rule);
                ws.iter()
                    .map(move |&w| Ok((inner_hs(&f, &k.section(w), sp, rule)? - f.eval(w)).norm()))
                    .collect::<Vec<_>>()
            }))
        }));
    }
    out
}

// ---------------------------------------------------------------- transforms

type Fn1D = Declared1D<Box<dyn Fn(f64) -> Complex64 + Sync>>;

/// `f_m` with its `e^{-t^2/2}` moved into the declared exponent.
fn f_declared(coeffs: Vec<Complex64>) -> Fn1D {
    Declared1D::new(
        Quad1D::gaussian(0.5),
        Box::new(move |t| {
            let g = (0.5 * t * t).exp();
            coeffs.iter().enumerate().map(|(m, c)| c * phys_basis_f(m, t) * g).sum()
        }),
    )
}

fn single(m: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); m + 1];
    c[m] = Complex64::new(1.0, 0.0);
    c
}

fn combine(fs: &[ExpPoly], coeffs: &[Complex64]) -> Result<ExpPoly> {
    let mut acc = fs[0].scale(coeffs[0]);
    for (f, &c) in fs.iter().zip(coeffs).skip(1) {
        acc = acc
            .checked_add(&f.scale(c))
            .ok_or_else(|| Error::InvalidParameter("basis exponents differ".into()))?;
    }
    Ok(acc)
}

fn transform_checks(cfg: &SuiteConfig, sp: &SParam) -> Vec<CheckReport> {
    let s = sp.s();
    let nu = sp.nu();
    let (q1, q2) = (cfg.quad_order_1d, cfg.quad_order_2d);
    let max_n = cfg.max_n.min(2);
    let mut out = Vec::new();

    let zs2 = disk_points(&mut rng(cfg, 10), 8, 2.0);
    let params = json!({ "s": s, "max_m": 5, "points": zs2.len(), "radius": 2.0, "rule_order": q1 });
    out.push(check(cfg, "bargmann_basis", false, params.clone(), || {
        let rule = gauss_hermite(q1)?;
        try_max((0..=5).flat_map(|m| {
            let f = f_declared(single(m));
            let rule = &rule;
            zs2.iter().map(move |&z| Ok((apply_Bs(&f, z, sp, rule)?.value - psi(m, z, sp)).norm())).collect::<Vec<_>>()
        }))
    }));
    out.push(check(cfg, "bargmann_tilde_basis", false, params, || {
        let rule = gauss_hermite(q1)?;
        try_max((0..=5).flat_map(|m| {
            let f = f_declared(single(m));
            let rule = &rule;
            zs2.iter()
                .map(move |&z| Ok((apply_Btilde(&f, z, sp, rule)?.value - phi(m, z, sp)).norm()))
                .collect::<Vec<_>>()
        }))
    }));
    let order = exactness_order(10);
    out.push(check(cfg, "bargmann_image_gram", false, json!({ "s": s, "max_m": 5, "rule_order": order }), || {
        let imgs = (0..=5).map(|m| BsImage::new(f_declared(single(m)), sp, q1)).collect::<Result<Vec<_>>>()?;
        Ok(identity_deviation(&gram(&imgs, sp.omega_exponent(), &QuadRule2D::square(order)?)?))
    }));
    let coeffs = unit_coeffs(&mut rng(cfg, 11), 5);
    let ts = linspace(-2.0, 2.0, 5);
    // Degree-matched outer rule: the composed integrand is polynomial times
    // Gaussian, and wider rules reach |Im z| where the inner sum cancels.
    let order = exactness_order(8);
    let params = json!({ "s": s, "max_m": 4, "t": ts, "rule_order_1d": q1, "rule_order_2d": order });
    out.push(check(cfg, "bargmann_round_trip", false, params, || {
        let f = f_declared(coeffs.clone());
        let img = BsImage::new(f_declared(coeffs.clone()), sp, q1)?;
        let rule = QuadRule2D::square(order)?;
        try_max(ts.iter().map(|&t| {
            Ok((apply_Bs_inverse(&img, t, sp, &rule)?.value - f.eval(t)).norm())
        }))
    }));

    let zs = disk_points(&mut rng(cfg, 12), 5, 1.5);
    for n in 0..=max_n {
        let params = json!({ "s": s, "n": n, "max_m": 4, "points": zs.len(), "rule_order": q2 });
        out.push(check(cfg, "wn_basis", false, params, || {
            let rule = QuadRule2D::square(q2)?;
            try_max((0..=4).flat_map(|m| {
                let p = psi_exppoly(m, sp);
                let rule = &rule;
                zs.iter()
                    .map(move |&z| Ok((apply_Wn(&p, n, z, sp, rule)?.value - psi_mn(m, n, z, sp)).norm()))
                    .collect::<Vec<_>>()
            }))
        }));
        // both integrands are polynomial times Gaussian of bounded degree
        let order = exactness_order(2 * (4 + 2 * n));
        let coeffs = unit_coeffs(&mut rng(cfg, 13 + n as u64), 5);
        let params = json!({ "s": s, "n": n, "max_m": 4, "points": 3, "rule_order": order });
        out.push(check(cfg, "wn_round_trip", false, params, || {
            let basis: Vec<_> = (0..=4).map(|m| psi_exppoly(m, sp)).collect();
            let f = combine(&basis, &coeffs)?;
            let rule = QuadRule2D::square(order)?;
            let img = WnImage::new(f.clone(), n, sp, rule.clone(), QuadExponent::holomorphic_square(-0.5))?;
            try_max(zs.iter().take(3).map(|&z| Ok((apply_Wn_inverse(&img, n, z, sp, &rule)?.value - f.eval(z)).norm())))
        }));
    }

    let xs = linspace(-1.5, 1.5, 5);
    let probe = disk_probe(1.5);
    for n in 0..=max_n {
        for (name, terms, exploratory) in [
            ("sn_closed_form", DEFAULT_SERIES_TERMS, false),
            ("sn_closed_form_extended", EXTENDED_SERIES_TERMS, true),
        ] {
            let params = json!({ "s": s, "n": n, "max_m": terms, "x": xs, "z": "origin and 8 points with |z| = 1.5" });
            out.push(check(cfg, name, exploratory, params, || {
                try_max(xs.iter().flat_map(|&x| {
                    probe.iter().map(move |&z| {
                        Ok((kernel_S_closed(n, x, z, sp) - kernel_S_series(n, x, z, sp, terms)?).norm())
                    })
                }))
            }));
        }
        let params = json!({ "s": s, "n": n, "max_m": 5, "points": zs.len(), "rule_order": q1 });
        out.push(check(cfg, "sn_basis", false, params, || {
            let rule = gauss_hermite(q1)?;
            try_max((0..=5).flat_map(|m| {
                let g = g_declared(m, nu);
                let rule = &rule;
                zs.iter()
                    .map(move |&z| Ok((apply_Sn(&g, n, z, sp, rule)?.value - psi_mn(m, n, z, sp)).norm()))
                    .collect::<Vec<_>>()
            }))
        }));
        let order = exactness_order(2 * (5 + n));
        out.push(check(cfg, "sn_image_gram", false, json!({ "s": s, "n": n, "max_m": 5, "rule_order": order }), || {
            let imgs = (0..=5).map(|m| SnImage::new(g_declared(m, nu), n, sp, q1)).collect::<Result<Vec<_>>>()?;
            Ok(identity_deviation(&gram(&imgs, sp.omega_exponent(), &QuadRule2D::square(order)?)?))
        }));
        let conv = HermiteConvention::Weighted;
        let params = json!({ "s": s, "n": n, "nu": nu, "max_m": 4, "convention": conv.name() });
        out.push(check(cfg, "standard_bn_gram", false, params, || {
            Ok(identity_deviation(&standard_image_gram(n, nu, 4, conv, q1)?))
        }));
        let levels = cfg.max_n.min(3);
        let params = json!({ "s": s, "n": n, "max_k": 3, "max_m": 3, "max_level": levels, "rule_order": q2 });
        out.push(check(cfg, "bprime_level_orthogonality", false, params, || {
            let imgs = (0..=3)
                .map(|k| StandardBnImage::bprime(g_declared(k, nu), n, sp, conv, q1))
                .collect::<Result<Vec<_>>>()?;
            let others: Vec<_> = (0..=levels)
                .filter(|&l| l != n)
                .flat_map(|l| (0..=3).map(move |m| psi_mn_exppoly(m, l, sp)))
                .collect();
            if others.is_empty() {
                return Ok(0.0);
            }
            let g = gram_cross(&imgs, &others, sp.omega_exponent(), &QuadRule2D::square(q2)?)?;
            Ok(max_of(g.iter().map(|v| v.norm())))
        }));
    }
    out
}

// ---------------------------------------------------------------- eigen

fn eigen_checks(cfg: &SuiteConfig, sp: &SParam) -> Vec<CheckReport> {
    let s = sp.s();
    let nu = sp.nu();
    let k = SYMBOLIC_MAX;
    let mut out = vec![check(cfg, "rodrigues_nabla", false, json!({ "s": s, "nu": nu, "max_m": k, "max_n": k }), || {
        let params = OperatorParams::new(nu, Complex64::new(0.0, 0.0))?;
        try_max((0..=k).flat_map(|m| {
            let params = &params;
            (0..=k).map(move |n| {
                let start = BiPoly::monomial(m as u32, 0, Complex64::new(nu.powi(m as i32), 0.0));
                Ok(nabla_power(&start, params, n).relative_distance(&complex_hermite_rodrigues(m, n, nu)?))
            })
        }))
    })];
    out.push(check(cfg, "delta_eigen", false, json!({ "s": s, "nu": nu, "max_m": k, "max_n": k }), || {
        try_max((0..=k).flat_map(|m| {
            (0..=k).map(move |n| {
                let h = complex_hermite_rodrigues(m, n, nu)?;
                let expect = h.scale(Complex64::new(n as f64 * nu, 0.0));
                let got = delta_nu_apply(&h, nu)?;
                // the n = 0 eigenvalue is 0: measure against h itself
                let scale = h.max_coeff_norm().max(f64::MIN_POSITIVE);
                Ok((&got - &expect).max_coeff_norm() / scale)
            })
        }))
    }));
    out.push(check(cfg, "alpha_nu_identity", false, json!({ "s": s }), || {
        let (a, nu) = (sp.alpha(), sp.nu());
        Ok((a * a - 0.25 * nu * nu - 0.25).abs())
    }));
    out
}

// ---------------------------------------------------------------- exploratory

fn identity_error((lhs, rhs): (Complex64, Complex64)) -> f64 {
    (lhs - rhs).norm() / rhs.norm().max(1.0)
}

fn exploratory_checks(cfg: &SuiteConfig, sp: &SParam) -> Vec<CheckReport> {
    let s = sp.s();
    let nu = sp.nu();
    let q1 = cfg.quad_order_1d;
    let mut out = Vec::new();
    let zs = disk_points(&mut rng(cfg, 20), 4, 1.0);
    let ws = disk_points(&mut rng(cfg, 21), 4, 1.0);
    let pairs: Vec<_> = zs.into_iter().zip(ws).collect();
    let max_n = cfg.max_n;
    let params = json!({ "s": s, "max_n": max_n, "pairs": pairs.len() });
    out.push(check(cfg, "hnn_nabla_identity", true, params.clone(), || {
        try_max((0..=max_n).flat_map(|n| pairs.iter().map(move |&(z, w)| Ok(identity_error(hnn_nabla_identity(n, z, w, sp)?)))))
    }));
    for (name, variant) in [
        ("hnn_derivative_identity_printed", DerivativeSign::Printed),
        ("hnn_derivative_identity_corrected", DerivativeSign::Corrected),
    ] {
        out.push(check(cfg, name, true, params.clone(), || {
            try_max((0..=max_n).flat_map(|n| {
                pairs.iter().map(move |&(z, w)| Ok(identity_error(hnn_derivative_identity(n, z, w, nu, variant)?)))
            }))
        }));
    }

    let bundle = NIndependence::default();
    for (m, n1, n2) in [(0, 0, 1), (1, 1, 2)] {
        if n1.max(n2) <= cfg.max_n {
            let mut r = check_n_independence(m, n1, n2, sp, &bundle);
            r.tolerance = cfg.tolerance("n_independence");
            r.passed = r.max_abs_error <= r.tolerance;
            out.push(r);
        }
    }

    for conv in HermiteConvention::ALL {
        for n in 0..=cfg.max_n.min(2) {
            let params = json!({ "s": s, "nu": nu, "n": n, "max_m": 4, "convention": conv.name() });
            out.push(check(cfg, "hermite_convention_scan", true, params, || {
                Ok(identity_deviation(&standard_image_gram(n, nu, 4, conv, q1)?))
            }));
        }
    }

    let pts = disk_points(&mut rng(cfg, 22), 4, 1.5);
    for n in 0..=cfg.max_n.min(2) {
        let params = json!({ "s": s, "n": n, "max_m": 3, "points": pts.len() });
        out.push(check(cfg, "sn_conjugated_pairing", true, params, || {
            let rule = gauss_hermite(q1)?;
            try_max((0..=3).flat_map(|m| {
                let g = g_declared(m, nu);
                let rule = &rule;
                pts.iter()
                    .map(move |&z| Ok((apply_Sn_conjugated(&g, n, z, sp, rule)?.value - psi_mn(m, n, z, sp)).norm()))
                    .collect::<Vec<_>>()
            }))
        }));
    }

    let q2 = cfg.quad_order_2d;
    let params = json!({ "s": s, "n": 1, "max_m": 2, "points": 2, "rule_order": q2 });
    out.push(check(cfg, "wn_inverse_as_printed", true, params, || {
        let rule = QuadRule2D::square(q2)?;
        try_max((0..=2).flat_map(|m| {
            let p = psi_mn_exppoly(m, 1, sp);
            let rule = &rule;
            pts.iter().take(2).map(move |&z| {
                Ok((apply_Wn_inverse_as_printed(&p, 1, z, sp, rule)?.value - psi(m, z, sp)).norm())
            }).collect::<Vec<_>>()
        }))
    }));
    out
}
