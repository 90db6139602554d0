use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{DEFAULT_ORDER_1D, DEFAULT_ORDER_2D, MAX_ORDER};
use crate::spaces::{PSI_MN_MAX_M, PSI_MN_MAX_N};

/// A group of checks selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Hermite,
    Gram,
    Mehler,
    Kernels,
    Reproducing,
    Transforms,
    Eigen,
    Exploratory,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Self::Hermite,
        Self::Gram,
        Self::Mehler,
        Self::Kernels,
        Self::Reproducing,
        Self::Transforms,
        Self::Eigen,
        Self::Exploratory,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hermite => "hermite",
            Self::Gram => "gram",
            Self::Mehler => "mehler",
            Self::Kernels => "kernels",
            Self::Reproducing => "reproducing",
            Self::Transforms => "transforms",
            Self::Eigen => "eigen",
            Self::Exploratory => "exploratory",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            _ => Err(Error::Config(format!("unknown output format '{s}'"))),
        }
    }
}

/// Default tolerance of every named check.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("alpha_nu_identity", 1e-14),
    ("bargmann_basis", 1e-8),
    ("bargmann_image_gram", 1e-7),
    ("bargmann_round_trip", 1e-6),
    ("bargmann_tilde_basis", 1e-8),
    ("bprime_level_orthogonality", 1e-5),
    ("delta_eigen", 1e-12),
    ("gram_psi", 1e-10),
    ("gram_psi_mn", 1e-10),
    ("gram_psi_tilde", 1e-10),
    ("hermite_convention_scan", 1e-6),
    ("hermite_cross_oracle", 1e-10),
    ("hnn_derivative_identity_corrected", 1e-10),
    ("hnn_derivative_identity_printed", 1e-10),
    ("hnn_nabla_identity", 1e-10),
    ("kernel_n_series", 1e-7),
    ("kernel_series", 1e-8),
    ("kernel_series_extended", 1e-8),
    ("mehler_series", 1e-10),
    ("n_independence", 1e-6),
    ("reproducing_k", 1e-6),
    ("reproducing_kn", 1e-6),
    ("rodrigues_nabla", 1e-12),
    ("sn_basis", 1e-7),
    ("sn_closed_form", 1e-7),
    ("sn_closed_form_extended", 1e-7),
    ("sn_conjugated_pairing", 1e-7),
    ("sn_image_gram", 1e-6),
    ("standard_bn_gram", 1e-6),
    ("wn_basis", 1e-6),
    ("wn_inverse_as_printed", 1e-6),
    ("wn_round_trip", 1e-6),
];

/// Parameters of a `verify` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub s_values: Vec<f64>,
    pub max_m: usize,
    pub max_n: usize,
    pub quad_order_1d: usize,
    pub quad_order_2d: usize,
    /// Overrides keyed by check name; missing names use [`DEFAULT_TOLERANCES`].
    pub tolerances: BTreeMap<String, f64>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            s_values: vec![0.3, 0.5, 0.7],
            max_m: 12,
            max_n: 4,
            quad_order_1d: DEFAULT_ORDER_1D,
            quad_order_2d: DEFAULT_ORDER_2D,
            tolerances: BTreeMap::new(),
            suites: Suite::ALL.to_vec(),
            seed: 20_240_517,
            output_path: None,
            output_format: OutputFormat::Json,
        }
    }
}

impl SuiteConfig {
    /// Rejects anything that would fail before a check could run.
    pub fn validate(&self) -> Result<()> {
        for &s in &self.s_values {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::Config(format!("s must lie in (0,1), got {s}")));
            }
        }
        for (name, q) in [("quad_order_1d", self.quad_order_1d), ("quad_order_2d", self.quad_order_2d)] {
            if q == 0 || q > MAX_ORDER {
                return Err(Error::Config(format!("{name} must lie in 1..={MAX_ORDER}, got {q}")));
            }
        }
        if self.max_m > PSI_MN_MAX_M {
            return Err(Error::Config(format!("max_m must be at most {PSI_MN_MAX_M}, got {}", self.max_m)));
        }
        if self.max_n > PSI_MN_MAX_N {
            return Err(Error::Config(format!("max_n must be at most {PSI_MN_MAX_N}, got {}", self.max_n)));
        }
        for (name, &tol) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == name) {
                return Err(Error::Config(format!("unknown check '{name}' in tolerances")));
            }
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Config(format!("tolerance for '{name}' must be positive, got {tol}")));
            }
        }
        Ok(())
    }

    /// Tolerance of `name`, honoring overrides.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|&(_, t)| t)
                .unwrap_or_else(|| panic!("no default tolerance for '{name}'"))
        })
    }

    /// The configuration restricted to one suite.
    pub fn only(suite: Suite) -> Self {
        Self { suites: vec![suite], ..Self::default() }
    }
}

/// Parses `name=value`.
pub fn parse_tolerance(arg: &str) -> Result<(String, f64)> {
    let (name, value) = arg
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("expected name=value, got '{arg}'")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid tolerance value in '{arg}'")))?;
    Ok((name.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SuiteConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            SuiteConfig { s_values: vec![1.5], ..Default::default() },
            SuiteConfig { s_values: vec![0.0], ..Default::default() },
            SuiteConfig { quad_order_2d: 0, ..Default::default() },
            SuiteConfig { quad_order_1d: MAX_ORDER + 1, ..Default::default() },
            SuiteConfig { max_n: PSI_MN_MAX_N + 1, ..Default::default() },
            SuiteConfig { tolerances: [("gram_psi".into(), -1.0)].into(), ..Default::default() },
            SuiteConfig { tolerances: [("no_such_check".into(), 1.0)].into(), ..Default::default() },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::Config(_))), "{c:?}");
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerance_lookup_and_parsing() {
        let mut c = SuiteConfig::default();
        assert_eq!(c.tolerance("gram_psi"), 1e-10);
        let (k, v) = parse_tolerance("gram_psi=1e-3").unwrap();
        c.tolerances.insert(k, v);
        assert_eq!(c.tolerance("gram_psi"), 1e-3);
        assert!(parse_tolerance("gram_psi").is_err());
        assert!(parse_tolerance("gram_psi=abc").is_err());
    }

    #[test]
    fn default_table_is_sorted_and_unique() {
        assert!(DEFAULT_TOLERANCES.windows(2).all(|w| w[0].0 < w[1].0));
    }
}
