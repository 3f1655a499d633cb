//! Experiment configuration: JSON files plus command-line overrides.
//!
//! Every subcommand owns one config struct.  All of them deserialize from a
//! plain JSON object with `deny_unknown_fields`, so typos in a config file
//! surface as usage errors instead of silently running the defaults.  Each
//! struct also implements [`Default`] with values chosen so that every
//! subcommand produces a meaningful report with no config file at all.

use crate::Failure;
use rkha::torus::LatticeNorm;
use rkha::weights::Weight;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use std::fs;
use std::path::Path;

/// Values from global command-line flags that take precedence over the
/// config file.  `None` means the flag was not given.
pub struct Overrides {
    pub seed: Option<u64>,
    pub window: Option<i64>,
    pub trunc_eps: Option<f64>,
}

/// Reads a config file, or falls back to the command's built-in defaults
/// when no path was given.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("invalid config {}: {e}", path.display())))
}

/// The out-of-the-box weight: a stretched-exponential profile that the
/// window report certifies quickly in one dimension.
fn default_weight() -> Weight {
    Weight::subexponential(1, 1.0, 0.5, LatticeNorm::L2)
        .expect("built-in default weight parameters are valid")
}

// ───────────────────────── element specs ─────────────────────────

/// One Fourier coefficient in a config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffSpec {
    pub gamma: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// A named finitely-supported element given by its coefficients.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub name: String,
    pub coeffs: Vec<CoeffSpec>,
}

/// An element together with the complex points at which to probe z − f.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub element: ElementSpec,
    pub points: Vec<[f64; 2]>,
}

// ───────────────────────── per-command configs ─────────────────────────

/// `weight-report`: certification constants for one weight.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightReportConfig {
    pub weight: Weight,
    /// Window radius for the pairwise constants and the convolution ratios.
    pub window: i64,
    /// Relative stabilization tolerance for the doubling-radius loop.
    pub tolerance: f64,
}

impl Default for WeightReportConfig {
    fn default() -> Self {
        Self { weight: default_weight(), window: 16, tolerance: 1e-6 }
    }
}

/// `algebra`: multiplicative bound, random pairs, solvers, probes.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgebraConfig {
    pub weight: Weight,
    pub window: i64,
    pub tolerance: f64,
    /// Seed for the random-pair sample.
    pub seed: u64,
    /// Number of random pairs checked against the norm bound.
    pub pairs: usize,
    /// ℓ∞ support radius of the random elements.
    pub support_radius: i64,
    /// Truncation radius for the Newton solvers.
    pub solve_radius: i64,
    /// Residual tolerance for the Newton solvers.
    pub solve_tol: f64,
    /// Elements to invert; `null` selects the built-in catalog.
    pub invert: Option<Vec<ElementSpec>>,
    /// Elements to take positive square roots of; `null` selects the catalog.
    pub square_root: Option<Vec<ElementSpec>>,
    /// Resolvent probes; `null` selects the built-in element and points.
    pub probes: Option<ProbeSpec>,
}

impl Default for AlgebraConfig {
    fn default() -> Self {
        Self {
            weight: default_weight(),
            window: 16,
            tolerance: 1e-6,
            seed: 7,
            pairs: 200,
            support_radius: 8,
            solve_radius: 64,
            solve_tol: 1e-10,
            invert: None,
            square_root: None,
            probes: None,
        }
    }
}

/// `kernel`: certified shape-function sweep.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    pub weight: Weight,
    /// Summation radius; the certificate column bounds what the tail omits.
    pub radius: i64,
    /// Number of sweep points along the first coordinate axis.
    pub grid: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self { weight: default_weight(), radius: 32, grid: 128 }
    }
}

/// `markov`: a sweep over times of one power-symbol generator family.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarkovConfig {
    /// Symbol coefficient c in η(γ) = c·|γ|^q.
    pub coefficient: f64,
    /// Symbol exponent q ∈ (0, 1].
    pub exponent: f64,
    /// Torus dimension.
    pub d: usize,
    pub norm: LatticeNorm,
    pub taus: Vec<f64>,
    pub window: i64,
    pub tolerance: f64,
    /// Per-axis resolution for the transition-density positivity scan.
    pub grid: usize,
}

impl Default for MarkovConfig {
    fn default() -> Self {
        Self {
            coefficient: 1.0,
            exponent: 1.0,
            d: 1,
            norm: LatticeNorm::L2,
            taus: vec![0.5, 1.0, 2.0],
            window: 16,
            tolerance: 1e-6,
            grid: 64,
        }
    }
}

/// `mmd`: discrepancy between two point masses vs their separation.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MmdConfig {
    pub weight: Weight,
    /// Embedding truncation radius.
    pub radius: i64,
    /// Base point; the second mass sits at base + s·e₁.
    pub base: Vec<f64>,
    /// Separations to sweep; `null` selects 2⁻² … 2⁻¹² descending.
    pub separations: Option<Vec<f64>>,
}

impl Default for MmdConfig {
    fn default() -> Self {
        Self { weight: default_weight(), radius: 48, base: vec![0.2], separations: None }
    }
}

/// `spectrum`: resolvent probes for one element at chosen points.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub weight: Weight,
    /// Element to probe; `null` selects the built-in cosine element.
    pub element: Option<ElementSpec>,
    /// Probe points as [re, im] pairs; `null` selects a built-in set.
    pub points: Option<Vec<[f64; 2]>>,
    pub solve_radius: i64,
    pub solve_tol: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            weight: default_weight(),
            element: None,
            points: None,
            solve_radius: 64,
            solve_tol: 1e-10,
        }
    }
}
