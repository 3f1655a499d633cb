//! The six subcommand implementations.
//!
//! Reports render to pretty JSON, sweeps to CSV with `#`-prefixed header
//! comments.  Output is deterministic for a fixed config and seed: random
//! draws go through a seeded ChaCha generator, map iteration follows the
//! ordered coefficient maps, and floats are printed either by serde_json
//! (shortest round-trip form) or as `{:.16e}` (17 significant digits), so
//! two identical runs produce identical bytes.

use crate::config::{
    AlgebraConfig, CoeffSpec, ElementSpec, KernelConfig, MarkovConfig, MmdConfig, Overrides,
    ProbeSpec, SpectrumConfig, WeightReportConfig,
};
use crate::Failure;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rkha::algebra::{
    banach_constant, invert, spectrum_probe, sqrt_positive, FourierPoly, SolveOptions,
    SpectrumProbe,
};
use rkha::embedding::{mmd_squared, AtomicMeasure};
use rkha::error::Error;
use rkha::kernel::shape_function;
use rkha::markov::MarkovFamily;
use rkha::torus::{box_lattice, FreqVector, LatticeNorm, TorusPoint};
use rkha::weight_analysis::{
    square_preserves_subconvolutivity, subadditivity_report, subconvolutivity_report,
    submultiplicativity_report, ConvolutionReport, PairConstantReport, SquareComparison, Verdict,
};
use rkha::weights::Weight;
use serde::Serialize;
use std::collections::BTreeMap;

// ───────────────────────── rendering helpers ─────────────────────────

/// CSV cell format: 17 significant digits, enough to reproduce the double.
fn fmt(value: f64) -> String {
    format!("{value:.16e}")
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::config(format!("cannot serialize report: {e}")))
}

fn to_compact<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value)
        .map_err(|e| Failure::config(format!("cannot serialize report: {e}")))
}

fn verdict_name(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::CertifiedBounded => "certified-bounded",
        Verdict::Inconclusive => "inconclusive",
    }
}

// ───────────────────────── element builders ─────────────────────────

/// Builds a catalog element with real coefficients on the first axis,
/// padded with zeros in the remaining coordinates.
fn axis_element(d: usize, name: &str, entries: &[(i64, f64)]) -> ElementSpec {
    let coeffs = entries
        .iter()
        .map(|&(k, re)| {
            let mut gamma = vec![0i64; d];
            gamma[0] = k;
            CoeffSpec { gamma, re, im: 0.0 }
        })
        .collect();
    ElementSpec { name: name.into(), coeffs }
}

fn build_element(weight: &Weight, spec: &ElementSpec) -> Result<FourierPoly, Failure> {
    let mut coeffs = BTreeMap::new();
    for c in &spec.coeffs {
        let gamma = FreqVector::new(&c.gamma)?;
        if coeffs.insert(gamma, Complex64::new(c.re, c.im)).is_some() {
            return Err(Failure::config(format!(
                "element `{}` lists the frequency {:?} twice",
                spec.name, c.gamma
            )));
        }
    }
    Ok(FourierPoly::new(weight.clone(), coeffs)?)
}

/// Inversion catalog: one well-conditioned element and one whose values
/// reach zero, so the report shows both solver outcomes.
fn default_invert_catalog(d: usize) -> Vec<ElementSpec> {
    vec![
        axis_element(d, "offset-cosine", &[(0, 1.0), (1, 0.3), (-1, 0.3)]),
        axis_element(d, "vanishing-cosine", &[(0, 1.0), (1, 0.5), (-1, 0.5)]),
    ]
}

/// Square-root catalog: one strictly positive element and one that dips
/// negative, so the report shows both outcomes.
fn default_sqrt_catalog(d: usize) -> Vec<ElementSpec> {
    vec![
        axis_element(d, "squared-cosine", &[(0, 1.08), (1, 0.4), (-1, 0.4), (2, 0.04), (-2, 0.04)]),
        axis_element(d, "dipping-cosine", &[(0, 0.2), (1, 0.5), (-1, 0.5)]),
    ]
}

/// Probe catalog: a pure cosine with range [−1/2, 1/2] on the real axis,
/// probed outside the range, at a range value, off the real axis, and at
/// an interior range point that no finite truncation can decide.
fn default_probe_spec(d: usize) -> ProbeSpec {
    ProbeSpec {
        element: axis_element(d, "half-cosine", &[(1, 0.25), (-1, 0.25)]),
        points: vec![[1.25, 0.0], [0.0, 0.0], [0.3, 0.4], [0.1, 0.0]],
    }
}

// ───────────────────────── weight-report ─────────────────────────

#[derive(Serialize)]
struct WeightReportOutput {
    weight: Weight,
    window_radius: i64,
    stabilization_tol: f64,
    /// Windowed (λ∗λ)/λ ratios with certified tail brackets.
    convolution: ConvolutionReport,
    /// sup over window pairs of (1/λ(γ+γ′)) / (1/λ(γ) + 1/λ(γ′)).
    inverse_subadditivity: PairConstantReport,
    /// sup over window pairs of λ(γ)λ(γ′) / λ(γ+γ′).
    submultiplicativity: PairConstantReport,
    /// Measured check that squaring the weight at most squares its constant.
    square_comparison: SquareComparison,
}

pub fn weight_report(mut cfg: WeightReportConfig, ov: &Overrides) -> Result<String, Failure> {
    if let Some(window) = ov.window {
        cfg.window = window;
    }
    let convolution = subconvolutivity_report(&cfg.weight, cfg.window, cfg.tolerance)?;
    let inverse_subadditivity = subadditivity_report(&cfg.weight, cfg.window)?;
    let submultiplicativity = submultiplicativity_report(&cfg.weight, cfg.window)?;
    let square_comparison =
        square_preserves_subconvolutivity(&cfg.weight, cfg.window, cfg.tolerance)?;
    to_pretty(&WeightReportOutput {
        weight: cfg.weight,
        window_radius: cfg.window,
        stabilization_tol: cfg.tolerance,
        convolution,
        inverse_subadditivity,
        submultiplicativity,
        square_comparison,
    })
}

// ───────────────────────── algebra ─────────────────────────

#[derive(Serialize)]
struct AlgebraOutput {
    weight: Weight,
    window_radius: i64,
    convolution_verdict: Verdict,
    c_meas: f64,
    /// √c_meas: the measured multiplicative norm constant.
    banach_bound: f64,
    random_pairs: RandomPairBlock,
    inversions: Vec<SolveEntry>,
    square_roots: Vec<SolveEntry>,
    spectrum_probes: Vec<ProbeEntry>,
}

#[derive(Serialize)]
struct RandomPairBlock {
    seed: u64,
    count: usize,
    support_radius: i64,
    /// Largest observed ‖fg‖ / (‖f‖·‖g‖).
    max_ratio: f64,
    bound: f64,
    /// Pairs whose ratio exceeded the bound.
    violations: usize,
}

#[derive(Serialize)]
struct SolveEntry {
    name: String,
    #[serde(flatten)]
    outcome: SolveEntryOutcome,
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
enum SolveEntryOutcome {
    Solved { residual: f64, iterations: u32 },
    NotInvertible { grid_min: f64, threshold: f64 },
    DomainError { detail: String },
    Unresolved { detail: String },
}

#[derive(Serialize)]
struct ProbeEntry {
    element: String,
    z: [f64; 2],
    #[serde(flatten)]
    finding: ProbeFinding,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum ProbeFinding {
    Resolvent { residual: f64, iterations: u32 },
    RangeHit { grid_min: f64 },
    Unresolved { residual: f64, iterations: u32 },
}

fn summarize_probe(probe: SpectrumProbe) -> ProbeFinding {
    match probe {
        SpectrumProbe::Resolvent(outcome) => ProbeFinding::Resolvent {
            residual: outcome.residual,
            iterations: outcome.iterations,
        },
        SpectrumProbe::RangeHit { grid_min } => ProbeFinding::RangeHit { grid_min },
        SpectrumProbe::Unresolved { residual, iterations } => {
            ProbeFinding::Unresolved { residual, iterations }
        }
    }
}

/// Runs one solver call and folds the expected failure modes into the
/// report instead of aborting the command.
fn solve_entry(
    name: &str,
    run: impl FnOnce() -> rkha::error::Result<rkha::algebra::SolveOutcome>,
) -> Result<SolveEntry, Failure> {
    let outcome = match run() {
        Ok(done) => SolveEntryOutcome::Solved {
            residual: done.residual,
            iterations: done.iterations,
        },
        Err(Error::NotInvertible { grid_min, threshold }) => {
            SolveEntryOutcome::NotInvertible { grid_min, threshold }
        }
        Err(Error::Domain(detail)) => SolveEntryOutcome::DomainError { detail },
        Err(Error::Inconclusive(detail)) => SolveEntryOutcome::Unresolved { detail },
        Err(e) => return Err(e.into()),
    };
    Ok(SolveEntry { name: name.into(), outcome })
}

fn random_element(
    weight: &Weight,
    support: &[FreqVector],
    rng: &mut ChaCha8Rng,
) -> Result<FourierPoly, Failure> {
    let coeffs: BTreeMap<FreqVector, Complex64> = support
        .iter()
        .map(|gamma| {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (gamma.clone(), c)
        })
        .collect();
    Ok(FourierPoly::new(weight.clone(), coeffs)?)
}

pub fn algebra(mut cfg: AlgebraConfig, ov: &Overrides) -> Result<String, Failure> {
    if let Some(window) = ov.window {
        cfg.window = window;
    }
    if let Some(seed) = ov.seed {
        cfg.seed = seed;
    }
    if let Some(eps) = ov.trunc_eps {
        cfg.solve_radius = cfg.weight.truncation_radius(eps)?;
    }
    let d = cfg.weight.dim();

    let convolution = subconvolutivity_report(&cfg.weight, cfg.window, cfg.tolerance)?;
    // An inconclusive verdict still carries the windowed value; the verdict
    // field in the output tells the reader which case they are in.
    let banach_bound = match banach_constant(&convolution) {
        Ok(bound) => bound,
        Err(_) => convolution.c_meas.sqrt(),
    };

    let support = box_lattice(d, cfg.support_radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut max_ratio = 0.0f64;
    let mut violations = 0usize;
    for _ in 0..cfg.pairs {
        let f = random_element(&cfg.weight, &support, &mut rng)?;
        let g = random_element(&cfg.weight, &support, &mut rng)?;
        let ratio = f.multiply(&g)?.hnorm() / (f.hnorm() * g.hnorm());
        max_ratio = max_ratio.max(ratio);
        if ratio > banach_bound {
            violations += 1;
        }
    }
    let random_pairs = RandomPairBlock {
        seed: cfg.seed,
        count: cfg.pairs,
        support_radius: cfg.support_radius,
        max_ratio,
        bound: banach_bound,
        violations,
    };

    let mut opts = SolveOptions::with_radius(cfg.solve_radius);
    opts.tol = cfg.solve_tol;

    let invert_specs = cfg.invert.clone().unwrap_or_else(|| default_invert_catalog(d));
    let mut inversions = Vec::new();
    for spec in &invert_specs {
        let f = build_element(&cfg.weight, spec)?;
        inversions.push(solve_entry(&spec.name, || invert(&f, &opts))?);
    }

    let sqrt_specs = cfg.square_root.clone().unwrap_or_else(|| default_sqrt_catalog(d));
    let mut square_roots = Vec::new();
    for spec in &sqrt_specs {
        let f = build_element(&cfg.weight, spec)?;
        square_roots.push(solve_entry(&spec.name, || sqrt_positive(&f, &opts))?);
    }

    let probe_spec = cfg.probes.clone().unwrap_or_else(|| default_probe_spec(d));
    let probed = build_element(&cfg.weight, &probe_spec.element)?;
    let mut spectrum_probes = Vec::new();
    for &[re, im] in &probe_spec.points {
        let probe = spectrum_probe(&probed, Complex64::new(re, im), &opts)?;
        spectrum_probes.push(ProbeEntry {
            element: probe_spec.element.name.clone(),
            z: [re, im],
            finding: summarize_probe(probe),
        });
    }

    to_pretty(&AlgebraOutput {
        weight: cfg.weight,
        window_radius: cfg.window,
        convolution_verdict: convolution.verdict,
        c_meas: convolution.c_meas,
        banach_bound,
        random_pairs,
        inversions,
        square_roots,
        spectrum_probes,
    })
}

// ───────────────────────── kernel ─────────────────────────

pub fn kernel(mut cfg: KernelConfig, ov: &Overrides) -> Result<String, Failure> {
    if let Some(eps) = ov.trunc_eps {
        cfg.radius = cfg.weight.truncation_radius(eps)?;
    }
    if cfg.grid == 0 {
        return Err(Failure::config("grid resolution must be >= 1"));
    }
    let d = cfg.weight.dim();
    let mut lines = vec![
        "# shape-function sweep along the first coordinate axis".to_string(),
        format!("# weight: {}", to_compact(&cfg.weight)?),
        format!("# radius: {}", cfg.radius),
        "# columns: x,l,err".to_string(),
    ];
    for j in 0..cfg.grid {
        let x = j as f64 / cfg.grid as f64;
        let mut coords = vec![0.0; d];
        coords[0] = x;
        let point = TorusPoint::new(&coords)?;
        let value = shape_function(&cfg.weight, &point, cfg.radius)?;
        lines.push(format!("{},{},{}", fmt(x), fmt(value.value), fmt(value.error_bound)));
    }
    Ok(lines.join("\n") + "\n")
}

// ───────────────────────── markov ─────────────────────────

/// Echo of the generator family parameters for the CSV header.
#[derive(Serialize)]
struct FamilyEcho {
    coefficient: f64,
    exponent: f64,
    d: usize,
    norm: LatticeNorm,
}

pub fn markov(mut cfg: MarkovConfig, ov: &Overrides) -> Result<String, Failure> {
    if let Some(window) = ov.window {
        cfg.window = window;
    }
    let family = MarkovFamily::power(cfg.d, cfg.coefficient, cfg.exponent, cfg.norm)?;
    let echo = FamilyEcho {
        coefficient: cfg.coefficient,
        exponent: cfg.exponent,
        d: cfg.d,
        norm: cfg.norm,
    };
    let mut comments = vec![
        "# semigroup sweep for the symbol η(γ) = c·|γ|^q".to_string(),
        format!("# family: {}", to_compact(&echo)?),
        format!("# window: {}, grid: {}, tolerance: {:e}", cfg.window, cfg.grid, cfg.tolerance),
    ];
    let mut rows = Vec::new();
    for &tau in &cfg.taus {
        let checks = family.markov_checks(tau, cfg.window, cfg.grid)?;
        let conv = subconvolutivity_report(&family.weight_at(tau)?, cfg.window, cfg.tolerance)?;
        comments.push(format!(
            "# subconvolutivity verdict at tau={}: {}",
            fmt(tau),
            verdict_name(conv.verdict)
        ));
        rows.push(format!(
            "{},{},{},{},{}",
            fmt(tau),
            fmt(conv.c_meas),
            fmt(checks.density_min_value),
            fmt(checks.mass_defect),
            fmt(checks.semigroup_defect)
        ));
    }
    comments.push("# columns: tau,c_meas,gridmin,massdefect,semigroupdefect".to_string());
    comments.extend(rows);
    Ok(comments.join("\n") + "\n")
}

// ───────────────────────── mmd ─────────────────────────

fn default_separations() -> Vec<f64> {
    (2..=12).map(|n| 0.5f64.powi(n)).collect()
}

pub fn mmd(mut cfg: MmdConfig, ov: &Overrides) -> Result<String, Failure> {
    if let Some(eps) = ov.trunc_eps {
        cfg.radius = cfg.weight.truncation_radius(eps)?;
    }
    let d = cfg.weight.dim();
    if cfg.base.len() != d {
        return Err(Failure::config(format!(
            "base point has {} coordinates but the weight lives on a {}-torus",
            cfg.base.len(),
            d
        )));
    }
    let separations = cfg.separations.clone().unwrap_or_else(default_separations);
    if separations.iter().any(|s| !s.is_finite()) {
        return Err(Failure::config("separations must be finite"));
    }
    let base = TorusPoint::new(&cfg.base)?;
    let mu = AtomicMeasure::new(vec![(base, 1.0)])?;
    let mut lines = vec![
        "# discrepancy between unit masses at x and at x + s·e₁".to_string(),
        format!("# weight: {}", to_compact(&cfg.weight)?),
        format!("# radius: {}", cfg.radius),
        format!("# base: {}", to_compact(&cfg.base)?),
        "# columns: separation,mmd".to_string(),
    ];
    for &s in &separations {
        let mut coords = cfg.base.clone();
        coords[0] += s;
        let nu = AtomicMeasure::new(vec![(TorusPoint::new(&coords)?, 1.0)])?;
        let squared = mmd_squared(&cfg.weight, &mu, &nu, cfg.radius)?;
        lines.push(format!("{},{}", fmt(s), fmt(squared.value.max(0.0).sqrt())));
    }
    Ok(lines.join("\n") + "\n")
}

// ───────────────────────── spectrum ─────────────────────────

#[derive(Serialize)]
struct SpectrumOutput {
    /// The probed element, with its weight embedded.
    element: FourierPoly,
    solve: SolveOptions,
    probes: Vec<ProbeEntry>,
}

pub fn spectrum(mut cfg: SpectrumConfig, ov: &Overrides) -> Result<String, Failure> {
    if let Some(eps) = ov.trunc_eps {
        cfg.solve_radius = cfg.weight.truncation_radius(eps)?;
    }
    let d = cfg.weight.dim();
    let spec = cfg.element.clone().unwrap_or_else(|| default_probe_spec(d).element);
    let points = cfg.points.clone().unwrap_or_else(|| default_probe_spec(d).points);
    let f = build_element(&cfg.weight, &spec)?;
    let mut opts = SolveOptions::with_radius(cfg.solve_radius);
    opts.tol = cfg.solve_tol;
    let mut probes = Vec::new();
    for &[re, im] in &points {
        let probe = spectrum_probe(&f, Complex64::new(re, im), &opts)?;
        probes.push(ProbeEntry {
            element: spec.name.clone(),
            z: [re, im],
            finding: summarize_probe(probe),
        });
    }
    to_pretty(&SpectrumOutput { element: f, solve: opts, probes })
}
