//! Sparse trigonometric polynomials as elements of the weighted algebra.
//!
//! An element is stored by its frequency-side coefficients.  The ambient
//! space is fixed by a [`Weight`] λ: the squared norm of f is
//! Σ_γ |f̂(γ)|²/λ(γ), multiplication is coefficient convolution, and the
//! involution is f*(γ) = conj(f̂(−γ)).  When λ is subconvolutive with a
//! certified constant C (see [`crate::weight_analysis`]), the norm is
//! submultiplicative up to √C, which is what [`banach_constant`] reports.
//!
//! The solvers ([`invert`], [`sqrt_positive`]) run damped coefficient-side
//! Newton iterations, re-truncated to a caller-chosen radius each step,
//! and report the *measured* residual norm, so a returned success is a
//! checkable certificate rather than a promise.

use crate::error::{Error, Result};
use crate::limits;
use crate::torus::{character, FreqVector, Grid, TorusPoint};
use crate::weight_analysis::{ConvolutionReport, Verdict};
use crate::weights::{KahanSum, Weight};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

// ───────────────────────── the element type ─────────────────────────

/// A finitely supported frequency-side element of the weighted algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolySchema", into = "PolySchema")]
pub struct FourierPoly {
    weight: Weight,
    coeffs: BTreeMap<FreqVector, Complex64>,
}

impl FourierPoly {
    /// Builds an element from explicit coefficients.  Every frequency must
    /// match the weight's dimension and lie where the weight can be
    /// evaluated; exact zeros are dropped.
    pub fn new(weight: Weight, coeffs: BTreeMap<FreqVector, Complex64>) -> Result<Self> {
        if coeffs.len() > limits::SUPPORT_CAP {
            return Err(Error::ResourceCap(format!(
                "support of {} frequencies exceeds the cap of {}",
                coeffs.len(),
                limits::SUPPORT_CAP
            )));
        }
        let mut kept = BTreeMap::new();
        for (gamma, c) in coeffs {
            if gamma.dim() != weight.dim() {
                return Err(Error::DimensionMismatch { expected: weight.dim(), got: gamma.dim() });
            }
            weight.eval(&gamma)?; // surfaces out-of-table frequencies now
            if c != Complex64::new(0.0, 0.0) {
                kept.insert(gamma, c);
            }
        }
        Ok(Self { weight, coeffs: kept })
    }

    /// The zero element.
    pub fn zero(weight: Weight) -> Self {
        Self { weight, coeffs: BTreeMap::new() }
    }

    /// The constant function `value`.
    pub fn constant(weight: Weight, value: Complex64) -> Result<Self> {
        let gamma = FreqVector::zero(weight.dim());
        Self::new(weight, BTreeMap::from([(gamma, value)]))
    }

    /// A single character with the given coefficient.
    pub fn monomial(weight: Weight, gamma: FreqVector, value: Complex64) -> Result<Self> {
        Self::new(weight, BTreeMap::from([(gamma, value)]))
    }

    /// The normalized basis element at γ: the character scaled by
    /// ξ(γ) = λ(γ)^{1/2}, which has norm exactly one.
    pub fn normalized_mode(weight: Weight, gamma: FreqVector) -> Result<Self> {
        let xi = weight.xi(&gamma)?;
        Self::monomial(weight, gamma, Complex64::new(xi, 0.0))
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn dim(&self) -> usize {
        self.weight.dim()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient at γ (zero when absent).
    pub fn coeff(&self, gamma: &FreqVector) -> Complex64 {
        self.coeffs.get(gamma).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterates coefficients in frequency order.
    pub fn iter(&self) -> impl Iterator<Item = (&FreqVector, &Complex64)> {
        self.coeffs.iter()
    }

    /// Largest ℓ∞ norm over the support (zero for the zero element).
    pub fn support_radius(&self) -> i64 {
        self.coeffs.keys().map(|g| g.linf()).max().unwrap_or(0)
    }

    fn lam(&self, gamma: &FreqVector) -> f64 {
        self.weight
            .eval(gamma)
            .expect("support frequencies are validated at construction")
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch);
        }
        Ok(())
    }

    // ───────────────────────── linear operations ─────────────────────────

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut coeffs = self.coeffs.clone();
        for (gamma, c) in &other.coeffs {
            let slot = coeffs.entry(gamma.clone()).or_insert(Complex64::new(0.0, 0.0));
            *slot += c;
        }
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(Self { weight: self.weight.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        if factor == Complex64::new(0.0, 0.0) {
            return Self::zero(self.weight.clone());
        }
        let coeffs = self.coeffs.iter().map(|(g, c)| (g.clone(), c * factor)).collect();
        Self { weight: self.weight.clone(), coeffs }
    }

    /// Drops every coefficient with |γ|∞ beyond the radius.
    pub fn truncate(&self, radius: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(g, _)| g.linf() <= radius)
            .map(|(g, c)| (g.clone(), *c))
            .collect();
        Self { weight: self.weight.clone(), coeffs }
    }

    /// The involution f*(γ) = conj(f̂(−γ)); pointwise it is conj ∘ f.
    pub fn involution(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(g, c)| (g.neg(), c.conj())).collect();
        Self { weight: self.weight.clone(), coeffs }
    }

    /// The Hermitian part (f + f*)/2, whose pointwise values are real.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.involution())
            .expect("same space by construction")
            .scale(Complex64::new(0.5, 0.0))
    }

    // ───────────────────────── algebra operations ─────────────────────────

    /// Coefficient convolution.  Fails when the operation budget would be
    /// exceeded or (for table-backed weights) when the product support
    /// leaves the region where the weight is known.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let ops = self.coeffs.len() as u128 * other.coeffs.len() as u128;
        if ops > limits::PRODUCT_OP_CAP {
            return Err(Error::ResourceCap(format!(
                "product of supports {} x {} needs {ops} coefficient operations",
                self.coeffs.len(),
                other.coeffs.len()
            )));
        }
        let mut coeffs: BTreeMap<FreqVector, Complex64> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let slot = coeffs.entry(a.add(b)?).or_insert(Complex64::new(0.0, 0.0));
                *slot += ca * cb;
            }
        }
        Self::new(self.weight.clone(), coeffs)
    }

    /// The ambient inner product Σ f̂(γ) conj(ĝ(γ)) / λ(γ).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_space(other)?;
        let (small, large, flip) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut re = KahanSum::default();
        let mut im = KahanSum::default();
        for (gamma, c) in &small.coeffs {
            if let Some(d) = large.coeffs.get(gamma) {
                let term = if flip { d * c.conj() } else { c * d.conj() };
                let lam = self.lam(gamma);
                re.add(term.re / lam);
                im.add(term.im / lam);
            }
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    /// The ambient norm (Σ |f̂(γ)|²/λ(γ))^{1/2}.
    pub fn hnorm(&self) -> f64 {
        let mut sum = KahanSum::default();
        for (gamma, c) in &self.coeffs {
            sum.add(c.norm_sqr() / self.lam(gamma));
        }
        sum.value().sqrt()
    }

    // ───────────────────────── pointwise evaluation ─────────────────────────

    /// Evaluates the trigonometric sum at a point.
    pub fn evaluate(&self, x: &TorusPoint) -> Result<Complex64> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.dim() });
        }
        let mut re = KahanSum::default();
        let mut im = KahanSum::default();
        for (gamma, c) in &self.coeffs {
            let v = c * character(gamma, x)?;
            re.add(v.re);
            im.add(v.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }

    /// Values on every node of the grid, in the grid's traversal order.
    pub fn values_on_grid(&self, grid: &Grid) -> Result<Vec<Complex64>> {
        if grid.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: grid.dim() });
        }
        let ops = grid.len() as u128 * self.coeffs.len() as u128;
        if ops > limits::PRODUCT_OP_CAP {
            return Err(Error::ResourceCap(format!(
                "evaluating {} coefficients on {} grid nodes needs {ops} operations",
                self.coeffs.len(),
                grid.len()
            )));
        }
        grid.points().map(|x| self.evaluate(&x)).collect()
    }

    /// A sampling grid fine enough to resolve this element: at least
    /// four nodes per Nyquist interval of its bandwidth.
    pub fn oversampled_grid(&self) -> Result<Grid> {
        let bw = self.support_radius();
        let n = (limits::OVERSAMPLE_FACTOR * (2 * bw as usize + 2))
            .max(limits::MIN_OVERSAMPLE_RESOLUTION);
        Grid::new(self.dim(), n)
    }

    /// Minimum of |f| over the oversampled grid.
    pub fn min_abs_oversampled(&self) -> Result<f64> {
        let values = self.values_on_grid(&self.oversampled_grid()?)?;
        Ok(values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min))
    }

    /// Maximum of |f| over the oversampled grid.
    pub fn max_abs_oversampled(&self) -> Result<f64> {
        let values = self.values_on_grid(&self.oversampled_grid()?)?;
        Ok(values.iter().map(|v| v.norm()).fold(0.0, f64::max))
    }
}

// ───────────────────────── serialization schema ─────────────────────────

#[derive(Serialize, Deserialize)]
struct CoeffSchema {
    gamma: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PolySchema {
    weight: Weight,
    coeffs: Vec<CoeffSchema>,
}

impl TryFrom<PolySchema> for FourierPoly {
    type Error = Error;

    fn try_from(schema: PolySchema) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for entry in schema.coeffs {
            let gamma = FreqVector::new(&entry.gamma)?;
            if coeffs.insert(gamma, Complex64::new(entry.re, entry.im)).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate coefficient at {:?}",
                    entry.gamma
                )));
            }
        }
        Self::new(schema.weight, coeffs)
    }
}

impl From<FourierPoly> for PolySchema {
    fn from(poly: FourierPoly) -> Self {
        let coeffs = poly
            .coeffs
            .iter()
            .map(|(g, c)| CoeffSchema { gamma: g.components().to_vec(), re: c.re, im: c.im })
            .collect();
        PolySchema { weight: poly.weight, coeffs }
    }
}

// ───────────────────────── Banach bound ─────────────────────────

/// Turns a certified subconvolutivity constant C into the multiplicative
/// norm bound √C with ‖fg‖ ≤ √C ‖f‖ ‖g‖.  Refuses inconclusive reports.
pub fn banach_constant(report: &ConvolutionReport) -> Result<f64> {
    match report.verdict {
        Verdict::CertifiedBounded => Ok(report.c_meas.sqrt()),
        Verdict::Inconclusive => Err(Error::Inconclusive(
            "subconvolutivity report did not certify a bound".into(),
        )),
    }
}

// ───────────────────────── Newton solvers ─────────────────────────

/// Knobs for the coefficient-side Newton iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Iterates are re-truncated to this ℓ∞ frequency radius each step.
    pub radius: i64,
    /// Required residual norm at exit.
    pub tol: f64,
    /// Iteration cap.
    pub max_iters: u32,
}

impl SolveOptions {
    /// Default tolerances at a chosen truncation radius.
    pub fn with_radius(radius: i64) -> Self {
        Self { radius, tol: 1e-10, max_iters: limits::NEWTON_MAX_ITERS }
    }

    fn validate(&self) -> Result<()> {
        if self.radius < 0 {
            return Err(Error::InvalidParameter("truncation radius must be >= 0".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidParameter("solver tolerance must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("iteration cap must be >= 1".into()));
        }
        Ok(())
    }
}

/// A solver result together with its measured residual certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub result: FourierPoly,
    /// Measured norm of the defining residual (‖fg − 1‖ or ‖g² − f‖).
    pub residual: f64,
    pub iterations: u32,
}

struct IterationEnd {
    result: FourierPoly,
    residual: f64,
    iterations: u32,
    converged: bool,
}

/// Damped Hotelling iteration g ← g + s·g(1 − fg), re-truncated each step.
fn invert_inner(f: &FourierPoly, opts: &SolveOptions) -> Result<IterationEnd> {
    opts.validate()?;
    let grid_min = f.min_abs_oversampled()?;
    if grid_min < limits::MIN_GRID_ABS {
        return Err(Error::NotInvertible { grid_min, threshold: limits::MIN_GRID_ABS });
    }
    let grid_max = f.max_abs_oversampled()?;
    let unit = FourierPoly::constant(f.weight().clone(), Complex64::new(1.0, 0.0))?;

    // g₀ = f* / (1.25·max²): pointwise |1 − f·g₀| ≤ 1 − |f|²/(1.25·max²) < 1,
    // with the 25% headroom absorbing the gap between the grid maximum and
    // the true supremum.
    let mut g = f
        .involution()
        .scale(Complex64::new(1.0 / (1.25 * grid_max * grid_max), 0.0))
        .truncate(opts.radius);
    let mut e = unit.sub(&f.multiply(&g)?)?;
    let mut r = e.hnorm();
    let mut iterations = 0u32;

    while iterations < opts.max_iters && r > opts.tol {
        let step = g.multiply(&e)?;
        let mut s = 1.0_f64;
        let mut accepted = false;
        while s >= limits::NEWTON_MIN_DAMPING {
            let cand = g.add(&step.scale(Complex64::new(s, 0.0)))?.truncate(opts.radius);
            let e_cand = unit.sub(&f.multiply(&cand)?)?;
            let r_cand = e_cand.hnorm();
            if r_cand < r {
                g = cand;
                e = e_cand;
                r = r_cand;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break; // stalled: no damping level reduces the residual
        }
    }

    Ok(IterationEnd { result: g, residual: r, iterations, converged: r <= opts.tol })
}

/// Computes a truncated multiplicative inverse with a measured residual
/// certificate ‖fg − 1‖ ≤ tol.
///
/// Fails with [`Error::NotInvertible`] when |f| dips below the safe
/// threshold on an oversampled grid, and with [`Error::Inconclusive`] when
/// the iteration cannot reach the tolerance at this truncation radius.
pub fn invert(f: &FourierPoly, opts: &SolveOptions) -> Result<SolveOutcome> {
    let end = invert_inner(f, opts)?;
    if !end.converged {
        return Err(Error::Inconclusive(format!(
            "inverse residual {:.3e} after {} iterations at radius {}",
            end.residual, end.iterations, opts.radius
        )));
    }
    Ok(SolveOutcome { result: end.result, residual: end.residual, iterations: end.iterations })
}

/// Computes the positive square root of a strictly positive Hermitian
/// element, certifying ‖g² − f‖ ≤ tol, g Hermitian.
///
/// Runs the inverse-root iteration y ← y + s·y(1 − fy²)/2 with Hermitian
/// re-symmetrization, then forms g = trunc(f·y).
pub fn sqrt_positive(f: &FourierPoly, opts: &SolveOptions) -> Result<SolveOutcome> {
    opts.validate()?;
    let scale = f.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
    for (gamma, c) in f.iter() {
        let mirrored = f.coeff(&gamma.neg()).conj();
        if (c - mirrored).norm() > limits::HERMITIAN_TOL * (1.0 + scale) {
            return Err(Error::Domain(format!(
                "coefficients are not Hermitian at {:?}",
                gamma.components()
            )));
        }
    }
    let values = f.values_on_grid(&f.oversampled_grid()?)?;
    let min_re = values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    let max_re = values.iter().map(|v| v.re).fold(0.0_f64, f64::max);
    if min_re < limits::MIN_GRID_ABS {
        return Err(Error::Domain(format!(
            "grid minimum {min_re:.3e} is not safely positive"
        )));
    }

    let unit = FourierPoly::constant(f.weight().clone(), Complex64::new(1.0, 0.0))?;
    let mut y = FourierPoly::constant(
        f.weight().clone(),
        Complex64::new(1.0 / (1.25 * max_re).sqrt(), 0.0),
    )?;

    let residual_pair = |y: &FourierPoly| -> Result<(FourierPoly, f64, f64)> {
        let e = unit.sub(&f.multiply(&y.multiply(y)?)?)?;
        let g = f.multiply(y)?.truncate(opts.radius).hermitian_part();
        let rg = g.multiply(&g)?.sub(f)?.hnorm();
        Ok((g, e.hnorm(), rg))
    };

    let (mut g, mut re_norm, mut rg) = residual_pair(&y)?;
    let mut iterations = 0u32;
    while iterations < opts.max_iters && rg > opts.tol {
        let e = unit.sub(&f.multiply(&y.multiply(&y)?)?)?;
        let step = y.multiply(&e)?.scale(Complex64::new(0.5, 0.0));
        let mut s = 1.0_f64;
        let mut accepted = false;
        while s >= limits::NEWTON_MIN_DAMPING {
            let cand = y
                .add(&step.scale(Complex64::new(s, 0.0)))?
                .truncate(opts.radius)
                .hermitian_part();
            let (g_cand, re_cand, rg_cand) = residual_pair(&cand)?;
            if re_cand < re_norm || rg_cand < rg {
                y = cand;
                g = g_cand;
                re_norm = re_cand;
                rg = rg_cand;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break;
        }
    }

    if rg > opts.tol {
        return Err(Error::Inconclusive(format!(
            "square-root residual {rg:.3e} after {iterations} iterations at radius {}",
            opts.radius
        )));
    }
    Ok(SolveOutcome { result: g, residual: rg, iterations })
}

// ───────────────────────── spectrum probing ─────────────────────────

/// What a resolvent probe at a single point z established.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectrumProbe {
    /// (z − f) was inverted with the residual certificate attached: z lies
    /// in the resolvent set at this truncation level.
    Resolvent(SolveOutcome),
    /// z − f vanishes (to grid precision) somewhere on the sample grid:
    /// z sits in the closure of the range of f, hence in the spectrum.
    RangeHit { grid_min: f64 },
    /// The iteration could not certify either way at this radius.
    Unresolved { residual: f64, iterations: u32 },
}

/// Probes whether z − f is invertible in the algebra.
pub fn spectrum_probe(f: &FourierPoly, z: Complex64, opts: &SolveOptions) -> Result<SpectrumProbe> {
    let shifted = FourierPoly::constant(f.weight().clone(), z)?
        .sub(f)?;
    match invert_inner(&shifted, opts) {
        Ok(end) if end.converged => Ok(SpectrumProbe::Resolvent(SolveOutcome {
            result: end.result,
            residual: end.residual,
            iterations: end.iterations,
        })),
        Ok(end) => Ok(SpectrumProbe::Unresolved {
            residual: end.residual,
            iterations: end.iterations,
        }),
        Err(Error::NotInvertible { grid_min, .. }) => Ok(SpectrumProbe::RangeHit { grid_min }),
        Err(e) => Err(e),
    }
}
