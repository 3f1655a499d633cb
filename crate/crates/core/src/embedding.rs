//! Mean embeddings of atomic measures and certified kernel discrepancies.
//!
//! An atomic measure μ = Σ_j a_j δ_{y_j} embeds into the space as
//! m_μ(x) = ∫ l(x − y) dμ(y), whose γ-coefficient is λ(γ)·μ̂(γ) with
//! μ̂(γ) = Σ_j a_j e^{−2πiγ·y_j}.  For real atom weights the embedding
//! represents integration: ⟨f, m_μ⟩ = ∫ f dμ, which [`expect`] verifies
//! by computing both sides.
//!
//! The squared kernel discrepancy between two measures,
//! MMD²(μ, ν) = Σ_γ λ(γ)|μ̂(γ) − ν̂(γ)|², is truncated to a frequency box
//! and returned with a rigorous remainder, so a strictly positive lower
//! endpoint certifies that the two measures genuinely differ.

use crate::algebra::FourierPoly;
use crate::error::{Error, Result};
use crate::kernel::{section_as_poly, CertifiedValue};
use crate::torus::{box_lattice, character, FreqVector, TorusPoint};
use crate::weights::{KahanSum, Weight};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A finite weighted sum of point masses on the torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    d: usize,
    atoms: Vec<(TorusPoint, f64)>,
}

impl AtomicMeasure {
    /// Builds a measure from (location, weight) atoms.  Weights may be
    /// negative (signed measures are allowed); they must be finite.
    pub fn new(atoms: Vec<(TorusPoint, f64)>) -> Result<Self> {
        let d = atoms
            .first()
            .map(|(x, _)| x.dim())
            .ok_or_else(|| Error::InvalidParameter("measure needs at least one atom".into()))?;
        for (x, a) in &atoms {
            if x.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: x.dim() });
            }
            if !a.is_finite() {
                return Err(Error::InvalidParameter("atom weights must be finite".into()));
            }
        }
        Ok(Self { d, atoms })
    }

    /// The empirical measure of the points: weight 1/n each.
    pub fn uniform(points: Vec<TorusPoint>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidParameter("measure needs at least one atom".into()));
        }
        Self::new(points.into_iter().map(|x| (x, 1.0 / n as f64)).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn atoms(&self) -> &[(TorusPoint, f64)] {
        &self.atoms
    }

    /// Σ_j a_j.
    pub fn total_mass(&self) -> f64 {
        let mut sum = KahanSum::default();
        for (_, a) in &self.atoms {
            sum.add(*a);
        }
        sum.value()
    }

    /// Σ_j |a_j| — the bound used by truncation certificates.
    pub fn abs_mass(&self) -> f64 {
        let mut sum = KahanSum::default();
        for (_, a) in &self.atoms {
            sum.add(a.abs());
        }
        sum.value()
    }

    /// μ̂(γ) = Σ_j a_j e^{−2πiγ·y_j}.
    pub fn fourier(&self, gamma: &FreqVector) -> Result<Complex64> {
        let mut re = KahanSum::default();
        let mut im = KahanSum::default();
        for (y, a) in &self.atoms {
            let v = character(gamma, y)?.conj() * *a;
            re.add(v.re);
            im.add(v.im);
        }
        Ok(Complex64::new(re.value(), im.value()))
    }
}

/// How far a truncation can reach for this weight.
fn effective_radius(w: &Weight, radius: i64) -> i64 {
    match w.table_radius() {
        Some(box_r) => radius.min(box_r),
        None => radius,
    }
}

/// The truncated mean embedding m_μ with coefficients λ(γ)·μ̂(γ) on the
/// ℓ∞ box (clamped to the stored table for table-backed weights).
pub fn mean_embed(w: &Weight, mu: &AtomicMeasure, radius: i64) -> Result<FourierPoly> {
    if mu.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), got: mu.dim() });
    }
    if radius < 0 {
        return Err(Error::InvalidParameter("embedding radius must be >= 0".into()));
    }
    let r = effective_radius(w, radius);
    let mut coeffs = BTreeMap::new();
    for gamma in box_lattice(w.dim(), r)? {
        let lam = w.eval(&gamma)?;
        let hat = mu.fourier(&gamma)?;
        coeffs.insert(gamma, hat * lam);
    }
    FourierPoly::new(w.clone(), coeffs)
}

/// ∫ f dμ computed two ways: directly atom by atom, and through the
/// inner product with the mean embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationPair {
    pub direct: Complex64,
    pub via_embedding: Complex64,
    /// |direct − via_embedding|; zero up to roundoff whenever the
    /// embedding radius covers the support of f.
    pub gap: f64,
}

/// Integrates f against μ both directly and through an embedding whose
/// radius covers the support of f, so the two must agree.
pub fn expect(f: &FourierPoly, mu: &AtomicMeasure) -> Result<ExpectationPair> {
    if mu.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: mu.dim() });
    }
    let mut re = KahanSum::default();
    let mut im = KahanSum::default();
    for (y, a) in mu.atoms() {
        let v = f.evaluate(y)? * *a;
        re.add(v.re);
        im.add(v.im);
    }
    let direct = Complex64::new(re.value(), im.value());
    let embedding = mean_embed(f.weight(), mu, f.support_radius())?;
    let via_embedding = f.inner(&embedding)?;
    Ok(ExpectationPair { direct, via_embedding, gap: (direct - via_embedding).norm() })
}

/// The squared kernel discrepancy Σ_γ λ(γ)|μ̂(γ) − ν̂(γ)|², summed over
/// the box and certified: the discarded frequencies contribute at most
/// tail·(|μ| + |ν|)².
pub fn mmd_squared(
    w: &Weight,
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    radius: i64,
) -> Result<CertifiedValue> {
    if mu.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), got: mu.dim() });
    }
    if nu.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), got: nu.dim() });
    }
    if radius < 0 {
        return Err(Error::InvalidParameter("summation radius must be >= 0".into()));
    }
    let r = effective_radius(w, radius);
    let mut sum = KahanSum::default();
    for gamma in box_lattice(w.dim(), r)? {
        let gap = mu.fourier(&gamma)? - nu.fourier(&gamma)?;
        sum.add(w.eval(&gamma)? * gap.norm_sqr());
    }
    let reach = mu.abs_mass() + nu.abs_mass();
    let error_bound = w.tail_mass(r)?.bound * reach * reach;
    Ok(CertifiedValue { value: sum.value(), error_bound })
}

/// Point evaluation as a state: f(x) computed directly and through the
/// truncated kernel section, with a certified gap bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatePair {
    pub pointwise: Complex64,
    pub via_section: Complex64,
    /// Certified bound ‖f‖·√(tail): |pointwise − via_section| never
    /// exceeds it.
    pub tolerance: f64,
}

/// Evaluates f at x directly and as ⟨f, K_x⟩ with the radius-truncated
/// section.  The gap is controlled by ‖f‖ times the root of the weight's
/// tail mass beyond the radius.
pub fn state_eval(f: &FourierPoly, x: &TorusPoint, radius: i64) -> Result<StatePair> {
    let pointwise = f.evaluate(x)?;
    let section = section_as_poly(f.weight(), x, radius)?;
    let via_section = f.inner(&section)?;
    let r = effective_radius(f.weight(), radius);
    let tolerance = f.hnorm() * f.weight().tail_mass(r)?.bound.sqrt();
    Ok(StatePair { pointwise, via_section, tolerance })
}
