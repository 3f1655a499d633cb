//! The reproducing kernel: certified evaluation, sections, and norms.
//!
//! The weight λ induces the translation-invariant kernel
//! K(x, y) = Σ_γ λ(γ) e^{2πiγ·(y−x)} = l(y − x), where l is the shape
//! function l(u) = Σ_γ λ(γ) e^{2πiγ·u}.  Summability of λ makes l a
//! continuous real function; every routine here truncates the sum to an
//! ℓ∞ box and reports how much mass was discarded, so the returned values
//! are brackets, not approximations of unknown quality.
//!
//! Kernel sections K_x = K(x, ·) live in the ambient space with
//! ⟨f, K_x⟩ = f(x) and ‖K_x‖² = l(0), which also yields the sharp
//! sup-norm inequality ‖f‖_∞ ≤ √l(0)·‖f‖ checked by
//! [`gelfand_norm_check`].

use crate::algebra::FourierPoly;
use crate::error::{Error, Result};
use crate::torus::{character, FreqVector, Grid, TorusPoint};
use crate::weights::{KahanSum, Weight};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A real value with a rigorous two-sided error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedValue {
    pub value: f64,
    /// |true − value| is at most this.
    pub error_bound: f64,
}

impl CertifiedValue {
    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// Effective summation radius: table-backed weights cannot be summed past
/// their stored box, and the discarded region is covered by the tail
/// certificate either way.
fn effective_radius(w: &Weight, radius: i64) -> i64 {
    match w.table_radius() {
        Some(box_r) => radius.min(box_r),
        None => radius,
    }
}

/// Evaluates the shape function l(u) = Σ λ(γ) e^{2πiγ·u} over the box
/// {|γ|∞ ≤ radius}, with the discarded mass certified by the weight's
/// tail bound.  The sum of the real parts is exact for the symmetric λ,
/// so only the real part is accumulated.
pub fn shape_function(w: &Weight, u: &TorusPoint, radius: i64) -> Result<CertifiedValue> {
    if u.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), got: u.dim() });
    }
    if radius < 0 {
        return Err(Error::InvalidParameter("summation radius must be >= 0".into()));
    }
    let r = effective_radius(w, radius);
    let mut sum = KahanSum::default();
    let mut err = None;
    crate::torus::for_each_in_box(w.dim(), r, |components| {
        if err.is_some() {
            return;
        }
        let gamma = match FreqVector::new(components) {
            Ok(g) => g,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        match (w.eval(&gamma), character(&gamma, u)) {
            (Ok(lam), Ok(ch)) => sum.add(lam * ch.re),
            (Err(e), _) | (_, Err(e)) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(CertifiedValue { value: sum.value(), error_bound: w.tail_mass(r)?.bound })
}

/// Evaluates K(x, y) = l(y − x) with the same certificate.
pub fn kernel_eval(w: &Weight, x: &TorusPoint, y: &TorusPoint, radius: i64) -> Result<CertifiedValue> {
    shape_function(w, &y.sub(x)?, radius)
}

/// The truncated kernel section K_x as an element: coefficient
/// λ(γ)·e^{−2πiγ·x} at each γ in the box.
pub fn section_as_poly(w: &Weight, x: &TorusPoint, radius: i64) -> Result<FourierPoly> {
    if x.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), got: x.dim() });
    }
    if radius < 0 {
        return Err(Error::InvalidParameter("section radius must be >= 0".into()));
    }
    let r = effective_radius(w, radius);
    let mut coeffs = BTreeMap::new();
    for gamma in crate::torus::box_lattice(w.dim(), r)? {
        let lam = w.eval(&gamma)?;
        let phase = character(&gamma, x)?.conj();
        coeffs.insert(gamma, phase * lam);
    }
    FourierPoly::new(w.clone(), coeffs)
}

/// Applies the kernel integral operator: on the frequency side it
/// multiplies each coefficient by λ(γ).  It is positive and self-adjoint,
/// with ⟨Kf, g⟩ equal to the unweighted coefficient pairing Σ f̂ ĝ̄.
pub fn apply_kernel_operator(f: &FourierPoly) -> Result<FourierPoly> {
    let w = f.weight().clone();
    let mut coeffs = BTreeMap::new();
    for (gamma, c) in f.iter() {
        coeffs.insert(gamma.clone(), c * w.eval(gamma)?);
    }
    FourierPoly::new(w, coeffs)
}

/// Comparison of a sampled sup norm against the ambient norm and the
/// kernel-diagonal bound √l(0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GelfandReport {
    /// max |f| over the sample grid (a lower bound for the true sup norm).
    pub sup_abs: f64,
    pub hnorm: f64,
    /// sup_abs / hnorm.
    pub ratio: f64,
    /// Certified upper bound √(l(0) + tail) valid for every element.
    pub bound: f64,
    /// bound − ratio; nonnegative whenever the theory holds.
    pub slack: f64,
}

/// Measures sup|f|/‖f‖ on a grid and compares it to the certified upper
/// bound √l(0).  `bound_radius` controls how far l(0) = Σ λ(γ) is summed
/// before the tail certificate takes over.
pub fn gelfand_norm_check(f: &FourierPoly, grid: &Grid, bound_radius: i64) -> Result<GelfandReport> {
    let hnorm = f.hnorm();
    if hnorm == 0.0 {
        return Err(Error::Domain("the zero element has no norm ratio".into()));
    }
    let values = f.values_on_grid(grid)?;
    let sup_abs = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let diag = shape_function(f.weight(), &TorusPoint::zero(f.dim()), bound_radius)?;
    let bound = diag.upper().sqrt();
    let ratio = sup_abs / hnorm;
    Ok(GelfandReport { sup_abs, hnorm, ratio, bound, slack: bound - ratio })
}
