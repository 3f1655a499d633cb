//! Translation-invariant Markov semigroups attached to weight families.
//!
//! A nonnegative, symmetric symbol η on ℤ^d with η(0) = 0 defines the
//! Fourier multipliers e^{−τη(γ)}, a semigroup of operators P_τ.  Each
//! time τ yields the weight λ_τ(γ) = e^{−τη(γ)}, so one generator hands
//! out a whole scale of reproducing-kernel spaces, with λ_τ^{1/2} = λ_{τ/2}
//! tying the square-root profile of one member to another member.
//!
//! [`markov_checks`](MarkovFamily::markov_checks) measures the defining
//! properties at a concrete τ — exact mass conservation, the semigroup
//! law under time splitting, and certified nonnegativity of the
//! transition density at grid nodes — and
//! [`subconvolutivity_sweep`](MarkovFamily::subconvolutivity_sweep) runs
//! the algebra certification across a list of times.

use crate::error::{Error, Result};
use crate::limits;
use crate::torus::{box_lattice, FreqVector, Grid, LatticeNorm};
use crate::weight_analysis::{subconvolutivity_report, ConvolutionReport};
use crate::weights::Weight;
use crate::{algebra::FourierPoly, kernel::shape_function};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

// ───────────────────────── generator symbols ─────────────────────────

/// A certified pointwise lower bound η(γ) ≥ κ·|γ|∞^q outside a stored
/// table, supplied by whoever built the table.  It is what makes tail
/// certificates possible for table-backed symbols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerMinorant {
    pub kappa: f64,
    pub q: f64,
}

/// The Fourier symbol of the generator.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSymbol {
    /// η(γ) = coefficient·|γ|^exponent in the family's lattice norm.
    Power { coefficient: f64, exponent: f64 },
    /// Explicit values on a full ℓ∞ box, with a power-law minorant
    /// certifying growth outside it.
    Custom {
        table: BTreeMap<FreqVector, f64>,
        radius: i64,
        minorant: PowerMinorant,
    },
}

/// A generator symbol together with the ambient dimension and norm.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovFamily {
    d: usize,
    norm: LatticeNorm,
    symbol: GeneratorSymbol,
}

impl MarkovFamily {
    /// η(γ) = coefficient·|γ|^exponent.  The exponent must lie in (0, 1]
    /// so that the induced weights stay in the summable catalog.
    pub fn power(d: usize, coefficient: f64, exponent: f64, norm: LatticeNorm) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if !(coefficient.is_finite() && coefficient > 0.0) {
            return Err(Error::InvalidParameter("symbol coefficient must be positive".into()));
        }
        if !(exponent.is_finite() && exponent > 0.0 && exponent <= 1.0) {
            return Err(Error::InvalidParameter("symbol exponent must lie in (0, 1]".into()));
        }
        Ok(Self { d, norm, symbol: GeneratorSymbol::Power { coefficient, exponent } })
    }

    /// A table-backed symbol.  The table must cover a full ℓ∞ box, vanish
    /// at 0, be symmetric and nonnegative; the minorant certifies growth
    /// beyond the box.
    pub fn custom(
        d: usize,
        table: BTreeMap<FreqVector, f64>,
        minorant: PowerMinorant,
        norm: LatticeNorm,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if !(minorant.kappa.is_finite() && minorant.kappa > 0.0) {
            return Err(Error::InvalidParameter("minorant coefficient must be positive".into()));
        }
        if !(minorant.q.is_finite() && minorant.q > 0.0 && minorant.q <= 1.0) {
            return Err(Error::InvalidParameter("minorant exponent must lie in (0, 1]".into()));
        }
        if table.is_empty() {
            return Err(Error::InvalidParameter("symbol table is empty".into()));
        }
        let radius = table.keys().map(|g| g.linf()).max().unwrap_or(0);
        let expected = (2 * radius as u128 + 1).pow(d as u32);
        if table.len() as u128 != expected {
            return Err(Error::InvalidParameter(format!(
                "symbol table must cover the full box of radius {radius}: \
                 expected {expected} entries, found {}",
                table.len()
            )));
        }
        for (gamma, &eta) in &table {
            if gamma.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: gamma.dim() });
            }
            if !(eta.is_finite() && eta >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "symbol value at {:?} must be finite and >= 0",
                    gamma.components()
                )));
            }
            if gamma.is_zero() && eta != 0.0 {
                return Err(Error::InvalidParameter(
                    "symbol must vanish at the zero frequency".into(),
                ));
            }
            match table.get(&gamma.neg()) {
                Some(&mirror) if mirror == eta => {}
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "symbol table is not symmetric at {:?}",
                        gamma.components()
                    )))
                }
            }
        }
        Ok(Self { d, norm, symbol: GeneratorSymbol::Custom { table, radius, minorant } })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn norm(&self) -> LatticeNorm {
        self.norm
    }

    pub fn symbol(&self) -> &GeneratorSymbol {
        &self.symbol
    }

    /// η(γ): the eigenvalue of the (negated) generator on the character γ.
    pub fn symbol_value(&self, gamma: &FreqVector) -> Result<f64> {
        if gamma.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: gamma.dim() });
        }
        match &self.symbol {
            GeneratorSymbol::Power { coefficient, exponent } => {
                let n = gamma.norm(self.norm);
                Ok(if n == 0.0 { 0.0 } else { coefficient * n.powf(*exponent) })
            }
            GeneratorSymbol::Custom { table, radius, .. } => table
                .get(gamma)
                .copied()
                .ok_or_else(|| Error::OutsideTable(gamma.components().to_vec(), *radius)),
        }
    }

    /// The weight λ_τ(γ) = e^{−τη(γ)} of the space at time τ.
    pub fn weight_at(&self, tau: f64) -> Result<Weight> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidParameter("time must be positive".into()));
        }
        match &self.symbol {
            GeneratorSymbol::Power { coefficient, exponent } => {
                Weight::subexponential(self.d, tau * coefficient, *exponent, self.norm)
            }
            GeneratorSymbol::Custom { table, radius, minorant } => {
                let mapped = table
                    .iter()
                    .map(|(g, &eta)| (g.clone(), (-tau * eta).exp()))
                    .collect();
                // Outside the box, λ_τ ≤ e^{−τκ|γ|∞^q}; borrow that
                // profile's certified ℓ∞ tail.
                let envelope =
                    Weight::subexponential(self.d, tau * minorant.kappa, minorant.q, LatticeNorm::LInf)?;
                let tail = envelope.tail_mass(*radius)?;
                Weight::custom(self.d, mapped, tail)
            }
        }
    }

    /// Applies P_τ to an element by multiplying coefficients with
    /// e^{−τη(γ)}.  τ = 0 is the identity.
    pub fn apply_semigroup(&self, tau: f64, f: &FourierPoly) -> Result<FourierPoly> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidParameter("time must be >= 0".into()));
        }
        if f.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: f.dim() });
        }
        let mut coeffs = BTreeMap::new();
        for (gamma, c) in f.iter() {
            let eta = self.symbol_value(gamma)?;
            coeffs.insert(gamma.clone(), c * (-tau * eta).exp());
        }
        FourierPoly::new(f.weight().clone(), coeffs)
    }

    /// Recovers η(γ) from the weight at time τ as −ln λ_τ(γ)/τ; the
    /// result must not depend on τ, which is a checkable consistency
    /// statement about the family.
    pub fn recovered_eigenvalue(&self, tau: f64, gamma: &FreqVector) -> Result<f64> {
        let w = self.weight_at(tau)?;
        Ok(-w.eval(gamma)?.ln() / tau)
    }

    /// Largest relative gap between ξ_τ = λ_τ^{1/2} and λ_{τ/2} over the
    /// window — the square-root compatibility of the scale.
    pub fn sqrt_compatibility_defect(&self, tau: f64, window_radius: i64) -> Result<f64> {
        let w_full = self.weight_at(tau)?;
        let w_half = self.weight_at(tau / 2.0)?;
        let mut worst = 0.0_f64;
        for gamma in box_lattice(self.d, window_radius)? {
            let xi = w_full.xi(&gamma)?;
            let half = w_half.eval(&gamma)?;
            worst = worst.max((xi - half).abs() / half);
        }
        Ok(worst)
    }

    /// Runs the full property measurement at time τ; see [`MarkovReport`].
    pub fn markov_checks(
        &self,
        tau: f64,
        window_radius: i64,
        grid_resolution: usize,
    ) -> Result<MarkovReport> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidParameter("time must be positive".into()));
        }
        let w = self.weight_at(tau)?;

        // Mass conservation: P_τ fixes the constants because η(0) = 0.
        let one = FourierPoly::constant(w.clone(), num_complex::Complex64::new(1.0, 0.0))?;
        let mass_defect = self.apply_semigroup(tau, &one)?.sub(&one)?.hnorm();

        // Semigroup law under two time splittings, measured on the
        // multipliers across the window.
        let splits = [(0.5 * tau, 0.5 * tau), (0.3 * tau, 0.7 * tau)];
        let mut semigroup_defect = 0.0_f64;
        for gamma in box_lattice(self.d, window_radius)? {
            let eta = self.symbol_value(&gamma)?;
            let direct = (-tau * eta).exp();
            for (s, t) in splits {
                let chained = (-s * eta).exp() * (-t * eta).exp();
                semigroup_defect = semigroup_defect.max((chained - direct).abs());
            }
        }

        // Transition-density positivity, certified at grid nodes.
        let grid = Grid::new(self.d, grid_resolution)?;
        let budget_side = ((limits::PRODUCT_OP_CAP / grid.len() as u128) as f64)
            .powf(1.0 / self.d as f64);
        let budget_radius = (((budget_side - 1.0) / 2.0).floor() as i64).max(1);
        let mut radius = match w.truncation_radius(1e-12) {
            Ok(r) => r,
            Err(_) => budget_radius, // tails floor above the target; sum what fits
        };
        if let Some(box_r) = w.table_radius() {
            radius = radius.min(box_r);
        }
        radius = radius.min(budget_radius).max(1);

        let mut min_value = f64::INFINITY;
        let mut min_lower = f64::INFINITY;
        for x in grid.points() {
            let v = shape_function(&w, &x, radius)?;
            min_value = min_value.min(v.value);
            min_lower = min_lower.min(v.lower());
        }

        Ok(MarkovReport {
            tau,
            mass_defect,
            semigroup_defect,
            window_radius,
            density_min_value: min_value,
            density_min_lower: min_lower,
            density_nonnegative: min_lower >= 0.0,
            density_radius: radius,
            grid_resolution,
        })
    }

    /// Runs the subconvolutivity certification for each listed time.
    pub fn subconvolutivity_sweep(
        &self,
        taus: &[f64],
        window_radius: i64,
        tol: f64,
    ) -> Result<Vec<SweepEntry>> {
        taus.iter()
            .map(|&tau| {
                let report = subconvolutivity_report(&self.weight_at(tau)?, window_radius, tol)?;
                Ok(SweepEntry { tau, report })
            })
            .collect()
    }
}

/// Measured semigroup properties at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovReport {
    pub tau: f64,
    /// ‖P_τ1 − 1‖ in the time-τ space.
    pub mass_defect: f64,
    /// max over window multipliers and time splits of the chain defect.
    pub semigroup_defect: f64,
    pub window_radius: i64,
    /// Smallest sampled transition-density value.
    pub density_min_value: f64,
    /// Smallest certified lower bound (value − truncation error).
    pub density_min_lower: f64,
    /// Whether every sampled node is certifiably nonnegative.
    pub density_nonnegative: bool,
    /// Summation radius used for the density values.
    pub density_radius: i64,
    pub grid_resolution: usize,
}

/// One time in a subconvolutivity sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub tau: f64,
    pub report: ConvolutionReport,
}
