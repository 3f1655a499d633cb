//! The d-torus 𝕋^d = (ℝ/ℤ)^d, its dual lattice ℤ^d, and characters.
//!
//! Conventions used throughout the crate:
//!
//! * torus coordinates are normalized to period 1 and stored in `[0, 1)`;
//! * the character attached to a frequency γ ∈ ℤ^d is
//!   x ↦ exp(2πi γ·x), so characters form an orthonormal family for the
//!   normalized Haar measure;
//! * sampling grids are the uniform lattices {(j₁/n, …, j_d/n)} traversed
//!   in lexicographic order with Haar weight 1/n^d per node.

use crate::error::{Error, Result};
use crate::limits;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

// ───────────────────────── points ─────────────────────────

/// A point on 𝕋^d with coordinates wrapped into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TorusPoint {
    coords: Vec<f64>,
}

fn wrap_unit(x: f64) -> f64 {
    let w = x.rem_euclid(1.0);
    // rem_euclid can return 1.0 when x is a tiny negative number.
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

impl TorusPoint {
    /// Builds a point, wrapping every coordinate into `[0, 1)`.
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("torus dimension must be >= 1".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("torus coordinates must be finite".into()));
        }
        Ok(Self {
            coords: coords.iter().map(|&c| wrap_unit(c)).collect(),
        })
    }

    /// The identity element (0, …, 0).
    pub fn zero(d: usize) -> Self {
        Self { coords: vec![0.0; d] }
    }

    /// Torus dimension d.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Wrapped coordinates in `[0, 1)`.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// Group addition x + y (mod 1 per coordinate).
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| wrap_unit(a + b))
                .collect(),
        })
    }

    /// Group inverse −x.
    pub fn neg(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|&a| wrap_unit(-a)).collect(),
        }
    }

    /// Group difference x − y.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Geodesic distance per coordinate, maximized over coordinates.
    pub fn dist(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let d = (a - b).abs();
                d.min(1.0 - d)
            })
            .fold(0.0, f64::max))
    }

    /// Equality up to the crate-wide point tolerance, respecting wrap-around.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dist(other).map(|d| d <= limits::POINT_TOL).unwrap_or(false)
    }
}

impl TryFrom<Vec<f64>> for TorusPoint {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(&coords)
    }
}

impl From<TorusPoint> for Vec<f64> {
    fn from(point: TorusPoint) -> Self {
        point.coords
    }
}

// ───────────────────────── frequencies ─────────────────────────

/// A frequency vector γ ∈ ℤ^d indexing the character exp(2πi γ·x).
///
/// The derived ordering is lexicographic; maps keyed by `FreqVector`
/// therefore iterate in a deterministic order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FreqVector(Vec<i64>);

impl FreqVector {
    /// Builds a frequency vector; the dimension must be at least 1.
    pub fn new(components: &[i64]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("lattice dimension must be >= 1".into()));
        }
        Ok(Self(components.to_vec()))
    }

    /// The zero frequency in dimension d.
    pub fn zero(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// Lattice dimension d.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Integer components.
    pub fn components(&self) -> &[i64] {
        &self.0
    }

    /// True when every component vanishes.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    /// Lattice sum γ + γ′.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Lattice negation −γ.
    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|&a| -a).collect())
    }

    /// Lattice difference γ − γ′.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// ℓ∞ length, the box radius that contains γ.
    pub fn linf(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Length of γ in the requested lattice norm.
    pub fn norm(&self, norm: LatticeNorm) -> f64 {
        match norm {
            LatticeNorm::L1 => self.0.iter().map(|c| c.abs() as f64).sum(),
            LatticeNorm::L2 => self
                .0
                .iter()
                .map(|c| (*c as f64) * (*c as f64))
                .sum::<f64>()
                .sqrt(),
            LatticeNorm::LInf => self.linf() as f64,
        }
    }
}

/// Which norm on ℤ^d a radial weight profile is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeNorm {
    /// Taxicab norm |γ|₁.
    L1,
    /// Euclidean norm |γ|₂ (the default).
    #[default]
    L2,
    /// Max norm |γ|∞.
    #[serde(rename = "linf")]
    LInf,
}

impl LatticeNorm {
    /// For every γ, `|γ|_self ≥ |γ|_∞ ≥ |γ|_self / linf_factor(d)`.
    ///
    /// Used to transfer tail bounds between the weight's own norm and the
    /// ℓ∞ boxes the crate enumerates.
    pub fn linf_factor(self, d: usize) -> f64 {
        match self {
            LatticeNorm::L1 => d as f64,
            LatticeNorm::L2 => (d as f64).sqrt(),
            LatticeNorm::LInf => 1.0,
        }
    }
}

/// All lattice points of the ℓ∞ box {γ : |γ|∞ ≤ radius} in lexicographic order.
pub fn box_lattice(d: usize, radius: i64) -> Result<Vec<FreqVector>> {
    if d == 0 {
        return Err(Error::InvalidParameter("lattice dimension must be >= 1".into()));
    }
    if radius < 0 {
        return Err(Error::InvalidParameter("box radius must be >= 0".into()));
    }
    let side = 2 * radius as u128 + 1;
    let count = side.checked_pow(d as u32).unwrap_or(u128::MAX);
    if count > limits::TAIL_ENUM_CAP as u128 {
        return Err(Error::ResourceCap(format!(
            "box of radius {radius} in dimension {d} holds {count} points"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![-radius; d];
    loop {
        out.push(FreqVector(current.clone()));
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if current[k] < radius {
                current[k] += 1;
                for c in current.iter_mut().skip(k + 1) {
                    *c = -radius;
                }
                break;
            }
        }
    }
}

/// Walks the ℓ∞ box {γ : |γ|∞ ≤ radius} in lexicographic order without
/// allocating a vector per point.  Callers enforce their own budgets.
pub(crate) fn for_each_in_box(d: usize, radius: i64, mut visit: impl FnMut(&[i64])) {
    debug_assert!(d >= 1 && radius >= 0);
    let mut current = vec![-radius; d];
    loop {
        visit(&current);
        let mut k = d;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if current[k] < radius {
                current[k] += 1;
                for c in current.iter_mut().skip(k + 1) {
                    *c = -radius;
                }
                break;
            }
        }
    }
}

pub(crate) fn slice_norm(components: &[i64], norm: LatticeNorm) -> f64 {
    match norm {
        LatticeNorm::L1 => components.iter().map(|c| c.abs() as f64).sum(),
        LatticeNorm::L2 => components
            .iter()
            .map(|c| (*c as f64) * (*c as f64))
            .sum::<f64>()
            .sqrt(),
        LatticeNorm::LInf => components.iter().map(|c| c.abs()).max().unwrap_or(0) as f64,
    }
}

// ───────────────────────── characters ─────────────────────────

/// Evaluates the character exp(2πi γ·x).
pub fn character(gamma: &FreqVector, x: &TorusPoint) -> Result<Complex64> {
    if gamma.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: gamma.dim(),
            got: x.dim(),
        });
    }
    // Reduce each γ_j x_j modulo 1 before accumulating so the phase stays
    // well-conditioned for large frequencies.
    let mut phase = 0.0_f64;
    for (&g, &c) in gamma.components().iter().zip(x.coords()) {
        phase += (g as f64 * c).rem_euclid(1.0);
    }
    let theta = 2.0 * std::f64::consts::PI * phase.rem_euclid(1.0);
    Ok(Complex64::from_polar(1.0, theta))
}

// ───────────────────────── grids ─────────────────────────

/// The uniform sampling grid {(j₁/n, …, j_d/n)} with n points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
    d: usize,
}

impl Grid {
    /// Builds an n-per-axis grid in dimension d, enforcing the point cap.
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("grid dimension must be >= 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("grid resolution must be >= 1".into()));
        }
        let count = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if count > limits::GRID_POINT_CAP as u128 {
            return Err(Error::ResourceCap(format!(
                "grid with {n} points per axis in dimension {d} holds {count} points"
            )));
        }
        Ok(Self { n, d })
    }

    /// Points per axis.
    pub fn resolution(&self) -> usize {
        self.n
    }

    /// Torus dimension.
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Total number of nodes n^d.
    pub fn len(&self) -> usize {
        (self.n as u128).pow(self.d as u32) as usize
    }

    /// True only for the degenerate 1-point grid.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Haar weight of a single node, 1/n^d.
    pub fn node_weight(&self) -> f64 {
        1.0 / self.len() as f64
    }

    /// Grid nodes in lexicographic order of the index tuple (j₁, …, j_d).
    pub fn points(&self) -> impl Iterator<Item = TorusPoint> + '_ {
        let n = self.n;
        let d = self.d;
        let total = self.len();
        (0..total).map(move |mut flat| {
            let mut coords = vec![0.0; d];
            for k in (0..d).rev() {
                coords[k] = (flat % n) as f64 / n as f64;
                flat /= n;
            }
            TorusPoint { coords }
        })
    }
}
