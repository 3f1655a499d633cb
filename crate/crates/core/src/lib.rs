//! Reproducing kernel Hilbert algebras on the d-torus.
//!
//! A summable weight λ : ℤ^d → (0, ∞) induces the Hilbert space of Fourier
//! series with norm ‖f‖² = Σ_γ |f̂(γ)|²/λ(γ).  When λ is subconvolutive —
//! (λ∗λ)(γ) ≤ C λ(γ) — that space is simultaneously a reproducing kernel
//! Hilbert space and a Banach *-algebra under pointwise multiplication:
//! a reproducing kernel Hilbert algebra (RKHA).  This crate makes the whole
//! construction computational:
//!
//! * [`torus`] — torus points, frequency lattice, characters, grids;
//! * [`weights`] — the weight catalog with certified tail bounds;
//! * [`weight_analysis`] — windowed subconvolutivity / subadditivity /
//!   submultiplicativity certification with rigorous convolution brackets;
//! * [`algebra`] — sparse trigonometric polynomials, weighted norms,
//!   products, involution, inversion, square roots, spectrum probes;
//! * [`kernel`] — kernel shape function, sections, the diagonal integral
//!   operator, and sup-norm/Hilbert-norm ratio experiments;
//! * [`markov`] — one-parameter families λ_τ = e^{−τη} of Markov kernels
//!   and their semigroup / positivity / subconvolutivity checks;
//! * [`embedding`] — atomic measures, kernel mean embeddings, maximum mean
//!   discrepancy, and point states evaluated two independent ways.
//!
//! Every truncation-facing routine returns a value together with a
//! certified error bound, and every enumeration respects the hard caps in
//! [`limits`].

pub mod algebra;
pub mod embedding;
pub mod error;
pub mod kernel;
pub mod limits;
pub mod markov;
pub mod torus;
pub mod weight_analysis;
pub mod weights;

pub use algebra::{FourierPoly, SolveOptions, SolveOutcome, SpectrumProbe};
pub use embedding::AtomicMeasure;
pub use error::{Error, Result};
pub use kernel::CertifiedValue;
pub use markov::MarkovFamily;
pub use torus::{box_lattice, character, FreqVector, Grid, LatticeNorm, TorusPoint};
pub use weight_analysis::{ConvolutionReport, IntervalBound, Verdict};
pub use weights::{TailBound, Weight};
