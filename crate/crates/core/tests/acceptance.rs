//! End-to-end acceptance gate: nine measured criteria, one per test,
//! each printing a single PASS/FAIL line with the governing numbers.
//!
//! Everything here goes through the public API, uses fixed seeds, and
//! states tolerances inline so the gate is reproducible bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rkha::algebra::{
    banach_constant, spectrum_probe, sqrt_positive, FourierPoly, SolveOptions, SpectrumProbe,
};
use rkha::embedding::{expect, mean_embed, mmd_squared, state_eval, AtomicMeasure};
use rkha::kernel::{apply_kernel_operator, gelfand_norm_check, kernel_eval, section_as_poly, shape_function};
use rkha::markov::MarkovFamily;
use rkha::torus::{FreqVector, Grid, LatticeNorm, TorusPoint};
use rkha::weight_analysis::{
    square_preserves_subconvolutivity, subadditivity_report, subconvolutivity_report, Verdict,
};
use rkha::weights::Weight;
use std::collections::BTreeMap;

fn conclude(number: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "[acceptance] criterion {number} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn rough_weight() -> Weight {
    Weight::subexponential(1, 1.0, 0.5, LatticeNorm::L2).unwrap()
}

fn geometric_weight() -> Weight {
    Weight::subexponential(1, 1.0, 1.0, LatticeNorm::L2).unwrap()
}

fn freq(k: i64) -> FreqVector {
    FreqVector::new(&[k]).unwrap()
}

fn point(x: f64) -> TorusPoint {
    TorusPoint::new(&[x]).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_poly(rng: &mut ChaCha8Rng, w: &Weight, radius: i64) -> FourierPoly {
    let coeffs = (-radius..=radius)
        .map(|k| (freq(k), c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect();
    FourierPoly::new(w.clone(), coeffs).unwrap()
}

fn poisson_exact(tau: f64, u: f64) -> f64 {
    let r = (-tau).exp();
    (1.0 - r * r) / (1.0 - 2.0 * r * (std::f64::consts::TAU * u).cos() + r * r)
}

// ─────────────────────────────────────────────────────────────────────────
// 1. Weight certification for e^{−|γ|^{1/2}}: the windowed convolution
//    ratio must certify and stabilize at 1e−6 under radius doubling.  The
//    window constant of the subadditivity functional for λ⁻¹ must be
//    finite and deterministic; for this stretched-exponential profile it
//    provably grows with the window (the pair (ρ, ρ) alone forces
//    e^{(√2−1)√ρ}/2), so the "stable constant ⇒ subconvolutive" chain is
//    exhibited on the polynomial-decay profile, where the constant is
//    genuinely window-stable.
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_1_weight_certification() {
    let w = rough_weight();
    let report = subconvolutivity_report(&w, 16, 1e-6).unwrap();
    let certified = report.verdict == Verdict::CertifiedBounded;
    let stabilized = report.history.len() >= 3 && report.c_meas.is_finite();

    let add32 = subadditivity_report(&w, 32).unwrap();
    let add64 = subadditivity_report(&w, 64).unwrap();
    let add64_again = subadditivity_report(&w, 64).unwrap();
    let finite = add32.constant.is_finite() && add64.constant.is_finite();
    let deterministic = add64.constant.to_bits() == add64_again.constant.to_bits();
    // Documented growth: the corner pair makes the constant increase with
    // the window for this profile.
    let corner = ((2.0_f64.sqrt() - 1.0) * 64.0_f64.sqrt()).exp() / 2.0;
    let grows_as_predicted = add64.constant >= corner * (1.0 - 1e-12) && add64.constant > add32.constant;

    // The chain "inverse-root subadditive with a stable window constant,
    // root summable ⇒ subconvolutive" on |γ|^{−3} with stable ≤ 2% drift.
    let half = Weight::polynomial_decay(1, 1.5, LatticeNorm::L2).unwrap();
    let chain64 = subadditivity_report(&half, 64).unwrap().constant;
    let chain128 = subadditivity_report(&half, 128).unwrap().constant;
    let drift = (chain128 - chain64).abs() / chain128;
    let chain_stable = drift < 0.02;
    let full = Weight::polynomial_decay(1, 3.0, LatticeNorm::L2).unwrap();
    let chain_cert = subconvolutivity_report(&full, 16, 1e-6).unwrap().verdict
        == Verdict::CertifiedBounded;

    let pass = certified && stabilized && finite && deterministic && grows_as_predicted
        && chain_stable && chain_cert;
    conclude(
        1,
        "weight certification",
        pass,
        &format!(
            "C_meas = {:.6} certified at radius {}; inverse-weight subadditivity constant \
             finite and deterministic but window-growing for the stretched profile \
             (32→64: {:.3}→{:.3}); stable chain on cubic decay: drift {:.3}% with \
             subconvolutivity certified",
            report.c_meas,
            report.final_radius,
            add32.constant,
            add64.constant,
            drift * 100.0
        ),
    );
}

// ─────────────────────────────────────────────────────────────────────────
// 2. Banach inequality: 10³ random coefficient pairs supported in the box
//    of radius 8 must satisfy ‖fg‖ ≤ √C_meas·‖f‖·‖g‖ with zero
//    violations, with C_meas certified on a window that contains every
//    product frequency; involution is an isometry to 1e−12 on the corpus.
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_2_banach_inequality() {
    let w = rough_weight();
    let report = subconvolutivity_report(&w, 16, 1e-6).unwrap();
    let bound = banach_constant(&report).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    let mut violations = 0u32;
    let mut worst_margin = 0.0_f64;
    let mut worst_isometry = 0.0_f64;
    for _ in 0..1000 {
        let f = random_poly(&mut rng, &w, 8);
        let g = random_poly(&mut rng, &w, 8);
        let lhs = f.multiply(&g).unwrap().hnorm();
        let rhs = bound * f.hnorm() * g.hnorm();
        if lhs > rhs * (1.0 + 1e-12) {
            violations += 1;
        }
        worst_margin = worst_margin.max(lhs / rhs);
        for h in [&f, &g] {
            let gap = (h.involution().hnorm() - h.hnorm()).abs() / h.hnorm();
            worst_isometry = worst_isometry.max(gap);
        }
    }
    let pass = violations == 0 && worst_isometry <= 1e-12;
    conclude(
        2,
        "Banach inequality",
        pass,
        &format!(
            "0 of 1000 pairs violate ‖fg‖ ≤ {bound:.6}·‖f‖‖g‖ (worst ratio {:.4} of the \
             bound); involution isometry defect ≤ {worst_isometry:.2e}",
            worst_margin
        ),
    );
}

// ─────────────────────────────────────────────────────────────────────────
// 3. Reproducing property and two-path kernel consistency: ⟨f, K_x⟩ must
//    equal f(x) to 1e−11 over 10³ random (f, x); the kernel value
//    computed as a direct shape-function sum must match the inner product
//    of two sections to 1e−11, in dimension one and two.
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_3_reproducing_and_two_path() {
    let w = rough_weight();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
    let mut worst_repro = 0.0_f64;
    for _ in 0..1000 {
        let f = random_poly(&mut rng, &w, 8);
        let x = point(rng.random_range(0.0..1.0));
        let section = section_as_poly(&w, &x, 16).unwrap();
        let gap = (f.inner(&section).unwrap() - f.evaluate(&x).unwrap()).norm();
        worst_repro = worst_repro.max(gap / (1.0 + f.evaluate(&x).unwrap().norm()));
    }

    let mut worst_two_path = 0.0_f64;
    for _ in 0..20 {
        let x = point(rng.random_range(0.0..1.0));
        let y = point(rng.random_range(0.0..1.0));
        let direct = kernel_eval(&w, &y, &x, 24).unwrap().value;
        let sx = section_as_poly(&w, &x, 24).unwrap();
        let sy = section_as_poly(&w, &y, 24).unwrap();
        let paired = sy.inner(&sx).unwrap();
        worst_two_path = worst_two_path
            .max((paired.re - direct).abs() / (1.0 + direct.abs()))
            .max(paired.im.abs());
    }
    let w2 = Weight::subexponential(2, 1.0, 0.5, LatticeNorm::L2).unwrap();
    for _ in 0..5 {
        let x = TorusPoint::new(&[rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).unwrap();
        let y = TorusPoint::new(&[rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).unwrap();
        let direct = kernel_eval(&w2, &y, &x, 8).unwrap().value;
        let sx = section_as_poly(&w2, &x, 8).unwrap();
        let sy = section_as_poly(&w2, &y, 8).unwrap();
        let paired = sy.inner(&sx).unwrap();
        worst_two_path = worst_two_path.max((paired.re - direct).abs() / (1.0 + direct.abs()));
    }

    let pass = worst_repro <= 1e-11 && worst_two_path <= 1e-11;
    conclude(
        3,
        "reproducing property",
        pass,
        &format!(
            "worst reproduction gap {worst_repro:.2e} over 1000 draws; worst two-path \
             kernel gap {worst_two_path:.2e} (T¹ radius 24, T² radius 8)"
        ),
    );
}

// ─────────────────────────────────────────────────────────────────────────
// 4. Eigen-action of the kernel operator: applying it to a character must
//    return exactly λ(γ) times the character — bitwise, no tolerance —
//    for every γ in the radius-32 box (and a radius-8 box on T²).
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_4_eigen_action() {
    let mut exact = true;
    let w = rough_weight();
    for k in -32i64..=32 {
        let gamma = freq(k);
        let mode = FourierPoly::monomial(w.clone(), gamma.clone(), c(1.0, 0.0)).unwrap();
        let applied = apply_kernel_operator(&mode).unwrap();
        let lam = w.eval(&gamma).unwrap();
        exact &= applied.len() == 1
            && applied.coeff(&gamma).re.to_bits() == lam.to_bits()
            && applied.coeff(&gamma).im == 0.0;
    }
    let w2 = Weight::polynomial_decay(2, 3.0, LatticeNorm::L2).unwrap();
    for gamma in rkha::box_lattice(2, 8).unwrap() {
        let mode = FourierPoly::monomial(w2.clone(), gamma.clone(), c(1.0, 0.0)).unwrap();
        let applied = apply_kernel_operator(&mode).unwrap();
        let lam = w2.eval(&gamma).unwrap();
        exact &= applied.len() == 1
            && applied.coeff(&gamma).re.to_bits() == lam.to_bits()
            && applied.coeff(&gamma).im == 0.0;
    }
    conclude(
        4,
        "eigen-action",
        exact,
        "K(character γ) = λ(γ)·γ bitwise for all 65 modes in the T¹ radius-32 box \
         and all 289 modes in the T² radius-8 box",
    );
}

// ─────────────────────────────────────────────────────────────────────────
// 5. Sup-norm/Hilbert-norm ratio: the normalized kernel section based at
//    a grid node must attain √(truncated l(0)) to 1e−9, and none of 10³
//    random elements may exceed the certified bound √(l(0) + tail).
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_5_norm_ratio_saturation() {
    let w = geometric_weight();
    let section = section_as_poly(&w, &point(0.3), 32).unwrap();
    let grid = Grid::new(1, 520).unwrap(); // contains 0.3 = 156/520 exactly
    let report = gelfand_norm_check(&section, &grid, 32).unwrap();
    let truncated_diag = shape_function(&w, &point(0.0), 32).unwrap().value.sqrt();
    let attainment = (report.ratio - truncated_diag).abs() / truncated_diag;

    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let f = random_poly(&mut rng, &w, 12);
        let r = gelfand_norm_check(&f, &f.oversampled_grid().unwrap(), 32).unwrap();
        worst_excess = worst_excess.max(r.ratio - r.bound);
    }
    let pass = attainment <= 1e-9 && worst_excess <= 1e-12;
    conclude(
        5,
        "norm-ratio saturation",
        pass,
        &format!(
            "section ratio {:.12} vs √(truncated l(0)) = {truncated_diag:.12} \
             (relative gap {attainment:.2e}); max over 1000 random elements of \
             ratio − bound = {worst_excess:.2e}",
            report.ratio
        ),
    );
}

// ─────────────────────────────────────────────────────────────────────────
// 6. Spectrum equals range: for five catalog functions, every probe point
//    at measured distance ≥ 0.1 from the sampled range must invert with
//    residual ≤ 1e−8 at truncation radius 64, and every probe taken on
//    the sampled range must fail to certify; five strictly positive
//    functions must yield square roots with residual ≤ 1e−8 and strictly
//    positive grid values.
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_6_spectrum_equals_range() {
    let w = rough_weight();
    let catalog: Vec<(&str, FourierPoly)> = vec![
        (
            "half-cosine",
            FourierPoly::new(
                w.clone(),
                BTreeMap::from([(freq(-1), c(0.25, 0.0)), (freq(1), c(0.25, 0.0))]),
            )
            .unwrap(),
        ),
        (
            "shifted wave",
            FourierPoly::new(
                w.clone(),
                BTreeMap::from([
                    (freq(-1), c(0.15, 0.1)),
                    (freq(0), c(1.0, 0.0)),
                    (freq(1), c(0.15, -0.1)),
                ]),
            )
            .unwrap(),
        ),
        (
            "double frequency",
            FourierPoly::new(
                w.clone(),
                BTreeMap::from([
                    (freq(-2), c(0.2, 0.0)),
                    (freq(0), c(0.1, 0.0)),
                    (freq(2), c(0.2, 0.0)),
                ]),
            )
            .unwrap(),
        ),
        (
            "one-sided",
            FourierPoly::new(
                w.clone(),
                BTreeMap::from([
                    (freq(-2), c(0.1, 0.0)),
                    (freq(0), c(0.2, 0.0)),
                    (freq(1), c(0.3, 0.0)),
                ]),
            )
            .unwrap(),
        ),
        (
            "triple cosine",
            FourierPoly::new(
                w.clone(),
                BTreeMap::from([
                    (freq(-3), c(0.075, 0.0)),
                    (freq(-1), c(0.125, 0.0)),
                    (freq(0), c(0.25, 0.0)),
                    (freq(1), c(0.125, 0.0)),
                    (freq(3), c(0.075, 0.0)),
                ]),
            )
            .unwrap(),
        ),
    ];
    let opts = SolveOptions { radius: 64, tol: 1e-8, max_iters: 100 };

    let mut off_range_probes = 0u32;
    let mut off_range_certified = 0u32;
    let mut on_range_probes = 0u32;
    let mut on_range_failed = 0u32;
    let mut worst_residual = 0.0_f64;

    for (_name, f) in &catalog {
        let values = f.values_on_grid(&f.oversampled_grid().unwrap()).unwrap();
        let centroid = values.iter().sum::<Complex64>() / values.len() as f64;
        let spread = values.iter().map(|v| (v - centroid).norm()).fold(0.0, f64::max);

        for j in 0..5 {
            let theta = std::f64::consts::TAU * j as f64 / 5.0;
            let z = centroid + Complex64::from_polar(spread + 0.35, theta);
            let dist = values.iter().map(|v| (v - z).norm()).fold(f64::INFINITY, f64::min);
            if dist < 0.1 {
                continue; // only distance-qualified probes count
            }
            off_range_probes += 1;
            match spectrum_probe(f, z, &opts).unwrap() {
                SpectrumProbe::Resolvent(out) if out.residual <= 1e-8 => {
                    off_range_certified += 1;
                    worst_residual = worst_residual.max(out.residual);
                }
                _ => {}
            }
        }

        for j in [3usize, 11] {
            let z = values[j % values.len()];
            on_range_probes += 1;
            match spectrum_probe(f, z, &opts).unwrap() {
                SpectrumProbe::Resolvent(_) => {}
                SpectrumProbe::RangeHit { .. } | SpectrumProbe::Unresolved { .. } => {
                    on_range_failed += 1;
                }
            }
        }
    }

    let positives: Vec<FourierPoly> = vec![
        FourierPoly::new(
            w.clone(),
            BTreeMap::from([
                (freq(-2), c(0.04, 0.0)),
                (freq(-1), c(0.4, 0.0)),
                (freq(0), c(1.08, 0.0)),
                (freq(1), c(0.4, 0.0)),
                (freq(2), c(0.04, 0.0)),
            ]),
        )
        .unwrap(),
        FourierPoly::new(
            w.clone(),
            BTreeMap::from([(freq(-1), c(0.25, 0.0)), (freq(0), c(1.5, 0.0)), (freq(1), c(0.25, 0.0))]),
        )
        .unwrap(),
        FourierPoly::new(
            w.clone(),
            BTreeMap::from([
                (freq(-2), c(0.1, 0.0)),
                (freq(-1), c(0.15, 0.0)),
                (freq(0), c(2.0, 0.0)),
                (freq(1), c(0.15, 0.0)),
                (freq(2), c(0.1, 0.0)),
            ]),
        )
        .unwrap(),
        FourierPoly::new(
            w.clone(),
            BTreeMap::from([(freq(-2), c(0.2, 0.0)), (freq(0), c(1.4, 0.0)), (freq(2), c(0.2, 0.0))]),
        )
        .unwrap(),
        FourierPoly::new(
            w.clone(),
            BTreeMap::from([(freq(-3), c(0.15, 0.0)), (freq(0), c(0.5, 0.0)), (freq(3), c(0.15, 0.0))]),
        )
        .unwrap(),
    ];
    let mut roots_ok = 0u32;
    for f in &positives {
        let out = sqrt_positive(f, &opts).unwrap();
        let grid_vals = out.result.values_on_grid(&out.result.oversampled_grid().unwrap()).unwrap();
        let min_re = grid_vals.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        if out.residual <= 1e-8 && min_re > 0.0 {
            roots_ok += 1;
        }
    }

    let pass = off_range_probes >= 15
        && off_range_certified == off_range_probes
        && on_range_failed == on_range_probes
        && roots_ok == positives.len() as u32;
    conclude(
        6,
        "spectrum equals range",
        pass,
        &format!(
            "{off_range_certified}/{off_range_probes} distance-qualified probes inverted \
             (worst residual {worst_residual:.2e}); {on_range_failed}/{on_range_probes} \
             on-range probes refused certification; {roots_ok}/5 positive square roots at \
             residual ≤ 1e−8 with positive grid values"
        ),
    );
}

// ─────────────────────────────────────────────────────────────────────────
// 7. Markov family at exponent 1: mass conservation exact at every τ,
//    semigroup defect < 1e−13, the explicit geometric-series kernel
//    matched within the certified tail bound at 20 points, and the
//    subconvolutivity certified for τ ∈ {1/2, 1, 2}.
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_7_markov_suite() {
    let fam = MarkovFamily::power(1, 1.0, 1.0, LatticeNorm::L2).unwrap();
    let taus = [0.5, 1.0, 2.0];

    let mut mass_exact = true;
    let mut worst_semigroup = 0.0_f64;
    for &tau in &taus {
        let report = fam.markov_checks(tau, 16, 32).unwrap();
        mass_exact &= report.mass_defect == 0.0;
        worst_semigroup = worst_semigroup.max(report.semigroup_defect);
    }

    let w = fam.weight_at(1.0).unwrap();
    let mut kernel_matches = true;
    let mut worst_gap_over_bound = 0.0_f64;
    for j in 0..20 {
        let x = point(j as f64 / 20.0 + 0.013);
        let got = shape_function(&w, &x, 24).unwrap();
        let exact = poisson_exact(1.0, x.coords()[0]);
        let gap = (got.value - exact).abs();
        kernel_matches &= gap <= got.error_bound;
        worst_gap_over_bound = worst_gap_over_bound.max(gap / got.error_bound);
    }

    let sweep = fam.subconvolutivity_sweep(&taus, 16, 1e-6).unwrap();
    let all_certified = sweep.iter().all(|e| e.report.verdict == Verdict::CertifiedBounded);

    let pass = mass_exact && worst_semigroup < 1e-13 && kernel_matches && all_certified;
    conclude(
        7,
        "Markov suite",
        pass,
        &format!(
            "mass defect exactly 0 at all τ; semigroup defect ≤ {worst_semigroup:.2e}; \
             explicit kernel within certified bound at 20/20 points (worst gap/bound \
             {worst_gap_over_bound:.3}); subconvolutivity certified at τ = 0.5, 1, 2"
        ),
    );
}

// ─────────────────────────────────────────────────────────────────────────
// 8. Embedding suite: two-path expectations to 1e−11; the discrepancy of
//    δ_x against δ_{x+2^{−n}} strictly decreasing and geometrically
//    vanishing; the two-point closed form matched to 1e−10; and point
//    states matched within the tail-driven certificate.
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_8_embedding_suite() {
    let w_rough = rough_weight();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);

    let mut worst_expectation = 0.0_f64;
    for _ in 0..200 {
        let f = random_poly(&mut rng, &w_rough, 8);
        let atoms = (0..4)
            .map(|_| (point(rng.random_range(0.0..1.0)), rng.random_range(-1.0..1.5)))
            .collect();
        let mu = AtomicMeasure::new(atoms).unwrap();
        let pair = expect(&f, &mu).unwrap();
        worst_expectation = worst_expectation.max(pair.gap / (1.0 + pair.direct.norm()));
    }

    let w = geometric_weight();
    let base = 0.2;
    let mut mmds = Vec::new();
    for n in 2..=12 {
        let mu = AtomicMeasure::new(vec![(point(base), 1.0)]).unwrap();
        let nu = AtomicMeasure::new(vec![(point(base + 0.5_f64.powi(n)), 1.0)]).unwrap();
        let value = mmd_squared(&w, &mu, &nu, 48).unwrap().value.max(0.0).sqrt();
        mmds.push(value);
    }
    let strictly_decreasing = mmds.windows(2).all(|p| p[1] < p[0]);
    let geometric = mmds
        .windows(2)
        .skip(4)
        .all(|p| (0.4..0.6).contains(&(p[1] / p[0])));
    let vanishes = *mmds.last().unwrap() < 5e-3;

    let mut worst_closed_form = 0.0_f64;
    for _ in 0..10 {
        let x = rng.random_range(0.0..1.0);
        let y = rng.random_range(0.0..1.0);
        let mu = AtomicMeasure::new(vec![(point(x), 1.0)]).unwrap();
        let nu = AtomicMeasure::new(vec![(point(y), 1.0)]).unwrap();
        let got = mmd_squared(&w, &mu, &nu, 48).unwrap().value;
        let exact = 2.0 * (poisson_exact(1.0, 0.0) - poisson_exact(1.0, y - x));
        worst_closed_form = worst_closed_form.max((got - exact).abs());
    }

    let mut states_within = true;
    let mut covering_exact = 0.0_f64;
    for _ in 0..200 {
        let f = random_poly(&mut rng, &w_rough, 8);
        let x = point(rng.random_range(0.0..1.0));
        let short = state_eval(&f, &x, 4).unwrap();
        states_within &= (short.pointwise - short.via_section).norm() <= short.tolerance;
        let full = state_eval(&f, &x, 16).unwrap();
        covering_exact = covering_exact
            .max((full.pointwise - full.via_section).norm() / (1.0 + f.hnorm()));
    }

    let pass = worst_expectation <= 1e-11
        && strictly_decreasing
        && geometric
        && vanishes
        && worst_closed_form <= 1e-10
        && states_within
        && covering_exact <= 1e-12;
    conclude(
        8,
        "embedding suite",
        pass,
        &format!(
            "two-path expectation gap ≤ {worst_expectation:.2e} over 200 draws; \
             shrinking-pair discrepancy strictly decreasing over n = 2..12 with ratio ≈ 1/2 \
             and final value {:.2e}; closed-form gap ≤ {worst_closed_form:.2e}; \
             200/200 point states inside the tail certificate (covering-section gap ≤ {covering_exact:.2e})",
            mmds.last().unwrap()
        ),
    );
}

// ─────────────────────────────────────────────────────────────────────────
// 9. Squaring the root profile: the measured constant of ξ² must not
//    exceed the square of the measured constant of ξ beyond 1e−6, for
//    ξ = e^{−|γ|^{1/2}}.
// ─────────────────────────────────────────────────────────────────────────
#[test]
fn criterion_9_square_preservation() {
    let xi = rough_weight();
    let cmp = square_preserves_subconvolutivity(&xi, 16, 1e-6).unwrap();
    let both_certified = cmp.base.verdict == Verdict::CertifiedBounded
        && cmp.squared.verdict == Verdict::CertifiedBounded;
    let pass = both_certified && cmp.holds && cmp.ratio <= 1.0 + 1e-6;
    conclude(
        9,
        "square preservation",
        pass,
        &format!(
            "C_meas(ξ²) = {:.6} vs C_meas(ξ)² = {:.6}: ratio {:.4} ≤ 1 + 1e−6",
            cmp.squared.c_meas,
            cmp.base.c_meas * cmp.base.c_meas,
            cmp.ratio
        ),
    );
}

// The embedding expectation check needs `mean_embed` to stay honest about
// weighted coefficients; exercise it once directly so the acceptance
// target fails loudly if the embedding convention drifts.
#[test]
fn embedding_convention_spot_check() {
    let w = geometric_weight();
    let mu = AtomicMeasure::new(vec![(point(0.25), 1.0)]).unwrap();
    let m = mean_embed(&w, &mu, 8).unwrap();
    // Coefficient at γ: λ(γ)·e^{−2πiγ/4}; at γ = 1 that is −i·λ(1).
    let lam = w.eval(&freq(1)).unwrap();
    assert!((m.coeff(&freq(1)) - c(0.0, -lam)).norm() < 1e-15);
}
