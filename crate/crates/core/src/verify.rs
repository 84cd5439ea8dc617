//! CI-scale self-check suite behind `qmem verify`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{
    classify_by_y_sign, classify_subclass, classify_symmetric, ensemble_average_check, optimize_symmetric,
    output_entries, subclass_eigenvalues, y_functional, InputState, PhaseLabel, DEFAULT_TIE_TOL,
};
use crate::channel::{PauliChannel, SubclassParams};
use crate::error::Result;
use crate::gaussian::{phase_boundary_sigma, reduce_to_subclass, GaussianModelParams};
use crate::linalg::{hermitian_eigenvalues, Spectrum};
use crate::oracle::{entropy_of_output, global_minimum_search, verify_gaussian_reduction};
use crate::sampling::{random_density_matrix, random_subclass, random_symmetric_params};

/// Deliberate defects for mutation-testing the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates the `Y` functional fed to the sign-rule cross-check.
    FlipYSign,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

const SPECTRUM_TOL: f64 = 1e-10;
const CORRELATION_TOL: f64 = 1e-12;
const COVARIANCE_TOL: f64 = 1e-10;
const RESTRICTION_TOL: f64 = 1e-6;
const BISECTION_TOL: f64 = 1e-6;

type Check = fn(&mut ChaCha8Rng, &VerifyOptions) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("triple_point_tie", triple_point),
    ("correlation_closed_forms", correlation_closed_forms),
    ("closed_form_spectra", closed_form_spectra),
    ("bruteforce_entropy_consistency", bruteforce_consistency),
    ("pauli_covariance", covariance),
    ("covariant_ensemble_average", ensemble_average),
    ("y_sign_rule", y_sign_rule),
    ("symmetric_optimizer_agreement", optimizer_agreement),
    ("gaussian_monte_carlo", gaussian_monte_carlo),
    ("gaussian_phase_boundary", gaussian_boundary),
    ("restriction_support", restriction_support),
];

/// Runs every check. Each check draws from its own stream of `seed`, so the
/// outcome of one never depends on another.
pub fn run(options: &VerifyOptions) -> VerifyReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(k, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(k as u64);
            let (pass, detail) = match check(&mut rng, options) {
                Ok(outcome) => outcome,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckResult { name: (*name).to_string(), pass, detail }
        })
        .collect();
    VerifyReport { checks }
}

fn triple_point(_: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let t = 1.0 / 6.0;
    let c = classify_subclass(&SubclassParams::new(t, t, t)?, DEFAULT_TIE_TOL);
    let [a, b, d] = c.candidates;
    let spread = (a - b).abs().max((a - d).abs()).max((b - d).abs());
    Ok((
        spread <= 1e-12 && c.label == PhaseLabel::BoundaryTie,
        format!("candidate spread {spread:.3e}, label {}", c.label),
    ))
}

fn correlation_closed_forms(rng: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        for j in 0..50 - i {
            let params = SubclassParams::from_qr(i as f64 / 100.0, j as f64 / 100.0)?;
            let direct = PauliChannel::from_subclass(params)?.correlation_measure();
            worst = worst.max((direct - params.correlation_closed_form()).abs());
        }
    }
    for _ in 0..500 {
        let mut probs: [f64; 4] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|x| *x /= total);
        let mu = rng.random_range(0.0..=1.0);
        let direct = PauliChannel::from_mp_correlated(probs, mu)?.correlation_measure();
        let closed = mu * probs.iter().map(|x| x * (1.0 - x)).sum::<f64>();
        worst = worst.max((direct - closed).abs());
    }
    Ok((worst <= CORRELATION_TOL, format!("max deviation {worst:.3e} over 1775 points")))
}

fn random_state(rng: &mut ChaCha8Rng) -> Result<InputState> {
    InputState::new(rng.random_range(0.0..=FRAC_PI_2), rng.random_range(0.0..2.0 * PI))
}

fn dense_spectrum(channel: &PauliChannel, state: &InputState) -> Result<Spectrum> {
    hermitian_eigenvalues(&channel.apply(&state.density_matrix())?)
}

fn closed_form_spectra(rng: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let sub = random_subclass(rng);
        let state = random_state(rng)?;
        let dense = dense_spectrum(&PauliChannel::from_subclass(sub)?, &state)?;
        worst = worst.max(subclass_eigenvalues(&sub, &state)?.max_abs_diff(&dense));

        let sym = random_symmetric_params(rng);
        let state = random_state(rng)?;
        let dense = dense_spectrum(&PauliChannel::from_symmetric(sym)?, &state)?;
        worst = worst.max(output_entries(&sym, &state).spectrum().max_abs_diff(&dense));
    }
    Ok((worst <= SPECTRUM_TOL, format!("max eigenvalue deviation {worst:.3e} over 2000 draws")))
}

fn bruteforce_consistency(rng: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let sym = random_symmetric_params(rng);
        let state = random_state(rng)?;
        let brute = entropy_of_output(&PauliChannel::from_symmetric(sym)?, &state.density_matrix())?;
        worst = worst.max((brute - output_entries(&sym, &state).entropy()?).abs());
    }
    Ok((worst <= SPECTRUM_TOL, format!("max entropy deviation {worst:.3e} bits over 500 draws")))
}

fn random_general_channel(rng: &mut ChaCha8Rng) -> Result<PauliChannel> {
    let mut m: [[f64; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(0.0..1.0)));
    let total: f64 = m.iter().flatten().sum();
    m.iter_mut().flatten().for_each(|x| *x /= total);
    Ok(PauliChannel::from_general(crate::channel::ErrorProbabilityMatrix::new(m)?))
}

fn covariance(rng: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let channel = random_general_channel(rng)?;
        let rho = random_density_matrix(rng);
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max(channel.check_covariance(i, j, &rho)?);
            }
        }
    }
    Ok((worst <= COVARIANCE_TOL, format!("max residual {worst:.3e} over 10 channels x 16 pairs")))
}

fn ensemble_average(rng: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let channel = random_general_channel(rng)?;
        worst = worst.max(ensemble_average_check(&channel, &random_state(rng)?)?);
    }
    Ok((worst <= COVARIANCE_TOL, format!("max distance from I/4 {worst:.3e}")))
}

fn y_sign_rule(rng: &mut ChaCha8Rng, options: &VerifyOptions) -> Result<(bool, String)> {
    let flip = options.fault == Some(Fault::FlipYSign);
    let y = move |p: &SubclassParams, phi: f64| {
        let v = y_functional(p, phi);
        if flip {
            -v
        } else {
            v
        }
    };
    let (mut compared, mut mismatches) = (0, 0);
    for _ in 0..2000 {
        let params = random_subclass(rng);
        let c = classify_subclass(&params, DEFAULT_TIE_TOL);
        if c.label == PhaseLabel::BoundaryTie {
            continue;
        }
        compared += 1;
        if classify_by_y_sign(&params, y) != Some(c.label) {
            mismatches += 1;
        }
    }
    Ok((mismatches == 0, format!("{mismatches} mismatches among {compared} non-tie points")))
}

fn optimizer_agreement(rng: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let sym = random_symmetric_params(rng);
        let (_, numeric) = optimize_symmetric(&sym, 33, 64, 4)?;
        let exact = classify_symmetric(&sym, DEFAULT_TIE_TOL)?.entropy_bits;
        worst = worst.max((numeric - exact).abs());
    }
    Ok((worst <= 1e-8, format!("max |numeric - candidate minimum| {worst:.3e} bits")))
}

fn gaussian_monte_carlo(rng: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (p1, sigma) in [(0.4, 0.5), (0.25, 2.0)] {
        let report = verify_gaussian_reduction(&GaussianModelParams::new(p1, sigma, 0.0)?, 200_000, rng.random())?;
        worst = worst.max(report.max_z);
    }
    Ok((worst <= crate::oracle::Z_THRESHOLD, format!("max |delta|/stderr {worst:.3} at 2e5 samples")))
}

/// Smallest σ in `[0, hi]` at which the product state is at least as good as
/// the φ = 0 Bell state, by bisection on the classifier's own candidates.
pub fn empirical_flip_sigma(p1: f64, hi: f64, tol: f64) -> Result<Option<f64>> {
    let product_wins = |sigma: f64| -> Result<bool> {
        let c = classify_subclass(&reduce_to_subclass(&GaussianModelParams::new(p1, sigma, 0.0)?)?, 0.0);
        Ok(c.candidates[0] <= c.candidates[1])
    };
    if product_wins(0.0)? {
        return Ok(Some(0.0));
    }
    if !product_wins(hi)? {
        return Ok(None);
    }
    let (mut lo, mut up) = (0.0, hi);
    while up - lo > tol {
        let mid = 0.5 * (lo + up);
        if product_wins(mid)? {
            up = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + up)))
}

fn gaussian_boundary(_: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for p1 in [0.36, 0.40, 0.45, 0.50] {
        let (Some(exact), Some(found)) = (phase_boundary_sigma(p1)?, empirical_flip_sigma(p1, 10.0, BISECTION_TOL)?)
        else {
            return Ok((false, format!("no phase flip found at p1 = {p1}")));
        };
        worst = worst.max((exact - found).abs());
    }
    Ok((worst <= BISECTION_TOL, format!("max |sigma_found - sigma*| {worst:.3e}")))
}

fn restriction_support(rng: &mut ChaCha8Rng, _: &VerifyOptions) -> Result<(bool, String)> {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..2 {
        let sym = random_symmetric_params(rng);
        let (_, found) = global_minimum_search(&PauliChannel::from_symmetric(sym)?, 6, 20, 2)?;
        let restricted = classify_symmetric(&sym, DEFAULT_TIE_TOL)?.entropy_bits;
        worst = worst.max(restricted - found);
    }
    Ok((
        worst <= RESTRICTION_TOL,
        format!("largest improvement over the restricted family {worst:.3e} bits (2 channels, 6^6 grid)"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_fault_is_caught() {
        let clean = run(&VerifyOptions { seed: 0, fault: None });
        assert!(clean.checks.len() >= 6);
        for c in &clean.checks {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
        let faulty = run(&VerifyOptions { seed: 0, fault: Some(Fault::FlipYSign) });
        let failed: Vec<_> = faulty.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["y_sign_rule"]);
    }

    #[test]
    fn report_json_shape() {
        let report = VerifyReport {
            checks: vec![CheckResult { name: "a".into(), pass: true, detail: "ok".into() }],
        };
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            r#"{"checks":[{"name":"a","pass":true,"detail":"ok"}]}"#
        );
    }

    #[test]
    fn flip_sigma_matches_closed_form() {
        let found = empirical_flip_sigma(0.4, 10.0, 1e-9).unwrap().unwrap();
        assert!((found - phase_boundary_sigma(0.4).unwrap().unwrap()).abs() < 1e-8);
        assert_eq!(empirical_flip_sigma(0.2, 10.0, 1e-6).unwrap(), None);
    }
}
