//! Random-rotation memory model.
//!
//! A single-qubit Pauli channel with `p0 = p3`, `p1 = p2`, `p0 + p1 = 1/2`
//! acts on the right tensor factor, while the left factor receives the same
//! Pauli conjugated by a random z-rotation `U = exp(−iθσ_z/2)`:
//! `σ̃_x = cos θ σ_x + sin θ σ_y`, `σ̃_y = cos θ σ_y − sin θ σ_x`, `σ̃_z = σ_z`.
//! The angle is Gaussian with mean `theta0` and standard deviation `sigma`,
//! integrated over the whole real line (no wrapping to `[0, 2π)`).
//!
//! At `theta0 = 0` the averaged channel is the subclass channel with
//! `p = p0`, `q = p1(1 + e^{−2σ²})/2`, `r = p1(1 − e^{−2σ²})/2`. For other
//! means the expansion of `σ̃` produces cross terms between `X⊗X` and `Y⊗X`
//! (and `Y⊗Y` and `X⊗Y`) that are not Pauli-diagonal; only the Monte-Carlo
//! estimator handles them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ErrorProbabilityMatrix, SubclassParams};
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 10_000;
/// Fixed number of independently seeded sample blocks; results depend on
/// `(seed, samples)` only, never on the thread count.
pub const MC_BLOCKS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianModelParams {
    pub p1: f64,
    pub sigma: f64,
    #[serde(default)]
    pub theta0: f64,
}

impl GaussianModelParams {
    pub fn new(p1: f64, sigma: f64, theta0: f64) -> Result<Self> {
        let params = Self { p1, sigma, theta0 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=0.5).contains(&self.p1) {
            return Err(Error::validation(
                "p1",
                format!("must lie in [0, 1/2], got {}", self.p1),
            ));
        }
        if !self.sigma.is_finite() || self.sigma < 0.0 {
            return Err(Error::validation(
                "sigma",
                format!("must be finite and non-negative, got {}", self.sigma),
            ));
        }
        if !self.theta0.is_finite() {
            return Err(Error::validation("theta0", "must be finite"));
        }
        Ok(())
    }

    pub fn p0(&self) -> f64 {
        0.5 - self.p1
    }
}

/// Closed-form reduction to the subclass; only valid at `theta0 = 0`.
pub fn reduce_to_subclass(params: &GaussianModelParams) -> Result<SubclassParams> {
    params.validate()?;
    if params.theta0 != 0.0 {
        return Err(Error::Unsupported(format!(
            "closed-form reduction requires theta0 = 0 (got {}); use monte_carlo_channel",
            params.theta0
        )));
    }
    let damping = (-2.0 * params.sigma * params.sigma).exp();
    let p1 = params.p1;
    let q = p1 * (1.0 + damping) / 2.0;
    let r = p1 - q;
    SubclassParams::new(params.p0(), q, r)
}

/// Memory strength at which the optimal input switches between the product
/// state and the φ = 0 Bell state: `σ* = √(−ln(3 − 1/p1)/2)`. `None` for
/// `p1 ≤ 1/3`, where the Bell state is optimal at every `σ`.
pub fn phase_boundary_sigma(p1: f64) -> Result<Option<f64>> {
    if !(p1 > 0.0 && p1 <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "p1 must lie in (0, 1/2], got {p1}"
        )));
    }
    let rhs = 3.0 - 1.0 / p1;
    if rhs <= 0.0 {
        return Ok(None);
    }
    Ok(Some((-rhs.min(1.0).ln() / 2.0).max(0.0).sqrt()))
}

/// Averaged weight of one off-diagonal Kraus product `K_a ρ K_b† + K_b ρ K_a†`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossTerm {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloEstimate {
    pub probabilities: ErrorProbabilityMatrix,
    pub stderr: [[f64; 4]; 4],
    pub cross_terms: Vec<CrossTerm>,
    pub samples: usize,
}

#[derive(Default, Clone, Copy)]
struct Moments {
    cos2: f64,
    cos2_sq: f64,
    cross: f64,
    cross_sq: f64,
}

impl Moments {
    fn merge(self, o: Moments) -> Moments {
        Moments {
            cos2: self.cos2 + o.cos2,
            cos2_sq: self.cos2_sq + o.cos2_sq,
            cross: self.cross + o.cross,
            cross_sq: self.cross_sq + o.cross_sq,
        }
    }
}

fn mean_and_stderr(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let n_f = n as f64;
    let mean = sum / n_f;
    let var = ((sum_sq - n_f * mean * mean) / (n_f - 1.0)).max(0.0);
    (mean, (var / n_f).sqrt())
}

/// Monte-Carlo average of the rotated channel over `samples` Gaussian angles.
///
/// For a sampled angle the Pauli-diagonal weights are
/// `P_11 = P_22 = p1 cos²θ` and `P_21 = P_12 = p1 sin²θ` (left index rotated),
/// while `P_00 = P_33 = p0` are deterministic. The cross-term weights are
/// `±p1 cos θ sin θ`.
pub fn monte_carlo_channel(
    params: &GaussianModelParams,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    params.validate()?;
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let normal = Normal::new(params.theta0, params.sigma)
        .map_err(|e| Error::InvalidArgument(format!("angle distribution: {e}")))?;

    let per_block = samples / MC_BLOCKS;
    let extra = samples % MC_BLOCKS;
    let blocks: Vec<Moments> = (0..MC_BLOCKS)
        .into_par_iter()
        .map(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(block as u64);
            let n = per_block + usize::from(block < extra);
            let mut m = Moments::default();
            for _ in 0..n {
                let theta: f64 = normal.sample(&mut rng);
                let (s, c) = theta.sin_cos();
                let cos2 = c * c;
                let cross = c * s;
                m.cos2 += cos2;
                m.cos2_sq += cos2 * cos2;
                m.cross += cross;
                m.cross_sq += cross * cross;
            }
            m
        })
        .collect();
    let total = blocks.into_iter().fold(Moments::default(), Moments::merge);

    let p0 = params.p0();
    let p1 = params.p1;
    let (cos2_mean, cos2_err) = mean_and_stderr(total.cos2, total.cos2_sq, samples);
    let (cross_mean, cross_err) = mean_and_stderr(total.cross, total.cross_sq, samples);
    let q = p1 * cos2_mean;
    let r = p1 - q;
    let dq = p1 * cos2_err;

    let mut probs = [[0.0; 4]; 4];
    let mut stderr = [[0.0; 4]; 4];
    probs[0][0] = p0;
    probs[3][3] = p0;
    for (i, j, value) in [(1, 1, q), (2, 2, q), (1, 2, r), (2, 1, r)] {
        probs[i][j] = value;
        stderr[i][j] = dq;
    }
    let cross_terms = vec![
        CrossTerm { a: (1, 1), b: (2, 1), mean: p1 * cross_mean, stderr: p1 * cross_err },
        CrossTerm { a: (2, 2), b: (1, 2), mean: -p1 * cross_mean, stderr: p1 * cross_err },
    ];
    Ok(MonteCarloEstimate {
        probabilities: ErrorProbabilityMatrix::new(probs)?,
        stderr,
        cross_terms,
        samples,
    })
}
