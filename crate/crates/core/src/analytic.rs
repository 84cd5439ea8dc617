//! Closed-form output states, spectra and optimal inputs for the symmetric
//! channel family and its three-parameter subclass.
//!
//! Inputs are restricted to the Z⊗Z-invariant pure states
//! `cos θ |00> + sin θ e^{iφ} |11>`. On this family the channel output is
//! block diagonal (an outer block on `{|00>, |11>}` and an inner block on
//! `{|01>, |10>}`), so its spectrum follows from two 2×2 problems.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::channel::{PauliChannel, SubclassParams, SymmetricChannelParams};
use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy, hermitian_2x2_eigenvalues, kron, pauli, von_neumann_entropy, Complex64,
    ComplexMatrix, Spectrum, NEGATIVITY_TOL,
};

/// Default tolerance, in bits, below which two candidate entropies are a tie.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// `cos θ |00> + sin θ e^{iφ} |11>` with `θ ∈ [0, π/2]`, `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputState {
    pub theta: f64,
    pub phi: f64,
}

impl InputState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "theta must lie in [0, pi/2], got {theta}"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidArgument(format!("phi must be finite, got {phi}")));
        }
        Ok(Self {
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    /// `|00>`. The equally optimal `|11>` is never returned.
    pub fn product() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    /// `(|00> + |11>)/√2`
    pub fn bell_phi0() -> Self {
        Self { theta: FRAC_PI_4, phi: 0.0 }
    }

    /// `(|00> + i|11>)/√2`
    pub fn bell_phi_half_pi() -> Self {
        Self { theta: FRAC_PI_4, phi: FRAC_PI_2 }
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        let zero = Complex64::new(0.0, 0.0);
        [
            Complex64::new(self.theta.cos(), 0.0),
            zero,
            zero,
            Complex64::from_polar(self.theta.sin(), self.phi),
        ]
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes()).unwrap()
    }
}

/// Nonzero entries of the block-diagonal channel output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputEntries {
    pub e00: f64,
    pub e33: f64,
    pub e11: f64,
    pub e22: f64,
    pub e03: Complex64,
    pub e12: Complex64,
}

impl OutputEntries {
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4).unwrap();
        m[(0, 0)] = self.e00.into();
        m[(1, 1)] = self.e11.into();
        m[(2, 2)] = self.e22.into();
        m[(3, 3)] = self.e33.into();
        m[(0, 3)] = self.e03;
        m[(3, 0)] = self.e03.conj();
        m[(1, 2)] = self.e12;
        m[(2, 1)] = self.e12.conj();
        m
    }

    /// Spectrum from the two 2×2 blocks.
    pub fn spectrum(&self) -> Spectrum {
        let (a, b) = hermitian_2x2_eigenvalues(self.e00, self.e03, self.e33);
        let (c, d) = hermitian_2x2_eigenvalues(self.e11, self.e12, self.e22);
        Spectrum::new(vec![a, b, c, d])
    }

    pub fn entropy(&self) -> Result<f64> {
        von_neumann_entropy(&self.spectrum())
    }
}

pub fn output_entries(params: &SymmetricChannelParams, state: &InputState) -> OutputEntries {
    let SymmetricChannelParams { p, s, q, r, eta, xi, gamma } = *params;
    let (sin_t, cos_t) = state.theta.sin_cos();
    let cos2 = cos_t * cos_t;
    let sin2 = sin_t * sin_t;
    let sin2t = (2.0 * state.theta).sin();
    let minus = Complex64::from_polar(1.0, -state.phi);
    let plus = Complex64::from_polar(1.0, state.phi);
    OutputEntries {
        e00: 2.0 * (p + s) * cos2 + 2.0 * (q + r) * sin2,
        e33: 2.0 * (p + s) * sin2 + 2.0 * (q + r) * cos2,
        e11: eta,
        e22: eta,
        e03: (minus * (p - s) + plus * (q - r)) * sin2t,
        e12: (minus * xi + plus * gamma) * (0.5 * sin2t),
    }
}

/// `Y(φ) = q(r−p)cos²φ + r(q−p)sin²φ`
pub fn y_functional(params: &SubclassParams, phi: f64) -> f64 {
    let SubclassParams { p, q, r } = *params;
    let (s, c) = phi.sin_cos();
    q * (r - p) * c * c + r * (q - p) * s * s
}

/// Output spectrum `{λ₊, λ₋, 0, 0}` of a subclass channel, where
/// `λ± = (1 ± √(1 − 16[p(q+r) + Y sin²2θ]))/2`.
pub fn subclass_eigenvalues(params: &SubclassParams, state: &InputState) -> Result<Spectrum> {
    let SubclassParams { p, q, r } = *params;
    let sin2t = (2.0 * state.theta).sin();
    let y = y_functional(params, state.phi);
    let mut disc = 1.0 - 16.0 * (p * (q + r) + y * sin2t * sin2t);
    if disc < 0.0 {
        if disc < -NEGATIVITY_TOL {
            return Err(Error::InternalConsistency(format!(
                "negative discriminant {disc} for subclass params {params:?}"
            )));
        }
        disc = 0.0;
    }
    let root = disc.sqrt();
    Ok(Spectrum::new(vec![0.5 * (1.0 + root), 0.5 * (1.0 - root), 0.0, 0.0]))
}

/// Optimal-input phase of a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PhaseLabel {
    #[serde(rename = "product")]
    Product,
    #[serde(rename = "ent_phi0")]
    EntangledPhi0,
    #[serde(rename = "ent_phihalf")]
    EntangledPhiHalfPi,
    #[serde(rename = "tie")]
    BoundaryTie,
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::Product => "product",
            PhaseLabel::EntangledPhi0 => "ent_phi0",
            PhaseLabel::EntangledPhiHalfPi => "ent_phihalf",
            PhaseLabel::BoundaryTie => "tie",
        }
    }

    pub fn is_entangled(&self) -> bool {
        matches!(self, PhaseLabel::EntangledPhi0 | PhaseLabel::EntangledPhiHalfPi)
    }

    /// The label under the reflection `q ↔ r`.
    pub fn mirrored(&self) -> Self {
        match self {
            PhaseLabel::EntangledPhi0 => PhaseLabel::EntangledPhiHalfPi,
            PhaseLabel::EntangledPhiHalfPi => PhaseLabel::EntangledPhi0,
            other => *other,
        }
    }
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub label: PhaseLabel,
    pub state: InputState,
    pub entropy_bits: f64,
    /// Output entropies of `|00>`, the φ = 0 Bell state and the φ = π/2 Bell
    /// state, i.e. `H(2p)`, `H(2r)`, `H(2q)`.
    pub candidates: [f64; 3],
}

impl Classification {
    pub fn holevo_bits(&self) -> f64 {
        2.0 - self.entropy_bits
    }
}

/// Classifies the optimal input of a subclass channel among the three
/// extremal candidates. The two smallest candidates agreeing within
/// `tie_tol` bits yields `BoundaryTie`; the witness state is then the first
/// minimal candidate in the order product, φ = 0, φ = π/2.
pub fn classify_subclass(params: &SubclassParams, tie_tol: f64) -> Classification {
    let h = |x: f64| binary_entropy(x.clamp(0.0, 1.0)).expect("clamped argument");
    pick_candidate([h(2.0 * params.p), h(2.0 * params.r), h(2.0 * params.q)], tie_tol)
}

/// Classifies the optimal input of any symmetric-family channel.
///
/// Within the symmetric input family the output entropy is concave both in
/// `sin²2θ` (at fixed φ) and in `cos 2φ` (at θ = π/4), since each block
/// determinant is affine in those variables. The minimum is therefore
/// attained at `|00>` or at one of the Bell states with φ ∈ {0, π/2}, and
/// comparing those three candidates is exact.
pub fn classify_symmetric(params: &SymmetricChannelParams, tie_tol: f64) -> Result<Classification> {
    params.validate()?;
    let states = [
        InputState::product(),
        InputState::bell_phi0(),
        InputState::bell_phi_half_pi(),
    ];
    let mut candidates = [0.0; 3];
    for (c, state) in candidates.iter_mut().zip(&states) {
        *c = output_entries(params, state).entropy()?;
    }
    Ok(pick_candidate(candidates, tie_tol))
}

fn pick_candidate(candidates: [f64; 3], tie_tol: f64) -> Classification {
    let states = [
        InputState::product(),
        InputState::bell_phi0(),
        InputState::bell_phi_half_pi(),
    ];
    let labels = [
        PhaseLabel::Product,
        PhaseLabel::EntangledPhi0,
        PhaseLabel::EntangledPhiHalfPi,
    ];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| candidates[a].total_cmp(&candidates[b]).then(a.cmp(&b)));
    let best = order[0];
    let label = if candidates[order[1]] - candidates[best] <= tie_tol {
        PhaseLabel::BoundaryTie
    } else {
        labels[best]
    };
    Classification {
        label,
        state: states[best],
        entropy_bits: candidates[best],
        candidates,
    }
}

/// Phase predicted by the sign of `Y`: product when `Y ≥ 0` at both
/// extremal phases, otherwise the Bell state at whichever phase makes `Y`
/// smaller. `None` when `Y(0) = Y(π/2) < 0`, where the rule cannot pick.
pub fn classify_by_y_sign(params: &SubclassParams, y: impl Fn(&SubclassParams, f64) -> f64) -> Option<PhaseLabel> {
    let y0 = y(params, 0.0);
    let yh = y(params, FRAC_PI_2);
    if y0.min(yh) >= 0.0 {
        Some(PhaseLabel::Product)
    } else if y0 < yh {
        Some(PhaseLabel::EntangledPhi0)
    } else if yh < y0 {
        Some(PhaseLabel::EntangledPhiHalfPi)
    } else {
        None
    }
}

/// Holevo quantity of the uniform Pauli-covariant ensemble built on an
/// optimal state: `χ = 2 − S_min`.
pub fn holevo_covariant(optimal_entropy_bits: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&optimal_entropy_bits) {
        return Err(Error::InvalidArgument(format!(
            "output entropy must lie in [0, 2] bits, got {optimal_entropy_bits}"
        )));
    }
    Ok(2.0 - optimal_entropy_bits)
}

/// Averages the channel output over the 16 Pauli conjugates of `state` and
/// returns `‖avg − I/4‖_F`.
pub fn ensemble_average_check(channel: &PauliChannel, state: &InputState) -> Result<f64> {
    let rho = state.density_matrix();
    let mut avg = ComplexMatrix::zeros(4)?;
    for i in 0..4 {
        for j in 0..4 {
            let s = kron(&pauli(i)?, &pauli(j)?)?;
            let out = channel.apply(&s.conjugate(&rho))?;
            avg = &avg + &out.scale(1.0 / 16.0);
        }
    }
    let target = ComplexMatrix::identity(4)?.scale(0.25);
    Ok((&avg - &target).frobenius_norm())
}

fn symmetric_entropy(params: &SymmetricChannelParams, theta: f64, phi: f64) -> f64 {
    let state = InputState { theta, phi };
    output_entries(params, &state)
        .entropy()
        .expect("validated params give a density-matrix spectrum")
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimum of `f` on `[lo, hi]`, including the endpoints.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-12 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    [(lo, f(lo)), (mid, f(mid)), (hi, f(hi))]
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

/// Minimizes the closed-form output entropy over the symmetric input family:
/// a `grid_theta × grid_phi` scan followed by `refine_iters` rounds of
/// golden-section refinement, one coordinate at a time, within one grid
/// spacing of the incumbent. Refinement only ever accepts improvements.
pub fn optimize_symmetric(
    params: &SymmetricChannelParams,
    grid_theta: usize,
    grid_phi: usize,
    refine_iters: usize,
) -> Result<(InputState, f64)> {
    params.validate()?;
    if grid_theta < 16 || grid_phi < 16 {
        return Err(Error::InvalidArgument(format!(
            "grid sizes must be at least 16, got {grid_theta}x{grid_phi}"
        )));
    }
    let d_theta = FRAC_PI_2 / (grid_theta - 1) as f64;
    let d_phi = 2.0 * PI / grid_phi as f64;
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..grid_theta {
        let theta = i as f64 * d_theta;
        for j in 0..grid_phi {
            let phi = j as f64 * d_phi;
            let e = symmetric_entropy(params, theta, phi);
            if e < best.2 {
                best = (theta, phi, e);
            }
        }
    }

    let (mut theta, mut phi, mut entropy) = best;
    for _ in 0..refine_iters {
        let before = entropy;
        let lo = (theta - d_theta).max(0.0);
        let hi = (theta + d_theta).min(FRAC_PI_2);
        let (t, e) = golden_min(|t| symmetric_entropy(params, t, phi), lo, hi);
        if e < entropy {
            theta = t;
            entropy = e;
        }
        let (f, e) = golden_min(|f| symmetric_entropy(params, theta, f), phi - d_phi, phi + d_phi);
        if e < entropy {
            phi = f;
            entropy = e;
        }
        if before - entropy <= 1e-15 {
            break;
        }
    }
    Ok((InputState::new(theta, phi)?, entropy))
}
