//! Brute-force reference computations.
//!
//! Everything here goes through the generic 16-term Kraus sum
//! ([`PauliChannel::apply`]) and the dense Jacobi eigensolver; none of it
//! touches the closed-form output entries or block spectra of
//! [`crate::analytic`].

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::PauliChannel;
use crate::error::{Error, Result};
use crate::gaussian::{monte_carlo_channel, reduce_to_subclass, GaussianModelParams};
use crate::linalg::{hermitian_eigenvalues, von_neumann_entropy, Complex64, ComplexMatrix};

/// Arbitrary two-qubit pure state modulo global phase. The first three
/// angles (in `[0, π/2]`) fix the amplitude moduli through hyperspherical
/// coordinates, the last three are the phases of components 1..3 relative
/// to the real component 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FullPureState {
    pub angles: [f64; 6],
}

impl FullPureState {
    pub fn amplitudes(&self) -> [Complex64; 4] {
        let [a1, a2, a3, f1, f2, f3] = self.angles;
        let m0 = a1.cos();
        let m1 = a1.sin() * a2.cos();
        let m2 = a1.sin() * a2.sin() * a3.cos();
        let m3 = a1.sin() * a2.sin() * a3.sin();
        [
            Complex64::new(m0, 0.0),
            Complex64::from_polar(m1, f1),
            Complex64::from_polar(m2, f2),
            Complex64::from_polar(m3, f3),
        ]
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes()).unwrap()
    }
}

/// Output entropy of `|ψ><ψ|` by dense Kraus application and diagonalization.
pub fn entropy_bruteforce(channel: &PauliChannel, state: &FullPureState) -> Result<f64> {
    entropy_of_output(channel, &state.density_matrix())
}

pub fn entropy_of_output(channel: &PauliChannel, rho: &ComplexMatrix) -> Result<f64> {
    let out = channel.apply(rho)?;
    von_neumann_entropy(&hermitian_eigenvalues(&out)?)
}

const AMPLITUDE_DIMS: usize = 3;

fn grid_state(index: usize, n: usize) -> FullPureState {
    let mut angles = [0.0; 6];
    let mut rest = index;
    for (d, angle) in angles.iter_mut().enumerate() {
        let k = rest % n;
        rest /= n;
        *angle = if d < AMPLITUDE_DIMS {
            FRAC_PI_2 * k as f64 / (n - 1) as f64
        } else {
            2.0 * PI * k as f64 / n as f64
        };
    }
    FullPureState { angles }
}

/// Heuristic global minimum of the output entropy over all pure inputs:
/// a `coarse_grid⁶` scan, then coordinate descent with step halving from
/// each of the `restarts` best grid nodes. Deterministic; the result is never
/// worse than the best grid node.
pub fn global_minimum_search(
    channel: &PauliChannel,
    coarse_grid: usize,
    refine_iters: usize,
    restarts: usize,
) -> Result<(FullPureState, f64)> {
    if coarse_grid < 6 {
        return Err(Error::InvalidArgument(format!(
            "coarse grid needs at least 6 points per dimension, got {coarse_grid}"
        )));
    }
    let n = coarse_grid;
    let total = n.pow(6);
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|i| entropy_bruteforce(channel, &grid_state(i, n)).unwrap_or(f64::INFINITY))
        .collect();
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let steps = {
        let mut s = [2.0 * PI / n as f64; 6];
        for step in s.iter_mut().take(AMPLITUDE_DIMS) {
            *step = FRAC_PI_2 / (n - 1) as f64;
        }
        s
    };
    let refined: Vec<(FullPureState, f64)> = order
        .iter()
        .take(restarts.max(1))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|&i| coordinate_descent(channel, grid_state(i, n), values[i], steps, refine_iters))
        .collect();
    Ok(refined
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one restart"))
}

const DESCENT_TOL: f64 = 1e-10;
const MAX_PASSES: usize = 200;

fn coordinate_descent(
    channel: &PauliChannel,
    mut state: FullPureState,
    mut value: f64,
    mut steps: [f64; 6],
    halvings: usize,
) -> (FullPureState, f64) {
    let eval = |s: &FullPureState| entropy_bruteforce(channel, s).unwrap_or(f64::INFINITY);
    for _ in 0..halvings {
        for _ in 0..MAX_PASSES {
            let start = value;
            for d in 0..6 {
                for dir in [1.0, -1.0] {
                    let mut trial = state;
                    trial.angles[d] += dir * steps[d];
                    let v = eval(&trial);
                    if v < value {
                        state = trial;
                        value = v;
                        break;
                    }
                }
            }
            if start - value < DESCENT_TOL {
                break;
            }
        }
        for s in steps.iter_mut() {
            *s *= 0.5;
        }
    }
    (state, value)
}

/// One Monte-Carlo entry compared against the closed form.
#[derive(Debug, Clone, Serialize)]
pub struct EntryComparison {
    pub entry: String,
    pub estimate: f64,
    pub expected: f64,
    pub stderr: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussianReductionReport {
    pub params: GaussianModelParams,
    pub samples: usize,
    pub seed: u64,
    pub entries: Vec<EntryComparison>,
    pub max_z: f64,
    pub pass: bool,
}

pub const Z_THRESHOLD: f64 = 4.0;

fn z_score(delta: f64, stderr: f64) -> f64 {
    if stderr > 0.0 {
        delta.abs() / stderr
    } else if delta.abs() <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Compares the Monte-Carlo channel against the closed-form reduction entry
/// by entry (and the cross terms against zero). Passes when every deviation
/// is within four standard errors.
pub fn verify_gaussian_reduction(
    params: &GaussianModelParams,
    samples: usize,
    seed: u64,
) -> Result<GaussianReductionReport> {
    let exact = PauliChannel::from_subclass(reduce_to_subclass(params)?)?;
    let mc = monte_carlo_channel(params, samples, seed)?;
    let mut entries = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let estimate = mc.probabilities.get(i, j);
            let expected = exact.probabilities().get(i, j);
            let stderr = mc.stderr[i][j];
            entries.push(EntryComparison {
                entry: format!("P[{i}][{j}]"),
                estimate,
                expected,
                stderr,
                z: z_score(estimate - expected, stderr),
            });
        }
    }
    for c in &mc.cross_terms {
        entries.push(EntryComparison {
            entry: format!("cross{:?}{:?}", c.a, c.b),
            estimate: c.mean,
            expected: 0.0,
            stderr: c.stderr,
            z: z_score(c.mean, c.stderr),
        });
    }
    let max_z = entries.iter().map(|e| e.z).fold(0.0, f64::max);
    Ok(GaussianReductionReport {
        params: *params,
        samples,
        seed,
        entries,
        max_z,
        pass: max_z <= Z_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{classify_symmetric, output_entries, InputState, DEFAULT_TIE_TOL};
    use crate::channel::{SubclassParams, SymmetricChannelParams};
    use crate::sampling::random_symmetric_params;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_state_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let angles = std::array::from_fn(|_| rng.random_range(-10.0..10.0));
            let norm: f64 = FullPureState { angles }.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_channel_keeps_pure_states_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let state = FullPureState { angles: std::array::from_fn(|_| rng.random_range(0.0..6.0)) };
            assert!(entropy_bruteforce(&PauliChannel::identity(), &state).unwrap() < 1e-10);
        }
    }

    #[test]
    fn triple_point_on_ket_00() {
        let t = 1.0 / 6.0;
        let ch = PauliChannel::from_subclass(SubclassParams::new(t, t, t).unwrap()).unwrap();
        let e = entropy_bruteforce(&ch, &FullPureState { angles: [0.0; 6] }).unwrap();
        let expected = 3f64.log2() - 2.0 / 3.0;
        assert!((e - expected).abs() < 1e-12);
    }

    #[test]
    fn bruteforce_matches_analytic_on_restricted_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let params = random_symmetric_params(&mut rng);
            let state = InputState::new(rng.random_range(0.0..FRAC_PI_2), rng.random_range(0.0..2.0 * PI)).unwrap();
            let ch = PauliChannel::from_symmetric(params).unwrap();
            let brute = entropy_of_output(&ch, &state.density_matrix()).unwrap();
            let analytic = output_entries(&params, &state).entropy().unwrap();
            assert!((brute - analytic).abs() <= 1e-10);
        }
    }

    #[test]
    fn search_finds_pure_output_for_fully_correlated_channel() {
        let ch = PauliChannel::from_subclass(SubclassParams::new(0.0, 0.5, 0.0).unwrap()).unwrap();
        let (state, e) = global_minimum_search(&ch, 6, 30, 4).unwrap();
        assert!(e <= 1e-6, "entropy {e} at {state:?}");
    }

    #[test]
    fn search_on_identity_is_flat() {
        let (_, e) = global_minimum_search(&PauliChannel::identity(), 6, 2, 1).unwrap();
        assert!(e < 1e-10);
    }

    #[test]
    fn search_is_deterministic_and_beats_grid() {
        let params = SymmetricChannelParams { p: 0.2, s: 0.05, q: 0.1, r: 0.05, eta: 0.1, xi: 0.04, gamma: -0.02 };
        let ch = PauliChannel::from_symmetric(params).unwrap();
        let a = global_minimum_search(&ch, 6, 20, 3).unwrap();
        let b = global_minimum_search(&ch, 6, 20, 3).unwrap();
        assert_eq!(a, b);
        let best_grid = (0..6usize.pow(6))
            .map(|i| entropy_bruteforce(&ch, &grid_state(i, 6)).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(a.1 <= best_grid);
        let analytic = classify_symmetric(&params, DEFAULT_TIE_TOL).unwrap().entropy_bits;
        assert!(a.1 >= analytic - 1e-6);
    }

    #[test]
    fn search_rejects_tiny_grid() {
        assert!(global_minimum_search(&PauliChannel::identity(), 4, 1, 1).is_err());
    }

    #[test]
    fn gaussian_reduction_reports() {
        let exact = verify_gaussian_reduction(&GaussianModelParams::new(0.3, 0.0, 0.0).unwrap(), 20_000, 0).unwrap();
        assert!(exact.pass);
        assert_eq!(exact.max_z, 0.0);
        assert!(exact.entries.iter().all(|e| e.stderr == 0.0));

        let report = verify_gaussian_reduction(&GaussianModelParams::new(0.4, 0.5, 0.0).unwrap(), 200_000, 7).unwrap();
        assert!(report.pass, "max z {}", report.max_z);

        assert!(verify_gaussian_reduction(&GaussianModelParams::new(0.4, 0.5, 0.2).unwrap(), 20_000, 0).is_err());
    }
}
