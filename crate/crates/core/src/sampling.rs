//! Random states and channel parameters for property checks and the
//! verification suite.

use rand::Rng;

use crate::channel::{SubclassParams, SymmetricChannelParams};
use crate::linalg::{Complex64, ComplexMatrix};

/// Full-rank mixed state `G G† / tr(G G†)` from a Gaussian-ish random `G`.
pub fn random_density_matrix(rng: &mut impl Rng) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(4).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            g[(i, j)] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
    }
    let rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale(1.0 / tr)
}

pub fn random_pure_state(rng: &mut impl Rng) -> ComplexMatrix {
    let v: Vec<Complex64> = (0..4)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
    ComplexMatrix::outer(&v).unwrap()
}

/// Uniform point of the subclass simplex `p + q + r = 1/2`.
pub fn random_subclass(rng: &mut impl Rng) -> SubclassParams {
    loop {
        let q: f64 = rng.random_range(0.0..0.5);
        let r: f64 = rng.random_range(0.0..0.5);
        if q + r <= 0.5 {
            return SubclassParams::from_qr(q, r).unwrap();
        }
    }
}

/// Random member of the symmetric family, occasionally with some of the
/// seven parameters forced to zero so the sub-families get exercised.
pub fn random_symmetric_params(rng: &mut impl Rng) -> SymmetricChannelParams {
    let mut w: [f64; 5] = std::array::from_fn(|_| rng.random_range(0.0..1.0));
    if rng.random_bool(0.25) {
        let k = rng.random_range(0..5);
        w[k] = 0.0;
    }
    let total: f64 = w.iter().sum();
    let [p, s, q, r, _] = w.map(|x| 0.5 * x / total);
    let eta = (0.5 - p - s - q - r).max(0.0);
    let xi = eta * rng.random_range(-1.0..=1.0);
    let gamma = eta * rng.random_range(-1.0..=1.0);
    SymmetricChannelParams { p, s, q, r, eta, xi, gamma }
}
