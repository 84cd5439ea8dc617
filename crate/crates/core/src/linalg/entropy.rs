use super::{NEGATIVITY_TOL, TRACE_TOL};
use crate::error::{Error, Result};

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts the input descending.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `S = -Σ λ log₂ λ` of a density-matrix spectrum, with `0·log 0 = 0`.
pub fn von_neumann_entropy(spectrum: &Spectrum) -> Result<f64> {
    let sum = spectrum.sum();
    if (sum - 1.0).abs() > TRACE_TOL {
        return Err(Error::ContractViolation(format!(
            "spectrum sums to {sum}, not 1"
        )));
    }
    let mut entropy = 0.0;
    for &l in spectrum.values() {
        if l < -NEGATIVITY_TOL {
            return Err(Error::ContractViolation(format!(
                "negative eigenvalue {l} in density-matrix spectrum"
            )));
        }
        if l > 0.0 {
            entropy -= l * l.log2();
        }
    }
    Ok(entropy.max(0.0))
}

/// `H(x) = -x log₂ x - (1-x) log₂ (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-NEGATIVITY_TOL..=1.0 + NEGATIVITY_TOL).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "binary entropy argument {x} outside [0, 1]"
        )));
    }
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn entropy_examples() {
        let s = |v: &[f64]| von_neumann_entropy(&Spectrum::new(v.to_vec())).unwrap();
        assert_eq!(s(&[1.0, 0.0, 0.0, 0.0]), 0.0);
        assert_eq!(s(&[0.25; 4]), 2.0);
        assert_eq!(s(&[0.5, 0.5, 0.0, 0.0]), 1.0);
        // tiny negative rounding is clamped
        assert_eq!(s(&[1.0, -1e-14, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn entropy_rejects_bad_spectra() {
        let bad_sum = Spectrum::new(vec![0.5, 0.4, 0.0, 0.0]);
        assert!(matches!(von_neumann_entropy(&bad_sum), Err(Error::ContractViolation(_))));
        let negative = Spectrum::new(vec![1.1, -0.1, 0.0, 0.0]);
        assert!(matches!(von_neumann_entropy(&negative), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        // log2(3) - 2/3
        let expected = 3f64.log2() - 2.0 / 3.0;
        assert!((binary_entropy(1.0 / 3.0).unwrap() - expected).abs() < 1e-15);
        assert!((binary_entropy(1.0 / 3.0).unwrap() - 0.918_295_834_054_489_6).abs() < 1e-15);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn binary_entropy_is_symmetric_on_grid() {
        for k in 0..=1000 {
            let x = k as f64 * 1e-3;
            let a = binary_entropy(x).unwrap();
            let b = binary_entropy(1.0 - x).unwrap();
            assert!((a - b).abs() <= 4.0 * f64::EPSILON, "x = {x}: {a} vs {b}");
        }
    }

    proptest! {
        #[test]
        fn entropy_permutation_invariant(raw in prop::collection::vec(0.0f64..1.0, 4), shift in 0usize..4) {
            let total: f64 = raw.iter().sum();
            prop_assume!(total > 1e-6);
            let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let mut rotated = probs.clone();
            rotated.rotate_left(shift);
            rotated.reverse();
            let a = von_neumann_entropy(&Spectrum::new(probs)).unwrap();
            let b = von_neumann_entropy(&Spectrum::new(rotated)).unwrap();
            prop_assert!((a - b).abs() < 1e-14);
            prop_assert!((0.0..=2.0 + 1e-12).contains(&a));
        }
    }
}
