use num_complex::Complex64;

use super::{ComplexMatrix, Spectrum};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix, sorted descending, via cyclic complex
/// Jacobi rotations. This is the generic dense path; it knows nothing about
/// the block structure of channel outputs.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Spectrum> {
    jacobi(m, false).map(|(spec, _)| spec)
}

/// Eigenvalues (descending) and the unitary whose columns are the matching
/// eigenvectors, so that `m = V·diag(λ)·V†`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Spectrum, ComplexMatrix)> {
    jacobi(m, true).map(|(spec, v)| (spec, v.expect("eigenvectors requested")))
}

/// Closed-form eigenvalues `(larger, smaller)` of the Hermitian 2×2 block
/// `[[a, b], [b*, c]]`.
pub fn hermitian_2x2_eigenvalues(a: f64, b: Complex64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + c);
    let half_gap = 0.5 * (a - c);
    let radius = half_gap.hypot(b.norm());
    (mean + radius, mean - radius)
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Spectrum, Option<ComplexMatrix>)> {
    if !m.is_hermitian(HERMITIAN_TOL * m.frobenius_norm().max(1.0)) {
        return Err(Error::ContractViolation(
            "eigensolver input is not Hermitian".into(),
        ));
    }
    let n = m.dim();
    let mut a = m.clone();
    // Symmetrize so rounding in the caller's construction cannot accumulate.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = if want_vectors {
        Some(ComplexMatrix::identity(n)?)
    } else {
        None
    };
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok((Spectrum::new(vec![0.0; n]), v));
    }

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let values = pairs.iter().map(|&(l, _)| l).collect();
    let vectors = v.map(|v| {
        let mut sorted = v.clone();
        for (col, &(_, src)) in pairs.iter().enumerate() {
            for row in 0..n {
                sorted[(row, col)] = v[(row, src)];
            }
        }
        sorted
    });
    Ok((Spectrum::new(values), vectors))
}

/// One Jacobi step annihilating `a[p][q]`: first a diagonal phase makes the
/// pivot real, then a real plane rotation zeroes it.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag; // e^{iα}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G restricted to the (p, q) plane: [[c, s], [-s·e^{-iα}, c·e^{-iα}]].
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * g_pp + vkq * g_qp;
            v[(k, q)] = vkp * g_pq + vkq * g_qq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n).unwrap();
        for i in 0..n {
            m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn diagonal_input() {
        let m = ComplexMatrix::from_real_diagonal(&[0.4, 0.0, 0.6, 0.0]).unwrap();
        let spec = hermitian_eigenvalues(&m).unwrap();
        assert_eq!(spec.values(), &[0.6, 0.4, 0.0, 0.0]);
    }

    #[test]
    fn two_by_two_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = random_hermitian(&mut rng, 2);
            let (hi, lo) = hermitian_2x2_eigenvalues(m[(0, 0)].re, m[(0, 1)], m[(1, 1)].re);
            let spec = hermitian_eigenvalues(&m).unwrap();
            assert!((spec.values()[0] - hi).abs() < 1e-13);
            assert!((spec.values()[1] - lo).abs() < 1e-13);
        }
    }

    #[test]
    fn reconstruction_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let m = random_hermitian(&mut rng, 4);
            let (spec, v) = hermitian_eigen(&m).unwrap();
            let lambda = ComplexMatrix::from_real_diagonal(spec.values()).unwrap();
            let rebuilt = v.conjugate(&lambda);
            let resid = (&m - &rebuilt).frobenius_norm();
            assert!(resid <= 1e-10 * m.frobenius_norm(), "residual {resid}");
            let id = ComplexMatrix::identity(4).unwrap();
            assert!((&(&v.adjoint() * &v) - &id).frobenius_norm() < 1e-12);
            let sum: f64 = spec.values().iter().sum();
            assert!((sum - m.trace().re).abs() < 1e-10);
            assert!(spec.values().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = random_hermitian(&mut rng, 4);
            let na_m = nalgebra::Matrix4::from_fn(|i, j| m[(i, j)]);
            let mut reference: Vec<f64> = na_m.symmetric_eigenvalues().iter().copied().collect();
            reference.sort_by(|a, b| b.total_cmp(a));
            let ours = hermitian_eigenvalues(&m).unwrap();
            for (a, b) in ours.values().iter().zip(&reference) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(4).unwrap();
        m[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn zero_matrix() {
        let m = ComplexMatrix::zeros(4).unwrap();
        assert_eq!(hermitian_eigenvalues(&m).unwrap().values(), &[0.0; 4]);
    }
}
