use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix of dimension 2 or 4, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        if rows.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidArgument(format!(
                "matrix rows must all have length {dim}"
            )));
        }
        Ok(Self {
            dim,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Ok(m)
    }

    /// The projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(v.len())?;
        for i in 0..v.len() {
            for j in 0..v.len() {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `self · m · self†`
    pub fn conjugate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(self * m) * &self.adjoint()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i..n).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    pub fn is_unit_trace(&self, tol: f64) -> bool {
        (self.trace() - ONE).norm() <= tol
    }

    /// Positive semidefinite within `tol`. Only meaningful for Hermitian input;
    /// returns false for non-Hermitian matrices.
    pub fn is_psd(&self, tol: f64) -> bool {
        match super::hermitian_eigenvalues(self) {
            Ok(spec) => spec.values().iter().all(|&l| l >= -tol),
            Err(_) => false,
        }
    }

    pub fn is_density_matrix(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.is_unit_trace(tol) && self.is_psd(tol)
    }

    fn same_dim(&self, other: &ComplexMatrix, op: &str) {
        assert_eq!(
            self.dim, other.dim,
            "{op}: dimension mismatch ({} vs {})",
            self.dim, other.dim
        );
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "matrix dimension must be 2 or 4, got {dim}"
        )))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.same_dim(rhs, "mul");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        ComplexMatrix {
            dim: n,
            entries: out,
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.same_dim(rhs, "add");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.same_dim(rhs, "sub");
        ComplexMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli operator `σ_index`: 0 = I, 1 = X, 2 = Y, 3 = Z.
pub fn pauli(index: usize) -> Result<ComplexMatrix> {
    let rows = match index {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, -I], [I, ZERO]],
        3 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "Pauli index must be in 0..=3, got {index}"
            )))
        }
    };
    Ok(ComplexMatrix {
        dim: 2,
        entries: rows.iter().flatten().copied().collect(),
    })
}

/// Kronecker product of two 2×2 matrices: `out[2i+k][2j+l] = a[i][j]·b[k][l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::InvalidArgument(format!(
            "kron expects two 2x2 matrices, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approx_eq(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() <= tol
    }

    #[test]
    fn pauli_basics() {
        assert_eq!(pauli(0).unwrap(), ComplexMatrix::identity(2).unwrap());
        assert_eq!(pauli(3).unwrap(), ComplexMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap());
        for k in 0..4 {
            let s = pauli(k).unwrap();
            assert!(s.is_hermitian(0.0));
            let id = ComplexMatrix::identity(2).unwrap();
            assert!(approx_eq(&(&s * &s.adjoint()), &id, 0.0));
        }
        assert!(matches!(pauli(4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn pauli_algebra() {
        let xy = &pauli(1).unwrap() * &pauli(2).unwrap();
        let iz = pauli(3).unwrap().scale_complex(I);
        assert!(approx_eq(&xy, &iz, 0.0));
    }

    #[test]
    fn kron_examples() {
        let id2 = pauli(0).unwrap();
        assert_eq!(kron(&id2, &id2).unwrap(), ComplexMatrix::identity(4).unwrap());
        let z = pauli(3).unwrap();
        assert_eq!(
            kron(&z, &z).unwrap(),
            ComplexMatrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0]).unwrap()
        );
        let x = pauli(1).unwrap();
        let xx = kron(&x, &x).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { ONE } else { ZERO };
                assert_eq!(xx[(i, j)], expected);
            }
        }
    }

    #[test]
    fn kron_rejects_4x4() {
        let id4 = ComplexMatrix::identity(4).unwrap();
        let id2 = ComplexMatrix::identity(2).unwrap();
        assert!(kron(&id4, &id2).is_err());
        assert!(ComplexMatrix::zeros(3).is_err());
    }

    fn arb_2x2() -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec(-1.0f64..1.0, 8).prop_map(|v| {
            let rows = (0..2)
                .map(|i| (0..2).map(|j| Complex64::new(v[4 * i + 2 * j], v[4 * i + 2 * j + 1])).collect())
                .collect::<Vec<Vec<_>>>();
            ComplexMatrix::from_rows(&rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn kron_is_bilinear(a in arb_2x2(), b in arb_2x2(), c in arb_2x2()) {
            let lhs = kron(&(&a + &b), &c).unwrap();
            let rhs = &kron(&a, &c).unwrap() + &kron(&b, &c).unwrap();
            prop_assert!(approx_eq(&lhs, &rhs, 1e-14));
            let lhs = kron(&c, &(&a + &b)).unwrap();
            let rhs = &kron(&c, &a).unwrap() + &kron(&c, &b).unwrap();
            prop_assert!(approx_eq(&lhs, &rhs, 1e-14));
        }
    }
}
