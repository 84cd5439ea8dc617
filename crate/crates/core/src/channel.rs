//! Correlated two-qubit Pauli channels `Φ(ρ) = Σ_ij P_ij (σ_i⊗σ_j) ρ (σ_i⊗σ_j)`.
//!
//! Index convention: in `P[i][j]` the row index `i` selects the Pauli on the
//! left tensor factor and the column index `j` the Pauli on the right factor,
//! so the Kraus operator of entry `(i, j)` is `kron(σ_i, σ_j)`. The left factor
//! is the qubit labelled "second" in the physical story (the one whose error is
//! chosen after the environment has reacted to the first). Every family built
//! here except `from_general` has a symmetric `P`, so the labelling only
//! matters for hand-written general matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, ComplexMatrix, TRACE_TOL};

/// Normalization tolerance at construction. Inputs are rejected, never renormalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Tolerance for density-matrix checks on `apply` inputs and outputs.
pub const STATE_TOL: f64 = 1e-10;

/// The 4×4 matrix of Pauli-pair error probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ErrorProbabilityMatrix([[f64; 4]; 4]);

impl ErrorProbabilityMatrix {
    pub fn new(entries: [[f64; 4]; 4]) -> Result<Self> {
        let mut total = 0.0;
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::validation(
                        format!("P[{i}][{j}]"),
                        format!("error probability must be finite and non-negative, got {v}"),
                    ));
                }
                total += v;
            }
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::validation(
                "P",
                format!("entries must sum to 1, got {total}"),
            ));
        }
        Ok(Self(entries))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    /// Row sums and column sums: `(Σ_j P_ij, Σ_j P_ji)`.
    pub fn marginals(&self) -> ([f64; 4], [f64; 4]) {
        let mut rows = [0.0; 4];
        let mut cols = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 {
                rows[i] += self.0[i][j];
                cols[j] += self.0[i][j];
            }
        }
        (rows, cols)
    }

    /// Total-variation distance between `P` and the product of its marginals.
    pub fn correlation(&self) -> f64 {
        let (m1, m2) = self.marginals();
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += (self.0[i][j] - m1[i] * m2[j]).abs();
            }
        }
        0.5 * acc
    }
}

/// Parameters of the Z⊗Z-symmetric family with equal marginals.
///
/// Induced matrix, rows top to bottom:
/// ```text
/// p          (η+ξ)/4  (η−ξ)/4  s
/// (η+γ)/4    q        r        (η−γ)/4
/// (η−γ)/4    r        q        (η+γ)/4
/// s          (η−ξ)/4  (η+ξ)/4  p
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricChannelParams {
    pub p: f64,
    pub s: f64,
    pub q: f64,
    pub r: f64,
    pub eta: f64,
    pub xi: f64,
    pub gamma: f64,
}

impl SymmetricChannelParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("p", self.p),
            ("s", self.s),
            ("q", self.q),
            ("r", self.r),
            ("eta", self.eta),
            ("xi", self.xi),
            ("gamma", self.gamma),
        ];
        for (name, v) in named {
            if !v.is_finite() {
                return Err(Error::validation(name, format!("must be finite, got {v}")));
            }
        }
        let total = self.p + self.q + self.r + self.eta + self.s;
        if (total - 0.5).abs() > NORMALIZATION_TOL {
            return Err(Error::validation(
                "p+q+r+eta+s",
                format!("must equal 1/2, got {total}"),
            ));
        }
        let m = self.raw_matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < 0.0 {
                    return Err(Error::validation(
                        format!("P[{i}][{j}]"),
                        format!("induced entry is negative ({v}); need eta >= |xi|, eta >= |gamma| and p, q, r, s >= 0"),
                    ));
                }
            }
        }
        Ok(())
    }

    fn raw_matrix(&self) -> [[f64; 4]; 4] {
        let Self { p, s, q, r, eta, xi, gamma } = *self;
        let a = (eta + xi) / 4.0;
        let b = (eta - xi) / 4.0;
        let c = (eta + gamma) / 4.0;
        let d = (eta - gamma) / 4.0;
        [[p, a, b, s], [c, q, r, d], [d, r, q, c], [s, b, a, p]]
    }

    pub fn matrix(&self) -> Result<ErrorProbabilityMatrix> {
        self.validate()?;
        ErrorProbabilityMatrix::new(self.raw_matrix())
    }

    /// Recovers the seven parameters from a matrix of the symmetric form, or
    /// `None` if any entry breaks the pattern by more than `tol`.
    pub fn from_matrix(m: &ErrorProbabilityMatrix, tol: f64) -> Option<Self> {
        let e = m.entries();
        let params = Self {
            p: e[0][0],
            s: e[0][3],
            q: e[1][1],
            r: e[1][2],
            eta: 2.0 * (e[0][1] + e[0][2]),
            xi: 2.0 * (e[0][1] - e[0][2]),
            gamma: 2.0 * (e[1][0] - e[2][0]),
        };
        let rebuilt = params.raw_matrix();
        let matches = (0..4).all(|i| (0..4).all(|j| (rebuilt[i][j] - e[i][j]).abs() <= tol));
        matches.then_some(params)
    }
}

impl From<SubclassParams> for SymmetricChannelParams {
    fn from(sub: SubclassParams) -> Self {
        Self {
            p: sub.p,
            s: 0.0,
            q: sub.q,
            r: sub.r,
            eta: 0.0,
            xi: 0.0,
            gamma: 0.0,
        }
    }
}

/// The three-parameter subclass: only `P_00 = P_33 = p`, `P_11 = P_22 = q`,
/// `P_12 = P_21 = r` are nonzero, with `p + q + r = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubclassParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl SubclassParams {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        let params = Self { p, q, r };
        params.validate()?;
        Ok(params)
    }

    /// Builds the point `(q, r)` of the simplex with `p = 1/2 − q − r`.
    /// A rounding-level negative `p` is clamped to zero.
    pub fn from_qr(q: f64, r: f64) -> Result<Self> {
        let mut p = 0.5 - q - r;
        if p < 0.0 && p > -NORMALIZATION_TOL {
            p = 0.0;
        }
        Self::new(p, q, r)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q), ("r", self.r)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::validation(
                    name,
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        let total = self.p + self.q + self.r;
        if (total - 0.5).abs() > NORMALIZATION_TOL {
            return Err(Error::validation(
                "p+q+r",
                format!("must equal 1/2, got {total}"),
            ));
        }
        Ok(())
    }

    /// Closed-form correlation `3p − 4p² + |(q+r)² − q| + |(q+r)² − r|`.
    pub fn correlation_closed_form(&self) -> f64 {
        let Self { p, q, r } = *self;
        let a = (q + r) * (q + r);
        3.0 * p - 4.0 * p * p + (a - q).abs() + (a - r).abs()
    }
}

#[derive(Debug, Clone)]
struct KrausTerm {
    weight: f64,
    pair: (usize, usize),
    operator: ComplexMatrix,
}

/// An immutable Pauli channel on two qubits.
#[derive(Debug, Clone)]
pub struct PauliChannel {
    probs: ErrorProbabilityMatrix,
    terms: Vec<KrausTerm>,
}

impl PauliChannel {
    pub fn from_general(probs: ErrorProbabilityMatrix) -> Self {
        let mut terms = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let weight = probs.get(i, j);
                if weight > 0.0 {
                    let operator = kron(&pauli(i).unwrap(), &pauli(j).unwrap()).unwrap();
                    terms.push(KrausTerm {
                        weight,
                        pair: (i, j),
                        operator,
                    });
                }
            }
        }
        Self { probs, terms }
    }

    /// `P_ij = (1−μ) p_i p_j + μ δ_ij p_j`.
    pub fn from_mp_correlated(single: [f64; 4], mu: f64) -> Result<Self> {
        let total: f64 = single.iter().sum();
        for (i, &v) in single.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::validation(
                    format!("probs[{i}]"),
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::validation(
                "probs",
                format!("must sum to 1, got {total}"),
            ));
        }
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::validation("mu", format!("must lie in [0, 1], got {mu}")));
        }
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let diag = if i == j { single[j] } else { 0.0 };
                m[i][j] = (1.0 - mu) * single[i] * single[j] + mu * diag;
            }
        }
        Ok(Self::from_general(ErrorProbabilityMatrix::new(m)?))
    }

    pub fn from_symmetric(params: SymmetricChannelParams) -> Result<Self> {
        Ok(Self::from_general(params.matrix()?))
    }

    pub fn from_subclass(params: SubclassParams) -> Result<Self> {
        params.validate()?;
        Self::from_symmetric(params.into())
    }

    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 1.0;
        Self::from_general(ErrorProbabilityMatrix(m))
    }

    pub fn probabilities(&self) -> &ErrorProbabilityMatrix {
        &self.probs
    }

    /// Nonzero Kraus weights and their Pauli pair `(i, j)`.
    pub fn kraus_weights(&self) -> Vec<((usize, usize), f64)> {
        self.terms.iter().map(|t| (t.pair, t.weight)).collect()
    }

    /// Applies the channel to a density matrix.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != 4 {
            return Err(Error::ContractViolation(format!(
                "channel input must be 4x4, got {}x{}",
                rho.dim(),
                rho.dim()
            )));
        }
        if !rho.is_hermitian(STATE_TOL) {
            return Err(Error::ContractViolation("input state is not Hermitian".into()));
        }
        if !rho.is_unit_trace(TRACE_TOL) {
            return Err(Error::ContractViolation(format!(
                "input state has trace {}",
                rho.trace()
            )));
        }
        if !rho.is_psd(STATE_TOL) {
            return Err(Error::ContractViolation(
                "input state is not positive semidefinite".into(),
            ));
        }
        Ok(self.apply_map(rho))
    }

    /// Linear extension of the channel to any 4×4 operator; no state checks.
    pub fn apply_map(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4).unwrap();
        for term in &self.terms {
            out = &out + &term.operator.conjugate(m).scale(term.weight);
        }
        out
    }

    pub fn marginals(&self) -> ([f64; 4], [f64; 4]) {
        self.probs.marginals()
    }

    pub fn correlation_measure(&self) -> f64 {
        self.probs.correlation()
    }

    /// Checks `Φ(Z⊗Z · E · Z⊗Z) = Φ(E)` on all 16 matrix units `E`.
    pub fn has_zz_symmetry(&self, tol: f64) -> bool {
        let z = pauli(3).unwrap();
        let zz = kron(&z, &z).unwrap();
        (0..16).all(|k| {
            let mut unit = ComplexMatrix::zeros(4).unwrap();
            unit[(k / 4, k % 4)] = 1.0.into();
            let lhs = self.apply_map(&zz.conjugate(&unit));
            let rhs = self.apply_map(&unit);
            (&lhs - &rhs).frobenius_norm() <= tol
        })
    }

    pub fn has_equal_marginals(&self, tol: f64) -> bool {
        let (a, b) = self.marginals();
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Frobenius norm of `Φ(S ρ S) − S Φ(ρ) S` for `S = σ_i⊗σ_j`.
    pub fn check_covariance(&self, i: usize, j: usize, rho: &ComplexMatrix) -> Result<f64> {
        let s = kron(&pauli(i)?, &pauli(j)?)?;
        let lhs = self.apply(&s.conjugate(rho))?;
        let rhs = s.conjugate(&self.apply(rho)?);
        Ok((&lhs - &rhs).frobenius_norm())
    }
}
