//! JSON channel documents.
//!
//! ```json
//! {"family": "subclass", "params": {"p": 0.1, "q": 0.35, "r": 0.05}}
//! ```

use serde::{Deserialize, Serialize};

use crate::analytic::{classify_subclass, classify_symmetric, holevo_covariant, Classification, PhaseLabel};
use crate::channel::{ErrorProbabilityMatrix, PauliChannel, SubclassParams, SymmetricChannelParams};
use crate::error::{Error, Result};
use crate::gaussian::{reduce_to_subclass, GaussianModelParams};
use crate::oracle::global_minimum_search;

/// Entrywise tolerance for recognizing symmetric structure in a general matrix.
pub const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum ChannelSpec {
    General { matrix: [[f64; 4]; 4] },
    Mp { probs: [f64; 4], mu: f64 },
    Symmetric(SymmetricChannelParams),
    Subclass(SubclassParams),
    Gaussian(GaussianModelParams),
}

/// Result of classifying a channel document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelReport {
    /// `None` when the channel lies outside the symmetric family.
    pub phase: Option<PhaseLabel>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub entropy_bits: f64,
    pub holevo_bits: f64,
    pub correlation: f64,
}

/// Search settings used for channels outside the symmetric family.
#[derive(Debug, Clone, Copy)]
pub struct SearchSettings {
    pub coarse_grid: usize,
    pub refine_iters: usize,
    pub restarts: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self { coarse_grid: 6, refine_iters: 40, restarts: 4 }
    }
}

impl ChannelSpec {
    /// Parses a document; syntax and schema errors become validation errors
    /// on the `channel` field.
    pub fn parse(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::validation("channel", e.to_string()))?;
        spec.build()?;
        Ok(spec)
    }

    pub fn family(&self) -> &'static str {
        match self {
            ChannelSpec::General { .. } => "general",
            ChannelSpec::Mp { .. } => "mp",
            ChannelSpec::Symmetric(_) => "symmetric",
            ChannelSpec::Subclass(_) => "subclass",
            ChannelSpec::Gaussian(_) => "gaussian",
        }
    }

    /// Gaussian documents are only buildable at `theta0 = 0`.
    pub fn build(&self) -> Result<PauliChannel> {
        match self {
            ChannelSpec::General { matrix } => Ok(PauliChannel::from_general(ErrorProbabilityMatrix::new(*matrix)?)),
            ChannelSpec::Mp { probs, mu } => PauliChannel::from_mp_correlated(*probs, *mu),
            ChannelSpec::Symmetric(p) => PauliChannel::from_symmetric(*p),
            ChannelSpec::Subclass(p) => PauliChannel::from_subclass(*p),
            ChannelSpec::Gaussian(g) => {
                g.validate()?;
                PauliChannel::from_subclass(reduce_to_subclass(g)?)
            }
        }
    }

    pub fn classify(&self, tie_tol: f64, search: SearchSettings) -> Result<ChannelReport> {
        let channel = self.build()?;
        let correlation = channel.correlation_measure();
        let classification = match self {
            ChannelSpec::Subclass(p) => Some(classify_subclass(p, tie_tol)),
            ChannelSpec::Gaussian(g) => Some(classify_subclass(&reduce_to_subclass(g)?, tie_tol)),
            ChannelSpec::Symmetric(p) => Some(classify_symmetric(p, tie_tol)?),
            _ => match SymmetricChannelParams::from_matrix(channel.probabilities(), STRUCTURE_TOL) {
                Some(p) => Some(classify_symmetric(&p, tie_tol)?),
                None => None,
            },
        };
        Ok(match classification {
            Some(c) => from_classification(&c, correlation)?,
            None => {
                let (_, entropy) =
                    global_minimum_search(&channel, search.coarse_grid, search.refine_iters, search.restarts)?;
                let entropy = entropy.clamp(0.0, 2.0);
                ChannelReport {
                    phase: None,
                    theta: None,
                    phi: None,
                    entropy_bits: entropy,
                    holevo_bits: holevo_covariant(entropy)?,
                    correlation,
                }
            }
        })
    }
}

fn from_classification(c: &Classification, correlation: f64) -> Result<ChannelReport> {
    Ok(ChannelReport {
        phase: Some(c.label),
        theta: Some(c.state.theta),
        phi: Some(c.state.phi),
        entropy_bits: c.entropy_bits,
        holevo_bits: holevo_covariant(c.entropy_bits)?,
        correlation,
    })
}
