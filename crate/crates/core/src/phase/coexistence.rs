use serde::Serialize;

use super::PhasePoint;
use crate::analytic::PhaseLabel;
use crate::error::{Error, Result};

pub const MIN_BINS: usize = 100;

/// Interval of correlation values realized by both product-optimal and
/// entangled-optimal grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoexistenceBand {
    pub c_low: f64,
    pub c_high: f64,
}

/// Bins the points by correlation over the observed range and returns the
/// smallest interval covering every bin that holds both a product and an
/// entangled point. Tie points are ignored. `Ok(None)` when no bin coexists.
pub fn coexistence_band(points: &[PhasePoint], n_bins: usize) -> Result<Option<CoexistenceBand>> {
    if n_bins < MIN_BINS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_BINS} bins, got {n_bins}"
        )));
    }
    let labelled: Vec<&PhasePoint> = points
        .iter()
        .filter(|p| p.phase != PhaseLabel::BoundaryTie)
        .collect();
    let Some(lo) = labelled.iter().map(|p| p.correlation).reduce(f64::min) else {
        return Ok(None);
    };
    let hi = labelled.iter().map(|p| p.correlation).fold(lo, f64::max);
    if hi <= lo {
        return Ok(None);
    }
    let width = (hi - lo) / n_bins as f64;
    let mut product = vec![false; n_bins];
    let mut entangled = vec![false; n_bins];
    for p in &labelled {
        let bin = (((p.correlation - lo) / width) as usize).min(n_bins - 1);
        if p.phase == PhaseLabel::Product {
            product[bin] = true;
        } else {
            entangled[bin] = true;
        }
    }
    let mut coexisting = (0..n_bins).filter(|&b| product[b] && entangled[b]);
    let Some(first) = coexisting.next() else {
        return Ok(None);
    };
    let last = coexisting.next_back().unwrap_or(first);
    Ok(Some(CoexistenceBand {
        c_low: lo + first as f64 * width,
        c_high: lo + (last + 1) as f64 * width,
    }))
}
