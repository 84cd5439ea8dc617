//! Phase-diagram scans over channel parameter planes, boundary and contour
//! extraction, coexistence detection, and the CSV/JSON artifact formats.

mod coexistence;
mod contour;
mod output;

pub use coexistence::{coexistence_band, CoexistenceBand};
pub use contour::{correlation_contours, extract_boundaries, Polyline};
pub use output::{format_sig, write_csv, PolylineDocument, CSV_HEADER};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{classify_subclass, classify_symmetric, Classification, PhaseLabel, DEFAULT_TIE_TOL};
use crate::channel::{PauliChannel, SubclassParams, SymmetricChannelParams};
use crate::error::{Error, Result};
use crate::gaussian::{reduce_to_subclass, GaussianModelParams};

pub const MIN_GRID: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// `x = q`, `y = r`, `p = 1/2 − q − r`; nodes outside the simplex are skipped.
    SubclassSimplex,
    /// `x = p1`, `y = σ` of the Gaussian rotation model at `θ₀ = 0`.
    GaussianPlane,
    /// `x = a`, `y = μ` of the correlated channel with single-use
    /// probabilities `(a, 1/2 − a, 1/2 − a, a)` and memory factor `μ`.
    MpSlice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub nx: usize,
    pub ny: usize,
    pub domain: Domain,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl ScanGrid {
    pub fn subclass(nq: usize, nr: usize) -> Self {
        Self {
            nx: nq,
            ny: nr,
            domain: Domain::SubclassSimplex,
            x_range: (0.0, 0.5),
            y_range: (0.0, 0.5),
        }
    }

    pub fn gaussian(np1: usize, nsigma: usize, sigma_max: f64) -> Self {
        Self {
            nx: np1,
            ny: nsigma,
            domain: Domain::GaussianPlane,
            x_range: (0.0, 0.5),
            y_range: (0.0, sigma_max),
        }
    }

    pub fn mp_slice(na: usize, nmu: usize) -> Self {
        Self {
            nx: na,
            ny: nmu,
            domain: Domain::MpSlice,
            x_range: (0.0, 0.5),
            y_range: (0.0, 1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < MIN_GRID || self.ny < MIN_GRID {
            return Err(Error::InvalidArgument(format!(
                "grid must be at least {MIN_GRID}x{MIN_GRID}, got {}x{}",
                self.nx, self.ny
            )));
        }
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid ranges must be finite and increasing, got {:?} x {:?}",
                self.x_range, self.y_range
            )));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        node(self.x_range, self.nx, i)
    }

    pub fn y(&self, j: usize) -> f64 {
        node(self.y_range, self.ny, j)
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (
            (self.x_range.1 - self.x_range.0) / (self.nx - 1) as f64,
            (self.y_range.1 - self.y_range.0) / (self.ny - 1) as f64,
        )
    }
}

fn node((lo, hi): (f64, f64), n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// One evaluated grid node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub ix: usize,
    pub iy: usize,
    pub x: f64,
    pub y: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub phase: PhaseLabel,
    pub entropy_bits: f64,
    pub holevo_bits: f64,
    pub correlation: f64,
}

impl PhasePoint {
    fn new(ix: usize, iy: usize, x: f64, y: f64, pqr: (f64, f64, f64), c: &Classification, correlation: f64) -> Self {
        Self {
            ix,
            iy,
            x,
            y,
            p: pqr.0,
            q: pqr.1,
            r: pqr.2,
            phase: c.label,
            entropy_bits: c.entropy_bits,
            holevo_bits: 2.0 - c.entropy_bits,
            correlation,
        }
    }
}

fn scan_rows<F>(grid: &ScanGrid, eval: F) -> Vec<PhasePoint>
where
    F: Fn(usize, usize) -> Option<PhasePoint> + Sync,
{
    (0..grid.ny)
        .into_par_iter()
        .map(|iy| (0..grid.nx).filter_map(|ix| eval(ix, iy)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn subclass_point(ix: usize, iy: usize, x: f64, y: f64, params: SubclassParams) -> PhasePoint {
    let c = classify_subclass(&params, DEFAULT_TIE_TOL);
    let correlation = PauliChannel::from_subclass(params)
        .expect("validated subclass params")
        .correlation_measure();
    PhasePoint::new(ix, iy, x, y, (params.p, params.q, params.r), &c, correlation)
}

/// Classifies every node of the `(q, r)` simplex, in row-major order
/// (`r` outer, `q` inner).
pub fn scan_subclass(grid: &ScanGrid) -> Result<Vec<PhasePoint>> {
    grid.validate()?;
    if grid.domain != Domain::SubclassSimplex {
        return Err(Error::InvalidArgument("scan_subclass needs a SubclassSimplex grid".into()));
    }
    Ok(scan_rows(grid, |ix, iy| {
        let (q, r) = (grid.x(ix), grid.y(iy));
        let params = SubclassParams::from_qr(q, r).ok()?;
        Some(subclass_point(ix, iy, q, r, params))
    }))
}

/// Classifies every `(p1, σ)` node of the Gaussian model at `θ₀ = 0`.
pub fn scan_gaussian(grid: &ScanGrid) -> Result<Vec<PhasePoint>> {
    grid.validate()?;
    if grid.domain != Domain::GaussianPlane {
        return Err(Error::InvalidArgument("scan_gaussian needs a GaussianPlane grid".into()));
    }
    if grid.x_range.0 < 0.0 || grid.x_range.1 > 0.5 || grid.y_range.0 < 0.0 {
        return Err(Error::InvalidArgument(
            "gaussian grid needs p1 within [0, 1/2] and sigma >= 0".into(),
        ));
    }
    Ok(scan_rows(grid, |ix, iy| {
        let (p1, sigma) = (grid.x(ix), grid.y(iy));
        let model = GaussianModelParams::new(p1, sigma, 0.0).ok()?;
        let params = reduce_to_subclass(&model).ok()?;
        Some(subclass_point(ix, iy, p1, sigma, params))
    }))
}

/// Symmetric-family parameters of the correlated channel with single-use
/// probabilities `(a, b, b, a)`, `b = 1/2 − a`.
pub fn mp_symmetric_params(a: f64, mu: f64) -> SymmetricChannelParams {
    let b = 0.5 - a;
    let keep = 1.0 - mu;
    let eta = 4.0 * keep * a * b;
    let p = keep * a * a + mu * a;
    let s = keep * a * a;
    let r = keep * b * b;
    let q = keep * b * b + mu * b;
    SymmetricChannelParams { p, s, q, r, eta, xi: 0.0, gamma: 0.0 }
}

/// Classifies every `(a, μ)` node of the correlated-channel slice; `p, q, r`
/// in the output are the symmetric-family entries `P_00`, `P_11`, `P_12`.
pub fn scan_mp(grid: &ScanGrid) -> Result<Vec<PhasePoint>> {
    grid.validate()?;
    if grid.domain != Domain::MpSlice {
        return Err(Error::InvalidArgument("scan_mp needs an MpSlice grid".into()));
    }
    if grid.x_range.0 < 0.0 || grid.x_range.1 > 0.5 || grid.y_range.0 < 0.0 || grid.y_range.1 > 1.0 {
        return Err(Error::InvalidArgument("mp grid needs a within [0, 1/2] and mu within [0, 1]".into()));
    }
    Ok(scan_rows(grid, |ix, iy| {
        let (a, mu) = (grid.x(ix), grid.y(iy));
        let params = mp_symmetric_params(a, mu);
        let c = classify_symmetric(&params, DEFAULT_TIE_TOL).ok()?;
        let correlation = PauliChannel::from_symmetric(params).ok()?.correlation_measure();
        Some(PhasePoint::new(ix, iy, a, mu, (params.p, params.q, params.r), &c, correlation))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(points: &[PhasePoint], x: f64, y: f64) -> PhasePoint {
        *points
            .iter()
            .find(|pt| (pt.x - x).abs() < 1e-12 && (pt.y - y).abs() < 1e-12)
            .unwrap_or_else(|| panic!("no node at ({x}, {y})"))
    }

    #[test]
    fn subclass_scan_fixtures() {
        // 61 nodes per axis puts 1/6, 0.05 and 0.35 on the grid.
        let grid = ScanGrid::subclass(61, 61);
        let points = scan_subclass(&grid).unwrap();
        assert_eq!(points.len(), 61 * 62 / 2);
        assert_eq!(at(&points, 1.0 / 6.0, 1.0 / 6.0).phase, PhaseLabel::BoundaryTie);
        assert_eq!(at(&points, 0.05, 0.35).phase, PhaseLabel::EntangledPhiHalfPi);
        assert_eq!(at(&points, 0.35, 0.05).phase, PhaseLabel::EntangledPhi0);
        // p = 0.4 dominates; both Bell states beat |00> and tie on q = r.
        assert_eq!(at(&points, 0.05, 0.05).phase, PhaseLabel::BoundaryTie);
        assert_eq!(at(&points, 0.25, 0.2).phase, PhaseLabel::Product);
        for pt in &points {
            assert_eq!(pt.holevo_bits, 2.0 - pt.entropy_bits);
            assert!((0.0..=1.0).contains(&pt.correlation));
            assert!(pt.x + pt.y <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn scan_order_is_row_major() {
        let points = scan_subclass(&ScanGrid::subclass(16, 16)).unwrap();
        let keys: Vec<_> = points.iter().map(|p| (p.iy, p.ix)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn gaussian_scan_fixtures() {
        let grid = ScanGrid::gaussian(51, 41, 4.0);
        let points = scan_gaussian(&grid).unwrap();
        assert_eq!(points.len(), 51 * 41);
        let full_memory = at(&points, 0.5, 0.0);
        // (p, q, r) = (0, 1/2, 0): every candidate is a pure output
        assert_eq!(full_memory.entropy_bits, 0.0);
        assert_eq!(full_memory.holevo_bits, 2.0);
        // q − r = p1·e^{−2σ²} eventually drops below the tie tolerance
        for pt in points.iter().filter(|pt| (pt.x - 0.2).abs() < 1e-12) {
            let tie = pt.phase == PhaseLabel::BoundaryTie && pt.q - pt.r < 1e-9;
            assert!(pt.phase == PhaseLabel::EntangledPhi0 || tie, "{pt:?}");
        }
        assert_eq!(at(&points, 0.45, 4.0).phase, PhaseLabel::Product);
        assert!(points.iter().all(|pt| pt.phase != PhaseLabel::EntangledPhiHalfPi));
    }

    #[test]
    fn grid_validation() {
        assert!(scan_subclass(&ScanGrid::subclass(4, 16)).is_err());
        assert!(scan_subclass(&ScanGrid::gaussian(16, 16, 1.0)).is_err());
        let mut g = ScanGrid::gaussian(16, 16, 1.0);
        g.x_range = (0.0, 0.7);
        assert!(scan_gaussian(&g).is_err());
    }

    #[test]
    fn mp_params_stay_normalized() {
        for i in 0..=20 {
            for j in 0..=20 {
                let params = mp_symmetric_params(0.5 * i as f64 / 20.0, j as f64 / 20.0);
                params.validate().unwrap();
                let direct = PauliChannel::from_mp_correlated(
                    [0.5 * i as f64 / 20.0, 0.5 - 0.5 * i as f64 / 20.0, 0.5 - 0.5 * i as f64 / 20.0, 0.5 * i as f64 / 20.0],
                    j as f64 / 20.0,
                )
                .unwrap();
                let via = PauliChannel::from_symmetric(params).unwrap();
                for a in 0..4 {
                    for b in 0..4 {
                        let d = direct.probabilities().get(a, b) - via.probabilities().get(a, b);
                        assert!(d.abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn product_entropy_monotone_along_rays() {
        // Inside the product phase the entropy is H(2p). Along a ray of fixed
        // q − r, p = 1/2 − q − r moves monotonically with q + r.
        let points = scan_subclass(&ScanGrid::subclass(201, 201)).unwrap();
        let mut checked = 0;
        for diff in -50i64..50 {
            let mut ray: Vec<_> = points
                .iter()
                .filter(|pt| pt.phase == PhaseLabel::Product && pt.ix as i64 - pt.iy as i64 == diff)
                .collect();
            if ray.len() < 2 {
                continue;
            }
            ray.sort_by(|a, b| a.p.total_cmp(&b.p));
            for w in ray.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if hi.p <= 0.25 {
                    assert!(hi.entropy_bits > lo.entropy_bits);
                } else if lo.p >= 0.25 {
                    assert!(hi.entropy_bits < lo.entropy_bits);
                }
            }
            checked += 1;
        }
        assert!(checked >= 50, "only {checked} rays");
    }
}
