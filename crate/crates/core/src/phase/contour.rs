use std::collections::{BTreeMap, HashMap};

use super::PhasePoint;
use crate::analytic::PhaseLabel;

pub type Polyline = Vec<[f64; 2]>;

/// Scan points re-assembled into their lattice. Missing nodes (outside the
/// simplex) are `None`.
struct Lattice<'a> {
    nx: usize,
    ny: usize,
    xs: Vec<f64>,
    ys: Vec<f64>,
    nodes: Vec<Option<&'a PhasePoint>>,
}

impl<'a> Lattice<'a> {
    fn new(points: &'a [PhasePoint]) -> Option<Self> {
        let nx = points.iter().map(|p| p.ix).max()? + 1;
        let ny = points.iter().map(|p| p.iy).max()? + 1;
        let mut xs = vec![f64::NAN; nx];
        let mut ys = vec![f64::NAN; ny];
        let mut nodes = vec![None; nx * ny];
        for p in points {
            xs[p.ix] = p.x;
            ys[p.iy] = p.y;
            nodes[p.iy * nx + p.ix] = Some(p);
        }
        Some(Self { nx, ny, xs, ys, nodes })
    }

    fn get(&self, ix: usize, iy: usize) -> Option<&'a PhasePoint> {
        self.nodes[iy * self.nx + ix]
    }

    /// Marching squares on the scalar `field` at `level`, with linear
    /// interpolation along cell edges. Cells with a missing corner are skipped.
    fn iso_segments(&self, field: impl Fn(&PhasePoint) -> f64, level: f64) -> Vec<[[f64; 2]; 2]> {
        let mut segments = Vec::new();
        if self.nx < 2 || self.ny < 2 {
            return segments;
        }
        for iy in 0..self.ny - 1 {
            for ix in 0..self.nx - 1 {
                let corners = [(ix, iy), (ix + 1, iy), (ix + 1, iy + 1), (ix, iy + 1)];
                let mut pos = [[0.0; 2]; 4];
                let mut val = [0.0; 4];
                let mut complete = true;
                for (k, &(cx, cy)) in corners.iter().enumerate() {
                    match self.get(cx, cy) {
                        Some(pt) => {
                            pos[k] = [self.xs[cx], self.ys[cy]];
                            val[k] = field(pt);
                        }
                        None => complete = false,
                    }
                }
                if !complete {
                    continue;
                }
                cell_segments(&pos, &val, level, &mut segments);
            }
        }
        segments
    }
}

fn cell_segments(pos: &[[f64; 2]; 4], val: &[f64; 4], level: f64, out: &mut Vec<[[f64; 2]; 2]>) {
    let above: Vec<bool> = val.iter().map(|&v| v >= level).collect();
    let case = above
        .iter()
        .enumerate()
        .fold(0u8, |acc, (k, &a)| acc | (u8::from(a) << k));
    if case == 0 || case == 15 {
        return;
    }
    // edge k joins corner k and corner k+1
    let crossing = |k: usize| -> [f64; 2] {
        let (a, b) = (k, (k + 1) % 4);
        let t = if val[a] == val[b] { 0.5 } else { (level - val[a]) / (val[b] - val[a]) };
        [
            pos[a][0] + t * (pos[b][0] - pos[a][0]),
            pos[a][1] + t * (pos[b][1] - pos[a][1]),
        ]
    };
    let crossed: Vec<usize> = (0..4).filter(|&k| above[k] != above[(k + 1) % 4]).collect();
    if crossed.len() == 2 {
        out.push([crossing(crossed[0]), crossing(crossed[1])]);
        return;
    }
    // saddle: resolve with the cell-center average
    let center_above = val.iter().sum::<f64>() / 4.0 >= level;
    let pairs = if center_above == above[0] {
        // corner 0's region connects through the center; cut off corners 1 and 3
        [(0, 1), (2, 3)]
    } else {
        [(3, 0), (1, 2)]
    };
    for (a, b) in pairs {
        out.push([crossing(a), crossing(b)]);
    }
}

type Key = (i64, i64);

fn key(p: [f64; 2]) -> Key {
    const SCALE: f64 = 1e9;
    ((p[0] * SCALE).round() as i64, (p[1] * SCALE).round() as i64)
}

/// Joins segments sharing endpoints into polylines. Output order is
/// deterministic for a given segment list.
fn chain(segments: Vec<[[f64; 2]; 2]>) -> Vec<Polyline> {
    let mut unique: BTreeMap<(Key, Key), [[f64; 2]; 2]> = BTreeMap::new();
    for seg in segments {
        let (a, b) = (key(seg[0]), key(seg[1]));
        if a == b {
            continue;
        }
        let k = if a <= b { (a, b) } else { (b, a) };
        unique.entry(k).or_insert(seg);
    }
    let segs: Vec<[[f64; 2]; 2]> = unique.into_values().collect();
    let mut adjacency: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, s) in segs.iter().enumerate() {
        adjacency.entry(key(s[0])).or_default().push(i);
        adjacency.entry(key(s[1])).or_default().push(i);
    }
    let mut used = vec![false; segs.len()];
    let mut lines = Vec::new();

    let walk = |start: usize, start_end: usize, used: &mut Vec<bool>| -> Polyline {
        used[start] = true;
        let mut line = vec![segs[start][start_end], segs[start][1 - start_end]];
        loop {
            let tail = key(*line.last().unwrap());
            let next = adjacency
                .get(&tail)
                .and_then(|ids| ids.iter().copied().find(|&i| !used[i]));
            let Some(i) = next else { break };
            used[i] = true;
            let s = segs[i];
            let far = if key(s[0]) == tail { s[1] } else { s[0] };
            line.push(far);
        }
        line
    };

    // open chains start at endpoints of odd degree
    for i in 0..segs.len() {
        for end in 0..2 {
            if used[i] {
                continue;
            }
            if adjacency[&key(segs[i][end])].len() % 2 == 1 {
                lines.push(walk(i, end, &mut used));
            }
        }
    }
    for i in 0..segs.len() {
        if !used[i] {
            lines.push(walk(i, 0, &mut used));
        }
    }
    lines
}

/// Boundary polylines between regions of different phase, in the scan's
/// `(x, y)` coordinates. Each non-tie phase contributes the 1/2-level set of
/// its indicator field; tie nodes belong to no region, so a line of ties is
/// outlined on both sides at half a cell.
pub fn extract_boundaries(points: &[PhasePoint]) -> Vec<Polyline> {
    let Some(lattice) = Lattice::new(points) else {
        return Vec::new();
    };
    let mut labels: Vec<PhaseLabel> = points.iter().map(|p| p.phase).collect();
    labels.sort();
    labels.dedup();
    if labels.len() < 2 {
        return Vec::new();
    }
    let mut segments = Vec::new();
    for label in labels.into_iter().filter(|l| *l != PhaseLabel::BoundaryTie) {
        segments.extend(lattice.iso_segments(|p| f64::from(u8::from(p.phase == label)), 0.5));
    }
    chain(segments)
}

/// Iso-correlation polylines for each requested level. Levels outside the
/// observed range yield empty lists.
pub fn correlation_contours(points: &[PhasePoint], levels: &[f64]) -> Vec<(f64, Vec<Polyline>)> {
    let lattice = Lattice::new(points);
    levels
        .iter()
        .map(|&level| {
            let lines = lattice
                .as_ref()
                .map(|l| chain(l.iso_segments(|p| p.correlation, level)))
                .unwrap_or_default();
            (level, lines)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{scan_subclass, ScanGrid};

    fn synthetic(n: usize, label: impl Fn(f64, f64) -> PhaseLabel) -> Vec<PhasePoint> {
        let mut out = Vec::new();
        for iy in 0..n {
            for ix in 0..n {
                let (x, y) = (ix as f64 / (n - 1) as f64, iy as f64 / (n - 1) as f64);
                out.push(PhasePoint {
                    ix,
                    iy,
                    x,
                    y,
                    p: 0.0,
                    q: 0.0,
                    r: 0.0,
                    phase: label(x, y),
                    entropy_bits: 0.0,
                    holevo_bits: 2.0,
                    correlation: x + y,
                });
            }
        }
        out
    }

    #[test]
    fn uniform_input_has_no_boundary() {
        assert!(extract_boundaries(&synthetic(10, |_, _| PhaseLabel::Product)).is_empty());
        assert!(extract_boundaries(&[]).is_empty());
    }

    #[test]
    fn straight_boundary_is_one_polyline() {
        let pts = synthetic(11, |x, _| if x < 0.45 { PhaseLabel::Product } else { PhaseLabel::EntangledPhi0 });
        let lines = extract_boundaries(&pts);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), 11);
        for v in &lines[0] {
            assert!((v[0] - 0.45).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_contour_is_a_loop() {
        let pts = synthetic(21, |x, y| {
            if (x - 0.5).powi(2) + (y - 0.5).powi(2) < 0.1 {
                PhaseLabel::EntangledPhi0
            } else {
                PhaseLabel::Product
            }
        });
        let lines = extract_boundaries(&pts);
        assert_eq!(lines.len(), 1);
        assert_eq!(key(lines[0][0]), key(*lines[0].last().unwrap()));
    }

    #[test]
    fn linear_field_contours() {
        let pts = synthetic(11, |_, _| PhaseLabel::Product);
        let contours = correlation_contours(&pts, &[0.55, 5.0]);
        assert_eq!(contours.len(), 2);
        assert_eq!(contours[0].1.len(), 1);
        for v in &contours[0].1[0] {
            assert!((v[0] + v[1] - 0.55).abs() < 1e-12);
        }
        assert!(contours[1].1.is_empty());
    }

    #[test]
    fn boundaries_commute_with_reflection() {
        let points = scan_subclass(&ScanGrid::subclass(64, 64)).unwrap();
        let reflected: Vec<PhasePoint> = points
            .iter()
            .map(|p| PhasePoint {
                ix: p.iy,
                iy: p.ix,
                x: p.y,
                y: p.x,
                q: p.r,
                r: p.q,
                phase: p.phase.mirrored(),
                ..*p
            })
            .collect();
        let collect = |lines: Vec<Polyline>, swap: bool| {
            let mut v: Vec<(i64, i64)> = lines
                .into_iter()
                .flatten()
                .map(|p| if swap { key([p[1], p[0]]) } else { key(p) })
                .collect();
            v.sort();
            v.dedup();
            v
        };
        let a = collect(extract_boundaries(&points), true);
        let b = collect(extract_boundaries(&reflected), false);
        assert!(!a.is_empty());
        assert_eq!(a, b);
    }
}
