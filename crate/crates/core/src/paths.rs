//! Polyline paths and loops in the complex plane.
//!
//! A [`PathSpec`] is a list of `(t, z)` samples with `t` running from 0 to 1,
//! interpolated linearly between samples. A [`PathBundle`] holds several
//! paths on one shared parameter grid (one per root, or one per coefficient).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::C64;

/// Default endpoint tolerance for closed paths.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Default minimum separation between moving points.
pub const COLLISION_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("a path needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("parameters must increase strictly from 0 to 1")]
    BadParameters,
    #[error("path flagged closed but endpoints differ by {0:e}")]
    NotClosedWithinTolerance(f64),
    #[error("paths not composable: endpoint gap {0:e}")]
    NotComposable(f64),
    #[error("winding number needs a closed path")]
    NotClosed,
    #[error("winding undefined near base point (distance {0:e})")]
    NearBasePoint(f64),
    #[error("insufficient sampling for winding number")]
    InsufficientSampling,
    #[error("bundle paths do not share a parameter grid")]
    GridMismatch,
    #[error("empty bundle")]
    EmptyBundle,
    #[error("root positions must be pairwise distinct")]
    DuplicatePositions,
    #[error("swap geometry infeasible")]
    SwapInfeasible,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A discretized parametric curve. `t` is stored as `t - 1/2` so that
/// reversal (`t ↦ 1 - t`) is an exact sign flip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathJson", into = "PathJson")]
pub struct PathSpec {
    offsets: Vec<f64>,
    values: Vec<C64>,
    closed: bool,
}

/// Wire form: `{"closed": bool, "samples": [[t, re, im], …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathJson {
    pub closed: bool,
    pub samples: Vec<[f64; 3]>,
}

impl From<PathSpec> for PathJson {
    fn from(p: PathSpec) -> Self {
        PathJson {
            closed: p.closed,
            samples: p
                .offsets
                .iter()
                .zip(&p.values)
                .map(|(&o, z)| [o + 0.5, z.re, z.im])
                .collect(),
        }
    }
}

impl TryFrom<PathJson> for PathSpec {
    type Error = PathError;

    fn try_from(j: PathJson) -> Result<Self, PathError> {
        let samples = j
            .samples
            .iter()
            .map(|s| (s[0], C64::new(s[1], s[2])))
            .collect();
        PathSpec::new(samples, j.closed, CLOSURE_TOL)
    }
}

/// Offsets `t - 1/2` of a uniform grid with `m` segments, symmetric bit for bit.
fn uniform_offsets(m: usize) -> Vec<f64> {
    let denom = 2.0 * m as f64;
    (0..=m)
        .map(|i| (2.0 * i as f64 - m as f64) / denom)
        .collect()
}

impl PathSpec {
    /// Validates samples; `closed` must agree with the endpoints within `tol`.
    pub fn new(samples: Vec<(f64, C64)>, closed: bool, tol: f64) -> Result<Self, PathError> {
        if samples.len() < 2 {
            return Err(PathError::TooFewSamples(samples.len()));
        }
        if samples[0].0 != 0.0 || samples[samples.len() - 1].0 != 1.0 {
            return Err(PathError::BadParameters);
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(PathError::BadParameters);
        }
        let (offsets, values): (Vec<f64>, Vec<C64>) =
            samples.into_iter().map(|(t, z)| (t - 0.5, z)).unzip();
        let gap = (values[values.len() - 1] - values[0]).norm();
        if closed && gap > tol {
            return Err(PathError::NotClosedWithinTolerance(gap));
        }
        Ok(PathSpec {
            offsets,
            values,
            closed,
        })
    }

    /// Uniform parameter grid; closed iff the endpoints agree within `tol`.
    pub fn from_values(values: Vec<C64>, tol: f64) -> Result<Self, PathError> {
        if values.len() < 2 {
            return Err(PathError::TooFewSamples(values.len()));
        }
        let closed = (values[values.len() - 1] - values[0]).norm() <= tol;
        Ok(PathSpec {
            offsets: uniform_offsets(values.len() - 1),
            values,
            closed,
        })
    }

    /// Values on an existing grid (taken from `grid`).
    pub(crate) fn on_grid_of(grid: &PathSpec, values: Vec<C64>, closed: bool) -> Self {
        debug_assert_eq!(grid.offsets.len(), values.len());
        PathSpec {
            offsets: grid.offsets.clone(),
            values,
            closed,
        }
    }

    pub fn constant(z: C64, samples: usize) -> Result<Self, PathError> {
        Self::from_values(vec![z; samples], 0.0)
    }

    /// Straight segment from `a` to `b`, hitting both ends exactly.
    pub fn segment(a: C64, b: C64, samples: usize) -> Result<Self, PathError> {
        if samples < 2 {
            return Err(PathError::TooFewSamples(samples));
        }
        let m = (samples - 1) as f64;
        let mut values: Vec<C64> = (0..samples).map(|i| a + (b - a) * (i as f64 / m)).collect();
        values[samples - 1] = b;
        Self::from_values(values, 0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> C64 {
        self.values[i]
    }

    pub fn param(&self, i: usize) -> f64 {
        self.offsets[i] + 0.5
    }

    pub fn params(&self) -> impl Iterator<Item = f64> + '_ {
        self.offsets.iter().map(|o| o + 0.5)
    }

    pub fn start(&self) -> C64 {
        self.values[0]
    }

    pub fn end(&self) -> C64 {
        self.values[self.values.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn closure_error(&self) -> f64 {
        (self.end() - self.start()).norm()
    }

    pub(crate) fn same_grid(&self, other: &PathSpec) -> bool {
        self.offsets == other.offsets
    }

    /// Same curve traversed backwards; an exact involution.
    pub fn reverse(&self) -> PathSpec {
        PathSpec {
            offsets: self.offsets.iter().rev().map(|o| -o).collect(),
            values: self.values.iter().rev().copied().collect(),
            closed: self.closed,
        }
    }

    /// Doubles the resolution by inserting segment midpoints.
    pub fn refine(&self) -> PathSpec {
        let mut offsets = Vec::with_capacity(2 * self.len() - 1);
        let mut values = Vec::with_capacity(2 * self.len() - 1);
        for i in 0..self.len() {
            if i > 0 {
                offsets.push(0.5 * (self.offsets[i - 1] + self.offsets[i]));
                values.push(0.5 * (self.values[i - 1] + self.values[i]));
            }
            offsets.push(self.offsets[i]);
            values.push(self.values[i]);
        }
        PathSpec {
            offsets,
            values,
            closed: self.closed,
        }
    }

    /// Joins `p` then `q`; each piece keeps a parameter share proportional to
    /// its segment count.
    pub fn concat(p: &PathSpec, q: &PathSpec, tol: f64) -> Result<PathSpec, PathError> {
        Self::concat_all(&[p, q], tol)
    }

    pub fn concat_all(pieces: &[&PathSpec], tol: f64) -> Result<PathSpec, PathError> {
        let first = pieces
            .first()
            .ok_or(PathError::InvalidArgument("nothing to concatenate".into()))?;
        for w in pieces.windows(2) {
            let gap = (w[0].end() - w[1].start()).norm();
            if gap > tol {
                return Err(PathError::NotComposable(gap));
            }
        }
        let total: usize = pieces.iter().map(|p| p.len() - 1).sum();
        let mut offsets = Vec::with_capacity(total + 1);
        let mut values = Vec::with_capacity(total + 1);
        offsets.push(-0.5);
        values.push(first.start());
        let mut done = 0usize;
        for p in pieces {
            let seg = (p.len() - 1) as f64;
            for i in 1..p.len() {
                let t = (done as f64 + (p.offsets[i] + 0.5) * seg) / total as f64;
                offsets.push(t - 0.5);
                values.push(p.values[i]);
            }
            done += p.len() - 1;
        }
        *offsets.last_mut().expect("non-empty") = 0.5;
        let closed = (values[values.len() - 1] - values[0]).norm() <= tol;
        Ok(PathSpec {
            offsets,
            values,
            closed,
        })
    }

    /// Number of turns of the closed path about `z0`, from the sum of
    /// per-segment argument increments of `z - z0`.
    pub fn winding_number(&self, z0: C64, eps: f64) -> Result<i64, PathError> {
        if !self.closed {
            return Err(PathError::NotClosed);
        }
        let nearest = self
            .values
            .iter()
            .map(|z| (z - z0).norm())
            .fold(f64::INFINITY, f64::min);
        if nearest <= eps {
            return Err(PathError::NearBasePoint(nearest));
        }
        let mut total = 0.0;
        let n = self.values.len();
        for i in 0..n {
            let a = self.values[i] - z0;
            let b = self.values[(i + 1) % n] - z0;
            let d = (b / a).arg();
            if d.abs() >= PI / 2.0 {
                return Err(PathError::InsufficientSampling);
            }
            total += d;
        }
        let turns = total / (2.0 * PI);
        let rounded = turns.round();
        if (turns - rounded).abs() >= 0.1 {
            return Err(PathError::InsufficientSampling);
        }
        Ok(rounded as i64)
    }

    /// `center + radius·e^{2πi·turns·t}`, starting at `center + radius`.
    pub fn circle_loop(
        center: C64,
        radius: f64,
        turns: i64,
        samples: usize,
    ) -> Result<PathSpec, PathError> {
        if !(radius > 0.0) {
            return Err(PathError::InvalidArgument(format!("radius {radius}")));
        }
        let needed = (16 * turns.unsigned_abs() as usize).max(2);
        if samples < needed {
            return Err(PathError::InvalidArgument(format!(
                "{samples} samples, need at least {needed}"
            )));
        }
        let m = (samples - 1) as f64;
        let mut values: Vec<C64> = (0..samples)
            .map(|i| {
                let theta = 2.0 * PI * turns as f64 * (i as f64 / m);
                center + C64::from_polar(radius, theta)
            })
            .collect();
        values[samples - 1] = values[0];
        Ok(PathSpec {
            offsets: uniform_offsets(samples - 1),
            values,
            closed: true,
        })
    }

    /// Value at parameter `t` by linear interpolation.
    pub fn sample_at(&self, t: f64) -> C64 {
        let o = t - 0.5;
        match self.offsets.binary_search_by(|x| x.total_cmp(&o)) {
            Ok(i) => self.values[i],
            Err(0) => self.values[0],
            Err(i) if i >= self.len() => self.end(),
            Err(i) => {
                let (o0, o1) = (self.offsets[i - 1], self.offsets[i]);
                let s = (o - o0) / (o1 - o0);
                self.values[i - 1] + (self.values[i] - self.values[i - 1]) * s
            }
        }
    }
}

/// Paths sharing one parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathBundle {
    paths: Vec<PathSpec>,
}

impl PathBundle {
    pub fn new(paths: Vec<PathSpec>) -> Result<Self, PathError> {
        let first = paths.first().ok_or(PathError::EmptyBundle)?;
        if paths.iter().any(|p| !p.same_grid(first)) {
            return Err(PathError::GridMismatch);
        }
        Ok(PathBundle { paths })
    }

    pub fn paths(&self) -> &[PathSpec] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &PathSpec {
        &self.paths[i]
    }

    pub fn width(&self) -> usize {
        self.paths.len()
    }

    /// Number of grid samples.
    pub fn samples(&self) -> usize {
        self.paths[0].len()
    }

    pub fn grid(&self) -> &PathSpec {
        &self.paths[0]
    }

    pub fn param(&self, step: usize) -> f64 {
        self.paths[0].param(step)
    }

    pub fn values_at(&self, step: usize) -> Vec<C64> {
        self.paths.iter().map(|p| p.value(step)).collect()
    }

    pub fn starts(&self) -> Vec<C64> {
        self.values_at(0)
    }

    pub fn ends(&self) -> Vec<C64> {
        self.values_at(self.samples() - 1)
    }

    pub fn is_closed(&self) -> bool {
        self.paths.iter().all(PathSpec::is_closed)
    }

    pub fn closure_error(&self) -> f64 {
        self.paths
            .iter()
            .map(PathSpec::closure_error)
            .fold(0.0, f64::max)
    }

    pub fn reverse(&self) -> PathBundle {
        PathBundle {
            paths: self.paths.iter().map(PathSpec::reverse).collect(),
        }
    }

    pub fn refine(&self) -> PathBundle {
        PathBundle {
            paths: self.paths.iter().map(PathSpec::refine).collect(),
        }
    }

    /// Entry-wise concatenation of bundles of equal width.
    pub fn concat_all(pieces: &[PathBundle], tol: f64) -> Result<PathBundle, PathError> {
        let width = pieces.first().ok_or(PathError::EmptyBundle)?.width();
        if pieces.iter().any(|b| b.width() != width) {
            return Err(PathError::InvalidArgument("bundle widths differ".into()));
        }
        let paths = (0..width)
            .map(|k| {
                let refs: Vec<&PathSpec> = pieces.iter().map(|b| &b.paths[k]).collect();
                PathSpec::concat_all(&refs, tol)
            })
            .collect::<Result<Vec<_>, _>>()?;
        PathBundle::new(paths)
    }

    /// Smallest distance between two distinct members at a shared parameter.
    pub fn min_pairwise_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for step in 0..self.samples() {
            let v = self.values_at(step);
            best = best.min(min_separation(&v));
        }
        best
    }
}

pub(crate) fn min_separation(points: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

/// Half-turn arcs exchanging `positions[i]` and `positions[j]` while the
/// other points stay put.
///
/// Both movers circle the midpoint counterclockwise, their offset from it
/// scaled by `bulge` in the perpendicular direction. When two points come
/// within `collision` of each other the bulge is shrunk or grown, up to
/// eight retries.
pub fn swap_arcs(
    positions: &[C64],
    i: usize,
    j: usize,
    bulge: f64,
    samples: usize,
    collision: f64,
) -> Result<PathBundle, PathError> {
    let n = positions.len();
    if i >= n || j >= n || i == j {
        return Err(PathError::InvalidArgument(format!(
            "swap ({i} {j}) on {n} points"
        )));
    }
    if !(bulge > 0.0) || samples < 2 {
        return Err(PathError::InvalidArgument(format!(
            "bulge {bulge}, samples {samples}"
        )));
    }
    if min_separation(positions) <= collision {
        return Err(PathError::DuplicatePositions);
    }
    const FACTORS: [f64; 9] = [1.0, 0.5, 2.0, 0.25, 4.0, 0.125, 8.0, 0.0625, 16.0];
    let offsets = uniform_offsets(samples - 1);
    let mid = 0.5 * (positions[i] + positions[j]);
    let half = positions[i] - mid;
    for f in FACTORS {
        let b = bulge * f;
        let arc: Vec<C64> = offsets
            .iter()
            .map(|o| {
                let s = PI * (o + 0.5);
                half * C64::new(s.cos(), b * s.sin())
            })
            .collect();
        let mut paths: Vec<PathSpec> = positions
            .iter()
            .map(|&z| PathSpec {
                offsets: offsets.clone(),
                values: vec![z; samples],
                closed: true,
            })
            .collect();
        let mut vi: Vec<C64> = arc.iter().map(|a| mid + a).collect();
        let mut vj: Vec<C64> = arc.iter().map(|a| mid - a).collect();
        vi[0] = positions[i];
        vj[0] = positions[j];
        vi[samples - 1] = positions[j];
        vj[samples - 1] = positions[i];
        paths[i] = PathSpec {
            offsets: offsets.clone(),
            values: vi,
            closed: false,
        };
        paths[j] = PathSpec {
            offsets: offsets.clone(),
            values: vj,
            closed: false,
        };
        let bundle = PathBundle { paths };
        if bundle.min_pairwise_distance() > collision {
            return Ok(bundle);
        }
    }
    Err(PathError::SwapInfeasible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn winding_of_circles() {
        let one = PathSpec::circle_loop(c(0.0, 0.0), 1.0, 1, 64).unwrap();
        assert_eq!(one.winding_number(c(0.0, 0.0), COLLISION_EPS), Ok(1));
        let two = PathSpec::circle_loop(c(0.0, 0.0), 1.0, 2, 64).unwrap();
        assert_eq!(two.winding_number(c(0.0, 0.0), COLLISION_EPS), Ok(2));
        let away = PathSpec::circle_loop(c(3.0, 0.0), 1.0, 1, 64).unwrap();
        assert_eq!(away.winding_number(c(0.0, 0.0), COLLISION_EPS), Ok(0));
        assert_eq!(
            one.reverse().winding_number(c(0.0, 0.0), COLLISION_EPS),
            Ok(-1)
        );
    }

    #[test]
    fn circle_of_radius_four() {
        let p = PathSpec::circle_loop(c(0.0, 0.0), 4.0, 1, 64).unwrap();
        assert_eq!(p.start(), c(4.0, 0.0));
        assert_eq!(p.winding_number(c(10.0, 0.0), COLLISION_EPS), Ok(0));
        let still = PathSpec::circle_loop(c(1.0, 1.0), 2.0, 0, 8).unwrap();
        assert!(still.is_closed());
        assert!(still.values().iter().all(|&z| z == c(3.0, 1.0)));
        assert!(PathSpec::circle_loop(c(0.0, 0.0), 1.0, 2, 20).is_err());
        assert!(PathSpec::circle_loop(c(0.0, 0.0), 0.0, 1, 64).is_err());
    }

    #[test]
    fn winding_errors() {
        let p = PathSpec::circle_loop(c(0.0, 0.0), 1.0, 1, 64).unwrap();
        assert!(matches!(
            p.winding_number(c(1.0, 0.0), COLLISION_EPS),
            Err(PathError::NearBasePoint(_))
        ));
        let coarse = PathSpec::circle_loop(c(0.0, 0.0), 1.0, 1, 16).unwrap();
        assert_eq!(
            coarse.winding_number(c(0.0, 0.0), COLLISION_EPS),
            Ok(1),
            "16 samples per turn is enough"
        );
        let square =
            PathSpec::from_values(vec![c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)], CLOSURE_TOL)
                .unwrap();
        assert_eq!(
            square.winding_number(c(0.0, 0.0), COLLISION_EPS),
            Err(PathError::InsufficientSampling)
        );
        let open = PathSpec::segment(c(0.0, 0.0), c(1.0, 1.0), 4).unwrap();
        assert_eq!(
            open.winding_number(c(5.0, 5.0), COLLISION_EPS),
            Err(PathError::NotClosed)
        );
    }

    #[test]
    fn concat_and_reverse() {
        let w = PathSpec::segment(c(0.0, 0.0), c(1.0, 2.0), 5).unwrap();
        assert!(!w.is_closed());
        let back = PathSpec::concat(&w, &w.reverse(), CLOSURE_TOL).unwrap();
        assert!(back.is_closed());
        assert_eq!(back.len(), 9);
        assert_eq!(back.param(4), 0.5);
        assert!(matches!(
            PathSpec::concat(&w, &w, CLOSURE_TOL),
            Err(PathError::NotComposable(_))
        ));
        let circle = PathSpec::circle_loop(c(0.0, 0.0), 1.0, 1, 32).unwrap();
        assert!(circle.reverse().is_closed());
    }

    #[test]
    fn constructor_validation() {
        assert!(PathSpec::new(vec![(0.0, c(0.0, 0.0))], false, CLOSURE_TOL).is_err());
        assert!(PathSpec::new(
            vec![
                (0.0, c(0.0, 0.0)),
                (0.5, c(1.0, 0.0)),
                (0.5, c(0.0, 0.0)),
                (1.0, c(0.0, 0.0))
            ],
            false,
            CLOSURE_TOL
        )
        .is_err());
        assert!(matches!(
            PathSpec::new(
                vec![(0.0, c(0.0, 0.0)), (1.0, c(1.0, 0.0))],
                true,
                CLOSURE_TOL
            ),
            Err(PathError::NotClosedWithinTolerance(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = PathSpec::circle_loop(c(0.5, -0.25), 2.0, 1, 17).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.starts_with("{\"closed\":true,\"samples\":[[0.0,2.5,-0.25]"));
        let q: PathSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(q.values(), p.values());
        assert!(q.is_closed());
    }

    #[test]
    fn swap_of_two_points() {
        let b = swap_arcs(&[c(-1.0, 0.0), c(1.0, 0.0)], 0, 1, 1.0, 33, COLLISION_EPS).unwrap();
        for step in 0..b.samples() {
            let t = b.param(step);
            let e = C64::from_polar(1.0, PI * t);
            assert!((b.path(0).value(step) + e).norm() < 1e-15);
            assert!((b.path(1).value(step) - e).norm() < 1e-15);
        }
        assert_eq!(b.path(0).end(), c(1.0, 0.0));
        assert_eq!(b.path(1).end(), c(-1.0, 0.0));
    }

    #[test]
    fn swap_leaves_others_and_rejects_duplicates() {
        let pos = [c(1.0, 0.0), c(-0.5, 0.8), c(-0.5, -0.8)];
        let b = swap_arcs(&pos, 0, 2, 1.0, 17, COLLISION_EPS).unwrap();
        assert!(b.path(1).values().iter().all(|&z| z == pos[1]));
        assert!(b.path(1).is_closed());
        assert!(b.min_pairwise_distance() > COLLISION_EPS);
        assert_eq!(
            swap_arcs(&[c(0.0, 0.0), c(0.0, 0.0)], 0, 1, 1.0, 17, COLLISION_EPS),
            Err(PathError::DuplicatePositions)
        );
    }

    #[test]
    fn swap_retries_around_blocking_point() {
        // the third point sits on the bulge-1 arc
        let pos = [c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        let b = swap_arcs(&pos, 0, 1, 1.0, 17, COLLISION_EPS).unwrap();
        assert!(b.min_pairwise_distance() > COLLISION_EPS);
    }
}
