use serde::Serialize;

use super::roots::{coefficient_scale, coefficients_from_roots, polish_roots};
use super::{all_roots, discriminant, sort_roots, EngineError, Polynomial};
use crate::paths::{min_separation, PathBundle, PathSpec};
use crate::perm::Permutation;
use crate::{Tolerances, C64};

/// Root paths over the grid of a coefficient bundle. Path `i` carries label `i`.
#[derive(Debug, Clone, Serialize)]
pub struct RootTrajectorySet {
    paths: PathBundle,
    /// Minimum pairwise separation at each retained grid step.
    min_separations: Vec<f64>,
    refinements: usize,
}

impl RootTrajectorySet {
    pub fn paths(&self) -> &PathBundle {
        &self.paths
    }

    pub fn min_separations(&self) -> &[f64] {
        &self.min_separations
    }

    pub fn min_separation(&self) -> f64 {
        self.min_separations
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Extra bisection steps taken beyond the grid.
    pub fn refinements(&self) -> usize {
        self.refinements
    }
}

struct Stepper<'a> {
    tol: &'a Tolerances,
    refinements: usize,
}

impl Stepper<'_> {
    /// Roots of `b` continued from `z` (roots of `a`).
    fn advance(
        &mut self,
        a: &[C64],
        b: &[C64],
        z: &[C64],
        levels: u32,
        t: (f64, f64),
    ) -> Result<Vec<C64>, EngineError> {
        let sep = min_separation(z);
        if sep < self.tol.collision {
            return Err(EngineError::RootCollision {
                param: t.0,
                separation: sep,
            });
        }
        if let Ok(next) = polish_roots(b, z.to_vec(), self.tol.root_residual, self.tol.max_sweeps) {
            let matched = next.iter().zip(z).all(|(n, o)| (n - o).norm() < 0.5 * sep);
            if matched {
                let after = min_separation(&next);
                if after < self.tol.collision {
                    return Err(EngineError::RootCollision {
                        param: t.1,
                        separation: after,
                    });
                }
                return Ok(next);
            }
        }
        if levels == 0 {
            return Err(EngineError::RefinementExhausted { param: t.0 });
        }
        self.refinements += 1;
        let mid: Vec<C64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
        let tm = 0.5 * (t.0 + t.1);
        let half = self.advance(a, &mid, z, levels - 1, (t.0, tm))?;
        self.advance(&mid, b, &half, levels - 1, (tm, t.1))
    }
}

/// Continues `start_roots` (roots of the bundle's first sample, in label
/// order) along an open or closed coefficient bundle.
pub fn track_roots(
    coeffs: &PathBundle,
    start_roots: &[C64],
    tol: &Tolerances,
) -> Result<RootTrajectorySet, EngineError> {
    let n = start_roots.len();
    if n == 0 {
        return Err(EngineError::ZeroDegree);
    }
    if coeffs.width() != n {
        return Err(EngineError::WidthMismatch {
            got: coeffs.width(),
            expected: n,
        });
    }
    let c0 = coeffs.starts();
    let gap = coefficients_from_roots(start_roots)
        .coefficients()
        .iter()
        .zip(&c0)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if gap > tol.matching * coefficient_scale(&c0).powi(n as i32) {
        return Err(EngineError::StartMismatch(gap));
    }
    let mut stepper = Stepper {
        tol,
        refinements: 0,
    };
    let steps = coeffs.samples();
    let mut columns: Vec<Vec<C64>> = start_roots
        .iter()
        .map(|&z| {
            let mut v = Vec::with_capacity(steps);
            v.push(z);
            v
        })
        .collect();
    let mut seps = Vec::with_capacity(steps);
    seps.push(min_separation(start_roots));
    let mut z = start_roots.to_vec();
    let mut a = c0;
    for step in 1..steps {
        let b = coeffs.values_at(step);
        z = stepper.advance(
            &a,
            &b,
            &z,
            tol.max_bisections,
            (coeffs.param(step - 1), coeffs.param(step)),
        )?;
        seps.push(min_separation(&z));
        for (col, &r) in columns.iter_mut().zip(&z) {
            col.push(r);
        }
        a = b;
    }
    let grid = coeffs.grid();
    let paths = columns
        .into_iter()
        .map(|vals| {
            let closed = (vals[vals.len() - 1] - vals[0]).norm() <= tol.matching;
            PathSpec::on_grid_of(grid, vals, closed)
        })
        .collect();
    Ok(RootTrajectorySet {
        paths: PathBundle::new(paths)?,
        min_separations: seps,
        refinements: stepper.refinements,
    })
}

/// Result of following all roots once around a closed coefficient loop.
#[derive(Debug, Clone, Serialize)]
pub struct MonodromyTrace {
    schema: &'static str,
    tolerances: Tolerances,
    degree: usize,
    coefficient_paths: PathBundle,
    roots: RootTrajectorySet,
    induced: Permutation,
    /// Max over coefficients of `|end − start|`.
    closure_error: f64,
    /// Max over labels of `|end(i) − start(induced(i))|`.
    endpoint_error: f64,
    steps: usize,
    refinements: usize,
}

impl MonodromyTrace {
    pub const SCHEMA: &'static str = "trace-v1";

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    pub fn coefficient_paths(&self) -> &PathBundle {
        &self.coefficient_paths
    }

    pub fn roots(&self) -> &RootTrajectorySet {
        &self.roots
    }

    pub fn induced(&self) -> &Permutation {
        &self.induced
    }

    pub fn closure_error(&self) -> f64 {
        self.closure_error
    }

    pub fn endpoint_error(&self) -> f64 {
        self.endpoint_error
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn refinements(&self) -> usize {
        self.refinements
    }

    pub fn min_separation(&self) -> f64 {
        self.roots.min_separation()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

/// Traces the roots of `start` around the closed bundle `coeffs`; labels
/// follow the sorted order of the start roots (by real, then imaginary part).
pub fn trace_roots(
    start: &Polynomial,
    coeffs: &PathBundle,
    tol: &Tolerances,
) -> Result<MonodromyTrace, EngineError> {
    let mut roots = all_roots(start, tol.root_residual)?;
    sort_roots(&mut roots);
    let gap = start
        .coefficients()
        .iter()
        .zip(coeffs.starts())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if coeffs.width() != start.degree() {
        return Err(EngineError::WidthMismatch {
            got: coeffs.width(),
            expected: start.degree(),
        });
    }
    if gap > tol.matching * start.scale() {
        return Err(EngineError::StartMismatch(gap));
    }
    trace_roots_from(&roots, coeffs, tol)
}

/// As [`trace_roots`], with the start roots given in label order.
pub fn trace_roots_from(
    start_roots: &[C64],
    coeffs: &PathBundle,
    tol: &Tolerances,
) -> Result<MonodromyTrace, EngineError> {
    let closure_error = coeffs.closure_error();
    if closure_error > tol.closure {
        return Err(EngineError::BundleNotClosed);
    }
    let disc = discriminant(start_roots).norm();
    if disc < tol.discriminant_floor {
        return Err(EngineError::DegenerateStart(disc));
    }
    let roots = track_roots(coeffs, start_roots, tol)?;
    let ends = roots.paths.ends();
    let mut images = Vec::with_capacity(ends.len());
    let mut endpoint_error = 0.0f64;
    for end in &ends {
        let mut hits = start_roots
            .iter()
            .enumerate()
            .filter(|(_, s)| (end - *s).norm() <= tol.matching * (1.0 + s.norm()));
        match (hits.next(), hits.next()) {
            (Some((j, s)), None) => {
                endpoint_error = endpoint_error.max((end - s).norm());
                images.push(j);
            }
            _ => return Err(EngineError::EndpointMismatch),
        }
    }
    let induced = Permutation::from_images(images).map_err(|_| EngineError::EndpointMismatch)?;
    Ok(MonodromyTrace {
        schema: MonodromyTrace::SCHEMA,
        tolerances: *tol,
        degree: start_roots.len(),
        coefficient_paths: coeffs.clone(),
        steps: coeffs.samples() - 1,
        refinements: roots.refinements,
        roots,
        induced,
        closure_error,
        endpoint_error,
    })
}
