use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::paths::{PathBundle, PathSpec};
use crate::C64;

/// Monic polynomial `zⁿ + c_{n−1}z^{n−1} + … + c₀`, stored as `c₀ … c_{n−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct Polynomial {
    coefficients: Vec<C64>,
}

/// Wire form: `{"degree": n, "coefficients": [[re, im], …]}` (c₀ first).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub degree: usize,
    pub coefficients: Vec<[f64; 2]>,
}

impl From<Polynomial> for PolyJson {
    fn from(p: Polynomial) -> Self {
        PolyJson {
            degree: p.degree(),
            coefficients: p.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<PolyJson> for Polynomial {
    type Error = EngineError;

    fn try_from(j: PolyJson) -> Result<Self, EngineError> {
        if j.coefficients.len() != j.degree {
            return Err(EngineError::InvalidArgument(format!(
                "degree {} with {} coefficients",
                j.degree,
                j.coefficients.len()
            )));
        }
        Polynomial::new(
            j.coefficients
                .iter()
                .map(|c| C64::new(c[0], c[1]))
                .collect(),
        )
    }
}

impl Polynomial {
    pub fn new(coefficients: Vec<C64>) -> Result<Self, EngineError> {
        if coefficients.is_empty() {
            return Err(EngineError::ZeroDegree);
        }
        Ok(Polynomial { coefficients })
    }

    /// `zⁿ − 1`.
    pub fn roots_of_unity(n: usize) -> Result<Self, EngineError> {
        if n == 0 {
            return Err(EngineError::ZeroDegree);
        }
        let mut c = vec![C64::new(0.0, 0.0); n];
        c[0] = C64::new(-1.0, 0.0);
        Ok(Polynomial { coefficients: c })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    /// `1 + max |cᵢ|`, the normalization used for residuals and guards.
    pub fn scale(&self) -> f64 {
        coefficient_scale(&self.coefficients)
    }

    pub fn eval(&self, z: C64) -> C64 {
        horner(&self.coefficients, z).0
    }

    pub fn residual(&self, z: C64) -> f64 {
        self.eval(z).norm() / self.scale()
    }
}

pub(crate) fn coefficient_scale(c: &[C64]) -> f64 {
    1.0 + c.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Value and derivative of the monic polynomial at `z`.
fn horner(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(1.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
    }
    (p, dp)
}

fn max_residual(c: &[C64], roots: &[C64]) -> f64 {
    let scale = coefficient_scale(c);
    roots
        .iter()
        .map(|&z| horner(c, z).0.norm() / scale)
        .fold(0.0, f64::max)
}

/// Simultaneous Aberth–Ehrlich sweeps from the given guesses.
///
/// Converges when every correction is below `1e-14` relative; then the
/// residual must be within `tol`.
pub(crate) fn polish_roots(
    c: &[C64],
    mut z: Vec<C64>,
    tol: f64,
    max_sweeps: usize,
) -> Result<Vec<C64>, EngineError> {
    let n = c.len();
    if n == 1 {
        return Ok(vec![-c[0]]);
    }
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut worst = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    repulsion += (z[i] - z[j]).inv();
                }
            }
            let mut step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                // coincident guesses or a vanishing derivative: nudge apart
                step = C64::from_polar(1e-7 * (1.0 + z[i].norm()), i as f64 + 0.5);
            }
            z[i] -= step;
            worst = worst.max(step.norm() / (1.0 + z[i].norm()));
        }
        if worst <= 1e-14 {
            break;
        }
    }
    let residual = max_residual(c, &z);
    if residual <= tol && z.iter().all(|r| r.is_finite()) {
        Ok(z)
    } else {
        Err(EngineError::RootFindingFailed { residual, sweeps })
    }
}

/// All `n` roots (with multiplicity) such that
/// `max |p(root)| / (1 + max |cᵢ|) ≤ tol`.
///
/// Starts from a ring of radius `1 + max |cᵢ|` with a fixed irrational phase
/// offset and runs at most 500 simultaneous sweeps.
pub fn all_roots(poly: &Polynomial, tol: f64) -> Result<Vec<C64>, EngineError> {
    let n = poly.degree();
    let radius = poly.scale();
    let guesses = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + FRAC_1_SQRT_2))
        .collect();
    polish_roots(&poly.coefficients, guesses, tol, 500)
}

/// Sorts by real part, then imaginary part.
pub fn sort_roots(roots: &mut [C64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Expansion of `∏ (z − sᵢ)`: `c_{n−1} = −Σ sᵢ`, …, `c₀ = (−1)ⁿ ∏ sᵢ`.
pub fn coefficients_from_roots(roots: &[C64]) -> Polynomial {
    // full[k] is the coefficient of z^k, leading 1 kept at the end
    let mut full = vec![C64::new(1.0, 0.0)];
    for &s in roots {
        let mut next = vec![C64::new(0.0, 0.0); full.len() + 1];
        for (k, &a) in full.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * s;
        }
        full = next;
    }
    full.pop();
    Polynomial { coefficients: full }
}

/// Pointwise Vieta map from root paths to coefficient paths. The output is
/// closed whenever the roots end on a permutation of where they started.
pub fn coefficient_paths_from_root_paths(
    roots: &PathBundle,
    closure_tol: f64,
) -> Result<PathBundle, EngineError> {
    let n = roots.width();
    let steps = roots.samples();
    let mut columns = vec![Vec::with_capacity(steps); n];
    for step in 0..steps {
        let poly = coefficients_from_roots(&roots.values_at(step));
        for (k, c) in poly.coefficients.into_iter().enumerate() {
            columns[k].push(c);
        }
    }
    let grid = roots.grid();
    let paths = columns
        .into_iter()
        .map(|vals| {
            let closed = (vals[vals.len() - 1] - vals[0]).norm() <= closure_tol;
            PathSpec::on_grid_of(grid, vals, closed)
        })
        .collect();
    Ok(PathBundle::new(paths)?)
}

/// Discriminant of a monic polynomial from its roots, `∏_{i<j} (sᵢ − sⱼ)²`.
pub fn discriminant(roots: &[C64]) -> C64 {
    let mut d = C64::new(1.0, 0.0);
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let diff = roots[i] - roots[j];
            d *= diff * diff;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn roots_of_z2_plus_1() {
        let p = Polynomial::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let mut r = all_roots(&p, 1e-12).unwrap();
        sort_roots(&mut r);
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn fifth_roots_of_unity() {
        let p = Polynomial::roots_of_unity(5).unwrap();
        let r = all_roots(&p, 1e-12).unwrap();
        // closed form r^{1/k} e^{i(θ+2ℓπ)/k} with r = 1, θ = 0
        for l in 0..5 {
            let expected = C64::from_polar(1.0, 2.0 * PI * l as f64 / 5.0);
            let best = r
                .iter()
                .map(|z| (z - expected).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "branch {l}: {best}");
        }
    }

    #[test]
    fn triple_root() {
        // (z − 1)³ = z³ − 3z² + 3z − 1
        let p = Polynomial::new(vec![c(-1.0, 0.0), c(3.0, 0.0), c(-3.0, 0.0)]).unwrap();
        let r = all_roots(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 3);
        for z in &r {
            assert!(p.residual(*z) <= 1e-12);
            assert!((z - c(1.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn linear_polynomial() {
        let p = Polynomial::new(vec![c(2.0, -1.0)]).unwrap();
        assert_eq!(all_roots(&p, 1e-12).unwrap(), vec![c(-2.0, 1.0)]);
        assert_eq!(Polynomial::new(vec![]), Err(EngineError::ZeroDegree));
    }

    #[test]
    fn vieta_small_cases() {
        let p = coefficients_from_roots(&[c(1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(p.coefficients(), &[c(2.0, 0.0), c(-3.0, 0.0)]);
        let roots = [c(0.3, 1.0), c(-2.0, 0.5), c(1.5, -0.7)];
        let p = coefficients_from_roots(&roots);
        let sum: C64 = roots.iter().sum();
        let prod: C64 = roots.iter().product();
        assert!((p.coefficients()[2] + sum).norm() < 1e-15);
        assert!((p.coefficients()[0] + prod).norm() < 1e-15);
        let q = coefficients_from_roots(&[roots[2], roots[0], roots[1]]);
        for (a, b) in p.coefficients().iter().zip(q.coefficients()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn polynomial_json() {
        let p = Polynomial::roots_of_unity(2).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"degree":2,"coefficients":[[-1.0,0.0],[0.0,0.0]]}"#);
        let q: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        assert!(
            serde_json::from_str::<Polynomial>(r#"{"degree":3,"coefficients":[[1,0]]}"#).is_err()
        );
    }
}
