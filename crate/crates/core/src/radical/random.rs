use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::continuation::Role;
use super::{coeff, int, root, BranchAssignment, ExprError, Program, RadicalExpr};
use crate::C64;

const EXPONENTS: [u32; 3] = [2, 3, 5];

/// Bounds for [`random_expr`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorLimits {
    /// Maximum node count.
    pub budget: usize,
    /// Divisors and radicands must be at least this large at the start point.
    pub min_magnitude: f64,
    /// Every intermediate value must be at most this large at the start point.
    pub max_magnitude: f64,
    pub attempts: usize,
    /// Branch products above this size are spot-checked instead of enumerated.
    pub exhaustive_branch_limit: u64,
}

impl Default for GeneratorLimits {
    fn default() -> Self {
        GeneratorLimits {
            budget: 32,
            min_magnitude: 1e-6,
            max_magnitude: 1e6,
            attempts: 100,
            exhaustive_branch_limit: 125,
        }
    }
}

/// Stream-splitting for per-expression seeds.
pub(crate) fn derive_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut z =
        base ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    degree: usize,
}

impl Gen<'_> {
    fn leaf(&mut self) -> RadicalExpr {
        if self.rng.gen_bool(0.65) {
            coeff(self.rng.gen_range(0..self.degree))
        } else {
            let v = self.rng.gen_range(1..=9i64);
            int(if self.rng.gen_bool(0.5) { v } else { -v })
        }
    }

    fn combine(&mut self, a: RadicalExpr, b: RadicalExpr) -> RadicalExpr {
        let (a, b) = if self.rng.gen_bool(0.5) {
            (a, b)
        } else {
            (b, a)
        };
        match self.rng.gen_range(0..4) {
            0 => a + b,
            1 => a - b,
            2 => a * b,
            _ => a / b,
        }
    }

    fn rational(&mut self) -> RadicalExpr {
        let mut e = self.leaf();
        for _ in 0..self.rng.gen_range(0..=2) {
            let l = self.leaf();
            e = self.combine(e, l);
        }
        e
    }

    fn exact(&mut self, depth: usize) -> RadicalExpr {
        if depth == 0 {
            return self.rational();
        }
        let inner = self.exact(depth - 1);
        let k = *EXPONENTS.choose(self.rng).expect("non-empty");
        let r = root(k, inner);
        match self.rng.gen_range(0..3) {
            0 => r,
            1 => {
                let d = self.rng.gen_range(0..depth);
                let other = self.exact(d);
                self.combine(r, other)
            }
            _ => {
                let other = self.rational();
                self.combine(r, other)
            }
        }
    }
}

fn radicands_reference_coefficients(e: &RadicalExpr) -> bool {
    match e {
        RadicalExpr::Integer { .. } | RadicalExpr::Coefficient { .. } => true,
        RadicalExpr::Root { radicand, .. } => {
            radicand.max_coefficient().is_some() && radicands_reference_coefficients(radicand)
        }
        RadicalExpr::Add { left, right }
        | RadicalExpr::Subtract { left, right }
        | RadicalExpr::Multiply { left, right }
        | RadicalExpr::Divide { left, right } => {
            radicands_reference_coefficients(left) && radicands_reference_coefficients(right)
        }
    }
}

fn well_scaled(
    e: &RadicalExpr,
    start: &[C64],
    limits: &GeneratorLimits,
    rng: &mut ChaCha8Rng,
) -> bool {
    let program = Program::compile(e);
    let assignments = if BranchAssignment::count(e) <= limits.exhaustive_branch_limit {
        BranchAssignment::all(e)
    } else {
        (0..8).map(|_| BranchAssignment::random(e, rng)).collect()
    };
    assignments.iter().all(|b| {
        let mut ok = true;
        let res = program.eval_observed(start, b, 0.0, 0.0, |role, v| {
            let m = v.norm();
            ok &= m.is_finite() && m <= limits.max_magnitude;
            if role != Role::Value {
                ok &= m >= limits.min_magnitude;
            }
        });
        res.is_ok() && ok
    })
}

/// A seeded expression of exactly `depth` over `c0 … c{degree−1}`, with root
/// exponents from {2, 3, 5} and integer constants from ±1 … ±9.
///
/// Candidates are resampled until every radicand mentions a coefficient and,
/// at `start`, divisors and radicands are at least `min_magnitude` and all
/// intermediates at most `max_magnitude`, for every branch choice.
pub fn random_expr(
    depth: usize,
    degree: usize,
    limits: &GeneratorLimits,
    seed: u64,
    start: &[C64],
) -> Result<RadicalExpr, ExprError> {
    if degree == 0 || start.len() != degree {
        return Err(ExprError::CoefficientOutOfRange {
            index: start.len(),
            degree,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..limits.attempts {
        let e = Gen {
            rng: &mut rng,
            degree,
        }
        .exact(depth);
        if e.node_count() <= limits.budget
            && e.max_coefficient().is_some()
            && radicands_reference_coefficients(&e)
            && well_scaled(&e, start, limits, &mut rng)
        {
            return Ok(e);
        }
    }
    Err(ExprError::GenerationFailed(limits.attempts))
}
