use std::f64::consts::{PI, TAU};

use super::EngineError;
use crate::paths::PathSpec;
use crate::{Tolerances, C64};

/// Branch `ℓ` of the k-th root: `|x|^{1/k} e^{i(θ + 2ℓπ)/k}` with `θ = arg x ∈ (−π, π]`.
pub fn kth_root_branch(x: C64, k: u32, l: u32) -> C64 {
    let kf = f64::from(k);
    C64::from_polar(
        x.norm().powf(1.0 / kf),
        (x.arg() + TAU * f64::from(l % k)) / kf,
    )
}

/// The k-th root of `x` closest in argument to `prev`.
pub fn nearest_kth_root(x: C64, k: u32, prev: C64) -> C64 {
    let principal = kth_root_branch(x, k, 0);
    let kf = f64::from(k);
    let shift = ((prev / principal).arg() * kf / TAU).round();
    principal * C64::from_polar(1.0, TAU * shift / kf)
}

/// Follows one k-th root from `prev` (a root of `a`) to a root of `b` along
/// the segment `a → b`, bisecting while the argument step reaches `π/2`.
///
/// `floor` is the branch-point guard on `|radicand|`.
pub(crate) fn advance_kth_root(
    prev: C64,
    a: C64,
    b: C64,
    k: u32,
    floor: f64,
    levels: u32,
    param: f64,
) -> Result<C64, EngineError> {
    if b.norm() <= floor {
        return Err(EngineError::BranchPoint { param });
    }
    if (b / a).arg().abs() < PI / 2.0 {
        return Ok(nearest_kth_root(b, k, prev));
    }
    if levels == 0 {
        return Err(EngineError::RefinementExhausted { param });
    }
    let mid = 0.5 * (a + b);
    let half = advance_kth_root(prev, a, mid, k, floor, levels - 1, param)?;
    advance_kth_root(half, mid, b, k, floor, levels - 1, param)
}

/// Continues a k-th root along `radicand`, starting from `initial_branch`.
///
/// The output shares the radicand's grid and is flagged closed iff its ends
/// agree within `tol.closure · (1 + |start|)`.
pub fn continue_kth_root(
    radicand: &PathSpec,
    k: u32,
    initial_branch: C64,
    tol: &Tolerances,
) -> Result<PathSpec, EngineError> {
    if k < 2 {
        return Err(EngineError::InvalidArgument(format!("root index {k}")));
    }
    let r0 = radicand.start();
    if r0.norm() <= tol.collision {
        return Err(EngineError::BranchPoint { param: 0.0 });
    }
    let mismatch = (initial_branch.powu(k) - r0).norm();
    if mismatch > 1e-8 * (1.0 + r0.norm()) {
        return Err(EngineError::InvalidArgument(format!(
            "initial branch is not a {k}-th root of the radicand start (gap {mismatch:e})"
        )));
    }
    let mut values = Vec::with_capacity(radicand.len());
    let mut cur = initial_branch;
    values.push(cur);
    for w in radicand.values().windows(2).enumerate() {
        let (step, pair) = w;
        cur = advance_kth_root(
            cur,
            pair[0],
            pair[1],
            k,
            tol.collision,
            tol.max_bisections,
            radicand.param(step),
        )?;
        values.push(cur);
    }
    let start = values[0];
    let closed = (cur - start).norm() <= tol.closure * (1.0 + start.norm());
    Ok(PathSpec::on_grid_of(radicand, values, closed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn branches_are_equally_spaced() {
        let x = c(-3.0, 4.0);
        for k in 2..=7 {
            let roots: Vec<C64> = (0..k).map(|l| kth_root_branch(x, k, l)).collect();
            for (l, r) in roots.iter().enumerate() {
                assert!((r.powu(k) - x).norm() < 1e-12);
                let next = roots[(l + 1) % k as usize];
                let step = (next / r).arg().rem_euclid(TAU);
                assert!((step - TAU / f64::from(k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn square_root_of_sixteen_advances() {
        let loop16 = PathSpec::circle_loop(c(0.0, 0.0), 16.0, 1, 64).unwrap();
        let tol = Tolerances::default();
        let w = continue_kth_root(&loop16, 2, c(4.0, 0.0), &tol).unwrap();
        assert!((w.end() - c(-4.0, 0.0)).norm() < 1e-12);
        assert!(!w.is_closed());
    }

    #[test]
    fn non_winding_loop_closes() {
        let away = PathSpec::circle_loop(c(5.0, 0.0), 1.0, 1, 64).unwrap();
        let tol = Tolerances::default();
        let w = continue_kth_root(&away, 2, kth_root_branch(c(6.0, 0.0), 2, 1), &tol).unwrap();
        assert!(w.is_closed());
        let cube = PathSpec::circle_loop(c(0.0, 0.0), 2.0, 3, 96).unwrap();
        let w = continue_kth_root(&cube, 3, kth_root_branch(c(2.0, 0.0), 3, 0), &tol).unwrap();
        assert!(w.is_closed());
    }

    #[test]
    fn coarse_steps_are_bisected() {
        let square = PathSpec::from_values(
            vec![
                c(1.0, 0.0),
                c(0.0, 1.0),
                c(-1.0, 0.0),
                c(0.0, -1.0),
                c(1.0, 0.0),
            ],
            1e-9,
        )
        .unwrap();
        let w = continue_kth_root(&square, 2, c(1.0, 0.0), &Tolerances::default()).unwrap();
        assert!((w.end() - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn branch_point_and_bad_start() {
        let tol = Tolerances::default();
        let through = PathSpec::segment(c(1.0, 0.0), c(-1.0, 0.0), 3).unwrap();
        assert!(matches!(
            continue_kth_root(&through, 2, c(1.0, 0.0), &tol),
            Err(EngineError::BranchPoint { .. })
        ));
        let p = PathSpec::constant(c(4.0, 0.0), 4).unwrap();
        assert!(continue_kth_root(&p, 2, c(3.0, 0.0), &tol).is_err());
        assert!(continue_kth_root(&p, 1, c(4.0, 0.0), &tol).is_err());
    }
}
