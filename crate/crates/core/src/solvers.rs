//! Closed-form roots of monic quadratics, cubics and quartics, plus the same
//! formulas as [`RadicalExpr`] trees for continuation experiments.
//!
//! The quartic uses the resolvent `8A³ − 4PA² − 8RA + 4PR − Q² = 0`, the
//! condition for `(P − 2A)Z² + QZ + R − A²` to be a perfect square.

use serde::Serialize;

use crate::monodromy::kth_root_branch;
use crate::radical::{coeff, int, root, RadicalExpr};
use crate::C64;

/// Below this `|P − 2A|` the quartic is solved as a biquadratic.
pub const PIVOT_FLOOR: f64 = 1e-10;
/// Below this `|v|` the cubic is treated as a triple root.
pub const CUBIC_ZERO: f64 = 1e-12;

fn sqrt(x: C64) -> C64 {
    kth_root_branch(x, 2, 0)
}

/// Roots of `z² + c₁z + c₀`: index 0 takes the principal square root of
/// `c₁² − 4c₀`, index 1 the other one.
pub fn solve_quadratic(c1: C64, c0: C64) -> [C64; 2] {
    let d = sqrt(c1 * c1 - 4.0 * c0);
    let plus = 0.5 * (-c1 + d);
    let minus = 0.5 * (-c1 - d);
    // recover the smaller root from the product to avoid cancellation
    if plus.norm() >= minus.norm() {
        let other = if plus.norm() > 0.0 { c0 / plus } else { minus };
        [plus, other]
    } else {
        [c0 / minus, minus]
    }
}

/// `Z³ + 3PZ + 2Q` with `Z = z + c₂/3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepressedCubic {
    pub p: C64,
    pub q: C64,
}

pub fn depress_cubic(c2: C64, c1: C64, c0: C64) -> DepressedCubic {
    DepressedCubic {
        p: c1 / 3.0 - c2 * c2 / 9.0,
        q: c0 / 2.0 + c2 * c2 * c2 / 27.0 - c1 * c2 / 6.0,
    }
}

/// The three `(v, w)` pairs with `v³ = −Q ± √(Q² + P³)` and `vw = −P`,
/// one per cube-root branch of `v`. The square-root sign is the one giving
/// the larger `|v³|`.
pub fn cubic_pairs(c2: C64, c1: C64, c0: C64) -> [(C64, C64); 3] {
    let DepressedCubic { p, q } = depress_cubic(c2, c1, c0);
    let s = sqrt(q * q + p * p * p);
    let u = if (-q + s).norm() >= (-q - s).norm() {
        -q + s
    } else {
        -q - s
    };
    let scale = 1.0 + p.norm().max(q.norm());
    if u.norm() <= CUBIC_ZERO * scale {
        let zero = C64::new(0.0, 0.0);
        return [(zero, zero); 3];
    }
    [0, 1, 2].map(|l| {
        let v = kth_root_branch(u, 3, l);
        (v, -p / v)
    })
}

/// Roots `−c₂/3 + v + w` of `z³ + c₂z² + c₁z + c₀`, one per cube-root branch.
pub fn solve_cubic(c2: C64, c1: C64, c0: C64) -> [C64; 3] {
    let shift = -c2 / 3.0;
    cubic_pairs(c2, c1, c0).map(|(v, w)| shift + v + w)
}

/// `Z⁴ + PZ² + QZ + R` with `Z = z + c₃/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepressedQuartic {
    pub p: C64,
    pub q: C64,
    pub r: C64,
}

impl DepressedQuartic {
    pub fn resolvent(&self) -> C64 {
        resolvent_root(self.p, self.q, self.r)
    }
}

pub fn depress_quartic(c3: C64, c2: C64, c1: C64, c0: C64) -> DepressedQuartic {
    let c3_2 = c3 * c3;
    DepressedQuartic {
        p: c2 - 3.0 * c3_2 / 8.0,
        q: c1 - c2 * c3 / 2.0 + c3_2 * c3 / 8.0,
        r: c0 - c1 * c3 / 4.0 + c2 * c3_2 / 16.0 - 3.0 * c3_2 * c3_2 / 256.0,
    }
}

/// Root of `8A³ − 4PA² − 8RA + 4PR − Q² = 0` with the largest `|P − 2A|`.
pub fn resolvent_root(p: C64, q: C64, r: C64) -> C64 {
    let roots = solve_cubic(-p / 2.0, -r, p * r / 2.0 - q * q / 8.0);
    let mut best = roots[0];
    for &a in &roots[1..] {
        if (p - 2.0 * a).norm() > (p - 2.0 * best).norm() {
            best = a;
        }
    }
    best
}

/// Roots of `z⁴ + c₃z³ + c₂z² + c₁z + c₀`.
pub fn solve_quartic(c3: C64, c2: C64, c1: C64, c0: C64) -> [C64; 4] {
    let dq = depress_quartic(c3, c2, c1, c0);
    let shift = -c3 / 4.0;
    let a = dq.resolvent();
    let pivot = dq.p - 2.0 * a;
    let zs = if pivot.norm() > PIVOT_FLOOR {
        // (Z² + A)² = −pivot·(Z − B)²  ⇒  Z² + A = ±s(Z − B), s = √(2A − P)
        let b = -dq.q / (2.0 * pivot);
        let s = sqrt(-pivot);
        let [z0, z1] = solve_quadratic(-s, a + s * b);
        let [z2, z3] = solve_quadratic(s, a - s * b);
        [z0, z1, z2, z3]
    } else {
        let [w0, w1] = solve_quadratic(dq.p, dq.r);
        let (s0, s1) = (sqrt(w0), sqrt(w1));
        [s0, -s0, s1, -s1]
    };
    zs.map(|z| z + shift)
}

/// `max |p(r)|` over `roots` for the monic polynomial with coefficients `c₀ …`.
pub fn max_residual(coeffs: &[C64], roots: &[C64]) -> f64 {
    roots
        .iter()
        .map(|&z| {
            coeffs
                .iter()
                .rev()
                .fold(C64::new(1.0, 0.0), |acc, &c| acc * z + c)
                .norm()
        })
        .fold(0.0, f64::max)
}

/// Smallest, over pairings, of the largest `|aᵢ − b_σ(i)| / (1 + |b_σ(i)|)`.
/// Exhaustive over pairings; intended for `n ≤ 8`.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    fn search(a: &[C64], b: &[C64], used: &mut [bool], i: usize, worst: f64, best: &mut f64) {
        if worst >= *best {
            return;
        }
        if i == a.len() {
            *best = worst;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                let e = (a[i] - b[j]).norm() / (1.0 + b[j].norm());
                search(a, b, used, i + 1, worst.max(e), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    search(a, b, &mut vec![false; b.len()], 0, 0.0, &mut best);
    best
}

fn half(e: RadicalExpr) -> RadicalExpr {
    e / int(2)
}

/// `−c₁/2 + √(c₁² − 4c₀)/2`.
pub fn quadratic_formula_expr() -> RadicalExpr {
    half(int(-1) * coeff(1)) + half(root(2, coeff(1) * coeff(1) - int(4) * coeff(0)))
}

/// Cubic formula with the pairing `w = −P/v`, for `y³ + a₂y² + a₁y + a₀`;
/// `rotate` multiplies `v` by a primitive cube root of unity.
fn cubic_formula_over(
    a2: &RadicalExpr,
    a1: &RadicalExpr,
    a0: &RadicalExpr,
    rotate: bool,
) -> RadicalExpr {
    let p = a1.clone() / int(3) - a2.clone() * a2.clone() / int(9);
    let q = a0.clone() / int(2) + a2.clone() * a2.clone() * a2.clone() / int(27)
        - a1.clone() * a2.clone() / int(6);
    let disc = q.clone() * q.clone() + p.clone() * p.clone() * p.clone();
    let mut v = root(3, int(-1) * q + root(2, disc));
    if rotate {
        v = half(int(-1) + root(2, int(-3))) * v;
    }
    int(-1) * a2.clone() / int(3) + v.clone() - p / v
}

/// `−c₂/3 + v − P/v` with `v = ∛(−Q + √(Q² + P³))`: depth 2. The two copies
/// of `v` must carry the same branches to give a root.
pub fn cubic_formula_expr() -> RadicalExpr {
    cubic_formula_over(&coeff(2), &coeff(1), &coeff(0), false)
}

/// Quartic roots in Euler's form `Z = (√y₁ + √y₂ − Q/(√y₁√y₂))/2 − c₃/4`,
/// `y₁, y₂` roots of `y³ + 2Py² + (P² − 4R)y − Q²`: depth 3. With every
/// branch index 0 the value is a root.
pub fn quartic_formula_expr() -> RadicalExpr {
    let c3sq = coeff(3) * coeff(3);
    let p = coeff(2) - int(3) * c3sq.clone() / int(8);
    let q = coeff(1) - coeff(2) * coeff(3) / int(2) + c3sq.clone() * coeff(3) / int(8);
    let r = coeff(0) - coeff(1) * coeff(3) / int(4) + coeff(2) * c3sq.clone() / int(16)
        - int(3) * c3sq.clone() * c3sq / int(256);
    let a2 = int(2) * p.clone();
    let a1 = p.clone() * p - int(4) * r;
    let a0 = int(-1) * q.clone() * q.clone();
    let s1 = root(2, cubic_formula_over(&a2, &a1, &a0, false));
    let s2 = root(2, cubic_formula_over(&a2, &a1, &a0, true));
    half(s1.clone() + s2.clone() - q / (s1 * s2)) - coeff(3) / int(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::{all_roots, Polynomial};
    use crate::radical::{eval_initial, BranchAssignment};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn r(x: f64) -> C64 {
        c(x, 0.0)
    }

    #[test]
    fn quadratic_examples() {
        let [a, b] = solve_quadratic(r(0.0), r(-1.0));
        assert_eq!((a, b), (r(1.0), r(-1.0)));
        let roots = solve_quadratic(r(-3.0), r(2.0));
        assert!(multiset_distance(&roots, &[r(1.0), r(2.0)]) < 1e-15);
    }

    #[test]
    fn cubic_examples() {
        let d = depress_cubic(r(3.0), r(3.0), r(1.0));
        assert_eq!((d.p, d.q), (r(0.0), r(0.0)));
        assert_eq!(solve_cubic(r(3.0), r(3.0), r(1.0)), [r(-1.0); 3]);
        let d = depress_cubic(r(0.0), c(2.0, 1.0), c(-1.0, 4.0));
        assert_eq!((d.p, d.q), (c(2.0, 1.0) / 3.0, c(-1.0, 4.0) / 2.0));
        let unity: Vec<C64> = (0..3).map(|l| kth_root_branch(r(1.0), 3, l)).collect();
        assert!(multiset_distance(&solve_cubic(r(0.0), r(0.0), r(-1.0)), &unity) < 1e-15);
    }

    #[test]
    fn cubic_pairing() {
        let (c2, c1, c0) = (c(0.3, -1.0), c(2.0, 0.5), c(-1.5, 0.25));
        let p = depress_cubic(c2, c1, c0).p;
        for (v, w) in cubic_pairs(c2, c1, c0) {
            assert!((v * w + p).norm() <= 1e-12 * (1.0 + p.norm()));
        }
    }

    #[test]
    fn quartic_examples() {
        let d = depress_quartic(r(0.0), r(2.0), r(3.0), r(4.0));
        assert_eq!((d.p, d.q, d.r), (r(2.0), r(3.0), r(4.0)));
        let roots = solve_quartic(r(0.0), r(0.0), r(0.0), r(-1.0));
        let expect = [r(1.0), r(-1.0), c(0.0, 1.0), c(0.0, -1.0)];
        assert!(multiset_distance(&roots, &expect) < 1e-15);
        // (z² − 1)(z² − 4) = z⁴ − 5z² + 4
        let roots = solve_quartic(r(0.0), r(-5.0), r(0.0), r(4.0));
        assert!(multiset_distance(&roots, &[r(1.0), r(-1.0), r(2.0), r(-2.0)]) < 1e-14);
        assert_eq!(depress_quartic(r(0.0), r(-5.0), r(0.0), r(4.0)).q, r(0.0));
    }

    #[test]
    fn resolvent_examples() {
        assert_eq!(resolvent_root(r(0.0), r(0.0), r(0.0)), r(0.0));
        let a = resolvent_root(r(2.0), r(0.0), r(0.0));
        assert!(a.norm() < 1e-15);
        let (p, q, rr) = (c(1.0, 2.0), c(-0.5, 1.0), c(0.25, -3.0));
        let a = resolvent_root(p, q, rr);
        let res = 8.0 * a * a * a - 4.0 * p * a * a - 8.0 * rr * a + 4.0 * p * rr - q * q;
        assert!(res.norm() < 1e-12);
    }

    #[test]
    fn depressed_quartic_substitution() {
        let (c3, c2, c1, c0) = (c(0.5, -1.0), c(2.0, 0.3), c(-1.0, 1.0), c(0.7, 0.2));
        let d = depress_quartic(c3, c2, c1, c0);
        for k in 0..10 {
            let z = C64::from_polar(0.5 + 0.3 * k as f64, 0.7 * k as f64);
            let lhs = z.powu(4) + c3 * z.powu(3) + c2 * z * z + c1 * z + c0;
            let zz = z + c3 / 4.0;
            let rhs = zz.powu(4) + d.p * zz * zz + d.q * zz + d.r;
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }
    }

    #[test]
    fn formula_depths() {
        assert_eq!(quadratic_formula_expr().depth(), 1);
        assert_eq!(cubic_formula_expr().depth(), 2);
        assert_eq!(quartic_formula_expr().depth(), 3);
    }

    #[test]
    fn formula_expressions_evaluate_to_roots() {
        let quad = [c(0.5, 1.0), c(-1.0, 0.25)];
        let cubic = [c(0.5, 1.0), c(-1.0, 0.25), c(0.3, -0.7)];
        let quartic = [c(0.5, 1.0), c(-1.0, 0.25), c(0.3, -0.7), c(1.1, 0.4)];
        for (e, cs) in [
            (quadratic_formula_expr(), &quad[..]),
            (cubic_formula_expr(), &cubic[..]),
            (quartic_formula_expr(), &quartic[..]),
        ] {
            let v = eval_initial(&e, cs, &BranchAssignment::zeros(&e)).unwrap();
            let roots = all_roots(&Polynomial::new(cs.to_vec()).unwrap(), 1e-12).unwrap();
            let best = roots
                .iter()
                .map(|z| (z - v).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-9, "{best}");
        }
    }
}
