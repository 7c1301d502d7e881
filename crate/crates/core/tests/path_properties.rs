use arlab::paths::{swap_arcs, PathSpec};
use arlab::C64;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn lissajous(a: f64, b: f64, w: i64, samples: usize) -> PathSpec {
    let v = (0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            let r = 1.0 + a * (std::f64::consts::TAU * t).sin();
            C64::from_polar(
                r,
                std::f64::consts::TAU * (w as f64 * t + b * (3.0 * t).sin() * t * (1.0 - t)),
            )
        })
        .collect();
    PathSpec::from_values(v, 1e-12).unwrap()
}

proptest! {
    #[test]
    fn refinement_keeps_winding_and_closure(a in 0.0..0.5f64, b in -1.0..1.0f64, w in -3i64..=3) {
        let p = lissajous(a, b, w, 97);
        let q = p.refine();
        prop_assert_eq!(q.len(), 2 * p.len() - 1);
        prop_assert_eq!(p.is_closed(), q.is_closed());
        let z0 = C64::new(0.0, 0.0);
        prop_assert_eq!(p.winding_number(z0, 1e-9).unwrap(), w);
        prop_assert_eq!(q.winding_number(z0, 1e-9).unwrap(), w);
    }

    #[test]
    fn reverse_is_an_involution(a in 0.0..0.5f64, b in -1.0..1.0f64, w in -2i64..=2) {
        let p = lissajous(a, b, w, 33);
        prop_assert_eq!(p.reverse().reverse(), p);
    }

    #[test]
    fn concat_is_associative_on_values(x in point(), y in point(), z in point(), u in point()) {
        let p = PathSpec::segment(x, y, 5).unwrap();
        let q = PathSpec::segment(y, z, 9).unwrap();
        let r = PathSpec::segment(z, u, 3).unwrap();
        let left = PathSpec::concat(&PathSpec::concat(&p, &q, 0.0).unwrap(), &r, 0.0).unwrap();
        let right = PathSpec::concat(&p, &PathSpec::concat(&q, &r, 0.0).unwrap(), 0.0).unwrap();
        prop_assert_eq!(left.values(), right.values());
        prop_assert_eq!(left.len(), 15);
    }

    #[test]
    fn swap_arcs_keep_paths_apart(pts in prop::collection::vec(point(), 2..=6), i in 0usize..6, j in 0usize..6) {
        let n = pts.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let sep = (0..n)
            .flat_map(|a| (0..a).map(move |b| (a, b)))
            .map(|(a, b)| (pts[a] - pts[b]).norm())
            .fold(f64::INFINITY, f64::min);
        prop_assume!(sep > 0.05);
        if let Ok(b) = swap_arcs(&pts, i, j, 1.0, 65, 1e-6) {
            prop_assert!(b.min_pairwise_distance() > 1e-6);
            prop_assert_eq!(b.path(i).end(), pts[j]);
            prop_assert_eq!(b.path(j).end(), pts[i]);
            prop_assert_eq!(b.starts(), pts.clone());
        }
    }
}

#[test]
fn circle_winding_matches_turns() {
    for turns in -3..=3 {
        if turns == 0 {
            continue;
        }
        let p = PathSpec::circle_loop(C64::new(1.0, 1.0), 0.5, turns, 129).unwrap();
        assert_eq!(p.winding_number(C64::new(1.0, 1.0), 1e-9).unwrap(), turns);
        assert_eq!(p.winding_number(C64::new(3.0, 1.0), 1e-9).unwrap(), 0);
    }
}

#[test]
fn path_json_round_trip() {
    let p = PathSpec::circle_loop(C64::new(0.0, 0.0), 2.0, 1, 17).unwrap();
    let text = serde_json::to_string(&p).unwrap();
    assert!(text.starts_with("{\"closed\":true,\"samples\":[[0.0,"));
    let back: PathSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, p);
}
