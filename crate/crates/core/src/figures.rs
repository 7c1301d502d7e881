//! SVG figures computed from engine runs. Output is a pure function of the
//! figure name: fixed 800×600 canvas, fixed palette, three-decimal coordinates.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::monodromy::{coefficient_paths_from_root_paths, continue_kth_root, kth_root_branch};
use crate::paths::{PathBundle, PathSpec};
use crate::perm::Permutation;
use crate::radical::{coeff, continue_expr, int, root, BranchAssignment, RadicalExpr};
use crate::witness::{
    prepare_loop, realize_permutation, Construction, StageGeometry, WitnessConfig,
};
use crate::{Error, Tolerances, C64};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;

const PALETTE: [&str; 6] = [
    "#1f9bcf", "#d62728", "#ff8c00", "#2ca02c", "#8c564b", "#9467bd",
];
const INK: &str = "#222222";
const GRID: &str = "#cccccc";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureName {
    /// Transposition `(1 2)` and cycle `(1 2 3)` on three roots.
    Fig1,
    /// Square-root-like branches of `ζ⁵ = z` along a non-winding and a winding loop.
    Fig2,
    /// Root swap `(1 2)` of a quadratic and the loops it induces on `c₀, c₁`.
    Fig4,
    /// `[(1 2),(2 3)]` acting on a coefficient, an `F` and `√F`.
    Fig5,
}

impl FigureName {
    pub const ALL: [FigureName; 4] = [
        FigureName::Fig1,
        FigureName::Fig2,
        FigureName::Fig4,
        FigureName::Fig5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureName::Fig1 => "fig1",
            FigureName::Fig2 => "fig2",
            FigureName::Fig4 => "fig4",
            FigureName::Fig5 => "fig5",
        }
    }
}

impl FromStr for FigureName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FigureName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown figure '{s}' (expected fig1, fig2, fig4 or fig5)"))
    }
}

struct Curve {
    points: Vec<C64>,
    color: &'static str,
    arrow: bool,
    dashed: bool,
}

struct Panel {
    title: String,
    curves: Vec<Curve>,
    dots: Vec<(C64, String)>,
}

impl Panel {
    fn new(title: impl Into<String>) -> Self {
        Panel {
            title: title.into(),
            curves: Vec::new(),
            dots: Vec::new(),
        }
    }

    fn curve(&mut self, path: &PathSpec, color: &'static str, arrow: bool) {
        self.curves.push(Curve {
            points: path.values().to_vec(),
            color,
            arrow,
            dashed: false,
        });
    }

    fn dashed(&mut self, path: &PathSpec, color: &'static str) {
        self.curve(path, color, true);
        if let Some(c) = self.curves.last_mut() {
            c.dashed = true;
        }
    }

    fn bundle(&mut self, b: &PathBundle, arrow: bool) {
        for (i, p) in b.paths().iter().enumerate() {
            self.curve(p, PALETTE[i % PALETTE.len()], arrow);
        }
    }

    /// Square data window with a 10 % margin, never smaller than 0.5 across.
    fn window(&self) -> (C64, f64) {
        let pts = self
            .curves
            .iter()
            .flat_map(|c| c.points.iter())
            .chain(self.dots.iter().map(|d| &d.0));
        let (mut lo, mut hi) = (C64::new(f64::MAX, f64::MAX), C64::new(f64::MIN, f64::MIN));
        for z in pts {
            lo = C64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = C64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let center = 0.5 * (lo + hi);
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(0.5) * 1.1;
        (center, span)
    }
}

fn render(title: &str, panels: &[Panel]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="400" y="30" text-anchor="middle" font-size="18" fill="{INK}">{}</text>"#,
        escape(title)
    );
    let n = panels.len() as f64;
    let gap = 20.0;
    let side = ((WIDTH - gap * (n + 1.0)) / n).min(HEIGHT - 120.0);
    let top = 70.0 + (HEIGHT - 120.0 - side) / 2.0;
    for (k, p) in panels.iter().enumerate() {
        let left = gap + k as f64 * (side + gap) + (WIDTH - n * side - (n + 1.0) * gap) / 2.0;
        draw_panel(&mut s, p, left, top, side);
    }
    s.push_str("</svg>\n");
    s
}

fn draw_panel(s: &mut String, p: &Panel, left: f64, top: f64, side: f64) {
    let (center, span) = p.window();
    let map = |z: C64| {
        (
            left + side * (0.5 + (z.re - center.re) / span),
            top + side * (0.5 - (z.im - center.im) / span),
        )
    };
    let _ = writeln!(
        s,
        r#"<rect x="{left:.3}" y="{top:.3}" width="{side:.3}" height="{side:.3}" fill="none" stroke="{GRID}"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle" font-size="14" fill="{INK}">{}</text>"#,
        left + side / 2.0,
        top - 8.0,
        escape(&p.title)
    );
    // axes through the origin when it is in view
    let (ox, oy) = map(C64::new(0.0, 0.0));
    if (left..=left + side).contains(&ox) {
        let _ = writeln!(
            s,
            r#"<line x1="{ox:.3}" y1="{top:.3}" x2="{ox:.3}" y2="{:.3}" stroke="{GRID}"/>"#,
            top + side
        );
    }
    if (top..=top + side).contains(&oy) {
        let _ = writeln!(
            s,
            r#"<line x1="{left:.3}" y1="{oy:.3}" x2="{:.3}" y2="{oy:.3}" stroke="{GRID}"/>"#,
            left + side
        );
    }
    for c in &p.curves {
        let mut d = String::new();
        for (i, z) in c.points.iter().enumerate() {
            let (x, y) = map(*z);
            let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        let dash = if c.dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<path d="{d}" fill="none" stroke="{}" stroke-width="2"{dash}/>"#,
            c.color
        );
        if c.arrow && c.points.len() >= 3 {
            let m = c.points.len() / 2;
            let (x0, y0) = map(c.points[m - 1]);
            let (x1, y1) = map(c.points[m + 1]);
            arrowhead(s, map(c.points[m]), (x1 - x0, y1 - y0), c.color);
        }
    }
    for (z, label) in &p.dots {
        let (x, y) = map(*z);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="{INK}"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" font-size="12" fill="{INK}">{}</text>"#,
            x + 6.0,
            y - 6.0,
            escape(label)
        );
    }
}

fn arrowhead(s: &mut String, (x, y): (f64, f64), (dx, dy): (f64, f64), color: &str) {
    let len = dx.hypot(dy);
    if len == 0.0 {
        return;
    }
    let (ux, uy) = (dx / len, dy / len);
    let size = 9.0;
    let tip = (x + ux * size / 2.0, y + uy * size / 2.0);
    let base = (x - ux * size / 2.0, y - uy * size / 2.0);
    let a = (base.0 - uy * size / 2.0, base.1 + ux * size / 2.0);
    let b = (base.0 + uy * size / 2.0, base.1 - ux * size / 2.0);
    let _ = writeln!(
        s,
        r#"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="{color}"/>"#,
        tip.0, tip.1, a.0, a.1, b.0, b.1
    );
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn unity(n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| C64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect()
}

fn label_dots(panel: &mut Panel, pos: &[C64], prefix: &str) {
    for (i, z) in pos.iter().enumerate() {
        panel.dots.push((*z, format!("{prefix}{}", i + 1)));
    }
}

fn fig1(tol: &Tolerances) -> Result<String, Error> {
    let pos = unity(3);
    let g = StageGeometry::default();
    let mut panels = Vec::new();
    for (text, title) in [
        ("(1 2)", "transposition (1 2)"),
        ("(1 2 3)", "cycle (1 2 3)"),
    ] {
        let perm = Permutation::parse(text, 3)?;
        let r = realize_permutation(&perm, &pos, &g, tol)?;
        let mut p = Panel::new(title);
        p.bundle(&r.root_paths(tol.closure)?, true);
        label_dots(&mut p, &pos, "s");
        panels.push(p);
    }
    Ok(render("Paths permuting the solutions", &panels))
}

fn fig2(tol: &Tolerances) -> Result<String, Error> {
    let k = 5;
    let samples = 257;
    let loops = [
        (C64::new(1.6, 0.0), "roots along the blue loop"),
        (C64::new(0.0, 0.0), "roots along the red loop"),
    ];
    let mut z_panel = Panel::new("z");
    let mut panels = Vec::new();
    for (i, (center, title)) in loops.iter().enumerate() {
        let gamma = PathSpec::circle_loop(*center, 1.0, 1, samples)?;
        let color = PALETTE[i];
        z_panel.curve(&gamma, color, true);
        let mut p = Panel::new(*title);
        for l in 0..k {
            let b0 = kth_root_branch(gamma.start(), k, l);
            p.curve(&continue_kth_root(&gamma, k, b0, tol)?, color, true);
        }
        panels.push(p);
    }
    z_panel.dots.push((C64::new(0.0, 0.0), "0".into()));
    panels.insert(0, z_panel);
    Ok(render("Fifth roots of z along two loops", &panels))
}

/// Swap of `±1` along `m + h e^{iπt}` and `m − h e^{iπt²}`: the two roots
/// never meet and, unlike a symmetric swap, their sum moves.
fn asymmetric_swap(samples: usize) -> Result<PathBundle, Error> {
    let (m, h) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let ts: Vec<f64> = (0..samples)
        .map(|i| i as f64 / (samples - 1) as f64)
        .collect();
    let arc = |f: &dyn Fn(f64) -> f64, sign: f64| -> Result<PathSpec, Error> {
        let mut v: Vec<C64> = ts
            .iter()
            .map(|&t| m + sign * h * C64::from_polar(1.0, std::f64::consts::PI * f(t)))
            .collect();
        v[samples - 1] = m - sign * h;
        Ok(PathSpec::from_values(v, 0.0)?)
    };
    Ok(PathBundle::new(vec![
        arc(&|t| t, 1.0)?,
        arc(&|t| t * t, -1.0)?,
    ])?)
}

fn fig4(tol: &Tolerances) -> Result<String, Error> {
    let roots = asymmetric_swap(257)?;
    let coeffs = coefficient_paths_from_root_paths(&roots, tol.closure)?;
    let mut a = Panel::new("solutions s1, s2");
    a.bundle(&roots, true);
    label_dots(&mut a, &roots.starts(), "s");
    let mut b = Panel::new("c0");
    b.curve(coeffs.path(0), PALETTE[2], true);
    b.dots.push((coeffs.path(0).start(), "start".into()));
    let mut c = Panel::new("c1");
    c.curve(coeffs.path(1), PALETTE[3], true);
    c.dots.push((coeffs.path(1).start(), "start".into()));
    Ok(render(
        "The swap (1 2) induces loops on the coefficients",
        &[a, b, c],
    ))
}

/// `c₂²c₁² − 4c₁³ − 4c₂³c₀ − 27c₀² + 18c₂c₁c₀`; its square root is
/// `±∏(sᵢ − sⱼ)` and changes sign under every transposition.
fn cubic_discriminant() -> RadicalExpr {
    let (c0, c1, c2) = (coeff(0), coeff(1), coeff(2));
    c2.clone() * c2.clone() * c1.clone() * c1.clone()
        - int(4) * c1.clone() * c1.clone() * c1.clone()
        - int(4) * c2.clone() * c2.clone() * c2.clone() * c0.clone()
        - int(27) * c0.clone() * c0.clone()
        + int(18) * c2 * c1 * c0
}

/// Splits `p` at stage boundaries of `stages` equal stages.
fn stage_pieces(p: &PathSpec, stages: usize) -> Vec<PathSpec> {
    let per = (p.len() - 1) / stages;
    (0..stages)
        .map(|s| {
            let v = p.values()[s * per..=(s + 1) * per].to_vec();
            PathSpec::from_values(v, 0.0).expect("at least two samples")
        })
        .collect()
}

/// Generic cubic start `z³ + z − 1`: the roots of `z³ − 1` make all four
/// stages trace one curve.
fn fig5_config() -> WitnessConfig {
    let mut config = WitnessConfig::new(3, 1);
    config.construction = Construction::TranspositionCommutator;
    config.start_coefficients = Some(vec![
        C64::new(-1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
    ]);
    config.geometry.samples = 257;
    config
}

fn fig5(tol: &Tolerances) -> Result<String, Error> {
    let prepared = prepare_loop(&fig5_config())?;
    let lp = &prepared.coefficient_loop;
    let stages = prepared.realization.stages.len();
    let f = cubic_discriminant();
    let fv = continue_expr(&f, lp, &BranchAssignment(vec![]), tol)?;
    let sv = continue_expr(&root(2, f), lp, &BranchAssignment(vec![0]), tol)?;
    let mut panels = Vec::new();
    for (title, path) in [
        ("coefficient c0", lp.path(0)),
        ("F = discriminant", &fv.values),
        ("√F", &sv.values),
    ] {
        let mut p = Panel::new(title);
        // inverse stages retrace the forward ones: same colour, dashed
        for (i, piece) in stage_pieces(path, stages).iter().enumerate() {
            let color = PALETTE[i % 2];
            if i < 2 {
                p.curve(piece, color, true);
            } else {
                p.dashed(piece, color);
            }
        }
        p.dots.push((path.start(), "start".into()));
        panels.push(p);
    }
    Ok(render(
        "The commutator [(1 2),(2 3)] on c, F and √F",
        &panels,
    ))
}

/// SVG text of a figure.
pub fn figure(name: FigureName) -> Result<String, Error> {
    let tol = Tolerances::default();
    match name {
        FigureName::Fig1 => fig1(&tol),
        FigureName::Fig2 => fig2(&tol),
        FigureName::Fig4 => fig4(&tol),
        FigureName::Fig5 => fig5(&tol),
    }
}

/// SVG of root trajectories over a coefficient loop, as for a trace.
pub fn trace_figure(coefficients: &PathBundle, roots: &PathBundle) -> String {
    let mut a = Panel::new("coefficients");
    a.bundle(coefficients, true);
    let mut b = Panel::new("roots");
    b.bundle(roots, true);
    label_dots(&mut b, &roots.starts(), "s");
    render("Root trajectories", &[a, b])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in FigureName::ALL {
            assert_eq!(f.as_str().parse::<FigureName>().unwrap(), f);
        }
        assert!("fig3".parse::<FigureName>().is_err());
    }

    #[test]
    fn all_figures_render_deterministically() {
        for f in FigureName::ALL {
            let a = figure(f).unwrap();
            assert!(a.starts_with("<svg"));
            assert!(a.contains(r#"width="800" height="600""#));
            assert!(a.contains("<polygon"));
            assert_eq!(a, figure(f).unwrap());
        }
    }

    #[test]
    fn sqrt_f_pieces_are_unclosed_but_chain_closes() {
        let tol = Tolerances::default();
        let prepared = prepare_loop(&fig5_config()).unwrap();
        let f = cubic_discriminant();
        let sv = continue_expr(
            &root(2, f),
            &prepared.coefficient_loop,
            &BranchAssignment(vec![0]),
            &tol,
        )
        .unwrap();
        assert!(sv.returns_to_start);
        let pieces = stage_pieces(&sv.values, 4);
        for p in &pieces {
            assert!((p.end() + p.start()).norm() < 1e-9 * (1.0 + p.start().norm()));
        }
    }
}
