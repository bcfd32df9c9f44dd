//! Static SVG plots of curves in the parameter plane.

use std::fmt::Write as _;

use shrinker_core::arrangement::Arrangement;
use shrinker_core::metrics::{ParameterDomain, PointUV};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN: f64 = 48.0;

/// One curve with its arrangement, if it has been built.
pub struct Layer<'a> {
    pub points: &'a [PointUV],
    pub closed: bool,
    pub arrangement: Option<&'a Arrangement>,
}

struct View {
    u0: f64,
    u1: f64,
    v0: f64,
    v1: f64,
}

impl View {
    fn x(&self, u: f64) -> f64 {
        MARGIN + (u - self.u0) / (self.u1 - self.u0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.v0) / (self.v1 - self.v0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn path(&self, pts: &[PointUV], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.2},{:.2} ", self.x(p.u), self.y(p.v));
        }
        if closed {
            d.push('Z');
        }
        d
    }
}

fn view_for(domain: ParameterDomain, layers: &[Layer<'_>]) -> View {
    let (mut u0, mut u1, mut v0, mut v1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in layers.iter().flat_map(|l| l.points) {
        u0 = u0.min(p.u);
        u1 = u1.max(p.u);
        v0 = v0.min(p.v);
        v1 = v1.max(p.v);
    }
    if u0 > u1 {
        (u0, u1, v0, v1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let (su, sv) = ((u1 - u0).max(1e-9), (v1 - v0).max(1e-9));
    // pull in nearby domain edges so the strip is visible
    if domain.u_min.is_finite() && u0 - domain.u_min < su {
        u0 = u0.min(domain.u_min);
    }
    if domain.u_max.is_finite() && domain.u_max - u1 < su {
        u1 = u1.max(domain.u_max);
    }
    if domain.v_min.is_finite() && v0 - domain.v_min < sv {
        v0 = v0.min(domain.v_min);
    }
    if domain.v_max.is_finite() && domain.v_max - v1 < sv {
        v1 = v1.max(domain.v_max);
    }
    let (pu, pv) = (0.05 * (u1 - u0).max(1e-9), 0.05 * (v1 - v0).max(1e-9));
    View {
        u0: u0 - pu,
        u1: u1 + pu,
        v0: v0 - pv,
        v1: v1 + pv,
    }
}

/// Renders the curves over the parameter domain: domain edges dashed,
/// bounded faces shaded, self-intersections marked.
pub fn render(title: &str, axes: (&str, &str), domain: ParameterDomain, layers: &[Layer<'_>]) -> String {
    let view = view_for(domain, layers);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{MARGIN}" y="24" font-size="14">{}</text>"#, escape(title));

    let dashed = r##"stroke="#888" stroke-dasharray="6 4" stroke-width="1""##;
    for u in [domain.u_min, domain.u_max] {
        if u.is_finite() && u >= view.u0 && u <= view.u1 {
            let x = view.x(u);
            let _ = writeln!(svg, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" {dashed}/>"#, view.y(view.v0), view.y(view.v1));
        }
    }
    for v in [domain.v_min, domain.v_max] {
        if v.is_finite() && v >= view.v0 && v <= view.v1 {
            let y = view.y(v);
            let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" {dashed}/>"#, view.x(view.u0), view.x(view.u1));
        }
    }

    for layer in layers {
        if let Some(arr) = layer.arrangement {
            for (i, face) in arr.faces.iter().enumerate() {
                let hue = (i * 137) % 360;
                let _ = writeln!(
                    svg,
                    r#"<path d="{}" fill="hsl({hue},70%,60%)" fill-opacity="0.35" stroke="none"/>"#,
                    view.path(&face.polygon, true)
                );
            }
        }
    }
    for layer in layers {
        let _ = writeln!(
            svg,
            r##"<path d="{}" fill="none" stroke="#1f3a93" stroke-width="1.5"/>"##,
            view.path(layer.points, layer.closed)
        );
        if let Some(arr) = layer.arrangement {
            for c in &arr.vertices {
                let _ = writeln!(
                    svg,
                    r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#c0392b"/>"##,
                    view.x(c.point.u),
                    view.y(c.point.v)
                );
            }
        }
    }

    let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{} ∈ [{:.3}, {:.3}]</text>"#, WIDTH / 2.0, HEIGHT - 12.0, escape(axes.0), view.u0, view.u1);
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle">{} ∈ [{:.3}, {:.3}]</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(axes.1),
        view.v0,
        view.v1
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="none" stroke="#ccc"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
