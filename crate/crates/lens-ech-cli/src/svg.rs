//! SVG pictures of a domain in its cone with optional decorated paths.

use std::fmt::Write;

use lens_ech::complex::{DecoratedPath, Label};
use lens_ech::rational::{format_rational, frac, int};
use lens_ech::{DomainBoundary, IntVec2, RatVec2, Rational};

const CANVAS: i64 = 480;
const MARGIN: i64 = 40;

/// Maps model coordinates onto the canvas with the y axis pointing up.
struct View {
    scale: Rational,
    width: Rational,
    height: Rational,
}

impl View {
    fn fit(extent_x: &Rational, extent_y: &Rational) -> Self {
        let one = int(1);
        let (ex, ey) = (extent_x.max(&one).clone(), extent_y.max(&one).clone());
        let scale = int(CANVAS - 2 * MARGIN) / ex.clone().max(ey.clone());
        let width = &ex * &scale + int(2 * MARGIN);
        let height = &ey * &scale + int(2 * MARGIN);
        View { scale, width, height }
    }

    fn xy(&self, p: &RatVec2) -> (String, String) {
        let x = int(MARGIN) + &p.x * &self.scale;
        let y = &self.height - int(MARGIN) - &p.y * &self.scale;
        (decimal(&x), decimal(&y))
    }

    fn point(&self, p: &RatVec2) -> String {
        let (x, y) = self.xy(p);
        format!("{x},{y}")
    }
}

/// `r` rounded to hundredths and written in decimal.
fn decimal(r: &Rational) -> String {
    let hundredths = (r * int(100)).round().to_integer();
    let sign = if hundredths < 0.into() { "-" } else { "" };
    let magnitude = if hundredths < 0.into() { -hundredths } else { hundredths };
    let text = format!("{magnitude:0>3}");
    let (whole, fraction) = text.split_at(text.len() - 2);
    format!("{sign}{whole}.{fraction}")
}

fn polyline(view: &View, points: &[RatVec2]) -> String {
    points.iter().map(|p| view.point(p)).collect::<Vec<_>>().join(" ")
}

fn lattice(v: IntVec2) -> RatVec2 {
    v.to_rat()
}

/// The cone rays, `∂⁺Ω` and each path, with `h` edges dashed.
pub fn render(domain: &DomainBoundary, paths: &[DecoratedPath]) -> String {
    let frame = domain.frame();
    let mut max_x = Rational::from_integer(0.into());
    let mut max_y = max_x.clone();
    let points = domain.vertices().iter().cloned().chain(paths.iter().flat_map(|p| p.path().vertices().into_iter().map(lattice)));
    for v in points {
        max_x = max_x.max(v.x);
        max_y = max_y.max(v.y);
    }
    let (extent_x, extent_y) = (max_x * frac(23, 20), max_y * frac(23, 20));
    let view = View::fit(&extent_x, &extent_y);
    let ray = frame.ray().to_rat();
    let ray_t = if frame.m() == 0 {
        &extent_x / &ray.x
    } else {
        (&extent_x / &ray.x).min(&extent_y / &ray.y)
    };
    let (width, height) = (decimal(&view.width), decimal(&view.height));

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#,
    )
    .unwrap();
    let vertices: Vec<String> = domain.vertices().iter().map(point_label).collect();
    writeln!(out, "  <title>domain in M({},{}) with boundary {}</title>", frame.n(), frame.m(), vertices.join(" ")).unwrap();
    writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#).unwrap();
    let origin = RatVec2::from_ints(0, 0);
    let axis_top = RatVec2::new(Rational::from_integer(0.into()), extent_y.clone());
    writeln!(
        out,
        r##"  <polyline id="cone" points="{}" fill="none" stroke="#888888" stroke-width="1"/>"##,
        polyline(&view, &[axis_top, origin.clone(), ray.scale(&ray_t)])
    )
    .unwrap();
    let mut region = vec![origin];
    region.extend(domain.vertices().iter().cloned());
    writeln!(
        out,
        r##"  <polygon id="domain" points="{}" fill="#dde8f5" stroke="#1f4e8c" stroke-width="2"/>"##,
        polyline(&view, &region)
    )
    .unwrap();
    for (i, p) in paths.iter().enumerate() {
        writeln!(out, r#"  <g id="path-{i}">"#).unwrap();
        writeln!(out, "    <title>{p}</title>").unwrap();
        for ((start, edge), label) in p.path().positioned_edges().iter().zip(p.labels()) {
            let (x1, y1) = view.xy(&lattice(*start));
            let (x2, y2) = view.xy(&lattice(*start + edge.vector()));
            let style = match label {
                Label::E => r##"stroke="#b22222" stroke-width="2.5""##,
                Label::H => r##"stroke="#2e8b57" stroke-width="2.5" stroke-dasharray="6,4""##,
            };
            writeln!(out, r#"    <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>"#).unwrap();
        }
        for v in p.path().vertices() {
            let (cx, cy) = view.xy(&lattice(v));
            writeln!(out, r#"    <circle cx="{cx}" cy="{cy}" r="3"/>"#).unwrap();
        }
        writeln!(out, "  </g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

fn point_label(v: &RatVec2) -> String {
    format!("({},{})", format_rational(&v.x), format_rational(&v.y))
}
