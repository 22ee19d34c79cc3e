//! Fixed 800×800 SVG plots in the `(u, v)` chart, `u` rightward and `v`
//! upward.

use std::fmt::Write as _;

use hopfflow_core::geometry::{GridSpec, PointKind};
use serde::Serialize;

pub const VIEWPORT: f64 = 800.0;

/// `x = sx·u + ox`, `y = sy·v + oy` with `sy < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Affine {
    pub sx: f64,
    pub ox: f64,
    pub sy: f64,
    pub oy: f64,
}

impl Affine {
    pub fn for_grid(g: &GridSpec) -> Self {
        let sx = VIEWPORT / (g.u_max - g.u_min);
        let sy = -VIEWPORT / (g.v_max - g.v_min);
        Affine { sx, ox: -sx * g.u_min, sy, oy: -sy * g.v_max }
    }

    pub fn apply(&self, u: f64, v: f64) -> (f64, f64) {
        (self.sx * u + self.ox, self.sy * v + self.oy)
    }
}

pub struct Layer {
    pub label: String,
    pub color: &'static str,
    pub lines: Vec<Vec<(f64, f64)>>,
}

pub struct Scene {
    pub title: String,
    pub grid: GridSpec,
    /// Per grid node; `None` for masked nodes.
    pub background: Vec<Option<PointKind>>,
    pub layers: Vec<Layer>,
    pub banner: Option<String>,
}

fn fill(kind: PointKind) -> &'static str {
    match kind {
        PointKind::Positive => "#dce8f5",
        PointKind::Negative => "#f5dcdc",
        PointKind::Umbilic => "#111111",
        PointKind::QuasiUmbilic => "#f0a030",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[derive(Serialize)]
struct Metadata<'a> {
    frame: &'a str,
    viewport: [f64; 2],
    affine: Affine,
}

pub fn render(scene: &Scene) -> String {
    let g = &scene.grid;
    let map = Affine::for_grid(g);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#);
    let meta = Metadata { frame: "u rightward, v upward", viewport: [VIEWPORT, VIEWPORT], affine: map };
    let _ = writeln!(s, "<metadata>{}</metadata>", serde_json::to_string(&meta).expect("metadata"));
    let _ = writeln!(s, "<title>{}</title>", escape(&scene.title));
    let _ = writeln!(s, r##"<rect x="0" y="0" width="800" height="800" fill="#ffffff"/>"##);
    let (w, h) = (VIEWPORT / (g.nu - 1) as f64, VIEWPORT / (g.nv - 1) as f64);
    s.push_str("<g id=\"classification\" stroke=\"none\">\n");
    for (k, kind) in scene.background.iter().enumerate() {
        let Some(kind) = kind else { continue };
        let (u, v) = g.coords(k);
        let (x, y) = map.apply(u, v);
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            x - 0.5 * w,
            y - 0.5 * h,
            w,
            h,
            fill(*kind)
        );
    }
    s.push_str("</g>\n");
    for layer in &scene.layers {
        let _ =
            writeln!(s, r#"<g id="{}" fill="none" stroke="{}" stroke-width="1">"#, escape(&layer.label), layer.color);
        for line in &layer.lines {
            let pts = thin(line.iter().map(|&(u, v)| map.apply(u, v)));
            if pts.len() < 2 {
                continue;
            }
            s.push_str("<polyline points=\"");
            for (i, (x, y)) in pts.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{x:.2},{y:.2}");
            }
            s.push_str("\"/>\n");
        }
        s.push_str("</g>\n");
    }
    if let Some(b) = &scene.banner {
        let _ = writeln!(s, r##"<rect x="0" y="0" width="800" height="36" fill="#ffffff" fill-opacity="0.85"/>"##);
        let _ = writeln!(s, r#"<text x="12" y="24" font-family="sans-serif" font-size="16">{}</text>"#, escape(b));
    }
    s.push_str("</svg>\n");
    s
}

/// Drops points closer than half a pixel to the last kept one; the last
/// point is always kept.
fn thin(pts: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let pts: Vec<(f64, f64)> = pts.collect();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        match out.last() {
            Some(&q) if i + 1 < pts.len() && (p.0 - q.0).hypot(p.1 - q.1) < 0.5 => {}
            _ => out.push(p),
        }
    }
    out
}
