use std::f64::consts::PI;
use std::fmt::Write;

use calkin_core::spectra::SpectrumRegion;
use calkin_core::Complex64;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const DISK_SAMPLES: usize = 720;

struct Frame {
    r: f64,
}

impl Frame {
    fn x(&self, re: f64) -> f64 {
        SIZE / 2.0 + re / self.r * (SIZE / 2.0 - MARGIN)
    }

    fn y(&self, im: f64) -> f64 {
        SIZE / 2.0 - im / self.r * (SIZE / 2.0 - MARGIN)
    }

    fn point(&self, z: Complex64) -> String {
        format!("{:.2},{:.2}", self.x(z.re), self.y(z.im))
    }
}

/// Half-width of the plotted square.
pub fn extent(region: &SpectrumRegion) -> f64 {
    let r = region.radius();
    if r > 1e-9 {
        1.15 * r
    } else {
        1.0
    }
}

/// The region on an 800×800 canvas: membership shading on a `grid × grid`
/// lattice, filled disk images, stroked curves and marked points.
pub fn render(region: &SpectrumRegion, grid: usize, banner: Option<&str>) -> String {
    let f = Frame { r: extent(region) };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);

    if grid > 0 {
        let cell = 2.0 * f.r / grid as f64;
        let _ = writeln!(s, r##"<g id="membership" fill="#c6dbef" stroke="none">"##);
        for j in 0..grid {
            for i in 0..grid {
                let re = -f.r + (i as f64 + 0.5) * cell;
                let im = -f.r + (j as f64 + 0.5) * cell;
                if region.contains(Complex64::new(re, im)) {
                    let (x0, y0) = (f.x(re - cell / 2.0), f.y(im + cell / 2.0));
                    let w = f.x(re + cell / 2.0) - x0;
                    let _ = writeln!(s, r#"<rect x="{x0:.2}" y="{y0:.2}" width="{w:.2}" height="{w:.2}"/>"#);
                }
            }
        }
        let _ = writeln!(s, "</g>");
    }

    let _ = writeln!(s, r##"<g id="axes" stroke="#999999" stroke-width="1">"##);
    let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{c}" x2="{e}" y2="{c}"/>"#, c = SIZE / 2.0, e = SIZE - MARGIN);
    let _ = writeln!(s, r#"<line x1="{c}" y1="{MARGIN}" x2="{c}" y2="{e}"/>"#, c = SIZE / 2.0, e = SIZE - MARGIN);
    let _ = writeln!(s, "</g>");
    let r = f.r;
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{:.2}">{:.4}</text>"#, SIZE / 2.0 + 16.0, -r);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.4}</text>"#, SIZE - MARGIN, SIZE / 2.0 + 16.0, r);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{:.4}i</text>"#, SIZE / 2.0 + 6.0, MARGIN + 4.0, r);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{:.4}i</text>"#, SIZE / 2.0 + 6.0, SIZE - MARGIN, -r);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">Re λ</text>"#, SIZE - MARGIN + 4.0, SIZE / 2.0 - 4.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">Im λ</text>"#, SIZE / 2.0 + 6.0, MARGIN - 12.0);

    for p in &region.polynomial_disks {
        let pts: Vec<String> = (0..DISK_SAMPLES)
            .map(|k| f.point(p.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / DISK_SAMPLES as f64))))
            .collect();
        let _ = writeln!(
            s,
            r##"<path d="M{}Z" fill="#6baed6" fill-opacity="0.6" fill-rule="nonzero" stroke="#2171b5" stroke-width="1.5"/>"##,
            pts.join(" L")
        );
    }
    for c in &region.curves {
        let pts: Vec<String> = c.samples().iter().map(|&(_, z)| f.point(z)).collect();
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#08306b" stroke-width="2"><title>{}</title></polyline>"##,
            pts.join(" "),
            c.label
        );
    }
    for z in &region.points {
        let _ = writeln!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#08306b"/>"##, f.x(z.re), f.y(z.im));
    }
    if let Some(text) = banner {
        let _ = writeln!(s, r##"<rect x="0" y="0" width="{SIZE}" height="24" fill="#fdd0a2"/>"##);
        let _ = writeln!(s, r#"<text x="8" y="16">{text}</text>"#);
    }
    s.push_str("</svg>\n");
    s
}
