//! Minimal SVG rendering of a sweep: variational curves in red, truncation
//! points in blue.

use std::fmt::Write;

use crate::analysis::SweepTable;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;
const TICKS: usize = 6;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

pub fn render(table: &SweepTable) -> String {
    let finite = table
        .levels
        .iter()
        .flatten()
        .copied()
        .chain(table.truncation_points.iter().map(|p| p.w))
        .filter(|w| w.is_finite());
    let (mut y0, mut y1) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), w| {
        (lo.min(w), hi.max(w))
    });
    if !(y0 < y1) {
        (y0, y1) = (y0.min(0.0) - 1.0, y1.max(0.0) + 1.0);
    }
    let pad = 0.05 * (y1 - y0);
    let frame = Frame {
        x0: table.delta_grid[0],
        x1: *table
            .delta_grid
            .last()
            .expect("grid has at least two points"),
        y0: y0 - pad,
        y1: y1 + pad,
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    axes(&mut s, &frame);

    for row in &table.levels {
        for segment in row
            .iter()
            .zip(&table.delta_grid)
            .collect::<Vec<_>>()
            .split(|(w, _)| !w.is_finite())
            .filter(|seg| seg.len() > 1)
        {
            let pts: Vec<String> = segment
                .iter()
                .map(|(w, d)| format!("{:.2},{:.2}", frame.px(**d), frame.py(**w)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="red" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
        }
    }
    for p in &table.truncation_points {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="blue"/>"#,
            frame.px(p.delta_root),
            frame.py(p.w)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">γ = {}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        super::output::format_number(table.gamma)
    );
    s.push_str("</svg>\n");
    s
}

fn axes(s: &mut String, f: &Frame) {
    let (left, right) = (MARGIN, WIDTH - MARGIN);
    let (top, bottom) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        right - left,
        bottom - top
    );
    for k in 0..=TICKS {
        let t = k as f64 / TICKS as f64;
        let x = f.x0 + t * (f.x1 - f.x0);
        let y = f.y0 + t * (f.y1 - f.y0);
        let (px, py) = (f.px(x), f.py(y));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom - 5.0,
            bottom + 16.0,
            tick_label(x)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{left}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left + 5.0,
            left - 6.0,
            py + 4.0,
            tick_label(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="16">δ</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" font-size="16" transform="rotate(-90 16 {:.2})">W</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
}

fn tick_label(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    super::output::format_number(if r == 0.0 { 0.0 } else { r })
}
