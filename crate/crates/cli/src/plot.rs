//! Minimal SVG line plots: one polyline per degree against `t`.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

pub struct Series {
    pub label: String,
    /// `(t, value)` with `t` strictly increasing.
    pub points: Vec<(f64, f64)>,
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

pub fn svg(title: &str, series: &[Series]) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = span(all().map(|p| p.0));
    let (y0, y1) = span(all().map(|p| p.1).filter(|v| v.is_finite()));
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    );
    let (left, right, bottom, top) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" stroke="black" fill="none"/>"#
    );
    let label = |out: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(&mut out, left, bottom + 16.0, "middle", format!("{x0:.4}"));
    label(&mut out, right, bottom + 16.0, "middle", format!("{x1:.4}"));
    label(&mut out, (left + right) / 2.0, bottom + 32.0, "middle", "t".into());
    label(&mut out, left - 4.0, bottom, "end", format!("{y0:.4e}"));
    label(&mut out, left - 4.0, top + 4.0, "end", format!("{y1:.4e}"));
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|p| p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            pts.join(" "),
            s.label
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_coordinates_follow_t() {
        let s = Series {
            label: "n = 1".into(),
            points: vec![(0.5, 1.0), (1.0, 2.0), (2.0, 1.5)],
        };
        let doc = svg("alpha", &[s]);
        let line = doc.lines().find(|l| l.starts_with("<polyline")).unwrap();
        let pts = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        let xs: Vec<f64> = pts.split(' ').map(|p| p.split(',').next().unwrap().parse().unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(xs[0], MARGIN);
    }
}
