//! Minimal standalone SVG line plot of a sweep, one curve per `q`.

use std::fmt::Write;

use crate::sweep::ObservablePoint;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

/// Solid, dashed, dotted, dot-dashed, then repeating.
const DASHES: [&str; 4] = ["", "8 4", "2 3", "8 3 2 3"];

/// Groups rows by `q`, keeping the order in which each `q` first appears.
fn curves(points: &[ObservablePoint]) -> Vec<(f64, Vec<(f64, f64)>)> {
    let mut out: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for p in points {
        match out.iter_mut().find(|(q, _)| *q == p.q) {
            Some((_, c)) => c.push((p.t, p.value)),
            None => out.push((p.q, vec![(p.t, p.value)])),
        }
    }
    out
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-300 {
        let pad = lo.abs().max(1.0) * 0.5;
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Renders `points` as an SVG document with axis labels `x_label`, `y_label`.
pub fn render(points: &[ObservablePoint], x_label: &str, y_label: &str) -> String {
    let curves = curves(points);
    let (x0, x1) = extent(points.iter().map(|p| p.t));
    let (y0, y1) = extent(points.iter().map(|p| p.value));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let py = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (xp, yp) = (px(xv), py(yv));
        let bottom = MARGIN_TOP + plot_h;
        let _ = writeln!(
            s,
            r#"<line x1="{xp:.2}" y1="{bottom}" x2="{xp:.2}" y2="{:.2}" stroke="black"/><text x="{xp:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom - 5.0,
            bottom + 16.0,
            tick_label(xv)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{MARGIN_LEFT}" y1="{yp:.2}" x2="{:.2}" y2="{yp:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT + 5.0,
            MARGIN_LEFT - 6.0,
            yp + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    );

    for (i, (q, pts)) in curves.iter().enumerate() {
        let path: Vec<String> = pts
            .iter()
            .filter(|(_, y)| y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let dash = DASHES[i % DASHES.len()];
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="black" stroke-width="1.5"{dash_attr} points="{}"/>"#,
            path.join(" ")
        );
        let ly = MARGIN_TOP + 16.0 + 16.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT - 110.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="black" stroke-width="1.5"{dash_attr}/><text x="{:.2}" y="{:.2}">q = {q}</text>"#,
            lx + 30.0,
            lx + 36.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(q: f64, t: f64, value: f64) -> ObservablePoint {
        ObservablePoint {
            q,
            t,
            value,
            oracle_value: None,
            oracle_delta: None,
        }
    }

    #[test]
    fn one_polyline_per_q() {
        let pts = [
            pt(1.1, 0.0, 1.0),
            pt(1.1, 1.0, 0.5),
            pt(1.2, 0.0, 1.0),
            pt(1.2, 1.0, 0.4),
        ];
        let svg = render(&pts, "t", "R<q>");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("stroke-dasharray=\"8 4\""));
        assert!(svg.contains("R&lt;q&gt;"));
    }

    #[test]
    fn flat_data_does_not_divide_by_zero() {
        let svg = render(&[pt(2.0, 0.0, 3.0), pt(2.0, 1.0, 3.0)], "t", "v");
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
