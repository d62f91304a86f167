//! Minimal log-y line plot of a sweep.

use std::fmt::Write;

use super::sweep::SweepRow;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    dash: Option<&'a str>,
    markers: bool,
    values: Vec<Option<f64>>,
}

/// Renders the curve columns against the sweep value; non-positive values
/// are skipped (they have no place on a log axis).
pub fn render(rows: &[SweepRow], x_label: &str) -> String {
    let series = [
        Series {
            label: "exact",
            color: "#1f77b4",
            dash: None,
            markers: false,
            values: rows.iter().map(|r| Some(r.op_exact)).collect(),
        },
        Series {
            label: "asymptotic",
            color: "#d62728",
            dash: Some("6 4"),
            markers: false,
            values: rows.iter().map(|r| r.op_asymptotic).collect(),
        },
        Series {
            label: "floor",
            color: "#2ca02c",
            dash: Some("2 3"),
            markers: false,
            values: rows.iter().map(|r| r.op_floor).collect(),
        },
        Series {
            label: "Monte Carlo",
            color: "#000000",
            dash: None,
            markers: true,
            values: rows.iter().map(|r| r.op_mc).collect(),
        },
    ];
    let xs: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
    let (x_min, x_max) = bounds(xs.iter().copied()).unwrap_or((0.0, 1.0));
    let (x_min, x_max) = if x_min == x_max { (x_min - 0.5, x_max + 0.5) } else { (x_min, x_max) };
    let positive = series.iter().flat_map(|s| s.values.iter().flatten().copied()).filter(|v| *v > 0.0 && v.is_finite());
    let (lo, hi) = bounds(positive.map(f64::log10)).unwrap_or((-1.0, 0.0));
    let (y_min, y_max) = (lo.floor(), hi.ceil().max(lo.floor() + 1.0));

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let py = |ly: f64| TOP + (y_max - ly) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ =
        writeln!(svg, r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#);
    let decades = (y_max - y_min) as i32;
    let stride = (decades / 12 + 1).max(1);
    for d in (0..=decades).step_by(stride as usize) {
        let ly = y_min + d as f64;
        let y = py(ly);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{ly}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for i in 0..=5 {
        let x = x_min + (x_max - x_min) * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(x),
            TOP + plot_h + 18.0,
            trim(x)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{x_label}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">outage probability</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (k, s) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = xs
            .iter()
            .zip(&s.values)
            .filter_map(|(&x, v)| v.filter(|v| *v > 0.0 && v.is_finite()).map(|v| (px(x), py(v.log10()))))
            .collect();
        if pts.is_empty() {
            continue;
        }
        if s.markers {
            for (x, y) in &pts {
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="none" stroke="{}"/>"#, s.color);
            }
        } else {
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let dash = s.dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                path.join(" "),
                s.color
            );
        }
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="1.5"{}/><text x="{}" y="{}">{}</text>"#,
            lx + 25.0,
            s.color,
            s.dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default(),
            lx + 32.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(it: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    it.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((a, b)) => Some((a.min(v), b.max(v))),
    })
}

fn trim(x: f64) -> String {
    let s = format!("{x:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
