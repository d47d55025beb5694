//! Minimal deterministic SVG rendering for trajectories and heatmaps.
//!
//! Output is plain SVG 1.1 with no external fonts or scripts. Layout
//! coordinates are formatted to two decimals so the byte stream is stable
//! across platforms.

use std::fmt::Write as _;

use super::csvio::{HeatmapData, TrajectoryData};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 48.0;

/// Two-decimal layout coordinate.
fn c(v: f64) -> String {
    format!("{v:.2}")
}

/// Short human-readable tick label.
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let a = v.abs();
    if (1e-4..1e6).contains(&a) {
        let s = format!("{v:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Tick positions at a "nice" spacing (1, 2, or 5 times a power of ten)
/// covering `[lo, hi]` with roughly `n` intervals.
fn nice_ticks(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return vec![lo];
    }
    let raw = span / n.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    } * mag;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

struct Series<'a> {
    name: &'a str,
    column: usize,
    color: &'a str,
    dashed: bool,
}

const TRAJECTORY_SERIES: [Series<'static>; 7] = [
    Series { name: "mu_hat_1", column: 1, color: "#1f77b4", dashed: false },
    Series { name: "mu_hat_2", column: 2, color: "#d62728", dashed: false },
    Series { name: "l1", column: 3, color: "#2ca02c", dashed: true },
    Series { name: "r1", column: 4, color: "#17becf", dashed: true },
    Series { name: "l2", column: 5, color: "#9467bd", dashed: true },
    Series { name: "r2", column: 6, color: "#e377c2", dashed: true },
    Series { name: "tv", column: 8, color: "#7f7f7f", dashed: false },
];

/// Renders a parsed trajectory CSV as a line chart.
///
/// Generator means are solid, discriminator endpoints dashed, total
/// variation gray. Polylines break wherever a value is non-finite (empty
/// witness slots sit at infinity), so those samples simply vanish from the
/// chart instead of distorting it.
pub fn render_trajectory_svg(data: &TrajectoryData) -> String {
    let x_lo = data.rows.first().map_or(0.0, |r| r[0]);
    let x_hi = data.rows.last().map_or(1.0, |r| r[0]).max(x_lo + 1.0);

    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for row in &data.rows {
        for s in &TRAJECTORY_SERIES {
            let v = row[s.column];
            if v.is_finite() {
                y_lo = y_lo.min(v);
                y_hi = y_hi.max(v);
            }
        }
    }
    if !y_lo.is_finite() {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if y_hi - y_lo < 1e-12 {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    let title = match (
        data.meta_value("figure"),
        data.meta_value("variant"),
        data.meta_value("status"),
    ) {
        (Some(f), Some(v), Some(s)) => format!("trajectory {f} ({v}, {s})"),
        (_, Some(v), Some(s)) => format!("trajectory ({v}, {s})"),
        _ => "trajectory".to_string(),
    };
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        c(MARGIN_L + plot_w / 2.0),
        title
    );

    // Axes and grid.
    for xt in nice_ticks(x_lo, x_hi, 8) {
        let px = sx(xt);
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="{y1}" x2="{x}" y2="{y2}" stroke="#dddddd" stroke-width="1"/>"##,
            x = c(px),
            y1 = c(MARGIN_T),
            y2 = c(MARGIN_T + plot_h)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            c(px),
            c(MARGIN_T + plot_h + 16.0),
            tick_label(xt)
        );
    }
    for yt in nice_ticks(y_lo, y_hi, 6) {
        let py = sy(yt);
        let _ = writeln!(
            out,
            r##"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="#dddddd" stroke-width="1"/>"##,
            x1 = c(MARGIN_L),
            x2 = c(MARGIN_L + plot_w),
            y = c(py)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            c(MARGIN_L - 6.0),
            c(py + 4.0),
            tick_label(yt)
        );
    }
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        c(MARGIN_L),
        c(MARGIN_T),
        c(plot_w),
        c(plot_h)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">iteration</text>"#,
        c(MARGIN_L + plot_w / 2.0),
        c(HEIGHT - 12.0)
    );

    // Series, with breaks at non-finite samples.
    for s in &TRAJECTORY_SERIES {
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, out: &mut String| {
            if seg.len() >= 2 {
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{}/>"#,
                    seg.join(" "),
                    s.color,
                    dash
                );
            }
            seg.clear();
        };
        for row in &data.rows {
            let v = row[s.column];
            if v.is_finite() {
                segment.push(format!("{},{}", c(sx(row[0])), c(sy(v))));
            } else {
                flush(&mut segment, &mut out);
            }
        }
        flush(&mut segment, &mut out);
    }

    // Legend.
    let lx = MARGIN_L + plot_w + 14.0;
    for (i, s) in TRAJECTORY_SERIES.iter().enumerate() {
        let ly = MARGIN_T + 14.0 + 20.0 * i as f64;
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1.5"{}/>"#,
            c(lx),
            c(ly),
            c(lx + 24.0),
            c(ly),
            s.color,
            dash
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            c(lx + 30.0),
            c(ly + 4.0),
            s.name
        );
    }

    out.push_str("</svg>\n");
    out
}

/// Piecewise-linear color ramp from dark purple through teal to yellow.
const RAMP: [(f64, [f64; 3]); 5] = [
    (0.00, [68.0, 1.0, 84.0]),
    (0.25, [59.0, 82.0, 139.0]),
    (0.50, [33.0, 145.0, 140.0]),
    (0.75, [94.0, 201.0, 98.0]),
    (1.00, [253.0, 231.0, 37.0]),
];

fn ramp_color(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let mut rgb = RAMP[0].1;
    for w in RAMP.windows(2) {
        let (t0, c0) = w[0];
        let (t1, c1) = w[1];
        if t >= t0 && t <= t1 {
            let f = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
            rgb = [
                c0[0] + f * (c1[0] - c0[0]),
                c0[1] + f * (c1[1] - c0[1]),
                c0[2] + f * (c1[2] - c0[2]),
            ];
            break;
        }
    }
    format!(
        "#{:02x}{:02x}{:02x}",
        rgb[0].round() as u8,
        rgb[1].round() as u8,
        rgb[2].round() as u8
    )
}

/// Renders a parsed heatmap CSV as a colored grid with a colorbar.
///
/// Cell color encodes success probability from 0 (dark) to 1 (bright).
/// Rows were written with the first initial mean varying slowest, so the
/// first coordinate maps to the vertical axis (bottom to top) and the
/// second to the horizontal.
pub fn render_heatmap_svg(data: &HeatmapData) -> String {
    let n = data.grid_n;
    let side = 440.0;
    let m_l = 70.0;
    let m_t = 46.0;
    let width = m_l + side + 110.0;
    let height = m_t + side + 56.0;
    let cell = side / n as f64;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = width,
        h = height
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);

    let title = match (data.meta_value("variant"), data.meta_value("trials")) {
        (Some(v), Some(t)) => format!("success probability ({v}, {t} trials/cell)"),
        (Some(v), None) => format!("success probability ({v})"),
        _ => "success probability".to_string(),
    };
    let _ = writeln!(
        out,
        r#"<text x="{}" y="26" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        c(m_l + side / 2.0),
        title
    );

    for (idx, row) in data.rows.iter().enumerate() {
        let i = idx / n; // first coordinate, slow
        let j = idx % n; // second coordinate, fast
        let x = m_l + j as f64 * cell;
        let y = m_t + (n - 1 - i) as f64 * cell;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            c(x),
            c(y),
            c(cell + 0.5),
            c(cell + 0.5),
            ramp_color(row.success_prob)
        );
    }
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        c(m_l),
        c(m_t),
        c(side),
        c(side)
    );

    // Axis labels from the row coordinates.
    if !data.rows.is_empty() {
        let lo1 = data.rows[0].mu1_init;
        let hi1 = data.rows[data.rows.len() - 1].mu1_init;
        let lo2 = data.rows[0].mu2_init;
        let hi2 = data.rows[n - 1].mu2_init;
        for (frac, v) in [(0.0, lo2), (0.5, 0.5 * (lo2 + hi2)), (1.0, hi2)] {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
                c(m_l + frac * side),
                c(m_t + side + 16.0),
                tick_label(v)
            );
        }
        for (frac, v) in [(0.0, lo1), (0.5, 0.5 * (lo1 + hi1)), (1.0, hi1)] {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
                c(m_l - 6.0),
                c(m_t + (1.0 - frac) * side + 4.0),
                tick_label(v)
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">initial mean 2</text>"#,
        c(m_l + side / 2.0),
        c(height - 14.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">initial mean 1</text>"#,
        c(m_t + side / 2.0),
        c(m_t + side / 2.0)
    );

    // Colorbar.
    let bar_x = m_l + side + 28.0;
    let bar_w = 18.0;
    let steps = 64;
    let step_h = side / steps as f64;
    for k in 0..steps {
        let t = (k as f64 + 0.5) / steps as f64;
        let y = m_t + side - (k + 1) as f64 * step_h;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            c(bar_x),
            c(y),
            c(bar_w),
            c(step_h + 0.5),
            ramp_color(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        c(bar_x),
        c(m_t),
        c(bar_w),
        c(side)
    );
    for (frac, label) in [(0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            c(bar_x + bar_w + 6.0),
            c(m_t + (1.0 - frac) * side + 4.0),
            label
        );
    }

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::csvio::{parse_csv, write_heatmap_csv, write_trajectory_csv, ParsedCsv};
    use crate::harness::{reproduce_trajectory, run_heatmap, FigureId, FigureOverrides, HeatmapConfig};
    use crate::dynamics::Variant;

    #[test]
    fn trajectory_svg_is_deterministic_and_well_formed() {
        let run = reproduce_trajectory(
            FigureId::Fig3,
            &FigureOverrides {
                eta: None,
                iterations: Some(40),
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &run).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data = match parse_csv(&text).unwrap() {
            ParsedCsv::Trajectory(t) => t,
            _ => unreachable!(),
        };
        let a = render_trajectory_svg(&data);
        let b = render_trajectory_svg(&data);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("polyline"));
        assert!(a.contains("mu_hat_1"));
    }

    #[test]
    fn optimal_witness_infinities_do_not_leak_into_coordinates() {
        let run = reproduce_trajectory(
            FigureId::Fig1c,
            &FigureOverrides {
                eta: None,
                iterations: Some(20),
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &run).unwrap();
        let data = match parse_csv(&String::from_utf8(buf).unwrap()).unwrap() {
            ParsedCsv::Trajectory(t) => t,
            _ => unreachable!(),
        };
        let svg = render_trajectory_svg(&data);
        assert!(!svg.contains("inf"), "layout must stay finite");
        assert!(!svg.contains("NaN"));
    }

    #[test]
    fn heatmap_svg_has_one_rect_per_cell() {
        let mut cfg = HeatmapConfig::new(Variant::FirstOrder);
        cfg.grid_n = 4;
        cfg.trials = 2;
        cfg.iterations = 40;
        let res = run_heatmap(&cfg).unwrap();
        let mut buf = Vec::new();
        write_heatmap_csv(&mut buf, &res).unwrap();
        let data = match parse_csv(&String::from_utf8(buf).unwrap()).unwrap() {
            ParsedCsv::Heatmap(h) => h,
            _ => unreachable!(),
        };
        let svg = render_heatmap_svg(&data);
        let rects = svg.matches("<rect").count();
        // 16 cells + 64 colorbar steps + background + 2 frames.
        assert_eq!(rects, 16 + 64 + 3);
        assert!(svg.contains("colorbar") || svg.contains("success probability"));
    }

    #[test]
    fn color_ramp_endpoints() {
        assert_eq!(ramp_color(0.0), "#440154");
        assert_eq!(ramp_color(1.0), "#fde725");
        assert_eq!(ramp_color(-3.0), "#440154");
        assert_eq!(ramp_color(7.0), "#fde725");
    }

    #[test]
    fn nice_tick_spacing_uses_round_steps() {
        let t = nice_ticks(0.0, 3000.0, 8);
        assert!(t.contains(&0.0));
        assert!(t.contains(&500.0) || t.contains(&1000.0) || t.contains(&2000.0));
        let t2 = nice_ticks(-1.3, 1.7, 6);
        for w in t2.windows(2) {
            assert!((w[1] - w[0] - 0.5).abs() < 1e-12);
        }
    }
}
