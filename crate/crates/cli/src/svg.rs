//! Self-contained SVG line charts: axes, min/max tick labels, a legend and
//! one polyline per data column against the first column.

use std::fmt::Write;

use crate::output::Table;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

pub fn line_chart(table: &Table) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let (x_lo, x_hi) = bounds(table.rows.iter().map(|r| r[0]));
    let (y_lo, y_hi) = bounds(table.rows.iter().flat_map(|r| r[1..].iter().copied()));
    let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&table.title)
    );
    // Axes
    let _ = writeln!(
        s,
        r#"<path d="M{LEFT} {TOP} V{} H{}" fill="none" stroke="black" stroke-width="1"/>"#,
        TOP + plot_h,
        LEFT + plot_w
    );
    if y_lo < 0.0 && y_hi > 0.0 {
        let y0 = sy(0.0);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y0:.2}" x2="{}" y2="{y0:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            LEFT + plot_w
        );
    }
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{}</text>"#,
            escape(&text)
        );
    };
    label(&mut s, LEFT, TOP + plot_h + 16.0, "middle", format!("{x_lo:.4}"));
    label(&mut s, LEFT + plot_w, TOP + plot_h + 16.0, "middle", format!("{x_hi:.4}"));
    label(&mut s, LEFT - 6.0, TOP + plot_h, "end", format!("{y_lo:.4}"));
    label(&mut s, LEFT - 6.0, TOP + 4.0, "end", format!("{y_hi:.4}"));
    if let Some(x_name) = table.columns.first() {
        label(&mut s, LEFT + plot_w / 2.0, HEIGHT - 12.0, "middle", x_name.clone());
    }

    for (k, name) in table.columns.iter().enumerate().skip(1) {
        let color = COLORS[(k - 1) % COLORS.len()];
        let points: Vec<String> = table
            .rows
            .iter()
            .filter(|r| r[0].is_finite() && r[k].is_finite())
            .map(|r| format!("{:.2},{:.2}", sx(r[0]), sy(r[k])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * (k - 1) as f64;
        let lx = LEFT + plot_w + 14.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        label(&mut s, lx + 26.0, ly + 4.0, "start", name.clone());
    }
    s.push_str("</svg>\n");
    s
}
