//! Hand-written SVG line chart of mean runtime against width.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::bench::{BenchResults, Suite, Variant};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const Y_TICKS: usize = 5;

fn color(suite: Suite) -> &'static str {
    match suite {
        Suite::Bv => "#1f77b4",
        Suite::Qft => "#d62728",
        Suite::Grover => "#2ca02c",
        Suite::Vqe => "#9467bd",
    }
}

/// `n_qubits` on x, `mean_ms` on y, one polyline per (suite, variant). Optimized series are dashed.
pub fn line_chart(results: &BenchResults) -> String {
    let mut series: BTreeMap<(Suite, Variant), Vec<(usize, f64)>> = BTreeMap::new();
    for r in &results.rows {
        series.entry((r.suite, r.variant)).or_default().push((r.n_qubits, r.mean_ms));
    }
    let xs = results.rows.iter().map(|r| r.n_qubits);
    let (x_min, x_max) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(1));
    let y_max = results.rows.iter().map(|r| r.mean_ms).fold(0.0f64, f64::max);
    let y_max = if y_max > 0.0 { y_max * 1.05 } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |n: usize| {
        let span = (x_max - x_min).max(1) as f64;
        LEFT + (n - x_min) as f64 / span * plot_w
    };
    let py = |ms: f64| TOP + plot_h - ms / y_max * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">mean simulation time per run</text>"#,
        LEFT + plot_w / 2.0
    );
    let (x0, y0, x1) = (LEFT, TOP + plot_h, LEFT + plot_w);
    let _ = writeln!(s, r#"<line class="axis" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line class="axis" x1="{x0}" y1="{TOP}" x2="{x0}" y2="{y0}" stroke="black"/>"#);
    for n in x_min..=x_max {
        let x = px(n);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/>"#, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{n}</text>"#, y0 + 20.0);
    }
    for i in 0..=Y_TICKS {
        let v = y_max * i as f64 / Y_TICKS as f64;
        let y = py(v);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{v:.3}</text>"#, x0 - 8.0, y + 4.0);
    }
    let _ =
        writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">qubits</text>"#, LEFT + plot_w / 2.0, HEIGHT - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">mean time (ms)</text>"#,
        TOP + plot_h / 2.0
    );

    for (i, ((suite, variant), points)) in series.iter().enumerate() {
        let pts: Vec<String> = points.iter().map(|&(n, ms)| format!("{:.2},{:.2}", px(n), py(ms))).collect();
        let dash = if *variant == Variant::Optimized { r#" stroke-dasharray="6 4""# } else { "" };
        let label = format!("{suite} {}", variant.name());
        let _ = writeln!(
            s,
            r#"<polyline class="series" data-suite="{suite}" data-variant="{}" fill="none" stroke="{}" stroke-width="2"{dash} points="{}"><title>{label}</title></polyline>"#,
            variant.name(),
            color(*suite),
            pts.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"{dash}/>"#,
            lx + 25.0,
            color(*suite)
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{label}</text>"#, lx + 32.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}
