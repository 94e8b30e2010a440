use std::fmt::Write;

use super::report::ReportRow;

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(vals: impl Iterator<Item = f64> + Clone) -> Self {
        let (lo, hi) = vals.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |a, v| (a.0.min(v), a.1.max(v)));
        let log = lo > 0.0 && hi / lo > 100.0;
        let (lo, hi) = if log { (lo.ln(), hi.ln()) } else { (lo, hi) };
        let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1.0) };
        Self {
            lo: lo - pad,
            hi: hi + pad,
            log,
        }
    }

    fn unit(&self, v: f64) -> f64 {
        let v = if self.log { v.ln() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn label(&self, u: f64) -> String {
        let v = self.lo + u * (self.hi - self.lo);
        let v = if self.log { v.exp() } else { v };
        format!("{v:.3e}")
    }
}

/// Line plot of `column` against the domain parameter (or the row index
/// when rows carry no parameter), one polyline per `(p, n)` series.
/// `None` when the column has no finite values.
pub fn plot_column(rows: &[ReportRow], column: &str) -> Option<String> {
    let use_param = rows.iter().all(|r| r.parameter.is_some());
    let mut series: Vec<((Option<f64>, Option<usize>), Vec<(f64, f64)>)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let Some(y) = r.value(column).filter(|v| v.is_finite()) else {
            continue;
        };
        let x = if use_param { r.parameter.unwrap() } else { i as f64 };
        let key = (r.p, r.n);
        match series.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push((x, y)),
            None => series.push((key, vec![(x, y)])),
        }
    }
    if series.is_empty() {
        return None;
    }
    let all = || series.iter().flat_map(|(_, pts)| pts.iter());
    let xa = Axis::fit(all().map(|p| p.0));
    let ya = Axis::fit(all().map(|p| p.1));
    let px = |x: f64| MARGIN + xa.unit(x) * (W - 2.0 * MARGIN);
    let py = |y: f64| H - MARGIN - ya.unit(y) * (H - 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (MARGIN, W - MARGIN, H - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" stroke="black" fill="none"/>"#
    );
    for k in 0..=4 {
        let u = k as f64 / 4.0;
        let gx = x0 + u * (x1 - x0);
        let gy = y0 - u * (y0 - y1);
        let _ = writeln!(s, r#"<text x="{gx}" y="{}" text-anchor="middle">{}</text>"#, y0 + 16.0, xa.label(u));
        let _ = writeln!(s, r#"<text x="{}" y="{gy}" text-anchor="end">{}</text>"#, x0 - 4.0, ya.label(u));
    }
    let xname = if use_param { "parameter" } else { "row" };
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{xname}</text>"#, W / 2.0, H - 16.0);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{column}</text>"#, W / 2.0);
    for (i, ((p, n), pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let d: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" stroke="{color}" fill="none" stroke-width="1.5"/>"#,
            d.join(" ")
        );
        for &(x, y) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, px(x), py(y));
        }
        let label = match (p, n) {
            (Some(p), Some(n)) => format!("p={p} n={n}"),
            (Some(p), None) => format!("p={p}"),
            _ => "series".into(),
        };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{label}</text>"#,
            x1 - 80.0,
            y1 + 14.0 * (i as f64 + 1.0)
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}
