//! Minimal SVG rendering: ROC rays with their vertical mean, and strip plots
//! of AUC distributions with quantile bars. Output is deterministic text.

use std::fmt::Write;

use crate::roc::{Ecdf, RocCurve};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn x(&self, u: f64) -> f64 {
        self.x0 + u * self.w
    }

    fn y(&self, v: f64) -> f64 {
        self.y0 + (1.0 - v) * self.h
    }

    fn axes(&self, out: &mut String, xlabel: &str, ylabel: &str, xticks: bool) {
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            self.x0, self.y0, self.w, self.h
        );
        for k in 0..=4 {
            let v = k as f64 / 4.0;
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="end">{v}</text>"#,
                self.x0 - 6.0,
                self.y(v) + 4.0
            );
            if xticks {
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" text-anchor="middle">{v}</text>"#,
                    self.x(v),
                    self.y0 + self.h + 16.0
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            self.x(0.5),
            self.y0 + self.h + 36.0,
            escape(xlabel)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            self.y(0.5),
            self.y(0.5),
            escape(ylabel)
        );
    }

    fn polyline(&self, out: &mut String, xs: &[f64], ys: &[f64], style: &str) {
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .map(|(&u, &v)| format!("{:.2},{:.2}", self.x(u), self.y(v)))
            .collect();
        let _ = writeln!(out, r#"<polyline points="{}" fill="none" {style}/>"#, pts.join(" "));
    }
}

/// ROC curves of individual replicates drawn as faint rays, with an optional
/// bold mean curve and the chance diagonal.
pub fn roc_svg(rays: &[RocCurve], mean: Option<&RocCurve>, title: &str) -> String {
    let mut out = String::new();
    header(&mut out, SIZE, SIZE, title);
    let frame = Frame {
        x0: MARGIN,
        y0: 40.0,
        w: SIZE - MARGIN - 16.0,
        h: SIZE - MARGIN - 40.0,
    };
    frame.axes(&mut out, "1 - specificity (p)", "sensitivity", true);
    frame.polyline(
        &mut out,
        &[0.0, 1.0],
        &[0.0, 1.0],
        r#"stroke="gray" stroke-dasharray="4 4""#,
    );
    let opacity = (8.0 / rays.len().max(1) as f64).clamp(0.05, 0.6);
    for r in rays {
        frame.polyline(
            &mut out,
            &r.p,
            &r.sensitivity,
            &format!(r#"stroke="steelblue" stroke-opacity="{opacity:.3}""#),
        );
    }
    if let Some(m) = mean {
        frame.polyline(&mut out, &m.p, &m.sensitivity, r#"stroke="darkred" stroke-width="2.5""#);
    }
    out.push_str("</svg>\n");
    out
}

/// Deterministic jitter in `[-0.5, 0.5)` from the golden-ratio sequence.
fn jitter(i: usize) -> f64 {
    (i as f64 * 0.618_033_988_749_895).fract() - 0.5
}

/// One column per group: jittered points plus a bar from the 5% to the 95%
/// quantile, a box from 25% to 75% and a median tick. Values are clipped to
/// `[0, 1]` (AUC scale).
pub fn strip_svg(groups: &[(String, Vec<f64>)], title: &str) -> String {
    let col = 72.0;
    let width = MARGIN + 16.0 + col * groups.len().max(1) as f64;
    let height = SIZE;
    let mut out = String::new();
    header(&mut out, width, height, title);
    let frame = Frame {
        x0: MARGIN,
        y0: 40.0,
        w: width - MARGIN - 16.0,
        h: height - MARGIN - 60.0,
    };
    frame.axes(&mut out, "", "AUC", false);
    let n = groups.len().max(1) as f64;
    for (g, (name, values)) in groups.iter().enumerate() {
        let centre = (g as f64 + 0.5) / n;
        let half = 0.3 / n;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end" transform="rotate(-35 {} {})">{}</text>"#,
            frame.x(centre),
            frame.y0 + frame.h + 14.0,
            frame.x(centre),
            frame.y0 + frame.h + 14.0,
            escape(name)
        );
        for (i, &v) in values.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="1.6" fill="steelblue" fill-opacity="0.45"/>"#,
                frame.x(centre + half * jitter(i)),
                frame.y(v.clamp(0.0, 1.0))
            );
        }
        let Ok(e) = Ecdf::new(values) else { continue };
        let q = |p: f64| e.quantile(p).map(|v| v.clamp(0.0, 1.0)).unwrap_or(f64::NAN);
        let (q05, q25, q50, q75, q95) = (q(0.05), q(0.25), q(0.5), q(0.75), q(0.95));
        let xc = frame.x(centre);
        let bw = frame.w * half * 0.6;
        let _ = writeln!(
            out,
            r#"<line x1="{xc:.2}" y1="{:.2}" x2="{xc:.2}" y2="{:.2}" stroke="black"/>"#,
            frame.y(q05),
            frame.y(q95)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            xc - bw / 2.0,
            frame.y(q75),
            bw,
            frame.y(q25) - frame.y(q75)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="darkred" stroke-width="2.5"/>"#,
            xc - bw / 2.0,
            frame.y(q50),
            xc + bw / 2.0,
            frame.y(q50)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roc::{default_p_grid, roc_curve};

    #[test]
    fn roc_svg_has_one_polyline_per_ray() {
        let r = roc_curve(&[0.1, 0.2, 0.3], &[0.25, 0.4], &default_p_grid()).unwrap();
        let svg = roc_svg(&[r.clone(), r.clone()], Some(&r), "a < b");
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        // diagonal + 2 rays + mean
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert!(svg.contains("a &lt; b"));
    }

    #[test]
    fn strip_svg_draws_points_and_bars() {
        let groups = vec![("pbc".to_string(), vec![0.5, 0.6, 0.7]), ("min".to_string(), vec![])];
        let svg = strip_svg(&groups, "AUC");
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches(r#"stroke="darkred""#).count(), 1);
        assert_eq!(strip_svg(&groups, "AUC"), svg);
    }
}
