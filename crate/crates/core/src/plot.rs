//! SVG wall diagrams: `β` horizontal, `α = √t` vertical.
//!
//! Coordinates are converted to floats here and nowhere else, and printed
//! with a fixed number of decimals so identical input gives identical bytes.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::{q, to_f64, Q};
use crate::walls::{LineHit, WallCandidate, WallLocus};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlotWindow {
    pub beta_min: Q,
    pub beta_max: Q,
    /// Upper end of the `t = α²` range; the lower end is `0`.
    pub t_max: Q,
}

impl PlotWindow {
    pub fn new(beta_min: Q, beta_max: Q, t_max: Q) -> Result<Self> {
        if beta_min >= beta_max || t_max <= q(0) {
            return Err(Error::EmptyWindow(format!(
                "beta in [{beta_min}, {beta_max}], t in [0, {t_max}]"
            )));
        }
        Ok(Self {
            beta_min,
            beta_max,
            t_max,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlotItem {
    Semicircle {
        center: Q,
        radius_sq: Q,
        label: String,
    },
    Ray {
        beta: Q,
        label: String,
    },
    Marker {
        beta: Q,
        t: Q,
        label: String,
    },
}

fn label(params: &[i64; 3]) -> String {
    format!("({}, {}, {})", params[0], params[1], params[2])
}

/// Semicircles become arcs; line hits become markers, or dashed rays for
/// whole-line coincidences.
pub fn items_from_candidates(
    semicircles: &[WallCandidate],
    line: Option<(Q, &[WallCandidate])>,
) -> Vec<PlotItem> {
    let mut items = Vec::new();
    for w in semicircles {
        if let WallLocus::Semicircle { center, radius_sq } = w.locus {
            items.push(PlotItem::Semicircle {
                center,
                radius_sq,
                label: label(&w.params),
            });
        }
    }
    if let Some((beta, hits)) = line {
        for w in hits {
            match w.t {
                Some(LineHit::Ray) => items.push(PlotItem::Ray {
                    beta,
                    label: label(&w.params),
                }),
                Some(LineHit::At(t)) => items.push(PlotItem::Marker {
                    beta,
                    t,
                    label: label(&w.params),
                }),
                None => {}
            }
        }
    }
    items
}

struct Frame {
    b0: f64,
    b1: f64,
    a1: f64,
}

impl Frame {
    fn x(&self, beta: f64) -> f64 {
        MARGIN + (beta - self.b0) / (self.b1 - self.b0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, alpha: f64) -> f64 {
        HEIGHT - MARGIN - alpha / self.a1 * (HEIGHT - 2.0 * MARGIN)
    }

    fn sx(&self, len: f64) -> f64 {
        len / (self.b1 - self.b0) * (WIDTH - 2.0 * MARGIN)
    }

    fn sy(&self, len: f64) -> f64 {
        len / self.a1 * (HEIGHT - 2.0 * MARGIN)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render_svg(window: &PlotWindow, items: &[PlotItem]) -> String {
    let f = Frame {
        b0: to_f64(&window.beta_min),
        b1: to_f64(&window.beta_max),
        a1: to_f64(&window.t_max).sqrt(),
    };
    let mut s = String::new();
    let (left, right) = (MARGIN, WIDTH - MARGIN);
    let (top, bottom) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{left:.3}" y="{top:.3}" width="{:.3}" height="{:.3}"/></clipPath></defs>"#,
        right - left,
        bottom - top
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g id="axes" stroke="black" stroke-width="1"><line x1="{left:.3}" y1="{bottom:.3}" x2="{right:.3}" y2="{bottom:.3}"/><line x1="{left:.3}" y1="{bottom:.3}" x2="{left:.3}" y2="{top:.3}"/></g>"#
    );
    let _ = writeln!(
        s,
        r#"<g font-family="monospace" font-size="11"><text x="{left:.3}" y="{:.3}">{}</text><text x="{right:.3}" y="{:.3}" text-anchor="end">{}</text><text x="{:.3}" y="{:.3}" text-anchor="end">0</text><text x="{:.3}" y="{top:.3}" text-anchor="end">{:.4}</text><text x="{:.3}" y="{:.3}" text-anchor="middle">beta</text><text x="{:.3}" y="{:.3}">alpha</text></g>"#,
        bottom + 16.0,
        window.beta_min,
        bottom + 16.0,
        window.beta_max,
        left - 4.0,
        bottom,
        left - 4.0,
        f.a1,
        (left + right) / 2.0,
        bottom + 32.0,
        left - 40.0,
        (top + bottom) / 2.0,
    );
    let _ = writeln!(
        s,
        r#"<g id="walls" clip-path="url(#plot)" fill="none" stroke-width="1.5">"#
    );
    for item in items {
        match item {
            PlotItem::Semicircle {
                center,
                radius_sq,
                label,
            } => {
                let (c, r) = (to_f64(center), to_f64(radius_sq).sqrt());
                let _ = writeln!(
                    s,
                    r#"<path d="M {:.3} {:.3} A {:.3} {:.3} 0 0 1 {:.3} {:.3}" stroke="steelblue"><title>{}</title></path>"#,
                    f.x(c - r),
                    f.y(0.0),
                    f.sx(r),
                    f.sy(r),
                    f.x(c + r),
                    f.y(0.0),
                    escape(label)
                );
            }
            PlotItem::Ray { beta, label } => {
                let x = f.x(to_f64(beta));
                let _ = writeln!(
                    s,
                    r#"<path d="M {x:.3} {bottom:.3} L {x:.3} {top:.3}" stroke="gray" stroke-dasharray="4 3"><title>{}</title></path>"#,
                    escape(label)
                );
            }
            PlotItem::Marker { beta, t, label } => {
                let _ = writeln!(
                    s,
                    r#"<path d="M {:.3} {:.3} m -4 0 l 8 0 m -4 -4 l 0 8" stroke="firebrick"><title>{}</title></path>"#,
                    f.x(to_f64(beta)),
                    f.y(to_f64(t).sqrt()),
                    escape(label)
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<g id="labels" font-family="monospace" font-size="10">"#
    );
    for item in items {
        let (x, y, text) = match item {
            PlotItem::Semicircle {
                center,
                radius_sq,
                label,
            } => {
                let top_alpha = to_f64(radius_sq).sqrt();
                (f.x(to_f64(center)), f.y(top_alpha) - 4.0, label)
            }
            PlotItem::Ray { beta, label } => (f.x(to_f64(beta)) + 4.0, top + 12.0, label),
            PlotItem::Marker { beta, t, label } => {
                (f.x(to_f64(beta)) + 6.0, f.y(to_f64(t).sqrt()) - 6.0, label)
            }
        };
        let _ = writeln!(s, r#"<text x="{x:.3}" y="{y:.3}">{}</text>"#, escape(text));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn window() -> PlotWindow {
        PlotWindow::new(q(-2), q(0), frac(1, 4)).unwrap()
    }

    #[test]
    fn axes_only() {
        let s = render_svg(&window(), &[]);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains(r#"id="axes""#));
        assert!(!s.contains("<path"));
    }

    #[test]
    fn semicircle_arc() {
        let items = [PlotItem::Semicircle {
            center: frac(-5, 6),
            radius_sq: frac(1, 36),
            label: "(-1, 1, -3)".into(),
        }];
        let s = render_svg(&window(), &items);
        assert_eq!(s.matches("<path").count(), 1);
        assert!(s.contains(" A "));
        assert_eq!(s, render_svg(&window(), &items));
    }

    #[test]
    fn empty_window() {
        assert!(PlotWindow::new(q(0), q(0), q(1)).is_err());
        assert!(PlotWindow::new(q(-1), q(0), q(0)).is_err());
    }
}
