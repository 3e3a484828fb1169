use std::fmt::Write;

use super::{Dir, Scene, Schedule};

const SCALE: f64 = 100.0;
const MARGIN: f64 = 0.75;

fn f(x: f64) -> String {
    let s = format!("{:.3}", x);
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Deterministic SVG of the scene; with a schedule, each arm is annotated
/// with its step number and turning direction.
pub fn render_svg(scene: &Scene, sched: Option<&Schedule>) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (i, a) in scene.arms.iter().enumerate() {
        if i == 0 {
            (x0, y0, x1, y1) = (a.cx, a.cy, a.cx, a.cy);
        }
        x0 = x0.min(a.cx);
        y0 = y0.min(a.cy);
        x1 = x1.max(a.cx);
        y1 = y1.max(a.cy);
    }
    let (x0, y0) = (x0 - MARGIN, y0 - MARGIN);
    let w = (x1 + MARGIN - x0) * SCALE;
    let h = (y1 + MARGIN - y0) * SCALE;
    // flip y so angles read counter-clockwise on screen
    let px = |x: f64| f((x - x0) * SCALE);
    let py = |y: f64| f(h - (y - y0) * SCALE);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        f(w),
        f(h),
        f(w),
        f(h)
    );
    out.push_str("<g id=\"arms\">\n");
    for a in &scene.arms {
        let s = a.segment();
        let _ = writeln!(
            out,
            r#"<line id="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="3"/>"#,
            escape(&a.id),
            px(s.p.x),
            py(s.p.y),
            px(s.q.x),
            py(s.q.y)
        );
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="4" fill="crimson"/>"#,
            px(a.cx),
            py(a.cy)
        );
    }
    out.push_str("</g>\n");
    if let Some(sched) = sched {
        out.push_str("<g id=\"schedule\" font-family=\"sans-serif\" font-size=\"14\">\n");
        for (i, step) in sched.steps.iter().enumerate() {
            let Some(a) = scene.arms.iter().find(|a| a.id == step.arm) else {
                continue;
            };
            let glyph = match step.dir {
                Dir::Cw => "cw",
                Dir::Ccw => "ccw",
            };
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{} {}</text>"#,
                px(a.cx + 0.08),
                py(a.cy - 0.15),
                i + 1,
                glyph
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramp::Arm;

    #[test]
    fn empty_and_single() {
        let empty = render_svg(&Scene::default(), None);
        assert!(empty.starts_with("<svg"));
        assert!(empty.contains("<g id=\"arms\">\n</g>"));
        let one = Scene {
            arms: vec![Arm::new("a", 0.0, 0.0, 0.0)],
        };
        let svg = render_svg(&one, None);
        assert_eq!(svg.matches("<line").count(), 1);
        assert!(svg.contains(r#"x1="25.000" y1="75.000" x2="125.000" y2="75.000""#));
        assert_eq!(svg, render_svg(&one, None));
    }
}
