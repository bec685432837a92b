//! Deterministic SVG 1.1 output for a [`Layout`].
//!
//! Every arc is a `<path>` carrying `data-code`, `data-ring` and
//! `data-quarter` attributes. All numbers are printed with three decimals.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::layout::Layout;
use crate::num::{fmt3, Scalar};

const LINE: f64 = 16.0;
const FONT: f64 = 11.0;
const SWATCH: f64 = 10.0;

pub fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Point at `radius` and `angle` degrees clockwise from 12 o'clock.
fn polar(center: f64, radius: f64, angle: f64) -> (f64, f64) {
    let theta = angle * PI / 180.0;
    (center + radius * theta.sin(), center - radius * theta.cos())
}

/// Annular sector path from `start` to `end` degrees.
pub fn annular_path(center: f64, inner: f64, outer: f64, start: f64, end: f64) -> String {
    let large = if end - start > 180.0 { 1 } else { 0 };
    let (x0, y0) = polar(center, outer, start);
    let (x1, y1) = polar(center, outer, end);
    let (x2, y2) = polar(center, inner, end);
    let (x3, y3) = polar(center, inner, start);
    format!(
        "M {} {} A {} {} 0 {large} 1 {} {} L {} {} A {} {} 0 {large} 0 {} {} Z",
        fmt3(x0),
        fmt3(y0),
        fmt3(outer),
        fmt3(outer),
        fmt3(x1),
        fmt3(y1),
        fmt3(x2),
        fmt3(y2),
        fmt3(inner),
        fmt3(inner),
        fmt3(x3),
        fmt3(y3),
    )
}

/// Renders the card. Equal layouts give byte-identical output.
pub fn render_svg<T: Scalar>(layout: &Layout<T>) -> String {
    let size = layout.canvas_size.as_f64();
    let center = layout.center().as_f64();
    let rows = layout.rings.len().max(layout.legend.len()) as f64;
    let height = size + LINE * (rows + 1.0);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    s.push_str(
        "<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n",
    );
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0.000 0.000 {w} {h}\" font-family=\"sans-serif\">",
        w = fmt3(size),
        h = fmt3(height),
    );
    let _ = writeln!(s, "<title>System card: {}</title>", escape_xml(&layout.title));
    let _ = writeln!(
        s,
        "<rect x=\"0.000\" y=\"0.000\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        fmt3(size),
        fmt3(height)
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"{}\" font-weight=\"bold\">{}</text>",
        fmt3(4.0),
        fmt3(14.0),
        fmt3(12.0),
        escape_xml(&layout.title)
    );

    s.push_str("<g id=\"rings\">\n");
    for ring in &layout.rings {
        let _ = writeln!(
            s,
            "<circle data-ring=\"{}\" data-category=\"{}\" cx=\"{c}\" cy=\"{c}\" r=\"{}\" fill=\"none\" stroke=\"#dddddd\" stroke-width=\"0.500\"/>",
            ring.index,
            escape_xml(&ring.label),
            fmt3(ring.outer_radius.as_f64()),
            c = fmt3(center),
        );
    }
    s.push_str("</g>\n");

    s.push_str("<g id=\"arcs\" stroke=\"#ffffff\" stroke-width=\"0.500\">\n");
    for arc in &layout.arcs {
        let d = annular_path(
            center,
            arc.inner_radius.as_f64(),
            arc.outer_radius.as_f64(),
            arc.start_angle.as_f64(),
            arc.end_angle.as_f64(),
        );
        let _ = writeln!(
            s,
            "<path data-code=\"{code}\" data-ring=\"{}\" data-quarter=\"{}\" d=\"{d}\" fill=\"{}\"><title>{code} {}: {}</title></path>",
            arc.ring_index,
            arc.quarter_index,
            arc.fill,
            escape_xml(&arc.name),
            arc.outcome,
            code = arc.criterion_code,
        );
    }
    s.push_str("</g>\n");

    let label_radius = layout.rings.last().map_or(0.0, |r| r.outer_radius.as_f64()) + 8.0;
    s.push_str("<g id=\"quarters\">\n");
    for sector in &layout.sectors {
        let mid = (sector.start_angle.as_f64() + sector.end_angle.as_f64()) / 2.0;
        let (x, y) = polar(center, label_radius, mid);
        let anchor = if (x - center).abs() < 1e-6 {
            "middle"
        } else if x > center {
            "start"
        } else {
            "end"
        };
        let _ = writeln!(
            s,
            "<text data-quarter=\"{}\" x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"{anchor}\" dominant-baseline=\"middle\">{}</text>",
            sector.index,
            fmt3(x),
            fmt3(y),
            fmt3(FONT),
            escape_xml(&sector.label),
        );
    }
    s.push_str("</g>\n");

    s.push_str("<g id=\"legend\">\n");
    let top = size;
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"{}\" font-weight=\"bold\">Rings, inner to outer</text>",
        fmt3(8.0),
        fmt3(top + LINE * 0.75),
        fmt3(FONT)
    );
    for (i, ring) in layout.rings.iter().enumerate() {
        let _ = writeln!(
            s,
            "<text data-ring=\"{}\" x=\"{}\" y=\"{}\" font-size=\"{}\">{}. {}</text>",
            ring.index,
            fmt3(8.0),
            fmt3(top + LINE * (i as f64 + 1.75)),
            fmt3(FONT),
            ring.index,
            escape_xml(&ring.label),
        );
    }
    let col = size / 2.0;
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" font-size=\"{}\" font-weight=\"bold\">Outcome</text>",
        fmt3(col),
        fmt3(top + LINE * 0.75),
        fmt3(FONT)
    );
    for (i, item) in layout.legend.iter().enumerate() {
        let y = top + LINE * (i as f64 + 1.0);
        let _ = writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"{w}\" height=\"{w}\" fill=\"{}\" stroke=\"#999999\" stroke-width=\"0.500\"/>",
            fmt3(col),
            fmt3(y + 3.0),
            item.color,
            w = fmt3(SWATCH),
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"{}\">{}</text>",
            fmt3(col + SWATCH + 4.0),
            fmt3(y + LINE * 0.75),
            fmt3(FONT),
            escape_xml(&item.label),
        );
    }
    s.push_str("</g>\n");
    s.push_str("</svg>\n");
    s
}
