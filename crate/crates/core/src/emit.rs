//! CSV and SVG output. CSV carries exact rationals; SVG coordinates are the
//! only decimal approximations produced anywhere.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::atlas::WallAtlas;
use crate::engine::ReducedDivisor;
use crate::graph::ZDivisor;
use crate::rational::{fmt_q, to_decimal, Q};
use crate::series::WalkStep;

const SVG_DIGITS: usize = 20;
const SVG_SIZE: i64 = 600;
const SVG_MARGIN: i64 = 40;

fn div_field(d: &ZDivisor) -> String {
    d.0.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn set_field(s: &ReducedDivisor) -> String {
    s.support().iter().map(|j| format!("E{}", j + 1)).collect::<Vec<_>>().join(" ")
}

/// One row per jumping point. Multi-valued fields are space separated.
pub fn walk_csv(steps: &[WalkStep]) -> String {
    let r = steps.first().map_or(0, |s| s.record.point.dim());
    let mut out = String::from("mu");
    for i in 1..=r {
        let _ = write!(out, ",c{i}");
    }
    out.push_str(",multiplicity,divisor,left_divisor,maximal,minimal,wall_lines\n");
    for s in steps {
        let rec = &s.record;
        let _ = write!(out, "{}", fmt_q(&s.mu));
        for x in rec.point.coords() {
            let _ = write!(out, ",{}", fmt_q(x));
        }
        let walls: Vec<String> = rec.wall_lines.iter().map(|(j, l)| format!("E{}@{}", j + 1, l)).collect();
        let _ = writeln!(
            out,
            ",{},{},{},{},{},{}",
            rec.multiplicity,
            div_field(&rec.divisor),
            div_field(&rec.left_divisor),
            set_field(&rec.maximal),
            rec.minimal.as_ref().map(set_field).unwrap_or_default(),
            walls.join(" ")
        );
    }
    out
}

/// Cells, facets and facet vertices of an atlas in one table keyed by `kind`.
pub fn atlas_csv(atlas: &WallAtlas) -> String {
    let mut out = String::from("kind,id,x,y,x2,y2,lower,upper,multiplicity,minimal,line\n");
    for (i, f) in atlas.faces.iter().enumerate() {
        let c = f.representative.coords();
        let _ = writeln!(out, "cell,{i},{},{},,,,{},,,", fmt_q(&c[0]), fmt_q(&c[1]), div_field(&f.divisor));
    }
    for (i, f) in atlas.facets.iter().enumerate() {
        let (s, e) = (f.start.coords(), f.end.coords());
        let plane = &atlas.lines[f.line].plane;
        let _ = writeln!(
            out,
            "facet,{i},{},{},{},{},{},{},{},{},{}*z1+{}*z2={}",
            fmt_q(&s[0]),
            fmt_q(&s[1]),
            fmt_q(&e[0]),
            fmt_q(&e[1]),
            div_field(&f.lower),
            div_field(&f.upper),
            f.multiplicity(),
            set_field(f.minimal()),
            plane.normal[0],
            plane.normal[1],
            fmt_q(&plane.rhs)
        );
    }
    for (i, v) in atlas.vertices.iter().enumerate() {
        let Some(rec) = &v.record else { continue };
        let c = v.point.coords();
        let _ = writeln!(
            out,
            "vertex,{i},{},{},,,{},{},{},{},",
            fmt_q(&c[0]),
            fmt_q(&c[1]),
            div_field(&rec.left_divisor),
            div_field(&rec.divisor),
            rec.multiplicity,
            rec.minimal.as_ref().map(set_field).unwrap_or_default()
        );
    }
    out
}

/// Plot of the atlas: filled regions, facet strokes (log-canonical facets
/// thicker) and axis threshold ticks.
pub fn atlas_svg(atlas: &WallAtlas, lct: &[Q]) -> String {
    let span = Q::from_integer((SVG_SIZE - 2 * SVG_MARGIN).into());
    let margin = Q::from_integer(SVG_MARGIN.into());
    let bottom = Q::from_integer((SVG_SIZE - SVG_MARGIN).into());
    let sx = |x: &Q| to_decimal(&(&margin + x * &span / &atlas.bounds.0), SVG_DIGITS);
    let sy = |y: &Q| to_decimal(&(&bottom - y * &span / &atlas.bounds.1), SVG_DIGITS);

    let mut palette: BTreeMap<&ZDivisor, usize> = BTreeMap::new();
    for f in &atlas.faces {
        palette.entry(&f.divisor).or_insert(0);
    }
    for (i, v) in palette.values_mut().enumerate() {
        *v = i;
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">"#
    );
    out.push_str("<g stroke=\"none\">\n");
    for f in &atlas.faces {
        let pts: Vec<String> = f
            .vertices
            .iter()
            .map(|&v| {
                let c = atlas.vertices[v].point.coords();
                format!("{},{}", sx(&c[0]), sy(&c[1]))
            })
            .collect();
        let hue = (palette[&f.divisor] * 137) % 360;
        let _ = writeln!(out, r#"<polygon points="{}" fill="hsl({hue},55%,82%)"/>"#, pts.join(" "));
    }
    out.push_str("</g>\n<g stroke=\"#222\" fill=\"none\">\n");
    let lc = atlas.lc_facets();
    for (i, f) in atlas.facets.iter().enumerate() {
        let (s, e) = (f.start.coords(), f.end.coords());
        let width = if lc.contains(&i) { 3 } else { 1 };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke-width="{width}"/>"#,
            sx(&s[0]),
            sy(&s[1]),
            sx(&e[0]),
            sy(&e[1])
        );
    }
    let zero = Q::from_integer(0.into());
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
        sx(&zero),
        sy(&atlas.bounds.1),
        to_decimal(&span, SVG_DIGITS),
        to_decimal(&span, SVG_DIGITS)
    );
    out.push_str("</g>\n<g font-family=\"monospace\" font-size=\"11\" fill=\"#000\">\n");
    if let Some(x) = lct.first().filter(|x| **x <= atlas.bounds.0) {
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#c00"/><text x="{0}" y="{3}">{4}</text>"##,
            sx(x),
            to_decimal(&bottom, SVG_DIGITS),
            to_decimal(&(&bottom + Q::from_integer(8.into())), SVG_DIGITS),
            to_decimal(&(&bottom + Q::from_integer(22.into())), SVG_DIGITS),
            fmt_q(x)
        );
    }
    if let Some(y) = lct.get(1).filter(|y| **y <= atlas.bounds.1) {
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{2}" x2="{1}" y2="{2}" stroke="#c00"/><text x="2" y="{2}">{3}</text>"##,
            to_decimal(&(&margin - Q::from_integer(8.into())), SVG_DIGITS),
            to_decimal(&margin, SVG_DIGITS),
            sy(y),
            fmt_q(y)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
