//! OFF and SVG writers.

use std::fmt::Write;

use anyhow::{bail, Context, Result};
use serde_json::Value;

use scribe_core::linalg::{centroid, dot, normalize, sub};
use scribe_core::polytope::{Form, Polytope};

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn euclidean(p: &Polytope) -> Result<Polytope> {
    match p.form {
        Form::Euclidean => Ok(p.clone()),
        Form::Cone => p.to_euclidean(1e-12).context("cone has generators that cannot be dehomogenized"),
    }
}

/// Facet vertices in counterclockwise order seen from outside.
fn facet_cycle(p: &Polytope, facet: usize) -> Vec<usize> {
    let f = &p.facets()[facet];
    let pts: Vec<Vec<f64>> = f.iter().map(|&i| p.vertices[i].clone()).collect();
    let c = centroid(&pts);
    let (a, _) = &p.facet_normals[facet];
    let u = normalize(&sub(&pts[0], &c));
    let w = cross(a, &u);
    let mut order: Vec<(f64, usize)> = f
        .iter()
        .zip(&pts)
        .map(|(&i, x)| {
            let r = sub(x, &c);
            (dot(&r, &w).atan2(dot(&r, &u)), i)
        })
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0));
    order.into_iter().map(|(_, i)| i).collect()
}

pub fn off(p: &Polytope) -> Result<String> {
    if p.dim != 3 {
        bail!("OFF export needs a 3-polytope, got dimension {}", p.dim);
    }
    let p = euclidean(p)?;
    let mut s = String::new();
    writeln!(s, "OFF")?;
    writeln!(s, "{} {} {}", p.n_vertices(), p.facets().len(), p.lattice.edges().len())?;
    for v in &p.vertices {
        writeln!(s, "{} {} {}", v[0], v[1], v[2])?;
    }
    for f in 0..p.facets().len() {
        let cyc = facet_cycle(&p, f);
        write!(s, "{}", cyc.len())?;
        for i in cyc {
            write!(s, " {i}")?;
        }
        writeln!(s)?;
    }
    Ok(s)
}

struct Circle {
    center: [f64; 2],
    radius: f64,
    outer: bool,
}

fn svg_document(circles: &[Circle], polygon: Option<&[[f64; 2]]>) -> String {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut grow = |x: f64, y: f64| {
        lo = [lo[0].min(x), lo[1].min(y)];
        hi = [hi[0].max(x), hi[1].max(y)];
    };
    for c in circles {
        grow(c.center[0] - c.radius, c.center[1] - c.radius);
        grow(c.center[0] + c.radius, c.center[1] + c.radius);
    }
    for q in polygon.unwrap_or(&[]) {
        grow(q[0], q[1]);
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let pad = 0.05 * span;
    let stroke = span / 400.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        lo[0] - pad,
        -hi[1] - pad,
        hi[0] - lo[0] + 2.0 * pad,
        hi[1] - lo[1] + 2.0 * pad
    );
    // y is flipped so that the picture has the usual orientation
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" fill="none" stroke="black" stroke-width="{stroke}">"#);
    for c in circles {
        let class = if c.outer { "outer" } else { "ball" };
        let _ = writeln!(s, r#"<circle class="{class}" cx="{}" cy="{}" r="{}"/>"#, c.center[0], c.center[1], c.radius);
    }
    if let Some(poly) = polygon {
        let pts: Vec<String> = poly.iter().map(|q| format!("{},{}", q[0], q[1])).collect();
        let _ = writeln!(s, r#"<polygon stroke="blue" points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Circles of a stored 2-d ball packing, or a polygon with the unit circle.
pub fn svg(p: &Polytope, metadata: &serde_json::Map<String, Value>) -> Result<String> {
    if let Some(balls) = metadata.get("balls") {
        let balls = balls.as_array().context("metadata.balls must be an array")?;
        let mut circles = Vec::new();
        for b in balls {
            let center: Vec<f64> = serde_json::from_value(b["center"].clone()).context("ball center")?;
            let k = b["curvature"].as_f64().context("ball curvature")?;
            if center.len() != 2 {
                bail!("SVG export needs a 2-d packing, got {}-d balls", center.len());
            }
            circles.push(Circle { center: [center[0], center[1]], radius: 1.0 / k.abs(), outer: k < 0.0 });
        }
        return Ok(svg_document(&circles, None));
    }
    if p.dim != 2 {
        bail!("SVG export needs a polygon or a 2-d ball packing, got a {}-polytope", p.dim);
    }
    let p = euclidean(p)?;
    let c = centroid(&p.vertices);
    let mut order: Vec<(f64, [f64; 2])> =
        p.vertices.iter().map(|v| ((v[1] - c[1]).atan2(v[0] - c[0]), [v[0], v[1]])).collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0));
    let poly: Vec<[f64; 2]> = order.into_iter().map(|(_, q)| q).collect();
    let unit = Circle { center: [0.0, 0.0], radius: 1.0, outer: false };
    Ok(svg_document(&[unit], Some(&poly)))
}
