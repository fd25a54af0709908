//! The polytope and report interchange formats.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use scribe_core::exact::Q;
use scribe_core::polytope::{hull_exact, hull_with_tol, Form, Polytope, ScalarMode};
use scribe_core::scribability::{FaceRecord, ScribedReport};
use scribe_core::FaceLattice;

pub const POLYTOPE_TAG: &str = "scribe-polytope/1";
pub const REPORT_TAG: &str = "scribe-report/1";

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PolytopeFile {
    pub format: String,
    pub dim: usize,
    pub form: String,
    pub scalar: String,
    pub vertices: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

pub fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
    } else {
        s = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    }
    Ok(s)
}

pub fn write_output(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
    } else {
        std::fs::write(path, text).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn rational_to_json(x: &Q) -> Value {
    let part = |b: &BigInt| match i64::try_from(b) {
        Ok(v) => json!(v),
        Err(_) => json!(b.to_string()),
    };
    json!([part(x.numer()), part(x.denom())])
}

fn json_to_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigInt::from(i)),
            None => bail!("rational parts must be integers, got {n}"),
        },
        Value::String(s) => s.parse().with_context(|| format!("bad integer '{s}'")),
        _ => bail!("bad rational part {v}"),
    }
}

fn json_to_rational(v: &Value) -> Result<Q> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            let den = json_to_bigint(&parts[1])?;
            if den == BigInt::from(0) {
                bail!("zero denominator");
            }
            Ok(BigRational::new(json_to_bigint(&parts[0])?, den))
        }
        Value::Number(n) if n.as_i64().is_some() => Ok(BigRational::from_integer(BigInt::from(n.as_i64().unwrap()))),
        _ => bail!("expected [numerator, denominator], got {v}"),
    }
}

fn json_to_f64(v: &Value) -> Result<f64> {
    v.as_f64().with_context(|| format!("expected a number, got {v}"))
}

impl PolytopeFile {
    pub fn from_polytope(p: &Polytope, metadata: Map<String, Value>) -> PolytopeFile {
        let (scalar, vertices) = match (&p.exact, p.scalar) {
            (Some(ex), ScalarMode::Rational) => {
                ("rational", ex.iter().map(|v| v.iter().map(rational_to_json).collect()).collect())
            }
            _ => ("float64", p.vertices.iter().map(|v| v.iter().map(|x| json!(x)).collect()).collect()),
        };
        let lattice = (0..p.dim).map(|r| p.lattice.faces_of_rank(r as isize).to_vec()).collect();
        PolytopeFile {
            format: POLYTOPE_TAG.into(),
            dim: p.dim,
            form: match p.form {
                Form::Euclidean => "euclidean",
                Form::Cone => "cone",
            }
            .into(),
            scalar: scalar.into(),
            vertices,
            lattice: Some(lattice),
            metadata,
        }
    }

    pub fn parse(text: &str) -> Result<PolytopeFile> {
        let f: PolytopeFile = serde_json::from_str(text).context("parsing polytope file")?;
        if f.format != POLYTOPE_TAG {
            bail!("unsupported format tag '{}', expected '{POLYTOPE_TAG}'", f.format);
        }
        Ok(f)
    }

    /// Rebuild the polytope. The stored lattice is checked against a fresh
    /// hull unless `trust_lattice` is set.
    pub fn to_polytope(&self, trust_lattice: bool, tol: f64) -> Result<Polytope> {
        let form = match self.form.as_str() {
            "euclidean" => Form::Euclidean,
            "cone" => Form::Cone,
            other => bail!("unknown form '{other}'"),
        };
        let width = if form == Form::Cone { self.dim + 1 } else { self.dim };
        if let Some(v) = self.vertices.iter().find(|v| v.len() != width) {
            bail!("vertex of length {} in a {}-dimensional {} file", v.len(), self.dim, self.form);
        }
        let exact: Option<Vec<Vec<Q>>> = match self.scalar.as_str() {
            "rational" => Some(
                self.vertices.iter().map(|v| v.iter().map(json_to_rational).collect::<Result<_>>()).collect::<Result<_>>()?,
            ),
            "float64" => None,
            other => bail!("unknown scalar mode '{other}'"),
        };
        let floats: Vec<Vec<f64>> = match &exact {
            Some(ex) => ex.iter().map(|v| v.iter().map(scribe_core::exact::to_f64).collect()).collect(),
            None => self.vertices.iter().map(|v| v.iter().map(json_to_f64).collect::<Result<_>>()).collect::<Result<_>>()?,
        };
        let stored = match &self.lattice {
            Some(ranks) => {
                let facets = ranks.last().context("empty lattice")?;
                let l = FaceLattice::from_facets(floats.len(), self.dim, facets)?;
                for (r, faces) in ranks.iter().enumerate() {
                    let mut want: Vec<Vec<usize>> = faces.iter().map(|f| sorted(f)).collect();
                    want.sort();
                    if want != l.faces_of_rank(r as isize) {
                        bail!("stored rank-{r} faces are inconsistent with the stored facets");
                    }
                }
                Some(l)
            }
            None => None,
        };
        if let (true, Some(l)) = (trust_lattice, &stored) {
            let mut p = Polytope::from_lattice(form, floats, l.clone())?;
            if let Some(ex) = exact {
                p.exact = Some(ex);
                p.scalar = ScalarMode::Rational;
            }
            return Ok(p);
        }
        let h = match (&exact, form) {
            (Some(ex), Form::Euclidean) => hull_exact(ex)?,
            _ => hull_with_tol(&floats, form, tol)?,
        };
        if h.kept.len() != floats.len() {
            bail!("{} of {} points are not vertices of their hull", floats.len() - h.kept.len(), floats.len());
        }
        if let Some(l) = stored {
            if l != h.polytope.lattice {
                bail!("stored lattice differs from the hull of the vertices (use --trust-lattice to skip this check)");
            }
        }
        Ok(h.polytope)
    }
}

fn sorted(f: &[usize]) -> Vec<usize> {
    let mut f = f.to_vec();
    f.sort_unstable();
    f
}

pub fn load_polytope(path: &str, trust_lattice: bool, tol: f64) -> Result<(Polytope, PolytopeFile)> {
    let file = PolytopeFile::parse(&read_input(path)?)?;
    let p = file.to_polytope(trust_lattice, tol)?;
    Ok((p, file))
}

pub fn polytope_json(p: &Polytope, metadata: Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(&PolytopeFile::from_polytope(p, metadata)).expect("serializable");
    s.push('\n');
    s
}

fn record_json(r: &FaceRecord) -> Value {
    let mut out = json!({ "rank": r.rank, "face": r.face });
    match &r.class {
        Ok(c) => {
            out["flags"] = json!({
                "strong_cut": c.strong_cut,
                "weak_cut": c.weak_cut,
                "strong_avoid": c.strong_avoid,
                "weak_avoid": c.weak_avoid,
                "tangent": c.tangent,
                "weak_tangent": c.weak_tangent,
            });
            out["min_norm"] = json!(c.min_norm);
            out["span_distance"] = json!(c.span_distance);
            out["gram_min_eigenvalue"] = json!(c.gram_min_eigenvalue);
            out["witness_point"] = json!(c.witness_point);
            out["witness_hyperplane"] = json!(c.witness_hyperplane);
        }
        Err(e) => out["indeterminate"] = json!(e),
    }
    out
}

pub fn verdict_name(v: scribe_core::scribability::Verdict) -> &'static str {
    match v {
        scribe_core::scribability::Verdict::True => "true",
        scribe_core::scribability::Verdict::False => "false",
        scribe_core::scribability::Verdict::Indeterminate => "indeterminate",
    }
}

pub fn scribed_report_json(r: &ScribedReport, seed: u64) -> String {
    let tallies: Vec<Value> = r
        .tallies
        .iter()
        .map(|t| {
            json!({
                "rank": t.rank, "faces": t.faces, "strong_cut": t.strong_cut, "weak_cut": t.weak_cut,
                "strong_avoid": t.strong_avoid, "weak_avoid": t.weak_avoid, "tangent": t.tangent,
                "weak_tangent": t.weak_tangent, "indeterminate": t.indeterminate,
            })
        })
        .collect();
    let body = json!({
        "format": REPORT_TAG,
        "command": "check",
        "i": r.i,
        "j": r.j,
        "mode": match r.mode {
            scribe_core::scribability::Mode::Strong => "strong",
            scribe_core::scribability::Mode::Weak => "weak",
        },
        "verdict": verdict_name(r.verdict),
        "violations": r.violations.iter().map(|(rank, f)| json!({"rank": rank, "face": f})).collect::<Vec<_>>(),
        "indeterminate": r.indeterminate.iter().map(|(rank, f)| json!({"rank": rank, "face": f})).collect::<Vec<_>>(),
        "tallies": tallies,
        "records": r.records.iter().map(record_json).collect::<Vec<_>>(),
        "tol": r.tol,
        "seed": seed,
    });
    pretty(&body)
}

/// A report for commands other than `check`.
pub fn report_json(command: &str, verdict: Option<&str>, records: Value, tol: f64, seed: u64) -> String {
    pretty(&json!({
        "format": REPORT_TAG,
        "command": command,
        "verdict": verdict,
        "records": records,
        "tol": tol,
        "seed": seed,
    }))
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
