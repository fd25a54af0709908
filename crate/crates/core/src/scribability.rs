//! Classification of faces against the unit sphere and (i,j)-scribed
//! verdicts.

use rayon::prelude::*;

use crate::error::{Error, Result, EPS_PRED};
use crate::lattice::FaceLattice;
use crate::linalg::{self, dot, norm, normalize, scale, sub, Flat};
use crate::lorentz::{self, lorentz_gram};
use crate::minnorm::min_norm_point;
use crate::opt::{self, Cmp, LinearProgram, LpOutcome};
use crate::polytope::{Form, Polytope};

/// Coefficient floor for the strictly-positive convex combination test.
pub const RELINT_DELTA: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Strong,
    Weak,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FaceClass {
    pub strong_cut: bool,
    pub weak_cut: bool,
    pub strong_avoid: bool,
    pub weak_avoid: bool,
    pub tangent: bool,
    pub weak_tangent: bool,
    /// Norm of the minimum-norm point of the face (Euclidean), or of the
    /// closest cone point scaled to `x_0 = 1` (cone form).
    pub min_norm: Option<f64>,
    /// Distance from the origin to the affine span (Euclidean form).
    pub span_distance: Option<f64>,
    /// Smallest eigenvalue of the Lorentz Gram matrix of the span (cone form).
    pub gram_min_eigenvalue: Option<f64>,
    /// A ball point of the face when it strongly cuts, or the min-norm point.
    pub witness_point: Option<Vec<f64>>,
    /// `a` with `a . x <= 1` supporting the face and `|a| <= 1` when it
    /// strongly avoids (cone form: `(-1, a)` as a linear functional).
    pub witness_hyperplane: Option<Vec<f64>>,
}

impl FaceClass {
    pub fn cuts(&self, mode: Mode) -> bool {
        match mode {
            Mode::Strong => self.strong_cut,
            Mode::Weak => self.weak_cut,
        }
    }

    pub fn avoids(&self, mode: Mode) -> bool {
        match mode {
            Mode::Strong => self.strong_avoid,
            Mode::Weak => self.weak_avoid,
        }
    }
}

/// Whether `x` is a strictly positive combination of the generators.
fn in_relint_cone(gens: &[Vec<f64>], x: &[f64]) -> bool {
    if gens.len() == 1 {
        return true;
    }
    let k = gens.len();
    let g: Vec<Vec<f64>> = gens.iter().map(|v| normalize(v)).collect();
    let x = normalize(x);
    let mut obj = vec![0.0; k];
    obj.push(1.0);
    let mut bounds = vec![(0.0, f64::INFINITY); k];
    bounds.push((-1.0, 1.0));
    let mut lp = LinearProgram::new(obj, bounds);
    for c in 0..x.len() {
        let mut row: Vec<f64> = g.iter().map(|v| v[c]).collect();
        row.push(0.0);
        lp.row(row, Cmp::Eq, x[c]);
    }
    for i in 0..k {
        let mut row = vec![0.0; k + 1];
        row[i] = 1.0;
        row[k] = -1.0;
        lp.row(row, Cmp::Ge, 0.0);
    }
    match lp.maximize() {
        LpOutcome::Optimal { value, .. } => value >= RELINT_DELTA,
        _ => false,
    }
}

/// Strong avoidance on homogeneous generators: find `a` with
/// `(-1, a) . g = 0` on the face and `< 0` off it, minimizing `|a|`.
/// Returns `(avoids, witness)`.
fn strong_avoid(face: &[Vec<f64>], others: &[Vec<f64>], tol: f64) -> Result<(bool, Option<Vec<f64>>)> {
    let n = face[0].len() - 1;
    let unit = |g: &Vec<f64>| normalize(g);
    let eq_rows: Vec<Vec<f64>> = face.iter().map(|g| unit(g)[1..].to_vec()).collect();
    let eq_rhs: Vec<f64> = face.iter().map(|g| unit(g)[0]).collect();
    let le_rows: Vec<Vec<f64>> = others.iter().map(|g| unit(g)[1..].to_vec()).collect();
    let solve = |delta: f64| {
        let le_rhs: Vec<f64> = others.iter().map(|g| unit(g)[0] - delta).collect();
        opt::min_norm_qp(n, &eq_rows, &eq_rhs, &le_rows, &le_rhs)
    };
    let Some(s0) = solve(0.0) else {
        return Ok((false, None));
    };
    let n0 = norm(&s0.x);
    if n0 > 1.0 + tol {
        return Ok((false, None));
    }
    let slack_ok = le_rows
        .iter()
        .zip(others)
        .all(|(r, g)| unit(g)[0] - dot(r, &s0.x) > EPS_PRED);
    if slack_ok {
        return Ok((true, Some(s0.x)));
    }
    match solve(EPS_PRED) {
        Some(s1) if norm(&s1.x) <= 1.0 + tol => Ok((true, Some(s1.x))),
        _ => Err(Error::Indeterminate(format!(
            "supporting hyperplane of norm {n0:.3e} exists only with a tight non-face vertex"
        ))),
    }
}

fn classify_euclidean(face: &[Vec<f64>], others: &[Vec<f64>], tol: f64) -> Result<FaceClass> {
    let mn = min_norm_point(face);
    let z = mn.point.clone();
    let zn = mn.norm;
    let face_h = lorentz::homogenize(face);
    let relint = || {
        mn.weights.iter().all(|&w| w > RELINT_DELTA) || in_relint_cone(&face_h, &lorentz::homogenize(&[z.clone()])[0])
    };
    let near = (zn - 1.0).abs() <= tol;
    let strong_cut = zn < 1.0 - tol || (near && relint());

    let flat = Flat::through(face, 1e-10);
    let dist = flat.distance(&vec![0.0; face[0].len()]);
    let weak_cut = dist <= 1.0 + tol;
    let weak_avoid = dist >= 1.0 - tol;
    let weak_tangent = (dist - 1.0).abs() <= tol;

    let others_h = lorentz::homogenize(others);
    let (strong_avoid, witness_hyperplane) = strong_avoid(&face_h, &others_h, tol)?;

    // an avoiding face cannot reach into the open ball
    if strong_avoid && zn < 1.0 - tol {
        return Err(Error::Indeterminate(format!("avoiding face has a point of norm {zn:.12}")));
    }
    let tangent = strong_cut && strong_avoid;
    Ok(FaceClass {
        strong_cut,
        weak_cut,
        strong_avoid,
        weak_avoid,
        tangent,
        weak_tangent,
        min_norm: Some(zn),
        span_distance: Some(dist),
        gram_min_eigenvalue: None,
        witness_point: Some(z),
        witness_hyperplane,
    })
}

fn classify_cone(face: &[Vec<f64>], others: &[Vec<f64>], tol: f64) -> Result<FaceClass> {
    let gens: Vec<Vec<f64>> = face.iter().map(|g| normalize(g)).collect();
    let k = gens.len();
    let n = gens[0].len();

    // weak flags from the Lorentz Gram matrix of an orthonormal span basis
    let span = Flat::through(&std::iter::once(vec![0.0; n]).chain(gens.iter().cloned()).collect::<Vec<_>>(), 1e-10);
    let gram = lorentz_gram(&span.basis);
    let lmin = linalg::sym_eigenvalues(&gram)[0];
    let weak_avoid = lmin >= -tol;
    let weak_cut = lmin <= tol;
    let weak_tangent = lmin.abs() <= tol;

    // strong cut: closest cone point to the time axis at x_0 = 1
    let mut q = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            q[i * k + j] = 2.0 * dot(&gens[i][1..], &gens[j][1..]) + if i == j { 1e-12 } else { 0.0 };
        }
    }
    let eq = vec![gens.iter().map(|g| g[0]).collect::<Vec<f64>>()];
    let le: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut r = vec![0.0; k];
            r[i] = -1.0;
            r
        })
        .collect();
    let sol = opt::min_quadratic_qp(&q, &vec![0.0; k], &eq, &[1.0], &le, &vec![0.0; k]);
    let (strong_cut, min_norm, witness_point) = match sol {
        None => (false, None, None),
        Some(s) => {
            let x: Vec<f64> = (0..n).map(|c| (0..k).map(|i| s.x[i] * gens[i][c]).sum()).collect();
            let r = norm(&x[1..]) / x[0];
            let near = (r - 1.0).abs() <= tol;
            let rel = near && in_relint_cone(&gens, &x);
            let point = scale(&x[1..], 1.0 / x[0]);
            (r < 1.0 - tol || rel, Some(r), Some(point))
        }
    };
    let (strong_avoid, witness_hyperplane) = strong_avoid(face, others, tol)?;
    if strong_avoid && min_norm.is_some_and(|r| r < 1.0 - tol) {
        return Err(Error::Indeterminate("avoiding cone face reaches inside the light cone".into()));
    }
    let tangent = strong_cut && strong_avoid;
    Ok(FaceClass {
        strong_cut,
        weak_cut,
        strong_avoid,
        weak_avoid,
        tangent,
        weak_tangent,
        min_norm,
        span_distance: None,
        gram_min_eigenvalue: Some(lmin),
        witness_point,
        witness_hyperplane,
    })
}

/// Classify a proper face of `p` against the unit sphere. Cone-form
/// polytopes whose generators all have positive `x_0` are classified after
/// central projection; otherwise through the Lorentz Gram matrix and
/// small quadratic programs on the generators.
pub fn classify_face(p: &Polytope, face: &[usize], tol: f64) -> Result<FaceClass> {
    let r = p.lattice.rank_of(face).ok_or_else(|| Error::NotAFace(face.to_vec()))?;
    if r < 0 || r >= p.dim as isize {
        return Err(Error::InvalidArgument("only proper nonempty faces are classified".into()));
    }
    let mut f = face.to_vec();
    f.sort_unstable();
    let split = |verts: &[Vec<f64>]| {
        let inside: Vec<Vec<f64>> = f.iter().map(|&i| verts[i].clone()).collect();
        let outside: Vec<Vec<f64>> =
            (0..verts.len()).filter(|i| f.binary_search(i).is_err()).map(|i| verts[i].clone()).collect();
        (inside, outside)
    };
    match p.form {
        Form::Euclidean => {
            let (a, b) = split(&p.vertices);
            classify_euclidean(&a, &b, tol)
        }
        Form::Cone => match p.euclidean_vertices(EPS_PRED) {
            Some(v) => {
                let (a, b) = split(&v);
                classify_euclidean(&a, &b, tol)
            }
            None => {
                let (a, b) = split(&p.vertices);
                classify_cone(&a, &b, tol)
            }
        },
    }
}

/// Strong cut test for the segment `[v, w]` as a face of some polytope.
pub fn segment_strongly_cuts(v: &[f64], w: &[f64], tol: f64) -> bool {
    let mn = min_norm_point(&[v.to_vec(), w.to_vec()]);
    mn.norm < 1.0 - tol || ((mn.norm - 1.0).abs() <= tol && mn.weights.iter().all(|&x| x > RELINT_DELTA))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Indeterminate,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::True => 0,
            Verdict::False => 1,
            Verdict::Indeterminate => 2,
        }
    }

    pub fn is_true(self) -> bool {
        self == Verdict::True
    }
}

#[derive(Clone, Debug)]
pub struct FaceRecord {
    pub rank: usize,
    pub face: Vec<usize>,
    pub class: std::result::Result<FaceClass, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankTally {
    pub rank: usize,
    pub faces: usize,
    pub strong_cut: usize,
    pub weak_cut: usize,
    pub strong_avoid: usize,
    pub weak_avoid: usize,
    pub tangent: usize,
    pub weak_tangent: usize,
    pub indeterminate: usize,
}

#[derive(Clone, Debug)]
pub struct ScribedReport {
    pub i: usize,
    pub j: usize,
    pub mode: Mode,
    pub tol: f64,
    pub records: Vec<FaceRecord>,
    pub tallies: Vec<RankTally>,
    pub verdict: Verdict,
    /// Faces failing their requirement: `(rank, face)`.
    pub violations: Vec<(usize, Vec<usize>)>,
    pub indeterminate: Vec<(usize, Vec<usize>)>,
}

/// Classify every face of the given ranks, in lattice order.
pub fn classify_ranks(p: &Polytope, ranks: &[usize], tol: f64) -> Vec<FaceRecord> {
    let mut todo: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut seen = ranks.to_vec();
    seen.sort_unstable();
    seen.dedup();
    for &r in &seen {
        for f in p.lattice.faces_of_rank(r as isize) {
            todo.push((r, f.clone()));
        }
    }
    todo.par_iter()
        .map(|(r, f)| FaceRecord { rank: *r, face: f.clone(), class: classify_face(p, f, tol).map_err(|e| e.to_string()) })
        .collect()
}

fn tally(records: &[FaceRecord], rank: usize) -> RankTally {
    let mut t = RankTally { rank, ..Default::default() };
    for rec in records.iter().filter(|r| r.rank == rank) {
        t.faces += 1;
        match &rec.class {
            Ok(c) => {
                t.strong_cut += c.strong_cut as usize;
                t.weak_cut += c.weak_cut as usize;
                t.strong_avoid += c.strong_avoid as usize;
                t.weak_avoid += c.weak_avoid as usize;
                t.tangent += c.tangent as usize;
                t.weak_tangent += c.weak_tangent as usize;
            }
            Err(_) => t.indeterminate += 1,
        }
    }
    t
}

/// Verdict on whether every `i`-face avoids and every `j`-face cuts.
pub fn scribed_report(p: &Polytope, i: usize, j: usize, mode: Mode, tol: f64) -> Result<ScribedReport> {
    if i > j || j >= p.dim {
        return Err(Error::InvalidArgument(format!("need 0 <= i <= j <= {}, got ({i},{j})", p.dim.saturating_sub(1))));
    }
    let records = classify_ranks(p, &[i, j], tol);
    let mut violations = Vec::new();
    let mut indeterminate = Vec::new();
    for rec in &records {
        match &rec.class {
            Ok(c) => {
                let bad = (rec.rank == i && !c.avoids(mode)) || (rec.rank == j && !c.cuts(mode));
                if bad {
                    violations.push((rec.rank, rec.face.clone()));
                }
            }
            Err(_) => indeterminate.push((rec.rank, rec.face.clone())),
        }
    }
    let verdict = if !violations.is_empty() {
        Verdict::False
    } else if !indeterminate.is_empty() {
        Verdict::Indeterminate
    } else {
        Verdict::True
    };
    let mut ranks = vec![i, j];
    ranks.dedup();
    let tallies = ranks.iter().map(|&r| tally(&records, r)).collect();
    Ok(ScribedReport { i, j, mode, tol, records, tallies, verdict, violations, indeterminate })
}

pub fn verdict(p: &Polytope, i: usize, j: usize, mode: Mode, tol: f64) -> Result<Verdict> {
    scribed_report(p, i, j, mode, tol).map(|r| r.verdict)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Separating,
    NonSeparating,
}

/// Classify the edges of a weakly circumscribed polygon: an edge whose
/// supporting half-plane is `{a . x <= -1}` separates the polygon from the
/// disk.
pub fn polygon_edge_classes(p: &Polytope, tol: f64) -> Result<Vec<EdgeClass>> {
    if p.dim != 2 || p.form != Form::Euclidean {
        return Err(Error::InvalidArgument("expected a Euclidean polygon".into()));
    }
    p.facet_normals
        .iter()
        .map(|(_, b)| {
            if (b - 1.0).abs() <= tol {
                Ok(EdgeClass::NonSeparating)
            } else if (b + 1.0).abs() <= tol {
                Ok(EdgeClass::Separating)
            } else {
                Err(Error::Precondition(format!("edge line at signed distance {b} is not tangent")))
            }
        })
        .collect()
}

/// Polygon cut out by half-planes on tangent lines of the unit circle.
/// `angles[k]` is the tangency point direction and `separating[k]` picks the
/// side away from the disk. `None` when some line does not carry an edge or
/// the region is empty or unbounded.
pub fn tangent_line_polygon(angles: &[f64], separating: &[bool]) -> Option<Polytope> {
    let lines: Vec<(Vec<f64>, f64)> = angles
        .iter()
        .zip(separating)
        .map(|(&t, &s)| {
            let u = vec![t.cos(), t.sin()];
            if s {
                (scale(&u, -1.0), -1.0)
            } else {
                (u, 1.0)
            }
        })
        .collect();
    let m = lines.len();
    let mut pts = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let (na, ba) = &lines[a];
            let (nb, bb) = &lines[b];
            let det = na[0] * nb[1] - na[1] * nb[0];
            if det.abs() < 1e-9 {
                continue;
            }
            let x = vec![(ba * nb[1] - bb * na[1]) / det, (na[0] * bb - nb[0] * ba) / det];
            if lines.iter().all(|(n, b)| dot(n, &x) <= b + 1e-9) {
                pts.push(x);
            }
        }
    }
    if pts.len() < 3 {
        return None;
    }
    let poly = crate::polytope::hull(&pts, Form::Euclidean).ok()?;
    // every hull edge must lie on one of the lines, and every line must carry an edge
    let mut used = vec![false; m];
    for (a, b) in &poly.facet_normals {
        let k = lines.iter().position(|(n, c)| norm(&sub(n, a)) < 1e-7 && (c - b).abs() < 1e-7)?;
        used[k] = true;
    }
    if used.iter().all(|&u| u) {
        Some(poly)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundedMode {
    ContainsCenter,
    Bounded,
}

/// A ball point for every facet (the strong-cut witnesses).
fn facet_ball_points(p: &Polytope, tol: f64) -> Result<Vec<Vec<f64>>> {
    p.facets()
        .iter()
        .map(|f| {
            let c = classify_face(p, f, tol)?;
            if !c.strong_cut {
                return Err(Error::Precondition("a facet does not strongly cut".into()));
            }
            c.witness_point.ok_or_else(|| Error::Precondition("missing cut witness".into()))
        })
        .collect()
}

fn apply_map(p: &Polytope, m: &lorentz::ProjMap) -> Result<Polytope> {
    let imgs: Vec<Vec<f64>> = p.homogeneous_vertices().iter().map(|v| m.apply(v)).collect();
    let as_cone = Polytope::from_lattice(Form::Cone, imgs.iter().map(|v| normalize(v)).collect(), p.lattice.clone())?;
    match as_cone.to_euclidean(EPS_PRED) {
        Ok(e) => Ok(e),
        Err(_) => Ok(as_cone),
    }
}

fn contains_center(p: &Polytope, tol: f64) -> Result<Polytope> {
    let pts = facet_ball_points(p, tol)?;
    let c = linalg::centroid(&pts);
    let t = lorentz::hyperbolic_translation(&c)?;
    apply_map(p, &t)
}

/// Move a strongly (i,j)-scribed realization by sphere-preserving maps so
/// that it contains the center of the sphere, or (in `Bounded` mode) so
/// that its polar contains the center, which makes it bounded.
pub fn bounded_realization(p: &Polytope, i: usize, j: usize, mode: BoundedMode, tol: f64) -> Result<Polytope> {
    if verdict(p, i, j, Mode::Strong, tol)? != Verdict::True {
        return Err(Error::Precondition(format!("input is not strongly ({i},{j})-scribed")));
    }
    let out = match mode {
        BoundedMode::ContainsCenter => contains_center(p, tol)?,
        BoundedMode::Bounded => {
            let (polar, _) = p.polar_dual()?;
            let moved = contains_center(&polar, tol)?;
            let (back, _) = moved.polar_dual()?;
            // vertex i of the double polar is facet i of the polar, i.e. vertex i of p
            back
        }
    };
    if verdict(&out, i, j, Mode::Strong, tol)? != Verdict::True {
        return Err(Error::ConstructionFailed("verdict lost under the sphere-preserving map".into()));
    }
    Ok(out)
}

/// A facet re-expressed in its own affine span, scaled so that the induced
/// sphere `Span(F) ∩ S` becomes the unit sphere. Needs the span to meet the
/// open ball.
pub fn facet_in_own_sphere(p: &Polytope, facet: usize) -> Result<Polytope> {
    if p.form != Form::Euclidean {
        return Err(Error::InvalidArgument("Euclidean polytope expected".into()));
    }
    let f = p.facets()[facet].clone();
    let pts: Vec<Vec<f64>> = f.iter().map(|&i| p.vertices[i].clone()).collect();
    let flat = Flat::through(&pts, 1e-10);
    let origin = vec![0.0; p.dim];
    let center = flat.project(&origin);
    let dist = norm(&center);
    if dist >= 1.0 {
        return Err(Error::Precondition("facet span misses the open ball".into()));
    }
    let rho = (1.0 - dist * dist).sqrt();
    let local = Flat { base: center, basis: flat.basis.clone() };
    let coords: Vec<Vec<f64>> = pts.iter().map(|x| scale(&local.coords(x), 1.0 / rho)).collect();
    let lattice = sub_lattice(&p.lattice, &f)?;
    Polytope::from_lattice(Form::Euclidean, coords, lattice)
}

/// Face lattice of the face `f`, vertices renumbered in the order of `f`.
pub fn sub_lattice(l: &FaceLattice, f: &[usize]) -> Result<FaceLattice> {
    let r = l.rank_of(f).ok_or_else(|| Error::NotAFace(f.to_vec()))?;
    let idx = |v: usize| f.iter().position(|&u| u == v);
    let facets: Vec<Vec<usize>> = l
        .faces_of_rank(r - 1)
        .iter()
        .filter(|g| g.iter().all(|v| f.contains(v)))
        .map(|g| g.iter().map(|&v| idx(v).unwrap()).collect())
        .collect();
    FaceLattice::from_facets(f.len(), r as usize, &facets)
}
