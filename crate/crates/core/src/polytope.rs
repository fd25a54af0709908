//! Convex hulls, polarity, and the stack / truncate / pyramid operations.

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result, EPS_PRED};
use crate::exact::{self, Q};
use crate::lattice::FaceLattice;
use crate::linalg::{self, axpy, centroid, dot, norm, normalize, rows_to_matrix, scale, sub, Flat};
use crate::opt::{Cmp, LinearProgram, LpOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// Points in R^d.
    Euclidean,
    /// Generators of a pointed cone in R^{d+1}, coordinates `(x_0, ..., x_d)`.
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Float64,
    Rational,
}

/// A realized polytope. `facet_normals[i]` is the supporting inequality
/// `a . x <= b` of `lattice.facets()[i]` with `|a| = 1`; in cone form `b = 0`
/// and the inequality holds on every generator.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    pub form: Form,
    pub scalar: ScalarMode,
    pub vertices: Vec<Vec<f64>>,
    pub exact: Option<Vec<Vec<Q>>>,
    pub lattice: FaceLattice,
    pub facet_normals: Vec<(Vec<f64>, f64)>,
}

/// Pairs `(F, F_hat)` of a face and its associated face in the polar, listed
/// for every face of the original.
pub type FaceAssociation = Vec<(Vec<usize>, Vec<usize>)>;

/// Result of a hull computation: the polytope and, for each of its
/// vertices, the index of the input point it came from.
#[derive(Clone, Debug)]
pub struct HullResult {
    pub polytope: Polytope,
    pub kept: Vec<usize>,
}

fn affine_rank(points: &[Vec<f64>], idx: &[usize], tol: f64) -> usize {
    if idx.len() <= 1 {
        return 0;
    }
    let p0 = &points[idx[0]];
    let diffs: Vec<Vec<f64>> = idx[1..].iter().map(|&i| sub(&points[i], p0)).collect();
    linalg::rank(&rows_to_matrix(&diffs, p0.len()), tol)
}

/// Facet vertex sets and normalized inequalities of the full-dimensional
/// point set (already normalized to unit scale).
fn brute_force_facets(points: &[Vec<f64>], tol: f64) -> Vec<(Vec<usize>, Vec<f64>, f64)> {
    let n = points.len();
    let d = points[0].len();
    let mut found: Vec<(Vec<usize>, Vec<f64>, f64)> = Vec::new();
    for subset in (0..n).combinations(d) {
        if found.iter().any(|(f, _, _)| subset.iter().all(|i| f.binary_search(i).is_ok())) {
            continue;
        }
        let rows: Vec<Vec<f64>> = subset
            .iter()
            .map(|&i| {
                let mut r = points[i].clone();
                r.push(1.0);
                r
            })
            .collect();
        let ns = linalg::nullspace(&rows_to_matrix(&rows, d + 1), 1e-11);
        if ns.len() != 1 {
            continue;
        }
        let h = &ns[0];
        let na = norm(&h[..d]);
        if na < 1e-12 {
            continue;
        }
        let a: Vec<f64> = h[..d].iter().map(|x| x / na).collect();
        let b = -h[d] / na;
        let s: Vec<f64> = points.iter().map(|p| dot(&a, p) - b).collect();
        let above = s.iter().any(|&v| v > tol);
        let below = s.iter().any(|&v| v < -tol);
        if above && below {
            continue;
        }
        let (a, b) = if above { (scale(&a, -1.0), -b) } else { (a, b) };
        let verts: Vec<usize> = (0..n).filter(|&j| s[j].abs() <= tol).collect();
        if affine_rank(points, &verts, 1e-9) != d - 1 {
            continue;
        }
        found.push((verts, a, b));
    }
    found
}

fn brute_force_facets_exact(points: &[Vec<Q>]) -> Vec<(Vec<usize>, Vec<Q>, Q)> {
    let n = points.len();
    let d = points[0].len();
    let mut found: Vec<(Vec<usize>, Vec<Q>, Q)> = Vec::new();
    for subset in (0..n).combinations(d) {
        if found.iter().any(|(f, _, _)| subset.iter().all(|i| f.binary_search(i).is_ok())) {
            continue;
        }
        let rows: Vec<Vec<Q>> = subset
            .iter()
            .map(|&i| {
                let mut r = points[i].clone();
                r.push(exact::q(1));
                r
            })
            .collect();
        let ns = exact::nullspace(&rows, d + 1);
        if ns.len() != 1 {
            continue;
        }
        let h = &ns[0];
        let a: Vec<Q> = h[..d].to_vec();
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        let b = -h[d].clone();
        let s: Vec<Q> = points.iter().map(|p| exact::dot(&a, p) - &b).collect();
        let above = s.iter().any(|v| v.is_positive());
        let below = s.iter().any(|v| v.is_negative());
        if above && below {
            continue;
        }
        let (a, b) = if above { (a.iter().map(|x| -x).collect(), -b) } else { (a, b) };
        let verts: Vec<usize> = (0..n).filter(|&j| s[j].is_zero()).collect();
        found.push((verts, a, b));
    }
    found
}

/// Indices whose closure (intersection of containing facets) is the point
/// itself.
fn extreme_points(n: usize, facets: &[Vec<usize>]) -> Vec<usize> {
    (0..n)
        .filter(|&p| {
            let mut acc: Option<Vec<usize>> = None;
            for f in facets.iter().filter(|f| f.binary_search(&p).is_ok()) {
                acc = Some(match acc {
                    None => f.clone(),
                    Some(a) => a.into_iter().filter(|x| f.binary_search(x).is_ok()).collect(),
                });
            }
            acc.map(|a| a == vec![p]).unwrap_or(false)
        })
        .collect()
}

fn euclidean_hull(points: &[Vec<f64>], tol: f64) -> Result<HullResult> {
    if points.is_empty() {
        return Err(Error::LowerDimensional { rank: 0, expected: 1 });
    }
    let d = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: p.len() });
    }
    let c = centroid(points);
    let s = points.iter().map(|p| norm(&sub(p, &c))).fold(0.0, f64::max);
    if s == 0.0 {
        return Err(Error::LowerDimensional { rank: 0, expected: d });
    }
    let normed: Vec<Vec<f64>> = points.iter().map(|p| scale(&sub(p, &c), 1.0 / s)).collect();
    let all: Vec<usize> = (0..points.len()).collect();
    let r = affine_rank(&normed, &all, 1e-10);
    if r < d {
        return Err(Error::LowerDimensional { rank: r, expected: d });
    }
    // drop later duplicates
    let mut distinct: Vec<usize> = Vec::new();
    for i in 0..normed.len() {
        if !distinct.iter().any(|&j| norm(&sub(&normed[i], &normed[j])) <= tol) {
            distinct.push(i);
        }
    }
    let mut kept = distinct;
    loop {
        let pts: Vec<Vec<f64>> = kept.iter().map(|&i| normed[i].clone()).collect();
        let facets = brute_force_facets(&pts, tol);
        let sets: Vec<Vec<usize>> = facets.iter().map(|f| f.0.clone()).collect();
        let ext = extreme_points(pts.len(), &sets);
        if ext.len() < pts.len() {
            kept = ext.iter().map(|&i| kept[i]).collect();
            continue;
        }
        let lattice = FaceLattice::from_facets(pts.len(), d, &sets)?;
        let facet_normals = lattice
            .facets()
            .iter()
            .map(|f| {
                let (_, a, b) = facets.iter().find(|g| &g.0 == f).expect("facet present");
                (a.clone(), b * s + dot(a, &c))
            })
            .collect();
        let polytope = Polytope {
            dim: d,
            form: Form::Euclidean,
            scalar: ScalarMode::Float64,
            vertices: kept.iter().map(|&i| points[i].clone()).collect(),
            exact: None,
            lattice,
            facet_normals,
        };
        return Ok(HullResult { polytope, kept });
    }
}

/// A unit functional strictly positive on every generator, maximizing the
/// worst normalized margin. `None` when the cone is not pointed.
pub fn pointing_functional(generators: &[Vec<f64>], tol: f64) -> Option<Vec<f64>> {
    let n = generators[0].len();
    let unit: Vec<Vec<f64>> = generators.iter().map(|g| normalize(g)).collect();
    let mut lp = LinearProgram::new(
        std::iter::repeat(0.0).take(n).chain(std::iter::once(1.0)).collect(),
        std::iter::repeat((-1.0, 1.0)).take(n).chain(std::iter::once((-1.0, 1.0))).collect(),
    );
    for g in &unit {
        let mut row = g.clone();
        row.push(-1.0);
        lp.row(row, Cmp::Ge, 0.0);
    }
    match lp.maximize() {
        LpOutcome::Optimal { value, x } if value > tol => Some(normalize(&x[..n])),
        _ => None,
    }
}

fn cone_hull(generators: &[Vec<f64>], tol: f64) -> Result<HullResult> {
    let n = generators[0].len();
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: g.len() });
    }
    if generators.iter().any(|g| norm(g) == 0.0) {
        return Err(Error::ZeroVector);
    }
    let c = pointing_functional(generators, 1e-9).ok_or(Error::NotPointed)?;
    let basis = linalg::orthogonal_complement(&[c.clone()], n);
    let sliced: Vec<Vec<f64>> = generators
        .iter()
        .map(|g| {
            let gh = scale(g, 1.0 / dot(&c, g));
            basis.iter().map(|b| dot(b, &gh)).collect()
        })
        .collect();
    let inner = euclidean_hull(&sliced, tol).map_err(|e| match e {
        Error::LowerDimensional { rank, expected } => Error::LowerDimensional { rank: rank + 1, expected: expected + 1 },
        e => e,
    })?;
    let facet_normals = inner
        .polytope
        .facet_normals
        .iter()
        .map(|(a, b)| {
            let mut nrm = scale(&c, -b);
            for (bi, ai) in basis.iter().zip(a) {
                nrm = axpy(&nrm, *ai, bi);
            }
            (normalize(&nrm), 0.0)
        })
        .collect();
    let polytope = Polytope {
        dim: n - 1,
        form: Form::Cone,
        scalar: ScalarMode::Float64,
        vertices: inner.kept.iter().map(|&i| generators[i].clone()).collect(),
        exact: None,
        lattice: inner.polytope.lattice,
        facet_normals,
    };
    Ok(HullResult { polytope, kept: inner.kept })
}

/// Convex hull (Euclidean form) or conical hull (cone form) of the points.
/// Non-extreme points are dropped; the remaining ones keep their order.
pub fn hull(points: &[Vec<f64>], form: Form) -> Result<Polytope> {
    hull_with_tol(points, form, EPS_PRED).map(|h| h.polytope)
}

pub fn hull_with_tol(points: &[Vec<f64>], form: Form, tol: f64) -> Result<HullResult> {
    match form {
        Form::Euclidean => euclidean_hull(points, tol),
        Form::Cone => cone_hull(points, tol),
    }
}

/// Exact convex hull of rational points.
pub fn hull_exact(points: &[Vec<Q>]) -> Result<HullResult> {
    if points.is_empty() {
        return Err(Error::LowerDimensional { rank: 0, expected: 1 });
    }
    let d = points[0].len();
    let diffs: Vec<Vec<Q>> = points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(x, y)| x - y).collect()).collect();
    let r = exact::rank(&diffs);
    if r < d {
        return Err(Error::LowerDimensional { rank: r, expected: d });
    }
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        if !kept.iter().any(|&j| points[j] == points[i]) {
            kept.push(i);
        }
    }
    loop {
        let pts: Vec<Vec<Q>> = kept.iter().map(|&i| points[i].clone()).collect();
        let facets = brute_force_facets_exact(&pts);
        let sets: Vec<Vec<usize>> = facets.iter().map(|f| f.0.clone()).collect();
        let ext = extreme_points(pts.len(), &sets);
        if ext.len() < pts.len() {
            kept = ext.iter().map(|&i| kept[i]).collect();
            continue;
        }
        let lattice = FaceLattice::from_facets(pts.len(), d, &sets)?;
        let facet_normals = lattice
            .facets()
            .iter()
            .map(|f| {
                let (_, a, b) = facets.iter().find(|g| &g.0 == f).expect("facet present");
                let af: Vec<f64> = a.iter().map(exact::to_f64).collect();
                let na = norm(&af);
                (scale(&af, 1.0 / na), exact::to_f64(b) / na)
            })
            .collect();
        let polytope = Polytope {
            dim: d,
            form: Form::Euclidean,
            scalar: ScalarMode::Rational,
            vertices: pts.iter().map(|p| p.iter().map(exact::to_f64).collect()).collect(),
            exact: Some(pts),
            lattice,
            facet_normals,
        };
        return Ok(HullResult { polytope, kept });
    }
}

/// Lorentz metric applied to a vector: `J x`.
pub fn flip_time(x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    y[0] = -y[0];
    y
}

impl Polytope {
    /// Assemble a polytope from coordinates and a lattice without re-running
    /// the hull. Facet inequalities are recomputed from the coordinates.
    pub fn from_lattice(form: Form, vertices: Vec<Vec<f64>>, lattice: FaceLattice) -> Result<Polytope> {
        let dim = lattice.dim();
        let facet_normals = lattice
            .facets()
            .iter()
            .map(|f| facet_inequality(form, &vertices, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polytope { dim, form, scalar: ScalarMode::Float64, vertices, exact: None, lattice, facet_normals })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        self.lattice.facets()
    }

    /// Vertices as homogeneous vectors `(1, p)` (Euclidean) or the
    /// generators themselves (cone).
    pub fn homogeneous_vertices(&self) -> Vec<Vec<f64>> {
        match self.form {
            Form::Euclidean => crate::lorentz::homogenize(&self.vertices),
            Form::Cone => self.vertices.clone(),
        }
    }

    /// Facet normals `n` of the homogenized cone, `n . x <= 0` on the cone.
    pub fn cone_facet_normals(&self) -> Vec<Vec<f64>> {
        match self.form {
            Form::Euclidean => self
                .facet_normals
                .iter()
                .map(|(a, b)| {
                    let mut n = vec![-b];
                    n.extend_from_slice(a);
                    n
                })
                .collect(),
            Form::Cone => self.facet_normals.iter().map(|(a, _)| a.clone()).collect(),
        }
    }

    /// Euclidean coordinates, dehomogenizing a cone when every generator has
    /// positive `x_0`.
    pub fn euclidean_vertices(&self, tol: f64) -> Option<Vec<Vec<f64>>> {
        match self.form {
            Form::Euclidean => Some(self.vertices.clone()),
            Form::Cone => crate::lorentz::dehomogenize(&self.vertices, tol).ok(),
        }
    }

    /// The same polytope in Euclidean form if possible.
    pub fn to_euclidean(&self, tol: f64) -> Result<Polytope> {
        match self.form {
            Form::Euclidean => Ok(self.clone()),
            Form::Cone => {
                let v = crate::lorentz::dehomogenize(&self.vertices, tol)?;
                Polytope::from_lattice(Form::Euclidean, v, self.lattice.clone())
            }
        }
    }

    /// The homogenized cone over a Euclidean polytope.
    pub fn to_cone(&self) -> Polytope {
        match self.form {
            Form::Cone => self.clone(),
            Form::Euclidean => Polytope {
                dim: self.dim,
                form: Form::Cone,
                scalar: self.scalar,
                vertices: self.homogeneous_vertices(),
                exact: None,
                lattice: self.lattice.clone(),
                facet_normals: self.cone_facet_normals().into_iter().map(|n| (normalize(&n), 0.0)).collect(),
            },
        }
    }

    /// Polar dual with the face association `F -> F_hat`. Vertex `i` of the
    /// polar corresponds to facet `i` of `self`. A Euclidean polytope with
    /// the origin in its interior polarizes to a Euclidean polytope
    /// (`{y : y . x <= 1}`); otherwise the result is in cone form with
    /// respect to the Lorentzian product.
    pub fn polar_dual(&self) -> Result<(Polytope, FaceAssociation)> {
        let lattice = self.lattice.dual();
        let assoc: FaceAssociation = self
            .lattice
            .all_faces()
            .map(|(_, f)| (f.clone(), self.lattice.associated_face(f)))
            .collect();
        // dual facet for vertex v is facets_containing(v); index normals accordingly
        let dual_facet_of: Vec<Vec<usize>> =
            (0..self.n_vertices()).map(|v| self.lattice.facets_containing(&[v])).collect();
        let order: Vec<usize> = lattice
            .facets()
            .iter()
            .map(|f| dual_facet_of.iter().position(|g| g == f).expect("dual facet"))
            .collect();

        let euclidean = self.form == Form::Euclidean && self.facet_normals.iter().all(|(_, b)| *b > EPS_PRED);
        let polar = if euclidean {
            let vertices: Vec<Vec<f64>> = self.facet_normals.iter().map(|(a, b)| scale(a, 1.0 / b)).collect();
            let facet_normals = order
                .iter()
                .map(|&v| {
                    let p = &self.vertices[v];
                    let np = norm(p);
                    (scale(p, 1.0 / np), 1.0 / np)
                })
                .collect();
            Polytope {
                dim: self.dim,
                form: Form::Euclidean,
                scalar: ScalarMode::Float64,
                vertices,
                exact: None,
                lattice,
                facet_normals,
            }
        } else {
            let gens = self.homogeneous_vertices();
            let vertices: Vec<Vec<f64>> = self.cone_facet_normals().iter().map(|n| normalize(&flip_time(n))).collect();
            let facet_normals = order.iter().map(|&v| (normalize(&flip_time(&gens[v])), 0.0)).collect();
            Polytope { dim: self.dim, form: Form::Cone, scalar: ScalarMode::Float64, vertices, exact: None, lattice, facet_normals }
        };
        Ok((polar, assoc))
    }

    /// Combinatorial face figure `P/F`.
    pub fn face_figure(&self, face: &[usize]) -> Result<FaceLattice> {
        self.lattice.interval_above(face)
    }

    /// Vertex barycenter of the face and its affine span.
    pub fn face_geometry(&self, face: &[usize]) -> Result<(Vec<f64>, Flat)> {
        if face.is_empty() {
            return Err(Error::InvalidArgument("empty face".into()));
        }
        if !self.lattice.is_face(face) {
            return Err(Error::NotAFace(face.to_vec()));
        }
        let pts: Vec<Vec<f64>> = face.iter().map(|&i| self.vertices[i].clone()).collect();
        Ok((centroid(&pts), Flat::through(&pts, 1e-10)))
    }

    fn require_euclidean(&self) -> Result<()> {
        if self.form != Form::Euclidean {
            return Err(Error::InvalidArgument("operation needs a Euclidean polytope".into()));
        }
        Ok(())
    }

    /// Stack a new vertex on the simplicial facet with index `facet`. With
    /// `apex = None` the apex is placed beyond the facet centroid at half the
    /// distance at which it would cross an adjacent facet hyperplane.
    pub fn stack(&self, facet: usize, apex: Option<Vec<f64>>) -> Result<Polytope> {
        self.require_euclidean()?;
        let target = self.lattice.stacked(facet)?;
        let f = &self.facets()[facet];
        let (a_f, _) = &self.facet_normals[facet];
        let apex = match apex {
            Some(p) => {
                if p.len() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, got: p.len() });
                }
                p
            }
            None => {
                let c = centroid(&f.iter().map(|&i| self.vertices[i].clone()).collect::<Vec<_>>());
                let mut t = f64::INFINITY;
                for (g, (a_g, b_g)) in self.facets().iter().zip(&self.facet_normals) {
                    let shared = g.iter().filter(|v| f.contains(v)).count();
                    if g == f || shared + 1 != self.dim {
                        continue;
                    }
                    let rate = dot(a_g, a_f);
                    if rate > 1e-15 {
                        t = t.min((b_g - dot(a_g, &c)) / rate);
                    }
                }
                if !t.is_finite() {
                    let diam = self.vertices.iter().map(|v| norm(&sub(v, &c))).fold(0.0, f64::max);
                    t = 2.0 * diam;
                }
                axpy(&c, 0.5 * t, a_f)
            }
        };
        let mut pts = self.vertices.clone();
        pts.push(apex);
        let out = euclidean_hull(&pts, EPS_PRED)?;
        if out.kept.len() != pts.len() || out.polytope.lattice != target {
            return Err(Error::NotAStacking);
        }
        Ok(out.polytope)
    }

    /// Cut off the simple vertex `v`; the new vertices sit at fraction
    /// `depth` along the incident edges and are appended in neighbor order.
    pub fn truncate(&self, v: usize, depth: f64) -> Result<Polytope> {
        self.require_euclidean()?;
        if !(depth > 0.0 && depth < 1.0) {
            return Err(Error::InvalidArgument(format!("depth {depth} outside (0,1)")));
        }
        if v >= self.n_vertices() {
            return Err(Error::InvalidArgument(format!("no vertex {v}")));
        }
        let (target, nbrs) = self.lattice.truncated(v)?;
        let p = &self.vertices[v];
        let mut pts: Vec<Vec<f64>> =
            self.vertices.iter().enumerate().filter(|(i, _)| *i != v).map(|(_, x)| x.clone()).collect();
        for &w in &nbrs {
            pts.push(axpy(p, depth, &sub(&self.vertices[w], p)));
        }
        let out = euclidean_hull(&pts, EPS_PRED)?;
        if out.kept.len() != pts.len() || out.polytope.lattice != target {
            return Err(Error::LatticeMismatch("truncation changed the combinatorial type".into()));
        }
        Ok(out.polytope)
    }

    /// Pyramid with apex at height 1 over the vertex centroid.
    pub fn pyramid(&self) -> Result<Polytope> {
        self.require_euclidean()?;
        let target = self.lattice.pyramid();
        let mut pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.push(0.0);
                w
            })
            .collect();
        let mut apex = centroid(&self.vertices);
        apex.push(1.0);
        pts.push(apex);
        let out = euclidean_hull(&pts, EPS_PRED)?;
        if out.polytope.lattice != target {
            return Err(Error::LatticeMismatch("pyramid".into()));
        }
        Ok(out.polytope)
    }

    /// Image under `x -> M x` on homogeneous coordinates, returned in the
    /// same form (Euclidean results are dehomogenized).
    pub fn map_projective(&self, m: &nalgebra::DMatrix<f64>) -> Result<Polytope> {
        let imgs: Vec<Vec<f64>> = self.homogeneous_vertices().iter().map(|v| linalg::mat_vec(m, v)).collect();
        let (form, verts) = match self.form {
            Form::Cone => (Form::Cone, imgs),
            Form::Euclidean => (Form::Euclidean, crate::lorentz::dehomogenize(&imgs, 1e-12)?),
        };
        Polytope::from_lattice(form, verts, self.lattice.clone())
    }

    /// Re-run the hull on the vertices and compare lattices exactly.
    pub fn validate(&self) -> Result<()> {
        let h = hull_with_tol(&self.vertices, self.form, EPS_PRED)?;
        if h.kept.len() != self.n_vertices() || h.polytope.lattice != self.lattice {
            return Err(Error::LatticeMismatch("stored lattice differs from the hull".into()));
        }
        Ok(())
    }
}

/// Supporting inequality of the facet with the given vertex set, oriented so
/// that every vertex satisfies it.
fn facet_inequality(form: Form, vertices: &[Vec<f64>], facet: &[usize]) -> Result<(Vec<f64>, f64)> {
    let n = vertices[0].len();
    let rows: Vec<Vec<f64>> = facet
        .iter()
        .map(|&i| {
            let mut r = vertices[i].clone();
            if form == Form::Euclidean {
                r.push(1.0);
            }
            r
        })
        .collect();
    let cols = rows[0].len();
    let ns = linalg::nullspace(&rows_to_matrix(&rows, cols), 1e-9);
    if ns.len() != 1 {
        return Err(Error::LatticeMismatch(format!("facet {facet:?} does not span a hyperplane")));
    }
    let h = &ns[0];
    let (mut a, mut b) = match form {
        Form::Euclidean => (h[..n].to_vec(), -h[n]),
        Form::Cone => (h.clone(), 0.0),
    };
    let na = norm(&a);
    a = scale(&a, 1.0 / na);
    b /= na;
    let worst = vertices.iter().map(|v| dot(&a, v) - b).fold(f64::NEG_INFINITY, f64::max);
    let best = vertices.iter().map(|v| dot(&a, v) - b).fold(f64::INFINITY, f64::min);
    if worst > -best {
        a = scale(&a, -1.0);
        b = -b;
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cube_points() -> Vec<Vec<f64>> {
        (0..8)
            .map(|v| (0..3).map(|k| if (v >> k) & 1 == 1 { 1.0 } else { -1.0 }).collect())
            .collect()
    }

    #[test]
    fn simplex_and_cube_hulls() {
        let s = hull(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], Form::Euclidean)
            .unwrap();
        assert_eq!(s.lattice.f_vector(), vec![4, 6, 4]);
        let c = hull(&cube_points(), Form::Euclidean).unwrap();
        assert_eq!(c.lattice.f_vector(), vec![8, 12, 6]);
    }

    #[test]
    fn interior_points_are_dropped() {
        let mut pts = cube_points();
        pts.insert(3, vec![0.0, 0.0, 0.0]);
        pts.push(vec![1.0, 0.0, 0.0]);
        let h = hull_with_tol(&pts, Form::Euclidean, 1e-9).unwrap();
        assert_eq!(h.kept, vec![0, 1, 2, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn lower_dimensional_reports_rank() {
        let e = hull(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]], Form::Euclidean);
        assert_eq!(e.unwrap_err(), Error::LowerDimensional { rank: 2, expected: 3 });
    }

    #[test]
    fn cube_polar_is_octahedron() {
        let c = hull(&cube_points(), Form::Euclidean).unwrap();
        let (o, assoc) = c.polar_dual().unwrap();
        assert_eq!(o.form, Form::Euclidean);
        assert_eq!(o.lattice.f_vector(), vec![6, 12, 8]);
        o.validate().unwrap();
        for (f, fh) in &assoc {
            let r = c.lattice.rank_of(f).unwrap();
            assert_eq!(o.lattice.rank_of(fh).unwrap(), 2 - r);
        }
        let (back, _) = o.polar_dual().unwrap();
        assert_eq!(back.lattice, c.lattice);
        for (p, q) in back.vertices.iter().zip(&c.vertices) {
            assert!(norm(&sub(p, q)) < 1e-12);
        }
    }

    #[test]
    fn off_center_polar_goes_to_cone_form() {
        let pts: Vec<Vec<f64>> = cube_points().iter().map(|p| p.iter().map(|x| x + 3.0).collect()).collect();
        let c = hull(&pts, Form::Euclidean).unwrap();
        let (p, _) = c.polar_dual().unwrap();
        assert_eq!(p.form, Form::Cone);
        p.validate().unwrap();
    }

    #[test]
    fn truncate_cube_vertex() {
        let c = hull(&cube_points(), Form::Euclidean).unwrap();
        let t = c.truncate(0, 0.3).unwrap();
        assert_eq!(t.n_vertices(), 10);
        assert_eq!(t.facets().len(), 7);
    }

    #[test]
    fn stack_auto_apex() {
        let s = hull(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], Form::Euclidean)
            .unwrap();
        let t = s.stack(0, None).unwrap();
        assert_eq!(t.lattice.f_vector(), vec![5, 9, 6]);
    }

    #[test]
    fn exact_hull_matches_float_on_cube() {
        let pts: Vec<Vec<Q>> =
            cube_points().iter().map(|p| p.iter().map(|&x| exact::q(x as i64)).collect()).collect();
        let h = hull_exact(&pts).unwrap();
        assert_eq!(h.polytope.lattice, hull(&cube_points(), Form::Euclidean).unwrap().lattice);
    }
}
