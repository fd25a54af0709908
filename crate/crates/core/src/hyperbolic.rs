//! Dihedral angles in the Klein model and the angle-sum certificates for
//! stacked 4-polytopes.

use std::f64::consts::PI;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::stacked_analysis;
use crate::constructions::twice_stacked_tree;
use crate::error::{Error, Result, EPS_PRED};
use crate::exact::{self, Q};
use crate::linalg::{centroid, dot, normalize, scale};
use crate::lorentz::lorentz_dot;
use crate::polytope::{hull, Form, Polytope};

use crate::scribability::{classify_ranks, verdict, Mode, Verdict};

/// Angle between two facet hyperplanes. Planes that do not meet inside the
/// ball have no hyperbolic angle; their hyperbolic distance is reported.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dihedral {
    Angle(f64),
    Ultraparallel { distance: f64 },
}

impl Dihedral {
    pub fn angle(self) -> Option<f64> {
        match self {
            Dihedral::Angle(a) => Some(a),
            Dihedral::Ultraparallel { .. } => None,
        }
    }
}

/// Interior angle between the half-spaces `<e1, x> <= 0` and `<e2, x> <= 0`
/// for space-like `e1`, `e2` of any length.
pub fn angle_between(e1: &[f64], e2: &[f64], tol: f64) -> Dihedral {
    let c = -lorentz_dot(e1, e2) / (lorentz_dot(e1, e1) * lorentz_dot(e2, e2)).sqrt();
    if c.abs() <= 1.0 + tol {
        Dihedral::Angle(c.clamp(-1.0, 1.0).acos())
    } else {
        Dihedral::Ultraparallel { distance: c.abs().acosh() }
    }
}

/// Outward Lorentz normal of a facet from exact vertex coordinates.
fn exact_normal(pts: &[Vec<Q>], facet: &[usize]) -> Vec<Q> {
    let rows: Vec<Vec<Q>> = facet
        .iter()
        .map(|&v| std::iter::once(exact::q(1)).chain(pts[v].iter().cloned()).collect())
        .collect();
    let mut n = exact::nullspace(&rows, pts[0].len() + 1).swap_remove(0);
    // orient against a vertex off the facet
    let off = (0..pts.len()).find(|v| !facet.contains(v)).expect("vertex off the facet");
    let h: Vec<Q> = std::iter::once(exact::q(1)).chain(pts[off].iter().cloned()).collect();
    if exact::sign(&exact::dot(&n, &h)) > 0 {
        n.iter_mut().for_each(|x| *x = -x.clone());
    }
    n[0] = -n[0].clone();
    n
}

fn lorentz_dot_exact(x: &[Q], y: &[Q]) -> Q {
    exact::dot(&x[1..], &y[1..]) - &x[0] * &y[0]
}

/// Angle from exact normals: the cosine is known as an exact square, so
/// tangent and orthogonal configurations come out exactly.
fn angle_between_exact(e1: &[Q], e2: &[Q]) -> Result<Dihedral> {
    let n11 = lorentz_dot_exact(e1, e1);
    let n22 = lorentz_dot_exact(e2, e2);
    if exact::sign(&n11) <= 0 || exact::sign(&n22) <= 0 {
        return Err(Error::NotSpaceLike);
    }
    let num = -lorentz_dot_exact(e1, e2);
    let c2 = &num * &num / (n11 * n22);
    let one = exact::q(1);
    if c2 > one {
        return Ok(Dihedral::Ultraparallel { distance: exact::to_f64(&c2).sqrt().acosh() });
    }
    let sin = exact::to_f64(&(one - c2)).sqrt().asin();
    Ok(Dihedral::Angle(if exact::sign(&num) >= 0 { sin } else { PI - sin }))
}

fn raw_normal(p: &Polytope, facet: usize) -> Result<Vec<f64>> {
    let n = p.cone_facet_normals().into_iter().nth(facet).ok_or_else(|| Error::InvalidArgument(format!("no facet {facet}")))?;
    let mut e = n;
    e[0] = -e[0];
    let ee = lorentz_dot(&e, &e);
    if ee <= EPS_PRED * dot(&e, &e) {
        return Err(Error::NotSpaceLike);
    }
    let bary = centroid(&p.homogeneous_vertices());
    if lorentz_dot(&e, &bary) > 0.0 {
        e = scale(&e, -1.0);
    }
    Ok(e)
}

/// Angle between two facets, exact when the polytope carries rational
/// coordinates.
fn facet_pair_angle(p: &Polytope, f1: usize, f2: usize) -> Result<Dihedral> {
    match &p.exact {
        Some(pts) if p.form == Form::Euclidean => {
            let e1 = exact_normal(pts, &p.facets()[f1]);
            let e2 = exact_normal(pts, &p.facets()[f2]);
            angle_between_exact(&e1, &e2)
        }
        _ => Ok(angle_between(&raw_normal(p, f1)?, &raw_normal(p, f2)?, 1e-12)),
    }
}

/// Unit space-like outward normal of the facet in Lorentz coordinates:
/// `<e, v> <= 0` on every homogenized vertex.
pub fn facet_normal(p: &Polytope, facet: usize) -> Result<Vec<f64>> {
    let e = raw_normal(p, facet)?;
    Ok(scale(&e, 1.0 / lorentz_dot(&e, &e).sqrt()))
}

/// Dihedral angle of `p` at the ridge `ridge`.
pub fn dihedral_angle(p: &Polytope, ridge: &[usize]) -> Result<Dihedral> {
    let r = p.lattice.rank_of(ridge).ok_or_else(|| Error::NotAFace(ridge.to_vec()))?;
    if r != p.dim as isize - 2 {
        return Err(Error::InvalidArgument(format!("{ridge:?} is not a ridge")));
    }
    let fs = p.lattice.facets_containing(ridge);
    facet_pair_angle(p, fs[0], fs[1])
}

/// Angles of a simplex at all its ridges, keyed by the ridge vertex set.
pub fn simplex_dihedrals(s: &Polytope) -> Result<Vec<(Vec<usize>, Dihedral)>> {
    if s.n_vertices() != s.dim + 1 {
        return Err(Error::InvalidArgument("not a simplex".into()));
    }
    let mut out = Vec::new();
    for (i, j) in (0..s.facets().len()).tuple_combinations() {
        let mut ridge: Vec<usize> = s.facets()[i].iter().copied().filter(|v| s.facets()[j].contains(v)).collect();
        ridge.sort_unstable();
        out.push((ridge, facet_pair_angle(s, i, j)?));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Euclidean,
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AngleSum {
    pub sum: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Sum of the dihedral angles of an m-simplex against the bound
/// `C(m, 2) pi`.
pub fn simplex_angle_sum(s: &Polytope, geometry: Geometry, tol: f64) -> Result<AngleSum> {
    let m = s.dim;
    if s.n_vertices() != m + 1 || s.facets().len() != m + 1 {
        return Err(Error::InvalidArgument("degenerate simplex".into()));
    }
    let sum: f64 = match geometry {
        Geometry::Euclidean => {
            let ns: Vec<Vec<f64>> = s.facet_normals.iter().map(|(a, _)| normalize(a)).collect();
            ns.iter().tuple_combinations().map(|(a, b)| (-dot(a, b)).clamp(-1.0, 1.0).acos()).sum()
        }
        Geometry::Hyperbolic => {
            let mut total = 0.0;
            for (_, d) in simplex_dihedrals(s)? {
                total += d.angle().ok_or_else(|| Error::Precondition("facet planes meet outside the ball".into()))?;
            }
            total
        }
    };
    let bound = (m * (m - 1) / 2) as f64 * PI;
    Ok(AngleSum { sum, bound, holds: sum <= bound + tol })
}

/// Sum of the hyperbolic dihedral angles at the ridges of a simplex that lie
/// in the facet `facet`, for a simplex whose vertices strongly avoid and
/// whose (d-3)-faces strongly cut the sphere.
pub fn facet_ridge_angle_sum(s: &Polytope, facet: usize, tol: f64) -> Result<AngleSum> {
    let d = s.dim;
    if d < 3 || s.n_vertices() != d + 1 {
        return Err(Error::InvalidArgument("need a simplex of dimension at least 3".into()));
    }
    if verdict(s, 0, d - 3, Mode::Strong, EPS_PRED)? != Verdict::True {
        return Err(Error::Precondition(format!("simplex is not (0,{})-scribed", d - 3)));
    }
    let f = s.facets().get(facet).ok_or_else(|| Error::InvalidArgument(format!("no facet {facet}")))?.clone();
    let mut sum = 0.0;
    for (ridge, ang) in simplex_dihedrals(s)? {
        if ridge.iter().all(|v| f.contains(v)) {
            sum += ang.angle().ok_or_else(|| Error::Precondition("ridge planes meet outside the ball".into()))?;
        }
    }
    Ok(AngleSum { sum, bound: PI, holds: sum >= PI - tol })
}

/// Rejection sampler for (0, d-3)-scribed d-simplices with vertices at
/// radius in `[1, 1.5]`.
pub fn sample_scribed_simplex(d: usize, rng: &mut ChaCha8Rng, max_tries: usize) -> Option<Polytope> {
    for _ in 0..max_tries {
        let pts: Vec<Vec<f64>> = (0..=d)
            .map(|_| {
                let dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                scale(&normalize(&dir), rng.gen_range(1.0..1.5))
            })
            .collect();
        let Ok(s) = hull(&pts, Form::Euclidean) else { continue };
        if s.n_vertices() != d + 1 {
            continue;
        }
        if verdict(&s, 0, d - 3, Mode::Strong, EPS_PRED) == Ok(Verdict::True) {
            return Some(s);
        }
    }
    None
}

/// Angle bookkeeping for a realization of the twice-stacked 4-simplex.
#[derive(Clone, Debug)]
pub struct AngleAudit {
    /// Vertices that do not strongly avoid the sphere.
    pub vertex_violations: Vec<usize>,
    /// Edges that do not strongly cut the sphere.
    pub edge_violations: Vec<Vec<usize>>,
    /// Dihedral angle of the polytope at each ridge of the interior
    /// simplices, summed over the simplices of the stacked triangulation.
    pub ridge_angles: Vec<(Vec<usize>, Option<f64>)>,
    /// Ridges with angle at least `pi - tol`.
    pub flagged: Vec<Vec<usize>>,
    pub total: Option<f64>,
    /// For each exterior simplex: the facet it shares with an interior
    /// simplex and its angle sum at the ridges of that facet.
    pub facet_sums: Vec<(Vec<usize>, Option<f64>)>,
    /// For each interior simplex: its angle sum at its own ridges.
    pub interior_sums: Vec<(Vec<usize>, Option<f64>)>,
}

impl AngleAudit {
    /// Whether the audit found either a reflex ridge or a failed constraint.
    pub fn conclusive(&self) -> bool {
        !self.flagged.is_empty() || !self.vertex_violations.is_empty() || !self.edge_violations.is_empty()
    }
}

pub fn stack01_audit(p: &Polytope, tol: f64) -> Result<AngleAudit> {
    if p.dim != 4 || p.form != Form::Euclidean {
        return Err(Error::InvalidArgument("audit needs a Euclidean 4-polytope".into()));
    }
    let fixture = crate::combinatorics::stack_plan(&twice_stacked_tree(4), 4)?.lattice()?;
    if !p.lattice.is_isomorphic(&fixture) {
        return Err(Error::LatticeMismatch("not the twice-stacked 4-simplex".into()));
    }
    let analysis = stacked_analysis(&p.lattice)?;
    let records = classify_ranks(p, &[0, 1], tol);
    let mut vertex_violations = Vec::new();
    let mut edge_violations = Vec::new();
    for r in &records {
        let ok = match &r.class {
            Ok(c) => if r.rank == 0 { c.strong_avoid } else { c.strong_cut },
            Err(_) => false,
        };
        if !ok {
            if r.rank == 0 {
                vertex_violations.push(r.face[0]);
            } else {
                edge_violations.push(r.face.clone());
            }
        }
    }

    let simplices = &analysis.simplices;
    let facet_set = p.lattice.facet_set();
    let is_boundary = |f: &Vec<usize>| facet_set.contains(f);
    let simplex_facets = |s: &Vec<usize>| -> Vec<Vec<usize>> {
        (0..s.len()).map(|i| s.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &v)| v).collect()).collect()
    };
    let interior: Vec<usize> =
        (0..simplices.len()).filter(|&i| !simplex_facets(&simplices[i]).iter().any(|f| is_boundary(f))).collect();
    let mut ridges: Vec<Vec<usize>> = interior.iter().flat_map(|&i| simplices[i].iter().copied().combinations(3)).collect();
    ridges.sort();
    ridges.dedup();

    let angles: Vec<Option<Vec<(Vec<usize>, Dihedral)>>> = simplices
        .par_iter()
        .map(|s| {
            let pts: Vec<Vec<f64>> = s.iter().map(|&v| p.vertices[v].clone()).collect();
            let sp = hull(&pts, Form::Euclidean).ok()?;
            let local = simplex_dihedrals(&sp).ok()?;
            Some(local.into_iter().map(|(r, a)| (r.iter().map(|&i| s[i]).sorted().collect(), a)).collect())
        })
        .collect();
    let angle_in = |si: usize, ridge: &[usize]| -> Option<Option<f64>> {
        let list = angles[si].as_ref()?;
        list.iter().find(|(r, _)| r == ridge).map(|(_, a)| a.angle())
    };
    let ridge_angles: Vec<(Vec<usize>, Option<f64>)> = ridges
        .iter()
        .map(|r| {
            let mut total = Some(0.0);
            for (si, s) in simplices.iter().enumerate() {
                if r.iter().all(|v| s.contains(v)) {
                    total = match (total, angle_in(si, r).flatten()) {
                        (Some(t), Some(a)) => Some(t + a),
                        _ => None,
                    };
                }
            }
            (r.clone(), total)
        })
        .collect();
    let flagged = ridge_angles.iter().filter(|(_, a)| a.is_some_and(|a| a >= PI - tol)).map(|(r, _)| r.clone()).collect();
    let total = ridge_angles.iter().try_fold(0.0, |acc, (_, a)| a.map(|a| acc + a));

    let mut facet_sums = Vec::new();
    for (si, s) in simplices.iter().enumerate() {
        if interior.contains(&si) {
            continue;
        }
        for f in simplex_facets(s) {
            let shared = interior.iter().any(|&ii| f.iter().all(|v| simplices[ii].contains(v)));
            if shared {
                let sum = f
                    .iter()
                    .copied()
                    .combinations(3)
                    .try_fold(0.0, |acc, r| angle_in(si, &r).flatten().map(|a| acc + a));
                facet_sums.push((f.clone(), sum));
            }
        }
    }
    let interior_sums = interior
        .iter()
        .map(|&si| {
            let s = &simplices[si];
            let sum = s.iter().copied().combinations(3).try_fold(0.0, |acc, r| angle_in(si, &r).flatten().map(|a| acc + a));
            (s.clone(), sum)
        })
        .collect();
    Ok(AngleAudit { vertex_violations, edge_violations, ridge_angles, flagged, total, facet_sums, interior_sums })
}

/// Random seedable source for samplers.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{named_fixture, ridge_scribed_stacked};
    use crate::combinatorics::StackingTree;
    use crate::lorentz::hyperbolic_translation;

    #[test]
    fn orthogonal_planes() {
        let e1 = vec![0.0, 1.0, 0.0];
        let e2 = vec![0.0, 0.0, 1.0];
        assert!((angle_between(&e1, &e2, 0.0).angle().unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn edge_tangent_tetrahedron_has_zero_angles() {
        let p = ridge_scribed_stacked(&StackingTree::single(), 3).unwrap();
        for e in p.lattice.edges() {
            let a = dihedral_angle(&p, &[e.0, e.1]).unwrap().angle().unwrap();
            assert!(a.abs() < 1e-6, "angle {a}");
        }
    }

    #[test]
    fn agrees_with_translated_euclidean_angle() {
        // planes through a point inside the ball: move the point to the
        // center, where the Klein model is conformal
        let mut r = rng(5);
        for _ in 0..50 {
            let pts: Vec<Vec<f64>> = (0..4).map(|_| (0..3).map(|_| r.gen_range(-0.5..0.5)).collect()).collect();
            let Ok(s) = hull(&pts, Form::Euclidean) else { continue };
            for (ridge, ang) in simplex_dihedrals(&s).unwrap() {
                let mid = centroid(&ridge.iter().map(|&v| s.vertices[v].clone()).collect::<Vec<_>>());
                let t = hyperbolic_translation(&mid).unwrap();
                let moved = s.map_projective(&t.matrix).unwrap();
                let fs = moved.lattice.facets_containing(&ridge);
                let (a1, _) = &moved.facet_normals[fs[0]];
                let (a2, _) = &moved.facet_normals[fs[1]];
                let euclid = (-dot(&normalize(a1), &normalize(a2))).acos();
                assert!((ang.angle().unwrap() - euclid).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn exact_edge_tangent_tetrahedron() {
        let pts: Vec<Vec<Q>> = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
            .iter()
            .map(|v| v.iter().map(|&x| exact::q(x)).collect())
            .collect();
        let p = crate::polytope::hull_exact(&pts).unwrap().polytope;
        for (a, b) in p.lattice.edges() {
            assert_eq!(dihedral_angle(&p, &[a, b]).unwrap(), Dihedral::Angle(0.0));
        }
    }

    #[test]
    fn triangle_sum_is_pi() {
        let s = hull(&[vec![0.0, 0.0], vec![2.0, 0.1], vec![0.3, 1.0]], Form::Euclidean).unwrap();
        let a = simplex_angle_sum(&s, Geometry::Euclidean, 1e-12).unwrap();
        assert!((a.sum - PI).abs() < 1e-12);
        assert!(a.holds);
    }

    #[test]
    fn refuses_vertex_inside_ball() {
        let mut pts = crate::combinatorics::regular_simplex(4, 1.3);
        pts[0] = vec![0.1, 0.0, 0.0, 0.0];
        let s = hull(&pts, Form::Euclidean).unwrap();
        assert!(matches!(facet_ridge_angle_sum(&s, 0, 1e-9), Err(Error::Precondition(_))));
    }

    #[test]
    fn audit_of_plain_fixture_reports_violations() {
        let p = named_fixture("twice-stacked-simplex-4d").unwrap();
        let a = stack01_audit(&p, EPS_PRED).unwrap();
        assert_eq!(a.ridge_angles.len(), 40);
        assert_eq!(a.interior_sums.len(), 6);
        assert_eq!(a.facet_sums.len(), 20);
        assert!(a.conclusive());
    }
}
