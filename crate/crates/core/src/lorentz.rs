//! Lorentzian space L^{1,d}: the product, cone polarity, sphere-preserving
//! maps and quadric fitting.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exact::Q;
use crate::linalg::{self, dot, norm, normalize, rows_to_matrix};
use crate::polytope::{hull_with_tol, Form};

/// `-x0 y0 + x1 y1 + ... + xd yd`, without a length check.
pub fn lorentz_dot(x: &[f64], y: &[f64]) -> f64 {
    -x[0] * y[0] + dot(&x[1..], &y[1..])
}

pub fn lorentz_product(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    if x.is_empty() {
        return Err(Error::InvalidArgument("empty vector".into()));
    }
    Ok(lorentz_dot(x, y))
}

pub fn lorentz_product_exact(x: &[Q], y: &[Q]) -> Result<Q> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    Ok(-(&x[0] * &y[0]) + crate::exact::dot(&x[1..], &y[1..]))
}

/// Lorentz Gram matrix of a list of vectors.
pub fn lorentz_gram(vs: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(vs.len(), vs.len(), |i, j| lorentz_dot(&vs[i], &vs[j]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConePosition {
    Interior,
    Boundary,
    Exterior,
}

/// Position of `x` relative to the light cone `<x,x> <= 0`, and the sign of
/// `x_0`. The boundary band is `|<x,x>| <= tol |x|^2`.
pub fn cone_position(x: &[f64], tol: f64) -> Result<(ConePosition, i32)> {
    let n2 = dot(x, x);
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let q = lorentz_dot(x, x);
    let pos = if q.abs() <= tol * n2 {
        ConePosition::Boundary
    } else if q < 0.0 {
        ConePosition::Interior
    } else {
        ConePosition::Exterior
    };
    let sign = if x[0] > tol * n2.sqrt() {
        1
    } else if x[0] < -tol * n2.sqrt() {
        -1
    } else {
        0
    };
    Ok((pos, sign))
}

pub fn cone_position_exact(x: &[Q]) -> Result<(ConePosition, i32)> {
    use num_traits::Zero;
    if x.iter().all(|v| v.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let q = lorentz_product_exact(x, x)?;
    let pos = match crate::exact::sign(&q) {
        -1 => ConePosition::Interior,
        0 => ConePosition::Boundary,
        _ => ConePosition::Exterior,
    };
    Ok((pos, crate::exact::sign(&x[0])))
}

pub fn homogenize(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            let mut v = Vec::with_capacity(p.len() + 1);
            v.push(1.0);
            v.extend_from_slice(p);
            v
        })
        .collect()
}

pub fn dehomogenize(rays: &[Vec<f64>], tol: f64) -> Result<Vec<Vec<f64>>> {
    rays.iter()
        .map(|r| {
            if r[0] <= tol * norm(r).max(1.0) {
                return Err(Error::NotDehomogenizable);
            }
            Ok(r[1..].iter().map(|x| x / r[0]).collect())
        })
        .collect()
}

fn flip(x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    y[0] = -y[0];
    y
}

/// Generators of the Lorentzian polar `{x : <x,g> <= 0 for all g}`. When the
/// input spans a proper subspace the polar contains lines; those are
/// returned as pairs `+-u`.
pub fn polar_cone(generators: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    if generators.is_empty() {
        return Err(Error::InvalidArgument("no generators".into()));
    }
    let n = generators[0].len();
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: g.len() });
    }
    if generators.iter().any(|g| norm(g) == 0.0) {
        return Err(Error::ZeroVector);
    }
    if crate::polytope::pointing_functional(generators, 1e-9).is_none() {
        return Err(Error::NotPointed);
    }
    // orthonormal basis of the span
    let m = rows_to_matrix(generators, n);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("v_t");
    let smax = svd.singular_values.max();
    let span: Vec<Vec<f64>> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > 1e-10 * smax)
        .map(|i| vt.row(i).iter().copied().collect())
        .collect();
    let r = span.len();
    let mut euclidean_polar: Vec<Vec<f64>> = Vec::new();
    if r == 1 {
        euclidean_polar.push(linalg::scale(&normalize(&generators[0]), -1.0));
    } else {
        let coords: Vec<Vec<f64>> = generators.iter().map(|g| span.iter().map(|b| dot(b, g)).collect()).collect();
        let h = hull_with_tol(&coords, Form::Cone, crate::error::EPS_PRED)?;
        for (a, _) in &h.polytope.facet_normals {
            let mut v = vec![0.0; n];
            for (ai, b) in a.iter().zip(&span) {
                v = linalg::axpy(&v, *ai, b);
            }
            euclidean_polar.push(v);
        }
    }
    for u in linalg::orthogonal_complement(&span, n) {
        euclidean_polar.push(linalg::scale(&u, -1.0));
        euclidean_polar.push(u);
    }
    Ok(euclidean_polar.iter().map(|v| flip(v)).collect())
}

/// Membership in the cone generated by `generators` (nonnegative
/// combination), decided by a small LP.
pub fn in_cone(generators: &[Vec<f64>], x: &[f64], tol: f64) -> bool {
    use crate::opt::{Cmp, LinearProgram, LpOutcome};
    let k = generators.len();
    let scale = norm(x).max(1.0);
    let mut lp = LinearProgram::new(vec![0.0; k], vec![(0.0, f64::INFINITY); k]);
    let mut lp_rows = Vec::new();
    for i in 0..x.len() {
        lp_rows.push(generators.iter().map(|g| g[i]).collect::<Vec<f64>>());
    }
    // allow a small residual band per coordinate
    for (row, xi) in lp_rows.into_iter().zip(x) {
        lp.row(row.clone(), Cmp::Le, xi + tol * scale);
        lp.row(row, Cmp::Ge, xi - tol * scale);
    }
    matches!(lp.maximize(), LpOutcome::Optimal { .. })
}

/// A projective map acting on homogeneous coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjMap {
    pub matrix: DMatrix<f64>,
}

impl ProjMap {
    pub fn identity(n: usize) -> ProjMap {
        ProjMap { matrix: DMatrix::identity(n, n) }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        linalg::mat_vec(&self.matrix, x)
    }

    /// Action on a Euclidean point through `p -> (1, p)`.
    pub fn apply_point(&self, p: &[f64]) -> Result<Vec<f64>> {
        let h = self.apply(&homogenize(&[p.to_vec()])[0]);
        dehomogenize(&[h], 1e-14).map(|mut v| v.remove(0))
    }

    pub fn compose(&self, then: &ProjMap) -> ProjMap {
        ProjMap { matrix: &then.matrix * &self.matrix }
    }

    pub fn inverse(&self) -> Option<ProjMap> {
        self.matrix.clone().try_inverse().map(|matrix| ProjMap { matrix })
    }

    /// `M^T J M = lambda J` for some `lambda > 0`.
    pub fn is_sphere_preserving(&self, tol: f64) -> bool {
        let n = self.matrix.nrows();
        let mut j = DMatrix::identity(n, n);
        j[(0, 0)] = -1.0;
        let g = self.matrix.transpose() * &j * &self.matrix;
        let lambda = -g[(0, 0)];
        if lambda <= 0.0 {
            return false;
        }
        (g - j * lambda).amax() <= tol * lambda
    }
}

/// Sphere-preserving map sending `c` (inside the unit ball) to the origin and
/// fixing the line through 0 and `c`.
pub fn hyperbolic_translation(c: &[f64]) -> Result<ProjMap> {
    let d = c.len();
    let r = norm(c);
    if r >= 1.0 - crate::error::EPS_PRED {
        return Err(Error::OutsideBall);
    }
    if r == 0.0 {
        return Ok(ProjMap::identity(d + 1));
    }
    let phi = r.atanh();
    let mut boost = DMatrix::identity(d + 1, d + 1);
    boost[(0, 0)] = phi.cosh();
    boost[(1, 1)] = phi.cosh();
    boost[(0, 1)] = -phi.sinh();
    boost[(1, 0)] = -phi.sinh();
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    let h = linalg::reflection_between(&normalize(c), &e1);
    let mut rot = DMatrix::identity(d + 1, d + 1);
    rot.view_mut((1, 1), (d, d)).copy_from(&h);
    Ok(ProjMap { matrix: &rot * boost * &rot })
}

/// Reflection in the Lorentz-orthogonal complement of the space-like `e`.
pub fn lorentz_reflection(e: &[f64]) -> Result<ProjMap> {
    let ee = lorentz_dot(e, e);
    if ee <= crate::error::EPS_PRED * dot(e, e) {
        return Err(Error::NotSpaceLike);
    }
    let n = e.len();
    let je = flip(e);
    let m = DMatrix::identity(n, n) - DVector::from_column_slice(e) * DVector::from_column_slice(&je).transpose() * (2.0 / ee);
    Ok(ProjMap { matrix: m })
}

/// Symmetric matrices `Q` with `p^T Q p = 0` for the homogenized points.
#[derive(Clone, Debug)]
pub struct QuadricSpace {
    pub basis: Vec<DMatrix<f64>>,
}

impl QuadricSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Values `p^T Q p / |p|^2` of each basis element at the homogenized point.
    pub fn evaluate(&self, point: &[f64]) -> Vec<f64> {
        let p = DVector::from_column_slice(&homogenize(&[point.to_vec()])[0]);
        let n2 = p.norm_squared();
        self.basis.iter().map(|q| (p.transpose() * q * &p)[(0, 0)] / n2).collect()
    }

    pub fn vanishes_at(&self, point: &[f64], tol: f64) -> bool {
        self.evaluate(point).iter().all(|v| v.abs() <= tol)
    }
}

pub fn quadric_space_through(points: &[Vec<f64>]) -> QuadricSpace {
    let d = points[0].len();
    let n = d + 1;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let rows: Vec<Vec<f64>> = homogenize(points)
        .iter()
        .map(|p| {
            // normalize each equation so that the tolerance is scale-free
            let row: Vec<f64> = pairs.iter().map(|&(i, j)| if i == j { p[i] * p[i] } else { 2.0 * p[i] * p[j] }).collect();
            let s = norm(&row);
            row.iter().map(|x| x / s).collect()
        })
        .collect();
    let ns = linalg::nullspace(&rows_to_matrix(&rows, pairs.len()), 1e-10);
    let basis = ns
        .iter()
        .map(|v| {
            let mut q = DMatrix::zeros(n, n);
            for (&(i, j), &c) in pairs.iter().zip(v) {
                q[(i, j)] = c;
                q[(j, i)] = c;
            }
            let f = q.norm();
            q / f
        })
        .collect();
    QuadricSpace { basis }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn product_examples() {
        assert_eq!(lorentz_product(&[1.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0]).unwrap(), -1.0);
        let v = [2f64.sqrt(), 0.0, 1.0, 1.0];
        assert!(lorentz_product(&v, &v).unwrap().abs() < 1e-15);
        assert_eq!(lorentz_product(&[1.0, 1.0, 0.0, 0.0], &[1.0, 0.0, 1.0, 0.0]).unwrap(), -1.0);
        assert!(lorentz_product(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn positions() {
        assert_eq!(cone_position(&[2.0, 1.0, 0.0, 0.0], 1e-9).unwrap(), (ConePosition::Interior, 1));
        let v = [3f64.sqrt(), 2f64.sqrt(), 0.0, 1.0];
        assert_eq!(cone_position(&v, 1e-9).unwrap(), (ConePosition::Boundary, 1));
        assert_eq!(cone_position(&[1.0, 2.0, 0.0, 0.0], 1e-9).unwrap(), (ConePosition::Exterior, 1));
        assert_eq!(cone_position(&[0.0, 0.0], 1e-9), Err(Error::ZeroVector));
    }

    #[test]
    fn homogenize_roundtrip() {
        assert_eq!(homogenize(&[vec![3.0, 0.0, 0.0]]), vec![vec![1.0, 3.0, 0.0, 0.0]]);
        assert_eq!(dehomogenize(&[vec![2.0, 2.0, 4.0, 6.0]], 1e-12).unwrap(), vec![vec![1.0, 2.0, 3.0]]);
        assert!(dehomogenize(&[vec![0.0, 1.0]], 1e-12).is_err());
    }

    #[test]
    fn polar_of_2d_orthant() {
        let p = polar_cone(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        // the cone spanned by (1,1),(1,-1) is self-polar up to scaling
        for g in &p {
            assert!(in_cone(&[vec![1.0, 1.0], vec![1.0, -1.0]], g, 1e-9));
        }
        for g in [vec![1.0, 1.0], vec![1.0, -1.0]] {
            assert!(in_cone(&p, &g, 1e-9));
        }
    }

    #[test]
    fn polar_of_time_ray_is_half_space() {
        let p = polar_cone(&[vec![1.0, 0.0, 0.0]]).unwrap();
        for x in [vec![1.0, 5.0, -3.0], vec![0.0, 1.0, 0.0], vec![0.0, -1.0, 2.0]] {
            assert!(in_cone(&p, &x, 1e-9));
        }
        assert!(!in_cone(&p, &[-1.0, 0.0, 0.0], 1e-9));
    }

    #[test]
    fn light_cone_is_nearly_self_polar() {
        let k = 64;
        let gens: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                vec![1.0, t.cos(), t.sin()]
            })
            .collect();
        let p = polar_cone(&gens).unwrap();
        for g in &p {
            let g = normalize(g);
            // polar generators of an inscribed approximation lie just outside L
            assert!(lorentz_dot(&g, &g) >= -1e-12);
            assert!(lorentz_dot(&g, &g) < 0.01);
            assert!(g[0] > 0.0);
        }
    }

    #[test]
    fn polar_twice_is_the_same_cone() {
        let gens = vec![vec![1.0, 0.2, 0.1], vec![1.0, -0.3, 0.2], vec![1.0, 0.0, -0.4], vec![1.0, 0.3, 0.3]];
        let pp = polar_cone(&polar_cone(&gens).unwrap()).unwrap();
        for g in &pp {
            assert!(in_cone(&gens, g, 1e-9));
        }
        for g in &gens {
            assert!(in_cone(&pp, g, 1e-9));
        }
    }

    #[test]
    fn non_pointed_refused() {
        assert_eq!(polar_cone(&[vec![1.0, 0.0], vec![-1.0, 0.0]]), Err(Error::NotPointed));
    }

    #[test]
    fn translation_examples() {
        let t = hyperbolic_translation(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(t, ProjMap::identity(4));
        let t = hyperbolic_translation(&[0.5, 0.0, 0.0]).unwrap();
        assert!(norm(&t.apply_point(&[0.5, 0.0, 0.0]).unwrap()) < 1e-15);
        let e = t.apply_point(&[1.0, 0.0, 0.0]).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-15 && e[1].abs() < 1e-15);
        assert!(hyperbolic_translation(&[1.0, 0.0]).is_err());
    }

    #[test]
    fn reflection_negates_axis() {
        let r = lorentz_reflection(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(r.apply(&[3.0, 2.0, 1.0]), vec![3.0, -2.0, 1.0]);
        assert!(lorentz_reflection(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn cube_eighth_vertex_on_quadric() {
        let cube: Vec<Vec<f64>> =
            (0..8).map(|v| (0..3).map(|k| ((v >> k) & 1) as f64).collect()).collect();
        let q = quadric_space_through(&cube[..7]);
        assert_eq!(q.dim(), 3);
        assert!(q.vanishes_at(&cube[7], 1e-10));
    }

    #[test]
    fn five_points_give_one_conic() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.3], vec![0.2, 1.0], vec![-0.7, 0.4], vec![0.5, -0.9]];
        assert_eq!(quadric_space_through(&pts).dim(), 1);
    }

    #[test]
    fn three_collinear_points_force_the_line() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![0.3, -1.0], vec![-1.0, 0.5]];
        let q = quadric_space_through(&pts);
        assert!(q.vanishes_at(&[5.0, 5.0], 1e-10));
        assert!(q.vanishes_at(&[-3.0, -3.0], 1e-10));
    }

    fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-2.0f64..2.0, n)
    }

    proptest! {
        #[test]
        fn product_is_symmetric_bilinear(x in vec_strategy(4), y in vec_strategy(4), z in vec_strategy(4), a in -3.0f64..3.0) {
            let lin: Vec<f64> = x.iter().zip(&z).map(|(p, q)| a * p + q).collect();
            let lhs = lorentz_dot(&lin, &y);
            let rhs = a * lorentz_dot(&x, &y) + lorentz_dot(&z, &y);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
            prop_assert_eq!(lorentz_dot(&x, &y), lorentz_dot(&y, &x));
        }

        #[test]
        fn reflection_is_orthochronous_isometry(e in vec_strategy(4), x in vec_strategy(4), y in vec_strategy(4)) {
            prop_assume!(lorentz_dot(&e, &e) > 0.1);
            let r = lorentz_reflection(&e).unwrap();
            let (rx, ry) = (r.apply(&x), r.apply(&y));
            prop_assert!((lorentz_dot(&rx, &ry) - lorentz_dot(&x, &y)).abs() < 1e-9 * (1.0 + norm(&x) * norm(&y) * 100.0));
            let back = r.apply(&rx);
            prop_assert!(norm(&linalg::sub(&back, &x)) < 1e-9 * (1.0 + norm(&x)) * 100.0);
            if lorentz_dot(&x, &x) < -1e-6 && x[0] > 0.0 {
                prop_assert!(rx[0] > 0.0);
            }
        }

        #[test]
        fn translation_preserves_sphere(c in prop::collection::vec(-0.55f64..0.55, 3), u in vec_strategy(3)) {
            prop_assume!(norm(&c) < 0.95 && norm(&u) > 1e-3);
            let t = hyperbolic_translation(&c).unwrap();
            let u = normalize(&u);
            prop_assert!((norm(&t.apply_point(&u).unwrap()) - 1.0).abs() < 1e-12);
            prop_assert!(norm(&t.apply_point(&c).unwrap()) < 1e-12);
            prop_assert!(t.is_sphere_preserving(1e-12));
        }
    }
}
