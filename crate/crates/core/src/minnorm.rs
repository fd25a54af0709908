//! Minimum-norm point of a convex hull (Wolfe's active-set method).

use crate::linalg::{dot, sub};
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct MinNorm {
    pub point: Vec<f64>,
    /// Convex weights, one per input point (zero outside the final support).
    pub weights: Vec<f64>,
    pub norm: f64,
}

/// Affine minimizer of the norm over the points indexed by `s`; returns the
/// affine coefficients.
fn affine_min(points: &[Vec<f64>], s: &[usize]) -> Vec<f64> {
    let p0 = &points[s[0]];
    if s.len() == 1 {
        return vec![1.0];
    }
    let n = p0.len();
    let k = s.len() - 1;
    let d = DMatrix::from_fn(n, k, |i, j| points[s[j + 1]][i] - p0[i]);
    let rhs = -(d.transpose() * DVector::from_column_slice(p0));
    let g = d.transpose() * &d;
    let alpha = match g.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => g
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .unwrap_or_else(|_| DVector::zeros(k)),
    };
    let mut mu = Vec::with_capacity(s.len());
    mu.push(1.0 - alpha.sum());
    mu.extend(alpha.iter());
    mu
}

fn combine(points: &[Vec<f64>], s: &[usize], lam: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[0].len()];
    for (&i, &l) in s.iter().zip(lam) {
        for (xk, pk) in x.iter_mut().zip(&points[i]) {
            *xk += l * pk;
        }
    }
    x
}

/// Minimum-norm point of `conv(points)`. Terminates when the duality gap
/// `|x|^2 - min_j <x, p_j>` drops below `1e-12` relative to the data scale.
pub fn min_norm_point(points: &[Vec<f64>]) -> MinNorm {
    assert!(!points.is_empty(), "min_norm_point of an empty set");
    let m = points.len();
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max).max(1e-300);
    let gap_tol = 1e-12 * scale;

    let start = (0..m)
        .min_by(|&a, &b| dot(&points[a], &points[a]).partial_cmp(&dot(&points[b], &points[b])).unwrap())
        .unwrap();
    let mut s = vec![start];
    let mut lam = vec![1.0];
    let mut x = points[start].clone();

    for _major in 0..(50 * m + 100) {
        let xx = dot(&x, &x);
        let (j, xpj) = (0..m)
            .map(|j| (j, dot(&x, &points[j])))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if xx - xpj <= gap_tol || s.contains(&j) {
            break;
        }
        s.push(j);
        lam.push(0.0);
        for _minor in 0..(s.len() + 2) {
            let mu = affine_min(points, &s);
            if mu.iter().all(|&v| v > 1e-14) {
                lam = mu;
                break;
            }
            let mut theta = 1.0f64;
            for (l, v) in lam.iter().zip(&mu) {
                if *v <= 1e-14 && l - v > 0.0 {
                    theta = theta.min(l / (l - v));
                }
            }
            for (l, v) in lam.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * v;
            }
            let mut keep_s = Vec::new();
            let mut keep_l = Vec::new();
            for (&i, &l) in s.iter().zip(&lam) {
                if l > 1e-14 {
                    keep_s.push(i);
                    keep_l.push(l);
                }
            }
            if keep_s.is_empty() {
                keep_s.push(s[0]);
                keep_l.push(1.0);
            }
            let tot: f64 = keep_l.iter().sum();
            keep_l.iter_mut().for_each(|l| *l /= tot);
            s = keep_s;
            lam = keep_l;
        }
        x = combine(points, &s, &lam);
    }

    let mut weights = vec![0.0; m];
    for (&i, &l) in s.iter().zip(&lam) {
        weights[i] += l;
    }
    let norm = dot(&x, &x).sqrt();
    MinNorm { point: x, weights, norm }
}

/// Euclidean distance from `target` to `conv(points)`.
pub fn distance_to_hull(points: &[Vec<f64>], target: &[f64]) -> f64 {
    let shifted: Vec<Vec<f64>> = points.iter().map(|p| sub(p, target)).collect();
    min_norm_point(&shifted).norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn segment_through_origin() {
        let r = min_norm_point(&[vec![-1.0, 0.0], vec![1.0, 0.0]]);
        assert!(r.norm < 1e-12);
        assert!((r.weights[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn segment_offset() {
        let r = min_norm_point(&[vec![-1.0, 2.0], vec![1.0, 2.0]]);
        assert!((r.norm - 2.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_vertex_is_closest() {
        let r = min_norm_point(&[vec![1.0, 1.0], vec![3.0, 1.0], vec![1.0, 4.0]]);
        assert!((r.point[0] - 1.0).abs() < 1e-12 && (r.point[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn regular_simplex_facet_centroid() {
        // facet of the standard simplex x+y+z = 1
        let r = min_norm_point(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!((r.norm - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    proptest! {
        // Optimality: <x, p_j - x> >= 0 for every point, checked by direct evaluation.
        #[test]
        fn first_order_optimality(pts in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..9)) {
            let r = min_norm_point(&pts);
            let xx = dot(&r.point, &r.point);
            for p in &pts {
                prop_assert!(dot(&r.point, p) - xx >= -1e-9);
            }
            let s: f64 = r.weights.iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
            prop_assert!(r.weights.iter().all(|&w| w >= -1e-12));
        }
    }
}
