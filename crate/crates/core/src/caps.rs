//! Spherical caps seen from exterior points, k-ply systems and the
//! separator-bound constants.

use std::f64::consts::PI;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::k_sets_of_points;
use crate::error::{Error, Result, EPS_PRED};
use crate::linalg::{dot, norm, normalize};
use crate::minnorm::min_norm_point;

#[derive(Clone, Debug, PartialEq)]
pub struct SphericalCap {
    pub center: Vec<f64>,
    /// Angular radius in `[0, pi/2]`.
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapSystem {
    pub caps: Vec<SphericalCap>,
    /// Dimension of the ambient space; the sphere has one less.
    pub dim: usize,
}

/// The part of the unit sphere visible from `x`.
pub fn cap_from_point(x: &[f64]) -> Result<SphericalCap> {
    let r = norm(x);
    if r < 1.0 + EPS_PRED {
        return Err(Error::InsideBall);
    }
    Ok(SphericalCap { center: normalize(x), radius: (1.0 / r).acos() })
}

/// Like [`cap_from_point`] but accepts points on the sphere, whose caps are
/// single points with empty interior.
fn cap_or_point(x: &[f64]) -> SphericalCap {
    let r = norm(x);
    SphericalCap { center: normalize(x), radius: (1.0 / r).min(1.0).acos() }
}

pub fn angular_distance(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

pub fn caps_disjoint(a: &SphericalCap, b: &SphericalCap, eps: f64) -> bool {
    angular_distance(&a.center, &b.center) >= a.radius + b.radius - eps
}

impl CapSystem {
    pub fn from_points(points: &[Vec<f64>]) -> Result<CapSystem> {
        let dim = points.first().map_or(0, |p| p.len());
        Ok(CapSystem { caps: points.iter().map(|x| cap_from_point(x)).collect::<Result<_>>()?, dim })
    }

    /// Pairs of caps with overlapping interiors.
    pub fn intersection_graph(&self, eps: f64) -> Vec<(usize, usize)> {
        (0..self.caps.len())
            .tuple_combinations()
            .filter(|&(i, j)| !caps_disjoint(&self.caps[i], &self.caps[j], eps))
            .collect()
    }
}

/// Largest `t` with `<u, c_i> >= cos r_i + t` for all caps and `|u| <= 1`,
/// with a maximizer. Solved exactly by enumerating active sets of linearly
/// independent centers; returns `None` when the optimum is not positive.
pub fn common_depth(caps: &[&SphericalCap]) -> Option<(f64, Vec<f64>)> {
    let dim = caps.first()?.center.len();
    let a: Vec<f64> = caps.iter().map(|c| c.radius.cos()).collect();
    let slack = |u: &[f64]| caps.iter().zip(&a).map(|(c, ai)| dot(&c.center, u) - ai).fold(f64::INFINITY, f64::min);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for size in 1..=caps.len().min(dim) {
        for s in (0..caps.len()).combinations(size) {
            let g = DMatrix::from_fn(size, size, |i, j| dot(&caps[s[i]].center, &caps[s[j]].center));
            let Some(ginv) = g.clone().try_inverse() else { continue };
            if g.determinant().abs() < 1e-14 {
                continue;
            }
            let av = DVector::from_iterator(size, s.iter().map(|&i| a[i]));
            let ones = DVector::from_element(size, 1.0);
            // (a + t 1)^T G^-1 (a + t 1) = 1
            let qa = (ones.transpose() * &ginv * &ones)[0];
            let qb = 2.0 * (ones.transpose() * &ginv * &av)[0];
            let qc = (av.transpose() * &ginv * &av)[0] - 1.0;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                continue;
            }
            for t in [(-qb + disc.sqrt()) / (2.0 * qa), (-qb - disc.sqrt()) / (2.0 * qa)] {
                let mu = &ginv * (&av + &ones * t);
                if mu.iter().any(|&m| m < -1e-12) {
                    continue;
                }
                let mut u = vec![0.0; dim];
                for (k, &i) in s.iter().enumerate() {
                    for (x, c) in u.iter_mut().zip(&caps[i].center) {
                        *x += mu[k] * c;
                    }
                }
                let val = slack(&u);
                if best.as_ref().map_or(true, |(b, _)| val > *b) {
                    best = Some((val, u));
                }
            }
        }
    }
    best.filter(|(t, _)| *t > 0.0).map(|(t, u)| (t, normalize(&u)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlyWitness {
    pub subset: Vec<usize>,
    pub point: Vec<f64>,
    pub depth: f64,
}

/// Whether no point of the sphere lies in the interior of `k` caps. On
/// failure the witness is the lexicographically first subset whose open
/// caps share a point.
pub fn is_k_ply(sys: &CapSystem, k: usize, eps: f64) -> std::result::Result<(), PlyWitness> {
    if k == 0 {
        return Err(PlyWitness { subset: vec![], point: vec![0.0; sys.dim], depth: f64::INFINITY });
    }
    let subsets: Vec<Vec<usize>> = (0..sys.caps.len()).combinations(k).collect();
    let found = subsets.par_iter().find_map_first(|s| {
        let caps: Vec<&SphericalCap> = s.iter().map(|&i| &sys.caps[i]).collect();
        common_depth(&caps).filter(|(t, _)| *t > eps).map(|(t, u)| PlyWitness { subset: s.clone(), point: u, depth: t })
    });
    match found {
        Some(w) => Err(w),
        None => Ok(()),
    }
}

/// Approximate maximum number of open caps covering a sampled point.
/// Sampling only; never a proof of k-ply.
pub fn monte_carlo_depth(sys: &CapSystem, samples: usize, rng: &mut ChaCha8Rng) -> usize {
    let cos: Vec<f64> = sys.caps.iter().map(|c| c.radius.cos()).collect();
    let mut best = 0;
    for _ in 0..samples {
        let u = loop {
            let g: Vec<f64> = (0..sys.dim).map(|_| gaussian(rng)).collect();
            if norm(&g) > 1e-9 {
                break normalize(&g);
            }
        };
        let depth = sys.caps.iter().zip(&cos).filter(|(c, &cr)| dot(&c.center, &u) > cr).count();
        best = best.max(depth);
    }
    best
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

#[derive(Clone, Debug, PartialEq)]
pub struct KPlyReport {
    pub k: usize,
    pub k_ply: bool,
    /// Every k-set of the points has a hull meeting the closed unit ball.
    pub k_sets_meet_ball: bool,
    /// A k-set whose hull misses the ball, if any.
    pub far_k_set: Option<Vec<usize>>,
    pub witness: Option<PlyWitness>,
    pub agree: bool,
}

/// Both sides of the equivalence between k-ply cap systems and k-sets
/// meeting the sphere, for points on or outside the unit sphere.
pub fn kply_equivalence_check(points: &[Vec<f64>], k: usize, eps: f64) -> Result<KPlyReport> {
    if points.iter().any(|p| norm(p) < 1.0 - eps) {
        return Err(Error::InsideBall);
    }
    let dim = points.first().map_or(0, |p| p.len());
    let sys = CapSystem { caps: points.iter().map(|x| cap_or_point(x)).collect(), dim };
    let ply = is_k_ply(&sys, k, eps);
    let ksets = k_sets_of_points(points, k);
    let far = ksets.iter().find(|ks| {
        let pts: Vec<Vec<f64>> = ks.set.iter().map(|&i| points[i].clone()).collect();
        min_norm_point(&pts).norm > 1.0 + eps
    });
    let k_ply = ply.is_ok();
    let meet = far.is_none();
    Ok(KPlyReport {
        k,
        k_ply,
        k_sets_meet_ball: meet,
        far_k_set: far.map(|ks| ks.set.clone()),
        witness: ply.err(),
        agree: k_ply == meet,
    })
}

/// Volume of the unit ball in R^d.
pub fn ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / d as f64 * ball_volume(d - 2),
    }
}

/// Area of the unit sphere S^d in R^(d+1).
pub fn sphere_area(d: usize) -> f64 {
    (d + 1) as f64 * ball_volume(d + 1)
}

/// Leading-order separator constant `c_d`; the `o(1)` term is dropped.
pub fn separator_constant(d: usize) -> f64 {
    let df = d as f64;
    2.0 * sphere_area(d - 1) / (sphere_area(d).powf(1.0 - 1.0 / df) * ball_volume(d).powf(1.0 / df))
}

/// Vertex-count thresholds beyond which the corresponding cyclic polytopes
/// admit no scribed realization. Leading-order values only.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds {
    pub d: usize,
    /// `c_{d-1}`.
    pub c: f64,
    pub even_bound: f64,
    pub odd_bound: f64,
    /// Separator inequality at `n = even_bound + 1` with ply `floor(d/2)`.
    pub separator_half: bool,
    /// Same inequality with ply `3d/2 - 1`.
    pub separator_ply: bool,
}

pub fn neighborly_bound(d: usize, k: usize) -> f64 {
    let c = separator_constant(d - 1);
    (c * (d + 1) as f64).powi(d as i32 - 1) * (k + 1) as f64
}

/// Separator size `c_{d-1} ply^(1/(d-1)) n^((d-2)/(d-1))` against `n/(d+1)`.
pub fn separator_holds(d: usize, n: f64, ply: f64) -> bool {
    let c = separator_constant(d - 1);
    let e = (d - 1) as f64;
    c * ply.powf(1.0 / e) * n.powf((d as f64 - 2.0) / e) < n / (d + 1) as f64
}

pub fn thresholds(d: usize) -> Result<Thresholds> {
    if d < 3 {
        return Err(Error::InvalidArgument("thresholds need d >= 3".into()));
    }
    let c = separator_constant(d - 1);
    let base = (c * (d + 1) as f64).powi(d as i32 - 1);
    let even_bound = base * (3.0 * d as f64 / 2.0 - 1.0);
    let odd_bound = base * ((3 * d / 2) as f64 - 1.0);
    Ok(Thresholds {
        d,
        c,
        even_bound,
        odd_bound,
        separator_half: separator_holds(d, even_bound + 1.0, (d / 2) as f64),
        separator_ply: separator_holds(d, even_bound + 1.0, 3.0 * d as f64 / 2.0 - 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::rng;

    fn cap(center: Vec<f64>, radius: f64) -> SphericalCap {
        SphericalCap { center: normalize(&center), radius }
    }

    #[test]
    fn cap_radius_at_two() {
        let c = cap_from_point(&[0.0, 2.0, 0.0]).unwrap();
        assert!((c.radius - PI / 3.0).abs() < 1e-15);
        assert!(cap_from_point(&[0.5, 0.0]).is_err());
        assert!(cap_from_point(&[1e9, 0.0]).unwrap().radius > PI / 2.0 - 1e-8);
    }

    #[test]
    fn disjointness() {
        let a = cap(vec![1.0, 0.0, 0.0], PI / 4.0);
        let b = cap(vec![-1.0, 0.0, 0.0], PI / 4.0);
        assert!(caps_disjoint(&a, &b, 1e-12));
        assert!(!caps_disjoint(&a, &a, 1e-12));
    }

    #[test]
    fn ply_of_small_systems() {
        let sys = CapSystem { caps: vec![cap(vec![1.0, 0.0, 0.0], 0.5), cap(vec![-1.0, 0.0, 0.0], 0.5)], dim: 3 };
        assert!(is_k_ply(&sys, 2, 1e-12).is_ok());
        let sys = CapSystem {
            caps: vec![cap(vec![1.0, 0.1, 0.0], 0.5), cap(vec![1.0, -0.1, 0.0], 0.5), cap(vec![1.0, 0.0, 0.1], 0.5)],
            dim: 3,
        };
        let w = is_k_ply(&sys, 3, 1e-12).unwrap_err();
        assert_eq!(w.subset, vec![0, 1, 2]);
        for c in &sys.caps {
            assert!(dot(&c.center, &w.point) > c.radius.cos());
        }
    }

    #[test]
    fn depth_matches_sampling() {
        let mut r = rng(3);
        for _ in 0..20 {
            let pts: Vec<Vec<f64>> =
                (0..6).map(|_| { let g: Vec<f64> = (0..3).map(|_| gaussian(&mut r)).collect(); crate::linalg::scale(&normalize(&g), r.gen_range(1.05..1.6)) }).collect();
            let sys = CapSystem::from_points(&pts).unwrap();
            let depth = monte_carlo_depth(&sys, 20000, &mut r);
            for k in 1..=4 {
                if is_k_ply(&sys, k, 1e-12).is_ok() {
                    assert!(depth < k, "sampled depth {depth} but {k}-ply");
                }
            }
        }
    }

    #[test]
    fn planted_far_cluster() {
        let mut pts: Vec<Vec<f64>> = crate::combinatorics::regular_simplex(3, 1.2);
        pts.push(vec![1.2, 0.0, 0.0]);
        pts.push(vec![5.0, 0.1, 0.0]);
        pts.push(vec![5.0, -0.1, 0.1]);
        pts.push(vec![5.0, 0.0, -0.1]);
        let r = kply_equivalence_check(&pts, 3, 1e-12).unwrap();
        assert!(!r.k_ply && !r.k_sets_meet_ball);
    }

    #[test]
    fn one_ply_needs_points_on_sphere() {
        let pts = crate::combinatorics::regular_simplex(3, 1.0);
        let r = kply_equivalence_check(&pts, 1, 1e-12).unwrap();
        assert!(r.k_ply && r.k_sets_meet_ball);
        let pts = crate::combinatorics::regular_simplex(3, 1.1);
        let r = kply_equivalence_check(&pts, 1, 1e-12).unwrap();
        assert!(!r.k_ply && !r.k_sets_meet_ball);
    }

    #[test]
    fn closed_form_constants() {
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
        let t = thresholds(4).unwrap();
        assert!(t.separator_half && t.separator_ply);
        let e: Vec<f64> = [4, 6, 8].iter().map(|&d| thresholds(d).unwrap().even_bound).collect();
        assert!(e[0] < e[1] && e[1] < e[2]);
    }
}
