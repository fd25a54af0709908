mod common;

use proptest::prelude::*;
use rand::Rng;

use scribe_core::caps::angular_distance;
use scribe_core::combinatorics::StackingTree;
use scribe_core::constructions::{
    ball_packing_truncated, inscribe_truncated, ridge_scribed_stacked, Ball, Body, TruncationProgram,
};
use scribe_core::linalg::{dot, norm, scale};
use scribe_core::lorentz::hyperbolic_translation;
use scribe_core::scribability::{verdict, Mode, Verdict};
use scribe_core::EPS_PRED;

/// Inverse stereographic image of a ball: a cap on the unit sphere one
/// dimension up, as (center, angular radius).
fn lifted_cap(b: &Ball) -> (Vec<f64>, f64) {
    let c = &b.center;
    let k = dot(c, c) - b.radius() * b.radius();
    let mut n = scale(c, 2.0);
    n.push(k - 1.0);
    let len = norm(&n);
    let (center, cos) = if b.curvature > 0.0 { (scale(&n, 1.0 / len), (1.0 + k) / len) } else { (scale(&n, -1.0 / len), -(1.0 + k) / len) };
    (center, cos.clamp(-1.0, 1.0).acos())
}

fn verdict_table(p: &scribe_core::polytope::Polytope) -> Vec<Verdict> {
    let d = p.dim;
    let mut out = Vec::new();
    for mode in [Mode::Strong, Mode::Weak] {
        for i in 0..d {
            for j in i..d {
                out.push(verdict(p, i, j, mode, EPS_PRED).unwrap());
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn truncated_duals_of_stackings_polarize_to_circumscribed(seed in any::<u64>(), m in 1usize..6, d in 3usize..5) {
        let tree = StackingTree::random(m, d + 1, d + 1, seed);
        let prog = TruncationProgram::dual_of_stacking(&tree, d).unwrap();
        let r = inscribe_truncated(&prog, &Body::UnitSphere).unwrap();
        let (polar, _) = r.polytope.polar_dual().unwrap();
        prop_assert_eq!(verdict(&polar, d - 1, d - 1, Mode::Strong, EPS_PRED).unwrap(), Verdict::True);
    }

    #[test]
    fn ridge_scribed_verdicts_survive_sphere_maps(seed in any::<u64>(), m in 1usize..6, d in 3usize..5) {
        let mut rng = common::rng(seed);
        let tree = StackingTree::random(m, d + 1, d + 1, seed);
        let p = ridge_scribed_stacked(&tree, d).unwrap();
        let c = scale(&common::random_direction(d, &mut rng), rng.gen_range(0.0..0.5));
        let t = hyperbolic_translation(&c).unwrap();
        prop_assume!(p.homogeneous_vertices().iter().all(|v| t.apply(v)[0] > 0.05));
        let q = p.map_projective(&t.matrix).unwrap();
        prop_assert_eq!(verdict_table(&p), verdict_table(&q));
    }

    #[test]
    fn packing_caps_touch_along_edges(seed in any::<u64>(), d in 3usize..5) {
        let prog = TruncationProgram::random(d, 2, 16, seed);
        let packing = ball_packing_truncated(&prog).unwrap();
        let caps: Vec<(Vec<f64>, f64)> = packing.balls.iter().map(lifted_cap).collect();
        let edges = packing.lattice.edges();
        for i in 0..caps.len() {
            for j in i + 1..caps.len() {
                let gap = angular_distance(&caps[i].0, &caps[j].0) - caps[i].1 - caps[j].1;
                prop_assert!(gap >= -1e-9, "caps {} and {} overlap by {:e}", i, j, -gap);
                let touching = gap.abs() <= 1e-9;
                prop_assert_eq!(touching, edges.contains(&(i, j)), "pair ({}, {}) gap {:e}", i, j, gap);
            }
        }
    }
}
