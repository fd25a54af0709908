mod common;

use proptest::prelude::*;
use rand::Rng;

use scribe_core::caps::{angular_distance, cap_from_point, caps_disjoint, is_k_ply, kply_equivalence_check, monte_carlo_depth, CapSystem};
use scribe_core::constructions::odd_cyclic_scribed;
use scribe_core::linalg::scale;
use scribe_core::scribability::segment_strongly_cuts;
use scribe_core::EPS_PRED;

fn outside_points(d: usize, n: usize, r: (f64, f64), rng: &mut rand_chacha::ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n).map(|_| scale(&common::random_direction(d, rng), rng.gen_range(r.0..r.1))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn disjoint_caps_mean_cutting_segments(seed in any::<u64>(), d in 2usize..5) {
        let mut rng = common::rng(seed);
        let pts = outside_points(d, 2, (1.01, 3.0), &mut rng);
        let a = cap_from_point(&pts[0]).unwrap();
        let b = cap_from_point(&pts[1]).unwrap();
        prop_assert_eq!(caps_disjoint(&a, &b, 1e-12), segment_strongly_cuts(&pts[0], &pts[1], EPS_PRED));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kply_matches_far_ksets(seed in any::<u64>(), d in 2usize..4, n in 4usize..9, k in 1usize..5) {
        prop_assume!(k < n);
        let pts = outside_points(d, n, (1.02, 1.8), &mut common::rng(seed));
        let r = kply_equivalence_check(&pts, k, 1e-10).unwrap();
        prop_assert!(r.agree, "{:?}", r);
    }
}

proptest! {
    // a million sphere samples per case
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sampling_never_beats_exact_ply(seed in any::<u64>(), d in 2usize..4, n in 3usize..8, k in 1usize..4) {
        let mut rng = common::rng(seed);
        let sys = CapSystem::from_points(&outside_points(d, n, (1.05, 2.5), &mut rng)).unwrap();
        if is_k_ply(&sys, k, 1e-12).is_ok() {
            prop_assert!(monte_carlo_depth(&sys, 1_000_000, &mut rng) < k);
        }
    }
}

#[test]
fn odd_cyclic_caps_meet_pairwise() {
    let oc = odd_cyclic_scribed(5, 10).unwrap();
    let sys = CapSystem::from_points(&oc.polytope.vertices).unwrap();
    let n = sys.caps.len();
    assert_eq!(oc.polytope.lattice.edges().len(), n * (n - 1) / 2);
    // tangent pairs count as meeting
    let worst = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| angular_distance(&sys.caps[i].center, &sys.caps[j].center) - sys.caps[i].radius - sys.caps[j].radius)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(worst <= 1e-9, "caps separated by {worst:e}");
    assert_eq!(sys.intersection_graph(-1e-9).len(), n * (n - 1) / 2);
}
