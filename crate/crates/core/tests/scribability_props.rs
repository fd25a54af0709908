mod common;

use proptest::prelude::*;
use rand::Rng;

use scribe_core::constructions::{inscribe_truncated, Body, TruncationProgram};
use scribe_core::linalg::scale;
use scribe_core::lorentz::{hyperbolic_translation, lorentz_dot, lorentz_reflection, ProjMap};
use scribe_core::polytope::Polytope;
use scribe_core::scribability::{classify_face, facet_in_own_sphere, verdict, FaceClass, Mode, Verdict};
use scribe_core::EPS_PRED;

fn flags(c: &FaceClass) -> [bool; 6] {
    [c.strong_cut, c.weak_cut, c.strong_avoid, c.weak_avoid, c.tangent, c.weak_tangent]
}

fn all_flags(p: &Polytope) -> Vec<Option<[bool; 6]>> {
    p.lattice
        .all_faces()
        .filter(|(r, _)| *r >= 0 && *r < p.dim as isize)
        .map(|(_, f)| classify_face(p, f, EPS_PRED).ok().map(|c| flags(&c)))
        .collect()
}

fn pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect()
}

fn random_sphere_map(d: usize, rng: &mut rand_chacha::ChaCha8Rng) -> ProjMap {
    let c = scale(&common::random_direction(d, rng), rng.gen_range(0.0..0.5));
    let t = hyperbolic_translation(&c).unwrap();
    if rng.gen_bool(0.5) {
        return t;
    }
    // reflection in a hyperplane through the ball, so the finite picture stays finite
    let n = common::random_direction(d, rng);
    let mut e = vec![rng.gen_range(-0.3..0.3)];
    e.extend(n);
    assert!(lorentz_dot(&e, &e) > 0.0);
    t.compose(&lorentz_reflection(&e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classification_is_consistent(seed in any::<u64>(), d in 2usize..5, extra in 1usize..5) {
        let p = common::random_polytope(d, d + extra, (0.6, 1.6), &mut common::rng(seed));
        for c in all_flags(&p).into_iter().flatten() {
            let [sc, wc, sa, wa, t, wt] = c;
            prop_assert!(wc || wa);
            prop_assert!(!t || wt);
            prop_assert!(!sc || wc);
            prop_assert!(!sa || wa);
        }
    }

    #[test]
    fn verdicts_are_monotone(seed in any::<u64>(), d in 2usize..5, extra in 1usize..5) {
        let p = common::random_polytope(d, d + extra, (0.6, 1.6), &mut common::rng(seed));
        for mode in [Mode::Strong, Mode::Weak] {
            for (i, j) in pairs(d) {
                if verdict(&p, i, j, mode, EPS_PRED).unwrap() != Verdict::True {
                    continue;
                }
                for (a, b) in pairs(d) {
                    if a <= i && b >= j {
                        prop_assert_eq!(verdict(&p, a, b, mode, EPS_PRED).unwrap(), Verdict::True, "({},{}) from ({},{})", a, b, i, j);
                    }
                }
            }
        }
    }

    #[test]
    fn polarity_swaps_and_reverses_ranks(seed in any::<u64>(), d in 2usize..5, extra in 1usize..5) {
        let p = common::random_centered(d, d + extra, (0.7, 1.5), &mut common::rng(seed));
        let (polar, _) = p.polar_dual().unwrap();
        for mode in [Mode::Strong, Mode::Weak] {
            for (i, j) in pairs(d) {
                let a = verdict(&p, i, j, mode, EPS_PRED).unwrap();
                if a == Verdict::True {
                    prop_assert_eq!(verdict(&polar, d - 1 - j, d - 1 - i, mode, EPS_PRED).unwrap(), Verdict::True);
                }
            }
        }
    }

    #[test]
    fn facets_inherit_the_verdict(seed in any::<u64>(), d in 3usize..5, extra in 1usize..5) {
        let p = common::random_polytope(d, d + extra, (1.05, 1.6), &mut common::rng(seed));
        let mut checked = 0;
        for (i, j) in pairs(d).into_iter().filter(|&(_, j)| j + 2 <= d) {
            if verdict(&p, i, j, Mode::Strong, EPS_PRED).unwrap() != Verdict::True {
                continue;
            }
            checked += 1;
            for f in 0..p.facets().len() {
                let sub = facet_in_own_sphere(&p, f).unwrap();
                prop_assert_eq!(verdict(&sub, i, j, Mode::Strong, EPS_PRED).unwrap(), Verdict::True, "facet {} at ({},{})", f, i, j);
            }
        }
        prop_assume!(checked > 0);
    }

    #[test]
    fn sphere_maps_keep_every_flag(seed in any::<u64>(), d in 2usize..5, extra in 1usize..5) {
        let mut rng = common::rng(seed);
        let p = common::random_polytope(d, d + extra, (0.6, 1.6), &mut rng);
        let m = random_sphere_map(d, &mut rng);
        let hom = p.homogeneous_vertices();
        prop_assume!(hom.iter().all(|v| m.apply(v)[0] > 0.05));
        let q = p.map_projective(&m.matrix).unwrap();
        prop_assert_eq!(all_flags(&p), all_flags(&q));
    }

    #[test]
    fn sphere_maps_keep_tangencies(seed in 0u64..1000, d in 3usize..5) {
        let mut rng = common::rng(seed);
        let p = inscribe_truncated(&TruncationProgram::random(d, 2, 12, seed), &Body::UnitSphere).unwrap().polytope;
        let m = random_sphere_map(d, &mut rng);
        prop_assume!(p.homogeneous_vertices().iter().all(|v| m.apply(v)[0] > 0.05));
        let q = p.map_projective(&m.matrix).unwrap();
        prop_assert_eq!(all_flags(&p), all_flags(&q));
    }
}
