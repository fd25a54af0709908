mod common;

use proptest::prelude::*;

use scribe_core::combinatorics::{
    cyclic_lattice, cyclic_realization, k_sets, missing_faces, neighborliness, Curve,
};

fn cyclic_params() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=6).prop_flat_map(|d| (Just(d), d + 1..=10))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gale_lattice_matches_moment_hull((d, n) in cyclic_params()) {
        let p = cyclic_realization(d, n, &Curve::Moment).unwrap();
        prop_assert_eq!(p.lattice.facet_set(), cyclic_lattice(d, n).unwrap().facet_set());
    }

    #[test]
    fn large_ksets_of_even_cyclic_contain_facets(d in prop::sample::select(vec![4usize, 6]), extra in 1usize..=4) {
        let n = (d + extra).min(10);
        let k = 3 * d / 2 - 1;
        prop_assume!(k < n);
        let p = cyclic_realization(d, n, &Curve::Moment).unwrap();
        for ks in k_sets(&p, k) {
            let has_facet = p.facets().iter().any(|f| f.iter().all(|v| ks.set.contains(v)));
            prop_assert!(has_facet, "k-set {:?} contains no facet", ks.set);
        }
    }

    #[test]
    fn ksets_of_neighborly_polytopes_are_faces(n in 6usize..=9) {
        let p = cyclic_realization(4, n, &Curve::Moment).unwrap();
        let k = neighborliness(&p.lattice);
        prop_assert_eq!(k, 2);
        for ks in k_sets(&p, k + 1) {
            prop_assert_eq!(p.lattice.rank_of(&ks.set), Some(k as isize));
        }
    }

    #[test]
    fn ksets_are_never_missing_faces(seed in any::<u64>(), d in 2usize..=4, extra in 1usize..=6, k in 2usize..=4) {
        let n = (d + extra).min(10);
        let p = common::random_polytope(d, n, (0.5, 1.5), &mut common::rng(seed));
        prop_assume!(k < p.n_vertices());
        let missing = missing_faces(&p.lattice, k);
        for ks in k_sets(&p, k) {
            prop_assert!(!missing.contains(&ks.set), "k-set {:?} is a missing face", ks.set);
        }
    }

    #[test]
    fn end_vertex_figure_is_cyclic((d, n) in cyclic_params()) {
        prop_assume!(d >= 3 && n >= d + 2);
        let l = cyclic_lattice(d, n).unwrap();
        let smaller = cyclic_lattice(d - 1, n - 1).unwrap();
        for v in [0, n - 1] {
            prop_assert!(l.interval_above(&[v]).unwrap().is_isomorphic(&smaller));
        }
    }
}
