mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

use scribe_core::exact::Q;
use scribe_core::lorentz::{
    cone_position, in_cone, lorentz_dot, lorentz_product_exact, lorentz_reflection, polar_cone, quadric_space_through,
    ProjMap,
};

fn rational() -> impl Strategy<Value = Q> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn exact_vec(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(rational(), n)
}

fn cube() -> Vec<Vec<f64>> {
    (0..8).map(|i| (0..3).map(|b| ((i >> b) & 1) as f64).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_product_is_symmetric_bilinear(x in exact_vec(4), y in exact_vec(4), z in exact_vec(4), a in rational()) {
        let lin: Vec<Q> = x.iter().zip(&z).map(|(p, q)| &a * p + q).collect();
        let lhs = lorentz_product_exact(&lin, &y).unwrap();
        let rhs = &a * lorentz_product_exact(&x, &y).unwrap() + lorentz_product_exact(&z, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(lorentz_product_exact(&x, &y).unwrap(), lorentz_product_exact(&y, &x).unwrap());
    }

    #[test]
    fn polar_twice_is_the_same_cone(seed in any::<u64>(), n in 4usize..8) {
        let mut rng = common::rng(seed);
        let gens: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let mut g: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                g.insert(0, rng.gen_range(1.0..2.0));
                g
            })
            .collect();
        let back = polar_cone(&polar_cone(&gens).unwrap()).unwrap();
        for g in &gens {
            prop_assert!(in_cone(&back, g, 1e-7));
        }
        for g in &back {
            prop_assert!(in_cone(&gens, g, 1e-7));
        }
    }

    #[test]
    fn reflection_keeps_cone_position(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let e: Vec<f64> = loop {
            let e: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            if lorentz_dot(&e, &e) > 0.1 {
                break e;
            }
        };
        let r = lorentz_reflection(&e).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let (pos, sign) = cone_position(&x, 1e-9).unwrap();
            let (rpos, rsign) = cone_position(&r.apply(&x), 1e-9).unwrap();
            prop_assert_eq!(pos, rpos);
            if sign > 0 && lorentz_dot(&x, &x) < -1e-6 {
                prop_assert_eq!(rsign, 1);
            }
        }
    }

    #[test]
    fn eighth_cube_vertex_lies_on_every_quadric(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else { 0.0 } + rng.gen_range(-0.3..0.3));
        let map = ProjMap { matrix: m };
        let imgs: Vec<Vec<f64>> = cube().iter().map(|v| map.apply(&scribe_core::lorentz::homogenize(&[v.clone()])[0])).collect();
        prop_assume!(imgs.iter().all(|h| h[0] > 0.2));
        let pts: Vec<Vec<f64>> = imgs.iter().map(|h| h[1..].iter().map(|x| x / h[0]).collect()).collect();
        let space = quadric_space_through(&pts[..7]);
        prop_assert_eq!(space.dim(), 3);
        prop_assert!(space.vanishes_at(&pts[7], 1e-8));
    }
}
