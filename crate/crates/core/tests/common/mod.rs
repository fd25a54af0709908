//! Random instances shared by the property suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scribe_core::linalg::{norm, scale};
use scribe_core::polytope::{hull, Form, Polytope};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_direction(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&v);
        if n > 1e-3 && n <= 1.0 {
            return scale(&v, 1.0 / n);
        }
    }
}

/// Hull of `n` points at radii drawn from `r`; retries until full-dimensional.
pub fn random_polytope(d: usize, n: usize, r: (f64, f64), rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let pts: Vec<Vec<f64>> = (0..n).map(|_| scale(&random_direction(d, rng), rng.gen_range(r.0..r.1))).collect();
        if let Ok(p) = hull(&pts, Form::Euclidean) {
            return p;
        }
    }
}

/// Random polytope with the origin well inside.
pub fn random_centered(d: usize, n: usize, r: (f64, f64), rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let p = random_polytope(d, n, r, rng);
        if p.facet_normals.iter().all(|(_, b)| *b > 0.05) {
            return p;
        }
    }
}
