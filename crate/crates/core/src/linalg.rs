//! Small dense linear-algebra helpers on `Vec<f64>` points.

use nalgebra::{DMatrix, DVector};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a + s * b`
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn centroid(points: &[Vec<f64>]) -> Vec<f64> {
    let d = points[0].len();
    let mut c = vec![0.0; d];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let n = points.len() as f64;
    c.iter_mut().for_each(|x| *x /= n);
    c
}

pub fn normalize(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    scale(a, 1.0 / n)
}

pub fn rows_to_matrix(rows: &[Vec<f64>], cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

/// Singular values and right singular vectors of `m`, padded with zero rows so
/// that a full basis of the row space complement is returned.
fn full_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (r, c) = m.shape();
    let padded = if r < c {
        let mut p = DMatrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.resize(c, 0.0);
    (sv, vt)
}

/// Orthonormal basis of the null space of `m` (rows are equations). A singular
/// value counts as zero when it is at most `tol` times the largest one.
pub fn nullspace(m: &DMatrix<f64>, tol: f64) -> Vec<Vec<f64>> {
    let c = m.ncols();
    if m.nrows() == 0 {
        return (0..c)
            .map(|i| {
                let mut e = vec![0.0; c];
                e[i] = 1.0;
                e
            })
            .collect();
    }
    let (sv, vt) = full_svd(m);
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let cut = tol * smax.max(f64::MIN_POSITIVE);
    (0..c)
        .filter(|&i| sv[i] <= cut)
        .map(|i| vt.row(i).iter().copied().collect())
        .collect()
}

/// Numerical rank relative to the largest singular value.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// An affine flat: base point plus orthonormal direction vectors.
#[derive(Clone, Debug)]
pub struct Flat {
    pub base: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl Flat {
    /// Affine hull of the points; directions with relative singular value
    /// below `tol` are dropped.
    pub fn through(points: &[Vec<f64>], tol: f64) -> Flat {
        let base = points[0].clone();
        let d = base.len();
        if points.len() == 1 {
            return Flat { base, basis: vec![] };
        }
        let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, &base)).collect();
        let m = rows_to_matrix(&diffs, d);
        let (sv, vt) = full_svd(&m);
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let basis = (0..d)
            .filter(|&i| smax > 0.0 && sv[i] > tol * smax)
            .map(|i| vt.row(i).iter().copied().collect())
            .collect();
        Flat { base, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, x: &[f64]) -> Vec<f64> {
        let r = sub(x, &self.base);
        self.basis.iter().map(|b| dot(b, &r)).collect()
    }

    pub fn point(&self, coords: &[f64]) -> Vec<f64> {
        let mut p = self.base.clone();
        for (b, c) in self.basis.iter().zip(coords) {
            p = axpy(&p, *c, b);
        }
        p
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.point(&self.coords(x))
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        norm(&sub(x, &self.project(x)))
    }
}

/// Solve the square system `a x = b`, `None` if singular.
pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    a.clone().lu().solve(b)
}

/// Symmetric eigenvalues in ascending order.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let e = m.clone().symmetric_eigen();
    let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Householder-based orthogonal matrix sending unit vector `from` to unit
/// vector `to`.
pub fn reflection_between(from: &[f64], to: &[f64]) -> DMatrix<f64> {
    let n = from.len();
    let w = sub(from, to);
    let nw = norm(&w);
    let mut m = DMatrix::identity(n, n);
    if nw < 1e-15 {
        return m;
    }
    let w = scale(&w, 1.0 / nw);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] -= 2.0 * w[i] * w[j];
        }
    }
    m
}

pub fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(v)).iter().copied().collect()
}

/// Complete a set of orthonormal vectors to an orthonormal basis of R^n and
/// return only the added vectors.
pub fn orthogonal_complement(vectors: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let m = rows_to_matrix(vectors, n);
    nullspace(&m, 1e-12)
}
