//! Cyclic polytopes, stacked polytopes and their trees, neighborliness,
//! k-sets and missing faces.

use std::collections::VecDeque;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Q;
use crate::lattice::FaceLattice;
use crate::linalg::{dot, normalize, scale};
use crate::opt::{Cmp, LinearProgram, LpOutcome};
use crate::polytope::{hull, hull_exact, Form, Polytope};

/// Gale's evenness condition for the `d`-subset `set` of `0..n`.
pub fn gale_is_facet(d: usize, n: usize, set: &[usize]) -> Result<bool> {
    if set.len() != d {
        return Err(Error::InvalidArgument(format!("expected {d} indices, got {}", set.len())));
    }
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != d || s.iter().any(|&i| i >= n) {
        return Err(Error::InvalidArgument("indices must be distinct and below n".into()));
    }
    let outside: Vec<usize> = (0..n).filter(|i| s.binary_search(i).is_err()).collect();
    Ok(outside
        .iter()
        .tuple_windows()
        .all(|(&j, &k)| s.iter().filter(|&&i| j < i && i < k).count() % 2 == 0))
}

/// Facets of C(d, n) by Gale's evenness condition.
pub fn gale_facets(d: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(d).filter(|s| gale_is_facet(d, n, s).unwrap_or(false)).collect()
}

pub fn cyclic_lattice(d: usize, n: usize) -> Result<FaceLattice> {
    if d < 2 || n < d + 1 {
        return Err(Error::InvalidArgument(format!("C({d},{n}) needs d >= 2 and n >= d+1")));
    }
    FaceLattice::from_facets(n, d, &gale_facets(d, n))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    /// `(t, t^2, ..., t^d)` at `t = 1..n` (exact rational arithmetic).
    Moment,
    /// `(cos t, sin t, cos 2t, ...)/sqrt(d/2)` at equally spaced angles.
    Trigonometric,
    /// Moment curve with n-1 vertices at geometrically spaced parameters in
    /// `[pivot - eps, pivot + eps]` and vertex 0 at `pivot - 1`.
    ClusteredMoment { eps: Q, pivot: Q },
    /// Trigonometric curve with n-1 vertices at geometrically spaced angles in
    /// `[pivot - eps, pivot + eps]` and vertex 0 at the antipodal angle.
    ClusteredTrigonometric { eps: f64, pivot: f64 },
}

/// Point on the trigonometric moment curve of even dimension `d`, on the
/// unit sphere.
pub fn trig_point(d: usize, t: f64) -> Vec<f64> {
    let m = d / 2;
    let s = 1.0 / (m as f64).sqrt();
    (1..=m).flat_map(|k| [s * (k as f64 * t).cos(), s * (k as f64 * t).sin()]).collect()
}

/// `n` geometrically spaced values in `[-1, 1]`, symmetric, increasing.
pub fn geometric_spread(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    // gaps grow by a factor 1.5 away from the middle
    let mut gaps: Vec<f64> = (0..n - 1).map(|i| {
        let c = (n - 2) as f64 / 2.0;
        1.5f64.powf((i as f64 - c).abs())
    }).collect();
    let total: f64 = gaps.iter().sum();
    gaps.iter_mut().for_each(|g| *g *= 2.0 / total);
    let mut out = vec![-1.0];
    for g in gaps {
        let last = *out.last().unwrap();
        out.push(last + g);
    }
    out
}

pub fn cyclic_realization(d: usize, n: usize, curve: &Curve) -> Result<Polytope> {
    let target = cyclic_lattice(d, n)?;
    let p = match curve {
        Curve::Moment => {
            let pts: Vec<Vec<Q>> = (1..=n as i64).map(|t| moment_point_exact(d, &Q::from_integer(BigInt::from(t)))).collect();
            hull_exact(&pts)?.polytope
        }
        Curve::ClusteredMoment { eps, pivot } => {
            let mut params = vec![pivot - Q::from_integer(BigInt::from(1))];
            for s in geometric_spread(n - 1) {
                let s = BigRational::from_float(s).ok_or_else(|| Error::InvalidArgument("spread".into()))?;
                params.push(pivot + eps * s);
            }
            let pts: Vec<Vec<Q>> = params.iter().map(|t| moment_point_exact(d, t)).collect();
            hull_exact(&pts)?.polytope
        }
        Curve::Trigonometric => {
            if d % 2 != 0 {
                return Err(Error::InvalidArgument("trigonometric curve needs even d".into()));
            }
            let pts: Vec<Vec<f64>> =
                (0..n).map(|k| trig_point(d, 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
            hull(&pts, Form::Euclidean)?
        }
        Curve::ClusteredTrigonometric { eps, pivot } => {
            if d % 2 != 0 {
                return Err(Error::InvalidArgument("trigonometric curve needs even d".into()));
            }
            let mut pts = vec![trig_point(d, pivot + std::f64::consts::PI)];
            pts.extend(geometric_spread(n - 1).iter().map(|s| trig_point(d, pivot + eps * s)));
            hull(&pts, Form::Euclidean)?
        }
    };
    if p.n_vertices() != n {
        return Err(Error::LatticeMismatch(format!("only {} of {n} points are vertices", p.n_vertices())));
    }
    match curve {
        // parameters increase with the index for the moment curves
        Curve::Moment | Curve::ClusteredMoment { .. } => {
            if p.lattice != target {
                return Err(Error::LatticeMismatch("hull differs from Gale's lattice".into()));
            }
        }
        _ => {
            if !p.lattice.is_isomorphic(&target) {
                return Err(Error::LatticeMismatch("hull is not cyclic".into()));
            }
        }
    }
    Ok(p)
}

pub fn moment_point_exact(d: usize, t: &Q) -> Vec<Q> {
    let mut out = Vec::with_capacity(d);
    let mut acc = t.clone();
    for _ in 0..d {
        out.push(acc.clone());
        acc = &acc * t;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct KSet {
    pub set: Vec<usize>,
    /// `a . v > b` on the set and `< b` off it.
    pub normal: Vec<f64>,
    pub offset: f64,
    pub margin: f64,
}

/// Strict separation of `set` from the remaining points, if one exists.
pub fn separate(points: &[Vec<f64>], set: &[usize]) -> Option<KSet> {
    let d = points[0].len();
    // per-coordinate affine normalization; separation is invariant under it
    let lo: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let sc: Vec<f64> = (0..d).map(|j| if hi[j] > lo[j] { 2.0 / (hi[j] - lo[j]) } else { 1.0 }).collect();
    let norm_pt = |p: &Vec<f64>| -> Vec<f64> { (0..d).map(|j| (p[j] - lo[j]) * sc[j] - 1.0).collect() };
    let pts: Vec<Vec<f64>> = points.iter().map(norm_pt).collect();

    // variables a (d), b, t
    let mut obj = vec![0.0; d + 2];
    obj[d + 1] = 1.0;
    let mut bounds = vec![(-1.0, 1.0); d];
    bounds.push((f64::NEG_INFINITY, f64::INFINITY));
    bounds.push((f64::NEG_INFINITY, 1.0));
    let mut lp = LinearProgram::new(obj, bounds);
    for (i, p) in pts.iter().enumerate() {
        let mut row = p.clone();
        row.push(-1.0);
        if set.contains(&i) {
            row.push(-1.0);
            lp.row(row, Cmp::Ge, 0.0);
        } else {
            row.push(1.0);
            lp.row(row, Cmp::Le, 0.0);
        }
    }
    let LpOutcome::Optimal { value, x } = lp.maximize() else {
        return None;
    };
    if value <= 1e-9 {
        return None;
    }
    // witness in original coordinates: a'.((p-lo)*sc - 1) - b' = a.p - b
    let a: Vec<f64> = (0..d).map(|j| x[j] * sc[j]).collect();
    let b = x[d] + (0..d).map(|j| x[j] * (lo[j] * sc[j] + 1.0)).sum::<f64>();
    let margins: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(i, p)| if set.contains(&i) { dot(&a, p) - b } else { b - dot(&a, p) })
        .collect();
    let scale_ref = points.iter().map(|p| dot(&a, p).abs()).fold(b.abs(), f64::max).max(1e-300);
    let margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    if margin <= 1e-13 * scale_ref {
        return None;
    }
    Some(KSet { set: set.to_vec(), normal: a, offset: b, margin: value })
}

/// All k-sets of the vertex set, each with a separating witness. Every
/// k-subset is tested.
pub fn k_sets(p: &Polytope, k: usize) -> Vec<KSet> {
    let pts = match p.euclidean_vertices(1e-12) {
        Some(v) => v,
        None => p.vertices.clone(),
    };
    k_sets_of_points(&pts, k)
}

pub fn k_sets_of_points(pts: &[Vec<f64>], k: usize) -> Vec<KSet> {
    let subsets: Vec<Vec<usize>> = (0..pts.len()).combinations(k).collect();
    subsets.par_iter().filter_map(|s| separate(pts, s)).collect()
}

/// Minimal non-faces of size `2..=s` (every proper subset is a face).
pub fn missing_faces(l: &FaceLattice, s: usize) -> Vec<Vec<usize>> {
    let n = l.n_vertices();
    let is_proper_face = |f: &[usize]| l.rank_of(f).map(|r| r < l.dim() as isize).unwrap_or(false);
    let mut out = Vec::new();
    for size in 2..=s.min(n) {
        for set in (0..n).combinations(size) {
            if is_proper_face(&set) {
                continue;
            }
            // faces are closed downward, so the (size-1)-subsets suffice
            let all_sub = (0..size).all(|drop| {
                let sub: Vec<usize> = set.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, &v)| v).collect();
                is_proper_face(&sub)
            });
            if all_sub {
                out.push(set);
            }
        }
    }
    out
}

/// Largest `k` such that every k-subset of vertices is a proper face.
pub fn neighborliness(l: &FaceLattice) -> usize {
    let n = l.n_vertices();
    let mut best = 0;
    for k in 1..n {
        let all = (0..n).combinations(k).all(|s| l.rank_of(&s).map(|r| r < l.dim() as isize).unwrap_or(false));
        if !all {
            break;
        }
        best = k;
    }
    best
}

/// An unrooted tree given by edges on nodes `0..n_nodes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackingTree {
    pub n_nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl StackingTree {
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize)>) -> Result<StackingTree> {
        let t = StackingTree { n_nodes, edges };
        if n_nodes == 0 || t.edges.len() + 1 != n_nodes || t.edges.iter().any(|&(a, b)| a >= n_nodes || b >= n_nodes || a == b) {
            return Err(Error::InvalidArgument("not a tree".into()));
        }
        if t.bfs_order().len() != n_nodes {
            return Err(Error::InvalidArgument("tree is not connected".into()));
        }
        Ok(t)
    }

    pub fn single() -> StackingTree {
        StackingTree { n_nodes: 1, edges: vec![] }
    }

    pub fn path(m: usize) -> StackingTree {
        StackingTree::new(m, (1..m).map(|i| (i - 1, i)).collect()).expect("path")
    }

    pub fn star(m: usize) -> StackingTree {
        StackingTree::new(m, (1..m).map(|i| (0, i)).collect()).expect("star")
    }

    /// Random tree with node degrees bounded by `max_root_degree` at node 0
    /// and `max_degree` elsewhere.
    pub fn random(m: usize, max_root_degree: usize, max_degree: usize, seed: u64) -> StackingTree {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut deg = vec![0usize; m];
        let mut edges = Vec::new();
        for v in 1..m {
            let mut cands: Vec<usize> = (0..v)
                .filter(|&u| deg[u] < if u == 0 { max_root_degree } else { max_degree })
                .collect();
            cands.shuffle(&mut rng);
            let u = cands[rng.gen_range(0..cands.len())];
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
        StackingTree::new(m, edges).expect("random tree")
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        adj
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// BFS order from node 0 with the parent of each node.
    pub fn bfs_order(&self) -> Vec<(usize, Option<usize>)> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_nodes];
        let mut out = Vec::new();
        let mut q = VecDeque::from([(0usize, None)]);
        seen[0] = true;
        while let Some((v, parent)) = q.pop_front() {
            out.push((v, parent));
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    q.push_back((u, Some(v)));
                }
            }
        }
        out
    }
}

/// Stacking plan for a tree in dimension `d`: the BFS sequence of
/// `(node, simplex vertex list)`; node 0 is the simplex on `0..=d`, and
/// each later node adds one new vertex (its index is `d + position`)
/// stacked on a facet of its parent's simplex. A node's children take the
/// facets opposite the parent's base vertices in order.
#[derive(Clone, Debug)]
pub struct StackPlan {
    pub dim: usize,
    pub steps: Vec<StackStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackStep {
    pub node: usize,
    /// Base facet (sorted) followed by the apex; `0..=d` for the root.
    pub simplex: Vec<usize>,
    /// Facet of the parent simplex the node is stacked on.
    pub base: Option<Vec<usize>>,
    /// Vertex of the parent simplex opposite the base.
    pub opposite: Option<usize>,
}

pub fn stack_plan(tree: &StackingTree, d: usize) -> Result<StackPlan> {
    let order = tree.bfs_order();
    let adj = tree.adjacency();
    let deg_root = adj[0].len();
    if deg_root > d + 1 || (1..tree.n_nodes).any(|v| adj[v].len() > d + 1) {
        return Err(Error::InvalidArgument(format!("node degree exceeds {} in dimension {d}", d + 1)));
    }
    let mut simplex_of: Vec<Option<Vec<usize>>> = vec![None; tree.n_nodes];
    let mut used_children = vec![0usize; tree.n_nodes];
    let mut steps = Vec::new();
    for (pos, &(v, parent)) in order.iter().enumerate() {
        match parent {
            None => {
                let s: Vec<usize> = (0..=d).collect();
                simplex_of[v] = Some(s.clone());
                steps.push(StackStep { node: v, simplex: s, base: None, opposite: None });
            }
            Some(p) => {
                let ps = simplex_of[p].clone().unwrap();
                let k = used_children[p];
                used_children[p] += 1;
                // the root may use all d+1 facets; other nodes skip the facet opposite their apex
                let drop_idx = k;
                if p != order[0].0 && drop_idx >= d {
                    return Err(Error::InvalidArgument("too many children".into()));
                }
                let mut base: Vec<usize> = ps.iter().enumerate().filter(|(i, _)| *i != drop_idx).map(|(_, &x)| x).collect();
                base.sort_unstable();
                let apex = d + pos;
                let mut s = base.clone();
                s.push(apex);
                simplex_of[v] = Some(s.clone());
                steps.push(StackStep { node: v, simplex: s, base: Some(base), opposite: Some(ps[drop_idx]) });
            }
        }
    }
    Ok(StackPlan { dim: d, steps })
}

impl StackPlan {
    /// Lattice of the stacked polytope, vertices numbered as in the plan.
    pub fn lattice(&self) -> Result<FaceLattice> {
        let mut lat = FaceLattice::simplex(self.dim);
        for step in self.steps.iter().skip(1) {
            let base = step.base.as_ref().unwrap();
            let idx = lat
                .facets()
                .iter()
                .position(|f| f == base)
                .ok_or_else(|| Error::InvalidArgument("base facet was already covered".into()))?;
            lat = lat.stacked(idx)?;
        }
        Ok(lat)
    }
}

/// Stacked polytope realization with automatic apex placement, starting
/// from a regular simplex.
pub fn stacked_realization(tree: &StackingTree, d: usize) -> Result<Polytope> {
    let plan = stack_plan(tree, d)?;
    let mut p = hull(&regular_simplex(d, 1.0), Form::Euclidean)?;
    for step in plan.steps.iter().skip(1) {
        let base = step.base.as_ref().unwrap();
        let idx = p.facets().iter().position(|f| f == base).ok_or(Error::NotAStacking)?;
        p = p.stack(idx, None)?;
    }
    Ok(p)
}

/// Regular d-simplex centered at the origin with the given circumradius.
pub fn regular_simplex(d: usize, circumradius: f64) -> Vec<Vec<f64>> {
    let n = d + 1;
    let basis = crate::linalg::orthogonal_complement(&[normalize(&vec![1.0; n])], n);
    (0..n)
        .map(|i| {
            let v: Vec<f64> = (0..n).map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64).collect();
            let c: Vec<f64> = basis.iter().map(|b| dot(b, &v)).collect();
            scale(&normalize(&c), circumradius)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct StackedAnalysis {
    /// Simplices of the stacked triangulation (vertex sets).
    pub simplices: Vec<Vec<usize>>,
    pub tree: StackingTree,
    pub max_degree: usize,
    /// Whether every node of the dual tree has degree at most 3.
    pub inscribable: bool,
}

/// Reconstruct the stacked triangulation by peeling vertices of degree d
/// whose link is the boundary of a (d-1)-simplex.
pub fn stacked_analysis(l: &FaceLattice) -> Result<StackedAnalysis> {
    let d = l.dim();
    if !l.is_simplicial() {
        return Err(Error::NotStacked);
    }
    let mut facets: Vec<Vec<usize>> = l.facets().to_vec();
    let mut alive: Vec<usize> = (0..l.n_vertices()).collect();
    let mut simplices = Vec::new();
    while alive.len() > d + 1 {
        let found = alive.iter().copied().find_map(|v| {
            let star: Vec<&Vec<usize>> = facets.iter().filter(|f| f.contains(&v)).collect();
            if star.len() != d {
                return None;
            }
            let mut link: Vec<usize> = star.iter().flat_map(|f| f.iter().copied()).filter(|&u| u != v).collect();
            link.sort_unstable();
            link.dedup();
            if link.len() != d || facets.contains(&link) {
                return None;
            }
            Some((v, link))
        });
        let Some((v, link)) = found else {
            return Err(Error::NotStacked);
        };
        facets.retain(|f| !f.contains(&v));
        facets.push(link.clone());
        let mut s = link;
        s.push(v);
        s.sort_unstable();
        simplices.push(s);
        alive.retain(|&u| u != v);
    }
    if facets.len() != d + 1 {
        return Err(Error::NotStacked);
    }
    simplices.push(alive.clone());
    simplices.reverse();
    let m = simplices.len();
    let mut edges = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let shared = simplices[a].iter().filter(|x| simplices[b].contains(x)).count();
            if shared == d {
                edges.push((a, b));
            }
        }
    }
    let tree = StackingTree::new(m, edges).map_err(|_| Error::NotStacked)?;
    let max_degree = tree.max_degree();
    Ok(StackedAnalysis { simplices, tree, max_degree, inscribable: max_degree <= 3 })
}

/// A realization of the odd-dimensional `C(d, n)` with a k-set that
/// contains no facet: the k-set is the upper split vertex of the
/// (1, d-1)-scribed construction together with k-1 equatorial vertices
/// lifted slightly, the other equatorial vertices being lowered.
pub fn odd_kset_counterexample(d: usize, n: usize, k: usize) -> Result<(Polytope, KSet)> {
    if d % 2 == 0 {
        return Err(Error::Precondition(format!("d must be odd, got {d}")));
    }
    if k < 1 || k > n - 2 {
        return Err(Error::Precondition(format!("need 1 <= k <= n - 2, got {k}")));
    }
    let base = crate::constructions::odd_cyclic_scribed(d, n)?.polytope;
    let lat = base.lattice.clone();
    let plus = (0..n).find(|&i| base.vertices[i][0] > 0.5).ok_or_else(|| Error::ConstructionFailed("no split vertex".into()))?;
    let equator: Vec<usize> = (0..n).filter(|&i| base.vertices[i][0].abs() < 1e-12).collect();
    let chosen = equator
        .iter()
        .copied()
        .combinations(k - 1)
        .find(|s| {
            let mut set = s.clone();
            set.push(plus);
            !lat.facets().iter().any(|f| f.iter().all(|v| set.contains(v)))
        })
        .ok_or_else(|| Error::ConstructionFailed(format!("every {k}-set through the split vertex contains a facet")))?;
    let mut set = chosen.clone();
    set.push(plus);
    set.sort_unstable();
    let edge = lat.edges().iter().map(|&(a, b)| crate::linalg::norm(&crate::linalg::sub(&base.vertices[a], &base.vertices[b]))).fold(f64::INFINITY, f64::min);
    let mut eps = 1e-2 * edge;
    for _ in 0..40 {
        let mut pts = base.vertices.clone();
        for &i in &equator {
            pts[i][0] = if chosen.contains(&i) { eps } else { -eps };
        }
        let h = crate::polytope::hull_with_tol(&pts, Form::Euclidean, crate::error::EPS_PRED)?;
        if h.kept.len() == n && h.polytope.lattice == lat {
            if let Some(ks) = separate(&pts, &set) {
                return Ok((h.polytope, ks));
            }
        }
        eps *= 0.5;
    }
    Err(Error::ConstructionFailed("lifting changed the lattice at every height tried".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_based(s: &[usize]) -> Vec<usize> {
        s.iter().map(|i| i - 1).collect()
    }

    #[test]
    fn gale_examples() {
        assert!(gale_is_facet(4, 7, &one_based(&[1, 2, 3, 4])).unwrap());
        assert!(gale_is_facet(4, 7, &one_based(&[2, 3, 5, 6])).unwrap());
        assert!(!gale_is_facet(4, 7, &one_based(&[1, 2, 4, 6])).unwrap());
        assert!(gale_is_facet(4, 7, &[0, 1, 2]).is_err());
    }

    #[test]
    fn cyclic_counts() {
        assert_eq!(cyclic_lattice(3, 6).unwrap().f_vector(), vec![6, 12, 8]);
        assert_eq!(cyclic_lattice(4, 7).unwrap().facets().len(), 14);
        let c48 = cyclic_lattice(4, 8).unwrap();
        assert_eq!(c48.edges().len(), 28);
    }

    #[test]
    fn realizations_are_cyclic() {
        cyclic_realization(4, 7, &Curve::Moment).unwrap();
        let t = cyclic_realization(4, 8, &Curve::Trigonometric).unwrap();
        for v in &t.vertices {
            assert!((crate::linalg::norm(v) - 1.0).abs() < 1e-12);
        }
        cyclic_realization(4, 7, &Curve::ClusteredMoment {
            eps: BigRational::new(1.into(), 1000.into()),
            pivot: Q::from_integer(0.into()),
        }).unwrap();
        cyclic_realization(4, 8, &Curve::ClusteredTrigonometric { eps: 0.2, pivot: 0.0 }).unwrap();
    }

    #[test]
    fn neighborliness_values() {
        assert_eq!(neighborliness(&cyclic_lattice(4, 8).unwrap()), 2);
        assert_eq!(neighborliness(&cyclic_lattice(6, 10).unwrap()), 3);
        assert_eq!(neighborliness(&FaceLattice::simplex(4)), 4);
    }

    #[test]
    fn small_k_sets() {
        let tri = hull(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], Form::Euclidean).unwrap();
        assert_eq!(k_sets(&tri, 1).len(), 3);
        let sq = hull(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]], Form::Euclidean).unwrap();
        let ks = k_sets(&sq, 2);
        assert_eq!(ks.len(), 4);
        assert!(ks.iter().all(|k| k.set != vec![0, 2] && k.set != vec![1, 3]));
    }

    #[test]
    fn missing_faces_examples() {
        let sq = FaceLattice::from_facets(4, 2, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        assert_eq!(missing_faces(&sq, 2), vec![vec![0, 2], vec![1, 3]]);
        assert!(missing_faces(&FaceLattice::simplex(3), 3).is_empty());
    }

    #[test]
    fn stacked_trees() {
        let tri = FaceLattice::simplex(3);
        let triakis = (0..4).fold(tri, |l, _| {
            // stack on the first facet that contains only original vertices
            let i = l.facets().iter().position(|f| f.iter().all(|&v| v < 4)).unwrap();
            l.stacked(i).unwrap()
        });
        assert_eq!(triakis.n_vertices(), 8);
        assert_eq!(triakis.facets().len(), 12);
        let a = stacked_analysis(&triakis).unwrap();
        assert_eq!(a.tree.n_nodes, 5);
        assert_eq!(a.max_degree, 4);
        assert!(!a.inscribable);

        let path = stack_plan(&StackingTree::path(4), 3).unwrap().lattice().unwrap();
        let a = stacked_analysis(&path).unwrap();
        assert_eq!(a.max_degree, 2);
        assert!(a.inscribable);

        let s = stacked_analysis(&FaceLattice::simplex(3)).unwrap();
        assert_eq!(s.tree.n_nodes, 1);
        assert!(s.inscribable);
    }

    #[test]
    fn odd_kset_refuses_even() {
        assert!(matches!(odd_kset_counterexample(4, 8, 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn stacked_realization_matches_plan() {
        let t = StackingTree::random(7, 4, 4, 3);
        let p = stacked_realization(&t, 3).unwrap();
        assert_eq!(p.lattice, stack_plan(&t, 3).unwrap().lattice().unwrap());
        let a = stacked_analysis(&p.lattice).unwrap();
        assert!(crate::iso::graphs_isomorphic(7, &a.tree.edges, &t.edges));
    }
}
