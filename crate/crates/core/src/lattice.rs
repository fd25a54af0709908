//! Graded face lattices stored as vertex-index sets.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::iso::find_isomorphism;

/// Face lattice of a d-polytope. `faces[r + 1]` holds the rank-r faces, so
/// index 0 is the empty face and index `d + 1` the whole polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    dim: usize,
    n_vertices: usize,
    faces: Vec<Vec<Vec<usize>>>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl FaceLattice {
    /// Build the lattice generated by the facets under intersection. Ranks
    /// are longest-chain lengths; the result is checked to be graded with top
    /// rank `dim`.
    pub fn from_facets(n_vertices: usize, dim: usize, facets: &[Vec<usize>]) -> Result<FaceLattice> {
        if dim == 0 {
            if n_vertices != 1 {
                return Err(Error::LatticeMismatch("a 0-polytope has one vertex".into()));
            }
            return Ok(FaceLattice { dim, n_vertices, faces: vec![vec![vec![]], vec![vec![0]]] });
        }
        let mut facets: Vec<Vec<usize>> = facets
            .iter()
            .map(|f| {
                let mut f = f.clone();
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        facets.sort();
        facets.dedup();
        let full: Vec<usize> = (0..n_vertices).collect();

        let mut all: HashSet<Vec<usize>> = facets.iter().cloned().collect();
        let mut frontier: Vec<Vec<usize>> = facets.clone();
        while let Some(f) = frontier.pop() {
            for g in &facets {
                let h = intersect(&f, g);
                if !all.contains(&h) {
                    all.insert(h.clone());
                    frontier.push(h);
                }
            }
        }
        all.insert(vec![]);
        all.insert(full.clone());

        let mut list: Vec<Vec<usize>> = all.into_iter().collect();
        list.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut rank: Vec<isize> = vec![-1; list.len()];
        for i in 1..list.len() {
            let mut r = -1;
            for j in 0..i {
                if list[j].len() < list[i].len() && is_subset(&list[j], &list[i]) {
                    r = r.max(rank[j]);
                }
            }
            rank[i] = r + 1;
        }
        let top = *rank.last().unwrap();
        if top != dim as isize {
            return Err(Error::LatticeMismatch(format!("top rank {top}, expected {dim}")));
        }
        let mut faces = vec![Vec::new(); dim + 2];
        for (f, r) in list.into_iter().zip(&rank) {
            faces[(r + 1) as usize].push(f);
        }
        for level in faces.iter_mut() {
            level.sort();
        }
        let lat = FaceLattice { dim, n_vertices, faces };
        lat.check_graded()?;
        Ok(lat)
    }

    fn check_graded(&self) -> Result<()> {
        if self.faces[1].len() != self.n_vertices || self.faces[1].iter().enumerate().any(|(i, f)| f != &vec![i]) {
            return Err(Error::LatticeMismatch("atoms are not the single vertices".into()));
        }
        if self.dim >= 1 && self.facets().iter().any(|f| f.len() < self.dim) {
            return Err(Error::LatticeMismatch("facet with too few vertices".into()));
        }
        // every face of rank r < d is covered only by rank r+1 faces
        for r in 0..self.dim {
            for f in self.faces_of_rank(r as isize) {
                let covers = self.covers(f, r as isize);
                if covers.is_empty() {
                    return Err(Error::LatticeMismatch(format!("face {f:?} has no cover")));
                }
            }
        }
        if self.euler_sum() != 0 {
            return Err(Error::LatticeMismatch("Euler relation fails".into()));
        }
        Ok(())
    }

    /// Faces of rank `r + 1` containing `f`; errors if some minimal superset
    /// skips a rank.
    fn covers(&self, f: &[usize], r: isize) -> Vec<usize> {
        self.faces_of_rank(r + 1)
            .iter()
            .enumerate()
            .filter(|(_, g)| is_subset(f, g))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Faces of rank `r`, for `-1 <= r <= dim`.
    pub fn faces_of_rank(&self, r: isize) -> &[Vec<usize>] {
        if r < -1 || r > self.dim as isize {
            return &[];
        }
        &self.faces[(r + 1) as usize]
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        self.faces_of_rank(self.dim as isize - 1)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.faces_of_rank(1).iter().filter(|e| e.len() == 2).map(|e| (e[0], e[1])).collect()
    }

    /// Number of faces of each rank `0..dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim).map(|r| self.faces_of_rank(r as isize).len()).collect()
    }

    pub fn euler_sum(&self) -> i64 {
        (0..self.faces.len())
            .map(|i| {
                let s = if i % 2 == 0 { -1 } else { 1 };
                s * self.faces[i].len() as i64
            })
            .sum()
    }

    /// Every face in rank order, ranks -1 through `dim`.
    pub fn all_faces(&self) -> impl Iterator<Item = (isize, &Vec<usize>)> {
        self.faces
            .iter()
            .enumerate()
            .flat_map(|(i, fs)| fs.iter().map(move |f| (i as isize - 1, f)))
    }

    pub fn rank_of(&self, face: &[usize]) -> Option<isize> {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        self.faces
            .iter()
            .position(|fs| fs.binary_search(&f).is_ok())
            .map(|i| i as isize - 1)
    }

    pub fn is_face(&self, face: &[usize]) -> bool {
        self.rank_of(face).is_some()
    }

    /// Indices (into `facets()`) of the facets containing `face`.
    pub fn facets_containing(&self, face: &[usize]) -> Vec<usize> {
        let mut f = face.to_vec();
        f.sort_unstable();
        self.facets().iter().enumerate().filter(|(_, g)| is_subset(&f, g)).map(|(i, _)| i).collect()
    }

    /// Smallest face containing the given vertices.
    pub fn closure(&self, set: &[usize]) -> Vec<usize> {
        let cf = self.facets_containing(set);
        if cf.is_empty() {
            return (0..self.n_vertices).collect();
        }
        let mut acc = self.facets()[cf[0]].clone();
        for &i in &cf[1..] {
            acc = intersect(&acc, &self.facets()[i]);
        }
        acc
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges()
            .into_iter()
            .filter_map(|(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_simplicial(&self) -> bool {
        self.facets().iter().all(|f| f.len() == self.dim)
    }

    pub fn is_simple(&self) -> bool {
        (0..self.n_vertices).all(|v| self.facets_containing(&[v]).len() == self.dim)
    }

    /// The order-reverse lattice. Dual vertex `i` is facet `i` of `self`;
    /// dual facet `v` is the set of facets containing vertex `v`.
    pub fn dual(&self) -> FaceLattice {
        let dual_facets: Vec<Vec<usize>> = (0..self.n_vertices).map(|v| self.facets_containing(&[v])).collect();
        FaceLattice::from_facets(self.facets().len(), self.dim, &dual_facets).expect("dual of a valid lattice")
    }

    /// The face associated to `face` in the dual lattice (as dual vertex ids).
    pub fn associated_face(&self, face: &[usize]) -> Vec<usize> {
        self.facets_containing(face)
    }

    /// Interval `[face, P]`, reranked as a lattice of dimension
    /// `dim - rank(face) - 1`. Its vertices are the faces covering `face`, in
    /// lattice order.
    pub fn interval_above(&self, face: &[usize]) -> Result<FaceLattice> {
        let r = self.rank_of(face).ok_or_else(|| Error::NotAFace(face.to_vec()))?;
        if r >= self.dim as isize {
            return Err(Error::InvalidArgument("face figure of the whole polytope".into()));
        }
        let mut f = face.to_vec();
        f.sort_unstable();
        let covering: Vec<&Vec<usize>> = self.faces_of_rank(r + 1).iter().filter(|g| is_subset(&f, g)).collect();
        let new_dim = (self.dim as isize - r - 1) as usize;
        if new_dim == 0 {
            return FaceLattice::from_facets(1, 0, &[]);
        }
        let facets: Vec<Vec<usize>> = self
            .facets()
            .iter()
            .filter(|g| is_subset(&f, g))
            .map(|g| {
                covering
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| is_subset(c, g))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        FaceLattice::from_facets(covering.len(), new_dim, &facets)
    }

    /// Rename vertex `i` to `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> FaceLattice {
        let faces = self
            .faces
            .iter()
            .map(|fs| {
                let mut out: Vec<Vec<usize>> = fs
                    .iter()
                    .map(|f| {
                        let mut g: Vec<usize> = f.iter().map(|&v| perm[v]).collect();
                        g.sort_unstable();
                        g
                    })
                    .collect();
                out.sort();
                out
            })
            .collect();
        FaceLattice { dim: self.dim, n_vertices: self.n_vertices, faces }
    }

    /// A vertex bijection `self -> other` carrying faces to faces, if any.
    pub fn isomorphism(&self, other: &FaceLattice) -> Option<Vec<usize>> {
        if self.dim != other.dim || self.n_vertices != other.n_vertices || self.f_vector() != other.f_vector() {
            return None;
        }
        let graph = |l: &FaceLattice| {
            let n = l.n_vertices;
            let mut adj = vec![Vec::new(); n + l.facets().len()];
            for (i, f) in l.facets().iter().enumerate() {
                for &v in f {
                    adj[v].push(n + i);
                    adj[n + i].push(v);
                }
            }
            let colors: Vec<u64> = (0..adj.len()).map(|i| if i < n { 0 } else { 1 }).collect();
            (adj, colors)
        };
        let (aa, ca) = graph(self);
        let (ab, cb) = graph(other);
        let map = find_isomorphism(&aa, &ca, &ab, &cb)?;
        Some(map[..self.n_vertices].to_vec())
    }

    pub fn is_isomorphic(&self, other: &FaceLattice) -> bool {
        self.isomorphism(other).is_some()
    }

    /// Facet sets as a sorted set, for exact comparisons.
    pub fn facet_set(&self) -> BTreeSet<Vec<usize>> {
        self.facets().iter().cloned().collect()
    }

    /// Lattice after stacking a new vertex (index `n`) on the simplicial
    /// facet with index `facet`.
    pub fn stacked(&self, facet: usize) -> Result<FaceLattice> {
        let f = self.facets().get(facet).ok_or_else(|| Error::InvalidArgument(format!("no facet {facet}")))?;
        if f.len() != self.dim {
            return Err(Error::NotSimplicial);
        }
        let apex = self.n_vertices;
        let mut facets: Vec<Vec<usize>> =
            self.facets().iter().enumerate().filter(|(i, _)| *i != facet).map(|(_, g)| g.clone()).collect();
        for &u in f {
            let mut g: Vec<usize> = f.iter().copied().filter(|&x| x != u).collect();
            g.push(apex);
            facets.push(g);
        }
        FaceLattice::from_facets(self.n_vertices + 1, self.dim, &facets)
    }

    /// Lattice after cutting off the simple vertex `v`. Remaining vertices
    /// keep their order (indices above `v` shift down by one); the new
    /// vertices follow, one per neighbor of `v` in increasing order.
    pub fn truncated(&self, v: usize) -> Result<(FaceLattice, Vec<usize>)> {
        let nbrs = self.neighbors(v);
        if nbrs.len() != self.dim || self.facets_containing(&[v]).len() != self.dim {
            return Err(Error::NotSimple(v));
        }
        let old = |u: usize| if u < v { u } else { u - 1 };
        let base = self.n_vertices - 1;
        let new_of: HashMap<usize, usize> = nbrs.iter().enumerate().map(|(k, &w)| (w, base + k)).collect();
        let mut facets = Vec::new();
        for g in self.facets() {
            if g.contains(&v) {
                let mut h: Vec<usize> = g.iter().filter(|&&u| u != v).map(|&u| old(u)).collect();
                h.extend(g.iter().filter_map(|u| new_of.get(u)).copied());
                facets.push(h);
            } else {
                facets.push(g.iter().map(|&u| old(u)).collect());
            }
        }
        facets.push((base..base + nbrs.len()).collect());
        let lat = FaceLattice::from_facets(base + nbrs.len(), self.dim, &facets)?;
        Ok((lat, nbrs))
    }

    /// Lattice of the pyramid; the apex gets index `n`.
    pub fn pyramid(&self) -> FaceLattice {
        let apex = self.n_vertices;
        let mut facets: Vec<Vec<usize>> = vec![(0..self.n_vertices).collect()];
        if self.dim == 0 {
            facets.push(vec![apex]);
        } else {
            for g in self.facets() {
                let mut h = g.clone();
                h.push(apex);
                facets.push(h);
            }
        }
        FaceLattice::from_facets(self.n_vertices + 1, self.dim + 1, &facets).expect("pyramid of a valid lattice")
    }

    /// Boundary complex of the d-simplex on vertices `0..=d`.
    pub fn simplex(dim: usize) -> FaceLattice {
        let facets: Vec<Vec<usize>> = (0..=dim).map(|i| (0..=dim).filter(|&j| j != i).collect()).collect();
        FaceLattice::from_facets(dim + 1, dim, &facets).expect("simplex lattice")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> FaceLattice {
        // vertex bits (x,y,z) = index
        let mut facets = Vec::new();
        for axis in 0..3 {
            for val in 0..2 {
                facets.push((0..8).filter(|v| (v >> axis) & 1 == val).collect());
            }
        }
        FaceLattice::from_facets(8, 3, &facets).unwrap()
    }

    #[test]
    fn cube_counts_and_euler() {
        let c = cube();
        assert_eq!(c.f_vector(), vec![8, 12, 6]);
        assert_eq!(c.euler_sum(), 0);
        assert!(c.is_simple());
    }

    #[test]
    fn cube_dual_is_octahedron() {
        let d = cube().dual();
        assert_eq!(d.f_vector(), vec![6, 12, 8]);
        assert!(d.is_simplicial());
        assert!(d.dual().is_isomorphic(&cube()));
    }

    #[test]
    fn cube_vertex_figure_is_triangle() {
        let vf = cube().interval_above(&[0]).unwrap();
        assert_eq!(vf.f_vector(), vec![3, 3]);
    }

    #[test]
    fn truncating_a_cube_vertex() {
        let (t, _) = cube().truncated(0).unwrap();
        assert_eq!(t.n_vertices(), 10);
        assert_eq!(t.facets().len(), 7);
    }

    #[test]
    fn stacking_on_simplex() {
        let s = FaceLattice::simplex(3).stacked(0).unwrap();
        assert_eq!(s.f_vector(), vec![5, 9, 6]);
    }

    #[test]
    fn pyramid_over_square() {
        let sq = FaceLattice::from_facets(4, 2, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        let p = sq.pyramid();
        assert_eq!(p.f_vector(), vec![5, 8, 5]);
        assert!(p.interval_above(&[4]).unwrap().is_isomorphic(&sq));
    }

    #[test]
    fn truncation_is_dual_to_stacking() {
        let c = cube();
        let (t, _) = c.truncated(3).unwrap();
        let d = c.dual();
        let fi = d.facets().iter().position(|f| *f == c.facets_containing(&[3])).unwrap();
        assert!(d.stacked(fi).unwrap().dual().is_isomorphic(&t));
    }
}
