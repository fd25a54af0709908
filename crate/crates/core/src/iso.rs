//! Colored-graph isomorphism by color refinement plus backtracking.

use std::collections::{BTreeMap, HashSet};

fn refine(adj: &[Vec<usize>], colors: &mut [u64], other_adj: &[Vec<usize>], other: &mut [u64]) {
    loop {
        let sig = |adj: &[Vec<usize>], colors: &[u64], v: usize| {
            let mut nb: Vec<u64> = adj[v].iter().map(|&u| colors[u]).collect();
            nb.sort_unstable();
            (colors[v], nb)
        };
        let sa: Vec<_> = (0..adj.len()).map(|v| sig(adj, colors, v)).collect();
        let sb: Vec<_> = (0..other_adj.len()).map(|v| sig(other_adj, other, v)).collect();
        let mut table = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            let next = table.len() as u64;
            table.entry(s.clone()).or_insert(next);
        }
        let na: Vec<u64> = sa.iter().map(|s| table[s]).collect();
        let nb: Vec<u64> = sb.iter().map(|s| table[s]).collect();
        let before = colors.iter().collect::<HashSet<_>>().len() + other.iter().collect::<HashSet<_>>().len();
        let after = na.iter().collect::<HashSet<_>>().len() + nb.iter().collect::<HashSet<_>>().len();
        colors.copy_from_slice(&na);
        other.copy_from_slice(&nb);
        if after == before {
            break;
        }
    }
}

fn histogram(colors: &[u64]) -> Vec<u64> {
    let mut h = colors.to_vec();
    h.sort_unstable();
    h
}

/// Find a color-preserving isomorphism `f` from graph A to graph B
/// (`f[a] = b`), if one exists.
pub fn find_isomorphism(
    adj_a: &[Vec<usize>],
    colors_a: &[u64],
    adj_b: &[Vec<usize>],
    colors_b: &[u64],
) -> Option<Vec<usize>> {
    let n = adj_a.len();
    if n != adj_b.len() {
        return None;
    }
    let ea: usize = adj_a.iter().map(Vec::len).sum();
    let eb: usize = adj_b.iter().map(Vec::len).sum();
    if ea != eb {
        return None;
    }
    let set_b: Vec<HashSet<usize>> = adj_b.iter().map(|v| v.iter().copied().collect()).collect();
    let mut ca = colors_a.to_vec();
    let mut cb = colors_b.to_vec();
    refine(adj_a, &mut ca, adj_b, &mut cb);
    let mut budget: u64 = 200_000;
    search(adj_a, adj_b, &set_b, ca, cb, &mut budget)
}

/// Individualize one vertex of the smallest non-trivial color class against
/// every candidate of the same color, refining after each choice.
fn search(
    adj_a: &[Vec<usize>],
    adj_b: &[Vec<usize>],
    set_b: &[HashSet<usize>],
    ca: Vec<u64>,
    cb: Vec<u64>,
    budget: &mut u64,
) -> Option<Vec<usize>> {
    if histogram(&ca) != histogram(&cb) || *budget == 0 {
        return None;
    }
    *budget -= 1;
    let mut count: BTreeMap<u64, usize> = BTreeMap::new();
    for &c in &ca {
        *count.entry(c).or_default() += 1;
    }
    let pick = (0..ca.len()).filter(|&v| count[&ca[v]] > 1).min_by_key(|&v| (count[&ca[v]], v));
    let Some(v) = pick else {
        // discrete coloring: the map is forced
        let pos: BTreeMap<u64, usize> = cb.iter().enumerate().map(|(w, &c)| (c, w)).collect();
        let map: Vec<usize> = ca.iter().map(|c| pos[c]).collect();
        let ok = adj_a.iter().enumerate().all(|(u, nb)| nb.iter().all(|x| set_b[map[u]].contains(&map[*x])));
        return ok.then_some(map);
    };
    let fresh = ca.iter().chain(cb.iter()).max().copied().unwrap_or(0) + 1;
    for w in (0..cb.len()).filter(|&w| cb[w] == ca[v]) {
        let mut na = ca.clone();
        let mut nb = cb.clone();
        na[v] = fresh;
        nb[w] = fresh;
        refine(adj_a, &mut na, adj_b, &mut nb);
        if let Some(m) = search(adj_a, adj_b, set_b, na, nb, budget) {
            return Some(m);
        }
    }
    None
}

/// Isomorphism test for uncolored simple graphs given as edge lists.
pub fn graphs_isomorphic(n: usize, edges_a: &[(usize, usize)], edges_b: &[(usize, usize)]) -> bool {
    let to_adj = |edges: &[(usize, usize)]| {
        let mut adj = vec![vec![]; n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    };
    find_isomorphism(&to_adj(edges_a), &vec![0; n], &to_adj(edges_b), &vec![0; n]).is_some()
}
