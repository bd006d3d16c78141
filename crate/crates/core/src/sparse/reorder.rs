use std::collections::VecDeque;

use super::{BandwidthProfile, Permutation, SparseMatrix};
use crate::scalar::Scalar;

/// Upper bound on the real (permutation-minimized) bandwidth.
///
/// Runs reverse Cuthill–McKee on the symmetrized pattern and keeps whichever
/// of the native and reordered layouts has the smaller total bandwidth. The
/// returned permutation realizes the returned profile through
/// [`SparseMatrix::permute_symmetric`].
pub fn real_bandwidth_estimate<T: Scalar>(a: &SparseMatrix<T>) -> (BandwidthProfile, Permutation) {
    let native = a.bandwidth();
    let n = a.n();
    if native.total <= 1 || n < 3 {
        return (native, Permutation::identity(n));
    }
    let adj = symmetric_adjacency(a);
    let order = reverse_cuthill_mckee(&adj);
    let perm = Permutation::from_order(&order).expect("RCM visits every vertex once");
    let reordered = a.permute_symmetric(&perm).expect("permutation sized to matrix").bandwidth();
    if reordered.total < native.total {
        (reordered, perm)
    } else {
        (native, Permutation::identity(n))
    }
}

fn symmetric_adjacency<T: Scalar>(a: &SparseMatrix<T>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); a.n()];
    for (i, j, _) in a.iter() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Breadth-first level structure from `root`, restricted to unvisited vertices.
fn level_structure(adj: &[Vec<usize>], root: usize, blocked: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = blocked.to_vec();
    seen[root] = true;
    let mut levels = vec![vec![root]];
    loop {
        let mut next = Vec::new();
        for &v in levels.last().expect("nonempty") {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

/// George–Liu search for a vertex of (near) maximal eccentricity.
fn pseudo_peripheral(adj: &[Vec<usize>], start: usize, blocked: &[bool]) -> usize {
    let mut root = start;
    let mut depth = level_structure(adj, root, blocked).len();
    loop {
        let levels = level_structure(adj, root, blocked);
        let candidate = *levels
            .last()
            .expect("nonempty")
            .iter()
            .min_by_key(|&&v| (adj[v].len(), v))
            .expect("nonempty level");
        let cand_depth = level_structure(adj, candidate, blocked).len();
        if cand_depth > depth {
            root = candidate;
            depth = cand_depth;
        } else {
            return root;
        }
    }
}

fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (adj[v].len(), v));

    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let root = pseudo_peripheral(adj, seed, &visited);
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut fresh: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            fresh.sort_by_key(|&w| (adj[w].len(), w));
            for w in fresh {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}
