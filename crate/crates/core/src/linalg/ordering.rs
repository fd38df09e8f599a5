use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::SparseSymMatrix;

/// Reverse Cuthill-McKee permutation of the adjacency graph of `a`.
///
/// Returns `perm` with `perm[new] = old`. Each connected component is started
/// from a pseudo-peripheral vertex.
pub fn reverse_cuthill_mckee(a: &SparseSymMatrix) -> Vec<usize> {
    let n = a.dim();
    let adj = adjacency(a);
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(&adj, seed);
        let mut queue = VecDeque::new();
        queue.push_back(start);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&u| !visited[u]).collect();
            next.sort_by_key(|&u| (degree[u], u));
            for u in next {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

fn adjacency(a: &SparseSymMatrix) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); a.dim()];
    for (i, j, _) in a.iter_upper() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    adj
}

/// Level structure of a BFS from `root`: (eccentricity, vertices of the last level).
fn bfs_levels(adj: &[Vec<usize>], root: usize) -> (usize, Vec<usize>) {
    let mut level = vec![usize::MAX; adj.len()];
    level[root] = 0;
    let mut frontier = vec![root];
    let mut depth = 0;
    loop {
        let mut next = Vec::new();
        for &v in &frontier {
            for &u in &adj[v] {
                if level[u] == usize::MAX {
                    level[u] = depth + 1;
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            return (depth, frontier);
        }
        frontier = next;
        depth += 1;
    }
}

fn pseudo_peripheral(adj: &[Vec<usize>], seed: usize) -> usize {
    let mut root = seed;
    let (mut ecc, mut last) = bfs_levels(adj, root);
    loop {
        let candidate = match last.iter().copied().min_by_key(|&v| (adj[v].len(), v)) {
            Some(c) => c,
            None => return root,
        };
        let (e, l) = bfs_levels(adj, candidate);
        if e <= ecc {
            return root;
        }
        root = candidate;
        ecc = e;
        last = l;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bandwidth(a: &SparseSymMatrix, perm: &[usize]) -> usize {
        let mut inv = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        a.iter_upper().map(|(i, j, _)| inv[i].abs_diff(inv[j])).max().unwrap_or(0)
    }

    #[test]
    fn is_a_permutation_and_reduces_bandwidth() {
        // Path graph numbered in a scrambled order.
        let n = 20;
        let label = |k: usize| (k * 7) % n;
        let mut t = Vec::new();
        for k in 0..n {
            t.push((label(k), label(k), 2.0));
            if k + 1 < n {
                t.push((label(k), label(k + 1), -1.0));
                t.push((label(k + 1), label(k), -1.0));
            }
        }
        let a = SparseSymMatrix::from_triplets(n, &t).unwrap();
        let perm = reverse_cuthill_mckee(&a);
        let mut sorted = perm.clone();
        sorted.sort();
        assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        assert_eq!(bandwidth(&a, &perm), 1);
    }

    #[test]
    fn handles_disconnected_graphs() {
        let a = SparseSymMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let mut perm = reverse_cuthill_mckee(&a);
        perm.sort();
        assert_eq!(perm, vec![0, 1, 2]);
    }
}
