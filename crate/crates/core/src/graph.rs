//! Neighborhoods and connected components on the parcel graph.

use std::collections::VecDeque;

/// Nodes within `d` hops of `i`, excluding `i`, sorted ascending.
pub fn d_neighborhood(adj: &[Vec<usize>], i: usize, d: usize) -> Vec<usize> {
    if d == 0 {
        return Vec::new();
    }
    let mut dist = vec![usize::MAX; adj.len()];
    dist[i] = 0;
    let mut queue = VecDeque::from([i]);
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        if dist[v] == d {
            continue;
        }
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    out.sort_unstable();
    out
}

/// `δ_d⁺(i)` for every node: the `d`-neighborhood plus the node itself.
#[derive(Debug, Clone)]
pub struct ClosedNeighborhoods {
    sets: Vec<Vec<usize>>,
}

impl ClosedNeighborhoods {
    pub fn new(adj: &[Vec<usize>], d: usize) -> Self {
        let sets = (0..adj.len())
            .map(|i| {
                let mut s = d_neighborhood(adj, i, d);
                let pos = s.binary_search(&i).unwrap_err();
                s.insert(pos, i);
                s
            })
            .collect();
        ClosedNeighborhoods { sets }
    }

    pub fn of(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Components of the subgraph induced by `subset`, each sorted ascending
/// (so the minimum-index node comes first), ordered by that minimum.
pub fn connected_components(adj: &[Vec<usize>], subset: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut comps = Vec::new();
    for start in 0..adj.len() {
        if !subset[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if subset[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Nodes outside `set` adjacent to some node of `set`, sorted.
pub fn outer_boundary(adj: &[Vec<usize>], set: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; adj.len()];
    for &i in set {
        inside[i] = true;
    }
    let mut mark = vec![false; adj.len()];
    let mut out = Vec::new();
    for &i in set {
        for &j in &adj[i] {
            if !inside[j] && !mark[j] {
                mark[j] = true;
                out.push(j);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::tests_support::adjacency;
    use super::*;
    use crate::instance::grid_edges;

    #[test]
    fn grid_neighborhoods() {
        let adj = adjacency(9, &grid_edges(3, 3));
        assert_eq!(d_neighborhood(&adj, 4, 1), vec![1, 3, 5, 7]);
        assert_eq!(d_neighborhood(&adj, 0, 2), vec![1, 2, 3, 4, 6]);
        assert!(d_neighborhood(&adj, 4, 0).is_empty());
        let closed = ClosedNeighborhoods::new(&adj, 1);
        assert_eq!(closed.of(0), &[0, 1, 3]);
    }

    #[test]
    fn components() {
        let path = adjacency(3, &[(0, 1), (1, 2)]);
        assert_eq!(connected_components(&path, &[true, false, true]), vec![vec![0], vec![2]]);
        assert!(connected_components(&path, &[false; 3]).is_empty());
        let grid = adjacency(9, &grid_edges(3, 3));
        let mut subset = vec![false; 9];
        for i in [3, 0, 1] {
            subset[i] = true;
        }
        assert_eq!(connected_components(&grid, &subset), vec![vec![0, 1, 3]]);
    }

    #[test]
    fn boundary() {
        let grid = adjacency(9, &grid_edges(3, 3));
        assert_eq!(outer_boundary(&grid, &[8]), vec![5, 7]);
        assert_eq!(outer_boundary(&grid, &[0, 1]), vec![2, 3, 4]);
    }

    proptest::proptest! {
        #[test]
        fn neighborhood_symmetric(rows in 1usize..5, cols in 2usize..5, d in 0usize..4) {
            let n = rows * cols;
            let adj = adjacency(n, &grid_edges(rows, cols));
            for i in 0..n {
                let ni = d_neighborhood(&adj, i, d);
                proptest::prop_assert!(!ni.contains(&i));
                for &j in &ni {
                    proptest::prop_assert!(d_neighborhood(&adj, j, d).contains(&i));
                }
            }
        }
    }
}
