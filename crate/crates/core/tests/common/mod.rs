#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reserve_core::instance::{grid_edges, Instance, Species, SpeciesClass};

/// Graph shapes used by the small randomized instances.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> (usize, Vec<(usize, usize)>) {
    loop {
        let (n, edges) = match rng.gen_range(0..4) {
            0 => {
                let n = rng.gen_range(3..=max_nodes.min(8));
                (n, (0..n - 1).map(|i| (i, i + 1)).collect())
            }
            1 => {
                let (r, c) = [(2, 3), (3, 3), (3, 4), (2, 4), (2, 5)][rng.gen_range(0..5)];
                (r * c, grid_edges(r, c))
            }
            2 => {
                // two disjoint paths
                let a = rng.gen_range(2..=4);
                let b = rng.gen_range(2..=4);
                let mut e: Vec<(usize, usize)> = (0..a - 1).map(|i| (i, i + 1)).collect();
                e.extend((a..a + b - 1).map(|i| (i, i + 1)));
                (a + b, e)
            }
            _ => {
                // 2x2 grid next to a path
                let mut e = grid_edges(2, 2);
                let b = rng.gen_range(2..=5);
                e.extend((4..4 + b - 1).map(|i| (i, i + 1)));
                (4 + b, e)
            }
        };
        if n <= max_nodes {
            return (n, edges);
        }
    }
}

/// Small instance with integer data, one or two species per class.
pub fn random_instance(seed: u64, max_nodes: usize, k: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, edges) = random_graph(&mut rng, max_nodes);
    let cost: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=20) as f64).collect();
    let n1 = rng.gen_range(1..=2);
    let n2 = rng.gen_range(0..=2);
    let mut species = Vec::new();
    for (class, count) in [(SpeciesClass::Core, n1), (SpeciesClass::Reserve, n2)] {
        for _ in 0..count {
            let mut w = Vec::new();
            for i in 0..n {
                if rng.gen_bool(0.45) {
                    w.push((i, rng.gen_range(1..=10) as f64));
                }
            }
            let total: f64 = w.iter().map(|e| e.1).sum();
            let frac = rng.gen_range(0.15..0.6);
            species.push(Species::new(class, w, (total * frac).ceil()));
        }
    }
    let p1 = rng.gen_range(0..=n1);
    let p2 = rng.gen_range(0..=n2);
    Instance::new(n, edges, cost, species, p1, p2, 1, k).unwrap()
}
