//! Problem instances: land parcels, adjacency, costs and per-species
//! suitability scores, plus the synthetic grid generator and scenario helpers.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default quota fraction applied by the grid generator.
pub const DEFAULT_LAMBDA_FRACTION: f64 = 0.05;

/// Which protection class a species belongs to.
///
/// `Core` species must meet their quota inside the core area, `Reserve`
/// species anywhere in the reserve (core or buffer).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpeciesClass {
    Core,
    Reserve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub class: SpeciesClass,
    /// Sparse scores `(node, weight)`, sorted by node, strictly positive.
    weights: Vec<(usize, f64)>,
    pub lambda: f64,
}

impl Species {
    pub fn new(class: SpeciesClass, mut weights: Vec<(usize, f64)>, lambda: f64) -> Self {
        weights.retain(|&(_, w)| w > 0.0);
        weights.sort_by_key(|&(i, _)| i);
        Species {
            class,
            weights,
            lambda,
        }
    }

    /// Nodes with positive score together with the score.
    pub fn weights(&self) -> &[(usize, f64)] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().map(|&(_, w)| w).sum()
    }
}

/// The three conservation scenarios used for benchmark instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    A,
    B,
    C,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 3] = [ScenarioId::A, ScenarioId::B, ScenarioId::C];
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ScenarioId::A => "A",
            ScenarioId::B => "B",
            ScenarioId::C => "C",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ScenarioId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(ScenarioId::A),
            "B" => Ok(ScenarioId::B),
            "C" => Ok(ScenarioId::C),
            other => Err(Error::InvalidParameter(format!("unknown scenario {other:?}"))),
        }
    }
}

/// An immutable problem instance.
///
/// Species are stored with all core-class species first, so species index
/// `s` doubles as the position of `u_s` in every model.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
    cost: Vec<f64>,
    species: Vec<Species>,
    pub p1: usize,
    pub p2: usize,
    pub buffer_width: usize,
    pub max_components: usize,
    adjacency: Vec<Vec<usize>>,
}

impl Instance {
    /// Builds and validates an instance.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n_nodes: usize,
        edges: Vec<(usize, usize)>,
        cost: Vec<f64>,
        species: Vec<Species>,
        p1: usize,
        p2: usize,
        buffer_width: usize,
        max_components: usize,
    ) -> Result<Self> {
        if cost.len() != n_nodes {
            return Err(Error::InvalidInstance(format!(
                "{} costs for {} nodes",
                cost.len(),
                n_nodes
            )));
        }
        if let Some(i) = cost.iter().position(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidInstance(format!(
                "cost of node {i} must be positive, got {}",
                cost[i]
            )));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n_nodes || b >= n_nodes {
                return Err(Error::InvalidInstance(format!(
                    "edge ({a}, {b}) references an unknown node"
                )));
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop at node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({a}, {b})")));
            }
            normalized.push(e);
        }
        let mut saw_reserve = false;
        for (s, sp) in species.iter().enumerate() {
            match sp.class {
                SpeciesClass::Reserve => saw_reserve = true,
                SpeciesClass::Core if saw_reserve => {
                    return Err(Error::InvalidInstance(format!(
                        "species {s}: core-class species must precede reserve-class species"
                    )))
                }
                SpeciesClass::Core => {}
            }
            if let Some(&(i, _)) = sp.weights.iter().find(|&&(i, _)| i >= n_nodes) {
                return Err(Error::InvalidInstance(format!(
                    "species {s} scores unknown node {i}"
                )));
            }
            if sp.weights.iter().any(|&(_, w)| !w.is_finite()) {
                return Err(Error::InvalidInstance(format!("species {s}: non-finite score")));
            }
            if !(sp.lambda >= 0.0 && sp.lambda.is_finite()) {
                return Err(Error::InvalidInstance(format!(
                    "species {s}: quota must be nonnegative"
                )));
            }
        }
        let n1 = species.iter().filter(|s| s.class == SpeciesClass::Core).count();
        let n2 = species.len() - n1;
        if p1 > n1 || p2 > n2 {
            return Err(Error::InvalidInstance(format!(
                "protection counts ({p1}, {p2}) exceed species counts ({n1}, {n2})"
            )));
        }
        let mut adjacency = vec![Vec::new(); n_nodes];
        for &(a, b) in &normalized {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Ok(Instance {
            n_nodes,
            edges: normalized,
            cost,
            species,
            p1,
            p2,
            buffer_width,
            max_components,
            adjacency,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// Indices of core-class species (S1).
    pub fn s1(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.species.len()).filter(|&s| self.species[s].class == SpeciesClass::Core)
    }

    /// Indices of reserve-class species (S2).
    pub fn s2(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.species.len()).filter(|&s| self.species[s].class == SpeciesClass::Reserve)
    }

    pub fn n_s1(&self) -> usize {
        self.s1().count()
    }

    pub fn n_s2(&self) -> usize {
        self.s2().count()
    }

    /// Dense score row for species `s`.
    pub fn dense_weights(&self, s: usize) -> Vec<f64> {
        let mut w = vec![0.0; self.n_nodes];
        for &(i, v) in self.species[s].weights() {
            w[i] = v;
        }
        w
    }

    pub fn with_params(
        &self,
        p1: usize,
        p2: usize,
        buffer_width: usize,
        max_components: usize,
    ) -> Result<Self> {
        let mut out = self.clone();
        if p1 > self.n_s1() || p2 > self.n_s2() {
            return Err(Error::InvalidParameter(format!(
                "protection counts ({p1}, {p2}) exceed species counts ({}, {})",
                self.n_s1(),
                self.n_s2()
            )));
        }
        out.p1 = p1;
        out.p2 = p2;
        out.buffer_width = buffer_width;
        out.max_components = max_components;
        Ok(out)
    }

    pub fn with_buffer_width(&self, d: usize) -> Self {
        let mut out = self.clone();
        out.buffer_width = d;
        out
    }

    pub fn with_max_components(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.max_components = k;
        out
    }

    pub fn with_lambdas(&self, lambdas: &[f64]) -> Result<Self> {
        if lambdas.len() != self.species.len() {
            return Err(Error::Dimension(format!(
                "{} quotas for {} species",
                lambdas.len(),
                self.species.len()
            )));
        }
        let mut out = self.clone();
        for (sp, &l) in out.species.iter_mut().zip(lambdas) {
            sp.lambda = l;
        }
        Ok(out)
    }

    /// Sets P1/P2 according to the scenario.
    pub fn apply_scenario(&self, scenario: ScenarioId) -> Self {
        let n1 = self.n_s1();
        let n2 = self.n_s2();
        let mut out = self.clone();
        out.p1 = n1;
        out.p2 = match scenario {
            ScenarioId::A => n2,
            ScenarioId::B => n2.div_ceil(2),
            ScenarioId::C => 0,
        };
        out
    }

    /// Sets every quota to `ceil(fraction * total score)`, capped at the total.
    pub fn derive_lambda(&self, fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidParameter(format!(
                "quota fraction {fraction} outside [0, 1]"
            )));
        }
        let mut out = self.clone();
        for sp in &mut out.species {
            sp.lambda = quota_from_fraction(sp.total_weight(), fraction);
        }
        Ok(out)
    }
}

fn quota_from_fraction(total: f64, fraction: f64) -> f64 {
    // The epsilon keeps exact products such as 0.05 * 100 from rounding up.
    let raw = fraction * total;
    let q = (raw - 1e-9 * raw.abs().max(1.0)).ceil().max(0.0);
    q.min(total)
}

/// Random stream ids; each field of a generated instance draws from its own
/// ChaCha8 stream so costs and scores are reproducible independently.
const STREAM_COSTS: u64 = 1;
const STREAM_WEIGHTS_BASE: u64 = 16;

/// Generates an `n x n` grid instance with `s1_count` core-class and
/// `s2_count` reserve-class species.
///
/// Nodes are numbered row-major. Costs are uniform integers in `[1, 100]`;
/// scores are uniform integers in `[20, 100]`, then reset to zero with
/// probability 0.2 (core class) or 0.1 (reserve class). Boundary nodes carry
/// no score. Quotas use [`DEFAULT_LAMBDA_FRACTION`]; `P1 = P2 = 0`, `d = 1`,
/// `k = 1`.
pub fn generate_grid(n: usize, s1_count: usize, s2_count: usize, seed: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("grid side must be >= 2, got {n}")));
    }
    let n_nodes = n * n;
    let edges = grid_edges(n, n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_COSTS);
    let cost: Vec<f64> = (0..n_nodes).map(|_| rng.gen_range(1..=100) as f64).collect();

    let is_boundary = |i: usize| {
        let (r, c) = (i / n, i % n);
        r == 0 || c == 0 || r == n - 1 || c == n - 1
    };
    let mut species = Vec::with_capacity(s1_count + s2_count);
    for s in 0..s1_count + s2_count {
        let (class, p_zero) = if s < s1_count {
            (SpeciesClass::Core, 0.2)
        } else {
            (SpeciesClass::Reserve, 0.1)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(STREAM_WEIGHTS_BASE + s as u64);
        let mut weights = Vec::new();
        for i in 0..n_nodes {
            let w = rng.gen_range(20..=100) as f64;
            let zeroed = rng.gen_bool(p_zero);
            if !zeroed && !is_boundary(i) {
                weights.push((i, w));
            }
        }
        species.push(Species::new(class, weights, 0.0));
    }
    let inst = Instance::new(n_nodes, edges, cost, species, 0, 0, 1, 1)?;
    inst.derive_lambda(DEFAULT_LAMBDA_FRACTION)
}

/// Row-major grid edges: right neighbor then down neighbor for each node.
pub fn grid_edges(rows: usize, cols: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if c + 1 < cols {
                edges.push((i, i + 1));
            }
            if r + 1 < rows {
                edges.push((i, i + cols));
            }
        }
    }
    edges
}

/// Recognizes an instance whose graph is exactly a `rows x cols` grid in
/// row-major numbering. Used for map layout.
pub fn detect_grid(inst: &Instance) -> Option<(usize, usize)> {
    let n = inst.n_nodes();
    if n == 0 {
        return None;
    }
    let mut have: Vec<(usize, usize)> = inst.edges().to_vec();
    have.sort_unstable();
    let mut candidates: Vec<usize> = (1..=n).filter(|r| n % r == 0).collect();
    // prefer square-ish shapes
    let root = (n as f64).sqrt();
    candidates.sort_by(|a, b| {
        ((*a as f64) - root)
            .abs()
            .total_cmp(&((*b as f64) - root).abs())
            .then(a.cmp(b))
    });
    for rows in candidates {
        let cols = n / rows;
        let mut want = grid_edges(rows, cols);
        if want.len() != have.len() {
            continue;
        }
        want.sort_unstable();
        if want == have {
            return Some((rows, cols));
        }
    }
    None
}

/// Threat-based suitability score `alpha * (1 - t_i / (t_s + 1))^3`.
pub fn threat_score(alpha: bool, threats_at_parcel: u32, threats_for_species: u32) -> Result<f64> {
    if threats_at_parcel > threats_for_species {
        return Err(Error::InvalidParameter(format!(
            "{threats_at_parcel} threats at parcel exceed {threats_for_species} for the species"
        )));
    }
    if !alpha {
        return Ok(0.0);
    }
    let frac = threats_at_parcel as f64 / (threats_for_species as f64 + 1.0);
    Ok((1.0 - frac).powi(3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shapes() {
        let a = generate_grid(20, 1, 3, 7).unwrap();
        assert_eq!((a.n_nodes(), a.edges().len()), (400, 760));
        let b = generate_grid(30, 3, 9, 7).unwrap();
        assert_eq!((b.n_nodes(), b.edges().len()), (900, 1740));
        assert_eq!(b.n_s1(), 3);
        assert_eq!(b.n_s2(), 9);
        assert_eq!(b.buffer_width, 1);
    }

    #[test]
    fn tiny_grid_is_all_boundary() {
        let g = generate_grid(2, 2, 2, 1).unwrap();
        assert!(g.species().iter().all(|s| s.weights().is_empty()));
    }

    #[test]
    fn grid_rejects_small_side() {
        assert!(matches!(generate_grid(1, 1, 1, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn generation_is_reproducible() {
        let a = generate_grid(8, 2, 3, 42).unwrap();
        let b = generate_grid(8, 2, 3, 42).unwrap();
        let c = generate_grid(8, 2, 3, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_values_in_range() {
        let g = generate_grid(10, 2, 2, 3).unwrap();
        assert!(g.cost().iter().all(|&c| (1.0..=100.0).contains(&c) && c.fract() == 0.0));
        for sp in g.species() {
            for &(i, w) in sp.weights() {
                assert!((20.0..=100.0).contains(&w));
                let (r, c) = (i / 10, i % 10);
                assert!(r > 0 && c > 0 && r < 9 && c < 9);
            }
        }
    }

    #[test]
    fn scenarios() {
        let g = generate_grid(5, 3, 9, 1).unwrap();
        let b = g.apply_scenario(ScenarioId::B);
        assert_eq!((b.p1, b.p2), (3, 5));
        let a = g.apply_scenario(ScenarioId::A);
        assert_eq!((a.p1, a.p2), (3, 9));
        let c = g.apply_scenario(ScenarioId::C);
        assert_eq!((c.p1, c.p2), (3, 0));
        let empty = generate_grid(5, 2, 0, 1).unwrap().apply_scenario(ScenarioId::A);
        assert_eq!(empty.p2, 0);
        // other fields untouched
        assert_eq!(b.cost(), g.cost());
        assert_eq!(b.species(), g.species());
    }

    fn single_species(total: &[f64]) -> Instance {
        let weights = total.iter().enumerate().map(|(i, &w)| (i, w)).collect();
        Instance::new(
            total.len(),
            vec![],
            vec![1.0; total.len()],
            vec![Species::new(SpeciesClass::Core, weights, 0.0)],
            0,
            0,
            1,
            1,
        )
        .unwrap()
    }

    #[test]
    fn lambda_derivation() {
        let i = single_species(&[60.0, 40.0]).derive_lambda(0.05).unwrap();
        assert_eq!(i.species()[0].lambda, 5.0);
        let i = single_species(&[61.0, 40.0]).derive_lambda(0.05).unwrap();
        assert_eq!(i.species()[0].lambda, 6.0);
        let i = single_species(&[0.0]).derive_lambda(0.05).unwrap();
        assert_eq!(i.species()[0].lambda, 0.0);
        let i = single_species(&[0.25, 0.25]).derive_lambda(0.05).unwrap();
        assert_eq!(i.species()[0].lambda, 0.5);
        assert!(single_species(&[1.0]).derive_lambda(1.5).is_err());
    }

    #[test]
    fn threat_scores() {
        assert_eq!(threat_score(false, 2, 3).unwrap(), 0.0);
        assert_eq!(threat_score(true, 0, 3).unwrap(), 1.0);
        assert_eq!(threat_score(true, 2, 3).unwrap(), 0.125);
        assert!(threat_score(true, 4, 3).is_err());
    }

    #[test]
    fn rejects_bad_instances() {
        let sp = || vec![Species::new(SpeciesClass::Core, vec![(0, 1.0)], 1.0)];
        assert!(Instance::new(2, vec![(0, 0)], vec![1.0, 1.0], sp(), 0, 0, 1, 1).is_err());
        assert!(Instance::new(2, vec![(0, 1), (1, 0)], vec![1.0, 1.0], sp(), 0, 0, 1, 1).is_err());
        assert!(Instance::new(2, vec![(0, 1)], vec![1.0, 0.0], sp(), 0, 0, 1, 1).is_err());
        assert!(Instance::new(2, vec![(0, 1)], vec![1.0, 1.0], sp(), 2, 0, 1, 1).is_err());
        let sp_bad = vec![Species::new(SpeciesClass::Core, vec![(5, 1.0)], 1.0)];
        assert!(Instance::new(2, vec![], vec![1.0, 1.0], sp_bad, 0, 0, 1, 1).is_err());
    }

    #[test]
    fn grid_detection() {
        let g = generate_grid(4, 1, 1, 0).unwrap();
        assert_eq!(detect_grid(&g), Some((4, 4)));
        let path = Instance::new(3, vec![(0, 1), (1, 2)], vec![1.0; 3], vec![], 0, 0, 1, 1).unwrap();
        assert_eq!(detect_grid(&path), Some((1, 3)));
        let tri =
            Instance::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![1.0; 3], vec![], 0, 0, 1, 1).unwrap();
        assert_eq!(detect_grid(&tri), None);
    }

    proptest::proptest! {
        #[test]
        fn threat_score_monotone(t in 0u32..20, extra in 0u32..20) {
            let total = t + extra + 1;
            let a = threat_score(true, t, total).unwrap();
            let b = threat_score(true, t + 1, total).unwrap();
            proptest::prop_assert!(b <= a);
            proptest::prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn lambda_bounds(ws in proptest::collection::vec(0.0f64..100.0, 1..8), f in 0.0f64..=1.0) {
            let i = single_species(&ws).derive_lambda(f).unwrap();
            let total: f64 = i.species()[0].total_weight();
            let l = i.species()[0].lambda;
            proptest::prop_assert!(l >= 0.0 && l <= total + 1e-12);
        }
    }
}
