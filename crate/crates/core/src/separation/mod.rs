//! Cut families, the cut pool and the separation routines.

mod connectivity;
mod cover;
mod generator;

pub use connectivity::{separate_connectivity_fractional, separate_connectivity_integer};
pub use cover::{separate_cover, separate_species_cover, separate_species_cut, species_column};
pub use generator::{CutGenerator, SeparationConfig};

use std::collections::HashSet;
use std::fmt;

use crate::formulation::{ConnectivityFamily, VarMap};
use crate::milp::{LinearConstraint, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutFamily {
    CoreCon,
    AllCon,
    Sc,
    Cover,
    Scc,
}

impl CutFamily {
    pub fn from_connectivity(f: ConnectivityFamily) -> Self {
        match f {
            ConnectivityFamily::CoreCon => CutFamily::CoreCon,
            ConnectivityFamily::AllCon => CutFamily::AllCon,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            CutFamily::CoreCon => "corecon",
            CutFamily::AllCon => "allcon",
            CutFamily::Sc => "sc",
            CutFamily::Cover => "cover",
            CutFamily::Scc => "scc",
        }
    }
}

impl fmt::Display for CutFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Which node variable a term refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeVar {
    Z,
    X,
}

impl NodeVar {
    pub fn column(self, vars: &VarMap, i: usize) -> usize {
        match self {
            NodeVar::Z => vars.z(i),
            NodeVar::X => vars.x(i),
        }
    }

    /// Column values of this variable for every node.
    pub fn values(self, vars: &VarMap, x: &[f64]) -> Vec<f64> {
        (0..vars.n_nodes).map(|i| x[self.column(vars, i)]).collect()
    }
}

/// Right-hand side variable of a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rhs {
    Node(NodeVar, usize),
    Species(usize),
}

/// `Σ_{i∈W_V} v_i + Σ_{j∈W_A} y_j ≥ rhs`, with `W_A` restricted to
/// `j <= ℓ` for the connectivity families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    pub family: CutFamily,
    pub lhs: NodeVar,
    pub w_v: Vec<usize>,
    pub w_a: Vec<usize>,
    pub rhs: Rhs,
}

impl Cut {
    fn lifted_roots(&self) -> impl Iterator<Item = usize> + '_ {
        let cap = match (self.family, self.rhs) {
            (CutFamily::CoreCon | CutFamily::AllCon, Rhs::Node(_, l)) => l,
            _ => usize::MAX,
        };
        self.w_a.iter().copied().filter(move |&j| j <= cap)
    }

    /// Sparse `(column, coefficient)` form of `lhs - rhs >= 0`.
    pub fn terms(&self, vars: &VarMap) -> Vec<(usize, f64)> {
        let mut t: Vec<(usize, f64)> = self.w_v.iter().map(|&i| (self.lhs.column(vars, i), 1.0)).collect();
        if vars.has_y {
            t.extend(self.lifted_roots().map(|j| (vars.y(j), 1.0)));
        }
        t.push(match self.rhs {
            Rhs::Node(v, l) => (v.column(vars, l), -1.0),
            Rhs::Species(s) => (vars.u(s), -1.0),
        });
        t
    }

    pub fn to_constraint(&self, vars: &VarMap) -> LinearConstraint {
        let id = match self.rhs {
            Rhs::Node(_, l) => l,
            Rhs::Species(s) => s,
        };
        LinearConstraint::new(
            format!("{}_{}_{}", self.family, id, self.w_v.len() + self.w_a.len()),
            &self.terms(vars),
            Sense::Ge,
            0.0,
        )
    }

    /// `rhs - lhs` at `x` (positive when violated).
    pub fn violation(&self, vars: &VarMap, x: &[f64]) -> f64 {
        -self.terms(vars).iter().map(|&(k, a)| a * x[k]).sum::<f64>()
    }

    fn key(&self) -> (CutFamily, Rhs, Vec<usize>, Vec<usize>) {
        let mut wv = self.w_v.clone();
        wv.sort_unstable();
        let mut wa: Vec<usize> = self.lifted_roots().collect();
        wa.sort_unstable();
        (self.family, self.rhs, wv, wa)
    }
}

/// Deduplicated store of globally valid cuts.
#[derive(Debug, Clone, Default)]
pub struct CutPool {
    keys: HashSet<(CutFamily, Rhs, Vec<usize>, Vec<usize>)>,
    cuts: Vec<Cut>,
}

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `cut`; returns false if an identical cut is already stored.
    pub fn insert(&mut self, cut: Cut) -> bool {
        if self.keys.insert(cut.key()) {
            self.cuts.push(cut);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, cut: &Cut) -> bool {
        self.keys.contains(&cut.key())
    }

    pub fn extend(&mut self, other: &CutPool) {
        for c in &other.cuts {
            self.insert(c.clone());
        }
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn constraints(&self, vars: &VarMap) -> Vec<LinearConstraint> {
        self.cuts.iter().map(|c| c.to_constraint(vars)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_dedups_on_lifted_key() {
        let a = Cut {
            family: CutFamily::CoreCon,
            lhs: NodeVar::Z,
            w_v: vec![3, 1],
            w_a: vec![2, 5],
            rhs: Rhs::Node(NodeVar::Z, 4),
        };
        let mut b = a.clone();
        b.w_v = vec![1, 3];
        b.w_a = vec![2, 7];
        let mut pool = CutPool::new();
        assert!(pool.insert(a));
        assert!(!pool.insert(b));
        assert_eq!(pool.len(), 1);
    }

    #[test]
    fn linear_form() {
        let vars = VarMap { n_species: 1, n_nodes: 3, has_y: true };
        let c = Cut {
            family: CutFamily::CoreCon,
            lhs: NodeVar::Z,
            w_v: vec![1],
            w_a: vec![0, 2],
            rhs: Rhs::Node(NodeVar::Z, 2),
        };
        let lc = c.to_constraint(&vars);
        // z1 + y0 + y2 - z2 >= 0
        assert_eq!(lc.coeffs, vec![(5, 1.0), (6, -1.0), (7, 1.0), (9, 1.0)]);
        let mut x = vec![0.0; vars.len()];
        x[vars.z(2)] = 1.0;
        assert_eq!(c.violation(&vars, &x), 1.0);
        assert_eq!(lc.violation(&x), 1.0);
    }
}
