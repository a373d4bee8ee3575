//! Integer solutions: core, reserve, root and hosted-species sets.

use crate::formulation::{VarMap, VariantId};
use crate::graph::{connected_components, ClosedNeighborhoods};
use crate::instance::{Instance, SpeciesClass};

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub u: Vec<bool>,
    pub x: Vec<bool>,
    pub z: Vec<bool>,
    /// Roots; all false for variants without connectivity.
    pub y: Vec<bool>,
}

fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

impl Solution {
    pub fn empty(inst: &Instance) -> Self {
        let n = inst.n_nodes();
        Solution {
            u: vec![false; inst.species().len()],
            x: vec![false; n],
            z: vec![false; n],
            y: vec![false; n],
        }
    }

    /// Canonical solution for a core set: reserve is the union of closed
    /// neighborhoods (just the cores without a buffer), species flags are
    /// maximal and each component is rooted at its smallest node.
    pub fn from_core(inst: &Instance, variant: VariantId, core: &[usize]) -> Self {
        let mut sol = Solution::empty(inst);
        let hood = ClosedNeighborhoods::new(inst.adjacency(), variant.effective_width(inst));
        for &i in core {
            sol.z[i] = true;
            for &j in hood.of(i) {
                sol.x[j] = true;
            }
        }
        sol.canonicalize(inst, variant);
        sol
    }

    /// Sets `u` maximal and `y` to the min-index root of every component.
    pub fn canonicalize(&mut self, inst: &Instance, variant: VariantId) {
        self.u = hosted_species(inst, &self.x, &self.z);
        self.y = vec![false; inst.n_nodes()];
        if variant.has_connectivity() {
            for comp in connected_components(inst.adjacency(), self.connectivity_set(variant)) {
                self.y[comp[0]] = true;
            }
        }
    }

    /// The set whose components are counted: cores with a buffer, reserve otherwise.
    pub fn connectivity_set(&self, variant: VariantId) -> &[bool] {
        if variant.has_buffer() {
            &self.z
        } else {
            &self.x
        }
    }

    pub fn n_components(&self, inst: &Instance, variant: VariantId) -> usize {
        connected_components(inst.adjacency(), self.connectivity_set(variant)).len()
    }

    pub fn cost(&self, inst: &Instance) -> f64 {
        self.x.iter().zip(inst.cost()).filter(|(&b, _)| b).map(|(_, c)| c).sum()
    }

    pub fn core_nodes(&self) -> Vec<usize> {
        indices(&self.z)
    }

    pub fn reserve_nodes(&self) -> Vec<usize> {
        indices(&self.x)
    }

    pub fn roots(&self) -> Vec<usize> {
        indices(&self.y)
    }

    pub fn hosted(&self) -> Vec<usize> {
        indices(&self.u)
    }

    /// Column vector for a model with layout `vars`.
    pub fn to_vector(&self, vars: &VarMap) -> Vec<f64> {
        let mut v = vec![0.0; vars.len()];
        let f = |b: bool| if b { 1.0 } else { 0.0 };
        for (s, &b) in self.u.iter().enumerate() {
            v[vars.u(s)] = f(b);
        }
        for i in 0..vars.n_nodes {
            v[vars.x(i)] = f(self.x[i]);
            v[vars.z(i)] = f(self.z[i]);
            if vars.has_y {
                v[vars.y(i)] = f(self.y[i]);
            }
        }
        v
    }

    /// Reads a (near-)integral model point back.
    pub fn from_vector(vars: &VarMap, v: &[f64]) -> Self {
        let b = |k: usize| v[k] > 0.5;
        let n = vars.n_nodes;
        Solution {
            u: (0..vars.n_species).map(|s| b(vars.u(s))).collect(),
            x: (0..n).map(|i| b(vars.x(i))).collect(),
            z: (0..n).map(|i| b(vars.z(i))).collect(),
            y: (0..n).map(|i| vars.has_y && b(vars.y(i))).collect(),
        }
    }
}

/// Species whose quota is met by the given reserve and core sets.
pub fn hosted_species(inst: &Instance, x: &[bool], z: &[bool]) -> Vec<bool> {
    inst.species()
        .iter()
        .map(|sp| {
            let set = match sp.class {
                SpeciesClass::Core => z,
                SpeciesClass::Reserve => x,
            };
            let total: f64 = sp.weights().iter().filter(|(i, _)| set[*i]).map(|(_, w)| w).sum();
            total >= sp.lambda - 1e-9
        })
        .collect()
}
