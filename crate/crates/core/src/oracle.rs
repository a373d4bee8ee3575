//! Feasibility checking and exhaustive optima for tiny instances.
//!
//! [`brute_force`] enumerates a reduced space:
//! * GRSC and GRSC-C: every reserve set `X`, with `z := x`. Cores only
//!   appear in core-species quotas and in `z <= x`, so taking them maximal
//!   never hurts and costs nothing.
//! * GRSC-B and GRSC-CB: every core set `Z`, with `x := ∪ δ_d⁺(Z)`. The
//!   buffer rows force `x ⊇ δ_d⁺(Z)` and `x_i <= Σ_{δ_d⁺(i)} z_j` forbids
//!   anything else, so `x` is determined by `Z`.
//!
//! In both cases `u` is set maximal and each component of the connectivity
//! set is rooted at its minimum-index node. [`brute_force_general`] drops
//! the reductions and enumerates all pairs `Z ⊆ X` as a cross-check.

use crate::error::{Error, Result};
use crate::formulation::VariantId;
use crate::graph::{connected_components, ClosedNeighborhoods};
use crate::instance::{Instance, SpeciesClass};
use crate::solution::Solution;

/// Largest instance [`brute_force`] accepts.
pub const ORACLE_CAP: usize = 14;
/// Largest instance [`brute_force_general`] accepts.
pub const GENERAL_CAP: usize = 10;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Quota,
    Protect1,
    Protect2,
    Link,
    Buffer1,
    Buffer2,
    ComponentCount,
    RootLink,
    Connectivity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub family: Family,
    /// Species, node or component-minimum the violation refers to.
    pub index: usize,
    /// Negative slack of the violated row.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
    pub objective: f64,
    pub core_components: usize,
    pub reserve_components: usize,
}

impl FeasibilityReport {
    /// Human-readable description of the first violation, if any.
    pub fn first_violation(&self) -> Option<String> {
        self.violations.first().map(|v| {
            let what = match v.family {
                Family::Quota => format!("quota of species {}", v.index),
                Family::Protect1 => "core-species protection count".to_string(),
                Family::Protect2 => "reserve-species protection count".to_string(),
                Family::Link => format!("core node {} outside the reserve", v.index),
                Family::Buffer1 => format!("core node {} lacks a buffer neighbor", v.index),
                Family::Buffer2 => format!("reserve node {} is not near a core", v.index),
                Family::ComponentCount => "component count".to_string(),
                Family::RootLink => format!("root {} outside its set", v.index),
                Family::Connectivity => format!("component of node {} has no root", v.index),
            };
            format!("{what} violated by {}", -v.slack)
        })
    }
}

fn check_dims(inst: &Instance, sol: &Solution) -> Result<()> {
    let n = inst.n_nodes();
    if sol.x.len() != n || sol.z.len() != n || sol.y.len() != n || sol.u.len() != inst.species().len() {
        return Err(Error::Dimension(format!(
            "solution sized ({}, {}, {}, {}) for {} nodes and {} species",
            sol.u.len(),
            sol.x.len(),
            sol.z.len(),
            sol.y.len(),
            n,
            inst.species().len()
        )));
    }
    Ok(())
}

/// Checks every constraint of `variant` on `sol`.
pub fn validate(inst: &Instance, variant: VariantId, sol: &Solution) -> Result<FeasibilityReport> {
    check_dims(inst, sol)?;
    let n = inst.n_nodes();
    let mut v = Vec::new();
    let mut push = |family, index, slack: f64| v.push(Violation { family, index, slack });

    for (s, sp) in inst.species().iter().enumerate() {
        if !sol.u[s] {
            continue;
        }
        let set = match sp.class {
            SpeciesClass::Core => &sol.z,
            SpeciesClass::Reserve => &sol.x,
        };
        let total: f64 = sp.weights().iter().filter(|(i, _)| set[*i]).map(|(_, w)| w).sum();
        if total < sp.lambda - EPS {
            push(Family::Quota, s, total - sp.lambda);
        }
    }
    let hosted1 = inst.s1().filter(|&s| sol.u[s]).count();
    let hosted2 = inst.s2().filter(|&s| sol.u[s]).count();
    if hosted1 < inst.p1 {
        push(Family::Protect1, 0, hosted1 as f64 - inst.p1 as f64);
    }
    if hosted2 < inst.p2 {
        push(Family::Protect2, 0, hosted2 as f64 - inst.p2 as f64);
    }
    for i in 0..n {
        if sol.z[i] && !sol.x[i] {
            push(Family::Link, i, -1.0);
        }
    }
    if variant.has_buffer() {
        let hood = ClosedNeighborhoods::new(inst.adjacency(), inst.buffer_width);
        for i in (0..n).filter(|&i| sol.z[i]) {
            if hood.of(i).iter().any(|&j| !sol.x[j]) {
                push(Family::Buffer1, i, -1.0);
            }
        }
        for i in (0..n).filter(|&i| sol.x[i]) {
            if !hood.of(i).iter().any(|&j| sol.z[j]) {
                push(Family::Buffer2, i, -1.0);
            }
        }
    }
    if variant.has_connectivity() {
        let set = sol.connectivity_set(variant);
        let roots = sol.y.iter().filter(|&&b| b).count();
        if roots > inst.max_components {
            push(Family::ComponentCount, 0, inst.max_components as f64 - roots as f64);
        }
        for i in 0..n {
            if sol.y[i] && !set[i] {
                push(Family::RootLink, i, -1.0);
            }
        }
        for comp in connected_components(inst.adjacency(), set) {
            if !comp.iter().any(|&i| sol.y[i]) {
                push(Family::Connectivity, comp[0], -1.0);
            }
        }
    }
    Ok(FeasibilityReport {
        feasible: v.is_empty(),
        violations: v,
        objective: sol.cost(inst),
        core_components: connected_components(inst.adjacency(), &sol.z).len(),
        reserve_components: connected_components(inst.adjacency(), &sol.x).len(),
    })
}

/// Optimal cost and solution, `None` when infeasible.
pub type OracleResult = Option<(f64, Solution)>;

fn mask_set(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn keep_best(best: &mut OracleResult, cost: f64, sol: Solution) {
    if best.as_ref().is_none_or(|(c, _)| cost < *c - EPS) {
        *best = Some((cost, sol));
    }
}

/// Exact optimum by enumeration of the reduced space (see module docs).
/// Ties go to the set with the smallest bitmask (bit `i` is node `i`).
pub fn brute_force(inst: &Instance, variant: VariantId) -> Result<OracleResult> {
    brute_force_with(inst, variant, false)
}

/// Like [`brute_force`] but with the component-count row as an equality.
pub fn brute_force_with(inst: &Instance, variant: VariantId, ncomp_eq: bool) -> Result<OracleResult> {
    let n = inst.n_nodes();
    if n > ORACLE_CAP {
        return Err(Error::TooLarge { nodes: n, cap: ORACLE_CAP });
    }
    let mut best = None;
    for mask in 0u32..(1 << n) {
        let set = mask_set(mask, n);
        let sol = if variant.has_buffer() {
            Solution::from_core(inst, variant, &set)
        } else {
            let mut s = Solution::empty(inst);
            for &i in &set {
                s.x[i] = true;
                s.z[i] = true;
            }
            s.canonicalize(inst, variant);
            s
        };
        if !admissible(inst, variant, &sol, ncomp_eq) {
            continue;
        }
        let cost = sol.cost(inst);
        keep_best(&mut best, cost, sol);
    }
    Ok(best)
}

fn admissible(inst: &Instance, variant: VariantId, sol: &Solution, ncomp_eq: bool) -> bool {
    let hosted1 = inst.s1().filter(|&s| sol.u[s]).count();
    let hosted2 = inst.s2().filter(|&s| sol.u[s]).count();
    if hosted1 < inst.p1 || hosted2 < inst.p2 {
        return false;
    }
    if variant.has_connectivity() {
        let comps = sol.n_components(inst, variant);
        if comps > inst.max_components {
            return false;
        }
        if ncomp_eq {
            let size = sol.connectivity_set(variant).iter().filter(|&&b| b).count();
            if size < inst.max_components {
                return false;
            }
        }
    }
    true
}

/// Every feasible `(x, z)` pair with maximal `u` and min-index roots.
pub fn enumerate_feasible(inst: &Instance, variant: VariantId) -> Result<Vec<Solution>> {
    let n = inst.n_nodes();
    if n > GENERAL_CAP {
        return Err(Error::TooLarge { nodes: n, cap: GENERAL_CAP });
    }
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut sol = Solution::empty(inst);
        let mut c = code;
        for i in 0..n {
            match c % 3 {
                1 => sol.x[i] = true,
                2 => {
                    sol.x[i] = true;
                    sol.z[i] = true;
                }
                _ => {}
            }
            c /= 3;
        }
        sol.canonicalize(inst, variant);
        if validate(inst, variant, &sol)?.feasible {
            out.push(sol);
        }
    }
    Ok(out)
}

/// Optimum over all `Z ⊆ X` without the reductions of [`brute_force`].
pub fn brute_force_general(inst: &Instance, variant: VariantId) -> Result<Option<f64>> {
    Ok(enumerate_feasible(inst, variant)?
        .iter()
        .map(|s| s.cost(inst))
        .min_by(f64::total_cmp))
}
