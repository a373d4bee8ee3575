//! Connectivity cuts: max-flow separation of fractional points and
//! component-based separation of integer points.

use super::{Cut, CutFamily, NodeVar, Rhs};
use crate::flow::{max_flow_min_cut, SplitDigraph};
use crate::formulation::{ConnectivityFamily, VarMap};
use crate::graph::{connected_components, outer_boundary};
use crate::instance::Instance;

const VIOLATION: f64 = 1e-6;

fn family_parts(family: ConnectivityFamily) -> (CutFamily, NodeVar) {
    match family {
        ConnectivityFamily::CoreCon => (CutFamily::CoreCon, NodeVar::Z),
        ConnectivityFamily::AllCon => (CutFamily::AllCon, NodeVar::X),
    }
}

/// Max-flow separation for every target `ℓ` whose value is at least `tau`,
/// in decreasing value order (ties by index). Root arcs of nodes above `ℓ`
/// get capacity zero, so the cuts are down-lifted. After a cut for `ℓ`, the
/// nodes whose root arcs it uses are not tried as targets.
pub fn separate_connectivity_fractional(
    inst: &Instance,
    vars: &VarMap,
    x: &[f64],
    family: ConnectivityFamily,
    tau: f64,
) -> Vec<Cut> {
    let (cut_family, var) = family_parts(family);
    let n = inst.n_nodes();
    let val = var.values(vars, x);
    let roots: Vec<f64> = (0..n).map(|i| x[vars.y(i)].max(0.0)).collect();
    let mut dg = SplitDigraph::build(inst.adjacency(), &val, &roots, None);
    let mut cand: Vec<usize> = (0..n).filter(|&i| val[i] >= tau && val[i] > VIOLATION).collect();
    cand.sort_by(|&a, &b| val[b].total_cmp(&val[a]).then(a.cmp(&b)));
    let mut skip = vec![false; n];
    let mut cuts = Vec::new();
    for l in cand {
        if skip[l] {
            continue;
        }
        for (j, &r) in roots.iter().enumerate() {
            dg.set_root_capacity(j, if j <= l { r } else { 0.0 });
        }
        let mc = max_flow_min_cut(&dg, SplitDigraph::ROOT, SplitDigraph::in_node(l));
        if mc.value < val[l] - VIOLATION {
            let sep = dg.separator(&mc.cut_arcs);
            let w_a: Vec<usize> = sep.w_a.into_iter().filter(|&j| j <= l).collect();
            for &j in &w_a {
                skip[j] = true;
            }
            cuts.push(Cut { family: cut_family, lhs: var, w_v: sep.w_v, w_a, rhs: Rhs::Node(var, l) });
        }
    }
    cuts
}

/// For every component `H` of the integer point whose smallest node is not
/// a root: `W_A = H`, `W_V` = outer boundary of `H`, target `min H`.
pub fn separate_connectivity_integer(
    inst: &Instance,
    vars: &VarMap,
    x: &[f64],
    family: ConnectivityFamily,
) -> Vec<Cut> {
    let (cut_family, var) = family_parts(family);
    let n = inst.n_nodes();
    let set: Vec<bool> = (0..n).map(|i| x[var.column(vars, i)] > 0.5).collect();
    connected_components(inst.adjacency(), &set)
        .into_iter()
        .filter(|h| x[vars.y(h[0])] < 0.5)
        .map(|h| Cut {
            family: cut_family,
            lhs: var,
            w_v: outer_boundary(inst.adjacency(), &h),
            rhs: Rhs::Node(var, h[0]),
            w_a: h,
        })
        .collect()
}
