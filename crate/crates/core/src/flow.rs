//! Split digraph used for separator-based cut separation, and a Dinic
//! maximum-flow / minimum-cut routine.
//!
//! Every parcel `i` becomes an in-node `i₁` and an out-node `i₂` joined by a
//! node-arc whose capacity is the node's LP value. An artificial root `r`
//! reaches every `i₁` through a root-arc carrying the root variable's value.
//! Undirected edges become pairs `i₂ → j₁`, `j₂ → i₁` of effectively infinite
//! capacity. Optionally a sink `s` collects arcs `i₂ → s` from a node set.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// `i₁ → i₂`
    Node(usize),
    /// `r → i₁`
    Root(usize),
    /// `i₂ → j₁`
    Edge(usize, usize),
    /// `i₂ → s`
    Sink(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub kind: ArcKind,
    pub capacity: f64,
}

#[derive(Debug, Clone)]
pub struct SplitDigraph {
    n_parcels: usize,
    has_sink: bool,
    infinity: f64,
    arcs: Vec<Arc>,
}

/// A separator: node-arcs `w_v` and root-arcs `w_a` whose removal cuts the
/// target off from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Separator {
    pub w_v: Vec<usize>,
    pub w_a: Vec<usize>,
}

impl SplitDigraph {
    pub const ROOT: usize = 0;

    pub fn in_node(i: usize) -> usize {
        1 + 2 * i
    }

    pub fn out_node(i: usize) -> usize {
        2 + 2 * i
    }

    /// Builds the digraph. `node_cap[i]` and `root_cap[i]` are the node-arc
    /// and root-arc capacities; `sink_from` adds a sink fed by those nodes.
    pub fn build(
        adj: &[Vec<usize>],
        node_cap: &[f64],
        root_cap: &[f64],
        sink_from: Option<&[usize]>,
    ) -> Self {
        let n = adj.len();
        assert_eq!(node_cap.len(), n);
        assert_eq!(root_cap.len(), n);
        let finite: f64 = node_cap.iter().chain(root_cap).map(|c| c.max(0.0)).sum();
        let infinity = 2.0 * (finite + 1.0);
        let mut arcs = Vec::with_capacity(2 * n + 2 * adj.iter().map(Vec::len).sum::<usize>());
        for i in 0..n {
            arcs.push(Arc {
                tail: Self::in_node(i),
                head: Self::out_node(i),
                kind: ArcKind::Node(i),
                capacity: node_cap[i].max(0.0),
            });
        }
        for i in 0..n {
            arcs.push(Arc {
                tail: Self::ROOT,
                head: Self::in_node(i),
                kind: ArcKind::Root(i),
                capacity: root_cap[i].max(0.0),
            });
        }
        for (i, nbrs) in adj.iter().enumerate() {
            for &j in nbrs {
                arcs.push(Arc {
                    tail: Self::out_node(i),
                    head: Self::in_node(j),
                    kind: ArcKind::Edge(i, j),
                    capacity: infinity,
                });
            }
        }
        let has_sink = sink_from.is_some();
        if let Some(from) = sink_from {
            let s = 1 + 2 * n;
            for &i in from {
                arcs.push(Arc {
                    tail: Self::out_node(i),
                    head: s,
                    kind: ArcKind::Sink(i),
                    capacity: infinity,
                });
            }
        }
        SplitDigraph {
            n_parcels: n,
            has_sink,
            infinity,
            arcs,
        }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn infinity(&self) -> f64 {
        self.infinity
    }

    pub fn node_count(&self) -> usize {
        1 + 2 * self.n_parcels + usize::from(self.has_sink)
    }

    pub fn sink(&self) -> Option<usize> {
        self.has_sink.then_some(1 + 2 * self.n_parcels)
    }

    /// Sets the capacity of the root-arc into parcel `i`.
    pub fn set_root_capacity(&mut self, i: usize, cap: f64) {
        self.arcs[self.n_parcels + i].capacity = cap.max(0.0);
    }

    pub fn root_capacity(&self, i: usize) -> f64 {
        self.arcs[self.n_parcels + i].capacity
    }

    /// Maps a set of cut arcs to a separator.
    pub fn separator(&self, cut_arcs: &[usize]) -> Separator {
        let mut w_v = Vec::new();
        let mut w_a = Vec::new();
        for &a in cut_arcs {
            match self.arcs[a].kind {
                ArcKind::Node(i) => w_v.push(i),
                ArcKind::Root(i) => w_a.push(i),
                _ => {}
            }
        }
        w_v.sort_unstable();
        w_a.sort_unstable();
        Separator { w_v, w_a }
    }
}

#[derive(Debug, Clone)]
pub struct MinCut {
    pub value: f64,
    /// Indices into `arcs()` leaving the source-reachable residual set.
    pub cut_arcs: Vec<usize>,
    pub source_side: Vec<bool>,
}

const RESIDUAL_EPS: f64 = 1e-12;

struct Residual {
    head: Vec<usize>,
    cap: Vec<f64>,
    out: Vec<Vec<usize>>,
}

/// Maximum `source → target` flow and the source-side minimum cut.
///
/// The cut consists of the arcs leaving the set of nodes reachable from the
/// source in the final residual graph.
pub fn max_flow_min_cut(dg: &SplitDigraph, source: usize, target: usize) -> MinCut {
    max_flow_on_arcs(dg.node_count(), dg.arcs(), source, target)
}

/// Same as [`max_flow_min_cut`] over an arbitrary arc list.
pub fn max_flow_on_arcs(n_nodes: usize, arcs: &[Arc], source: usize, target: usize) -> MinCut {
    assert_ne!(source, target, "source and target must differ");
    let mut res = Residual {
        head: Vec::with_capacity(2 * arcs.len()),
        cap: Vec::with_capacity(2 * arcs.len()),
        out: vec![Vec::new(); n_nodes],
    };
    for a in arcs {
        res.out[a.tail].push(res.head.len());
        res.head.push(a.head);
        res.cap.push(a.capacity.max(0.0));
        res.out[a.head].push(res.head.len());
        res.head.push(a.tail);
        res.cap.push(0.0);
    }

    let mut value = 0.0;
    let mut level = vec![usize::MAX; n_nodes];
    let mut iter = vec![0usize; n_nodes];
    loop {
        level.fill(usize::MAX);
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &e in &res.out[v] {
                let w = res.head[e];
                if res.cap[e] > RESIDUAL_EPS && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if level[target] == usize::MAX {
            break;
        }
        iter.fill(0);
        loop {
            let pushed = augment(&mut res, &level, &mut iter, source, target, f64::INFINITY);
            if pushed <= RESIDUAL_EPS {
                break;
            }
            value += pushed;
        }
    }

    // residual reachability from the source
    let mut source_side = vec![false; n_nodes];
    source_side[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &e in &res.out[v] {
            let w = res.head[e];
            if res.cap[e] > RESIDUAL_EPS && !source_side[w] {
                source_side[w] = true;
                queue.push_back(w);
            }
        }
    }
    let cut_arcs: Vec<usize> = arcs
        .iter()
        .enumerate()
        .filter(|(_, a)| source_side[a.tail] && !source_side[a.head])
        .map(|(k, _)| k)
        .collect();
    // report the cut capacity, which equals the flow up to round-off
    let cut_value: f64 = cut_arcs.iter().map(|&k| arcs[k].capacity.max(0.0)).sum();
    debug_assert!((cut_value - value).abs() <= 1e-7 * (1.0 + value.abs()));
    MinCut {
        value: cut_value,
        cut_arcs,
        source_side,
    }
}

fn augment(
    res: &mut Residual,
    level: &[usize],
    iter: &mut [usize],
    v: usize,
    target: usize,
    limit: f64,
) -> f64 {
    if v == target {
        return limit;
    }
    while iter[v] < res.out[v].len() {
        let e = res.out[v][iter[v]];
        let w = res.head[e];
        if res.cap[e] > RESIDUAL_EPS && level[w] == level[v] + 1 {
            let got = augment(res, level, iter, w, target, limit.min(res.cap[e]));
            if got > RESIDUAL_EPS {
                res.cap[e] -= got;
                res.cap[e ^ 1] += got;
                return got;
            }
        }
        iter[v] += 1;
    }
    0.0
}
