//! Line-oriented plain-text instance format.
//!
//! ```text
//! # comment
//! NODES n
//! EDGES m
//! i j            (m lines)
//! COSTS
//! c_0 ... c_{n-1}   (may span lines)
//! SPECIES1 k1
//! SPECIES2 k2
//! W s i v i v ...   (one line per species with any positive score)
//! LAMBDA
//! l_0 ... l_{k1+k2-1}
//! PARAMS P1 P2 d k
//! ```
//!
//! Species `0..k1` form the core class, `k1..k1+k2` the reserve class.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formulation::VariantId;
use crate::instance::{Instance, Species, SpeciesClass};
use crate::solution::Solution;

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str("# reserve set covering instance\n");
    let _ = writeln!(out, "NODES {}", inst.n_nodes());
    let _ = writeln!(out, "EDGES {}", inst.edges().len());
    for &(a, b) in inst.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out.push_str("COSTS\n");
    write_values(&mut out, inst.cost());
    let _ = writeln!(out, "SPECIES1 {}", inst.n_s1());
    let _ = writeln!(out, "SPECIES2 {}", inst.n_s2());
    for (s, sp) in inst.species().iter().enumerate() {
        if sp.weights().is_empty() {
            continue;
        }
        let _ = write!(out, "W {s}");
        for &(i, w) in sp.weights() {
            let _ = write!(out, " {i} {w}");
        }
        out.push('\n');
    }
    out.push_str("LAMBDA\n");
    let lambdas: Vec<f64> = inst.species().iter().map(|s| s.lambda).collect();
    write_values(&mut out, &lambdas);
    let _ = writeln!(
        out,
        "PARAMS {} {} {} {}",
        inst.p1, inst.p2, inst.buffer_width, inst.max_components
    );
    out
}

fn write_values(out: &mut String, values: &[f64]) {
    for chunk in values.chunks(20) {
        let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    peeked: Option<(usize, Vec<&'a str>)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            peeked: None,
        }
    }

    /// Next non-empty line as (1-based line number, tokens).
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        if let Some(p) = self.peeked.take() {
            return Some(p);
        }
        for (no, raw) in self.inner.by_ref() {
            let body = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = body.split_whitespace().collect();
            if !toks.is_empty() {
                return Some((no + 1, toks));
            }
        }
        None
    }

    fn peek(&mut self) -> Option<&(usize, Vec<&'a str>)> {
        if self.peeked.is_none() {
            self.peeked = self.next();
        }
        self.peeked.as_ref()
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| err(line, format!("invalid {what} {tok:?}")))
}

fn is_keyword(tok: &str) -> bool {
    matches!(
        tok,
        "NODES" | "EDGES" | "COSTS" | "SPECIES1" | "SPECIES2" | "W" | "LAMBDA" | "PARAMS"
    )
}

/// Reads `count` numeric values that may span several lines.
fn read_values(lines: &mut Lines<'_>, count: usize, header_line: usize, what: &str) -> Result<Vec<(usize, f64)>> {
    let mut values = Vec::with_capacity(count);
    while values.len() < count {
        let Some((no, toks)) = lines.peek().cloned() else {
            return Err(err(
                header_line,
                format!("expected {count} {what} values, found {}", values.len()),
            ));
        };
        if is_keyword(toks[0]) {
            return Err(err(
                no,
                format!("expected {count} {what} values, found {}", values.len()),
            ));
        }
        lines.next();
        for t in toks {
            if values.len() == count {
                return Err(err(no, format!("too many {what} values")));
            }
            values.push((no, num::<f64>(no, t, what)?));
        }
    }
    Ok(values)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let mut n_nodes: Option<usize> = None;
    let mut edges = Vec::new();
    let mut cost: Option<Vec<f64>> = None;
    let mut n1: Option<usize> = None;
    let mut n2: Option<usize> = None;
    let mut weights: Vec<(usize, usize, Vec<(usize, f64)>)> = Vec::new();
    let mut lambda: Option<(usize, Vec<f64>)> = None;
    let mut params: Option<[usize; 4]> = None;

    while let Some((no, toks)) = lines.next() {
        let need_nodes = |n: Option<usize>| n.ok_or_else(|| err(no, "NODES must come first"));
        match toks[0] {
            "NODES" => {
                if toks.len() != 2 {
                    return Err(err(no, "expected `NODES n`"));
                }
                if n_nodes.is_some() {
                    return Err(err(no, "duplicate NODES section"));
                }
                n_nodes = Some(num(no, toks[1], "node count")?);
            }
            "EDGES" => {
                let n = need_nodes(n_nodes)?;
                if toks.len() != 2 {
                    return Err(err(no, "expected `EDGES m`"));
                }
                let m: usize = num(no, toks[1], "edge count")?;
                for _ in 0..m {
                    let Some((eno, et)) = lines.next() else {
                        return Err(err(no, format!("expected {m} edges")));
                    };
                    if et.len() != 2 || is_keyword(et[0]) {
                        return Err(err(eno, "expected an edge `i j`"));
                    }
                    let a: usize = num(eno, et[0], "node id")?;
                    let b: usize = num(eno, et[1], "node id")?;
                    if a >= n || b >= n {
                        return Err(err(eno, format!("edge ({a}, {b}) references an unknown node")));
                    }
                    if a == b {
                        return Err(err(eno, format!("self-loop at node {a}")));
                    }
                    edges.push((eno, a, b));
                }
            }
            "COSTS" => {
                let n = need_nodes(n_nodes)?;
                let vals = read_values(&mut lines, n, no, "cost")?;
                for &(vno, v) in &vals {
                    if !(v > 0.0 && v.is_finite()) {
                        return Err(err(vno, format!("cost must be positive, got {v}")));
                    }
                }
                cost = Some(vals.into_iter().map(|(_, v)| v).collect());
            }
            "SPECIES1" | "SPECIES2" => {
                if toks.len() != 2 {
                    return Err(err(no, format!("expected `{} k`", toks[0])));
                }
                let k: usize = num(no, toks[1], "species count")?;
                if toks[0] == "SPECIES1" {
                    n1 = Some(k);
                } else {
                    n2 = Some(k);
                }
            }
            "W" => {
                let n = need_nodes(n_nodes)?;
                if toks.len() < 2 || toks.len() % 2 != 0 {
                    return Err(err(no, "expected `W s i v i v ...`"));
                }
                let s: usize = num(no, toks[1], "species id")?;
                let mut pairs = Vec::new();
                for pair in toks[2..].chunks(2) {
                    let i: usize = num(no, pair[0], "node id")?;
                    let w: f64 = num(no, pair[1], "score")?;
                    if i >= n {
                        return Err(err(no, format!("unknown node id {i}")));
                    }
                    if !(w >= 0.0 && w.is_finite()) {
                        return Err(err(no, format!("score must be nonnegative, got {w}")));
                    }
                    pairs.push((i, w));
                }
                weights.push((no, s, pairs));
            }
            "LAMBDA" => {
                let total = match (n1, n2) {
                    (Some(a), Some(b)) => a + b,
                    _ => return Err(err(no, "LAMBDA must follow SPECIES1 and SPECIES2")),
                };
                let vals = read_values(&mut lines, total, no, "quota")?;
                for &(vno, v) in &vals {
                    if !(v >= 0.0 && v.is_finite()) {
                        return Err(err(vno, format!("quota must be nonnegative, got {v}")));
                    }
                }
                lambda = Some((no, vals.into_iter().map(|(_, v)| v).collect()));
            }
            "PARAMS" => {
                if toks.len() != 5 {
                    return Err(err(no, "expected `PARAMS P1 P2 d k`"));
                }
                let mut p = [0usize; 4];
                for (slot, t) in p.iter_mut().zip(&toks[1..]) {
                    *slot = num(no, t, "parameter")?;
                }
                params = Some(p);
            }
            other => return Err(err(no, format!("unknown section {other:?}"))),
        }
    }

    let n = n_nodes.ok_or_else(|| err(0, "missing NODES section"))?;
    let cost = cost.ok_or_else(|| err(0, "missing COSTS section"))?;
    let n1 = n1.unwrap_or(0);
    let n2 = n2.unwrap_or(0);
    let n_species = n1 + n2;
    let mut per_species: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_species];
    for (no, s, pairs) in weights {
        if s >= n_species {
            return Err(err(no, format!("unknown species id {s}")));
        }
        per_species[s].extend(pairs);
    }
    let lambdas = match lambda {
        Some((_, l)) => l,
        None if n_species == 0 => Vec::new(),
        None => return Err(err(0, "missing LAMBDA section")),
    };
    let [p1, p2, d, k] = params.unwrap_or([0, 0, 1, 1]);
    let species = per_species
        .into_iter()
        .zip(lambdas)
        .enumerate()
        .map(|(s, (w, l))| {
            let class = if s < n1 {
                SpeciesClass::Core
            } else {
                SpeciesClass::Reserve
            };
            Species::new(class, w, l)
        })
        .collect();
    let first_edge_line = edges.first().map(|e| e.0).unwrap_or(0);
    let edges: Vec<(usize, usize)> = edges.into_iter().map(|(_, a, b)| (a, b)).collect();
    Instance::new(n, edges, cost, species, p1, p2, d, k).map_err(|e| match e {
        Error::InvalidInstance(m) => err(first_edge_line, m),
        other => other,
    })
}

/// Solution summary: objective and the core, reserve, root and hosted
/// species index lists, one keyword per line.
pub fn write_solution(inst: &Instance, variant: VariantId, sol: &Solution) -> String {
    let mut out = String::new();
    let list = |v: Vec<usize>| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "VARIANT {variant}");
    let _ = writeln!(out, "OBJECTIVE {}", sol.cost(inst));
    let _ = writeln!(out, "COMPONENTS {}", sol.n_components(inst, variant));
    let _ = writeln!(out, "CORE {}", list(sol.core_nodes()));
    let _ = writeln!(out, "RESERVE {}", list(sol.reserve_nodes()));
    let _ = writeln!(out, "ROOTS {}", list(sol.roots()));
    let _ = writeln!(out, "HOSTED {}", list(sol.hosted()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_grid;

    #[test]
    fn round_trip_grid() {
        let g = generate_grid(6, 2, 3, 11).unwrap().with_params(2, 1, 1, 3).unwrap();
        let text = write_instance(&g);
        let back = parse_instance(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn unknown_node_is_error() {
        let text = "NODES 9\nEDGES 1\n0 99\nCOSTS\n1 1 1 1 1 1 1 1 1\n";
        match parse_instance(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let text = "NODES 9\nEDGES 0\nCOSTS\n1 1 1 1 1 1 1 1 1\nSPECIES1 1\nSPECIES2 0\nW 0 99 5\nLAMBDA\n1\n";
        assert!(matches!(parse_instance(text), Err(Error::Parse { line: 7, .. })));
    }

    #[test]
    fn negative_cost_is_error() {
        let text = "NODES 3\nEDGES 0\nCOSTS\n1 -2 3\n";
        assert!(matches!(parse_instance(text), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn empty_species_sections() {
        let text = "# tiny\nNODES 2\nEDGES 1\n0 1 # an edge\nCOSTS\n3 4\nSPECIES1 0\nSPECIES2 0\nPARAMS 0 0 1 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.species().len(), 0);
        assert_eq!(inst.cost(), &[3.0, 4.0]);
    }

    #[test]
    fn malformed_sections() {
        assert!(parse_instance("EDGES 1\n0 1\n").is_err());
        assert!(parse_instance("NODES 2\nEDGES 2\n0 1\nCOSTS\n1 1\n").is_err());
        assert!(parse_instance("NODES 2\nCOSTS\n1\nPARAMS 0 0 1 1\n").is_err());
        assert!(parse_instance("NODES 2\nCOSTS\n1 1\nBOGUS\n").is_err());
    }

    proptest::proptest! {
        #[test]
        fn round_trip_any_grid(n in 2usize..7, s1 in 0usize..3, s2 in 0usize..3, seed in 0u64..1000) {
            let g = generate_grid(n, s1, s2, seed).unwrap();
            proptest::prop_assert_eq!(parse_instance(&write_instance(&g)).unwrap(), g);
        }
    }
}
