//! Benchmark harness over generated grid sets and CSV run records.

use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulation::VariantId;
use crate::instance::{generate_grid, Instance, ScenarioId};
use crate::solver::{gap, solve, Setting, SolveOutcome, SolverConfig};

/// One solve as a CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub scenario: String,
    pub variant: String,
    pub k: usize,
    pub setting: String,
    pub status: String,
    /// `#c.`: connected components of the core (reserve without a buffer).
    pub components: usize,
    /// `#lp.`: land parcels in the reserve.
    pub parcels: usize,
    pub objective: f64,
    pub dual_bound: f64,
    pub gap: f64,
    pub root_bound: f64,
    /// Heuristic cost before the exact solve; empty when heuristics are off.
    pub heuristic: Option<f64>,
    pub nodes: usize,
    pub cuts: usize,
    pub time: f64,
}

impl RunRecord {
    pub fn from_outcome(
        instance: &str,
        scenario: Option<ScenarioId>,
        inst: &Instance,
        variant: VariantId,
        setting: Setting,
        out: &SolveOutcome,
    ) -> Self {
        let (components, parcels) = out
            .solution
            .as_ref()
            .map_or((0, 0), |s| (s.n_components(inst, variant), s.reserve_nodes().len()));
        RunRecord {
            instance: instance.to_string(),
            scenario: scenario.map_or_else(|| "-".to_string(), |s| s.to_string()),
            variant: variant.to_string(),
            k: inst.max_components,
            setting: setting.to_string(),
            status: out.status.to_string(),
            components,
            parcels,
            objective: out.objective,
            dual_bound: out.dual_bound,
            gap: gap(out.objective, out.dual_bound),
            root_bound: out.root_bound,
            heuristic: out.heuristic_objective,
            nodes: out.stats.nodes,
            cuts: out.stats.cuts_added,
            time: out.time,
        }
    }

    /// Primal gap of the heuristic against this record's objective.
    pub fn primal_gap(&self) -> Option<f64> {
        self.heuristic.map(|h| {
            if self.objective.abs() < 1e-12 {
                0.0
            } else {
                100.0 * (h - self.objective) / self.objective
            }
        })
    }
}

pub fn write_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

/// Grid side and species counts of benchmark set 1..=4 at full scale.
pub fn set_shape(set: u8) -> Result<(usize, usize, usize)> {
    match set {
        1 => Ok((20, 1, 3)),
        2 => Ok((20, 3, 9)),
        3 => Ok((30, 1, 3)),
        4 => Ok((30, 3, 9)),
        _ => Err(Error::InvalidParameter(format!("benchmark set must be 1..4, got {set}"))),
    }
}

/// Desk-scale side for a set: 8 for the small sets, 10 for the large ones.
pub fn desk_side(set: u8) -> usize {
    if set <= 2 {
        8
    } else {
        10
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sets: Vec<u8>,
    /// Grid side override; `None` uses [`desk_side`].
    pub scale: Option<usize>,
    pub count: usize,
    pub scenarios: Vec<ScenarioId>,
    pub ks: Vec<usize>,
    pub variants: Vec<VariantId>,
    pub settings: Vec<Setting>,
    pub seed: u64,
    pub solver: SolverConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sets: vec![1],
            scale: None,
            count: 10,
            scenarios: ScenarioId::ALL.to_vec(),
            ks: vec![1, 3],
            variants: vec![VariantId::GrscCb],
            settings: Setting::ALL.to_vec(),
            seed: 0,
            solver: SolverConfig { time_limit: Some(Duration::from_secs(60)), ..Default::default() },
        }
    }
}

/// Base instances `(id, instance)` of the configured sets.
pub fn bench_instances(cfg: &BenchConfig) -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for &set in &cfg.sets {
        let (_, s1, s2) = set_shape(set)?;
        let n = cfg.scale.unwrap_or_else(|| desk_side(set));
        for idx in 0..cfg.count {
            let seed = cfg.seed.wrapping_add(1000 * set as u64 + idx as u64);
            out.push((format!("set{set}_{n}_{idx}"), generate_grid(n, s1, s2, seed)?));
        }
    }
    Ok(out)
}

/// Runs every (instance, scenario, k, variant, setting) cell in a fixed
/// order; `progress` sees each record as it is produced.
pub fn run_bench(cfg: &BenchConfig, mut progress: impl FnMut(&RunRecord)) -> Result<Vec<RunRecord>> {
    let mut records = Vec::new();
    for (id, base) in bench_instances(cfg)? {
        for &sc in &cfg.scenarios {
            for &k in &cfg.ks {
                let inst = base.apply_scenario(sc).with_max_components(k);
                for &variant in &cfg.variants {
                    for &setting in &cfg.settings {
                        let scfg = SolverConfig { setting, ..cfg.solver.clone() };
                        let out = solve(&inst, variant, &scfg)?;
                        let r = RunRecord::from_outcome(&id, Some(sc), &inst, variant, setting, &out);
                        progress(&r);
                        records.push(r);
                    }
                }
            }
        }
    }
    Ok(records)
}

/// Median of `values` (mean of the middle pair for even counts).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}
