//! Driver for an external MILP solver invoked as a shell command.
//!
//! The command template may contain `{lp}` and `{sol}`; they are replaced
//! by the path of the exported LP file and the path the solver must write
//! its solution to. The solution file holds `name value` lines (other
//! lines are ignored) or the single word `infeasible`. After each run the
//! integer point is re-separated by the registered generators; violated
//! cuts are appended and the solver is run again until none are found.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use super::bnc::{CutContext, LazyCutGenerator, SolveResult, SolveStats, SolveStatus};
use super::lpfile::{export_with_rows, lp_name};
use super::{LinearConstraint, MilpError, MilpModel, TOL};

#[derive(Debug, Clone)]
pub struct ExternalSolver {
    pub command: String,
    pub workdir: PathBuf,
    pub max_rounds: usize,
}

impl ExternalSolver {
    pub fn new(command: impl Into<String>, workdir: impl Into<PathBuf>) -> Self {
        ExternalSolver { command: command.into(), workdir: workdir.into(), max_rounds: 100 }
    }
}

/// Parses a solution file into values indexed like the model variables.
pub fn parse_solution(model: &MilpModel, text: &str) -> Option<Vec<f64>> {
    if text.split_whitespace().next().is_some_and(|w| w.eq_ignore_ascii_case("infeasible")) {
        return None;
    }
    let index: HashMap<String, usize> = model
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| (lp_name(&v.name, i), i))
        .collect();
    let mut x = vec![0.0; model.n_vars()];
    for line in text.lines() {
        let mut it = line.split_whitespace();
        let (Some(name), Some(val)) = (it.next(), it.next()) else { continue };
        if let (Some(&i), Ok(v)) = (index.get(name), val.parse::<f64>()) {
            x[i] = v;
        }
    }
    Some(x)
}

fn run_once(solver: &ExternalSolver, lp: &Path, sol: &Path) -> Result<String, MilpError> {
    let cmd = solver
        .command
        .replace("{lp}", &lp.display().to_string())
        .replace("{sol}", &sol.display().to_string());
    let _ = std::fs::remove_file(sol);
    let status = Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .status()
        .map_err(|e| MilpError::External(format!("cannot start '{cmd}': {e}")))?;
    if !status.success() {
        return Err(MilpError::External(format!("'{cmd}' exited with {status}")));
    }
    std::fs::read_to_string(sol)
        .map_err(|e| MilpError::External(format!("cannot read {}: {e}", sol.display())))
}

/// Solves `model` externally, iterating integer re-separation to a fixpoint.
pub fn solve_external(
    model: &MilpModel,
    generators: &mut [&mut dyn LazyCutGenerator],
    solver: &ExternalSolver,
) -> Result<SolveResult, MilpError> {
    let start = Instant::now();
    std::fs::create_dir_all(&solver.workdir)
        .map_err(|e| MilpError::External(format!("{}: {e}", solver.workdir.display())))?;
    let lp_path = solver.workdir.join("model.lp");
    let sol_path = solver.workdir.join("model.sol");
    let mut cuts: Vec<LinearConstraint> = Vec::new();
    let mut stats = SolveStats::default();
    for round in 0..solver.max_rounds {
        std::fs::write(&lp_path, export_with_rows(model, &cuts))
            .map_err(|e| MilpError::External(format!("{}: {e}", lp_path.display())))?;
        let text = run_once(solver, &lp_path, &sol_path)?;
        stats.nodes += 1;
        let Some(mut x) = parse_solution(model, &text) else {
            stats.wall_time = start.elapsed().as_secs_f64();
            return Ok(SolveResult {
                status: SolveStatus::Infeasible,
                incumbent: None,
                primal_bound: f64::INFINITY,
                dual_bound: f64::INFINITY,
                stats,
            });
        };
        for (v, xi) in model.variables().iter().zip(x.iter_mut()) {
            if v.binary {
                *xi = xi.round();
            }
        }
        if !model.is_feasible(&x, TOL) || cuts.iter().any(|c| c.violation(&x) > TOL) {
            return Err(MilpError::External("solver returned an infeasible point".into()));
        }
        let ctx = CutContext { node: round, depth: 0, is_root: true, integral: true };
        let mut found = Vec::new();
        for g in generators.iter_mut() {
            found.extend(g.separate(&ctx, &x).into_iter().filter(|c| c.violation(&x) > TOL * 0.1));
        }
        if found.is_empty() {
            let obj = model.objective_value(&x);
            stats.wall_time = start.elapsed().as_secs_f64();
            stats.cuts_added = cuts.len();
            return Ok(SolveResult {
                status: SolveStatus::Optimal,
                incumbent: Some(x),
                primal_bound: obj,
                dual_bound: obj,
                stats,
            });
        }
        cuts.extend(found);
    }
    Err(MilpError::External(format!("no fixpoint after {} rounds", solver.max_rounds)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::Sense;

    struct AtMostOne;
    impl LazyCutGenerator for AtMostOne {
        fn separate(&mut self, _: &CutContext, x: &[f64]) -> Vec<LinearConstraint> {
            if x[0] + x[1] > 1.5 {
                vec![LinearConstraint::new("pair", &[(0, 1.0), (1, 1.0)], Sense::Le, 1.0)]
            } else {
                Vec::new()
            }
        }
    }

    #[test]
    fn iterates_until_no_cut() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = MilpModel::new("e");
        m.add_binary("a", -1.0);
        m.add_binary("b", -1.0);
        // fake solver: all ones on the first call, then a single one
        let cmd = "if grep -q pair {lp}; then printf 'a 1\\nb 0\\n' > {sol}; \
                   else printf 'a 1\\nb 1\\n' > {sol}; fi";
        let solver = ExternalSolver::new(cmd, dir.path());
        let mut g = AtMostOne;
        let mut gens: Vec<&mut dyn LazyCutGenerator> = vec![&mut g];
        let r = solve_external(&m, &mut gens, &solver).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.incumbent.unwrap(), vec![1.0, 0.0]);
        assert_eq!(r.stats.nodes, 2);
        assert_eq!(r.stats.cuts_added, 1);
    }

    #[test]
    fn infeasible_keyword() {
        let m = MilpModel::new("e");
        assert!(parse_solution(&m, "infeasible\n").is_none());
    }
}
