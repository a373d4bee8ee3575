//! A small MILP engine: model container, LP relaxation, branch-and-cut.

mod bnc;
pub mod external;
mod lpfile;
mod simplex;

pub use bnc::{
    branch_and_cut, root_bound, BranchAndCutOptions, CutContext, FractionalSeparation,
    LazyCutGenerator, PrimalHeuristic, SolveResult, SolveStats, SolveStatus,
};
pub use external::{solve_external, ExternalSolver};
pub use lpfile::{export_lp_file, lp_name, MAX_NAME_LEN};
pub(crate) use simplex::{SimplexLp, SimplexStatus};

use thiserror::Error;

/// Feasibility and integrality tolerance used throughout.
pub const TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MilpError {
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("cut '{cut}' is violated by the reference solution by {violation}")]
    InvalidCut { cut: String, violation: f64 },
    #[error("external solver: {0}")]
    External(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lb: f64,
    pub ub: f64,
    pub binary: bool,
    pub obj: f64,
}

/// A linear row `Σ coeffs (sense) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl LinearConstraint {
    /// Builds a row, merging repeated indices and dropping zero coefficients.
    pub fn new(name: impl Into<String>, coeffs: &[(usize, f64)], sense: Sense, rhs: f64) -> Self {
        let mut c: Vec<(usize, f64)> = coeffs.to_vec();
        c.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(c.len());
        for (k, a) in c {
            match merged.last_mut() {
                Some(last) if last.0 == k => last.1 += a,
                _ => merged.push((k, a)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        LinearConstraint { name: name.into(), coeffs: merged, sense, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(k, a)| a * x[k]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let a = self.activity(x);
        match self.sense {
            Sense::Ge => (self.rhs - a).max(0.0),
            Sense::Le => (a - self.rhs).max(0.0),
            Sense::Eq => (a - self.rhs).abs(),
        }
    }

    pub(crate) fn row_bounds(&self) -> (f64, f64) {
        match self.sense {
            Sense::Ge => (self.rhs, f64::INFINITY),
            Sense::Le => (f64::NEG_INFINITY, self.rhs),
            Sense::Eq => (self.rhs, self.rhs),
        }
    }
}

/// Minimization model over bounded variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MilpModel {
    pub name: String,
    vars: Vec<Variable>,
    cons: Vec<LinearConstraint>,
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        MilpModel { name: name.into(), vars: Vec::new(), cons: Vec::new() }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: f64, ub: f64, obj: f64) -> usize {
        self.vars.push(Variable { name: name.into(), lb, ub, binary: false, obj });
        self.vars.len() - 1
    }

    pub fn add_binary(&mut self, name: impl Into<String>, obj: f64) -> usize {
        self.vars.push(Variable { name: name.into(), lb: 0.0, ub: 1.0, binary: true, obj });
        self.vars.len() - 1
    }

    pub fn add_constraint(&mut self, c: LinearConstraint) -> Result<usize, MilpError> {
        if let Some(&(k, _)) = c.coeffs.iter().find(|e| e.0 >= self.vars.len()) {
            return Err(MilpError::InvalidModel(format!(
                "constraint '{}' references undeclared variable {k}",
                c.name
            )));
        }
        if !c.rhs.is_finite() || c.coeffs.iter().any(|e| !e.1.is_finite()) {
            return Err(MilpError::InvalidModel(format!("constraint '{}' is not finite", c.name)));
        }
        self.cons.push(c);
        Ok(self.cons.len() - 1)
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: &[(usize, f64)],
        sense: Sense,
        rhs: f64,
    ) -> Result<usize, MilpError> {
        self.add_constraint(LinearConstraint::new(name, coeffs, sense, rhs))
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.cons
    }

    pub fn constraints_mut(&mut self) -> &mut [LinearConstraint] {
        &mut self.cons
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.cons.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Tightens bounds of a variable in place.
    pub fn set_bounds(&mut self, var: usize, lb: f64, ub: f64) {
        self.vars[var].lb = lb;
        self.vars[var].ub = ub;
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.vars.iter().zip(x).map(|(v, &xi)| v.obj * xi).sum()
    }

    pub fn validate(&self) -> Result<(), MilpError> {
        for v in &self.vars {
            if v.binary && (v.lb < 0.0 || v.ub > 1.0) {
                return Err(MilpError::InvalidModel(format!("binary '{}' has bounds outside [0,1]", v.name)));
            }
            if v.lb > v.ub || v.lb == f64::INFINITY || v.ub == f64::NEG_INFINITY || !v.obj.is_finite() {
                return Err(MilpError::InvalidModel(format!("variable '{}' has invalid data", v.name)));
            }
        }
        for c in &self.cons {
            if c.coeffs.iter().any(|e| e.0 >= self.vars.len()) {
                return Err(MilpError::InvalidModel(format!("constraint '{}' is dangling", c.name)));
            }
        }
        Ok(())
    }

    /// True when `x` satisfies every row and bound within `tol`.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.vars.len()
            && self.vars.iter().zip(x).all(|(v, &xi)| xi >= v.lb - tol && xi <= v.ub + tol)
            && self.cons.iter().all(|c| c.violation(x) <= tol)
    }

    /// True when every binary variable of `x` is within `tol` of 0 or 1.
    pub fn is_integral(&self, x: &[f64], tol: f64) -> bool {
        self.vars
            .iter()
            .zip(x)
            .all(|(v, &xi)| !v.binary || (xi - xi.round()).abs() <= tol)
    }

    pub(crate) fn to_simplex(&self) -> SimplexLp {
        let mut lp = SimplexLp::new(
            self.vars.iter().map(|v| v.obj).collect(),
            self.vars.iter().map(|v| v.lb).collect(),
            self.vars.iter().map(|v| v.ub).collect(),
        );
        for c in &self.cons {
            let (lo, hi) = c.row_bounds();
            lp.add_row(&c.coeffs, lo, hi);
        }
        lp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpPoint {
    pub values: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
}

pub(crate) fn iteration_cap(lp: &SimplexLp) -> usize {
    50 * (lp.n_structural() + lp.n_rows()) + 10_000
}

/// Solves the continuous relaxation of `model`.
pub fn solve_lp(model: &MilpModel) -> Result<LpPoint, MilpError> {
    model.validate()?;
    let mut lp = model.to_simplex();
    let status = lp.solve(iteration_cap(&lp))?;
    let status = match status {
        SimplexStatus::Optimal => LpStatus::Optimal,
        SimplexStatus::Infeasible => LpStatus::Infeasible,
        SimplexStatus::Unbounded => LpStatus::Unbounded,
    };
    let values = lp.values();
    let objective = model.objective_value(&values);
    if status == LpStatus::Optimal && !model.is_feasible(&values, TOL) {
        return Err(MilpError::Numerical("LP optimum fails the feasibility check".into()));
    }
    Ok(LpPoint { values, objective, status })
}
