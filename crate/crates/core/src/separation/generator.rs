//! The ordered cut loop as a lazy-cut callback.

use std::collections::HashSet;

use super::{
    separate_connectivity_fractional, separate_connectivity_integer, separate_cover,
    separate_species_cover, Cut, CutPool,
};
use crate::formulation::{ConnectivityFamily, Formulation, VarMap, VariantId};
use crate::instance::Instance;
use crate::milp::{CutContext, LazyCutGenerator, LinearConstraint};

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationConfig {
    /// Targets below this value are skipped by fractional connectivity separation.
    pub tau: f64,
    /// Separate cover and species-cover cuts at the root.
    pub cover_cuts: bool,
    /// Total cover/species-cover cuts allowed.
    pub cover_budget: usize,
    /// When nothing is found at `tau`, retry with every positive target.
    pub final_exact_pass: bool,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig { tau: 0.5, cover_cuts: false, cover_budget: 20, final_exact_pass: true }
    }
}

/// Cut generator for one formulation. Every emitted cut is also recorded in
/// [`CutGenerator::pool`].
pub struct CutGenerator<'a> {
    inst: &'a Instance,
    variant: VariantId,
    vars: VarMap,
    family: Option<ConnectivityFamily>,
    pub config: SeparationConfig,
    pub pool: CutPool,
    cover_added: usize,
    emitted: HashSet<Cut>,
}

impl<'a> CutGenerator<'a> {
    pub fn new(inst: &'a Instance, form: &Formulation, config: SeparationConfig) -> Self {
        CutGenerator {
            inst,
            variant: form.variant,
            vars: form.vars,
            family: form.lazy,
            config,
            pool: CutPool::new(),
            cover_added: 0,
            emitted: HashSet::new(),
        }
    }

    /// Forgets which cuts were emitted, for reuse in a fresh solve.
    pub fn reset_run(&mut self) {
        self.emitted.clear();
    }

    pub fn cover_cuts_added(&self) -> usize {
        self.cover_added
    }

    fn cover_stage(&mut self, x: &[f64]) -> Vec<Cut> {
        let mut out = Vec::new();
        for s in 0..self.inst.species().len() {
            if self.cover_added + out.len() >= self.config.cover_budget {
                break;
            }
            let Some((cover, cut)) = separate_cover(self.inst, &self.vars, x, s) else { continue };
            let scc = separate_species_cover(self.inst, self.variant, &self.vars, x, s, &cover);
            for c in [cut, scc].into_iter().flatten() {
                if out.len() + self.cover_added < self.config.cover_budget && !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out.dedup();
        out
    }

    /// Runs the separation stages in order and returns the first nonempty
    /// result. Integer points only get connectivity cuts.
    pub fn cut_loop(&mut self, x: &[f64], is_root: bool, integral: bool) -> Vec<Cut> {
        if integral {
            return match self.family {
                Some(f) => separate_connectivity_integer(self.inst, &self.vars, x, f),
                None => Vec::new(),
            };
        }
        if self.config.cover_cuts && is_root && self.cover_added < self.config.cover_budget {
            let cuts: Vec<Cut> =
                self.cover_stage(x).into_iter().filter(|c| !self.emitted.contains(c)).collect();
            if !cuts.is_empty() {
                self.cover_added += cuts.len();
                return cuts;
            }
        }
        let Some(f) = self.family else { return Vec::new() };
        let fresh = |cuts: Vec<Cut>, emitted: &HashSet<Cut>| -> Vec<Cut> {
            cuts.into_iter().filter(|c| !emitted.contains(c)).collect()
        };
        let cuts = fresh(
            separate_connectivity_fractional(self.inst, &self.vars, x, f, self.config.tau),
            &self.emitted,
        );
        if !cuts.is_empty() || !self.config.final_exact_pass || self.config.tau <= 1e-6 {
            return cuts;
        }
        fresh(separate_connectivity_fractional(self.inst, &self.vars, x, f, 0.0), &self.emitted)
    }
}

impl LazyCutGenerator for CutGenerator<'_> {
    fn separate(&mut self, ctx: &CutContext, x: &[f64]) -> Vec<LinearConstraint> {
        let cuts = self.cut_loop(x, ctx.is_root, ctx.integral);
        cuts.into_iter()
            .map(|c| {
                let lc = c.to_constraint(&self.vars);
                self.pool.insert(c.clone());
                self.emitted.insert(c);
                lc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulation::build;
    use crate::instance::{grid_edges, Species, SpeciesClass};
    use crate::separation::CutFamily;

    fn toy() -> Instance {
        let sp = vec![Species::new(SpeciesClass::Core, vec![(0, 4.0), (8, 4.0)], 8.0)];
        Instance::new(9, grid_edges(3, 3), vec![1.0; 9], sp, 1, 0, 1, 1).unwrap()
    }

    #[test]
    fn integer_points_only_get_connectivity_cuts() {
        let inst = toy();
        let f = build(&inst, VariantId::GrscCb).unwrap();
        let cfg = SeparationConfig { cover_cuts: true, ..Default::default() };
        let mut g = CutGenerator::new(&inst, &f, cfg);
        let mut x = vec![0.0; f.vars.len()];
        x[f.vars.u(0)] = 1.0;
        for i in [0, 8] {
            x[f.vars.z(i)] = 1.0;
        }
        x[f.vars.y(0)] = 1.0;
        let cuts = g.cut_loop(&x, true, true);
        assert!(!cuts.is_empty());
        assert!(cuts.iter().all(|c| c.family == CutFamily::CoreCon));
    }

    #[test]
    fn cover_stage_first_then_budget() {
        let inst = toy();
        let f = build(&inst, VariantId::GrscCb).unwrap();
        let cfg = SeparationConfig { cover_cuts: true, cover_budget: 1, ..Default::default() };
        let mut g = CutGenerator::new(&inst, &f, cfg);
        let mut x = vec![0.0; f.vars.len()];
        x[f.vars.u(0)] = 1.0;
        x[f.vars.z(4)] = 1.0;
        let first = g.cut_loop(&x, true, false);
        assert_eq!(first.len(), 1);
        assert!(matches!(first[0].family, CutFamily::Cover | CutFamily::Scc));
        let second = g.cut_loop(&x, true, false);
        assert!(second.iter().all(|c| c.family == CutFamily::CoreCon));
        assert!(!second.is_empty());
    }
}
