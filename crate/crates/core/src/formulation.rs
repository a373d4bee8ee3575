//! MILP models for the four problem variants.
//!
//! Variable layout is `u` (one per species), then `x`, `z` and, for the
//! connectivity variants, `y` (one per node each).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::ClosedNeighborhoods;
use crate::instance::{Instance, SpeciesClass};
use crate::milp::{MilpModel, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariantId {
    Grsc,
    GrscB,
    GrscC,
    GrscCb,
}

impl VariantId {
    pub const ALL: [VariantId; 4] = [VariantId::Grsc, VariantId::GrscB, VariantId::GrscC, VariantId::GrscCb];

    pub fn has_buffer(self) -> bool {
        matches!(self, VariantId::GrscB | VariantId::GrscCb)
    }

    pub fn has_connectivity(self) -> bool {
        matches!(self, VariantId::GrscC | VariantId::GrscCb)
    }

    /// Buffer width in effect: the instance's `d` for buffer variants, else 0.
    pub fn effective_width(self, inst: &Instance) -> usize {
        if self.has_buffer() {
            inst.buffer_width
        } else {
            0
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VariantId::Grsc => "GRSC",
            VariantId::GrscB => "GRSC-B",
            VariantId::GrscC => "GRSC-C",
            VariantId::GrscCb => "GRSC-CB",
        }
    }
}

impl fmt::Display for VariantId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VariantId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grsc" => Ok(VariantId::Grsc),
            "grsc-b" => Ok(VariantId::GrscB),
            "grsc-c" => Ok(VariantId::GrscC),
            "grsc-cb" => Ok(VariantId::GrscCb),
            _ => Err(Error::InvalidParameter(format!("unknown variant '{s}'"))),
        }
    }
}

/// Which variable a connectivity cut is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnectivityFamily {
    /// cuts in `z` (GRSC-CB)
    CoreCon,
    /// cuts in `x` (GRSC-C)
    AllCon,
}

/// Column positions of the model variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarMap {
    pub n_species: usize,
    pub n_nodes: usize,
    pub has_y: bool,
}

impl VarMap {
    pub fn u(&self, s: usize) -> usize {
        s
    }

    pub fn x(&self, i: usize) -> usize {
        self.n_species + i
    }

    pub fn z(&self, i: usize) -> usize {
        self.n_species + self.n_nodes + i
    }

    pub fn y(&self, i: usize) -> usize {
        assert!(self.has_y, "variant has no root variables");
        self.n_species + 2 * self.n_nodes + i
    }

    pub fn len(&self) -> usize {
        self.n_species + self.n_nodes * if self.has_y { 3 } else { 2 }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A built model plus what the solver needs to know about it.
#[derive(Debug, Clone)]
pub struct Formulation {
    pub variant: VariantId,
    pub model: MilpModel,
    pub vars: VarMap,
    /// Family of lazy connectivity cuts the model relies on.
    pub lazy: Option<ConnectivityFamily>,
    ncomp_row: Option<usize>,
}

/// Builds the model of `variant` for `inst`.
pub fn build(inst: &Instance, variant: VariantId) -> Result<Formulation> {
    if variant.has_connectivity() && inst.max_components < 1 {
        return Err(Error::InvalidParameter(format!(
            "{variant} needs at least one component, got k = {}",
            inst.max_components
        )));
    }
    let n = inst.n_nodes();
    let ns = inst.species().len();
    let vars = VarMap { n_species: ns, n_nodes: n, has_y: variant.has_connectivity() };
    let mut m = MilpModel::new(format!("{variant}"));
    for s in 0..ns {
        m.add_binary(format!("u_{s}"), 0.0);
    }
    for i in 0..n {
        m.add_binary(format!("x_{i}"), inst.cost()[i]);
    }
    for i in 0..n {
        m.add_binary(format!("z_{i}"), 0.0);
    }
    if vars.has_y {
        for i in 0..n {
            m.add_binary(format!("y_{i}"), 0.0);
        }
    }

    for (s, sp) in inst.species().iter().enumerate() {
        let mut row: Vec<(usize, f64)> = sp
            .weights()
            .iter()
            .map(|&(i, w)| {
                let col = match sp.class {
                    SpeciesClass::Core => vars.z(i),
                    SpeciesClass::Reserve => vars.x(i),
                };
                (col, w)
            })
            .collect();
        row.push((vars.u(s), -sp.lambda));
        m.add_row(format!("quota_{s}"), &row, Sense::Ge, 0.0)?;
    }
    let s1: Vec<(usize, f64)> = inst.s1().map(|s| (vars.u(s), 1.0)).collect();
    let s2: Vec<(usize, f64)> = inst.s2().map(|s| (vars.u(s), 1.0)).collect();
    m.add_row("protect_1", &s1, Sense::Ge, inst.p1 as f64)?;
    m.add_row("protect_2", &s2, Sense::Ge, inst.p2 as f64)?;
    for i in 0..n {
        m.add_row(format!("link_{i}"), &[(vars.z(i), 1.0), (vars.x(i), -1.0)], Sense::Le, 0.0)?;
    }

    if variant.has_buffer() {
        let hood = ClosedNeighborhoods::new(inst.adjacency(), inst.buffer_width);
        for i in 0..n {
            for &j in hood.of(i) {
                if j != i {
                    m.add_row(
                        format!("buff1_{i}_{j}"),
                        &[(vars.z(i), 1.0), (vars.x(j), -1.0)],
                        Sense::Le,
                        0.0,
                    )?;
                }
            }
        }
        for i in 0..n {
            let mut row: Vec<(usize, f64)> = hood.of(i).iter().map(|&j| (vars.z(j), -1.0)).collect();
            row.push((vars.x(i), 1.0));
            m.add_row(format!("buff2_{i}"), &row, Sense::Le, 0.0)?;
        }
    }

    let mut ncomp_row = None;
    if vars.has_y {
        let ys: Vec<(usize, f64)> = (0..n).map(|i| (vars.y(i), 1.0)).collect();
        ncomp_row = Some(m.add_row("ncomp", &ys, Sense::Le, inst.max_components as f64)?);
        for i in 0..n {
            let (name, other) = match variant {
                VariantId::GrscCb => (format!("yz_{i}"), vars.z(i)),
                _ => (format!("yx_{i}"), vars.x(i)),
            };
            m.add_row(name, &[(vars.y(i), 1.0), (other, -1.0)], Sense::Le, 0.0)?;
        }
    }

    let lazy = match variant {
        VariantId::GrscC => Some(ConnectivityFamily::AllCon),
        VariantId::GrscCb => Some(ConnectivityFamily::CoreCon),
        _ => None,
    };
    Ok(Formulation { variant, model: m, vars, lazy, ncomp_row })
}

impl Formulation {
    /// Copy with the extra row `u_s = 1`.
    pub fn force_species(&self, s: usize) -> Result<Formulation> {
        if s >= self.vars.n_species {
            return Err(Error::UnknownSpecies(s));
        }
        let mut out = self.clone();
        out.model.add_row(format!("force_{s}"), &[(self.vars.u(s), 1.0)], Sense::Eq, 1.0)?;
        Ok(out)
    }

    /// Copy whose component-count row is an equality (`enable`) or `<=`.
    pub fn ncomp_equality(&self, enable: bool) -> Formulation {
        let mut out = self.clone();
        if let Some(r) = self.ncomp_row {
            out.model.constraints_mut()[r].sense = if enable { Sense::Eq } else { Sense::Le };
        }
        out
    }

    pub fn ncomp_is_equality(&self) -> bool {
        self.ncomp_row.is_some_and(|r| self.model.constraints()[r].sense == Sense::Eq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{grid_edges, Species};

    fn toy(k: usize) -> Instance {
        let sp = vec![
            Species::new(SpeciesClass::Core, vec![(4, 10.0)], 5.0),
            Species::new(SpeciesClass::Reserve, vec![(0, 3.0), (8, 3.0)], 3.0),
        ];
        Instance::new(9, grid_edges(3, 3), vec![1.0; 9], sp, 1, 1, 1, k).unwrap()
    }

    #[test]
    fn counts() {
        let inst = toy(1);
        let f = build(&inst, VariantId::Grsc).unwrap();
        assert_eq!(f.model.n_vars(), 2 + 18);
        assert_eq!(f.model.n_constraints(), 1 + 1 + 2 + 9);
        let f = build(&inst, VariantId::GrscCb).unwrap();
        assert_eq!(f.model.n_vars(), 2 + 27);
        assert_eq!(f.vars.len(), 29);
        assert_eq!(f.lazy, Some(ConnectivityFamily::CoreCon));
    }

    #[test]
    fn zero_components_rejected() {
        let inst = toy(0);
        for v in [VariantId::GrscC, VariantId::GrscCb] {
            assert!(matches!(build(&inst, v), Err(Error::InvalidParameter(_))));
        }
        assert!(build(&inst, VariantId::GrscB).is_ok());
    }

    #[test]
    fn empty_point_feasible_without_protection() {
        let inst = toy(1).with_params(0, 0, 1, 1).unwrap();
        for v in VariantId::ALL {
            let f = build(&inst, v).unwrap();
            assert!(f.model.is_feasible(&vec![0.0; f.model.n_vars()], 0.0));
        }
    }

    #[test]
    fn force_and_equality() {
        let f = build(&toy(2), VariantId::GrscCb).unwrap();
        assert!(matches!(f.force_species(5), Err(Error::UnknownSpecies(5))));
        let g = f.force_species(0).unwrap();
        assert_eq!(g.model.n_constraints(), f.model.n_constraints() + 1);
        let e = f.ncomp_equality(true);
        assert!(e.ncomp_is_equality());
        assert!(!e.ncomp_equality(false).ncomp_is_equality());
    }

    #[test]
    fn variant_names() {
        for v in VariantId::ALL {
            assert_eq!(v.to_string().parse::<VariantId>().unwrap(), v);
        }
        assert!("grsc-x".parse::<VariantId>().is_err());
    }
}
