//! SVG maps of solutions: cores dark, buffer-only nodes light, the rest outlined.

use std::fmt::Write as _;

use crate::instance::{detect_grid, Instance};
use crate::solution::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    /// Grid cells when the graph is a row-major grid, force-directed otherwise.
    #[default]
    Auto,
    Grid,
    ForceDirected,
}

const CORE: &str = "#1b5e20";
const BUFFER: &str = "#a5d6a7";
const CELL: f64 = 20.0;

fn fill(sol: &Solution, i: usize) -> &'static str {
    if sol.z[i] {
        CORE
    } else if sol.x[i] {
        BUFFER
    } else {
        "none"
    }
}

/// Renders `sol` on `inst`. Output depends only on the inputs.
pub fn render_solution(inst: &Instance, sol: &Solution, layout: Layout) -> String {
    let grid = detect_grid(inst);
    match (layout, grid) {
        (Layout::Grid | Layout::Auto, Some((rows, cols))) => render_grid(inst, sol, rows, cols),
        (Layout::Grid, None) => render_grid(inst, sol, 1, inst.n_nodes().max(1)),
        _ => render_graph(inst, sol),
    }
}

fn render_grid(inst: &Instance, sol: &Solution, rows: usize, cols: usize) -> String {
    let (w, h) = (cols as f64 * CELL, rows as f64 * CELL);
    let mut out = header(w, h);
    for i in 0..inst.n_nodes() {
        let (r, c) = (i / cols, i % cols);
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}" stroke="#555" stroke-width="0.5"><title>{i}</title></rect>"##,
            c as f64 * CELL,
            r as f64 * CELL,
            fill(sol, i)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn render_graph(inst: &Instance, sol: &Solution) -> String {
    let pos = force_layout(inst);
    let size = 400.0;
    let mut out = header(size, size);
    for &(a, b) in inst.edges() {
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999" stroke-width="1"/>"##,
            pos[a].0 * size,
            pos[a].1 * size,
            pos[b].0 * size,
            pos[b].1 * size
        );
    }
    for (i, p) in pos.iter().enumerate() {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="6" fill="{}" stroke="#333" stroke-width="1"><title>{i}</title></circle>"##,
            p.0 * size,
            p.1 * size,
            fill(sol, i)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn header(w: f64, h: f64) -> String {
    format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#) + "\n"
}

/// Fruchterman-Reingold from a circle, scaled into `[0.05, 0.95]²`.
fn force_layout(inst: &Instance) -> Vec<(f64, f64)> {
    let n = inst.n_nodes();
    if n == 0 {
        return Vec::new();
    }
    let mut p: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect();
    let k = (4.0 / n as f64).sqrt();
    let mut temp = 0.2;
    for _ in 0..300 {
        let mut disp = vec![(0.0, 0.0); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let (dx, dy) = (p[i].0 - p[j].0, p[i].1 - p[j].1);
                let d = (dx * dx + dy * dy).sqrt().max(1e-6);
                let f = k * k / d;
                disp[i].0 += dx / d * f;
                disp[i].1 += dy / d * f;
                disp[j].0 -= dx / d * f;
                disp[j].1 -= dy / d * f;
            }
        }
        for &(a, b) in inst.edges() {
            let (dx, dy) = (p[a].0 - p[b].0, p[a].1 - p[b].1);
            let d = (dx * dx + dy * dy).sqrt().max(1e-6);
            let f = d * d / k;
            disp[a].0 -= dx / d * f;
            disp[a].1 -= dy / d * f;
            disp[b].0 += dx / d * f;
            disp[b].1 += dy / d * f;
        }
        for i in 0..n {
            let (dx, dy) = disp[i];
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            let step = d.min(temp);
            p[i].0 += dx / d * step;
            p[i].1 += dy / d * step;
        }
        temp *= 0.98;
    }
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for q in &p {
        lo = (lo.0.min(q.0), lo.1.min(q.1));
        hi = (hi.0.max(q.0), hi.1.max(q.1));
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
    p.iter().map(|q| (0.05 + 0.9 * (q.0 - lo.0) / span, 0.05 + 0.9 * (q.1 - lo.1) / span)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulation::VariantId;
    use crate::instance::{grid_edges, Species, SpeciesClass};

    fn inst() -> Instance {
        let sp = vec![Species::new(SpeciesClass::Core, vec![(4, 5.0)], 5.0)];
        Instance::new(9, grid_edges(3, 3), vec![1.0; 9], sp, 1, 0, 1, 1).unwrap()
    }

    #[test]
    fn empty_solution_is_outlined() {
        let i = inst();
        let svg = render_solution(&i, &Solution::empty(&i), Layout::Auto);
        assert_eq!(svg.matches("<rect").count(), 9);
        assert!(!svg.contains(CORE) && !svg.contains(BUFFER));
    }

    #[test]
    fn colors_and_determinism() {
        let i = inst();
        let s = Solution::from_core(&i, VariantId::GrscCb, &[4]);
        let svg = render_solution(&i, &s, Layout::Grid);
        assert_eq!(svg.matches(CORE).count(), 1);
        assert_eq!(svg.matches(BUFFER).count(), 4);
        let a = render_solution(&i, &s, Layout::ForceDirected);
        let b = render_solution(&i, &s, Layout::ForceDirected);
        assert_eq!(a, b);
        assert_eq!(a.matches("<circle").count(), 9);
    }
}
