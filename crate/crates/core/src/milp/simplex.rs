//! Bounded-variable simplex on a condensed tableau.
//!
//! Every constraint row `i` gets a logical variable `s_i = a_i x` whose
//! bounds encode the row sense, so the system is homogeneous and the
//! tableau stores only `x_B = T x_N` (`m` rows by `n` nonbasic columns).
//! Structural variables are `0..n`, logical variable of row `i` is `n + i`.
//!
//! Cold starts run a composite primal simplex (phase one minimizes the sum
//! of bound violations). Re-solves after bound changes or added rows run the
//! dual simplex from the previous basis. Both fall back to Bland's rule
//! after a run of degenerate pivots.

use super::MilpError;

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 50;
const REFACTOR_EVERY: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pos {
    Basic(usize),
    Nonbasic(usize),
}

#[derive(Debug, Clone)]
pub struct SimplexLp {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    head: Vec<usize>,
    nonbasic: Vec<usize>,
    pos: Vec<Pos>,
    at_upper: Vec<bool>,
    tab: Vec<f64>,
    xb: Vec<f64>,
    dj: Vec<f64>,
    since_refactor: usize,
    iterations: usize,
    solved_once: bool,
}

fn logical_bounds(lo: f64, hi: f64) -> (f64, f64) {
    (lo, hi)
}

impl SimplexLp {
    /// `cost`, `lb`, `ub` are per structural variable; each row carries
    /// `(coefficients, row lower bound, row upper bound)`.
    pub fn new(cost: Vec<f64>, lb: Vec<f64>, ub: Vec<f64>) -> Self {
        let n = cost.len();
        assert_eq!(lb.len(), n);
        assert_eq!(ub.len(), n);
        let mut lp = SimplexLp {
            n,
            rows: Vec::new(),
            cost,
            lb,
            ub,
            head: Vec::new(),
            nonbasic: (0..n).collect(),
            pos: (0..n).map(Pos::Nonbasic).collect(),
            at_upper: vec![false; n],
            tab: Vec::new(),
            xb: Vec::new(),
            dj: Vec::new(),
            since_refactor: 0,
            iterations: 0,
            solved_once: false,
        };
        for j in 0..n {
            lp.at_upper[j] = lp.preferred_upper(j, lp.cost[j]);
        }
        lp.dj = lp.cost.clone();
        lp
    }

    pub fn n_structural(&self) -> usize {
        self.n
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn preferred_upper(&self, v: usize, d: f64) -> bool {
        let (lo, hi) = (self.lb[v], self.ub[v]);
        if lo == f64::NEG_INFINITY {
            return hi.is_finite();
        }
        d < 0.0 && hi.is_finite()
    }

    fn nb_value(&self, v: usize) -> f64 {
        if self.at_upper[v] {
            self.ub[v]
        } else if self.lb[v].is_finite() {
            self.lb[v]
        } else {
            0.0
        }
    }

    fn is_free(&self, v: usize) -> bool {
        self.lb[v] == f64::NEG_INFINITY && self.ub[v] == f64::INFINITY
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.tab[i * self.n..(i + 1) * self.n]
    }

    /// Appends a row `lo <= a x <= hi`; its logical starts basic.
    pub fn add_row(&mut self, coeffs: &[(usize, f64)], lo: f64, hi: f64) {
        let n = self.n;
        let mut new_row = vec![0.0; n];
        for &(k, a) in coeffs {
            match self.pos[k] {
                Pos::Nonbasic(j) => new_row[j] += a,
                Pos::Basic(i) => {
                    let src = &self.tab[i * n..(i + 1) * n];
                    for (r, &t) in new_row.iter_mut().zip(src) {
                        *r += a * t;
                    }
                }
            }
        }
        let value: f64 = new_row
            .iter()
            .zip(&self.nonbasic)
            .map(|(&t, &v)| if t != 0.0 { t * self.nb_value(v) } else { 0.0 })
            .sum();
        let (lo, hi) = logical_bounds(lo, hi);
        let var = n + self.m();
        self.rows.push(coeffs.to_vec());
        self.cost.push(0.0);
        self.lb.push(lo);
        self.ub.push(hi);
        self.at_upper.push(false);
        self.pos.push(Pos::Basic(self.head.len()));
        self.head.push(var);
        self.tab.extend_from_slice(&new_row);
        self.xb.push(value);
    }

    /// Changes the bounds of a structural variable, keeping the basis.
    pub fn set_bounds(&mut self, v: usize, lo: f64, hi: f64) {
        if self.lb[v] == lo && self.ub[v] == hi {
            return;
        }
        match self.pos[v] {
            Pos::Basic(_) => {
                self.lb[v] = lo;
                self.ub[v] = hi;
            }
            Pos::Nonbasic(j) => {
                let old = self.nb_value(v);
                self.lb[v] = lo;
                self.ub[v] = hi;
                let d = self.dj[j];
                self.at_upper[v] = if lo == f64::NEG_INFINITY {
                    hi.is_finite()
                } else if hi == f64::INFINITY {
                    false
                } else {
                    d < 0.0
                };
                let new = self.nb_value(v);
                let delta = new - old;
                if delta != 0.0 {
                    self.shift_basics(j, delta);
                }
            }
        }
    }

    fn shift_basics(&mut self, col: usize, delta: f64) {
        let n = self.n;
        for i in 0..self.m() {
            let t = self.tab[i * n + col];
            if t != 0.0 {
                self.xb[i] += t * delta;
            }
        }
    }

    /// Current value of every structural variable.
    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|v| self.value(v)).collect()
    }

    pub fn value(&self, v: usize) -> f64 {
        match self.pos[v] {
            Pos::Basic(i) => self.xb[i],
            Pos::Nonbasic(_) => self.nb_value(v),
        }
    }

    #[cfg(test)]
    pub fn objective(&self) -> f64 {
        (0..self.n).map(|v| self.cost[v] * self.value(v)).sum()
    }

    fn recompute_basics(&mut self) {
        let n = self.n;
        let xn: Vec<f64> = self.nonbasic.iter().map(|&v| self.nb_value(v)).collect();
        for i in 0..self.m() {
            let row = &self.tab[i * n..(i + 1) * n];
            self.xb[i] = row.iter().zip(&xn).map(|(a, b)| a * b).sum();
        }
    }

    fn recompute_duals(&mut self) {
        let n = self.n;
        let mut d: Vec<f64> = self.nonbasic.iter().map(|&v| self.cost[v]).collect();
        for i in 0..self.m() {
            let cb = self.cost[self.head[i]];
            if cb != 0.0 {
                for (dj, &t) in d.iter_mut().zip(&self.tab[i * n..(i + 1) * n]) {
                    *dj += cb * t;
                }
            }
        }
        self.dj = d;
    }

    /// Pivots basic row `r` out and nonbasic column `q` in. The leaving
    /// variable becomes nonbasic at its upper bound iff `leave_upper`.
    fn pivot(&mut self, r: usize, q: usize, leave_upper: bool, entering_value: f64) {
        let n = self.n;
        let p = self.tab[r * n + q];
        debug_assert!(p.abs() > 0.0);
        let mut new_row: Vec<f64> = self.tab[r * n..(r + 1) * n].iter().map(|&t| -t / p).collect();
        new_row[q] = 1.0 / p;
        for i in 0..self.m() {
            if i == r {
                continue;
            }
            let f = self.tab[i * n + q];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.tab[i * n..(i + 1) * n];
            for (t, &nr) in row.iter_mut().zip(&new_row) {
                *t += f * nr;
            }
            row[q] = f * new_row[q];
        }
        let dq = self.dj[q];
        if dq != 0.0 {
            for (d, &nr) in self.dj.iter_mut().zip(&new_row) {
                *d += dq * nr;
            }
            self.dj[q] = dq * new_row[q];
        }
        self.tab[r * n..(r + 1) * n].copy_from_slice(&new_row);

        let leaving = self.head[r];
        let entering = self.nonbasic[q];
        self.head[r] = entering;
        self.nonbasic[q] = leaving;
        self.pos[entering] = Pos::Basic(r);
        self.pos[leaving] = Pos::Nonbasic(q);
        self.at_upper[leaving] = leave_upper;
        self.at_upper[entering] = false;
        self.xb[r] = entering_value;
        self.iterations += 1;
        self.since_refactor += 1;
    }

    /// Rebuilds the tableau from the original rows for the current basis.
    pub fn refactor(&mut self) {
        let n = self.n;
        let m = self.m();
        let target_basic: Vec<usize> = self.head.iter().copied().filter(|&v| v < n).collect();
        let mut in_target = vec![false; n + m];
        for &v in &self.head {
            in_target[v] = true;
        }
        self.tab = vec![0.0; m * n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, a) in row {
                self.tab[i * n + k] += a;
            }
        }
        self.head = (n..n + m).collect();
        self.nonbasic = (0..n).collect();
        for v in 0..n {
            self.pos[v] = Pos::Nonbasic(v);
        }
        for i in 0..m {
            self.pos[n + i] = Pos::Basic(i);
        }
        let saved_upper = self.at_upper.clone();
        self.xb = vec![0.0; m];
        self.dj = vec![0.0; n];
        for v in target_basic {
            let Pos::Nonbasic(col) = self.pos[v] else { continue };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..m {
                let h = self.head[i];
                if h >= n && !in_target[h] {
                    let a = self.tab[i * n + col].abs();
                    if a > PIVOT_TOL && best.is_none_or(|(_, b)| a > b) {
                        best = Some((i, a));
                    }
                }
            }
            if let Some((r, _)) = best {
                let leaving = self.head[r];
                self.pivot(r, col, saved_upper[leaving], 0.0);
                self.iterations -= 1;
            }
        }
        for v in 0..n + m {
            if let Pos::Nonbasic(_) = self.pos[v] {
                self.at_upper[v] = saved_upper[v] && self.ub[v].is_finite()
                    || (self.lb[v] == f64::NEG_INFINITY && self.ub[v].is_finite());
            } else {
                self.at_upper[v] = false;
            }
        }
        self.recompute_basics();
        self.recompute_duals();
        self.since_refactor = 0;
    }

    fn primal_infeasibility(&self, i: usize) -> f64 {
        let v = self.head[i];
        let x = self.xb[i];
        if x < self.lb[v] - PRIMAL_TOL {
            self.lb[v] - x
        } else if x > self.ub[v] + PRIMAL_TOL {
            x - self.ub[v]
        } else {
            0.0
        }
    }

    fn is_dual_feasible(&self) -> bool {
        self.nonbasic.iter().zip(&self.dj).all(|(&v, &d)| {
            if self.lb[v] == self.ub[v] {
                true
            } else if self.is_free(v) {
                d.abs() <= 1e3 * DUAL_TOL
            } else if self.at_upper[v] {
                d <= 1e3 * DUAL_TOL
            } else {
                d >= -1e3 * DUAL_TOL
            }
        })
    }

    /// Residual check of the current basis against the original rows.
    fn verify(&self) -> bool {
        let x = self.values();
        for (i, row) in self.rows.iter().enumerate() {
            let act: f64 = row.iter().map(|&(k, a)| a * x[k]).sum();
            let s = self.value(self.n + i);
            if (act - s).abs() > 1e-7 * (1.0 + act.abs()) {
                return false;
            }
        }
        true
    }

    fn primal_feasible(&self) -> bool {
        (0..self.m()).all(|i| self.primal_infeasibility(i) == 0.0)
    }

    /// Solves from the current basis.
    pub fn solve(&mut self, max_iterations: usize) -> Result<SimplexStatus, MilpError> {
        for attempt in 0..3 {
            if self.since_refactor > REFACTOR_EVERY || attempt > 0 {
                self.refactor();
            }
            let status = if self.solved_once && self.is_dual_feasible() {
                match self.dual(max_iterations)? {
                    SimplexStatus::Optimal if !self.is_dual_feasible() => self.primal(max_iterations)?,
                    s => s,
                }
            } else {
                self.primal(max_iterations)?
            };
            self.solved_once = true;
            if status != SimplexStatus::Optimal {
                if status == SimplexStatus::Infeasible && attempt == 0 && !self.verify() {
                    continue;
                }
                return Ok(status);
            }
            if self.verify() {
                // refresh values and duals so the reported point is clean
                self.recompute_basics();
                self.recompute_duals();
                if self.primal_feasible() && self.is_dual_feasible() {
                    return Ok(status);
                }
            }
        }
        Err(MilpError::Numerical(
            "simplex failed to reach a verified optimal basis".into(),
        ))
    }

    fn dual(&mut self, max_iterations: usize) -> Result<SimplexStatus, MilpError> {
        let n = self.n;
        let mut degenerate = 0usize;
        let start = self.iterations;
        loop {
            if self.iterations - start > max_iterations {
                return Err(MilpError::Numerical("dual simplex iteration limit".into()));
            }
            if self.since_refactor > REFACTOR_EVERY {
                self.refactor();
            }
            let bland = degenerate > DEGENERATE_STREAK;
            // leaving row
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m() {
                let inf = self.primal_infeasibility(i);
                if inf > 0.0 {
                    let better = match leave {
                        None => true,
                        Some((r, b)) => {
                            if bland {
                                self.head[i] < self.head[r]
                            } else {
                                inf > b
                            }
                        }
                    };
                    if better {
                        leave = Some((i, inf));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Ok(SimplexStatus::Optimal);
            };
            let lv = self.head[r];
            let below = self.xb[r] < self.lb[lv];
            let target = if below { self.lb[lv] } else { self.ub[lv] };
            let s = if below { 1.0 } else { -1.0 };
            let row = &self.tab[r * n..(r + 1) * n];

            // candidates: moving nonbasic j in its feasible direction pushes x_r toward target
            let mut cands: Vec<(usize, f64, f64)> = Vec::new(); // (col, |alpha|, ratio)
            for (j, &alpha) in row.iter().enumerate() {
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                let v = self.nonbasic[j];
                if self.lb[v] == self.ub[v] {
                    continue;
                }
                let ok = if self.is_free(v) {
                    true
                } else if self.at_upper[v] {
                    s * alpha < 0.0
                } else {
                    s * alpha > 0.0
                };
                if ok {
                    cands.push((j, alpha.abs(), self.dj[j].abs() / alpha.abs()));
                }
            }
            if cands.is_empty() {
                return Ok(SimplexStatus::Infeasible);
            }
            let q = if bland {
                let min_ratio = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
                cands
                    .iter()
                    .filter(|c| c.2 <= min_ratio + 1e-12)
                    .min_by_key(|c| self.nonbasic[c.0])
                    .unwrap()
                    .0
            } else {
                let bound = cands
                    .iter()
                    .map(|&(j, a, _)| (self.dj[j].abs() + DUAL_TOL) / a)
                    .fold(f64::INFINITY, f64::min);
                cands
                    .iter()
                    .filter(|c| c.2 <= bound)
                    .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                    .unwrap()
                    .0
            };
            if self.dj[q].abs() < 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            let alpha = self.tab[r * n + q];
            let theta = (target - self.xb[r]) / alpha;
            let ev = self.nonbasic[q];
            let entering_value = self.nb_value(ev) + theta;
            self.shift_basics(q, theta);
            self.pivot(r, q, !below, entering_value);
        }
    }

    fn primal(&mut self, max_iterations: usize) -> Result<SimplexStatus, MilpError> {
        let n = self.n;
        let mut degenerate = 0usize;
        let start = self.iterations;
        loop {
            if self.iterations - start > max_iterations {
                return Err(MilpError::Numerical("primal simplex iteration limit".into()));
            }
            if self.since_refactor > REFACTOR_EVERY {
                self.refactor();
            }
            let m = self.m();
            // phase-one cost on basics, or true reduced costs
            let mut phase_one = false;
            let mut cb = vec![0.0; m];
            for (i, c) in cb.iter_mut().enumerate() {
                let v = self.head[i];
                if self.xb[i] < self.lb[v] - PRIMAL_TOL {
                    *c = -1.0;
                    phase_one = true;
                } else if self.xb[i] > self.ub[v] + PRIMAL_TOL {
                    *c = 1.0;
                    phase_one = true;
                }
            }
            let d: Vec<f64> = if phase_one {
                let mut d = vec![0.0; n];
                for (i, &c) in cb.iter().enumerate() {
                    if c != 0.0 {
                        for (dj, &t) in d.iter_mut().zip(self.row(i)) {
                            *dj += c * t;
                        }
                    }
                }
                d
            } else {
                self.recompute_duals();
                self.dj.clone()
            };
            let bland = degenerate > DEGENERATE_STREAK;

            // entering column and direction
            let mut enter: Option<(usize, f64, f64)> = None; // (col, dir, |d|)
            for (j, &dj) in d.iter().enumerate() {
                let v = self.nonbasic[j];
                if self.lb[v] == self.ub[v] {
                    continue;
                }
                let free = self.is_free(v);
                let dir = if dj < -DUAL_TOL && (free || !self.at_upper[v]) {
                    1.0
                } else if dj > DUAL_TOL && (free || self.at_upper[v]) {
                    -1.0
                } else {
                    continue;
                };
                let better = match enter {
                    None => true,
                    Some((c, _, best)) => {
                        if bland {
                            v < self.nonbasic[c]
                        } else {
                            dj.abs() > best
                        }
                    }
                };
                if better {
                    enter = Some((j, dir, dj.abs()));
                }
            }
            let Some((q, dir, _)) = enter else {
                if phase_one {
                    return Ok(SimplexStatus::Infeasible);
                }
                return Ok(SimplexStatus::Optimal);
            };
            let ev = self.nonbasic[q];

            // ratio test (Harris two-pass)
            let flip = self.ub[ev] - self.lb[ev];
            let limit = |i: usize, alpha: f64, relax: f64| -> Option<f64> {
                let v = self.head[i];
                let x = self.xb[i];
                let (lo, hi) = (self.lb[v], self.ub[v]);
                let below = x < lo - PRIMAL_TOL;
                let above = x > hi + PRIMAL_TOL;
                if alpha > 0.0 {
                    if below {
                        Some((lo - x + relax) / alpha)
                    } else if above {
                        None
                    } else if hi.is_finite() {
                        Some(((hi - x).max(0.0) + relax) / alpha)
                    } else {
                        None
                    }
                } else if above {
                    Some((hi - x - relax) / alpha)
                } else if below {
                    None
                } else if lo.is_finite() {
                    Some(((lo - x).min(0.0) - relax) / alpha)
                } else {
                    None
                }
            };
            let mut t_relaxed = f64::INFINITY;
            for i in 0..m {
                let alpha = self.tab[i * n + q] * dir;
                if alpha.abs() <= PIVOT_TOL {
                    continue;
                }
                if let Some(t) = limit(i, alpha, PRIMAL_TOL) {
                    t_relaxed = t_relaxed.min(t.max(0.0));
                }
            }
            let mut leave: Option<(usize, f64, f64)> = None; // (row, |alpha|, exact t)
            if t_relaxed.is_finite() {
                for i in 0..m {
                    let alpha = self.tab[i * n + q] * dir;
                    if alpha.abs() <= PIVOT_TOL {
                        continue;
                    }
                    if let Some(t) = limit(i, alpha, 0.0) {
                        let t = t.max(0.0);
                        if t <= t_relaxed {
                            let better = match leave {
                                None => true,
                                Some((r, a, bt)) => {
                                    if bland {
                                        t < bt - 1e-12
                                            || (t <= bt + 1e-12 && self.head[i] < self.head[r])
                                    } else {
                                        alpha.abs() > a
                                    }
                                }
                            };
                            if better {
                                leave = Some((i, alpha.abs(), t));
                            }
                        }
                    }
                }
            }
            let t_row = leave.map_or(f64::INFINITY, |l| l.2);
            if flip <= t_row {
                if !flip.is_finite() {
                    if phase_one {
                        return Err(MilpError::Numerical("unbounded phase-one ray".into()));
                    }
                    return Ok(SimplexStatus::Unbounded);
                }
                // bound flip, no basis change
                self.shift_basics(q, dir * flip);
                self.at_upper[ev] = dir > 0.0;
                self.iterations += 1;
                degenerate = 0;
                continue;
            }
            let (r, _, t) = leave.expect("finite row ratio");
            if t < 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            let lv = self.head[r];
            let alpha = self.tab[r * n + q] * dir;
            let entering_value = self.nb_value(ev) + dir * t;
            self.shift_basics(q, dir * t);
            // the leaving variable sits at the bound it was moving toward
            let x_new = self.xb[r];
            let leave_upper = if alpha > 0.0 {
                !(x_new < self.lb[lv] - PRIMAL_TOL) && self.ub[lv].is_finite()
            } else {
                x_new > self.ub[lv] + PRIMAL_TOL && self.ub[lv].is_finite()
            };
            let leave_upper = if self.lb[lv] == f64::NEG_INFINITY {
                true
            } else if self.ub[lv] == f64::INFINITY {
                false
            } else {
                leave_upper
            };
            self.pivot(r, q, leave_upper, entering_value);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(cost: &[f64], bounds: &[(f64, f64)]) -> SimplexLp {
        SimplexLp::new(
            cost.to_vec(),
            bounds.iter().map(|b| b.0).collect(),
            bounds.iter().map(|b| b.1).collect(),
        )
    }

    #[test]
    fn single_bound_row() {
        let mut p = lp(&[1.0], &[(0.0, 10.0)]);
        p.add_row(&[(0, 1.0)], 3.0, f64::INFINITY);
        assert_eq!(p.solve(1000).unwrap(), SimplexStatus::Optimal);
        assert!((p.value(0) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_rows() {
        let mut p = lp(&[0.0], &[(0.0, 10.0)]);
        p.add_row(&[(0, 1.0)], 2.0, f64::INFINITY);
        p.add_row(&[(0, 1.0)], f64::NEG_INFINITY, 1.0);
        assert_eq!(p.solve(1000).unwrap(), SimplexStatus::Infeasible);
    }

    #[test]
    fn classic_two_var() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> (2, 6), 36
        let mut p = lp(&[-3.0, -5.0], &[(0.0, f64::INFINITY), (0.0, f64::INFINITY)]);
        p.add_row(&[(0, 1.0)], f64::NEG_INFINITY, 4.0);
        p.add_row(&[(1, 2.0)], f64::NEG_INFINITY, 12.0);
        p.add_row(&[(0, 3.0), (1, 2.0)], f64::NEG_INFINITY, 18.0);
        assert_eq!(p.solve(1000).unwrap(), SimplexStatus::Optimal);
        assert!((p.objective() + 36.0).abs() < 1e-9);
        // warm start: tighten x <= 1 -> y = 6, obj -33
        p.set_bounds(0, 0.0, 1.0);
        assert_eq!(p.solve(1000).unwrap(), SimplexStatus::Optimal);
        assert!((p.objective() + 33.0).abs() < 1e-9);
        // add a cut y <= 5 -> -3 - 25 = -28
        p.add_row(&[(1, 1.0)], f64::NEG_INFINITY, 5.0);
        assert_eq!(p.solve(1000).unwrap(), SimplexStatus::Optimal);
        assert!((p.objective() + 28.0).abs() < 1e-9);
    }

    #[test]
    fn unbounded() {
        let mut p = lp(&[-1.0], &[(0.0, f64::INFINITY)]);
        p.add_row(&[(0, 1.0)], 1.0, f64::INFINITY);
        assert_eq!(p.solve(1000).unwrap(), SimplexStatus::Unbounded);
    }

    #[test]
    fn equality_and_free() {
        // min x + y, x - y = 1, x free, y in [0, 5]  -> y = 0, x = 1
        let mut p = lp(&[1.0, 1.0], &[(f64::NEG_INFINITY, f64::INFINITY), (0.0, 5.0)]);
        p.add_row(&[(0, 1.0), (1, -1.0)], 1.0, 1.0);
        assert_eq!(p.solve(1000).unwrap(), SimplexStatus::Optimal);
        assert!((p.value(0) - 1.0).abs() < 1e-9 && p.value(1).abs() < 1e-9);
    }
}
