//! Sequential minimal optimization for the linear-kernel dual SVM.
//!
//! Platt-style pairwise working-set selection. The weight vector is carried
//! explicitly (linear kernel), so kernel evaluations are plain dot products
//! and the primal weights fall out of the solve directly.

use crate::Result;

use super::{Dataset, Hyperparams};

/// Solve outcome plus the per-step dual objective trace. The trace is
/// non-decreasing; tests assert this.
pub struct SmoOutcome {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Dual objective after every successful pair update.
    pub objective_trace: Vec<f64>,
    pub pair_updates: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Solver<'a> {
    data: &'a Dataset,
    c: f64,
    tol: f64,
    alpha: Vec<f64>,
    w: Vec<f64>,
    b: f64,
}

impl<'a> Solver<'a> {
    fn decision(&self, i: usize) -> f64 {
        dot(&self.w, self.data.row(i)) + self.b
    }

    fn error(&self, i: usize) -> f64 {
        self.decision(i) - self.data.y[i]
    }

    /// Dual objective: sum(alpha) - 0.5 * ||w||^2 with w = sum(alpha_i y_i x_i).
    fn objective(&self) -> f64 {
        self.alpha.iter().sum::<f64>() - 0.5 * dot(&self.w, &self.w)
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1_old, a2_old) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.data.y[i1], self.data.y[i2]);
        let e1 = self.error(i1);
        let e2 = self.error(i2);
        let s = y1 * y2;

        let (low, high) = if s < 0.0 {
            let d = a2_old - a1_old;
            (d.max(0.0), (self.c + d).min(self.c))
        } else {
            let sum = a1_old + a2_old;
            ((sum - self.c).max(0.0), sum.min(self.c))
        };
        if low >= high {
            return false;
        }

        let x1 = self.data.row(i1);
        let x2 = self.data.row(i2);
        let k11 = dot(x1, x1);
        let k12 = dot(x1, x2);
        let k22 = dot(x2, x2);
        let eta = k11 + k22 - 2.0 * k12;

        let mut a2 = if eta > 0.0 {
            (a2_old + y2 * (e1 - e2) / eta).clamp(low, high)
        } else {
            // Degenerate curvature: evaluate the dual at both clip ends and
            // move to the better one, which keeps the objective monotone.
            let f1 = y1 * (e1 + self.b) - a1_old * k11 - s * a2_old * k12;
            let f2 = y2 * (e2 + self.b) - s * a1_old * k12 - a2_old * k22;
            let l1 = a1_old + s * (a2_old - low);
            let h1 = a1_old + s * (a2_old - high);
            let obj_low = l1 * f1
                + low * f2
                + 0.5 * l1 * l1 * k11
                + 0.5 * low * low * k22
                + s * low * l1 * k12;
            let obj_high = h1 * f1
                + high * f2
                + 0.5 * h1 * h1 * k11
                + 0.5 * high * high * k22
                + s * high * h1 * k12;
            if obj_low < obj_high - 1e-12 {
                low
            } else if obj_high < obj_low - 1e-12 {
                high
            } else {
                return false;
            }
        };
        if (a2 - a2_old).abs() < 1e-12 * (a2 + a2_old + 1e-12) {
            return false;
        }
        if a2 < 1e-12 {
            a2 = 0.0;
        } else if a2 > self.c - 1e-12 {
            a2 = self.c;
        }
        let a1 = a1_old + s * (a2_old - a2);

        // w and the threshold update before alphas so errors stay consistent.
        let d1 = y1 * (a1 - a1_old);
        let d2 = y2 * (a2 - a2_old);
        for j in 0..self.data.dim {
            self.w[j] += d1 * x1[j] + d2 * x2[j];
        }
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        self.b = if a1 > 0.0 && a1 < self.c {
            b1
        } else if a2 > 0.0 && a2 < self.c {
            b2
        } else {
            (b1 + b2) / 2.0
        };
        self.alpha[i1] = a1;
        self.alpha[i2] = a2;
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.data.y[i2];
        let a2 = self.alpha[i2];
        let e2 = self.error(i2);
        let r2 = e2 * y2;
        let violates = (r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0);
        if !violates {
            return false;
        }

        // Second choice: maximize |E1 - E2| over free alphas.
        let mut best: Option<(usize, f64)> = None;
        for i1 in 0..self.data.len() {
            if i1 == i2 {
                continue;
            }
            let a1 = self.alpha[i1];
            if a1 > 0.0 && a1 < self.c {
                let gap = (self.error(i1) - e2).abs();
                if best.map_or(true, |(_, g)| gap > g) {
                    best = Some((i1, gap));
                }
            }
        }
        if let Some((i1, _)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        // Fall back to scanning free alphas, then everything, in index order.
        for pass in 0..2 {
            for i1 in 0..self.data.len() {
                let free = self.alpha[i1] > 0.0 && self.alpha[i1] < self.c;
                if (pass == 0 && !free) || (pass == 1 && free) {
                    continue;
                }
                if self.take_step(i1, i2) {
                    return true;
                }
            }
        }
        false
    }
}

/// Run SMO to convergence (no KKT violations beyond the tolerance) or until
/// the pair-update budget `hp.max_iter` runs out.
pub fn optimize(data: &Dataset, hp: &Hyperparams) -> Result<SmoOutcome> {
    let mut solver = Solver {
        data,
        c: hp.c,
        tol: hp.tolerance,
        alpha: vec![0.0; data.len()],
        w: vec![0.0; data.dim],
        b: 0.0,
    };
    let mut trace = Vec::new();
    let mut pair_updates = 0usize;
    let mut examine_all = true;
    let mut converged = false;

    loop {
        let mut changed = 0usize;
        for i in 0..data.len() {
            if !examine_all {
                let a = solver.alpha[i];
                if a <= 0.0 || a >= solver.c {
                    continue;
                }
            }
            if solver.examine(i) {
                changed += 1;
                pair_updates += 1;
                trace.push(solver.objective());
                if pair_updates >= hp.max_iter {
                    break;
                }
            }
        }
        if pair_updates >= hp.max_iter {
            break;
        }
        if examine_all {
            if changed == 0 {
                converged = true;
                break;
            }
            examine_all = false;
        } else if changed == 0 {
            examine_all = true;
        }
    }

    Ok(SmoOutcome {
        weights: solver.w,
        bias: solver.b,
        objective_trace: trace,
        pair_updates,
        converged,
    })
}
