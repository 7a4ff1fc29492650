//! Logistic-loss gradient descent: the plain linear baseline.
//!
//! Full-batch descent with a halving line search on the regularized negative
//! log-likelihood; deterministic with no randomness at all.

use crate::Result;

use super::{Dataset, Hyperparams, LinearFit};

const MAX_DESCENT_STEPS: usize = 500;

fn objective_and_grad(data: &Dataset, w: &[f64], b: f64, lambda: f64) -> (f64, Vec<f64>, f64) {
    let n = data.len() as f64;
    let mut loss = 0.0f64;
    let mut grad_w = vec![0.0f64; data.dim];
    let mut grad_b = 0.0f64;
    for i in 0..data.len() {
        let x = data.row(i);
        let y = data.y[i];
        let z = y * (w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + b);
        // log(1 + e^-z) computed stably for both signs of z.
        loss += if z > 0.0 {
            (-z).exp().ln_1p()
        } else {
            -z + z.exp().ln_1p()
        };
        let sigma = 1.0 / (1.0 + z.exp());
        let coeff = -y * sigma / n;
        for (g, xj) in grad_w.iter_mut().zip(x) {
            *g += coeff * xj;
        }
        grad_b += coeff;
    }
    loss /= n;
    loss += 0.5 * lambda * w.iter().map(|w| w * w).sum::<f64>();
    for (g, wj) in grad_w.iter_mut().zip(w) {
        *g += lambda * wj;
    }
    (loss, grad_w, grad_b)
}

pub fn fit(data: &Dataset, hp: &Hyperparams) -> Result<LinearFit> {
    let lambda = 1.0 / (hp.c * data.len() as f64);
    let mut w = vec![0.0f64; data.dim];
    let mut b = 0.0f64;
    let (mut loss, mut grad_w, mut grad_b) = objective_and_grad(data, &w, b, lambda);
    let max_steps = MAX_DESCENT_STEPS.min(hp.max_iter.max(1));

    for _ in 0..max_steps {
        let grad_norm = grad_w
            .iter()
            .chain(std::iter::once(&grad_b))
            .fold(0.0f64, |m, g| m.max(g.abs()));
        if grad_norm < hp.tolerance {
            break;
        }
        let mut step = 4.0f64;
        let mut advanced = false;
        while step > 1e-12 {
            let cand_w: Vec<f64> = w.iter().zip(&grad_w).map(|(w, g)| w - step * g).collect();
            let cand_b = b - step * grad_b;
            let (cand_loss, cand_gw, cand_gb) = objective_and_grad(data, &cand_w, cand_b, lambda);
            if cand_loss < loss {
                w = cand_w;
                b = cand_b;
                loss = cand_loss;
                grad_w = cand_gw;
                grad_b = cand_gb;
                advanced = true;
                break;
            }
            step *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    Ok(LinearFit {
        weights: w,
        bias: b,
    })
}
