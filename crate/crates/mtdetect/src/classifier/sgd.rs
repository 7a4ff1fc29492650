//! Pegasos-style primal SVM: hinge-loss subgradient descent with step size
//! 1/(lambda t), lambda = 1/(C n), and seeded per-epoch shuffling.
//!
//! The bias is folded in as an augmented constant feature, so the vanilla
//! Pegasos update applies to the whole parameter vector.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Result;

use super::{Dataset, Hyperparams, LinearFit};

pub fn fit(data: &Dataset, hp: &Hyperparams) -> Result<LinearFit> {
    let n = data.len();
    let lambda = 1.0 / (hp.c * n as f64);
    // Last slot is the bias weight against a constant 1 input.
    let mut w = vec![0.0f64; data.dim + 1];
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let mut order: Vec<usize> = (0..n).collect();

    let mut t = 1u64;
    for _ in 0..hp.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let eta = 1.0 / (lambda * t as f64);
            let x = data.row(i);
            let y = data.y[i];
            let score = w[..data.dim].iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + w[data.dim];
            let shrink = 1.0 - eta * lambda;
            for wj in &mut w {
                *wj *= shrink;
            }
            if y * score < 1.0 {
                for (wj, xj) in w[..data.dim].iter_mut().zip(x) {
                    *wj += eta * y * xj;
                }
                w[data.dim] += eta * y;
            }
            t += 1;
        }
    }
    let bias = w[data.dim];
    w.truncate(data.dim);
    Ok(LinearFit { weights: w, bias })
}
