use super::stats::{batch_ratio, Estimate};
use super::stream_rng;
use crate::dpsq::{stability_check, DpsInstance};
use crate::error::{domain, Error, Result};
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesOptions {
    pub completions: u64,
    pub seed: u64,
    /// Fraction of completions discarded before measuring.
    pub warmup_fraction: f64,
    pub batches: usize,
}

impl DesOptions {
    pub fn new(completions: u64, seed: u64) -> Self {
        Self { completions, seed, warmup_fraction: 0.1, batches: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesClass {
    /// Mean sojourn time; absent for classes without arrivals.
    pub sojourn: Option<Estimate>,
    /// Time-average number in system.
    pub number: Estimate,
    pub completions: u64,
    /// `|N - lambda S|` within three standard errors.
    pub little_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesResult {
    pub classes: Vec<DesClass>,
    /// Running mean of some class moved more than 5% over the final batches.
    pub drift_warning: bool,
}

impl DesResult {
    pub fn little_ok(&self) -> bool {
        self.classes.iter().all(|c| c.little_ok)
    }
}

/// Simulates the weighted processor-sharing queue: each class-`i` customer
/// is served at rate `mu_i w_i / sum_k w_k x_k`, so class `i` completes at
/// rate `mu_i w_i x_i / sum_k w_k x_k`.
pub fn dps_des(inst: &DpsInstance, opts: &DesOptions) -> Result<DesResult> {
    if opts.completions < 10_000 {
        return Err(domain(format!("need at least 10^4 completions, got {}", opts.completions)));
    }
    if opts.batches < 2 || !(0.0..1.0).contains(&opts.warmup_fraction) {
        return Err(domain("need two or more batches and a warm-up fraction in [0, 1)"));
    }
    let st = stability_check(inst);
    if !st.stable {
        return Err(Error::Unstable(format!("total load {:.6}", st.total_load)));
    }
    let c = inst.classes.len();
    let lambda: Vec<f64> = inst.classes.iter().map(|k| k.lambda.max(0.0)).collect();
    let rate: Vec<f64> = inst.classes.iter().map(|k| k.mu * k.weight).collect();
    let weight: Vec<f64> = inst.classes.iter().map(|k| k.weight).collect();
    let arrivals: f64 = lambda.iter().sum();

    let warmup = (opts.completions as f64 * opts.warmup_fraction) as u64;
    let per_batch = (opts.completions - warmup) / opts.batches as u64;
    let b_count = opts.batches;
    let mut soj_sum = vec![vec![0.0; b_count]; c];
    let mut soj_cnt = vec![vec![0.0; b_count]; c];
    let mut area = vec![vec![0.0; b_count]; c];
    let mut span = vec![0.0; b_count];

    let mut rng = stream_rng(opts.seed, 0);
    let mut queues: Vec<Vec<f64>> = vec![Vec::new(); c];
    let mut t = 0.0;
    let mut done: u64 = 0;
    let total = warmup + per_batch * b_count as u64;
    while done < total {
        let wsum: f64 = (0..c).map(|i| weight[i] * queues[i].len() as f64).sum();
        let dep: f64 =
            if wsum > 0.0 { (0..c).map(|i| rate[i] * queues[i].len() as f64).sum::<f64>() / wsum } else { 0.0 };
        let r = arrivals + dep;
        let dt = rng.sample::<f64, _>(Exp1) / r;
        if done >= warmup {
            let b = ((done - warmup) / per_batch) as usize;
            span[b] += dt;
            for i in 0..c {
                area[i][b] += queues[i].len() as f64 * dt;
            }
        }
        t += dt;
        let mut u = rng.gen::<f64>() * r;
        let mut event = None;
        for i in 0..c {
            if u < lambda[i] {
                event = Some((i, true));
                break;
            }
            u -= lambda[i];
        }
        if event.is_none() {
            u *= wsum;
            for i in 0..c {
                let d = rate[i] * queues[i].len() as f64;
                if u < d {
                    event = Some((i, false));
                    break;
                }
                u -= d;
            }
        }
        // Rounding can leave u just past the last bucket.
        let (i, arrival) = event.unwrap_or_else(|| {
            let last = (0..c).rev().find(|&i| !queues[i].is_empty()).expect("departure needs a customer");
            (last, false)
        });
        if arrival {
            queues[i].push(t);
        } else {
            let k = rng.gen_range(0..queues[i].len());
            let arrived = queues[i].swap_remove(k);
            if done >= warmup {
                let b = ((done - warmup) / per_batch) as usize;
                soj_sum[i][b] += t - arrived;
                soj_cnt[i][b] += 1.0;
            }
            done += 1;
        }
    }

    let mut drift_warning = false;
    let tail = (b_count / 4).max(1);
    let classes = (0..c)
        .map(|i| {
            let number = batch_ratio(&area[i], &span);
            let n_done: f64 = soj_cnt[i].iter().sum();
            let sojourn = (lambda[i] > 0.0 && n_done > 0.0).then(|| {
                let mut e = batch_ratio(&soj_sum[i], &soj_cnt[i]);
                e.n = n_done as u64;
                e
            });
            let little_ok = match sojourn {
                Some(s) => {
                    let se = (number.se.powi(2) + (lambda[i] * s.se).powi(2)).sqrt();
                    (number.mean - lambda[i] * s.mean).abs() <= 3.0 * se
                }
                None => number.mean == 0.0,
            };
            if let Some(s) = sojourn {
                let late = batch_ratio(&soj_sum[i][b_count - tail..], &soj_cnt[i][b_count - tail..]);
                if (late.mean - s.mean).abs() > 0.05 * s.mean {
                    drift_warning = true;
                }
            }
            DesClass { sojourn, number, completions: n_done as u64, little_ok }
        })
        .collect();
    Ok(DesResult { classes, drift_warning })
}
