//! Discriminatory processor sharing: approximate sojourn times and QoS metrics.

use crate::association::Tier;
use crate::error::{domain, Error, Result};
use crate::traffic::{Loads, Matrix, TrafficConfig, ROWS};
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpsClass {
    /// Arrival rate, requests/s.
    pub lambda: f64,
    /// Completion rate when served alone, requests/s.
    pub mu: f64,
    pub weight: f64,
}

impl DpsClass {
    pub fn load(&self) -> f64 {
        self.lambda / self.mu
    }
}

/// One server shared by several classes of exponential jobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpsInstance {
    pub classes: Vec<DpsClass>,
    /// Mean job volume in bits, used only to express the critical value in bits/s.
    pub volume_bits: f64,
}

impl DpsInstance {
    pub fn new(classes: Vec<DpsClass>) -> Self {
        Self { classes, volume_bits: 1.0 }
    }

    /// Same classes with every weight set to one.
    pub fn egalitarian(&self) -> Self {
        Self {
            classes: self.classes.iter().map(|c| DpsClass { weight: 1.0, ..*c }).collect(),
            volume_bits: self.volume_bits,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stability {
    pub stable: bool,
    /// Sum of `lambda / mu` over classes.
    pub total_load: f64,
    /// Offered traffic in bits/s.
    pub demand: f64,
    /// Critical traffic value in bits/s; the queue is stable iff `demand < critical`.
    pub critical: f64,
}

/// Stability of the queue: positive weights and finite rates, and total load
/// below one (equivalently, demand below the critical traffic value).
pub fn stability_check(inst: &DpsInstance) -> Stability {
    let active: Vec<&DpsClass> = inst.classes.iter().filter(|c| c.lambda > 0.0).collect();
    let total_load: f64 = active.iter().map(|c| c.load()).sum();
    let arrivals: f64 = active.iter().map(|c| c.lambda).sum();
    let demand = inst.volume_bits * arrivals;
    let critical = if total_load > 0.0 { demand / total_load } else { f64::INFINITY };
    let well_formed = active.iter().all(|c| c.weight > 0.0 && c.weight.is_finite() && c.mu > 0.0 && c.mu.is_finite());
    Stability { stable: well_formed && total_load < 1.0, total_load, demand, critical }
}

/// Form of the light-traffic cross term `rho_k (w_k - w_i) / (w_k mu_k -+ w_i mu_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossTerm {
    /// Denominator `w_k mu_k + w_i mu_i`, the first-order light-traffic
    /// coefficient of exponential DPS.
    #[default]
    Sum,
    /// Denominator `w_k mu_k - w_i mu_i`. Has a pole at `w_k mu_k = w_i mu_i`,
    /// evaluated there by a symmetric perturbation of `w_k`.
    Difference,
}

/// Approximate mean sojourn time of class `i` (light/heavy-traffic interpolation).
pub fn dps_sojourn_approx(inst: &DpsInstance, i: usize) -> Result<f64> {
    dps_sojourn_with(inst, i, CrossTerm::default())
}

pub fn dps_sojourn_with(inst: &DpsInstance, i: usize, form: CrossTerm) -> Result<f64> {
    let ci = *inst.classes.get(i).ok_or_else(|| domain(format!("class {i} out of range")))?;
    if !(ci.mu > 0.0) || !ci.mu.is_finite() || !(ci.weight > 0.0) {
        return Err(domain(format!("class {i} needs positive finite rate and weight")));
    }
    let st = stability_check(inst);
    if !st.stable {
        return Err(Error::Unstable(format!(
            "total load {:.6} (demand {:.6e} vs critical {:.6e})",
            st.total_load, st.demand, st.critical
        )));
    }
    let active: Vec<DpsClass> = inst.classes.iter().copied().filter(|c| c.lambda > 0.0).collect();
    let rho = st.total_load;
    let (wi, mi) = (ci.weight, ci.mu);
    let cross: f64 = active
        .iter()
        .map(|k| {
            k.load()
                * match form {
                    CrossTerm::Sum => (k.weight - wi) / (k.weight * k.mu + wi * mi),
                    CrossTerm::Difference => difference_term(k.weight, k.mu, wi, mi),
                }
        })
        .sum();
    let heavy = if active.is_empty() {
        0.0
    } else {
        let num: f64 = active.iter().map(|k| k.lambda / (k.mu * k.mu)).sum();
        let den: f64 = active.iter().map(|k| k.lambda / (k.mu * k.mu * k.weight)).sum();
        rho * rho / (1.0 - rho) / (wi * mi) * num / den
    };
    Ok(1.0 / mi + rho / mi + cross + heavy)
}

fn difference_term(wk: f64, mk: f64, wi: f64, mi: f64) -> f64 {
    if wk == wi {
        return 0.0;
    }
    let den = wk * mk - wi * mi;
    if den.abs() > 1e-12 * (wk * mk).abs().max((wi * mi).abs()) {
        return (wk - wi) / den;
    }
    let eps = 1e-6;
    let f = |w: f64| (w - wi) / (w * mk - wi * mi);
    0.5 * (f(wk * (1.0 + eps)) + f(wk * (1.0 - eps)))
}

/// Mean number in system, delay and normalized throughput of one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QosMetrics {
    pub n: f64,
    pub d: f64,
    pub t: f64,
}

pub fn qos_metrics(inst: &DpsInstance, i: usize) -> Result<QosMetrics> {
    let s = dps_sojourn_approx(inst, i)?;
    let c = inst.classes[i];
    let n = c.lambda * s;
    let t = if n > 0.0 { c.load() / n } else { 1.0 / (c.mu * s) };
    Ok(QosMetrics { n, d: s, t })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discipline {
    Dps,
    Eps,
}

/// One (state, tier) row of a QoS report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QosRow {
    pub tier: Tier,
    /// Row of the state matrix, 1-8.
    pub row: usize,
    pub lambda: f64,
    pub mu: f64,
    pub weight: f64,
    pub rho_prime: f64,
    pub stable: bool,
    pub metrics: Option<QosMetrics>,
}

impl QosRow {
    /// User class, 1-4.
    pub fn class(&self) -> usize {
        self.row.div_ceil(2)
    }

    /// Whether the state needs the backhaul.
    pub fn backhaul(&self) -> bool {
        self.row.is_multiple_of(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QosReport {
    pub discipline: Discipline,
    pub rows: Vec<QosRow>,
}

impl QosReport {
    pub fn get(&self, tier: Tier, row: usize) -> Option<&QosRow> {
        self.rows.iter().find(|r| r.tier == tier && r.row == row)
    }
}

/// The queue of one serving tier, built from its active states.
/// Returns the instance and the state-matrix row of each class.
pub fn tier_instance(
    tier: Tier,
    zeta: &Matrix,
    loads: &Loads,
    traffic: &TrafficConfig,
    volume_bits: f64,
    discipline: Discipline,
) -> (DpsInstance, Vec<usize>) {
    let j = tier.idx();
    let mut classes = Vec::new();
    let mut rows = Vec::new();
    for i in 0..ROWS {
        if zeta[i][j] > 0.0 {
            let weight = match discipline {
                Discipline::Dps => traffic.weights[i][j],
                Discipline::Eps => 1.0,
            };
            classes.push(DpsClass { lambda: zeta[i][j], mu: loads.mu[i][j], weight });
            rows.push(i + 1);
        }
    }
    (DpsInstance { classes, volume_bits }, rows)
}

/// QoS of every active state on the D2D, SBS and MBS queues.
pub fn qos_report(
    zeta: &Matrix,
    loads: &Loads,
    traffic: &TrafficConfig,
    volume_bits: f64,
    discipline: Discipline,
) -> Result<QosReport> {
    let mut out = Vec::new();
    for tier in Tier::ALL {
        let (inst, rows) = tier_instance(tier, zeta, loads, traffic, volume_bits, discipline);
        let stable = stability_check(&inst).stable;
        for (k, row) in rows.into_iter().enumerate() {
            let c = inst.classes[k];
            let metrics = if stable { Some(qos_metrics(&inst, k)?) } else { None };
            out.push(QosRow {
                tier,
                row,
                lambda: c.lambda,
                mu: c.mu,
                weight: c.weight,
                rho_prime: c.load(),
                stable,
                metrics,
            });
        }
    }
    Ok(QosReport { discipline, rows: out })
}

/// Same pipeline with all weights equal.
pub fn eps_baseline(zeta: &Matrix, loads: &Loads, traffic: &TrafficConfig, volume_bits: f64) -> Result<QosReport> {
    qos_report(zeta, loads, traffic, volume_bits, Discipline::Eps)
}

/// Columns: tier, class, bh_flag, lambda, mu, weight, rho_prime, N, D, T, stable.
pub fn write_qos_csv<W: Write>(mut out: W, report: &QosReport) -> io::Result<()> {
    writeln!(out, "tier,class,bh_flag,lambda,mu,weight,rho_prime,N,D,T,stable")?;
    for r in &report.rows {
        let (n, d, t) = match r.metrics {
            Some(m) => (format!("{:e}", m.n), format!("{:e}", m.d), format!("{:e}", m.t)),
            None => (String::new(), String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{:e},{:e},{},{:e},{},{},{},{}",
            r.tier.number(),
            r.class(),
            u8::from(r.backhaul()),
            r.lambda,
            r.mu,
            r.weight,
            r.rho_prime,
            n,
            d,
            t,
            r.stable
        )?;
    }
    Ok(())
}
