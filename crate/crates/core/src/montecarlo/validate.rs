use super::spatial::{AssocEstimate, EmpiricalRates, MIN_RATE_HITS};
use super::stats::{ks_pvalue, ks_statistic, Estimate};
use crate::association::{AssocProbs, Network, Tier, ORDERINGS};
use crate::rates::RateTable;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Too little data for the check to discriminate.
    Inconclusive,
}

/// One analytic-versus-simulated comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub analytic: f64,
    pub empirical: f64,
    /// Standard error of the empirical value (KS checks: the critical value at 1%).
    pub se: f64,
    /// Achieved deviation in the unit the tolerance uses.
    pub deviation: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

fn binomial_check(name: String, analytic: f64, e: &Estimate) -> Check {
    let z = (e.mean - analytic).abs() / e.se;
    let n = e.n as f64;
    let weak = 3.0 * e.se > 0.05 || n * analytic.min(1.0 - analytic) < 10.0;
    let verdict = if e.mean == analytic {
        Verdict::Pass
    } else if weak {
        Verdict::Inconclusive
    } else if z <= 3.0 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Check { name, analytic, empirical: e.mean, se: e.se, deviation: z, tolerance: 3.0, verdict }
}

/// Every association probability against its frequency, at three standard errors.
pub fn association_checks(probs: &AssocProbs, est: &AssocEstimate) -> Vec<Check> {
    let mut out = Vec::new();
    for t in Tier::ALL {
        out.push(binomial_check(format!("assoc.tier{}", t.number()), probs.tier[t.idx()], &est.tier[t.idx()]));
    }
    for (k, o) in ORDERINGS.iter().enumerate() {
        let name = format!("assoc.order{}{}{}", o[0].number(), o[1].number(), o[2].number());
        out.push(binomial_check(name, probs.ordered[k], &est.ordered[k]));
    }
    for a in Tier::ALL {
        for b in Tier::ALL {
            if a != b {
                let name = format!("assoc.pair{}{}", a.number(), b.number());
                out.push(binomial_check(name, probs.pairwise[a.idx()][b.idx()], &est.pairwise[a.idx()][b.idx()]));
            }
        }
    }
    out
}

/// KS test at 1% of each tier's nearest distance against its contact law.
pub fn contact_checks(net: &Network, distances: &[[f64; 3]]) -> Vec<Check> {
    Tier::ALL
        .iter()
        .filter(|&&t| !net.law(t).is_empty())
        .map(|&t| {
            let law = net.law(t);
            let xs: Vec<f64> = distances.iter().map(|d| d[t.idx()]).collect();
            let n = xs.len();
            let d = ks_statistic(&xs, |r| if r.is_finite() { 1.0 - law.ccdf(r) } else { 1.0 });
            let p = ks_pvalue(d, n);
            let critical = 1.628 / (n as f64).sqrt();
            let verdict = if n < 100 {
                Verdict::Inconclusive
            } else if p >= 0.01 {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            Check {
                name: format!("contact.tier{}.ks", t.number()),
                analytic: 0.0,
                empirical: d,
                se: critical,
                deviation: p,
                tolerance: 0.01,
                verdict,
            }
        })
        .collect()
}

/// Relative agreement of ergodic rates; `tolerance(case)` is the allowed
/// relative deviation. Cells with too few hits, or whose miss is within three
/// standard errors, are inconclusive.
pub fn rate_checks(analytic: &RateTable, empirical: &EmpiricalRates, tolerance: impl Fn(u8) -> f64) -> Vec<Check> {
    analytic
        .cells
        .iter()
        .filter_map(|cell| {
            let e = empirical.get(cell.case, cell.tier)?;
            let tol = tolerance(cell.case);
            let rel = (e.mean - cell.nats).abs() / cell.nats.abs();
            let verdict = if e.n < MIN_RATE_HITS {
                Verdict::Inconclusive
            } else if rel <= tol {
                Verdict::Pass
            } else if (e.mean - cell.nats).abs() <= 3.0 * e.se {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            };
            Some(Check {
                name: format!("rate.case{}.tier{}", cell.case, cell.tier.number()),
                analytic: cell.nats,
                empirical: e.mean,
                se: e.se,
                deviation: rel,
                tolerance: tol,
                verdict,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::EmpiricalRateCell;
    use crate::rates::RateCell;

    fn verdicts(analytic: f64, mean: f64, se: f64, n: u64) -> Verdict {
        let table = RateTable { cells: vec![RateCell { case: 1, tier: Tier::Mbs, nats: analytic }] };
        let emp = EmpiricalRates {
            cells: vec![EmpiricalRateCell { case: 1, tier: Tier::Mbs, nats: Estimate { mean, se, n } }],
            realizations: n,
            window: 1.0,
        };
        rate_checks(&table, &emp, |_| 0.05)[0].verdict
    }

    #[test]
    fn rate_verdicts() {
        assert_eq!(verdicts(1.0, 1.03, 0.01, 1000), Verdict::Pass);
        assert_eq!(verdicts(1.0, 1.10, 0.01, 1000), Verdict::Fail);
        assert_eq!(verdicts(1.0, 1.10, 0.05, 1000), Verdict::Inconclusive);
        assert_eq!(verdicts(1.0, 1.30, 0.01, 100), Verdict::Inconclusive);
    }

    #[test]
    fn binomial_verdicts() {
        let n = 100_000;
        assert_eq!(binomial_check("a".into(), 0.3, &Estimate::proportion(30_100, n)).verdict, Verdict::Pass);
        assert_eq!(binomial_check("a".into(), 0.3, &Estimate::proportion(31_000, n)).verdict, Verdict::Fail);
        assert_eq!(binomial_check("a".into(), 0.3, &Estimate::proportion(40, 100)).verdict, Verdict::Inconclusive);
        assert_eq!(binomial_check("a".into(), 1e-6, &Estimate::proportion(1, n)).verdict, Verdict::Inconclusive);
    }
}
