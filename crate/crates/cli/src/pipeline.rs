//! Sweep pipelines behind each subcommand.

use crate::config::{mode_name, Command, Params, Scenario};
use crate::output::{Cell, Report, Table};
use crate::CliError;
use hetnet_core::association::{Network, NetworkConfig, SbsMode, Tier, ORDERINGS};
use hetnet_core::content::Popularity;
use hetnet_core::dpsq::{dps_sojourn_approx, qos_report, stability_check, tier_instance, Discipline};
use hetnet_core::montecarlo::{
    association_checks, contact_checks, dps_des, empirical_rate_table, nearest_distances, rate_checks, Check,
    DesOptions, McRunSpec, Verdict,
};
use hetnet_core::rates::{rate_table, ActiveIntensities, RateTable};
use hetnet_core::traffic::{
    active_intensities, arrival_rates, build_state_matrix, loads, rate_matrix, Loads, Matrix, TrafficConfig, COLS,
    COLUMN_NAMES, ROWS,
};

type Result<T> = std::result::Result<T, CliError>;

/// Rate cells in table order.
pub const RATE_CELLS: [(u8, Tier); 7] =
    [(1, Tier::D2d), (1, Tier::Sbs), (1, Tier::Mbs), (2, Tier::Sbs), (2, Tier::Mbs), (3, Tier::Sbs), (3, Tier::Mbs)];

/// Options given on the command line that override the scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub modes: Option<Vec<SbsMode>>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
}

/// Everything computed for one (sweep point, mode) pair.
pub struct Evaluation {
    pub network: NetworkConfig,
    pub traffic: TrafficConfig,
    pub net: Network,
    pub active: ActiveIntensities,
    pub states: Matrix,
    pub volume_bits: f64,
}

pub fn evaluate(params: &Params, mode: SbsMode) -> Result<Evaluation> {
    let (network, traffic) = params.for_mode(mode);
    let net = Network::new(&network)?;
    let pop = Popularity::new(&params.content)?;
    let active = active_intensities(&network, net.probs(), &pop, &params.content)?;
    let states = build_state_matrix(network.alpha, net.probs(), &pop, &params.content)?;
    let volume_bits = params.content.file_size_bits / traffic.content_rate;
    Ok(Evaluation { network, traffic, net, active, states, volume_bits })
}

/// Service side of an evaluation: ergodic rates, arrivals and queue loads.
pub struct Service {
    pub rates: RateTable,
    pub zeta: Matrix,
    pub a: Matrix,
    pub loads: Loads,
}

pub fn service(params: &Params, ev: &Evaluation) -> Result<Service> {
    let rates = rate_table(&ev.net, &ev.active, &params.rates)?;
    let zeta = arrival_rates(&ev.states, &ev.traffic, &ev.network, &ev.active)?;
    let a = rate_matrix(&ev.states, &rates, &ev.traffic)?;
    let loads = loads(&zeta, &a, &ev.traffic, &params.content)?;
    Ok(Service { rates, zeta, a, loads })
}

/// Probability that the typical user is in case 1, 2 or 3, or served locally.
pub fn case_probabilities(d: &Matrix) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, row) in d.iter().enumerate() {
        out[i / 2] += row.iter().sum::<f64>();
    }
    out
}

/// Sum over users of state probability times the radio rate of that state.
pub fn total_rate(d: &Matrix, rates: &RateTable) -> f64 {
    let mut total = 0.0;
    for (i, row) in d.iter().enumerate().take(6) {
        for (j, &p) in row.iter().enumerate().take(3) {
            if p > 0.0 {
                total += p * rates.get((i / 2) as u8 + 1, Tier::ALL[j]).unwrap_or(0.0);
            }
        }
    }
    total
}

struct Context<'a> {
    scenario: &'a Scenario,
    modes: Vec<SbsMode>,
    seed: u64,
    samples: Option<u64>,
}

impl<'a> Context<'a> {
    fn new(scenario: &'a Scenario, ov: &Overrides) -> Self {
        Self {
            scenario,
            modes: ov.modes.clone().unwrap_or_else(|| scenario.modes.clone()),
            seed: ov.seed.unwrap_or(scenario.seed),
            samples: ov.samples,
        }
    }

    fn x_column(&self) -> String {
        self.scenario.sweep.as_ref().map_or_else(|| "point".to_string(), |s| s.parameter.clone())
    }

    fn lead(&self, mode: SbsMode, x: Option<f64>) -> Vec<Cell> {
        vec![Cell::from(mode_name(mode)), x.map_or(Cell::Empty, Cell::Num)]
    }

    /// Sweep points in order, each with every requested mode.
    fn each(&self, mut f: impl FnMut(SbsMode, Option<f64>, &Params) -> Result<()>) -> Result<()> {
        for x in self.scenario.points() {
            let params = self.scenario.params_at(x)?;
            for &mode in &self.modes {
                f(mode, x, &params)?;
            }
        }
        Ok(())
    }

    fn report(&self, command: Command, table: Table) -> Report {
        let s = self.scenario;
        let mut config = vec![
            ("scenario.modes".to_string(), self.modes.iter().map(|&m| mode_name(m)).collect::<Vec<_>>().join(",")),
            ("scenario.seed".to_string(), self.seed.to_string()),
        ];
        if let Some(sw) = &s.sweep {
            config.push(("sweep.parameter".into(), sw.parameter.clone()));
            config.push(("sweep.values".into(), format!("{:?}", sw.values)));
        }
        config.extend(s.base.resolved());
        if command == Command::Validate {
            let v = self.validate_settings();
            config.push(("validate.realizations".into(), v.0.to_string()));
            config.push(("validate.rate_realizations".into(), v.1.to_string()));
            config.push(("validate.des_completions".into(), s.validate.des_completions.to_string()));
        }
        Report { command: command.name().to_string(), scenario: s.name.clone(), config, table }
    }

    fn validate_settings(&self) -> (u64, u64) {
        let v = &self.scenario.validate;
        match self.samples {
            Some(n) => (n, n),
            None => (v.realizations, v.rate_realizations),
        }
    }
}

pub fn run_assoc(scenario: &Scenario, ov: &Overrides) -> Result<Report> {
    let cx = Context::new(scenario, ov);
    let mut cols = vec!["mode".to_string(), cx.x_column()];
    cols.extend(Tier::ALL.iter().map(|t| format!("g.{}", t.name())));
    cols.extend(ORDERINGS.iter().map(|o| format!("p.{}{}{}", o[0].number(), o[1].number(), o[2].number())));
    cols.extend(["pair.23", "pair.32", "case1", "case2", "case3", "local", "d2d_share"].map(String::from));
    let mut table = Table::new(cols);
    cx.each(|mode, x, params| {
        let ev = evaluate(params, mode)?;
        let p = ev.net.probs();
        let mut row = cx.lead(mode, x);
        row.extend(p.tier.iter().map(|&v| Cell::Num(v)));
        row.extend(p.ordered.iter().map(|&v| Cell::Num(v)));
        row.push(p.pairwise[1][2].into());
        row.push(p.pairwise[2][1].into());
        row.extend(case_probabilities(&ev.states).map(Cell::Num));
        row.push(ev.states.iter().map(|r| r[0]).sum::<f64>().into());
        table.push(row);
        Ok(())
    })?;
    Ok(cx.report(Command::Assoc, table))
}

pub fn run_rates(scenario: &Scenario, ov: &Overrides) -> Result<Report> {
    let cx = Context::new(scenario, ov);
    let mut cols = vec!["mode".to_string(), cx.x_column()];
    cols.extend(RATE_CELLS.iter().map(|(c, t)| format!("u{c}.{}", t.name())));
    cols.push("total".into());
    let mut table = Table::new(cols);
    cx.each(|mode, x, params| {
        let ev = evaluate(params, mode)?;
        let rates = rate_table(&ev.net, &ev.active, &params.rates)?;
        let mut row = cx.lead(mode, x);
        row.extend(RATE_CELLS.iter().map(|&(c, t)| Cell::from(rates.get(c, t))));
        row.push(total_rate(&ev.states, &rates).into());
        table.push(row);
        Ok(())
    })?;
    Ok(cx.report(Command::Rates, table))
}

pub fn run_traffic(scenario: &Scenario, ov: &Overrides) -> Result<Report> {
    let cx = Context::new(scenario, ov);
    let mut cols = vec!["mode".to_string(), cx.x_column(), "quantity".to_string()];
    for i in 0..ROWS {
        cols.extend(COLUMN_NAMES.iter().map(|c| format!("r{}.{c}", i + 1)));
    }
    let mut table = Table::new(cols);
    cx.each(|mode, x, params| {
        let ev = evaluate(params, mode)?;
        let sv = service(params, &ev)?;
        for (name, m) in [
            ("D", &ev.states),
            ("zeta", &sv.zeta),
            ("A", &sv.a),
            ("mu", &sv.loads.mu),
            ("rho", &sv.loads.rho),
            ("rho_prime", &sv.loads.rho_prime),
        ] {
            let mut row = cx.lead(mode, x);
            row.push(name.into());
            row.extend(m.iter().flat_map(|r| r.iter().map(|&v| Cell::Num(v))));
            table.push(row);
        }
        let mut row = cx.lead(mode, x);
        row.push("rho_c".into());
        row.extend((0..ROWS * COLS).map(|k| if k < COLS { Cell::Num(sv.loads.rho_c[k]) } else { Cell::Empty }));
        table.push(row);
        Ok(())
    })?;
    Ok(cx.report(Command::Traffic, table))
}

pub fn run_qos(scenario: &Scenario, ov: &Overrides) -> Result<Report> {
    let cx = Context::new(scenario, ov);
    let cols = [
        "mode",
        "",
        "discipline",
        "tier",
        "class",
        "row",
        "bh_flag",
        "lambda",
        "mu",
        "weight",
        "rho_prime",
        "N",
        "D",
        "T",
        "stable",
    ];
    let mut cols: Vec<String> = cols.iter().map(|s| s.to_string()).collect();
    cols[1] = cx.x_column();
    let mut table = Table::new(cols);
    cx.each(|mode, x, params| {
        let ev = evaluate(params, mode)?;
        let sv = service(params, &ev)?;
        for &disc in &scenario.disciplines {
            let rep = qos_report(&sv.zeta, &sv.loads, &ev.traffic, ev.volume_bits, disc)?;
            for r in rep.rows.iter().filter(|r| scenario.qos_tiers.contains(&r.tier)) {
                let mut row = cx.lead(mode, x);
                row.push(
                    match disc {
                        Discipline::Dps => "dps",
                        Discipline::Eps => "eps",
                    }
                    .into(),
                );
                row.push(r.tier.name().into());
                row.push(r.class().into());
                row.push(r.row.into());
                row.push(Cell::Int(i64::from(r.backhaul())));
                row.extend([r.lambda, r.mu, r.weight, r.rho_prime].map(Cell::Num));
                let m = r.metrics;
                row.extend([m.map(|m| m.n), m.map(|m| m.d), m.map(|m| m.t)].map(Cell::from));
                row.push(r.stable.into());
                table.push(row);
            }
        }
        Ok(())
    })?;
    Ok(cx.report(Command::Qos, table))
}

fn des_checks(ev: &Evaluation, sv: &Service, scenario: &Scenario, seed: u64) -> Result<Vec<Check>> {
    let tol = scenario.validate.des_tolerance;
    let mut out = Vec::new();
    for tier in Tier::ALL {
        let (inst, rows) = tier_instance(tier, &sv.zeta, &sv.loads, &ev.traffic, ev.volume_bits, Discipline::Dps);
        if inst.classes.is_empty() {
            continue;
        }
        if !stability_check(&inst).stable {
            out.push(Check {
                name: format!("dps.tier{}.stable", tier.number()),
                analytic: stability_check(&inst).total_load,
                empirical: f64::NAN,
                se: f64::NAN,
                deviation: f64::NAN,
                tolerance: 1.0,
                verdict: Verdict::Inconclusive,
            });
            continue;
        }
        let des = dps_des(
            &inst,
            &DesOptions::new(scenario.validate.des_completions, seed.wrapping_add(tier.number() as u64)),
        )?;
        for (k, row) in rows.iter().enumerate() {
            let Some(s) = des.classes[k].sojourn else { continue };
            let approx = dps_sojourn_approx(&inst, k)?;
            let rel = (approx - s.mean).abs() / s.mean;
            let verdict = if 3.0 * s.se / s.mean > tol {
                Verdict::Inconclusive
            } else if rel <= tol {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            out.push(Check {
                name: format!("dps.tier{}.row{}", tier.number(), row),
                analytic: approx,
                empirical: s.mean,
                se: s.se,
                deviation: rel,
                tolerance: tol,
                verdict,
            });
        }
        let mut predicted = 0.0;
        let mut var = 0.0;
        for (c, class) in inst.classes.iter().zip(&des.classes) {
            if let Some(s) = class.sojourn {
                predicted += c.lambda * s.mean;
                var += (c.lambda * s.se).powi(2) + class.number.se.powi(2);
            }
        }
        let observed: f64 = des.classes.iter().map(|c| c.number.mean).sum();
        out.push(Check {
            name: format!("des.tier{}.little", tier.number()),
            analytic: predicted,
            empirical: observed,
            se: var.sqrt(),
            deviation: (observed - predicted).abs() / var.sqrt(),
            tolerance: 3.0,
            verdict: if des.little_ok() { Verdict::Pass } else { Verdict::Fail },
        });
    }
    Ok(out)
}

/// Analytic-versus-simulation checks at the base point. The second value is
/// true when any check failed.
pub fn run_validate(scenario: &Scenario, ov: &Overrides) -> Result<(Report, bool)> {
    let cx = Context::new(scenario, ov);
    let (realizations, rate_realizations) = cx.validate_settings();
    let mut table = Table::new(["mode", "check", "analytic", "empirical", "se", "deviation", "tolerance", "verdict"]);
    let mut failed = false;
    let v = &scenario.validate;
    for &mode in &cx.modes {
        let ev = evaluate(&scenario.base, mode)?;
        let spec = McRunSpec::new(realizations, cx.seed);
        let distances = nearest_distances(&ev.network, &spec)?;
        let est = hetnet_core::montecarlo::association_from_distances(&ev.network, &distances);
        let mut checks = association_checks(ev.net.probs(), &est);
        checks.extend(contact_checks(&ev.net, &distances));
        let sv = service(&scenario.base, &ev)?;
        let emp = empirical_rate_table(&ev.net, &ev.active, &McRunSpec::new(rate_realizations, cx.seed))?;
        checks.extend(rate_checks(&sv.rates, &emp, |case| match case {
            1 => v.case1_tolerance,
            2 => v.case2_tolerance,
            _ => v.case3_tolerance,
        }));
        checks.extend(des_checks(&ev, &sv, scenario, cx.seed)?);
        for c in checks {
            failed |= c.verdict == Verdict::Fail;
            table.push(vec![
                mode_name(mode).into(),
                c.name.into(),
                c.analytic.into(),
                c.empirical.into(),
                c.se.into(),
                c.deviation.into(),
                c.tolerance.into(),
                match c.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "fail",
                    Verdict::Inconclusive => "inconclusive",
                }
                .into(),
            ]);
        }
    }
    Ok((cx.report(Command::Validate, table), failed))
}

/// Runs `command`; the flag is true when validation checks failed.
pub fn run(command: Command, scenario: &Scenario, ov: &Overrides) -> Result<(Report, bool)> {
    Ok(match command {
        Command::Assoc => (run_assoc(scenario, ov)?, false),
        Command::Rates => (run_rates(scenario, ov)?, false),
        Command::Traffic => (run_traffic(scenario, ov)?, false),
        Command::Qos => (run_qos(scenario, ov)?, false),
        Command::Validate => run_validate(scenario, ov)?,
    })
}
