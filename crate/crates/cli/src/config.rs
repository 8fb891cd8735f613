//! Scenario files: TOML with unit-suffixed keys, converted to SI on load.
//!
//! ```toml
//! [scenario]
//! name = "example"
//! command = "assoc"
//! mode = "both"
//!
//! [network]
//! disk_radius_m = 1000
//! lambda0_per_disk = 1000
//! sigma_m = 250
//! ```

use hetnet_core::association::{NetworkConfig, SbsMode, Tier};
use hetnet_core::content::ContentConfig;
use hetnet_core::dpsq::Discipline;
use hetnet_core::rates::{ClusterKernel, RateOptions};
use hetnet_core::traffic::{BackhaulPolicy, Matrix, TrafficConfig, COLUMN_NAMES, ROWS};
use std::cell::RefCell;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use toml::{Table, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

fn err(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { path: path.into(), message: message.into() }
}

type Result<T> = std::result::Result<T, ConfigError>;

const DENSITY: &[(&str, f64)] = &[("per_m2", 1.0), ("per_km2", 1e-6)];
const LENGTH: &[(&str, f64)] = &[("m", 1.0), ("km", 1e3)];
const POWER: &[(&str, f64)] = &[("w", 1.0), ("mw", 1e-3)];
const FREQUENCY: &[(&str, f64)] = &[("hz", 1.0), ("khz", 1e3), ("mhz", 1e6)];
const BITS: &[(&str, f64)] = &[("bits", 1.0), ("kbit", 1e3), ("mbit", 1e6)];
const PER_SECOND: &[(&str, f64)] = &[("per_s", 1.0)];

/// One TOML table, tracking which keys were read so leftovers can be reported.
struct Section<'a> {
    path: String,
    table: Option<&'a Table>,
    used: RefCell<BTreeSet<String>>,
}

impl<'a> Section<'a> {
    fn new(root: &'a Table, path: &str) -> Result<Self> {
        let table = match root.get(path) {
            None => None,
            Some(Value::Table(t)) => Some(t),
            Some(_) => return Err(err(path, "expected a table")),
        };
        Ok(Self { path: path.to_string(), table, used: RefCell::new(BTreeSet::new()) })
    }

    fn key(&self, k: &str) -> String {
        format!("{}.{}", self.path, k)
    }

    fn raw(&self, k: &str) -> Option<&'a Value> {
        let v = self.table?.get(k);
        if v.is_some() {
            self.used.borrow_mut().insert(k.to_string());
        }
        v
    }

    fn number(&self, k: &str) -> Result<Option<f64>> {
        match self.raw(k) {
            None => Ok(None),
            Some(Value::Float(f)) => Ok(Some(*f)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(_) => Err(err(self.key(k), "expected a number")),
        }
    }

    fn require(&self, k: &str) -> Result<f64> {
        self.number(k)?.ok_or_else(|| err(self.key(k), "missing"))
    }

    fn count(&self, k: &str) -> Result<Option<usize>> {
        match self.raw(k) {
            None => Ok(None),
            Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as usize)),
            Some(Value::Float(f)) if *f >= 0.0 && f.fract() == 0.0 => Ok(Some(*f as usize)),
            Some(_) => Err(err(self.key(k), "expected a non-negative integer")),
        }
    }

    fn string(&self, k: &str) -> Result<Option<&'a str>> {
        match self.raw(k) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(err(self.key(k), "expected a string")),
        }
    }

    fn numbers(&self, k: &str) -> Result<Option<Vec<f64>>> {
        match self.raw(k) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v {
                    Value::Float(f) => Ok(*f),
                    Value::Integer(i) => Ok(*i as f64),
                    _ => Err(err(self.key(k), "expected an array of numbers")),
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(err(self.key(k), "expected an array of numbers")),
        }
    }

    /// Reads `base_<unit>` for exactly one of `units`, scaled to SI.
    fn quantity(&self, base: &str, units: &[(&str, f64)]) -> Result<Option<f64>> {
        let mut found = None;
        for (suffix, scale) in units {
            let k = format!("{base}_{suffix}");
            if let Some(v) = self.number(&k)? {
                if found.is_some() {
                    return Err(err(self.key(base), "given in more than one unit"));
                }
                found = Some(v * scale);
            }
        }
        Ok(found)
    }

    fn require_quantity(&self, base: &str, units: &[(&str, f64)]) -> Result<f64> {
        self.quantity(base, units)?.ok_or_else(|| {
            let names: Vec<String> = units.iter().map(|(s, _)| format!("{base}_{s}")).collect();
            err(self.key(base), format!("missing; give one of {}", names.join(", ")))
        })
    }

    /// Density in points per m^2, also accepting `<base>_per_disk` (points per
    /// disk of radius `disk_radius_*`).
    fn density(&self, base: &str) -> Result<f64> {
        let direct = self.quantity(base, DENSITY)?;
        let per_disk = self.number(&format!("{base}_per_disk"))?;
        let radius = self.quantity("disk_radius", LENGTH)?;
        match (direct, per_disk) {
            (Some(_), Some(_)) => Err(err(self.key(base), "given in more than one unit")),
            (Some(v), None) => Ok(v),
            (None, Some(n)) => {
                let r = radius.ok_or_else(|| {
                    err(self.key(&format!("{base}_per_disk")), "needs disk_radius_m or disk_radius_km")
                })?;
                Ok(n / (PI * r * r))
            }
            (None, None) => {
                Err(err(self.key(base), format!("missing; give one of {base}_per_m2, {base}_per_km2, {base}_per_disk")))
            }
        }
    }

    fn finish(&self) -> Result<()> {
        let Some(t) = self.table else { return Ok(()) };
        let used = self.used.borrow();
        match t.keys().find(|k| !used.contains(*k)) {
            Some(k) => Err(err(self.key(k), "unknown key")),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Assoc,
    Rates,
    Traffic,
    Qos,
    Validate,
}

impl Command {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "assoc" => Self::Assoc,
            "rates" => Self::Rates,
            "traffic" => Self::Traffic,
            "qos" => Self::Qos,
            "validate" => Self::Validate,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Assoc => "assoc",
            Self::Rates => "rates",
            Self::Traffic => "traffic",
            Self::Qos => "qos",
            Self::Validate => "validate",
        }
    }
}

pub fn parse_modes(s: &str) -> Option<Vec<SbsMode>> {
    Some(match s {
        "clustered" => vec![SbsMode::Clustered],
        "baseline" => vec![SbsMode::Baseline],
        "both" => vec![SbsMode::Clustered, SbsMode::Baseline],
        _ => return None,
    })
}

pub fn mode_name(m: SbsMode) -> &'static str {
    match m {
        SbsMode::Clustered => "clustered",
        SbsMode::Baseline => "baseline",
    }
}

/// Monte Carlo sizes used by `validate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateSettings {
    pub realizations: u64,
    pub rate_realizations: u64,
    pub des_completions: u64,
    pub case1_tolerance: f64,
    pub case2_tolerance: f64,
    pub case3_tolerance: f64,
    pub des_tolerance: f64,
}

impl Default for ValidateSettings {
    fn default() -> Self {
        Self {
            realizations: 10_000,
            rate_realizations: 20_000,
            des_completions: 200_000,
            case1_tolerance: 0.05,
            case2_tolerance: 0.05,
            case3_tolerance: 0.07,
            des_tolerance: 0.10,
        }
    }
}

/// Concrete parameters of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub network: NetworkConfig,
    pub content: ContentConfig,
    pub traffic: TrafficConfig,
    /// Weight overrides applied in baseline mode.
    pub baseline_weights: Matrix,
    pub rates: RateOptions,
}

impl Params {
    pub fn for_mode(&self, mode: SbsMode) -> (NetworkConfig, TrafficConfig) {
        let net = self.network.with_mode(mode);
        let mut traffic = self.traffic.clone();
        if mode == SbsMode::Baseline {
            traffic.weights = self.baseline_weights;
        }
        (net, traffic)
    }

    /// `key = value` lines of every resolved SI value.
    pub fn resolved(&self) -> Vec<(String, String)> {
        let n = &self.network;
        let c = &self.content;
        let t = &self.traffic;
        let mut out = vec![
            ("network.lambda0_per_m2".into(), n.lambda0.to_string()),
            ("network.alpha".into(), n.alpha.to_string()),
            ("network.powers_w".into(), format!("{:?}", n.powers)),
            ("network.beta".into(), n.beta.to_string()),
            ("network.lambda_p2_per_m2".into(), n.lambda_p2.to_string()),
            ("network.mean_cluster_size".into(), n.mean_cluster_size.to_string()),
            ("network.sigma_m".into(), n.sigma.to_string()),
            ("network.lambda3_per_m2".into(), n.lambda3.to_string()),
            ("network.noise_w".into(), n.noise.to_string()),
            ("content.n_files".into(), c.n_files.to_string()),
            ("content.m1".into(), c.m1.to_string()),
            ("content.m2".into(), c.m2.to_string()),
            ("content.gamma".into(), c.gamma.to_string()),
            ("content.file_size_bits".into(), c.file_size_bits.to_string()),
            ("traffic.request_rate_per_s".into(), t.request_rate.to_string()),
            ("traffic.content_rate".into(), t.content_rate.to_string()),
            ("traffic.bandwidth_hz".into(), t.bandwidth_hz.to_string()),
            ("traffic.eta".into(), t.eta.to_string()),
            ("traffic.backhaul_delta".into(), t.backhaul.delta.to_string()),
        ];
        for (name, w) in [("weights", &t.weights), ("weights_baseline", &self.baseline_weights)] {
            for (j, col) in COLUMN_NAMES.iter().enumerate().take(3) {
                let v: Vec<f64> = (0..ROWS).map(|i| w[i][j]).collect();
                out.push((format!("traffic.{name}.{col}"), format!("{v:?}")));
            }
        }
        out.push(("rates.rel_tol".into(), self.rates.rel_tol.to_string()));
        out.push((
            "rates.kernel".into(),
            match self.rates.kernel {
                ClusterKernel::Conditioned => "conditioned",
                ClusterKernel::Unconditioned => "unconditioned",
            }
            .into(),
        ));
        out.push(("rates.case2_d2d_exclusion_m".into(), self.rates.case2_d2d_exclusion.to_string()));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    /// Dotted key of the swept parameter as written in the file.
    pub parameter: String,
    pub values: Vec<f64>,
}

/// A parsed scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Pipeline run by `figure`.
    pub command: Option<Command>,
    pub modes: Vec<SbsMode>,
    pub seed: u64,
    pub sweep: Option<Sweep>,
    pub disciplines: Vec<Discipline>,
    /// Tiers reported by `qos`.
    pub qos_tiers: Vec<Tier>,
    pub validate: ValidateSettings,
    pub base: Params,
    table: Table,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| err("<file>", e.message().to_string()))?;
        Self::from_table(table)
    }

    fn from_table(table: Table) -> Result<Self> {
        for k in table.keys() {
            if !["scenario", "network", "content", "traffic", "rates", "sweep", "qos", "validate"].contains(&k.as_str())
            {
                return Err(err(k.clone(), "unknown section"));
            }
        }
        let sc = Section::new(&table, "scenario")?;
        let name = sc.string("name")?.unwrap_or("scenario").to_string();
        let command = match sc.string("command")? {
            None => None,
            Some(s) => {
                Some(Command::parse(s).ok_or_else(|| err("scenario.command", format!("unknown command {s:?}")))?)
            }
        };
        let modes = match sc.string("mode")? {
            None => vec![SbsMode::Clustered],
            Some(s) => parse_modes(s)
                .ok_or_else(|| err("scenario.mode", format!("expected clustered, baseline or both, got {s:?}")))?,
        };
        let seed = sc.count("seed")?.unwrap_or(1) as u64;
        sc.finish()?;

        let sweep = {
            let s = Section::new(&table, "sweep")?;
            let out = match (s.string("parameter")?, s.numbers("values")?) {
                (None, None) => None,
                (Some(p), Some(values)) => {
                    if values.is_empty() {
                        return Err(err("sweep.values", "empty"));
                    }
                    Some(Sweep { parameter: p.to_string(), values })
                }
                _ => return Err(err("sweep", "needs both parameter and values")),
            };
            s.finish()?;
            out
        };

        let q = Section::new(&table, "qos")?;
        let disciplines = match q.raw("disciplines") {
            None => vec![Discipline::Dps, Discipline::Eps],
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v.as_str() {
                    Some("dps") => Ok(Discipline::Dps),
                    Some("eps") => Ok(Discipline::Eps),
                    _ => Err(err("qos.disciplines", "expected \"dps\" or \"eps\"")),
                })
                .collect::<Result<_>>()?,
            Some(_) => return Err(err("qos.disciplines", "expected an array")),
        };
        let qos_tiers = match q.raw("tiers") {
            None => vec![Tier::D2d, Tier::Sbs, Tier::Mbs],
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v.as_str() {
                    Some("d2d") => Ok(Tier::D2d),
                    Some("sbs") => Ok(Tier::Sbs),
                    Some("mbs") => Ok(Tier::Mbs),
                    _ => Err(err("qos.tiers", "expected \"d2d\", \"sbs\" or \"mbs\"")),
                })
                .collect::<Result<_>>()?,
            Some(_) => return Err(err("qos.tiers", "expected an array")),
        };
        q.finish()?;

        let v = Section::new(&table, "validate")?;
        let d = ValidateSettings::default();
        let validate = ValidateSettings {
            realizations: v.count("realizations")?.map_or(d.realizations, |n| n as u64),
            rate_realizations: v.count("rate_realizations")?.map_or(d.rate_realizations, |n| n as u64),
            des_completions: v.count("des_completions")?.map_or(d.des_completions, |n| n as u64),
            case1_tolerance: v.number("case1_tolerance")?.unwrap_or(d.case1_tolerance),
            case2_tolerance: v.number("case2_tolerance")?.unwrap_or(d.case2_tolerance),
            case3_tolerance: v.number("case3_tolerance")?.unwrap_or(d.case3_tolerance),
            des_tolerance: v.number("des_tolerance")?.unwrap_or(d.des_tolerance),
        };
        v.finish()?;

        let base = parse_params(&table)?;
        let scenario = Self { name, command, modes, seed, sweep, disciplines, qos_tiers, validate, base, table };
        if let Some(s) = &scenario.sweep {
            for &x in &s.values {
                scenario.point(x)?;
            }
        }
        Ok(scenario)
    }

    /// Parameters with the swept key set to `value`.
    pub fn point(&self, value: f64) -> Result<Params> {
        let Some(sweep) = &self.sweep else { return Ok(self.base.clone()) };
        let (section, key) =
            sweep.parameter.split_once('.').ok_or_else(|| err("sweep.parameter", "expected section.key"))?;
        let mut table = self.table.clone();
        let slot = table
            .get_mut(section)
            .and_then(Value::as_table_mut)
            .and_then(|t| t.get_mut(key))
            .ok_or_else(|| err("sweep.parameter", format!("{} is not set in the file", sweep.parameter)))?;
        *slot = match slot {
            Value::Integer(_) if value.fract() == 0.0 => Value::Integer(value as i64),
            Value::Integer(_) | Value::Float(_) => Value::Float(value),
            _ => return Err(err("sweep.parameter", format!("{} is not a scalar number", sweep.parameter))),
        };
        parse_params(&table)
    }

    /// Sweep values, or a single unnamed point.
    pub fn points(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            Some(s) => s.values.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        }
    }

    pub fn params_at(&self, value: Option<f64>) -> Result<Params> {
        match value {
            Some(v) => self.point(v),
            None => Ok(self.base.clone()),
        }
    }
}

fn weights(section: &Section, defaults: &Matrix) -> Result<Matrix> {
    let mut w = *defaults;
    for (j, col) in COLUMN_NAMES.iter().enumerate().take(3) {
        if let Some(v) = section.numbers(col)? {
            if v.len() > ROWS {
                return Err(err(section.key(col), format!("at most {ROWS} weights")));
            }
            if let Some(bad) = v.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
                return Err(err(section.key(col), format!("weights must be positive, got {bad}")));
            }
            for (i, x) in v.into_iter().enumerate() {
                w[i][j] = x;
            }
        }
    }
    section.finish()?;
    Ok(w)
}

fn parse_params(table: &Table) -> Result<Params> {
    let n = Section::new(table, "network")?;
    let powers = match n.numbers("powers_w")? {
        Some(p) if p.len() == 3 => [p[0], p[1], p[2]],
        Some(_) => return Err(err("network.powers_w", "expected three powers (D2D, SBS, MBS)")),
        None => [
            n.require_quantity("power_d2d", POWER)?,
            n.require_quantity("power_sbs", POWER)?,
            n.require_quantity("power_mbs", POWER)?,
        ],
    };
    let network = NetworkConfig {
        lambda0: n.density("lambda0")?,
        alpha: n.require("alpha")?,
        powers,
        beta: n.require("beta")?,
        lambda_p2: n.density("lambda_p2")?,
        mean_cluster_size: n.require("mean_cluster_size")?,
        sigma: n.require_quantity("sigma", LENGTH)?,
        lambda3: n.density("lambda3")?,
        noise: n.quantity("noise", POWER)?.unwrap_or(0.0),
        mode: SbsMode::Clustered,
    };
    n.finish()?;
    network.validate().map_err(|e| err("network", e.to_string()))?;

    let c = Section::new(table, "content")?;
    let content = ContentConfig {
        n_files: c.count("n_files")?.ok_or_else(|| err("content.n_files", "missing"))?,
        m1: c.count("m1")?.ok_or_else(|| err("content.m1", "missing"))?,
        m2: c.count("m2")?.ok_or_else(|| err("content.m2", "missing"))?,
        gamma: c.require("gamma")?,
        file_size_bits: c.require_quantity("file_size", BITS)?,
    };
    c.finish()?;
    content.validate().map_err(|e| err("content", e.to_string()))?;

    let t = Section::new(table, "traffic")?;
    let d = TrafficConfig::default();
    let sub = |name: &str| -> Result<Option<Table>> {
        match t.raw(name) {
            None => Ok(None),
            Some(Value::Table(x)) => Ok(Some(x.clone())),
            Some(_) => Err(err(format!("traffic.{name}"), "expected a table")),
        }
    };
    let clustered = match sub("weights")? {
        Some(x) => {
            let root = Table::from_iter([("traffic.weights".to_string(), Value::Table(x))]);
            weights(&Section::new(&root, "traffic.weights")?, &d.weights)?
        }
        None => d.weights,
    };
    let baseline = match sub("weights_baseline")? {
        Some(x) => {
            let root = Table::from_iter([("traffic.weights_baseline".to_string(), Value::Table(x))]);
            weights(&Section::new(&root, "traffic.weights_baseline")?, &clustered)?
        }
        None => clustered,
    };
    let traffic = TrafficConfig {
        request_rate: t.quantity("request_rate", PER_SECOND)?.unwrap_or(d.request_rate),
        content_rate: t.number("content_rate")?.unwrap_or(d.content_rate),
        bandwidth_hz: t.quantity("bandwidth", FREQUENCY)?.unwrap_or(d.bandwidth_hz),
        eta: t.number("eta")?.unwrap_or(d.eta),
        backhaul: BackhaulPolicy { delta: t.number("backhaul_delta")?.unwrap_or(d.backhaul.delta) },
        weights: clustered,
    };
    t.finish()?;
    traffic.validate().map_err(|e| err("traffic", e.to_string()))?;

    let r = Section::new(table, "rates")?;
    let dr = RateOptions::default();
    let rates = RateOptions {
        kernel: match r.string("kernel")? {
            None | Some("conditioned") => ClusterKernel::Conditioned,
            Some("unconditioned") => ClusterKernel::Unconditioned,
            Some(s) => return Err(err("rates.kernel", format!("expected conditioned or unconditioned, got {s:?}"))),
        },
        case2_d2d_exclusion: r.quantity("case2_d2d_exclusion", LENGTH)?.unwrap_or(dr.case2_d2d_exclusion),
        rel_tol: r.number("rel_tol")?.unwrap_or(dr.rel_tol),
    };
    r.finish()?;
    if !(rates.rel_tol > 0.0 && rates.rel_tol < 1.0) {
        return Err(err("rates.rel_tol", "must lie in (0, 1)"));
    }
    Ok(Params { network, content, traffic, baseline_weights: baseline, rates })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[network]
disk_radius_km = 1
lambda0_per_disk = 1000
alpha = 0.1
powers_w = [3, 13, 193]
beta = 4
lambda_p2_per_km2 = 0.954929658551372
mean_cluster_size = 10
sigma_m = 250
lambda3_per_disk = 2

[content]
n_files = 1000
m1 = 10
m2 = 100
gamma = 0.8
file_size_mbit = 100
"#;

    #[test]
    fn units_convert_to_si() {
        let s = Scenario::parse(MINIMAL).unwrap();
        let n = &s.base.network;
        assert!((n.lambda0 - 1000.0 / (PI * 1e6)).abs() < 1e-18);
        assert!((n.lambda_p2 - 3.0 / (PI * 1e6)).abs() < 1e-15);
        assert_eq!(n.sigma, 250.0);
        assert_eq!(s.base.content.file_size_bits, 1e8);
        assert_eq!(s.modes, vec![SbsMode::Clustered]);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = MINIMAL.replace("sigma_m = 250", "sigma = 250");
        let e = Scenario::parse(&bad).unwrap_err();
        assert_eq!(e.path, "network.sigma");
        let typo = MINIMAL.replace("gamma = 0.8", "gama = 0.8");
        assert_eq!(Scenario::parse(&typo).unwrap_err().path, "content.gamma");
        let both = MINIMAL.replace("sigma_m = 250", "sigma_m = 250\nsigma_km = 0.25");
        assert!(Scenario::parse(&both).unwrap_err().message.contains("more than one unit"));
    }

    #[test]
    fn sweep_rewrites_the_named_key() {
        let text = format!("{MINIMAL}\n[sweep]\nparameter = \"network.sigma_m\"\nvalues = [100, 2000]\n");
        let s = Scenario::parse(&text).unwrap();
        assert_eq!(s.point(2000.0).unwrap().network.sigma, 2000.0);
        let missing = format!("{MINIMAL}\n[sweep]\nparameter = \"network.noise_w\"\nvalues = [1]\n");
        assert_eq!(Scenario::parse(&missing).unwrap_err().path, "sweep.parameter");
    }

    #[test]
    fn baseline_weights_override_per_column() {
        let text = format!("{MINIMAL}\n[traffic.weights]\nmbs = [1, 1, 1, 1, 1.5]\n[traffic.weights_baseline]\nmbs = [1, 1, 1, 1, 1.8]\n");
        let s = Scenario::parse(&text).unwrap();
        let (_, c) = s.base.for_mode(SbsMode::Clustered);
        let (_, b) = s.base.for_mode(SbsMode::Baseline);
        assert_eq!((c.weights[4][2], b.weights[4][2]), (1.5, 1.8));
        assert_eq!(b.weights[0][1], 1.0);
    }
}
