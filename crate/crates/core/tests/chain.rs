use hetnet_core::association::{Network, NetworkConfig, SbsMode, Tier};
use hetnet_core::content::{ContentConfig, Popularity};
use hetnet_core::dpsq::{dps_sojourn_approx, qos_report, tier_instance, Discipline, QosReport};
use hetnet_core::montecarlo::{dps_des, DesOptions};
use hetnet_core::rates::{rate_table, RateOptions, RateTable};
use hetnet_core::traffic::{
    active_intensities, arrival_rates, build_state_matrix, loads, rate_matrix, Loads, Matrix, TrafficConfig,
};
use std::f64::consts::PI;

fn network() -> NetworkConfig {
    let disk = PI * 500.0 * 500.0;
    NetworkConfig {
        lambda0: 300.0 / disk,
        alpha: 0.3,
        powers: [73.0, 373.0, 1773.0],
        beta: 4.0,
        lambda_p2: 3.0 / disk,
        mean_cluster_size: 10.0,
        sigma: 50.0,
        lambda3: 6.0 / disk,
        noise: 0.0,
        mode: SbsMode::Baseline,
    }
}

fn content() -> ContentConfig {
    ContentConfig { n_files: 1000, m1: 10, m2: 100, gamma: 0.8, file_size_bits: 1e8 }
}

struct Chain {
    zeta: Matrix,
    a: Matrix,
    loads: Loads,
    traffic: TrafficConfig,
}

fn chain(cfg: &NetworkConfig, content: &ContentConfig, traffic: TrafficConfig, rates: &RateTable) -> Chain {
    let net = Network::new(cfg).unwrap();
    let pop = Popularity::new(content).unwrap();
    let active = active_intensities(cfg, net.probs(), &pop, content).unwrap();
    let d = build_state_matrix(cfg.alpha, net.probs(), &pop, content).unwrap();
    let zeta = arrival_rates(&d, &traffic, cfg, &active).unwrap();
    let a = rate_matrix(&d, rates, &traffic).unwrap();
    let loads = loads(&zeta, &a, &traffic, content).unwrap();
    Chain { zeta, a, loads, traffic }
}

fn rates(cfg: &NetworkConfig) -> RateTable {
    let net = Network::new(cfg).unwrap();
    let pop = Popularity::new(&content()).unwrap();
    let active = active_intensities(cfg, net.probs(), &pop, &content()).unwrap();
    rate_table(&net, &active, &RateOptions { rel_tol: 1e-4, ..RateOptions::default() }).unwrap()
}

fn report(c: &Chain, content: &ContentConfig, discipline: Discipline) -> QosReport {
    qos_report(&c.zeta, &c.loads, &c.traffic, content.file_size_bits / c.traffic.content_rate, discipline).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn qos_rows_satisfy_little_and_throughput_identities() {
    let cfg = network();
    let c = chain(&cfg, &content(), TrafficConfig::default(), &rates(&cfg));
    for discipline in [Discipline::Dps, Discipline::Eps] {
        let rep = report(&c, &content(), discipline);
        assert!(!rep.rows.is_empty());
        for r in &rep.rows {
            assert!(r.stable);
            let m = r.metrics.unwrap();
            assert!(close(m.n, r.lambda * m.d, 1e-12));
            assert!(close(m.t, r.rho_prime / m.n, 1e-12));
            assert!(m.d > 1.0 / r.mu);
        }
    }
}

#[test]
fn scaling_invariants_of_the_traffic_chain() {
    let cfg = network();
    let table = rates(&cfg);
    let base = chain(&cfg, &content(), TrafficConfig::default(), &table);

    let busy = TrafficConfig { request_rate: 0.6, ..TrafficConfig::default() };
    let wide = TrafficConfig { bandwidth_hz: 140e6, ..TrafficConfig::default() };
    let c_busy = chain(&cfg, &content(), busy, &table);
    let c_wide = chain(&cfg, &content(), wide, &table);
    let big = ContentConfig { file_size_bits: 3e8, ..content() };
    let fewer = TrafficConfig { content_rate: 3.0, ..TrafficConfig::default() };
    let c_vol = chain(&cfg, &big, fewer, &table);

    for i in 0..8 {
        for j in 0..3 {
            assert!(close(c_busy.zeta[i][j], 3.0 * base.zeta[i][j], 1e-12));
            assert!(close(c_wide.a[i][j], 2.0 * base.a[i][j], 1e-12));
            assert!(close(c_vol.loads.rho_prime[i][j], base.loads.rho_prime[i][j], 1e-12));
            assert_eq!(base.zeta[i][j] == 0.0, base.a[i][j] == 0.0, "zero pattern at ({i},{j})");
        }
    }
}

#[test]
fn extra_weight_on_macro_case_three_raises_its_throughput() {
    let cfg = network();
    let table = rates(&cfg);
    let mut weighted = TrafficConfig::default();
    weighted.weights[4][2] = 1.5;
    let plain = report(&chain(&cfg, &content(), TrafficConfig::default(), &table), &content(), Discipline::Dps);
    let tilted = report(&chain(&cfg, &content(), weighted, &table), &content(), Discipline::Dps);
    let t = |r: &QosReport| r.get(Tier::Mbs, 5).unwrap().metrics.unwrap().t;
    assert!(t(&tilted) > t(&plain), "{} vs {}", t(&tilted), t(&plain));
}

#[test]
fn small_cell_instance_agrees_with_simulation() {
    let mut cfg = network();
    cfg.mode = SbsMode::Clustered;
    let mut traffic = TrafficConfig::default();
    for (row, w) in [1.0, 1.0, 1.1, 1.1, 1.5, 1.87].into_iter().enumerate() {
        traffic.weights[row][1] = w;
    }
    // Raise the request rate so the instance is busy enough to exercise the weights.
    traffic.request_rate = 4.0;
    let c = chain(&cfg, &content(), traffic, &rates(&cfg));
    let (inst, rows) = tier_instance(Tier::Sbs, &c.zeta, &c.loads, &c.traffic, 1e8, Discipline::Dps);
    let load: f64 = inst.classes.iter().map(|k| k.load()).sum();
    assert!((0.1..0.9).contains(&load), "load {load}");
    let des = dps_des(&inst, &DesOptions::new(400_000, 11)).unwrap();
    assert!(des.little_ok());
    for (k, row) in rows.iter().enumerate() {
        let s = des.classes[k].sojourn.unwrap();
        let approx = dps_sojourn_approx(&inst, k).unwrap();
        assert!((approx - s.mean).abs() / s.mean < 0.10, "row {row}: {approx} vs {} +- {}", s.mean, s.se);
    }
}
