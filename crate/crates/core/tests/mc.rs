use shapeboot::bootstrap::stream_rng;
use shapeboot::mc::{
    emit_report, generate_dgp, ks_two_sample, run_simulation, run_simulation_with_threads,
    DgpModel, Method, MethodSpec, ReportFormat, SimConfig, SimReport, EVAL_POINT,
};

fn small(model: u8, methods: &[(&str, Method)]) -> SimConfig {
    SimConfig {
        n: 120,
        replications: 6,
        bootstrap_replications: 40,
        master_seed: 99,
        methods: methods
            .iter()
            .map(|(name, method)| MethodSpec { name: name.to_string(), method: *method })
            .collect(),
        ..SimConfig::desk(model)
    }
}

#[test]
fn model_constants() {
    let expect = [(1u8, 2.0, 1u32, 1.0), (2, 0.0, 1, 1.0), (3, 24.0, 3, 1.0)];
    for (id, theta0, q, d) in expect {
        let m = DgpModel::new(id).unwrap();
        assert!((m.theta0 - theta0).abs() < 1e-12, "model {id}");
        assert_eq!(m.q_true, q);
        assert!((m.d_true - d).abs() < 1e-12, "model {id}: {}", m.d_true);
    }
    assert!(DgpModel::new(4).is_err());
    assert_eq!(EVAL_POINT, 0.5);
}

#[test]
fn generated_design_is_sorted_and_unit_interval() {
    let m = DgpModel::new(2).unwrap();
    let (x, y) = generate_dgp(&m, 300, &mut stream_rng(1, 0));
    assert_eq!(x.len(), 300);
    assert_eq!(y.len(), 300);
    assert!(x.iter().all(|v| (0.0..1.0).contains(v)));
    let (x2, y2) = generate_dgp(&m, 300, &mut stream_rng(1, 0));
    assert_eq!((x, y), (x2, y2));
}

#[test]
fn smoke_simulation_with_every_method() {
    let cfg = small(
        1,
        &[
            ("oracle", Method::Oracle),
            ("known_q", Method::KnownQ),
            ("robust", Method::Robust),
            ("naive", Method::Naive),
            ("moon", Method::MOutOfN { m: None }),
        ],
    );
    let rep = run_simulation(&cfg).unwrap();
    assert_eq!(rep.rows.len(), 5);
    for row in &rep.rows {
        assert_eq!(row.successes + row.failures, 6, "{}", row.method);
        assert!((0.0..=1.0).contains(&row.coverage));
        assert!(row.avg_length > 0.0);
    }
    assert!(rep.rows[2].d1_avg.is_some() && rep.rows[2].d3_avg.is_some());
    assert!(rep.rows[3].d1_avg.is_none());
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let cfg = small(3, &[("robust", Method::Robust), ("naive", Method::Naive)]);
    let a = emit_report(&run_simulation_with_threads(&cfg, 1).unwrap(), ReportFormat::Json).unwrap();
    let b = emit_report(&run_simulation_with_threads(&cfg, 5).unwrap(), ReportFormat::Json).unwrap();
    assert_eq!(a, b);
    let back: SimReport = serde_json::from_str(&a).unwrap();
    assert_eq!(emit_report(&back, ReportFormat::Json).unwrap(), a);
}

#[test]
fn table_formats() {
    let rep = run_simulation(&small(2, &[("known_q", Method::KnownQ)])).unwrap();
    let csv = emit_report(&rep, ReportFormat::Csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("method,D1_avg,D3_avg,coverage,avg_length"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "known_q");
    assert_eq!(row[3].split('.').nth(1).map(str::len), Some(3));
    let md = emit_report(&rep, ReportFormat::Markdown).unwrap();
    assert!(md.lines().next().unwrap().starts_with("| method"));
    assert_eq!(md.lines().count(), 3);
    assert!("tsv".parse::<ReportFormat>().is_err());
}

#[test]
fn config_files() {
    let cfg: SimConfig = serde_json::from_str(
        r#"{"model": 2, "n": 250, "methods": [
            {"name": "a", "method": "robust"},
            {"name": "b", "method": {"m_out_of_n": {"m": 30}}}
        ]}"#,
    )
    .unwrap();
    assert_eq!(cfg.n, 250);
    assert_eq!(cfg.replications, 400);
    assert_eq!(cfg.methods[1].method, Method::MOutOfN { m: Some(30) });
    assert!(serde_json::from_str::<SimConfig>(r#"{"model": 1, "bogus": 3}"#).is_err());
    let mut bad = SimConfig::desk(1);
    bad.alpha = 1.5;
    assert!(run_simulation(&bad).is_err());
    bad = SimConfig::desk(7);
    assert!(run_simulation(&bad).is_err());
}

#[test]
fn ks_statistic() {
    assert_eq!(ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
    assert_eq!(ks_two_sample(&[0.0, 1.0], &[5.0, 6.0]), 1.0);
    assert!((ks_two_sample(&[0.0, 2.0], &[1.0, 3.0]) - 0.5).abs() < 1e-15);
}

#[test]
fn m_out_of_n_covers_on_model_three() {
    let cfg = SimConfig {
        replications: 400,
        bootstrap_replications: 400,
        master_seed: 2024,
        methods: vec![MethodSpec { name: "moon".into(), method: Method::MOutOfN { m: None } }],
        ..SimConfig::desk(3)
    };
    let rep = run_simulation(&cfg).unwrap();
    let cov = rep.rows[0].coverage;
    assert!((0.905..=0.985).contains(&cov), "coverage {cov}");
}

#[test]
fn design_moments() {
    let (x, _) = generate_dgp(&DgpModel::new(1).unwrap(), 100_000, &mut stream_rng(5, 0));
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let sd = (1.0f64 / 12.0 / 100_000.0).sqrt();
    assert!((mean - 0.5).abs() < 3.0 * sd, "{mean}");
}
