use nilrand::experiments::{
    compare_with_predictions, run_experiment, run_rank_heatmap, ExperimentConfig, ExperimentKind,
};
use nilrand::predict::{prob_primitive, prob_trivial};

fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(f)
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let configs = [
        ExperimentConfig::new(ExperimentKind::RankHeatmap, 3, 1, 4, 200, 400, 77),
        ExperimentConfig::new(ExperimentKind::HeisTable, 2, 1, 4, 200, 400, 77),
        ExperimentConfig::new(ExperimentKind::BalancedOrders, 2, 2, 2, 10, 2000, 77),
        ExperimentConfig::new(ExperimentKind::DdCensus, 2, 1, 1, 200, 2000, 77),
    ];
    for cfg in configs {
        let one = with_threads(1, || run_experiment(&cfg).unwrap());
        let four = with_threads(4, || run_experiment(&cfg).unwrap());
        assert_eq!(one.to_csv(), four.to_csv(), "{}", cfg.kind.name());
        assert_eq!(one.to_json(), four.to_json());
        let again = run_experiment(&cfg).unwrap();
        assert_eq!(one, again);
    }
}

#[test]
fn heatmap_csv_shape() {
    let cfg = ExperimentConfig::new(ExperimentKind::RankHeatmap, 2, 1, 10, 100, 100, 3);
    let rep = run_rank_heatmap(&cfg).unwrap();
    let csv = rep.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,rank_0,rank_1,rank_2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for (i, line) in rows.iter().enumerate() {
        let f: Vec<u64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(f[0], i as u64 + 1);
        assert_eq!(f[1..].iter().sum::<u64>(), 100);
    }
    // One relator never kills both generators.
    assert_eq!(rep.rows[0].count("rank_0"), 0);
}

#[test]
fn predictions_are_attached() {
    let cfg = ExperimentConfig::new(ExperimentKind::HeisTable, 2, 1, 3, 100, 200, 9);
    let rep = run_experiment(&cfg).unwrap();
    let cmp = compare_with_predictions(&rep);
    let t3 = cmp.get(3, "trivial").unwrap();
    assert_eq!(t3.predicted, prob_trivial(2, 3).unwrap());
    assert_eq!(format!("{:.4}", t3.predicted.value), "0.5057");
    assert_eq!(cmp.get(1, "trivial").unwrap().predicted.value, 0.0);

    let cfg = ExperimentConfig::new(ExperimentKind::RankHeatmap, 2, 1, 1, 100, 200, 9);
    let cmp = compare_with_predictions(&run_experiment(&cfg).unwrap());
    let e = cmp.get(1, "rank_lt_m").unwrap();
    assert_eq!(e.predicted, prob_primitive(2).unwrap());
    assert_eq!(e.trials, 200);
}

#[test]
fn json_mirror_carries_config_and_version() {
    let cfg = ExperimentConfig::new(ExperimentKind::DdCensus, 2, 1, 1, 100, 300, 1);
    let rep = run_experiment(&cfg).unwrap();
    let v = rep.to_json();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["kind"], "dd-census");
    assert_eq!(v["config"]["seed"], 1);
    assert!(v["rows"][0]["pairs"].as_array().unwrap().len() > 1);
    let dir = std::env::temp_dir().join(format!("nilrand-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("census.json");
    rep.write_json(&path).unwrap();
    let back: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, v);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn balanced_orders_respect_cube_divisibility() {
    let cfg = ExperimentConfig::new(ExperimentKind::BalancedOrders, 2, 2, 2, 10, 3000, 5);
    let rep = run_experiment(&cfg).unwrap();
    let row = &rep.rows[0];
    assert_eq!(row.extra("d3_violations"), 0);
    let order8 = row.extra("order_8");
    assert_eq!(row.extra("Q8") + row.extra("D4"), order8);
    let orders: u64 = row.extras.iter().filter(|(k, _)| k.starts_with("order_")).map(|(_, v)| v).sum();
    assert_eq!(orders, row.count("nonabelian_finite"));
}
