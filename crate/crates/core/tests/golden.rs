//! Frozen outputs. Set `SOFICLAB_BLESS=1` to rewrite them.

use std::path::PathBuf;

use num_rational::Ratio;
use serde_json::json;

use soficlab::chart::{bicyclic_chart_search, cyclic_chart, random_perm_chart, SearchConfig};
use soficlab::cli::DEFAULT_SEED;
use soficlab::entropy::{sweep, sweep_csv, CountOptions, SweepParams};
use soficlab::rational;
use soficlab::shift::{AdmissibilityMode, Sft};

mod common;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("SOFICLAB_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} drifted");
}

#[test]
fn bicyclic_search_d50() {
    let config = SearchConfig::new(50, 10_000, 7);
    let found = bicyclic_chart_search(&config).unwrap();
    let frozen = json!({
        "d": 50,
        "iterations": 10_000,
        "seed": 7,
        "sm2_defect": rational::format(&found.report.sm2_defect),
        "sm3_separation": rational::format(&found.report.sm3_separation),
        "score": format!("{}/{}", found.score.numer(), found.score.denom()),
    });
    check("search_d50.json", &(serde_json::to_string_pretty(&frozen).unwrap() + "\n"));
    assert_eq!(found.trace.len(), 10_000);
}

#[test]
fn random_perm_chart_d100() {
    let chart = random_perm_chart(100, 2, 3, 7).unwrap();
    let report = chart.quality().unwrap();
    assert_eq!(report.sm2_defect, Ratio::from_integer(0));
    assert!(report.sm1_ok);
    let frozen = json!({
        "d": 100,
        "k": 2,
        "len": 3,
        "seed": 7,
        "elements": chart.len(),
        "sm3_separation": rational::format(&report.sm3_separation),
        "sm4_delta": report.sm4_delta,
    });
    check("random_perm_d100.json", &(serde_json::to_string_pretty(&frozen).unwrap() + "\n"));
}

#[test]
fn golden_mean_sweep() {
    let charts: Vec<_> = (4..=12).map(|n| cyclic_chart(n, &[0, 1]).unwrap()).collect();
    let params = SweepParams {
        f: vec!["0".into(), "1".into()],
        delta: Ratio::new(1, 1000),
        epsilon: Ratio::new(1, 2),
        mode: AdmissibilityMode::Local,
        count: CountOptions::default(),
    };
    let rows = sweep(&charts, &Sft::golden_mean(), &params);
    for (n, row) in (4..=12).zip(&rows) {
        assert_eq!(row.count.as_ref().unwrap(), &common::lucas(n).into());
        assert!(row.log_count_per_d_nats.unwrap() < 2f64.ln());
        assert!(row.certified_upper_bound.unwrap() < 2f64.powi(n as i32));
    }
    check("golden_mean_sweep.csv", &sweep_csv(&rows, Some(DEFAULT_SEED)));
}
