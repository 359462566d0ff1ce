//! Local search for charts of the bicyclic monoid.
//!
//! `cargo run --example bicyclic_search -- [d] [iterations] [seed] [shards]`
use soficlab::chart::{bicyclic_chart_search_sharded, idempotent_obstruction, SearchConfig};

fn arg(i: usize, default: u64) -> u64 {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> soficlab::Result<()> {
    let config = SearchConfig::new(arg(1, 50) as usize, arg(2, 10_000) as usize, arg(3, 7));
    let found = bicyclic_chart_search_sharded(&config, arg(4, 1) as usize)?;
    for step in found.trace.iter().step_by((config.iterations / 10).max(1)) {
        println!(
            "{:>6} sm2={} sm3={} score={} best={}{}",
            step.iteration,
            step.sm2_defect,
            step.sm3_separation,
            step.score,
            step.best_score,
            if step.restarted { " (restart)" } else { "" }
        );
    }
    println!("best: {}", found.report.verdict());
    let qp = found.chart.position(&found.chart.monoid().parse_element("qp")?).expect("qp listed");
    let cert = idempotent_obstruction(&found.chart, qp)?;
    println!("qp: implied Delta >= {}, chart Delta = {}", cert.implied_delta, cert.chart_delta);
    Ok(())
}
