//! Golden-mean sweep over cyclic charts, written as CSV to stdout.
use num_rational::Ratio;
use soficlab::chart::cyclic_chart;
use soficlab::entropy::{sweep, sweep_csv, CountOptions, SweepParams};
use soficlab::shift::{AdmissibilityMode, Sft};

fn main() -> soficlab::Result<()> {
    let charts = (4..=16).map(|n| cyclic_chart(n, &[0, 1])).collect::<soficlab::Result<Vec<_>>>()?;
    let params = SweepParams {
        f: vec!["0".into(), "1".into()],
        delta: Ratio::new(1, 1000),
        epsilon: Ratio::new(1, 2),
        mode: AdmissibilityMode::Local,
        count: CountOptions { shards: 4, ..CountOptions::default() },
    };
    print!("{}", sweep_csv(&sweep(&charts, &Sft::golden_mean(), &params), None));
    Ok(())
}
