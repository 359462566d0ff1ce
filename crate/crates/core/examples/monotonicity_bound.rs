//! The certified upper bound for a proper subshift, next to the exact count.
use num_rational::Ratio;
use soficlab::chart::cyclic_chart;
use soficlab::entropy::{count_good_traces, monotonicity_report, CountOptions, GoodnessParams, MicrostateSpace};
use soficlab::shift::{AdmissibilityMode, Sft, DEFAULT_PATTERN_CAP};

fn main() -> soficlab::Result<()> {
    let sft = Sft::golden_mean();
    for (n, delta) in [(12, Ratio::new(1, 1000)), (12, Ratio::new(1, 20)), (12, Ratio::new(1, 6)), (40, Ratio::new(1, 100))] {
        let chart = cyclic_chart(n, &[0, 1])?;
        let f = chart.positions_of(&["0".into(), "1".into()])?;
        let report = monotonicity_report(&chart, &sft, &f, delta)?;
        let exact = if n <= 20 {
            let space = MicrostateSpace::new(&chart, &sft, &f, AdmissibilityMode::Local, DEFAULT_PATTERN_CAP)?;
            let params = GoodnessParams::new(f.clone(), delta)?;
            count_good_traces(&space, &params, &CountOptions::default())?.count.to_string()
        } else {
            "-".into()
        };
        println!(
            "n={n} delta={delta}: t={} beta0={:.5} H(t)={:.5} bound={:?} exact={exact} full=2^{n}",
            report.t, report.beta0, report.stirling_beta, report.certified_upper_bound
        );
        if !report.hypotheses_met {
            println!("  unmet: {}", report.unmet.join("; "));
        }
    }
    Ok(())
}
