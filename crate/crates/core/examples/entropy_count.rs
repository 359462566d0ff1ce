//! Counting good traces on cyclic charts: full shift and golden mean.
use num_rational::Ratio;
use soficlab::chart::cyclic_chart;
use soficlab::entropy::{count_good_traces, CountOptions, CountStrategy, GoodnessParams, MicrostateSpace};
use soficlab::shift::{AdmissibilityMode, Alphabet, Sft, DEFAULT_PATTERN_CAP};

fn main() -> soficlab::Result<()> {
    let full = Sft::full_shift(Alphabet::new(2)?);
    let golden = Sft::golden_mean();
    for n in [4, 8, 12, 16] {
        let chart = cyclic_chart(n, &[0, 1])?;
        let f = chart.positions_of(&["1".into()])?;
        let params = GoodnessParams::new(f.clone(), Ratio::new(1, 10))?;
        for (name, sft) in [("full", &full), ("golden", &golden)] {
            let space = MicrostateSpace::new(&chart, sft, &f, AdmissibilityMode::Local, DEFAULT_PATTERN_CAP)?;
            let options = CountOptions { shards: 4, ..CountOptions::default() };
            let r = count_good_traces(&space, &params, &options)?;
            let e = r.estimate();
            println!("n={n:>2} {name:>6}: {} traces, {:.4} nats/site ({})", r.count, e.nats, r.method);
        }
    }

    let chart = cyclic_chart(30, &[0, 1])?;
    let space = MicrostateSpace::new(&chart, &golden, &[1], AdmissibilityMode::Local, DEFAULT_PATTERN_CAP)?;
    let params = GoodnessParams::new(vec![1], Ratio::new(1, 10))?;
    let sampled = CountOptions {
        strategy: CountStrategy::Sampled { samples: 20_000, seed: 3 },
        ..CountOptions::default()
    };
    let r = count_good_traces(&space, &params, &sampled)?;
    println!("n=30 golden, sampled: at least {} traces", r.count);
    Ok(())
}
