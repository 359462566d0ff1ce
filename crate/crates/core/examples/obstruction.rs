//! Why idempotents force large fibers: certificates on a few charts.
use soficlab::chart::{idempotent_obstruction, saturating_chart, Chart};
use soficlab::monoid::{Element, FiniteMonoid, Monoid};
use soficlab::transformation::Transformation;

fn show(chart: &Chart) -> soficlab::Result<()> {
    for pos in chart.idempotent_positions() {
        let cert = idempotent_obstruction(chart, pos)?;
        println!(
            "{} on d={}: |D'|={} |D''|={} implied Delta >= {} (witness fiber {:?}), eps={}, (1-eps)/eps={:?}",
            cert.element,
            cert.d,
            cert.fixed_points,
            cert.stable_points,
            cert.implied_delta,
            cert.witness_fiber,
            cert.epsilon,
            cert.tension_bound.map(|r| r.to_string())
        );
    }
    Ok(())
}

fn main() -> soficlab::Result<()> {
    // {0,1} under multiplication: 0 is an idempotent
    for d in [10, 100, 1000] {
        let zero = Transformation::from_fn(d, |v| if v < d / 10 { v } else { 0 })?;
        let chart = Chart::new(
            Monoid::Finite(FiniteMonoid::bool_mul()),
            vec![Element::Index(1), Element::Index(0)],
            0,
            vec![Transformation::identity(d), zero],
            None,
        )?;
        show(&chart)?;
    }
    // the saturating chart of (N, +) lists no idempotent besides 0
    println!("saturating: {:?}", saturating_chart(10, &[0, 1, 2])?.idempotent_positions());
    Ok(())
}
