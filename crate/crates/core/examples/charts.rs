//! The chart constructors and their quality verdicts.
use soficlab::chart::{cyclic_chart, polynomial_chart, product_chart, random_perm_chart, saturating_chart};
use soficlab::monoid::IntPolynomial;

fn main() -> soficlab::Result<()> {
    let charts = [
        ("cyclic n=10, K=-2..2", cyclic_chart(10, &[-2, -1, 0, 1, 2])?),
        ("saturating n=10, K={0,1}", saturating_chart(10, &[0, 1])?),
        (
            "evaluation p=7, K={X, X^2, 2X+1}",
            polynomial_chart(7, &["X^2".parse::<IntPolynomial>()?, "2X+1".parse()?])?,
        ),
        ("random permutations d=100, k=2, L=3", random_perm_chart(100, 2, 3, 7)?),
        (
            "product of cyclic n=4 and n=5",
            product_chart(&[cyclic_chart(4, &[0, 1])?, cyclic_chart(5, &[0, 1])?], 1000)?,
        ),
    ];
    for (name, chart) in &charts {
        let report = chart.quality()?;
        println!("{name}: |K| = {}, sm3 = {}", chart.len(), report.sm3_separation);
        println!("  {}", report.verdict());
    }
    println!("{}", charts[0].1.to_json().lines().take(4).collect::<Vec<_>>().join("\n"));
    Ok(())
}
