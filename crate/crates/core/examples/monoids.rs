//! Descriptors, normal forms, finite tables and idempotents.
use soficlab::monoid::{close_fragment, FiniteMonoid, Monoid, DEFAULT_FRAGMENT_CAP};

fn main() -> soficlab::Result<()> {
    let bicyclic: Monoid = "bicyclic".parse()?;
    let p = bicyclic.parse_element("p")?;
    let q = bicyclic.parse_element("q")?;
    println!("pq = {}", bicyclic.multiply(&p, &q)?);
    println!("qp = {}", bicyclic.multiply(&q, &p)?);

    let ball = close_fragment(&bicyclic, &[p, q], 2, DEFAULT_FRAGMENT_CAP)?;
    let labels: Vec<String> = ball.elements().iter().map(ToString::to_string).collect();
    println!("radius-2 ball: {}", labels.join(" "));

    let poly: Monoid = "polyZ".parse()?;
    let sq = poly.parse_element("X^2")?;
    let affine = poly.parse_element("2X+1")?;
    println!("X^2 o (2X+1) = {}", poly.multiply(&sq, &affine)?);

    for order in 1..=4 {
        let all = FiniteMonoid::enumerate_up_to_iso(order);
        let groups = all.iter().filter(|m| m.is_group()).count();
        println!("order {order}: {} monoids, {groups} groups", all.len());
    }

    let boolean = FiniteMonoid::bool_mul();
    if let Some(trace) = boolean.frobenius_idempotent(0) {
        println!("{{0,1}} under *: a={} m={} t={} e={}", trace.element, trace.index, trace.period, trace.idempotent);
    }
    Ok(())
}
