//! Cellular automata over finite monoids and the injective => surjective check.
use soficlab::monoid::{Element, FiniteMonoid, Monoid};
use soficlab::shift::{ca_full_map, check_equivariance, surjunctivity_check, Alphabet, CellularAutomaton};

fn main() -> soficlab::Result<()> {
    let z3 = FiniteMonoid::cyclic(3)?;
    let a = Alphabet::new(2)?;
    let xor = CellularAutomaton::from_fn(a, vec![Element::Index(0), Element::Index(1)], |w| w[0] ^ w[1])?;
    let map = ca_full_map(&z3, &xor, 1 << 10)?;
    println!(
        "xor on Z/3: image {} of {}, equivariant {}",
        map.image_size(),
        map.len(),
        check_equivariance(&map, &z3)?
    );
    println!("{}", serde_json::to_string(&xor.to_file(Some(&Monoid::Finite(z3.clone()))))?);

    for order in 1..=3 {
        for fm in FiniteMonoid::enumerate_up_to_iso(order) {
            let r = surjunctivity_check(&fm, 2, 2, 1 << 20)?;
            println!(
                "{:?}: {} automata, {} injective, all surjective {}, group {}, idempotent {:?}",
                fm.rows(),
                r.automata,
                r.injective,
                r.all_injective_surjective(),
                r.is_group,
                r.nontrivial_idempotent
            );
        }
    }
    Ok(())
}
