//! Hamming distances, the product formula and large fibers of near-idempotents.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soficlab::transformation::{product_embed, product_hamming_prediction, Transformation};

fn main() -> soficlab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f1 = Transformation::random_map(5, &mut rng);
    let g1 = Transformation::random_map(5, &mut rng);
    let f2 = Transformation::random_permutation(4, &mut rng);
    let g2 = Transformation::identity(4);

    let h1 = f1.hamming(&g1)?;
    let h2 = f2.hamming(&g2)?;
    let predicted = product_hamming_prediction(&[h1, h2]);
    let measured = product_embed(&[&f1, &f2])?.hamming(&product_embed(&[&g1, &g2])?)?;
    println!("d1 = {}, d2 = {}", h1.ratio(), h2.ratio());
    println!("product: predicted {predicted}, measured {}", measured.ratio());

    // a retraction onto {0, 1} with most points sent to 0
    let f = Transformation::new(vec![0, 1, 0, 0, 0, 1, 0, 0])?;
    if let Some(w) = f.idempotent_fiber_witness() {
        println!(
            "|D'| = {}, |D''| = {}, point {} has fiber {} >= {}",
            w.fixed_points,
            w.stable_points,
            w.point,
            w.fiber,
            w.pigeonhole_bound()
        );
    }
    Ok(())
}
