//! Subshifts of finite type and their window languages.
use soficlab::monoid::{Element, FiniteMonoid, Monoid};
use soficlab::shift::{local_language, AdmissibilityMode, Alphabet, Pattern, Sft, DEFAULT_PATTERN_CAP};

fn main() -> soficlab::Result<()> {
    let golden = Sft::golden_mean();
    println!("{}", serde_json::to_string(&golden.to_file(Some(&Monoid::IntAdd)))?);
    for window in [vec![0, 1], vec![-1, 0, 1], vec![0, 1, 2, 3]] {
        let w: Vec<Element> = window.iter().map(|&i| Element::Int(i)).collect();
        let lang = local_language(&golden, &Monoid::IntAdd, &w, AdmissibilityMode::Local, DEFAULT_PATTERN_CAP)?;
        println!("golden mean on {window:?}: {} patterns", lang.len());
    }

    // {0,1} under *, forbidding x(0) = 0
    let a = Alphabet::new(2)?;
    let sft = Sft::new(a, vec![Pattern::new(vec![Element::Index(0)], vec![0], a)?]);
    let m = Monoid::Finite(FiniteMonoid::bool_mul());
    let window = [Element::Index(1), Element::Index(0)];
    for mode in [AdmissibilityMode::Local, AdmissibilityMode::Exact] {
        let lang = local_language(&sft, &m, &window, mode, DEFAULT_PATTERN_CAP)?;
        println!("{mode}: {:?}", lang.patterns());
    }
    Ok(())
}
