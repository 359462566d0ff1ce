use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::{checked_power, mixed_radix_digits, Sft};
use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid};

/// Default cap on the number of patterns or configurations enumerated.
pub const DEFAULT_PATTERN_CAP: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AdmissibilityMode {
    /// Restrictions of genuine configurations of `A^M` (finite monoids only).
    #[serde(rename = "exact")]
    Exact,
    /// No forbidden translate visible inside the window; over-admits.
    #[serde(rename = "local-approximate")]
    Local,
}

impl fmt::Display for AdmissibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdmissibilityMode::Exact => "exact",
            AdmissibilityMode::Local => "local-approximate",
        })
    }
}

/// Admissible patterns over an ordered window, sorted in mixed-radix order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalLanguage {
    window: Vec<Element>,
    patterns: Vec<Vec<u32>>,
    mode: AdmissibilityMode,
    skipped_translates: usize,
}

impl LocalLanguage {
    pub fn window(&self) -> &[Element] {
        &self.window
    }

    pub fn patterns(&self) -> &[Vec<u32>] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn mode(&self) -> AdmissibilityMode {
        self.mode
    }

    /// Forbidden-pattern placements that could not be resolved and were
    /// ignored; positive only for monoids without a right-division solver.
    pub fn skipped_translates(&self) -> usize {
        self.skipped_translates
    }

    pub fn contains(&self, pattern: &[u32]) -> bool {
        self.patterns.binary_search_by(|p| p.as_slice().cmp(pattern)).is_ok()
    }
}

/// A forbidden pattern placed inside the window: window positions and values.
type Occurrence = (Vec<usize>, Vec<u32>);

/// Patterns over `window` allowed by `sft`.
///
/// In [`AdmissibilityMode::Local`] a pattern is rejected when some forbidden
/// pattern `p`, translated to `m` with all of `S·m` inside the window, is
/// matched. Translates are found by solving `s₀·m = w` for the first support
/// point `s₀` and each window point `w`. Where no solver exists (`polyZ`)
/// only the window elements themselves are tried as translates and each
/// unresolved `(p, w)` pair is counted in `skipped_translates`.
///
/// [`AdmissibilityMode::Exact`] enumerates all of `A^M` for a finite monoid
/// and restricts the configurations that avoid every forbidden pattern.
pub fn local_language(
    sft: &Sft,
    monoid: &Monoid,
    window: &[Element],
    mode: AdmissibilityMode,
    cap: usize,
) -> Result<LocalLanguage> {
    let mut index = HashMap::with_capacity(window.len());
    for (i, w) in window.iter().enumerate() {
        if !monoid.contains(w) {
            return Err(Error::ForeignElement {
                element: w.to_string(),
                monoid: monoid.to_string(),
            });
        }
        if index.insert(w, i).is_some() {
            return Err(Error::Precondition(format!("repeated window point {w}")));
        }
    }
    for p in sft.forbidden() {
        for s in p.support() {
            if !monoid.contains(s) {
                return Err(Error::ForeignElement {
                    element: s.to_string(),
                    monoid: monoid.to_string(),
                });
            }
        }
    }
    match mode {
        AdmissibilityMode::Local => local_mode(sft, monoid, window, &index, cap),
        AdmissibilityMode::Exact => exact_mode(sft, monoid, window, cap),
    }
}

fn local_mode(
    sft: &Sft,
    monoid: &Monoid,
    window: &[Element],
    index: &HashMap<&Element, usize>,
    cap: usize,
) -> Result<LocalLanguage> {
    let a = sft.alphabet().size();
    let total = checked_power(a, window.len()).filter(|&t| t <= cap).ok_or_else(|| {
        Error::cap("local language", format!("{a}^{} patterns", window.len()), cap as u64)
    })?;

    let mut skipped = 0usize;
    let mut occurrences: HashSet<Occurrence> = HashSet::new();
    for p in sft.forbidden() {
        let s0 = &p.support()[0];
        let mut translates: BTreeSet<Element> = BTreeSet::new();
        for w in window {
            match monoid.right_divisors(s0, w)? {
                Some(ms) => translates.extend(ms),
                None => {
                    skipped += 1;
                    translates.extend(window.iter().cloned());
                }
            }
        }
        for m in &translates {
            let positions = p
                .support()
                .iter()
                .map(|s| Ok(index.get(&monoid.multiply(s, m)?).copied()))
                .collect::<Result<Option<Vec<usize>>>>()?;
            if let Some(positions) = positions {
                occurrences.insert((positions, p.values().to_vec()));
            }
        }
    }
    let mut occurrences: Vec<Occurrence> = occurrences.into_iter().collect();
    occurrences.sort();

    let patterns = (0..total)
        .map(|i| mixed_radix_digits(a, window.len(), i))
        .filter(|q| !occurrences.iter().any(|(pos, vals)| matches(q, pos, vals)))
        .collect();
    Ok(LocalLanguage {
        window: window.to_vec(),
        patterns,
        mode: AdmissibilityMode::Local,
        skipped_translates: skipped,
    })
}

fn matches(q: &[u32], positions: &[usize], values: &[u32]) -> bool {
    positions.iter().zip(values).all(|(&i, &v)| q[i] == v)
}

fn exact_mode(sft: &Sft, monoid: &Monoid, window: &[Element], cap: usize) -> Result<LocalLanguage> {
    let fm = monoid.as_finite().ok_or_else(|| {
        Error::Precondition(format!("exact admissibility needs a finite monoid, got {monoid}"))
    })?;
    let a = sft.alphabet().size();
    let n = fm.order();
    let total = checked_power(a, n)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::cap("configuration space", format!("{a}^{n} configurations"), cap as u64))?;
    let as_index = |e: &Element| match e {
        Element::Index(i) => *i,
        _ => unreachable!("finite monoid elements are indices"),
    };
    let mut occurrences: Vec<Occurrence> = Vec::new();
    for p in sft.forbidden() {
        for m in 0..n {
            let positions = p.support().iter().map(|s| fm.mul(as_index(s), m)).collect();
            occurrences.push((positions, p.values().to_vec()));
        }
    }
    let window: Vec<usize> = window.iter().map(as_index).collect();
    let mut patterns = BTreeSet::new();
    for i in 0..total {
        let x = mixed_radix_digits(a, n, i);
        if occurrences.iter().any(|(pos, vals)| matches(&x, pos, vals)) {
            continue;
        }
        patterns.insert(window.iter().map(|&w| x[w]).collect::<Vec<u32>>());
    }
    Ok(LocalLanguage {
        window: window.into_iter().map(Element::Index).collect(),
        patterns: patterns.into_iter().collect(),
        mode: AdmissibilityMode::Exact,
        skipped_translates: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{FiniteMonoid, IntPolynomial};
    use crate::shift::{Alphabet, Pattern};
    use proptest::prelude::*;

    fn ints(xs: &[i64]) -> Vec<Element> {
        xs.iter().map(|&x| Element::Int(x)).collect()
    }

    #[test]
    fn full_shift_admits_everything() {
        let sft = Sft::full_shift(Alphabet::new(3).unwrap());
        let lang = local_language(&sft, &Monoid::IntAdd, &ints(&[0, 1, 5]), AdmissibilityMode::Local, DEFAULT_PATTERN_CAP).unwrap();
        assert_eq!(lang.len(), 27);
    }

    #[test]
    fn golden_mean_on_two_points() {
        let lang = local_language(
            &Sft::golden_mean(),
            &Monoid::IntAdd,
            &ints(&[0, 1]),
            AdmissibilityMode::Local,
            DEFAULT_PATTERN_CAP,
        )
        .unwrap();
        assert_eq!(lang.patterns(), &[vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert!(!lang.contains(&[1, 1]));
    }

    #[test]
    fn golden_mean_on_three_points() {
        // 000 001 010 100 101
        let lang = local_language(
            &Sft::golden_mean(),
            &Monoid::IntAdd,
            &ints(&[-1, 0, 1]),
            AdmissibilityMode::Local,
            DEFAULT_PATTERN_CAP,
        )
        .unwrap();
        assert_eq!(lang.len(), 5);
    }

    #[test]
    fn bool_mul_exact_language() {
        let m = Monoid::Finite(FiniteMonoid::bool_mul());
        let a = Alphabet::new(2).unwrap();
        let sft = Sft::new(a, vec![Pattern::new(vec![Element::Index(0)], vec![1], a).unwrap()]);
        let window = [Element::Index(1), Element::Index(0)];
        let exact = local_language(&sft, &m, &window, AdmissibilityMode::Exact, DEFAULT_PATTERN_CAP).unwrap();
        assert_eq!(exact.patterns(), &[vec![0, 0], vec![1, 0]]);
        let local = local_language(&sft, &m, &window, AdmissibilityMode::Local, DEFAULT_PATTERN_CAP).unwrap();
        assert_eq!(local.patterns(), exact.patterns());
    }

    #[test]
    fn exact_mode_requires_a_finite_monoid() {
        assert!(local_language(
            &Sft::golden_mean(),
            &Monoid::IntAdd,
            &ints(&[0]),
            AdmissibilityMode::Exact,
            DEFAULT_PATTERN_CAP
        )
        .is_err());
    }

    #[test]
    fn polynomial_translates_are_counted_as_skipped() {
        let m = Monoid::PolyZ;
        let a = Alphabet::new(2).unwrap();
        let x = Element::Poly(IntPolynomial::x());
        let sq = Element::Poly("X^2".parse().unwrap());
        let sft = Sft::new(a, vec![Pattern::new(vec![x.clone(), sq.clone()], vec![1, 1], a).unwrap()]);
        let lang = local_language(&sft, &m, &[x, sq], AdmissibilityMode::Local, DEFAULT_PATTERN_CAP).unwrap();
        assert_eq!(lang.skipped_translates(), 2);
        assert_eq!(lang.len(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let sft = Sft::full_shift(Alphabet::new(2).unwrap());
        let err = local_language(&sft, &Monoid::IntAdd, &ints(&[0, 1, 2]), AdmissibilityMode::Local, 4).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 4, .. }));
    }

    fn random_sft(order_tables: usize, seed: u64) -> (Monoid, Sft) {
        use rand::{Rng, SeedableRng};
        let monoids: Vec<_> = (1..=3).flat_map(FiniteMonoid::enumerate_up_to_iso).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let fm = monoids[order_tables % monoids.len()].clone();
        let n = fm.order();
        let a = Alphabet::new(2).unwrap();
        let count = rng.gen_range(0..3);
        let forbidden = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=n.min(2));
                let mut support: Vec<usize> = (0..n).collect();
                for i in 0..len {
                    let j = rng.gen_range(i..n);
                    support.swap(i, j);
                }
                support.truncate(len);
                let values = (0..len).map(|_| rng.gen_range(0..2)).collect();
                Pattern::new(support.into_iter().map(Element::Index).collect(), values, a).unwrap()
            })
            .collect();
        (Monoid::Finite(fm), Sft::new(a, forbidden))
    }

    proptest! {
        #[test]
        fn exact_language_is_contained_in_local(which in 0usize..100, seed in any::<u64>(), mask in 1u32..8) {
            let (m, sft) = random_sft(which, seed);
            let n = m.as_finite().unwrap().order();
            let window: Vec<Element> = (0..n).filter(|i| mask & (1 << i) != 0).map(Element::Index).collect();
            prop_assume!(!window.is_empty());
            let exact = local_language(&sft, &m, &window, AdmissibilityMode::Exact, DEFAULT_PATTERN_CAP).unwrap();
            let local = local_language(&sft, &m, &window, AdmissibilityMode::Local, DEFAULT_PATTERN_CAP).unwrap();
            for p in exact.patterns() {
                prop_assert!(local.contains(p));
            }
        }
    }
}
