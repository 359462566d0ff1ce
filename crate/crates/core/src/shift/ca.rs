use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{checked_power, mixed_radix_digits, mixed_radix_index, Alphabet};
use crate::error::{Error, Result};
use crate::monoid::{Element, FiniteMonoid, Monoid};

/// Default cap on `|A|^|M|` for full configuration-space maps.
pub const DEFAULT_CONFIGURATION_CAP: usize = 1 << 20;

/// A cellular automaton `τ(x)(m) = μ(s ↦ x(s·m))` given by a memory set and
/// a local rule table indexed in mixed radix over the memory order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellularAutomaton {
    alphabet: Alphabet,
    memory: Vec<Element>,
    rule: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaFile {
    pub alphabet: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<String>,
    pub memory: Vec<String>,
    pub rule: Vec<u32>,
}

impl CellularAutomaton {
    pub fn new(alphabet: Alphabet, memory: Vec<Element>, rule: Vec<u32>) -> Result<Self> {
        if memory.is_empty() {
            return Err(Error::Precondition("memory set must be non-empty".into()));
        }
        for (i, s) in memory.iter().enumerate() {
            if memory[..i].contains(s) {
                return Err(Error::Precondition(format!("repeated memory element {s}")));
            }
        }
        let a = alphabet.size();
        let expected = checked_power(a, memory.len())
            .ok_or_else(|| Error::Precondition("rule table too large".into()))?;
        if rule.len() != expected {
            return Err(Error::Precondition(format!(
                "rule table has {} entries, expected {a}^{} = {expected}",
                rule.len(),
                memory.len()
            )));
        }
        for &v in &rule {
            alphabet.check(v)?;
        }
        Ok(CellularAutomaton { alphabet, memory, rule })
    }

    /// Builds the table by evaluating `mu` on every memory pattern.
    pub fn from_fn(alphabet: Alphabet, memory: Vec<Element>, mu: impl Fn(&[u32]) -> u32) -> Result<Self> {
        let a = alphabet.size();
        let k = memory.len();
        let total = checked_power(a, k).ok_or_else(|| Error::Precondition("rule table too large".into()))?;
        let rule = (0..total).map(|i| mu(&mixed_radix_digits(a, k, i))).collect();
        Self::new(alphabet, memory, rule)
    }

    pub fn identity(alphabet: Alphabet, monoid: &Monoid) -> Self {
        Self::from_fn(alphabet, vec![monoid.identity()], |y| y[0]).expect("valid")
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn memory(&self) -> &[Element] {
        &self.memory
    }

    pub fn rule(&self) -> &[u32] {
        &self.rule
    }

    pub fn local_rule(&self, values: &[u32]) -> u32 {
        self.rule[mixed_radix_index(self.alphabet.size(), values)]
    }

    pub fn to_file(&self, monoid: Option<&Monoid>) -> CaFile {
        CaFile {
            alphabet: self.alphabet.size(),
            monoid: monoid.map(ToString::to_string),
            memory: self.memory.iter().map(ToString::to_string).collect(),
            rule: self.rule.clone(),
        }
    }

    pub fn from_file(file: &CaFile, monoid: &Monoid) -> Result<Self> {
        if let Some(name) = &file.monoid {
            if *name != monoid.to_string() {
                return Err(Error::Precondition(format!(
                    "automaton is over {name}, expected {monoid}"
                )));
            }
        }
        let memory = file
            .memory
            .iter()
            .map(|label| monoid.parse_element(label))
            .collect::<Result<Vec<_>>>()?;
        Self::new(Alphabet::new(file.alphabet)?, memory, file.rule.clone())
    }
}

/// Evaluates `τ` on `output` given configuration values on `input`.
///
/// The input window must contain every `s·m` with `s` in the memory set and
/// `m` in the output window.
pub fn ca_apply_window(
    ca: &CellularAutomaton,
    monoid: &Monoid,
    input: &[Element],
    values: &[u32],
    output: &[Element],
) -> Result<Vec<u32>> {
    if input.len() != values.len() {
        return Err(Error::Precondition(format!(
            "{} input points but {} values",
            input.len(),
            values.len()
        )));
    }
    let x: HashMap<&Element, u32> = input.iter().zip(values.iter().copied()).collect();
    let mut neighbourhood = vec![0u32; ca.memory.len()];
    output
        .iter()
        .map(|m| {
            for (slot, s) in neighbourhood.iter_mut().zip(&ca.memory) {
                let sm = monoid.multiply(s, m)?;
                *slot = *x
                    .get(&sm)
                    .ok_or_else(|| Error::Precondition(format!("input window misses {sm}")))?;
            }
            Ok(ca.local_rule(&neighbourhood))
        })
        .collect()
}

/// A self-map of `A^M` for a finite monoid, configurations indexed in mixed
/// radix with element 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullMap {
    alphabet: usize,
    order: usize,
    images: Vec<u32>,
}

impl FullMap {
    pub fn from_images(alphabet: usize, order: usize, images: Vec<u32>) -> Result<Self> {
        let total = checked_power(alphabet, order)
            .filter(|&t| t <= u32::MAX as usize)
            .ok_or_else(|| Error::Precondition("configuration space too large".into()))?;
        if images.len() != total || images.iter().any(|&y| y as usize >= total) {
            return Err(Error::Precondition(format!(
                "a map on {alphabet}^{order} configurations needs {total} images in range"
            )));
        }
        Ok(FullMap { alphabet, order, images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn image_size(&self) -> usize {
        let mut hit = vec![false; self.images.len()];
        for &y in &self.images {
            hit[y as usize] = true;
        }
        hit.into_iter().filter(|&h| h).count()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_size() == self.images.len()
    }

    pub fn is_injective(&self) -> bool {
        self.is_surjective()
    }
}

fn finite_memory(ca: &CellularAutomaton, fm: &FiniteMonoid) -> Result<Vec<usize>> {
    ca.memory
        .iter()
        .map(|s| match s {
            Element::Index(i) if *i < fm.order() => Ok(*i),
            other => Err(Error::ForeignElement {
                element: other.to_string(),
                monoid: "finite table".into(),
            }),
        })
        .collect()
}

/// The table of `τ` on all of `A^M`.
pub fn ca_full_map(fm: &FiniteMonoid, ca: &CellularAutomaton, cap: usize) -> Result<FullMap> {
    let a = ca.alphabet.size();
    let n = fm.order();
    let total = checked_power(a, n)
        .filter(|&t| t <= cap && t <= u32::MAX as usize)
        .ok_or_else(|| Error::cap("configuration space", format!("{a}^{n} configurations"), cap as u64))?;
    let memory = finite_memory(ca, fm)?;
    // neighbourhoods[m][j] = s_j · m
    let neighbourhoods: Vec<Vec<usize>> = (0..n)
        .map(|m| memory.iter().map(|&s| fm.mul(s, m)).collect())
        .collect();
    let mut y = vec![0u32; n];
    let mut window = vec![0u32; memory.len()];
    let images = (0..total)
        .map(|i| {
            let x = mixed_radix_digits(a, n, i);
            for (m, slot) in y.iter_mut().enumerate() {
                for (w, &sm) in window.iter_mut().zip(&neighbourhoods[m]) {
                    *w = x[sm];
                }
                *slot = ca.local_rule(&window);
            }
            mixed_radix_index(a, &y) as u32
        })
        .collect();
    FullMap::from_images(a, n, images)
}

/// Whether `τ(mx) = m·τ(x)` for every `m ∈ M` and every configuration.
pub fn check_equivariance(map: &FullMap, fm: &FiniteMonoid) -> Result<bool> {
    if map.order != fm.order() {
        return Err(Error::Precondition(format!(
            "map over a monoid of order {}, table has order {}",
            map.order,
            fm.order()
        )));
    }
    let a = map.alphabet;
    let n = map.order;
    // (mx)(m′) = x(m′m)
    let shift = |m: usize, x: &[u32]| -> usize {
        let shifted: Vec<u32> = (0..n).map(|mp| x[fm.mul(mp, m)]).collect();
        mixed_radix_index(a, &shifted)
    };
    for i in 0..map.len() {
        let x = mixed_radix_digits(a, n, i);
        let tx = mixed_radix_digits(a, n, map.apply(i));
        for m in 0..n {
            if map.apply(shift(m, &x)) != shift(m, &tx) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `outer ∘ inner`, with memory `{s′·s : s ∈ S_outer, s′ ∈ S_inner}` listed
/// in first-occurrence order.
pub fn compose_ca(
    monoid: &Monoid,
    outer: &CellularAutomaton,
    inner: &CellularAutomaton,
) -> Result<CellularAutomaton> {
    if outer.alphabet != inner.alphabet {
        return Err(Error::Precondition("automata over different alphabets".into()));
    }
    let mut memory: Vec<Element> = Vec::new();
    let mut slots: Vec<Vec<usize>> = Vec::with_capacity(outer.memory.len());
    for s in &outer.memory {
        let mut row = Vec::with_capacity(inner.memory.len());
        for sp in &inner.memory {
            let prod = monoid.multiply(sp, s)?;
            let pos = match memory.iter().position(|e| *e == prod) {
                Some(pos) => pos,
                None => {
                    memory.push(prod);
                    memory.len() - 1
                }
            };
            row.push(pos);
        }
        slots.push(row);
    }
    CellularAutomaton::from_fn(outer.alphabet, memory, |y| {
        let middle: Vec<u32> = slots
            .iter()
            .map(|row| {
                let inner_window: Vec<u32> = row.iter().map(|&j| y[j]).collect();
                inner.local_rule(&inner_window)
            })
            .collect();
        outer.local_rule(&middle)
    })
}

/// Outcome of checking every automaton with a small memory set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjunctivityReport {
    pub order: usize,
    pub alphabet: usize,
    pub max_memory: usize,
    pub automata: u64,
    pub injective: u64,
    pub surjective: u64,
    pub injective_not_surjective: u64,
    pub non_equivariant: u64,
    pub is_group: bool,
    pub nontrivial_idempotent: Option<usize>,
}

impl SurjunctivityReport {
    pub fn all_injective_surjective(&self) -> bool {
        self.injective_not_surjective == 0
    }
}

fn memory_sets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=max.min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            let Some(i) = (0..size).rev().find(|&i| combo[i] < n - size + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Checks every automaton over `fm` with alphabet size `alphabet` and memory
/// sets of at most `max_memory` elements: equivariance of the induced map and
/// injective ⇒ surjective.
pub fn surjunctivity_check(
    fm: &FiniteMonoid,
    alphabet: usize,
    max_memory: usize,
    cap: usize,
) -> Result<SurjunctivityReport> {
    let a = Alphabet::new(alphabet)?;
    let mut report = SurjunctivityReport {
        order: fm.order(),
        alphabet,
        max_memory,
        automata: 0,
        injective: 0,
        surjective: 0,
        injective_not_surjective: 0,
        non_equivariant: 0,
        is_group: fm.is_group(),
        nontrivial_idempotent: fm.find_nontrivial_idempotent(),
    };
    for memory in memory_sets(fm.order(), max_memory) {
        let table_len = checked_power(alphabet, memory.len()).unwrap_or(usize::MAX);
        let rules = checked_power(alphabet, table_len)
            .filter(|&r| r <= cap)
            .ok_or_else(|| Error::cap("rule enumeration", format!("{alphabet}^{table_len} rules"), cap as u64))?;
        let elements: Vec<Element> = memory.iter().map(|&i| Element::Index(i)).collect();
        for r in 0..rules {
            let rule = mixed_radix_digits(alphabet, table_len, r);
            let ca = CellularAutomaton::new(a, elements.clone(), rule)?;
            let map = ca_full_map(fm, &ca, cap)?;
            report.automata += 1;
            let surjective = map.is_surjective();
            let injective = map.is_injective();
            report.surjective += surjective as u64;
            report.injective += injective as u64;
            report.injective_not_surjective += (injective && !surjective) as u64;
            report.non_equivariant += (!check_equivariance(&map, fm)?) as u64;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn identity_rule_copies_the_window() {
        let ca = CellularAutomaton::identity(two(), &Monoid::IntAdd);
        let input: Vec<Element> = (0..4).map(Element::Int).collect();
        let out = ca_apply_window(&ca, &Monoid::IntAdd, &input, &[0, 1, 1, 0], &input).unwrap();
        assert_eq!(out, vec![0, 1, 1, 0]);
    }

    #[test]
    fn xor_rule_on_integers() {
        let ca = CellularAutomaton::from_fn(two(), vec![Element::Int(0), Element::Int(1)], |y| y[0] ^ y[1]).unwrap();
        assert_eq!(ca.rule(), &[0, 1, 1, 0]);
        let input: Vec<Element> = (0..6).map(Element::Int).collect();
        let x = [0, 1, 1, 0, 1, 0];
        let output: Vec<Element> = (0..5).map(Element::Int).collect();
        let y = ca_apply_window(&ca, &Monoid::IntAdd, &input, &x, &output).unwrap();
        let expected: Vec<u32> = (0..5).map(|m| x[m] ^ x[m + 1]).collect();
        assert_eq!(y, expected);
        let err = ca_apply_window(&ca, &Monoid::IntAdd, &input, &x, &[Element::Int(5)]);
        assert!(err.is_err());
    }

    #[test]
    fn constant_rule_outputs_zero() {
        let ca = CellularAutomaton::from_fn(two(), vec![Element::Int(0)], |_| 0).unwrap();
        let input: Vec<Element> = (0..3).map(Element::Int).collect();
        let out = ca_apply_window(&ca, &Monoid::IntAdd, &input, &[1, 1, 0], &input).unwrap();
        assert_eq!(out, vec![0, 0, 0]);
    }

    #[test]
    fn projection_on_bool_mul() {
        let fm = FiniteMonoid::bool_mul();
        let ca = CellularAutomaton::from_fn(two(), vec![Element::Index(0), Element::Index(1)], |y| y[0]).unwrap();
        let map = ca_full_map(&fm, &ca, DEFAULT_CONFIGURATION_CAP).unwrap();
        assert_eq!(map.image_size(), 2);
        assert!(!map.is_injective());
        assert!(check_equivariance(&map, &fm).unwrap());
    }

    #[test]
    fn identity_full_map_is_bijective() {
        let fm = FiniteMonoid::cyclic(3).unwrap();
        let ca = CellularAutomaton::identity(two(), &Monoid::Finite(fm.clone()));
        let map = ca_full_map(&fm, &ca, DEFAULT_CONFIGURATION_CAP).unwrap();
        assert!(map.is_injective() && map.is_surjective());
        assert_eq!(map.images(), (0..8).collect::<Vec<u32>>().as_slice());
    }

    #[test]
    fn hand_built_map_is_not_equivariant() {
        let fm = FiniteMonoid::bool_mul();
        // swap configurations 01 and 10 only
        let map = FullMap::from_images(2, 2, vec![0, 2, 1, 3]).unwrap();
        assert!(!check_equivariance(&map, &fm).unwrap());
        let id = FullMap::from_images(2, 2, vec![0, 1, 2, 3]).unwrap();
        assert!(check_equivariance(&id, &fm).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let fm = FiniteMonoid::cyclic(4).unwrap();
        let ca = CellularAutomaton::identity(two(), &Monoid::Finite(fm.clone()));
        assert!(matches!(ca_full_map(&fm, &ca, 8), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn composition_matches_table_composition() {
        for order in 1..=3 {
            for fm in FiniteMonoid::enumerate_up_to_iso(order) {
                let m = Monoid::Finite(fm.clone());
                let n = fm.order();
                let first = CellularAutomaton::from_fn(
                    two(),
                    vec![Element::Index(0), Element::Index(n - 1)],
                    |y| y[0] ^ y[1],
                )
                .unwrap_or_else(|_| CellularAutomaton::identity(two(), &m));
                let second = CellularAutomaton::from_fn(two(), vec![Element::Index(n / 2)], |y| 1 - y[0]).unwrap();
                for (outer, inner) in [(&first, &second), (&second, &first), (&first, &first)] {
                    let composed = compose_ca(&m, outer, inner).unwrap();
                    let direct = ca_full_map(&fm, &composed, 1 << 10).unwrap();
                    let mo = ca_full_map(&fm, outer, 1 << 10).unwrap();
                    let mi = ca_full_map(&fm, inner, 1 << 10).unwrap();
                    let chained: Vec<u32> = (0..mi.len()).map(|x| mo.apply(mi.apply(x)) as u32).collect();
                    assert_eq!(direct.images(), chained.as_slice());
                }
            }
        }
    }

    #[test]
    fn surjunctivity_up_to_order_four() {
        for order in 1..=4 {
            for fm in FiniteMonoid::enumerate_up_to_iso(order) {
                let report = surjunctivity_check(&fm, 2, 2, DEFAULT_CONFIGURATION_CAP).unwrap();
                assert!(report.all_injective_surjective());
                assert_eq!(report.non_equivariant, 0);
                assert_eq!(report.is_group, report.nontrivial_idempotent.is_none());
            }
        }
    }

    #[test]
    fn memory_sets_are_all_small_subsets() {
        assert_eq!(memory_sets(3, 2).len(), 6);
        assert_eq!(memory_sets(4, 2).len(), 10);
        assert_eq!(memory_sets(2, 5).len(), 3);
    }

    #[test]
    fn file_round_trip() {
        let m = Monoid::IntAdd;
        let ca = CellularAutomaton::from_fn(two(), vec![Element::Int(0), Element::Int(1)], |y| y[0] ^ y[1]).unwrap();
        let text = serde_json::to_string(&ca.to_file(Some(&m))).unwrap();
        assert_eq!(text, r#"{"alphabet":2,"monoid":"int-add","memory":["0","1"],"rule":[0,1,1,0]}"#);
        let back = CellularAutomaton::from_file(&serde_json::from_str(&text).unwrap(), &m).unwrap();
        assert_eq!(back, ca);
    }
}
