use std::collections::{HashMap, HashSet};

use super::{Element, Monoid};
use crate::error::{Error, Result};

/// Default bound on the number of elements a fragment may hold.
pub const DEFAULT_FRAGMENT_CAP: usize = 2048;

const NO_PRODUCT: u32 = u32::MAX;

/// A finite window onto a (possibly infinite) monoid.
///
/// Holds distinct elements, the identity among them, and records `i · j = k`
/// whenever the product of two members is itself a member.
#[derive(Clone, Debug)]
pub struct MonoidFragment {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    products: Vec<u32>,
    identity: usize,
}

impl MonoidFragment {
    /// Builds a fragment from an explicit element list.
    ///
    /// The identity is prepended if the list does not contain it.
    pub fn from_elements(monoid: &Monoid, elements: Vec<Element>) -> Result<Self> {
        let one = monoid.identity();
        let mut list = Vec::with_capacity(elements.len() + 1);
        if !elements.contains(&one) {
            list.push(one);
        }
        list.extend(elements);
        Self::build(monoid, list)
    }

    fn build(monoid: &Monoid, elements: Vec<Element>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            monoid.check(e)?;
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Precondition(format!("duplicate element {e}")));
            }
        }
        let n = elements.len();
        let mut products = vec![NO_PRODUCT; n * n];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                let xy = monoid.multiply(x, y)?;
                if let Some(&k) = index.get(&xy) {
                    products[i * n + j] = k as u32;
                }
            }
        }
        let identity = index[&monoid.identity()];
        Ok(MonoidFragment {
            elements,
            index,
            products,
            identity,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Index of `elements[i] · elements[j]` when it lies in the fragment.
    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.elements.len();
        match self.products[i * n + j] {
            NO_PRODUCT => None,
            k => Some(k as usize),
        }
    }
}

/// The identity together with every product of at most `radius` generators.
///
/// Elements are listed breadth-first: first the identity, then products of
/// length 1, 2, ... where each new element is `x · g` for `x` from the
/// previous layer (in order) and `g` running over `generators` in the order
/// given.
pub fn close_fragment(
    monoid: &Monoid,
    generators: &[Element],
    radius: usize,
    cap: usize,
) -> Result<MonoidFragment> {
    let mut elements = vec![monoid.identity()];
    let mut seen: HashSet<Element> = HashSet::from([monoid.identity()]);
    let mut layer = vec![monoid.identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &layer {
            for g in generators {
                let xg = monoid.multiply(x, g)?;
                if seen.insert(xg.clone()) {
                    if elements.len() >= cap {
                        return Err(Error::cap("fragment", format!("more than {cap} elements"), cap as u64));
                    }
                    elements.push(xg.clone());
                    next.push(xg);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    MonoidFragment::build(monoid, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::BicyclicElement;

    fn labels(f: &MonoidFragment) -> Vec<String> {
        f.elements().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn naturals_radius_three() {
        let frag = close_fragment(&Monoid::NatAdd, &[Element::Nat(1)], 3, 100).unwrap();
        assert_eq!(labels(&frag), ["0", "1", "2", "3"]);
        assert_eq!(frag.product(1, 2), Some(3));
        assert_eq!(frag.product(2, 2), None);
    }

    #[test]
    fn free_monoid_radius_two() {
        let m = Monoid::Free(2);
        let gens = [m.parse_element("a").unwrap(), m.parse_element("b").unwrap()];
        let frag = close_fragment(&m, &gens, 2, 100).unwrap();
        assert_eq!(labels(&frag), ["1", "a", "b", "aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn bicyclic_radius_two_by_brute_force() {
        // Every word of length <= 2 over {p, q}, reduced to normal form.
        let letters = [BicyclicElement::P, BicyclicElement::Q];
        let mut expected = vec![BicyclicElement::IDENTITY];
        for &x in &letters {
            expected.push(x);
        }
        for &x in &letters {
            for &y in &letters {
                expected.push(x.mul(y));
            }
        }
        expected.sort();
        expected.dedup();

        let gens = [Element::Bicyclic(BicyclicElement::P), Element::Bicyclic(BicyclicElement::Q)];
        let frag = close_fragment(&Monoid::Bicyclic, &gens, 2, 100).unwrap();
        let mut got: Vec<_> = frag
            .elements()
            .iter()
            .map(|e| match e {
                Element::Bicyclic(b) => *b,
                _ => unreachable!(),
            })
            .collect();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(frag.len(), 6);
        assert_eq!(labels(&frag), ["1", "p", "q", "p^2", "qp", "q^2"]);
    }

    #[test]
    fn cap_is_enforced() {
        let m = Monoid::Free(3);
        let gens: Vec<_> = ["a", "b", "c"].iter().map(|s| m.parse_element(s).unwrap()).collect();
        let err = close_fragment(&m, &gens, 4, 20).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 20, .. }));
    }

    #[test]
    fn free_monoid_sizes_and_monotonicity() {
        for k in 1..=3usize {
            let m = Monoid::Free(k);
            let gens: Vec<_> = (0..k as u8).map(|l| Element::Word(vec![l])).collect();
            let mut previous: Option<Vec<Element>> = None;
            for r in 0..=4usize {
                let frag = close_fragment(&m, &gens, r, 10_000).unwrap();
                let expected = if k == 1 { r + 1 } else { (k.pow(r as u32 + 1) - 1) / (k - 1) };
                assert_eq!(frag.len(), expected);
                if let Some(prev) = previous {
                    assert_eq!(&frag.elements()[..prev.len()], prev.as_slice());
                }
                previous = Some(frag.elements().to_vec());
            }
        }
    }

    #[test]
    fn from_elements_prepends_identity_and_rejects_duplicates() {
        let m = Monoid::IntAdd;
        let frag = MonoidFragment::from_elements(&m, vec![Element::Int(1), Element::Int(-1)]).unwrap();
        assert_eq!(frag.identity_index(), 0);
        assert_eq!(frag.product(1, 2), Some(0));
        assert!(MonoidFragment::from_elements(&m, vec![Element::Int(1), Element::Int(1)]).is_err());
    }
}
