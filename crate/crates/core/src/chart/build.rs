use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Chart;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::monoid::{close_fragment, Element, IntPolynomial, Monoid};
use crate::transformation::{product_embed, Transformation};

/// Default cap on the carrier size of product charts.
pub const DEFAULT_PRODUCT_CAP: usize = 1_000_000;

/// Puts the identity first when the caller's list omits it.
fn with_identity(identity: Element, mut elements: Vec<Element>) -> (Vec<Element>, usize) {
    match elements.iter().position(|e| *e == identity) {
        Some(pos) => (elements, pos),
        None => {
            elements.insert(0, identity);
            (elements, 0)
        }
    }
}

/// Translation chart for `(ℤ, +)`: `σ(m)(v) = (v + m) mod n`.
pub fn cyclic_chart(n: usize, ks: &[i64]) -> Result<Chart> {
    if n == 0 {
        return Err(Error::Precondition("cyclic chart needs n >= 1".into()));
    }
    let (elements, identity) = with_identity(Element::Int(0), ks.iter().map(|&k| Element::Int(k)).collect());
    let sigma = elements
        .iter()
        .map(|e| {
            let Element::Int(m) = e else { unreachable!() };
            let shift = m.rem_euclid(n as i64) as usize;
            Transformation::from_fn(n, |v| (v + shift) % n)
        })
        .collect::<Result<Vec<_>>>()?;
    Chart::new(Monoid::IntAdd, elements, identity, sigma, None)
}

/// Saturating chart for `(ℕ, +)`: `σ(m)(v) = min(v + m, n − 1)`.
///
/// The maps compose exactly, and `σ(m)` collapses `m + 1` points onto `n − 1`.
pub fn saturating_chart(n: usize, ks: &[u64]) -> Result<Chart> {
    let max = ks.iter().copied().max().unwrap_or(0);
    if n == 0 || n as u64 <= max {
        return Err(Error::Precondition(format!(
            "saturating chart needs n > max(K) = {max}, got n = {n}"
        )));
    }
    let (elements, identity) = with_identity(Element::Nat(0), ks.iter().map(|&k| Element::Nat(k)).collect());
    let sigma = elements
        .iter()
        .map(|e| {
            let Element::Nat(m) = e else { unreachable!() };
            Transformation::from_fn(n, |v| (v + *m as usize).min(n - 1))
        })
        .collect::<Result<Vec<_>>>()?;
    Chart::new(Monoid::NatAdd, elements, identity, sigma, None)
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// Evaluation chart for the composition monoid `ℤ[X] ∖ ℤ` on the field `F_p`.
///
/// Every polynomial must stay non-constant after reduction mod `p`, and no two
/// members of `K` (the identity `X` included) may coincide mod `p`; otherwise the fiber and root
/// counting bounds do not apply and the chart is rejected.
pub fn polynomial_chart(p: u64, ks: &[IntPolynomial]) -> Result<Chart> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if p > u32::MAX as u64 {
        return Err(Error::Precondition(format!("prime {p} too large for a carrier")));
    }
    for poly in ks {
        if poly.is_constant() {
            return Err(Error::ConstantPolynomial(poly.to_string()));
        }
    }
    let (elements, identity) = with_identity(
        Element::Poly(IntPolynomial::x()),
        ks.iter().cloned().map(Element::Poly).collect(),
    );
    let mut reduced: Vec<(Vec<u64>, &IntPolynomial)> = Vec::with_capacity(elements.len());
    for e in &elements {
        let Element::Poly(poly) = e else { unreachable!() };
        let residue = poly.reduce_mod(p);
        if residue.len() <= 1 {
            return Err(Error::Precondition(format!("{poly} is constant modulo {p}")));
        }
        if let Some((_, other)) = reduced.iter().find(|(r, _)| *r == residue) {
            return Err(Error::Precondition(format!("{poly} and {other} coincide modulo {p}")));
        }
        reduced.push((residue, poly));
    }
    let d = p as usize;
    let sigma = elements
        .iter()
        .map(|e| {
            let Element::Poly(poly) = e else { unreachable!() };
            Transformation::from_fn(d, |a| poly.eval_mod(a as u64, p) as usize)
        })
        .collect::<Result<Vec<_>>>()?;
    Chart::new(Monoid::PolyZ, elements, identity, sigma, None)
}

/// Random permutation chart for the free monoid on `k` letters.
///
/// Each letter gets an independent uniform permutation of `{0, …, d-1}`
/// drawn from a ChaCha8 stream seeded with `seed`, and every word of length
/// at most `max_len` is mapped to the composition of its letters. `K` is
/// listed breadth-first.
pub fn random_perm_chart(d: usize, k: usize, max_len: usize, seed: u64) -> Result<Chart> {
    if d == 0 || k == 0 || max_len == 0 {
        return Err(Error::Precondition("random chart needs d, k, L >= 1".into()));
    }
    if k > 26 {
        return Err(Error::Precondition("at most 26 generators".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters: Vec<Transformation> = (0..k)
        .map(|_| Transformation::random_permutation(d, &mut rng))
        .collect();
    let monoid = Monoid::Free(k);
    let generators: Vec<Element> = (0..k as u8).map(|l| Element::Word(vec![l])).collect();
    let fragment = close_fragment(&monoid, &generators, max_len, usize::MAX)?;
    let elements = fragment.elements().to_vec();
    let sigma = elements
        .iter()
        .map(|e| {
            let Element::Word(word) = e else { unreachable!() };
            word.iter().try_fold(Transformation::identity(d), |acc, &l| {
                acc.compose(&letters[l as usize])
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Chart::new(monoid, elements, fragment.identity_index(), sigma, Some(seed))
}

/// Product chart over `product(M₁, …, Mₙ)`.
///
/// The charts must list the same number of elements with the identity at the
/// same position; element `i` of the product is the tuple of the components'
/// `i`-th elements and `σ(k) = Φ(σ₁(k₁), …, σₙ(kₙ))`.
pub fn product_chart(charts: &[Chart], cap: usize) -> Result<Chart> {
    let first = charts.first().ok_or(Error::EmptyProduct)?;
    let len = first.len();
    let identity = first.identity_position();
    for c in charts {
        if c.len() != len || c.identity_position() != identity {
            return Err(Error::Precondition(
                "product charts must align on a common K with the identity at the same position".into(),
            ));
        }
    }
    let total = charts
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.d()))
        .unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::cap("product carrier", total, cap as u64));
    }
    let monoid = Monoid::Product(charts.iter().map(|c| c.monoid().clone()).collect());
    let elements = (0..len)
        .map(|i| Element::Tuple(charts.iter().map(|c| c.elements()[i].clone()).collect()))
        .collect();
    let sigma = (0..len)
        .map(|i| {
            let factors: Vec<&Transformation> = charts.iter().map(|c| &c.sigma()[i]).collect();
            product_embed(&factors)
        })
        .collect::<Result<Vec<_>>>()?;
    let chart = Chart::new(monoid, elements, identity, sigma, None)?;
    check_product_bounds(&chart, charts)?;
    Ok(chart)
}

/// The product defect is bounded by `1 − ∏(1 − defectᵢ)` and the product
/// fiber bound by `∏ Δᵢ`, with equality when the worst fibers line up.
fn check_product_bounds(product: &Chart, charts: &[Chart]) -> Result<()> {
    let report = product.quality()?;
    let mut survive = Rational::from_integer(1);
    let mut delta = 1u64;
    for c in charts {
        let r = c.quality()?;
        survive *= Rational::from_integer(1) - r.sm2_defect;
        delta = delta.saturating_mul(r.sm4_delta);
    }
    assert!(
        report.sm2_defect <= Rational::from_integer(1) - survive,
        "product defect exceeds the componentwise bound"
    );
    assert!(report.sm4_delta <= delta, "product fiber exceeds the componentwise bound");
    Ok(())
}

/// Appends `extra` elements, each mapped to the identity.
pub fn extend_by_identity(chart: &Chart, extra: &[Element]) -> Result<Chart> {
    let mut elements = chart.elements().to_vec();
    let mut sigma = chart.sigma().to_vec();
    for e in extra {
        if elements.contains(e) {
            return Err(Error::Precondition(format!("duplicate element {e}")));
        }
        elements.push(e.clone());
        sigma.push(Transformation::identity(chart.d()));
    }
    Chart::new(
        chart.monoid().clone(),
        elements,
        chart.identity_position(),
        sigma,
        chart.seed(),
    )
}
