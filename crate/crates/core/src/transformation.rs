//! Self-maps of a finite carrier `{0, …, d-1}` and the normalized Hamming metric.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A self-map of `{0, …, d-1}`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Transformation {
    image: Vec<u32>,
}

impl Transformation {
    pub fn new(image: Vec<u32>) -> Result<Self> {
        let d = image.len();
        if d == 0 {
            return Err(Error::Precondition("carrier must be non-empty".into()));
        }
        if let Some(&bad) = image.iter().find(|&&v| v as usize >= d) {
            return Err(Error::ImageOutOfRange {
                value: bad as usize,
                carrier: d,
            });
        }
        Ok(Transformation { image })
    }

    pub fn from_fn(d: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::new((0..d).map(|v| f(v) as u32).collect())
    }

    pub fn identity(d: usize) -> Self {
        Transformation {
            image: (0..d as u32).collect(),
        }
    }

    pub fn constant(d: usize, c: usize) -> Self {
        assert!(c < d, "constant {c} outside carrier of size {d}");
        Transformation {
            image: vec![c as u32; d],
        }
    }

    pub fn random_permutation<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        let mut image: Vec<u32> = (0..d as u32).collect();
        image.shuffle(rng);
        Transformation { image }
    }

    pub fn random_map<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        Transformation {
            image: (0..d).map(|_| rng.gen_range(0..d as u32)).collect(),
        }
    }

    pub fn carrier(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.image[v] as usize
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub(crate) fn image_mut(&mut self) -> &mut [u32] {
        &mut self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(v, &w)| v == w as usize)
    }

    fn same_carrier(&self, other: &Self) -> Result<()> {
        if self.carrier() != other.carrier() {
            return Err(Error::CarrierMismatch {
                left: self.carrier(),
                right: other.carrier(),
            });
        }
        Ok(())
    }

    /// `self ∘ other`, i.e. `v ↦ self(other(v))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_carrier(other)?;
        Ok(Transformation {
            image: other.image.iter().map(|&w| self.image[w as usize]).collect(),
        })
    }

    pub fn hamming(&self, other: &Self) -> Result<HammingValue> {
        self.same_carrier(other)?;
        Ok(HammingValue::new(self.disagreements(other), self.carrier() as u64))
    }

    pub(crate) fn disagreements(&self, other: &Self) -> u64 {
        self.image
            .iter()
            .zip(&other.image)
            .filter(|(a, b)| a != b)
            .count() as u64
    }

    /// `|f⁻¹(v)|` for every `v`.
    pub fn fiber_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.carrier()];
        for &w in &self.image {
            sizes[w as usize] += 1;
        }
        sizes
    }

    pub fn max_fiber(&self) -> u64 {
        self.fiber_sizes().into_iter().max().unwrap_or(0)
    }

    /// Large-fiber witness for a near-idempotent map.
    ///
    /// With `D′ = {v : f(v) = v}` and `D″ = {v : f(v) = f²(v)}` we have
    /// `f(D″) ⊆ D′`, so some `v* ∈ f(D″)` has `|f⁻¹(v*)| ≥ |D″| / |D′|`.
    /// Returns the point of `f(D″)` with the largest fiber (lowest index on
    /// ties), or `None` when `D″` is empty.
    pub fn idempotent_fiber_witness(&self) -> Option<FiberWitness> {
        let fibers = self.fiber_sizes();
        let fixed_points = (0..self.carrier()).filter(|&v| self.apply(v) == v).count() as u64;
        let mut stable_points = 0u64;
        let mut best: Option<(u64, usize)> = None;
        for v in 0..self.carrier() {
            let fv = self.apply(v);
            if self.apply(fv) == fv {
                stable_points += 1;
                let fiber = fibers[fv];
                if best.is_none_or(|(f, p)| fiber > f || (fiber == f && fv < p)) {
                    best = Some((fiber, fv));
                }
            }
        }
        best.map(|(fiber, point)| FiberWitness {
            point,
            fiber,
            fixed_points,
            stable_points,
        })
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Output of [`Transformation::idempotent_fiber_witness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberWitness {
    pub point: usize,
    pub fiber: u64,
    /// `|D′|`
    pub fixed_points: u64,
    /// `|D″|`
    pub stable_points: u64,
}

impl FiberWitness {
    /// `⌈|D″| / |D′|⌉`.
    pub fn pigeonhole_bound(&self) -> u64 {
        self.stable_points.div_ceil(self.fixed_points)
    }
}

/// An exact normalized Hamming distance `disagreements / carrier`.
#[derive(Clone, Copy, Debug)]
pub struct HammingValue {
    pub disagreements: u64,
    pub carrier: u64,
}

impl HammingValue {
    pub fn new(disagreements: u64, carrier: u64) -> Self {
        debug_assert!(carrier > 0 && disagreements <= carrier);
        HammingValue {
            disagreements,
            carrier,
        }
    }

    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.disagreements, self.carrier)
    }

    pub fn is_zero(&self) -> bool {
        self.disagreements == 0
    }
}

impl PartialEq for HammingValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HammingValue {}

impl PartialOrd for HammingValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HammingValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.disagreements as u128 * other.carrier as u128)
            .cmp(&(other.disagreements as u128 * self.carrier as u128))
    }
}

impl fmt::Display for HammingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.ratio();
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Lexicographic index of a point of `D₁ × … × Dₙ`, first factor most significant.
pub fn product_index(sizes: &[usize], coords: &[usize]) -> usize {
    sizes
        .iter()
        .zip(coords)
        .fold(0, |acc, (&size, &c)| acc * size + c)
}

/// Inverse of [`product_index`].
pub fn product_coords(sizes: &[usize], mut index: usize) -> Vec<usize> {
    let mut coords = vec![0; sizes.len()];
    for (slot, &size) in coords.iter_mut().zip(sizes).rev() {
        *slot = index % size;
        index /= size;
    }
    coords
}

/// The product map `Φ(f)(v) = (f₁(v₁), …, fₙ(vₙ))` on the lexicographically
/// indexed product carrier.
pub fn product_embed(factors: &[&Transformation]) -> Result<Transformation> {
    if factors.is_empty() {
        return Err(Error::EmptyProduct);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.carrier()).collect();
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .filter(|&t| t <= u32::MAX as usize)
        .ok_or_else(|| Error::cap("product carrier", "more than 2^32 points", u32::MAX as u64))?;
    let mut image = Vec::with_capacity(total);
    let mut coords = vec![0usize; sizes.len()];
    for _ in 0..total {
        let target = factors
            .iter()
            .zip(&coords)
            .fold(0usize, |acc, (f, &c)| acc * f.carrier() + f.apply(c));
        image.push(target as u32);
        // advance the odometer, last factor fastest
        for k in (0..sizes.len()).rev() {
            coords[k] += 1;
            if coords[k] < sizes[k] {
                break;
            }
            coords[k] = 0;
        }
    }
    Ok(Transformation { image })
}

/// `1 − ∏ (1 − dᵢ)` as an exact rational.
pub fn product_hamming_prediction(parts: &[HammingValue]) -> Ratio<u64> {
    let agree = parts.iter().fold(Ratio::from_integer(1u64), |acc, h| {
        acc * Ratio::new(h.carrier - h.disagreements, h.carrier)
    });
    Ratio::from_integer(1) - agree
}
