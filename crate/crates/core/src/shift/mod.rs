//! Configurations, subshifts of finite type and cellular automata over a monoid.
//!
//! The shift acts by `(mx)(m′) = x(m′m)`, so a pattern with support `S`
//! occurs in `x` at `m` when `x(s·m) = p(s)` for every `s ∈ S`. Rule tables
//! and configurations are indexed in mixed radix with the first listed
//! position as the most significant digit.

mod ca;
mod language;

use serde::{Deserialize, Serialize};

pub use ca::{
    ca_apply_window, ca_full_map, check_equivariance, compose_ca, surjunctivity_check, CaFile,
    CellularAutomaton, FullMap, SurjunctivityReport, DEFAULT_CONFIGURATION_CAP,
};
pub use language::{local_language, AdmissibilityMode, LocalLanguage, DEFAULT_PATTERN_CAP};

use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid};

/// A finite alphabet `{0, …, a-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Precondition("alphabet must be non-empty".into()));
        }
        if size > u32::MAX as usize {
            return Err(Error::Precondition("alphabet too large".into()));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub(crate) fn check(self, value: u32) -> Result<()> {
        if value as usize >= self.0 {
            return Err(Error::Precondition(format!(
                "symbol {value} outside alphabet of size {}",
                self.0
            )));
        }
        Ok(())
    }
}

/// Values on a finite support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    support: Vec<Element>,
    values: Vec<u32>,
}

impl Pattern {
    pub fn new(support: Vec<Element>, values: Vec<u32>, alphabet: Alphabet) -> Result<Self> {
        if support.is_empty() || support.len() != values.len() {
            return Err(Error::Precondition(format!(
                "pattern with {} support points and {} values",
                support.len(),
                values.len()
            )));
        }
        for (i, s) in support.iter().enumerate() {
            if support[..i].contains(s) {
                return Err(Error::Precondition(format!("repeated support point {s}")));
            }
        }
        for &v in &values {
            alphabet.check(v)?;
        }
        Ok(Pattern { support, values })
    }

    pub fn support(&self) -> &[Element] {
        &self.support
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

/// A subshift of finite type given by forbidden patterns.
///
/// An empty list is the full shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    forbidden: Vec<Pattern>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternFile {
    pub support: Vec<String>,
    pub values: Vec<u32>,
}

/// JSON form of an SFT: `{"alphabet": 2, "monoid": "int-add", "forbidden": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SftFile {
    pub alphabet: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monoid: Option<String>,
    #[serde(default)]
    pub forbidden: Vec<PatternFile>,
}

impl Sft {
    pub fn new(alphabet: Alphabet, forbidden: Vec<Pattern>) -> Self {
        Sft { alphabet, forbidden }
    }

    pub fn full_shift(alphabet: Alphabet) -> Self {
        Sft::new(alphabet, Vec::new())
    }

    /// The golden mean shift over `(ℤ, +)`: no two adjacent ones.
    pub fn golden_mean() -> Self {
        let a = Alphabet(2);
        let p = Pattern::new(vec![Element::Int(0), Element::Int(1)], vec![1, 1], a).expect("valid");
        Sft::new(a, vec![p])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }

    pub fn is_full_shift(&self) -> bool {
        self.forbidden.is_empty()
    }

    /// The SFT with the extra forbidden patterns; a subshift of `self`.
    pub fn with_forbidden(&self, extra: impl IntoIterator<Item = Pattern>) -> Self {
        let mut forbidden = self.forbidden.clone();
        forbidden.extend(extra);
        Sft::new(self.alphabet, forbidden)
    }

    pub fn to_file(&self, monoid: Option<&Monoid>) -> SftFile {
        SftFile {
            alphabet: self.alphabet.size(),
            monoid: monoid.map(ToString::to_string),
            forbidden: self
                .forbidden
                .iter()
                .map(|p| PatternFile {
                    support: p.support.iter().map(ToString::to_string).collect(),
                    values: p.values.clone(),
                })
                .collect(),
        }
    }

    /// Parses support labels with `monoid`; a descriptor recorded in the file
    /// must name the same monoid.
    pub fn from_file(file: &SftFile, monoid: &Monoid) -> Result<Self> {
        if let Some(name) = &file.monoid {
            if *name != monoid.to_string() {
                return Err(Error::Precondition(format!(
                    "SFT is over {name}, chart is over {monoid}"
                )));
            }
        }
        let alphabet = Alphabet::new(file.alphabet)?;
        let forbidden = file
            .forbidden
            .iter()
            .map(|p| {
                let support = p
                    .support
                    .iter()
                    .map(|label| monoid.parse_element(label))
                    .collect::<Result<Vec<_>>>()?;
                Pattern::new(support, p.values.clone(), alphabet)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sft::new(alphabet, forbidden))
    }

    pub fn from_json(text: &str, monoid: &Monoid) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?, monoid)
    }
}

/// Mixed-radix index of `digits`, first digit most significant.
pub fn mixed_radix_index(radix: usize, digits: &[u32]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * radix + d as usize)
}

/// Inverse of [`mixed_radix_index`] for `len` digits.
pub fn mixed_radix_digits(radix: usize, len: usize, mut index: usize) -> Vec<u32> {
    let mut digits = vec![0u32; len];
    for slot in digits.iter_mut().rev() {
        *slot = (index % radix) as u32;
        index /= radix;
    }
    digits
}

/// `radix^len`, or `None` on overflow.
pub(crate) fn checked_power(radix: usize, len: usize) -> Option<usize> {
    u32::try_from(len).ok().and_then(|e| radix.checked_pow(e))
}
