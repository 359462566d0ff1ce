//! Finite approximation charts `(D, σ|_K)` and their quality certificates.
//!
//! A chart assigns one self-map of a finite carrier `D` to each element of a
//! finite list `K` of monoid elements. Its [`QualityReport`] measures the
//! four approximation conditions: `σ(1) = Id` (SM1), near-multiplicativity on
//! pairs whose product lies in `K` (SM2), pairwise separation (SM3) and the
//! uniform fiber bound (SM4). The tolerances `ε` and `Δ` are measured outputs
//! of a chart, never inputs.

mod build;
mod obstruction;
mod quality;
mod search;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use build::{
    cyclic_chart, extend_by_identity, polynomial_chart, product_chart, random_perm_chart,
    saturating_chart, DEFAULT_PRODUCT_CAP,
};
pub use obstruction::{idempotent_obstruction, ObstructionCertificate};
pub use quality::{quality, QualityReport};
pub use search::{
    bicyclic_chart_search, bicyclic_chart_search_sharded, SearchConfig, SearchOutcome, SearchStep,
};

use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid};
use crate::transformation::Transformation;

/// A finite snapshot of a (strong) sofic approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    monoid: Monoid,
    elements: Vec<Element>,
    identity: usize,
    sigma: Vec<Transformation>,
    seed: Option<u64>,
}

/// JSON form of a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartFile {
    pub d: usize,
    pub monoid: String,
    pub elements: Vec<String>,
    pub identity: usize,
    pub sigma: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Chart {
    pub fn new(
        monoid: Monoid,
        elements: Vec<Element>,
        identity: usize,
        sigma: Vec<Transformation>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Precondition("a chart needs at least one element".into()));
        }
        if elements.len() != sigma.len() {
            return Err(Error::Precondition(format!(
                "{} elements but {} transformations",
                elements.len(),
                sigma.len()
            )));
        }
        if identity >= elements.len() || elements[identity] != monoid.identity() {
            return Err(Error::Precondition(format!(
                "position {identity} does not hold the identity {}",
                monoid.identity()
            )));
        }
        let mut seen = HashSet::new();
        for e in &elements {
            if !monoid.contains(e) {
                return Err(Error::ForeignElement {
                    element: e.to_string(),
                    monoid: monoid.to_string(),
                });
            }
            if !seen.insert(e) {
                return Err(Error::Precondition(format!("duplicate element {e}")));
            }
        }
        let d = sigma[0].carrier();
        if let Some(bad) = sigma.iter().find(|t| t.carrier() != d) {
            return Err(Error::CarrierMismatch {
                left: d,
                right: bad.carrier(),
            });
        }
        Ok(Chart {
            monoid,
            elements,
            identity,
            sigma,
            seed,
        })
    }

    pub fn d(&self) -> usize {
        self.sigma[0].carrier()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn identity_position(&self) -> usize {
        self.identity
    }

    pub fn sigma(&self) -> &[Transformation] {
        &self.sigma
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn position(&self, x: &Element) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    /// Positions of the given labels, parsed with this chart's monoid.
    pub fn positions_of(&self, labels: &[String]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|label| {
                let e = self.monoid.parse_element(label)?;
                self.position(&e).ok_or_else(|| {
                    Error::Precondition(format!("element {label} is not listed in the chart"))
                })
            })
            .collect()
    }

    pub fn transformation_of(&self, x: &Element) -> Option<&Transformation> {
        self.position(x).map(|i| &self.sigma[i])
    }

    pub fn quality(&self) -> Result<QualityReport> {
        quality(self, &self.monoid)
    }

    /// Positions of elements `e ∈ K` with `e² = e ≠ 1`.
    pub fn idempotent_positions(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                i != self.identity
                    && self
                        .monoid
                        .multiply(&self.elements[i], &self.elements[i])
                        .is_ok_and(|sq| sq == self.elements[i])
            })
            .collect()
    }

    pub fn to_file(&self) -> ChartFile {
        ChartFile {
            d: self.d(),
            monoid: self.monoid.to_string(),
            elements: self.elements.iter().map(ToString::to_string).collect(),
            identity: self.identity,
            sigma: self.sigma.iter().map(|t| t.image().to_vec()).collect(),
            seed: self.seed,
        }
    }

    /// Rebuilds a chart, parsing labels with `monoid` if given and the
    /// file's own descriptor otherwise.
    pub fn from_file(file: &ChartFile, monoid: Option<&Monoid>, base: Option<&Path>) -> Result<Self> {
        let monoid = match monoid {
            Some(m) => m.clone(),
            None => Monoid::parse_with_base(&file.monoid, base)?,
        };
        let elements = file
            .elements
            .iter()
            .map(|label| monoid.parse_element(label))
            .collect::<Result<Vec<_>>>()?;
        let sigma = file
            .sigma
            .iter()
            .map(|image| Transformation::new(image.clone()))
            .collect::<Result<Vec<_>>>()?;
        if sigma.first().is_some_and(|t| t.carrier() != file.d) {
            return Err(Error::CarrierMismatch {
                left: file.d,
                right: sigma[0].carrier(),
            });
        }
        Chart::new(monoid, elements, file.identity, sigma, file.seed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("chart serializes")
    }

    pub fn from_json(text: &str, monoid: Option<&Monoid>, base: Option<&Path>) -> Result<Self> {
        let file: ChartFile = serde_json::from_str(text)?;
        Self::from_file(&file, monoid, base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let chart = cyclic_chart(6, &[-1, 0, 1]).unwrap();
        let text = chart.to_json();
        let back = Chart::from_json(&text, None, None).unwrap();
        assert_eq!(back, chart);
        let file: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(file["d"], 6);
        assert_eq!(file["monoid"], "int-add");
        assert_eq!(file["elements"], serde_json::json!(["-1", "0", "1"]));
        assert_eq!(file["identity"], 1);
        assert!(file.get("seed").is_none());
    }

    #[test]
    fn rejects_bad_charts() {
        let id = Transformation::identity(3);
        let m = Monoid::IntAdd;
        assert!(Chart::new(m.clone(), vec![Element::Int(1)], 0, vec![id.clone()], None).is_err());
        assert!(Chart::new(
            m.clone(),
            vec![Element::Int(0), Element::Int(0)],
            0,
            vec![id.clone(), id.clone()],
            None
        )
        .is_err());
        assert!(matches!(
            Chart::new(
                m,
                vec![Element::Int(0), Element::Int(1)],
                0,
                vec![id, Transformation::identity(4)],
                None
            ),
            Err(Error::CarrierMismatch { .. })
        ));
    }

    #[test]
    fn file_with_wrong_d_is_rejected() {
        let mut file = cyclic_chart(4, &[0, 1]).unwrap().to_file();
        file.d = 5;
        assert!(Chart::from_file(&file, None, None).is_err());
    }
}
