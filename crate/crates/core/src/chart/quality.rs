use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;

use super::Chart;
use crate::error::{Error, Result};
use crate::monoid::{Element, Monoid};
use crate::rational::{self, Rational};

/// Measured approximation statistics of a chart.
///
/// `sm2_defect` is the worst Hamming defect `d(σ(k₁k₂), σ(k₁)σ(k₂))` over the
/// pairs whose product is listed in `K`; `sm2_coverage` is the fraction of all
/// `|K|²` pairs that are covered that way. `sm3_separation` is the least
/// distance between the images of two distinct members of `K` (`1/1` when `K`
/// has a single member) and `sm4_delta` the largest fiber of any `σ(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QualityReport {
    pub d: usize,
    pub elements: usize,
    pub sm1_ok: bool,
    #[serde(with = "rational")]
    pub sm2_defect: Rational,
    #[serde(with = "rational")]
    pub sm2_coverage: Rational,
    pub sm2_covered_pairs: usize,
    pub sm2_worst_pair: Option<(String, String)>,
    #[serde(with = "rational")]
    pub sm3_separation: Rational,
    pub sm3_worst_pair: Option<(String, String)>,
    pub sm4_delta: u64,
    /// `|K| ≤ d^d` whenever `σ` separates `K`; `false` would indicate a bug.
    pub carrier_bound_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl QualityReport {
    /// Smallest `ε` for which (SM2) and (SM3) hold on the covered pairs.
    pub fn epsilon(&self) -> Rational {
        let sep_gap = Ratio::from_integer(1) - self.sm3_separation;
        self.sm2_defect.max(sep_gap)
    }

    pub fn verdict(&self) -> String {
        if !self.sm1_ok {
            return format!(
                "(SM1) fails: sigma(1) is not the identity; (SM2-SM4) at (eps={}, Delta={}) with SM2 coverage {}",
                rational::format(&self.epsilon()),
                self.sm4_delta,
                rational::format(&self.sm2_coverage)
            );
        }
        format!(
            "(SM1–SM4) at (ε={}, Δ={}) with SM2 coverage {}",
            rational::format(&self.epsilon()),
            self.sm4_delta,
            rational::format(&self.sm2_coverage)
        )
    }
}

/// Measures (SM1)–(SM4) of `chart` against the multiplication of `monoid`.
pub fn quality(chart: &Chart, monoid: &Monoid) -> Result<QualityReport> {
    let k = chart.len();
    let d = chart.d();
    for e in chart.elements() {
        if !monoid.contains(e) {
            return Err(Error::ForeignElement {
                element: e.to_string(),
                monoid: monoid.to_string(),
            });
        }
    }
    let label = |i: usize| chart.elements()[i].to_string();
    let sigma = chart.sigma();

    let sm1_ok = sigma[chart.identity_position()].is_identity();

    let index: HashMap<&Element, usize> =
        chart.elements().iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut worst_defect = (0u64, None);
    let mut covered = 0usize;
    for i in 0..k {
        for j in 0..k {
            let product = monoid.multiply(&chart.elements()[i], &chart.elements()[j])?;
            let Some(&pos) = index.get(&product) else {
                continue;
            };
            covered += 1;
            let composed = sigma[i].compose(&sigma[j])?;
            let defect = sigma[pos].disagreements(&composed);
            if worst_defect.1.is_none() || defect > worst_defect.0 {
                worst_defect = (defect, Some((i, j)));
            }
        }
    }

    let mut worst_sep: (u64, Option<(usize, usize)>) = (d as u64, None);
    for i in 0..k {
        for j in (i + 1)..k {
            let dist = sigma[i].disagreements(&sigma[j]);
            if worst_sep.1.is_none() || dist < worst_sep.0 {
                worst_sep = (dist, Some((i, j)));
            }
        }
    }

    let sm4_delta = sigma.iter().map(|t| t.max_fiber()).max().unwrap_or(1);

    let carrier_bound_ok = worst_sep.0 == 0 || {
        // |Map(D)| = d^d must be at least |K| once σ is injective on K
        (d as u64)
            .checked_pow(d as u32)
            .is_none_or(|maps| maps >= k as u64)
    };

    Ok(QualityReport {
        d,
        elements: k,
        sm1_ok,
        sm2_defect: Ratio::new(worst_defect.0, d as u64),
        sm2_coverage: Ratio::new(covered as u64, (k * k) as u64),
        sm2_covered_pairs: covered,
        sm2_worst_pair: worst_defect.1.map(|(i, j)| (label(i), label(j))),
        sm3_separation: Ratio::new(worst_sep.0, d as u64),
        sm3_worst_pair: worst_sep.1.map(|(i, j)| (label(i), label(j))),
        sm4_delta,
        carrier_bound_ok,
        seed: chart.seed(),
    })
}
