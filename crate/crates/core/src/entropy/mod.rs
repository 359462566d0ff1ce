//! Per-chart sofic topological entropy of subshifts.
//!
//! A microstate assigns to every carrier point `v` an admissible pattern
//! `φ(v)` on the window `F⁺ = {1} ∪ F`; its trace is `ω(v) = φ(v)(1)`. With
//! the pseudometric that only reads the value at `1`, two microstates are
//! `(ρ∞, ε)`-separated for any `ε ∈ (0, 1)` exactly when their traces differ,
//! so the maximal separated count is the number of distinct traces carried
//! by good microstates. A microstate is good when every defect set
//! `W_{φ,m} = {v : ω(σ(m)(v)) ≠ φ(v)(m)}`, `m ∈ F`, has at most
//! `⌊δ²|D|⌋` points.
//!
//! Values are per chart; limits along a family of charts are approximated by
//! [`sweep`] rows, never computed.

mod bounds;
mod count;
mod sweep;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

pub use bounds::{
    beta0, binary_entropy, injectivity_sets, injectivity_sets_avoiding, monotonicity_report,
    stirling_bound, Beta0, InjectivitySets, MonotonicityReport,
};
pub use count::{count_good_traces, CountMethod, CountOptions, CountResult, CountStrategy, DEFAULT_TRACE_CAP};
pub use sweep::{estimate_row, sweep, sweep_csv, SweepParams, SweepRow, CSV_HEADER};

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::monoid::Element;
use crate::rational::Rational;
use crate::shift::{local_language, AdmissibilityMode, LocalLanguage, Sft};

/// `F`, `δ` and `ε` for the good-microstate condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessParams {
    /// Chart positions of the members of `F`.
    pub f: Vec<usize>,
    pub delta: Rational,
    pub epsilon: Rational,
}

impl GoodnessParams {
    pub fn new(f: Vec<usize>, delta: Rational) -> Result<Self> {
        Self::with_epsilon(f, delta, Ratio::new(1, 2))
    }

    pub fn with_epsilon(f: Vec<usize>, delta: Rational, epsilon: Rational) -> Result<Self> {
        if f.is_empty() {
            return Err(Error::Precondition("F must be non-empty".into()));
        }
        for (i, x) in f.iter().enumerate() {
            if f[..i].contains(x) {
                return Err(Error::Precondition(format!("position {x} repeated in F")));
            }
        }
        if delta == Rational::zero() {
            return Err(Error::Precondition("delta must be positive".into()));
        }
        if epsilon == Rational::zero() || epsilon >= Rational::one() {
            return Err(Error::Precondition("epsilon must lie in (0, 1)".into()));
        }
        Ok(GoodnessParams { f, delta, epsilon })
    }

    /// `⌊δ²·d⌋`, the largest defect set a good microstate may have.
    pub fn threshold(&self, d: usize) -> u64 {
        let t = self.delta * self.delta * Rational::from_integer(d as u64);
        t.to_integer()
    }
}

/// A microstate: one index into the local language per carrier point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Microstate(pub Vec<usize>);

/// Chart, `F` and the admissible patterns on `F⁺`.
#[derive(Clone, Debug)]
pub struct MicrostateSpace<'a> {
    chart: &'a Chart,
    sft: &'a Sft,
    f: Vec<usize>,
    language: LocalLanguage,
    /// Window position of each member of `F`.
    f_window: Vec<usize>,
}

impl<'a> MicrostateSpace<'a> {
    /// Builds the window `F⁺` (identity first, then `F` in order) and its
    /// admissible patterns.
    pub fn new(
        chart: &'a Chart,
        sft: &'a Sft,
        f: &[usize],
        mode: AdmissibilityMode,
        cap: usize,
    ) -> Result<Self> {
        if f.is_empty() {
            return Err(Error::Precondition("F must be non-empty".into()));
        }
        if let Some(&bad) = f.iter().find(|&&i| i >= chart.len()) {
            return Err(Error::Precondition(format!("position {bad} outside the chart")));
        }
        let identity = chart.identity_position();
        let mut positions = vec![identity];
        positions.extend(f.iter().copied().filter(|&i| i != identity));
        let window: Vec<Element> = positions.iter().map(|&i| chart.elements()[i].clone()).collect();
        let language = local_language(sft, chart.monoid(), &window, mode, cap)?;
        let f_window = f
            .iter()
            .map(|i| positions.iter().position(|p| p == i).expect("listed"))
            .collect();
        Ok(MicrostateSpace {
            chart,
            sft,
            f: f.to_vec(),
            language,
            f_window,
        })
    }

    pub fn chart(&self) -> &Chart {
        self.chart
    }

    pub fn sft(&self) -> &Sft {
        self.sft
    }

    pub fn f(&self) -> &[usize] {
        &self.f
    }

    pub fn language(&self) -> &LocalLanguage {
        &self.language
    }

    pub fn alphabet_size(&self) -> usize {
        self.sft.alphabet().size()
    }

    pub(crate) fn f_window(&self) -> &[usize] {
        &self.f_window
    }

    fn check(&self, phi: &Microstate) -> Result<()> {
        if phi.0.len() != self.chart.d() {
            return Err(Error::Precondition(format!(
                "microstate on {} points, chart has d = {}",
                phi.0.len(),
                self.chart.d()
            )));
        }
        if let Some(&bad) = phi.0.iter().find(|&&q| q >= self.language.len()) {
            return Err(Error::Precondition(format!("pattern index {bad} out of range")));
        }
        Ok(())
    }

    /// `ω(v) = φ(v)(1)`.
    pub fn trace(&self, phi: &Microstate) -> Result<Vec<u32>> {
        self.check(phi)?;
        Ok(phi.0.iter().map(|&q| self.language.patterns()[q][0]).collect())
    }

    /// `W_{φ,m}` for the chart position `m`, which must belong to `F`.
    pub fn defect_set(&self, phi: &Microstate, m: usize) -> Result<Vec<usize>> {
        let j = self
            .f
            .iter()
            .position(|&x| x == m)
            .ok_or_else(|| Error::Precondition(format!("position {m} is not in F")))?;
        let omega = self.trace(phi)?;
        let sigma = &self.chart.sigma()[m];
        let w = self.f_window[j];
        Ok((0..self.chart.d())
            .filter(|&v| omega[sigma.apply(v)] != self.language.patterns()[phi.0[v]][w])
            .collect())
    }

    pub fn is_good(&self, phi: &Microstate, params: &GoodnessParams) -> Result<bool> {
        let threshold = params.threshold(self.chart.d());
        for &m in &self.f {
            if self.defect_set(phi, m)?.len() as u64 > threshold {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `φ_ω(v)(m) = ω(σ(m)(v))`, which has no defects when `σ(1) = Id`.
    pub fn full_shift_witness(&self, omega: &[u32]) -> Result<Microstate> {
        let chart = self.chart;
        if !chart.sigma()[chart.identity_position()].is_identity() {
            return Err(Error::Precondition("witness needs sigma(1) = Id".into()));
        }
        if omega.len() != chart.d() {
            return Err(Error::Precondition(format!(
                "trace of length {} for d = {}",
                omega.len(),
                chart.d()
            )));
        }
        for &x in omega {
            self.sft.alphabet().check(x)?;
        }
        let identity = chart.identity_position();
        let mut positions = vec![identity];
        positions.extend(self.f.iter().copied().filter(|&i| i != identity));
        (0..chart.d())
            .map(|v| {
                let q: Vec<u32> = positions.iter().map(|&m| omega[chart.sigma()[m].apply(v)]).collect();
                self.language
                    .patterns()
                    .binary_search(&q)
                    .map_err(|_| Error::Precondition(format!("pattern {q:?} at {v} is not admissible")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Microstate)
    }
}

/// `log(count)/d` in nats and in base `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub nats: f64,
    pub base_a: f64,
    /// `k` when `count = a^k`; the estimate is then exactly `(k/d)·log a`.
    pub exact_power: Option<u64>,
}

fn exact_power(count: &BigUint, a: usize) -> Option<u64> {
    if a < 2 || count.is_zero() {
        return None;
    }
    let base = BigUint::from(a);
    let mut k = 0u64;
    let mut x = count.clone();
    while !x.is_one() {
        if !(&x % &base).is_zero() {
            return None;
        }
        x /= &base;
        k += 1;
    }
    Some(k)
}

/// Natural log of a big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Normalized log of a count; `−∞` for a zero count.
pub fn entropy_estimate(count: &BigUint, d: usize, alphabet: usize) -> EntropyEstimate {
    let ln_a = (alphabet as f64).ln();
    if count.is_zero() {
        return EntropyEstimate {
            nats: f64::NEG_INFINITY,
            base_a: f64::NEG_INFINITY,
            exact_power: None,
        };
    }
    if let Some(k) = exact_power(count, alphabet) {
        let ratio = k as f64 / d as f64;
        return EntropyEstimate {
            nats: if k as usize == d { ln_a } else { ratio * ln_a },
            base_a: ratio,
            exact_power: Some(k),
        };
    }
    let nats = ln_biguint(count) / d as f64;
    EntropyEstimate {
        nats,
        base_a: if alphabet > 1 { nats / ln_a } else { f64::NAN },
        exact_power: None,
    }
}
