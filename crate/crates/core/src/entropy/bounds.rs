use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::shift::Sft;

/// `V`, the points where `s ↦ σ(s)(v)` is not injective on `F`, and a greedy
/// packing `U ⊆ D ∖ W` whose images `σ(F)(u)` are pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivitySets {
    pub v: Vec<usize>,
    pub packing: Vec<usize>,
    /// Largest fiber of `σ(s)` over `s ∈ F`.
    pub delta_f: u64,
    /// `⌈|D ∖ W| / (|F|²·Δ_F)⌉`
    pub packing_lower_bound: u64,
}

fn images_of(chart: &Chart, f: &[usize], u: usize) -> Vec<usize> {
    f.iter().map(|&s| chart.sigma()[s].apply(u)).collect()
}

/// [`injectivity_sets_avoiding`] with `W = V`.
pub fn injectivity_sets(chart: &Chart, f: &[usize]) -> Result<InjectivitySets> {
    injectivity_sets_avoiding(chart, f, &[])
}

/// Computes `V` and packs `D ∖ (W ∪ V)` greedily in ascending order.
///
/// Panics if the packing misses its size bound or the sets
/// `σ(F)⁻¹(σ(F)(u))` fail to cover `D ∖ (W ∪ V)`; both follow from maximality.
pub fn injectivity_sets_avoiding(chart: &Chart, f: &[usize], w: &[usize]) -> Result<InjectivitySets> {
    if f.is_empty() {
        return Err(Error::Precondition("F must be non-empty".into()));
    }
    if let Some(&bad) = f.iter().find(|&&i| i >= chart.len()) {
        return Err(Error::Precondition(format!("position {bad} outside the chart")));
    }
    let d = chart.d();
    let v: Vec<usize> = (0..d)
        .filter(|&u| {
            let img = images_of(chart, f, u);
            (0..img.len()).any(|i| img[..i].contains(&img[i]))
        })
        .collect();
    let mut excluded = vec![false; d];
    for &x in v.iter().chain(w) {
        if x >= d {
            return Err(Error::Precondition(format!("point {x} outside the carrier")));
        }
        excluded[x] = true;
    }
    let mut taken = vec![false; d];
    let mut packing = Vec::new();
    for u in (0..d).filter(|&u| !excluded[u]) {
        let img = images_of(chart, f, u);
        if img.iter().all(|&x| !taken[x]) {
            for x in img {
                taken[x] = true;
            }
            packing.push(u);
        }
    }
    let delta_f = f.iter().map(|&s| chart.sigma()[s].max_fiber()).max().unwrap_or(1);
    let rest = excluded.iter().filter(|&&e| !e).count() as u64;
    let k = f.len() as u64;
    let packing_lower_bound = rest.div_ceil(k * k * delta_f);
    assert!(
        packing.len() as u64 >= packing_lower_bound,
        "greedy packing below its guaranteed size"
    );
    for u in (0..d).filter(|&u| !excluded[u]) {
        assert!(
            images_of(chart, f, u).iter().any(|&x| taken[x]),
            "packing preimages do not cover point {u}"
        );
    }
    Ok(InjectivitySets {
        v,
        packing,
        delta_f,
        packing_lower_bound,
    })
}

/// `β₀` and the entropy bound `(1 − β₀)·log a` it yields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Beta0 {
    pub beta0: f64,
    pub entropy_bound_nats: f64,
}

/// `β₀ = −log_a(1 − a^{−|F|}) / (2·Δ_F·|F|²)`.
pub fn beta0(a: usize, f_size: usize, delta_f: u64) -> Result<Beta0> {
    if a < 2 {
        return Err(Error::Precondition("beta0 needs an alphabet of size >= 2".into()));
    }
    if f_size < 2 {
        return Err(Error::Precondition("beta0 needs |F| >= 2".into()));
    }
    if delta_f == 0 {
        return Err(Error::Precondition("beta0 needs Delta_F >= 1".into()));
    }
    let a = a as f64;
    let k = f_size as f64;
    let log_a = -(-a.powf(-k)).ln_1p() / a.ln();
    let beta0 = log_a / (2.0 * delta_f as f64 * k * k);
    Ok(Beta0 {
        beta0,
        entropy_bound_nats: (1.0 - beta0) * a.ln(),
    })
}

/// `H(t) = −t ln t − (1−t) ln(1−t)` in nats.
pub fn binary_entropy(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    -t * t.ln() - (1.0 - t) * (-t).ln_1p()
}

/// `e^{H(t)·d}`, an upper bound for `Σ_{j ≤ ⌊td⌋} C(d, j)` when `0 < t < 1/2`.
pub fn stirling_bound(t: f64, d: usize) -> Result<f64> {
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::Precondition(format!("t = {t} outside (0, 1/2)")));
    }
    if d == 0 {
        return Err(Error::Precondition("d must be >= 1".into()));
    }
    Ok((binary_entropy(t) * d as f64).exp())
}

/// Every quantity behind the certified count bound
/// `|Z| ≤ e^{H(t)|D|}·|A|^{(1−β₀)|D|}` with `t = (|F|+1)δ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub d: usize,
    pub alphabet: usize,
    pub f: Vec<String>,
    pub forbidden_support: Vec<String>,
    pub forbidden_values: Vec<u32>,
    #[serde(with = "rational")]
    pub delta: Rational,
    #[serde(with = "rational")]
    pub t: Rational,
    /// `δ / C(|F|, 2)`, the separation level under which `|V| ≤ δ|D|` is
    /// guaranteed.
    #[serde(with = "rational")]
    pub epsilon_regime: Rational,
    /// Least Hamming distance between `σ(s)`, `σ(s′)` for distinct `s, s′ ∈ F`.
    #[serde(with = "rational")]
    pub sm3_over_f: Rational,
    pub sm3_regime_ok: bool,
    pub sm1_ok: bool,
    pub v_size: usize,
    pub v_bound_ok: bool,
    pub delta_f: u64,
    pub packing_size: usize,
    pub packing_lower_bound: u64,
    pub beta0: f64,
    /// `H(t)`
    pub stirling_beta: f64,
    /// `|D|·(H(t) + (1−β₀) ln a)`
    pub log_bound_nats: Option<f64>,
    pub certified_upper_bound: Option<f64>,
    /// `H(t) < β₀ ln a`, i.e. the bound is below `|A|^|D|`.
    pub below_full_count: Option<bool>,
    pub hypotheses_met: bool,
    pub unmet: Vec<String>,
}

/// Evaluates the monotonicity chain on one chart.
///
/// `F` must contain the support of some forbidden pattern of `sft` and have
/// at least two members. The hypotheses checked are `0 < δ`, `t < 1/2`,
/// `σ(1) = Id` and the measured `|V| ≤ δ|D|`; when one fails the report
/// carries the reasons and no bound. Whether the chart's separation on `F`
/// reaches `δ / C(|F|, 2)` is reported but not required, since only the
/// measured size of `V` enters the argument.
pub fn monotonicity_report(
    chart: &Chart,
    sft: &Sft,
    f: &[usize],
    delta: Rational,
) -> Result<MonotonicityReport> {
    let elements: Vec<_> = f.iter().map(|&i| chart.elements().get(i).cloned()).collect::<Option<_>>().ok_or_else(
        || Error::Precondition("F position outside the chart".into()),
    )?;
    let pattern = sft
        .forbidden()
        .iter()
        .find(|p| p.support().iter().all(|s| elements.contains(s)))
        .ok_or_else(|| {
            Error::HypothesesUnmet("no forbidden pattern is supported inside F".into())
        })?;
    let d = chart.d();
    let a = sft.alphabet().size();
    let k = f.len();
    let mut unmet = Vec::new();
    if k < 2 {
        return Err(Error::HypothesesUnmet("|F| must be at least 2".into()));
    }
    if a < 2 {
        return Err(Error::HypothesesUnmet("alphabet must have at least 2 symbols".into()));
    }
    if delta.is_zero() {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    let t = delta * Rational::from_integer(k as u64 + 1);
    if t >= Ratio::new(1, 2) {
        unmet.push(format!(
            "t = (|F|+1)·delta = {} must be below 1/2",
            rational::format(&t)
        ));
    }
    let sm1_ok = chart.sigma()[chart.identity_position()].is_identity();
    if !sm1_ok {
        unmet.push("sigma(1) is not the identity".into());
    }
    let sets = injectivity_sets(chart, f)?;
    let v_size = sets.v.len();
    let v_bound_ok = Rational::from_integer(v_size as u64) <= delta * Rational::from_integer(d as u64);
    if !v_bound_ok {
        unmet.push(format!(
            "|V| = {v_size} exceeds delta·|D|; the chart separates F too weakly"
        ));
    }
    let pairs = (k * (k - 1) / 2) as u64;
    let epsilon_regime = delta / Rational::from_integer(pairs);
    let mut sm3_over_f = Rational::from_integer(1);
    for i in 0..k {
        for j in i + 1..k {
            let h = chart.sigma()[f[i]].hamming(&chart.sigma()[f[j]])?.ratio();
            sm3_over_f = sm3_over_f.min(h);
        }
    }
    let sm3_regime_ok = Rational::from_integer(1) - sm3_over_f <= epsilon_regime;

    let b = beta0(a, k, sets.delta_f)?;
    let t_f = *t.numer() as f64 / *t.denom() as f64;
    let stirling_beta = binary_entropy(t_f);
    let hypotheses_met = unmet.is_empty();
    let ln_a = (a as f64).ln();
    let log_bound = hypotheses_met.then(|| d as f64 * (stirling_beta + (1.0 - b.beta0) * ln_a));
    Ok(MonotonicityReport {
        d,
        alphabet: a,
        f: elements.iter().map(ToString::to_string).collect(),
        forbidden_support: pattern.support().iter().map(ToString::to_string).collect(),
        forbidden_values: pattern.values().to_vec(),
        delta,
        t,
        epsilon_regime,
        sm3_over_f,
        sm3_regime_ok,
        sm1_ok,
        v_size,
        v_bound_ok,
        delta_f: sets.delta_f,
        packing_size: sets.packing.len(),
        packing_lower_bound: sets.packing_lower_bound,
        beta0: b.beta0,
        stirling_beta,
        log_bound_nats: log_bound,
        certified_upper_bound: log_bound.map(f64::exp),
        below_full_count: hypotheses_met.then(|| stirling_beta < b.beta0 * ln_a),
        hypotheses_met,
        unmet,
    })
}
