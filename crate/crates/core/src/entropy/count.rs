use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::{entropy_estimate, EntropyEstimate, GoodnessParams, MicrostateSpace};
use crate::error::{Error, Result};
use crate::shift::{checked_power, mixed_radix_digits, AdmissibilityMode};

/// Default cap on `|A|^|D|` for exact trace enumeration.
pub const DEFAULT_TRACE_CAP: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "sampled-lower-bound")]
    SampledLowerBound,
    #[serde(rename = "combinatorial-upper-bound")]
    CombinatorialUpperBound,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Exact => "exact",
            CountMethod::SampledLowerBound => "sampled-lower-bound",
            CountMethod::CombinatorialUpperBound => "combinatorial-upper-bound",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountStrategy {
    Exact,
    /// Tests `samples` uniform traces drawn from a ChaCha8 stream.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub strategy: CountStrategy,
    /// Worker threads for exact enumeration; the count does not depend on it.
    pub shards: usize,
    pub cap: u64,
    /// Enumerate even when the full-shift witness settles the count.
    pub force_enumeration: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            strategy: CountStrategy::Exact,
            shards: 1,
            cap: DEFAULT_TRACE_CAP,
            force_enumeration: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "serialize_big")]
    pub count: BigUint,
    pub method: CountMethod,
    pub mode: AdmissibilityMode,
    pub d: usize,
    pub alphabet: usize,
}

fn serialize_big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl CountResult {
    pub fn estimate(&self) -> EntropyEstimate {
        entropy_estimate(&self.count, self.d, self.alphabet)
    }
}

/// Decides, for one trace, whether some choice of admissible patterns keeps
/// every defect set within budget.
struct TraceChecker<'a> {
    a: usize,
    d: usize,
    k: usize,
    images: Vec<&'a [u32]>,
    /// Pareto-minimal defect masks per reading `(ω(v), ω(σ(f₁)v), …)`.
    options: Vec<Vec<u32>>,
    budget: u64,
}

impl<'a> TraceChecker<'a> {
    fn new(space: &'a MicrostateSpace<'_>, budget: u64, cap: u64) -> Result<Self> {
        let a = space.alphabet_size();
        let k = space.f().len();
        if k > 31 {
            return Err(Error::Precondition("at most 31 members of F".into()));
        }
        let readings = checked_power(a, k + 1)
            .filter(|&r| r as u64 <= cap)
            .ok_or_else(|| Error::cap("reading table", format!("{a}^{}", k + 1), cap))?;
        let f_window = space.f_window();
        let patterns = space.language().patterns();
        let options = (0..readings)
            .map(|r| {
                let reading = mixed_radix_digits(a, k + 1, r);
                let masks: Vec<u32> = patterns
                    .iter()
                    .filter(|q| q[0] == reading[0])
                    .map(|q| {
                        (0..k).fold(0u32, |m, j| {
                            if q[f_window[j]] != reading[j + 1] {
                                m | 1 << j
                            } else {
                                m
                            }
                        })
                    })
                    .collect();
                pareto_minimal(masks)
            })
            .collect();
        let chart = space.chart();
        Ok(TraceChecker {
            a,
            d: chart.d(),
            k,
            images: space.f().iter().map(|&m| chart.sigma()[m].image()).collect(),
            options,
            budget,
        })
    }

    fn feasible(&self, omega: &[u32]) -> bool {
        let mut constrained: Vec<&[u32]> = Vec::new();
        for v in 0..self.d {
            let mut r = omega[v] as usize;
            for img in &self.images {
                r = r * self.a + omega[img[v] as usize] as usize;
            }
            let opts = &self.options[r];
            match opts.first() {
                None => return false,
                Some(0) => {}
                Some(_) => {
                    constrained.push(opts);
                    if constrained.len() as u64 > self.budget * self.k as u64 {
                        return false;
                    }
                }
            }
        }
        if constrained.is_empty() {
            return true;
        }
        constrained.sort_by_key(|o| o.len());
        let mut used = vec![0u64; self.k];
        self.search(&constrained, 0, &mut used)
    }

    fn search(&self, points: &[&[u32]], i: usize, used: &mut [u64]) -> bool {
        let Some(opts) = points.get(i) else {
            return true;
        };
        for &mask in opts.iter() {
            let fits = (0..self.k).all(|j| mask & 1 << j == 0 || used[j] < self.budget);
            if !fits {
                continue;
            }
            for (j, u) in used.iter_mut().enumerate() {
                *u += u64::from(mask >> j & 1);
            }
            let ok = self.search(points, i + 1, used);
            for (j, u) in used.iter_mut().enumerate() {
                *u -= u64::from(mask >> j & 1);
            }
            if ok {
                return true;
            }
        }
        false
    }

    /// Feasible traces with index in `lo..hi`, first point most significant.
    fn count_range(&self, lo: usize, hi: usize) -> u64 {
        if lo >= hi {
            return 0;
        }
        let mut omega = mixed_radix_digits(self.a, self.d, lo);
        let mut count = 0u64;
        for _ in lo..hi {
            count += u64::from(self.feasible(&omega));
            for digit in omega.iter_mut().rev() {
                *digit += 1;
                if (*digit as usize) < self.a {
                    break;
                }
                *digit = 0;
            }
        }
        count
    }
}

/// Masks not containing another listed mask, sorted; `[0]` if 0 is present.
fn pareto_minimal(mut masks: Vec<u32>) -> Vec<u32> {
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut out: Vec<u32> = Vec::new();
    for m in masks {
        if !out.iter().any(|&o| o & !m == 0) {
            out.push(m);
        }
    }
    out
}

/// Number of traces `ω ∈ A^D` carried by at least one good microstate.
///
/// For the full shift on a chart with `σ(1) = Id` every trace has the
/// defect-free witness `φ_ω`, so the count is `|A|^|D|` without enumeration
/// unless `force_enumeration` is set. Exact enumeration visits every trace
/// and searches pattern choices point by point under the per-`m` budget
/// `⌊δ²|D|⌋`; contiguous ranges of traces (fixed prefixes) run on separate
/// threads and are summed. Sampling returns the number of distinct feasible
/// traces seen, a lower bound.
pub fn count_good_traces(
    space: &MicrostateSpace<'_>,
    params: &GoodnessParams,
    options: &CountOptions,
) -> Result<CountResult> {
    if params.f != space.f() {
        return Err(Error::Precondition("parameters and microstate space disagree on F".into()));
    }
    let chart = space.chart();
    let d = chart.d();
    let a = space.alphabet_size();
    let mode = space.language().mode();
    let result = |count: BigUint, method| CountResult {
        count,
        method,
        mode,
        d,
        alphabet: a,
    };
    let sm1 = chart.sigma()[chart.identity_position()].is_identity();

    match options.strategy {
        CountStrategy::Exact => {
            if space.sft().is_full_shift() && sm1 && !options.force_enumeration {
                return Ok(result(BigUint::from(a).pow(d as u32), CountMethod::Exact));
            }
            let total = checked_power(a, d)
                .filter(|&t| t as u64 <= options.cap)
                .ok_or_else(|| Error::cap("exact trace enumeration", format!("{a}^{d} traces"), options.cap))?;
            let checker = TraceChecker::new(space, params.threshold(d), options.cap)?;
            let shards = options.shards.clamp(1, total.max(1));
            let chunk = total.div_ceil(shards);
            let count: u64 = if shards == 1 {
                checker.count_range(0, total)
            } else {
                std::thread::scope(|scope| {
                    let checker = &checker;
                    let handles: Vec<_> = (0..shards)
                        .map(|s| {
                            let lo = (s * chunk).min(total);
                            let hi = ((s + 1) * chunk).min(total);
                            scope.spawn(move || checker.count_range(lo, hi))
                        })
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("count shard panicked")).sum()
                })
            };
            Ok(result(BigUint::from(count), CountMethod::Exact))
        }
        CountStrategy::Sampled { samples, seed } => {
            let checker = TraceChecker::new(space, params.threshold(d), options.cap)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut found: HashSet<Vec<u32>> = HashSet::new();
            for _ in 0..samples {
                let omega: Vec<u32> = (0..d).map(|_| rng.gen_range(0..a as u32)).collect();
                if !found.contains(&omega) && checker.feasible(&omega) {
                    found.insert(omega);
                }
            }
            Ok(result(BigUint::from(found.len()), CountMethod::SampledLowerBound))
        }
    }
}
