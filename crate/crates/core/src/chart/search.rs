use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Chart, QualityReport};
use crate::error::{Error, Result};
use crate::monoid::{BicyclicElement, Element, Monoid};
use crate::rational::{self, Rational};
use crate::transformation::Transformation;

/// Score of a chart: `sm3 − 2·max(0, sm2 − budget)`.
pub type Score = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub d: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Defect allowed before the score is penalized.
    pub sm2_budget: Rational,
    /// Steps without improvement before a fresh random start.
    pub restart_after: usize,
}

impl SearchConfig {
    pub fn new(d: usize, iterations: usize, seed: u64) -> Self {
        SearchConfig {
            d,
            iterations,
            seed,
            sm2_budget: Ratio::new(1, 10),
            restart_after: 500,
        }
    }
}

/// One accepted or rejected step of the search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStep {
    pub iteration: usize,
    #[serde(with = "rational")]
    pub sm2_defect: Rational,
    #[serde(with = "rational")]
    pub sm3_separation: Rational,
    #[serde(serialize_with = "serialize_score")]
    pub score: Score,
    #[serde(serialize_with = "serialize_score")]
    pub best_score: Score,
    pub restarted: bool,
}

fn serialize_score<S: serde::Serializer>(r: &Score, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub chart: Chart,
    pub report: QualityReport,
    pub score: Score,
    pub trace: Vec<SearchStep>,
}

fn to_signed(r: Rational) -> Score {
    Ratio::new(*r.numer() as i64, *r.denom() as i64)
}

pub fn score(report: &QualityReport, budget: Rational) -> Score {
    let excess = if report.sm2_defect > budget {
        to_signed(report.sm2_defect - budget)
    } else {
        Score::from_integer(0)
    };
    to_signed(report.sm3_separation) - excess * 2
}

fn elements() -> Vec<Element> {
    let q = BicyclicElement::Q;
    let p = BicyclicElement::P;
    [BicyclicElement::IDENTITY, p, q, q.mul(p)]
        .into_iter()
        .map(Element::Bicyclic)
        .collect()
}

fn assemble(sp: &Transformation, sq: &Transformation, seed: u64) -> Result<Chart> {
    let d = sp.carrier();
    let sigma = vec![Transformation::identity(d), sp.clone(), sq.clone(), sq.compose(sp)?];
    Chart::new(Monoid::Bicyclic, elements(), 0, sigma, Some(seed))
}

/// Local search for a chart of the bicyclic monoid on `K = {1, p, q, qp}`.
///
/// `σ(1) = Id`, `σ(qp) = σ(q)σ(p)`, and `σ(p)`, `σ(q)` start as uniform
/// random maps. Each step rewrites one image entry of `σ(p)` or `σ(q)` and
/// keeps the change when the score does not drop. After `restart_after`
/// steps without strict improvement the search restarts from fresh random
/// maps. The best chart seen is returned; the output depends only on the
/// config.
pub fn bicyclic_chart_search(config: &SearchConfig) -> Result<SearchOutcome> {
    if config.d == 0 {
        return Err(Error::Precondition("search needs d >= 1".into()));
    }
    let d = config.d;
    let budget = config.sm2_budget;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut sp = Transformation::random_map(d, &mut rng);
    let mut sq = Transformation::random_map(d, &mut rng);
    let chart = assemble(&sp, &sq, config.seed)?;
    let mut report = chart.quality()?;
    let mut current = score(&report, budget);
    let mut best = SearchOutcome {
        chart,
        report: report.clone(),
        score: current,
        trace: Vec::with_capacity(config.iterations),
    };
    let mut stagnant = 0usize;

    for iteration in 0..config.iterations {
        let mut restarted = false;
        if stagnant >= config.restart_after {
            sp = Transformation::random_map(d, &mut rng);
            sq = Transformation::random_map(d, &mut rng);
            report = assemble(&sp, &sq, config.seed)?.quality()?;
            current = score(&report, budget);
            stagnant = 0;
            restarted = true;
        } else {
            let (mut np, mut nq) = (sp.clone(), sq.clone());
            let target = if rng.gen_bool(0.5) { &mut np } else { &mut nq };
            let v = rng.gen_range(0..d);
            target.image_mut()[v] = rng.gen_range(0..d as u32);
            let candidate_report = assemble(&np, &nq, config.seed)?.quality()?;
            let candidate = score(&candidate_report, budget);
            if candidate > current {
                stagnant = 0;
            } else {
                stagnant += 1;
            }
            if candidate >= current {
                sp = np;
                sq = nq;
                report = candidate_report;
                current = candidate;
            }
        }
        if current > best.score {
            best.chart = assemble(&sp, &sq, config.seed)?;
            best.report = report.clone();
            best.score = current;
        }
        best.trace.push(SearchStep {
            iteration,
            sm2_defect: report.sm2_defect,
            sm3_separation: report.sm3_separation,
            score: current,
            best_score: best.score,
            restarted,
        });
    }
    Ok(best)
}

/// Runs `shards` independent searches with seeds `seed, seed+1, …` on
/// separate threads and keeps the best; ties go to the lowest shard.
pub fn bicyclic_chart_search_sharded(config: &SearchConfig, shards: usize) -> Result<SearchOutcome> {
    let shards = shards.max(1);
    let results: Vec<Result<SearchOutcome>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|i| {
                let shard = SearchConfig {
                    seed: config.seed.wrapping_add(i as u64),
                    ..config.clone()
                };
                scope.spawn(move || bicyclic_chart_search(&shard))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search shard panicked"))
            .collect()
    });
    let mut best: Option<SearchOutcome> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.score > b.score) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one shard"))
}
