use num_rational::Ratio;
use serde::Serialize;

use super::Chart;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Fiber certificate for a non-trivial idempotent `e ∈ K`.
///
/// With `f = σ(e)`, `D′ = {v : f(v) = v}` and `D″ = {v : f(v) = f²(v)}`,
/// some point of `D′` has at least `⌈|D″| / |D′|⌉` preimages. A chart that
/// is `ε`-good at `(e, e)` and at `(e, 1)` has `|D″| ≥ (1−ε)d` and
/// `|D′| ≤ εd`, which forces `Δ ≥ (1−ε)/ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub element: String,
    pub position: usize,
    pub d: usize,
    /// `|D′|`
    pub fixed_points: u64,
    /// `|D″|`
    pub stable_points: u64,
    /// `⌈|D″| / |D′|⌉`, or 1 when `D″` is empty.
    pub implied_delta: u64,
    pub witness_point: Option<usize>,
    pub witness_fiber: Option<u64>,
    /// `d − |D″|`: points where `σ(e)σ(e)` and `σ(e)` disagree.
    pub sm2_defect_mass: u64,
    /// `|D′|`: points where `σ(e)` and `σ(1) = Id` agree.
    pub sm3_agreement_mass: u64,
    /// `max(d − |D″|, |D′|) / d`, the least `ε` consistent with both masses.
    #[serde(with = "rational")]
    pub epsilon: Rational,
    /// `(1 − ε)/ε`, absent when `ε = 0`.
    #[serde(serialize_with = "serialize_opt")]
    pub tension_bound: Option<Rational>,
    /// Largest fiber of `σ(e)`.
    pub measured_fiber: u64,
    /// `sm4_delta` of the whole chart.
    pub chart_delta: u64,
}

fn serialize_opt<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => rational::serialize(r, s),
        None => s.serialize_none(),
    }
}

impl ObstructionCertificate {
    /// The measured fiber meets the pigeonhole bound.
    pub fn is_consistent(&self) -> bool {
        self.measured_fiber >= self.implied_delta && self.chart_delta >= self.measured_fiber
    }
}

/// Builds the certificate for the element at `position`.
pub fn idempotent_obstruction(chart: &Chart, position: usize) -> Result<ObstructionCertificate> {
    let e = chart.elements().get(position).ok_or_else(|| {
        Error::Precondition(format!("position {position} out of range for |K| = {}", chart.len()))
    })?;
    if position == chart.identity_position() {
        return Err(Error::Precondition(format!("{e} is the identity")));
    }
    if chart.monoid().multiply(e, e)? != *e {
        return Err(Error::Precondition(format!("{e} is not idempotent")));
    }
    let f = &chart.sigma()[position];
    let d = chart.d() as u64;
    let witness = f.idempotent_fiber_witness();
    let fixed_points = (0..f.carrier()).filter(|&v| f.apply(v) == v).count() as u64;
    let stable_points = witness.map_or(0, |w| w.stable_points);
    let implied_delta = witness.map_or(1, |w| w.pigeonhole_bound());
    let sm2_defect_mass = d - stable_points;
    let epsilon = Ratio::new(sm2_defect_mass.max(fixed_points), d);
    let tension_bound = (epsilon != Ratio::from_integer(0))
        .then(|| (Ratio::from_integer(1) - epsilon) / epsilon);
    Ok(ObstructionCertificate {
        element: e.to_string(),
        position,
        d: chart.d(),
        fixed_points,
        stable_points,
        implied_delta,
        witness_point: witness.map(|w| w.point),
        witness_fiber: witness.map(|w| w.fiber),
        sm2_defect_mass,
        sm3_agreement_mass: fixed_points,
        epsilon,
        tension_bound,
        measured_fiber: f.max_fiber(),
        chart_delta: chart.quality()?.sm4_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{Element, FiniteMonoid, Monoid};
    use crate::transformation::Transformation;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bool_chart(f: Transformation) -> Chart {
        let d = f.carrier();
        let m = Monoid::Finite(FiniteMonoid::bool_mul());
        Chart::new(
            m,
            vec![Element::Index(1), Element::Index(0)],
            0,
            vec![Transformation::identity(d), f],
            None,
        )
        .unwrap()
    }

    #[test]
    fn constant_map_forces_full_fiber() {
        let cert = idempotent_obstruction(&bool_chart(Transformation::constant(100, 7)), 1).unwrap();
        assert_eq!(cert.fixed_points, 1);
        assert_eq!(cert.stable_points, 100);
        assert_eq!(cert.implied_delta, 100);
        assert_eq!(cert.witness_point, Some(7));
        assert!(cert.is_consistent());
    }

    #[test]
    fn identity_image_gives_trivial_bound() {
        let cert = idempotent_obstruction(&bool_chart(Transformation::identity(10)), 1).unwrap();
        assert_eq!(cert.implied_delta, 1);
        assert_eq!(cert.sm3_agreement_mass, 10);
        assert_eq!(cert.epsilon, Ratio::from_integer(1));
        assert_eq!(cert.tension_bound, Some(Ratio::from_integer(0)));
    }

    #[test]
    fn near_idempotent_with_five_fixed_points() {
        // 5 fixed points; 85 points mapped onto them; 10 points in two 5-cycles
        let mut image: Vec<u32> = (0..100).map(|v| if v < 5 { v } else { v % 5 }).collect();
        for c in 0..2u32 {
            let base = 90 + 5 * c;
            for i in 0..5 {
                image[(base + i) as usize] = base + (i + 1) % 5;
            }
        }
        let f = Transformation::new(image).unwrap();
        let cert = idempotent_obstruction(&bool_chart(f), 1).unwrap();
        assert_eq!(cert.fixed_points, 5);
        assert_eq!(cert.stable_points, 90);
        assert_eq!(cert.implied_delta, 18);
        assert!(cert.measured_fiber >= 18);
    }

    #[test]
    fn rejects_identity_and_non_idempotents() {
        let chart = bool_chart(Transformation::constant(4, 0));
        assert!(idempotent_obstruction(&chart, 0).is_err());
        let z = crate::chart::cyclic_chart(4, &[0, 1]).unwrap();
        assert!(idempotent_obstruction(&z, 1).is_err());
    }

    proptest! {
        #[test]
        fn bound_is_met_by_measured_fiber(d in 1usize..40, seed in any::<u64>(), keep in 0u32..=100) {
            // an idempotent perturbed on a random subset of points
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let retract = Transformation::random_map(d, &mut rng);
            let mut image: Vec<u32> = (0..d).map(|v| retract.apply(retract.apply(v)) as u32).collect();
            let targets: Vec<u32> = image.clone();
            for (v, slot) in image.iter_mut().enumerate() {
                if targets.contains(&(v as u32)) {
                    *slot = v as u32;
                }
                if rng.gen_range(0..100) >= keep {
                    *slot = rng.gen_range(0..d as u32);
                }
            }
            let f = Transformation::new(image).unwrap();
            let cert = idempotent_obstruction(&bool_chart(f), 1).unwrap();
            prop_assert!(cert.is_consistent());
        }
    }
}
