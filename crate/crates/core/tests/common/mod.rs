//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

use soficlab::chart::{cyclic_chart, Chart};
use soficlab::monoid::{Element, FiniteMonoid, Monoid};
use soficlab::rational::Rational;
use soficlab::shift::{Alphabet, AdmissibilityMode, Pattern, Sft};
use soficlab::transformation::Transformation;

/// `L(n) = tr(A^n)` for the golden-mean matrix `[[1,1],[1,0]]`.
pub fn lucas(n: u32) -> u64 {
    let mul = |x: [[u64; 2]; 2], y: [[u64; 2]; 2]| {
        let mut z = [[0u64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        z
    };
    let mut acc = [[1, 0], [0, 1]];
    for _ in 0..n {
        acc = mul(acc, [[1, 1], [1, 0]]);
    }
    acc[0][0] + acc[1][1]
}

/// `Σ_{j ≤ k} C(d, j)` from a Pascal row.
pub fn binomial_tail(d: usize, k: usize) -> BigUint {
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..d {
        let mut next = vec![BigUint::from(1u32); row.len() + 1];
        for j in 1..row.len() {
            next[j] = &row[j - 1] + &row[j];
        }
        row = next;
    }
    row.iter().take(k + 1).sum()
}

/// Disagreements of `(f₁,…,fₙ)` and `(g₁,…,gₙ)` on the product carrier,
/// counted point by point.
pub fn product_disagreements(pairs: &[(Vec<usize>, Vec<usize>)]) -> (u64, u64) {
    let sizes: Vec<usize> = pairs.iter().map(|(f, _)| f.len()).collect();
    let total: usize = sizes.iter().product();
    let mut bad = 0u64;
    let mut coords = vec![0usize; sizes.len()];
    for _ in 0..total {
        if pairs.iter().zip(&coords).any(|((f, g), &c)| f[c] != g[c]) {
            bad += 1;
        }
        for k in 0..coords.len() {
            coords[k] += 1;
            if coords[k] < sizes[k] {
                break;
            }
            coords[k] = 0;
        }
    }
    (bad, total as u64)
}

/// Configurations `x ∈ A^M` of a finite monoid avoiding every forbidden
/// pattern at every translate, where an occurrence at `m` means
/// `x(s·m) = p(s)` for all `s` in the support.
pub fn finite_configurations(fm: &FiniteMonoid, alphabet: usize, forbidden: &[(Vec<usize>, Vec<u32>)]) -> Vec<Vec<u32>> {
    let n = fm.order();
    let total = alphabet.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut x = vec![0u32; n];
        let mut c = code;
        for slot in x.iter_mut().rev() {
            *slot = (c % alphabet) as u32;
            c /= alphabet;
        }
        let occurs = forbidden.iter().any(|(support, values)| {
            (0..n).any(|m| support.iter().zip(values).all(|(&s, &v)| x[fm.mul(s, m)] == v))
        });
        if !occurs {
            out.push(x);
        }
    }
    out
}

/// Patterns on an integer window with no forbidden occurrence lying wholly
/// inside the window.
pub fn integer_window_patterns(window: &[i64], alphabet: usize, forbidden: &[(Vec<i64>, Vec<u32>)]) -> Vec<Vec<u32>> {
    let k = window.len();
    let total = alphabet.pow(k as u32);
    let at = |x: &[u32], point: i64| window.iter().position(|&w| w == point).map(|i| x[i]);
    let mut out = Vec::new();
    for code in 0..total {
        let mut x = vec![0u32; k];
        let mut c = code;
        for slot in x.iter_mut().rev() {
            *slot = (c % alphabet) as u32;
            c /= alphabet;
        }
        let occurs = forbidden.iter().any(|(support, values)| {
            let mut shifts: Vec<i64> = window.iter().flat_map(|w| support.iter().map(move |s| w - s)).collect();
            shifts.sort();
            shifts.dedup();
            shifts
                .iter()
                .any(|t| support.iter().zip(values).all(|(s, &v)| at(&x, s + t) == Some(v)))
        });
        if !occurs {
            out.push(x);
        }
    }
    out
}

/// One counting problem together with the data the oracle needs.
pub struct Instance {
    pub label: String,
    pub chart: Chart,
    pub sft: Sft,
    /// Positions of `F` in the chart.
    pub f: Vec<usize>,
    pub delta: Rational,
    pub mode: AdmissibilityMode,
    /// Values a single point may carry; `states[i][c]` is the symbol at coordinate `c`.
    pub states: Vec<Vec<u32>>,
    pub coord_identity: usize,
    /// Coordinate of each member of `F`, with its map.
    pub coord_f: Vec<(usize, Vec<usize>)>,
}

impl Instance {
    /// `|states|^d`, saturating.
    pub fn search_space(&self) -> u128 {
        (0..self.chart.d()).fold(1u128, |acc, _| acc.saturating_mul(self.states.len() as u128))
    }

    pub fn alphabet(&self) -> usize {
        self.sft.alphabet().size()
    }
}

/// Largest `ε`-separated set of good microstates, built greedily with the
/// sup distance `ρ∞(φ, ψ) = max_v ρ(φ(v), ψ(v))`, `ρ(x, y) = [x(1) ≠ y(1)]`.
pub fn oracle_count(inst: &Instance, epsilon: Rational) -> u64 {
    let d = inst.chart.d();
    let threshold = {
        let (n, m) = (*inst.delta.numer() as u128, *inst.delta.denom() as u128);
        (n * n * d as u128 / (m * m)) as usize
    };
    let s = inst.states.len();
    if s == 0 {
        return 0;
    }
    let one = inst.coord_identity;
    let rho = |x: usize, y: usize| -> Rational {
        if inst.states[x][one] == inst.states[y][one] {
            Ratio::from_integer(0)
        } else {
            Ratio::from_integer(1)
        }
    };
    let good = |phi: &[usize]| {
        inst.coord_f.iter().all(|(c, map)| {
            let defects = (0..d)
                .filter(|&v| inst.states[phi[map[v]]][one] != inst.states[phi[v]][*c])
                .count();
            defects <= threshold
        })
    };
    let mut separated: Vec<Vec<usize>> = Vec::new();
    let mut phi = vec![0usize; d];
    loop {
        if good(&phi) {
            let far_from_all = separated.iter().all(|psi| {
                let sup = (0..d).map(|v| rho(phi[v], psi[v])).max().unwrap_or(Ratio::from_integer(0));
                sup >= epsilon
            });
            if far_from_all {
                separated.push(phi.clone());
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return separated.len() as u64;
            }
            phi[k] += 1;
            if phi[k] < s {
                break;
            }
            phi[k] = 0;
            k += 1;
        }
    }
}

fn random_map<R: Rng>(d: usize, rng: &mut R) -> Vec<usize> {
    (0..d).map(|_| rng.gen_range(0..d)).collect()
}

const DELTAS: [(u64, u64); 6] = [(1, 1000), (1, 10), (1, 3), (1, 2), (3, 5), (9, 10)];

/// A random instance over `ℤ` with window points in `{-1, 0, 1, 2}`.
pub fn random_integer_instance<R: Rng>(rng: &mut R, d: usize, alphabet: usize) -> Instance {
    let pool = [-1i64, 0, 1, 2];
    let f_size = rng.gen_range(1..=3);
    let mut f: Vec<i64> = pool.choose_multiple(rng, f_size).copied().collect();
    f.sort();
    let mut window = vec![0i64];
    window.extend(f.iter().copied().filter(|&x| x != 0));

    let patterns = rng.gen_range(1..=2);
    let mut forbidden = Vec::new();
    for _ in 0..patterns {
        let len = rng.gen_range(1..=2);
        let mut support: Vec<i64> = pool.choose_multiple(rng, len).copied().collect();
        support.sort();
        let values: Vec<u32> = (0..len).map(|_| rng.gen_range(0..alphabet as u32)).collect();
        forbidden.push((support, values));
    }
    let a = Alphabet::new(alphabet).unwrap();
    let sft = Sft::new(
        a,
        forbidden
            .iter()
            .map(|(s, v)| Pattern::new(s.iter().map(|&x| Element::Int(x)).collect(), v.clone(), a).unwrap())
            .collect(),
    );

    let use_cyclic = rng.gen_bool(0.5);
    let chart = if use_cyclic {
        cyclic_chart(d, &window).unwrap()
    } else {
        let sigma = window
            .iter()
            .map(|&w| {
                if w == 0 && rng.gen_bool(0.8) {
                    Transformation::identity(d)
                } else {
                    Transformation::from_fn(d, {
                        let m = random_map(d, rng);
                        move |v| m[v]
                    })
                    .unwrap()
                }
            })
            .collect();
        Chart::new(Monoid::IntAdd, window.iter().map(|&w| Element::Int(w)).collect(), 0, sigma, None).unwrap()
    };
    let f_pos: Vec<usize> = f.iter().map(|&x| chart.position(&Element::Int(x)).unwrap()).collect();
    let states = integer_window_patterns(&window, alphabet, &forbidden);
    let map_of = |p: usize| chart.sigma()[p].image().iter().map(|&x| x as usize).collect::<Vec<_>>();
    let coord_f = f
        .iter()
        .zip(&f_pos)
        .map(|(x, &p)| (window.iter().position(|w| w == x).unwrap(), map_of(p)))
        .collect();
    let (n, m) = DELTAS[rng.gen_range(0..DELTAS.len())];
    Instance {
        label: format!(
            "int-add d={d} a={alphabet} F={f:?} forbidden={forbidden:?} {}",
            if use_cyclic { "cyclic" } else { "random maps" }
        ),
        chart,
        sft,
        f: f_pos,
        delta: Ratio::new(n, m),
        mode: AdmissibilityMode::Local,
        states,
        coord_identity: 0,
        coord_f,
    }
}

/// A random instance over one of the given finite monoids, counted with exact
/// admissibility.
pub fn random_finite_instance<R: Rng>(rng: &mut R, monoids: &[FiniteMonoid], d: usize, alphabet: usize) -> Instance {
    let fm = monoids.choose(rng).unwrap().clone();
    let n = fm.order();
    let id = fm.identity();
    let f_size = rng.gen_range(1..=n.min(3));
    let mut f: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, f_size).copied().collect();
    f.sort();
    let mut elements = vec![id];
    elements.extend(f.iter().copied().filter(|&x| x != id));

    let patterns = rng.gen_range(1..=2);
    let mut forbidden = Vec::new();
    for _ in 0..patterns {
        let len = rng.gen_range(1..=n.min(2));
        let mut support: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, len).copied().collect();
        support.sort();
        let values: Vec<u32> = (0..len).map(|_| rng.gen_range(0..alphabet as u32)).collect();
        forbidden.push((support, values));
    }
    let a = Alphabet::new(alphabet).unwrap();
    let sft = Sft::new(
        a,
        forbidden
            .iter()
            .map(|(s, v)| Pattern::new(s.iter().map(|&x| Element::Index(x)).collect(), v.clone(), a).unwrap())
            .collect(),
    );
    let sigma = elements
        .iter()
        .map(|&e| {
            if e == id {
                Transformation::identity(d)
            } else {
                let m = random_map(d, rng);
                Transformation::from_fn(d, move |v| m[v]).unwrap()
            }
        })
        .collect();
    let table = fm.rows();
    let chart = Chart::new(
        Monoid::Finite(fm.clone()),
        elements.iter().map(|&e| Element::Index(e)).collect(),
        0,
        sigma,
        None,
    )
    .unwrap();
    let f_pos: Vec<usize> = f.iter().map(|&x| chart.position(&Element::Index(x)).unwrap()).collect();
    let states = finite_configurations(&fm, alphabet, &forbidden);
    let coord_f = f
        .iter()
        .zip(&f_pos)
        .map(|(&x, &p)| (x, chart.sigma()[p].image().iter().map(|&v| v as usize).collect()))
        .collect();
    let (dn, dm) = DELTAS[rng.gen_range(0..DELTAS.len())];
    Instance {
        label: format!("finite {table:?} d={d} a={alphabet} F={f:?} forbidden={forbidden:?}"),
        chart,
        sft,
        f: f_pos,
        delta: Ratio::new(dn, dm),
        mode: AdmissibilityMode::Exact,
        states,
        coord_identity: id,
        coord_f,
    }
}
