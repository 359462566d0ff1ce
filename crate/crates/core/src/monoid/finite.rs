use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tables up to this order are checked for associativity on every triple.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

/// A finite monoid given by its multiplication table.
///
/// Elements are the indices `0..order`. The table is stored row-major so that
/// `x * y` lives at `x * order + y`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    name: Option<String>,
}

/// On-disk form of a multiplication table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableFile {
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
}

/// The steps of the Frobenius argument: `a^m = a^(m+t)` and `e = a^(mt)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusTrace {
    pub element: usize,
    pub index: usize,
    pub period: usize,
    pub idempotent: usize,
}

impl FiniteMonoid {
    /// Builds a monoid from a square table.
    ///
    /// When `identity` is `None` the (necessarily unique) two-sided identity is
    /// located in the table.
    pub fn new(rows: Vec<Vec<usize>>, identity: Option<usize>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        let mut table = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidTable(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            for &entry in row {
                if entry >= order {
                    return Err(Error::InvalidTable(format!(
                        "entry {entry} in row {i} is out of range"
                    )));
                }
                table.push(entry);
            }
        }
        let mut monoid = FiniteMonoid {
            order,
            table,
            identity: 0,
            name: None,
        };
        monoid.identity = match identity {
            Some(e) if e >= order => {
                return Err(Error::InvalidTable(format!("identity {e} out of range")))
            }
            Some(e) if monoid.is_identity(e) => e,
            Some(e) => {
                return Err(Error::InvalidTable(format!(
                    "element {e} is not a two-sided identity"
                )))
            }
            None => (0..order)
                .find(|&e| monoid.is_identity(e))
                .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?,
        };
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            if let Some((x, y, z)) = monoid.associativity_violation() {
                return Err(Error::NotAssociative(x, y, z));
            }
        }
        Ok(monoid)
    }

    pub fn from_table_file(file: TableFile) -> Result<Self> {
        Self::new(file.table, file.identity)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The cyclic group ℤ/n under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("cyclic group needs n >= 1".into()));
        }
        let rows = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        Ok(Self::new(rows, Some(0))?.with_name(format!("cyclic:{n}")))
    }

    /// The multiplicative monoid {0, 1}.
    pub fn bool_mul() -> Self {
        Self::new(vec![vec![0, 0], vec![0, 1]], Some(1))
            .expect("valid table")
            .with_name("bool-mul")
    }

    /// The full transformation monoid `Map(D)` for `|D| = d`.
    ///
    /// Element `i` is the map whose image sequence is the base-`d` expansion
    /// of `i`, most significant digit first. Composition is `(f * g)(v) = f(g(v))`.
    pub fn full_transformation(d: usize) -> Result<Self> {
        if d == 0 || d > 4 {
            return Err(Error::Precondition(
                "full transformation monoid supported for 1 <= d <= 4".into(),
            ));
        }
        let order = d.pow(d as u32);
        let decode = |mut i: usize| {
            let mut image = vec![0; d];
            for slot in image.iter_mut().rev() {
                *slot = i % d;
                i /= d;
            }
            image
        };
        let encode = |image: &[usize]| image.iter().fold(0, |acc, &v| acc * d + v);
        let maps: Vec<Vec<usize>> = (0..order).map(decode).collect();
        let rows = maps
            .iter()
            .map(|f| {
                maps.iter()
                    .map(|g| encode(&g.iter().map(|&v| f[v]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let identity = encode(&(0..d).collect::<Vec<_>>());
        Ok(Self::new(rows, Some(identity))?.with_name(format!("full-transf:{d}")))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn to_table_file(&self) -> TableFile {
        TableFile {
            table: self.rows(),
            identity: Some(self.identity),
        }
    }

    fn is_identity(&self, e: usize) -> bool {
        (0..self.order).all(|x| self.mul(e, x) == x && self.mul(x, e) == x)
    }

    /// First triple (in lexicographic order) violating associativity.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn power(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    /// Two-sided inverse of `x`, if any.
    pub fn inverse(&self, x: usize) -> Option<usize> {
        (0..self.order).find(|&y| {
            self.mul(x, y) == self.identity && self.mul(y, x) == self.identity
        })
    }

    pub fn is_group(&self) -> bool {
        (0..self.order).all(|x| self.inverse(x).is_some())
    }

    /// All idempotents other than the identity, ascending.
    pub fn nontrivial_idempotents(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&e| e != self.identity && self.mul(e, e) == e)
            .collect()
    }

    /// Derives a non-trivial idempotent from a non-invertible element.
    ///
    /// Returns `None` when `a` is invertible. Otherwise finds the least
    /// `m >= 1` and `t >= 1` with `a^m = a^(m+t)` and returns `e = a^(mt)`.
    pub fn frobenius_idempotent(&self, a: usize) -> Option<FrobeniusTrace> {
        if self.inverse(a).is_some() {
            return None;
        }
        // powers[k] = a^k for k >= 1; the sequence is eventually periodic.
        let mut powers = vec![self.identity, a];
        let (index, period) = loop {
            let last = *powers.last().expect("nonempty");
            let next = self.mul(last, a);
            let k = powers.len();
            if let Some(m) = (1..k).find(|&m| powers[m] == next) {
                break (m, k - m);
            }
            powers.push(next);
        };
        let idempotent = self.power(a, index * period);
        debug_assert_eq!(self.mul(idempotent, idempotent), idempotent);
        debug_assert_ne!(idempotent, self.identity);
        Some(FrobeniusTrace {
            element: a,
            index,
            period,
            idempotent,
        })
    }

    /// Some `e` with `e² = e` and `e ≠ 1`, if one exists.
    ///
    /// The table scan is cross-checked against the Frobenius derivation from
    /// the first non-invertible element.
    pub fn find_nontrivial_idempotent(&self) -> Option<usize> {
        let scanned = self.nontrivial_idempotents().first().copied();
        let derived = (0..self.order).find_map(|a| self.frobenius_idempotent(a));
        assert_eq!(
            scanned.is_some(),
            derived.is_some(),
            "idempotent scan and Frobenius derivation disagree"
        );
        if let Some(trace) = &derived {
            assert!(self.nontrivial_idempotents().contains(&trace.idempotent));
        }
        scanned
    }

    /// Enumerates all monoids of the given order up to isomorphism.
    ///
    /// The identity is pinned at index 0 and the remaining table entries range
    /// freely; associative tables are kept once per isomorphism class.
    pub fn enumerate_up_to_iso(order: usize) -> Vec<FiniteMonoid> {
        assert!((1..=4).contains(&order), "enumeration supported for order 1..=4");
        let n = order;
        let free: Vec<(usize, usize)> = (1..n).flat_map(|x| (1..n).map(move |y| (x, y))).collect();
        let total = n.pow(free.len() as u32);
        let perms = permutations_fixing_zero(n);
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut found = Vec::new();
        for code in 0..total {
            let mut table = vec![0; n * n];
            for x in 0..n {
                table[x] = x;
                table[x * n] = x;
            }
            let mut c = code;
            for &(x, y) in &free {
                table[x * n + y] = c % n;
                c /= n;
            }
            let candidate = FiniteMonoid {
                order: n,
                table,
                identity: 0,
                name: None,
            };
            if candidate.associativity_violation().is_some() {
                continue;
            }
            let canonical = perms
                .iter()
                .map(|p| candidate.relabelled(p))
                .min()
                .expect("at least the identity permutation");
            if seen.insert(canonical) {
                found.push(candidate);
            }
        }
        found
    }

    fn relabelled(&self, perm: &[usize]) -> Vec<usize> {
        let n = self.order;
        let mut out = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                out[perm[x] * n + perm[y]] = perm[self.mul(x, y)];
            }
        }
        out
    }
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![0], &mut (1..n).collect(), &mut out);
    out
}

impl fmt::Debug for FiniteMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteMonoid")
            .field("order", &self.order)
            .field("identity", &self.identity)
            .field("name", &self.name)
            .field("table", &self.rows())
            .finish()
    }
}
