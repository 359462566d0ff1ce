//! Concrete monoids.
//!
//! A [`Monoid`] is one of a handful of built-in families, described by a short
//! text descriptor:
//!
//! ```text
//! descriptor := "bicyclic"
//!             | "polyZ"                      composition of non-constant integer polynomials
//!             | "free:" k                    free monoid on k letters a, b, c, ...
//!             | "nat-add"                    (ℕ, +)
//!             | "int-add"                    (ℤ, +)
//!             | "finite:" path               table file {"table": [[..]], "identity": i}
//!             | "finite:" json-table         inline table, e.g. finite:[[0,0],[0,1]]
//!             | "cyclic:" n                  ℤ/n as a finite table
//!             | "bool-mul"                   multiplicative {0, 1}
//!             | "full-transf:" d             Map({0..d-1}) as a finite table, d <= 4
//!             | "product(" descriptor ("," descriptor)* ")"
//! ```
//!
//! Element labels depend on the family: table indices (`3`), bicyclic normal
//! forms (`1`, `p`, `q^2p`), polynomials (`X^2-3X+1`), words (`1`, `ab`),
//! integers (`-2`) and tuples for products (`(qp,3)`).

mod bicyclic;
mod finite;
mod fragment;
mod polynomial;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub use bicyclic::BicyclicElement;
pub use finite::{FiniteMonoid, FrobeniusTrace, TableFile, ASSOCIATIVITY_CHECK_LIMIT};
pub use fragment::{close_fragment, MonoidFragment, DEFAULT_FRAGMENT_CAP};
pub use polynomial::IntPolynomial;

use crate::error::{Error, Result};

/// An element of one of the supported monoids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Element {
    Index(usize),
    Bicyclic(BicyclicElement),
    Poly(IntPolynomial),
    Word(Vec<u8>),
    Nat(u64),
    Int(i64),
    Tuple(Vec<Element>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Index(i) => write!(f, "{i}"),
            Element::Bicyclic(e) => write!(f, "{e}"),
            Element::Poly(p) => write!(f, "{p}"),
            Element::Word(w) if w.is_empty() => write!(f, "1"),
            Element::Word(w) => {
                for &letter in w {
                    write!(f, "{}", (b'a' + letter) as char)?;
                }
                Ok(())
            }
            Element::Nat(n) => write!(f, "{n}"),
            Element::Int(n) => write!(f, "{n}"),
            Element::Tuple(parts) => {
                write!(f, "(")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{part}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A concrete monoid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Monoid {
    Finite(FiniteMonoid),
    Bicyclic,
    PolyZ,
    Free(usize),
    NatAdd,
    IntAdd,
    Product(Vec<Monoid>),
}

impl Monoid {
    pub fn identity(&self) -> Element {
        match self {
            Monoid::Finite(m) => Element::Index(m.identity()),
            Monoid::Bicyclic => Element::Bicyclic(BicyclicElement::IDENTITY),
            Monoid::PolyZ => Element::Poly(IntPolynomial::x()),
            Monoid::Free(_) => Element::Word(Vec::new()),
            Monoid::NatAdd => Element::Nat(0),
            Monoid::IntAdd => Element::Int(0),
            Monoid::Product(parts) => Element::Tuple(parts.iter().map(Monoid::identity).collect()),
        }
    }

    /// Whether `x` is a valid element of this monoid.
    pub fn contains(&self, x: &Element) -> bool {
        match (self, x) {
            (Monoid::Finite(m), Element::Index(i)) => *i < m.order(),
            (Monoid::Bicyclic, Element::Bicyclic(_)) => true,
            (Monoid::PolyZ, Element::Poly(p)) => !p.is_constant(),
            (Monoid::Free(k), Element::Word(w)) => w.iter().all(|&l| (l as usize) < *k),
            (Monoid::NatAdd, Element::Nat(_)) => true,
            (Monoid::IntAdd, Element::Int(_)) => true,
            (Monoid::Product(parts), Element::Tuple(xs)) => {
                parts.len() == xs.len() && parts.iter().zip(xs).all(|(m, x)| m.contains(x))
            }
            _ => false,
        }
    }

    fn check(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            return Ok(());
        }
        if let (Monoid::PolyZ, Element::Poly(p)) = (self, x) {
            return Err(Error::ConstantPolynomial(p.to_string()));
        }
        Err(Error::ForeignElement {
            element: x.to_string(),
            monoid: self.to_string(),
        })
    }

    /// The product `x · y`.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.multiply_unchecked(x, y))
    }

    fn multiply_unchecked(&self, x: &Element, y: &Element) -> Element {
        match (self, x, y) {
            (Monoid::Finite(m), Element::Index(i), Element::Index(j)) => Element::Index(m.mul(*i, *j)),
            (Monoid::Bicyclic, Element::Bicyclic(a), Element::Bicyclic(b)) => Element::Bicyclic(a.mul(*b)),
            (Monoid::PolyZ, Element::Poly(p), Element::Poly(q)) => Element::Poly(p.compose(q)),
            (Monoid::Free(_), Element::Word(u), Element::Word(v)) => {
                Element::Word(u.iter().chain(v).copied().collect())
            }
            (Monoid::NatAdd, Element::Nat(a), Element::Nat(b)) => Element::Nat(a + b),
            (Monoid::IntAdd, Element::Int(a), Element::Int(b)) => Element::Int(a + b),
            (Monoid::Product(parts), Element::Tuple(xs), Element::Tuple(ys)) => Element::Tuple(
                parts
                    .iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(m, (x, y))| m.multiply_unchecked(x, y))
                    .collect(),
            ),
            _ => unreachable!("elements checked against the monoid"),
        }
    }

    /// All `m` with `s · m = target`, when that set is finite and computable.
    ///
    /// Returns `None` for families where no solver is implemented (`polyZ`, or
    /// products containing it).
    pub fn right_divisors(&self, s: &Element, target: &Element) -> Result<Option<Vec<Element>>> {
        self.check(s)?;
        self.check(target)?;
        Ok(self.right_divisors_unchecked(s, target))
    }

    fn right_divisors_unchecked(&self, s: &Element, target: &Element) -> Option<Vec<Element>> {
        match (self, s, target) {
            (Monoid::Finite(m), Element::Index(s), Element::Index(f)) => Some(
                (0..m.order())
                    .filter(|&x| m.mul(*s, x) == *f)
                    .map(Element::Index)
                    .collect(),
            ),
            (Monoid::Bicyclic, Element::Bicyclic(s), Element::Bicyclic(f)) => Some(
                s.right_divisors(*f).into_iter().map(Element::Bicyclic).collect(),
            ),
            (Monoid::Free(_), Element::Word(s), Element::Word(f)) => Some(
                f.strip_prefix(s.as_slice())
                    .map(|rest| vec![Element::Word(rest.to_vec())])
                    .unwrap_or_default(),
            ),
            (Monoid::NatAdd, Element::Nat(s), Element::Nat(f)) => {
                Some(f.checked_sub(*s).map(Element::Nat).into_iter().collect())
            }
            (Monoid::IntAdd, Element::Int(s), Element::Int(f)) => Some(vec![Element::Int(f - s)]),
            (Monoid::Product(parts), Element::Tuple(ss), Element::Tuple(fs)) => {
                let mut combos: Vec<Vec<Element>> = vec![Vec::new()];
                for (m, (s, f)) in parts.iter().zip(ss.iter().zip(fs)) {
                    let options = m.right_divisors_unchecked(s, f)?;
                    combos = combos
                        .into_iter()
                        .flat_map(|prefix| {
                            options.iter().map(move |o| {
                                let mut next = prefix.clone();
                                next.push(o.clone());
                                next
                            })
                        })
                        .collect();
                }
                Some(combos.into_iter().map(Element::Tuple).collect())
            }
            _ => None,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteMonoid> {
        match self {
            Monoid::Finite(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Monoid::Finite(_) => true,
            Monoid::Product(parts) => parts.iter().all(Monoid::is_finite),
            _ => false,
        }
    }

    /// Parses an element label.
    pub fn parse_element(&self, label: &str) -> Result<Element> {
        let label = label.trim();
        let bad = || Error::Parse(format!("{label:?} is not an element of {self}"));
        let element = match self {
            Monoid::Finite(_) => Element::Index(label.parse().map_err(|_| bad())?),
            Monoid::Bicyclic => Element::Bicyclic(label.parse()?),
            Monoid::PolyZ => Element::Poly(label.parse()?),
            Monoid::Free(_) => {
                if label == "1" {
                    Element::Word(Vec::new())
                } else if !label.is_empty() && label.bytes().all(|b| b.is_ascii_lowercase()) {
                    Element::Word(label.bytes().map(|b| b - b'a').collect())
                } else {
                    return Err(bad());
                }
            }
            Monoid::NatAdd => Element::Nat(label.parse().map_err(|_| bad())?),
            Monoid::IntAdd => Element::Int(label.parse().map_err(|_| bad())?),
            Monoid::Product(parts) => {
                let inner = label
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(bad)?;
                let pieces = split_top_level(inner);
                if pieces.len() != parts.len() {
                    return Err(bad());
                }
                Element::Tuple(
                    parts
                        .iter()
                        .zip(pieces)
                        .map(|(m, piece)| m.parse_element(piece))
                        .collect::<Result<_>>()?,
                )
            }
        };
        self.check(&element)?;
        Ok(element)
    }

    /// Parses a descriptor, resolving `finite:<path>` relative to `base`.
    pub fn parse_with_base(descriptor: &str, base: Option<&Path>) -> Result<Self> {
        let text = descriptor.trim();
        let bad = || Error::Parse(format!("unknown monoid descriptor {text:?}"));
        if let Some(inner) = text.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
            let parts = split_top_level(inner)
                .into_iter()
                .map(|p| Monoid::parse_with_base(p, base))
                .collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Err(Error::EmptyProduct);
            }
            return Ok(Monoid::Product(parts));
        }
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        match (head, arg) {
            ("bicyclic", None) => Ok(Monoid::Bicyclic),
            ("polyZ", None) => Ok(Monoid::PolyZ),
            ("nat-add", None) => Ok(Monoid::NatAdd),
            ("int-add", None) => Ok(Monoid::IntAdd),
            ("bool-mul", None) => Ok(Monoid::Finite(FiniteMonoid::bool_mul())),
            ("free", Some(k)) => {
                let k: usize = k.parse().map_err(|_| bad())?;
                if !(1..=26).contains(&k) {
                    return Err(Error::Precondition("free monoid needs 1 <= k <= 26".into()));
                }
                Ok(Monoid::Free(k))
            }
            ("cyclic", Some(n)) => Ok(Monoid::Finite(FiniteMonoid::cyclic(
                n.parse().map_err(|_| bad())?,
            )?)),
            ("full-transf", Some(d)) => Ok(Monoid::Finite(FiniteMonoid::full_transformation(
                d.parse().map_err(|_| bad())?,
            )?)),
            ("finite", Some(inline)) if inline.trim_start().starts_with('[') => {
                let rows: Vec<Vec<usize>> = serde_json::from_str(inline)?;
                Ok(Monoid::Finite(FiniteMonoid::new(rows, None)?.with_name(text)))
            }
            ("finite", Some(path)) => {
                let resolved = match base {
                    Some(dir) if Path::new(path).is_relative() => dir.join(path),
                    _ => Path::new(path).to_path_buf(),
                };
                let file: TableFile = serde_json::from_str(&std::fs::read_to_string(&resolved)?)?;
                Ok(Monoid::Finite(FiniteMonoid::from_table_file(file)?.with_name(text)))
            }
            _ => Err(bad()),
        }
    }
}

impl FromStr for Monoid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Monoid::parse_with_base(s, None)
    }
}

impl fmt::Display for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monoid::Finite(m) => match m.name() {
                Some(name) => write!(f, "{name}"),
                None => write!(
                    f,
                    "finite:{}",
                    serde_json::to_string(&m.rows()).expect("table serializes")
                ),
            },
            Monoid::Bicyclic => write!(f, "bicyclic"),
            Monoid::PolyZ => write!(f, "polyZ"),
            Monoid::Free(k) => write!(f, "free:{k}"),
            Monoid::NatAdd => write!(f, "nat-add"),
            Monoid::IntAdd => write!(f, "int-add"),
            Monoid::Product(parts) => {
                write!(f, "product(")?;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{part}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Splits on commas that are not nested inside brackets or parentheses.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut depth = 0i32;
    let mut pieces = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                pieces.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s.trim().is_empty() {
        pieces.push(s[start..].trim());
    }
    pieces
}
