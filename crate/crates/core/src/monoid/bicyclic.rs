use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The element `q^a p^b` of the bicyclic monoid `⟨p, q : pq = 1⟩`.
///
/// Every element has exactly one such normal form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BicyclicElement {
    pub a: u64,
    pub b: u64,
}

impl BicyclicElement {
    pub const IDENTITY: BicyclicElement = BicyclicElement { a: 0, b: 0 };
    pub const P: BicyclicElement = BicyclicElement { a: 0, b: 1 };
    pub const Q: BicyclicElement = BicyclicElement { a: 1, b: 0 };

    pub fn new(a: u64, b: u64) -> Self {
        BicyclicElement { a, b }
    }

    /// `q^a p^b · q^c p^d`: the middle `p^b q^c` cancels `t = min(b, c)` pairs.
    pub fn mul(self, other: Self) -> Self {
        let t = self.b.min(other.a);
        BicyclicElement {
            a: self.a + other.a - t,
            b: self.b + other.b - t,
        }
    }

    /// All `m` with `self · m = target`.
    pub fn right_divisors(self, target: Self) -> Vec<Self> {
        let mut out = Vec::new();
        // c < b: t = c, so the q-power is unchanged and d = y - b + c.
        if self.a == target.a {
            for c in 0..self.b {
                if target.b + c >= self.b {
                    out.push(BicyclicElement::new(c, target.b + c - self.b));
                }
            }
        }
        // c >= b: t = b, so c = x - a + b and d = y.
        if target.a >= self.a {
            out.push(BicyclicElement::new(target.a - self.a + self.b, target.b));
        }
        out
    }
}

impl fmt::Display for BicyclicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 0 && self.b == 0 {
            return write!(f, "1");
        }
        for (letter, power) in [('q', self.a), ('p', self.b)] {
            match power {
                0 => {}
                1 => write!(f, "{letter}")?,
                k => write!(f, "{letter}^{k}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for BicyclicElement {
    type Err = Error;

    /// Parses any word over `p`, `q` (with optional `^k` powers) and reduces it.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "1" {
            return Ok(Self::IDENTITY);
        }
        if text.is_empty() {
            return Err(Error::Parse("empty bicyclic word".into()));
        }
        let bad = || Error::Parse(format!("malformed bicyclic word {s:?}"));
        let mut acc = Self::IDENTITY;
        let mut chars = text.chars().peekable();
        while let Some(ch) = chars.next() {
            let letter = match ch {
                'p' => Self::P,
                'q' => Self::Q,
                _ => return Err(bad()),
            };
            let mut power = 1u64;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                power = digits.parse().map_err(|_| bad())?;
            }
            for _ in 0..power {
                acc = acc.mul(letter);
            }
        }
        Ok(acc)
    }
}
