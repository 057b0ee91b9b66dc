use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Ordinal below `ω^ω` in Cantor normal form: `(exponent, coefficient)`
/// terms with strictly decreasing exponents and positive coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("ordinal syntax at offset {offset}: {message}")]
pub struct OrdinalParseError {
    pub offset: usize,
    pub message: String,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn finite(n: u64) -> Self {
        Ordinal::from_terms(vec![(0, n)])
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(1)
    }

    pub fn omega_pow(k: u32) -> Self {
        Ordinal::from_terms(vec![(k, 1)])
    }

    /// Sum `Σ ω^e·c` of the given terms in the given order.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Self {
        terms.into_iter().fold(Ordinal::zero(), |acc, (e, c)| acc.add(&Ordinal { terms: if c == 0 { vec![] } else { vec![(e, c)] } }))
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    /// Nonzero with no finite part.
    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some(&(e, _)) if e > 0)
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some(&(0, _)))
    }

    /// Exponent of the last term: the Cantor–Bendixson rank of this point
    /// in any ordinal interval containing it. Zero for `0`.
    pub fn point_rank(&self) -> u32 {
        self.terms.last().map_or(0, |&(e, _)| e)
    }

    pub fn leading_exponent(&self) -> Option<u32> {
        self.terms.first().map(|&(e, _)| e)
    }

    pub fn coefficient(&self, e: u32) -> u64 {
        self.terms.iter().find(|t| t.0 == e).map_or(0, |t| t.1)
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(&(e, c)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self.terms.iter().copied().take_while(|t| t.0 > e).collect();
        let same = self.terms.iter().find(|t| t.0 == e).map_or(0, |t| t.1);
        terms.push((e, same + c));
        terms.extend_from_slice(&other.terms[1..]);
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::finite(1))
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor is nonzero");
        last.1 -= 1;
        if last.1 == 0 {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    /// `ω·self`.
    pub fn omega_times(&self) -> Ordinal {
        Ordinal { terms: self.terms.iter().map(|&(e, c)| (e + 1, c)).collect() }
    }

    /// Largest `γ` with `ω·γ ≤ self`: drop the finite part and lower every
    /// exponent by one.
    pub fn div_omega(&self) -> Ordinal {
        Ordinal { terms: self.terms.iter().filter(|t| t.0 > 0).map(|&(e, c)| (e - 1, c)).collect() }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalParseError;

    /// Sums of terms `n`, `w`, `w^k`, `w*n`, `w^k*n`; `ω` is accepted for
    /// `w` and spaces are ignored. Terms may be given in any order and are
    /// added as ordinals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |offset: usize, message: &str| OrdinalParseError { offset, message: message.to_string() };
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(err(0, "empty ordinal"));
        }
        let mut pos = 0;
        let number = |pos: &mut usize| -> Option<u64> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].1.is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                return None;
            }
            chars[start..*pos].iter().map(|c| c.1).collect::<String>().parse().ok()
        };
        let mut acc = Ordinal::zero();
        loop {
            let at = chars.get(pos).map_or(s.len(), |c| c.0);
            let term = match chars.get(pos).map(|c| c.1) {
                Some('w') | Some('ω') => {
                    pos += 1;
                    let mut e = 1u32;
                    if chars.get(pos).map(|c| c.1) == Some('^') {
                        pos += 1;
                        let at = chars.get(pos).map_or(s.len(), |c| c.0);
                        e = number(&mut pos)
                            .and_then(|n| u32::try_from(n).ok())
                            .ok_or_else(|| err(at, "expected a natural-number exponent"))?;
                    }
                    let mut c = 1u64;
                    if chars.get(pos).map(|c| c.1) == Some('*') {
                        pos += 1;
                        let at = chars.get(pos).map_or(s.len(), |c| c.0);
                        c = number(&mut pos).ok_or_else(|| err(at, "expected a coefficient"))?;
                    }
                    Ordinal::from_terms(vec![(e, c)])
                }
                Some(c) if c.is_ascii_digit() => Ordinal::finite(number(&mut pos).ok_or_else(|| err(at, "number too large"))?),
                _ => return Err(err(at, "expected a term")),
            };
            acc = acc.add(&term);
            match chars.get(pos) {
                None => return Ok(acc),
                Some((_, '+')) => pos += 1,
                Some(&(o, _)) => return Err(err(o, "expected '+' or end of input")),
            }
        }
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
