//! Partition combinatorics for classical orbit labels.
//!
//! Rows are written `[a,b,c]` and columns `(a,b,c)`. Parsing also accepts
//! exponent shorthand (`1^4`) and the compact comma-free form `[71^3]` in
//! which every part is a single digit.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("malformed partition `{0}`")]
    Parse(String),
    #[error("{family} requires {expected} natural dimension, got {n}")]
    BadDimension { family: Letter, n: usize, expected: &'static str },
    #[error("partition {p} has size {size}, expected {n}")]
    SizeMismatch { p: Partition, size: usize, n: usize },
}

/// Weakly decreasing list of positive parts. The empty partition is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = PartitionError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        if v.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::Parse(format!("{v:?} is not weakly decreasing")));
        }
        Ok(Partition::new(v))
    }
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn empty() -> Self {
        Partition::new(Vec::new())
    }

    /// `[1^n]`
    pub fn ones(n: usize) -> Self {
        Partition::new(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, v: usize) -> usize {
        self.parts.iter().filter(|&&x| x == v).count()
    }

    /// Parts followed by zeros up to `len` rows.
    pub fn padded(&self, len: usize) -> Vec<usize> {
        let mut v = self.parts.clone();
        if v.len() < len {
            v.resize(len, 0);
        }
        v
    }

    pub fn transpose(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let cols = (1..=first).map(|j| self.parts.iter().take_while(|&&x| x >= j).count()).collect();
        Partition::new(cols)
    }

    /// Column lengths, i.e. the parts of the transpose.
    pub fn columns(&self) -> Vec<usize> {
        self.transpose().parts
    }

    /// The partition whose columns are `cols` (any order).
    pub fn from_columns(cols: &[usize]) -> Partition {
        Partition::new(cols.to_vec()).transpose()
    }

    fn prefix_sums(&self, len: usize) -> Vec<usize> {
        self.padded(len)
            .iter()
            .scan(0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    /// `self >= other` in dominance order. Sizes must agree.
    pub fn dominates(&self, other: &Partition) -> bool {
        let len = self.len().max(other.len());
        self.size == other.size && self.prefix_sums(len).iter().zip(other.prefix_sums(len)).all(|(a, b)| *a >= b)
    }

    /// Dominance as a partial order; `None` when incomparable.
    pub fn dominance_cmp(&self, other: &Partition) -> Option<Ordering> {
        match (self.dominates(other), other.dominates(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            (false, false) => None,
        }
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition::new(cur.clone()));
                return;
            }
            for k in (1..=max.min(rest)).rev() {
                cur.push(k);
                rec(rest - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// n(λ) = Σ (i-1) λ_i.
    pub fn n_invariant(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, x)| i * x).sum()
    }

    /// Multiset union of rows.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.parts.clone();
        v.extend_from_slice(&other.parts);
        Partition::new(v)
    }

    /// Columns written in round brackets, e.g. `(2,2,2)`.
    pub fn columns_string(&self) -> String {
        let cols: Vec<String> = self.columns().iter().map(|c| c.to_string()).collect();
        format!("({})", cols.join(","))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Partition {
    /// Reads the digit-per-part shorthand of printed tables: `711` is
    /// [7,1,1], `3^22^21^2` is [3,3,2,2,1,1], `1^{10}` is ten ones.
    /// Brackets and parentheses around the body are ignored.
    pub fn from_compact(s: &str) -> Result<Partition, PartitionError> {
        let bad = || PartitionError::Parse(s.to_string());
        let body: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = strip_delims(&body).map(|(b, _)| b).unwrap_or(&body);
        if is_empty_word(body) {
            return Ok(Partition::empty());
        }
        let chars: Vec<char> = body.chars().collect();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let base = chars[i].to_digit(10).filter(|&d| d > 0).ok_or_else(bad)? as usize;
            i += 1;
            let mut exp = 1;
            if chars.get(i) == Some(&'^') {
                i += 1;
                if chars.get(i) == Some(&'{') {
                    let close = chars[i..].iter().position(|&c| c == '}').ok_or_else(bad)? + i;
                    exp = chars[i + 1..close].iter().collect::<String>().parse().map_err(|_| bad())?;
                    i = close + 1;
                } else {
                    exp = chars.get(i).and_then(|c| c.to_digit(10)).ok_or_else(bad)? as usize;
                    i += 1;
                }
            }
            parts.extend(std::iter::repeat(base).take(exp));
        }
        Ok(Partition::new(parts))
    }
}

fn is_empty_word(body: &str) -> bool {
    body.is_empty() || body == "0" || body == "phi" || body == "φ" || body == "\\phi"
}

/// Splits off `[..]` (rows) or `(..)` (columns); the flag is true for columns.
fn strip_delims(body: &str) -> Option<(&str, bool)> {
    if let Some(b) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
        return Some((b, false));
    }
    body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).map(|b| (b, true))
}

/// `[a,b,c]` lists rows and `(a,b,c)` lists columns. Parts may carry
/// exponents (`1^4`, `1^{10}`). Without commas, a body containing `^` is read
/// in the digit-per-part shorthand (`31^2`); a bare number is a single part.
impl FromStr for Partition {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PartitionError::Parse(s.to_string());
        let body: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, columns) = strip_delims(&body).unwrap_or((&body, false));
        let p = if is_empty_word(body) {
            Partition::empty()
        } else if body.contains(',') || !body.contains('^') {
            let mut parts = Vec::new();
            for tok in body.split(',') {
                let tok: String = tok.chars().filter(|c| *c != '{' && *c != '}').collect();
                let (base, exp) = match tok.split_once('^') {
                    Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                    None => (tok.as_str(), 1),
                };
                let base = base.parse::<usize>().map_err(|_| bad())?;
                if base == 0 {
                    return Err(bad());
                }
                parts.extend(std::iter::repeat(base).take(exp));
            }
            Partition::new(parts)
        } else {
            Partition::from_compact(body)?
        };
        Ok(if columns { Partition::from_columns(&p.parts) } else { p })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Letter::A => "A",
            Letter::B => "B",
            Letter::C => "C",
            Letter::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Letter {
    type Err = PartitionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Letter::A),
            "B" => Ok(Letter::B),
            "C" => Ok(Letter::C),
            "D" => Ok(Letter::D),
            _ => Err(PartitionError::Parse(s.to_string())),
        }
    }
}

/// A classical family together with the dimension `N` of its natural module:
/// gl(N), so(N) with N odd (B), sp(N) (C), so(N) with N even (D).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalFamily {
    pub letter: Letter,
    #[serde(rename = "N")]
    pub n: usize,
}

impl ClassicalFamily {
    pub fn new(letter: Letter, n: usize) -> Result<Self, PartitionError> {
        let expected = match letter {
            Letter::A if n == 0 => Some("positive"),
            Letter::B if n % 2 == 0 => Some("odd"),
            Letter::C | Letter::D if n % 2 == 1 => Some("even"),
            _ => None,
        };
        match expected {
            Some(expected) => Err(PartitionError::BadDimension { family: letter, n, expected }),
            None => Ok(ClassicalFamily { letter, n }),
        }
    }

    /// Family of the given Lie rank.
    pub fn of_rank(letter: Letter, rank: usize) -> Self {
        let n = match letter {
            Letter::A => rank + 1,
            Letter::B => 2 * rank + 1,
            Letter::C | Letter::D => 2 * rank,
        };
        ClassicalFamily { letter, n }
    }

    pub fn rank(&self) -> usize {
        match self.letter {
            Letter::A => self.n.saturating_sub(1),
            Letter::B => (self.n - 1) / 2,
            Letter::C | Letter::D => self.n / 2,
        }
    }

    /// Number of roots, which is also the dimension of the nilpotent cone.
    pub fn root_count(&self) -> usize {
        let r = self.rank();
        match self.letter {
            Letter::A => self.n * self.n - self.n,
            Letter::B | Letter::C => 2 * r * r,
            Letter::D => 2 * r * (r.saturating_sub(1)),
        }
    }

    /// Family carrying the Langlands dual algebra (B and C swap).
    pub fn langlands_dual(&self) -> ClassicalFamily {
        match self.letter {
            Letter::B => ClassicalFamily { letter: Letter::C, n: self.n - 1 },
            Letter::C => ClassicalFamily { letter: Letter::B, n: self.n + 1 },
            _ => *self,
        }
    }

    pub fn check_size(&self, p: &Partition) -> Result<(), PartitionError> {
        if p.size() != self.n {
            return Err(PartitionError::SizeMismatch { p: p.clone(), size: p.size(), n: self.n });
        }
        Ok(())
    }

    /// Parity of the parts that must occur with even multiplicity.
    fn constrained_parity(&self) -> Option<usize> {
        match self.letter {
            Letter::A => None,
            Letter::B | Letter::D => Some(0),
            Letter::C => Some(1),
        }
    }
}

impl fmt::Display for ClassicalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(N={})", self.letter, self.n)
    }
}

/// Parity condition for orbits in the family (ignores the size).
pub fn satisfies_parity(p: &Partition, letter: Letter) -> bool {
    let fam = ClassicalFamily { letter, n: p.size() };
    match fam.constrained_parity() {
        None => true,
        Some(par) => {
            let mut i = 0;
            let parts = p.parts();
            while i < parts.len() {
                let v = parts[i];
                let m = parts[i..].iter().take_while(|&&x| x == v).count();
                if v % 2 == par && m % 2 == 1 {
                    return false;
                }
                i += m;
            }
            true
        }
    }
}

pub fn is_valid(p: &Partition, fam: ClassicalFamily) -> Result<bool, PartitionError> {
    fam.check_size(p)?;
    Ok(satisfies_parity(p, fam.letter))
}

/// Largest partition below `p` in dominance order satisfying the parity
/// condition of `letter`.
///
/// Box-moving: take the largest offending part `q`, lower its last
/// occurrence to `q - 1` and raise the first part smaller than `q - 1`.
pub fn collapse(p: &Partition, letter: Letter) -> Partition {
    let Some(par) = (ClassicalFamily { letter, n: p.size() }).constrained_parity() else {
        return p.clone();
    };
    let mut rows = p.parts().to_vec();
    loop {
        let mut bad = None;
        let mut i = 0;
        while i < rows.len() {
            let v = rows[i];
            let m = rows[i..].iter().take_while(|&&x| x == v).count();
            if v > 0 && v % 2 == par && m % 2 == 1 {
                bad = Some((i + m - 1, v));
                break;
            }
            i += m;
        }
        let Some((last, q)) = bad else { break };
        rows[last] -= 1;
        match rows.iter().position(|&x| x < q - 1) {
            Some(j) => rows[j] += 1,
            None => rows.push(1),
        }
        rows.sort_unstable_by(|a, b| b.cmp(a));
    }
    Partition::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p("[3,2,2]").transpose(), p("[3,3,1]"));
        assert_eq!(p("[1,1,1]").transpose(), p("[3]"));
        assert_eq!(p("[7,1,1]").transpose(), p("[3,1^6]"));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(p("[71^3]"), Partition::new(vec![7, 1, 1, 1]));
        assert_eq!(p("[13,1^3]"), Partition::new(vec![13, 1, 1, 1]));
        assert_eq!(p("[3^22^21^2]"), Partition::new(vec![3, 3, 2, 2, 1, 1]));
        assert_eq!(p("(3,1,1)"), Partition::new(vec![3, 1, 1]).transpose());
        assert_eq!(p("[11]"), Partition::new(vec![11]));
        assert_eq!(p("[1^{10}]"), Partition::ones(10));
        assert_eq!(Partition::from_compact("531^8").unwrap(), Partition::new(vec![5, 3, 1, 1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(Partition::from_compact("711").unwrap(), Partition::new(vec![7, 1, 1]));
        assert_eq!(p("[]"), Partition::empty());
        assert!("[a]".parse::<Partition>().is_err());
    }

    #[test]
    fn validity_examples() {
        let b7 = ClassicalFamily::new(Letter::B, 7).unwrap();
        assert!(is_valid(&p("[3,2,2]"), b7).unwrap());
        assert!(!is_valid(&p("[4,2,1]"), b7).unwrap());
        let c6 = ClassicalFamily::new(Letter::C, 6).unwrap();
        assert!(is_valid(&p("[2,1,1,1,1]"), c6).unwrap());
        assert!(is_valid(&p("[3]"), b7).is_err());
        assert!(ClassicalFamily::new(Letter::B, 6).is_err());
    }

    #[test]
    fn collapse_examples() {
        assert_eq!(collapse(&p("[4,2,1]"), Letter::B), p("[3,3,1]"));
        assert_eq!(collapse(&p("[3,1]"), Letter::C), p("[2,2]"));
        assert_eq!(collapse(&p("[3,3,1]"), Letter::B), p("[3,3,1]"));
        assert_eq!(collapse(&p("[14,1,1]"), Letter::D), p("[13,1,1,1]"));
    }

    #[test]
    fn from_columns_examples() {
        assert_eq!(Partition::from_columns(&[2, 2]), p("[2,2]"));
        assert_eq!(Partition::from_columns(&[4, 1, 1]), p("[3,1,1,1]"));
        assert_eq!(Partition::from_columns(&[14, 1, 1]), p("[3,1^13]"));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn dominance() {
        assert!(p("[4,2,1]").dominates(&p("[3,3,1]")));
        assert_eq!(p("[3,1,1,1]").dominance_cmp(&p("[2,2,2]")), None);
    }
}
