//! Irreducible characters of classical Weyl groups and the Springer
//! correspondence, computed with the staircase (symbol) algorithm.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classical::ClassicalOrbit;
use crate::partitions::{Letter, Partition};

/// Label of an irreducible character of one classical Weyl group factor.
///
/// Type D pairs are unordered and stored larger-first; when both halves
/// coincide the label is degenerate (two characters share it).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeylRep {
    A(Partition),
    B(Partition, Partition),
    C(Partition, Partition),
    D(Partition, Partition),
}

impl WeylRep {
    pub fn d(a: Partition, b: Partition) -> Self {
        if a >= b {
            WeylRep::D(a, b)
        } else {
            WeylRep::D(b, a)
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            WeylRep::A(p) => p.size().saturating_sub(1),
            WeylRep::B(a, b) | WeylRep::C(a, b) | WeylRep::D(a, b) => a.size() + b.size(),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, WeylRep::D(a, b) if a == b)
    }

    pub fn letter(&self) -> Letter {
        match self {
            WeylRep::A(_) => Letter::A,
            WeylRep::B(..) => Letter::B,
            WeylRep::C(..) => Letter::C,
            WeylRep::D(..) => Letter::D,
        }
    }

    /// The two halves of a bipartition label (type A gives the partition and φ).
    pub fn halves(&self) -> (&Partition, Option<&Partition>) {
        match self {
            WeylRep::A(p) => (p, None),
            WeylRep::B(a, b) | WeylRep::C(a, b) | WeylRep::D(a, b) => (a, Some(b)),
        }
    }
}

/// Compact text for a partition: `41^2` when parts are single digits,
/// otherwise comma separated; the empty partition is `phi`.
pub fn compact(p: &Partition) -> String {
    if p.is_empty() {
        return "phi".into();
    }
    let parts = p.parts();
    let comma = parts[0] >= 10;
    let mut out = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let v = parts[i];
        let m = parts[i..].iter().take_while(|&&x| x == v).count();
        out.push(if m > 1 { format!("{v}^{m}") } else { v.to_string() });
        i += m;
    }
    out.join(if comma { "," } else { "" })
}

impl fmt::Display for WeylRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeylRep::A(p) => write!(f, "({})", compact(p)),
            WeylRep::B(a, b) | WeylRep::C(a, b) => write!(f, "(({}),({}))", compact(a), compact(b)),
            WeylRep::D(a, b) => write!(f, "{{({}),({})}}", compact(a), compact(b)),
        }
    }
}

/// Staircase algorithm: parts in increasing order, padded with zeros to the
/// parity the family needs, plus the staircase 0, 1, 2, …; the odd and even
/// entries, halved and de-staircased, give the two halves.
pub fn springer_rep(o: &ClassicalOrbit) -> WeylRep {
    let letter = o.fam.letter;
    if letter == Letter::A {
        return WeylRep::A(o.p.clone());
    }
    let mut inc: Vec<usize> = o.p.parts().iter().rev().copied().collect();
    let want_odd = letter == Letter::B;
    if (inc.len() % 2 == 1) != want_odd {
        inc.insert(0, 0);
    }
    let (mut odd, mut even) = (Vec::new(), Vec::new());
    for (i, &x) in inc.iter().enumerate() {
        let mu = x + i;
        if mu % 2 == 1 {
            odd.push((mu - 1) / 2);
        } else {
            even.push(mu / 2);
        }
    }
    let destair = |v: Vec<usize>| Partition::new(v.into_iter().enumerate().map(|(i, x)| x - i).collect());
    let (odd, even) = (destair(odd), destair(even));
    match letter {
        Letter::B => WeylRep::B(odd, even),
        Letter::C => WeylRep::C(odd, even),
        _ => WeylRep::d(odd, even),
    }
}

/// Σ (i-1) λ_i over parts in decreasing order.
pub fn n_of(p: &Partition) -> usize {
    p.n_invariant()
}

/// Lowest degree of the coinvariant algebra in which the character occurs.
pub fn b_invariant(rep: &WeylRep) -> usize {
    match rep {
        WeylRep::A(p) => n_of(p),
        WeylRep::B(a, b) | WeylRep::C(a, b) => 2 * n_of(a) + 2 * n_of(b) + b.size(),
        WeylRep::D(a, b) => 2 * n_of(a) + 2 * n_of(b) + a.size().min(b.size()),
    }
}

pub fn tensor_sign(rep: &WeylRep) -> WeylRep {
    match rep {
        WeylRep::A(p) => WeylRep::A(p.transpose()),
        WeylRep::B(a, b) => WeylRep::B(b.transpose(), a.transpose()),
        WeylRep::C(a, b) => WeylRep::C(b.transpose(), a.transpose()),
        WeylRep::D(a, b) => WeylRep::d(b.transpose(), a.transpose()),
    }
}

pub fn trivial(letter: Letter, rank: usize) -> WeylRep {
    let n = Partition::new(vec![rank]);
    match letter {
        Letter::A => WeylRep::A(Partition::new(vec![rank + 1])),
        Letter::B => WeylRep::B(n, Partition::empty()),
        Letter::C => WeylRep::C(n, Partition::empty()),
        Letter::D => WeylRep::d(n, Partition::empty()),
    }
}
