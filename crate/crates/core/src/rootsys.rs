//! Explicit Euclidean root systems with exact rational coordinates.
//!
//! Simple roots follow Bourbaki numbering. E6 and E7 live inside the
//! 8-dimensional E8 model; products are realized block-diagonally.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::partitions::{is_valid, ClassicalFamily, Letter, Partition, PartitionError};

pub type Q = Ratio<i64>;
pub type Vector = Vec<Q>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("unsupported type {0}")]
    Unsupported(String),
    #[error("malformed Cartan type `{0}`")]
    Parse(String),
    #[error("not a simple system: {0}")]
    NotSimple(String),
    #[error("diagram has {got} labels, expected {expected}")]
    WddLength { got: usize, expected: usize },
    #[error("dimension mismatch: {got} coordinates, expected {expected}")]
    Dimension { got: usize, expected: usize },
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn half(n: i64) -> Q {
    Q::new(n, 2)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: Q, x: &[Q], y: &[Q]) -> Vector {
    y.iter().zip(x).map(|(yi, xi)| yi + a * xi).collect()
}

fn add(x: &[Q], y: &[Q]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn is_zero(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Reflection of `v` in the hyperplane orthogonal to `a`.
pub fn reflect(v: &[Q], a: &[Q]) -> Vector {
    let c = q(2) * dot(v, a) / dot(a, a);
    axpy(-c, a, v)
}

/// Solves `m x = rhs` for square nonsingular `m`.
pub fn solve(m: &[Vector], rhs: &[Q]) -> Option<Vector> {
    let n = m.len();
    let mut a: Vec<Vector> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(*r);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n]).collect())
}

fn gram(vs: &[Vector]) -> Vec<Vector> {
    vs.iter().map(|a| vs.iter().map(|b| dot(a, b)).collect()).collect()
}

/// Coefficients of `v` in the basis `basis` (which must span a space containing `v`).
pub fn coefficients(basis: &[Vector], v: &[Q]) -> Option<Vector> {
    let g = gram(basis);
    let rhs: Vector = basis.iter().map(|b| dot(b, v)).collect();
    let c = solve(&g, &rhs)?;
    let back = basis.iter().zip(&c).fold(vec![Q::zero(); v.len()], |acc, (b, ci)| axpy(*ci, b, &acc));
    (back == v).then_some(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Kind {
    fn order(self) -> u8 {
        match self {
            Kind::E => 0,
            Kind::F => 1,
            Kind::G => 2,
            Kind::D => 3,
            Kind::C => 4,
            Kind::B => 5,
            Kind::A => 6,
        }
    }

    pub fn is_exceptional(self) -> bool {
        matches!(self, Kind::E | Kind::F | Kind::G)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SimpleType {
    pub kind: Kind,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(kind: Kind, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match kind {
            Kind::A => rank >= 1,
            Kind::B | Kind::C => rank >= 1,
            Kind::D => rank >= 2,
            Kind::E => (6..=8).contains(&rank),
            Kind::F => rank == 4,
            Kind::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { kind, rank })
        } else {
            Err(RootSystemError::Unsupported(format!("{kind}{rank}")))
        }
    }

    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match (self.kind, n) {
            (Kind::A, _) => n * (n + 1),
            (Kind::B | Kind::C, _) => 2 * n * n,
            (Kind::D, _) => 2 * n * (n - 1),
            (Kind::E, 6) => 72,
            (Kind::E, 7) => 126,
            (Kind::E, _) => 240,
            (Kind::F, _) => 48,
            (Kind::G, _) => 12,
        }
    }

    fn ambient_dim(&self) -> usize {
        match self.kind {
            Kind::A => self.rank + 1,
            Kind::B | Kind::C | Kind::D => self.rank,
            Kind::E => 8,
            Kind::F => 4,
            Kind::G => 3,
        }
    }

    /// Simple roots in Bourbaki order, in the standard realization.
    fn simple_roots(&self) -> Vec<Vector> {
        let n = self.rank;
        let dim = self.ambient_dim();
        let e = |i: usize| -> Vector {
            let mut v = vec![Q::zero(); dim];
            v[i] = Q::one();
            v
        };
        let sub = |i: usize, j: usize| -> Vector { axpy(-Q::one(), &e(j), &e(i)) };
        match self.kind {
            Kind::A => (0..n).map(|i| sub(i, i + 1)).collect(),
            Kind::B | Kind::C | Kind::D => {
                let mut s: Vec<Vector> = (0..n - 1).map(|i| sub(i, i + 1)).collect();
                match self.kind {
                    Kind::B => s.push(e(n - 1)),
                    Kind::C => s.push(e(n - 1).iter().map(|x| x * q(2)).collect()),
                    _ => s.push(add(&e(n - 2), &e(n - 1))),
                }
                s
            }
            Kind::G => {
                // Plane x+y+z = 0; the first simple root is short.
                vec![vec![q(1), q(-1), q(0)], vec![q(-2), q(1), q(1)]]
            }
            Kind::F => vec![sub(1, 2), sub(2, 3), e(3), vec![half(1), half(-1), half(-1), half(-1)]],
            Kind::E => {
                let mut s = vec![
                    vec![half(1), half(-1), half(-1), half(-1), half(-1), half(-1), half(-1), half(1)],
                    add(&e(0), &e(1)),
                ];
                for i in 0..6 {
                    s.push(sub(i + 1, i));
                }
                s.truncate(n);
                s
            }
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind, self.rank)
    }
}

impl Ord for SimpleType {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.kind.order(), std::cmp::Reverse(self.rank)).cmp(&(other.kind.order(), std::cmp::Reverse(other.rank)))
    }
}

impl PartialOrd for SimpleType {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A multiset of simple factors in canonical order (E, F, G, D, C, B, A; larger rank first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CartanType(pub Vec<SimpleType>);

impl CartanType {
    pub fn new(mut factors: Vec<SimpleType>) -> Self {
        factors.sort();
        CartanType(factors)
    }

    pub fn simple(kind: Kind, rank: usize) -> Result<Self, RootSystemError> {
        Ok(CartanType(vec![SimpleType::new(kind, rank)?]))
    }

    pub fn rank(&self) -> usize {
        self.0.iter().map(|f| f.rank).sum()
    }

    pub fn root_count(&self) -> usize {
        self.0.iter().map(|f| f.root_count()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Rewrites low-rank coincidences (B1, C1 as A1; D2 as 2A1; D3 as A3; C2 as B2)
    /// so that isomorphic types compare equal.
    pub fn normalized(&self) -> CartanType {
        let mut out = Vec::new();
        for f in &self.0 {
            match (f.kind, f.rank) {
                (Kind::B | Kind::C, 1) => out.push(SimpleType { kind: Kind::A, rank: 1 }),
                (Kind::C, 2) => out.push(SimpleType { kind: Kind::B, rank: 2 }),
                (Kind::D, 2) => {
                    out.push(SimpleType { kind: Kind::A, rank: 1 });
                    out.push(SimpleType { kind: Kind::A, rank: 1 });
                }
                (Kind::D, 3) => out.push(SimpleType { kind: Kind::A, rank: 3 }),
                _ => out.push(*f),
            }
        }
        CartanType::new(out)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut pieces = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let t = self.0[i];
            let m = self.0[i..].iter().take_while(|&&x| x == t).count();
            pieces.push(if m > 1 { format!("{m}{t}") } else { t.to_string() });
            i += m;
        }
        f.write_str(&pieces.join("+"))
    }
}

impl Serialize for CartanType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for CartanType {
    type Err = RootSystemError;

    /// Accepts `D6+A1`, `2A1`, `E_7+A_1`, `0`, and ignores parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RootSystemError::Parse(s.to_string());
        let clean: String = s.chars().filter(|c| !matches!(c, ' ' | '$' | '_' | '{' | '}' | '(' | ')')).collect();
        let mut factors = Vec::new();
        for tok in clean.split('+') {
            if tok.is_empty() {
                return Err(bad());
            }
            if tok == "0" {
                continue;
            }
            let letter_at = tok.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(bad)?;
            let mult = if letter_at == 0 { 1 } else { tok[..letter_at].parse::<usize>().map_err(|_| bad())? };
            let kind = match &tok[letter_at..letter_at + 1] {
                "A" => Kind::A,
                "B" => Kind::B,
                "C" => Kind::C,
                "D" => Kind::D,
                "E" => Kind::E,
                "F" => Kind::F,
                "G" => Kind::G,
                _ => return Err(bad()),
            };
            let rank = tok[letter_at + 1..].parse::<usize>().map_err(|_| bad())?;
            let t = SimpleType::new(kind, rank)?;
            factors.extend(std::iter::repeat(t).take(mult));
        }
        Ok(CartanType::new(factors))
    }
}

/// A realized root system: all roots, a simple system in Bourbaki order per
/// factor, and the ambient dimension.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan: CartanType,
    pub simple: Vec<Vector>,
    pub roots: Vec<Vector>,
    pub dim: usize,
    height: Vector,
}

/// Closes `gens` under the reflections they define.
fn generate_roots(simple: &[Vector]) -> Vec<Vector> {
    let mut seen: HashSet<Vector> = simple.iter().cloned().collect();
    let mut frontier: Vec<Vector> = simple.to_vec();
    while let Some(v) = frontier.pop() {
        for s in simple {
            let w = reflect(&v, s);
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    let mut roots: Vec<Vector> = seen.into_iter().collect();
    roots.sort();
    roots
}

/// Vector pairing to 1 with every element of `simple`; the pairing with a
/// root is then its height.
fn height_vector(simple: &[Vector], dim: usize) -> Vector {
    if simple.is_empty() {
        return vec![Q::zero(); dim];
    }
    let c = solve(&gram(simple), &vec![Q::one(); simple.len()]).expect("simple roots are independent");
    simple.iter().zip(&c).fold(vec![Q::zero(); dim], |acc, (s, ci)| axpy(*ci, s, &acc))
}

impl RootSystem {
    pub fn build(cartan: &CartanType) -> RootSystem {
        let dim: usize = cartan.0.iter().map(|f| f.ambient_dim()).sum();
        let mut simple = Vec::new();
        let mut offset = 0;
        for f in &cartan.0 {
            for s in f.simple_roots() {
                let mut v = vec![Q::zero(); dim];
                v[offset..offset + s.len()].clone_from_slice(&s);
                simple.push(v);
            }
            offset += f.ambient_dim();
        }
        let mut roots = generate_roots(&simple);
        if roots.is_empty() {
            roots = Vec::new();
        }
        let height = height_vector(&simple, dim);
        RootSystem { cartan: cartan.clone(), simple, roots, dim, height }
    }

    pub fn of(kind: Kind, rank: usize) -> Result<RootSystem, RootSystemError> {
        Ok(RootSystem::build(&CartanType::simple(kind, rank)?))
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn height(&self, root: &[Q]) -> Q {
        dot(root, &self.height)
    }

    pub fn positive_roots(&self) -> Vec<Vector> {
        self.roots.iter().filter(|r| self.height(r).is_positive()).cloned().collect()
    }

    /// Root counted with its pairing against `h`.
    pub fn count_pairing(&self, h: &[Q], value: Q) -> usize {
        self.roots.iter().filter(|r| dot(r, h) == value).count()
    }

    /// Orbit dimension read from a weighted Dynkin diagram:
    /// #roots minus the roots of ad(h)-degree 0 and 1 (h pairs to label on α_i).
    pub fn dimension_from_wdd(&self, wdd: &Wdd) -> Result<usize, RootSystemError> {
        let lam = lambda_from_wdd(self, wdd)?;
        let h: Vector = lam.coords.iter().map(|x| x * q(2)).collect();
        Ok(self.roots.len() - self.count_pairing(&h, Q::zero()) - self.count_pairing(&h, Q::one()))
    }
}

/// Weighted Dynkin diagram: one label in {0,1,2} per simple root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Wdd(pub Vec<u8>);

impl fmt::Display for Wdd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Wdd {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RootSystemError::Parse(s.to_string());
        let labels: Result<Vec<u8>, _> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<u8>().map_err(|_| bad())).collect()
        } else {
            s.trim().chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect()
        };
        let labels = labels?;
        if labels.iter().any(|&x| x > 2) {
            return Err(bad());
        }
        Ok(Wdd(labels))
    }
}

/// Rational vector in the ambient coordinates of a root system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitesimalCharacter {
    pub coords: Vector,
}

impl InfinitesimalCharacter {
    pub fn new(coords: Vector) -> Self {
        InfinitesimalCharacter { coords }
    }
}

impl fmt::Display for InfinitesimalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(", "))
    }
}

impl Serialize for InfinitesimalCharacter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }
}

/// λ = h/2 in the span of the simple roots, fixed by (λ, α_i) = label_i / 2.
///
/// The realization is read as the dual algebra itself, so its simple roots
/// play the role of the coroots α∨ and the pairing is the plain inner product.
pub fn lambda_from_wdd(rs: &RootSystem, wdd: &Wdd) -> Result<InfinitesimalCharacter, RootSystemError> {
    if wdd.0.len() != rs.rank() {
        return Err(RootSystemError::WddLength { got: wdd.0.len(), expected: rs.rank() });
    }
    let rhs: Vector = wdd.0.iter().map(|&l| half(l as i64)).collect();
    let c = solve(&gram(&rs.simple), &rhs).ok_or_else(|| RootSystemError::NotSimple("singular Gram matrix".into()))?;
    let coords = rs.simple.iter().zip(&c).fold(vec![Q::zero(); rs.dim], |acc, (s, ci)| axpy(*ci, s, &acc));
    Ok(InfinitesimalCharacter::new(coords))
}

/// Halved sl2 weights (r-1)/2, (r-3)/2, …, -(r-1)/2 of every row, restricted
/// to a dominant half: the `rank` largest entries (type A keeps all of them).
pub fn lambda_from_partition(fam: ClassicalFamily, p: &Partition) -> Result<InfinitesimalCharacter, PartitionError> {
    if !is_valid(p, fam)? {
        return Err(PartitionError::Parse(format!("{p} is not an orbit of {fam}")));
    }
    let mut w: Vec<Q> =
        p.parts().iter().flat_map(|&r| (0..r).map(move |j| Q::new(r as i64 - 1 - 2 * j as i64, 2))).collect();
    w.sort_by(|a, b| b.cmp(a));
    let keep = if fam.letter == Letter::A { fam.n } else { fam.rank() };
    w.truncate(keep);
    Ok(InfinitesimalCharacter::new(w))
}

/// One connected component of a subsystem, with its simple roots in
/// Bourbaki order.
#[derive(Clone, Debug)]
pub struct Component {
    pub ty: SimpleType,
    pub simple: Vec<Vector>,
}

/// A root subsystem together with a simple system and its classification.
#[derive(Clone, Debug)]
pub struct Subsystem {
    pub roots: Vec<Vector>,
    pub simple: Vec<Vector>,
    pub components: Vec<Component>,
    pub cartan: CartanType,
}

impl Subsystem {
    /// Roots of `self` lying in the span of the given component.
    pub fn component_roots(&self, comp: &Component) -> Vec<Vector> {
        self.roots.iter().filter(|r| coefficients(&comp.simple, r).is_some()).cloned().collect()
    }
}

/// Builds a subsystem from a closed root set, choosing positivity by
/// `(λ, α)` first and the ambient height second, so λ is dominant.
fn subsystem_from_roots(rs: &RootSystem, lam: &[Q], roots: Vec<Vector>) -> Result<Subsystem, RootSystemError> {
    let key = |r: &Vector| (dot(lam, r), rs.height(r));
    let zero = (Q::zero(), Q::zero());
    let positive: Vec<&Vector> = roots.iter().filter(|r| key(r) > zero).collect();
    let pos_set: HashSet<&Vector> = positive.iter().copied().collect();
    let simple: Vec<Vector> = positive
        .iter()
        .filter(|r| {
            !positive.iter().any(|a| {
                let diff = axpy(-Q::one(), a, r);
                pos_set.contains(&diff)
            })
        })
        .map(|r| (*r).clone())
        .collect();
    let components = classify(&simple)?;
    let cartan = CartanType::new(components.iter().map(|c| c.ty).collect());
    let simple = components.iter().flat_map(|c| c.simple.iter().cloned()).collect();
    Ok(Subsystem { roots, simple, components, cartan })
}

fn check_dim(rs: &RootSystem, lam: &InfinitesimalCharacter) -> Result<(), RootSystemError> {
    if lam.coords.len() != rs.dim {
        return Err(RootSystemError::Dimension { got: lam.coords.len(), expected: rs.dim });
    }
    Ok(())
}

/// Roots α with (λ, α) ∈ ℤ.
pub fn integral_subsystem(rs: &RootSystem, lam: &InfinitesimalCharacter) -> Result<Subsystem, RootSystemError> {
    check_dim(rs, lam)?;
    let roots = rs.roots.iter().filter(|r| dot(&lam.coords, r).is_integer()).cloned().collect();
    subsystem_from_roots(rs, &lam.coords, roots)
}

/// Roots α with (λ, α) = 0, a Levi subsystem.
pub fn zero_levi(rs: &RootSystem, lam: &InfinitesimalCharacter) -> Result<Subsystem, RootSystemError> {
    check_dim(rs, lam)?;
    let roots = rs.roots.iter().filter(|r| dot(&lam.coords, r).is_zero()).cloned().collect();
    subsystem_from_roots(rs, &lam.coords, roots)
}

/// Restriction of a subsystem to roots with (λ, α) = 0.
pub fn zero_levi_within(
    rs: &RootSystem,
    sub: &Subsystem,
    lam: &InfinitesimalCharacter,
) -> Result<Subsystem, RootSystemError> {
    let roots = sub.roots.iter().filter(|r| dot(&lam.coords, r).is_zero()).cloned().collect();
    subsystem_from_roots(rs, &lam.coords, roots)
}

fn cartan_entry(a: &[Q], b: &[Q]) -> i64 {
    let v = q(2) * dot(a, b) / dot(b, b);
    debug_assert!(v.is_integer());
    v.to_integer()
}

/// Splits a simple system into Dynkin components, names each one and orders
/// its simple roots as Bourbaki does. B and C are told apart by whether the
/// end node of the double bond is short (B) or long (C); rank two is named B2.
pub fn classify(simple: &[Vector]) -> Result<Vec<Component>, RootSystemError> {
    let n = simple.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            for b in 0..n {
                if !seen[b] && !dot(&simple[a], &simple[b]).is_zero() {
                    seen[b] = true;
                    members.push(b);
                }
            }
            i += 1;
        }
        let vs: Vec<Vector> = members.iter().map(|&m| simple[m].clone()).collect();
        comps.push(classify_connected(&vs)?);
    }
    comps.sort_by(|a, b| a.ty.cmp(&b.ty).then_with(|| a.simple.cmp(&b.simple)));
    Ok(comps)
}

fn classify_connected(vs: &[Vector]) -> Result<Component, RootSystemError> {
    let n = vs.len();
    let bad = |why: &str| RootSystemError::NotSimple(why.to_string());
    for a in vs {
        for b in vs {
            if a != b && dot(a, b).is_positive() {
                return Err(bad("obtuse angle violated"));
            }
        }
    }
    let bond = |i: usize, j: usize| -> i64 { cartan_entry(&vs[i], &vs[j]) * cartan_entry(&vs[j], &vs[i]) };
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && bond(i, j) > 0).collect()).collect();
    let len2 = |i: usize| dot(&vs[i], &vs[i]);
    let edges: usize = nbrs.iter().map(|x| x.len()).sum::<usize>() / 2;
    if edges != n - 1 {
        return Err(bad("diagram is not a tree"));
    }
    let pick = |order: Vec<usize>, kind: Kind| -> Result<Component, RootSystemError> {
        let ty = SimpleType::new(kind, n)?;
        Ok(Component { ty, simple: order.into_iter().map(|i| vs[i].clone()).collect() })
    };
    if n == 1 {
        return pick(vec![0], Kind::A);
    }
    // Walk a path starting from leaf `s`, avoiding `prev`.
    let walk = |s: usize, prev: Option<usize>| -> Vec<usize> {
        let mut path = vec![s];
        let mut last = prev;
        let mut cur = s;
        loop {
            let next: Vec<usize> = nbrs[cur].iter().copied().filter(|&x| Some(x) != last).collect();
            if next.len() != 1 {
                break;
            }
            last = Some(cur);
            cur = next[0];
            path.push(cur);
        }
        path
    };
    if let Some(branch) = (0..n).find(|&i| nbrs[i].len() == 3) {
        if nbrs.iter().any(|x| x.len() > 3) || (0..n).filter(|&i| nbrs[i].len() == 3).count() > 1 {
            return Err(bad("more than one branch point"));
        }
        if (0..n).any(|i| nbrs[i].iter().any(|&j| bond(i, j) != 1)) {
            return Err(bad("multiple bond in branched diagram"));
        }
        let mut legs: Vec<Vec<usize>> = nbrs[branch].iter().map(|&s| walk(s, Some(branch))).collect();
        legs.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| vs[a[0]].cmp(&vs[b[0]])));
        let lens: Vec<usize> = legs.iter().map(|l| l.len()).collect();
        return match lens.as_slice() {
            [1, 1, _] => {
                // D_n: long leg from its far end to the branch, then the two short leaves.
                let mut order: Vec<usize> = legs[2].iter().rev().copied().collect();
                order.push(branch);
                order.push(legs[0][0]);
                order.push(legs[1][0]);
                pick(order, Kind::D)
            }
            [1, 2, k] if (2..=4).contains(k) => {
                let mut order = vec![legs[1][1], legs[0][0], legs[1][0], branch];
                order.extend(legs[2].iter().copied());
                pick(order, Kind::E)
            }
            _ => Err(bad("unknown branched diagram")),
        };
    }
    let ends: Vec<usize> = (0..n).filter(|&i| nbrs[i].len() == 1).collect();
    let mut chain = walk(ends[0], None);
    let bonds: Vec<i64> = chain.windows(2).map(|w| bond(w[0], w[1])).collect();
    let heavy: Vec<usize> = (0..bonds.len()).filter(|&i| bonds[i] > 1).collect();
    match heavy.as_slice() {
        [] => {
            let rev: Vec<usize> = chain.iter().rev().copied().collect();
            let first = |c: &Vec<usize>| vs[c[0]].clone();
            if first(&rev) > first(&chain) {
                chain = rev;
            }
            pick(chain, Kind::A)
        }
        [i] if bonds[*i] == 3 => {
            if n != 2 {
                return Err(bad("triple bond outside G2"));
            }
            if len2(chain[0]) > len2(chain[1]) {
                chain.reverse();
            }
            pick(chain, Kind::G)
        }
        [i] if bonds[*i] == 2 => {
            if n == 4 && *i == 1 {
                if len2(chain[0]) < len2(chain[3]) {
                    chain.reverse();
                }
                return pick(chain, Kind::F);
            }
            if *i == 0 {
                chain.reverse();
            } else if *i != n - 2 {
                return Err(bad("double bond in the middle"));
            }
            let end_short = len2(chain[n - 1]) < len2(chain[n - 2]);
            if n == 2 && !end_short {
                chain.reverse();
                return pick(chain, Kind::B);
            }
            pick(chain, if end_short { Kind::B } else { Kind::C })
        }
        _ => Err(bad("several multiple bonds")),
    }
}

/// Kind of a block of coordinates inside a classical realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockKind {
    Gl,
    B,
    C,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordBlock {
    pub coords: Vec<usize>,
    pub kind: BlockKind,
}

impl CoordBlock {
    pub fn size(&self) -> usize {
        self.coords.len()
    }
}

/// Groups `coords` into connected blocks of the coordinate graph of `roots`
/// (standard orthogonal coordinates) and names each block by its root count:
/// c(c-1) roots is gl(c), 2c(c-1) is so(2c), 2c² is so(2c+1) or sp(2c).
pub fn coordinate_blocks(roots: &[Vector], coords: &[usize]) -> Vec<CoordBlock> {
    let in_scope: BTreeSet<usize> = coords.iter().copied().collect();
    let support = |r: &Vector| -> Vec<usize> { (0..r.len()).filter(|&i| !r[i].is_zero()).collect() };
    let mut parent: Vec<usize> =
        (0..roots.first().map_or(0, |r| r.len()).max(coords.iter().max().map_or(0, |m| m + 1))).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let scoped: Vec<&Vector> = roots.iter().filter(|r| support(r).iter().all(|i| in_scope.contains(i))).collect();
    for r in &scoped {
        let s = support(r);
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &c in &in_scope {
        let root = find(&mut parent, c);
        groups.entry(root).or_default().push(c);
    }
    let mut blocks: Vec<CoordBlock> = groups
        .into_values()
        .map(|cs| {
            let set: BTreeSet<usize> = cs.iter().copied().collect();
            let rs: Vec<&&Vector> = scoped.iter().filter(|r| support(r).iter().all(|i| set.contains(i))).collect();
            let c = cs.len();
            let count = rs.len();
            let kind = if count == c * (c - 1) {
                BlockKind::Gl
            } else if c >= 2 && count == 2 * c * (c - 1) {
                BlockKind::D
            } else if rs.iter().any(|r| support(r).len() == 1 && r.iter().any(|x| x.abs() == q(2))) {
                BlockKind::C
            } else {
                BlockKind::B
            };
            CoordBlock { coords: cs, kind }
        })
        .collect();
    blocks.sort_by(|a, b| a.coords.cmp(&b.coords));
    blocks
}

/// Names coordinate blocks in coordinate order, keeping classical letters
/// (e.g. `B1+D2`); gl(c) becomes A_{c-1}.
pub fn blocks_type_name(blocks: &[CoordBlock]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for b in blocks {
        let c = b.size();
        let st = match b.kind {
            BlockKind::Gl if c >= 2 => SimpleType { kind: Kind::A, rank: c - 1 },
            BlockKind::Gl => continue,
            BlockKind::B => SimpleType { kind: Kind::B, rank: c },
            BlockKind::C => SimpleType { kind: Kind::C, rank: c },
            BlockKind::D => SimpleType { kind: Kind::D, rank: c },
        };
        parts.push(st.to_string());
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join("+")
}

/// Every pairwise sum of roots in `set` that is a root of `rs` lies in `set`.
pub fn is_closed(rs: &RootSystem, set: &[Vector]) -> bool {
    let all: HashSet<&Vector> = rs.roots.iter().collect();
    let mine: HashSet<&Vector> = set.iter().collect();
    set.iter().all(|a| {
        set.iter().all(|b| {
            let s = add(a, b);
            is_zero(&s) || !all.contains(&s) || mine.contains(&s)
        })
    })
}

/// Conjugates `h` to the dominant chamber of `simple` by simple reflections.
pub fn make_dominant(h: &[Q], simple: &[Vector]) -> Vector {
    let mut h = h.to_vec();
    while let Some(a) = simple.iter().find(|a| dot(&h, a).is_negative()) {
        h = reflect(&h, a);
    }
    h
}

/// Twice the ρ∨ of a root set: the sum of the coroots 2β/(β,β) over the
/// positive roots (positivity taken from `positive_key`).
pub fn sum_positive_coroots(roots: &[Vector], dim: usize, positive_key: impl Fn(&Vector) -> bool) -> Vector {
    roots.iter().filter(|r| positive_key(r)).fold(vec![Q::zero(); dim], |acc, r| axpy(q(2) / dot(r, r), r, &acc))
}
