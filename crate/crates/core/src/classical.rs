//! Nilpotent orbits in classical Lie algebras, labelled by partitions.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitions::{collapse, is_valid, satisfies_parity, ClassicalFamily, Letter, Partition, PartitionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("{p} is not an orbit of {fam}")]
    Invalid { fam: ClassicalFamily, p: Partition },
    #[error("{0} is not special")]
    NotSpecial(ClassicalOrbit),
    #[error("{0} is very even; the two orbits it labels are not distinguished here")]
    VeryEven(ClassicalOrbit),
    #[error("Levi does not fit: {0}")]
    Levi(String),
}

/// An orbit: a family with natural dimension N and a partition of N
/// satisfying the family's parity condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "OrbitRepr", try_from = "OrbitRepr")]
pub struct ClassicalOrbit {
    pub fam: ClassicalFamily,
    pub p: Partition,
}

#[derive(Serialize, Deserialize)]
struct OrbitRepr {
    family: Letter,
    #[serde(rename = "N")]
    n: usize,
    partition: Partition,
}

impl From<ClassicalOrbit> for OrbitRepr {
    fn from(o: ClassicalOrbit) -> Self {
        OrbitRepr { family: o.fam.letter, n: o.fam.n, partition: o.p }
    }
}

impl TryFrom<OrbitRepr> for ClassicalOrbit {
    type Error = ClassicalError;
    fn try_from(r: OrbitRepr) -> Result<Self, Self::Error> {
        ClassicalOrbit::new(ClassicalFamily::new(r.family, r.n)?, r.partition)
    }
}

impl fmt::Display for ClassicalOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.fam.letter, self.p)
    }
}

impl ClassicalOrbit {
    pub fn new(fam: ClassicalFamily, p: Partition) -> Result<Self, ClassicalError> {
        if is_valid(&p, fam)? {
            Ok(ClassicalOrbit { fam, p })
        } else {
            Err(ClassicalError::Invalid { fam, p })
        }
    }

    /// Orbit of `letter` whose natural dimension is the size of `p`.
    pub fn of(letter: Letter, p: Partition) -> Result<Self, ClassicalError> {
        ClassicalOrbit::new(ClassicalFamily::new(letter, p.size())?, p)
    }

    pub fn zero(fam: ClassicalFamily) -> Self {
        ClassicalOrbit { fam, p: Partition::ones(fam.n) }
    }

    pub fn is_very_even(&self) -> bool {
        self.fam.letter == Letter::D && !self.p.is_empty() && self.p.parts().iter().all(|x| x % 2 == 0)
    }

    /// Every part has the same parity, i.e. the weighted diagram has only
    /// even labels and λ is integral.
    pub fn is_even(&self) -> bool {
        let parts = self.p.parts();
        parts.iter().all(|x| x % 2 == parts[0] % 2)
    }
}

/// All orbits of the family, in reverse lexicographic order of partitions.
pub fn orbits(fam: ClassicalFamily) -> Vec<ClassicalOrbit> {
    Partition::all(fam.n)
        .into_iter()
        .filter(|p| satisfies_parity(p, fam.letter))
        .map(|p| ClassicalOrbit { fam, p })
        .collect()
}

pub fn special_orbits(fam: ClassicalFamily) -> Vec<ClassicalOrbit> {
    orbits(fam).into_iter().filter(is_special).collect()
}

/// Special iff the transpose satisfies the parity rule of B (for B), of C
/// (for C and D). Every orbit in type A is special.
pub fn is_special(o: &ClassicalOrbit) -> bool {
    let t = o.p.transpose();
    match o.fam.letter {
        Letter::A => true,
        Letter::B => satisfies_parity(&t, Letter::B),
        Letter::C | Letter::D => satisfies_parity(&t, Letter::C),
    }
}

/// Orbit dimension from the closed formulas in terms of the transpose.
pub fn dimension(o: &ClassicalOrbit) -> usize {
    let n = o.fam.n;
    let sq: usize = o.p.transpose().parts().iter().map(|c| c * c).sum();
    let odd = o.p.parts().iter().filter(|x| *x % 2 == 1).count();
    match o.fam.letter {
        Letter::A => n * n - sq,
        Letter::B | Letter::D => (n * n - sq) / 2 - (n - odd) / 2,
        Letter::C => (n * n + n) / 2 - (sq + odd) / 2,
    }
}

/// Same-algebra duality: collapse of the transpose (plain transpose in type A).
pub fn ls_dual(o: &ClassicalOrbit) -> ClassicalOrbit {
    ClassicalOrbit { fam: o.fam, p: collapse(&o.p.transpose(), o.fam.letter) }
}

/// Duality into the Langlands dual algebra: B and C exchange with a box
/// moved on the transpose; D and A fall back to [`ls_dual`].
pub fn bv_dual(o: &ClassicalOrbit) -> ClassicalOrbit {
    let target = o.fam.langlands_dual();
    let mut rows = o.p.transpose().parts().to_vec();
    match o.fam.letter {
        Letter::B => {
            if let Some(last) = rows.last_mut() {
                *last -= 1;
            }
        }
        Letter::C => match rows.first_mut() {
            Some(first) => *first += 1,
            None => rows.push(1),
        },
        Letter::A | Letter::D => return ls_dual(o),
    }
    ClassicalOrbit { fam: target, p: collapse(&Partition::new(rows), target.letter) }
}

/// A special orbit split into interlacing skeleton rows, pairs of rows of the
/// family's "wrong" parity (α) and equal pairs of the right parity (β).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialDecomposition {
    pub skeleton: Partition,
    #[serde(rename = "alpha")]
    pub alphas: Vec<usize>,
    #[serde(rename = "beta")]
    pub betas: Vec<usize>,
    pub q: usize,
}

impl SpecialDecomposition {
    pub fn reassemble(&self) -> Partition {
        let mut parts = self.skeleton.parts().to_vec();
        for &x in self.alphas.iter().chain(&self.betas) {
            parts.push(x);
            parts.push(x);
        }
        Partition::new(parts)
    }

    /// Skeleton together with the β pairs: the orbit with all α rows removed.
    pub fn without_alphas(&self) -> Partition {
        let mut parts = self.skeleton.parts().to_vec();
        for &b in &self.betas {
            parts.push(b);
            parts.push(b);
        }
        Partition::new(parts)
    }
}

/// Row-level layout for each family: whether the padded row count is odd,
/// the index of the bottom row, and the parity of α rows.
fn layout(letter: Letter) -> (bool, usize, usize) {
    match letter {
        Letter::B => (true, 0, 0),
        Letter::D => (false, 0, 0),
        _ => (true, 1, 1),
    }
}

/// Rows after zero padding, top row first, with its index `r_i`.
fn padded_rows(p: &Partition, letter: Letter) -> Vec<usize> {
    let (odd_count, _, _) = layout(letter);
    let mut rows = p.parts().to_vec();
    if (rows.len() % 2 == 1) != odd_count {
        rows.push(0);
    }
    rows
}

/// Removes equal adjacent rows by index parity: α pairs of the wrong parity
/// sitting at (odd, even) indices, β pairs of the right parity at (even, odd).
/// Returns `None` if a wrong-parity row survives.
fn decompose_rows(p: &Partition, letter: Letter) -> Option<SpecialDecomposition> {
    let (_, base, alpha_par) = layout(letter);
    let mut rows = padded_rows(p, letter);
    let (mut alphas, mut betas) = (Vec::new(), Vec::new());
    'scan: loop {
        let n = rows.len();
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (rows[i], rows[i + 1]);
            if a != b || a == 0 {
                continue;
            }
            let hi = n - 1 - i + base;
            if a % 2 == alpha_par && hi % 2 == 1 && (letter != Letter::C || hi >= 3) {
                alphas.push(a);
            } else if a % 2 != alpha_par && hi % 2 == 0 {
                betas.push(a);
            } else {
                continue;
            }
            rows.drain(i..i + 2);
            continue 'scan;
        }
        break;
    }
    if rows.iter().any(|&r| r > 0 && r % 2 == alpha_par) {
        return None;
    }
    let k = rows.len();
    let q = match letter {
        Letter::D => k.saturating_sub(2) / 2,
        _ => k.saturating_sub(1) / 2,
    };
    Some(SpecialDecomposition { skeleton: Partition::new(rows), alphas, betas, q })
}

/// Checks the interlacing of a skeleton: strict descent from each even index
/// to the next, weak descent from each odd index.
pub fn skeleton_interlaces(skeleton: &Partition, letter: Letter) -> bool {
    let (_, base, _) = layout(letter);
    let rows = padded_rows(skeleton, letter);
    let n = rows.len();
    (0..n.saturating_sub(1)).all(|i| {
        let hi = n - 1 - i + base;
        if hi % 2 == 0 {
            rows[i] > rows[i + 1]
        } else {
            rows[i] >= rows[i + 1]
        }
    })
}

fn check_special(o: &ClassicalOrbit) -> Result<(), ClassicalError> {
    if o.is_very_even() {
        return Err(ClassicalError::VeryEven(o.clone()));
    }
    if !is_special(o) {
        return Err(ClassicalError::NotSpecial(o.clone()));
    }
    Ok(())
}

pub fn decompose_special(o: &ClassicalOrbit) -> Result<SpecialDecomposition, ClassicalError> {
    if o.fam.letter == Letter::A {
        return Ok(SpecialDecomposition { skeleton: o.p.clone(), alphas: vec![], betas: vec![], q: 0 });
    }
    check_special(o)?;
    decompose_rows(&o.p, o.fam.letter).ok_or_else(|| ClassicalError::NotSpecial(o.clone()))
}

/// Lusztig's canonical quotient, stored as a product (ℤ/2)^k × S_m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct LusztigQuotient {
    pub z2_rank: u32,
    pub symmetric: Option<u8>,
}

impl LusztigQuotient {
    pub const TRIVIAL: LusztigQuotient = LusztigQuotient { z2_rank: 0, symmetric: None };

    pub fn z2_power(q: u32) -> Self {
        LusztigQuotient { z2_rank: q, symmetric: None }
    }

    /// S2 is recorded as ℤ/2; S3, S4, S5 keep their own slot.
    pub fn symmetric(m: u8) -> Self {
        match m {
            0 | 1 => Self::TRIVIAL,
            2 => Self::z2_power(1),
            _ => LusztigQuotient { z2_rank: 0, symmetric: Some(m) },
        }
    }

    pub fn product(self, other: Self) -> Self {
        let symmetric = match (self.symmetric, other.symmetric) {
            (Some(_), Some(_)) => panic!("products of two non-abelian quotients do not occur"),
            (a, b) => a.or(b),
        };
        LusztigQuotient { z2_rank: self.z2_rank + other.z2_rank, symmetric }
    }

    pub fn conj_class_count(&self) -> u64 {
        let sym = match self.symmetric {
            None => 1,
            Some(3) => 3,
            Some(4) => 5,
            Some(5) => 7,
            Some(m) => panic!("S{m} does not occur"),
        };
        (1u64 << self.z2_rank) * sym
    }

    pub fn descriptor(&self) -> String {
        let z = match self.z2_rank {
            0 => None,
            1 => Some("S2".to_string()),
            k => Some(format!("(Z/2)^{k}")),
        };
        match (self.symmetric, z) {
            (None, None) => "1".into(),
            (None, Some(z)) => z,
            (Some(m), None) => format!("S{m}"),
            (Some(m), Some(z)) => format!("S{m}x{z}"),
        }
    }
}

impl fmt::Display for LusztigQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl std::str::FromStr for LusztigQuotient {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "1" | "trivial" => Ok(Self::TRIVIAL),
            "S2" | "Z/2" => Ok(Self::z2_power(1)),
            "S3" => Ok(Self::symmetric(3)),
            "S4" => Ok(Self::symmetric(4)),
            "S5" => Ok(Self::symmetric(5)),
            other => other
                .strip_prefix("(Z/2)^")
                .and_then(|k| k.parse().ok())
                .map(Self::z2_power)
                .ok_or_else(|| format!("unknown quotient `{other}`")),
        }
    }
}

impl Serialize for LusztigQuotient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LusztigQuotient", 2)?;
        st.serialize_field("descriptor", &self.descriptor())?;
        st.serialize_field("conj_class_count", &self.conj_class_count())?;
        st.end()
    }
}

pub fn lusztig_quotient(o: &ClassicalOrbit) -> Result<LusztigQuotient, ClassicalError> {
    Ok(LusztigQuotient::z2_power(decompose_special(o)?.q as u32))
}

/// Quotient for a special orbit that may be very even (as happens for the
/// Richardson orbits of Levis made only of gl blocks); very even skeletons
/// contribute nothing.
pub fn lusztig_quotient_lenient(o: &ClassicalOrbit) -> Result<LusztigQuotient, ClassicalError> {
    if o.fam.letter == Letter::A {
        return Ok(LusztigQuotient::TRIVIAL);
    }
    if !is_special(o) {
        return Err(ClassicalError::NotSpecial(o.clone()));
    }
    decompose_rows(&o.p, o.fam.letter)
        .map(|d| LusztigQuotient::z2_power(d.q as u32))
        .ok_or_else(|| ClassicalError::NotSpecial(o.clone()))
}

/// Size of the special unipotent packet: 2^q.
pub fn unipotent_count(o: &ClassicalOrbit) -> Result<u64, ClassicalError> {
    Ok(1u64 << decompose_special(o)?.q)
}

/// A Levi subalgebra gl(a_1) + … + gl(a_x) + g(m) of a classical algebra,
/// where g(m) is the co-factor of the same family and rank m (absent in type A).
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LeviSpec {
    pub gl: Vec<usize>,
    pub cofactor: usize,
}

impl LeviSpec {
    pub fn new(mut gl: Vec<usize>, cofactor: usize) -> Self {
        gl.sort_unstable_by(|a, b| b.cmp(a));
        LeviSpec { gl, cofactor }
    }
}

impl fmt::Display for LeviSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.gl.iter().map(|a| format!("gl({a})")).collect();
        if self.cofactor > 0 {
            parts.push(format!("rank {} co-factor", self.cofactor));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Richardson orbit induced from the zero orbit of a Levi: columns a, a for
/// each gl(a) (a alone in type A) plus the single column of the co-factor's
/// zero orbit, collapsed into the target family.
pub fn induce_zero(levi: &LeviSpec, target: ClassicalFamily) -> Result<ClassicalOrbit, ClassicalError> {
    let gl: usize = levi.gl.iter().sum();
    let mut cols = Vec::new();
    let co_dim = match target.letter {
        Letter::A => {
            if gl != target.n || levi.cofactor != 0 {
                return Err(ClassicalError::Levi(format!("{levi} in gl({})", target.n)));
            }
            cols.extend(&levi.gl);
            0
        }
        Letter::B => 2 * levi.cofactor + 1,
        Letter::C | Letter::D => 2 * levi.cofactor,
    };
    if target.letter != Letter::A {
        if 2 * gl + co_dim != target.n {
            return Err(ClassicalError::Levi(format!("{levi} in {target}")));
        }
        for &a in &levi.gl {
            cols.push(a);
            cols.push(a);
        }
        if co_dim > 0 {
            cols.push(co_dim);
        }
    }
    let p = collapse(&Partition::from_columns(&cols), target.letter);
    ClassicalOrbit::new(target, p)
}

/// The associated-variety formula: the dual of the α-free part, computed in
/// its own smaller algebra, with the columns α, α added back and collapsed.
pub fn union_formula(o: &ClassicalOrbit, dec: &SpecialDecomposition) -> Result<ClassicalOrbit, ClassicalError> {
    let removed: usize = 2 * dec.alphas.iter().sum::<usize>();
    let small = ClassicalFamily::new(o.fam.letter, o.fam.n - removed)?;
    let inner = ClassicalOrbit::new(small, dec.without_alphas())?;
    let o_prime = bv_dual(&inner);
    let mut cols = o_prime.p.columns();
    for &a in &dec.alphas {
        cols.push(a);
        cols.push(a);
    }
    let target = o.fam.langlands_dual();
    ClassicalOrbit::new(target, collapse(&Partition::from_columns(&cols), target.letter))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orbit(l: Letter, s: &str) -> ClassicalOrbit {
        ClassicalOrbit::of(l, s.parse().unwrap()).unwrap()
    }

    #[test]
    fn specialness() {
        assert!(is_special(&orbit(Letter::B, "[3,2,2]")));
        assert!(!is_special(&orbit(Letter::C, "[2,1,1,1,1]")));
        assert!(is_special(&orbit(Letter::D, "[3,1^13]")));
        assert!(is_special(&orbit(Letter::A, "[3,1]")));
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension(&orbit(Letter::B, "[7]")), 18);
        assert_eq!(dimension(&orbit(Letter::D, "[5,3,1,1,1,1]")), 46);
        assert_eq!(dimension(&orbit(Letter::C, "[3,3]")), 14);
        assert_eq!(dimension(&orbit(Letter::C, "[1^6]")), 0);
    }

    #[test]
    fn duals() {
        assert_eq!(ls_dual(&orbit(Letter::D, "[3,1^13]")).p, "[13,1,1,1]".parse().unwrap());
        assert_eq!(ls_dual(&orbit(Letter::A, "[3,1,1,1]")).p, "[4,1,1]".parse().unwrap());
        assert_eq!(ls_dual(&orbit(Letter::B, "[9]")).p, Partition::ones(9));
        assert_eq!(bv_dual(&orbit(Letter::B, "[7]")), orbit(Letter::C, "[1^6]"));
        assert_eq!(bv_dual(&orbit(Letter::B, "[3,2,2]")), orbit(Letter::C, "[3,3]"));
        assert_eq!(bv_dual(&orbit(Letter::B, "[5,1,1]")), orbit(Letter::C, "[2,2,1,1]"));
        assert_eq!(bv_dual(&orbit(Letter::B, "[7,1,1]")), orbit(Letter::C, "[2,2,1^4]"));
    }

    #[test]
    fn decompositions() {
        let d = decompose_special(&orbit(Letter::B, "[3,2,2]")).unwrap();
        assert_eq!((d.skeleton.parts(), d.alphas.as_slice(), d.q), (&[3usize][..], &[2usize][..], 0));
        assert_eq!(decompose_special(&orbit(Letter::B, "[7,1,1]")).unwrap().q, 1);
        assert_eq!(decompose_special(&orbit(Letter::B, "[7,5,3]")).unwrap().q, 1);
        assert!(matches!(decompose_special(&orbit(Letter::B, "[3,3,2,2,1]")), Err(ClassicalError::NotSpecial(_))));
        assert!(matches!(decompose_special(&orbit(Letter::D, "[2,2]")), Err(ClassicalError::VeryEven(_))));
        assert_eq!(unipotent_count(&orbit(Letter::B, "[7,1,1]")).unwrap(), 2);
    }

    #[test]
    fn induction() {
        let so = |n| ClassicalFamily::new(Letter::D, n).unwrap();
        assert_eq!(induce_zero(&LeviSpec::new(vec![2], 0), so(4)).unwrap().p, "[2,2]".parse().unwrap());
        assert_eq!(induce_zero(&LeviSpec::new(vec![1], 7), so(16)).unwrap().p, "[3,1^13]".parse().unwrap());
        assert_eq!(induce_zero(&LeviSpec::new(vec![2, 1], 0), so(6)).unwrap().p, "[3,3]".parse().unwrap());
        assert!(induce_zero(&LeviSpec::new(vec![2], 0), so(6)).is_err());
    }

    #[test]
    fn quotient_text() {
        for s in ["1", "S2", "S3", "S4", "S5", "(Z/2)^3"] {
            assert_eq!(s.parse::<LusztigQuotient>().unwrap().descriptor(), s);
        }
        assert_eq!(LusztigQuotient::symmetric(5).conj_class_count(), 7);
    }
}
