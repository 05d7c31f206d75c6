//! Bundled orbit tables for the exceptional types, checked on load.
//!
//! Each TSV file carries a schema line, its type, a provenance note and the
//! SHA-256 of its data rows. Dimensions are recomputed from the weighted
//! Dynkin diagrams; duality must be an involution on special orbits and must
//! preserve the canonical quotient.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::classical::LusztigQuotient;
use crate::rootsys::{CartanType, Kind, RootSystem, SimpleType, Wdd};

pub const SCHEMA: u32 = 1;
pub const TYPES: [&str; 5] = ["G2", "F4", "E6", "E7", "E8"];

const EMBEDDED: [(&str, &str); 5] = [
    ("G2", include_str!("../data/excdata/G2.tsv")),
    ("F4", include_str!("../data/excdata/F4.tsv")),
    ("E6", include_str!("../data/excdata/E6.tsv")),
    ("E7", include_str!("../data/excdata/E7.tsv")),
    ("E8", include_str!("../data/excdata/E8.tsv")),
];

#[derive(Debug, Error)]
pub enum ExcDataError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("{ty} {label}: {invariant}")]
    Integrity { ty: String, label: String, invariant: String },
    #[error("no table for type {0}")]
    UnknownType(String),
    #[error("{ty} has no orbit labelled `{label}`")]
    UnknownOrbit { ty: String, label: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcOrbitRecord {
    #[serde(rename = "type")]
    pub ty: String,
    pub label: String,
    pub wdd: Wdd,
    pub dim: usize,
    pub special: bool,
    pub dual_label: String,
    /// Canonical quotient; recorded for special orbits only.
    pub abar: Option<LusztigQuotient>,
}

#[derive(Clone, Debug)]
pub struct TypeTable {
    pub ty: SimpleType,
    pub records: Vec<ExcOrbitRecord>,
    pub source: String,
    pub checksum: String,
    by_label: HashMap<String, usize>,
    by_wdd: HashMap<Wdd, usize>,
}

impl TypeTable {
    pub fn get(&self, label: &str) -> Option<&ExcOrbitRecord> {
        self.by_label.get(&normalize_label(label)).map(|&i| &self.records[i])
    }

    pub fn by_wdd(&self, wdd: &Wdd) -> Option<&ExcOrbitRecord> {
        self.by_wdd.get(wdd).map(|&i| &self.records[i])
    }

    pub fn dual(&self, rec: &ExcOrbitRecord) -> &ExcOrbitRecord {
        self.get(&rec.dual_label).expect("dual labels are checked on load")
    }

    pub fn root_count(&self) -> usize {
        self.ty.root_count()
    }
}

/// All exceptional tables, immutable after loading.
#[derive(Clone, Debug)]
pub struct Catalog {
    tables: BTreeMap<String, TypeTable>,
}

/// Canonical spelling of a Bala–Carter label: accepts `~A1`, `A1t`,
/// `\widetilde{A}_1` and TeX decorations for `Ã1`.
pub fn normalize_label(s: &str) -> String {
    let mut t: String = s
        .replace("\\widetilde{A}", "Ã")
        .replace("\\tilde{A}", "Ã")
        .replace("~A", "Ã")
        .chars()
        .filter(|c| !matches!(c, '$' | '_' | '{' | '}' | ' '))
        .collect();
    // `A1t` style: a trailing `t` after the rank marks the short-root copy.
    let mut out = String::new();
    let chars: Vec<char> = t.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == 'A' {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j > i + 1 && j < chars.len() && chars[j] == 't' {
                out.push('Ã');
                out.extend(&chars[i + 1..j]);
                i = j + 1;
                continue;
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    t = out;
    t
}

fn parse_type(s: &str) -> Option<SimpleType> {
    let kind = match s.get(..1)? {
        "E" => Kind::E,
        "F" => Kind::F,
        "G" => Kind::G,
        _ => return None,
    };
    SimpleType::new(kind, s.get(1..)?.parse().ok()?).ok()
}

fn body_checksum(body: &str) -> String {
    let digest = Sha256::digest(body.as_bytes());
    let mut hex = String::with_capacity(64);
    for b in digest {
        let _ = write!(hex, "{b:02x}");
    }
    hex
}

/// Parses one table and runs the per-table integrity checks.
pub fn parse_table(file: &str, text: &str) -> Result<TypeTable, ExcDataError> {
    let perr = |line: usize, msg: String| ExcDataError::Parse { file: file.to_string(), line, msg };
    let mut meta: HashMap<String, String> = HashMap::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((_, l)) = lines.peek() {
        let Some(rest) = l.strip_prefix('#') else { break };
        let (k, v) = rest.split_once('\t').unwrap_or((rest, ""));
        meta.insert(k.to_string(), v.to_string());
        lines.next();
    }
    let schema: u32 =
        meta.get("schema").and_then(|s| s.parse().ok()).ok_or_else(|| perr(1, "missing schema line".into()))?;
    if schema != SCHEMA {
        return Err(perr(1, format!("schema {schema}, expected {SCHEMA}")));
    }
    let ty_name = meta.get("type").cloned().ok_or_else(|| perr(2, "missing type line".into()))?;
    let ty = parse_type(&ty_name).ok_or_else(|| perr(2, format!("unsupported type {ty_name}")))?;
    let (hline, header) = lines.next().ok_or_else(|| perr(0, "missing column header".into()))?;
    let cols: Vec<&str> = header.split('\t').collect();
    if cols != ["label", "wdd", "dim", "special", "dual", "abar"] {
        return Err(perr(hline + 1, format!("unexpected columns {cols:?}")));
    }
    let mut body = String::new();
    let mut records = Vec::new();
    for (i, l) in lines {
        body.push_str(l);
        body.push('\n');
        if l.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = l.split('\t').collect();
        if f.len() != 6 {
            return Err(perr(i + 1, format!("expected 6 fields, got {}", f.len())));
        }
        let wdd: Wdd = f[1].parse().map_err(|e| perr(i + 1, format!("{e}")))?;
        if wdd.0.len() != ty.rank {
            return Err(perr(i + 1, format!("diagram has {} labels", wdd.0.len())));
        }
        let dim = f[2].parse().map_err(|_| perr(i + 1, format!("bad dimension `{}`", f[2])))?;
        let special = match f[3] {
            "yes" => true,
            "no" => false,
            other => return Err(perr(i + 1, format!("special must be yes/no, got `{other}`"))),
        };
        let abar = match (special, f[5]) {
            (false, "-") => None,
            (true, a) => Some(a.parse::<LusztigQuotient>().map_err(|e| perr(i + 1, e))?),
            (false, a) => return Err(perr(i + 1, format!("non-special orbit with quotient `{a}`"))),
        };
        records.push(ExcOrbitRecord {
            ty: ty_name.clone(),
            label: f[0].to_string(),
            wdd,
            dim,
            special,
            dual_label: f[4].to_string(),
            abar,
        });
    }
    let checksum = body_checksum(&body);
    if meta.get("sha256") != Some(&checksum) {
        return Err(ExcDataError::Integrity {
            ty: ty_name,
            label: "*".into(),
            invariant: format!("checksum mismatch: data rows hash to {checksum}"),
        });
    }
    let mut table = TypeTable {
        ty,
        records,
        source: meta.get("source").cloned().unwrap_or_default(),
        checksum,
        by_label: HashMap::new(),
        by_wdd: HashMap::new(),
    };
    verify_table(&mut table)?;
    Ok(table)
}

fn verify_table(t: &mut TypeTable) -> Result<(), ExcDataError> {
    let name = t.ty.to_string();
    let fail = |label: &str, invariant: String| ExcDataError::Integrity {
        ty: name.clone(),
        label: label.to_string(),
        invariant,
    };
    for (i, r) in t.records.iter().enumerate() {
        if t.by_label.insert(normalize_label(&r.label), i).is_some() {
            return Err(fail(&r.label, "duplicate label".into()));
        }
        if t.by_wdd.insert(r.wdd.clone(), i).is_some() {
            return Err(fail(&r.label, "duplicate weighted Dynkin diagram".into()));
        }
    }
    let rs = RootSystem::build(&CartanType(vec![t.ty]));
    let roots = rs.roots.len();
    for r in &t.records {
        if r.dim % 2 != 0 || r.dim > roots {
            return Err(fail(&r.label, format!("dimension {} is odd or exceeds {roots}", r.dim)));
        }
        let recomputed = rs.dimension_from_wdd(&r.wdd).map_err(|e| fail(&r.label, e.to_string()))?;
        if recomputed != r.dim {
            return Err(fail(&r.label, format!("stored dimension {} but diagram gives {recomputed}", r.dim)));
        }
    }
    for r in &t.records {
        let d = t.get(&r.dual_label).ok_or_else(|| fail(&r.label, format!("dual `{}` not in table", r.dual_label)))?;
        if !d.special {
            return Err(fail(&r.label, format!("dual `{}` is not special", d.label)));
        }
        if r.special {
            if t.dual(d).label != r.label {
                return Err(fail(
                    &r.label,
                    format!("duality is not an involution: {} -> {} -> {}", r.label, d.label, t.dual(d).label),
                ));
            }
            if r.abar != d.abar {
                return Err(fail(&r.label, "canonical quotient differs from that of the dual".into()));
            }
        }
    }
    let image: std::collections::HashSet<&str> = t.records.iter().map(|r| r.dual_label.as_str()).collect();
    for r in &t.records {
        if r.special != image.contains(r.label.as_str()) {
            return Err(fail(&r.label, "special flag disagrees with the image of duality".into()));
        }
    }
    Ok(())
}

impl Catalog {
    /// The tables compiled into the library.
    pub fn embedded() -> Result<Catalog, ExcDataError> {
        let mut tables = BTreeMap::new();
        for (name, text) in EMBEDDED {
            tables.insert(name.to_string(), parse_table(&format!("{name}.tsv"), text)?);
        }
        Ok(Catalog { tables })
    }

    /// Reads `<dir>/<TYPE>.tsv` for every supported type.
    pub fn load(dir: &Path) -> Result<Catalog, ExcDataError> {
        let mut tables = BTreeMap::new();
        for name in TYPES {
            let path = dir.join(format!("{name}.tsv"));
            let text = std::fs::read_to_string(&path)
                .map_err(|source| ExcDataError::Io { path: path.display().to_string(), source })?;
            tables.insert(name.to_string(), parse_table(&path.display().to_string(), &text)?);
        }
        Ok(Catalog { tables })
    }

    pub fn table(&self, ty: &str) -> Result<&TypeTable, ExcDataError> {
        self.tables.get(ty.trim()).ok_or_else(|| ExcDataError::UnknownType(ty.to_string()))
    }

    pub fn tables(&self) -> impl Iterator<Item = &TypeTable> {
        self.tables.values()
    }

    pub fn lookup(&self, ty: &str, label: &str) -> Result<&ExcOrbitRecord, ExcDataError> {
        self.table(ty)?
            .get(label)
            .ok_or_else(|| ExcDataError::UnknownOrbit { ty: ty.to_string(), label: label.to_string() })
    }
}

/// Dimension of the nilpotent cone: the number of roots.
pub fn nilcone_dim(ct: &CartanType) -> usize {
    ct.root_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_load() {
        let c = Catalog::embedded().unwrap();
        let counts: Vec<(usize, usize)> = TYPES
            .iter()
            .map(|t| c.table(t).unwrap())
            .map(|t| (t.records.len(), t.records.iter().filter(|r| r.special).count()))
            .collect();
        assert_eq!(counts, vec![(5, 3), (16, 11), (21, 17), (45, 35), (70, 46)]);
    }

    #[test]
    fn lookups() {
        let c = Catalog::embedded().unwrap();
        assert_eq!(c.lookup("E8", "E8(a2)").unwrap().dim, 236);
        assert_eq!(c.lookup("E7", "E6(a3)").unwrap().dim, 110);
        for alias in ["Ã1", "~A1", "A1t", "\\widetilde{A}_1"] {
            assert!(c.lookup("F4", alias).unwrap().special, "{alias}");
        }
        assert!(c.lookup("F4", "Z9").is_err());
    }

    #[test]
    fn nilcone() {
        for (t, n) in [("F4", 48), ("E8", 240), ("D6", 60)] {
            assert_eq!(nilcone_dim(&t.parse().unwrap()), n);
        }
    }

    #[test]
    fn tampering_is_caught() {
        let text = EMBEDDED[1].1;
        let bad = text.replacen("\t16\tno", "\t18\tno", 1);
        assert!(matches!(parse_table("F4.tsv", &bad), Err(ExcDataError::Integrity { .. })));
    }
}
