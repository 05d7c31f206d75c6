//! Independent oracles and the criterion checks shared by the integration
//! tests and the acceptance report. Nothing here calls the routine it checks.

#![allow(dead_code)]

use std::time::{Duration, Instant};

use unipotent::classical::{bv_dual, dimension, is_special, ls_dual, orbits, special_orbits, ClassicalOrbit};
use unipotent::excdata::Catalog;
use unipotent::exec::Execution;
use unipotent::partitions::collapse;
use unipotent::pipeline::{
    classical_suite, verify_tables, FactorSigma, GoldenTables, RowResult, RowStatus, GOLDEN_TYPES,
};
use unipotent::rootsys::{lambda_from_partition, Kind, RootSystem, Wdd};
use unipotent::springer::{b_invariant, springer_rep};
use unipotent::{ClassicalFamily, Letter, Partition};

fn listing(items: &[String]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        format!(": {}", items.join("; "))
    }
}

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

// --- partition oracles, written from the definitions ----------------------

/// Parity rule from the definition: in B and D every even part, in C every
/// odd part, occurs with even multiplicity.
pub fn parity_ok(parts: &[usize], letter: Letter) -> bool {
    let bad = match letter {
        Letter::A => return true,
        Letter::B | Letter::D => 0,
        Letter::C => 1,
    };
    parts.iter().filter(|&&v| v % 2 == bad).all(|&v| parts.iter().filter(|&&x| x == v).count() % 2 == 0)
}

/// a ≤ b in dominance order (both partitions of the same integer).
pub fn below(a: &[usize], b: &[usize]) -> bool {
    let (mut sa, mut sb) = (0, 0);
    for i in 0..a.len().max(b.len()) {
        sa += a.get(i).copied().unwrap_or(0);
        sb += b.get(i).copied().unwrap_or(0);
        if sa > sb {
            return false;
        }
    }
    sa == sb
}

/// All partitions of `n`, largest part first.
pub fn partitions_of(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The largest parity-valid partition below `p`, found by exhaustive search.
/// Panics if the valid partitions below `p` have no maximum.
pub fn brute_collapse(p: &[usize], letter: Letter) -> Vec<usize> {
    let n: usize = p.iter().sum();
    let cands: Vec<Vec<usize>> = partitions_of(n).into_iter().filter(|q| parity_ok(q, letter) && below(q, p)).collect();
    let max: Vec<&Vec<usize>> = cands.iter().filter(|q| cands.iter().all(|r| below(r, q))).collect();
    assert_eq!(max.len(), 1, "no unique maximum below {p:?} for {letter}");
    max[0].clone()
}

/// dim of the orbit from the grading by h = 2λ: #roots − #{α(h)=0} − #{α(h)=1}.
pub fn graded_dimension(o: &ClassicalOrbit) -> usize {
    let kind = match o.fam.letter {
        Letter::A => Kind::A,
        Letter::B => Kind::B,
        Letter::C => Kind::C,
        Letter::D => Kind::D,
    };
    let rank = o.fam.rank();
    if rank == 0 {
        return 0;
    }
    let rs = RootSystem::of(kind, rank).unwrap();
    let lam = lambda_from_partition(o.fam, &o.p).unwrap();
    let h: Vec<_> = lam.coords.iter().map(|x| x * num_rational::Ratio::from_integer(2)).collect();
    let count = |v: i64| {
        rs.roots
            .iter()
            .filter(|r| {
                r.iter().zip(&h).map(|(a, b)| a * b).sum::<num_rational::Ratio<i64>>()
                    == num_rational::Ratio::from_integer(v)
            })
            .count()
    };
    rs.roots.len() - count(0) - count(1)
}

pub fn families_up_to_n(max_n: usize) -> Vec<ClassicalFamily> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for l in [Letter::B, Letter::C, Letter::D] {
            if let Ok(f) = ClassicalFamily::new(l, n) {
                out.push(f);
            }
        }
    }
    out
}

pub fn families_up_to_rank(max_rank: usize) -> Vec<ClassicalFamily> {
    let mut out = Vec::new();
    for r in 1..=max_rank {
        for l in [Letter::B, Letter::C, Letter::D] {
            if l == Letter::D && r < 2 {
                continue;
            }
            out.push(ClassicalFamily::of_rank(l, r));
        }
    }
    out
}

// --- criteria ---------------------------------------------------------------

/// Rows that the printed tables get wrong, each caught by an invariant of
/// the printed row itself. See the verifier's flag names.
pub const DOCUMENTED_ROWS: [(&str, &str, &str); 3] =
    [("E7", "A2+2A1", "oprime-size"), ("E8", "D6(a1)", "sigma-b"), ("E8", "E7(a3)", "lprime-zero-nodes")];

pub const EXPECTED_ROWS: [(&str, usize); 4] = [("F4", 3), ("E6", 7), ("E7", 11), ("E8", 19)];

pub fn all_rows(exec: Execution) -> (Vec<RowResult>, Duration) {
    let cat = Catalog::embedded().unwrap();
    let golden = GoldenTables::embedded().unwrap();
    let start = Instant::now();
    let rows = GOLDEN_TYPES.iter().flat_map(|t| verify_tables(&cat, &golden, t, exec).unwrap()).collect();
    (rows, start.elapsed())
}

pub struct TableOutcome {
    pub strict: Outcome,
    /// True when every deviation from the strict reading is one of the
    /// documented printed-table errors and the computed row is consistent.
    pub only_documented: bool,
}

pub fn criterion1() -> TableOutcome {
    let (rows, elapsed) = all_rows(Execution::default());
    let mut counts_ok = true;
    for (t, n) in EXPECTED_ROWS {
        counts_ok &= rows.iter().filter(|r| r.ty == t).count() == n;
    }
    let is_annotated = |r: &RowResult| r.ty == "E7" && r.dual_orbit == "D4(a1)+A1";
    let annotated_ok = rows.iter().filter(|r| is_annotated(r)).all(|r| {
        let rep = r.report.as_ref().unwrap();
        let sigma_ok = rep.factors.iter().any(|f| match &f.sigma_prime {
            FactorSigma::Classical(w) => w.to_string() == "{(31^2),(1)}",
            _ => false,
        });
        r.status == RowStatus::ExpectedFlag && r.flags == ["sigma-rank"] && rep.ok() && sigma_ok
    });
    let deviating: Vec<&RowResult> = rows.iter().filter(|r| !is_annotated(r) && r.status != RowStatus::Pass).collect();
    let documented = deviating.iter().all(|r| {
        DOCUMENTED_ROWS.iter().any(|(t, l, f)| r.ty == *t && r.dual_orbit == *l && r.flags == [*f])
            && r.status == RowStatus::ExpectedFlag
            && r.report.as_ref().is_some_and(|x| x.ok())
    });
    let fast = elapsed < Duration::from_secs(30);
    let pass = counts_ok && annotated_ok && deviating.is_empty() && fast;
    let mut detail = format!(
        "{} rows in {:.2}s; {} exact, D4(a1)+A1 flagged by sigma-rank: {}",
        rows.len(),
        elapsed.as_secs_f64(),
        rows.iter().filter(|r| r.status == RowStatus::Pass).count(),
        if annotated_ok { "yes" } else { "NO" }
    );
    if !deviating.is_empty() {
        let names: Vec<String> =
            deviating.iter().map(|r| format!("{} {} [{}]", r.ty, r.dual_orbit, r.flags.join(","))).collect();
        detail += &format!("; printed-row errors: {}", names.join("; "));
    }
    TableOutcome {
        strict: Outcome::new(pass, detail),
        only_documented: counts_ok && annotated_ok && documented && fast,
    }
}

pub fn criterion2() -> Outcome {
    let cat = Catalog::embedded().unwrap();
    let (rows, _) = all_rows(Execution::default());
    let mut bad = Vec::new();
    for r in &rows {
        let rep = r.report.as_ref().unwrap();
        let table = cat.table(&r.ty).unwrap();
        let rs = RootSystem::build(&unipotent::rootsys::CartanType(vec![table.ty]));
        let wdd: &Wdd = &cat.lookup(&r.ty, &rep.o.to_string()).unwrap().wdd;
        let dim = rs.dimension_from_wdd(wdd).unwrap();
        if 2 * rep.b != rs.roots.len() - dim {
            bad.push(format!("{} {}: b={} dim O={}", r.ty, r.dual_orbit, rep.b, dim));
        }
    }
    Outcome::new(bad.is_empty(), format!("{} rows, {} violations{}", rows.len(), bad.len(), listing(&bad)))
}

pub fn criterion3() -> Outcome {
    let mut n = 0;
    let mut bad = Vec::new();
    let mut check = |o: &ClassicalOrbit| {
        n += 1;
        let b = b_invariant(&springer_rep(o));
        let codim = o.fam.root_count() - dimension(o);
        if 2 * b != codim {
            bad.push(format!("{o}: b={b} codim={codim}"));
        }
    };
    for fam in families_up_to_rank(6) {
        for o in orbits(fam).iter().filter(|o| !o.is_very_even()) {
            check(o);
        }
    }
    for size in 1..=7 {
        for o in orbits(ClassicalFamily::new(Letter::A, size).unwrap()) {
            check(&o);
        }
    }
    Outcome::new(bad.is_empty(), format!("{n} orbits, {} violations{}", bad.len(), listing(&bad)))
}

pub fn criterion4() -> Outcome {
    let (mut inv, mut pairs, mut bad) = (0, 0, Vec::new());
    for fam in families_up_to_n(16) {
        for o in special_orbits(fam) {
            inv += 1;
            if ls_dual(&ls_dual(&o)) != o {
                bad.push(format!("ls {o}"));
            }
            if bv_dual(&bv_dual(&o)) != o {
                bad.push(format!("bv {o}"));
            }
        }
    }
    for fam in families_up_to_n(12) {
        let all = orbits(fam);
        for a in &all {
            for b in &all {
                if below(b.p.parts(), a.p.parts()) {
                    pairs += 1;
                    let (da, db) = (bv_dual(a), bv_dual(b));
                    if !below(da.p.parts(), db.p.parts()) {
                        bad.push(format!("order {b} ≤ {a}"));
                    }
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{inv} special orbits (N ≤ 16), {pairs} comparable pairs (N ≤ 12), {} violations{}",
            bad.len(),
            listing(&bad)
        ),
    )
}

pub fn criterion5() -> Outcome {
    let (mut run, mut passed, mut orbits, mut non_even, mut failures) = (0, 0, 0, 0, Vec::new());
    for l in [Letter::B, Letter::C, Letter::D] {
        let r = classical_suite(l, 6, Execution::default());
        let (a, b) = r.totals();
        run += a;
        passed += b;
        orbits += r.orbits;
        non_even += r.non_even;
        failures.extend(r.failures);
    }
    Outcome::new(
        failures.is_empty() && run > 0 && run == passed,
        format!("{orbits} special orbits ({non_even} not even), {passed}/{run} checks pass{}", listing(&failures)),
    )
}

pub fn criterion6() -> Outcome {
    let (mut n_checked, mut bad) = (0, Vec::new());
    for n in 1..=12 {
        for parts in partitions_of(n) {
            for l in [Letter::B, Letter::C, Letter::D] {
                if l == Letter::C && n % 2 == 1 {
                    continue;
                }
                n_checked += 1;
                let ours = collapse(&Partition::new(parts.clone()), l);
                let oracle = brute_collapse(&parts, l);
                if ours.parts() != oracle.as_slice() {
                    bad.push(format!("{l} {parts:?}: {ours} vs {oracle:?}"));
                }
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{n_checked} cases, {} disagreements{}", bad.len(), listing(&bad)))
}

pub fn criterion7() -> Outcome {
    let cat = match Catalog::embedded() {
        Ok(c) => c,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let mut dims = 0;
    let mut bad = Vec::new();
    for t in cat.tables() {
        let rs = RootSystem::build(&unipotent::rootsys::CartanType(vec![t.ty]));
        for r in &t.records {
            dims += 1;
            if rs.dimension_from_wdd(&r.wdd).unwrap() != r.dim {
                bad.push(format!("{} {} dim", t.ty, r.label));
            }
            if r.special && t.dual(t.dual(r)).label != r.label {
                bad.push(format!("{} {} involution", t.ty, r.label));
            }
        }
    }
    let tamper = tampering_rejected();
    Outcome::new(
        bad.is_empty() && tamper.is_ok(),
        format!(
            "{dims} orbits re-derived; tampered copies rejected: {}",
            match &tamper {
                Ok(n) => format!("{n}/{n}"),
                Err(e) => format!("NO ({e})"),
            }
        ) + &listing(&bad),
    )
}

/// Copies the bundled tables, corrupts one fact at a time and checks that
/// loading fails. Returns the number of corruptions tried.
pub fn tampering_rejected() -> Result<usize, String> {
    let src = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/excdata");
    let edits: [(&str, &str, &str); 4] = [
        // dimension changed, checksum left stale
        ("E6", "A1\t0,1,0,0,0,0\t22\t", "A1\t0,1,0,0,0,0\t24\t"),
        // dual swapped
        ("F4", "Ã1\t0,0,0,1\t22\tyes\tF4(a1)", "Ã1\t0,0,0,1\t22\tyes\tF4(a2)"),
        // checksum line altered
        ("G2", "#sha256\t", "#sha256\t0"),
        // a diagram changed
        ("E7", "2A1\t0,0,0,0,0,1,0\t", "2A1\t0,0,0,0,0,2,0\t"),
    ];
    for (i, (ty, from, to)) in edits.iter().enumerate() {
        let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
        let dir = tmp.path();
        for entry in std::fs::read_dir(&src).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            std::fs::copy(&path, dir.join(path.file_name().unwrap())).map_err(|e| e.to_string())?;
        }
        let file = dir.join(format!("{ty}.tsv"));
        let text = std::fs::read_to_string(&file).map_err(|e| e.to_string())?;
        if !text.contains(from) {
            return Err(format!("edit {i} does not apply"));
        }
        std::fs::write(&file, text.replacen(from, to, 1)).map_err(|e| e.to_string())?;
        let loaded = Catalog::load(dir);
        if loaded.is_ok() {
            return Err(format!("edit {i} to {ty} was accepted"));
        }
    }
    // An untouched copy must load.
    Catalog::load(&src).map_err(|e| e.to_string())?;
    Ok(edits.len())
}

pub fn orbit(l: Letter, s: &str) -> ClassicalOrbit {
    ClassicalOrbit::of(l, s.parse().unwrap()).unwrap()
}

pub fn special_count(fam: ClassicalFamily) -> usize {
    orbits(fam).iter().filter(|o| is_special(o)).count()
}
