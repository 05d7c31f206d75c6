use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use unipotent::classical::{
    bv_dual, decompose_special, dimension, is_special, ls_dual, lusztig_quotient, orbits, special_orbits,
    unipotent_count, ClassicalOrbit,
};
use unipotent::excdata::Catalog;
use unipotent::exec::Execution;
use unipotent::pipeline::{
    analyze_classical, analyze_exceptional, classical_suite, verify_tables, GoldenTables, RowStatus, TableSummary,
    GOLDEN_TYPES,
};
use unipotent::rootsys::{
    blocks_type_name, coordinate_blocks, integral_subsystem, lambda_from_partition, lambda_from_wdd, zero_levi,
    CartanType, InfinitesimalCharacter, RootSystem,
};
use unipotent::springer::{b_invariant, springer_rep};
use unipotent::{ClassicalFamily, Letter, Partition};

#[derive(Parser)]
#[command(name = "unipotent", version, about = "Special nilpotent orbits, their duals and special unipotent packets")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Directory with excdata/ and golden/ tables, overriding the embedded copies.
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    /// Evaluate sequentially even when built with the parallel feature.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

/// A classical orbit given as family letter, natural dimension and partition.
#[derive(Args)]
struct ClassicalArgs {
    #[arg(long)]
    family: Letter,
    /// Natural dimension N (defaults to the partition's size).
    #[arg(long)]
    n: Option<usize>,
    partition: String,
}

/// Either `--family X [--n N] PARTITION` or `--type T LABEL`.
#[derive(Args)]
struct OrbitArgs {
    #[arg(long, conflicts_with = "type_")]
    family: Option<Letter>,
    #[arg(long, requires = "family")]
    n: Option<usize>,
    #[arg(long = "type", id = "type_")]
    type_: Option<String>,
    orbit: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lusztig–Spaltenstein dual, or with --cross the dual in the Langlands dual family.
    Dual {
        #[command(flatten)]
        orbit: ClassicalArgs,
        #[arg(long)]
        cross: bool,
    },
    /// Specialness test and, for special orbits, the row decomposition.
    Special {
        #[command(flatten)]
        orbit: ClassicalArgs,
    },
    /// Infinitesimal character λ = h/2.
    Lambda {
        #[command(flatten)]
        orbit: OrbitArgs,
    },
    /// Integral subsystem g′ and the Levi l′ centralizing λ.
    Gprime {
        #[command(flatten)]
        orbit: OrbitArgs,
    },
    /// Springer representation and its b-value.
    Springer {
        #[command(flatten)]
        orbit: ClassicalArgs,
    },
    /// Full analysis of a special orbit: TYPE LABEL, or --family X [--n N] PARTITION.
    Analyze {
        #[arg(long)]
        family: Option<Letter>,
        #[arg(long, requires = "family")]
        n: Option<usize>,
        /// Exceptional type followed by the orbit label, or just the partition with --family.
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
    /// Recompute the reference tables and compare row by row.
    VerifyTables {
        /// Types to verify (default: all).
        types: Vec<String>,
    },
    /// Check the classical identities on every special, not very even orbit up to a rank.
    ClassicalSuite {
        #[arg(long)]
        family: Letter,
        #[arg(long, default_value_t = 6)]
        rank: usize,
    },
    /// Orbit listings.
    Orbits {
        #[command(subcommand)]
        cmd: OrbitsCmd,
    },
}

#[derive(Subcommand)]
enum OrbitsCmd {
    /// All orbits of a classical family or exceptional type.
    List {
        #[arg(long, conflicts_with = "type_")]
        family: Option<Letter>,
        #[arg(long, requires = "family")]
        n: Option<usize>,
        #[arg(long = "type", id = "type_")]
        type_: Option<String>,
        /// Only special orbits.
        #[arg(long)]
        special: bool,
    },
}

/// Failure of a command: input problems exit 2, failed verification exits 1.
enum Failure {
    Usage(String),
    Verification(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Ctx {
    json: bool,
    data_dir: Option<PathBuf>,
    exec: Execution,
}

impl Ctx {
    fn catalog(&self) -> Result<Catalog, Failure> {
        Ok(match &self.data_dir {
            Some(d) => Catalog::load(&d.join("excdata"))?,
            None => Catalog::embedded()?,
        })
    }

    fn golden(&self) -> Result<GoldenTables, Failure> {
        Ok(match &self.data_dir {
            Some(d) => GoldenTables::load(&d.join("golden"))?,
            None => GoldenTables::embedded()?,
        })
    }

    /// Writes the result; a closed stdout (e.g. piped into `head`) is not an error.
    fn emit(&self, value: Value, text: String) {
        let mut out = if self.json { serde_json::to_string_pretty(&value).expect("serializable") } else { text };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        let _ = std::io::stdout().lock().write_all(out.as_bytes());
    }
}

fn classical_orbit(letter: Letter, n: Option<usize>, partition: &str) -> Result<ClassicalOrbit, Failure> {
    let p: Partition = partition.parse()?;
    let fam = ClassicalFamily::new(letter, n.unwrap_or(p.size()))?;
    Ok(ClassicalOrbit::new(fam, p)?)
}

/// λ, the ambient root system and a display name for either kind of input.
fn lambda_of(ctx: &Ctx, a: &OrbitArgs) -> Result<(RootSystem, InfinitesimalCharacter, Value), Failure> {
    match (&a.family, &a.type_) {
        (Some(letter), _) => {
            let o = classical_orbit(*letter, a.n, &a.orbit)?;
            let lam = lambda_from_partition(o.fam, &o.p)?;
            let rs = RootSystem::of(letter_kind(*letter), o.fam.rank())?;
            Ok((rs, lam, serde_json::to_value(&o)?))
        }
        (None, Some(ty)) => {
            let cat = ctx.catalog()?;
            let table = cat.table(ty)?;
            let rec = cat.lookup(ty, &a.orbit)?;
            let rs = RootSystem::build(&CartanType(vec![table.ty]));
            let lam = lambda_from_wdd(&rs, &rec.wdd)?;
            Ok((rs, lam, json!({"type": ty, "label": rec.label, "wdd": rec.wdd.to_string()})))
        }
        (None, None) => Err(Failure::Usage("give --family or --type".into())),
    }
}

fn letter_kind(l: Letter) -> unipotent::rootsys::Kind {
    use unipotent::rootsys::Kind;
    match l {
        Letter::A => Kind::A,
        Letter::B => Kind::B,
        Letter::C => Kind::C,
        Letter::D => Kind::D,
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let ctx = Ctx { json: cli.json, data_dir: cli.data_dir, exec };
    match cli.cmd {
        Cmd::Dual { orbit, cross } => {
            let o = classical_orbit(orbit.family, orbit.n, &orbit.partition)?;
            let d = if cross { bv_dual(&o) } else { ls_dual(&o) };
            let kind = if cross { "bv" } else { "ls" };
            ctx.emit(json!({"input": o, "kind": kind, "dual": d}), d.to_string());
        }
        Cmd::Special { orbit } => {
            let o = classical_orbit(orbit.family, orbit.n, &orbit.partition)?;
            let special = is_special(&o);
            let mut value = json!({"input": o, "special": special});
            let mut text = format!("{o}: {}\n", if special { "special" } else { "not special" });
            if special && !o.is_very_even() {
                let dec = decompose_special(&o)?;
                let quotient = lusztig_quotient(&o)?;
                let count = unipotent_count(&o)?;
                text += &format!(
                    "skeleton {}  alpha {:?}  beta {:?}  q {}\nĀ = {}, |Π| = {}\n",
                    dec.skeleton, dec.alphas, dec.betas, dec.q, quotient, count
                );
                value["decomposition"] = serde_json::to_value(&dec)?;
                value["abar"] = serde_json::to_value(quotient)?;
                value["unipotent_count"] = json!(count);
            } else if special {
                text += "very even: no decomposition\n";
            }
            ctx.emit(value, text);
        }
        Cmd::Lambda { orbit } => {
            let (_, lam, input) = lambda_of(&ctx, &orbit)?;
            let text = lam.to_string();
            ctx.emit(json!({"input": input, "lambda": lam}), text);
        }
        Cmd::Gprime { orbit } => {
            let (rs, lam, input) = lambda_of(&ctx, &orbit)?;
            let sub = integral_subsystem(&rs, &lam)?;
            let levi = zero_levi(&rs, &lam)?;
            let (g, l) = if orbit.family.is_some() {
                let all: Vec<usize> = (0..rs.dim).collect();
                (
                    blocks_type_name(&coordinate_blocks(&sub.roots, &all)),
                    blocks_type_name(&coordinate_blocks(&levi.roots, &all)),
                )
            } else {
                (sub.cartan.to_string(), levi.cartan.to_string())
            };
            let text = format!("λ  {lam}\ng′ {g}\nl′ {l}\n");
            ctx.emit(json!({"input": input, "lambda": lam, "g_prime": g, "l_prime": l}), text);
        }
        Cmd::Springer { orbit } => {
            let o = classical_orbit(orbit.family, orbit.n, &orbit.partition)?;
            let rep = springer_rep(&o);
            let b = b_invariant(&rep);
            let codim = o.fam.root_count() - dimension(&o);
            let text =
                format!("{rep}  b = {b}  codim = {codim}{}\n", if rep.is_degenerate() { "  (degenerate)" } else { "" });
            ctx.emit(
                json!({"input": o, "springer": rep, "degenerate": rep.is_degenerate(), "b": b, "codim": codim}),
                text,
            );
        }
        Cmd::Analyze { family, n, args } => {
            let report = match (family, args.as_slice()) {
                (Some(letter), [p]) => analyze_classical(&classical_orbit(letter, n, p)?)?,
                (None, [ty, label]) => analyze_exceptional(&ctx.catalog()?, ty, label)?,
                _ => return Err(Failure::Usage("expected TYPE LABEL, or --family X PARTITION".into())),
            };
            let text = report.to_string();
            let ok = report.ok();
            ctx.emit(serde_json::to_value(&report)?, text);
            if !ok {
                return Err(Failure::Verification("report checks failed".into()));
            }
        }
        Cmd::VerifyTables { types } => {
            let cat = ctx.catalog()?;
            let golden = ctx.golden()?;
            let types: Vec<String> =
                if types.is_empty() { GOLDEN_TYPES.iter().map(|s| s.to_string()).collect() } else { types };
            let mut all = Vec::new();
            let mut text = String::new();
            let mut bad = 0;
            for ty in &types {
                let ty = ty.trim().to_ascii_uppercase();
                let rows = verify_tables(&cat, &golden, &ty, ctx.exec)?;
                let summary = TableSummary::of(&ty, &rows);
                bad += summary.failures;
                text += &format!(
                    "{}: {} rows, {} pass, {} expected flags, {} failures\n",
                    ty, summary.rows, summary.passed, summary.expected_flags, summary.failures
                );
                for r in &rows {
                    let tag = match r.status {
                        RowStatus::Pass => "pass",
                        RowStatus::ExpectedFlag => "flag",
                        RowStatus::UnexpectedFlag => "FLAG",
                        RowStatus::Fail => "FAIL",
                    };
                    let b = r.report.as_ref().map(|x| x.b.to_string()).unwrap_or_default();
                    let o = r.report.as_ref().map(|x| x.o.to_string()).unwrap_or_default();
                    text += &format!("  [{tag}] {:<12} b={:<3} O={}", r.dual_orbit, b, o);
                    if !r.flags.is_empty() {
                        text += &format!("  flags: {}", r.flags.join(","));
                    }
                    text += "\n";
                    for m in &r.mismatches {
                        text += &format!("         {m}\n");
                    }
                    if let Some(e) = &r.error {
                        text += &format!("         error: {e}\n");
                    }
                }
                all.push(json!({"summary": summary, "rows": rows}));
            }
            ctx.emit(Value::Array(all), text);
            if bad > 0 {
                return Err(Failure::Verification(format!("{bad} rows failed")));
            }
        }
        Cmd::ClassicalSuite { family, rank } => {
            if family == Letter::A || rank > 8 {
                return Err(Failure::Usage("family must be B, C or D and rank at most 8".into()));
            }
            let report = classical_suite(family, rank, ctx.exec);
            let (run, passed) = report.totals();
            let mut text = format!(
                "{family} up to rank {rank}: {} orbits ({} not even), {passed}/{run} checks pass\n",
                report.orbits, report.non_even
            );
            for (name, t) in &report.checks {
                text += &format!("  {name:<20} {}/{}\n", t.passed, t.run);
            }
            for f in &report.failures {
                text += &format!("  FAIL {f}\n");
            }
            let ok = report.ok();
            ctx.emit(serde_json::to_value(&report)?, text);
            if !ok {
                return Err(Failure::Verification("suite failures".into()));
            }
        }
        Cmd::Orbits { cmd: OrbitsCmd::List { family, n, type_, special } } => match (family, type_) {
            (Some(letter), _) => {
                let n = n.ok_or_else(|| Failure::Usage("--n is required with --family".into()))?;
                let fam = ClassicalFamily::new(letter, n)?;
                let list = if special { special_orbits(fam) } else { orbits(fam) };
                let mut text = String::new();
                let mut rows = Vec::new();
                for o in &list {
                    let sp = is_special(o);
                    text += &format!(
                        "{:<24} dim {:<4}{}\n",
                        o.p.to_string(),
                        dimension(o),
                        if sp { " special" } else { "" }
                    );
                    rows.push(json!({"orbit": o, "dim": dimension(o), "special": sp}));
                }
                ctx.emit(Value::Array(rows), text);
            }
            (None, Some(ty)) => {
                let cat = ctx.catalog()?;
                let table = cat.table(&ty)?;
                let recs: Vec<_> = table.records.iter().filter(|r| !special || r.special).collect();
                let mut text = String::new();
                for r in &recs {
                    text += &format!(
                        "{:<14} {:<16} dim {:<4} {:<8} dual {}\n",
                        r.label,
                        r.wdd.to_string(),
                        r.dim,
                        if r.special { "special" } else { "" },
                        r.dual_label
                    );
                }
                ctx.emit(serde_json::to_value(&recs)?, text);
            }
            (None, None) => return Err(Failure::Usage("give --family or --type".into())),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
