//! Command-line front end and JSON export format.
//!
//! Subcommands:
//!
//! * `algebra show <NAME>` — composition-algebra fact sheet;
//! * `square build|report` — construct a whole magic square (or one cell)
//!   and print dimensions, ranks, and Killing signatures;
//! * `verify jacobi|identities|maxcompact|iso` — run a single verification
//!   and report pass/fail through the exit code;
//! * `export` — serialize a cell's exact structure constants as JSON.
//!
//! Exit codes: `0` success, `1` verification failure, `2` usage error
//! (unknown algebra name, malformed flags, unsupported combination).
//!
//! The JSON export is exact: every structure constant is a rational
//! `[k, num, den]` triple whose numerator and denominator are JSON integers
//! when they fit in 53 bits and decimal strings beyond that. Export →
//! parse → export is byte-identical (keys are emitted in a fixed canonical
//! order).
//!
//! The environment variable `MAGICSQ_THREADS` caps the global worker-thread
//! pool.

use std::collections::HashMap;
use std::ffi::OsString;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;
use num::ToPrimitive;
use serde_json::{Map, Value};

use crate::apxid;
use crate::cayley::{build_algebra, Algebra, CompositionAlgebra};
use crate::exactla::{Rational, SignatureTriple};
use crate::liealg::{
    materialize_antisymmetric, JacobiMode, JacobiReport, LieAlgebra, SparseVec,
};
use crate::splitforms;
use crate::squares;

// ---------------------------------------------------------------------------
// Argument grammar
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "magicsq",
    version,
    about = "Exact construction and verification of the magic square of Lie algebras",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a composition algebra.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Build magic squares and report their invariants.
    Square {
        #[command(subcommand)]
        command: SquareCommand,
    },
    /// Run a verification; the exit code reports the outcome.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Export one cell's exact structure constants as JSON.
    Export(ExportArgs),
}

#[derive(Subcommand, Debug)]
enum AlgebraCommand {
    /// Print a fact sheet for one composition algebra.
    Show {
        /// Algebra name: R, C, H, O, C~, H~, or O~.
        name: String,
    },
}

#[derive(Subcommand, Debug)]
enum SquareCommand {
    /// Construct cells and verify the Jacobi identity on each.
    Build(SquareArgs),
    /// Construct cells and print dimension/signature tables.
    Report(SquareArgs),
}

#[derive(Args, Debug)]
struct SquareArgs {
    /// Jordan-algebra size: 2 or 3.
    #[arg(long, default_value_t = 3)]
    n: u32,
    /// Which square to build.
    #[arg(long, value_enum, default_value_t = Variant::Compact)]
    variant: Variant,
    /// Restrict to a single cell (two algebra names).
    #[arg(long, num_args = 2, value_names = ["K1", "K2"])]
    cell: Option<Vec<String>>,
    /// Construction route (n = 3 only; n = 2 has a single route).
    #[arg(long, value_enum, default_value_t = Construction::Tits)]
    construction: Construction,
    /// Check the Jacobi identity on every basis triple, regardless of size.
    #[arg(long)]
    full_jacobi: bool,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// Verify the Jacobi identity on one cell (or on an exported JSON file).
    Jacobi {
        #[arg(long, num_args = 2, value_names = ["K1", "K2"])]
        cell: Option<Vec<String>>,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Construction::Tits)]
        construction: Construction,
        #[arg(long)]
        full_jacobi: bool,
        /// Load the bracket table from an exported JSON document instead of
        /// constructing it.
        #[arg(long, value_name = "FILE")]
        from: Option<std::path::PathBuf>,
    },
    /// Run the full matrix-identity suite over one coordinate algebra.
    Identities {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Cartan-decompose a split cell and verify its maximal compact
    /// subalgebra; prints a JSON report.
    Maxcompact {
        #[arg(long, num_args = 2, value_names = ["K1", "K2"], required = true)]
        cell: Vec<String>,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
    /// Verify an explicit Lie-algebra isomorphism, bracket by bracket.
    Iso {
        #[arg(long, num_args = 2, value_names = ["K1", "K2"], required = true)]
        cell: Vec<String>,
        /// Which map: the cross-construction bijection, or the structure /
        /// conformal row isomorphisms (which fix K1 = C~ resp. H~).
        #[arg(long, value_enum, default_value_t = IsoMap::TitsVinberg)]
        map: IsoMap,
    },
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long, num_args = 2, value_names = ["K1", "K2"], required = true)]
    cell: Vec<String>,
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Construction::Tits)]
    construction: Construction,
    /// Seed recorded in the provenance block (rank estimation seed).
    #[arg(long, default_value_t = 0xA5)]
    seed: u64,
    /// Output path.
    #[arg(long, value_name = "FILE", required = true)]
    out: std::path::PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Variant {
    Compact,
    Rowsplit,
    Doublysplit,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Construction {
    Tits,
    Vinberg,
    Triality,
}

impl Construction {
    fn label(self) -> &'static str {
        match self {
            Construction::Tits => "tits",
            Construction::Vinberg => "vinberg",
            Construction::Triality => "triality",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum IsoMap {
    /// Tits basis → Vinberg basis, same cell.
    TitsVinberg,
    /// T(C~, H3(K2)) → Str′ H3(K2).
    Theta,
    /// T(H~, H3(K2)) → Con H3(K2).
    Phi,
}

// ---------------------------------------------------------------------------
// Error plumbing: usage errors exit 2, verification failures exit 1.
// ---------------------------------------------------------------------------

enum CliError {
    Usage(String),
    Verification(String),
}

type CliResult = Result<(), CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn failed(msg: impl Into<String>) -> CliError {
    CliError::Verification(msg.into())
}

/// Entry point: parse `argv`, dispatch, and map the outcome to an exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_threads();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let out = match cli.command {
        Command::Algebra { command: AlgebraCommand::Show { name } } => cmd_algebra_show(&name),
        Command::Square { command: SquareCommand::Build(a) } => cmd_square(&a, true),
        Command::Square { command: SquareCommand::Report(a) } => cmd_square(&a, false),
        Command::Verify { command } => match command {
            VerifyCommand::Jacobi { cell, n, construction, full_jacobi, from } => {
                cmd_verify_jacobi(cell.as_deref(), n, construction, full_jacobi, from.as_deref())
            }
            VerifyCommand::Identities { algebra, trials, seed } => {
                cmd_verify_identities(&algebra, trials, seed)
            }
            VerifyCommand::Maxcompact { cell, n } => cmd_verify_maxcompact(&cell, n),
            VerifyCommand::Iso { cell, map } => cmd_verify_iso(&cell, map),
        },
        Command::Export(a) => cmd_export(&a),
    };
    match out {
        Ok(()) => 0,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            1
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Cap the global worker pool from `MAGICSQ_THREADS` (ignored if the pool
/// was already initialized, e.g. by a second `run` call in one process).
fn init_threads() {
    if let Ok(s) = std::env::var("MAGICSQ_THREADS") {
        if let Ok(t) = s.trim().parse::<usize>() {
            if t > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

/// Render a signature the way all human-readable tables do: "p−n (p,n,z)".
pub fn fmt_signature(s: &SignatureTriple) -> String {
    format!("{} ({},{},{})", s.excess(), s.pos, s.neg, s.zero)
}

fn algebra_or_usage(name: &str) -> Result<Arc<CompositionAlgebra>, CliError> {
    build_algebra(name).map_err(|_| {
        usage(format!(
            "unknown algebra `{name}` (expected one of R, C, H, O, C~, H~, O~)"
        ))
    })
}

fn check_n(n: u32) -> Result<(), CliError> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(usage(format!("--n must be 2 or 3, got {n}")))
    }
}

fn cell_pair(cell: &[String]) -> Result<(&str, &str), CliError> {
    match cell {
        [a, b] => Ok((a.as_str(), b.as_str())),
        _ => Err(usage("--cell takes exactly two algebra names")),
    }
}

/// Construct one cell of the `n`-square by the chosen route.
fn build_cell(
    k1: &str,
    k2: &str,
    n: u32,
    construction: Construction,
) -> Result<LieAlgebra, CliError> {
    check_n(n)?;
    let a1 = algebra_or_usage(k1)?;
    let a2 = algebra_or_usage(k2)?;
    if n == 2 {
        return Ok(squares::l2(&a1, &a2));
    }
    Ok(match construction {
        Construction::Tits => squares::tits(&a1, &a2),
        Construction::Vinberg => squares::vinberg(&a1, &a2),
        Construction::Triality => squares::triality_square(&a1, &a2),
    })
}

fn variant_names(v: Variant) -> (&'static [&'static str; 4], &'static [&'static str; 4]) {
    const COMPACT: [&str; 4] = ["R", "C", "H", "O"];
    const SPLIT: [&str; 4] = ["R", "C~", "H~", "O~"];
    match v {
        Variant::Compact => (&COMPACT, &COMPACT),
        Variant::Rowsplit => (&SPLIT, &COMPACT),
        Variant::Doublysplit => (&SPLIT, &SPLIT),
    }
}

fn jacobi_mode(full: bool) -> JacobiMode {
    if full {
        JacobiMode::Full
    } else {
        JacobiMode::Auto
    }
}

fn jacobi_line(r: &JacobiReport) -> String {
    format!(
        "jacobi {} on {} triples: {}",
        if r.exhaustive { "exhaustive" } else { "sampled" },
        r.triples_checked,
        if r.passed() { "OK".to_string() } else { format!("{} FAILURES", r.failures) }
    )
}

// ---------------------------------------------------------------------------
// algebra show
// ---------------------------------------------------------------------------

fn cmd_algebra_show(name: &str) -> CliResult {
    let alg = algebra_or_usage(name)?;
    let d = alg.dim();
    let (pos, neg): (usize, usize) = (0..d).fold((0, 0), |(p, q), i| {
        if alg.form_sign(i) > 0 {
            (p + 1, q)
        } else {
            (p, q + 1)
        }
    });
    let chain: Vec<String> = alg.eps_chain().iter().map(|e| format!("{e:+}")).collect();
    let der = splitforms::canonical_der_basis(&alg);
    println!("algebra        {}", alg.name());
    println!("dimension      {d}");
    println!("doubling chain [{}]", chain.join(", "));
    println!("split          {}", alg.is_split());
    println!("norm form      {}", fmt_signature(&SignatureTriple { pos, neg, zero: 0 }));
    println!("composition    {}", if alg.check_composition() { "verified" } else { "FAILED" });
    println!("dim Der        {}", der.dim());
    let labels: Vec<String> = (0..d).map(|i| alg.basis_label(i)).collect();
    println!("basis          {}", labels.join(", "));
    Ok(())
}

// ---------------------------------------------------------------------------
// square build / report
// ---------------------------------------------------------------------------

fn cmd_square(args: &SquareArgs, verify: bool) -> CliResult {
    check_n(args.n)?;
    let cells: Vec<(String, String)> = match &args.cell {
        Some(c) => {
            let (k1, k2) = cell_pair(c)?;
            vec![(k1.to_string(), k2.to_string())]
        }
        None => {
            let (rows, cols) = variant_names(args.variant);
            rows.iter()
                .flat_map(|r| cols.iter().map(move |c| (r.to_string(), c.to_string())))
                .collect()
        }
    };
    let mut built: Vec<LieAlgebra> = Vec::with_capacity(cells.len());
    for (k1, k2) in &cells {
        built.push(build_cell(k1, k2, args.n, args.construction)?);
    }

    if verify {
        let mut ok = true;
        for l in &built {
            let (dim, rank, sig) = l.invariants();
            let rep = l.verify_jacobi(jacobi_mode(args.full_jacobi));
            ok &= rep.passed();
            println!(
                "{:<16} dim {:>3}  rank {}  signature {:<14} {}",
                l.name(),
                dim,
                rank,
                fmt_signature(&sig),
                jacobi_line(&rep)
            );
        }
        if !ok {
            return Err(failed("Jacobi identity violated in at least one cell"));
        }
        return Ok(());
    }

    // report: per-cell lines for a single cell, tables for a full square.
    if built.len() == 1 {
        let l = &built[0];
        let (dim, rank, sig) = l.invariants();
        println!("{}: dim {}, rank {}, signature {}", l.name(), dim, rank, fmt_signature(&sig));
        return Ok(());
    }
    let (rows, cols) = variant_names(args.variant);
    println!("signatures (n = {}, {} construction):", args.n, args.construction.label());
    print!("{:>4}", "");
    for c in cols.iter() {
        print!(" {c:>16}");
    }
    println!();
    for (i, r) in rows.iter().enumerate() {
        print!("{r:>4}");
        for j in 0..cols.len() {
            print!(" {:>16}", fmt_signature(&built[i * cols.len() + j].killing_signature()));
        }
        println!();
    }
    println!();
    println!("dimensions:");
    print!("{:>4}", "");
    for c in cols.iter() {
        print!(" {c:>6}");
    }
    println!();
    for (i, r) in rows.iter().enumerate() {
        print!("{r:>4}");
        for j in 0..cols.len() {
            print!(" {:>6}", built[i * cols.len() + j].dim());
        }
        println!();
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify subcommands
// ---------------------------------------------------------------------------

fn cmd_verify_jacobi(
    cell: Option<&[String]>,
    n: u32,
    construction: Construction,
    full: bool,
    from: Option<&std::path::Path>,
) -> CliResult {
    let l = match from {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let doc = ExportDocument::from_str(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            doc.to_lie().map_err(|e| failed(format!("bracket table rejected: {e}")))?
        }
        None => {
            let cell = cell.ok_or_else(|| usage("verify jacobi needs --cell or --from"))?;
            let (k1, k2) = cell_pair(cell)?;
            build_cell(k1, k2, n, construction)?
        }
    };
    let rep = l.verify_jacobi(jacobi_mode(full));
    println!("{}: dim {}, {}", l.name(), l.dim(), jacobi_line(&rep));
    if rep.passed() {
        Ok(())
    } else {
        Err(failed(format!(
            "{} of {} Jacobi triples violated (first: {:?})",
            rep.failures, rep.triples_checked, rep.first_failures
        )))
    }
}

fn cmd_verify_identities(algebra: &str, trials: usize, seed: u64) -> CliResult {
    let alg = algebra_or_usage(algebra)?;
    let aref: crate::cayley::AlgRef = alg.clone();
    let reports = apxid::full_suite(&aref, seed, trials);
    let mut defects = 0usize;
    for r in &reports {
        println!("{r}");
        defects += r.defects.len();
    }
    if defects == 0 {
        println!("all {} identities hold with zero defects", reports.len());
        Ok(())
    } else {
        Err(failed(format!("{defects} defects across the identity suite")))
    }
}

fn cmd_verify_maxcompact(cell: &[String], n: u32) -> CliResult {
    let (k1, k2) = cell_pair(cell)?;
    if n != 3 {
        return Err(usage("verify maxcompact supports --n 3 only"));
    }
    let a1 = algebra_or_usage(k1)?;
    let a2 = algebra_or_usage(k2)?;
    let cd = splitforms::cartan_decompose(&a1, &a2).map_err(usage)?;

    let split1 = a1.is_split();
    let split2 = a2.is_split();
    let theorem: Result<(String, LieAlgebra), String> = if split1 && split2 {
        splitforms::doubly_split_maxcompact_check(&a1, &a2)
            .map(|nl| ("n matches the 4x4 construction over the halved algebras".into(), nl))
    } else if split1 {
        splitforms::maxcompact_theorem_check(&a1, &a2)
            .map(|nl| ("n matches L3(F1,K2) + F1' over the halved algebra".into(), nl))
    } else {
        Err("first factor is compact; no maximal-compact theorem applies".into())
    };

    let sig_json = |s: &SignatureTriple| -> Value {
        let mut m = Map::new();
        m.insert("pos".into(), Value::from(s.pos));
        m.insert("neg".into(), Value::from(s.neg));
        m.insert("zero".into(), Value::from(s.zero));
        Value::Object(m)
    };
    let mut doc = Map::new();
    let mut cellm = Map::new();
    cellm.insert("name".into(), Value::from(cd.cell.name()));
    cellm.insert("dim".into(), Value::from(cd.cell.dim()));
    cellm.insert("signature".into(), sig_json(&cd.cell.killing_signature()));
    doc.insert("cell".into(), Value::Object(cellm));
    let mut nm = Map::new();
    nm.insert("dim".into(), Value::from(cd.n_part.len()));
    nm.insert("killing".into(), sig_json(&cd.killing_on_n));
    doc.insert("n".into(), Value::Object(nm));
    let mut pm = Map::new();
    pm.insert("dim".into(), Value::from(cd.p_part.len()));
    pm.insert("killing".into(), sig_json(&cd.killing_on_p));
    doc.insert("p".into(), Value::Object(pm));
    let mut thm = Map::new();
    match &theorem {
        Ok((desc, nl)) => {
            thm.insert("checked".into(), Value::from(true));
            thm.insert("statement".into(), Value::from(desc.as_str()));
            thm.insert("n_dim".into(), Value::from(nl.dim()));
        }
        Err(why) => {
            thm.insert("checked".into(), Value::from(false));
            thm.insert("statement".into(), Value::from(why.as_str()));
        }
    }
    doc.insert("identification".into(), Value::Object(thm));
    println!("{}", serde_json::to_string_pretty(&Value::Object(doc)).unwrap());

    // The decomposition itself succeeded; a failing identification is a
    // verification failure.
    match theorem {
        Ok(_) => Ok(()),
        Err(e) if split1 || split2 => Err(failed(e)),
        Err(_) => Ok(()),
    }
}

fn cmd_verify_iso(cell: &[String], map: IsoMap) -> CliResult {
    let (k1, k2) = cell_pair(cell)?;
    let a1 = algebra_or_usage(k1)?;
    let a2 = algebra_or_usage(k2)?;
    let (src, dst, cols) = match map {
        IsoMap::TitsVinberg => squares::tits_vinberg_map(&a1, &a2),
        IsoMap::Theta => {
            if k1 != "C~" {
                return Err(usage("--map theta requires K1 = C~"));
            }
            squares::str_row_map(&a2)
        }
        IsoMap::Phi => {
            if k1 != "H~" {
                return Err(usage("--map phi requires K1 = H~"));
            }
            squares::con_row_map(&a2)
        }
    };
    match squares::check_lie_isomorphism(&src, &dst, &cols) {
        Ok(()) => {
            println!(
                "{} -> {}: isomorphism verified on all {} basis pairs",
                src.name(),
                dst.name(),
                src.dim() * (src.dim() - 1) / 2
            );
            Ok(())
        }
        Err(e) => Err(failed(format!("{} -> {}: {e}", src.name(), dst.name()))),
    }
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

fn cmd_export(args: &ExportArgs) -> CliResult {
    let (k1, k2) = cell_pair(&args.cell)?;
    let l = build_cell(k1, k2, args.n, args.construction)?;
    let doc = ExportDocument::from_lie(
        &l,
        Provenance {
            construction: if args.n == 2 { "l2".into() } else { args.construction.label().into() },
            k1: k1.to_string(),
            k2: k2.to_string(),
            n: args.n,
            seed: args.seed,
        },
    );
    std::fs::write(&args.out, doc.to_string_pretty())
        .map_err(|e| usage(format!("cannot write {}: {e}", args.out.display())))?;
    println!("wrote {} ({} basis elements)", args.out.display(), doc.basis_labels.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// ExportDocument
// ---------------------------------------------------------------------------

/// Provenance block recorded in every export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub construction: String,
    pub k1: String,
    pub k2: String,
    pub n: u32,
    pub seed: u64,
}

/// Lossless JSON image of a Lie algebra: labels, exact structure constants,
/// Killing signature, generic rank, and how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportDocument {
    pub schema_version: u32,
    pub name: String,
    pub basis_labels: Vec<String>,
    /// `(i, j, [(k, c)])` with `i < j`: the expansion of `[e_i, e_j]`.
    pub brackets: Vec<(usize, usize, Vec<(usize, Rational)>)>,
    pub killing_signature: SignatureTriple,
    pub rank: usize,
    pub provenance: Provenance,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Largest integer magnitude emitted as a JSON number; anything bigger
/// becomes a decimal string so no reader can lose precision.
const JSON_SAFE_INT: i64 = (1 << 53) - 1;

fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if (-JSON_SAFE_INT..=JSON_SAFE_INT).contains(&v) => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

fn json_to_int(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("non-integer number {n}")),
        Value::String(s) => s.parse::<BigInt>().map_err(|e| format!("bad integer `{s}`: {e}")),
        other => Err(format!("expected integer, got {other}")),
    }
}

fn get<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value, String> {
    m.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

fn as_obj(v: &Value) -> Result<&Map<String, Value>, String> {
    v.as_object().ok_or_else(|| "expected object".to_string())
}

fn as_usize(v: &Value) -> Result<usize, String> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| format!("expected index, got {v}"))
}

impl ExportDocument {
    pub fn from_lie(l: &LieAlgebra, provenance: Provenance) -> ExportDocument {
        let mut brackets: Vec<(usize, usize, Vec<(usize, Rational)>)> = Vec::new();
        for (i, j, k, c) in l.structure_constants() {
            match brackets.last_mut() {
                Some((bi, bj, terms)) if *bi == i && *bj == j => terms.push((k, c)),
                _ => brackets.push((i, j, vec![(k, c)])),
            }
        }
        ExportDocument {
            schema_version: SCHEMA_VERSION,
            name: l.name().to_string(),
            basis_labels: l.labels().to_vec(),
            brackets,
            killing_signature: l.killing_signature(),
            rank: l.rank(),
            provenance,
        }
    }

    /// Canonical JSON value; key order is fixed so serialization is
    /// deterministic and round-trips byte-identically.
    pub fn to_json(&self) -> Value {
        let mut alg = Map::new();
        alg.insert("name".into(), Value::from(self.name.as_str()));
        alg.insert("dim".into(), Value::from(self.basis_labels.len()));
        alg.insert(
            "basis_labels".into(),
            Value::Array(self.basis_labels.iter().map(|l| Value::from(l.as_str())).collect()),
        );
        let brackets: Vec<Value> = self
            .brackets
            .iter()
            .map(|(i, j, terms)| {
                let tv: Vec<Value> = terms
                    .iter()
                    .map(|(k, c)| {
                        Value::Array(vec![
                            Value::from(*k),
                            int_to_json(c.numer()),
                            int_to_json(c.denom()),
                        ])
                    })
                    .collect();
                Value::Array(vec![Value::from(*i), Value::from(*j), Value::Array(tv)])
            })
            .collect();
        let mut sig = Map::new();
        sig.insert("pos".into(), Value::from(self.killing_signature.pos));
        sig.insert("neg".into(), Value::from(self.killing_signature.neg));
        sig.insert("zero".into(), Value::from(self.killing_signature.zero));
        let mut killing = Map::new();
        killing.insert("signature".into(), Value::Object(sig));
        let mut prov = Map::new();
        prov.insert("construction".into(), Value::from(self.provenance.construction.as_str()));
        prov.insert("k1".into(), Value::from(self.provenance.k1.as_str()));
        prov.insert("k2".into(), Value::from(self.provenance.k2.as_str()));
        prov.insert("n".into(), Value::from(self.provenance.n));
        prov.insert("seed".into(), Value::from(self.provenance.seed));
        let mut doc = Map::new();
        doc.insert("schema_version".into(), Value::from(self.schema_version));
        doc.insert("algebra".into(), Value::Object(alg));
        doc.insert("brackets".into(), Value::Array(brackets));
        doc.insert("killing".into(), Value::Object(killing));
        doc.insert("rank".into(), Value::from(self.rank));
        doc.insert("provenance".into(), Value::Object(prov));
        Value::Object(doc)
    }

    /// Pretty-printed canonical serialization (terminated by a newline).
    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serialization");
        s.push('\n');
        s
    }

    pub fn from_str(text: &str) -> Result<ExportDocument, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
        ExportDocument::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<ExportDocument, String> {
        let doc = as_obj(v)?;
        let schema_version = as_usize(get(doc, "schema_version")?)? as u32;
        if schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {schema_version}"));
        }
        let alg = as_obj(get(doc, "algebra")?)?;
        let name = get(alg, "name")?
            .as_str()
            .ok_or("algebra.name must be a string")?
            .to_string();
        let dim = as_usize(get(alg, "dim")?)?;
        let basis_labels: Vec<String> = get(alg, "basis_labels")?
            .as_array()
            .ok_or("basis_labels must be an array")?
            .iter()
            .map(|l| l.as_str().map(str::to_string).ok_or("label must be a string".to_string()))
            .collect::<Result<_, _>>()?;
        if basis_labels.len() != dim {
            return Err(format!("dim {} disagrees with {} labels", dim, basis_labels.len()));
        }
        let mut brackets = Vec::new();
        for entry in get(doc, "brackets")?.as_array().ok_or("brackets must be an array")? {
            let trip = entry.as_array().ok_or("bracket entry must be [i, j, terms]")?;
            if trip.len() != 3 {
                return Err("bracket entry must be [i, j, terms]".into());
            }
            let i = as_usize(&trip[0])?;
            let j = as_usize(&trip[1])?;
            let mut terms = Vec::new();
            for t in trip[2].as_array().ok_or("terms must be an array")? {
                let kc = t.as_array().ok_or("term must be [k, num, den]")?;
                if kc.len() != 3 {
                    return Err("term must be [k, num, den]".into());
                }
                let k = as_usize(&kc[0])?;
                if i >= dim || j >= dim || k >= dim {
                    return Err(format!("index out of range in bracket ({i},{j})"));
                }
                let num = json_to_int(&kc[1])?;
                let den = json_to_int(&kc[2])?;
                if den == BigInt::from(0) {
                    return Err("zero denominator".into());
                }
                terms.push((k, Rational::new(num, den)));
            }
            brackets.push((i, j, terms));
        }
        let killing = as_obj(get(doc, "killing")?)?;
        let sig = as_obj(get(killing, "signature")?)?;
        let killing_signature = SignatureTriple {
            pos: as_usize(get(sig, "pos")?)?,
            neg: as_usize(get(sig, "neg")?)?,
            zero: as_usize(get(sig, "zero")?)?,
        };
        let rank = as_usize(get(doc, "rank")?)?;
        let prov = as_obj(get(doc, "provenance")?)?;
        let sfield = |k: &str| -> Result<String, String> {
            get(prov, k)?.as_str().map(str::to_string).ok_or(format!("provenance.{k} must be a string"))
        };
        let provenance = Provenance {
            construction: sfield("construction")?,
            k1: sfield("k1")?,
            k2: sfield("k2")?,
            n: as_usize(get(prov, "n")?)? as u32,
            seed: get(prov, "seed")?.as_u64().ok_or("provenance.seed must be an integer")?,
        };
        Ok(ExportDocument {
            schema_version,
            name,
            basis_labels,
            brackets,
            killing_signature,
            rank,
            provenance,
        })
    }

    /// Rebuild the Lie algebra from the stored bracket table (filling the
    /// lower triangle by antisymmetry).
    pub fn to_lie(&self) -> Result<LieAlgebra, String> {
        let mut table: HashMap<(usize, usize), SparseVec> = HashMap::new();
        for (i, j, terms) in &self.brackets {
            if i >= j {
                return Err(format!("bracket pair ({i},{j}) not upper-triangular"));
            }
            let sv: SparseVec = terms.iter().map(|(k, c)| (*k, c.clone())).collect();
            table.insert((*i, *j), sv);
        }
        materialize_antisymmetric(&self.name, self.basis_labels.clone(), table)
            .map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::so_pq;

    #[test]
    fn export_round_trip_is_byte_identical() {
        let l = squares::l2_by_names("C", "C");
        let doc = ExportDocument::from_lie(
            &l,
            Provenance {
                construction: "l2".into(),
                k1: "C".into(),
                k2: "C".into(),
                n: 2,
                seed: 0xA5,
            },
        );
        let text = doc.to_string_pretty();
        let reparsed = ExportDocument::from_str(&text).unwrap();
        assert_eq!(doc, reparsed);
        assert_eq!(text, reparsed.to_string_pretty());

        let back = reparsed.to_lie().unwrap();
        assert!(crate::liealg::compare(&back, &l).agree());
        assert!(back.verify_jacobi(JacobiMode::Full).passed());
    }

    #[test]
    fn big_integers_are_exported_as_strings() {
        let big: BigInt = BigInt::from(1i64 << 60);
        assert_eq!(int_to_json(&big), Value::String((1u64 << 60).to_string()));
        assert_eq!(json_to_int(&int_to_json(&big)).unwrap(), big);
        let small = BigInt::from(-7);
        assert_eq!(int_to_json(&small), Value::from(-7i64));
    }

    #[test]
    fn run_square_report_compact_prints_dims_and_exits_zero() {
        // Uses the cheap n = 2 square so the test stays fast; the n = 3
        // acceptance run exercises the full table.
        let code = run(["magicsq", "square", "report", "--n", "2", "--variant", "compact"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn run_unknown_algebra_exits_two() {
        assert_eq!(run(["magicsq", "algebra", "show", "X"]), 2);
        assert_eq!(run(["magicsq", "square", "build", "--n", "4"]), 2);
        assert_eq!(run(["magicsq", "verify", "jacobi"]), 2);
    }

    #[test]
    fn run_algebra_show_and_verify_iso() {
        assert_eq!(run(["magicsq", "algebra", "show", "O~"]), 0);
        assert_eq!(run(["magicsq", "verify", "iso", "--cell", "R", "C"]), 0);
        assert_eq!(
            run(["magicsq", "verify", "iso", "--cell", "H~", "C", "--map", "phi"]),
            0
        );
        // theta demands the C~ row.
        assert_eq!(
            run(["magicsq", "verify", "iso", "--cell", "H~", "C", "--map", "theta"]),
            2
        );
    }

    #[test]
    fn corrupted_export_fails_verify_jacobi_with_exit_one() {
        let l = so_pq(3, 1);
        let mut doc = ExportDocument::from_lie(
            &l,
            Provenance {
                construction: "so".into(),
                k1: "R".into(),
                k2: "R".into(),
                n: 2,
                seed: 0,
            },
        );
        // Corrupt one structure constant; the table stays antisymmetric but
        // the Jacobi identity breaks.
        doc.brackets[0].2[0].1 += crate::exactla::rat(1);
        let dir = std::env::temp_dir();
        let path = dir.join("magicsq_corrupted_fixture.json");
        std::fs::write(&path, doc.to_string_pretty()).unwrap();
        let code = run([
            "magicsq",
            "verify",
            "jacobi",
            "--from",
            path.to_str().unwrap(),
            "--full-jacobi",
        ]);
        assert_eq!(code, 1);

        // The uncorrupted export passes.
        let good = ExportDocument::from_lie(
            &l,
            Provenance {
                construction: "so".into(),
                k1: "R".into(),
                k2: "R".into(),
                n: 2,
                seed: 0,
            },
        );
        let path2 = dir.join("magicsq_clean_fixture.json");
        std::fs::write(&path2, good.to_string_pretty()).unwrap();
        let code2 = run([
            "magicsq",
            "verify",
            "jacobi",
            "--from",
            path2.to_str().unwrap(),
            "--full-jacobi",
        ]);
        assert_eq!(code2, 0);
    }

    #[test]
    fn export_command_writes_parseable_file() {
        let path = std::env::temp_dir().join("magicsq_export_test.json");
        let code = run([
            "magicsq",
            "export",
            "--cell",
            "C",
            "H",
            "--n",
            "2",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = ExportDocument::from_str(&text).unwrap();
        assert_eq!(doc.provenance.construction, "l2");
        assert_eq!(text, doc.to_string_pretty());
        assert!(doc.to_lie().unwrap().verify_jacobi(JacobiMode::Full).passed());
    }

    #[test]
    fn verify_maxcompact_row_split_cell() {
        assert_eq!(run(["magicsq", "verify", "maxcompact", "--cell", "C~", "C"]), 0);
    }
}
