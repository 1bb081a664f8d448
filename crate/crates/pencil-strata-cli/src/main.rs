//! Command-line front end: structure parsing, closure decisions, bundle
//! hierarchies, witness pencils, and the verification suites.
//!
//! Exit codes, stable for scripting:
//!   0  relation holds / all checks pass
//!   2  usage, parse, or domain error
//!   3  relation does not hold
//!   4  verification failure

mod assignment;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pencil_strata::closure::{
    auto_fresh_names, bundle_closure_contains, coalesce, orbit_closure_report,
};
use pencil_strata::exact::{extract_weyr, ExplicitPencil};
use pencil_strata::hierarchy::{self, export_dot, export_json, HierarchyGraph};
use pencil_strata::realize::witness_sequence;
use pencil_strata::structure::{Eigenvalue, PencilStructure};
use pencil_strata::verify;

#[derive(Parser)]
#[command(
    name = "pencil-strata",
    about = "Exact closure decisions for Kronecker structures of matrix pencils",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether M lies in the orbit closure of L
    CheckOrbit {
        /// Structure text or a file containing it, e.g. "3x3: J(2;2) J(3;1)"
        l: String,
        /// Structure text or file for the candidate member
        m: String,
    },
    /// Decide whether the bundle closure of M is contained in that of L
    CheckBundle { l: String, m: String },
    /// Apply a coalescence assignment ("{e1,e2}->t; {e3}->fresh") to L
    Coalesce { l: String, assignment: String },
    /// Enumerate all bundles of size MxN and emit the closure hierarchy
    Hierarchy {
        m: usize,
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refuse sizes with min(m,n) above this bound
        #[arg(long, default_value_t = 3)]
        cap: usize,
    },
    /// Run a verification suite: rank-lemma, coupled-lemma, witness,
    /// pervouchine, duality, or order
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the coalescence witness pencil L_k and its limit
    Witness {
        l: String,
        /// Eigenvalues to coalesce: "{e1,e2}" or "e1,e2"
        group: String,
        /// Finite target eigenvalue
        target: String,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Depth for Weyr extraction; min(m,n) when omitted
        #[arg(long)]
        dmax: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::CheckOrbit { l, m } => cmd_check_orbit(&l, &m),
        Command::CheckBundle { l, m } => cmd_check_bundle(&l, &m),
        Command::Coalesce { l, assignment } => cmd_coalesce(&l, &assignment),
        Command::Hierarchy {
            m,
            n,
            format,
            out,
            cap,
        } => cmd_hierarchy(m, n, format, out, cap),
        Command::Verify { suite, seed } => cmd_verify(&suite, seed),
        Command::Witness {
            l,
            group,
            target,
            k,
            out,
            dmax,
        } => cmd_witness(&l, &group, &target, k, out, dmax),
    };
    ExitCode::from(code)
}

/// Treats the argument as a path when one exists, inline text otherwise.
fn load_structure(arg: &str) -> Result<PencilStructure, String> {
    let text = if Path::new(arg).is_file() {
        fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?
    } else {
        arg.to_string()
    };
    PencilStructure::parse(text.trim()).map_err(|e| format!("{arg}: {e}"))
}

fn fail(msg: impl AsRef<str>) -> u8 {
    eprintln!("error: {}", msg.as_ref());
    2
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| format!("cannot write: {e}")),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_check_orbit(l_text: &str, m_text: &str) -> u8 {
    let (l, m) = match (load_structure(l_text), load_structure(m_text)) {
        (Ok(l), Ok(m)) => (l, m),
        (Err(e), _) | (_, Err(e)) => return fail(e),
    };
    let report = match orbit_closure_report(&l, &m) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    println!("L: {l}");
    println!("M: {m}");
    println!("h = rank L - rank M = {}", report.h);
    let flag = |ok: bool| if ok { "ok" } else { "FAIL" };
    println!(
        "(i)   right singular: r(M) < r(L)+(h..)          {}",
        flag(report.right_ok)
    );
    println!(
        "(ii)  left singular:  l(M) < l(L)+(h..)          {}",
        flag(report.left_ok)
    );
    for (e, ok) in &report.eigen {
        println!("(iii) at {e}: W({e},L) < W({e},M)+(h..)  {}", flag(*ok));
    }
    println!(
        "(iii) at all other points (h >= 0)               {}",
        flag(report.generic_ok)
    );
    if report.contains() {
        println!("VERDICT: YES");
        0
    } else {
        println!("VERDICT: NO");
        3
    }
}

fn cmd_check_bundle(l_text: &str, m_text: &str) -> u8 {
    let (l, m) = match (load_structure(l_text), load_structure(m_text)) {
        (Ok(l), Ok(m)) => (l, m),
        (Err(e), _) | (_, Err(e)) => return fail(e),
    };
    match bundle_closure_contains(&l, &m) {
        Ok((true, witness)) => {
            println!("L: {l}");
            println!("M: {m}");
            if let Some(w) = witness {
                println!("witness: {w}");
            }
            println!("VERDICT: YES");
            0
        }
        Ok((false, _)) => {
            println!("L: {l}");
            println!("M: {m}");
            println!("no coalescence of L orbit-dominates M");
            println!("VERDICT: NO");
            3
        }
        Err(e) => fail(e.to_string()),
    }
}

fn cmd_coalesce(l_text: &str, assignment_text: &str) -> u8 {
    let l = match load_structure(l_text) {
        Ok(l) => l,
        Err(e) => return fail(e),
    };
    let assignment = match assignment::parse_assignment(&l, assignment_text) {
        Ok(a) => a,
        Err(e) => return fail(e.to_string()),
    };
    let names = auto_fresh_names(&l, &assignment);
    match coalesce(&l, &assignment, &names) {
        Ok(result) => {
            println!("{result}");
            0
        }
        Err(e) => fail(e.to_string()),
    }
}

fn cmd_hierarchy(m: usize, n: usize, format: Format, out: Option<PathBuf>, cap: usize) -> u8 {
    if m.min(n) > cap {
        return fail(format!(
            "min({m},{n}) exceeds the cap {cap}; raise --cap deliberately"
        ));
    }
    let graph = hierarchy::hasse(m, n);
    let content = match format {
        Format::Dot => export_dot(&graph),
        Format::Json => export_json(&graph),
        Format::Text => text_graph(&graph),
    };
    if let Err(e) = emit(out.as_ref(), &content) {
        return fail(e);
    }
    // keep the machine-readable stream clean when writing to stdout
    let counts = format!(
        "{} nodes, {} edges",
        graph.nodes().len(),
        graph.edges().len()
    );
    if out.is_some() {
        println!("{counts}");
    } else {
        eprintln!("{counts}");
    }
    0
}

fn text_graph(g: &HierarchyGraph) -> String {
    let (m, n) = g.size();
    let mut out = format!("bundle hierarchy {}x{}\n", m, n);
    for node in g.nodes() {
        out.push_str(&format!(
            "  [{}] c_jor={} eigs={}\n",
            node.id, node.c_jor, node.eig_count
        ));
    }
    out.push_str("covers (container -> contained):\n");
    for &(from, to) in g.edges() {
        out.push_str(&format!(
            "  {}  ->  {}\n",
            g.nodes()[from].id,
            g.nodes()[to].id
        ));
    }
    out
}

fn cmd_verify(suite: &str, seed: u64) -> u8 {
    let Some(report) = verify::by_name(suite, seed) else {
        return fail(format!(
            "unknown suite '{suite}'; expected one of {}",
            verify::SUITE_NAMES.join(", ")
        ));
    };
    for failure in report.failures.iter().take(20) {
        println!("FAIL {failure}");
    }
    println!("{}", report.summary());
    println!("VERDICT: {}", if report.passed() { "PASS" } else { "FAIL" });
    report_exit_code(&report)
}

/// 0 for a clean suite, 4 for any verification failure. A correct build
/// never produces a failing suite, so this mapping is pinned by a unit
/// test rather than a scripted invocation.
fn report_exit_code(report: &verify::SuiteReport) -> u8 {
    if report.passed() {
        0
    } else {
        4
    }
}

fn parse_group(text: &str) -> Result<BTreeSet<Eigenvalue>, String> {
    let inner = text.trim();
    let inner = inner.strip_prefix('{').unwrap_or(inner);
    let inner = inner.strip_suffix('}').unwrap_or(inner);
    let mut group = BTreeSet::new();
    for token in inner.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        group.insert(Eigenvalue::parse(token).map_err(|e| e.to_string())?);
    }
    if group.is_empty() {
        return Err("empty coalescence group".into());
    }
    Ok(group)
}

fn dump_pencil(label: &str, pencil: &ExplicitPencil) -> String {
    format!("{label} A =\n{}{label} B =\n{}", pencil.a(), pencil.b())
}

fn cmd_witness(
    l_text: &str,
    group_text: &str,
    target_text: &str,
    k: usize,
    out: Option<PathBuf>,
    dmax: Option<usize>,
) -> u8 {
    let l = match load_structure(l_text) {
        Ok(l) => l,
        Err(e) => return fail(e),
    };
    let group = match parse_group(group_text) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let target = match Eigenvalue::parse(target_text.trim()) {
        Ok(Eigenvalue::Finite(g)) => g,
        Ok(other) => return fail(format!("target must be finite, got {other}")),
        Err(e) => return fail(e.to_string()),
    };
    if k == 0 {
        return fail("k must be positive");
    }
    let witness = match witness_sequence(&l, &group, &target, k) {
        Ok(w) => w,
        Err(e) => return fail(e.to_string()),
    };
    let d_max = dmax.unwrap_or_else(|| l.rows().min(l.cols()));

    let mut report = String::new();
    report.push_str(&format!("structure: {l}\n"));
    report.push_str(&format!("k = {k}\n"));
    report.push_str(&dump_pencil("L_k", &witness.lk));
    report.push_str(&dump_pencil("limit", &witness.limit));
    for (source, value) in &witness.displaced {
        match extract_weyr(&witness.lk, &Eigenvalue::Finite(value.clone()), d_max) {
            Ok(weyr) => report.push_str(&format!(
                "W({value}, L_k) = {weyr}   (carries eigenvalue {source})\n"
            )),
            Err(e) => return fail(e.to_string()),
        }
    }
    let target_eig = Eigenvalue::Finite(target.clone());
    match extract_weyr(&witness.limit, &target_eig, d_max) {
        Ok(weyr) => report.push_str(&format!("W({target}, limit) = {weyr}\n")),
        Err(e) => return fail(e.to_string()),
    }
    if let Err(e) = emit(out.as_ref(), &report) {
        return fail(e);
    }
    0
}
