//! The `lieext` command line.
//!
//! Exit codes: `0` success, `1` an invariant failed, `2` usage or validation
//! error, `10` obstructed pair, `11` incompatible pair.

pub mod workspace;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cohom::{self, Cochain};
use crate::exactlin::Matrix;
use crate::freenil::{self, FreeNil2};
use crate::lifting::{self, AutPair, LiftOutcome};
use workspace::{CochainEntryDoc, Document, FieldDoc, LoadError, MatrixDoc, Problem, Workspace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OBSTRUCTED: i32 = 10;
pub const EXIT_INCOMPATIBLE: i32 = 11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lieext", version, about = "Automorphism lifting for abelian extensions of Lie algebras")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub output: Output,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate every object in a workspace.
    Check { file: PathBuf },
    /// Dimensions of Z^k, B^k and H^k for a named action.
    Cohomology {
        file: PathBuf,
        action: String,
        degree: usize,
        /// Print a representative cocycle for each basis class.
        #[arg(long)]
        representatives: bool,
    },
    /// The 2-cocycle of an extension and its class.
    Cocycle { file: PathBuf, extension: String },
    /// Decide whether (theta, phi) lifts to an automorphism of L.
    Lift { file: PathBuf, extension: String, theta: String, phi: String },
    /// Emit L_{n,2}, or test a pair against the exterior-square criterion.
    Freenil {
        n: usize,
        /// Matrix file for theta on the derived subalgebra.
        #[arg(long, requires = "phi")]
        theta: Option<PathBuf>,
        /// Matrix file for phi on the abelianization.
        #[arg(long, requires = "theta")]
        phi: Option<PathBuf>,
        /// Build over GF(p) instead of Q when emitting a workspace.
        #[arg(long, conflicts_with_all = ["theta", "phi"])]
        modulus: Option<u64>,
    },
    /// Exhaustive exactness audit over a finite field.
    Enumerate { file: PathBuf, extension: String },
    /// Emit the workspace extended by the semidirect product of an action.
    Semidirect { file: PathBuf, action: String },
}

/// Failure carrying an exit code and a message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Failure::usage(e)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        let code = match e {
            crate::Error::Consistency(_) => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<(String, i32), Failure>;

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ =
                if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((report, code)) => {
            let _ = out.write_all(report.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let o = cli.output;
    match &cli.command {
        Command::Check { file } => cmd_check(file, o),
        Command::Cohomology { file, action, degree, representatives } => {
            cmd_cohomology(file, action, *degree, *representatives, o)
        }
        Command::Cocycle { file, extension } => cmd_cocycle(file, extension, o),
        Command::Lift { file, extension, theta, phi } => cmd_lift(file, extension, theta, phi, o),
        Command::Freenil { n, theta, phi, modulus } => cmd_freenil(*n, theta.as_deref(), phi.as_deref(), *modulus, o),
        Command::Enumerate { file, extension } => cmd_enumerate(file, extension, o),
        Command::Semidirect { file, action } => cmd_semidirect(file, action),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_valid(path: &Path) -> Result<Workspace, Failure> {
    let ws = workspace::load(&read(path)?)?;
    if let Some(p) = ws.problems.first() {
        return Err(Failure::usage(format!(
            "workspace fails validation ({} problem(s)); first: {}: {}",
            ws.problems.len(),
            p.object,
            p.message
        )));
    }
    Ok(ws)
}

fn lookup<'a, T>(table: &'a std::collections::BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, Failure> {
    table.get(name).ok_or_else(|| Failure::usage(format!("unknown {kind} {name:?}")))
}

fn render<T: Serialize>(o: Output, report: &T, text: impl FnOnce() -> String) -> String {
    match o {
        Output::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Output::Text => text(),
    }
}

fn matrix_text(m: &Matrix) -> String {
    if m.rows() == 0 {
        return "  (empty)\n".to_string();
    }
    m.to_rows()
        .iter()
        .map(|r| format!("  [{}]\n", r.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")))
        .collect()
}

#[derive(Serialize)]
struct CheckReport {
    objects: usize,
    ok: bool,
    problems: Vec<Problem>,
}

fn cmd_check(file: &Path, o: Output) -> CmdResult {
    let ws = workspace::load(&read(file)?)?;
    let report = CheckReport { objects: ws.object_names().len(), ok: ws.is_valid(), problems: ws.problems.clone() };
    let text = || {
        let mut s = String::new();
        for (kind, name) in ws.object_names() {
            let mine: Vec<&Problem> = ws.problems.iter().filter(|p| p.object == name).collect();
            if mine.is_empty() {
                s += &format!("ok    {kind} {name}\n");
            }
            for p in mine {
                s += &format!("FAIL  {kind} {name}: {}\n", p.message);
            }
        }
        s += &format!("{} object(s), {} problem(s)\n", report.objects, report.problems.len());
        s
    };
    let code = if ws.is_valid() { EXIT_OK } else { EXIT_INVARIANT };
    Ok((render(o, &report, text), code))
}

#[derive(Serialize)]
struct TableRow {
    args: Vec<usize>,
    value: Vec<String>,
}

fn cochain_table(c: &Cochain) -> Vec<TableRow> {
    let basis = cohom::KSubsetBasis::new(c.action().b().dim(), c.degree());
    basis
        .tuples()
        .iter()
        .map(|t| TableRow { args: t.clone(), value: c.on_basis(t).iter().map(|s| s.to_string()).collect() })
        .collect()
}

#[derive(Serialize)]
struct CohomologyReport {
    action: String,
    degree: usize,
    dim_z: usize,
    dim_b: usize,
    dim_h: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    representatives: Option<Vec<Vec<TableRow>>>,
}

fn cmd_cohomology(file: &Path, action: &str, k: usize, reps: bool, o: Output) -> CmdResult {
    let ws = load_valid(file)?;
    let act = lookup(&ws.actions, "action", action)?;
    let space = cohom::cohomology(act, k)?;
    let report = CohomologyReport {
        action: action.to_string(),
        degree: k,
        dim_z: space.dim_z(),
        dim_b: space.dim_b(),
        dim_h: space.dim_h(),
        representatives: reps.then(|| space.representatives().iter().map(cochain_table).collect()),
    };
    let text = || {
        let mut s = format!(
            "H^{k} of {action}: dim Z = {}, dim B = {}, dim H = {}\n",
            report.dim_z, report.dim_b, report.dim_h
        );
        for (idx, rep) in report.representatives.iter().flatten().enumerate() {
            s += &format!("representative {idx}:\n");
            for row in rep {
                s += &format!("  {:?} -> [{}]\n", row.args, row.value.join(", "));
            }
        }
        s
    };
    Ok((render(o, &report, text), EXIT_OK))
}

#[derive(Serialize)]
struct CocycleReport {
    extension: String,
    mu: Vec<CochainEntryDoc>,
    class: Vec<String>,
    split: bool,
}

fn cmd_cocycle(file: &Path, name: &str, o: Output) -> CmdResult {
    let ws = load_valid(file)?;
    let ext = lookup(&ws.extensions, "extension", name)?;
    let space = cohom::cohomology_unbounded(ext.action(), 2)?;
    let class = space.class_of(ext.cocycle())?;
    let report = CocycleReport {
        extension: name.to_string(),
        mu: workspace::cochain_entries(ext.cocycle()),
        class: class.coords.iter().map(|s| s.to_string()).collect(),
        split: class.is_zero(),
    };
    let text = || {
        let mut s = format!("cocycle of {name}:\n");
        for e in &report.mu {
            s += &format!("  mu({}, {}) = [{}]\n", e.i, e.j, e.value.join(", "));
        }
        if report.mu.is_empty() {
            s += "  mu = 0\n";
        }
        s += &format!("class coordinates: [{}]\nsplit: {}\n", report.class.join(", "), report.split);
        s
    };
    Ok((render(o, &report, text), EXIT_OK))
}

#[derive(Serialize)]
struct LiftReport {
    verdict: &'static str,
    extension: String,
    theta: String,
    phi: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<MatrixDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<MatrixDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction_class: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction: Option<Vec<CochainEntryDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_index: Option<usize>,
}

fn verdict(outcome: &LiftOutcome) -> (&'static str, i32) {
    match outcome {
        LiftOutcome::Inducible(_) => ("INDUCIBLE", EXIT_OK),
        LiftOutcome::Obstructed { .. } => ("OBSTRUCTED", EXIT_OBSTRUCTED),
        LiftOutcome::Incompatible { .. } => ("INCOMPATIBLE", EXIT_INCOMPATIBLE),
    }
}

fn cmd_lift(file: &Path, name: &str, theta: &str, phi: &str, o: Output) -> CmdResult {
    let ws = load_valid(file)?;
    let ext = lookup(&ws.extensions, "extension", name)?;
    let t = lookup(&ws.maps, "map", theta)?;
    let p = lookup(&ws.maps, "map", phi)?;
    if t.source() != ext.a() || t.target() != ext.a() {
        return Err(Failure::usage(format!("{theta:?} is not an endomorphism of the kernel of {name:?}")));
    }
    if p.source() != ext.b() || p.target() != ext.b() {
        return Err(Failure::usage(format!("{phi:?} is not an endomorphism of the quotient of {name:?}")));
    }
    let pair = AutPair::new(t.clone(), p.clone())?;
    let outcome = lifting::try_lift(&pair, ext)?;
    let (v, code) = verdict(&outcome);
    let mut report = LiftReport {
        verdict: v,
        extension: name.to_string(),
        theta: theta.to_string(),
        phi: phi.to_string(),
        gamma: None,
        lambda: None,
        obstruction_class: None,
        obstruction: None,
        basis_index: None,
    };
    match &outcome {
        LiftOutcome::Inducible(w) => {
            report.gamma = Some(workspace::matrix_doc(w.gamma.matrix()));
            report.lambda = Some(workspace::matrix_doc(&w.lambda));
        }
        LiftOutcome::Obstructed { class } => {
            report.obstruction_class = Some(class.coords.iter().map(|s| s.to_string()).collect());
            report.obstruction = Some(workspace::cochain_entries(&lifting::obstruction_cocycle(&pair, ext)?));
        }
        LiftOutcome::Incompatible { basis_index } => report.basis_index = Some(*basis_index),
    }
    let text = || {
        let mut s = format!("{v}\n");
        match &outcome {
            LiftOutcome::Inducible(w) => {
                s += &format!("gamma =\n{}lambda =\n{}", matrix_text(w.gamma.matrix()), matrix_text(&w.lambda));
            }
            LiftOutcome::Obstructed { .. } => {
                s += &format!(
                    "obstruction class coordinates: [{}]\n",
                    report.obstruction_class.as_deref().unwrap_or_default().join(", ")
                );
            }
            LiftOutcome::Incompatible { basis_index } => {
                s += &format!("compatibility fails at basis element {basis_index} of B\n");
            }
        }
        s
    };
    Ok((render(o, &report, text), code))
}

fn read_matrix_file(path: &Path, n: usize) -> Result<Matrix, Failure> {
    let text = read(path)?;
    let mf: workspace::MatrixFile =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let field = workspace::parse_field(&mf.field)?;
    let rows = mf.matrix.len();
    if rows != n || mf.matrix.iter().any(|r| r.len() != n) {
        return Err(Failure::usage(format!("{}: expected a {n}x{n} matrix", path.display())));
    }
    Ok(workspace::parse_matrix(field, &path.display().to_string(), n, n, &mf.matrix)?)
}

#[derive(Serialize)]
struct FreenilReport {
    n: usize,
    exterior_square: MatrixDoc,
    closed_form: &'static str,
    engine: &'static str,
    agreement: bool,
}

fn cmd_freenil(n: usize, theta: Option<&Path>, phi: Option<&Path>, modulus: Option<u64>, o: Output) -> CmdResult {
    let (Some(theta), Some(phi)) = (theta, phi) else {
        let field = match modulus {
            None => crate::exactlin::Field::Rationals,
            Some(p) => crate::exactlin::Field::prime(p)?,
        };
        let f = FreeNil2::build(field, n)?;
        return Ok((workspace::emit(&freenil_document(&f)?), EXIT_OK));
    };
    let t = read_matrix_file(theta, freenil::derived_dim(n))?;
    let p = read_matrix_file(phi, n)?;
    if t.field() != p.field() {
        return Err(Failure::usage(format!("theta is over {} but phi is over {}", t.field(), p.field())));
    }
    if !t.is_invertible() {
        return Err(Failure::usage("theta is not invertible"));
    }
    if !p.is_invertible() {
        return Err(Failure::usage("phi is not invertible"));
    }
    let f = FreeNil2::build(t.field(), n)?;
    let closed = freenil::inducible_nil2(&t, &p, n)?;
    let pair = f.pair(t, p.clone())?;
    let outcome = lifting::try_lift(&pair, f.extension())?;
    let (engine, _) = verdict(&outcome);
    let closed_form = if closed { "INDUCIBLE" } else { "OBSTRUCTED" };
    let agreement = closed_form == engine;
    let report = FreenilReport {
        n,
        exterior_square: workspace::matrix_doc(&freenil::exterior_square(&p)?),
        closed_form,
        engine,
        agreement,
    };
    let code = match (agreement, closed) {
        (false, _) => EXIT_INVARIANT,
        (true, true) => EXIT_OK,
        (true, false) => EXIT_OBSTRUCTED,
    };
    let text = || {
        format!(
            "exterior square of phi =\n{}closed form: {closed_form}\nengine: {engine}\nAGREEMENT={agreement}\n",
            matrix_text(&freenil::exterior_square(pair.phi().matrix()).expect("square"))
        )
    };
    Ok((render(o, &report, text), code))
}

/// Names: `free`, `derived`, `abelianization`, maps `inj`, `proj`, `sect`,
/// extension `central`.
pub fn freenil_document(f: &FreeNil2) -> Result<Document, LoadError> {
    let ext = f.extension();
    let mut doc = Document {
        field: FieldDoc::of(f.algebra().field()),
        algebras: Default::default(),
        maps: Default::default(),
        actions: Default::default(),
        extensions: Default::default(),
    };
    doc.algebras.0.insert("free".into(), workspace::algebra_doc(ext.l()));
    doc.algebras.0.insert("derived".into(), workspace::algebra_doc(ext.a()));
    doc.algebras.0.insert("abelianization".into(), workspace::algebra_doc(ext.b()));
    doc.maps.0.insert("inj".into(), workspace::map_doc("derived", "free", ext.inj()));
    doc.maps.0.insert("proj".into(), workspace::map_doc("free", "abelianization", ext.proj()));
    doc.maps.0.insert("sect".into(), workspace::map_doc("abelianization", "free", ext.sect()));
    doc.extensions.0.insert(
        "central".into(),
        workspace::ExtensionDoc {
            l: Some("free".into()),
            inj: Some("inj".into()),
            proj: Some("proj".into()),
            sect: Some("sect".into()),
            from_cocycle: None,
        },
    );
    Ok(doc)
}

#[derive(Serialize)]
struct EnumerateReport {
    extension: String,
    #[serde(flatten)]
    ledger: lifting::ExactnessLedger,
    passes: bool,
}

fn cmd_enumerate(file: &Path, name: &str, o: Output) -> CmdResult {
    let ws = load_valid(file)?;
    let ext = lookup(&ws.extensions, "extension", name)?;
    let ledger = lifting::exactness_audit(ext)?;
    let passes = ledger.passes();
    let report = EnumerateReport { extension: name.to_string(), ledger, passes };
    let text = || {
        let l = &report.ledger;
        let mark = |b: bool| if b { "pass" } else { "FAIL" };
        format!(
            "|Aut_A(L)| = {}\n|Z^1| = {}\n|ker tau| = {}\n|image tau| = {}\n|C_alpha| = {}\n|ker wells| = {}\n\
             ker tau = Z^1: {}\n|Aut_A(L)| = |Z^1| * |image tau|: {}\nimage tau = ker wells: {}\n",
            l.aut_a,
            l.z1,
            l.kernel_tau,
            l.image_tau,
            l.compatible,
            l.kernel_wells,
            mark(l.kernel_tau_is_z1),
            mark(l.order_identity),
            mark(l.image_is_kernel),
        )
    };
    Ok((render(o, &report, text), if passes { EXIT_OK } else { EXIT_INVARIANT }))
}

fn cmd_semidirect(file: &Path, action: &str) -> CmdResult {
    let ws = load_valid(file)?;
    let act = lookup(&ws.actions, "action", action)?;
    let ext = crate::extension::semidirect(act)?;
    let adoc = &ws.document.actions.0[action];
    let mut doc = ws.document.clone();
    workspace::add_extension(&mut doc, &format!("{action}_semidirect"), &adoc.a, &adoc.b, &ext)?;
    Ok((workspace::emit(&doc), EXIT_OK))
}
