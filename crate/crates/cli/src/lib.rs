//! The `cdloops` command line: loop files in, text reports out, with an
//! optional JSON copy of every result.

pub mod paper_check;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use cdloops::analysis::{self, diassociative_fast, kirsh_refutation, moufang_double_report, Condition};
use cdloops::automorphism::{automorphism_group, induced_linear_action};
use cdloops::doubling::{self, DoubleResult};
use cdloops::involution::classify_involution;
use cdloops::io::{read_loop, write_loop};
use cdloops::terms::{self, check_identity, degrees, expand_derivative_identities, parse_term, VarietySpec};
use cdloops::{DoublingParams, ElemId, Flavor, Involution, LoopTable};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cdloops", version, about = "Finite loops with involution and Cayley-Dickson doubles")]
struct Cli {
    /// Also write the result as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Cayley table and the structure of a loop.
    Show { file: String },
    /// Validate a loop file; exits 1 if it is not a loop with involution.
    Check { file: String },
    /// Double a loop with involution.
    Double(DoubleArgs),
    /// Print the Cayley-Dickson loop Q_n.
    Qn { n: usize },
    /// Print Chein's double M(G, 2) of a group.
    Chein { file: String },
    /// Iterated doubles of Z_m with gamma_i = z^(e_i).
    General {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        gammas: Vec<i64>,
    },
    /// Property flags with witnesses.
    Analyze(AnalyzeArgs),
    /// Automorphism group.
    Aut(AutArgs),
    /// Identity sets.
    #[command(subcommand)]
    Variety(VarietyCommand),
    /// Terms.
    #[command(subcommand)]
    Term(TermCommand),
    /// Evaluate [xz, yz, zj] in Q4.
    Kirsh,
    /// Run the acceptance suite.
    PaperCheck {
        /// A criterion name or number.
        #[arg(long)]
        only: Option<String>,
        /// Omit timings, making the output reproducible byte for byte.
        #[arg(long)]
        no_timings: bool,
    },
}

#[derive(Args, Debug)]
struct DoubleArgs {
    file: String,
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
    /// An element, or `none` for a double without involution.
    #[arg(long, default_value = "none", allow_hyphen_values = true)]
    epsilon: String,
    /// Name of the new generator.
    #[arg(long, default_value = "j")]
    j: String,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    file: String,
    /// Also run the finite-basis diassociativity test.
    #[arg(long)]
    fast_dias: bool,
    /// Check the Moufang criterion for D(L, *, gamma).
    #[arg(long, requires = "gamma")]
    moufang_double: bool,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
}

#[derive(Args, Debug)]
struct AutArgs {
    file: String,
    /// Only automorphisms commuting with the involution.
    #[arg(long)]
    star: bool,
    /// Only star automorphisms fixing this element.
    #[arg(long, value_name = "ELEMENT", conflicts_with = "star", allow_hyphen_values = true)]
    fix_epsilon: Option<String>,
    /// Print the induced action on L/Z(L).
    #[arg(long)]
    linear_action: bool,
}

#[derive(Subcommand, Debug)]
enum VarietyCommand {
    /// Check every identity of a file on a loop; exits 1 if one fails.
    Check {
        file: String,
        #[arg(long)]
        ids: PathBuf,
    },
    /// Expand each identity over the double.
    Derive {
        #[arg(long)]
        ids: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum TermCommand {
    /// The degree vector (deg_j, deg_gamma, deg_eps) of a term.
    Degrees {
        term: String,
        /// Variables ranging over Lj.
        #[arg(long, value_delimiter = ',')]
        marks: Vec<String>,
    },
}

/// What a command produced.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, code: EXIT_OK }
    }
}

/// A failure to read or interpret the input, as opposed to a property that
/// does not hold.
#[derive(Debug)]
struct UsageError(anyhow::Error);

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Loop files named `-` are read from `stdin`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut input = Input { stdin, cached: None };
    let report = match dispatch(cli.command, &mut input) {
        Ok(r) => r,
        Err(e) => {
            let code = if e.is::<UsageError>() { EXIT_USAGE } else { EXIT_FAILED };
            let e = e.downcast::<UsageError>().map(|u| u.0).unwrap_or_else(|e| e);
            let _ = writeln!(err, "error: {e:#}");
            return code;
        }
    };
    if out.write_all(report.text.as_bytes()).is_err() {
        return EXIT_FAILED;
    }
    if let Some(path) = cli.json_out {
        let body = serde_json::to_string_pretty(&report.json).expect("values serialise") + "\n";
        if let Err(e) = std::fs::write(&path, body) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    report.code
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: anyhow::Error) -> anyhow::Error {
    anyhow::Error::new(UsageError(e))
}

struct Input<'a> {
    stdin: &'a mut dyn Read,
    cached: Option<String>,
}

impl Input<'_> {
    fn text(&mut self, path: &str) -> Result<String> {
        if path != "-" {
            return std::fs::read_to_string(path).with_context(|| format!("cannot read {path}")).map_err(usage);
        }
        if self.cached.is_none() {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).context("cannot read stdin").map_err(usage)?;
            self.cached = Some(s);
        }
        Ok(self.cached.clone().unwrap_or_default())
    }

    fn load(&mut self, path: &str) -> Result<(LoopTable, Option<Involution>)> {
        let text = self.text(path)?;
        read_loop(&text).with_context(|| format!("{path}: invalid loop file")).map_err(usage)
    }
}

fn dispatch(cmd: Command, input: &mut Input) -> Result<Report> {
    match cmd {
        Command::Show { file } => {
            let (l, inv) = input.load(&file)?;
            Ok(show(&l, inv.as_ref()))
        }
        Command::Check { file } => check(input, &file),
        Command::Double(a) => double(input, a),
        Command::Qn { n } => {
            if n == 0 {
                return Err(usage(anyhow!("n must be at least 1")));
            }
            let chain = doubling::build_qn(n).map_err(|e| usage(e.into()))?;
            Ok(emit_double(chain.last().expect("n >= 1")))
        }
        Command::Chein { file } => {
            let (g, _) = input.load(&file)?;
            let d = doubling::build_chein(&g).map_err(|e| usage(e.into()))?;
            Ok(emit_double(&d))
        }
        Command::General { m, gammas } => {
            let chain = doubling::build_general(m, &gammas).map_err(|e| usage(e.into()))?;
            Ok(emit_double(chain.last().expect("at least one gamma")))
        }
        Command::Analyze(a) => analyze(input, a),
        Command::Aut(a) => aut(input, a),
        Command::Variety(VarietyCommand::Check { file, ids }) => variety_check(input, &file, &ids),
        Command::Variety(VarietyCommand::Derive { ids }) => variety_derive(&ids),
        Command::Term(TermCommand::Degrees { term, marks }) => term_degrees(&term, &marks),
        Command::Kirsh => Ok(kirsh()),
        Command::PaperCheck { only, no_timings } => paper_check(only.as_deref(), !no_timings),
    }
}

fn element(l: &LoopTable, s: &str) -> Result<ElemId> {
    l.find(s)
        .or_else(|| s.parse::<ElemId>().ok().filter(|&i| i < l.order()))
        .ok_or_else(|| usage(anyhow!("no element named {s}")))
}

fn names(l: &LoopTable, xs: &[ElemId]) -> String {
    xs.iter().map(|&x| l.name(x)).collect::<Vec<_>>().join(" ")
}

fn show(l: &LoopTable, inv: Option<&Involution>) -> Report {
    let n = l.order();
    let width = l.names().iter().map(|s| s.chars().count()).max().unwrap_or(1);
    let mut t = String::new();
    let _ = writeln!(t, "order: {n}");
    let _ = write!(t, "{:>width$} |", "");
    for b in 0..n {
        let _ = write!(t, " {:>width$}", l.name(b));
    }
    let _ = writeln!(t, "\n{}", "-".repeat((width + 1) * (n + 1) + 1));
    for a in 0..n {
        let _ = write!(t, "{:>width$} |", l.name(a));
        for b in 0..n {
            let _ = write!(t, " {:>width$}", l.name(l.mul(a, b)));
        }
        t.push('\n');
    }
    let s = l.structure_sets();
    let _ = writeln!(t, "center: {}", names(l, &s.center));
    let _ = writeln!(t, "nucleus: {}", names(l, &s.nucleus));
    let _ = writeln!(t, "commutant: {}", names(l, &s.commutant));
    let _ = writeln!(t, "derived: {}", names(l, s.derived.members()));
    let _ = writeln!(t, "dim: {}", s.dim.map_or("undefined".into(), |d| d.to_string()));
    let mut json = json!({
        "order": n,
        "names": l.names(),
        "table": l.rows(),
        "center": s.center,
        "nucleus": s.nucleus,
        "commutant": s.commutant,
        "derived": s.derived.members(),
        "dim": s.dim,
    });
    if let Some(inv) = inv {
        let r = classify_involution(l, inv);
        let _ = writeln!(t, "involution: {}", names(l, inv.perm()));
        let _ = writeln!(t, "symmetric center: {}", names(l, &r.symmetric_center));
        json["involution"] = serde_json::to_value(&r).expect("serialisable");
    }
    Report::ok(t, json)
}

fn check(input: &mut Input, file: &str) -> Result<Report> {
    let text = input.text(file)?;
    match read_loop(&text) {
        Ok((l, inv)) => {
            let mut t = format!("valid: loop of order {}\n", l.order());
            let mut json = json!({ "valid": true, "order": l.order() });
            if let Some(inv) = &inv {
                let r = classify_involution(&l, inv);
                let flags = [
                    ("identity", r.is_identity),
                    ("central", r.is_central),
                    ("super-central", r.is_super_central),
                    ("normal", r.is_normal),
                    ("anti-symmetric", r.is_anti_symmetric),
                ];
                let held: Vec<&str> = flags.iter().filter(|f| f.1).map(|f| f.0).collect();
                let _ = writeln!(t, "involution: valid; {}", if held.is_empty() { "none of the special kinds".into() } else { held.join(", ") });
                json["involution"] = serde_json::to_value(&r).expect("serialisable");
            }
            Ok(Report::ok(t, json))
        }
        Err(e) => Ok(Report {
            text: format!("invalid: {e}\n"),
            json: json!({ "valid": false, "error": e.to_string() }),
            code: EXIT_FAILED,
        }),
    }
}

fn double(input: &mut Input, a: DoubleArgs) -> Result<Report> {
    let (l, inv) = input.load(&a.file)?;
    let inv = inv.ok_or_else(|| usage(anyhow!("{}: doubling needs an involution", a.file)))?;
    let gamma = element(&l, &a.gamma)?;
    let epsilon = if a.epsilon == "none" { None } else { Some(element(&l, &a.epsilon)?) };
    let d = doubling::double_named(&l, &inv, DoublingParams { gamma, epsilon }, &a.j).map_err(|e| usage(e.into()))?;
    Ok(emit_double(&d))
}

fn emit_double(d: &DoubleResult) -> Report {
    let text = write_loop(d.table(), d.star());
    let json: Value = serde_json::from_str(&text).expect("write_loop emits JSON");
    Report::ok(text, json)
}

fn witness_text(l: &LoopTable, w: Option<&Vec<ElemId>>) -> String {
    w.map_or(String::new(), |w| format!("  witness ({})", w.iter().map(|&x| l.name(x)).collect::<Vec<_>>().join(", ")))
}

fn analyze(input: &mut Input, a: AnalyzeArgs) -> Result<Report> {
    let (l, inv) = input.load(&a.file)?;
    let r = analysis::property_report(&l, inv.as_ref());
    let flags: [(&str, bool); 16] = [
        ("commutative", r.commutative),
        ("associative", r.associative),
        ("flexible", r.flexible),
        ("left_alternative", r.left_alternative),
        ("right_alternative", r.right_alternative),
        ("alternative", r.alternative),
        ("moufang", r.moufang),
        ("power_associative", r.power_associative),
        ("diassociative", r.diassociative),
        ("central_by_abelian", r.central_by_abelian),
        ("exp2", r.exp2),
        ("inverse_property", r.inverse_property),
        ("weak_inverse", r.weak_inverse),
        ("anti_automorphic_inverse", r.anti_automorphic_inverse),
        ("well_defined_inverse", r.well_defined_inverse),
        ("anti_commutative", r.anti_commutative),
    ];
    let mut t = format!("order: {}\n", l.order());
    for (name, holds) in flags.iter().copied().chain(r.anti_symmetric.map(|h| ("anti_symmetric", h))) {
        let _ = writeln!(t, "{name}: {holds}{}", witness_text(&l, r.witnesses.get(name)));
    }
    let mut json = json!({ "order": l.order(), "names": l.names(), "properties": r });
    if a.fast_dias {
        match diassociative_fast(&l) {
            Ok(d) => {
                let _ = writeln!(t, "diassociative (finite basis): {}{}", d.holds, witness_text(&l, d.witness.as_ref()));
                json["fast_dias"] = serde_json::to_value(&d).expect("serialisable");
            }
            Err(e) => {
                let _ = writeln!(t, "diassociative (finite basis): not applicable, {e}");
                json["fast_dias"] = Value::Null;
            }
        }
    }
    if a.moufang_double {
        let inv = inv.as_ref().ok_or_else(|| usage(anyhow!("{}: --moufang-double needs an involution", a.file)))?;
        let gamma = element(&l, a.gamma.as_deref().expect("clap requires gamma"))?;
        let m = moufang_double_report(&l, inv, gamma).map_err(|e| usage(e.into()))?;
        let conds: [(&str, &Condition); 5] = [
            ("L moufang", &m.moufang),
            ("[a, cc*] = 1", &m.norm_commutes),
            ("[c, c*] = 1", &m.star_commutes),
            ("[a, c, c*] = 1", &m.star_associates),
            ("(cc*)c nuclear", &m.cube_nuclear),
        ];
        let _ = writeln!(t, "moufang double with gamma = {}:", l.name(gamma));
        for (name, c) in conds {
            let _ = writeln!(t, "  {name}: {}{}", c.holds, witness_text(&l, c.witness.as_ref()));
        }
        let _ = writeln!(t, "  predicted: {}\n  actual: {}", m.predicted, m.actual);
        json["moufang_double"] = serde_json::to_value(&m).expect("serialisable");
    }
    Ok(Report::ok(t, json))
}

fn aut(input: &mut Input, a: AutArgs) -> Result<Report> {
    let (l, inv) = input.load(&a.file)?;
    let flavor = match (&a.fix_epsilon, a.star) {
        (Some(e), _) => Flavor::StarFixing(element(&l, e)?),
        (None, true) => Flavor::Star,
        (None, false) => Flavor::Plain,
    };
    let g = automorphism_group(&l, inv.as_ref(), flavor).map_err(|e| usage(e.into()))?;
    let mut t = format!("order: {}\ngenerators: {}\n", g.order, g.generators.len());
    for (k, p) in g.generators.iter().enumerate() {
        let moved: Vec<String> =
            (0..l.order()).filter(|&x| p[x] != x).map(|x| format!("{}->{}", l.name(x), l.name(p[x]))).collect();
        let _ = writeln!(t, "  g{}: {}", k + 1, moved.join(" "));
    }
    let mut json = json!({ "order": g.order, "flavor": g.flavor, "generators": g.generators });
    if a.linear_action {
        let la = induced_linear_action(&l, &g).map_err(|e| usage(e.into()))?;
        let _ = writeln!(
            t,
            "linear action on L/Z(L): dim {}, image order {}, kernel order {}, faithful {}",
            la.dim,
            la.image_order,
            la.kernel().len(),
            la.faithful
        );
        let mut gens = Vec::new();
        for (k, p) in g.generators.iter().enumerate() {
            let idx = g.index_of(p).expect("generators are elements");
            let cols = &la.matrices[idx];
            let _ = writeln!(t, "  g{}:", k + 1);
            for r in 0..la.dim {
                let row: Vec<&str> = cols.iter().map(|c| if c >> r & 1 == 1 { "1" } else { "0" }).collect();
                let _ = writeln!(t, "    {}", row.join(" "));
            }
            gens.push(cols.clone());
        }
        json["linear_action"] = json!({
            "dim": la.dim,
            "image_order": la.image_order,
            "kernel_order": la.kernel().len(),
            "faithful": la.faithful,
            "generator_matrices": gens,
        });
    }
    Ok(Report::ok(t, json))
}

fn read_ids(path: &Path) -> Result<VarietySpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(usage)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("ids");
    VarietySpec::parse(name, &text).with_context(|| format!("{}", path.display())).map_err(usage)
}

fn variety_check(input: &mut Input, file: &str, ids: &Path) -> Result<Report> {
    let (l, inv) = input.load(file)?;
    let v = read_ids(ids)?;
    let mut t = String::new();
    let mut member = true;
    let mut results = Vec::new();
    for id in &v.identities {
        let c = check_identity(&l, inv.as_ref(), id).map_err(|e| usage(e.into()))?;
        member &= c.holds;
        let w = c.witness.as_ref().map(|w| {
            w.iter().map(|(v, x)| format!("{v} = {}", l.name(*x))).collect::<Vec<_>>().join(", ")
        });
        let _ = writeln!(t, "{id}: {}", w.as_ref().map_or("holds".to_string(), |w| format!("fails at {w}")));
        results.push(json!({ "identity": id.to_string(), "holds": c.holds, "witness": c.witness }));
    }
    let _ = writeln!(t, "member: {member}");
    Ok(Report {
        text: t,
        json: json!({ "variety": v.name, "member": member, "identities": results }),
        code: if member { EXIT_OK } else { EXIT_FAILED },
    })
}

fn variety_derive(ids: &Path) -> Result<Report> {
    let v = read_ids(ids)?;
    let mut t = String::new();
    let mut out = Vec::new();
    for id in &v.identities {
        let _ = writeln!(t, "{id}");
        let mut parts = Vec::new();
        for e in expand_derivative_identities(id) {
            let marked = if e.marked.is_empty() { "-".to_string() } else { e.marked.join(",") };
            let _ = writeln!(t, "  [{marked}] {}", e.component);
            parts.push(json!({ "marked": e.marked, "identity": e.component.to_string() }));
        }
        out.push(json!({ "identity": id.to_string(), "expansion": parts }));
    }
    Ok(Report::ok(t, json!({ "variety": v.name, "identities": out })))
}

fn term_degrees(src: &str, marks: &[String]) -> Result<Report> {
    let t = parse_term(src).map_err(|e| usage(terms::TermError::from(e).into()))?;
    let marks: BTreeSet<String> = marks.iter().filter(|m| !m.is_empty()).cloned().collect();
    let d = degrees(&t, &marks);
    Ok(Report::ok(
        format!("{t}\n(deg_j, deg_gamma, deg_eps) = ({}, {}, {})\n", d.dj, d.dgamma, d.deps),
        json!({ "term": t.to_string(), "degrees": d }),
    ))
}

fn kirsh() -> Report {
    let q4 = doubling::build_qn(4).expect("Q4 builds").pop().expect("four steps");
    let r = kirsh_refutation(&q4);
    let m = q4.table();
    let [a, b, c] = r.triple;
    let mut t = String::new();
    let _ = writeln!(t, "x, y, z = {}, {}, {}; j = {}", m.name(r.x), m.name(r.y), m.name(r.z), m.name(r.j));
    let _ = writeln!(
        t,
        "<x,y,z> octonion: {}, alpha = {}",
        r.base_octonion.is_octonion,
        r.base_octonion.alpha.map_or("none", |x| m.name(x))
    );
    let _ = writeln!(t, "<xj,yj,zj> octonion: {}", r.partner_octonion.is_octonion);
    let _ = writeln!(t, "xz, yz, zj = {}, {}, {} (basis: {})", m.name(a), m.name(b), m.name(c), r.triple_is_basis);
    let _ = writeln!(t, "[xz, yz, zj] = {} (by formula {})", m.name(r.associator), m.name(r.associator_by_formula));
    let _ = writeln!(t, "refuted: {}", r.refuted);
    let code = if r.refuted { EXIT_OK } else { EXIT_FAILED };
    Report { text: t, json: serde_json::to_value(&r).expect("serialisable"), code }
}

fn paper_check(only: Option<&str>, timings: bool) -> Result<Report> {
    let results = paper_check::run(only).ok_or_else(|| {
        let known: Vec<&str> = paper_check::criteria().iter().map(|c| c.name).collect();
        usage(anyhow!("unknown criterion {}; expected one of {}", only.unwrap_or(""), known.join(", ")))
    })?;
    let mut t = String::new();
    for r in &results {
        let _ = writeln!(t, "{}", r.line(timings));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(t, "{passed}/{} passed", results.len());
    if passed != results.len() {
        let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
        let _ = writeln!(t, "failed: {}", failed.join(", "));
    }
    let code = if passed == results.len() { EXIT_OK } else { EXIT_FAILED };
    Ok(Report { text: t, json: json!({ "passed": passed, "total": results.len(), "criteria": results }), code })
}
