//! The `designs` command line.
//!
//! Every subcommand prints a deterministic text report, or a single-line JSON
//! record under `--json`. Exit codes: 0 success, 1 negative verdict, 2 budget
//! or size limit exceeded, 64 usage error, 65 malformed input, 66 unreadable
//! file, 73 unwritable output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::amalgamation::{
    check_class_axioms, free_amalgam, joint_embedding, verify_amalgam, Amalgam, AmalgamProblem,
    Amalgamate, AxiomOutcome,
};
use crate::enumeration::{
    complete_design_growing, count_completions, divisibility_admissible, enumerate_partial_designs,
    Divisibility,
};
use crate::morphisms::{
    canonical_form, closed_subsets, closure_of, diagnose_embedding, enumerate_copies, is_closed,
};
use crate::ramsey::{arrow_check, distinct_orderings, orderings};
use crate::structures::format::{
    parse_design, parse_map, parse_structure, write_design, write_structure,
};
use crate::structures::{
    decode, encode, ClosureStructure, Order, OrderedPartialDesign, OrderedStructure, Params,
};
use crate::{Budget, Error, VertexSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_CANT_CREATE: i32 = 73;

#[derive(Parser, Debug)]
#[command(
    name = "designs",
    version,
    about = "Partial designs as closure structures"
)]
struct Cli {
    /// Print every report as one line of JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a design file against the partial design rules.
    Validate { file: PathBuf },
    /// Convert a design file to a structure file.
    Encode {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a structure file back to a design file.
    Decode {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the closure of a vertex set.
    Closure {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set: Vec<usize>,
    },
    /// Test a vertex set for closedness, or list the closed sets of a size.
    Closed {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0.., conflicts_with = "size")]
        set: Option<Vec<usize>>,
        #[arg(long)]
        size: Option<usize>,
    },
    /// List the copies of A in B.
    Copies {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        unordered: bool,
    },
    /// Check whether a map is an embedding of A into B.
    Embed {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        unordered: bool,
    },
    /// Print the canonical form digest.
    Canon {
        file: PathBuf,
        #[arg(long)]
        unordered: bool,
        /// Also print the canonically labelled design.
        #[arg(long)]
        design: bool,
    },
    /// Build the free amalgam of B1 and B2 over A.
    Amalgam {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B1")]
        b1: PathBuf,
        #[arg(long = "B2")]
        b2: PathBuf,
        #[arg(long)]
        alpha1: PathBuf,
        #[arg(long)]
        alpha2: PathBuf,
        #[arg(long)]
        unordered: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the disjoint union of B1 and B2.
    Joint {
        #[arg(long = "B1")]
        b1: PathBuf,
        #[arg(long = "B2")]
        b2: PathBuf,
        #[arg(long)]
        unordered: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the hereditary, joint embedding and amalgamation properties.
    Axioms {
        #[command(flatten)]
        params: ParamArgs,
        /// Largest structure size considered.
        #[arg(long, default_value_t = 4)]
        bound: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// List the orderings of a design.
    Orderings {
        file: PathBuf,
        /// One ordering per order-isomorphism class.
        #[arg(long)]
        distinct: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Decide C -> (B)^A_r.
    Arrow {
        #[arg(long = "C")]
        c: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(short = 'r')]
        r: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Enumerate partial designs up to isomorphism.
    Enumerate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        complete_only: bool,
        /// Directory for one design file per class.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Complete a partial design.
    Complete {
        file: PathBuf,
        /// Also try adding vertices, up to this many in total.
        #[arg(long)]
        grow_n: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Count the completions of a partial design on its vertex set.
    CountCompletions {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Test the divisibility conditions for a complete design.
    Admissible {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'n')]
        n: usize,
    },
}

#[derive(clap::Args, Debug)]
struct ParamArgs {
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 't')]
    t: usize,
    #[arg(short = 'l', long = "lambda")]
    lambda: usize,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, Failure> {
        Ok(Params::new(self.k, self.t, self.lambda)?)
    }
}

/// A finished report: exit code, text form and JSON form.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: impl Into<String>, json: Value) -> Self {
        Report {
            code,
            text: text.into(),
            json,
        }
    }
}

enum Failure {
    Lib(Error),
    Read(PathBuf, std::io::Error),
    Write(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Lib(Error::BudgetExceeded { .. } | Error::SizeLimit { .. }) => EXIT_BUDGET,
            Failure::Lib(_) => EXIT_DATA,
            Failure::Read(..) => EXIT_NO_INPUT,
            Failure::Write(..) => EXIT_CANT_CREATE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Read(p, e) => format!("cannot read {}: {e}", p.display()),
            Failure::Write(p, e) => format!("cannot write {}: {e}", p.display()),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Parses `args` (including the program name), runs the command and writes
/// its report to `out` and diagnostics to `err`. Returns the exit code.
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
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let json = cli.json;
    match dispatch(cli.command) {
        Ok(report) => {
            let _ = if json {
                writeln!(out, "{}", report.json)
            } else {
                out.write_all(report.text.as_bytes())
            };
            report.code
        }
        Err(failure) => {
            let code = failure.code();
            if json {
                let _ = writeln!(out, "{}", json!({"error": failure.message(), "exit": code}));
            } else {
                let _ = writeln!(err, "error: {}", failure.message());
            }
            code
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Encode { file, out } => {
            let design = load_design(&file)?;
            let s = encode(&design)?;
            emit(
                write_structure(&s),
                out.as_deref(),
                |text| json!({ "structure": text }),
            )
        }
        Command::Decode { file, out } => {
            let s = parse_structure(&read(&file)?)?;
            let design = decode(&s)?;
            emit(
                write_design(&design),
                out.as_deref(),
                |text| json!({ "design": text }),
            )
        }
        Command::Closure { file, set } => {
            let s = load(&file)?;
            let subset = vertex_set(&set, s.structure.n())?;
            let closure = closure_of(&s, subset);
            Ok(Report::new(
                EXIT_OK,
                format!("{closure}\n"),
                json!({ "set": subset.to_vec(), "closure": closure.to_vec() }),
            ))
        }
        Command::Closed { file, set, size } => {
            let s = load(&file)?;
            match (set, size) {
                (Some(set), _) => {
                    let subset = vertex_set(&set, s.structure.n())?;
                    let closed = is_closed(&s, subset);
                    Ok(Report::new(
                        if closed { EXIT_OK } else { EXIT_NEGATIVE },
                        format!("{closed}\n"),
                        json!({ "set": subset.to_vec(), "closed": closed }),
                    ))
                }
                (None, Some(size)) => {
                    let sets: Vec<VertexSet> = closed_subsets(s.structure.design(), size).collect();
                    let text: String = sets.iter().map(|c| format!("{c}\n")).collect();
                    let list: Vec<Vec<usize>> = sets.iter().map(|c| c.to_vec()).collect();
                    Ok(Report::new(
                        EXIT_OK,
                        text,
                        json!({ "size": size, "closed": list }),
                    ))
                }
                (None, None) => Err(Error::InvalidInput("give --set or --size".into()).into()),
            }
        }
        Command::Copies { a, b, unordered } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let copies = if unordered {
                enumerate_copies(&a.structure, &b.structure)
            } else {
                enumerate_copies(&a, &b)
            };
            let mut text = format!("{}\n", copies.len());
            for c in &copies {
                let _ = writeln!(text, "{}", c.vertices);
            }
            let list: Vec<Vec<usize>> = copies.iter().map(|c| c.vertices.to_vec()).collect();
            Ok(Report::new(
                EXIT_OK,
                text,
                json!({ "count": copies.len(), "copies": list }),
            ))
        }
        Command::Embed {
            a,
            b,
            map,
            unordered,
        } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let map = parse_map(&read(&map)?, a.structure.n())?;
            let verdict = if unordered {
                diagnose_embedding(&map, &a.structure, &b.structure)
            } else {
                diagnose_embedding(&map, &a, &b)
            };
            Ok(match verdict {
                Ok(()) => Report::new(EXIT_OK, "embedding\n", json!({ "embedding": true })),
                Err(why) => Report::new(
                    EXIT_NEGATIVE,
                    format!("not an embedding: {why}\n"),
                    json!({ "embedding": false, "reason": why.to_string() }),
                ),
            })
        }
        Command::Canon {
            file,
            unordered,
            design,
        } => {
            let s = load(&file)?;
            let (form, canonical) = if unordered {
                let f = canonical_form(&s.structure)?;
                let d = f.canonical_design(&s.structure);
                (f, d)
            } else {
                let f = canonical_form(&s)?;
                let d = f.canonical_design(&s);
                (f, d)
            };
            let digest = form.digest_hex();
            let mut text = format!("{digest}\n");
            let mut record = json!({ "digest": digest });
            if design {
                let file = write_design(&canonical);
                text.push_str(&file);
                record["design"] = Value::String(file);
            }
            Ok(Report::new(EXIT_OK, text, record))
        }
        Command::Amalgam {
            a,
            b1,
            b2,
            alpha1,
            alpha2,
            unordered,
            out,
        } => {
            let (a, b1, b2) = (load(&a)?, load(&b1)?, load(&b2)?);
            let alpha1 = parse_map(&read(&alpha1)?, a.structure.n())?;
            let alpha2 = parse_map(&read(&alpha2)?, a.structure.n())?;
            if unordered {
                let p = AmalgamProblem {
                    a: a.structure,
                    b1: b1.structure,
                    b2: b2.structure,
                    alpha1,
                    alpha2,
                };
                amalgam_report(&p, free_amalgam(&p)?, out.as_deref())
            } else {
                let p = AmalgamProblem {
                    a,
                    b1,
                    b2,
                    alpha1,
                    alpha2,
                };
                amalgam_report(&p, free_amalgam(&p)?, out.as_deref())
            }
        }
        Command::Joint {
            b1,
            b2,
            unordered,
            out,
        } => {
            let (b1, b2) = (load(&b1)?, load(&b2)?);
            if unordered {
                let m = joint_embedding(&b1.structure, &b2.structure)?;
                let p = AmalgamProblem {
                    a: ClosureStructure::empty(b1.structure.params())?,
                    b1: b1.structure,
                    b2: b2.structure,
                    alpha1: vec![],
                    alpha2: vec![],
                };
                amalgam_report(&p, m, out.as_deref())
            } else {
                let m = joint_embedding(&b1, &b2)?;
                let p = AmalgamProblem {
                    a: OrderedStructure::empty(b1.structure.params())?,
                    b1,
                    b2,
                    alpha1: vec![],
                    alpha2: vec![],
                };
                amalgam_report(&p, m, out.as_deref())
            }
        }
        Command::Axioms {
            params,
            bound,
            budget,
        } => {
            let report = check_class_axioms(params.params()?, bound, budget_of(budget))?;
            let mut text = format!("classes {}\n", report.classes);
            let mut record =
                json!({ "classes": report.classes, "bound": bound, "holds": report.holds() });
            for (name, outcome) in [
                ("hereditary", &report.hereditary),
                ("joint-embedding", &report.joint_embedding),
                ("amalgamation", &report.amalgamation),
            ] {
                let _ = writeln!(
                    text,
                    "{name} {} checked {}",
                    if outcome.holds() { "holds" } else { "fails" },
                    outcome.checked
                );
                for c in &outcome.counterexamples {
                    let _ = writeln!(text, "  {c}");
                }
                record[name] = axiom_json(outcome);
            }
            let code = if report.holds() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            Ok(Report::new(code, text, record))
        }
        Command::Orderings {
            file,
            distinct,
            out,
            budget,
        } => {
            let s = load(&file)?.structure;
            let list = if distinct {
                distinct_orderings(&s, budget_of(budget))?
            } else {
                orderings(&s, budget_of(budget))?
            };
            let files: Vec<String> = list
                .iter()
                .map(|o| write_design(&ordered_design(o)))
                .collect();
            if let Some(dir) = &out {
                write_dir(dir, "ordering", &files)?;
            }
            let mut text = format!("{}\n", list.len());
            if out.is_none() {
                for o in &list {
                    let seq: Vec<String> =
                        o.order.sequence().iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(text, "{}", seq.join(" "));
                }
            }
            let seqs: Vec<&[usize]> = list.iter().map(|o| o.order.sequence()).collect();
            Ok(Report::new(
                EXIT_OK,
                text,
                json!({ "count": list.len(), "orderings": seqs }),
            ))
        }
        Command::Arrow { c, b, a, r, budget } => {
            let (c, b, a) = (load(&c)?, load(&b)?, load(&a)?);
            let verdict = arrow_check(&c, &b, &a, r, budget_of(budget))?;
            let mut text = format!("{}\n", if verdict.holds { "holds" } else { "refuted" });
            if let Some(w) = &verdict.witness {
                for (i, color) in w.iter().enumerate() {
                    let _ = writeln!(text, "{i}:{color}");
                }
            }
            let code = if verdict.holds {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            Ok(Report::new(
                code,
                text,
                json!({ "holds": verdict.holds, "witness": verdict.witness, "nodes": verdict.nodes }),
            ))
        }
        Command::Enumerate {
            params,
            n,
            complete_only,
            out,
            budget,
        } => {
            let mut census = enumerate_partial_designs(params.params()?, n, budget_of(budget))?;
            if complete_only {
                census = census.complete_only();
            }
            if let Some(dir) = &out {
                let files: Vec<String> = census
                    .structures
                    .iter()
                    .map(|d| write_design(&OrderedPartialDesign::natural(d.clone())))
                    .collect();
                write_dir(dir, &format!("n{n}"), &files)?;
            }
            let labeled = census.labeled();
            Ok(Report::new(
                EXIT_OK,
                format!("{n} {} {labeled}\n", census.classes()),
                json!({ "n": n, "classes": census.classes(), "labeled": labeled.to_string() }),
            ))
        }
        Command::Complete {
            file,
            grow_n,
            budget,
        } => {
            let start = load_design(&file)?;
            start.design.ensure_valid()?;
            let max_n = grow_n.unwrap_or(start.design.n()).max(start.design.n());
            let done =
                complete_design_growing(&start.design, max_n, &Divisibility, budget_of(budget))?;
            Ok(match done {
                Some(d) => {
                    let mut sequence = start.order.sequence().to_vec();
                    sequence.extend(start.design.n()..d.n());
                    let file = write_design(&OrderedPartialDesign::new(
                        d,
                        Order::from_sequence(sequence)?,
                    )?);
                    Report::new(
                        EXIT_OK,
                        file.clone(),
                        json!({ "complete": true, "design": file }),
                    )
                }
                None => Report::new(EXIT_NEGATIVE, "none\n", json!({ "complete": false })),
            })
        }
        Command::CountCompletions { file, budget } => {
            let d = load_design(&file)?;
            let count = count_completions(&d.design, budget_of(budget))?;
            Ok(Report::new(
                EXIT_OK,
                format!("{count}\n"),
                json!({ "completions": count }),
            ))
        }
        Command::Admissible { params, n } => {
            let ok = divisibility_admissible(params.params()?, n);
            Ok(Report::new(
                EXIT_OK,
                format!("{ok}\n"),
                json!({ "admissible": ok }),
            ))
        }
    }
}

fn validate(file: &Path) -> Outcome {
    let design = load_design(file)?;
    let report = design.design.validate();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({ "rule": v.rule.as_str(), "subset": v.subset.to_vec() }))
        .collect();
    let record = json!({ "valid": report.ok(), "violations": violations });
    Ok(if report.ok() {
        Report::new(EXIT_OK, "ok\n", record)
    } else {
        Report::new(EXIT_NEGATIVE, format!("{report}\n"), record)
    })
}

fn amalgam_report<S: Amalgamate + AsDesignFile>(
    p: &AmalgamProblem<S>,
    m: Amalgam<S>,
    out: Option<&Path>,
) -> Outcome {
    let cert = verify_amalgam(p, &m);
    let design = write_design(&m.c.design_file());
    let mut text = String::new();
    if let Some(path) = out {
        std::fs::write(path, &design).map_err(|e| Failure::Write(path.to_path_buf(), e))?;
    } else {
        text.push_str(&design);
    }
    let _ = writeln!(text, "# beta1 {}", join(&m.beta1));
    let _ = writeln!(text, "# beta2 {}", join(&m.beta2));
    let mut certificate = serde_json::Map::new();
    for (name, ok) in cert.entries() {
        let _ = writeln!(text, "# {name} {ok}");
        certificate.insert(name.to_string(), Value::Bool(ok));
    }
    let code = if cert.holds() { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Report::new(
        code,
        text,
        json!({ "design": design, "beta1": m.beta1, "beta2": m.beta2, "certificate": certificate }),
    ))
}

fn axiom_json(o: &AxiomOutcome) -> Value {
    json!({ "holds": o.holds(), "checked": o.checked, "counterexamples": o.counterexamples })
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn budget_of(budget: Option<u64>) -> Budget {
    budget.map_or_else(Budget::default, Budget)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Read(path.to_path_buf(), e))
}

fn write_dir(dir: &Path, stem: &str, files: &[String]) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Write(dir.to_path_buf(), e))?;
    let width = files.len().saturating_sub(1).to_string().len().max(4);
    for (i, file) in files.iter().enumerate() {
        let path = dir.join(format!("{stem}_{i:0width$}.design"));
        std::fs::write(&path, file).map_err(|e| Failure::Write(path.clone(), e))?;
    }
    Ok(())
}

fn emit(text: String, out: Option<&Path>, to_json: impl FnOnce(&str) -> Value) -> Outcome {
    let record = to_json(&text);
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Write(path.to_path_buf(), e))?;
            Ok(Report::new(EXIT_OK, "", record))
        }
        None => Ok(Report::new(EXIT_OK, text, record)),
    }
}

/// Reads a design file without validating it.
fn load_design(path: &Path) -> Result<OrderedPartialDesign, Failure> {
    Ok(parse_design(&read(path)?)?)
}

/// Reads a design or structure file as a validated ordered structure.
fn load(path: &Path) -> Result<OrderedStructure, Failure> {
    let text = read(path)?;
    let is_structure = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("structure"));
    if is_structure {
        let s = parse_structure(&text)?;
        s.structure.design().ensure_valid()?;
        s.structure.check_consistency()?;
        Ok(s)
    } else {
        Ok(encode(&parse_design(&text)?)?)
    }
}

fn vertex_set(ids: &[usize], n: usize) -> Result<VertexSet, Failure> {
    if let Some(&v) = ids.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { vertex: v, n }.into());
    }
    Ok(ids.iter().copied().collect())
}

fn ordered_design(o: &OrderedStructure) -> OrderedPartialDesign {
    OrderedPartialDesign {
        design: o.structure.design().clone(),
        order: o.order.clone(),
    }
}

trait AsDesignFile {
    fn design_file(&self) -> OrderedPartialDesign;
}

impl AsDesignFile for ClosureStructure {
    fn design_file(&self) -> OrderedPartialDesign {
        OrderedPartialDesign::natural(self.design().clone())
    }
}

impl AsDesignFile for OrderedStructure {
    fn design_file(&self) -> OrderedPartialDesign {
        ordered_design(self)
    }
}
