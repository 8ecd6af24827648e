//! The `gmk` command line. Each subcommand calls one library operation and
//! serializes its result; JSON field order follows the struct definitions.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::abelian::{abelianization_matrix, unipotent_jordan_profile, IntMatrix};
use crate::bieri::{combing_length_audit, lower_bound_quantity, CombingReport, DoubledGroup};
use crate::complexes::{
    cover_from_action, delete_generator, presentation_complex, torus_embedding, verify_covering, CellMap,
    CoveringReport, SquareComplex, TorusReport,
};
use crate::family::{make_phi, presentation};
use crate::growth::{estimate_degree, gr_samples, growth_table};
use crate::permrep::{build_action, verify_action, ActionReport};
use crate::reproduce;
use crate::walls::specialness_report;
use crate::words::Alphabet;
use crate::{GmkError, Result};

/// Exit status for a failed check.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for a usage error.
pub const EXIT_USAGE: i32 = 2;

const MAX_M: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "gmk", version, about = "Free-by-cyclic groups G_{m,k}: growth, covers, walls and the Bieri double")]
pub struct Cli {
    /// Write the artifact to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Family {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=MAX_M as i64))]
    pub m: u8,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=MAX_M as i64))]
    pub k: u8,
}

impl Family {
    fn get(&self) -> Result<(usize, usize)> {
        let (m, k) = (self.m as usize, self.k as usize);
        if k > m {
            return Err(GmkError::InvalidParameters(format!("--k {k} must not exceed --m {m}")));
        }
        Ok((m, k))
    }
}

#[derive(Debug, Args)]
pub struct Square {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=MAX_M as i64))]
    pub m: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PhiFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum JsonFormat {
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Images of the generators under the monodromy or its inverse.
    Phi {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        inverse: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: PhiFormat,
    },
    /// Word lengths of iterated images and the growth function.
    Growth {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u16).range(0..=40))]
        n_max: u16,
        #[arg(long)]
        inverse: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: TableFormat,
    },
    /// Abelianized monodromy: matrix, power, ranks, Jordan profile, norms.
    Abelian {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u16).range(0..=100))]
        n: u16,
        #[arg(long, value_enum, default_value = "json")]
        format: JsonFormat,
    },
    /// The coordinate action of G_{m,m} on bit strings of length 2m+1.
    Permrep {
        #[command(flatten)]
        square: Square,
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: JsonFormat,
    },
    /// The finite cover built from the coordinate action.
    Cover {
        #[command(flatten)]
        square: Square,
        /// Delete the last generator and keep the component of the zero vertex.
        #[arg(long)]
        delete_last: bool,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Hyperplane pathologies, VH structure and the specialness verdict.
    Special {
        #[command(flatten)]
        square: Square,
        #[arg(long, group = "complex")]
        base: bool,
        #[arg(long, group = "complex")]
        cover: bool,
        #[arg(long, group = "complex")]
        delete_last: bool,
        /// Exit with status 1 if the complex is not VH.
        #[arg(long)]
        assert_vh: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: JsonFormat,
    },
    /// Certificate word and lower-bound quantities in the Bieri double.
    Dehn {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u16).range(0..=40))]
        n: u16,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..=8))]
        ell: u16,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..=8))]
        p: u16,
    },
    /// Exhaustive check of normal-form lengths on a ball of the Bieri double.
    CombAudit {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        radius: u16,
    },
    /// Run the acceptance matrix and print one line per criterion.
    Reproduce {
        /// Run only one group of criteria.
        #[arg(long, value_parser = reproduce::GROUPS)]
        only: Option<String>,
    },
}

/// An emitted artifact and the exit status it implies.
#[derive(Debug, PartialEq, Eq)]
pub struct Artifact {
    pub text: String,
    pub status: i32,
}

impl Artifact {
    fn ok(text: String) -> Self {
        Artifact { text, status: 0 }
    }

    fn checked(text: String, passed: bool) -> Self {
        Artifact {
            text,
            status: if passed { 0 } else { EXIT_CHECK_FAILED },
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn raw_number(text: String) -> Box<RawValue> {
    RawValue::from_string(text).expect("decimal literals are valid JSON")
}

fn big_rows(m: &IntMatrix) -> Vec<Vec<Box<RawValue>>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| raw_number(x.to_string())).collect())
        .collect()
}

fn big(x: &BigInt) -> Box<RawValue> {
    raw_number(x.to_string())
}

#[derive(Serialize)]
struct PhiImage {
    generator: String,
    image: String,
}

#[derive(Serialize)]
struct PhiOutput {
    m: usize,
    k: usize,
    inverse: bool,
    images: Vec<PhiImage>,
}

#[derive(Serialize)]
struct GrowthOutput {
    m: usize,
    k: usize,
    inverse: bool,
    n_max: usize,
    lengths: serde_json::Map<String, serde_json::Value>,
    gr: Vec<u64>,
    degree_estimate: Option<Box<RawValue>>,
}

#[derive(Serialize)]
struct Norms {
    sup: Box<RawValue>,
    linf_op: Box<RawValue>,
}

#[derive(Serialize)]
struct AbelianOutput {
    m: usize,
    k: usize,
    n: usize,
    matrix: Vec<Vec<Box<RawValue>>>,
    power: Vec<Vec<Box<RawValue>>>,
    rank_minus_identity: usize,
    rank_minus_identity_squared: usize,
    jordan_blocks: Vec<usize>,
    norms: Norms,
    column_l1: Vec<Box<RawValue>>,
}

#[derive(Serialize)]
struct GeneratorCycles {
    name: String,
    cycles: String,
}

#[derive(Serialize)]
struct PermrepOutput {
    m: usize,
    points: usize,
    generators: Vec<GeneratorCycles>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<ActionReport>,
}

#[derive(Serialize)]
struct EdgeOut {
    src: String,
    dst: String,
    label: String,
}

#[derive(Serialize)]
struct CoverOutput {
    m: usize,
    delete_last: bool,
    counts: [usize; 3],
    covering: CoveringReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    torus: Option<TorusReport>,
    vertices: Vec<String>,
    edges: Vec<EdgeOut>,
    squares: Vec<String>,
}

#[derive(Serialize)]
struct DehnOutput {
    m: usize,
    k: usize,
    n: usize,
    ell: usize,
    p: usize,
    trivial: bool,
    word_length: usize,
    reduced_length: usize,
    lower_bound_exact: Box<RawValue>,
    lower_bound_abelian: Box<RawValue>,
    filling_exponent: usize,
    word: String,
}

#[derive(Serialize)]
struct AuditOutput {
    #[serde(flatten)]
    report: CombingReport,
    ok: bool,
}

/// The cover of `K_{m,m}`, or the deleted subcomplex over `K_{m,m-1}`, with
/// its covering map and base.
fn build_cover(m: usize, delete_last: bool) -> Result<(SquareComplex, SquareComplex, CellMap)> {
    let pres = presentation(m, m)?;
    let (cover, map) = cover_from_action(&pres, &build_action(m)?)?;
    if delete_last {
        let d = delete_generator(&cover, 2 * m)?;
        let base = presentation_complex(&presentation(m, m - 1)?)?;
        let map = CellMap::by_labels(&d, &base)?;
        Ok((d, base, map))
    } else {
        Ok((cover, presentation_complex(&pres)?, map))
    }
}

const PALETTE: [&str; 13] = [
    "red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan", "olive", "navy", "teal", "maroon",
    "gold",
];

fn cover_dot(x: &SquareComplex) -> String {
    let mut order: Vec<usize> = (0..x.vertex_count()).collect();
    order.sort_by(|&a, &b| x.vertex_name(a).cmp(x.vertex_name(b)));
    let mut edges: Vec<(&str, &str, usize)> = x
        .edges()
        .iter()
        .map(|e| (x.vertex_name(e.src), x.vertex_name(e.dst), e.label))
        .collect();
    edges.sort_by(|a, b| (a.0, a.2, a.1).cmp(&(b.0, b.2, b.1)));
    let mut out = String::from("digraph cover {\n");
    for v in order {
        writeln!(out, "  \"{0}\" [label=\"{0}\"];", x.vertex_name(v)).expect("writing to a String");
    }
    for (s, t, l) in edges {
        writeln!(
            out,
            "  \"{s}\" -> \"{t}\" [label=\"{}\", color=\"{}\"];",
            x.label_name(l),
            PALETTE[l % PALETTE.len()]
        )
        .expect("writing to a String");
    }
    out.push_str("}\n");
    out
}

fn square_text(x: &SquareComplex, q: usize) -> String {
    let sq = &x.squares()[q];
    let start = x.vertex_name(x.step_source(sq[0]));
    let word: Vec<String> = sq
        .iter()
        .map(|s| {
            let l = x.label_name(x.edges()[s.edge].label);
            if s.forward {
                l.to_string()
            } else {
                format!("{l}^-1")
            }
        })
        .collect();
    format!("{start}: {}", word.join(" "))
}

pub fn execute(command: &Command) -> Result<Artifact> {
    match command {
        Command::Phi { family, inverse, format } => {
            let (m, k) = family.get()?;
            let phi = make_phi(m, k)?;
            let e = if *inverse { phi.inverse().expect("monodromy has an inverse") } else { phi };
            let ab = Alphabet::free_basis(m, k);
            let images: Vec<PhiImage> = e
                .images()
                .iter()
                .enumerate()
                .map(|(i, w)| PhiImage { generator: ab.name(i).to_string(), image: ab.format(w) })
                .collect();
            Ok(Artifact::ok(match format {
                PhiFormat::Json => to_json(&PhiOutput { m, k, inverse: *inverse, images }),
                PhiFormat::Text => images.iter().map(|p| format!("{} -> {}\n", p.generator, p.image)).collect(),
            }))
        }
        Command::Growth { family, n_max, inverse, format } => {
            let (m, k) = family.get()?;
            let n_max = *n_max as usize;
            let phi = make_phi(m, k)?;
            let e = if *inverse { phi.inverse().expect("monodromy has an inverse") } else { phi };
            let table = growth_table(&e, n_max);
            let ab = Alphabet::free_basis(m, k);
            match format {
                TableFormat::Json => {
                    let mut lengths = serde_json::Map::new();
                    for (i, row) in table.lengths.iter().enumerate() {
                        lengths.insert(ab.name(i).to_string(), serde_json::json!(row));
                    }
                    let degree_estimate = estimate_degree(&gr_samples(&table)).ok().map(|d| raw_number(d.to_string()));
                    Ok(Artifact::ok(to_json(&GrowthOutput {
                        m,
                        k,
                        inverse: *inverse,
                        n_max,
                        lengths,
                        gr: table.gr.clone(),
                        degree_estimate,
                    })))
                }
                TableFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let mut header = vec!["n".to_string()];
                    header.extend(ab.names().iter().cloned());
                    header.push("gr".into());
                    w.write_record(&header).map_err(|e| GmkError::Parse(e.to_string()))?;
                    for n in 0..=n_max {
                        let mut row = vec![n.to_string()];
                        row.extend(table.lengths.iter().map(|r| r[n].to_string()));
                        row.push(table.gr[n].to_string());
                        w.write_record(&row).map_err(|e| GmkError::Parse(e.to_string()))?;
                    }
                    let bytes = w.into_inner().map_err(|e| GmkError::Parse(e.to_string()))?;
                    Ok(Artifact::ok(String::from_utf8(bytes).expect("csv of ASCII is UTF-8")))
                }
            }
        }
        Command::Abelian { family, n, .. } => {
            let (m, k) = family.get()?;
            let mat = abelianization_matrix(&make_phi(m, k)?);
            let power = mat.power(*n as u32)?;
            let nil = mat.minus_identity()?;
            let (sup, op) = power.norms();
            let column_l1 = (0..m + k).map(|j| power.column_l1(j).map(|c| big(&c))).collect::<Result<Vec<_>>>()?;
            Ok(Artifact::ok(to_json(&AbelianOutput {
                m,
                k,
                n: *n as usize,
                matrix: big_rows(&mat),
                power: big_rows(&power),
                rank_minus_identity: nil.rank(),
                rank_minus_identity_squared: nil.mul(&nil)?.rank(),
                jordan_blocks: unipotent_jordan_profile(&mat)?.blocks,
                norms: Norms { sup: big(&sup), linf_op: big(&op) },
                column_l1,
            })))
        }
        Command::Permrep { square, verify, .. } => {
            let m = square.m as usize;
            let action = build_action(m)?;
            let names = Alphabet::indexed("a", 2 * m + 1);
            let generators = (0..action.generator_count())
                .map(|g| GeneratorCycles { name: names.name(g).to_string(), cycles: action.cycle_notation(g) })
                .collect();
            let verification = if *verify { Some(verify_action(&action, &presentation(m, m)?)?) } else { None };
            let passed = verification.as_ref().is_none_or(ActionReport::all_ok);
            Ok(Artifact::checked(
                to_json(&PermrepOutput { m, points: action.point_count(), generators, verification }),
                passed,
            ))
        }
        Command::Cover { square, delete_last, emit } => {
            let m = square.m as usize;
            let (x, base, map) = build_cover(m, *delete_last)?;
            let covering = verify_covering(&x, &base, &map);
            let torus = if *delete_last { None } else { Some(torus_embedding(&x, m)?) };
            let passed = covering.ok() && torus.as_ref().is_none_or(TorusReport::ok);
            let text = match emit {
                Emit::Dot => cover_dot(&x),
                Emit::Json => {
                    let mut vertices: Vec<String> = (0..x.vertex_count()).map(|v| x.vertex_name(v).to_string()).collect();
                    vertices.sort();
                    let mut edges: Vec<EdgeOut> = x
                        .edges()
                        .iter()
                        .map(|e| EdgeOut {
                            src: x.vertex_name(e.src).to_string(),
                            dst: x.vertex_name(e.dst).to_string(),
                            label: x.label_name(e.label).to_string(),
                        })
                        .collect();
                    edges.sort_by(|a, b| (&a.src, &a.label).cmp(&(&b.src, &b.label)));
                    let mut squares: Vec<String> = (0..x.squares().len()).map(|q| square_text(&x, q)).collect();
                    squares.sort();
                    to_json(&CoverOutput {
                        m,
                        delete_last: *delete_last,
                        counts: x.counts(),
                        covering,
                        torus,
                        vertices,
                        edges,
                        squares,
                    })
                }
            };
            Ok(Artifact::checked(text, passed))
        }
        Command::Special { square, base, delete_last, assert_vh, .. } => {
            let m = square.m as usize;
            let x = if *base {
                presentation_complex(&presentation(m, m)?)?
            } else {
                build_cover(m, *delete_last)?.0
            };
            let report = specialness_report(&x);
            let passed = !*assert_vh || report.vh.ok;
            Ok(Artifact::checked(to_json(&report), passed))
        }
        Command::Dehn { family, n, ell, p } => {
            let (m, k) = family.get()?;
            let (n, ell, p) = (*n as usize, *ell as usize, *p as usize);
            let group = DoubledGroup::new(m, k)?;
            let lb = lower_bound_quantity(m, k, n, ell, p)?;
            let (trivial, word_length, reduced_length, word) = if n == 0 {
                (true, 0, 0, "1".to_string())
            } else {
                let c = group.certificate_word(n, ell, p)?;
                (c.trivial, c.length, c.reduced_length, c.text)
            };
            Ok(Artifact::checked(
                to_json(&DehnOutput {
                    m,
                    k,
                    n,
                    ell,
                    p,
                    trivial,
                    word_length,
                    reduced_length,
                    lower_bound_exact: raw_number(lb.exact.to_string()),
                    lower_bound_abelian: raw_number(lb.abelian.to_string()),
                    filling_exponent: k + 2,
                    word,
                }),
                trivial,
            ))
        }
        Command::CombAudit { family, radius } => {
            let (m, k) = family.get()?;
            let report = combing_length_audit(&DoubledGroup::new(m, k)?, *radius as usize)?;
            let ok = report.ok();
            Ok(Artifact::checked(to_json(&AuditOutput { report, ok }), ok))
        }
        Command::Reproduce { only } => {
            let outcomes = reproduce::run(only.as_deref())?;
            let passed = outcomes.iter().all(|o| o.passed);
            for o in &outcomes {
                eprintln!("criterion {:>2}: {:.2} s", o.id, o.elapsed.as_secs_f64());
            }
            Ok(Artifact::checked(reproduce::report(&outcomes), passed))
        }
    }
}

fn configure_threads() {
    let threads = std::env::var("GMK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    if threads > 0 {
        // Ignored if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

/// Parse arguments, run, write the artifact, and return the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let artifact = match execute(&cli.command) {
        Ok(a) => a,
        Err(e @ (GmkError::InvalidParameters(_) | GmkError::GuardExceeded(_))) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CHECK_FAILED;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &artifact.text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(artifact.text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_CHECK_FAILED;
    }
    artifact.status
}
