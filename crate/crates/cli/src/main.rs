/// `print!`/`println!` that end the process quietly when stdout is closed.
macro_rules! out {
    ($($t:tt)*) => { $crate::emit(format_args!($($t)*)) };
}
macro_rules! outln {
    ($($t:tt)*) => { $crate::emit(format_args!("{}\n", format_args!($($t)*))) };
}

mod io;

use std::collections::HashSet;
use std::fmt::Display;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lpp_forge::enumerate::{
    census_with_limit, write_lpps_ndjson, CensusReport, DEFAULT_ENUMERATION_LIMIT,
};
use lpp_forge::gf::Field;
use lpp_forge::klenian::{
    eklenian_group, eklenian_poly, tuple_klenian_witness, EKlenianGroup, GroupJson,
};
use lpp_forge::lpp::{is_lpp, is_permutation_poly, lpp_to_latin, lpp_to_tuple};
use lpp_forge::ortho::{
    enumerate_lpp_companions, is_complete, is_mols, is_orthogonal_system, klenian_companion,
    linear_companion, mols_from_pair, mols_separated, superimpose, MolsReport, MolsSet,
};
use lpp_forge::{Error, Indexing, MPoly, Permutation};
use serde::Serialize;

use io::{grid_csv, label_grid, load_poly, load_square, print_json, FieldOut, PolyOut};

pub const EXIT_FALSE: u8 = 1;
pub const EXIT_INVALID_FIELD: u8 = 2;
pub const EXIT_INVALID_GENERATORS: u8 = 3;
pub const EXIT_EVEN_Q: u8 = 4;
pub const EXIT_NO_COMPANION: u8 = 5;
pub const EXIT_BAD_MOLS_INPUT: u8 = 6;
pub const EXIT_CENSUS_LIMIT: u8 = 7;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(EXIT_USAGE, e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_USAGE, e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(EXIT_USAGE, e)
    }
}

type Outcome = Result<u8, Failure>;

pub fn emit(args: std::fmt::Arguments) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().lock().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

#[derive(Parser)]
#[command(
    name = "lpp-forge",
    version,
    about = "Local permutation polynomials, e-Klenian groups and MOLS over small finite fields",
    after_help = "Exit codes: 0 ok, 1 verification failed, 2 invalid field, 3 invalid generators, \
                  4 even q, 5 no LPP companion, 6 bad MOLS input, 7 census limit, 64 other input errors."
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Grid, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Levels {
    Zero,
    One,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Lpp,
    Pp,
    Orthogonal,
    Mols,
    Latin,
}

#[derive(Subcommand)]
enum Command {
    /// Print the JSON descriptor of GF(p^r).
    Field {
        p: u32,
        #[arg(default_value_t = 1)]
        r: u32,
        /// Monic modulus coefficients, constant term first (e.g. 2,2,1 for u^2+2u+2).
        #[arg(long)]
        modulus: Option<String>,
        /// Element listing c_0..c_{q-1} as labels (e.g. "0,u,u+1,1").
        #[arg(long)]
        order: Option<String>,
    },
    /// Build an e-Klenian polynomial and its Latin square.
    Klenian {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Find an LPP companion of an e-Klenian or given polynomial.
    Companion {
        #[command(flatten)]
        field: FieldArgs,
        /// Polynomial: JSON file, CSV grid or inline expression.
        #[arg(long, conflicts_with = "klenian")]
        input: Option<String>,
        /// Use the e-Klenian polynomial described by the group options.
        #[arg(long, required_unless_present = "input")]
        klenian: bool,
        #[command(flatten)]
        group: GroupArgs,
        /// Exhaustive backtracking search over all Latin companions.
        #[arg(long)]
        search: bool,
    },
    /// Build a complete set of MOLS.
    Mols {
        #[command(flatten)]
        field: FieldArgs,
        /// Orthogonal bivariate pair (f, g); squares are f + a·g.
        #[arg(long, num_args = 2, value_names = ["F", "G"], required_unless_present = "separated")]
        pair: Option<Vec<String>>,
        /// Univariate permutation polynomials (f, h); squares are f(x) + a·h(y).
        #[arg(long, num_args = 2, value_names = ["F", "H"], conflicts_with = "pair")]
        separated: Option<Vec<String>>,
        /// Directory receiving square_NN.csv files and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a property; exits 1 when it fails.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        what: What,
        /// Number of variables for inline expressions.
        #[arg(long, default_value_t = 2)]
        nvars: usize,
        /// JSON files, CSV grids, directories of CSV grids, or inline expressions.
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Exhaustive census of bivariate LPPs (q <= 5 unless LPP_FORGE_LIMIT is set).
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        workers: Option<u32>,
        /// Also write every LPP as one JSON tuple per line.
        #[arg(long)]
        ndjson: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field descriptor JSON as printed by `field`.
    #[arg(long = "field", conflicts_with_all = ["p", "modulus", "order"])]
    descriptor: Option<PathBuf>,
    #[arg(short, long)]
    p: Option<u32>,
    #[arg(short, long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long)]
    order: Option<String>,
}

impl FieldArgs {
    fn load(&self) -> Result<Field, Failure> {
        if let Some(path) = &self.descriptor {
            return io::read_field(path);
        }
        let p = self
            .p
            .ok_or_else(|| Failure::new(EXIT_INVALID_FIELD, "give --field or -p"))?;
        io::build_field(p, self.r, self.modulus.as_deref(), self.order.as_deref())
    }
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long, default_value_t = 0)]
    e: u32,
    /// Full cycle β listing all field elements (0-Klenian), e.g. "2,0,1,3,5,6,4".
    #[arg(long, conflicts_with = "generators")]
    base_cycle: Option<String>,
    /// Generators α, β in cycle notation, e.g. "(0,u)(1,u+1)" "(0,1)(u,u+1)".
    #[arg(long, num_args = 2, value_names = ["ALPHA", "BETA"])]
    generators: Option<Vec<String>>,
    /// Level c_v carries group element v (zero) or v+1 (one).
    #[arg(long, value_enum, default_value_t = Levels::One)]
    indexing: Levels,
}

impl GroupArgs {
    fn indexing(&self) -> Indexing {
        match self.indexing {
            Levels::Zero => Indexing::ZeroBased,
            Levels::One => Indexing::OneBased,
        }
    }

    fn group(&self, field: &Field) -> Result<EKlenianGroup, Failure> {
        let bad = |e: Error| Failure::new(EXIT_INVALID_GENERATORS, e);
        if let Some(c) = &self.base_cycle {
            if self.e != 0 {
                return Err(Failure::new(
                    EXIT_INVALID_GENERATORS,
                    "--base-cycle gives a 0-Klenian group",
                ));
            }
            let cycle = field
                .parse_element_list(c.trim().trim_start_matches('(').trim_end_matches(')'))
                .map_err(bad)?;
            return EKlenianGroup::from_cycle(field, &cycle).map_err(bad);
        }
        if let Some(g) = &self.generators {
            let alpha = Permutation::parse_cycles(field, &g[0]).map_err(bad)?;
            let beta = Permutation::parse_cycles(field, &g[1]).map_err(bad)?;
            return EKlenianGroup::from_generators(field, &alpha, &beta).map_err(bad);
        }
        eklenian_group(field, self.e).map_err(bad)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let fmt = cli.format;
    match cli.command {
        Command::Field {
            p,
            r,
            modulus,
            order,
        } => {
            let field = io::build_field(p, r, modulus.as_deref(), order.as_deref())?;
            print_json(&FieldOut::new(&field))?;
            Ok(0)
        }
        Command::Klenian { field, group } => cmd_klenian(fmt, &field.load()?, &group),
        Command::Companion {
            field,
            input,
            group,
            search,
            ..
        } => cmd_companion(fmt, &field.load()?, input.as_deref(), &group, search),
        Command::Mols {
            field,
            pair,
            separated,
            out,
        } => cmd_mols(fmt, &field.load()?, pair, separated, out),
        Command::Verify {
            field,
            what,
            nvars,
            inputs,
        } => cmd_verify(fmt, &field.load()?, what, nvars, &inputs),
        Command::Census {
            field,
            workers,
            ndjson,
        } => cmd_census(fmt, &field.load()?, workers, ndjson),
    }
}

#[derive(Serialize)]
struct KlenianOut {
    group: GroupJson,
    #[serde(flatten)]
    poly: PolyOut,
}

fn describe(name: &str, f: &MPoly) -> String {
    let degree = f
        .total_degree()
        .finite()
        .map_or("-".into(), |d| d.to_string());
    format!(
        "{name} = {f}\nmonomials: {}, degree: {degree}\n",
        f.monomial_count()
    )
}

fn cmd_klenian(fmt: Format, field: &Field, args: &GroupArgs) -> Outcome {
    let group = args.group(field)?;
    let f = eklenian_poly(&group, None, args.indexing())?;
    let sq = lpp_to_latin(&f)?;
    match fmt {
        Format::Json => print_json(&KlenianOut {
            group: group.to_json(),
            poly: PolyOut::new(&f),
        })?,
        Format::Csv => out!("{}", grid_csv(field, &sq)),
        Format::Grid => {
            let g = group.to_json();
            outln!("group: e = {}, alpha = {}, beta = {}", g.e, g.alpha, g.beta);
            out!("{}", describe("f", &f));
            out!("{}", sq.render(field));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct Certificate {
    cells: usize,
    distinct_pairs: usize,
    pairs: Vec<Vec<[String; 2]>>,
}

#[derive(Serialize)]
struct CompanionOut {
    f: PolyOut,
    #[serde(flatten)]
    g: PolyOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    companions_found: Option<usize>,
    certificate: Certificate,
}

fn even_q(e: Error) -> Failure {
    match e {
        Error::EvenCharacteristic => Failure::new(
            EXIT_EVEN_Q,
            "the e-Klenian companion needs odd q; try --search",
        ),
        e => e.into(),
    }
}

/// Companion without search: linear formula, or the Klenian construction for any equivalent input.
fn direct_companion(f: &MPoly) -> Result<MPoly, Failure> {
    if f.is_linear() {
        return Ok(linear_companion(f)?);
    }
    let field = f.field();
    let tuple = lpp_to_tuple(f)?;
    for e in 0..=field.r() {
        if let Some(w) = tuple_klenian_witness(field, &tuple, e)? {
            return klenian_companion(&w.group, Some(&w.base), Indexing::ZeroBased).map_err(even_q);
        }
    }
    Err(Failure::new(
        EXIT_USAGE,
        "input is neither linear nor equivalent to an e-Klenian polynomial; use --search",
    ))
}

fn cmd_companion(
    fmt: Format,
    field: &Field,
    input: Option<&str>,
    args: &GroupArgs,
    search: bool,
) -> Outcome {
    let (f, group) = match input {
        Some(i) => (load_poly(field, 2, i)?, None),
        None => {
            let group = args.group(field)?;
            (eklenian_poly(&group, None, args.indexing())?, Some(group))
        }
    };
    if f.nvars() != 2 || !is_lpp(&f) {
        return Err(Error::NotLpp.into());
    }
    let (g, found) = if search {
        let all = enumerate_lpp_companions(&f)?;
        let Some(first) = all.first() else {
            return Err(Failure::new(EXIT_NO_COMPANION, "no LPP companion"));
        };
        (first.clone(), Some(all.len()))
    } else if let Some(group) = &group {
        (
            klenian_companion(group, None, args.indexing()).map_err(even_q)?,
            None,
        )
    } else {
        (direct_companion(&f)?, None)
    };
    let (sf, sg) = (lpp_to_latin(&f)?, lpp_to_latin(&g)?);
    let pairs = superimpose(&sf, &sg)?;
    let distinct: HashSet<(usize, usize)> = pairs.iter().flatten().copied().collect();
    let q = field.q();
    match fmt {
        Format::Json => print_json(&CompanionOut {
            f: PolyOut::new(&f),
            g: PolyOut::new(&g),
            companions_found: found,
            certificate: Certificate {
                cells: q * q,
                distinct_pairs: distinct.len(),
                pairs: pairs
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|&(a, b)| [field.label(a), field.label(b)])
                            .collect()
                    })
                    .collect(),
            },
        })?,
        Format::Csv => out!("{}", grid_csv(field, &sg)),
        Format::Grid => {
            out!("{}{}", describe("f", &f), describe("g", &g));
            if let Some(n) = found {
                outln!("LPP companions found: {n}");
            }
            let (lf, lg) = (label_grid(field, &sf), label_grid(field, &sg));
            let width = lf
                .iter()
                .chain(&lg)
                .flatten()
                .map(String::len)
                .max()
                .unwrap_or(1);
            let row = |r: &[String]| {
                r.iter()
                    .map(|c| format!("{c:>width$}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            for (a, b) in lf.iter().zip(&lg) {
                outln!("{}  |  {}", row(a), row(b));
            }
            outln!(
                "certificate: {} distinct pairs over {} cells",
                distinct.len(),
                q * q
            );
        }
    }
    Ok(if distinct.len() == q * q {
        0
    } else {
        EXIT_FALSE
    })
}

#[derive(Serialize)]
struct MolsOut {
    report: MolsReport,
    squares: Vec<PolyOut>,
}

fn cmd_mols(
    fmt: Format,
    field: &Field,
    pair: Option<Vec<String>>,
    separated: Option<Vec<String>>,
    out: Option<PathBuf>,
) -> Outcome {
    let bad = |e: Failure| Failure::new(EXIT_BAD_MOLS_INPUT, e.message);
    let set: MolsSet = if let Some(p) = pair {
        let f = load_poly(field, 2, &p[0]).map_err(bad)?;
        let g = load_poly(field, 2, &p[1]).map_err(bad)?;
        mols_from_pair(&f, &g).map_err(|e| bad(e.into()))?
    } else {
        let s = separated.expect("clap requires --pair or --separated");
        let f = load_poly(field, 1, &s[0]).map_err(bad)?;
        let h = load_poly(field, 1, &s[1]).map_err(bad)?;
        mols_separated(field, &f, &h).map_err(|e| bad(e.into()))?
    };
    let report = set.report();
    if let Some(dir) = &out {
        fs::create_dir_all(dir)?;
        for (k, sq) in set.squares().iter().enumerate() {
            fs::write(
                dir.join(format!("square_{:02}.csv", k + 1)),
                grid_csv(field, sq),
            )?;
        }
        fs::write(
            dir.join("report.json"),
            serde_json::to_string_pretty(&report)? + "\n",
        )?;
    }
    match fmt {
        Format::Json => print_json(&MolsOut {
            report: report.clone(),
            squares: set.polys().iter().map(PolyOut::new).collect(),
        })?,
        Format::Csv => {
            let blocks: Vec<String> = set.squares().iter().map(|sq| grid_csv(field, sq)).collect();
            out!("{}", blocks.join("\n"));
        }
        Format::Grid => {
            for (k, (f, sq)) in set.polys().iter().zip(set.squares()).enumerate() {
                outln!("square {}: {f}", k + 1);
                outln!("{}", sq.render(field));
            }
            outln!(
                "{} squares of order {}, mutually orthogonal: {}, complete: {}",
                report.size,
                report.q,
                report.mutually_orthogonal,
                report.complete
            );
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct InputCheck {
    input: String,
    holds: bool,
}

#[derive(Serialize)]
struct VerifyOut {
    what: &'static str,
    holds: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    inputs: Vec<InputCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    complete: Option<bool>,
}

fn cmd_verify(fmt: Format, field: &Field, what: What, nvars: usize, inputs: &[String]) -> Outcome {
    let inputs = io::expand_inputs(inputs)?;
    let each = |check: &dyn Fn(&str) -> Result<bool, Failure>| -> Result<Vec<InputCheck>, Failure> {
        inputs
            .iter()
            .map(|i| {
                Ok(InputCheck {
                    input: i.clone(),
                    holds: check(i)?,
                })
            })
            .collect()
    };
    let (name, holds, checks, complete) = match what {
        What::Lpp => {
            let c = each(&|i| Ok(is_lpp(&load_poly(field, nvars, i)?)))?;
            ("lpp", c.iter().all(|c| c.holds), c, None)
        }
        What::Pp => {
            let c = each(&|i| Ok(is_permutation_poly(&load_poly(field, nvars, i)?)))?;
            ("pp", c.iter().all(|c| c.holds), c, None)
        }
        What::Latin => {
            let c = each(&|i| Ok(load_square(field, i)?.is_some()))?;
            ("latin", c.iter().all(|c| c.holds), c, None)
        }
        What::Orthogonal => {
            let polys = inputs
                .iter()
                .map(|i| load_poly(field, nvars, i))
                .collect::<Result<Vec<_>, _>>()?;
            (
                "orthogonal",
                is_orthogonal_system(&polys)?,
                Vec::new(),
                None,
            )
        }
        What::Mols => {
            let squares = inputs
                .iter()
                .map(|i| load_square(field, i))
                .collect::<Result<Option<Vec<_>>, _>>()?;
            match squares {
                Some(sq) if is_mols(&sq).unwrap_or(false) => {
                    ("mols", true, Vec::new(), Some(is_complete(&sq)?))
                }
                _ => ("mols", false, Vec::new(), Some(false)),
            }
        }
    };
    match fmt {
        Format::Json => print_json(&VerifyOut {
            what: name,
            holds,
            inputs: checks,
            complete,
        })?,
        _ => {
            for c in &checks {
                outln!("{}: {}", c.input, c.holds);
            }
            if let Some(c) = complete {
                outln!("complete: {c}");
            }
            outln!("{name}: {holds}");
        }
    }
    Ok(if holds { 0 } else { EXIT_FALSE })
}

fn enumeration_limit() -> Result<usize, Failure> {
    match std::env::var("LPP_FORGE_LIMIT") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                format!("LPP_FORGE_LIMIT={v:?} is not an integer"),
            )
        }),
        Err(_) => Ok(DEFAULT_ENUMERATION_LIMIT),
    }
}

fn cmd_census(
    fmt: Format,
    field: &Field,
    workers: Option<u32>,
    ndjson: Option<PathBuf>,
) -> Outcome {
    let limit = enumeration_limit()?;
    let job = || -> Result<CensusReport, Failure> {
        let report = census_with_limit(field, limit).map_err(|e| match e {
            Error::TooLarge { q, limit } => Failure::new(
                EXIT_CENSUS_LIMIT,
                format!(
                    "q = {q} exceeds enumeration limit {limit} (raise it with LPP_FORGE_LIMIT)"
                ),
            ),
            e => e.into(),
        })?;
        if let Some(path) = &ndjson {
            write_lpps_ndjson(field, limit, BufWriter::new(File::create(path)?))?;
        }
        Ok(report)
    };
    let report = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| Failure::new(EXIT_USAGE, e))?
            .install(job)?,
        None => job()?,
    };
    match fmt {
        Format::Grid => {
            outln!("q = {}", report.q);
            outln!("LPPs: {}", report.total_lpps);
            for (e, n) in &report.eklenian_counts {
                outln!("{e}-Klenian: {n}");
            }
            for (e, n) in &report.equivalent_by_e {
                outln!("equivalent to {e}-Klenian: {n}");
            }
            if let Some(n) = report.lpps_with_lpp_companion {
                outln!("with an LPP companion: {n}");
            }
            if let Some(h) = &report.companion_counts {
                for (k, n) in h {
                    outln!("  {n} LPPs with {k} LPP companions");
                }
            }
            outln!("equivalence classes: {}", report.equivalence_classes);
        }
        _ => print_json(&report)?,
    }
    Ok(0)
}
