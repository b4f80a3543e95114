//! The `khc` command line: argument parsing, the knot catalog and grids.

mod catalog;
mod grid;

pub use catalog::{lookup, resolve, CatalogEntry, Expected, Source, CATALOG};
pub use grid::Grid;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cobordism::{CobordismError, Evaluator, Movie};
use crate::concordance::{dominance_check_with_budget, t45_replay_with, ConcordanceError, ReplayContext};
use crate::diagram::{braid_closure, parse_braid, parse_pd, PlanarDiagram};
use crate::khovanov::{kh_dims_with_budget, KhError, DEFAULT_BUDGET};
use crate::lee::{s_from_pages, LeeError, LeeReduction, Page};
use crate::ssengine::CollapseConstraints;

#[derive(Parser, Debug)]
#[command(name = "khc", version, about = "Khovanov homology, Lee spectral sequences and concordance maps")]
struct Cli {
    /// Largest cube complex to build, in generators.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct KnotInput {
    /// Catalog name, T(p,q), braid word or PD code.
    name: Option<String>,
    #[arg(long)]
    knot: Option<String>,
    /// File holding a PD code.
    #[arg(long)]
    pd: Option<PathBuf>,
    /// Braid word such as "[1,1,1]".
    #[arg(long)]
    braid: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridFormat {
    Text,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced Khovanov homology.
    Kh {
        #[command(flatten)]
        input: KnotInput,
        #[arg(long)]
        grid: Option<GridFormat>,
        /// Also write the JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Pages of the Lee spectral sequence.
    Lee {
        #[command(flatten)]
        input: KnotInput,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The s-invariant.
    S {
        #[command(flatten)]
        input: KnotInput,
    },
    /// Map induced on homology by a movie file.
    Movie {
        file: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Necessary conditions for a ribbon concordance from K0 to K1.
    Obstruct {
        k0: String,
        k1: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Certify a self-concordance of T(4,5) from a movie and constraint data.
    Replay {
        movie: PathBuf,
        constraints: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// List the built-in knots.
    Catalog,
}

/// A failed command and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure { code: 1, msg: msg.to_string() }
    }
}

fn kh_failure(e: &KhError) -> Failure {
    Failure { code: if matches!(e, KhError::Budget { .. }) { 2 } else { 1 }, msg: e.to_string() }
}

impl From<KhError> for Failure {
    fn from(e: KhError) -> Self {
        kh_failure(&e)
    }
}

impl From<LeeError> for Failure {
    fn from(e: LeeError) -> Self {
        match &e {
            LeeError::Kh(k) => kh_failure(k),
            _ => Failure::input(e),
        }
    }
}

impl From<CobordismError> for Failure {
    fn from(e: CobordismError) -> Self {
        match &e {
            CobordismError::Kh(k) => kh_failure(k),
            _ => Failure::input(e),
        }
    }
}

impl From<ConcordanceError> for Failure {
    fn from(e: ConcordanceError) -> Self {
        match e {
            ConcordanceError::Kh(k) => k.into(),
            ConcordanceError::Lee(l) => l.into(),
            ConcordanceError::Cobordism(c) => c.into(),
            e => Failure::input(e),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// A catalog name or other knot description, or a file holding a PD code.
fn knot_arg(text: &str) -> Result<PlanarDiagram, Failure> {
    let p = Path::new(text);
    if lookup(text).is_none() && p.is_file() {
        return parse_pd(&read(p)?).map_err(Failure::input);
    }
    resolve(text).map_err(Failure::input)
}

/// A movie file. Its `START` line names a knot or a file holding a PD code,
/// relative to the movie.
fn read_movie(path: &Path) -> Result<Movie, Failure> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let text = read(path)?;
    let m = Movie::parse_with(&text, |arg| {
        let p = dir.join(arg);
        if lookup(arg).is_none() && p.is_file() {
            let pd = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
            return parse_pd(&pd).map_err(|e| e.to_string());
        }
        resolve(arg)
    })?;
    Ok(m)
}

fn knot(input: &KnotInput) -> Result<PlanarDiagram, Failure> {
    let d = if let Some(n) = input.name.as_ref().or(input.knot.as_ref()) {
        knot_arg(n)?
    } else if let Some(p) = &input.pd {
        parse_pd(&read(p)?).map_err(Failure::input)?
    } else if let Some(b) = &input.braid {
        braid_closure(&parse_braid(b).map_err(Failure::input)?)
    } else {
        unreachable!("clap requires one input")
    };
    if !d.is_knot() {
        return Err(Failure::input(format!("expected a knot, got {} components", d.component_count())));
    }
    Ok(d)
}

/// Compact JSON with sorted keys.
fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string(&serde_json::to_value(x).expect("serializable")).expect("value serializes")
}

fn emit(out: &mut dyn Write, text: &str, file: Option<&PathBuf>) -> Result<(), Failure> {
    writeln!(out, "{text}").map_err(Failure::input)?;
    if let Some(f) = file {
        std::fs::write(f, format!("{text}\n")).map_err(|e| Failure::input(format!("{}: {e}", f.display())))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct LeeOutput<'a> {
    pages: &'a [Page],
    s: i64,
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    if let Some(n) = cli.jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let budget = cli.budget;
    match cli.cmd {
        Command::Kh { input, grid, json: file } => {
            let d = knot(&input)?;
            let dims = kh_dims_with_budget(&d, budget)?;
            emit(out, &dims.to_json(), file.as_ref())?;
            match grid {
                Some(GridFormat::Text) => write!(out, "{}", Grid::new(&dims).to_text()),
                Some(GridFormat::Svg) => write!(out, "{}", Grid::new(&dims).to_svg()),
                None => Ok(()),
            }
            .map_err(Failure::input)?;
            Ok(0)
        }
        Command::Lee { input, json: file } => {
            let pages = LeeReduction::new(&knot(&input)?, budget)?.pages()?;
            let s = s_from_pages(&pages)?;
            emit(out, &json(&LeeOutput { pages: &pages, s }), file.as_ref())?;
            Ok(0)
        }
        Command::S { input } => {
            let pages = LeeReduction::new(&knot(&input)?, budget)?.pages()?;
            emit(out, &s_from_pages(&pages)?.to_string(), None)?;
            Ok(0)
        }
        Command::Movie { file, json: to } => {
            let m = read_movie(&file)?;
            let f = Evaluator::new(crate::khovanov::FrobeniusSpec::khovanov(), budget).kh_map(&m)?;
            emit(out, &json(&f.report()), to.as_ref())?;
            Ok(0)
        }
        Command::Obstruct { k0, k1, json: to } => {
            let r = dominance_check_with_budget(&knot_arg(&k0)?, &knot_arg(&k1)?, budget)?;
            emit(out, &r.to_json(), to.as_ref())?;
            Ok(r.verdict.exit_code())
        }
        Command::Replay { movie, constraints, json: to } => {
            let m = read_movie(&movie)?;
            let constraints = CollapseConstraints::from_json(&read(&constraints)?)
                .map_err(|e| Failure::input(format!("{}: {e}", constraints.display())))?;
            let mut ctx = ReplayContext::new();
            ctx.evaluator = Evaluator::new(crate::khovanov::FrobeniusSpec::khovanov(), budget);
            let r = t45_replay_with(&m, &constraints, &mut ctx)?;
            emit(out, &r.to_json(), to.as_ref())?;
            Ok(r.verdict.exit_code())
        }
        Command::Catalog => {
            for e in CATALOG {
                let d = e.diagram();
                let mut line = format!("{:<14} {:>2} crossings", e.name, d.crossing_count());
                if !e.aliases.is_empty() {
                    line.push_str(&format!("  ({})", e.aliases.join(", ")));
                }
                emit(out, &line, None)?;
            }
            Ok(0)
        }
    }
}

/// Runs `khc` with the given arguments (program name first). Returns the
/// process exit code: 0 on success, 1 on bad input, 2 when the budget runs
/// out, 3 when a check is obstructed or cannot certify.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
