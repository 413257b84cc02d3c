//! `mlcif`: enumerate MLCIFs, compute hittings, classify optimal families
//! and check the known optimality statements.
//!
//! Exit codes: 0 success, 1 a check found a disagreement (the report is
//! still written), 2 invalid input, 3 resource limit.

mod emit;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mlcif_core::{
    enumerate_mlcifs_with, find_threshold, hit_brute, make_named, parse_xclass, set_enumeration_cap,
    verify_with_catalog, Classifier, EnumerateOptions, Error, FamilySpec, MlcifCatalog, Mode, Params, TheoremId,
    XClass, XQuery,
};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mlcif",
    version,
    about = "Maximal left-compressed intersecting families and their hittings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Largest number of r-sets an explicit operation may enumerate
    #[arg(long, global = true)]
    cap: Option<u64>,

    /// Allow enumeration at r = 5 (slow)
    #[arg(long, global = true)]
    allow_r5: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List every MLCIF on (n, r)
    Enumerate {
        #[command(flatten)]
        size: Size,
        /// text (catalog file format) or json
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Hitting number of one family with X
    Hit {
        #[command(flatten)]
        size: Size,
        /// star | ahm:<t> | a345 | gen:<s1>;<s2>;...
        #[arg(long)]
        family: String,
        #[command(flatten)]
        target: Target,
        /// Defaults to trace when the family is generated inside [2r]
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Optimal MLCIFs for X, or for every X-class when no X is given
    Classify {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "trace")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run one optimality or extremality check
    Verify {
        #[command(flatten)]
        size: Size,
        /// ekr, hm, borg, borg2, barber, canon, nocontenders, compressed,
        /// ahmtmax, c23max, size2gen, ahmbest, ahmopt, main, best,
        /// hm_plus_one, r2cases
        #[arg(long)]
        id: String,
        #[command(flatten)]
        source: Source,
        /// Defaults to brute for `best`, trace otherwise
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Scan n in [2r, n_max] for the point from which a check always passes
    Threshold {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n_max: u32,
        #[arg(long, default_value = "main")]
        id: String,
    },
    /// Best MLCIFs other than the star
    Nonstar {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "trace")]
        mode: ModeArg,
    },
}

#[derive(Args)]
struct Size {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
}

#[derive(Args)]
struct Target {
    /// Comma-separated elements of X
    #[arg(long, value_delimiter = ',', conflicts_with = "xclass")]
    x: Option<Vec<u32>>,
    /// low=<list>,q=<int>[,one]
    #[arg(long)]
    xclass: Option<String>,
}

#[derive(Args)]
struct Source {
    /// Load a saved catalog instead of enumerating
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Brute,
    Trace,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Brute => Mode::Brute,
            ModeArg::Trace => Mode::Trace,
        }
    }
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_resource_limit() => 3,
            Failure::Core(Error::ClassificationViolation(_)) => 1,
            _ => 2,
        }
    }
}

/// What a command produced: the report text and whether it found a disagreement.
struct Outcome {
    text: String,
    disagreement: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            disagreement: false,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return report_failure(e);
    }
    if let Some(cap) = cli.cap {
        set_enumeration_cap(cap);
    }
    let options = EnumerateOptions { allow_r5: cli.allow_r5 };
    let outcome = match run(cli.command, options) {
        Ok(o) => o,
        Err(e) => return report_failure(e),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(outcome.text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    };
    if let Err(e) = written {
        return report_failure(e);
    }
    if outcome.disagreement {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn report_failure(f: Failure) -> ExitCode {
    let code = f.exit_code();
    match f {
        Failure::Core(e) => eprintln!("error: {e}"),
        Failure::Usage(msg) | Failure::Io(msg) => eprintln!("error: {msg}"),
    }
    ExitCode::from(code)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("MLCIF_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("MLCIF_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(command: Command, options: EnumerateOptions) -> Result<Outcome, Failure> {
    match command {
        Command::Enumerate { size, format } => {
            let catalog = enumerate(size.params()?, options)?;
            let text = match format {
                Format::Text => catalog.to_text(),
                Format::Json => emit::json(&emit::catalog_rows(&catalog))?,
                Format::Csv => return Err(Failure::Usage("enumerate supports --format text|json".into())),
            };
            Ok(Outcome::ok(text))
        }
        Command::Hit {
            size,
            family,
            target,
            mode,
            format,
        } => hit(size.params()?, &family, &target, mode, format),
        Command::Classify {
            size,
            target,
            source,
            mode,
            format,
        } => {
            let params = size.params()?;
            let catalog = load_catalog(params, &source, options)?;
            let classifier = Classifier::new(&catalog, mode.into())?;
            let reports = match target.resolve(params)? {
                Some(xc) => vec![classifier.classify(&xc)?],
                None => classifier.classify_all()?,
            };
            let text = match format {
                Format::Json if reports.len() == 1 => emit::json(&reports[0])?,
                Format::Json => emit::json(&reports)?,
                Format::Csv => emit::classification_csv(&reports)?,
                Format::Text => return Err(Failure::Usage("classify supports --format json|csv".into())),
            };
            Ok(Outcome::ok(text))
        }
        Command::Verify { size, id, source, mode } => {
            let params = size.params()?;
            let id: TheoremId = id.parse()?;
            let mode = mode.map(Mode::from).unwrap_or(if id == TheoremId::Best {
                Mode::Brute
            } else {
                Mode::Trace
            });
            let catalog = load_catalog(params, &source, options)?;
            let report = verify_with_catalog(id, &catalog, mode)?;
            Ok(Outcome {
                text: emit::json(&report)?,
                disagreement: !report.passed,
            })
        }
        Command::Threshold { r, n_max, id } => {
            let id: TheoremId = id.parse()?;
            let report = find_threshold(r, n_max, id)?;
            Ok(Outcome {
                text: emit::json(&report)?,
                disagreement: report.threshold.is_none(),
            })
        }
        Command::Nonstar {
            size,
            target,
            source,
            mode,
        } => {
            let params = size.params()?;
            let xc = target
                .resolve(params)?
                .ok_or_else(|| Failure::Usage("nonstar needs --x or --xclass".into()))?;
            let catalog = load_catalog(params, &source, options)?;
            let report = Classifier::new(&catalog, mode.into())?.nonstar(&xc)?;
            Ok(Outcome::ok(emit::json(&report)?))
        }
    }
}

impl Size {
    fn params(&self) -> Result<Params, Failure> {
        Ok(Params::new(self.n, self.r)?)
    }
}

impl Target {
    fn resolve(&self, params: Params) -> Result<Option<XClass>, Failure> {
        match (&self.x, &self.xclass) {
            (Some(x), _) => Ok(Some(XClass::from_elements(params, x)?)),
            (None, Some(text)) => Ok(Some(parse_xclass(params, text)?)),
            (None, None) => Ok(None),
        }
    }
}

fn enumerate(params: Params, options: EnumerateOptions) -> Result<MlcifCatalog, Failure> {
    if params.r() == 5 && options.allow_r5 && params.n() >= 10 {
        eprintln!("warning: enumeration at r = 5 takes several seconds and produces tens of thousands of entries");
    }
    Ok(enumerate_mlcifs_with(params, options)?)
}

fn load_catalog(params: Params, source: &Source, options: EnumerateOptions) -> Result<MlcifCatalog, Failure> {
    let Some(path) = &source.catalog else {
        return enumerate(params, options);
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let catalog = MlcifCatalog::from_text(&text)?;
    if catalog.params() != params {
        return Err(Error::ParamMismatch(catalog.params().to_string(), params.to_string()).into());
    }
    Ok(catalog)
}

fn hit(
    params: Params,
    family: &str,
    target: &Target,
    mode: Option<ModeArg>,
    format: Format,
) -> Result<Outcome, Failure> {
    let spec = FamilySpec::parse(family, params)?;
    let (x, xc) = match (&target.x, &target.xclass) {
        (Some(x), _) => {
            let mut x = x.clone();
            x.sort_unstable();
            x.dedup();
            let xc = if params.n() >= 2 * params.r() {
                Some(XClass::from_elements(params, &x)?)
            } else {
                None
            };
            (x, xc)
        }
        (None, Some(text)) => {
            let xc = parse_xclass(params, text)?;
            (xc.representative(), Some(xc))
        }
        (None, None) => return Err(Failure::Usage("hit needs --x or --xclass".into())),
    };
    let trace = match &xc {
        Some(_) => match spec.trace_family() {
            Ok(t) => Some(t),
            Err(Error::UnsupportedGenerator(_)) => None,
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    let mode = match mode {
        Some(m) => Mode::from(m),
        None if trace.is_some() => Mode::Trace,
        None => Mode::Brute,
    };
    let value = match mode {
        Mode::Trace => {
            let (Some(trace), Some(xc)) = (trace, xc) else {
                return Err(Error::UnsupportedGenerator(format!("{spec} has no trace form at {params}")).into());
            };
            trace.hit(xc.trace_mask(), xc.q())
        }
        Mode::Brute => {
            let fam = make_named(&spec)?;
            hit_brute(&fam, &XQuery::from_elements(params, &x)?)
        }
    };
    let text = match format {
        Format::Text => format!("{value}\n"),
        Format::Json => emit::json(&emit::HitRow {
            n: params.n(),
            r: params.r(),
            family: spec.label(),
            x,
            mode,
            hit: value,
        })?,
        Format::Csv => return Err(Failure::Usage("hit supports --format text|json".into())),
    };
    Ok(Outcome::ok(text))
}
