//! Command-line surface.
//!
//! ```text
//! collineations invariants --space C --n 3 --m 3 --h 2 --format json
//! collineations chambers --space Q --n 4 --h 3 --svg q43.svg
//! collineations verify rank-lemma --rows 3 --cols 4 --k 2 --q 2
//! ```
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid parameters,
//! 3 request outside the supported models.

pub mod report;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::detvar::{self, DetvarError, VerificationReport};
use crate::lattice::RationalVector;
use crate::polynom::{self, PolyError};
use crate::spaces::{self, SpaceError, SpaceKind};

pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SCOPE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "collineations",
    version,
    about = "Exact invariants of complete collineations and quadrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension, degree, Picard data, cones and automorphisms of a space.
    Invariants(InvariantsArgs),
    /// Chamber decomposition of the effective cone.
    Chambers(ChambersArgs),
    /// Run an exhaustive or symbolic verification.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpaceFlag {
    #[value(name = "C")]
    C,
    #[value(name = "Q")]
    Q,
    #[value(name = "secS")]
    SecS,
    #[value(name = "secV")]
    SecV,
    #[value(name = "mbar-p")]
    MbarP,
    #[value(name = "mbar-pxp")]
    MbarPxp,
    #[value(name = "mbar-gr")]
    MbarGr,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Markdown,
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[arg(long, value_enum)]
    space: SpaceFlag,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Args, Debug)]
struct InvariantsArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct ChambersArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Also write the planar section to this file.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    RankLemma,
    ComponentSplit,
    Census,
    TangentCone,
    RhSolve,
    KnmIdentity,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[arg(long)]
    rows: Option<u32>,
    #[arg(long)]
    cols: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    symmetric: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// A failure mapped to an exit code and a one-line diagnostic.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<SpaceError> for Failure {
    fn from(e: SpaceError) -> Self {
        let code = match e {
            SpaceError::InvalidParameters(_) => EXIT_USAGE,
            _ => EXIT_SCOPE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DetvarError> for Failure {
    fn from(e: DetvarError) -> Self {
        let code = match e {
            DetvarError::BudgetExceeded { .. } => EXIT_SCOPE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        let code = match e {
            PolyError::TooLarge(_) => EXIT_SCOPE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn need(v: Option<u32>, flag: &str, ctx: &str) -> Result<u32, Failure> {
    v.ok_or_else(|| Failure::usage(format!("{ctx} requires --{flag}")))
}

fn space_kind(a: &SpaceArgs) -> Result<SpaceKind, Failure> {
    let ctx = format!(
        "--space {}",
        a.space.to_possible_value().expect("named").get_name()
    );
    let n = need(a.n, "n", &ctx)?;
    let kind = match a.space {
        SpaceFlag::C => SpaceKind::Collineations {
            n,
            m: need(a.m, "m", &ctx)?,
            h: need(a.h, "h", &ctx)?,
        },
        SpaceFlag::Q => SpaceKind::Quadrics {
            n,
            h: need(a.h, "h", &ctx)?,
        },
        SpaceFlag::SecS => SpaceKind::SegreBlowup {
            n,
            m: need(a.m, "m", &ctx)?,
            h: need(a.h, "h", &ctx)?,
            k: need(a.k, "k", &ctx)?,
        },
        SpaceFlag::SecV => SpaceKind::VeroneseBlowup {
            n,
            h: need(a.h, "h", &ctx)?,
            k: need(a.k, "k", &ctx)?,
        },
        SpaceFlag::MbarP => SpaceKind::KontsevichP { n },
        SpaceFlag::MbarPxp => SpaceKind::KontsevichPxP {
            n,
            m: need(a.m, "m", &ctx)?,
        },
        SpaceFlag::MbarGr => SpaceKind::KontsevichGr { n },
    };
    kind.validate()?;
    Ok(kind)
}

fn emit(report: &Report, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => out.write_all(report.to_json().as_bytes()),
        Format::Markdown => out.write_all(report.to_markdown().as_bytes()),
    }
}

fn invariants(a: &InvariantsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let kind = space_kind(&a.space)?;
    let model = spaces::model(&kind)?;
    let report = Report::for_model(&model)?;
    emit(&report, a.format, out).map_err(io_failure)?;
    Ok(EXIT_OK)
}

fn chambers(a: &ChambersArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let kind = space_kind(&a.space)?;
    let model = spaces::model(&kind)?;
    let dec = spaces::chambers_of(&model)?;
    let report = Report::for_model(&model)?.with_chambers(&model, &dec)?;
    if let Some(path) = &a.svg {
        let drawing = svg::render(&model, &dec)?;
        std::fs::write(path, drawing).map_err(io_failure)?;
    }
    emit(&report, a.format, out).map_err(io_failure)?;
    Ok(EXIT_OK)
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_FAILED,
        message: format!("i/o error: {e}"),
    }
}

fn rh_solve(n: u32) -> Result<VerificationReport, Failure> {
    let abc = spaces::riemann_hurwitz_coefficients(n)?;
    let mut report = VerificationReport::new("rh-solve").param("n", i64::from(n));
    report
        .details
        .insert("coefficients".to_string(), abc.to_string());
    let image = spaces::riemann_hurwitz_image(n, &abc)?;
    let target = spaces::grassmannian_anticanonical(n);
    report
        .details
        .insert("pullback_minus_d_unb".to_string(), image.to_string());
    let stored = spaces::anticanonical(&SpaceKind::VeroneseBlowup { n, h: 4, k: 2 })?;
    report.details.insert(
        "stored_anticanonical".to_string(),
        stored.coefficients.to_string(),
    );
    if image != target || stored.coefficients != abc {
        report.fail(vec![vec![i64::from(n)]]);
    }
    Ok(report)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let name = a
        .check
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let ctx = format!("verify {name}");
    let report = match a.check {
        Check::RankLemma => detvar::verify_rank_minor_lemma(
            need(a.rows, "rows", &ctx)?,
            need(a.cols, "cols", &ctx)?,
            need(a.k, "k", &ctx)?,
            a.q,
        )?,
        Check::ComponentSplit => detvar::verify_component_split(
            need(a.rows, "rows", &ctx)?,
            need(a.cols, "cols", &ctx)?,
            need(a.k, "k", &ctx)?,
            a.q,
            a.symmetric,
        )?,
        Check::Census => detvar::verify_census(
            need(a.rows, "rows", &ctx)?,
            need(a.cols, "cols", &ctx)?,
            a.q,
            a.symmetric,
        )?,
        Check::TangentCone => {
            let n = need(a.n, "n", &ctx)?;
            let m = if a.symmetric {
                a.m.unwrap_or(n)
            } else {
                need(a.m, "m", &ctx)?
            };
            polynom::verify_tangent_cone(
                n as usize,
                m as usize,
                need(a.h, "h", &ctx)? as usize,
                need(a.k, "k", &ctx)? as usize,
                a.symmetric,
            )?
        }
        Check::RhSolve => rh_solve(need(a.n, "n", &ctx)?)?,
        Check::KnmIdentity => {
            spaces::sanity_check_knm(need(a.n, "n", &ctx)?, need(a.m, "m", &ctx)?)?
        }
    };
    let passed = report.passed;
    let full = Report {
        verifications: vec![report],
        ..Report::default()
    };
    emit(&full, a.format, out).map_err(io_failure)?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Invariants(a) => invariants(a, out),
        Command::Chambers(a) => chambers(a, out),
        Command::Verify(a) => verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Parses a rendered vector such as `(10, -5, -2)`; used by tests of the
/// command surface.
pub fn parse_vector(s: &str) -> Option<RationalVector> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    inner
        .split(',')
        .map(|t| crate::lattice::parse_rational(t.trim()))
        .collect::<Option<Vec<_>>>()
        .map(RationalVector)
}
