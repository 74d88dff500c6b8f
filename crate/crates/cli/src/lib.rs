//! The `galled` command line: counts, tables, series, asymptotics and verification.

pub mod golden;
pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use galled_core::asym::{self, CharSysFamily, DerivativeMode};
use galled_core::counts::{self, CountTable, Labeling, TreeClass, TreeClassSpec};
use galled_core::genfunc::{arbitrary_galls_series, counts_of, fixed_g_series, solve_bivariate};
use galled_core::GalledError;

use output::{pretty, Format, TableData, TableRow};

/// Largest `n` the recursion engine serves from the command line.
pub const RECURSION_LIMIT: usize = 60;
/// Largest order for the fixed-point series modes, which are cubic in the order.
pub const FIXED_POINT_LIMIT: usize = 120;
/// Largest order for the explicit per-gall series.
pub const SERIES_LIMIT: usize = 5000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        CliError { code: EXIT_USAGE, message }
    }

    pub fn limit(message: String) -> Self {
        CliError { code: EXIT_LIMIT, message }
    }

    pub fn io(e: impl std::fmt::Display) -> Self {
        CliError { code: EXIT_USAGE, message: e.to_string() }
    }
}

impl From<GalledError> for CliError {
    fn from(e: GalledError) -> Self {
        let code = match e {
            GalledError::SizeGuard { .. } => EXIT_LIMIT,
            GalledError::Divergence { .. } | GalledError::NoRoot(_) | GalledError::NotIntegral { .. } => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "galled", version, about = "Exact counts, generating functions and asymptotics for galled trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count trees with n leaves and g galls (or the whole row).
    Count(CountArgs),
    /// Emit a table of counts for 1 ≤ n ≤ max-n.
    Table(TableArgs),
    /// Exact series coefficients.
    Series(SeriesArgs),
    /// Singular constants, characteristic systems and asymptotic estimates.
    Asym {
        #[command(subcommand)]
        task: AsymTask,
    },
    /// Check the embedded published tables and the cross-engine identities.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// general, time-consistent (tc) or simplex-tc (simplex)
    #[arg(long, default_value = "general")]
    pub class: TreeClass,
    /// unlabeled or labeled
    #[arg(long, default_value = "unlabeled")]
    pub labeling: Labeling,
}

impl SpecArgs {
    fn spec(&self) -> TreeClassSpec {
        TreeClassSpec::new(self.class, self.labeling)
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'g')]
    pub g: Option<usize>,
    #[arg(long, value_enum, default_value = "plain")]
    pub format: Format,
    /// Group digits with commas.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesMode {
    Bivariate,
    FixedG,
    Arbitrary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesForm {
    /// Counts (n!·coefficient when labeled).
    Count,
    /// Raw rational coefficients.
    Egf,
    /// Both forms, one line each.
    Both,
    /// Polynomial text.
    Poly,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, value_enum, default_value = "arbitrary")]
    pub mode: SeriesMode,
    /// Truncation order.
    #[arg(short = 'N', long = "order")]
    pub order: usize,
    #[arg(short = 'g')]
    pub g: Option<usize>,
    #[arg(long, value_enum)]
    pub form: Option<SeriesForm>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DerivativeArg {
    Exact,
    Backward,
}

#[derive(Debug, Subcommand)]
pub enum AsymTask {
    /// ρ and γ of the unlabeled binary-tree series.
    Constants {
        #[arg(long, default_value_t = 60)]
        truncation: usize,
    },
    /// Solve the characteristic system of a class.
    Charsys {
        #[arg(long)]
        family: CharSysFamily,
        #[arg(long, default_value_t = 25)]
        truncation: usize,
        #[arg(long, value_enum, default_value = "exact")]
        derivative: DerivativeArg,
    },
    /// Leading-order estimate for g galls at n leaves.
    Estimate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(short = 'g')]
        g: usize,
        #[arg(short = 'n')]
        n: usize,
    },
    /// exact/estimate from the series engine.
    Ratio {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(short = 'g')]
        g: usize,
        #[arg(short = 'n')]
        n: usize,
        /// Extra leaf counts to report, comma separated.
        #[arg(long, value_delimiter = ',')]
        points: Vec<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Tables,
    Engines,
    Bijections,
    Oracle,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub scope: Scope,
}

/// Text to print and the exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, code: EXIT_OK }
    }
}

/// Parse `args` (including the program name), run, and write to `out`/`err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Count(a) => cmd_count(a).map(Outcome::from),
        Command::Table(a) => cmd_table(a).map(Outcome::from),
        Command::Series(a) => cmd_series(a).map(Outcome::from),
        Command::Asym { task } => cmd_asym(task).map(Outcome::from),
        Command::Verify(a) => {
            let report = verify::run_scope(a.scope);
            Ok(Outcome { text: report.render(), code: if report.passed() { EXIT_OK } else { EXIT_VERIFY } })
        }
    }
}

fn check_recursion_n(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::usage("n must be at least 1".into()));
    }
    if n > RECURSION_LIMIT {
        return Err(CliError::limit(format!(
            "n = {n} exceeds the recursion limit {RECURSION_LIMIT}; use `galled series --mode fixed-g` for larger n"
        )));
    }
    Ok(())
}

/// Counts from the recursion engine as a table.
pub fn table_data(spec: TreeClassSpec, max_n: usize) -> Result<TableData, CliError> {
    let t = counts::build_table(spec, max_n)?;
    Ok(from_count_table(&t))
}

fn from_count_table(t: &CountTable) -> TableData {
    let spec = t.spec;
    let width = t.width();
    let rows = (1..=t.max_n())
        .map(|n| {
            let row = t.row(n);
            let cells = (0..width).map(|g| row.get(g).map(ToString::to_string)).collect();
            TableRow { n, cells, total: t.total(n).to_string() }
        })
        .collect();
    TableData { class: spec.class.name().into(), labeling: spec.labeling.name().into(), width, rows }
}

fn cmd_count(a: &CountArgs) -> Result<String, CliError> {
    check_recursion_n(a.n)?;
    let spec = a.spec.spec();
    let show = |v: String| if a.pretty { pretty(&v) } else { v };
    if let Some(g) = a.g {
        let v = counts::count(spec, a.n, g)?.to_string();
        return Ok(match a.format {
            Format::Plain => format!("{}\n", show(v)),
            _ => {
                let full = table_data(spec, a.n)?;
                let mut row = full.rows[a.n - 1].clone();
                row.cells = row.cells.into_iter().enumerate().map(|(i, c)| c.filter(|_| i == g)).collect();
                TableData { rows: vec![row], ..full }.render(a.format, a.pretty)?
            }
        });
    }
    let full = table_data(spec, a.n)?;
    let row = full.rows[a.n - 1].clone();
    match a.format {
        Format::Plain => {
            let cells: Vec<String> = row.cells.iter().flatten().map(|v| show(v.clone())).collect();
            Ok(format!("{}\ntotal {}\n", cells.join(" "), show(row.total)))
        }
        f => TableData { rows: vec![row], ..full }.render(f, a.pretty),
    }
}

fn cmd_table(a: &TableArgs) -> Result<String, CliError> {
    check_recursion_n(a.max_n)?;
    table_data(a.spec.spec(), a.max_n)?.render(a.format, a.pretty)
}

fn cmd_series(a: &SeriesArgs) -> Result<String, CliError> {
    let spec = a.spec.spec();
    let n = a.order;
    if n == 0 {
        return Err(CliError::usage("order must be at least 1".into()));
    }
    let fixed_point = a.mode != SeriesMode::FixedG;
    if fixed_point && n > FIXED_POINT_LIMIT {
        return Err(CliError::limit(format!(
            "order {n} exceeds {FIXED_POINT_LIMIT} for the {:?} mode; use --mode fixed-g",
            a.mode
        )));
    }
    if n > SERIES_LIMIT {
        return Err(CliError::limit(format!("order {n} exceeds {SERIES_LIMIT}")));
    }
    let series = match a.mode {
        SeriesMode::Bivariate => {
            let b = solve_bivariate(spec, n, spec.max_galls(n))?;
            let mut rows = Vec::new();
            let slices: Vec<Vec<num_bigint::BigInt>> = (0..=spec.max_galls(n))
                .map(|g| counts_of(spec.labeling, b.slice(g).expect("slice within u order")))
                .collect::<Result<_, _>>()?;
            for m in 1..=n {
                let width = spec.max_galls(m) + 1;
                let cells: Vec<Option<String>> =
                    (0..=spec.max_galls(n)).map(|g| (g < width).then(|| slices[g][m].to_string())).collect();
                let total: num_bigint::BigInt = slices.iter().map(|s| &s[m]).sum();
                rows.push(TableRow { n: m, cells, total: total.to_string() });
            }
            let t = TableData {
                class: spec.class.name().into(),
                labeling: spec.labeling.name().into(),
                width: spec.max_galls(n) + 1,
                rows,
            };
            return t.render(a.format, false);
        }
        SeriesMode::FixedG => {
            let g = a.g.ok_or_else(|| CliError::usage("--mode fixed-g needs -g".into()))?;
            if g == 0 {
                galled_core::genfunc::tree_series(spec.labeling, n)
            } else {
                fixed_g_series(spec, g, n)?
            }
        }
        SeriesMode::Arbitrary => arbitrary_galls_series(spec, n)?,
    };
    let form = a.form.unwrap_or(match spec.labeling {
        Labeling::Unlabeled => SeriesForm::Count,
        Labeling::LeafLabeled => SeriesForm::Both,
    });
    let join = |v: Vec<String>| v[1..].join(",");
    let count_line = || -> Result<String, CliError> {
        Ok(join(counts_of(spec.labeling, &series)?.iter().map(ToString::to_string).collect()))
    };
    let egf_line = || join(series.coeffs().iter().map(ToString::to_string).collect());
    Ok(match form {
        SeriesForm::Count => format!("{}\n", count_line()?),
        SeriesForm::Egf => format!("{}\n", egf_line()),
        SeriesForm::Both => format!("egf: {}\ncount: {}\n", egf_line(), count_line()?),
        SeriesForm::Poly => format!("{series}\n"),
    })
}

fn cmd_asym(task: &AsymTask) -> Result<String, CliError> {
    let mut s = String::new();
    match task {
        AsymTask::Constants { truncation } => {
            let c = asym::solve_rho_gamma(*truncation)?;
            let u = galled_core::genfunc::tree_series(Labeling::Unlabeled, *truncation);
            let residual = c.rho + 0.5 * u.eval_f64(c.rho * c.rho) - 0.5;
            writeln!(s, "rho = {:.12}", c.rho).ok();
            writeln!(s, "gamma = {:.12}", c.gamma).ok();
            writeln!(s, "residual = {residual:.3e}").ok();
            writeln!(s, "truncation = {truncation}").ok();
        }
        AsymTask::Charsys { family, truncation, derivative } => {
            let mode = match derivative {
                DerivativeArg::Exact => DerivativeMode::ExactSeriesDerivative,
                DerivativeArg::Backward => DerivativeMode::BackwardDifference,
            };
            let sol = asym::solve_charsys_with(*family, *truncation, mode)?;
            let (e1, e2) = sol.residuals();
            writeln!(s, "family = {}", family.name()).ok();
            writeln!(s, "r = {:.10}", sol.r).ok();
            writeln!(s, "s = {:.10}", sol.s).ok();
            if let Some(b) = sol.b {
                writeln!(s, "b = {b:.10}").ok();
            }
            if let Some(d) = sol.a_prime {
                writeln!(s, "a_prime = {d:.10}").ok();
            }
            writeln!(s, "phi_t = {:.10}", sol.phi_t).ok();
            writeln!(s, "phi_ww = {:.10}", sol.phi_ww).ok();
            writeln!(s, "delta = {:.10}", sol.delta).ok();
            writeln!(s, "residuals = {e1:.3e}, {e2:.3e}").ok();
            if sol.b.is_some() {
                writeln!(s, "truncation = {truncation}").ok();
            }
        }
        AsymTask::Estimate { spec, g, n } => {
            if *n < 2 {
                return Err(CliError::usage("estimates need n >= 2".into()));
            }
            let c = asym::singular_constants();
            let e = asym::estimate(spec.spec(), *g, &c)?;
            let lv = e.log_value(*n);
            let log10 = lv / std::f64::consts::LN_10;
            let (exp, mant) = (log10.floor(), 10f64.powf(log10 - log10.floor()));
            writeln!(s, "log_estimate = {lv:.10}").ok();
            writeln!(s, "estimate = {mant:.6}e{exp}").ok();
        }
        AsymTask::Ratio { spec, g, n, points, format } => {
            let mut ns: Vec<usize> = points.clone();
            ns.push(*n);
            ns.sort_unstable();
            ns.dedup();
            if ns[0] < 2 {
                return Err(CliError::usage("ratios need n >= 2".into()));
            }
            if *ns.last().expect("nonempty") > SERIES_LIMIT {
                return Err(CliError::limit(format!("n exceeds {SERIES_LIMIT}")));
            }
            let c = asym::singular_constants();
            let est = asym::estimate(spec.spec(), *g, &c)?;
            let exact = asym::exact_counts(spec.spec(), *g, &ns)?;
            match format {
                Format::Json => {
                    let recs: Vec<serde_json::Value> = ns
                        .iter()
                        .zip(&exact)
                        .map(|(&m, e)| {
                            serde_json::json!({
                                "class": spec.class.name(),
                                "labeling": spec.labeling.name(),
                                "n": m,
                                "g": g,
                                "exact": e.to_string(),
                                "log_estimate": est.log_value(m),
                                "ratio": est.ratio(m, e),
                            })
                        })
                        .collect();
                    s = serde_json::to_string_pretty(&recs).map_err(CliError::io)? + "\n";
                }
                _ => {
                    let sep = if *format == Format::Tsv { "\t" } else { "," };
                    writeln!(s, "n{sep}log_estimate{sep}ratio").ok();
                    for (&m, e) in ns.iter().zip(&exact) {
                        writeln!(s, "{m}{sep}{:.10}{sep}{:.10}", est.log_value(m), est.ratio(m, e)).ok();
                    }
                }
            }
        }
    }
    Ok(s)
}
