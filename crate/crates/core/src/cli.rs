//! Command-line driver. [`run`] returns the process exit code: 0 when every
//! check passes (warnings included), 1 when a check fails, 2 for usage,
//! configuration and I/O errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use crate::arc::{FormSpec, Sign};
use crate::error::{Error, Result};
use crate::report::{plot_data_csv, RunReport, ZeroRow, MIN_DENSITY};
use crate::verify::{
    check_form, explore_higher_n, verify_minus_accounting, verify_oracle_equivalence,
    verify_prop_bounds, verify_theorem, BoundProp, BoundsRequest, EvenRange, ExploreRequest, Family,
    OracleRequest, TheoremRequest,
};
use crate::zeros::{DEFAULT_Y_MAX, FALLBACK_DENSITY, RESIDUAL_TOL};

#[derive(Debug, Parser)]
#[command(name = "eisenzeros", version, about = "Locate and verify zeros of Eisenstein series combinations on the unit arc")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (default: available parallelism). Does not affect output.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Single,
    PowerSum,
    ProductSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FormArgs {
    #[arg(long, value_enum)]
    pub form: FormKind,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
}

impl FormArgs {
    pub fn to_form(&self) -> Result<FormSpec> {
        let missing = |what: &str| Error::InvalidArgument(format!("--{what} is required for this form"));
        match self.form {
            FormKind::Single => FormSpec::single(self.k),
            FormKind::PowerSum => FormSpec::power_sum(self.n.ok_or_else(|| missing("n"))?, self.k),
            FormKind::ProductSum => {
                let sign = match self.sign {
                    SignArg::Plus => Sign::Plus,
                    SignArg::Minus => Sign::Minus,
                };
                FormSpec::product_sum(self.k, self.l.ok_or_else(|| missing("l"))?, sign)
            }
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Locate the zeros of one form on the arc (and on the left boundary for
    /// the minus variant).
    Locate {
        #[command(flatten)]
        #[serde(flatten)]
        form: FormArgs,
        /// Residual tolerance, relative to the local scale.
        #[arg(long, default_value_t = RESIDUAL_TOL)]
        tol: f64,
        /// Top of the left-boundary search segment (minus variant only).
        #[arg(long, default_value_t = DEFAULT_Y_MAX)]
        y_max: f64,
    },
    /// Confirm the zero count and sign alternation for a whole family.
    VerifyTheorem {
        /// rsd, power2, power3 or product-plus
        #[arg(long)]
        family: Family,
        /// Even range `min:max`.
        #[arg(long)]
        k: EvenRange,
        #[arg(long)]
        l: Option<EvenRange>,
        #[arg(long, default_value_t = RESIDUAL_TOL)]
        tol: f64,
        /// Points of the independent uniform sign scan.
        #[arg(long, default_value_t = FALLBACK_DENSITY)]
        grid: usize,
    },
    /// Check one family of bounds analytically and on grids.
    CheckBounds {
        /// R-single, R-power, R-product, M-power2, M-power3, P-product,
        /// Q-product or combined-product
        #[arg(long)]
        prop: BoundProp,
        #[arg(long)]
        k: EvenRange,
        #[arg(long)]
        l: Option<EvenRange>,
        /// Exponent for R-power (2 or 3).
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
    },
    /// Collect evidence for E_k^n + E_(nk) with n in 4..=6.
    ExploreN {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: EvenRange,
    },
    /// Cross-check the q-expansion against the lattice sum at random points.
    OracleCheck {
        #[arg(long, value_delimiter = ',', default_values_t = [4u32, 6, 8, 10, 12, 16, 24])]
        k: Vec<u32>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Grid values, sample points and zeros of one form, as CSV.
    PlotData {
        #[command(flatten)]
        #[serde(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 1024)]
        density: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Locate { .. } => "locate",
            Command::VerifyTheorem { .. } => "verify-theorem",
            Command::CheckBounds { .. } => "check-bounds",
            Command::ExploreN { .. } => "explore-n",
            Command::OracleCheck { .. } => "oracle-check",
            Command::PlotData { .. } => "plot-data",
        }
    }

    fn params(&self) -> Result<BTreeMap<String, Value>> {
        let v = serde_json::to_value(self)?;
        // externally tagged: {"locate": {...}}
        let inner = v
            .as_object()
            .and_then(|o| o.values().next())
            .and_then(Value::as_object)
            .cloned()
            .unwrap_or_default();
        Ok(inner.into_iter().filter(|(_, v)| !v.is_null()).collect())
    }
}

enum Output {
    Report(RunReport),
    Plot(String),
}

fn check_density(d: usize, what: &str) -> Result<()> {
    if d < MIN_DENSITY {
        return Err(Error::InvalidArgument(format!("{what} {d} is below the minimum {MIN_DENSITY}")));
    }
    Ok(())
}

fn execute(cmd: &Command) -> Result<Output> {
    let params = cmd.params()?;
    let name = cmd.name();
    let report = |checks, zeros| Output::Report(RunReport::new(name, params.clone(), checks, zeros));
    Ok(match cmd {
        Command::Locate { form, tol, y_max } => {
            let f = form.to_form()?;
            if let FormSpec::ProductSum { k, l, sign: Sign::Minus } = f {
                let o = verify_minus_accounting(k, l, *y_max, *tol)?;
                let mut zeros: Vec<ZeroRow> = o.arc.zeros.iter().map(|z| ZeroRow::arc(&f, z)).collect();
                zeros.extend(o.boundary.zeros.iter().map(|z| ZeroRow::boundary(&f, z)));
                report(vec![o.report], zeros)
            } else {
                let o = check_form(&f, *tol, 0)?;
                let zeros = o.scan.zeros.iter().map(|z| ZeroRow::arc(&f, z)).collect();
                let check = crate::verify::VerificationReport::from_witnesses(
                    "locate",
                    f.to_string(),
                    o.witnesses,
                    format!("valence budget: {} interior zeros", o.budget.interior),
                );
                report(vec![check], zeros)
            }
        }
        Command::VerifyTheorem { family, k, l, tol, grid } => {
            check_density(*grid, "--grid")?;
            let req = TheoremRequest { family: *family, k: *k, l: *l, residual_tol: *tol, grid_check: *grid };
            let (r, outcomes) = verify_theorem(&req)?;
            let zeros = outcomes
                .iter()
                .flat_map(|o| o.scan.zeros.iter().map(move |z| ZeroRow::arc(&o.scan.form, z)))
                .collect();
            report(vec![r], zeros)
        }
        Command::CheckBounds { prop, k, l, n, grid } => {
            check_density(*grid, "--grid")?;
            let req = BoundsRequest { prop: *prop, k: *k, l: *l, n: *n, grid: *grid };
            report(vec![verify_prop_bounds(&req)?], vec![])
        }
        Command::ExploreN { n, k } => {
            report(vec![explore_higher_n(&ExploreRequest { n: *n, k: *k })?], vec![])
        }
        Command::OracleCheck { k, samples, seed, tol } => {
            let req = OracleRequest { weights: k.clone(), samples: *samples, seed: *seed, tolerance: *tol };
            report(vec![verify_oracle_equivalence(&req)?], vec![])
        }
        Command::PlotData { form, density } => Output::Plot(plot_data_csv(&form.to_form()?, *density)?),
    })
}

fn render(out: &Output, format: Format, command: &Command) -> Result<String> {
    match (out, format) {
        (Output::Plot(s), _) => Ok(s.clone()),
        (Output::Report(r), Format::Json) => r.to_json(),
        (Output::Report(r), Format::Csv) => match command {
            Command::Locate { .. } => r.zeros_csv(),
            _ => r.witnesses_csv(),
        },
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
        }
    }
    Ok(())
}

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_cli(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run_cli(cli: &Cli) -> Result<i32> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let out = pool.install(|| execute(&cli.command))?;
    let text = render(&out, cli.format, &cli.command)?;
    emit(&text, cli.out.as_ref())?;
    Ok(match &out {
        Output::Plot(_) => 0,
        Output::Report(r) => {
            let failing: usize = r.checks.iter().map(|c| c.failing().count()).sum();
            eprintln!("{}: {:?} ({} checks, {failing} failing witnesses)", r.command, r.status, r.checks.len());
            r.exit_code()
        }
    })
}
