//! The `transcend` command line.
//!
//! Exit status: 0 when every check verified, 1 when a check failed or was
//! inconclusive, 2 for invalid input or a violated hypothesis. Errors are
//! written to stderr as `{"error": kind, "message": text}`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::arith::{decimal_digits, decimal_expansion, Limits, RationalExponent};
use crate::convergents::{denominator_bound_holds, partial_sum, shrink_factor};
use crate::enclosure::enclose;
use crate::error::{Error, Result};
use crate::json::to_canonical_string;
use crate::measure::{self, PolynomialInt};
use crate::roth::{self, Certificate};
use crate::sequence::{check_growth, check_sandwich, SequenceSpec, Series, Window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Column order of `analyze` CSV output.
pub const ANALYZE_COLUMNS: [&str; 9] = [
    "n",
    "digits",
    "growth",
    "sandwich_lower",
    "sandwich_upper",
    "denominator_bound",
    "qn_exponent_bound",
    "q_growth",
    "log10_shrink",
];

/// Column order of `search --rows` CSV output.
pub const SEARCH_COLUMNS: [&str; 4] = ["coeffs", "lower", "upper", "lower_decimal"];

#[derive(Debug, Parser)]
#[command(name = "transcend", version, about = "Exact verification of transcendence criteria for Σ 1/a_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-index hypothesis and lemma checks as CSV (or JSON).
    Analyze(Opts),
    /// Emit (or revalidate) a Roth-criterion certificate.
    Certify(Opts),
    /// Verify the measure bound for one polynomial.
    Measure(Opts),
    /// Exhaustive minimum of |P(θ)| over bounded polynomials.
    Search(Opts),
    /// Print a_n, or θ_n with --theta.
    Term(Opts),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// SequenceSpec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Exponent α as "p/q".
    #[arg(long)]
    pub alpha: Option<String>,
    /// Exponent k as "p/q".
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub degree: Option<u64>,
    #[arg(long)]
    pub height: Option<String>,
    #[arg(long)]
    pub from: Option<u64>,
    #[arg(long)]
    pub to: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = Limits::default().digit_budget)]
    pub digit_budget: u64,
    #[arg(long, default_value_t = Limits::default().enum_cap)]
    pub enum_cap: u64,
    #[arg(long, default_value_t = 8)]
    pub max_refine: u32,
    /// Certificate to recompute and compare byte for byte.
    #[arg(long)]
    pub revalidate: Option<PathBuf>,
    /// Polynomial coefficients e0,e1,...,ed (measure).
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Enclosure depth M (search).
    #[arg(long)]
    pub depth: Option<u64>,
    /// Per-polynomial CSV destination (search).
    #[arg(long)]
    pub rows: Option<PathBuf>,
    /// Index for `term`.
    #[arg(long)]
    pub n: Option<u64>,
    /// Print θ_n instead of a_n (term).
    #[arg(long)]
    pub theta: bool,
    /// Decimal places for --theta.
    #[arg(long, default_value_t = 60)]
    pub digits: usize,
}

impl Opts {
    fn limits(&self) -> Limits {
        Limits {
            digit_budget: self.digit_budget,
            enum_cap: self.enum_cap,
        }
    }

    fn series(&self) -> Result<Series> {
        let path = self
            .spec
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("--spec is required".into()))?;
        Ok(Series::new(load_spec(path)?, self.limits()))
    }

    fn alpha(&self) -> Result<RationalExponent> {
        self.alpha
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("--alpha is required".into()))?
            .parse()
    }

    fn k(&self) -> Result<Option<RationalExponent>> {
        self.k.as_deref().map(str::parse).transpose()
    }

    fn window(&self, default_to: u64) -> Result<Window> {
        Window::new(self.from.unwrap_or(1), self.to.unwrap_or(default_to))
    }

    fn height(&self) -> Result<Option<BigUint>> {
        self.height
            .as_deref()
            .map(|h| {
                h.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad --height {h:?}")))
            })
            .transpose()
    }
}

pub fn load_spec(path: &Path) -> Result<SequenceSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Result of a subcommand: the text to emit and whether every check passed.
struct Output {
    body: String,
    ok: bool,
}

#[derive(Serialize)]
struct ErrorObject<'a> {
    error: &'a str,
    message: String,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::WitnessFailed { .. } | Error::Inconclusive { .. } => EXIT_FAILED,
        _ => EXIT_INVALID,
    }
}

/// Parse `args` and run; output goes to `stdout` (or `--out`), errors to `stderr`.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_INVALID;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    run(&cli, stdout, stderr)
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (opts, result) = match &cli.command {
        Command::Analyze(o) => (o, analyze(o)),
        Command::Certify(o) => (o, certify(o)),
        Command::Measure(o) => (o, measure_cmd(o)),
        Command::Search(o) => (o, search(o)),
        Command::Term(o) => (o, term(o)),
    };
    match result.and_then(|out| emit(opts, &out.body, stdout).map(|_| out.ok)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(err) => {
            let obj = ErrorObject {
                error: err.kind(),
                message: err.to_string(),
            };
            let _ = writeln!(stderr, "{}", serde_json::to_string(&obj).unwrap_or_default());
            exit_code_for(&err)
        }
    }
}

fn emit(opts: &Opts, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match &opts.out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| Error::Internal(format!("stdout: {e}"))),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnalyzeRow {
    n: u64,
    digits: usize,
    growth: bool,
    sandwich_lower: Option<bool>,
    sandwich_upper: Option<bool>,
    denominator_bound: bool,
    qn_exponent_bound: Option<bool>,
    q_growth: Option<bool>,
    log10_shrink: f64,
}

fn cell(b: Option<bool>) -> String {
    b.map(|b| if b { "pass" } else { "fail" }.to_string())
        .unwrap_or_default()
}

fn analyze(o: &Opts) -> Result<Output> {
    let series = o.series()?;
    let alpha = o.alpha()?;
    let k = o.k()?;
    let window = o.window(5)?;
    let growth = check_growth(&series, &alpha, window)?;
    let sandwich = k
        .map(|k| check_sandwich(&series, &alpha, &k, window))
        .transpose()?;

    let mut rows = Vec::new();
    for (i, n) in window.iter().enumerate() {
        let g = &growth.per_index[i];
        let s = sandwich.as_ref().map(|r| &r.per_index[i]);
        let qn = k
            .map(|_| measure::qn_exponent_bound_holds(&series, &alpha, n))
            .transpose()?;
        let qg = k
            .map(|k| measure::q_growth_holds(&series, &alpha, &k, n))
            .transpose()?;
        rows.push(AnalyzeRow {
            n,
            digits: decimal_digits(&series.term(n)?),
            growth: g.lower_holds,
            sandwich_lower: s.map(|c| c.lower_holds),
            sandwich_upper: s.and_then(|c| c.upper_holds),
            denominator_bound: denominator_bound_holds(&series, n)?,
            qn_exponent_bound: qn,
            q_growth: qg,
            log10_shrink: shrink_factor(&series, &alpha, n)?.log_approx,
        });
    }
    let ok = rows.iter().all(|r| {
        r.growth
            && r.denominator_bound
            && [r.sandwich_lower, r.sandwich_upper, r.qn_exponent_bound, r.q_growth]
                .iter()
                .all(|c| c.unwrap_or(true))
    });

    let body = match o.format.unwrap_or(Format::Csv) {
        Format::Json => to_canonical_string(&rows)?,
        Format::Csv => {
            let mut s = ANALYZE_COLUMNS.join(",");
            s.push('\n');
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{:.6}\n",
                    r.n,
                    r.digits,
                    cell(Some(r.growth)),
                    cell(r.sandwich_lower),
                    cell(r.sandwich_upper),
                    cell(Some(r.denominator_bound)),
                    cell(r.qn_exponent_bound),
                    cell(r.q_growth),
                    r.log10_shrink
                ));
            }
            s
        }
    };
    Ok(Output { body, ok })
}

fn certify(o: &Opts) -> Result<Output> {
    if let Some(path) = &o.revalidate {
        let original = fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        let cert: Certificate = serde_json::from_str(&original)?;
        let series = Series::new(cert.spec.clone(), o.limits());
        let fresh = roth::certify(&series, &cert.alpha, cert.window()?)?;
        let body = to_canonical_string(&fresh)?;
        return Ok(Output {
            ok: body == original,
            body,
        });
    }
    let series = o.series()?;
    let alpha = o.alpha()?;
    let cert = roth::certify(&series, &alpha, o.window(5)?)?;
    Ok(Output {
        body: to_canonical_string(&cert)?,
        ok: true,
    })
}

pub fn parse_coeffs(text: &str) -> Result<PolynomialInt> {
    let text = text.trim();
    if text.starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    let coeffs = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    PolynomialInt::new(coeffs)
}

fn measure_cmd(o: &Opts) -> Result<Output> {
    let series = o.series()?;
    let alpha = o.alpha()?;
    let k = o
        .k()?
        .ok_or_else(|| Error::InvalidParameter("--k is required".into()))?;
    let poly = parse_coeffs(
        o.poly
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("--poly is required".into()))?,
    )?;
    let d = o.degree.unwrap_or(poly.degree().max(2));
    let h = o.height()?.unwrap_or_else(|| poly.height());
    let ev = measure::verify_measure(&series, &alpha, &k, &poly, d, &h, o.max_refine)?;
    Ok(Output {
        body: to_canonical_string(&ev)?,
        ok: ev.verified,
    })
}

fn search(o: &Opts) -> Result<Output> {
    let series = o.series()?;
    let d = o.degree.unwrap_or(2);
    let h: u64 = match o.height()? {
        Some(h) => u64::try_from(&h).map_err(|_| Error::EnumerationTooLarge {
            count: "beyond u64".into(),
            cap: o.enum_cap,
        })?,
        None => 1,
    };
    let enc = enclose(&series, o.depth.unwrap_or(4))?;
    let result = measure::brute_force_min(&series, d, h, &enc)?;

    let target = match (o.alpha.is_some(), o.k()?) {
        (true, Some(k)) if d >= 2 => {
            Some(measure::bound(d, &BigUint::from(h), &o.alpha()?, &k)?)
        }
        _ => None,
    };
    let beats_target = target
        .as_ref()
        .map(|b| b.is_exceeded_by(&result.min_lower, &series))
        .transpose()?;
    let ok = result.min_lower > num_rational::BigRational::default() && beats_target.unwrap_or(true);

    let rows_csv = || -> Result<String> {
        let mut s = SEARCH_COLUMNS.join(",");
        s.push('\n');
        for b in measure::enumerate_brackets(&series, d, h, &enc)? {
            let coeffs: Vec<String> = b.coeffs.iter().map(i64::to_string).collect();
            s.push_str(&format!(
                "\"{}\",{},{},{}\n",
                coeffs.join(" "),
                b.lower,
                b.upper,
                decimal_expansion(&b.lower, 12)
            ));
        }
        Ok(s)
    };
    if let Some(path) = &o.rows {
        fs::write(path, rows_csv()?)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
    }

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Report<'a> {
        version: u32,
        spec: &'a SequenceSpec,
        result: &'a measure::SearchResult,
        bound: Option<&'a measure::MeasureBound>,
        min_lower_exceeds_bound: Option<bool>,
    }
    let body = match o.format.unwrap_or(Format::Json) {
        Format::Csv => rows_csv()?,
        Format::Json => to_canonical_string(&Report {
            version: 1,
            spec: series.spec(),
            result: &result,
            bound: target.as_ref(),
            min_lower_exceeds_bound: beats_target,
        })?,
    };
    Ok(Output { body, ok })
}

fn term(o: &Opts) -> Result<Output> {
    let series = o.series()?;
    let n = o
        .n
        .ok_or_else(|| Error::InvalidParameter("--n is required".into()))?;
    let body = if o.theta {
        let c = partial_sum(&series, n)?;
        format!("{}/{}\n{}\n", c.p, c.q, decimal_expansion(&c.value(), o.digits))
    } else {
        format!("{}\n", series.term(n)?)
    };
    Ok(Output { body, ok: true })
}
