//! Command-line front end: temperature curves, densities of states,
//! high-temperature series, and closed-form-vs-estimator cross-checks.
//!
//! The output contract is rigid so runs can be diffed: curve CSVs carry the
//! exact header `beta,T,L,Z,U,Utilde,C`, floats print with 12 significant
//! digits, exact rationals print as `p/q` strings, and one configuration
//! (seed included) reproduces its output byte for byte. Exit status is 0 on
//! success, 1 when a `check` run misses its tolerance, and 2 for unusable
//! arguments.
//!
//! Any flag may instead come from a `--config` file of `key=value` lines
//! whose keys are the long flag names; explicit flags win over the file.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use slicelab::comb::DeltaComb;
use slicelab::curve::{
    beta_grid, exact_curve, sliced_curve, zero_temperature_limits, Spacing,
};
use slicelab::fieldint::{
    auto_channel, monte_carlo_with, quadrature_z, Channel, Insertion,
};
use slicelab::model::{CurveSample, ModelSpec, Spin, ThermoCurve, ZeroTemperatureLimits};
use slicelab::rational::Rational;
use slicelab::{sho, spin_dimer, spin_single};

#[derive(Parser)]
#[command(
    name = "slicelab",
    version,
    about = "Time-slice approximants of exactly solvable models: curves, \
             densities of states, series, and estimator cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate sliced and exact thermodynamic curves over a beta grid
    Curve(CurveArgs),
    /// Emit a density of states: exact comb JSON, or sampled CSV for sho
    Dos(DosArgs),
    /// Exact high-temperature series coefficients of Z_L
    Series(SeriesArgs),
    /// Cross-check the closed forms against a field-integral estimator
    Check(CheckArgs),
}

/// Flags shared by every subcommand: the model and the optional config file.
#[derive(Args)]
struct ModelFlags {
    /// Model family: sho, spin, or dimer
    #[arg(long)]
    model: Option<String>,
    /// Spin magnitude for --model spin, a half-integer like 1/2 [default: 1/2]
    #[arg(long)]
    s: Option<String>,
    /// Exchange coupling J, exact: integer, p/q, or decimal [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    j: Option<String>,
    /// Dimer self-coupling J', exact [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    jprime: Option<String>,
    /// key=value file consulted for any flag not given on the command line
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Slice counts: comma list and inclusive a..b ranges, e.g. 1,3,5 or 1..10
    #[arg(long)]
    l_list: Option<String>,
    /// Smallest beta on the grid [default: 0.2]
    #[arg(long, allow_hyphen_values = true)]
    beta_min: Option<String>,
    /// Largest beta on the grid [default: 5]
    #[arg(long, allow_hyphen_values = true)]
    beta_max: Option<String>,
    /// Number of grid points, endpoints included [default: 100]
    #[arg(long)]
    steps: Option<String>,
    /// Grid spacing: linear or log [default: linear]
    #[arg(long)]
    spacing: Option<String>,
    /// Output format: csv (files under --out-dir) or json (stdout) [default: csv]
    #[arg(long)]
    format: Option<String>,
    /// Directory receiving the CSV files [default: .]
    #[arg(long)]
    out_dir: Option<String>,
}

#[derive(Args)]
struct DosArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Slice count L
    #[arg(long)]
    l: Option<String>,
    /// Upper edge of the sampled energy window (sho only)
    #[arg(long)]
    e_max: Option<String>,
    /// Rows in the sampled window (sho only) [default: 200]
    #[arg(long)]
    steps: Option<String>,
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Slice counts: comma list and inclusive a..b ranges
    #[arg(long)]
    l_list: Option<String>,
    /// Highest beta power to report, at most 8
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    model: ModelFlags,
    /// Slice count L
    #[arg(long)]
    l: Option<String>,
    /// Inverse temperature of the check point
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Estimator to run: quadrature or mc
    #[arg(long)]
    method: Option<String>,
    /// Monte Carlo sample count [default: 100000]
    #[arg(long)]
    samples: Option<String>,
    /// Master seed for the Monte Carlo streams [default: 0]
    #[arg(long)]
    seed: Option<String>,
    /// Gauss-Hermite nodes per field dimension [default: 24]
    #[arg(long)]
    nodes: Option<String>,
    /// Integration contour: auto, real, or mixed [default: auto]
    #[arg(long)]
    channel: Option<String>,
    /// Energy insertion: slice-average or first-slice [default: slice-average]
    #[arg(long)]
    insertion: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Curve(args) => cmd_curve(args).map(|()| ExitCode::SUCCESS),
        Cmd::Dos(args) => cmd_dos(args).map(|()| ExitCode::SUCCESS),
        Cmd::Series(args) => cmd_series(args).map(|()| ExitCode::SUCCESS),
        Cmd::Check(args) => cmd_check(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn es(e: slicelab::Error) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// Flag resolution: command line first, then the config file, then defaults.

/// Every key a config file may define — the union of all long flag names —
/// so a typo fails loudly instead of being silently ignored.
const KNOWN_KEYS: &[&str] = &[
    "model", "s", "j", "jprime", "l", "l-list", "beta", "beta-min", "beta-max",
    "steps", "spacing", "format", "out-dir", "e-max", "order", "method",
    "samples", "seed", "nodes", "channel", "insertion",
];

struct Resolved {
    cfg: HashMap<String, String>,
}

impl Resolved {
    fn new(config: &Option<String>) -> Result<Self, String> {
        let cfg = match config {
            Some(path) => load_config(path)?,
            None => HashMap::new(),
        };
        Ok(Resolved { cfg })
    }

    fn raw(&self, key: &str, flag: &Option<String>) -> Option<String> {
        flag.clone().or_else(|| self.cfg.get(key).cloned())
    }

    fn opt<T: FromStr>(&self, key: &str, flag: &Option<String>) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key, flag) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|e| format!("invalid --{key} value {s:?}: {e}")),
        }
    }

    fn or_default<T: FromStr>(
        &self,
        key: &str,
        flag: &Option<String>,
        default: T,
    ) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(key, flag)?.unwrap_or(default))
    }

    fn required<T: FromStr>(&self, key: &str, flag: &Option<String>) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(key, flag)?
            .ok_or_else(|| format!("--{key} is required"))
    }
}

fn load_config(path: &str) -> Result<HashMap<String, String>, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("{path}:{}: expected key=value, got {line:?}", i + 1));
        };
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(format!("{path}:{}: unknown key {key:?}", i + 1));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

// ---------------------------------------------------------------------------
// Parsed flag values.

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Sho,
    Spin,
    Dimer,
}

/// Model family plus couplings, before a slice count is attached.
struct ModelParams {
    kind: Kind,
    s: Spin,
    j: Rational,
    jprime: Rational,
}

impl ModelParams {
    fn resolved(r: &Resolved, flags: &ModelFlags) -> Result<Self, String> {
        let kind = match r.raw("model", &flags.model).as_deref() {
            None => return Err("--model is required (sho, spin, or dimer)".into()),
            Some("sho") => Kind::Sho,
            Some("spin") => Kind::Spin,
            Some("dimer") => Kind::Dimer,
            Some(other) => {
                return Err(format!("unknown model {other:?} (expected sho, spin, or dimer)"))
            }
        };
        Ok(ModelParams {
            kind,
            s: r.or_default("s", &flags.s, Spin::half())?,
            j: r.or_default("j", &flags.j, Rational::one())?,
            jprime: r.or_default("jprime", &flags.jprime, Rational::zero())?,
        })
    }

    fn name(&self) -> &'static str {
        match self.kind {
            Kind::Sho => "sho",
            Kind::Spin => "spin",
            Kind::Dimer => "dimer",
        }
    }

    fn spec(&self, l: u32) -> ModelSpec {
        match self.kind {
            Kind::Sho => ModelSpec::Sho { l },
            Kind::Spin => ModelSpec::SingleSpin { s: self.s, j: self.j.clone(), l },
            Kind::Dimer => {
                ModelSpec::Dimer { j: self.j.clone(), jprime: self.jprime.clone(), l }
            }
        }
    }

    fn json(&self) -> String {
        match self.kind {
            Kind::Sho => r#"{"kind": "sho"}"#.to_string(),
            Kind::Spin => format!(
                r#"{{"kind": "spin", "s": "{}", "j": "{}"}}"#,
                self.s, self.j
            ),
            Kind::Dimer => format!(
                r#"{{"kind": "dimer", "j": "{}", "jprime": "{}"}}"#,
                self.j, self.jprime
            ),
        }
    }
}

/// Slice-count list: comma-separated entries, each `n` or an inclusive
/// range `a..b`.
struct LList(Vec<u32>);

impl FromStr for LList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for seg in s.split(',') {
            let seg = seg.trim();
            if let Some((a, b)) = seg.split_once("..") {
                let a: u32 = a
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range start in {seg:?}"))?;
                let b: u32 = b
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad range end in {seg:?}"))?;
                if a == 0 {
                    return Err("slice counts start at 1".into());
                }
                if b < a {
                    return Err(format!("range {seg:?} is reversed"));
                }
                out.extend(a..=b);
            } else {
                let l: u32 = seg.parse().map_err(|_| format!("bad slice count {seg:?}"))?;
                if l == 0 {
                    return Err("slice counts start at 1".into());
                }
                out.push(l);
            }
        }
        if out.is_empty() {
            return Err("empty slice-count list".into());
        }
        Ok(LList(out))
    }
}

enum OutFormat {
    Csv,
    Json,
}

impl FromStr for OutFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutFormat::Csv),
            "json" => Ok(OutFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

enum MethodChoice {
    Quadrature,
    Mc,
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quadrature" => Ok(MethodChoice::Quadrature),
            "mc" => Ok(MethodChoice::Mc),
            other => Err(format!("unknown method '{other}' (expected quadrature or mc)")),
        }
    }
}

enum ChannelChoice {
    Auto,
    Fixed(Channel),
}

impl FromStr for ChannelChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(ChannelChoice::Auto),
            other => Channel::from_str(other)
                .map(ChannelChoice::Fixed)
                .map_err(|_| format!("unknown channel '{other}' (expected auto, real, or mixed)")),
        }
    }
}

// ---------------------------------------------------------------------------
// Number and JSON formatting.

/// Decimal with 12 significant digits: fixed notation while the exponent
/// fits (−4 ≤ e < 12), scientific otherwise, trailing zeros trimmed.
fn g12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("float exponent");
    if !(-4..12).contains(&exp) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    } else {
        let fixed = format!("{x:.*}", (11 - exp).max(0) as usize);
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    }
}

fn opt_g12(v: Option<f64>) -> String {
    v.map(g12).unwrap_or_else(|| "null".to_string())
}

fn sample_json(s: &CurveSample) -> String {
    format!(
        r#"{{"beta": {}, "T": {}, "Z": {}, "U": {}, "Utilde": {}, "C": {}}}"#,
        g12(s.beta),
        g12(s.t),
        g12(s.z),
        g12(s.u),
        opt_g12(s.utilde),
        g12(s.c),
    )
}

fn push_samples(out: &mut String, samples: &[CurveSample], indent: &str) {
    for (i, s) in samples.iter().enumerate() {
        let comma = if i + 1 == samples.len() { "" } else { "," };
        writeln!(out, "{indent}{}{comma}", sample_json(s)).unwrap();
    }
}

fn limits_json(limits: &ZeroTemperatureLimits) -> String {
    format!(
        r#"{{"U": {}, "Utilde": {}, "C": {}}}"#,
        g12(limits.u),
        opt_g12(limits.utilde),
        g12(limits.c),
    )
}

// ---------------------------------------------------------------------------
// curve

fn cmd_curve(args: CurveArgs) -> Result<(), String> {
    let r = Resolved::new(&args.model.config)?;
    let params = ModelParams::resolved(&r, &args.model)?;
    let LList(ls) = r.required("l-list", &args.l_list)?;
    let beta_min: f64 = r.or_default("beta-min", &args.beta_min, 0.2)?;
    let beta_max: f64 = r.or_default("beta-max", &args.beta_max, 5.0)?;
    let steps: usize = r.or_default("steps", &args.steps, 100)?;
    let spacing: Spacing = r.or_default("spacing", &args.spacing, Spacing::Linear)?;
    let format: OutFormat = r.or_default("format", &args.format, OutFormat::Csv)?;
    let out_dir: String = r.or_default("out-dir", &args.out_dir, ".".to_string())?;

    let betas = beta_grid(beta_min, beta_max, steps, spacing).map_err(es)?;
    let mut curves = Vec::with_capacity(ls.len());
    for &l in &ls {
        let spec = params.spec(l);
        spec.validate().map_err(es)?;
        let curve = sliced_curve(&spec, &betas).map_err(es)?;
        let limits = zero_temperature_limits(&spec).map_err(es)?;
        curves.push((l, curve, limits));
    }
    // The unsliced reference ignores L; any entry of the list names it.
    let exact = exact_curve(&params.spec(ls[0]), &betas).map_err(es)?;

    match format {
        OutFormat::Csv => {
            let dir = PathBuf::from(&out_dir);
            fs::create_dir_all(&dir)
                .map_err(|e| format!("cannot create directory {out_dir}: {e}"))?;
            for (l, curve, _) in &curves {
                let path = dir.join(format!("curve_{}_L{l}.csv", params.name()));
                fs::write(&path, curve_csv(curve, Some(*l)))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                println!("wrote {}", path.display());
            }
            let path = dir.join(format!("curve_{}_exact.csv", params.name()));
            fs::write(&path, curve_csv(&exact, None))
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            println!("wrote {}", path.display());
        }
        OutFormat::Json => {
            print!(
                "{}",
                curve_json(&params, (beta_min, beta_max, steps, spacing), &curves, &exact)
            );
        }
    }
    Ok(())
}

fn curve_csv(curve: &ThermoCurve, l: Option<u32>) -> String {
    let mut out = String::from("beta,T,L,Z,U,Utilde,C\n");
    let l_cell = l.map(|v| v.to_string()).unwrap_or_default();
    for s in &curve.samples {
        let utilde = s.utilde.map(g12).unwrap_or_default();
        writeln!(
            out,
            "{},{},{l_cell},{},{},{utilde},{}",
            g12(s.beta),
            g12(s.t),
            g12(s.z),
            g12(s.u),
            g12(s.c),
        )
        .unwrap();
    }
    out
}

fn curve_json(
    params: &ModelParams,
    grid: (f64, f64, usize, Spacing),
    curves: &[(u32, ThermoCurve, ZeroTemperatureLimits)],
    exact: &ThermoCurve,
) -> String {
    let (beta_min, beta_max, steps, spacing) = grid;
    let spacing = match spacing {
        Spacing::Linear => "linear",
        Spacing::Log => "log",
    };
    let mut out = String::from("{\n");
    writeln!(out, "  \"command\": \"curve\",").unwrap();
    writeln!(out, "  \"model\": {},", params.json()).unwrap();
    writeln!(
        out,
        "  \"grid\": {{\"beta_min\": {}, \"beta_max\": {}, \"steps\": {steps}, \"spacing\": \"{spacing}\"}},",
        g12(beta_min),
        g12(beta_max),
    )
    .unwrap();
    out.push_str("  \"curves\": [\n");
    for (i, (l, curve, limits)) in curves.iter().enumerate() {
        out.push_str("    {\n");
        writeln!(out, "      \"l\": {l},").unwrap();
        writeln!(out, "      \"limits\": {},", limits_json(limits)).unwrap();
        out.push_str("      \"samples\": [\n");
        push_samples(&mut out, &curve.samples, "        ");
        out.push_str("      ]\n");
        out.push_str(if i + 1 == curves.len() { "    }\n" } else { "    },\n" });
    }
    out.push_str("  ],\n");
    out.push_str("  \"exact\": {\n    \"samples\": [\n");
    push_samples(&mut out, &exact.samples, "      ");
    out.push_str("    ]\n  }\n}\n");
    out
}

// ---------------------------------------------------------------------------
// dos

fn cmd_dos(args: DosArgs) -> Result<(), String> {
    let r = Resolved::new(&args.model.config)?;
    let params = ModelParams::resolved(&r, &args.model)?;
    let l: u32 = r.required("l", &args.l)?;
    params.spec(l).validate().map_err(es)?;

    match params.kind {
        Kind::Sho => {
            let e_max: f64 = r.opt("e-max", &args.e_max)?.ok_or_else(|| {
                "--e-max is required for the sampled oscillator density".to_string()
            })?;
            let steps: usize = r.or_default("steps", &args.steps, 200)?;
            if !(e_max > 0.0) || !e_max.is_finite() {
                return Err(format!("--e-max must be positive, got {e_max}"));
            }
            if steps < 2 {
                return Err(format!("--steps must be at least 2, got {steps}"));
            }
            let mut out = String::from("E,g\n");
            for i in 0..steps {
                let e = e_max * i as f64 / (steps - 1) as f64;
                writeln!(out, "{},{}", g12(e), g12(sho::dos(l, e).map_err(es)?)).unwrap();
            }
            print!("{out}");
        }
        Kind::Spin => {
            let comb = spin_single::dos(params.s, &params.j, l);
            print!("{}", comb_json(&params, l, &comb));
        }
        Kind::Dimer => {
            let comb = spin_dimer::dos(&params.j, &params.jprime, l).map_err(es)?;
            print!("{}", comb_json(&params, l, &comb));
        }
    }
    Ok(())
}

fn comb_json(params: &ModelParams, l: u32, comb: &DeltaComb) -> String {
    let mut out = String::from("{\n");
    writeln!(out, "  \"command\": \"dos\",").unwrap();
    writeln!(out, "  \"model\": {},", params.json()).unwrap();
    writeln!(out, "  \"l\": {l},").unwrap();
    out.push_str("  \"terms\": [\n");
    let n = comb.terms().len();
    for (i, term) in comb.terms().iter().enumerate() {
        let comma = if i + 1 == n { "" } else { "," };
        writeln!(
            out,
            r#"    {{"center": "{}", "order": {}, "coeff": "{}"}}{comma}"#,
            term.center, term.order, term.coeff,
        )
        .unwrap();
    }
    out.push_str("  ]\n}\n");
    out
}

// ---------------------------------------------------------------------------
// series

fn cmd_series(args: SeriesArgs) -> Result<(), String> {
    let r = Resolved::new(&args.model.config)?;
    let params = ModelParams::resolved(&r, &args.model)?;
    let LList(ls) = r.required("l-list", &args.l_list)?;
    let order: usize = r.required("order", &args.order)?;
    if order > 8 {
        return Err(format!("--order is capped at 8, got {order}"));
    }

    let mut rows: Vec<(u32, Vec<Rational>)> = Vec::with_capacity(ls.len());
    for &l in &ls {
        params.spec(l).validate().map_err(es)?;
        let coeffs = match params.kind {
            Kind::Sho => {
                return Err("the oscillator approximant diverges as 1/beta at high \
                            temperature; it has no beta = 0 series"
                    .into())
            }
            Kind::Spin => spin_single::zl_exppoly(params.s, &params.j, l).taylor(order),
            Kind::Dimer => {
                spin_dimer::series(&params.j, &params.jprime, l, order).map_err(es)?
            }
        };
        rows.push((l, coeffs));
    }

    let mut out = String::from("{\n");
    writeln!(out, "  \"command\": \"series\",").unwrap();
    writeln!(out, "  \"model\": {},", params.json()).unwrap();
    writeln!(out, "  \"order\": {order},").unwrap();
    out.push_str("  \"rows\": [\n");
    for (i, (l, coeffs)) in rows.iter().enumerate() {
        let list: Vec<String> = coeffs.iter().map(|c| format!("\"{c}\"")).collect();
        let comma = if i + 1 == rows.len() { "" } else { "," };
        writeln!(
            out,
            r#"    {{"l": {l}, "coefficients": [{}]}}{comma}"#,
            list.join(", "),
        )
        .unwrap();
    }
    out.push_str("  ]\n}\n");
    print!("{out}");
    Ok(())
}

// ---------------------------------------------------------------------------
// check

struct CheckRow {
    quantity: &'static str,
    closed: f64,
    estimate: f64,
    std_error: f64,
    sigma: Option<f64>,
    criterion: &'static str,
    pass: bool,
}

fn cmd_check(args: CheckArgs) -> Result<ExitCode, String> {
    let r = Resolved::new(&args.model.config)?;
    let params = ModelParams::resolved(&r, &args.model)?;
    let l: u32 = r.required("l", &args.l)?;
    let beta: f64 = r.required("beta", &args.beta)?;
    let method: MethodChoice = r.required("method", &args.method)?;
    let channel: ChannelChoice = r.or_default("channel", &args.channel, ChannelChoice::Auto)?;

    let spec = params.spec(l);
    spec.validate().map_err(es)?;
    let (z_closed, u_closed) = match &spec {
        ModelSpec::Sho { .. } => {
            return Err("check drives the field-integral estimators, which exist for \
                        the spin models only"
                .into())
        }
        ModelSpec::SingleSpin { s, j, l } => (
            spin_single::zl(*s, j, *l, beta).map_err(es)?,
            spin_single::ul(*s, j, *l, beta).map_err(es)?,
        ),
        ModelSpec::Dimer { j, jprime, l } => (
            spin_dimer::zl(j, jprime, *l, beta).map_err(es)?,
            spin_dimer::ul(j, jprime, *l, beta).map_err(es)?,
        ),
    };

    let report = match method {
        MethodChoice::Quadrature => {
            if let ChannelChoice::Fixed(Channel::Mixed) = channel {
                return Err("quadrature integrates the real channel only; use \
                            --method mc for mixed-channel runs"
                    .into());
            }
            let nodes: usize = r.or_default("nodes", &args.nodes, 24)?;
            let est = quadrature_z(&spec, beta, nodes).map_err(es)?;
            let rel = ((est.value - z_closed) / z_closed).abs();
            Report {
                method: "quadrature",
                channel: Channel::Real,
                n_samples: est.n_samples,
                seed: None,
                avg_sign: None,
                rows: vec![CheckRow {
                    quantity: "Z",
                    closed: z_closed,
                    estimate: est.value,
                    std_error: 0.0,
                    sigma: None,
                    criterion: "relative error <= 1e-6",
                    pass: rel <= 1e-6,
                }],
            }
        }
        MethodChoice::Mc => {
            let samples: u64 = r.or_default("samples", &args.samples, 100_000)?;
            let seed: u64 = r.or_default("seed", &args.seed, 0)?;
            let insertion: Insertion =
                r.or_default("insertion", &args.insertion, Insertion::SliceAverage)?;
            let chan = match channel {
                ChannelChoice::Auto => auto_channel(&spec).map_err(es)?,
                ChannelChoice::Fixed(c) => c,
            };
            let run =
                monte_carlo_with(&spec, beta, samples, seed, chan, insertion).map_err(es)?;
            let rows = [("Z", z_closed, &run.z), ("U", u_closed, &run.u)]
                .into_iter()
                .map(|(quantity, closed, est)| {
                    let err = (est.value - closed).abs();
                    CheckRow {
                        quantity,
                        closed,
                        estimate: est.value,
                        std_error: est.std_error,
                        sigma: if est.std_error > 0.0 {
                            Some(err / est.std_error)
                        } else if err == 0.0 {
                            Some(0.0)
                        } else {
                            None
                        },
                        criterion: "within 3 sigma",
                        pass: err <= 3.0 * est.std_error,
                    }
                })
                .collect();
            Report {
                method: "mc",
                channel: run.channel,
                n_samples: run.z.n_samples,
                seed: Some(seed),
                avg_sign: run.z.avg_sign,
                rows,
            }
        }
    };

    let pass = report.rows.iter().all(|row| row.pass);
    print!("{}", report.json(&params, l, beta, pass));
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

struct Report {
    method: &'static str,
    channel: Channel,
    n_samples: u64,
    seed: Option<u64>,
    avg_sign: Option<f64>,
    rows: Vec<CheckRow>,
}

impl Report {
    fn json(&self, params: &ModelParams, l: u32, beta: f64, pass: bool) -> String {
        let mut out = String::from("{\n");
        writeln!(out, "  \"command\": \"check\",").unwrap();
        writeln!(out, "  \"model\": {},", params.json()).unwrap();
        writeln!(out, "  \"l\": {l},").unwrap();
        writeln!(out, "  \"beta\": {},", g12(beta)).unwrap();
        writeln!(out, "  \"method\": \"{}\",", self.method).unwrap();
        writeln!(out, "  \"channel\": \"{}\",", self.channel).unwrap();
        writeln!(out, "  \"n_samples\": {},", self.n_samples).unwrap();
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_else(|| "null".into());
        writeln!(out, "  \"seed\": {seed},").unwrap();
        writeln!(out, "  \"avg_sign\": {},", opt_g12(self.avg_sign)).unwrap();
        out.push_str("  \"checks\": [\n");
        for (i, row) in self.rows.iter().enumerate() {
            let comma = if i + 1 == self.rows.len() { "" } else { "," };
            let sigma = row
                .sigma
                .map(g12)
                .unwrap_or_else(|| "null".to_string());
            writeln!(
                out,
                r#"    {{"quantity": "{}", "closed_form": {}, "estimate": {}, "std_error": {}, "error": {}, "sigma_distance": {}, "criterion": "{}", "pass": {}}}{comma}"#,
                row.quantity,
                g12(row.closed),
                g12(row.estimate),
                g12(row.std_error),
                g12(row.estimate - row.closed),
                sigma,
                row.criterion,
                row.pass,
            )
            .unwrap();
        }
        out.push_str("  ],\n");
        writeln!(out, "  \"pass\": {pass}").unwrap();
        out.push_str("}\n");
        out
    }
}
