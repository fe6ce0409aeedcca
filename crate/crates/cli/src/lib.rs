//! Command dispatch for the `nilorbit` binary.
//!
//! [`dispatch`] is a pure function of the parsed arguments and the input
//! text, returning the exit code and both output streams; `main` only wires
//! it to the process.

use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nilorbit::algebra::{
    center, derived_subalgebra, jordan_holder_flag, lower_central_series, validate_algebra, Diagnostic,
};
use nilorbit::coadjoint::{is_flat_orbit, jump_data, Functional};
use nilorbit::families::{generate, heisenberg_times_abelian, recognize_heisenberg_times_abelian, verify_hmn, FamilySpec};
use nilorbit::format::{parse_scalar_lenient, parse_vector, vector_strings};
use nilorbit::limits::{orbit_limit_set, OneParamFunctional};
use nilorbit::strata::{composition_layers, default_probes, enumerate_strata, generic_stratum, GenericMode, OrderVariant};
use nilorbit::{Error, LieAlgebra};

pub const TOOL: &str = "nilorbit";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "nilorbit", version, about = "Coadjoint-orbit stratification of nilpotent Lie algebras")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Algebra file; read from standard input when absent.
    #[arg(long, short, global = true)]
    pub input: Option<String>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random sample count for strata, layers, sampled index and limits.
    #[arg(long, global = true, default_value_t = 64)]
    pub samples: usize,
    #[arg(long = "order", global = true, value_enum, default_value_t = Order::LexAscending)]
    pub order_variant: Order,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    LexAscending,
    LexDescending,
}

impl From<Order> for OrderVariant {
    fn from(o: Order) -> Self {
        match o {
            Order::LexAscending => OrderVariant::LexAscending,
            Order::LexDescending => OrderVariant::LexDescending,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndexMode {
    Symbolic,
    Sampled,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the Jacobi identity and nilpotency.
    Validate,
    /// Lower central series and nilpotency step.
    Series,
    /// Jordan-Hölder flag refining the lower central series.
    Flag,
    /// Coarse and fine labels of a functional.
    Classify { xi: String },
    /// Realized fine strata (sampled lower bound).
    Strata,
    /// Composition-series layering of the realized strata.
    Layers,
    /// Generic stratum and index.
    Index {
        #[arg(long, value_enum, default_value_t = IndexMode::Symbolic)]
        mode: IndexMode,
    },
    /// Flatness of the orbit through a functional.
    Flat {
        xi: String,
        #[arg(long = "flat-samples", default_value_t = 8)]
        flat_samples: usize,
    },
    /// Emit a family member in the algebra file format.
    Family {
        /// heisenberg D | abelian K | hmn M N | threadlike N
        #[arg(num_args = 1..)]
        spec: Vec<String>,
        /// Multiply by an abelian factor of this dimension.
        #[arg(long = "times-abelian")]
        times_abelian: Option<usize>,
    },
    /// Recognize h_{2d+1} × a_k.
    Recognize,
    /// Check the stated properties of h_{m,n}.
    VerifyHmn { m: usize, n: usize },
    /// Limit of the orbits through a polynomial family ξ(t) as t → t0.
    Limit {
        family: String,
        #[arg(long, default_value = "0")]
        t0: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Series => "series",
            Command::Flag => "flag",
            Command::Classify { .. } => "classify",
            Command::Strata => "strata",
            Command::Layers => "layers",
            Command::Index { .. } => "index",
            Command::Flat { .. } => "flat",
            Command::Family { .. } => "family",
            Command::Recognize => "recognize",
            Command::VerifyHmn { .. } => "verify-hmn",
            Command::Limit { .. } => "limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit status: 1 for mathematical failures, 2 for unusable input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed(_)
        | Error::Parse(_)
        | Error::InvalidFamily(_)
        | Error::DimensionMismatch { .. }
        | Error::ZeroSamples => 2,
        _ => 1,
    }
}

struct Failure {
    code: i32,
    message: String,
    report: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
            report: None,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn read_input(config: &RunConfig, stdin: &mut dyn Read) -> Result<String, Failure> {
    match &config.input {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure {
            code: 2,
            message: format!("cannot read {path}: {e}"),
            report: None,
        }),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Failure {
                code: 2,
                message: format!("cannot read standard input: {e}"),
                report: None,
            })?;
            Ok(s)
        }
    }
}

fn load_algebra(config: &RunConfig, stdin: &mut dyn Read) -> Result<LieAlgebra, Failure> {
    Ok(LieAlgebra::from_json(&read_input(config, stdin)?)?)
}

fn require_valid(g: &LieAlgebra) -> Result<(), Failure> {
    let diags = validate_algebra(g);
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
            report: None,
        })
    }
}

fn parse_functional(s: &str, dim: usize) -> Result<Functional, Failure> {
    let v = parse_vector(s)?;
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() }.into());
    }
    Ok(Functional(v))
}

fn parse_family_coords(s: &str) -> Result<Vec<String>, Failure> {
    let t = s.trim();
    if t.starts_with('[') {
        serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()).into())
    } else {
        Ok(t.split(',').map(|x| x.trim().to_string()).collect())
    }
}

fn envelope(command: &str, config: &RunConfig, g: Option<&LieAlgebra>, result: Value) -> Value {
    json!({
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "algebra_hash": g.map(LieAlgebra::content_hash),
        "seed": config.seed,
        "order_variant": OrderVariant::from(config.order_variant).as_str(),
        "result": result,
    })
}

fn run(cli: &Cli, stdin: &mut dyn Read) -> Result<Value, Failure> {
    let config = &cli.config;
    let variant: OrderVariant = config.order_variant.into();
    let name = cli.command.name();
    match &cli.command {
        Command::Family { spec, times_abelian } => {
            let spec = FamilySpec::parse(spec)?;
            let g = match (spec, times_abelian) {
                (FamilySpec::Heisenberg(d), Some(k)) => heisenberg_times_abelian(d, *k)?,
                (_, Some(k)) => nilorbit::algebra::direct_product(&generate(&spec)?, &generate(&FamilySpec::Abelian(*k))?),
                (_, None) => generate(&spec)?,
            };
            // the algebra file itself, not an envelope
            Ok(Value::String(g.to_json()))
        }
        Command::VerifyHmn { m, n } => {
            let report = verify_hmn(*m, *n, config.seed)?;
            let g = generate(&FamilySpec::Hmn(*m, *n))?;
            let v = envelope(name, config, Some(&g), to_value(&report));
            if report.all_passed {
                Ok(v)
            } else {
                Err(Failure {
                    code: 1,
                    message: format!("h_{{{m},{n}}} verification has failing items"),
                    report: Some(v),
                })
            }
        }
        Command::Validate => {
            let g = load_algebra(config, stdin)?;
            let diags: Vec<Diagnostic> = validate_algebra(&g);
            let result = json!({ "valid": diags.is_empty(), "diagnostics": to_value(&diags), "dim": g.dim() });
            let v = envelope(name, config, Some(&g), result);
            if diags.is_empty() {
                Ok(v)
            } else {
                Err(Failure {
                    code: 1,
                    message: diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
                    report: Some(v),
                })
            }
        }
        cmd => {
            let g = load_algebra(config, stdin)?;
            require_valid(&g)?;
            let result = match cmd {
                Command::Series => {
                    let s = lower_central_series(&g)?;
                    json!({ "step": s.step, "dims": s.dims(), "terms": to_value(&s.terms) })
                }
                Command::Flag => {
                    let f = jordan_holder_flag(&g)?;
                    let vs: Vec<Vec<String>> = f.vectors().iter().map(|r| vector_strings(r)).collect();
                    json!({ "vectors": vs, "is_identity": f.is_identity() })
                }
                Command::Classify { xi } => {
                    let xi = parse_functional(xi, g.dim())?;
                    let flag = jordan_holder_flag(&g)?;
                    let jd = jump_data(&flag, &xi)?;
                    json!({
                        "functional": to_value(&xi),
                        "coarse": to_value(&jd.coarse),
                        "fine": to_value(&jd.fine),
                        "orbit_dim": jd.orbit_dim,
                        "is_character": jd.coarse.is_empty(),
                        "isotropy": to_value(&jd.isotropy),
                    })
                }
                Command::Strata => {
                    let flag = jordan_holder_flag(&g)?;
                    to_value(&enumerate_strata(&flag, config.samples, config.seed, &default_probes(g.dim()))?)
                }
                Command::Layers => {
                    let flag = jordan_holder_flag(&g)?;
                    let strata = enumerate_strata(&flag, config.samples, config.seed, &default_probes(g.dim()))?;
                    to_value(&composition_layers(&flag, &strata, variant)?)
                }
                Command::Index { mode } => {
                    let flag = jordan_holder_flag(&g)?;
                    let mode = match mode {
                        IndexMode::Symbolic => GenericMode::Symbolic,
                        IndexMode::Sampled => GenericMode::Sampled {
                            samples: config.samples,
                            seed: config.seed,
                        },
                    };
                    let r = generic_stratum(&flag, mode)?;
                    let mut v = to_value(&r);
                    v["center_dim"] = json!(center(&g).dim());
                    v["character_space_dim"] = json!(g.dim() - derived_subalgebra(&g).dim());
                    v
                }
                Command::Flat { xi, flat_samples } => {
                    let xi = parse_functional(xi, g.dim())?;
                    to_value(&is_flat_orbit(&g, &xi, *flat_samples, config.seed)?)
                }
                Command::Recognize => {
                    let r = recognize_heisenberg_times_abelian(&g)?;
                    json!({ "recognized": r.is_some(), "result": to_value(&r) })
                }
                Command::Limit { family, t0 } => {
                    let coords = parse_family_coords(family)?;
                    let t0 = parse_scalar_lenient(t0)?;
                    let xi_t = OneParamFunctional::parse(&coords, t0)?;
                    to_value(&orbit_limit_set(&g, &xi_t, config.samples, config.seed)?)
                }
                Command::Validate | Command::Family { .. } | Command::VerifyHmn { .. } => unreachable!(),
            };
            Ok(envelope(name, config, Some(&g), result))
        }
    }
}

/// Renders a JSON report as indented `key: value` lines.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, 0, &mut out);
    out
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
        )),
        Value::Array(a) if a.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) => {
            Some(format!("[{}]", a.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_into(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar_text(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- [{i}]\n"));
                        render_into(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other).unwrap_or_default())),
    }
}

fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => render_text(v),
    }
}

pub fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    match run(cli, stdin) {
        Ok(Value::String(s)) => Outcome {
            code: 0,
            stdout: s,
            stderr: String::new(),
        },
        Ok(v) => Outcome {
            code: 0,
            stdout: render(&v, cli.config.format),
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: f.report.map(|v| render(&v, cli.config.format)).unwrap_or_default(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

/// Parses an argument vector (including the program name) and dispatches;
/// usage errors map to exit code 2.
pub fn run_args<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(&cli, stdin),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}
