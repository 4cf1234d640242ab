//! Command-line front end. `run` parses arguments, dispatches and returns
//! the exit code together with what should go to stdout and stderr.

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use itertools::Itertools;
use serde::Serialize;
use serde_json::{json, Value};

use crate::angle::aomoto::{calibration_report, product_probes};
use crate::angle::{prism_angle_bound_check, AngleEngine, Policy};
use crate::ehrhart::{fit_ehrhart, hstar, reciprocity_check};
use crate::error::{Error, Result};
use crate::families::{
    asymptotic_vertex_sum_scan, catalogue, delta_uniform, permutation_simplices, Family,
};
use crate::io::{digest, polytope_from_json, polytope_to_json, quasi_json, read_input};
use crate::measured::Measured;
use crate::polytope::{PointedCone, Polytope};
use crate::rational::{parse_rational, to_f64, Rational};
use crate::solidpoly::{
    brianchon_gram_residual, check_solid_numerator, fit_solid, fit_solid_polynomial,
    parity_support, period_report, solid_numerator, unimodality_report, SolidAngleSum, SolidFit,
};
use crate::valuation::{
    builtin, g_numerator, monotonicity_compare, parallelepiped_numerator, Indicator, Solid,
};

#[derive(Parser, Debug)]
#[command(
    name = "solidangle",
    version,
    about = "Solid-angle polynomials, Ehrhart quasipolynomials and valuation numerators"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Angle engine policy: exact, aomoto or mc.
    #[arg(long, global = true, env = "SOLIDANGLE_POLICY", default_value = "exact")]
    policy: Policy,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    mc_samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for identities that hold exactly.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Machine-readable output (the default except for `verify`).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Add wall time to the report. Reports are otherwise byte-identical
    /// across runs.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args, Debug, Clone, Default)]
struct FamilyParams {
    #[arg(long, allow_hyphen_values = true)]
    h: Option<i64>,
    /// Comma-separated heights.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    hs: Vec<i64>,
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated permutation of 0..d.
    #[arg(long, value_delimiter = ',')]
    perm: Vec<usize>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Polytope JSON file, or `-` for stdin.
    #[arg(long, conflicts_with = "family")]
    file: Option<String>,
    /// Built-in family name.
    #[arg(long)]
    family: Option<String>,
    #[command(flatten)]
    params: FamilyParams,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit the solid-angle (quasi)polynomial.
    Solidpoly {
        #[command(flatten)]
        input: Input,
        /// Fit every degree instead of the parity-allowed ones.
        #[arg(long)]
        full: bool,
    },
    /// Ehrhart (quasi)polynomial.
    Ehrhart(Input),
    /// h*-vector of a lattice polytope.
    Hstar(Input),
    /// Numerator of the solid-angle generating function.
    Numerator(Input),
    /// Sum of vertex solid angles.
    Vertexsum(Input),
    /// Alternating sum of face angles.
    GramCheck(Input),
    /// Periods of the solid-angle quasipolynomial.
    Period(Input),
    /// Numerators and monotonicity for a chosen valuation.
    #[command(subcommand)]
    Valuation(ValuationCommand),
    /// Emit a built-in polytope as JSON, or `scan` for vertex-sum asymptotics.
    Family {
        name: String,
        #[command(flatten)]
        params: FamilyParams,
    },
    /// Check the identities on the built-in families.
    Verify,
    /// Solid angles of single cones and series calibration.
    #[command(subcommand)]
    Angle(AngleCommand),
}

#[derive(Subcommand, Debug)]
enum ValuationCommand {
    Numerator {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "solid")]
        val: String,
    },
    /// Compare numerators of P ⊆ Q.
    Monotone {
        inner: String,
        outer: String,
        #[arg(long, default_value = "solid")]
        val: String,
    },
    /// Numerator from the lattice points of the half-open parallelepiped.
    PiNumerator {
        simplex: String,
        #[arg(long, default_value = "solid")]
        val: String,
    },
}

#[derive(Subcommand, Debug)]
enum AngleCommand {
    /// Solid angle of a polytope at a point.
    Point {
        #[command(flatten)]
        input: Input,
        /// Comma-separated rational coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Normalized angle of the cone spanned by generators.
    Cone {
        /// Generators separated by `;`, coordinates by `,`.
        #[arg(long, allow_hyphen_values = true)]
        generators: String,
    },
    /// Orthant normalization table for the series conventions.
    Calibrate,
    /// Corner angles of the prism over a cone.
    Prism {
        #[arg(long, allow_hyphen_values = true)]
        generators: String,
    },
}

/// What the binary prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Report {
    command: String,
    input: Option<Value>,
    policy: Policy,
    seed: u64,
    mc_samples: u64,
    output: Value,
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<u128>,
}

struct Computed {
    input: Option<Value>,
    output: Value,
    violations: Vec<String>,
}

impl Computed {
    fn new(input: Option<Value>, output: Value) -> Self {
        Self {
            input,
            output,
            violations: Vec::new(),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    let g = cli.global.clone();
    let start = Instant::now();
    let engine = AngleEngine {
        policy: g.policy,
        mc_samples: g.mc_samples,
        seed: g.seed,
        ..AngleEngine::default()
    };
    if let Command::Family { name, params } = &cli.command {
        if name != "scan" {
            return match family_from(name, params).and_then(|f| f.build()) {
                Ok(p) => Outcome { code: 0, stdout: polytope_to_json(&p) + "\n", stderr: String::new() },
                Err(e) => failure(e),
            };
        }
    }
    if let Command::Verify = cli.command {
        let rows = verify(&engine, g.tol);
        let code = if rows.iter().all(|r| r.pass) { 0 } else { 2 };
        let stdout = if g.json || g.pretty {
            format_json(&json!({ "command": "verify", "policy": g.policy, "seed": g.seed, "checks": rows }), g.pretty)
        } else {
            verify_table(&rows)
        };
        return Outcome { code, stdout, stderr: String::new() };
    }
    let name = command_name(&cli.command);
    match dispatch(cli.command, &engine, g.tol) {
        Ok(c) => {
            let code = if c.violations.is_empty() { 0 } else { 2 };
            let report = Report {
                command: name,
                input: c.input,
                policy: g.policy,
                seed: g.seed,
                mc_samples: g.mc_samples,
                output: c.output,
                violations: c.violations,
                wall_time_ms: g.timing.then(|| start.elapsed().as_millis()),
            };
            Outcome {
                code,
                stdout: format_json(&serde_json::to_value(report).expect("plain data"), g.pretty),
                stderr: String::new(),
            }
        }
        Err(e) => failure(e),
    }
}

fn failure(e: Error) -> Outcome {
    let code = match e {
        Error::Accuracy(_) => 2,
        _ => 1,
    };
    Outcome { code, stdout: String::new(), stderr: format!("error: {e}\n") }
}

fn format_json(v: &Value, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("plain data");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Solidpoly { .. } => "solidpoly",
        Command::Ehrhart(_) => "ehrhart",
        Command::Hstar(_) => "hstar",
        Command::Numerator(_) => "numerator",
        Command::Vertexsum(_) => "vertexsum",
        Command::GramCheck(_) => "gram-check",
        Command::Period(_) => "period",
        Command::Valuation(ValuationCommand::Numerator { .. }) => "valuation numerator",
        Command::Valuation(ValuationCommand::Monotone { .. }) => "valuation monotone",
        Command::Valuation(ValuationCommand::PiNumerator { .. }) => "valuation pi-numerator",
        Command::Family { .. } => "family scan",
        Command::Verify => "verify",
        Command::Angle(AngleCommand::Point { .. }) => "angle point",
        Command::Angle(AngleCommand::Cone { .. }) => "angle cone",
        Command::Angle(AngleCommand::Calibrate) => "angle calibrate",
        Command::Angle(AngleCommand::Prism { .. }) => "angle prism",
    }
    .to_string()
}

fn rational_param(s: &Option<String>, flag: &str) -> Result<Rational> {
    parse_rational(s.as_deref().ok_or_else(|| Error::Validation(format!("missing --{flag}")))?)
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| Error::Validation(format!("family {family} needs --{flag}")))
}

fn family_from(name: &str, p: &FamilyParams) -> Result<Family> {
    Ok(match name {
        "reeve" => Family::Reeve { h: need(p.h, "h", name)? },
        "permutation" => Family::PermutationSimplex {
            perm: if p.perm.is_empty() {
                (0..need(p.d, "d", name)?).collect()
            } else {
                p.perm.clone()
            },
        },
        "cube" => Family::UnitCube { d: need(p.d, "d", name)? },
        "delta" => {
            if p.hs.is_empty() {
                delta_uniform(need(p.d, "d", name)?, need(p.h, "h", name)?)
            } else {
                Family::Delta { hs: p.hs.clone() }
            }
        }
        "regular-tetrahedron" => Family::RegularTetrahedron,
        "standard-simplex" => Family::StandardSimplex { d: need(p.d, "d", name)? },
        "half-prism" => Family::HalfPrism { d: need(p.d, "d", name)? },
        "interval" => Family::Interval {
            a: rational_param(&p.a, "a")?,
            b: rational_param(&p.b, "b")?,
        },
        "cross-polytope" => Family::CrossPolytope { d: need(p.d, "d", name)? },
        "q-simplex" => Family::QSimplex,
        other => {
            return Err(Error::Validation(format!(
                "unknown family {other:?}; expected one of reeve, permutation, cube, delta, \
                 regular-tetrahedron, standard-simplex, half-prism, interval, cross-polytope, q-simplex"
            )))
        }
    })
}

fn load(input: &Input) -> Result<(Polytope, Value)> {
    let (p, source) = match (&input.file, &input.family) {
        (Some(path), _) => (polytope_from_json(&read_input(path)?)?, path.clone()),
        (None, Some(name)) => {
            let f = family_from(name, &input.params)?;
            (f.build()?, f.to_string())
        }
        (None, None) => return Err(Error::Validation("give --file or --family".into())),
    };
    let canonical = polytope_to_json(&p);
    let meta = json!({ "source": source, "digest": digest(&canonical), "dim": p.dim() });
    Ok((p, meta))
}

fn load_file(path: &str) -> Result<(Polytope, Value)> {
    load(&Input {
        file: Some(path.to_string()),
        family: None,
        params: FamilyParams::default(),
    })
}

fn parse_vector(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|c| parse_rational(c.trim())).collect()
}

fn parse_generators(s: &str) -> Result<PointedCone> {
    let gens = s.split(';').map(parse_vector).collect::<Result<Vec<_>>>()?;
    PointedCone::from_generators(gens)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data")
}

/// Coefficients with the angle methods they were computed from.
fn with_methods(coefficients: &[Measured], methods: &[String]) -> Value {
    Value::Array(
        coefficients
            .iter()
            .map(|c| {
                let mut v = to_value(c);
                v["methods"] = json!(methods);
                v
            })
            .collect(),
    )
}

fn methods_of(sum: &SolidAngleSum) -> Vec<String> {
    sum.angles()
        .iter()
        .map(|a| to_value(&a.method).as_str().unwrap_or_default().to_string())
        .sorted()
        .dedup()
        .collect()
}

fn dispatch(command: Command, engine: &AngleEngine, tol: f64) -> Result<Computed> {
    match command {
        Command::Solidpoly { input, full } => {
            let (p, meta) = load(&input)?;
            let sum = SolidAngleSum::new(&p, engine)?;
            let methods = methods_of(&sum);
            let output = if p.is_lattice() {
                let fit = fit_solid_polynomial(&sum, !full)?;
                let coefficients: Vec<Measured> = (0..=p.dim()).map(|k| fit.coefficient(k)).collect();
                json!({
                    "kind": "polynomial",
                    "coefficients": with_methods(&coefficients, &methods),
                    "parity_enforced": fit.parity_enforced,
                    "support": if full { (0..=p.dim()).collect() } else { parity_support(p.dim()) },
                    "exact": fit.polynomial.is_exact(),
                    "residuals": fit.residuals,
                })
            } else {
                let SolidFit::Quasipolynomial(q) = fit_solid(&p, engine)? else {
                    unreachable!("rational input")
                };
                json!({
                    "kind": "quasipolynomial",
                    "methods": methods,
                    "period": q.collapsed.period(),
                    "declared_period": q.declared_period,
                    "constituents": q.collapsed.constituents(),
                    "coefficient_periods": q.coefficient_periods,
                    "residuals": q.residuals,
                })
            };
            Ok(Computed::new(Some(meta), output))
        }
        Command::Ehrhart(input) => {
            let (p, meta) = load(&input)?;
            let q = fit_ehrhart(&p)?;
            let mut out = quasi_json(&q);
            let mut violations = Vec::new();
            if p.is_lattice() {
                let r = reciprocity_check(&p)?;
                if !r.ok {
                    violations.push("Ehrhart-Macdonald reciprocity fails".to_string());
                }
                out["reciprocity"] = to_value(&r);
            }
            Ok(Computed { input: Some(meta), output: out, violations })
        }
        Command::Hstar(input) => {
            let (p, meta) = load(&input)?;
            let h = hstar(&p)?;
            let ints = h.integers().ok_or_else(|| Error::Consistency("non-integral h*-vector".into()))?;
            let mut c = Computed::new(Some(meta), json!({ "hstar": ints.iter().map(|x| Value::from(i64::try_from(x).unwrap_or(i64::MAX))).collect::<Vec<_>>() }));
            c.violations = h
                .negative_entries(0.0)
                .into_iter()
                .map(|j| format!("h*_{j} is negative"))
                .collect();
            Ok(c)
        }
        Command::Numerator(input) => {
            let (p, meta) = load(&input)?;
            let sum = SolidAngleSum::new(&p, engine)?;
            let r = check_solid_numerator(solid_numerator(&sum)?, 1e-8);
            let mut out = to_value(&r);
            out["methods"] = json!(methods_of(&sum));
            if p.dim() == 3 {
                out["unimodality"] = to_value(&unimodality_report(&p, engine)?);
            }
            Ok(Computed { input: Some(meta), output: out, violations: r.violations })
        }
        Command::Vertexsum(input) => {
            let (p, meta) = load(&input)?;
            let sum = SolidAngleSum::new(&p, engine)?;
            let vertices: Vec<Value> = p
                .faces_of_dim(0)
                .map(|(i, _)| to_value(&sum.angles()[i]))
                .collect();
            Ok(Computed::new(
                Some(meta),
                json!({ "vertex_sum": sum.vertex_sum(), "vertex_angles": vertices }),
            ))
        }
        Command::GramCheck(input) => {
            let (p, meta) = load(&input)?;
            let r = brianchon_gram_residual(&p, engine)?;
            let bound = r.error + tol;
            let mut c = Computed::new(Some(meta), json!({ "residual": r, "bound": bound }));
            if r.value.abs() > bound {
                c.violations.push(format!("alternating face-angle sum {} exceeds {bound:e}", r.value));
            }
            Ok(c)
        }
        Command::Period(input) => {
            let (p, meta) = load(&input)?;
            let r = period_report(&p, engine)?;
            let mut c = Computed::new(Some(meta), to_value(&r));
            if !r.divisibility_ok {
                c.violations.push("an observed coefficient period does not divide its j-index".into());
            }
            if r.prediction_matches == Some(false) {
                c.violations.push("collapse differs from the 1-D classification".into());
            }
            Ok(c)
        }
        Command::Valuation(v) => valuation_command(v, engine),
        Command::Family { params, .. } => {
            let d = params.d.unwrap_or(3);
            let hs = if params.hs.is_empty() {
                (1..=20).collect()
            } else {
                params.hs.clone()
            };
            let r = asymptotic_vertex_sum_scan(d, &hs, engine)?;
            Ok(Computed::new(None, to_value(&r)))
        }
        Command::Angle(a) => angle_command(a, engine),
        Command::Verify => unreachable!("handled in run"),
    }
}

fn valuation_command(v: ValuationCommand, engine: &AngleEngine) -> Result<Computed> {
    match v {
        ValuationCommand::Numerator { input, val } => {
            let (p, meta) = load(&input)?;
            let r = g_numerator(&p, builtin(&val, engine.clone())?.as_ref())?;
            Ok(Computed { input: Some(meta), output: to_value(&r), violations: r.violations })
        }
        ValuationCommand::Monotone { inner, outer, val } => {
            let (p, mp) = load_file(&inner)?;
            let (q, mq) = load_file(&outer)?;
            let r = monotonicity_compare(&p, &q, builtin(&val, engine.clone())?.as_ref())?;
            Ok(Computed {
                input: Some(json!([mp, mq])),
                output: to_value(&r),
                violations: r.violations,
            })
        }
        ValuationCommand::PiNumerator { simplex, val } => {
            let (s, meta) = load_file(&simplex)?;
            let r = parallelepiped_numerator(&s, builtin(&val, engine.clone())?.as_ref())?;
            Ok(Computed { input: Some(meta), output: to_value(&r), violations: r.violations })
        }
    }
}

fn angle_command(a: AngleCommand, engine: &AngleEngine) -> Result<Computed> {
    match a {
        AngleCommand::Point { input, point } => {
            let (p, meta) = load(&input)?;
            let x = parse_vector(&point)?;
            Ok(Computed::new(Some(meta), to_value(&engine.solid_angle(&p, &x)?)))
        }
        AngleCommand::Cone { generators } => {
            let c = parse_generators(&generators)?;
            Ok(Computed::new(None, to_value(&engine.cone_angle(&c)?)))
        }
        AngleCommand::Calibrate => {
            let r = calibration_report(&product_probes(), engine.aomoto_tol, engine.max_order);
            Ok(Computed::new(None, to_value(&r)))
        }
        AngleCommand::Prism { generators } => {
            let c = parse_generators(&generators)?;
            let r = prism_angle_bound_check(&c, engine.mc_samples, engine.seed)?;
            let mut out = Computed::new(None, to_value(&r));
            if !r.ok() {
                out.violations.push("prism corner angles fail the symmetry or ball-ratio bound".into());
            }
            Ok(out)
        }
    }
}

/// One line of the `verify` table.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub identity: &'static str,
    pub subject: String,
    pub pass: bool,
    pub detail: String,
}

fn check(identity: &'static str, subject: impl ToString, outcome: Result<(bool, String)>) -> Check {
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { identity, subject: subject.to_string(), pass, detail }
}

/// Identities on the built-in families.
pub fn verify(engine: &AngleEngine, tol: f64) -> Vec<Check> {
    let mut rows = Vec::new();
    for f in catalogue() {
        let p = match f.build() {
            Ok(p) => p,
            Err(e) => {
                rows.push(check("construction", &f, Err(e)));
                continue;
            }
        };
        let sum = SolidAngleSum::new(&p, engine);
        rows.push(check("Brianchon-Gram relation", &f, (|| {
            let r = borrowed(&sum)?.brianchon_gram();
            Ok((r.value.abs() <= r.error + tol, format!("residual {:.3e}", r.value)))
        })()));
        rows.push(check("Macdonald parity", &f, (|| {
            let s = borrowed(&sum)?;
            let fit = fit_solid_polynomial(s, false)?;
            let worst = (0..=p.dim())
                .filter(|k| (p.dim() - k) % 2 == 1 || *k == 0)
                .map(|k| fit.coefficient(k).value.abs())
                .fold(0.0, f64::max);
            Ok((worst < 1e-6, format!("largest wrong-parity coefficient {worst:.2e}")))
        })()));
        rows.push(check("solid-angle numerator positivity and palindromy", &f, (|| {
            let r = check_solid_numerator(solid_numerator(borrowed(&sum)?)?, 1e-8);
            Ok((r.ok(), format!("{:?}", r.numerator.values().iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>())))
        })()));
        rows.push(check("Stanley nonnegativity", &f, (|| {
            let r = g_numerator(&p, &Indicator)?;
            let h = hstar(&p)?;
            let same = r.numerator.integers() == h.integers();
            Ok((same && r.nonnegative, format!("{:?}", h.values())))
        })()));
        rows.push(check("Ehrhart-Macdonald reciprocity", &f, (|| {
            let r = reciprocity_check(&p)?;
            Ok((r.ok, String::new()))
        })()));
        rows.push(check("face decomposition", &f, (|| {
            let s = borrowed(&sum)?;
            let ok = (1..=2).all(|t| s.eval(t).agrees_with(&s.eval_by_faces(t), tol));
            Ok((ok, String::new()))
        })()));
    }
    rows.push(check("Reeve linear coefficient", "reeve(h=1..6)", (|| {
        let mut worst = f64::NEG_INFINITY;
        for h in 1..=6 {
            let p = Family::Reeve { h }.build()?;
            let SolidFit::Polynomial(fit) = fit_solid(&p, engine)? else { unreachable!() };
            worst = worst.max(fit.coefficient(1).value + fit.coefficient(1).error);
        }
        Ok((worst < 0.0, format!("largest linear coefficient {worst:.4}")))
    })()));
    rows.push(check("permutation simplices", "d=3", (|| {
        let mut ok = true;
        for p in permutation_simplices(3)? {
            let SolidFit::Polynomial(fit) = fit_solid(&p, engine)? else { unreachable!() };
            ok &= crate::solidpoly::matches_coefficients(&fit.polynomial, &[0.0, 0.0, 0.0, 1.0 / 6.0], tol);
        }
        Ok((ok, "t^3/6".into()))
    })()));
    rows.push(check("vertex sum below 1/2", "3-simplices in the catalogue", (|| {
        let mut worst: f64 = 0.0;
        for f in catalogue() {
            let p = f.build()?;
            if p.dim() == 3 && p.vertices().len() == 4 {
                let s = SolidAngleSum::new(&p, engine)?.vertex_sum();
                worst = worst.max(s.value);
            }
        }
        Ok((worst < 0.5, format!("largest {worst:.4}")))
    })()));
    rows.push(check("period collapse", "half prisms d=2,3", (|| {
        let mut ok = true;
        for d in 2..=3 {
            let r = period_report(&Family::HalfPrism { d }.build()?, engine)?;
            let mut want = vec![0.0; d + 1];
            want[d] = 0.5;
            ok &= r.collapsed
                && crate::solidpoly::matches_coefficients(&r.fit.collapsed.constituents()[0], &want, tol);
        }
        Ok((ok, "t^d/2".into()))
    })()));
    rows.push(check("1-D classification", "[0,1/2] [1/3,4/3] [0,1/3] [1/2,3/4]", (|| {
        let mut ok = true;
        for (a, b) in [("0", "1/2"), ("1/3", "4/3"), ("0", "1/3"), ("1/2", "3/4")] {
            let p = Family::Interval { a: parse_rational(a)?, b: parse_rational(b)? }.build()?;
            ok &= period_report(&p, engine)?.prediction_matches == Some(true);
        }
        Ok((ok, String::new()))
    })()));
    rows.push(check("vertex-sum asymptotics", "delta(h,h), d=3", (|| {
        if engine.policy == Policy::MonteCarlo {
            return Ok((true, "skipped under the mc policy".into()));
        }
        let pos = asymptotic_vertex_sum_scan(3, &[1, 10, 100], engine)?;
        let neg = asymptotic_vertex_sum_scan(3, &[-1, -10, -100], engine)?;
        let ok = pos.monotone && neg.monotone && pos.rows[2].vertex_sum < 0.02 && neg.rows[2].vertex_sum > 0.45;
        Ok((ok, format!("S(100) = {:.4}, S(-100) = {:.4}", pos.rows[2].vertex_sum, neg.rows[2].vertex_sum)))
    })()));
    rows.push(check("non-unimodal numerator", "delta(h,h), h<0", (|| {
        for h in 1..=20 {
            let r = unimodality_report(&delta_uniform(3, -h).build()?, engine)?;
            if !r.unimodal {
                return Ok((true, format!("h = -{h}, S = {:.4}", r.vertex_sum.value)));
            }
        }
        Ok((false, "no witness for h >= -20".into()))
    })()));
    rows.push(check("monotonicity", "standard triangle in unit square", (|| {
        let p = Family::StandardSimplex { d: 2 }.build()?;
        let q = Family::UnitCube { d: 2 }.build()?;
        let a = monotonicity_compare(&p, &q, &Indicator)?;
        let b = monotonicity_compare(&p, &q, &Solid::new(engine.clone()))?;
        Ok((a.ok() && b.ok(), String::new()))
    })()));
    rows.push(check("volume", "reeve(h=1..20)", {
        let ok = (1..=20).all(|h| {
            Family::Reeve { h }
                .build()
                .map(|p| (to_f64(&p.volume()) - h as f64 / 6.0).abs() < 1e-15)
                .unwrap_or(false)
        });
        Ok((ok, String::new()))
    }));
    rows
}

fn borrowed<'a>(s: &'a Result<SolidAngleSum<'a>>) -> Result<&'a SolidAngleSum<'a>> {
    s.as_ref().map_err(|e| Error::Consistency(e.to_string()))
}

fn verify_table(rows: &[Check]) -> String {
    let w1 = rows.iter().map(|r| r.identity.len()).max().unwrap_or(0);
    let w2 = rows.iter().map(|r| r.subject.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        out += &format!(
            "{}  {:<w1$}  {:<w2$}  {}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.identity,
            r.subject,
            r.detail
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    out += &format!("{} checks, {} failed\n", rows.len(), failed);
    out
}
