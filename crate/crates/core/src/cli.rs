//! The `sato` command line. Every input and output is JSON carrying
//! `schema_version`; rationals are strings `"n"` or `"n/d"` in lowest terms.
//!
//! Point file:
//! `{"schema_version": 1, "field": "Q", "index": n, "depth": M, "precision": D,
//!   "tail_start": -M, "frame": [series, ...]}`
//! where a series is `{"field", "lo", "hi", "coeffs": [[exponent, "c"], ...]}`
//! and `tail_start` marks the valuations below it as members of the point.
//!
//! Curve file:
//! `{"schema_version": 1, "field": "Q", "type": "superelliptic", "m": 2,
//!   "f": ["0", "-1", "0", "1"], "depth": 8, "precision": 10}`
//! with `f` in increasing degree, or `"type": "frame"` with a `frame` list.
//!
//! Tau file: `{"schema_version": 1, "weight": W, "coefficients":
//! [{"partition": [2, 1], "coefficient": "c"}, ...]}`.
//!
//! Exit codes: 0 pass, 1 check failed, 2 input or precision error.
//! `SATO_THREADS` sets the worker count for diagram scans.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::grassmannian::GrassPoint;
use crate::identities::{
    bilinear_residue, kp_operator, kp_scan, moduli_scan, polynomial_witness, unit_scan, CheckReport,
};
use crate::krichever::{gaps_and_genus, krichever_map, reconstruct_algebra, wgp_check, CurveSpec};
use crate::laurent::LaurentSeries;
use crate::partitions::{schur, DiffOperator, Partition};
use crate::scalar::{format_q, parse_q, FieldSpec, Q};
use crate::tau_ba::{addition_formula, ba, ba_structure, tau_direct, tau_expand};
use crate::tpoly::{TPoly, VarSet};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "sato", version, about = "Exact computations on the Sato Grassmannian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tau function coefficients in the Schur basis.
    Tau {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        weight: u32,
        #[arg(long, value_enum, default_value_t = Method::Schur)]
        method: Method,
    },
    /// Nonzero Plücker coordinates up to a weight.
    Pluecker {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        max_weight: u32,
    },
    /// Baker-Akhiezer function on a z-window, or its structure expansion.
    Ba {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        weight: u32,
        #[arg(long, allow_hyphen_values = true)]
        zlo: i64,
        #[arg(long, allow_hyphen_values = true)]
        zhi: i64,
        #[arg(long)]
        structure: bool,
    },
    #[command(subcommand)]
    Check(Check),
    /// Dump the KP operator of a diagram pair.
    KpOp {
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
    },
    /// Point of a curve under the Krichever map.
    Krichever {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        depth: Option<i64>,
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Weierstrass gaps, genus and pole semigroup.
    Gaps {
        #[arg(long)]
        point: PathBuf,
    },
    /// The annihilator under the residue pairing.
    Perp {
        #[arg(long)]
        point: PathBuf,
    },
    /// Both sides of the Addition Formula.
    Addition {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 8)]
        weight: u32,
    },
    /// Generators and relations of an algebra point.
    Reconstruct {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        bound: i64,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    Bilinear {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        point2: Option<PathBuf>,
        #[arg(long)]
        weight: u32,
    },
    Kp(KpArgs),
    Moduli {
        #[arg(long)]
        point: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        genus: i64,
        #[arg(long)]
        max_weight: u32,
    },
    Unit {
        #[arg(long)]
        point: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        genus: i64,
        #[arg(long)]
        max_weight: u32,
    },
}

#[derive(Args, Debug)]
struct KpArgs {
    #[arg(long, conflicts_with = "tau", required_unless_present = "tau")]
    point: Option<PathBuf>,
    #[arg(long)]
    tau: Option<PathBuf>,
    #[arg(long)]
    max_weight: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Schur,
    Direct,
    Both,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn emit(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn failure(e: &Error) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: emit(&json!({"schema_version": SCHEMA_VERSION, "error": e.to_string()})),
    }
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    if let Err(e) = configure_threads() {
        return failure(&e);
    }
    match dispatch(cli.command) {
        Ok((passed, v)) => Outcome {
            code: if passed { 0 } else { 1 },
            stdout: emit(&v),
            stderr: String::new(),
        },
        Err(e) => failure(&e),
    }
}

fn configure_threads() -> Result<()> {
    let Ok(s) = std::env::var("SATO_THREADS") else {
        return Ok(());
    };
    let n: usize = s
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse(format!("SATO_THREADS must be a positive integer, got {s:?}")))?;
    // the global pool can only be built once per process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn versioned(mut body: Map<String, Value>) -> Value {
    body.insert("schema_version".into(), json!(SCHEMA_VERSION));
    Value::Object(body)
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("callers pass objects"),
    }
}

fn dispatch(cmd: Command) -> Result<(bool, Value)> {
    match cmd {
        Command::Tau { point, weight, method } => cmd_tau(&point, weight, method),
        Command::Pluecker { point, max_weight } => {
            let u = read_point(&point)?;
            let coords = u.pluecker_all(max_weight)?;
            Ok((
                true,
                versioned(object(json!({
                    "index": u.index(),
                    "coordinates": coords.iter().map(|(l, c)| json!({"partition": l, "coefficient": format_q(c)})).collect::<Vec<_>>(),
                }))),
            ))
        }
        Command::Ba {
            point,
            weight,
            zlo,
            zhi,
            structure,
        } => {
            let u = read_point(&point)?;
            if structure {
                let comps = ba_structure(&u, weight + 1)?;
                let list: Vec<Value> = comps
                    .iter()
                    .map(|c| json!({"level": c.level, "p": tpoly_json(&c.p), "psi": series_json(&c.psi)}))
                    .collect();
                return Ok((true, versioned(object(json!({"weight": weight, "components": list})))));
            }
            let psi = ba(&u, weight, zlo, zhi)?;
            let coeffs: Vec<Value> = (zlo..zhi)
                .map(|e| Ok(json!({"exponent": e, "terms": tpoly_json(&psi.coeff(e)?)})))
                .collect::<Result<_>>()?;
            Ok((
                true,
                versioned(object(json!({"weight": weight, "zlo": zlo, "zhi": zhi, "coefficients": coeffs}))),
            ))
        }
        Command::Check(c) => cmd_check(c),
        Command::KpOp { l1, l2 } => {
            let (a, b): (Partition, Partition) = (l1.parse()?, l2.parse()?);
            let op = kp_operator(&a, &b);
            Ok((
                true,
                versioned(object(json!({"l1": a, "l2": b, "terms": tpoly_json(op.symbol())}))),
            ))
        }
        Command::Krichever { curve, depth, precision } => {
            let (curve_spec, file_depth, file_precision) = read_curve(&curve)?;
            let depth = depth
                .or(file_depth)
                .ok_or_else(|| Error::Parse("depth missing from arguments and curve file".into()))?;
            let precision = precision
                .or(file_precision)
                .ok_or_else(|| Error::Parse("precision missing from arguments and curve file".into()))?;
            let u = krichever_map(&curve_spec, depth, precision)?;
            Ok((true, point_json(&u)))
        }
        Command::Gaps { point } => {
            let u = read_point(&point)?;
            let g = gaps_and_genus(&u);
            Ok((
                true,
                versioned(object(json!({
                    "gaps": g.gaps,
                    "genus": g.genus,
                    "pole_orders": g.pole_orders,
                    "generators": g.generators,
                    "stratum": u.stratum().0,
                    "wgp": wgp_check(&u.stratum().0, u.index()),
                }))),
            ))
        }
        Command::Perp { point } => {
            let u = read_point(&point)?;
            Ok((true, point_json(&u.perp_default()?)))
        }
        Command::Addition { point, n, x, weight } => {
            let u = read_point(&point)?;
            let xs: Vec<Q> = x.split(',').map(parse_q).collect::<Result<_>>()?;
            if xs.len() != n {
                return Err(Error::Parse(format!("--n {n} but {} values in --x", xs.len())));
            }
            let pair = addition_formula(&u, &xs, weight)?;
            let ratio = pair.ratio();
            Ok((
                ratio.is_some(),
                versioned(object(json!({
                    "n": n,
                    "x": xs.iter().map(format_q).collect::<Vec<_>>(),
                    "lhs": series_json(&pair.lhs),
                    "rhs": series_json(&pair.rhs),
                    "ratio": ratio.as_ref().map(format_q),
                }))),
            ))
        }
        Command::Reconstruct { point, bound } => {
            let u = read_point(&point)?;
            match reconstruct_algebra(&u, bound) {
                Ok(p) => Ok((
                    true,
                    versioned(object(json!({
                        "bound": p.bound,
                        "generators": p.generators.iter().map(|g| json!({"name": g.name, "pole_order": g.pole_order})).collect::<Vec<_>>(),
                        "relations": p.relations.iter().map(|r| p.format_relation(r)).collect::<Vec<_>>(),
                    }))),
                )),
                Err(Error::ClosureFailed(msg)) => Ok((
                    false,
                    versioned(object(json!({"bound": bound, "status": "failed", "reason": msg}))),
                )),
                Err(e) => Err(e),
            }
        }
    }
}

/// `⟨χ_λ, τ⟩` for every `|λ| <= w`, nonzero ones only, in canonical order.
fn schur_coefficients(tau: &TPoly, w: u32) -> Result<Vec<(Partition, Q)>> {
    let mut out = Vec::new();
    for lam in Partition::up_to(w) {
        let op = DiffOperator::chi(&lam, VarSet::T, false).evaluated_at_zero(&[VarSet::T]);
        let c = op.pair_product(&[(VarSet::T, tau)])?;
        if !c.is_zero() {
            out.push((lam, c));
        }
    }
    Ok(out)
}

fn coefficient_list(c: &[(Partition, Q)]) -> Vec<Value> {
    c.iter()
        .map(|(l, c)| json!({"partition": l, "coefficient": format_q(c)}))
        .collect()
}

fn cmd_tau(point: &Path, w: u32, method: Method) -> Result<(bool, Value)> {
    let u = read_point(point)?;
    let schur_side = match method {
        Method::Direct => None,
        _ => Some(tau_expand(&u, w)?),
    };
    let direct_side = match method {
        Method::Schur => None,
        _ => Some(tau_direct(&u, w)?),
    };
    let agree = match (&schur_side, &direct_side) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    };
    let tau = schur_side.or(direct_side).expect("one method runs");
    let method_name = match method {
        Method::Schur => "schur",
        Method::Direct => "direct",
        Method::Both => "both",
    };
    let mut body = object(json!({
        "weight": w,
        "method": method_name,
        "coefficients": coefficient_list(&schur_coefficients(&tau, w)?),
        "polynomial": tau.to_string(),
    }));
    if method == Method::Both {
        body.insert("methods_agree".into(), json!(agree));
    }
    Ok((agree, versioned(body)))
}

fn report_value(r: &CheckReport) -> Value {
    versioned(object(serde_json::to_value(r).expect("reports serialize")))
}

fn genus_index(u: &GrassPoint, g: i64) -> Result<()> {
    if u.index() != 1 - g {
        return Err(Error::IndexMismatch(format!(
            "genus {g} needs index {}, point has index {}",
            1 - g,
            u.index()
        )));
    }
    Ok(())
}

fn cmd_check(c: Check) -> Result<(bool, Value)> {
    let report = match c {
        Check::Bilinear { point, point2, weight } => {
            let u = read_point(&point)?;
            let u2 = match &point2 {
                Some(p) => read_point(p)?,
                None => u.clone(),
            };
            let r = bilinear_residue(&u, &u2, weight)?;
            let name = match &point2 {
                Some(p) => format!("{} {}", point.display(), p.display()),
                None => point.display().to_string(),
            };
            CheckReport::new("bilinear", &name, weight, polynomial_witness(&r))
        }
        Check::Kp(KpArgs { point, tau, max_weight }) => {
            let (tau_poly, name) = match (point, tau) {
                (Some(p), _) => (tau_expand(&read_point(&p)?, max_weight + 1)?, p.display().to_string()),
                (None, Some(t)) => (read_tau(&t)?, t.display().to_string()),
                (None, None) => unreachable!("clap requires one source"),
            };
            CheckReport::new("kp", &name, max_weight, kp_scan(&tau_poly, max_weight)?)
        }
        Check::Moduli {
            point,
            genus,
            max_weight,
        } => {
            let u = read_point(&point)?;
            genus_index(&u, genus)?;
            let order = (1 + genus + max_weight as i64).max(0) as u32;
            let tau = tau_expand(&u, order)?;
            let w = moduli_scan(&tau, genus, max_weight)?;
            CheckReport::new("moduli", &point.display().to_string(), max_weight, w)
        }
        Check::Unit {
            point,
            genus,
            max_weight,
        } => {
            let u = read_point(&point)?;
            genus_index(&u, genus)?;
            let order = (1 - genus + max_weight as i64).max(max_weight as i64) as u32;
            let tau = tau_expand(&u, order)?;
            let w = unit_scan(&tau, genus, max_weight)?;
            CheckReport::new("unit", &point.display().to_string(), max_weight, w)
        }
    };
    Ok((report.passed(), report_value(&report)))
}

/// `[{"coefficient", "exponents": {"t": [k_1, k_2, ...], "t'": ...}}]`, where
/// `k_i` is the exponent of `t_i` (or of `∂̃_i` for an operator symbol).
pub fn tpoly_json(p: &TPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let mut sets = Map::new();
            for (set, name) in [(VarSet::T, "t"), (VarSet::T1, "t'"), (VarSet::T2, "t''"), (VarSet::U, "u")] {
                let vars: Vec<_> = m.iter().filter(|(v, _)| v.set == set).collect();
                let Some(top) = vars.iter().map(|(v, _)| v.index).max() else {
                    continue;
                };
                let mut e = vec![0u32; top as usize];
                for (v, k) in vars {
                    e[v.index as usize - 1] = *k;
                }
                sets.insert(name.into(), json!(e));
            }
            json!({"coefficient": format_q(c), "exponents": sets})
        })
        .collect();
    Value::Array(terms)
}

pub fn series_json(s: &LaurentSeries) -> Value {
    json!({
        "field": s.field(),
        "lo": s.lo(),
        "hi": s.hi(),
        "coeffs": s.terms().map(|(e, c)| json!([e, format_q(c)])).collect::<Vec<_>>(),
    })
}

pub fn point_json(u: &GrassPoint) -> Value {
    versioned(object(json!({
        "field": u.field(),
        "index": u.index(),
        "depth": u.depth(),
        "precision": u.precision(),
        "tail_start": -u.depth(),
        "frame": u.frame().map(|(_, s)| series_json(s)).collect::<Vec<_>>(),
    })))
}

fn field_of(v: &Value, key: &str) -> Result<FieldSpec> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse(format!("missing string field {key:?}")))?
        .parse()
}

fn int_of(v: &Value, key: &str) -> Result<i64> {
    v.get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::Parse(format!("missing integer field {key:?}")))
}

fn scalar_of(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(n) => n
            .as_i64()
            .map(|k| Q::from_integer(k.into()))
            .ok_or_else(|| Error::Parse(format!("coefficient {n} is not an integer"))),
        other => Err(Error::Parse(format!("bad coefficient {other}"))),
    }
}

pub fn series_from_json(v: &Value) -> Result<LaurentSeries> {
    let field = field_of(v, "field")?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("series without coeffs".into()))?
        .iter()
        .map(|pair| match pair.as_array().map(Vec::as_slice) {
            Some([e, c]) => {
                let e = e.as_i64().ok_or_else(|| Error::Parse(format!("bad exponent {e}")))?;
                Ok((e, scalar_of(c)?))
            }
            _ => Err(Error::Parse(format!("bad series term {pair}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    LaurentSeries::new(field, int_of(v, "lo")?, int_of(v, "hi")?, false, coeffs)
}

fn check_schema(v: &Value) -> Result<()> {
    match v.get("schema_version").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => Ok(()),
        Some(k) => Err(Error::Parse(format!("unsupported schema_version {k}"))),
        None => Err(Error::Parse("missing schema_version".into())),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    check_schema(&v)?;
    Ok(v)
}

fn frame_of(v: &Value) -> Result<Vec<LaurentSeries>> {
    v.get("frame")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing frame".into()))?
        .iter()
        .map(series_from_json)
        .collect()
}

pub fn point_from_json(v: &Value) -> Result<GrassPoint> {
    check_schema(v)?;
    let field = field_of(v, "field")?;
    let depth = int_of(v, "depth")?;
    let u = GrassPoint::normalize(field, &frame_of(v)?, depth, int_of(v, "precision")?)?;
    if let Some(t) = v.get("tail_start").and_then(Value::as_i64) {
        if t != -u.depth() {
            return Err(Error::Parse(format!("tail_start {t} disagrees with depth {}", u.depth())));
        }
    }
    if let Some(n) = v.get("index").and_then(Value::as_i64) {
        if n != u.index() {
            return Err(Error::IndexMismatch(format!("file declares index {n}, frame has index {}", u.index())));
        }
    }
    Ok(u)
}

fn read_point(path: &Path) -> Result<GrassPoint> {
    point_from_json(&read_json(path)?)
}

fn read_curve(path: &Path) -> Result<(CurveSpec, Option<i64>, Option<i64>)> {
    let v = read_json(path)?;
    let field = field_of(&v, "field")?;
    let curve_spec = match v.get("type").and_then(Value::as_str) {
        Some("superelliptic") => {
            let m = int_of(&v, "m")?;
            let f = v
                .get("f")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("superelliptic curve without f".into()))?
                .iter()
                .map(scalar_of)
                .collect::<Result<_>>()?;
            CurveSpec::superelliptic(field, u32::try_from(m).map_err(|_| Error::Curve(format!("bad m {m}")))?, f)?
        }
        Some("frame") => CurveSpec::Frame {
            field,
            frame: frame_of(&v)?,
        },
        other => return Err(Error::Parse(format!("unknown curve type {other:?}"))),
    };
    Ok((
        curve_spec,
        v.get("depth").and_then(Value::as_i64),
        v.get("precision").and_then(Value::as_i64),
    ))
}

pub fn tau_from_json(v: &Value) -> Result<TPoly> {
    check_schema(v)?;
    let w = u32::try_from(int_of(v, "weight")?).map_err(|_| Error::Parse("negative weight".into()))?;
    let mut tau = TPoly::zero(Some(w));
    for entry in v
        .get("coefficients")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("tau without coefficients".into()))?
    {
        let lam: Partition = serde_json::from_value(entry.get("partition").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("bad partition: {e}")))?;
        let c = scalar_of(entry.get("coefficient").unwrap_or(&Value::Null))?;
        tau.add_assign(&schur(&lam, w)?.scale(&c));
    }
    Ok(tau)
}

fn read_tau(path: &Path) -> Result<TPoly> {
    tau_from_json(&read_json(path)?)
}
