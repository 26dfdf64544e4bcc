//! Job dispatch behind the command-line binary: JSON payload in, JSON document and exit
//! status out.
//!
//! Payload keys: `alpha` (m+3 entries) or `a`, `b`, `c`; optional `x` (m points) and
//! `at` (evaluation point for `pfaffian`). Scalars are "p/q" strings or integer literals
//! (exact), other JSON numbers (float), or `[re, im]` (complex float).

use serde_json::{json, Map, Value};

use crate::chains::{bases, intersection_matrix_h, pairing_matrix, TwistedChain};
use crate::cocycles::{cohomology_matrix, standard_frames, RationalOneForm};
use crate::connection::{check_integrability, eigen_report, residue_matrices, PfaffianKind, PfaffianSystem};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, rank, to_rows, C64};
use crate::monodromy::{all_circuit_matrices, classify_representation, select_pairs};
use crate::numerics::{euler_check, fd_series, verify_monodromy, verify_tpr};
use crate::parameters::{aligned_configuration, default_spacing, ParameterVector, PointConfiguration, Scalar};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Tolerance handed to the quadrature and series routines inside checks.
pub const QUADRATURE_TOL: f64 = 1e-12;
pub const INTEGRABILITY_TRIALS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    Tpr,
    Euler,
    Monodromy,
    Integrability,
}

impl VerifyTarget {
    pub fn default_tolerance(self) -> f64 {
        match self {
            VerifyTarget::Tpr | VerifyTarget::Monodromy => 1e-6,
            VerifyTarget::Euler => 1e-8,
            VerifyTarget::Integrability => 1e-10,
        }
    }

    fn name(self) -> &'static str {
        match self {
            VerifyTarget::Tpr => "tpr",
            VerifyTarget::Euler => "euler",
            VerifyTarget::Monodromy => "monodromy",
            VerifyTarget::Integrability => "integrability",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classify,
    Basis,
    Ih,
    Ic,
    Pfaffian,
    Monodromy,
    Verify(VerifyTarget),
    Eval,
}

impl Command {
    pub fn name(self) -> String {
        match self {
            Command::Classify => "classify".into(),
            Command::Basis => "basis".into(),
            Command::Ih => "ih".into(),
            Command::Ic => "ic".into(),
            Command::Pfaffian => "pfaffian".into(),
            Command::Monodromy => "monodromy".into(),
            Command::Verify(t) => format!("verify {}", t.name()),
            Command::Eval => "eval".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub params: Value,
    pub tol: Option<f64>,
    pub seed: u64,
    pub pairs: String,
    pub kind: PfaffianKind,
    /// Overrides `at` in the payload.
    pub at: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct JobOutput {
    pub status: i32,
    pub document: Value,
}

impl JobOutput {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("json values serialize");
        s.push('\n');
        s
    }
}

pub fn parse_kind(s: &str) -> Result<PfaffianKind> {
    match s.trim().to_ascii_lowercase().as_str() {
        "r" => Ok(PfaffianKind::R),
        "xi" => Ok(PfaffianKind::Xi),
        "theta" => Ok(PfaffianKind::Theta),
        other => Err(Error::Malformed(format!("kind must be r, xi or theta, got `{other}`"))),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Malformed(_) => 2,
        Error::Domain(_) => 3,
        Error::Numerical(_) => 1,
    }
}

pub fn error_document(command: &str, params: Option<&Value>, seed: u64, e: &Error) -> Value {
    let kind = match e {
        Error::Malformed(_) => "malformed",
        Error::Domain(_) => "domain",
        Error::Numerical(_) => "numerical",
    };
    json!({
        "command": command,
        "version": VERSION,
        "seed": seed,
        "input": params.cloned().unwrap_or(Value::Null),
        "error": {"kind": kind, "message": e.to_string()},
    })
}

pub fn run(job: &JobSpec) -> JobOutput {
    let name = job.command.name();
    match dispatch(job) {
        Ok((result, check)) => {
            let mut doc = Map::new();
            doc.insert("command".into(), json!(name));
            doc.insert("version".into(), json!(VERSION));
            doc.insert("seed".into(), json!(job.seed));
            doc.insert("input".into(), job.params.clone());
            doc.insert("result".into(), result);
            let mut status = 0;
            if let Some(c) = check {
                if !c.pass {
                    status = 1;
                }
                doc.insert("residual".into(), json!(c.residual));
                doc.insert("tolerance".into(), json!(c.tolerance));
                doc.insert("pass".into(), json!(c.pass));
            }
            JobOutput { status, document: Value::Object(doc) }
        }
        Err(e) => JobOutput { status: exit_code(&e), document: error_document(&name, Some(&job.params), job.seed, &e) },
    }
}

struct Check {
    residual: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn new(residual: f64, tolerance: f64) -> Self {
        Check { residual, tolerance, pass: residual.is_finite() && residual <= tolerance }
    }
}

fn tolerance(job: &JobSpec, default: f64) -> Result<f64> {
    match job.tol {
        None => Ok(default),
        Some(t) if t > 0.0 && t.is_finite() => Ok(t),
        Some(t) => Err(Error::Malformed(format!("tolerance must be positive, got {t}"))),
    }
}

fn dispatch(job: &JobSpec) -> Result<(Value, Option<Check>)> {
    let obj = job.params.as_object().ok_or_else(|| Error::Malformed("payload must be a JSON object".into()))?;
    let pv = parse_parameters(obj)?;
    match job.command {
        Command::Classify => Ok((classify_json(&pv)?, None)),
        Command::Basis => basis_json(&pv).map(|v| (v, None)),
        Command::Ih => ih_json(job, &pv),
        Command::Ic => ic_json(&pv, &configuration(obj, &pv)?).map(|v| (v, None)),
        Command::Pfaffian => pfaffian_json(job, obj, &pv).map(|v| (v, None)),
        Command::Monodromy => monodromy_json(job, &pv),
        Command::Verify(t) => verify_json(job, t, obj, &pv),
        Command::Eval => eval_json(obj, &pv).map(|v| (v, None)),
    }
}

pub fn parse_scalar(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Scalar::parse_exact(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::int(i))
            } else {
                Ok(Scalar::real(n.as_f64().ok_or_else(|| Error::Malformed(format!("bad number {n}")))?))
            }
        }
        Value::Array(a) if a.len() == 2 => {
            let part = |k: usize| a[k].as_f64().ok_or_else(|| Error::Malformed(format!("bad complex {v}")));
            Ok(Scalar::complex(part(0)?, part(1)?))
        }
        _ => Err(Error::Malformed(format!("expected \"p/q\", a number or [re, im], got {v}"))),
    }
}

pub fn parse_complex(v: &Value) -> Result<C64> {
    Ok(parse_scalar(v)?.value())
}

fn array<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    obj.get(key)
        .ok_or_else(|| Error::Malformed(format!("missing `{key}`")))?
        .as_array()
        .ok_or_else(|| Error::Malformed(format!("`{key}` must be an array")))
}

pub fn parse_parameters(obj: &Map<String, Value>) -> Result<ParameterVector> {
    if obj.contains_key("alpha") {
        if ["a", "b", "c"].iter().any(|k| obj.contains_key(*k)) {
            return Err(Error::Malformed("give either `alpha` or `a`, `b`, `c`, not both".into()));
        }
        let entries = array(obj, "alpha")?.iter().map(parse_scalar).collect::<Result<Vec<_>>>()?;
        return ParameterVector::from_alpha(entries);
    }
    let get = |k: &str| obj.get(k).ok_or_else(|| Error::Malformed(format!("missing `{k}` (or give `alpha`)")));
    let a = parse_scalar(get("a")?)?;
    let c = parse_scalar(get("c")?)?;
    let b = array(obj, "b")?.iter().map(parse_scalar).collect::<Result<Vec<_>>>()?;
    ParameterVector::from_abc(a, b, c)
}

fn parse_point(v: &Value, m: usize, key: &str) -> Result<Vec<C64>> {
    let a = v.as_array().ok_or_else(|| Error::Malformed(format!("`{key}` must be an array")))?;
    if a.len() != m {
        return Err(Error::Malformed(format!("`{key}` has {} entries, expected m = {m}", a.len())));
    }
    a.iter().map(parse_complex).collect()
}

/// The payload's `x`, or the default aligned configuration.
fn configuration(obj: &Map<String, Value>, pv: &ParameterVector) -> Result<PointConfiguration> {
    match obj.get("x") {
        Some(v) => PointConfiguration::new(parse_point(v, pv.m, "x")?),
        None => aligned_configuration(&pv.classify(), default_spacing(pv.m)),
    }
}

fn site_name(m: usize, i: usize) -> String {
    match i {
        0 => "0".into(),
        i if i == m + 1 => "1".into(),
        i if i == m + 2 => "inf".into(),
        i => format!("x{i}"),
    }
}

pub fn scalar_json(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(r) => json!(format!("{}/{}", r.numer(), r.denom())),
        Scalar::Float(z) => json!([z.re, z.im]),
    }
}

fn matrix_json(rows: Vec<Vec<C64>>) -> Value {
    json!(rows)
}

fn chain_json(ch: &TwistedChain) -> Value {
    let terms: Vec<Value> = ch.terms.iter().map(|(e, c)| json!({"kind": e.kind, "site": e.site, "coeff": c})).collect();
    json!({"dual": ch.dual, "terms": terms})
}

fn form_json(f: &RationalOneForm) -> Value {
    let principal: Vec<Value> =
        f.principal.iter().map(|(&(site, order), c)| json!({"site": site, "order": order, "coeff": c})).collect();
    json!({"principal": principal, "poly": f.poly})
}

fn classify_json(pv: &ParameterVector) -> Result<Value> {
    let cls = pv.classify();
    let m = pv.m;
    let names = |v: &[usize]| v.iter().map(|&i| site_name(m, i)).collect::<Vec<_>>();
    let aligned = aligned_configuration(&cls, default_spacing(m)).ok().map(|x| x.x);
    let rep = classify_representation(pv).ok();
    Ok(json!({
        "m": m,
        "alpha": pv.entries.iter().map(scalar_json).collect::<Vec<_>>(),
        "lambda": pv.lambdas(),
        "classification": cls,
        "D": names(&cls.holomorphic),
        "dual_D": names(&cls.polar),
        "r": cls.r(),
        "s": cls.s(),
        "cyclic_order": names(&cls.ordered),
        "aligned_x": aligned,
        "reducible": rep.as_ref().map(|r| r.reducible),
        "trivial_monodromy": rep.as_ref().map(|r| r.trivial),
    }))
}

fn basis_json(pv: &ParameterVector) -> Result<Value> {
    let cls = pv.classify();
    let b = bases(&cls, &pv.lambdas())?;
    Ok(json!({
        "gamma": b.gamma.iter().map(chain_json).collect::<Vec<_>>(),
        "delta": b.delta.iter().map(chain_json).collect::<Vec<_>>(),
    }))
}

fn ih_json(job: &JobSpec, pv: &ParameterVector) -> Result<(Value, Option<Check>)> {
    let tol = tolerance(job, 1e-12)?;
    let cls = pv.classify();
    let lam = pv.lambdas();
    let h = intersection_matrix_h(&cls, &lam)?;
    let b = bases(&cls, &lam)?;
    let pairing = pairing_matrix(&cls, &lam, &b.delta, &b.gamma)?;
    let residual = max_abs(&(&h - &pairing));
    let v = json!({"H": matrix_json(to_rows(&h)), "rank": rank(&h, 1e-10)});
    Ok((v, Some(Check::new(residual, tol))))
}

fn ic_json(pv: &ParameterVector, x: &PointConfiguration) -> Result<Value> {
    let (phis, psis) = standard_frames(pv, x)?;
    let c = cohomology_matrix(&phis, &psis, pv, x)?;
    Ok(json!({
        "x": x.x,
        "C": matrix_json(to_rows(&c)),
        "rank": rank(&c, 1e-10),
        "phi": phis.iter().map(form_json).collect::<Vec<_>>(),
        "psi": psis.iter().map(form_json).collect::<Vec<_>>(),
    }))
}

fn pfaffian_json(job: &JobSpec, obj: &Map<String, Value>, pv: &ParameterVector) -> Result<Value> {
    let at = match job.at.as_ref().or_else(|| obj.get("at")) {
        Some(v) => parse_point(v, pv.m, "at")?,
        None => configuration(obj, pv)?.x,
    };
    let sys = PfaffianSystem::new(pv, job.kind);
    let comps = sys.at(&at)?;
    let residues: Vec<Value> = residue_matrices(pv)
        .r
        .iter()
        .map(|(&(i, j), r)| json!({"i": i, "j": j, "R": matrix_json(to_rows(r))}))
        .collect();
    Ok(json!({
        "kind": job.kind,
        "at": at,
        "components": comps.iter().map(|w| matrix_json(to_rows(w))).collect::<Vec<_>>(),
        "residue_matrices": residues,
        "eigenvalues": eigen_report(pv),
    }))
}

fn monodromy_json(job: &JobSpec, pv: &ParameterVector) -> Result<(Value, Option<Check>)> {
    let tol = tolerance(job, 1e-10)?;
    let pairs = select_pairs(pv.m, &job.pairs)?;
    let mut worst: f64 = 0.0;
    let mut out = Vec::new();
    for cm in all_circuit_matrices(pv)? {
        if !pairs.contains(&(cm.p, cm.q)) {
            continue;
        }
        worst = worst.max((cm.det - cm.expected_det).norm());
        out.push(json!({
            "p": cm.p,
            "q": cm.q,
            "M": matrix_json(to_rows(&cm.m)),
            "y": cm.y.iter().collect::<Vec<_>>(),
            "z": cm.z.iter().collect::<Vec<_>>(),
            "det": cm.det,
            "degenerate": cm.degenerate,
        }));
    }
    Ok((json!(out), Some(Check::new(worst, tol))))
}

fn verify_json(job: &JobSpec, t: VerifyTarget, obj: &Map<String, Value>, pv: &ParameterVector) -> Result<(Value, Option<Check>)> {
    let tol = tolerance(job, t.default_tolerance())?;
    match t {
        VerifyTarget::Tpr => {
            let x = configuration(obj, pv)?;
            let rep = verify_tpr(pv, &x, QUADRATURE_TOL)?;
            let residual = rep.residual;
            Ok((json!({"x": x.x, "report": rep}), Some(Check::new(residual, tol))))
        }
        VerifyTarget::Euler => {
            let x = match obj.get("x") {
                Some(v) => parse_point(v, pv.m, "x")?,
                None => return Err(Error::Malformed("`verify euler` needs `x` inside the unit polydisc".into())),
            };
            let (a, b, c) = pv.abc();
            let rep = euler_check(a, &b, c, &x, QUADRATURE_TOL)?;
            let residual = rep.residual;
            Ok((json!({"x": x, "a": a, "b": b, "c": c, "report": rep}), Some(Check::new(residual, tol))))
        }
        VerifyTarget::Monodromy => {
            let x = configuration(obj, pv)?;
            let pairs = select_pairs(pv.m, &job.pairs)?;
            let rep = verify_monodromy(pv, &x, job.kind, &pairs, QUADRATURE_TOL)?;
            let residual = rep.max_residual.max(rep.max_det_residual);
            Ok((json!({"x": x.x, "report": rep}), Some(Check::new(residual, tol))))
        }
        VerifyTarget::Integrability => {
            let sys = PfaffianSystem::new(pv, job.kind);
            let rep = check_integrability(&sys, INTEGRABILITY_TRIALS, job.seed)?;
            let eig = eigen_report(pv);
            let eig_res = eig.iter().map(|e| e.charpoly_residual).fold(0.0, f64::max);
            let residual = rep.flatness_residual.max(rep.commutator_residual).max(eig_res);
            Ok((json!({"kind": job.kind, "report": rep, "eigenvalues": eig}), Some(Check::new(residual, tol))))
        }
    }
}

fn eval_json(obj: &Map<String, Value>, pv: &ParameterVector) -> Result<Value> {
    let x = match obj.get("x") {
        Some(v) => parse_point(v, pv.m, "x")?,
        None => return Err(Error::Malformed("`eval` needs `x` inside the unit polydisc".into())),
    };
    let (a, b, c) = pv.abc();
    let s = fd_series(a, &b, c, &x, QUADRATURE_TOL)?;
    Ok(json!({"x": x, "a": a, "b": b, "c": c, "fd": s}))
}
