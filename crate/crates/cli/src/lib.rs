//! Batch front end: a [`JobSpec`] in, one JSON or text document out.

use std::fmt::Write as _;

use numring_core::arakelov::{self, FractionalIdeal, Metric, MetrizedLineBundle};
use numring_core::dilog;
use numring_core::expr::element_from_json;
use numring_core::heights;
use numring_core::kmodel::{self, build_model};
use numring_core::mp::{parse_complex, parse_rational, Complex, Real};
use numring_core::nf::{self, FieldDescription, FieldElement, NumberField};
use numring_core::regulator::{self, EMBEDDING_ORDER};
use numring_core::relations::{self, BlochElement};
use numring_core::{Error, PrecisionContext};
use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;
pub const DEFAULT_PRECISION: u32 = 50;

pub const COMMANDS: [&str; 8] =
    ["field-info", "dilog", "bloch-check", "regulator", "unit-reg", "degree", "height", "kranks"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: String,
    pub field: Option<Value>,
    pub payload: Map<String, Value>,
    pub precision: u32,
    pub output: OutputFormat,
}

/// A failed job: exit code and a one-line diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct JobError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl JobError {
    pub fn schema(message: impl Into<String>) -> Self {
        JobError { code: 1, kind: "schema".into(), message: message.into() }
    }

    /// Single-line JSON, safe to parse from stderr.
    pub fn to_line(&self) -> String {
        json!({"schema": SCHEMA, "error": self.kind, "exit": self.code, "message": self.message}).to_string()
    }
}

impl From<Error> for JobError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Format(_) => 1,
            Error::Precision(_) => 3,
            _ => 2,
        };
        let message = match &e {
            Error::Format(m)
            | Error::Arithmetic(m)
            | Error::Domain(m)
            | Error::Precision(m)
            | Error::Squarefree(m)
            | Error::PresentationIncomplete(m)
            | Error::Membership(m)
            | Error::Principality(m)
            | Error::FieldMismatch(m) => m.clone(),
        };
        JobError { code, kind: e.kind().into(), message }
    }
}

type JobResult<T> = std::result::Result<T, JobError>;

/// Parses a stdin job document.
pub fn parse_job(doc: &str) -> JobResult<JobSpec> {
    let v: Value = serde_json::from_str(doc).map_err(|e| JobError::schema(format!("job: invalid JSON: {e}")))?;
    let Value::Object(obj) = v else {
        return Err(JobError::schema("job: expected a JSON object"));
    };
    check_keys(&obj, "job", &["schema", "command", "field", "payload", "precision", "output"])?;
    check_schema(&obj, "job")?;
    let command = match obj.get("command") {
        Some(Value::String(s)) => s.clone(),
        _ => return Err(JobError::schema("job.command: required string")),
    };
    let payload = match obj.get("payload") {
        None => Map::new(),
        Some(Value::Object(m)) => m.clone(),
        Some(_) => return Err(JobError::schema("job.payload: expected an object")),
    };
    let precision = match obj.get("precision") {
        None => DEFAULT_PRECISION,
        Some(v) => v
            .as_u64()
            .and_then(|p| u32::try_from(p).ok())
            .ok_or_else(|| JobError::schema("job.precision: expected a positive integer"))?,
    };
    let output = match obj.get("output").and_then(Value::as_str) {
        None if obj.get("output").is_none() => OutputFormat::Json,
        Some("json") => OutputFormat::Json,
        Some("text") => OutputFormat::Text,
        _ => return Err(JobError::schema("job.output: expected \"text\" or \"json\"")),
    };
    Ok(JobSpec { command, field: obj.get("field").cloned(), payload, precision, output })
}

fn check_keys(obj: &Map<String, Value>, ctx: &str, allowed: &[&str]) -> JobResult<()> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(JobError::schema(format!("{ctx}.{k}: unknown key")));
        }
    }
    Ok(())
}

fn check_schema(obj: &Map<String, Value>, ctx: &str) -> JobResult<()> {
    match obj.get("schema") {
        None => Ok(()),
        Some(v) if v.as_u64() == Some(SCHEMA) => Ok(()),
        Some(v) => Err(JobError::schema(format!("{ctx}.schema: unsupported version {v}"))),
    }
}

fn field_of(job: &JobSpec) -> JobResult<NumberField> {
    let Some(v) = &job.field else {
        return Err(JobError::schema("field: required for this command"));
    };
    let desc: FieldDescription =
        serde_json::from_value(v.clone()).map_err(|e| JobError::schema(format!("field: {e}")))?;
    Ok(nf::parse_field(&desc)?)
}

fn required<'a>(p: &'a Map<String, Value>, key: &str) -> JobResult<&'a Value> {
    p.get(key).ok_or_else(|| JobError::schema(format!("payload.{key}: required")))
}

fn element(k: &NumberField, v: &Value, key: &str) -> JobResult<FieldElement> {
    element_from_json(k, v).map_err(|e| match e {
        Error::Format(m) => JobError::schema(format!("payload.{key}: {m}")),
        other => other.into(),
    })
}

fn element_list(k: &NumberField, v: &Value, key: &str) -> JobResult<Vec<FieldElement>> {
    let Value::Array(items) = v else {
        return Err(JobError::schema(format!("payload.{key}: expected an array of elements")));
    };
    items.iter().enumerate().map(|(i, x)| element(k, x, &format!("{key}[{i}]"))).collect()
}

fn fixed(x: &Real, digits: u32) -> Value {
    Value::String(x.to_fixed(digits as usize))
}

fn complex_json(z: &Complex, digits: u32) -> Value {
    json!({"re": fixed(&z.re, digits), "im": fixed(&z.im, digits)})
}

fn ints_json(xs: &[num_bigint::BigInt]) -> Value {
    Value::Array(
        xs.iter()
            .map(|x| match i64::try_from(x) {
                Ok(v) => json!(v),
                Err(_) => json!(x.to_string()),
            })
            .collect(),
    )
}

/// Runs a job and renders its output.
pub fn run(job: &JobSpec) -> JobResult<String> {
    let ctx = PrecisionContext::new(job.precision)?;
    let mut body = match job.command.as_str() {
        "field-info" => field_info(job)?,
        "dilog" => dilog_cmd(job, &ctx)?,
        "bloch-check" => bloch_check(job, &ctx)?,
        "regulator" => regulator_cmd(job, &ctx)?,
        "unit-reg" => unit_reg(job)?,
        "degree" => degree_cmd(job)?,
        "height" => height_cmd(job)?,
        "kranks" => kranks(job)?,
        other => return Err(JobError::schema(format!("command: unknown command {other:?}"))),
    };
    body.insert("schema".into(), json!(SCHEMA));
    body.insert("command".into(), json!(job.command));
    body.insert("precision".into(), json!(job.precision));
    let v = Value::Object(body);
    Ok(match job.output {
        OutputFormat::Json => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
        OutputFormat::Text => render_text(&v),
    })
}

fn field_info(job: &JobSpec) -> JobResult<Map<String, Value>> {
    check_keys(&job.payload, "payload", &[])?;
    let k = field_of(job)?;
    let e = k.embeddings(job.precision)?;
    let (r1, r2) = e.signature();
    let mut m = Map::new();
    m.insert("field".into(), serde_json::to_value(k.description()).expect("serializable"));
    m.insert("degree".into(), json!(k.degree()));
    m.insert("signature".into(), json!([r1, r2]));
    m.insert("poly_discriminant".into(), json!(k.poly_discriminant().to_string()));
    m.insert("maximal".into(), json!(k.maximality_asserted()));
    m.insert("irreducibility_certified".into(), json!(k.irreducibility_certified()));
    m.insert("embedding_order".into(), json!(EMBEDDING_ORDER));
    m.insert("embeddings".into(), e.roots().iter().map(|z| complex_json(z, job.precision)).collect());
    m.insert("conjugation".into(), json!(e.pairing()));
    Ok(m)
}

fn dilog_cmd(job: &JobSpec, ctx: &PrecisionContext) -> JobResult<Map<String, Value>> {
    check_keys(&job.payload, "payload", &["z"])?;
    let z = match required(&job.payload, "z")? {
        Value::String(s) => parse_complex(s, ctx.bits()).map_err(|e| JobError::schema(format!("payload.z: {e}")))?,
        _ => return Err(JobError::schema("payload.z: expected a complex number string")),
    };
    let mut m = Map::new();
    m.insert("z".into(), complex_json(&z, job.precision));
    m.insert("li2".into(), complex_json(&dilog::li2(&z, ctx), job.precision));
    m.insert("bloch_wigner".into(), fixed(&dilog::bloch_wigner(&z, ctx), job.precision));
    Ok(m)
}

fn default_generators(k: &NumberField, candidates: &[FieldElement]) -> Vec<FieldElement> {
    let mut gens = vec![k.from_int(-1)];
    for l in candidates {
        for g in [l.clone(), k.sub(&k.one(), l)] {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
    }
    gens
}

fn bloch_json(b: &BlochElement) -> Value {
    json!(b.multiplicities)
}

fn bloch_check(job: &JobSpec, ctx: &PrecisionContext) -> JobResult<Map<String, Value>> {
    check_keys(&job.payload, "payload", &["candidates", "generators"])?;
    let k = field_of(job)?;
    let cands = element_list(&k, required(&job.payload, "candidates")?, "candidates")?;
    let gens = match job.payload.get("generators") {
        Some(v) => element_list(&k, v, "generators")?,
        None => default_generators(&k, &cands),
    };
    let pres = relations::relation_lattice(&k, &gens, job.precision)?;
    let sq = pres.exterior_square();
    let kernel = relations::bloch_kernel(&cands, &pres)?;
    let coarse = relations::bloch_kernel_mod_torsion(&cands, &pres)?;
    let exact_rows: Vec<_> = kernel
        .iter()
        .map(|b| b.multiplicities.iter().map(|&x| num_bigint::BigInt::from(x)).collect::<Vec<_>>())
        .collect();
    let flagged: Vec<Value> = coarse
        .iter()
        .filter(|b| {
            let r: Vec<_> = b.multiplicities.iter().map(|&x| num_bigint::BigInt::from(x)).collect();
            !numring_core::intmat::in_lattice(&r, &exact_rows)
        })
        .map(bloch_json)
        .collect();
    let e = k.embeddings(job.precision)?;
    let mut basis = Vec::new();
    for b in &kernel {
        let v = regulator::k3_regulator(b, &e, ctx)?;
        basis.push(json!({
            "multiplicities": b.multiplicities,
            "regulator": v.values.iter().map(|x| fixed(x, job.precision)).collect::<Vec<_>>(),
        }));
    }
    let mut m = Map::new();
    m.insert("candidates".into(), cands.iter().map(|c| json!(c.to_record().coeffs)).collect());
    m.insert("generators".into(), gens.iter().map(|c| json!(c.to_record().coeffs)).collect());
    m.insert("relation_basis".into(), pres.relation_basis().iter().map(|r| ints_json(r)).collect());
    m.insert("torsion_order".into(), json!(pres.torsion_order().to_string()));
    m.insert("lambda2_invariants".into(), ints_json(&sq.invariants()));
    m.insert("kernel_basis".into(), Value::Array(basis));
    m.insert("vanish_only_mod_torsion".into(), Value::Array(flagged));
    m.insert("weight".into(), json!("k3"));
    m.insert("embedding_order".into(), json!(EMBEDDING_ORDER));
    Ok(m)
}

fn regulator_cmd(job: &JobSpec, ctx: &PrecisionContext) -> JobResult<Map<String, Value>> {
    check_keys(&job.payload, "payload", &["element", "generators", "two_pi"])?;
    let k = field_of(job)?;
    let raw = required(&job.payload, "element")?;
    let Value::Object(obj) = raw else {
        return Err(JobError::schema("payload.element: expected {\"support\": [...], \"multiplicities\": [...]}"));
    };
    check_keys(obj, "payload.element", &["support", "multiplicities"])?;
    let support = element_list(&k, obj.get("support").unwrap_or(&Value::Null), "element.support")?;
    let mult: Vec<i64> = serde_json::from_value(obj.get("multiplicities").cloned().unwrap_or(Value::Null))
        .map_err(|e| JobError::schema(format!("payload.element.multiplicities: {e}")))?;
    let x = BlochElement::new(support, mult).map_err(|e| JobError::schema(format!("payload.element: {e}")))?;
    let e = k.embeddings(job.precision)?;
    let v = match job.payload.get("generators") {
        Some(g) => {
            let gens = element_list(&k, g, "generators")?;
            let pres = relations::relation_lattice(&k, &gens, job.precision)?;
            regulator::k3_regulator_checked(&x, &pres, &e, ctx)?
        }
        None => regulator::k3_regulator(&x, &e, ctx)?,
    };
    let two_pi = match job.payload.get("two_pi") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(JobError::schema("payload.two_pi: expected a boolean")),
    };
    let rec = v.to_record(job.precision as usize);
    let mut m = Map::new();
    m.insert("weight".into(), json!(rec.weight));
    m.insert("values".into(), json!(rec.values));
    if two_pi {
        m.insert("values_over_2pi".into(), v.over_two_pi().iter().map(|x| fixed(x, job.precision)).collect());
    }
    m.insert("embedding_order".into(), json!(rec.embedding_order));
    m.insert("element".into(), serde_json::to_value(x.to_record()).expect("serializable"));
    Ok(m)
}

fn unit_reg(job: &JobSpec) -> JobResult<Map<String, Value>> {
    check_keys(&job.payload, "payload", &["unit"])?;
    let k = field_of(job)?;
    let u = element(&k, required(&job.payload, "unit")?, "unit")?;
    let e = k.embeddings(job.precision)?;
    let v = regulator::unit_regulator(&k, &u, &e)?;
    let s = regulator::s_map(&v)?;
    let rec = v.to_record(job.precision as usize);
    let mut m = Map::new();
    m.insert("weight".into(), json!(rec.weight));
    m.insert("values".into(), json!(rec.values));
    m.insert("s_map".into(), fixed(&s, job.precision));
    m.insert("embedding_order".into(), json!(rec.embedding_order));
    Ok(m)
}

/// Bundle payload: `ideal_basis` (rows of rational strings) or `ideal_generators`
/// (elements), and an optional `metric`; the default is the metric induced by `|.|^2`.
fn bundle(k: &NumberField, v: &Value, e: &nf::EmbeddingSet) -> JobResult<MetrizedLineBundle> {
    let Value::Object(obj) = v else {
        return Err(JobError::schema("payload.bundle: expected an object"));
    };
    check_keys(obj, "payload.bundle", &["ideal_basis", "ideal_generators", "metric"])?;
    let ideal = match (obj.get("ideal_basis"), obj.get("ideal_generators")) {
        (Some(b), None) => {
            let rows: Vec<Vec<String>> = serde_json::from_value(b.clone())
                .map_err(|err| JobError::schema(format!("payload.bundle.ideal_basis: {err}")))?;
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|err| JobError::schema(format!("payload.bundle.ideal_basis: {err}")))?;
            FractionalIdeal::from_basis(k, &rows)?
        }
        (None, Some(g)) => FractionalIdeal::from_generators(k, &element_list(k, g, "bundle.ideal_generators")?)?,
        (None, None) => FractionalIdeal::unit(k),
        (Some(_), Some(_)) => {
            return Err(JobError::schema("payload.bundle: give ideal_basis or ideal_generators, not both"))
        }
    };
    match obj.get("metric") {
        None => Ok(MetrizedLineBundle::standard(ideal, e)?),
        Some(mv) => {
            let vals: Vec<String> = serde_json::from_value(mv.clone())
                .map_err(|err| JobError::schema(format!("payload.bundle.metric: {err}")))?;
            let vals = vals
                .iter()
                .map(|s| parse_rational(s).map(|q| Real::from_rational(&q, e.bits())))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|err| JobError::schema(format!("payload.bundle.metric: {err}")))?;
            Ok(MetrizedLineBundle::new(ideal, Metric::new(vals, e)?, e)?)
        }
    }
}

fn degree_cmd(job: &JobSpec) -> JobResult<Map<String, Value>> {
    check_keys(&job.payload, "payload", &["bundle", "section"])?;
    let k = field_of(job)?;
    let e = k.embeddings(job.precision)?;
    let l = bundle(&k, required(&job.payload, "bundle")?, &e)?;
    let s = match job.payload.get("section") {
        Some(v) => element(&k, v, "section")?,
        None => l.ideal().reference_section(),
    };
    let d = arakelov::arithmetic_degree(&l, Some(&s))?;
    let idx = arakelov::index_quotient(l.ideal(), &s)?;
    let mut m = Map::new();
    m.insert("ideal_norm".into(), json!(numring_core::mp::format_rational(&arakelov::ideal_norm(l.ideal()))));
    m.insert("index_quotient".into(), json!(numring_core::mp::format_rational(&idx)));
    m.insert("section".into(), json!(s.to_record().coeffs));
    m.insert("arithmetic_degree".into(), fixed(&d, job.precision));
    m.insert("bundle".into(), serde_json::to_value(arakelov::BundleRecord::from_bundle(&l, job.precision as usize)).expect("serializable"));
    Ok(m)
}

fn height_cmd(job: &JobSpec) -> JobResult<Map<String, Value>> {
    check_keys(&job.payload, "payload", &["bundle", "n", "generator"])?;
    let k = field_of(job)?;
    let e = k.embeddings(job.precision)?;
    let l = bundle(&k, required(&job.payload, "bundle")?, &e)?;
    let n = match job.payload.get("n") {
        None => 1,
        Some(v) => v
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .filter(|&x| x > 0)
            .ok_or_else(|| JobError::schema("payload.n: expected a positive integer"))?,
    };
    let g = element(&k, required(&job.payload, "generator")?, "generator")?;
    let h = heights::c_hat_height(&l, n, &g)?;
    let d = arakelov::arithmetic_degree(&l, None)?;
    let mut m = Map::new();
    m.insert("n".into(), json!(n));
    m.insert("height".into(), fixed(&h, job.precision));
    m.insert("arithmetic_degree".into(), fixed(&d, job.precision));
    m.insert("difference".into(), fixed(&(&h - &d).abs(), job.precision));
    Ok(m)
}

fn kranks(job: &JobSpec) -> JobResult<Map<String, Value>> {
    check_keys(&job.payload, "payload", &["max_p"])?;
    let k = field_of(job)?;
    let max_p = match job.payload.get("max_p") {
        None => kmodel::DEFAULT_MAX_P,
        Some(v) => v
            .as_u64()
            .and_then(|x| u32::try_from(x).ok())
            .filter(|&x| x > 0)
            .ok_or_else(|| JobError::schema("payload.max_p: expected a positive integer"))?,
    };
    let e = k.embeddings(job.precision.clamp(PrecisionContext::MIN_DIGITS, 30))?;
    let model = build_model(&e, max_p);
    let (r1, r2) = model.signature();
    let mut m = Map::new();
    m.insert("signature".into(), json!([r1, r2]));
    m.insert("table".into(), serde_json::to_value(kmodel::rank_table(&model)).expect("serializable"));
    Ok(m)
}

/// `key: value` lines; nested keys joined with `.`, array items indexed.
pub fn render_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
                let parts: Vec<String> = items.iter().map(scalar).collect();
                let _ = writeln!(out, "{prefix}: [{}]", parts.join(", "));
            }
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            _ => {
                let _ = writeln!(out, "{prefix}: {}", scalar(v));
            }
        }
    }
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}
