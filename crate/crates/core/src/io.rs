//! File formats.
//!
//! Sources and witnesses are JSON. A matrix is an array of rows and every
//! entry is a `[re, im]` pair:
//!
//! ```json
//! {"type": "classical", "p": [[0.45, 0.05], [0.10, 0.40]]}
//! {"type": "cq", "p": [0.5, 0.5],
//!  "states": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]]}
//! {"type": "bipartite", "dims": [2, 2], "states": [<4x4 matrix>]}
//! ```
//!
//! A bipartite source is the mixture `Σ p_k states[k]`; `p` defaults to `[1]`.
//! Unknown keys are rejected and every error names the offending field.
//!
//! A witness file carries its source, the claimed rate pair and the witness
//! itself, so `validate --witness` needs nothing else. Results are CSV with
//! one leading `#` comment line holding the run parameters.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::codec::Mode;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, DensityMatrix, Povm};
use crate::measurement::rate_point_qhelper;
use crate::regions::{rate_point_chelper, rate_point_fq, ChannelIsometry, RatePoint, TestChannel, Witness};
use crate::sources::{BipartiteSource, CQSource, ClassicalJoint};

/// A parsed source file.
#[derive(Debug, Clone)]
pub enum SourceSpec {
    Classical(ClassicalJoint),
    Cq(CQSource),
    Bipartite(BipartiteSource),
}

impl SourceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SourceSpec::Classical(_) => "classical",
            SourceSpec::Cq(_) => "cq",
            SourceSpec::Bipartite(_) => "bipartite",
        }
    }

    pub fn classical(&self) -> Result<&ClassicalJoint> {
        match self {
            SourceSpec::Classical(j) => Ok(j),
            other => Err(wrong_kind("classical", other.kind())),
        }
    }

    pub fn cq(&self) -> Result<&CQSource> {
        match self {
            SourceSpec::Cq(s) => Ok(s),
            other => Err(wrong_kind("cq", other.kind())),
        }
    }

    pub fn bipartite(&self) -> Result<&BipartiteSource> {
        match self {
            SourceSpec::Bipartite(s) => Ok(s),
            other => Err(wrong_kind("bipartite", other.kind())),
        }
    }
}

fn wrong_kind(want: &str, got: &str) -> Error {
    Error::input("type", format!("expected a {want} source, got {got}"))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

/// Wraps a validation failure so that it names the field it came from.
fn at(field: &str, e: Error) -> Error {
    match e {
        Error::Input { .. } => e,
        other => Error::input(field, format!("{other} [{}]", other.name())),
    }
}

fn object<'a>(v: &'a Value, field: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::input(field_or_root(field), "expected a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::input(
            format!("{field}{k}"),
            format!("unknown field; expected one of {}", allowed.join(", ")),
        ));
    }
    Ok(obj)
}

fn field_or_root(prefix: &str) -> String {
    let f = prefix.trim_end_matches('.');
    if f.is_empty() {
        "<document>".into()
    } else {
        f.into()
    }
}

fn take<T: serde::de::DeserializeOwned>(obj: &Map<String, Value>, prefix: &str, key: &str) -> Result<Option<T>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| Error::input(format!("{prefix}{key}"), e.to_string())),
    }
}

fn require<T: serde::de::DeserializeOwned>(obj: &Map<String, Value>, prefix: &str, key: &str) -> Result<T> {
    take(obj, prefix, key)?.ok_or_else(|| Error::input(format!("{prefix}{key}"), "missing"))
}

type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect())
        .collect();
    Value::Array(rows)
}

fn matrix_from_json(rows: &MatrixJson, field: &str) -> Result<ComplexMatrix> {
    let converted: Vec<Vec<_>> = rows
        .iter()
        .map(|r| r.iter().map(|e| c(e[0], e[1])).collect())
        .collect();
    let m = ComplexMatrix::from_rows(&converted).map_err(|e| at(field, e))?;
    if !m.is_finite() {
        return Err(Error::input(field, "non-finite entry"));
    }
    Ok(m)
}

fn density(rows: &MatrixJson, field: &str) -> Result<DensityMatrix> {
    DensityMatrix::new(matrix_from_json(rows, field)?).map_err(|e| at(field, e))
}

/// Parses a source object; `prefix` is prepended to field names in errors.
pub fn source_from_value(v: &Value, prefix: &str) -> Result<SourceSpec> {
    let obj = object(v, prefix, &["type", "name", "p", "states", "dims"])?;
    let kind: String = require(obj, prefix, "type")?;
    let f = |k: &str| format!("{prefix}{k}");
    let forbid = |k: &str| -> Result<()> {
        if obj.contains_key(k) {
            Err(Error::input(f(k), format!("not used by {kind} sources")))
        } else {
            Ok(())
        }
    };
    match kind.as_str() {
        "classical" => {
            forbid("states")?;
            forbid("dims")?;
            let rows: Vec<Vec<f64>> = require(obj, prefix, "p")?;
            let j = ClassicalJoint::from_rows(&rows).map_err(|e| at(&f("p"), e))?;
            Ok(SourceSpec::Classical(j))
        }
        "cq" => {
            forbid("dims")?;
            let p: Vec<f64> = require(obj, prefix, "p")?;
            let raw: Vec<MatrixJson> = require(obj, prefix, "states")?;
            if raw.is_empty() {
                return Err(Error::input(f("states"), "must not be empty"));
            }
            let states = raw
                .iter()
                .enumerate()
                .map(|(k, m)| density(m, &format!("{prefix}states[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let field = if p.len() == states.len() { f("p") } else { f("states") };
            let src = CQSource::new(p, states).map_err(|e| at(&field, e))?;
            Ok(SourceSpec::Cq(src))
        }
        "bipartite" => {
            let dims: [usize; 2] = require(obj, prefix, "dims")?;
            let raw: Vec<MatrixJson> = require(obj, prefix, "states")?;
            let p: Vec<f64> = take(obj, prefix, "p")?.unwrap_or_else(|| vec![1.0]);
            if raw.is_empty() || p.len() != raw.len() {
                return Err(Error::input(
                    f("p"),
                    format!("{} weights for {} states", p.len(), raw.len()),
                ));
            }
            crate::entropy::Distribution::new(p.clone()).map_err(|e| at(&f("p"), e))?;
            let d = dims[0] * dims[1];
            let mut rho = ComplexMatrix::square_zeros(d);
            for (k, (m, &w)) in raw.iter().zip(&p).enumerate() {
                let field = format!("{prefix}states[{k}]");
                let s = density(m, &field)?;
                if s.dim() != d {
                    return Err(Error::input(
                        field,
                        format!("dimension {} does not match dims {dims:?}", s.dim()),
                    ));
                }
                rho.add_scaled(s.matrix(), w);
            }
            let rho = DensityMatrix::new(rho).map_err(|e| at(&f("states"), e))?;
            let src = BipartiteSource::new(rho, (dims[0], dims[1])).map_err(|e| at(&f("dims"), e))?;
            Ok(SourceSpec::Bipartite(src))
        }
        other => Err(Error::input(
            f("type"),
            format!("`{other}` is not one of classical, cq, bipartite"),
        )),
    }
}

pub fn parse_source(text: &str) -> Result<SourceSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::input("<document>", e.to_string()))?;
    source_from_value(&v, "")
}

pub fn read_source(path: &Path) -> Result<SourceSpec> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_source(&text)
}

pub fn source_to_value(src: &SourceSpec) -> Value {
    match src {
        SourceSpec::Classical(j) => {
            let rows: Vec<Vec<f64>> = (0..j.nx())
                .map(|x| (0..j.ny()).map(|y| j.get(x, y)).collect())
                .collect();
            json!({"type": "classical", "p": rows})
        }
        SourceSpec::Cq(s) => json!({
            "type": "cq",
            "p": s.p(),
            "states": s.states().iter().map(|r| matrix_to_json(r.matrix())).collect::<Vec<_>>(),
        }),
        SourceSpec::Bipartite(s) => json!({
            "type": "bipartite",
            "dims": [s.dims().0, s.dims().1],
            "states": [matrix_to_json(s.rho().matrix())],
        }),
    }
}

/// Contents of a witness file.
#[derive(Debug, Clone)]
pub struct WitnessFile {
    pub source: Option<SourceSpec>,
    pub witness: Witness,
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub mu: Option<f64>,
    pub seed: Option<u64>,
    pub restart: Option<usize>,
}

fn witness_body(w: &Witness) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("type".into(), json!(w.kind()));
    match w {
        Witness::TestChannel(t) => {
            let rows: Vec<Vec<f64>> = (0..t.nu())
                .map(|u| (0..t.ny()).map(|y| t.get(u, y)).collect())
                .collect();
            m.insert("probs".into(), json!(rows));
        }
        Witness::Povm(p) => {
            let els: Vec<Value> = p.elements().iter().map(matrix_to_json).collect();
            m.insert("elements".into(), Value::Array(els));
        }
        Witness::Isometry(v) => {
            let (b, cc, e) = v.dims();
            m.insert("dims".into(), json!([b, cc, e]));
            m.insert("matrix".into(), matrix_to_json(v.matrix()));
        }
    }
    m
}

pub fn witness_to_value(point: &RatePoint, source: &SourceSpec) -> Value {
    let mut m = witness_body(&point.witness);
    m.insert("source".into(), source_to_value(source));
    m.insert("r1".into(), json!(point.r1));
    m.insert("r2".into(), json!(point.r2));
    if let Some(mu) = point.mu {
        m.insert("mu".into(), json!(mu));
    }
    m.insert("seed".into(), json!(point.seed));
    if let Some(r) = point.restart {
        m.insert("restart".into(), json!(r));
    }
    Value::Object(m)
}

pub fn parse_witness(text: &str) -> Result<WitnessFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::input("<document>", e.to_string()))?;
    let obj = object(
        &v,
        "",
        &["type", "source", "r1", "r2", "mu", "seed", "restart", "probs", "elements", "dims", "matrix"],
    )?;
    let kind: String = require(obj, "", "type")?;
    let witness = match kind.as_str() {
        "test_channel" => {
            let rows: Vec<Vec<f64>> = require(obj, "", "probs")?;
            let ny = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != ny) {
                return Err(Error::input("probs", "rows differ in length"));
            }
            let flat = rows.concat();
            Witness::TestChannel(TestChannel::new(rows.len(), ny, flat).map_err(|e| at("probs", e))?)
        }
        "povm" => {
            let raw: Vec<MatrixJson> = require(obj, "", "elements")?;
            let els = raw
                .iter()
                .enumerate()
                .map(|(k, m)| matrix_from_json(m, &format!("elements[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            Witness::Povm(Povm::new(els).map_err(|e| at("elements", e))?)
        }
        "isometry" => {
            let [b, cc, e]: [usize; 3] = require(obj, "", "dims")?;
            let raw: MatrixJson = require(obj, "", "matrix")?;
            let m = matrix_from_json(&raw, "matrix")?;
            Witness::Isometry(ChannelIsometry::new(m, b, cc, e).map_err(|e| at("matrix", e))?)
        }
        other => {
            return Err(Error::input(
                "type",
                format!("`{other}` is not one of test_channel, povm, isometry"),
            ))
        }
    };
    let source = match obj.get("source") {
        None | Some(Value::Null) => None,
        Some(s) => Some(source_from_value(s, "source.")?),
    };
    Ok(WitnessFile {
        source,
        witness,
        r1: take(obj, "", "r1")?,
        r2: take(obj, "", "r2")?,
        mu: take(obj, "", "mu")?,
        seed: take(obj, "", "seed")?,
        restart: take(obj, "", "restart")?,
    })
}

pub fn read_witness(path: &Path) -> Result<WitnessFile> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_witness(&text)
}

/// Reads a test channel from a witness-format file; other keys are optional.
pub fn read_test_channel(path: &Path) -> Result<TestChannel> {
    match read_witness(path)?.witness {
        Witness::TestChannel(t) => Ok(t),
        other => Err(Error::input(
            "type",
            format!("expected a test_channel, got {}", other.kind()),
        )),
    }
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string(v).map_err(|e| io_err(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// Rate pair of `witness` on `source`, recomputed from scratch.
pub fn recompute(source: &SourceSpec, witness: &Witness) -> Result<(f64, f64)> {
    let p = match (source, witness) {
        (SourceSpec::Classical(j), Witness::TestChannel(t)) => rate_point_chelper(j, t)?,
        (SourceSpec::Cq(s), Witness::Povm(m)) => rate_point_qhelper(s, m)?,
        (SourceSpec::Bipartite(s), Witness::Isometry(v)) => rate_point_fq(s, v)?,
        (s, w) => {
            return Err(Error::input(
                "type",
                format!("a {} witness does not apply to a {} source", w.kind(), s.kind()),
            ))
        }
    };
    Ok((p.r1, p.r2))
}

/// `# helperrate <command> generated_unix=<t> k=v ...`, the only line of a
/// result file that varies between identical runs.
pub fn header_line(command: &str, params: &[(String, String)]) -> String {
    let t = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let mut s = format!("# helperrate {command} generated_unix={t}");
    for (k, v) in params {
        s.push(' ');
        s.push_str(k);
        s.push('=');
        s.push_str(v);
    }
    s
}

fn csv_writer(path: &Path, header: &str) -> Result<csv::Writer<fs::File>> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    writeln!(f, "{header}").map_err(|e| io_err(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

fn finish(path: &Path, w: csv::Writer<fs::File>) -> Result<()> {
    w.into_inner()
        .map_err(|e| io_err(path, e))?
        .sync_all()
        .map_err(|e| io_err(path, e))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Directory next to `csv` that holds its witness files.
pub fn witness_dir(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map_or_else(|| "curve".into(), |s| s.to_string_lossy().into_owned());
    csv.with_file_name(format!("{stem}.witnesses"))
}

/// Writes `mu,r1_bits,r2_bits,seed,restart,witness_file` rows together with
/// one witness file per row. `witness_file` is relative to the CSV's
/// directory. Returns the number of rows.
pub fn write_curve_csv(path: &Path, header: &str, rows: &[RatePoint], source: &SourceSpec) -> Result<usize> {
    let dir = witness_dir(path);
    if dir.is_dir() {
        // stale witnesses from an earlier, longer run
        for entry in fs::read_dir(&dir).map_err(|e| io_err(&dir, e))?.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if name.ends_with(".json") && name[..name.len() - 5].bytes().all(|b| b.is_ascii_digit()) {
                fs::remove_file(entry.path()).map_err(|e| io_err(&entry.path(), e))?;
            }
        }
    } else {
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    }
    let dir_name = dir.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let mut w = csv_writer(path, header)?;
    w.write_record(["mu", "r1_bits", "r2_bits", "seed", "restart", "witness_file"])
        .map_err(|e| io_err(path, e))?;
    for (k, p) in rows.iter().enumerate() {
        let file = format!("{k:04}.json");
        write_json(&dir.join(&file), &witness_to_value(p, source))?;
        w.write_record([
            opt(p.mu),
            p.r1.to_string(),
            p.r2.to_string(),
            p.seed.to_string(),
            opt(p.restart),
            format!("{dir_name}/{file}"),
        ])
        .map_err(|e| io_err(path, e))?;
    }
    finish(path, w)?;
    Ok(rows.len())
}

/// One row of a block-error simulation; `r2` is empty for Slepian-Wolf runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub r1: f64,
    pub r2: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub error_rate: f64,
}

pub fn write_error_csv(path: &Path, header: &str, rows: &[ErrorRow]) -> Result<usize> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.r1.to_string(),
                opt(r.r2),
                r.trials.to_string(),
                r.seed.to_string(),
                r.error_rate.to_string(),
            ]
        })
        .collect();
    write_table(path, header, &["n", "r1", "r2", "trials", "seed", "error_rate"], &body)
}

/// Writes the comment line, the column names and `rows`.
pub fn write_table(path: &Path, header: &str, columns: &[&str], rows: &[Vec<String>]) -> Result<usize> {
    let mut w = csv_writer(path, header)?;
    w.write_record(columns).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_err(path, e))?;
    }
    finish(path, w)?;
    Ok(rows.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TvRow {
    pub n: usize,
    pub rate: f64,
    pub mode: Mode,
    pub tv: f64,
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::MonteCarlo => "mc",
    }
}

pub fn write_tv_csv(path: &Path, header: &str, rows: &[TvRow]) -> Result<usize> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.rate.to_string(),
                mode_name(r.mode).to_string(),
                r.tv.to_string(),
            ]
        })
        .collect();
    write_table(path, header, &["n", "rate", "mode", "tv"], &body)
}

/// The CSV body of a result file: everything after the leading comment line.
pub fn csv_body(text: &str) -> &str {
    match text.strip_prefix('#') {
        Some(rest) => rest.split_once('\n').map_or("", |(_, body)| body),
        None => text,
    }
}
