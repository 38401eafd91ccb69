//! JSON and CSV forms of functions, paths, certificates and reports.
//!
//! Input functions are JSON objects:
//! `{"breakpoints": ["0","1/3","1"], "values": ["2","-1"]}` for a step function
//! on `(0,1)`, or `{"cuts": [[…],[…]], "cells": [[…],[…]]}` for a grid function
//! with cells nested one array level per axis. Rationals are strings; plain
//! JSON integers and decimals are accepted and converted exactly.

use std::io::{Read, Write};

use serde::Serialize;
use serde_json::Value;

use crate::ccp::GrowthReport;
use crate::error::{Error, Result};
use crate::funcspace::{Cuboid, GridFunction, StepFunction1D};
use crate::jfnorm::{Family, Mode, NormCertificate, SearchStats};
use crate::rational::{format_rational, parse_rational, serde_rational, serde_rational_vec, Rational};
use crate::variation::{ModulusEstimate, SampledPath, Split};

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionInput {
    Step(StepFunction1D),
    Grid(GridFunction),
}

fn rational_at(v: &Value, field: &str) -> Result<Rational> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::parse(field, format!("expected a rational string, got {other}"))),
    };
    parse_rational(&text).map_err(|e| match e {
        Error::Parse { msg, .. } => Error::parse(field, msg),
        e => e,
    })
}

fn rational_list(v: &Value, field: &str) -> Result<Vec<Rational>> {
    let arr = v.as_array().ok_or_else(|| Error::parse(field, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| rational_at(x, &format!("{field}[{i}]")))
        .collect()
}

fn flatten_cells(v: &Value, depth: usize, shape: &[usize], field: &str, out: &mut Vec<Rational>) -> Result<()> {
    if depth == shape.len() {
        out.push(rational_at(v, field)?);
        return Ok(());
    }
    let arr = v
        .as_array()
        .ok_or_else(|| Error::parse(field, format!("expected an array at depth {depth}")))?;
    if arr.len() != shape[depth] {
        return Err(Error::parse(
            field,
            format!(
                "expected {} entries along axis {depth}, got {}",
                shape[depth],
                arr.len()
            ),
        ));
    }
    for (i, x) in arr.iter().enumerate() {
        flatten_cells(x, depth + 1, shape, &format!("{field}[{i}]"), out)?;
    }
    Ok(())
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::parse(name, "missing field"))
}

/// Parses a step function or grid function, telling them apart by their keys.
pub fn parse_function(text: &str) -> Result<FunctionInput> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::parse("json", e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::parse("json", "expected an object"))?;
    if obj.contains_key("breakpoints") {
        let bps = rational_list(field(obj, "breakpoints")?, "breakpoints")?;
        let vals = rational_list(field(obj, "values")?, "values")?;
        return StepFunction1D::new(bps, vals)
            .map(FunctionInput::Step)
            .map_err(|e| Error::parse("breakpoints", e.to_string()));
    }
    if obj.contains_key("cuts") {
        let cuts_v = field(obj, "cuts")?
            .as_array()
            .ok_or_else(|| Error::parse("cuts", "expected an array of arrays"))?;
        let cuts = cuts_v
            .iter()
            .enumerate()
            .map(|(i, c)| rational_list(c, &format!("cuts[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let shape: Vec<usize> = cuts.iter().map(|c| c.len().saturating_sub(1)).collect();
        let mut cells = vec![];
        flatten_cells(field(obj, "cells")?, 0, &shape, "cells", &mut cells)?;
        return GridFunction::new(cuts, cells)
            .map(FunctionInput::Grid)
            .map_err(|e| Error::parse("cuts", e.to_string()));
    }
    Err(Error::parse(
        "json",
        "expected \"breakpoints\"/\"values\" or \"cuts\"/\"cells\"",
    ))
}

#[derive(Serialize)]
struct StepJson<'a> {
    #[serde(with = "serde_rational_vec")]
    breakpoints: &'a [Rational],
    #[serde(with = "serde_rational_vec")]
    values: &'a [Rational],
}

pub fn step_to_json(f: &StepFunction1D) -> Value {
    serde_json::to_value(StepJson {
        breakpoints: f.breakpoints(),
        values: f.values(),
    })
    .expect("step function serializes")
}

#[derive(Serialize)]
pub struct BoxJson<'a> {
    #[serde(with = "serde_rational_vec")]
    lo: &'a [Rational],
    #[serde(with = "serde_rational_vec")]
    hi: &'a [Rational],
}

impl<'a> From<&'a Cuboid> for BoxJson<'a> {
    fn from(b: &'a Cuboid) -> Self {
        Self { lo: b.lo(), hi: b.hi() }
    }
}

#[derive(Serialize)]
struct DualJson<'a> {
    boxes: Vec<BoxJson<'a>>,
    coefficients: &'a [f64],
}

#[derive(Serialize)]
struct CertificateJson<'a> {
    value: f64,
    mode: Mode,
    family: Vec<BoxJson<'a>>,
    dual: Option<DualJson<'a>>,
    stats: &'a SearchStats,
}

/// Certificate JSON. `elapsed_ms` is written as given; callers wanting
/// reproducible bytes zero it first.
pub fn certificate_to_json(cert: &NormCertificate) -> Value {
    let boxes = match &cert.family {
        Family::Boxes(b) => b.clone(),
        Family::Partition(p) => p.intervals(),
    };
    let json = CertificateJson {
        value: cert.value,
        mode: cert.mode,
        family: boxes.iter().map(BoxJson::from).collect(),
        dual: cert.dual.as_ref().map(|d| DualJson {
            boxes: d.boxes().iter().map(BoxJson::from).collect(),
            coefficients: d.coefficients(),
        }),
        stats: &cert.stats,
    };
    serde_json::to_value(json).expect("certificate serializes")
}

#[derive(Serialize)]
struct PathJson<'a> {
    #[serde(with = "serde_rational_vec")]
    nodes: &'a [Rational],
    #[serde(with = "serde_rational_vec")]
    values: &'a [Rational],
}

pub fn path_to_json(p: &SampledPath) -> Value {
    serde_json::to_value(PathJson {
        nodes: p.nodes(),
        values: p.values(),
    })
    .expect("path serializes")
}

#[derive(Serialize)]
struct ModulusJson<'a> {
    #[serde(with = "serde_rational")]
    delta: &'a Rational,
    value: f64,
    mode: Mode,
    #[serde(with = "serde_rational_vec")]
    partition: &'a [Rational],
}

pub fn modulus_to_json(delta: &Rational, m: &ModulusEstimate) -> Value {
    serde_json::to_value(ModulusJson {
        delta,
        value: m.value,
        mode: m.mode,
        partition: m.partition.points(),
    })
    .expect("modulus serializes")
}

pub fn split_to_json(eps: &Rational, s: &Split) -> Value {
    let regions: Vec<[String; 2]> = s
        .regions
        .iter()
        .map(|(a, b)| [format_rational(a), format_rational(b)])
        .collect();
    serde_json::json!({
        "eps": format_rational(eps),
        "support_measure": format_rational(&s.support_measure),
        "regions": regions,
        "g": path_to_json(&s.small),
        "h": path_to_json(&s.spike),
    })
}

/// Reads rows `t,f(t)`. A first row that does not parse as two rationals is
/// taken as a header; the first data row must be `0,0`.
pub fn read_path_csv<R: Read>(reader: R) -> Result<SampledPath> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut nodes = vec![];
    let mut values = vec![];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::parse("csv", e.to_string()))?;
        if rec.len() != 2 {
            return Err(Error::parse(
                format!("row {}", line + 1),
                format!("expected 2 columns, got {}", rec.len()),
            ));
        }
        let t = parse_rational(&rec[0]);
        let f = parse_rational(&rec[1]);
        match (t, f) {
            (Ok(t), Ok(f)) => {
                nodes.push(t);
                values.push(f);
            }
            _ if line == 0 => continue,
            (Err(e), _) | (_, Err(e)) => {
                return Err(Error::parse(format!("row {}", line + 1), e.to_string()));
            }
        }
    }
    match (nodes.first(), values.first()) {
        (Some(t), Some(f)) if num_traits::Zero::is_zero(t) && num_traits::Zero::is_zero(f) => {}
        (Some(t), Some(f)) if num_traits::Zero::is_zero(t) => {
            return Err(Error::input(format!(
                "first row must be 0,0 (paths satisfy f(0)=0), got f(0) = {f}"
            )));
        }
        (Some(t), _) => return Err(Error::input(format!("first row must be 0,0, got t = {t}"))),
        _ => return Err(Error::input("path CSV has no rows")),
    }
    SampledPath::new(nodes, values)
}

/// Growth table as CSV: `K,value,control,asymptotic`.
pub fn write_growth_csv<W: Write>(out: W, report: &GrowthReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::input(format!("write failed: {e}"));
    w.write_record(["K", "value", "control", "asymptotic"]).map_err(io)?;
    for r in &report.rows {
        w.write_record([
            r.blocks.to_string(),
            r.value.to_string(),
            r.control.to_string(),
            r.asymptotic.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::input(format!("write failed: {e}")))?;
    Ok(())
}
