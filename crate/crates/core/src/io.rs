//! JSON and CSV encodings.
//!
//! Every float is written with 17 significant digits, so coordinates
//! round-trip bit for bit. A point is a JSON array with one entry per
//! ambient coordinate: a number for real families, `[re, im]` for complex
//! and `[w, x, y, z]` for quaternionic ones.

use std::fmt::Write as _;
use std::io;

use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Family, Manifold, Point};
use crate::kernel::KernelTableRow;
use crate::optimize::TraceEntry;
use crate::radial::RadialTableRow;

/// JSON formatter writing every `f64` with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct PreciseFormatter;

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", fmt_f64(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f32(writer, value)
    }
}

/// `value` as `d.dddddddddddddddde±x`.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serializes to compact JSON with 17-digit floats and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}

struct Scalars<'a>(&'a [f64]);

impl Serialize for Scalars<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            [x] => s.serialize_f64(*x),
            xs => {
                let mut seq = s.serialize_seq(Some(xs.len()))?;
                for x in xs {
                    seq.serialize_element(x)?;
                }
                seq.end()
            }
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let k = self.manifold().scalar_width();
        let mut seq = s.serialize_seq(Some(self.coords().len() / k))?;
        for c in self.coords().chunks_exact(k) {
            seq.serialize_element(&Scalars(c))?;
        }
        seq.end()
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Configuration", 2)?;
        st.serialize_field("manifold", &self.manifold())?;
        st.serialize_field("points", self.points())?;
        st.end()
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn parse_manifold(v: Option<&Value>) -> Result<Manifold> {
    let v = v.ok_or_else(|| schema("manifold", "missing"))?;
    let obj = v
        .as_object()
        .ok_or_else(|| schema("manifold", "expected an object"))?;
    let tag = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("manifold.family", "expected a string"))?;
    let family =
        Family::from_tag(tag).ok_or_else(|| schema("manifold.family", format!("unknown family {tag:?}")))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("manifold.n", "expected a positive integer"))?;
    let n = u32::try_from(n).map_err(|_| schema("manifold.n", "too large"))?;
    Manifold::new(family, n).map_err(|e| schema("manifold", e.to_string()))
}

fn parse_number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(path, "expected a number"))
}

fn parse_point(m: Manifold, v: &Value, path: &str) -> Result<Point> {
    let k = m.scalar_width();
    let arr = v.as_array().ok_or_else(|| schema(path, "expected an array"))?;
    if arr.len() != m.ambient_len() {
        return Err(schema(
            path,
            format!("expected {} coordinates for {m}, got {}", m.ambient_len(), arr.len()),
        ));
    }
    let mut coords = Vec::with_capacity(k * arr.len());
    for (i, c) in arr.iter().enumerate() {
        let cp = format!("{path}[{i}]");
        if k == 1 {
            coords.push(parse_number(c, &cp)?);
            continue;
        }
        let parts = c
            .as_array()
            .filter(|a| a.len() == k)
            .ok_or_else(|| schema(&cp, format!("expected an array of {k} numbers")))?;
        for (j, x) in parts.iter().enumerate() {
            coords.push(parse_number(x, &format!("{cp}[{j}]"))?);
        }
    }
    Point::new(m, coords).map_err(|e| schema(path, e.to_string()))
}

/// Parses `{"manifold": {...}, "points": [...]}`.
pub fn configuration_from_json(text: &str) -> Result<Configuration> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("$", format!("invalid JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
    let m = parse_manifold(obj.get("manifold"))?;
    if !m.supports_points() {
        return Err(schema("manifold", format!("{m} has no point model")));
    }
    let pts = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("points", "expected an array"))?;
    if pts.is_empty() {
        return Err(schema("points", "no points"));
    }
    let points = pts
        .iter()
        .enumerate()
        .map(|(i, p)| parse_point(m, p, &format!("points[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Configuration::new(m, points)
}

pub fn configuration_to_json(config: &Configuration) -> Result<String> {
    to_json(config)
}

fn csv<I: IntoIterator<Item = Vec<f64>>>(header: &str, rows: I) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_f64).collect();
        writeln!(out, "{}", line.join(",")).expect("write to string");
    }
    out
}

pub const KERNEL_TABLE_HEADER: &str = "r,phi,phi_prime,singular_part";
pub const RADIAL_TABLE_HEADER: &str = "r,v,tail,L,cdf";
pub const TRACE_HEADER: &str = "iteration,energy,grad_norm";

pub fn kernel_table_csv(rows: &[KernelTableRow]) -> String {
    csv(
        KERNEL_TABLE_HEADER,
        rows.iter().map(|r| vec![r.r, r.phi, r.phi_prime, r.singular_part]),
    )
}

pub fn radial_table_csv(rows: &[RadialTableRow]) -> String {
    csv(
        RADIAL_TABLE_HEADER,
        rows.iter().map(|r| vec![r.r, r.v, r.tail, r.laplacian, r.cdf]),
    )
}

pub fn trace_csv(trace: &[TraceEntry]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for t in trace {
        writeln!(out, "{},{},{}", t.iteration, fmt_f64(t.energy), fmt_f64(t.grad_norm))
            .expect("write to string");
    }
    out
}

/// Parses a kernel table back into rows.
pub fn kernel_table_from_csv(text: &str) -> Result<Vec<KernelTableRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(KERNEL_TABLE_HEADER) {
        return Err(schema("line 1", format!("expected header {KERNEL_TABLE_HEADER}")));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let vals: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| schema(format!("line {}", i + 2), e.to_string()))?;
            match vals[..] {
                [r, phi, phi_prime, singular_part] => Ok(KernelTableRow {
                    r,
                    phi,
                    phi_prime,
                    singular_part,
                }),
                _ => Err(schema(format!("line {}", i + 2), "expected 4 columns")),
            }
        })
        .collect()
}
