//! Deterministic JSON and CSV emission with every float printed to 17
//! significant digits.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

/// `1.2345678901234567e0` style for every `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn write_null<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        CompactFormatter.write_null(writer)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> io::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value.serialize(&mut ser).map_err(io::Error::other)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(io::Error::other)
}

/// Writes to `out` when given, standard output otherwise.
pub fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => File::create(path)?.write_all(text.as_bytes()),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

pub fn csv_report(rows: &[redlab_core::verify::CaseRow]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "suite",
        "case_id",
        "inputs_digest",
        "lhs",
        "rhs",
        "holds",
        "slack",
    ])?;
    for r in rows {
        w.write_record([
            r.suite.to_string(),
            r.case_id.clone(),
            r.inputs_digest.clone(),
            fmt_float(r.lhs),
            fmt_float(r.rhs),
            r.holds.to_string(),
            fmt_float(r.slack),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}
