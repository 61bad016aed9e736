//! JSON writers emitting floats at full precision (17 significant digits),
//! so that re-reading a document reproduces every f64 bit-exactly and
//! identical inputs yield byte-identical outputs.

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::Result;

struct PreciseFormatter;

impl Formatter for PreciseFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: std::io::Write + ?Sized,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize to a compact JSON string with 17-significant-digit floats.
pub fn to_string_precise<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}
