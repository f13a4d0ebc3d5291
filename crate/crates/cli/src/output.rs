use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Writes every float with 17 significant digits so values round-trip.
/// Non-finite values never reach the formatter; serde_json emits `null`.
struct Exact {
    indent: usize,
    has_value: bool,
}

impl Exact {
    fn newline<W: ?Sized + Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.indent {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl Formatter for Exact {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"[")
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent += 1;
        self.has_value = false;
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.indent -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    command: &'a str,
    verdict: Option<bool>,
    report: &'a Value,
}

/// The JSON document for one command run, newline terminated.
pub fn render(command: &str, verdict: Option<bool>, report: &Value) -> Vec<u8> {
    let doc = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        verdict,
        report,
    };
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(
        &mut buf,
        Exact {
            indent: 0,
            has_value: false,
        },
    );
    doc.serialize(&mut ser).expect("serializing to memory");
    buf.push(b'\n');
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip() {
        let x = 0.1 + 0.2;
        let out = render("t", None, &json!({ "x": x, "n": 3, "bad": f64::NAN }));
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("\"x\": 3.0000000000000004e-1"), "{text}");
        assert!(text.contains("\"n\": 3"));
        assert!(text.contains("\"bad\": null"));
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["report"]["x"].as_f64(), Some(x));
        assert_eq!(back["schema_version"], 1);
    }

    #[test]
    fn empty_containers() {
        let text = String::from_utf8(render("t", Some(true), &json!({ "a": [], "o": {} }))).unwrap();
        assert!(text.contains("\"a\": []") && text.contains("\"o\": {}"), "{text}");
    }
}
