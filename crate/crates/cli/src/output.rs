//! Output formatting: a hand-rolled JSON writer (fixed key order,
//! 17-significant-digit floats, byte-identical across runs), CSV rows, and
//! plain tables at 6 significant digits.

use clap::ValueEnum;

pub const SCHEMA: &str = "lc-spectra/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

/// Round-trippable float: 17 significant digits, scientific.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Table float: 6 significant digits.
pub fn f6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

/// Incremental JSON writer with explicit structure calls. Keys are
/// emitted in call order, so output bytes depend only on the data.
pub struct Json {
    buf: String,
    first: Vec<bool>,
}

impl Json {
    pub fn object() -> Self {
        Json {
            buf: String::from("{"),
            first: vec![true],
        }
    }

    fn sep(&mut self) {
        if let Some(first) = self.first.last_mut() {
            if *first {
                *first = false;
            } else {
                self.buf.push(',');
            }
        }
    }

    fn key(&mut self, k: &str) {
        self.sep();
        self.buf.push('"');
        self.buf.push_str(k);
        self.buf.push_str("\":");
    }

    pub fn str_field(&mut self, k: &str, v: &str) -> &mut Self {
        self.key(k);
        self.buf.push('"');
        for c in v.chars() {
            match c {
                '"' => self.buf.push_str("\\\""),
                '\\' => self.buf.push_str("\\\\"),
                '\n' => self.buf.push_str("\\n"),
                c => self.buf.push(c),
            }
        }
        self.buf.push('"');
        self
    }

    pub fn num_field(&mut self, k: &str, x: f64) -> &mut Self {
        self.key(k);
        self.buf.push_str(&f17(x));
        self
    }

    pub fn int_field(&mut self, k: &str, v: i64) -> &mut Self {
        self.key(k);
        self.buf.push_str(&v.to_string());
        self
    }

    pub fn bool_field(&mut self, k: &str, v: bool) -> &mut Self {
        self.key(k);
        self.buf.push_str(if v { "true" } else { "false" });
        self
    }

    pub fn null_field(&mut self, k: &str) -> &mut Self {
        self.key(k);
        self.buf.push_str("null");
        self
    }

    pub fn begin_array(&mut self, k: &str) -> &mut Self {
        self.key(k);
        self.buf.push('[');
        self.first.push(true);
        self
    }

    pub fn end_array(&mut self) -> &mut Self {
        self.first.pop();
        self.buf.push(']');
        self
    }

    pub fn begin_item(&mut self) -> &mut Self {
        self.sep();
        self.buf.push('{');
        self.first.push(true);
        self
    }

    pub fn end_item(&mut self) -> &mut Self {
        self.first.pop();
        self.buf.push('}');
        self
    }

    pub fn begin_object(&mut self, k: &str) -> &mut Self {
        self.key(k);
        self.buf.push('{');
        self.first.push(true);
        self
    }

    pub fn end_object(&mut self) -> &mut Self {
        self.first.pop();
        self.buf.push('}');
        self
    }

    pub fn finish(mut self) -> String {
        self.buf.push('}');
        self.buf.push('\n');
        self.buf
    }
}

/// CSV assembly: header plus rows, no quoting (fields never contain
/// commas).
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Left-aligned plain table.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.len());
            }
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: Vec<&str>, widths: &[usize]| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<w$}", w = widths[i]));
        }
        line.trim_end().to_string()
    };
    out.push_str(&fmt_row(header.to_vec(), &widths));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row.iter().map(|s| s.as_str()).collect(), &widths));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_writer_shape() {
        let mut j = Json::object();
        j.str_field("schema", SCHEMA).int_field("n", 2);
        j.begin_array("rows");
        j.begin_item().num_field("x", 0.5).end_item();
        j.begin_item().bool_field("ok", true).end_item();
        j.end_array();
        let s = j.finish();
        assert_eq!(
            s,
            "{\"schema\":\"lc-spectra/1\",\"n\":2,\"rows\":[{\"x\":5.0000000000000000e-1},{\"ok\":true}]}\n"
        );
    }

    #[test]
    fn f17_round_trips() {
        for &x in &[0.6, -2.0 / 9.0, 1.40625, 3.6785735104283223e0, 1e-17] {
            let back: f64 = f17(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn f6_magnitudes() {
        assert_eq!(f6(0.0), "0");
        assert_eq!(f6(1.40625), "1.40625");
        assert_eq!(f6(-0.000222), "-0.000222000");
        assert_eq!(f6(1.5e8), "1.50000e8");
    }
}
