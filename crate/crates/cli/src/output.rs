//! CSV and JSON-lines tables.
//!
//! Reals are written with 17 significant digits (`{:.16e}`) so tables
//! round-trip bit-exactly; an infinite value is written as `inf`.

use fluxbound::scenarios::SpinPairRecord;
use fluxbound::ExtendedReal;
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::runners::{DrawRecord, SaturationRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Ext(ExtendedReal),
    Text(String),
    Empty,
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Ext(ExtendedReal::Finite(x)) => format_real(*x),
            Cell::Ext(ExtendedReal::Infinite) => "inf".into(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) | Cell::Ext(ExtendedReal::Finite(x)) => serde_json::Number::from_f64(*x)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(format_real(*x))),
            Cell::Ext(ExtendedReal::Infinite) => Value::String("inf".into()),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// A record type with a fixed column layout.
pub trait Row {
    fn headers() -> &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

impl Row for DrawRecord {
    fn headers() -> &'static [&'static str] {
        &[
            "draw",
            "flux_ratio_sq",
            "s_tilde",
            "pinsker_rhs",
            "main_rhs",
            "strengthened_rhs",
            "epsilon",
            "redraws",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        let r = &self.report;
        vec![
            Cell::Int(self.draw),
            Cell::Real(r.flux_ratio_sq),
            Cell::Ext(r.s_tilde),
            Cell::Ext(r.pinsker_rhs),
            Cell::Real(r.main_rhs),
            Cell::Real(r.strengthened_rhs),
            Cell::Real(r.epsilon),
            Cell::Int(self.redraws),
        ]
    }
}

impl Row for SpinPairRecord {
    fn headers() -> &'static [&'static str] {
        &[
            "t",
            "flux",
            "flux_analytic",
            "two_phi_sq",
            "onsager",
            "s_tilde",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Real(self.t),
            Cell::Real(self.flux),
            Cell::Real(self.flux_analytic),
            Cell::Real(self.two_phi_sq),
            Cell::Ext(self.onsager),
            Cell::Ext(self.s_tilde),
        ]
    }
}

impl Row for SaturationRow {
    fn headers() -> &'static [&'static str] {
        &["a", "tn_sq_over_4", "B_of_s_tilde", "abs_diff"]
    }

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Real(self.a),
            Cell::Real(self.tn_sq_over_4),
            Cell::Real(self.b_of_s_tilde),
            Cell::Real(self.abs_diff),
        ]
    }
}

/// Renders `rows` into an in-memory table.
pub fn render<R: Row>(format: Format, rows: &[R]) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(R::headers())?;
            for row in rows {
                w.write_record(row.cells().iter().map(Cell::to_csv))?;
            }
            w.into_inner().map_err(|e| CliError::Io {
                path: "<buffer>".into(),
                source: e.into_error(),
            })
        }
        Format::Jsonl => {
            let mut out = Vec::new();
            for row in rows {
                let obj: Map<String, Value> = R::headers()
                    .iter()
                    .zip(row.cells())
                    .map(|(k, c)| (k.to_string(), c.to_json()))
                    .collect();
                serde_json::to_writer(&mut out, &Value::Object(obj))?;
                out.push(b'\n');
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.0), "0.0000000000000000e0");
        assert_eq!(format_real(1.5231883119115297), "1.5231883119115297e0");
        assert_eq!(format_real(f64::INFINITY), "inf");
        let x = 0.1 + 0.2;
        assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn tables() {
        let rows = [SaturationRow {
            a: 2.0,
            tn_sq_over_4: 0.5,
            b_of_s_tilde: 0.25,
            abs_diff: 0.25,
        }];
        let csv = String::from_utf8(render(Format::Csv, &rows).unwrap()).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("a,tn_sq_over_4,B_of_s_tilde,abs_diff"));
        assert_eq!(
            lines.next(),
            Some("2.0000000000000000e0,5.0000000000000000e-1,2.5000000000000000e-1,2.5000000000000000e-1")
        );
        let json = String::from_utf8(render(Format::Jsonl, &rows).unwrap()).unwrap();
        assert_eq!(
            json,
            "{\"a\":2.0,\"tn_sq_over_4\":0.5,\"B_of_s_tilde\":0.25,\"abs_diff\":0.25}\n"
        );
    }

    #[test]
    fn infinite_marker() {
        assert_eq!(Cell::Ext(ExtendedReal::Infinite).to_csv(), "inf");
        assert_eq!(
            Cell::Ext(ExtendedReal::Infinite).to_json(),
            Value::String("inf".into())
        );
    }
}
