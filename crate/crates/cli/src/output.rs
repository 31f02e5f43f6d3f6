use std::io::{self, Write};

use noisy_amp::experiments::Table;
use serde_json::{Map, Value};

use crate::config::Params;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Provenance written above the data.
pub struct Header<'a> {
    pub command: &'a str,
    pub params: &'a Params,
    /// Unix seconds; kept on its own line and out of the hash.
    pub generated_at: u64,
}

/// `%.12g`-style rendering; `inf`, `-inf` and `nan` for non-finite values.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn columns(table: &Table, timing: bool) -> Vec<String> {
    let mut cols = table.columns.clone();
    if timing {
        cols.push("elapsed_s".into());
    }
    cols.push("error".into());
    cols
}

pub fn write_csv<W: Write>(out: W, header: &Header, table: &Table, timing: bool) -> io::Result<()> {
    let mut out = out;
    writeln!(out, "# noisy-amp {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# command = {}", header.command)?;
    for (k, v) in header.params.iter() {
        writeln!(out, "# {k} = {v}")?;
    }
    writeln!(out, "# config_hash = {}", header.params.hash(header.command))?;
    writeln!(out, "# generated_at = {}", header.generated_at)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns(table, timing))?;
    for row in &table.rows {
        let mut rec: Vec<String> = row.values.iter().map(|&v| format_number(v)).collect();
        if timing {
            rec.push(format_number(row.elapsed.as_secs_f64()));
        }
        rec.push(row.error.clone().unwrap_or_default());
        w.write_record(&rec)?;
    }
    w.flush()
}

fn json_number(v: f64) -> Value {
    if v.is_nan() {
        Value::Null
    } else if v.is_infinite() {
        Value::String(format_number(v))
    } else {
        let rounded: f64 = format_number(v).parse().expect("formatted number parses");
        serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    }
}

/// Array of row objects keyed by column name.
pub fn write_json<W: Write>(mut out: W, table: &Table, timing: bool) -> io::Result<()> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (c, &v) in table.columns.iter().zip(&row.values) {
                obj.insert(c.clone(), json_number(v));
            }
            if timing {
                obj.insert("elapsed_s".into(), json_number(row.elapsed.as_secs_f64()));
            }
            obj.insert("error".into(), row.error.clone().map_or(Value::Null, Value::String));
            Value::Object(obj)
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &rows)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{key, Params};
    use noisy_amp::experiments::Row;
    use std::time::Duration;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(54.0), "54");
        assert_eq!(format_number(0.2190890230020664), "0.219089023002");
        assert_eq!(format_number(3.915922144), "3.915922144");
        assert_eq!(format_number(-24.59123456789012), "-24.5912345679");
        assert_eq!(format_number(6.938893903907228e-18), "6.93889390391e-18");
        assert_eq!(format_number(1.5e15), "1.5e+15");
        assert_eq!(format_number(0.0001), "0.0001");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    fn sample() -> (Params, Table) {
        let params = Params::resolve(&[key("alpha_mod", "0.2", "")], &[], &[]).unwrap();
        let mut table = Table::new(["n", "V"]);
        table.rows.push(Row {
            values: vec![0.0, f64::INFINITY],
            elapsed: Duration::from_millis(5),
            error: None,
        });
        table.rows.push(Row {
            values: vec![1.0, f64::NAN],
            elapsed: Duration::ZERO,
            error: Some("a, \"quoted\" failure".into()),
        });
        (params, table)
    }

    #[test]
    fn csv_layout() {
        let (params, table) = sample();
        let header = Header {
            command: "fig8",
            params: &params,
            generated_at: 7,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &header, &table, false).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# noisy-amp "));
        assert_eq!(lines[1], "# command = fig8");
        assert_eq!(lines[2], "# alpha_mod = 0.2");
        assert!(lines[3].starts_with("# config_hash = "));
        assert_eq!(lines[4], "# generated_at = 7");
        assert_eq!(lines[5], "n,V,error");
        assert_eq!(lines[6], "0,inf,");
        assert_eq!(lines[7], "1,nan,\"a, \"\"quoted\"\" failure\"");
    }

    #[test]
    fn json_layout() {
        let (_, table) = sample();
        let mut buf = Vec::new();
        write_json(&mut buf, &table, true).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[0]["V"], "inf");
        assert_eq!(v[0]["error"], Value::Null);
        assert_eq!(v[1]["V"], Value::Null);
        assert_eq!(v[0]["elapsed_s"], 0.005);
        let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["n", "V", "elapsed_s", "error"]);
    }
}
