use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Columns of numbers; the first column is the swept variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub enum Output {
    Table(Table),
    /// A single structured result (flat or one level of nesting).
    Record(Value),
}

/// 17 significant digits; parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render(output: &Output, format: Format) -> Result<String, CliError> {
    match (output, format) {
        (Output::Table(t), Format::Csv) => table_csv(t),
        (Output::Table(t), Format::Json) => to_json(t),
        (Output::Table(t), Format::Svg) => Ok(svg::line_chart(t)),
        (Output::Record(v), Format::Csv) => record_csv(v),
        (Output::Record(v), Format::Json) => to_json(v),
        (Output::Record(_), Format::Svg) => Err(CliError::Usage(
            "svg output is only available for sweep subcommands".into(),
        )),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_bytes(
    fill: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    fill(&mut w).map_err(|e| CliError::Io(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn table_csv(t: &Table) -> Result<String, CliError> {
    csv_bytes(|w| {
        w.write_record(&t.columns)?;
        for row in &t.rows {
            w.write_record(row.iter().map(|&x| format_f64(x)))?;
        }
        Ok(())
    })
}

/// Header of flattened keys and a single data row. Arrays become
/// `key_0, key_1, ...`, nested objects `outer_inner`.
fn record_csv(v: &Value) -> Result<String, CliError> {
    let mut fields = Vec::new();
    flatten("", v, &mut fields);
    csv_bytes(|w| {
        w.write_record(fields.iter().map(|(k, _)| k))?;
        w.write_record(fields.iter().map(|(_, v)| v))?;
        Ok(())
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}_{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&key(k), inner, out);
            }
        }
        Value::Array(items) => {
            for (i, inner) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), inner, out);
            }
        }
        Value::Number(n) => {
            let text = if let Some(u) = n.as_u64() {
                u.to_string()
            } else if let Some(i) = n.as_i64() {
                i.to_string()
            } else {
                format_f64(n.as_f64().unwrap_or(f64::NAN))
            };
            out.push((prefix.to_string(), text));
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, 1.0, -0.1, 0.527_301_854_1, 1e-300, 6.02e23, f64::MIN_POSITIVE] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn table_csv_layout() {
        let t = Table {
            title: "t".into(),
            columns: vec!["delta".into(), "overlap".into()],
            rows: vec![vec![0.0, 1.0], vec![0.5, -0.25]],
        };
        let s = render(&Output::Table(t), Format::Csv).unwrap();
        let lines: Vec<&str> = s.split('\n').collect();
        assert_eq!(lines[0], "delta,overlap");
        assert_eq!(lines[1], "0.0000000000000000e0,1.0000000000000000e0");
        assert_eq!(lines.len(), 4);
        assert!(!s.contains('\r'));
    }

    #[test]
    fn record_flattening() {
        let v = json!({"a": 1, "ci": [0.0, 0.5], "name": "x", "nested": {"re": 1.5}});
        let s = render(&Output::Record(v.clone()), Format::Csv).unwrap();
        assert_eq!(
            s,
            "a,ci_0,ci_1,name,nested_re\n1,0.0000000000000000e0,5.0000000000000000e-1,x,1.5000000000000000e0\n"
        );
        assert!(render(&Output::Record(v), Format::Svg).is_err());
    }
}
