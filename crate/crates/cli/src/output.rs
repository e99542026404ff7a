use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{Format, RunConfig, CSV_META_PREFIX};

/// One CSV field.
#[derive(Clone, Debug)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(v) if v.is_nan() => "NaN".into(),
            Field::Num(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Field::Num(v) => format!("{v:.16e}"),
            Field::Int(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
        }
    }
}

/// Flat table for the CSV form of a report.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    run_config: &'a RunConfig,
    report: &'a T,
}

pub fn render_csv(cfg: &RunConfig, table: &Table) -> std::io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    writeln!(buf, "{CSV_META_PREFIX}{}", serde_json::to_string(cfg)?)?;
    let mut w = csv::Writer::from_writer(&mut buf);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Field::render))?;
    }
    w.flush()?;
    drop(w);
    Ok(buf)
}

pub fn render_json<T: Serialize>(cfg: &RunConfig, report: &T) -> std::io::Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(&Envelope {
        run_config: cfg,
        report,
    })?;
    buf.push(b'\n');
    Ok(buf)
}

/// Writes through a temporary file in the destination directory and renames
/// it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Format requested explicitly, else `json` for a `.json` path and `csv`
/// otherwise.
pub fn resolve_format(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    })
}

pub fn emit<T: Serialize>(cfg: &RunConfig, table: &Table, report: &T) -> std::io::Result<()> {
    let Some(out) = &cfg.output else {
        return Ok(());
    };
    let path = Path::new(out);
    let bytes = match resolve_format(path, cfg.format) {
        Format::Csv => render_csv(cfg, table)?,
        Format::Json => render_json(cfg, report)?,
    };
    write_atomic(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use weak_dirac::QuadratureSpec;

    #[test]
    fn csv_quotes_and_precision() {
        let cfg = RunConfig::new("sweep", QuadratureSpec::default());
        let mut t = Table::new(&["x", "note"]);
        t.push(vec![Field::Num(0.1), Field::Text("a, \"b\"".into())]);
        let text = String::from_utf8(render_csv(&cfg, &t).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with(CSV_META_PREFIX));
        assert_eq!(lines[1], "x,note");
        assert_eq!(lines[2], "1.0000000000000001e-1,\"a, \"\"b\"\"\"");
        assert_eq!("1.0000000000000001e-1".parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn config_round_trips_through_both_formats() {
        let mut cfg = RunConfig::new("constants", QuadratureSpec::default());
        cfg.p_grid = Some("1.05:2.95:0.05".parse().unwrap());
        cfg.output = Some("c.csv".into());
        let csv = render_csv(&cfg, &Table::new(&["p"])).unwrap();
        assert_eq!(
            RunConfig::from_report(std::str::from_utf8(&csv).unwrap()).unwrap(),
            cfg
        );
        let json = render_json(&cfg, &serde_json::json!({})).unwrap();
        assert_eq!(
            RunConfig::from_report(std::str::from_utf8(&json).unwrap()).unwrap(),
            cfg
        );
    }

    #[test]
    fn grid_points() {
        let g: crate::config::PGrid = "1.05:2.95:0.05".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 39);
        assert_eq!((p[0], p[1], p[38]), (1.05, 1.1, 2.95));
        assert!("1:2".parse::<crate::config::PGrid>().is_err());
        assert!("2:1:0.1".parse::<crate::config::PGrid>().is_err());
    }
}
