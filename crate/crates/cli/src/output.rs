use std::io::{self, Write};

use firstsign::experiments::ExperimentReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn write_text(&self, out: &mut impl Write) -> io::Result<()> {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.headers[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(&self.headers))?;
        for r in &self.rows {
            writeln!(out, "{}", line(r))?;
        }
        Ok(())
    }

    fn write_json(&self, out: &mut impl Write) -> io::Result<()> {
        for r in &self.rows {
            let obj: serde_json::Map<String, serde_json::Value> = self
                .headers
                .iter()
                .zip(r)
                .map(|(h, c)| {
                    let number = match c.parse::<i64>() {
                        Ok(i) => Some(serde_json::Number::from(i)),
                        Err(_) => c
                            .parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .and_then(serde_json::Number::from_f64),
                    };
                    let v = number
                        .map(serde_json::Value::Number)
                        .unwrap_or_else(|| serde_json::Value::String(c.clone()));
                    (h.clone(), v)
                })
                .collect();
            writeln!(out, "{}", serde_json::Value::Object(obj))?;
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()
    }

    pub fn emit(&self, format: Format) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Text => self.write_text(&mut out),
            Format::Json => self.write_json(&mut out),
            Format::Csv => self.write_csv(&mut out),
        }
    }
}

pub fn emit_reports(reports: &[ExperimentReport], format: Format) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", r.to_json())?;
            }
        }
        Format::Text => {
            for (i, r) in reports.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", r.to_text())?;
            }
        }
        Format::Csv => {
            let mut t = Table::new(&["id", "params", "observed", "expected", "deviation", "tolerance", "verdict"]);
            for r in reports {
                let params = r
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";");
                t.push(vec![
                    r.id.clone(),
                    params,
                    r.observed.to_string(),
                    r.expected.to_string(),
                    format!("{:?}", r.deviation),
                    r.tolerance.map(|t| format!("{t:?}")).unwrap_or_default(),
                    r.verdict.to_string(),
                ]);
            }
            drop(out);
            t.emit(Format::Csv)?;
        }
    }
    Ok(())
}
