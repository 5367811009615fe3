use std::io::Write;

use serde::Serialize;

use crate::report::VerifyReport;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn json<T: Serialize + ?Sized>(out: &mut dyn Write, v: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| CliError::Output(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Header row plus records, all as strings.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&self.header).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_text(&self, out: &mut dyn Write) -> CliResult<()> {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(&self.header))?;
        for r in &self.rows {
            writeln!(out, "{}", line(r))?;
        }
        Ok(())
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> CliResult<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Text => self.write_text(out),
            Format::Json => Err(CliError::Output("tables are emitted as csv or text".into())),
        }
    }
}

pub fn verify_report(out: &mut dyn Write, r: &VerifyReport, format: Format) -> CliResult<()> {
    match format {
        Format::Json => json(out, r),
        Format::Csv => {
            let mut t = Table::new(&["suite", "case", "status", "summary"]);
            for c in &r.cases {
                t.push(vec![r.suite.clone(), c.id.clone(), c.status.as_str().into(), c.summary.clone()]);
            }
            t.write_csv(out)
        }
        Format::Text => {
            for c in &r.cases {
                writeln!(out, "{:<7} {}  {}", c.status.as_str(), c.id, c.summary)?;
            }
            write!(
                out,
                "{}: {} ({} pass, {} fail, {} skipped)",
                r.suite,
                r.status.as_str(),
                r.count(crate::Status::Pass),
                r.count(crate::Status::Fail),
                r.count(crate::Status::Skipped)
            )?;
            if let Some(t) = r.wall_time_ms {
                write!(out, " in {:.1} ms", t)?;
            }
            writeln!(out)?;
            Ok(())
        }
    }
}
