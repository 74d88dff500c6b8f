//! Table and record formats: CSV, TSV, JSON.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Tsv,
    Json,
}

/// A count table with exact decimal cells; `cells[g]` is `None` above the gall maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableData {
    pub class: String,
    pub labeling: String,
    pub width: usize,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub cells: Vec<Option<String>>,
    pub total: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GallIndex {
    Count(usize),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub class: String,
    pub labeling: String,
    pub n: usize,
    pub g: GallIndex,
    pub value: String,
}

/// Groups digits in threes: `1234567` → `1,234,567`.
pub fn pretty(value: &str) -> String {
    let (sign, digits) = value.strip_prefix('-').map_or(("", value), |d| ("-", d));
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return value.to_string();
    }
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    format!("{sign}{out}")
}

impl TableData {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["n".to_string()];
        h.extend((0..self.width).map(|g| format!("g{g}")));
        h.push("total".into());
        h
    }

    pub fn records(&self) -> Vec<OutputRecord> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (g, c) in row.cells.iter().enumerate() {
                if let Some(v) = c {
                    out.push(self.record(row.n, GallIndex::Count(g), v));
                }
            }
            out.push(self.record(row.n, GallIndex::Label("total".into()), &row.total));
        }
        out
    }

    fn record(&self, n: usize, g: GallIndex, value: &str) -> OutputRecord {
        OutputRecord { class: self.class.clone(), labeling: self.labeling.clone(), n, g, value: value.to_string() }
    }

    pub fn render(&self, format: Format, human: bool) -> Result<String, CliError> {
        let fmt_v = |v: &str| if human { pretty(v) } else { v.to_string() };
        match format {
            Format::Plain => {
                let mut s = String::new();
                for row in &self.rows {
                    let cells: Vec<String> = row.cells.iter().flatten().map(|v| fmt_v(v)).collect();
                    writeln!(s, "{}: {} | total {}", row.n, cells.join(" "), fmt_v(&row.total)).ok();
                }
                Ok(s)
            }
            Format::Csv | Format::Tsv => {
                let delim = if format == Format::Csv { b',' } else { b'\t' };
                let mut w = csv::WriterBuilder::new().delimiter(delim).from_writer(Vec::new());
                w.write_record(self.header()).map_err(CliError::io)?;
                for row in &self.rows {
                    let mut rec = vec![row.n.to_string()];
                    rec.extend(row.cells.iter().map(|c| c.as_deref().map(fmt_v).unwrap_or_default()));
                    rec.push(fmt_v(&row.total));
                    w.write_record(&rec).map_err(CliError::io)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("CSV of ASCII"))
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.records()).map_err(CliError::io)?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    /// Inverse of CSV/TSV rendering without `--pretty`.
    pub fn parse_delimited(src: &str, format: Format, class: &str, labeling: &str) -> Result<Self, CliError> {
        let delim = if format == Format::Tsv { b'\t' } else { b',' };
        let mut r = csv::ReaderBuilder::new().delimiter(delim).from_reader(src.as_bytes());
        let width = r.headers().map_err(CliError::io)?.len().saturating_sub(2);
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(CliError::io)?;
            let n = rec[0].parse().map_err(|_| CliError::usage(format!("bad n '{}'", &rec[0])))?;
            let cells = (1..=width).map(|i| Some(rec[i].to_string()).filter(|s| !s.is_empty())).collect();
            rows.push(TableRow { n, cells, total: rec[width + 1].to_string() });
        }
        Ok(TableData { class: class.into(), labeling: labeling.into(), width, rows })
    }

    /// Inverse of JSON rendering; the width is taken from the largest gall index.
    pub fn parse_json(src: &str) -> Result<Self, CliError> {
        let recs: Vec<OutputRecord> = serde_json::from_str(src).map_err(CliError::io)?;
        let first = recs.first().ok_or_else(|| CliError::usage("empty record list".into()))?;
        let (class, labeling) = (first.class.clone(), first.labeling.clone());
        let width = recs
            .iter()
            .filter_map(|r| match r.g {
                GallIndex::Count(g) => Some(g + 1),
                GallIndex::Label(_) => None,
            })
            .max()
            .unwrap_or(0);
        let mut rows: Vec<TableRow> = Vec::new();
        for rec in recs {
            if rows.last().map(|r| r.n) != Some(rec.n) {
                rows.push(TableRow { n: rec.n, cells: vec![None; width], total: String::new() });
            }
            let row = rows.last_mut().expect("pushed above");
            match rec.g {
                GallIndex::Count(g) => row.cells[g] = Some(rec.value),
                GallIndex::Label(l) if l == "total" => row.total = rec.value,
                GallIndex::Label(l) => return Err(CliError::usage(format!("unknown gall index '{l}'"))),
            }
        }
        Ok(TableData { class, labeling, width, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TableData {
        TableData {
            class: "general".into(),
            labeling: "unlabeled".into(),
            width: 3,
            rows: vec![
                TableRow { n: 1, cells: vec![Some("1".into()), None, None], total: "1".into() },
                TableRow { n: 3, cells: vec![Some("1".into()), Some("5".into()), Some("2".into())], total: "8".into() },
            ],
        }
    }

    #[test]
    fn pretty_groups_digits() {
        assert_eq!(pretty("1673573895"), "1,673,573,895");
        assert_eq!(pretty("113"), "113");
        assert_eq!(pretty("7/2"), "7/2");
    }

    #[test]
    fn formats_round_trip() {
        let t = sample();
        for f in [Format::Csv, Format::Tsv] {
            let s = t.render(f, false).unwrap();
            assert_eq!(TableData::parse_delimited(&s, f, "general", "unlabeled").unwrap(), t);
        }
        let j = t.render(Format::Json, false).unwrap();
        assert_eq!(TableData::parse_json(&j).unwrap(), t);
        assert!(t.render(Format::Csv, false).unwrap().starts_with("n,g0,g1,g2,total\n1,1,,,1\n"));
    }
}
