//! Record output in json-lines, csv or an aligned text table.

use std::collections::BTreeMap;
use std::io::{self, Write};

use clap::ValueEnum;
use flecklab::harness::{CongruenceReport, Relation};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    JsonLines,
    Csv,
    Human,
}

/// A flat record with a fixed column list.
pub trait Row: Serialize {
    fn header() -> &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

pub fn emit<T: Row>(records: &[T], format: Format, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::JsonLines => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(T::header())?;
            for r in records {
                w.write_record(r.cells())?;
            }
            w.flush()?;
        }
        Format::Human => {
            let rows: Vec<Vec<String>> = records.iter().map(Row::cells).collect();
            let mut widths: Vec<usize> = T::header().iter().map(|h| h.chars().count()).collect();
            for row in &rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let header: Vec<String> = T::header().iter().map(|s| s.to_string()).collect();
            for row in std::iter::once(&header).chain(&rows) {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                writeln!(out, "{}", line.join("  ").trim_end())?;
            }
        }
    }
    Ok(())
}

pub fn params_cell(params: &BTreeMap<String, i64>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check_id: String,
    pub params: BTreeMap<String, i64>,
    pub lhs: String,
    pub rhs: String,
    pub modulus: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
}

impl From<&CongruenceReport> for ReportRecord {
    fn from(r: &CongruenceReport) -> Self {
        ReportRecord {
            check_id: r.check_id.clone(),
            params: r.params.clone(),
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            modulus: r.modulus.to_string(),
            holds: r.holds,
            relation: match r.relation {
                Relation::Congruent => None,
                Relation::AtLeast => Some("at_least".into()),
            },
        }
    }
}

impl Row for ReportRecord {
    fn header() -> &'static [&'static str] {
        &["check_id", "params", "lhs", "rhs", "modulus", "holds"]
    }

    fn cells(&self) -> Vec<String> {
        let modulus = match self.relation.as_deref() {
            Some("at_least") => ">=".to_string(),
            _ => self.modulus.clone(),
        };
        vec![
            self.check_id.clone(),
            params_cell(&self.params),
            self.lhs.clone(),
            self.rhs.clone(),
            modulus,
            self.holds.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub p: u64,
    pub a: u32,
    pub n: u64,
    pub r: String,
    pub value: String,
    pub raw_sum: String,
    pub floor: i64,
    pub bracket: u8,
}

impl Row for EvalRecord {
    fn header() -> &'static [&'static str] {
        &["p", "a", "n", "r", "value", "raw_sum", "floor", "bracket"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.a.to_string(),
            self.n.to_string(),
            self.r.clone(),
            self.value.clone(),
            self.raw_sum.clone(),
            self.floor.to_string(),
            self.bracket.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub p: u64,
    pub a: u32,
    pub n: u64,
    pub r: i64,
    pub value: String,
}

impl Row for TableRecord {
    fn header() -> &'static [&'static str] {
        &["p", "a", "n", "r", "value"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.a.to_string(),
            self.n.to_string(),
            self.r.to_string(),
            self.value.clone(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub p: u64,
    pub field: String,
    pub h: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forms: Option<Vec<[i64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_norm: Option<i8>,
    pub half_factorial: u64,
    /// Mordell or Chowla side; absent at `p = 3`.
    pub class_side: Option<u64>,
    pub regular: Option<bool>,
    pub irregular_indices: Vec<u64>,
    pub h_minus_mod_p: Option<u64>,
    pub holds: bool,
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

impl Row for ClassRecord {
    fn header() -> &'static [&'static str] {
        &[
            "p",
            "field",
            "h",
            "u",
            "v",
            "half_factorial",
            "class_side",
            "regular",
            "irregular_indices",
            "h_minus_mod_p",
            "holds",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.field.clone(),
            self.h.to_string(),
            opt(&self.u),
            opt(&self.v),
            self.half_factorial.to_string(),
            opt(&self.class_side),
            opt(&self.regular),
            self.irregular_indices
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(";"),
            opt(&self.h_minus_mod_p),
            self.holds.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub conjecture_id: String,
    pub instances_checked: u64,
    pub counterexamples: Vec<BTreeMap<String, i64>>,
    pub cursor: Option<String>,
    pub complete: bool,
}

impl Row for ScanRecord {
    fn header() -> &'static [&'static str] {
        &[
            "conjecture_id",
            "instances_checked",
            "counterexamples",
            "cursor",
            "complete",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.conjecture_id.clone(),
            self.instances_checked.to_string(),
            self.counterexamples
                .iter()
                .map(params_cell)
                .collect::<Vec<_>>()
                .join("|"),
            opt(&self.cursor),
            self.complete.to_string(),
        ]
    }
}
