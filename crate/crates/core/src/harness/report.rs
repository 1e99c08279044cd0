use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::PairResult;
use crate::metrics::Metric;

/// Trailing label of every table row: each cell reads "wow / wwn".
pub const ROW_LABEL: &str = "WOW WWN";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub src: String,
    pub tgt: String,
    pub metric: Metric,
    pub wow: f64,
    pub wwn: f64,
    pub delta: f64,
}

/// One row per (src, tgt, metric), sorted by pair then metric.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
}

impl GridReport {
    pub fn from_pairs(pairs: &[PairResult]) -> Self {
        let mut rows = Vec::new();
        for p in pairs {
            for metric in Metric::ALL {
                let (wow, wwn) = (p.wow.value(metric), p.wwn.value(metric));
                rows.push(GridRow {
                    src: p.src.clone(),
                    tgt: p.tgt.clone(),
                    metric,
                    wow,
                    wwn,
                    delta: p.delta.get(metric),
                });
            }
        }
        let mut r = GridReport { rows };
        r.sort();
        r
    }

    fn sort(&mut self) {
        self.rows
            .sort_by(|a, b| (&a.src, &a.tgt, a.metric).cmp(&(&b.src, &b.tgt, b.metric)));
    }

    pub fn languages(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.rows.iter().flat_map(|r| [&r.src, &r.tgt]).collect();
        set.into_iter().cloned().collect()
    }

    pub fn get(&self, src: &str, tgt: &str, metric: Metric) -> Option<&GridRow> {
        self.rows
            .iter()
            .find(|r| r.src == src && r.tgt == tgt && r.metric == metric)
    }
}

/// Square table for one metric: rows are sources, columns targets, cells
/// "wow / wwn" on the ×100 scale; the diagonal is blank.
pub fn render_table(report: &GridReport, metric: Metric) -> String {
    let langs = report.languages();
    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut header = vec![metric.to_string().to_uppercase()];
    header.extend(langs.iter().cloned());
    header.push(String::new());
    grid.push(header);
    for s in &langs {
        let mut row = vec![s.clone()];
        for t in &langs {
            row.push(match report.get(s, t, metric) {
                Some(r) if s != t => format!("{:.2} / {:.2}", r.wow * 100.0, r.wwn * 100.0),
                _ => String::new(),
            });
        }
        row.push(ROW_LABEL.to_string());
        grid.push(row);
    }
    let cols = grid[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &grid {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// CSV with header `src,tgt,metric,wow,wwn,delta`, raw-scale values.
pub fn render_csv(report: &GridReport, metric: Option<Metric>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows: Vec<&GridRow> = report
        .rows
        .iter()
        .filter(|r| metric.is_none_or(|m| m == r.metric))
        .collect();
    // serialize() emits the header itself, but only once a row exists
    if rows.is_empty() {
        w.write_record(["src", "tgt", "metric", "wow", "wwn", "delta"])
            .expect("writing to memory");
    }
    for row in rows {
        w.serialize(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

pub fn parse_csv(text: &str) -> Result<GridReport, String> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in rd.deserialize::<GridRow>().enumerate() {
        rows.push(rec.map_err(|e| format!("grid row {}: {e}", i + 1))?);
    }
    let mut r = GridReport { rows };
    r.sort();
    Ok(r)
}
