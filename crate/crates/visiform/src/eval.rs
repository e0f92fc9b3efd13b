//! Corpus evaluation: run extraction over layout/gold pairs and report
//! per-collection precision.
//!
//! An interface counts as correct only when the extracted tree has exactly
//! the gold grouping; there is no partial credit. Precision is kept as the
//! exact correct/interfaces ratio and truncated to two decimals only at
//! display time, never inside arithmetic.

use std::collections::BTreeSet;

use crate::cluster::build_hierarchy;
use crate::error::{Error, Result};
use crate::layout::{load_layout, load_tree_document, CorpusManifest};
use crate::model::QueryTree;

/// Aggregate counts for one collection. `total_fields` is kept instead of
/// the mean so that display truncation can run on exact integers.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectionStats {
    pub collection: String,
    pub interfaces: usize,
    pub total_fields: usize,
    pub correct: usize,
    pub mistakes: usize,
}

impl CollectionStats {
    pub fn mean_fields(&self) -> f64 {
        self.total_fields as f64 / self.interfaces as f64
    }

    pub fn precision(&self) -> f64 {
        self.correct as f64 / self.interfaces as f64
    }

    /// Two-decimal truncated precision, e.g. 14/19 displays as 0.73.
    pub fn precision_display(&self) -> String {
        truncate_ratio(self.correct * 100, self.interfaces)
    }

    pub fn mean_fields_display(&self) -> String {
        truncate_ratio(self.total_fields * 100, self.interfaces)
    }
}

/// numerator/denominator as a decimal cut (not rounded) after two places.
fn truncate_ratio(numerator: usize, denominator: usize) -> String {
    let hundredths = numerator / denominator;
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// One interface's outcome, with the grouping differences for debugging.
/// The diffs never influence any count.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryReport {
    pub interface_id: String,
    pub correct: bool,
    /// Gold groups the extraction failed to form (as sorted leaf-id lists).
    pub missed_groups: Vec<Vec<String>>,
    /// Extracted groups absent from gold.
    pub invented_groups: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollectionReport {
    pub stats: CollectionStats,
    pub entries: Vec<EntryReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub collections: Vec<CollectionReport>,
}

/// Compares one extracted tree against gold, recording family differences.
fn judge(extracted: &QueryTree, gold: &QueryTree) -> Result<EntryReport> {
    let correct = extracted.structure_eq(gold)?;
    let mine = extracted.leaf_family();
    let golden = gold.leaf_family();
    let to_list = |set: &BTreeSet<&str>| -> Vec<String> {
        set.iter().map(|s| (*s).to_owned()).collect()
    };
    Ok(EntryReport {
        interface_id: extracted.interface_id.clone(),
        correct,
        missed_groups: golden.difference(&mine).map(to_list).collect(),
        invented_groups: mine.difference(&golden).map(to_list).collect(),
    })
}

/// Evaluates every entry of one collection. Any unreadable or invalid
/// entry aborts the run with the offending file named; nothing is skipped.
pub fn evaluate_manifest(
    manifest: &CorpusManifest,
    tolerance: f64,
    min_pts: usize,
) -> Result<CollectionReport> {
    if manifest.entries.is_empty() {
        return Err(Error::DegenerateInput(format!(
            "collection {:?} has no entries",
            manifest.collection
        )));
    }
    let mut total_fields = 0;
    let mut entries = Vec::new();
    for entry in &manifest.entries {
        let layout = load_layout(&entry.layout)?;
        let gold_doc = load_tree_document(&entry.gold)?;
        if gold_doc.interface_id != layout.interface_id {
            return Err(Error::Validation(format!(
                "{}: gold tree is for {:?} but layout declares {:?}",
                entry.gold.display(),
                gold_doc.interface_id,
                layout.interface_id
            )));
        }
        let gold = QueryTree::from_document(&gold_doc, &layout.field_table())?;
        let trace = build_hierarchy(&layout.interface_id, &layout.fields, tolerance, min_pts)?;
        total_fields += layout.fields.len();
        entries.push(judge(&trace.result, &gold)?);
    }
    let correct = entries.iter().filter(|e| e.correct).count();
    Ok(CollectionReport {
        stats: CollectionStats {
            collection: manifest.collection.clone(),
            interfaces: entries.len(),
            total_fields,
            correct,
            mistakes: entries.len() - correct,
        },
        entries,
    })
}

/// Evaluates several collections into one report, in the given order.
pub fn evaluate_corpus(
    manifests: &[CorpusManifest],
    tolerance: f64,
    min_pts: usize,
) -> Result<EvalReport> {
    if manifests.is_empty() {
        return Err(Error::DegenerateInput("no manifests to evaluate".into()));
    }
    let collections = manifests
        .iter()
        .map(|m| evaluate_manifest(m, tolerance, min_pts))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport { collections })
}

/// Plain-text table, one column per collection, measures as rows. Counts
/// are exact; the two mean/precision rows are truncated to two decimals.
/// Collections with mistakes get a diagnostic line below the table.
pub fn render_table(report: &EvalReport) -> String {
    const LABELS: [&str; 5] = [
        "interfaces",
        "mean fields",
        "correct",
        "mistakes",
        "precision",
    ];
    let cells: Vec<Vec<String>> = report
        .collections
        .iter()
        .map(|c| {
            vec![
                c.stats.collection.clone(),
                c.stats.interfaces.to_string(),
                c.stats.mean_fields_display(),
                c.stats.correct.to_string(),
                c.stats.mistakes.to_string(),
                c.stats.precision_display(),
            ]
        })
        .collect();
    let label_width = LABELS.iter().map(|l| l.len()).max().expect("labels exist");
    let widths: Vec<usize> = cells
        .iter()
        .map(|col| col.iter().map(String::len).max().expect("rows exist"))
        .collect();

    let mut out = String::new();
    out.push_str(&" ".repeat(label_width));
    for (col, width) in cells.iter().zip(&widths) {
        out.push_str(&format!("  {:>width$}", col[0]));
    }
    out.push('\n');
    for (r, label) in LABELS.iter().enumerate() {
        out.push_str(&format!("{label:<label_width$}"));
        for (col, width) in cells.iter().zip(&widths) {
            out.push_str(&format!("  {:>width$}", col[r + 1]));
        }
        out.push('\n');
    }
    for c in &report.collections {
        let wrong: Vec<&str> = c
            .entries
            .iter()
            .filter(|e| !e.correct)
            .map(|e| e.interface_id.as_str())
            .collect();
        if !wrong.is_empty() {
            out.push_str(&format!(
                "mistakes in {}: {}\n",
                c.stats.collection,
                wrong.join(", ")
            ));
        }
    }
    out
}

pub const CSV_HEADER: &str = "collection,interfaces,mean_fields,correct,mistakes,precision";

/// Machine-readable report: full-precision floats, no truncation.
pub fn render_csv(report: &EvalReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in &report.collections {
        let s = &c.stats;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.collection,
            s.interfaces,
            s.mean_fields(),
            s.correct,
            s.mistakes,
            s.precision()
        ));
    }
    out
}

/// One parsed CSV report row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub collection: String,
    pub interfaces: usize,
    pub mean_fields: f64,
    pub correct: usize,
    pub mistakes: usize,
    pub precision: f64,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Validation("empty report".into()))?;
    if header != CSV_HEADER {
        return Err(Error::Validation(format!(
            "unexpected report header {header:?}"
        )));
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 {
            return Err(Error::Validation(format!(
                "report line {}: expected 6 columns, found {}",
                i + 2,
                parts.len()
            )));
        }
        let field = |j: usize, what: &str| -> Result<f64> {
            parts[j].parse().map_err(|_| {
                Error::Validation(format!("report line {}: bad {what} {:?}", i + 2, parts[j]))
            })
        };
        let count = |j: usize, what: &str| -> Result<usize> {
            parts[j].parse().map_err(|_| {
                Error::Validation(format!("report line {}: bad {what} {:?}", i + 2, parts[j]))
            })
        };
        rows.push(CsvRow {
            collection: parts[0].to_owned(),
            interfaces: count(1, "interface count")?,
            mean_fields: field(2, "mean")?,
            correct: count(3, "correct count")?,
            mistakes: count(4, "mistake count")?,
            precision: field(5, "precision")?,
        });
    }
    Ok(rows)
}
