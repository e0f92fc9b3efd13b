//! Command-line front end: extract, evaluate, generate, render-svg.
//!
//! Exit codes: 0 on success, 1 on data errors (bad files, failed
//! validation) with a one-line diagnostic on stderr, 2 on usage errors.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cluster::{build_hierarchy, TraceDocument};
use crate::error::{Error, Result};
use crate::eval::{evaluate_corpus, render_csv, render_table};
use crate::layout::{
    load_layout, load_manifest, read_file, to_pretty_json, write_file, ManifestDocument,
    ManifestEntryDocument,
};
use crate::svg::render_svg;
use crate::synth::{generate_synthetic, SyntheticSpec};

#[derive(Debug, Parser)]
#[command(
    name = "visiform",
    version,
    about = "Extracts the hierarchical structure of web query forms from their visual layout"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Csv,
}

fn parse_tolerance(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("tolerance must be finite and non-negative, got {s}"))
    }
}

fn parse_min_pts(s: &str) -> std::result::Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("min-pts must be at least 1".to_owned())
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract a query tree from a layout document.
    Extract {
        /// Layout document to read.
        layout: PathBuf,
        /// Edge alignment tolerance in pixels.
        #[arg(long, default_value_t = 2.0, value_parser = parse_tolerance)]
        tolerance: f64,
        /// Minimum scope size for clustering.
        #[arg(long, default_value_t = 1, value_parser = parse_min_pts)]
        min_pts: usize,
        /// Write the tree here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the clustering trace next to the output file.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate extraction against gold trees, one manifest per collection.
    Evaluate {
        /// Corpus manifest files.
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
        #[arg(long, default_value_t = 2.0, value_parser = parse_tolerance)]
        tolerance: f64,
        #[arg(long, default_value_t = 1, value_parser = parse_min_pts)]
        min_pts: usize,
        /// Report style printed to standard output.
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
        /// Additionally write the CSV report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate synthetic interfaces with gold trees.
    Generate {
        /// Directory the documents are written into.
        out_dir: PathBuf,
        /// Seed of the first interface; later ones use seed+1, seed+2, ...
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of interfaces to generate.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Field rows per interface.
        #[arg(long, default_value_t = 3)]
        groups: usize,
        #[arg(long, default_value_t = 2)]
        min_fields: usize,
        #[arg(long, default_value_t = 4)]
        max_fields: usize,
        /// Maximum per-edge perturbation in pixels.
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
        /// Also write a corpus manifest under this collection name.
        #[arg(long)]
        collection: Option<String>,
    },
    /// Render a layout and its clustering trace as SVG.
    RenderSvg {
        /// Layout document to draw.
        layout: PathBuf,
        /// Trace document produced by extract --trace.
        trace: PathBuf,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Data(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

/// Parses arguments, runs, and exits with the documented status codes.
pub fn main_entry() -> ! {
    let cli = Cli::parse();
    let code = match execute(cli) {
        Ok(()) => 0,
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code)
}

fn execute(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Extract {
            layout,
            tolerance,
            min_pts,
            out,
            trace,
        } => {
            if trace && out.is_none() {
                return Err(Failure::Usage(
                    "--trace needs --out to know where the trace file goes".into(),
                ));
            }
            cmd_extract(&layout, tolerance, min_pts, out.as_deref(), trace)?;
            Ok(())
        }
        Command::Evaluate {
            manifests,
            tolerance,
            min_pts,
            format,
            out,
        } => {
            cmd_evaluate(&manifests, tolerance, min_pts, format, out.as_deref())?;
            Ok(())
        }
        Command::Generate {
            out_dir,
            seed,
            count,
            groups,
            min_fields,
            max_fields,
            jitter,
            collection,
        } => {
            if count == 0 {
                return Err(Failure::Usage("--count must be at least 1".into()));
            }
            if let Some(name) = &collection {
                if name.is_empty() || name.contains([',', '\n', '\r']) {
                    return Err(Failure::Usage(format!(
                        "collection name {name:?} is empty or contains a separator"
                    )));
                }
            }
            let spec = SyntheticSpec {
                groups,
                min_fields,
                max_fields,
                jitter,
            };
            cmd_generate(&out_dir, seed, count, &spec, collection.as_deref())?;
            Ok(())
        }
        Command::RenderSvg { layout, trace, out } => {
            cmd_render_svg(&layout, &trace, &out)?;
            Ok(())
        }
    }
}

fn trace_path_for(out: &Path) -> PathBuf {
    out.with_extension("trace.json")
}

fn cmd_extract(
    layout_path: &Path,
    tolerance: f64,
    min_pts: usize,
    out: Option<&Path>,
    want_trace: bool,
) -> Result<()> {
    let layout = load_layout(layout_path)?;
    let run = build_hierarchy(&layout.interface_id, &layout.fields, tolerance, min_pts)?;
    let tree = run.result.clone().with_not_rendered(layout.decorations.clone());
    let tree_text = to_pretty_json(&tree.to_document());
    match out {
        Some(path) => {
            write_file(path, &tree_text)?;
            if want_trace {
                let trace_text = to_pretty_json(&run.to_document());
                write_file(&trace_path_for(path), &trace_text)?;
            }
        }
        None => print!("{tree_text}"),
    }
    Ok(())
}

fn cmd_evaluate(
    manifest_paths: &[PathBuf],
    tolerance: f64,
    min_pts: usize,
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<()> {
    let manifests = manifest_paths
        .iter()
        .map(|p| load_manifest(p))
        .collect::<Result<Vec<_>>>()?;
    let report = evaluate_corpus(&manifests, tolerance, min_pts)?;
    match format {
        ReportFormat::Table => print!("{}", render_table(&report)),
        ReportFormat::Csv => print!("{}", render_csv(&report)),
    }
    if let Some(path) = out {
        write_file(path, &render_csv(&report))?;
    }
    Ok(())
}

fn cmd_generate(
    out_dir: &Path,
    seed: u64,
    count: u64,
    spec: &SyntheticSpec,
    collection: Option<&str>,
) -> Result<()> {
    // Surface an unrealizable spec before touching the filesystem.
    spec.validate()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let mut entries = Vec::new();
    for seed in seed..seed + count {
        let (layout, gold) = generate_synthetic(seed, spec)?;
        let layout_name = format!("{}.layout.json", layout.interface_id);
        let gold_name = format!("{}.gold.json", layout.interface_id);
        write_file(&out_dir.join(&layout_name), &layout.to_json())?;
        write_file(
            &out_dir.join(&gold_name),
            &to_pretty_json(&gold.to_document()),
        )?;
        entries.push(ManifestEntryDocument {
            layout: layout_name,
            gold: gold_name,
        });
    }
    if let Some(name) = collection {
        let manifest = ManifestDocument {
            collection: name.to_owned(),
            entries,
        };
        write_file(&out_dir.join("manifest.json"), &to_pretty_json(&manifest))?;
    }
    println!("wrote {count} interface pair(s) to {}", out_dir.display());
    Ok(())
}

fn cmd_render_svg(layout_path: &Path, trace_path: &Path, out: &Path) -> Result<()> {
    let layout = load_layout(layout_path)?;
    let trace_text = read_file(trace_path)?;
    let trace: TraceDocument = serde_json::from_str(&trace_text).map_err(|e| Error::Parse {
        path: trace_path.display().to_string(),
        detail: e.to_string(),
    })?;
    let svg = render_svg(&layout, &trace)?;
    write_file(out, &svg)?;
    Ok(())
}
