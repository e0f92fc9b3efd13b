//! Builds two small synthetic collections on disk, scores the extractor
//! against their gold trees, and prints the comparison table. The clean
//! collection scores 1.00; the jittered one loses rows.
//!
//!     cargo run --example evaluate_corpus

use std::fs;
use std::path::Path;

use visiform::eval::{evaluate_corpus, render_csv, render_table};
use visiform::layout::{load_manifest, to_pretty_json, ManifestDocument, ManifestEntryDocument};
use visiform::synth::{generate_synthetic, SyntheticSpec};

fn write_collection(
    dir: &Path,
    name: &str,
    seeds: std::ops::Range<u64>,
    spec: &SyntheticSpec,
) -> Result<std::path::PathBuf, Box<dyn std::error::Error>> {
    fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for seed in seeds {
        let (layout, gold) = generate_synthetic(seed, spec)?;
        let layout_name = format!("{}.layout.json", layout.interface_id);
        let gold_name = format!("{}.gold.json", layout.interface_id);
        fs::write(dir.join(&layout_name), layout.to_json())?;
        fs::write(dir.join(&gold_name), to_pretty_json(&gold.to_document()))?;
        entries.push(ManifestEntryDocument { layout: layout_name, gold: gold_name });
    }
    let manifest = dir.join("manifest.json");
    let doc = ManifestDocument { collection: name.to_string(), entries };
    fs::write(&manifest, to_pretty_json(&doc))?;
    Ok(manifest)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::temp_dir().join("visiform-example-corpus");
    let clean = SyntheticSpec { groups: 3, min_fields: 2, max_fields: 4, jitter: 0.0 };
    let shaken = SyntheticSpec { groups: 3, min_fields: 2, max_fields: 2, jitter: 4.0 };
    let manifests = vec![
        load_manifest(&write_collection(&root.join("clean"), "Clean", 0..20, &clean)?)?,
        load_manifest(&write_collection(&root.join("shaken"), "Shaken", 0..20, &shaken)?)?,
    ];

    let report = evaluate_corpus(&manifests, 2.0, 1)?;
    print!("{}", render_table(&report));
    println!();
    print!("{}", render_csv(&report));
    println!("\ncorpus files are under {}", root.display());
    Ok(())
}
