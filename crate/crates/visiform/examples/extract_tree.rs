//! Extracts the full hierarchical query tree from the bundled flight-search
//! layout and shows each clustering round on the way.
//!
//!     cargo run --example extract_tree [path/to/layout.json]

use std::path::{Path, PathBuf};

use visiform::cluster::build_hierarchy;
use visiform::layout::{load_layout, to_pretty_json};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("data/flight_search.layout.json")
    });
    let layout = load_layout(&path)?;
    println!(
        "{}: {} fields, {} decorations",
        layout.interface_id,
        layout.fields.len(),
        layout.decorations.len()
    );

    let run = build_hierarchy(&layout.interface_id, &layout.fields, 2.0, 1)?;
    for (depth, level) in run.levels.iter().enumerate() {
        println!("\nround {depth}: threshold {}", level.epsilon);
        for cluster in &level.clusters {
            let ids: Vec<&str> = cluster.iter().map(|m| m.id.as_str()).collect();
            println!("  merged {ids:?}");
        }
        let noise: Vec<&str> = level.noise.iter().map(|m| m.id.as_str()).collect();
        println!("  left alone {noise:?}");
    }

    let tree = run.result.clone().with_not_rendered(layout.decorations.clone());
    println!("\ncanonical tree:\n{}", to_pretty_json(&tree.to_document()));
    Ok(())
}
