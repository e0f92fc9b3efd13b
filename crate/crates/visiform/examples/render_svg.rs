//! Renders a clustering run as an SVG: one rectangle per field, one dashed
//! reach circle per clustered field, gray for noise. Writes the image next
//! to the system temp directory and prints the path.
//!
//!     cargo run --example render_svg [out.svg]

use std::path::{Path, PathBuf};

use visiform::cluster::build_hierarchy;
use visiform::layout::load_layout;
use visiform::svg::render_svg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("visiform-flight.svg"));

    let layout_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/flight_search.layout.json");
    let layout = load_layout(&layout_path)?;
    let run = build_hierarchy(&layout.interface_id, &layout.fields, 2.0, 1)?;

    let image = render_svg(&layout, &run.to_document())?;
    std::fs::write(&out, &image)?;
    println!("wrote {} ({} bytes)", out.display(), image.len());
    Ok(())
}
