//! Static SVG rendering of one clustering run over its layout.
//!
//! Fields are drawn as rectangles. Each field with at least one aligned
//! partner gets a circle approximating its level-0 density scope; circles
//! sharing a stroke color belong to one cluster, and noise circles are
//! gray and dashed. Output bytes depend only on the inputs.

use std::collections::HashMap;

use crate::cluster::TraceDocument;
use crate::error::{Error, Result};
use crate::geometry::{alignment_score, proximity};
use crate::layout::InterfaceLayout;

const PALETTE: [&str; 8] = [
    "#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#b7950b", "#17a2b8", "#d35400", "#5d6d7e",
];
const NOISE_COLOR: &str = "#888888";

fn esc(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the layout with the trace's level-0 clustering.
///
/// The proximity unit is distance over alignment, so a radius in pixels
/// takes converting back: each circle uses eps times the mean alignment
/// score over that field's reachable partners. A field with no reachable
/// partner, or a run whose first level found none, draws no circle.
pub fn render_svg(layout: &InterfaceLayout, trace: &TraceDocument) -> Result<String> {
    if trace.interface_id != layout.interface_id {
        return Err(Error::TraceMismatch(format!(
            "trace is for {:?}, layout is {:?}",
            trace.interface_id, layout.interface_id
        )));
    }
    let level0 = trace.levels.first();
    if let Some(level) = level0 {
        let mut trace_ids: Vec<&str> = level.items.iter().map(|i| i.id.as_str()).collect();
        trace_ids.sort_unstable();
        let mut field_ids: Vec<&str> = layout.fields.iter().map(|f| f.id.as_str()).collect();
        field_ids.sort_unstable();
        if trace_ids != field_ids {
            return Err(Error::TraceMismatch(format!(
                "{}: trace items {:?} do not match layout fields {:?}",
                layout.interface_id, trace_ids, field_ids
            )));
        }
    }

    // Stroke color per field id: cluster index into the palette, noise gray.
    let mut colors: HashMap<&str, (&str, bool)> = HashMap::new();
    if let Some(level) = level0 {
        for (ci, cluster) in level.clusters.iter().enumerate() {
            for id in cluster {
                colors.insert(id, (PALETTE[ci % PALETTE.len()], false));
            }
        }
        for id in &level.noise {
            colors.insert(id, (NOISE_COLOR, true));
        }
    }

    let tol = trace.align_tolerance;
    let eps = level0.and_then(|l| l.epsilon);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        layout.page_width, layout.page_height, layout.page_width, layout.page_height
    ));
    out.push_str(&format!("<title>{}</title>\n", esc(&layout.interface_id)));
    out.push_str(
        "<!-- Density scopes at the first clustering level. Circle radius is\n     \
         epsilon times the mean alignment score over the field's reachable\n     \
         partners; same stroke color means same cluster, dashed gray means\n     \
         noise. -->\n",
    );
    for field in &layout.fields {
        let b = &field.bbox;
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#f4f4f4\" stroke=\"#333333\"/>\n",
            b.x_min,
            b.y_min,
            b.width(),
            b.height()
        ));
    }
    if let Some(eps) = eps {
        for field in &layout.fields {
            let partners: Vec<u32> = layout
                .fields
                .iter()
                .filter(|other| other.id != field.id)
                .filter(|other| proximity(&field.bbox, &other.bbox, tol).is_finite())
                .map(|other| alignment_score(&field.bbox, &other.bbox, tol))
                .collect();
            if partners.is_empty() {
                continue;
            }
            let mean = f64::from(partners.iter().sum::<u32>()) / partners.len() as f64;
            let radius = eps * mean;
            let center = field.bbox.center();
            let (stroke, dashed) = colors
                .get(field.id.as_str())
                .copied()
                .unwrap_or((NOISE_COLOR, true));
            let dash = if dashed { " stroke-dasharray=\"4 3\"" } else { "" };
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\"{dash}/>\n",
                center.x, center.y, radius
            ));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
