//! Shows how the visual proximity between two labeled rectangles is put
//! together: minimum edge distance, shared-edge alignment, and their ratio.
//!
//!     cargo run --example measure_proximity

use visiform::geometry::{
    aligned, alignment_score, proximity, rect_min_distance, AlignmentAxis, Rect,
};

fn main() {
    // Two side-by-side dropdowns from a date row, plus one field far below.
    let month = Rect::new(100.0, 150.0, 160.0, 170.0);
    let day = Rect::new(190.0, 150.0, 250.0, 170.0);
    let city = Rect::new(103.0, 420.0, 163.0, 440.0);
    let tol = 2.0;

    for (name_a, a, name_b, b) in [
        ("month", &month, "day", &day),
        ("month", &month, "city", &city),
    ] {
        println!("{name_a} vs {name_b}:");
        println!("  min edge distance: {}", rect_min_distance(a, b));
        for axis in AlignmentAxis::ALL {
            println!("  {axis:?} edges within {tol}px: {}", aligned(a, b, axis, tol));
        }
        let score = alignment_score(a, b, tol);
        println!("  alignment score (bottom counts twice): {score}");
        println!("  proximity = distance / score: {}", proximity(a, b, tol));
        println!();
    }

    // No shared edge at all: the pair is unreachable, never clustered.
    let skewed = Rect::new(300.0, 301.0, 400.0, 333.0);
    println!("month vs a fully unaligned box: {}", proximity(&month, &skewed, tol));
}
