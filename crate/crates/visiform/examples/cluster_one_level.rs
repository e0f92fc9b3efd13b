//! Runs a single density-clustering round over a handful of fields: picks
//! the level threshold (the smallest finite pairwise proximity) and prints
//! which fields cluster together and which stay noise.
//!
//!     cargo run --example cluster_one_level

use visiform::cluster::{dbscan, select_eps, ClusterItem};
use visiform::geometry::Rect;

fn item(id: &str, x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> ClusterItem {
    ClusterItem {
        id: id.to_string(),
        bbox: Rect::new(x_min, y_min, x_max, y_max),
        members: vec![id.to_string()],
    }
}

fn main() {
    // A passenger row of three tight dropdowns and one stray field.
    let items = vec![
        item("adults", 100.0, 235.0, 160.0, 255.0),
        item("children", 170.0, 235.0, 230.0, 255.0),
        item("infants", 240.0, 235.0, 300.0, 255.0),
        item("flight-class", 345.0, 235.0, 405.0, 255.0),
    ];
    let tol = 2.0;

    let eps = select_eps(&items, tol).expect("two or more items");
    println!("threshold for this round: {eps}");

    let level = dbscan(&items, eps, 1, tol);
    for (i, cluster) in level.clusters.iter().enumerate() {
        let ids: Vec<&str> = cluster.iter().map(|m| m.id.as_str()).collect();
        println!("cluster {i}: {ids:?}");
    }
    let noise: Vec<&str> = level.noise.iter().map(|m| m.id.as_str()).collect();
    println!("noise: {noise:?}");

    println!("\npairwise proximity (rows follow processing order):");
    for (row, item) in level.proximity.iter().zip(&level.items) {
        let cells: Vec<String> = row.iter().map(|p| format!("{:>19}", p.to_string())).collect();
        println!("  {:>12}  {}", item.id, cells.join(" "));
    }
}
