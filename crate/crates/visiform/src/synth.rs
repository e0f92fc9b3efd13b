//! Seeded synthetic interfaces with known gold trees.
//!
//! The generator lays every group out as one horizontal row of fields and
//! staggers each row's left margin, so with no jitter the rows are
//! internally aligned while no two edges from different rows line up.
//! Intra-row gaps are small and inter-row gaps large, which makes the
//! intended grouping exactly recoverable; jitter then perturbs every edge
//! to degrade that recoverability gradually. Page geometry is fixed; only
//! the group/field counts, controls, and jitter draws consume randomness.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::layout::InterfaceLayout;
use crate::model::{ControlKind, FieldElement, QueryNode, QueryTree};

const PAGE_WIDTH: f64 = 1024.0;
const PAGE_HEIGHT: f64 = 768.0;
const MARGIN: f64 = 40.0;
const FIELD_WIDTH: f64 = 90.0;
const FIELD_HEIGHT: f64 = 24.0;
/// Horizontal gap between row neighbors; proximity inside a row is this
/// over the row alignment score of 3.
const GAP_X: f64 = 12.0;
/// Vertical distance between row tops; leaves 56 clear pixels between rows.
const PITCH_Y: f64 = 80.0;
/// Per-row left-margin shift. Multiples of it never coincide with
/// multiples of the field pitch, so rows share no vertical edge.
const STAGGER: f64 = 10.0;

const CONTROLS: [ControlKind; 5] = [
    ControlKind::Text,
    ControlKind::Select,
    ControlKind::Radio,
    ControlKind::Checkbox,
    ControlKind::Date,
];

/// Shape of one synthetic interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    /// Number of field rows; each becomes one gold group.
    pub groups: usize,
    pub min_fields: usize,
    pub max_fields: usize,
    /// Maximum per-edge perturbation in pixels.
    pub jitter: f64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.groups == 0 {
            return Err(Error::Generation("groups must be positive".into()));
        }
        if self.min_fields == 0 {
            return Err(Error::Generation("min_fields must be positive".into()));
        }
        if self.min_fields > self.max_fields {
            return Err(Error::Generation(format!(
                "min_fields {} exceeds max_fields {}",
                self.min_fields, self.max_fields
            )));
        }
        if !(self.jitter >= 0.0 && self.jitter.is_finite()) {
            return Err(Error::Generation(format!(
                "jitter {} must be finite and non-negative",
                self.jitter
            )));
        }
        let groups = self.groups as f64;
        let fields = self.max_fields as f64;
        let widest = MARGIN * 2.0 + STAGGER * (groups - 1.0) + fields * (FIELD_WIDTH + GAP_X)
            - GAP_X;
        if widest > PAGE_WIDTH {
            return Err(Error::Generation(format!(
                "{} fields per row with {} rows needs {widest} px of width, page has {PAGE_WIDTH}",
                self.max_fields, self.groups
            )));
        }
        let tallest = MARGIN * 2.0 + PITCH_Y * (groups - 1.0) + FIELD_HEIGHT;
        if tallest > PAGE_HEIGHT {
            return Err(Error::Generation(format!(
                "{} rows need {tallest} px of height, page has {PAGE_HEIGHT}",
                self.groups
            )));
        }
        Ok(())
    }
}

/// Generates one interface and the gold tree its placement encodes.
/// Deterministic for a fixed seed and spec.
pub fn generate_synthetic(seed: u64, spec: &SyntheticSpec) -> Result<(InterfaceLayout, QueryTree)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts: Vec<usize> = (0..spec.groups)
        .map(|_| rng.random_range(spec.min_fields..=spec.max_fields))
        .collect();

    let interface_id = format!("synthetic-{seed}");
    let mut fields = Vec::new();
    let mut groups: Vec<Vec<String>> = Vec::new();
    for (g, &count) in counts.iter().enumerate() {
        let row_x = MARGIN + STAGGER * g as f64;
        let row_y = MARGIN + PITCH_Y * g as f64;
        let mut row_ids = Vec::new();
        for i in 0..count {
            let id = format!("f{g}.{i}");
            let x0 = row_x + (FIELD_WIDTH + GAP_X) * i as f64;
            let ideal = Rect::new(x0, row_y, x0 + FIELD_WIDTH, row_y + FIELD_HEIGHT);
            let control = CONTROLS[rng.random_range(0..CONTROLS.len())];
            let bbox = if spec.jitter > 0.0 {
                perturb(&mut rng, ideal, spec.jitter)
            } else {
                ideal
            };
            fields.push(FieldElement {
                label: format!("Field {g}.{i}"),
                id: id.clone(),
                control,
                bbox,
            });
            row_ids.push(id);
        }
        groups.push(row_ids);
    }

    let layout = InterfaceLayout {
        interface_id: interface_id.clone(),
        page_width: PAGE_WIDTH,
        page_height: PAGE_HEIGHT,
        fields,
        decorations: Vec::new(),
    };

    let children = groups
        .iter()
        .enumerate()
        .map(|(g, ids)| {
            let members: Vec<QueryNode> = ids.iter().map(QueryNode::field).collect();
            if members.len() == 1 {
                members.into_iter().next().expect("one member")
            } else {
                QueryNode::labeled_group(format!("Group {g}"), members)
            }
        })
        .collect();
    let gold = QueryTree::new(interface_id, children, layout.field_table(), Vec::new())?;
    Ok((layout, gold))
}

/// Shifts each edge independently by up to `jitter`, then clamps into the
/// page and restores edge order, so the result is always a valid box.
fn perturb(rng: &mut ChaCha8Rng, ideal: Rect, jitter: f64) -> Rect {
    let mut shift = |v: f64, limit: f64| (v + rng.random_range(-jitter..=jitter)).clamp(0.0, limit);
    let x0 = shift(ideal.x_min, PAGE_WIDTH);
    let y0 = shift(ideal.y_min, PAGE_HEIGHT);
    let x1 = shift(ideal.x_max, PAGE_WIDTH);
    let y1 = shift(ideal.y_max, PAGE_HEIGHT);
    Rect::new(x0.min(x1), y0.min(y1), x0.max(x1), y0.max(y1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::build_hierarchy;
    use crate::layout::parse_layout;

    fn spec(groups: usize, min: usize, max: usize, jitter: f64) -> SyntheticSpec {
        SyntheticSpec {
            groups,
            min_fields: min,
            max_fields: max,
            jitter,
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let s = spec(3, 2, 4, 1.5);
        let (l1, g1) = generate_synthetic(42, &s).unwrap();
        let (l2, g2) = generate_synthetic(42, &s).unwrap();
        assert_eq!(l1.to_json(), l2.to_json());
        assert_eq!(
            serde_json::to_string(&g1.to_document()).unwrap(),
            serde_json::to_string(&g2.to_document()).unwrap()
        );
    }

    #[test]
    fn generated_layout_is_loadable() {
        let (layout, _) = generate_synthetic(7, &spec(4, 1, 5, 0.0)).unwrap();
        let reparsed = parse_layout(&layout.to_json(), "inline").unwrap();
        assert_eq!(reparsed, layout);
    }

    #[test]
    fn rows_are_aligned_and_separated() {
        let (layout, _) = generate_synthetic(3, &spec(3, 3, 3, 0.0)).unwrap();
        // Fields of one row share top and bottom.
        for g in 0..3 {
            let row: Vec<_> = layout
                .fields
                .iter()
                .filter(|f| f.id.starts_with(&format!("f{g}.")))
                .collect();
            assert_eq!(row.len(), 3);
            assert!(row.iter().all(|f| f.bbox.y_min == row[0].bbox.y_min));
            assert!(row.iter().all(|f| f.bbox.y_max == row[0].bbox.y_max));
        }
        // Vertical clearance between rows dwarfs the in-row gap.
        let clearance = PITCH_Y - FIELD_HEIGHT;
        assert!(clearance > GAP_X * 4.0);
    }

    #[test]
    fn pipeline_recovers_gold_without_jitter() {
        for seed in 0..100 {
            let (layout, gold) = generate_synthetic(seed, &spec(3, 2, 4, 0.0)).unwrap();
            let trace =
                build_hierarchy(&layout.interface_id, &layout.fields, 2.0, 1).unwrap();
            assert!(
                trace.result.structure_eq(&gold).unwrap(),
                "seed {seed} diverged"
            );
        }
    }

    #[test]
    fn varied_shapes_recover_without_jitter() {
        for (groups, min, max) in [(1, 1, 1), (1, 2, 5), (2, 1, 3), (5, 1, 6), (8, 2, 8), (9, 1, 2)]
        {
            for seed in 0..10 {
                let (layout, gold) =
                    generate_synthetic(seed, &spec(groups, min, max, 0.0)).unwrap();
                let trace =
                    build_hierarchy(&layout.interface_id, &layout.fields, 2.0, 1).unwrap();
                assert!(
                    trace.result.structure_eq(&gold).unwrap(),
                    "shape {groups}/{min}/{max} seed {seed} diverged"
                );
            }
        }
    }

    #[test]
    fn heavy_jitter_still_emits_valid_documents() {
        for seed in 0..30 {
            let (layout, gold) = generate_synthetic(seed, &spec(4, 2, 4, 60.0)).unwrap();
            let reparsed = parse_layout(&layout.to_json(), "inline").unwrap();
            assert_eq!(reparsed, layout);
            let leaf_count: usize = gold.children.iter().map(|c| c.leaf_ids().len()).sum();
            assert_eq!(leaf_count, layout.fields.len());
        }
    }

    #[test]
    fn rejects_zero_counts() {
        assert!(generate_synthetic(1, &spec(0, 1, 1, 0.0)).is_err());
        assert!(generate_synthetic(1, &spec(1, 0, 1, 0.0)).is_err());
        assert!(generate_synthetic(1, &spec(1, 3, 2, 0.0)).is_err());
        assert!(generate_synthetic(1, &spec(1, 1, 1, -1.0)).is_err());
    }

    #[test]
    fn rejects_overfull_page() {
        let wide = generate_synthetic(1, &spec(2, 1, 12, 0.0)).unwrap_err();
        assert!(wide.to_string().contains("width"), "{wide}");
        let tall = generate_synthetic(1, &spec(12, 1, 1, 0.0)).unwrap_err();
        assert!(tall.to_string().contains("height"), "{tall}");
    }
}
