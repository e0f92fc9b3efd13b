//! Density clustering over field proximity and the recursive hierarchy
//! builder that turns one interface's fields into a query tree.
//!
//! Clustering runs level by level. Level 0 items are the fields; every
//! cluster found at a level becomes a single super-item (tight bounding
//! box, merged member set) at the next, noise items pass through, and the
//! loop ends when one item remains or a round merges nothing.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{proximity, Proximity, Rect};
use crate::model::{FieldElement, QueryNode, QueryTree};

/// One unit of clustering: a field at level 0, a merged group above.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterItem {
    pub id: String,
    /// Tight bounding box over all member fields.
    pub bbox: Rect,
    /// Leaf field ids covered, sorted.
    pub members: Vec<String>,
}

impl ClusterItem {
    pub fn from_field(field: &FieldElement) -> Self {
        ClusterItem {
            id: field.id.clone(),
            bbox: field.bbox,
            members: vec![field.id.clone()],
        }
    }
}

/// Deterministic processing order: top to bottom, left to right, id as the
/// final tie-break. The cluster partition does not depend on it, but trace
/// bytes do.
fn item_order(a: &ClusterItem, b: &ClusterItem) -> std::cmp::Ordering {
    (a.bbox.y_min, a.bbox.x_min)
        .partial_cmp(&(b.bbox.y_min, b.bbox.x_min))
        .expect("item coordinates are finite")
        .then_with(|| a.id.cmp(&b.id))
}

/// The result of one clustering round.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLevel {
    pub epsilon: Proximity,
    pub min_pts: usize,
    /// Input items in processing order; matrix rows follow this order.
    pub items: Vec<ClusterItem>,
    /// Full symmetric pairwise proximity matrix, zero on the diagonal.
    pub proximity: Vec<Vec<Proximity>>,
    /// Clusters in discovery order, members in expansion order.
    pub clusters: Vec<Vec<ClusterItem>>,
    /// Items without enough neighbors, in processing order.
    pub noise: Vec<ClusterItem>,
}

impl ClusterLevel {
    fn to_trace_level(&self) -> TraceLevel {
        TraceLevel {
            epsilon: self.epsilon.as_option(),
            items: self.items.clone(),
            proximity_matrix: self
                .proximity
                .iter()
                .map(|row| row.iter().map(Proximity::as_option).collect())
                .collect(),
            clusters: self
                .clusters
                .iter()
                .map(|c| c.iter().map(|i| i.id.clone()).collect())
                .collect(),
            noise: self.noise.iter().map(|i| i.id.clone()).collect(),
        }
    }
}

/// Everything a hierarchy run produced: every level plus the final tree.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyTrace {
    pub levels: Vec<ClusterLevel>,
    pub result: QueryTree,
    pub align_tolerance: f64,
    pub min_pts: usize,
}

impl HierarchyTrace {
    pub fn to_document(&self) -> TraceDocument {
        TraceDocument {
            interface_id: self.result.interface_id.clone(),
            align_tolerance: self.align_tolerance,
            min_pts: self.min_pts,
            levels: self.levels.iter().map(ClusterLevel::to_trace_level).collect(),
        }
    }
}

/// Serialized run log: what `--trace` writes and the SVG renderer reads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub interface_id: String,
    pub align_tolerance: f64,
    pub min_pts: usize,
    pub levels: Vec<TraceLevel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLevel {
    /// Null when no pair at this level was aligned.
    pub epsilon: Option<f64>,
    pub items: Vec<ClusterItem>,
    /// Row order matches `items`; null marks an unreachable pair.
    pub proximity_matrix: Vec<Vec<Option<f64>>>,
    pub clusters: Vec<Vec<String>>,
    pub noise: Vec<String>,
}

/// All other items within `eps` of `item`. Unreachable pairs never
/// qualify, whatever the threshold, so mutually unaligned layouts fall
/// apart into noise instead of collapsing into one blob.
pub fn scope_density<'a>(
    item: &ClusterItem,
    items: &'a [ClusterItem],
    eps: Proximity,
    tol: f64,
) -> Vec<&'a ClusterItem> {
    items
        .iter()
        .filter(|other| other.id != item.id)
        .filter(|other| {
            let p = proximity(&item.bbox, &other.bbox, tol);
            p.is_finite() && p <= eps
        })
        .collect()
}

/// The neighborhood radius for one level: the minimum proximity over all
/// unordered pairs. Unreachable when no pair is aligned at all.
pub fn select_eps(items: &[ClusterItem], tol: f64) -> Result<Proximity> {
    if items.len() < 2 {
        return Err(Error::DegenerateInput(format!(
            "epsilon needs at least 2 items, got {}",
            items.len()
        )));
    }
    let mut best = Proximity::UNREACHABLE;
    for (i, a) in items.iter().enumerate() {
        for b in &items[i + 1..] {
            let p = proximity(&a.bbox, &b.bbox, tol);
            if p < best {
                best = p;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mark {
    Unclassified,
    Noise,
    Cluster(usize),
}

/// Density clustering of one level.
///
/// Follows the expansion discipline exactly: an unclassified item with too
/// few neighbors becomes noise; otherwise it seeds a cluster that grows
/// breadth-first through neighbor scopes, re-absorbing noise it reaches. A
/// seed whose own scope is too small is demoted to noise even though it was
/// already reached; with `min_pts` 1 that branch is unreachable (the item
/// that reached it is in its scope), and then clusters are precisely the
/// connected components, of size 2 or more, of the proximity-within-eps
/// graph, with isolated items as noise.
pub fn dbscan(items: &[ClusterItem], eps: Proximity, min_pts: usize, tol: f64) -> ClusterLevel {
    assert!(min_pts >= 1, "min_pts must be positive");
    let mut items = items.to_vec();
    items.sort_by(item_order);
    let n = items.len();

    let matrix: Vec<Vec<Proximity>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| proximity(&items[i].bbox, &items[j].bbox, tol))
                .collect()
        })
        .collect();
    let scope = |i: usize| -> Vec<usize> {
        (0..n)
            .filter(|&j| j != i && matrix[i][j].is_finite() && matrix[i][j] <= eps)
            .collect()
    };

    let mut marks = vec![Mark::Unclassified; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if marks[i] != Mark::Unclassified {
            continue;
        }
        let seeds0 = scope(i);
        if seeds0.len() < min_pts {
            marks[i] = Mark::Noise;
            continue;
        }
        let cid = clusters.len();
        clusters.push(vec![i]);
        marks[i] = Mark::Cluster(cid);
        for &j in &seeds0 {
            marks[j] = Mark::Cluster(cid);
            clusters[cid].push(j);
        }
        let mut seeds: VecDeque<usize> = seeds0.into_iter().collect();
        while let Some(cur) = seeds.pop_front() {
            let reach = scope(cur);
            if reach.len() >= min_pts {
                for r in reach {
                    match marks[r] {
                        Mark::Unclassified => {
                            seeds.push_back(r);
                            marks[r] = Mark::Cluster(cid);
                            clusters[cid].push(r);
                        }
                        Mark::Noise => {
                            marks[r] = Mark::Cluster(cid);
                            clusters[cid].push(r);
                        }
                        Mark::Cluster(_) => {}
                    }
                }
            } else {
                // As specified: a reached seed with a thin scope is dropped
                // back to noise. Dead code at min_pts = 1.
                marks[cur] = Mark::Noise;
                clusters[cid].retain(|&m| m != cur);
            }
        }
    }

    debug_assert!(
        marks.iter().all(|m| *m != Mark::Unclassified),
        "every item classified"
    );
    let noise: Vec<ClusterItem> = (0..n)
        .filter(|&i| marks[i] == Mark::Noise)
        .map(|i| items[i].clone())
        .collect();
    let clusters: Vec<Vec<ClusterItem>> = clusters
        .into_iter()
        .map(|idxs| idxs.into_iter().map(|i| items[i].clone()).collect())
        .collect();
    debug_assert_eq!(
        clusters.iter().map(Vec::len).sum::<usize>() + noise.len(),
        n,
        "clusters and noise partition the items"
    );
    ClusterLevel {
        epsilon: eps,
        min_pts,
        items,
        proximity: matrix,
        clusters,
        noise,
    }
}

/// Runs the clustering rounds and assembles the query tree.
///
/// Each cluster becomes a group node over its members' subtrees and one
/// merged item for the next round. The loop stops when a single item is
/// left (its group becomes the root's children) or when a round merges
/// nothing, in which case the surviving items all hang directly off the
/// root. The returned tree is canonical.
pub fn build_hierarchy(
    interface_id: &str,
    fields: &[FieldElement],
    tol: f64,
    min_pts: usize,
) -> Result<HierarchyTrace> {
    if fields.is_empty() {
        return Err(Error::DegenerateInput(format!(
            "{interface_id}: cannot build a hierarchy over zero fields"
        )));
    }
    let mut nodes: HashMap<String, QueryNode> = fields
        .iter()
        .map(|f| (f.id.clone(), QueryNode::field(f.id.clone())))
        .collect();
    let mut items: Vec<ClusterItem> = fields.iter().map(ClusterItem::from_field).collect();
    items.sort_by(item_order);

    let mut levels: Vec<ClusterLevel> = Vec::new();
    let root_children: Vec<QueryNode> = loop {
        if items.len() == 1 {
            let only = nodes
                .remove(&items[0].id)
                .expect("every live item has a node");
            break match only {
                // The last surviving group is the collection itself.
                QueryNode::Group { children, .. } => children,
                field @ QueryNode::Field(_) => vec![field],
            };
        }
        let eps = select_eps(&items, tol)?;
        let level = dbscan(&items, eps, min_pts, tol);
        let merged_any = level.clusters.iter().any(|c| c.len() >= 2);
        if !merged_any {
            let survivors = level
                .items
                .iter()
                .map(|item| nodes.remove(&item.id).expect("every live item has a node"))
                .collect();
            levels.push(level);
            break survivors;
        }

        let mut next: Vec<ClusterItem> = Vec::new();
        // Noise survives levels untouched, so fresh group ids must dodge
        // any field that happens to be named like one.
        let mut taken: HashSet<String> =
            level.noise.iter().map(|item| item.id.clone()).collect();
        for (ci, cluster) in level.clusters.iter().enumerate() {
            let mut id = format!("g{}.{}", levels.len(), ci);
            while taken.contains(&id) {
                id.push('+');
            }
            taken.insert(id.clone());

            let bbox = cluster
                .iter()
                .skip(1)
                .fold(cluster[0].bbox, |acc, item| acc.union(&item.bbox));
            let mut members: Vec<String> = cluster
                .iter()
                .flat_map(|item| item.members.iter().cloned())
                .collect();
            members.sort();
            let children = cluster
                .iter()
                .map(|item| nodes.remove(&item.id).expect("every live item has a node"))
                .collect();
            nodes.insert(id.clone(), QueryNode::group(children));
            next.push(ClusterItem { id, bbox, members });
        }
        next.extend(level.noise.iter().cloned());
        next.sort_by(item_order);
        levels.push(level);
        items = next;
    };

    let table = fields.iter().map(|f| (f.id.clone(), f.clone())).collect();
    let result = QueryTree::new(interface_id, root_children, table, Vec::new())?;
    Ok(HierarchyTrace {
        levels,
        result,
        align_tolerance: tol,
        min_pts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ControlKind;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn item(id: &str, x0: f64, y0: f64, x1: f64, y1: f64) -> ClusterItem {
        ClusterItem {
            id: id.to_owned(),
            bbox: Rect::new(x0, y0, x1, y1),
            members: vec![id.to_owned()],
        }
    }

    fn field(id: &str, x0: f64, y0: f64, x1: f64, y1: f64) -> FieldElement {
        FieldElement {
            id: id.to_owned(),
            label: id.to_owned(),
            control: ControlKind::Text,
            bbox: Rect::new(x0, y0, x1, y1),
        }
    }

    /// Three bottom-aligned 10-pixel squares at x = 0, 15, 60. Pairwise
    /// proximities are 5/3, 35/3, and 50/3.
    fn three_squares() -> Vec<ClusterItem> {
        vec![
            item("s1", 0.0, 0.0, 10.0, 10.0),
            item("s2", 15.0, 0.0, 25.0, 10.0),
            item("s3", 60.0, 0.0, 70.0, 10.0),
        ]
    }

    #[test]
    fn eps_of_three_squares() {
        let eps = select_eps(&three_squares(), 0.0).unwrap();
        assert_eq!(eps, Proximity::finite(5.0 / 3.0));
    }

    #[test]
    fn eps_of_identical_stack_is_zero() {
        let items = vec![item("a", 5.0, 5.0, 20.0, 20.0), item("b", 5.0, 5.0, 20.0, 20.0)];
        assert_eq!(select_eps(&items, 0.0).unwrap(), Proximity::finite(0.0));
    }

    #[test]
    fn eps_of_unaligned_pair_is_unreachable() {
        let items = vec![item("a", 0.0, 0.0, 10.0, 10.0), item("b", 20.0, 40.0, 35.0, 55.0)];
        assert!(select_eps(&items, 0.0).unwrap().is_unreachable());
    }

    #[test]
    fn eps_needs_two_items() {
        let items = vec![item("a", 0.0, 0.0, 10.0, 10.0)];
        let err = select_eps(&items, 0.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)), "{err}");
    }

    #[test]
    fn scope_of_first_square_is_second_only() {
        let items = three_squares();
        let scope = scope_density(&items[0], &items, Proximity::finite(5.0 / 3.0), 0.0);
        let ids: Vec<&str> = scope.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(ids, ["s2"]);
    }

    #[test]
    fn scope_never_contains_the_item() {
        let items = three_squares();
        for it in &items {
            let scope = scope_density(it, &items, Proximity::UNREACHABLE, 0.0);
            assert!(scope.iter().all(|o| o.id != it.id));
        }
    }

    #[test]
    fn scope_of_unaligned_pair_is_empty_at_any_finite_eps() {
        let items = vec![item("a", 0.0, 0.0, 10.0, 10.0), item("b", 20.0, 40.0, 35.0, 55.0)];
        let scope = scope_density(&items[0], &items, Proximity::finite(1e9), 0.0);
        assert!(scope.is_empty());
    }

    #[test]
    fn dbscan_three_squares() {
        let items = three_squares();
        let eps = select_eps(&items, 0.0).unwrap();
        let level = dbscan(&items, eps, 1, 0.0);
        let cluster_ids: Vec<Vec<&str>> = level
            .clusters
            .iter()
            .map(|c| c.iter().map(|i| i.id.as_str()).collect())
            .collect();
        assert_eq!(cluster_ids, [["s1", "s2"]]);
        let noise_ids: Vec<&str> = level.noise.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(noise_ids, ["s3"]);
    }

    #[test]
    fn dbscan_single_item_is_noise() {
        let items = vec![item("a", 0.0, 0.0, 10.0, 10.0)];
        let level = dbscan(&items, Proximity::finite(100.0), 1, 0.0);
        assert!(level.clusters.is_empty());
        assert_eq!(level.noise.len(), 1);
    }

    #[test]
    fn dbscan_threshold_is_inclusive() {
        // Proximity is exactly 10/3 on both sides of the comparison.
        let items = vec![
            item("a", 0.0, 0.0, 10.0, 10.0),
            item("b", 20.0, 0.0, 30.0, 10.0),
        ];
        let eps = select_eps(&items, 0.0).unwrap();
        let level = dbscan(&items, eps, 1, 0.0);
        assert_eq!(level.clusters.len(), 1);
        assert!(level.noise.is_empty());
    }

    /// Passenger-count row plus a distant flight-class box: the cluster is
    /// grown from the adjacent pair to take in the third field, and the
    /// distant one stays orphaned.
    #[test]
    fn dbscan_grows_cluster_and_leaves_orphan() {
        let items = vec![
            item("adults", 100.0, 235.0, 160.0, 255.0),
            item("children", 170.0, 235.0, 230.0, 255.0),
            item("infants", 240.0, 235.0, 300.0, 255.0),
            item("flight-class", 345.0, 235.0, 405.0, 255.0),
        ];
        let eps = select_eps(&items, 0.0).unwrap();
        assert_eq!(eps, Proximity::finite(10.0 / 3.0));
        let level = dbscan(&items, eps, 1, 0.0);
        let cluster_ids: Vec<Vec<&str>> = level
            .clusters
            .iter()
            .map(|c| c.iter().map(|i| i.id.as_str()).collect())
            .collect();
        assert_eq!(cluster_ids, [["adults", "children", "infants"]]);
        let noise_ids: Vec<&str> = level.noise.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(noise_ids, ["flight-class"]);
    }

    #[test]
    fn dbscan_unreachable_eps_leaves_everything_noise() {
        let items = vec![
            item("a", 0.0, 0.0, 10.0, 10.0),
            item("b", 20.0, 40.0, 35.0, 55.0),
            item("c", 200.0, 300.0, 215.0, 320.0),
        ];
        let level = dbscan(&items, Proximity::UNREACHABLE, 1, 0.0);
        assert!(level.clusters.is_empty());
        assert_eq!(level.noise.len(), 3);
    }

    /// Index-based union-find, the independent reference for what the
    /// clusters must be at min_pts 1: connected components of the
    /// within-eps graph.
    struct UnionFind {
        parent: Vec<usize>,
    }

    impl UnionFind {
        fn new(n: usize) -> Self {
            UnionFind {
                parent: (0..n).collect(),
            }
        }
        fn find(&mut self, i: usize) -> usize {
            if self.parent[i] != i {
                let root = self.find(self.parent[i]);
                self.parent[i] = root;
            }
            self.parent[i]
        }
        fn union(&mut self, a: usize, b: usize) {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra != rb {
                self.parent[ra] = rb;
            }
        }
    }

    fn component_partition(items: &[ClusterItem], eps: Proximity, tol: f64) -> (Vec<std::collections::BTreeSet<String>>, std::collections::BTreeSet<String>) {
        let n = items.len();
        let mut uf = UnionFind::new(n);
        for i in 0..n {
            for j in i + 1..n {
                let p = proximity(&items[i].bbox, &items[j].bbox, tol);
                if p.is_finite() && p <= eps {
                    uf.union(i, j);
                }
            }
        }
        let mut groups: HashMap<usize, std::collections::BTreeSet<String>> = HashMap::new();
        for (i, item) in items.iter().enumerate() {
            let root = uf.find(i);
            groups.entry(root).or_default().insert(item.id.clone());
        }
        let mut clusters = Vec::new();
        let mut noise = std::collections::BTreeSet::new();
        for set in groups.into_values() {
            if set.len() >= 2 {
                clusters.push(set);
            } else {
                noise.extend(set);
            }
        }
        clusters.sort();
        (clusters, noise)
    }

    fn random_items(rng: &mut ChaCha8Rng, n: usize) -> Vec<ClusterItem> {
        (0..n)
            .map(|k| {
                let x0 = f64::from(rng.random_range(0i32..300));
                let y0 = f64::from(rng.random_range(0i32..200));
                let w = f64::from(rng.random_range(5i32..80));
                let h = f64::from(rng.random_range(5i32..40));
                item(&format!("r{k}"), x0, y0, x0 + w, y0 + h)
            })
            .collect()
    }

    #[test]
    fn dbscan_matches_component_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..300 {
            let n = rng.random_range(2usize..=50);
            let items = random_items(&mut rng, n);
            let tol = if rng.random_range(0u8..2) == 0 { 0.0 } else { 2.0 };
            let eps = match round % 3 {
                0 => select_eps(&items, tol).unwrap(),
                1 => Proximity::finite(f64::from(rng.random_range(0i32..80))),
                _ => Proximity::UNREACHABLE,
            };
            let level = dbscan(&items, eps, 1, tol);
            let got_clusters: Vec<std::collections::BTreeSet<String>> = {
                let mut cs: Vec<std::collections::BTreeSet<String>> = level
                    .clusters
                    .iter()
                    .map(|c| c.iter().map(|i| i.id.clone()).collect())
                    .collect();
                cs.sort();
                cs
            };
            let got_noise: std::collections::BTreeSet<String> =
                level.noise.iter().map(|i| i.id.clone()).collect();
            let (want_clusters, want_noise) = component_partition(&items, eps, tol);
            assert_eq!(got_clusters, want_clusters, "round {round}");
            assert_eq!(got_noise, want_noise, "round {round}");
        }
    }

    #[test]
    fn dbscan_partition_covers_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(1usize..=40);
            let items = random_items(&mut rng, n);
            let eps = if n >= 2 {
                select_eps(&items, 2.0).unwrap()
            } else {
                Proximity::UNREACHABLE
            };
            let min_pts = rng.random_range(1usize..=3);
            let level = dbscan(&items, eps, min_pts, 2.0);
            let mut seen: Vec<&str> = level
                .clusters
                .iter()
                .flatten()
                .chain(level.noise.iter())
                .map(|i| i.id.as_str())
                .collect();
            seen.sort_unstable();
            let mut want: Vec<&str> = items.iter().map(|i| i.id.as_str()).collect();
            want.sort_unstable();
            assert_eq!(seen, want);
        }
    }

    #[test]
    fn finite_eps_yields_a_cluster_at_min_pts_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.random_range(2usize..=30);
            let items = random_items(&mut rng, n);
            let eps = select_eps(&items, 2.0).unwrap();
            if eps.is_finite() {
                let level = dbscan(&items, eps, 1, 2.0);
                assert!(!level.clusters.is_empty());
                assert!(level.clusters.iter().all(|c| c.len() >= 2));
            }
        }
    }

    fn flight_fields() -> Vec<FieldElement> {
        vec![
            field("leaving-from", 100.0, 100.0, 160.0, 120.0),
            field("going-to", 190.0, 100.0, 250.0, 120.0),
            field("departing-month", 100.0, 150.0, 160.0, 170.0),
            field("departing-day", 190.0, 150.0, 250.0, 170.0),
            field("returning-month", 100.0, 200.0, 160.0, 220.0),
            field("returning-day", 190.0, 200.0, 250.0, 220.0),
            field("adults", 100.0, 235.0, 160.0, 255.0),
            field("children", 170.0, 235.0, 230.0, 255.0),
            field("infants", 240.0, 235.0, 300.0, 255.0),
            field("flight-class", 345.0, 235.0, 405.0, 255.0),
        ]
    }

    #[test]
    fn hierarchy_of_flight_layout() {
        let trace = build_hierarchy("flight-search", &flight_fields(), 0.0, 1).unwrap();
        assert_eq!(trace.levels.len(), 3);

        let l0 = &trace.levels[0];
        assert_eq!(l0.epsilon, Proximity::finite(10.0 / 3.0));
        let l0_clusters: Vec<Vec<&str>> = l0
            .clusters
            .iter()
            .map(|c| c.iter().map(|i| i.id.as_str()).collect())
            .collect();
        assert_eq!(l0_clusters, [["adults", "children", "infants"]]);
        assert_eq!(l0.noise.len(), 7);

        let l1 = &trace.levels[1];
        assert_eq!(l1.epsilon, Proximity::finite(10.0));
        let l1_clusters: Vec<Vec<&str>> = l1
            .clusters
            .iter()
            .map(|c| c.iter().map(|i| i.id.as_str()).collect())
            .collect();
        assert_eq!(
            l1_clusters,
            [
                ["leaving-from", "going-to"],
                ["departing-month", "departing-day"],
                ["returning-month", "returning-day"],
            ]
        );
        let l1_noise: Vec<&str> = l1.noise.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(l1_noise, ["g0.0", "flight-class"]);

        let l2 = &trace.levels[2];
        assert_eq!(l2.epsilon, Proximity::finite(15.0));
        assert_eq!(l2.clusters.len(), 1);
        assert_eq!(l2.clusters[0].len(), 5);
        assert!(l2.noise.is_empty());

        let family = trace.result.leaf_family();
        fn set<'a>(ids: &[&'a str]) -> std::collections::BTreeSet<&'a str> {
            ids.iter().copied().collect()
        }
        assert!(family.contains(&set(&["adults", "children", "infants"])));
        assert!(family.contains(&set(&["leaving-from", "going-to"])));
        assert!(family.contains(&set(&["departing-month", "departing-day"])));
        assert!(family.contains(&set(&["returning-month", "returning-day"])));
        assert_eq!(family.len(), 5);
    }

    #[test]
    fn hierarchy_single_field() {
        let fields = vec![field("only", 10.0, 10.0, 70.0, 30.0)];
        let trace = build_hierarchy("solo", &fields, 2.0, 1).unwrap();
        assert!(trace.levels.is_empty());
        assert_eq!(trace.result.children, vec![QueryNode::field("only")]);
    }

    #[test]
    fn hierarchy_empty_input_is_an_error() {
        let err = build_hierarchy("none", &[], 2.0, 1).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)), "{err}");
    }

    #[test]
    fn hierarchy_mutually_unaligned_fields_hang_off_root() {
        let fields = vec![
            field("a", 0.0, 0.0, 10.0, 10.0),
            field("b", 20.0, 40.0, 35.0, 55.0),
            field("c", 200.0, 300.0, 215.0, 320.0),
        ];
        let trace = build_hierarchy("scatter", &fields, 0.0, 1).unwrap();
        assert_eq!(trace.levels.len(), 1);
        assert!(trace.levels[0].epsilon.is_unreachable());
        assert_eq!(
            trace.result.children,
            vec![
                QueryNode::field("a"),
                QueryNode::field("b"),
                QueryNode::field("c"),
            ]
        );
    }

    #[test]
    fn hierarchy_dodges_field_named_like_a_group() {
        // A field that is level-0 noise but carries a group-shaped name must
        // not collide with the first generated group id.
        let fields = vec![
            field("a", 0.0, 0.0, 60.0, 20.0),
            field("b", 70.0, 0.0, 130.0, 20.0),
            field("g0.0", 300.0, 300.0, 360.0, 320.0),
        ];
        let trace = build_hierarchy("tricky", &fields, 0.0, 1).unwrap();
        let l0 = &trace.levels[0];
        assert_eq!(l0.clusters.len(), 1);
        let renamed = &trace.levels[1].items;
        let ids: Vec<&str> = renamed.iter().map(|i| i.id.as_str()).collect();
        assert!(ids.contains(&"g0.0"), "{ids:?}");
        assert!(ids.contains(&"g0.0+"), "{ids:?}");
        let leaves: std::collections::BTreeSet<&str> = trace
            .result
            .children
            .iter()
            .flat_map(|c| c.leaf_ids())
            .collect();
        assert_eq!(leaves.len(), 3);
    }

    #[test]
    fn hierarchy_is_input_order_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for round in 0..60 {
            let n = rng.random_range(2usize..=25);
            let mut fields: Vec<FieldElement> = random_items(&mut rng, n)
                .into_iter()
                .map(|it| field(&it.id, it.bbox.x_min, it.bbox.y_min, it.bbox.x_max, it.bbox.y_max))
                .collect();
            let base = build_hierarchy("perm", &fields, 2.0, 1).unwrap();
            let base_doc = serde_json::to_string(&base.result.to_document()).unwrap();
            let base_trace = serde_json::to_string(&base.to_document()).unwrap();
            // Fisher-Yates shuffle of the field order.
            for i in (1..fields.len()).rev() {
                let j = rng.random_range(0usize..=i);
                fields.swap(i, j);
            }
            let shuffled = build_hierarchy("perm", &fields, 2.0, 1).unwrap();
            assert_eq!(
                serde_json::to_string(&shuffled.result.to_document()).unwrap(),
                base_doc,
                "round {round}"
            );
            assert_eq!(
                serde_json::to_string(&shuffled.to_document()).unwrap(),
                base_trace,
                "round {round}"
            );
        }
    }

    #[test]
    fn hierarchy_preserves_leaves_and_bounds_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..80 {
            let n = rng.random_range(1usize..=30);
            let fields: Vec<FieldElement> = random_items(&mut rng, n)
                .into_iter()
                .map(|it| field(&it.id, it.bbox.x_min, it.bbox.y_min, it.bbox.x_max, it.bbox.y_max))
                .collect();
            let trace = build_hierarchy("leafcheck", &fields, 2.0, 1).unwrap();
            let mut leaves: Vec<&str> = trace
                .result
                .children
                .iter()
                .flat_map(|c| c.leaf_ids())
                .collect();
            leaves.sort_unstable();
            let mut want: Vec<&str> = fields.iter().map(|f| f.id.as_str()).collect();
            want.sort_unstable();
            assert_eq!(leaves, want);
            assert!(trace.levels.len() <= n.max(1));
            for pair in trace.levels.windows(2) {
                assert!(pair[1].items.len() < pair[0].items.len());
            }
        }
    }

    #[test]
    fn trace_document_round_trips() {
        let trace = build_hierarchy("flight-search", &flight_fields(), 0.0, 1).unwrap();
        let doc = trace.to_document();
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let parsed: TraceDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.levels[0].proximity_matrix[0][0], Some(0.0));
    }
}
