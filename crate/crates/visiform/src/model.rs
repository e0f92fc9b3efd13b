//! The query model: fields, decorations, and the hierarchical query tree.
//!
//! A tree is always held in canonical form (no singleton groups, children
//! in reading order), so structural comparison only has to look at leaf-set
//! families.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;

/// The control rendered for a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlKind {
    Text,
    Select,
    Radio,
    Checkbox,
    Date,
    Other,
}

/// A visible input plus its label, the unit the clustering operates on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldElement {
    pub id: String,
    pub label: String,
    pub control: ControlKind,
    pub bbox: Rect,
}

/// Page content that is not part of the query: images, free text, links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecorationKind {
    Image,
    Hyperlink,
    Text,
    Other,
}

/// A non-query element. Kept beside the tree so nothing from the page is
/// silently dropped, but never made part of the hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecorationElement {
    pub id: String,
    pub kind: DecorationKind,
    pub label: String,
    pub bbox: Rect,
}

/// One node below the root: a single field or a group of nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryNode {
    Field(String),
    Group {
        /// Present on hand-labeled trees; extraction produces unlabeled
        /// groups. Never consulted by comparison.
        label: Option<String>,
        children: Vec<QueryNode>,
    },
}

impl QueryNode {
    pub fn field(id: impl Into<String>) -> Self {
        QueryNode::Field(id.into())
    }

    pub fn group(children: Vec<QueryNode>) -> Self {
        QueryNode::Group {
            label: None,
            children,
        }
    }

    pub fn labeled_group(label: impl Into<String>, children: Vec<QueryNode>) -> Self {
        QueryNode::Group {
            label: Some(label.into()),
            children,
        }
    }

    /// Ids of every field in this subtree, in traversal order.
    pub fn leaf_ids(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            QueryNode::Field(id) => out.push(id),
            QueryNode::Group { children, .. } => {
                for child in children {
                    child.collect_leaves(out);
                }
            }
        }
    }
}

/// A whole interface: the root collection, the field table keyed by id, and
/// the page elements that did not enter the query.
///
/// The collection is the `children` list itself rather than a node variant,
/// so a nested collection is unrepresentable. Values are canonical by
/// construction: both loading and extraction go through [`QueryTree::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct QueryTree {
    pub interface_id: String,
    pub children: Vec<QueryNode>,
    pub fields: BTreeMap<String, FieldElement>,
    pub not_rendered: Vec<DecorationElement>,
}

impl QueryTree {
    /// Builds a canonical tree. Validates that the leaves of `children` are
    /// exactly the keys of `fields`, each appearing once, then normalizes.
    pub fn new(
        interface_id: impl Into<String>,
        children: Vec<QueryNode>,
        fields: BTreeMap<String, FieldElement>,
        not_rendered: Vec<DecorationElement>,
    ) -> Result<Self> {
        let interface_id = interface_id.into();
        for child in &children {
            Self::check_no_empty_group(&interface_id, child)?;
        }
        let mut seen = BTreeSet::new();
        for child in &children {
            for id in child.leaf_ids() {
                if !fields.contains_key(id) {
                    return Err(Error::Validation(format!(
                        "{interface_id}: tree references unknown field {id:?}"
                    )));
                }
                if !seen.insert(id.to_owned()) {
                    return Err(Error::Validation(format!(
                        "{interface_id}: field {id:?} appears twice in the tree"
                    )));
                }
            }
        }
        for id in fields.keys() {
            if !seen.contains(id) {
                return Err(Error::Validation(format!(
                    "{interface_id}: field {id:?} is missing from the tree"
                )));
            }
        }
        let mut tree = QueryTree {
            interface_id,
            children,
            fields,
            not_rendered,
        };
        tree.canonicalize();
        Ok(tree)
    }

    /// Attaches the page's non-query elements. They sit beside the tree,
    /// so no revalidation is needed.
    pub fn with_not_rendered(mut self, not_rendered: Vec<DecorationElement>) -> Self {
        self.not_rendered = not_rendered;
        self
    }

    fn check_no_empty_group(interface_id: &str, node: &QueryNode) -> Result<()> {
        if let QueryNode::Group { label, children } = node {
            if children.is_empty() {
                return Err(Error::Validation(format!(
                    "{interface_id}: group {label:?} has no children"
                )));
            }
            for child in children {
                Self::check_no_empty_group(interface_id, child)?;
            }
        }
        Ok(())
    }

    /// All internal leaf-id sets plus the full root set. Two trees describe
    /// the same query exactly when these families coincide.
    pub fn leaf_family(&self) -> BTreeSet<BTreeSet<&str>> {
        let mut family = BTreeSet::new();
        let mut root = BTreeSet::new();
        for child in &self.children {
            Self::collect_family(child, &mut family);
            root.extend(child.leaf_ids());
        }
        family.insert(root);
        family
    }

    fn collect_family<'a>(node: &'a QueryNode, family: &mut BTreeSet<BTreeSet<&'a str>>) {
        if let QueryNode::Group { children, .. } = node {
            family.insert(node.leaf_ids().into_iter().collect());
            for child in children {
                Self::collect_family(child, family);
            }
        }
    }

    /// Normalizes in place: collapse groups with a single child, absorb a
    /// lone group sitting directly under the root, and sort every child
    /// list by the reading-order position of its first leaf.
    fn canonicalize(&mut self) {
        for child in &mut self.children {
            Self::canonicalize_node(child);
        }
        // A root with exactly one group child is the same query as that
        // group's children spread under the root.
        if self.children.len() == 1 {
            if let QueryNode::Group { .. } = self.children[0] {
                let QueryNode::Group { children, .. } = self.children.remove(0) else {
                    unreachable!()
                };
                self.children = children;
            }
        }
        let fields = &self.fields;
        Self::sort_children(&mut self.children, fields);
        for child in &mut self.children {
            Self::sort_node(child, fields);
        }
    }

    fn canonicalize_node(node: &mut QueryNode) {
        if let QueryNode::Group { children, .. } = node {
            for child in children.iter_mut() {
                Self::canonicalize_node(child);
            }
            if children.len() == 1 {
                *node = children.remove(0);
            }
        }
    }

    fn sort_node(node: &mut QueryNode, fields: &BTreeMap<String, FieldElement>) {
        if let QueryNode::Group { children, .. } = node {
            Self::sort_children(children, fields);
            for child in children {
                Self::sort_node(child, fields);
            }
        }
    }

    fn sort_children(children: &mut [QueryNode], fields: &BTreeMap<String, FieldElement>) {
        children.sort_by(|a, b| {
            Self::reading_key(a, fields)
                .partial_cmp(&Self::reading_key(b, fields))
                .expect("field coordinates are finite")
        });
    }

    /// Topmost-leftmost leaf of the subtree: the position a reader reaches
    /// first. Ties broken by field id to keep ordering total.
    fn reading_key<'a>(
        node: &'a QueryNode,
        fields: &BTreeMap<String, FieldElement>,
    ) -> (f64, f64, &'a str) {
        node.leaf_ids()
            .into_iter()
            .map(|id| {
                let bbox = &fields[id].bbox;
                (bbox.y_min, bbox.x_min, id)
            })
            .min_by(|a, b| a.partial_cmp(b).expect("field coordinates are finite"))
            .expect("groups are never empty")
    }

    /// Structural equality: same grouping of the same fields, labels and
    /// child order ignored. Errors when the two trees do not even cover the
    /// same fields, since grouping comparison is meaningless then.
    pub fn structure_eq(&self, other: &QueryTree) -> Result<bool> {
        let mine: BTreeSet<&str> = self.fields.keys().map(String::as_str).collect();
        let theirs: BTreeSet<&str> = other.fields.keys().map(String::as_str).collect();
        if mine != theirs {
            let only_mine: Vec<&&str> = mine.difference(&theirs).collect();
            let only_theirs: Vec<&&str> = theirs.difference(&mine).collect();
            return Err(Error::NotComparable(format!(
                "field sets differ (only in {}: {only_mine:?}, only in {}: {only_theirs:?})",
                self.interface_id, other.interface_id
            )));
        }
        Ok(self.leaf_family() == other.leaf_family())
    }

    pub fn to_document(&self) -> TreeDocument {
        TreeDocument {
            interface_id: self.interface_id.clone(),
            root: NodeDocument::Collection {
                children: self.children.iter().map(node_to_document).collect(),
            },
        }
    }

    /// Rebuilds a tree from its serialized form. The field table supplies
    /// the geometry that canonical ordering needs, so it must come from the
    /// layout the document belongs to.
    pub fn from_document(
        doc: &TreeDocument,
        fields: &BTreeMap<String, FieldElement>,
    ) -> Result<Self> {
        let children = match &doc.root {
            NodeDocument::Collection { children } => {
                if children.is_empty() {
                    return Err(Error::Validation(format!(
                        "{}: root collection has no children",
                        doc.interface_id
                    )));
                }
                children
                    .iter()
                    .map(|c| node_from_document(&doc.interface_id, c))
                    .collect::<Result<Vec<_>>>()?
            }
            // A single-field interface serializes its one leaf as the root.
            NodeDocument::Field { id } => vec![QueryNode::field(id.clone())],
            NodeDocument::Group { .. } => {
                return Err(Error::Validation(format!(
                    "{}: root must be a collection, found a group",
                    doc.interface_id
                )));
            }
        };
        QueryTree::new(doc.interface_id.clone(), children, fields.clone(), Vec::new())
    }
}

fn node_to_document(node: &QueryNode) -> NodeDocument {
    match node {
        QueryNode::Field(id) => NodeDocument::Field { id: id.clone() },
        QueryNode::Group { label, children } => NodeDocument::Group {
            label: label.clone(),
            children: children.iter().map(node_to_document).collect(),
        },
    }
}

fn node_from_document(interface_id: &str, doc: &NodeDocument) -> Result<QueryNode> {
    match doc {
        NodeDocument::Field { id } => Ok(QueryNode::field(id.clone())),
        NodeDocument::Group { label, children } => {
            if children.is_empty() {
                return Err(Error::Validation(format!(
                    "{interface_id}: group {label:?} has no children"
                )));
            }
            Ok(QueryNode::Group {
                label: label.clone(),
                children: children
                    .iter()
                    .map(|c| node_from_document(interface_id, c))
                    .collect::<Result<Vec<_>>>()?,
            })
        }
        NodeDocument::Collection { .. } => Err(Error::Validation(format!(
            "{interface_id}: collection nested below the root"
        ))),
    }
}

/// Serialized tree: what `extract --out` writes and gold files contain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDocument {
    pub interface_id: String,
    pub root: NodeDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NodeDocument {
    Collection {
        children: Vec<NodeDocument>,
    },
    Group {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        children: Vec<NodeDocument>,
    },
    Field {
        id: String,
    },
}
