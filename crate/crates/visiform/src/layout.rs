//! Layout documents, corpus manifests, and the file IO around them.
//!
//! A layout document is the system boundary: it declares an interface's
//! page size and every visible element with its bounding box. How those
//! boxes were obtained (browser capture, annotation tool, generator) is
//! outside this crate's concern.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Rect;
use crate::model::{
    ControlKind, DecorationElement, DecorationKind, FieldElement, TreeDocument,
};

/// A validated interface description: page plus elements, split by kind.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceLayout {
    pub interface_id: String,
    pub page_width: f64,
    pub page_height: f64,
    pub fields: Vec<FieldElement>,
    pub decorations: Vec<DecorationElement>,
}

impl InterfaceLayout {
    pub fn field_table(&self) -> std::collections::BTreeMap<String, FieldElement> {
        self.fields
            .iter()
            .map(|f| (f.id.clone(), f.clone()))
            .collect()
    }

    pub fn to_document(&self) -> LayoutDocument {
        let fields = self.fields.iter().map(|f| ElementDocument {
            id: f.id.clone(),
            kind: "field".to_owned(),
            label: f.label.clone(),
            control: control_name(f.control).to_owned(),
            bbox: f.bbox,
        });
        let decorations = self.decorations.iter().map(|d| ElementDocument {
            id: d.id.clone(),
            kind: "decoration".to_owned(),
            label: d.label.clone(),
            control: decoration_name(d.kind).to_owned(),
            bbox: d.bbox,
        });
        LayoutDocument {
            interface_id: self.interface_id.clone(),
            page: PageDocument {
                width: self.page_width,
                height: self.page_height,
            },
            elements: fields.chain(decorations).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        to_pretty_json(&self.to_document())
    }

    fn from_document(doc: LayoutDocument, origin: &str) -> Result<Self> {
        let iid = &doc.interface_id;
        if iid.is_empty() {
            return Err(Error::Validation(format!("{origin}: empty interface_id")));
        }
        if !(doc.page.width > 0.0 && doc.page.width.is_finite())
            || !(doc.page.height > 0.0 && doc.page.height.is_finite())
        {
            return Err(Error::Validation(format!(
                "{iid}: page size {}x{} is not positive",
                doc.page.width, doc.page.height
            )));
        }
        let mut seen = BTreeSet::new();
        let mut fields = Vec::new();
        let mut decorations = Vec::new();
        for element in doc.elements {
            if element.id.is_empty() {
                return Err(Error::Validation(format!("{iid}: element with empty id")));
            }
            if !seen.insert(element.id.clone()) {
                return Err(Error::Validation(format!(
                    "{iid}: duplicate element id {:?}",
                    element.id
                )));
            }
            if let Err(detail) = element.bbox.validate() {
                return Err(Error::Validation(format!(
                    "{iid}: element {:?}: {detail}",
                    element.id
                )));
            }
            let b = element.bbox;
            if b.x_min < 0.0 || b.y_min < 0.0 || b.x_max > doc.page.width || b.y_max > doc.page.height
            {
                return Err(Error::Validation(format!(
                    "{iid}: element {:?} bbox {:?} outside the {}x{} page",
                    element.id,
                    <[f64; 4]>::from(b),
                    doc.page.width,
                    doc.page.height
                )));
            }
            match element.kind.as_str() {
                "field" => fields.push(FieldElement {
                    control: parse_control(iid, &element.id, &element.control)?,
                    id: element.id,
                    label: element.label,
                    bbox: element.bbox,
                }),
                "decoration" => decorations.push(DecorationElement {
                    kind: parse_decoration(iid, &element.id, &element.control)?,
                    id: element.id,
                    label: element.label,
                    bbox: element.bbox,
                }),
                other => {
                    return Err(Error::Validation(format!(
                        "{iid}: element {:?} has unknown kind {other:?}",
                        element.id
                    )));
                }
            }
        }
        if fields.is_empty() {
            return Err(Error::Validation(format!(
                "{iid}: layout declares no field elements"
            )));
        }
        Ok(InterfaceLayout {
            interface_id: doc.interface_id,
            page_width: doc.page.width,
            page_height: doc.page.height,
            fields,
            decorations,
        })
    }
}

/// Raw serialized shape of a layout file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayoutDocument {
    pub interface_id: String,
    pub page: PageDocument,
    pub elements: Vec<ElementDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PageDocument {
    pub width: f64,
    pub height: f64,
}

/// One element row. For fields `control` names the widget; for decorations
/// it names the decoration kind (image, hyperlink, text, other).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementDocument {
    pub id: String,
    pub kind: String,
    pub label: String,
    pub control: String,
    pub bbox: Rect,
}

fn control_name(kind: ControlKind) -> &'static str {
    match kind {
        ControlKind::Text => "text",
        ControlKind::Select => "select",
        ControlKind::Radio => "radio",
        ControlKind::Checkbox => "checkbox",
        ControlKind::Date => "date",
        ControlKind::Other => "other",
    }
}

fn parse_control(iid: &str, id: &str, name: &str) -> Result<ControlKind> {
    Ok(match name {
        "text" => ControlKind::Text,
        "select" => ControlKind::Select,
        "radio" => ControlKind::Radio,
        "checkbox" => ControlKind::Checkbox,
        "date" => ControlKind::Date,
        "other" => ControlKind::Other,
        _ => {
            return Err(Error::Validation(format!(
                "{iid}: field {id:?} has unknown control {name:?}"
            )));
        }
    })
}

fn decoration_name(kind: DecorationKind) -> &'static str {
    match kind {
        DecorationKind::Image => "image",
        DecorationKind::Hyperlink => "hyperlink",
        DecorationKind::Text => "text",
        DecorationKind::Other => "other",
    }
}

fn parse_decoration(iid: &str, id: &str, name: &str) -> Result<DecorationKind> {
    Ok(match name {
        "image" => DecorationKind::Image,
        "hyperlink" => DecorationKind::Hyperlink,
        "text" => DecorationKind::Text,
        "other" => DecorationKind::Other,
        _ => {
            return Err(Error::Validation(format!(
                "{iid}: decoration {id:?} has unknown kind {name:?}"
            )));
        }
    })
}

/// One evaluation corpus: a named collection of layout/gold file pairs.
/// Paths are resolved against the manifest's own directory at load time.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub collection: String,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub layout: PathBuf,
    pub gold: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestDocument {
    pub collection: String,
    pub entries: Vec<ManifestEntryDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntryDocument {
    pub layout: String,
    pub gold: String,
}

pub fn parse_manifest(text: &str, origin: &str, base: &Path) -> Result<CorpusManifest> {
    let doc: ManifestDocument = parse_json(text, origin)?;
    if doc.collection.is_empty() {
        return Err(Error::Validation(format!("{origin}: empty collection name")));
    }
    // Collection names land verbatim in one report column; keep them free
    // of the report's own separators.
    if doc.collection.contains([',', '\n', '\r']) {
        return Err(Error::Validation(format!(
            "{origin}: collection name {:?} contains a separator character",
            doc.collection
        )));
    }
    Ok(CorpusManifest {
        collection: doc.collection,
        entries: doc
            .entries
            .into_iter()
            .map(|e| ManifestEntry {
                layout: base.join(e.layout),
                gold: base.join(e.gold),
            })
            .collect(),
    })
}

pub fn load_manifest(path: &Path) -> Result<CorpusManifest> {
    let text = read_file(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_manifest(&text, &path.display().to_string(), base)
}

pub fn parse_layout(text: &str, origin: &str) -> Result<InterfaceLayout> {
    let doc: LayoutDocument = parse_json(text, origin)?;
    InterfaceLayout::from_document(doc, origin)
}

pub fn load_layout(path: &Path) -> Result<InterfaceLayout> {
    let text = read_file(path)?;
    parse_layout(&text, &path.display().to_string())
}

pub fn parse_tree_document(text: &str, origin: &str) -> Result<TreeDocument> {
    parse_json(text, origin)
}

pub fn load_tree_document(path: &Path) -> Result<TreeDocument> {
    let text = read_file(path)?;
    parse_tree_document(&text, &path.display().to_string())
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path.display().to_string(), e))
}

fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_owned(),
        detail: e.to_string(),
    })
}

/// Canonical text form for every document this crate writes: two-space
/// pretty JSON with a trailing newline.
pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize infallibly");
    s.push('\n');
    s
}
