//! Field-level diff between two model snapshots and its inverse patch.
//!
//! A project is viewed as named collections of artifacts keyed by id plus
//! one `project` artifact holding the scalar fields. Diffs are computed on
//! the JSON view of the model so every field is covered without per-type
//! code.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::model::{Project, VersionSnapshot};

/// Collection name of the scalar project fields.
pub const PROJECT_ARTIFACT: &str = "project";

/// Keyed collections and the JSON field that names each element.
const COLLECTIONS: &[(&str, KeyRule)] = &[
    ("stakeholders", KeyRule::Field("id")),
    ("needs", KeyRule::Field("id")),
    ("requirements", KeyRule::Field("id")),
    ("business_rules", KeyRule::Field("id")),
    ("scenarios", KeyRule::Field("id")),
    ("catalogs", KeyRule::Field("arrangement_id")),
    ("use_cases", KeyRule::Field("id")),
    ("checklists", KeyRule::Field("kind")),
    ("inspections", KeyRule::Field("session_label")),
    ("change_reports", KeyRule::Nested("change", "id")),
    ("versions", KeyRule::Field("label")),
];

#[derive(Clone, Copy)]
enum KeyRule {
    Field(&'static str),
    Nested(&'static str, &'static str),
}

impl KeyRule {
    fn base_key(self, value: &Value) -> String {
        let found = match self {
            KeyRule::Field(f) => value.get(f),
            KeyRule::Nested(outer, inner) => value.get(outer).and_then(|v| v.get(inner)),
        };
        match found {
            Some(Value::String(s)) => s.clone(),
            Some(other) => other.to_string(),
            None => String::new(),
        }
    }
}

/// A whole artifact that exists on one side only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArtifactChange {
    pub collection: String,
    pub id: String,
    pub value: Value,
}

/// One field of one artifact whose value differs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldChange {
    pub collection: String,
    pub id: String,
    pub field: String,
    pub before: Value,
    pub after: Value,
}

impl fmt::Display for FieldChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.id, self.field, show(&self.before), show(&self.after))
    }
}

fn show(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// New element order of a collection whose surviving elements moved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reorder {
    pub collection: String,
    pub order: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ChangeSet {
    pub added: Vec<ArtifactChange>,
    pub removed: Vec<ArtifactChange>,
    pub modified: Vec<FieldChange>,
    pub reordered: Vec<Reorder>,
}

impl ChangeSet {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty() && self.modified.is_empty() && self.reordered.is_empty()
    }

    /// One line per change, for terminal output.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.added {
            out.push_str(&format!("+ {} {}\n", a.collection, a.id));
        }
        for r in &self.removed {
            out.push_str(&format!("- {} {}\n", r.collection, r.id));
        }
        for m in &self.modified {
            out.push_str(&format!("~ {} {m}\n", m.collection));
        }
        for r in &self.reordered {
            out.push_str(&format!("> {} [{}]\n", r.collection, r.order.join(", ")));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatchError {
    #[error("{collection} {id}: artifact not found")]
    MissingArtifact { collection: String, id: String },
    #[error("{collection} {id}: artifact already exists")]
    ExistingArtifact { collection: String, id: String },
    #[error("{collection} {id}.{field}: current value does not match the change")]
    Conflict { collection: String, id: String, field: String },
    #[error("patched model is not well formed: {0}")]
    Malformed(String),
}

type Exploded = BTreeMap<String, Vec<(String, Value)>>;

/// Splits a project into keyed collections. Repeated keys get a `#n` suffix
/// so every element stays addressable.
fn explode(project: &Project) -> Exploded {
    let Value::Object(mut root) = serde_json::to_value(project).expect("model serializes") else {
        unreachable!("project serializes to an object");
    };
    let mut out = Exploded::new();
    for (name, rule) in COLLECTIONS {
        let Some(Value::Array(items)) = root.remove(*name) else {
            continue;
        };
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let keyed = items
            .into_iter()
            .map(|item| {
                let base = rule.base_key(&item);
                let n = seen.entry(base.clone()).or_insert(0);
                *n += 1;
                let key = if *n == 1 { base } else { format!("{base}#{n}") };
                (key, item)
            })
            .collect();
        out.insert((*name).to_string(), keyed);
    }
    out.insert(PROJECT_ARTIFACT.to_string(), vec![(PROJECT_ARTIFACT.to_string(), Value::Object(root))]);
    out
}

fn implode(mut exploded: Exploded) -> Result<Project, PatchError> {
    let mut root = match exploded.remove(PROJECT_ARTIFACT).and_then(|v| v.into_iter().next()) {
        Some((_, Value::Object(map))) => map,
        _ => Map::new(),
    };
    for (name, items) in exploded {
        root.insert(name, Value::Array(items.into_iter().map(|(_, v)| v).collect()));
    }
    serde_json::from_value(Value::Object(root)).map_err(|e| PatchError::Malformed(e.to_string()))
}

fn fields(value: &Value) -> BTreeMap<&str, &Value> {
    match value {
        Value::Object(map) => map.iter().map(|(k, v)| (k.as_str(), v)).collect(),
        _ => BTreeMap::new(),
    }
}

/// Minimal change set turning `a` into `b` at (artifact, field) granularity.
pub fn diff_versions(a: &VersionSnapshot, b: &VersionSnapshot) -> ChangeSet {
    diff_projects(&a.project, &b.project)
}

pub fn diff_projects(a: &Project, b: &Project) -> ChangeSet {
    let (old, new) = (explode(a), explode(b));
    let mut set = ChangeSet::default();
    let names: BTreeSet<&String> = old.keys().chain(new.keys()).collect();
    let empty = Vec::new();
    for name in names {
        let before = old.get(name).unwrap_or(&empty);
        let after = new.get(name).unwrap_or(&empty);
        let before_map: BTreeMap<&str, &Value> = before.iter().map(|(k, v)| (k.as_str(), v)).collect();
        let after_map: BTreeMap<&str, &Value> = after.iter().map(|(k, v)| (k.as_str(), v)).collect();

        for (key, value) in before {
            if !after_map.contains_key(key.as_str()) {
                set.removed.push(ArtifactChange {
                    collection: name.clone(),
                    id: key.clone(),
                    value: value.clone(),
                });
            }
        }
        for (key, value) in after {
            match before_map.get(key.as_str()) {
                None => set.added.push(ArtifactChange {
                    collection: name.clone(),
                    id: key.clone(),
                    value: value.clone(),
                }),
                Some(old_value) if *old_value != value => {
                    let (of, nf) = (fields(old_value), fields(value));
                    let keys: BTreeSet<&str> = of.keys().chain(nf.keys()).copied().collect();
                    for field in keys {
                        let (x, y) = (of.get(field), nf.get(field));
                        if x != y {
                            set.modified.push(FieldChange {
                                collection: name.clone(),
                                id: key.clone(),
                                field: field.to_string(),
                                before: x.map_or(Value::Null, |v| (*v).clone()),
                                after: y.map_or(Value::Null, |v| (*v).clone()),
                            });
                        }
                    }
                }
                Some(_) => {}
            }
        }

        let natural = natural_order(before, &after_map, after);
        let wanted: Vec<String> = after.iter().map(|(k, _)| k.clone()).collect();
        if natural != wanted {
            set.reordered.push(Reorder {
                collection: name.clone(),
                order: wanted,
            });
        }
    }
    set
}

/// Order produced by patching without reorder information: survivors in
/// old order, then additions in new order.
fn natural_order(before: &[(String, Value)], after_map: &BTreeMap<&str, &Value>, after: &[(String, Value)]) -> Vec<String> {
    let old_keys: BTreeSet<&str> = before.iter().map(|(k, _)| k.as_str()).collect();
    before
        .iter()
        .filter(|(k, _)| after_map.contains_key(k.as_str()))
        .map(|(k, _)| k.clone())
        .chain(after.iter().filter(|(k, _)| !old_keys.contains(k.as_str())).map(|(k, _)| k.clone()))
        .collect()
}

/// Applies `changes` to `base`; `apply_changes(&diff(a, b), a) == b`.
pub fn apply_changes(changes: &ChangeSet, base: &Project) -> Result<Project, PatchError> {
    let mut exploded = explode(base);
    for r in &changes.removed {
        let items = exploded.entry(r.collection.clone()).or_default();
        let pos = items.iter().position(|(k, _)| *k == r.id).ok_or_else(|| PatchError::MissingArtifact {
            collection: r.collection.clone(),
            id: r.id.clone(),
        })?;
        items.remove(pos);
    }
    for m in &changes.modified {
        let items = exploded.entry(m.collection.clone()).or_default();
        let (_, value) = items.iter_mut().find(|(k, _)| *k == m.id).ok_or_else(|| PatchError::MissingArtifact {
            collection: m.collection.clone(),
            id: m.id.clone(),
        })?;
        let conflict = || PatchError::Conflict {
            collection: m.collection.clone(),
            id: m.id.clone(),
            field: m.field.clone(),
        };
        let Value::Object(map) = value else {
            return Err(conflict());
        };
        let current = map.get(&m.field).cloned().unwrap_or(Value::Null);
        if current != m.before {
            return Err(conflict());
        }
        map.insert(m.field.clone(), m.after.clone());
    }
    for a in &changes.added {
        let items = exploded.entry(a.collection.clone()).or_default();
        if items.iter().any(|(k, _)| *k == a.id) {
            return Err(PatchError::ExistingArtifact {
                collection: a.collection.clone(),
                id: a.id.clone(),
            });
        }
        items.push((a.id.clone(), a.value.clone()));
    }
    for r in &changes.reordered {
        let items = exploded.entry(r.collection.clone()).or_default();
        let mut by_key: BTreeMap<String, Value> = std::mem::take(items).into_iter().collect();
        for key in &r.order {
            let value = by_key.remove(key).ok_or_else(|| PatchError::MissingArtifact {
                collection: r.collection.clone(),
                id: key.clone(),
            })?;
            items.push((key.clone(), value));
        }
        items.extend(by_key);
    }
    implode(exploded)
}
