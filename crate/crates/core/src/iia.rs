//! Registry of the nine IoT interaction arrangements and catalog checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::docformat::grammar::parse_text;
use crate::model::{ArtifactKind, Identifier, Project, ARRANGEMENT_COUNT};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementKind {
    pub id: Identifier,
    pub name: String,
    pub aliases: Vec<String>,
    pub description: String,
    pub representation_ref: Option<String>,
    /// False for shipped stubs whose catalog content is not known.
    pub normative: bool,
}

impl ArrangementKind {
    pub fn answers_to(&self, name: &str) -> bool {
        let name = name.trim();
        self.name.eq_ignore_ascii_case(name) || self.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogPrompt {
    pub text: String,
    pub hint: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogComponent {
    pub name: String,
    pub prompts: Vec<CatalogPrompt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CatalogSchema {
    pub components: Vec<CatalogComponent>,
}

impl CatalogSchema {
    /// Every prompt in schema order.
    pub fn prompts(&self) -> impl Iterator<Item = &str> {
        self.components
            .iter()
            .flat_map(|c| c.prompts.iter().map(|p| p.text.as_str()))
    }

    fn outline(&self) -> Vec<(&str, &str)> {
        self.components
            .iter()
            .flat_map(|c| c.prompts.iter().map(move |p| (c.name.as_str(), p.text.as_str())))
            .collect()
    }
}

/// Arrangement IIA-01 exactly as published; data files may not change it.
pub fn builtin_data_display() -> (ArrangementKind, CatalogSchema) {
    let prompt = |text: &str, hint: &str| CatalogPrompt {
        text: text.to_string(),
        hint: Some(hint.to_string()),
    };
    (
        ArrangementKind {
            id: Identifier::arrangement(1),
            name: "Display of IoT data".into(),
            aliases: vec!["Data exhibition".into()],
            description: String::new(),
            representation_ref: None,
            normative: true,
        },
        CatalogSchema {
            components: vec![CatalogComponent {
                name: "Data Producers".into(),
                prompts: vec![
                    prompt("Who collects data?", "e.g., sensors, tag readers"),
                    prompt("What type of data is collected?", "e.g., temperature, humidity, among others"),
                    prompt("Source of data", "e.g., rooms, cup of coffee, refrigerator, ground, among others"),
                ],
            }],
        },
    )
}

fn stub(number: u32) -> (ArrangementKind, CatalogSchema) {
    (
        ArrangementKind {
            id: Identifier::arrangement(number),
            name: format!("IIA-{number:02} (catalog not available)"),
            aliases: Vec::new(),
            description: String::new(),
            representation_ref: None,
            normative: false,
        },
        CatalogSchema::default(),
    )
}

/// Immutable after load; always holds exactly nine arrangements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementRegistry {
    entries: BTreeMap<Identifier, (ArrangementKind, CatalogSchema)>,
}

impl Default for ArrangementRegistry {
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        let (kind, schema) = builtin_data_display();
        entries.insert(kind.id, (kind, schema));
        for n in 2..=ARRANGEMENT_COUNT {
            let (kind, schema) = stub(n);
            entries.insert(kind.id, (kind, schema));
        }
        ArrangementRegistry { entries }
    }
}

impl ArrangementRegistry {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn kind(&self, id: &Identifier) -> Option<&ArrangementKind> {
        self.entries.get(id).map(|(k, _)| k)
    }

    pub fn schema(&self, id: &Identifier) -> Option<&CatalogSchema> {
        self.entries.get(id).map(|(_, s)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArrangementKind, &CatalogSchema)> {
        self.entries.values().map(|(k, s)| (k, s))
    }

    pub fn find_by_name(&self, name: &str) -> Option<&ArrangementKind> {
        self.iter().map(|(k, _)| k).find(|k| k.answers_to(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegistryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{text}` is not an arrangement id IIA-01..IIA-09")]
    BadId { line: usize, text: String },
    #[error("line {line}: {id} is defined more than once")]
    DuplicateId { line: usize, id: Identifier },
    #[error("immutable-schema({0})")]
    ImmutableSchema(Identifier),
}

/// Loads arrangement data over the built-in baseline. Sections are named by
/// arrangement id; each may set `Name`, `Aliases`, `Description`,
/// `Representation` and a `| Component | Prompt | Hint |` table.
pub fn load_arrangement_registry(text: &str) -> Result<ArrangementRegistry, RegistryError> {
    let (doc, diags) = parse_text(text, "arrangements");
    if let Some(d) = diags.iter().find(|d| d.is_error()) {
        return Err(RegistryError::Syntax {
            line: d.line,
            message: d.message.clone(),
        });
    }
    let mut registry = ArrangementRegistry::default();
    let mut defined = BTreeSet::new();
    for section in &doc.sections {
        let id = match section.name.parse::<Identifier>() {
            Ok(id) if id.kind == ArtifactKind::Arrangement => id,
            _ => {
                return Err(RegistryError::BadId {
                    line: section.line,
                    text: section.name.clone(),
                })
            }
        };
        if !defined.insert(id) {
            return Err(RegistryError::DuplicateId { line: section.line, id });
        }

        let mut components: Vec<CatalogComponent> = Vec::new();
        for table in section.tables() {
            let (Some(ci), Some(pi)) = (table.column("Component"), table.column("Prompt")) else {
                return Err(RegistryError::Syntax {
                    line: table.line,
                    message: "catalog table needs `Component` and `Prompt` columns".into(),
                });
            };
            let hi = table.column("Hint");
            for row in &table.rows {
                let name = row.cells[ci].trim();
                let prompt = CatalogPrompt {
                    text: row.cells[pi].trim().to_string(),
                    hint: hi.map(|h| row.cells[h].trim().to_string()).filter(|h| !h.is_empty()),
                };
                if prompt.text.is_empty() {
                    return Err(RegistryError::Syntax {
                        line: row.line,
                        message: "empty prompt".into(),
                    });
                }
                // A blank component cell continues the previous component.
                match components.last_mut() {
                    Some(last) if name.is_empty() || last.name == name => last.prompts.push(prompt),
                    _ => components.push(CatalogComponent {
                        name: name.to_string(),
                        prompts: vec![prompt],
                    }),
                }
            }
        }
        let schema = CatalogSchema { components };

        let (kind, current) = registry.entries.get_mut(&id).expect("registry holds all nine ids");
        let builtin = kind.normative;
        if builtin {
            let changes_schema = !schema.components.is_empty() && schema.outline() != current.outline();
            let renamed = section.get("Name").is_some_and(|f| !kind.answers_to(&f.value));
            if changes_schema || renamed {
                return Err(RegistryError::ImmutableSchema(id));
            }
        } else {
            if let Some(f) = section.get("Name") {
                kind.name = f.value.clone();
            }
            if let Some(f) = section.get("Aliases") {
                kind.aliases = f.value.split(',').map(|a| a.trim().to_string()).filter(|a| !a.is_empty()).collect();
            }
            *current = schema;
        }
        if let Some(f) = section.get("Description") {
            kind.description = f.value.clone();
        }
        if let Some(f) = section.get("Representation") {
            kind.representation_ref = Some(f.value.clone()).filter(|v| !v.is_empty());
        }
    }
    Ok(registry)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CatalogIssue {
    /// Catalog instance (1-based position) leaves a schema prompt blank.
    UnansweredPrompt {
        catalog: usize,
        arrangement: Identifier,
        prompt: String,
    },
    /// Scenario chose an arrangement but no catalog instance covers it.
    MissingCatalog { scenario: Identifier, arrangement: Identifier },
}

impl fmt::Display for CatalogIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogIssue::UnansweredPrompt {
                catalog,
                arrangement,
                prompt,
            } => write!(f, "unanswered-prompt({arrangement} #{catalog}, \"{prompt}\")"),
            CatalogIssue::MissingCatalog { scenario, arrangement } => {
                write!(f, "missing-catalog({scenario}, {arrangement})")
            }
        }
    }
}

/// Unanswered prompts per instance and uncovered (scenario, arrangement)
/// pairs, sorted.
pub fn check_catalog_completeness(project: &Project, registry: &ArrangementRegistry) -> Vec<CatalogIssue> {
    let mut issues = Vec::new();
    for (index, catalog) in project.catalogs.iter().enumerate() {
        let Some(schema) = registry.schema(&catalog.arrangement_id) else {
            continue;
        };
        for prompt in schema.prompts() {
            let answered = catalog.answers.get(prompt).is_some_and(|a| !a.trim().is_empty());
            if !answered {
                issues.push(CatalogIssue::UnansweredPrompt {
                    catalog: index + 1,
                    arrangement: catalog.arrangement_id,
                    prompt: prompt.to_string(),
                });
            }
        }
    }
    for scenario in &project.scenarios {
        for arrangement in &scenario.arrangement_ids {
            let covered = project
                .catalogs
                .iter()
                .any(|c| c.arrangement_id == *arrangement && c.scenario_ids.contains(&scenario.id));
            if !covered {
                issues.push(CatalogIssue::MissingCatalog {
                    scenario: scenario.id,
                    arrangement: *arrangement,
                });
            }
        }
    }
    issues.sort();
    issues.dedup();
    issues
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IiaError {
    #[error("unknown scenario {0}")]
    UnknownScenario(Identifier),
    #[error("{0} is not an arrangement IIA-01..IIA-09")]
    UnknownArrangement(Identifier),
}

pub fn arrangements_for_scenario(project: &Project, scenario: &Identifier) -> Result<BTreeSet<Identifier>, IiaError> {
    project
        .scenario(scenario)
        .map(|s| s.arrangement_ids.iter().copied().collect())
        .ok_or(IiaError::UnknownScenario(*scenario))
}

pub fn scenarios_for_arrangement(project: &Project, arrangement: &Identifier) -> Result<BTreeSet<Identifier>, IiaError> {
    if arrangement.kind != ArtifactKind::Arrangement || !project.resolves(arrangement) {
        return Err(IiaError::UnknownArrangement(*arrangement));
    }
    Ok(project
        .scenarios
        .iter()
        .filter(|s| s.arrangement_ids.contains(arrangement))
        .map(|s| s.id)
        .collect())
}
