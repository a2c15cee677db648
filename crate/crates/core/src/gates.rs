//! The three construction stages, template completeness and stage gates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::docformat::grammar::{parse_text, Document, Section, Table};
use crate::docformat::{template_documents, SourceDocument};
use crate::literal::Literal;
use crate::model::{Methodology, Milestone, Project, TemplateKind};

/// Declared (activities, tasks) per stage; stage data must match exactly.
pub const STAGE_COUNTS: [(u32, u32); 3] = [(12, 27), (12, 39), (10, 24)];

const STAGE_TEMPLATES: [&[TemplateKind]; 3] = [
    &[
        TemplateKind::IoTCanvas,
        TemplateKind::FeasibilityAnalysis,
        TemplateKind::RequirementsChecklist,
    ],
    &[
        TemplateKind::IoTProjectDetail,
        TemplateKind::IoTSolutionProposal,
        TemplateKind::ChangeAnalysisReport,
        TemplateKind::VerificationChecklist,
        TemplateKind::InspectionRecord,
    ],
    &[
        TemplateKind::IoTUseCaseDescription,
        TemplateKind::DiagramAndUseCasesChecklist,
    ],
];

const STAGE_MILESTONES: [Milestone; 3] = [
    Milestone::FeasibilityAnalysis,
    Milestone::LowLevelPrototype,
    Milestone::HighLevelPrototype,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Activity {
    pub name: String,
    pub optional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageDefinition {
    pub number: u8,
    pub purpose: String,
    pub required_templates: Vec<TemplateKind>,
    /// Required templates that agile projects may omit.
    pub agile_optional: Vec<TemplateKind>,
    pub milestone: Milestone,
    /// Informational; only the declared counts are normative.
    pub activities: Vec<Activity>,
    pub activity_count: u32,
    pub task_count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StageDataError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("stage {stage}: declares {found:?} (activities, tasks) but the construction process defines {expected:?}")]
    CountMismatch { stage: u8, found: (u32, u32), expected: (u32, u32) },
    #[error("stage {stage}: template set or milestone differs from the construction process")]
    DefinitionMismatch { stage: u8 },
    #[error("stage data must define stages 1, 2 and 3 exactly once")]
    MissingStage,
}

fn malformed(line: usize, message: impl Into<String>) -> StageDataError {
    StageDataError::Malformed {
        line,
        message: message.into(),
    }
}

fn kinds(text: &str, line: usize) -> Result<Vec<TemplateKind>, StageDataError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<TemplateKind>().map_err(|e| malformed(line, e.to_string())))
        .collect()
}

/// Loads and checks `stages.retiot`; the result is ordered by stage.
pub fn load_stage_definitions(text: &str) -> Result<Vec<StageDefinition>, StageDataError> {
    let (doc, diags) = parse_text(text, "stages");
    if let Some(d) = diags.iter().find(|d| d.is_error()) {
        return Err(malformed(d.line, d.message.clone()));
    }
    let mut stages: BTreeMap<u8, StageDefinition> = BTreeMap::new();
    for section in &doc.sections {
        let number: u8 = section
            .name
            .trim()
            .strip_prefix("Stage")
            .and_then(|n| n.trim().parse().ok())
            .filter(|n| (1..=3).contains(n))
            .ok_or_else(|| malformed(section.line, format!("`{}` is not Stage 1, 2 or 3", section.name)))?;
        let field = |key: &str| section.get(key).ok_or_else(|| malformed(section.line, format!("missing `{key}`")));
        let count = |key: &str| -> Result<u32, StageDataError> {
            let f = field(key)?;
            f.value.trim().parse().map_err(|_| malformed(f.line, format!("`{key}` must be a number")))
        };
        let templates = field("Templates")?;
        let milestone = field("Milestone")?;
        let mut activities = Vec::new();
        for table in section.tables() {
            let Some(name) = table.column("Activity") else {
                return Err(malformed(table.line, "activity table needs an `Activity` column"));
            };
            let optional = table.column("Optional");
            for row in &table.rows {
                activities.push(Activity {
                    name: row.cells[name].clone(),
                    optional: optional.is_some_and(|o| row.cells[o].eq_ignore_ascii_case("yes")),
                });
            }
        }
        let definition = StageDefinition {
            number,
            purpose: section.get("Purpose").map(|f| f.value.clone()).unwrap_or_default(),
            required_templates: kinds(&templates.value, templates.line)?,
            agile_optional: match section.get("Agile optional") {
                Some(f) => kinds(&f.value, f.line)?,
                None => Vec::new(),
            },
            milestone: milestone.value.parse().map_err(|e: crate::literal::UnknownLiteral| malformed(milestone.line, e.to_string()))?,
            activities,
            activity_count: count("Activities")?,
            task_count: count("Tasks")?,
        };
        if stages.insert(number, definition).is_some() {
            return Err(malformed(section.line, format!("stage {number} defined twice")));
        }
    }
    if stages.len() != 3 {
        return Err(StageDataError::MissingStage);
    }
    for (number, stage) in &stages {
        let i = usize::from(*number - 1);
        let found = (stage.activity_count, stage.task_count);
        if found != STAGE_COUNTS[i] {
            return Err(StageDataError::CountMismatch {
                stage: *number,
                found,
                expected: STAGE_COUNTS[i],
            });
        }
        let mut got = stage.required_templates.clone();
        got.sort();
        let mut want = STAGE_TEMPLATES[i].to_vec();
        want.sort();
        let optional_ok = stage.agile_optional.iter().all(|k| got.contains(k));
        if got != want || stage.milestone != STAGE_MILESTONES[i] || !optional_ok {
            return Err(StageDataError::DefinitionMismatch { stage: *number });
        }
    }
    Ok(stages.into_values().collect())
}

/// A mandatory field of a template: `section` `-` means the preamble, a
/// trailing `*` matches every section with that prefix, and key `#table`
/// asks for at least one table row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MandatoryField {
    pub name: String,
    pub section: String,
    pub key: String,
}

pub type MandatoryFields = BTreeMap<TemplateKind, Vec<MandatoryField>>;

pub fn load_mandatory_fields(text: &str) -> Result<MandatoryFields, StageDataError> {
    let (doc, diags) = parse_text(text, "mandatory-fields");
    if let Some(d) = diags.iter().find(|d| d.is_error()) {
        return Err(malformed(d.line, d.message.clone()));
    }
    let mut out = MandatoryFields::new();
    for section in &doc.sections {
        let kind: TemplateKind = section
            .name
            .parse()
            .map_err(|e: crate::literal::UnknownLiteral| malformed(section.line, e.to_string()))?;
        let mut fields = Vec::new();
        for table in section.tables() {
            let (Some(f), Some(s), Some(k)) = (table.column("Field"), table.column("Section"), table.column("Key")) else {
                return Err(malformed(table.line, "table needs `Field`, `Section` and `Key` columns"));
            };
            for row in &table.rows {
                fields.push(MandatoryField {
                    name: row.cells[f].clone(),
                    section: row.cells[s].clone(),
                    key: row.cells[k].clone(),
                });
            }
        }
        if out.insert(kind, fields).is_some() {
            return Err(malformed(section.line, format!("{kind} listed twice")));
        }
    }
    Ok(out)
}

fn matching_sections<'d>(doc: &'d Document, pattern: &str) -> Vec<&'d Section> {
    if pattern == "-" {
        return vec![&doc.preamble];
    }
    match pattern.strip_suffix('*') {
        Some(prefix) => {
            let prefix = prefix.to_ascii_lowercase();
            doc.sections
                .iter()
                .filter(|s| s.name.to_ascii_lowercase().starts_with(&prefix))
                .collect()
        }
        None => doc.section(pattern).into_iter().collect(),
    }
}

fn is_filled(section: &Section, key: &str) -> bool {
    if key == "#table" {
        section.tables().any(|t: &Table| !t.rows.is_empty())
    } else {
        section.get(key).is_some_and(|f| !f.value.trim().is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Completeness {
    /// Filled mandatory fields over all mandatory fields, in [0, 1].
    pub ratio: f64,
    pub missing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GateError {
    #[error("document is a {found} but {expected} was requested")]
    KindMismatch { expected: TemplateKind, found: TemplateKind },
}

/// A field counts as filled when any section it matches fills it, so adding
/// content never lowers completeness.
pub fn template_completeness(
    doc: &SourceDocument,
    kind: TemplateKind,
    mandatory: &MandatoryFields,
) -> Result<Completeness, GateError> {
    if doc.template_kind != kind {
        return Err(GateError::KindMismatch {
            expected: kind,
            found: doc.template_kind,
        });
    }
    let fields = mandatory.get(&kind).map_or(&[][..], Vec::as_slice);
    if fields.is_empty() {
        return Ok(Completeness {
            ratio: 1.0,
            missing: Vec::new(),
        });
    }
    let missing: Vec<String> = fields
        .iter()
        .filter(|f| !matching_sections(&doc.body, &f.section).iter().any(|s| is_filled(s, &f.key)))
        .map(|f| f.name.clone())
        .collect();
    let filled = fields.len() - missing.len();
    Ok(Completeness {
        ratio: filled as f64 / fields.len() as f64,
        missing,
    })
}

/// Stage data plus mandatory field sets.
#[derive(Debug, Clone, PartialEq)]
pub struct GateConfig {
    pub stages: Vec<StageDefinition>,
    pub mandatory: MandatoryFields,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateReport {
    pub stage: u8,
    pub ready: bool,
    pub missing_templates: Vec<TemplateKind>,
    pub incomplete_templates: Vec<(TemplateKind, Vec<String>)>,
    pub milestone_evidence: Option<String>,
    pub notes: Vec<String>,
}

/// Evaluates one stage. Agile projects skip the templates the stage marks
/// agile-optional.
pub fn stage_gate(project: &Project, stage: u8, config: &GateConfig) -> GateReport {
    let definition = config
        .stages
        .iter()
        .find(|s| s.number == stage)
        .expect("stage numbers are 1, 2 or 3");
    let agile = project.methodology == Methodology::Agile;
    let documents = template_documents(project, "working");
    let mut report = GateReport {
        stage,
        ready: false,
        missing_templates: Vec::new(),
        incomplete_templates: Vec::new(),
        milestone_evidence: None,
        notes: Vec::new(),
    };
    for kind in &definition.required_templates {
        if agile && definition.agile_optional.contains(kind) {
            if !project.has_template(*kind) {
                report.notes.push(format!("{kind} not required for agile projects"));
            }
            continue;
        }
        if !project.has_template(*kind) {
            report.missing_templates.push(*kind);
            continue;
        }
        let mut missing: Vec<String> = Vec::new();
        for doc in documents.iter().filter(|d| d.template_kind == *kind) {
            let result = template_completeness(doc, *kind, &config.mandatory).expect("kinds match by construction");
            for field in result.missing {
                if !missing.contains(&field) {
                    missing.push(field);
                }
            }
        }
        if !missing.is_empty() {
            report.incomplete_templates.push((*kind, missing));
        }
    }
    report.milestone_evidence = match definition.milestone {
        Milestone::FeasibilityAnalysis => match &project.feasibility {
            Some(f) if f.all_analyses_filled() => Some(crate::docformat::template_file_name(TemplateKind::FeasibilityAnalysis)
                .expect("single-instance template")
                .to_string()),
            Some(_) => {
                report.notes.push("feasibility analysis lacks one or more of its four analyses".into());
                None
            }
            None => None,
        },
        milestone => project
            .milestones
            .iter()
            .filter(|m| m.milestone == milestone)
            .max_by_key(|m| m.date)
            .map(|m| format!("{} ({})", m.reference, m.date.format("%Y-%m-%d"))),
    };
    if report.milestone_evidence.is_none() {
        report.notes.push(format!("no {} evidence recorded", definition.milestone));
    }
    report.ready =
        report.missing_templates.is_empty() && report.incomplete_templates.is_empty() && report.milestone_evidence.is_some();
    report
}

/// Gate reports for stages 1 to 3 in order.
pub fn process_status(project: &Project, config: &GateConfig) -> Vec<GateReport> {
    (1..=3).map(|stage| stage_gate(project, stage, config)).collect()
}

/// Highest stage whose gate is ready.
pub fn current_stage(reports: &[GateReport]) -> Option<u8> {
    reports.iter().filter(|r| r.ready).map(|r| r.stage).max()
}

pub const DOCUMENT_COMPLETE: &str = "IoT requirements document complete";

/// Overall verdict over a full status.
pub fn overall_verdict(reports: &[GateReport]) -> String {
    if reports.len() == 3 && reports.iter().all(|r| r.ready) {
        DOCUMENT_COMPLETE.to_string()
    } else {
        match current_stage(reports) {
            Some(stage) => format!("stage {stage} ready; IoT requirements document incomplete"),
            None => "no stage ready; IoT requirements document incomplete".to_string(),
        }
    }
}

/// Gate reports rendered in the shared document grammar.
pub fn render_gate_reports(reports: &[GateReport]) -> String {
    let mut doc = Document::default();
    for r in reports {
        let mut s = Section::new(format!("Stage {}", r.stage));
        s.field("Ready", if r.ready { "Yes" } else { "No" })
            .field("Milestone evidence", r.milestone_evidence.clone().unwrap_or_default());
        let mut missing = Table::new(["Missing template"]);
        for k in &r.missing_templates {
            missing.push([k.literal()]);
        }
        s.table(missing);
        let mut incomplete = Table::new(["Incomplete template", "Missing fields"]);
        for (k, fields) in &r.incomplete_templates {
            incomplete.push([k.literal().to_string(), fields.join(", ")]);
        }
        s.table(incomplete);
        let mut notes = Table::new(["Note"]);
        for n in &r.notes {
            notes.push([n.clone()]);
        }
        s.table(notes);
        doc.push_section(s);
    }
    if reports.len() == 3 {
        doc.preamble.field("Verdict", overall_verdict(reports));
    }
    doc.to_text()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataSet;
    use std::path::PathBuf;

    fn config() -> GateConfig {
        DataSet::bundled().gate_config().unwrap()
    }

    #[test]
    fn shipped_stage_data_matches_declared_counts() {
        let stages = config().stages;
        let counts: Vec<(u32, u32)> = stages.iter().map(|s| (s.activity_count, s.task_count)).collect();
        assert_eq!(counts, STAGE_COUNTS);
    }

    #[test]
    fn wrong_counts_are_rejected() {
        let text = DataSet::bundled().text(crate::data::STAGES_FILE).unwrap().replace("Tasks: 27", "Tasks: 28");
        assert!(matches!(
            load_stage_definitions(&text),
            Err(StageDataError::CountMismatch { stage: 1, .. })
        ));
    }

    fn doc(kind: TemplateKind, text: &str) -> SourceDocument {
        SourceDocument {
            template_kind: kind,
            path: PathBuf::from("x"),
            version_label: "working".into(),
            body: parse_text(text, "x").0,
        }
    }

    #[test]
    fn completeness_ratio_and_missing_list() {
        let mandatory = config().mandatory;
        let empty = doc(TemplateKind::IoTProjectDetail, "");
        let result = template_completeness(&empty, TemplateKind::IoTProjectDetail, &mandatory).unwrap();
        assert_eq!(result.ratio, 0.0);
        assert_eq!(result.missing.len(), mandatory[&TemplateKind::IoTProjectDetail].len());
        assert!(result.missing.contains(&"problem_domain".to_string()));
        assert!(matches!(
            template_completeness(&empty, TemplateKind::IoTCanvas, &mandatory),
            Err(GateError::KindMismatch { .. })
        ));
    }
}
