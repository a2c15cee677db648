//! Document to model: one reader per template kind.

use std::collections::BTreeMap;
use std::str::FromStr;

use chrono::NaiveDate;

use super::grammar::{Document, Row, Section, Table};
use super::{Diagnostic, Severity};
use crate::inspection::{Answer, Defect, InspectionReport, Omission};
use crate::literal::{Choice, Literal};
use crate::model::{
    Actor, AgreementRecord, ArrangementCatalogInstance, ArtifactKind, BusinessRule, CanvasRecord, ChecklistItem,
    ChecklistRecord, FeasibilityRecord, Identifier, IotScenario, IotUseCase, Methodology, MilestoneEvidence, Need,
    Project, Requirement, Stakeholder, TemplateKind,
};
use crate::trace::{ChangeAnalysisReport, ChangeRequest, Direction, ImpactedArtifact};

pub(super) const DATE_FORMAT: &str = "%Y-%m-%d";

/// Keys every template preamble may carry.
const PREAMBLE_KEYS: &[&str] = &["Template", "Project", "Responsible", "Version"];

struct Ctx<'a> {
    file: &'a str,
    diags: &'a mut Vec<Diagnostic>,
}

impl Ctx<'_> {
    fn error(&mut self, line: usize, rule: &str, message: impl Into<String>) {
        self.diags
            .push(Diagnostic::new(Severity::Error, self.file, line, 1, rule, message));
    }

    fn warn(&mut self, line: usize, rule: &str, message: impl Into<String>) {
        self.diags
            .push(Diagnostic::new(Severity::Warning, self.file, line, 1, rule, message));
    }

    fn known_keys(&mut self, section: &Section, keys: &[&str]) {
        for field in section.fields() {
            if !keys.iter().any(|k| k.eq_ignore_ascii_case(&field.key)) {
                self.warn(field.line, "unknown-key", format!("unknown key `{}` ignored", field.key));
            }
        }
    }

    fn no_tables(&mut self, section: &Section) {
        for table in section.tables() {
            self.warn(table.line, "unknown-table", "unexpected table ignored");
        }
    }

    fn text(&self, section: &Section, key: &str) -> String {
        section.get(key).map(|f| f.value.clone()).unwrap_or_default()
    }

    fn id(&mut self, line: usize, text: &str, accept: impl Fn(ArtifactKind) -> bool, what: &str) -> Option<Identifier> {
        match text.parse::<Identifier>() {
            Ok(id) if accept(id.kind) => Some(id),
            Ok(id) => {
                self.error(line, "wrong-kind", format!("{id} is not a {what} id"));
                None
            }
            Err(err) => {
                self.error(line, "bad-id", err.to_string());
                None
            }
        }
    }

    /// Comma-separated identifiers; kind checks are left to model validation.
    fn ids(&mut self, line: usize, text: &str) -> Vec<Identifier> {
        let mut out = Vec::new();
        for part in split_list(text) {
            match part.parse::<Identifier>() {
                Ok(id) => out.push(id),
                Err(err) => self.error(line, "bad-id", err.to_string()),
            }
        }
        out
    }

    fn date(&mut self, line: usize, text: &str) -> Option<NaiveDate> {
        match NaiveDate::parse_from_str(text.trim(), DATE_FORMAT) {
            Ok(d) => Some(d),
            Err(_) => {
                self.error(line, "bad-date", format!("`{text}` is not a YYYY-MM-DD date"));
                None
            }
        }
    }

    fn literal<T: Literal + FromStr>(&mut self, line: usize, text: &str) -> Option<T>
    where
        T::Err: std::fmt::Display,
    {
        match text.parse::<T>() {
            Ok(v) => Some(v),
            Err(err) => {
                self.error(line, "invalid-enum", err.to_string());
                None
            }
        }
    }

    fn flag(&mut self, line: usize, text: &str) -> bool {
        match text.trim().to_ascii_lowercase().as_str() {
            "yes" | "y" | "true" => true,
            "" | "no" | "n" | "false" => false,
            other => {
                self.warn(line, "bad-flag", format!("`{other}` is not yes/no; read as no"));
                false
            }
        }
    }

    fn columns<'t>(&mut self, table: &'t Table, layout: &[Col]) -> Option<Columns<'t>> {
        let mut index = Vec::with_capacity(layout.len());
        for col in layout {
            let found = std::iter::once(col.name)
                .chain(col.aliases.iter().copied())
                .find_map(|name| table.column(name));
            if found.is_none() && col.required {
                self.error(table.line, "missing-column", format!("table lacks the `{}` column", col.name));
                return None;
            }
            index.push(found);
        }
        for (i, header) in table.header.iter().enumerate() {
            if !index.contains(&Some(i)) {
                self.warn(table.line, "unknown-column", format!("unknown column `{header}` ignored"));
            }
        }
        Some(Columns { index, table })
    }
}

pub(super) fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|p| !p.is_empty())
}

struct Col {
    name: &'static str,
    aliases: &'static [&'static str],
    required: bool,
}

const fn col(name: &'static str) -> Col {
    Col {
        name,
        aliases: &[],
        required: false,
    }
}

const fn req(name: &'static str) -> Col {
    Col {
        name,
        aliases: &[],
        required: true,
    }
}

const fn alias(name: &'static str, aliases: &'static [&'static str], required: bool) -> Col {
    Col { name, aliases, required }
}

struct Columns<'t> {
    index: Vec<Option<usize>>,
    table: &'t Table,
}

impl<'t> Columns<'t> {
    fn rows(&self) -> impl Iterator<Item = &'t Row> {
        self.table.rows.iter()
    }

    /// Cell `i` (position in the column layout) of `row`, empty when absent.
    fn get<'r>(&self, row: &'r Row, i: usize) -> &'r str {
        self.index[i].map_or("", |c| row.cells[c].as_str())
    }
}

/// Applies the manifest and returns the listed version labels with lines.
pub(crate) fn read_manifest(
    doc: &Document,
    file: &str,
    project: &mut Project,
    diags: &mut Vec<Diagnostic>,
) -> Vec<(String, usize)> {
    let mut ctx = Ctx { file, diags };
    ctx.known_keys(&doc.preamble, &["Project", "Responsible", "Methodology"]);
    project.name = ctx.text(&doc.preamble, "Project");
    project.responsible = ctx.text(&doc.preamble, "Responsible");
    if let Some(field) = doc.preamble.get("Methodology") {
        if let Some(m) = ctx.literal::<Methodology>(field.line, &field.value) {
            project.methodology = m;
        }
    }
    let mut versions = Vec::new();
    for section in &doc.sections {
        match section.name.to_ascii_lowercase().as_str() {
            "agreements" => {
                ctx.known_keys(section, &[]);
                for table in section.tables() {
                    let Some(c) = ctx.columns(table, &[req("Party"), req("Method"), req("Date"), req("Artifact")]) else {
                        continue;
                    };
                    for row in c.rows() {
                        let method = ctx.literal(row.line, c.get(row, 1));
                        let date = ctx.date(row.line, c.get(row, 2));
                        let kind = ctx.literal::<TemplateKind>(row.line, c.get(row, 3));
                        if let (Some(method), Some(date), Some(artifact_kind)) = (method, date, kind) {
                            project.agreements.push(AgreementRecord {
                                party: c.get(row, 0).to_string(),
                                method,
                                date,
                                artifact_kind,
                            });
                        }
                    }
                }
            }
            "milestones" => {
                ctx.known_keys(section, &[]);
                for table in section.tables() {
                    let Some(c) = ctx.columns(table, &[req("Milestone"), req("Reference"), req("Date")]) else {
                        continue;
                    };
                    for row in c.rows() {
                        let milestone = ctx.literal(row.line, c.get(row, 0));
                        let date = ctx.date(row.line, c.get(row, 2));
                        if let (Some(milestone), Some(date)) = (milestone, date) {
                            project.milestones.push(MilestoneEvidence {
                                milestone,
                                reference: c.get(row, 1).to_string(),
                                date,
                            });
                        }
                    }
                }
            }
            "versions" => {
                ctx.known_keys(section, &[]);
                for table in section.tables() {
                    let Some(c) = ctx.columns(table, &[req("Label")]) else {
                        continue;
                    };
                    for row in c.rows() {
                        let label = c.get(row, 0).to_string();
                        if versions.iter().any(|(l, _)| *l == label) {
                            ctx.error(row.line, "duplicate-label", format!("version `{label}` listed twice"));
                        } else {
                            versions.push((label, row.line));
                        }
                    }
                }
            }
            _ => ctx.warn(section.line, "unknown-section", format!("unknown section `{}` ignored", section.name)),
        }
    }
    versions
}

/// Merges one template document into `project`.
pub fn read_template(doc: &Document, kind: TemplateKind, file: &str, project: &mut Project, diags: &mut Vec<Diagnostic>) {
    let mut ctx = Ctx { file, diags };
    ctx.known_keys(&doc.preamble, PREAMBLE_KEYS);
    ctx.no_tables(&doc.preamble);
    if project.name.is_empty() {
        project.name = ctx.text(&doc.preamble, "Project");
    }
    if project.responsible.is_empty() {
        project.responsible = ctx.text(&doc.preamble, "Responsible");
    }
    match kind {
        TemplateKind::IoTCanvas => read_canvas(doc, &mut ctx, project),
        TemplateKind::FeasibilityAnalysis => read_feasibility(doc, &mut ctx, project),
        TemplateKind::IoTProjectDetail => read_project_detail(doc, &mut ctx, project),
        TemplateKind::IoTSolutionProposal => read_solution_proposal(doc, &mut ctx, project),
        TemplateKind::IoTUseCaseDescription => read_use_cases(doc, &mut ctx, project),
        TemplateKind::ChangeAnalysisReport => read_change_analysis(doc, &mut ctx, project),
        TemplateKind::InspectionRecord => {
            if let Some(report) = read_inspection(doc, &mut ctx) {
                if project.inspections.iter().any(|r| r.session_label == report.session_label) {
                    ctx.error(1, "duplicate-session", format!("session `{}` recorded twice", report.session_label));
                } else {
                    project.inspections.push(report);
                }
            }
        }
        TemplateKind::RequirementsChecklist
        | TemplateKind::VerificationChecklist
        | TemplateKind::DiagramAndUseCasesChecklist => {
            let checklist_kind = kind.checklist_kind().expect("checklist template");
            let items = read_checklist(doc, &mut ctx);
            project.checklists.push(ChecklistRecord {
                kind: checklist_kind,
                items,
            });
        }
    }
}

/// Reads a standalone inspection record document.
pub fn read_inspection_record(doc: &Document, file: &str, diags: &mut Vec<Diagnostic>) -> Option<InspectionReport> {
    let mut ctx = Ctx { file, diags };
    read_inspection(doc, &mut ctx)
}

fn unknown_section(ctx: &mut Ctx, section: &Section) {
    ctx.warn(section.line, "unknown-section", format!("unknown section `{}` ignored", section.name));
}

fn read_canvas(doc: &Document, ctx: &mut Ctx, project: &mut Project) {
    let mut canvas = CanvasRecord::default();
    for section in &doc.sections {
        match section.name.to_ascii_lowercase().as_str() {
            "canvas" => {
                ctx.known_keys(section, &["Image"]);
                ctx.no_tables(section);
                canvas.image = ctx.text(section, "Image");
            }
            "blocks" => {
                ctx.known_keys(section, &[]);
                for table in section.tables() {
                    let Some(c) = ctx.columns(table, &[req("Block"), col("Content")]) else {
                        continue;
                    };
                    for row in c.rows() {
                        let block = c.get(row, 0).to_string();
                        if canvas.blocks.insert(block.clone(), c.get(row, 1).to_string()).is_some() {
                            ctx.error(row.line, "duplicate-entry", format!("block `{block}` appears twice"));
                        }
                    }
                }
            }
            _ => unknown_section(ctx, section),
        }
    }
    project.canvas = Some(canvas);
}

pub(super) const FEASIBILITY_SECTIONS: [&str; 4] =
    ["Market Demand", "Economic Feasibility", "Impact and Risks", "Technical Feasibility"];

fn read_feasibility(doc: &Document, ctx: &mut Ctx, project: &mut Project) {
    let mut record = FeasibilityRecord::default();
    for section in &doc.sections {
        let name = section.name.to_ascii_lowercase();
        let slot = match name.as_str() {
            "market demand" => &mut record.market_demand,
            "economic feasibility" => &mut record.economic_feasibility,
            "impact and risks" => &mut record.impact_and_risks,
            "technical feasibility" => &mut record.technical_feasibility,
            "conclusion" => {
                ctx.known_keys(section, &["Verdict"]);
                ctx.no_tables(section);
                record.conclusion = ctx.text(section, "Verdict");
                continue;
            }
            _ => {
                unknown_section(ctx, section);
                continue;
            }
        };
        ctx.known_keys(section, &["Analysis"]);
        ctx.no_tables(section);
        *slot = ctx.text(section, "Analysis");
    }
    project.feasibility = Some(record);
}

fn read_checklist(doc: &Document, ctx: &mut Ctx) -> Vec<ChecklistItem> {
    let mut items = Vec::new();
    for section in &doc.sections {
        if !section.name.eq_ignore_ascii_case("Checklist") {
            unknown_section(ctx, section);
            continue;
        }
        ctx.known_keys(section, &[]);
        for table in section.tables() {
            let Some(c) = ctx.columns(table, &[req("Item"), col("Verdict"), col("Note")]) else {
                continue;
            };
            for row in c.rows() {
                let verdict_text = c.get(row, 1);
                let verdict = if verdict_text.is_empty() {
                    None
                } else {
                    ctx.literal(row.line, verdict_text)
                };
                items.push(ChecklistItem {
                    text: c.get(row, 0).to_string(),
                    verdict,
                    note: c.get(row, 2).to_string(),
                });
            }
        }
    }
    items
}

const REQUIREMENT_COLUMNS: [Col; 11] = [
    req("ID"),
    col("Description"),
    alias("IoT Characteristic", &["IoT Characteristics"], false),
    col("Situation"),
    col("Priority"),
    col("Cost"),
    col("Effort"),
    alias("Reused", &["Reused requirement?", "Reused requirement"], false),
    alias("Related Requirements", &["Related requirement ID"], false),
    alias("Dependencies", &["Dependency between requirements"], false),
    alias("Related Needs", &["Related needs ID"], false),
];

fn read_project_detail(doc: &Document, ctx: &mut Ctx, project: &mut Project) {
    for section in &doc.sections {
        match section.name.to_ascii_lowercase().as_str() {
            "project description" => {
                ctx.known_keys(section, &["Description", "Problem domain", "Objective"]);
                ctx.no_tables(section);
                project.description = ctx.text(section, "Description");
                project.problem_domain = ctx.text(section, "Problem domain");
                project.objective = ctx.text(section, "Objective");
            }
            "glossary" => {
                ctx.known_keys(section, &[]);
                for table in section.tables() {
                    let Some(c) = ctx.columns(table, &[req("Term"), col("Definition")]) else {
                        continue;
                    };
                    for row in c.rows() {
                        let term = c.get(row, 0).to_string();
                        if project.glossary.insert(term.clone(), c.get(row, 1).to_string()).is_some() {
                            ctx.error(row.line, "duplicate-entry", format!("term `{term}` defined twice"));
                        }
                    }
                }
            }
            "stakeholders" => {
                ctx.known_keys(section, &[]);
                for table in section.tables() {
                    let layout = [req("ID"), col("Name"), alias("Role", &["Role description"], false), col("Interest"), col("Influence")];
                    let Some(c) = ctx.columns(table, &layout) else { continue };
                    for row in c.rows() {
                        let Some(id) = ctx.id(row.line, c.get(row, 0), |k| k == ArtifactKind::Stakeholder, "stakeholder") else {
                            continue;
                        };
                        project.stakeholders.push(Stakeholder {
                            id,
                            name: c.get(row, 1).to_string(),
                            role_description: c.get(row, 2).to_string(),
                            interest: Choice::parse(c.get(row, 3)),
                            influence: Choice::parse(c.get(row, 4)),
                        });
                    }
                }
            }
            "needs" => {
                ctx.known_keys(section, &[]);
                for table in section.tables() {
                    let Some(c) = ctx.columns(table, &[req("ID"), col("Description"), col("Origin")]) else {
                        continue;
                    };
                    for row in c.rows() {
                        let Some(id) = ctx.id(row.line, c.get(row, 0), |k| k == ArtifactKind::Need, "need") else {
                            continue;
                        };
                        project.needs.push(Need {
                            id,
                            description: c.get(row, 1).to_string(),
                            origin: Choice::parse(c.get(row, 2)),
                        });
                    }
                }
            }
            "functional requirements" => read_requirements(section, ctx, project, ArtifactKind::Fr),
            "non-functional requirements" => read_requirements(section, ctx, project, ArtifactKind::Nfr),
            "business rules" => {
                ctx.known_keys(section, &[]);
                for table in section.tables() {
                    let layout = [req("ID"), col("Description"), col("Situation"), col("Priority"), alias("Related Needs", &["Related needs ID"], false)];
                    let Some(c) = ctx.columns(table, &layout) else { continue };
                    for row in c.rows() {
                        let Some(id) = ctx.id(row.line, c.get(row, 0), |k| k == ArtifactKind::Br, "business rule") else {
                            continue;
                        };
                        let related_need_ids = ctx.ids(row.line, c.get(row, 4));
                        project.business_rules.push(BusinessRule {
                            id,
                            description: c.get(row, 1).to_string(),
                            situation: Choice::parse(c.get(row, 2)),
                            priority: Choice::parse(c.get(row, 3)),
                            related_need_ids,
                        });
                    }
                }
            }
            _ => unknown_section(ctx, section),
        }
    }
}

fn read_requirements(section: &Section, ctx: &mut Ctx, project: &mut Project, kind: ArtifactKind) {
    ctx.known_keys(section, &[]);
    for table in section.tables() {
        let Some(c) = ctx.columns(table, &REQUIREMENT_COLUMNS) else {
            continue;
        };
        for row in c.rows() {
            let what = if kind == ArtifactKind::Fr { "functional requirement" } else { "non-functional requirement" };
            let Some(id) = ctx.id(row.line, c.get(row, 0), |k| k == kind, what) else {
                continue;
            };
            let optional = |text: &str| (!text.is_empty()).then(|| Choice::parse(text));
            let mut r = Requirement::new(id, c.get(row, 1));
            r.iot_characteristics = split_list(c.get(row, 2)).map(Choice::parse).collect();
            r.situation = Choice::parse(c.get(row, 3));
            r.priority = Choice::parse(c.get(row, 4));
            r.cost = optional(c.get(row, 5));
            r.effort = optional(c.get(row, 6));
            r.reused = ctx.flag(row.line, c.get(row, 7));
            r.related_requirement_ids = ctx.ids(row.line, c.get(row, 8));
            r.dependencies = ctx.ids(row.line, c.get(row, 9));
            r.related_need_ids = ctx.ids(row.line, c.get(row, 10));
            project.requirements.push(r);
        }
    }
}

fn read_actors(table: &Table, ctx: &mut Ctx) -> Vec<Actor> {
    let Some(c) = ctx.columns(table, &[req("Actor"), col("Category"), col("Description")]) else {
        return Vec::new();
    };
    c.rows()
        .map(|row| Actor {
            name: c.get(row, 0).to_string(),
            category: Choice::parse(c.get(row, 1)),
            description: c.get(row, 2).to_string(),
        })
        .collect()
}

fn single_column(table: &Table, ctx: &mut Ctx, name: &'static str) -> Vec<String> {
    let Some(c) = ctx.columns(table, &[req(name)]) else {
        return Vec::new();
    };
    c.rows().map(|row| c.get(row, 0).to_string()).collect()
}

/// Section name suffix after `prefix`, e.g. `Scenario IoT S01` -> `IoT S01`.
fn strip_prefix_ci<'s>(name: &'s str, prefix: &str) -> Option<&'s str> {
    let head = name.get(..prefix.len())?;
    head.eq_ignore_ascii_case(prefix).then(|| name[prefix.len()..].trim())
}

fn read_solution_proposal(doc: &Document, ctx: &mut Ctx, project: &mut Project) {
    let first_scenario = project.scenarios.len();
    for section in &doc.sections {
        if section.name.eq_ignore_ascii_case("Scenarios") {
            ctx.known_keys(section, &[]);
            for table in section.tables() {
                let layout = [
                    alias("IoT ID", &["ID"], true),
                    col("Title"),
                    alias("Functional Requirement", &["Functional Requirements", "Related functional requirements"], false),
                ];
                let Some(c) = ctx.columns(table, &layout) else { continue };
                for row in c.rows() {
                    let Some(id) = ctx.id(row.line, c.get(row, 0), |k| k == ArtifactKind::Scenario, "scenario") else {
                        continue;
                    };
                    let mut scenario = IotScenario::new(id, c.get(row, 1));
                    scenario.related_fr_ids = ctx.ids(row.line, c.get(row, 2));
                    project.scenarios.push(scenario);
                }
            }
        } else if let Some(rest) = strip_prefix_ci(&section.name, "Scenario ") {
            let Some(id) = ctx.id(section.line, rest, |k| k == ArtifactKind::Scenario, "scenario") else {
                continue;
            };
            let Some(index) = project.scenarios[first_scenario..].iter().position(|s| s.id == id) else {
                ctx.error(section.line, "undeclared-scenario", format!("{id} is not listed in the Scenarios table"));
                continue;
            };
            let keys = ["Interaction Arrangements", "Precedencies", "Dependencies", "Collected data", "Actions performed"];
            ctx.known_keys(section, &keys);
            let line = |key: &str| section.get(key).map_or(section.line, |f| f.line);
            let arrangement_ids = ctx.ids(line(keys[0]), &ctx.text(section, keys[0]));
            let precedencies = ctx.ids(line(keys[1]), &ctx.text(section, keys[1]));
            let dependencies = ctx.ids(line(keys[2]), &ctx.text(section, keys[2]));
            let collected_data = ctx.text(section, keys[3]);
            let actions_performed = ctx.text(section, keys[4]);
            let mut actors = Vec::new();
            let mut actions = Vec::new();
            let mut sequence = Vec::new();
            for table in section.tables() {
                match table.header.first().map(|h| h.to_ascii_lowercase()).as_deref() {
                    Some("actor") => actors.extend(read_actors(table, ctx)),
                    Some("action") => actions.extend(single_column(table, ctx, "Action")),
                    Some("step") => {
                        if let Some(c) = ctx.columns(table, &[req("Step"), req("Interaction")]) {
                            sequence.extend(c.rows().map(|row| c.get(row, 1).to_string()));
                        }
                    }
                    _ => ctx.warn(table.line, "unknown-table", "unexpected table ignored"),
                }
            }
            let scenario = &mut project.scenarios[first_scenario + index];
            scenario.arrangement_ids = arrangement_ids;
            scenario.precedencies = precedencies;
            scenario.dependencies = dependencies;
            scenario.collected_data = collected_data;
            scenario.actions_performed = actions_performed;
            scenario.actors = actors;
            scenario.actions = actions;
            scenario.interaction_sequence = sequence;
        } else if let Some(rest) = strip_prefix_ci(&section.name, "Catalog ") {
            let id_text = rest.split('#').next().unwrap_or_default().trim();
            let Some(arrangement_id) = ctx.id(section.line, id_text, |k| k == ArtifactKind::Arrangement, "arrangement") else {
                continue;
            };
            ctx.known_keys(section, &["Scenarios", "Representation"]);
            let line = section.get("Scenarios").map_or(section.line, |f| f.line);
            let scenario_ids = ctx.ids(line, &ctx.text(section, "Scenarios"));
            let mut answers = BTreeMap::new();
            for table in section.tables() {
                let Some(c) = ctx.columns(table, &[col("Component"), req("Prompt"), col("Answer")]) else {
                    continue;
                };
                for row in c.rows() {
                    let prompt = c.get(row, 1).to_string();
                    if answers.insert(prompt.clone(), c.get(row, 2).to_string()).is_some() {
                        ctx.error(row.line, "duplicate-entry", format!("prompt `{prompt}` answered twice"));
                    }
                }
            }
            project.catalogs.push(ArrangementCatalogInstance {
                arrangement_id,
                scenario_ids,
                representation: ctx.text(section, "Representation"),
                answers,
            });
        } else {
            unknown_section(ctx, section);
        }
    }
}

fn read_use_cases(doc: &Document, ctx: &mut Ctx, project: &mut Project) {
    let first = project.use_cases.len();
    for section in &doc.sections {
        if section.name.eq_ignore_ascii_case("Use Case Diagram") {
            ctx.known_keys(section, &["Diagram"]);
            ctx.no_tables(section);
            project.use_case_diagram = ctx.text(section, "Diagram");
        } else if section.name.eq_ignore_ascii_case("Use Cases") {
            ctx.known_keys(section, &[]);
            for table in section.tables() {
                let layout = [
                    alias("IoT use case ID", &["Use Case ID", "ID"], true),
                    col("Title"),
                    alias("IoT Requirements", &["Requirements"], false),
                    col("Interaction Arrangements"),
                    col("IoT Scenarios"),
                ];
                let Some(c) = ctx.columns(table, &layout) else { continue };
                for row in c.rows() {
                    let Some(id) = ctx.id(row.line, c.get(row, 0), |k| k == ArtifactKind::UseCase, "use case") else {
                        continue;
                    };
                    let mut uc = IotUseCase::new(id, c.get(row, 1));
                    uc.requirement_ids = ctx.ids(row.line, c.get(row, 2));
                    uc.arrangement_ids = ctx.ids(row.line, c.get(row, 3));
                    uc.scenario_ids = ctx.ids(row.line, c.get(row, 4));
                    project.use_cases.push(uc);
                }
            }
        } else if let Some(rest) = strip_prefix_ci(&section.name, "Use Case ") {
            let Some(id) = ctx.id(section.line, rest, |k| k == ArtifactKind::UseCase, "use case") else {
                continue;
            };
            let Some(index) = project.use_cases[first..].iter().position(|u| u.id == id) else {
                ctx.error(section.line, "undeclared-use-case", format!("{id} is not listed in the Use Cases table"));
                continue;
            };
            let keys = ["Preconditions", "Postconditions", "Associated Use Cases", "Business Rules"];
            ctx.known_keys(section, &keys);
            let line = |key: &str| section.get(key).map_or(section.line, |f| f.line);
            let associated = ctx.ids(line(keys[2]), &ctx.text(section, keys[2]));
            let rules = ctx.ids(line(keys[3]), &ctx.text(section, keys[3]));
            let mut actors = Vec::new();
            let mut base = Vec::new();
            let mut alternative: Vec<Vec<String>> = Vec::new();
            let mut exception: Vec<Vec<String>> = Vec::new();
            for table in section.tables() {
                match table.header.first().map(|h| h.to_ascii_lowercase()).as_deref() {
                    Some("actor") => actors.extend(read_actors(table, ctx)),
                    Some("flow") => {
                        let Some(c) = ctx.columns(table, &[req("Flow"), col("Step"), req("Description")]) else {
                            continue;
                        };
                        for row in c.rows() {
                            let step = c.get(row, 2).to_string();
                            match parse_flow(c.get(row, 0)) {
                                Some(FlowRef::Base) => base.push(step),
                                Some(FlowRef::Alternative(n)) => push_flow(&mut alternative, n, step),
                                Some(FlowRef::Exception(n)) => push_flow(&mut exception, n, step),
                                None => ctx.error(
                                    row.line,
                                    "bad-flow",
                                    format!("`{}` is not Base, Alternative N or Exception N", c.get(row, 0)),
                                ),
                            }
                        }
                    }
                    _ => ctx.warn(table.line, "unknown-table", "unexpected table ignored"),
                }
            }
            let uc = &mut project.use_cases[first + index];
            uc.preconditions = ctx.text(section, keys[0]);
            uc.postconditions = ctx.text(section, keys[1]);
            uc.associated_use_cases = associated;
            uc.business_rule_ids = rules;
            uc.actors = actors;
            uc.base_flow = base;
            uc.alternative_flows = alternative;
            uc.exception_flows = exception;
        } else {
            unknown_section(ctx, section);
        }
    }
}

enum FlowRef {
    Base,
    Alternative(usize),
    Exception(usize),
}

fn parse_flow(text: &str) -> Option<FlowRef> {
    let lower = text.trim().to_ascii_lowercase();
    if lower == "base" {
        return Some(FlowRef::Base);
    }
    let (word, number) = lower.split_once(' ')?;
    let n: usize = number.trim().parse().ok().filter(|n| *n >= 1)?;
    match word {
        "alternative" => Some(FlowRef::Alternative(n)),
        "exception" => Some(FlowRef::Exception(n)),
        _ => None,
    }
}

fn push_flow(flows: &mut Vec<Vec<String>>, number: usize, step: String) {
    if flows.len() < number {
        flows.resize_with(number, Vec::new);
    }
    flows[number - 1].push(step);
}

fn read_change_analysis(doc: &Document, ctx: &mut Ctx, project: &mut Project) {
    for section in &doc.sections {
        let Some(rest) = strip_prefix_ci(&section.name, "Change ") else {
            unknown_section(ctx, section);
            continue;
        };
        let Some(id) = ctx.id(section.line, rest, |k| k == ArtifactKind::ChangeRequest, "change request") else {
            continue;
        };
        ctx.known_keys(section, &["Target", "Kind", "Description", "Direction", "Decision"]);
        let line = |key: &str| section.get(key).map_or(section.line, |f| f.line);
        let target = ctx.id(line("Target"), &ctx.text(section, "Target"), |_| true, "artifact");
        let kind = ctx.literal(line("Kind"), &ctx.text(section, "Kind"));
        let direction_text = ctx.text(section, "Direction");
        let direction = if direction_text.is_empty() {
            Some(Direction::Both)
        } else {
            ctx.literal(line("Direction"), &direction_text)
        };
        let decision_text = ctx.text(section, "Decision");
        let decision = if decision_text.is_empty() || decision_text.eq_ignore_ascii_case("pending") {
            Some(None)
        } else {
            ctx.literal(line("Decision"), &decision_text).map(Some)
        };
        let mut impacted = Vec::new();
        for table in section.tables() {
            let layout = [req("Impacted"), col("Direction"), alias("Reached Via", &["Via"], false), col("Blocking")];
            let Some(c) = ctx.columns(table, &layout) else { continue };
            for row in c.rows() {
                let Some(id) = ctx.id(row.line, c.get(row, 0), |_| true, "artifact") else {
                    continue;
                };
                let dir = ctx.literal(row.line, c.get(row, 1));
                let via = ctx.literal(row.line, c.get(row, 2));
                let blocking = ctx.flag(row.line, c.get(row, 3));
                if let (Some(direction), Some(via)) = (dir, via) {
                    impacted.push(ImpactedArtifact {
                        id,
                        direction,
                        via,
                        blocking,
                    });
                }
            }
        }
        let (Some(target_id), Some(kind), Some(direction), Some(decision)) = (target, kind, direction, decision) else {
            continue;
        };
        project.change_reports.push(ChangeAnalysisReport {
            change: ChangeRequest {
                id,
                target_id,
                kind,
                description: ctx.text(section, "Description"),
            },
            direction,
            impacted,
            decision,
        });
    }
}

fn read_inspection(doc: &Document, ctx: &mut Ctx) -> Option<InspectionReport> {
    let mut report = InspectionReport {
        session_label: String::new(),
        inspector: String::new(),
        answers: Vec::new(),
        defects: Vec::new(),
        meeting_done: false,
        omissions: Vec::new(),
    };
    let mut declared_defects: Option<(usize, usize)> = None;
    let mut has_session = false;
    for section in &doc.sections {
        match section.name.to_ascii_lowercase().as_str() {
            "session" => {
                has_session = true;
                ctx.known_keys(section, &["Label", "Inspector", "Meeting done", "Defects"]);
                ctx.no_tables(section);
                report.session_label = ctx.text(section, "Label");
                report.inspector = ctx.text(section, "Inspector");
                if let Some(f) = section.get("Meeting done") {
                    report.meeting_done = ctx.flag(f.line, &f.value);
                }
                if let Some(f) = section.get("Defects") {
                    match f.value.trim().parse() {
                        Ok(n) => declared_defects = Some((n, f.line)),
                        Err(_) => ctx.warn(f.line, "bad-count", "defect count is not a number"),
                    }
                }
            }
            "verdicts" => {
                for table in section.tables() {
                    let layout = [req("Scenario"), req("Question"), req("Verdict"), col("Note")];
                    let Some(c) = ctx.columns(table, &layout) else { continue };
                    for row in c.rows() {
                        let scenario = ctx.id(row.line, c.get(row, 0), |k| k == ArtifactKind::Scenario, "scenario");
                        let question = question_number(ctx, row.line, c.get(row, 1));
                        let verdict = ctx.literal(row.line, c.get(row, 2));
                        if let (Some(scenario_id), Some(question_number), Some(verdict)) = (scenario, question, verdict) {
                            let note = c.get(row, 3);
                            report.answers.push(Answer {
                                question_number,
                                scenario_id,
                                verdict,
                                note: (!note.is_empty()).then(|| note.to_string()),
                            });
                        }
                    }
                }
            }
            "defects" => {
                for table in section.tables() {
                    let layout = [req("ID"), req("Scenario"), req("Question"), req("Category"), req("Status"), col("Description")];
                    let Some(c) = ctx.columns(table, &layout) else { continue };
                    for row in c.rows() {
                        let id = match c.get(row, 0).trim().trim_start_matches('D').parse::<u32>() {
                            Ok(id) => Some(id),
                            Err(_) => {
                                ctx.error(row.line, "bad-id", format!("`{}` is not a defect number", c.get(row, 0)));
                                None
                            }
                        };
                        let scenario = ctx.id(row.line, c.get(row, 1), |k| k == ArtifactKind::Scenario, "scenario");
                        let question = question_number(ctx, row.line, c.get(row, 2));
                        let category = ctx.literal(row.line, c.get(row, 3));
                        let status = ctx.literal(row.line, c.get(row, 4));
                        if let (Some(id), Some(scenario_id), Some(question_number), Some(category), Some(status)) =
                            (id, scenario, question, category, status)
                        {
                            report.defects.push(Defect {
                                id,
                                scenario_id,
                                question_number,
                                category,
                                description: c.get(row, 5).to_string(),
                                status,
                            });
                        }
                    }
                }
            }
            "omissions" => {
                for table in section.tables() {
                    let Some(c) = ctx.columns(table, &[req("Scenario"), req("Question")]) else {
                        continue;
                    };
                    for row in c.rows() {
                        let scenario = ctx.id(row.line, c.get(row, 0), |k| k == ArtifactKind::Scenario, "scenario");
                        let question = question_number(ctx, row.line, c.get(row, 1));
                        if let (Some(scenario_id), Some(question_number)) = (scenario, question) {
                            report.omissions.push(Omission {
                                scenario_id,
                                question_number,
                            });
                        }
                    }
                }
            }
            _ => unknown_section(ctx, section),
        }
    }
    if !has_session {
        ctx.error(1, "missing-section", "inspection record has no `Session` section");
        return None;
    }
    if let Some((count, line)) = declared_defects {
        if count != report.defects.len() {
            ctx.warn(line, "defect-count", format!("declares {count} defects but lists {}", report.defects.len()));
        }
    }
    Some(report)
}

fn question_number(ctx: &mut Ctx, line: usize, text: &str) -> Option<u32> {
    match text.trim().trim_start_matches(['Q', 'q']).parse() {
        Ok(n) => Some(n),
        Err(_) => {
            ctx.error(line, "bad-question", format!("`{text}` is not a question number"));
            None
        }
    }
}
