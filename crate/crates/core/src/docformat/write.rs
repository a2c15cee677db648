//! Model to document: the inverse of `read`.

use std::path::PathBuf;

use super::grammar::{Document, Section, Table};
use super::read::{DATE_FORMAT, FEASIBILITY_SECTIONS};
use super::{inspection_file_name, template_file_name, SourceDocument};
use crate::inspection::InspectionReport;
use crate::literal::Literal;
use crate::model::{Actor, ArtifactKind, Identifier, Project, Requirement, TemplateKind};

fn join_ids(ids: &[Identifier]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "Yes"
    } else {
        "No"
    }
}

fn preamble(project: &Project, kind: TemplateKind, version_label: &str) -> Section {
    let mut s = Section::default();
    s.field("Template", kind.literal())
        .field("Project", project.name.clone())
        .field("Responsible", project.responsible.clone())
        .field("Version", version_label);
    s
}

fn section_with_table(name: impl Into<String>, table: Table) -> Section {
    let mut s = Section::new(name);
    s.table(table);
    s
}

pub(crate) fn manifest_document(project: &Project, with_versions: bool) -> Document {
    let mut doc = Document::default();
    doc.preamble
        .field("Project", project.name.clone())
        .field("Responsible", project.responsible.clone())
        .field("Methodology", project.methodology.literal());
    if !project.agreements.is_empty() {
        let mut t = Table::new(["Party", "Method", "Date", "Artifact"]);
        for a in &project.agreements {
            t.push([
                a.party.clone(),
                a.method.to_string(),
                a.date.format(DATE_FORMAT).to_string(),
                a.artifact_kind.to_string(),
            ]);
        }
        doc.push_section(section_with_table("Agreements", t));
    }
    if !project.milestones.is_empty() {
        let mut t = Table::new(["Milestone", "Reference", "Date"]);
        for m in &project.milestones {
            t.push([m.milestone.to_string(), m.reference.clone(), m.date.format(DATE_FORMAT).to_string()]);
        }
        doc.push_section(section_with_table("Milestones", t));
    }
    if with_versions && !project.versions.is_empty() {
        let mut t = Table::new(["Label"]);
        for v in &project.versions {
            t.push([v.label.clone()]);
        }
        doc.push_section(section_with_table("Versions", t));
    }
    doc
}

/// Every template document the project carries content for, in template
/// order; inspection records come one per session.
pub fn template_documents(project: &Project, version_label: &str) -> Vec<SourceDocument> {
    let mut out = Vec::new();
    for kind in TemplateKind::ALL.iter().copied() {
        if kind == TemplateKind::InspectionRecord {
            for report in &project.inspections {
                let mut body = inspection_record_document(report);
                body.preamble = preamble(project, kind, version_label);
                out.push(SourceDocument {
                    template_kind: kind,
                    path: PathBuf::from(inspection_file_name(&report.session_label)),
                    version_label: version_label.to_string(),
                    body,
                });
            }
            continue;
        }
        if let Some(body) = template_document(project, kind, version_label) {
            out.push(SourceDocument {
                template_kind: kind,
                path: PathBuf::from(template_file_name(kind).expect("single-instance template")),
                version_label: version_label.to_string(),
                body,
            });
        }
    }
    out
}

/// The document for one template kind, or `None` when the project has no
/// content for it. For inspection records the latest session is used.
pub fn template_document(project: &Project, kind: TemplateKind, version_label: &str) -> Option<Document> {
    if !project.has_template(kind) {
        return None;
    }
    let mut doc = match kind {
        TemplateKind::IoTCanvas => canvas(project),
        TemplateKind::FeasibilityAnalysis => feasibility(project),
        TemplateKind::IoTProjectDetail => project_detail(project),
        TemplateKind::IoTSolutionProposal => solution_proposal(project),
        TemplateKind::IoTUseCaseDescription => use_cases(project),
        TemplateKind::ChangeAnalysisReport => change_analysis(project),
        TemplateKind::InspectionRecord => inspection_record_document(project.inspections.last()?),
        TemplateKind::RequirementsChecklist
        | TemplateKind::VerificationChecklist
        | TemplateKind::DiagramAndUseCasesChecklist => checklist(project, kind),
    };
    doc.preamble = preamble(project, kind, version_label);
    Some(doc)
}

fn canvas(project: &Project) -> Document {
    let record = project.canvas.clone().unwrap_or_default();
    let mut doc = Document::default();
    let mut s = Section::new("Canvas");
    s.field("Image", record.image);
    doc.push_section(s);
    let mut t = Table::new(["Block", "Content"]);
    for (block, content) in &record.blocks {
        t.push([block.clone(), content.clone()]);
    }
    doc.push_section(section_with_table("Blocks", t));
    doc
}

fn feasibility(project: &Project) -> Document {
    let record = project.feasibility.clone().unwrap_or_default();
    let mut doc = Document::default();
    for (name, (_, text)) in FEASIBILITY_SECTIONS.iter().zip(record.analyses()) {
        let mut s = Section::new(*name);
        s.field("Analysis", text);
        doc.push_section(s);
    }
    let mut s = Section::new("Conclusion");
    s.field("Verdict", record.conclusion.clone());
    doc.push_section(s);
    doc
}

fn checklist(project: &Project, kind: TemplateKind) -> Document {
    let mut doc = Document::default();
    let mut t = Table::new(["Item", "Verdict", "Note"]);
    if let Some(record) = kind.checklist_kind().and_then(|c| project.checklist(c)) {
        for item in &record.items {
            t.push([
                item.text.clone(),
                item.verdict.map(|v| v.to_string()).unwrap_or_default(),
                item.note.clone(),
            ]);
        }
    }
    doc.push_section(section_with_table("Checklist", t));
    doc
}

fn project_detail(project: &Project) -> Document {
    let mut doc = Document::default();
    let mut s = Section::new("Project Description");
    s.field("Description", project.description.clone())
        .field("Problem domain", project.problem_domain.clone())
        .field("Objective", project.objective.clone());
    doc.push_section(s);

    let mut t = Table::new(["Term", "Definition"]);
    for (term, definition) in &project.glossary {
        t.push([term.clone(), definition.clone()]);
    }
    doc.push_section(section_with_table("Glossary", t));

    let mut t = Table::new(["ID", "Name", "Role", "Interest", "Influence"]);
    for s in &project.stakeholders {
        t.push([
            s.id.to_string(),
            s.name.clone(),
            s.role_description.clone(),
            s.interest.to_string(),
            s.influence.to_string(),
        ]);
    }
    doc.push_section(section_with_table("Stakeholders", t));

    let mut t = Table::new(["ID", "Description", "Origin"]);
    for n in &project.needs {
        t.push([n.id.to_string(), n.description.clone(), n.origin.to_string()]);
    }
    doc.push_section(section_with_table("Needs", t));

    let fr_header = [
        "ID",
        "Description",
        "IoT Characteristic",
        "Situation",
        "Priority",
        "Cost",
        "Effort",
        "Reused",
        "Related Requirements",
        "Dependencies",
        "Related Needs",
    ];
    let mut fr = Table::new(fr_header);
    let mut nfr = Table::new(["ID", "Description", "IoT Characteristic", "Situation", "Priority", "Reused", "Related Requirements", "Related Needs"]);
    for r in &project.requirements {
        if r.id.kind == ArtifactKind::Fr {
            fr.push(requirement_row(r, true));
        } else {
            nfr.push(requirement_row(r, false));
        }
    }
    doc.push_section(section_with_table("Functional Requirements", fr));
    doc.push_section(section_with_table("Non-functional Requirements", nfr));

    let mut t = Table::new(["ID", "Description", "Situation", "Priority", "Related Needs"]);
    for b in &project.business_rules {
        t.push([
            b.id.to_string(),
            b.description.clone(),
            b.situation.to_string(),
            b.priority.to_string(),
            join_ids(&b.related_need_ids),
        ]);
    }
    doc.push_section(section_with_table("Business Rules", t));
    doc
}

fn requirement_row(r: &Requirement, functional: bool) -> Vec<String> {
    let characteristics = r
        .iot_characteristics
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ");
    let optional = |v: &Option<crate::literal::Choice<crate::model::Level>>| v.as_ref().map(ToString::to_string).unwrap_or_default();
    let mut row = vec![
        r.id.to_string(),
        r.description.clone(),
        characteristics,
        r.situation.to_string(),
        r.priority.to_string(),
    ];
    if functional {
        row.push(optional(&r.cost));
        row.push(optional(&r.effort));
    }
    row.push(yes_no(r.reused).to_string());
    row.push(join_ids(&r.related_requirement_ids));
    if functional {
        row.push(join_ids(&r.dependencies));
    }
    row.push(join_ids(&r.related_need_ids));
    row
}

fn actor_table(actors: &[Actor]) -> Table {
    let mut t = Table::new(["Actor", "Category", "Description"]);
    for a in actors {
        t.push([a.name.clone(), a.category.to_string(), a.description.clone()]);
    }
    t
}

fn solution_proposal(project: &Project) -> Document {
    let mut doc = Document::default();
    let mut t = Table::new(["IoT ID", "Title", "Functional Requirement"]);
    for s in &project.scenarios {
        t.push([s.id.to_string(), s.title.clone(), join_ids(&s.related_fr_ids)]);
    }
    doc.push_section(section_with_table("Scenarios", t));

    for s in &project.scenarios {
        let mut section = Section::new(format!("Scenario {}", s.id));
        section
            .field("Interaction Arrangements", join_ids(&s.arrangement_ids))
            .field("Precedencies", join_ids(&s.precedencies))
            .field("Dependencies", join_ids(&s.dependencies))
            .field("Collected data", s.collected_data.clone())
            .field("Actions performed", s.actions_performed.clone());
        section.table(actor_table(&s.actors));
        let mut actions = Table::new(["Action"]);
        for a in &s.actions {
            actions.push([a.clone()]);
        }
        section.table(actions);
        let mut steps = Table::new(["Step", "Interaction"]);
        for (i, step) in s.interaction_sequence.iter().enumerate() {
            steps.push([(i + 1).to_string(), step.clone()]);
        }
        section.table(steps);
        doc.push_section(section);
    }

    for (index, c) in project.catalogs.iter().enumerate() {
        let mut section = Section::new(format!("Catalog {} #{}", c.arrangement_id, index + 1));
        section
            .field("Scenarios", join_ids(&c.scenario_ids))
            .field("Representation", c.representation.clone());
        let mut t = Table::new(["Prompt", "Answer"]);
        for (prompt, answer) in &c.answers {
            t.push([prompt.clone(), answer.clone()]);
        }
        section.table(t);
        doc.push_section(section);
    }
    doc
}

fn use_cases(project: &Project) -> Document {
    let mut doc = Document::default();
    let mut s = Section::new("Use Case Diagram");
    s.field("Diagram", project.use_case_diagram.clone());
    doc.push_section(s);

    let mut t = Table::new(["IoT use case ID", "Title", "IoT Requirements", "Interaction Arrangements", "IoT Scenarios"]);
    for u in &project.use_cases {
        t.push([
            u.id.to_string(),
            u.title.clone(),
            join_ids(&u.requirement_ids),
            join_ids(&u.arrangement_ids),
            join_ids(&u.scenario_ids),
        ]);
    }
    doc.push_section(section_with_table("Use Cases", t));

    for u in &project.use_cases {
        let mut section = Section::new(format!("Use Case {}", u.id));
        section
            .field("Preconditions", u.preconditions.clone())
            .field("Postconditions", u.postconditions.clone())
            .field("Associated Use Cases", join_ids(&u.associated_use_cases))
            .field("Business Rules", join_ids(&u.business_rule_ids));
        section.table(actor_table(&u.actors));
        let mut flows = Table::new(["Flow", "Step", "Description"]);
        for (i, step) in u.base_flow.iter().enumerate() {
            flows.push(["Base".to_string(), (i + 1).to_string(), step.clone()]);
        }
        for (label, list) in [("Alternative", &u.alternative_flows), ("Exception", &u.exception_flows)] {
            for (n, flow) in list.iter().enumerate() {
                for (i, step) in flow.iter().enumerate() {
                    flows.push([format!("{label} {}", n + 1), (i + 1).to_string(), step.clone()]);
                }
            }
        }
        section.table(flows);
        doc.push_section(section);
    }
    doc
}

fn change_analysis(project: &Project) -> Document {
    let mut doc = Document::default();
    for report in &project.change_reports {
        let c = &report.change;
        let mut section = Section::new(format!("Change {}", c.id));
        section
            .field("Target", c.target_id.to_string())
            .field("Kind", c.kind.to_string())
            .field("Description", c.description.clone())
            .field("Direction", report.direction.to_string())
            .field("Decision", report.decision.map_or_else(|| "Pending".to_string(), |d| d.to_string()));
        let mut t = Table::new(["Impacted", "Direction", "Reached Via", "Blocking"]);
        for i in &report.impacted {
            t.push([i.id.to_string(), i.direction.to_string(), i.via.to_string(), yes_no(i.blocking).to_string()]);
        }
        section.table(t);
        doc.push_section(section);
    }
    doc
}

/// Inspection record layout: session summary, per-question verdicts,
/// defects and omissions.
pub fn inspection_record_document(report: &InspectionReport) -> Document {
    let mut doc = Document::default();
    doc.preamble.field("Template", TemplateKind::InspectionRecord.literal());
    let mut s = Section::new("Session");
    s.field("Label", report.session_label.clone())
        .field("Inspector", report.inspector.clone())
        .field("Meeting done", yes_no(report.meeting_done))
        .field("Defects", report.defects.len().to_string());
    doc.push_section(s);

    let mut t = Table::new(["Scenario", "Question", "Verdict", "Note"]);
    for a in &report.answers {
        t.push([
            a.scenario_id.to_string(),
            a.question_number.to_string(),
            a.verdict.to_string(),
            a.note.clone().unwrap_or_default(),
        ]);
    }
    doc.push_section(section_with_table("Verdicts", t));

    let mut t = Table::new(["ID", "Scenario", "Question", "Category", "Status", "Description"]);
    for d in &report.defects {
        t.push([
            d.id.to_string(),
            d.scenario_id.to_string(),
            d.question_number.to_string(),
            d.category.to_string(),
            d.status.to_string(),
            d.description.clone(),
        ]);
    }
    doc.push_section(section_with_table("Defects", t));

    let mut t = Table::new(["Scenario", "Question"]);
    for o in &report.omissions {
        t.push([o.scenario_id.to_string(), o.question_number.to_string()]);
    }
    doc.push_section(section_with_table("Omissions", t));
    doc
}
