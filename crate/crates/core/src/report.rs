//! Document rendering and the template coverage audit.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::docformat::grammar::{parse_text, Document, Item, Section, Table};
use crate::docformat::{inspection_record_document, template_document};
use crate::inspection::InspectionReport;
use crate::literal::{literal_enum, Literal};
use crate::model::{Project, TemplateKind};

literal_enum! {
    /// How much of an information item a template collects.
    pub enum CoverageMark {
        T => "T" ["Totally", "Total"],
        P => "P" ["Partially", "Partial"],
        N => "N" ["None", "No"],
        NotApplicable => "-" ["NotApplicable", "NA", "n/a"],
    }
}

impl CoverageMark {
    /// Matrix cell text; not-applicable cells are blank.
    pub fn cell(self) -> &'static str {
        match self {
            CoverageMark::NotApplicable => "",
            other => other.literal(),
        }
    }
}

pub const LEGEND: &str = "P - Partially collected; T - Totally collected; N - Does not collect information";

pub const INFORMATION_ITEMS: [&str; 21] = [
    "Project name/Project responsible",
    "Version control",
    "Explicit agreement",
    "Project/system objective",
    "Problem domain",
    "Project scope",
    "Glossaire",
    "Stakeholders description",
    "Business and Stakeholders needs a description",
    "Functional requirements",
    "Non-functional requirements",
    "Requirements negotiation (prioritization)",
    "Business rules",
    "Project analyses",
    "IoT scenarios",
    "IoT components description",
    "IoT interaction arrangements",
    "IoT use-cases diagram",
    "IoT use-cases description",
    "Traceability",
    "References (others project documents)",
];

const ITEM_HEADER: &str = "Project/system information";

/// Items a template does not declare are not applicable to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateFieldSet {
    pub name: String,
    pub title: String,
    pub items: BTreeMap<String, CoverageMark>,
}

impl TemplateFieldSet {
    pub fn new(name: impl Into<String>) -> Self {
        TemplateFieldSet {
            name: name.into(),
            title: String::new(),
            items: BTreeMap::new(),
        }
    }

    pub fn mark(&self, item: &str) -> CoverageMark {
        self.items.get(item).copied().unwrap_or(CoverageMark::NotApplicable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("absent-template({0})")]
    AbsentTemplate(TemplateKind),
    #[error("unknown information item `{item}` in {template}")]
    UnknownItem { template: String, item: String },
    #[error("coverage audit needs at least one template")]
    NoTemplates,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

fn canonical_item(item: &str) -> Option<&'static str> {
    INFORMATION_ITEMS.iter().copied().find(|i| i.eq_ignore_ascii_case(item.trim()))
}

/// Reads fixture sections of the form `== NAME ==` with an `Item | Coverage`
/// table and an optional `Title` field.
pub fn load_coverage_fixtures(text: &str) -> Result<Vec<TemplateFieldSet>, ReportError> {
    let (doc, diags) = parse_text(text, "fixtures");
    if let Some(d) = diags.iter().find(|d| d.is_error()) {
        return Err(ReportError::Malformed {
            line: d.line,
            message: d.message.clone(),
        });
    }
    let mut sets = Vec::new();
    for section in &doc.sections {
        let mut set = TemplateFieldSet::new(section.name.clone());
        set.title = section.get("Title").map(|f| f.value.clone()).unwrap_or_default();
        for table in section.tables() {
            let (Some(i), Some(c)) = (table.column("Item"), table.column("Coverage")) else {
                return Err(ReportError::Malformed {
                    line: table.line,
                    message: "fixture table needs `Item` and `Coverage` columns".into(),
                });
            };
            for row in &table.rows {
                let item = canonical_item(&row.cells[i]).ok_or_else(|| ReportError::UnknownItem {
                    template: set.name.clone(),
                    item: row.cells[i].clone(),
                })?;
                let raw = row.cells[c].trim();
                let mark = if raw.is_empty() {
                    CoverageMark::NotApplicable
                } else {
                    CoverageMark::from_literal(raw).ok_or_else(|| ReportError::Malformed {
                        line: row.line,
                        message: format!("`{raw}` is not T, P, N or -"),
                    })?
                };
                set.items.insert(item.to_string(), mark);
            }
        }
        sets.push(set);
    }
    Ok(sets)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageCell {
    pub information_item: String,
    pub template: String,
    pub mark: CoverageMark,
}

/// One row per information item in canonical order, one column per template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageMatrix {
    pub templates: Vec<String>,
    pub rows: Vec<(String, Vec<CoverageMark>)>,
}

impl CoverageMatrix {
    pub fn cells(&self) -> impl Iterator<Item = CoverageCell> + '_ {
        self.rows.iter().flat_map(move |(item, marks)| {
            marks.iter().zip(&self.templates).map(move |(mark, template)| CoverageCell {
                information_item: item.clone(),
                template: template.clone(),
                mark: *mark,
            })
        })
    }

    pub fn mark(&self, item: &str, template: &str) -> Option<CoverageMark> {
        let col = self.templates.iter().position(|t| t == template)?;
        self.rows.iter().find(|(i, _)| i == item).map(|(_, marks)| marks[col])
    }

    /// The matrix in the document grammar, legend first.
    pub fn to_document(&self) -> Document {
        let mut doc = Document::default();
        doc.preamble.field("Legend", LEGEND);
        let mut table = Table::new(std::iter::once(ITEM_HEADER.to_string()).chain(self.templates.iter().cloned()));
        for (item, marks) in &self.rows {
            table.push(std::iter::once(item.clone()).chain(marks.iter().map(|m| m.cell().to_string())));
        }
        doc.push_section({
            let mut s = Section::new("Coverage");
            s.table(table);
            s
        });
        doc
    }

    pub fn render(&self) -> String {
        self.to_document().to_text()
    }
}

pub fn coverage_audit(templates: &[TemplateFieldSet]) -> Result<CoverageMatrix, ReportError> {
    if templates.is_empty() {
        return Err(ReportError::NoTemplates);
    }
    for t in templates {
        if let Some(item) = t.items.keys().find(|i| canonical_item(i) != Some(i.as_str())) {
            return Err(ReportError::UnknownItem {
                template: t.name.clone(),
                item: item.clone(),
            });
        }
    }
    Ok(CoverageMatrix {
        templates: templates.iter().map(|t| t.name.clone()).collect(),
        rows: INFORMATION_ITEMS
            .iter()
            .map(|item| (item.to_string(), templates.iter().map(|t| t.mark(item)).collect()))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderFormat {
    #[default]
    PlainText,
    Html,
}

pub fn render_document(project: &Project, kind: TemplateKind, format: RenderFormat) -> Result<String, ReportError> {
    let doc = template_document(project, kind, "working").ok_or(ReportError::AbsentTemplate(kind))?;
    Ok(match format {
        RenderFormat::PlainText => doc.to_text(),
        RenderFormat::Html => to_html(&doc, kind.title()),
    })
}

pub fn render_inspection_record(report: &InspectionReport) -> String {
    inspection_record_document(report).to_text()
}

fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("<br>"),
            c => out.push(c),
        }
    }
    out
}

fn html_section(out: &mut String, section: &Section) {
    for item in &section.items {
        match item {
            Item::Field(f) => {
                let _ = writeln!(out, "<p><strong>{}:</strong> {}</p>", escape_html(&f.key), escape_html(&f.value));
            }
            Item::Table(t) => {
                out.push_str("<table>\n<tr>");
                for h in &t.header {
                    let _ = write!(out, "<th>{}</th>", escape_html(h));
                }
                out.push_str("</tr>\n");
                for row in &t.rows {
                    out.push_str("<tr>");
                    for c in &row.cells {
                        let _ = write!(out, "<td>{}</td>", escape_html(c));
                    }
                    out.push_str("</tr>\n");
                }
                out.push_str("</table>\n");
            }
        }
    }
}

/// A single self-contained page; no external assets.
fn to_html(doc: &Document, title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>{0}</title>\n<style>\
         body{{font-family:sans-serif;margin:2em}}table{{border-collapse:collapse;margin:1em 0}}\
         th,td{{border:1px solid #999;padding:4px 8px;text-align:left;vertical-align:top}}\
         </style>\n</head>\n<body>\n<h1>{0}</h1>",
        escape_html(title)
    );
    html_section(&mut out, &doc.preamble);
    for section in &doc.sections {
        let _ = writeln!(out, "<h2>{}</h2>", escape_html(&section.name));
        html_section(&mut out, section);
    }
    out.push_str("</body>\n</html>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataSet;

    fn matrix() -> CoverageMatrix {
        coverage_audit(&DataSet::bundled().fixtures().unwrap()).unwrap()
    }

    #[test]
    fn fixture_cells_from_the_mapping_checklist() {
        let m = matrix();
        assert_eq!(m.templates, ["RL", "IoTUCD1", "PS", "SP", "IoTUCD2"]);
        assert_eq!(m.rows.len(), 21);
        assert_eq!(m.mark("Problem domain", "RL"), Some(CoverageMark::N));
        assert_eq!(m.mark("Stakeholders description", "PS"), Some(CoverageMark::T));
        assert_eq!(m.mark("Stakeholders description", "RL"), Some(CoverageMark::P));
        assert_eq!(m.mark("Project analyses", "PS"), Some(CoverageMark::P));
        assert!(m.render().contains(LEGEND));
    }

    #[test]
    fn all_totally_column() {
        let mut set = TemplateFieldSet::new("X");
        for item in INFORMATION_ITEMS {
            set.items.insert(item.to_string(), CoverageMark::T);
        }
        let m = coverage_audit(&[set]).unwrap();
        assert!(m.rows.iter().all(|(_, marks)| marks == &[CoverageMark::T]));
    }

    #[test]
    fn unknown_item_and_empty_input_fail() {
        let mut set = TemplateFieldSet::new("X");
        set.items.insert("Budget".into(), CoverageMark::T);
        assert!(matches!(coverage_audit(&[set]), Err(ReportError::UnknownItem { .. })));
        assert_eq!(coverage_audit(&[]), Err(ReportError::NoTemplates));
        let text = "== X ==\n| Item | Coverage |\n| Budget | T |\n";
        assert!(matches!(load_coverage_fixtures(text), Err(ReportError::UnknownItem { .. })));
    }

    #[test]
    fn absent_template_is_an_error() {
        let err = render_document(&Project::default(), TemplateKind::IoTCanvas, RenderFormat::PlainText).unwrap_err();
        assert_eq!(err.to_string(), "absent-template(IoTCanvas)");
    }

    #[test]
    fn html_escapes_markup() {
        let mut doc = Document::default();
        doc.preamble.field("Note", "a < b & c");
        let html = to_html(&doc, "T");
        assert!(html.contains("a &lt; b &amp; c"));
        assert!(!html.contains("<link") && !html.contains("<script"));
    }
}
