//! Line-oriented sectioned text grammar shared by every `.retiot` file.
//!
//! ```text
//! # comment
//! Template: IoTProjectDetail
//!
//! == Functional Requirements ==
//! | ID | Description | Situation |
//! | FR01 | Collect temperature | Approved |
//! ```
//!
//! Fields before the first section form the preamble. Consecutive `|` rows
//! form one table whose first row is the header. In values and cells `\\`,
//! `\n` and `\|` escape a backslash, a newline and a pipe.

use std::fmt::Write as _;

use super::{Diagnostic, Severity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub cells: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Row>,
    pub line: usize,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            line: 0,
        }
    }

    pub fn push<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        let cells: Vec<String> = cells.into_iter().map(Into::into).collect();
        debug_assert_eq!(cells.len(), self.header.len(), "row width must match header");
        self.rows.push(Row { cells, line: 0 });
    }

    /// Index of the column whose header matches `name` case-insensitively.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h.eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Field(Field),
    Table(Table),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub items: Vec<Item>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section {
            name: name.into(),
            line: 0,
            items: Vec::new(),
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.items.push(Item::Field(Field {
            key: key.into(),
            value: value.into(),
            line: 0,
        }));
        self
    }

    pub fn table(&mut self, table: Table) -> &mut Self {
        self.items.push(Item::Table(table));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields().find(|f| f.key.eq_ignore_ascii_case(key))
    }

    pub fn fields(&self) -> impl Iterator<Item = &Field> {
        self.items.iter().filter_map(|i| match i {
            Item::Field(f) => Some(f),
            Item::Table(_) => None,
        })
    }

    pub fn tables(&self) -> impl Iterator<Item = &Table> {
        self.items.iter().filter_map(|i| match i {
            Item::Table(t) => Some(t),
            Item::Field(_) => None,
        })
    }

    /// The table whose first header cell is `first_column`.
    pub fn table_by_first_column(&self, first_column: &str) -> Option<&Table> {
        self.tables().find(|t| {
            t.header
                .first()
                .is_some_and(|h| h.eq_ignore_ascii_case(first_column))
        })
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// A parsed `.retiot` file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub preamble: Section,
    pub sections: Vec<Section>,
}

impl Document {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name.eq_ignore_ascii_case(name))
    }

    pub fn push_section(&mut self, section: Section) {
        self.sections.push(section);
    }

    /// Renders the document in canonical form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_items(&mut out, &self.preamble.items);
        for section in &self.sections {
            if !out.is_empty() {
                out.push('\n');
            }
            let _ = writeln!(out, "== {} ==", section.name);
            write_items(&mut out, &section.items);
        }
        out
    }
}

fn write_items(out: &mut String, items: &[Item]) {
    let mut previous_was_table = false;
    for item in items {
        match item {
            Item::Field(f) => {
                if previous_was_table {
                    out.push('\n');
                }
                if f.value.is_empty() {
                    let _ = writeln!(out, "{}:", f.key);
                } else {
                    let _ = writeln!(out, "{}: {}", f.key, escape(&f.value));
                }
                previous_was_table = false;
            }
            Item::Table(t) => {
                if previous_was_table {
                    out.push('\n');
                }
                write_row(out, &t.header);
                for row in &t.rows {
                    write_row(out, &row.cells);
                }
                previous_was_table = true;
            }
        }
    }
}

fn write_row(out: &mut String, cells: &[String]) {
    out.push('|');
    for cell in cells {
        out.push(' ');
        out.push_str(&escape(cell));
        out.push_str(" |");
    }
    out.push('\n');
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '|' => out.push_str("\\|"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out
}

pub fn unescape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('\\') => out.push('\\'),
            Some('|') => out.push('|'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Splits a `| a | b |` line on unescaped pipes. Returns `None` when the
/// line does not end with an unescaped pipe.
fn split_row(line: &str) -> Option<Vec<String>> {
    let body = line.strip_prefix('|')?;
    let mut cells = Vec::new();
    let mut current = String::new();
    let mut chars = body.chars();
    let mut closed = false;
    while let Some(c) = chars.next() {
        closed = false;
        match c {
            '\\' => {
                current.push('\\');
                if let Some(next) = chars.next() {
                    current.push(next);
                }
            }
            '|' => {
                cells.push(unescape(current.trim()));
                current.clear();
                closed = true;
            }
            c => current.push(c),
        }
    }
    if !closed || !current.trim().is_empty() {
        return None;
    }
    Some(cells)
}

/// Parses `text`; never fails. Problems are reported as diagnostics and the
/// offending lines are skipped.
pub fn parse_text(text: &str, file: &str) -> (Document, Vec<Diagnostic>) {
    let mut doc = Document::default();
    let mut diags = Vec::new();
    let mut current: Option<Section> = None;
    let mut skipping_duplicate = false;
    let mut open_table: Option<Table> = None;

    let error = |diags: &mut Vec<Diagnostic>, line: usize, rule: &str, message: String| {
        diags.push(Diagnostic::new(Severity::Error, file, line, 1, rule, message));
    };

    fn close_table(open: &mut Option<Table>, target: &mut Section) {
        if let Some(table) = open.take() {
            target.items.push(Item::Table(table));
        }
    }

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim();
        let target = current.as_mut().unwrap_or(&mut doc.preamble);

        if trimmed.is_empty() || trimmed.starts_with('#') {
            if trimmed.is_empty() {
                close_table(&mut open_table, target);
            }
            continue;
        }

        if trimmed.starts_with("==") && trimmed.ends_with("==") && trimmed.len() >= 4 {
            close_table(&mut open_table, target);
            let name = trimmed[2..trimmed.len() - 2].trim().to_string();
            if let Some(done) = current.take() {
                if !skipping_duplicate {
                    doc.sections.push(done);
                }
            }
            if name.is_empty() {
                error(&mut diags, line_no, "syntax", "section heading without a name".into());
                skipping_duplicate = true;
                current = Some(Section::default());
                continue;
            }
            skipping_duplicate = doc.sections.iter().any(|s| s.name.eq_ignore_ascii_case(&name));
            if skipping_duplicate {
                error(
                    &mut diags,
                    line_no,
                    "duplicate-section",
                    format!("section `{name}` appears more than once"),
                );
            }
            current = Some(Section {
                name,
                line: line_no,
                items: Vec::new(),
            });
            continue;
        }

        if trimmed.starts_with('|') {
            let Some(cells) = split_row(trimmed) else {
                error(&mut diags, line_no, "syntax", "table row must end with `|`".into());
                continue;
            };
            match open_table.as_mut() {
                None => {
                    if cells.iter().any(String::is_empty) {
                        error(&mut diags, line_no, "syntax", "table header has an empty cell".into());
                    }
                    open_table = Some(Table {
                        header: cells,
                        rows: Vec::new(),
                        line: line_no,
                    });
                }
                Some(table) if table.header.len() != cells.len() => {
                    error(
                        &mut diags,
                        line_no,
                        "table-width",
                        format!(
                            "row has {} cells but the header has {}",
                            cells.len(),
                            table.header.len()
                        ),
                    );
                }
                Some(table) => table.rows.push(Row {
                    cells,
                    line: line_no,
                }),
            }
            continue;
        }

        close_table(&mut open_table, target);
        match trimmed.split_once(':') {
            Some((key, value)) if !key.trim().is_empty() => {
                let key = key.trim().to_string();
                if target.get(&key).is_some() {
                    error(
                        &mut diags,
                        line_no,
                        "duplicate-key",
                        format!("key `{key}` appears more than once in this section"),
                    );
                    continue;
                }
                target.items.push(Item::Field(Field {
                    key,
                    value: unescape(value.trim()),
                    line: line_no,
                }));
            }
            _ => error(
                &mut diags,
                line_no,
                "syntax",
                format!("expected `Key: value`, a table row or a section heading, found `{trimmed}`"),
            ),
        }
    }

    let target = current.as_mut().unwrap_or(&mut doc.preamble);
    close_table(&mut open_table, target);
    if let Some(done) = current.take() {
        if !skipping_duplicate {
            doc.sections.push(done);
        }
    }
    (doc, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_preamble_sections_fields_and_tables() {
        let text = "Template: IoTProjectDetail\n\n== Project Description ==\nProblem domain: Data center\n\n== Functional Requirements ==\n| ID | Description |\n| FR01 | Collect \\| store |\n";
        let (doc, diags) = parse_text(text, "x.retiot");
        assert!(diags.is_empty(), "{diags:?}");
        assert_eq!(doc.preamble.get("template").unwrap().value, "IoTProjectDetail");
        let desc = doc.section("Project Description").unwrap();
        assert_eq!(desc.get("Problem domain").unwrap().line, 4);
        let table = doc.section("Functional Requirements").unwrap().tables().next().unwrap();
        assert_eq!(table.header, ["ID", "Description"]);
        assert_eq!(table.rows[0].cells, ["FR01", "Collect | store"]);
    }

    #[test]
    fn duplicate_section_is_an_error_with_position() {
        let (doc, diags) = parse_text("== A ==\nx: 1\n== A ==\ny: 2\n", "f.retiot");
        assert_eq!(doc.sections.len(), 1);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].rule, "duplicate-section");
        assert_eq!(diags[0].line, 3);
        assert_eq!(diags[0].file, "f.retiot");
    }

    #[test]
    fn garbage_lines_are_errors_not_panics() {
        let (_, diags) = parse_text("what is this\n| open row\n==\n", "g");
        assert_eq!(diags.len(), 3);
        assert!(diags.iter().all(|d| d.severity == Severity::Error));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let (doc, diags) = parse_text("== T ==\n| a | b |\n| 1 |\n| 1 | 2 |\n", "t");
        assert_eq!(diags[0].rule, "table-width");
        assert_eq!(doc.sections[0].tables().next().unwrap().rows.len(), 1);
    }

    #[test]
    fn blank_line_separates_tables() {
        let (doc, _) = parse_text("== T ==\n| a |\n| 1 |\n\n| b |\n| 2 |\n", "t");
        assert_eq!(doc.sections[0].tables().count(), 2);
    }

    #[test]
    fn render_then_parse_is_identity_on_content() {
        let mut doc = Document::default();
        doc.preamble.field("Template", "X");
        let mut s = Section::new("Body");
        s.field("Note", "line one\nline two with \\ and |");
        let mut t = Table::new(["k", "v"]);
        t.push(["a", ""]);
        t.push(["", "b|c"]);
        s.table(t.clone());
        s.table(t);
        s.field("Empty", "");
        doc.push_section(s);
        let text = doc.to_text();
        let (back, diags) = parse_text(&text, "r");
        assert!(diags.is_empty(), "{diags:?}\n{text}");
        assert_eq!(strip_lines(back), strip_lines(doc));
    }

    fn strip_lines(mut doc: Document) -> Document {
        for s in std::iter::once(&mut doc.preamble).chain(doc.sections.iter_mut()) {
            s.line = 0;
            for item in &mut s.items {
                match item {
                    Item::Field(f) => f.line = 0,
                    Item::Table(t) => {
                        t.line = 0;
                        t.rows.iter_mut().for_each(|r| r.line = 0);
                    }
                }
            }
        }
        doc
    }
}
