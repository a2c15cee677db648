//! On-disk representation of a project: one `.retiot` file per template,
//! parsed into a [`Project`] and written back without loss of semantics.

pub mod diff;
pub mod grammar;
mod read;
mod write;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::literal::Literal;
use crate::model::{validate_model, ModelIssue, Project, TemplateKind, VersionSnapshot};

pub use diff::{apply_changes, diff_versions, ArtifactChange, ChangeSet, FieldChange};
pub use grammar::{parse_text, Document, Section, Table};
pub use read::{read_inspection_record, read_template};
pub use write::{inspection_record_document, template_document, template_documents};

pub const EXTENSION: &str = "retiot";
pub const MANIFEST_FILE: &str = "project.retiot";
pub const CHECKLIST_DIR: &str = "checklists";
pub const VERSIONS_DIR: &str = "versions";

/// Root-level files that hold tool data or session inputs rather than
/// project artifacts.
const RESERVED_FILES: &[&str] = &[
    "arrangements.retiot",
    "stages.retiot",
    "scenariotcheck-questions.retiot",
    "mandatory-fields.retiot",
    "table1-fixtures.retiot",
];
const RESERVED_PREFIXES: &[&str] = &["answers-", "decisions-"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned parser finding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub rule: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        file: &str,
        line: usize,
        column: usize,
        rule: &str,
        message: impl Into<String>,
    ) -> Self {
        Diagnostic {
            severity,
            file: file.to_string(),
            line,
            column,
            rule: rule.to_string(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}:{}: {level}[{}]: {}",
            self.file, self.line, self.column, self.rule, self.message
        )
    }
}

/// One template file: its kind, where it lives and its parsed body.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceDocument {
    pub template_kind: TemplateKind,
    pub path: PathBuf,
    pub version_label: String,
    pub body: Document,
}

/// Relative path of a single-instance template file.
pub fn template_file_name(kind: TemplateKind) -> Option<&'static str> {
    Some(match kind {
        TemplateKind::IoTCanvas => "canvas.retiot",
        TemplateKind::FeasibilityAnalysis => "feasibility.retiot",
        TemplateKind::RequirementsChecklist => "checklists/requirements-checklist.retiot",
        TemplateKind::IoTProjectDetail => "iot-project-detail.retiot",
        TemplateKind::IoTSolutionProposal => "iot-solution-proposal.retiot",
        TemplateKind::ChangeAnalysisReport => "change-analysis.retiot",
        TemplateKind::IoTUseCaseDescription => "iot-use-cases.retiot",
        TemplateKind::DiagramAndUseCasesChecklist => {
            "checklists/diagram-and-use-cases-checklist.retiot"
        }
        TemplateKind::VerificationChecklist => "checklists/verification-checklist.retiot",
        TemplateKind::InspectionRecord => return None,
    })
}

pub fn inspection_file_name(session_label: &str) -> String {
    format!("{CHECKLIST_DIR}/inspection-{session_label}.{EXTENSION}")
}

fn kind_from_file_name(relative: &str) -> Option<TemplateKind> {
    if let Some(name) = relative.strip_prefix("checklists/") {
        if name.starts_with("inspection-") {
            return Some(TemplateKind::InspectionRecord);
        }
    }
    TemplateKind::ALL
        .iter()
        .copied()
        .find(|k| template_file_name(*k) == Some(relative))
}

/// Labels name directories and files, so they are restricted to a
/// portable character set.
pub fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && label != "."
        && label != ".."
        && label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'))
}

/// Parses every artifact file below `root` into a best-effort project.
pub fn parse_project(root: &Path) -> (Project, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let project = parse_tree(root, true, &mut diags);
    diags.sort();
    (project, diags)
}

fn rel(root: &Path, path: &Path) -> String {
    path.strip_prefix(root)
        .unwrap_or(path)
        .to_string_lossy()
        .replace('\\', "/")
}

fn list_retiot(dir: &Path, diags: &mut Vec<Diagnostic>, shown: &str) -> Vec<PathBuf> {
    let entries = match fs::read_dir(dir) {
        Ok(entries) => entries,
        Err(err) => {
            diags.push(Diagnostic::new(
                Severity::Error,
                shown,
                0,
                0,
                "unreadable",
                format!("cannot list directory: {err}"),
            ));
            return Vec::new();
        }
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == EXTENSION))
        .collect();
    files.sort();
    files
}

fn is_reserved(file_name: &str) -> bool {
    RESERVED_FILES.contains(&file_name) || RESERVED_PREFIXES.iter().any(|p| file_name.starts_with(p))
}

fn parse_tree(root: &Path, with_versions: bool, diags: &mut Vec<Diagnostic>) -> Project {
    let shown_root = root.display().to_string();
    if !root.is_dir() {
        diags.push(Diagnostic::new(
            Severity::Error,
            &shown_root,
            0,
            0,
            "unreadable",
            "project root is not a readable directory",
        ));
        return Project::default();
    }

    let mut files = list_retiot(root, diags, &shown_root);
    files.retain(|p| {
        let name = p.file_name().map(|n| n.to_string_lossy().to_string()).unwrap_or_default();
        !is_reserved(&name)
    });
    let checklist_dir = root.join(CHECKLIST_DIR);
    if checklist_dir.is_dir() {
        files.extend(list_retiot(&checklist_dir, diags, &rel(root, &checklist_dir)));
    }

    let mut manifest: Option<(String, Document)> = None;
    let mut templates: Vec<(String, TemplateKind, Document)> = Vec::new();
    for path in &files {
        let shown = rel(root, path);
        let text = match fs::read(path) {
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => text,
                Err(_) => {
                    diags.push(Diagnostic::new(Severity::Error, &shown, 1, 1, "unreadable", "file is not valid UTF-8"));
                    continue;
                }
            },
            Err(err) => {
                diags.push(Diagnostic::new(Severity::Error, &shown, 1, 1, "unreadable", format!("cannot read file: {err}")));
                continue;
            }
        };
        let (doc, mut parse_diags) = parse_text(&text, &shown);
        diags.append(&mut parse_diags);
        if shown == MANIFEST_FILE {
            manifest = Some((shown, doc));
            continue;
        }
        match resolve_kind(&shown, &doc, diags) {
            Some(kind) => {
                let duplicate = kind != TemplateKind::InspectionRecord
                    && templates.iter().any(|(_, k, _)| *k == kind);
                if duplicate {
                    let line = doc.preamble.get("Template").map_or(1, |f| f.line);
                    diags.push(Diagnostic::new(
                        Severity::Error,
                        &shown,
                        line,
                        1,
                        "duplicate-template",
                        format!("a {kind} document was already loaded"),
                    ));
                } else {
                    templates.push((shown, kind, doc));
                }
            }
            None => continue,
        }
    }

    if manifest.is_none() && templates.is_empty() {
        diags.push(Diagnostic::new(
            Severity::Warning,
            &shown_root,
            0,
            0,
            "no-artifacts",
            "no project artifacts found",
        ));
    }

    let mut project = Project::default();
    let mut version_labels = Vec::new();
    if let Some((file, doc)) = &manifest {
        version_labels = read::read_manifest(doc, file, &mut project, diags);
    }
    for (file, kind, doc) in &templates {
        read::read_template(doc, *kind, file, &mut project, diags);
    }
    project.inspections.sort_by(|a, b| a.session_label.cmp(&b.session_label));
    project.checklists.sort_by_key(|c| c.kind);

    if with_versions {
        let versions_dir = root.join(VERSIONS_DIR);
        for (label, line) in version_labels {
            let dir = versions_dir.join(&label);
            if !is_valid_label(&label) || !dir.is_dir() {
                diags.push(Diagnostic::new(
                    Severity::Error,
                    MANIFEST_FILE,
                    line,
                    1,
                    "missing-version",
                    format!("version `{label}` has no directory under {VERSIONS_DIR}/"),
                ));
                continue;
            }
            let mut inner = Vec::new();
            let snapshot = parse_tree(&dir, false, &mut inner);
            for mut d in inner {
                d.file = format!("{VERSIONS_DIR}/{label}/{}", rel(&dir, Path::new(&d.file)));
                diags.push(d);
            }
            project.versions.push(VersionSnapshot {
                label,
                project: Box::new(snapshot),
            });
        }
        if versions_dir.is_dir() {
            if let Ok(entries) = fs::read_dir(&versions_dir) {
                let mut unlisted: Vec<String> = entries
                    .filter_map(Result::ok)
                    .filter(|e| e.path().is_dir())
                    .map(|e| e.file_name().to_string_lossy().to_string())
                    .filter(|name| !project.versions.iter().any(|v| &v.label == name))
                    .collect();
                unlisted.sort();
                for name in unlisted {
                    diags.push(Diagnostic::new(
                        Severity::Warning,
                        &format!("{VERSIONS_DIR}/{name}"),
                        0,
                        0,
                        "unlisted-version",
                        "snapshot directory is not listed in project.retiot and was ignored",
                    ));
                }
            }
        }
    }
    project
}

fn resolve_kind(file: &str, doc: &Document, diags: &mut Vec<Diagnostic>) -> Option<TemplateKind> {
    let by_name = kind_from_file_name(file);
    match doc.preamble.get("Template") {
        Some(field) => match TemplateKind::from_literal(&field.value) {
            Some(kind) => {
                if by_name.is_some_and(|n| n != kind) {
                    diags.push(Diagnostic::new(
                        Severity::Warning,
                        file,
                        field.line,
                        1,
                        "template-mismatch",
                        format!("file name suggests {} but the document declares {kind}", by_name.unwrap()),
                    ));
                }
                Some(kind)
            }
            None => {
                diags.push(Diagnostic::new(
                    Severity::Error,
                    file,
                    field.line,
                    1,
                    "unknown-template",
                    format!("`{}` is not one of the ten template kinds", field.value),
                ));
                None
            }
        },
        None => {
            if by_name.is_none() {
                diags.push(Diagnostic::new(
                    Severity::Error,
                    file,
                    1,
                    1,
                    "unknown-template",
                    "document declares no `Template:` and its file name is not a known template",
                ));
            }
            by_name
        }
    }
}

/// A serialized file: path relative to the project root and its text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: PathBuf,
    pub text: String,
}

#[derive(Debug, thiserror::Error)]
pub enum SerializeError {
    #[error("model has {} blocking issue(s); first: {}", .0.len(), .0[0])]
    InvalidModel(Vec<ModelIssue>),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Serializes a consistent project into its set of files. Refuses models
/// that fail [`validate_model`].
pub fn serialize_project(project: &Project) -> Result<Vec<SourceFile>, SerializeError> {
    let issues = validate_model(project);
    if !issues.is_empty() {
        return Err(SerializeError::InvalidModel(issues));
    }
    Ok(files_for(project, "working", true))
}

fn files_for(project: &Project, version_label: &str, with_versions: bool) -> Vec<SourceFile> {
    let mut files = vec![SourceFile {
        path: PathBuf::from(MANIFEST_FILE),
        text: write::manifest_document(project, with_versions).to_text(),
    }];
    for doc in template_documents(project, version_label) {
        files.push(SourceFile {
            path: doc.path,
            text: doc.body.to_text(),
        });
    }
    if with_versions {
        for snapshot in &project.versions {
            for file in files_for(&snapshot.project, &snapshot.label, false) {
                files.push(SourceFile {
                    path: Path::new(VERSIONS_DIR).join(&snapshot.label).join(file.path),
                    text: file.text,
                });
            }
        }
    }
    files
}

fn write_files(dir: &Path, files: &[SourceFile]) -> Result<(), SerializeError> {
    for file in files {
        let path = dir.join(&file.path);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|source| SerializeError::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        fs::write(&path, &file.text).map_err(|source| SerializeError::Io { path, source })?;
    }
    Ok(())
}

/// Writes the project below `dir`, replacing any previously written
/// artifact files (tool data files are left alone).
pub fn write_project(project: &Project, dir: &Path) -> Result<(), SerializeError> {
    let files = serialize_project(project)?;
    remove_artifacts(dir).map_err(|source| SerializeError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    write_files(dir, &files)
}

fn remove_artifacts(dir: &Path) -> std::io::Result<()> {
    if !dir.exists() {
        return Ok(());
    }
    for sub in [dir.to_path_buf(), dir.join(CHECKLIST_DIR)] {
        if !sub.is_dir() {
            continue;
        }
        for entry in fs::read_dir(&sub)? {
            let path = entry?.path();
            let name = path.file_name().map(|n| n.to_string_lossy().to_string()).unwrap_or_default();
            if path.is_file() && path.extension().is_some_and(|e| e == EXTENSION) && !is_reserved(&name) {
                fs::remove_file(&path)?;
            }
        }
    }
    let versions = dir.join(VERSIONS_DIR);
    if versions.is_dir() {
        fs::remove_dir_all(&versions)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VersionError {
    #[error("version label `{0}` is already used")]
    DuplicateLabel(String),
    #[error("`{0}` is not a valid version label (letters, digits, `.`, `_`, `-`)")]
    InvalidLabel(String),
    #[error("no version labelled `{0}`")]
    UnknownLabel(String),
}

/// Appends an immutable snapshot of the current model.
pub fn snapshot_version<'p>(project: &'p mut Project, label: &str) -> Result<&'p VersionSnapshot, VersionError> {
    if !is_valid_label(label) {
        return Err(VersionError::InvalidLabel(label.to_string()));
    }
    if project.versions.iter().any(|v| v.label == label) {
        return Err(VersionError::DuplicateLabel(label.to_string()));
    }
    let mut copy = project.clone();
    copy.versions.clear();
    project.versions.push(VersionSnapshot {
        label: label.to_string(),
        project: Box::new(copy),
    });
    Ok(project.versions.last().expect("just pushed"))
}

pub fn find_version<'p>(project: &'p Project, label: &str) -> Result<&'p VersionSnapshot, VersionError> {
    project
        .versions
        .iter()
        .find(|v| v.label == label)
        .ok_or_else(|| VersionError::UnknownLabel(label.to_string()))
}

/// Writes a new snapshot to disk: the snapshot directory plus the updated
/// manifest. Template files of the working copy are not touched.
pub fn write_snapshot(project: &Project, label: &str, dir: &Path) -> Result<(), SerializeError> {
    let issues = validate_model(project);
    if !issues.is_empty() {
        return Err(SerializeError::InvalidModel(issues));
    }
    let snapshot = project
        .versions
        .iter()
        .find(|v| v.label == label)
        .expect("snapshot must exist before it is written");
    let base = Path::new(VERSIONS_DIR).join(label);
    let mut files: Vec<SourceFile> = files_for(&snapshot.project, label, false)
        .into_iter()
        .map(|f| SourceFile {
            path: base.join(f.path),
            text: f.text,
        })
        .collect();
    files.push(SourceFile {
        path: PathBuf::from(MANIFEST_FILE),
        text: write::manifest_document(project, true).to_text(),
    });
    write_files(dir, &files)
}

/// The whole model as one JSON document (export only).
pub fn export_json(project: &Project) -> String {
    serde_json::to_string_pretty(project).expect("model serializes to JSON")
}
