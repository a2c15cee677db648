//! Bundled reference data with a per-file directory override.

use std::path::{Path, PathBuf};

use crate::gates::{load_mandatory_fields, load_stage_definitions, GateConfig, MandatoryFields, StageDataError, StageDefinition};
use crate::iia::{load_arrangement_registry, ArrangementRegistry, RegistryError};
use crate::inspection::{load_question_set, ChecklistQuestion, QuestionSetError};
use crate::report::{load_coverage_fixtures, ReportError, TemplateFieldSet};

pub const DATA_ENV: &str = "RETIOT_DATA";

pub const QUESTIONS_FILE: &str = "scenariotcheck-questions.retiot";
pub const ARRANGEMENTS_FILE: &str = "arrangements.retiot";
pub const STAGES_FILE: &str = "stages.retiot";
pub const MANDATORY_FIELDS_FILE: &str = "mandatory-fields.retiot";
pub const FIXTURES_FILE: &str = "table1-fixtures.retiot";

const BUNDLED: [(&str, &str); 5] = [
    (QUESTIONS_FILE, include_str!("../data/scenariotcheck-questions.retiot")),
    (ARRANGEMENTS_FILE, include_str!("../data/arrangements.retiot")),
    (STAGES_FILE, include_str!("../data/stages.retiot")),
    (MANDATORY_FIELDS_FILE, include_str!("../data/mandatory-fields.retiot")),
    (FIXTURES_FILE, include_str!("../data/table1-fixtures.retiot")),
];

pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("no data file named {0}")]
    Unknown(String),
    #[error("{file}: {source}")]
    Questions { file: String, source: QuestionSetError },
    #[error("{file}: {source}")]
    Registry { file: String, source: RegistryError },
    #[error("{file}: {source}")]
    Stages { file: String, source: StageDataError },
    #[error("{file}: {source}")]
    Fixtures { file: String, source: ReportError },
}

/// Source of data files: an optional directory whose files shadow the
/// bundled ones one by one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DataSet {
    pub dir: Option<PathBuf>,
}

impl DataSet {
    pub fn bundled() -> Self {
        DataSet { dir: None }
    }

    pub fn from_dir(dir: impl Into<PathBuf>) -> Self {
        DataSet { dir: Some(dir.into()) }
    }

    /// Honors `RETIOT_DATA` when set and non-empty.
    pub fn from_env() -> Self {
        match std::env::var_os(DATA_ENV) {
            Some(dir) if !dir.is_empty() => DataSet::from_dir(dir),
            _ => DataSet::bundled(),
        }
    }

    pub fn text(&self, name: &str) -> Result<String, DataError> {
        if let Some(dir) = &self.dir {
            let path = dir.join(name);
            if path.is_file() {
                return std::fs::read_to_string(&path).map_err(|source| DataError::Io { path, source });
            }
        }
        bundled_text(name)
            .map(str::to_string)
            .ok_or_else(|| DataError::Unknown(name.to_string()))
    }

    pub fn questions(&self) -> Result<Vec<ChecklistQuestion>, DataError> {
        load_question_set(&self.text(QUESTIONS_FILE)?).map_err(|source| DataError::Questions {
            file: QUESTIONS_FILE.into(),
            source,
        })
    }

    pub fn registry(&self) -> Result<ArrangementRegistry, DataError> {
        load_arrangement_registry(&self.text(ARRANGEMENTS_FILE)?).map_err(|source| DataError::Registry {
            file: ARRANGEMENTS_FILE.into(),
            source,
        })
    }

    pub fn stages(&self) -> Result<Vec<StageDefinition>, DataError> {
        load_stage_definitions(&self.text(STAGES_FILE)?).map_err(|source| DataError::Stages {
            file: STAGES_FILE.into(),
            source,
        })
    }

    /// A project's own `mandatory-fields.retiot` takes precedence.
    pub fn mandatory_fields(&self, project_root: Option<&Path>) -> Result<MandatoryFields, DataError> {
        let text = match project_root.map(|r| r.join(MANDATORY_FIELDS_FILE)) {
            Some(path) if path.is_file() => {
                std::fs::read_to_string(&path).map_err(|source| DataError::Io { path, source })?
            }
            _ => self.text(MANDATORY_FIELDS_FILE)?,
        };
        load_mandatory_fields(&text).map_err(|source| DataError::Stages {
            file: MANDATORY_FIELDS_FILE.into(),
            source,
        })
    }

    pub fn gate_config(&self) -> Result<GateConfig, DataError> {
        self.gate_config_for(None)
    }

    pub fn gate_config_for(&self, project_root: Option<&Path>) -> Result<GateConfig, DataError> {
        Ok(GateConfig {
            stages: self.stages()?,
            mandatory: self.mandatory_fields(project_root)?,
        })
    }

    pub fn fixtures(&self) -> Result<Vec<TemplateFieldSet>, DataError> {
        load_coverage_fixtures(&self.text(FIXTURES_FILE)?).map_err(|source| DataError::Fixtures {
            file: FIXTURES_FILE.into(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_loads() {
        let data = DataSet::bundled();
        assert_eq!(data.questions().unwrap().len(), 32);
        assert_eq!(data.registry().unwrap().len(), 9);
        assert_eq!(data.stages().unwrap().len(), 3);
        assert_eq!(data.fixtures().unwrap().len(), 5);
        assert!(data.mandatory_fields(None).unwrap().len() >= 10);
    }

    #[test]
    fn directory_shadows_single_files() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join(QUESTIONS_FILE),
            "== Specific Questions ==\n| No | Question |\n| 24 | Only one? |\n",
        )
        .unwrap();
        let data = DataSet::from_dir(dir.path());
        assert_eq!(data.questions().unwrap().len(), 1);
        assert_eq!(data.stages().unwrap().len(), 3);
    }
}
