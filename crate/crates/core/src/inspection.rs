//! Checklist-based inspection of IoT scenario descriptions.
//!
//! A question set has a general part (project information and systemic
//! solution) and a specific part (non-functional IoT properties). Each `No`
//! verdict becomes one defect; the discrimination meeting then confirms or
//! discards defects.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::docformat::grammar::{parse_text, Document, Section};
use crate::literal::{literal_enum, Literal};
use crate::model::{ActorCategory, ArtifactKind, Identifier, IotScenario, Project, Verdict};

literal_enum! {
    pub enum QuestionPart {
        General => "General",
        Specific => "Specific",
    }
}

literal_enum! {
    pub enum DefectCategory {
        ProjectInfo => "ProjectInfo" ["project-info"],
        SystemicSolution => "SystemicSolution" ["systemic-solution"],
        NonFunctionalProperty => "NonFunctionalProperty" ["non-functional"],
    }
}

literal_enum! {
    pub enum DefectStatus {
        Open => "Open",
        Discussed => "Discussed",
        Corrected => "Corrected",
    }
}

literal_enum! {
    pub enum MeetingDecision {
        Confirm => "Confirm",
        Discard => "Discard",
    }
}

/// When a question applies to a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applicability {
    Always,
    HasActor(ActorCategory),
    UsesArrangement(Identifier),
    Not(Box<Applicability>),
}

impl Applicability {
    pub fn holds_for(&self, scenario: &IotScenario) -> bool {
        match self {
            Applicability::Always => true,
            Applicability::HasActor(category) => scenario
                .actors
                .iter()
                .any(|a| a.category.valid() == Some(*category)),
            Applicability::UsesArrangement(id) => scenario.arrangement_ids.contains(id),
            Applicability::Not(inner) => !inner.holds_for(scenario),
        }
    }

    /// Parses `always`, `has-actor <category>`, `uses <IIA>` and `not <predicate>`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        if text.is_empty() || text.eq_ignore_ascii_case("always") {
            return Ok(Applicability::Always);
        }
        let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        match head.to_ascii_lowercase().as_str() {
            "not" => Ok(Applicability::Not(Box::new(Applicability::parse(rest)?))),
            "has-actor" => ActorCategory::from_literal(rest)
                .map(Applicability::HasActor)
                .ok_or_else(|| format!("unknown actor category `{rest}`")),
            "uses" => match rest.parse::<Identifier>() {
                Ok(id) if id.kind == ArtifactKind::Arrangement => Ok(Applicability::UsesArrangement(id)),
                _ => Err(format!("`{rest}` is not an arrangement id")),
            },
            _ => Err(format!("unknown applicability predicate `{text}`")),
        }
    }
}

impl fmt::Display for Applicability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Applicability::Always => f.write_str("always"),
            Applicability::HasActor(c) => write!(f, "has-actor {c}"),
            Applicability::UsesArrangement(id) => write!(f, "uses {id}"),
            Applicability::Not(inner) => write!(f, "not {inner}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChecklistQuestion {
    pub number: u32,
    pub part: QuestionPart,
    pub text: String,
    pub hint: Option<String>,
    /// Defect category for general questions; `None` means systemic solution.
    pub tag: Option<DefectCategory>,
    pub applicability: Applicability,
    /// Question text is incomplete in the available source and must be
    /// replaced before the question is used for real inspections.
    pub placeholder: bool,
}

impl ChecklistQuestion {
    pub fn defect_category(&self) -> DefectCategory {
        match self.part {
            QuestionPart::Specific => DefectCategory::NonFunctionalProperty,
            QuestionPart::General => match self.tag {
                Some(DefectCategory::ProjectInfo) => DefectCategory::ProjectInfo,
                _ => DefectCategory::SystemicSolution,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuestionSetError {
    #[error("line {line}: question {number} is defined more than once")]
    DuplicateNumber { number: u32, line: usize },
    #[error("line {line}: question {number} has no text")]
    EmptyText { number: u32, line: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

const GENERAL_SECTION: &str = "General Questions";
const SPECIFIC_SECTION: &str = "Specific Questions";

/// Loads a question set; the result is sorted by question number.
pub fn load_question_set(text: &str) -> Result<Vec<ChecklistQuestion>, QuestionSetError> {
    let (doc, diags) = parse_text(text, "questions");
    if let Some(d) = diags.iter().find(|d| d.is_error()) {
        return Err(QuestionSetError::Malformed {
            line: d.line,
            message: d.message.clone(),
        });
    }
    let mut questions: Vec<ChecklistQuestion> = Vec::new();
    let mut lines: BTreeMap<u32, usize> = BTreeMap::new();
    for section in &doc.sections {
        let part = if section.name.eq_ignore_ascii_case(GENERAL_SECTION) {
            QuestionPart::General
        } else if section.name.eq_ignore_ascii_case(SPECIFIC_SECTION) {
            QuestionPart::Specific
        } else {
            return Err(QuestionSetError::Malformed {
                line: section.line,
                message: format!("unexpected section `{}`", section.name),
            });
        };
        for table in section.tables() {
            let col = |name: &str| table.column(name);
            let (Some(no), Some(question)) = (col("No"), col("Question")) else {
                return Err(QuestionSetError::Malformed {
                    line: table.line,
                    message: "question table needs `No` and `Question` columns".into(),
                });
            };
            let cell = |row: &[String], name: &str| col(name).map(|i| row[i].clone()).unwrap_or_default();
            for row in &table.rows {
                let number: u32 = row.cells[no].trim().parse().map_err(|_| QuestionSetError::Malformed {
                    line: row.line,
                    message: format!("`{}` is not a question number", row.cells[no]),
                })?;
                if lines.contains_key(&number) {
                    return Err(QuestionSetError::DuplicateNumber { number, line: row.line });
                }
                lines.insert(number, row.line);
                let text = row.cells[question].trim().to_string();
                if text.is_empty() {
                    return Err(QuestionSetError::EmptyText { number, line: row.line });
                }
                let hint = Some(cell(&row.cells, "Hint")).filter(|h| !h.is_empty());
                let tag_text = cell(&row.cells, "Tag");
                let tag = if tag_text.is_empty() {
                    None
                } else {
                    let tag = DefectCategory::from_literal(&tag_text).ok_or_else(|| QuestionSetError::Malformed {
                        line: row.line,
                        message: format!("unknown tag `{tag_text}`"),
                    })?;
                    if part == QuestionPart::Specific || tag == DefectCategory::NonFunctionalProperty {
                        return Err(QuestionSetError::Malformed {
                            line: row.line,
                            message: "only general questions take a project-info or systemic-solution tag".into(),
                        });
                    }
                    Some(tag)
                };
                let applicability = Applicability::parse(&cell(&row.cells, "Applies"))
                    .map_err(|message| QuestionSetError::Malformed { line: row.line, message })?;
                let placeholder = cell(&row.cells, "Status").eq_ignore_ascii_case("placeholder");
                questions.push(ChecklistQuestion {
                    number,
                    part,
                    text,
                    hint,
                    tag,
                    applicability,
                    placeholder,
                });
            }
        }
    }
    questions.sort_by_key(|q| q.number);
    Ok(questions)
}

/// Questions that apply to `scenario`, in numeric order.
pub fn applicable_questions<'q>(scenario: &IotScenario, questions: &'q [ChecklistQuestion]) -> Vec<&'q ChecklistQuestion> {
    let mut out: Vec<&ChecklistQuestion> = questions
        .iter()
        .filter(|q| q.applicability.holds_for(scenario))
        .collect();
    out.sort_by_key(|q| q.number);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub question_number: u32,
    pub scenario_id: Identifier,
    pub verdict: Verdict,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub id: u32,
    pub scenario_id: Identifier,
    pub question_number: u32,
    pub category: DefectCategory,
    pub description: String,
    pub status: DefectStatus,
}

/// An applicable question left unanswered for a scenario.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Omission {
    pub scenario_id: Identifier,
    pub question_number: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InspectionReport {
    pub session_label: String,
    pub inspector: String,
    pub answers: Vec<Answer>,
    pub defects: Vec<Defect>,
    pub meeting_done: bool,
    pub omissions: Vec<Omission>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InspectionError {
    #[error("question {question} was answered twice for {scenario}")]
    DuplicateAnswer { question: u32, scenario: Identifier },
    #[error("answer refers to unknown scenario {0}")]
    UnknownScenario(Identifier),
    #[error("answer refers to unknown question {0}")]
    UnknownQuestion(u32),
    #[error("the discrimination meeting for this report is already closed")]
    MeetingAlreadyDone,
    #[error("the discrimination meeting has not been held yet")]
    MeetingPending,
    #[error("no defect with id {0}")]
    UnknownDefect(u32),
    #[error("{0}")]
    Malformed(String),
}

/// Builds the inspection report for one session. Answers are ordered by
/// scenario then question number and each `No` yields one defect.
pub fn record_inspection(
    project: &Project,
    questions: &[ChecklistQuestion],
    answers: &[Answer],
    session_label: &str,
    inspector: &str,
) -> Result<InspectionReport, InspectionError> {
    let by_number: BTreeMap<u32, &ChecklistQuestion> = questions.iter().map(|q| (q.number, q)).collect();
    let mut seen = BTreeSet::new();
    for answer in answers {
        if project.scenario(&answer.scenario_id).is_none() {
            return Err(InspectionError::UnknownScenario(answer.scenario_id));
        }
        if !by_number.contains_key(&answer.question_number) {
            return Err(InspectionError::UnknownQuestion(answer.question_number));
        }
        if !seen.insert((answer.scenario_id, answer.question_number)) {
            return Err(InspectionError::DuplicateAnswer {
                question: answer.question_number,
                scenario: answer.scenario_id,
            });
        }
    }

    let mut ordered = answers.to_vec();
    ordered.sort_by_key(|a| (a.scenario_id, a.question_number));

    let defects = ordered
        .iter()
        .filter(|a| a.verdict == Verdict::No)
        .zip(1..)
        .map(|(answer, id)| {
            let question = by_number[&answer.question_number];
            let description = match answer.note.as_deref().map(str::trim) {
                Some(note) if !note.is_empty() => format!("{} Note: {note}", question.text),
                _ => question.text.clone(),
            };
            Defect {
                id,
                scenario_id: answer.scenario_id,
                question_number: answer.question_number,
                category: question.defect_category(),
                description,
                status: DefectStatus::Open,
            }
        })
        .collect();

    let mut omissions = Vec::new();
    let mut scenarios: Vec<&IotScenario> = project.scenarios.iter().collect();
    scenarios.sort_by_key(|s| s.id);
    for scenario in scenarios {
        for question in applicable_questions(scenario, questions) {
            if !seen.contains(&(scenario.id, question.number)) {
                omissions.push(Omission {
                    scenario_id: scenario.id,
                    question_number: question.number,
                });
            }
        }
    }

    Ok(InspectionReport {
        session_label: session_label.to_string(),
        inspector: inspector.to_string(),
        answers: ordered,
        defects,
        meeting_done: false,
        omissions,
    })
}

/// Applies the outcome of the discrimination meeting: confirmed defects are
/// marked discussed, discarded ones removed, undecided ones stay open.
pub fn close_discrimination(
    report: &InspectionReport,
    decisions: &BTreeMap<u32, MeetingDecision>,
) -> Result<InspectionReport, InspectionError> {
    if report.meeting_done {
        return Err(InspectionError::MeetingAlreadyDone);
    }
    if let Some(unknown) = decisions.keys().find(|id| !report.defects.iter().any(|d| d.id == **id)) {
        return Err(InspectionError::UnknownDefect(*unknown));
    }
    let mut closed = report.clone();
    closed.meeting_done = true;
    closed.defects.retain(|d| decisions.get(&d.id) != Some(&MeetingDecision::Discard));
    for defect in &mut closed.defects {
        if decisions.get(&defect.id) == Some(&MeetingDecision::Confirm) {
            defect.status = DefectStatus::Discussed;
        }
    }
    Ok(closed)
}

/// Marks defects as corrected once the scenario document has been fixed.
pub fn mark_corrected(report: &InspectionReport, ids: &[u32]) -> Result<InspectionReport, InspectionError> {
    if !report.meeting_done {
        return Err(InspectionError::MeetingPending);
    }
    let mut out = report.clone();
    for id in ids {
        let defect = out
            .defects
            .iter_mut()
            .find(|d| d.id == *id)
            .ok_or(InspectionError::UnknownDefect(*id))?;
        defect.status = DefectStatus::Corrected;
    }
    Ok(out)
}

/// Answers plus session metadata as read from an answer file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerSheet {
    pub session_label: String,
    pub inspector: String,
    pub answers: Vec<Answer>,
}

const ANSWERS_SECTION: &str = "Answers";

/// Reads an `answers-<session>.retiot` file.
pub fn parse_answer_sheet(text: &str) -> Result<AnswerSheet, InspectionError> {
    let (doc, diags) = parse_text(text, "answers");
    if let Some(d) = diags.iter().find(|d| d.is_error()) {
        return Err(InspectionError::Malformed(format!("line {}: {}", d.line, d.message)));
    }
    let field = |key: &str| doc.preamble.get(key).map(|f| f.value.clone()).unwrap_or_default();
    let mut answers = Vec::new();
    if let Some(section) = doc.section(ANSWERS_SECTION) {
        for table in section.tables() {
            let col = |name: &str| {
                table
                    .column(name)
                    .ok_or_else(|| InspectionError::Malformed(format!("line {}: answer table lacks `{name}`", table.line)))
            };
            let (scenario, question, verdict) = (col("Scenario")?, col("Question")?, col("Verdict")?);
            let note = table.column("Note");
            for row in &table.rows {
                let bad = |what: &str| InspectionError::Malformed(format!("line {}: {what}", row.line));
                answers.push(Answer {
                    scenario_id: row.cells[scenario].parse().map_err(|e| bad(&format!("{e}")))?,
                    question_number: row.cells[question]
                        .trim()
                        .trim_start_matches(['Q', 'q'])
                        .parse()
                        .map_err(|_| bad("bad question number"))?,
                    verdict: row.cells[verdict].parse().map_err(|e| bad(&format!("{e}")))?,
                    note: note.map(|i| row.cells[i].clone()).filter(|n| !n.is_empty()),
                });
            }
        }
    }
    Ok(AnswerSheet {
        session_label: field("Session"),
        inspector: field("Inspector"),
        answers,
    })
}

/// Renders answers in the answer-file format read by [`parse_answer_sheet`].
pub fn answer_sheet_document(sheet: &AnswerSheet) -> Document {
    use crate::docformat::grammar::Table;
    let mut doc = Document::default();
    doc.preamble.field("Session", sheet.session_label.clone());
    doc.preamble.field("Inspector", sheet.inspector.clone());
    let mut table = Table::new(["Scenario", "Question", "Verdict", "Note"]);
    for a in &sheet.answers {
        table.push([
            a.scenario_id.to_string(),
            a.question_number.to_string(),
            a.verdict.to_string(),
            a.note.clone().unwrap_or_default(),
        ]);
    }
    let mut section = Section::new(ANSWERS_SECTION);
    section.table(table);
    doc.push_section(section);
    doc
}

/// Reads a meeting decisions file (`| Defect | Decision |`).
pub fn parse_decisions(text: &str) -> Result<BTreeMap<u32, MeetingDecision>, InspectionError> {
    let (doc, diags) = parse_text(text, "decisions");
    if let Some(d) = diags.iter().find(|d| d.is_error()) {
        return Err(InspectionError::Malformed(format!("line {}: {}", d.line, d.message)));
    }
    let mut out = BTreeMap::new();
    for section in std::iter::once(&doc.preamble).chain(doc.sections.iter()) {
        for table in section.tables() {
            let (Some(defect), Some(decision)) = (table.column("Defect"), table.column("Decision")) else {
                continue;
            };
            for row in &table.rows {
                let bad = |what: String| InspectionError::Malformed(format!("line {}: {what}", row.line));
                let id: u32 = row.cells[defect]
                    .trim()
                    .trim_start_matches('D')
                    .parse()
                    .map_err(|_| bad(format!("`{}` is not a defect id", row.cells[defect])))?;
                let choice: MeetingDecision = row.cells[decision].parse().map_err(|e| bad(format!("{e}")))?;
                if out.insert(id, choice).is_some() {
                    return Err(bad(format!("defect {id} decided twice")));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataSet;
    use crate::model::Actor;

    fn project_with(ids: &[u32]) -> Project {
        let mut p = Project::default();
        for n in ids {
            let mut s = IotScenario::new(Identifier::scenario(*n), format!("scenario {n}"));
            s.arrangement_ids.push(Identifier::arrangement(1));
            s.related_fr_ids.push(Identifier::fr(1));
            p.scenarios.push(s);
        }
        p
    }

    fn defaults() -> Vec<ChecklistQuestion> {
        DataSet::bundled().questions().unwrap()
    }

    fn answer(q: u32, s: u32, verdict: Verdict) -> Answer {
        Answer {
            question_number: q,
            scenario_id: Identifier::scenario(s),
            verdict,
            note: None,
        }
    }

    #[test]
    fn default_set_has_the_legible_questions_verbatim() {
        let qs = defaults();
        assert_eq!(qs.len(), 32);
        let q = |n: u32| qs.iter().find(|q| q.number == n).unwrap();
        assert_eq!(q(1).text, "Has the overall application domain been established?");
        assert_eq!(q(3).text, "Is the type of data collected specified?");
        assert_eq!(q(3).hint.as_deref(), Some("Temperature, humidity, pollution"));
        assert_eq!(q(24).part, QuestionPart::Specific);
        assert!(q(24).text.contains("the specific context in which the system is embedded"));
        assert_eq!(
            q(28).text,
            "What kind of communication technology does the system use in the scenarios?"
        );
        assert_eq!(q(32).text, "Is it possible to identify the interaction between actors?");
        assert!((8..=23).all(|n| q(n).placeholder));
        assert!(qs.iter().filter(|q| q.number <= 23).all(|q| q.part == QuestionPart::General));
        assert!(qs.iter().filter(|q| q.number >= 24).all(|q| q.part == QuestionPart::Specific));
    }

    #[test]
    fn duplicate_and_empty_questions_are_rejected() {
        let dup = "== General Questions ==\n| No | Question |\n| 7 | A? |\n| 7 | B? |\n";
        assert!(matches!(load_question_set(dup), Err(QuestionSetError::DuplicateNumber { number: 7, .. })));
        let empty = "== General Questions ==\n| No | Question |\n| 7 |  |\n";
        assert!(matches!(load_question_set(empty), Err(QuestionSetError::EmptyText { number: 7, .. })));
    }

    #[test]
    fn applicability_filters_and_keeps_order() {
        let set = "== Specific Questions ==\n| No | Question | Applies |\n| 26 | B? | has-actor thing |\n| 25 | A? | |\n";
        let qs = load_question_set(set).unwrap();
        let mut s = IotScenario::new(Identifier::scenario(1), "t");
        s.actors.push(Actor::new("operator", ActorCategory::User));
        let numbers: Vec<u32> = applicable_questions(&s, &qs).iter().map(|q| q.number).collect();
        assert_eq!(numbers, [25]);
        s.actors.push(Actor::new("sensor", ActorCategory::Thing));
        let numbers: Vec<u32> = applicable_questions(&s, &qs).iter().map(|q| q.number).collect();
        assert_eq!(numbers, [25, 26]);
        assert!(applicable_questions(&s, &[]).is_empty());
        assert_eq!(applicable_questions(&s, &defaults()).len(), 32);
    }

    #[test]
    fn all_yes_gives_no_defects() {
        let p = project_with(&[1]);
        let qs = defaults();
        let answers: Vec<Answer> = qs.iter().map(|q| answer(q.number, 1, Verdict::Yes)).collect();
        let report = record_inspection(&p, &qs, &answers, "s1", "ana").unwrap();
        assert!(report.defects.is_empty());
        assert!(report.omissions.is_empty());
    }

    #[test]
    fn one_no_per_scenario_gives_one_defect_each() {
        let p = project_with(&[1, 2]);
        let qs = defaults();
        let answers = [answer(3, 2, Verdict::No), answer(3, 1, Verdict::No), answer(4, 1, Verdict::Yes)];
        let report = record_inspection(&p, &qs, &answers, "s1", "ana").unwrap();
        assert_eq!(report.defects.len(), 2);
        assert_eq!(report.defects[0].scenario_id, Identifier::scenario(1));
        assert_eq!(report.defects[1].scenario_id, Identifier::scenario(2));
        assert!(report.defects.iter().all(|d| d.description == "Is the type of data collected specified?"));
        assert!(report.defects.iter().all(|d| d.category == DefectCategory::SystemicSolution));
        assert_eq!(report.omissions.len(), 2 * 32 - 3);
    }

    #[test]
    fn tagged_and_specific_questions_get_their_category() {
        let p = project_with(&[1]);
        let qs = defaults();
        let answers = [answer(1, 1, Verdict::No), answer(28, 1, Verdict::No)];
        let report = record_inspection(&p, &qs, &answers, "s", "i").unwrap();
        assert_eq!(report.defects[0].category, DefectCategory::ProjectInfo);
        assert_eq!(report.defects[1].category, DefectCategory::NonFunctionalProperty);
    }

    #[test]
    fn duplicate_answers_and_unknown_ids_fail() {
        let p = project_with(&[1]);
        let qs = defaults();
        let dup = [answer(3, 1, Verdict::No), answer(3, 1, Verdict::Yes)];
        assert!(matches!(record_inspection(&p, &qs, &dup, "s", "i"), Err(InspectionError::DuplicateAnswer { .. })));
        assert!(matches!(
            record_inspection(&p, &qs, &[answer(3, 9, Verdict::No)], "s", "i"),
            Err(InspectionError::UnknownScenario(_))
        ));
        assert!(matches!(
            record_inspection(&p, &qs, &[answer(99, 1, Verdict::No)], "s", "i"),
            Err(InspectionError::UnknownQuestion(99))
        ));
    }

    #[test]
    fn meeting_confirms_and_discards() {
        let p = project_with(&[1]);
        let qs = defaults();
        let answers = [answer(2, 1, Verdict::No), answer(3, 1, Verdict::No), answer(4, 1, Verdict::No)];
        let report = record_inspection(&p, &qs, &answers, "s", "i").unwrap();

        let all: BTreeMap<u32, MeetingDecision> = (1..=3).map(|i| (i, MeetingDecision::Confirm)).collect();
        let confirmed = close_discrimination(&report, &all).unwrap();
        assert!(confirmed.meeting_done);
        assert!(confirmed.defects.iter().all(|d| d.status == DefectStatus::Discussed));

        let none: BTreeMap<u32, MeetingDecision> = (1..=3).map(|i| (i, MeetingDecision::Discard)).collect();
        let discarded = close_discrimination(&report, &none).unwrap();
        assert!(discarded.defects.is_empty() && discarded.meeting_done);

        let mixed = BTreeMap::from([(1, MeetingDecision::Confirm), (2, MeetingDecision::Discard), (3, MeetingDecision::Confirm)]);
        let closed = close_discrimination(&report, &mixed).unwrap();
        let ids: Vec<u32> = closed.defects.iter().map(|d| d.id).collect();
        assert_eq!(ids, [1, 3]);
        assert_eq!(closed.answers, report.answers);

        assert_eq!(close_discrimination(&closed, &mixed), Err(InspectionError::MeetingAlreadyDone));
        let unknown = BTreeMap::from([(42, MeetingDecision::Confirm)]);
        assert_eq!(close_discrimination(&report, &unknown), Err(InspectionError::UnknownDefect(42)));
    }

    #[test]
    fn answer_sheet_round_trips() {
        let sheet = AnswerSheet {
            session_label: "s1".into(),
            inspector: "Bia".into(),
            answers: vec![Answer {
                question_number: 3,
                scenario_id: Identifier::scenario(1),
                verdict: Verdict::No,
                note: Some("no data types | listed".into()),
            }],
        };
        let text = answer_sheet_document(&sheet).to_text();
        assert_eq!(parse_answer_sheet(&text).unwrap(), sheet);
    }

    #[test]
    fn decisions_file_parses() {
        let text = "== Decisions ==\n| Defect | Decision |\n| 1 | Confirm |\n| 2 | discard |\n";
        let d = parse_decisions(text).unwrap();
        assert_eq!(d[&1], MeetingDecision::Confirm);
        assert_eq!(d[&2], MeetingDecision::Discard);
    }
}
