//! Semantic model of a RET_IoT requirements document set.
//!
//! Values here are plain data: a [`Project`] may be internally inconsistent
//! (dangling references, unknown enum literals) and [`validate_model`]
//! reports every such problem as data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::inspection::InspectionReport;
use crate::literal::{literal_enum, Choice, Literal};
use crate::trace::ChangeAnalysisReport;

literal_enum! {
    /// The kinds of identified artifacts.
    pub enum ArtifactKind {
        Need => "NEED",
        Stakeholder => "STK",
        Fr => "FR",
        Nfr => "NFR",
        Br => "BR",
        Scenario => "IoT-S",
        UseCase => "IoT-UC",
        Arrangement => "IIA",
        ChangeRequest => "CR",
    }
}

impl ArtifactKind {
    fn prefix(self) -> &'static str {
        match self {
            ArtifactKind::Need => "NEED",
            ArtifactKind::Stakeholder => "STK",
            ArtifactKind::Fr => "FR",
            ArtifactKind::Nfr => "NFR",
            ArtifactKind::Br => "BR",
            ArtifactKind::Scenario => "IoT S",
            ArtifactKind::UseCase => "IoT UC",
            ArtifactKind::Arrangement => "IIA-",
            ArtifactKind::ChangeRequest => "CR",
        }
    }

    pub fn is_requirement(self) -> bool {
        matches!(self, ArtifactKind::Fr | ArtifactKind::Nfr)
    }
}

/// Number of IoT interaction arrangements; their ids are `IIA-01`..`IIA-09`.
pub const ARRANGEMENT_COUNT: u32 = 9;

/// Artifact identifier such as `FR01`, `IoT S03` or `IIA-01`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identifier {
    pub kind: ArtifactKind,
    pub number: u32,
}

impl Identifier {
    pub const fn new(kind: ArtifactKind, number: u32) -> Self {
        Identifier { kind, number }
    }

    pub const fn fr(number: u32) -> Self {
        Self::new(ArtifactKind::Fr, number)
    }

    pub const fn scenario(number: u32) -> Self {
        Self::new(ArtifactKind::Scenario, number)
    }

    pub const fn use_case(number: u32) -> Self {
        Self::new(ArtifactKind::UseCase, number)
    }

    pub const fn arrangement(number: u32) -> Self {
        Self::new(ArtifactKind::Arrangement, number)
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:02}", self.kind.prefix(), self.number)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdError {
    #[error("`{0}` is not a recognised identifier")]
    Unrecognised(String),
    #[error("`{0}` has no positive number")]
    BadNumber(String),
    #[error("`{0}` is outside IIA-01..IIA-09")]
    ArrangementRange(String),
}

impl FromStr for Identifier {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        // longest prefixes first so that `NFR` is not read as `N` + `FR`
        const PREFIXES: &[(&str, ArtifactKind)] = &[
            ("IoTUC-", ArtifactKind::UseCase),
            ("IoTUC", ArtifactKind::UseCase),
            ("IoTS-", ArtifactKind::Scenario),
            ("IoT-S", ArtifactKind::Scenario),
            ("IoTS", ArtifactKind::Scenario),
            ("IIA-", ArtifactKind::Arrangement),
            ("IIA", ArtifactKind::Arrangement),
            ("NEED", ArtifactKind::Need),
            ("NFR", ArtifactKind::Nfr),
            ("STK", ArtifactKind::Stakeholder),
            ("FR", ArtifactKind::Fr),
            ("BR", ArtifactKind::Br),
            ("RN", ArtifactKind::Br),
            ("CR", ArtifactKind::ChangeRequest),
        ];
        let (kind, digits) = PREFIXES
            .iter()
            .find_map(|(p, k)| compact.strip_prefix(p).map(|rest| (*k, rest)))
            .ok_or_else(|| IdError::Unrecognised(text.to_string()))?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(IdError::Unrecognised(text.to_string()));
        }
        let number: u32 = digits
            .parse()
            .map_err(|_| IdError::BadNumber(text.to_string()))?;
        if number == 0 {
            return Err(IdError::BadNumber(text.to_string()));
        }
        if kind == ArtifactKind::Arrangement && number > ARRANGEMENT_COUNT {
            return Err(IdError::ArrangementRange(text.to_string()));
        }
        Ok(Identifier { kind, number })
    }
}

impl Serialize for Identifier {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Identifier {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

literal_enum! {
    pub enum Situation {
        Proposed => "Proposed",
        Approved => "Approved",
        Canceled => "Canceled" ["Cancelled"],
    }
}

literal_enum! {
    /// Ordinal scale shared by priority, cost, effort, interest and influence.
    pub enum Level {
        High => "High",
        Medium => "Medium",
        Low => "Low",
    }
}

literal_enum! {
    pub enum IotCharacteristic {
        Identification => "Identification",
        Sensing => "Sensing",
        Actuation => "Actuation" ["Performance"],
        Connectivity => "Connectivity",
        Processing => "Processing",
    }
}

literal_enum! {
    pub enum NeedOrigin {
        Business => "Business",
        Stakeholder => "Stakeholder",
    }
}

literal_enum! {
    pub enum ActorCategory {
        User => "User" ["Users"],
        Thing => "Thing" ["Things"],
        SoftwareSystem => "SoftwareSystem" ["Software systems"],
    }
}

literal_enum! {
    pub enum Methodology {
        Traditional => "Traditional",
        Agile => "Agile",
    }
}

literal_enum! {
    pub enum Verdict {
        Yes => "Yes" ["Y"],
        No => "No" ["N"],
        NotApplicable => "NotApplicable" ["NA", "N/A"],
    }
}

literal_enum! {
    pub enum AgreementMethod {
        Signature => "Signature",
        EmailCopy => "EmailCopy" ["Email"],
    }
}

literal_enum! {
    /// Exit artifact of each stage.
    pub enum Milestone {
        FeasibilityAnalysis => "FeasibilityAnalysis",
        LowLevelPrototype => "LowLevelPrototype" ["Low-fidelity prototype"],
        HighLevelPrototype => "HighLevelPrototype" ["Evolved prototype"],
    }
}

impl Milestone {
    pub fn stage(self) -> u8 {
        match self {
            Milestone::FeasibilityAnalysis => 1,
            Milestone::LowLevelPrototype => 2,
            Milestone::HighLevelPrototype => 3,
        }
    }
}

literal_enum! {
    /// The ten document templates of the construction process.
    pub enum TemplateKind {
        IoTCanvas => "IoTCanvas" ["canvas"],
        FeasibilityAnalysis => "FeasibilityAnalysis" ["IoTProjectFeasibilityAnalysis", "feasibility"],
        RequirementsChecklist => "RequirementsChecklist",
        IoTProjectDetail => "IoTProjectDetail" ["ProjectScope"],
        IoTSolutionProposal => "IoTSolutionProposal" ["SolutionProposal"],
        ChangeAnalysisReport => "ChangeAnalysisReport" ["change-analysis"],
        IoTUseCaseDescription => "IoTUseCaseDescription" ["iot-use-cases", "IoTUseCasesDescription"],
        DiagramAndUseCasesChecklist => "DiagramAndUseCasesChecklist" ["IoTDiagramAndUseCasesChecklist"],
        VerificationChecklist => "VerificationChecklist",
        InspectionRecord => "InspectionRecord",
    }
}

impl TemplateKind {
    pub fn title(self) -> &'static str {
        match self {
            TemplateKind::IoTCanvas => "IoT Canvas",
            TemplateKind::FeasibilityAnalysis => "IoT Project Feasibility Analysis",
            TemplateKind::RequirementsChecklist => "Requirements Checklist",
            TemplateKind::IoTProjectDetail => "IoT Project Detail",
            TemplateKind::IoTSolutionProposal => "IoT Solution Proposal",
            TemplateKind::ChangeAnalysisReport => "Change Analysis Report",
            TemplateKind::IoTUseCaseDescription => "IoT Use Case Description",
            TemplateKind::DiagramAndUseCasesChecklist => "IoT Diagram and Use Cases Checklist",
            TemplateKind::VerificationChecklist => "Verification Checklist",
            TemplateKind::InspectionRecord => "Inspection Record",
        }
    }

    /// The checklist flavour stored by this template, if it is a checklist.
    pub fn checklist_kind(self) -> Option<ChecklistKind> {
        match self {
            TemplateKind::RequirementsChecklist => Some(ChecklistKind::Requirements),
            TemplateKind::VerificationChecklist => Some(ChecklistKind::Verification),
            TemplateKind::DiagramAndUseCasesChecklist => Some(ChecklistKind::DiagramAndUseCases),
            _ => None,
        }
    }
}

literal_enum! {
    pub enum ChecklistKind {
        Requirements => "Requirements",
        Verification => "Verification",
        DiagramAndUseCases => "DiagramAndUseCases",
    }
}

impl ChecklistKind {
    pub fn template(self) -> TemplateKind {
        match self {
            ChecklistKind::Requirements => TemplateKind::RequirementsChecklist,
            ChecklistKind::Verification => TemplateKind::VerificationChecklist,
            ChecklistKind::DiagramAndUseCases => TemplateKind::DiagramAndUseCasesChecklist,
        }
    }
}

/// Functional or non-functional requirement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Requirement {
    pub id: Identifier,
    pub description: String,
    pub situation: Choice<Situation>,
    pub priority: Choice<Level>,
    /// Empty for a conventional (non-IoT) requirement.
    pub iot_characteristics: Vec<Choice<IotCharacteristic>>,
    pub cost: Option<Choice<Level>>,
    pub effort: Option<Choice<Level>>,
    pub reused: bool,
    pub related_requirement_ids: Vec<Identifier>,
    pub dependencies: Vec<Identifier>,
    pub related_need_ids: Vec<Identifier>,
}

impl Requirement {
    pub fn new(id: Identifier, description: impl Into<String>) -> Self {
        Requirement {
            id,
            description: description.into(),
            situation: Situation::Proposed.into(),
            priority: Level::Medium.into(),
            iot_characteristics: Vec::new(),
            cost: None,
            effort: None,
            reused: false,
            related_requirement_ids: Vec::new(),
            dependencies: Vec::new(),
            related_need_ids: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusinessRule {
    pub id: Identifier,
    pub description: String,
    pub situation: Choice<Situation>,
    pub priority: Choice<Level>,
    pub related_need_ids: Vec<Identifier>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stakeholder {
    pub id: Identifier,
    pub name: String,
    pub role_description: String,
    pub interest: Choice<Level>,
    pub influence: Choice<Level>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Need {
    pub id: Identifier,
    pub description: String,
    pub origin: Choice<NeedOrigin>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Actor {
    pub name: String,
    pub category: Choice<ActorCategory>,
    pub description: String,
}

impl Actor {
    pub fn new(name: impl Into<String>, category: ActorCategory) -> Self {
        Actor {
            name: name.into(),
            category: category.into(),
            description: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IotScenario {
    pub id: Identifier,
    pub title: String,
    pub actors: Vec<Actor>,
    pub actions: Vec<String>,
    pub arrangement_ids: Vec<Identifier>,
    pub related_fr_ids: Vec<Identifier>,
    pub precedencies: Vec<Identifier>,
    pub dependencies: Vec<Identifier>,
    pub collected_data: String,
    pub actions_performed: String,
    pub interaction_sequence: Vec<String>,
}

impl IotScenario {
    pub fn new(id: Identifier, title: impl Into<String>) -> Self {
        IotScenario {
            id,
            title: title.into(),
            actors: Vec::new(),
            actions: Vec::new(),
            arrangement_ids: Vec::new(),
            related_fr_ids: Vec::new(),
            precedencies: Vec::new(),
            dependencies: Vec::new(),
            collected_data: String::new(),
            actions_performed: String::new(),
            interaction_sequence: Vec::new(),
        }
    }
}

/// One filled-in catalog of an arrangement, shared by one or more scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrangementCatalogInstance {
    pub arrangement_id: Identifier,
    pub scenario_ids: Vec<Identifier>,
    pub representation: String,
    /// prompt -> answer
    pub answers: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IotUseCase {
    pub id: Identifier,
    pub title: String,
    pub requirement_ids: Vec<Identifier>,
    pub arrangement_ids: Vec<Identifier>,
    pub scenario_ids: Vec<Identifier>,
    pub preconditions: String,
    pub postconditions: String,
    pub associated_use_cases: Vec<Identifier>,
    pub actors: Vec<Actor>,
    pub base_flow: Vec<String>,
    pub alternative_flows: Vec<Vec<String>>,
    pub exception_flows: Vec<Vec<String>>,
    pub business_rule_ids: Vec<Identifier>,
}

impl IotUseCase {
    pub fn new(id: Identifier, title: impl Into<String>) -> Self {
        IotUseCase {
            id,
            title: title.into(),
            requirement_ids: Vec::new(),
            arrangement_ids: Vec::new(),
            scenario_ids: Vec::new(),
            preconditions: String::new(),
            postconditions: String::new(),
            associated_use_cases: Vec::new(),
            actors: Vec::new(),
            base_flow: Vec::new(),
            alternative_flows: Vec::new(),
            exception_flows: Vec::new(),
            business_rule_ids: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CanvasRecord {
    /// Image or photo of the canvas built with the stakeholders.
    pub image: String,
    pub blocks: BTreeMap<String, String>,
}

/// The four feasibility analyses that make up the Stage 1 milestone.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityRecord {
    pub market_demand: String,
    pub economic_feasibility: String,
    pub impact_and_risks: String,
    pub technical_feasibility: String,
    pub conclusion: String,
}

impl FeasibilityRecord {
    pub fn analyses(&self) -> [(&'static str, &str); 4] {
        [
            ("market_demand", &self.market_demand),
            ("economic_feasibility", &self.economic_feasibility),
            ("impact_and_risks", &self.impact_and_risks),
            ("technical_feasibility", &self.technical_feasibility),
        ]
    }

    pub fn all_analyses_filled(&self) -> bool {
        self.analyses().iter().all(|(_, text)| !text.trim().is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub text: String,
    pub verdict: Option<Verdict>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecklistRecord {
    pub kind: ChecklistKind,
    pub items: Vec<ChecklistItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementRecord {
    pub party: String,
    pub method: AgreementMethod,
    pub date: NaiveDate,
    pub artifact_kind: TemplateKind,
}

/// Evidence that a stage milestone was produced (prototypes are referenced,
/// never built by this tool).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilestoneEvidence {
    pub milestone: Milestone,
    pub reference: String,
    pub date: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VersionSnapshot {
    pub label: String,
    pub project: Box<Project>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Project {
    pub name: String,
    pub responsible: String,
    pub description: String,
    pub problem_domain: String,
    pub objective: String,
    pub methodology: Methodology,
    pub glossary: BTreeMap<String, String>,
    pub stakeholders: Vec<Stakeholder>,
    pub needs: Vec<Need>,
    pub requirements: Vec<Requirement>,
    pub business_rules: Vec<BusinessRule>,
    pub scenarios: Vec<IotScenario>,
    pub catalogs: Vec<ArrangementCatalogInstance>,
    pub use_cases: Vec<IotUseCase>,
    pub use_case_diagram: String,
    pub canvas: Option<CanvasRecord>,
    pub feasibility: Option<FeasibilityRecord>,
    pub checklists: Vec<ChecklistRecord>,
    pub agreements: Vec<AgreementRecord>,
    pub milestones: Vec<MilestoneEvidence>,
    pub inspections: Vec<InspectionReport>,
    pub change_reports: Vec<ChangeAnalysisReport>,
    pub versions: Vec<VersionSnapshot>,
}

#[allow(clippy::derivable_impls)]
impl Default for Methodology {
    fn default() -> Self {
        Methodology::Traditional
    }
}

impl Project {
    pub fn requirement(&self, id: &Identifier) -> Option<&Requirement> {
        self.requirements.iter().find(|r| r.id == *id)
    }

    pub fn scenario(&self, id: &Identifier) -> Option<&IotScenario> {
        self.scenarios.iter().find(|s| s.id == *id)
    }

    pub fn use_case(&self, id: &Identifier) -> Option<&IotUseCase> {
        self.use_cases.iter().find(|u| u.id == *id)
    }

    pub fn checklist(&self, kind: ChecklistKind) -> Option<&ChecklistRecord> {
        self.checklists.iter().find(|c| c.kind == kind)
    }

    /// Every identifier declared by an artifact of this project. Arrangements
    /// are not declared by projects; they come from the registry.
    pub fn declared_ids(&self) -> BTreeSet<Identifier> {
        let mut ids = BTreeSet::new();
        ids.extend(self.stakeholders.iter().map(|a| a.id));
        ids.extend(self.needs.iter().map(|a| a.id));
        ids.extend(self.requirements.iter().map(|a| a.id));
        ids.extend(self.business_rules.iter().map(|a| a.id));
        ids.extend(self.scenarios.iter().map(|a| a.id));
        ids.extend(self.use_cases.iter().map(|a| a.id));
        ids.extend(self.change_reports.iter().map(|c| c.change.id));
        ids
    }

    /// True when `id` names an artifact of this project or a registry arrangement.
    pub fn resolves(&self, id: &Identifier) -> bool {
        match id.kind {
            ArtifactKind::Arrangement => (1..=ARRANGEMENT_COUNT).contains(&id.number),
            _ => self.declared_ids().contains(id),
        }
    }

    /// Whether the project carries any content for the given template.
    pub fn has_template(&self, kind: TemplateKind) -> bool {
        match kind {
            TemplateKind::IoTCanvas => self.canvas.is_some(),
            TemplateKind::FeasibilityAnalysis => self.feasibility.is_some(),
            TemplateKind::IoTProjectDetail => {
                !self.description.is_empty()
                    || !self.problem_domain.is_empty()
                    || !self.objective.is_empty()
                    || !self.glossary.is_empty()
                    || !self.stakeholders.is_empty()
                    || !self.needs.is_empty()
                    || !self.requirements.is_empty()
                    || !self.business_rules.is_empty()
            }
            TemplateKind::IoTSolutionProposal => {
                !self.scenarios.is_empty() || !self.catalogs.is_empty()
            }
            TemplateKind::IoTUseCaseDescription => {
                !self.use_cases.is_empty() || !self.use_case_diagram.is_empty()
            }
            TemplateKind::ChangeAnalysisReport => !self.change_reports.is_empty(),
            TemplateKind::InspectionRecord => !self.inspections.is_empty(),
            TemplateKind::RequirementsChecklist
            | TemplateKind::VerificationChecklist
            | TemplateKind::DiagramAndUseCasesChecklist => kind
                .checklist_kind()
                .is_some_and(|c| self.checklist(c).is_some()),
        }
    }
}

literal_enum! {
    pub enum RequirementClass {
        IoT => "IoT",
        Conventional => "Conventional" ["Classic"],
    }
}

/// A requirement is an IoT requirement iff it names at least one IoT
/// characteristic.
pub fn classify_requirement(req: &Requirement) -> RequirementClass {
    if req.iot_characteristics.is_empty() {
        RequirementClass::Conventional
    } else {
        RequirementClass::IoT
    }
}

/// Smallest positive number not yet used by `kind` in the project.
pub fn allocate_id(project: &Project, kind: ArtifactKind) -> Identifier {
    let used: BTreeSet<u32> = if kind == ArtifactKind::Arrangement {
        project
            .scenarios
            .iter()
            .flat_map(|s| s.arrangement_ids.iter())
            .chain(project.use_cases.iter().flat_map(|u| u.arrangement_ids.iter()))
            .chain(project.catalogs.iter().map(|c| &c.arrangement_id))
            .map(|id| id.number)
            .collect()
    } else {
        project
            .declared_ids()
            .into_iter()
            .filter(|id| id.kind == kind)
            .map(|id| id.number)
            .collect()
    };
    let number = (1..).find(|n| !used.contains(n)).expect("u32 range exhausted");
    Identifier::new(kind, number)
}

/// Name of the violated rule together with its specifics.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum IssueRule {
    InvalidEnum { value: String },
    DanglingRef { target: Identifier },
    WrongKind { target: Identifier },
    DuplicateId,
    MissingField,
    SelfReference,
    FrOnlyField,
    EmptyFlow,
    MissingAgreement,
    DuplicateEntry { value: String },
}

impl IssueRule {
    pub fn name(&self) -> &'static str {
        match self {
            IssueRule::InvalidEnum { .. } => "invalid-enum",
            IssueRule::DanglingRef { .. } => "dangling-ref",
            IssueRule::WrongKind { .. } => "wrong-kind",
            IssueRule::DuplicateId => "duplicate-id",
            IssueRule::MissingField => "missing-field",
            IssueRule::SelfReference => "self-reference",
            IssueRule::FrOnlyField => "fr-only-field",
            IssueRule::EmptyFlow => "empty-flow",
            IssueRule::MissingAgreement => "missing-agreement",
            IssueRule::DuplicateEntry { .. } => "duplicate-entry",
        }
    }
}

/// A model-level invariant violation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ModelIssue {
    pub artifact: String,
    pub field: String,
    #[serde(flatten)]
    pub rule: IssueRule,
}

impl fmt::Display for ModelIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.rule.name();
        match &self.rule {
            IssueRule::DanglingRef { target } => write!(f, "{name}({} → {target})", self.artifact),
            IssueRule::WrongKind { target } => {
                write!(f, "{name}({}.{} → {target})", self.artifact, self.field)
            }
            IssueRule::DuplicateId => write!(f, "{name}({})", self.artifact),
            IssueRule::InvalidEnum { value } => {
                write!(f, "{name}({}.{}) `{value}`", self.artifact, self.field)
            }
            IssueRule::DuplicateEntry { value } => {
                write!(f, "{name}({}.{}) `{value}`", self.artifact, self.field)
            }
            _ => write!(f, "{name}({}.{})", self.artifact, self.field),
        }
    }
}

struct Checker<'p> {
    project: &'p Project,
    declared: BTreeSet<Identifier>,
    issues: Vec<ModelIssue>,
}

impl<'p> Checker<'p> {
    fn push(&mut self, artifact: impl fmt::Display, field: &str, rule: IssueRule) {
        self.issues.push(ModelIssue {
            artifact: artifact.to_string(),
            field: field.to_string(),
            rule,
        });
    }

    fn text(&mut self, artifact: impl fmt::Display, field: &str, value: &str) {
        if value.trim().is_empty() {
            self.push(artifact, field, IssueRule::MissingField);
        }
    }

    fn choice<T: Literal>(&mut self, artifact: impl fmt::Display, field: &str, value: &Choice<T>) {
        if let Choice::Invalid(raw) = value {
            self.push(
                artifact,
                field,
                IssueRule::InvalidEnum { value: raw.clone() },
            );
        }
    }

    fn refs(
        &mut self,
        owner: Identifier,
        field: &str,
        targets: &[Identifier],
        accept: impl Fn(ArtifactKind) -> bool,
    ) {
        for target in targets {
            if !accept(target.kind) {
                self.push(owner, field, IssueRule::WrongKind { target: *target });
            } else if *target == owner {
                self.push(owner, field, IssueRule::SelfReference);
            } else if !self.resolves(target) {
                self.push(owner, field, IssueRule::DanglingRef { target: *target });
            }
        }
    }

    fn resolves(&self, id: &Identifier) -> bool {
        match id.kind {
            ArtifactKind::Arrangement => (1..=ARRANGEMENT_COUNT).contains(&id.number),
            _ => self.declared.contains(id),
        }
    }

    fn non_empty(&mut self, owner: Identifier, field: &str, list: &[Identifier]) {
        if list.is_empty() {
            self.push(owner, field, IssueRule::MissingField);
        }
    }

    fn own_id(&mut self, id: Identifier, accept: impl Fn(ArtifactKind) -> bool, seen: &mut BTreeSet<Identifier>) {
        if !accept(id.kind) {
            self.push(id, "id", IssueRule::WrongKind { target: id });
        }
        if !seen.insert(id) {
            self.push(id, "id", IssueRule::DuplicateId);
        }
    }

    fn actors(&mut self, owner: Identifier, actors: &[Actor]) {
        for actor in actors {
            self.text(owner, "actors.name", &actor.name);
            self.choice(owner, "actors.category", &actor.category);
        }
    }

    fn run(mut self) -> Vec<ModelIssue> {
        let p = self.project;
        let mut seen = BTreeSet::new();

        for s in &p.stakeholders {
            self.own_id(s.id, |k| k == ArtifactKind::Stakeholder, &mut seen);
            self.text(s.id, "name", &s.name);
            self.choice(s.id, "interest", &s.interest);
            self.choice(s.id, "influence", &s.influence);
        }
        for n in &p.needs {
            self.own_id(n.id, |k| k == ArtifactKind::Need, &mut seen);
            self.text(n.id, "description", &n.description);
            self.choice(n.id, "origin", &n.origin);
        }
        for r in &p.requirements {
            self.own_id(r.id, ArtifactKind::is_requirement, &mut seen);
            self.text(r.id, "description", &r.description);
            self.choice(r.id, "situation", &r.situation);
            self.choice(r.id, "priority", &r.priority);
            for c in &r.iot_characteristics {
                self.choice(r.id, "iot_characteristics", c);
            }
            let mut distinct = BTreeSet::new();
            for c in &r.iot_characteristics {
                if !distinct.insert(c.as_text().to_ascii_lowercase()) {
                    self.push(
                        r.id,
                        "iot_characteristics",
                        IssueRule::DuplicateEntry { value: c.to_string() },
                    );
                }
            }
            for (field, value) in [("cost", &r.cost), ("effort", &r.effort)] {
                if let Some(v) = value {
                    self.choice(r.id, field, v);
                    if r.id.kind != ArtifactKind::Fr {
                        self.push(r.id, field, IssueRule::FrOnlyField);
                    }
                }
            }
            if r.id.kind != ArtifactKind::Fr && !r.dependencies.is_empty() {
                self.push(r.id, "dependencies", IssueRule::FrOnlyField);
            }
            self.refs(r.id, "related_requirement_ids", &r.related_requirement_ids, ArtifactKind::is_requirement);
            self.refs(r.id, "dependencies", &r.dependencies, |k| k == ArtifactKind::Fr);
            self.refs(r.id, "related_need_ids", &r.related_need_ids, |k| k == ArtifactKind::Need);
        }
        for b in &p.business_rules {
            self.own_id(b.id, |k| k == ArtifactKind::Br, &mut seen);
            self.text(b.id, "description", &b.description);
            self.choice(b.id, "situation", &b.situation);
            self.choice(b.id, "priority", &b.priority);
            self.refs(b.id, "related_need_ids", &b.related_need_ids, |k| k == ArtifactKind::Need);
        }
        for s in &p.scenarios {
            self.own_id(s.id, |k| k == ArtifactKind::Scenario, &mut seen);
            self.text(s.id, "title", &s.title);
            self.non_empty(s.id, "arrangement_ids", &s.arrangement_ids);
            self.non_empty(s.id, "related_fr_ids", &s.related_fr_ids);
            self.refs(s.id, "arrangement_ids", &s.arrangement_ids, |k| k == ArtifactKind::Arrangement);
            self.refs(s.id, "related_fr_ids", &s.related_fr_ids, |k| k == ArtifactKind::Fr);
            self.refs(s.id, "precedencies", &s.precedencies, |k| k == ArtifactKind::Scenario);
            self.refs(s.id, "dependencies", &s.dependencies, |k| k == ArtifactKind::Scenario);
            self.actors(s.id, &s.actors);
        }
        for (index, c) in p.catalogs.iter().enumerate() {
            let label = format!("catalog#{}({})", index + 1, c.arrangement_id);
            if c.arrangement_id.kind != ArtifactKind::Arrangement {
                self.push(&label, "arrangement_id", IssueRule::WrongKind { target: c.arrangement_id });
            }
            if c.scenario_ids.is_empty() {
                self.push(&label, "scenario_ids", IssueRule::MissingField);
            }
            for sid in &c.scenario_ids {
                if sid.kind != ArtifactKind::Scenario {
                    self.push(&label, "scenario_ids", IssueRule::WrongKind { target: *sid });
                } else if !self.resolves(sid) {
                    self.push(&label, "scenario_ids", IssueRule::DanglingRef { target: *sid });
                }
            }
        }
        for u in &p.use_cases {
            self.own_id(u.id, |k| k == ArtifactKind::UseCase, &mut seen);
            self.text(u.id, "title", &u.title);
            self.non_empty(u.id, "requirement_ids", &u.requirement_ids);
            self.non_empty(u.id, "scenario_ids", &u.scenario_ids);
            self.refs(u.id, "requirement_ids", &u.requirement_ids, ArtifactKind::is_requirement);
            self.refs(u.id, "arrangement_ids", &u.arrangement_ids, |k| k == ArtifactKind::Arrangement);
            self.refs(u.id, "scenario_ids", &u.scenario_ids, |k| k == ArtifactKind::Scenario);
            self.refs(u.id, "associated_use_cases", &u.associated_use_cases, |k| k == ArtifactKind::UseCase);
            self.refs(u.id, "business_rule_ids", &u.business_rule_ids, |k| k == ArtifactKind::Br);
            self.actors(u.id, &u.actors);
            if u.base_flow.is_empty() {
                self.push(u.id, "base_flow", IssueRule::MissingField);
            }
            for (field, flows) in [
                ("alternative_flows", &u.alternative_flows),
                ("exception_flows", &u.exception_flows),
            ] {
                if flows.iter().any(Vec::is_empty) {
                    self.push(u.id, field, IssueRule::EmptyFlow);
                }
            }
        }
        for (term, definition) in &p.glossary {
            self.text("glossary", "term", term);
            self.text(format!("glossary[{term}]"), "definition", definition);
        }
        let mut checklist_kinds = BTreeSet::new();
        for c in &p.checklists {
            if !checklist_kinds.insert(c.kind) {
                self.push("checklists", "kind", IssueRule::DuplicateEntry { value: c.kind.to_string() });
            }
            for item in &c.items {
                self.text(format!("checklist[{}]", c.kind), "items.text", &item.text);
            }
        }
        for a in &p.agreements {
            self.text("agreements", "party", &a.party);
        }
        for m in &p.milestones {
            self.text(format!("milestone[{}]", m.milestone), "reference", &m.reference);
            if p.agreements.is_empty() {
                self.push(format!("milestone[{}]", m.milestone), "agreements", IssueRule::MissingAgreement);
            }
        }
        let mut sessions = BTreeSet::new();
        for report in &p.inspections {
            let label = format!("inspection[{}]", report.session_label);
            self.text(&label, "session_label", &report.session_label);
            if !sessions.insert(report.session_label.as_str()) {
                self.push(&label, "session_label", IssueRule::DuplicateEntry { value: report.session_label.clone() });
            }
            for sid in report.answers.iter().map(|a| a.scenario_id) {
                if !self.resolves(&sid) {
                    self.push(&label, "answers", IssueRule::DanglingRef { target: sid });
                }
            }
        }
        for report in &p.change_reports {
            let change = &report.change;
            self.own_id(change.id, |k| k == ArtifactKind::ChangeRequest, &mut seen);
            if change.kind.requires_existing_target() && !self.resolves(&change.target_id) {
                self.push(change.id, "target_id", IssueRule::DanglingRef { target: change.target_id });
            }
        }
        let mut labels = BTreeSet::new();
        for v in &p.versions {
            self.text("versions", "label", &v.label);
            if !labels.insert(v.label.as_str()) {
                self.push("versions", "label", IssueRule::DuplicateEntry { value: v.label.clone() });
            }
        }

        self.issues.sort();
        self.issues
    }
}

/// Every model-level invariant violation, sorted; empty iff consistent.
pub fn validate_model(project: &Project) -> Vec<ModelIssue> {
    Checker {
        project,
        declared: project.declared_ids(),
        issues: Vec::new(),
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifiers_render_with_template_conventions() {
        assert_eq!(Identifier::fr(1).to_string(), "FR01");
        assert_eq!(Identifier::new(ArtifactKind::Br, 3).to_string(), "BR03");
        assert_eq!(Identifier::scenario(2).to_string(), "IoT S02");
        assert_eq!(Identifier::use_case(12).to_string(), "IoT UC12");
        assert_eq!(Identifier::arrangement(1).to_string(), "IIA-01");
        assert_eq!(Identifier::fr(123).to_string(), "FR123");
    }

    #[test]
    fn identifiers_parse_unpadded_and_aliases() {
        let cases = [
            ("FR1", Identifier::fr(1)),
            ("NFR07", Identifier::new(ArtifactKind::Nfr, 7)),
            ("RN2", Identifier::new(ArtifactKind::Br, 2)),
            ("IoT S1", Identifier::scenario(1)),
            ("IoT UC-01", Identifier::use_case(1)),
            ("IIA-1", Identifier::arrangement(1)),
            ("IIA-09", Identifier::arrangement(9)),
            ("CR4", Identifier::new(ArtifactKind::ChangeRequest, 4)),
            ("STK02", Identifier::new(ArtifactKind::Stakeholder, 2)),
        ];
        for (text, expected) in cases {
            assert_eq!(text.parse::<Identifier>().unwrap(), expected, "{text}");
        }
        assert!("IIA-10".parse::<Identifier>().is_err());
        assert!("FR0".parse::<Identifier>().is_err());
        assert!("FR".parse::<Identifier>().is_err());
        assert!("XY01".parse::<Identifier>().is_err());
        assert!("FR1a".parse::<Identifier>().is_err());
    }

    #[test]
    fn empty_project_is_consistent() {
        assert!(validate_model(&Project::default()).is_empty());
    }

    #[test]
    fn unknown_situation_is_reported() {
        let mut project = Project::default();
        let mut fr = Requirement::new(Identifier::fr(1), "Collect temperature");
        fr.situation = Choice::parse("Accepted");
        project.requirements.push(fr);
        let issues = validate_model(&project);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].rule.name(), "invalid-enum");
        assert!(issues[0].to_string().starts_with("invalid-enum(FR01.situation)"));
        let legal: Vec<_> = Situation::ALL.iter().map(|s| s.literal()).collect();
        assert_eq!(legal, ["Proposed", "Approved", "Canceled"]);
    }

    #[test]
    fn dangling_scenario_reference_is_reported() {
        let mut project = Project::default();
        let mut s = IotScenario::new(Identifier::scenario(1), "Monitor room");
        s.arrangement_ids.push(Identifier::arrangement(1));
        s.related_fr_ids.push(Identifier::fr(99));
        project.scenarios.push(s);
        let rendered: Vec<String> = validate_model(&project).iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["dangling-ref(IoT S01 → FR99)"]);
    }

    #[test]
    fn nfr_cannot_carry_cost() {
        let mut project = Project::default();
        let mut nfr = Requirement::new(Identifier::new(ArtifactKind::Nfr, 1), "Latency");
        nfr.cost = Some(Level::Low.into());
        project.requirements.push(nfr);
        let issues = validate_model(&project);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].to_string(), "fr-only-field(NFR01.cost)");
    }

    #[test]
    fn duplicate_and_self_references() {
        let mut project = Project::default();
        let mut fr = Requirement::new(Identifier::fr(1), "a");
        fr.dependencies.push(Identifier::fr(1));
        project.requirements.push(fr.clone());
        project.requirements.push(Requirement::new(Identifier::fr(1), "b"));
        let names: Vec<_> = validate_model(&project).iter().map(|i| i.rule.name()).collect();
        assert!(names.contains(&"duplicate-id"));
        assert!(names.contains(&"self-reference"));
    }

    #[test]
    fn classification_follows_characteristics() {
        let mut fr = Requirement::new(Identifier::fr(1), "x");
        assert_eq!(classify_requirement(&fr), RequirementClass::Conventional);
        fr.iot_characteristics.push(IotCharacteristic::Sensing.into());
        assert_eq!(classify_requirement(&fr), RequirementClass::IoT);
        fr.iot_characteristics = IotCharacteristic::ALL.iter().map(|c| (*c).into()).collect();
        assert_eq!(classify_requirement(&fr), RequirementClass::IoT);
    }

    #[test]
    fn performance_is_an_alias_of_actuation() {
        assert_eq!(
            "performance".parse::<IotCharacteristic>().unwrap(),
            IotCharacteristic::Actuation
        );
        assert_eq!(IotCharacteristic::Actuation.to_string(), "Actuation");
    }

    #[test]
    fn allocation_fills_gaps() {
        let mut project = Project::default();
        project.requirements.push(Requirement::new(Identifier::fr(1), "a"));
        project.requirements.push(Requirement::new(Identifier::fr(2), "b"));
        assert_eq!(allocate_id(&project, ArtifactKind::Fr), Identifier::fr(3));
        project.requirements.remove(1);
        project.requirements.push(Requirement::new(Identifier::fr(3), "c"));
        assert_eq!(allocate_id(&project, ArtifactKind::Fr), Identifier::fr(2));
        assert_eq!(
            allocate_id(&Project::default(), ArtifactKind::UseCase).to_string(),
            "IoT UC01"
        );
    }
}
