//! Fixture builders shared by the CLI tests and the acceptance harness.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use retiot_core::data::DataSet;
use retiot_core::inspection::{record_inspection, Answer};
use retiot_core::model::*;
use retiot_core::trace::{analyze_change, ChangeDecision, ChangeKind, ChangeRequest};

pub const BLESS_ENV: &str = "RETIOT_BLESS";

pub fn blessing() -> bool {
    std::env::var_os(BLESS_ENV).is_some_and(|v| !v.is_empty())
}

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn fixture(name: &str) -> PathBuf {
    tests_dir().join("fixtures").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    tests_dir().join("golden").join(name)
}

/// Compares `actual` with a committed golden file, rewriting it when blessing.
pub fn check_golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden(name);
    if blessing() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{name} differs from golden file\n--- expected\n{expected}\n--- actual\n{actual}"))
    }
}

fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn id(text: &str) -> Identifier {
    text.parse().unwrap()
}

fn ids(list: &[&str]) -> Vec<Identifier> {
    list.iter().map(|t| id(t)).collect()
}

fn requirement(
    rid: &str,
    description: &str,
    characteristics: &[IotCharacteristic],
    priority: Level,
    needs: &[&str],
) -> Requirement {
    let mut r = Requirement::new(id(rid), description);
    r.situation = Situation::Approved.into();
    r.priority = priority.into();
    r.iot_characteristics = characteristics.iter().map(|c| (*c).into()).collect();
    r.related_need_ids = ids(needs);
    r
}

fn lines(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn checklist(kind: ChecklistKind, items: &[&str]) -> ChecklistRecord {
    ChecklistRecord {
        kind,
        items: items
            .iter()
            .map(|text| ChecklistItem {
                text: text.to_string(),
                verdict: Some(Verdict::Yes),
                note: String::new(),
            })
            .collect(),
    }
}

/// Stage 1 only: canvas, the four feasibility analyses and the
/// requirements checklist.
pub fn stage_one_project() -> Project {
    let mut p = Project {
        name: "Data Center Monitor".into(),
        responsible: "Team B".into(),
        ..Project::default()
    };
    p.canvas = Some(CanvasRecord {
        image: "canvas/iot-canvas.jpg".into(),
        blocks: BTreeMap::from([
            ("Problem".to_string(), "Overheating and unstable energy supply go unnoticed".to_string()),
            ("Things".to_string(), "Rack temperature and humidity sensors, energy meters".to_string()),
            ("Users".to_string(), "Data center operators and manager".to_string()),
        ]),
    });
    p.feasibility = Some(FeasibilityRecord {
        market_demand: "Every HPC facility needs continuous environmental monitoring.".into(),
        economic_feasibility: "Low-cost sensors and open-source software fit the lab budget.".into(),
        impact_and_risks: "Sensor failure may hide an incident; redundancy mitigates it.".into(),
        technical_feasibility: "The team masters microcontrollers, MQTT and web dashboards.".into(),
        conclusion: "Feasible".into(),
    });
    p.checklists.push(checklist(
        ChecklistKind::Requirements,
        &["Business needs are identified", "Stakeholders are described", "Feasibility was analyzed"],
    ));
    p
}

fn answers_for(project: &Project, numbers: &[u32], verdict: Verdict) -> Vec<Answer> {
    project
        .scenarios
        .iter()
        .flat_map(|s| {
            numbers.iter().map(move |n| Answer {
                question_number: *n,
                scenario_id: s.id,
                verdict,
                note: None,
            })
        })
        .collect()
}

/// Questions answered in the fixture inspection: the complete ones.
pub const ANSWERED: [u32; 16] = [1, 2, 3, 4, 5, 6, 7, 24, 25, 26, 27, 28, 29, 30, 31, 32];

/// Project B from the course study: a data center monitor collecting
/// temperature, environment humidity, energy consumption and supply quality.
/// Every template of all three stages is present and complete.
pub fn project_b() -> Project {
    let mut p = stage_one_project();
    p.description = "Monitors a high-performance computing environment (data center) to collect temperature, \
environment humidity, energy consumption and energy supply quality."
        .into();
    p.problem_domain = "Data center operations".into();
    p.objective = "Warn operators before environmental or energy problems damage the computing equipment.".into();
    p.glossary.insert("HPC".into(), "High-performance computing".into());
    p.glossary.insert("Supply quality".into(), "Voltage and frequency stability of the energy supply".into());
    p.stakeholders = vec![
        Stakeholder {
            id: id("STK01"),
            name: "Data center manager".into(),
            role_description: "Accountable for the availability of the facility".into(),
            interest: Level::High.into(),
            influence: Level::High.into(),
        },
        Stakeholder {
            id: id("STK02"),
            name: "Operator".into(),
            role_description: "Watches the facility during each shift".into(),
            interest: Level::High.into(),
            influence: Level::Medium.into(),
        },
    ];
    p.needs = vec![
        Need {
            id: id("NEED01"),
            description: "Detect abnormal temperature and humidity in the server rooms".into(),
            origin: NeedOrigin::Business.into(),
        },
        Need {
            id: id("NEED02"),
            description: "Follow energy consumption and supply quality".into(),
            origin: NeedOrigin::Stakeholder.into(),
        },
    ];
    use IotCharacteristic::*;
    let mut fr4 = requirement("FR04", "Alert the operator when a threshold is exceeded", &[Actuation], Level::High, &["NEED01"]);
    fr4.dependencies = ids(&["FR01"]);
    fr4.cost = Some(Level::Low.into());
    fr4.effort = Some(Level::Medium.into());
    let mut nfr1 = requirement("NFR01", "Readings reach the server at least once a minute", &[Connectivity], Level::Medium, &["NEED01"]);
    nfr1.related_requirement_ids = ids(&["FR01"]);
    p.requirements = vec![
        requirement("FR01", "Collect temperature and humidity from rack sensors", &[Sensing, Connectivity], Level::High, &["NEED01"]),
        requirement("FR02", "Show current readings on a dashboard", &[], Level::Medium, &["NEED01", "NEED02"]),
        requirement("FR03", "Collect energy consumption and supply quality", &[Sensing], Level::High, &["NEED02"]),
        fr4,
        nfr1,
    ];
    p.business_rules = vec![BusinessRule {
        id: id("BR01"),
        description: "A rack temperature above 27 C raises an alert".into(),
        situation: Situation::Approved.into(),
        priority: Level::High.into(),
        related_need_ids: ids(&["NEED01"]),
    }];

    let sensor = |name: &str| Actor::new(name, ActorCategory::Thing);
    let mut s1 = IotScenario::new(id("IoT S01"), "Monitor rack environment");
    s1.actors = vec![sensor("Rack sensor"), Actor::new("Operator", ActorCategory::User)];
    s1.actions = lines(&["Measure temperature and humidity", "Publish readings"]);
    s1.arrangement_ids = ids(&["IIA-01"]);
    s1.related_fr_ids = ids(&["FR01", "FR02"]);
    s1.collected_data = "Temperature and environment humidity per rack".into();
    s1.actions_performed = "Readings are stored and displayed".into();
    s1.interaction_sequence = lines(&[
        "Rack sensor measures temperature and humidity",
        "Gateway forwards the readings to the server",
        "Dashboard shows the readings to the operator",
    ]);
    let mut s2 = IotScenario::new(id("IoT S02"), "Monitor energy supply");
    s2.actors = vec![sensor("Energy meter"), Actor::new("Operator", ActorCategory::User)];
    s2.actions = lines(&["Measure consumption and supply quality"]);
    s2.arrangement_ids = ids(&["IIA-01"]);
    s2.related_fr_ids = ids(&["FR03", "FR04"]);
    s2.precedencies = ids(&["IoT S01"]);
    s2.collected_data = "Energy consumption, voltage and frequency".into();
    s2.actions_performed = "Alerts are raised when supply quality drops".into();
    s2.interaction_sequence = lines(&["Energy meter measures consumption", "Server compares values with thresholds"]);
    p.scenarios = vec![s1, s2];
    p.catalogs = vec![ArrangementCatalogInstance {
        arrangement_id: id("IIA-01"),
        scenario_ids: ids(&["IoT S01", "IoT S02"]),
        representation: "diagrams/iia-01.png".into(),
        answers: BTreeMap::from([
            ("Who collects data?".to_string(), "Rack sensors and energy meters".to_string()),
            ("What type of data is collected?".to_string(), "Temperature, humidity, energy consumption".to_string()),
            ("Source of data".to_string(), "Server rooms and power distribution units".to_string()),
        ]),
    }];

    let mut uc1 = IotUseCase::new(id("IoT UC01"), "View environment dashboard");
    uc1.requirement_ids = ids(&["FR01", "FR02"]);
    uc1.arrangement_ids = ids(&["IIA-01"]);
    uc1.scenario_ids = ids(&["IoT S01"]);
    uc1.preconditions = "Sensors are registered".into();
    uc1.postconditions = "Operator sees current readings".into();
    uc1.actors = vec![Actor::new("Operator", ActorCategory::User)];
    uc1.base_flow = lines(&["Operator opens the dashboard", "System lists the latest readings per rack"]);
    uc1.exception_flows = vec![lines(&["A sensor is silent for five minutes", "System marks the rack as unknown"])];
    let mut uc2 = IotUseCase::new(id("IoT UC02"), "Receive energy alert");
    uc2.requirement_ids = ids(&["FR03", "FR04"]);
    uc2.arrangement_ids = ids(&["IIA-01"]);
    uc2.scenario_ids = ids(&["IoT S02"]);
    uc2.associated_use_cases = ids(&["IoT UC01"]);
    uc2.actors = vec![Actor::new("Operator", ActorCategory::User), Actor::new("Energy meter", ActorCategory::Thing)];
    uc2.base_flow = lines(&["System detects a threshold violation", "System notifies the operator"]);
    uc2.alternative_flows = vec![lines(&["Operator acknowledges the alert from the dashboard"])];
    uc2.business_rule_ids = ids(&["BR01"]);
    p.use_cases = vec![uc1, uc2];
    p.use_case_diagram = "diagrams/use-cases.png".into();

    p.checklists.push(checklist(
        ChecklistKind::Verification,
        &["Scenarios name their arrangements", "Catalog prompts are answered"],
    ));
    p.checklists.push(checklist(
        ChecklistKind::DiagramAndUseCases,
        &["Every use case appears in the diagram", "Flows use the scenario actors"],
    ));
    p.agreements.push(AgreementRecord {
        party: "Data center manager".into(),
        method: AgreementMethod::Signature,
        date: date(2020, 5, 20),
        artifact_kind: TemplateKind::IoTProjectDetail,
    });
    p.milestones = vec![
        MilestoneEvidence {
            milestone: Milestone::LowLevelPrototype,
            reference: "prototypes/low-fidelity.pdf".into(),
            date: date(2020, 5, 25),
        },
        MilestoneEvidence {
            milestone: Milestone::HighLevelPrototype,
            reference: "prototypes/evolved-prototype.pdf".into(),
            date: date(2020, 6, 15),
        },
    ];

    let questions = DataSet::bundled().questions().unwrap();
    let answers = answers_for(&p, &ANSWERED, Verdict::Yes);
    let report = record_inspection(&p, &questions, &answers, "review-1", "Inspector A").unwrap();
    p.inspections.push(report);

    let change = ChangeRequest {
        id: id("CR01"),
        target_id: id("FR01"),
        kind: ChangeKind::Modify,
        description: "Also collect particulate levels".into(),
    };
    let mut report = analyze_change(&p, &change).unwrap();
    report.decision = Some(ChangeDecision::Deferred);
    p.change_reports.push(report);
    p
}

/// Project B without use cases: acceptable at gate 3 only for agile projects.
pub fn project_b_without_use_cases() -> Project {
    let mut p = project_b();
    p.use_cases.clear();
    p.use_case_diagram.clear();
    p.checklists.retain(|c| c.kind != ChecklistKind::DiagramAndUseCases);
    p
}

/// Project B before inspection, with scenario IoT S02 missing its collected data.
pub fn project_b_seeded_defect() -> Project {
    let mut p = project_b();
    p.inspections.clear();
    p.scenarios[1].collected_data.clear();
    p
}

/// Answer sheet text answering every complete question with Yes, except
/// `no` pairs of (scenario, question).
pub fn answer_sheet(project: &Project, session: &str, no: &[(Identifier, u32)]) -> String {
    let mut answers = answers_for(project, &ANSWERED, Verdict::Yes);
    for a in &mut answers {
        if no.contains(&(a.scenario_id, a.question_number)) {
            a.verdict = Verdict::No;
            a.note = Some("Collected data is not described".into());
        }
    }
    retiot_core::inspection::answer_sheet_document(&retiot_core::inspection::AnswerSheet {
        session_label: session.into(),
        inspector: "Inspector A".into(),
        answers,
    })
    .to_text()
}

/// Fixture directories and the builders they must parse to.
pub fn fixtures() -> Vec<(&'static str, Project)> {
    vec![
        ("stage1-only", stage_one_project()),
        ("project-b", project_b()),
        ("project-b-no-use-cases", project_b_without_use_cases()),
    ]
}
