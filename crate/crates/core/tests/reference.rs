//! Published reference values checked against the bundled data files.

use retiot_core::data::DataSet;
use retiot_core::inspection::QuestionPart;
use retiot_core::model::{Milestone, TemplateKind};

#[test]
fn stage_counts_templates_and_milestones() {
    let stages = DataSet::bundled().stages().unwrap();
    let counts: Vec<(u8, u32, u32)> = stages.iter().map(|s| (s.number, s.activity_count, s.task_count)).collect();
    assert_eq!(counts, [(1, 12, 27), (2, 12, 39), (3, 10, 24)]);
    assert_eq!(
        stages[0].required_templates,
        [TemplateKind::IoTCanvas, TemplateKind::FeasibilityAnalysis, TemplateKind::RequirementsChecklist]
    );
    assert_eq!(stages[0].milestone, Milestone::FeasibilityAnalysis);
    let feasibility: Vec<&str> = stages[0].activities.iter().map(|a| a.name.as_str()).collect();
    assert_eq!(
        feasibility,
        ["Analyze market demand", "Analyze economic feasibility", "Analyze impact and risks", "Analyze technical feasibility"]
    );
    assert_eq!(stages[2].agile_optional, [TemplateKind::IoTUseCaseDescription, TemplateKind::DiagramAndUseCasesChecklist]);
}

#[test]
fn scenario_questions_split_and_texts() {
    let questions = DataSet::bundled().questions().unwrap();
    assert_eq!(questions.len(), 32);
    for q in &questions {
        let expected = if q.number <= 23 { QuestionPart::General } else { QuestionPart::Specific };
        assert_eq!(q.part, expected, "Q{}", q.number);
        assert_eq!(q.placeholder, (8..=23).contains(&q.number), "Q{}", q.number);
    }
    let q = |n: u32| questions.iter().find(|q| q.number == n).unwrap();
    assert_eq!(q(1).text, "Has the overall application domain been established?");
    assert_eq!(q(1).hint.as_deref(), Some("Health, leisure, traffic"));
    assert_eq!(q(3).text, "Is the type of data collected specified?");
    assert_eq!(q(3).hint.as_deref(), Some("Temperature, humidity, pollution"));
    assert_eq!(q(28).text, "What kind of communication technology does the system use in the scenarios?");
    assert_eq!(q(32).text, "Is it possible to identify the interaction between actors?");
    assert_eq!(q(32).hint, None);
}
