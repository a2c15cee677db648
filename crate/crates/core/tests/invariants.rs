use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use retiot_core::data::DataSet;
use retiot_core::docformat::template_documents;
use retiot_core::gates::{stage_gate, template_completeness};
use retiot_core::gen::{random_answers, random_project};
use retiot_core::iia::{arrangements_for_scenario, scenarios_for_arrangement};
use retiot_core::inspection::{record_inspection, DefectCategory, QuestionPart};
use retiot_core::literal::Literal;
use retiot_core::model::*;
use retiot_core::report::{render_inspection_record, CoverageMark};
use retiot_core::trace::{ChangeKind, Direction, LinkKind};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn round_trips<T: Literal + std::fmt::Debug + std::fmt::Display + std::str::FromStr>() {
    for v in T::ALL {
        assert_eq!(T::from_literal(v.literal()), Some(*v));
        assert_eq!(T::from_literal(&v.literal().to_ascii_uppercase()), Some(*v));
        assert_eq!(v.to_string().parse::<T>().ok(), Some(*v));
        for alias in v.aliases() {
            assert_eq!(T::from_literal(alias), Some(*v), "{alias}");
        }
    }
    assert_eq!(T::from_literal("definitely-not-a-value"), None);
}

#[test]
fn every_literal_enum_round_trips() {
    round_trips::<ArtifactKind>();
    round_trips::<Situation>();
    round_trips::<Level>();
    round_trips::<IotCharacteristic>();
    round_trips::<NeedOrigin>();
    round_trips::<ActorCategory>();
    round_trips::<Methodology>();
    round_trips::<Verdict>();
    round_trips::<AgreementMethod>();
    round_trips::<Milestone>();
    round_trips::<TemplateKind>();
    round_trips::<ChecklistKind>();
    round_trips::<DefectCategory>();
    round_trips::<QuestionPart>();
    round_trips::<LinkKind>();
    round_trips::<Direction>();
    round_trips::<ChangeKind>();
    round_trips::<CoverageMark>();
}

fn break_some(p: &mut Project, rng: &mut ChaCha8Rng) {
    if let Some(r) = p.requirements.first_mut() {
        r.related_need_ids.push(Identifier::new(ArtifactKind::Need, 77));
        r.priority = retiot_core::literal::Choice::parse("Urgent");
    }
    if rng.gen_bool(0.5) {
        if let Some(s) = p.stakeholders.first().cloned() {
            p.stakeholders.push(s);
        }
    }
    if let Some(s) = p.scenarios.first_mut() {
        s.related_fr_ids.clear();
    }
}

fn shuffle_all(p: &mut Project, rng: &mut ChaCha8Rng) {
    p.stakeholders.shuffle(rng);
    p.needs.shuffle(rng);
    p.requirements.shuffle(rng);
    p.business_rules.shuffle(rng);
    p.scenarios.shuffle(rng);
    p.catalogs.shuffle(rng);
    p.use_cases.shuffle(rng);
    p.checklists.shuffle(rng);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn validation_ignores_collection_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut p = random_project(&mut r);
        break_some(&mut p, &mut r);
        let before = validate_model(&p);
        shuffle_all(&mut p, &mut r);
        prop_assert_eq!(validate_model(&p), before);
    }

    #[test]
    fn allocated_ids_are_the_smallest_free_number(seed in any::<u64>()) {
        let p = random_project(&mut rng(seed));
        let declared = p.declared_ids();
        for kind in ArtifactKind::ALL.iter().copied().filter(|k| *k != ArtifactKind::Arrangement) {
            let id = allocate_id(&p, kind);
            prop_assert_eq!(id.kind, kind);
            prop_assert!(!declared.contains(&id));
            prop_assert!((1..id.number).all(|n| declared.contains(&Identifier::new(kind, n))));
        }
    }

    #[test]
    fn arrangement_maps_are_inverse(seed in any::<u64>()) {
        let p = random_project(&mut rng(seed));
        let mut forward = BTreeSet::new();
        for s in &p.scenarios {
            for a in arrangements_for_scenario(&p, &s.id).unwrap() {
                forward.insert((s.id, a));
            }
        }
        let mut backward = BTreeSet::new();
        for n in 1..=ARRANGEMENT_COUNT {
            let a = Identifier::arrangement(n);
            for s in scenarios_for_arrangement(&p, &a).unwrap() {
                backward.insert((s, a));
            }
        }
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn defects_match_no_verdicts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_project(&mut r);
        let questions = DataSet::bundled().questions().unwrap();
        let answers = random_answers(&mut r, &p, &questions, 0.5);
        let report = record_inspection(&p, &questions, &answers, "s1", "inspector").unwrap();
        let nos = answers.iter().filter(|a| a.verdict == Verdict::No).count();
        prop_assert_eq!(report.defects.len(), nos);
        for d in &report.defects {
            let q = questions.iter().find(|q| q.number == d.question_number).unwrap();
            prop_assert_eq!(d.category, q.defect_category());
            match q.part {
                QuestionPart::Specific => prop_assert_eq!(d.category, DefectCategory::NonFunctionalProperty),
                QuestionPart::General => prop_assert!(d.category != DefectCategory::NonFunctionalProperty),
            }
            prop_assert!(d.description.starts_with(&q.text));
        }
        let mut shuffled = answers.clone();
        shuffled.shuffle(&mut r);
        let again = record_inspection(&p, &questions, &shuffled, "s1", "inspector").unwrap();
        prop_assert_eq!(render_inspection_record(&again), render_inspection_record(&report));
    }

    #[test]
    fn filling_fields_never_lowers_completeness(seed in any::<u64>()) {
        let p = random_project(&mut rng(seed));
        let mut filled = p.clone();
        for f in [&mut filled.description, &mut filled.problem_domain, &mut filled.objective, &mut filled.use_case_diagram] {
            if f.is_empty() {
                *f = "filled".into();
            }
        }
        if let Some(feasibility) = &mut filled.feasibility {
            for f in [&mut feasibility.market_demand, &mut feasibility.economic_feasibility,
                      &mut feasibility.impact_and_risks, &mut feasibility.technical_feasibility, &mut feasibility.conclusion] {
                if f.is_empty() {
                    *f = "filled".into();
                }
            }
        }
        if let Some(canvas) = &mut filled.canvas {
            if canvas.image.is_empty() {
                canvas.image = "canvas.png".into();
            }
        }
        let config = DataSet::bundled().gate_config().unwrap();
        let before = template_documents(&p, "working");
        let after = template_documents(&filled, "working");
        prop_assert!(before.len() <= after.len());
        for a in &before {
            let b = after.iter().find(|b| b.path == a.path).unwrap();
            let ra = template_completeness(a, a.template_kind, &config.mandatory).unwrap();
            let rb = template_completeness(b, b.template_kind, &config.mandatory).unwrap();
            prop_assert!(rb.ratio >= ra.ratio);
            prop_assert!((0.0..=1.0).contains(&ra.ratio));
        }
        for stage in 1..=3 {
            if stage_gate(&p, stage, &config).ready {
                prop_assert!(stage_gate(&filled, stage, &config).ready);
            }
        }
    }
}
