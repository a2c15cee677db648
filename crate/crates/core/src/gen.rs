//! Seeded generators for valid projects, answer sessions and typed DAGs.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::inspection::{record_inspection, Answer, ChecklistQuestion};
use crate::literal::{Choice, Literal};
use crate::model::*;
use crate::trace::{analyze_change, ChangeDecision, ChangeKind, ChangeRequest, Edge, LinkKind};

const WORDS: &[&str] = &[
    "sensor", "gateway", "rack", "temperature", "humidity", "energy", "supply", "alert", "operator",
    "dashboard", "cooling", "threshold", "reading", "node", "cloud", "report", "room", "datacenter",
];

const ODD: &[&str] = &["a|b", "back\\slash", "x: y", "#hash", "line\nbreak", "50%", "=="];

pub fn text<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(1..=6);
    let mut words: Vec<String> = (0..n).map(|_| WORDS.choose(rng).unwrap().to_string()).collect();
    if rng.gen_bool(0.15) {
        let i = rng.gen_range(0..words.len());
        words[i] = ODD.choose(rng).unwrap().to_string();
    }
    words.join(" ")
}

fn maybe_text<R: Rng>(rng: &mut R) -> String {
    if rng.gen_bool(0.3) {
        String::new()
    } else {
        text(rng)
    }
}

fn pick<T: Literal, R: Rng>(rng: &mut R) -> T {
    *T::ALL.choose(rng).unwrap()
}

fn choice<T: Literal, R: Rng>(rng: &mut R) -> Choice<T> {
    Choice::Valid(pick(rng))
}

fn subset<R: Rng>(rng: &mut R, pool: &[Identifier], max: usize) -> Vec<Identifier> {
    if pool.is_empty() {
        return Vec::new();
    }
    let n = rng.gen_range(0..=max.min(pool.len()));
    let mut out: Vec<Identifier> = pool.choose_multiple(rng, n).copied().collect();
    out.sort();
    out
}

fn non_empty_subset<R: Rng>(rng: &mut R, pool: &[Identifier], max: usize) -> Vec<Identifier> {
    let mut out = subset(rng, pool, max);
    if out.is_empty() {
        out.push(*pool.choose(rng).unwrap());
    }
    out
}

fn ids(kind: ArtifactKind, count: usize) -> Vec<Identifier> {
    (1..=count as u32).map(|n| Identifier::new(kind, n)).collect()
}

fn date<R: Rng>(rng: &mut R) -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + chrono::Days::new(rng.gen_range(0..2000))
}

fn actors<R: Rng>(rng: &mut R) -> Vec<Actor> {
    (0..rng.gen_range(0..3))
        .map(|_| {
            let mut a = Actor::new(text(rng), pick::<ActorCategory, _>(rng));
            a.description = maybe_text(rng);
            a
        })
        .collect()
}

fn lines<R: Rng>(rng: &mut R, min: usize, max: usize) -> Vec<String> {
    (0..rng.gen_range(min..=max)).map(|_| text(rng)).collect()
}

/// A project that passes `validate_model`, without versions.
pub fn random_project<R: Rng>(rng: &mut R) -> Project {
    let mut p = Project {
        name: text(rng),
        responsible: text(rng),
        description: maybe_text(rng),
        problem_domain: maybe_text(rng),
        objective: maybe_text(rng),
        methodology: pick(rng),
        use_case_diagram: maybe_text(rng),
        ..Project::default()
    };
    for _ in 0..rng.gen_range(0..4) {
        p.glossary.insert(text(rng), text(rng));
    }

    let stakeholders = ids(ArtifactKind::Stakeholder, rng.gen_range(0..4));
    for id in &stakeholders {
        p.stakeholders.push(Stakeholder {
            id: *id,
            name: text(rng),
            role_description: maybe_text(rng),
            interest: choice(rng),
            influence: choice(rng),
        });
    }
    let needs = ids(ArtifactKind::Need, rng.gen_range(0..5));
    for id in &needs {
        p.needs.push(Need {
            id: *id,
            description: text(rng),
            origin: choice(rng),
        });
    }

    let frs = ids(ArtifactKind::Fr, rng.gen_range(0..7));
    let nfrs = ids(ArtifactKind::Nfr, rng.gen_range(0..4));
    let all_reqs: Vec<Identifier> = frs.iter().chain(&nfrs).copied().collect();
    for id in &all_reqs {
        let mut r = Requirement::new(*id, text(rng));
        r.situation = choice(rng);
        r.priority = choice(rng);
        let mut chars: Vec<IotCharacteristic> = IotCharacteristic::ALL.to_vec();
        chars.shuffle(rng);
        chars.truncate(rng.gen_range(0..3));
        r.iot_characteristics = chars.into_iter().map(Choice::Valid).collect();
        r.reused = rng.gen_bool(0.3);
        let others: Vec<Identifier> = all_reqs.iter().filter(|o| *o != id).copied().collect();
        r.related_requirement_ids = subset(rng, &others, 2);
        r.related_need_ids = subset(rng, &needs, 2);
        if id.kind == ArtifactKind::Fr {
            r.cost = rng.gen_bool(0.5).then(|| choice(rng));
            r.effort = rng.gen_bool(0.5).then(|| choice(rng));
            let earlier: Vec<Identifier> = frs.iter().filter(|o| o.number < id.number).copied().collect();
            r.dependencies = subset(rng, &earlier, 2);
        }
        p.requirements.push(r);
    }

    let brs = ids(ArtifactKind::Br, rng.gen_range(0..3));
    for id in &brs {
        p.business_rules.push(BusinessRule {
            id: *id,
            description: text(rng),
            situation: choice(rng),
            priority: choice(rng),
            related_need_ids: subset(rng, &needs, 2),
        });
    }

    let arrangements = ids(ArtifactKind::Arrangement, ARRANGEMENT_COUNT as usize);
    let scenarios = if frs.is_empty() {
        Vec::new()
    } else {
        ids(ArtifactKind::Scenario, rng.gen_range(0..5))
    };
    for id in &scenarios {
        let mut s = IotScenario::new(*id, text(rng));
        s.actors = actors(rng);
        s.actions = lines(rng, 0, 2);
        s.arrangement_ids = non_empty_subset(rng, &arrangements, 3);
        s.related_fr_ids = non_empty_subset(rng, &frs, 3);
        let others: Vec<Identifier> = scenarios.iter().filter(|o| *o != id).copied().collect();
        s.precedencies = subset(rng, &others, 2);
        s.dependencies = subset(rng, &others, 2);
        s.collected_data = maybe_text(rng);
        s.actions_performed = maybe_text(rng);
        s.interaction_sequence = lines(rng, 0, 3);
        p.scenarios.push(s);
    }
    for _ in 0..if scenarios.is_empty() { 0 } else { rng.gen_range(0..4) } {
        let arrangement_id = *arrangements.choose(rng).unwrap();
        let mut answers = BTreeMap::new();
        for _ in 0..rng.gen_range(0..3) {
            answers.insert(text(rng), maybe_text(rng));
        }
        p.catalogs.push(ArrangementCatalogInstance {
            arrangement_id,
            scenario_ids: non_empty_subset(rng, &scenarios, 2),
            representation: maybe_text(rng),
            answers,
        });
    }

    let use_cases = if scenarios.is_empty() {
        Vec::new()
    } else {
        ids(ArtifactKind::UseCase, rng.gen_range(0..4))
    };
    for id in &use_cases {
        let mut u = IotUseCase::new(*id, text(rng));
        u.requirement_ids = non_empty_subset(rng, &all_reqs, 3);
        u.arrangement_ids = subset(rng, &arrangements, 2);
        u.scenario_ids = non_empty_subset(rng, &scenarios, 2);
        u.preconditions = maybe_text(rng);
        u.postconditions = maybe_text(rng);
        let others: Vec<Identifier> = use_cases.iter().filter(|o| *o != id).copied().collect();
        u.associated_use_cases = subset(rng, &others, 2);
        u.actors = actors(rng);
        u.base_flow = lines(rng, 1, 3);
        u.alternative_flows = (0..rng.gen_range(0..3)).map(|_| lines(rng, 1, 2)).collect();
        u.exception_flows = (0..rng.gen_range(0..2)).map(|_| lines(rng, 1, 2)).collect();
        u.business_rule_ids = subset(rng, &brs, 2);
        p.use_cases.push(u);
    }

    if rng.gen_bool(0.5) {
        let mut blocks = BTreeMap::new();
        for _ in 0..rng.gen_range(0..3) {
            blocks.insert(text(rng), maybe_text(rng));
        }
        p.canvas = Some(CanvasRecord {
            image: maybe_text(rng),
            blocks,
        });
    }
    if rng.gen_bool(0.5) {
        p.feasibility = Some(FeasibilityRecord {
            market_demand: maybe_text(rng),
            economic_feasibility: maybe_text(rng),
            impact_and_risks: maybe_text(rng),
            technical_feasibility: maybe_text(rng),
            conclusion: maybe_text(rng),
        });
    }
    let mut kinds = ChecklistKind::ALL.to_vec();
    kinds.shuffle(rng);
    kinds.truncate(rng.gen_range(0..=3));
    kinds.sort();
    for kind in kinds {
        let items = (0..rng.gen_range(0..4))
            .map(|_| ChecklistItem {
                text: text(rng),
                verdict: rng.gen_bool(0.7).then(|| pick(rng)),
                note: maybe_text(rng),
            })
            .collect();
        p.checklists.push(ChecklistRecord { kind, items });
    }
    for _ in 0..rng.gen_range(0..3) {
        p.agreements.push(AgreementRecord {
            party: text(rng),
            method: pick(rng),
            date: date(rng),
            artifact_kind: pick(rng),
        });
    }
    if !p.agreements.is_empty() {
        for _ in 0..rng.gen_range(0..3) {
            p.milestones.push(MilestoneEvidence {
                milestone: pick(rng),
                reference: text(rng),
                date: date(rng),
            });
        }
    }

    if !scenarios.is_empty() {
        let questions = crate::data::DataSet::bundled().questions().expect("bundled questions load");
        for n in 1..=rng.gen_range(0..3) {
            let answers = random_answers(rng, &p, &questions, 0.4);
            let mut report =
                record_inspection(&p, &questions, &answers, &format!("s{n}"), &text(rng).replace('\n', " "))
                    .expect("generated answers are consistent");
            report.meeting_done = rng.gen_bool(0.3);
            p.inspections.push(report);
        }
    }

    let targets: Vec<Identifier> = p.declared_ids().into_iter().collect();
    for n in 1..=if targets.is_empty() { 0 } else { rng.gen_range(0..3) } {
        let kind: ChangeKind = pick(rng);
        let target_id = if kind == ChangeKind::Add {
            Identifier::new(ArtifactKind::Fr, 90 + n)
        } else {
            *targets.choose(rng).unwrap()
        };
        let change = ChangeRequest {
            id: Identifier::new(ArtifactKind::ChangeRequest, n),
            target_id,
            kind,
            description: text(rng),
        };
        if let Ok(mut report) = analyze_change(&p, &change) {
            report.decision = rng.gen_bool(0.5).then(|| pick::<ChangeDecision, _>(rng));
            p.change_reports.push(report);
        }
    }
    p
}

/// Random verdicts over scenario × question pairs; each pair is answered
/// with probability `coverage`, notes are non-empty when present.
pub fn random_answers<R: Rng>(
    rng: &mut R,
    project: &Project,
    questions: &[ChecklistQuestion],
    coverage: f64,
) -> Vec<Answer> {
    let mut out = Vec::new();
    for s in &project.scenarios {
        for q in questions {
            if rng.gen_bool(coverage) {
                out.push(Answer {
                    question_number: q.number,
                    scenario_id: s.id,
                    verdict: pick(rng),
                    note: rng.gen_bool(0.3).then(|| text(rng)),
                });
            }
        }
    }
    out.shuffle(rng);
    out
}

/// A modified copy of `base` that is still valid: edits texts and enum
/// fields, drops trailing artifacts and appends new ones.
pub fn mutate_project<R: Rng>(rng: &mut R, base: &Project) -> Project {
    let mut p = base.clone();
    if rng.gen_bool(0.3) {
        p.name = text(rng);
    }
    if rng.gen_bool(0.3) {
        p.problem_domain = maybe_text(rng);
    }
    for r in &mut p.requirements {
        if rng.gen_bool(0.3) {
            r.priority = choice(rng);
        }
        if rng.gen_bool(0.2) {
            r.description = text(rng);
        }
    }
    for s in &mut p.scenarios {
        if rng.gen_bool(0.3) {
            s.title = text(rng);
        }
    }
    if rng.gen_bool(0.3) {
        p.glossary.insert(text(rng), text(rng));
    }
    if rng.gen_bool(0.3) && p.stakeholders.len() > 1 {
        p.stakeholders.reverse();
    }
    if rng.gen_bool(0.3) {
        let n = p.needs.iter().map(|n| n.id.number).max().unwrap_or(0) + 1;
        p.needs.push(Need {
            id: Identifier::new(ArtifactKind::Need, n),
            description: text(rng),
            origin: choice(rng),
        });
    }
    if rng.gen_bool(0.3) {
        p.business_rules.clear();
        for u in &mut p.use_cases {
            u.business_rule_ids.clear();
        }
    }
    if rng.gen_bool(0.2) {
        p.feasibility = None;
    }
    p
}

/// A DAG over `n` nodes whose edges point from lower to higher index; the
/// node kinds and link kinds always form a legal typed pair.
pub fn random_typed_dag<R: Rng>(rng: &mut R, n: usize) -> (Vec<Identifier>, Vec<Edge>) {
    // layers follow the legal link pairs: need -> requirement -> scenario -> use case
    let layer = |i: usize, n: usize| -> ArtifactKind {
        match i * 4 / n.max(1) {
            0 => ArtifactKind::Need,
            1 => ArtifactKind::Fr,
            2 => ArtifactKind::Scenario,
            _ => ArtifactKind::UseCase,
        }
    };
    let nodes: Vec<Identifier> = (0..n).map(|i| Identifier::new(layer(i, n), i as u32 + 1)).collect();
    let mut edges = Vec::new();
    for (j, to) in nodes.iter().enumerate() {
        for from in nodes.iter().take(j) {
            let kind = match (from.kind, to.kind) {
                (ArtifactKind::Need, ArtifactKind::Fr) => LinkKind::Realizes,
                (ArtifactKind::Fr, ArtifactKind::Fr) => LinkKind::Dependency,
                (ArtifactKind::Fr, ArtifactKind::Scenario) => LinkKind::SpecifiedBy,
                (ArtifactKind::Scenario, ArtifactKind::UseCase) => LinkKind::DetailedBy,
                _ => continue,
            };
            if rng.gen_bool(0.15) {
                edges.push(Edge {
                    from: *from,
                    to: *to,
                    kind,
                });
            }
        }
    }
    (nodes, edges)
}
