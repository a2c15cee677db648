//! Typed traceability graph, link validation and change impact.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::literal::literal_enum;
use crate::model::{ArtifactKind, Identifier, Project, Situation};

literal_enum! {
    /// Type of a traceability edge. Each kind connects exactly one pair of
    /// artifact kinds.
    pub enum LinkKind {
        Realizes => "realizes",
        Justifies => "justifies",
        Dependency => "dependency",
        Related => "related",
        Reuse => "reuse",
        SpecifiedBy => "specified-by",
        Uses => "uses",
        DetailedBy => "detailed-by",
        Constrains => "constrains",
    }
}

impl LinkKind {
    /// Whether an edge of this kind may run from `from` to `to`.
    pub fn allows(self, from: ArtifactKind, to: ArtifactKind) -> bool {
        use ArtifactKind as K;
        match self {
            LinkKind::Realizes => from == K::Need && to.is_requirement(),
            LinkKind::Justifies => from == K::Need && to == K::Br,
            LinkKind::Dependency => from == K::Fr && to == K::Fr,
            LinkKind::Related | LinkKind::Reuse => from.is_requirement() && to.is_requirement(),
            LinkKind::SpecifiedBy => from == K::Fr && to == K::Scenario,
            LinkKind::Uses => from == K::Scenario && to == K::Arrangement,
            LinkKind::DetailedBy => from == K::Scenario && to == K::UseCase,
            LinkKind::Constrains => from == K::Br && to == K::UseCase,
        }
    }
}

literal_enum! {
    pub enum Direction {
        Downstream => "downstream",
        Upstream => "upstream",
        Both => "both",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub from: Identifier,
    pub to: Identifier,
    pub kind: LinkKind,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -[{}]-> {}", self.from, self.kind, self.to)
    }
}

/// Per-node attributes the link rules need.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct NodeInfo {
    pub situation: Option<Situation>,
}

/// Immutable typed graph derived from a project.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceGraph {
    nodes: BTreeMap<Identifier, NodeInfo>,
    edges: BTreeSet<Edge>,
    forward: BTreeMap<Identifier, Vec<(Identifier, LinkKind)>>,
    backward: BTreeMap<Identifier, Vec<(Identifier, LinkKind)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("unknown artifact {0}")]
    UnknownNode(Identifier),
    #[error("edge {0} connects kinds its link type does not allow")]
    IllegalEdge(Edge),
    #[error("cannot add {0}: an artifact with that id already exists")]
    TargetExists(Identifier),
    #[error("{0} is not a change request id")]
    NotAChangeId(Identifier),
}

impl TraceGraph {
    /// Builds a graph from explicit nodes and edges; every edge must join
    /// known nodes with a kind pair its link type allows.
    pub fn from_links(
        nodes: impl IntoIterator<Item = (Identifier, NodeInfo)>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, TraceError> {
        let nodes: BTreeMap<Identifier, NodeInfo> = nodes.into_iter().collect();
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        for edge in &edges {
            if !nodes.contains_key(&edge.from) {
                return Err(TraceError::UnknownNode(edge.from));
            }
            if !nodes.contains_key(&edge.to) {
                return Err(TraceError::UnknownNode(edge.to));
            }
            if edge.from == edge.to || !edge.kind.allows(edge.from.kind, edge.to.kind) {
                return Err(TraceError::IllegalEdge(*edge));
            }
        }
        Ok(Self::assemble(nodes, edges))
    }

    fn assemble(nodes: BTreeMap<Identifier, NodeInfo>, edges: BTreeSet<Edge>) -> Self {
        let mut forward: BTreeMap<Identifier, Vec<(Identifier, LinkKind)>> = BTreeMap::new();
        let mut backward: BTreeMap<Identifier, Vec<(Identifier, LinkKind)>> = BTreeMap::new();
        for e in &edges {
            forward.entry(e.from).or_default().push((e.to, e.kind));
            backward.entry(e.to).or_default().push((e.from, e.kind));
        }
        TraceGraph {
            nodes,
            edges,
            forward,
            backward,
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Identifier, &NodeInfo)> {
        self.nodes.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, id: &Identifier) -> bool {
        self.nodes.contains_key(id)
    }

    /// Edges in `(from, to, kind)` order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn outgoing(&self, id: &Identifier) -> &[(Identifier, LinkKind)] {
        self.forward.get(id).map_or(&[], Vec::as_slice)
    }

    pub fn incoming(&self, id: &Identifier) -> &[(Identifier, LinkKind)] {
        self.backward.get(id).map_or(&[], Vec::as_slice)
    }
}

/// Derives the trace graph from the declared reference fields of a project.
/// Reference fields outside the typed kind pairs (scenario precedence,
/// use case to requirement, use case to arrangement) contribute no edges.
pub fn build_trace_graph(project: &Project) -> TraceGraph {
    let mut nodes: BTreeMap<Identifier, NodeInfo> = BTreeMap::new();
    let mut edges = BTreeSet::new();

    for s in &project.stakeholders {
        nodes.insert(s.id, NodeInfo::default());
    }
    for n in &project.needs {
        nodes.insert(n.id, NodeInfo::default());
    }
    for r in &project.requirements {
        nodes.insert(r.id, NodeInfo { situation: r.situation.valid() });
    }
    for b in &project.business_rules {
        nodes.insert(b.id, NodeInfo { situation: b.situation.valid() });
    }
    for s in &project.scenarios {
        nodes.insert(s.id, NodeInfo::default());
    }
    for u in &project.use_cases {
        nodes.insert(u.id, NodeInfo::default());
    }
    let arrangements = project
        .scenarios
        .iter()
        .flat_map(|s| &s.arrangement_ids)
        .chain(project.use_cases.iter().flat_map(|u| &u.arrangement_ids))
        .chain(project.catalogs.iter().map(|c| &c.arrangement_id))
        .filter(|id| project.resolves(id));
    for id in arrangements {
        nodes.insert(*id, NodeInfo::default());
    }

    let mut link = |from: Identifier, to: Identifier, kind: LinkKind| {
        if from != to
            && kind.allows(from.kind, to.kind)
            && nodes.contains_key(&from)
            && nodes.contains_key(&to)
        {
            edges.insert(Edge { from, to, kind });
        }
    };
    for r in &project.requirements {
        for need in &r.related_need_ids {
            link(*need, r.id, LinkKind::Realizes);
        }
        for dep in &r.dependencies {
            link(*dep, r.id, LinkKind::Dependency);
        }
        let kind = if r.reused { LinkKind::Reuse } else { LinkKind::Related };
        for other in &r.related_requirement_ids {
            link(*other, r.id, kind);
        }
    }
    for b in &project.business_rules {
        for need in &b.related_need_ids {
            link(*need, b.id, LinkKind::Justifies);
        }
    }
    for s in &project.scenarios {
        for fr in &s.related_fr_ids {
            link(*fr, s.id, LinkKind::SpecifiedBy);
        }
        for iia in &s.arrangement_ids {
            link(s.id, *iia, LinkKind::Uses);
        }
    }
    for u in &project.use_cases {
        for s in &u.scenario_ids {
            link(*s, u.id, LinkKind::DetailedBy);
        }
        for br in &u.business_rule_ids {
            link(*br, u.id, LinkKind::Constrains);
        }
    }
    TraceGraph::assemble(nodes, edges)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum TraceIssue {
    /// Scenario that specifies no functional requirement.
    UnlinkedScenario(Identifier),
    /// Use case that details no scenario.
    UnlinkedUseCase(Identifier),
    /// Approved functional requirement not specified by any scenario.
    UnspecifiedRequirement(Identifier),
}

impl TraceIssue {
    pub fn rule(&self) -> &'static str {
        match self {
            TraceIssue::UnlinkedScenario(_) => "unlinked-scenario",
            TraceIssue::UnlinkedUseCase(_) => "unlinked-use-case",
            TraceIssue::UnspecifiedRequirement(_) => "unspecified-requirement",
        }
    }

    pub fn artifact(&self) -> Identifier {
        match self {
            TraceIssue::UnlinkedScenario(id)
            | TraceIssue::UnlinkedUseCase(id)
            | TraceIssue::UnspecifiedRequirement(id) => *id,
        }
    }
}

impl fmt::Display for TraceIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.rule(), self.artifact())
    }
}

/// Link-completeness findings, sorted. Non-functional requirements are
/// exempt from the specification rule: no link type joins them to scenarios.
pub fn validate_links(graph: &TraceGraph) -> Vec<TraceIssue> {
    let has = |edges: &[(Identifier, LinkKind)], kind: LinkKind| edges.iter().any(|(_, k)| *k == kind);
    let mut issues = Vec::new();
    for (id, info) in graph.nodes() {
        match id.kind {
            ArtifactKind::Scenario if !has(graph.incoming(id), LinkKind::SpecifiedBy) => {
                issues.push(TraceIssue::UnlinkedScenario(*id));
            }
            ArtifactKind::UseCase if !has(graph.incoming(id), LinkKind::DetailedBy) => {
                issues.push(TraceIssue::UnlinkedUseCase(*id));
            }
            ArtifactKind::Fr
                if info.situation == Some(Situation::Approved)
                    && !has(graph.outgoing(id), LinkKind::SpecifiedBy) =>
            {
                issues.push(TraceIssue::UnspecifiedRequirement(*id));
            }
            _ => {}
        }
    }
    issues.sort();
    issues
}

/// How an impacted node was first reached by the breadth-first search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Reach {
    pub direction: Direction,
    pub via: LinkKind,
}

fn closure(graph: &TraceGraph, target: Identifier, direction: Direction, out: &mut BTreeMap<Identifier, Reach>) {
    let mut queue = VecDeque::from([target]);
    let mut seen = BTreeSet::from([target]);
    while let Some(node) = queue.pop_front() {
        let next = match direction {
            Direction::Upstream => graph.incoming(&node),
            _ => graph.outgoing(&node),
        };
        for (other, kind) in next {
            if seen.insert(*other) {
                queue.push_back(*other);
                out.entry(*other).or_insert(Reach { direction, via: *kind });
            }
        }
    }
}

/// Every node reachable from `target` in the chosen direction, with the
/// link that first reached it. The target itself is never included.
pub fn impact_paths(
    graph: &TraceGraph,
    target: &Identifier,
    direction: Direction,
) -> Result<BTreeMap<Identifier, Reach>, TraceError> {
    if !graph.contains(target) {
        return Err(TraceError::UnknownNode(*target));
    }
    let mut out = BTreeMap::new();
    match direction {
        Direction::Both => {
            closure(graph, *target, Direction::Downstream, &mut out);
            closure(graph, *target, Direction::Upstream, &mut out);
        }
        one => closure(graph, *target, one, &mut out),
    }
    out.remove(target);
    Ok(out)
}

pub fn impact_of_change(
    graph: &TraceGraph,
    target: &Identifier,
    direction: Direction,
) -> Result<BTreeSet<Identifier>, TraceError> {
    Ok(impact_paths(graph, target, direction)?.into_keys().collect())
}

literal_enum! {
    pub enum ChangeKind {
        Modify => "modify",
        Remove => "remove",
        Add => "add",
    }
}

impl ChangeKind {
    pub fn requires_existing_target(self) -> bool {
        !matches!(self, ChangeKind::Add)
    }
}

literal_enum! {
    pub enum ChangeDecision {
        Approved => "Approved",
        Rejected => "Rejected",
        Deferred => "Deferred",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeRequest {
    pub id: Identifier,
    pub target_id: Identifier,
    pub kind: ChangeKind,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImpactedArtifact {
    pub id: Identifier,
    pub direction: Direction,
    pub via: LinkKind,
    /// Downstream dependent of a removed artifact.
    pub blocking: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeAnalysisReport {
    pub change: ChangeRequest,
    pub direction: Direction,
    pub impacted: Vec<ImpactedArtifact>,
    /// `None` while the decision is pending.
    pub decision: Option<ChangeDecision>,
}

impl ChangeAnalysisReport {
    pub fn impacted_ids(&self) -> BTreeSet<Identifier> {
        self.impacted.iter().map(|i| i.id).collect()
    }

    pub fn blocking_ids(&self) -> BTreeSet<Identifier> {
        self.impacted.iter().filter(|i| i.blocking).map(|i| i.id).collect()
    }
}

pub fn analyze_change(project: &Project, change: &ChangeRequest) -> Result<ChangeAnalysisReport, TraceError> {
    analyze_change_in(project, change, Direction::Both)
}

/// Impact report for a change request; downstream nodes take precedence
/// over upstream ones when reachable both ways.
pub fn analyze_change_in(
    project: &Project,
    change: &ChangeRequest,
    direction: Direction,
) -> Result<ChangeAnalysisReport, TraceError> {
    if change.id.kind != ArtifactKind::ChangeRequest {
        return Err(TraceError::NotAChangeId(change.id));
    }
    let graph = build_trace_graph(project);
    let impacted = if change.kind.requires_existing_target() {
        let paths = impact_paths(&graph, &change.target_id, direction)?;
        paths
            .into_iter()
            .map(|(id, reach)| ImpactedArtifact {
                id,
                direction: reach.direction,
                via: reach.via,
                blocking: change.kind == ChangeKind::Remove && reach.direction == Direction::Downstream,
            })
            .collect()
    } else {
        if graph.contains(&change.target_id) || project.declared_ids().contains(&change.target_id) {
            return Err(TraceError::TargetExists(change.target_id));
        }
        Vec::new()
    };
    Ok(ChangeAnalysisReport {
        change: change.clone(),
        direction,
        impacted,
        decision: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{IotScenario, IotUseCase, Requirement};

    fn chain(with_iia: bool) -> Project {
        let mut p = Project::default();
        let mut fr = Requirement::new(Identifier::fr(1), "collect temperature");
        fr.situation = Situation::Approved.into();
        p.requirements.push(fr);
        let mut s = IotScenario::new(Identifier::scenario(1), "monitor room");
        s.related_fr_ids.push(Identifier::fr(1));
        if with_iia {
            s.arrangement_ids.push(Identifier::arrangement(1));
        }
        p.scenarios.push(s);
        let mut u = IotUseCase::new(Identifier::use_case(1), "view dashboard");
        u.scenario_ids.push(Identifier::scenario(1));
        u.requirement_ids.push(Identifier::fr(1));
        u.base_flow.push("open dashboard".into());
        p.use_cases.push(u);
        p
    }

    #[test]
    fn chain_has_three_nodes_and_two_edges() {
        let g = build_trace_graph(&chain(false));
        assert_eq!(g.node_count(), 3);
        let edges: Vec<String> = g.edges().map(ToString::to_string).collect();
        assert_eq!(edges, ["FR01 -[specified-by]-> IoT S01", "IoT S01 -[detailed-by]-> IoT UC01"]);
        assert!(validate_links(&g).is_empty());
    }

    #[test]
    fn arrangement_becomes_a_node_with_a_uses_edge() {
        let g = build_trace_graph(&chain(true));
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert!(g.contains(&Identifier::arrangement(1)));
    }

    #[test]
    fn two_arrangements_give_two_uses_edges() {
        let mut p = chain(true);
        p.scenarios[0].arrangement_ids.push(Identifier::arrangement(3));
        let g = build_trace_graph(&p);
        assert_eq!(g.edges().filter(|e| e.kind == LinkKind::Uses).count(), 2);
    }

    #[test]
    fn empty_project_gives_empty_graph() {
        let g = build_trace_graph(&Project::default());
        assert_eq!((g.node_count(), g.edge_count()), (0, 0));
    }

    #[test]
    fn approved_requirement_without_scenario_is_reported() {
        let mut p = chain(false);
        let mut fr2 = Requirement::new(Identifier::fr(2), "alarm");
        fr2.situation = Situation::Approved.into();
        p.requirements.push(fr2);
        p.requirements.push(Requirement::new(Identifier::fr(3), "proposed only"));
        let issues = validate_links(&build_trace_graph(&p));
        let shown: Vec<String> = issues.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["unspecified-requirement(FR02)"]);
    }

    #[test]
    fn downstream_impact_of_chain_head() {
        let g = build_trace_graph(&chain(false));
        let got = impact_of_change(&g, &Identifier::fr(1), Direction::Downstream).unwrap();
        assert_eq!(got, BTreeSet::from([Identifier::scenario(1), Identifier::use_case(1)]));
        let up = impact_of_change(&g, &Identifier::use_case(1), Direction::Upstream).unwrap();
        assert_eq!(up, BTreeSet::from([Identifier::scenario(1), Identifier::fr(1)]));
        assert!(matches!(
            impact_of_change(&g, &Identifier::fr(9), Direction::Both),
            Err(TraceError::UnknownNode(_))
        ));
    }

    #[test]
    fn isolated_node_has_no_impact() {
        let mut p = Project::default();
        p.requirements.push(Requirement::new(Identifier::fr(1), "alone"));
        let g = build_trace_graph(&p);
        assert!(impact_of_change(&g, &Identifier::fr(1), Direction::Both).unwrap().is_empty());
    }

    fn request(target: Identifier, kind: ChangeKind) -> ChangeRequest {
        ChangeRequest {
            id: Identifier::new(ArtifactKind::ChangeRequest, 1),
            target_id: target,
            kind,
            description: String::new(),
        }
    }

    #[test]
    fn analyze_modify_add_and_remove() {
        let p = chain(false);
        let modify = analyze_change(&p, &request(Identifier::fr(1), ChangeKind::Modify)).unwrap();
        assert_eq!(modify.impacted_ids(), BTreeSet::from([Identifier::scenario(1), Identifier::use_case(1)]));
        assert!(modify.blocking_ids().is_empty());
        assert_eq!(modify.decision, None);

        let add = analyze_change(&p, &request(Identifier::fr(2), ChangeKind::Add)).unwrap();
        assert!(add.impacted.is_empty());
        assert_eq!(
            analyze_change(&p, &request(Identifier::fr(1), ChangeKind::Add)),
            Err(TraceError::TargetExists(Identifier::fr(1)))
        );

        let remove = analyze_change(&p, &request(Identifier::scenario(1), ChangeKind::Remove)).unwrap();
        assert_eq!(remove.blocking_ids(), BTreeSet::from([Identifier::use_case(1)]));
        assert_eq!(remove.impacted_ids(), BTreeSet::from([Identifier::fr(1), Identifier::use_case(1)]));
    }

    #[test]
    fn from_links_rejects_illegal_pairs() {
        let nodes = [(Identifier::fr(1), NodeInfo::default()), (Identifier::use_case(1), NodeInfo::default())];
        let edge = Edge {
            from: Identifier::fr(1),
            to: Identifier::use_case(1),
            kind: LinkKind::SpecifiedBy,
        };
        assert_eq!(TraceGraph::from_links(nodes, [edge]), Err(TraceError::IllegalEdge(edge)));
    }
}
