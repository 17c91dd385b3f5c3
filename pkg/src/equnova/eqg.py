"""Entailed question graph: construction, components, nugget-question selection.

Nodes are generated questions; a directed edge a -> b means the entailment
scorer gave P(a entails b) at or above the edge threshold. The original
question q0 is external to the graph but scored against every node.
Components are weak (direction ignored for connectivity); edge direction
is kept for degree counting, where a mutual pair counts as two edges.

From each component, the nugget-asking questions are the members that
pass the q0 entailment threshold and, among those, have the maximum
number of incident edges. Ties all survive and share the component id,
which downstream serves as the nugget identity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .scoring import EntailmentScore, EntailmentScorer, GeneratedQuestion, Question


@dataclass(frozen=True)
class EqgConfig:
    edge_threshold: float = 0.5
    q0_threshold: float = 0.5

    def __post_init__(self) -> None:
        for name in ("edge_threshold", "q0_threshold"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")


@dataclass
class Eqg:
    nodes: list[GeneratedQuestion]
    edges: list[EntailmentScore]  # endpoints are gqids; sorted, no self-edges
    q0_entailment: dict[str, float]
    _by_id: dict[str, GeneratedQuestion] = field(init=False, repr=False)
    _degree: dict[str, int] = field(init=False, repr=False)
    _neighbors: dict[str, set[str]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._by_id = {n.gqid: n for n in self.nodes}
        if len(self._by_id) != len(self.nodes):
            raise ValueError("duplicate gqids in graph nodes")
        self._degree = {g: 0 for g in self._by_id}
        self._neighbors = {g: set() for g in self._by_id}
        for e in self.edges:
            if e.premise_id == e.hypothesis_id:
                raise ValueError(f"self-edge on {e.premise_id!r}")
            if e.premise_id not in self._by_id or e.hypothesis_id not in self._by_id:
                raise ValueError(f"edge endpoint not a node: {e.premise_id!r} -> {e.hypothesis_id!r}")
            self._degree[e.premise_id] += 1
            self._degree[e.hypothesis_id] += 1
            self._neighbors[e.premise_id].add(e.hypothesis_id)
            self._neighbors[e.hypothesis_id].add(e.premise_id)

    def node(self, gqid: str) -> GeneratedQuestion:
        try:
            return self._by_id[gqid]
        except KeyError:
            raise ValueError(f"unknown node: {gqid!r}") from None

    def neighbors(self, gqid: str) -> set[str]:
        return self._neighbors[gqid]


@dataclass(frozen=True)
class Component:
    component_id: int
    members: frozenset[str]


@dataclass(frozen=True)
class NuggetQuestion:
    node: GeneratedQuestion
    component_id: int
    degree: int
    q0_probability: float


def build_eqg(
    questions: list[GeneratedQuestion],
    q0: Question,
    entail: EntailmentScorer,
    config: EqgConfig = EqgConfig(),
) -> Eqg:
    """Score all ordered pairs and q0 against every node; keep edges at or
    above the edge threshold. A scorer failure propagates; no partial graph
    is ever returned."""
    ids = [q.gqid for q in questions]
    if len(set(ids)) != len(ids):
        dupes = sorted({g for g in ids if ids.count(g) > 1})
        raise ValueError(f"duplicate gqids: {dupes}")

    q0_probs = entail.score_pairs([(q0.text, q.text) for q in questions])
    q0_entailment = dict(zip(ids, q0_probs))

    pairs = [(a, b) for a in questions for b in questions if a.gqid != b.gqid]
    probs = entail.score_pairs([(a.text, b.text) for a, b in pairs])
    edges = [
        EntailmentScore(a.gqid, b.gqid, p)
        for (a, b), p in zip(pairs, probs)
        if p >= config.edge_threshold
    ]
    edges.sort(key=lambda e: (e.premise_id, e.hypothesis_id))
    return Eqg(list(questions), edges, q0_entailment)


def connected_components(graph: Eqg) -> list[Component]:
    """Weakly connected components; isolated nodes form singletons.

    Component ids are assigned by ascending smallest member gqid, so the
    partition and ids do not depend on node insertion order.
    """
    visited: set[str] = set()
    groups: list[set[str]] = []
    for gqid in sorted(n.gqid for n in graph.nodes):
        if gqid in visited:
            continue
        group = {gqid}
        queue = deque([gqid])
        visited.add(gqid)
        while queue:
            cur = queue.popleft()
            for nb in graph.neighbors(cur):
                if nb not in visited:
                    visited.add(nb)
                    group.add(nb)
                    queue.append(nb)
        groups.append(group)
    groups.sort(key=lambda g: min(g))
    return [Component(i, frozenset(g)) for i, g in enumerate(groups)]


def entailment_degree(graph: Eqg, gqid: str) -> int:
    """Distinct incident edges (in + out); a mutual pair counts as 2."""
    if gqid not in graph._degree:
        raise ValueError(f"unknown node: {gqid!r}")
    return graph._degree[gqid]


def select_nugget_questions(
    graph: Eqg, components: list[Component], config: EqgConfig = EqgConfig()
) -> list[NuggetQuestion]:
    """Per component: among members entailed by q0 (>= q0_threshold), keep
    all with the maximum degree. Components with no qualifying member yield
    nothing. Output sorted by (component_id, gqid)."""
    out: list[NuggetQuestion] = []
    for comp in sorted(components, key=lambda c: c.component_id):
        candidates = [
            g for g in sorted(comp.members) if graph.q0_entailment.get(g, 0.0) >= config.q0_threshold
        ]
        if not candidates:
            continue
        max_degree = max(entailment_degree(graph, g) for g in candidates)
        for g in candidates:
            if entailment_degree(graph, g) == max_degree:
                out.append(
                    NuggetQuestion(graph.node(g), comp.component_id, max_degree, graph.q0_entailment[g])
                )
    return out


def eqg_to_dict(
    graph: Eqg, components: list[Component], nugget_questions: list[NuggetQuestion]
) -> dict:
    """Canonical JSON-ready dump for inspection and golden-file tests."""
    return {
        "nodes": [
            {
                "gqid": n.gqid,
                "text": n.text,
                "source_sentence": n.source_sentence,
                "answer_snippet": n.answer_snippet,
            }
            for n in sorted(graph.nodes, key=lambda n: n.gqid)
        ],
        "edges": [
            {"premise": e.premise_id, "hypothesis": e.hypothesis_id, "probability": e.probability}
            for e in sorted(graph.edges, key=lambda e: (e.premise_id, e.hypothesis_id))
        ],
        "q0_entailment": {g: p for g, p in sorted(graph.q0_entailment.items())},
        "components": [
            {"component_id": c.component_id, "members": sorted(c.members)}
            for c in sorted(components, key=lambda c: c.component_id)
        ],
        "nugget_questions": [
            {
                "gqid": nq.node.gqid,
                "component_id": nq.component_id,
                "degree": nq.degree,
                "q0_probability": nq.q0_probability,
            }
            for nq in nugget_questions
        ],
    }
