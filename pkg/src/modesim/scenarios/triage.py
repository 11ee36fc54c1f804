"""Hospital triage as a query tree over the (begin, discharge, admit)
triangle.

Each node scores the three coordinates with a triple summing to one; walking
the tree moves the patient's point across the triangle until a decision
threshold is reached.  The admission threshold rises on a busy day.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional

from ..errors import InvalidInputError
from ..simplicial import Face, SimplexPoint

BEGIN = "begin"
DISCHARGE = "discharge"
ADMIT = "admit"

QUIET_THRESHOLD = 0.80
BUSY_THRESHOLD = 0.95

SUM_TOL = 1e-9


@dataclass(frozen=True)
class TriageNode:
    id: str
    question: str
    scores: tuple[float, float, float]  # (begin, discharge, admit)
    children: tuple[tuple[str, str], ...] = ()  # (answer, child id)
    conditions: tuple[str, ...] = ()

    def child(self, answer: str) -> Optional[str]:
        for a, c in self.children:
            if a == answer:
                return c
        return None

    @property
    def point(self) -> SimplexPoint:
        weights = {
            v: s
            for v, s in zip((BEGIN, DISCHARGE, ADMIT), self.scores)
            if s > 0.0
        }
        return SimplexPoint(Face(weights), weights)


@dataclass(frozen=True)
class TriageTree:
    root: str
    nodes: tuple[TriageNode, ...]

    def node(self, node_id: str) -> TriageNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise InvalidInputError(f"unknown triage node {node_id!r}")


def validate_tree(tree: TriageTree) -> None:
    """Score sums, link integrity, acyclicity, and the rule that the
    begin-triage weight never increases along a root path."""
    ids = [n.id for n in tree.nodes]
    if len(set(ids)) != len(ids):
        raise InvalidInputError("duplicate node ids")
    tree.node(tree.root)
    for n in tree.nodes:
        if abs(sum(n.scores) - 1.0) > SUM_TOL:
            raise InvalidInputError(f"node {n.id}: scores sum to {sum(n.scores)}")
        if any(s < 0.0 for s in n.scores):
            raise InvalidInputError(f"node {n.id}: negative score")
        for _, c in n.children:
            tree.node(c)

    seen: set[str] = set()

    def walk(node_id: str, begin_bound: float, path: tuple[str, ...]):
        if node_id in path:
            raise InvalidInputError(f"cycle through node {node_id!r}")
        node = tree.node(node_id)
        if node.scores[0] > begin_bound + SUM_TOL:
            raise InvalidInputError(
                f"node {node.id}: begin-triage weight rises along a path"
            )
        seen.add(node_id)
        for _, c in node.children:
            walk(c, node.scores[0], path + (node_id,))

    walk(tree.root, 1.0, ())
    orphans = set(ids) - seen
    if orphans:
        raise InvalidInputError(f"unreachable nodes: {sorted(orphans)}")


def load_tree(obj: Mapping) -> TriageTree:
    nodes = tuple(
        TriageNode(
            id=n["id"],
            question=n.get("question", ""),
            scores=tuple(float(s) for s in n["scores"]),
            children=tuple((a, c) for a, c in n.get("children", {}).items()),
            conditions=tuple(n.get("conditions", ())),
        )
        for n in obj["nodes"]
    )
    tree = TriageTree(root=obj["root"], nodes=nodes)
    validate_tree(tree)
    return tree


def load_tree_file(path) -> TriageTree:
    with open(path, encoding="utf-8") as fh:
        return load_tree(json.load(fh))


def triage_advance(
    tree: TriageTree, current: TriageNode, answer: str
) -> tuple[TriageNode, SimplexPoint]:
    """Follow an answer to the child node and return its triangle point."""
    child_id = current.child(answer)
    if child_id is None:
        raise InvalidInputError(
            f"node {current.id}: no branch for answer {answer!r}"
        )
    child = tree.node(child_id)
    return child, child.point


def triage_decide(point: SimplexPoint, busy: bool = False) -> str:
    """admit / discharge / continue against the day's threshold."""
    threshold = BUSY_THRESHOLD if busy else QUIET_THRESHOLD
    if point.weight(ADMIT) >= threshold:
        return "admit"
    if point.weight(DISCHARGE) >= threshold:
        return "discharge"
    return "continue"
