"""Extended-mode CREAM: cognitive demand profiles, most-likely failure
selection, context-adjusted failure probabilities, criticality ranking and
sequence aggregation.

The context enters through the weight table: each assignment's nominal
probability is multiplied by the weight of every CPC's chosen state for
the assignment's cognitive function, then clamped to [1e-6, 1.0].
Analyst-specified overrides always win over computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Mapping

from .hta import CfAssignment, TaskTree, collect_assignments
from .screening import CpcAssessment
from .taxonomy import CognitiveFunction, Taxonomy

CFP_MIN = 1e-6
CFP_MAX = 1.0

#: Stated in report metadata: sequence aggregation assumes independence.
INDEPENDENCE_NOTE = "aggregate assumes independent failures across assignments"


@dataclass(frozen=True)
class DemandProfile:
    counts: Mapping[CognitiveFunction, int]
    scope: str | None  # node number, None = whole tree

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class AssignmentResult:
    node: str
    function: CognitiveFunction
    cff: str
    nominal: float
    adjusted_cfp: float
    source: Literal["override", "computed"]


@dataclass(frozen=True)
class ExtendedResult:
    per_assignment: tuple[AssignmentResult, ...]
    per_node_worst: Mapping[str, AssignmentResult]
    profile: DemandProfile
    aggregate_failure_p: float
    context: CpcAssessment


def demand_profile(tree: TaskTree, scope: str | None = None) -> DemandProfile:
    """Per-function assignment counts, over the whole tree or one subtree."""
    if scope is None:
        nodes = list(tree.walk())
    else:
        root = tree.node(scope)  # KeyError on unknown scope
        sub = TaskTree((root,))
        nodes = list(sub.walk())
    counts = {f: 0 for f in CognitiveFunction}
    for node in nodes:
        for a in node.assignments:
            counts[a.function] += 1
    return DemandProfile(counts, scope)


def adjusted_cfp(nominal: float, function: CognitiveFunction,
                 context: CpcAssessment, taxonomy: Taxonomy) -> float:
    """nominal x product of per-CPC weights, clamped to [1e-6, 1.0]."""
    product = nominal
    for cpc in taxonomy.cpcs:
        product *= taxonomy.weight(cpc.id, context.choices[cpc.id], function)
    return min(CFP_MAX, max(CFP_MIN, product))


def assign_cff(assignment: CfAssignment, taxonomy: Taxonomy,
               context: CpcAssessment) -> str:
    """Analyst-specified CFF when present; otherwise the function's GFT with
    the maximum context-adjusted CFP, ties broken by table listing order."""
    if assignment.cff is not None:
        return assignment.cff
    candidates = taxonomy.failure_types_for(assignment.function)
    best = candidates[0]
    best_cfp = adjusted_cfp(best.nominal_cfp, assignment.function, context, taxonomy)
    for gft in candidates[1:]:
        cfp = adjusted_cfp(gft.nominal_cfp, assignment.function, context, taxonomy)
        if cfp > best_cfp:
            best, best_cfp = gft, cfp
    return best.id


def aggregate_failure_probability(cfps: Iterable[float]) -> float:
    """P(at least one failure) under independence: 1 - prod(1 - p)."""
    prod_ok = 1.0
    for p in cfps:
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"probability out of [0,1]: {p}")
        prod_ok *= 1.0 - p
    return 1.0 - prod_ok


def analyze(tree: TaskTree, context: CpcAssessment,
            taxonomy: Taxonomy) -> ExtendedResult:
    """Full extended-mode pass over every assignment in the tree."""
    per_assignment: list[AssignmentResult] = []
    for node_number, a in collect_assignments(tree):
        cff = assign_cff(a, taxonomy, context)
        nominal = taxonomy.failure_type(cff).nominal_cfp
        if a.cfp_override is not None:
            cfp = a.cfp_override
            source: Literal["override", "computed"] = "override"
        else:
            cfp = adjusted_cfp(nominal, a.function, context, taxonomy)
            source = "computed"
        per_assignment.append(AssignmentResult(node_number, a.function, cff,
                                               nominal, cfp, source))

    per_node_worst: dict[str, AssignmentResult] = {}
    for r in per_assignment:
        current = per_node_worst.get(r.node)
        if current is None or r.adjusted_cfp > current.adjusted_cfp:
            per_node_worst[r.node] = r

    return ExtendedResult(
        per_assignment=tuple(per_assignment),
        per_node_worst=per_node_worst,
        profile=demand_profile(tree),
        aggregate_failure_p=aggregate_failure_probability(
            r.adjusted_cfp for r in per_assignment),
        context=context,
    )


def rank_critical(result: ExtendedResult, k: int) -> list[AssignmentResult]:
    """Top-k assignments by adjusted CFP, document order breaking ties."""
    if k < 0:
        raise ValueError("k must be >= 0")
    indexed = list(enumerate(result.per_assignment))
    indexed.sort(key=lambda pair: (-pair[1].adjusted_cfp, pair[0]))
    return [r for _, r in indexed[:k]]


def extended_to_dict(result: ExtendedResult) -> dict:
    return {
        "assumptions": [INDEPENDENCE_NOTE],
        "per_assignment": [
            {"node": r.node, "function": r.function.value, "cff": r.cff,
             "nominal": r.nominal, "adjusted_cfp": r.adjusted_cfp,
             "source": r.source}
            for r in result.per_assignment
        ],
        "per_node_worst": {
            node: {"function": r.function.value, "cff": r.cff,
                   "adjusted_cfp": r.adjusted_cfp}
            for node, r in result.per_node_worst.items()
        },
        "profile": {f.value: n for f, n in result.profile.counts.items()},
        "aggregate_failure_p": result.aggregate_failure_p,
    }
