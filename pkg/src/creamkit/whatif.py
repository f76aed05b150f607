"""Sensitivity analysis over CPC states: which single contextual change
most reduces the predicted error?

Only single-CPC perturbations are explored; invigilators act on one lever
at a time, and the multi-CPC search space adds nothing to that use case.
"""

from __future__ import annotations

from dataclasses import dataclass

from .extended import ExtendedResult, analyze
from .hta import TaskTree
from .screening import (CpcAssessment, ScreeningResult, make_assessment, screen)
from .taxonomy import ControlMode, Taxonomy


@dataclass(frozen=True)
class WhatIfDelta:
    cpc_id: int
    from_state: str
    to_state: str
    mode_before: ControlMode
    mode_after: ControlMode
    aggregate_before: float
    aggregate_after: float
    interval_before: tuple[float, float]
    interval_after: tuple[float, float]


def single_cpc_sweep(tree: TaskTree, baseline: CpcAssessment,
                     taxonomy: Taxonomy) -> list[WhatIfDelta]:
    """One delta per (CPC, alternative state), sorted by aggregate_after
    ascending; ties keep CPC id then state-listing order."""
    base_screen = screen(baseline, taxonomy)
    base_analysis = analyze(tree, baseline, taxonomy)

    deltas: list[tuple[tuple, WhatIfDelta]] = []
    for cpc in taxonomy.cpcs:
        current = baseline.choices[cpc.id]
        for state_index, state in enumerate(cpc.states):
            if state.name == current:
                continue
            choices = dict(baseline.choices)
            choices[cpc.id] = state.name
            variant = make_assessment(choices, taxonomy,
                                      label=f"{baseline.label}+cpc{cpc.id}")
            v_screen = screen(variant, taxonomy)
            v_analysis = analyze(tree, variant, taxonomy)
            delta = WhatIfDelta(
                cpc_id=cpc.id,
                from_state=current,
                to_state=state.name,
                mode_before=base_screen.mode,
                mode_after=v_screen.mode,
                aggregate_before=base_analysis.aggregate_failure_p,
                aggregate_after=v_analysis.aggregate_failure_p,
                interval_before=base_screen.hep_interval,
                interval_after=v_screen.hep_interval,
            )
            deltas.append(((delta.aggregate_after, cpc.id, state_index), delta))

    deltas.sort(key=lambda pair: pair[0])
    return [d for _, d in deltas]


def best_improvement(sweep: list[WhatIfDelta]) -> WhatIfDelta | None:
    """The strictly-improving delta with the lowest aggregate_after; ties go
    to the lowest CPC id.  None when no strict improvement exists."""
    improving = [d for d in sweep if d.aggregate_after < d.aggregate_before]
    if not improving:
        return None
    return min(improving, key=lambda d: (d.aggregate_after, d.cpc_id))


def sweep_is_flat(sweep: list[WhatIfDelta]) -> bool:
    """True when no perturbation moves the aggregate (e.g. every assignment
    carries an analyst override); reports then rank by mode change."""
    return all(d.aggregate_after == d.aggregate_before for d in sweep)


def delta_to_dict(d: WhatIfDelta) -> dict:
    return {
        "cpc_id": d.cpc_id,
        "from_state": d.from_state,
        "to_state": d.to_state,
        "mode_before": d.mode_before.value,
        "mode_after": d.mode_after.value,
        "aggregate_before": d.aggregate_before,
        "aggregate_after": d.aggregate_after,
        "interval_before": list(d.interval_before),
        "interval_after": list(d.interval_after),
    }
