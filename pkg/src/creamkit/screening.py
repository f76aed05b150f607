"""Basic-mode CREAM: a CPC assessment becomes a combined score, a control
mode from the COCOM grid, and a human-error-probability interval."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .taxonomy import ControlMode, Effect, Taxonomy


class AssessmentError(ValueError):
    pass


@dataclass(frozen=True)
class CpcAssessment:
    """One chosen state per CPC.  Build via make_assessment so the choices
    are validated eagerly; screening never fails afterwards."""

    choices: Mapping[int, str]
    label: str = ""
    timestamp: str | None = None


def make_assessment(choices: Mapping[int | str, str], taxonomy: Taxonomy,
                    label: str = "", timestamp: str | None = None) -> CpcAssessment:
    normalized = {int(k): v for k, v in choices.items()}
    missing = [c.id for c in taxonomy.cpcs if c.id not in normalized]
    if missing:
        raise AssessmentError(f"missing CPC choices: {missing}")
    extra = [cid for cid in normalized if cid not in {c.id for c in taxonomy.cpcs}]
    if extra:
        raise AssessmentError(f"unknown CPC ids: {extra}")
    for cpc in taxonomy.cpcs:
        name = normalized[cpc.id]
        if name not in {s.name for s in cpc.states}:
            raise AssessmentError(f"CPC {cpc.id}: unknown state {name!r}")
    return CpcAssessment(MappingProxyType(dict(sorted(normalized.items()))),
                         label, timestamp)


def assessment_to_dict(a: CpcAssessment) -> dict:
    doc = {"label": a.label, "choices": {str(k): v for k, v in a.choices.items()}}
    if a.timestamp is not None:
        doc["timestamp"] = a.timestamp
    return doc


def assessment_from_dict(doc: dict, taxonomy: Taxonomy) -> CpcAssessment:
    return make_assessment(doc.get("choices", {}), taxonomy,
                           label=doc.get("label", ""),
                           timestamp=doc.get("timestamp"))


def _pick(taxonomy: Taxonomy, preference: list[Effect]) -> dict[int, str]:
    choices = {}
    for cpc in taxonomy.cpcs:
        for effect in preference:
            match = next((s for s in cpc.states if s.effect is effect), None)
            if match is not None:
                choices[cpc.id] = match.name
                break
    return choices


def best_assessment(taxonomy: Taxonomy, label: str = "all-best") -> CpcAssessment:
    """Most favorable eligible state of every CPC (first listed among ties)."""
    return make_assessment(
        _pick(taxonomy, [Effect.IMPROVE, Effect.NEUTRAL, Effect.REDUCE]),
        taxonomy, label)


def worst_assessment(taxonomy: Taxonomy, label: str = "all-worst") -> CpcAssessment:
    return make_assessment(
        _pick(taxonomy, [Effect.REDUCE, Effect.NEUTRAL, Effect.IMPROVE]),
        taxonomy, label)


def neutral_assessment(taxonomy: Taxonomy, label: str = "all-neutral") -> CpcAssessment:
    return make_assessment(
        _pick(taxonomy, [Effect.NEUTRAL, Effect.IMPROVE, Effect.REDUCE]),
        taxonomy, label)


@dataclass(frozen=True)
class CombinedScore:
    sum_reduce: int
    sum_neutral: int
    sum_improve: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.sum_reduce, self.sum_neutral, self.sum_improve)


@dataclass(frozen=True)
class ScreeningResult:
    score: CombinedScore
    mode: ControlMode
    hep_interval: tuple[float, float]


def score_assessment(a: CpcAssessment, taxonomy: Taxonomy) -> CombinedScore:
    """Count chosen states by effect level; each CPC contributes exactly one."""
    counts = {Effect.REDUCE: 0, Effect.NEUTRAL: 0, Effect.IMPROVE: 0}
    for cpc in taxonomy.cpcs:
        try:
            state_name = a.choices[cpc.id]
        except KeyError:
            raise AssessmentError(f"assessment missing CPC {cpc.id}") from None
        counts[cpc.state(state_name).effect] += 1
    return CombinedScore(counts[Effect.REDUCE], counts[Effect.NEUTRAL],
                         counts[Effect.IMPROVE])


def determine_control_mode(score: CombinedScore, taxonomy: Taxonomy) -> ControlMode:
    return taxonomy.cocom.lookup(score.sum_reduce, score.sum_improve)


def screen(a: CpcAssessment, taxonomy: Taxonomy) -> ScreeningResult:
    score = score_assessment(a, taxonomy)
    mode = determine_control_mode(score, taxonomy)
    return ScreeningResult(score, mode, taxonomy.interval(mode))


def screening_to_dict(r: ScreeningResult) -> dict:
    return {
        "score": {"reduce": r.score.sum_reduce, "neutral": r.score.sum_neutral,
                  "improve": r.score.sum_improve},
        "mode": r.mode.value,
        "interval": [r.hep_interval[0], r.hep_interval[1]],
    }
