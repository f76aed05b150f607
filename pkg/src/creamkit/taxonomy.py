"""CREAM reference data: cognitive functions, generic failure types, CPC
catalog, control modes, the COCOM decision grid, and the weight table.

All tables are plain data.  The built-in defaults carry the RT-NDE adapted
dataset; any table can be replaced by loading a taxonomy document (JSON).
A taxonomy is immutable after construction and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping


class CognitiveFunction(str, Enum):
    OBSERVATION = "Observation"
    INTERPRETATION = "Interpretation"
    PLANNING = "Planning"
    EXECUTION = "Execution"

    @property
    def letter(self) -> str:
        return {"Observation": "O", "Interpretation": "I",
                "Planning": "P", "Execution": "E"}[self.value]


FUNCTION_BY_LETTER = {f.letter: f for f in CognitiveFunction}


class Effect(str, Enum):
    IMPROVE = "Improve"
    NEUTRAL = "Neutral"
    REDUCE = "Reduce"


#: Ordering used for "strictly better" comparisons: Reduce < Neutral < Improve.
EFFECT_RANK = {Effect.REDUCE: 0, Effect.NEUTRAL: 1, Effect.IMPROVE: 2}


class ControlMode(str, Enum):
    SCRAMBLED = "Scrambled"
    OPPORTUNISTIC = "Opportunistic"
    TACTICAL = "Tactical"
    STRATEGIC = "Strategic"

    @property
    def rank(self) -> int:
        """Reliability order: Scrambled 0 ... Strategic 3."""
        return _MODE_RANK[self]


_MODE_RANK = {
    ControlMode.SCRAMBLED: 0,
    ControlMode.OPPORTUNISTIC: 1,
    ControlMode.TACTICAL: 2,
    ControlMode.STRATEGIC: 3,
}


class TaxonomyError(ValueError):
    """Raised when a taxonomy document fails validation.

    ``errors`` holds every violation found, not just the first.
    """

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


@dataclass(frozen=True)
class FunctionInfo:
    id: CognitiveFunction
    display_name: str


@dataclass(frozen=True)
class GenericFailureType:
    id: str
    function: CognitiveFunction
    description: str
    nominal_cfp: float


@dataclass(frozen=True)
class CpcState:
    name: str
    effect: Effect


@dataclass(frozen=True)
class CpcDefinition:
    id: int
    name: str
    description: str
    states: tuple[CpcState, ...]

    def state(self, name: str) -> CpcState:
        for s in self.states:
            if s.name == name:
                return s
        raise KeyError(f"CPC {self.id} has no state {name!r}")


@dataclass(frozen=True)
class ModeInterval:
    mode: ControlMode
    hep_lower: float
    hep_upper: float


@dataclass(frozen=True)
class CocomGrid:
    """Total mapping (sum_reduce, sum_improve) -> ControlMode.

    ``rows[r][i]`` is the mode for ``sum_reduce == r`` and
    ``sum_improve == i``.
    """

    rows: tuple[tuple[ControlMode, ...], ...]

    @property
    def max_reduce(self) -> int:
        return len(self.rows) - 1

    @property
    def max_improve(self) -> int:
        return len(self.rows[0]) - 1

    def lookup(self, sum_reduce: int, sum_improve: int) -> ControlMode:
        if not (0 <= sum_reduce <= self.max_reduce):
            raise KeyError(f"sum_reduce {sum_reduce} outside grid 0..{self.max_reduce}")
        if not (0 <= sum_improve <= self.max_improve):
            raise KeyError(f"sum_improve {sum_improve} outside grid 0..{self.max_improve}")
        return self.rows[sum_reduce][sum_improve]


@dataclass(frozen=True)
class Taxonomy:
    """The full CREAM knowledge base.  Immutable after construction."""

    version: str
    functions: tuple[FunctionInfo, ...]
    failure_types: tuple[GenericFailureType, ...]
    cpcs: tuple[CpcDefinition, ...]
    mode_intervals: tuple[ModeInterval, ...]
    cocom: CocomGrid
    weights: Mapping[tuple[int, str, CognitiveFunction], float]
    activity_map: Mapping[str, CognitiveFunction]

    def failure_type(self, code: str) -> GenericFailureType:
        for gft in self.failure_types:
            if gft.id == code:
                return gft
        raise KeyError(f"unknown generic failure type code {code!r}")

    def failure_types_for(self, function: CognitiveFunction) -> tuple[GenericFailureType, ...]:
        return tuple(g for g in self.failure_types if g.function == function)

    def cpc(self, cpc_id: int) -> CpcDefinition:
        for c in self.cpcs:
            if c.id == cpc_id:
                return c
        raise KeyError(f"unknown CPC id {cpc_id}")

    def interval(self, mode: ControlMode) -> tuple[float, float]:
        for mi in self.mode_intervals:
            if mi.mode == mode:
                return (mi.hep_lower, mi.hep_upper)
        raise KeyError(f"no interval for mode {mode.value}")

    def weight(self, cpc_id: int, state_name: str, function: CognitiveFunction) -> float:
        return self.weights.get((cpc_id, state_name, function), 1.0)

    @property
    def max_improve(self) -> int:
        """Highest achievable sum of Improve-effect choices."""
        return sum(1 for c in self.cpcs
                   if any(s.effect is Effect.IMPROVE for s in c.states))

    @property
    def max_reduce(self) -> int:
        return sum(1 for c in self.cpcs
                   if any(s.effect is Effect.REDUCE for s in c.states))


def nominal_cfp(taxonomy: Taxonomy, gft_code: str) -> float:
    """Table value for a generic failure type, unmodified."""
    return taxonomy.failure_type(gft_code).nominal_cfp


# ---------------------------------------------------------------------------
# Built-in default dataset (RT-NDE adapted CREAM)
# ---------------------------------------------------------------------------

DEFAULT_VERSION = "rtnde-cream-1"

_DEFAULT_GFTS: list[tuple[str, str, str, float]] = [
    ("O1", "Observation", "Wrong object observed", 0.001),
    ("O2", "Observation", "Wrong identification", 0.007),
    ("O3", "Observation", "Observation not made", 0.007),
    ("I1", "Interpretation", "Faulty diagnosis", 0.02),
    ("I2", "Interpretation", "Decision error", 0.01),
    ("I3", "Interpretation", "Delayed interpretation", 0.01),
    ("P1", "Planning", "Priority error", 0.01),
    ("P2", "Planning", "Inadequate plan", 0.01),
    ("E1", "Execution", "Action of wrong type", 0.003),
    ("E2", "Execution", "Action at wrong time", 0.003),
    ("E3", "Execution", "Action on wrong object", 0.0005),
    ("E4", "Execution", "Action out of sequence", 0.003),
    ("E5", "Execution", "Missed action", 0.003),
]

_I, _N, _R = Effect.IMPROVE, Effect.NEUTRAL, Effect.REDUCE

_DEFAULT_CPCS: list[tuple[int, str, str, list[tuple[str, Effect]]]] = [
    (1, "Procedures and technical documentation",
     "Availability and currency of examination protocols, charts, history of "
     "previous exams, manufacturing films and reports, design plans, welding records.",
     [("Appropriate", _I), ("Acceptable", _N), ("Inappropriate", _R)]),
    (2, "Number of simultaneous objectives",
     "Number of welds and films to interpret, diversity of controlled areas and "
     "geometries, need for additional exposures, workload distribution.",
     [("Less than capacity", _N), ("At capacity", _N), ("More than capacity", _R)]),
    (3, "Local conditions of interpretation",
     "Interpretation room condition: darkness, quiet, temperature, space to "
     "deposit films and fill out examination reports.",
     [("Advantageous", _I), ("Compatible", _N), ("Incompatible", _R)]),
    (4, "Available time",
     "Number of radiographs to interpret, shutdown phase, pressure to release "
     "results quickly, need to catch up with delays, fatigue.",
     [("Adequate", _I), ("Temporarily inadequate", _N), ("Continually inadequate", _R)]),
    (5, "Quality of the hardware",
     "Collective equipment (illuminators, densitometers) and individual "
     "equipment (gloves, ruler, pencil, reading table).",
     [("Adequate, verified", _N), ("Satisfactory", _N), ("Inadequate", _R)]),
    (6, "Training and experience",
     "Level of knowledge, years of experience, frequency of skill maintenance, "
     "duration of companionship.",
     [("Adequate training, experienced", _I),
      ("Adequate training, little experience", _N),
      ("Inadequate", _R)]),
    (7, "Effectiveness of collaboration and communication",
     "Relations between plant, engineering, technical assistants and provider; "
     "pressure from clients present in the room; exercise of free will.",
     [("Very efficient", _I), ("Efficient", _N),
      ("Inefficient", _R), ("Undesirable", _R)]),
    (8, "Time of day and period of the week",
     "Day is 8am to 8pm; mid-week is Tuesday to Thursday.  Nights are calmer "
     "but more tiring; week boundaries carry travel and workload accumulation.",
     [("Day, mid-week", _N), ("Day, early or late week", _N),
      ("Night, mid-week", _I), ("Night, beginning or end of week", _R)]),
]

_DEFAULT_INTERVALS: list[tuple[ControlMode, float, float]] = [
    (ControlMode.SCRAMBLED, 0.1, 1.0),
    (ControlMode.OPPORTUNISTIC, 0.01, 0.5),
    (ControlMode.TACTICAL, 0.001, 0.1),
    (ControlMode.STRATEGIC, 0.00005, 0.01),
]

# Default per-effect multipliers for the extended-mode weight table.
DEFAULT_EFFECT_WEIGHTS = {_I: 0.5, _N: 1.0, _R: 5.0}

# Default grouping of the 15 elementary cognitive activities.  Heuristic:
# the source material names the activities but not their grouping.
_DEFAULT_ACTIVITY_MAP: dict[str, CognitiveFunction] = {
    "observe": CognitiveFunction.OBSERVATION,
    "scan": CognitiveFunction.OBSERVATION,
    "monitor": CognitiveFunction.OBSERVATION,
    "identify": CognitiveFunction.OBSERVATION,
    "diagnose": CognitiveFunction.INTERPRETATION,
    "evaluate": CognitiveFunction.INTERPRETATION,
    "compare": CognitiveFunction.INTERPRETATION,
    "plan": CognitiveFunction.PLANNING,
    "coordinate": CognitiveFunction.PLANNING,
    "execute": CognitiveFunction.EXECUTION,
    "record": CognitiveFunction.EXECUTION,
    "regulate": CognitiveFunction.EXECUTION,
    "maintain": CognitiveFunction.EXECUTION,
    "verify": CognitiveFunction.EXECUTION,
    "communicate": CognitiveFunction.EXECUTION,
}


def _default_grid(max_reduce: int, max_improve: int) -> CocomGrid:
    """Score-band grid: s = sum_improve - sum_reduce.

    s <= -6 Scrambled; -5..-2 Opportunistic; -1..2 Tactical; >= 3 Strategic.
    Monotone by construction and anchors both corners.
    """
    rows = []
    for r in range(max_reduce + 1):
        row = []
        for i in range(max_improve + 1):
            s = i - r
            if s <= -6:
                row.append(ControlMode.SCRAMBLED)
            elif s <= -2:
                row.append(ControlMode.OPPORTUNISTIC)
            elif s <= 2:
                row.append(ControlMode.TACTICAL)
            else:
                row.append(ControlMode.STRATEGIC)
        rows.append(tuple(row))
    return CocomGrid(tuple(rows))


@lru_cache(maxsize=1)
def default_taxonomy() -> Taxonomy:
    """The built-in RT-NDE dataset: 13 GFTs, 8 CPCs, 4 mode intervals,
    score-band COCOM grid, per-effect weight table, default activity map.
    """
    cpcs = tuple(
        CpcDefinition(cid, name, desc,
                      tuple(CpcState(n, e) for n, e in states))
        for cid, name, desc, states in _DEFAULT_CPCS
    )
    weights = {
        (c.id, s.name, f): DEFAULT_EFFECT_WEIGHTS[s.effect]
        for c in cpcs for s in c.states for f in CognitiveFunction
    }
    t = Taxonomy(
        version=DEFAULT_VERSION,
        functions=tuple(FunctionInfo(f, f.value) for f in CognitiveFunction),
        failure_types=tuple(
            GenericFailureType(code, CognitiveFunction(fn), desc, p)
            for code, fn, desc, p in _DEFAULT_GFTS
        ),
        cpcs=cpcs,
        mode_intervals=tuple(ModeInterval(m, lo, hi) for m, lo, hi in _DEFAULT_INTERVALS),
        cocom=_default_grid(8, 6),
        weights=weights,
        activity_map=dict(_DEFAULT_ACTIVITY_MAP),
    )
    errors = validate_taxonomy(t)
    assert not errors, errors
    return t


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_taxonomy(t: Taxonomy) -> list[str]:
    """Every invariant violation in the taxonomy, empty when valid."""
    errors: list[str] = []

    ids = [f.id for f in t.functions]
    if sorted(ids, key=lambda f: f.value) != sorted(CognitiveFunction, key=lambda f: f.value):
        errors.append("functions must be exactly the four cognitive functions")

    seen: set[str] = set()
    for gft in t.failure_types:
        if gft.id in seen:
            errors.append(f"duplicate failure type id {gft.id}")
        seen.add(gft.id)
        if not gft.id or gft.id[0] != gft.function.letter:
            errors.append(f"failure type {gft.id}: letter does not match function "
                          f"{gft.function.value}")
        if not (0.0 < gft.nominal_cfp < 1.0):
            errors.append(f"failure type {gft.id}: probability out of range "
                          f"(0,1): {gft.nominal_cfp}")

    cpc_ids: set[int] = set()
    for c in t.cpcs:
        if c.id in cpc_ids:
            errors.append(f"duplicate CPC id {c.id}")
        cpc_ids.add(c.id)
        if len(c.states) < 2:
            errors.append(f"CPC {c.id}: needs at least 2 states")
        names = [s.name for s in c.states]
        if len(set(names)) != len(names):
            errors.append(f"CPC {c.id}: duplicate state names")

    modes = {mi.mode for mi in t.mode_intervals}
    if modes != set(ControlMode):
        errors.append("mode intervals must cover all four control modes")
    for mi in t.mode_intervals:
        if not (mi.hep_lower < mi.hep_upper):
            errors.append(f"mode {mi.mode.value}: hep_lower must be < hep_upper")

    errors.extend(_validate_grid(t.cocom, t.max_reduce, t.max_improve))

    for (cid, state, fn), w in t.weights.items():
        if w <= 0:
            errors.append(f"weight ({cid}, {state!r}, {fn.value}) must be > 0: {w}")
        try:
            t.cpc(cid).state(state)
        except KeyError as exc:
            errors.append(f"weight entry refers to unknown CPC state: {exc}")

    for activity, fn in t.activity_map.items():
        if fn not in set(CognitiveFunction):
            errors.append(f"activity {activity!r} maps to unknown function")

    return errors


def _validate_grid(grid: CocomGrid, max_reduce: int, max_improve: int) -> list[str]:
    errors: list[str] = []
    if len(grid.rows) != max_reduce + 1:
        errors.append(f"COCOM grid must have {max_reduce + 1} rows "
                      f"(sum_reduce 0..{max_reduce}), got {len(grid.rows)}")
        return errors
    for r, row in enumerate(grid.rows):
        if len(row) != max_improve + 1:
            errors.append(f"COCOM grid row {r} must have {max_improve + 1} columns, "
                          f"got {len(row)}")
            return errors
    # Monotonicity: more Reduce never improves, more Improve never degrades.
    for r in range(max_reduce + 1):
        for i in range(max_improve + 1):
            if r + 1 <= max_reduce and grid.rows[r + 1][i].rank > grid.rows[r][i].rank:
                errors.append(f"non-monotone COCOM grid: ({r + 1},{i}) better than ({r},{i})")
            if i + 1 <= max_improve and grid.rows[r][i + 1].rank < grid.rows[r][i].rank:
                errors.append(f"non-monotone COCOM grid: ({r},{i + 1}) worse than ({r},{i})")
    if grid.rows[max_reduce][0] is not ControlMode.SCRAMBLED:
        errors.append(f"COCOM corner ({max_reduce},0) must be Scrambled")
    if grid.rows[0][max_improve] is not ControlMode.STRATEGIC:
        errors.append(f"COCOM corner (0,{max_improve}) must be Strategic")
    return errors


# ---------------------------------------------------------------------------
# Serialization (JSON document format)
# ---------------------------------------------------------------------------

def taxonomy_to_dict(t: Taxonomy) -> dict:
    return {
        "version": t.version,
        "functions": [{"id": f.id.value, "display_name": f.display_name}
                      for f in t.functions],
        "failure_types": [
            {"id": g.id, "function": g.function.value,
             "description": g.description, "nominal_cfp": g.nominal_cfp}
            for g in t.failure_types
        ],
        "cpcs": [
            {"id": c.id, "name": c.name, "description": c.description,
             "states": [{"name": s.name, "effect": s.effect.value}
                        for s in c.states]}
            for c in t.cpcs
        ],
        "control_modes": [
            {"id": mi.mode.value, "hep_lower": mi.hep_lower, "hep_upper": mi.hep_upper}
            for mi in t.mode_intervals
        ],
        "cocom_grid": [[mode.value for mode in row] for row in t.cocom.rows],
        "weights": [
            {"cpc_id": cid, "state": state, "function": fn.value, "multiplier": w}
            for (cid, state, fn), w in sorted(
                t.weights.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].value))
        ],
        "activity_map": {a: fn.value for a, fn in sorted(t.activity_map.items())},
    }


def serialize_taxonomy(t: Taxonomy) -> str:
    return json.dumps(taxonomy_to_dict(t), indent=2) + "\n"


def taxonomy_from_dict(doc: dict) -> Taxonomy:
    """Build and validate a taxonomy from a parsed document.

    Raises TaxonomyError listing every violation found.
    """
    errors: list[str] = []

    def fn_of(name: str, where: str) -> CognitiveFunction | None:
        try:
            return CognitiveFunction(name)
        except ValueError:
            errors.append(f"{where}: unknown cognitive function {name!r}")
            return None

    functions = []
    for f in doc.get("functions", []):
        fn = fn_of(f.get("id", ""), "functions")
        if fn is not None:
            functions.append(FunctionInfo(fn, f.get("display_name", fn.value)))

    failure_types = []
    for g in doc.get("failure_types", []):
        fn = fn_of(g.get("function", ""), f"failure_types[{g.get('id')}]")
        if fn is None:
            continue
        failure_types.append(GenericFailureType(
            g.get("id", ""), fn, g.get("description", ""),
            float(g.get("nominal_cfp", 0.0))))

    cpcs = []
    for c in doc.get("cpcs", []):
        states = []
        for s in c.get("states", []):
            try:
                eff = Effect(s.get("effect", ""))
            except ValueError:
                errors.append(f"cpcs[{c.get('id')}]: unknown effect {s.get('effect')!r}")
                continue
            states.append(CpcState(s.get("name", ""), eff))
        cpcs.append(CpcDefinition(int(c.get("id", 0)), c.get("name", ""),
                                  c.get("description", ""), tuple(states)))

    mode_intervals = []
    for m in doc.get("control_modes", []):
        try:
            mode = ControlMode(m.get("id", ""))
        except ValueError:
            errors.append(f"control_modes: unknown mode {m.get('id')!r}")
            continue
        mode_intervals.append(ModeInterval(mode, float(m.get("hep_lower", 0.0)),
                                           float(m.get("hep_upper", 0.0))))

    grid_rows = []
    for r, row in enumerate(doc.get("cocom_grid", [])):
        cells = []
        for i, cell in enumerate(row):
            try:
                cells.append(ControlMode(cell))
            except ValueError:
                errors.append(f"cocom_grid[{r}][{i}]: unknown mode {cell!r}")
                cells.append(ControlMode.SCRAMBLED)
        grid_rows.append(tuple(cells))
    if not grid_rows:
        errors.append("cocom_grid: missing or empty")
        grid_rows = [(ControlMode.SCRAMBLED,)]

    weights: dict[tuple[int, str, CognitiveFunction], float] = {}
    for w in doc.get("weights", []):
        fn = fn_of(w.get("function", ""), "weights")
        if fn is None:
            continue
        weights[(int(w.get("cpc_id", 0)), w.get("state", ""), fn)] = \
            float(w.get("multiplier", 1.0))

    activity_map: dict[str, CognitiveFunction] = {}
    for a, name in doc.get("activity_map", {}).items():
        fn = fn_of(name, f"activity_map[{a}]")
        if fn is not None:
            activity_map[a] = fn

    if errors:
        raise TaxonomyError(errors)

    t = Taxonomy(
        version=str(doc.get("version", "unversioned")),
        functions=tuple(functions),
        failure_types=tuple(failure_types),
        cpcs=tuple(cpcs),
        mode_intervals=tuple(mode_intervals),
        cocom=CocomGrid(tuple(grid_rows)),
        weights=weights,
        activity_map=activity_map,
    )
    errors = validate_taxonomy(t)
    if errors:
        raise TaxonomyError(errors)
    return t


def load_taxonomy(source: str | Path) -> Taxonomy:
    """Parse a taxonomy JSON document from text or a file path.

    Raises TaxonomyError with the complete list of violations.
    """
    if isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaxonomyError([f"malformed document: {exc}"]) from exc
    if not isinstance(doc, dict):
        raise TaxonomyError(["malformed document: top level must be an object"])
    return taxonomy_from_dict(doc)


def reference_document_path() -> Path:
    """Path of the shipped default-taxonomy JSON reference file."""
    return Path(str(resources.files("creamkit") / "data" / "default_taxonomy.json"))
