"""Rendering of analysis outputs: JSON, CSV, hand-emitted SVG histograms
and a markdown summary.

All rendering is deterministic for identical inputs: numeric output uses a
fixed decimal policy, the SVG layout constants are fixed, and provenance
carries content digests instead of wall-clock time unless a timestamp is
supplied explicitly.  That keeps golden-file tests byte-stable.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass

from .extended import (INDEPENDENCE_NOTE, DemandProfile, ExtendedResult,
                       extended_to_dict, rank_critical)
from .screening import (CpcAssessment, ScreeningResult, assessment_to_dict,
                        screening_to_dict)
from .taxonomy import CognitiveFunction, Taxonomy
from .whatif import WhatIfDelta, delta_to_dict, sweep_is_flat

FUNCTION_ORDER = tuple(CognitiveFunction)

CSV_HEADER = ["node", "function", "cff", "nominal", "adjusted_cfp", "source"]


def fmt_prob(value: float) -> str:
    """Fixed 6-significant-digit scientific form for tabular output."""
    return f"{value:.6e}"


def fmt_short(value: float) -> str:
    """Shortest exact decimal, for intervals quoted in prose ("0.001")."""
    return repr(value)


def content_digest(*parts: str) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()[:16]


@dataclass(frozen=True)
class Provenance:
    taxonomy_version: str
    input_digest: str
    generator: str = "creamkit"
    timestamp: str | None = None

    def as_dict(self) -> dict:
        doc = {"taxonomy_version": self.taxonomy_version,
               "input_digest": self.input_digest,
               "generator": self.generator}
        if self.timestamp is not None:
            doc["timestamp"] = self.timestamp
        return doc


@dataclass(frozen=True)
class ReportBundle:
    screening: ScreeningResult
    extended: ExtendedResult
    profiles: tuple[tuple[str, DemandProfile], ...]  # (label, profile)
    provenance: Provenance
    taxonomy: Taxonomy
    sweep: tuple[WhatIfDelta, ...] | None = None
    top_k: int = 5


# ---------------------------------------------------------------------------
# CSV / JSON
# ---------------------------------------------------------------------------

def result_csv(result: ExtendedResult) -> str:
    """One row per assignment; `.` decimal separator regardless of locale."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in result.per_assignment:
        writer.writerow([r.node, r.function.value, r.cff,
                         fmt_prob(r.nominal), fmt_prob(r.adjusted_cfp), r.source])
    return buf.getvalue()


def report_json(bundle: ReportBundle) -> str:
    doc = {
        "provenance": bundle.provenance.as_dict(),
        "context": assessment_to_dict(bundle.extended.context),
        "screening": screening_to_dict(bundle.screening),
        "extended": extended_to_dict(bundle.extended),
        "profiles": [
            {"label": label, "counts": {f.value: p.counts[f] for f in FUNCTION_ORDER}}
            for label, p in bundle.profiles
        ],
    }
    if bundle.sweep is not None:
        doc["whatif"] = [delta_to_dict(d) for d in bundle.sweep]
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# SVG histogram (hand emitted; layout constants are part of the format)
# ---------------------------------------------------------------------------

BAR_WIDTH = 26
BAR_GAP = 6
GROUP_GAP = 36
MARGIN_LEFT = 46
MARGIN_TOP = 18
MARGIN_BOTTOM = 42
CHART_HEIGHT = 200

BAR_FILLS = {
    CognitiveFunction.OBSERVATION: "#4878cf",
    CognitiveFunction.INTERPRETATION: "#d65f5f",
    CognitiveFunction.PLANNING: "#6acc65",
    CognitiveFunction.EXECUTION: "#b47cc7",
}


def histogram_svg(profiles: list[DemandProfile], labels: list[str]) -> str:
    """Grouped-bar histogram: one group per profile, four bars per group in
    fixed function order, counts as axis labels."""
    if not profiles:
        raise ValueError("profiles must be non-empty")
    if len(labels) != len(profiles):
        raise ValueError("labels must match profiles one-to-one")

    max_count = max((p.counts[f] for p in profiles for f in FUNCTION_ORDER),
                    default=0)
    scale_max = max(max_count, 1)
    group_width = len(FUNCTION_ORDER) * BAR_WIDTH + (len(FUNCTION_ORDER) - 1) * BAR_GAP
    width = MARGIN_LEFT + len(profiles) * (group_width + GROUP_GAP)
    height = MARGIN_TOP + CHART_HEIGHT + MARGIN_BOTTOM
    baseline = MARGIN_TOP + CHART_HEIGHT

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        '<style>text{font-family:sans-serif;font-size:11px}</style>',
        # axes
        f'<line x1="{MARGIN_LEFT - 6}" y1="{baseline}" x2="{width - 8}" '
        f'y2="{baseline}" stroke="#333"/>',
        f'<line x1="{MARGIN_LEFT - 6}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT - 6}" '
        f'y2="{baseline}" stroke="#333"/>',
    ]
    # y ticks: 0 and max
    for tick in sorted({0, scale_max}):
        y = baseline - round(CHART_HEIGHT * tick / scale_max)
        parts.append(f'<text x="{MARGIN_LEFT - 10}" y="{y + 4}" '
                     f'text-anchor="end">{tick}</text>')

    x = MARGIN_LEFT
    for profile, label in zip(profiles, labels):
        for idx, fn in enumerate(FUNCTION_ORDER):
            count = profile.counts[fn]
            bar_h = round(CHART_HEIGHT * count / scale_max)
            bx = x + idx * (BAR_WIDTH + BAR_GAP)
            parts.append(
                f'<rect x="{bx}" y="{baseline - bar_h}" width="{BAR_WIDTH}" '
                f'height="{bar_h}" fill="{BAR_FILLS[fn]}">'
                f'<title>{fn.value}: {count}</title></rect>')
            parts.append(f'<text x="{bx + BAR_WIDTH // 2}" '
                         f'y="{baseline - bar_h - 4}" '
                         f'text-anchor="middle">{count}</text>')
        parts.append(f'<text x="{x + group_width // 2}" y="{baseline + 16}" '
                     f'text-anchor="middle">{_xml_escape(label)}</text>')
        x += group_width + GROUP_GAP

    # legend along the bottom
    lx = MARGIN_LEFT
    ly = baseline + 32
    for fn in FUNCTION_ORDER:
        parts.append(f'<rect x="{lx}" y="{ly - 9}" width="10" height="10" '
                     f'fill="{BAR_FILLS[fn]}"/>')
        parts.append(f'<text x="{lx + 14}" y="{ly}">{fn.value}</text>')
        lx += 14 + 8 * len(fn.value) + 18
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _xml_escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


# ---------------------------------------------------------------------------
# Markdown summary
# ---------------------------------------------------------------------------

def markdown_report(bundle: ReportBundle) -> str:
    t = bundle.taxonomy
    ext = bundle.extended
    scr = bundle.screening
    lines: list[str] = ["# Human reliability analysis report", ""]

    lines += ["## Working context", "",
              "| # | CPC | Chosen state | Effect |",
              "|---|-----|--------------|--------|"]
    for cpc in t.cpcs:
        state_name = ext.context.choices[cpc.id]
        effect = cpc.state(state_name).effect.value
        lines.append(f"| {cpc.id} | {cpc.name} | {state_name} | {effect} |")
    lines.append("")

    lo, hi = scr.hep_interval
    lines += ["## Control mode", "",
              f"Combined score: reduce {scr.score.sum_reduce}, "
              f"neutral {scr.score.sum_neutral}, improve {scr.score.sum_improve}.",
              "",
              f"Control mode: **{scr.mode.value}**, "
              f"HEP interval [{fmt_short(lo)}, {fmt_short(hi)}].", ""]

    top = rank_critical(ext, bundle.top_k)
    lines += [f"## Top {len(top)} critical assignments", "",
              "| Node | Function | CFF | Adjusted CFP | Source |",
              "|------|----------|-----|--------------|--------|"]
    for r in top:
        lines.append(f"| {r.node} | {r.function.value} | {r.cff} | "
                     f"{fmt_prob(r.adjusted_cfp)} | {r.source} |")
    lines += ["", f"Aggregate failure probability: "
              f"{fmt_prob(ext.aggregate_failure_p)} "
              f"({INDEPENDENCE_NOTE}).", ""]

    lines += ["## Cognitive demand profile", "",
              "| Scope | " + " | ".join(f.value for f in FUNCTION_ORDER) + " |",
              "|-------|" + "|".join(["---"] * len(FUNCTION_ORDER)) + "|"]
    for label, profile in bundle.profiles:
        counts = " | ".join(str(profile.counts[f]) for f in FUNCTION_ORDER)
        lines.append(f"| {label} | {counts} |")
    lines.append("")

    if bundle.sweep is not None:
        lines += ["## What-if: single-CPC improvements", ""]
        sweep = list(bundle.sweep)
        if sweep_is_flat(sweep):
            lines += ["All assignments carry analyst overrides, so the "
                      "aggregate does not respond to context changes; ranking "
                      "below is by control-mode change only.", ""]
            sweep.sort(key=lambda d: (-d.mode_after.rank, d.cpc_id))
        lines += ["| CPC | From | To | Mode | Aggregate after |",
                  "|-----|------|----|------|-----------------|"]
        for d in sweep:
            mode = d.mode_after.value
            if d.mode_after is not d.mode_before:
                mode = f"{d.mode_before.value} → {d.mode_after.value}"
            lines.append(f"| {d.cpc_id} | {d.from_state} | {d.to_state} | "
                         f"{mode} | {fmt_prob(d.aggregate_after)} |")
        lines.append("")

    prov = bundle.provenance
    lines += ["## Provenance", "",
              f"- taxonomy version: {prov.taxonomy_version}",
              f"- input digest: {prov.input_digest}",
              f"- generator: {prov.generator}"]
    if prov.timestamp is not None:
        lines.append(f"- timestamp: {prov.timestamp}")
    lines.append("")
    return "\n".join(lines)
