"""Acceptance suite: one test per exit criterion, each printing a
PASS/FAIL line (run with ``pytest -s tests/test_acceptance.py``)."""

import itertools
import random
import time

import pytest

from creamkit.extended import (adjusted_cfp, aggregate_failure_probability,
                               analyze, demand_profile)
from creamkit.hta import collect_assignments, count_nodes, parse_hta, serialize_hta
from creamkit.reporting import histogram_svg, markdown_report, report_json, result_csv
from creamkit.screening import neutral_assessment
from creamkit.taxonomy import CognitiveFunction, ControlMode, Effect, nominal_cfp

from conftest import random_tree
from test_extended import brute_force_any_failure
from test_screening import exhaustive_mode_monotonicity


def _report(name: str, ok: bool, detail: str = ""):
    mark = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{mark}] {name}{suffix}")
    assert ok, name


def test_nominal_cfp_table_reproduction(taxonomy):
    expected = {
        "O1": 0.001, "O2": 0.007, "O3": 0.007,
        "I1": 0.02, "I2": 0.01, "I3": 0.01,
        "P1": 0.01, "P2": 0.01,
        "E1": 0.003, "E2": 0.003, "E3": 0.0005, "E4": 0.003, "E5": 0.003,
    }
    start = time.perf_counter()
    ok = all(nominal_cfp(taxonomy, code) == value
             for code, value in expected.items())
    elapsed_ms = (time.perf_counter() - start) * 1000
    _report("nominal CFP table: 13 exact values", ok and elapsed_ms < 1,
            f"{elapsed_ms:.3f} ms")


def test_hep_interval_reproduction(taxonomy):
    expected = {
        ControlMode.STRATEGIC: (0.00005, 0.01),
        ControlMode.TACTICAL: (0.001, 0.1),
        ControlMode.OPPORTUNISTIC: (0.01, 0.5),
        ControlMode.SCRAMBLED: (0.1, 1.0),
    }
    ok = all(taxonomy.interval(m) == iv for m, iv in expected.items())
    _report("HEP intervals: 4 exact intervals", ok)


def test_cpc_catalog_reproduction(taxonomy):
    expected_states = {
        1: [("Appropriate", "Improve"), ("Acceptable", "Neutral"),
            ("Inappropriate", "Reduce")],
        2: [("Less than capacity", "Neutral"), ("At capacity", "Neutral"),
            ("More than capacity", "Reduce")],
        3: [("Advantageous", "Improve"), ("Compatible", "Neutral"),
            ("Incompatible", "Reduce")],
        4: [("Adequate", "Improve"), ("Temporarily inadequate", "Neutral"),
            ("Continually inadequate", "Reduce")],
        5: [("Adequate, verified", "Neutral"), ("Satisfactory", "Neutral"),
            ("Inadequate", "Reduce")],
        6: [("Adequate training, experienced", "Improve"),
            ("Adequate training, little experience", "Neutral"),
            ("Inadequate", "Reduce")],
        7: [("Very efficient", "Improve"), ("Efficient", "Neutral"),
            ("Inefficient", "Reduce"), ("Undesirable", "Reduce")],
        8: [("Day, mid-week", "Neutral"), ("Day, early or late week", "Neutral"),
            ("Night, mid-week", "Improve"),
            ("Night, beginning or end of week", "Reduce")],
    }
    ok = len(taxonomy.cpcs) == 8
    for cpc in taxonomy.cpcs:
        actual = [(s.name, s.effect.value) for s in cpc.states]
        ok = ok and actual == expected_states[cpc.id]
    ok = ok and taxonomy.max_improve == 6 and taxonomy.max_reduce == 8
    _report("CPC catalog: 8 CPCs, printed states/effects, maxima 6/8", ok)


def test_golden_fixture_analysis(step3_tree, taxonomy):
    start = time.perf_counter()
    context = neutral_assessment(taxonomy)
    result = analyze(step3_tree, context, taxonomy)
    profile = demand_profile(step3_tree, "3")
    elapsed_ms = (time.perf_counter() - start) * 1000

    printed = [0.01, 0.01, 0.07, 0.01, 0.07, 0.03, 0.01, 0.0005, 0.07, 0.01,
               0.0005, 0.01, 0.01, 0.003, 0.07, 0.01, 0.003, 0.003, 0.001,
               0.01, 0.03, 0.07, 0.01, 0.003, 0.03, 0.07, 0.01, 0.03, 0.001,
               0.01, 0.03]
    ok = [r.adjusted_cfp for r in result.per_assignment] == printed
    counts = profile.counts
    ok = ok and counts == {CognitiveFunction.OBSERVATION: 8,
                           CognitiveFunction.INTERPRETATION: 0,
                           CognitiveFunction.PLANNING: 12,
                           CognitiveFunction.EXECUTION: 11}
    interp = counts[CognitiveFunction.INTERPRETATION]
    ok = ok and all(interp < counts[f] for f in CognitiveFunction
                    if f is not CognitiveFunction.INTERPRETATION)
    ok = ok and elapsed_ms < 10
    _report("golden fixture: 31 printed CFPs, profile (8,0,12,11), "
            "interpretation strictly smallest", ok, f"{elapsed_ms:.2f} ms")


def test_unit_weight_identity(taxonomy):
    context = neutral_assessment(taxonomy)  # all default weights 1.0
    ok = all(adjusted_cfp(g.nominal_cfp, g.function, context, taxonomy)
             == g.nominal_cfp for g in taxonomy.failure_types)
    _report("unit-weight identity over all 13 GFTs", ok)


def test_aggregation_against_oracle():
    rng = random.Random(20240901)
    worst = 0.0
    for _ in range(200):
        cfps = [rng.random() for _ in range(rng.randint(0, 12))]
        got = aggregate_failure_probability(cfps)
        want = brute_force_any_failure(cfps)
        worst = max(worst, abs(got - want))
    _report("aggregation matches 2^n brute force, 200 lists, tol 1e-9",
            worst <= 1e-9, f"max abs err {worst:.2e}")


def test_cocom_monotonicity_exhaustive(taxonomy):
    start = time.perf_counter()
    comparisons = exhaustive_mode_monotonicity(taxonomy)
    elapsed = time.perf_counter() - start
    _report("COCOM monotonicity over 11,664 assessments", elapsed < 5,
            f"{comparisons} comparisons in {elapsed:.2f} s")


def test_parser_roundtrip(step3_tree, synthetic_tree):
    ok = parse_hta(serialize_hta(step3_tree)) == step3_tree
    ok = ok and parse_hta(serialize_hta(synthetic_tree)) == synthetic_tree
    ok = ok and count_nodes(step3_tree) == 19
    ok = ok and len(collect_assignments(step3_tree)) == 31
    rng = random.Random(7)
    failures = 0
    for _ in range(500):
        tree = random_tree(rng)
        if parse_hta(serialize_hta(tree)) != tree:
            failures += 1
    _report("parser roundtrip: fixtures + 500 random trees, counts 19/31",
            ok and failures == 0, f"{failures} roundtrip failures")


def test_report_determinism(step3_tree, taxonomy):
    from creamkit.reporting import Provenance, ReportBundle, content_digest
    from creamkit.screening import screen
    from creamkit.whatif import single_cpc_sweep

    def render() -> bytes:
        context = neutral_assessment(taxonomy)
        bundle = ReportBundle(
            screening=screen(context, taxonomy),
            extended=analyze(step3_tree, context, taxonomy),
            profiles=(("step 3", demand_profile(step3_tree, "3")),),
            provenance=Provenance(taxonomy.version,
                                  content_digest(serialize_hta(step3_tree))),
            taxonomy=taxonomy,
            sweep=tuple(single_cpc_sweep(step3_tree, context, taxonomy)),
        )
        blob = (report_json(bundle) + result_csv(bundle.extended)
                + markdown_report(bundle)
                + histogram_svg([p for _, p in bundle.profiles],
                                [l for l, _ in bundle.profiles]))
        return blob.encode("utf-8")

    _report("report determinism: byte-identical repeated renders",
            render() == render())
