import json

import pytest
from hypothesis import given, strategies as st

from creamkit.taxonomy import (CocomGrid, CognitiveFunction, ControlMode,
                               Effect, TaxonomyError, _validate_grid,
                               default_taxonomy, load_taxonomy, nominal_cfp,
                               reference_document_path, serialize_taxonomy,
                               taxonomy_to_dict)

TABLE2 = {
    "O1": 0.001, "O2": 0.007, "O3": 0.007,
    "I1": 0.02, "I2": 0.01, "I3": 0.01,
    "P1": 0.01, "P2": 0.01,
    "E1": 0.003, "E2": 0.003, "E3": 0.0005, "E4": 0.003, "E5": 0.003,
}

TABLE1 = {
    ControlMode.STRATEGIC: (0.00005, 0.01),
    ControlMode.TACTICAL: (0.001, 0.1),
    ControlMode.OPPORTUNISTIC: (0.01, 0.5),
    ControlMode.SCRAMBLED: (0.1, 1.0),
}


class TestDefaultTaxonomy:
    def test_thirteen_failure_types(self, taxonomy):
        assert len(taxonomy.failure_types) == 13

    @pytest.mark.parametrize("code,value", sorted(TABLE2.items()))
    def test_nominal_values_exact(self, taxonomy, code, value):
        assert nominal_cfp(taxonomy, code) == value

    @pytest.mark.parametrize("mode,interval", TABLE1.items())
    def test_mode_intervals_exact(self, taxonomy, mode, interval):
        assert taxonomy.interval(mode) == interval

    def test_i1_example(self, taxonomy):
        assert taxonomy.failure_type("I1").nominal_cfp == 0.02

    def test_eight_cpcs(self, taxonomy):
        assert len(taxonomy.cpcs) == 8
        assert [c.id for c in taxonomy.cpcs] == list(range(1, 9))

    def test_cpc5_has_no_improve_state(self, taxonomy):
        effects = [s.effect for s in taxonomy.cpc(5).states]
        assert Effect.IMPROVE not in effects

    def test_cpc2_has_no_improve_state(self, taxonomy):
        effects = [s.effect for s in taxonomy.cpc(2).states]
        assert Effect.IMPROVE not in effects

    def test_cpc8_effect_split(self, taxonomy):
        effects = [s.effect for s in taxonomy.cpc(8).states]
        assert len(effects) == 4
        assert effects.count(Effect.NEUTRAL) == 2
        assert effects.count(Effect.IMPROVE) == 1
        assert effects.count(Effect.REDUCE) == 1

    def test_every_cpc_has_reduce_state(self, taxonomy):
        for cpc in taxonomy.cpcs:
            assert any(s.effect is Effect.REDUCE for s in cpc.states), cpc.id

    def test_derived_maxima(self, taxonomy):
        assert taxonomy.max_improve == 6
        assert taxonomy.max_reduce == 8

    def test_unknown_gft_code(self, taxonomy):
        with pytest.raises(KeyError):
            nominal_cfp(taxonomy, "X9")

    def test_cocom_corners(self, taxonomy):
        assert taxonomy.cocom.lookup(8, 0) is ControlMode.SCRAMBLED
        assert taxonomy.cocom.lookup(0, 6) is ControlMode.STRATEGIC
        assert taxonomy.cocom.lookup(0, 0) is ControlMode.TACTICAL

    def test_neutral_states_weigh_one(self, taxonomy):
        for cpc in taxonomy.cpcs:
            for state in cpc.states:
                if state.effect is Effect.NEUTRAL:
                    for fn in CognitiveFunction:
                        assert taxonomy.weight(cpc.id, state.name, fn) == 1.0


class TestLoading:
    def test_roundtrip_identity(self, taxonomy):
        assert load_taxonomy(serialize_taxonomy(taxonomy)) == taxonomy

    def test_reference_file_matches_default(self, taxonomy):
        assert load_taxonomy(reference_document_path()) == taxonomy

    def test_probability_out_of_range(self, taxonomy):
        doc = taxonomy_to_dict(taxonomy)
        doc["failure_types"][0]["nominal_cfp"] = 1.5
        with pytest.raises(TaxonomyError) as exc:
            load_taxonomy(json.dumps(doc))
        assert any("probability out of range" in e for e in exc.value.errors)

    def test_non_monotone_grid_rejected(self, taxonomy):
        doc = taxonomy_to_dict(taxonomy)
        # (0,0) -> Scrambled while (1,0) -> Tactical: a strict degradation
        # of context yields a better mode
        doc["cocom_grid"][0][0] = "Scrambled"
        doc["cocom_grid"][1][0] = "Tactical"
        with pytest.raises(TaxonomyError) as exc:
            load_taxonomy(json.dumps(doc))
        assert any("non-monotone COCOM grid" in e for e in exc.value.errors)

    def test_duplicate_gft_id_rejected(self, taxonomy):
        doc = taxonomy_to_dict(taxonomy)
        doc["failure_types"][1]["id"] = "O1"
        with pytest.raises(TaxonomyError):
            load_taxonomy(json.dumps(doc))

    def test_malformed_document(self):
        with pytest.raises(TaxonomyError) as exc:
            load_taxonomy("{not json")
        assert any("malformed document" in e for e in exc.value.errors)

    def test_error_report_is_complete(self, taxonomy):
        doc = taxonomy_to_dict(taxonomy)
        doc["failure_types"][0]["nominal_cfp"] = -1.0
        doc["failure_types"][1]["id"] = "Q2"
        with pytest.raises(TaxonomyError) as exc:
            load_taxonomy(json.dumps(doc))
        assert len(exc.value.errors) >= 2


@st.composite
def random_grids(draw):
    """Arbitrary (not necessarily monotone) 9x7 mode grids."""
    modes = list(ControlMode)
    rows = draw(st.lists(
        st.lists(st.sampled_from(modes), min_size=7, max_size=7),
        min_size=9, max_size=9))
    return CocomGrid(tuple(tuple(r) for r in rows))


def _is_monotone(grid: CocomGrid) -> bool:
    for r in range(9):
        for i in range(7):
            if r + 1 < 9 and grid.rows[r + 1][i].rank > grid.rows[r][i].rank:
                return False
            if i + 1 < 7 and grid.rows[r][i + 1].rank < grid.rows[r][i].rank:
                return False
    return True


@given(random_grids())
def test_grid_validation_matches_pairwise_scan(grid):
    errors = _validate_grid(grid, 8, 6)
    monotone_errors = [e for e in errors if "non-monotone" in e]
    assert bool(monotone_errors) == (not _is_monotone(grid))
