import random

import pytest

from creamkit.hta import (CfAssignment, HtaParseError, TaskNode, TaskTree,
                          collect_assignments, count_nodes, parse_hta,
                          serialize_hta, tree_from_dict, tree_to_dict,
                          validate_hta)
from creamkit.taxonomy import CognitiveFunction

from conftest import random_tree


class TestParse:
    def test_single_leaf_with_assignment(self):
        tree = parse_hta('3 "step" \n3.1 "sub"\n'
                         '3.1.1 "Open paper folder" cf=Planning:P1@0.01')
        leaf = tree.node("3.1.1")
        assert leaf.children == ()
        assert len(leaf.assignments) == 1
        a = leaf.assignments[0]
        assert a.function is CognitiveFunction.PLANNING
        assert a.cff == "P1"
        assert a.cfp_override == 0.01

    def test_empty_document(self):
        tree = parse_hta("")
        assert tree.roots == ()

    def test_comment_only_document(self):
        assert parse_hta("# nothing here\n\n").roots == ()

    def test_numbering_gap(self):
        with pytest.raises(HtaParseError) as exc:
            parse_hta('3 "a"\n3.1 "b"\n3.3 "c"')
        assert any("numbering gap after 3.1" in str(d)
                   for d in exc.value.diagnostics)

    def test_duplicate_number(self):
        with pytest.raises(HtaParseError) as exc:
            parse_hta('1 "a"\n1.1 "b"\n1.1 "c"')
        assert any("duplicate" in str(d) for d in exc.value.diagnostics)

    def test_missing_parent(self):
        with pytest.raises(HtaParseError) as exc:
            parse_hta('1 "a"\n2.1 "b"')
        assert any("no parent" in str(d) for d in exc.value.diagnostics)

    def test_unknown_function_token(self):
        with pytest.raises(HtaParseError) as exc:
            parse_hta('1 "a" cf=Guessing')
        assert any("unknown cognitive function" in str(d)
                   for d in exc.value.diagnostics)

    def test_cff_function_mismatch(self):
        with pytest.raises(HtaParseError) as exc:
            parse_hta('1 "a" cf=Planning:O2')
        assert any("O2 belongs to Observation" in str(d)
                   for d in exc.value.diagnostics)

    def test_comma_decimal_cfp_accepted(self):
        tree = parse_hta('1 "a" cf=Observation:O2@7,00E-02')
        assert tree.roots[0].assignments[0].cfp_override == 0.07

    def test_diagnostics_carry_line_numbers(self):
        with pytest.raises(HtaParseError) as exc:
            parse_hta('# header\n1 "a"\nbogus line')
        assert exc.value.diagnostics[0].line == 3

    def test_all_errors_reported(self):
        with pytest.raises(HtaParseError) as exc:
            parse_hta('1 "a" cf=Nope\n1.1 "b"\n1.3 "gap"')
        assert len(exc.value.diagnostics) == 2

    def test_comment_hash_inside_title(self):
        tree = parse_hta('1 "step # one" # trailing comment')
        assert tree.roots[0].title == "step # one"

    def test_observer_alias(self):
        tree = parse_hta('1 "a" cf=Observer:O3')
        assert tree.roots[0].assignments[0].function is CognitiveFunction.OBSERVATION


class TestFixture:
    def test_node_and_assignment_counts(self, step3_tree):
        assert count_nodes(step3_tree) == 19
        assert len(collect_assignments(step3_tree)) == 31

    def test_fixture_validates_cleanly(self, step3_tree, taxonomy):
        assert validate_hta(step3_tree, taxonomy).ok

    def test_synthetic_fixture_counts(self, synthetic_tree, taxonomy):
        assert [r.number for r in synthetic_tree.roots] == ["1", "2", "3", "4"]
        assert len(synthetic_tree.node("1").children) == 11
        assert len(synthetic_tree.node("2").children) == 9
        assert len(synthetic_tree.node("4").children) == 22
        assert validate_hta(synthetic_tree, taxonomy).ok

    def test_internal_node_carries_assignments_and_children(self, step3_tree):
        node = step3_tree.node("3.3.5")
        assert len(node.assignments) == 3
        assert len(node.children) == 1

    def test_fixture_roundtrip(self, step3_tree):
        assert parse_hta(serialize_hta(step3_tree)) == step3_tree


class TestSerialize:
    def test_empty_tree_has_header(self):
        text = serialize_hta(TaskTree())
        assert text.startswith("#")
        assert parse_hta(text).roots == ()

    def test_assignment_order_preserved(self):
        node = TaskNode("1", "t", (
            CfAssignment(CognitiveFunction.PLANNING, "P1"),
            CfAssignment(CognitiveFunction.EXECUTION, "E5"),
        ))
        text = serialize_hta(TaskTree((node,)))
        line = [l for l in text.splitlines() if not l.startswith("#")][0]
        assert line.index("cf=Planning:P1") < line.index("cf=Execution:E5")

    @pytest.mark.parametrize("seed", range(25))
    def test_random_tree_roundtrip(self, seed):
        tree = random_tree(random.Random(seed))
        assert parse_hta(serialize_hta(tree)) == tree

    def test_json_roundtrip(self, step3_tree):
        assert tree_from_dict(tree_to_dict(step3_tree)) == step3_tree


class TestValidate:
    def test_gft_letter_function_rule(self, taxonomy):
        tree = TaskTree((TaskNode("1", "t", (
            CfAssignment(CognitiveFunction.PLANNING, cff=None),)),))
        bad = TaskTree((TaskNode("1", "t", (
            CfAssignment(CognitiveFunction.PLANNING, cff="O2"),)),))
        assert validate_hta(tree, taxonomy).ok
        report = validate_hta(bad, taxonomy)
        assert any("O2 belongs to Observation" in str(v)
                   for v in report.violations)

    def test_cfp_range_rule(self, taxonomy):
        bad = TaskTree((TaskNode("1", "t", (
            CfAssignment(CognitiveFunction.PLANNING, "P1", 0.0),)),))
        report = validate_hta(bad, taxonomy)
        assert any("probability must be in (0,1]" in str(v)
                   for v in report.violations)

    def test_unknown_gft_in_taxonomy(self, taxonomy):
        bad = TaskTree((TaskNode("1", "t", (
            CfAssignment(CognitiveFunction.OBSERVATION, "O9"),)),))
        report = validate_hta(bad, taxonomy)
        assert any("unknown GFT O9" in str(v) for v in report.violations)

    def test_violations_carry_node_numbers(self, taxonomy):
        bad = TaskTree((TaskNode("2", "t", (
            CfAssignment(CognitiveFunction.OBSERVATION, "O9"),)),))
        report = validate_hta(bad, taxonomy)
        assert report.violations[0].node == "2"


class TestCollect:
    def test_empty_tree(self):
        assert collect_assignments(TaskTree()) == []

    def test_order_within_node(self):
        assignments = tuple(CfAssignment(CognitiveFunction.EXECUTION, f"E{i}")
                            for i in (1, 2, 3))
        tree = TaskTree((TaskNode("1", "t", assignments),))
        collected = collect_assignments(tree)
        assert [a.cff for _, a in collected] == ["E1", "E2", "E3"]

    def test_document_order(self, step3_tree):
        numbers = [n for n, _ in collect_assignments(step3_tree)]
        assert numbers[0] == "3.1.1"
        assert numbers[-1] == "3.3.7"
