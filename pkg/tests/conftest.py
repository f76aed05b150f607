from __future__ import annotations

import random
from importlib import resources

import pytest

from creamkit.hta import CfAssignment, TaskNode, TaskTree, parse_hta
from creamkit.taxonomy import CognitiveFunction, default_taxonomy


def fixture_text(name: str) -> str:
    return (resources.files("creamkit") / "fixtures" / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def taxonomy():
    return default_taxonomy()


@pytest.fixture(scope="session")
def step3_text() -> str:
    return fixture_text("step3_film_quality.hta")


@pytest.fixture(scope="session")
def step3_tree(step3_text) -> TaskTree:
    return parse_hta(step3_text)


@pytest.fixture(scope="session")
def synthetic_tree() -> TaskTree:
    return parse_hta(fixture_text("synthetic_steps_1_2_4.hta"))


def random_tree(rng: random.Random, max_depth: int = 4,
                max_children: int = 4) -> TaskTree:
    """A random structurally valid task tree with random assignments."""
    functions = list(CognitiveFunction)
    gfts = {CognitiveFunction.OBSERVATION: ["O1", "O2", "O3"],
            CognitiveFunction.INTERPRETATION: ["I1", "I2", "I3"],
            CognitiveFunction.PLANNING: ["P1", "P2"],
            CognitiveFunction.EXECUTION: ["E1", "E2", "E3", "E4", "E5"]}

    def assignments() -> tuple[CfAssignment, ...]:
        out = []
        for _ in range(rng.randint(0, 3)):
            fn = rng.choice(functions)
            cff = rng.choice(gfts[fn]) if rng.random() < 0.7 else None
            cfp = round(rng.uniform(1e-4, 0.5), 6) \
                if cff is not None and rng.random() < 0.5 else None
            out.append(CfAssignment(fn, cff, cfp))
        return tuple(out)

    def make_node(number: str, depth: int) -> TaskNode:
        n_children = 0
        if depth < max_depth and rng.random() < 0.6:
            n_children = rng.randint(1, max_children)
        children = tuple(make_node(f"{number}.{i}", depth + 1)
                         for i in range(1, n_children + 1))
        title = f"task {number} " + "".join(
            rng.choice('abcdefghij "\\') for _ in range(rng.randint(1, 8)))
        return TaskNode(number, title, assignments(), children)

    first_root = rng.randint(1, 5)
    n_roots = rng.randint(1, 3)
    roots = tuple(make_node(str(first_root + i), 1) for i in range(n_roots))
    return TaskTree(roots)
