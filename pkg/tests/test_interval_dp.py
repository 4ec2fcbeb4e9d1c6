import itertools
import random

import numpy as np
import pytest

from hiking import IntervalInstance, decide_wonderful, is_wonderful, solve_wonderful
from hiking.core import InstanceError
from hiking.interval_dp import DPTable
from hiking.oracle import oracle_wonderful

from conftest import random_instance


def iv(*pairs):
    return IntervalInstance.from_intervals(pairs)


@pytest.mark.parametrize("pairs,feasible", [
    ([(1, 2), (1, 2), (2, 2)], True),
    ([(1, 2), (2, 3), (3, 3)], False),
    ([(3, 3), (3, 3), (3, 3)], True),
    ([(1, 1), (2, 2)], False),
    ([(1, 1)], True),
    ([(2, 3), (2, 3), (2, 3), (2, 3), (5, 5)], False),
    ([(2, 2), (2, 2), (3, 3), (3, 3), (3, 3)], True),
])
def test_small_verdicts(pairs, feasible):
    inst = IntervalInstance.from_intervals(pairs)
    assert decide_wonderful(inst) is feasible
    p = solve_wonderful(inst)
    assert (p is not None) is feasible
    if p is not None:
        assert is_wonderful(inst, p)


def test_empty_instance():
    inst = IntervalInstance(0, ())
    assert decide_wonderful(inst)
    assert solve_wonderful(inst).groups == ()


def test_invalid_instance_rejected():
    with pytest.raises(InstanceError):
        solve_wonderful(IntervalInstance(1, iv((1, 2), (1, 2)).agents[:1]))


def test_ids_are_preserved():
    inst = IntervalInstance.from_intervals([(2, 2), (2, 2), (1, 1)], ids=["x", "y", "z"])
    p = solve_wonderful(inst)
    assert sorted(map(sorted, p.groups)) == [["x", "y"], ["z"]]


def test_all_instances_n3_match_oracle():
    pairs = [(l, r) for r in range(1, 4) for l in range(1, r + 1)]
    for combo in itertools.product(pairs, repeat=3):
        inst = IntervalInstance.from_intervals(combo)
        p = solve_wonderful(inst)
        assert (p is not None) == (oracle_wonderful(inst) is not None), combo
        if p is not None:
            assert is_wonderful(inst, p)


def test_random_witnesses_are_wonderful(rng):
    for _ in range(400):
        n = rng.randint(1, 12)
        inst = random_instance(rng, n)
        p = solve_wonderful(inst)
        assert decide_wonderful(inst) == (p is not None)
        if p is not None:
            assert is_wonderful(inst, p)


def test_checkpointed_reconstruction_matches_full_table():
    rng = random.Random(7)
    seen = 0
    for _ in range(60):
        inst = random_instance(rng, 14)
        full = solve_wonderful(inst)
        light = solve_wonderful(inst, full_table_max=4)
        assert (full is None) == (light is None)
        if light is not None:
            seen += 1
            assert is_wonderful(inst, light)
            assert full.canonical() == light.canonical()
    assert seen > 0


def test_large_feasible_instance():
    # a chain of size-3 groups plus loose agents
    rng = random.Random(3)
    n = 45
    pairs = [(3, 3)] * 30 + [(1, n)] * 15
    rng.shuffle(pairs)
    inst = IntervalInstance.from_intervals(pairs)
    p = solve_wonderful(inst)
    assert p is not None and is_wonderful(inst, p)


def test_base_layer_and_decision_dtype():
    # an empty state is closed (0) only when no group is left open
    table = DPTable([1, 2, 2], [1, 2, 3], [0, 0, 0], 3)
    base = table.layer(0)
    assert base[1, 3, 0, 0] == 0 and base[2, 3, 1, 0] == 1
    assert table.value() == 0
    assert table.final.dtype == np.uint8
