import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hiking import (ApprovalInstance, InstanceError, IntervalInstance, Partition, edd_normalize,
                    edd_order, is_edd, is_wonderful, solve_singletons, validate_instance,
                    validate_partition)
from hiking.core import as_weight, chunk_by_size
from hiking.oracle import oracle_wonderful

from conftest import random_instance


def iv(*pairs, **kw):
    return IntervalInstance.from_intervals(pairs, **kw)


class TestValidateInstance:
    def test_valid(self):
        assert validate_instance(IntervalInstance.from_intervals([(1, 2), (2, 2)])) == []

    def test_inverted_interval(self):
        inst = IntervalInstance(2, iv((2, 1), (1, 1)).agents)
        assert any("l>r" in v for v in validate_instance(inst))

    def test_right_endpoint_too_large(self):
        inst = IntervalInstance(2, iv((1, 3), (1, 1), (1, 1)).agents[:2])
        assert any("r>n" in v for v in validate_instance(inst))

    def test_duplicate_ids_and_negative_weight(self):
        inst = iv((1, 2), (1, 2), ids=["a", "a"], weights=[1, -1])
        problems = validate_instance(inst)
        assert any("duplicate" in p for p in problems)
        assert any("negative" in p for p in problems)

    def test_agent_count_mismatch(self):
        inst = IntervalInstance(3, iv((1, 2), (1, 2)).agents)
        assert any("agents given" in p for p in validate_instance(inst))


def test_float_weights_read_through_decimal_text():
    assert as_weight(0.1) == Fraction(1, 10)
    assert as_weight("2/3") == Fraction(2, 3)


class TestEddOrder:
    def test_sorted_by_right_endpoint(self):
        assert edd_order(iv((1, 3), (1, 2), (2, 2))) == (1, 2, 0)

    def test_single_agent(self):
        assert edd_order(iv((1, 1))) == (0,)

    def test_ties_keep_input_order(self):
        assert edd_order(iv((1, 3), (2, 3), (3, 3))) == (0, 1, 2)


class TestValidatePartition:
    def test_pair(self):
        rep = validate_partition(iv((2, 2), (2, 2)), Partition.of([[1, 2]]))
        assert rep.satisfied == {1, 2} and rep.all_satisfied

    def test_violations_carry_size(self):
        rep = validate_partition(iv((1, 1), (1, 1)), Partition.of([[1, 2]]))
        assert rep.violated == {1: 2, 2: 2}

    def test_excluded(self):
        rep = validate_partition(iv((1, 1)), Partition.of([], [1]))
        assert rep.status(1) == "excluded" and not rep.all_satisfied

    @pytest.mark.parametrize("groups,excluded", [
        ([[1, 2], [2]], []),
        ([[1]], []),
        ([[1, 2, 3]], []),
        ([[1], []], [2]),
        ([[1]], [1, 2]),
    ])
    def test_coverage_errors(self, groups, excluded):
        with pytest.raises(InstanceError):
            validate_partition(iv((1, 2), (1, 2)), Partition.of(groups, excluded))

    def test_general_approval_sets(self):
        inst = ApprovalInstance.from_sets([{1, 3}, {1, 3}, {1, 3}])
        assert is_wonderful(inst, Partition.of([[1, 2, 3]]))
        assert not is_wonderful(inst, Partition.of([[1, 2], [3]]))


class TestIsEdd:
    def test_single_group(self):
        assert is_edd(iv((1, 2), (2, 2)), Partition.of([[1, 2]]))

    def test_violating_pair(self):
        # agent 1 comes first (r=2) yet sits in the pair while agent 2 accepts size 1 alone
        assert not is_edd(iv((1, 2), (1, 3), (1, 3)), Partition.of([[2], [1, 3]]))

    def test_equal_sizes(self):
        assert is_edd(iv((2, 3), (1, 2), (2, 2), (2, 4)), Partition.of([[1, 2], [3, 4]]))

    def test_rejects_non_wonderful(self):
        with pytest.raises(InstanceError):
            is_edd(iv((1, 1), (1, 1)), Partition.of([[1, 2]]))


class TestEddNormalize:
    def test_fixes_the_violating_pair(self):
        inst = iv((1, 2), (1, 3), (1, 3))
        out = edd_normalize(inst, Partition.of([[2], [1, 3]]))
        assert is_wonderful(inst, out) and is_edd(inst, out)
        assert out.size_of()[1] == 1

    @settings(max_examples=150, deadline=None)
    @given(st.integers(1, 7), st.randoms(use_true_random=False))
    def test_random_wonderful_partitions(self, n, r):
        inst = random_instance(random.Random(r.random()), n)
        p = oracle_wonderful(inst)
        if p is None:
            return
        out = edd_normalize(inst, p)
        assert is_wonderful(inst, out) and is_edd(inst, out)
        assert sorted(out.sizes()) == sorted(p.sizes())


class TestSingletons:
    def test_divisible(self):
        p = solve_singletons(iv((2, 2), (2, 2), (1, 1)))
        assert p is not None and is_wonderful(iv((2, 2), (2, 2), (1, 1)), p)

    def test_not_divisible(self):
        assert solve_singletons(iv((3, 3), (3, 3), (1, 1))) is None

    def test_requires_single_sizes(self):
        with pytest.raises(InstanceError):
            solve_singletons(iv((1, 2), (1, 2)))

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(1, 6), min_size=1, max_size=6))
    def test_matches_oracle(self, sizes):
        n = max(len(sizes), max(sizes))
        sizes = sizes + [1] * (n - len(sizes))
        inst = iv(*[(s, s) for s in sizes])
        assert (solve_singletons(inst) is None) == (oracle_wonderful(inst) is None)


def test_chunk_by_size_rejects_partial_groups():
    assert chunk_by_size([(1, 2), (2, 2), (3, 1)]) == [(3,), (1, 2)]
    with pytest.raises(InstanceError):
        chunk_by_size([(1, 2)])


def test_interval_form():
    assert ApprovalInstance.from_sets([{1, 2}, {2}]).interval_form().intervals == [(1, 2), (2, 2)]
    assert ApprovalInstance.from_sets([{1, 3}]).interval_form() is None
    assert ApprovalInstance.from_sets([set()]).interval_form() is None
