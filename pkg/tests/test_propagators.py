import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_support
from valsym.domains import DomainSet
from valsym.engine import propagate_to_fixpoint
from valsym.propagators import (
    AbsDiffProp,
    AllDifferentProp,
    EqualityDisjunctionProp,
    LazyAllDifferentProp,
    NotEqualProp,
    OrderingChainProp,
)


def run(props, doms):
    out = propagate_to_fixpoint(props, doms)
    return out.failed, doms


def test_abs_diff_fixed_pair():
    failed, doms = run(
        [AbsDiffProp(0, 1, 2)],
        [DomainSet([3]), DomainSet([7]), DomainSet(range(1, 11))],
    )
    assert not failed
    assert list(doms[2]) == [4]


def test_abs_diff_back_propagates():
    failed, doms = run(
        [AbsDiffProp(0, 1, 2)],
        [DomainSet([5]), DomainSet(range(11)), DomainSet([3])],
    )
    assert not failed
    assert list(doms[1]) == [2, 8]


def test_abs_diff_unreachable_difference_fails():
    failed, _ = run(
        [AbsDiffProp(0, 1, 2)],
        [DomainSet([5]), DomainSet(range(11)), DomainSet([10])],
    )
    assert failed


def test_abs_diff_is_arc_consistent():
    rng = random.Random(4)
    for _ in range(300):
        u = rng.randint(2, 9)
        doms = [DomainSet.from_mask(rng.randrange(1, 1 << u)) for _ in range(3)]
        snapshot = [d.copy() for d in doms]
        failed, doms = run([AbsDiffProp(0, 1, 2)], doms)
        want = brute_support(snapshot, lambda c: abs(c[0] - c[1]) == c[2])
        if want is None:
            assert failed
        else:
            assert not failed
            assert [set(d) for d in doms] == want


def test_all_different_assigned_value_pruning():
    failed, doms = run(
        [AllDifferentProp((0, 1, 2))],
        [DomainSet([1]), DomainSet([1, 2]), DomainSet([1, 2, 3])],
    )
    assert not failed
    assert list(doms[1]) == [2]
    assert list(doms[2]) == [3]


def test_all_different_unique_holder_tightening():
    # three vars, three available values, value 2 lives only in the last domain
    failed, doms = run(
        [AllDifferentProp((0, 1, 2))],
        [DomainSet([0, 1]), DomainSet([0, 1]), DomainSet([0, 1, 2])],
    )
    assert not failed
    assert list(doms[2]) == [2]


def test_all_different_pigeonhole_failure():
    failed, _ = run(
        [AllDifferentProp((0, 1, 2))],
        [DomainSet([0, 1]), DomainSet([0, 1]), DomainSet([0, 1])],
    )
    assert failed


def test_all_different_duplicate_singletons_fail():
    failed, _ = run(
        [AllDifferentProp((0, 1))],
        [DomainSet([2]), DomainSet([2])],
    )
    assert failed


def test_lazy_all_different_keeps_assigned_values():
    doms = [DomainSet([1]), DomainSet([1, 2]), DomainSet([0, 1, 2, 3])]
    failed, doms = run([LazyAllDifferentProp((0, 1, 2))], doms)
    assert not failed
    # no assigned-value pruning: 1 stays available to the others
    assert 1 in doms[1] and 1 in doms[2]


def test_lazy_all_different_still_counts():
    failed, _ = run(
        [LazyAllDifferentProp((0, 1, 2))],
        [DomainSet([0, 1]), DomainSet([0, 1]), DomainSet([0, 1])],
    )
    assert failed


def test_lazy_all_different_check_exact():
    p = LazyAllDifferentProp((0, 1, 2))
    assert p.check((0, 1, 2))
    assert not p.check((0, 1, 0))


def test_ordering_chain_bounds():
    failed, doms = run(
        [OrderingChainProp((0, 1, 2), strict=True)],
        [DomainSet(range(5)), DomainSet(range(5)), DomainSet(range(5))],
    )
    assert not failed
    assert (doms[0].min(), doms[0].max()) == (0, 2)
    assert (doms[1].min(), doms[1].max()) == (1, 3)
    assert (doms[2].min(), doms[2].max()) == (2, 4)


def test_ordering_chain_keeps_interior_holes():
    # bounds consistency only: the hole at 2 survives
    failed, doms = run(
        [OrderingChainProp((0, 1), strict=True)],
        [DomainSet([0, 2, 4]), DomainSet([1, 3, 5])],
    )
    assert not failed
    assert list(doms[0]) == [0, 2, 4]
    assert list(doms[1]) == [1, 3, 5]


def test_ordering_chain_non_strict():
    failed, doms = run(
        [OrderingChainProp((0, 1), strict=False)],
        [DomainSet([3, 4]), DomainSet([0, 3])],
    )
    assert not failed
    assert list(doms[0]) == [3]
    assert list(doms[1]) == [3]


def test_equality_disjunction_waits_for_full_fix():
    p = EqualityDisjunctionProp(((0, 1),))
    doms = [DomainSet([0, 1]), DomainSet([2])]
    failed, _ = p.propagate(doms)
    assert not failed  # not fully fixed yet
    doms = [DomainSet([0]), DomainSet([2])]
    failed, _ = p.propagate(doms)
    assert failed


def test_equality_disjunction_empty_is_unsat():
    p = EqualityDisjunctionProp(())
    failed, _ = p.propagate([DomainSet([0])])
    assert failed


@st.composite
def _sound_instance(draw):
    u = draw(st.integers(min_value=2, max_value=6))
    n = draw(st.integers(min_value=2, max_value=4))
    doms = [
        draw(st.integers(min_value=1, max_value=(1 << u) - 1)) for _ in range(n)
    ]
    return u, [DomainSet.from_mask(m) for m in doms]


@settings(max_examples=120, deadline=None)
@given(_sound_instance())
def test_binary_propagators_sound_and_contracting(inst):
    # fixpoint domains contain every brute-force support and never grow
    u, doms = inst
    n = len(doms)
    props = [NotEqualProp(0, 1)]
    if n >= 3:
        props.append(AbsDiffProp(0, 1, 2))
    props.append(OrderingChainProp((0, n - 1), strict=False))
    snapshot = [d.copy() for d in doms]

    def accepts(c):
        if c[0] == c[1]:
            return False
        if n >= 3 and abs(c[0] - c[1]) != c[2]:
            return False
        return c[0] <= c[n - 1]

    failed, doms = run(props, doms)
    want = brute_support(snapshot, accepts)
    if want is None:
        # individual propagators need not detect a joint wipeout, but the
        # leaf checks must reject every remaining completion
        if not failed:
            for combo in product(*map(tuple, doms)):
                assert not all(p.check(combo) for p in props)
        return
    assert not failed
    for i in range(n):
        assert want[i] <= set(doms[i]) <= set(snapshot[i])
