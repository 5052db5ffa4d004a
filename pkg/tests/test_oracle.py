from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import instances, windows

from lmax_ptas.core import UNRESTRICTED, Instance, Timeline
from lmax_ptas.errors import InstanceTooLarge
from lmax_ptas.oracle import exact_lmax, exact_lmax_branch_bound, exact_pareto


def test_exact_lmax_on_example(example_instance: Instance) -> None:
    result = exact_lmax(example_instance)
    assert result.feasible
    assert result.optimum == 11
    assert result.witness.sequence == (2, 1, 3)
    assert result.explored == 6


def test_exact_lmax_with_deadline(example_instance: Instance) -> None:
    tight = exact_lmax(example_instance, deadline=7)
    assert tight.optimum == 12
    assert tight.witness.sequence == (1, 2, 3)

    impossible = exact_lmax(example_instance, deadline=6)
    assert not impossible.feasible
    assert impossible.optimum is None


def test_exact_pareto_on_example(example_instance: Instance) -> None:
    frontier = exact_pareto(example_instance)
    assert frontier.points() == [(7, 12), (8, 11)]
    assert [e.sequence for e in frontier] == [(1, 2, 3), (2, 1, 3)]


def test_oracle_caps(example_instance: Instance) -> None:
    with pytest.raises(InstanceTooLarge) as excinfo:
        exact_lmax(example_instance, cap=2)
    assert (excinfo.value.n, excinfo.value.cap) == (3, 2)
    with pytest.raises(InstanceTooLarge):
        exact_pareto(example_instance, cap=2)
    with pytest.raises(InstanceTooLarge):
        exact_lmax_branch_bound(example_instance, cap=2)


def test_branch_and_bound_prunes(example_instance: Instance) -> None:
    result = exact_lmax_branch_bound(example_instance)
    assert result.optimum == 11
    assert result.witness.sequence == (2, 1, 3)
    assert result.explored <= 6


def test_single_job() -> None:
    inst = Instance.from_rows([(3, 2, 4)])
    assert exact_lmax(inst).optimum == 9
    assert exact_lmax_branch_bound(inst).optimum == 9


@settings(max_examples=80, deadline=None)
@given(inst=instances(max_n=6), window=windows(horizon=15), data=st.data())
def test_branch_and_bound_agrees_with_brute_force(inst: Instance, window: tuple[int, int], data: st.DataObject) -> None:
    t1, t2 = window
    timeline = data.draw(st.sampled_from([UNRESTRICTED, Timeline.mna(t1, t2), Timeline.ona(t1, t2)]))
    brute = exact_lmax(inst, timeline)
    pruned = exact_lmax_branch_bound(inst, timeline)
    assert pruned.optimum == brute.optimum
    assert pruned.witness.sequence == brute.witness.sequence


@settings(max_examples=60, deadline=None)
@given(inst=instances(max_n=5), window=windows(horizon=15))
def test_operator_window_optimum_never_exceeds_machine_window_optimum(inst: Instance, window: tuple[int, int]) -> None:
    t1, t2 = window
    ona = exact_lmax(inst, Timeline.ona(t1, t2))
    mna = exact_lmax(inst, Timeline.mna(t1, t2))
    assert ona.optimum <= mna.optimum
    assert ona.optimum >= exact_lmax(inst).optimum
