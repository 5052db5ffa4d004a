from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lmax_ptas.core import Instance, Job, Schedule, Timeline, schedule_violations
from lmax_ptas.instance_file import Scenario, gen_random
from lmax_ptas.oracle import exact_lmax, exact_lmax_branch_bound, exact_pareto
from lmax_ptas.ptas_availability import build_structure, normalize_heads_mna, ptas3, ptas4, round_tails
from lmax_ptas.ptas_deadline import covers, ptas1, ptas2
from lmax_ptas.schrage import absolute_error_bound, critical_analysis, is_certified_optimal, schrage

pytestmark = pytest.mark.slow

HALF = Fraction(1, 2)


def _straddles(schedule: Schedule, timeline: Timeline) -> bool:
    if timeline.t1 == timeline.t2:
        return False
    return any(schedule.starts[j] <= timeline.t1 and schedule.completions[j] >= timeline.t2 for j in schedule.sequence)


def _short_window_instance(seed: int) -> tuple[Instance, Timeline]:
    """All jobs released at 0 with p >= 2 and a unit window inside the busy period.

    With integer data no start or completion can fall inside ]t1, t1 + 1[, so the
    optimal schedule runs without idling and some job spans the window.
    """
    rng = random.Random(seed)
    n = rng.randint(3, 4)
    jobs = tuple(Job(id=i, p=rng.randint(2, 6), r=0, q=rng.randint(0, 8)) for i in range(1, n + 1))
    total = sum(j.p for j in jobs)
    t1 = rng.randint(1, total - 2)
    return Instance(jobs), Timeline.ona(t1, t1 + 1)


def test_schrage_corpus() -> None:
    for seed in range(500):
        instance = gen_random(2 + seed % 7, seed).instance
        optimum = exact_lmax_branch_bound(instance).optimum
        # With every tail at zero, lmax is the makespan.
        no_tails = Instance(tuple(j.with_times(q=0) for j in instance.jobs))
        min_cmax = exact_lmax_branch_bound(no_tails).optimum
        s = schrage(instance)
        analysis = critical_analysis(s, instance)
        assert s.cmax == min_cmax, seed
        assert s.lmax <= 2 * optimum, seed
        if is_certified_optimal(analysis):
            assert s.lmax == optimum, seed
        else:
            assert s.lmax - optimum < absolute_error_bound(analysis), seed


@pytest.mark.parametrize("eps", [Fraction(1), HALF])
def test_deadline_corpus_stays_within_ratio(eps: Fraction) -> None:
    for seed in range(200):
        generated = gen_random(6, seed, scenario=Scenario.DEADLINE)
        result = ptas1(generated.instance, generated.deadline, eps)
        reference = exact_lmax(generated.instance, deadline=generated.deadline)
        assert schedule_violations(generated.instance, result) == [], seed
        assert result.cmax <= generated.deadline, seed
        assert result.lmax <= (1 + eps) * reference.optimum, seed


def test_pareto_corpus_is_covered() -> None:
    for seed in range(100):
        instance = gen_random(3 + seed % 5, seed).instance
        frontier = ptas2(instance, HALF)
        for point in exact_pareto(instance):
            assert covers(frontier, point.cmax, point.lmax, HALF), (seed, point)


def test_machine_window_corpus() -> None:
    for seed in range(100):
        generated = gen_random(3 + seed % 3, seed, p_max=6, r_max=10, q_max=8, scenario=Scenario.MNA)
        instance, timeline = generated.instance, generated.timeline
        prepared = round_tails(normalize_heads_mna(instance, timeline.t1, timeline.t2), 2)
        assert len(build_structure(prepared, timeline.t1, timeline.t2, HALF).big) <= 5, seed
        result = ptas3(instance, timeline.t1, timeline.t2, HALF)
        assert schedule_violations(instance, result) == [], seed
        assert result.lmax <= (1 + HALF) * exact_lmax(instance, timeline).optimum, seed


def test_operator_window_corpus() -> None:
    cases = []
    for seed in range(70):
        generated = gen_random(3 + seed % 2, seed, p_max=6, r_max=10, q_max=8, scenario=Scenario.ONA)
        cases.append((generated.instance, generated.timeline))
    cases.extend(_short_window_instance(seed) for seed in range(30))

    straddling = 0
    for idx, (instance, timeline) in enumerate(cases):
        reference = exact_lmax(instance, timeline)
        straddling += _straddles(reference.witness, timeline)
        result = ptas4(instance, timeline.t1, timeline.t2, HALF)
        assert schedule_violations(instance, result) == [], idx
        assert result.lmax <= (1 + HALF) * reference.optimum, idx
        assert result.lmax <= ptas3(instance, timeline.t1, timeline.t2, HALF).lmax, idx
    assert straddling >= 20
