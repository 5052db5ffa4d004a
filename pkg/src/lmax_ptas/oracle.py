"""Exact reference solvers for small instances.

Both searches visit permutations in lexicographic id order and keep the first optimal
one, so brute force and branch and bound return the same witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from lmax_ptas.config import DEFAULT_BRANCH_BOUND_CAP, DEFAULT_ORACLE_CAP
from lmax_ptas.core import (
    UNRESTRICTED,
    Instance,
    ScenarioSpec,
    Schedule,
    Time,
    Timeline,
    evaluate_sequence,
    lower_bound_subset,
    validate_instance,
)
from lmax_ptas.errors import InstanceTooLarge
from lmax_ptas.ptas_deadline import ParetoEntry, ParetoSet, pareto_filter


@dataclass(frozen=True)
class OracleResult:
    optimum: Time | None
    witness: Schedule | None
    explored: int

    @property
    def feasible(self) -> bool:
        return self.witness is not None


def _check_size(instance: Instance, cap: int) -> None:
    if instance.n > cap:
        raise InstanceTooLarge(instance.n, cap)


def exact_lmax(
    instance: Instance,
    timeline: Timeline = UNRESTRICTED,
    deadline: Time | None = None,
    *,
    cap: int = DEFAULT_ORACLE_CAP,
) -> OracleResult:
    validate_instance(instance, ScenarioSpec(timeline, deadline))
    _check_size(instance, cap)
    best: Schedule | None = None
    explored = 0
    for order in itertools.permutations(sorted(instance.ids)):
        explored += 1
        schedule = evaluate_sequence(instance, order, timeline)
        if deadline is not None and schedule.cmax > deadline:
            continue
        if best is None or schedule.lmax < best.lmax:
            best = schedule
    return OracleResult(None if best is None else best.lmax, best, explored)


def exact_pareto(instance: Instance, *, cap: int = DEFAULT_ORACLE_CAP) -> ParetoSet:
    validate_instance(instance)
    _check_size(instance, cap)
    entries = (ParetoEntry.of(evaluate_sequence(instance, order)) for order in itertools.permutations(sorted(instance.ids)))
    return pareto_filter(entries)


def exact_lmax_branch_bound(
    instance: Instance,
    timeline: Timeline = UNRESTRICTED,
    *,
    cap: int = DEFAULT_BRANCH_BOUND_CAP,
) -> OracleResult:
    """Depth-first search over sequence prefixes, pruned by the subset lower bound."""
    validate_instance(instance, ScenarioSpec(timeline))
    _check_size(instance, cap)
    ids = sorted(instance.ids)
    best_lmax: Time | None = None
    best_order: tuple[int, ...] | None = None
    explored = 0

    def descend(prefix: list[int], remaining: list[int], free: Time, partial: Time | None) -> None:
        nonlocal best_lmax, best_order, explored
        if not remaining:
            explored += 1
            if best_lmax is None or partial < best_lmax:
                best_lmax, best_order = partial, tuple(prefix)
            return
        if best_lmax is not None:
            # Strict comparisons keep the lexicographically first optimum reachable.
            if partial > best_lmax or lower_bound_subset(instance, remaining, not_before=free) > best_lmax:
                return
        for idx, job_id in enumerate(remaining):
            job = instance.job(job_id)
            start = timeline.earliest_start(max(free, job.r), job.p)
            done = start + job.p
            lateness = done + job.q
            prefix.append(job_id)
            descend(prefix, remaining[:idx] + remaining[idx + 1 :], done, lateness if partial is None else max(partial, lateness))
            prefix.pop()

    descend([], ids, 0, None)
    assert best_order is not None
    return OracleResult(best_lmax, evaluate_sequence(instance, best_order, timeline), explored)
