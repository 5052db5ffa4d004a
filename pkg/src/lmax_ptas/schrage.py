"""Schrage's rule (extended Jackson) and the critical-path analysis of its schedule."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from lmax_ptas.core import Instance, Job, Schedule, Time, lower_bound_subset, validate_instance


@dataclass(frozen=True)
class CriticalAnalysis:
    block: tuple[Job, ...]
    first: Job
    critical: Job
    interference: Job | None = None
    interference_index: int | None = None
    lambda_b: tuple[Job, ...] = ()

    @property
    def block_ids(self) -> tuple[int, ...]:
        return tuple(j.id for j in self.block)


def schrage(instance: Instance, *, validate: bool = True) -> Schedule:
    """Whenever the machine frees up, start the released job with the largest tail (ties: smallest id)."""
    if validate:
        validate_instance(instance)
    pending = sorted(instance.jobs, key=lambda j: (j.r, j.id))
    ready: list[tuple[Time, int, Job]] = []
    sequence: list[int] = []
    starts: dict[int, Time] = {}
    completions: dict[int, Time] = {}
    t: Time = 0
    lmax: Time | None = None
    i = 0
    while i < len(pending) or ready:
        if not ready:
            t = max(t, pending[i].r)
        while i < len(pending) and pending[i].r <= t:
            job = pending[i]
            heapq.heappush(ready, (-job.q, job.id, job))
            i += 1
        _, _, job = heapq.heappop(ready)
        sequence.append(job.id)
        starts[job.id] = t
        t = completions[job.id] = t + job.p
        if lmax is None or t + job.q > lmax:
            lmax = t + job.q
    return Schedule(tuple(sequence), starts, completions, lmax, t)


def critical_analysis(schedule: Schedule, instance: Instance) -> CriticalAnalysis:
    seq = schedule.sequence
    ic = 0
    best: Time | None = None
    for idx, job_id in enumerate(seq):
        lateness = schedule.completions[job_id] + instance.job(job_id).q
        # >= keeps the latest-completing job among those attaining lmax.
        if best is None or lateness >= best:
            best, ic = lateness, idx
    ia = ic
    while ia > 0 and schedule.completions[seq[ia - 1]] == schedule.starts[seq[ia]]:
        ia -= 1
    block = tuple(instance.job(j) for j in seq[ia : ic + 1])
    critical = block[-1]
    for idx in range(len(block) - 2, -1, -1):
        if block[idx].q < critical.q:
            return CriticalAnalysis(block, block[0], critical, block[idx], idx, block[idx + 1 :])
    return CriticalAnalysis(block, block[0], critical)


def absolute_error_bound(analysis: CriticalAnalysis) -> int | None:
    """p_b when an interference job exists: Schrage's lmax exceeds the optimum by strictly less."""
    return None if analysis.interference is None else analysis.interference.p


def interference_lower_bound(analysis: CriticalAnalysis) -> Time | None:
    if analysis.interference is None:
        return None
    return lower_bound_subset(Instance(analysis.lambda_b), [j.id for j in analysis.lambda_b])


def is_certified_optimal(analysis: CriticalAnalysis) -> bool:
    return analysis.interference is None
