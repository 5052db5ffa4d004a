"""Approximation schemes built on Schrage runs over modified heads and tails of large jobs.

``ptas1`` handles a common deadline, ``ptas0`` is the same search without one, and
``ptas2`` keeps every non-dominated (lmax, cmax) trade-off the search meets.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction

from lmax_ptas.config import DEFAULT_GUESS_BUDGET
from lmax_ptas.core import (
    Infeasible,
    Instance,
    Job,
    Schedule,
    SearchStats,
    Time,
    evaluate_sequence,
    validate_instance,
)
from lmax_ptas.errors import BadEpsilon, GuessBudgetExceeded
from lmax_ptas.schrage import schrage

_LOG = logging.getLogger("lmax-ptas")


def as_epsilon(value: Fraction | int | str) -> Fraction:
    if isinstance(value, float):
        raise BadEpsilon(f"epsilon must be exact (Fraction, int or 'a/b' string), got float {value!r}")
    try:
        eps = Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise BadEpsilon(f"cannot read epsilon from {value!r}") from e
    if eps <= 0:
        raise BadEpsilon(f"epsilon must be positive, got {eps}")
    return eps


@dataclass(frozen=True)
class PtasConfig:
    epsilon: Fraction
    schrage_lmax: Time
    large: tuple[Job, ...]

    @property
    def large_threshold(self) -> Fraction:
        return self.epsilon * self.schrage_lmax / 2

    @property
    def k(self) -> int:
        return len(self.large)


@dataclass(frozen=True)
class GuessVector:
    """Guessed ``(job id, head, tail)`` for every large job, ordered by id."""

    values: tuple[tuple[int, Time, Time], ...] = ()


@dataclass(frozen=True)
class ModifiedInstance:
    base: Instance
    guess: GuessVector
    instance: Instance


@dataclass(frozen=True)
class ParetoEntry:
    sequence: tuple[int, ...]
    lmax: Time
    cmax: Time

    @classmethod
    def of(cls, schedule: Schedule) -> ParetoEntry:
        return cls(schedule.sequence, schedule.lmax, schedule.cmax)


@dataclass(frozen=True)
class ParetoSet:
    entries: tuple[ParetoEntry, ...] = ()

    def __iter__(self) -> Iterator[ParetoEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def points(self) -> list[tuple[Time, Time]]:
        """``(cmax, lmax)`` pairs in increasing cmax order."""
        return [(e.cmax, e.lmax) for e in self.entries]


def _config(instance: Instance, epsilon: Fraction, schrage_lmax: Time) -> PtasConfig:
    threshold = epsilon * schrage_lmax / 2
    large = tuple(sorted((j for j in instance.jobs if j.p >= threshold), key=lambda j: j.id))
    return PtasConfig(epsilon, schrage_lmax, large)


def large_jobs(instance: Instance, epsilon: Fraction | int | str) -> PtasConfig:
    return _config(instance, as_epsilon(epsilon), schrage(instance).lmax)


def _couples(instance: Instance, job: Job) -> list[tuple[Time, Time]]:
    heads = sorted({j.r for j in instance.jobs if j.r >= job.r})
    tails = sorted({j.q for j in instance.jobs if j.q >= job.q})
    return list(itertools.product(heads, tails))


def guess_count(instance: Instance, config: PtasConfig) -> int:
    return math.prod(len(_couples(instance, job)) for job in config.large)


def enumerate_modified_instances(
    instance: Instance,
    config: PtasConfig,
    *,
    guess_budget: int = DEFAULT_GUESS_BUDGET,
) -> Iterator[ModifiedInstance]:
    """Every distinct instance obtained by raising large jobs' heads/tails to existing values.

    The budget is checked eagerly, before anything is yielded. The first instance
    produced is always the unmodified one.
    """
    choices = [_couples(instance, job) for job in config.large]
    count = math.prod(len(c) for c in choices)
    if count > guess_budget:
        raise GuessBudgetExceeded(count, guess_budget)
    _LOG.debug("enumerating %d modified instances (k=%d, eps=%s)", count, config.k, config.epsilon)
    return _modified_instances(instance, config.large, choices)


def _modified_instances(instance: Instance, large: tuple[Job, ...], choices: list[list[tuple[Time, Time]]]) -> Iterator[ModifiedInstance]:
    for combo in itertools.product(*choices):
        guess = GuessVector(tuple((job.id, r, q) for job, (r, q) in zip(large, combo, strict=True)))
        changed = {job.id: job.with_times(r=r, q=q) for job, (r, q) in zip(large, combo, strict=True)}
        yield ModifiedInstance(instance, guess, instance.replace_jobs(changed))


def _candidate_schedules(
    instance: Instance,
    epsilon: Fraction,
    schrage_lmax: Time,
    guess_budget: int,
    stats: SearchStats | None,
) -> Iterator[Schedule]:
    config = _config(instance, epsilon, schrage_lmax)
    for modified in enumerate_modified_instances(instance, config, guess_budget=guess_budget):
        sequence = schrage(modified.instance, validate=False).sequence
        if stats is not None:
            stats.guesses += 1
            stats.schrage_runs += 1
        # Sequences are always judged on the original instance.
        yield evaluate_sequence(instance, sequence)


def ptas1(
    instance: Instance,
    d: Time | None,
    epsilon: Fraction | int | str,
    *,
    guess_budget: int = DEFAULT_GUESS_BUDGET,
    stats: SearchStats | None = None,
) -> Schedule | Infeasible:
    """Best Schrage sequence over all modified instances among those finishing by ``d``.

    ``lmax`` is within a factor ``1 + epsilon`` of the best schedule with ``cmax <= d``.
    ``d=None`` drops the deadline.
    """
    validate_instance(instance)
    eps = as_epsilon(epsilon)
    base = schrage(instance, validate=False)
    if d is not None and base.cmax > d:
        # Schrage's makespan is the minimum possible one.
        _LOG.debug("deadline %s below minimum makespan %s", d, base.cmax)
        return Infeasible(d, base.cmax)
    best: Schedule | None = None
    for candidate in _candidate_schedules(instance, eps, base.lmax, guess_budget, stats):
        if d is not None and candidate.cmax > d:
            if stats is not None:
                stats.infeasible += 1
            continue
        if best is None or candidate.lmax < best.lmax:
            if best is not None:
                _LOG.debug("incumbent improved: lmax %s -> %s", best.lmax, candidate.lmax)
            best = candidate
    assert best is not None, "the unmodified instance always yields a feasible sequence"
    return best


def ptas0(
    instance: Instance,
    epsilon: Fraction | int | str,
    *,
    guess_budget: int = DEFAULT_GUESS_BUDGET,
    stats: SearchStats | None = None,
) -> Schedule:
    result = ptas1(instance, None, epsilon, guess_budget=guess_budget, stats=stats)
    assert isinstance(result, Schedule)
    return result


def ptas2(
    instance: Instance,
    epsilon: Fraction | int | str,
    *,
    guess_budget: int = DEFAULT_GUESS_BUDGET,
    stats: SearchStats | None = None,
) -> ParetoSet:
    validate_instance(instance)
    eps = as_epsilon(epsilon)
    base = schrage(instance, validate=False)
    entries = [ParetoEntry.of(s) for s in _candidate_schedules(instance, eps, base.lmax, guess_budget, stats)]
    return pareto_filter(entries)


def dominates(a: ParetoEntry, b: ParetoEntry) -> bool:
    return a.lmax <= b.lmax and a.cmax <= b.cmax and (a.lmax < b.lmax or a.cmax < b.cmax)


def pareto_filter(entries: Iterable[ParetoEntry]) -> ParetoSet:
    """Non-dominated entries, one per distinct point (first seen wins), by increasing cmax."""
    indexed = sorted(enumerate(entries), key=lambda item: (item[1].cmax, item[1].lmax, item[0]))
    kept: list[ParetoEntry] = []
    for _, entry in indexed:
        if not kept or entry.lmax < kept[-1].lmax:
            kept.append(entry)
    return ParetoSet(tuple(kept))


def covers(
    frontier: Iterable[ParetoEntry],
    cmax: Time,
    lmax: Time,
    epsilon: Fraction | int | str,
    *,
    strict_cmax: bool = True,
) -> bool:
    """Whether some entry approximates the point ``(cmax, lmax)`` within ``1 + epsilon``.

    With ``strict_cmax`` the entry's makespan may not exceed ``cmax`` at all.
    """
    factor = 1 + as_epsilon(epsilon)
    cmax_limit = cmax if strict_cmax else factor * cmax
    return any(e.cmax <= cmax_limit and e.lmax <= factor * lmax for e in frontier)


def coverage_ratio(frontier: ParetoSet, reference: ParetoSet) -> Fraction | None:
    """Worst, over reference points, of the best lmax ratio among entries with no larger cmax.

    ``None`` when some reference point has no such entry at all.
    """
    worst = Fraction(0)
    for point in reference:
        ratios = [Fraction(e.lmax) / point.lmax for e in frontier if e.cmax <= point.cmax]
        if not ratios:
            return None
        worst = max(worst, min(ratios))
    return worst
