"""Approximation schemes with one non-availability window ]T1, T2[.

``ptas3`` handles a machine window (nothing may run inside it); ``ptas4`` handles an
operator window (nothing may start or complete inside it, but a job may span it).
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

from lmax_ptas.config import DEFAULT_GUESS_BUDGET
from lmax_ptas.core import (
    Infeasible,
    Instance,
    Job,
    ScenarioSpec,
    Schedule,
    SearchStats,
    Time,
    Timeline,
    compose_schedule,
    evaluate_sequence,
    schedule_violations,
    validate_instance,
)
from lmax_ptas.errors import BadParams, EpsilonNotUnitFraction, GuessBudgetExceeded
from lmax_ptas.ptas_deadline import as_epsilon, ptas0, ptas1

_LOG = logging.getLogger("lmax-ptas")


def unit_fraction(epsilon: Fraction | int | str) -> int:
    """``f = 1/epsilon``; epsilon must be a unit fraction."""
    eps = as_epsilon(epsilon)
    if eps.numerator != 1:
        raise EpsilonNotUnitFraction(f"1/epsilon must be an integer, got epsilon={eps}")
    return eps.denominator


def normalize_heads_mna(instance: Instance, t1: Time, t2: Time) -> Instance:
    """Push to ``t2`` every head that cannot lead to a job finishing by ``t1``."""
    changed = {j.id: j.with_times(r=t2) for j in instance.jobs if (t1 <= j.r < t2) or (j.r < t1 < j.r + j.p)}
    return instance.replace_jobs(changed)


def _family_index(q: Time, f: int, qbar: Time) -> int:
    return max(1, math.ceil(Fraction(q) * f / qbar))


def round_tails(instance: Instance, f: int) -> Instance:
    """Round every tail up to a multiple of ``qbar/f``; zero tails go to the first multiple."""
    if f < 1:
        raise BadParams(f"f must be a positive integer, got {f}")
    qbar = max(j.q for j in instance.jobs)
    if qbar == 0:
        return instance
    unit = Fraction(qbar) / f
    return Instance(tuple(j.with_times(q=_family_index(j.q, f, qbar) * unit) for j in instance.jobs))


@dataclass(frozen=True)
class Family:
    k: int
    jobs: tuple[Job, ...]
    m: int
    prefix: tuple[int, ...]

    @property
    def p(self) -> int:
        return sum(j.p for j in self.jobs)

    def subset(self, z: int) -> tuple[Job, ...]:
        return self.jobs[: self.prefix[z]]


@dataclass(frozen=True)
class FamilyStructure:
    f: int
    qbar: Time
    rounded_tails: Mapping[int, Time]
    x: tuple[Job, ...]
    y: tuple[Job, ...]
    delta: Fraction
    big: tuple[Job, ...]
    families: tuple[Family, ...]

    @property
    def guess_count(self) -> int:
        return 2 ** len(self.big) * math.prod(fam.m + 1 for fam in self.families)


def _prefix_table(jobs: tuple[Job, ...], delta: Fraction) -> tuple[int, tuple[int, ...]]:
    total = sum(j.p for j in jobs)
    m = math.ceil(total / delta)
    sums = list(itertools.accumulate((j.p for j in jobs), initial=0))
    prefix = []
    length = 0
    for z in range(m + 1):
        while length < len(jobs) and sums[length + 1] <= z * delta:
            length += 1
        prefix.append(length)
    if m:
        prefix[m] = len(jobs)
    return m, tuple(prefix)


def build_structure(instance: Instance, t1: Time, t2: Time, epsilon: Fraction | int | str) -> FamilyStructure:
    f = unit_fraction(epsilon)
    eps = Fraction(1, f)
    x = tuple(j for j in instance.jobs if j.r + j.p <= t1)
    y = tuple(j for j in instance.jobs if j.r >= t2)
    if len(x) + len(y) != instance.n:
        stray = sorted(set(instance.ids) - {j.id for j in x + y})
        raise BadParams(f"jobs {stray} are neither before the window nor after it; normalize heads first")
    qbar = max(j.q for j in instance.jobs)
    delta = eps * eps * instance.total_p / 4
    big = tuple(sorted((j for j in x if j.p > delta), key=lambda j: j.id))
    by_family: dict[int, list[Job]] = {k: [] for k in range(1, f + 1)}
    for j in x:
        if j.p <= delta:
            by_family[1 if qbar == 0 else _family_index(j.q, f, qbar)].append(j)
    families = []
    for k, members in by_family.items():
        ordered = tuple(sorted(members, key=lambda j: (j.r, j.id)))
        m, prefix = _prefix_table(ordered, delta)
        families.append(Family(k, ordered, m, prefix))
    return FamilyStructure(
        f=f,
        qbar=qbar,
        rounded_tails={j.id: j.q for j in instance.jobs},
        x=x,
        y=y,
        delta=delta,
        big=big,
        families=tuple(families),
    )


@dataclass(frozen=True)
class AvailabilityGuess:
    b1: tuple[int, ...]
    z: tuple[int, ...]
    x1: tuple[Job, ...]
    x2: tuple[Job, ...]


def enumerate_guesses(structure: FamilyStructure, *, guess_budget: int = DEFAULT_GUESS_BUDGET) -> Iterator[AvailabilityGuess]:
    count = structure.guess_count
    if count > guess_budget:
        raise GuessBudgetExceeded(count, guess_budget)
    _LOG.debug("enumerating %d window guesses (|B|=%d, delta=%s)", count, len(structure.big), structure.delta)
    return _guesses(structure)


def _guesses(structure: FamilyStructure) -> Iterator[AvailabilityGuess]:
    masks = itertools.product((False, True), repeat=len(structure.big))
    prefixes = [range(fam.m + 1) for fam in structure.families]
    for mask, z in itertools.product(masks, itertools.product(*prefixes)):
        b1 = tuple(job.id for job, chosen in zip(structure.big, mask, strict=True) if chosen)
        before = set(b1)
        for fam, zk in zip(structure.families, z, strict=True):
            before.update(j.id for j in fam.subset(zk))
        x1 = tuple(sorted((j for j in structure.x if j.id in before), key=lambda j: j.id))
        x2 = tuple(sorted((j for j in structure.x if j.id not in before), key=lambda j: j.id))
        yield AvailabilityGuess(b1, tuple(z), x1, x2)


def ptas3(
    instance: Instance,
    t1: Time,
    t2: Time,
    epsilon: Fraction | int | str,
    *,
    guess_budget: int = DEFAULT_GUESS_BUDGET,
    stats: SearchStats | None = None,
) -> Schedule:
    """Guess which jobs run before the machine window, solve both sides, keep the best merge."""
    timeline = Timeline.mna(t1, t2)
    validate_instance(instance, ScenarioSpec(timeline))
    f = unit_fraction(epsilon)
    eps = Fraction(1, f)
    if t1 == t2:
        # Empty window: nothing to avoid.
        plain = ptas0(instance, eps, guess_budget=guess_budget, stats=stats)
        return evaluate_sequence(instance, plain.sequence, timeline)

    prepared = round_tails(normalize_heads_mna(instance, t1, t2), f)
    structure = build_structure(prepared, t1, t2, eps)
    best: Schedule | None = None
    for guess in enumerate_guesses(structure, guess_budget=guess_budget):
        if stats is not None:
            stats.guesses += 1
        starts: dict[int, Time] = {}
        if guess.x1:
            if stats is not None:
                stats.subproblems += 1
            before = ptas1(Instance(guess.x1), t1, 3 * eps / 5, guess_budget=guess_budget, stats=stats)
            if isinstance(before, Infeasible):
                if stats is not None:
                    stats.infeasible += 1
                continue
            starts.update(before.starts)
        after_jobs = tuple(j.with_times(r=t2) for j in guess.x2) + structure.y
        if after_jobs:
            if stats is not None:
                stats.subproblems += 1
            starts.update(ptas0(Instance(after_jobs), eps / 3, guess_budget=guess_budget, stats=stats).starts)
        # Lateness is measured with the original tails.
        candidate = compose_schedule(instance, starts, timeline)
        if best is None or candidate.lmax < best.lmax:
            _LOG.debug("window guess B1=%s z=%s gives lmax %s", guess.b1, guess.z, candidate.lmax)
            best = candidate
    assert best is not None, "scheduling everything after the window is always feasible"
    return best


def straddling_candidates(instance: Instance, t1: Time, t2: Time) -> tuple[int, ...]:
    # Starting by t1 is enough to straddle; finishing by t1 is not required.
    return tuple(sorted(j.id for j in instance.jobs if j.p >= t2 - t1 and j.r <= t1))


@dataclass(frozen=True)
class StraddlingGrid:
    job: Job
    points: tuple[Time, ...]

    @property
    def windows(self) -> tuple[tuple[Time, Time], ...]:
        """Shifted machine windows ``]t, t + p_s[`` the other jobs must avoid."""
        return tuple((t, t + self.job.p) for t in self.points)


@dataclass(frozen=True)
class StraddlingEnumeration:
    t1: Time
    t2: Time
    candidates: tuple[StraddlingGrid, ...]


def straddling_enumeration(instance: Instance, t1: Time, t2: Time, epsilon: Fraction | int | str) -> StraddlingEnumeration:
    steps = math.ceil(1 / as_epsilon(epsilon))
    grids = []
    for job_id in straddling_candidates(instance, t1, t2):
        job = instance.job(job_id)
        lo = t2 - job.p
        if lo == t1:
            points: tuple[Time, ...] = (t1,)
        else:
            points = tuple(lo + Fraction((t1 - lo) * h, steps) for h in range(steps + 1))
        grids.append(StraddlingGrid(job, points))
    return StraddlingEnumeration(t1, t2, tuple(grids))


def ptas4(
    instance: Instance,
    t1: Time,
    t2: Time,
    epsilon: Fraction | int | str,
    *,
    guess_budget: int = DEFAULT_GUESS_BUDGET,
    stats: SearchStats | None = None,
) -> Schedule:
    """Best of the no-straddle schedule and every guessed straddling job / start time."""
    timeline = Timeline.ona(t1, t2)
    validate_instance(instance, ScenarioSpec(timeline))
    eps = Fraction(1, unit_fraction(epsilon))
    best = ptas3(instance, t1, t2, eps, guess_budget=guess_budget, stats=stats).on_timeline(timeline)
    if t1 == t2:
        return best
    for grid in straddling_enumeration(instance, t1, t2, eps).candidates:
        s = grid.job
        rest = instance.without(s.id)
        for t in grid.points:
            if t < s.r:
                continue
            if stats is not None:
                stats.subproblems += 1
            starts: dict[int, Time] = {s.id: t}
            if rest.jobs:
                starts.update(ptas3(rest, t, t + s.p, eps, guess_budget=guess_budget, stats=stats).starts)
            candidate = compose_schedule(instance, starts, timeline)
            if problems := schedule_violations(instance, candidate):
                _LOG.debug("straddling job %d at %s discarded: %s", s.id, t, "; ".join(problems))
                continue
            if candidate.lmax < best.lmax:
                _LOG.debug("straddling job %d at %s gives lmax %s", s.id, t, candidate.lmax)
                best = candidate
    return best
