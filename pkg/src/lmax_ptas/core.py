from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from enum import StrEnum
from fractions import Fraction
from functools import cached_property
from typing import TypeAlias

from lmax_ptas.errors import (
    BadWindow,
    DuplicateId,
    EmptySubset,
    InstanceError,
    NegativeTime,
    NonPositiveProcessing,
    NotAPermutation,
)

# Times are exact: plain ints for input data, Fractions once scaling or grids are involved.
Time: TypeAlias = int | Fraction


@dataclass(frozen=True)
class Job:
    id: int
    p: int
    r: Time = 0
    q: Time = 0

    def with_times(self, *, r: Time | None = None, q: Time | None = None) -> Job:
        return replace(self, r=self.r if r is None else r, q=self.q if q is None else q)


@dataclass(frozen=True)
class Instance:
    jobs: tuple[Job, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.jobs, tuple):
            object.__setattr__(self, "jobs", tuple(self.jobs))

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[int, Time, Time]]) -> Instance:
        """Build an instance from ``(p, r, q)`` rows, numbering jobs from 1."""
        return cls(tuple(Job(id=i, p=p, r=r, q=q) for i, (p, r, q) in enumerate(rows, start=1)))

    @property
    def n(self) -> int:
        return len(self.jobs)

    @cached_property
    def ids(self) -> tuple[int, ...]:
        return tuple(j.id for j in self.jobs)

    @cached_property
    def _by_id(self) -> dict[int, Job]:
        return {j.id: j for j in self.jobs}

    @cached_property
    def total_p(self) -> int:
        return sum(j.p for j in self.jobs)

    def job(self, job_id: int) -> Job:
        return self._by_id[job_id]

    def p_of(self, ids: Iterable[int]) -> int:
        return sum(self._by_id[i].p for i in ids)

    def subset(self, ids: Iterable[int]) -> Instance:
        keep = set(ids)
        return Instance(tuple(j for j in self.jobs if j.id in keep))

    def without(self, job_id: int) -> Instance:
        return Instance(tuple(j for j in self.jobs if j.id != job_id))

    def replace_jobs(self, changed: Mapping[int, Job]) -> Instance:
        return Instance(tuple(changed.get(j.id, j) for j in self.jobs))


class TimelineKind(StrEnum):
    UNRESTRICTED = "unrestricted"
    MNA = "mna"
    ONA = "ona"


@dataclass(frozen=True)
class Timeline:
    """Machine timeline, optionally carrying one open non-availability window ]t1, t2[."""

    kind: TimelineKind = TimelineKind.UNRESTRICTED
    t1: Time | None = None
    t2: Time | None = None

    @classmethod
    def unrestricted(cls) -> Timeline:
        return cls()

    @classmethod
    def mna(cls, t1: Time, t2: Time) -> Timeline:
        return cls(TimelineKind.MNA, t1, t2)

    @classmethod
    def ona(cls, t1: Time, t2: Time) -> Timeline:
        return cls(TimelineKind.ONA, t1, t2)

    @property
    def has_window(self) -> bool:
        return self.kind is not TimelineKind.UNRESTRICTED

    def inside(self, t: Time) -> bool:
        return self.has_window and self.t1 < t < self.t2

    def collides(self, start: Time, p: int) -> bool:
        if self.kind is TimelineKind.MNA:
            return max(start, self.t1) < min(start + p, self.t2)
        if self.kind is TimelineKind.ONA:
            return self.inside(start) or self.inside(start + p)
        return False

    def earliest_start(self, ready: Time, p: int) -> Time:
        """Smallest feasible start not before ``ready`` for a job of length ``p``."""
        if not self.collides(ready, p):
            return ready
        if self.kind is TimelineKind.ONA:
            # Span the window so that the job completes exactly at t2.
            spanning = self.t2 - p
            if ready <= spanning <= self.t1:
                return spanning
        return self.t2


UNRESTRICTED = Timeline()


@dataclass(frozen=True)
class ScenarioSpec:
    timeline: Timeline = UNRESTRICTED
    deadline: Time | None = None


@dataclass(frozen=True)
class Schedule:
    sequence: tuple[int, ...]
    starts: Mapping[int, Time] = field(hash=False)
    completions: Mapping[int, Time] = field(hash=False)
    lmax: Time
    cmax: Time
    timeline: Timeline = UNRESTRICTED

    def rows(self) -> list[tuple[int, Time, Time]]:
        return [(j, self.starts[j], self.completions[j]) for j in self.sequence]

    def on_timeline(self, timeline: Timeline) -> Schedule:
        return replace(self, timeline=timeline)


@dataclass(frozen=True)
class Infeasible:
    """No schedule meets the deadline; ``min_cmax`` is the smallest achievable makespan."""

    deadline: Time
    min_cmax: Time


@dataclass
class SearchStats:
    guesses: int = 0
    schrage_runs: int = 0
    subproblems: int = 0
    infeasible: int = 0


def format_time(t: Time) -> str:
    t = Fraction(t)
    return str(t.numerator) if t.denominator == 1 else f"{t.numerator}/{t.denominator}"


def validate_instance(instance: Instance, spec: ScenarioSpec | None = None) -> None:
    if not instance.jobs:
        raise InstanceError("instance has no jobs")
    seen: set[int] = set()
    for j in instance.jobs:
        if j.id in seen:
            raise DuplicateId(f"job id {j.id} appears more than once")
        seen.add(j.id)
        if j.id < 0:
            raise InstanceError(f"job id {j.id} is negative")
        if not isinstance(j.p, int) or j.p < 1:
            raise NonPositiveProcessing(f"job {j.id}: processing time must be a positive integer, got {j.p!r}")
        if j.r < 0 or j.q < 0:
            raise NegativeTime(f"job {j.id}: head and tail must be nonnegative (r={j.r}, q={j.q})")
    if spec is None:
        return
    validate_timeline(spec.timeline)
    if spec.deadline is not None and spec.deadline < 0:
        raise NegativeTime(f"deadline must be nonnegative, got {spec.deadline}")


def validate_timeline(timeline: Timeline) -> None:
    if not timeline.has_window:
        if timeline.t1 is not None or timeline.t2 is not None:
            raise BadWindow("an unrestricted timeline carries no window")
        return
    if timeline.t1 is None or timeline.t2 is None:
        raise BadWindow(f"{timeline.kind} timeline needs both t1 and t2")
    if timeline.t1 < 0:
        raise BadWindow(f"window start must be nonnegative, got {timeline.t1}")
    if timeline.t1 > timeline.t2:
        raise BadWindow(f"window start {timeline.t1} is after window end {timeline.t2}")


def _check_permutation(instance: Instance, sequence: Sequence[int]) -> None:
    if len(sequence) != instance.n or sorted(sequence) != sorted(instance.ids):
        raise NotAPermutation(f"sequence {tuple(sequence)} is not a permutation of job ids {instance.ids}")


def evaluate_sequence(instance: Instance, sequence: Sequence[int], timeline: Timeline = UNRESTRICTED) -> Schedule:
    """Give every job, in order, its earliest feasible start on ``timeline``."""
    _check_permutation(instance, sequence)
    starts: dict[int, Time] = {}
    completions: dict[int, Time] = {}
    free: Time = 0
    lmax: Time | None = None
    for job_id in sequence:
        job = instance.job(job_id)
        s = timeline.earliest_start(max(free, job.r), job.p)
        starts[job_id] = s
        free = completions[job_id] = s + job.p
        lateness = free + job.q
        if lmax is None or lateness > lmax:
            lmax = lateness
    return Schedule(tuple(sequence), starts, completions, lmax, free, timeline)


def compose_schedule(instance: Instance, starts: Mapping[int, Time], timeline: Timeline = UNRESTRICTED) -> Schedule:
    """Build a schedule from explicit start times; lateness is measured on ``instance``."""
    _check_permutation(instance, list(starts))
    sequence = tuple(sorted(starts, key=lambda j: (starts[j], j)))
    completions = {j: starts[j] + instance.job(j).p for j in sequence}
    lmax = max(completions[j] + instance.job(j).q for j in sequence)
    cmax = max(completions.values())
    return Schedule(sequence, dict(starts), completions, lmax, cmax, timeline)


def schedule_violations(instance: Instance, schedule: Schedule) -> list[str]:
    problems: list[str] = []
    if sorted(schedule.sequence) != sorted(instance.ids):
        return [f"sequence {schedule.sequence} is not a permutation of {instance.ids}"]
    timeline = schedule.timeline
    prev: int | None = None
    for job_id in schedule.sequence:
        job = instance.job(job_id)
        s, c = schedule.starts[job_id], schedule.completions[job_id]
        if c != s + job.p:
            problems.append(f"job {job_id}: completion {c} != start {s} + p {job.p}")
        if s < job.r:
            problems.append(f"job {job_id}: starts at {s} before its head {job.r}")
        if prev is not None and s < schedule.completions[prev]:
            problems.append(f"job {job_id} overlaps job {prev}")
        if timeline.kind is TimelineKind.MNA and timeline.collides(s, job.p):
            problems.append(f"job {job_id} runs inside the machine window ]{timeline.t1},{timeline.t2}[")
        if timeline.kind is TimelineKind.ONA and (timeline.inside(s) or timeline.inside(c)):
            problems.append(f"job {job_id} starts or completes inside the operator window ]{timeline.t1},{timeline.t2}[")
        prev = job_id
    lmax = max(schedule.completions[j] + instance.job(j).q for j in schedule.sequence)
    if lmax != schedule.lmax:
        problems.append(f"lmax {schedule.lmax} != recomputed {lmax}")
    if max(schedule.completions.values()) != schedule.cmax:
        problems.append(f"cmax {schedule.cmax} != recomputed {max(schedule.completions.values())}")
    return problems


def lower_bound_subset(instance: Instance, ids: Iterable[int], *, not_before: Time = 0) -> Time:
    """min head + total processing + min tail over ``ids``; never above the optimal lmax."""
    jobs = [instance.job(i) for i in ids]
    if not jobs:
        raise EmptySubset("lower bound needs at least one job")
    return max(not_before, min(j.r for j in jobs)) + sum(j.p for j in jobs) + min(j.q for j in jobs)
