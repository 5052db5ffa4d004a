"""Instance files: JSON schema, parsing, canonical emission and random generation."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import jsonschema

from lmax_ptas.core import (
    UNRESTRICTED,
    Instance,
    Job,
    ScenarioSpec,
    Timeline,
    TimelineKind,
    validate_instance,
)
from lmax_ptas.errors import BadParams, BadWindow, InstanceError, SchemaError
from lmax_ptas.schrage import schrage


class Scenario(StrEnum):
    P0 = "p0"
    DEADLINE = "deadline"
    PARETO = "pareto"
    MNA = "mna"
    ONA = "ona"


_NONNEG_INT: dict[str, Any] = {"type": "integer", "minimum": 0}
INSTANCE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "jobs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "id": _NONNEG_INT,
                    "p": {"type": "integer", "minimum": 1, "description": "Processing time."},
                    "r": {**_NONNEG_INT, "description": "Head (release time)."},
                    "q": {**_NONNEG_INT, "description": "Tail (delivery time)."},
                },
                "required": ["id", "p", "r", "q"],
            },
        },
        "deadline": {**_NONNEG_INT, "description": "Common deadline on every completion."},
        "window": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kind": {"type": "string", "enum": ["mna", "ona"]},
                "t1": _NONNEG_INT,
                "t2": _NONNEG_INT,
            },
            "required": ["kind", "t1", "t2"],
        },
        "metadata": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"name": {"type": "string"}, "seed": {"type": "integer"}},
        },
    },
    "required": ["jobs"],
}


@dataclass(frozen=True)
class InstanceFile:
    jobs: tuple[Job, ...]
    deadline: int | None = None
    timeline: Timeline = UNRESTRICTED
    metadata: dict[str, Any] = field(default_factory=dict, hash=False)

    @property
    def name(self) -> str | None:
        return self.metadata.get("name")

    @property
    def instance(self) -> Instance:
        return Instance(self.jobs)

    @property
    def spec(self) -> ScenarioSpec:
        return ScenarioSpec(self.timeline, self.deadline)

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"jobs": [{"id": j.id, "p": j.p, "r": j.r, "q": j.q} for j in self.jobs]}
        if self.deadline is not None:
            doc["deadline"] = self.deadline
        if self.timeline.has_window:
            doc["window"] = {"kind": str(self.timeline.kind), "t1": self.timeline.t1, "t2": self.timeline.t2}
        if self.metadata:
            doc["metadata"] = dict(self.metadata)
        return doc


def _path(error: jsonschema.ValidationError) -> str:
    return "/".join(str(part) for part in error.absolute_path) or "<root>"


def parse_instance_file(text: str) -> InstanceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg}", line=e.lineno) from e
    try:
        jsonschema.validate(instance=doc, schema=INSTANCE_SCHEMA)
    except jsonschema.ValidationError as e:
        raise SchemaError(e.message, path=_path(e)) from e

    jobs = tuple(Job(id=j["id"], p=j["p"], r=j["r"], q=j["q"]) for j in doc["jobs"])
    timeline = UNRESTRICTED
    if (window := doc.get("window")) is not None:
        timeline = Timeline(TimelineKind(window["kind"]), window["t1"], window["t2"])
    parsed = InstanceFile(jobs, doc.get("deadline"), timeline, dict(doc.get("metadata", {})))
    try:
        validate_instance(parsed.instance, parsed.spec)
    except InstanceError as e:
        raise SchemaError(str(e), path="window" if isinstance(e, BadWindow) else "jobs") from e
    return parsed


def parse_instance(text: str) -> tuple[Instance, ScenarioSpec]:
    parsed = parse_instance_file(text)
    return parsed.instance, parsed.spec


def emit_instance(instance_file: InstanceFile) -> str:
    return json.dumps(instance_file.to_dict(), indent=2, sort_keys=True) + "\n"


def gen_random(
    n: int,
    seed: int,
    p_max: int = 10,
    r_max: int = 20,
    q_max: int = 15,
    scenario: Scenario | str = Scenario.P0,
) -> InstanceFile:
    if n < 1:
        raise BadParams(f"n must be at least 1, got {n}")
    if p_max < 1 or r_max < 0 or q_max < 0:
        raise BadParams(f"need p_max >= 1 and r_max, q_max >= 0 (got {p_max}, {r_max}, {q_max})")
    try:
        scenario = Scenario(scenario)
    except ValueError as e:
        raise BadParams(f"unknown scenario {scenario!r}") from e

    rng = random.Random(seed)
    jobs = tuple(Job(id=i, p=rng.randint(1, p_max), r=rng.randint(0, r_max), q=rng.randint(0, q_max)) for i in range(1, n + 1))
    deadline = None
    timeline = UNRESTRICTED
    if scenario is Scenario.DEADLINE:
        deadline = schrage(Instance(jobs)).cmax + rng.randint(0, p_max)
    elif scenario in (Scenario.MNA, Scenario.ONA):
        horizon = r_max + p_max
        t1 = rng.randint(0, horizon)
        t2 = rng.randint(t1, horizon)
        timeline = Timeline(TimelineKind(str(scenario)), t1, t2)
    metadata = {"name": f"{scenario}-n{n}-s{seed}", "seed": seed}
    return InstanceFile(jobs, deadline, timeline, metadata)
