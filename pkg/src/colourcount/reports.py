"""Report model shared by the verification pipelines, the service and the CLI.

A report is an instance descriptor plus a list of checks.  Each check carries
its compared quantities as tagged values so a reader can tell an exact integer
comparison from a log-space one.  Serialization is byte-stable for identical
inputs: keys are sorted, floats use their shortest repr, and per-check
runtimes are excluded unless explicitly requested.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .errors import InputError

__all__ = [
    "Status",
    "TaggedValue",
    "Check",
    "InstanceInfo",
    "VerificationReport",
    "report_from_json",
    "report_from_csv",
    "grid_to_csv",
    "grid_from_csv",
]

_KINDS = ("int", "log", "rational", "real", "text")


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    MARGINAL = "marginal"
    INFO = "informational"

    @property
    def failed(self) -> bool:
        return self is Status.FAIL


@dataclass(frozen=True)
class TaggedValue:
    """A compared quantity plus how to read it.

    kind "int": exact integer.  "log": natural log of the actual value.
    "rational": exact fraction, stored as "num/den".  "real": plain float.
    "text": anything else.
    """

    kind: str
    value: int | float | str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InputError(f"unknown value kind {self.kind!r}")

    @classmethod
    def of_int(cls, value: int) -> "TaggedValue":
        return cls("int", int(value))

    @classmethod
    def of_log(cls, log: float) -> "TaggedValue":
        return cls("log", float(log))

    @classmethod
    def of_rational(cls, value: Fraction) -> "TaggedValue":
        return cls("rational", f"{value.numerator}/{value.denominator}")

    @classmethod
    def of_real(cls, value: float) -> "TaggedValue":
        return cls("real", float(value))

    @classmethod
    def of_text(cls, value: str) -> "TaggedValue":
        return cls("text", str(value))

    def as_fraction(self) -> Fraction:
        if self.kind != "rational":
            raise InputError(f"not a rational value: kind={self.kind}")
        return Fraction(self.value)

    def render(self) -> str:
        if self.kind == "log":
            return f"exp({self.value:.9g})"
        return str(self.value)

    def to_jsonable(self) -> dict:
        return {"kind": self.kind, "value": self.value}

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "TaggedValue":
        return cls(data["kind"], data["value"])


@dataclass(frozen=True)
class Check:
    """One verified relation: lhs <comparison> rhs, with a stable anchor label."""

    name: str
    anchor: str
    lhs: TaggedValue
    rhs: TaggedValue
    comparison: str
    status: Status
    note: str = ""
    runtime_s: float | None = None

    def to_jsonable(self, include_runtime: bool = False) -> dict:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "lhs": self.lhs.to_jsonable(),
            "rhs": self.rhs.to_jsonable(),
            "comparison": self.comparison,
            "status": self.status.value,
            "note": self.note,
        }
        if include_runtime and self.runtime_s is not None:
            out["runtime_s"] = self.runtime_s
        return out

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "Check":
        return cls(
            name=data["name"],
            anchor=data["anchor"],
            lhs=TaggedValue.from_jsonable(data["lhs"]),
            rhs=TaggedValue.from_jsonable(data["rhs"]),
            comparison=data["comparison"],
            status=Status(data["status"]),
            note=data.get("note", ""),
            runtime_s=data.get("runtime_s"))


@dataclass(frozen=True)
class InstanceInfo:
    """Where the instance came from and what it measures as."""

    source: str
    n: int
    m: int
    seed: int | None = None
    profile: dict = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {"source": self.source, "n": self.n, "m": self.m,
                "seed": self.seed, "profile": dict(self.profile)}

    @classmethod
    def from_jsonable(cls, data: Mapping[str, Any]) -> "InstanceInfo":
        return cls(source=data["source"], n=data["n"], m=data["m"],
                   seed=data.get("seed"), profile=dict(data.get("profile", {})))


@dataclass(frozen=True)
class VerificationReport:
    command: str
    instance: InstanceInfo
    checks: tuple[Check, ...]
    version: str

    @property
    def passed(self) -> bool:
        return not any(c.status.failed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def counts(self) -> dict[str, int]:
        out = {s.value: 0 for s in Status}
        for c in self.checks:
            out[c.status.value] += 1
        return out

    def with_runtimes_cleared(self) -> "VerificationReport":
        return replace(self, checks=tuple(replace(c, runtime_s=None)
                                          for c in self.checks))

    def to_jsonable(self, include_runtime: bool = False) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "instance": self.instance.to_jsonable(),
            "checks": [c.to_jsonable(include_runtime) for c in self.checks],
        }

    def to_json(self, include_runtime: bool = False) -> str:
        return json.dumps(self.to_jsonable(include_runtime),
                          sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        meta = {"command": self.command, "version": self.version,
                "source": self.instance.source, "seed": self.instance.seed,
                "n": self.instance.n, "m": self.instance.m}
        for key, val in meta.items():
            writer.writerow(["meta", key, "", json.dumps(val), "", "", "", "", ""])
        for key in sorted(self.instance.profile):
            writer.writerow(["profile", key, "",
                             json.dumps(self.instance.profile[key]),
                             "", "", "", "", ""])
        for c in self.checks:
            writer.writerow(["check", c.name, c.lhs.kind, json.dumps(c.lhs.value),
                             c.rhs.kind, json.dumps(c.rhs.value),
                             c.comparison, c.status.value,
                             json.dumps({"anchor": c.anchor, "note": c.note})])
        return buf.getvalue()


_CSV_COLUMNS = ["record", "name", "lhs_kind", "lhs", "rhs_kind", "rhs",
                "comparison", "status", "extra"]


def report_from_json(text: str) -> VerificationReport:
    data = json.loads(text)
    return VerificationReport(
        command=data["command"],
        instance=InstanceInfo.from_jsonable(data["instance"]),
        checks=tuple(Check.from_jsonable(c) for c in data["checks"]),
        version=data["version"])


def report_from_csv(text: str) -> VerificationReport:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != _CSV_COLUMNS:
        raise InputError("not a report CSV: header mismatch")
    meta: dict[str, Any] = {}
    profile: dict[str, Any] = {}
    checks: list[Check] = []
    for row in rows[1:]:
        record, name = row[0], row[1]
        if record == "meta":
            meta[name] = json.loads(row[3])
        elif record == "profile":
            profile[name] = json.loads(row[3])
        elif record == "check":
            extra = json.loads(row[8])
            checks.append(Check(
                name=name, anchor=extra["anchor"],
                lhs=TaggedValue(row[2], json.loads(row[3])),
                rhs=TaggedValue(row[4], json.loads(row[5])),
                comparison=row[6], status=Status(row[7]),
                note=extra["note"]))
        else:
            raise InputError(f"unknown record type {record!r} in report CSV")
    info = InstanceInfo(source=meta["source"], n=meta["n"], m=meta["m"],
                        seed=meta["seed"], profile=profile)
    return VerificationReport(command=meta["command"], instance=info,
                              checks=tuple(checks), version=meta["version"])


# ---------------------------------------------------------------------------
# plain tables (the bounds grid)

def grid_to_csv(fieldnames: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row.get(k) is None else row[k])
                         for k in fieldnames})
    return buf.getvalue()


def grid_from_csv(text: str) -> list[dict[str, str]]:
    return [dict(row) for row in csv.DictReader(io.StringIO(text))]
