"""Traces, event logs, log readers and seeded fragment sampling."""

from __future__ import annotations

import csv
import json
import logging
import random
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import EmptyLog, MissingColumn, XmlError
from .nets import SKIP, AcceptingPetriNet, enabled_transitions, fire

log = logging.getLogger(__name__)


class TraceKind(str, Enum):
    COMPLETE = "complete"
    PREFIX = "prefix"
    INFIX = "infix"
    POSTFIX = "postfix"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Trace:
    activities: tuple
    kind: TraceKind = TraceKind.COMPLETE

    def __post_init__(self):
        activities = tuple(self.activities)
        for a in activities:
            if not isinstance(a, str) or not a or a in (SKIP, "τ"):
                raise ValueError(f"invalid activity label {a!r} in trace")
        object.__setattr__(self, "activities", activities)
        object.__setattr__(self, "kind", TraceKind(self.kind))

    def __len__(self):
        return len(self.activities)

    def __iter__(self):
        return iter(self.activities)

    def __getitem__(self, i):
        return self.activities[i]

    def labels(self) -> set:
        return set(self.activities)

    def __str__(self):
        return "<" + ",".join(self.activities) + ">"


@dataclass
class EventLog:
    traces: list = field(default_factory=list)
    attributes: dict = field(default_factory=dict)
    warnings: dict = field(default_factory=dict)

    def __post_init__(self):
        for t in self.traces:
            if t.kind is not TraceKind.COMPLETE:
                raise ValueError("event logs hold complete traces only")

    def __len__(self):
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def variants(self) -> dict:
        counts: dict = {}
        for t in self.traces:
            counts[t.activities] = counts.get(t.activities, 0) + 1
        return counts


def as_trace(activities, kind=TraceKind.COMPLETE) -> Trace:
    if isinstance(activities, Trace):
        return activities if activities.kind == TraceKind(kind) else Trace(activities.activities, kind)
    return Trace(tuple(activities), kind)


# -- readers ----------------------------------------------------------------

def _local(tag):
    return tag.rsplit("}", 1)[-1]


def load_xes(path) -> EventLog:
    """Read activity sequences (``concept:name``) from an XES file.

    Events without ``concept:name`` are skipped and counted under
    ``warnings["missing concept:name"]``.
    """
    path = Path(path)
    traces, attributes, missing = [], {}, 0
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise XmlError(f"malformed XES in {path}: {exc}", getattr(exc, "position", None)) from exc
    if _local(root.tag) != "log":
        raise XmlError(f"{path}: root element is <{_local(root.tag)}>, expected <log>")
    for child in root:
        tag = _local(child.tag)
        if tag == "trace":
            activities = []
            for event in child:
                if _local(event.tag) != "event":
                    continue
                name = next((a.get("value") for a in event
                             if _local(a.tag) == "string" and a.get("key") == "concept:name"), None)
                if name:
                    activities.append(name)
                else:
                    missing += 1
            traces.append(Trace(tuple(activities)))
        elif child.get("key") is not None and child.get("value") is not None:
            attributes[child.get("key")] = child.get("value")
    warnings = {}
    if missing:
        log.warning("%s: skipped %d events without concept:name", path, missing)
        warnings["missing concept:name"] = missing
    return EventLog(traces, attributes, warnings)


def load_csv(path, case_column="case", activity_column="activity", order_column=None) -> EventLog:
    """Group rows by case id (first-appearance order) and sort each case by
    ``order_column`` (stable; numeric if every value parses as a number)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (case_column, activity_column, order_column):
            if col is not None and col not in header:
                raise MissingColumn(col)
        rows = list(reader)
    cases: dict = {}
    for i, row in enumerate(rows):
        cases.setdefault(row[case_column], []).append((row.get(order_column) if order_column else i, i, row))
    traces = []
    for entries in cases.values():
        if order_column:
            keys = [e[0] for e in entries]
            try:
                numeric = [float(k) for k in keys]
                entries = [e for _, e in sorted(zip(numeric, entries), key=lambda x: (x[0], x[1][1]))]
            except ValueError:
                entries = sorted(entries, key=lambda e: (e[0], e[1]))
        traces.append(Trace(tuple(e[2][activity_column] for e in entries)))
    return EventLog(traces, {"source": str(path)})


def load_jsonl(path) -> EventLog:
    traces = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                traces.append(Trace(tuple(json.loads(line)["activities"])))
    return EventLog(traces, {"source": str(path)})


def write_jsonl(log_: EventLog, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, t in enumerate(log_.traces):
            fh.write(json.dumps({"case": str(i), "activities": list(t.activities)}) + "\n")


def load_log(path, **csv_options) -> EventLog:
    suffix = Path(path).suffix.lower()
    if suffix == ".xes":
        return load_xes(path)
    if suffix == ".csv":
        return load_csv(path, **csv_options)
    if suffix in (".jsonl", ".json"):
        return load_jsonl(path)
    raise ValueError(f"unrecognised log format {suffix!r}")


# -- sampling ---------------------------------------------------------------

def _eligible(log_: EventLog, min_len: int) -> list:
    if not log_.traces:
        raise EmptyLog("log has no traces")
    eligible = [t for t in log_.traces if len(t) >= min_len]
    if not eligible:
        raise EmptyLog(f"no trace has at least {min_len} events")
    return eligible


def sample_infixes(log_: EventLog, n: int, min_len: int, max_len: int, seed: int) -> list[Trace]:
    """Draw ``n`` contiguous infixes: trace uniformly over log entries (so
    proportional to variant multiplicity), length uniform in
    ``[min_len, min(max_len, len(trace))]``, start uniform."""
    if not 1 <= min_len <= max_len:
        raise ValueError("need 1 <= min_len <= max_len")
    rng = random.Random(seed)
    eligible = _eligible(log_, min_len)
    result = []
    for _ in range(n):
        trace = eligible[rng.randrange(len(eligible))]
        length = rng.randint(min_len, min(max_len, len(trace)))
        start = rng.randint(0, len(trace) - length)
        result.append(Trace(trace.activities[start:start + length], TraceKind.INFIX))
    return result


def sample_postfixes(log_: EventLog, n: int, min_len: int, seed: int, max_len: int | None = None) -> list[Trace]:
    if min_len < 1 or (max_len is not None and max_len < min_len):
        raise ValueError("need 1 <= min_len <= max_len")
    rng = random.Random(seed)
    eligible = _eligible(log_, min_len)
    result = []
    for _ in range(n):
        trace = eligible[rng.randrange(len(eligible))]
        upper = len(trace) if max_len is None else min(max_len, len(trace))
        length = rng.randint(min_len, upper)
        result.append(Trace(trace.activities[len(trace) - length:], TraceKind.POSTFIX))
    return result


# -- synthetic logs ---------------------------------------------------------

def simulate_log(net: AcceptingPetriNet, n: int, seed: int, noise: float = 0.0,
                 alphabet: Sequence[str] | None = None, max_steps: int = 200) -> EventLog:
    """Random playouts from the initial to the final marking.

    With probability ``noise`` per event, the event is dropped, swapped with
    its successor, or followed by a random activity from ``alphabet``.
    """
    rng = random.Random(seed)
    alphabet = sorted(alphabet or net.visible_labels())
    traces = []
    while len(traces) < n:
        marking, labels = net.initial_marking, []
        for _ in range(max_steps):
            if marking == net.final_marking:
                break
            enabled = sorted(enabled_transitions(net, marking))
            if not enabled:
                break
            t = rng.choice(enabled)
            marking = fire(net, marking, t)
            if net.label(t) is not None:
                labels.append(net.label(t))
        if marking != net.final_marking:
            continue
        traces.append(Trace(tuple(_add_noise(labels, rng, noise, alphabet))))
    return EventLog(traces, {"source": "simulated", "seed": seed, "noise": noise})


def _add_noise(labels: list, rng: random.Random, noise: float, alphabet: list) -> list:
    if noise <= 0:
        return labels
    out: list = []
    i = 0
    while i < len(labels):
        if rng.random() >= noise:
            out.append(labels[i])
            i += 1
            continue
        action = rng.randrange(3)
        if action == 0:
            i += 1
        elif action == 1 and i + 1 < len(labels):
            out.extend([labels[i + 1], labels[i]])
            i += 2
        else:
            out.extend([labels[i], rng.choice(alphabet)])
            i += 1
    return out
