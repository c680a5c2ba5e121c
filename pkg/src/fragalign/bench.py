"""Benchmark runner comparing the relevant-marking strategies on sampled fragments.

Every (fragment, method) pair is aligned independently and timed end to end;
marking generation time is reported separately. Costs must agree across
methods for every fragment, otherwise the run reports a mismatch.
"""

from __future__ import annotations

import csv
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .alignment import AlignConfig, align
from .auxiliary import Method
from .running_example import running_example_tree
from .traces import EventLog, Trace, load_jsonl, sample_infixes, sample_postfixes, simulate_log
from .tree import random_tree
from .tree_net import TreeNetBinding, to_wfnet

CSV_COLUMNS = [
    "instance", "model", "kind", "method", "fragment", "length", "cost",
    "relevant_markings", "expanded", "queued", "marking_ms", "total_ms",
]
TIMING_COLUMNS = ("marking_ms", "total_ms")


@dataclass
class BenchmarkResult:
    rows: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def applicable_methods(model) -> list[Method]:
    if isinstance(model, TreeNetBinding):
        return [Method.BASELINE, Method.FILTERED, Method.ADVANCED]
    return [Method.BASELINE, Method.FILTERED]


def _run_one(job):
    index, model, model_name, fragment, kind, method, config = job
    a = align(model, fragment, kind, method, config)
    return {
        "instance": index,
        "model": model_name,
        "kind": str(kind),
        "method": str(method),
        "fragment": " ".join(fragment.activities),
        "length": len(fragment),
        "cost": a.cost,
        "relevant_markings": a.stats.get("relevant_markings", 0),
        "expanded": a.stats["expanded"],
        "queued": a.stats["queued"],
        "marking_ms": round(a.stats["marking_ms"], 3),
        "total_ms": round(a.stats["ms"], 3),
    }


def run_benchmark(model, fragments, methods=None, kind="infix", jobs: int = 1,
                  config: AlignConfig | None = None, model_name: str = "model",
                  first_index: int = 0) -> BenchmarkResult:
    methods = [Method(m) for m in (methods or applicable_methods(model))]
    config = config or AlignConfig()
    work = [(first_index + i, model, model_name, f, kind, m, config)
            for i, f in enumerate(fragments) for m in methods]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        rows = [_run_one(job) for job in work]
    rows.sort(key=lambda r: (r["instance"], methods.index(Method(r["method"]))))
    return BenchmarkResult(rows, cost_mismatches(rows))


def cost_mismatches(rows) -> list:
    by_instance: dict = {}
    for r in rows:
        by_instance.setdefault((r["model"], r["instance"]), {})[r["method"]] = r["cost"]
    return [(key, costs) for key, costs in sorted(by_instance.items()) if len(set(costs.values())) > 1]


def write_csv(rows, path, include_timing: bool = True) -> None:
    columns = [c for c in CSV_COLUMNS if include_timing or c not in TIMING_COLUMNS]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def summarize(rows) -> list[dict]:
    groups: dict = {}
    for r in rows:
        groups.setdefault((r["model"], r["kind"], r["method"]), []).append(r)
    summary = []
    for (model, kind, method), group in groups.items():
        mean = lambda col: statistics.fmean(r[col] for r in group)
        summary.append({
            "model": model, "kind": kind, "method": method, "n": len(group),
            "mean_cost": mean("cost"), "mean_relevant": mean("relevant_markings"),
            "mean_expanded": mean("expanded"), "mean_queued": mean("queued"),
            "mean_marking_ms": mean("marking_ms"), "mean_total_ms": mean("total_ms"),
        })
    return summary


def format_summary(summary) -> str:
    header = ["model", "kind", "method", "n", "cost", "markings", "expanded", "queued", "step1 ms", "total ms"]
    lines = [header]
    for s in summary:
        lines.append([s["model"], s["kind"], s["method"], str(s["n"]), f"{s['mean_cost']:.3f}",
                      f"{s['mean_relevant']:.1f}", f"{s['mean_expanded']:.1f}", f"{s['mean_queued']:.1f}",
                      f"{s['mean_marking_ms']:.2f}", f"{s['mean_total_ms']:.2f}"])
    widths = [max(len(row[i]) for row in lines) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in lines)


# -- bundled example suite --------------------------------------------------

def bundled_log() -> EventLog:
    with resources.as_file(resources.files("fragalign") / "data" / "running_example.jsonl") as path:
        return load_jsonl(path)


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("fragalign") / "data" / name))


@dataclass
class SuiteEntry:
    name: str
    binding: TreeNetBinding
    log: EventLog


def bundled_suite(n_random: int = 3, seed: int = 2023, max_nodes: int = 15) -> list[SuiteEntry]:
    """The running example with its bundled log, plus ``n_random`` random trees
    (at most ``max_nodes`` nodes, at least four activities) with noisy simulated logs."""
    entries = [SuiteEntry("running-example", to_wfnet(running_example_tree()), bundled_log())]
    rng = random.Random(seed)
    while len(entries) < n_random + 1:
        tree = random_tree(rng, max_nodes, tau_probability=0.1)
        if len(tree.activities()) < 4:
            continue
        binding = to_wfnet(tree, name=f"random-{len(entries)}")
        log_ = simulate_log(binding.net, 50, seed=rng.randrange(10**6), noise=0.2,
                            alphabet=sorted(tree.activities()))
        log_.traces = [t for t in log_.traces if len(t) >= 2]
        if len(log_.traces) < 10:
            continue
        entries.append(SuiteEntry(f"random-{len(entries)}", binding, log_))
    return entries


def sample_fragments(log_: EventLog, kind: str, n: int, min_len: int, max_len: int, seed: int) -> list[Trace]:
    if str(kind) == "postfix":
        return sample_postfixes(log_, n, min_len, seed, max_len=max_len)
    return sample_infixes(log_, n, min_len, max_len, seed)
