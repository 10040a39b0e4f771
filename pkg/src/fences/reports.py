"""Run configuration, the JSONL result cache, and report writers.

Reports are deterministic: JSON is dumped with sorted keys, CSV columns are
fixed, and sweep rows are emitted in sweep order, so identical RunConfigs
produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import __version__

DIMS_COLUMNS = ["fence", "n", "t", "num_ideals", "num_orbits",
                "dim_IT", "dim_AT", "dim_IH", "dim_AH",
                "single_orbit", "ih_equals_it"]


@dataclass
class RunConfig:
    """One CLI invocation, round-trippable through JSON."""

    command: str
    fence: str | None = None
    ideal: str | None = None
    map_name: str | None = None
    t: int | None = None
    max_n: int | None = None
    min_n: int = 3
    max_apt: int | None = None
    conjecture: str | None = None
    realm: str | None = None
    seed: int | None = None
    steps: int | None = None
    cesaro: int | None = None
    tolerance: float = 1e-3
    extended: bool = False
    jobs: int = 1
    out: str | None = None
    cache_dir: str | None = None
    no_cache: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "RunConfig":
        data = json.loads(text)
        names = {f.name for f in fields(RunConfig)}
        return RunConfig(**{k: v for k, v in data.items() if k in names})


def default_cache_dir() -> Path:
    env = os.environ.get("FENCES_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME", os.path.join(os.path.expanduser("~"), ".cache"))
    return Path(base) / "fences"


class ReportCache:
    """Append-only JSONL cache keyed by (operation, key, code version).

    One file per operation; hits must be numerically identical to fresh
    computation, so the package version participates in every key.
    """

    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory else default_cache_dir()
        self._loaded: dict[str, dict[str, object]] = {}

    def _path(self, operation: str) -> Path:
        return self.directory / f"{operation}.jsonl"

    def _table(self, operation: str) -> dict[str, object]:
        if operation not in self._loaded:
            table: dict[str, object] = {}
            path = self._path(operation)
            if path.exists():
                with open(path, encoding="utf-8") as fh:
                    for line in fh:
                        line = line.strip()
                        if not line:
                            continue
                        rec = json.loads(line)
                        if rec.get("version") == __version__:
                            table[rec["key"]] = rec["value"]
            self._loaded[operation] = table
        return self._loaded[operation]

    def get(self, operation: str, key: str):
        return self._table(operation).get(key)

    def put(self, operation: str, key: str, value) -> None:
        table = self._table(operation)
        if table.get(key) == value:
            return
        table[key] = value
        self.directory.mkdir(parents=True, exist_ok=True)
        with open(self._path(operation), "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"key": key, "version": __version__, "value": value},
                                sort_keys=True) + "\n")


def dims_rows(reports) -> list[dict]:
    rows = []
    for r in reports:
        d = r if isinstance(r, dict) else r.to_json_dict()
        rows.append({c: d[c] for c in DIMS_COLUMNS})
    return rows


def dims_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=DIMS_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in dims_rows(reports):
        writer.writerow(row)
    return buf.getvalue()


def dims_summary(reports) -> dict:
    """Aggregate counts in the layout of the paper-style data table row."""
    rows = dims_rows(reports)
    return {
        "num_fences": len(rows),
        "num_single_orbit": sum(1 for r in rows if r["single_orbit"]),
        "num_ih_equals_it": sum(1 for r in rows if r["ih_equals_it"]),
    }


def write_text(path: str | os.PathLike, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text, encoding="utf-8")


def json_lines(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
