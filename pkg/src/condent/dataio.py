"""File formats: labeled pair files, pmf documents, campaign configs and
simulation outputs."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .estimation import SampleSet
from .pmf import DomainError, JointPmf, Mode, flatten_index, unflatten_index, validate
from .simulation import CampaignConfig, SimulationTrace, ZipfSpec, zipf_pmf

HEADER_NAMES = {("x", "y"), ("x_label", "y_label")}


@dataclass(frozen=True)
class LabelMapping:
    """Sorted labels; ``x_labels[i-1]`` is outcome ``x_i``."""

    x_labels: tuple[str, ...]
    y_labels: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"x": {lab: i for i, lab in enumerate(self.x_labels, 1)},
                "y": {lab: j for j, lab in enumerate(self.y_labels, 1)}}


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return "sha256:" + h.hexdigest()


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _looks_like_header(first: list[str], rest: list[list[str]]) -> bool:
    if tuple(c.strip().lower() for c in first) in HEADER_NAMES:
        return True
    # a non-numeric row above numeric-only data is a header
    sample = [row for row in rest[:100] if len(row) == 2]
    return (bool(sample) and not all(_is_number(c) for c in first)
            and all(_is_number(c) for row in sample for c in row))


def _read_csv(path, header: bool | None) -> list[tuple[int, str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), 1)
                if row and any(c.strip() for c in row)]
    if not rows:
        raise DomainError(f"{path}: no data rows")
    if header is None:
        header = _looks_like_header(rows[0][1], [r for _, r in rows[1:]])
    if header:
        rows = rows[1:]
    pairs = []
    for lineno, row in rows:
        if len(row) != 2:
            raise DomainError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
        pairs.append((lineno, row[0], row[1]))
    return pairs


def _read_jsonl(path) -> list[tuple[int, str, str]]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                pairs.append((lineno, str(obj["x"]), str(obj["y"])))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DomainError(f"{path}:{lineno}: malformed record ({exc})") from None
    return pairs


def ingest_pairs(path, fmt: str | None = None, header: bool | None = None) -> tuple[SampleSet, LabelMapping]:
    """Read ``(x_label, y_label)`` rows into a :class:`SampleSet`.

    Labels are sorted lexicographically on each axis to assign indices, so the
    mapping does not depend on row order. ``fmt`` defaults from the suffix
    (``.jsonl`` or csv).
    """
    path = Path(path)
    fmt = fmt or ("jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv")
    if fmt == "csv":
        raw = _read_csv(path, header)
    elif fmt == "jsonl":
        raw = _read_jsonl(path)
    else:
        raise DomainError(f"unknown format {fmt!r}")
    if not raw:
        raise DomainError(f"{path}: no data rows")
    pairs = []
    for lineno, x, y in raw:
        x, y = x.strip(), y.strip()
        if not x or not y:
            raise DomainError(f"{path}:{lineno}: blank label")
        pairs.append((x, y))
    xs = tuple(sorted({x for x, _ in pairs}))
    ys = tuple(sorted({y for _, y in pairs}))
    if len(xs) <= 1:
        raise DomainError("r must exceed 1: only one distinct x label")
    if len(ys) <= 1:
        raise DomainError("s must exceed 1: only one distinct y label")
    xi = {lab: i for i, lab in enumerate(xs, 1)}
    yj = {lab: j for j, lab in enumerate(ys, 1)}
    s = len(ys)
    outcomes = [flatten_index(xi[x], yj[y], s) for x, y in pairs]
    return SampleSet.from_outcomes(outcomes, len(xs), s), LabelMapping(xs, ys)


def write_pairs_csv(path, samples: SampleSet, mapping: LabelMapping, header: bool = True) -> None:
    """Render each outcome of ``samples`` as a labeled row."""
    if samples.outcomes is None:
        raise DomainError("sample has no individual outcomes to write")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(["x", "y"])
        for k in samples.outcomes:
            i, j = unflatten_index(int(k), samples.s)
            w.writerow([mapping.x_labels[i - 1], mapping.y_labels[j - 1]])


def default_mapping(r: int, s: int) -> LabelMapping:
    return LabelMapping(tuple(f"x{i}" for i in range(1, r + 1)), tuple(f"y{j}" for j in range(1, s + 1)))


def pmf_from_document(doc: dict, mode: Mode | str = Mode.STRICT) -> JointPmf:
    try:
        return validate(doc["probs"], int(doc["r"]), int(doc["s"]), mode)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed pmf document ({exc})") from None


def load_pmf(path, mode: Mode | str = Mode.STRICT) -> JointPmf:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from None
    return pmf_from_document(doc, mode)


def dump_pmf(pmf: JointPmf, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(pmf.to_dict(), fh)
        fh.write("\n")


def _sample_sizes(spec) -> tuple[int, ...]:
    if isinstance(spec, dict):
        return tuple(range(int(spec["start"]), int(spec["stop"]) + 1, int(spec.get("step", 1))))
    return tuple(int(n) for n in spec)


def config_from_document(doc: dict, seed: int | None = None) -> CampaignConfig:
    """Build a campaign config; ``truth`` is ``{"pmf": {...}}`` or
    ``{"zipf": {"beta": .., "m": ..}, "r": .., "s": ..}``."""
    try:
        truth = doc["truth"]
        if "pmf" in truth:
            pmf = pmf_from_document(truth["pmf"])
        else:
            z = truth["zipf"]
            spec = ZipfSpec(float(z["beta"]), int(z["m"]))
            r, s = int(truth["r"]), int(truth["s"])
            if r * s != spec.m:
                raise DomainError(f"r*s={r * s} does not factor m={spec.m}")
            pmf = validate(zipf_pmf(spec), r, s)
        return CampaignConfig(
            truth=pmf,
            family=doc.get("family", "shannon"),
            alpha=doc.get("alpha"),
            direction=doc.get("direction", "yx"),
            sample_sizes=_sample_sizes(doc["sample_sizes"]),
            trials=int(doc.get("trials", 1)),
            seed=int(doc["seed"] if seed is None else seed),
            variance_source=doc.get("variance_source", "delta-oracle"),
            workers=int(doc.get("workers", 1)),
        )
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed campaign config ({exc!r})") from None


def fmt_float(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


TRACE_COLUMNS = ("n", "trial", "estimate", "error", "a_z", "a_x", "a_y", "standardized", "failure")


def write_trace_csv(trace: SimulationTrace, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for rec in trace.records:
            w.writerow([rec.n, rec.trial, fmt_float(rec.estimate), fmt_float(rec.error),
                        fmt_float(rec.a_z), fmt_float(rec.a_x), fmt_float(rec.a_y),
                        fmt_float(rec.standardized), rec.failure or ""])


def write_qq_csv(pairs, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["empirical", "normal"])
        for a, b in pairs:
            w.writerow([fmt_float(a), fmt_float(b)])


def write_histogram_csv(hist, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["left", "right", "count"])
        if hist is not None:
            edges, counts = hist
            for left, right, c in zip(edges, edges[1:], counts):
                w.writerow([fmt_float(left), fmt_float(right), c])


def _clean(obj):
    """JSON-safe copy: NaN/inf become null, numpy scalars become Python."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def dumps(obj) -> str:
    # repr-based float output is the shortest string that round-trips exactly
    return json.dumps(_clean(obj), indent=2, allow_nan=False)
