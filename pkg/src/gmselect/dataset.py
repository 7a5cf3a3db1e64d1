"""Longitudinal dataset container and long-format CSV ingestion/emission.

Data are held as a complete S x N grid of outcomes plus, per time point, an
S x p_n block of covariates.  Time values from the source file are ranked to
indices 0..N-1; the original values are kept as metadata only.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateCell,
    EmptySubset,
    IoFailure,
    MissingCell,
    NonNumericValue,
)


@dataclass(frozen=True)
class TimepointSet:
    """An ordered set of time-point indices (strictly increasing)."""

    indices: tuple[int, ...]

    def __init__(self, indices) -> None:
        idx = tuple(sorted(int(i) for i in indices))
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate time-point indices: {idx}")
        if idx and idx[0] < 0:
            raise ValueError(f"negative time-point index: {idx[0]}")
        object.__setattr__(self, "indices", idx)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, i) -> bool:
        return int(i) in self.indices

    @property
    def empty(self) -> bool:
        return not self.indices

    def without(self, i: int) -> "TimepointSet":
        if i not in self.indices:
            raise ValueError(f"index {i} not in set {self.indices}")
        return TimepointSet(j for j in self.indices if j != i)

    def union(self, other: "TimepointSet") -> "TimepointSet":
        return TimepointSet(set(self.indices) | set(other.indices))


@dataclass(frozen=True)
class LongitudinalDataset:
    """Complete-case repeated-measures data: S subjects at N shared time points.

    outcomes is S x N.  covariates[n] is S x p_n (p_n may be 0, meaning no
    covariates at that time point).  Arrays are frozen after validation so
    datasets can be shared across workers without copying.
    """

    outcomes: np.ndarray
    covariates: tuple[np.ndarray, ...]
    subject_ids: tuple[str, ...]
    time_values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        y = np.asarray(self.outcomes, dtype=float)
        if y.ndim != 2:
            raise ValueError("outcomes must be a 2-d array (subjects x time points)")
        s, n = y.shape
        if y.size and not np.all(np.isfinite(y)):
            raise ValueError("outcomes contain non-finite values (complete cases only)")
        covs = tuple(np.asarray(x, dtype=float) for x in self.covariates)
        if len(covs) != n:
            raise ValueError(f"expected {n} covariate blocks, got {len(covs)}")
        for j, x in enumerate(covs):
            if x.ndim != 2 or x.shape[0] != s:
                raise ValueError(f"covariate block {j} must be {s} x p, got {x.shape}")
            if x.size and not np.all(np.isfinite(x)):
                raise ValueError(f"covariate block {j} contains non-finite values")
        ids = tuple(str(i) for i in self.subject_ids)
        if len(ids) != s:
            raise ValueError(f"expected {s} subject ids, got {len(ids)}")
        if len(set(ids)) != len(ids):
            raise ValueError("subject ids must be unique")
        tv = tuple(float(t) for t in self.time_values) if self.time_values else tuple(
            float(j) for j in range(n)
        )
        if len(tv) != n:
            raise ValueError(f"expected {n} time values, got {len(tv)}")
        y = y.copy()
        y.setflags(write=False)
        covs = tuple(x.copy() for x in covs)
        for x in covs:
            x.setflags(write=False)
        object.__setattr__(self, "outcomes", y)
        object.__setattr__(self, "covariates", covs)
        object.__setattr__(self, "subject_ids", ids)
        object.__setattr__(self, "time_values", tv)

    @property
    def n_subjects(self) -> int:
        return self.outcomes.shape[0]

    @property
    def n_timepoints(self) -> int:
        return self.outcomes.shape[1]

    @property
    def covariate_counts(self) -> tuple[int, ...]:
        return tuple(x.shape[1] for x in self.covariates)

    def all_timepoints(self) -> TimepointSet:
        return TimepointSet(range(self.n_timepoints))

    def design(self, n: int, use_covariates: bool = True) -> np.ndarray:
        """S x (p_n + 1) design matrix for time point n, intercept first.

        With use_covariates=False the design is the intercept column alone,
        reducing each per-time-point regression to a plain mean/variance model.
        """
        s = self.n_subjects
        ones = np.ones((s, 1))
        if not use_covariates or self.covariates[n].shape[1] == 0:
            return ones
        return np.hstack([ones, self.covariates[n]])

    def validate_subset(self, subset: TimepointSet) -> None:
        if subset.empty:
            raise EmptySubset("time-point subset is empty")
        if subset.indices and subset.indices[-1] >= self.n_timepoints:
            raise ValueError(
                f"subset {subset.indices} exceeds {self.n_timepoints} time points"
            )


@dataclass(frozen=True)
class CsvSchema:
    """Column-name mapping for long-format CSV files.

    If covariates is None, columns named x1, x2, ... are picked up in numeric
    order; pass an explicit list to choose other columns.
    """

    subject: str = "subject"
    time: str = "time"
    outcome: str = "y"
    covariates: tuple[str, ...] | None = None


def _parse_number(raw: str, where: str) -> float:
    try:
        v = float(raw)
    except (TypeError, ValueError):
        raise NonNumericValue(f"non-numeric value {raw!r} at {where}") from None
    if not np.isfinite(v):
        raise NonNumericValue(f"non-finite value {raw!r} at {where}")
    return v


def _covariate_columns(header: list[str], schema: CsvSchema) -> list[str]:
    if schema.covariates is not None:
        missing = [c for c in schema.covariates if c not in header]
        if missing:
            raise IoFailure(f"covariate columns not in file: {missing}")
        return list(schema.covariates)
    found = []
    for name in header:
        if name.startswith("x") and name[1:].isdigit():
            found.append((int(name[1:]), name))
    return [name for _, name in sorted(found)]


def parse_long_csv(path, schema: CsvSchema | None = None) -> LongitudinalDataset:
    """Read a long-format CSV (one row per subject x time point).

    Every subject must appear at every time point exactly once; any hole in
    the grid raises MissingCell so no partial dataset escapes.
    """
    schema = schema or CsvSchema()
    try:
        fh = open(path, "r", newline="", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (schema.subject, schema.time, schema.outcome):
            if col not in header:
                raise IoFailure(f"required column {col!r} missing from {path}")
        cov_cols = _covariate_columns(header, schema)
        subjects: list[str] = []
        seen: set[str] = set()
        cells: dict[tuple[str, float], tuple[float, list[float]]] = {}
        times: set[float] = set()
        for lineno, row in enumerate(reader, start=2):
            sid = row[schema.subject]
            t = _parse_number(row[schema.time], f"line {lineno}, column {schema.time}")
            y = _parse_number(row[schema.outcome], f"line {lineno}, column {schema.outcome}")
            xs = [
                _parse_number(row[c], f"line {lineno}, column {c}") for c in cov_cols
            ]
            if (sid, t) in cells:
                raise DuplicateCell(f"duplicate cell subject={sid!r} time={t}")
            if sid not in seen:
                seen.add(sid)
                subjects.append(sid)
            cells[(sid, t)] = (y, xs)
            times.add(t)

    time_order = sorted(times)
    n = len(time_order)
    s = len(subjects)
    outcomes = np.zeros((s, n))
    covs = [np.zeros((s, len(cov_cols))) for _ in range(n)]
    for i, sid in enumerate(subjects):
        for j, t in enumerate(time_order):
            if (sid, t) not in cells:
                raise MissingCell(f"subject {sid!r} has no row at time {t}")
            y, xs = cells[(sid, t)]
            outcomes[i, j] = y
            if cov_cols:
                covs[j][i, :] = xs
    return LongitudinalDataset(
        outcomes=outcomes,
        covariates=tuple(covs),
        subject_ids=tuple(subjects),
        time_values=tuple(time_order),
    )


def write_long_csv(dataset: LongitudinalDataset, path) -> None:
    """Emit the dataset in the same long layout parse_long_csv reads.

    Floats are written with repr, so parse(write(d)) reproduces d exactly.
    """
    p = max(dataset.covariate_counts, default=0)
    counts = set(dataset.covariate_counts)
    if len(counts) > 1:
        raise IoFailure(
            "long CSV requires a common covariate count across time points; "
            f"got {sorted(counts)}"
        )
    header = ["subject", "time", "y"] + [f"x{j + 1}" for j in range(p)]
    try:
        fh = open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, sid in enumerate(dataset.subject_ids):
            for j, t in enumerate(dataset.time_values):
                row = [sid, repr(float(t)), repr(float(dataset.outcomes[i, j]))]
                row += [repr(float(v)) for v in dataset.covariates[j][i, :]]
                writer.writerow(row)
