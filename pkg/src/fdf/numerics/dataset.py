"""Named 2-D numeric tables and their CSV interchange form.

CSV files have one header row of feature labels and one sample per data row.
Values are written with shortest round-trip precision (`repr`), so writing and
re-reading a dataset reproduces every float bit-for-bit.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class DataError(ValueError):
    pass


@dataclass(eq=False)
class Dataset:
    name: str
    features: list[str]
    rows: np.ndarray  # (n_samples, n_features) float64

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2:
            raise DataError(f"dataset {self.name!r} must be 2-D, got shape {self.rows.shape}")
        if self.rows.shape[0] < 1:
            raise DataError(f"dataset {self.name!r} must have at least one sample")
        if len(self.features) != self.rows.shape[1]:
            raise DataError(
                f"dataset {self.name!r} has {self.rows.shape[1]} columns but {len(self.features)} feature labels"
            )
        if not np.isfinite(self.rows).all():
            raise DataError(f"dataset {self.name!r} contains NaN or infinite values")

    @property
    def n_samples(self) -> int:
        return self.rows.shape[0]

    @property
    def n_features(self) -> int:
        return self.rows.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.features == other.features
            and self.rows.shape == other.rows.shape
            and np.array_equal(self.rows, other.rows)
        )


def dataset_to_csv(ds: Dataset) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ds.features)
    for row in ds.rows:
        writer.writerow([repr(float(v)) for v in row])
    return out.getvalue()


def save_csv(ds: Dataset, path: str | Path) -> None:
    Path(path).write_text(dataset_to_csv(ds), encoding="utf-8")


def dataset_from_csv(text: str, name: str) -> Dataset:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"dataset {name!r}: empty CSV") from None
    features = [h.strip() for h in header]
    rows = []
    for lineno, raw in enumerate(reader, start=2):
        if not raw:
            continue
        if len(raw) != len(features):
            raise DataError(f"dataset {name!r}: row at line {lineno} has {len(raw)} values, expected {len(features)}")
        try:
            rows.append([float(v) for v in raw])
        except ValueError as exc:
            raise DataError(f"dataset {name!r}: non-numeric value at line {lineno}: {exc}") from None
    if not rows:
        raise DataError(f"dataset {name!r}: no data rows")
    return Dataset(name=name, features=features, rows=np.array(rows, dtype=np.float64))


def load_csv(path: str | Path, name: str | None = None) -> Dataset:
    path = Path(path)
    if name is None:
        name = path.name.removesuffix(".csv")
    return dataset_from_csv(path.read_text(encoding="utf-8"), name)
