"""Per-feature standardization as an encode/decode function pair."""

from __future__ import annotations

import numpy as np

from .dataset import DataError, Dataset
from .functions import (
    KIND_DESTANDARDIZE,
    KIND_STANDARDIZE,
    FunctionValue,
    Signature,
)

# Constant columns get their std floored instead of raising: constant features
# are plausible in simulation exports (e.g. pinned mesh nodes).
STD_FLOOR = 1e-12


def fit_standardizer(data: Dataset, name: str = "") -> tuple[FunctionValue, FunctionValue]:
    """Learn (encode, decode): encode centers and scales, decode inverts it.

    Uses population (1/n) standard deviation. decode(encode(x)) recovers x to
    within 1e-10 elementwise for finite inputs.
    """
    if data.n_samples < 2:
        raise DataError(f"standardizer needs at least 2 samples, got {data.n_samples}")
    means = data.rows.mean(axis=0)
    stds = np.sqrt(np.mean((data.rows - means) ** 2, axis=0))
    stds = np.maximum(stds, STD_FLOOR)
    d = data.n_features
    base = name or f"std[{data.name}]"
    encode = FunctionValue(
        kind=KIND_STANDARDIZE,
        params={"means": means, "stds": stds},
        signature=Signature(d_in=d, d_out=d),
        name=base,
    )
    decode = FunctionValue(
        kind=KIND_DESTANDARDIZE,
        params={"means": means.copy(), "stds": stds.copy()},
        signature=Signature(d_in=d, d_out=d),
        name=f"{base}^-1",
    )
    return encode, decode
