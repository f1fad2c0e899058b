"""Preprocessing of real multi-attribute time series.

Per feature (node): optional affine unit map, zero flooring, log-ratio
differencing, linear detrending and scaling to unit mean square.  The
feature matrices are then stacked node-major into a dataset.  Missing
values are not handled; inputs must be complete.
"""

import numpy as np
import scipy.signal

from .covariance import MultiAttributeDataset
from .exceptions import DegenerateInputError, DomainError

__all__ = [
    "apply_floor",
    "log_ratio",
    "detrend_linear",
    "scale_unit_ms",
    "preprocess_feature",
    "assemble",
]

DEFAULT_FLOOR = 1e-6


def _as_2d(values):
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.ndim != 2:
        raise ValueError(f"expected a T x m array, got shape {values.shape}")
    return values


def apply_floor(values, floor=DEFAULT_FLOOR):
    """Add ``floor`` to entries that are exactly zero."""
    values = _as_2d(values).copy()
    values[values == 0.0] += floor
    return values


def log_ratio(values):
    """Row ``t`` of the output is ``ln(values[t + 1] / values[t])``.

    Raises :class:`DomainError` naming the first nonpositive entry.
    """
    values = _as_2d(values)
    bad = np.argwhere(~(values > 0))
    if bad.size:
        t, r = bad[0]
        raise DomainError(f"nonpositive value {values[t, r]!r} at row {t}, column {r}")
    logs = np.log(values)
    return logs[1:] - logs[:-1]


def detrend_linear(values):
    """Remove the least-squares line ``a + b t`` from every column."""
    values = _as_2d(values)
    if values.shape[0] < 2:
        raise ValueError("detrending needs at least 2 time steps")
    return scipy.signal.detrend(values, axis=0, type="linear")


def scale_unit_ms(values):
    """Divide every column by its root mean square."""
    values = _as_2d(values)
    rms = np.sqrt(np.mean(values ** 2, axis=0))
    zero = np.flatnonzero(rms == 0)
    if zero.size:
        raise DegenerateInputError(f"column {zero[0]} is identically zero; cannot scale")
    return values / rms


def preprocess_feature(values, name="feature", scale=1.0, offset=0.0, floor=DEFAULT_FLOOR):
    """Run the full chain on one feature; errors are prefixed with ``name``.

    ``scale`` and ``offset`` apply ``v -> scale * v + offset`` first, e.g.
    ``offset=273.15`` for Celsius to Kelvin.
    """
    values = _as_2d(values) * scale + offset
    try:
        z = log_ratio(apply_floor(values, floor))
    except DomainError as exc:
        raise DomainError(f"feature {name!r}, log-ratio step: {exc}") from None
    z = detrend_linear(z)
    try:
        return scale_unit_ms(z)
    except DegenerateInputError as exc:
        raise DegenerateInputError(f"feature {name!r}, scaling step: {exc}") from None


def assemble(features):
    """Stack per-node ``T x m`` matrices into a node-major dataset."""
    mats = [_as_2d(f) for f in features]
    if not mats:
        raise ValueError("need at least one feature")
    shape = mats[0].shape
    for i, mat in enumerate(mats):
        if mat.shape != shape:
            raise ValueError(f"feature {i} has shape {mat.shape}, expected {shape}")
    return MultiAttributeDataset(np.hstack(mats), shape[1])
