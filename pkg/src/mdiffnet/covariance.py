"""Multi-attribute datasets and their sample covariances."""

from dataclasses import dataclass

import numpy as np

from .blockmat import symmetrize

__all__ = ["MultiAttributeDataset", "sample_covariance"]


@dataclass(frozen=True)
class MultiAttributeDataset:
    """``n`` observations of ``p`` nodes with ``m`` attributes each.

    Columns are node-major: column ``i*m + r`` holds attribute ``r`` of
    node ``i``.
    """

    samples: np.ndarray
    m: int

    def __post_init__(self):
        X = np.asarray(self.samples, dtype=float)
        if X.ndim != 2:
            raise ValueError(f"samples must be 2-D, got shape {X.shape}")
        if X.shape[0] < 1:
            raise ValueError("a dataset needs at least one sample")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        if X.shape[1] == 0 or X.shape[1] % self.m:
            raise ValueError(
                f"column count {X.shape[1]} is not a positive multiple of m={self.m}")
        object.__setattr__(self, "samples", X)

    @property
    def n(self):
        return self.samples.shape[0]

    @property
    def p(self):
        return self.samples.shape[1] // self.m

    def column_names(self):
        return [f"n{i + 1}_a{r + 1}" for i in range(self.p) for r in range(self.m)]


def sample_covariance(data):
    """Uncentered sample covariance ``(1/n) sum_t x(t) x(t)^T``.

    Accepts a :class:`MultiAttributeDataset` or a raw ``n x d`` array.  No
    mean is subtracted and no Bessel correction is applied.  The result is
    symmetrized so that it is exactly symmetric.
    """
    X = data.samples if isinstance(data, MultiAttributeDataset) else np.asarray(data, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"samples must be 2-D, got shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError("cannot form a sample covariance from zero samples")
    return symmetrize(X.T @ X / X.shape[0])
