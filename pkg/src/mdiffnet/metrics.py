"""Support-recovery scores and ROC sweeps over the penalty."""

from dataclasses import dataclass

import numpy as np

from .solvers import run_many

__all__ = ["Confusion", "RocPoint", "confusion", "f1", "roc_sweep", "roc_auc"]


@dataclass(frozen=True)
class Confusion:
    """Counts over the ``p(p-1)/2`` unordered node pairs."""

    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def tpr(self):
        pos = self.tp + self.fn
        return self.tp / pos if pos else 0.0

    @property
    def tnr(self):
        neg = self.tn + self.fp
        return self.tn / neg if neg else 1.0

    @property
    def fpr(self):
        return 1.0 - self.tnr

    @property
    def f1(self):
        return f1(self)


@dataclass(frozen=True)
class RocPoint:
    lam: float
    tpr: float
    fpr: float
    f1: float


def confusion(est, truth, p):
    """Compare an estimated edge set against the true one."""
    est = {tuple(sorted(e)) for e in est}
    truth = {tuple(sorted(e)) for e in truth}
    for k, l in est | truth:
        if not (0 <= k < l < p):
            raise ValueError(f"edge {(k, l)} is not a pair of distinct nodes in [0, {p})")
    tp = len(est & truth)
    fp = len(est - truth)
    fn = len(truth - est)
    tn = p * (p - 1) // 2 - tp - fp - fn
    return Confusion(tp=tp, fp=fp, tn=tn, fn=fn)


def f1(c):
    """``2 tp / (2 tp + fp + fn)``, or 0 when the denominator vanishes."""
    denom = 2 * c.tp + c.fp + c.fn
    return 2 * c.tp / denom if denom else 0.0


def roc_sweep(sigma_x, sigma_y, truth, lambdas, solver, jobs=1):
    """One solve and one ROC point per penalty, ordered by decreasing penalty.

    Duplicate penalties are kept and give identical points.
    """
    lambdas = [float(v) for v in lambdas]
    if not lambdas:
        raise ValueError("need at least one penalty value")
    if min(lambdas) <= 0:
        raise ValueError("penalties must be positive")
    lambdas = sorted(lambdas, reverse=True)
    p = np.asarray(sigma_x).shape[0] // solver.m
    points = []
    for lam, res in zip(lambdas, run_many(solver, sigma_x, sigma_y, lambdas, jobs=jobs)):
        c = confusion(res.edges, truth, p)
        points.append(RocPoint(lam=lam, tpr=c.tpr, fpr=c.fpr, f1=c.f1))
    return points


def roc_auc(points):
    """Trapezoidal area under (fpr, tpr), anchored at (0, 0) and (1, 1)."""
    xy = sorted({(0.0, 0.0), (1.0, 1.0)} | {(pt.fpr, pt.tpr) for pt in points})
    xs = np.array([x for x, _ in xy])
    ys = np.array([y for _, y in xy])
    return float(np.sum(np.diff(xs) * (ys[1:] + ys[:-1]) / 2.0))
