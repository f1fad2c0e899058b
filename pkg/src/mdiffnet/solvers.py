"""A picklable solver handle used by the sweeps and the CLI."""

from dataclasses import dataclass, field, replace

from . import admm, pgd

__all__ = ["Solver", "make_solver", "run_many"]


@dataclass(frozen=True)
class Solver:
    """Bind a solver kind, attribute count and config; call with ``(Sx, Sy, lam)``."""

    m: int
    kind: str = "admm"
    config: object = field(default=None)

    def __post_init__(self):
        if self.kind not in ("admm", "pgd"):
            raise ValueError(f"solver must be 'admm' or 'pgd', got {self.kind!r}")
        if self.config is None:
            cfg = admm.AdmmConfig() if self.kind == "admm" else pgd.PgdConfig()
            object.__setattr__(self, "config", cfg)

    @property
    def mode(self):
        return self.config.mode

    def __call__(self, sigma_x, sigma_y, lam):
        module = admm if self.kind == "admm" else pgd
        return module.solve(sigma_x, sigma_y, lam, self.m, self.config)

    def with_mode(self, mode):
        return replace(self, config=replace(self.config, mode=mode))


def make_solver(m, kind="admm", mode="ma", **options):
    """Build a :class:`Solver`; ``options`` go to the config dataclass."""
    if kind == "admm":
        cfg = admm.AdmmConfig(mode=mode, **options)
    elif kind == "pgd":
        cfg = pgd.PgdConfig(mode=mode, **options)
    else:
        raise ValueError(f"solver must be 'admm' or 'pgd', got {kind!r}")
    return Solver(m=m, kind=kind, config=cfg)


def _call(args):
    solver, sigma_x, sigma_y, lam = args
    return solver(sigma_x, sigma_y, lam)


def run_many(solver, sigma_x, sigma_y, lambdas, jobs=1):
    """Solve at every penalty in ``lambdas``; results keep the input order.

    With ``jobs > 1`` the solves run in a process pool.
    """
    tasks = [(solver, sigma_x, sigma_y, float(lam)) for lam in lambdas]
    if jobs is None or jobs <= 1 or len(tasks) <= 1:
        return [_call(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_call, tasks))
