"""Variational maximisation of the expected measure.

The optimiser is a plain Nelder-Mead simplex run from several random starts.
Every objective evaluation also produces a measurement record (``n_samples``
Born-rule draws from the evolved state, see :class:`SamplePlan`), and the
best bitstring seen in any record across the whole run is the reported
solution. In ``"exact"`` mode the value fed to the simplex is the exact
expectation; in ``"sampled"`` mode it is the mean of the record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .estimate import SamplePlan, estimate_from_probabilities
from .evolve import Params, make_evolver
from .problem import DEFAULT_MAX_BITS, NpoInstance, Tables, build_tables

__all__ = [
    "OptimizerConfig",
    "RunResult",
    "nelder_mead",
    "maximize_f",
    "level_nesting_check",
    "nesting_values",
]


@dataclass(frozen=True)
class OptimizerConfig:
    p: int = 2
    restarts: int = 20
    max_iters: int = 200
    xtol: float = 1e-6
    ftol: float = 1e-10
    beta_window: tuple = (0.0, math.pi)
    mode: str = "exact"
    seed: int = 0
    epsilon: float = 0.1
    z: float = 1.96
    simplex_step: float = 0.25
    engine: str = "auto"
    max_bits: int = DEFAULT_MAX_BITS

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        lo, hi = self.beta_window
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"beta_window must be a finite nonempty interval, got {self.beta_window}")
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"mode must be 'exact' or 'sampled', got {self.mode!r}")


@dataclass
class RunResult:
    best_params: Params
    best_f: float
    best_x: int
    best_c: int
    restart_index: int
    trace: list = field(default_factory=list)
    restart_values: list = field(default_factory=list)
    n_evaluations: int = 0
    best_f_exact: float = float("nan")


def nelder_mead(objective, x0, *, step=0.25, xtol=1e-6, ftol=1e-10, max_iters=200, callback=None):
    """Maximise ``objective`` over R^d from ``x0``.

    The initial simplex is ``x0`` plus ``step`` along each axis (``step`` may
    be a scalar or one value per axis). Reflection, expansion, contraction and
    shrink use coefficients 1, 2, 1/2 and 1/2. Stops once the simplex fits in
    an ``xtol`` box around its best vertex, the vertex values span less than
    ``ftol``, or after ``max_iters`` iterations. ``callback(iteration, f_best)``
    is called after each iteration.

    Returns ``(x_best, f_best)``; ``f_best`` is never below ``objective(x0)``.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    d = x0.size
    steps = np.broadcast_to(np.asarray(step, dtype=float), (d,))
    simplex = np.vstack([x0] + [x0 + steps[i] * np.eye(d)[i] for i in range(d)])
    values = np.array([objective(v) for v in simplex])

    for it in range(max_iters + 1):
        order = np.argsort(-values, kind="stable")
        simplex, values = simplex[order], values[order]
        if callback is not None:
            callback(it, float(values[0]))
        diameter = np.max(np.abs(simplex[1:] - simplex[0]))
        if diameter < xtol or values[0] - values[-1] < ftol or it == max_iters:
            break

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + (centroid - worst)
        fr = objective(xr)
        if fr > values[0]:
            xe = centroid + 2.0 * (xr - centroid)
            fe = objective(xe)
            simplex[-1], values[-1] = (xe, fe) if fe > fr else (xr, fr)
            continue
        if fr > values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr > values[-1]:
            xc = centroid + 0.5 * (xr - centroid)
            fc = objective(xc)
            if fc >= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = centroid + 0.5 * (worst - centroid)
            fc = objective(xc)
            if fc > values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        for i in range(1, d + 1):
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            values[i] = objective(simplex[i])

    return simplex[0].copy(), float(values[0])


class _Objective:
    """Params vector -> expectation, keeping the measurement record's best."""

    def __init__(self, evolver, p, plan, mode, rng):
        self.evolver = evolver
        self.p = p
        self.plan = plan
        self.mode = mode
        self.rng = rng
        self.measures = evolver.support_measure.astype(float)
        self.best_x = None
        self.best_c = -1
        self.n_evaluations = 0

    def probabilities(self, vec):
        amps = self.evolver.amplitudes(Params.from_vector(vec, self.p))
        return np.abs(amps) ** 2

    def __call__(self, vec):
        self.n_evaluations += 1
        probs = self.probabilities(vec)
        record = estimate_from_probabilities(
            probs, self.evolver.support, self.evolver.support_measure, self.plan.n_samples, self.rng
        )
        if record.best_c > self.best_c:
            self.best_c, self.best_x = record.best_c, record.best_x
        if self.mode == "sampled":
            return record.f_estimate
        return float(probs @ self.measures)


def _random_start(config: OptimizerConfig, rng) -> Params:
    lo, hi = config.beta_window
    betas = rng.uniform(lo, hi, size=config.p)
    gammas = rng.uniform(0.0, 2.0 * math.pi, size=config.p - 1)
    return Params(tuple(betas), tuple(gammas))


def maximize_f(
    instance: NpoInstance,
    config: OptimizerConfig = OptimizerConfig(),
    *,
    tables: Tables | None = None,
    starts: list | None = None,
    evolver=None,
) -> RunResult:
    """Multi-start Nelder-Mead over the ``2p - 1`` angles.

    ``starts`` replaces the random start points (one restart per entry).
    Restart ``r`` draws its start and its measurement records from the
    ``r``-th child of ``SeedSequence(config.seed)``, so results depend only
    on the instance and the config.
    """
    if tables is None:
        tables = build_tables(instance, config.max_bits)
    if evolver is None:
        evolver = make_evolver(instance, tables, config.engine)
    plan = SamplePlan(instance.measure_max, config.epsilon, config.z)
    n_runs = len(starts) if starts is not None else config.restarts
    streams = np.random.SeedSequence(config.seed).spawn(n_runs)

    best = None
    best_x, best_c = None, -1
    trace = []
    restart_values = []
    n_evals = 0
    running = -math.inf
    for r, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        start = starts[r] if starts is not None else _random_start(config, rng)
        if start.p != config.p:
            raise ValueError(f"start point has level {start.p}, config has level {config.p}")
        objective = _Objective(evolver, config.p, plan, config.mode, rng)

        def record(it, f_best):
            trace.append((len(trace), max(running, f_best)))

        x, f = nelder_mead(
            objective,
            start.to_vector(),
            step=config.simplex_step,
            xtol=config.xtol,
            ftol=config.ftol,
            max_iters=config.max_iters,
            callback=record,
        )
        restart_values.append(f)
        n_evals += objective.n_evaluations
        if best is None or f > best[1]:
            best = (Params.from_vector(x, config.p), f, r)
        running = max(running, f)
        if objective.best_c > best_c:
            best_x, best_c = objective.best_x, objective.best_c

    params, f, r = best
    probs = np.abs(evolver.amplitudes(params)) ** 2
    return RunResult(
        best_params=params,
        best_f=f,
        best_x=best_x,
        best_c=best_c,
        restart_index=r,
        trace=trace,
        restart_values=restart_values,
        n_evaluations=n_evals,
        best_f_exact=float(probs @ evolver.support_measure),
    )


def nesting_values(instance: NpoInstance, p: int, seed: int = 0, config: OptimizerConfig | None = None,
                   extra_restarts: int = 0):
    """Best value at level ``p - 1`` and at level ``p``.

    The level-p run starts from the level-(p-1) winner padded with a zero
    phase and a zero-time walk, which reproduces the lower level's value.
    That point is stationary (with no walk after it the phase has no
    effect), so the simplex can stall there; ``extra_restarts`` adds that
    many random starts at level p.
    """
    if p < 2:
        raise ValueError("nesting needs p >= 2")
    base = config or OptimizerConfig()
    lower_cfg = OptimizerConfig(**{**base.__dict__, "p": p - 1, "seed": seed})
    upper_cfg = OptimizerConfig(**{**base.__dict__, "p": p, "seed": seed})
    tables = build_tables(instance, base.max_bits)
    evolver = make_evolver(instance, tables, base.engine)
    lower = maximize_f(instance, lower_cfg, tables=tables, evolver=evolver)
    starts = [lower.best_params.extended()]
    rng = np.random.default_rng([seed, p])
    starts += [_random_start(upper_cfg, rng) for _ in range(extra_restarts)]
    upper = maximize_f(instance, upper_cfg, tables=tables, evolver=evolver, starts=starts)
    return lower.best_f, upper.best_f


def level_nesting_check(instance: NpoInstance, p: int, seed: int = 0, config: OptimizerConfig | None = None,
                        extra_restarts: int = 0) -> bool:
    """Whether level ``p`` reaches at least the level ``p - 1`` optimum."""
    lower, upper = nesting_values(instance, p, seed, config, extra_restarts)
    return upper >= lower - 1e-9
