"""Statevector simulation of the constrained alternating walk/phase evolution.

The evolved state is

    |beta, gamma> = W(beta_p) P(gamma_{p-1}) ... P(gamma_1) W(beta_1) |s>

with ``P(gamma) = exp(-i gamma C)`` diagonal in the measure and
``W(beta) = exp(-i beta B)`` a continuous-time quantum walk on the hypercube
with edges touching infeasible states removed. ``B`` is never stored: its
action is computed from the feasibility table one bit at a time and the walk
is propagated with a Lanczos approximation of the matrix exponential.

Two engines implement the same evolution for the optimiser:

* :class:`KrylovEvolver` keeps the dense ``2**n`` amplitude vector.
* :class:`SubspaceEvolver` restricts ``B`` to the feasible states and
  diagonalises it once, which is much faster while the feasible set is small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .exceptions import KrylovConvergenceError
from .problem import NpoInstance, Tables, popcount

__all__ = [
    "StateVector",
    "Params",
    "basis_state",
    "apply_phase",
    "ConstrainedMixer",
    "mixer_matvec",
    "mixer_matrix",
    "expm_apply",
    "evolve",
    "KrylovEvolver",
    "SubspaceEvolver",
    "make_evolver",
    "MIXER_VARIANTS",
]

TWO_PI = 2.0 * math.pi
MIXER_VARIANTS = ("feasible", "equal_validity")


@dataclass(frozen=True, eq=False)
class StateVector:
    """``2**n_bits`` complex amplitudes indexed by bitstring. Read-only."""

    n_bits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n_bits,):
            raise ValueError(f"expected {1 << self.n_bits} amplitudes, got shape {amps.shape}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def support(self, atol: float = 0.0) -> np.ndarray:
        return np.flatnonzero(np.abs(self.amplitudes) > atol)


@dataclass(frozen=True)
class Params:
    """Walk times ``betas`` (length p) and phase angles ``gammas`` (length p - 1).

    Gammas are reduced into ``[0, 2 pi)`` on construction.
    """

    betas: tuple
    gammas: tuple = ()

    def __post_init__(self):
        betas = tuple(float(b) for b in np.atleast_1d(self.betas))
        gammas = tuple(float(g) % TWO_PI for g in np.atleast_1d(self.gammas))
        if len(betas) < 1:
            raise ValueError("need at least one walk time")
        if len(gammas) != len(betas) - 1:
            raise ValueError(f"p={len(betas)} walks need {len(betas) - 1} phases, got {len(gammas)}")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "gammas", gammas)

    @property
    def p(self) -> int:
        return len(self.betas)

    def to_vector(self) -> np.ndarray:
        return np.array(self.betas + self.gammas)

    @classmethod
    def from_vector(cls, v, p: int) -> "Params":
        v = np.asarray(v, dtype=float)
        if v.size != 2 * p - 1:
            raise ValueError(f"level {p} needs {2 * p - 1} parameters, got {v.size}")
        return cls(tuple(v[:p]), tuple(v[p:]))

    def extended(self) -> "Params":
        """Same state at level p + 1: a zero phase then a zero-time walk."""
        return Params(self.betas + (0.0,), self.gammas + (0.0,))


def basis_state(n_bits: int, x: int) -> StateVector:
    if not 0 <= x < (1 << n_bits):
        raise IndexError(f"basis index {x} out of range for {n_bits} bits")
    amps = np.zeros(1 << n_bits, dtype=np.complex128)
    amps[x] = 1.0
    return StateVector(n_bits, amps)


def apply_phase(state: StateVector, gamma: float, measure_table) -> StateVector:
    """Multiply each amplitude by ``exp(-i gamma c(x))``."""
    phases = np.exp(-1j * gamma * np.asarray(measure_table, dtype=float))
    return StateVector(state.n_bits, state.amplitudes * phases)


def _flip_bit(vec: np.ndarray, bit: int) -> np.ndarray:
    """``out[x] = vec[x ^ (1 << bit)]`` without fancy indexing."""
    half = 1 << bit
    return vec.reshape(-1, 2, half)[:, ::-1, :].reshape(vec.shape)


class ConstrainedMixer:
    """Matrix-free action of the constrained hypercube adjacency operator.

    ``variant="feasible"`` keeps a hypercube edge only when both endpoints
    are feasible. ``variant="equal_validity"`` keeps it whenever the two
    endpoints agree on feasibility, which also leaves the infeasible region
    internally connected. Both act identically on feasible-supported states.
    """

    def __init__(self, validity, variant: str = "feasible"):
        if variant not in MIXER_VARIANTS:
            raise ValueError(f"unknown mixer variant {variant!r}; choose from {MIXER_VARIANTS}")
        validity = np.asarray(validity, dtype=bool)
        self.n_bits = int(validity.size).bit_length() - 1
        if validity.size != 1 << self.n_bits:
            raise ValueError("validity table length must be a power of two")
        self.variant = variant
        self.masks = []
        for i in range(self.n_bits):
            flipped = _flip_bit(validity, i)
            if variant == "feasible":
                self.masks.append(validity & flipped)
            else:
                self.masks.append(validity == flipped)

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(vec.shape, dtype=np.result_type(vec, np.complex128))
        for i, mask in enumerate(self.masks):
            out += np.where(mask, _flip_bit(vec, i), 0)
        return out


def mixer_matvec(state: StateVector, validity_table, variant: str = "feasible") -> np.ndarray:
    """Apply the mixer once. The result is ``B|psi>`` and is not normalised."""
    return ConstrainedMixer(validity_table, variant)(state.amplitudes)


def mixer_matrix(validity_table, variant: str = "feasible") -> np.ndarray:
    """Dense mixer built entry by entry from its definition. Small n only."""
    validity = np.asarray(validity_table, dtype=bool)
    size = validity.size
    if size > 1 << 12:
        raise ValueError("dense mixer construction is limited to 12 bits")
    b = np.zeros((size, size))
    for x in range(size):
        for y in range(size):
            if popcount(x ^ y) != 1:
                continue
            if variant == "feasible":
                keep = validity[x] and validity[y]
            elif variant == "equal_validity":
                keep = validity[x] == validity[y]
            else:
                raise ValueError(f"unknown mixer variant {variant!r}")
            b[x, y] = float(keep)
    return b


def _lanczos_propagate(matvec, v, tau, max_dim, tol):
    """One Krylov step of ``exp(-i tau H) v``.

    Returns ``(result, error_estimate)``, or ``(None, error_estimate)`` if
    ``max_dim`` Lanczos vectors were not enough.
    """
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        return v.copy(), 0.0
    basis = [v / nrm]
    alpha = np.zeros(max_dim)
    beta = np.zeros(max_dim)
    err = np.inf
    for j in range(max_dim):
        w = matvec(basis[j])
        alpha[j] = np.vdot(basis[j], w).real
        w -= alpha[j] * basis[j]
        if j > 0:
            w -= beta[j - 1] * basis[j - 1]
        # full reorthogonalisation; the basis is short
        for b in basis:
            w -= np.vdot(b, w) * b
        beta[j] = np.linalg.norm(w)

        m = j + 1
        if m == 1:
            theta, q = alpha[:1], np.ones((1, 1))
        else:
            theta, q = eigh_tridiagonal(alpha[:m], beta[: m - 1])
        coeffs = q @ (np.exp(-1j * tau * theta) * q[0])
        breakdown = beta[j] <= 1e-12 * max(1.0, abs(alpha[j]))
        err = 0.0 if breakdown else nrm * beta[j] * abs(coeffs[-1])
        if breakdown or err <= tol:
            out = np.zeros_like(v)
            for c, b in zip(coeffs, basis):
                out += c * b
            return nrm * out, err
        basis.append(w / beta[j])
    return None, err


def expm_apply(state, beta: float, matvec, tol: float = 1e-10, max_dim: int = 64, max_splits: int = 30):
    """Compute ``exp(-i beta H) |psi>`` for a real-symmetric operator ``H``.

    ``matvec`` applies ``H`` to a 1-d complex array. The walk time is split
    into substeps, halving the substep whenever ``max_dim`` Lanczos vectors
    do not meet the per-step share of ``tol``. Accepts a :class:`StateVector`
    (returned as one) or a bare array.
    """
    wrap = isinstance(state, StateVector)
    vec = np.array(state.amplitudes if wrap else state, dtype=np.complex128)
    if beta == 0.0:
        return StateVector(state.n_bits, vec) if wrap else vec

    remaining = float(beta)
    step = remaining
    halvings = 0
    while remaining != 0.0:
        if abs(step) > abs(remaining):
            step = remaining
        out, err = _lanczos_propagate(matvec, vec, step, max_dim, tol * abs(step) / abs(beta))
        if out is None:
            halvings += 1
            if halvings > max_splits:
                raise KrylovConvergenceError(
                    f"Lanczos did not converge within {max_dim} vectors after {max_splits} step halvings", err
                )
            step /= 2.0
            continue
        vec = out
        remaining -= step
        if abs(remaining) < 1e-15 * abs(beta):
            remaining = 0.0
    return StateVector(state.n_bits, vec) if wrap else vec


def _check_feasible_support(state: StateVector, tables: Tables):
    bad = np.flatnonzero((state.amplitudes != 0) & ~tables.validity)
    if bad.size:
        raise ValueError(f"initial state has weight on infeasible basis state {int(bad[0])}")


def evolve(
    instance: NpoInstance,
    tables: Tables,
    params: Params,
    initial: StateVector | None = None,
    *,
    variant: str = "feasible",
    tol: float = 1e-10,
    mixer: ConstrainedMixer | None = None,
) -> StateVector:
    """Walk, phase, walk, ..., walk: the level-p evolution from ``initial``.

    ``initial`` defaults to the basis state of ``instance.initial_feasible``.
    A prebuilt ``mixer`` may be passed to avoid rebuilding its masks.
    """
    if initial is None:
        initial = basis_state(instance.n_bits, instance.initial_feasible)
    _check_feasible_support(initial, tables)
    if mixer is None:
        mixer = ConstrainedMixer(tables.validity, variant)
    phase_angles = np.asarray(tables.measure, dtype=float)

    vec = expm_apply(initial.amplitudes, params.betas[0], mixer, tol)
    for gamma, beta in zip(params.gammas, params.betas[1:]):
        vec = vec * np.exp(-1j * gamma * phase_angles)
        vec = expm_apply(vec, beta, mixer, tol)
    return StateVector(instance.n_bits, vec)


class KrylovEvolver:
    """Optimiser-facing engine using the dense vector and Lanczos walks."""

    def __init__(self, instance: NpoInstance, tables: Tables, initial: StateVector | None = None,
                 variant: str = "feasible", tol: float = 1e-10):
        self.instance = instance
        self.tables = tables
        self.initial = initial
        self.tol = tol
        self.mixer = ConstrainedMixer(tables.validity, variant)
        self.support = tables.feasible_indices()
        self.support_measure = np.asarray(tables.measure)[self.support]

    def state(self, params: Params) -> StateVector:
        return evolve(self.instance, self.tables, params, self.initial, tol=self.tol, mixer=self.mixer)

    def amplitudes(self, params: Params) -> np.ndarray:
        return self.state(params).amplitudes[self.support]


class SubspaceEvolver:
    """Exact evolution inside the feasible subspace via one eigendecomposition.

    The restricted mixer is a symmetric 0/1 matrix over the feasible states
    (sorted by bitstring). Walks become ``V diag(exp(-i beta lambda)) V^T``.
    """

    def __init__(self, instance: NpoInstance, tables: Tables, initial: StateVector | None = None):
        self.instance = instance
        self.tables = tables
        self.support = tables.feasible_indices()
        self.support_measure = np.asarray(tables.measure)[self.support]
        size = self.support.size

        pos = np.full(tables.validity.size, -1, dtype=np.int64)
        pos[self.support] = np.arange(size)
        h = np.zeros((size, size))
        for i in range(instance.n_bits):
            nb = self.support ^ (1 << i)
            keep = tables.validity[nb]
            h[pos[self.support[keep]], pos[nb[keep]]] = 1.0
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(h)

        if initial is None:
            initial = basis_state(instance.n_bits, instance.initial_feasible)
        _check_feasible_support(initial, tables)
        self.initial_compact = np.asarray(initial.amplitudes[self.support], dtype=np.complex128)
        self._phase_angles = self.support_measure.astype(float)

    def walk(self, vec: np.ndarray, beta: float) -> np.ndarray:
        if beta == 0.0:
            return vec
        v = self.eigenvectors
        return v @ (np.exp(-1j * beta * self.eigenvalues) * (v.T @ vec))

    def amplitudes(self, params: Params) -> np.ndarray:
        vec = self.walk(self.initial_compact, params.betas[0])
        for gamma, beta in zip(params.gammas, params.betas[1:]):
            vec = self.walk(vec * np.exp(-1j * gamma * self._phase_angles), beta)
        return vec

    def state(self, params: Params) -> StateVector:
        full = np.zeros(self.tables.validity.size, dtype=np.complex128)
        full[self.support] = self.amplitudes(params)
        return StateVector(self.instance.n_bits, full)


def make_evolver(instance, tables, engine: str = "auto", initial=None, subspace_limit: int = 4096):
    """Pick an evolution engine. ``auto`` diagonalises when the feasible set is small."""
    if engine == "auto":
        engine = "subspace" if int(tables.validity.sum()) <= subspace_limit else "krylov"
    if engine == "subspace":
        return SubspaceEvolver(instance, tables, initial)
    if engine == "krylov":
        return KrylovEvolver(instance, tables, initial)
    raise ValueError(f"unknown engine {engine!r}")
