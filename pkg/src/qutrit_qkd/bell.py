"""Three-dimensional Bell parameter S3: exact evaluation and optimization.

The Bell expression combines eight mod-3 coincidence probabilities over two
settings per side.  Outcomes are labeled 0, 1, 2.  ``coincidence_mod3(T, k)``
is the probability that B's outcome exceeds A's by k (mod 3); the terms
"A = B - 1" and "A = B + 1" of the inequality therefore map to k = 1 and
k = 2 respectively.  This convention is pinned by a unit test reproducing
the quantum maximum 4/(6*sqrt(3) - 9) at the canonical settings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from .linalg import (
    DIM,
    MixedState,
    ValidationError,
    diagonal_state,
    joint_amplitudes,
    phase_basis,
    require_orthonormal,
)

CLASSICAL_BOUND = 2.0
QUANTUM_MAX = float(4.0 / (6.0 * np.sqrt(3.0) - 9.0))   # ~2.87293, maximal entanglement
NONMAX_QUANTUM_MAX = float(1.0 + np.sqrt(11.0 / 3.0))   # ~2.91485, gamma ~0.7923
VISIBILITY_AT_CLASSICAL_BOUND = CLASSICAL_BOUND / QUANTUM_MAX

# Offsets (a1, a2, b1, b2) of the phase-basis family achieving QUANTUM_MAX
# on the Schmidt-diagonal maximally entangled state.
CANONICAL_OFFSETS = (0.0, 0.5, 0.25, -0.25)


@dataclass(frozen=True)
class SettingsPair:
    """The two analyzer bases per side used in the Bell test."""

    a1: np.ndarray
    a2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        for name in ("a1", "a2", "b1", "b2"):
            require_orthonormal(getattr(self, name))

    def basis(self, side: str, setting: int) -> np.ndarray:
        return getattr(self, f"{side.lower()}{setting}")


@dataclass(frozen=True)
class BellValue:
    s3: float
    classical_bound: float = CLASSICAL_BOUND
    quantum_max: float = QUANTUM_MAX

    @property
    def violates_local_realism(self) -> bool:
        return self.s3 > self.classical_bound


def canonical_settings() -> SettingsPair:
    a1, a2, b1, b2 = CANONICAL_OFFSETS
    return SettingsPair(
        a1=phase_basis("A", a1),
        a2=phase_basis("A", a2),
        b1=phase_basis("B", b1),
        b2=phase_basis("B", b2),
    )


def as_mixture(state) -> MixedState:
    if isinstance(state, MixedState):
        return state
    return MixedState.pure(np.asarray(state, dtype=complex))


def outcome_distribution(state, basis_a: np.ndarray, basis_b: np.ndarray) -> np.ndarray:
    """3x3 joint outcome table; rows index A's outcome, columns B's."""
    require_orthonormal(basis_a)
    require_orthonormal(basis_b)
    mixed = as_mixture(state)
    table = np.full((DIM, DIM), mixed.white_noise_weight / 9.0)
    for w, psi in mixed.components:
        table += w * np.abs(joint_amplitudes(psi, basis_a, basis_b)) ** 2
    return table


def coincidence_mod3(table: np.ndarray, k: int) -> float:
    """Probability that the outcomes differ by k (mod 3): sum_j T[j, (j+k)%3]."""
    t = np.asarray(table)
    j = np.arange(DIM)
    return float(t[j, (j + k) % DIM].sum())


# Signed coefficient per outcome cell, keyed by setting pair (a, b).
# Cell (k, l) enters S3 with the sign of its difference class (k - l) mod 3.
def s3_coefficients() -> dict:
    d = (np.arange(DIM)[:, None] - np.arange(DIM)[None, :]) % DIM
    same = np.where(d == 0, 1.0, 0.0)
    c11 = same - np.where(d == 2, 1.0, 0.0)
    c21 = np.where(d == 2, 1.0, 0.0) - same
    c12 = same - np.where(d == 1, 1.0, 0.0)
    return {(1, 1): c11, (2, 1): c21, (2, 2): c11.copy(), (1, 2): c12}


def correlation_profile(state, settings: SettingsPair) -> dict:
    """Mod-3 coincidence probabilities p[(a, b)][k] for the four setting pairs.

    Each length-3 entry sums to 1; k indexes the outcome difference class.
    """
    mixed = as_mixture(state)
    profile = {}
    for a in (1, 2):
        for b in (1, 2):
            table = outcome_distribution(mixed, settings.basis("a", a),
                                         settings.basis("b", b))
            profile[(a, b)] = np.array([coincidence_mod3(table, k) for k in range(3)])
    return profile


def s3(state, settings: SettingsPair) -> BellValue:
    """Exact S3 for a state (pure or mixed) at the given settings.

    The signed eight-term sum over the correlation profile; the "B - 1"
    terms take k = 1 and the "B + 1" term takes k = 2 (see module docstring).
    """
    p = correlation_profile(state, settings)
    total = (p[(1, 1)][0] + p[(2, 1)][1] + p[(2, 2)][0] + p[(1, 2)][0]
             - p[(1, 1)][1] - p[(2, 1)][0] - p[(2, 2)][1] - p[(1, 2)][2])
    return BellValue(s3=float(total))


def s3_vs_visibility(visibility: float) -> float:
    """S3 of the isotropic-noise mixture of the maximal state at optimal settings.

    Linear in the visibility; crosses the classical bound 2 at
    ``VISIBILITY_AT_CLASSICAL_BOUND`` (~0.6962).
    """
    if not 0.0 <= visibility <= 1.0:
        raise ValidationError(f"visibility {visibility} outside [0, 1]")
    return visibility * QUANTUM_MAX


# ---------------------------------------------------------------------------
# Derivative-free optimization of measurement settings
# ---------------------------------------------------------------------------

# Generalized Gell-Mann basis of traceless Hermitian 3x3 matrices.
def _gell_mann() -> np.ndarray:
    g = np.zeros((8, DIM, DIM), dtype=complex)
    pairs = [(0, 1), (0, 2), (1, 2)]
    for i, (a, b) in enumerate(pairs):
        g[2 * i][a, b] = g[2 * i][b, a] = 1.0
        g[2 * i + 1][a, b] = -1j
        g[2 * i + 1][b, a] = 1j
    g[6] = np.diag([1.0, -1.0, 0.0])
    g[7] = np.diag([1.0, 1.0, -2.0]) / np.sqrt(3.0)
    return g


_GELL_MANN = _gell_mann()


def unitary_from_params(theta) -> np.ndarray:
    """3x3 unitary exp(i * sum_m theta_m * G_m) from 8 real parameters."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (8,):
        raise ValidationError(f"expected 8 unitary parameters, got shape {theta.shape}")
    h = np.tensordot(theta, _GELL_MANN, axes=(0, 0))
    return expm(1j * h)


def random_basis(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random orthonormal basis from a QR decomposition."""
    z = rng.normal(size=(DIM, DIM)) + 1j * rng.normal(size=(DIM, DIM))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return q.conj().T


def _phase_settings(offsets) -> SettingsPair:
    a1, a2, b1, b2 = offsets
    return SettingsPair(
        a1=phase_basis("A", a1),
        a2=phase_basis("A", a2),
        b1=phase_basis("B", b1),
        b2=phase_basis("B", b2),
    )


def _unitary_settings(params) -> SettingsPair:
    # 8 parameters per basis, perturbing the canonical settings; the map
    # exp(iH) U0 still ranges over all of U(3) for each basis.
    base = canonical_settings()
    p = np.asarray(params, dtype=float).reshape(4, 8)
    return SettingsPair(
        a1=unitary_from_params(p[0]) @ base.a1,
        a2=unitary_from_params(p[1]) @ base.a2,
        b1=unitary_from_params(p[2]) @ base.b1,
        b2=unitary_from_params(p[3]) @ base.b2,
    )


@dataclass(frozen=True)
class OptimizeResult:
    settings: SettingsPair
    s3: float
    converged: bool
    family: str
    params: np.ndarray


def optimize_s3(
    state,
    family: str = "phase",
    tolerance: float = 1e-6,
    seed: int = 0,
    restarts: int = 20,
) -> OptimizeResult:
    """Multi-start Nelder-Mead search for settings maximizing S3.

    ``family`` selects the search space: "phase" varies the four offsets of
    the Fourier-phase family; "unitary" varies all four bases over the full
    local-unitary family (8 parameters each).  The reported value is the
    exact S3 re-evaluated at the returned settings.  Deterministic for a
    fixed seed; ties are broken by restart order.
    """
    if tolerance <= 0:
        raise ValidationError("tolerance must be positive")
    if family not in ("phase", "unitary"):
        raise ValidationError(f"unknown settings family {family!r}")
    mixed = as_mixture(state)
    rng = np.random.default_rng(seed)

    if family == "phase":
        build = _phase_settings
        dim = 4
        starts = [np.asarray(CANONICAL_OFFSETS, dtype=float)]
        starts += [rng.uniform(0.0, 3.0, size=dim) for _ in range(restarts - 1)]
    else:
        build = _unitary_settings
        dim = 32
        starts = [np.zeros(dim)]
        starts += [rng.normal(scale=0.6, size=dim) for _ in range(restarts - 1)]

    def objective(x):
        return -s3(mixed, build(x)).s3

    best_x, best_val, converged = None, np.inf, False
    for x0 in starts:
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"xatol": tolerance, "fatol": tolerance * 1e-2, "maxiter": 4000},
        )
        converged = converged or bool(res.success)
        if res.fun < best_val:
            best_val = res.fun
            best_x = res.x

    settings = build(best_x)
    return OptimizeResult(
        settings=settings,
        s3=s3(mixed, settings).s3,
        converged=converged,
        family=family,
        params=np.asarray(best_x),
    )


@dataclass(frozen=True)
class GammaOptimum:
    gamma: float
    s3: float
    settings: SettingsPair
    converged: bool


def optimize_gamma_family(
    tolerance: float = 1e-7,
    seed: int = 0,
    restarts: int = 12,
) -> GammaOptimum:
    """Jointly optimize the middle Schmidt coefficient and the phase settings.

    Searches over states (|00> + g|11> + |22>)/sqrt(2 + g^2) together with
    the four phase offsets.  The optimum exceeds the maximal-entanglement
    value: a non-maximally entangled state violates the inequality more.
    """
    rng = np.random.default_rng(seed)

    def objective(x):
        gamma = abs(x[0])
        st = diagonal_state((1.0, gamma, 1.0))
        return -s3(st, _phase_settings(x[1:])).s3

    starts = [np.concatenate(([1.0], CANONICAL_OFFSETS))]
    for _ in range(restarts - 1):
        starts.append(np.concatenate((rng.uniform(0.2, 1.5, 1), rng.uniform(0.0, 3.0, 4))))

    best, best_val, converged = None, np.inf, False
    for x0 in starts:
        res = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"xatol": tolerance, "fatol": tolerance * 1e-2, "maxiter": 6000},
        )
        converged = converged or bool(res.success)
        if res.fun < best_val:
            best_val = res.fun
            best = res.x

    gamma = abs(best[0])
    settings = _phase_settings(best[1:])
    value = s3(diagonal_state((1.0, gamma, 1.0)), settings).s3
    return GammaOptimum(gamma=gamma, s3=value, settings=settings, converged=converged)
