"""Finite superpositions of coherent and squeezed states.

Exact overlap algebra for coherent branches, Fock-expansion fallback for
squeezed branches, Gram-matrix normalization and mean phonon numbers. States
are immutable; every operation returns a new value.

Conventions fixed here and used package-wide:
  x_hat = (b + b^dag)/sqrt(2), so <x|n> is the normalized Hermite function,
  and the squeeze operator is S(z) = exp((conj(z) b^2 - z b^dag^2)/2); a real
  positive label squeezes the position quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .numerics import hermite_function_table, log_factorial

__all__ = [
    "ZeroNorm",
    "TruncationInsufficient",
    "CoherentSuperposition",
    "SqueezedSuperposition",
    "FockVector",
    "coherent_overlap",
    "coherent_displaced_overlap",
    "coherent_fock_expansion",
    "squeezed_fock_expansion",
    "squeezed_overlap",
    "fock_expansion",
    "gram_matrix",
    "normalize",
    "mean_phonon",
    "displace",
    "make_cat",
    "position_amplitude",
]

#: Relative amplitude below which a superposition counts as destructively
#: cancelled.
_CANCEL_TOL = 1e-14

#: Default tail-mass threshold for Fock conversions.
_TAIL_TOL = 1e-10

_MAX_FOCK = 1 << 14


class ZeroNorm(Exception):
    """Superposition (or conditional amplitude) vanishes below tolerance."""


class TruncationInsufficient(Exception):
    """A Fock truncation leaves more tail mass than the threshold allows."""


def _require_finite(z, name):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z}")
    return z


def _as_complex_array(values, name) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr.real) & np.isfinite(arr.imag)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class CoherentSuperposition:
    """Sum_i w_i |gamma_i> with coherent branch labels gamma_i.

    ``normalized`` asserts that the Gram-weighted norm is 1; it is set by
    :func:`normalize` and trusted by downstream consumers.
    """

    weights: np.ndarray
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "weights", _as_complex_array(self.weights, "weights"))
        object.__setattr__(
            self, "amplitudes", _as_complex_array(self.amplitudes, "amplitudes")
        )
        if self.weights.shape != self.amplitudes.shape:
            raise ValueError("weights and amplitudes must have equal length")
        self.weights.setflags(write=False)
        self.amplitudes.setflags(write=False)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[complex, complex]], normalized=False):
        ws, gs = zip(*terms)
        return cls(np.asarray(ws, complex), np.asarray(gs, complex), normalized)

    @property
    def terms(self) -> list[tuple[complex, complex]]:
        return list(zip(self.weights.tolist(), self.amplitudes.tolist()))

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class SqueezedSuperposition:
    """Sum_i w_i |S(z_i)> with squeezed-vacuum branch labels z_i."""

    weights: np.ndarray
    labels: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "weights", _as_complex_array(self.weights, "weights"))
        object.__setattr__(self, "labels", _as_complex_array(self.labels, "labels"))
        if self.weights.shape != self.labels.shape:
            raise ValueError("weights and labels must have equal length")
        self.weights.setflags(write=False)
        self.labels.setflags(write=False)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[complex, complex]], normalized=False):
        ws, zs = zip(*terms)
        return cls(np.asarray(ws, complex), np.asarray(zs, complex), normalized)

    @property
    def terms(self) -> list[tuple[complex, complex]]:
        return list(zip(self.weights.tolist(), self.labels.tolist()))

    def __len__(self):
        return self.weights.size


@dataclass(frozen=True)
class FockVector:
    """Truncated number-basis vector; coefficients[n] multiplies |n>."""

    coefficients: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(
            self,
            "coefficients",
            _as_complex_array(self.coefficients, "coefficients"),
        )
        self.coefficients.setflags(write=False)

    @property
    def n_max(self) -> int:
        return self.coefficients.size - 1

    def norm_squared(self) -> float:
        return float(np.vdot(self.coefficients, self.coefficients).real)

    def tail_mass(self, window: int = 5) -> float:
        """Probability weight in the top ``window`` truncation slots."""
        return float(
            np.sum(np.abs(self.coefficients[-window:]) ** 2)
        )

    def __len__(self):
        return self.coefficients.size


State = Union[CoherentSuperposition, SqueezedSuperposition, FockVector]


# ---------------------------------------------------------------------------
# overlaps
# ---------------------------------------------------------------------------


def coherent_overlap(beta: complex, gamma: complex) -> complex:
    """<beta|gamma> = exp(-|beta|^2/2 - |gamma|^2/2 + conj(beta) gamma)."""
    beta = complex(beta)
    gamma = complex(gamma)
    return np.exp(
        -0.5 * abs(beta) ** 2 - 0.5 * abs(gamma) ** 2 + np.conj(beta) * gamma
    )


def coherent_displaced_overlap(beta: complex, zeta: complex, gamma: complex) -> complex:
    """<beta|D(zeta)|gamma> with D(zeta)|gamma> = e^{(zeta conj(gamma) - conj(zeta) gamma)/2} |gamma + zeta>."""
    beta, zeta, gamma = complex(beta), complex(zeta), complex(gamma)
    phase = 0.5 * (zeta * np.conj(gamma) - np.conj(zeta) * gamma)
    return coherent_overlap(beta, gamma + zeta) * np.exp(phase)


def coherent_fock_expansion(gamma: complex, n_max: int) -> FockVector:
    """|gamma> in the number basis up to n_max, computed in log scale."""
    gamma = _require_finite(gamma, "gamma")
    n = np.arange(n_max + 1)
    r = abs(gamma)
    if r == 0.0:
        c = np.zeros(n_max + 1, complex)
        c[0] = 1.0
        return FockVector(c)
    logmag = n * math.log(r) - 0.5 * np.array(
        [log_factorial(int(m)) for m in n]
    ) - 0.5 * r * r
    c = np.exp(logmag) * np.exp(1j * n * np.angle(gamma))
    return FockVector(c)


def squeezed_fock_expansion(
    zeta: complex, n_max: int, tail_tol: float = _TAIL_TOL
) -> FockVector:
    """Squeezed vacuum S(zeta)|0> in the number basis.

    Only even orders appear:
    c_{2m} = (cosh r)^{-1/2} sqrt((2m)!)/(2^m m!) (-e^{i theta} tanh r)^m
    with zeta = r e^{i theta}. Raises TruncationInsufficient when the
    truncation-window tail mass exceeds ``tail_tol``.
    """
    zeta = _require_finite(zeta, "zeta")
    r = abs(zeta)
    c = np.zeros(n_max + 1, complex)
    if r == 0.0:
        c[0] = 1.0
        return FockVector(c)
    theta = np.angle(zeta)
    m = np.arange(n_max // 2 + 1)
    logmag = (
        0.5 * np.array([log_factorial(int(2 * mm)) for mm in m])
        - m * math.log(2.0)
        - np.array([log_factorial(int(mm)) for mm in m])
        - 0.5 * math.log(math.cosh(r))
        + m * math.log(math.tanh(r))
    )
    c[2 * m] = np.exp(logmag) * (-np.exp(1j * theta)) ** m
    vec = FockVector(c)
    if vec.tail_mass() > tail_tol:
        raise TruncationInsufficient(
            f"squeezed expansion at n_max={n_max} leaves tail mass "
            f"{vec.tail_mass():.2e} > {tail_tol:.1e} for r={r:.3f}"
        )
    return vec


def _auto_n_max(labels: np.ndarray, tail_tol: float) -> int:
    """Smallest power of two truncating every branch below the tail threshold."""
    n = 16
    rmax = float(np.max(np.abs(labels)))
    while n <= _MAX_FOCK:
        try:
            for z in np.unique(labels):
                squeezed_fock_expansion(z, n, tail_tol)
            return n
        except TruncationInsufficient:
            n *= 2
    raise TruncationInsufficient(
        f"no truncation up to {_MAX_FOCK} reaches tail mass {tail_tol:.1e} "
        f"for squeeze magnitude {rmax:.3f}"
    )


def fock_expansion(state: State, n_max: int | None = None) -> FockVector:
    """Any supported state as a truncated Fock vector.

    For superpositions the truncation defaults to the smallest power of two
    for which every branch passes the tail-mass check; coherent branches use
    a mean + 12 sigma Poisson cut.
    """
    if isinstance(state, FockVector):
        return state
    if isinstance(state, SqueezedSuperposition):
        if n_max is None:
            n_max = _auto_n_max(state.labels, _TAIL_TOL)
        vecs = [squeezed_fock_expansion(z, n_max).coefficients for z in state.labels]
        total = np.einsum("i,ij->j", state.weights, np.asarray(vecs))
        return FockVector(total, normalized=state.normalized)
    if isinstance(state, CoherentSuperposition):
        if n_max is None:
            mu = float(np.max(np.abs(state.amplitudes)) ** 2)
            n_max = int(mu + 12.0 * math.sqrt(mu + 1.0) + 16.0)
        vecs = [
            coherent_fock_expansion(g, n_max).coefficients for g in state.amplitudes
        ]
        total = np.einsum("i,ij->j", state.weights, np.asarray(vecs))
        vec = FockVector(total, normalized=state.normalized)
        if vec.norm_squared() > 0 and vec.tail_mass() > _TAIL_TOL * vec.norm_squared():
            raise TruncationInsufficient(
                f"coherent expansion at n_max={n_max} leaves relative tail "
                f"{vec.tail_mass() / vec.norm_squared():.2e}"
            )
        return vec
    raise TypeError(f"unsupported state type {type(state).__name__}")


def squeezed_overlap(z1: complex, z2: complex, n_max: int | None = None) -> complex:
    """<S(z1) 0|S(z2) 0> via the Fock expansion (convention-proof route)."""
    if n_max is None:
        n_max = _auto_n_max(np.asarray([z1, z2], complex), _TAIL_TOL)
    a = squeezed_fock_expansion(z1, n_max).coefficients
    b = squeezed_fock_expansion(z2, n_max).coefficients
    return complex(np.vdot(a, b))


def gram_matrix(state: State) -> np.ndarray:
    """Pairwise branch overlaps <branch_i|branch_j>."""
    if isinstance(state, CoherentSuperposition):
        g = state.amplitudes
        g2 = np.abs(g) ** 2
        return np.exp(
            -0.5 * (g2[:, None] + g2[None, :]) + np.conj(g)[:, None] * g[None, :]
        )
    if isinstance(state, SqueezedSuperposition):
        n_max = _auto_n_max(state.labels, _TAIL_TOL)
        vecs = np.asarray(
            [squeezed_fock_expansion(z, n_max).coefficients for z in state.labels]
        )
        return np.conj(vecs) @ vecs.T
    raise TypeError(f"gram_matrix does not apply to {type(state).__name__}")


# ---------------------------------------------------------------------------
# normalization and moments
# ---------------------------------------------------------------------------


def normalize(state: State) -> State:
    """Rescale weights so the total norm is 1 (Gram-matrix route).

    The Gram matrix must be positive semidefinite up to -1e-12; a norm below
    the destructive-cancellation tolerance raises ZeroNorm.
    """
    if isinstance(state, FockVector):
        n2 = state.norm_squared()
        if n2 <= _CANCEL_TOL**2 * max(1.0, float(np.sum(np.abs(state.coefficients) ** 2))):
            raise ZeroNorm("Fock vector norm vanishes")
        return FockVector(state.coefficients / math.sqrt(n2), normalized=True)
    gram = gram_matrix(state)
    eigs = np.linalg.eigvalsh(gram)
    if eigs[0] < -1e-12 * max(1.0, eigs[-1]):
        raise ValueError(f"Gram matrix not PSD: min eigenvalue {eigs[0]:.3e}")
    w = state.weights
    n2 = float(np.real(np.conj(w) @ gram @ w))
    scale = float(np.sum(np.abs(w) ** 2))
    if n2 <= _CANCEL_TOL**2 * max(scale, 1e-300):
        raise ZeroNorm(
            f"superposition norm {math.sqrt(max(n2, 0.0)):.2e} below cancellation tolerance"
        )
    w_new = w / math.sqrt(n2)
    if isinstance(state, CoherentSuperposition):
        return CoherentSuperposition(w_new, state.amplitudes, normalized=True)
    return SqueezedSuperposition(w_new, state.labels, normalized=True)


def _require_normalized(state: State, op: str):
    if not state.normalized:
        raise ValueError(f"{op} requires a normalized state; call normalize() first")


def mean_phonon(state: State) -> float:
    """M = <b^dag b> of a normalized state.

    Coherent superpositions use <g_m|b^dag b|g_n> = conj(g_m) g_n <g_m|g_n>;
    squeezed superpositions fall back to the Fock expansion.
    """
    _require_normalized(state, "mean_phonon")
    if isinstance(state, CoherentSuperposition):
        gram = gram_matrix(state)
        w, g = state.weights, state.amplitudes
        val = np.einsum("m,n,m,n,mn->", np.conj(w), w, np.conj(g), g, gram)
        return float(val.real)
    if isinstance(state, SqueezedSuperposition):
        vec = fock_expansion(state)
        return float(
            np.sum(np.arange(vec.coefficients.size) * np.abs(vec.coefficients) ** 2)
        )
    n = np.arange(state.coefficients.size)
    return float(np.sum(n * np.abs(state.coefficients) ** 2))


def mean_annihilation(state: State) -> complex:
    """<b> of a normalized state (needed for pure-state measure identities)."""
    _require_normalized(state, "mean_annihilation")
    if isinstance(state, CoherentSuperposition):
        gram = gram_matrix(state)
        w, g = state.weights, state.amplitudes
        return complex(np.einsum("m,n,n,mn->", np.conj(w), w, g, gram))
    vec = fock_expansion(state) if not isinstance(state, FockVector) else state
    c = vec.coefficients
    n = np.arange(1, c.size)
    return complex(np.sum(np.sqrt(n) * np.conj(c[:-1]) * c[1:]))


def displace(state: CoherentSuperposition, z: complex) -> CoherentSuperposition:
    """Exact D(z) action: labels shift and weights pick up the Weyl phase."""
    z = _require_finite(z, "z")
    phases = np.exp(0.5 * (z * np.conj(state.amplitudes) - np.conj(z) * state.amplitudes))
    return CoherentSuperposition(
        state.weights * phases, state.amplitudes + z, normalized=state.normalized
    )


def make_cat(alpha: float) -> CoherentSuperposition:
    """Normalized even cat N(|alpha> + |-alpha>)."""
    cat = CoherentSuperposition(
        np.asarray([1.0, 1.0], complex), np.asarray([alpha, -alpha], complex)
    )
    return normalize(cat)


def position_amplitude(state: State, xs: np.ndarray) -> np.ndarray:
    """<x|psi> on a grid, in the x_hat = (b + b^dag)/sqrt(2) convention.

    Coherent branches use the closed-form Gaussian wave packet
    <x|gamma> = pi^{-1/4} exp(-x^2/2 + sqrt(2) gamma x - gamma^2/2 - |gamma|^2/2);
    other states go through their Fock expansion and Hermite functions.
    """
    xs = np.asarray(xs, dtype=float)
    if isinstance(state, CoherentSuperposition):
        out = np.zeros(xs.shape, complex)
        for w, g in zip(state.weights, state.amplitudes):
            out += w * math.pi**-0.25 * np.exp(
                -0.5 * xs * xs + math.sqrt(2.0) * g * xs - 0.5 * g * g - 0.5 * abs(g) ** 2
            )
        return out
    vec = state if isinstance(state, FockVector) else fock_expansion(state)
    table = hermite_function_table(vec.n_max, xs)
    return np.einsum("n,nx->x", vec.coefficients, table)
