"""End-mirror model: photon-number-conditioned displacement of the mechanics.

The joint evolution factorizes into a Kerr phase on the cavity, a
photon-number-proportional mechanical displacement, and free mechanical
rotation. Homodyning the cavity at quadrature outcome x then leaves the
mechanics in a finite superposition of coherent states, which is what the
rest of the package measures.

The cavity rotating frame is used throughout: the fast optical free phase
only redefines the homodyne local-oscillator phase, so it is dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import diags
from scipy.sparse.linalg import expm_multiply

from .numerics import hermite_function_table, log_factorial
from .states import (
    CoherentSuperposition,
    FockVector,
    TruncationInsufficient,
    ZeroNorm,
    coherent_fock_expansion,
    normalize,
)

__all__ = [
    "CubicParams",
    "default_photon_truncation",
    "branch_amplitude",
    "kerr_phase",
    "conditional_state",
    "joint_state_fock",
    "condition_joint_on_x",
]

_PHOTON_TAIL = 1e-12
_ZERO_NORM_DENSITY = 1e-28


def default_photon_truncation(alpha: complex) -> int:
    """Smallest photon cutoff with Poisson tail and last-term weight < 1e-12."""
    lam = abs(complex(alpha)) ** 2
    if lam == 0.0:
        return 1
    n = 1
    cdf = math.exp(-lam)
    pmf = cdf
    while n < 4096:
        pmf *= lam / n
        cdf += pmf
        if 1.0 - cdf < _PHOTON_TAIL and pmf < _PHOTON_TAIL:
            return n
        n += 1
    raise TruncationInsufficient(f"photon truncation not found for |alpha|^2={lam}")


@dataclass(frozen=True)
class CubicParams:
    """Working point of the end-mirror run.

    k is the coupling over the mechanical frequency, t the dimensionless
    time, alpha the cavity coherent amplitude, beta0 the initial mechanical
    displacement, nbar the initial thermal occupation, and x the homodyne
    outcome. n_ph of None selects the automatic photon truncation.
    """

    k: float
    t: float
    alpha: complex = 0.8
    beta0: complex = 2.0
    nbar: float = 0.0
    x: float = 0.0
    n_ph: int | None = None

    def __post_init__(self):
        if not (self.k >= 0.0 and math.isfinite(self.k)):
            raise ValueError(f"k must be >= 0, got {self.k}")
        if not (self.t >= 0.0 and math.isfinite(self.t)):
            raise ValueError(f"t must be >= 0, got {self.t}")
        if not (self.nbar >= 0.0 and math.isfinite(self.nbar)):
            raise ValueError(f"nbar must be >= 0, got {self.nbar}")
        if not math.isfinite(self.x):
            raise ValueError("x must be finite")
        a = complex(self.alpha)
        b = complex(self.beta0)
        if not all(math.isfinite(v) for v in (a.real, a.imag, b.real, b.imag)):
            raise ValueError("alpha and beta0 must be finite")
        if self.n_ph is not None:
            if self.n_ph < 1:
                raise ValueError(f"n_ph must be >= 1, got {self.n_ph}")
            lam = abs(a) ** 2
            tail = math.exp(
                -lam + self.n_ph * math.log(lam) - log_factorial(self.n_ph)
            ) if lam > 0 else 0.0
            if tail >= _PHOTON_TAIL:
                raise ValueError(
                    f"photon truncation n_ph={self.n_ph} leaves Poisson weight "
                    f"{tail:.2e} >= {_PHOTON_TAIL:.0e}"
                )

    def resolved_n_ph(self) -> int:
        return self.n_ph if self.n_ph is not None else default_photon_truncation(self.alpha)


def branch_amplitude(n: int, t: float, k: float, beta: complex) -> complex:
    """Coherent label of the mechanics in the n-photon sector:
    beta e^{-it} + k n (1 - e^{-it})."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return complex(beta) * np.exp(-1j * t) + k * n * (1.0 - np.exp(-1j * t))


def kerr_phase(n: int, t: float, k: float) -> complex:
    """Unit-modulus Kerr factor e^{i k^2 n^2 (t - sin t)}."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return np.exp(1j * (k * k) * (n * n) * (t - math.sin(t)))


def _photon_amplitudes(alpha: complex, n_ph: int) -> np.ndarray:
    """e^{-|alpha|^2/2} alpha^n / sqrt(n!) in log scale."""
    return coherent_fock_expansion(alpha, n_ph).coefficients


def conditional_state(p: CubicParams) -> CoherentSuperposition:
    """Mechanical state after homodyning the cavity at outcome x.

    Branch n carries weight proportional to (alpha^n/sqrt(n!)) times the
    Kerr phase times <x|n>, on the coherent label branch_amplitude(n). At
    x = 0 every odd branch weight vanishes identically (odd Hermite
    functions are odd). Raises ZeroNorm when the homodyne outcome has
    vanishing probability density.
    """
    n_ph = p.resolved_n_ph()
    n = np.arange(n_ph + 1)
    photon = _photon_amplitudes(p.alpha, n_ph)
    kerr = np.exp(1j * (p.k * p.k) * (n.astype(float) ** 2) * (p.t - math.sin(p.t)))
    homodyne = hermite_function_table(n_ph, np.asarray([p.x]))[:, 0]
    weights = photon * kerr * homodyne
    labels = complex(p.beta0) * np.exp(-1j * p.t) + p.k * n * (1.0 - np.exp(-1j * p.t))
    raw = CoherentSuperposition(weights, labels)
    density = float(
        np.real(np.conj(weights) @ _coherent_gram(labels) @ weights)
    )
    if density < _ZERO_NORM_DENSITY:
        raise ZeroNorm(
            f"homodyne outcome x={p.x} has probability density {density:.2e}"
        )
    return normalize(raw)


def _coherent_gram(g: np.ndarray) -> np.ndarray:
    g2 = np.abs(g) ** 2
    return np.exp(-0.5 * (g2[:, None] + g2[None, :]) + np.conj(g)[:, None] * g[None, :])


def joint_state_fock(p: CubicParams, phonon_dim: int | None = None) -> np.ndarray:
    """Brute-force joint state, shape (photon n, phonon m).

    Applies the factorized evolution directly in a truncated double Fock
    basis: free mechanical rotation, then the sector-wise mechanical
    displacement exponentiated with a generic matrix-exponential action
    (no closed-form displacement matrix elements), then the Kerr phase.
    Used as the oracle against conditional_state.
    """
    n_ph = p.resolved_n_ph()
    if phonon_dim is None:
        reach = abs(complex(p.beta0)) + 2.0 * p.k * n_ph
        phonon_dim = int(reach * reach + 14.0 * reach + 30.0)
    beta_vec = coherent_fock_expansion(p.beta0, phonon_dim - 1).coefficients
    m = np.arange(phonon_dim)
    # free mechanical rotation e^{-i b^dag b t}
    beta_vec = beta_vec * np.exp(-1j * m * p.t)
    photon = _photon_amplitudes(p.alpha, n_ph)
    eta = 1.0 - np.exp(-1j * p.t)
    sq = np.sqrt(np.arange(1, phonon_dim))
    bdag = diags(sq, -1, format="csc")
    b = diags(sq, 1, format="csc")
    joint = np.zeros((n_ph + 1, phonon_dim), dtype=complex)
    for n in range(n_ph + 1):
        gen = (p.k * n * eta) * bdag - np.conj(p.k * n * eta) * b
        col = expm_multiply(gen, beta_vec) if n > 0 else beta_vec.copy()
        kerr = np.exp(1j * (p.k * p.k) * (n * n) * (p.t - math.sin(p.t)))
        joint[n] = photon[n] * kerr * col
    norm = float(np.sum(np.abs(joint) ** 2))
    if abs(norm - 1.0) > 1e-8:
        raise TruncationInsufficient(
            f"joint Fock norm {norm:.10f} deviates from 1; enlarge truncations"
        )
    return joint


def condition_joint_on_x(joint: np.ndarray, x: float) -> FockVector:
    """Project the cavity index of a joint matrix onto <x| and renormalize."""
    n_ph = joint.shape[0] - 1
    psi_x = hermite_function_table(n_ph, np.asarray([x]))[:, 0]
    vec = np.einsum("n,nm->m", psi_x, joint)
    n2 = float(np.vdot(vec, vec).real)
    if n2 < _ZERO_NORM_DENSITY:
        raise ZeroNorm(f"homodyne outcome x={x} has probability density {n2:.2e}")
    return FockVector(vec / math.sqrt(n2), normalized=True)
