"""Membrane-in-the-middle model: photon-number-dependent mechanical squeezing.

Each cavity photon sector n squeezes the ground-state-cooled membrane by a
degree set by chi = sqrt(1 + 4 k n); homodyning the cavity at outcome x then
leaves a finite superposition of squeezed vacua.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import hermite_function_table
from .states import (
    SqueezedSuperposition,
    ZeroNorm,
    coherent_fock_expansion,
    fock_expansion,
    normalize,
)
from .cubic import default_photon_truncation

__all__ = [
    "QuarticParams",
    "SqueezeBranch",
    "squeeze_degree",
    "photon_coefficient",
    "conditional_state_quartic",
    "two_component_fidelity",
]

_ZERO_NORM_DENSITY = 1e-28

#: Branches whose relative weight falls below this are dropped from the
#: conditional superposition; they are invisible at the package's working
#: tolerances but would force enormous Fock truncations.
_BRANCH_PRUNE = 1e-12


@dataclass(frozen=True)
class QuarticParams:
    """Working point of the membrane run. alpha is real by construction
    (the conditional-state expression assumes it)."""

    k: float
    t: float
    alpha: float = 0.7
    x: float = 1.0
    n_ph: int | None = None

    def __post_init__(self):
        if not (self.k >= 0.0 and math.isfinite(self.k)):
            raise ValueError(f"k must be >= 0, got {self.k}")
        if not (self.t >= 0.0 and math.isfinite(self.t)):
            raise ValueError(f"t must be >= 0, got {self.t}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite and real")
        if not math.isfinite(self.x):
            raise ValueError("x must be finite")
        if self.n_ph is not None and self.n_ph < 1:
            raise ValueError(f"n_ph must be >= 1, got {self.n_ph}")

    def resolved_n_ph(self) -> int:
        return self.n_ph if self.n_ph is not None else default_photon_truncation(self.alpha)


@dataclass(frozen=True)
class SqueezeBranch:
    """Per-photon-sector squeezing record.

    chi = sqrt(1 + 4 k n), rho = -2 (1 + 2 k n), eta the branch-continuous
    phase angle, and zeta the complex squeeze label i e^{i eta} asinh(...).
    """

    n: int
    chi: float
    rho: float
    eta: float
    zeta: complex

    @property
    def zeta_abs(self) -> float:
        return abs(self.zeta)


def _eta_continuous(s: float, c: float) -> float:
    """Branch-continuous arctan(c tan s), equal to 0 at s = 0.

    The plain arctangent jumps by -sign(c) pi at every pole of tan; adding
    sign(c) pi round(s/pi) removes the jumps, which is the only reading that
    keeps the phase continuous in time.
    """
    if c == 0.0 or s == 0.0:
        return 0.0
    return math.atan(c * math.tan(s)) + math.copysign(1.0, c) * math.pi * round(s / math.pi)


def squeeze_degree(n: int, t: float, k: float) -> SqueezeBranch:
    """Squeeze label of the n-photon branch:
    zeta(n) = i e^{i eta} asinh(2 k n sin(chi t)/chi)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    chi = math.sqrt(1.0 + 4.0 * k * n)
    rho = -2.0 * (1.0 + 2.0 * k * n)
    eta = _eta_continuous(chi * t, rho / (2.0 * chi))
    amount = math.asinh(2.0 * k * n * math.sin(chi * t) / chi)
    zeta = 1j * np.exp(1j * eta) * amount
    return SqueezeBranch(n=n, chi=chi, rho=rho, eta=eta, zeta=complex(zeta))


def photon_coefficient(n: int, t: float, alpha: float, branch: SqueezeBranch) -> complex:
    """Pre-measurement photon amplitude c(n, t) = alpha^n e^{-(|alpha|^2 + i eta)/2}/sqrt(n!)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    base = coherent_fock_expansion(alpha, n).coefficients[n]
    return complex(base * np.exp(-0.5j * branch.eta))


def conditional_state_quartic(p: QuarticParams) -> SqueezedSuperposition:
    """Membrane state after homodyning the cavity at outcome x.

    Branch n carries weight proportional to
    alpha^n H_n(x) e^{i eta(n)} / (sqrt(2^n) n!), equivalently the Poisson
    amplitude times <x|n> times the branch phase, on the squeezed label
    zeta(n). Normalization runs through the Gram matrix of the branches.
    """
    n_ph = p.resolved_n_ph()
    branches = [squeeze_degree(n, p.t, p.k) for n in range(n_ph + 1)]
    photon = coherent_fock_expansion(p.alpha, n_ph).coefficients
    homodyne = hermite_function_table(n_ph, np.asarray([p.x]))[:, 0]
    phases = np.exp(1j * np.asarray([br.eta for br in branches]))
    weights = photon * homodyne * phases
    labels = np.asarray([br.zeta for br in branches])
    density = float(np.sum(np.abs(weights) ** 2))  # branches near-orthogonal upper scale
    if density < _ZERO_NORM_DENSITY:
        raise ZeroNorm(
            f"homodyne outcome x={p.x} has probability density {density:.2e}"
        )
    keep = np.abs(weights) > _BRANCH_PRUNE * np.max(np.abs(weights))
    raw = SqueezedSuperposition(weights[keep], labels[keep])
    return normalize(raw)


def two_component_fidelity(p: QuarticParams) -> float:
    """|<psi_full | psi_two-term>|^2 with branches n >= 2 dropped.

    Quantifies how well the conditional state reduces to
    N(|0> + w |zeta(1)>); computed in the Fock fallback.
    """
    full = conditional_state_quartic(p)
    n_ph = p.resolved_n_ph()
    branches = [squeeze_degree(n, p.t, p.k) for n in range(min(1, n_ph) + 1)]
    photon = coherent_fock_expansion(p.alpha, n_ph).coefficients[: len(branches)]
    homodyne = hermite_function_table(n_ph, np.asarray([p.x]))[: len(branches), 0]
    phases = np.exp(1j * np.asarray([br.eta for br in branches]))
    weights = photon * homodyne * phases
    labels = np.asarray([br.zeta for br in branches])
    two = normalize(SqueezedSuperposition(weights, labels))
    n_max = max(fock_expansion(full).n_max, fock_expansion(two).n_max)
    a = fock_expansion(full, n_max).coefficients
    b = fock_expansion(two, n_max).coefficients
    return float(abs(np.vdot(a, b)) ** 2)
