"""Scalar numerics: log-scale combinatorics, Hermite functions, adaptive 2-D quadrature.

All routines are pure functions. The quadrature operates on complex
phase-space points so characteristic-function integrands can be passed
directly; it integrates over a rotated rectangle with globally adaptive
tensor Gauss-Legendre panels.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "NonDecayingIntegrand",
    "MaxDepthExceeded",
    "HERMITE_PLAIN_MAX",
    "log_factorial",
    "hermite",
    "hermite_log",
    "hermite_function",
    "hermite_function_table",
    "QuadratureSpec",
    "IntegrationResult",
    "integrate2d",
]

#: Largest order for which ``hermite`` returns a plain float. Above this the
#: polynomial overflows double precision for moderate arguments; use
#: ``hermite_log`` instead.
HERMITE_PLAIN_MAX = 200

_QUARTER_LOG_PI = 0.25 * math.log(math.pi)


class NonDecayingIntegrand(Exception):
    """The integrand is not negligible on the quadrature boundary.

    Signals that the requested domain is too small for the integrand's
    support; enlarge the domain rather than trusting a truncated integral.
    """


class MaxDepthExceeded(Exception):
    """Adaptive refinement hit the depth limit before reaching the tolerance."""


def log_factorial(n: int) -> float:
    """ln(n!) for n >= 0, exact to double precision via lgamma."""
    if n < 0:
        raise ValueError(f"log_factorial requires n >= 0, got {n}")
    return math.lgamma(n + 1)


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x).

    Uses the three-term recurrence H_{n+1} = 2 x H_n - 2 n H_{n-1}. Only
    orders up to ``HERMITE_PLAIN_MAX`` are served here; larger orders
    overflow a double and must go through :func:`hermite_log`, which carries
    the value as sign and log-magnitude.
    """
    if n < 0:
        raise ValueError(f"hermite requires n >= 0, got {n}")
    if n > HERMITE_PLAIN_MAX:
        raise ValueError(
            f"hermite is limited to n <= {HERMITE_PLAIN_MAX}; "
            "use hermite_log for larger orders"
        )
    h_prev, h = 1.0, 2.0 * x
    if n == 0:
        return 1.0
    for m in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
    return h


def hermite_log(n: int, x: float) -> tuple[float, float]:
    """H_n(x) as ``(sign, ln|H_n(x)|)`` for any order.

    The recurrence runs on rescaled values; the accumulated rescaling is
    folded back into the log-magnitude, so no intermediate overflows occur.
    A sign of 0.0 (with log -inf) marks an exact zero.
    """
    if n < 0:
        raise ValueError(f"hermite_log requires n >= 0, got {n}")
    if n == 0:
        return 1.0, 0.0
    h_prev, h = 1.0, 2.0 * x
    scale = 0.0
    for m in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * m * h_prev
        a = abs(h)
        if a > 1e250:
            h /= 1e250
            h_prev /= 1e250
            scale += 250.0 * math.log(10.0)
    if h == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, h), math.log(abs(h)) + scale


def hermite_function(n: int, x: float) -> float:
    """Quadrature eigenstate amplitude <x|n> for x_hat = (b + b^dag)/sqrt(2).

    Equals pi^(-1/4) (2^n n!)^(-1/2) H_n(x) exp(-x^2/2), evaluated with the
    normalized recurrence so it neither overflows nor loses the sign.
    """
    return float(hermite_function_table(n, np.asarray([float(x)]))[n, 0])


def hermite_function_table(n_max: int, xs: np.ndarray) -> np.ndarray:
    """All <x|n> for n = 0..n_max on a grid, shape (n_max+1, len(xs)).

    Normalized recurrence: psi_{n+1} = x sqrt(2/(n+1)) psi_n
    - sqrt(n/(n+1)) psi_{n-1}; values stay O(1) for all orders.
    """
    if n_max < 0:
        raise ValueError(f"hermite_function_table requires n_max >= 0, got {n_max}")
    xs = np.asarray(xs, dtype=float)
    out = np.zeros((n_max + 1, xs.size))
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * xs * xs)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * xs * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * xs * out[n] - math.sqrt(
            n / (n + 1)
        ) * out[n - 1]
    return out


# ---------------------------------------------------------------------------
# Adaptive 2-D quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Rotated-rectangle domain and stopping rules for :func:`integrate2d`.

    The domain is the set center + e^{i rotation} (u + i v) with
    |u| <= half_width_u and |v| <= half_width_v. ``resolve_scale``, when set,
    forces cells larger than that length to be split before their error
    estimate is trusted; it protects oscillatory integrands from deceptive
    early convergence.
    """

    half_width_u: float
    half_width_v: float
    center: complex = 0j
    rotation: float = 0.0
    rel_tol: float = 1e-7
    abs_tol: float = 0.0
    max_depth: int = 16
    initial_cells: int = 8
    resolve_scale: float | None = None

    def __post_init__(self):
        if not (self.half_width_u > 0 and self.half_width_v > 0):
            raise ValueError("half-widths must be positive")
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.initial_cells < 1:
            raise ValueError("initial_cells must be >= 1")
        if self.resolve_scale is not None and self.resolve_scale <= 0:
            raise ValueError("resolve_scale must be positive")
        for val in (
            self.half_width_u,
            self.half_width_v,
            self.center.real,
            self.center.imag,
            self.rotation,
        ):
            if not math.isfinite(val):
                raise ValueError("QuadratureSpec fields must be finite")


class IntegrationResult(NamedTuple):
    value: float
    error: float
    evaluations: int
    cells: int
    depth: int


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_nodes(p: int) -> tuple[np.ndarray, np.ndarray]:
    if p not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(p)
        _GL_CACHE[p] = (x, w)
    return _GL_CACHE[p]


_P_COARSE = 8
_P_FINE = 16
_BATCH = 256
_MAX_SEED_CELLS = 1 << 17


def _eval_batch(f, rot, center, boxes):
    """Gauss-Legendre estimates on a batch of cells.

    boxes: array (B, 4) of (u0, u1, v0, v1). Returns coarse values, fine
    values, per-cell max |f| over the fine nodes, and evaluation count.
    """
    B = boxes.shape[0]
    results = []
    fmax = None
    evals = 0
    for p in (_P_COARSE, _P_FINE):
        x, w = _gl_nodes(p)
        cu = 0.5 * (boxes[:, 0] + boxes[:, 1])
        hu = 0.5 * (boxes[:, 1] - boxes[:, 0])
        cv = 0.5 * (boxes[:, 2] + boxes[:, 3])
        hv = 0.5 * (boxes[:, 3] - boxes[:, 2])
        uu = cu[:, None] + hu[:, None] * x[None, :]
        vv = cv[:, None] + hv[:, None] * x[None, :]
        zz = center + rot * (uu[:, :, None] + 1j * vv[:, None, :])
        vals = np.asarray(f(zz.ravel()), dtype=float).reshape(B, p, p)
        evals += B * p * p
        q = hu * hv * np.einsum("i,j,bij->b", w, w, vals)
        results.append(q)
        if p == _P_FINE:
            fmax = np.abs(vals).reshape(B, -1).max(axis=1)
    return results[0], results[1], fmax, evals


def integrate2d(
    f: Callable[[np.ndarray], np.ndarray],
    spec: QuadratureSpec,
    bound: Callable[[np.ndarray], np.ndarray] | None = None,
) -> IntegrationResult:
    """Adaptive tensor quadrature of a real integrand over the spec's domain.

    ``f`` must accept a flat complex array of phase-space points and return
    real values of the same shape. ``bound``, when given, maps an array of
    local cells (B, 4 columns u0, u1, v0, v1) to rigorous upper bounds on
    |f| over each cell; cells proved negligible are dropped without
    evaluation, which is what makes large mostly-empty domains affordable.

    Stops when the summed error estimate falls below
    max(rel_tol * |integral|, abs_tol). Raises NonDecayingIntegrand when the
    boundary samples are not below rel_tol times the interior peak, and
    MaxDepthExceeded when the tolerance is unreachable within max_depth.
    """
    rot = complex(math.cos(spec.rotation), math.sin(spec.rotation))
    hu, hv = spec.half_width_u, spec.half_width_v
    center = complex(spec.center)

    # seed grid
    n0 = spec.initial_cells
    us = np.linspace(-hu, hu, n0 + 1)
    vs = np.linspace(-hv, hv, n0 + 1)
    seeds = [
        (us[i], us[i + 1], vs[j], vs[j + 1], 0)
        for i in range(n0)
        for j in range(n0)
    ]

    dead_err = 0.0
    total_area = 4.0 * hu * hv

    def prune_dead(cells):
        """Split off provably negligible cells; returns surviving cells."""
        nonlocal dead_err
        if bound is None or not cells:
            return cells
        arr = np.asarray([c[:4] for c in cells], dtype=float)
        ub = np.asarray(bound(arr), dtype=float)
        area = (arr[:, 1] - arr[:, 0]) * (arr[:, 3] - arr[:, 2])
        contrib = ub * area
        # negligible relative to the per-area share of the absolute floor
        floor = max(spec.abs_tol, spec.rel_tol * 1e-3)
        keep = []
        for c, ct, a in zip(cells, contrib, area):
            if ct <= 0.02 * floor * (a / total_area) or ct < 1e-300:
                dead_err += ct
            else:
                keep.append(c)
        return keep

    # pre-split live cells down to the resolve scale before trusting errors
    if spec.resolve_scale is not None:
        stack = list(seeds)
        seeds = []
        while stack:
            chunk = prune_dead(stack[:_BATCH])
            del stack[:_BATCH]
            for u0, u1, v0, v1, d in chunk:
                if (
                    max(u1 - u0, v1 - v0) > spec.resolve_scale
                    and d < spec.max_depth
                ):
                    um, vm = 0.5 * (u0 + u1), 0.5 * (v0 + v1)
                    stack.extend(
                        (
                            (u0, um, v0, vm, d + 1),
                            (um, u1, v0, vm, d + 1),
                            (u0, um, vm, v1, d + 1),
                            (um, u1, vm, v1, d + 1),
                        )
                    )
                else:
                    seeds.append((u0, u1, v0, v1, d))
            if len(seeds) + len(stack) > _MAX_SEED_CELLS:
                raise MaxDepthExceeded(
                    "resolve_scale pre-refinement exceeded the cell budget; "
                    "the domain is too large for the requested resolution"
                )
    else:
        seeds = prune_dead(seeds)

    heap: list[tuple[float, int, tuple]] = []
    counter = 0
    total_val = 0.0
    total_err = dead_err
    evals = 0
    n_cells = 0
    depth_seen = 0
    peak = 0.0

    def push_evaluated(cells):
        nonlocal counter, total_val, total_err, evals, n_cells, depth_seen, peak
        if not cells:
            return
        boxes = np.asarray([c[:4] for c in cells], dtype=float)
        q1, q2, fmax, ne = _eval_batch(f, rot, center, boxes)
        evals += ne
        n_cells += len(cells)
        peak = max(peak, float(fmax.max()))
        err = np.abs(q2 - q1)
        for c, v, e in zip(cells, q2, err):
            depth_seen = max(depth_seen, c[4])
            total_val += float(v)
            total_err += float(e)
            heapq.heappush(heap, (-float(e), counter, (c, float(v), float(e))))
            counter += 1

    for i in range(0, len(seeds), _BATCH):
        push_evaluated(seeds[i : i + _BATCH])

    # boundary decay precondition, judged against the seed-level peak
    edge_t = np.linspace(-1.0, 1.0, 65)
    edges = np.concatenate(
        [
            center + rot * (edge_t * hu + 1j * hv),
            center + rot * (edge_t * hu - 1j * hv),
            center + rot * (hu + 1j * edge_t * hv),
            center + rot * (-hu + 1j * edge_t * hv),
        ]
    )
    edge_max = float(np.abs(np.asarray(f(edges), dtype=float)).max())
    evals += edges.size
    if edge_max > spec.rel_tol * peak + 1e-300:
        raise NonDecayingIntegrand(
            f"boundary magnitude {edge_max:.3e} exceeds rel_tol x peak "
            f"({spec.rel_tol:.1e} x {peak:.3e}); enlarge the domain"
        )

    _CELL_BUDGET = 500_000
    while True:
        target = max(spec.rel_tol * abs(total_val), spec.abs_tol, 5e-16)
        if total_err <= target:
            break
        batch = []
        while heap and len(batch) < _BATCH:
            _, _, (c, v, e) = heapq.heappop(heap)
            if c[4] >= spec.max_depth:
                # unsplittable; its value and error stay in the totals
                continue
            batch.append((c, v, e))
        if not batch:
            raise MaxDepthExceeded(
                f"error estimate {total_err:.3e} above target {target:.3e} "
                f"with no cell left to split (max depth {spec.max_depth})"
            )
        if n_cells > _CELL_BUDGET:
            raise MaxDepthExceeded(
                f"cell budget exhausted at error {total_err:.3e} "
                f"(target {target:.3e})"
            )
        children = []
        for (u0, u1, v0, v1, d), v, e in batch:
            total_val -= v
            total_err -= e
            um, vm = 0.5 * (u0 + u1), 0.5 * (v0 + v1)
            children.extend(
                (
                    (u0, um, v0, vm, d + 1),
                    (um, u1, v0, vm, d + 1),
                    (u0, um, vm, v1, d + 1),
                    (um, u1, vm, v1, d + 1),
                )
            )
        push_evaluated(prune_dead(children))

    return IntegrationResult(
        value=total_val,
        error=total_err,
        evaluations=evals,
        cells=n_cells,
        depth=depth_seen,
    )
