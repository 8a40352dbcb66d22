"""Command-line front end: figure sweeps, single-point evaluations, Wigner
grids, cat benchmarking, with CSV/JSON export.

Configuration precedence is flag > environment (MACROMECH_<KEY>) > config
file > paper defaults. Sweep rows are evaluated by a worker pool when
--jobs > 1 and always emitted in grid order, so identical configs produce
byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 numerical failure. Errors
print one machine-parsable JSON line on stderr.
"""

from __future__ import annotations

import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import click
import numpy as np

from .cubic import CubicParams, conditional_state
from .macroscopicity import (
    GaussianState,
    InvalidCovariance,
    cat_equivalent_amplitude,
    char_function,
    eq9_closed_form,
    measure_I_coherent_exact,
    measure_I_gaussian,
    measure_I_quadrature,
    occupation_from_temperature,
    temperature_from_occupation,
    thermal_mean_phonon,
)
from .numerics import MaxDepthExceeded, NonDecayingIntegrand
from .quartic import QuarticParams, conditional_state_quartic, squeeze_degree
from .states import (
    SqueezedSuperposition,
    TruncationInsufficient,
    ZeroNorm,
    make_cat,
    mean_phonon,
    normalize,
)
from .wigner import wigner

ENV_PREFIX = "MACROMECH_"

#: Fixed sweep-table schema; plot tooling depends on these exact names.
SWEEP_COLUMNS = (
    "k",
    "nbar",
    "t",
    "x",
    "alpha",
    "beta0",
    "I",
    "M",
    "raw_integral",
    "error_estimate",
    "method",
)

_NUMERICAL_ERRORS = (
    NonDecayingIntegrand,
    MaxDepthExceeded,
    TruncationInsufficient,
    ZeroNorm,
    InvalidCovariance,
    ArithmeticError,
)


class ConfigError(Exception):
    pass


def _fmt(value) -> str:
    """Fixed 12-significant-digit float formatting for deterministic files."""
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    return f"{float(value):.12g}"


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRange:
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError(f"sweep count must be >= 1, got {self.count}")
        if self.count > 1 and not self.stop >= self.start:
            raise ConfigError("sweep range must be ordered (stop >= start)")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"scale must be linear or log, got {self.scale!r}")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ConfigError("log scale requires positive endpoints")

    def points(self) -> np.ndarray:
        if self.count == 1:
            return np.asarray([self.start])
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters; every field maps to a config-file key."""

    model: str = "end-mirror"
    alpha: float = 0.8
    beta0: float = 2.0
    t: float = math.pi
    x: float = 0.0
    nbar: float = 0.0
    k: float = 1.0
    k_start: float = 0.0
    k_stop: float = 5.0
    k_count: int = 26
    k_scale: str = "linear"
    nbar_start: float = 1e-5
    nbar_stop: float = 1e-1
    nbar_count: int = 17
    nbar_scale: str = "log"
    nbars: str = "0.1,0.01,0.0001"
    r_start: float = 0.0
    r_stop: float = 3.0
    r_count: int = 31
    zeta1: float = 2.0
    n_ph: int = 0  # 0 selects the automatic truncation
    tolerance: float = 1e-6
    max_over: str = "none"
    t_count: int = 13
    x_count: int = 9
    freq_convention: str = "angular"
    omega_m: float = 1e6
    out: str = ""
    format: str = "csv"
    jobs: int = 1
    # gaussian-model inputs
    cov_xx: float = 0.5
    cov_xp: float = 0.0
    cov_pp: float = 0.5
    mean_re: float = 0.0
    mean_im: float = 0.0

    def __post_init__(self):
        if self.model not in ("end-mirror", "membrane", "gaussian", "cat"):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if not (0.0 < self.tolerance < 1.0):
            raise ConfigError("tolerance must lie in (0, 1)")
        if self.max_over not in ("none", "t", "x", "t+x"):
            raise ConfigError(f"max_over must be one of none,t,x,t+x")
        if self.freq_convention not in ("angular", "ordinary"):
            raise ConfigError("freq_convention must be angular or ordinary")
        if self.jobs < 0:
            raise ConfigError("jobs must be >= 0")
        for key in ("k_scale", "nbar_scale"):
            if getattr(self, key) not in ("linear", "log"):
                raise ConfigError(f"{key} must be linear or log")
        # construct the ranges so their own validation runs
        self.k_range()
        self.nbar_range()

    def k_range(self) -> SweepRange:
        return SweepRange(self.k_start, self.k_stop, self.k_count, self.k_scale)

    def nbar_range(self) -> SweepRange:
        return SweepRange(
            self.nbar_start, self.nbar_stop, self.nbar_count, self.nbar_scale
        )

    def nbar_list(self) -> list[float]:
        try:
            vals = [float(v) for v in self.nbars.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad nbars list {self.nbars!r}: {exc}") from None
        if not vals or any(v < 0 for v in vals):
            raise ConfigError("nbars must be a comma list of occupations >= 0")
        return vals

    def resolved_n_ph(self) -> int | None:
        return None if self.n_ph == 0 else self.n_ph


def config_to_text(cfg: RunConfig) -> str:
    lines = [f"{f.name} = {getattr(cfg, f.name)}" for f in fields(RunConfig)]
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> RunConfig:
    return replace(RunConfig(), **parse_config_items(text))


def parse_config_items(text: str) -> dict:
    """Flat key = value lines; '#' starts a comment; keys match RunConfig."""
    types = {f.name: f.type for f in fields(RunConfig)}
    casts = {"str": str, "float": float, "int": int}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in types:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        try:
            out[key] = casts[types[key]](value)
        except ValueError:
            raise ConfigError(
                f"line {lineno}: cannot parse {value!r} as {types[key]} for {key}"
            ) from None
    return out


def resolve_config(
    config_path: str | None, flag_items: dict, defaults: dict | None = None
) -> RunConfig:
    """flag > environment > config file > per-command defaults > defaults."""
    items: dict = dict(defaults or {})
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                items.update(parse_config_items(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}") from None
    types = {f.name: f.type for f in fields(RunConfig)}
    casts = {"str": str, "float": float, "int": int}
    for name, typ in types.items():
        env = os.environ.get(ENV_PREFIX + name.upper())
        if env is not None:
            try:
                items[name] = casts[typ](env)
            except ValueError:
                raise ConfigError(
                    f"environment {ENV_PREFIX + name.upper()}={env!r} is not a {typ}"
                ) from None
    for name, value in flag_items.items():
        if value is not None:
            items[name] = value
    try:
        return replace(RunConfig(), **items)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# row evaluation
# ---------------------------------------------------------------------------


def _end_mirror_row(args) -> dict:
    """One sweep point of the end-mirror model, exact analytic route."""
    k, nbar, t, x, alpha, beta0, n_ph = args
    start = time.perf_counter()
    params = CubicParams(k=k, t=t, alpha=alpha, beta0=beta0, nbar=nbar, x=x, n_ph=n_ph)
    state = conditional_state(params)
    res = measure_I_coherent_exact(state, nbar=nbar)
    return {
        "k": k,
        "nbar": nbar,
        "t": t,
        "x": x,
        "alpha": alpha,
        "beta0": beta0,
        "I": res.I,
        "M": res.M,
        "raw_integral": res.raw_integral,
        "error_estimate": res.error_estimate,
        "method": res.method,
        "wall_time": time.perf_counter() - start,
    }


def _end_mirror_max_row(args) -> dict:
    """Fig.2(c)-style row: maximize I over a t and/or x grid at fixed nbar."""
    k, nbar, alpha, beta0, n_ph, max_over, t_count, x_count = args
    start = time.perf_counter()
    ts = (
        np.linspace(0.5 * math.pi, 1.5 * math.pi, t_count)
        if max_over in ("t", "t+x")
        else [math.pi]
    )
    xs = np.linspace(-2.0, 2.0, x_count) if max_over in ("x", "t+x") else [0.0]
    best = None
    for t in ts:
        for x in xs:
            params = CubicParams(
                k=k, t=float(t), alpha=alpha, beta0=beta0, nbar=nbar, x=float(x), n_ph=n_ph
            )
            res = measure_I_coherent_exact(conditional_state(params), nbar=nbar)
            if best is None or res.I > best[0].I:
                best = (res, float(t), float(x))
    res, t, x = best
    return {
        "k": k,
        "nbar": nbar,
        "t": t,
        "x": x,
        "alpha": alpha,
        "beta0": beta0,
        "I": res.I,
        "M": res.M,
        "raw_integral": res.raw_integral,
        "error_estimate": res.error_estimate,
        "method": res.method,
        "wall_time": time.perf_counter() - start,
    }


def _membrane_row(args) -> dict:
    k, t, x, alpha, n_ph, tolerance = args
    start = time.perf_counter()
    params = QuarticParams(k=k, t=t, alpha=alpha, x=x, n_ph=n_ph)
    state = conditional_state_quartic(params)
    chi = char_function(state)
    res = measure_I_quadrature(chi, rel_tol=tolerance, abs_tol=tolerance)
    return {
        "k": k,
        "nbar": 0.0,
        "t": t,
        "x": x,
        "alpha": alpha,
        "beta0": "",
        "I": res.I,
        "M": res.M,
        "raw_integral": res.raw_integral,
        "error_estimate": res.error_estimate,
        "method": res.method,
        "wall_time": time.perf_counter() - start,
    }


def _map_rows(worker, args_list, jobs: int) -> list[dict]:
    if jobs == 0:
        jobs = os.cpu_count() or 1
    if jobs > 1 and len(args_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, args_list, chunksize=4))
    return [worker(a) for a in args_list]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _write_table(rows: list[dict], columns: tuple, cfg: RunConfig, default_name: str):
    path = cfg.out or default_name
    if cfg.format == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(row.get(col, "")) for col in columns))
        payload = "\n".join(lines) + "\n"
    else:
        objs = []
        for row in rows:
            obj = {}
            for col in columns:
                val = row.get(col, "")
                obj[col] = val if isinstance(val, str) else float(_fmt(val))
            objs.append(obj)
        payload = json.dumps(objs, indent=1, sort_keys=False) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)
    total = sum(row.get("wall_time", 0.0) for row in rows)
    click.echo(f"wrote {len(rows)} rows to {path} ({total:.2f}s compute)", err=True)


def _check_rows(rows: list[dict]):
    for row in rows:
        if "I" in row and "M" in row and not isinstance(row["M"], str):
            if row["I"] > row["M"] + 1e-6 + row.get("error_estimate", 0.0):
                raise ArithmeticError(
                    f"row violates I <= M: I={row['I']} M={row['M']}"
                )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _common_options(fn):
    fn = click.option("--config", "config_path", type=str, default=None,
                      help="flat key = value config file")(fn)
    fn = click.option("--out", type=str, default=None, help="output path")(fn)
    fn = click.option("--format", "format_", type=click.Choice(["csv", "json"]),
                      default=None, help="output format")(fn)
    fn = click.option("--jobs", type=int, default=None,
                      help="worker processes (0 = all cores)")(fn)
    fn = click.option("--tolerance", type=float, default=None,
                      help="relative tolerance for quadrature methods")(fn)
    fn = click.option("--freq-convention", type=click.Choice(["angular", "ordinary"]),
                      default=None, help="reading of quoted mechanical frequencies")(fn)
    return fn


def _collect(config_path, _defaults: dict | None = None, **flag_items) -> RunConfig:
    renames = {"format_": "format"}
    items = {renames.get(k, k): v for k, v in flag_items.items()}
    return resolve_config(config_path, items, defaults=_defaults)


@click.group()
def main():
    """Optomechanical cat states and their phase-space macroscopicity."""


@main.command("fig1b")
@_common_options
@click.option("--k-start", type=float, default=None)
@click.option("--k-stop", type=float, default=None)
@click.option("--k-count", type=int, default=None)
@click.option("--k-scale", type=click.Choice(["linear", "log"]), default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--beta0", type=float, default=None)
@click.option("--t", type=float, default=None)
@click.option("--x", type=float, default=None)
def cmd_fig1b(config_path, **flags):
    """I and M against the coupling k for the zero-temperature end mirror."""
    cfg = _collect(config_path, **flags)
    ks = cfg.k_range().points()
    args = [
        (float(k), 0.0, cfg.t, cfg.x, cfg.alpha, cfg.beta0, cfg.resolved_n_ph())
        for k in ks
    ]
    rows = _map_rows(_end_mirror_row, args, cfg.jobs)
    _check_rows(rows)
    _write_table(rows, SWEEP_COLUMNS, cfg, "fig1b.csv")


@main.command("fig2")
@click.argument("mode", type=click.Choice(["a", "b", "c"]))
@_common_options
@click.option("--k", type=float, default=None)
@click.option("--k-start", type=float, default=None)
@click.option("--k-stop", type=float, default=None)
@click.option("--k-count", type=int, default=None)
@click.option("--nbars", type=str, default=None,
              help="comma list of occupations for modes a/b")
@click.option("--nbar-start", type=float, default=None)
@click.option("--nbar-stop", type=float, default=None)
@click.option("--nbar-count", type=int, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--t", type=float, default=None)
@click.option("--x", type=float, default=None)
@click.option("--max-over", type=click.Choice(["none", "t", "x", "t+x"]), default=None)
def cmd_fig2(mode, config_path, **flags):
    """Thermal-input sweeps at beta0 = 0: modes a/b sweep k per occupation,
    mode c sweeps the occupation at fixed k (optionally maximizing over a
    time or outcome grid) and reports both temperature conventions."""
    defaults = {"k": 0.7} if mode == "c" else None
    cfg = _collect(config_path, _defaults=defaults, **flags)
    if mode in ("a", "b"):
        ks = cfg.k_range().points()
        args = [
            (float(k), nb, cfg.t, cfg.x, cfg.alpha, 0.0, cfg.resolved_n_ph())
            for nb in cfg.nbar_list()
            for k in ks
        ]
        rows = _map_rows(_end_mirror_row, args, cfg.jobs)
        _check_rows(rows)
        _write_table(rows, SWEEP_COLUMNS, cfg, f"fig2{mode}.csv")
        return
    nbars = cfg.nbar_range().points()
    args = [
        (cfg.k, float(nb), cfg.alpha, 0.0, cfg.resolved_n_ph(), cfg.max_over,
         cfg.t_count, cfg.x_count)
        for nb in nbars
    ]
    rows = _map_rows(_end_mirror_max_row, args, cfg.jobs)
    _check_rows(rows)
    _write_table(rows, SWEEP_COLUMNS, cfg, "fig2c.csv")
    for nb in (nbars[0], nbars[-1]):
        t_ang = temperature_from_occupation(float(nb), cfg.omega_m, "angular")
        t_ord = temperature_from_occupation(float(nb), cfg.omega_m, "ordinary")
        click.echo(
            f"nbar={_fmt(nb)}: T={_fmt(t_ang)} K (angular) / {_fmt(t_ord)} K "
            f"(ordinary) at omega_m={_fmt(cfg.omega_m)}",
            err=True,
        )


@main.command("fig3")
@click.argument("mode", type=click.Choice(["a", "b", "d"]))
@_common_options
@click.option("--k", type=float, default=None)
@click.option("--k-start", type=float, default=None)
@click.option("--k-stop", type=float, default=None)
@click.option("--k-count", type=int, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--t", type=float, default=None)
@click.option("--x", type=float, default=None)
@click.option("--r-start", type=float, default=None)
@click.option("--r-stop", type=float, default=None)
@click.option("--r-count", type=int, default=None)
@click.option("--verify/--no-verify", default=False,
              help="mode d: cross-check the closed form against quadrature")
def cmd_fig3(mode, config_path, verify, **flags):
    """Membrane figures: a) squeeze degree vs k, b) conditional weight
    distribution, d) measure vs squeeze degree from the closed form."""
    defaults = {"alpha": 0.7, "x": 1.0}
    if mode == "a":
        defaults.update({"k_stop": 30.0, "k_count": 61})
    cfg = _collect(config_path, _defaults=defaults, **flags)
    if mode == "a":
        ks = cfg.k_range().points()
        rows = []
        for k in ks:
            rows.append(
                {
                    "k": float(k),
                    "zeta0_abs": squeeze_degree(0, cfg.t, float(k)).zeta_abs,
                    "zeta1_abs": squeeze_degree(1, cfg.t, float(k)).zeta_abs,
                }
            )
        _write_table(rows, ("k", "zeta0_abs", "zeta1_abs"), cfg, "fig3a.csv")
        return
    if mode == "b":
        params = QuarticParams(
            k=cfg.k, t=cfg.t, alpha=cfg.alpha, x=cfg.x, n_ph=cfg.resolved_n_ph()
        )
        state = conditional_state_quartic(params)
        rows = [
            {
                "n": float(n),
                "weight_abs": abs(w),
                "weight_re": w.real,
                "weight_im": w.imag,
                "zeta_abs": abs(z),
            }
            for n, (w, z) in enumerate(zip(state.weights, state.labels))
        ]
        _write_table(
            rows, ("n", "weight_abs", "weight_re", "weight_im", "zeta_abs"), cfg,
            "fig3b.csv",
        )
        return
    rs = SweepRange(cfg.r_start, cfg.r_stop, cfg.r_count).points()
    rows = []
    for r in rs:
        res = eq9_closed_form(float(r))
        rows.append(
            {
                "r": float(r),
                "I": res.I,
                "M": res.M,
                "raw_integral": res.raw_integral,
                "error_estimate": res.error_estimate,
                "method": res.method,
            }
        )
    if verify:
        for r in (0.5, 1.0, 2.0):
            state = normalize(
                SqueezedSuperposition(
                    np.asarray([1.0, 1.0], complex), np.asarray([0.0, r], complex)
                )
            )
            quad = measure_I_quadrature(
                char_function(state), rel_tol=1e-8, abs_tol=1e-8
            )
            diff = abs(quad.I - eq9_closed_form(r).I)
            if diff > 1e-6:
                raise ArithmeticError(
                    f"closed form vs quadrature differ by {diff:.2e} at r={r}"
                )
            click.echo(f"verify r={r}: |closed - quadrature| = {diff:.2e}", err=True)
    _write_table(
        rows, ("r", "I", "M", "raw_integral", "error_estimate", "method"), cfg,
        "fig3d.csv",
    )


@main.command("wigner")
@_common_options
@click.option("--model", type=click.Choice(["end-mirror", "membrane", "cat", "vacuum"]),
              default=None)
@click.option("--k", type=float, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--beta0", type=float, default=None)
@click.option("--t", type=float, default=None)
@click.option("--x", type=float, default=None)
@click.option("--zeta1", type=float, default=None, help="membrane squeeze degree")
@click.option("--grid-n", type=int, default=128, help="grid points per axis")
@click.option("--extent", type=float, default=None, help="grid half-width")
def cmd_wigner(config_path, model, grid_n, extent, **flags):
    """Wigner function of a model state as an (x, p, W) table."""
    vacuum = model == "vacuum"
    cfg = _collect(config_path, model=None if vacuum else model, **flags)
    if vacuum:
        state = normalize(
            SqueezedSuperposition(np.asarray([1.0], complex), np.asarray([0.0], complex))
        )
    elif cfg.model == "end-mirror":
        params = CubicParams(
            k=cfg.k, t=cfg.t, alpha=cfg.alpha, beta0=cfg.beta0, x=cfg.x,
            n_ph=cfg.resolved_n_ph(),
        )
        state = conditional_state(params)
    elif cfg.model == "membrane":
        state = normalize(
            SqueezedSuperposition(
                np.asarray([1.0, 1.0], complex),
                np.asarray([0.0, cfg.zeta1], complex),
            )
        )
    elif cfg.model == "cat":
        state = make_cat(cfg.alpha)
    else:
        raise ConfigError(f"wigner does not support model {cfg.model!r}")
    grid = wigner(state, extent=extent, nx=grid_n, n_p=grid_n)
    rows = [
        {"x": float(xv), "p": float(pv), "W": float(grid.values[i, j])}
        for i, pv in enumerate(grid.ps)
        for j, xv in enumerate(grid.xs)
    ]
    _write_table(rows, ("x", "p", "W"), cfg, "wigner.csv")


@main.command("cat-benchmark")
@click.argument("value", type=float)
def cmd_cat_benchmark(value):
    """Equivalent even-cat amplitude for a measure value I."""
    alpha = cat_equivalent_amplitude(value)
    m = alpha * alpha * math.tanh(alpha * alpha) if alpha > 0 else 0.0
    click.echo(f"I = {_fmt(value)}")
    click.echo(f"alpha = {_fmt(alpha)}")
    click.echo(f"M = {_fmt(m)}  (cat saturates I = M)")


@main.command("eval")
@_common_options
@click.option("--model", type=click.Choice(["end-mirror", "membrane", "gaussian", "cat"]),
              default=None)
@click.option("--k", type=float, default=None)
@click.option("--nbar", type=float, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--beta0", type=float, default=None)
@click.option("--t", type=float, default=None)
@click.option("--x", type=float, default=None)
def cmd_eval(config_path, **flags):
    """Single-point evaluation of I and M for any model."""
    cfg = _collect(config_path, **flags)
    if cfg.model == "end-mirror":
        row = _end_mirror_row(
            (cfg.k, cfg.nbar, cfg.t, cfg.x, cfg.alpha, cfg.beta0, cfg.resolved_n_ph())
        )
    elif cfg.model == "membrane":
        row = _membrane_row(
            (cfg.k, cfg.t, cfg.x, cfg.alpha, cfg.resolved_n_ph(), cfg.tolerance)
        )
    elif cfg.model == "gaussian":
        g = GaussianState(
            mean=complex(cfg.mean_re, cfg.mean_im),
            cov=np.asarray([[cfg.cov_xx, cfg.cov_xp], [cfg.cov_xp, cfg.cov_pp]]),
        )
        res = measure_I_gaussian(g)
        row = {
            "k": "", "nbar": "", "t": "", "x": "", "alpha": "", "beta0": "",
            "I": res.I, "M": res.M, "raw_integral": res.raw_integral,
            "error_estimate": res.error_estimate, "method": res.method,
        }
    else:
        cat = make_cat(cfg.alpha)
        res = measure_I_coherent_exact(cat)
        row = {
            "k": "", "nbar": "", "t": "", "x": "", "alpha": cfg.alpha, "beta0": "",
            "I": res.I, "M": res.M, "raw_integral": res.raw_integral,
            "error_estimate": res.error_estimate, "method": res.method,
        }
    _check_rows([row])
    if cfg.out:
        _write_table([row], SWEEP_COLUMNS, cfg, "eval.csv")
    else:
        click.echo(",".join(SWEEP_COLUMNS))
        click.echo(",".join(_fmt(row.get(c, "")) for c in SWEEP_COLUMNS))


def entry():
    try:
        main(standalone_mode=False)
    except (ConfigError, click.UsageError, click.BadParameter) as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        sys.exit(2)
    except _NUMERICAL_ERRORS as exc:
        print(
            json.dumps({"error": "numerical", "message": f"{type(exc).__name__}: {exc}"}),
            file=sys.stderr,
        )
        sys.exit(3)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(1)


if __name__ == "__main__":
    entry()
