"""Grid evaluation over (r, 2 pi omega0 / a) and the squeezing / no-squeezing boundary.

All points use the narrowband limit, where a scaled frequency ``x`` fixes
``I_c = 1 / (1 - e^{-x})``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, SolverError, ValidationError
from .modes import ModeIntegrals
from .single_mode import (
    CRITICAL_ASYMPTOTE,
    Region,
    SqueezeScenario,
    critical_scaled_frequency,
    purity_product,
    vmax_vmin,
)
from .two_mode import log_negativity

SWEEP_COLUMNS = ("r", "x", "v_min", "purity_product", "nu_minus", "log_negativity", "region")
CRITICAL_COLUMNS = ("r", "x_critical", "asymptote")


def parse_range(text: str) -> np.ndarray:
    """``"lo:hi:steps"`` -> ``linspace(lo, hi, steps)``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"range must look like lo:hi:steps, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValidationError(f"bad range {text!r}: {exc}") from None
    if steps < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValidationError(f"range {text!r} must have finite ends and steps >= 1")
    if steps > 1 and not hi > lo:
        raise ValidationError(f"range {text!r} needs hi > lo")
    return np.linspace(lo, hi, steps)


def integrals_at(x: float) -> ModeIntegrals:
    """Narrowband integrals at scaled frequency ``x = 2 pi omega0 / a``."""
    if not x > 0:
        raise DomainError("scaled frequency must be positive")
    return ModeIntegrals.narrowband(-1 / math.expm1(-x))


def v_min_at(r: float, x: float) -> float:
    return vmax_vmin(SqueezeScenario(r, integrals_at(x)))[1]


@dataclass(frozen=True)
class SweepRow:
    r: float
    x: float
    v_min: float
    purity_product: float
    nu_minus: float
    log_negativity: float
    region: str

    def values(self):
        return tuple(getattr(self, c) for c in SWEEP_COLUMNS)


def sweep_point(r: float, x: float, tol: float = 1e-9) -> SweepRow:
    integ = integrals_at(x)
    s = SqueezeScenario(r, integ)
    v_min = vmax_vmin(s)[1]
    ent = log_negativity(r, integ)
    if abs(v_min - 1) <= tol:
        region = Region.CRITICAL
    elif v_min < 1:
        region = Region.SQUEEZING
    else:
        region = Region.NO_SQUEEZING
    return SweepRow(r, x, v_min, purity_product(s), ent.nu_minus, ent.log_negativity, region.value)


def sweep(r_values: Sequence[float], x_values: Sequence[float], workers: int = 4, tol: float = 1e-9) -> List[SweepRow]:
    """Rows in ``r``-major order; the worker pool never changes the ordering."""
    points = [(float(r), float(x)) for r in r_values for x in x_values]
    if workers <= 1:
        return [sweep_point(r, x, tol) for r, x in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: sweep_point(p[0], p[1], tol), points))


def critical_curve(r_values: Iterable[float]):
    """``(r, x_critical, asymptote)`` rows for ``r > 0``."""
    return [(float(r), critical_scaled_frequency(r), CRITICAL_ASYMPTOTE) for r in r_values]


def boundary_crossing(r: float, lo: float, hi: float, quantity: str = "v_min") -> float:
    """Scaled frequency in ``[lo, hi]`` where ``V_min`` (or ``E_N``) crosses its threshold.

    ``quantity='log_negativity'`` tracks ``nu_minus = 1`` from the covariance
    side, independently of ``V_min``.
    """
    if quantity == "v_min":
        f = lambda x: v_min_at(r, x) - 1
    elif quantity == "log_negativity":
        f = lambda x: log_negativity(r, integrals_at(x)).nu_minus - 1
    else:
        raise ValidationError(f"unknown boundary quantity {quantity!r}")
    if f(lo) * f(hi) > 0:
        raise SolverError(f"no {quantity} crossing in [{lo}, {hi}] at r={r}")
    return brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def boundary_from_grid(rows: Sequence[SweepRow], quantity: str = "v_min"):
    """For each ``r`` on a sweep grid, bracket the sign flip from the rows and refine it."""
    by_r = {}
    for row in rows:
        by_r.setdefault(row.r, []).append(row)
    out = []
    for r, group in by_r.items():
        group.sort(key=lambda row: row.x)
        if quantity == "v_min":
            vals = [row.v_min - 1 for row in group]
        else:
            vals = [row.nu_minus - 1 for row in group]
        for a, b, va, vb in zip(group, group[1:], vals, vals[1:]):
            if va * vb <= 0 and va != vb:
                out.append((r, boundary_crossing(r, a.x, b.x, quantity)))
                break
    return out
