"""Inertial homodyne statistics of an accelerated coherent source and single-mode squeezer.

Variances are in shot-noise units (vacuum variance 1).  Squeezer results
depend on the packet only through ``I_c``; ``I_s = I_c - 1`` throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .modes import AccelerationFrame, ModeIntegrals, narrowband_integrals

#: ``2 pi omega0 / a`` of the critical curve as r -> infinity, 2 ln(1 + sqrt 2).
CRITICAL_ASYMPTOTE = 2 * math.log1p(math.sqrt(2))


@dataclass(frozen=True)
class QuadratureStats:
    mean: float
    variance: float
    phase: float


@dataclass(frozen=True)
class SqueezeScenario:
    """Squeeze ``r`` applied by the accelerated object to a packet with ``integrals``."""

    r: float
    integrals: ModeIntegrals
    frame: Optional[AccelerationFrame] = None

    def __post_init__(self):
        if not math.isfinite(self.r):
            raise DomainError("squeezing factor must be finite")

    @classmethod
    def narrowband(cls, r: float, omega0: float, frame: AccelerationFrame) -> "SqueezeScenario":
        return cls(r, narrowband_integrals(omega0, frame), frame)

    @property
    def excess(self) -> float:
        """``4 I_c (I_c - 1)``, the Unruh noise weight."""
        ic = self.integrals.i_c
        return 4 * ic * (ic - 1)


class Region(enum.Enum):
    SQUEEZING = "squeezing"
    NO_SQUEEZING = "no_squeezing"
    CRITICAL = "critical"


@dataclass(frozen=True)
class RegionClass:
    kind: Region
    v_min: float


def coherent_quadrature(beta: complex, phi: float, integrals: ModeIntegrals) -> QuadratureStats:
    """Displacing the Rindler mode by ``beta`` is seen inertially as a coherent state
    of amplitude ``sqrt(I_c + I_s) beta``; the variance stays at shot noise."""
    beta = complex(beta)
    mean = math.sqrt(integrals.total) * 2 * (beta * complex(math.cos(phi), -math.sin(phi))).real
    return QuadratureStats(mean=mean, variance=1.0, phase=phi)


def squeezer_variance(s: SqueezeScenario, phi):
    """Detected quadrature variance ``V(phi)``; pi-periodic, accepts scalar or array ``phi``."""
    r, k = s.r, s.excess
    ic = s.integrals.i_c
    ch = math.cosh(r)
    chm1 = 2 * math.sinh(0.5 * r) ** 2
    # cosh 2r - 2 cosh r + 1 == 2 cosh r (cosh r - 1)
    base = math.cosh(2 * r) + k * 2 * ch * chm1
    amp = 2 * math.sinh(r) * ((2 * ic - 1) ** 2 * ch - k)
    out = base + amp * np.cos(2 * np.asarray(phi, dtype=float))
    return float(out) if out.ndim == 0 else out


def squeezer_quadrature(s: SqueezeScenario, phi: float) -> QuadratureStats:
    return QuadratureStats(mean=0.0, variance=squeezer_variance(s, phi), phase=phi)


def _v_extremes(r: float, k: float):
    v0 = math.exp(2 * r) + k * math.expm1(r) ** 2
    v90 = math.exp(-2 * r) + k * math.expm1(-r) ** 2
    return v0, v90


def vmax_vmin(s: SqueezeScenario):
    """``(V_max, V_min)``.

    For ``r >= 0`` these sit at ``phi = 0`` and ``phi = pi/2``; for ``r < 0`` the
    two phases swap roles and the pair is reordered accordingly.
    """
    v0, v90 = _v_extremes(s.r, s.excess)
    return (v0, v90) if v0 >= v90 else (v90, v0)


def purity_product(s: SqueezeScenario) -> float:
    """``V_max V_min``; equals 1 only for ``r = 0`` or ``I_c = 1``."""
    ic = s.integrals.i_c
    ch = math.cosh(s.r)
    chm1 = 2 * math.sinh(0.5 * s.r) ** 2
    m = ic * (ic - 1)
    return 1 + 16 * m * chm1 * ch + 64 * m**2 * chm1**2


def critical_scaled_frequency(r: float) -> float:
    """``2 pi omega0 / a`` on the ``V_min = 1`` curve in the narrowband limit."""
    if not r > 0:
        raise DomainError("the critical curve exists only for r > 0")
    root = math.sqrt(1 + 1 / math.tanh(0.5 * r))
    return math.log((root + 1) / (root - 1))


def critical_frequency(r: float, frame: AccelerationFrame) -> float:
    """Central frequency ``omega0`` on the squeezing / no-squeezing boundary."""
    return frame.omega_from_scaled(critical_scaled_frequency(r))


def critical_ic(r: float) -> float:
    """``I_c`` at which ``V_min`` reaches 1 for squeeze ``r > 0``."""
    if not r > 0:
        raise DomainError("the critical curve exists only for r > 0")
    k = -math.expm1(-2 * r) / math.expm1(-r) ** 2
    return 0.5 * (1 + math.sqrt(1 + k))


def classify(r: float, omega0: float, frame: AccelerationFrame, tol: float = 1e-9) -> RegionClass:
    """Place ``(r, omega0)`` in the squeezing or no-squeezing region using narrowband ``V_min``."""
    if r < 0 or not omega0 > 0:
        raise DomainError("classify needs r >= 0 and omega0 > 0")
    _, v_min = vmax_vmin(SqueezeScenario.narrowband(r, omega0, frame))
    if abs(v_min - 1) <= tol:
        kind = Region.CRITICAL
    elif v_min < 1:
        kind = Region.SQUEEZING
    else:
        kind = Region.NO_SQUEEZING
    return RegionClass(kind, v_min)
