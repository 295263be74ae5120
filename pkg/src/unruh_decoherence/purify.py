"""Purification of the detected squeezer output by a mirror-image left-wedge displacement.

A local oscillator ``alpha`` in the right wedge is paired with ``gamma = z alpha^*``
in the left wedge (amplitude ratio ``z``, phase ``-arg alpha``).  The left-wedge
field reaches the inertial detector through the same Unruh modes, so the
detected mode becomes ``sum (L_w c_w - M_w d_w^dag)`` and, at the right ``z``,
the Unruh noise cancels and the detector sees a pure squeezed state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, SolverError
from .modes import AccelerationFrame, ModeIntegrals, WavePacket, mode_integrals, unruh_factors
from .unruh import e_quantities

Z_UPPER = 1 - 1e-6
SCAN_POINTS = 1000


@dataclass(frozen=True)
class PurificationScenario:
    r: float
    z: float
    integrals: ModeIntegrals
    frame: Optional[AccelerationFrame] = None

    def __post_init__(self):
        if not math.isfinite(self.r):
            raise DomainError("squeezing factor must be finite")
        if not (math.isfinite(self.z) and self.z >= 0):
            raise DomainError(f"displacement ratio z must be >= 0, got {self.z!r}")

    @property
    def normalizer(self) -> float:
        """Local-oscillator strength per ``|alpha|^2``: ``(1 + z^2)(I_c + I_s) - 4 z I_cs``."""
        i = self.integrals
        return (1 + self.z**2) * i.total - 4 * self.z * i.i_cs


def lm_factors(z: float, omega, frame: AccelerationFrame):
    """``(L_w, M_w) = (cosh r_w - z sinh r_w, z cosh r_w - sinh r_w)``."""
    ch2, sh2, _ = unruh_factors(omega, frame)
    ch, sh = np.sqrt(ch2), np.sqrt(sh2)
    lf, mf = ch - z * sh, z * ch - sh
    if np.ndim(lf) == 0:
        return float(lf), float(mf)
    return lf, mf


def purified_variance(s: PurificationScenario, phi):
    """Detected quadrature variance with the left-wedge displacement switched on.

    Packet weights enter as ``P = I_c - z I_cs`` and ``Q = z I_cs - I_s``, the
    overlaps of the detected mode with the ``c`` and ``d`` Unruh sectors.  At
    ``z = 0`` this is the plain squeezer variance.
    """
    d = s.normalizer
    if not d > 0:
        raise DomainError(f"local-oscillator strength must be positive, got {d!r}")
    i = s.integrals
    e = e_quantities(s.r, i)
    p = i.i_c - s.z * i.i_cs
    q = s.z * i.i_cs - i.i_s
    oscillating = e.e_cc * p**2 + e.e_dd * q**2 + 2 * e.e_cd_bar * p * q
    constant = e.e_c * p**2 + e.e_d * q**2 + 2 * e.e_cd * p * q
    out = 1 + 2 * (oscillating * np.cos(2 * np.asarray(phi, dtype=float)) + constant) / d
    return float(out) if out.ndim == 0 else out


def purity_residual(r: float, z: float, integrals: ModeIntegrals) -> float:
    """``V(0) V(pi/2) - 1`` of the purified output."""
    v0, v90 = purified_variance(PurificationScenario(r, z, integrals), [0.0, math.pi / 2])
    return float(v0 * v90 - 1)


def optimal_z_narrowband(i_c: float) -> float:
    """``z* = 2 sqrt(I_c (I_c - 1)) / (2 I_c - 1)``, which equals ``tanh 2 r_w0``."""
    if not i_c >= 1:
        raise DomainError(f"I_c must be >= 1, got {i_c!r}")
    return 2 * math.sqrt(i_c * (i_c - 1)) / (2 * i_c - 1)


def solve_z_integrals(
    r: float,
    integrals: ModeIntegrals,
    tol: float = 1e-12,
    scan_points: int = SCAN_POINTS,
) -> float:
    """Purifying ratio ``z`` in ``[0, 1 - 1e-6]`` for the given mode integrals.

    The residual ``V_max V_min - 1`` generally has two roots in ``[0, 1)``.  The
    smaller one depends on ``r`` and only balances the product; the larger one
    cancels the Unruh noise itself and reproduces the ideal squeezed state, so
    that root is returned.  A dense scan locates the last sign change and
    ``brentq`` refines it.
    """
    if not r > 0:
        raise DomainError("solve_z needs r > 0")
    zs = np.linspace(0.0, Z_UPPER, scan_points)
    res = np.array([purity_residual(r, z, integrals) for z in zs])
    if abs(res[0]) <= tol:
        # already pure without a left-wedge field (I_c -> 1); any further sign
        # changes would be rounding noise around zero
        return 0.0
    change = np.flatnonzero(np.sign(res[1:]) * np.sign(res[:-1]) < 0)
    if change.size == 0:
        raise SolverError(
            "no sign change of V_max V_min - 1 on [0, 1)",
            residual=float(np.min(np.abs(res))),
        )
    last_change = change[-1]
    lo, hi = zs[last_change], zs[last_change + 1]
    z = brentq(lambda t: purity_residual(r, t, integrals), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    final = abs(purity_residual(r, z, integrals))
    if final > 1e-9:
        raise SolverError(f"purification residual {final:.3e} above 1e-9", residual=final)
    return float(z)


def solve_z(packet: WavePacket, frame: AccelerationFrame, r: float, tol: float = 1e-12) -> float:
    """Purifying ratio for an exact packet; integrals are computed from ``packet``."""
    return solve_z_integrals(r, mode_integrals(packet, frame), tol=tol)


def residual_sign_changes(r: float, integrals: ModeIntegrals, scan_points: int = SCAN_POINTS) -> Sequence[float]:
    """Locations (grid midpoints) where ``V_max V_min - 1`` changes sign on ``[0, 1 - 1e-6]``."""
    zs = np.linspace(0.0, Z_UPPER, scan_points)
    res = np.array([purity_residual(r, z, integrals) for z in zs])
    idx = np.flatnonzero(np.sign(res[1:]) * np.sign(res[:-1]) < 0)
    return [0.5 * (zs[i] + zs[i + 1]) for i in idx]


@dataclass(frozen=True)
class TwoModePurityCheck:
    z: float
    symplectic_eigenvalues: tuple
    pure: bool
    note: str


def two_mode_purification_check(
    r: float,
    omega0: float,
    frame: AccelerationFrame,
    z: Optional[float] = None,
    alpha: float = 1e4,
    tol: float = 1e-3,
) -> TwoModePurityCheck:
    """Detect the two-mode squeezer output with mirror-image displacements on both movers.

    Uses the discretized oracle at a single narrowband node and reports the
    symplectic eigenvalues of the detected 4x4 covariance.  A mismatch is
    flagged in ``note`` rather than raised.
    """
    from .oracle import DiscretizedScenario, LocalOscillator, TwoSqueeze, detected_covariance
    from .two_mode import symplectic_spectrum

    ch2, _, _ = unruh_factors(omega0, frame)
    if z is None:
        z = optimal_z_narrowband(float(ch2))
    lo = LocalOscillator(amplitude=alpha, z=z)
    s = DiscretizedScenario.narrowband(omega0, frame, TwoSqueeze(r), lo=lo)
    nu = tuple(symplectic_spectrum(detected_covariance(s)))
    pure = all(abs(v - 1) < tol for v in nu)
    note = "pure at the single-mode z*" if pure else "two-mode output needs a different z than the single-mode z*"
    return TwoModePurityCheck(z=float(z), symplectic_eigenvalues=nu, pure=pure, note=note)
