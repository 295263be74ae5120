"""Accelerated frame, interaction wave packets and the packet-weighted Unruh integrals.

Every observable in this package depends on the wave packet only through three
numbers, the packet averages of cosh^2 r_w, sinh^2 r_w and cosh r_w sinh r_w,
where tanh r_w = exp(-pi w / a).  Frequencies are Rindler (proper-time)
frequencies in the same units as the acceleration ``a`` (c = hbar = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError, IntegrationError, ValidationError

#: Packets whose support reaches below ``IR_CUTOFF * a`` are rejected.
IR_CUTOFF = 1e-12
#: Gaussian packets are integrated over ``omega0 +/- GAUSSIAN_WIDTHS * sigma``.
GAUSSIAN_WIDTHS = 8.0
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class AccelerationFrame:
    """Proper acceleration ``a`` of the source (units with c = 1)."""

    a: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"acceleration must be positive and finite, got {self.a!r}")

    @property
    def unruh_temperature(self) -> float:
        return self.a / (2 * math.pi)

    def scaled(self, omega):
        """Dimensionless ``2 pi omega / a``."""
        return 2 * math.pi * np.asarray(omega, dtype=float) / self.a

    def omega_from_scaled(self, x: float) -> float:
        """Inverse of :meth:`scaled`."""
        return x * self.a / (2 * math.pi)


def _check_positive_frequency(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(~np.isfinite(omega)) or np.any(omega <= 0):
        raise DomainError("Rindler frequency must be positive (r_w diverges as w -> 0+)")
    return omega


def unruh_factors(omega, frame: AccelerationFrame):
    """Return ``(cosh^2 r_w, sinh^2 r_w, cosh r_w sinh r_w)``.

    Evaluated from ``x = 2 pi w / a`` as ``1/(1-e^-x)``, ``e^-x/(1-e^-x)`` and
    ``e^(-x/2)/(1-e^-x)`` so that neither small nor large ``x`` loses precision.
    """
    x = frame.scaled(_check_positive_frequency(omega))
    denom = -np.expm1(-x)
    return 1.0 / denom, np.exp(-x) / denom, np.exp(-0.5 * x) / denom


def r_omega(omega, frame: AccelerationFrame):
    """Unruh two-mode squeezing parameter, ``artanh(exp(-pi w / a))``."""
    omega = _check_positive_frequency(omega)
    cosh2, sinh2, _ = unruh_factors(omega, frame)
    # asinh(sinh r) keeps full relative precision when r is tiny
    out = np.arcsinh(np.sqrt(sinh2))
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------- packets


@dataclass(frozen=True)
class GaussianPacket:
    """``|g(w)|^2`` is a normal density with mean ``omega0`` and std ``sigma``."""

    omega0: float
    sigma: float

    def __post_init__(self):
        if not (self.omega0 > 0 and self.sigma > 0):
            raise ValidationError("Gaussian packet needs omega0 > 0 and sigma > 0")

    def amplitude(self, omega):
        omega = np.asarray(omega, dtype=float)
        norm = (2 * math.pi * self.sigma**2) ** -0.25
        return (norm * np.exp(-((omega - self.omega0) ** 2) / (4 * self.sigma**2))).astype(complex)

    def support(self):
        w = GAUSSIAN_WIDTHS * self.sigma
        return self.omega0 - w, self.omega0 + w

    @property
    def center(self) -> float:
        return self.omega0


@dataclass(frozen=True)
class TopHatPacket:
    """Flat ``g(w) = 1/sqrt(hi - lo)`` on ``[omega_lo, omega_hi]``."""

    omega_lo: float
    omega_hi: float

    def __post_init__(self):
        if not (0 < self.omega_lo < self.omega_hi):
            raise ValidationError("top-hat packet needs 0 < omega_lo < omega_hi")

    def amplitude(self, omega):
        omega = np.asarray(omega, dtype=float)
        inside = (omega >= self.omega_lo) & (omega <= self.omega_hi)
        return np.where(inside, 1.0 / math.sqrt(self.omega_hi - self.omega_lo), 0.0).astype(complex)

    def support(self):
        return self.omega_lo, self.omega_hi

    @property
    def center(self) -> float:
        return 0.5 * (self.omega_lo + self.omega_hi)


@dataclass(frozen=True, eq=False)
class TabulatedPacket:
    """Packet sampled on a strictly increasing frequency grid (trapezoid rule)."""

    omega: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float).copy()
        g = np.asarray(self.g, dtype=complex).copy()
        if omega.ndim != 1 or omega.shape != g.shape or omega.size < 2:
            raise ValidationError("tabulated packet needs matching 1-d omega and g arrays (>= 2 points)")
        if np.any(np.diff(omega) <= 0):
            raise ValidationError("tabulated packet grid must be strictly increasing")
        omega.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "g", g)

    def amplitude(self, omega):
        omega = np.asarray(omega, dtype=float)
        re = np.interp(omega, self.omega, self.g.real, left=0.0, right=0.0)
        im = np.interp(omega, self.omega, self.g.imag, left=0.0, right=0.0)
        return re + 1j * im

    def support(self):
        return float(self.omega[0]), float(self.omega[-1])

    @property
    def center(self) -> float:
        w = np.abs(self.g) ** 2
        return float(np.trapezoid(w * self.omega, self.omega) / np.trapezoid(w, self.omega))


WavePacket = Union[GaussianPacket, TopHatPacket, TabulatedPacket]


def packet_from_dict(spec: dict) -> WavePacket:
    """Build a packet from a config mapping such as
    ``{"shape": "gaussian", "omega0": 1.0, "sigma": 0.001}``.

    Tabulated packets take ``"grid": [[w, g_re, g_im], ...]`` (``g_im`` optional).
    """
    try:
        shape = str(spec["shape"]).lower()
        if shape == "gaussian":
            return GaussianPacket(float(spec["omega0"]), float(spec["sigma"]))
        if shape in ("tophat", "top_hat", "top-hat"):
            return TopHatPacket(float(spec["omega_lo"]), float(spec["omega_hi"]))
        if shape == "tabulated":
            rows = [list(row) + [0.0] * (3 - len(row)) for row in spec["grid"]]
            arr = np.asarray(rows, dtype=float)
            return TabulatedPacket(arr[:, 0], arr[:, 1] + 1j * arr[:, 2])
    except (KeyError, TypeError, IndexError) as exc:
        raise ValidationError(f"malformed packet specification: {exc}") from exc
    raise ValidationError(f"unknown packet shape {spec.get('shape')!r}")


# --------------------------------------------------------------------------- quadrature


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    tol: float = DEFAULT_TOL,
    order: int = 16,
    max_intervals: int = 20000,
):
    """Integrate a vector-valued ``f`` over ``[lo, hi]`` by interval bisection.

    ``f`` maps an array of nodes of shape ``(n,)`` to values of shape ``(k, n)``.
    An interval is accepted once the ``order``-point rule and the sum over its
    two halves agree to within its share ``tol * width / (hi - lo)`` in every
    component.  Returns ``(integral, error_estimate)``, both of shape ``(k,)``.
    """
    nodes, weights = leggauss(order)

    def rule(a, b):
        half = 0.5 * (b - a)
        vals = np.atleast_2d(f(0.5 * (a + b) + half * nodes))
        return half * (vals @ weights)

    span = hi - lo
    total = 0.0
    error = 0.0
    stack = [(lo, hi, rule(lo, hi))]
    visited = 0
    while stack:
        a, b, whole = stack.pop()
        visited += 1
        if visited > max_intervals:
            raise IntegrationError(
                f"quadrature did not converge to {tol:g} within {max_intervals} intervals"
            )
        m = 0.5 * (a + b)
        left, right = rule(a, m), rule(m, b)
        refined = left + right
        diff = np.abs(refined - whole)
        if np.all(diff <= tol * (b - a) / span) or (b - a) <= 1e-14 * span:
            total = total + refined
            error = error + diff
        else:
            stack.append((a, m, left))
            stack.append((m, b, right))
    return np.asarray(total), np.asarray(error)


# --------------------------------------------------------------------------- integrals


@dataclass(frozen=True)
class ModeIntegrals:
    """Packet averages ``I_c``, ``I_s``, ``I_cs`` of cosh^2, sinh^2 and cosh*sinh."""

    i_c: float
    i_s: float
    i_cs: float
    tol: float = field(default=1e-9, compare=False, repr=False)

    def __post_init__(self):
        t = self.tol
        if not all(map(math.isfinite, (self.i_c, self.i_s, self.i_cs))):
            raise ValidationError("mode integrals must be finite")
        if self.i_c < 1 - t or self.i_s < -t or self.i_cs < -t:
            raise ValidationError(f"mode integrals out of range: {self}")
        if abs(self.i_c - self.i_s - 1) > t * max(1.0, self.i_c):
            raise ValidationError(f"I_c - I_s = {self.i_c - self.i_s!r}, expected 1")
        if self.i_cs**2 > self.i_c * self.i_s * (1 + t) + t:
            raise ValidationError("I_cs^2 exceeds I_c * I_s")

    @classmethod
    def narrowband(cls, i_c: float) -> "ModeIntegrals":
        """Single-frequency integrals parameterized directly by ``I_c >= 1``."""
        if not i_c >= 1:
            raise DomainError(f"I_c must be >= 1, got {i_c!r}")
        i_s = i_c - 1.0
        return cls(i_c, i_s, math.sqrt(i_c * i_s))

    @property
    def total(self) -> float:
        """``I_c + I_s``, the local-oscillator gain factor."""
        return self.i_c + self.i_s


def narrowband_integrals(omega0: float, frame: AccelerationFrame) -> ModeIntegrals:
    """Integrals of a packet concentrated at ``omega0``: cosh^2, sinh^2, cosh*sinh of ``r_omega0``."""
    if not omega0 > 0:
        raise DomainError(f"omega0 must be positive, got {omega0!r}")
    _, sinh2, cs = unruh_factors(omega0, frame)
    sinh2, cs = float(sinh2), float(cs)
    return ModeIntegrals(1.0 + sinh2, sinh2, cs)


def scaled_frequency_for_ic(i_c: float) -> float:
    """``2 pi omega0 / a`` whose narrowband ``I_c`` equals ``i_c`` (``i_c > 1``)."""
    if not i_c > 1:
        raise DomainError(f"I_c must exceed 1 to map to a finite frequency, got {i_c!r}")
    return math.log(i_c / (i_c - 1.0))


def _unruh_integrand(packet: WavePacket, frame: AccelerationFrame):
    def f(omega):
        weight = np.abs(packet.amplitude(omega)) ** 2
        cosh2, sinh2, cs = unruh_factors(omega, frame)
        return np.vstack([weight * cosh2, weight * sinh2, weight * cs, weight])

    return f


def mode_integrals(
    packet: WavePacket,
    frame: AccelerationFrame,
    tol: float = DEFAULT_TOL,
    norm_tol: float = 1e-6,
) -> ModeIntegrals:
    """Evaluate ``(I_c, I_s, I_cs)`` for ``packet`` by quadrature.

    Gaussian and top-hat packets use :func:`adaptive_gauss_legendre` with
    absolute tolerance ``tol`` per integral.  Tabulated packets use the
    trapezoid rule on their own grid; their normalization must hold to
    ``norm_tol`` under that same rule.
    """
    lo, hi = packet.support()
    if lo <= IR_CUTOFF * frame.a:
        raise DomainError(
            f"packet support reaches w = {lo:g} <= {IR_CUTOFF:g} a; the Unruh integrals are IR divergent there"
        )
    if isinstance(packet, TabulatedPacket):
        vals = _unruh_integrand(packet, frame)(packet.omega)
        i_c, i_s, i_cs, norm = np.trapezoid(vals, packet.omega, axis=1)
        if abs(norm - 1) > norm_tol:
            raise ValidationError(f"tabulated packet has norm {norm:.12g}, expected 1")
        # i_c - i_s equals norm exactly here; rescale so the identity holds
        return ModeIntegrals(i_c / norm, i_s / norm, i_cs / norm)
    (i_c, i_s, i_cs, norm), _ = adaptive_gauss_legendre(_unruh_integrand(packet, frame), lo, hi, tol=tol)
    if abs(norm - 1) > max(10 * tol, 1e-12):
        raise ValidationError(f"packet has norm {norm:.15g}, expected 1")
    return ModeIntegrals(float(i_c), float(i_s), float(i_cs))
