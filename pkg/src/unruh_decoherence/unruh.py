"""Unruh-basis algebra: Bogoliubov coefficients, E-quantities and photon-number moments.

The E-quantities are the packet-independent parts of the vacuum two-point
functions of the output Unruh operators when the accelerated object applies a
single-mode squeeze of strength ``r`` to the localized Rindler mode.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError
from .modes import AccelerationFrame, ModeIntegrals

# Lanczos approximation, g = 607/128 with 15 terms (Godfrey's coefficients)
_LANCZOS_G = 607 / 128
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def complex_log_gamma(z: complex) -> complex:
    """Principal-branch-free ``log Gamma(z)`` for ``Re z >= 1/2``.

    The imaginary part is the continuous log-gamma phase (not reduced mod 2 pi),
    which is what the k-dependence of the Bogoliubov phase needs.
    """
    z = complex(z)
    if z.real < 0.5:
        raise DomainError("complex_log_gamma is implemented for Re z >= 1/2 only")
    z -= 1
    series = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        series += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(series)


def complex_gamma(z: complex) -> complex:
    return cmath.exp(complex_log_gamma(z))


@dataclass(frozen=True)
class BogoliubovCoefficient:
    """Minkowski-from-Unruh coefficient ``A_kw`` (``B_kw`` is its conjugate)."""

    value: complex
    k: float
    omega: float

    def conjugate(self) -> "BogoliubovCoefficient":
        return BogoliubovCoefficient(self.value.conjugate(), self.k, self.omega)


def bogoliubov_a(k: float, omega: float, frame: AccelerationFrame) -> BogoliubovCoefficient:
    r"""``A_kw = i sqrt(2 sinh(pi w/a)) / (2 pi sqrt(w k)) Gamma(1 - i w/a) (k/a)^{i w/a}``.

    Computed in log form: ``|Gamma(1 - i y)|`` underflows long before the
    ``sqrt(sinh)`` prefactor overflows, so the two are combined before
    exponentiating.
    """
    if not (k > 0 and omega > 0):
        raise DomainError("Bogoliubov coefficients need k > 0 and omega > 0")
    y = omega / frame.a
    # log sqrt(2 sinh(pi y)) = 0.5*(pi y + log(1 - exp(-2 pi y)))
    log_mod = 0.5 * (math.pi * y + math.log(-math.expm1(-2 * math.pi * y)))
    log_mod -= math.log(2 * math.pi * math.sqrt(omega * k))
    lg = complex_log_gamma(complex(1.0, -y))
    phase = lg.imag + y * math.log(k / frame.a) + 0.5 * math.pi
    value = cmath.exp(complex(log_mod + lg.real, phase))
    return BogoliubovCoefficient(value, k, omega)


def bogoliubov_b(k: float, omega: float, frame: AccelerationFrame) -> BogoliubovCoefficient:
    return bogoliubov_a(k, omega, frame).conjugate()


@dataclass(frozen=True)
class EQuantities:
    e_c: float
    e_d: float
    e_cc: float
    e_dd: float
    e_cd: float
    e_cd_bar: float


def e_quantities(r: float, integrals: ModeIntegrals) -> EQuantities:
    """Six packet-weighted squeeze terms entering every output two-point function."""
    if not math.isfinite(r):
        raise DomainError("squeezing factor must be finite")
    ic, i_s = integrals.i_c, integrals.i_s
    tot = ic + i_s
    ch, sh = math.cosh(r), math.sinh(r)
    chm1 = 2 * math.sinh(0.5 * r) ** 2  # cosh r - 1 without cancellation
    return EQuantities(
        e_c=i_s * chm1**2 + ic * sh**2,
        e_d=ic * chm1**2 + i_s * sh**2,
        e_cc=sh * (tot * chm1 + 1),
        e_dd=sh * (tot * chm1 - 1),
        e_cd=-ch * chm1 * tot,
        e_cd_bar=-sh * chm1 * tot,
    )


def local_oscillator_strength(alpha: complex, integrals: ModeIntegrals) -> float:
    """Mean detected photon number of the bare local oscillator, ``|alpha|^2 (I_c + I_s)``."""
    return abs(alpha) ** 2 * integrals.total


def mean_photon_number(alpha: complex, r: float, integrals: ModeIntegrals) -> float:
    """Vacuum expectation of the total Minkowski number for displacement ``alpha`` after a squeeze ``r``."""
    e = e_quantities(r, integrals)
    return local_oscillator_strength(alpha, integrals) + integrals.i_c * e.e_c + integrals.i_s * e.e_d


def photon_number_variance(alpha: complex, r: float, integrals: ModeIntegrals) -> float:
    """Leading ``O(|alpha|^2)`` variance of the total Minkowski number.

    The local-oscillator phase is ``arg(alpha)``.  Built from the E-quantities
    directly, without the simplifications that lead to the closed-form variance.
    """
    e = e_quantities(r, integrals)
    ic, i_s = integrals.i_c, integrals.i_s
    c2 = math.cos(2 * cmath.phase(alpha)) if alpha != 0 else 1.0
    bracket = (
        (ic + i_s)
        + 2 * (ic**2 * e.e_c + i_s**2 * e.e_d)
        + 2 * ic**2 * e.e_cc * c2
        + 2 * i_s**2 * e.e_dd * c2
        - 4 * ic * i_s * e.e_cd
        - 4 * ic * i_s * e.e_cd_bar * c2
    )
    return abs(alpha) ** 2 * bracket
