"""Covariance matrix and entanglement of the accelerated two-mode squeezer output.

Quadrature ordering is ``(x1, p1, x2, p2)`` with the vacuum covariance equal to
the identity; mode 1 is left-moving and mode 2 right-moving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ValidationError
from .modes import ModeIntegrals
from .unruh import e_quantities

PHYSICALITY_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """``Omega = direct_sum [[0, 1], [-1, 0]]`` over ``(x, p)`` pairs."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True, eq=False)
class CovMat4:
    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.shape != (4, 4):
            raise ValidationError(f"CovMat4 needs a 4x4 matrix, got shape {m.shape}")
        if not np.allclose(m, m.T, rtol=0, atol=1e-12 * max(1.0, np.abs(m).max())):
            raise ValidationError("covariance matrix must be symmetric")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)


@dataclass(frozen=True)
class EntanglementResult:
    nu_minus: float
    log_negativity: float


def cov_entries(r: float, integrals: ModeIntegrals):
    """Diagonal entry ``A`` and correlation ``B`` of the output covariance matrix."""
    ic = integrals.i_c
    k = 4 * ic * (ic - 1)
    ch = math.cosh(r)
    a = (2 * ic - 1) ** 2 * math.cosh(2 * r) - k * (2 * ch - 1)
    b = 2 * math.sinh(r) * ((2 * ic - 1) ** 2 * ch - k)
    return a, b


def cov_entries_from_moments(r: float, integrals: ModeIntegrals):
    """``(A, B)`` assembled from the E-quantity moment sums instead of the simplified form."""
    e = e_quantities(r, integrals)
    ic, i_s = integrals.i_c, integrals.i_s
    tot = ic + i_s
    a = 1 + 2 * (ic**2 * e.e_c + i_s**2 * e.e_d - 2 * ic * i_s * e.e_cd) / tot
    b = 2 * (ic**2 * e.e_cc + i_s**2 * e.e_dd - 2 * ic * i_s * e.e_cd_bar) / tot
    return a, b


def quadrature_correlation(r: float, integrals: ModeIntegrals, phi1: float, phi2: float) -> float:
    """``<X1(phi1) X2(phi2)>`` between the left- and right-moving outputs."""
    _, b = cov_entries_from_moments(r, integrals)
    return b * math.cos(phi1 + phi2)


def symplectic_spectrum(cov, partial_transpose: bool = False):
    """Symplectic eigenvalues (ascending, one per mode) from the moduli of eig(i Omega V).

    With ``partial_transpose`` the momentum of the last mode is sign-flipped first.
    """
    v = cov.entries if isinstance(cov, CovMat4) else np.asarray(cov, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
        raise ValidationError("covariance matrix must be square with even dimension")
    if not np.allclose(v, v.T, rtol=0, atol=1e-12 * max(1.0, np.abs(v).max())):
        raise ValidationError("covariance matrix must be symmetric")
    n = v.shape[0] // 2
    if partial_transpose:
        flip = np.ones(2 * n)
        flip[-1] = -1.0
        v = v * np.outer(flip, flip)
    ev = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(n) @ v)))
    return ev[::2].tolist()


def covariance_matrix(r: float, integrals: ModeIntegrals) -> CovMat4:
    a, b = cov_entries(r, integrals)
    m = np.array(
        [
            [a, 0, b, 0],
            [0, a, 0, -b],
            [b, 0, a, 0],
            [0, -b, 0, a],
        ]
    )
    cov = CovMat4(m)
    nu = symplectic_spectrum(cov)
    if nu[0] < 1 - PHYSICALITY_TOL * max(1.0, a):
        raise ConsistencyError(f"unphysical covariance matrix, symplectic eigenvalue {nu[0]!r}")
    return cov


def nu_minus(r: float, integrals: ModeIntegrals) -> float:
    """Smallest partially transposed symplectic eigenvalue, closed form."""
    ic = integrals.i_c
    return math.exp(-2 * r) + 4 * ic * (ic - 1) * math.expm1(-r) ** 2


def log_negativity(r: float, integrals: ModeIntegrals) -> EntanglementResult:
    """Base-2 logarithmic negativity ``max(0, -log2 nu_minus)``."""
    nu = nu_minus(r, integrals)
    return EntanglementResult(nu_minus=nu, log_negativity=max(0.0, -math.log2(nu)))
