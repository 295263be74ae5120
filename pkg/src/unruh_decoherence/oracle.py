"""Discretized Gaussian oracle for the inertial homodyne statistics.

The Unruh frequency continuum is replaced by ``M`` nodes per sector.  Each node
carries an Unruh pair ``(c_i, d_i)`` in the Minkowski vacuum.  The accelerated
object acts on the localized Rindler mode ``b_g = sum_i g_i (cosh r_i c_i +
sinh r_i d_i^dag)``, which turns the input-output relations into an explicit
affine symplectic map on the ``2 n`` quadratures.  Homodyne statistics follow
from the exact Gaussian moments of the total number operator
``N = sum (c^dag c + d^dag d)`` at finite local-oscillator amplitude.

Nothing here uses the closed-form variance, covariance or negativity formulas.

Conventions: quadratures are interleaved ``(x_0, p_0, x_1, p_1, ...)`` with
``a = (x + i p) / 2``, so ``[x, p] = 2i`` and the vacuum covariance is the
identity.  Mode order is ``c, d`` for one sector and ``c1, d1, c2, d2`` for
the two-mode squeezer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Union

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConsistencyError, ValidationError
from .modes import (
    AccelerationFrame,
    ModeIntegrals,
    TabulatedPacket,
    WavePacket,
    unruh_factors,
)
from .two_mode import symplectic_form

DEFAULT_ALPHA = 1e4
SYMPLECTIC_TOL = 1e-10


# --------------------------------------------------------------------------- scenario


@dataclass(frozen=True)
class Displace:
    beta: complex


@dataclass(frozen=True)
class SingleSqueeze:
    r: float


@dataclass(frozen=True)
class TwoSqueeze:
    r: float


Source = Union[Displace, SingleSqueeze, TwoSqueeze]


@dataclass(frozen=True)
class LocalOscillator:
    """Right-wedge displacement ``|alpha| e^{i phase}`` plus the mirror-image
    left-wedge displacement ``gamma = z alpha^*``."""

    amplitude: float = DEFAULT_ALPHA
    phase: float = 0.0
    z: float = 0.0

    @property
    def alpha(self) -> complex:
        return self.amplitude * complex(math.cos(self.phase), math.sin(self.phase))

    @property
    def gamma(self) -> complex:
        return self.z * self.alpha.conjugate()


@dataclass(frozen=True, eq=False)
class DiscretizedScenario:
    omega: np.ndarray
    g: np.ndarray
    frame: AccelerationFrame
    source: Source
    lo: LocalOscillator = LocalOscillator()
    lo2: Optional[LocalOscillator] = None

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float).ravel()
        g = np.asarray(self.g, dtype=complex).ravel()
        if omega.shape != g.shape or omega.size == 0:
            raise ValidationError("omega and g must be non-empty and of equal length")
        if np.any(omega <= 0) or np.any(np.diff(omega) <= 0):
            raise ValidationError("frequency grid must be strictly increasing and positive")
        if abs(np.sum(np.abs(g) ** 2) - 1) > 1e-12:
            raise ValidationError("discretized packet must satisfy sum |g_i|^2 = 1")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "g", g)

    @classmethod
    def from_packet(cls, packet: WavePacket, frame: AccelerationFrame, nodes: int, source: Source, **kw):
        omega, g = discretize(packet, nodes)
        return cls(omega, g, frame, source, **kw)

    @classmethod
    def narrowband(cls, omega0: float, frame: AccelerationFrame, source: Source, **kw):
        return cls(np.array([omega0]), np.array([1.0 + 0j]), frame, source, **kw)

    @property
    def nodes(self) -> int:
        return self.omega.size

    @property
    def movers(self) -> int:
        return 2 if isinstance(self.source, TwoSqueeze) else 1

    @property
    def n_modes(self) -> int:
        return 2 * self.movers * self.nodes

    def los(self):
        if self.movers == 1:
            return (self.lo,)
        return (self.lo, self.lo2 if self.lo2 is not None else self.lo)

    def with_phases(self, *phases) -> "DiscretizedScenario":
        los = [replace(lo, phase=p) for lo, p in zip(self.los(), phases)]
        return replace(self, lo=los[0], lo2=los[1] if len(los) > 1 else None)

    def sector(self, name: str) -> slice:
        """Mode slice of ``'c'``/``'d'`` (one mover) or ``'c1'``, ``'d1'``, ``'c2'``, ``'d2'``."""
        order = ["c", "d"] if self.movers == 1 else ["c1", "d1", "c2", "d2"]
        i = order.index(name)
        return slice(i * self.nodes, (i + 1) * self.nodes)

    def integrals(self) -> ModeIntegrals:
        """Node sums standing in for ``I_c``, ``I_s``, ``I_cs``."""
        w = np.abs(self.g) ** 2
        ch2, sh2, cs = unruh_factors(self.omega, self.frame)
        return ModeIntegrals(float(w @ ch2), float(w @ sh2), float(w @ cs))


def discretize(packet: WavePacket, nodes: int):
    """Gauss-Legendre nodes on the packet support (tabulated packets keep their grid).

    Returns ``(omega, g)`` with ``g_i = g(omega_i) sqrt(w_i)`` renormalized to unit norm.
    """
    if isinstance(packet, TabulatedPacket):
        omega = packet.omega
        # trapezoid weights: half-interval to each side
        w = np.empty_like(omega)
        d = np.diff(omega)
        w[0], w[-1] = d[0] / 2, d[-1] / 2
        w[1:-1] = (d[:-1] + d[1:]) / 2
        g = packet.g * np.sqrt(w)
    else:
        if nodes < 1:
            raise ValidationError("need at least one node")
        lo, hi = packet.support()
        x, wx = leggauss(nodes)
        omega = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
        g = packet.amplitude(omega) * np.sqrt(0.5 * (hi - lo) * wx)
    keep = np.abs(g) > 0
    omega, g = omega[keep], g[keep]
    return omega, g / np.linalg.norm(g)


# --------------------------------------------------------------------------- transforms


@dataclass(frozen=True, eq=False)
class AffineMap:
    """``r -> S r + d`` on quadratures."""

    matrix: np.ndarray
    displacement: np.ndarray

    def symplectic_defect(self) -> float:
        s = self.matrix
        om = symplectic_form(s.shape[0] // 2)
        return float(np.abs(s @ om @ s.T - om).max())


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (mean.size, mean.size) or mean.size % 2:
            raise ValidationError("mean / covariance dimensions disagree")
        if not np.allclose(cov, cov.T, rtol=0, atol=1e-10 * max(1.0, np.abs(cov).max())):
            raise ValidationError("covariance matrix must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @classmethod
    def vacuum(cls, n_modes: int) -> "GaussianState":
        return cls(np.zeros(2 * n_modes), np.eye(2 * n_modes))

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def check_physical(self, tol: float = 1e-9) -> None:
        """Raise unless ``cov + i Omega >= 0`` (uncertainty principle)."""
        m = self.cov + 1j * symplectic_form(self.n_modes)
        low = np.linalg.eigvalsh(m).min()
        if low < -tol * max(1.0, np.abs(self.cov).max()):
            raise ValidationError(f"unphysical Gaussian state: cov + i Omega has eigenvalue {low:.3e}")

    def apply(self, t: AffineMap) -> "GaussianState":
        s = t.matrix
        return GaussianState(s @ self.mean + t.displacement, s @ self.cov @ s.T)


def _bogoliubov(s: DiscretizedScenario):
    """Complex ``(U, V)`` with ``a_out = U a + V a^dag`` (displacements excluded)."""
    m = s.nodes
    n = s.n_modes
    ch2, sh2, _ = unruh_factors(s.omega, s.frame)
    ch, sh = np.sqrt(ch2), np.sqrt(sh2)
    g = s.g

    def rindler(j):
        # b_j = sum g (ch c_j + sh d_j^dag) as (coeffs on a, coeffs on a^dag)
        cu, cv = np.zeros(n, complex), np.zeros(n, complex)
        cu[2 * j * m:(2 * j + 1) * m] = g * ch
        cv[(2 * j + 1) * m:(2 * j + 2) * m] = g * sh
        return cu, cv

    def dagger(op):
        cu, cv = op
        return np.conj(cv), np.conj(cu)

    def comb(*terms):
        cu = sum(w * op[0] for w, op in terms)
        cv = sum(w * op[1] for w, op in terms)
        return cu, cv

    b = [rindler(j) for j in range(s.movers)]
    src = s.source
    if isinstance(src, Displace):
        delta = [(np.zeros(n, complex), np.zeros(n, complex))]
    else:
        chm1 = 2 * math.sinh(0.5 * src.r) ** 2
        shr = math.sinh(src.r)
        if isinstance(src, SingleSqueeze):
            delta = [comb((chm1, b[0]), (shr, dagger(b[0])))]
        else:
            delta = [
                comb((chm1, b[0]), (shr, dagger(b[1]))),
                comb((chm1, b[1]), (shr, dagger(b[0]))),
            ]

    u = np.eye(n, dtype=complex)
    v = np.zeros((n, n), dtype=complex)
    for j in range(s.movers):
        cs = slice(2 * j * m, (2 * j + 1) * m)
        ds = slice((2 * j + 1) * m, (2 * j + 2) * m)
        du, dv = delta[j]
        ddu, ddv = dagger(delta[j])
        # c' = c + g^* ch Delta ;  d' = d - g sh Delta^dag
        u[cs] += np.outer(np.conj(g) * ch, du)
        v[cs] += np.outer(np.conj(g) * ch, dv)
        u[ds] -= np.outer(g * sh, ddu)
        v[ds] -= np.outer(g * sh, ddv)
    return u, v


def _displacement(s: DiscretizedScenario, with_source: bool = True) -> np.ndarray:
    """Complex output mean ``<a_k>`` produced by the local oscillators (and a displacing source)."""
    m = s.nodes
    ch2, sh2, _ = unruh_factors(s.omega, s.frame)
    ch, sh = np.sqrt(ch2), np.sqrt(sh2)
    out = np.zeros(s.n_modes, dtype=complex)
    for j, lo in enumerate(s.los()):
        right = lo.alpha
        if with_source and isinstance(s.source, Displace):
            right += complex(s.source.beta)
        left = lo.gamma
        out[2 * j * m:(2 * j + 1) * m] = np.conj(s.g) * (ch * right - sh * np.conj(left))
        out[(2 * j + 1) * m:(2 * j + 2) * m] = s.g * (ch * left - sh * np.conj(right))
    return out


def _to_real(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    s = np.empty((2 * n, 2 * n))
    plus, minus = u + v, u - v
    s[0::2, 0::2] = plus.real
    s[0::2, 1::2] = -minus.imag
    s[1::2, 0::2] = plus.imag
    s[1::2, 1::2] = minus.real
    return s


def _mean_to_real(m: np.ndarray) -> np.ndarray:
    d = np.empty(2 * m.size)
    d[0::2] = 2 * m.real
    d[1::2] = 2 * m.imag
    return d


def build_transform(s: DiscretizedScenario) -> AffineMap:
    """Affine symplectic map taking the input Unruh vacuum quadratures to the output ones."""
    t = AffineMap(_to_real(*_bogoliubov(s)), _mean_to_real(_displacement(s)))
    defect = t.symplectic_defect()
    if defect > SYMPLECTIC_TOL * max(1.0, np.abs(t.matrix).max() ** 2):
        raise ConsistencyError(f"transform is not symplectic (defect {defect:.3e})")
    return t


def output_state(s: DiscretizedScenario) -> GaussianState:
    t = build_transform(s)
    return GaussianState(t.displacement, t.matrix @ t.matrix.T)


# --------------------------------------------------------------------------- moments


def _quadrature_index(modes: slice) -> np.ndarray:
    return np.arange(2 * modes.start, 2 * modes.stop)


def number_mean(state: GaussianState, modes: Optional[slice] = None) -> float:
    """``<sum a^dag a>`` over the modes in ``modes`` (all modes by default)."""
    idx = _quadrature_index(modes or slice(0, state.n_modes))
    mu = state.mean[idx]
    return float((np.trace(state.cov[np.ix_(idx, idx)]) + mu @ mu) / 4 - idx.size / 4)


def number_covariance(state: GaussianState, modes1: Optional[slice] = None, modes2: Optional[slice] = None) -> float:
    """``Cov(N_1, N_2)`` for number operators summed over two mode sets.

    With ``N = r^T Q r / 4 + const`` and Wick's theorem for the ordered
    two-point function ``cov + i Omega``:
    ``Cov = mu_1^T cov_12 mu_2 / 4 + (tr(cov_12 cov_21) + tr(Omega_12 Omega_21)) / 8``.
    """
    full = slice(0, state.n_modes)
    i1 = _quadrature_index(modes1 or full)
    i2 = _quadrature_index(modes2 or full)
    c12 = state.cov[np.ix_(i1, i2)]
    om = symplectic_form(state.n_modes)
    o12 = om[np.ix_(i1, i2)]
    linear = state.mean[i1] @ c12 @ state.mean[i2] / 4
    quad = (np.sum(c12 * c12) - np.sum(o12 * o12)) / 8
    return float(linear + quad)


def ladder_moments(state: GaussianState):
    """Full two-point tables ``(<a_k^dag a_l>, <a_k a_l>)`` including the mean parts."""
    g = state.cov + 1j * symplectic_form(state.n_modes)
    xx, xp = g[0::2, 0::2], g[0::2, 1::2]
    px, pp = g[1::2, 0::2], g[1::2, 1::2]
    m = 0.5 * (state.mean[0::2] + 1j * state.mean[1::2])
    n = 0.25 * (xx + 1j * xp - 1j * px + pp) + np.outer(np.conj(m), m)
    s = 0.25 * (xx + 1j * xp + 1j * px - pp) + np.outer(m, m)
    return n, s


# --------------------------------------------------------------------------- homodyne


def _reference_number(s: DiscretizedScenario, modes: slice) -> float:
    """``<N_0>``: local oscillators alone on the vacuum, a displaced vacuum, so ``|<a>|^2`` is exact."""
    m = _displacement(s, with_source=False)[modes]
    return float(np.vdot(m, m).real)


def _mover_modes(s: DiscretizedScenario, j: int) -> slice:
    span = 2 * s.nodes
    return slice(j * span, (j + 1) * span)


def _states_for_phases(s: DiscretizedScenario, phase_sets):
    u, v = _bogoliubov(s)
    sm = _to_real(u, v)
    t = AffineMap(sm, np.zeros(2 * s.n_modes))
    defect = t.symplectic_defect()
    if defect > SYMPLECTIC_TOL * max(1.0, np.abs(sm).max() ** 2):
        raise ConsistencyError(f"transform is not symplectic (defect {defect:.3e})")
    cov = sm @ sm.T
    for phases in phase_sets:
        sp = s.with_phases(*phases)
        yield sp, GaussianState(_mean_to_real(_displacement(sp)), cov)


def detected_variances(s: DiscretizedScenario, phis: Sequence[float]) -> np.ndarray:
    """``(Delta N)^2 / <N_0>`` of the first mover at each local-oscillator phase in ``phis``."""
    out = []
    modes = _mover_modes(s, 0)
    phase_sets = [(phi,) * s.movers for phi in phis]
    for sp, state in _states_for_phases(s, phase_sets):
        out.append(number_covariance(state, modes, modes) / _reference_number(sp, modes))
    return np.array(out)


def detected_variance(s: DiscretizedScenario, phi: float) -> float:
    return float(detected_variances(s, [phi])[0])


def detected_mean(s: DiscretizedScenario, phi: float) -> float:
    """``(<N> - <N_0>) / sqrt(<N_0>)`` of the first mover."""
    modes = _mover_modes(s, 0)
    ((sp, state),) = _states_for_phases(s, [(phi,) * s.movers])
    n0 = _reference_number(sp, modes)
    return (number_mean(state, modes) - n0) / math.sqrt(n0)


def detected_single_mode_covariance(s: DiscretizedScenario) -> np.ndarray:
    """2x2 covariance of ``(X(0), X(pi/2))`` reconstructed from three homodyne phases."""
    v0, v90, v45 = detected_variances(s, [0.0, math.pi / 2, math.pi / 4])
    c = v45 - 0.5 * (v0 + v90)
    return np.array([[v0, c], [c, v90]])


def detected_covariance(s: DiscretizedScenario) -> np.ndarray:
    """4x4 ``(x1, p1, x2, p2)`` covariance of the two-mode output from homodyne runs.

    Cross-mover entries come from the number correlation ``Cov(N1, N2)`` at the
    phase pair in question; the same-mover ``x p`` entry uses the pi/4 variance.
    """
    if s.movers != 2:
        raise ValidationError("detected_covariance needs a two-mode (TwoSqueeze) scenario")
    h = math.pi / 2
    q = math.pi / 4
    settings = [(0.0, 0.0), (h, h), (0.0, h), (h, 0.0), (q, q)]
    m1, m2 = _mover_modes(s, 0), _mover_modes(s, 1)
    v = np.zeros((4, 4))
    results = {}
    for (p1, p2), (sp, state) in zip(settings, _states_for_phases(s, settings)):
        n1, n2 = _reference_number(sp, m1), _reference_number(sp, m2)
        results[(p1, p2)] = (
            number_covariance(state, m1, m1) / n1,
            number_covariance(state, m2, m2) / n2,
            number_covariance(state, m1, m2) / math.sqrt(n1 * n2),
        )
    v[0, 0], v[2, 2], v[0, 2] = results[(0.0, 0.0)]
    v[1, 1], v[3, 3], v[1, 3] = results[(h, h)]
    v[0, 3] = results[(0.0, h)][2]
    v[1, 2] = results[(h, 0.0)][2]
    v1q, v2q, _ = results[(q, q)]
    v[0, 1] = v1q - 0.5 * (v[0, 0] + v[1, 1])
    v[2, 3] = v2q - 0.5 * (v[2, 2] + v[3, 3])
    return np.triu(v) + np.triu(v, 1).T


# --------------------------------------------------------------------------- sampling


@dataclass(frozen=True)
class HomodyneSample:
    mean: float
    variance: float
    stderr: float
    variance_stderr: float
    expected_mean: float
    expected_variance: float


def quadrature_vector(projector, phi: float) -> np.ndarray:
    """Real weights ``u`` such that ``u . r`` is the quadrature ``A e^{-i phi} + A^dag e^{i phi}``
    of the normalized mode ``A = sum_k f_k^* a_k``."""
    f = np.asarray(projector, dtype=complex).ravel()
    norm = np.linalg.norm(f)
    if norm == 0:
        raise ValidationError("projector mode profile must be non-zero")
    c = np.conj(f / norm) * complex(math.cos(phi), -math.sin(phi))
    u = np.empty(2 * f.size)
    u[0::2] = c.real
    u[1::2] = -c.imag
    return u


def mc_homodyne(state: GaussianState, projector, phi: float, shots: int, seed: int) -> HomodyneSample:
    """Sample quadrature outcomes of the projected mode from the Wigner distribution."""
    if shots < 1000:
        raise ValidationError("mc_homodyne needs at least 1000 shots")
    state.check_physical()
    u = quadrature_vector(projector, phi)
    if u.size != state.mean.size:
        raise ValidationError("projector length must equal the number of modes")
    idx = np.flatnonzero(u)
    mu, cov = state.mean[idx], state.cov[np.ix_(idx, idx)]
    rng = np.random.default_rng(seed)
    samples = rng.multivariate_normal(mu, cov, size=shots, method="eigh") @ u[idx]
    var = float(samples.var(ddof=1))
    return HomodyneSample(
        mean=float(samples.mean()),
        variance=var,
        stderr=math.sqrt(var / shots),
        variance_stderr=var * math.sqrt(2.0 / (shots - 1)),
        expected_mean=float(u[idx] @ mu),
        expected_variance=float(u[idx] @ cov @ u[idx]),
    )
