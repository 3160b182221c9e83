"""Periods of the mirror uv = g(z) over the vanishing cycles S_l.

For real Kahler parameters 0 < q_j < 1 the roots of g are the negative reals
-1/(q_1 ... q_j).  Over the segment between the (l-1)-th and l-th root the
circles {uv = g(z), |u| = |v|} sweep out a 2-sphere S_l.  The holomorphic
volume form is normalized as

    Omega = (1 / 2 pi i) dlog z ^ dlog u,

so that the fibre circle's factor 2 pi i cancels and the period over S_l is
the real number log q_l.  With this normalization Im Omega restricts to zero
on S_l.

Cycles are parametrized by (t, theta) in [0, 1] x [0, 2 pi) with |z|
log-uniform in t, and oriented by (d theta, dt).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateInterval, QuadratureDivergence
from .mirror import MirrorPoint, root_scales

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CycleSpec:
    """The cycle S_l of the mirror of X_{Sigma_m} at real Kahler point q."""

    m: int
    l: int
    q: tuple[float, ...]

    def __post_init__(self):
        q = tuple(float(x) for x in self.q)
        object.__setattr__(self, "q", q)
        if len(q) != self.m - 1:
            raise ValueError(f"need {self.m - 1} values of q for m={self.m}, got {len(q)}")
        if not 1 <= self.l <= self.m - 1:
            raise ValueError(f"cycle index l={self.l} outside 1..{self.m - 1}")
        for j, x in enumerate(q, start=1):
            if x == 1.0:
                raise DegenerateInterval(f"q_{j} = 1: roots {j - 1} and {j} of g coincide")
            if not 0 < x < 1:
                raise ValueError(f"q_{j} = {x} outside (0, 1)")

    @property
    def log_step(self) -> float:
        """d log|z| / dt = -log q_l."""
        return -math.log(self.q[self.l - 1])

    @property
    def endpoints(self) -> tuple[float, float]:
        """z at t = 0 and t = 1: -1/(q_1...q_{l-1}) and -1/(q_1...q_l)."""
        Q = root_scales(self.q)
        return -1.0 / Q[self.l - 1], -1.0 / Q[self.l]


@dataclass(frozen=True)
class QuadratureParams:
    """Tensor grid: Gauss-Legendre in t, trapezoid (periodic) in theta."""

    n_t: int = 32
    n_theta: int = 32

    def __post_init__(self):
        if self.n_t < 8 or self.n_theta < 8:
            raise ValueError("quadrature grids need at least 8 points per direction")

    def refined(self) -> QuadratureParams:
        return QuadratureParams(2 * self.n_t, 2 * self.n_theta)

    def to_json(self) -> dict:
        return {"n_t": self.n_t, "n_theta": self.n_theta}


@dataclass(frozen=True)
class PeriodResult:
    value: complex
    error_estimate: float
    grid: QuadratureParams

    def to_json(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "error": self.error_estimate,
                "grid": self.grid.to_json()}


def _log_derivative_weight(spec: CycleSpec, z):
    """kappa(z) = z g'(z) / g(z) = sum_l Q_l z / (1 + Q_l z)."""
    Q = root_scales(spec.q)
    zz = np.asarray(z)[..., None]
    return np.sum(Q * zz / (1.0 + Q * zz), axis=-1)


def _embed(spec: CycleSpec, t, theta, imbalance: float = 0.0, offset: float = 0.0):
    """Vectorized (z, u, v) on the cycle {uv = g(z), |u|^2 - |v|^2 = imbalance |g| + offset}."""
    t = np.asarray(t, dtype=float)
    theta = np.asarray(theta, dtype=float)
    start, end = spec.endpoints
    z = start * np.exp(spec.log_step * t)
    z = np.where(t == 0.0, start, np.where(t == 1.0, end, z))
    g = np.ones_like(z)
    for Q in root_scales(spec.q):
        g = g * (1.0 + Q * z)
    # the endpoints are roots of g
    g = np.where((t == 0.0) | (t == 1.0), 0.0, g)
    s = np.abs(g)
    if imbalance == 0.0 and offset == 0.0:
        rho_u = rho_v = np.sqrt(s)
    else:
        d = imbalance * s + offset
        rho_u2 = 0.5 * (d + np.sqrt(d * d + 4.0 * s * s))
        safe = np.where(rho_u2 > 0, rho_u2, 1.0)
        rho_v2 = np.where(rho_u2 > 0, s * s / safe, 0.0)
        rho_u, rho_v = np.sqrt(rho_u2), np.sqrt(rho_v2)
    phase = np.exp(1j * theta)
    return z, rho_u * phase, np.sign(g) * rho_v * np.conj(phase)


def cycle_point(spec: CycleSpec, t: float, theta: float, *,
                imbalance: float = 0.0, offset: float = 0.0) -> MirrorPoint:
    """Point of S_l at parameters (t, theta).

    ``imbalance`` deforms the cycle to |u|^2 - |v|^2 = imbalance * |g(z)|,
    a sphere homologous to S_l that is not Lagrangian unless imbalance = 0.
    ``offset`` adds a constant to |u|^2 - |v|^2; those surfaces are level
    sets of the moment map of the circle action, hence still Lagrangian.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t = {t} outside [0, 1]")
    z, u, v = _embed(spec, t, theta, imbalance, offset)
    return MirrorPoint(complex(z), complex(u), complex(v))


def _tangents(spec: CycleSpec, t, theta, imbalance: float = 0.0):
    """Point and exact tangent vectors d/dt, d/dtheta of (log z, u, v).

    Valid for any ``imbalance`` since |u| and |v| stay proportional to |g|^(1/2).
    """
    z, u, v = _embed(spec, t, theta, imbalance)
    L = spec.log_step
    kappa = _log_derivative_weight(spec, z)
    half = 0.5 * L * kappa
    dlogz_t = np.full_like(u, L)
    dlogz_th = np.zeros_like(u)
    return {
        "z": z, "u": u, "v": v,
        "logz_t": dlogz_t, "u_t": half * u, "v_t": half * v,
        "logz_th": dlogz_th, "u_th": 1j * u, "v_th": -1j * v,
    }


def _fd_tangents(spec: CycleSpec, t, theta, h: float, imbalance: float = 0.0,
                 offset: float = 0.0):
    """Tangent vectors by central differences of the embedding."""
    z, u, v = _embed(spec, t, theta, imbalance, offset)
    zp, up, vp = _embed(spec, t + h, theta, imbalance, offset)
    zm, um, vm = _embed(spec, t - h, theta, imbalance, offset)
    zP, uP, vP = _embed(spec, t, theta + h, imbalance, offset)
    zM, uM, vM = _embed(spec, t, theta - h, imbalance, offset)
    lz = lambda w: np.log(w.astype(complex))  # noqa: E731
    return {
        "z": z, "u": u, "v": v,
        "logz_t": (lz(zp) - lz(zm)) / (2 * h), "u_t": (up - um) / (2 * h),
        "v_t": (vp - vm) / (2 * h),
        "logz_th": (lz(zP) - lz(zM)) / (2 * h), "u_th": (uP - uM) / (2 * h),
        "v_th": (vP - vM) / (2 * h),
    }


def _omega_density(tg) -> np.ndarray:
    """Pullback of (1/2 pi i) dlog z ^ dlog u evaluated on (d/dtheta, d/dt)."""
    X_z, Y_z = tg["logz_th"], tg["logz_t"]
    X_u, Y_u = tg["u_th"] / tg["u"], tg["u_t"] / tg["u"]
    return (X_z * Y_u - Y_z * X_u) / (TWO_PI * 1j)


def _kahler_density(tg) -> np.ndarray:
    """Pullback of (i/2)(du ^ du* + dv ^ dv* + dlog z ^ dlog z*) on (d/dtheta, d/dt)."""
    total = 0.0
    for w in ("u", "v", "logz"):
        X, Y = tg[f"{w}_th"], tg[f"{w}_t"]
        total = total - np.imag(X * np.conj(Y))
    return total


def _tangent_norms(tg) -> tuple[np.ndarray, np.ndarray]:
    nt = np.sqrt(sum(np.abs(tg[f"{w}_t"]) ** 2 for w in ("u", "v", "logz")))
    nth = np.sqrt(sum(np.abs(tg[f"{w}_th"]) ** 2 for w in ("u", "v", "logz")))
    return nt, nth


def _grid(params: QuadratureParams):
    x, w = np.polynomial.legendre.leggauss(params.n_t)
    t = 0.5 * (x + 1.0)
    wt = 0.5 * w
    theta = TWO_PI * np.arange(params.n_theta) / params.n_theta
    wth = np.full(params.n_theta, TWO_PI / params.n_theta)
    T, TH = np.meshgrid(t, theta, indexing="ij")
    W = np.outer(wt, wth)
    return T, TH, W


def _integrate(density_fn, spec: CycleSpec, params: QuadratureParams, imbalance: float) -> complex:
    T, TH, W = _grid(params)
    dens = density_fn(_tangents(spec, T, TH, imbalance))
    vals = (W * dens).ravel()
    re = math.fsum(np.real(vals))
    im = math.fsum(np.imag(vals))
    return complex(re, im)


def period_quadrature(spec: CycleSpec, params: QuadratureParams = QuadratureParams(), *,
                      tol: float = 1e-6, imbalance: float = 0.0) -> PeriodResult:
    """Integrate Omega over S_l numerically; the error estimate comes from one grid doubling."""
    coarse = _integrate(_omega_density, spec, params, imbalance)
    fine_grid = params.refined()
    fine = _integrate(_omega_density, spec, fine_grid, imbalance)
    err = abs(fine - coarse)
    if err > tol:
        raise QuadratureDivergence(f"refinement changed the period by {err:.3e} > {tol:.1e}")
    return PeriodResult(fine, err, fine_grid)


def period_closed_form(spec: CycleSpec) -> complex:
    """log of the ratio of the interval endpoints, which equals log q_l."""
    start, end = spec.endpoints
    return complex(math.log(start / end), 0.0)


@dataclass(frozen=True)
class LagrangianResidual:
    """Largest violations of the special Lagrangian conditions over the grid.

    ``kahler`` is |omega_I(d_t, d_theta)| / (|d_t| |d_theta|), the cosine of
    the Kahler angle, so it is scale free; ``imag_omega`` is the largest
    |Im Omega(d_theta, d_t)|.
    """

    kahler: float
    imag_omega: float


def lagrangian_residual(spec: CycleSpec, params: QuadratureParams = QuadratureParams(), *,
                        step: float = 1e-5, margin: float = 1e-3,
                        imbalance: float = 0.0, offset: float = 0.0) -> LagrangianResidual:
    """Special Lagrangian defects of S_l from finite differences of :func:`cycle_point`.

    The t grid stays ``margin`` away from both ends, where u and v vanish like
    the square root of g and the parametrization is not smooth.
    """
    t = np.linspace(margin, 1.0 - margin, params.n_t)
    theta = TWO_PI * np.arange(params.n_theta) / params.n_theta
    T, TH = np.meshgrid(t, theta, indexing="ij")
    tg = _fd_tangents(spec, T, TH, step, imbalance, offset)
    omega_i = _kahler_density(tg)
    nt, nth = _tangent_norms(tg)
    kahler = float(np.max(np.abs(omega_i) / (nt * nth)))
    imag = float(np.max(np.abs(np.imag(_omega_density(tg)))))
    return LagrangianResidual(kahler, imag)


@dataclass(frozen=True)
class HKPeriods:
    """Hyper-Kahler periods (integrals of omega_I, omega_J, omega_K over a basis)."""

    Pi_I: tuple[float, ...]
    Pi_J: tuple[float, ...]
    Pi_K: tuple[float, ...]


@dataclass(frozen=True)
class HKCheck:
    mirror: HKPeriods
    x_side: HKPeriods
    deviation: float
    passed: bool
    errors: tuple[float, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "mirror": {"Pi_I": list(self.mirror.Pi_I), "Pi_J": list(self.mirror.Pi_J),
                       "Pi_K": list(self.mirror.Pi_K)},
            "x_side": {"Pi_I": list(self.x_side.Pi_I), "Pi_J": list(self.x_side.Pi_J),
                       "Pi_K": list(self.x_side.Pi_K)},
            "deviation": self.deviation,
            "pass": self.passed,
        }


def hk_period_check(m: int, q: Sequence[float], params: QuadratureParams = QuadratureParams(),
                    *, tol: float = 1e-5) -> HKCheck:
    """Compare hyper-Kahler periods of X and its mirror under the I <-> K twist.

    Mirror side, per cycle S_l: Pi_I = int omega_I (from the Kahler density),
    and Omega = -omega_K + i omega_J gives Pi_J = Im int Omega and
    Pi_K = -Re int Omega.  On X the divisors D_l are complex curves, so
    Pi_J = Pi_K = 0 there, while Pi_I[l] = int_{D_l} omega = -log q_l.
    The identities checked are Pi_I(mirror) = Pi_K(X), Pi_J(mirror) = Pi_J(X)
    and Pi_K(mirror) = Pi_I(X).
    """
    m_I, m_J, m_K, errs = [], [], [], []
    for l in range(1, m):
        spec = CycleSpec(m, l, tuple(q))
        res = period_quadrature(spec, params, tol=tol)
        kahler = _integrate(_kahler_density, spec, params.refined(), 0.0)
        m_I.append(kahler.real)
        m_J.append(res.value.imag)
        m_K.append(-res.value.real)
        errs.append(res.error_estimate)
    x_I = tuple(-math.log(x) for x in q)
    zeros = tuple(0.0 for _ in q)
    mirror = HKPeriods(tuple(m_I), tuple(m_J), tuple(m_K))
    x_side = HKPeriods(x_I, zeros, zeros)
    dev = max(
        [abs(a - b) for a, b in zip(mirror.Pi_I, x_side.Pi_K)]
        + [abs(a - b) for a, b in zip(mirror.Pi_J, x_side.Pi_J)]
        + [abs(a - b) for a, b in zip(mirror.Pi_K, x_side.Pi_I)],
        default=0.0,
    )
    return HKCheck(mirror, x_side, dev, dev < tol, tuple(errs))
