"""The SYZ mirror uv = g(z) of X_{Sigma_m} and the mirror map.

``g`` is built two ways:

* from the open invariants, g(z) = 1 + sum_i (prod_{j<i} q_j^{i-j}) (1 + delta_i) z^i;
* from the closed product, g(z) = prod_{l=0}^{m-1} (1 + q_1 ... q_l z).

:func:`verify_identity` compares the two as exact integer polynomials in the
q_j.  Everything numeric (mirror map, its inverse, the charts) uses the
product form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .enumerative import delta_series
from .errors import (
    IdentityMismatch,
    NotNormalized,
    RootSeparationFailure,
    ZeroFiberCoordinate,
)
from .lattice_fan import MomentPolytope
from .multipoly import MultiPoly, first_difference

DeltaFn = Callable[[int, int], MultiPoly]


def prefactor(m: int, i: int) -> MultiPoly:
    """prod_{j=1}^{i-1} q_j^{i-j}."""
    exps = [0] * (m - 1)
    for j in range(1, i):
        exps[j - 1] = i - j
    return MultiPoly.monomial(exps)


@dataclass(frozen=True)
class GluingPolynomial:
    """g(z) = sum_i coeff[i] z^i with coefficients in Z[q_1, ..., q_{m-1}]."""

    m: int
    coeff: tuple[MultiPoly, ...]

    def __post_init__(self):
        if len(self.coeff) != self.m + 1:
            raise ValueError(f"need {self.m + 1} coefficients, got {len(self.coeff)}")

    def check_invariants(self) -> list[str]:
        """Violated structural invariants (empty when all hold)."""
        problems = []
        if self.coeff[0] != MultiPoly.one(self.m - 1):
            problems.append("coeff[0] != 1")
        if self.coeff[self.m] != prefactor(self.m, self.m):
            problems.append("leading coefficient != prod q_j^(m-j)")
        for i, c in enumerate(self.coeff):
            if not (c.is_polynomial and c.has_nonnegative_coefficients()):
                problems.append(f"coeff[{i}] has negative exponents or coefficients")
        return problems

    def evaluate_coefficients(self, q: Sequence[complex]) -> list[complex]:
        return [c.evaluate(q) for c in self.coeff]

    def __call__(self, z: complex, q: Sequence[complex]) -> complex:
        total = 0
        for c in reversed(self.coeff):
            total = total * z + c.evaluate(q)
        return total

    def to_json(self) -> dict:
        return {"m": self.m, "coeff": [c.to_json() for c in self.coeff]}

    @classmethod
    def from_json(cls, data) -> GluingPolynomial:
        m = int(data["m"])
        return cls(m, tuple(MultiPoly.from_json(c, m - 1) for c in data["coeff"]))


def g_from_invariants(m: int, *, delta: DeltaFn = delta_series) -> GluingPolynomial:
    """g(z) assembled from the open Gromov-Witten correction series delta_i."""
    if m < 1:
        raise ValueError("m must be at least 1")
    n = m - 1
    coeff = [MultiPoly.one(n)]
    for i in range(1, m + 1):
        coeff.append(prefactor(m, i) * (1 + delta(m, i)))
    return GluingPolynomial(m, tuple(coeff))


def g_from_product(m: int) -> GluingPolynomial:
    """Exact expansion of (1 + z)(1 + q_1 z)(1 + q_1 q_2 z) ... (1 + q_1 ... q_{m-1} z)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    n = m - 1
    one = MultiPoly.one(n)
    coeff = [one]
    for l in range(m):
        # factor (1 + Q_l z), Q_l = q_1 ... q_l
        Q = MultiPoly.monomial([1] * l + [0] * (n - l))
        new = [MultiPoly.zero(n)] * (len(coeff) + 1)
        for i, c in enumerate(coeff):
            new[i] = new[i] + c
            new[i + 1] = new[i + 1] + c * Q
        coeff = new
    return GluingPolynomial(m, tuple(coeff))


def find_mismatch(m: int, *, delta: DeltaFn = delta_series) -> IdentityMismatch | None:
    """First coefficient where the two constructions differ, or None if they agree."""
    left = g_from_invariants(m, delta=delta)
    right = g_from_product(m)
    for i, (a, b) in enumerate(zip(left.coeff, right.coeff)):
        diff = first_difference(a, b)
        if diff is not None:
            exps, ca, cb = diff
            return IdentityMismatch(m, i, exps, ca, cb)
    return None


def verify_identity(m: int, *, delta: DeltaFn = delta_series) -> bool:
    """Exact coefficient-by-coefficient comparison of the two constructions of g."""
    return find_mismatch(m, delta=delta) is None


# numeric side


@dataclass(frozen=True)
class KahlerPoint:
    """Canonical Kahler coordinates q_1, ..., q_{m-1} (0 < |q_j| < 1)."""

    q: tuple[complex, ...]

    def __post_init__(self):
        q = tuple(self.q)
        object.__setattr__(self, "q", q)
        for x in q:
            if x == 0:
                raise ValueError("Kahler coordinates must be nonzero")
            if isinstance(x, (int, float)) and not 0 < x < 1:
                raise ValueError(f"real Kahler coordinate {x} outside (0, 1)")
            if not abs(x) < 1:
                raise ValueError(f"|q| = {abs(x)} is not < 1")

    @property
    def m(self) -> int:
        return len(self.q) + 1

    @property
    def is_real(self) -> bool:
        return all(isinstance(x, (int, float)) or getattr(x, "imag", 0) == 0 for x in self.q)

    @classmethod
    def from_polytope(cls, polytope: MomentPolytope) -> KahlerPoint:
        return cls(polytope.kahler_parameters())


def resolve_kahler(m: int, *, q: Sequence[float] | None = None,
                   polytope: MomentPolytope | None = None, rtol: float = 1e-12) -> KahlerPoint:
    """Kahler data from q values, a moment polytope, or both (which must agree)."""
    if q is None and polytope is None:
        raise ValueError("need q values or a moment polytope")
    from_poly = KahlerPoint.from_polytope(polytope) if polytope is not None else None
    if q is not None:
        point = KahlerPoint(tuple(q))
        if from_poly is not None:
            if not np.allclose(point.q, from_poly.q, rtol=rtol, atol=0):
                raise ValueError(f"q = {point.q} disagrees with polytope edge lengths {from_poly.q}")
            point = from_poly
    else:
        point = from_poly
    if point.m != m:
        raise ValueError(f"need {m - 1} Kahler coordinates, got {len(point.q)}")
    return point


def _as_q(m: int, q) -> np.ndarray:
    q = np.asarray(q.q if isinstance(q, KahlerPoint) else q)
    if q.shape != (m - 1,):
        raise ValueError(f"need {m - 1} values of q for m={m}, got shape {q.shape}")
    return q


def root_scales(q: Sequence[complex]) -> np.ndarray:
    """Q_l = q_1 ... q_l for l = 0..m-1; the roots of g are -1/Q_l."""
    return np.concatenate([[1.0], np.cumprod(np.asarray(q))])


def mirror_map(m: int, q) -> np.ndarray:
    """Coefficients C_0..C_m of the mirror curve at Kahler point ``q``."""
    q = _as_q(m, q)
    C = np.ones(1, dtype=np.result_type(q, float))
    for Q in root_scales(q):
        C = np.convolve(C, [1.0, Q])
    return C


def g_value(z: complex, q) -> complex:
    """g(z) in product form."""
    out = 1.0
    for Q in root_scales(q):
        out = out * (1 + Q * z)
    return out


def inverse_mirror_map(C: Sequence[complex], *, rtol: float = 1e-8) -> np.ndarray:
    """Recover q from mirror coefficients by factoring sum C_i z^i.

    The roots are sorted by modulus, r_1, ..., r_m, and q_l = r_l / r_{l+1}.
    Complex results are returned as plain root ratios (the analytic
    continuation of the mirror map); for real input whose roots are all real
    the result is real.

    Raises
    ------
    NotNormalized
        If C_0 != 1.
    RootSeparationFailure
        If two consecutive root moduli agree to within ``rtol``.
    """
    C = np.asarray(C)
    if C.ndim != 1 or len(C) < 2:
        raise ValueError("need at least two coefficients")
    if abs(C[0] - 1) > 1e-14:
        raise NotNormalized(f"C_0 = {C[0]}, expected 1")
    if C[-1] == 0:
        raise ValueError("leading coefficient C_m must be nonzero")
    roots = np.roots(C[::-1])
    roots = _polish(C, roots)
    roots = roots[np.argsort(np.abs(roots), kind="stable")]
    mods = np.abs(roots)
    for a, b in zip(mods, mods[1:]):
        if b - a <= rtol * b:
            raise RootSeparationFailure(f"root moduli {a:.17g} and {b:.17g} are not separated")
    q = roots[:-1] / roots[1:]
    if np.isrealobj(C) and np.all(np.abs(roots.imag) <= 1e-12 * mods):
        q = q.real
    return q


def _polish(C: np.ndarray, roots: np.ndarray, steps: int = 3) -> np.ndarray:
    """A few Newton steps on each eigenvalue root."""
    coeffs = C[::-1].astype(complex)
    deriv = np.polyder(coeffs)
    out = roots.astype(complex)
    for _ in range(steps):
        p = np.polyval(coeffs, out)
        dp = np.polyval(deriv, out)
        ok = dp != 0
        out = np.where(ok, out - np.where(ok, p / np.where(ok, dp, 1), 0), out)
    return out


# charts


@dataclass(frozen=True)
class MirrorPoint:
    z: complex
    u: complex
    v: complex

    def residual(self, q) -> complex:
        """uv - g(z)."""
        return self.u * self.v - g_value(self.z, q)


def _check_chart(side: str, z1: complex, z2: complex) -> None:
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    if z1 == 0:
        raise ValueError("z1 must be nonzero")
    if z2 == 0:
        raise ZeroFiberCoordinate("z2 = 0 is outside both semi-flat charts")


def chart_embed(side: str, z1: complex, z2: complex, q) -> MirrorPoint:
    """iota_+(z1, z2) = (z1, z2 g(z1), 1/z2); iota_-(z1, z2) = (z1, z2, g(z1)/z2)."""
    _check_chart(side, z1, z2)
    g = g_value(z1, q)
    if side == "+":
        return MirrorPoint(z1, z2 * g, 1 / z2)
    return MirrorPoint(z1, z2, g / z2)


def superpotential(side: str, z1: complex, z2: complex, q) -> complex:
    """W = z2 g(z1) on the + chart and z2 on the - chart; both equal u."""
    _check_chart(side, z1, z2)
    return z2 * g_value(z1, q) if side == "+" else z2

