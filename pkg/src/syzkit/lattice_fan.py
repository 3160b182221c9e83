"""Exact lattice geometry of two-dimensional fans.

Rays are stored in the order they are labelled, v_0, v_1, ..., and that order
must be angular.  The toric Calabi-Yau fans Sigma_m and their compactifications
are always produced in *clockwise* order, which is the labelling used for the
A_{m-1} resolution (v_i = (i, 1) with i increasing).  Fans read from user input
may be given in either orientation; :func:`sort_clockwise` puts an unordered
ray list into the standard orientation.

All arithmetic is on Python integers or :class:`fractions.Fraction`, so nothing
here can overflow or round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    BoundaryRay,
    EmptyPolytope,
    FanError,
    Inconsistent,
    NonProportional,
    NonSimplicial,
    NonSmooth,
    NotCalabiYau,
    RedundantFacet,
)


class LatticeVec(NamedTuple):
    x: int
    y: int

    def __neg__(self) -> LatticeVec:
        return LatticeVec(-self.x, -self.y)

    def __add__(self, other) -> LatticeVec:  # type: ignore[override]
        return LatticeVec(self.x + other[0], self.y + other[1])

    def scale(self, k: int) -> LatticeVec:
        return LatticeVec(k * self.x, k * self.y)

    def is_primitive(self) -> bool:
        return math.gcd(self.x, self.y) == 1


Matrix2 = tuple[tuple[int, int], tuple[int, int]]
IDENTITY: Matrix2 = ((1, 0), (0, 1))


def det(v: Sequence[int], w: Sequence[int]) -> int:
    """Determinant of the matrix with columns ``v`` and ``w``."""
    return v[0] * w[1] - v[1] * w[0]


def pairing(nu: Sequence[int], v: Sequence[int]) -> int:
    return nu[0] * v[0] + nu[1] * v[1]


def apply(matrix: Matrix2, v: Sequence[int]) -> LatticeVec:
    (a, b), (c, d) = matrix
    return LatticeVec(a * v[0] + b * v[1], c * v[0] + d * v[1])


def matmul(A: Matrix2, B: Matrix2) -> Matrix2:
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def unimodular_inverse(A: Matrix2) -> Matrix2:
    (a, b), (c, d) = A
    D = a * d - b * c
    if D not in (1, -1):
        raise ValueError(f"matrix {A} is not unimodular (det {D})")
    return ((d * D, -b * D), (-c * D, a * D))


def _as_vec(v: Iterable[int]) -> LatticeVec:
    x, y = v
    if int(x) != x or int(y) != y:
        raise FanError(f"ray {v!r} is not a lattice vector")
    return LatticeVec(int(x), int(y))


def _winding(rays: Sequence[LatticeVec]) -> float:
    """Total signed angle swept walking once around ``rays`` cyclically."""
    total = 0.0
    for v, w in zip(rays, rays[1:] + rays[:1]):
        total += math.atan2(det(v, w), pairing(v, w))
    return total


@dataclass(frozen=True)
class Fan2D:
    """A simplicial fan in the plane given by its ordered ray generators.

    ``complete`` marks fans whose last and first rays also bound a cone, so
    that the cones cover the whole plane.
    """

    rays: tuple[LatticeVec, ...]
    complete: bool = False

    def __post_init__(self):
        rays = tuple(_as_vec(v) for v in self.rays)
        object.__setattr__(self, "rays", rays)
        for v in rays:
            if not v.is_primitive():
                raise FanError(f"ray {tuple(v)} is not primitive")
        if len(set(rays)) != len(rays):
            raise FanError("rays must be pairwise distinct")
        pairs = self.adjacent_pairs()
        signs = set()
        for v, w in pairs:
            d = det(v, w)
            if d == 0:
                raise NonSimplicial(f"adjacent rays {tuple(v)}, {tuple(w)} are dependent")
            signs.add(d > 0)
        if len(signs) > 1:
            raise FanError("rays are not listed in angular order")
        if self.complete:
            if len(rays) < 3 or abs(abs(_winding(list(rays))) - 2 * math.pi) > 1e-9:
                raise FanError("a complete fan must wind exactly once around the origin")
        elif abs(sum(math.atan2(det(v, w), pairing(v, w)) for v, w in pairs)) >= 2 * math.pi:
            raise FanError("rays of an incomplete fan must span less than a full turn")

    def __len__(self) -> int:
        return len(self.rays)

    @property
    def orientation(self) -> int:
        """-1 for clockwise ray order, +1 for counterclockwise, 0 if undefined."""
        if len(self.rays) < 2:
            return 0
        return 1 if det(self.rays[0], self.rays[1]) > 0 else -1

    def adjacent_pairs(self) -> list[tuple[LatticeVec, LatticeVec]]:
        rays = list(self.rays)
        pairs = list(zip(rays, rays[1:]))
        if self.complete and len(rays) > 2:
            pairs.append((rays[-1], rays[0]))
        return pairs

    def adjacent_determinants(self) -> list[int]:
        return [det(v, w) for v, w in self.adjacent_pairs()]

    def is_smooth(self) -> bool:
        return all(abs(d) == 1 for d in self.adjacent_determinants())

    def neighbors(self, i: int) -> tuple[int, int]:
        """Indices of the rays on either side of ray ``i``."""
        n = len(self.rays)
        if not 0 <= i < n:
            raise IndexError(f"ray index {i} out of range for {n} rays")
        if self.complete:
            return (i - 1) % n, (i + 1) % n
        if i == 0 or i == n - 1:
            raise BoundaryRay(f"ray {i} lies on the boundary of the fan; D_{i} is not compact")
        return i - 1, i + 1

    def index(self, v: Sequence[int]) -> int:
        return self.rays.index(_as_vec(v))

    def transform(self, A: Matrix2) -> Fan2D:
        return Fan2D(tuple(apply(A, v) for v in self.rays), self.complete)

    def to_json(self) -> dict:
        return {"rays": [[v.x, v.y] for v in self.rays], "complete": self.complete}

    @classmethod
    def from_json(cls, data: Mapping) -> Fan2D:
        return cls(tuple(_as_vec(v) for v in data["rays"]), bool(data.get("complete", False)))


def sort_clockwise(rays: Iterable[Sequence[int]]) -> list[LatticeVec]:
    """Sort rays lying in an open half-plane into clockwise order."""
    vecs = [_as_vec(v) for v in rays]
    if len(vecs) < 2:
        return vecs

    def cmp(v, w):
        d = det(v, w)
        return -1 if d < 0 else (1 if d > 0 else 0)

    return sorted(vecs, key=cmp_to_key(cmp))


def build_cy_fan(m: int) -> Fan2D:
    """The fan Sigma_m with rays (0,1), (1,1), ..., (m,1)."""
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    return Fan2D(tuple(LatticeVec(i, 1) for i in range(m + 1)))


def _bezout_witness(v: LatticeVec) -> LatticeVec:
    # (a, b) with a*x + b*y = 1 for primitive v
    x, y = v
    if y == 0:
        return LatticeVec(x, 0)
    a = pow(x, -1, abs(y)) if abs(y) > 1 else 0
    b, r = divmod(1 - a * x, y)
    assert r == 0
    return LatticeVec(a, b)


def solve_pairing(rays: Sequence[LatticeVec], values: Sequence[int]) -> LatticeVec | None:
    """Find nu in M with <nu, rays[j]> = values[j] for every j, or None."""
    if not rays:
        raise FanError("empty fan")
    nu = None
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            d = det(rays[i], rays[j])
            if d:
                (p, q), (r, s) = rays[i], rays[j]
                a, b = values[i], values[j]
                # rows of the system are the ray vectors
                nx, rx = divmod(a * s - b * q, d)
                ny, ry = divmod(p * b - r * a, d)
                if rx or ry:
                    return None
                nu = LatticeVec(nx, ny)
                break
        if nu is not None:
            break
    if nu is None:
        # all rays parallel: any particular solution for the first one will do
        nu = _bezout_witness(rays[0]).scale(values[0])
    if all(pairing(nu, v) == t for v, t in zip(rays, values)):
        return nu
    return None


def is_calabi_yau(fan: Fan2D) -> LatticeVec | None:
    """Return nu with <nu, v_i> = 1 for every ray, or None when the fan is not CY."""
    return solve_pairing(fan.rays, [1] * len(fan.rays))


class Classification(NamedTuple):
    m: int
    transform: Matrix2
    nu: LatticeVec


def classify(fan: Fan2D) -> Classification:
    """Identify a toric Calabi-Yau fan with Sigma_m.

    Normalizes the first two labelled rays to (0,1) and (1,1); the remaining
    rays are then forced onto (i,1).  The returned ``transform`` satisfies
    ``apply(transform, fan.rays[i]) == (i, 1)`` for every i.

    Raises
    ------
    NotCalabiYau
        When no CY witness nu exists.
    NonSmooth
        When adjacent rays do not form a lattice basis.
    """
    nu = is_calabi_yau(fan)
    if nu is None:
        raise NotCalabiYau(f"no nu pairs to 1 with all rays of {[tuple(v) for v in fan.rays]}")
    rays = fan.rays
    m = len(rays) - 1
    if m == 0:
        x, y = rays[0]
        A: Matrix2 = ((y, -x), (nu.x, nu.y))
    else:
        v0, v1 = rays[0], rays[1]
        d = det(v0, v1)
        if abs(d) != 1:
            raise NonSmooth(f"rays {tuple(v0)}, {tuple(v1)} do not span the lattice")
        B_inv = ((v1.y * d, -v1.x * d), (-v0.y * d, v0.x * d))
        A = matmul(((0, 1), (1, 1)), B_inv)
    for i, v in enumerate(rays):
        if apply(A, v) != (i, 1):
            raise NonSmooth(f"ray {i} maps to {tuple(apply(A, v))}, expected ({i}, 1)")
    return Classification(m, A, nu)


def self_intersection(fan: Fan2D, i: int) -> int:
    """Self-intersection of the compact divisor D_i, from v_{i-1} + v_{i+1} = -(D_i.D_i) v_i."""
    a, b = fan.neighbors(i)
    v = fan.rays[i]
    s = fan.rays[a] + fan.rays[b]
    if det(s, v) != 0:
        raise NonProportional(f"v_{a} + v_{b} = {tuple(s)} is not a multiple of v_{i} = {tuple(v)}")
    k = pairing(s, v) // pairing(v, v)
    return -k


def intersection_number(fan: Fan2D, i: int, j: int) -> int:
    """D_i . D_j for a smooth fan, with D_i compact."""
    if i == j:
        return self_intersection(fan, i)
    if j in fan.neighbors(i):
        return 1
    return 0


@dataclass(frozen=True)
class DivisorClass:
    """Formal sum of toric divisors, sum_j a_j D_j."""

    coefficients: tuple[int, ...]

    def linearly_equivalent(self, other: DivisorClass, fan: Fan2D) -> bool:
        diff = [a - b for a, b in zip(self.coefficients, other.coefficients)]
        return solve_pairing(fan.rays, diff) is not None


@dataclass(frozen=True)
class CurveClass:
    """A curve class recorded by its intersection numbers with each toric divisor."""

    pairings: tuple[int, ...]

    def relation_defects(self, fan: Fan2D) -> tuple[int, int]:
        """sum_j <nu, v_j> (c . D_j) for nu = (1,0) and (0,1); zero for a genuine class."""
        return (
            sum(v.x * t for v, t in zip(fan.rays, self.pairings)),
            sum(v.y * t for v, t in zip(fan.rays, self.pairings)),
        )

    def is_consistent(self, fan: Fan2D) -> bool:
        return self.relation_defects(fan) == (0, 0)


def curve_from_divisors(fan: Fan2D, coefficients: Mapping[int, int]) -> CurveClass:
    """Intersection numbers of the curve sum_k b_k D_k (each D_k compact) with every D_j."""
    pairings = [0] * len(fan.rays)
    for k, b in coefficients.items():
        if not b:
            continue
        for j in range(len(fan.rays)):
            pairings[j] += b * intersection_number(fan, k, j)
    return CurveClass(tuple(pairings))


def compactify(m: int, l: int) -> Fan2D:
    """Smooth complete fan obtained from Sigma_m by compactifying along v_l.

    Rays, clockwise: (0,1), ..., (m,1), (1,0), -v_l, (-1,0).  The divisor at
    infinity D_inf is ray index m + 2.
    """
    if not 1 <= l <= m - 1:
        raise ValueError(f"need 1 <= l <= m-1, got m={m}, l={l}")
    rays = [LatticeVec(i, 1) for i in range(m + 1)]
    rays += [LatticeVec(1, 0), LatticeVec(-l, -1), LatticeVec(-1, 0)]
    return Fan2D(tuple(rays), complete=True)


def infinity_index(m: int) -> int:
    return m + 2


def h_targets(m: int, l: int) -> dict[int, int]:
    """Intersection data of h: h.D_l = h.D_inf = 1, zero against all other divisors."""
    return {l: 1, infinity_index(m): 1}


def solve_curve_class(fan: Fan2D, targets: Mapping) -> CurveClass:
    """The curve class with prescribed intersection numbers against the toric divisors.

    ``targets`` maps a ray (by index or by vector) to the intersection number;
    missing rays default to zero.
    """
    if not fan.complete or not fan.is_smooth():
        raise FanError("solve_curve_class needs a complete smooth fan")
    pairings = [0] * len(fan.rays)
    for key, val in targets.items():
        idx = key if isinstance(key, int) else fan.index(key)
        pairings[idx] = int(val)
    c = CurveClass(tuple(pairings))
    defects = c.relation_defects(fan)
    if defects != (0, 0):
        raise Inconsistent(f"linear-equivalence relations fail: {defects}")
    return c


@dataclass(frozen=True)
class MomentPolytope:
    """Polyhedral set {x : <v_j, x> >= c_j} for the rays v_j = (j, 1) of Sigma_m."""

    facets: tuple[tuple[LatticeVec, Fraction], ...]
    vertices: tuple[tuple[Fraction, Fraction], ...]

    @property
    def m(self) -> int:
        return len(self.facets) - 1

    def edge_lengths(self) -> tuple[Fraction, ...]:
        """Lattice lengths of the compact edges T_1, ..., T_{m-1}."""
        return tuple(
            abs(self.vertices[i][0] - self.vertices[i - 1][0]) for i in range(1, len(self.vertices))
        )

    def kahler_parameters(self) -> tuple[float, ...]:
        """q_i = exp(-length(T_i))."""
        return tuple(math.exp(-float(t)) for t in self.edge_lengths())

    def contains(self, point: Sequence) -> bool:
        return all(pairing(v, point) >= c for v, c in self.facets)

    def to_json(self) -> dict:
        return {
            "facets": [{"normal": [v.x, v.y], "offset": str(c)} for v, c in self.facets],
            "vertices": [[str(x), str(y)] for x, y in self.vertices],
        }


def moment_polytope(m: int, c: Sequence) -> MomentPolytope:
    """Moment polytope of X_{Sigma_m} for facet offsets c_0, ..., c_m.

    ``vertices[i - 1]`` is T_{i-1,i}, the intersection of facets i-1 and i.
    With normals (j, 1) the vertices move towards negative x as i grows.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if len(c) != m + 1:
        raise ValueError(f"need {m + 1} offsets, got {len(c)}")
    try:
        offsets = [Fraction(x) for x in c]
    except (ValueError, OverflowError) as exc:
        raise EmptyPolytope(f"offsets must be finite: {exc}") from exc
    facets = tuple((LatticeVec(j, 1), offsets[j]) for j in range(m + 1))
    # (j-1) x + y = c_{j-1} and j x + y = c_j
    vertices = []
    for j in range(1, m + 1):
        x = offsets[j] - offsets[j - 1]
        vertices.append((x, offsets[j] - j * x))
    for i in range(1, len(vertices)):
        if vertices[i][0] >= vertices[i - 1][0]:
            raise RedundantFacet(f"facet {i} does not support an edge of positive length")
    return MomentPolytope(facets, tuple(vertices))
