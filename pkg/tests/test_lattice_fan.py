import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import random_gl2z
from syzkit.errors import (
    BoundaryRay,
    FanError,
    NonProportional,
    NonSimplicial,
    NonSmooth,
    NotCalabiYau,
    RedundantFacet,
)
from syzkit.lattice_fan import (
    CurveClass,
    DivisorClass,
    Fan2D,
    LatticeVec,
    apply,
    build_cy_fan,
    classify,
    compactify,
    curve_from_divisors,
    det,
    h_targets,
    infinity_index,
    intersection_number,
    is_calabi_yau,
    matmul,
    moment_polytope,
    self_intersection,
    solve_curve_class,
    sort_clockwise,
    unimodular_inverse,
)


def brute_force_vertices(m, c):
    """Every pairwise facet intersection that satisfies all inequalities, in exact arithmetic."""
    normals = [(j, 1) for j in range(m + 1)]
    pts = set()
    for a, b in itertools.combinations(range(m + 1), 2):
        (p, q), (r, s) = normals[a], normals[b]
        d = p * s - q * r
        x = Fraction(c[a] * s - c[b] * q, d)
        y = Fraction(p * c[b] - r * c[a], d)
        if all(n[0] * x + n[1] * y >= cj for n, cj in zip(normals, c)):
            pts.add((x, y))
    return pts


def test_build_has_expected_rays():
    assert build_cy_fan(3).rays == ((0, 1), (1, 1), (2, 1), (3, 1))
    assert build_cy_fan(0).rays == ((0, 1),)


def test_cy_witness_is_unique_for_m_ge_1():
    for m in range(1, 8):
        assert is_calabi_yau(build_cy_fan(m)) == (0, 1)


def test_classify_examples():
    c = classify(Fan2D(((0, 1), (1, 1), (2, 1))))
    assert c.m == 2 and c.nu == (0, 1) and c.transform == ((1, 0), (0, 1))
    swapped = classify(Fan2D(((1, 0), (1, 1), (1, 2))))
    assert swapped.m == 2
    assert apply(swapped.transform, (1, 2)) == (2, 1)


def test_not_calabi_yau():
    with pytest.raises(NotCalabiYau):
        classify(Fan2D(((1, 0), (0, 1), (-1, -1))))
    # CY but adjacent rays span an index-2 sublattice
    with pytest.raises(NonSmooth):
        classify(Fan2D(((0, 1), (2, 1))))


@pytest.mark.parametrize("rays, err", [
    (((0, 1), (0, 1)), FanError),
    (((0, 2), (1, 1)), FanError),
    (((1, 0), (-1, 0)), NonSimplicial),
    (((0, 1), (2, 1), (1, 1)), FanError),
])
def test_invalid_fans(rays, err):
    with pytest.raises(err):
        Fan2D(rays)


def test_sort_clockwise():
    assert sort_clockwise([(2, 1), (0, 1), (1, 1)]) == [(0, 1), (1, 1), (2, 1)]


@pytest.mark.parametrize("m", range(2, 9))
def test_compact_self_intersections(m):
    fan = build_cy_fan(m)
    assert [self_intersection(fan, i) for i in range(1, m)] == [-2] * (m - 1)
    with pytest.raises(BoundaryRay):
        self_intersection(fan, 0)
    assert intersection_number(fan, 1, 2) == 1
    assert intersection_number(fan, 1, m) == (1 if m == 2 else 0)


def test_non_proportional_neighbours():
    fan = Fan2D(((0, 1), (1, 1), (3, 1)))
    with pytest.raises(NonProportional):
        self_intersection(fan, 1)


def test_gl2z_invariance(rng):
    for _ in range(50):
        A = random_gl2z(rng)
        assert abs(det(*A)) == 1
        m = rng.randint(1, 9)
        fan = build_cy_fan(m).transform(A)
        c = classify(fan)
        assert c.m == m
        assert all(apply(c.transform, v) == (i, 1) for i, v in enumerate(fan.rays))
        assert [self_intersection(fan, i) for i in range(1, m)] == [-2] * (m - 1)
        assert matmul(A, unimodular_inverse(A)) == ((1, 0), (0, 1))


@pytest.mark.parametrize("m", range(2, 9))
def test_compactification_smooth_complete_with_h(m):
    for l in range(1, m):
        fan = compactify(m, l)
        assert fan.complete and fan.is_smooth()
        assert fan.rays[infinity_index(m)] == (-l, -1)
        h = solve_curve_class(fan, h_targets(m, l))
        assert h.is_consistent(fan)
        assert h.pairings[l] == 1 and sum(h.pairings) == 2


def test_curve_from_compact_divisor_is_consistent():
    fan = compactify(4, 2)
    c = curve_from_divisors(fan, {1: 1, 2: 1})
    assert c.is_consistent(fan)
    assert not CurveClass((1,) + (0,) * (len(fan.rays) - 1)).is_consistent(fan)


def test_principal_divisors_are_trivial():
    fan = compactify(3, 1)
    # div(chi^(1,0)) = sum <(1,0), v_j> D_j
    principal = DivisorClass(tuple(v.x for v in fan.rays))
    zero = DivisorClass((0,) * len(fan.rays))
    assert principal.linearly_equivalent(zero, fan)
    assert not DivisorClass((1,) + (0,) * (len(fan.rays) - 1)).linearly_equivalent(zero, fan)


def test_moment_polytope_matches_brute_force():
    rnd = random.Random(3)
    for _ in range(200):
        m = rnd.randint(1, 7)
        # strictly concave offsets give m nondegenerate vertices
        steps = sorted((Fraction(rnd.randint(-40, 40), rnd.randint(1, 6)) for _ in range(m)), reverse=True)
        if len(set(steps)) < m:
            continue
        c = [Fraction(rnd.randint(-5, 5))]
        for s in steps:
            c.append(c[-1] + s)
        poly = moment_polytope(m, c)
        assert set(poly.vertices) == brute_force_vertices(m, c)
        assert all(poly.contains(v) for v in poly.vertices)
        assert poly.edge_lengths() == tuple(steps[i - 1] - steps[i] for i in range(1, m))


def test_kahler_parameters():
    poly = moment_polytope(3, [0, 0, -1, -3])
    assert poly.edge_lengths() == (1, 1)
    assert poly.kahler_parameters() == pytest.approx((0.36787944117144233,) * 2)


def test_redundant_facet():
    with pytest.raises(RedundantFacet):
        moment_polytope(2, [0, 0, 0])


def test_json_roundtrip():
    fan = compactify(3, 1)
    assert Fan2D.from_json(json.loads(json.dumps(fan.to_json()))) == fan
    data = moment_polytope(2, [0, Fraction(1, 2), 0]).to_json()
    assert data["vertices"][0] == ["1/2", "0"]


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_primitive_matches_gcd(x, y):
    import math
    assert LatticeVec(x, y).is_primitive() == (math.gcd(x, y) == 1)
