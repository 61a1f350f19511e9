import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isograph.curves import (
    CurveError,
    EllipticCurve,
    ExcludedJInvariant,
    Point,
    XMapPole,
    curve_from_j,
    group_order_scalar_frobenius,
    isomorphism_scale,
    quadratic_twist,
    scalar_mul,
    torsion_basis,
    torsion_order_extension,
    twist_to_scalar_frobenius,
    velu_quotient,
    x_multiples,
)
from isograph.fields import make_extension_field

F13 = make_extension_field(13, 1)
F169 = make_extension_field(13, 2)
F13_4 = make_extension_field(13, 4)


def curve_47(field):
    return EllipticCurve(field.element(4), field.element(7))


def brute_order(curve):
    """Independent oracle: point count by scanning every x and applying the
    Euler criterion to the cubic's value."""
    f = curve.field
    at, bt = curve.a.coeffs, curve.b.coeffs
    n = 1  # identity
    for xt in f.iter_tuples():
        r = f.add_t(f.mul_t(f.add_t(f.mul_t(xt, xt), at), xt), bt)
        if r == f.zero_t:
            n += 1
        elif f.is_square_t(r):
            n += 2
    return n


def test_curve_from_j_frozen_model():
    # k = 5/(1728-5) = 5/7 = 10 in F_13, so (a, b) = (3k, 2k) = (4, 7)
    E = curve_from_j(F13.element(5))
    assert E.a == 4 and E.b == 7
    assert E.j_invariant() == 5


def test_curve_from_j_round_trips():
    for j in (2, 3, 5, 9, 11):
        E = curve_from_j(F169.element(j))
        assert E.j_invariant() == j


def test_curve_from_j_excluded():
    with pytest.raises(ExcludedJInvariant):
        curve_from_j(F13.element(0))
    with pytest.raises(ExcludedJInvariant):
        curve_from_j(F13.element(1728 % 13))


def test_point_validation():
    E = curve_47(F13)
    with pytest.raises(CurveError):
        E.point(0, 0)
    P = E.point(1, 5)  # 5^2 = 25 = 12 = 1 + 4 + 7 mod 13
    assert not P.is_identity()


def test_group_law_axioms():
    E = curve_47(F169)
    rng = random.Random(7)
    O = E.identity()
    for _ in range(25):
        P = E.random_point(rng)
        Q = E.random_point(rng)
        R = E.random_point(rng)
        assert P + Q == Q + P
        assert (P + Q) + R == P + (Q + R)
        assert P + O == P
        assert P + (-P) == O
        assert P + P == scalar_mul(2, P)


def test_scalar_mul_matches_repeated_addition():
    E = curve_47(F169)
    rng = random.Random(11)
    P = E.random_point(rng)
    acc = E.identity()
    for n in range(20):
        assert scalar_mul(n, P) == acc
        assert scalar_mul(-n, P) == -acc
        acc = acc + P


@settings(max_examples=60, deadline=None)
@given(st.integers(-60, 60), st.integers(-60, 60))
def test_scalar_mul_distributive(m, n):
    E = curve_47(F169)
    P = E.random_point(random.Random(3))
    assert scalar_mul(m + n, P) == scalar_mul(m, P) + scalar_mul(n, P)


def test_brute_force_orders():
    # j = 5 is supersingular for p = 13: trace 0 over F_13, (p+1)^2 over F_13^2
    assert brute_order(curve_47(F13)) == 14
    E = curve_47(F169)
    assert brute_order(E) == 196
    assert brute_order(quadratic_twist(E)) == 144  # (p-1)^2
    rng = random.Random(5)
    for _ in range(5):
        assert scalar_mul(196, E.random_point(rng)).is_identity()


def test_group_order_formula_frozen():
    assert group_order_scalar_frobenius(13, 1) == 196
    assert group_order_scalar_frobenius(13, 2) == 28224
    assert group_order_scalar_frobenius(13, 3) == 4831204
    assert group_order_scalar_frobenius(37, 1) == 38**2


def test_twist_to_scalar_frobenius():
    E = curve_47(F169)
    assert twist_to_scalar_frobenius(E) is E
    fixed = twist_to_scalar_frobenius(quadratic_twist(E))
    assert brute_order(fixed) == 196
    with pytest.raises(CurveError, match="not supersingular"):
        twist_to_scalar_frobenius(curve_from_j(F169.element(3)))  # ordinary j


def test_torsion_order_extension():
    # brute-check the minimality against the group order formula
    for p, r in [(13, 2), (13, 3), (13, 5), (13, 7), (37, 61), (61, 37), (13, 37)]:
        k = torsion_order_extension(p, r)
        assert abs((-p) ** k - 1) % r == 0
        for kk in range(1, k):
            assert abs((-p) ** kk - 1) % r != 0
    assert torsion_order_extension(13, 7) == 1
    assert torsion_order_extension(13, 5) == 4
    assert torsion_order_extension(37, 61) == 20
    assert torsion_order_extension(61, 37) == 36
    assert torsion_order_extension(13, 37) == 36


def span_size(P, Q, r):
    """Oracle: number of distinct points i*P + j*Q."""
    seen = set()
    for i in range(r):
        for j in range(r):
            T = scalar_mul(i, P) + scalar_mul(j, Q)
            seen.add(None if T.is_identity() else (T.x.coeffs, T.y.coeffs))
    return len(seen)


def test_torsion_basis_r7_spans_full_group():
    # E[7] is rational over F_13^2 already: 7 | 13 + 1
    E = curve_47(F169)
    P, Q = torsion_basis(E, 7, random.Random(1))
    assert scalar_mul(7, P).is_identity() and not P.is_identity()
    assert span_size(P, Q, 7) == 49


def test_torsion_basis_r3_frobenius_action():
    E = curve_47(F13_4)
    P, Q = torsion_basis(E, 3, random.Random(2))
    assert span_size(P, Q, 3) == 9
    # Frobenius x -> x^(13^2) must act as the scalar -13 = 2 mod 3
    f = F13_4
    e2 = 13 * 13
    img = Point(
        E,
        type(P.x)(f, f.pow_t(P.x.coeffs, e2)),
        type(P.y)(f, f.pow_t(P.y.coeffs, e2)),
    )
    assert img == scalar_mul(2, P)


def test_torsion_basis_r2():
    E = curve_47(F169)
    P, Q = torsion_basis(E, 2, random.Random(3))
    assert P.y == 0 and Q.y == 0 and P.x != Q.x
    assert span_size(P, Q, 2) == 4


def test_torsion_basis_missing_torsion():
    with pytest.raises(CurveError, match="not rational"):
        torsion_basis(curve_47(F13_4), 11, random.Random(0))


def test_x_multiples_vs_scalar_mul():
    E = curve_47(F169)
    rng = random.Random(9)
    for _ in range(5):
        P = E.random_point(rng)
        xs = x_multiples(P, 10)
        for i, x in enumerate(xs, start=1):
            assert x == scalar_mul(i, P).x
    with pytest.raises(CurveError):
        x_multiples(E.identity(), 3)


def test_x_multiples_rejects_count_at_order():
    E = curve_47(F169)
    P, _ = torsion_basis(E, 7, random.Random(4))
    assert len(x_multiples(P, 6)) == 6
    with pytest.raises(CurveError, match="order"):
        x_multiples(P, 7)


def test_velu_two_isogeny_classical_form():
    # y^2 = x^3 + x / <(0,0)>  ->  y^2 = x^3 - 4x with X = (x^2 + 1)/x
    E = EllipticCurve(F13.element(1), F13.element(0))
    G = E.point(0, 0)
    image, xmap = velu_quotient(E, G, 2)
    assert image.a == -4 and image.b == 0
    assert [c.coeffs[0] for c in xmap.num] == [1, 0, 1]
    assert [c.coeffs[0] for c in xmap.den] == [0, 1]


# classical degree-2 modular polynomial, used as an independent oracle
def phi2(x, y):
    return (
        x**3
        + y**3
        - x * x * y * y
        + 1488 * (x * x * y + x * y * y)
        - 162000 * (x * x + y * y)
        + 40773375 * x * y
        + 8748000000 * (x + y)
        - 157464000000000
    )


def test_velu_satisfies_modular_polynomial():
    E = curve_47(F169)
    j = E.j_invariant()
    P, Q = torsion_basis(E, 2, random.Random(6))
    images = set()
    for G in (P, Q, P + Q):
        image, _ = velu_quotient(E, G, 2)
        j2 = image.j_invariant()
        assert not phi2(j, j2)
        images.add(j2.coeffs)
    # p = 13 has a single supersingular class, so every neighbor is j = 5
    assert images == {F169.element(5).coeffs}


def test_velu_modular_polynomial_ordinary_curve():
    # y^2 = (x-1)(x-2)(x-10) = x^3 + 6x + 6 over F_13, ordinary with j = 11
    E = EllipticCurve(F13.element(6), F13.element(6))
    j = E.j_invariant()
    assert j == 11
    for x0 in (1, 2, 10):
        image, _ = velu_quotient(E, E.point(x0, 0), 2)
        assert not phi2(j, image.j_invariant())


@pytest.mark.parametrize(
    "field,r", [(F169, 2), (F13_4, 3), (F169, 7)], ids=["r2", "r3", "r7"]
)
def test_velu_dual_composition_recovers_j(field, r):
    E = curve_47(field)
    P, Q = torsion_basis(E, r, random.Random(8))
    image, xmap = velu_quotient(E, P, r)
    assert len(xmap.num) == r + 1 and len(xmap.den) == r
    assert xmap.den[-1] == 1  # monic denominator
    # push the complementary generator through; it generates the kernel of
    # the dual, so the second quotient returns to the start
    x2 = xmap(Q.x)
    y2 = field.element(field.sqrt_t(image.rhs(x2).coeffs))
    G2 = image.point(x2, y2)
    assert scalar_mul(r, G2).is_identity() and not G2.is_identity()
    image2, _ = velu_quotient(image, G2, r)
    assert image2.j_invariant() == E.j_invariant()


def test_velu_image_points_land_on_image():
    E = curve_47(F169)
    P, _ = torsion_basis(E, 7, random.Random(10))
    image, xmap = velu_quotient(E, P, 7)
    f = F169
    kernel_xs = {x.coeffs for x in x_multiples(P, 3)}
    poles = set()
    for xt in f.iter_tuples():
        x = f.element(xt)
        if not f.is_square_t(E.rhs(x).coeffs):
            continue  # not the x of a rational point
        if xt in kernel_xs:
            poles.add(xt)
            with pytest.raises(XMapPole):
                xmap(x)
            continue
        assert f.is_square_t(image.rhs(xmap(x)).coeffs)
    assert poles == kernel_xs


def test_velu_eval_many_matches_single():
    E = curve_47(F169)
    P, Q = torsion_basis(E, 7, random.Random(12))
    _, xmap = velu_quotient(E, P, 7)
    xs = x_multiples(Q, 5)
    assert xmap.eval_many(xs) == [xmap(x) for x in xs]
    with pytest.raises(XMapPole):
        xmap.eval_many([Q.x, P.x])


def test_velu_rejects_bad_kernels():
    E = curve_47(F169)
    P, _ = torsion_basis(E, 7, random.Random(13))
    with pytest.raises(CurveError, match="prime"):
        velu_quotient(E, P, 4)
    with pytest.raises(CurveError, match="order"):
        velu_quotient(E, P, 3)
    with pytest.raises(CurveError, match="order"):
        velu_quotient(E, E.identity(), 3)


def test_isomorphism_scale_frozen():
    # scaling (4, 7) by u = 4: u^2 = 3, a' = 9*4 = 10, b' = 27*7 = 7 mod 13
    E1 = curve_47(F13)
    E2 = EllipticCurve(F13.element(10), F13.element(7))
    u2 = isomorphism_scale(E1, E2)
    assert u2 == 3
    assert isomorphism_scale(E1, E1) == 1


def test_isomorphism_scale_twist_is_not_isomorphic():
    # over F_13 the quadratic twist satisfies the coefficient relations with
    # u^2 = 2 (a non-square), so it must be rejected; over F_13^2 every
    # F_13 scalar is a square and the same pair becomes isomorphic
    E1 = curve_47(F13)
    T1 = quadratic_twist(E1)
    assert (T1.a, T1.b) == (3, 4)
    assert isomorphism_scale(E1, T1) is None
    assert isomorphism_scale(curve_47(F169), quadratic_twist(curve_47(F169))) is None
    E1x = curve_47(F169)
    T1x = EllipticCurve(F169.element(3), F169.element(4))
    assert isomorphism_scale(E1x, T1x) == 2


def test_isomorphism_scale_mismatched_j():
    assert isomorphism_scale(curve_47(F13), curve_from_j(F13.element(3))) is None
    with pytest.raises(ExcludedJInvariant):
        isomorphism_scale(curve_47(F13), EllipticCurve(F13.element(1), F13.element(0)))


def test_isomorphism_scale_maps_points():
    E1 = curve_47(F13)
    E2 = EllipticCurve(F13.element(10), F13.element(7))
    u2 = isomorphism_scale(E1, E2)
    u = F13.element(F13.sqrt_t(u2.coeffs))
    rng = random.Random(14)
    for _ in range(8):
        P = E1.random_point(rng)
        E2.point(u2 * P.x, u * u2 * P.y)  # raises if off the curve
