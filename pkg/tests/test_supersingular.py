import math

import pytest

from isograph.curves import curve_from_j
from isograph.fields import make_extension_field
from isograph.supersingular import (
    ClassTableError,
    build_class_table,
    enumerate_supersingular,
    hasse_witt_polynomial,
    two_isogeny_reachable,
)


def brute_order(curve):
    f = curve.field
    at, bt = curve.a.coeffs, curve.b.coeffs
    n = 1
    for xt in f.iter_tuples():
        r = f.add_t(f.mul_t(f.add_t(f.mul_t(xt, xt), at), xt), bt)
        if r == f.zero_t:
            n += 1
        elif f.is_square_t(r):
            n += 2
    return n


def prime_field_supersingular_js(p):
    """Oracle: j in F_p (excluding 0, 1728) is supersingular iff a curve
    with that j has exactly p + 1 points over F_p.  Twist-independent."""
    f = make_extension_field(p, 1)
    out = []
    for j in range(p):
        if j in (0, 1728 % p):
            continue
        if brute_order(curve_from_j(f.element(j))) == p + 1:
            out.append(j)
    return out


def test_hasse_witt_frozen_13():
    assert hasse_witt_polynomial(13) == (1, 10, 4, 10, 4, 10, 1)


def test_hasse_witt_shape():
    for p in (13, 37, 61):
        h = hasse_witt_polynomial(p)
        assert len(h) == (p - 1) // 2 + 1
        assert h == h[::-1]  # C(m,i) = C(m,m-i)
        assert h[0] == 1
        m = (p - 1) // 2
        assert h[m // 2] == math.comb(m, m // 2) ** 2 % p


@pytest.mark.parametrize("p", [13, 37])
def test_enumeration_matches_prime_field_oracle(p):
    oracle = prime_field_supersingular_js(p)
    computed = [j.coeffs[0] for j in enumerate_supersingular(p) if j.coeffs[1] == 0]
    assert computed == oracle


def test_p13_single_class():
    js = enumerate_supersingular(13)
    assert len(js) == 1
    assert js[0] == 5


def test_class_counts():
    for p, h in {13: 1, 37: 3, 61: 5, 73: 6, 97: 8, 109: 9}.items():
        js = enumerate_supersingular(p)
        assert len(js) == h == (p - 1) // 12


def test_extension_classes_p37():
    js = enumerate_supersingular(37)
    f = js[0].field
    ext = [j for j in js if j.coeffs[1] != 0]
    assert len(ext) == 2
    # the two non-rational classes are Frobenius conjugates of each other
    conj = {tuple(f.pow_t(j.coeffs, 37)) for j in ext}
    assert conj == {j.coeffs for j in ext}
    # and genuinely supersingular: curve order is (p-1)^2 or (p+1)^2
    for j in ext:
        assert brute_order(curve_from_j(j)) in (36**2, 38**2)


def test_models_have_frobenius_minus_p():
    for p in (13, 37):
        table = build_class_table(p)
        assert table.class_count == (p - 1) // 12
        for model in table.models:
            assert brute_order(model) == (p + 1) ** 2


def test_class_of_j_lookup():
    table = build_class_table(13)
    assert table.class_of_j(table.js[0]) == 0
    with pytest.raises(ClassTableError, match="not supersingular"):
        table.class_of_j(table.field.element(3))


@pytest.mark.parametrize("p", [13, 37, 61])
def test_two_isogeny_closure_reaches_everything(p):
    table = build_class_table(p)
    assert two_isogeny_reachable(table) == list(range(table.class_count))


def test_rejects_bad_primes():
    with pytest.raises(ClassTableError, match="not 1 mod 12"):
        enumerate_supersingular(11)
    with pytest.raises(ClassTableError, match="not prime"):
        enumerate_supersingular(25)
