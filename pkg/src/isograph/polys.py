"""Exact integer polynomials, rational functions, and integer linear algebra.

Everything here is exact: polynomial coefficients are Python ints, series
coefficients are Fractions, and determinants of polynomial matrices go
through fraction-free Bareiss elimination at integer sample points followed
by Lagrange interpolation.  Characteristic polynomials of integer matrices
use a CRT of word-size primes with numpy-backed Hessenberg reduction, which
keeps the zeta pipeline fast for matrices with a couple hundred rows.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .fields import is_prime


class IntPolynomial:
    """Dense integer polynomial, coefficients ascending, trailing zeros
    stripped (the zero polynomial has an empty coefficient tuple)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial: -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = list(self.coeffs) + [0] * max(0, len(other.coeffs) - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            out[i] -= c
        return IntPolynomial(out)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPolynomial":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = IntPolynomial([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive_part(self) -> "IntPolynomial":
        g = self.content()
        if g == 0:
            return self
        if self.coeffs[-1] < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"


def poly_gcd(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """gcd in Z[t] (primitive pseudo-remainder sequence), with positive
    leading coefficient."""
    if a.is_zero():
        return b.primitive_part() * abs(b.content()) if not b.is_zero() else IntPolynomial()
    if b.is_zero():
        return a.primitive_part() * abs(a.content())
    ca, cb = abs(a.content()), abs(b.content())
    cg = gcd(ca, cb)
    pa, pb = a.primitive_part(), b.primitive_part()
    while not pb.is_zero():
        r = _pseudo_rem(pa, pb)
        pa, pb = pb, r.primitive_part()
    return pa * cg


def _pseudo_rem(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    da, db = a.degree, b.degree
    if da < db:
        return a
    lead = b.coeffs[-1]
    r = list(a.coeffs)
    for k in range(da, db - 1, -1):
        c = r[k]
        if not c:
            continue
        # one pseudo-division step: r <- lead*r - c*t^(k-db)*b
        for i in range(len(r)):
            r[i] *= lead
        for i in range(db + 1):
            r[k - db + i] -= c * b.coeffs[i]
    return IntPolynomial(r)


def exact_div(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """a / b when b divides a in Q[t] with integer quotient; raises otherwise."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero():
        return IntPolynomial()
    r = [Fraction(c) for c in a.coeffs]
    q = [Fraction(0)] * (len(a.coeffs) - len(b.coeffs) + 1)
    lead = Fraction(b.coeffs[-1])
    for k in range(len(r) - 1, len(b.coeffs) - 2, -1):
        if r[k]:
            f = r[k] / lead
            q[k - (len(b.coeffs) - 1)] = f
            for i, bc in enumerate(b.coeffs):
                r[k - (len(b.coeffs) - 1) + i] -= f * bc
    if any(r):
        raise ValueError("polynomial division is not exact")
    if any(c.denominator != 1 for c in q):
        raise ValueError("quotient is not integral")
    return IntPolynomial(int(c) for c in q)


def divides(b: IntPolynomial, a: IntPolynomial) -> bool:
    try:
        exact_div(a, b)
        return True
    except (ValueError, ZeroDivisionError):
        return False


class RationalFunction:
    """Quotient of integer polynomials, normalized: gcd cancelled and the
    denominator's leading coefficient positive."""

    __slots__ = ("num", "den")

    def __init__(self, num: IntPolynomial, den: IntPolynomial):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = IntPolynomial(), IntPolynomial([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0 or abs(g[0]) > 1:
                num, den = exact_div(num, g), exact_div(den, g)
            # cancel the residual integer content shared by both sides
            c = gcd(num.content(), den.content())
            if c > 1:
                num = IntPolynomial(x // c for x in num.coeffs)
                den = IntPolynomial(x // c for x in den.coeffs)
        if den.coeffs and den.coeffs[-1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __pow__(self, e: int) -> "RationalFunction":
        if e >= 0:
            return RationalFunction(self.num**e, self.den**e)
        return RationalFunction(self.den**-e, self.num**-e)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def series(self, order: int) -> list[Fraction]:
        return ratfun_series(self, order)

    def __repr__(self) -> str:
        return f"RationalFunction({list(self.num.coeffs)}, {list(self.den.coeffs)})"


def ratfun_series(rf: RationalFunction, order: int) -> list[Fraction]:
    """Exact Taylor coefficients c_0..c_order at t=0; requires den(0) != 0."""
    if rf.den[0] == 0:
        raise ValueError("series requires den(0) != 0")
    d0 = Fraction(rf.den[0])
    out: list[Fraction] = []
    for k in range(order + 1):
        acc = Fraction(rf.num[k])
        for j in range(1, k + 1):
            dj = rf.den[j]
            if dj:
                acc -= dj * out[k - j]
        out.append(acc / d0)
    return out


def log_series(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Formal log of a power series with constant term 1, same truncation."""
    if not coeffs or coeffs[0] != 1:
        raise ValueError("log series needs constant term 1")
    n = len(coeffs) - 1
    g = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        acc = Fraction(coeffs[m])
        for j in range(1, m):
            acc -= Fraction(j, m) * g[j] * coeffs[m - j]
        g[m] = acc
    return g


# ---------------------------------------------------------------------------
# integer and polynomial determinants


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def poly_matrix_det(matrix: Sequence[Sequence[IntPolynomial]]) -> IntPolynomial:
    """Determinant of a matrix of integer polynomials by evaluation at
    integer points and Lagrange interpolation; each evaluation is a Bareiss
    determinant, so the whole computation is exact."""
    n = len(matrix)
    if n == 0:
        return IntPolynomial([1])
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    deg_bound = 0
    for row in matrix:
        deg_bound += max((e.degree for e in row), default=-1)
    if deg_bound < 0:
        return IntPolynomial()  # some row is entirely zero
    points: list[int] = [0]
    v = 1
    while len(points) < deg_bound + 1:
        points.append(v)
        if len(points) < deg_bound + 1:
            points.append(-v)
        v += 1
    values = [
        bareiss_det([[e(x) for e in row] for row in matrix]) for x in points
    ]
    return _lagrange_int(points, values)


def _lagrange_int(xs: Sequence[int], ys: Sequence[int]) -> IntPolynomial:
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        if ys[i] == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            # multiply basis by (t - xs[j])
            nb = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nb[k] -= c * xs[j]
                nb[k + 1] += c
            basis = nb
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for k, c in enumerate(basis):
            coeffs[k] += c * scale
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("interpolation did not produce integers")
    return IntPolynomial(int(c) for c in coeffs)


# ---------------------------------------------------------------------------
# exact characteristic polynomial via CRT over word-size primes

_CRT_PRIMES: list[int] = []


def _crt_primes(count: int) -> list[int]:
    # primes just below 2^25 keep every numpy intermediate below 2^63
    cand = _CRT_PRIMES[-1] - 2 if _CRT_PRIMES else (1 << 25) - 1
    while len(_CRT_PRIMES) < count:
        while not is_prime(cand):
            cand -= 2
        _CRT_PRIMES.append(cand)
        cand -= 2
    return _CRT_PRIMES[:count]


def _hessenberg_mod(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    for k in range(n - 2):
        col = m[k + 1 :, k]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = k + 1 + int(nz[0])
        if piv != k + 1:
            m[[k + 1, piv], :] = m[[piv, k + 1], :]
            m[:, [k + 1, piv]] = m[:, [piv, k + 1]]
        inv = pow(int(m[k + 1, k]), p - 2, p)
        f = m[k + 2 :, k] * inv % p
        if np.any(f):
            m[k + 2 :, :] = (m[k + 2 :, :] - np.outer(f, m[k + 1, :])) % p
            m[:, k + 1] = (m[:, k + 1] + m[:, k + 2 :] @ f) % p
    return m


def _charpoly_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Monic char poly of a mod p, coefficients ascending, length n+1."""
    n = a.shape[0]
    h = _hessenberg_mod(np.array(a % p, dtype=np.int64), p)
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(1, n + 1):
        hm = int(h[m - 1, m - 1])
        new = np.zeros(n + 1, dtype=np.int64)
        pm1 = polys[m - 1]
        new[1 : m + 1] = pm1[0:m]
        new[0:m] = (new[0:m] - hm * pm1[0:m]) % p
        if m >= 2:
            w = np.zeros(m - 1, dtype=np.int64)
            prod = 1
            for i in range(m - 1, 0, -1):
                prod = prod * int(h[i, i - 1]) % p
                w[i - 1] = int(h[i - 1, m - 1]) * prod % p
            if np.any(w):
                s = (w @ polys[0 : m - 1, 0:m]) % p
                new[0:m] = (new[0:m] - s) % p
        polys[m] = new
    return polys[n] % p


def charpoly_int(matrix: Sequence[Sequence[int]]) -> IntPolynomial:
    """det(xI - A) exactly, for integer A.  Gershgorin bounds the eigenvalues,
    so (1 + max row sum)^n bounds every coefficient; enough CRT primes are
    used to cover twice that."""
    n = len(matrix)
    if n == 0:
        return IntPolynomial([1])
    if any(len(row) != n for row in matrix):
        raise ValueError("characteristic polynomial of a non-square matrix")
    rowmax = max(sum(abs(int(x)) for x in row) for row in matrix)
    bound = 2 * (1 + rowmax) ** n
    primes = []
    prod = 1
    k = 1
    while prod <= bound:
        primes = _crt_primes(k)
        prod = 1
        for p in primes:
            prod *= p
        k += 1
    a = np.array([[int(x) for x in row] for row in matrix], dtype=np.int64)
    residues = [_charpoly_mod(a, p) for p in primes]
    coeffs = []
    for j in range(n + 1):
        x = 0
        m = 1
        for res, p in zip(residues, primes):
            r = int(res[j])
            # incremental CRT
            t = (r - x) * pow(m, -1, p) % p
            x += m * t
            m *= p
        if x > m // 2:
            x -= m
        coeffs.append(x)
    return IntPolynomial(coeffs)
