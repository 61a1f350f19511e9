"""Short Weierstrass curves over the field tower, with the machinery the
graph builder needs: torsion bases, x-coordinate multiple lists, Velu
quotients by prime-order kernels, and quadratic-twist normalization so the
p^2-power Frobenius acts as the scalar -p on every working model.

Affine points carry FieldElements; the inner loops (scalar multiplication,
multiple chains) run on raw coefficient tuples in Jacobian coordinates and
convert back at the edges.
"""

from __future__ import annotations

import hashlib
import random
from typing import Sequence

from .fields import Embedding, Field, FieldElement, NoSquareRoot, is_prime


class CurveError(ValueError):
    pass


class ExcludedJInvariant(CurveError):
    """j in {0, 1728} has extra automorphisms and is outside our regime."""


class TorsionBasisError(RuntimeError):
    pass


class XMapPole(ArithmeticError):
    """Evaluation of an isogeny x-map at a kernel x-coordinate."""


class EllipticCurve:
    """y^2 = x^3 + a x + b over a Field."""

    __slots__ = ("field", "a", "b")

    def __init__(self, a: FieldElement, b: FieldElement):
        if a.field is not b.field:
            raise CurveError("coefficients from different fields")
        self.field = a.field
        self.a = a
        self.b = b
        disc = 4 * a * a * a + 27 * b * b
        if not disc:
            raise CurveError("singular curve: 4a^3 + 27b^2 = 0")

    def j_invariant(self) -> FieldElement:
        a3 = 4 * self.a * self.a * self.a
        return 1728 * a3 / (a3 + 27 * self.b * self.b)

    def identity(self) -> "Point":
        return Point(self, None, None)

    def point(self, x, y) -> "Point":
        x = self.field.element(x)
        y = self.field.element(y)
        if y * y != (x * x + self.a) * x + self.b:
            raise CurveError("point is not on the curve")
        return Point(self, x, y)

    def rhs(self, x: FieldElement) -> FieldElement:
        return (x * x + self.a) * x + self.b

    def random_point(self, rng: random.Random) -> "Point":
        f = self.field
        while True:
            xt = f.random_t(rng)
            rt = f.mul_t(f.add_t(f.mul_t(xt, xt), self.a.coeffs), xt)
            rt = f.add_t(rt, self.b.coeffs)
            try:
                yt = f.sqrt_t(rt)
            except NoSquareRoot:
                continue
            return Point(self, FieldElement(f, xt), FieldElement(f, yt))

    def change_field(self, emb: Embedding) -> "EllipticCurve":
        return EllipticCurve(emb(self.a), emb(self.b))

    def __eq__(self, other) -> bool:
        if isinstance(other, EllipticCurve):
            return self.field is other.field and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.field), self.a.coeffs, self.b.coeffs))

    def __repr__(self) -> str:
        return f"EllipticCurve(a={self.a.coeffs}, b={self.b.coeffs}, F_{self.field.p}^{self.field.deg})"


class Point:
    """Affine point or the identity (x is None)."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: EllipticCurve, x: FieldElement | None, y: FieldElement | None):
        self.curve = curve
        self.x = x
        self.y = y

    def is_identity(self) -> bool:
        return self.x is None

    def __neg__(self) -> "Point":
        if self.x is None:
            return self
        return Point(self.curve, self.x, -self.y)

    def __add__(self, other: "Point") -> "Point":
        if self.curve is not other.curve and self.curve != other.curve:
            raise CurveError("points on different curves")
        if self.x is None:
            return other
        if other.x is None:
            return self
        if self.x == other.x:
            if self.y != other.y or not self.y:
                return self.curve.identity()
            lam = (3 * self.x * self.x + self.curve.a) / (2 * self.y)
        else:
            lam = (other.y - self.y) / (other.x - self.x)
        x3 = lam * lam - self.x - other.x
        y3 = lam * (self.x - x3) - self.y
        return Point(self.curve, x3, y3)

    def __sub__(self, other: "Point") -> "Point":
        return self + (-other)

    def __rmul__(self, n: int) -> "Point":
        return scalar_mul(n, self)

    def __eq__(self, other) -> bool:
        if isinstance(other, Point):
            return self.curve == other.curve and self.x == other.x and self.y == other.y
        return NotImplemented

    def __repr__(self) -> str:
        if self.x is None:
            return "Point(O)"
        return f"Point({self.x.coeffs}, {self.y.coeffs})"


# -- raw Jacobian arithmetic: (X, Y, Z) with x = X/Z^2, y = Y/Z^3; Z = 0 is O


def _jac_dbl(f: Field, at, P):
    X, Y, Z = P
    if Z == f.zero_t or Y == f.zero_t:
        return (f.one_t, f.one_t, f.zero_t)
    XX = f.sq_t(X)
    YY = f.sq_t(Y)
    YYYY = f.sq_t(YY)
    S = f.smul_t(4, f.mul_t(X, YY))
    ZZ = f.sq_t(Z)
    M = f.add_t(f.smul_t(3, XX), f.mul_t(at, f.sq_t(ZZ)))
    X3 = f.sub_t(f.sq_t(M), f.smul_t(2, S))
    Y3 = f.sub_t(f.mul_t(M, f.sub_t(S, X3)), f.smul_t(8, YYYY))
    Z3 = f.smul_t(2, f.mul_t(Y, Z))
    return (X3, Y3, Z3)


def _jac_add_mixed(f: Field, at, P, xt, yt):
    """P + (xt, yt) with the second point affine."""
    X1, Y1, Z1 = P
    if Z1 == f.zero_t:
        return (xt, yt, f.one_t)
    ZZ = f.sq_t(Z1)
    U2 = f.mul_t(xt, ZZ)
    S2 = f.mul_t(yt, f.mul_t(Z1, ZZ))
    H = f.sub_t(U2, X1)
    R = f.sub_t(S2, Y1)
    if H == f.zero_t:
        if R == f.zero_t:
            return _jac_dbl(f, at, P)
        return (f.one_t, f.one_t, f.zero_t)
    HH = f.sq_t(H)
    HHH = f.mul_t(H, HH)
    V = f.mul_t(X1, HH)
    X3 = f.sub_t(f.sub_t(f.sq_t(R), HHH), f.smul_t(2, V))
    Y3 = f.sub_t(f.mul_t(R, f.sub_t(V, X3)), f.mul_t(Y1, HHH))
    Z3 = f.mul_t(Z1, H)
    return (X3, Y3, Z3)


def _jac_to_affine(f: Field, P):
    X, Y, Z = P
    if Z == f.zero_t:
        return None
    iz = f.inv_t(Z)
    iz2 = f.sq_t(iz)
    return (f.mul_t(X, iz2), f.mul_t(Y, f.mul_t(iz, iz2)))


def scalar_mul(n: int, P: Point) -> Point:
    """n*P by Jacobian double-and-add with a single final inversion."""
    curve = P.curve
    if P.x is None or n == 0:
        return curve.identity()
    if n < 0:
        return scalar_mul(-n, -P)
    f = curve.field
    at = curve.a.coeffs
    xt, yt = P.x.coeffs, P.y.coeffs
    acc = (f.one_t, f.one_t, f.zero_t)
    for bit in bin(n)[2:]:
        acc = _jac_dbl(f, at, acc)
        if bit == "1":
            acc = _jac_add_mixed(f, at, acc, xt, yt)
    aff = _jac_to_affine(f, acc)
    if aff is None:
        return curve.identity()
    return Point(curve, FieldElement(f, aff[0]), FieldElement(f, aff[1]))


def x_multiples(P: Point, count: int) -> list[FieldElement]:
    """[x(P), x(2P), ..., x(count*P)]; requires count < ord(P).

    The chain runs in Jacobian coordinates and normalizes all x-coordinates
    with one batched inversion.
    """
    if P.x is None:
        raise CurveError("x_multiples of the identity")
    if count < 1:
        return []
    f = P.curve.field
    at = P.curve.a.coeffs
    xt, yt = P.x.coeffs, P.y.coeffs
    chain = [(xt, yt, f.one_t)]
    if count >= 2:
        chain.append(_jac_dbl(f, at, chain[0]))
    for _ in range(count - 2):
        chain.append(_jac_add_mixed(f, at, chain[-1], xt, yt))
    if any(p[2] == f.zero_t for p in chain):
        raise CurveError("hit the identity: count >= point order")
    invs = f.batch_inv_t([p[2] for p in chain])
    out = []
    for (X, _, _), iz in zip(chain, invs):
        out.append(FieldElement(f, f.mul_t(X, f.sq_t(iz))))
    return out


# -- constructions


def curve_from_j(j: FieldElement) -> EllipticCurve:
    """The fixed model y^2 = x^3 + 3k x + 2k with k = j/(1728 - j)."""
    f = j.field
    if not j or j == 1728 % f.p:
        raise ExcludedJInvariant(f"j = {j.coeffs} is excluded (0 or 1728)")
    k = j / (1728 - j)
    return EllipticCurve(3 * k, 2 * k)


def quadratic_twist(curve: EllipticCurve) -> EllipticCurve:
    """Twist by the canonical non-residue c: (a, b) -> (a c^2, b c^3)."""
    f = curve.field
    c = FieldElement(f, f.nonresidue_t())
    return EllipticCurve(curve.a * c * c, curve.b * c * c * c)


def group_order_scalar_frobenius(p: int, k: int) -> int:
    """#E(F_{p^{2k}}) for a scalar-Frobenius model: ((-p)^k - 1)^2."""
    return ((-p) ** k - 1) ** 2


def twist_to_scalar_frobenius(curve: EllipticCurve) -> EllipticCurve:
    """Return the quadratic twist (possibly the input) whose F_{p^2}-point
    count is (p+1)^2, i.e. the model with Frobenius = -p.

    Verified by annihilating 20 deterministically sampled points; for a
    supersingular curve with p = 1 mod 12 exactly one twist qualifies, and
    an ordinary input fails both candidates.
    """
    f = curve.field
    p = f.p
    if f.deg != 2:
        raise CurveError("normalization works over F_{p^2}")
    n_target = (p + 1) ** 2
    seed_material = repr((p, curve.a.coeffs, curve.b.coeffs)).encode()
    seed = int.from_bytes(hashlib.sha256(seed_material).digest()[:8], "big")
    for cand in (curve, quadratic_twist(curve)):
        rng = random.Random(seed)
        if all(
            scalar_mul(n_target, cand.random_point(rng)).is_identity()
            for _ in range(20)
        ):
            return cand
    raise CurveError(
        f"neither quadratic twist has (p+1)^2 points over F_{p}^2; "
        "the curve is not supersingular"
    )


def torsion_order_extension(p: int, r: int) -> int:
    """Least k with E[r] rational over F_{p^{2k}} for scalar-Frobenius
    models: the multiplicative order of -p mod r."""
    t = (-p) % r
    k, acc = 1, t
    while acc != 1 % r:
        acc = acc * t % r
        k += 1
    return k


def torsion_basis(
    curve: EllipticCurve, r: int, rng: random.Random, budget: int = 200
) -> tuple[Point, Point]:
    """Independent points of exact prime order r over the curve's field.

    The curve must be a scalar-Frobenius model base-changed to F_{p^{2k}}
    with k = torsion_order_extension(p, r); the rational group is then
    (Z/m)^2 with m = |(-p)^k - 1| and cofactor multiplication lands in E[r].
    Each basis point is checked to satisfy pi(P) = (-p mod r) P.
    """
    f = curve.field
    p = f.p
    if f.deg % 2 != 0:
        raise CurveError("torsion work expects an even-degree extension")
    k = f.deg // 2
    m = abs((-p) ** k - 1)
    if m % r != 0:
        raise CurveError(f"E[{r}] is not rational over F_{p}^{f.deg}")
    mm = m
    e = 0
    while mm % r == 0:
        mm //= r
        e += 1
    cofactor = m // r**e

    def sample() -> Point:
        for _ in range(budget):
            P = scalar_mul(cofactor, curve.random_point(rng))
            if P.is_identity():
                continue
            # reduce from order r^j to exact order r
            while True:
                Q = scalar_mul(r, P)
                if Q.is_identity():
                    return P
                P = Q
        raise TorsionBasisError(f"no order-{r} point in {budget} samples")

    def check_frobenius(P: Point) -> None:
        e2 = p * p
        img = Point(
            curve,
            FieldElement(f, f.pow_t(P.x.coeffs, e2)),
            FieldElement(f, f.pow_t(P.y.coeffs, e2)),
        )
        if img != scalar_mul((-p) % r, P):
            raise CurveError(
                "Frobenius does not act as -p on sampled torsion; "
                "the model is not scalar-Frobenius normalized"
            )

    P = sample()
    check_frobenius(P)
    half = (r - 1) // 2 if r > 2 else 1
    p_xs = {x.coeffs for x in x_multiples(P, half)}
    for _ in range(budget):
        Q = sample()
        if Q.x.coeffs not in p_xs:
            check_frobenius(Q)
            return P, Q
    raise TorsionBasisError(f"no independent order-{r} point in {budget} samples")


# -- isogenies


class XMap:
    """x-coordinate map of a separable isogeny: x -> num(x)/den(x)."""

    __slots__ = ("num", "den", "degree")

    def __init__(self, num: Sequence[FieldElement], den: Sequence[FieldElement], degree: int):
        self.num = tuple(num)
        self.den = tuple(den)
        self.degree = degree

    @property
    def field(self) -> Field:
        return self.num[0].field

    def __call__(self, x: FieldElement) -> FieldElement:
        f = x.field
        num = _horner_t(f, [c.coeffs for c in self.num], x.coeffs)
        den = _horner_t(f, [c.coeffs for c in self.den], x.coeffs)
        if den == f.zero_t:
            raise XMapPole("x lies in the kernel")
        return FieldElement(f, f.mul_t(num, f.inv_t(den)))

    def eval_many(self, xs: Sequence[FieldElement]) -> list[FieldElement]:
        """Batch evaluation with a single inversion."""
        if not xs:
            return []
        f = xs[0].field
        nc = [c.coeffs for c in self.num]
        dc = [c.coeffs for c in self.den]
        nums = [_horner_t(f, nc, x.coeffs) for x in xs]
        dens = [_horner_t(f, dc, x.coeffs) for x in xs]
        if any(d == f.zero_t for d in dens):
            raise XMapPole("x lies in the kernel")
        invs = f.batch_inv_t(dens)
        return [FieldElement(f, f.mul_t(n, i)) for n, i in zip(nums, invs)]

    def lift(self, emb: Embedding) -> "XMap":
        return XMap(
            [emb(c) for c in self.num], [emb(c) for c in self.den], self.degree
        )


def _horner_t(f: Field, coeffs: list, xt):
    acc = f.zero_t
    for c in reversed(coeffs):
        acc = f.add_t(f.mul_t(acc, xt), c)
    return acc


def velu_quotient(curve: EllipticCurve, G: Point, r: int) -> tuple[EllipticCurve, XMap]:
    """Quotient by the cyclic kernel <G> of prime order r via Velu's
    formulas; returns the codomain and the degree-r x-map."""
    if not is_prime(r):
        raise CurveError(f"kernel order {r} is not prime")
    if G.is_identity() or not scalar_mul(r, G).is_identity():
        raise CurveError(f"kernel generator does not have order {r}")
    f = curve.field
    a, b = curve.a, curve.b
    one = f.one
    if r == 2:
        x0 = G.x
        v = 3 * x0 * x0 + a
        w = x0 * v
        a2 = a - 5 * v
        b2 = b - 7 * w
        # x + v/(x - x0) = (x^2 - x0 x + v) / (x - x0)
        num = (v, -x0, one)
        den = (-x0, one)
        image = EllipticCurve(a2, b2)
        return image, XMap(num, den, 2)
    half = (r - 1) // 2
    xs = x_multiples(G, half)
    v = f.zero
    w = f.zero
    us = []
    vs = []
    for xi in xs:
        gx = 3 * xi * xi + a
        ui = 4 * ((xi * xi + a) * xi + b)  # 4 y_i^2
        vi = 2 * gx
        us.append(ui)
        vs.append(vi)
        v = v + vi
        w = w + ui + xi * vi
    a2 = a - 5 * v
    b2 = b - 7 * w
    # denominator h^2 with h = prod (x - x_i); numerator assembled from
    # x*h^2 + sum_i [ v_i h h_i + u_i h_i^2 ],  h_i = h/(x - x_i)
    h = [one]
    for xi in xs:
        h = _fpoly_mul_linear(f, h, xi)
    num = _fpoly_mul(f, [f.zero, one], _fpoly_mul(f, h, h))
    for xi, ui, vi in zip(xs, us, vs):
        hi = _fpoly_div_linear(f, h, xi)
        term = _fpoly_scale(f, _fpoly_mul(f, h, hi), vi)
        num = _fpoly_add(f, num, term)
        term = _fpoly_scale(f, _fpoly_mul(f, hi, hi), ui)
        num = _fpoly_add(f, num, term)
    den = _fpoly_mul(f, h, h)
    image = EllipticCurve(a2, b2)
    return image, XMap(num, den, r)


def _fpoly_mul_linear(f: Field, poly, root):
    """poly * (x - root)."""
    out = [f.zero] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i + 1] = out[i + 1] + c
        out[i] = out[i] - c * root
    return out


def _fpoly_div_linear(f: Field, poly, root):
    """poly / (x - root) for monic poly with that root (synthetic division)."""
    n = len(poly) - 1
    out = [f.zero] * n
    acc = poly[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = poly[i] + acc * root
    return out


def _fpoly_mul(f: Field, a, b):
    out = [f.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
    return out


def _fpoly_add(f: Field, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return out


def _fpoly_scale(f: Field, a, c):
    return [x * c for x in a]


def isomorphism_scale(src: EllipticCurve, dst: EllipticCurve) -> FieldElement | None:
    """u^2 with (x, y) -> (u^2 x, u^3 y) mapping src onto dst, or None if
    the curves are not isomorphic over the ground field.  Requires
    j not in {0, 1728}, i.e. a and b nonzero."""
    if src.field is not dst.field:
        raise CurveError("isomorphism scale requires one ground field")
    if not (src.a and src.b and dst.a and dst.b):
        raise ExcludedJInvariant("isomorphism scale needs a, b nonzero")
    u2 = (dst.b * src.a) / (src.b * dst.a)
    if dst.a != u2 * u2 * src.a or dst.b != u2 * u2 * u2 * src.b:
        return None
    # the relations alone also hold for the non-trivial quadratic twist;
    # u itself must exist in the ground field
    if not src.field.is_square_t(u2.coeffs):
        return None
    return u2
