"""Enumeration of supersingular j-invariants over F_{p^2} and the class
table of normalized curve models the graph builder works with.

Restricted to p = 1 mod 12: the class number is then exactly (p-1)/12,
j = 0 and j = 1728 are ordinary, and every class has automorphisms {+-1},
which keeps the counting combinatorics elsewhere twist-free.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass, field as dc_field

from .curves import (
    EllipticCurve,
    curve_from_j,
    torsion_basis,
    twist_to_scalar_frobenius,
    velu_quotient,
)
from .fields import Field, FieldElement, is_prime, make_extension_field


class ClassTableError(ValueError):
    pass


def require_admissible_prime(p: int) -> None:
    if not is_prime(p):
        raise ClassTableError(f"{p} is not prime")
    if p % 12 != 1:
        raise ClassTableError(f"p = {p} is not 1 mod 12")


def hasse_witt_polynomial(p: int) -> tuple[int, ...]:
    """Coefficients mod p of H_p(t) = sum C(m, i)^2 t^i with m = (p-1)/2.

    A Legendre curve y^2 = x(x-1)(x-t) is supersingular exactly at the
    roots of H_p, all of which lie in F_{p^2}.
    """
    m = (p - 1) // 2
    return tuple(math.comb(m, i) ** 2 % p for i in range(m + 1))


def _lambda_to_j(f: Field, lam_t) -> tuple[int, ...]:
    # j = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)
    lam = FieldElement(f, lam_t)
    num = lam * lam - lam + 1
    num = 256 * num * num * num
    den = lam * lam * (lam - 1) * (lam - 1)
    return (num / den).coeffs


@functools.lru_cache(maxsize=None)
def _enumerate_supersingular_cached(p: int) -> tuple[FieldElement, ...]:
    """All supersingular j-invariants in F_{p^2}, sorted by encoding."""
    require_admissible_prime(p)
    f = make_extension_field(p, 2)
    coeffs = [(c, 0) for c in hasse_witt_polynomial(p)]
    js: set[tuple[int, ...]] = set()
    for lam_t in f.iter_tuples():
        acc = f.zero_t
        for c in reversed(coeffs):
            acc = f.add_t(f.mul_t(acc, lam_t), c)
        if acc == f.zero_t:
            # H_p(0) = 1 and H_p(1) = +-1, so lam is never 0 or 1 here
            js.add(_lambda_to_j(f, lam_t))
    expected = (p - 1) // 12
    if len(js) != expected:
        raise ClassTableError(
            f"found {len(js)} supersingular classes for p={p}, expected {expected}"
        )
    out = sorted(js)
    bad = {f.zero_t, f.coerce_t(1728)}
    if any(j in bad for j in out):
        raise ClassTableError("j in {0, 1728} cannot occur for p = 1 mod 12")
    return tuple(FieldElement(f, j) for j in out)


def enumerate_supersingular(p: int) -> list[FieldElement]:
    return list(_enumerate_supersingular_cached(p))


@dataclass(frozen=True)
class SupersingularClassTable:
    """Supersingular classes for one prime, indexed 0..h-1 in the sorted
    j order, each with a fixed model on which Frobenius acts as -p."""

    p: int
    field: Field
    js: tuple[FieldElement, ...]
    models: tuple[EllipticCurve, ...]
    _index: dict = dc_field(repr=False, hash=False, compare=False, default_factory=dict)

    def __post_init__(self):
        self._index.update({j.coeffs: i for i, j in enumerate(self.js)})

    @property
    def class_count(self) -> int:
        return len(self.js)

    def class_of_j(self, j: FieldElement) -> int:
        try:
            return self._index[j.coeffs]
        except KeyError:
            raise ClassTableError(f"j = {j.coeffs} is not supersingular for p = {self.p}")


@functools.lru_cache(maxsize=None)
def build_class_table(p: int) -> SupersingularClassTable:
    js = _enumerate_supersingular_cached(p)
    models = tuple(twist_to_scalar_frobenius(curve_from_j(j)) for j in js)
    return SupersingularClassTable(p, js[0].field, js, models)


def two_isogeny_reachable(table: SupersingularClassTable) -> list[int]:
    """Class indices reachable from class 0 along rational 2-isogenies.

    Independent of the Brandt machinery: it walks curve models directly,
    so it cross-checks both the enumeration (quotients must stay in the
    table) and graph connectivity for l = 2.
    """
    rng = random.Random(4099 + table.p)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for ci in frontier:
            E = table.models[ci]
            P, Q = torsion_basis(E, 2, rng)
            for G in (P, Q, P + Q):
                image, _ = velu_quotient(E, G, 2)
                tj = table.class_of_j(image.j_invariant())
                if tj not in seen:
                    seen.add(tj)
                    nxt.append(tj)
        frontier = nxt
    return sorted(seen)
