"""Level structures and Brandt-style adjacency.

A vertex at level N is a pair (supersingular class, cyclic subgroup of
order N) with N squarefree and coprime to l p; the subgroup splits into
one cyclic piece per prime divisor, so it is stored as a tuple of
per-prime subgroup indices.  Edges are degree-l isogenies, tracked with
their kernels so the graph carries a genuine edge involution (dual
isogeny) rather than just a symmetric count matrix.

All per-prime torsion work happens over F_{p^{2k}} with k the
multiplicative order of -p mod r, the smallest extension where E[r] is
rational for scalar-Frobenius models.  Kernels are Galois-stable there,
so quotient curves and x-maps descend to F_{p^2}; the descent is exact
and checked, never a float-style approximation.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass

from .curves import (
    EllipticCurve,
    Point,
    XMap,
    isomorphism_scale,
    torsion_basis,
    torsion_order_extension,
    velu_quotient,
    x_multiples,
)
from .fields import FieldElement, get_embedding, is_prime, make_extension_field
from .supersingular import (
    ClassTableError,
    SupersingularClassTable,
    build_class_table,
    require_admissible_prime,
)


class AdmissibilityError(ValueError):
    pass


class BrandtValidationError(ValueError):
    pass


class GraphBuildError(RuntimeError):
    """Internal consistency failure while assembling a graph."""


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def check_admissible(p: int, l: int, N: int) -> list[int]:
    """Validate (p, l, N) and return the sorted prime divisors of N."""
    try:
        require_admissible_prime(p)
    except ClassTableError as e:
        raise AdmissibilityError(str(e)) from None
    if not is_prime(l):
        raise AdmissibilityError(f"l = {l} is not prime")
    if l == p:
        raise AdmissibilityError("l must differ from p")
    if not isinstance(N, int) or N < 1:
        raise AdmissibilityError(f"N = {N} must be a positive integer")
    fac = factorize(N)
    if any(e > 1 for _, e in fac):
        raise AdmissibilityError(f"N = {N} is not squarefree")
    primes = [r for r, _ in fac]
    if p in primes:
        raise AdmissibilityError(f"N = {N} shares the factor {p} with p")
    if l in primes:
        raise AdmissibilityError(f"N = {N} shares the factor {l} with l")
    return primes


def sigma1(N: int) -> int:
    """Sum of divisors; for squarefree N this is prod (r + 1)."""
    return sum(d for d in range(1, N + 1) if N % d == 0)


def vertex_count(p: int, N: int) -> int:
    """Mass count of enhanced classes: (p - 1) sigma1(N) / 12."""
    num = (p - 1) * sigma1(N)
    if num % 12 != 0:
        raise AdmissibilityError(f"(p-1) sigma1(N) = {num} is not divisible by 12")
    return num // 12


def _derive_seed(*parts) -> int:
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class SubgroupSlot:
    """One cyclic order-r subgroup, stored by the x-coordinates of its
    nonzero points (one per +-pair), sorted for canonical identity."""

    xs: tuple[FieldElement, ...]
    encs: frozenset


@dataclass(frozen=True)
class QuotientArrow:
    """One outgoing l-isogeny at class level: quotient by kernel
    `kernel_index`, landing on the model of class `target` after the
    isomorphism x -> u2 * x.  `dual_index` is the kernel of the dual
    isogeny on the target class."""

    source: int
    kernel_index: int
    target: int
    u2: FieldElement
    xmap: XMap
    dual_index: int


def validate_symmetry_and_row_sums(matrix, l: int) -> None:
    """Hard structural checks: square, non-negative integer entries,
    symmetric, every row summing to l + 1.  A failure here means the build
    itself is broken, so callers treat it as fatal."""
    n = len(matrix)
    for i, row in enumerate(matrix):
        if len(row) != n:
            raise BrandtValidationError("matrix is not square")
        if any(not isinstance(x, int) or x < 0 for x in row):
            raise BrandtValidationError("entries must be non-negative integers")
        if sum(row) != l + 1:
            raise BrandtValidationError(
                f"row {i} sums to {sum(row)}, expected {l + 1}"
            )
        for j in range(n):
            if row[j] != matrix[j][i]:
                raise BrandtValidationError(f"entry ({i},{j}) breaks symmetry")


def diagonal_parity_violations(matrix) -> tuple[int, ...]:
    """Vertices whose diagonal entry is odd.

    An odd diagonal entry records a self-dual degree-l endomorphism (trace
    zero, so the dual is the negative and has the same kernel); the loop
    edges at such a vertex cannot all be paired two-and-two.  This really
    occurs, e.g. at (p, l) = (37, 5) and (61, 7), so it is returned as data
    instead of being raised: downstream spectral and zeta computations stay
    valid, only the loop-pairing of an edge realization is obstructed."""
    return tuple(i for i, row in enumerate(matrix) if row[i] % 2 != 0)


def validate_brandt(matrix, l: int) -> None:
    """Full validation: symmetry and row sums (always expected to hold),
    plus an even diagonal (usually holds, but see
    diagonal_parity_violations for the genuine exceptions)."""
    validate_symmetry_and_row_sums(matrix, l)
    bad = diagonal_parity_violations(matrix)
    if bad:
        raise BrandtValidationError(f"odd diagonal entries at vertices {list(bad)}")


@dataclass(frozen=True)
class EnhancedGraph:
    """A finished level-N graph: vertex list, multiplicity matrix, and the
    oriented edge structure eid = vertex * (l+1) + kernel slot.

    edge_dual pairs each edge with its dual isogeny.  It reverses the
    endpoints and squares to the identity, but it can fix a loop (kernel
    of a trace-zero endomorphism), so it is not yet the loop pairing the
    abstract graph formalism wants; the graph layer re-pairs loops.

    parity_violations lists vertices with an odd diagonal entry.  Empty in
    the common case; non-empty exactly when some loop is forced to stay
    self-paired no matter how loops are re-paired."""

    p: int
    l: int
    level: int
    seed: int
    primes: tuple[int, ...]
    class_labels: tuple[str, ...]
    vertices: tuple[tuple[int, tuple[int, ...]], ...]
    brandt: tuple[tuple[int, ...], ...]
    edge_target: tuple[int, ...]
    edge_dual: tuple[int, ...]
    parity_violations: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return self.l + 1

    @property
    def oriented_edge_count(self) -> int:
        return len(self.edge_target)

    @property
    def geometric_edge_count(self) -> int:
        return len(self.edge_target) // 2

    def edge_source(self, eid: int) -> int:
        return eid // (self.l + 1)

    def vertex_label(self, i: int) -> str:
        c, S = self.vertices[i]
        base = f"j={self.class_labels[c]}"
        if not S:
            return base
        part = ",".join(f"{r}:{s}" for r, s in zip(self.primes, S))
        return f"{base} C[{part}]"


def _fmt_class(j: FieldElement) -> str:
    c = j.coeffs
    if len(c) == 1 or not c[1]:
        return str(c[0])
    return f"{c[0]}+{c[1]}g"


class GraphBuilder:
    """Shared context for one (p, l): class table, per-prime subgroup
    tables, and class-level quotient arrows, all built lazily and reused
    across levels."""

    def __init__(self, p: int, l: int, seed: int = 0):
        check_admissible(p, l, 1)
        self.p = p
        self.l = l
        self.seed = seed
        self.table: SupersingularClassTable = build_class_table(p)
        self._subs: dict[int, list[list[SubgroupSlot]]] = {}
        self._enc_index: dict[int, list[dict]] = {}
        self._arrows: list[list[QuotientArrow]] | None = None
        self._lifted: dict[tuple[int, int, int], tuple[XMap, FieldElement]] = {}
        self._push_memo: dict[tuple[int, int, int, int], int] = {}

    # -- per-prime subgroup tables

    def torsion_field(self, r: int):
        return make_extension_field(self.p, 2 * torsion_order_extension(self.p, r))

    def level_subgroups(self, r: int) -> list[list[SubgroupSlot]]:
        """For each class, the r + 1 cyclic order-r subgroups in canonical
        order (sorted by x-coordinate signature)."""
        if r in self._subs:
            return self._subs[r]
        big = self.torsion_field(r)
        emb = get_embedding(self.table.field, big)
        half = max(1, (r - 1) // 2)
        per_class = []
        index = []
        for ci, model in enumerate(self.table.models):
            E = model.change_field(emb)
            rng = random.Random(_derive_seed("subgroups", self.p, r, ci, self.seed))
            P, Q = torsion_basis(E, r, rng)
            gens = [P]
            R = E.identity()
            for _ in range(r):
                gens.append(Q + R)
                R = R + P
            slots = []
            for G in gens:
                xs = sorted(x_multiples(G, half), key=lambda x: x.coeffs)
                slots.append(SubgroupSlot(tuple(xs), frozenset(x.coeffs for x in xs)))
            slots.sort(key=lambda s: tuple(x.coeffs for x in s.xs))
            if len({s.xs for s in slots}) != r + 1:
                raise GraphBuildError(f"repeated order-{r} subgroup at class {ci}")
            per_class.append(slots)
            index.append(
                {x.coeffs: si for si, s in enumerate(slots) for x in s.xs}
            )
        self._subs[r] = per_class
        self._enc_index[r] = index
        return per_class

    # -- class-level isogeny arrows

    @property
    def arrows(self) -> list[list[QuotientArrow]]:
        if self._arrows is None:
            self._arrows = self._build_arrows()
        return self._arrows

    def _build_arrows(self) -> list[list[QuotientArrow]]:
        l = self.l
        table = self.table
        subs = self.level_subgroups(l)
        enc_index = self._enc_index[l]
        big = self.torsion_field(l)
        emb = get_embedding(table.field, big)
        arrows: list[list[QuotientArrow]] = []
        for ci, model in enumerate(table.models):
            E = model.change_field(emb)
            row = []
            for t, slot in enumerate(subs[ci]):
                x0 = slot.xs[0]
                y0 = FieldElement(big, big.sqrt_t(E.rhs(x0).coeffs))
                image, xmap = velu_quotient(E, Point(E, x0, y0), l)
                small = EllipticCurve(emb.descend(image.a), emb.descend(image.b))
                target = table.class_of_j(small.j_invariant())
                u2 = isomorphism_scale(small, table.models[target])
                if u2 is None:
                    raise GraphBuildError(
                        f"quotient of class {ci} not isomorphic to its class model"
                    )
                xmap_small = XMap(
                    [emb.descend(c) for c in xmap.num],
                    [emb.descend(c) for c in xmap.den],
                    l,
                )
                other = subs[ci][1 if t == 0 else 0]
                x_dual = emb(u2) * xmap(other.xs[0])
                try:
                    dual_index = enc_index[target][x_dual.coeffs]
                except KeyError:
                    raise GraphBuildError(
                        f"dual kernel of ({ci},{t}) missed the subgroup table"
                    ) from None
                row.append(QuotientArrow(ci, t, target, u2, xmap_small, dual_index))
            arrows.append(row)
        for ci, row in enumerate(arrows):
            for t, ar in enumerate(row):
                back = arrows[ar.target][ar.dual_index]
                if back.target != ci or back.dual_index != t:
                    raise GraphBuildError(f"dual of dual broken at ({ci},{t})")
        # self-dual kernels do occur (trace-zero endomorphisms); they are
        # necessarily loops and get re-paired at the graph layer
        return arrows

    # -- pushing level structure through arrows

    def _lifted_arrow(self, ci: int, t: int, r: int):
        key = (ci, t, r)
        got = self._lifted.get(key)
        if got is None:
            ar = self.arrows[ci][t]
            emb = get_embedding(self.table.field, self.torsion_field(r))
            got = (ar.xmap.lift(emb), emb(ar.u2))
            self._lifted[key] = got
        return got

    def push_subgroup(self, ci: int, t: int, r: int, s: int) -> int:
        """Index of the order-r subgroup obtained by pushing subgroup s of
        class ci through arrow t, on the target class's table."""
        key = (ci, t, r, s)
        got = self._push_memo.get(key)
        if got is not None:
            return got
        xmap_r, u2_r = self._lifted_arrow(ci, t, r)
        subs = self.level_subgroups(r)
        slot = subs[ci][s]
        pushed = [u2_r * x for x in xmap_r.eval_many(slot.xs)]
        target = self.arrows[ci][t].target
        try:
            idx = self._enc_index[r][target][pushed[0].coeffs]
        except KeyError:
            raise GraphBuildError(
                f"pushed subgroup ({ci},{t},{r},{s}) missed the table"
            ) from None
        if frozenset(x.coeffs for x in pushed) != subs[target][idx].encs:
            raise GraphBuildError(
                f"pushed subgroup ({ci},{t},{r},{s}) is not a full subgroup"
            )
        self._push_memo[key] = idx
        return idx

    # -- graph assembly

    def build(self, N: int) -> EnhancedGraph:
        primes = check_admissible(self.p, self.l, N)
        table = self.table
        h = table.class_count
        arrows = self.arrows
        for r in primes:
            self.level_subgroups(r)
        combos = list(itertools.product(*[range(r + 1) for r in primes]))
        vertices = [(c, S) for c in range(h) for S in combos]
        vindex = {v: i for i, v in enumerate(vertices)}
        if len(vertices) != vertex_count(self.p, N):
            raise GraphBuildError("vertex census does not match the mass count")
        k = self.l + 1
        edge_target = []
        for c, S in vertices:
            for t in range(k):
                ar = arrows[c][t]
                S2 = tuple(
                    self.push_subgroup(c, t, r, s) for r, s in zip(primes, S)
                )
                edge_target.append(vindex[(ar.target, S2)])
        edge_dual = []
        for vi, (c, S) in enumerate(vertices):
            for t in range(k):
                w = edge_target[vi * k + t]
                edge_dual.append(w * k + arrows[c][t].dual_index)
        for eid, de in enumerate(edge_dual):
            if edge_target[de] != eid // k or edge_dual[de] != eid:
                raise GraphBuildError(f"edge involution broken at edge {eid}")
            if de == eid and edge_target[eid] != eid // k:
                raise GraphBuildError(f"non-loop edge {eid} is its own dual")
        n = len(vertices)
        brandt = [[0] * n for _ in range(n)]
        for eid, w in enumerate(edge_target):
            brandt[eid // k][w] += 1
        validate_symmetry_and_row_sums(brandt, self.l)
        return EnhancedGraph(
            p=self.p,
            l=self.l,
            level=N,
            seed=self.seed,
            primes=tuple(primes),
            class_labels=tuple(_fmt_class(j) for j in table.js),
            vertices=tuple(vertices),
            brandt=tuple(tuple(row) for row in brandt),
            edge_target=tuple(edge_target),
            edge_dual=tuple(edge_dual),
            parity_violations=diagonal_parity_violations(brandt),
        )
