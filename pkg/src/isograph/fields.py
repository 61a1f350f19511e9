"""Exact arithmetic in prime fields and their extension towers.

A field is F_p[x]/(m) for a canonical monic irreducible m found by
deterministic search, so every run (and every machine) agrees on element
encodings.  Elements are coefficient tuples, lowest degree first; all
"lexicographically smaller" tie-breaks are plain tuple comparison on those
encodings.  Raw tuple arithmetic lives on the Field object; FieldElement is
a thin operator wrapper around it.
"""

from __future__ import annotations

import random
from typing import Iterator, Sequence

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the base set covers n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldMismatch(ValueError):
    """Raised when an operation mixes elements of different fields."""


class NoSquareRoot(ValueError):
    """Raised by sqrt on a quadratic non-residue."""


class NotInSubfield(ValueError):
    """Raised when descending an element that is not in the embedded image."""


# ---------------------------------------------------------------------------
# plain list-based polynomial arithmetic over F_p (used for modulus search
# and inversion; the hot multiplication path in Field is packed instead)


def _poltrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k]
        if c:
            a[k] = 0
            for i in range(dm):
                a[k - dm + i] = (a[k - dm + i] - c * m[i]) % p
    del a[dm:]
    while len(a) < dm:
        a.append(0)
    return a


def _polmulmod(a: list[int], b: list[int], m: Sequence[int], p: int) -> list[int]:
    conv = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                conv[i + j] += ai * bj
    return _polmod(conv, m, p)


def _polpowmod(a: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = _polmod([1], m, p)
    base = _polmod(list(a), m, p)
    while e:
        if e & 1:
            result = _polmulmod(result, base, m, p)
        base = _polmulmod(base, base, m, p)
        e >>= 1
    return result


def _polgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _poltrim([c % p for c in a])
    b = _poltrim([c % p for c in b])
    while b:
        inv = pow(b[-1], p - 2, p)
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            shift = len(a) - 1 - db
            f = a[-1] * inv % p
            for i in range(len(b)):
                a[shift + i] = (a[shift + i] - f * b[i]) % p
            _poltrim(a)
        a, b = b, a
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(m: list[int], p: int) -> bool:
    """One-pass test: walk y -> y^p mod m, checking the standard gcd criteria
    at proper-divisor depths and y == x at depth d."""
    d = len(m) - 1
    if d == 1:
        return True
    x = [0, 1]
    checkpoints = {d // q for q in _prime_factors(d)}
    y = list(x)
    for i in range(1, d + 1):
        y = _polpowmod(y, p, m, p)
        if i in checkpoints:
            diff = _poltrim([(y[j] - (1 if j == 1 else 0)) % p for j in range(len(y))])
            g = _polgcd(diff, list(m), p)
            if len(g) != 1:
                return False
    return _poltrim([c % p for c in y]) == [0, 1]


# ---------------------------------------------------------------------------


class Field:
    """F_p[x]/(modulus).  Use make_extension_field for the canonical modulus."""

    def __init__(self, p: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise ValueError(f"field characteristic {p} is not prime")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        if not _is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.modulus = modulus
        self.deg = len(modulus) - 1
        self.q = p**self.deg
        self.zero_t = (0,) * self.deg
        self.one_t = (1,) + (0,) * (self.deg - 1)
        # x^deg = sum(tail[i] * x^i); kept sparse for cheap folding
        self._neg_tail = tuple(
            (i, (-modulus[i]) % p) for i in range(self.deg) if modulus[i]
        )
        self._nonresidue_t: tuple[int, ...] | None = None
        self._bytes = 8 * (2 * self.deg - 1)

    # -- construction / conversion

    def element(self, value) -> "FieldElement":
        return FieldElement(self, self.coerce_t(value))

    def coerce_t(self, value) -> tuple[int, ...]:
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldMismatch("element belongs to a different field")
            return value.coeffs
        if isinstance(value, int):
            return (value % self.p,) + (0,) * (self.deg - 1)
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.deg:
            raise ValueError("coefficient vector longer than field degree")
        coeffs += [0] * (self.deg - len(coeffs))
        return tuple(coeffs)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, self.zero_t)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, self.one_t)

    @property
    def gen(self) -> "FieldElement":
        if self.deg == 1:
            return FieldElement(self, self.one_t)
        return FieldElement(self, (0, 1) + (0,) * (self.deg - 2))

    def iter_tuples(self) -> Iterator[tuple[int, ...]]:
        """All q encodings in counting order (constant coefficient fastest)."""
        p, d = self.p, self.deg
        for n in range(self.q):
            yield tuple((n // p**i) % p for i in range(d))

    def random_t(self, rng: random.Random) -> tuple[int, ...]:
        return tuple(rng.randrange(self.p) for _ in range(self.deg))

    # -- raw tuple arithmetic

    def add_t(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub_t(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg_t(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def smul_t(self, c: int, a):
        p = self.p
        c %= p
        return tuple(c * x % p for x in a)

    def mul_t(self, a, b):
        d = self.deg
        if d == 1:
            return (a[0] * b[0] % self.p,)
        if d <= 6:
            conv = [0] * (2 * d - 1)
            for i in range(d):
                ai = a[i]
                if ai:
                    for j in range(d):
                        conv[i + j] += ai * b[j]
        else:
            # packed big-int convolution: one machine multiply does the
            # schoolbook work; coefficients stay far below 2^64
            za = int.from_bytes(
                b"".join(c.to_bytes(8, "little") for c in a), "little"
            )
            zb = int.from_bytes(
                b"".join(c.to_bytes(8, "little") for c in b), "little"
            )
            raw = (za * zb).to_bytes(self._bytes + 8, "little")
            conv = [
                int.from_bytes(raw[k : k + 8], "little")
                for k in range(0, self._bytes, 8)
            ]
        return self._reduce_conv(conv)

    def _reduce_conv(self, conv: list[int]) -> tuple[int, ...]:
        d, p = self.deg, self.p
        tail = self._neg_tail
        for k in range(len(conv) - 1, d - 1, -1):
            c = conv[k] % p
            if c:
                base = k - d
                for i, t in tail:
                    conv[base + i] += c * t
        return tuple(c % p for c in conv[:d])

    def sq_t(self, a):
        return self.mul_t(a, a)

    def pow_t(self, a, e: int):
        if e < 0:
            return self.pow_t(self.inv_t(a), -e)
        result = self.one_t
        base = a
        while e:
            if e & 1:
                result = self.mul_t(result, base)
            base = self.mul_t(base, base)
            e >>= 1
        return result

    def inv_t(self, a):
        if a == self.zero_t:
            raise ZeroDivisionError("inversion of zero field element")
        if self.deg == 1:
            return (pow(a[0], self.p - 2, self.p),)
        p = self.p
        # extended euclid in F_p[x]: r0 = modulus, r1 = a
        r0, r1 = list(self.modulus), _poltrim([c for c in a])
        s0, s1 = [0], [1]
        while r1:
            inv_lead = pow(r1[-1], p - 2, p)
            d0, d1 = len(r0) - 1, len(r1) - 1
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            shift = d0 - d1
            f = r0[-1] * inv_lead % p
            for i in range(len(r1)):
                r0[shift + i] = (r0[shift + i] - f * r1[i]) % p
            _poltrim(r0)
            s1_shifted = [0] * shift + s1
            ln = max(len(s0), len(s1_shifted))
            s0 = [
                ((s0[i] if i < len(s0) else 0) - f * (s1_shifted[i] if i < len(s1_shifted) else 0)) % p
                for i in range(ln)
            ]
            if not r0:
                r0, r1, s0, s1 = r1, r0, s1, s0
        # r0 is now the (constant) gcd, s0 its Bezout coefficient
        c = pow(r0[0], p - 2, p)
        out = [x * c % p for x in s0[: self.deg]]
        out += [0] * (self.deg - len(out))
        return tuple(out)

    def batch_inv_t(self, items: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
        """Montgomery trick: len(items) inversions for one inv_t."""
        n = len(items)
        if n == 0:
            return []
        prefix = [items[0]]
        for i in range(1, n):
            prefix.append(self.mul_t(prefix[-1], items[i]))
        acc = self.inv_t(prefix[-1])
        out: list[tuple[int, ...] | None] = [None] * n
        for i in range(n - 1, 0, -1):
            out[i] = self.mul_t(acc, prefix[i - 1])
            acc = self.mul_t(acc, items[i])
        out[0] = acc
        return out  # type: ignore[return-value]

    # -- quadratic residues

    def nonresidue_t(self) -> tuple[int, ...]:
        """First non-square in counting order; fixed search order keeps sqrt
        deterministic."""
        if self._nonresidue_t is None:
            e = (self.q - 1) // 2
            for t in self.iter_tuples():
                if t == self.zero_t:
                    continue
                if self.pow_t(t, e) != self.one_t:
                    self._nonresidue_t = t
                    break
            else:  # pragma: no cover - half of all elements qualify
                raise RuntimeError("no quadratic non-residue found")
        return self._nonresidue_t

    def is_square_t(self, a) -> bool:
        if a == self.zero_t:
            return True
        return self.pow_t(a, (self.q - 1) // 2) == self.one_t

    def sqrt_t(self, a):
        """Canonical square root (the lexicographically smaller of the pair)."""
        if a == self.zero_t:
            return a
        q = self.q
        if self.pow_t(a, (q - 1) // 2) != self.one_t:
            raise NoSquareRoot(f"{a} is not a square in F_{self.p}^{self.deg}")
        if q % 4 == 3:
            r = self.pow_t(a, (q + 1) // 4)
        else:
            # Tonelli-Shanks with the canonical non-residue
            m = q - 1
            s = (m & -m).bit_length() - 1
            m >>= s
            c = self.pow_t(self.nonresidue_t(), m)
            r = self.pow_t(a, (m + 1) // 2)
            t = self.pow_t(a, m)
            while t != self.one_t:
                t2, i = t, 0
                while t2 != self.one_t:
                    t2 = self.sq_t(t2)
                    i += 1
                b = c
                for _ in range(s - i - 1):
                    b = self.sq_t(b)
                r = self.mul_t(r, b)
                c = self.sq_t(b)
                t = self.mul_t(t, c)
                s = i
        return min(r, self.neg_t(r))

    def __repr__(self) -> str:
        return f"Field(p={self.p}, deg={self.deg})"


class FieldElement:
    """Operator wrapper over Field's raw tuple arithmetic."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def encoding(self) -> tuple[int, ...]:
        return self.coeffs

    def _coerce(self, other) -> tuple[int, ...]:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatch("operands from different fields")
            return other.coeffs
        if isinstance(other, int):
            return self.field.coerce_t(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add_t(self.coeffs, t))

    __radd__ = __add__

    def __sub__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub_t(self.coeffs, t))

    def __rsub__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub_t(t, self.coeffs))

    def __mul__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul_t(self.coeffs, t))

    __rmul__ = __mul__

    def __truediv__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul_t(self.coeffs, self.field.inv_t(t)))

    def __rtruediv__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul_t(t, self.field.inv_t(self.coeffs)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_t(self.coeffs, e))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_t(self.coeffs))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv_t(self.coeffs))

    def sqrt(self) -> "FieldElement":
        return FieldElement(self.field, self.field.sqrt_t(self.coeffs))

    def is_square(self) -> bool:
        return self.field.is_square_t(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == self.field.coerce_t(other)
        return NotImplemented

    def __lt__(self, other: "FieldElement") -> bool:
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise FieldMismatch("comparison requires elements of one field")
        return self.coeffs < other.coeffs

    def __hash__(self) -> int:
        return hash((id(self.field), self.coeffs))

    def __bool__(self) -> bool:
        return self.coeffs != self.field.zero_t

    def __repr__(self) -> str:
        return f"FieldElement{self.coeffs}@F_{self.field.p}^{self.field.deg}"


_FIELD_CACHE: dict[tuple[int, int], Field] = {}

_MODULUS_SEARCH_CAP = 500_000


def make_extension_field(p: int, d: int) -> Field:
    """F_{p^d} with the canonical modulus: the first monic irreducible of
    degree d when non-leading coefficient vectors are ordered with the
    highest-degree coefficient most significant.  Cached, so field objects
    are shared and element identity checks are cheap."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d < 1:
        raise ValueError("degree must be >= 1")
    key = (p, d)
    field = _FIELD_CACHE.get(key)
    if field is None:
        for n in range(min(p**d, _MODULUS_SEARCH_CAP)):
            cand = [(n // p**i) % p for i in range(d)] + [1]
            if d > 1 and cand[0] == 0:
                continue  # divisible by x
            if _is_irreducible(cand, p):
                field = Field(p, cand)
                break
        else:  # pragma: no cover - irreducibles are dense
            raise RuntimeError(f"modulus search cap hit for p={p}, d={d}")
        _FIELD_CACHE[key] = field
    return field


class Embedding:
    """Canonical embedding F_{p^a} -> F_{p^b} for a | b, a <= 2.

    The image of the source generator is the lexicographically smaller root
    of the source modulus in the target field, which makes the embedding
    (and hence every derived encoding) deterministic.
    """

    def __init__(self, src: Field, dst: Field):
        if src.p != dst.p:
            raise FieldMismatch("embedding requires equal characteristic")
        if dst.deg % src.deg != 0:
            raise ValueError("source degree must divide target degree")
        if src.deg > 2:
            raise NotImplementedError("only prime fields and quadratic sources")
        self.src = src
        self.dst = dst
        if src.deg == 1:
            gen_image = dst.one_t
        else:
            # root of x^2 + b1 x + b0 via the quadratic formula
            b0, b1 = src.modulus[0], src.modulus[1]
            disc = dst.coerce_t((b1 * b1 - 4 * b0) % src.p)
            root = dst.sqrt_t(disc)
            inv2 = pow(2, dst.p - 2, dst.p)
            minus_b1 = dst.coerce_t(-b1)
            r1 = dst.smul_t(inv2, dst.add_t(minus_b1, root))
            r2 = dst.smul_t(inv2, dst.sub_t(minus_b1, root))
            gen_image = min(r1, r2)
        self.gen_image = gen_image

    def map_t(self, t: tuple[int, ...]) -> tuple[int, ...]:
        if self.src.deg == 1:
            return self.dst.coerce_t(t[0])
        out = self.dst.coerce_t(t[0])
        out = self.dst.add_t(out, self.dst.smul_t(t[1], self.gen_image))
        return out

    def unmap_t(self, t: tuple[int, ...]) -> tuple[int, ...]:
        """Inverse on the image; raises NotInSubfield otherwise."""
        if self.src.deg == 1:
            if any(t[1:]):
                raise NotInSubfield(f"{t} has nonzero extension coordinates")
            return (t[0],)
        z = self.gen_image
        p = self.dst.p
        pivot = next((i for i in range(1, self.dst.deg) if z[i]), None)
        if pivot is None:  # pragma: no cover - generator never lies in F_p
            raise RuntimeError("degenerate embedding")
        c1 = t[pivot] * pow(z[pivot], p - 2, p) % p
        c0 = (t[0] - c1 * z[0]) % p
        if self.map_t((c0, c1)) != t:
            raise NotInSubfield(f"{t} is not in the embedded quadratic subfield")
        return (c0, c1)

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field is not self.src:
            raise FieldMismatch("element not in embedding source field")
        return FieldElement(self.dst, self.map_t(x.coeffs))

    def descend(self, x: FieldElement) -> FieldElement:
        if x.field is not self.dst:
            raise FieldMismatch("element not in embedding target field")
        return FieldElement(self.src, self.unmap_t(x.coeffs))


_EMBED_CACHE: dict[tuple[int, int], Embedding] = {}


def get_embedding(src: Field, dst: Field) -> Embedding:
    key = (id(src), id(dst))
    emb = _EMBED_CACHE.get(key)
    if emb is None:
        emb = Embedding(src, dst)
        _EMBED_CACHE[key] = emb
    return emb
