"""Exact arithmetic in F_p and F_{p^h}.

A :class:`FieldCtx` fixes a prime ``p``, an extension degree ``h`` and a
monic irreducible modulus of degree ``h`` over F_p.  Elements are stored as
coordinate vectors in the monomial basis ``{1, u, ..., u^(h-1)}``, with every
coordinate reduced mod p.  Construction is deterministic: when no modulus is
supplied, the canonically smallest monic irreducible is chosen, so two
contexts built from the same ``(p, h)`` are interchangeable on any platform.

Each element also carries a canonical index ``sum(c_i * p**i)``; index 0 is
zero and indices ``0..p-1`` are the prime-subfield constants.  That index
order is the total order used by all enumeration downstream.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

# Pairwise operation tables are only materialized for fields small enough
# that a q*q int32 array stays comfortably in memory.
TABLE_LIMIT = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# dense polynomials over F_p (coefficient lists, low degree first); these are
# internal helpers for irreducibility testing and extension-field arithmetic
# ---------------------------------------------------------------------------


def _pf_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pf_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = (x - y) % p
    return _pf_trim(out)


def _pf_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pf_trim(out)


def _pf_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    # m is monic
    r = list(a)
    dm = len(m) - 1
    while len(r) - 1 >= dm and r:
        lead = r[-1]
        shift = len(r) - 1 - dm
        if lead:
            for j in range(dm + 1):
                r[shift + j] = (r[shift + j] - lead * m[j]) % p
        r.pop()
        _pf_trim(r)
    return r


def _pf_mulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    return _pf_mod(_pf_mul(a, b, p), m, p)


def _pf_powmod(base: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    acc = _pf_mod(base, m, p)
    while e:
        if e & 1:
            result = _pf_mulmod(result, acc, m, p)
        acc = _pf_mulmod(acc, acc, m, p)
        e >>= 1
    return result


def _pf_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    x, y = _pf_trim(list(a)), _pf_trim(list(b))
    while y:
        # reduce x mod y; scale y monic first
        inv_lead = pow(y[-1], p - 2, p)
        y_monic = [(c * inv_lead) % p for c in y]
        x, y = y, _pf_mod(x, y_monic, p)
    return x


def _pf_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    quot: list[int] = []
    r = _pf_trim(list(a))
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while r and len(r) - 1 >= db:
        coef = (r[-1] * inv_lead) % p
        shift = len(r) - 1 - db
        if len(quot) < shift + 1:
            quot.extend([0] * (shift + 1 - len(quot)))
        quot[shift] = coef
        for j in range(db + 1):
            r[shift + j] = (r[shift + j] - coef * b[j]) % p
        _pf_trim(r)
    return quot, r


def _pf_invmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    # extended Euclid in F_p[t]; m monic irreducible, a nonzero mod m
    r0, r1 = list(m), _pf_mod(a, m, p)
    s0, s1 = [], [1]
    while r1:
        quot, rem = _pf_divmod(r0, r1, p)
        r0, r1 = r1, rem
        s0, s1 = s1, _pf_sub(s0, _pf_mul(quot, s1, p), p)
    # r0 = gcd, a nonzero constant since m is irreducible
    c_inv = pow(r0[0], p - 2, p)
    return _pf_mod([(c * c_inv) % p for c in s0], m, p)


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


def is_irreducible(p: int, f: Sequence[int]) -> bool:
    """Decide irreducibility of a monic polynomial over F_p.

    ``f`` is a coefficient list, low degree first.  Uses the Frobenius-based
    test: f of degree n is irreducible iff t^(p^n) = t (mod f) and
    gcd(t^(p^(n/r)) - t, f) = 1 for every prime r dividing n.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    coeffs = _pf_trim([c % p for c in f])
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    if coeffs[-1] != 1:
        raise ValueError("polynomial must be monic")
    if n == 1:
        return True
    t = [0, 1]
    frob = _pf_powmod(t, p**n, coeffs, p)
    if _pf_sub(frob, t, p):
        return False
    for r in _prime_factors(n):
        g = _pf_powmod(t, p ** (n // r), coeffs, p)
        diff = _pf_sub(g, t, p)
        gcd = _pf_gcd(coeffs, diff, p)
        if len(gcd) - 1 != 0:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, h: int) -> tuple[int, ...]:
    """The monic irreducible of degree h over F_p with smallest canonical index.

    Candidates t^h + c_(h-1) t^(h-1) + ... + c_0 are ordered by the integer
    sum(c_i * p**i); the first irreducible one wins.  For h = 1 this is t.
    """
    for m in range(p**h):
        coeffs = []
        v = m
        for _ in range(h):
            coeffs.append(v % p)
            v //= p
        coeffs.append(1)
        if is_irreducible(p, coeffs):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldElem:
    """An element of F_{p^h}, as coordinates over F_p (low basis index first)."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: "FieldCtx", coords: tuple[int, ...]):
        self.ctx = ctx
        self.coords = coords

    @property
    def index(self) -> int:
        i = 0
        for c in reversed(self.coords):
            i = i * self.ctx.p + c
        return i

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "FieldElem") -> "FieldElem":
        return self.ctx.add(self, other)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self.ctx.sub(self, other)

    def __neg__(self) -> "FieldElem":
        return self.ctx.neg(self)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return self.ctx.mul(self, other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldElem)
            and self.ctx.key == other.ctx.key
            and self.coords == other.coords
        )

    def __hash__(self) -> int:
        return hash((self.ctx.key, self.coords))

    def __repr__(self) -> str:
        return f"FieldElem({self.ctx.p}^{self.ctx.h}, {format_elem(self)})"


class FieldCtx:
    """A finite field F_{p^h} with a fixed monic irreducible modulus."""

    def __init__(self, p: int, h: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        if h < 1:
            raise ValueError(f"h must be >= 1, got {h}")
        self.p = p
        self.h = h
        self.q = p**h
        if modulus is None:
            self.modulus = smallest_irreducible(p, h)
        else:
            mod = tuple(c % p for c in modulus)
            if len(mod) != h + 1 or mod[-1] != 1:
                raise ValueError("modulus must be monic of degree h")
            if not is_irreducible(p, mod):
                raise ValueError("modulus is not irreducible")
            self.modulus = mod
        self.key = (p, h, self.modulus)
        self._tables: dict[str, np.ndarray] = {}

    # -- construction -----------------------------------------------------

    def elem(self, coords: int | Iterable[int]) -> FieldElem:
        if isinstance(coords, int):
            return self.from_index(coords % self.q)
        cs = tuple(c % self.p for c in coords)
        if len(cs) != self.h:
            raise ValueError(f"need {self.h} coordinates, got {len(cs)}")
        return FieldElem(self, cs)

    def from_index(self, i: int) -> FieldElem:
        if not 0 <= i < self.q:
            raise ValueError(f"index out of range: {i}")
        coords = []
        for _ in range(self.h):
            coords.append(i % self.p)
            i //= self.p
        return FieldElem(self, tuple(coords))

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, (0,) * self.h)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, (1,) + (0,) * (self.h - 1))

    # -- arithmetic --------------------------------------------------------

    def _check(self, *elems: FieldElem) -> None:
        for e in elems:
            if e.ctx.key != self.key:
                raise ValueError("element from a different field context")

    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        self._check(a, b)
        return FieldElem(self, tuple((x + y) % self.p for x, y in zip(a.coords, b.coords)))

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        self._check(a, b)
        return FieldElem(self, tuple((x - y) % self.p for x, y in zip(a.coords, b.coords)))

    def neg(self, a: FieldElem) -> FieldElem:
        self._check(a)
        return FieldElem(self, tuple((-x) % self.p for x in a.coords))

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        self._check(a, b)
        prod = _pf_mulmod(_pf_trim(list(a.coords)), _pf_trim(list(b.coords)), list(self.modulus), self.p)
        return FieldElem(self, tuple(prod + [0] * (self.h - len(prod))))

    def inv(self, a: FieldElem) -> FieldElem:
        self._check(a)
        if a.is_zero():
            raise ZeroDivisionError("cannot invert the zero element")
        if self.h == 1:
            return FieldElem(self, (pow(a.coords[0], self.p - 2, self.p),))
        out = _pf_invmod(_pf_trim(list(a.coords)), list(self.modulus), self.p)
        return FieldElem(self, tuple(out + [0] * (self.h - len(out))))

    # -- enumeration and index tables --------------------------------------

    def enumerate(self) -> list[FieldElem]:
        """All q elements, in canonical index order (index 0 is zero)."""
        return [self.from_index(i) for i in range(self.q)]

    def _pair_table(self, name: str, op) -> np.ndarray:
        if name not in self._tables:
            if self.q > TABLE_LIMIT:
                raise ValueError(f"field too large for pairwise tables (q={self.q})")
            elems = self.enumerate()
            tab = np.empty((self.q, self.q), dtype=np.int32)
            for i, a in enumerate(elems):
                for j, b in enumerate(elems):
                    tab[i, j] = op(a, b).index
            self._tables[name] = tab
        return self._tables[name]

    def add_table(self) -> np.ndarray:
        if self.h == 1 and "add" not in self._tables:
            i = np.arange(self.q, dtype=np.int32)
            self._tables["add"] = (i[:, None] + i[None, :]) % self.p
        return self._pair_table("add", self.add)

    def sub_table(self) -> np.ndarray:
        if self.h == 1 and "sub" not in self._tables:
            i = np.arange(self.q, dtype=np.int32)
            self._tables["sub"] = (i[:, None] - i[None, :]) % self.p
        return self._pair_table("sub", self.sub)

    def mul_table(self) -> np.ndarray:
        if self.h == 1 and "mul" not in self._tables:
            i = np.arange(self.q, dtype=np.int64)
            self._tables["mul"] = ((i[:, None] * i[None, :]) % self.p).astype(np.int32)
        return self._pair_table("mul", self.mul)

    def neg_vector(self) -> np.ndarray:
        if "neg" not in self._tables:
            self._tables["neg"] = np.array(
                [self.neg(self.from_index(i)).index for i in range(self.q)], dtype=np.int32
            )
        return self._tables["neg"]

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, h={self.h}, q={self.q})"


def field_new(p: int, h: int) -> FieldCtx:
    """Build the canonical F_{p^h} context (deterministic modulus choice)."""
    return FieldCtx(p, h)


# ---------------------------------------------------------------------------
# text format: a bare integer for prime fields, "[c0,...,c_{h-1}]" otherwise
# ---------------------------------------------------------------------------


def format_elem(e: FieldElem) -> str:
    if e.ctx.h == 1:
        return str(e.coords[0])
    return "[" + ",".join(str(c) for c in e.coords) + "]"


def parse_elem(ctx: FieldCtx, s: str) -> FieldElem:
    s = s.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValueError(f"malformed element literal: {s!r}")
        parts = s[1:-1].split(",")
        return ctx.elem([int(x) for x in parts])
    if ctx.h != 1:
        raise ValueError("bare integers only denote prime-field elements")
    return ctx.elem([int(s)])
