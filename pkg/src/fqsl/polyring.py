"""The additive ring F_q[t]: coefficient-sequence polynomials.

Polynomials are stored as normalized tuples of element indices (low degree
first, no trailing zeros).  The zero polynomial is the empty tuple and its
degree is the sentinel ``NEG_INF``; by the standing convention any power
``q**(mu * deg 0)`` evaluates to 0, which the numeric modules honor wherever
a degree enters an exponent.

``G_N`` denotes the additive group of polynomials of degree < N.  Its
elements are canonically encoded as integers in ``[0, q**N)`` by reading the
coefficient indices as base-q digits, low degree least significant; all
enumeration and all wire formats use that encoding.

Besides the ``Poly`` class this module hosts vectorized helpers on encoded
arrays (digit extraction, degree, addition) shared by the samplers, the
counting machinery and the numeric kernels.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .gf import FieldCtx, FieldElem, format_elem, parse_elem

NEG_INF = float("-inf")

ENUM_LIMIT = 10**7


class Poly:
    """An element of F_q[t] (normalized coefficient-index tuple)."""

    __slots__ = ("ctx", "idxs")

    def __init__(self, ctx: FieldCtx, idxs: Sequence[int]):
        xs = list(idxs)
        while xs and xs[-1] == 0:
            xs.pop()
        self.ctx = ctx
        self.idxs = tuple(xs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "Poly":
        return cls(ctx, ())

    @classmethod
    def from_elems(cls, coeffs: Sequence[FieldElem]) -> "Poly":
        if not coeffs:
            raise ValueError("use Poly.zero for the empty coefficient list")
        ctx = coeffs[0].ctx
        return cls(ctx, [c.index for c in coeffs])

    @classmethod
    def from_enc(cls, ctx: FieldCtx, enc: int) -> "Poly":
        if enc < 0:
            raise ValueError("encodings are nonnegative")
        xs = []
        while enc:
            xs.append(enc % ctx.q)
            enc //= ctx.q
        return cls(ctx, xs)

    @classmethod
    def t_power(cls, ctx: FieldCtx, k: int) -> "Poly":
        return cls(ctx, (0,) * k + (1,))

    # -- structure -----------------------------------------------------------

    @property
    def deg(self) -> int | float:
        return len(self.idxs) - 1 if self.idxs else NEG_INF

    @property
    def lead(self) -> FieldElem:
        if not self.idxs:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.ctx.from_index(self.idxs[-1])

    def coeff(self, i: int) -> FieldElem:
        idx = self.idxs[i] if i < len(self.idxs) else 0
        return self.ctx.from_index(idx)

    def is_zero(self) -> bool:
        return not self.idxs

    # -- arithmetic (additive only; multiplication lives in gf) --------------

    def _check(self, other: "Poly") -> None:
        if self.ctx.key != other.ctx.key:
            raise ValueError("polynomials from different field contexts")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.idxs), len(other.idxs))
        return Poly(self.ctx, [self.ctx.add(self.coeff(i), other.coeff(i)).index for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        n = max(len(self.idxs), len(other.idxs))
        return Poly(self.ctx, [self.ctx.sub(self.coeff(i), other.coeff(i)).index for i in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.ctx, [self.ctx.neg(self.coeff(i)).index for i in range(len(self.idxs))])

    def scale(self, c: FieldElem) -> "Poly":
        elems = [self.ctx.mul(c, self.ctx.from_index(x)) for x in self.idxs]
        return Poly(self.ctx, [e.index for e in elems])

    def residue_mod_tN(self, N: int) -> "Poly":
        if N < 0:
            raise ValueError("N must be >= 0")
        return Poly(self.ctx, self.idxs[:N])

    # -- encoding -------------------------------------------------------------

    def encode(self, N: int | None = None) -> int:
        if N is not None and len(self.idxs) > N:
            raise ValueError(f"degree {self.deg} too large for window G_{N}")
        e = 0
        for x in reversed(self.idxs):
            e = e * self.ctx.q + x
        return e

    def sort_key(self) -> tuple[float, int]:
        """Canonical total order: by degree, then by encoding value."""
        return (float(self.deg), self.encode())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.ctx.key == other.ctx.key and self.idxs == other.idxs

    def __hash__(self) -> int:
        return hash((self.ctx.key, self.idxs))

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


# ---------------------------------------------------------------------------
# G_N enumeration and encoding
# ---------------------------------------------------------------------------


def decode(ctx: FieldCtx, i: int, N: int) -> Poly:
    if not 0 <= i < ctx.q**N:
        raise ValueError(f"encoding {i} out of range for G_{N}")
    return Poly.from_enc(ctx, i)


def encode(f: Poly, N: int) -> int:
    return f.encode(N)


def enumerate_G(ctx: FieldCtx, N: int) -> list[Poly]:
    """All q**N polynomials of degree < N, in encoding order."""
    if N < 0:
        raise ValueError("N must be >= 0")
    total = ctx.q**N
    if total > ENUM_LIMIT:
        raise ValueError(f"G_{N} too large to enumerate ({total} elements)")
    return [Poly.from_enc(ctx, i) for i in range(total)]


def count_by_degree(ctx: FieldCtx, d: int) -> int:
    """Number of polynomials of degree exactly d: (q-1) * q**d."""
    if d < 0:
        raise ValueError("d must be >= 0")
    return (ctx.q - 1) * ctx.q**d


# ---------------------------------------------------------------------------
# text format: dense "1,2,0,3" (low degree first) or sparse "3t^3+2t+1"
# ---------------------------------------------------------------------------


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    return ",".join(format_elem(f.coeff(i)) for i in range(len(f.idxs)))


def parse_poly(ctx: FieldCtx, s: str) -> Poly:
    s = s.strip()
    if s == "0":
        return Poly.zero(ctx)
    if "t" not in s:
        parts = _split_top_level(s)
        return Poly(ctx, [parse_elem(ctx, tok).index for tok in parts])
    return _parse_sparse(ctx, s)


def _split_top_level(s: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_sparse(ctx: FieldCtx, s: str) -> Poly:
    # terms like "3t^3", "2t", "1", "[1,2]t^4"; separated by "+" or "-"
    s = s.replace(" ", "")
    terms: list[tuple[str, str]] = []
    sign, cur = "+", []
    depth = 0
    for ch in s:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch in "+-" and depth == 0 and cur:
            terms.append((sign, "".join(cur)))
            sign, cur = ch, []
        elif ch in "+-" and depth == 0 and not cur:
            sign = ch
        else:
            cur.append(ch)
    if cur:
        terms.append((sign, "".join(cur)))
    coeffs: dict[int, FieldElem] = {}
    for sign, term in terms:
        if "t" in term:
            coef_s, _, exp_s = term.partition("t")
            k = int(exp_s[1:]) if exp_s.startswith("^") else 1
            coef = parse_elem(ctx, coef_s) if coef_s else ctx.one
        else:
            k = 0
            coef = parse_elem(ctx, term)
        if sign == "-":
            coef = ctx.neg(coef)
        coeffs[k] = ctx.add(coeffs[k], coef) if k in coeffs else coef
    if not coeffs:
        return Poly.zero(ctx)
    top = max(coeffs)
    idxs = [coeffs[i].index if i in coeffs else 0 for i in range(top + 1)]
    return Poly(ctx, idxs)


# ---------------------------------------------------------------------------
# vectorized helpers on encoded arrays (the digit space of G_L)
# ---------------------------------------------------------------------------


def max_window(ctx: FieldCtx) -> int:
    """Largest digit count L with q**L still below 2**63."""
    L = 1
    while ctx.q ** (L + 1) < 2**62:
        L += 1
    return L


def enc_digits(q: int, L: int, encs: np.ndarray) -> np.ndarray:
    """Base-q digits of each encoding, shape (len(encs), L), low digit first."""
    out = np.empty((len(encs), L), dtype=np.int32)
    rem = encs.astype(np.int64)
    for i in range(L):
        out[:, i] = rem % q
        rem //= q
    return out


def enc_from_digits(q: int, digits: np.ndarray) -> np.ndarray:
    out = np.zeros(len(digits), dtype=np.int64)
    for i in range(digits.shape[1] - 1, -1, -1):
        out = out * q + digits[:, i].astype(np.int64)
    return out


def enc_deg(q: int, L: int, encs: np.ndarray) -> np.ndarray:
    """Degree of each encoded polynomial; -1 marks the zero polynomial."""
    digits = enc_digits(q, L, np.asarray(encs, dtype=np.int64))
    nz = digits != 0
    return np.where(nz.any(axis=1), L - 1 - np.argmax(nz[:, ::-1], axis=1), -1).astype(np.int64)


def enc_binop(ctx: FieldCtx, L: int, u, v, op: str):
    """Coefficient-wise add/sub of encoded polynomials (arrays or ints)."""
    scalar = np.isscalar(u) and np.isscalar(v)
    ua = np.atleast_1d(np.asarray(u, dtype=np.int64))
    va = np.atleast_1d(np.asarray(v, dtype=np.int64))
    ua, va = np.broadcast_arrays(ua, va)
    n = len(ua)
    if ctx.h == 1:
        p = ctx.p
        out = np.zeros(n, dtype=np.int64)
        mult = 1
        uu, vv = ua.copy(), va.copy()
        for _ in range(L):
            du, dv = uu % p, vv % p
            d = (du + dv) % p if op == "add" else (du - dv) % p
            out += d * mult
            mult *= p
            uu //= p
            vv //= p
    else:
        tab = ctx.add_table() if op == "add" else ctx.sub_table()
        q = ctx.q
        out = np.zeros(n, dtype=np.int64)
        mult = 1
        uu, vv = ua.copy(), va.copy()
        for _ in range(L):
            d = tab[uu % q, vv % q].astype(np.int64)
            out += d * mult
            mult *= q
            uu //= q
            vv //= q
    return int(out[0]) if scalar else out


def enc_add(ctx: FieldCtx, L: int, u, v):
    return enc_binop(ctx, L, u, v, "add")


def enc_sub(ctx: FieldCtx, L: int, u, v):
    return enc_binop(ctx, L, u, v, "sub")


def enc_neg(ctx: FieldCtx, L: int, u):
    return enc_sub(ctx, L, 0 if np.isscalar(u) else np.zeros_like(u), u)


def enc_scale(ctx: FieldCtx, L: int, encs, c_idx: int):
    """Coefficient-wise scaling of encoded polynomials by one field element."""
    scalar = np.isscalar(encs)
    uu = np.atleast_1d(np.asarray(encs, dtype=np.int64)).copy()
    col = ctx.mul_table()[:, c_idx].astype(np.int64)
    q = ctx.q
    out = np.zeros(len(uu), dtype=np.int64)
    mult = 1
    for _ in range(L):
        out += col[uu % q] * mult
        mult *= q
        uu //= q
    return int(out[0]) if scalar else out


def enc_residue(q: int, N: int, encs):
    """Residue mod t**N of encoded polynomials: the low N digits."""
    return encs % q**N
