"""Numeric oracles for the weighted-sum bounds and truncated expectations.

Two kinds of object live here.

First, the convolution-style sums

    sigma_{alpha,beta}(n; M) = sum over deg x > M of
                               q**(-alpha deg x) * q**(-beta deg(n - x))

and their relatives, evaluated two independent ways: ``sigma_direct`` walks
the truncated window term by term, ``sigma_closed`` aggregates by degree
class in O(D) arithmetic.  Their agreement is a standing dual-path check.
Whenever a degree of the zero polynomial would enter an exponent the whole
term is 0, matching the measure's convention; truncation tails are always
reported via the exact geometric tail formula, never silently dropped.

Second, exact truncated expectations and pair-correlation sums of the
counting families over the random model, computed by enumerating the
admissible window with the inclusion probability attached to each element
(the probability of a tuple is the product over its *distinct* elements).
These back the bounded-ratio regressions: each asymptotic bound in the
analysis is operationalized as "the ratio of the computed quantity to the
bound expression stays within a pinned, committed constant over a sweep",
with tails accounted separately and inconclusive results flagged rather
than passed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from . import _kernels
from .gf import FieldCtx
from .polyring import Poly, enc_deg, enc_scale
from .randmodel import ModelParams, OmegaSample, q_pow, sample_omega

WINDOW_LIMIT = 2 * 10**7
PAIR_BUDGET = 6 * 10**8
FAMILY_BUDGET = 5 * 10**5


# ---------------------------------------------------------------------------
# sigma oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaQuery:
    alpha: Fraction
    beta: Fraction
    n: Poly
    M: int
    D: int

    def __post_init__(self) -> None:
        if self.M < -1:
            raise ValueError("M must be >= -1")
        if self.D < self.M + 1:
            raise ValueError("D must be at least M + 1")


def _deg_tables(q: int, exponent: Fraction, up_to: int) -> np.ndarray:
    return np.array([q_pow(q, exponent * d) for d in range(up_to + 1)], dtype=np.float64)


def _poly_digits(f: Poly, q: int, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.int16)
    for i, c in enumerate(f.idxs):
        out[i] = c
    return out


def sigma_direct(ctx: FieldCtx, qy: SigmaQuery) -> float:
    """Term-by-term truncated sum over the window M < deg x <= D."""
    q = ctx.q
    L = qy.D + 1
    if q**L > WINDOW_LIMIT:
        raise ValueError(f"window too large: q**{L}")
    n_deg = int(qy.n.deg) if not qy.n.is_zero() else -1
    t_len = max(L, n_deg + 1)
    A = _deg_tables(q, -qy.alpha, qy.D)
    B = _deg_tables(q, -qy.beta, max(t_len - 1, n_deg, 0))
    return _kernels.window_pair_sum(
        q,
        L,
        qy.M,
        qy.D,
        _poly_digits(qy.n, q, t_len),
        ctx.sub_table(),
        A,
        B,
        0.0,
    )


def sigma_closed(ctx: FieldCtx, qy: SigmaQuery) -> float:
    """Same value as sigma_direct, by degree-class aggregation.

    For deg x != deg n the combined degree is max(deg x, deg n); at the
    shared degree N0, q-2 leading coefficients keep degree N0 and the
    remaining one sweeps G_N0 bijectively.
    """
    q = ctx.q
    terms: list[float] = []
    if qy.n.is_zero():
        for d in range(max(qy.M + 1, 0), qy.D + 1):
            terms.append((q - 1) * q**d * q_pow(q, -(qy.alpha + qy.beta) * d))
        return math.fsum(terms)
    n0 = int(qy.n.deg)
    for d in range(max(qy.M + 1, 0), qy.D + 1):
        if d < n0:
            terms.append((q - 1) * q**d * q_pow(q, -qy.alpha * d - qy.beta * n0))
        elif d > n0:
            terms.append((q - 1) * q**d * q_pow(q, -(qy.alpha + qy.beta) * d))
        else:
            terms.append((q - 2) * q**n0 * q_pow(q, -(qy.alpha + qy.beta) * n0))
            for e in range(n0):
                terms.append(
                    (q - 1) * q**e * q_pow(q, -qy.alpha * n0 - qy.beta * e)
                )
            # the z = 0 completion contributes nothing by the convention
    return math.fsum(terms)


def geometric_tail(q: int, gamma: Fraction, R: int) -> float:
    """Exact value of the weighted tail over degrees exceeding R."""
    if gamma <= 1:
        raise ValueError("tail diverges unless the exponent exceeds 1")
    ratio = q_pow(q, 1 - gamma)
    return (q - 1) * q_pow(q, (1 - gamma) * (R + 1)) / (1.0 - ratio)


# ---------------------------------------------------------------------------
# bound-ratio reports
# ---------------------------------------------------------------------------


@dataclass
class BoundReport:
    lemma: str
    point: dict
    quantity: float
    bound_expr: float
    ratio: float
    tail_estimate: float

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "point": self.point,
            "quantity": self.quantity,
            "bound_expr": self.bound_expr,
            "ratio": self.ratio,
            "tail_estimate": self.tail_estimate,
        }


def _rand_poly_of_degree(ctx: FieldCtx, d: int, rng: np.random.Generator) -> Poly:
    idxs = [int(rng.integers(0, ctx.q)) for _ in range(d)]
    idxs.append(int(rng.integers(1, ctx.q)))
    return Poly(ctx, idxs)


def check_basic_lemma(
    ctx: FieldCtx,
    which: str,
    *,
    alpha: Fraction | None = None,
    beta: Fraction | None = None,
    gamma: Fraction | None = None,
    phi: Fraction | None = None,
    kappa: Fraction | None = None,
    M: int = -1,
    degrees: range = range(1, 9),
    extra_targets: int = 2,
    seed: int = 20240901,
) -> list[BoundReport]:
    """Ratio reports for one of the three weighted-sum bounds.

    basic1: sigma_{alpha,beta}(n; M)      <~ q**(-(alpha+beta-1) max(deg n, M))
    basic2: sum q^{-g deg x - g deg(x+a) + (1-2g) deg(x+b)}
                                          <~ q**((1-2g)(deg a + deg b)), a != 0
            (and the reduced bound q**((1-2g) deg b) for a = 0)
    basic3: sum q^{-phi deg x - kappa max(deg(r+x), M)}
                                          <~ q**((1-phi-kappa) max(deg r, M))
    """
    rng = np.random.default_rng(seed)
    q = ctx.q
    reports: list[BoundReport] = []

    if which == "basic1":
        if alpha is None or beta is None:
            raise ValueError("basic1 needs alpha and beta")
        if not (0 < alpha < 1 and 0 < beta < 1 and alpha + beta > 1):
            raise ValueError("basic1 hypothesis violated")
        for d in degrees:
            targets = [Poly.t_power(ctx, d)] + [
                _rand_poly_of_degree(ctx, d, rng) for _ in range(extra_targets)
            ]
            D = d + 3
            for n in targets:
                qy = SigmaQuery(alpha=alpha, beta=beta, n=n, M=M, D=D)
                quantity = sigma_closed(ctx, qy)
                bound = q_pow(q, -(alpha + beta - 1) * max(d, M))
                tail = geometric_tail(q, alpha + beta, D)
                reports.append(
                    BoundReport(
                        lemma="basic1",
                        point={"deg_n": d, "M": M, "n": n.encode()},
                        quantity=quantity,
                        bound_expr=bound,
                        ratio=quantity / bound,
                        tail_estimate=tail,
                    )
                )
        return reports

    if which == "basic2":
        if gamma is None:
            raise ValueError("basic2 needs gamma")
        if not Fraction(1, 2) < gamma < Fraction(2, 3):
            raise ValueError("basic2 needs 1/2 < gamma < 2/3")
        for d in degrees:
            cases = [
                (Poly.t_power(ctx, d), Poly.t_power(ctx, d)),
                (Poly.t_power(ctx, d).scale(ctx.from_index(2)), Poly.t_power(ctx, d)),
                (Poly.t_power(ctx, max(0, d // 2)), Poly.t_power(ctx, d)),
                (_rand_poly_of_degree(ctx, d, rng), _rand_poly_of_degree(ctx, d, rng)),
                (Poly.zero(ctx), Poly.t_power(ctx, d)),
            ]
            for a, b in cases:
                D = d + 3
                L = D + 1
                da = int(a.deg) if not a.is_zero() else 0
                t_len = max(L, da + 1, d + 1)
                A = _deg_tables(q, -gamma, D)
                B = _deg_tables(q, -gamma, t_len)
                C = _deg_tables(q, (1 - 2 * gamma), t_len)
                quantity = _kernels.window_triple_sum(
                    q,
                    L,
                    -1,
                    D,
                    _poly_digits(a, q, t_len),
                    _poly_digits(b, q, t_len),
                    ctx.add_table(),
                    A,
                    B,
                    C,
                )
                if a.is_zero():
                    bound = q_pow(q, (1 - 2 * gamma) * d)
                    label = "basic2_zero"
                else:
                    bound = q_pow(q, (1 - 2 * gamma) * (int(a.deg) + d))
                    label = "basic2"
                tail = geometric_tail(q, 4 * gamma - 1, D)
                reports.append(
                    BoundReport(
                        lemma=label,
                        point={"deg_a": None if a.is_zero() else int(a.deg), "deg_b": d},
                        quantity=quantity,
                        bound_expr=bound,
                        ratio=quantity / bound,
                        tail_estimate=tail,
                    )
                )
        return reports

    if which == "basic3":
        if phi is None or kappa is None:
            raise ValueError("basic3 needs phi and kappa")
        if not (0 < phi < 1 and 0 < kappa < 1 and phi + kappa > 1):
            raise ValueError("basic3 hypothesis violated")
        if M < 0:
            raise ValueError("basic3 ratio sweep expects M >= 0")
        for d in degrees:
            targets = [Poly.t_power(ctx, d)] + [
                _rand_poly_of_degree(ctx, d, rng) for _ in range(extra_targets)
            ]
            D = d + 3
            L = D + 1
            for r in targets:
                t_len = max(L, d + 1)
                A = _deg_tables(q, -phi, D)
                maxes = np.maximum(np.arange(t_len + 1), M)
                B = np.array([q_pow(q, -kappa * int(j)) for j in maxes])
                quantity = _kernels.window_pair_sum(
                    q,
                    L,
                    M,
                    D,
                    _poly_digits(r, q, t_len),
                    ctx.add_table(),
                    A,
                    B,
                    q_pow(q, -kappa * M),
                )
                bound = q_pow(q, (1 - phi - kappa) * max(d, M))
                tail = geometric_tail(q, phi + kappa, D)
                reports.append(
                    BoundReport(
                        lemma="basic3",
                        point={"deg_r": d, "M": M, "r": r.encode()},
                        quantity=quantity,
                        bound_expr=bound,
                        ratio=quantity / bound,
                        tail_estimate=tail,
                    )
                )
        return reports

    raise ValueError(f"unknown lemma: {which!r}")


# ---------------------------------------------------------------------------
# the admissible universe of a model (exhaustive, no randomness)
# ---------------------------------------------------------------------------


class Universe:
    """All admissible elements of the truncated model, with weights."""

    def __init__(self, params: ModelParams):
        self.params = params
        q = params.ctx.q
        self.L = params.D + 1
        if q**self.L > WINDOW_LIMIT:
            raise ValueError("window too large for exact enumeration")
        res = params.residues_sorted()
        res_degs = enc_deg(q, params.N, res)
        chunks: list[np.ndarray] = []
        for s, ds in zip(res, res_degs):
            if params.M < ds < params.N and ds <= params.D:
                chunks.append(np.array([s], dtype=np.int64))
        qN = q**params.N
        for d in range(max(params.N, params.M + 1), params.D + 1):
            k = d - params.N
            y = np.arange(q**k, q ** (k + 1), dtype=np.int64)
            for s in res:
                chunks.append(int(s) + qN * y)
        self.encs = (
            np.sort(np.concatenate(chunks)) if chunks else np.empty(0, dtype=np.int64)
        )
        self.degs = enc_deg(q, self.L, self.encs)
        self.res = self.encs % qN
        thresholds = params.inclusion_thresholds()
        self.weights = thresholds[self.degs]
        self.w_full = np.zeros(q**self.L, dtype=np.float64)
        self.w_full[self.encs] = self.weights
        self.pos = {int(e): i for i, e in enumerate(self.encs)}

    def __len__(self) -> int:
        return len(self.encs)

    def member_weight(self, enc: int) -> float:
        return float(self.w_full[enc]) if 0 <= enc < len(self.w_full) else 0.0


EXPECTATION_KINDS = (
    "sum3",
    "chain8",
    "sum4-low",
    "chain7",
    "sum-pair",
    "diff-pair",
    "double-chain",
    "sum-triple",
    "mixed-triple",
)


def _inv_index(ctx: FieldCtx, value: int) -> int:
    return ctx.inv(ctx.from_index(value % ctx.q)).index


def _double_encs(ctx: FieldCtx, L: int, encs):
    from .polyring import enc_add

    return enc_add(ctx, L, encs, encs)


def expectation_exact(kind: str, params: ModelParams, target: Poly) -> float:
    """Exact expectation of the truncated family count at one target.

    Sums, over family members drawn from the admissible window, the product
    of inclusion probabilities over the member's distinct elements.
    """
    from .polyring import enc_add, enc_sub

    uni = Universe(params)
    ctx = params.ctx
    q = ctx.q
    L = uni.L
    if len(uni) == 0:
        return 0.0
    if not target.is_zero() and int(target.deg) >= L:
        return 0.0
    t_enc = target.encode()
    w = uni.weights
    W = uni.w_full
    encs = uni.encs

    if kind == "sum3":
        if q**L * len(uni) > PAIR_BUDGET and len(uni) ** 2 > PAIR_BUDGET:
            raise ValueError("window too large")
        raw = _kernels.triple_weight_sum(
            q, L, t_enc, encs, w, uni.res, W, q**params.N, ctx.sub_table(), 0
        )
        return raw / 6.0

    if kind == "sum-pair":
        partner = enc_sub(ctx, L, t_enc, encs)
        total = float(np.sum(w * W[partner]))
        if ctx.p != 2:
            half = enc_scale(ctx, L, t_enc, _inv_index(ctx, 2))
            total -= float(W[half] ** 2)
        else:
            # x + x = 0 in characteristic 2: diagonal pairs exist iff target is 0
            if t_enc == 0:
                total -= float(np.sum(w * w))
        return total

    if kind == "diff-pair":
        partner = enc_add(ctx, L, t_enc, encs)
        total = float(np.sum(w * W[partner]))
        if t_enc == 0:
            total -= float(np.sum(w * w))
        return total

    if kind == "sum-triple":
        raw = _kernels.triple_weight_sum(
            q, L, t_enc, encs, w, uni.res, W, q**params.N, ctx.sub_table(), 1
        )
        dbl = _double_encs(ctx, L, encs)
        e2 = float(np.sum(w * w * W[enc_sub(ctx, L, t_enc, dbl)]))
        if ctx.p == 3:
            e3 = float(np.sum(w**3)) if t_enc == 0 else 0.0
        else:
            x0 = enc_scale(ctx, L, t_enc, _inv_index(ctx, 3))
            e3 = float(W[x0] ** 3)
        return raw - 3.0 * e2 + 2.0 * e3

    if kind == "mixed-triple":
        raw = _kernels.triple_weight_sum(
            q, L, t_enc, encs, w, uni.res, W, q**params.N, ctx.sub_table(), 2
        )
        dbl = _double_encs(ctx, L, encs)
        s12 = float(np.sum(w * w * W[enc_sub(ctx, L, dbl, t_enc)]))
        s13 = float(W[t_enc] * np.sum(w * w))
        s123 = float(W[t_enc] ** 3)
        return raw - s12 - 2.0 * s13 + 2.0 * s123

    if kind == "double-chain":
        if len(uni) ** 2 > PAIR_BUDGET // 64:
            raise ValueError("window too large")
        total_parts: list[float] = []
        pos_index = uni.pos
        for i4 in range(len(uni)):
            e4 = int(encs[i4])
            v = enc_add(ctx, L, t_enc, e4)
            x6 = enc_sub(ctx, L, int(v), encs)
            wp = w * W[x6]
            ok = (x6 != encs) & (encs != e4) & (x6 != e4)
            wp = np.where(ok, wp, 0.0)
            live = np.flatnonzero(wp)
            if len(live) == 0:
                continue
            s_all = float(wp[live].sum())
            s_elem = np.zeros(len(uni), dtype=np.float64)
            np.add.at(s_elem, live, wp[live])
            pos6 = np.searchsorted(encs, x6[live])
            np.add.at(s_elem, pos6, wp[live])
            overlap = s_elem[live] + s_elem[pos6] - 2.0 * wp[live]
            contrib = wp[live] * (s_all - overlap)
            total_parts.append(w[i4] * float(contrib.sum()))
        return math.fsum(total_parts)

    if kind == "sum4-low":
        return _expectation_sum4_low(uni, target)

    if kind == "chain8":
        return _expectation_chain8(uni, target)

    if kind == "chain7":
        return _expectation_chain7(uni, target)

    raise ValueError(f"unknown expectation kind: {kind!r}")


def _expectation_sum4_low(uni: Universe, target: Poly) -> float:
    """Exact expectation of the sum4-low family count.

    Subsets are enumerated by their canonical minimum element, which is the
    minimum-degree element, so the low-degree condition is a prefix test.
    """
    from .polyring import enc_sub

    params = uni.params
    eps = params.epsilon
    if eps is None:
        raise ValueError("epsilon is not set")
    if target.is_zero():
        raise ValueError("target must be nonzero")
    ctx = params.ctx
    q = ctx.q
    qN = q**params.N
    deg_n = int(target.deg)
    m = len(uni)
    if m**2 > PAIR_BUDGET // 8:
        raise ValueError("window too large")
    encs, w, W, res = uni.encs, uni.weights, uni.w_full, uni.res
    t_enc = target.encode()
    parts: list[float] = []
    for i in range(m):
        if int(uni.degs[i]) * eps.denominator > eps.numerator * deg_n:
            break
        lead = enc_sub(ctx, uni.L, enc_sub(ctx, uni.L, t_enc, int(encs[i])), encs)
        for a in range(i + 1, m):
            if res[a] == res[i]:
                continue
            bs = np.arange(a + 1, m)
            if len(bs) == 0:
                continue
            keep = (res[bs] != res[i]) & (res[bs] != res[a])
            bs = bs[keep]
            if len(bs) == 0:
                continue
            c_enc = enc_sub(ctx, uni.L, int(lead[a]), encs[bs])
            wc = W[c_enc]
            rc = c_enc % qN
            good = (
                (c_enc > encs[bs])
                & (wc > 0)
                & (rc != res[i])
                & (rc != res[a])
                & (rc != res[bs])
            )
            if good.any():
                parts.append(
                    w[i] * w[a] * float(np.sum(w[bs[good]] * wc[good]))
                )
    return math.fsum(parts)


