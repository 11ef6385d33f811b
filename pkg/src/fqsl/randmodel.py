"""Random sequences of polynomials with degree-weighted inclusion.

The model fixes a residue set S inside G_N and includes each polynomial x
with ``deg x > M`` and ``x = s (mod t**N)`` for some listed s independently,
with probability ``q**(-gamma * deg x)``; everything else (including 0) has
probability zero.  The mathematical object is an infinite random sequence;
this artifact samples its truncation to degrees <= D, and D is carried as an
explicit parameter so every downstream count is reported as truncated.

Sampling is driven by a counter-based generator keyed on (seed, encoding),
so inclusion decisions are independent of enumeration order and identical
(params, seed) always reproduce the same sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _kernels
from .gf import FieldCtx, field_new
from .polyring import NEG_INF, Poly, enc_deg

ADMISSIBLE_LIMIT = 10**8


def q_pow(q: int, e: Fraction | int) -> float:
    """q**e in binary64, exact when the exponent is an integer."""
    if isinstance(e, Fraction) and e.denominator == 1:
        e = int(e)
    if isinstance(e, int):
        return float(q**e) if e >= 0 else 1.0 / float(q ** (-e))
    return math.exp(float(e) * math.log(q))


@dataclass(frozen=True)
class ModelParams:
    ctx: FieldCtx
    N: int
    S: frozenset[int]
    gamma: Fraction
    M: int
    D: int
    seed: int = 0
    epsilon: Fraction | None = field(default=None)

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not self.S:
            raise ValueError("residue set must be nonempty")
        qN = self.ctx.q**self.N
        if any(not 0 <= s < qN for s in self.S):
            raise ValueError("residues must be encodings inside G_N")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        if self.M < 0:
            raise ValueError("M must be >= 0 for sampling")
        if self.D < self.M:
            raise ValueError("D must be >= M")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")

    # -- admissibility ------------------------------------------------------

    def residues_sorted(self) -> np.ndarray:
        return np.array(sorted(self.S), dtype=np.int64)

    def is_admissible(self, x: Poly) -> bool:
        if x.is_zero() or x.deg <= self.M:
            return False
        return x.residue_mod_tN(self.N).encode() in self.S

    def inclusion_thresholds(self) -> np.ndarray:
        """Per-degree inclusion probability, indexed 0..D."""
        return np.array([q_pow(self.ctx.q, -self.gamma * d) for d in range(self.D + 1)])

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "p": self.ctx.p,
            "h": self.ctx.h,
            "N": self.N,
            "S": sorted(self.S),
            "gamma": str(self.gamma),
            "M": self.M,
            "D": self.D,
            "seed": self.seed,
        }
        if self.epsilon is not None:
            out["epsilon"] = str(self.epsilon)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ModelParams":
        return cls(
            ctx=field_new(obj["p"], obj["h"]),
            N=obj["N"],
            S=frozenset(obj["S"]),
            gamma=Fraction(obj["gamma"]),
            M=obj["M"],
            D=obj["D"],
            seed=obj.get("seed", 0),
            epsilon=Fraction(obj["epsilon"]) if "epsilon" in obj else None,
        )

    def with_seed(self, seed: int) -> "ModelParams":
        return replace(self, seed=seed)


def prob_of(params: ModelParams, x: Poly) -> float:
    """Inclusion probability of a single polynomial (D plays no role here)."""
    if not params.is_admissible(x):
        return 0.0
    return q_pow(params.ctx.q, -params.gamma * int(x.deg))


def admissible_count(params: ModelParams) -> int:
    """Number of polynomials in the truncated admissible window."""
    q = params.ctx.q
    total = 0
    res_degs = enc_deg(q, params.N, params.residues_sorted())
    for ds in res_degs:
        if params.M < ds < params.N and ds <= params.D:
            total += 1
    for d in range(max(params.N, params.M + 1), params.D + 1):
        total += len(params.S) * (q - 1) * q ** (d - params.N)
    return total


def expected_size(params: ModelParams) -> float:
    """Closed-form expected size of the truncated sample.

    Residue classes contribute (q-1) * q**(d-N) polynomials of each degree
    d >= N; degrees inside (M, N) are handled by direct membership of the
    listed residues.
    """
    q = params.ctx.q
    terms: list[float] = []
    res = params.residues_sorted()
    res_degs = enc_deg(q, params.N, res)
    for ds in res_degs:
        if params.M < ds < params.N and ds <= params.D:
            terms.append(q_pow(q, -params.gamma * int(ds)))
    for d in range(max(params.N, params.M + 1), params.D + 1):
        count = len(params.S) * (q - 1) * q ** (d - params.N)
        terms.append(count * q_pow(q, -params.gamma * d))
    return math.fsum(terms)


class OmegaSample:
    """A sampled truncation of the random sequence (sorted member tuple)."""

    def __init__(self, params: ModelParams, members: tuple[Poly, ...]):
        self.params = params
        self.members = members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @cached_property
    def encs(self) -> np.ndarray:
        return np.array([m.encode() for m in self.members], dtype=np.int64)

    @cached_property
    def degs(self) -> np.ndarray:
        return np.array([int(m.deg) for m in self.members], dtype=np.int64)

    @cached_property
    def residues(self) -> np.ndarray:
        return self.encs % self.params.ctx.q**self.params.N

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "members": [
                {"enc": int(e), "deg": int(d)} for e, d in zip(self.encs, self.degs)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "OmegaSample":
        params = ModelParams.from_json(obj["params"])
        members = tuple(Poly.from_enc(params.ctx, m["enc"]) for m in obj["members"])
        return cls(params, members)

    def __repr__(self) -> str:
        return f"OmegaSample(|members|={len(self.members)}, seed={self.params.seed})"


def sample_omega(params: ModelParams) -> OmegaSample:
    """Draw the truncated sample for (params, params.seed)."""
    if admissible_count(params) > ADMISSIBLE_LIMIT:
        raise ValueError("admissible window too large to sample")
    q = params.ctx.q
    res = params.residues_sorted()
    res_degs = enc_deg(q, params.N, res)
    encs = _kernels.sample_window(
        q,
        params.N,
        params.M,
        params.D,
        res,
        res_degs,
        params.inclusion_thresholds(),
        params.seed,
    )
    members = tuple(Poly.from_enc(params.ctx, int(e)) for e in encs)
    return OmegaSample(params, members)
