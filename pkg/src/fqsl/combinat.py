"""Counting machinery for representation families over F_q[t].

Everything here counts exactly, by enumeration over a finite member set
(usually a sampled truncation of the random sequence).  The counted objects:

* ``rep_sum_count`` / ``rep_diff_count_ring``: classical representation
  functions (unordered pairs with repetition allowed, resp. ordered pairs);
* ``count_sum3``: 3-subsets with pairwise distinct residues mod t**N summing
  to a target -- the "good" order-3 representations;
* ``count_chain8``: ordered 8-tuples witnessing that a good triple meets a
  three-way pair-sum collision (the obstruction removed by the B2[2] repair);
* ``count_sum4_low``: 4-subsets with distinct residues, a small minimum
  degree relative to the target, summing to the target;
* ``count_chain7``: ordered 7-tuples witnessing a Sidon violation on top of
  such a 4-subset;
* ``family_count``: the auxiliary coordinate families keyed by a shift r.

Sets vs tuples follows the defining conditions exactly: the sum3/sum4
families are families of subsets, the chain and auxiliary families are
ordered tuples.  In the chain conditions the two set-inequalities are a
chain ``{a} != {b} != {c}``: only adjacent pairs are required to differ.

``find_k_dsv`` and ``find_sunflower`` are exact decision procedures for
disjoint vector packings and vectorial sunflowers (greedy warm start, then
full backtracking).
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldCtx
from .polyring import Poly, enc_add, enc_deg, enc_sub
from .randmodel import OmegaSample


class MemberSet:
    """Indexed view of a finite set of polynomials, sorted canonically."""

    def __init__(
        self,
        ctx: FieldCtx,
        N: int,
        polys: Iterable[Poly],
        epsilon: Fraction | None = None,
    ):
        members = sorted(set(polys), key=lambda f: f.encode())
        self.ctx = ctx
        self.N = N
        self.epsilon = epsilon
        self.members = tuple(members)
        max_deg = max((int(m.deg) for m in members if not m.is_zero()), default=0)
        self.L = max(N, max_deg + 1)
        self.encs = np.array([m.encode() for m in members], dtype=np.int64)
        self.degs = np.array(
            [int(m.deg) if not m.is_zero() else -1 for m in members], dtype=np.int64
        )
        self.res = self.encs % ctx.q**N
        self.pos = {int(e): i for i, e in enumerate(self.encs)}
        self._res_buckets: dict[int, np.ndarray] | None = None

    @classmethod
    def from_sample(cls, omega: OmegaSample) -> "MemberSet":
        p = omega.params
        return cls(p.ctx, p.N, omega.members, epsilon=p.epsilon)

    def __len__(self) -> int:
        return len(self.members)

    def subset(self, polys: Iterable[Poly]) -> "MemberSet":
        return MemberSet(self.ctx, self.N, polys, epsilon=self.epsilon)

    def res_bucket(self, r: int) -> np.ndarray:
        if self._res_buckets is None:
            self._res_buckets = {}
            for i, r0 in enumerate(self.res):
                self._res_buckets.setdefault(int(r0), []).append(i)  # type: ignore[arg-type]
            self._res_buckets = {k: np.array(v, dtype=np.int64) for k, v in self._res_buckets.items()}
        return self._res_buckets.get(int(r), np.empty(0, dtype=np.int64))

    # encoded-arithmetic helpers bound to this view's window
    def add(self, u, v):
        return enc_add(self.ctx, self.L, u, v)

    def sub(self, u, v):
        return enc_sub(self.ctx, self.L, u, v)

    def deg_of(self, encs):
        return enc_deg(self.ctx.q, self.L, np.atleast_1d(np.asarray(encs, dtype=np.int64)))

    def poly(self, enc: int) -> Poly:
        return Poly.from_enc(self.ctx, int(enc))


def _as_ms(obj, N: int | None = None) -> MemberSet:
    if isinstance(obj, MemberSet):
        return obj
    if isinstance(obj, OmegaSample):
        return MemberSet.from_sample(obj)
    polys = list(obj)
    if not polys:
        raise ValueError("cannot infer context from an empty collection")
    return MemberSet(polys[0].ctx, N if N is not None else 1, polys)


# ---------------------------------------------------------------------------
# representation functions and the B2[g] verifier
# ---------------------------------------------------------------------------


def rep_sum_count(A: Iterable[Poly], n: Poly) -> int:
    """Unordered pairs {a, a'} from A (a = a' allowed) with a + a' = n."""
    items = set(A)
    count = 0
    for a in items:
        b = n - a
        if b in items and a.sort_key() <= b.sort_key():
            count += 1
    return count


def rep_diff_count_ring(A: Iterable[Poly], x: Poly) -> int:
    """Ordered pairs (a, a') from A with a - a' = x."""
    items = set(A)
    return sum(1 for ap in items if (x + ap) in items)


@dataclass
class B2gReport:
    max_reps: int
    witness_n: Poly | None = None
    witness_pairs: list[tuple[Poly, Poly]] = field(default_factory=list)

    def is_b2g(self, g: int) -> bool:
        return self.max_reps <= g


def pair_sum_index(ms: MemberSet) -> dict[int, list[tuple[int, int]]]:
    """Value -> list of unordered member pairs (positions i <= j) summing to it."""
    out: dict[int, list[tuple[int, int]]] = defaultdict(list)
    n = len(ms)
    for i in range(n):
        row = ms.add(ms.encs[i], ms.encs[i:])
        for off, s in enumerate(row):
            out[int(s)].append((i, i + off))
    return out


def verify_b2g(A: Iterable[Poly] | OmegaSample | MemberSet, g: int) -> B2gReport:
    """Max number of unordered pair representations over all sums."""
    if not isinstance(A, (OmegaSample, MemberSet)):
        A = list(A)
        if not A:
            return B2gReport(max_reps=0)
    ms = _as_ms(A)
    if len(ms) == 0:
        return B2gReport(max_reps=0)
    idx = pair_sum_index(ms)
    best_n, best = None, 0
    for v, pairs in idx.items():
        if len(pairs) > best or (len(pairs) == best and (best_n is None or v < best_n)):
            best, best_n = len(pairs), v
    pairs = [(ms.members[i], ms.members[j]) for i, j in idx[best_n]]
    return B2gReport(max_reps=best, witness_n=ms.poly(best_n), witness_pairs=pairs)


# ---------------------------------------------------------------------------
# sum3 (good triples) and chain8 (B2[2]-violation witnesses)
# ---------------------------------------------------------------------------


def count_sum3(omega, n: Poly, with_witnesses: bool = True):
    """3-subsets of the member set with pairwise distinct residues, sum n.

    Returns (count, witnesses); each witness is a Poly triple in canonical
    position order.
    """
    ms = _as_ms(omega)
    n_enc = n.encode()
    count = 0
    witnesses: list[tuple[Poly, Poly, Poly]] = []
    m = len(ms)
    for i in range(m):
        for j in range(i + 1, m):
            if ms.res[i] == ms.res[j]:
                continue
            e3 = ms.sub(ms.sub(n_enc, ms.encs[i]), ms.encs[j])
            k = ms.pos.get(int(e3))
            if k is None or k <= j:
                continue
            if ms.res[k] == ms.res[i] or ms.res[k] == ms.res[j]:
                continue
            count += 1
            if with_witnesses:
                witnesses.append((ms.members[i], ms.members[j], ms.members[k]))
    return count, witnesses


def sum3_counts(omega) -> dict[int, int]:
    """count_sum3 for every target at once: {target encoding: count}."""
    ms = _as_ms(omega)
    m = len(ms)
    out: dict[int, int] = defaultdict(int)
    if m < 3:
        return {}
    ii, jj = np.triu_indices(m, k=1)
    ok_pair = ms.res[ii] != ms.res[jj]
    ii, jj = ii[ok_pair], jj[ok_pair]
    psum = ms.add(ms.encs[ii], ms.encs[jj])
    for k in range(2, m):
        mask = (jj < k) & (ms.res[ii] != ms.res[k]) & (ms.res[jj] != ms.res[k])
        if not mask.any():
            continue
        sums = ms.add(psum[mask], ms.encs[k])
        vals, counts = np.unique(sums, return_counts=True)
        for v, c in zip(vals, counts):
            out[int(v)] += int(c)
    return dict(out)


def _member_mask(ms: MemberSet, vec: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(ms.encs, vec)
    pos = np.minimum(pos, len(ms.encs) - 1)
    return ms.encs[pos] == vec


def _chain8_weights(ms: MemberSet) -> dict[int, int]:
    """For each member position i1: number of valid (x4, (x5,x6), (x7,x8)).

    Conditions: x1 + x4 = x5 + x6 = x7 + x8 with x5, x7 in x1's residue
    class and x6, x8 in x4's; {x1,x4} != {x5,x6} and {x5,x6} != {x7,x8}.

    Counted arithmetically per (x1, x4) from the size c of the ordered pair
    list: the pair (x1, x4) itself is always listed, its swap exactly when
    x4 shares x1's class, and two listed pairs share a multiset only when
    one is the other's swap, which again needs the shared class.
    """
    out: dict[int, int] = {}
    m = len(ms)
    if m == 0:
        return out
    arange = np.arange(m)
    for i1 in range(m):
        e1 = int(ms.encs[i1])
        r1 = int(ms.res[i1])
        bucket = ms.res_bucket(r1)
        v = ms.add(e1, ms.encs)  # over all x4
        c = np.zeros(m, dtype=np.int64)
        for i5 in bucket:
            c += _member_mask(ms, ms.sub(v, int(ms.encs[i5])))
        same = ms.res == r1
        e_own = np.where(same, 2, 1)
        e_own[i1] = 1
        f = c - e_own
        # multiplicity of diagonal pairs (x5, x5) with 2*x5 = v
        doubles = np.sort(ms.add(ms.encs[bucket], ms.encs[bucket]))
        d = (np.searchsorted(doubles, v, side="right") - np.searchsorted(doubles, v)).astype(
            np.int64
        )
        own_is_diag = arange == i1
        f_diag = d - own_is_diag.astype(np.int64)  # own pair is diagonal iff x4 == x1
        totals = np.where(same, f * c - 2 * f + f_diag, f * (c - 1))
        total = int(totals.sum())
        if total:
            out[i1] = total
    return out


def count_chain8(omega, n: Poly) -> int:
    """Ordered 8-tuples: a good triple for n whose lead element sits in a
    three-way pair-sum collision (set inequalities as an adjacent chain)."""
    ms = _as_ms(omega)
    chains = _chain8_weights(ms)
    if not chains:
        return 0
    n_enc = n.encode()
    total = 0
    m = len(ms)
    for i1, c in chains.items():
        r1 = ms.res[i1]
        lead = ms.sub(n_enc, ms.encs[i1])
        ord23 = 0
        for i2 in range(m):
            if ms.res[i2] == r1:
                continue
            e3 = ms.sub(lead, ms.encs[i2])
            k = ms.pos.get(int(e3))
            if k is None or k == i2:
                continue
            if ms.res[k] == r1 or ms.res[k] == ms.res[i2]:
                continue
            ord23 += 1
        total += c * ord23
    return total


def chain8_counts(omega) -> dict[int, int]:
    """count_chain8 for every target at once."""
    ms = _as_ms(omega)
    chains = _chain8_weights(ms)
    out: dict[int, int] = defaultdict(int)
    if not chains:
        return {}
    m = len(ms)
    i_mat, j_mat = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    i_flat, j_flat = i_mat.ravel(), j_mat.ravel()
    res_ok = ms.res[i_flat] != ms.res[j_flat]
    i_flat, j_flat = i_flat[res_ok], j_flat[res_ok]
    psum = ms.add(ms.encs[i_flat], ms.encs[j_flat])
    for i1, c in chains.items():
        r1 = ms.res[i1]
        mask = (ms.res[i_flat] != r1) & (ms.res[j_flat] != r1)
        sums = ms.add(psum[mask], ms.encs[i1])
        vals, counts = np.unique(sums, return_counts=True)
        for v, cnt in zip(vals, counts):
            out[int(v)] += c * int(cnt)
    return dict(out)


# ---------------------------------------------------------------------------
# sum4-low (order 3+eps representations) and chain7 (Sidon-violation tuples)
# ---------------------------------------------------------------------------


def _require_epsilon(ms: MemberSet) -> Fraction:
    if ms.epsilon is None:
        raise ValueError("epsilon is not set on this member set")
    return ms.epsilon


def _min_deg_ok(min_deg: int, deg_n: int, eps: Fraction) -> bool:
    # exact rational comparison: min_deg <= eps * deg_n
    return min_deg * eps.denominator <= eps.numerator * deg_n


def count_sum4_low(omega, n: Poly) -> int:
    """4-subsets with pairwise distinct residues, sum n, and minimum degree
    at most eps * deg n (exact rational comparison)."""
    ms = _as_ms(omega)
    eps = _require_epsilon(ms)
    if n.is_zero():
        raise ValueError("target must be nonzero")
    deg_n = int(n.deg)
    n_enc = n.encode()
    m = len(ms)
    count = 0
    for i in range(m):
        # positions are in degree order, so position i is the minimum degree
        if not _min_deg_ok(int(ms.degs[i]), deg_n, eps):
            break
        for j in range(i + 1, m):
            if ms.res[j] == ms.res[i]:
                continue
            for k in range(j + 1, m):
                if ms.res[k] == ms.res[i] or ms.res[k] == ms.res[j]:
                    continue
                e4 = ms.sub(ms.sub(ms.sub(n_enc, ms.encs[i]), ms.encs[j]), ms.encs[k])
                l = ms.pos.get(int(e4))
                if l is None or l <= k:
                    continue
                if ms.res[l] in (ms.res[i], ms.res[j], ms.res[k]):
                    continue
                count += 1
    return count


def _sum4_low_pass(
    ms: MemberSet, node_weights: np.ndarray | None = None
) -> tuple[dict[int, int], dict[int, int]]:
    """One sweep over qualifying 4-subsets, bucketed by target encoding.

    Returns (counts, weighted) where `weighted[n]` sums, over the subsets
    hitting n, the total of ``node_weights`` across the four members.
    Subsets are enumerated by their minimum-position member i (canonical
    order is degree order, so that member realizes the minimum degree).
    """
    eps = _require_epsilon(ms)
    m = len(ms)
    counts: dict[int, int] = defaultdict(int)
    weighted: dict[int, int] = defaultdict(int)
    if m < 4:
        return {}, {}
    max_deg = int(ms.degs.max())
    for i in range(m):
        if not _min_deg_ok(int(ms.degs[i]), max_deg, eps):
            break
        sub_encs = ms.encs[i + 1 :]
        sub_res = ms.res[i + 1 :]
        msub = len(sub_encs)
        if msub < 3:
            continue
        jj, kk = np.triu_indices(msub, k=1)
        ok = (sub_res[jj] != sub_res[kk]) & (sub_res[jj] != ms.res[i]) & (sub_res[kk] != ms.res[i])
        jj, kk = jj[ok], kk[ok]
        psum = ms.add(ms.add(sub_encs[jj], sub_encs[kk]), ms.encs[i])
        if node_weights is not None:
            wsub = node_weights[i + 1 :]
            wpair = node_weights[i] + wsub[jj] + wsub[kk]
        for l in range(2, msub):
            mask = (
                (kk < l)
                & (sub_res[jj] != sub_res[l])
                & (sub_res[kk] != sub_res[l])
                & (sub_res[l] != ms.res[i])
            )
            if not mask.any():
                continue
            sums = ms.add(psum[mask], sub_encs[l])
            degs_n = ms.deg_of(sums)
            good = degs_n >= 0
            good &= int(ms.degs[i]) * eps.denominator <= eps.numerator * degs_n
            if not good.any():
                continue
            vals, inverse = np.unique(sums[good], return_inverse=True)
            cnt = np.bincount(inverse)
            for v, c in zip(vals, cnt):
                counts[int(v)] += int(c)
            if node_weights is not None:
                wquad = (wpair[mask] + wsub[l])[good]
                wsums = np.bincount(inverse, weights=wquad.astype(np.float64))
                for v, wv in zip(vals, wsums):
                    weighted[int(v)] += int(round(wv))
    return dict(counts), dict(weighted)


def sum4_low_counts(omega) -> dict[int, int]:
    """count_sum4_low for every (nonzero) target at once."""
    ms = _as_ms(omega)
    counts, _ = _sum4_low_pass(ms)
    return counts


def _chain7_weights(ms: MemberSet) -> dict[int, int]:
    """For each position i1: number of valid (x5, (x6, x7)) with
    x1 + x5 = x6 + x7, x6 in x1's residue class, x7 in x5's, and
    {x1,x5} != {x6,x7}.

    x7's class condition is automatic once x6 shares x1's class, and the
    excluded pair {x1,x5} is always listed (as (x1, x5), and also swapped
    when x5 shares x1's class), so a size count per x5 suffices.
    """
    out: dict[int, int] = {}
    m = len(ms)
    if m == 0:
        return out
    arange = np.arange(m)
    for i1 in range(m):
        e1 = int(ms.encs[i1])
        r1 = int(ms.res[i1])
        bucket1 = ms.res_bucket(r1)
        v = ms.add(e1, ms.encs)  # over all x5
        c = np.zeros(m, dtype=np.int64)
        for i6 in bucket1:
            c += _member_mask(ms, ms.sub(v, int(ms.encs[i6])))
        e_own = np.where(ms.res == r1, 2, 1)
        e_own[i1] = 1
        total = int((c - e_own).sum())
        if total:
            out[i1] = total
    return out


def count_chain7(omega, n: Poly) -> int:
    """Ordered 7-tuples: a sum4-low set for n one of whose elements sits in
    a Sidon violation.

    Each qualifying 4-subset contributes, for every choice of the chained
    element inside it, 3! coordinate orders of the remaining three.
    """
    ms = _as_ms(omega)
    if n.is_zero():
        raise ValueError("target must be nonzero")
    return chain7_counts(ms).get(n.encode(), 0)


def chain7_counts(omega) -> dict[int, int]:
    """count_chain7 for every target at once."""
    ms = _as_ms(omega)
    _require_epsilon(ms)
    chains = _chain7_weights(ms)
    if not chains:
        return {}
    weights = np.zeros(len(ms), dtype=np.int64)
    for i, c in chains.items():
        weights[i] = c
    _, weighted = _sum4_low_pass(ms, node_weights=weights)
    return {n: 6 * w for n, w in weighted.items() if w}


# ---------------------------------------------------------------------------
# auxiliary coordinate families
# ---------------------------------------------------------------------------

FAMILY_KINDS = ("sum-pair", "diff-pair", "double-chain", "sum-triple", "mixed-triple")


def family_count(omega, kind: str, r: Poly) -> int:
    """Ordered tuples matching the selected defining equation.

    sum-pair:     (x1, x2), x1 + x2 = r, x1 != x2
    diff-pair:    (x1, x2), x1 - x2 = r, x1 != x2
    sum-triple:   (x1, x2, x3), x1 + x2 + x3 = r, pairwise distinct
    mixed-triple: (x1, x2, x3), x1 + x2 - x3 = r, pairwise distinct
    double-chain: (x4, x5, x6, x7, x8), x5+x6-x4 = x7+x8-x4 = r, pairwise
                  distinct
    """
    ms = _as_ms(omega)
    r_enc = r.encode()
    m = len(ms)
    if kind == "sum-pair":
        return sum(
            1
            for i in range(m)
            if (j := ms.pos.get(int(ms.sub(r_enc, ms.encs[i])))) is not None and j != i
        )
    if kind == "diff-pair":
        return sum(
            1
            for i in range(m)
            if (j := ms.pos.get(int(ms.add(r_enc, ms.encs[i])))) is not None and j != i
        )
    if kind == "sum-triple":
        total = 0
        for i in range(m):
            for j in range(m):
                if j == i:
                    continue
                e3 = ms.sub(ms.sub(r_enc, ms.encs[i]), ms.encs[j])
                k = ms.pos.get(int(e3))
                if k is not None and k != i and k != j:
                    total += 1
        return total
    if kind == "mixed-triple":
        total = 0
        for i in range(m):
            for j in range(m):
                if j == i:
                    continue
                e3 = ms.sub(ms.add(ms.encs[i], ms.encs[j]), r_enc)
                k = ms.pos.get(int(e3))
                if k is not None and k != i and k != j:
                    total += 1
        return total
    if kind == "double-chain":
        total = 0
        for i4 in range(m):
            v = ms.add(r_enc, ms.encs[i4])
            pairs = []
            for i5 in range(m):
                if i5 == i4:
                    continue
                e6 = ms.sub(v, ms.encs[i5])
                i6 = ms.pos.get(int(e6))
                if i6 is None or i6 == i4 or i6 == i5:
                    continue
                pairs.append((i5, i6))
            for p56 in pairs:
                s56 = set(p56)
                for p78 in pairs:
                    if s56 & set(p78):
                        continue
                    total += 1
        return total
    raise ValueError(f"unknown family kind: {kind!r}")


# ---------------------------------------------------------------------------
# disjoint vector packings and vectorial sunflowers
# ---------------------------------------------------------------------------


@dataclass
class VectorFamily:
    """A family of H-coordinate vectors of polynomials."""

    H: int
    vectors: list[tuple[Poly, ...]]

    def __post_init__(self) -> None:
        if any(len(v) != self.H for v in self.vectors):
            raise ValueError("all vectors must have exactly H coordinates")
        if len(set(self.vectors)) != len(self.vectors):
            raise ValueError("vectors must be pairwise distinct as tuples")


@dataclass
class SunflowerWitness:
    core_coords: tuple[int, ...]  # 1-based coordinate positions, as in {1..H}
    petals: list[tuple[Poly, ...]]


def _dsv_backtrack(sets: list[frozenset], K: int) -> list[int] | None:
    n = len(sets)

    def rec(start: int, chosen: list[int], used: frozenset) -> list[int] | None:
        if len(chosen) == K:
            return chosen
        if len(chosen) + (n - start) < K:
            return None
        for idx in range(start, n):
            if sets[idx] & used:
                continue
            got = rec(idx + 1, chosen + [idx], used | sets[idx])
            if got is not None:
                return got
        return None

    return rec(0, [], frozenset())


def find_k_dsv(F: VectorFamily, K: int) -> list[tuple[Poly, ...]] | None:
    """K vectors with pairwise disjoint coordinate sets, or None.

    Greedy pass first; exact backtracking decides the rest.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    sets = [frozenset(v) for v in F.vectors]
    chosen: list[int] = []
    used: frozenset = frozenset()
    for i, s in enumerate(sets):
        if not (s & used):
            chosen.append(i)
            used = used | s
            if len(chosen) == K:
                return [F.vectors[i] for i in chosen]
    got = _dsv_backtrack(sets, K)
    if got is None:
        return None
    return [F.vectors[i] for i in got]


def find_sunflower(F: VectorFamily, K: int) -> SunflowerWitness | None:
    """First vectorial sunflower of K petals, scanning cores by bitmask.

    For each proper subset I of the coordinate positions (the full set can
    never work: distinct tuples cannot agree everywhere), vectors are
    bucketed by their I-projection and the I-deleted residues searched for a
    K-disjoint packing.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    H = F.H
    for mask in range(2**H - 1):
        coords = [i for i in range(H) if mask & (1 << i)]
        rest = [i for i in range(H) if not mask & (1 << i)]
        buckets: dict[tuple, list[int]] = defaultdict(list)
        for vi, vec in enumerate(F.vectors):
            buckets[tuple(vec[i] for i in coords)].append(vi)
        for idxs in buckets.values():
            if len(idxs) < K:
                continue
            reduced = VectorFamily(
                H=len(rest), vectors=[tuple(F.vectors[vi][i] for i in rest) for vi in idxs]
            )
            got = find_k_dsv(reduced, K)
            if got is not None:
                chosen = [idxs[reduced.vectors.index(g)] for g in got]
                return SunflowerWitness(
                    core_coords=tuple(i + 1 for i in coords),
                    petals=[F.vectors[vi] for vi in chosen],
                )
    return None


def sunflower_free_bound(H: int, K: int) -> int:
    """Size bound satisfied by any family without a K-petal sunflower."""
    return math.factorial(H) * ((H * H - H + 1) * K) ** H
