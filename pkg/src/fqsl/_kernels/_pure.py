"""Pure numpy backend for the hot enumeration kernels.

Functionally identical to the compiled backend in ``_core.pyx``; every
function here is the reference the compiled twin is tested against.  All
reductions use numpy's fixed-block pairwise summation, so results are
deterministic run to run.

Conventions shared by both backends:

* polynomials of degree < L over F_q are encodings in ``[0, q**L)`` whose
  base-q digits (low digit first) are coefficient indices;
* "degree" of an encoding is the highest nonzero digit position, with -1
  for the zero encoding;
* digitwise combination of two encodings uses a (q, q) int table, row
  indexed by the first operand's digit.
"""

from __future__ import annotations

import numpy as np

_U64 = np.uint64
_HIST_LIMIT = 2 * 10**7

_digit_cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}


def backend_name() -> str:
    return "pure"


def _window_digits(q: int, L: int) -> tuple[np.ndarray, np.ndarray]:
    """Digits and degrees of every encoding in [0, q**L), cached."""
    key = (q, L)
    if key not in _digit_cache:
        total = q**L
        if total > _HIST_LIMIT:
            raise ValueError(f"window too large: q**L = {total}")
        enc = np.arange(total, dtype=np.int64)
        digits = np.empty((total, L), dtype=np.int16)
        rem = enc.copy()
        for i in range(L):
            digits[:, i] = rem % q
            rem //= q
        nz = digits != 0
        degs = np.where(nz.any(axis=1), L - 1 - np.argmax(nz[:, ::-1], axis=1), -1)
        _digit_cache[key] = (digits, degs.astype(np.int64))
    return _digit_cache[key]


def _deg_of_digits(mat: np.ndarray) -> np.ndarray:
    nz = mat != 0
    L = mat.shape[1]
    return np.where(nz.any(axis=1), L - 1 - np.argmax(nz[:, ::-1], axis=1), -1)


def window_pair_sum(
    q: int,
    L: int,
    M: int,
    D: int,
    t_digits: np.ndarray,
    tab: np.ndarray,
    A: np.ndarray,
    B: np.ndarray,
    zero_b: float,
) -> float:
    """Sum of A[deg x] * f(t o x) over the degree window M < deg x <= D.

    ``t o x`` combines digitwise through ``tab`` (row = t's digit); ``f`` is
    B[deg] for a nonzero combination and ``zero_b`` for the zero polynomial.
    ``t_digits`` may be longer than L when deg t >= L.
    """
    digits, degs = _window_digits(q, L)
    mask = (degs > M) & (degs <= D)
    xd = digits[mask]
    dx = degs[mask]
    t_deg = int(_deg_of_digits(t_digits[None, :])[0])
    if t_deg >= L:
        vals = A[dx] * B[t_deg]
        return float(np.sum(vals))
    comb = tab[t_digits[:L][None, :], xd]
    dc = _deg_of_digits(comb)
    fvals = np.where(dc >= 0, B[np.maximum(dc, 0)], zero_b)
    return float(np.sum(A[dx] * fvals))


def window_triple_sum(
    q: int,
    L: int,
    M: int,
    D: int,
    a_digits: np.ndarray,
    b_digits: np.ndarray,
    tab: np.ndarray,
    A: np.ndarray,
    B: np.ndarray,
    C: np.ndarray,
) -> float:
    """Sum of A[deg x] * B[deg(x o a)] * C[deg(x o b)] over the window.

    A term vanishes whenever x o a or x o b is the zero polynomial.
    """
    digits, degs = _window_digits(q, L)
    mask = (degs > M) & (degs <= D)
    xd = digits[mask]
    dx = degs[mask]

    def factor(t_digits: np.ndarray, table: np.ndarray) -> np.ndarray:
        t_deg = int(_deg_of_digits(t_digits[None, :])[0])
        if t_deg >= L:
            return np.full(len(xd), table[t_deg])
        comb = tab[t_digits[:L][None, :], xd]
        dc = _deg_of_digits(comb)
        return np.where(dc >= 0, table[np.maximum(dc, 0)], 0.0)

    vals = A[dx] * factor(a_digits, B) * factor(b_digits, C)
    return float(np.sum(vals))


def _combine_encs(q: int, L: int, tab: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.zeros(np.broadcast(u, v).shape, dtype=np.int64)
    uu = u.astype(np.int64)
    vv = v.astype(np.int64)
    mult = 1
    for _ in range(L):
        out += tab[uu % q, vv % q].astype(np.int64) * mult
        mult *= q
        uu = uu // q
        vv = vv // q
    return out


def diff_hist(q: int, L: int, sub_tab: np.ndarray, elems: np.ndarray) -> np.ndarray:
    """Histogram of e_i - e_j over all ordered pairs of the element list."""
    total = q**L
    if total > _HIST_LIMIT:
        raise ValueError(f"ambient too large: q**L = {total}")
    e = np.asarray(elems, dtype=np.int64)
    d = _combine_encs(q, L, sub_tab, e[:, None], e[None, :]).ravel()
    return np.bincount(d, minlength=total)


def triple_hist(
    q: int, L: int, add_tab: np.ndarray, elems: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Ordered-triple sum histograms over the element list.

    Returns (all, distinct): `all` counts every ordered triple (i, j, k);
    `distinct` only those with i, j, k pairwise different.  Computed by
    inclusion-exclusion over the coincidence patterns.
    """
    total = q**L
    if total > _HIST_LIMIT:
        raise ValueError(f"ambient too large: q**L = {total}")
    e = np.asarray(elems, dtype=np.int64)
    n = len(e)
    pair = _combine_encs(q, L, add_tab, e[:, None], e[None, :]).ravel()
    hist_all = np.zeros(total, dtype=np.int64)
    for x in e:
        s = _combine_encs(q, L, add_tab, pair, np.full(len(pair), x, dtype=np.int64))
        hist_all += np.bincount(s, minlength=total)
    double = _combine_encs(q, L, add_tab, e, e)  # 2*e_i
    h2 = np.zeros(total, dtype=np.int64)
    for x in e:
        s = _combine_encs(q, L, add_tab, double, np.full(n, x, dtype=np.int64))
        h2 += np.bincount(s, minlength=total)
    triple = _combine_encs(q, L, add_tab, double, e)  # 3*e_i
    h3 = np.bincount(triple, minlength=total)
    distinct = hist_all - 3 * h2 + 2 * h3
    return hist_all, distinct


def subset4_hist(
    q: int, L: int, add_tab: np.ndarray, elems: np.ndarray, budget: int
) -> np.ndarray:
    """Histogram of sums of 4-element subsets (distinct members, unordered).

    Each 4-set {a<b<c<d} (by list position) splits uniquely into the two
    position-increasing pairs (a,b) | (c,d), so summing over pairs-of-pairs
    with max(first) < min(second) enumerates every subset exactly once.
    """
    total = q**L
    if total > _HIST_LIMIT:
        raise ValueError(f"ambient too large: q**L = {total}")
    e = np.asarray(elems, dtype=np.int64)
    n = len(e)
    n_sets = n * (n - 1) * (n - 2) * (n - 3) // 24
    if n_sets > budget:
        raise ValueError(f"too many 4-subsets ({n_sets} > budget {budget})")
    ii, jj = np.triu_indices(n, k=1)  # ii ascending (row-major)
    psum = _combine_encs(q, L, add_tab, e[ii], e[jj])
    starts = np.searchsorted(ii, np.arange(n + 1))
    chunks: list[np.ndarray] = []
    for p1 in range(len(ii)):
        lo = starts[jj[p1] + 1]
        if lo >= len(ii):
            continue
        chunks.append(
            _combine_encs(
                q, L, add_tab, np.full(len(ii) - lo, psum[p1], dtype=np.int64), psum[lo:]
            )
        )
    if not chunks:
        return np.zeros(total, dtype=np.int64)
    return np.bincount(np.concatenate(chunks), minlength=total)


def system_hist(
    qp: int, add_tab: np.ndarray, mul_tab: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Solution-count histograms of x+y+z = a, x^2+y^2+z^2 = b over F_qp.

    Sweeps all ordered triples (x, y, z); the target (a, b) is encoded as
    a + qp*b.  Returns (total, distinct_coords, with_zero_coord) histograms.
    """
    size = qp * qp
    idx = np.arange(qp, dtype=np.int64)
    sq = mul_tab[idx, idx].astype(np.int64)
    xy_sum = add_tab[idx[:, None], idx[None, :]].astype(np.int64)
    xy_sqsum = add_tab[sq[:, None], sq[None, :]].astype(np.int64)
    x_mat, y_mat = np.broadcast_arrays(idx[:, None], idx[None, :])
    total = np.zeros(size, dtype=np.int64)
    distinct = np.zeros(size, dtype=np.int64)
    zero = np.zeros(size, dtype=np.int64)
    for z in range(qp):
        a = add_tab[xy_sum, z].astype(np.int64)
        b = add_tab[xy_sqsum, sq[z]].astype(np.int64)
        enc = (a + qp * b).ravel()
        counts = np.bincount(enc, minlength=size)
        total += counts
        dmask = (x_mat != y_mat) & (x_mat != z) & (y_mat != z)
        distinct += np.bincount(enc[dmask.ravel()], minlength=size)
        zmask = (x_mat == 0) | (y_mat == 0) | (z == 0)
        zero += np.bincount(enc[zmask.ravel()], minlength=size)
    return total, distinct, zero


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z + _U64(0x9E3779B97F4A7C15)).astype(_U64)
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


def keyed_uniform(seed: int, encs: np.ndarray) -> np.ndarray:
    """Deterministic uniform deviate in [0, 1) keyed by (seed, encoding)."""
    k = _mix64(np.array([seed], dtype=_U64))[0]
    v = _mix64(np.asarray(encs, dtype=_U64) ^ k)
    return (v >> _U64(11)).astype(np.float64) * (2.0**-53)


def sample_window(
    q: int,
    N: int,
    M: int,
    D: int,
    s_encs: np.ndarray,
    s_degs: np.ndarray,
    thresholds: np.ndarray,
    seed: int,
) -> np.ndarray:
    """Independent seeded inclusion over the admissible window.

    Admissible encodings are s + q**N * y with s a listed residue and y of
    degree exactly d - N for N <= d <= D, plus the residues themselves at
    degrees in (M, N).  Each x of degree d joins iff the keyed uniform for
    (seed, x) is below thresholds[d].  Returns sorted included encodings.
    """
    qN = q**N
    out: list[np.ndarray] = []
    singles = []
    for s, ds in zip(s_encs, s_degs):
        if M < ds < N and ds <= D:
            singles.append((int(s), int(ds)))
    if singles:
        encs = np.array([s for s, _ in singles], dtype=np.int64)
        u = keyed_uniform(seed, encs)
        thr = thresholds[np.array([d for _, d in singles])]
        out.append(encs[u < thr])
    for d in range(max(N, M + 1), D + 1):
        k = d - N
        y = np.arange(q**k, q ** (k + 1), dtype=np.int64)  # degree exactly k
        for s in s_encs:
            encs = int(s) + qN * y
            u = keyed_uniform(seed, encs)
            out.append(encs[u < thresholds[d]])
    if not out:
        return np.empty(0, dtype=np.int64)
    return np.sort(np.concatenate(out))


def triple_weight_sum(
    q: int,
    L: int,
    n_enc: int,
    encs: np.ndarray,
    weights: np.ndarray,
    res: np.ndarray,
    w_full: np.ndarray,
    res_mod: int,
    sub_tab: np.ndarray,
    mode: int,
) -> float:
    """Sum over ordered pairs (x1, x2) of w1 * w2 * w_full[x3].

    mode 0: x3 = n - x1 - x2 and the three residues mod t**resN must be
    pairwise distinct (res holds enc % res_mod for the listed elements);
    mode 1: x3 = n - x1 - x2, no residue condition;
    mode 2: x3 = x1 + x2 - n, no residue condition.
    """
    e = np.asarray(encs, dtype=np.int64)
    w = np.asarray(weights, dtype=np.float64)
    n_arr = np.full(len(e), n_enc, dtype=np.int64)
    nmx = _combine_encs(q, L, sub_tab, n_arr, e)  # n - x, per listed element
    parts = np.empty(len(e), dtype=np.float64)
    for i in range(len(e)):
        if mode in (0, 1):
            x3 = _combine_encs(q, L, sub_tab, np.full(len(e), nmx[i], dtype=np.int64), e)
        else:
            # x1 + x2 - n = x1 - (n - x2)
            x3 = _combine_encs(q, L, sub_tab, np.full(len(e), e[i], dtype=np.int64), nmx)
        vals = w[i] * w * w_full[x3]
        if mode == 0:
            r3 = x3 % res_mod
            ok = (res[i] != res) & (res[i] != r3) & (res != r3)
            vals = np.where(ok, vals, 0.0)
        parts[i] = np.sum(vals)
    return float(np.sum(parts))
