"""Destructive repair of a polynomial set into a B2[2] or Sidon set.

Both procedures mark every element that participates in a forbidden
pair-sum collision (three essentially different pairs with a common sum for
the B2[2] repair, two for the Sidon repair) and then remove all marked
elements in one simultaneous sweep.  Marking consults only the original
set, so the result is order-independent; any collision surviving the sweep
would have marked its own participants, hence the survivors provably
satisfy the target property, which is re-verified before returning.

"Essentially different" means distinct as unordered pairs: a value needs at
least three (resp. two) distinct unordered pair representations before any
of the involved elements is marked.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .combinat import MemberSet, _as_ms, pair_sum_index, verify_b2g
from .polyring import Poly
from .randmodel import OmegaSample


@dataclass
class LiftReport:
    removed: frozenset[Poly]
    survivors: frozenset[Poly]
    witnesses: dict[Poly, tuple[Poly, ...]] = field(default_factory=dict)
    mode: str = ""

    def survivor_polys(self) -> list[Poly]:
        return sorted(self.survivors, key=lambda f: f.sort_key())


def _lift(A, min_pairs: int, mode: str) -> LiftReport:
    ms = A if isinstance(A, MemberSet) else _as_ms(A)
    index = pair_sum_index(ms)
    marked: set[int] = set()
    witnesses: dict[Poly, tuple[Poly, ...]] = {}
    for v, pairs in sorted(index.items()):
        if len(pairs) < min_pairs:
            continue
        for i, j in pairs:
            for pos in (i, j):
                if pos in marked:
                    continue
                marked.add(pos)
                own = (i, j)
                others = [p for p in pairs if p != own][: min_pairs - 1]
                chain = [ms.members[pos], ms.members[j if pos == i else i]]
                for a, b in others:
                    chain.extend([ms.members[a], ms.members[b]])
                witnesses[ms.members[pos]] = tuple(chain)
    removed = frozenset(ms.members[i] for i in marked)
    survivors = frozenset(ms.members) - removed
    if survivors:
        max_reps = verify_b2g(ms.subset(survivors), min_pairs - 1).max_reps
        if max_reps > min_pairs - 1:
            raise AssertionError(f"survivors fail the {mode} property (max {max_reps})")
    return LiftReport(removed=removed, survivors=survivors, witnesses=witnesses, mode=mode)


def lift_b22(A) -> LiftReport:
    """Remove every element meeting a three-way pair-sum collision.

    An element a1 is marked iff some a2 in the set puts a1 + a2 at a value
    with at least 3 distinct unordered pair representations.  Survivors are
    verified B2[2].
    """
    return _lift(A, 3, "b22")


def lift_sidon(A) -> LiftReport:
    """Remove every element meeting a two-way pair-sum collision; survivors
    are verified Sidon."""
    return _lift(A, 2, "sidon")


@dataclass
class InequalityRow:
    n_enc: int
    lhs: int
    rhs_pos: int
    rhs_neg: int

    @property
    def ok(self) -> bool:
        return self.lhs >= self.rhs_pos - self.rhs_neg


def _check_rows(
    lift_counts: dict[int, int],
    orig_counts: dict[int, int],
    chain_counts: dict[int, int],
    keys: set[int],
) -> dict:
    violations = []
    worst_margin = None
    for ne in keys:
        lhs = lift_counts.get(ne, 0)
        rhs = orig_counts.get(ne, 0) - chain_counts.get(ne, 0)
        margin = lhs - rhs
        if worst_margin is None or margin < worst_margin:
            worst_margin = margin
        if margin < 0:
            violations.append(
                InequalityRow(ne, lhs, orig_counts.get(ne, 0), chain_counts.get(ne, 0))
            )
    return {
        "checked_targets": len(keys),
        "worst_margin": worst_margin,
        "violations": violations,
        "ok": not violations,
    }


def verify_lift_inequalities(omega: OmegaSample, targets: list[Poly] | None = None) -> dict:
    """Counted-representation lower bounds across both repairs.

    For the B2[2] repair: the surviving good-triple count of each target is
    at least the original count minus the chain8 count.  When epsilon is set
    the analogous bound with sum4-low and chain7 counts is checked against
    the Sidon repair.  Only targets with a nonzero original or chain count
    matter (all other rows read 0 >= 0 - 0); explicit targets extend the
    checked set.
    """
    from .combinat import chain7_counts, chain8_counts, sum3_counts, sum4_low_counts

    ms = MemberSet.from_sample(omega)
    extra = {t.encode() for t in targets} if targets else set()
    out: dict = {}

    b22 = lift_b22(ms)
    q_orig = sum3_counts(ms)
    q_lift = sum3_counts(ms.subset(b22.survivors)) if b22.survivors else {}
    t_orig = chain8_counts(ms)
    out["b22"] = _check_rows(q_lift, q_orig, t_orig, set(q_orig) | set(t_orig) | extra)

    if omega.params.epsilon is not None:
        sid = lift_sidon(ms)
        r_orig = sum4_low_counts(ms)
        r_lift = sum4_low_counts(ms.subset(sid.survivors)) if sid.survivors else {}
        b_orig = chain7_counts(ms)
        out["sidon"] = _check_rows(
            r_lift, r_orig, b_orig, set(r_orig) | set(b_orig) | extra
        )
    out["all_ok"] = all(v["ok"] for k, v in out.items() if isinstance(v, dict))
    return out
