"""Simple quotients of higher derivatives as derivative-sequence images.

Every simple quotient of the i-th derivative arises as D_m(pi) for a minimal
multisegment m of absolute length i; the table enumerates reachable targets by
single-segment peeling, minimizes each witness, and deduplicates by target.
"""

from __future__ import annotations

from collections import deque

from . import commutation
from .core import (
    IrrRep,
    Multisegment,
    Point,
    Segment,
    abs_length,
    all_multisegments_on,
    csupp,
    csupp_sub,
    rank,
)
from .calculus import RIGHT, derivative, derivative_seq
from .errors import OutOfRange


def _candidate_segments(m: Multisegment):
    """Segments whose points all lie in the support of m (others cannot peel)."""
    pts = set(csupp(m))
    by_class: dict[tuple, set[int]] = {}
    for p in pts:
        by_class.setdefault((p.line, p.e2 % 2), set()).add(p.e2)
    out = []
    for (ln, _), exps in sorted(by_class.items(), key=lambda kv: (kv[0][0].name, kv[0][1])):
        for lo in sorted(exps):
            hi = lo
            while hi in exps:
                out.append(Segment(ln, lo, hi))
                hi += 2
    return out


def _witness(pi: IrrRep, found: Multisegment, target: IrrRep) -> Multisegment:
    """A minimal witness for target; falls back to a support search."""
    if derivative_seq(pi, found, RIGHT) == target:
        return commutation.descend_witness(pi, found, RIGHT)
    need = csupp_sub(csupp(pi), csupp(target))
    for m in all_multisegments_on(need):
        if derivative_seq(pi, m, RIGHT) == target:
            return commutation.descend_witness(pi, m, RIGHT)
    raise AssertionError(f"reachable target {target} has no ordered witness from {pi}")


_table_memo: dict[Multisegment, dict] = {}


def reachable_targets(pi: IrrRep) -> dict[IrrRep, Multisegment]:
    """Every derivative-sequence image of pi with a minimal witness each."""
    cached = _table_memo.get(pi.zmult)
    if cached is not None:
        return cached
    table: dict[IrrRep, Multisegment] = {pi: Multisegment()}
    queue = deque([pi])
    while queue:
        cur = queue.popleft()
        base = table[cur]
        for d in _candidate_segments(cur.zmult):
            nxt = derivative(cur, d, RIGHT)
            if nxt is None or nxt in table:
                continue
            table[nxt] = _witness(pi, Multisegment(base.segs + (d,)), nxt)
            queue.append(nxt)
    _table_memo[pi.zmult] = table
    return table


def simple_quotients(pi: IrrRep, i: int) -> frozenset:
    """All (target, minimal witness) pairs at derivative depth i."""
    n = rank(pi)
    if not 0 <= i <= n:
        raise OutOfRange(f"layer {i} outside 0..{n}")
    return frozenset(
        (tau, w) for tau, w in reachable_targets(pi).items() if n - rank(tau) == i
    )


def pieri_table(pi: IrrRep) -> dict[int, frozenset]:
    """Rows of simple quotients for every achievable derivative depth.

    Each reported target is asserted to lie in the per-segment truncation
    pattern set of the parameter; a violation is an engine bug.
    """
    n = rank(pi)
    rows: dict[int, frozenset] = {}
    for i in range(n + 1):
        row = simple_quotients(pi, i)
        if row:
            for tau, _ in row:
                if not in_truncation_set(tau.zmult, pi.zmult, i):
                    raise AssertionError(f"target {tau} escapes the truncation patterns of {pi}")
            rows[i] = row
    return rows


def in_truncation_set(target: Multisegment, base: Multisegment, i: int) -> bool:
    """Whether target arises from base by right-truncating segments of total size i."""

    def match(rem_base, rem_target, budget):
        if not rem_base:
            return not rem_target and budget == 0
        s = rem_base[0]
        rest = rem_base[1:]
        # keep s
        for k, t in enumerate(rem_target):
            if t == s:
                if match(rest, rem_target[:k] + rem_target[k + 1 :], budget):
                    return True
                break
        # truncate s
        size = s.line.size
        if budget >= size:
            if s.hi - 2 >= s.lo:
                cut = Segment(s.line, s.lo, s.hi - 2)
                for k, t in enumerate(rem_target):
                    if t == cut:
                        if match(rest, rem_target[:k] + rem_target[k + 1 :], budget - size):
                            return True
                        break
            else:
                if match(rest, rem_target, budget - size):
                    return True
        return False

    return match(tuple(base.segs), tuple(target.segs), i)
