"""Relevance of a pair of irreducibles and the corank-one branching verdict.

A pair (pi1, pi2) is relevant when some multisegment pair (m, n) satisfies
D^R_m(shift(pi1, 1/2)) = D^L_n(pi2) with (m, n, shift(pi1, 1/2)) strongly
commutative.  The search runs over minimal witnesses only: left-derivative
targets of pi2 are enumerated with their unique minimal witnesses in
breadth-first order of absolute length, and for each target the minimal
right-hand witness is solved from the cuspidal-support difference.  The
successful minimal pair is unique; a self-check mode keeps searching past the
first hit to verify that.
"""

from __future__ import annotations

from typing import NamedTuple

from . import commutation, invariants
from .calculus import LEFT, RIGHT, derivative_seq, langlands_to_zelevinsky
from .core import (
    IrrRep,
    Multisegment,
    abs_length,
    all_multisegments_on,
    csupp,
    csupp_sub,
    dual,
    format_mult,
    linked,
    rank,
    shift2,
)
from .errors import DualityViolation, NotCommutative, RankMismatch, SymmetryViolation


class RelevanceResult(NamedTuple):
    relevant: bool
    i_star: int | None
    witness_m: Multisegment | None
    witness_n: Multisegment | None
    target: IrrRep | None


def la(m: Multisegment) -> int:
    return sum(abs_length(s) for s in m)


def is_generic(pi: IrrRep) -> bool:
    """Generic iff the dual-involution image is pairwise unlinked."""
    segs = langlands_to_zelevinsky(pi.zmult).segs
    return not any(
        linked(segs[i], segs[j]) for i in range(len(segs)) for j in range(i + 1, len(segs))
    )


def _point_subsets(pts):
    """All sub-multisets of a point multiset, as sorted tuples."""
    from collections import Counter
    from itertools import product

    items = sorted(Counter(pts).items(), key=lambda kv: (kv[0].line.name, kv[0].e2))
    picks = [range(c + 1) for _, c in items]
    for choice in product(*picks):
        sub = []
        for (p, _), k in zip(items, choice):
            sub.extend([p] * k)
        yield tuple(sub)


_ld_memo: dict[Multisegment, tuple] = {}


def _ld_targets(pi2: IrrRep):
    """Left-derivative targets of pi2 with minimal witnesses, by growing length."""
    cached = _ld_memo.get(pi2.zmult)
    if cached is not None:
        return cached
    table: dict[Multisegment, set] = {}
    for sub in _point_subsets(csupp(pi2)):
        for n in all_multisegments_on(sub):
            tau = derivative_seq(pi2, n, LEFT)
            if tau is None:
                continue
            n_min = commutation.descend_witness(pi2, n, LEFT)
            table.setdefault(tau.zmult, set()).add(n_min)
    entries = []
    for tau_z, wits in table.items():
        for n_min in wits:
            entries.append((IrrRep(tau_z), n_min))
    entries.sort(key=lambda e: (la(e[1]), format_mult(e[1]), format_mult(e[0].zmult)))
    result = tuple(entries)
    _ld_memo[pi2.zmult] = result
    return result


_rd_memo: dict[tuple, tuple] = {}


def _rd_minimal_witnesses(shifted: IrrRep, target: IrrRep):
    """Minimal right witnesses taking shifted to target (empty when unreachable)."""
    key = (shifted.zmult, target.zmult)
    cached = _rd_memo.get(key)
    if cached is not None:
        return cached
    need = csupp_sub(csupp(shifted), csupp(target))
    out: set = set()
    if need is not None:
        for m in all_multisegments_on(need):
            if derivative_seq(shifted, m, RIGHT) == target:
                out.add(commutation.descend_witness(shifted, m, RIGHT))
    result = tuple(sorted(out, key=format_mult))
    _rd_memo[key] = result
    return result


_rel_memo: dict[tuple, RelevanceResult] = {}


def relevant(pi1: IrrRep, pi2: IrrRep, find_all: bool = False):
    """Decide relevance; with find_all, return every successful minimal pair."""
    key = (pi1.zmult, pi2.zmult)
    if not find_all and key in _rel_memo:
        return _rel_memo[key]
    shifted = shift2(pi1, 1)
    hits = []
    for tau, n_min in _ld_targets(pi2):
        for m_min in _rd_minimal_witnesses(shifted, tau):
            if commutation.strongly_commutative_multi(m_min, n_min, shifted).verdict:
                res = RelevanceResult(True, la(m_min), m_min, n_min, tau)
                if not find_all:
                    _rel_memo[key] = res
                    return res
                hits.append(res)
    if find_all:
        return hits
    res = RelevanceResult(False, None, None, None, None)
    _rel_memo[key] = res
    return res


def branch(pi: IrrRep, pip: IrrRep):
    """Corank-one branching verdict with the supporting-layer index."""
    if rank(pi) != rank(pip) + 1:
        raise RankMismatch(f"rank {rank(pi)} vs {rank(pip)}: need corank one")
    res = relevant(pi, pip)
    return res.relevant, res.i_star


def smallest_derivative_index(m: Multisegment, n: Multisegment, pi: IrrRep) -> int:
    """Absolute length of m: the first derivative layer supporting the pairing."""
    if not commutation.strongly_commutative_multi(m, n, pi).verdict:
        raise NotCommutative("smallest derivative index needs a strongly commutative triple")
    return la(m)


def symmetry_check(pi1: IrrRep, pi2: IrrRep) -> bool:
    a = relevant(pi1, pi2).relevant
    b = relevant(pi2, pi1).relevant
    if a != b:
        raise SymmetryViolation(f"relevance asymmetry on ({pi1}, {pi2})")
    return a


def dual_check(pi1: IrrRep, pi2: IrrRep) -> bool:
    a = relevant(pi1, pi2).relevant
    b = relevant(dual(pi1), dual(pi2)).relevant
    if a != b:
        raise DualityViolation(f"relevance not dual-invariant on ({pi1}, {pi2})")
    return a
