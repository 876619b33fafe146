"""Counting invariants of irreducibles: epsilon, eta, hd, mx and the removal process.

The highest-derivative multisegment hd(pi) is computed in closed form: take
the (b-end, a-end) record of every segment of the parameter and decompose the
records into chains with consecutive b-ends and strictly increasing a-ends,
always starting from the maximal b-end (maximal a-end on ties) and continuing
to the record with the maximal a-end strictly below the current one.  Each
chain contributes the segment spanned by its b-ends.  The result is the
unique minimal multisegment realizing the highest derivative; the defining
property is asserted against the derivative engine in the test suite.

Epsilon values are counted on hd, and every left-hand invariant goes through
the dual transform.
"""

from __future__ import annotations

from typing import NamedTuple

from .core import (
    IrrRep,
    Multisegment,
    Point,
    Segment,
    dual,
    order,
    rel_length,
    trunc_right,
)
from .errors import InapplicableRemoval

RIGHT = "right"
LEFT = "left"


class EtaVector(NamedTuple):
    """Componentwise derivative-depth vector over the b-anchored subsegments of a frame."""

    frame: Segment
    comps: tuple[int, ...]


def abs_value(v: EtaVector) -> int:
    return sum(v.comps)


class Chain(NamedTuple):
    """One chain of the highest-derivative data, with its source segments.

    The chain spans the b-end points from ``bottom`` to ``top``; ``sources``
    maps each spanned point to the parameter segment whose b-end sits there.
    """

    line: object
    bottom: int
    top: int
    sources: tuple


_chains_memo: dict[Multisegment, tuple] = {}


def hd_decomposition(m: Multisegment) -> tuple[Chain, ...]:
    """Chain-decompose the b-end records of m through nested bracket matchings.

    Walking the b-end levels downward, the chains currently bottoming one step
    above act as openers and the segments ending at the level as closers; a
    closer extends the nearest open chain with a strictly larger a-end (among
    equal a-ends the chain with the higher top), and an unmatched closer
    starts a new chain.  The chain spans form the unique minimal multisegment
    realizing the highest derivative.
    """
    cached = _chains_memo.get(m)
    if cached is not None:
        return cached
    done: list[Chain] = []
    classes: dict[tuple, dict[int, list[Segment]]] = {}
    for s in m:
        classes.setdefault((s.line, s.lo % 2), {}).setdefault(s.hi, []).append(s)
    for (ln, _), by_level in classes.items():
        active: list[dict] = []
        for e2 in sorted(by_level, reverse=True):
            openers = [ch for ch in active if ch["bottom_level"] == e2 + 2]
            events = []
            for ch in openers:
                events.append((-ch["bottom_lo"], 1, ch["top"], ch))
            for s in by_level[e2]:
                events.append((-s.lo, 0, 0, s))
            events.sort(key=lambda ev: (ev[0], ev[1], ev[2]))
            stack = []
            for _, is_open, _, obj in events:
                if is_open:
                    stack.append(obj)
                elif stack:
                    ch = stack.pop()
                    ch["bottom_lo"] = obj.lo
                    ch["bottom_level"] = e2
                    ch["sources"].append((e2, obj))
                else:
                    active.append(
                        {
                            "top": e2,
                            "bottom_level": e2,
                            "bottom_lo": obj.lo,
                            "sources": [(e2, obj)],
                        }
                    )
        for ch in active:
            done.append(
                Chain(ln, ch["bottom_level"], ch["top"], tuple(ch["sources"]))
            )
    result = tuple(done)
    _chains_memo[m] = result
    return result


_hd_memo: dict[Multisegment, Multisegment] = {}


def hd(pi: IrrRep, side: str = RIGHT) -> Multisegment:
    """The minimal multisegment realizing the highest derivative of pi.

    Computed by its definition: start from the one-point candidates (the
    b-ends of the parameter) and greedily apply intersection-union moves while
    the realized derivative stays equal to the highest derivative; uniqueness
    of minimal witnesses makes the descent well-defined.
    """
    if side == LEFT:
        return dual(hd(dual(pi), RIGHT))
    cached = _hd_memo.get(pi.zmult)
    if cached is not None:
        return cached
    from . import calculus
    from .core import moves

    target = IrrRep(trunc_right(pi.zmult))
    m = Multisegment(Segment(s.line, s.hi, s.hi) for s in pi.zmult)
    if calculus.derivative_seq(pi, m, RIGHT) != target:
        raise AssertionError(f"one-point candidates miss the highest derivative of {pi}")
    improved = True
    while improved:
        improved = False
        for m1 in moves(m):
            if calculus.derivative_seq(pi, m1, RIGHT) == target:
                m = m1
                improved = True
                break
    _hd_memo[pi.zmult] = m
    return m


# ---------------------------------------------------------------------------
# epsilon and eta


def eps_on_mult(d: Segment, h: Multisegment) -> int:
    """Count segments of h with a-end exactly a(d) and b-end at least b(d)."""
    return sum(1 for s in h if s.line == d.line and s.lo == d.lo and s.hi >= d.hi)


def eps(pi: IrrRep, d: Segment, side: str = RIGHT) -> int:
    """Largest power of the segment derivative that does not vanish on pi."""
    if side == LEFT:
        return eps(dual(pi), dual(d), RIGHT)
    return eps_on_mult(d, hd(pi, RIGHT))


def eta(pi: IrrRep, frame: Segment, side: str = RIGHT) -> EtaVector:
    """Epsilon over the b-anchored (resp. a-anchored) subsegments of the frame."""
    if side == LEFT:
        mirror = eta(dual(pi), dual(frame), RIGHT)
        return EtaVector(frame, mirror.comps)
    h = hd(pi, RIGHT)
    comps = tuple(
        eps_on_mult(Segment(frame.line, lo, frame.hi), h)
        for lo in range(frame.lo, frame.hi + 1, 2)
    )
    return EtaVector(frame, comps)


def abs_eta(pi: IrrRep, frame: Segment, side: str = RIGHT) -> int:
    return abs_value(eta(pi, frame, side))


def mx(pi: IrrRep, d: Segment, side: str = RIGHT) -> Multisegment:
    """The saturated multisegment with each b-anchored subsegment at its epsilon multiplicity."""
    if side == LEFT:
        return dual(mx(dual(pi), dual(d), RIGHT))
    v = eta(pi, d, RIGHT)
    out = []
    for k, mult_k in enumerate(v.comps):
        out.extend([Segment(d.line, d.lo + 2 * k, d.hi)] * mult_k)
    return Multisegment(out)


def mxpt(pi: IrrRep, p: Point, side: str = RIGHT) -> Multisegment:
    """Sum of epsilon multiples of every segment with b-end at the given point."""
    if side == LEFT:
        return dual(mxpt(dual(pi), dual(p), RIGHT))
    h = hd(pi, RIGHT)
    out = []
    for lo in sorted({s.lo for s in h if s.line == p.line and (s.lo - p.e2) % 2 == 0}):
        if lo > p.e2:
            continue
        d = Segment(p.line, lo, p.e2)
        out.extend([d] * eps_on_mult(d, h))
    return Multisegment(out)


# ---------------------------------------------------------------------------
# the removal process


def removal(d: Segment, h: Multisegment, side: str = RIGHT):
    """Rewrite h by the removal steps for d; also return the removal sequence.

    Step one picks the shortest segment with a-end a(d) reaching b(d); later
    steps pick the shortest segment whose a-end is strictly larger but still
    inside d and whose b-end still reaches b(d) while strictly dropping.  Each
    picked segment donates its run up to its successor's a-end and keeps the
    rest; the last one donates through b(d).  The donations tile d exactly,
    which is what the derivative law requires of the rewrite.
    """
    if side == LEFT:
        out, seq = removal(dual(d), dual(h), RIGHT)
        return dual(out), tuple(dual(s) for s in seq)
    cands = [s for s in h if s.line == d.line and s.lo == d.lo and s.hi >= d.hi]
    if not cands:
        raise InapplicableRemoval(f"no segment of {h} starts at a({d}) and reaches b({d})")
    cur = min(cands, key=lambda s: (s.hi, s.lo))
    seq = [cur]
    while True:
        nxt = [
            s
            for s in h
            if s.line == cur.line
            and (s.lo - cur.lo) % 2 == 0
            and cur.lo < s.lo <= d.hi
            and d.hi <= s.hi < cur.hi
        ]
        if not nxt:
            break
        cur = min(nxt, key=lambda s: (s.lo, s.hi))
        seq.append(cur)
    pool = list(h.segs)
    for s in seq:
        pool.remove(s)
    for i, s in enumerate(seq):
        lo = seq[i + 1].lo if i + 1 < len(seq) else d.hi + 2
        if lo <= s.hi:
            pool.append(Segment(s.line, lo, s.hi))
    return Multisegment(pool), tuple(seq)


def removal_multi(m: Multisegment, h: Multisegment, side: str = RIGHT) -> Multisegment:
    """Fold the removal process over an ascending order of m."""
    if side == LEFT:
        return dual(removal_multi(dual(m), dual(h), RIGHT))
    for d in order(m, "ascending"):
        h, _ = removal(d, h, RIGHT)
    return h
