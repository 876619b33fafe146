"""Brute-force validators: independent enumeration checks for the engine.

Everything here recomputes results the slow way (full enumeration over a
forced cuspidal support, literal statements of the update laws) and is used
to pin the fast paths.  The exhaustive corpora live on a single size-one line,
plus one disjoint line where a cross-line branch is exercised; cross-line
interactions are trivial by the coset comparability rule.
"""

from __future__ import annotations

import random
from collections import Counter

from . import calculus, commutation, invariants, pieri, relevance
from .calculus import LEFT, RIGHT
from .core import (
    DEFAULT_LINE,
    IrrRep,
    Multisegment,
    Point,
    Segment,
    all_multisegments_on,
    csupp,
    csupp_sub,
    format_mult,
    format_rep,
    format_seg,
    line,
    points,
    rank,
    seg,
)
from .errors import InapplicableRemoval, LimitExceeded, NonUniqueDerivative

DEFAULT_MAX_POINTS = 8


def enumerate_multisegments(pts, max_points: int = DEFAULT_MAX_POINTS):
    """All multisegments with exactly the given point multiset."""
    pts = tuple(pts)
    if len(pts) > max_points:
        raise LimitExceeded(f"{len(pts)} points exceeds the limit {max_points}")
    return all_multisegments_on(pts)


def derivative_by_inversion(pi: IrrRep, d: Segment, side: str = RIGHT):
    """Reference derivative: enumerate all candidates and invert the integral."""
    need = csupp_sub(csupp(pi), points(d))
    if need is None:
        return None
    hits = [
        c
        for c in all_multisegments_on(need)
        if calculus.integral(IrrRep(c), d, side) == pi
    ]
    if len(hits) > 1:
        raise NonUniqueDerivative(f"two inverses for {d} under {pi}")
    return IrrRep(hits[0]) if hits else None


# ---------------------------------------------------------------------------
# corpora


def exponent_multisets(max_points: int, span: int):
    """Multisets of integer exponents in a fixed window, smallest first."""
    out = []

    def walk(start, left, acc):
        if acc:
            out.append(tuple(acc))
        if not left:
            return
        for e in range(start, span):
            acc.append(e)
            walk(e, left - 1, acc)
            acc.pop()

    walk(0, max_points, [])
    return out


def one_line_corpus(max_points: int, span: int, ln=DEFAULT_LINE):
    """Every irreducible with at most max_points support points in the window."""
    yield IrrRep(Multisegment())
    for exps in exponent_multisets(max_points, span):
        pts = tuple(Point(ln, 2 * e) for e in exps)
        for m in all_multisegments_on(pts):
            yield IrrRep(m)


def segments_in_window(span: int, ln=DEFAULT_LINE):
    return [seg(a, b, ln) for a in range(span) for b in range(a, span)]


def random_rep(rng: random.Random, span: int, max_segs: int, ln=DEFAULT_LINE) -> IrrRep:
    segs = []
    for _ in range(rng.randint(0, max_segs)):
        a = rng.randrange(span)
        b = rng.randrange(a, span)
        segs.append(seg(a, b, ln))
    return IrrRep(Multisegment(segs))


# ---------------------------------------------------------------------------
# the consistency suite


def _report(name, failures, instances):
    return {
        "check": name,
        "pass": not failures,
        "instances": instances,
        "counterexamples": failures[:5],
    }


def check_removal_law(corpus, span):
    """Epsilon of the derivative equals epsilon of the removal rewrite."""
    failures, count = [], 0
    window = None
    for pi in corpus:
        if window is None:
            window = segments_in_window(span)
        h = invariants.hd(pi, RIGHT)
        for d in window:
            if calculus.derivative(pi, d, RIGHT) is None:
                continue
            try:
                rewritten, _ = invariants.removal(d, h, RIGHT)
            except InapplicableRemoval:
                failures.append(f"removal inapplicable but derivative nonzero: {format_rep(pi)} {format_seg(d)}")
                continue
            dpi = calculus.derivative(pi, d, RIGHT)
            for dp in window:
                from .core import seg_precedes

                if seg_precedes(dp, d):
                    continue
                count += 1
                if invariants.eps(dpi, dp, RIGHT) != invariants.eps_on_mult(dp, rewritten):
                    failures.append(
                        f"{format_rep(pi)} d={format_seg(d)} dp={format_seg(dp)}"
                    )
    return _report("removal-law", failures, count)


def check_inversion(corpus, span):
    """integral(derivative(pi)) = pi and derivative(integral(pi)) = pi."""
    failures, count = [], 0
    window = None
    for pi in corpus:
        if window is None:
            window = segments_in_window(span)
        for d in window:
            count += 1
            dpi = calculus.derivative(pi, d, RIGHT)
            if dpi is not None and calculus.integral(dpi, d, RIGHT) != pi:
                failures.append(f"I(D) != id: {format_rep(pi)} {format_seg(d)}")
            ipi = calculus.integral(pi, d, RIGHT)
            if calculus.derivative(ipi, d, RIGHT) != pi:
                failures.append(f"D(I) != id: {format_rep(pi)} {format_seg(d)}")
            lpi = calculus.integral(pi, d, LEFT)
            if calculus.derivative(lpi, d, LEFT) != pi:
                failures.append(f"left D(I) != id: {format_rep(pi)} {format_seg(d)}")
    return _report("inversion", failures, count)


def check_eta_updates(corpus, span):
    """The four eta update rules for a derivative against a frame."""
    failures, count = [], 0
    window = None
    for pi in corpus:
        if window is None:
            window = segments_in_window(span)
        for dp in window:  # derivative segment [c, d]
            dpi = calculus.derivative(pi, dp, RIGHT)
            if dpi is None:
                continue
            for frame in window:  # frame [a, b]
                a, b, c, d = frame.lo, frame.hi, dp.lo, dp.hi
                count += 1
                if c < a and d == b:
                    ok = (
                        invariants.eta(pi, frame, RIGHT).comps
                        == invariants.eta(dpi, frame, RIGHT).comps
                    )
                elif a <= c <= b and d == b:
                    ok = invariants.abs_eta(dpi, frame, RIGHT) == invariants.abs_eta(pi, frame, RIGHT) - 1
                elif a <= c <= d < b:
                    ok = invariants.abs_eta(dpi, frame, RIGHT) == invariants.abs_eta(pi, frame, RIGHT)
                elif c < a and d < b:
                    before = invariants.eta(pi, frame, RIGHT).comps
                    after = invariants.eta(dpi, frame, RIGHT).comps
                    ok = all(x <= y for x, y in zip(before, after))
                else:
                    continue
                if not ok:
                    failures.append(
                        f"{format_rep(pi)} frame={format_seg(frame)} by={format_seg(dp)}"
                    )
    return _report("eta-updates", failures, count)


def check_unlinked_commutation(corpus, span):
    """Unlinked derivatives and integrals commute (null-aware)."""
    from .core import linked

    failures, count = [], 0
    window = None
    for pi in corpus:
        if window is None:
            window = segments_in_window(span)
        for i, d1 in enumerate(window):
            for d2 in window[i + 1 :]:
                if linked(d1, d2):
                    continue
                count += 1
                x = calculus.derivative(pi, d1, RIGHT)
                x = x and calculus.derivative(x, d2, RIGHT)
                y = calculus.derivative(pi, d2, RIGHT)
                y = y and calculus.derivative(y, d1, RIGHT)
                if x != y:
                    failures.append(f"D: {format_rep(pi)} {format_seg(d1)} {format_seg(d2)}")
                if calculus.integral(
                    calculus.integral(pi, d1, LEFT), d2, LEFT
                ) != calculus.integral(calculus.integral(pi, d2, LEFT), d1, LEFT):
                    failures.append(f"I: {format_rep(pi)} {format_seg(d1)} {format_seg(d2)}")
    return _report("unlinked-commutation", failures, count)


def check_strong_implies_plain(corpus, span):
    """Strong commutativity forces the plain commutation of the two operators."""
    failures, count = [], 0
    window = None
    for pi in corpus:
        if window is None:
            window = segments_in_window(span)
        for d in window:
            for dp in window:
                if not commutation.strongly_commutative(d, dp, pi):
                    continue
                count += 1
                left_then = calculus.integral(calculus.derivative(pi, d, RIGHT), dp, LEFT)
                right_then = calculus.derivative(calculus.integral(pi, dp, LEFT), d, RIGHT)
                if left_then != right_then:
                    failures.append(f"{format_rep(pi)} {format_seg(d)} {format_seg(dp)}")
    return _report("strong-implies-plain", failures, count)


def check_symmetry(pairs):
    """relevant(a, b) = relevant(b, a) = relevant(dual a, dual b)."""
    failures, count = [], 0
    for pi1, pi2 in pairs:
        count += 1
        a = relevance.relevant(pi1, pi2).relevant
        if a != relevance.relevant(pi2, pi1).relevant:
            failures.append(f"symmetry: {format_rep(pi1)} {format_rep(pi2)}")
        from .core import dual

        if a != relevance.relevant(dual(pi1), dual(pi2)).relevant:
            failures.append(f"duality: {format_rep(pi1)} {format_rep(pi2)}")
    return _report("relevance-symmetry", failures, count)


def check_witness_uniqueness(pairs):
    """Exactly one successful minimal witness pair per relevant pair."""
    failures, count = [], 0
    for pi1, pi2 in pairs:
        hits = relevance.relevant(pi1, pi2, find_all=True)
        if not hits:
            continue
        count += 1
        keys = {(h.witness_m, h.witness_n) for h in hits}
        if len(keys) != 1:
            failures.append(f"{format_rep(pi1)} {format_rep(pi2)}: {len(keys)} witnesses")
    return _report("witness-uniqueness", failures, count)


def check_pieri_filter(corpus):
    """Every table row sits inside the truncation-pattern bound."""
    failures, count = [], 0
    for pi in corpus:
        try:
            rows = pieri.pieri_table(pi)
        except AssertionError as exc:
            failures.append(str(exc))
            continue
        count += 1
        if rows.get(0) != frozenset({(pi, Multisegment())}):
            failures.append(f"row 0 wrong for {format_rep(pi)}")
    return _report("pieri-filter", failures, count)


def consistency_suite(seed: int = 1, max_points: int = 6, span: int = 4) -> dict:
    """Run every check over the exhaustive corpus plus seeded random pairs."""
    rng = random.Random(seed)
    corpus = list(one_line_corpus(max_points, span))
    small = [pi for pi in corpus if rank(pi) <= max_points - 1]
    pairs = []
    for _ in range(40):
        pairs.append((random_rep(rng, 3, 2), random_rep(rng, 3, 2)))
    pairs.extend((a, b) for a in small[:40] for b in small[:10])
    checks = [
        check_removal_law(corpus, span),
        check_inversion(corpus, span),
        check_eta_updates(corpus, span),
        check_unlinked_commutation(corpus, span),
        check_strong_implies_plain(corpus, span),
        check_symmetry(pairs[:200]),
        check_witness_uniqueness(pairs[:200]),
        check_pieri_filter(corpus[: min(len(corpus), 400)]),
    ]
    return {
        "seed": seed,
        "max_points": max_points,
        "span": span,
        "pass": all(c["pass"] for c in checks),
        "checks": checks,
    }
