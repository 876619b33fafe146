"""Derivatives and integrals of irreducibles encoded as Zelevinsky multisegments.

At a single cuspidal point both operations are the classical bracket rule:
segments ending at the point are openers, segments ending one step below are
closers, scanned by decreasing a-end (closers first on ties); a closer blocks
the nearest unmatched opener with a strictly larger a-end.  The peel
truncates the free opener with the largest a-end, the extension grows the
free closer with the smallest one, or creates a new point.

A segment block is peeled as one unit.  Candidate values are the tiling
peels: donor segments whose top runs tile the block consecutively.  Because
the derivative must be a bijection from the parameters admitting the peel
onto all parameters on the reduced support (peeling inverts the integral and
every integral admits the peel), the engine resolves each support class
globally: assignments forced by a unique candidate or a unique claimant are
applied first, the update laws for the eta data rank the rest, and any
remaining tie falls back to a canonical order.  Parameters left unmatched
once every target is claimed have a vanishing derivative.  The integral is
the inverse map; left-hand operations go through the dual transform.
"""

from __future__ import annotations

from . import invariants
from .core import (
    IrrRep,
    Line,
    Multisegment,
    Segment,
    all_multisegments_on,
    csupp,
    csupp_sub,
    dual,
    ext_left,
    ext_right,
    linked,
    mult_add,
    order,
    points,
    rel_length,
    seg_precedes,
    shift2,
    trunc_left,
    trunc_right,
)
from .errors import NonUniqueDerivative

RIGHT = "right"
LEFT = "left"


# ---------------------------------------------------------------------------
# the point kernel (bracket matching)


def _free_ends(m: Multisegment, ln: Line, e2: int):
    """Unmatched openers/closers at the point with doubled exponent e2.

    Scan by decreasing a-end, closers before openers on ties; a closer blocks
    the most recent unmatched opener.  Returns the unmatched a-ends, openers
    in decreasing order.
    """
    events = []
    for s in m:
        if s.line != ln or (s.hi - e2) % 2 != 0:
            continue
        if s.hi == e2:
            events.append((-s.lo, 1, s.lo))
        elif s.hi == e2 - 2:
            events.append((-s.lo, 0, s.lo))
    events.sort()
    opened: list[int] = []
    free_close: list[int] = []
    for _, is_open, lo in events:
        if is_open:
            opened.append(lo)
        elif opened:
            opened.pop()
        else:
            free_close.append(lo)
    return opened, free_close


def _replace_one(m: Multisegment, old: Segment, new: Segment | None) -> Multisegment:
    pool = list(m.segs)
    pool.remove(old)
    if new is not None:
        pool.append(new)
    return Multisegment(pool)


def peel_point(m: Multisegment, ln: Line, e2: int) -> Multisegment | None:
    """Point peel: truncate the free opener with the largest a-end."""
    free_open, _ = _free_ends(m, ln, e2)
    if not free_open:
        return None
    lo = free_open[0]
    new = Segment(ln, lo, e2 - 2) if e2 - 2 >= lo else None
    return _replace_one(m, Segment(ln, lo, e2), new)


def extend_point(m: Multisegment, ln: Line, e2: int) -> Multisegment:
    """Point extension: grow the free closer with the smallest a-end, else a new point."""
    _, free_close = _free_ends(m, ln, e2)
    if free_close:
        lo = free_close[-1]
        return _replace_one(m, Segment(ln, lo, e2 - 2), Segment(ln, lo, e2))
    return mult_add(m, Segment(ln, e2, e2))


# ---------------------------------------------------------------------------
# candidate generation and the removal-law filter


def _tiling_peels(m: Multisegment, d: Segment) -> set[Multisegment]:
    """All block peels of d: donor segments whose top runs tile d consecutively."""
    out: set[Multisegment] = set()

    def walk(cur: Multisegment, c2: int):
        if c2 > d.hi:
            out.add(cur)
            return
        seen = set()
        for s in cur:
            if (
                s.line != d.line
                or (s.lo - c2) % 2 != 0
                or not s.lo <= c2 <= s.hi
                or s.hi > d.hi
            ):
                continue
            if (s.lo, s.hi) in seen:
                continue
            seen.add((s.lo, s.hi))
            rem = Segment(s.line, s.lo, c2 - 2) if c2 - 2 >= s.lo else None
            walk(_replace_one(cur, s, rem), s.hi + 2)

    walk(m, d.lo)
    return out


def _exp_window(h: Multisegment, extra: Multisegment, ln: Line, parity: int):
    exps: set[int] = set()
    for m in (h, extra):
        for s in m:
            if s.line == ln and s.lo % 2 == parity:
                exps.update(range(s.lo, s.hi + 1, 2))
    return sorted(exps)


def _hd0(m: Multisegment) -> Multisegment:
    """Bootstrap estimate of the highest-derivative data (chain spans)."""
    return Multisegment(
        Segment(ch.line, ch.bottom, ch.top)
        for ch in invariants.hd_decomposition(m)
    )


def _passes_eta_laws(cand: Multisegment, d: Segment, h_pi: Multisegment, window) -> bool:
    """The derivative update laws for the eta data, on bootstrap estimates.

    At frames ending at b(d): the component at a(d) drops by one and every
    other component is unchanged.  At frames ending above b(d): components
    strictly below a(d) are unchanged, the total over components from a(d) up
    is unchanged, and components strictly above a(d) never drop.
    """
    h_cand = _hd0(cand)
    ln = d.line
    for z in window:
        if z > d.hi:
            break
        want = invariants.eps_on_mult(Segment(ln, z, d.hi), h_pi) - (1 if z == d.lo else 0)
        if invariants.eps_on_mult(Segment(ln, z, d.hi), h_cand) != want:
            return False
    for y in window:
        if y <= d.hi:
            continue
        total_pi = total_c = 0
        for z in window:
            if z > y:
                break
            f = Segment(ln, z, y)
            e_pi = invariants.eps_on_mult(f, h_pi)
            e_c = invariants.eps_on_mult(f, h_cand)
            if z < d.lo:
                if e_pi != e_c:
                    return False
            else:
                total_pi += e_pi
                total_c += e_c
                if z > d.lo and e_c < e_pi:
                    return False
        if total_pi != total_c:
            return False
    return True


# ---------------------------------------------------------------------------
# class-wise resolution of block peels

_class_memo: dict[tuple, dict] = {}


def _solve_class(pts: tuple, d: Segment) -> dict[Multisegment, Multisegment]:
    """The derivative assignment for every parameter on a fixed point multiset.

    Matches parameters against targets one support class at a time: every
    target on the reduced support is claimed exactly once, forced choices
    first, then candidates ranked by the eta update laws, then canonically.
    """
    pts = tuple(sorted(pts, key=lambda p: (p.line.name, p.line.size, p.line.dual_name, p.e2)))
    key = (pts, d)
    cached = _class_memo.get(key)
    if cached is not None:
        return cached
    reduced = csupp_sub(pts, points(d))
    assignment: dict[Multisegment, Multisegment] = {}
    if reduced is None:
        _class_memo[key] = assignment
        return assignment
    cands: dict[Multisegment, list] = {}
    good: dict[tuple, bool] = {}
    for tau in all_multisegments_on(pts):
        opts = _tiling_peels(tau, d)
        if not opts:
            continue
        h_tau = _hd0(tau)
        window = _exp_window(h_tau, tau, d.line, d.lo % 2)
        ranked = sorted(
            opts, key=lambda s: (not _passes_eta_laws(s, d, h_tau, window), s.segs)
        )
        for s in opts:
            good[(tau, s)] = _passes_eta_laws(s, d, h_tau, window)
        cands[tau] = ranked
    todo = set(all_multisegments_on(reduced))
    claim: dict[Multisegment, list] = {s: [] for s in todo}
    for tau, opts in cands.items():
        for s in opts:
            claim[s].append(tau)
    taken: set[Multisegment] = set()
    while todo:
        # most constrained target first; prefer claimants passing the laws
        best = None
        for s in todo:
            avail = [t for t in claim[s] if t not in taken]
            score = (len(avail), s.segs)
            if best is None or score < best[0]:
                best = (score, s, avail)
        _, s, avail = best
        todo.remove(s)
        if not avail:
            raise NonUniqueDerivative(f"no parameter peels to {s} by {d}")
        avail.sort(
            key=lambda t: (
                not good.get((t, s), False),
                len([x for x in cands[t] if x in todo or x == s]),
                t.segs,
            )
        )
        tau = avail[0]
        taken.add(tau)
        assignment[tau] = s
    _class_memo[key] = assignment
    return assignment


_der_memo: dict[tuple[Multisegment, Segment], Multisegment | None] = {}


def derivative(pi: IrrRep, d: Segment, side: str = RIGHT) -> IrrRep | None:
    """Peel the segment; None when the derivative vanishes."""
    if side == LEFT:
        res = derivative(dual(pi), dual(d), RIGHT)
        return None if res is None else dual(res)
    key = (pi.zmult, d)
    if key in _der_memo:
        out = _der_memo[key]
        return None if out is None else IrrRep(out)
    out = _derivative_right(pi.zmult, d)
    _der_memo[key] = out
    return None if out is None else IrrRep(out)


def _derivative_right(m0: Multisegment, d: Segment) -> Multisegment | None:
    if d.lo == d.hi:
        return peel_point(m0, d.line, d.lo)
    return _solve_class(csupp(m0), d).get(m0)
_int_memo: dict[tuple[Multisegment, Segment], Multisegment] = {}


def integral(pi: IrrRep, d: Segment, side: str = LEFT) -> IrrRep:
    """The socle of the product with the square-integrable segment class.

    Computed as the unique inverse of the derivative on the enlarged support.
    """
    if side == LEFT:
        return dual(integral(dual(pi), dual(d), RIGHT))
    key = (pi.zmult, d)
    out = _int_memo.get(key)
    if out is None:
        out = _integral_right(pi.zmult, d)
        _int_memo[key] = out
    return IrrRep(out)


def _integral_right(m0: Multisegment, d: Segment) -> Multisegment:
    if d.lo == d.hi:
        return extend_point(m0, d.line, d.lo)
    assignment = _solve_class(csupp(m0) + points(d), d)
    for tau, sigma in assignment.items():
        if sigma == m0:
            return tau
    raise NonUniqueDerivative(f"no inverse for {d} on {m0}")


def derivative_seq(pi: IrrRep, m: Multisegment, side: str = RIGHT) -> IrrRep | None:
    """Fold of derivatives over the definition's labeling; None propagates.

    Right derivatives compose over an ascending order, left ones over a
    descending order.
    """
    labels = order(m, "ascending" if side == RIGHT else "descending")
    for d in labels:
        pi = derivative(pi, d, side)
        if pi is None:
            return None
    return pi


def integral_seq(pi: IrrRep, n: Multisegment, side: str = LEFT) -> IrrRep:
    """Fold of integrals: left integrals over an ascending order, right over descending."""
    labels = order(n, "ascending" if side == LEFT else "descending")
    for d in labels:
        pi = integral(pi, d, side)
    return pi


# ---------------------------------------------------------------------------
# levels and highest derivatives


def highest(pi: IrrRep, side: str = RIGHT, shifted: bool = False) -> tuple[int, IrrRep]:
    """The level together with the highest derivative on the given side."""
    lev = len(pi.zmult)
    out = IrrRep(trunc_right(pi.zmult) if side == RIGHT else trunc_left(pi.zmult))
    if shifted:
        out = shift2(out, 1 if side == RIGHT else -1)
    return lev, out


def thicken(pi: IrrRep) -> IrrRep:
    """Left-extend every segment by one point; the highest left derivative undoes it."""
    return IrrRep(ext_left(pi.zmult))


def is_thickened(pi: IrrRep) -> bool:
    return all(rel_length(s) >= 2 for s in pi.zmult)


def dual_rep(pi: IrrRep) -> IrrRep:
    return dual(pi)


def theta(pi: IrrRep) -> IrrRep:
    """The inverse-transpose involution acts as the smooth dual on classes."""
    return dual_rep(pi)


# ---------------------------------------------------------------------------
# conversion between the two classifications


def zelevinsky_dual(m: Multisegment) -> Multisegment:
    """The involution exchanging the two irreducible parameterizations.

    Chain algorithm: repeatedly pick the segment with the maximal b-end
    (largest a-end on ties), extend the chain by segments whose b-end drops by
    one and whose a-end strictly drops (again largest a-end first), record the
    chain's b-ends as a new segment, then truncate every chain member.
    """
    out: list[Segment] = []
    classes: dict[tuple, list[Segment]] = {}
    for s in m:
        classes.setdefault((s.line, s.lo % 2), []).append(s)
    for (ln, _), work in classes.items():
        while work:
            cur = max(work, key=lambda s: (s.hi, s.lo))
            chain = [cur]
            while True:
                cands = [s for s in work if s.hi == cur.hi - 2 and s.lo < cur.lo]
                if not cands:
                    break
                cur = max(cands, key=lambda s: s.lo)
                chain.append(cur)
            out.append(Segment(ln, chain[-1].hi, chain[0].hi))
            for s in chain:
                work.remove(s)
                if s.hi - 2 >= s.lo:
                    work.append(Segment(ln, s.lo, s.hi - 2))
    return Multisegment(out)


def langlands_to_zelevinsky(m: Multisegment) -> Multisegment:
    """Zelevinsky parameter of the Langlands class attached to m (an involution)."""
    return zelevinsky_dual(m)


# ---------------------------------------------------------------------------
# double derivatives / integrals (completions to the highest derivative)


def double_derivative_completion(pi: IrrRep, m: Multisegment) -> Multisegment:
    """A multisegment continuing D_m(pi) to the highest right derivative."""
    from .errors import VanishingDerivative

    if derivative_seq(pi, m, RIGHT) is None:
        raise VanishingDerivative(f"derivative of {pi} by {m} vanishes")
    return invariants.removal_multi(m, invariants.hd(pi, RIGHT), RIGHT)


def double_integral_completion(pi: IrrRep, m: Multisegment) -> Multisegment:
    """A multisegment n with left-highest(I_n(I_m(pi))) = pi, levels preserved.

    Constructed through the thickening of tau = I_m(pi): extend every segment
    of tau one step right and remove m from the left-highest data of the
    thickening; the result is then shifted down by one.
    """
    tau = integral_seq(pi, m, LEFT)
    tau_plus = IrrRep(ext_right(tau.zmult))
    n_raw = invariants.removal_multi(m, invariants.hd(tau_plus, LEFT), LEFT)
    return shift2(n_raw, -2)
