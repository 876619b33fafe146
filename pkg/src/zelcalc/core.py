"""Exact arithmetic of cuspidal points, segments and multisegments.

Exponents are half-integers stored as doubled integers, so every value in
this module hashes and compares exactly.  Two points interact only when they
sit on the same cuspidal line with an integer exponent difference; half-integer
offsets are distinct cosets and never mix.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import NotLinked, NotPresent


class Line(NamedTuple):
    """A cuspidal line: an abstract twist orbit with a GL-rank and a dual partner."""

    name: str
    size: int
    dual_name: str


def line(name: str = "r", size: int = 1, dual: str | None = None) -> Line:
    if size < 1:
        raise ValueError("line size must be >= 1")
    return Line(name, size, dual if dual is not None else name)


DEFAULT_LINE = line("r")


def dual_line(ln: Line) -> Line:
    return Line(ln.dual_name, ln.size, ln.name)


def half(x) -> int:
    """Convert a half-integer (int, Fraction, float, or 'k/2' string) to a doubled int."""
    if isinstance(x, int):
        return 2 * x
    if isinstance(x, str):
        x = Fraction(x)
    f = Fraction(x)
    d = f * 2
    if d.denominator != 1:
        raise ValueError(f"not a half-integer: {x}")
    return int(d)


def unhalf(e2: int) -> Fraction:
    return Fraction(e2, 2)


class Point(NamedTuple):
    """A cuspidal point: a line together with a doubled exponent."""

    line: Line
    e2: int


class Segment(NamedTuple):
    """A segment [a,b] on a line; ``lo``/``hi`` are the doubled endpoints."""

    line: Line
    lo: int
    hi: int


def seg(a, b=None, ln: Line = DEFAULT_LINE) -> Segment:
    """Build a nonempty segment from half-integer endpoints."""
    lo = half(a)
    hi = lo if b is None else half(b)
    return _seg(ln, lo, hi)


def _seg(ln: Line, lo: int, hi: int) -> Segment:
    if hi < lo or (hi - lo) % 2 != 0:
        raise ValueError(f"invalid segment endpoints {unhalf(lo)}..{unhalf(hi)}")
    return Segment(ln, lo, hi)


def seg_a(s: Segment) -> Point:
    return Point(s.line, s.lo)


def seg_b(s: Segment) -> Point:
    return Point(s.line, s.hi)


def rel_length(s: Segment) -> int:
    return (s.hi - s.lo) // 2 + 1


def abs_length(s: Segment) -> int:
    return rel_length(s) * s.line.size


def points(s: Segment) -> tuple[Point, ...]:
    return tuple(Point(s.line, e2) for e2 in range(s.lo, s.hi + 1, 2))


def same_coset(p: Point, q: Point) -> bool:
    """True iff the points can be compared: same line, integer exponent gap."""
    return p.line == q.line and (p.e2 - q.e2) % 2 == 0


def point_le(p: Point, q: Point) -> bool:
    return same_coset(p, q) and p.e2 <= q.e2


def point_lt(p: Point, q: Point) -> bool:
    return same_coset(p, q) and p.e2 < q.e2


_SEG_KEY = lambda s: (s.line.name, s.line.size, s.line.dual_name, s.lo, s.hi)  # noqa: E731


class Multisegment:
    """A multiset of nonempty segments in a canonical total order.

    Values are immutable and hash-cached; equality is multiset equality.
    """

    __slots__ = ("segs", "_hash")

    def __init__(self, segs: Iterable[Segment] = ()):
        object.__setattr__(self, "segs", tuple(sorted(segs, key=_SEG_KEY)))
        object.__setattr__(self, "_hash", hash(self.segs))

    def __setattr__(self, *a):
        raise AttributeError("Multisegment is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Multisegment) and self.segs == other.segs
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __iter__(self):
        return iter(self.segs)

    def __len__(self):
        return len(self.segs)

    def __getitem__(self, i):
        return self.segs[i]

    def __repr__(self):
        return f"Multisegment({format_mult(self)!r})"


EMPTY_MULT = Multisegment()


def mult(*segments: Segment) -> Multisegment:
    return Multisegment(segments)


def mult_add(m: Multisegment, *segments: Segment) -> Multisegment:
    return Multisegment(m.segs + tuple(segments))


def mult_remove(m: Multisegment, *segments: Segment) -> Multisegment:
    """Remove one copy of each listed segment; NotPresent if a copy is missing."""
    pool = list(m.segs)
    for s in segments:
        try:
            pool.remove(s)
        except ValueError:
            raise NotPresent(f"segment {s} not in multisegment") from None
    return Multisegment(pool)


def sub_multisegment(small: Multisegment, big: Multisegment) -> bool:
    return not Counter(small.segs) - Counter(big.segs)


class IrrRep(NamedTuple):
    """An irreducible representation, encoded by its Zelevinsky multisegment."""

    zmult: Multisegment


EMPTY_REP = IrrRep(EMPTY_MULT)


def rep(*segments: Segment) -> IrrRep:
    return IrrRep(Multisegment(segments))


def level(pi: IrrRep) -> int:
    return len(pi.zmult)


def rank(pi: IrrRep) -> int:
    return sum(abs_length(s) for s in pi.zmult)


def csupp(x) -> tuple[Point, ...]:
    """Cuspidal support as a sorted multiset of points."""
    if isinstance(x, Segment):
        return points(x)
    if isinstance(x, IrrRep):
        x = x.zmult
    out: list[Point] = []
    for s in x:
        out.extend(points(s))
    out.sort(key=lambda p: (p.line.name, p.line.size, p.line.dual_name, p.e2))
    return tuple(out)


def csupp_sub(big: tuple[Point, ...], small: tuple[Point, ...]):
    """Multiset difference big - small, or None if small is not contained."""
    rem = Counter(big)
    rem.subtract(Counter(small))
    if any(v < 0 for v in rem.values()):
        return None
    out = list(rem.elements())
    out.sort(key=lambda p: (p.line.name, p.line.size, p.line.dual_name, p.e2))
    return tuple(out)


# ---------------------------------------------------------------------------
# linkage, intersection-union and the <=_Z order


def linked(d1: Segment, d2: Segment) -> bool:
    """True iff the union is a segment and neither segment contains the other."""
    if d1.line != d2.line or (d1.lo - d2.lo) % 2 != 0:
        return False
    if max(d1.lo, d2.lo) > min(d1.hi, d2.hi) + 2:
        return False  # gap: the union is not a segment
    if d1.lo <= d2.lo and d2.hi <= d1.hi:
        return False
    if d2.lo <= d1.lo and d1.hi <= d2.hi:
        return False
    return True


def seg_precedes(d1: Segment, d2: Segment) -> bool:
    return linked(d1, d2) and d1.hi < d2.hi


def seg_union(d1: Segment, d2: Segment) -> Segment:
    return Segment(d1.line, min(d1.lo, d2.lo), max(d1.hi, d2.hi))


def seg_inter(d1: Segment, d2: Segment) -> Segment | None:
    lo, hi = max(d1.lo, d2.lo), min(d1.hi, d2.hi)
    return Segment(d1.line, lo, hi) if lo <= hi else None


def intersection_union(m: Multisegment, d1: Segment, d2: Segment) -> Multisegment:
    """Replace a linked pair by its union and (if nonempty) its intersection."""
    if not linked(d1, d2):
        raise NotLinked(f"{d1} and {d2} are not linked")
    out = mult_remove(m, d1, d2)
    inter = seg_inter(d1, d2)
    new = (seg_union(d1, d2),) if inter is None else (seg_union(d1, d2), inter)
    return mult_add(out, *new)


def moves(m: Multisegment):
    """All one-step intersection-union results from m (with duplicates removed)."""
    seen = set()
    segs = m.segs
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            if linked(segs[i], segs[j]):
                m1 = intersection_union(m, segs[i], segs[j])
                if m1 not in seen:
                    seen.add(m1)
                    yield m1


_closure_memo: dict[Multisegment, frozenset] = {}


def down_closure(m: Multisegment) -> frozenset:
    """All multisegments strictly below m in <=_Z (reachable by >=1 moves)."""
    cached = _closure_memo.get(m)
    if cached is not None:
        return cached
    acc: set[Multisegment] = set()
    for m1 in moves(m):
        if m1 not in acc:
            acc.add(m1)
            acc.update(down_closure(m1))
    result = frozenset(acc)
    _closure_memo[m] = result
    return result


def leq_z(m1: Multisegment, m2: Multisegment) -> bool:
    """m1 <=_Z m2: equal, or reachable from m2 by intersection-union moves."""
    return m1 == m2 or m1 in down_closure(m2)


def slices(m: Multisegment, p: Point) -> tuple[Multisegment, Multisegment]:
    """The sub-multisegments with a-end, resp. b-end, at the given point."""
    a_side = Multisegment(s for s in m if seg_a(s) == p)
    b_side = Multisegment(s for s in m if seg_b(s) == p)
    return a_side, b_side


def order(m: Multisegment, mode: str = "ascending") -> tuple[Segment, ...]:
    """A deterministic ascending or descending labeling of the segments.

    Ascending means no earlier segment precedes... is preceded by a later one
    (Delta_i not > Delta_j for i < j); sorting by b-end realizes it, with the
    canonical key as tie-break.
    """
    key = lambda s: (s.line.name, s.line.size, s.line.dual_name, s.hi, s.lo)  # noqa: E731
    if mode == "ascending":
        return tuple(sorted(m, key=key))
    if mode == "descending":
        return tuple(sorted(m, key=key, reverse=True))
    raise ValueError(f"unknown order mode {mode!r}")


# ---------------------------------------------------------------------------
# elementwise transforms


def shift2(x, dq: int):
    """Shift every exponent by the doubled half-integer dq."""
    if isinstance(x, Segment):
        return Segment(x.line, x.lo + dq, x.hi + dq)
    if isinstance(x, Multisegment):
        return Multisegment(shift2(s, dq) for s in x)
    if isinstance(x, IrrRep):
        return IrrRep(shift2(x.zmult, dq))
    raise TypeError(f"cannot shift {type(x).__name__}")


def shift(x, q):
    return shift2(x, half(q))


def dual(x):
    """The dual transform [a,b] -> [-b,-a] on the dual line."""
    if isinstance(x, Segment):
        return Segment(dual_line(x.line), -x.hi, -x.lo)
    if isinstance(x, Multisegment):
        return Multisegment(dual(s) for s in x)
    if isinstance(x, IrrRep):
        return IrrRep(dual(x.zmult))
    if isinstance(x, Point):
        return Point(dual_line(x.line), -x.e2)
    raise TypeError(f"cannot dualize {type(x).__name__}")


def _elementwise(x, f):
    if isinstance(x, Segment):
        return f(x)
    if isinstance(x, Multisegment):
        return Multisegment(t for t in (f(s) for s in x) if t is not None)
    if isinstance(x, IrrRep):
        return IrrRep(_elementwise(x.zmult, f))
    raise TypeError(f"cannot transform {type(x).__name__}")


def trunc_right(x):
    return _elementwise(x, lambda s: Segment(s.line, s.lo, s.hi - 2) if s.hi - 2 >= s.lo else None)


def trunc_left(x):
    return _elementwise(x, lambda s: Segment(s.line, s.lo + 2, s.hi) if s.lo + 2 <= s.hi else None)


def ext_right(x):
    return _elementwise(x, lambda s: Segment(s.line, s.lo, s.hi + 2))


def ext_left(x):
    return _elementwise(x, lambda s: Segment(s.line, s.lo - 2, s.hi))


def transform(x, t: str, q=None):
    """Dispatch a named transform; q is the half-integer amount for shift."""
    if t == "shift":
        return shift(x, q)
    table = {
        "dual": dual,
        "trunc_right": trunc_right,
        "trunc_left": trunc_left,
        "ext_right": ext_right,
        "ext_left": ext_left,
    }
    if t not in table:
        raise ValueError(f"unknown transform {t!r}")
    return table[t](x)


# ---------------------------------------------------------------------------
# canonical text forms (the grammar shared by the CLI and the fixtures)


def format_exp(e2: int) -> str:
    return str(e2 // 2) if e2 % 2 == 0 else f"{e2}/2"


def format_line(ln: Line) -> str:
    if ln == DEFAULT_LINE:
        return ""
    return f"@{ln.name}" if ln.size == 1 else f"@{ln.name}:{ln.size}"


def format_seg(s: Segment) -> str:
    body = format_exp(s.lo) if s.lo == s.hi else f"{format_exp(s.lo)},{format_exp(s.hi)}"
    return f"[{body}]{format_line(s.line)}"


def format_mult(m: Multisegment) -> str:
    return "{" + ",".join(format_seg(s) for s in m) + "}"


def format_rep(pi: IrrRep) -> str:
    return "Z" + format_mult(pi.zmult)


# ---------------------------------------------------------------------------
# exhaustive generation (shared by the inversion fallback and the oracle)

_enum_memo: dict[tuple[Point, ...], tuple[Multisegment, ...]] = {}


def all_multisegments_on(pts: tuple[Point, ...]) -> tuple[Multisegment, ...]:
    """Every multisegment whose point multiset is exactly pts."""
    key = tuple(sorted(pts, key=lambda p: (p.line.name, p.line.size, p.line.dual_name, p.e2)))
    cached = _enum_memo.get(key)
    if cached is not None:
        return cached
    out: list[Multisegment] = []

    def walk(rem: Counter, acc: list[Segment], last: Segment | None):
        if not rem:
            out.append(Multisegment(acc))
            return
        p = min(rem, key=lambda q: (q.line.name, q.line.size, q.line.dual_name, q.e2))
        # every multisegment has a segment whose a-end is the least point; to
        # emit each multiset once, successive segments with the same a-end are
        # generated with non-increasing b-ends
        e2 = p.e2
        while Point(p.line, e2) in rem:
            if last is not None and last.line == p.line and last.lo == p.e2 and e2 > last.hi:
                e2 += 2
                continue
            s = Segment(p.line, p.e2, e2)
            nrem = rem.copy()
            for q in points(s):
                nrem[q] -= 1
                if not nrem[q]:
                    del nrem[q]
            acc.append(s)
            walk(nrem, acc, s)
            acc.pop()
            e2 += 2

    walk(Counter(key), [], None)
    result = tuple(out)
    _enum_memo[key] = result
    return result
