"""Exact multisegment calculus for general linear groups over a p-adic field.

Decides the corank-one quotient branching law through generalized relevant
pairs, with the supporting derivative calculus: segment derivatives and
integrals, eta-invariants, highest-derivative data, strong commutativity,
minimal witnesses, and the simple-quotient (generalized Pieri) tables.

All values are immutable and all operations are pure; the shared memo tables
rely on the interpreter's atomic dict operations and idempotent entries, so
concurrent readers are safe.
"""

from .core import (
    DEFAULT_LINE,
    EMPTY_MULT,
    EMPTY_REP,
    IrrRep,
    Line,
    Multisegment,
    Point,
    Segment,
    csupp,
    dual,
    level,
    line,
    linked,
    mult,
    rank,
    rep,
    seg,
    seg_precedes,
    shift,
)
from .calculus import derivative, derivative_seq, integral, integral_seq, langlands_to_zelevinsky
from .invariants import EtaVector, eps, eta, hd
from .relevance import RelevanceResult, branch, relevant

__all__ = [
    "DEFAULT_LINE",
    "EMPTY_MULT",
    "EMPTY_REP",
    "EtaVector",
    "IrrRep",
    "Line",
    "Multisegment",
    "Point",
    "RelevanceResult",
    "Segment",
    "branch",
    "csupp",
    "derivative",
    "derivative_seq",
    "dual",
    "eps",
    "eta",
    "hd",
    "integral",
    "integral_seq",
    "langlands_to_zelevinsky",
    "level",
    "line",
    "linked",
    "mult",
    "rank",
    "relevant",
    "rep",
    "seg",
    "seg_precedes",
    "shift",
]
