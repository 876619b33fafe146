"""Command-line front end: grammar parsing, pretty printing, batch and cache.

Grammar (also used by test fixtures):

    point   := INT | INT "/" "2"
    seg     := "[" point ("," point)? "]" ("@" LINEID (":" INT)?)?
    mult    := "{" (seg ("," seg)*)? "}"
    rep     := "Z" mult | "St" mult

"St" parameters are converted to Zelevinsky ones on input; lines named in text
are self-dual (programmatic construction is needed for split dual pairs).
Exit status: 0 on success, 1 for a mathematically negative result under
--strict, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import shlex
import sys

from . import calculus, commutation, invariants, oracle, pieri, relevance
from .core import (
    IrrRep,
    Multisegment,
    Point,
    Segment,
    format_mult,
    format_rep,
    format_seg,
    line,
)
from .errors import ParseError, ZelcalcError
from .invariants import EtaVector
from .relevance import RelevanceResult


# ---------------------------------------------------------------------------
# parsing


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if not self.text.startswith(ch, self.pos):
            raise ParseError(f"unexpected {self.peek()!r}", self.pos, expected=repr(ch))
        self.pos += len(ch)

    def int_(self) -> int:
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start or self.text[start : self.pos] == "-":
            raise ParseError("malformed integer", start, expected="an integer")
        return int(self.text[start : self.pos])

    def ident(self) -> str:
        start = self.pos
        while self.peek().isalnum() or self.peek() == "_":
            self.pos += 1
        if self.pos == start:
            raise ParseError("malformed line id", start, expected="a line identifier")
        return self.text[start : self.pos]

    def done(self):
        if self.pos != len(self.text):
            raise ParseError(
                f"trailing input {self.text[self.pos:]!r}", self.pos, expected="end of input"
            )


def _point2(sc: _Scanner) -> int:
    n = sc.int_()
    if sc.peek() == "/":
        sc.take("/2")
        if n % 2 == 0:
            raise ParseError("half-integer with even numerator", sc.pos, expected="an odd numerator")
        return n
    return 2 * n


def _segment(sc: _Scanner) -> Segment:
    sc.take("[")
    lo = _point2(sc)
    hi = lo
    if sc.peek() == ",":
        sc.take(",")
        hi = _point2(sc)
    sc.take("]")
    ln = line("r")
    if sc.peek() == "@":
        sc.take("@")
        name = sc.ident()
        size = 1
        if sc.peek() == ":":
            sc.take(":")
            size = sc.int_()
            if size < 1:
                raise ParseError("line size must be positive", sc.pos)
        ln = line(name, size)
    if hi < lo or (hi - lo) % 2 != 0:
        raise ParseError("invalid segment endpoints (b < a or non-integer length)", sc.pos)
    return Segment(ln, lo, hi)


def _mult(sc: _Scanner) -> Multisegment:
    sc.take("{")
    segs = []
    if sc.peek() != "}":
        segs.append(_segment(sc))
        while sc.peek() == ",":
            sc.take(",")
            segs.append(_segment(sc))
    sc.take("}")
    return Multisegment(segs)


def parse_segment(text: str) -> Segment:
    sc = _Scanner(text.strip())
    s = _segment(sc)
    sc.done()
    return s


def parse_mult(text: str) -> Multisegment:
    sc = _Scanner(text.strip())
    m = _mult(sc)
    sc.done()
    return m


def parse_rep(text: str) -> IrrRep:
    sc = _Scanner(text.strip())
    if sc.text.startswith("St", sc.pos):
        sc.take("St")
        m = _mult(sc)
        sc.done()
        return IrrRep(calculus.langlands_to_zelevinsky(m))
    sc.take("Z")
    m = _mult(sc)
    sc.done()
    return IrrRep(m)


def parse(text: str):
    """Parse a segment, multisegment, or representation."""
    t = text.strip()
    if t.startswith("Z") or t.startswith("St"):
        return parse_rep(t)
    if t.startswith("{"):
        return parse_mult(t)
    return parse_segment(t)


# ---------------------------------------------------------------------------
# formatting


def format_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Segment):
        return format_seg(v)
    if isinstance(v, Multisegment):
        return format_mult(v)
    if isinstance(v, IrrRep):
        return format_rep(v)
    if isinstance(v, EtaVector):
        return "(" + ",".join(str(c) for c in v.comps) + ")"
    if isinstance(v, tuple):
        return "(" + ", ".join(format_value(x) for x in v) + ")"
    return str(v)


def json_value(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, Segment):
        return format_seg(v)
    if isinstance(v, Multisegment):
        return [format_seg(s) for s in v]
    if isinstance(v, IrrRep):
        return {"zmult": [format_seg(s) for s in v.zmult]}
    if isinstance(v, EtaVector):
        return {"frame": format_seg(v.frame), "comps": list(v.comps)}
    if isinstance(v, RelevanceResult):
        return {
            "relevant": v.relevant,
            "i_star": v.i_star,
            "m": json_value(v.witness_m),
            "n": json_value(v.witness_n),
            "target": json_value(v.target),
        }
    if isinstance(v, dict):
        return {str(k): json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, frozenset, set)):
        return [json_value(x) for x in v]
    return str(v)


# ---------------------------------------------------------------------------
# commands: each returns (payload, negative) where negative marks a
# mathematically false/null outcome for --strict


def _cmd_parse(a):
    return parse(a.value), False


def _cmd_derive(a):
    out = calculus.derivative(parse_rep(a.rep), parse_segment(a.seg), a.side)
    return out, out is None


def _cmd_integrate(a):
    return calculus.integral(parse_rep(a.rep), parse_segment(a.seg), a.side), False


def _cmd_hd(a):
    return invariants.hd(parse_rep(a.rep), a.side), False


def _cmd_eta(a):
    return invariants.eta(parse_rep(a.rep), parse_segment(a.seg), a.side), False


def _cmd_mx(a):
    pi = parse_rep(a.rep)
    if a.point:
        s = parse_segment(a.point)
        if s.lo != s.hi:
            raise ParseError("the point variant expects a single point", 0, expected="[p]")
        return invariants.mxpt(pi, Point(s.line, s.lo), a.side), False
    if a.seg is None:
        raise ParseError("mx needs a segment or --point", 0, expected="a segment")
    return invariants.mx(pi, parse_segment(a.seg), a.side), False


def _cmd_removal(a):
    out, seq = invariants.removal(parse_segment(a.seg), parse_mult(a.mult), a.side)
    return {"result": out, "sequence": list(seq)}, False


def _cmd_commute(a):
    res = commutation.strongly_commutative_multi(
        parse_mult(a.m), parse_mult(a.n), parse_rep(a.rep)
    )
    payload = {
        "verdict": res.verdict,
        "trace": [
            {
                "d": t.d,
                "dp": t.dp,
                "state": t.state,
                "eta_before": list(t.eta_before),
                "eta_after": list(t.eta_after),
                "ok": t.ok,
            }
            for t in res.trace
        ],
    }
    return payload, not res.verdict


def _cmd_minimal(a):
    pi, m = parse_rep(a.rep), parse_mult(a.mult)
    reduced = commutation.minimize(pi, m, a.side)
    return {"minimal": reduced == m, "minimized": reduced}, reduced != m


def _cmd_relevant(a):
    res = relevance.relevant(parse_rep(a.rep1), parse_rep(a.rep2))
    return res, not res.relevant


def _cmd_branch(a):
    verdict, i_star = relevance.branch(parse_rep(a.rep1), parse_rep(a.rep2))
    return {"relevant": verdict, "i_star": i_star}, not verdict


def _cmd_layer(a):
    out = relevance.smallest_derivative_index(
        parse_mult(a.m), parse_mult(a.n), parse_rep(a.rep)
    )
    return out, False


def _cmd_pieri(a):
    rows = pieri.pieri_table(parse_rep(a.rep))
    payload = {
        str(i): [
            {"target": tau, "witness": w}
            for tau, w in sorted(row, key=lambda e: format_rep(e[0]))
        ]
        for i, row in sorted(rows.items())
    }
    return payload, False


def _cmd_involute(a):
    return calculus.langlands_to_zelevinsky(parse_mult(a.mult)), False


def _cmd_selfcheck(a):
    report = oracle.consistency_suite(seed=a.seed, max_points=a.max_points)
    return report, not report["pass"]


_COMMANDS = {
    "parse": _cmd_parse,
    "derive": _cmd_derive,
    "integrate": _cmd_integrate,
    "hd": _cmd_hd,
    "eta": _cmd_eta,
    "mx": _cmd_mx,
    "removal": _cmd_removal,
    "commute": _cmd_commute,
    "minimal": _cmd_minimal,
    "relevant": _cmd_relevant,
    "branch": _cmd_branch,
    "layer": _cmd_layer,
    "pieri": _cmd_pieri,
    "involute": _cmd_involute,
    "selfcheck": _cmd_selfcheck,
}


def _render(command: str, payload, as_json: bool) -> str:
    if as_json:
        return json.dumps(json_value(payload), sort_keys=True)
    if command == "pieri":
        lines = []
        for i, row in payload.items():
            targets = ", ".join(
                f"{format_value(e['target'])} via {format_value(e['witness'])}" for e in row
            )
            lines.append(f"i={i}  count={len(row)}  {targets}")
        return "\n".join(lines)
    if command == "commute":
        lines = [f"verdict: {format_value(payload['verdict'])}"]
        for t in payload["trace"]:
            lines.append(
                f"  {format_value(t['d'])} | {format_value(t['dp'])} on {format_value(t['state'])}: "
                f"eta {tuple(t['eta_before'])} -> {tuple(t['eta_after'])} "
                f"{'ok' if t['ok'] else 'FAIL'}"
            )
        return "\n".join(lines)
    if command == "removal":
        return f"{format_value(payload['result'])} sequence {format_value(tuple(payload['sequence']))}"
    if command == "minimal":
        return f"{format_value(payload['minimal'])} {format_value(payload['minimized'])}"
    if isinstance(payload, (dict, list)):
        return json.dumps(json_value(payload), sort_keys=True)
    return format_value(payload)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="zelcalc", description="exact multisegment calculus")
    top.add_argument("--json", action="store_true", help="emit JSON instead of text")
    top.add_argument("--strict", action="store_true", help="exit 1 on false/null results")
    top.add_argument("--batch", metavar="FILE", help="one query per line, one JSON result per line")
    top.add_argument("--cache", metavar="FILE", help="JSON-lines result cache")
    top.add_argument(
        "--langlands",
        action="store_true",
        help="accept St{...} inputs via conversion (the grammar always allows this)",
    )
    sub = top.add_subparsers(dest="command")
    p = sub.add_parser("parse")
    p.add_argument("value")
    for name, default in [("derive", "right"), ("integrate", "left"), ("eta", "right")]:
        p = sub.add_parser(name)
        p.add_argument("rep")
        p.add_argument("seg")
        p.add_argument("--side", default=default, choices=["right", "left"])
    p = sub.add_parser("hd")
    p.add_argument("rep")
    p.add_argument("--side", default="right", choices=["right", "left"])
    p = sub.add_parser("mx")
    p.add_argument("rep")
    p.add_argument("seg", nargs="?")
    p.add_argument("--point", help="compute the point variant at [p]")
    p.add_argument("--side", default="right", choices=["right", "left"])
    p = sub.add_parser("removal")
    p.add_argument("seg")
    p.add_argument("mult")
    p.add_argument("--side", default="right", choices=["right", "left"])
    for name in ("commute", "layer"):
        p = sub.add_parser(name)
        p.add_argument("m")
        p.add_argument("n")
        p.add_argument("rep")
    p = sub.add_parser("minimal")
    p.add_argument("rep")
    p.add_argument("mult")
    p.add_argument("--side", default="right", choices=["right", "left"])
    for name in ("relevant", "branch"):
        p = sub.add_parser(name)
        p.add_argument("rep1")
        p.add_argument("rep2")
    p = sub.add_parser("pieri")
    p.add_argument("rep")
    p = sub.add_parser("involute")
    p.add_argument("mult")
    p = sub.add_parser("selfcheck")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--max-points", type=int, default=6, dest="max_points")
    return top


def _canonical_query(command: str, a, as_json: bool) -> str:
    """Canonical serialized query; stable across notation variants."""
    parts = [command]
    for field in ("value", "rep", "seg", "mult", "m", "n", "rep1", "rep2", "point"):
        raw = getattr(a, field, None)
        if raw is None:
            continue
        try:
            parts.append(format_value(parse(raw)))
        except ParseError:
            parts.append(raw)
    for field in ("side", "seed", "max_points"):
        val = getattr(a, field, None)
        if val is not None:
            parts.append(f"{field}={val}")
    parts.append(f"json={as_json}")
    return " ".join(parts)


class _Cache:
    def __init__(self, path: str):
        self.path = path
        self.table = {}
        try:
            with open(path) as fh:
                for raw in fh:
                    raw = raw.strip()
                    if raw:
                        entry = json.loads(raw)
                        self.table[entry["h"]] = entry["r"]
        except FileNotFoundError:
            pass

    def get(self, h):
        return self.table.get(h)

    def put(self, h, query, result):
        self.table[h] = result
        with open(self.path, "a") as fh:
            fh.write(json.dumps({"h": h, "q": query, "r": result}) + "\n")


def _run_one(argv, as_json: bool, cache: _Cache | None):
    top = _build_parser()
    try:
        a = top.parse_args(argv)
    except SystemExit:
        raise ParseError(f"bad query {argv!r}", 0, expected="a valid subcommand") from None
    if a.command is None:
        raise ParseError("missing command", 0, expected="a subcommand")
    as_json = as_json or a.json
    query = _canonical_query(a.command, a, as_json)
    h = hashlib.sha256(query.encode()).hexdigest()[:32]
    if cache is not None:
        hit = cache.get(h)
        if hit is not None:
            return hit["out"], hit["neg"]
    payload, negative = _COMMANDS[a.command](a)
    out = _render(a.command, payload, as_json)
    if cache is not None:
        cache.put(h, query, {"out": out, "neg": negative})
    return out, negative


def run(argv) -> int:
    """Execute one CLI invocation; returns the exit status."""
    top = _build_parser()
    try:
        a, _ = top.parse_known_args(argv)
    except SystemExit:
        return 2
    try:
        cache = _Cache(a.cache) if a.cache else None
        if a.batch:
            negatives = False
            with open(a.batch) as fh:
                lines = [ln.strip() for ln in fh if ln.strip()]
            for ln in lines:
                out, neg = _run_one(shlex.split(ln), True, cache)
                negatives = negatives or neg
                print(out)
            return 1 if (a.strict and negatives) else 0
        if a.command is None:
            top.print_usage(sys.stderr)
            return 2
        out, negative = _run_one(argv, a.json, cache)
        print(out)
        return 1 if (a.strict and negative) else 0
    except (ParseError, ZelcalcError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
