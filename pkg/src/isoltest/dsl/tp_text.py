"""Text format for test purposes.

Grammar::

    purpose = "purpose" IDENT "is" proc "end" "purpose"
    proc    = item { ";" item }
    item    = event | "refuse" event | "null" | "accept"
            | "select" proc { "[]" proc } "end" "select"
            | "par" proc { "||" proc } "end" "par"
            | "loop" proc "end" "loop"
    event   = GATE [ "(" [ pat { "," pat } ] ")" ] [ "where" guard ]
    pat     = "*" | "_" | "?" IDENT | "!" IDENT | IDENT | NUM
    guard   = conj { "or" conj }
    conj    = neg { "and" neg }
    neg     = "not" neg | "(" guard ")" | gterm CMP gterm
    gterm   = IDENT | NUM

``?x`` captures an offer, ``!x`` must equal a captured offer. Guards
compare captured values and literals using the domain orders
(nonsecure < secure, nonprivileged < privileged, data1 < data2).
"""

from __future__ import annotations

from .. import soc
from ..testgen import (
    EventPattern,
    GBool,
    GCmp,
    GLit,
    GNot,
    GVar,
    OfferPattern,
    PAccept,
    PEvent,
    PLoop,
    PNull,
    PPar,
    PRefuse,
    PSelect,
    PSeq,
    TestPurpose,
)
from .diagnostics import Diagnostic, DslError, TokenStream

KEYWORDS = {"purpose", "is", "end", "select", "par", "loop", "null", "accept", "refuse", "where", "and", "or", "not"}
CMP = ("==", "!=", "<=", ">=", "<", ">")


def _error(message, span):
    return DslError([Diagnostic("error", message, span)])


class _Parser:
    def __init__(self, text: str, file: str):
        self.ts = TokenStream(text, file)
        self.sorts: dict[str, str] = {}  # capture -> sort name

    def purpose(self) -> TestPurpose:
        ts = self.ts
        if ts.peek.kind == "eof":
            raise _error("empty test purpose", ts.peek.span)
        ts.expect("purpose")
        name = ts.ident("purpose name").text
        ts.expect("is")
        body, _ = self.proc(frozenset())
        ts.expect("end")
        ts.expect("purpose")
        if ts.peek.kind != "eof":
            ts.fail(f"unexpected {ts.describe(ts.peek)} after the purpose")
        return TestPurpose(name, body)

    def proc(self, bound):
        items = []
        node, bound = self.item(bound)
        items.append(node)
        while self.ts.accept(";"):
            node, bound = self.item(bound)
            items.append(node)
        return (items[0] if len(items) == 1 else PSeq(tuple(items))), bound

    def block(self, kw, sep, bound, combine):
        branches, outs = [], []
        node, out = self.proc(bound)
        branches.append(node)
        outs.append(out)
        while self.ts.accept(sep):
            node, out = self.proc(bound)
            branches.append(node)
            outs.append(out)
        self.ts.expect("end")
        self.ts.expect(kw)
        return tuple(branches), combine(outs)

    def item(self, bound):
        ts = self.ts
        tok = ts.peek
        if ts.accept("null"):
            return PNull(), bound
        if ts.accept("accept"):
            return PAccept(), bound
        if ts.accept("refuse"):
            ev, _ = self.event(bound)
            return PRefuse(ev), bound
        if ts.accept("select"):
            br, out = self.block("select", "[]", bound, lambda outs: frozenset.intersection(*outs))
            return PSelect(br), out
        if ts.accept("par"):
            br, out = self.block("par", "||", bound, lambda outs: frozenset.union(*outs))
            return PPar(br), out
        if ts.accept("loop"):
            body, _ = self.proc(bound)
            ts.expect("end")
            ts.expect("loop")
            return PLoop(body), bound
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            ev, bound = self.event(bound)
            return PEvent(ev), bound
        ts.fail(f"expected an event or a behavior, found {ts.describe(tok)}")

    def event(self, bound):
        ts = self.ts
        gtok = ts.ident("gate")
        gate = gtok.text
        if gate not in soc.GATE_SIGNATURES:
            raise _error(f"unknown gate {gate!r}", gtok.span)
        sig = soc.GATE_SIGNATURES[gate]
        offers = None
        captured = set()
        if ts.accept("("):
            pats = []
            while not ts.at(")"):
                if pats:
                    ts.expect(",")
                pats.append(self.pattern(sig, len(pats), bound | captured, captured))
            ts.expect(")")
            if len(pats) != len(sig):
                raise _error(f"{gate} takes {len(sig)} offers, got {len(pats)}", gtok.span)
            offers = tuple(pats)
        bound = bound | captured
        guard = None
        if ts.accept("where"):
            guard = self.guard(bound)
        return EventPattern(gate, offers, guard), bound

    def pattern(self, sig, pos, bound, captured):
        ts = self.ts
        tok = ts.peek
        sort = sig[pos] if pos < len(sig) else None
        if ts.accept("*") or ts.accept("_"):
            return OfferPattern("any")
        if ts.accept("?"):
            v = ts.ident("capture variable")
            if v.text in captured:
                raise _error(f"{v.text!r} captured twice in one event", v.span)
            self._bind_sort(v, sort)
            captured.add(v.text)
            return OfferPattern("capture", v.text)
        if ts.accept("!"):
            v = ts.ident("captured variable")
            if v.text not in bound:
                raise _error(f"{v.text!r} is not bound by an earlier capture", v.span)
            if sort is not None and self.sorts.get(v.text) != sort:
                raise _error(f"{v.text!r} is a {self.sorts.get(v.text)}, expected {sort}", v.span)
            return OfferPattern("ref", v.text)
        if tok.kind == "num":
            ts.next()
            if sort not in (None, "ip"):
                raise _error(f"expected a {sort} value, found {tok.text}", tok.span)
            return OfferPattern("lit", int(tok.text))
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            ts.next()
            dom = soc.VALUE_DOMAIN.get(tok.text)
            if dom is None:
                raise _error(f"unknown value {tok.text!r}", tok.span)
            if sort is not None and dom != sort:
                raise _error(f"expected a {sort} value, found {tok.text!r} ({dom})", tok.span)
            return OfferPattern("lit", tok.text)
        ts.fail(f"expected an offer pattern, found {ts.describe(tok)}")

    def _bind_sort(self, v, sort):
        old = self.sorts.get(v.text)
        if old is not None and sort is not None and old != sort:
            raise _error(f"{v.text!r} already holds a {old}", v.span)
        self.sorts[v.text] = sort

    def guard(self, bound):
        items = [self.conj(bound)]
        while self.ts.accept("or"):
            items.append(self.conj(bound))
        return items[0] if len(items) == 1 else GBool("or", tuple(items))

    def conj(self, bound):
        items = [self.neg(bound)]
        while self.ts.accept("and"):
            items.append(self.neg(bound))
        return items[0] if len(items) == 1 else GBool("and", tuple(items))

    def neg(self, bound):
        ts = self.ts
        if ts.accept("not"):
            return GNot(self.neg(bound))
        if ts.accept("("):
            g = self.guard(bound)
            ts.expect(")")
            return g
        start = ts.peek
        left = self.gterm(bound)
        if not ts.at(*CMP):
            ts.fail(f"expected a comparison operator, found {ts.describe(ts.peek)}")
        op = ts.next().text
        right = self.gterm(bound)
        if self._sort(left) != self._sort(right):
            raise _error(f"cannot compare a {self._sort(left)} with a {self._sort(right)}", start.span)
        return GCmp(op, left, right)

    def gterm(self, bound):
        ts = self.ts
        tok = ts.peek
        if tok.kind == "num":
            ts.next()
            return GLit(int(tok.text))
        v = ts.ident("variable or value")
        if v.text in bound:
            return GVar(v.text)
        if v.text in soc.VALUE_DOMAIN:
            return GLit(v.text)
        raise _error(f"guard refers to {v.text!r}, which is not captured before", v.span)

    def _sort(self, t):
        if isinstance(t, GVar):
            return self.sorts.get(t.name)
        return "ip" if isinstance(t.value, int) else soc.VALUE_DOMAIN[t.value]


def parse_tp(text: str, file: str = "<purpose>") -> TestPurpose:
    return _Parser(text, file).purpose()


# -- unparse ----------------------------------------------------------------------------


def _guard_text(g, top=True) -> str:
    if isinstance(g, GCmp):
        return f"{_gterm_text(g.left)} {g.op} {_gterm_text(g.right)}"
    if isinstance(g, GNot):
        return f"not ({_guard_text(g.arg)})"
    inner = f" {g.op} ".join(_guard_text(a, False) for a in g.args)
    return inner if top else f"({inner})"


def _gterm_text(t) -> str:
    return t.name if isinstance(t, GVar) else str(t.value)


def event_text(ev: EventPattern) -> str:
    s = ev.gate
    if ev.offers is not None:
        s += "(" + ", ".join(str(p) for p in ev.offers) + ")"
    if ev.guard is not None:
        s += " where " + _guard_text(ev.guard)
    return s


def _lines(p, indent: str) -> list[str]:
    pad = indent
    if isinstance(p, PEvent):
        return [pad + event_text(p.event)]
    if isinstance(p, PRefuse):
        return [pad + "refuse " + event_text(p.event)]
    if isinstance(p, PNull):
        return [pad + "null"]
    if isinstance(p, PAccept):
        return [pad + "accept"]
    if isinstance(p, PSeq):
        out = []
        for k, item in enumerate(p.items):
            chunk = _lines(item, indent)
            if k < len(p.items) - 1:
                chunk[-1] += ";"
            out.extend(chunk)
        return out
    if isinstance(p, PLoop):
        return [pad + "loop"] + _lines(p.body, indent + "   ") + [pad + "end loop"]
    kw, sep = ("select", "[]") if isinstance(p, PSelect) else ("par", "||")
    out = [pad + kw]
    for k, br in enumerate(p.branches):
        if k:
            out.append(pad + sep)
        out.extend(_lines(br, indent + "   "))
    out.append(pad + "end " + kw)
    return out


def unparse_tp(tp: TestPurpose) -> str:
    return "\n".join([f"purpose {tp.name} is"] + _lines(tp.body, "   ") + ["end purpose"]) + "\n"
