"""Text format for constraint models and verification intents.

Model grammar::

    model    = [ "model" IDENT ";" ] { enum | state | action }
    enum     = "enum" IDENT "{" IDENT { "," IDENT } "}"
    state    = "state" IDENT "{" { IDENT IDENT ";" } "}"
    action   = "action" IDENT "{" { member } "}"
    member   = ("input" | "output") IDENT IDENT ";"
             | "constraint" ( expr ";" | "{" { expr ";" } "}" )
             | "observe" [ IDENT ] "(" [ ref { "," ref } ] ")" ";"
    expr     = or [ "->" expr ]
    or       = and { "||" and }
    and      = unary { "&&" unary }
    unary    = "!" unary | "(" expr ")" | term CMP term
    term     = ref | IDENT
    ref      = IDENT "." IDENT

Intent grammar::

    intent   = "intent" IDENT "{" { IDENT IDENT ";" | activity | constraint | bind } "}"
    activity = "activity" "{" { stmt } "}"
    stmt     = IDENT ";" | ("select" | "schedule" | "sequence") "{" { stmt } "}"
    constraint = "constraint" vexpr ";"      (refs written handle.in.field / handle.out.field)
    bind     = "bind" IDENT IDENT ";"         (output of the first feeds the second)
"""

from __future__ import annotations

from ..lts import ValidationError
from ..pss import (
    BOOL_DOMAIN,
    CMP_OPS,
    INITIAL,
    ActionDef,
    BoolOp,
    Cmp,
    ConstraintModel,
    FieldDef,
    FlowObjectType,
    Leaf,
    Lit,
    Not,
    Ref,
    Schedule,
    Select,
    Seq,
    VerificationIntent,
    refs,
    typecheck,
)
from .diagnostics import Diagnostic, DslError, TokenStream


def _error(message, span):
    return DslError([Diagnostic("error", message, span)])


# -- expressions ------------------------------------------------------------------


class _ExprParser:
    """Expression parser; ``ref`` turns (first, dotted parts, token) into a Ref."""

    def __init__(self, ts: TokenStream, ref):
        self.ts = ts
        self.ref = ref

    def expr(self):
        left = self.disj()
        if self.ts.accept("->"):
            return BoolOp("implies", (left, self.expr()))
        return left

    def disj(self):
        items = [self.conj()]
        while self.ts.accept("||"):
            items.append(self.conj())
        return items[0] if len(items) == 1 else BoolOp("or", tuple(items))

    def conj(self):
        items = [self.unary()]
        while self.ts.accept("&&"):
            items.append(self.unary())
        return items[0] if len(items) == 1 else BoolOp("and", tuple(items))

    def unary(self):
        if self.ts.accept("!"):
            return Not(self.unary())
        if self.ts.accept("("):
            e = self.expr()
            self.ts.expect(")")
            return e
        left = self.term()
        if not self.ts.at(*CMP_OPS):
            self.ts.fail(f"expected a comparison operator, found {self.ts.describe(self.ts.peek)}")
        op = self.ts.next().text
        return Cmp(op, left, self.term())

    def term(self):
        tok = self.ts.ident("field reference or value")
        parts = []
        while self.ts.at(".") and self.ts.ahead(1).kind == "ident":
            self.ts.next()
            parts.append(self.ts.next().text)
        if not parts:
            return Lit(tok.text)
        return self.ref(tok, parts)


def _show(e, side_names=("in", "out"), handle: str | None = None) -> str:
    if isinstance(e, Ref):
        side = side_names[0] if e.side == "in" else side_names[1]
        prefix = f"{handle}." if handle else ""
        return f"{prefix}{side}.{e.field}"
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Cmp):
        return f"{_show(e.left, side_names, handle)} {e.op} {_show(e.right, side_names, handle)}"
    if isinstance(e, Not):
        return f"!({_show(e.arg, side_names, handle)})"
    sym = {"and": " && ", "or": " || ", "implies": " -> "}[e.op]
    return "(" + sym.join(_show(a, side_names, handle) for a in e.args) + ")"


# -- models -------------------------------------------------------------------------


def parse_pss_model(text: str, file: str = "<model>") -> ConstraintModel:
    ts = TokenStream(text, file)
    if ts.peek.kind == "eof":
        raise _error("empty model", ts.peek.span)
    name = "model"
    if ts.accept("model"):
        name = ts.ident("model name").text
        ts.expect(";")
    enums: dict[str, tuple[str, ...]] = {"bool": BOOL_DOMAIN}
    flow: FlowObjectType | None = None
    actions: list[ActionDef] = []
    init_seen = None
    while ts.peek.kind != "eof":
        kw = ts.peek
        if ts.accept("enum"):
            ename = ts.ident("enum name")
            if ename.text in enums:
                raise _error(f"duplicate enum {ename.text!r}", ename.span)
            ts.expect("{")
            values = [ts.ident("enum value").text]
            while ts.accept(","):
                values.append(ts.ident("enum value").text)
            ts.expect("}")
            if len(set(values)) != len(values):
                raise _error(f"duplicate value in enum {ename.text!r}", ename.span)
            enums[ename.text] = tuple(values)
        elif ts.accept("state"):
            if flow is not None:
                raise _error("only one state flow object type is supported", kw.span)
            sname = ts.ident("state type name").text
            ts.expect("{")
            fields = []
            seen = set()
            while not ts.accept("}"):
                ftype = ts.ident("field type")
                fname = ts.ident("field name")
                ts.expect(";")
                if ftype.text not in enums:
                    raise _error(f"unknown type {ftype.text!r}", ftype.span)
                if fname.text == INITIAL:
                    raise _error("'initial' is implicit", fname.span)
                if fname.text in seen:
                    raise _error(f"duplicate field {fname.text!r}", fname.span)
                seen.add(fname.text)
                fields.append(FieldDef(fname.text, ftype.text, enums[ftype.text]))
            flow = FlowObjectType(sname, tuple(fields))
        elif ts.accept("action"):
            if flow is None:
                raise _error("actions must follow the state declaration", kw.span)
            a = _parse_action(ts, flow)
            if a.is_init:
                if init_seen is not None:
                    raise _error(f"multiple init actions ({init_seen} and {a.name})", kw.span)
                init_seen = a.name
            if any(b.name == a.name for b in actions):
                raise _error(f"duplicate action {a.name!r}", kw.span)
            actions.append(a)
        else:
            ts.fail(f"expected 'enum', 'state' or 'action', found {ts.describe(kw)}")
    if flow is None:
        raise _error("missing state declaration", ts.peek.span)
    try:
        return ConstraintModel(flow, actions, name)
    except ValidationError as e:
        raise _error(str(e), ts.peek.span) from None


def _parse_action(ts: TokenStream, flow: FlowObjectType) -> ActionDef:
    name = ts.ident("action name").text
    ts.expect("{")
    handles: dict[str, str] = {}
    constraints = []
    projection: tuple = ()
    gate = None
    observed = False

    def ref(tok, parts):
        if tok.text not in handles:
            raise _error(f"unknown flow handle {tok.text!r}", tok.span)
        if len(parts) != 1:
            raise _error("expected handle.field", tok.span)
        if parts[0] not in flow.names:
            raise _error(f"unknown field {parts[0]!r} in {flow.name}", tok.span)
        return Ref(handles[tok.text], parts[0])

    ep = _ExprParser(ts, ref)
    while not ts.accept("}"):
        tok = ts.peek
        if ts.at("input", "output"):
            side = "in" if ts.next().text == "input" else "out"
            tname = ts.ident("state type")
            if tname.text != flow.name:
                raise _error(f"unknown flow type {tname.text!r}", tname.span)
            h = ts.ident("handle name")
            if side in handles.values():
                raise _error(f"second {tok.text} declaration", tok.span)
            handles[h.text] = side
            ts.expect(";")
        elif ts.accept("constraint"):
            block = ts.accept("{") is not None
            while True:
                start = ts.peek.span
                c = ep.expr()
                try:
                    typecheck(flow, c)
                except ValidationError as e:
                    raise _error(str(e), start) from None
                constraints.append(c)
                ts.expect(";")
                if not block or ts.accept("}"):
                    break
        elif ts.accept("observe"):
            if observed:
                raise _error("second observe clause", tok.span)
            observed = True
            if ts.peek.kind == "ident":
                gate = ts.next().text
            ts.expect("(")
            items = []
            if not ts.at(")"):
                items.append(ep.term())
                while ts.accept(","):
                    items.append(ep.term())
            ts.expect(")")
            ts.expect(";")
            for it in items:
                if not isinstance(it, Ref):
                    raise _error("observe lists field references only", tok.span)
            projection = tuple(items)
        else:
            ts.fail(f"expected 'input', 'output', 'constraint' or 'observe', found {ts.describe(tok)}")
    has_in = "in" in handles.values()
    has_out = "out" in handles.values()
    a = ActionDef(name, has_in, has_out, tuple(constraints), projection, gate)
    for c in constraints:
        for r in refs(c):
            if (r.side == "in" and not has_in) or (r.side == "out" and not has_out):
                raise _error(f"{name} references {r} without declaring it", ts.peek.span)
    return a


def unparse_pss_model(m: ConstraintModel) -> str:
    lines = [f"model {m.name};", ""]
    seen = []
    for f in m.flow.fields[1:]:
        if f.domain not in seen:
            seen.append(f.domain)
            lines.append(f"enum {f.domain} {{ {', '.join(f.values)} }}")
    lines.append("")
    lines.append(f"state {m.flow.name} {{")
    for f in m.flow.fields[1:]:
        lines.append(f"    {f.domain} {f.name};")
    lines.append("}")
    names = ("in_state", "out_state")
    for a in sorted(m.actions, key=lambda a: a.name):
        lines.append("")
        lines.append(f"action {a.name} {{")
        if a.has_input:
            lines.append(f"    input {m.flow.name} in_state;")
        if a.has_output:
            lines.append(f"    output {m.flow.name} out_state;")
        for c in a.constraints:
            lines.append(f"    constraint {_show(c, names)};")
        gate = f"{a.gate}" if a.gate else ""
        lines.append(f"    observe {gate}({', '.join(_show(r, names) for r in a.projection)});")
        lines.append("}")
    return "\n".join(lines) + "\n"


# -- intents --------------------------------------------------------------------------


def parse_vi(text: str, model: ConstraintModel | None = None, file: str = "<intent>") -> VerificationIntent:
    ts = TokenStream(text, file)
    if ts.peek.kind == "eof":
        raise _error("empty intent", ts.peek.span)
    ts.expect("intent")
    name = ts.ident("intent name").text
    ts.expect("{")
    handles: dict[str, str] = {}
    spans = {}
    activity = None
    constraints: dict[str, list] = {}
    binds: list[tuple[str, str]] = []
    bind_span = None

    def ref(tok, parts):
        if tok.text not in handles:
            raise _error(f"unknown handle {tok.text!r}", tok.span)
        if len(parts) != 2 or parts[0] not in ("in", "out"):
            raise _error("expected handle.in.field or handle.out.field", tok.span)
        return (tok.text, Ref(parts[0], parts[1]))

    ep = _ExprParser(ts, ref)
    while not ts.accept("}"):
        tok = ts.peek
        if ts.accept("activity"):
            if activity is not None:
                raise _error("second activity block", tok.span)
            ts.expect("{")
            items = []
            while not ts.accept("}"):
                items.append(_parse_stmt(ts, handles))
            if not items:
                raise _error("empty activity", tok.span)
            activity = items[0] if len(items) == 1 else Seq(tuple(items))
        elif ts.accept("constraint"):
            start = ts.peek.span
            e = ep.expr()
            ts.expect(";")
            owners = {h for h, _ in _vi_refs(e)}
            if len(owners) != 1:
                raise _error("a constraint must mention exactly one handle", start)
            h = owners.pop()
            c = _strip(e)
            if model is not None:
                try:
                    typecheck(model.flow, c)
                except ValidationError as err:
                    raise _error(str(err), start) from None
            constraints.setdefault(h, []).append(c)
        elif ts.accept("bind"):
            a = ts.ident("handle")
            b = ts.ident("handle")
            ts.expect(";")
            for t in (a, b):
                if t.text not in handles:
                    raise _error(f"unknown handle {t.text!r}", t.span)
            binds.append((a.text, b.text))
            bind_span = bind_span or tok.span
        else:
            act = ts.ident("action type, 'activity', 'constraint' or 'bind'")
            h = ts.ident("handle name")
            ts.expect(";")
            if h.text in handles:
                raise _error(f"duplicate handle {h.text!r}", h.span)
            if model is not None:
                try:
                    model.action(act.text)
                except KeyError:
                    raise _error(f"unknown action {act.text!r}", act.span) from None
            handles[h.text] = act.text
            spans[h.text] = h.span
    if activity is None:
        raise _error("missing activity block", ts.peek.span)
    try:
        vi = VerificationIntent(name, handles, activity, {h: tuple(cs) for h, cs in constraints.items()}, binds)
        if model is not None:
            vi.validate(model)
    except ValidationError as e:
        span = bind_span if "bind" in str(e) else ts.peek.span
        raise _error(str(e), span) from None
    return vi


def _parse_stmt(ts: TokenStream, handles):
    tok = ts.peek
    if ts.at("select", "schedule", "sequence") and ts.ahead(1).text == "{":
        kind = ts.next().text
        ts.expect("{")
        items = []
        while not ts.accept("}"):
            items.append(_parse_stmt(ts, handles))
        if not items:
            raise _error(f"empty {kind} block", tok.span)
        if kind == "sequence":
            return items[0] if len(items) == 1 else Seq(tuple(items))
        return Select(tuple(items)) if kind == "select" else Schedule(tuple(items))
    h = ts.ident("handle")
    ts.expect(";")
    if h.text not in handles:
        raise _error(f"undeclared handle {h.text!r}", h.span)
    return Leaf(h.text)


def _vi_refs(e):
    if isinstance(e, tuple):
        return [e]
    if isinstance(e, Lit):
        return []
    if isinstance(e, Cmp):
        return _vi_refs(e.left) + _vi_refs(e.right)
    if isinstance(e, Not):
        return _vi_refs(e.arg)
    return [r for a in e.args for r in _vi_refs(a)]


def _strip(e):
    if isinstance(e, tuple):
        return e[1]
    if isinstance(e, Lit):
        return e
    if isinstance(e, Cmp):
        return Cmp(e.op, _strip(e.left), _strip(e.right))
    if isinstance(e, Not):
        return Not(_strip(e.arg))
    return BoolOp(e.op, tuple(_strip(a) for a in e.args))


def _stmt_lines(node, indent: str) -> list[str]:
    if isinstance(node, Leaf):
        return [f"{indent}{node.handle};"]
    kind, kids = (
        ("sequence", node.items)
        if isinstance(node, Seq)
        else ("select", node.branches)
        if isinstance(node, Select)
        else ("schedule", node.branches)
    )
    out = [f"{indent}{kind} {{"]
    for k in kids:
        out.extend(_stmt_lines(k, indent + "    "))
    out.append(f"{indent}}}")
    return out


def unparse_vi(vi: VerificationIntent) -> str:
    lines = [f"intent {vi.name} {{"]
    for h in vi.handles:
        lines.append(f"    {vi.handles[h]} {h};")
    lines.append("    activity {")
    top = vi.activity.items if isinstance(vi.activity, Seq) else (vi.activity,)
    for node in top:
        lines.extend(_stmt_lines(node, "        "))
    lines.append("    }")
    for h in sorted(vi.constraints):
        for c in vi.constraints[h]:
            lines.append(f"    constraint {_show(c, handle=h)};")
    for a, b in vi.binds:
        lines.append(f"    bind {a} {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
