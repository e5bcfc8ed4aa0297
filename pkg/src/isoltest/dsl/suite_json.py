"""JSON serialization of test suites.

Layout::

    {"format": "isoltest-suite", "version": 1, "model_digest": "...",
     "scenario_id": "1", "tests": [{"id": "t0", "tree": NODE}, ...]}

    NODE = {"kind": "stim", "label": "Read !1 !secure !privileged", "next": NODE}
         | {"kind": "obs", "branches": [{"label": "...", "next": NODE}, ...]}
         | {"kind": "verdict", "verdict": "pass" | "fail" | "inconclusive"}
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..lts import Label, Lts, aut_dumps
from ..testgen import Leaf, Obs, Stim, TestCase, Verdict
from .diagnostics import Diagnostic, DslError, SourceSpan

FORMAT = "isoltest-suite"
VERSION = 1


@dataclass
class Suite:
    scenario_id: str
    model_digest: str
    tests: list[TestCase] = field(default_factory=list)


def model_digest(l: Lts) -> str:
    return hashlib.sha256(aut_dumps(l.canonical()).encode()).hexdigest()[:16]


def _node_json(node) -> dict:
    if isinstance(node, Leaf):
        return {"kind": "verdict", "verdict": node.verdict.value}
    if isinstance(node, Stim):
        return {"kind": "stim", "label": str(node.label), "next": _node_json(node.child)}
    return {
        "kind": "obs",
        "branches": [{"label": str(lab), "next": _node_json(child)} for lab, child in sorted(node.branches, key=lambda b: str(b[0]))],
    }


def suite_to_json(suite: Suite) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "model_digest": suite.model_digest,
        "scenario_id": suite.scenario_id,
        "tests": [{"id": t.id, "tree": _node_json(t.root)} for t in suite.tests],
    }


def write_suite(suite: Suite, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(suite_to_json(suite), fh, indent=1, sort_keys=True)
        fh.write("\n")


class _Schema:
    def fail(self, path: str, message: str):
        raise DslError([Diagnostic("error", f"{path}: {message}")])

    def get(self, obj, key, kind, path):
        if not isinstance(obj, dict):
            self.fail(path, "expected an object")
        if key not in obj:
            self.fail(f"{path}.{key}", "missing")
        v = obj[key]
        if not isinstance(v, kind):
            self.fail(f"{path}.{key}", f"expected {kind.__name__}")
        return v

    def label(self, text, path) -> Label:
        try:
            return Label.parse(text)
        except ValueError as e:
            self.fail(path, str(e))

    def node(self, obj, path):
        kind = self.get(obj, "kind", str, path)
        if kind == "verdict":
            v = self.get(obj, "verdict", str, path)
            try:
                return Leaf(Verdict(v))
            except ValueError:
                self.fail(f"{path}.verdict", f"unknown verdict {v!r}")
        if kind == "stim":
            lab = self.label(self.get(obj, "label", str, path), f"{path}.label")
            return Stim(lab, self.node(self.get(obj, "next", dict, path), f"{path}.next"))
        if kind == "obs":
            branches = []
            for k, br in enumerate(self.get(obj, "branches", list, path)):
                bp = f"{path}.branches[{k}]"
                lab = self.label(self.get(br, "label", str, bp), f"{bp}.label")
                branches.append((lab, self.node(self.get(br, "next", dict, bp), f"{bp}.next")))
            return Obs(tuple(branches))
        self.fail(f"{path}.kind", f"unknown node kind {kind!r}")


def suite_from_json(data) -> Suite:
    sc = _Schema()
    if sc.get(data, "format", str, "$") != FORMAT:
        sc.fail("$.format", f"expected {FORMAT!r}")
    if sc.get(data, "version", int, "$") != VERSION:
        sc.fail("$.version", f"unsupported version, expected {VERSION}")
    digest = sc.get(data, "model_digest", str, "$")
    scenario = sc.get(data, "scenario_id", str, "$")
    tests = []
    for k, t in enumerate(sc.get(data, "tests", list, "$")):
        path = f"$.tests[{k}]"
        tid = sc.get(t, "id", str, path)
        tests.append(TestCase(tid, sc.node(sc.get(t, "tree", dict, path), f"{path}.tree")))
    return Suite(scenario, digest, tests)


def read_suite(path, expected_digest: str | None = None) -> tuple[Suite, list[Diagnostic]]:
    """Load a suite; a digest different from ``expected_digest`` yields a warning."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        span = SourceSpan(str(path), e.lineno, e.colno, e.lineno, e.colno + 1)
        raise DslError([Diagnostic("error", f"invalid JSON: {e.msg}", span)]) from None
    suite = suite_from_json(data)
    warnings = []
    if expected_digest is not None and suite.model_digest != expected_digest:
        warnings.append(
            Diagnostic("warning", f"suite was generated for model {suite.model_digest}, running against {expected_digest}")
        )
    return suite, warnings
