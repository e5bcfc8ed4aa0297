"""Builtin scenarios: test purposes and intents for scenarios 1-4, plus the extended tour."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib.resources import files
from itertools import product as cartesian

from . import soc
from .bisim import minimize
from .lts import Lts
from .dsl.pss_text import parse_vi
from .dsl.tp_text import parse_tp
from .pss import ConstraintModel, VerificationIntent, monolithic_ri_model
from .testgen import (
    Ctg,
    EventPattern,
    OfferPattern,
    PAccept,
    PEvent,
    PSelect,
    PSeq,
    TestCase,
    TestPurpose,
    extract_ctg,
    extract_test_suite,
    product,
)

SCENARIO_IDS = (1, 2, 3, 4)
_CATALOG = files("isoltest.catalog")


def catalog_text(name: str) -> str:
    return _CATALOG.joinpath(name).read_text()


def _check(k: int) -> None:
    if k not in SCENARIO_IDS:
        raise KeyError(f"unknown scenario {k}; known: {', '.join(map(str, SCENARIO_IDS))}")


def load_tp(k: int) -> TestPurpose:
    _check(k)
    return parse_tp(catalog_text(f"scenario{k}.tp"), f"scenario{k}.tp")


def load_vi(k: int, model: ConstraintModel | None = None) -> VerificationIntent:
    _check(k)
    return parse_vi(catalog_text(f"scenario{k}.vi"), model or monolithic_ri_model(), f"scenario{k}.vi")


@dataclass(frozen=True)
class ScenarioCatalog:
    purposes: dict[int, TestPurpose]
    intents: dict[int, VerificationIntent]
    extended: TestPurpose


@lru_cache(maxsize=1)
def catalog() -> ScenarioCatalog:
    m = monolithic_ri_model()
    return ScenarioCatalog(
        {k: load_tp(k) for k in SCENARIO_IDS},
        {k: load_vi(k, m) for k in SCENARIO_IDS},
        extended_tp(),
    )


# -- extended scenario --------------------------------------------------------------

TARGET_ORDER = (
    (soc.NONSECURE, soc.NONPRIV),
    (soc.NONSECURE, soc.PRIV),
    (soc.SECURE, soc.NONPRIV),
    (soc.SECURE, soc.PRIV),
)


def _ev(gate: str, *offers) -> PEvent:
    pats = tuple(OfferPattern("any") if o is None else OfferPattern("lit", o) for o in offers)
    return PEvent(EventPattern(gate, pats))


def _either(*events) -> PSelect:
    return PSelect(tuple(events))


def extended_tp() -> TestPurpose:
    """Every source configuration writes, reads and requests protection against every target level.

    Targets are visited from the least to the most protected; for each, the
    target is first set by a secure and privileged source, then the source
    configurations are tried in lexicographic (security, privilege, data) order.
    """
    steps = []
    for ts, tp in TARGET_ORDER:
        steps.append(_ev("Protection", None, "secure", "privileged", ts.token, tp.token))
        steps.append(_ev("Grant_Protection", None, ts.token, tp.token))
        for s, p, d in cartesian(soc.SecurityLevel, soc.PrivilegeLevel, soc.DataValue):
            steps.append(_ev("Write", None, s.token, p.token, d.token))
            steps.append(_either(_ev("Grant_Write", None), _ev("Reject_Write", None)))
            steps.append(_ev("Read", None, s.token, p.token))
            steps.append(_either(_ev("Grant_Read", None, None), _ev("Reject_Read", None)))
            steps.append(_ev("Protection", None, s.token, p.token, ts.token, tp.token))
            steps.append(_either(_ev("Grant_Protection", None, None, None), _ev("Reject_Protection", None)))
    steps.append(PAccept())
    return TestPurpose("extended", PSeq(tuple(steps)))


# -- generation pipeline ------------------------------------------------------------


@lru_cache(maxsize=1)
def generation_model() -> Lts:
    """Strongly minimized 8-source SoC model that every scenario CTG is generated from."""
    return minimize(soc.build_soc_lts(soc.eight_source_params()), "strong")


def ctg_for(tp: TestPurpose, model: Lts | None = None, limit: int | None = None) -> Ctg:
    return extract_ctg(product(model if model is not None else generation_model(), tp, limit))


@lru_cache(maxsize=None)
def scenario_ctg(k: int) -> Ctg:
    return ctg_for(catalog().purposes[k])


@lru_cache(maxsize=None)
def scenario_suite(k: int) -> tuple[TestCase, ...]:
    return tuple(extract_test_suite(scenario_ctg(k), prefix=f"s{k}_t"))
