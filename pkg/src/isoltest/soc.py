"""Resource-isolation domain: sources and a target exchanging requests and responses.

A request carries the source's security and privilege levels; the target
grants reads and writes only to sources whose levels dominate its own and
grants protection changes only to secure and privileged sources.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import IntEnum
from itertools import product
from typing import Iterable

from .lts import Label, Lts, SyncRule, ValidationError, hide, parallel_compose, rename, visible


class _Level(IntEnum):
    @property
    def token(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str):
        try:
            return cls[text.upper()]
        except KeyError:
            raise ValueError(f"{text!r} is not a {cls.__name__} value") from None

    def __str__(self) -> str:
        return self.token


class SecurityLevel(_Level):
    NONSECURE = 0
    SECURE = 1


class PrivilegeLevel(_Level):
    NONPRIVILEGED = 0
    PRIVILEGED = 1


class DataValue(_Level):
    DATA1 = 0
    DATA2 = 1


NONSECURE, SECURE = SecurityLevel.NONSECURE, SecurityLevel.SECURE
NONPRIV, PRIV = PrivilegeLevel.NONPRIVILEGED, PrivilegeLevel.PRIVILEGED
DATA1, DATA2 = DataValue.DATA1, DataValue.DATA2

#: Named value domains shared by the test-purpose and constraint languages.
DOMAINS: dict[str, tuple[str, ...]] = {
    "security": tuple(v.token for v in SecurityLevel),
    "privilege": tuple(v.token for v in PrivilegeLevel),
    "data": tuple(v.token for v in DataValue),
}
VALUE_DOMAIN = {v: d for d, vs in DOMAINS.items() for v in vs}
VALUE_RANK = {v: i for vs in DOMAINS.values() for i, v in enumerate(vs)}

REQUEST_GATES = ("Read", "Write", "Protection")
RESPONSE_GATES = (
    "Grant_Read",
    "Grant_Write",
    "Grant_Protection",
    "Reject_Read",
    "Reject_Write",
    "Reject_Protection",
)
CONFIG_GATE = "Config"
GATES = REQUEST_GATES + RESPONSE_GATES + (CONFIG_GATE,)
#: Offer sorts per gate (the leading ``ip`` is the initiator id).
GATE_SIGNATURES: dict[str, tuple[str, ...]] = {
    "Read": ("ip", "security", "privilege"),
    "Write": ("ip", "security", "privilege", "data"),
    "Protection": ("ip", "security", "privilege", "security", "privilege"),
    "Grant_Read": ("ip", "data"),
    "Grant_Write": ("ip",),
    "Grant_Protection": ("ip", "security", "privilege"),
    "Reject_Read": ("ip",),
    "Reject_Write": ("ip",),
    "Reject_Protection": ("ip",),
    "Config": ("ip", "security", "privilege", "data"),
}
CONTROLLABLE_GATES = frozenset(REQUEST_GATES + (CONFIG_GATE,))


def valid_access(tgt_sec, src_sec, tgt_priv, src_priv) -> bool:
    """Read/write permission: the source dominates the target on both levels."""
    return src_sec >= tgt_sec and src_priv >= tgt_priv


def protection_change_allowed(src_sec, src_priv) -> bool:
    return src_sec == SECURE and src_priv == PRIV


@dataclass(frozen=True)
class IpId:
    ordinal: int
    kind: str = "source"

    def __post_init__(self):
        if self.kind not in ("source", "target"):
            raise ValueError(f"bad ip kind {self.kind!r}")

    @property
    def is_source(self) -> bool:
        return self.kind == "source"


@dataclass(frozen=True, order=True)
class SourceConfig:
    security: SecurityLevel = SECURE
    privilege: PrivilegeLevel = PRIV
    data: DataValue = DATA1


@dataclass(frozen=True, order=True)
class TargetConfig:
    data: DataValue = DATA1
    security: SecurityLevel = NONSECURE
    privilege: PrivilegeLevel = NONPRIV


ALL_SOURCE_CONFIGS = tuple(
    SourceConfig(s, p, d) for s, p, d in product(SecurityLevel, PrivilegeLevel, DataValue)
)
# most capable configuration first, so one default source is secure and privileged
DEFAULT_SOURCE_ORDER = tuple(sorted(ALL_SOURCE_CONFIGS, key=lambda c: (-c.security, -c.privilege, c.data)))


def default_sources(n: int) -> tuple[SourceConfig, ...]:
    return tuple(DEFAULT_SOURCE_ORDER[k % len(DEFAULT_SOURCE_ORDER)] for k in range(n))


@dataclass(frozen=True)
class SocParams:
    n_sources: int = 1
    multitasking: bool = False
    sources: tuple[SourceConfig, ...] = ()
    target: TargetConfig = field(default_factory=TargetConfig)

    def __post_init__(self):
        if self.n_sources < 1:
            raise ValidationError("n_sources must be at least 1")
        if not self.sources:
            object.__setattr__(self, "sources", default_sources(self.n_sources))
        object.__setattr__(self, "sources", tuple(self.sources))
        if len(self.sources) != self.n_sources:
            raise ValidationError(f"{self.n_sources} sources declared but {len(self.sources)} configurations given")

    def source_ids(self) -> list[IpId]:
        return [IpId(k + 1) for k in range(self.n_sources)]

    @property
    def target_id(self) -> IpId:
        return IpId(self.n_sources + 1, "target")


# -- component automata --------------------------------------------------------


def source_lts(ip: int, config: SourceConfig, multitasking: bool) -> Lts:
    """One source: idle, then await the response of the request it issued."""
    configs = ALL_SOURCE_CONFIGS if multitasking else (config,)
    phases = ("idle", "read", "write", "protection")
    index = {(ph, c): k for k, (ph, c) in enumerate(product(phases, configs))}
    edges = []
    for c in configs:
        idle = index["idle", c]
        s, p, d = c.security.token, c.privilege.token, c.data.token
        edges.append((idle, visible("Read", ip, s, p), index["read", c]))
        edges.append((idle, visible("Write", ip, s, p, d), index["write", c]))
        for ns, np_ in product(SecurityLevel, PrivilegeLevel):
            edges.append((idle, visible("Protection", ip, s, p, ns.token, np_.token), index["protection", c]))
            edges.append((index["protection", c], visible("Grant_Protection", ip, ns.token, np_.token), idle))
        for dv in DataValue:
            edges.append((index["read", c], visible("Grant_Read", ip, dv.token), idle))
        edges.append((index["read", c], visible("Reject_Read", ip), idle))
        edges.append((index["write", c], visible("Grant_Write", ip), idle))
        edges.append((index["write", c], visible("Reject_Write", ip), idle))
        edges.append((index["protection", c], visible("Reject_Protection", ip), idle))
        if multitasking:
            for c2 in configs:
                if c2 != c:
                    label = visible(CONFIG_GATE, ip, c2.security.token, c2.privilege.token, c2.data.token)
                    edges.append((idle, label, index["idle", c2]))
    return Lts(len(index), index["idle", config], edges)


MUTATIONS = (
    "drop-security-check",
    "drop-privilege-check",
    "allow-unprivileged-protection",
    "stuck-grant-write",
)


@dataclass(frozen=True)
class _Rules:
    mutation: str | None = None

    def access(self, tgt_sec, src_sec, tgt_priv, src_priv) -> bool:
        if self.mutation == "drop-security-check":
            return src_priv >= tgt_priv
        if self.mutation == "drop-privilege-check":
            return src_sec >= tgt_sec
        return valid_access(tgt_sec, src_sec, tgt_priv, src_priv)

    def protection(self, src_sec, src_priv) -> bool:
        if self.mutation == "allow-unprivileged-protection":
            return src_sec == SECURE
        return protection_change_allowed(src_sec, src_priv)

    def written(self, old, new):
        return old if self.mutation == "stuck-grant-write" else new


def target_lts(ids: Iterable[int], initial: TargetConfig, rules: _Rules = _Rules()) -> Lts:
    """The target: accept one request in the central state, then answer it."""
    ids = list(ids)
    index: dict[tuple, int] = {}

    def sid(key):
        return index.setdefault(key, len(index))

    init = sid(("idle", initial.data, initial.security, initial.privilege))
    edges = []
    levels = list(product(SecurityLevel, PrivilegeLevel))
    for d, s, p in product(DataValue, SecurityLevel, PrivilegeLevel):
        idle = sid(("idle", d, s, p))
        for ip, (t, q) in product(ids, levels):
            pend = sid(("read", d, s, p, ip, t, q))
            edges.append((idle, visible("Read", ip, t.token, q.token), pend))
            if rules.access(s, t, p, q):
                edges.append((pend, visible("Grant_Read", ip, d.token), idle))
            else:
                edges.append((pend, visible("Reject_Read", ip), idle))
            for w in DataValue:
                pend = sid(("write", d, s, p, ip, t, q, w))
                edges.append((idle, visible("Write", ip, t.token, q.token, w.token), pend))
                if rules.access(s, t, p, q):
                    after = sid(("idle", rules.written(d, w), s, p))
                    edges.append((pend, visible("Grant_Write", ip), after))
                else:
                    edges.append((pend, visible("Reject_Write", ip), idle))
            for ns, np_ in levels:
                pend = sid(("protection", d, s, p, ip, t, q, ns, np_))
                edges.append((idle, visible("Protection", ip, t.token, q.token, ns.token, np_.token), pend))
                if rules.protection(t, q):
                    after = sid(("idle", d, ns, np_))
                    edges.append((pend, visible("Grant_Protection", ip, ns.token, np_.token), after))
                else:
                    edges.append((pend, visible("Reject_Protection", ip), idle))
    return Lts(len(index), init, edges)


def _channel(lab: Label) -> Label:
    # one private gate per (gate, initiator) pair gives binary rendezvous
    if lab.is_tau or lab.gate == CONFIG_GATE:
        return lab
    return Label(f"{lab.gate}__{lab.offers[0]}", lab.offers)


def _unchannel(lab: Label) -> Label:
    return Label(lab.gate.split("__")[0], lab.offers) if "__" in lab.gate else lab


def _build(p: SocParams, rules: _Rules, limit: int | None) -> Lts:
    ids = [ip.ordinal for ip in p.source_ids()]
    components = [source_lts(ip, cfg, p.multitasking) for ip, cfg in zip(ids, p.sources)]
    components.append(target_lts(ids, p.target, rules))
    components = [rename(c, _channel) for c in components]
    target = len(components) - 1
    sync = [
        SyncRule(f"{g}__{ip}", {k, target})
        for k, ip in enumerate(ids)
        for g in REQUEST_GATES + RESPONSE_GATES
    ]
    return rename(parallel_compose(components, sync, limit=limit), _unchannel)


def build_soc_lts(p: SocParams, limit: int | None = None) -> Lts:
    return _build(p, _Rules(), limit)


def mutate(p: SocParams, mutation: str, limit: int | None = None) -> Lts:
    if mutation not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutation!r}; known: {', '.join(MUTATIONS)}")
    return _build(p, _Rules(mutation), limit)


def drop_id(lab: Label) -> Label:
    if lab.is_tau:
        return lab
    if lab.gate not in GATE_SIGNATURES:
        raise ValidationError(f"unknown gate {lab.gate!r}")
    return Label(lab.gate, lab.offers[1:])


def relabel_for_comparison(l: Lts) -> Lts:
    """Remove the initiator id from every label and hide configuration changes."""
    return hide(rename(l, drop_id), {CONFIG_GATE})


def eight_source_params() -> SocParams:
    return SocParams(n_sources=8, sources=ALL_SOURCE_CONFIGS)


def multitasking_params() -> SocParams:
    return SocParams(n_sources=1, multitasking=True)


def is_controllable(lab: Label) -> bool:
    return not lab.is_tau and lab.gate in CONTROLLABLE_GATES


def with_target(p: SocParams, target: TargetConfig) -> SocParams:
    return replace(p, target=target)
