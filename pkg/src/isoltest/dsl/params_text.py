"""``key = value`` text format for SoC parameters.

Example::

    sources = 2
    multitasking = false
    source.1 = secure privileged data1
    source.2 = nonsecure privileged data2
    target = data1 nonsecure nonprivileged

Unlisted sources get the default configurations; ``#`` starts a comment.
"""

from __future__ import annotations

from ..lts import ValidationError
from ..soc import DataValue, PrivilegeLevel, SecurityLevel, SocParams, SourceConfig, TargetConfig, default_sources
from .diagnostics import Diagnostic, DslError, SourceSpan


def _err(file, line, col, message, width=1):
    return DslError([Diagnostic("error", message, SourceSpan(file, line, col, line, col + max(width, 1)))])


def parse_soc_params(text: str, file: str = "<params>") -> SocParams:
    entries: dict[str, tuple[str, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise _err(file, lineno, len(raw) - len(raw.lstrip()) + 1, "expected 'key = value'", len(line.strip()))
        key, value = line.split("=", 1)
        col = raw.index("=") + 2 + (len(value) - len(value.lstrip()))
        key = key.strip()
        if key in entries:
            raise _err(file, lineno, 1, f"duplicate key {key!r}", len(key))
        entries[key] = (value.strip(), lineno, col)
    if not entries:
        raise DslError([Diagnostic("error", "empty parameter file", SourceSpan(file, 1, 1, 1, 1))])

    def num(key, default):
        if key not in entries:
            return default
        v, ln, col = entries[key]
        if not v.isdigit():
            raise _err(file, ln, col, f"{key} must be a non-negative integer", len(v))
        return int(v)

    n = num("sources", 1)
    if n < 1:
        v, ln, col = entries["sources"]
        raise _err(file, ln, col, "sources must be at least 1", len(v))
    multitasking = False
    if "multitasking" in entries:
        v, ln, col = entries["multitasking"]
        if v not in ("true", "false"):
            raise _err(file, ln, col, "multitasking must be true or false", len(v))
        multitasking = v == "true"
    sources = list(default_sources(n))
    target = TargetConfig()
    for key, (v, ln, col) in entries.items():
        words = v.split()
        try:
            if key.startswith("source."):
                idx = key[len("source."):]
                if not idx.isdigit() or not 1 <= int(idx) <= n:
                    raise _err(file, ln, 1, f"source index out of range in {key!r}", len(key))
                if len(words) != 3:
                    raise ValueError("expected '<security> <privilege> <data>'")
                sources[int(idx) - 1] = SourceConfig(SecurityLevel.parse(words[0]), PrivilegeLevel.parse(words[1]), DataValue.parse(words[2]))
            elif key == "target":
                if len(words) != 3:
                    raise ValueError("expected '<data> <security> <privilege>'")
                target = TargetConfig(DataValue.parse(words[0]), SecurityLevel.parse(words[1]), PrivilegeLevel.parse(words[2]))
            elif key not in ("sources", "multitasking"):
                raise _err(file, ln, 1, f"unknown key {key!r}", len(key))
        except ValueError as e:
            raise _err(file, ln, col, str(e), len(v)) from None
    try:
        return SocParams(n, multitasking, tuple(sources), target)
    except ValidationError as e:
        raise DslError([Diagnostic("error", str(e), SourceSpan(file, 1, 1, 1, 1))]) from None


def unparse_soc_params(p: SocParams) -> str:
    lines = [f"sources = {p.n_sources}", f"multitasking = {'true' if p.multitasking else 'false'}"]
    for k, c in enumerate(p.sources, start=1):
        lines.append(f"source.{k} = {c.security.token} {c.privilege.token} {c.data.token}")
    t = p.target
    lines.append(f"target = {t.data.token} {t.security.token} {t.privilege.token}")
    return "\n".join(lines) + "\n"
