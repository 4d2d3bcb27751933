"""Line-oriented text formats for instances and set-cover inputs.

Instance files::

    mssc 1
    n <n> T <T>
    pi0 <n ids>
    req <k> <k ids>      (T lines)

Set-cover files::

    setcover 1
    elements <n> sets <m>
    set <k> <k ids>      (m lines, ids 1..n)

Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

import sys
from pathlib import Path

from .core import Instance, validate_instance
from .exact import SetCoverInstance


class ParseError(ValueError):
    pass


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and not s.startswith("#"):
            out.append((no, s.split()))
    return out


def _ints(no: int, words: list[str]) -> list[int]:
    try:
        return [int(w) for w in words]
    except ValueError:
        raise ParseError(f"line {no}: expected integers, got {' '.join(words)!r}") from None


def _keyed(lines, k: int, keys: tuple[str, ...]) -> list[int]:
    """Parse ``key1 v1 key2 v2 ...`` on content line ``k``."""
    if k >= len(lines):
        raise ParseError(f"missing '{' '.join(keys)}' line")
    no, words = lines[k]
    if len(words) != 2 * len(keys) or tuple(words[0::2]) != keys:
        raise ParseError(f"line {no}: expected '{' <int> '.join(keys)} <int>'")
    return _ints(no, words[1::2])


def _counted(no: int, words: list[str], key: str) -> list[int]:
    if not words or words[0] != key:
        raise ParseError(f"line {no}: expected a '{key}' line")
    vals = _ints(no, words[1:])
    if not vals or vals[0] != len(vals) - 1:
        raise ParseError(f"line {no}: count does not match the number of ids")
    return vals[1:]


def _magic(lines, word: str) -> None:
    if not lines or lines[0][1] != [word, "1"]:
        where = f"line {lines[0][0]}" if lines else "input"
        raise ParseError(f"{where}: expected header '{word} 1'")


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance file."""
    lines = _content_lines(text)
    _magic(lines, "mssc")
    n, T = _keyed(lines, 1, ("n", "T"))
    if len(lines) < 3 or lines[2][1][:1] != ["pi0"]:
        raise ParseError("missing 'pi0' line")
    no, words = lines[2]
    pi0 = _ints(no, words[1:])
    if len(pi0) != n:
        raise ParseError(f"line {no}: pi0 lists {len(pi0)} ids, expected {n}")
    reqs = [_counted(no, words, "req") for no, words in lines[3:]]
    if len(reqs) != T:
        raise ParseError(f"found {len(reqs)} requests, expected {T}")
    for (no, _), r in zip(lines[3:], reqs):
        if len(set(r)) != len(r):
            raise ParseError(f"line {no}: duplicate ids in request")
    inst = Instance(n, tuple(pi0), tuple(frozenset(r) for r in reqs))
    problems = validate_instance(inst)
    if problems:
        raise ParseError("; ".join(problems))
    return inst


def format_instance(inst: Instance, comment: str | None = None) -> str:
    lines = ["mssc 1"]
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(f"n {inst.n} T {inst.T}")
    lines.append("pi0 " + " ".join(map(str, inst.pi0)))
    for r in inst.requests:
        lines.append(" ".join(["req", str(len(r)), *map(str, sorted(r))]))
    return "\n".join(lines) + "\n"


def parse_setcover(text: str) -> SetCoverInstance:
    lines = _content_lines(text)
    _magic(lines, "setcover")
    n, m = _keyed(lines, 1, ("elements", "sets"))
    sets = [_counted(no, words, "set") for no, words in lines[2:]]
    if len(sets) != m:
        raise ParseError(f"found {len(sets)} sets, expected {m}")
    try:
        return SetCoverInstance(n, tuple(frozenset(s) for s in sets))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_setcover(sc: SetCoverInstance) -> str:
    lines = ["setcover 1", f"elements {sc.n_elements} sets {sc.m}"]
    for s in sc.sets:
        lines.append(" ".join(["set", str(len(s)), *map(str, sorted(s))]))
    return "\n".join(lines) + "\n"


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")
