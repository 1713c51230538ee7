"""Independent checker for serialized proof traces.

Works only from the JSON form of a trace and the goal words.  Rewrite
legality is decided by matching against relator words spelled out here
from literals, so nothing is shared with the search module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .sheaves import DObject, NotReducible, apply_generator, parse_object
from .words import Word, parse_word


class TraceError(ValueError):
    """A trace step does not follow from the state it is applied to."""

    def __init__(self, index: int, message: str):
        super().__init__(f"step {index}: {message}")
        self.index = index


def _inverse(w: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def _reduce(w: Word) -> Word:
    out: list = []
    for x in w:
        if out and out[-1] == (x[0], -x[1]):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _basic_relators(n: int) -> list[Word]:
    words = [parse_word(f"a b{i} a b{i}' a' b{i}'", n) for i in range(1, n + 1)]
    words += [
        parse_word(f"b{i} b{j} b{i}' b{j}'", n) for i in range(1, n + 1) for j in range(i + 1, n + 1)
    ]
    return words


def is_legal_rewrite(old: Word, new: Word, n: int) -> bool:
    """True iff ``old new^-1`` is, letter for letter, a cyclic rotation of a
    braid or beta-commutation relator word or of its inverse."""
    w = tuple(old) + _inverse(tuple(new))
    for r in _basic_relators(n):
        for base in (r, _inverse(r)):
            if len(base) != len(w):
                continue
            doubled = base + base
            if any(doubled[s : s + len(w)] == w for s in range(len(base))):
                return True
    return False


@dataclass
class Replay:
    left: DObject
    right: DObject
    rewrites: list[tuple[Word, Word]]


def replay(lhs: str, rhs: str, obj: str, n: int, trace: list[dict]) -> Replay:
    """Replay ``trace`` from the goal ``lhs(obj) ~= rhs(obj)``.

    Raises :class:`TraceError` at the first illegal step and when the
    words are not both empty at the end.
    """
    words = {"lhs": list(parse_word(lhs, n)), "rhs": list(parse_word(rhs, n))}
    start = parse_object(obj, n)
    objs = {"lhs": start, "rhs": start}
    rewrites = []
    for k, s in enumerate(trace):
        side = s["side"]
        if side not in words:
            raise TraceError(k, f"unknown side {side!r}")
        w = words[side]
        kind = s["kind"]
        pos = s.get("position", -1)
        if kind == "evaluate":
            x = parse_word(s["letter"], n)[0]
            if not w or w[-1] != x or pos != len(w) - 1:
                raise TraceError(k, "evaluated letter is not the rightmost one")
            if str(objs[side]) != s["before"]:
                raise TraceError(k, f"object is {objs[side]}, trace says {s['before']}")
            try:
                img = apply_generator(x, objs[side])
            except NotReducible as exc:
                raise TraceError(k, f"rule does not fire: {exc}") from None
            if str(img) != s["after"]:
                raise TraceError(k, f"image is {img}, trace says {s['after']}")
            w.pop()
            objs[side] = img
        elif kind == "cancel":
            pair = tuple(w[pos : pos + 2])
            if len(pair) != 2 or pair[0] != (pair[1][0], -pair[1][1]) or pair != parse_word(s["old"], n):
                raise TraceError(k, "no inverse pair at the stated position")
            del w[pos : pos + 2]
        elif kind == "rewrite":
            old, new = parse_word(s["old"], n), parse_word(s["new"], n)
            if tuple(w[pos : pos + len(old)]) != old:
                raise TraceError(k, "subword not found at the stated position")
            if not is_legal_rewrite(old, new, n):
                raise TraceError(k, f"{s['old']} -> {s['new']} is not a braid or commutation move")
            w[pos : pos + len(old)] = list(new)
            rewrites.append((old, new))
        elif kind == "transfer":
            x = parse_word(s["letter"], n)[0]
            other = "rhs" if side == "lhs" else "lhs"
            if not w or w[0] != x:
                raise TraceError(k, "transferred letter is not the leftmost one")
            w.pop(0)
            words[other].insert(0, (x[0], -x[1]))
        else:
            raise TraceError(k, f"unknown step kind {kind!r}")
    if words["lhs"] or words["rhs"]:
        raise TraceError(len(trace), "words not empty at the end of the trace")
    return Replay(objs["lhs"], objs["rhs"], rewrites)


def _unshift(x: DObject) -> DObject:
    return x.shifted(-x.shift)


def replay_verdict(record: dict) -> tuple[str, Optional[int]]:
    """Recompute ``(status, m)`` of a closed sheaf record from its trace alone."""
    goal = record["goal"]
    n = record["n"]
    r = replay(goal["lhs"], goal["rhs"], goal["object"], n, record["trace"])
    if r.left == r.right:
        return "verified", None
    if record["relator"].startswith("star[") and _unshift(r.left) == _unshift(r.right):
        return "verified-up-to-central", r.left.shift - r.right.shift
    if n == 2:
        sw = r.right
        sw = DObject("k", 3 - sw.data, sw.shift, 2) if sw.kind == "k" else DObject("O", sw.data[::-1], sw.shift, 2)
        if r.left == sw:
            return "verified-up-to-involution", None
    return "mismatch", None
