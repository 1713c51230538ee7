"""Closed object calculus on the cycle X_n of projective lines.

Objects are shifted line bundles ``O(D)[s]`` with ``D`` supported on the
marked smooth points ``x_1..x_n`` (``x_i`` on the i-th component) and
shifted skyscrapers ``k(i)[s]``.  Twists act by the rewrite rules in
:func:`apply_generator`; anything the rules do not cover is reported as
:class:`NotReducible` rather than guessed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

from .exact import rank
from .words import ALPHA, CENTRAL, Letter, Word, check_word, format_word


class ObjectParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class CohomologyInconsistency(RuntimeError):
    """The Riemann-Roch and Serre-duality values of h^1 disagree."""


@dataclass(frozen=True, order=True)
class DObject:
    kind: str  # "O" or "k"
    data: Union[tuple, int]  # divisor coefficients for "O", point index for "k"
    shift: int = 0
    n: int = field(default=0, compare=False)

    def __post_init__(self):
        # objects are hashed very often during search
        object.__setattr__(self, "_hash", hash((self.kind, self.data, self.shift)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def line_bundle(cls, divisor: Sequence[int], shift: int = 0) -> "DObject":
        d = tuple(int(a) for a in divisor)
        return cls("O", d, shift, len(d))

    @classmethod
    def structure_sheaf(cls, n: int, shift: int = 0) -> "DObject":
        return cls.line_bundle((0,) * n, shift)

    @classmethod
    def skyscraper(cls, i: int, n: int, shift: int = 0) -> "DObject":
        if not 1 <= i <= n:
            raise ValueError(f"point {i} outside 1..{n}")
        return cls("k", i, shift, n)

    @property
    def is_line_bundle(self) -> bool:
        return self.kind == "O"

    def shifted(self, s: int) -> "DObject":
        return DObject(self.kind, self.data, self.shift + s, self.n)

    def __str__(self) -> str:
        if self.kind == "O":
            body = "O([" + ",".join(str(a) for a in self.data) + "])"
        else:
            body = f"k({self.data})"
        return body + (f"[{self.shift}]" if self.shift else "")


def structure_sheaf(n: int) -> DObject:
    return DObject.structure_sheaf(n)


def skyscraper(i: int, n: int) -> DObject:
    return DObject.skyscraper(i, n)


def generating_objects(n: int) -> list[DObject]:
    return [structure_sheaf(n)] + [skyscraper(i, n) for i in range(1, n + 1)]


def unit(i: int, n: int, c: int = 1) -> tuple[int, ...]:
    return tuple(c if k == i else 0 for k in range(1, n + 1))


_OBJ = re.compile(r"\s*(?:O\(\[\s*([-+\d\s,]*)\]\)|k\((\d+)\))(?:\[([-+]?\d+)\])?\s*$")


def parse_object(text: str, n: int | None = None) -> DObject:
    m = _OBJ.match(text)
    if m is None:
        raise ObjectParseError(f"cannot parse object {text!r}", 0)
    shift = int(m.group(3)) if m.group(3) else 0
    if m.group(2) is not None:
        i = int(m.group(2))
        if n is None or not 1 <= i <= n:
            raise ObjectParseError(f"skyscraper point {i} out of range", m.start(2))
        return DObject.skyscraper(i, n, shift)
    coeffs = parse_divisor("[" + m.group(1) + "]")
    if n is not None and len(coeffs) != n:
        raise ObjectParseError(f"divisor has {len(coeffs)} entries, expected {n}", m.start(1))
    return DObject.line_bundle(coeffs, shift)


def parse_divisor(text: str) -> tuple[int, ...]:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ObjectParseError("divisor must be a bracketed list", 0)
    body = s[1:-1]
    if not body.strip():
        return ()
    out = []
    pos = 1
    for part in body.split(","):
        try:
            out.append(int(part))
        except ValueError:
            raise ObjectParseError(f"bad integer {part.strip()!r}", pos) from None
        pos += len(part) + 1
    return tuple(out)


# --------------------------------------------------------------------------
# cohomology of O(D)


@dataclass(frozen=True)
class CohomDims:
    h0: int
    h1: int

    @property
    def vanishing(self) -> bool:
        return self.h0 == 0 and self.h1 == 0


@lru_cache(maxsize=None)
def h0_oracle(divisor: tuple[int, ...]) -> int:
    """Dimension of global sections of O(D) on the cycle X_n.

    Component i carries the coordinate z with x_i at z = 1; the node after
    component i glues its z = oo to z = 0 on component i+1 (cyclically, so
    for n = 1 the single component is glued to itself).  Sections over
    component i with pole order <= a_i at z = 1 are spanned by
    ``(z - 1)^-k``, k = 0..a_i, which take the value 1 (k = 0) or 0 at oo and
    ``(-1)^k`` at 0.  H^0 is the kernel of the node-matching conditions.
    """
    n = len(divisor)
    if n == 0:
        raise ValueError("empty divisor")
    offsets, total = [], 0
    for a in divisor:
        offsets.append(total)
        total += max(a + 1, 0)
    if total == 0:
        return 0
    rows = []
    for r in range(n):
        s = (r + 1) % n
        row = [0] * total
        if divisor[r] >= 0:
            row[offsets[r]] += 1
        for k in range(divisor[s] + 1):
            row[offsets[s] + k] -= (-1) ** k
        rows.append(row)
    return total - rank(rows)


@lru_cache(maxsize=None)
def cohomology(divisor: tuple[int, ...]) -> CohomDims:
    d = tuple(divisor)
    h0 = h0_oracle(d)
    h1_rr = h0 - sum(d)
    h1_sd = h0_oracle(tuple(-a for a in d))
    if h1_rr != h1_sd:
        raise CohomologyInconsistency(f"h1 mismatch for {d}: Riemann-Roch {h1_rr}, Serre duality {h1_sd}")
    return CohomDims(h0, h1_rr)


# --------------------------------------------------------------------------
# twist rewrite rules


class NotReducible(Exception):
    """No rule of the calculus computes this twist image."""

    def __init__(self, letter: Letter, obj: DObject, cohom: CohomDims | None):
        self.letter = letter
        self.obj = obj
        self.cohom = cohom
        extra = f" with (h0, h1) = ({cohom.h0}, {cohom.h1})" if cohom else ""
        super().__init__(f"{format_word([letter])} on {obj}{extra}")


def _single_point(d: tuple[int, ...], sign: int) -> int | None:
    nz = [i for i, a in enumerate(d, 1) if a != 0]
    if len(nz) == 1 and d[nz[0] - 1] == sign:
        return nz[0]
    return None


def apply_generator(letter: Letter, obj: DObject) -> DObject:
    g, e = letter
    n = obj.n
    if g == CENTRAL:
        return obj.shifted(e)
    if isinstance(g, int):
        if not 1 <= g <= n:
            raise ValueError(f"beta index {g} outside 1..{n}")
        if obj.kind == "k":
            return obj
        d = list(obj.data)
        d[g - 1] += e
        return DObject("O", tuple(d), obj.shift, n)
    if g != ALPHA:
        raise ValueError(f"unknown generator {g!r}")
    if obj.kind == "k":
        i = obj.data
        if e > 0:
            return DObject("O", unit(i, n, -1), obj.shift + 1, n)
        return DObject("O", unit(i, n, 1), obj.shift, n)
    d = obj.data
    if not any(d):
        return obj
    p = _single_point(d, e)
    if p is not None:
        return DObject("k", p, obj.shift - (e < 0), n)
    c = cohomology(d)
    if c.vanishing:
        return obj
    raise NotReducible(letter, obj, c)


@dataclass(frozen=True)
class StuckState:
    remaining: Word  # letters not yet applied; the last one is the one that failed
    obj: DObject
    reason: NotReducible

    def __str__(self) -> str:
        return f"stuck: {format_word(self.remaining)} applied to {self.obj}: {self.reason}"


def evaluate_word(w: Sequence[Letter], obj: DObject) -> Union[DObject, StuckState]:
    """Apply ``w`` right to left (leftmost letter last)."""
    check_word(w, obj.n)
    w = tuple(w)
    for pos in range(len(w) - 1, -1, -1):
        try:
            obj = apply_generator(w[pos], obj)
        except NotReducible as exc:
            return StuckState(w[: pos + 1], obj, exc)
    return obj


def evaluation_chain(w: Sequence[Letter], obj: DObject) -> list[DObject]:
    """Intermediate objects of :func:`evaluate_word`, starting with ``obj``."""
    out = [obj]
    for x in reversed(tuple(w)):
        out.append(apply_generator(x, out[-1]))
    return out
