"""Words on the Humphrey generators and the relator families of the
pure mapping class group of the n-punctured torus.

Letters are ``(generator, exponent)`` pairs where ``generator`` is ``"a"``
(the twist along alpha), ``"t"`` (the central letter) or a positive
integer ``i`` (the twist along beta_i).  A word is a tuple of letters; the
leftmost letter acts last when the word is applied to an object.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Tuple, Union

Generator = Union[str, int]
Letter = Tuple[Generator, int]
Word = Tuple[Letter, ...]

ALPHA = "a"
CENTRAL = "t"

VARIANTS = ("boundary", "punctured", "extended", "two_alt", "extended_two_alt")


class WordParseError(ValueError):
    """Malformed word literal; ``position`` is the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# --------------------------------------------------------------------------
# cyclic indices


def cyc(i: int, n: int) -> int:
    """Normalize ``i`` to the residue in ``1..n``."""
    return (i - 1) % n + 1


def succ(i: int, n: int) -> int:
    return cyc(i + 1, n)


def _check_index(i: int, n: int) -> None:
    if not (1 <= i <= n):
        raise ValueError(f"index {i} outside 1..{n}")


def _forward(i: int, j: int, n: int) -> int:
    return (j - i) % n


def is_cyclic_triple(i: int, j: int, k: int, n: int, strict: bool = True) -> bool:
    """True iff reading forward cyclically from ``i`` meets ``j`` no later than ``k``.

    The strict variant additionally requires ``i, j, k`` to be distinct.
    """
    for x in (i, j, k):
        _check_index(x, n)
    if strict and len({i, j, k}) < 3:
        return False
    return _forward(i, j, n) <= _forward(i, k, n)


def cyclic_triples(n: int, strict: bool = True) -> list[tuple[int, int, int]]:
    r = range(1, n + 1)
    return [(i, j, k) for i in r for j in r for k in r if is_cyclic_triple(i, j, k, n, strict)]


# --------------------------------------------------------------------------
# letters and words


def alpha(e: int = 1) -> Letter:
    return (ALPHA, e)


def beta(i: int, e: int = 1) -> Letter:
    return (i, e)


def central(e: int = 1) -> Letter:
    return (CENTRAL, e)


def inv_letter(x: Letter) -> Letter:
    return (x[0], -x[1])


def word(*letters: Letter) -> Word:
    return tuple(letters)


def invert(w: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w: Iterable[Letter]) -> Word:
    stack: list[Letter] = []
    for x in w:
        if stack and stack[-1][0] == x[0] and stack[-1][1] == -x[1]:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def power(w: Sequence[Letter], k: int) -> Word:
    if k < 0:
        return tuple(invert(w)) * (-k)
    return tuple(w) * k


def concat(*words: Sequence[Letter]) -> Word:
    out: list[Letter] = []
    for w in words:
        out.extend(w)
    return tuple(out)


def max_index(w: Iterable[Letter]) -> int:
    return max((g for g, _ in w if isinstance(g, int)), default=0)


def check_word(w: Iterable[Letter], n: int) -> None:
    for g, e in w:
        if e not in (1, -1):
            raise ValueError(f"exponent {e} is not +-1")
        if isinstance(g, int):
            _check_index(g, n)
        elif g not in (ALPHA, CENTRAL):
            raise ValueError(f"unknown generator {g!r}")


def cyclic_rotations(w: Sequence[Letter]) -> Iterator[Word]:
    w = tuple(w)
    for s in range(len(w)):
        yield w[s:] + w[:s]


def random_word(rng: random.Random, n: int, length: int, with_central: bool = True) -> Word:
    gens: list[Generator] = [ALPHA, *range(1, n + 1)]
    if with_central:
        gens.append(CENTRAL)
    return tuple((rng.choice(gens), rng.choice((1, -1))) for _ in range(length))


# --------------------------------------------------------------------------
# text format:  a  a'  b3  b3'  t  t'

_TOKEN = re.compile(r"\s*(?:(a|t)|b(\d+))(')?")


def parse_word(text: str, n: int | None = None) -> Word:
    out: list[Letter] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise WordParseError(f"unexpected token {text[at:].split()[0]!r}", at)
        end = m.end()
        if end < len(text) and not text[end].isspace():
            raise WordParseError("tokens must be separated by whitespace", end)
        gen: Generator = m.group(1) if m.group(1) else int(m.group(2))
        if isinstance(gen, int) and (gen < 1 or (n is not None and gen > n)):
            raise WordParseError(f"beta index {gen} out of range", m.start(2))
        out.append((gen, -1 if m.group(3) else 1))
        pos = end
    return tuple(out)


def format_letter(x: Letter) -> str:
    g, e = x
    s = g if isinstance(g, str) else f"b{g}"
    return s + ("'" if e < 0 else "")


def format_word(w: Iterable[Letter]) -> str:
    return " ".join(format_letter(x) for x in w)


# --------------------------------------------------------------------------
# relator families


@dataclass(frozen=True)
class Relator:
    name: str
    lhs: Word
    rhs: Word
    family: str = ""

    @property
    def word(self) -> Word:
        return concat(self.lhs, invert(self.rhs))

    def to_text(self) -> str:
        return f"{format_word(self.lhs)} = {format_word(self.rhs)}"


@dataclass(frozen=True)
class PresentationSpec:
    n: int
    variant: str = "extended"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant in ("two_alt", "extended_two_alt") and self.n != 2:
            raise ValueError(f"variant {self.variant} requires n = 2")


def a_word(i: int, j: int, n: int) -> Word:
    """The twelve-letter product A_{i,j} in the Humphrey generators."""
    if n < 2:
        raise ValueError("A_{i,j} needs n >= 2")
    _check_index(i, n)
    _check_index(j, n)
    i1, j1 = succ(i, n), succ(j, n)
    return (
        beta(j1), alpha(), beta(i1, -1), beta(i), alpha(-1), beta(j1, -1),
        alpha(), beta(i, -1), beta(i1), alpha(-1), beta(i1, -1), beta(i),
    )


def gamma_twist_word(i: int, j: int, n: int) -> Word:
    """A_{i,j} A_{i+1,j} ... A_{j-1,j}; empty when ``i == j``."""
    _check_index(i, n)
    _check_index(j, n)
    out: list[Letter] = []
    while i != j:
        out.extend(a_word(i, j, n))
        i = succ(i, n)
    return tuple(out)


def braid_relator(i: int, n: int) -> Relator:
    _check_index(i, n)
    return Relator(f"braid[a,b{i}]", (alpha(), beta(i), alpha()), (beta(i), alpha(), beta(i)), "braid")


def commutation_relator(x: Letter, y: Letter, name: str) -> Relator:
    return Relator(name, (x, y), (y, x), "commutation")


def commutativity_inner(j: int, k: int, n: int) -> Word:
    """The conjugated word C whose commutator with beta_i is a relator."""
    k1 = succ(k, n)
    return (
        alpha(-1), beta(k1, -1), beta(j, -1), alpha(-1), beta(k),
        alpha(), beta(j), beta(k1), alpha(),
    )


def commutativity_relator(i: int, j: int, k: int, n: int) -> Relator:
    if not is_cyclic_triple(i, j, k, n, strict=True):
        raise ValueError(f"({i},{j},{k}) is not a strict cyclic triple mod {n}")
    c = commutativity_inner(j, k, n)
    return Relator(f"commutativity[{i},{j},{k}]", (beta(i),) + c, c + (beta(i),), "commutativity")


def g_relator(n: int) -> Relator:
    return Relator("G", power((alpha(), beta(1)), 6), gamma_twist_word(1, n, n) if n > 1 else (), "G")


def g_tilde_relator(n: int) -> Relator:
    return g_relator_based_at(1, n)


def g_relator_based_at(i: int, n: int) -> Relator:
    """(a b_i)^6 = A_{i,i-1} A_{i+1,i-1} ... A_{i-2,i-1} t^2, indices mod n."""
    _check_index(i, n)
    prod = gamma_twist_word(i, cyc(i - 1, n), n) if n > 1 else ()
    name = "G~" if i == 1 else f"G~[base={i}]"
    return Relator(name, power((alpha(), beta(i)), 6), prod + (central(), central()), "G" if i == 1 else "lemmaG")


def g2_relator(tilde: bool) -> Relator:
    lhs = power((beta(1), alpha(), beta(2)), 4)
    if tilde:
        return Relator("G2~", lhs, (central(), central()), "G2")
    return Relator("G2", lhs, (), "G2")


def star_relator(i: int, j: int, k: int, n: int) -> Relator:
    """(a b_i b_j b_k)^3 = T_{gamma_ij} T_{gamma_jk} T_{gamma_ki}.

    For ``i == j == k`` the last factor is the full loop gamma_{i,i-1}.
    The identity holds in PM(T_n); in the central extension the two sides
    differ by a power of t.
    """
    if not is_cyclic_triple(i, j, k, n, strict=False):
        raise ValueError(f"({i},{j},{k}) is not cyclically ordered mod {n}")
    lhs = power((alpha(), beta(i), beta(j), beta(k)), 3)
    if i == j == k:
        rhs = gamma_twist_word(i, cyc(i - 1, n), n) if n > 1 else ()
    else:
        rhs = concat(gamma_twist_word(i, j, n), gamma_twist_word(j, k, n), gamma_twist_word(k, i, n))
    return Relator(f"star[{i},{j},{k}]", lhs, rhs, "star")


def _dedupe(rels: list[Relator]) -> list[Relator]:
    seen: set[Word] = set()
    out = []
    for r in rels:
        w = free_reduce(r.word)
        keys = set(cyclic_rotations(w)) | set(cyclic_rotations(invert(w)))
        if keys & seen:
            continue
        seen |= keys
        out.append(r)
    return out


def relators(pres: PresentationSpec) -> list[Relator]:
    n, v = pres.n, pres.variant
    out: list[Relator] = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(commutation_relator(beta(i), beta(j), f"commute[b{i},b{j}]"))
    out.extend(braid_relator(i, n) for i in range(1, n + 1))
    if v not in ("two_alt", "extended_two_alt"):
        out.extend(_dedupe([commutativity_relator(i, j, k, n) for i, j, k in cyclic_triples(n)]))
    if v == "punctured":
        out.append(g_relator(n))
    elif v == "extended":
        out.append(g_tilde_relator(n))
    elif v == "two_alt":
        out.append(g2_relator(tilde=False))
    elif v == "extended_two_alt":
        out.append(g2_relator(tilde=True))
    if v.startswith("extended"):
        gens = [alpha()] + [beta(i) for i in range(1, n + 1)]
        out.extend(commutation_relator(central(), g, f"central[t,{format_letter(g)}]") for g in gens)
    return out
