"""Best-first search for proofs of ``lhs(X) ~= rhs(X)`` in the sheaf calculus.

A state is ``(lhs word, lhs object, rhs word, rhs object)`` and asserts
``lhs_word(lhs_obj) ~= rhs_word(rhs_obj)``.  Every move replaces the
assertion by an equivalent one:

* ``evaluate``  apply the rightmost letter of one side to its object;
* ``cancel``    delete an adjacent pair ``x x^-1``;
* ``rewrite``   replace a subword ``u`` by ``v`` where ``u v^-1`` is a cyclic
  rotation of a braid or beta-commutation relator (or of its inverse);
* ``transfer``  move the leftmost letter of one side to the left end of the
  other side, inverted.

Since every move is sound, reaching two empty words settles the goal: the
two objects are either equal (a proof) or distinct objects of the calculus
(a counterexample).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .sheaves import DObject, NotReducible, apply_generator
from .words import (
    Letter,
    Word,
    beta,
    braid_relator,
    check_word,
    commutation_relator,
    cyclic_rotations,
    invert,
)

DEFAULT_BUDGET = 100_000
DEFAULT_WINDOW = 8

State = tuple  # (lhs word, lhs object, rhs word, rhs object)


class MalformedGoal(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    kind: str  # evaluate | cancel | rewrite | transfer
    side: str  # lhs | rhs; for a transfer, the side the letter leaves
    position: int = -1
    letter: Optional[Letter] = None
    old: Word = ()
    new: Word = ()
    before: Optional[DObject] = None
    after: Optional[DObject] = None


@dataclass(frozen=True)
class Goal:
    lhs: Word
    rhs: Word
    obj: DObject


@dataclass
class SearchResult:
    closed: bool  # both words were emptied
    steps: list[Step] = field(default_factory=list)
    final: Optional[tuple[DObject, DObject]] = None
    expanded: int = 0


# Internally a word is a str with one character per letter, which makes
# slicing, concatenation and hashing of states cheap.
_A, _T, _B = 0x61, 0x74, 0x80


def _char(x: Letter) -> str:
    g, e = x
    if g == "a":
        return "a" if e > 0 else "A"
    if g == "t":
        return "t" if e > 0 else "T"
    if not 1 <= g <= 63:
        raise MalformedGoal(f"beta index {g} too large for the search encoding")
    return chr(_B + 2 * g + (e < 0))


def _letter(c: str) -> Letter:
    o = ord(c)
    if o >= _B:
        return ((o - _B) // 2, -1 if o % 2 else 1)
    return (c.lower(), 1 if c.islower() else -1)


def encode(w) -> str:
    return "".join(map(_char, w))


def decode(s: str) -> Word:
    return tuple(map(_letter, s))


@dataclass(frozen=True)
class RewriteTable:
    rules: dict  # str -> tuple of str
    max_len: int
    inverse: dict  # char -> inverse char


@lru_cache(maxsize=None)
def rewrite_table(n: int) -> RewriteTable:
    """Subword replacements ``u -> v`` licensed by braid and commutation relators."""
    rels = [braid_relator(i, n).word for i in range(1, n + 1)]
    rels += [
        commutation_relator(beta(i), beta(j), "").word
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    ]
    table: dict[str, set[str]] = {}
    for r in rels:
        for base in (r, invert(r)):
            for rot in cyclic_rotations(base):
                for cut in range(1, len(rot)):
                    table.setdefault(encode(rot[:cut]), set()).add(encode(invert(rot[cut:])))
    rules = {u: tuple(sorted(vs, key=lambda w: (len(w), w))) for u, vs in table.items()}
    alphabet = [("a", 1), ("t", 1)] + [(i, 1) for i in range(1, n + 1)]
    inverse = {}
    for x in alphabet:
        c, ci = _char(x), _char((x[0], -1))
        inverse[c], inverse[ci] = ci, c
    return RewriteTable(rules, max(map(len, rules)), inverse)


_image_cache: dict = {}


def _try_apply(c: str, obj: DObject) -> Optional[DObject]:
    key = (c, obj, obj.n)
    try:
        return _image_cache[key]
    except KeyError:
        pass
    try:
        img = apply_generator(_letter(c), obj)
    except NotReducible:
        img = None
    if len(_image_cache) > 1_000_000:
        _image_cache.clear()
    _image_cache[key] = img
    return img


def successors(state: State, table: RewriteTable, window: int, sides: tuple[int, ...] = (0, 2)):
    """Yield ``(move, next_state)``; a move is ``(kind, side, position, a, b)``.

    ``side`` is the index of the word in the state (0 lhs, 2 rhs).
    """
    stuck = {}
    for si in sides:
        w, obj = state[si], state[si + 1]
        if not w:
            stuck[si] = False
            continue
        img = _try_apply(w[-1], obj)
        stuck[si] = img is None
        if img is not None:
            nxt = (w[:-1], img, state[2], state[3]) if si == 0 else (state[0], state[1], w[:-1], img)
            yield ("evaluate", si, len(w) - 1, obj, img), nxt
    inverse = table.inverse
    for si in sides:
        w = state[si]
        for p in range(len(w) - 1):
            if inverse[w[p]] == w[p + 1]:
                nw = w[:p] + w[p + 2 :]
                nxt = (nw, state[1], state[2], state[3]) if si == 0 else (state[0], state[1], nw, state[3])
                yield ("cancel", si, p, w[p : p + 2], ""), nxt
    rules, max_u = table.rules, table.max_len
    for si in sides:
        w = state[si]
        size = len(w)
        # only rewrites reaching into the rightmost `window` letters
        for p in range(max(0, size - window - max_u + 1), size):
            for ln in range(max(1, size - window - p), min(max_u, size - p) + 1):
                u = w[p : p + ln]
                vs = rules.get(u)
                if vs is None:
                    continue
                head, tail = w[:p], w[p + ln :]
                for v in vs:
                    nw = head + v + tail
                    nxt = (nw, state[1], state[2], state[3]) if si == 0 else (state[0], state[1], nw, state[3])
                    yield ("rewrite", si, p, u, v), nxt
    if len(sides) < 2:
        return
    for si, oi in ((0, 2), (2, 0)):
        w, ow = state[si], state[oi]
        if w and stuck[si] and (not ow or stuck[oi]):
            moved = inverse[w[0]] + ow
            if si == 0:
                nxt = (w[1:], state[1], moved, state[3])
            else:
                nxt = (moved, state[1], w[1:], state[3])
            yield ("transfer", si, 0, w[0], ""), nxt


MAX_FRONTIER = 400_000


def _best_first(start: State, sides: tuple[int, ...], budget: int, window: int) -> SearchResult:
    """Best-first search; duplicates are discarded when popped.

    The priority is (letters remaining, rewrites used, insertion order),
    packed into one integer.  When the frontier outgrows MAX_FRONTIER only
    its better half is kept, which bounds memory at the price of
    completeness.
    """
    table = rewrite_table(start[1].n)
    heap = [(len(start[0]) + len(start[2]) << 60, 0, start, None, None)]
    closed: dict = {}
    expanded = 0
    count = 0
    push, pop = heapq.heappush, heapq.heappop
    while heap and expanded < budget:
        key, rw, state, prev, move = pop(heap)
        if state in closed:
            continue
        closed[state] = (prev, move)
        expanded += 1
        if not state[0] and not state[2]:
            return SearchResult(True, _path(closed, state), (state[1], state[3]), expanded)
        for move, nxt in successors(state, table, window, sides):
            if nxt in closed:
                continue
            count += 1
            r = rw + (move[0] == "rewrite")
            push(heap, ((len(nxt[0]) + len(nxt[2]) << 60) + (r << 40) + count, r, nxt, state, move))
        if len(heap) > MAX_FRONTIER:
            heap.sort()
            del heap[MAX_FRONTIER // 2 :]
    return SearchResult(False, [], None, expanded)


def _to_step(move) -> Step:
    kind, si, pos, a, b = move
    side = "lhs" if si == 0 else "rhs"
    if kind == "evaluate":
        return Step(kind, side, pos, None, before=a, after=b)
    if kind == "transfer":
        return Step(kind, side, pos, _letter(a))
    if kind == "cancel":
        return Step(kind, side, pos, old=decode(a))
    return Step(kind, side, pos, old=decode(a), new=decode(b))


def _path(closed: dict, state: State) -> list[Step]:
    steps = []
    while closed[state][0] is not None:
        prev, move = closed[state]
        step = _to_step(move)
        if step.kind == "evaluate":
            w = prev[0] if move[1] == 0 else prev[2]
            step = Step("evaluate", step.side, step.position, _letter(w[-1]), before=step.before, after=step.after)
        steps.append(step)
        state = prev
    steps.reverse()
    return steps


def evaluate_side(
    w: Word, obj: DObject, side: str = "lhs", budget: int = DEFAULT_BUDGET, window: int = DEFAULT_WINDOW
) -> SearchResult:
    """Evaluate one side completely, rewriting where no rule fires."""
    w = encode(w)
    start = (w, obj, "", obj) if side == "lhs" else ("", obj, w, obj)
    res = _best_first(start, (0,) if side == "lhs" else (2,), budget, window)
    if res.closed:
        img = res.final[0] if side == "lhs" else res.final[1]
        res.final = (img, img)
    return res


def _check_goal(goal: Goal) -> None:
    n = goal.obj.n
    if n < 1:
        raise MalformedGoal("object has no ambient n")
    try:
        check_word(goal.lhs, n)
        check_word(goal.rhs, n)
    except ValueError as exc:
        raise MalformedGoal(str(exc)) from None


def search(
    goal: Goal, budget: int = DEFAULT_BUDGET, window: int = DEFAULT_WINDOW, side_budget: Optional[int] = None
) -> SearchResult:
    """Evaluate each side alone first, then run a joint search with transfers.

    Sides finished in the first phase enter the joint search already
    evaluated.  ``budget`` bounds the total number of expanded states.
    """
    _check_goal(goal)
    if side_budget is None:
        side_budget = max(1, budget // 20)
    state: State = (encode(goal.lhs), goal.obj, encode(goal.rhs), goal.obj)
    steps: list[Step] = []
    used = 0
    for side in ("lhs", "rhs"):
        w = state[0] if side == "lhs" else state[2]
        obj = state[1] if side == "lhs" else state[3]
        if not w or used >= budget:
            continue
        res = evaluate_side(decode(w), obj, side, min(side_budget, budget - used), window)
        used += res.expanded
        if res.closed:
            steps += res.steps
            state = ("", res.final[0], state[2], state[3]) if side == "lhs" else (state[0], state[1], "", res.final[0])
    if not state[0] and not state[2]:
        return SearchResult(True, steps, (state[1], state[3]), used)
    res = _best_first(state, (0, 2), budget - used, window)
    res.expanded += used
    if res.closed:
        res.steps = steps + res.steps
    return res
