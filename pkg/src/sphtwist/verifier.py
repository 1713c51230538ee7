"""Relator verification on generating objects and suite aggregation.

A relator ``lhs = rhs`` is checked in the sheaf representation by proving
``lhs(X) ~= rhs(X)`` for ``X`` in ``O, k(1), .., k(n)``; by the equivalence
criterion for autoequivalences of the cycle this suffices (for n >= 3).
For ``n <= 2`` the criterion leaves room for a point-swap involution, which
is the only place the acceptance predicate is widened.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import exact
from .ktheory import evaluate_word_matrix, verify_relator_matrix
from .search import DEFAULT_BUDGET, Goal, Step, search
from .sheaves import DObject, generating_objects, parse_object
from .words import (
    Relator,
    beta,
    braid_relator,
    commutation_relator,
    commutativity_relator,
    cyclic_triples,
    format_letter,
    format_word,
    g2_relator,
    g_relator_based_at,
    _dedupe,
    alpha,
    central,
    parse_word,
    star_relator,
)

FAMILIES = ("braid", "commutation", "commutativity", "G", "G2", "star", "lemmaG")
REPRESENTATIONS = ("ktheory", "sheaf")

VERIFIED = "verified"
CENTRAL_OK = "verified-up-to-central"
INVOLUTION_OK = "verified-up-to-involution"
EXHAUSTED = "exhausted"
MISMATCH = "mismatch"
PASSING = (VERIFIED, CENTRAL_OK, INVOLUTION_OK)

SWAP = "swap(1,2)"


class ConfigError(ValueError):
    """Invalid family / n / representation combination."""


@dataclass
class Outcome:
    generator_object: Optional[str]
    status: str
    central_defect_m: Optional[int] = None
    involution: Optional[str] = None
    trace: list = field(default_factory=list)
    states_expanded: int = 0
    goal: Optional[dict] = None  # the words actually searched, after substitution

    @property
    def ok(self) -> bool:
        return self.status in PASSING


@dataclass
class VerificationReport:
    relator: str
    n: int
    representation: str
    outcomes: list[Outcome]

    @property
    def status(self) -> str:
        stats = [o.status for o in self.outcomes]
        for s in (MISMATCH, EXHAUSTED, INVOLUTION_OK, CENTRAL_OK):
            if s in stats:
                return s
        return VERIFIED

    @property
    def ok(self) -> bool:
        return all(o.ok for o in self.outcomes)

    def records(self) -> list[dict]:
        return [
            {
                "relator": self.relator,
                "n": self.n,
                "representation": self.representation,
                "generator_object": o.generator_object,
                "status": o.status,
                "central_defect_m": o.central_defect_m,
                "involution": o.involution,
                "trace": o.trace,
                "states_expanded": o.states_expanded,
                "goal": o.goal,
            }
            for o in self.outcomes
        ]


def reports_from_records(records: Iterable[dict]) -> list[VerificationReport]:
    """Inverse of flattening reports with :meth:`VerificationReport.records`."""
    out: list[VerificationReport] = []
    for r in records:
        key = (r["relator"], r["n"], r["representation"])
        if not out or (out[-1].relator, out[-1].n, out[-1].representation) != key:
            out.append(VerificationReport(*key, []))
        out[-1].outcomes.append(
            Outcome(
                r["generator_object"], r["status"], r["central_defect_m"], r["involution"],
                r["trace"], r["states_expanded"], r.get("goal"),
            )
        )
    return out


# --------------------------------------------------------------------------
# serialization of traces


def step_to_json(s: Step) -> dict:
    d = {"kind": s.kind, "side": s.side, "position": s.position}
    if s.letter is not None:
        d["letter"] = format_letter(s.letter)
    if s.kind in ("cancel", "rewrite"):
        d["old"] = format_word(s.old)
    if s.kind == "rewrite":
        d["new"] = format_word(s.new)
    if s.kind == "evaluate":
        d["before"] = str(s.before)
        d["after"] = str(s.after)
    return d


# --------------------------------------------------------------------------
# single relator


def is_degenerate_star(rel: Relator) -> bool:
    return rel.family == "star" and len(set(rel.lhs[1:4])) == 1


def goal_relator(rel: Relator, obj: DObject, n: int) -> Relator:
    """The relator actually searched on ``obj``.

    On ``k(m)`` the G-tilde relator and its based-at variants are replaced by
    the variant based at ``m``; these agree as group elements.  Degenerate
    stars are treated the same way, being braid-equivalent to the left side
    of the based-at-``m`` relator.
    """
    if obj.kind != "k" or n < 2:
        return rel
    m = obj.data
    if rel.family in ("G", "lemmaG"):
        return g_relator_based_at(m, n)
    if is_degenerate_star(rel):
        return star_relator(m, m, m, n)
    return rel


def swap_points(obj: DObject) -> DObject:
    if obj.n != 2:
        return obj
    if obj.kind == "k":
        return DObject("k", 3 - obj.data, obj.shift, 2)
    return DObject("O", obj.data[::-1], obj.shift, 2)


def classify(rel: Relator, left: DObject, right: DObject, n: int) -> tuple[str, Optional[int], Optional[str]]:
    """Status of a closed search, from the two final objects."""
    if left == right:
        return VERIFIED, None, None
    if rel.family == "star" and left.shifted(-left.shift) == right.shifted(-right.shift):
        return CENTRAL_OK, left.shift - right.shift, None
    if n <= 2 and left == swap_points(right):
        return INVOLUTION_OK, None, SWAP
    return MISMATCH, None, None


def _goal_dict(rel: Relator, obj: DObject, via: Optional[str] = None) -> dict:
    d = {"relator": rel.name, "lhs": format_word(rel.lhs), "rhs": format_word(rel.rhs), "object": str(obj)}
    if via:
        d["via"] = via
    return d


def conjugation_goal(rel: Relator, n: int) -> tuple[Relator, DObject]:
    """For ``[b_i, C]`` the goal ``C(k(i)) ~= k(i)``.

    Conjugating a twist gives the twist along the image object, so
    ``C T_k(i) C^-1 ~= T_C(k(i))`` and the goal implies the relator on
    every object.
    """
    i = rel.lhs[0][0]
    inner = rel.lhs[1:]
    return Relator(f"{rel.name}:conj", inner, (), rel.family), DObject.skyscraper(i, n)


def _sheaf_outcome(rel: Relator, obj: DObject, n: int, budget: int) -> Outcome:
    g = goal_relator(rel, obj, n)
    fallback = rel.family == "commutativity"
    first = budget // 2 if fallback else budget
    res = search(Goal(g.lhs, g.rhs, obj), first)
    used = res.expanded
    via = None
    start = obj
    if not res.closed and fallback:
        g, start = conjugation_goal(rel, n)
        via = "conjugation"
        res = search(Goal(g.lhs, g.rhs, start), budget - used)
        used += res.expanded
    goal = _goal_dict(g, start, via)
    if not res.closed:
        return Outcome(str(obj), EXHAUSTED, states_expanded=used, goal=goal)
    status, m, inv = classify(rel, *res.final, n)
    return Outcome(str(obj), status, m, inv, [step_to_json(s) for s in res.steps], used, goal)


def _ktheory_outcome(rel: Relator, n: int) -> Outcome:
    rep = verify_relator_matrix(rel, n)
    m = 1 if rep.central_sign == -1 and not rep.equal else None
    goal = {"relator": rel.name, "lhs": format_word(rel.lhs), "rhs": format_word(rel.rhs), "object": None}
    return Outcome(None, rep.status, m, None, [], 0, goal)


def _uniform_defect(outcomes: list[Outcome]) -> None:
    """Star defects must share one value of m across generating objects."""
    ms = [o.central_defect_m or 0 for o in outcomes if o.ok]
    if not ms:
        return
    ref = ms[0]
    for o in outcomes:
        if o.ok and (o.central_defect_m or 0) != ref:
            o.status = MISMATCH


def verify_on_generators(rel: Relator, n: int, representation: str, budget: int = DEFAULT_BUDGET) -> VerificationReport:
    if representation == "ktheory":
        return VerificationReport(rel.name, n, representation, [_ktheory_outcome(rel, n)])
    if representation != "sheaf":
        raise ConfigError(f"unknown representation {representation!r}")
    outcomes = [_sheaf_outcome(rel, x, n, budget) for x in generating_objects(n)]
    if rel.family == "star":
        _uniform_defect(outcomes)
    return VerificationReport(rel.name, n, representation, outcomes)


# --------------------------------------------------------------------------
# suites


def family_relators(family: str, n: int) -> list[Relator]:
    if family == "braid":
        return [braid_relator(i, n) for i in range(1, n + 1)]
    if family == "commutation":
        out = [
            commutation_relator(beta(i), beta(j), f"commute[b{i},b{j}]")
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
        ]
        gens = [alpha()] + [beta(i) for i in range(1, n + 1)]
        out += [commutation_relator(central(), x, f"central[t,{format_letter(x)}]") for x in gens]
        return out
    if family == "commutativity":
        return _dedupe([commutativity_relator(i, j, k, n) for i, j, k in cyclic_triples(n)])
    if family == "G":
        return [g_relator_based_at(1, n)]
    if family == "G2":
        return [g2_relator(tilde=True)]
    if family == "star":
        return [star_relator(i, j, k, n) for i, j, k in cyclic_triples(n, strict=False)]
    if family == "lemmaG":
        return [g_relator_based_at(i, n) for i in range(2, n + 1)]
    raise ConfigError(f"unknown family {family!r}")


def applicable_families(n: int) -> list[str]:
    return [f for f in FAMILIES if not (f == "G2" and n != 2) and not (f == "commutativity" and n < 3)]


def resolve_families(families: Sequence[str] | str, n: int) -> list[str]:
    if n < 1:
        raise ConfigError("n must be positive")
    if families == "all" or list(families) == ["all"]:
        return applicable_families(n)
    out = []
    for f in families:
        if f not in FAMILIES:
            raise ConfigError(f"unknown family {f!r}")
        if f == "G2" and n != 2:
            raise ConfigError("family G2 requires n = 2")
        if f == "commutativity" and n < 3:
            raise ConfigError("family commutativity requires n >= 3")
        if f not in out:
            out.append(f)
    return sorted(out, key=FAMILIES.index)


def resolve_representations(reps: Sequence[str] | str) -> list[str]:
    if reps in ("both", "all") or list(reps) in (["both"], ["all"]):
        return list(REPRESENTATIONS)
    if isinstance(reps, str):
        reps = [reps]
    for r in reps:
        if r not in REPRESENTATIONS:
            raise ConfigError(f"unknown representation {r!r}")
    return sorted(set(reps), key=REPRESENTATIONS.index)


def _task(args):
    return verify_on_generators(*args)


def verify_relation_suite(
    n: int,
    families: Sequence[str] | str = "all",
    representations: Sequence[str] | str = "both",
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    stop_on_failure: bool = False,
) -> list[VerificationReport]:
    """Reports ordered by family, then relator, then representation.

    With ``stop_on_failure`` the tasks run serially and the list ends at the
    first report that is not ok.
    """
    fams = resolve_families(families, n)
    reps = resolve_representations(representations)
    if budget < 1:
        raise ConfigError("budget must be positive")
    tasks = [(rel, n, rep, budget) for f in fams for rel in family_relators(f, n) for rep in reps]
    if jobs is None or jobs < 1:
        jobs = os.cpu_count() or 1
    if stop_on_failure:
        out = []
        for t in tasks:
            out.append(_task(t))
            if not out[-1].ok:
                break
        return out
    if jobs == 1 or len(tasks) < 2:
        return [_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_task, tasks))


def suite_ok(reports: Iterable[VerificationReport]) -> bool:
    return all(r.ok for r in reports)


# --------------------------------------------------------------------------
# cross-representation checks


def _matrix(text_word: str, n: int):
    return evaluate_word_matrix(parse_word(text_word, n), n)


def cross_check(reports: Iterable[VerificationReport]) -> list[str]:
    """Violations of the agreement between the two representations.

    Every rewrite in every sheaf trace must preserve the lattice matrix of
    the word, and a sheaf defect ``t^m`` must appear as ``(-1)^m`` in the
    lattice representation.
    """
    problems = []
    for rep in reports:
        if rep.representation != "sheaf":
            continue
        n = rep.n
        for o in rep.outcomes:
            for k, s in enumerate(o.trace):
                if s["kind"] == "rewrite" and _matrix(s["old"], n) != _matrix(s["new"], n):
                    problems.append(f"{rep.relator} on {o.generator_object}: step {k} changes the lattice matrix")
            if not o.ok or o.involution or o.goal is None:
                continue
            m = o.central_defect_m or 0
            lhs = _matrix(o.goal["lhs"], n)
            rhs = _matrix(o.goal["rhs"], n)
            if o.goal.get("via") == "conjugation":
                # the relator is [b_i, C] with C the goal word and k(i) the goal object
                i = parse_object(o.goal["object"], n).data
                b = evaluate_word_matrix([beta(i)], n)
                ok = exact.matmul(b, lhs) == exact.matmul(lhs, b)
            else:
                ok = lhs == [[(-1) ** m * x for x in row] for row in rhs]
            if not ok:
                problems.append(f"{rep.relator} on {o.generator_object}: defect t^{m} disagrees with the lattice")
    return problems

