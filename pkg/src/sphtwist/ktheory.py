"""Integer lattice representation on (rank, multidegree) coordinates.

Classes live in Z^{n+1} with the rank first.  Twists act by the
transvections ``v -> v - chi(E, v) E`` for the spherical object E, the
shift acts by -1.  Everything is exact Python integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import exact
from .exact import Matrix
from .sheaves import DObject
from .words import ALPHA, CENTRAL, Letter, Relator, Word, check_word, invert

KClass = tuple[int, ...]


def class_of(obj: DObject) -> KClass:
    n = obj.n
    sign = -1 if obj.shift % 2 else 1
    if obj.kind == "O":
        v = (1,) + tuple(obj.data)
    else:
        v = (0,) + tuple(int(k == obj.data) for k in range(1, n + 1))
    return tuple(sign * x for x in v)


def euler_form(e: Sequence[int], f: Sequence[int]) -> int:
    """chi(E, F) = rk(E) deg(F) - rk(F) deg(E)."""
    if len(e) != len(f):
        raise ValueError("classes of different length")
    return e[0] * sum(f[1:]) - f[0] * sum(e[1:])


def gram_matrix(n: int) -> Matrix:
    basis = exact.identity(n + 1)
    return [[euler_form(u, v) for v in basis] for u in basis]


def twist_matrix(letter: Letter, n: int) -> Matrix:
    g, e = letter
    m = exact.identity(n + 1)
    if g == CENTRAL:
        return [[-x for x in row] for row in m]
    if g == ALPHA:
        for c in range(1, n + 1):
            m[0][c] = -e
        return m
    if not isinstance(g, int) or not 1 <= g <= n:
        raise ValueError(f"bad generator {g!r} for n = {n}")
    m[g][0] = e
    return m


def evaluate_word_matrix(w: Sequence[Letter], n: int) -> Matrix:
    """Product of the generator matrices, leftmost letter leftmost factor."""
    check_word(w, n)
    m = exact.identity(n + 1)
    # right-multiplying by a generator matrix is an elementary column operation
    for g, e in w:
        if g == CENTRAL:
            m = [[-x for x in row] for row in m]
        elif g == ALPHA:
            for row in m:
                r0 = row[0]
                for c in range(1, n + 1):
                    row[c] -= e * r0
        else:
            for row in m:
                row[0] += e * row[g]
    return m


def is_scalar(m: Matrix, c: int) -> bool:
    return all(m[i][j] == (c if i == j else 0) for i in range(len(m)) for j in range(len(m)))


@dataclass(frozen=True)
class MatrixReport:
    relator: str
    n: int
    equal: bool
    central_sign: int | None  # +1 / -1 when lhs = +-Id * rhs, else None
    lhs: Matrix
    rhs: Matrix

    @property
    def status(self) -> str:
        if self.equal:
            return "verified"
        if self.central_sign == -1:
            return "verified-up-to-central"
        return "mismatch"


def verify_relator_matrix(rel: Relator, n: int) -> MatrixReport:
    lhs = evaluate_word_matrix(rel.lhs, n)
    rhs = evaluate_word_matrix(rel.rhs, n)
    defect = exact.matmul(lhs, evaluate_word_matrix(invert(rel.rhs), n))
    sign = 1 if is_scalar(defect, 1) else -1 if is_scalar(defect, -1) else None
    return MatrixReport(rel.name, n, lhs == rhs, sign, lhs, rhs)


def radical_basis(n: int) -> list[KClass]:
    return [tuple(v) for v in exact.kernel_basis(gram_matrix(n), n + 1)]


def check_form_preserved(m: Matrix, n: int) -> bool:
    basis = exact.identity(n + 1)
    images = [exact.matvec(m, u) for u in basis]
    return all(
        euler_form(images[a], images[b]) == euler_form(basis[a], basis[b])
        for a in range(n + 1)
        for b in range(n + 1)
    )


def generator_matrices(n: int) -> dict[str, Matrix]:
    out = {"a": twist_matrix((ALPHA, 1), n)}
    for i in range(1, n + 1):
        out[f"b{i}"] = twist_matrix((i, 1), n)
    out["t"] = twist_matrix((CENTRAL, 1), n)
    return out


def word_class(w: Word, obj: DObject) -> KClass:
    return tuple(exact.matvec(evaluate_word_matrix(w, obj.n), class_of(obj)))
