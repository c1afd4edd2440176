"""Integer linear algebra on top of sympy's Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import ZZ, Matrix
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp


@dataclass(frozen=True)
class SmithForm:
    """D = S * M * T with S, T unimodular; ``diagonal`` holds D's (signed) diagonal."""

    diagonal: tuple[int, ...]
    S: tuple[tuple[int, ...], ...]
    T: tuple[tuple[int, ...], ...]


def _identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _rows(dm: DomainMatrix) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in dm.to_Matrix().tolist())


def smith(rows: list[list[int]], n_cols: int | None = None) -> SmithForm:
    n_rows = len(rows)
    if n_cols is None:
        n_cols = len(rows[0]) if rows else 0
    if n_rows == 0 or n_cols == 0:
        return SmithForm((), _identity(n_rows), _identity(n_cols))
    M = DomainMatrix.from_Matrix(Matrix(rows)).convert_to(ZZ)
    D, S, T = smith_normal_decomp(M)
    Dr = _rows(D)
    diag = tuple(Dr[i][i] for i in range(min(n_rows, n_cols)))
    return SmithForm(diag, _rows(S), _rows(T))


def matvec(A, x) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def solve_integer(rows: list[list[int]], b: list[int], n_cols: int | None = None) -> list[int] | None:
    """Some integer x with M x = b, or None when none exists."""
    if n_cols is None:
        n_cols = len(rows[0]) if rows else 0
    if n_cols == 0 or not rows:
        return [0] * n_cols if all(v == 0 for v in b) else None
    sf = smith(rows, n_cols)
    Sb = matvec(sf.S, b)
    y = [0] * n_cols
    for i, target in enumerate(Sb):
        d = sf.diagonal[i] if i < len(sf.diagonal) else 0
        if d == 0:
            if target != 0:
                return None
            continue
        if target % d:
            return None
        y[i] = target // d
    return matvec(sf.T, y)
