"""Small dense matrices over a cyclotomic field.

Matrices are tuples of row tuples of :class:`CycNum`.  Everything here is
exact; :func:`to_numpy` is the only bridge to floating point.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .cyclofield import DEFAULT_LEVEL, CycNum

Matrix = tuple[tuple[CycNum, ...], ...]
Vector = tuple[CycNum, ...]


class SingularMatrixError(ZeroDivisionError):
    pass


def _c(x, level: int) -> CycNum:
    if isinstance(x, CycNum):
        return x if x.level == level else x.promote(level)
    return CycNum.from_rational(x, level)


def matrix(rows: Sequence[Sequence], level: int | None = None) -> Matrix:
    """Build a matrix, coercing ints/Fractions and promoting to a common level."""
    if level is None:
        level = DEFAULT_LEVEL
        for row in rows:
            for x in row:
                if isinstance(x, CycNum) and x.level % level:
                    level = math.lcm(level, x.level)
    width = len(rows[0]) if rows else 0
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix")
    return tuple(tuple(_c(x, level) for x in row) for row in rows)


def identity(n: int, level: int = DEFAULT_LEVEL) -> Matrix:
    one, zero = CycNum.from_rational(1, level), CycNum.from_rational(0, level)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def diag(entries: Sequence, level: int | None = None) -> Matrix:
    n = len(entries)
    return matrix([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], level)


def level_of(m: Matrix) -> int:
    return m[0][0].level


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), len(m[0]) if m else 0


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValueError(f"dimension mismatch: {shape(a)} x {shape(b)}")
    cols = list(zip(*b))
    out = []
    for row in a:
        new_row = []
        for col in cols:
            acc = None
            for x, y in zip(row, col):
                if x.is_zero() or y.is_zero():
                    continue
                t = x * y
                acc = t if acc is None else acc + t
            new_row.append(acc if acc is not None else row[0] * 0)
        out.append(tuple(new_row))
    return tuple(out)


def matvec(a: Matrix, v: Vector) -> Vector:
    return tuple(row[0] for row in matmul(a, tuple((x,) for x in v)))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def scale(m: Matrix, c) -> Matrix:
    return tuple(tuple(x * c for x in row) for row in m)


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_identity(m: Matrix) -> bool:
    return all((x == 1) if i == j else x.is_zero() for i, row in enumerate(m) for j, x in enumerate(row))


def is_diagonal(m: Matrix) -> bool:
    return all(x.is_zero() for i, row in enumerate(m) for j, x in enumerate(row) if i != j)


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("inverse of a non-square matrix")
    lev = level_of(m)
    eye = identity(n, lev)
    aug = [list(m[i]) + list(eye[i]) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p_inv = aug[col][col].inv()
        aug[col] = [x * p_inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def matpow(m: Matrix, e: int) -> Matrix:
    if e < 0:
        m, e = inverse(m), -e
    if is_diagonal(m):
        return diag([m[i][i] ** e for i in range(len(m))], level_of(m))
    result = identity(len(m), level_of(m))
    while e:
        if e & 1:
            result = matmul(result, m)
        e >>= 1
        if e:
            m = matmul(m, m)
    return result


def nullspace(m: Matrix) -> list[Vector]:
    """Basis of {v : m v = 0} via reduced row echelon form."""
    rows, cols = len(m), len(m[0])
    work = [list(r) for r in m]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not work[i][c].is_zero()), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        p_inv = work[r][c].inv()
        work[r] = [x * p_inv for x in work[r]]
        for i in range(rows):
            if i != r and not work[i][c].is_zero():
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    lev = level_of(m)
    zero, one = CycNum.from_rational(0, lev), CycNum.from_rational(1, lev)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = [zero] * cols
        v[free] = one
        for i, pc in enumerate(pivots):
            v[pc] = -work[i][free]
        basis.append(tuple(v))
    return basis


def rank(m: Matrix) -> int:
    return len(m[0]) - len(nullspace(m))


def stack(*blocks: Matrix) -> Matrix:
    return tuple(row for b in blocks for row in b)


def to_numpy(m: Matrix) -> np.ndarray:
    return np.array([[x.to_complex() for x in row] for row in m], dtype=complex)


def format_matrix(m: Matrix) -> str:
    cells = [[str(x).split("] ", 1)[1] for x in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    lines = ["  ".join(c.rjust(width) for c in row) for row in cells]
    return f"[N={level_of(m)}]\n" + "\n".join(lines)
