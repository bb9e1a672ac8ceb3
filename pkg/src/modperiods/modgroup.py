"""SL2(Z) matrices, the Moebius action, and words in the generators S and T."""

from __future__ import annotations

import json
from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Sequence

from . import cycmat
from .cycmat import Matrix


class InvalidMatrixError(ValueError):
    """Raised for integer matrices whose determinant is not 1."""


@dataclass(frozen=True)
class Mat2Z:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for x in (self.a, self.b, self.c, self.d):
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"Mat2Z entries must be integers, got {x!r}")
        if self.a * self.d - self.b * self.c != 1:
            raise InvalidMatrixError(f"det {self.as_list()} = {self.det} != 1")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "Mat2Z":
        if len(entries) != 4:
            raise InvalidMatrixError(f"expected [a,b,c,d], got {list(entries)}")
        return cls(*(int(x) for x in entries))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]

    def __matmul__(self, other: "Mat2Z") -> "Mat2Z":
        return Mat2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2Z":
        return Mat2Z(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Mat2Z":
        return Mat2Z(self.d, -self.b, -self.c, self.a)

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Mat2Z(1, 0, 0, 1)
S = Mat2Z(0, -1, 1, 0)


def T_pow(n: int) -> Mat2Z:
    return Mat2Z(1, n, 0, 1)


# A letter is ("S", 1) or ("T", n) with n != 0.
Letter = tuple[str, int]


def _normalize(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for name, n in letters:
        if name == "S":
            out.append(("S", 1))
            continue
        if name != "T":
            raise ValueError(f"unknown letter {name!r}")
        if out and out[-1][0] == "T":
            n += out.pop()[1]
        if n:
            out.append(("T", n))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A word in S and T^n together with the SL2 sign of its value."""

    letters: tuple[Letter, ...] = ()
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "letters", _normalize(self.letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters, self.sign * other.sign)

    def to_matrix(self) -> Mat2Z:
        """The SL2(Z) element the word denotes, i.e. sign * (product of letters)."""
        m = IDENTITY
        for name, n in self.letters:
            m = m @ (S if name == "S" else T_pow(n))
        return m if self.sign == 1 else -m

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        parts = ["S" if name == "S" else ("T" if n == 1 else f"T^{n}") for name, n in self.letters]
        body = " ".join(parts) or "1"
        return body if self.sign == 1 else f"-{body}"


def decompose(m: Mat2Z | Sequence[int]) -> Word:
    """Write ``m`` as sign * T^q1 S T^q2 S ... T^n by Euclid on the first column.

    Quotients are truncated toward zero.  Each step peels M = T^q S M'' with
    M'' = [[c, d], [-(a - qc), -(b - qd)]], which strictly shrinks |c|.
    """
    if not isinstance(m, Mat2Z):
        m = Mat2Z.from_list(m)
    a, b, c, d = m.a, m.b, m.c, m.d
    letters: list[Letter] = []
    while c != 0:
        q = abs(a) // abs(c)
        if (a < 0) != (c < 0):
            q = -q
        a, b = a - q * c, b - q * d
        if q:
            letters.append(("T", q))
        letters.append(("S", 1))
        a, b, c, d = c, d, -a, -b
    # now [[a, b], [0, a]] with a = +-1, equal to a * T^(a*b)
    letters.append(("T", a * b))
    return Word(tuple(letters), a)


def evaluate_word(
    word: Word,
    S_img: Matrix,
    T_img: Matrix,
    minus_id_img: Matrix | None = None,
) -> Matrix:
    """Image of ``word`` under the assignment S -> S_img, T -> T_img.

    ``minus_id_img`` is the image of -I; pass None (identity) for PSL2
    representations.
    """
    n = len(S_img)
    if len(T_img) != n or any(len(r) != n for r in S_img) or any(len(r) != n for r in T_img):
        raise ValueError("S and T images must be square of the same size")
    if minus_id_img is not None and len(minus_id_img) != n:
        raise ValueError("minus_id_img has the wrong size")
    level = max(cycmat.level_of(S_img), cycmat.level_of(T_img))
    result = cycmat.identity(n, level)
    t_cache: dict[int, Matrix] = {}
    for name, k in word.letters:
        if name == "S":
            factor = S_img
        else:
            factor = t_cache.get(k)
            if factor is None:
                factor = t_cache[k] = cycmat.matpow(T_img, k)
        result = cycmat.matmul(result, factor)
    if word.sign == -1 and minus_id_img is not None:
        result = cycmat.matmul(result, minus_id_img)
    return result


def mobius(m: Mat2Z, tau: complex) -> complex:
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    return (m.a * tau + m.b) / (m.c * tau + m.d)


def is_hyperbolic(m: Mat2Z) -> bool:
    return abs(m.trace) > 2


def is_parabolic(m: Mat2Z) -> bool:
    return abs(m.trace) == 2


def parse_generators(data) -> list[Mat2Z]:
    """Read a JSON array of [a,b,c,d] quadruples (string or decoded list)."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    return [Mat2Z.from_list(q) for q in data]


def load_generators(path: str | PathLike) -> list[Mat2Z]:
    with open(path, encoding="utf-8") as fh:
        return parse_generators(json.load(fh))
