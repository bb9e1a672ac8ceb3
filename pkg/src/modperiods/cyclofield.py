"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored as integer coordinates over a common positive
denominator in the power basis 1, z, ..., z^(phi(N)-1), reduced modulo the
N-th cyclotomic polynomial.  Values are immutable.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "CycNum",
    "LevelMismatchError",
    "DEFAULT_LEVEL",
    "cyclotomic_polynomial",
    "euler_phi",
    "zeta",
    "sqrt2",
    "imag_unit",
    "parse_cycnum",
]

DEFAULT_LEVEL = 24


class LevelMismatchError(ValueError):
    """A root of unity was requested in a field that does not contain it."""


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # Both low-to-high, den monic.
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert not any(num[: len(den) - 1])
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic level must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of z^k for k = 0..n-1."""
    phi = euler_phi(n)
    cyc = cyclotomic_polynomial(n)
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * cyc[j]
    return tuple(rows)


@lru_cache(maxsize=None)
def _normalized_traces(n: int) -> tuple[Fraction, ...]:
    # Tr(z^k) / phi(n) for the power basis; invariant under field embedding.
    out = []
    for k in range(euler_phi(n)):
        m = n // math.gcd(k, n)
        out.append(Fraction(_mobius(m), euler_phi(m)))
    return tuple(out)


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def _roots(n: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * k / n) for k in range(n))


class CycNum:
    """An element of Q(zeta_level)."""

    __slots__ = ("_level", "_num", "_den")

    def __init__(self, coeffs=(), level: int = DEFAULT_LEVEL):
        phi = euler_phi(level)
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > phi:
            # Reduce higher powers through the table (z^level = 1).
            table = _power_table(level)
            red = [Fraction(0)] * phi
            for k, c in enumerate(fr):
                if c:
                    row = table[k % level]
                    for j in range(phi):
                        if row[j]:
                            red[j] += c * row[j]
            fr = red
        fr += [Fraction(0)] * (phi - len(fr))
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        CycNum._level.__set__(self, level)
        CycNum._num.__set__(self, tuple(int(c * den) for c in fr))
        CycNum._den.__set__(self, den)

    @classmethod
    def _raw(cls, level: int, num, den: int = 1) -> "CycNum":
        g = den
        for v in num:
            if g == 1:
                break
            g = math.gcd(g, v)
        if den < 0:
            g = -g
        if g != 1:
            num = tuple(v // g for v in num)
            den //= g
        else:
            num = tuple(num)
        obj = cls.__new__(cls)
        CycNum._level.__set__(obj, level)
        CycNum._num.__set__(obj, num)
        CycNum._den.__set__(obj, den)
        return obj

    @classmethod
    def from_rational(cls, value, level: int = DEFAULT_LEVEL) -> "CycNum":
        value = Fraction(value)
        phi = euler_phi(level)
        return cls._raw(level, (value.numerator,) + (0,) * (phi - 1), value.denominator)

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    # -- accessors ---------------------------------------------------------

    @property
    def level(self) -> int:
        return self._level

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self._den) for v in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    # -- coercion ----------------------------------------------------------

    def promote(self, level: int) -> "CycNum":
        """Embed into Q(zeta_level); level must be a multiple of self.level."""
        if level == self._level:
            return self
        if level % self._level:
            raise LevelMismatchError(f"Q(zeta_{self._level}) is not a subfield of Q(zeta_{level})")
        step = level // self._level
        table = _power_table(level)
        phi = euler_phi(level)
        out = [0] * phi
        for k, c in enumerate(self._num):
            if c:
                row = table[(k * step) % level]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycNum._raw(level, out, self._den)

    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other._level == self._level:
                return self, other
            lev = math.lcm(self._level, other._level)
            return self.promote(lev), other.promote(lev)
        if isinstance(other, (int, Rational)):
            return self, CycNum.from_rational(other, self._level)
        return None, None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a._den == b._den:
            num = tuple(x + y for x, y in zip(a._num, b._num))
            return CycNum._raw(a._level, num, a._den)
        num = tuple(x * b._den + y * a._den for x, y in zip(a._num, b._num))
        return CycNum._raw(a._level, num, a._den * b._den)

    __radd__ = __add__

    def __neg__(self):
        return CycNum._raw(self._level, tuple(-x for x in self._num), self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            other = Fraction(other)
            num = tuple(x * other.numerator for x in self._num)
            return CycNum._raw(self._level, num, self._den * other.denominator)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        n = a._level
        phi = len(a._num)
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:phi])
        table = _power_table(n)
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                row = table[k]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycNum._raw(n, out, a._den * b._den)

    __rmul__ = __mul__

    def inv(self) -> "CycNum":
        """Multiplicative inverse, via the linear system for multiplication by self."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycNum.from_rational(1 / self.rational(), self._level)
        n, phi = self._level, len(self._num)
        # Column j of the matrix is self * z^j.
        cols = []
        for j in range(phi):
            basis = [0] * phi
            basis[j] = 1
            cols.append((self * CycNum._raw(n, basis, 1)).coeffs)
        mat = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        sol = _solve_rational(mat, phi)
        return CycNum(sol, n)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / other)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inv()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b * a.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base, e = self.inv(), -e
        result = CycNum.from_rational(1, self._level)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        # Normalized trace does not depend on the ambient level.
        tr = _normalized_traces(self._level)
        return hash(sum((Fraction(v) * t for v, t in zip(self._num, tr)), Fraction(0)) / self._den)

    def __bool__(self):
        return not self.is_zero()

    # -- numerics ----------------------------------------------------------

    def to_complex(self) -> complex:
        roots = _roots(self._level)
        re_parts, im_parts = [], []
        for k, v in enumerate(self._num):
            if v:
                c = v / self._den
                re_parts.append(c * roots[k].real)
                im_parts.append(c * roots[k].imag)
        return complex(math.fsum(re_parts), math.fsum(im_parts))

    __complex__ = to_complex

    def root_of_unity_index(self) -> int | None:
        """Return k with self == zeta_level^k, or None."""
        table = _power_table(self._level)
        if self._den != 1:
            return None
        for k, row in enumerate(table):
            if row == self._num:
                return k
        return None

    def conjugate(self) -> "CycNum":
        """Complex conjugate, z -> z^(-1)."""
        n = self._level
        table = _power_table(n)
        phi = len(self._num)
        out = [0] * phi
        for k, c in enumerate(self._num):
            if c:
                row = table[(-k) % n]
                for j in range(phi):
                    if row[j]:
                        out[j] += c * row[j]
        return CycNum._raw(n, out, self._den)

    # -- text --------------------------------------------------------------

    def __str__(self):
        terms = []
        for k in range(len(self._num) - 1, -1, -1):
            c = Fraction(self._num[k], self._den)
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            if not terms:
                terms.append(("-" if c < 0 else "") + body)
            else:
                terms.append((" - " if c < 0 else " + ") + body)
        return f"[N={self._level}] " + ("".join(terms) if terms else "0")

    def __repr__(self):
        return f"CycNum({str(self)!r})"


def _solve_rational(aug: list[list[Fraction]], n: int) -> list[Fraction]:
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def zeta(p: int, q: int, level: int = DEFAULT_LEVEL) -> CycNum:
    """The root of unity e(p/q) = exp(2 pi i p/q) inside Q(zeta_level)."""
    if q <= 0:
        raise ValueError("denominator must be positive")
    if level % q:
        raise LevelMismatchError(f"e({p}/{q}) does not lie in Q(zeta_{level})")
    k = (p * (level // q)) % level
    return CycNum._raw(level, _power_table(level)[k], 1)


def sqrt2(level: int = DEFAULT_LEVEL) -> CycNum:
    return zeta(1, 8, level) + zeta(7, 8, level)


def imag_unit(level: int = DEFAULT_LEVEL) -> CycNum:
    return zeta(1, 4, level)


_HEADER = re.compile(r"^\s*\[N\s*=\s*(\d+)\]\s*")
_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(\*)?\s*)?(z(?:\s*\^\s*(\d+))?)?\s*"
)


def parse_cycnum(text: str, level: int | None = None) -> CycNum:
    """Parse the ``[N=24] 1/2*z^3 - 2`` text form (header optional)."""
    m = _HEADER.match(text)
    if m:
        lev = int(m.group(1))
        if level is not None and level != lev:
            raise LevelMismatchError(f"text declares N={lev}, expected N={level}")
        body = text[m.end():]
    else:
        lev = level or DEFAULT_LEVEL
        body = text
    body = body.strip()
    if not body:
        raise ValueError(f"empty cyclotomic literal: {text!r}")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(body):
        t = _TERM.match(body, pos)
        if t is None or t.end() == pos:
            raise ValueError(f"cannot parse cyclotomic literal {text!r} at {body[pos:]!r}")
        sign, num, star, mono, power = t.groups()
        if num is None and mono is None:
            raise ValueError(f"cannot parse cyclotomic literal {text!r} at {body[pos:]!r}")
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r}")
        if star and mono is None:
            raise ValueError(f"dangling '*' in {text!r}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        k = 0 if mono is None else (int(power) if power is not None else 1)
        coeffs[k] = coeffs.get(k, Fraction(0)) + c
        pos = t.end()
        first = False
    top = max(coeffs)
    dense = [coeffs.get(k, Fraction(0)) for k in range(top + 1)]
    return CycNum(dense, lev)
