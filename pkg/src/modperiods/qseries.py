"""Truncated Puiseux series in q and the classical forms built from them.

A series stores exponents ``order + n*step`` (all in (1/denom)Z) with
coefficients that may be Fractions (exact), complex (numeric) or CycNums.
``prec`` is the exclusive exponent bound below which coefficients are
trusted.  Every generator function here takes ``terms``: the number of
integral q-steps to compute beyond the leading exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

DEFAULT_DENOM = 24
DEFAULT_TERMS = 150


class SeriesError(ValueError):
    pass


class BranchError(SeriesError):
    """Rational power whose leading coefficient has no exact root."""


class DivergenceError(SeriesError):
    pass


class PoleError(SeriesError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(math.gcd(a.numerator * b.denominator, b.numerator * a.denominator), a.denominator * b.denominator)


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


def _convolve(a: Sequence, b: Sequence, n: int) -> list:
    """First n coefficients of the product of two coefficient lists."""
    n = min(n, len(a) + len(b) - 1) if a and b else 0
    if n <= 0:
        return []
    if all(_is_exact(x) for x in a) and all(_is_exact(x) for x in b):
        da = math.lcm(*(_frac(x).denominator for x in a))
        db = math.lcm(*(_frac(x).denominator for x in b))
        ia = [int(x * da) for x in a]
        ib = [int(x * db) for x in b]
        out = [0] * n
        for i, x in enumerate(ia[:n]):
            if x:
                for j, y in enumerate(ib[: n - i]):
                    if y:
                        out[i + j] += x * y
        den = da * db
        return [Fraction(v, den) if den != 1 else v for v in out]
    if all(isinstance(x, (int, float, complex, Fraction)) for x in a) and all(
        isinstance(x, (int, float, complex, Fraction)) for x in b
    ):
        va = np.array([complex(x) for x in a[:n]], dtype=complex)
        vb = np.array([complex(x) for x in b[:n]], dtype=complex)
        return list(np.convolve(va, vb)[:n])
    out = [0] * n
    for i, x in enumerate(a[:n]):
        for j, y in enumerate(b[: n - i]):
            out[i + j] = out[i + j] + x * y
    return out


def _is_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


@dataclass(frozen=True)
class PuiseuxSeries:
    order: Fraction
    step: Fraction
    coeffs: tuple
    prec: Fraction
    denom: int = DEFAULT_DENOM

    def __post_init__(self):
        for name in ("order", "step", "prec"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.step <= 0:
            raise SeriesError("step must be positive")
        for name in ("order", "step"):
            if (getattr(self, name) * self.denom).denominator != 1:
                raise SeriesError(f"{name} {getattr(self, name)} not in (1/{self.denom})Z")
        coeffs = list(self.coeffs)
        order = self.order
        while coeffs and _is_zero(coeffs[0]):
            coeffs.pop(0)
            order += self.step
        n_max = math.ceil((self.prec - order) / self.step) if self.prec > order else 0
        coeffs = coeffs[:n_max]
        if not coeffs:
            order = self.prec
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "order", order)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_coeffs(cls, coeffs, order=0, step=1, prec=None, denom: int = DEFAULT_DENOM) -> "PuiseuxSeries":
        order, step = _frac(order), _frac(step)
        if prec is None:
            prec = order + len(coeffs) * step
        return cls(order, step, tuple(coeffs), prec, denom)

    @classmethod
    def constant(cls, c, prec, denom: int = DEFAULT_DENOM) -> "PuiseuxSeries":
        return cls(Fraction(0), Fraction(1), (c,), prec, denom)

    @classmethod
    def monomial(cls, c, exponent, prec, denom: int = DEFAULT_DENOM) -> "PuiseuxSeries":
        return cls(_frac(exponent), Fraction(1, denom), (c,), prec, denom)

    @classmethod
    def zero(cls, prec, denom: int = DEFAULT_DENOM) -> "PuiseuxSeries":
        return cls(_frac(prec), Fraction(1), (), prec, denom)

    # -- inspection ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        if not self.coeffs:
            raise SeriesError("zero series has no leading coefficient")
        return self.coeffs[0]

    def exponents(self) -> list[Fraction]:
        return [self.order + n * self.step for n in range(len(self.coeffs))]

    def terms(self) -> list[tuple[Fraction, object]]:
        return list(zip(self.exponents(), self.coeffs))

    def coeff(self, r):
        r = _frac(r)
        if r >= self.prec:
            raise SeriesError(f"q^{r} is beyond the truncation {self.prec}")
        n = (r - self.order) / self.step
        if r < self.order or n.denominator != 1:
            return 0
        return self.coeffs[int(n)]

    def head(self, n: int) -> list:
        """The first n stored coefficients."""
        return list(self.coeffs[:n])

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        shown = " + ".join(f"({c})q^{e}" for e, c in self.terms()[:6])
        return f"PuiseuxSeries({shown or '0'} + O(q^{self.prec}))"

    # -- structural helpers -------------------------------------------------

    def _with(self, order, step, coeffs, prec) -> "PuiseuxSeries":
        return PuiseuxSeries(order, step, tuple(coeffs), prec, self.denom)

    def regrid(self, step) -> "PuiseuxSeries":
        """Same series stored on a finer exponent grid."""
        step = _frac(step)
        ratio = self.step / step
        if ratio.denominator != 1:
            raise SeriesError("new step must divide the old one")
        k = int(ratio)
        if k == 1:
            return self
        out = []
        for c in self.coeffs:
            out.append(c)
            out.extend([0] * (k - 1))
        return self._with(self.order, step, out, self.prec)

    def truncate(self, prec) -> "PuiseuxSeries":
        return self._with(self.order, self.step, self.coeffs, min(self.prec, _frac(prec)))

    def shift(self, r) -> "PuiseuxSeries":
        """Multiply by q^r."""
        r = _frac(r)
        return self._with(self.order + r, self.step, self.coeffs, self.prec + r)

    def map_coeffs(self, fn: Callable) -> "PuiseuxSeries":
        return self._with(self.order, self.step, [fn(c) for c in self.coeffs], self.prec)

    def numeric(self) -> "PuiseuxSeries":
        return self.map_coeffs(lambda c: complex(c))

    # -- ring operations ----------------------------------------------------

    def __neg__(self):
        return self.map_coeffs(lambda c: -c)

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.prec, self.denom)
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return other.truncate(prec)
        if other.is_zero():
            return self.truncate(prec)
        step = _frac_gcd(_frac_gcd(self.step, other.step), abs(self.order - other.order) or self.step)
        a, b = self.regrid(step), other.regrid(step)
        lo = min(a.order, b.order)
        n = math.ceil((prec - lo) / step)
        out = [0] * max(n, 0)
        for s in (a, b):
            off = int((s.order - lo) / step)
            for i, c in enumerate(s.coeffs):
                if off + i < n:
                    out[off + i] = out[off + i] + c
        return self._with(lo, step, out, prec)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return self.map_coeffs(lambda c: c * other)
        prec = min(self.prec + other.order, other.prec + self.order)
        order = self.order + other.order
        if self.is_zero() or other.is_zero():
            return PuiseuxSeries.zero(prec, self.denom)
        step = _frac_gcd(self.step, other.step)
        a, b = self.regrid(step), other.regrid(step)
        n = math.ceil((prec - order) / step)
        return self._with(order, step, _convolve(a.coeffs, b.coeffs, n), prec)

    def __rmul__(self, other):
        return self.map_coeffs(lambda c: other * c)

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self * other.inverse()
        if _is_exact(other):
            other = Fraction(other)
        return self.map_coeffs(lambda c: c / other)

    def __pow__(self, e):
        return self.pow(e)

    def _unit_power(self, p) -> list:
        """Coefficients of (f / (c q^order))^p via the Miller recurrence."""
        c0 = self.coeffs[0]
        if _is_exact(c0) and all(_is_exact(x) for x in self.coeffs):
            f = [_frac(x) / _frac(c0) for x in self.coeffs]
        else:
            f = [x / c0 for x in self.coeffs]
        n = len(f)
        g = [1] + [0] * (n - 1)
        nz = [k for k in range(1, n) if not _is_zero(f[k])]
        for m in range(1, n):
            s = 0
            for k in nz:
                if k > m:
                    break
                s = s + (p * k - (m - k)) * f[k] * g[m - k]
            g[m] = s / m
        return g

    def pow_normalized(self, p) -> tuple["PuiseuxSeries", object]:
        """(f / c)^p and the dropped constant c, c the leading coefficient."""
        if self.is_zero():
            raise SeriesError("power of the zero series")
        p = _frac(p) if isinstance(p, (int, Fraction)) else p
        order = self.order * p
        if (order * self.denom).denominator != 1:
            raise SeriesError(f"exponent {order} leaves (1/{self.denom})Z")
        rel = self.prec - self.order
        return self._with(order, self.step, self._unit_power(p), order + rel), self.coeffs[0]

    def pow(self, p) -> "PuiseuxSeries":
        if isinstance(p, int) and p >= 0:
            if p == 0:
                return PuiseuxSeries.constant(1, self.prec - self.order, self.denom)
            out, base = None, self
            while p:
                if p & 1:
                    out = base if out is None else out * base
                p >>= 1
                if p:
                    base = base * base
            return out
        unit, c = self.pow_normalized(p)
        return unit * _leading_power(c, _frac(p) if isinstance(p, (int, Fraction)) else p)

    def inverse(self) -> "PuiseuxSeries":
        return self.pow(-1)

    # -- calculus ------------------------------------------------------------

    def theta(self) -> "PuiseuxSeries":
        """q d/dq: the coefficient of q^r is multiplied by r."""
        return self._with(self.order, self.step, [e * c for e, c in self.terms()], self.prec)

    def compose_power_series(self, coeffs: Sequence) -> "PuiseuxSeries":
        """sum_n coeffs[n] * self^n; self must have positive order."""
        if self.is_zero():
            return PuiseuxSeries.constant(coeffs[0], self.prec, self.denom)
        if self.order <= 0:
            raise DivergenceError("composition needs a series of positive order")
        prec = self.prec
        out = PuiseuxSeries.constant(coeffs[0], prec, self.denom)
        power = None
        for n in range(1, len(coeffs)):
            if n * self.order >= prec:
                break
            power = self if power is None else (power * self).truncate(prec)
            if not _is_zero(coeffs[n]):
                out = out + power * coeffs[n]
        return out


def _leading_power(c, p: Fraction):
    if p.denominator == 1:
        return c ** int(p) if not _is_exact(c) else _frac(c) ** int(p)
    if _is_exact(c):
        c = _frac(c)
        if c > 0:
            num = _exact_root(c.numerator ** abs(p.numerator), p.denominator)
            den = _exact_root(c.denominator ** abs(p.numerator), p.denominator)
            if num is not None and den is not None:
                r = Fraction(num, den)
                return r if p > 0 else 1 / r
        raise BranchError(f"({c})^({p}) is not rational")
    if isinstance(c, (float, complex)):
        return complex(c) ** float(p)
    raise BranchError(f"no exact branch for ({c})^({p})")


def _exact_root(n: int, k: int) -> int | None:
    r = round(n ** (1.0 / k)) if n < 2 ** 1000 else int(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


# -- symbolic positive radicals ------------------------------------------------


def _factor(n: int) -> dict[int, int]:
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class RadicalConstant:
    """A product of prime powers with rational exponents, e.g. 1728^(-1/24)."""

    factors: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def of(cls, base: int, exponent) -> "RadicalConstant":
        if base <= 0:
            raise ValueError("base must be a positive integer")
        e = _frac(exponent)
        return cls(tuple(sorted((p, k * e) for p, k in _factor(base).items())))

    def __mul__(self, other: "RadicalConstant") -> "RadicalConstant":
        acc = dict(self.factors)
        for p, e in other.factors:
            acc[p] = acc.get(p, 0) + e
        return RadicalConstant(tuple(sorted((p, e) for p, e in acc.items() if e)))

    def __pow__(self, k) -> "RadicalConstant":
        return RadicalConstant(tuple((p, e * k) for p, e in self.factors))

    @property
    def value(self) -> float:
        return math.prod(p ** float(e) for p, e in self.factors)

    def __str__(self):
        return "*".join(f"{p}^({e})" for p, e in self.factors) or "1"


# -- classical forms -----------------------------------------------------------


@lru_cache(maxsize=None)
def _euler_product(terms: int) -> tuple[int, ...]:
    """prod_{n>=1} (1 - q^n) to q^(terms-1), from the pentagonal number theorem."""
    c = [0] * terms
    k = 0
    while True:
        done = True
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < terms:
                c[e] = -1 if kk % 2 else 1
                done = False
        if done:
            break
        k += 1
    return tuple(c)


@lru_cache(maxsize=None)
def _euler_power(e: int, terms: int) -> tuple[int, ...]:
    """prod (1 - q^n)^e via the power recurrence on the sparse pentagonal series."""
    f = _euler_product(terms)
    nz = [(k, f[k]) for k in range(1, terms) if f[k]]
    g = [1] + [0] * (terms - 1)
    for m in range(1, terms):
        s = 0
        for k, fk in nz:
            if k > m:
                break
            s += (e * k - (m - k)) * fk * g[m - k]
        g[m] = s // m
    return tuple(g)


def eta_power(e: int, terms: int = DEFAULT_TERMS) -> PuiseuxSeries:
    """eta^e = q^(e/24) prod (1 - q^n)^e."""
    return PuiseuxSeries.from_coeffs(list(_euler_power(e, terms)), Fraction(e, 24), 1)


def eta_pow4(terms: int = DEFAULT_TERMS) -> PuiseuxSeries:
    return eta_power(4, terms)


def delta(terms: int = DEFAULT_TERMS) -> PuiseuxSeries:
    return eta_power(24, terms)


@lru_cache(maxsize=None)
def _sigma(k: int, n: int) -> tuple[int, ...]:
    s = [0] * n
    for d in range(1, n):
        dk = d ** k
        for m in range(d, n, d):
            s[m] += dk
    return tuple(s)


_EISENSTEIN = {2: (1, -24), 4: (3, 240), 6: (5, -504)}


def eisenstein(k: int, terms: int = DEFAULT_TERMS) -> PuiseuxSeries:
    if k not in _EISENSTEIN:
        raise ValueError("k must be 2, 4 or 6")
    power, c = _EISENSTEIN[k]
    sig = _sigma(power, terms)
    return PuiseuxSeries.from_coeffs([1] + [c * sig[n] for n in range(1, terms)], 0, 1)


def j_invariant(terms: int = DEFAULT_TERMS) -> PuiseuxSeries:
    """E4^3 / Delta, starting at q^-1; ``terms`` coefficients."""
    E4 = eisenstein(4, terms)
    return (E4 ** 3) * delta(terms).inverse()


def hauptmodul_K(terms: int = DEFAULT_TERMS) -> PuiseuxSeries:
    """1728 / j = 1728 Delta / E4^3, order 1."""
    return (delta(terms) * eisenstein(4, terms).pow(3).inverse()) * 1728


def hypergeom_coeffs(a, b, c, n: int) -> list[Fraction]:
    a, b, c = _frac(a), _frac(b), _frac(c)
    if c.denominator == 1 and c <= 0:
        raise PoleError(f"2F1 has a pole at c = {c}")
    t = [Fraction(1)]
    for m in range(1, n):
        t.append(t[-1] * (a + m - 1) * (b + m - 1) / ((c + m - 1) * m))
    return t


def hypergeom_2f1(a, b, c, x: PuiseuxSeries, prec=None) -> PuiseuxSeries:
    """2F1(a, b; c; x) for a series x of positive order, optionally truncated at q^prec."""
    if x.is_zero():
        hypergeom_coeffs(a, b, c, 1)
        return PuiseuxSeries.constant(Fraction(1), x.prec, x.denom)
    if x.order <= 0:
        raise DivergenceError("2F1 composition needs x of positive order")
    if prec is not None:
        x = x.truncate(prec)
    n = math.ceil(x.prec / x.order) + 1
    return x.compose_power_series(hypergeom_coeffs(a, b, c, n))


def modular_derivative(f: PuiseuxSeries, k: int) -> PuiseuxSeries:
    """D_k f = theta f - (k/12) E2 f."""
    if f.is_zero():
        return f
    n = max(1, math.ceil(f.prec - f.order))
    E2 = eisenstein(2, n)
    return f.theta() - (E2 * f) * Fraction(k, 12)


# -- the genus-two cusp forms --------------------------------------------------

# (indicial root, 2F1 parameters, exponent of 1728/j)
_F8A2 = {
    1: (Fraction(1, 8), (Fraction(-1, 24), Fraction(7, 24), Fraction(3, 4)), Fraction(-1, 24)),
    2: (Fraction(3, 8), (Fraction(5, 24), Fraction(13, 24), Fraction(5, 4)), Fraction(5, 24)),
}


@dataclass(frozen=True)
class CuspForm:
    series: PuiseuxSeries
    dropped_constant: RadicalConstant  # leading coefficient before rescaling to 1


def cusp_form_8A2_hypergeometric(index: int, terms: int = DEFAULT_TERMS) -> CuspForm:
    """eta^4 K^e 2F1(a, b; c; K) with K = 1728/j, rescaled to leading coefficient 1."""
    _, (a, b, c), e = _F8A2[index]
    K = hauptmodul_K(terms + 1)
    K_unit, lead = K.pow_normalized(e)
    H = hypergeom_2f1(a, b, c, K)
    f = (eta_pow4(terms) * K_unit * H).truncate(_F8A2[index][0] + terms)
    dropped = RadicalConstant.of(int(lead), e)
    return CuspForm(f, dropped)


@lru_cache(maxsize=None)
def _mlde_coeffs(r8: int, terms: int) -> tuple:
    """Coefficients of q^(r8/8) * sum a_n q^n solving D^2 f = (5/576) E4 f, a_0 = 1.

    Multiplied by 192 the recurrence has integer data:
      3 (y-1)(y-3) a_n = -sum_{m>=1} [8 (E2^2)_m + (E4)_m - 12 (E2)_m (8(n-m) + r8)] a_{n-m},
    with y = 8n + r8.
    """
    E2 = eisenstein(2, terms).coeffs
    E4 = eisenstein(4, terms).coeffs
    E22 = _convolve(E2, E2, terms)
    a = [1]
    for n in range(1, terms):
        s = 0
        for m in range(1, n + 1):
            s += (8 * E22[m] + E4[m] - 12 * E2[m] * (8 * (n - m) + r8)) * a[n - m]
        y = 8 * n + r8
        den = 3 * (y - 1) * (y - 3)
        q, rem = divmod(-s, den)
        a.append(q if rem == 0 else Fraction(-s, den))
    return tuple(a)


def cusp_form_8A2_mlde(index: int, terms: int = DEFAULT_TERMS) -> CuspForm:
    root = _F8A2[index][0]
    coeffs = _mlde_coeffs(int(root * 8), terms)
    return CuspForm(PuiseuxSeries.from_coeffs(list(coeffs), root, 1), RadicalConstant.of(1728, _F8A2[index][2]))


def cusp_forms_8A2(terms: int = DEFAULT_TERMS, method: str = "hypergeometric") -> tuple[PuiseuxSeries, PuiseuxSeries]:
    """Basis f1 = q^(1/8) - q^(9/8) - ..., f2 = q^(3/8) - 3q^(11/8) + ... of the genus-two cusp forms."""
    if method == "hypergeometric":
        build = cusp_form_8A2_hypergeometric
    elif method == "mlde":
        build = cusp_form_8A2_mlde
    else:
        raise ValueError(f"unknown method {method!r}")
    return build(1, terms).series, build(2, terms).series


# -- period integrals ----------------------------------------------------------


@dataclass(frozen=True)
class PeriodValue:
    value: complex
    tail_bound: float


def _numeric_arrays(f: PuiseuxSeries, nterms: int | None):
    if f.is_zero():
        raise DivergenceError("zero series")
    if f.order <= 0:
        raise DivergenceError("antiderivative of a series with a constant term diverges")
    ex = np.array([float(e) for e in f.exponents()], dtype=float)
    co = np.array([complex(c) for c in f.coeffs], dtype=complex)
    if nterms is not None:
        keep = ex < float(f.order) + nterms
        ex, co = ex[keep], co[keep]
    return ex, co


def antiderivative(f: PuiseuxSeries) -> PuiseuxSeries:
    """u with theta u = f (exponent r coefficient divided by r); needs positive order."""
    if f.order <= 0:
        raise DivergenceError("antiderivative of a series with a constant term diverges")
    return f._with(f.order, f.step, [c / e for e, c in f.terms()], f.prec)


def _u(ex, co, tau: complex) -> complex:
    return complex(np.sum(co * np.exp(2j * np.pi * ex * tau) / (2j * np.pi * ex)))


def _tail_bound(ex, co, step: float, im_min: float) -> float:
    """Bound on the dropped terms of u at two points, assuming |a_r| <= C r^2."""
    C = float(np.max(np.abs(co) / ex ** 2))
    qmin = math.exp(-2 * math.pi * im_min)
    r = ex[-1] + step
    total, term = 0.0, 1.0
    for _ in range(10 ** 6):
        term = C * r * qmin ** r / (2 * math.pi)
        total += term
        if term < 1e-18 * max(total, 1e-300):
            break
        r += step
    return 2 * total


def period_integral(f: PuiseuxSeries, tau0: complex, tau1: complex, nterms: int | None = None) -> PeriodValue:
    """integral_{tau0}^{tau1} f(z) dz via u(tau) = sum a_r e(r tau) / (2 pi i r)."""
    if tau0.imag <= 0 or tau1.imag <= 0:
        raise ValueError("endpoints must lie in the upper half-plane")
    ex, co = _numeric_arrays(f, nterms)
    value = _u(ex, co, tau1) - _u(ex, co, tau0) if tau0 != tau1 else 0j
    bound = _tail_bound(ex, co, float(f.step), min(tau0.imag, tau1.imag))
    return PeriodValue(value, bound)
