"""Exact periods of modular curves from representation matrices.

For a representation of the form 0 -> rho0 -> rho -> 1 -> 0 with rho(T)
diagonal, the last column of rho(g) for g in the subgroup holds the periods
of the cusp forms along the path from i*infinity to g(i*infinity).  The
numeric side integrates q-expansions between tau0 and g*tau0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from . import cycmat
from .cyclofield import CycNum, parse_cycnum, zeta
from .cycmat import Matrix
from .modgroup import Mat2Z, is_hyperbolic, mobius, parse_generators
from .qseries import (
    DEFAULT_TERMS,
    PuiseuxSeries,
    cusp_forms_8A2,
    eta_pow4,
    period_integral,
)
from .reps import Rep, conjugate_rep, evaluate, three_irr_sub, two_dim_indec

SIEGEL_EPS = 1e-10
INDEPENDENCE_EPS = 1e-9
SEARCH_BOUND = 100


class WrongShapeError(ValueError):
    pass


class RiemannRelationError(ValueError):
    pass


class DegenerateLatticeError(ValueError):
    pass


# -- exact side ---------------------------------------------------------------


def check_extension_shape(r: Rep) -> None:
    """The last row of S and T must be (0, ..., 0, 1)."""
    n = r.dim
    for m in (r.S_mat, r.T_mat):
        last = m[n - 1]
        if not all(x.is_zero() for x in last[:-1]) or last[-1] != 1:
            raise WrongShapeError("representation is not an extension of the trivial character")


def extract_periods(r: Rep, gens: Sequence[Mat2Z], scale=1, components: Sequence[int] | None = None) -> list[tuple[CycNum, ...]]:
    """Scaled last-column entries of rho(g) for each generator g."""
    check_extension_shape(r)
    g = r.dim - 1
    comps = list(components) if components is not None else list(range(g))
    out = []
    for gen in gens:
        if not isinstance(gen, Mat2Z):
            gen = Mat2Z.from_list(gen)
        M = evaluate(r, gen)
        out.append(tuple(M[k][g] * scale for k in comps))
    return out


def assemble_period_matrix(periods: Sequence[Sequence[CycNum]], a_cycle_idx: Sequence[int], b_cycle_idx: Sequence[int]):
    """(A, B, P = B A^-1); column j of A is the period vector of the j-th A-cycle."""
    if len(a_cycle_idx) != len(b_cycle_idx):
        raise ValueError("A- and B-cycle lists differ in length")
    A = cycmat.transpose(tuple(tuple(periods[i]) for i in a_cycle_idx))
    B = cycmat.transpose(tuple(tuple(periods[i]) for i in b_cycle_idx))
    try:
        A_inv = cycmat.inverse(A)
    except cycmat.SingularMatrixError as exc:
        raise RiemannRelationError("A-period matrix is singular") from exc
    return A, B, cycmat.matmul(B, A_inv)


def siegel_check(P: Matrix) -> bool:
    """Exact symmetry and positive-definite imaginary part of the complex embedding."""
    if P != cycmat.transpose(P):
        return False
    im = cycmat.to_numpy(P).imag
    return all(np.linalg.det(im[:k, :k]) > SIEGEL_EPS for k in range(1, len(P) + 1))


def in_cyclotomic_field(x: CycNum, level: int = 24) -> bool:
    return level % x.level == 0


# -- lattices of periods -------------------------------------------------------


def _real_coords(z: complex, w1: complex, w2: complex) -> tuple[float, float]:
    m = np.array([[w1.real, w2.real], [w1.imag, w2.imag]])
    x, y = np.linalg.solve(m, np.array([z.real, z.imag]))
    return float(x), float(y)


def _hnf_rows(vectors: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Row-style Hermite reduction of integer vectors spanning a rank-2 lattice."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    for col in (0, 1):
        piv_rows = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        while len(piv_rows) > 1:
            piv_rows.sort(key=lambda r: abs(r[col]))
            p = piv_rows[0]
            new = [p]
            for r in piv_rows[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                (new if r[col] else rest).append(r)
            piv_rows = new
        if piv_rows:
            basis.append(tuple(piv_rows[0]))
        rows = [r for r in rest if any(r)]
    return basis


def lattice_and_ratio(periods: Sequence[CycNum]) -> tuple[tuple[CycNum, CycNum], CycNum]:
    """Reduced Z-basis (w1, w2) of the period lattice and w2/w1 with Im > 0."""
    vals = [p for p in periods if not p.is_zero()]
    zs = [p.to_complex() for p in vals]
    pair = None
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            cross = (zs[i].conjugate() * zs[j]).imag
            if abs(cross) > INDEPENDENCE_EPS * abs(zs[i]) * abs(zs[j]):
                pair = (i, j)
                break
        if pair:
            break
    if pair is None:
        raise DegenerateLatticeError("periods are R-collinear")
    w1, w2 = vals[pair[0]], vals[pair[1]]
    coords = []
    for p, z in zip(vals, zs):
        x, y = _real_coords(z, zs[pair[0]], zs[pair[1]])
        fx = Fraction(x).limit_denominator(SEARCH_BOUND)
        fy = Fraction(y).limit_denominator(SEARCH_BOUND)
        if w1 * fx + w2 * fy != p:
            raise DegenerateLatticeError(f"period {p} is not a small rational combination of {w1}, {w2}")
        coords.append((fx, fy))
    den = 1
    for fx, fy in coords:
        den = den * fx.denominator // _gcd(den, fx.denominator)
        den = den * fy.denominator // _gcd(den, fy.denominator)
    ints = [(int(fx * den), int(fy * den)) for fx, fy in coords]
    hb = _hnf_rows(ints)
    basis = [w1 * Fraction(a, den) + w2 * Fraction(b, den) for a, b in hb]
    b1, b2 = _gauss_reduce(basis[0], basis[1])
    ratio = b2 / b1
    if ratio.to_complex().imag < 0:
        b2, ratio = -b2, -ratio
    return (b1, b2), ratio


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _gauss_reduce(b1: CycNum, b2: CycNum) -> tuple[CycNum, CycNum]:
    """Lagrange reduction; rounding is numeric, the updates exact."""
    while True:
        z1, z2 = b1.to_complex(), b2.to_complex()
        if abs(z2) < abs(z1):
            b1, b2 = b2, b1
            continue
        mu = round(((z2 * z1.conjugate()).real) / abs(z1) ** 2)
        if mu == 0:
            return b1, b2
        b2 = b2 - b1 * mu


# -- numeric side --------------------------------------------------------------


@dataclass(frozen=True)
class NumericCheck:
    integrals: np.ndarray  # [generator, form]
    tail_bounds: np.ndarray
    scales: np.ndarray  # fitted per-form constants c_k with integral = c_k * exact
    residuals: np.ndarray
    within_bounds: bool
    max_residual: float


def numeric_periods(forms: Sequence[PuiseuxSeries], gens: Sequence[Mat2Z], tau0: complex = 1j, nterms: int | None = None):
    vals = np.zeros((len(gens), len(forms)), dtype=complex)
    bounds = np.zeros((len(gens), len(forms)))
    for j, g in enumerate(gens):
        t1 = mobius(g, tau0)
        for k, f in enumerate(forms):
            pv = period_integral(f, tau0, t1, nterms)
            vals[j, k], bounds[j, k] = pv.value, pv.tail_bound
    return vals, bounds


def numeric_crosscheck(
    forms: Sequence[PuiseuxSeries],
    gens: Sequence[Mat2Z],
    tau0: complex,
    nterms: int | None,
    exact: "PeriodReport | Sequence[Sequence[CycNum]]",
) -> NumericCheck:
    """Compare integrals of each form with the exact periods up to one constant per form.

    The exact periods are attached to the representation's basis, which
    matches the forms only up to a scalar per coordinate; that scalar is
    fitted by weighted least squares (weights favour small tail bounds).
    """
    periods = exact.exact_periods if isinstance(exact, PeriodReport) else exact
    E = np.array([[p.to_complex() for p in vec] for vec in periods], dtype=complex)
    vals, bounds = numeric_periods(forms, gens, tau0, nterms)
    scales = np.zeros(len(forms), dtype=complex)
    for k in range(len(forms)):
        w = 1.0 / (bounds[:, k] + 1e-12)
        den = np.sum(w * np.abs(E[:, k]) ** 2)
        scales[k] = np.sum(w * np.conj(E[:, k]) * vals[:, k]) / den if den else 0
    residuals = vals - E * scales
    slack = bounds + 1e-9 * np.maximum(1.0, np.abs(vals))
    return NumericCheck(vals, bounds, scales, residuals, bool(np.all(np.abs(residuals) <= slack)), float(np.max(np.abs(residuals))))


def numeric_period_matrix(vals: np.ndarray, a_idx: Sequence[int], b_idx: Sequence[int]) -> np.ndarray:
    A = vals[list(a_idx), :].T
    B = vals[list(b_idx), :].T
    return B @ np.linalg.inv(A)


# -- reports and bundled examples ---------------------------------------------


@dataclass
class PeriodReport:
    generators: list[Mat2Z]
    exact_periods: list[tuple[CycNum, ...]]
    A_mat: Matrix
    B_mat: Matrix
    period_matrix: Matrix
    scale: CycNum
    siegel: bool
    numeric_residuals: list = field(default_factory=list)
    name: str = ""
    lattice: tuple[CycNum, CycNum] | None = None
    ratio: CycNum | None = None
    numeric: NumericCheck | None = None
    numeric_period_matrix: np.ndarray | None = None
    numeric_deviation: float | None = None
    expected_ok: dict = field(default_factory=dict)

    @property
    def genus(self) -> int:
        return len(self.period_matrix)

    def algebraic_over_Q_zeta24(self) -> bool:
        entries = [x for vec in self.exact_periods for x in vec]
        entries += [x for row in self.period_matrix for x in row]
        return all(in_cyclotomic_field(x) for x in entries)

    def to_json_obj(self) -> dict:
        def cm(m):
            return [[str(x) for x in row] for row in m]

        out = {
            "example": self.name,
            "generators": [g.as_list() for g in self.generators],
            "scale": str(self.scale),
            "exact_periods": [[str(x) for x in v] for v in self.exact_periods],
            "A": cm(self.A_mat),
            "B": cm(self.B_mat),
            "period_matrix": cm(self.period_matrix),
            "siegel": self.siegel,
            "algebraic_in_Q_zeta24": self.algebraic_over_Q_zeta24(),
            "expected_checks": self.expected_ok,
        }
        if self.lattice is not None:
            out["lattice_basis"] = [str(x) for x in self.lattice]
            out["ratio"] = str(self.ratio)
        if self.numeric is not None:
            out["numeric"] = {
                "residuals": [[[z.real, z.imag] for z in row] for row in self.numeric.residuals],
                "tail_bounds": self.numeric.tail_bounds.tolist(),
                "fitted_scales": [[z.real, z.imag] for z in self.numeric.scales],
                "within_tail_bounds": self.numeric.within_bounds,
                "period_matrix": [[[z.real, z.imag] for z in row] for row in self.numeric_period_matrix],
                "deviation_from_exact": self.numeric_deviation,
            }
        return out


@lru_cache(maxsize=1)
def example_specs() -> dict:
    text = resources.files("modperiods").joinpath("data/examples.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=1)
def generator_lists() -> dict[str, list[Mat2Z]]:
    text = resources.files("modperiods").joinpath("data/generators.json").read_text(encoding="utf-8")
    return {k: parse_generators(v) for k, v in json.loads(text).items()}


def rep_from_spec(spec: dict) -> Rep:
    kind = spec["kind"]
    if kind == "two_dim":
        return two_dim_indec(spec["a"], spec["b"])
    if kind == "irr_sub":
        return three_irr_sub(zeta(*spec["lam1"]), zeta(*spec["lam2"]), spec["sign"])
    raise ValueError(f"unknown rep kind {kind!r}")


def _cyc_matrix(rows) -> Matrix:
    return cycmat.matrix([[parse_cycnum(x) for x in row] for row in rows])


def example_rep(name: str) -> Rep:
    spec = example_specs()[name]
    r = rep_from_spec(spec["rep"])
    if "conjugator" in spec:
        M = _cyc_matrix(spec["conjugator"])
        if spec.get("conjugate_by_transpose"):
            M = cycmat.transpose(M)
        r = conjugate_rep(r, M)
    return r


def _basis_forms(terms: int, method: str) -> dict[str, PuiseuxSeries]:
    f1, f2 = cusp_forms_8A2(terms, method)
    return {"eta4": eta_pow4(terms), "f1": f1, "f2": f2}


def _combine_forms(spec_forms, terms: int, method: str) -> list[PuiseuxSeries]:
    needed = {name for combo in spec_forms for name in combo}
    if needed <= {"eta4"}:
        basis = {"eta4": eta_pow4(terms)}
    else:
        basis = _basis_forms(terms, method)
    out = []
    for combo in spec_forms:
        acc = None
        for name, coeff in combo.items():
            c = parse_cycnum(coeff)
            c = c.rational() if c.is_rational() else c.to_complex()
            term = basis[name] * c if c != 1 else basis[name]
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def run_example(
    name: str,
    terms: int = DEFAULT_TERMS,
    tau0: complex = 1j,
    numeric: bool = True,
    method: str = "mlde",
) -> PeriodReport:
    """Exact pipeline for a bundled example, plus the numeric cross-check."""
    spec = example_specs()[name]
    gens = generator_lists()[spec["generators"]]
    r = example_rep(name)
    scale = parse_cycnum(spec["scale"])
    periods = extract_periods(r, gens, scale, spec.get("components"))
    A, B, P = assemble_period_matrix(periods, spec["a_cycles"], spec["b_cycles"])
    report = PeriodReport(gens, periods, A, B, P, scale, siegel_check(P), name=name)
    if len(P) == 1:
        report.lattice, report.ratio = lattice_and_ratio([v[0] for v in periods])
    report.expected_ok = check_expected(report, spec.get("expected", {}))
    if numeric:
        forms = _combine_forms(spec["forms"], terms, method)
        chk = numeric_crosscheck(forms, gens, tau0, None, report)
        report.numeric = chk
        report.numeric_residuals = chk.residuals.tolist()
        NP = numeric_period_matrix(chk.integrals, spec["numeric_a_cycles"], spec["numeric_b_cycles"])
        report.numeric_period_matrix = NP
        report.numeric_deviation = float(np.max(np.abs(NP - cycmat.to_numpy(P))))
    return report


def check_expected(report: PeriodReport, expected: dict) -> dict:
    """Compare the exact pipeline against the fixture values; name -> bool."""
    out = {}
    if "periods" in expected:
        out["periods"] = [list(v) for v in report.exact_periods] == [[parse_cycnum(x) for x in v] for v in expected["periods"]]
    if "cycle_periods" in expected:
        spec = example_specs()[report.name]
        got = [report.exact_periods[i] for i in list(spec["a_cycles"]) + list(spec["b_cycles"])]
        want = [tuple(parse_cycnum(x) for x in v) for v in expected["cycle_periods"]]
        out["cycle_periods"] = got == want
    if "period_matrix" in expected:
        out["period_matrix"] = report.period_matrix == _cyc_matrix(expected["period_matrix"])
    if "hyperbolic_periods" in expected:
        hyp = [v[0] for g, v in zip(report.generators, report.exact_periods) if is_hyperbolic(g)]
        want = {parse_cycnum(x) for x in expected["hyperbolic_periods"]}
        out["hyperbolic_periods"] = set(hyp) == want
    if "lattice_generators" in expected and report.lattice is not None:
        factor = parse_cycnum(expected.get("lattice_factor", "[N=24] 1"))
        listed = [parse_cycnum(x) * factor for x in expected["lattice_generators"]]
        out["lattice"] = same_lattice(list(report.lattice), listed)
    out["siegel"] = report.siegel
    out["algebraic"] = report.algebraic_over_Q_zeta24()
    return out


def same_lattice(basis1: Sequence[CycNum], basis2: Sequence[CycNum]) -> bool:
    """Each basis lies in the Z-span of the other (exact check)."""

    def contains(basis, vecs):
        w1, w2 = basis
        z1, z2 = w1.to_complex(), w2.to_complex()
        for v in vecs:
            x, y = _real_coords(v.to_complex(), z1, z2)
            ix, iy = round(x), round(y)
            if w1 * ix + w2 * iy != v:
                return False
        return True

    return contains(basis1, basis2) and contains(basis2, basis1)


EXAMPLES = ("gamma-prime", "8A2", "8D1")
