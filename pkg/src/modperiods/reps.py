"""Representations of the modular group in dimensions one to three.

A :class:`Rep` is a pair of exact matrices (images of S and T) together
with a group flag and a family tag.  The three-dimensional catalog consists
of the shapes with a two-dimensional subrepresentation:

* ``CR``: completely reducible sub, S = [[-s,0,1],[0,-s,1],[0,0,s]]
* ``Y0``: indecomposable sub, S = [[-s,1,1],[0,s,0],[0,0,s]]
* ``Y1``: indecomposable sub, S = [[s,-2s,1],[0,-s,1],[0,0,s]]
* ``IrrSub``: irreducible sub, parametrised by two eigenvalues and a sign

with T diagonal and eigenvalues e(x_j/6) in the first three shapes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Union

from . import cycmat
from .cycmat import Matrix, Vector
from .cyclofield import DEFAULT_LEVEL, CycNum, zeta
from .modgroup import Mat2Z, decompose, evaluate_word

PSL2 = "PSL2"
SL2 = "SL2"


class RepError(ValueError):
    pass


class NotIndecomposableFamilyError(RepError):
    pass


class NotInCatalogError(RepError):
    pass


class RelationCheckError(RepError):
    pass


class PreconditionError(RepError):
    pass


class DecomposableCaseError(RepError):
    pass


class UnsupportedInputError(RepError):
    pass


# -- family tags ------------------------------------------------------------


@dataclass(frozen=True)
class Character:
    a: int

    def __str__(self):
        return f"chi^{self.a}"


@dataclass(frozen=True)
class TwoDimIndec:
    a: int
    b: int

    def __str__(self):
        return f"rho_({self.a},{self.b})"


@dataclass(frozen=True)
class ThreeCR:
    x1: int
    x2: int
    x3: int

    @property
    def triple(self):
        return (self.x1, self.x2, self.x3)

    def __str__(self):
        return f"CR{self.triple}"


@dataclass(frozen=True)
class ThreeIndY0(ThreeCR):
    def __str__(self):
        return f"Y0{self.triple}"


@dataclass(frozen=True)
class ThreeIndY1(ThreeCR):
    def __str__(self):
        return f"Y1{self.triple}"


@dataclass(frozen=True)
class ThreeIrrSub:
    lam1: CycNum
    lam2: CycNum
    sign: int

    def __str__(self):
        return f"IrrSub({self.lam1}, {self.lam2}, {self.sign:+d})"


@dataclass(frozen=True)
class Dual:
    of: "Family"

    def __str__(self):
        return f"dual({self.of})"


@dataclass(frozen=True)
class Custom:
    label: str = ""

    def __str__(self):
        return f"custom({self.label})" if self.label else "custom"


Family = Union[Character, TwoDimIndec, ThreeCR, ThreeIndY0, ThreeIndY1, ThreeIrrSub, Dual, Custom]

SHAPES = {"CR": ThreeCR, "Y0": ThreeIndY0, "Y1": ThreeIndY1}


def shape_name(family) -> str | None:
    for name, cls in SHAPES.items():
        if type(family) is cls:
            return name
    return None


# -- the Rep type -----------------------------------------------------------


@dataclass(frozen=True)
class Rep:
    S_mat: Matrix
    T_mat: Matrix
    group: str = PSL2
    family: Family = field(default_factory=Custom)

    def __post_init__(self):
        if self.group not in (PSL2, SL2):
            raise ValueError(f"group must be {PSL2!r} or {SL2!r}")
        n = len(self.S_mat)
        if len(self.T_mat) != n or any(len(r) != n for r in self.S_mat + self.T_mat):
            raise ValueError("S_mat and T_mat must be square of equal size")

    @property
    def dim(self) -> int:
        return len(self.S_mat)

    @property
    def level(self) -> int:
        return cycmat.level_of(self.S_mat)

    @property
    def minus_id_img(self) -> Matrix | None:
        """Image of -I: S^2 for SL2, None (identity) for PSL2."""
        if self.group == PSL2:
            return None
        return cycmat.matmul(self.S_mat, self.S_mat)

    def t_eigenvalues(self) -> tuple[CycNum, ...]:
        if not cycmat.is_diagonal(self.T_mat):
            raise UnsupportedInputError("T_mat is not diagonal")
        return tuple(self.T_mat[i][i] for i in range(self.dim))

    def describe(self) -> str:
        return (
            f"{self.family}  [{self.group}, dim {self.dim}]\n"
            f"S =\n{cycmat.format_matrix(self.S_mat)}\n"
            f"T =\n{cycmat.format_matrix(self.T_mat)}"
        )


def make_rep(S_rows, T_rows, group: str = PSL2, family: Family | None = None, level: int | None = None) -> Rep:
    """Build a Rep from nested lists, unifying the level of both matrices."""
    S_m = cycmat.matrix(S_rows, level)
    T_m = cycmat.matrix(T_rows, level)
    lev = max(cycmat.level_of(S_m), cycmat.level_of(T_m))
    S_m, T_m = cycmat.matrix(S_m, lev), cycmat.matrix(T_m, lev)
    return Rep(S_m, T_m, group, family if family is not None else Custom())


def check_relations(r: Rep) -> bool:
    """PSL2: S^2 = (ST)^3 = 1.  SL2: S^4 = 1 and S^2 = (ST)^3."""
    try:
        s2 = cycmat.matmul(r.S_mat, r.S_mat)
        st = cycmat.matmul(r.S_mat, r.T_mat)
        st3 = cycmat.matmul(cycmat.matmul(st, st), st)
    except ValueError:
        return False
    if r.group == PSL2:
        return cycmat.is_identity(s2) and cycmat.is_identity(st3)
    return cycmat.is_identity(cycmat.matmul(s2, s2)) and s2 == st3


def _verified(r: Rep) -> Rep:
    if not check_relations(r):
        raise RelationCheckError(f"{r.family}: defining relations fail")
    return r


# -- catalog data -----------------------------------------------------------


@lru_cache(maxsize=1)
def catalog_tables() -> dict[str, tuple[tuple[int, int, int], ...]]:
    """The three tables of indecomposable triples, read from package data."""
    text = resources.files("modperiods").joinpath("data/tables.json").read_text(encoding="utf-8")
    raw = json.loads(text)
    return {k: tuple(tuple(t) for t in raw[k]) for k in SHAPES}


# -- constructors -----------------------------------------------------------


def char_rep(a: int, group: str = SL2, level: int = DEFAULT_LEVEL) -> Rep:
    a %= 12
    if group == PSL2 and a % 2:
        raise PreconditionError(f"chi^{a} does not factor through PSL2 (odd a)")
    t = zeta(a, 12, level)
    return _verified(make_rep([[t ** -3]], [[t]], group, Character(a), level))


def _two_dim_matrices(a: int, b: int, level: int):
    sigma = zeta(b, 12, level) ** -3
    return [[-sigma, 1], [0, sigma]], [[zeta(a, 12, level), 0], [0, zeta(b, 12, level)]]


def two_dim_indec(a: int, b: int, level: int = DEFAULT_LEVEL) -> Rep:
    """rho_(a,b): extension of chi^b by chi^a, T = diag(e(a/12), e(b/12))."""
    a, b = a % 12, b % 12
    if (a - b) % 12 not in (2, 10):
        raise NotIndecomposableFamilyError(f"a-b = {a - b} is not +-2 mod 12")
    S_rows, T_rows = _two_dim_matrices(a, b, level)
    group = PSL2 if a % 2 == 0 else SL2
    return _verified(make_rep(S_rows, T_rows, group, TwoDimIndec(a, b), level))


def _shape_matrices(shape: str, triple, level: int = DEFAULT_LEVEL):
    lam = [zeta(x, 6, level) for x in triple]
    if shape == "CR":
        s = lam[2] ** 3
        S_rows = [[-s, 0, 1], [0, -s, 1], [0, 0, s]]
    elif shape == "Y0":
        s = -(lam[0] ** 3)
        S_rows = [[-s, 1, 1], [0, s, 0], [0, 0, s]]
    elif shape == "Y1":
        s = lam[0] ** 3
        S_rows = [[s, -2 * s, 1], [0, -s, 1], [0, 0, s]]
    else:
        raise ValueError(f"unknown shape {shape!r}")
    return S_rows, [[lam[0], 0, 0], [0, lam[1], 0], [0, 0, lam[2]]]


def shape_rep(shape: str, triple, level: int = DEFAULT_LEVEL, family: Family | None = None) -> Rep:
    """Unchecked shape instance (any triple); used for brute-force search."""
    triple = tuple(x % 6 for x in triple)
    S_rows, T_rows = _shape_matrices(shape, triple, level)
    fam = family if family is not None else Custom(f"{shape}{triple}")
    return make_rep(S_rows, T_rows, PSL2, fam, level)


def _catalog_rep(shape: str, triple, level: int) -> Rep:
    triple = tuple(int(x) % 6 for x in triple)
    if triple not in catalog_tables()[shape]:
        raise NotInCatalogError(f"{triple} is not a {shape} catalog triple")
    return _verified(shape_rep(shape, triple, level, SHAPES[shape](*triple)))


def three_cr(x1: int, x2: int, x3: int, level: int = DEFAULT_LEVEL) -> Rep:
    return _catalog_rep("CR", (x1, x2, x3), level)


def three_ind_y0(x1: int, x2: int, x3: int, level: int = DEFAULT_LEVEL) -> Rep:
    return _catalog_rep("Y0", (x1, x2, x3), level)


def three_ind_y1(x1: int, x2: int, x3: int, level: int = DEFAULT_LEVEL) -> Rep:
    return _catalog_rep("Y1", (x1, x2, x3), level)


def catalog_rep(shape: str, triple, level: int = DEFAULT_LEVEL) -> Rep:
    return _catalog_rep(shape, triple, level)


def root_sqrt(x: CycNum, sign: int = 1) -> CycNum:
    """Square root of a root of unity e(k/N): sign * e(k/2N), k in [0, N)."""
    k = x.root_of_unity_index()
    if k is None:
        raise PreconditionError(f"{x} is not a root of unity at its level")
    r = Fraction(k, 2 * x.level)
    root = zeta(r.numerator, r.denominator, max(x.level, r.denominator) if x.level % r.denominator else x.level)
    return root if sign == 1 else -root


def irr_sub_matrices(lam1: CycNum, lam2: CycNum, lam3: CycNum):
    """S and T rows for the irreducible-sub shape; no validity checks."""
    a = (lam1 * lam2 * (lam1 - lam2)).inv()
    s = lam3 ** 3
    S_rows = [[a, -a - s, 1], [a - s, -a, 1], [0, 0, s]]
    return S_rows, [[lam1, 0, 0], [0, lam2, 0], [0, 0, lam3]]


def three_irr_sub(lam1: CycNum, lam2: CycNum, sign: int = 1) -> Rep:
    """Extension of a character by the irreducible 2-dim piece with T-eigenvalues lam1, lam2.

    lam3 is the square root of -lam1*lam2 selected by ``sign``.
    """
    if sign not in (1, -1):
        raise PreconditionError("sign must be +1 or -1")
    lam1, lam2 = cycmat.matrix([[lam1, lam2]])[0]
    for lam in (lam1, lam2):
        if lam.root_of_unity_index() is None:
            raise PreconditionError(f"{lam} is not a root of unity")
    if lam1 == lam2:
        raise PreconditionError("eigenvalues must be distinct")
    if lam2 == -lam1:
        raise DecomposableCaseError(
            "eigenvalue ratio -1: lam3 = +-lam1 repeats an eigenvalue and the extension splits"
        )
    if (lam1 * lam2) ** 3 != -1:
        raise PreconditionError("(lam1*lam2)^3 must equal -1 so that lam3 is a sixth root of unity")
    lam3 = root_sqrt(-(lam1 * lam2), sign)
    if lam3 in (lam1, lam2):
        raise DecomposableCaseError("lam3 coincides with an eigenvalue of the subrepresentation")
    S_rows, T_rows = irr_sub_matrices(lam1, lam2, lam3)
    a = S_rows[0][0]
    assert a * a == -(lam1 * lam2) / ((lam1 - lam2) ** 2)
    return _verified(make_rep(S_rows, T_rows, PSL2, ThreeIrrSub(lam1, lam2, sign)))


# -- derived constructions --------------------------------------------------


def _flip(n: int, level: int) -> Matrix:
    rows = [[1 if j == n - 1 - i else 0 for j in range(n)] for i in range(n)]
    return cycmat.matrix(rows, level)


def dual_rep(r: Rep) -> Rep:
    """Contragredient g -> rho(g^-1)^t, re-ordered by the antidiagonal flip.

    For a catalog rep with invariant plane this puts the invariant line first.
    """
    P = _flip(r.dim, r.level)

    def tr(m: Matrix) -> Matrix:
        return cycmat.matmul(cycmat.matmul(P, cycmat.transpose(cycmat.inverse(m))), P)

    fam = r.family.of if isinstance(r.family, Dual) else Dual(r.family)
    return Rep(tr(r.S_mat), tr(r.T_mat), r.group, fam)


def conjugate_rep(r: Rep, M: Matrix) -> Rep:
    """The similar rep M rho M^-1."""
    M = cycmat.matrix(M, max(r.level, cycmat.level_of(cycmat.matrix(M))))
    Mi = cycmat.inverse(M)

    def cj(x: Matrix) -> Matrix:
        return cycmat.matmul(cycmat.matmul(M, x), Mi)

    return Rep(cj(r.S_mat), cj(r.T_mat), r.group, r.family)


def direct_sum(*reps: Rep) -> Rep:
    n = sum(r.dim for r in reps)
    level = max(r.level for r in reps)
    zero = CycNum.from_rational(0, level)

    def block(mats):
        rows, off = [], 0
        for m in mats:
            for row in m:
                rows.append([zero] * off + list(row) + [zero] * (n - off - len(row)))
            off += len(m)
        return rows

    group = SL2 if any(r.group == SL2 for r in reps) else PSL2
    label = "+".join(str(r.family) for r in reps)
    return make_rep(block([r.S_mat for r in reps]), block([r.T_mat for r in reps]), group, Custom(label), level)


def evaluate(r: Rep, M: Mat2Z) -> Matrix:
    if not isinstance(M, Mat2Z):
        M = Mat2Z.from_list(M)
    return evaluate_word(decompose(M), r.S_mat, r.T_mat, r.minus_id_img)


# -- decomposability and isomorphism ---------------------------------------


@dataclass(frozen=True)
class DecompositionWitness:
    """An invariant line and an invariant plane (kernel of ``covector``) in direct sum."""

    line: Vector
    covector: Vector
    plane: tuple[Vector, Vector]
    t_eigenvalue: CycNum
    s_eigenvalue: CycNum

    def change_of_basis(self) -> Matrix:
        """Columns: plane basis then the line; conjugating by its inverse gives 2+1 blocks."""
        cols = [self.plane[0], self.plane[1], self.line]
        return cycmat.transpose(tuple(tuple(c) for c in cols))


def _fourth_roots(level: int):
    return [zeta(k, 4, level) for k in range(4)]


def _common_eigenspaces(S_m: Matrix, T_m: Matrix, lams, level: int):
    n = len(S_m)
    eye = cycmat.identity(n, level)
    out = []
    for lam in lams:
        for sig in _fourth_roots(level):
            system = cycmat.stack(
                cycmat.sub(T_m, cycmat.scale(eye, lam)),
                cycmat.sub(S_m, cycmat.scale(eye, sig)),
            )
            basis = cycmat.nullspace(system)
            if basis:
                out.append((lam, sig, basis))
    return out


def _dot(u: Vector, v: Vector) -> CycNum:
    acc = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        acc = acc + x * y
    return acc


def is_decomposable(r: Rep) -> DecompositionWitness | None:
    """Witness for rho = (2-dim) + (1-dim), or None if no such splitting exists."""
    if r.dim != 3:
        raise UnsupportedInputError("decomposability test is for dimension 3")
    lams = list(dict.fromkeys(r.t_eigenvalues()))
    level = r.level
    lines = _common_eigenspaces(r.S_mat, r.T_mat, lams, level)
    if not lines:
        return None
    covecs = _common_eigenspaces(cycmat.transpose(r.S_mat), cycmat.transpose(r.T_mat), lams, level)
    for lam, sig, vs in lines:
        for lam2, sig2, ws in covecs:
            if lam2 != lam or sig2 != sig:
                continue
            for v in vs:
                for w in ws:
                    if not _dot(w, v).is_zero():
                        plane = cycmat.nullspace((w,))
                        return DecompositionWitness(v, w, (plane[0], plane[1]), lam, sig)
    return None


def intertwiners(r1: Rep, r2: Rep) -> list[Matrix]:
    """Basis of {X : X rho1(g) = rho2(g) X}, X of shape dim2 x dim1."""
    n1, n2 = r1.dim, r2.dim
    level = max(r1.level, r2.level)
    A1 = [cycmat.matrix(m, level) for m in (r1.S_mat, r1.T_mat)]
    A2 = [cycmat.matrix(m, level) for m in (r2.S_mat, r2.T_mat)]
    zero = CycNum.from_rational(0, level)
    rows = []
    # unknown X[i][j] has index i*n1 + j; equation (X A1 - A2 X)[i][k] = 0
    for m1, m2 in zip(A1, A2):
        for i in range(n2):
            for k in range(n1):
                eq = [zero] * (n1 * n2)
                for j in range(n1):
                    eq[i * n1 + j] = eq[i * n1 + j] + m1[j][k]
                for l in range(n2):
                    eq[l * n1 + k] = eq[l * n1 + k] - m2[i][l]
                rows.append(tuple(eq))
    basis = cycmat.nullspace(tuple(rows))
    return [tuple(tuple(v[i * n1:(i + 1) * n1]) for i in range(n2)) for v in basis]


def isomorphism(r1: Rep, r2: Rep) -> Matrix | None:
    """An invertible intertwiner X with X rho1 X^-1 = rho2, if one is found."""
    if r1.dim != r2.dim:
        return None
    basis = intertwiners(r1, r2)
    if not basis:
        return None
    # invertible elements form a Zariski-open set; small integer combinations suffice
    for coeffs in itertools.product(range(-2, 3), repeat=len(basis)):
        if not any(coeffs):
            continue
        X = basis[0]
        X = cycmat.scale(X, coeffs[0])
        for c, B in zip(coeffs[1:], basis[1:]):
            if c:
                X = cycmat.add(X, cycmat.scale(B, c))
        try:
            cycmat.inverse(X)
        except cycmat.SingularMatrixError:
            continue
        return X
    return None


def is_isomorphic(r1: Rep, r2: Rep) -> bool:
    return isomorphism(r1, r2) is not None


# -- classification ---------------------------------------------------------


def _is_representative(shape: str, t) -> bool:
    # the tables pick one triple per relabeling orbit
    if shape == "CR":  # lam1 <-> lam2 swap; keep lam1 = lam3 * e(1/6)
        return (t[0] - t[2]) % 6 == 1
    if shape == "Y0":  # lam2 <-> lam3 swap; keep x2 > x3
        return t[1] > t[2]
    return True


def _presentation_key(shape: str, t):
    if shape == "CR":
        return (t[2],)
    if shape == "Y0":
        return (t[2], (t[0] - t[2]) % 6)
    return (t[1], (t[1] - t[0]) % 6)


@dataclass(frozen=True)
class CatalogReport:
    tables: dict[str, tuple[tuple[int, int, int], ...]]
    candidates_passing_relations: dict[str, int]
    decomposable_rejected: dict[str, int]

    def counts(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.tables.items()}

    def to_json_obj(self) -> dict:
        return {k: [list(t) for t in v] for k, v in self.tables.items()}


def classify_all(level: int = DEFAULT_LEVEL) -> CatalogReport:
    """Brute-force search over all triples in {0..5}^3 for each S-shape."""
    tables, passing, rejected = {}, {}, {}
    for shape in SHAPES:
        found, n_pass, n_rej = [], 0, 0
        for t in itertools.product(range(6), repeat=3):
            r = shape_rep(shape, t, level)
            if not check_relations(r):
                continue
            n_pass += 1
            if is_decomposable(r) is not None:
                n_rej += 1
                continue
            if _is_representative(shape, t):
                found.append(t)
        tables[shape] = tuple(sorted(found, key=lambda t: _presentation_key(shape, t)))
        passing[shape] = n_pass
        rejected[shape] = n_rej
    return CatalogReport(tables, passing, rejected)


def all_catalog_reps(level: int = DEFAULT_LEVEL) -> list[Rep]:
    return [_catalog_rep(shape, t, level) for shape, rows in catalog_tables().items() for t in rows]
