"""Generating weights of vector-valued modular forms for the catalog.

The decision procedure: an extension 0 -> rho0 -> rho -> rho1 -> 0 can only
fail to be M-split when rho0 has a weight-10 generator and rho1 a weight-0
generator (or 11 and 1).  When that obstruction is present the answer is
read off a short list of known non-split extensions; in each of them the
connecting map is an isomorphism and the pair (10, 0) becomes (4, 6)
(respectively (11, 1) becomes (5, 7)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclofield import CycNum
from .reps import (
    Character,
    Custom,
    Dual,
    Family,
    Rep,
    ThreeIrrSub,
    TwoDimIndec,
    catalog_rep,
    catalog_tables,
    dual_rep,
    is_isomorphic,
    root_sqrt,
    shape_name,
)


class UndecidableError(ValueError):
    """The input lies outside the classified catalog."""


def h1_dim(k: int) -> int:
    """dim H^1 of the weight-k line bundle on the compactified moduli stack, -11 <= k <= 0."""
    if not -11 <= k <= 0:
        raise UndecidableError(f"H^1 dimension only tabulated for -11 <= k <= 0, got {k}")
    return 1 if k == -10 else 0


@dataclass(frozen=True)
class WeightProfile:
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(sorted(int(k) for k in self.weights)))

    @property
    def multiplicities(self) -> tuple[int, ...]:
        """m_0 .. m_11."""
        return tuple(self.weights.count(k) for k in range(12))

    def m(self, k: int) -> int:
        return self.weights.count(k)

    def __len__(self):
        return len(self.weights)

    def __add__(self, other: "WeightProfile") -> "WeightProfile":
        return WeightProfile(self.weights + other.weights)

    def __str__(self):
        return "(" + ",".join(map(str, self.weights)) + ")"


@dataclass(frozen=True)
class SplitVerdict:
    m_split: bool
    reason: str


# reason tags
NO_OBSTRUCTION = "split: no weight-10/11 generator of the sub paired with weight 0/1 of the quotient"
TWO_DIM_EXCEPTION = "not split: 2-dim (10,0)/(11,1) extension, invariant vector would split rho"
IRR_SUB_EXCEPTION = "not split: irreducible sub with weights (8,10) over the trivial character"
IND_SUB_EXCEPTION = "not split: indecomposable sub with chi^8, chi^10 over the trivial character"
CR_EXCEPTION = "not split: (1,5,0) completely reducible sub, second-order D-equation argument"
ONE_DIM_SUB = "split: one-dimensional sub with irreducible 2-dim quotient is always split"
OBSTRUCTION_RESOLVED_SPLIT = "split: obstruction present but resolved as split for this family"

# (family key, data) -> reason for the extensions known not to split
_NON_SPLIT = {
    ("2dim", (10, 0)): TWO_DIM_EXCEPTION,
    ("2dim", (11, 1)): TWO_DIM_EXCEPTION,
    ("IrrSub", ((8, 10), 0)): IRR_SUB_EXCEPTION,
    ("Y0", (5, 4, 0)): IND_SUB_EXCEPTION,
    ("Y1", (4, 5, 0)): IND_SUB_EXCEPTION,
    ("CR", (1, 5, 0)): CR_EXCEPTION,
}


def _obstruction(rho0: WeightProfile, rho1: WeightProfile) -> bool:
    return (rho0.m(10) > 0 and rho1.m(0) > 0) or (rho0.m(11) > 0 and rho1.m(1) > 0)


def _family_key(family) -> tuple:
    if isinstance(family, TwoDimIndec):
        return ("2dim", (family.a, family.b))
    name = shape_name(family)
    if name is not None:
        return (name, family.triple)
    if isinstance(family, ThreeIrrSub):
        w = irreducible_weights(family.lam1, family.lam2)
        lam3 = root_sqrt(-(family.lam1 * family.lam2), family.sign)
        return ("IrrSub", (w.weights, exponent_weight(lam3, 12)))
    if isinstance(family, Dual) and isinstance(family.of, ThreeIrrSub):
        return ("DualIrrSub", None)
    raise UndecidableError(f"no extension data for family {family}")


def is_m_split(rho0_profile: WeightProfile, rho1_profile: WeightProfile, family_data) -> SplitVerdict:
    for k in rho0_profile.weights + rho1_profile.weights:
        if not 0 <= k <= 11:
            raise UndecidableError(f"weight {k} outside [0, 11]")
    key = _family_key(family_data)
    if not _obstruction(rho0_profile, rho1_profile):
        return SplitVerdict(True, NO_OBSTRUCTION)
    if key in _NON_SPLIT:
        return SplitVerdict(False, _NON_SPLIT[key])
    if key[0] == "DualIrrSub":
        return SplitVerdict(True, ONE_DIM_SUB)
    if key[0] in ("2dim", "IrrSub", "Y0", "Y1", "CR"):
        # every obstructed catalog extension of these shapes is listed above
        return SplitVerdict(True, OBSTRUCTION_RESOLVED_SPLIT)
    raise UndecidableError(f"cannot resolve obstruction for {family_data}")


def _shift_non_split(rho0: WeightProfile, rho1: WeightProfile) -> WeightProfile:
    w0, w1 = list(rho0.weights), list(rho1.weights)
    for hi, lo in ((10, 0), (11, 1)):
        if hi in w0 and lo in w1:
            w0[w0.index(hi)] = hi - 6
            w1[w1.index(lo)] = lo + 6
            return WeightProfile(tuple(w0) + tuple(w1))
    raise AssertionError("non-split verdict without obstruction")


# -- weights of the building blocks ----------------------------------------


def exponent(lam: CycNum) -> Fraction:
    """r in [0, 1) with lam = e(r)."""
    k = lam.root_of_unity_index()
    if k is None:
        raise UndecidableError(f"{lam} is not a root of unity")
    return Fraction(k, lam.level)


def exponent_weight(lam: CycNum, scale: int = 12) -> int:
    r = exponent(lam) * scale
    if r.denominator != 1:
        raise UndecidableError(f"{lam} is not a {scale}-th root of unity")
    return int(r)


def irreducible_weights(lam1: CycNum, lam2: CycNum) -> WeightProfile:
    """(k, k+2) with 2k + 2 = 12 * (trace of the standard exponent matrix)."""
    total = 12 * (exponent(lam1) + exponent(lam2))
    if total.denominator != 1 or total % 2:
        raise UndecidableError(f"irreducible weights undefined for exponent sum {total / 12}")
    k1 = (int(total) - 2) // 2
    if not 0 <= k1 <= 9:
        raise UndecidableError(f"irreducible weights ({k1},{k1 + 2}) leave [0, 11]")
    return WeightProfile((k1, k1 + 2))


def _sub_quot_profiles(family) -> tuple[WeightProfile, WeightProfile]:
    if isinstance(family, TwoDimIndec):
        return WeightProfile((family.a,)), WeightProfile((family.b,))
    name = shape_name(family)
    if name == "CR":
        x1, x2, x3 = family.triple
        return WeightProfile((2 * x1, 2 * x2)), WeightProfile((2 * x3,))
    if name in ("Y0", "Y1"):
        x1, x2, x3 = family.triple
        return generating_weights(TwoDimIndec(2 * x1, 2 * x2)), WeightProfile((2 * x3,))
    if isinstance(family, ThreeIrrSub):
        lam3 = root_sqrt(-(family.lam1 * family.lam2), family.sign)
        return irreducible_weights(family.lam1, family.lam2), WeightProfile((exponent_weight(lam3),))
    if isinstance(family, Dual) and isinstance(family.of, ThreeIrrSub):
        f = family.of
        lam3 = root_sqrt(-(f.lam1 * f.lam2), f.sign)
        sub = WeightProfile((exponent_weight(lam3.inv()),))
        return sub, irreducible_weights(f.lam1.inv(), f.lam2.inv())
    raise UndecidableError(f"family {family} is not an extension in the catalog")


def split_verdict(family) -> SplitVerdict:
    rho0, rho1 = _sub_quot_profiles(family)
    return is_m_split(rho0, rho1, family)


def _identify_dual(family) -> Family:
    """Catalog family isomorphic to the dual of a CR/Y0/Y1 family."""
    r = catalog_rep(shape_name(family), family.triple)
    d = dual_rep(r)
    target = sorted(exponent_weight(x, 6) for x in d.t_eigenvalues())
    for shape, rows in catalog_tables().items():
        for t in rows:
            if sorted(t) == target:
                cand = catalog_rep(shape, t)
                if is_isomorphic(d, cand):
                    return cand.family
    raise UndecidableError(f"dual of {family} not found in the catalog")


def _resolve(descriptor) -> Family:
    if isinstance(descriptor, Rep):
        descriptor = descriptor.family
    if isinstance(descriptor, Custom):
        raise UndecidableError("custom representations are outside the catalog")
    if isinstance(descriptor, Dual):
        inner = descriptor.of
        if isinstance(inner, Dual):
            return _resolve(inner.of)
        if isinstance(inner, Character):
            return Character((-inner.a) % 12)
        if isinstance(inner, TwoDimIndec):
            return TwoDimIndec((-inner.b) % 12, (-inner.a) % 12)
        if shape_name(inner) is not None:
            return _identify_dual(inner)
    return descriptor


def generating_weights(descriptor) -> WeightProfile:
    family = _resolve(descriptor)
    if isinstance(family, Character):
        return WeightProfile((family.a % 12,))
    rho0, rho1 = _sub_quot_profiles(family)
    verdict = is_m_split(rho0, rho1, family)
    if verdict.m_split:
        return rho0 + rho1
    return _shift_non_split(rho0, rho1)


def weights_and_verdict(descriptor) -> tuple[WeightProfile, SplitVerdict | None]:
    family = _resolve(descriptor)
    if isinstance(family, Character):
        return generating_weights(family), None
    return generating_weights(family), split_verdict(family)


__all__ = [
    "UndecidableError",
    "WeightProfile",
    "SplitVerdict",
    "h1_dim",
    "is_m_split",
    "generating_weights",
    "split_verdict",
    "weights_and_verdict",
    "irreducible_weights",
]
