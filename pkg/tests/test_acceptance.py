"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line."""

import itertools
import math
import random
import time
from importlib import resources

import numpy as np
import pytest

from modperiods import cycmat
from modperiods.cyclofield import CycNum, imag_unit, sqrt2, zeta
from modperiods.genweights import weights_and_verdict, WeightProfile
from modperiods.modgroup import IDENTITY, Mat2Z, S, T_pow, decompose
from modperiods.periods import _combine_forms, example_specs, generator_lists, numeric_periods, run_example, same_lattice
from modperiods.qseries import cusp_forms_8A2, eta_pow4, modular_derivative
from modperiods.reps import (
    PSL2,
    ThreeCR,
    TwoDimIndec,
    all_catalog_reps,
    catalog_tables,
    check_relations,
    classify_all,
    evaluate,
    irr_sub_matrices,
    is_decomposable,
    make_rep,
    shape_rep,
    three_irr_sub,
    catalog_rep,
    dual_rep,
)
from modperiods.cli import tables_json

E8, E38, I, R2 = zeta(1, 8), zeta(3, 8), imag_unit(), sqrt2()


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def test_criterion_01_classification(verdict):
    t0 = time.perf_counter()
    rep = classify_all()
    elapsed = time.perf_counter() - t0
    fixture = resources.files("modperiods").joinpath("data/tables.json").read_text(encoding="utf-8")
    ok = tables_json(rep.tables) == fixture
    ok = ok and rep.counts() == {"CR": 6, "Y0": 6, "Y1": 12}
    ok = ok and all(check_relations(r) and is_decomposable(r) is None for r in all_catalog_reps())
    verdict(1, ok and elapsed < 10, f"6+6+12 triples byte-identical, {elapsed:.2f}s")


def _split(r, M):
    Mi = cycmat.inverse(M)
    for X in (r.S_mat, r.T_mat):
        Y = cycmat.matmul(cycmat.matmul(M, X), Mi)
        if any(not Y[2][j].is_zero() or not Y[j][2].is_zero() for j in range(2)):
            return False
    return True


def test_criterion_02_decomposability(verdict):
    ok, n = True, 0
    for k, flip in itertools.product(range(6), (1, -1)):
        lam = zeta(k, 6)
        r = make_rep(*irr_sub_matrices(lam, -lam, lam * flip), PSL2)
        a, s = r.S_mat[0][0], (lam * flip) ** 3
        M = ([[-a - s, 0, 0], [0, -a - s, 1], [0, 0, 1]] if flip == -1 else [[a - s, 0, 1], [0, a - s, 0], [0, 0, 1]])
        ok = ok and check_relations(r) and is_decomposable(r) is not None and _split(r, cycmat.matrix(M))
        n += 1
    for shape, M in (("Y0", [[1, 0, 0], [1, 1, 1], [0, 0, 1]]), ("CR", [[0, -1, 1], [0, 1, 0], [-1, 1, 0]])):
        for t in itertools.product(range(6), repeat=3):
            r = shape_rep(shape, t)
            if len(set(t)) < 3 and check_relations(r):
                ok = ok and is_decomposable(r) is not None and _split(r, cycmat.matrix(M))
                n += 1
    verdict(2, ok, f"{n} repeated-eigenvalue constructions decomposed")


def test_criterion_03_generating_weights(verdict):
    ok, n = True, 0
    for a, b in ((a, b) for a in range(12) for b in range(12) if (a - b) % 12 in (2, 10)):
        want = {(10, 0): (4, 6), (11, 1): (5, 7)}.get((a, b), (a, b))
        ok = ok and weights_and_verdict(TwoDimIndec(a, b))[0] == WeightProfile(want)
        n += 1
    pairs = {(0, 2): (1, 3), (2, 4): (5, 7), (4, 6): (9, 11), (6, 8): (13, 15), (8, 10): (17, 19)}
    non_split = 0
    for pair, (r1, r2) in pairs.items():
        for sign in (1, -1):
            r = three_irr_sub(zeta(r1, 24), zeta(r2, 24), sign)
            lam3 = r.T_mat[2][2]
            two_a = lam3.root_of_unity_index() * 12 // lam3.level
            prof, v = weights_and_verdict(r)
            if pair == (8, 10) and two_a == 0:
                ok = ok and prof == WeightProfile((4, 6, 8)) and not v.m_split
                non_split += 1
            else:
                ok = ok and prof == WeightProfile(pair + (two_a,)) and v.m_split
            n += 1
            if pair != (0, 2):
                ok = ok and weights_and_verdict(dual_rep(r))[1].m_split
    tables = catalog_tables()
    for shape in ("Y0", "Y1"):
        for t in tables[shape]:
            want = {(5, 4, 0): (4, 6, 8), (4, 5, 0): (4, 6, 8), (5, 0, 1): (2, 4, 6)}.get(t, tuple(2 * x for x in t))
            ok = ok and weights_and_verdict(catalog_rep(shape, t))[0] == WeightProfile(want)
            n += 1
    for t in tables["CR"]:
        want = (2, 4, 6) if t == (1, 5, 0) else tuple(2 * x for x in t)
        ok = ok and weights_and_verdict(ThreeCR(*t))[0] == WeightProfile(want)
        n += 1
    verdict(3, ok and non_split == 1, f"{n} weight tuples checked")


def test_criterion_04_genus_one_exact(verdict):
    r = run_example("gamma-prime", numeric=False)
    ok = [v[0] for v in r.exact_periods] == [zeta(1, 3), -1] and r.period_matrix == ((zeta(1, 6),),)
    verdict(4, ok, f"periods e(1/3), -1; ratio {r.ratio}")


def test_criterion_05_genus_one_numeric(verdict):
    t0 = time.perf_counter()
    r = run_example("gamma-prime", terms=10)
    elapsed = time.perf_counter() - t0
    dev = abs(r.numeric_period_matrix[0, 0] - complex(0.5, 0.866025))
    verdict(5, dev < 1e-4 and elapsed < 1, f"|P - (0.5+0.866025i)| = {dev:.1e}, {elapsed:.3f}s")


def test_criterion_06_genus_two_exact(verdict):
    r = run_example("8A2", numeric=False)
    want = [(1, 1), (I, -I), (E8, E38), (E38, E8)]
    spec = example_specs()["8A2"]
    got = [r.exact_periods[i] for i in spec["a_cycles"] + spec["b_cycles"]]
    ok = got == [tuple(cycmat.matrix([w])[0]) for w in want]
    ok = ok and r.period_matrix == cycmat.diag([E8, E38]) and r.siegel
    verdict(6, ok, "Omega_1..4 and P = diag(e(1/8), e(3/8)), Siegel pass")


def test_criterion_07_genus_two_numeric(verdict):
    t0 = time.perf_counter()
    target = np.diag([complex(0.707107, 0.707107), complex(-0.707107, 0.707107)])
    exact = cycmat.to_numpy(cycmat.diag([E8, E38]))
    r150 = run_example("8A2", terms=150, tau0=1j)
    r1000 = run_example("8A2", terms=1000, tau0=1j)
    elapsed = time.perf_counter() - t0
    d150 = float(np.max(np.abs(r150.numeric_period_matrix - exact)))
    d1000 = float(np.max(np.abs(r1000.numeric_period_matrix - exact)))
    ok = d150 < 1e-2 and d1000 < 1e-4 and np.max(np.abs(r150.numeric_period_matrix - target)) < 1e-2
    verdict(7, ok and elapsed < 30, f"150 terms {d150:.1e}, 1000 terms {d1000:.1e}, {elapsed:.2f}s")


def test_criterion_08_genus_one_non_normal(verdict):
    r = run_example("8D1", terms=150)
    hyper = [v[0] for g, v in zip(r.generators, r.exact_periods) if abs(g.trace) > 2]
    ok = set(hyper) == {2 * (2 + R2), 4 * I * (1 + R2), -2 * (2 + R2)}
    listed_lattice = [2 + R2, 2 * I * (1 + R2)]
    ok = ok and same_lattice(list(r.lattice), [2 * x for x in listed_lattice])
    ok = ok and r.ratio == R2 * I
    dev = abs(r.numeric_period_matrix[0, 0] - 1.41421j)
    verdict(8, ok and dev < 1e-2, f"ratio {r.ratio}, numeric deviation {dev:.1e}")


def test_criterion_09_qseries_golden(verdict):
    e = eta_pow4(150)
    f1, f2 = cusp_forms_8A2(150)
    ok = e.head(4) == [1, -4, 2, 8] and e.order.numerator == 1 and e.order.denominator == 6
    ok = ok and f1.head(4) == [1, -1, -6, 5] and f2.head(4) == [1, -3, 1, 2]
    ok = ok and modular_derivative(e, 2).is_zero()
    verdict(9, ok, "eta^4, f1, f2 printed coefficients; D2(eta^4) = 0 to 150 terms")


def _random_sl2(rng, bound=10 ** 6):
    while True:
        c, d = rng.randint(-bound, bound), rng.randint(-bound, bound)
        if math.gcd(c, d) != 1:
            continue
        # extended Euclid
        old_r, r, old_s, s, old_t, t = c, d, 1, 0, 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r == -1:
            old_s, old_t = -old_s, -old_t
        return Mat2Z(old_t, -old_s, c, d)


def _word(rng):
    m = IDENTITY
    for _ in range(8):
        m = m @ (S if rng.random() < 0.4 else T_pow(rng.randint(-3, 3)))
    return m


def test_criterion_10_properties(verdict):
    rng = random.Random(2024)
    words = all(decompose(m).to_matrix() == m for m in (_random_sl2(rng) for _ in range(1000)))
    mult = True
    for r in all_catalog_reps():
        for _ in range(200):
            g, h = _word(rng), _word(rng)
            mult = mult and evaluate(r, g @ h) == cycmat.matmul(evaluate(r, g), evaluate(r, h))
    field = True
    for _ in range(1000):
        x, y, z = (CycNum([rng.randint(-5, 5) for _ in range(8)], 24) for _ in range(3))
        field = field and (x * y) * z == x * (y * z) and x * (y + z) == x * y + x * z
        if not x.is_zero():
            field = field and x * x.inv() == 1
    base = True
    for name in ("gamma-prime", "8A2", "8D1"):
        spec = example_specs()[name]
        forms = _combine_forms(spec["forms"], 150, "mlde")
        gens = generator_lists()[spec["generators"]]
        v1, b1 = numeric_periods(forms, gens, 1j)
        v2, b2 = numeric_periods(forms, gens, 2j)
        base = base and bool(np.all(np.abs(v1 - v2) <= b1 + b2 + 1e-12))
    verdict(10, words and mult and field and base, f"words {words}, multiplicativity {mult}, field {field}, base point {base}")


def test_criterion_11_algebraicity(verdict):
    entries = []
    for name in ("gamma-prime", "8A2", "8D1"):
        r = run_example(name, numeric=False)
        entries += [x for v in r.exact_periods for x in v]
        entries += [x for row in r.period_matrix for x in row]
    ok = all(24 % x.level == 0 for x in entries)
    verdict(11, ok, f"{len(entries)} exact entries in Q(zeta_24)")
