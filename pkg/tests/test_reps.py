import itertools
import json
import random
from importlib import resources

import pytest

from modperiods import cycmat
from modperiods.cyclofield import zeta
from modperiods.modgroup import IDENTITY, S, T_pow
from modperiods.reps import (
    PSL2,
    SL2,
    DecomposableCaseError,
    NotInCatalogError,
    NotIndecomposableFamilyError,
    PreconditionError,
    all_catalog_reps,
    catalog_rep,
    catalog_tables,
    char_rep,
    check_relations,
    classify_all,
    conjugate_rep,
    direct_sum,
    dual_rep,
    evaluate,
    irr_sub_matrices,
    is_decomposable,
    is_isomorphic,
    make_rep,
    shape_rep,
    three_irr_sub,
    two_dim_indec,
)

TABLE_CR = [(1, 5, 0), (2, 0, 1), (3, 1, 2), (4, 2, 3), (5, 3, 4), (0, 4, 5)]
TABLE_Y0 = [(1, 2, 0), (5, 4, 0), (2, 3, 1), (0, 5, 1), (3, 4, 2), (4, 5, 3)]
TABLE_Y1 = [(5, 0, 1), (1, 0, 5), (0, 1, 2), (2, 1, 0), (1, 2, 3), (3, 2, 1),
            (2, 3, 4), (4, 3, 2), (3, 4, 5), (5, 4, 3), (4, 5, 0), (0, 5, 4)]


def blocks_split(r, M):
    """True if M rho M^-1 is block diagonal with the third coordinate split off."""
    Mi = cycmat.inverse(M)
    for X in (r.S_mat, r.T_mat):
        Y = cycmat.matmul(cycmat.matmul(M, X), Mi)
        if any(not Y[2][j].is_zero() or not Y[j][2].is_zero() for j in range(2)):
            return False
    return True


def random_word_matrix(rng, length=8):
    m = IDENTITY
    for _ in range(length):
        m = m @ (S if rng.random() < 0.4 else T_pow(rng.randint(-3, 3)))
    return m


def test_catalog_fixture_matches_tables():
    t = catalog_tables()
    assert list(t["CR"]) == TABLE_CR
    assert list(t["Y0"]) == TABLE_Y0
    assert list(t["Y1"]) == TABLE_Y1


def test_classification_reproduces_tables():
    rep = classify_all()
    assert rep.tables == catalog_tables()
    assert rep.counts() == {"CR": 6, "Y0": 6, "Y1": 12}
    assert rep.candidates_passing_relations == {"CR": 24, "Y0": 24, "Y1": 12}
    assert rep.decomposable_rejected == {"CR": 12, "Y0": 12, "Y1": 0}


def test_catalog_reps_are_indecomposable():
    reps = all_catalog_reps()
    assert len(reps) == 24
    for r in reps:
        assert check_relations(r)
        assert is_decomposable(r) is None


def test_cr_example_matrices():
    r = catalog_rep("CR", (1, 5, 0))
    assert r.T_mat == cycmat.diag([zeta(1, 6), zeta(5, 6), 1])
    with pytest.raises(NotInCatalogError):
        catalog_rep("CR", (0, 0, 0))


def test_two_dim_family():
    for a in range(12):
        for b in range(12):
            if (a - b) % 12 in (2, 10):
                r = two_dim_indec(a, b)
                assert check_relations(r)
                assert r.group == (PSL2 if a % 2 == 0 else SL2)
    with pytest.raises(NotIndecomposableFamilyError):
        two_dim_indec(3, 0)


def test_characters():
    for a in range(12):
        assert check_relations(char_rep(a))
    with pytest.raises(PreconditionError):
        char_rep(1, group=PSL2)


def test_irr_sub_examples():
    r = three_irr_sub(zeta(1, 8), zeta(3, 8), 1)
    assert check_relations(r) and is_decomposable(r) is None
    r2 = three_irr_sub(zeta(1, 8), zeta(3, 8), -1)
    assert not is_isomorphic(r, r2)
    with pytest.raises(DecomposableCaseError):
        three_irr_sub(zeta(1, 8), zeta(5, 8), 1)


@pytest.mark.parametrize("k", range(6))
@pytest.mark.parametrize("flip", [1, -1])
def test_irr_sub_repeated_eigenvalue_decompositions(k, flip):
    lam = zeta(k, 6)
    l3 = lam * flip
    S_rows, T_rows = irr_sub_matrices(lam, -lam, l3)
    r = make_rep(S_rows, T_rows, PSL2)
    assert check_relations(r)
    assert is_decomposable(r) is not None
    a, s = r.S_mat[0][0], l3 ** 3
    if flip == -1:  # lam2 = lam3
        M = cycmat.matrix([[-a - s, 0, 0], [0, -a - s, 1], [0, 0, 1]])
    else:  # lam3 = lam1
        M = cycmat.matrix([[a - s, 0, 1], [0, a - s, 0], [0, 0, 1]])
    assert blocks_split(r, M)


@pytest.mark.parametrize(
    "shape,M",
    [
        ("Y0", [[1, 0, 0], [1, 1, 1], [0, 0, 1]]),
        ("CR", [[0, -1, 1], [0, 1, 0], [-1, 1, 0]]),
    ],
)
def test_shape_repeated_eigenvalue_decompositions(shape, M):
    M = cycmat.matrix(M)
    seen = 0
    for t in itertools.product(range(6), repeat=3):
        if len(set(t)) == 3:
            continue
        r = shape_rep(shape, t)
        if not check_relations(r):
            continue
        seen += 1
        w = is_decomposable(r)
        assert w is not None
        assert blocks_split(r, M)
        P = w.change_of_basis()
        assert blocks_split(r, cycmat.inverse(P))
    assert seen == 12


def test_dual_and_conjugate():
    r = catalog_rep("Y1", (5, 0, 1))
    d = dual_rep(r)
    assert check_relations(d)
    assert is_isomorphic(dual_rep(d), r)
    M = cycmat.matrix([[1, 2, 0], [0, 1, 0], [0, 3, 1]])
    c = conjugate_rep(r, M)
    assert is_isomorphic(c, r)
    rng = random.Random(0)
    g = random_word_matrix(rng)
    assert evaluate(c, g) == cycmat.matmul(cycmat.matmul(M, evaluate(r, g)), cycmat.inverse(M))


def test_direct_sum_is_decomposable():
    r = direct_sum(two_dim_indec(2, 0), char_rep(4, PSL2))
    assert check_relations(r)
    assert is_decomposable(r) is not None


def test_evaluate_generators():
    r = catalog_rep("CR", (2, 0, 1))
    assert evaluate(r, S) == r.S_mat
    assert evaluate(r, T_pow(1)) == r.T_mat
    assert cycmat.is_identity(evaluate(r, IDENTITY))


PAIRS_PER_REP = 200


@pytest.mark.parametrize("shape,triple", [(s, t) for s, rows in
                                          [("CR", TABLE_CR), ("Y0", TABLE_Y0), ("Y1", TABLE_Y1)] for t in rows])
def test_evaluate_multiplicativity(shape, triple):
    r = catalog_rep(shape, triple)
    rng = random.Random(hash((shape, triple)) & 0xFFFF)
    for _ in range(PAIRS_PER_REP):
        g, h = random_word_matrix(rng), random_word_matrix(rng)
        assert evaluate(r, g @ h) == cycmat.matmul(evaluate(r, g), evaluate(r, h))


def test_multiplicativity_sl2_two_dim():
    r = two_dim_indec(11, 1)
    rng = random.Random(7)
    for _ in range(50):
        g, h = random_word_matrix(rng), random_word_matrix(rng)
        assert evaluate(r, g @ h) == cycmat.matmul(evaluate(r, g), evaluate(r, h))
    assert evaluate(r, -IDENTITY) == cycmat.matmul(r.S_mat, r.S_mat)


def test_tables_resource_is_valid_json():
    raw = json.loads(resources.files("modperiods").joinpath("data/tables.json").read_text())
    assert sum(len(v) for v in raw.values()) == 24
