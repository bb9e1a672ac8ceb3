import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from modperiods import cycmat
from modperiods.cyclofield import zeta
from modperiods.modgroup import (
    IDENTITY,
    InvalidMatrixError,
    Mat2Z,
    S,
    T_pow,
    Word,
    decompose,
    evaluate_word,
    is_hyperbolic,
    mobius,
    parse_generators,
)

BOUND = 10 ** 6


@st.composite
def sl2z(draw):
    """Random SL2(Z) element with entries bounded by 10^6, built from a coprime bottom row."""
    c = draw(st.integers(-BOUND, BOUND))
    d = draw(st.integers(-BOUND, BOUND))
    g = math.gcd(c, d)
    c, d = (c // g, d // g) if g else (0, 1)
    _, x, y = _egcd(c, d)
    # a*d - b*c = 1 with (a, b) = (y, -x) + k(c, d), shifted to keep entries small
    a, b = y, -x
    k = draw(st.integers(-3, 3))
    a, b = a + k * c, b + k * d
    if max(abs(a), abs(b)) > BOUND:
        a, b = y, -x
    return Mat2Z(a, b, c, d)


def _egcd(a, b):
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0) if a else (0, 0, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


@settings(max_examples=1000, deadline=None)
@given(sl2z())
def test_word_round_trip(m):
    w = decompose(m)
    assert w.to_matrix() == m


def test_identity_and_minus_identity():
    assert decompose(IDENTITY).to_matrix() == IDENTITY
    w = decompose(-IDENTITY)
    assert w.sign == -1 and w.to_matrix() == -IDENTITY


def test_word_multiplication_merges_powers():
    w = Word((("T", 2),)) * Word((("T", -2), ("S", 1)))
    assert str(w) == "S"


def test_invalid_matrix():
    with pytest.raises(InvalidMatrixError):
        Mat2Z(1, 1, 1, 1)
    with pytest.raises(InvalidMatrixError):
        Mat2Z.from_list([1, 0, 0])


def test_mobius():
    # (15i - 4)/(4i - 1) = (64 + i)/17
    z = mobius(Mat2Z(15, -4, 4, -1), 1j)
    assert abs(z - complex(64, 1) / 17) < 1e-12
    with pytest.raises(ValueError):
        mobius(S, -1j)


def test_evaluate_word_sl2_sign():
    sigma = zeta(1, 4)
    S_img = cycmat.matrix([[sigma]])
    T_img = cycmat.matrix([[zeta(1, 12)]])
    minus = cycmat.matmul(S_img, S_img)
    assert evaluate_word(decompose(-IDENTITY), S_img, T_img, minus) == minus
    assert cycmat.is_identity(evaluate_word(decompose(-IDENTITY), S_img, T_img, None))


def test_evaluate_word_matches_matrix_rep():
    # the defining 2-dim representation of SL2(Z) on itself
    S_img = cycmat.matrix([[0, -1], [1, 0]])
    T_img = cycmat.matrix([[1, 1], [0, 1]])
    rng = random.Random(3)
    for _ in range(50):
        m = IDENTITY
        for _ in range(6):
            m = m @ (S if rng.random() < 0.5 else T_pow(rng.randint(-4, 4)))
        img = evaluate_word(decompose(m), S_img, T_img, cycmat.scale(cycmat.identity(2), -1))
        assert [[int(x.rational()) for x in row] for row in img] == [[m.a, m.b], [m.c, m.d]]


def test_parse_generators_and_hyperbolic():
    gens = parse_generators("[[2,1,1,1],[3,-1,1,0]]")
    assert all(is_hyperbolic(g) for g in gens)
    assert not is_hyperbolic(S)
