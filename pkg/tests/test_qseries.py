import math
from fractions import Fraction as F

import pytest

from modperiods.qseries import (
    BranchError,
    DivergenceError,
    PuiseuxSeries,
    RadicalConstant,
    antiderivative,
    cusp_form_8A2_hypergeometric,
    cusp_forms_8A2,
    delta,
    eisenstein,
    eta_pow4,
    hauptmodul_K,
    hypergeom_2f1,
    hypergeom_coeffs,
    j_invariant,
    modular_derivative,
    period_integral,
)


def naive_eta4(n):
    """prod (1 - q^k)^4 by schoolbook multiplication."""
    poly = [1] + [0] * (n - 1)
    for k in range(1, n):
        for _ in range(4):
            poly = [poly[i] - (poly[i - k] if i >= k else 0) for i in range(n)]
    return poly


def test_eta4_printed_terms():
    e = eta_pow4(10)
    assert e.order == F(1, 6)
    assert e.head(4) == [1, -4, 2, 8]
    assert [r for r, _ in e.terms()[:4]] == [F(1, 6), F(7, 6), F(13, 6), F(19, 6)]


def test_eta4_against_product():
    assert list(eta_pow4(150).coeffs) == naive_eta4(150)


def test_f1_f2_printed_terms():
    f1, f2 = cusp_forms_8A2(10)
    assert f1.order == F(1, 8) and f1.head(4) == [1, -1, -6, 5]
    assert f2.order == F(3, 8) and f2.head(4) == [1, -3, 1, 2]


def test_routes_agree():
    h = cusp_forms_8A2(150, "hypergeometric")
    m = cusp_forms_8A2(150, "mlde")
    for a, b in zip(h, m):
        assert a.order == b.order and list(a.coeffs) == list(b.coeffs)


def test_f2_needs_five_twentyfourths_power():
    # eta^4 K^(1/3) starts at q^(1/2), not q^(3/8)
    K = hauptmodul_K(12)
    unit, _ = K.pow_normalized(F(1, 3))
    assert (eta_pow4(10) * unit).order + F(1, 3) != F(3, 8)
    c = cusp_form_8A2_hypergeometric(2, 10)
    assert c.series.order == F(3, 8)
    assert c.dropped_constant.value == pytest.approx(1728 ** (5 / 24))


def test_dropped_constant_normal_form():
    r = RadicalConstant.of(1728, F(-1, 24))
    assert r.value == pytest.approx(12 ** (-1 / 8))
    assert (r ** 24).value == pytest.approx(1 / 1728)


def test_eta4_kernel_of_modular_derivative():
    assert modular_derivative(eta_pow4(150), 2).is_zero()


@pytest.mark.parametrize("index", [0, 1])
def test_cusp_forms_solve_second_order_equation(index):
    f = cusp_forms_8A2(60, "mlde")[index]
    E4 = eisenstein(4, 70)
    lhs = modular_derivative(modular_derivative(f, 2), 4)
    assert (lhs - E4 * f * F(5, 576)).is_zero()


def test_eisenstein_and_j():
    assert eisenstein(4, 4).head(3) == [1, 240, 2160]
    assert eisenstein(6, 3).head(3) == [1, -504, -16632]
    assert eisenstein(2, 3).head(3) == [1, -24, -72]
    assert delta(5).head(5) == [1, -24, 252, -1472, 4830]
    j = j_invariant(5)
    assert j.order == -1 and j.head(4) == [1, 744, 196884, 21493760]
    K = hauptmodul_K(4)
    assert K.order == 1 and K.head(2) == [1728, -1285632]


def test_hypergeometric_series():
    # 2F1(1,1;2;x) = -log(1-x)/x
    assert hypergeom_coeffs(1, 1, 2, 5) == [1, F(1, 2), F(1, 3), F(1, 4), F(1, 5)]
    x = PuiseuxSeries.monomial(F(1), 1, 6)
    s = hypergeom_2f1(F(1, 2), F(1, 2), 1, x)
    assert [s.coeff(k) for k in range(3)] == [1, F(1, 4), F(9, 64)]


def test_series_arithmetic():
    e = eta_pow4(30)
    assert (e * e.inverse()).head(30) == [1] + [0] * 29
    cube_root = e.pow(F(1, 4))
    assert cube_root.order == F(1, 24)
    assert list((cube_root ** 4).coeffs) == list(e.coeffs)
    assert (e + e - e * 2).is_zero()
    assert e.coeff(F(7, 6)) == -4 and e.coeff(F(1, 3)) == 0


def test_branch_error():
    s = PuiseuxSeries.from_coeffs([2, 1], order=1, prec=5)
    with pytest.raises(BranchError):
        s.pow(F(1, 2))


def test_period_integral_matches_closed_form():
    # integral of q^(1/6) from i to 2i
    f = PuiseuxSeries.monomial(F(1), F(1, 6), 10)
    pv = period_integral(f, 1j, 2j)
    def u(t):
        return complex(math.e ** (2j * math.pi * t / 6)) / (2j * math.pi / 6)
    assert pv.value == pytest.approx(u(2j) - u(1j), abs=1e-14)


def test_antiderivative_rejects_constant_term():
    with pytest.raises(DivergenceError):
        antiderivative(j_invariant(4))
    u = antiderivative(eta_pow4(5))
    assert u.head(2) == [6, F(-4 * 6, 7)]
