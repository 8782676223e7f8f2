import math

import numpy as np
import pytest

from opuc import special
from opuc.errors import DomainError


def test_jacobi_value_start():
    p = special.JacobiParams(0.0, 0.0)
    assert special.jacobi_value(p, 0, 0.37) == 1.0
    assert special.jacobi_value(p, 1, 0.37) == pytest.approx(0.37)


def test_jacobi_value_at_plus_one():
    p = special.JacobiParams(0.3, 0.7)
    for n in range(21):
        assert special.jacobi_value(p, n, 1.0) == pytest.approx(
            special.general_binomial(n + 0.3, n), rel=1e-12)


def test_jacobi_value_at_minus_one():
    p = special.JacobiParams(0.3, 0.7)
    for n in range(21):
        expected = (-1.0) ** n * special.general_binomial(n + 0.7, n)
        assert special.jacobi_value(p, n, -1.0) == pytest.approx(expected, rel=1e-10)


def test_jacobi_ratio_matches_values():
    p = special.JacobiParams(0.3, 0.7)
    for n in (0, 1, 5, 20):
        direct = special.jacobi_value(p, n + 1, 1.8) / special.jacobi_value(p, n, 1.8)
        assert special.jacobi_ratio(p, n, 1.8) == pytest.approx(direct, rel=1e-12)


def test_jacobi_ratio_survives_large_degrees():
    # raw values overflow near degree 400 at x = 3; the ratio recursion does not
    p = special.JacobiParams(0.3, -0.15)
    rho = special.jacobi_ratio(p, 2000, 3.0)
    assert math.isfinite(rho) and rho > 1.0


def test_parity_combination_sieved_pattern():
    # whenever the ratio at -1 is minus the ratio at +1, odd coefficients vanish
    assert special._combine_parity(0.7, -0.7, 11) == 0.0
    assert special._combine_parity(0.7, -0.7, 12) == pytest.approx(0.4)


def test_arc_reflection_values_in_disk():
    rng = np.random.default_rng(61)
    for _ in range(8):
        p = special.ArcMeasureParams(rng.uniform(0.2, 2.8), rng.uniform(-0.6, 1.5),
                                     rng.uniform(-0.6, 1.5))
        vals = [special.arc_reflection_exact(p, n) for n in range(1, 120)]
        assert all(-1.0 < v < 1.0 for v in vals)


def test_arc_reflection_tends_to_center():
    # delta = 0: coefficients converge to sin(alpha/2) (no 1/n term)
    p = special.ArcMeasureParams(math.pi / 2, 0.3, 0.0)
    s = math.sin(math.pi / 4)
    assert abs(special.arc_reflection_exact(p, 400) - s) < 1e-4


def test_expansion_parity_alternation():
    p = special.ArcMeasureParams(math.pi / 2, 0.3, 0.7)
    s = math.sin(math.pi / 4)
    for n in (11, 25, 101):
        even_dev = special.reflection_expansion(p, n + 1) - s
        odd_dev = special.reflection_expansion(p, n) - s
        # the leading deviation alternates sign with the parity
        assert (even_dev > 0) != (odd_dev > 0)


def test_expansion_matches_exact_to_cubic_order():
    p = special.ArcMeasureParams(math.pi / 2, 0.3, 0.7)
    resid = [n**3 * abs(special.arc_reflection_exact(p, n) - special.reflection_expansion(p, n))
             for n in range(50, 401)]
    assert max(resid[150:]) <= 1.5 * max(resid[:151])
    assert max(resid) < 1.0


def test_expansion_exact_case_no_corrections():
    # delta = 0, gamma = 1/2: every correction term cancels
    val = special.reflection_expansion(special.ArcMeasureParams(1.0, 0.5, 0.0), 7)
    assert val == pytest.approx(math.sin(0.5), abs=1e-15)


def test_expansion_alpha_zero_rejected():
    with pytest.raises(DomainError):
        special.reflection_expansion(special.ArcMeasureParams(0.0, 0.3, 0.0), 5)


def test_arc_reflection_alpha_zero_still_works():
    p = special.ArcMeasureParams(0.0, 0.3, 0.7)
    vals = [special.arc_reflection_exact(p, n) for n in (1, 2, 9, 50)]
    assert all(-1.0 < v < 1.0 for v in vals)


def test_elliott_A_values():
    assert special.elliott_A(1.25, 0.0, 0.0) == pytest.approx(1.0 / 6.0, abs=1e-15)
    # substitution into the closed form; the independent antiderivative route
    # agrees (a published variant of this arithmetic is off; the two-route
    # agreement below is the ground truth)
    assert special.elliott_A(1.25, 1.0, 1.0) == pytest.approx(-0.5, abs=1e-14)
    assert special.elliott_A_integral_route(1.25, 1.0, 1.0) == pytest.approx(-0.5, abs=1e-14)


def test_elliott_two_routes_agree():
    rng = np.random.default_rng(62)
    for _ in range(50):
        x = 1.0 + rng.uniform(0.01, 4.0)
        a = rng.uniform(-0.9, 3.0)
        b = rng.uniform(-0.9, 3.0)
        assert special.elliott_A(x, a, b) == pytest.approx(
            special.elliott_A_integral_route(x, a, b), abs=1e-12)


def test_elliott_domain():
    with pytest.raises(DomainError):
        special.elliott_A(1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        special.elliott_ratio_check(special.JacobiParams(0.0, 0.0), 0.9, 5)


def test_ratio_check_leading_term():
    p = special.JacobiParams(0.0, 0.0)
    exact, expansion = special.elliott_ratio_check(p, 6.0, 400)
    assert exact / expansion == pytest.approx(1.0, abs=1e-6)


def test_ratio_check_cubic_decay():
    p = special.JacobiParams(0.3, 0.7)
    resid = {n: n**3 * abs(np.subtract(*special.elliott_ratio_check(p, 1.8, n)))
             for n in (50, 100, 200)}
    assert 0.5 <= resid[100] / resid[50] <= 2.0
    assert 0.5 <= resid[200] / resid[100] <= 2.0


def test_prefactor_expansions():
    # the normalized-ratio prefactor expands as 1/4 + 1/(8n) + O(1/n^2),
    # independent of the exponents; the delta-dependent expansion
    # 1/4 + delta/(8n) + (1 - 4 delta - delta^2 - 4 delta gamma - 4 gamma^2)/(64 n^2)
    # belongs to the endpoint-ratio prefactor with the shifted numerator
    g, d = 0.3, 0.7
    s = g + (d - 1.0) / 2.0
    for n in (50, 100, 200, 400):
        lemma_pref = (n + 1.0) * (n + s + 1.0) / ((2.0 * n + s + 2.0) * (2.0 * n + s + 1.0))
        assert abs(lemma_pref - (0.25 + 1.0 / (8.0 * n))) * n * n < 0.1
        endpoint_pref = ((n + d / 2.0 + 0.5) * (n + g + d / 2.0 + 0.5)
                         / ((2.0 * n + g + d / 2.0 + 0.5) * (2.0 * n + g + d / 2.0 + 1.5)))
        series = 0.25 + d / (8.0 * n) + (1.0 - 4.0 * d - d * d - 4.0 * d * g - 4.0 * g * g) / (64.0 * n * n)
        assert abs(endpoint_pref - series) * n**3 < 0.1


def test_trig_identity_exact_case():
    lhs, rhs = special.trig_identity(math.pi / 2)
    assert lhs == pytest.approx(3.0 + 2.0 * math.sqrt(2.0), abs=1e-14)
    assert rhs == pytest.approx(3.0 + 2.0 * math.sqrt(2.0), abs=1e-14)


def test_trig_identity_over_range():
    for i in range(100):
        alpha = 0.03 + i * (math.pi - 0.06) / 99.0
        lhs, rhs = special.trig_identity(alpha)
        assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(lhs))


def test_trig_identity_limit_toward_zero():
    lhs, rhs = special.trig_identity(1e-8)
    assert lhs == pytest.approx(1.0, abs=1e-7)
    assert rhs == pytest.approx(1.0, abs=1e-7)


def test_qhermite_first_ratio():
    ratio, expected = special.qhermite_ratio_check(0.5, 1)
    assert ratio == 0.5 and expected == 0.5


def test_qhermite_ratio_closure():
    for n in range(1, 31):
        ratio, expected = special.qhermite_ratio_check(0.5, n)
        assert abs(ratio - expected) <= 1e-12 * abs(expected)


def test_qhermite_parity():
    for n in range(0, 12):
        assert special.qhermite_value(n, -1.0, 0.5) == pytest.approx(
            (-1.0) ** n * special.qhermite_value(n, 1.0, 0.5), rel=1e-12)


def test_value_guard_raises_before_overflow():
    p = special.JacobiParams(0.3, -0.15)
    with pytest.raises(DomainError):
        special.jacobi_value(p, 2000, 3.0)
