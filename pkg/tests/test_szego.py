import cmath
import math

import numpy as np
import pytest

from opuc import szego
from opuc.core import Constant, Explicit, Zhedanov
from opuc.errors import InvalidCoefficientError
from conftest import circle_points, random_explicit


def test_free_case_three_steps():
    # all-zero coefficients: phi_n = z^n, phi*_n = 1, kappa = 1
    state = szego.initial_state(1j)
    for _ in range(3):
        state = szego.step(state, 0.0)
    assert state.phi == pytest.approx(1j**3)
    assert state.phi_star == 1.0
    assert state.kappa == 1.0


def test_step_kappa_update():
    state = szego.evaluate(Constant(0.6), 2, 1.0)
    assert state.kappa == pytest.approx(1.5625, abs=1e-14)


def test_step_degree_one_value():
    state = szego.step(szego.initial_state(1.0), 0.5)
    assert state.phi == pytest.approx(math.sqrt(3.0), abs=1e-14)


def test_step_rejects_boundary_coefficient():
    with pytest.raises(InvalidCoefficientError):
        szego.step(szego.initial_state(1.0), 1.0)


def test_evaluate_degree_zero():
    st = szego.evaluate(Constant(0.5), 0, 0.3 + 0.1j)
    assert (st.phi, st.phi_star, st.psi, st.psi_star, st.kappa) == (1, 1, 1, 1, 1.0)


def test_evaluate_free_case_second_kind():
    z = cmath.exp(1j * math.pi / 4)
    st = szego.evaluate(Constant(0.0), 5, z)
    assert st.phi == pytest.approx(cmath.exp(5j * math.pi / 4), abs=1e-14)
    assert st.psi == pytest.approx(cmath.exp(5j * math.pi / 4), abs=1e-14)


def test_kappa_values():
    assert szego.kappa(Constant(0.5), 0) == 1.0
    assert szego.kappa(Constant(0.6), 2) == pytest.approx(1.5625, rel=1e-14)
    # product over {0, -0.5, -0.75}
    assert szego.kappa(Zhedanov(0.5), 3) == pytest.approx(0.328125 ** -0.5, rel=1e-14)


def test_kappa_matches_running_kappa():
    rng = np.random.default_rng(21)
    seq = random_explicit(rng, 30)
    st = szego.evaluate(seq, 30, 1.0)
    assert szego.kappa(seq, 30) == pytest.approx(st.kappa, rel=1e-12)


def test_schur_sum_trivial_cases():
    assert szego.schur_sum_eval(Constant(0.5), 0, 2.0 + 1j) == 1.0
    # zero coefficients: only the k = 0 term survives
    assert szego.schur_sum_eval(Constant(0.0), 4, cmath.exp(0.3j)) == pytest.approx(1.0)


def test_schur_sum_matches_reversed_polynomial():
    z = cmath.exp(2j)
    st = szego.evaluate(Constant(0.5), 20, z)
    total = szego.schur_sum_eval(Constant(0.5), 20, z)
    assert total == pytest.approx(st.kappa * st.phi_star, rel=1e-10)


def test_route_equivalence_random_corpus():
    rng = np.random.default_rng(22)
    for _ in range(20):
        seq = random_explicit(rng, 40)
        for z in circle_points(rng, 50):
            st = szego.evaluate(seq, 40, z)
            phi, phi_star = szego.pair_evaluate(seq, 40, z)
            scale = max(1.0, abs(st.phi), abs(st.phi_star))
            assert abs(phi - st.phi) / scale < 1e-10
            assert abs(phi_star - st.phi_star) / scale < 1e-10
            total = szego.schur_sum_eval(seq, 40, z)
            assert abs(total - st.kappa * st.phi_star) / max(1.0, abs(total)) < 1e-10


def test_wronskian_trivial():
    st0 = szego.initial_state(0.7j)
    assert szego.wronskian(st0) == -2.0
    st2 = szego.evaluate(Constant(0.0), 2, 1j)
    assert szego.wronskian(st2) == pytest.approx(2.0)  # -2 (i)^2


def test_wronskian_random_corpus():
    rng = np.random.default_rng(23)
    for _ in range(10):
        seq = random_explicit(rng, 30)
        for z in circle_points(rng, 10):
            st = szego.evaluate(seq, 30, z)
            resid = abs(szego.wronskian(st) + 2.0 * z**30)
            assert resid / max(1.0, abs(st.phi) * abs(st.psi)) < 1e-9


def test_second_kind_involution_is_exact():
    rng = np.random.default_rng(24)
    seq = random_explicit(rng, 30)
    neg = Explicit([-v for v in seq.values])
    for z in circle_points(rng, 5):
        a = szego.evaluate(seq, 30, z)
        b = szego.evaluate(neg, 30, z)
        assert a.phi == b.psi and a.psi == b.phi
        assert a.phi_star == b.psi_star and a.psi_star == b.phi_star


def test_reversed_polynomial_identity_on_circle():
    rng = np.random.default_rng(25)
    for _ in range(10):
        seq = random_explicit(rng, 25)
        for z in circle_points(rng, 10):
            st = szego.evaluate(seq, 25, z)
            resid = abs(st.phi_star - z**25 * st.phi.conjugate())
            assert resid / max(1.0, abs(st.phi)) < 1e-10


def test_reversed_polynomial_zero_free_in_disk():
    rng = np.random.default_rng(26)
    radii = np.linspace(0.0, 0.99, 12)
    angles = np.linspace(0.0, 2 * math.pi, 24, endpoint=False)
    for _ in range(5):
        seq = random_explicit(rng, 15)
        smallest = min(
            abs(szego.evaluate(seq, 15, r * cmath.exp(1j * t)).phi_star)
            for r in radii for t in angles
        )
        assert smallest > 1e-6


def test_expected_z_moment():
    assert szego.expected_z_moment(Constant(0.5), 3) == pytest.approx(-0.25)
    assert szego.expected_z_moment(Zhedanov(0.5), 5) == pytest.approx(-0.908203125, abs=1e-15)
    assert szego.expected_z_moment(Constant(0.0), 3) == 0.0
    # n = 0 uses the index-0 coefficient 1
    assert szego.expected_z_moment(Constant(0.5), 0) == pytest.approx(-0.5)


def test_monic_coefficients_structure():
    # free case: z^n
    c = szego.monic_coefficients(Constant(0.0), 5)
    assert np.allclose(c, [0, 0, 0, 0, 0, 1])
    # degree 1: z + c_1
    c1 = szego.monic_coefficients(Explicit([0.3 - 0.2j]), 1)
    assert c1[0] == pytest.approx(0.3 - 0.2j)
    assert c1[1] == 1.0


def test_monic_coefficients_match_pointwise_evaluation():
    rng = np.random.default_rng(27)
    seq = random_explicit(rng, 12)
    coeffs = szego.monic_coefficients(seq, 12)
    z = 0.7 * cmath.exp(1.1j)
    direct = sum(c * z**k for k, c in enumerate(coeffs))
    st = szego.evaluate(seq, 12, z)
    assert direct == pytest.approx(st.phi / st.kappa, rel=1e-10)


def test_sweep_matches_scalar_evaluation():
    thetas = np.linspace(0.5, 5.5, 7)
    seq = Constant(0.3 + 0.1j)
    rows = dict(szego.sweep_abs_phi(seq, thetas, 9))
    for i, t in enumerate(thetas):
        st = szego.evaluate(seq, 9, cmath.exp(1j * t))
        assert rows[9][i] == pytest.approx(abs(st.phi), rel=1e-12)
