import math

import numpy as np
import pytest

from totreal import lagrangian as lg
from totreal import subspaces as sp
from totreal import surfaces as sf
from totreal.errors import ConfigError, EvaluationError, ValidationError


def half_square(m):
    return lg.PolynomialPotential(m, [(2 * np.eye(m, dtype=int)[j], 0.5) for j in range(m)])


def finite_difference_hessian(pot, x, h=1e-4):
    m = x.size
    H = np.empty((m, m))
    for j in range(m):
        e = np.zeros(m)
        e[j] = h
        H[:, j] = (pot.gradient(x + e) - pot.gradient(x - e)) / (2 * h)
    return H


class TestPolynomial:
    def test_derivatives_against_finite_differences(self):
        pot = lg.random_polynomial(3, 4)
        rng = np.random.default_rng(0)
        for x in rng.random((10, 3)):
            g = np.array([(pot.value(x + h) - pot.value(x - h)) / 2e-6 for h in 1e-6 * np.eye(3)])
            np.testing.assert_allclose(pot.gradient(x), g, atol=1e-6)
            np.testing.assert_allclose(pot.hessian(x), finite_difference_hessian(pot, x), atol=1e-6)

    def test_batched_evaluation(self):
        pot = lg.random_polynomial(2, 1)
        X = np.random.default_rng(1).random((7, 2))
        np.testing.assert_allclose(pot.gradient(X), np.array([pot.gradient(x) for x in X]))
        np.testing.assert_allclose(pot.hessian(X), np.array([pot.hessian(x) for x in X]))

    def test_json(self):
        pot = lg.random_polynomial(2, 5)
        back = lg.PolynomialPotential.from_json(pot.to_json())
        np.testing.assert_array_equal(back.powers, pot.powers)
        np.testing.assert_array_equal(back.coeffs, pot.coeffs)
        with pytest.raises(ValidationError):
            lg.PolynomialPotential.from_json({"m": 2, "terms": [{"powers": [1], "coeff": 1}]})
        with pytest.raises(ValidationError):
            lg.PolynomialPotential.from_json({"terms": []})

    def test_random_degrees(self):
        pot = lg.random_polynomial(3, 0, degree=4)
        degrees = pot.powers.sum(axis=1)
        assert degrees.min() == 2 and degrees.max() == 4


class TestPotential:
    def test_finite_difference_fallback(self):
        f = lambda x: math.sin(x[0]) * math.cos(x[1])
        phi = lg.Potential(f, None, None, [0, 0], [1, 1])
        x = np.array([0.3, 0.4])
        exact_g = [math.cos(0.3) * math.cos(0.4), -math.sin(0.3) * math.sin(0.4)]
        np.testing.assert_allclose(phi.gradient(x), exact_g, atol=1e-9)
        exact_h = [[-math.sin(0.3) * math.cos(0.4), -math.cos(0.3) * math.sin(0.4)],
                   [-math.cos(0.3) * math.sin(0.4), -math.sin(0.3) * math.cos(0.4)]]
        np.testing.assert_allclose(phi.hessian(x), exact_h, atol=1e-5)
        phi.check_symmetric()

    def test_box(self):
        with pytest.raises(ConfigError):
            lg.Potential(lambda x: 0.0, None, None, [0, 1], [1, 1])

    def test_asymmetric_hessian_detected(self):
        fake = lg.Potential(lambda x: 0.0, lambda x: np.zeros(2), lambda x: np.array([[0, 1.0], [0, 0]]), [0, 0], [1, 1])
        with pytest.raises(ValidationError):
            fake.check_symmetric()


class TestExactTangent:
    def test_zero_potential(self):
        phi = lg.PolynomialPotential(3, []).potential()
        L = lg.exact_tangent(phi, np.array([0.2, 0.5, 0.9]))
        np.testing.assert_array_equal(L.basis, np.eye(3))

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_half_square(self, m):
        phi = half_square(m).potential()
        L = lg.exact_tangent(phi, np.full(m, 0.3))
        np.testing.assert_allclose(L.basis, (1 + 1j) * np.eye(m))
        assert sp.totally_real_coefficient(L) == pytest.approx(1.0, abs=1e-15)
        assert sp.lagrangian_phase(L) == pytest.approx(sp.principal_angle(m * math.pi / 4), abs=1e-12)

    def test_fake_hessian_is_not_lagrangian(self):
        fake = lg.Potential(lambda x: 0.0, lambda x: np.zeros(2), lambda x: np.array([[0, 1.0], [0, 0]]), [0, 0], [1, 1])
        assert not sp.is_lagrangian(lg.exact_tangent(fake, np.array([0.5, 0.5])))

    def test_domain(self):
        with pytest.raises(ValidationError):
            lg.exact_tangent(half_square(2).potential(), np.array([2.0, 0.0]))

    def test_random_polynomials_lagrangian(self):
        rng = np.random.default_rng(7)
        for seed in range(10):
            m = 1 + seed % 4
            phi = lg.random_polynomial(m, seed, scale=2.0).potential(-1, 1)
            for x in rng.uniform(-1, 1, (20, m)):
                assert sp.is_lagrangian(lg.exact_tangent(phi, x), 1e-9)


class TestGradientGraph:
    def test_zero_potential_is_flat(self):
        M = lg.gradient_graph(lg.PolynomialPotential(2, []).potential(), 3)
        assert np.all(M.vertices.imag == 0)
        np.testing.assert_array_equal(sf.coefficient_field(M), 1.0)
        assert sf.integrate_restricted_form(M) == pytest.approx(1.0)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_half_square(self, m):
        M = lg.gradient_graph(half_square(m).potential(-1, 1), 3)
        np.testing.assert_allclose(M.vertices, (1 + 1j) * M.vertices.real)
        np.testing.assert_allclose(sf.coefficient_field(M), 1.0, atol=1e-14)
        expected = sp.principal_angle(m * math.pi / 4)
        np.testing.assert_allclose(sf.phase_field(M), expected, atol=1e-12)

    def test_orientation_induced_from_real_plane(self):
        M = lg.gradient_graph(lg.random_polynomial(3, 2).potential(), 2)
        assert M.orientation_report()["consistent"]
        real = np.linalg.det(M.edge_matrices.real)
        assert np.all(M.signs * real > 0)

    def test_xy_potential(self):
        pot = lg.PolynomialPotential(2, [((1, 1), 1.0)])
        phi = pot.potential()
        for c in np.random.default_rng(0).random((5, 2)):
            assert sp.is_lagrangian(lg.exact_tangent(phi, c), 1e-12)
        # quadratic potential: affine gradient, so discrete tangents are exact as well
        assert sf.lagrangian_defect_field(lg.gradient_graph(phi, 4)).max() <= 1e-12

    def test_defect_linear_in_h(self):
        phi = lg.random_polynomial(2, 0).potential()
        defects = [sf.lagrangian_defect_field(lg.gradient_graph(phi, n)).max() for n in (8, 16, 32)]
        ratios = np.array(defects[:-1]) / np.array(defects[1:])
        assert np.all((ratios >= 1.7) & (ratios <= 2.3))

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_nonfinite_gradient(self):
        phi = lg.Potential(lambda x: 0.0, lambda x: np.array([1 / x[0], 0.0]), lambda x: np.zeros((2, 2)), [0, 0], [1, 1])
        with pytest.raises(EvaluationError):
            lg.gradient_graph(phi, 2)

    def test_anisotropic_grid(self):
        M = lg.gradient_graph(half_square(2).potential(), [2, 3])
        assert len(M) == 2 * 3 * 2
