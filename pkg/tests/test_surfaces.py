import math
import warnings

import numpy as np
import pytest

from totreal import lagrangian as lg
from totreal import subspaces as sp
from totreal import surfaces as sf
from totreal.errors import ConfigError, DegenerateSubspaceError, EvaluationError, ValidationError


def complex_line_patch(n=4):
    """Kuhn grid on the complex line {(x + i y, 0)} of C^2."""
    points, simplices, signs = sf.kuhn_grid(2, n)
    verts = np.stack([points[:, 0] + 1j * points[:, 1], np.zeros(len(points))], axis=1)
    return sf.TriangulatedSurface(verts, simplices, signs)


def unit_circle_polygon(N):
    return sf.polygon_curve(np.exp(2j * np.pi * np.arange(N) / N))


@pytest.fixture(scope="module")
def plane():
    return sf.flat_patch(2, 32, -1.0, 1.0)


class TestTangents:
    def test_flat_simplex(self):
        M = sf.TriangulatedSurface([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]])
        L = sf.tangent_plane(M, 0)
        np.testing.assert_array_equal(L.basis, np.eye(2))
        assert sp.totally_real_coefficient(L) == 1.0

    def test_complex_line_simplex_is_fine_but_not_totally_real(self):
        M = sf.TriangulatedSurface([[0, 0], [1, 0], [1j, 0]], [[0, 1, 2]])
        L = sf.tangent_plane(M, 0)
        assert sp.totally_real_coefficient(L) == 0.0

    def test_sign_reverses_orientation(self):
        M = sf.TriangulatedSurface([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]], signs=[-1])
        assert sp.lagrangian_phase(sf.tangent_plane(M, 0)) == pytest.approx(math.pi)

    def test_degenerate_simplex_reported(self):
        M = sf.TriangulatedSurface([[0, 0], [1, 0], [0, 1], [2, 0]], [[0, 1, 2], [0, 1, 3]])
        with pytest.raises(DegenerateSubspaceError) as info:
            sf.coefficient_field(M)
        assert info.value.simplex == 1
        with pytest.raises(DegenerateSubspaceError):
            sf.tangent_plane(M, 1)


class TestCoefficientField:
    def test_flat(self):
        for m in (1, 2, 3):
            assert np.all(sf.coefficient_field(sf.flat_patch(m, 3)) == 1.0)

    def test_complex_line(self):
        assert np.all(sf.coefficient_field(complex_line_patch()) == 0.0)

    def test_gradient_graph_against_exact_tangents(self):
        pot = lg.PolynomialPotential(2, [((3, 0), 0.5), ((1, 2), -0.4), ((2, 1), 0.3), ((0, 4), 0.2)])
        phi = pot.potential()
        errs = []
        for n in (8, 16, 32):
            M = lg.gradient_graph(phi, n)
            coeff = sf.coefficient_field(M)
            exact = np.array([sp.totally_real_coefficient(lg.exact_tangent(phi, c.real)) for c in M.centroids])
            np.testing.assert_allclose(exact, 1.0, atol=1e-12)
            errs.append(np.max(np.abs(coeff - exact)))
            assert errs[-1] <= 1.0 / n
        assert errs[2] < errs[0]


class TestIntegration:
    def test_closed_curve(self):
        assert abs(sf.integrate_restricted_form(unit_circle_polygon(64))) <= 1e-12

    def test_unit_square(self):
        M = sf.flat_patch(2, 4)
        assert sf.integrate_restricted_form(M) == pytest.approx(1.0, abs=1e-14)

    def test_linear_integrand(self):
        # dblquad oracle on the parameter square gives 0.5
        M = sf.flat_patch(2, 4)
        assert sf.integrate_restricted_form(M, lambda z: z[0]) == pytest.approx(0.5, abs=1e-14)
        assert sf.integrate_restricted_form(M, lambda z: z[:, 0], vectorized=True) == pytest.approx(0.5, abs=1e-14)

    def test_modulus_matches_coefficient_times_volume(self):
        M = lg.gradient_graph(lg.random_polynomial(2, 1).potential(), 6)
        coeff = sf.coefficient_field(M)
        np.testing.assert_allclose(np.abs(M.form_values), coeff * M.volumes, rtol=1e-12)

    def test_nonfinite_integrand(self):
        with pytest.raises(EvaluationError):
            sf.integrate_restricted_form(sf.flat_patch(2, 2), lambda z: np.nan)

    def test_orientation_flip(self):
        M = lg.gradient_graph(lg.random_polynomial(2, 3).potential(), 5)
        f = lambda z: np.exp(z[0]) + z[1] ** 2
        F = M.with_signs(-M.signs)
        assert sf.integrate_restricted_form(F, f) == pytest.approx(-sf.integrate_restricted_form(M, f), abs=1e-14)
        np.testing.assert_array_equal(sf.coefficient_field(F), sf.coefficient_field(M))

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_refinement_affine(self, m):
        rng = np.random.default_rng(m)
        a = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        f = lambda z: 0.3 - 0.2j + z @ a
        M = sf.flat_patch(m, 3, -0.5, 1.0)
        R = sf.refine(M)
        assert len(R) == len(M) * 2**m
        assert R.orientation_report()["consistent"]
        assert sf.integrate_restricted_form(R, f) == pytest.approx(sf.integrate_restricted_form(M, f), abs=1e-12)

    def test_triangle_inequality(self):
        for seed in range(5):
            M = lg.gradient_graph(lg.random_polynomial(2, seed, scale=3.0).potential(), 6)
            lhs = abs(sf.integrate_restricted_form(M))
            rhs = float(np.sum(sf.coefficient_field(M) * M.volumes))
            assert lhs <= rhs * (1 + 1e-12)
        M = sf.flat_patch(2, 5)
        assert abs(sf.integrate_restricted_form(M)) == pytest.approx(np.sum(sf.coefficient_field(M) * M.volumes))


class TestMeasure:
    def test_disk(self, plane):
        for r in (0.2, 0.5, 1.0):
            mu = sf.measure_ball(plane, sf.BallQuery([0.0, 0.0], r))
            assert mu == pytest.approx(math.pi * r * r, rel=0.02)
        # r = 1 on the [-1, 1]^2 patch: the disk lies inside the patch
        assert sf.measure_ball(plane, sf.BallQuery([0, 0], 1.0)) == pytest.approx(math.pi, rel=0.02)

    def test_disjoint(self, plane):
        assert sf.measure_ball(plane, sf.BallQuery([5.0, 0.0], 1.0)) == 0.0
        assert sf.measure_ball(plane, sf.BallQuery([0.0, 0.5j], 0.4)) == 0.0

    def test_containing_everything(self, plane):
        rho = np.linspace(0.5, 2.0, len(plane))
        M = sf.TriangulatedSurface(plane.vertices, plane.simplices, plane.signs, rho)
        assert sf.measure_ball(M, sf.BallQuery([0, 0], 3.0)) == pytest.approx(np.sum(rho * M.volumes), rel=1e-13)

    def test_monotone(self, plane):
        radii = np.linspace(0.05, 1.6, 25)
        vals = [sf.measure_ball(plane, sf.BallQuery([0.1, -0.2], r)) for r in radii]
        assert np.all(np.diff(vals) >= 0)

    def test_additive(self, plane):
        other = plane.transformed(lambda V: V + np.array([0.3j, 0.0]))
        both = sf.union(plane, other)
        q = sf.BallQuery([0.1, 0.05j], 0.6)
        assert sf.measure_ball(both, q) == pytest.approx(sf.measure_ball(plane, q) + sf.measure_ball(other, q), rel=1e-12)

    def test_dimension_mismatch(self, plane):
        with pytest.raises(Exception):
            sf.measure_ball(plane, sf.BallQuery([0, 0, 0], 1.0))
        with pytest.raises(ValidationError):
            sf.BallQuery([0, 0], 0.0)

    def test_unit_ball_volume(self):
        assert sf.unit_ball_volume(1) == pytest.approx(2)
        assert sf.unit_ball_volume(2) == pytest.approx(math.pi)
        assert sf.unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


class TestAhlforsDoubling:
    def test_flat_plane(self, plane):
        centers = [[0.0, 0.0], [0.2, -0.1], [-0.25, 0.3]]
        rep = sf.ahlfors_report(plane, centers, sf.radius_sequence(0.05, 0.4, 4))
        assert rep.n_interior == 12 and rep.n_boundary == 0
        assert rep.c_lower == pytest.approx(math.pi, rel=0.05)
        assert rep.c_upper == pytest.approx(math.pi, rel=0.05)
        dbl = sf.doubling_report(plane, centers, sf.radius_sequence(0.05, 0.2, 3))
        assert dbl.max_ratio == pytest.approx(4.0, rel=0.10)
        assert dbl.n_excluded == 0

    def test_boundary_flagged(self, plane):
        rep = sf.ahlfors_report(plane, [[0.95, 0.0]], [0.3])
        assert rep.n_boundary == 1 and rep.n_interior == 0
        assert rep.boundary_lower < 0.8 * math.pi

    def test_two_parallel_planes(self):
        d = 0.02
        a = sf.flat_patch(2, 16, -1.0, 1.0)
        both = sf.union(a, a.transformed(lambda V: V + np.array([1j * d, 0.0])))
        rep = sf.ahlfors_report(both, [[0.0, 0.0]], [0.002, 0.004, 0.3, 0.5])
        assert rep.c_upper == pytest.approx(2 * rep.c_lower, rel=0.05)
        far = sf.ahlfors_report(both, [[0.0, 0.0], [0.1, 0.1]], [0.3, 0.5])
        assert far.c_lower == pytest.approx(2 * math.pi, rel=0.05)
        assert far.c_upper == pytest.approx(2 * math.pi, rel=0.05)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_single_simplex(self, m):
        verts = np.vstack([np.zeros(m), np.eye(m)]).astype(complex)
        M = sf.TriangulatedSurface(verts, [list(range(m + 1))])
        inradius = 1.0 / (m + math.sqrt(m))
        rep = sf.ahlfors_report(M, M.centroids, [0.05 * inradius, 0.1 * inradius])
        assert rep.c_lower == pytest.approx(sf.unit_ball_volume(m), rel=0.05)
        assert rep.c_upper == pytest.approx(sf.unit_ball_volume(m), rel=0.05)

    def test_ratio_at_least_one(self):
        M = lg.gradient_graph(lg.random_polynomial(2, 0).potential(), 8)
        dbl = sf.doubling_report(M, sf.sample_centers(M, 10, 0), sf.radius_sequence(0.02, 0.4, 5))
        assert dbl.n_used + dbl.n_boundary + dbl.n_excluded == 50
        assert min(x for x in (dbl.max_ratio, dbl.boundary_max_ratio) if x is not None) >= 1.0

    def test_off_support_excluded(self, plane):
        dbl = sf.doubling_report(plane, [[0.0, 0.0], [0.0, 1j]], [0.1])
        assert dbl.n_excluded == 1
        assert dbl.n_used == 1

    def test_config_errors(self, plane):
        with pytest.raises(ConfigError):
            sf.ahlfors_report(plane, np.empty((0, 2)), [0.1])
        with pytest.raises(ConfigError):
            sf.ahlfors_report(plane, [[0, 0]], [])
        with pytest.raises(ConfigError):
            sf.ahlfors_report(plane, [[0, 0]], [100.0])
        with pytest.raises(ConfigError):
            sf.radius_sequence(0.5, 0.1, 3)


class TestMeshFormat:
    def test_round_trip(self):
        M = lg.gradient_graph(lg.random_polynomial(2, 2).potential(), 3)
        text = sf.to_trmesh(M)
        assert text.splitlines()[0] == f"trmesh 2 {M.vertices.shape[0]} {len(M)}"
        back = sf.read_trmesh(text)
        np.testing.assert_array_equal(back.vertices, M.vertices)
        np.testing.assert_array_equal(back.simplices, M.simplices)
        np.testing.assert_array_equal(back.signs, M.signs)
        assert sf.to_trmesh(back) == text

    @pytest.mark.parametrize("text", [
        "",
        "mesh 1 2 1\n0 0\n1 0\n0 1 1 1\n",
        "trmesh 1 2 1\n0 0\n1 0\n",
        "trmesh 1 2 1\n0 0 0\n1 0\n0 1 1 1\n",
        "trmesh 1 2 1\n0 0\n1 0\n0 5 1 1\n",
        "trmesh 1 2 1\n0 0\n1 0\n0 1 2 1\n",
        "trmesh 1 2 1\n0 0\n1 0\n0 1 1 -1\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(ValidationError):
            sf.read_trmesh(text)

    def test_inconsistent_orientation_warns(self):
        text = "trmesh 2 4 2\n0 0 0 0\n1 0 0 0\n0 0 1 0\n1 0 1 0\n0 1 2 +1 1\n1 2 3 +1 1\n"
        with pytest.warns(UserWarning):
            M = sf.read_trmesh(text)
        rep = M.orientation_report()
        assert not rep["consistent"] and rep["inconsistent_pairs"] == [[0, 1]]
        # integrals are still computed from the per-simplex signs
        assert sf.integrate_restricted_form(M) == pytest.approx(0.0)

    def test_consistent_mesh_does_not_warn(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            sf.read_trmesh(sf.to_trmesh(sf.flat_patch(2, 3)))

    def test_non_manifold(self):
        M = sf.TriangulatedSurface([[0], [1], [2], [3]], [[0, 1], [1, 2], [1, 3]])
        assert not M.orientation_report()["manifold"]
