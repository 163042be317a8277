""" Tests for basis representations of curves. """

import numpy as np
import pytest

from spectral_breaks.errors import InvalidArgumentError, InvalidDataError, UnderdeterminedFitError
from spectral_breaks.fda.basis import FunctionalSeries, center_and_segment_demean, fourier_basis, quad_grid
from spectral_breaks.fda.basis import smooth_to_basis


class TestFourierBasis:

    def test_evaluation_at_zero(self):
        vls = fourier_basis(3).evaluate(np.array([0.0]))
        assert np.allclose(vls, [[1.0, 0.0, np.sqrt(2)]], atol=1e-14)

    def test_first_sine_at_quarter(self):
        vls = fourier_basis(2).evaluate(np.array([.25]))
        assert vls[0, 1] == pytest.approx(np.sqrt(2), abs=1e-12)

    def test_ordering_alternates_sine_and_cosine(self):
        t = np.array([.1, .37])
        vls = fourier_basis(5).evaluate(t)
        assert np.allclose(vls[:, 3], np.sqrt(2)*np.sin(4*np.pi*t))
        assert np.allclose(vls[:, 4], np.sqrt(2)*np.cos(4*np.pi*t))

    @pytest.mark.parametrize('n_basis', [1, 5, 21])
    def test_gram_is_identity(self, n_basis):
        assert np.max(np.abs(fourier_basis(n_basis).gram() - np.eye(n_basis))) < 1e-8

    def test_parseval(self):
        rng = np.random.default_rng(0)
        basis = fourier_basis(7)
        a = rng.standard_normal(7)
        t = quad_grid()
        sq_norm = np.mean(basis.reconstruct(a, t)**2)
        assert sq_norm == pytest.approx(np.sum(a**2), abs=1e-6)

    def test_zero_functions_is_invalid(self):
        with pytest.raises(InvalidArgumentError):
            fourier_basis(0)


class TestFunctionalSeries:

    def test_sq_norms_match_quadrature(self):
        rng = np.random.default_rng(1)
        basis = fourier_basis(4)
        series = FunctionalSeries(rng.standard_normal([3, 4]), basis)
        curves = basis.reconstruct(series.coefs, quad_grid())
        assert np.allclose(series.sq_norms(), np.mean(curves**2, axis=1), atol=1e-6)

    def test_needs_two_curves(self):
        with pytest.raises(InvalidDataError):
            FunctionalSeries(np.zeros([1, 3]), fourier_basis(3))

    def test_rejects_non_finite(self):
        coefs = np.zeros([3, 2])
        coefs[1, 1] = np.nan
        with pytest.raises(InvalidDataError):
            FunctionalSeries(coefs, fourier_basis(2))

    def test_rejects_wrong_number_of_columns(self):
        with pytest.raises(InvalidDataError):
            FunctionalSeries(np.zeros([3, 4]), fourier_basis(3))

    def test_coefficients_are_read_only(self):
        series = FunctionalSeries(np.zeros([3, 2]), fourier_basis(2))
        with pytest.raises(ValueError):
            series.coefs[0, 0] = 1.0


class TestSmoothToBasis:

    def test_exact_representation(self):
        basis = fourier_basis(3)
        t = quad_grid(100)
        raw = np.expand_dims(basis.reconstruct(np.array([1.0, 2.0, 0.0]), t), 0).repeat(2, axis=0)
        series = smooth_to_basis(raw, basis)
        assert np.allclose(series.coefs, [[1.0, 2.0, 0.0]]*2, atol=1e-8)

    def test_constant_curve(self):
        series = smooth_to_basis(np.full([2, 50], 5.0), fourier_basis(3))
        assert np.allclose(series.coefs, [[5.0, 0.0, 0.0]]*2, atol=1e-8)

    def test_grid_is_mapped_onto_unit_interval(self):
        basis = fourier_basis(5)
        a = np.array([.5, -1.0, 2.0, .3, 0.0])
        days = np.arange(1, 366, dtype=float)
        raw = np.stack([basis.reconstruct(a, (days - .5)/365)]*2)
        series = smooth_to_basis(raw, basis, grid=days)
        assert np.allclose(series.coefs[0], a, atol=1e-8)

    def test_residual_is_orthogonal_and_contracts(self):
        rng = np.random.default_rng(2)
        basis = fourier_basis(21)
        raw = rng.standard_normal([3, 365])
        series = smooth_to_basis(raw, basis)

        design = basis.evaluate(quad_grid(365))
        resid = raw - np.matmul(series.coefs, design.T)
        assert np.max(np.abs(np.matmul(resid, design))) < 1e-8
        assert np.all(np.linalg.norm(resid, axis=1) <= np.linalg.norm(raw, axis=1))

    @pytest.mark.parametrize('n_basis, n_grid_pts', [(3, 3), (4, 4), (5, 5), (20, 20), (21, 21), (20, 21)])
    def test_as_many_grid_points_as_basis_functions(self, n_basis, n_grid_pts):
        basis = fourier_basis(n_basis)
        a = np.random.default_rng(n_basis).standard_normal([4, n_basis])
        raw = basis.reconstruct(a, quad_grid(n_grid_pts))
        series = smooth_to_basis(raw, basis)
        assert np.allclose(series.coefs, a, atol=1e-8)

    def test_endpoints_of_header_grid_stay_distinct(self):
        basis = fourier_basis(5)
        a = np.random.default_rng(3).standard_normal([2, 5])
        grid = np.linspace(0, 10, 5)
        series = smooth_to_basis(basis.reconstruct(a, quad_grid(5)), basis, grid=grid)
        assert np.allclose(series.coefs, a, atol=1e-8)

    def test_too_few_grid_points(self):
        with pytest.raises(UnderdeterminedFitError):
            smooth_to_basis(np.zeros([2, 4]), fourier_basis(5))

    def test_missing_values(self):
        raw = np.zeros([2, 30])
        raw[0, 3] = np.nan
        with pytest.raises(InvalidDataError):
            smooth_to_basis(raw, fourier_basis(3))


class TestCenterAndSegmentDemean:

    def test_segment_means_removed(self):
        series = FunctionalSeries(np.array([[1.0], [1.0], [3.0], [3.0]]), fourier_basis(1))
        demeaned = center_and_segment_demean(series, [2])
        assert np.allclose(demeaned.coefs, 0.0)

    def test_global_demeaning(self, random_series):
        demeaned = center_and_segment_demean(random_series, [])
        assert np.allclose(np.mean(demeaned.coefs, axis=0), 0.0, atol=1e-12)

    def test_idempotent(self, random_series):
        once = center_and_segment_demean(random_series, [20, 45])
        twice = center_and_segment_demean(once, [20, 45])
        assert np.allclose(once.coefs, twice.coefs, atol=1e-12)

    @pytest.mark.parametrize('breaks', [[0], [60], [30, 30], [40, 20]])
    def test_invalid_breaks(self, random_series, breaks):
        with pytest.raises(InvalidArgumentError):
            center_and_segment_demean(random_series, breaks)
