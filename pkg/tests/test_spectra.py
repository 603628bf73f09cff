import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from dcsbm_tw.model import generate_null_experiment, sample_adjacency
from dcsbm_tw.spectra import (
    EigensolverError,
    SpectralSummary,
    esd,
    extreme_eigenvalues,
    householder_tridiagonal,
    ks_distance_to_semicircle,
    semicircle_cdf,
    semicircle_pdf,
    semicircle_quantile,
    symmetric_eigenvalues,
    tridiagonal_ql,
)
from dcsbm_tw.transform import estimated_transform, scale
from oracles import jacobi_eigenvalues


def _sym(n, seed):
    X = np.random.default_rng(seed).standard_normal((n, n))
    return (X + X.T) / 2


def _scaled_null(n, seed):
    A = sample_adjacency(generate_null_experiment(n, seed), seed + 1)
    return scale(estimated_transform(A)).entries


class TestEigenvalues:
    @pytest.mark.parametrize("method", ["lapack", "householder_ql"])
    def test_trivial(self, method):
        s = symmetric_eigenvalues([[0, 1], [1, 0]], method=method)
        np.testing.assert_allclose(s.eigenvalues, [1, -1], atol=1e-15)
        s = symmetric_eigenvalues(np.diag([3.0, 1.0, 2.0]), method=method)
        np.testing.assert_array_equal(s.eigenvalues, [3, 2, 1])
        assert s.lambda_max == 3 and s.lambda_min == 1 and s.n == 3

    @pytest.mark.parametrize("method", ["lapack", "householder_ql"])
    def test_against_jacobi(self, method):
        M = _sym(50, 1)
        np.testing.assert_allclose(symmetric_eigenvalues(M, method).eigenvalues,
                                   jacobi_eigenvalues(M), atol=1e-9)

    def test_one_by_one(self):
        assert symmetric_eigenvalues([[4.0]], "householder_ql").eigenvalues.tolist() == [4.0]

    def test_errors(self):
        with pytest.raises(ValueError):
            symmetric_eigenvalues([[0, 1], [0, 0]])
        with pytest.raises(ValueError):
            symmetric_eigenvalues([[np.nan, 0], [0, 0]])
        with pytest.raises(ValueError):
            symmetric_eigenvalues(np.ones((2, 3)))
        with pytest.raises(ValueError):
            symmetric_eigenvalues(np.eye(2), method="power")

    def test_small_asymmetry_tolerated(self):
        M = _sym(5, 2)
        M[0, 1] += 1e-12
        symmetric_eigenvalues(M)

    def test_tridiagonal_form_preserves_spectrum(self):
        M = _sym(20, 3)
        d, e = householder_tridiagonal(M)
        T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        np.testing.assert_allclose(np.linalg.eigvalsh(T), np.linalg.eigvalsh(M), atol=1e-12)

    def test_ql_sweep_cap(self, monkeypatch):
        import dcsbm_tw.spectra as sp
        monkeypatch.setattr(sp, "MAX_QL_SWEEPS", 0)
        with pytest.raises(EigensolverError):
            tridiagonal_ql([1.0, 2.0], [1.0])

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 40), st.integers(0, 2**32))
    def test_trace_and_frobenius(self, n, seed):
        M = _sym(n, seed)
        lam = symmetric_eigenvalues(M).eigenvalues
        tol = 1e-8 * n * np.abs(M).max()
        assert abs(lam.sum() - np.trace(M)) <= tol
        assert abs((lam**2).sum() - (M**2).sum()) <= tol
        assert (np.diff(lam) <= 0).all()

    def test_orthogonal_invariance(self):
        M = _sym(60, 4)
        rng = np.random.default_rng(5)
        perm = np.eye(60)[rng.permutation(60)]
        v = rng.standard_normal(60)
        H = np.eye(60) - 2 * np.outer(v, v) / (v @ v)
        base = symmetric_eigenvalues(M).eigenvalues
        for Q in (perm, H):
            QMQ = Q @ M @ Q.T
            QMQ = (QMQ + QMQ.T) / 2
            np.testing.assert_allclose(symmetric_eigenvalues(QMQ).eigenvalues, base, atol=1e-9)

    def test_shift(self):
        M = _sym(30, 6)
        np.testing.assert_allclose(symmetric_eigenvalues(M + np.eye(30)).eigenvalues,
                                   symmetric_eigenvalues(M).eigenvalues + 1, atol=1e-12)

    def test_weyl(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            M = _sym(25, rng.integers(1 << 30))
            E = 1e-3 * _sym(25, rng.integers(1 << 30))
            gap = abs(extreme_eigenvalues(M + E)[0] - extreme_eigenvalues(M)[0])
            assert gap <= np.linalg.norm(E)

    def test_extremes(self):
        assert extreme_eigenvalues(np.eye(5)) == pytest.approx((1.0, 1.0), abs=1e-15)
        assert extreme_eigenvalues([[0, 1], [1, 0]]) == pytest.approx((1.0, -1.0), abs=1e-15)
        M = _sym(40, 8)
        s = symmetric_eigenvalues(M)
        assert extreme_eigenvalues(M) == (s.lambda_max, s.lambda_min)

    def test_input_not_modified(self):
        M = _sym(10, 9)
        before = M.copy()
        symmetric_eigenvalues(M, "householder_ql")
        np.testing.assert_array_equal(M, before)

    def test_null_edge_band(self):
        # lambda_1 of the scaled null matrix sits within 0.5 of the edge
        hits = [abs(extreme_eigenvalues(_scaled_null(500, s))[0] - 2) < 0.5 for s in range(20)]
        assert all(hits)


class TestEsd:
    def test_counts(self):
        h = esd(SpectralSummary(np.array([1.0, 0.0, 0.0])), bins=2)
        assert h.counts.tolist() == [2, 1]
        assert h.counts.sum() == 3 and (np.diff(h.edges) > 0).all()

    def test_all_equal(self):
        h = esd(SpectralSummary(np.full(7, 0.3)), bins=5)
        assert np.count_nonzero(h.counts) == 1 and h.counts.sum() == 7

    def test_bad_bins(self):
        with pytest.raises(ValueError):
            esd(SpectralSummary(np.zeros(3)), 0)

    def test_density_integrates_to_one(self):
        h = esd(symmetric_eigenvalues(_sym(200, 1)), 25)
        assert (h.density * np.diff(h.edges)).sum() == pytest.approx(1.0, abs=1e-12)

    def test_csv(self, tmp_path):
        h = esd(SpectralSummary(np.linspace(-1, 1, 11)[::-1]), 4)
        h.to_csv(tmp_path / "h.csv", overlay=("rho_sc", semicircle_pdf))
        lines = (tmp_path / "h.csv").read_text().splitlines()
        assert lines[0] == "bin_center,density,rho_sc" and len(lines) == 5
        data = np.loadtxt(tmp_path / "h.csv", delimiter=",", skiprows=1)
        np.testing.assert_allclose(data[:, 2], semicircle_pdf(data[:, 0]))

    def test_null_support(self):
        h = esd(symmetric_eigenvalues(_scaled_null(1000, 2)), 60)
        assert h.edges[0] > -2.3 and h.edges[-1] < 2.3


class TestSemicircle:
    def test_endpoints(self):
        assert semicircle_cdf(-2) == 0.0 and semicircle_cdf(2) == 1.0
        assert semicircle_cdf(-5) == 0.0 and semicircle_cdf(5) == 1.0
        assert semicircle_cdf(0) == pytest.approx(0.5, abs=1e-15)

    def test_against_quadrature(self):
        for x in (1.0, -1.3, 0.4, 1.9):
            ref, _ = quad(semicircle_pdf, -2, x, epsabs=1e-13, epsrel=1e-13)
            assert semicircle_cdf(x) == pytest.approx(ref, abs=1e-10)

    def test_pdf_normalized(self):
        total, _ = quad(semicircle_pdf, -2, 2, epsabs=1e-13)
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_quantile_roundtrip(self):
        p = np.linspace(0, 1, 21)
        np.testing.assert_allclose(semicircle_cdf(semicircle_quantile(p)), p, atol=1e-12)
        with pytest.raises(ValueError):
            semicircle_quantile(1.5)


class TestKs:
    def test_all_zero(self):
        assert ks_distance_to_semicircle(np.zeros(10)) == pytest.approx(0.5, abs=1e-15)

    def test_quantile_construction(self):
        n = 1000
        lam = semicircle_quantile((np.arange(1, n + 1) - 0.5) / n)
        assert ks_distance_to_semicircle(lam) <= 1 / (2 * n) + 1e-9

    def test_order_invariance(self):
        lam = np.random.default_rng(3).uniform(-2, 2, 100)
        a = ks_distance_to_semicircle(lam)
        assert a == ks_distance_to_semicircle(lam[::-1])
        assert a == ks_distance_to_semicircle(SpectralSummary(np.sort(lam)[::-1]))

    def test_range(self):
        assert ks_distance_to_semicircle(np.array([10.0])) == 1.0
        with pytest.raises(ValueError):
            ks_distance_to_semicircle(np.array([]))

    @pytest.mark.slow
    def test_null_n3000(self):
        lam = symmetric_eigenvalues(_scaled_null(3000, 11))
        assert ks_distance_to_semicircle(lam) <= 0.05
