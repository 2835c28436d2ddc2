import cmath
import math

import cvxpy as cp
import numpy as np
import pytest

from conftest import crandn
from fbmcs.core import SampleMask, SolverConfig, SubsampledSignal, ValidationError
from fbmcs.fbm import FbmSpec, synthesize_fbm
from fbmcs.sampling import measure, random_mask, subsample
from fbmcs.solver import reconstruct_time_domain, soft_threshold, solve_bp, solve_tv, tv_norm
from fbmcs.transform import dft_forward, dft_inverse

TIGHT = SolverConfig(max_iters=50_000, tol_primal=1e-8, tol_change=1e-8)


def dense_operator(mask, domain="spectrum"):
    n = mask.n
    t = np.arange(n)
    sign = 1 if domain == "spectrum" else -1
    U = np.exp(sign * 2j * np.pi * np.outer(t, t) / n) / math.sqrt(n)
    return U[mask.indices]


def reference_solve(samples, objective, domain="spectrum"):
    """Interior-point solution of the dense formulation."""
    A = dense_operator(samples.mask, domain)
    x = cp.Variable(samples.n, complex=True)
    expr = cp.norm1(x) if objective == "l1" else cp.sum(cp.abs(cp.diff(x)))
    prob = cp.Problem(cp.Minimize(expr), [A @ x == samples.values])
    prob.solve(solver="CLARABEL")
    return prob.value, x.value


def random_instance(n, seed):
    rng = np.random.default_rng(1000 + seed)
    f = crandn(rng, n)
    mask = random_mask(n, 2, seed)
    return subsample(f, mask)


def sparse_instance(seed, n=64, k=3, m_factor=2):
    rng = np.random.default_rng(seed)
    F = np.zeros(n, dtype=complex)
    support = rng.choice(n, k, replace=False)
    F[support] = rng.uniform(1.0, 2.0, k) * np.exp(2j * np.pi * rng.random(k))
    mask = random_mask(n, m_factor, seed)
    return F, measure(F, mask)


class TestPrimitives:
    def test_soft_threshold_examples(self):
        assert soft_threshold(3 + 4j, 5) == 0
        assert soft_threshold(3 + 4j, 0) == 3 + 4j
        assert soft_threshold(6 + 8j, 5) == pytest.approx(3 + 4j, abs=1e-15)
        assert soft_threshold(0j, 1.0) == 0

    def test_soft_threshold_vector_keeps_phase(self, rng):
        z = crandn(rng, 50)
        out = soft_threshold(z, 0.5)
        mask = np.abs(z) > 0.5
        np.testing.assert_allclose(np.abs(out[mask]), np.abs(z[mask]) - 0.5, atol=1e-14)
        np.testing.assert_allclose(np.angle(out[mask]), np.angle(z[mask]), atol=1e-12)
        assert np.all(out[~mask] == 0)

    def test_soft_threshold_negative(self):
        with pytest.raises(ValidationError):
            soft_threshold(1.0, -0.1)

    def test_tv_norm_examples(self):
        assert tv_norm(np.full(7, 2 - 1j)) == 0
        assert tv_norm([0, 1, 0]) == 2
        assert tv_norm([0, 1j, 1]) == pytest.approx(1 + math.sqrt(2), rel=1e-15)
        assert tv_norm([5.0]) == 0


class TestBasisPursuit:
    def test_full_sampling_is_exact(self, rng):
        f = crandn(rng, 24)
        res = solve_bp(subsample(f, SampleMask(24, np.arange(24))))
        np.testing.assert_allclose(res.spectrum.coeffs, dft_forward(f).coeffs, atol=1e-8)
        np.testing.assert_allclose(reconstruct_time_domain(res.spectrum).values, f, atol=1e-8)
        assert res.converged

    @pytest.mark.parametrize("seed", range(10))
    def test_exact_sparse_recovery(self, seed):
        F, y = sparse_instance(seed)
        res = solve_bp(y, TIGHT)
        assert np.linalg.norm(res.spectrum.coeffs - F) / np.linalg.norm(F) <= 1e-4

    @pytest.mark.parametrize("n", [8, 12, 16])
    @pytest.mark.parametrize("seed", range(3))
    def test_matches_reference_solver(self, n, seed):
        y = random_instance(n, seed)
        ref_val, ref_x = reference_solve(y, "l1")
        res = solve_bp(y, TIGHT)
        assert abs(res.report.objective - ref_val) <= 5e-3 * ref_val
        assert np.linalg.norm(res.spectrum.coeffs - ref_x) <= 1e-3 * np.linalg.norm(ref_x)

    def test_feasible_and_history_monotone(self):
        f = synthesize_fbm(FbmSpec(128, 0.75, 3))
        y = subsample(f, random_mask(128, 4, 3))
        res = solve_bp(y)
        assert res.converged
        assert res.report.residual <= SolverConfig().tol_primal
        hist = res.report.history
        assert hist.size == res.report.iters
        assert np.all(np.diff(hist) <= 0)
        assert res.report.objective == pytest.approx(hist[-1])
        assert res.signal == dft_inverse(res.spectrum)

    def test_non_convergence_is_flagged(self):
        f = synthesize_fbm(FbmSpec(128, 0.5, 1))
        y = subsample(f, random_mask(128, 4, 1))
        res = solve_bp(y, SolverConfig(max_iters=3))
        assert not res.converged
        assert res.report.iters == 3
        assert res.report.residual < 1e-10  # iterates stay feasible

    def test_zero_samples_give_zero(self):
        y = SubsampledSignal(SampleMask(8, [1, 5]), [0, 0])
        res = solve_bp(y)
        assert np.all(res.spectrum.coeffs == 0) and res.converged

    def test_deterministic(self):
        f = synthesize_fbm(FbmSpec(64, 0.6, 2))
        y = subsample(f, random_mask(64, 4, 2))
        assert solve_bp(y).spectrum == solve_bp(y).spectrum

    def test_scale_equivariant(self):
        f = synthesize_fbm(FbmSpec(64, 0.6, 4))
        y = subsample(f, random_mask(64, 4, 4))
        a = solve_bp(y, TIGHT).spectrum.coeffs
        b = solve_bp(SubsampledSignal(y.mask, 1e3 * y.values), TIGHT).spectrum.coeffs
        np.testing.assert_allclose(b, 1e3 * a, rtol=0, atol=1e-6 * np.linalg.norm(b))

    def test_rejects_non_samples(self):
        with pytest.raises(ValidationError):
            solve_bp(np.ones(4))


class TestTotalVariation:
    @pytest.mark.parametrize("n", [8, 12, 16])
    @pytest.mark.parametrize("seed", range(3))
    def test_matches_reference_solver(self, n, seed):
        y = random_instance(n, seed)
        ref_val, ref_x = reference_solve(y, "tv")
        res = solve_tv(y, TIGHT)
        assert abs(res.report.objective - ref_val) <= 5e-3 * ref_val
        if 0 in y.mask.indices:
            # otherwise adding a constant spectrum is a free direction
            assert np.linalg.norm(res.spectrum.coeffs - ref_x) <= 1e-3 * np.linalg.norm(ref_x)

    @pytest.mark.parametrize("seed", range(3))
    def test_signal_mode_matches_reference(self, seed):
        rng = np.random.default_rng(seed)
        f = np.cumsum(crandn(rng, 16))
        mask = random_mask(16, 2, seed + 50)
        Y = SubsampledSignal(mask, dft_forward(f).coeffs[mask.indices])
        ref_val, _ = reference_solve(Y, "tv", domain="signal")
        res = solve_tv(Y, TIGHT, mode="signal")
        assert abs(res.report.objective - ref_val) <= 5e-3 * ref_val
        np.testing.assert_allclose(res.spectrum.coeffs[mask.indices], Y.values, atol=1e-9)
        assert res.report.residual <= 1e-9

    def test_piecewise_constant_signal_recovered(self):
        n = 32
        f = np.zeros(n, dtype=complex)
        f[8:20] = 1.0 + 0.5j
        mask = SampleMask(n, np.r_[0:6, 26:32])  # low and high frequencies
        Y = SubsampledSignal(mask, dft_forward(f).coeffs[mask.indices])
        res = solve_tv(Y, TIGHT, mode="signal")
        assert res.report.objective <= tv_norm(f) * (1 + 1e-6)

    @pytest.mark.parametrize("indices", [[0, 3, 9], [0, 1], [0, 5, 6, 7, 11]])
    def test_constant_spectrum_recovered(self, indices):
        n = 12
        F = np.full(n, 0.7 - 0.2j)
        mask = SampleMask(n, indices)
        res = solve_tv(measure(F, mask))
        assert res.report.objective <= 1e-10
        np.testing.assert_allclose(res.spectrum.coeffs, F, atol=1e-10)

    def test_constant_spectrum_objective_when_dc_unsampled(self):
        F = np.full(12, 1.0 + 0j)
        res = solve_tv(measure(F, SampleMask(12, [2, 7])))
        assert res.report.objective <= 1e-10  # minimiser not unique here

    def test_feasible_and_history(self):
        f = synthesize_fbm(FbmSpec(128, 0.75, 5))
        y = subsample(f, random_mask(128, 4, 5))
        res = solve_tv(y)
        assert res.converged
        assert res.report.residual <= SolverConfig().tol_primal
        assert np.all(np.diff(res.report.history) <= 0)
        assert res.report.objective == pytest.approx(tv_norm(res.spectrum))

    def test_full_sampling(self, rng):
        f = crandn(rng, 10)
        res = solve_tv(subsample(f, SampleMask(10, np.arange(10))))
        np.testing.assert_allclose(res.signal.values, f, atol=1e-8)

    def test_unknown_mode(self):
        y = SubsampledSignal(SampleMask(4, [0]), [1.0])
        with pytest.raises(ValidationError):
            solve_tv(y, mode="wavelet")


def test_reconstruct_time_domain_alias(rng):
    F = crandn(rng, 20)
    assert reconstruct_time_domain(F) == dft_inverse(F)
    assert np.all(reconstruct_time_domain(np.zeros(5)).values == 0)


def test_phase_of_sparse_recovery_preserved():
    F, y = sparse_instance(3)
    res = solve_bp(y, TIGHT)
    k = int(np.argmax(np.abs(F)))
    assert cmath.phase(res.spectrum.coeffs[k]) == pytest.approx(cmath.phase(F[k]), abs=1e-6)
