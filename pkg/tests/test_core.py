import numpy as np
import pytest

from fbmcs.core import (
    ComplexSignal,
    HurstParameter,
    SampleMask,
    SolverConfig,
    SparsityReport,
    Spectrum,
    SubsampledSignal,
    ValidationError,
    rng_stream,
)


@pytest.mark.parametrize("bad", [[1.0, np.nan], [np.inf], [1 + 1j, complex(0, np.inf)]])
def test_vectors_reject_non_finite(bad):
    with pytest.raises(ValidationError):
        ComplexSignal(bad)
    with pytest.raises(ValidationError):
        Spectrum(bad)


def test_vectors_reject_empty_and_2d():
    with pytest.raises(ValidationError):
        ComplexSignal([])
    with pytest.raises(ValidationError):
        Spectrum(np.ones((2, 2)))


def test_signal_is_immutable_copy():
    src = np.array([1.0, 2.0, 3.0])
    f = ComplexSignal(src)
    src[0] = 99
    assert f.values[0] == 1.0
    with pytest.raises(ValueError):
        f.values[0] = 5
    assert len(f) == 3 and f.n == 3
    assert np.asarray(f).dtype == np.complex128


@pytest.mark.parametrize("h", [0.0, 1.0, -0.1, 1.5])
def test_hurst_bounds(h):
    with pytest.raises(ValidationError):
        HurstParameter(h)


def test_hurst_ok():
    assert float(HurstParameter(0.75)) == 0.75


@pytest.mark.parametrize(
    "n, idx",
    [(8, [1, 1, 2]), (8, [3, 2]), (8, [0, 8]), (8, [-1, 2]), (8, []), (0, [0])],
)
def test_mask_rejects_invalid(n, idx):
    with pytest.raises(ValidationError):
        SampleMask(n, np.array(idx, dtype=np.int64))


def test_mask_complement():
    m = SampleMask(6, [0, 2, 5])
    assert m.m == 3
    assert list(m.complement()) == [1, 3, 4]


def test_subsampled_length_must_match():
    m = SampleMask(4, [0, 2])
    with pytest.raises(ValidationError):
        SubsampledSignal(m, [1.0])
    s = SubsampledSignal(m, [1.0, 2.0])
    assert s.n == 4 and s.m == 2


@pytest.mark.parametrize(
    "kwargs",
    [{"max_iters": 0}, {"tol_primal": 0.0}, {"tol_change": -1.0}, {"rho": 0.0}, {"max_iters": 2.5}],
)
def test_solver_config_rejects(kwargs):
    with pytest.raises(ValidationError):
        SolverConfig(**kwargs)


def test_sparsity_report_bounds():
    with pytest.raises(ValidationError):
        SparsityReport(0.1, 101.0)
    with pytest.raises(ValidationError):
        SparsityReport(1.0, 5.0)


def test_rng_streams_are_keyed():
    a = rng_stream(7, 0).standard_normal(4)
    b = rng_stream(7, 0).standard_normal(4)
    c = rng_stream(7, 1).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.allclose(a, c)
    with pytest.raises(ValidationError):
        rng_stream(-1)
