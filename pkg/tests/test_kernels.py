import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etcs import _kernels

backends = _kernels.available_backends()


def test_sigma_table():
    t = _kernels.sigma_minus_one_table(6)
    assert t[1:] == pytest.approx([1, 1.5, 4 / 3, 1.75, 1.2, 2.0])


@pytest.mark.parametrize("backend", backends)
def test_gluing_scan_backends_agree(backend):
    ref = _kernels.gluing_scan(2, 2, [1], [1], 4, backend="numpy")
    out = _kernels.gluing_scan(2, 2, [1], [1], 4, backend=backend)
    assert np.array_equal(ref, out)
    assert len(out) > 0


@pytest.mark.parametrize("backend", backends)
def test_eta_qseries_backends_agree(backend):
    re = np.linspace(-0.5, 0.5, 7)
    im = np.linspace(0.6, 2.0, 7)
    ref = _kernels.eta_qseries(re, im, 80, backend="numpy")
    assert np.allclose(_kernels.eta_qseries(re, im, 80, backend=backend), ref, atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 400), st.integers(-200, 200)), min_size=1, max_size=10))
def test_eq8_scan_backends_agree(pairs):
    p, s = zip(*pairs)
    ref = _kernels.eq8_scan(p, s, 500, backend="numpy")
    for b in backends:
        assert np.array_equal(_kernels.eq8_scan(p, s, 500, backend=b), ref)
