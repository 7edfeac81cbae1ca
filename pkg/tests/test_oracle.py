import ast
import inspect
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import qcat.metric
import qcat.oracle
import qcat.polyring
from qcat.errors import ConvergenceFailure, DomainError
from qcat.model import analytic_spectrum, build_chain, build_qc_limit
from qcat.oracle import char_poly, dense_eigen, det_elim, eigvals, matrix_power_norm, sort_spectrum

small = st.integers(1, 7)
entries = st.floats(-5, 5, allow_nan=False)


def square(n):
    return arrays(float, (n, n), elements=entries)


def _match(a, b):
    """Greedy pairing distance between two spectra."""
    b = list(b)
    worst = 0.0
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        worst = max(worst, abs(x - b.pop(j)))
    return worst


@given(small.flatmap(square))
def test_eigenpairs_satisfy_equation(a):
    res = dense_eigen(a, want_vectors=True)
    scale = max(1.0, np.abs(a).max())
    for k, lam in enumerate(res.values):
        v = res.vectors[:, k]
        assert np.linalg.norm(v) == pytest.approx(1.0)
        # generic random matrices are well conditioned enough for this bound
        assert np.abs(a @ v - lam * v).max() < 1e-8 * scale * a.shape[0]


@given(small.flatmap(square))
def test_trace_and_determinant(a):
    vals = eigvals(a)
    scale = max(1.0, np.abs(a).max()) ** a.shape[0]
    assert abs(vals.sum() - np.trace(a)) < 1e-9 * max(1.0, np.abs(a).max()) * a.shape[0]
    assert abs(np.prod(vals) - det_elim(a)) < 1e-8 * scale


@given(small.flatmap(square))
def test_char_poly_matches_product_form(a):
    got = char_poly(a)
    want = np.poly(eigvals(a))
    scale = max(1.0, np.abs(a).max()) ** a.shape[0]
    assert np.abs(got - want).max() < 1e-7 * scale


def test_known_spectra():
    assert np.allclose(eigvals(np.diag([3.0, -1.0, 2.0])), [-1, 2, 3])
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert np.allclose(eigvals(rot), [-1j, 1j])
    for n in (2, 5, 8):
        assert _match(eigvals(build_chain(n, 0.5)), analytic_spectrum(n, 0.5).values) < 1e-10


def test_multiprecision_resolves_near_ep():
    # in double the ladder at lam = 1e-2, N = 10 is smeared far beyond 1e-9
    want = analytic_spectrum(10, 0.01).values
    got = dense_eigen(build_chain(10, 0.01, dps=40)).values
    assert np.abs(got - want).max() < 1e-12


def test_sorting_is_stable_under_noise():
    vals, _ = sort_spectrum([1 + 1e-13j, 1 - 1e-13j, -2.0])
    assert vals[0] == -2.0


def test_errors():
    with pytest.raises(DomainError):
        dense_eigen(np.ones((2, 3)))
    with pytest.raises(DomainError):
        char_poly(np.eye(17))
    with pytest.raises(DomainError):
        matrix_power_norm(np.eye(2), 0)


def test_convergence_budget(monkeypatch):
    monkeypatch.setattr(qcat.oracle, "SWEEPS_PER_DIM", 0)
    with pytest.raises(ConvergenceFailure) as info:
        dense_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert info.value.best_residual is not None


@pytest.mark.parametrize("n", range(2, 9))
def test_qc_limit_nilpotent_in_double(n):
    h = build_qc_limit(n)
    assert matrix_power_norm(h, n) < 1e-8
    assert matrix_power_norm(h, n - 1) > 1e-6


def test_char_poly_of_chain():
    # det(tI - H) = prod (t - (2n+1-N) r)
    n, lam = 4, 0.25
    assert np.allclose(char_poly(build_chain(n, lam)), np.poly(analytic_spectrum(n, lam).values))
    assert math.isclose(abs(det_elim(build_qc_limit(5))), 0.0, abs_tol=1e-9)


def _imports(module):
    tree = ast.parse(inspect.getsource(module))
    names = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            names.add(node.module or "")
        elif isinstance(node, ast.Import):
            names.update(a.name for a in node.names)
    return names


def test_oracle_is_independent_of_the_polynomial_path():
    assert _imports(qcat.oracle) <= {"__future__", "cmath", "math", "contextlib", "dataclasses", "mpmath", "numpy", "errors"}
    assert "linalg" not in inspect.getsource(qcat.oracle)
    for mod in (qcat.metric, qcat.polyring):
        assert not {"oracle", "qcat.oracle"} & _imports(mod)


def _random_matrices(count=100, seed=11):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 9))
        yield rng.normal(size=(n, n))


def test_trace_and_determinant_on_random_batch():
    for a in _random_matrices():
        vals = eigvals(a)
        assert abs(vals.sum() - np.trace(a)) < 1e-8
        det = det_elim(a)
        assert abs(np.prod(vals) - det) <= 1e-6 * max(abs(det), 1e-12)


def test_char_poly_roots_via_companion():
    for a in _random_matrices(40, seed=5):
        n = a.shape[0]
        c = char_poly(a)
        companion = np.zeros((n, n))
        companion[0, :] = -c[1:].real
        companion[1:, :-1] += np.eye(n - 1)
        assert _match(eigvals(companion), eigvals(a)) < 1e-6


@given(small.flatmap(square))
def test_symmetric_inputs_give_real_spectra(a):
    assert np.abs(eigvals(a + a.T).imag).max() < 1e-10
