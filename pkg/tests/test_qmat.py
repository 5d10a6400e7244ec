import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from madcap.qmat import (
    DomainError,
    as_density,
    binary_entropy,
    entanglement_entropy,
    hermitian_eigenvalues,
    partial_trace,
    projector,
    random_density,
    random_pure_state,
    random_unitary,
    von_neumann_entropy,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@pytest.mark.parametrize(
    "m, expected",
    [
        (np.eye(4), [1, 1, 1, 1]),
        (np.diag([0.1, 0.2, 0.3, 0.4]), [0.1, 0.2, 0.3, 0.4]),
        (np.array([[0, 1], [1, 0]]), [-1, 1]),
    ],
)
def test_eigenvalues_known(m, expected):
    np.testing.assert_allclose(hermitian_eigenvalues(m), expected, atol=1e-14)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(DomainError):
        hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_eigen_reconstruction_and_trace(seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    h = g + g.conj().T
    w = hermitian_eigenvalues(h)
    assert np.all(np.diff(w) >= 0)
    assert abs(w.sum() - np.trace(h).real) <= 1e-10
    _, v = np.linalg.eigh(h)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)) <= 1e-10


def test_entropy_examples():
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-14)
    assert von_neumann_entropy(projector(random_pure_state(4, np.random.default_rng(1)))) == pytest.approx(
        0.0, abs=1e-12
    )
    assert von_neumann_entropy(np.diag([0.5, 0.5, 0, 0])) == pytest.approx(1.0, abs=1e-14)


def test_entropy_clamp_and_rejection():
    # tiny negative eigenvalues from rounding are treated as zero
    assert von_neumann_entropy(np.diag([1 + 5e-11, -5e-11])) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(DomainError):
        as_density(np.diag([1.1, -0.1]))


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.25) == pytest.approx(-0.25 * math.log2(0.25) - 0.75 * math.log2(0.75), abs=1e-15)
    assert binary_entropy(0.25) == pytest.approx(0.811278124459, abs=1e-12)
    for bad in (-0.1, 1.5):
        with pytest.raises(DomainError):
            binary_entropy(bad)


def test_partial_trace_bell_and_product():
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    for keep in (0, 1):
        np.testing.assert_allclose(partial_trace(projector(bell), [2, 2], keep), np.eye(2) / 2, atol=1e-15)
    rng = np.random.default_rng(3)
    ra, rb = random_density(2, rng), random_density(4, rng)
    np.testing.assert_allclose(partial_trace(np.kron(ra, rb), [2, 4], [0]), ra, atol=1e-14)
    np.testing.assert_allclose(partial_trace(np.kron(ra, rb), [2, 4], [1]), rb, atol=1e-14)


def test_partial_trace_errors():
    with pytest.raises(DomainError):
        partial_trace(np.eye(4) / 4, [2, 3], 0)
    with pytest.raises(DomainError):
        partial_trace(np.eye(4) / 4, [2, 2], [0, 1])


def test_partial_trace_middle_factor_keeps_order():
    rng = np.random.default_rng(5)
    a, b, c = random_density(2, rng), random_density(4, rng), random_density(2, rng)
    big = np.kron(np.kron(a, b), c)
    np.testing.assert_allclose(partial_trace(big, [2, 4, 2], [0, 2]), np.kron(a, c), atol=1e-14)


def test_entanglement_entropy_examples():
    assert entanglement_entropy(np.array([0, 1, 1, 0]) / np.sqrt(2)) == pytest.approx(1.0, abs=1e-14)
    assert entanglement_entropy(np.array([1, 0, 0, 0])) == pytest.approx(0.0, abs=1e-14)
    for th in (0.1, 0.4, 1.0):
        psi = np.array([np.cos(th), 0, 0, np.sin(th)])
        assert entanglement_entropy(psi) == pytest.approx(binary_entropy(np.cos(th) ** 2), abs=1e-12)
    with pytest.raises(DomainError):
        entanglement_entropy(np.ones(8) / np.sqrt(8))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_entropy_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(8, rng)
    u = random_unitary(8, rng)
    assert abs(von_neumann_entropy(u @ rho @ u.conj().T) - von_neumann_entropy(rho)) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_pure_bipartite_reductions_have_equal_entropy(seed):
    rng = np.random.default_rng(seed)
    psi = random_pure_state(8, rng)
    rho = projector(psi)
    sa = von_neumann_entropy(partial_trace(rho, [2, 4], 0))
    sb = von_neumann_entropy(partial_trace(rho, [2, 4], 1))
    assert abs(sa - sb) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_entanglement_entropy_matches_reduced_state(seed):
    psi = random_pure_state(4, np.random.default_rng(seed))
    rho = projector(psi)
    e = entanglement_entropy(psi)
    assert abs(e - von_neumann_entropy(partial_trace(rho, [2, 2], 0))) <= 1e-10
    assert abs(e - von_neumann_entropy(partial_trace(rho, [2, 2], 1))) <= 1e-10
    assert 0 <= e <= 1 + 1e-12


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_entropy_concavity(seed):
    rng = np.random.default_rng(seed)
    r1, r2 = random_density(4, rng, rank=2), random_density(4, rng, rank=1)
    for lam in np.linspace(0, 1, 11):
        mix = von_neumann_entropy(lam * r1 + (1 - lam) * r2)
        assert mix >= lam * von_neumann_entropy(r1) + (1 - lam) * von_neumann_entropy(r2) - 1e-10
