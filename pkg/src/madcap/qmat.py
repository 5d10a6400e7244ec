"""Small dense linear-algebra and entropy kernel.

Density matrices and state vectors are plain ``numpy`` arrays. The ``as_*``
helpers validate an array against the physical invariants and return it as a
complex128 array; every public function here calls them on its inputs.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
# eigenvalues in [NEG_EIG_TOL, ZERO_EIG) are treated as exact zeros
NEG_EIG_TOL = -1e-10
ZERO_EIG = 1e-12


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def hermiticity_residual(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def as_density(m, *, trace_tol: float = TRACE_TOL) -> np.ndarray:
    """Validate ``m`` as a density matrix and return it as complex128."""
    m = _square(m)
    if hermiticity_residual(m) > HERMITIAN_TOL:
        raise DomainError("density matrix is not Hermitian")
    tr = np.trace(m).real
    if abs(tr - 1.0) > trace_tol:
        raise DomainError(f"density matrix has trace {tr!r}")
    w = np.linalg.eigvalsh(m)
    if w[0] < NEG_EIG_TOL:
        raise DomainError(f"density matrix has negative eigenvalue {w[0]!r}")
    return m


def as_pure_state(v, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if dim is not None and v.size != dim:
        raise DomainError(f"expected a {dim}-dimensional state, got {v.size}")
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise DomainError("state vector is not normalized")
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


def hermitian_eigenvalues(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending.

    Raises
    ------
    DomainError
        If ``m`` deviates from Hermiticity by more than 1e-10 (max-abs).
    """
    m = _square(m)
    if hermiticity_residual(m) > HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def entropy_from_eigenvalues(w) -> float:
    """Shannon entropy in bits of a spectrum, with the near-zero clamp applied."""
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < NEG_EIG_TOL:
        raise DomainError(f"negative eigenvalue {w.min()!r} in entropy")
    w = w[w >= ZERO_EIG]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr rho log2 rho."""
    rho = as_density(rho)
    return entropy_from_eigenvalues(np.linalg.eigvalsh(rho))


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability out of range: {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def partial_trace(rho, dims: Sequence[int], keep: int | Iterable[int]) -> np.ndarray:
    """Reduce ``rho`` on a tensor product of factors ``dims`` to the factors in ``keep``.

    Kept factors stay in their original order.
    """
    rho = _square(rho)
    dims = [int(d) for d in dims]
    keep = sorted({keep} if isinstance(keep, (int, np.integer)) else set(keep))
    n = len(dims)
    if any(d <= 0 for d in dims) or int(np.prod(dims)) != rho.shape[0]:
        raise DomainError(f"factor dims {dims} do not match matrix size {rho.shape[0]}")
    if not keep or len(keep) == n or keep[0] < 0 or keep[-1] >= n:
        raise DomainError(f"keep must select a nonempty proper subset of {n} factors")
    traced = [i for i in range(n) if i not in keep]
    t = rho.reshape(dims + dims)
    # bring (kept rows, traced rows, kept cols, traced cols) together
    t = t.transpose(keep + traced + [n + i for i in keep] + [n + i for i in traced])
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in traced]))
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def entanglement_entropy(psi) -> float:
    """Entropy of entanglement of a two-qubit pure state, in bits."""
    psi = as_pure_state(psi, dim=4)
    # singular values of the 2x2 coefficient matrix are the Schmidt coefficients
    s = np.linalg.svd(psi.reshape(2, 2), compute_uv=False)
    return entropy_from_eigenvalues(s**2)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix from a complex Ginibre matrix."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
