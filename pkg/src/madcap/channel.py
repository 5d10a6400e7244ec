"""Two-qubit amplitude-damping channel with a tunable degree of memory.

The channel acting on two consecutive qubits is the mixture

    E_mu(rho) = (1 - mu) (E x E)(rho) + mu E_full(rho)

of two independent amplitude-damping uses and the fully correlated channel in
which only |11> decays (to |00>). It is available in three forms: Kraus sums,
closed-form output matrices, and a Stinespring dilation onto an environment
E (two qubits) plus a memory qubit M.

Basis conventions: |00>, |01>, |10>, |11> for the system; |e1 e2 m>
lexicographic for the 8-dimensional EM register; S x E x M for the
32-dimensional dilated state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmat import DomainError, as_density, as_pure_state

COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Transmissivity ``eta`` and memory degree ``mu``, both in [0, 1]."""

    eta: float
    mu: float

    def __post_init__(self):
        for name in ("eta", "mu"):
            v = getattr(self, name)
            if not (np.isfinite(v) and 0.0 <= v <= 1.0):
                raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "mu", float(self.mu))


@dataclass(frozen=True)
class KrausSet:
    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=np.complex128) for k in self.ops)
        if not ops:
            raise DomainError("empty Kraus set")
        dim = ops[0].shape[1]
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(dim))) > COMPLETENESS_TOL:
            raise DomainError("Kraus operators are not complete")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[1]

    def __len__(self):
        return len(self.ops)

    def __getitem__(self, i) -> np.ndarray:
        return self.ops[i]

    def apply(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.complex128)
        return sum(k @ rho @ k.conj().T for k in self.ops)


def single_qubit_kraus(eta: float) -> KrausSet:
    _check_eta(eta)
    e0 = np.array([[1.0, 0.0], [0.0, np.sqrt(eta)]])
    e1 = np.array([[0.0, np.sqrt(1.0 - eta)], [0.0, 0.0]])
    return KrausSet((e0, e1))


def memoryless_kraus(eta: float) -> KrausSet:
    """A_i = E_{i1} x E_{i2} for two independent uses."""
    e0, e1 = single_qubit_kraus(eta).ops
    return KrausSet((np.kron(e0, e0), np.kron(e0, e1), np.kron(e1, e0), np.kron(e1, e1)))


def full_memory_kraus(eta: float) -> KrausSet:
    _check_eta(eta)
    b0 = np.diag([1.0, 1.0, 1.0, np.sqrt(eta)]).astype(np.complex128)
    b1 = np.zeros((4, 4), dtype=np.complex128)
    b1[0, 3] = np.sqrt(1.0 - eta)
    return KrausSet((b0, b1))


def apply_mu(rho, p: ChannelParams) -> np.ndarray:
    """Kraus-form evaluation of E_mu(rho)."""
    rho = as_density(rho)
    if rho.shape != (4, 4):
        raise DomainError("apply_mu expects a two-qubit density matrix")
    out = (1.0 - p.mu) * memoryless_kraus(p.eta).apply(rho)
    return out + p.mu * full_memory_kraus(p.eta).apply(rho)


def _entries(rho):
    """Name the independent entries of a two-qubit density matrix."""
    r = np.asarray(rho, dtype=np.complex128)
    alpha, beta, gamma, delta = r[0, 0].real, r[1, 1].real, r[2, 2].real, r[3, 3].real
    kappa, lam, xi = r[0, 1], r[0, 2], r[0, 3]
    nu, o = r[1, 2], r[1, 3]
    pi = r[2, 3]
    return alpha, beta, gamma, delta, kappa, lam, xi, nu, o, pi


def _hermitian_from_upper(upper: np.ndarray) -> np.ndarray:
    diag = np.diag(np.diag(upper).real)
    strict = np.triu(upper, 1)
    return diag + strict + strict.conj().T


def system_output_closed_form(rho, p: ChannelParams) -> np.ndarray:
    """E_mu(rho) assembled entry by entry from its upper triangle."""
    rho = as_density(rho)
    alpha, beta, gamma, delta, kappa, lam, xi, nu, o, pi = _entries(rho)
    eta, mu = p.eta, p.mu
    se = np.sqrt(eta)
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = (1 - mu) * (alpha + (1 - eta) * (beta + gamma) + (1 - eta) ** 2 * delta) + mu * (
        alpha + (1 - eta) * delta
    )
    m[0, 1] = (1 - mu) * (se * kappa + se * (1 - eta) * pi) + mu * kappa
    m[0, 2] = (1 - mu) * (se * lam + se * (1 - eta) * o) + mu * lam
    m[0, 3] = ((1 - mu) * eta + mu * se) * xi
    m[1, 1] = (1 - mu) * (eta * beta + eta * (1 - eta) * delta) + mu * beta
    m[1, 2] = ((1 - mu) * eta + mu) * nu
    m[1, 3] = ((1 - mu) * eta**1.5 + mu * se) * o
    m[2, 2] = (1 - mu) * (eta * gamma + eta * (1 - eta) * delta) + mu * gamma
    m[2, 3] = ((1 - mu) * eta**1.5 + mu * se) * pi
    m[3, 3] = (1 - mu) * eta**2 * delta + mu * eta * delta
    return _hermitian_from_upper(m)


def environment_output_closed_form(rho, p: ChannelParams) -> np.ndarray:
    """Joint state of the environment and memory register after the channel.

    Rows/columns 011 and 101 are identically zero.
    """
    rho = as_density(rho)
    alpha, beta, gamma, delta, kappa, lam, xi, nu, o, pi = _entries(rho)
    eta, mu = p.eta, p.mu
    se, s1e = np.sqrt(eta), np.sqrt(1 - eta)
    smm = np.sqrt(mu * (1 - mu))
    m = np.zeros((8, 8), dtype=np.complex128)
    # index = 4*e1 + 2*e2 + m
    m[0, 0] = (1 - mu) * (alpha + eta * (beta + gamma) + eta**2 * delta)
    m[0, 1] = smm * (alpha + se * (beta + gamma) + eta**1.5 * delta)
    m[0, 2] = (1 - mu) * s1e * (kappa + eta * pi)
    m[0, 4] = (1 - mu) * s1e * (lam + eta * o)
    m[0, 6] = (1 - mu) * (1 - eta) * xi
    m[0, 7] = smm * s1e * xi
    m[1, 1] = mu * (1 - (1 - eta) * delta)
    m[1, 2] = smm * s1e * (kappa + se * pi)
    m[1, 4] = smm * s1e * (lam + se * o)
    m[1, 6] = smm * (1 - eta) * xi
    m[1, 7] = mu * s1e * xi
    m[2, 2] = (1 - mu) * (1 - eta) * (beta + eta * delta)
    m[2, 4] = (1 - mu) * (1 - eta) * nu
    m[2, 6] = (1 - mu) * (1 - eta) ** 1.5 * o
    m[2, 7] = smm * (1 - eta) * o
    m[4, 4] = (1 - mu) * (1 - eta) * (gamma + eta * delta)
    m[4, 6] = (1 - mu) * (1 - eta) ** 1.5 * pi
    m[4, 7] = smm * (1 - eta) * pi
    m[6, 6] = (1 - mu) * (1 - eta) ** 2 * delta
    m[6, 7] = smm * (1 - eta) ** 1.5 * delta
    m[7, 7] = mu * (1 - eta) * delta
    return _hermitian_from_upper(m)


def dilation_isometry(p: ChannelParams) -> np.ndarray:
    """32 x 4 isometry V with V|s> = U(|s>|000>), rows indexed S x E x M."""
    eta, mu = p.eta, p.mu
    s1m, sm = np.sqrt(1 - mu), np.sqrt(mu)
    se, s1e = np.sqrt(eta), np.sqrt(1 - eta)
    v = np.zeros((32, 4))

    def put(s_out, e, m, s_in, amp):
        v[8 * s_out + 2 * e + m, s_in] += amp

    # |00> is untouched by the damping; only the memory qubit is rotated
    put(0, 0, 0, 0, s1m)
    put(0, 0, 1, 0, sm)
    # |01>: the second qubit decays in the memoryless branch (environment |01>)
    put(1, 0, 0, 1, s1m * se)
    put(0, 1, 0, 1, s1m * s1e)
    put(1, 0, 1, 1, sm)
    put(2, 0, 0, 2, s1m * se)
    put(0, 2, 0, 2, s1m * s1e)
    put(2, 0, 1, 2, sm)
    put(3, 0, 0, 3, s1m * eta)
    put(1, 2, 0, 3, s1m * np.sqrt(eta * (1 - eta)))
    put(2, 1, 0, 3, s1m * np.sqrt(eta * (1 - eta)))
    put(0, 3, 0, 3, s1m * (1 - eta))
    put(3, 0, 1, 3, sm * se)
    put(0, 3, 1, 3, sm * s1e)
    return v


def dilation_evolve(psi, p: ChannelParams) -> np.ndarray:
    """Joint S x E x M state after the channel acts on |psi> x |000>."""
    psi = as_pure_state(psi, dim=4)
    return dilation_isometry(p) @ psi


def dilation_outputs(rho, p: ChannelParams) -> tuple[np.ndarray, np.ndarray]:
    """(system, environment) reductions of V rho V^dagger for a mixed input."""
    rho = as_density(rho)
    v = dilation_isometry(p)
    t = (v @ rho @ v.T).reshape(4, 8, 4, 8)
    return np.einsum("aibi->ab", t), np.einsum("aiaj->ij", t)


@dataclass(frozen=True)
class CovarianceOps:
    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray
    swap: np.ndarray

    def __iter__(self):
        return iter((self.r1, self.r2, self.r3, self.swap))


def covariance_ops() -> CovarianceOps:
    """Phase flips sz x 1, 1 x sz, sz x sz and the swap gate."""
    sz = np.diag([1.0, -1.0])
    one = np.eye(2)
    swap = np.zeros((4, 4))
    for i, j in ((0, 0), (1, 2), (2, 1), (3, 3)):
        swap[i, j] = 1.0
    return CovarianceOps(np.kron(sz, one), np.kron(one, sz), np.kron(sz, sz), swap)


def _check_eta(eta):
    if not (np.isfinite(eta) and 0.0 <= eta <= 1.0):
        raise DomainError(f"eta must lie in [0, 1], got {eta!r}")


@dataclass(frozen=True)
class CheckReport:
    """Worst residuals of the representation and covariance checks."""

    system: float
    environment: float
    covariance_memoryless: float
    covariance_full: float
    covariance_mu: float
    trials: int

    def residuals(self) -> dict[str, float]:
        return {
            "system (kraus/closed/dilation)": self.system,
            "environment (closed/dilation)": self.environment,
            "covariance memoryless": self.covariance_memoryless,
            "covariance full memory": self.covariance_full,
            "covariance mixed": self.covariance_mu,
        }

    @property
    def worst(self) -> float:
        return max(self.residuals().values())


def self_check(
    trials: int = 1000, seed: int = 0, param_pairs: int = 20, cov_states: int | None = None
) -> CheckReport:
    """Compare the three output representations and test covariance on random inputs.

    ``trials`` random (rho, eta, mu) triples drive the representation check.
    Covariance uses ``cov_states`` states (default ``max(1, trials // param_pairs)``)
    against ``param_pairs`` random parameter pairs.
    """
    from .qmat import random_density

    if trials < 1 or param_pairs < 1:
        raise DomainError("trials and param_pairs must be positive")
    rng = np.random.default_rng(seed)
    sys_res = env_res = 0.0
    for _ in range(trials):
        rho = random_density(4, rng)
        p = ChannelParams(rng.random(), rng.random())
        kraus = apply_mu(rho, p)
        closed = system_output_closed_form(rho, p)
        dil_s, dil_e = dilation_outputs(rho, p)
        sys_res = max(sys_res, np.abs(kraus - closed).max(), np.abs(kraus - dil_s).max())
        env_res = max(env_res, np.abs(environment_output_closed_form(rho, p) - dil_e).max())

    ops = list(covariance_ops())
    params = [ChannelParams(rng.random(), rng.random()) for _ in range(param_pairs)]
    sets = [(memoryless_kraus(p.eta), full_memory_kraus(p.eta), p) for p in params]
    cov = [0.0, 0.0, 0.0]
    if cov_states is None:
        cov_states = max(1, trials // param_pairs)
    for _ in range(cov_states):
        rho = random_density(4, rng)
        rotated = [u @ rho @ u for u in ops]
        for a, b, p in sets:
            for k, ch in enumerate((a.apply, b.apply, lambda r: apply_mu(r, p))):
                out = ch(rho)
                for u, r in zip(ops, rotated):
                    cov[k] = max(cov[k], np.abs(ch(r) - u @ out @ u).max())
    return CheckReport(float(sys_res), float(env_res), *map(float, cov), trials)
