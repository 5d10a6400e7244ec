"""Capacity bounds of the memory amplitude-damping channel.

Quantities (all in bits):

* ``chi_lwb_g1`` / ``chi_lwb_g2``: Holevo quantity maximized over the G1 / G2
  ensemble families; lower bounds on the single-shot classical capacity.
* ``q_lwb``: coherent information maximized over diagonal inputs, floored
  at zero; a lower bound on the quantum capacity.
* ``q_upb``: mixture of the endpoint (mu = 0, 1) quantum capacities; an
  upper bound.
* ``entanglement_assisted``: S(rho) + I_c maximized over diagonal inputs
  with equal |01>, |10> populations.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize as sopt

from . import _kernels as K
from .channel import (
    ChannelParams,
    environment_output_closed_form,
    single_qubit_kraus,
    system_output_closed_form,
)
from .ensembles import (
    Ensemble,
    G1Params,
    G2Params,
    Populations,
    average_entanglement,
    build_g1,
    build_g2,
    ensemble_density,
)
from .optimize import Domain, OptimizerConfig, maximize
from .qmat import DomainError, entropy_from_eigenvalues, projector, von_neumann_entropy

DiagonalInput = Populations

QUANTITIES = ("chi-g1", "chi-g2", "q-lwb", "q-upb", "ce")
# optimized values at or below this are numerical zeros
ZERO_VALUE = 1e-12
Q_POSITIVE = 1e-9
DELTA_POPULATED = 1e-6
GROUND = Populations(1.0, 0.0, 0.0, 0.0)

_PHASES = (0.0, 2 * math.pi)


@dataclass
class CapacityPoint:
    quantity: str
    eta: float
    mu: float
    value: float
    argmax: G1Params | G2Params | Populations | None = None
    evals: int = 0
    restarts_used: int = 0
    converged: bool = True
    raw_value: float | None = field(default=None)

    def argmax_fields(self) -> dict:
        return {} if self.argmax is None else asdict(self.argmax)

    def to_dict(self) -> dict:
        d = {"quantity": self.quantity, "eta": self.eta, "mu": self.mu, "value": self.value}
        d["argmax"] = self.argmax_fields()
        d.update(
            evals=self.evals,
            restarts_used=self.restarts_used,
            converged=self.converged,
            raw_value=self.raw_value,
        )
        return d


def _args(p: ChannelParams) -> np.ndarray:
    return np.array([p.eta, p.mu])


def _entropy(m) -> float:
    return entropy_from_eigenvalues(np.linalg.eigvalsh(m))


def holevo(p: ChannelParams, e: Ensemble) -> float:
    """S(E(rho)) - sum_k p_k S(E(psi_k)) with rho the ensemble average."""
    s_avg = _entropy(system_output_closed_form(ensemble_density(e), p))
    s_parts = sum(q * _entropy(system_output_closed_form(projector(s), p)) for q, s in e if q > 0)
    return s_avg - s_parts


def coherent_information(d, p: ChannelParams) -> float:
    """S(rho') - S(rho^EM') for a diagonal input (or any two-qubit density matrix)."""
    rho = d.density() if isinstance(d, Populations) else d
    return von_neumann_entropy(system_output_closed_form(rho, p)) - von_neumann_entropy(
        environment_output_closed_form(rho, p)
    )


def mutual_information(d, p: ChannelParams) -> float:
    """S(rho) + I_c(rho)."""
    rho = d.density() if isinstance(d, Populations) else d
    return von_neumann_entropy(rho) + coherent_information(rho, p)


def chi_lwb_g1(
    p: ChannelParams, cfg: OptimizerConfig | None = None, *, phase_search: bool = False
) -> CapacityPoint:
    """Holevo quantity maximized over G1.

    Squared amplitudes are searched on the probability simplex; with
    ``phase_search`` the three relative phases are searched on [0, 2 pi].
    """
    domain = Domain(4, _PHASES[:1] * 3, _PHASES[1:] * 3) if phase_search else Domain(4)
    res = maximize(K.g1_holevo, domain, cfg, args=_args(p))
    x = res.x
    phases = tuple(x[4:7]) if phase_search else (0.0, 0.0, 0.0)
    g = G1Params(*(math.sqrt(v) for v in x[:3]), *phases)
    return _point("chi-g1", p, max(res.value, 0.0), g, res)


def chi_lwb_g2(p: ChannelParams, cfg: OptimizerConfig | None = None) -> CapacityPoint:
    """Holevo quantity of G2 maximized over (beta, theta2) in [0, 1/2] x [0, pi/2]."""
    res = maximize(K.g2_holevo, Domain.box([0.0, 0.0], [0.5, math.pi / 2]), cfg, args=_args(p))
    g = G2Params(beta=float(res.x[0]), theta2=float(res.x[1]))
    return _point("chi-g2", p, max(res.value, 0.0), g, res)


def q_lwb(p: ChannelParams, cfg: OptimizerConfig | None = None) -> CapacityPoint:
    """max(I_c, 0) over diagonal inputs.

    When the floor is active the reported input is |00><00|, which attains
    I_c = 0 for every (eta, mu); the unfloored optimum stays in ``raw_value``.
    """
    res = maximize(K.coherent_info, Domain.probability_simplex(4), cfg, args=_args(p))
    if res.value <= ZERO_VALUE:
        return _point("q-lwb", p, 0.0, GROUND, res)
    return _point("q-lwb", p, res.value, Populations(*res.x), res)


@lru_cache(maxsize=4096)
def _q_endpoint_cached(eta: float, which: str, cfg: OptimizerConfig) -> float:
    mu = {"memoryless": 0.0, "full": 1.0}[which]
    return q_lwb(ChannelParams(eta, mu), cfg).value


def q_endpoint(eta: float, which: str, cfg: OptimizerConfig | None = None) -> float:
    """Quantum capacity of the memoryless (mu = 0) or full-memory (mu = 1) channel.

    Both endpoint channels are degradable with diagonal optimal inputs, so
    the single-letter diagonal maximization is their capacity.
    """
    if which not in ("memoryless", "full"):
        raise DomainError(f"unknown endpoint {which!r}")
    ChannelParams(eta, 0.0)
    return _q_endpoint_cached(float(eta), which, cfg or OptimizerConfig())


def q_upb(p: ChannelParams, cfg: OptimizerConfig | None = None) -> float:
    """(1 - mu) Q(E_0) + mu Q(E_1)."""
    q0 = q_endpoint(p.eta, "memoryless", cfg)
    q1 = q_endpoint(p.eta, "full", cfg)
    return (1.0 - p.mu) * q0 + p.mu * q1


def entanglement_assisted(p: ChannelParams, cfg: OptimizerConfig | None = None) -> CapacityPoint:
    """max of S(rho) + I_c over rho = diag(alpha, beta, beta, delta)."""
    res = maximize(K.mutual_info_sym, Domain.probability_simplex(3), cfg, args=_args(p))
    al, two_b, de = res.x
    pops = Populations(al, 0.5 * two_b, 0.5 * two_b, de)
    return _point("ce", p, max(res.value, 0.0), pops, res)


def _point(quantity, p, value, argmax, res) -> CapacityPoint:
    return CapacityPoint(
        quantity, p.eta, p.mu, float(value), argmax,
        res.evals, res.restarts_used, res.converged, float(res.value),
    )


def evaluate(quantity: str, p: ChannelParams, cfg: OptimizerConfig | None = None, **kw) -> CapacityPoint:
    """Dispatch one grid point by CLI quantity name."""
    if quantity == "chi-g1":
        return chi_lwb_g1(p, cfg, **kw)
    if quantity == "chi-g2":
        return chi_lwb_g2(p, cfg)
    if quantity == "q-lwb":
        return q_lwb(p, cfg)
    if quantity == "q-upb":
        return CapacityPoint("q-upb", p.eta, p.mu, q_upb(p, cfg))
    if quantity == "ce":
        return entanglement_assisted(p, cfg)
    raise DomainError(f"unknown quantity {quantity!r}; expected one of {QUANTITIES}")


def argmax_populations(point: CapacityPoint) -> Populations:
    a = point.argmax
    if a is None:
        raise DomainError(f"{point.quantity} has no optimizing input")
    return a if isinstance(a, Populations) else a.populations()


def argmax_entanglement(point: CapacityPoint) -> float:
    """Average entanglement of the optimal G1/G2 ensemble."""
    if isinstance(point.argmax, G1Params):
        return average_entanglement(build_g1(point.argmax))
    if isinstance(point.argmax, G2Params):
        return average_entanglement(build_g2(point.argmax))
    raise DomainError("average entanglement is defined for G1/G2 points only")


def _bisect(is_on, lo=0.0, hi=1.0, tol=1e-4) -> float:
    # invariant: is_on(lo) is False, is_on(hi) is True
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_on(mid):
            hi = mid
        else:
            lo = mid
    return lo


def find_q_threshold(eta: float, cfg: OptimizerConfig | None = None, tol: float = 1e-4) -> float | None:
    """Largest mu (to ``tol``) below which Q_lwb vanishes; None if positive at mu = 0."""

    def positive(mu):
        return q_lwb(ChannelParams(eta, mu), cfg).value > Q_POSITIVE

    if positive(0.0) or not positive(1.0):
        return None
    return _bisect(positive, tol=tol)


def find_g2_population_threshold(
    eta: float, cfg: OptimizerConfig | None = None, tol: float = 1e-4
) -> float | None:
    """Largest mu (to ``tol``) below which the optimal G2 ensemble leaves |11> empty."""

    def populated(mu):
        return chi_lwb_g2(ChannelParams(eta, mu), cfg).argmax.populations().delta > DELTA_POPULATED

    if populated(0.0) or not populated(1.0):
        return None
    return _bisect(populated, tol=tol)


def _single_qubit_output_entropy(eta, p_exc, coh):
    """Entropy of the damped qubit [[1 - eta p, sqrt(eta) c], [., eta p]]; vectorized."""
    a = 1.0 - eta * p_exc
    d = eta * p_exc
    m = 0.5 * (a + d)
    r = np.sqrt(0.25 * (a - d) ** 2 + eta * coh**2)
    lam = np.clip(np.stack([m + r, m - r]), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, -lam * np.log2(lam), 0.0)
    return terms.sum(axis=0)


def _single_qubit_chi(params, eta):
    w, t0, t1 = params
    c0, s0, c1, s1 = np.cos(t0), np.sin(t0), np.cos(t1), np.sin(t1)
    p_avg = w * s0**2 + (1 - w) * s1**2
    coh_avg = w * c0 * s0 + (1 - w) * c1 * s1
    return (
        _single_qubit_output_entropy(eta, p_avg, coh_avg)
        - w * _single_qubit_output_entropy(eta, s0**2, c0 * s0)
        - (1 - w) * _single_qubit_output_entropy(eta, s1**2, c1 * s1)
    )


def madc_single_qubit_holevo(eta: float, grid: int = 41) -> float:
    """Single-use Holevo capacity of the qubit amplitude-damping channel.

    Two-state ensembles {w, cos t0|0> + sin t0|1>; 1 - w, cos t1|0> + sin t1|1>}
    are scanned on a grid and the best cells refined with bounded L-BFGS-B.
    Independent of the Nelder-Mead machinery used for the two-qubit bounds.
    """
    single_qubit_kraus(eta)
    ws = np.linspace(0.0, 1.0, grid)
    ts = np.linspace(-np.pi / 2, np.pi / 2, 2 * grid)
    W, T0, T1 = np.meshgrid(ws, ts, ts, indexing="ij")
    vals = _single_qubit_chi((W, T0, T1), eta)
    flat = np.argsort(vals, axis=None)[::-1][:8]
    best = float(vals.flat[flat[0]])
    bounds = [(0.0, 1.0), (-np.pi / 2, np.pi / 2), (-np.pi / 2, np.pi / 2)]
    for idx in flat:
        i, j, k = np.unravel_index(idx, vals.shape)
        x0 = np.array([ws[i], ts[j], ts[k]])
        r = sopt.minimize(
            lambda x: -float(_single_qubit_chi(x, eta)), x0, method="L-BFGS-B",
            bounds=bounds, options={"ftol": 1e-15, "gtol": 1e-12},
        )
        best = max(best, -float(r.fun))
    return best


@dataclass(frozen=True)
class AdditivityReport:
    eta: float
    chi_g1: float
    chi_g2: float
    two_c1: float
    verdict: str


def c2_additivity_probe(eta: float, cfg: OptimizerConfig | None = None) -> AdditivityReport:
    """Compare both memoryless two-use bounds against twice the one-use capacity."""
    p = ChannelParams(eta, 0.0)
    g1 = chi_lwb_g1(p, cfg).value
    g2 = chi_lwb_g2(p, cfg).value
    two_c1 = 2.0 * madc_single_qubit_holevo(eta)
    ok = g1 <= two_c1 + 1e-6 and g2 <= two_c1 + 1e-6
    return AdditivityReport(eta, g1, g2, two_c1, "no violation found" if ok else "violation found")


def grid(step: float, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Inclusive grid lo, lo + step, ..., hi, rounded to 12 decimals."""
    if step <= 0:
        raise DomainError("grid step must be positive")
    n = int(math.floor((hi - lo) / step + 1e-9))
    pts = lo + step * np.arange(n + 1)
    if hi - pts[-1] > 1e-9:
        pts = np.append(pts, hi)
    return np.round(pts, 12)


def point_seed(base: int, i: int, j: int) -> int:
    return int(np.random.SeedSequence([base, i, j]).generate_state(1, np.uint64)[0])


def available_cpus() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not on every platform
        return os.cpu_count() or 1


def _sweep_task(task):
    quantity, eta, mu, cfg, kw = task
    return evaluate(quantity, ChannelParams(eta, mu), cfg, **kw)


def sweep(
    quantity: str, etas, mus, cfg: OptimizerConfig | None = None, jobs: int | None = None, **kw
) -> list[CapacityPoint]:
    """Evaluate ``quantity`` on etas x mus (eta-major), one derived seed per point."""
    cfg = cfg or OptimizerConfig()
    # q-upb only reuses the two endpoint optimizations, which must not vary per point
    tasks = [
        (quantity, float(eta), float(mu),
         cfg if quantity == "q-upb" else cfg.with_seed(point_seed(cfg.seed, i, j)), kw)
        for i, eta in enumerate(etas)
        for j, mu in enumerate(mus)
    ]
    jobs = jobs or available_cpus()
    if jobs == 1 or len(tasks) < 2:
        return [_sweep_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_sweep_task, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
