"""Deterministic multistart Nelder-Mead maximization on boxes and simplices.

A domain has ``k`` leading *simplex* coordinates followed by box coordinates.
The simplex block is searched over unconstrained reals ``r`` and mapped to
``r**2 / sum(r**2)``, so the objective always sees an exact probability
vector. Box coordinates are clipped to their bounds before every evaluation.

Objectives have the signature ``f(x, args) -> float`` where ``x`` is the
mapped domain point. When ``f`` is a numba-compiled function the whole local
search runs compiled; any other callable runs the same algorithm in Python.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from numba import njit
from numba.core.registry import CPUDispatcher
from scipy.stats import qmc

TIE_TOL = 1e-10


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_evals_per_restart: int = 2000
    f_tol: float = 1e-10
    x_tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_evals_per_restart < 1:
            raise ValueError("restarts and max_evals_per_restart must be positive")
        if not (0 < self.f_tol < 1 and 0 < self.x_tol < 1):
            raise ValueError("tolerances must lie in (0, 1)")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def with_seed(self, seed: int) -> OptimizerConfig:
        return replace(self, seed=int(seed))


@dataclass(frozen=True)
class Domain:
    simplex: int = 0
    lower: tuple[float, ...] = ()
    upper: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper bounds differ in length")
        if any(not lo < hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("each box interval must have lower < upper")
        if self.simplex == 1 or self.simplex < 0:
            raise ValueError("a simplex block needs at least two coordinates")
        if self.dim == 0 or self.dim > 12:
            raise ValueError("domain dimension must be between 1 and 12")

    @classmethod
    def box(cls, lower, upper) -> Domain:
        return cls(0, tuple(float(v) for v in lower), tuple(float(v) for v in upper))

    @classmethod
    def probability_simplex(cls, k: int) -> Domain:
        return cls(k)

    @property
    def dim(self) -> int:
        return self.simplex + len(self.lower)

    def to_domain(self, raw) -> np.ndarray:
        lo, hi = self._bounds()
        return _to_domain(np.asarray(raw, dtype=float), lo, hi, self.simplex)

    def _bounds(self):
        return np.array(self.lower, dtype=float), np.array(self.upper, dtype=float)


@dataclass
class MaximizeResult:
    x: np.ndarray
    value: float
    evals: int
    restarts_used: int
    converged: bool
    values: np.ndarray = field(repr=False)


@njit(cache=True)
def _to_domain(raw, lo, hi, k):
    x = np.empty(raw.size)
    s = 0.0
    for i in range(k):
        s += raw[i] * raw[i]
    for i in range(k):
        x[i] = raw[i] * raw[i] / s if s > 0.0 else 1.0 / k
    for i in range(k, raw.size):
        x[i] = min(max(raw[i], lo[i - k]), hi[i - k])
    return x


@njit(cache=True)
def _clip(raw, lo, hi, k):
    for i in range(k, raw.size):
        raw[i] = min(max(raw[i], lo[i - k]), hi[i - k])
    return raw


def _nelder_mead(f, args, x0, lo, hi, k, max_evals, f_tol, x_tol):
    """Minimize -f from x0; returns (raw argmax, max value, evals, converged).

    After each convergence the simplex is rebuilt around the incumbent and
    the search repeated until a rebuild yields no improvement above f_tol.
    """
    n = x0.size
    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    best = _clip(x0.copy(), lo, hi, k)
    fbest = -f(_to_domain(best, lo, hi, k), args)
    nev = 1
    converged = False
    while True:
        sim[0] = best
        fs[0] = fbest
        for i in range(n):
            y = best.copy()
            if i < k:
                y[i] += 0.1
            else:
                step = 0.1 * (hi[i - k] - lo[i - k])
                y[i] = y[i] + step if y[i] + step <= hi[i - k] else y[i] - step
            sim[i + 1] = _clip(y, lo, hi, k)
            fs[i + 1] = -f(_to_domain(sim[i + 1], lo, hi, k), args)
            nev += 1
        converged = False
        while nev < max_evals:
            order = np.argsort(fs, kind="mergesort")
            sim = sim[order]
            fs = fs[order]
            if np.max(np.abs(fs[1:] - fs[0])) <= f_tol and np.max(np.abs(sim[1:] - sim[0])) <= x_tol:
                converged = True
                break
            c = np.zeros(n)
            for j in range(n):
                c += sim[j]
            c /= n
            xr = _clip(2.0 * c - sim[n], lo, hi, k)
            fr = -f(_to_domain(xr, lo, hi, k), args)
            nev += 1
            if fr < fs[0]:
                xe = _clip(3.0 * c - 2.0 * sim[n], lo, hi, k)
                fe = -f(_to_domain(xe, lo, hi, k), args)
                nev += 1
                if fe < fr:
                    sim[n] = xe
                    fs[n] = fe
                else:
                    sim[n] = xr
                    fs[n] = fr
            elif fr < fs[n - 1]:
                sim[n] = xr
                fs[n] = fr
            else:
                shrink = False
                if fr < fs[n]:
                    xc = _clip(c + 0.5 * (xr - c), lo, hi, k)
                    fc = -f(_to_domain(xc, lo, hi, k), args)
                    nev += 1
                    if fc <= fr:
                        sim[n] = xc
                        fs[n] = fc
                    else:
                        shrink = True
                else:
                    xc = _clip(c + 0.5 * (sim[n] - c), lo, hi, k)
                    fc = -f(_to_domain(xc, lo, hi, k), args)
                    nev += 1
                    if fc < fs[n]:
                        sim[n] = xc
                        fs[n] = fc
                    else:
                        shrink = True
                if shrink:
                    for j in range(1, n + 1):
                        sim[j] = _clip(sim[0] + 0.5 * (sim[j] - sim[0]), lo, hi, k)
                        fs[j] = -f(_to_domain(sim[j], lo, hi, k), args)
                        nev += 1
        j0 = np.argmin(fs)
        improved = fs[j0] < fbest - f_tol
        if fs[j0] < fbest:
            best = sim[j0].copy()
            fbest = fs[j0]
        if not (converged and improved) or nev + n + 1 >= max_evals:
            break
    return best, -fbest, nev, converged


_nelder_mead_jit = njit(cache=True)(_nelder_mead)


def start_points(domain: Domain, count: int, seed: int) -> np.ndarray:
    """Raw starting points: structured points first, then a scrambled Halton stream.

    The first ``m`` points for a given seed do not depend on ``count``.
    """
    k = domain.simplex
    lo, hi = domain._bounds()
    center_box = 0.5 * (lo + hi)
    structured = []
    if k:
        structured.append(np.concatenate([np.full(k, 1.0 / np.sqrt(k)), center_box]))
        for i in range(k):
            v = np.zeros(k)
            v[i] = 1.0
            structured.append(np.concatenate([v, center_box]))
    else:
        structured.append(center_box)
        if lo.size <= 2:
            for corner in np.array(np.meshgrid(*zip(lo, hi), indexing="ij")).reshape(lo.size, -1).T:
                structured.append(corner)
    pts = np.array(structured[:count])
    extra = count - len(pts)
    if extra > 0:
        u = qmc.Halton(d=domain.dim, scramble=True, seed=np.random.default_rng(seed)).random(extra)
        u = np.clip(u, 1e-12, 1.0 - 1e-12)
        # -log(u) normalized is uniform on the simplex; raw = sqrt of that
        raw_s = np.sqrt(-np.log(u[:, :k]))
        raw_b = lo + u[:, k:] * (hi - lo)
        pts = np.vstack([pts, np.hstack([raw_s, raw_b])]) if len(pts) else np.hstack([raw_s, raw_b])
    return pts


def maximize(f, domain: Domain, cfg: OptimizerConfig | None = None, args=None) -> MaximizeResult:
    """Best local maximum of ``f`` over ``cfg.restarts`` Nelder-Mead searches.

    Among restarts whose value is within 1e-10 of the best, the one whose
    domain point has the smallest Euclidean norm is reported.
    """
    cfg = cfg or OptimizerConfig()
    lo, hi = domain._bounds()
    if isinstance(f, CPUDispatcher):
        search = _nelder_mead_jit
        fargs = np.asarray(args if args is not None else (), dtype=float)
    else:
        search = _nelder_mead
        fargs = args
        if args is None:
            user_f = f

            def f(x, _a):
                return float(user_f(x))

    starts = start_points(domain, cfg.restarts, cfg.seed)
    xs, vals, conv = [], [], []
    evals = 0
    for x0 in starts:
        raw, val, nev, ok = search(
            f, fargs, x0.astype(float), lo, hi, domain.simplex,
            cfg.max_evals_per_restart, cfg.f_tol, cfg.x_tol,
        )
        xs.append(_to_domain(raw, lo, hi, domain.simplex))
        vals.append(val)
        conv.append(ok)
        evals += nev
    vals = np.array(vals)
    best = vals.max()
    near = np.flatnonzero(vals >= best - TIE_TOL)
    pick = min(near, key=lambda i: (np.linalg.norm(xs[i]), i))
    return MaximizeResult(xs[pick], float(vals[pick]), evals, len(starts), bool(conv[pick]), vals)
