"""Symmetrized pure-state input ensembles G1 and G2.

G1 is the orbit of one seed state |psi> = a|00> + b|01> + c|10> + d|11> under
the phase flips R_i and the swap gate, eight states with weight 1/8. G2 is a
pair of states in span{|01>, |10>} (weight beta each) together with a pair of
Bell-like states cos t|00> +- e^{i phi} sin t|11> (weight (1 - 2 beta)/2 each).
Both ensembles have diagonal density operators with equal |01>, |10>
populations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import covariance_ops
from .qmat import DomainError, as_pure_state, entanglement_entropy, projector

PROB_TOL = 1e-12


@dataclass(frozen=True)
class Ensemble:
    """Weighted pure states ``((p_k, psi_k), ...)``."""

    items: tuple[tuple[float, np.ndarray], ...]

    def __post_init__(self):
        items = tuple((float(p), as_pure_state(s)) for p, s in self.items)
        if not items:
            raise DomainError("empty ensemble")
        probs = np.array([p for p, _ in items])
        if probs.min() < 0 or abs(probs.sum() - 1.0) > PROB_TOL:
            raise DomainError("ensemble probabilities must be nonnegative and sum to 1")
        object.__setattr__(self, "items", items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for p, _ in self.items])

    @property
    def states(self) -> list[np.ndarray]:
        return [s for _, s in self.items]


@dataclass(frozen=True)
class Populations:
    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        v = self.as_array()
        if v.min() < 0 or abs(v.sum() - 1.0) > PROB_TOL:
            raise DomainError(f"populations must be a probability vector, got {tuple(v)}")

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, self.delta], dtype=float)

    def density(self) -> np.ndarray:
        return np.diag(self.as_array()).astype(np.complex128)


@dataclass(frozen=True)
class G1Params:
    abar: float
    bbar: float
    cbar: float
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0

    def __post_init__(self):
        for name in ("abar", "bbar", "cbar", "phi1", "phi2", "phi3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        amps = (self.abar, self.bbar, self.cbar)
        if min(amps) < 0 or max(amps) > 1:
            raise DomainError("G1 amplitudes must lie in [0, 1]")
        if sum(x * x for x in amps) > 1 + PROB_TOL:
            raise DomainError("G1 amplitudes violate abar^2 + bbar^2 + cbar^2 <= 1")

    @property
    def dbar(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.abar**2 - self.bbar**2 - self.cbar**2))

    def seed_state(self) -> np.ndarray:
        return np.array(
            [
                self.abar,
                self.bbar * np.exp(1j * self.phi1),
                self.cbar * np.exp(1j * self.phi2),
                self.dbar * np.exp(1j * self.phi3),
            ]
        )

    def populations(self) -> Populations:
        bc = 0.5 * (self.bbar**2 + self.cbar**2)
        delta = 1.0 - self.abar**2 - 2 * bc
        return Populations(self.abar**2, bc, bc, max(delta, 0.0))


@dataclass(frozen=True)
class G2Params:
    beta: float
    theta1: float = 0.0
    theta2: float = 0.0
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        for name in ("beta", "theta1", "theta2", "phi1", "phi2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not 0.0 <= self.beta <= 0.5:
            raise DomainError(f"G2 beta must lie in [0, 1/2], got {self.beta!r}")

    def populations(self) -> Populations:
        w = 1.0 - 2.0 * self.beta
        return Populations(
            w * math.cos(self.theta2) ** 2, self.beta, self.beta, w * math.sin(self.theta2) ** 2
        )


def build_g1(g: G1Params) -> Ensemble:
    r1, r2, r3, sw = covariance_ops()
    psi = g.seed_state()
    orbit = [psi, r1 @ psi, r2 @ psi, r3 @ psi]
    spsi = sw @ psi
    orbit += [spsi, r1 @ spsi, r2 @ spsi, r3 @ spsi]
    return Ensemble(tuple((1 / 8, s) for s in orbit))


def g2_states(g: G2Params) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(varphi_+, varphi_-, phi_+, phi_-)."""
    c1, s1 = math.cos(g.theta1), math.sin(g.theta1)
    c2, s2 = math.cos(g.theta2), math.sin(g.theta2)
    e1, e2 = np.exp(1j * g.phi1), np.exp(1j * g.phi2)
    vp = np.array([0, c1, e1 * s1, 0])
    vm = np.array([0, -s1, e1 * c1, 0])
    fp = np.array([c2, 0, 0, e2 * s2])
    fm = np.array([c2, 0, 0, -e2 * s2])
    return vp, vm, fp, fm


def build_g2(g: G2Params) -> Ensemble:
    vp, vm, fp, fm = g2_states(g)
    w = (1.0 - 2.0 * g.beta) / 2.0
    return Ensemble(((g.beta, vp), (g.beta, vm), (w, fp), (w, fm)))


def ensemble_density(e: Ensemble) -> np.ndarray:
    return sum(p * projector(s) for p, s in e)


def average_entanglement(e: Ensemble) -> float:
    """Probability-weighted entropy of entanglement of the ensemble members."""
    return float(sum(p * entanglement_entropy(s) for p, s in e))
