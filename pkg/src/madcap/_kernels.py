"""Compiled objectives for the capacity maximizations.

These re-derive the closed-form channel outputs in scalar form so a full
(eta, mu) grid can be optimized in minutes. ``capacity`` exposes the same
quantities through the matrix-level ``channel`` functions, and the tests pin
the two against each other.

All objectives take ``(x, args)`` with ``args = (eta, mu)``.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from .qmat import NEG_EIG_TOL, ZERO_EIG


@njit(cache=True)
def xlog(w):
    """-w log2 w with the zero clamp of ``qmat``."""
    if w < ZERO_EIG:
        if w < NEG_EIG_TOL:
            raise ValueError("negative eigenvalue in entropy")
        return 0.0
    return -w * math.log2(w)


@njit(cache=True)
def block_entropy(p, q, c2):
    """Entropy contribution of the 2x2 Hermitian block [[p, c], [c*, q]], c2 = |c|^2."""
    m = 0.5 * (p + q)
    r = math.sqrt(0.25 * (p - q) ** 2 + c2)
    return xlog(m + r) + xlog(m - r)


@njit(cache=True)
def diag_output(al, be, ga, de, eta, mu):
    """Diagonal of E_mu(rho) for any input with populations (al, be, ga, de)."""
    d00 = (1 - mu) * (al + (1 - eta) * (be + ga) + (1 - eta) ** 2 * de) + mu * (al + (1 - eta) * de)
    d01 = (1 - mu) * (eta * be + eta * (1 - eta) * de) + mu * be
    d10 = (1 - mu) * (eta * ga + eta * (1 - eta) * de) + mu * ga
    d11 = (1 - mu) * eta**2 * de + mu * eta * de
    return d00, d01, d10, d11


@njit(cache=True)
def output_entropy_diag(al, be, ga, de, eta, mu):
    d00, d01, d10, d11 = diag_output(al, be, ga, de, eta, mu)
    return xlog(d00) + xlog(d01) + xlog(d10) + xlog(d11)


@njit(cache=True)
def exchange_entropy_diag(al, be, ga, de, eta, mu):
    """Entropy of the environment+memory register for a diagonal input."""
    smm = math.sqrt(mu * (1 - mu))
    s = block_entropy(
        (1 - mu) * (al + eta * (be + ga) + eta**2 * de),
        mu * (1 - (1 - eta) * de),
        (smm * (al + math.sqrt(eta) * (be + ga) + eta**1.5 * de)) ** 2,
    )
    s += xlog((1 - mu) * (1 - eta) * (be + eta * de))
    s += xlog((1 - mu) * (1 - eta) * (ga + eta * de))
    s += block_entropy(
        (1 - mu) * (1 - eta) ** 2 * de,
        mu * (1 - eta) * de,
        (smm * (1 - eta) ** 1.5 * de) ** 2,
    )
    return s


@njit(cache=True)
def coherent_info(x, args):
    """I_c for rho = diag(x)."""
    eta, mu = args[0], args[1]
    return output_entropy_diag(x[0], x[1], x[2], x[3], eta, mu) - exchange_entropy_diag(
        x[0], x[1], x[2], x[3], eta, mu
    )


@njit(cache=True)
def mutual_info_sym(x, args):
    """S(rho) + I_c for rho = diag(x0, x1/2, x1/2, x2)."""
    al, be, de = x[0], 0.5 * x[1], x[2]
    eta, mu = args[0], args[1]
    s_in = xlog(al) + 2.0 * xlog(be) + xlog(de)
    return (
        s_in
        + output_entropy_diag(al, be, be, de, eta, mu)
        - exchange_entropy_diag(al, be, be, de, eta, mu)
    )


@njit(cache=True)
def g2_holevo(x, args):
    """Holevo quantity of G2 at (beta, theta2) = x."""
    beta, th = x[0], x[1]
    eta, mu = args[0], args[1]
    w = 1.0 - 2.0 * beta
    c2, s2 = math.cos(th) ** 2, math.sin(th) ** 2
    s_avg = output_entropy_diag(w * c2, beta, beta, w * s2, eta, mu)
    # any state in span{|01>, |10>}: one decay channel with probability (1-mu)(1-eta)
    q = (1 - mu) * (1 - eta)
    s_v = xlog(q) + xlog(1 - q)
    # cos|00> +- e^{i phi} sin|11>: coherence only between |00> and |11>
    d00, d01, d10, d11 = diag_output(c2, 0.0, 0.0, s2, eta, mu)
    coh = ((1 - mu) * eta + mu * math.sqrt(eta)) ** 2 * c2 * s2
    s_f = block_entropy(d00, d11, coh) + xlog(d01) + xlog(d10)
    return s_avg - 2.0 * beta * s_v - w * s_f


@njit(cache=True)
def pure_output_entropy(a, b, c, d, eta, mu):
    """S(E_mu(|psi><psi|)) for |psi> = (a, b, c, d)."""
    al, be, ga, de = abs(a) ** 2, abs(b) ** 2, abs(c) ** 2, abs(d) ** 2
    ka, la, xi = a * np.conj(b), a * np.conj(c), a * np.conj(d)
    nu, o, pi = b * np.conj(c), b * np.conj(d), c * np.conj(d)
    se = math.sqrt(eta)
    m = np.zeros((4, 4), dtype=np.complex128)
    d00, d01, d10, d11 = diag_output(al, be, ga, de, eta, mu)
    m[0, 0] = d00
    m[1, 1] = d01
    m[2, 2] = d10
    m[3, 3] = d11
    m[0, 1] = (1 - mu) * (se * ka + se * (1 - eta) * pi) + mu * ka
    m[0, 2] = (1 - mu) * (se * la + se * (1 - eta) * o) + mu * la
    m[0, 3] = ((1 - mu) * eta + mu * se) * xi
    m[1, 2] = ((1 - mu) * eta + mu) * nu
    m[1, 3] = ((1 - mu) * eta**1.5 + mu * se) * o
    m[2, 3] = ((1 - mu) * eta**1.5 + mu * se) * pi
    for i in range(4):
        for j in range(i + 1, 4):
            m[j, i] = np.conj(m[i, j])
    w = np.linalg.eigvalsh(m)
    s = 0.0
    for v in w:
        s += xlog(v)
    return s


@njit(cache=True)
def g1_holevo(x, args):
    """Holevo quantity of G1; x = squared amplitudes (4) [+ phases (3)]."""
    eta, mu = args[0], args[1]
    a = math.sqrt(x[0])
    b = math.sqrt(x[1]) + 0j
    c = math.sqrt(x[2]) + 0j
    d = math.sqrt(x[3]) + 0j
    if x.size == 7:
        b *= np.exp(1j * x[4])
        c *= np.exp(1j * x[5])
        d *= np.exp(1j * x[6])
    bc = 0.5 * (x[1] + x[2])
    s_avg = output_entropy_diag(x[0], bc, bc, x[3], eta, mu)
    return s_avg - pure_output_entropy(a + 0j, b, c, d, eta, mu)
