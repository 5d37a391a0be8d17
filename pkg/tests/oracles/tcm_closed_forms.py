"""Photon-sum closed forms for a two-atom run started in |ee> x field.

Written from the amplitude formulas only (no propagator), so they act as an
independent oracle for the numerical evolution. The two-atom matrix is in
the basis (ee, symmetric one-excitation, gg, singlet).
"""

import math

import numpy as np


def delta(m, t, g=1.0):
    return g * t * math.sqrt(2 * (2 * m + 3))


def p_amp(m, t, g=1.0):
    return ((m + 2) + (m + 1) * math.cos(delta(m, t, g))) / (2 * m + 3)


def q_amp(m, t, g=1.0):
    return -1j * math.sqrt((m + 1) / (2 * m + 3)) * math.sin(delta(m, t, g))


def r_amp(m, t, g=1.0):
    return -math.sqrt((m + 2) / (m + 1)) * (1 - p_amp(m, t, g))


def field_coefficients(kind, param, window):
    """Renormalized field amplitudes ``{n: c_n}`` on the photon window."""
    lo, hi = window
    if kind == "fock":
        return {int(param): 1.0}
    alpha = float(param)
    c = {n: math.exp(-alpha**2 / 2 + n * math.log(alpha) - 0.5 * math.lgamma(n + 1)) for n in range(lo, hi + 1)}
    norm = math.sqrt(sum(v * v for v in c.values()))
    return {n: v / norm for n, v in c.items()}


def _cc(c, n, x):
    return c.get(n, 0.0) * c.get(n + x, 0.0)


def inversion(c, t, g=1.0):
    return sum(_cc(c, n, 0) * (p_amp(n, t, g) ** 2 - abs(r_amp(n, t, g)) ** 2) for n in c)


def two_atom_marginal(c, t, g=1.0):
    p = lambda n, x: p_amp(n + x, t, g)
    q = lambda n, x: q_amp(n + x, t, g)
    r = lambda n, x: r_amp(n + x, t, g)
    rho = np.zeros((4, 4), dtype=complex)
    ns = range(max(0, min(c) - 2), max(c) + 1)
    for n in ns:
        rho[0, 0] += _cc(c, n, 0) * p(n, 0) ** 2
        rho[0, 1] += _cc(c, n, 1) * p(n, 1) * np.conj(q(n, 0))
        rho[0, 2] += _cc(c, n, 2) * p(n, 2) * r(n, 0)
        rho[1, 0] += _cc(c, n, 1) * q(n, 0) * p(n, 1)
        rho[1, 1] += _cc(c, n, 0) * abs(q(n, 0)) ** 2
        rho[1, 2] += _cc(c, n, 1) * q(n, 1) * r(n, 0)
        rho[2, 0] += _cc(c, n, 2) * r(n, 0) * p(n, 2)
        rho[2, 1] += _cc(c, n, 1) * r(n, 0) * np.conj(q(n, 1))
        rho[2, 2] += _cc(c, n, 0) * r(n, 0) ** 2
    return rho


def one_atom_marginal(c, t, g=1.0):
    p = lambda n, x: p_amp(n + x, t, g)
    q = lambda n, x: q_amp(n + x, t, g)
    r = lambda n, x: r_amp(n + x, t, g)
    rho = np.zeros((2, 2), dtype=complex)
    for n in range(max(0, min(c) - 2), max(c) + 1):
        rho[0, 0] += _cc(c, n, 0) * (p(n, 0) ** 2 + 0.5 * abs(q(n, 0)) ** 2)
        rho[0, 1] += _cc(c, n, 1) / math.sqrt(2) * (p(n, 1) * np.conj(q(n, 0)) + q(n, 1) * r(n, 0))
        rho[1, 0] += _cc(c, n, 1) / math.sqrt(2) * (q(n, 0) * p(n, 1) + np.conj(q(n, 1)) * r(n, 0))
        rho[1, 1] += _cc(c, n, 0) * (0.5 * abs(q(n, 0)) ** 2 + r(n, 0) ** 2)
    return rho


# computational (ee, eg, ge, gg) -> (ee, sym, gg, singlet)
SYMMETRIC_BASIS = np.array([
    [1, 0, 0, 0],
    [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0],
    [0, 0, 0, 1],
    [0, 1 / math.sqrt(2), -1 / math.sqrt(2), 0],
])


def to_symmetric_basis(rho):
    b = SYMMETRIC_BASIS
    return b @ rho @ b.conj().T
