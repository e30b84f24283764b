"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the package's fast paths:
clustering by all-pairs closure, trajectories by RK4 time stepping, and
integrals by dense trapezoid sums, so agreement is a two-route check.
"""

import numpy as np

from dispctl import FourierField, eigenvalues
from dispctl.spectral import TWO_PI


def random_field(n_modes, seed, s=0.0, decay=0.0, zero_mean=False):
    rng = np.random.default_rng(seed)
    k = np.arange(-n_modes, n_modes + 1)
    raw = rng.standard_normal(2 * n_modes + 1) + 1j * rng.standard_normal(
        2 * n_modes + 1)
    raw *= (1.0 + np.abs(k)) ** (-decay)
    if zero_mean:
        raw[n_modes] = 0.0
    return FourierField(raw, n_modes, s)


def steering_target(n_modes, s, seed, sigma=0.35):
    """Unit-norm mean-free target with random phases and moderate magnitude
    spread, energy equidistributed across modes in H^s."""
    rng = np.random.default_rng(seed)
    size = 2 * n_modes + 1
    k = np.arange(-n_modes, n_modes + 1)
    raw = np.exp(sigma * rng.standard_normal(size)) * np.exp(
        2j * np.pi * rng.random(size))
    raw *= (1.0 + np.abs(k)) ** (-s)
    raw[n_modes] = 0.0
    norm = np.sqrt(TWO_PI * np.sum((1.0 + np.abs(k)) ** (2.0 * s) * np.abs(raw) ** 2))
    return FourierField(raw / norm, n_modes, s)


def hs_norm_of(coeffs, s):
    n = (len(coeffs) - 1) // 2
    k = np.arange(-n, n + 1)
    return float(np.sqrt(TWO_PI * np.sum(
        (1.0 + np.abs(k)) ** (2.0 * s) * np.abs(coeffs) ** 2)))


def relative_hs_error(a, b, s):
    return hs_norm_of(a.coeffs - b.coeffs, s) / hs_norm_of(b.coeffs, s)


def brute_force_clusters(lams, modes, tol, exact=False):
    """All-pairs transitive-closure grouping, O(N^2), for oracle comparison."""
    n = len(modes)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if exact:
                together = lams[i] == lams[j]
            else:
                scale = 1.0 + max(abs(lams[i]), abs(lams[j]))
                together = abs(lams[i] - lams[j]) <= tol * scale
            if together:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(int(modes[i]))
    return sorted(sorted(g) for g in groups.values())


def control_forcing(signal, shape, t):
    """Fourier coefficients of G h(., t) evaluated directly from the ansatz."""
    n = signal.n_modes
    off = shape.n_modes - n
    sub = shape.moment[off:off + 2 * n + 1, off:off + 2 * n + 1]
    q_bar = np.conj(signal.family.q_values([t])[0])   # conj(q_p(t)) per rep
    hq = signal.h_coeffs * q_bar[signal.rep_of_mode]
    return (sub.T @ hq) / np.sqrt(TWO_PI)


def rk4_controlled(u0, sym, shape, signal, t_end, dt):
    """Dense RK4 integration of the forced coefficient ODE (oracle)."""
    lam = eigenvalues(sym, u0.n_modes)
    y = u0.coeffs.astype(complex).copy()

    def rhs(t, y):
        return 1j * lam * y + control_forcing(signal, shape, t)

    steps = int(round(t_end / dt))
    h = t_end / steps
    t = 0.0
    for _ in range(steps):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return FourierField(y, u0.n_modes, u0.sobolev_index)


def trapezoid_grid(resolution, offset=0.0):
    x = TWO_PI * (np.arange(resolution) + offset) / resolution
    return x, TWO_PI / resolution
