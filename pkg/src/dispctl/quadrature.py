"""Composite Gauss-Legendre quadrature sized for oscillatory exponential sums.

All time integrals in this package involve finite sums of e^{i mu t} with
|mu| bounded by twice the largest eigenvalue magnitude.  The node budget is
max(64, 8 * freq_max * span / pi), which places eight nodes per period of the
fastest difference frequency; the budget is met with 32-point panels so that
node generation stays O(total) for the multi-million node counts that
high-order symbols require.
"""

import numpy as np

_PANEL_ORDER = 32
_PANEL_X, _PANEL_W = np.polynomial.legendre.leggauss(_PANEL_ORDER)

# Chunk cap for streamed phase-matrix products (entries per temporary).
_CHUNK_ENTRIES = 4_000_000


def node_budget(freq_max, span, minimum=64):
    """Node count resolving oscillations up to |freq_max| over [0, span]."""
    return max(int(minimum), int(np.ceil(8.0 * abs(freq_max) * span / np.pi)))


def oscillation_nodes(freq_max, span, minimum=64):
    """Composite Gauss-Legendre nodes and weights on [0, span].

    Returns (t, w) with len(t) >= node_budget(freq_max, span, minimum).
    """
    if span <= 0:
        raise ValueError(f"span must be positive, got {span}")
    total = node_budget(freq_max, span, minimum)
    panels = int(np.ceil(total / _PANEL_ORDER))
    h = span / panels
    starts = h * np.arange(panels)
    t = (starts[:, None] + 0.5 * h * (_PANEL_X[None, :] + 1.0)).ravel()
    w = np.broadcast_to(0.5 * h * _PANEL_W, (panels, _PANEL_ORDER)).ravel().copy()
    return t, w


def _chunks(n, width):
    step = max(1, _CHUNK_ENTRIES // max(1, width))
    for lo in range(0, n, step):
        yield lo, min(n, lo + step)


def bilinear_phase_integrals(coeffs, row_freqs, col_freqs, t, w):
    """Integrals R[p, m] = sum_i w_i f_p(t_i) e^{-i col_freqs[m] t_i}.

    Here f_p(t) = sum_n coeffs[n, p] e^{+i row_freqs[n] t}.  Streams over the
    node axis so arbitrarily large node counts stay within memory; repeated
    column frequencies (paired eigenvalues) are computed once.
    """
    row_freqs = np.asarray(row_freqs, dtype=float)
    col_freqs = np.asarray(col_freqs, dtype=float)
    coeffs = np.asarray(coeffs)
    uniq, inverse = np.unique(col_freqs, return_inverse=True)
    n_p = coeffs.shape[1]
    out = np.zeros((n_p, uniq.size), dtype=complex)
    width = max(row_freqs.size, uniq.size)
    for lo, hi in _chunks(t.size, width):
        tc = t[lo:hi]
        left = np.exp(1j * np.outer(tc, row_freqs)) @ coeffs      # (c, P)
        right = np.exp(-1j * np.outer(tc, uniq))                  # (c, U)
        out += left.T @ (right * w[lo:hi, None])
    return out[:, inverse]


def weighted_phase_gram(freqs, t, w, envelope=None):
    """Hermitian matrix Phi[k, n] = sum_i w~_i e^{i (freqs[n] - freqs[k]) t_i}.

    w~ = w * envelope(t) for a positive scalar envelope (default 1).
    """
    freqs = np.asarray(freqs, dtype=float)
    uniq, inverse = np.unique(freqs, return_inverse=True)
    n = uniq.size
    out = np.zeros((n, n), dtype=complex)
    for lo, hi in _chunks(t.size, n):
        tc = t[lo:hi]
        wc = w[lo:hi]
        if envelope is not None:
            wc = wc * envelope(tc)
        phase = np.exp(-1j * np.outer(tc, uniq))                  # (c, n)
        out += (phase * wc[:, None]).T @ np.conj(phase)
    out = out[np.ix_(inverse, inverse)]
    return 0.5 * (out + out.conj().T)
