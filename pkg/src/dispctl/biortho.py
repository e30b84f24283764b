"""Dual family to a finite set of oscillating exponentials on [0, T].

For distinct frequencies lambda_p the functions e^{-i lambda_p t} span a
finite-dimensional subspace of L^2(0, T); inverting their Gram matrix yields
the unique family {q_j} in that span with int_0^T e^{-i lambda_k t}
conj(q_j(t)) dt = delta_{kj}.  The extreme Gram eigenvalues are the sharp
frame constants of the truncated family.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedGramError
from .quadrature import bilinear_phase_integrals, oscillation_nodes


@dataclass
class BiorthogonalFamily:
    """Coefficients of the dual family over the same exponentials.

    coeffs[n, j] is the weight of e^{-i lambda_n t} in q_j, so biorthogonality
    reads gram @ conj(coeffs) = identity.
    """

    horizon: float
    rep_lambdas: np.ndarray
    gram: np.ndarray
    coeffs: np.ndarray
    frame_lower: float
    frame_upper: float
    condition: float
    solve_residual: float

    @property
    def size(self):
        return self.rep_lambdas.size

    def q_norms_sq(self):
        """int_0^T |q_j|^2 dt, which equals the diagonal of the Gram inverse."""
        return np.real(np.diag(self.coeffs))

    def q_values(self, t):
        """Sample every q_j on a time grid; returns (len(t), size)."""
        phases = np.exp(-1j * np.outer(np.asarray(t, dtype=float), self.rep_lambdas))
        return phases @ self.coeffs


def gram_matrix(rep_lambdas, horizon):
    """G[k, n] = int_0^T e^{i (lambda_n - lambda_k) t} dt in closed form."""
    lam = np.asarray(rep_lambdas, dtype=float)
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if lam.size != np.unique(lam).size:
        raise ValueError(
            "duplicate frequencies; cluster repeated eigenvalues upstream")
    diff = lam[None, :] - lam[:, None]
    half = 0.5 * diff * horizon
    gram = horizon * np.exp(1j * half) * np.sinc(half / np.pi)
    return gram


def frame_bounds(gram):
    """(A, B): smallest and largest Gram eigenvalue."""
    eigs = np.linalg.eigvalsh(gram)
    return float(eigs[0]), float(eigs[-1])


def biorthogonalize(rep_lambdas, horizon, gram=None, condition_limit=1e12,
                    min_lower_factor=1e-10):
    """Invert the Gram matrix through its eigendecomposition.

    The decomposition provides the frame bounds for free and exposes
    near-singularity spectrally; refuses (suggesting a larger horizon) when
    the lower frame bound drops under min_lower_factor * T or the condition
    number exceeds condition_limit.
    """
    lam = np.asarray(rep_lambdas, dtype=float)
    if gram is None:
        gram = gram_matrix(lam, horizon)
    eigs, vecs = np.linalg.eigh(gram)
    lower, upper = float(eigs[0]), float(eigs[-1])
    condition = np.inf if lower <= 0 else upper / lower
    if lower <= min_lower_factor * horizon or condition > condition_limit:
        raise IllConditionedGramError(condition, lower, horizon)
    inverse = (vecs / eigs) @ vecs.conj().T
    coeffs = np.conj(inverse)
    residual = float(np.max(np.abs(gram @ np.conj(coeffs) - np.eye(lam.size))))
    return BiorthogonalFamily(
        horizon=float(horizon), rep_lambdas=lam, gram=gram, coeffs=coeffs,
        frame_lower=lower, frame_upper=upper, condition=float(condition),
        solve_residual=residual)


def biorthogonality_residual(family):
    """max |int_0^T e^{-i lambda_k t} conj(q_j) dt - delta_{kj}| by quadrature.

    Uses composite Gauss-Legendre with the oscillation-resolving node budget,
    independently of the closed-form Gram identities.
    """
    lam = family.rep_lambdas
    freq_max = float(np.max(np.abs(lam))) if lam.size else 0.0
    t, w = oscillation_nodes(freq_max, family.horizon)
    inner = bilinear_phase_integrals(np.conj(family.coeffs), lam, lam, t, w)
    # inner[j, k] = int conj(q_j) e^{-i lambda_k t} dt
    return float(np.max(np.abs(inner.T - np.eye(lam.size))))
