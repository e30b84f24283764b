"""Control synthesis by the moment method.

Steering the truncated system from u0 to u1 over [0, T] is equivalent to the
finite system of moment equations

    int_0^T (G h(., t), e^{-i lambda_k (T - t)} psi_k)_{L2} dt = c_k,

where c_k are the coefficients of the (shifted) target in the psi basis.  The
ansatz h(x, t) = sum_j h_j conj(q_j(t)) psi_j(x) over the dual exponential
family decouples the system cluster by cluster: simple eigenvalues divide by
the moment diagonal, symmetric tail pairs invert a 2x2 block through the pair
determinant, and finite interior clusters solve a dense block with the zero
mode dropped (its moment column vanishes identically, so h_0 = 0).
"""

from dataclasses import dataclass, field

import numpy as np

from .biortho import biorthogonalize
from .errors import CriterionInapplicableError, SingularClusterError
from .quadrature import bilinear_phase_integrals, oscillation_nodes
from .spectral import TWO_PI, sobolev_norm
from .spectrum import CRITERION_I, CRITERION_II, controllability_time

# Tail pair determinants approach 1/(4 pi^2) as |k| grows; values under half
# of that limit mark mode pairs the actuator barely separates.
PAIR_DET_FLOOR = 1.0 / (8.0 * np.pi ** 2)

PATH_SIMPLE = "simple"
PATH_PAIR = "pair"
PATH_BLOCK = "block"


@dataclass
class ControlSignal:
    """Synthesized control h(x, t) = sum_j h_j conj(q_j(t)) psi_j(x)."""

    family: object
    h_coeffs: np.ndarray
    n_modes: int
    sobolev_index: float
    horizon: float
    rep_of_mode: np.ndarray
    target_coeffs: np.ndarray
    input_norm_sum: float
    control_norm: float
    nu_empirical: float
    solve_paths: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def h(self, k):
        return self.h_coeffs[k + self.n_modes]


def synthesize(u0, u1, analysis, shape, horizon, s=0.0, family=None,
               divergence_threshold=1e3):
    """Build the control steering u0 to u1 over [0, horizon] in H^s.

    The problem is first reduced to a zero initial state by propagating u0 to
    time T exactly (diagonal phases, no integration error) and subtracting it
    from the target; the coefficient system is then solved cluster by
    cluster.  Raises SingularClusterError when a cluster block degenerates
    and ValueError on mismatched means or an insufficient horizon.
    """
    n = analysis.n_modes
    if u0.n_modes != n or u1.n_modes != n:
        raise ValueError("fields and spectrum analysis use different truncations")
    if shape.n_modes < n:
        raise ValueError("actuator shape truncation does not cover the fields")
    if analysis.criterion not in (CRITERION_I, CRITERION_II):
        raise CriterionInapplicableError(
            f"eigenvalue pattern {analysis.criterion!r} supports no moment solve")
    t_min = controllability_time(analysis, divergence_threshold)
    if horizon <= t_min:
        raise ValueError(
            f"horizon {horizon:g} is not above the required minimum {t_min:g}")

    scale = 1.0 + max(np.max(np.abs(u0.coeffs)), np.max(np.abs(u1.coeffs)))
    if abs(u0.coefficient(0) - u1.coefficient(0)) > 1e-12 * scale:
        raise ValueError(
            "initial and target fields must share the same mean coefficient "
            f"(got {u0.coefficient(0):.6g} vs {u1.coefficient(0):.6g})")

    shifted = u1.coeffs - np.exp(1j * analysis.lambdas * horizon) * u0.coeffs
    c = np.sqrt(TWO_PI) * shifted

    if family is None:
        family = biorthogonalize(analysis.rep_lambdas, horizon)

    h = np.zeros(2 * n + 1, dtype=complex)
    paths = {}
    warnings = []
    low_pairs = []
    for cid, cluster in enumerate(analysis.clusters):
        members = [k for k in cluster if k != 0]
        if not members:
            continue
        rhs = np.array([c[k + n] * np.exp(-1j * analysis.lam(k) * horizon)
                        for k in members])
        is_tail_pair = (
            analysis.criterion == CRITERION_II
            and len(members) == 2
            and members[0] == -members[1]
            and max(abs(m) for m in members) >= analysis.k1_star)
        if len(members) == 1:
            k = members[0]
            mkk = shape.moment_entry(k, k)
            _check_regular([k], abs(mkk), 1.0 / TWO_PI)
            h[k + n] = rhs[0] / mkk
            paths[analysis.representatives[cid]] = PATH_SIMPLE
        elif is_tail_pair:
            k = max(members)
            d_k = float(shape.pair_det[k - 1])
            m_kk = shape.moment_entry(k, k)
            m_mm = shape.moment_entry(-k, -k)
            m_km = shape.moment_entry(k, -k)
            m_mk = shape.moment_entry(-k, k)
            row_scale = max(abs(m_kk), abs(m_km)) * max(abs(m_mm), abs(m_mk))
            _check_regular(members, abs(d_k), row_scale)
            if d_k < PAIR_DET_FLOOR:
                low_pairs.append(k)
            c_plus = c[k + n] * np.exp(-1j * analysis.lam(k) * horizon)
            c_minus = c[-k + n] * np.exp(-1j * analysis.lam(-k) * horizon)
            h[k + n] = (c_plus * m_mm - c_minus * m_mk) / d_k
            h[-k + n] = (c_minus * m_kk - c_plus * m_km) / d_k
            paths[analysis.representatives[cid]] = PATH_PAIR
        else:
            pos = [m + shape.n_modes for m in members]
            block = shape.moment[np.ix_(pos, pos)]
            det = np.linalg.det(block)
            row_scale = float(np.prod(np.max(np.abs(block), axis=1)))
            _check_regular(members, abs(det), row_scale)
            solved = np.linalg.solve(block.T, rhs)
            for m, value in zip(members, solved):
                h[m + n] = value
            paths[analysis.representatives[cid]] = PATH_BLOCK
    if low_pairs:
        warnings.append(
            f"pair determinant below {PAIR_DET_FLOOR:.4e} for k in "
            f"{low_pairs}; the actuator barely separates these mode pairs")

    rep_of_mode = np.array(
        [analysis.cluster_of[int(k)] for k in range(-n, n + 1)], dtype=int)
    input_norm_sum = sobolev_norm(u0, s) + sobolev_norm(u1, s)
    signal = ControlSignal(
        family=family, h_coeffs=h, n_modes=n, sobolev_index=s,
        horizon=float(horizon), rep_of_mode=rep_of_mode, target_coeffs=c,
        input_norm_sum=input_norm_sum, control_norm=0.0, nu_empirical=0.0,
        solve_paths=paths, warnings=warnings)
    signal.control_norm, signal.nu_empirical = control_norm(signal)
    return signal


def _check_regular(members, magnitude, scale):
    if magnitude < 1e-12 * max(scale, 1e-300):
        raise SingularClusterError(
            members, f"determinant magnitude {magnitude:.3e} against scale "
                     f"{scale:.3e}")


def control_norm(signal):
    """(norm, nu): ||h|| in L^2([0,T]; H^s) and the achieved ratio.

    The squared norm is (1/2pi) sum_k (1+|k|)^{2s} |h_k|^2 int_0^T |q_k|^2 dt
    with the q integrals taken from the Gram inverse diagonal; nu divides by
    ||u0||_{H^s} + ||u1||_{H^s} recorded at synthesis (zero inputs give 0).
    """
    n = signal.n_modes
    k = np.arange(-n, n + 1)
    weights = (1.0 + np.abs(k)) ** (2.0 * signal.sobolev_index)
    q_sq = signal.family.q_norms_sq()[signal.rep_of_mode]
    norm = float(np.sqrt(
        np.sum(weights * np.abs(signal.h_coeffs) ** 2 * q_sq) / TWO_PI))
    nu = norm / signal.input_norm_sum if signal.input_norm_sum > 0 else 0.0
    return norm, nu


def moment_residuals(signal, shape, analysis, u1, u0=None):
    """Residuals r_k of the moment equations, checked by quadrature.

    Evaluates r_k = sum_j h_j e^{i lambda_k T} m_{j,k} int_0^T conj(q_j)
    e^{-i lambda_k t} dt - c_k with the time integrals done by composite
    Gauss-Legendre at the oscillation-resolving budget rather than through
    the Gram identities, making this an independent check of the synthesized
    coefficients.  The k = 0 row is inert: its moment column and c_0 vanish.
    """
    n = analysis.n_modes
    if u1.n_modes != n:
        raise ValueError("target truncation differs from the analysis")
    lam_modes = analysis.lambdas
    horizon = signal.horizon
    shifted = u1.coeffs.copy()
    if u0 is not None:
        shifted = shifted - np.exp(1j * lam_modes * horizon) * u0.coeffs
    c = np.sqrt(TWO_PI) * shifted

    rep_lams = signal.family.rep_lambdas
    freq_max = float(np.max(np.abs(lam_modes)))
    t, w = oscillation_nodes(freq_max, horizon)
    # integrals[p, m] = int_0^T conj(q_p)(t) e^{-i lambda_m t} dt
    integrals = bilinear_phase_integrals(
        np.conj(signal.family.coeffs), rep_lams, lam_modes, t, w)

    off = shape.n_modes - n
    sub = shape.moment[off:off + 2 * n + 1, off:off + 2 * n + 1]
    weighted = signal.h_coeffs[:, None] * sub            # rows j, cols k
    collapsed = np.zeros((rep_lams.size, 2 * n + 1), dtype=complex)
    np.add.at(collapsed, signal.rep_of_mode, weighted)
    total = np.sum(collapsed * integrals, axis=0)
    return np.exp(1j * lam_modes * horizon) * total - c
