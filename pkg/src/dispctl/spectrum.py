"""Eigenvalue clustering, gap constants, and tail-pattern classification.

The generator acts diagonally with eigenvalues lambda_k = k a(k).  Repeated
eigenvalues are grouped into clusters; the tail pattern decides which
coefficient construction applies: label "I" when all large-|k| eigenvalues
are simple, "II" when they come as symmetric pairs {k, -k} sharing one value,
"inapplicable" otherwise.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousClusteringError, CriterionInapplicableError
from .symbols import PARITY_ODD, eigenvalues

CRITERION_I = "I"
CRITERION_II = "II"
CRITERION_NONE = "inapplicable"

DEFAULT_CLUSTER_TOL = 1e-9


@dataclass
class SpectrumAnalysis:
    """Clustered spectrum of one symbol at truncation N.

    clusters holds sorted mode lists partitioning -N..N; representatives one
    mode per cluster (smallest |k|, ties to the positive side); the profile
    entry at radius R is the minimal pairwise gap among representatives with
    |k| > R, the finite-truncation surrogate for the asymptotic gap.
    """

    n_modes: int
    lambdas: np.ndarray
    clusters: list
    representatives: list
    cluster_of: dict
    n0: int
    k1_star: int
    criterion: str
    gamma: float
    gamma_prime_profile: np.ndarray
    tol: float
    warnings: list = field(default_factory=list)

    @property
    def rep_lambdas(self):
        n = self.n_modes
        return self.lambdas[[r + n for r in self.representatives]]

    def lam(self, k):
        return float(self.lambdas[k + self.n_modes])


def _group_exact(lams, modes):
    seen = {}
    clusters = []
    for k, lam in zip(modes, lams):
        key = float(lam)
        if key in seen:
            clusters[seen[key]].append(int(k))
        else:
            seen[key] = len(clusters)
            clusters.append([int(k)])
    return [sorted(c) for c in clusters]


def _group_tolerance(lams, modes, tol):
    order = np.argsort(lams, kind="stable")
    clusters = []
    current = [int(modes[order[0]])]
    for prev, cur in zip(order[:-1], order[1:]):
        gap = abs(lams[cur] - lams[prev])
        scale = 1.0 + max(abs(lams[cur]), abs(lams[prev]))
        if gap <= tol * scale:
            current.append(int(modes[cur]))
        else:
            clusters.append(sorted(current))
            current = [int(modes[cur])]
    clusters.append(sorted(current))
    return sorted(clusters)


def _representative(cluster):
    return min(cluster, key=lambda k: (abs(k), -np.sign(k)))


def _pattern_onset(clusters, predicate):
    """Smallest K such that every cluster touching |k| >= K satisfies predicate."""
    worst = -1
    for c in clusters:
        if not predicate(c):
            worst = max(worst, max(abs(k) for k in c))
    return worst + 1


def cluster_spectrum(sym, n_modes, tol=DEFAULT_CLUSTER_TOL):
    """Group eigenvalues, classify the tail pattern, and compute gap data.

    Symbols declared with odd multiplier parity produce exactly paired
    eigenvalues, so they are grouped by exact equality; everything else uses
    a relative tolerance and is re-checked at tol/10, raising if the two
    groupings disagree rather than resolving the ambiguity silently.
    """
    if n_modes < 4:
        raise ValueError("n_modes must be at least 4")
    if tol <= 0:
        raise ValueError("tol must be positive")
    modes = np.arange(-n_modes, n_modes + 1)
    lams = eigenvalues(sym, n_modes)
    if sym.parity == PARITY_ODD:
        clusters = sorted(_group_exact(lams, modes))
    else:
        clusters = _group_tolerance(lams, modes, tol)
        refined = _group_tolerance(lams, modes, tol / 10.0)
        if refined != clusters:
            raise AmbiguousClusteringError(
                f"eigenvalue grouping for {sym.name} at N={n_modes} changes "
                f"between tol={tol:g} and tol={tol / 10:g}")

    n = n_modes
    lam_of = lambda k: lams[k + n]

    def is_singleton(c):
        return len(c) == 1

    def is_exact_pair(c):
        return (len(c) == 2 and c[0] == -c[1]
                and lam_of(c[0]) == lam_of(c[1]))

    onset_simple = _pattern_onset(clusters, is_singleton)
    onset_paired = _pattern_onset(clusters, is_exact_pair)
    if onset_simple <= n_modes:
        criterion, k1_star = CRITERION_I, onset_simple
    elif onset_paired <= n_modes:
        criterion, k1_star = CRITERION_II, onset_paired
    else:
        criterion, k1_star = CRITERION_NONE, n_modes + 1

    representatives = [_representative(c) for c in clusters]
    cluster_of = {k: i for i, c in enumerate(clusters) for k in c}
    analysis = SpectrumAnalysis(
        n_modes=n_modes, lambdas=lams, clusters=clusters,
        representatives=representatives, cluster_of=cluster_of,
        n0=max(len(c) for c in clusters), k1_star=k1_star,
        criterion=criterion, gamma=0.0,
        gamma_prime_profile=np.empty(0), tol=tol)
    analysis.gamma, analysis.gamma_prime_profile = gap_constants(analysis)
    return analysis


def gap_constants(analysis):
    """(gamma, profile): minimal representative gap and its exclusion profile.

    profile[R] is the minimal pairwise gap among representatives with |k| > R;
    it is non-decreasing in R and stops once fewer than two representatives
    remain.
    """
    reps = analysis.representatives
    if len(reps) < 2:
        raise ValueError("need at least two distinct eigenvalues for gap constants")
    rep_lams = analysis.rep_lambdas
    gamma = float(np.min(np.diff(np.sort(rep_lams))))
    profile = []
    for radius in range(0, analysis.n_modes - 1):
        sel = [lam for k, lam in zip(reps, rep_lams) if abs(k) > radius]
        if len(sel) < 2:
            break
        profile.append(float(np.min(np.diff(np.sort(sel)))))
    return gamma, np.asarray(profile)


def controllability_time(analysis, divergence_threshold=1e3, growth_factor=10.0):
    """Upper bound on the horizon needed at this truncation: 2 pi / residual gap.

    Returns 0.0 (any positive horizon) when the gap profile is judged
    divergent: either its final value exceeds divergence_threshold, or it has
    grown monotonically by at least growth_factor overall and is still
    growing across the upper half of the radii.
    """
    if analysis.criterion not in (CRITERION_I, CRITERION_II):
        raise CriterionInapplicableError(
            f"cannot bound a control horizon: eigenvalue pattern is "
            f"{analysis.criterion}")
    profile = analysis.gamma_prime_profile
    if profile.size == 0:
        raise ValueError("empty gap profile")
    last = float(profile[-1])
    if last >= divergence_threshold:
        return 0.0
    non_decreasing = bool(np.all(np.diff(profile) >= 0.0))
    grew = last >= growth_factor * float(profile[0]) and last > float(
        profile[profile.size // 2])
    if non_decreasing and grew:
        return 0.0
    return float(2.0 * np.pi / last)
